//! Layered bases of subgroups of `S/S^(N+1)` and the chains `R^(n,S)`.
//!
//! A subgroup `H` is described layer by layer: layer `n` is the subspace
//! `(H ∩ S^(n))S^(n+1)/S^(n+1)` of `gr_n(S) ⊂ U_n`, kept as echelon rows of
//! initial forms together with a representative group element per row.
//! Every element of `H` is then a product, layers in decreasing degree, of
//! powers of representatives.
//!
//! The closure is a worklist: each candidate is sifted through the layers;
//! a nonzero residual becomes a new representative, and its p-th power and
//! its commutators with the existing representatives (and with the
//! generators of `S`, for normal closures) are queued. When the queue is
//! empty those products all sift to 1, which makes the set of normal-form
//! products a subgroup.
//!
//! Equalities derived from layer data hold modulo `S^(N+1)` only. A gap, i.e.
//! an element of `R ∩ S^(n+1)` whose initial form is outside the layer of
//! `R^(n,S)`, is a genuine non-membership certificate.

use std::collections::{HashMap, VecDeque};
use std::sync::{Arc, Mutex, OnceLock};

use serde::Serialize;

use crate::arith::{inv_mod_prime, mul_mod};
use crate::error::{Error, Result};
use crate::graded::{u_dim, GradedElement};
use crate::linalg::{EchelonBasis, RowReducer};
use crate::presentation::Presentation;
use crate::series::{GroupElement, TruncationContext, Weight};

pub const DEFAULT_MAX_CANDIDATES: usize = 1_000_000;

#[derive(Debug, Clone)]
struct Layer {
    reducer: RowReducer,
    reps: Vec<GroupElement>,
}

/// Per-degree initial-form bases of a subgroup, with representatives.
#[derive(Debug, Clone)]
pub struct LayerBasis {
    ctx: TruncationContext,
    // index n-1 holds degree n
    layers: Vec<Layer>,
}

/// Outcome of sifting an element through a [`LayerBasis`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Sifted {
    /// Reduced to 1 modulo `S^(N+1)`.
    Trivial,
    /// Stuck at `degree`: `element` has that weight and its initial form
    /// reduces to the nonzero `residual` against the layer.
    Residual {
        element: GroupElement,
        degree: usize,
        residual: Vec<u64>,
    },
}

impl LayerBasis {
    pub fn empty(ctx: TruncationContext) -> Self {
        let layers = (1..=ctx.truncation())
            .map(|n| Layer {
                reducer: RowReducer::new(ctx.p(), u_dim(ctx, n).expect("n <= N")),
                reps: Vec::new(),
            })
            .collect();
        Self { ctx, layers }
    }

    pub fn ctx(&self) -> TruncationContext {
        self.ctx
    }

    pub fn truncation(&self) -> usize {
        self.ctx.truncation()
    }

    fn layer(&self, n: usize) -> &Layer {
        &self.layers[n - 1]
    }

    /// Dimension of layer `n`, `1 <= n <= N`.
    pub fn dim(&self, n: usize) -> usize {
        self.layer(n).reps.len()
    }

    /// Dimensions of layers `1..=N`.
    pub fn dims(&self) -> Vec<usize> {
        self.layers.iter().map(|l| l.reps.len()).collect()
    }

    pub fn total_dim(&self) -> usize {
        self.layers.iter().map(|l| l.reps.len()).sum()
    }

    /// Reduced row-echelon basis of layer `n`.
    pub fn echelon(&self, n: usize) -> EchelonBasis {
        self.layer(n).reducer.to_basis()
    }

    /// Stored rows of layer `n`, in insertion order; row `i` is the initial
    /// form of `representatives(n)[i]`.
    pub fn rows(&self, n: usize) -> &[Vec<u64>] {
        self.layer(n).reducer.rows()
    }

    pub fn representatives(&self, n: usize) -> &[GroupElement] {
        &self.layer(n).reps
    }

    /// All representatives, by degree then insertion order.
    pub fn all_representatives(&self) -> impl Iterator<Item = &GroupElement> {
        self.layers.iter().flat_map(|l| l.reps.iter())
    }

    /// Sifts `g` through the layers.
    pub fn sift(&self, g: &GroupElement) -> Sifted {
        let mut g = g.clone();
        loop {
            let Weight::Finite(n) = g.weight() else {
                return Sifted::Trivial;
            };
            let form = g.initial_form().expect("weight is finite");
            let layer = self.layer(n);
            let (residual, coeffs) = layer.reducer.reduce(form.coeffs());
            let mut q = GroupElement::identity(self.ctx);
            for (rep, &c) in layer.reps.iter().zip(&coeffs) {
                if c != 0 {
                    q = q.mul(&rep.pow(c as i64));
                }
            }
            g = g.mul(&q.inv());
            if residual.iter().any(|&x| x != 0) {
                // g now has the same weight, with initial form `residual`
                return Sifted::Residual {
                    element: g,
                    degree: n,
                    residual,
                };
            }
        }
    }

    /// Layerwise subspace containment `self ⊆ other`.
    pub fn is_subspace_of(&self, other: &LayerBasis) -> bool {
        (1..=self.truncation()).all(|n| {
            self.rows(n)
                .iter()
                .all(|r| other.layer(n).reducer.reduce(r).0.iter().all(|&x| x == 0))
        })
    }

    fn insert(&mut self, degree: usize, element: GroupElement, residual: &[u64]) -> GroupElement {
        let p = self.ctx.p();
        let lead = *residual
            .iter()
            .find(|&&x| x != 0)
            .expect("nonzero residual");
        let k = inv_mod_prime(lead, p);
        let rep = element.pow(k as i64);
        let row: Vec<u64> = residual.iter().map(|&x| mul_mod(x, k, p)).collect();
        debug_assert_eq!(rep.initial_form().unwrap().coeffs(), &row[..]);
        let layer = &mut self.layers[degree - 1];
        layer.reducer.push_normalized(row);
        layer.reps.push(rep.clone());
        rep
    }
}

/// Which operations the closure is stable under.
#[derive(Debug, Clone, Copy)]
pub enum ClosureMode<'a> {
    /// The subgroup generated by the seeds.
    Subgroup,
    /// The normal closure of the seeds in `S`.
    NormalClosure,
    /// `X^p[X,S]` where `X` is the normal closure of the seeds.
    FrattiniStep,
    /// Like `FrattiniStep`, seeded with the representatives of `X`.
    FrattiniStepOf(&'a LayerBasis),
}

#[derive(Debug, Clone, Copy)]
pub struct ClosureOptions {
    /// Upper bound on sifted candidates; exceeding it is an error.
    pub max_candidates: usize,
}

impl Default for ClosureOptions {
    fn default() -> Self {
        Self {
            max_candidates: DEFAULT_MAX_CANDIDATES,
        }
    }
}

/// Layered basis of the subgroup described by `seeds` and `mode`.
pub fn layered_closure(
    ctx: TruncationContext,
    seeds: &[GroupElement],
    mode: ClosureMode<'_>,
    opts: ClosureOptions,
) -> Result<LayerBasis> {
    let generators: Vec<GroupElement> = (0..ctx.d())
        .map(|i| GroupElement::generator(ctx, i))
        .collect::<Result<_>>()?;
    let (seeds, normal): (Vec<GroupElement>, bool) = match mode {
        ClosureMode::Subgroup => (seeds.to_vec(), false),
        ClosureMode::NormalClosure => (seeds.to_vec(), true),
        ClosureMode::FrattiniStep => (frattini_seeds(ctx, seeds, &generators), true),
        ClosureMode::FrattiniStepOf(x) => {
            let reps: Vec<GroupElement> = x.all_representatives().cloned().collect();
            (frattini_seeds(ctx, &reps, &generators), true)
        }
    };

    let n_max = ctx.truncation();
    let mut basis = LayerBasis::empty(ctx);
    let mut queue: VecDeque<GroupElement> = seeds.into_iter().collect();
    let mut processed = 0usize;
    while let Some(g) = queue.pop_front() {
        processed += 1;
        if processed > opts.max_candidates {
            return Err(Error::ResourceCap {
                cap: opts.max_candidates,
            });
        }
        let Sifted::Residual {
            element,
            degree,
            residual,
        } = basis.sift(&g)
        else {
            continue;
        };
        // products are queued before inserting so the new element is not
        // paired with itself
        let existing: Vec<(usize, GroupElement)> = (1..=n_max)
            .filter(|m| degree + m <= n_max)
            .flat_map(|m| basis.representatives(m).iter().map(move |r| (m, r.clone())))
            .collect();
        let rep = basis.insert(degree, element, &residual);
        if degree < n_max {
            queue.push_back(rep.pow(ctx.p() as i64));
            if normal {
                for s in &generators {
                    queue.push_back(rep.comm(s));
                }
            }
        }
        for (_, other) in existing {
            queue.push_back(rep.comm(&other));
        }
    }
    Ok(basis)
}

fn frattini_seeds(
    ctx: TruncationContext,
    xs: &[GroupElement],
    generators: &[GroupElement],
) -> Vec<GroupElement> {
    let mut out = Vec::new();
    for x in xs {
        out.push(x.pow(ctx.p() as i64));
        for s in generators {
            out.push(x.comm(s));
        }
    }
    out
}

/// Layered basis of all of `S/S^(N+1)`, shared per context.
pub(crate) fn free_group_layers(ctx: TruncationContext) -> Result<Arc<LayerBasis>> {
    static CACHE: OnceLock<Mutex<HashMap<TruncationContext, Arc<LayerBasis>>>> = OnceLock::new();
    let cache = CACHE.get_or_init(|| Mutex::new(HashMap::new()));
    if let Some(hit) = cache.lock().expect("cache lock").get(&ctx) {
        return Ok(hit.clone());
    }
    // computed outside the lock; a concurrent duplicate computation is harmless
    let gens: Vec<GroupElement> = (0..ctx.d())
        .map(|i| GroupElement::generator(ctx, i))
        .collect::<Result<_>>()?;
    let layers = Arc::new(layered_closure(
        ctx,
        &gens,
        ClosureMode::Subgroup,
        ClosureOptions::default(),
    )?);
    Ok(cache
        .lock()
        .expect("cache lock")
        .entry(ctx)
        .or_insert(layers)
        .clone())
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "result", rename_all = "kebab-case")]
pub enum Membership {
    /// `g ∈ H·S^(N+1)`.
    InUpToTruncation,
    /// `g ∉ H`, witnessed by a residual initial form outside the layer.
    NotIn {
        degree: usize,
        residual: GradedElement,
    },
}

pub fn membership_mod_truncation(g: &GroupElement, h: &LayerBasis) -> Result<Membership> {
    if g.is_identity() {
        return Err(Error::IdentityElement(g.ctx().truncation()));
    }
    match h.sift(g) {
        Sifted::Trivial => Ok(Membership::InUpToTruncation),
        Sifted::Residual {
            degree, residual, ..
        } => Ok(Membership::NotIn {
            degree,
            residual: GradedElement::from_coeffs(h.ctx(), degree, residual)?,
        }),
    }
}

/// The relation subgroup `R` and its chain `R = R^(1,S) ⊇ R^(2,S) ⊇ …`.
#[derive(Debug, Clone)]
pub struct RSeries {
    ctx: TruncationContext,
    relators: LayerBasis,
    // index n-1 holds R^(n,S)
    chain: Vec<LayerBasis>,
}

impl RSeries {
    pub fn ctx(&self) -> TruncationContext {
        self.ctx
    }

    /// Layers of `R`; layer `m >= k` of `R` is layer `m` of `R ∩ S^(k)`.
    pub fn relation_subgroup(&self) -> &LayerBasis {
        &self.relators
    }

    /// `R^(n,S)` for `1 <= n <= max_n()`.
    pub fn chain(&self, n: usize) -> &LayerBasis {
        &self.chain[n - 1]
    }

    pub fn max_n(&self) -> usize {
        self.chain.len()
    }

    /// `dim gr_n(G) = dim gr_n(S) - dim gr_n(R)_ind` for `n = 1..=N`.
    pub fn quotient_dims(&self) -> Result<Vec<usize>> {
        let free = free_group_layers(self.ctx)?;
        Ok((1..=self.ctx.truncation())
            .map(|n| free.dim(n) - self.relators.dim(n))
            .collect())
    }
}

/// `r_series_to(pr, N - 1)`.
pub fn r_series(pr: &Presentation) -> Result<RSeries> {
    r_series_to(pr, pr.truncation - 1)
}

/// `R^(n,S)` for `n <= max_n`; `max_n` must be below the truncation since
/// `R^(n,S) ⊂ S^(n+1)`.
pub fn r_series_to(pr: &Presentation, max_n: usize) -> Result<RSeries> {
    r_series_with(pr, max_n, ClosureOptions::default())
}

pub fn r_series_with(pr: &Presentation, max_n: usize, opts: ClosureOptions) -> Result<RSeries> {
    let ctx = pr.ctx()?;
    if max_n >= ctx.truncation() || max_n == 0 {
        return Err(Error::TruncationExhausted {
            n: max_n,
            truncation: ctx.truncation(),
        });
    }
    let seeds = pr.relator_elements()?;
    let relators = layered_closure(ctx, &seeds, ClosureMode::NormalClosure, opts)?;
    let mut chain = vec![relators.clone()];
    for _ in 1..max_n {
        let next = layered_closure(
            ctx,
            &[],
            ClosureMode::FrattiniStepOf(chain.last().unwrap()),
            opts,
        )?;
        chain.push(next);
    }
    Ok(RSeries {
        ctx,
        relators,
        chain,
    })
}

/// Drop-one test for one relator: is `r_i` outside the normal closure of
/// the other relators times `R^p[R,S]`?
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct DropOne {
    pub relator: usize,
    /// Certified: `r_i` sifts to a nonzero residual.
    pub independent: bool,
    /// Degree of the residual when independent.
    pub degree: Option<usize>,
}

/// Independence of the relators in `R/R^p[R,S]` by drop-one tests. An
/// `independent` answer is unconditional; a dependent one holds modulo
/// `S^(N+1)` only.
pub fn drop_one_independence(pr: &Presentation, opts: ClosureOptions) -> Result<Vec<DropOne>> {
    let ctx = pr.ctx()?;
    let relators = pr.relator_elements()?;
    let r = layered_closure(ctx, &relators, ClosureMode::NormalClosure, opts)?;
    let frattini = layered_closure(ctx, &[], ClosureMode::FrattiniStepOf(&r), opts)?;
    let frattini_reps: Vec<GroupElement> = frattini.all_representatives().cloned().collect();
    (0..relators.len())
        .map(|i| {
            let mut seeds: Vec<GroupElement> = relators
                .iter()
                .enumerate()
                .filter(|&(j, _)| j != i)
                .map(|(_, g)| g.clone())
                .collect();
            seeds.extend(frattini_reps.iter().cloned());
            let h = layered_closure(ctx, &seeds, ClosureMode::NormalClosure, opts)?;
            Ok(match h.sift(&relators[i]) {
                Sifted::Trivial => DropOne {
                    relator: i,
                    independent: false,
                    degree: None,
                },
                Sifted::Residual { degree, .. } => DropOne {
                    relator: i,
                    independent: true,
                    degree: Some(degree),
                },
            })
        })
        .collect()
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct DegreeComparison {
    pub degree: usize,
    /// `dim` of the `R^(n,S)` layer.
    pub chain_dim: usize,
    /// `dim` of the `R ∩ S^(n+1)` layer.
    pub intersection_dim: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ChainComparison {
    pub n: usize,
    pub degrees: Vec<DegreeComparison>,
    /// First degree where `R ∩ S^(n+1)` is strictly larger.
    pub gap_degree: Option<usize>,
    pub annotation: Option<String>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum EqualityVerdict {
    /// Layer data agree for every `n < N` through degree `N`.
    EqualToDegree { degree: usize },
    /// `R^(n,S) ≠ R ∩ S^(n+1)`, witnessed in `degree <= N`.
    Gap { n: usize, degree: usize },
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct EqualityReport {
    pub truncation: usize,
    pub comparisons: Vec<ChainComparison>,
    pub verdict: EqualityVerdict,
    pub disclaimer: String,
}

impl EqualityReport {
    pub fn gap_for(&self, n: usize) -> Option<usize> {
        self.comparisons
            .iter()
            .find(|c| c.n == n)
            .and_then(|c| c.gap_degree)
    }
}

/// Annotation for a gap in the comparison at `n`.
pub fn gap_annotation(n: usize) -> Option<&'static str> {
    match n {
        2 => Some(
            "violates R^p[R,S] = R^(2,S) = R∩S^(3), which holds whenever h_2 is surjective (every G_F(p) with ζ_p ∈ F)",
        ),
        3 => Some("violates R^(3,S) = R∩S^(4), which holds for every G_F(p) with ζ_p ∈ F"),
        _ => None,
    }
}

/// Compares `R^(n,S)` with `R ∩ S^(n+1)` layer by layer for `n < N`.
/// Requires `R ⊂ S^(2)`.
pub fn equality_report(pr: &Presentation) -> Result<EqualityReport> {
    compare_series(&r_series(pr)?)
}

pub fn compare_series(series: &RSeries) -> Result<EqualityReport> {
    let n_trunc = series.ctx.truncation();
    let r = series.relation_subgroup();
    if r.dim(1) > 0 {
        return Err(Error::RelatorsOutsideFrattini);
    }
    let mut comparisons = Vec::new();
    let mut verdict = EqualityVerdict::EqualToDegree { degree: n_trunc };
    for n in 1..=series.max_n() {
        let chain = series.chain(n);
        let mut degrees = Vec::new();
        let mut gap_degree = None;
        for k in 1..=n_trunc {
            if k <= n {
                if chain.dim(k) != 0 {
                    return Err(Error::InternalInvariantViolation(format!(
                        "R^({n},S) has a layer in degree {k} <= {n}"
                    )));
                }
                continue;
            }
            let target = r.echelon(k);
            for row in chain.rows(k) {
                if !target.contains(row)? {
                    return Err(Error::InternalInvariantViolation(format!(
                        "R^({n},S) layer {k} is not contained in R∩S^({})",
                        n + 1
                    )));
                }
            }
            let (cd, id) = (chain.dim(k), r.dim(k));
            if cd < id && gap_degree.is_none() {
                gap_degree = Some(k);
            }
            degrees.push(DegreeComparison {
                degree: k,
                chain_dim: cd,
                intersection_dim: id,
            });
        }
        if let (Some(k), EqualityVerdict::EqualToDegree { .. }) = (gap_degree, verdict) {
            verdict = EqualityVerdict::Gap { n, degree: k };
        }
        comparisons.push(ChainComparison {
            n,
            degrees,
            gap_degree,
            annotation: gap_degree.and(gap_annotation(n)).map(str::to_string),
        });
    }
    let disclaimer = match verdict {
        EqualityVerdict::EqualToDegree { degree } => format!(
            "equalities certified up to truncation: layer data agree modulo S^({})",
            degree + 1
        ),
        EqualityVerdict::Gap { .. } => {
            "gap is unconditional: the witness lies in R∩S^(n+1) but not in R^(n,S)".to_string()
        }
    };
    Ok(EqualityReport {
        truncation: n_trunc,
        comparisons,
        verdict,
        disclaimer,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::presentation::Presentation;

    #[test]
    fn drop_one_tests() {
        let pr = Presentation::from_strings(3, &["a", "b"], &["a^3", "b^3"], 4).unwrap();
        let res = drop_one_independence(&pr, ClosureOptions::default()).unwrap();
        assert!(res.iter().all(|d| d.independent && d.degree == Some(2)));
        // a^9 lies in R^p for R = <a^3>
        let pr = Presentation::from_strings(3, &["a", "b"], &["a^3", "a^9"], 4).unwrap();
        let res = drop_one_independence(&pr, ClosureOptions::default()).unwrap();
        assert!(res[0].independent);
        assert!(!res[1].independent);
    }

    #[test]
    fn cyclic_power_closure() {
        let ctx = TruncationContext::new(2, 1, 4).unwrap();
        let s = GroupElement::generator(ctx, 0).unwrap();
        let h = layered_closure(
            ctx,
            &[s.pow(4)],
            ClosureMode::NormalClosure,
            ClosureOptions::default(),
        )
        .unwrap();
        assert_eq!(h.dims(), vec![0, 0, 1, 1]);
        let form = h.representatives(3)[0].initial_form().unwrap();
        assert_eq!(form.to_string(), "pi*x1*x1 + pi^2*x1");
    }

    #[test]
    fn triple_commutator_closure() {
        let ctx = TruncationContext::new(3, 3, 3).unwrap();
        let s: Vec<_> = (0..3)
            .map(|i| GroupElement::generator(ctx, i).unwrap())
            .collect();
        let seed = s[0].comm(&s[1]).comm(&s[2]);
        let h = layered_closure(
            ctx,
            &[seed],
            ClosureMode::NormalClosure,
            ClosureOptions::default(),
        )
        .unwrap();
        assert_eq!(h.dims(), vec![0, 0, 1]);
    }

    #[test]
    fn empty_seed() {
        let ctx = TruncationContext::new(5, 2, 4).unwrap();
        let h = layered_closure(
            ctx,
            &[],
            ClosureMode::NormalClosure,
            ClosureOptions::default(),
        )
        .unwrap();
        assert_eq!(h.dims(), vec![0; 4]);
    }

    #[test]
    fn cap_is_enforced() {
        let ctx = TruncationContext::new(3, 2, 4).unwrap();
        let gens: Vec<_> = (0..2)
            .map(|i| GroupElement::generator(ctx, i).unwrap())
            .collect();
        let err = layered_closure(
            ctx,
            &gens,
            ClosureMode::Subgroup,
            ClosureOptions { max_candidates: 3 },
        )
        .unwrap_err();
        assert_eq!(err, Error::ResourceCap { cap: 3 });
    }

    #[test]
    fn truncation_exhausted() {
        let pr = Presentation::from_strings(3, &["s"], &["s^3"], 3).unwrap();
        assert!(matches!(
            r_series_to(&pr, 3),
            Err(Error::TruncationExhausted { .. })
        ));
        assert_eq!(r_series_to(&pr, 2).unwrap().max_n(), 2);
    }
}
