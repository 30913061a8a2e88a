//! Graded invariants of a presentation: initial forms of the relators, the
//! ideal they generate in `gr(S)`, a Hilbert-series test for strong freeness
//! and the quadratic / quadratically-defined verdicts.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::graded::{u_dim, GradedElement};
use crate::linalg::{echelonize_rows, EchelonBasis};
use crate::presentation::{minimality_check, Presentation};
use crate::series::{TruncationContext, Weight};
use crate::verifier::{layered_closure, ClosureMode, ClosureOptions, LayerBasis};

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct InitialForm {
    pub relator: usize,
    pub degree: usize,
    pub form: GradedElement,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct InitialFormSet {
    #[serde(skip)]
    ctx: TruncationContext,
    pub forms: Vec<InitialForm>,
}

impl InitialFormSet {
    pub fn new(ctx: TruncationContext, forms: Vec<InitialForm>) -> Self {
        Self { ctx, forms }
    }

    pub fn ctx(&self) -> TruncationContext {
        self.ctx
    }

    pub fn degrees(&self) -> Vec<usize> {
        self.forms.iter().map(|f| f.degree).collect()
    }

    /// Every initial form has degree 2 (and there is at least one).
    pub fn is_quadratic(&self) -> bool {
        !self.forms.is_empty() && self.forms.iter().all(|f| f.degree == 2)
    }

    pub fn is_empty(&self) -> bool {
        self.forms.is_empty()
    }
}

/// Initial form and degree of every relator.
pub fn initial_forms(pr: &Presentation) -> Result<InitialFormSet> {
    let ctx = pr.ctx()?;
    let mut forms = Vec::new();
    for (i, g) in pr.relator_elements()?.iter().enumerate() {
        let Weight::Finite(degree) = g.weight() else {
            return Err(Error::IdentityRelator {
                index: i,
                truncation: pr.truncation,
            });
        };
        let form = g.initial_form()?;
        if !form.is_lie_element()? {
            return Err(Error::InternalInvariantViolation(format!(
                "initial form of relator {i} is outside gr_{degree}(S)"
            )));
        }
        forms.push(InitialForm {
            relator: i,
            degree,
            form,
        });
    }
    Ok(InitialFormSet { ctx, forms })
}

/// Per-degree bases `I_1..I_N` of an ideal of `gr(S)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GradedIdeal {
    ctx: TruncationContext,
    layers: Vec<EchelonBasis>,
}

impl GradedIdeal {
    pub fn ctx(&self) -> TruncationContext {
        self.ctx
    }

    pub fn truncation(&self) -> usize {
        self.layers.len()
    }

    /// Basis of `I_n`, `1 <= n <= truncation`.
    pub fn layer(&self, n: usize) -> &EchelonBasis {
        &self.layers[n - 1]
    }

    pub fn dims(&self) -> Vec<usize> {
        self.layers.iter().map(|l| l.rank()).collect()
    }
}

/// Smallest graded subspace containing the forms and closed under
/// `[-, x_k]` and multiplication by `π`; since `ad` of any element of `gr(S)`
/// lies in the algebra generated by the `ad(x_k)` and `π`, this is the ideal
/// of `gr(S)` generated by the forms.
pub fn graded_ideal(forms: &InitialFormSet, truncation: usize) -> Result<GradedIdeal> {
    let ctx = forms.ctx;
    if truncation > ctx.truncation() {
        return Err(Error::DegreeOverflow {
            degree: truncation,
            max: ctx.truncation(),
        });
    }
    let gens: Vec<GradedElement> = (0..ctx.d())
        .map(|i| GradedElement::generator(ctx, i))
        .collect::<Result<_>>()?;
    let mut layers: Vec<EchelonBasis> = Vec::with_capacity(truncation);
    for n in 1..=truncation {
        let mut rows: Vec<Vec<u64>> = forms
            .forms
            .iter()
            .filter(|f| f.degree == n)
            .map(|f| f.form.coeffs().to_vec())
            .collect();
        if n >= 2 {
            for row in layers[n - 2].rows() {
                let b = GradedElement::from_coeffs(ctx, n - 1, row.clone())?;
                rows.push(b.pi_times()?.coeffs().to_vec());
                for x in &gens {
                    rows.push(b.bracket(x)?.coeffs().to_vec());
                }
            }
        }
        layers.push(echelonize_rows(ctx.p(), u_dim(ctx, n)?, rows)?);
    }
    Ok(GradedIdeal { ctx, layers })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum StrongFreeness {
    StronglyFreeToDegree {
        degree: usize,
    },
    NotStronglyFree {
        first_mismatch: usize,
    },
    /// The target series has a negative coefficient where the comparison
    /// first fails, so it is not a Hilbert series at all.
    TargetDegenerate {
        degree: usize,
    },
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct HilbertVerdict {
    /// `dim (U/J)_n` for `n = 0..=N`, `J` the two-sided ideal of the forms.
    pub computed: Vec<usize>,
    /// Coefficients of `1/((1-t)(1-dt+Σ t^{e_i}))`.
    pub target: Vec<i64>,
    pub verdict: StrongFreeness,
}

impl HilbertVerdict {
    pub fn is_strongly_free(&self) -> bool {
        matches!(self.verdict, StrongFreeness::StronglyFreeToDegree { .. })
    }
}

/// Coefficients `0..=n` of `1/((1-t)(1-dt+Σ t^{e_i}))`.
pub fn target_series(d: usize, degrees: &[usize], n: usize) -> Vec<i64> {
    let mut inner = vec![0i64; n + 1];
    inner[0] = 1;
    if n >= 1 {
        inner[1] -= d as i64;
    }
    for &e in degrees {
        if e <= n {
            inner[e] += 1;
        }
    }
    // multiply by (1 - t)
    let denom: Vec<i64> = (0..=n)
        .map(|k| inner[k] - if k > 0 { inner[k - 1] } else { 0 })
        .collect();
    let mut out = vec![0i64; n + 1];
    out[0] = 1;
    for k in 1..=n {
        out[k] = -(1..=k).map(|j| denom[j] * out[k - j]).sum::<i64>();
    }
    out
}

/// Dimensions of `(U/J)_n`, `J` the two-sided ideal generated by the forms,
/// for `n = 0..=truncation`.
pub fn quotient_dims(forms: &InitialFormSet, truncation: usize) -> Result<Vec<usize>> {
    let ctx = forms.ctx;
    if truncation > ctx.truncation() {
        return Err(Error::DegreeOverflow {
            degree: truncation,
            max: ctx.truncation(),
        });
    }
    let gens: Vec<GradedElement> = (0..ctx.d())
        .map(|i| GradedElement::generator(ctx, i))
        .collect::<Result<_>>()?;
    let mut dims = vec![1];
    let mut prev: Option<EchelonBasis> = None;
    for n in 1..=truncation {
        let mut rows: Vec<Vec<u64>> = forms
            .forms
            .iter()
            .filter(|f| f.degree == n)
            .map(|f| f.form.coeffs().to_vec())
            .collect();
        if let Some(prev) = &prev {
            for row in prev.rows() {
                let b = GradedElement::from_coeffs(ctx, n - 1, row.clone())?;
                rows.push(b.pi_times()?.coeffs().to_vec());
                for x in &gens {
                    rows.push(x.mul(&b)?.coeffs().to_vec());
                    rows.push(b.mul(x)?.coeffs().to_vec());
                }
            }
        }
        let dim = u_dim(ctx, n)?;
        let basis = echelonize_rows(ctx.p(), dim, rows)?;
        dims.push(dim - basis.rank());
        prev = Some(basis);
    }
    Ok(dims)
}

/// Compares the quotient dimensions with the target series.
pub fn strongly_free_test(forms: &InitialFormSet, truncation: usize) -> Result<HilbertVerdict> {
    let computed = quotient_dims(forms, truncation)?;
    let target = target_series(forms.ctx.d(), &forms.degrees(), truncation);
    let mismatch = (0..=truncation).find(|&k| computed[k] as i64 != target[k]);
    let verdict = match mismatch {
        None => StrongFreeness::StronglyFreeToDegree { degree: truncation },
        Some(k) if target[k] < 0 => StrongFreeness::TargetDegenerate { degree: k },
        Some(k) => StrongFreeness::NotStronglyFree { first_mismatch: k },
    };
    Ok(HilbertVerdict {
        computed,
        target,
        verdict,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum QuadraticVerdict {
    /// No relators.
    RTrivial,
    /// Quadratic with strongly free initial forms.
    QuadraticallyDefinedStronglyFree,
    /// Quadratic, and the ideal of the forms equals `gr(R)_ind` through `N`.
    QuadraticallyDefinedGroupCertified,
    NotQuadratic,
    Inconclusive,
}

impl QuadraticVerdict {
    pub fn is_quadratically_defined(self) -> bool {
        matches!(
            self,
            QuadraticVerdict::QuadraticallyDefinedStronglyFree
                | QuadraticVerdict::QuadraticallyDefinedGroupCertified
        )
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct QuadraticReport {
    pub truncation: usize,
    pub quadratic: bool,
    pub verdict: QuadraticVerdict,
    pub hilbert: Option<HilbertVerdict>,
    /// `dim I_n` for `n = 1..=N`.
    pub ideal_dims: Vec<usize>,
    /// `dim gr_n(R)_ind` for `n = 1..=N`.
    pub induced_dims: Vec<usize>,
    pub note: String,
}

/// Quadratic / quadratically-defined verdict, certified through the
/// truncation degree.
pub fn quadratic_verdict(pr: &Presentation) -> Result<QuadraticReport> {
    let forms = initial_forms(pr)?;
    let ctx = pr.ctx()?;
    let r = layered_closure(
        ctx,
        &pr.relator_elements()?,
        ClosureMode::NormalClosure,
        ClosureOptions::default(),
    )?;
    let weight_ok = minimality_check(pr)?.weight_condition;
    quadratic_verdict_from(&forms, &r, weight_ok)
}

/// Same as [`quadratic_verdict`] from precomputed pieces; `relation_layers`
/// are the layers of the normal closure of the relators.
pub fn quadratic_verdict_from(
    forms: &InitialFormSet,
    relation_layers: &LayerBasis,
    weight_condition: bool,
) -> Result<QuadraticReport> {
    let n = forms.ctx.truncation();
    let ideal = graded_ideal(forms, n)?;
    let ideal_dims = ideal.dims();
    let induced_dims = relation_layers.dims();
    let quadratic = forms.is_quadratic();
    let mut hilbert = None;
    let (verdict, note) = if forms.is_empty() {
        (QuadraticVerdict::RTrivial, "R = 1".to_string())
    } else if !weight_condition {
        (
            QuadraticVerdict::Inconclusive,
            "presentation fails R ⊂ S^(2); verdict requires a minimal presentation".to_string(),
        )
    } else if !quadratic {
        (
            QuadraticVerdict::NotQuadratic,
            format!("initial form degrees {:?} are not all 2", forms.degrees()),
        )
    } else {
        let h = strongly_free_test(forms, n)?;
        let strongly_free = h.is_strongly_free();
        hilbert = Some(h);
        if strongly_free {
            (
                QuadraticVerdict::QuadraticallyDefinedStronglyFree,
                format!("initial forms strongly free through degree {n} (sufficient condition)"),
            )
        } else if ideal_matches(&ideal, relation_layers)? {
            (
                QuadraticVerdict::QuadraticallyDefinedGroupCertified,
                format!("ideal of initial forms equals gr(R)_ind through degree {n}"),
            )
        } else {
            (
                QuadraticVerdict::Inconclusive,
                "forms not strongly free and their ideal is smaller than gr(R)_ind".to_string(),
            )
        }
    };
    Ok(QuadraticReport {
        truncation: n,
        quadratic,
        verdict,
        hilbert,
        ideal_dims,
        induced_dims,
        note,
    })
}

/// `I_n = gr_n(R)_ind` for every `n <= N` (containment plus equal dimension).
pub fn ideal_matches(ideal: &GradedIdeal, relation_layers: &LayerBasis) -> Result<bool> {
    for n in 1..=ideal.truncation() {
        let target = relation_layers.echelon(n);
        if ideal.layer(n).rank() != target.rank() || !ideal.layer(n).is_subspace_of(&target)? {
            return Ok(false);
        }
    }
    Ok(true)
}
