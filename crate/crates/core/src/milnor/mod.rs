//! Milnor K-theory mod p of finite fields, presented by norm relations.
//!
//! `l_n F` is `(F*/F*^p)^{⊗n}` modulo the span of the tensors
//! `[a_1]⊗…⊗[a_n]` where `a_1` is a norm from `F(a_j^{1/p})` for some `j ≥ 2`.
//! Everything is computed by exhaustive enumeration inside `F_{q^p}`, which
//! is the Kummer extension `F_q(a^{1/p})` for every non-`p`-th power `a`.

mod field;

use std::collections::{HashMap, HashSet};
use std::sync::OnceLock;

use serde::Serialize;

pub use field::{Elem, FiniteField};

use crate::arith::{checked_pow, is_prime, prime_power};
use crate::error::{Error, Result};
use crate::linalg::{echelonize_rows, EchelonBasis};

/// Upper bound on `q^p`, the size of the enumerated extension field.
pub const FIELD_CAP: u64 = 1_000_000;

/// Upper bound on the number of class tuples scanned for norm relations.
pub const TUPLE_CAP: u64 = 1_000_000;

/// Parses `Fq:<q>` and returns `q`.
pub fn parse_field_descriptor(text: &str) -> Result<u64> {
    let bad = || Error::BadFieldDescriptor(text.to_string());
    let q: u64 = text
        .trim()
        .strip_prefix("Fq:")
        .ok_or_else(bad)?
        .trim()
        .parse()
        .map_err(|_| bad())?;
    prime_power(q).ok_or_else(bad)?;
    Ok(q)
}

/// `F_q` with a fixed enumeration of `F_q*` and a basis of `F_q*/F_q*^p`,
/// realized as the subfield `{x : x^q = x}` of `F_{q^p}`.
#[derive(Debug)]
pub struct FieldAdapter {
    q: u64,
    p: u64,
    big: FiniteField,
    units: Vec<Elem>,
    generator: Elem,
    gen_log: HashMap<Elem, u64>,
    pth_powers: Vec<Elem>,
    basis: Vec<Elem>,
    coords: HashMap<Elem, Vec<u64>>,
    norm_image: OnceLock<EchelonBasis>,
}

impl FieldAdapter {
    pub fn new(q: u64, p: u64) -> Result<Self> {
        Self::with_stride(q, p, 1)
    }

    pub fn from_descriptor(text: &str, p: u64) -> Result<Self> {
        Self::new(parse_field_descriptor(text)?, p)
    }

    /// Enumerates `F_q*` as `u_0, u_s, u_{2s}, …` (indices mod `q−1`), where
    /// `u_i` is the natural order. `stride` must be coprime to `q−1`. The
    /// greedy basis of `F*/F*^p` depends on this order.
    pub fn with_stride(q: u64, p: u64, stride: u64) -> Result<Self> {
        let (l, _) = prime_power(q).ok_or(Error::BadFieldDescriptor(format!("Fq:{q}")))?;
        if !is_prime(p) {
            return Err(Error::NonPrimeP(p));
        }
        if (q - 1) % p != 0 {
            return Err(Error::NoRootOfUnity { q, p });
        }
        let size =
            checked_pow(q, p as u32)
                .filter(|&s| s <= FIELD_CAP)
                .ok_or(Error::FieldTooLarge {
                    size: checked_pow(q, p as u32).unwrap_or(u64::MAX),
                    cap: FIELD_CAP,
                })?;
        debug_assert_ne!(l, p);
        let big = FiniteField::new(size)?;

        let natural: Vec<Elem> = big.units().filter(|&x| big.pow(x, q) == x).collect();
        assert_eq!(natural.len() as u64, q - 1, "subfield F_q has q-1 units");
        let m = q - 1;
        if gcd(stride, m) != 1 {
            return Err(Error::InvalidStride { stride, order: m });
        }
        let units: Vec<Elem> = (0..m)
            .map(|i| natural[((i * stride) % m) as usize])
            .collect();

        let generator = big.pow(big.primitive(), (size - 1) / m);
        let mut gen_log = HashMap::new();
        let mut cur = big.one();
        for e in 0..m {
            gen_log.insert(cur, e);
            cur = big.mul(cur, generator);
        }

        let mut pth: Vec<Elem> = units.iter().map(|&x| big.pow(x, p)).collect();
        pth.sort_unstable();
        pth.dedup();

        let mut subgroup: HashSet<Elem> = pth.iter().copied().collect();
        let mut basis = Vec::new();
        for &u in &units {
            if subgroup.len() as u64 == m {
                break;
            }
            if subgroup.contains(&u) {
                continue;
            }
            let mut grown = HashSet::new();
            let mut power = big.one();
            for _ in 0..p {
                grown.extend(subgroup.iter().map(|&h| big.mul(power, h)));
                power = big.mul(power, u);
            }
            subgroup = grown;
            basis.push(u);
        }

        let k = basis.len();
        let mut coords = HashMap::new();
        for c in all_vectors(p, k) {
            let rep = basis
                .iter()
                .zip(&c)
                .fold(big.one(), |acc, (&b, &e)| big.mul(acc, big.pow(b, e)));
            for &h in &pth {
                coords.insert(big.mul(rep, h), c.clone());
            }
        }
        assert_eq!(coords.len() as u64, m, "cosets of F*^p partition F*");

        Ok(Self {
            q,
            p,
            big,
            units,
            generator,
            gen_log,
            pth_powers: pth,
            basis,
            coords,
            norm_image: OnceLock::new(),
        })
    }

    pub fn q(&self) -> u64 {
        self.q
    }

    pub fn p(&self) -> u64 {
        self.p
    }

    pub fn descriptor(&self) -> String {
        format!("Fq:{}", self.q)
    }

    /// The ambient field `F_{q^p}` in which all arithmetic happens.
    pub fn extension(&self) -> &FiniteField {
        &self.big
    }

    /// `F_q*` in enumeration order.
    pub fn units(&self) -> &[Elem] {
        &self.units
    }

    /// A generator of the cyclic group `F_q*`.
    pub fn generator(&self) -> Elem {
        self.generator
    }

    /// The integer `a` as an element of the prime field.
    pub fn integer(&self, a: i64) -> Elem {
        let l = self.big.characteristic() as i64;
        a.rem_euclid(l) as Elem
    }

    pub fn pth_powers(&self) -> &[Elem] {
        &self.pth_powers
    }

    /// Basis representatives of `F*/F*^p`.
    pub fn basis(&self) -> &[Elem] {
        &self.basis
    }

    pub fn class_dim(&self) -> usize {
        self.basis.len()
    }

    pub fn contains(&self, x: Elem) -> bool {
        x == 0 || self.gen_log.contains_key(&x)
    }

    /// Coordinates of `[a]` in `F*/F*^p`.
    pub fn class(&self, a: Elem) -> Result<Vec<u64>> {
        self.coords.get(&a).cloned().ok_or_else(|| {
            Error::InternalInvariantViolation(format!("{} is not a unit of F_{}", a, self.q))
        })
    }

    pub fn class_rep(&self, c: &[u64]) -> Elem {
        self.basis
            .iter()
            .zip(c)
            .fold(self.big.one(), |acc, (&b, &e)| {
                self.big.mul(acc, self.big.pow(b, e))
            })
    }

    /// Integer value for prime fields, `g^e` in terms of [`Self::generator`] otherwise.
    pub fn label(&self, x: Elem) -> String {
        if x == 0 {
            return "0".into();
        }
        if is_prime(self.q) {
            return x.to_string();
        }
        match self.gen_log.get(&x) {
            Some(e) => format!("g^{e}"),
            None => format!("#{x}"),
        }
    }

    /// Classes of norms from `F(a^{1/p})`, as a subspace of `F*/F*^p`.
    pub fn norm_classes(&self, a: Elem) -> Result<EchelonBasis> {
        let c = self.class(a)?;
        if c.iter().all(|&x| x == 0) {
            return Err(Error::TrivialExtension(a as u64));
        }
        let big = &self.big;
        if !big.units().any(|y| big.pow(y, self.p) == a) {
            return Err(Error::InternalInvariantViolation(format!(
                "{} has no p-th root in F_{}^{}",
                self.label(a),
                self.q,
                self.p
            )));
        }
        if let Some(b) = self.norm_image.get() {
            return Ok(b.clone());
        }
        let mut seen: HashSet<Elem> = HashSet::new();
        for x in big.units() {
            // product of the Galois conjugates x^{q^i}
            let mut norm = big.one();
            let mut conj = x;
            for _ in 0..self.p {
                norm = big.mul(norm, conj);
                conj = big.pow(conj, self.q);
            }
            if !self.contains(norm) {
                return Err(Error::InternalInvariantViolation(format!(
                    "norm of {x} left the base field"
                )));
            }
            seen.insert(norm);
        }
        let mut norms: Vec<Elem> = seen.into_iter().collect();
        norms.sort_unstable();
        let rows = norms
            .iter()
            .map(|&n| self.class(n))
            .collect::<Result<Vec<_>>>()?;
        let basis = echelonize_rows(self.p, self.class_dim(), rows)?;
        Ok(self.norm_image.get_or_init(|| basis).clone())
    }

    /// Tensor `[a_1]⊗…⊗[a_n]` in coordinates of `(F*/F*^p)^{⊗n}`.
    pub fn symbol(&self, elems: &[Elem]) -> Result<Vec<u64>> {
        let classes = elems
            .iter()
            .map(|&a| self.class(a))
            .collect::<Result<Vec<_>>>()?;
        Ok(kronecker(self.p, &classes))
    }

    pub fn milnor_ring(&self, n: usize) -> Result<MilnorRing> {
        if n == 0 {
            return Err(Error::ZeroMilnorDegree);
        }
        let k = self.class_dim();
        let ambient_dim = k.pow(n as u32);
        let tuples = checked_pow(self.p, (k * n) as u32).unwrap_or(u64::MAX);
        if tuples > TUPLE_CAP {
            return Err(Error::ResourceCap {
                cap: TUPLE_CAP as usize,
            });
        }
        let class_vectors: Vec<Vec<u64>> = all_vectors(self.p, k)
            .filter(|c| c.iter().any(|&x| x != 0))
            .collect();
        let mut norm_cache: HashMap<Vec<u64>, EchelonBasis> = HashMap::new();
        for c in &class_vectors {
            norm_cache.insert(c.clone(), self.norm_classes(self.class_rep(c))?);
        }
        let mut rows = Vec::new();
        let mut idx = vec![0usize; n];
        if !class_vectors.is_empty() {
            loop {
                let tuple: Vec<&Vec<u64>> = idx.iter().map(|&i| &class_vectors[i]).collect();
                let mut is_relation = false;
                for c in &tuple[1..] {
                    if norm_cache[*c].contains(tuple[0])? {
                        is_relation = true;
                        break;
                    }
                }
                if is_relation {
                    let owned: Vec<Vec<u64>> = tuple.iter().map(|c| c.to_vec()).collect();
                    rows.push(kronecker(self.p, &owned));
                }
                if !advance(&mut idx, class_vectors.len()) {
                    break;
                }
            }
        }
        let relation_count = rows.len();
        let relations = echelonize_rows(self.p, ambient_dim, rows)?;
        Ok(MilnorRing {
            n,
            p: self.p,
            ambient_dim,
            relation_count,
            relations,
        })
    }

    /// `dim l_n F`.
    pub fn milnor_dim(&self, n: usize) -> Result<usize> {
        Ok(self.milnor_ring(n)?.quotient_dim())
    }

    /// Exhaustive check of the Steinberg-type identities in `l_n F`.
    pub fn steinberg_suite(&self, n: usize) -> Result<SteinbergReport> {
        let ring = self.milnor_ring(n)?;
        let big = &self.big;
        let mut steinberg = IdentityCheck::new("<a, 1-a> = 0 for a not in {0, 1}");
        let mut minus = IdentityCheck::new("<a, -a> = 0");
        let mut antisym = IdentityCheck::new("<a, b> = -<b, a> via the four-term expansion");
        if n >= 2 {
            let fillers = self.filler_tuples(n - 2);
            let one = big.one();
            for i in 0..n {
                for j in i + 1..n {
                    for fill in &fillers {
                        let place = |x: Elem, y: Elem| -> Vec<Elem> {
                            let mut out = Vec::with_capacity(n);
                            let mut rest = fill.iter();
                            for pos in 0..n {
                                out.push(if pos == i {
                                    x
                                } else if pos == j {
                                    y
                                } else {
                                    *rest.next().unwrap()
                                });
                            }
                            out
                        };
                        let ctx = |extra: String| {
                            let fill: Vec<String> = fill.iter().map(|&f| self.label(f)).collect();
                            if fill.is_empty() {
                                extra
                            } else {
                                format!(
                                    "{extra}, positions ({}, {}), other slots [{}]",
                                    i + 1,
                                    j + 1,
                                    fill.join(", ")
                                )
                            }
                        };
                        for &a in &self.units {
                            if a != one {
                                let b = big.sub(one, a);
                                let ok = ring.is_zero(&self.symbol(&place(a, b))?)?;
                                steinberg.record(ok, || ctx(format!("a = {}", self.label(a))));
                            }
                            let ok = ring.is_zero(&self.symbol(&place(a, big.neg(a)))?)?;
                            minus.record(ok, || ctx(format!("a = {}", self.label(a))));
                        }
                        for &a in &self.units {
                            for &b in &self.units {
                                let ab = big.mul(a, b);
                                let lhs = self.symbol(&place(ab, big.neg(ab)))?;
                                let terms = [
                                    self.symbol(&place(a, big.neg(a)))?,
                                    self.symbol(&place(a, b))?,
                                    self.symbol(&place(b, a))?,
                                    self.symbol(&place(b, big.neg(b)))?,
                                ];
                                let expansion = terms
                                    .iter()
                                    .fold(vec![0; ring.ambient_dim], |acc, t| add(self.p, &acc, t));
                                let swap_sum = add(self.p, &terms[1], &terms[2]);
                                let ok = lhs == expansion && ring.is_zero(&swap_sum)?;
                                antisym.record(ok, || {
                                    ctx(format!("a = {}, b = {}", self.label(a), self.label(b)))
                                });
                            }
                        }
                    }
                }
            }
        }
        Ok(SteinbergReport {
            field: self.descriptor(),
            p: self.p,
            n,
            quotient_dim: ring.quotient_dim(),
            checks: vec![steinberg, minus, antisym],
        })
    }

    fn filler_tuples(&self, len: usize) -> Vec<Vec<Elem>> {
        let k = self.basis.len();
        let mut out = Vec::new();
        if k == 0 && len > 0 {
            return out;
        }
        let mut idx = vec![0usize; len];
        loop {
            out.push(idx.iter().map(|&i| self.basis[i]).collect());
            if !advance(&mut idx, k) {
                break;
            }
        }
        out
    }
}

/// `l_n F` as a quotient of the ambient tensor power.
#[derive(Debug, Clone, Serialize)]
pub struct MilnorRing {
    pub n: usize,
    pub p: u64,
    pub ambient_dim: usize,
    /// Number of relation tensors enumerated (before reduction).
    pub relation_count: usize,
    pub relations: EchelonBasis,
}

impl MilnorRing {
    pub fn quotient_dim(&self) -> usize {
        self.ambient_dim - self.relations.rank()
    }

    pub fn is_zero(&self, v: &[u64]) -> Result<bool> {
        self.relations.contains(v)
    }
}

const MAX_WITNESSES: usize = 10;

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct IdentityCheck {
    pub identity: String,
    pub cases: usize,
    pub failures: usize,
    /// The first few failing cases.
    pub witnesses: Vec<String>,
}

impl IdentityCheck {
    fn new(identity: &str) -> Self {
        Self {
            identity: identity.to_string(),
            cases: 0,
            failures: 0,
            witnesses: Vec::new(),
        }
    }

    fn record(&mut self, ok: bool, witness: impl FnOnce() -> String) {
        self.cases += 1;
        if !ok {
            self.failures += 1;
            if self.witnesses.len() < MAX_WITNESSES {
                self.witnesses.push(witness());
            }
        }
    }

    pub fn passed(&self) -> bool {
        self.failures == 0
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SteinbergReport {
    pub field: String,
    pub p: u64,
    pub n: usize,
    pub quotient_dim: usize,
    pub checks: Vec<IdentityCheck>,
}

impl SteinbergReport {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(IdentityCheck::passed)
    }
}

fn gcd(a: u64, b: u64) -> u64 {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

fn advance(idx: &mut [usize], base: usize) -> bool {
    for slot in idx.iter_mut().rev() {
        *slot += 1;
        if *slot < base {
            return true;
        }
        *slot = 0;
    }
    false
}

fn all_vectors(p: u64, k: usize) -> impl Iterator<Item = Vec<u64>> {
    let total = (p as usize).pow(k as u32);
    (0..total).map(move |mut i| {
        let mut v = vec![0u64; k];
        for slot in v.iter_mut().rev() {
            *slot = (i % p as usize) as u64;
            i /= p as usize;
        }
        v
    })
}

fn kronecker(p: u64, vs: &[Vec<u64>]) -> Vec<u64> {
    vs.iter().fold(vec![1u64], |acc, v| {
        let mut out = Vec::with_capacity(acc.len() * v.len());
        for &a in &acc {
            for &b in v {
                out.push(a * b % p);
            }
        }
        out
    })
}

fn add(p: u64, a: &[u64], b: &[u64]) -> Vec<u64> {
    a.iter().zip(b).map(|(x, y)| (x + y) % p).collect()
}
