//! Homogeneous components `U_n` of `U = F_p[π]<x_1..x_d>` and the Lie
//! layers `gr_n(S) ⊂ U_n`.
//!
//! `π` is a central variable of degree 1. The monomial basis of `U_n` is
//! `{π^j·w : j + |w| = n}`, ordered by `j` ascending and then
//! lexicographically on `w`.

use std::fmt;
use std::sync::Arc;

use serde::Serialize;

use crate::arith::{inv_mod_prime, mul_mod};
use crate::error::{Error, Result};
use crate::linalg::{echelonize_rows, EchelonBasis};
use crate::series::TruncationContext;
use crate::verifier::{free_group_layers, LayerBasis};

/// `dim U_n = Σ_{m=0..n} d^m`.
pub fn u_dim(ctx: TruncationContext, n: usize) -> Result<usize> {
    if n > ctx.truncation() {
        return Err(Error::DegreeOutOfRange {
            degree: n,
            max: ctx.truncation(),
        });
    }
    Ok(ctx.word_offset(n + 1))
}

fn block_offset(ctx: TruncationContext, n: usize, j: usize) -> usize {
    (0..j).map(|jj| ctx.words_of_length(n - jj)).sum()
}

/// Homogeneous element of `U`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct GradedElement {
    ctx: TruncationContext,
    degree: usize,
    coeffs: Vec<u64>,
}

impl GradedElement {
    pub fn zero(ctx: TruncationContext, degree: usize) -> Result<Self> {
        let dim = u_dim(ctx, degree)?;
        Ok(Self {
            ctx,
            degree,
            coeffs: vec![0; dim],
        })
    }

    /// Coefficient vector in the monomial basis of `U_degree`.
    pub fn from_coeffs(ctx: TruncationContext, degree: usize, coeffs: Vec<u64>) -> Result<Self> {
        let dim = u_dim(ctx, degree)?;
        if coeffs.len() != dim {
            return Err(Error::DimensionMismatch {
                expected: dim,
                got: coeffs.len(),
            });
        }
        let p = ctx.p();
        Ok(Self {
            ctx,
            degree,
            coeffs: coeffs.into_iter().map(|c| c % p).collect(),
        })
    }

    /// `π^j·w`.
    pub fn monomial(ctx: TruncationContext, j: usize, letters: &[usize]) -> Result<Self> {
        let mut e = Self::zero(ctx, j + letters.len())?;
        if let Some(&bad) = letters.iter().find(|&&l| l >= ctx.d()) {
            return Err(Error::GeneratorOutOfRange {
                index: bad + 1,
                d: ctx.d(),
            });
        }
        e.set_by_rank(j, ctx.word_rank(letters), 1);
        Ok(e)
    }

    /// `x_i`, zero-based.
    pub fn generator(ctx: TruncationContext, i: usize) -> Result<Self> {
        Self::monomial(ctx, 0, &[i])
    }

    pub(crate) fn set_by_rank(&mut self, j: usize, lex: usize, c: u64) {
        let idx = block_offset(self.ctx, self.degree, j) + lex;
        self.coeffs[idx] = c % self.ctx.p();
    }

    pub fn coefficient(&self, j: usize, letters: &[usize]) -> u64 {
        assert_eq!(j + letters.len(), self.degree);
        self.coeffs[block_offset(self.ctx, self.degree, j) + self.ctx.word_rank(letters)]
    }

    pub fn ctx(&self) -> TruncationContext {
        self.ctx
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn coeffs(&self) -> &[u64] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|&c| c == 0)
    }

    /// Nonzero terms as `(j, letters, coefficient)`.
    pub fn terms(&self) -> Vec<(usize, Vec<usize>, u64)> {
        let mut out = Vec::new();
        let mut idx = 0;
        for j in 0..=self.degree {
            let m = self.degree - j;
            for lex in 0..self.ctx.words_of_length(m) {
                let c = self.coeffs[idx];
                if c != 0 {
                    out.push((j, self.ctx.word_letters(m, lex), c));
                }
                idx += 1;
            }
        }
        out
    }

    fn check_same(&self, other: &Self) -> Result<()> {
        if self.ctx != other.ctx {
            return Err(Error::ContextMismatch);
        }
        if self.degree != other.degree {
            return Err(Error::DimensionMismatch {
                expected: self.degree,
                got: other.degree,
            });
        }
        Ok(())
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.check_same(other)?;
        let p = self.ctx.p();
        let coeffs = self
            .coeffs
            .iter()
            .zip(&other.coeffs)
            .map(|(a, b)| (a + b) % p)
            .collect();
        Ok(Self {
            ctx: self.ctx,
            degree: self.degree,
            coeffs,
        })
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.add(&other.scale(self.ctx.p() - 1))
    }

    pub fn scale(&self, c: u64) -> Self {
        let p = self.ctx.p();
        let c = c % p;
        Self {
            ctx: self.ctx,
            degree: self.degree,
            coeffs: self.coeffs.iter().map(|&a| mul_mod(a, c, p)).collect(),
        }
    }

    /// Associative product in `U`.
    pub fn mul(&self, other: &Self) -> Result<Self> {
        if self.ctx != other.ctx {
            return Err(Error::ContextMismatch);
        }
        let ctx = self.ctx;
        let deg = self.degree + other.degree;
        if deg > ctx.truncation() {
            return Err(Error::DegreeOverflow {
                degree: deg,
                max: ctx.truncation(),
            });
        }
        let p = ctx.p();
        let mut out = Self::zero(ctx, deg)?;
        let lhs = self.sparse();
        let rhs = other.sparse();
        for &(j1, _, l1, a) in &lhs {
            for &(j2, m2, l2, b) in &rhs {
                let idx = block_offset(ctx, deg, j1 + j2) + l1 * ctx.words_of_length(m2) + l2;
                out.coeffs[idx] = (out.coeffs[idx] + mul_mod(a, b, p)) % p;
            }
        }
        Ok(out)
    }

    fn sparse(&self) -> Vec<(usize, usize, usize, u64)> {
        let mut out = Vec::new();
        let mut idx = 0;
        for j in 0..=self.degree {
            let m = self.degree - j;
            for lex in 0..self.ctx.words_of_length(m) {
                if self.coeffs[idx] != 0 {
                    out.push((j, m, lex, self.coeffs[idx]));
                }
                idx += 1;
            }
        }
        out
    }

    /// `ab - ba`.
    pub fn bracket(&self, other: &Self) -> Result<Self> {
        self.mul(other)?.sub(&other.mul(self)?)
    }

    /// Multiplication by the central element `π`.
    pub fn pi_times(&self) -> Result<Self> {
        let ctx = self.ctx;
        let deg = self.degree + 1;
        if deg > ctx.truncation() {
            return Err(Error::DegreeOverflow {
                degree: deg,
                max: ctx.truncation(),
            });
        }
        let mut out = Self::zero(ctx, deg)?;
        for (j, m, lex, c) in self.sparse() {
            debug_assert_eq!(j + m, self.degree);
            out.set_by_rank(j + 1, lex, c);
        }
        Ok(out)
    }

    /// The operator induced by the p-th power map: `πa` for odd `p`; for
    /// `p = 2`, `a² + πa` in degree 1 and `πa` above. The degree-1 case is
    /// evaluated on `a` as a whole, since it is not additive.
    pub fn apply_p(&self) -> Result<Self> {
        let pa = self.pi_times()?;
        if self.ctx.p() == 2 && self.degree == 1 {
            self.mul(self)?.add(&pa)
        } else {
            Ok(pa)
        }
    }

    /// Is this element in `gr_degree(S)`?
    pub fn is_lie_element(&self) -> Result<bool> {
        if self.is_zero() {
            return Ok(true);
        }
        if self.degree == 0 {
            return Ok(false);
        }
        lie_layer(self.ctx, self.degree)?
            .basis
            .contains(&self.coeffs)
    }

    /// Scales so that the first nonzero coefficient is 1.
    pub fn normalized(&self) -> Self {
        match self.coeffs.iter().find(|&&c| c != 0) {
            Some(&lead) => self.scale(inv_mod_prime(lead, self.ctx.p())),
            None => self.clone(),
        }
    }
}

impl fmt::Display for GradedElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let terms = self.terms();
        if terms.is_empty() {
            return f.write_str("0");
        }
        for (i, (j, w, c)) in terms.iter().enumerate() {
            if i > 0 {
                f.write_str(" + ")?;
            }
            let mut first = true;
            if *c != 1 {
                write!(f, "{c}")?;
                first = false;
            }
            if *j > 0 {
                if !first {
                    f.write_str("*")?;
                }
                f.write_str("pi")?;
                if *j > 1 {
                    write!(f, "^{j}")?;
                }
                first = false;
            }
            for l in w {
                if !first {
                    f.write_str("*")?;
                }
                write!(f, "x{}", l + 1)?;
                first = false;
            }
        }
        Ok(())
    }
}

impl Serialize for GradedElement {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

/// `gr_n(S)` as a subspace of `U_n`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LieLayer {
    pub degree: usize,
    pub basis: EchelonBasis,
}

impl LieLayer {
    pub fn dim(&self) -> usize {
        self.basis.rank()
    }
}

/// Layer `n` of `gr(S)`, computed from the group: the span of initial forms
/// of elements of `S^(n)`, obtained by closing `{s_1..s_d}` under products,
/// commutators and p-th powers.
pub fn lie_layer(ctx: TruncationContext, n: usize) -> Result<LieLayer> {
    if n == 0 || n > ctx.truncation() {
        return Err(Error::DegreeOutOfRange {
            degree: n,
            max: ctx.truncation(),
        });
    }
    let layers = free_group_layers(ctx)?;
    Ok(LieLayer {
        degree: n,
        basis: layers.echelon(n),
    })
}

/// The whole of `S/S^(N+1)` as a layered basis (cached per context).
pub fn free_group(ctx: TruncationContext) -> Result<Arc<LayerBasis>> {
    free_group_layers(ctx)
}

/// Witt's necklace count `w_m(d) = (1/m) Σ_{k|m} μ(k) d^{m/k}`, the rank of
/// the degree-`m` part of the free Lie algebra on `d` letters.
pub fn witt_number(d: usize, m: usize) -> usize {
    assert!(m >= 1);
    let mut total: i64 = 0;
    for k in (1..=m).filter(|k| m % k == 0) {
        total += mobius(k) * (d as i64).pow((m / k) as u32);
    }
    (total / m as i64) as usize
}

fn mobius(mut n: usize) -> i64 {
    let mut result = 1;
    let mut q = 2;
    while q * q <= n {
        if n % q == 0 {
            n /= q;
            if n % q == 0 {
                return 0;
            }
            result = -result;
        }
        q += 1;
    }
    if n > 1 {
        result = -result;
    }
    result
}

/// Lyndon words of length `m` over `d` letters, in lexicographic order
/// (Duval's generation).
pub fn lyndon_words(d: usize, m: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    if m == 0 || d == 0 {
        return out;
    }
    let mut w: Vec<usize> = vec![0];
    while !w.is_empty() {
        if w.len() == m {
            out.push(w.clone());
        }
        let len = w.len();
        let mut next: Vec<usize> = (0..m).map(|i| w[i % len]).collect();
        while next.last() == Some(&(d - 1)) {
            next.pop();
        }
        if let Some(last) = next.last_mut() {
            *last += 1;
        }
        w = next;
    }
    out
}

/// Standard bracketing of a Lyndon word, expanded in `U`.
pub fn lyndon_bracket(ctx: TruncationContext, word: &[usize]) -> Result<GradedElement> {
    if word.len() == 1 {
        return GradedElement::generator(ctx, word[0]);
    }
    // standard factorization: right factor is the longest proper Lyndon suffix
    let split = (1..word.len())
        .find(|&i| is_lyndon(&word[i..]))
        .expect("a single letter is always Lyndon");
    lyndon_bracket(ctx, &word[..split])?.bracket(&lyndon_bracket(ctx, &word[split..])?)
}

fn is_lyndon(w: &[usize]) -> bool {
    (1..w.len()).all(|i| w[i..] > *w)
}

/// `span{π^j·b : b a Lyndon bracket of degree n-j}`, which equals
/// `gr_n(S)` for odd `p`.
pub fn free_lie_span(ctx: TruncationContext, n: usize) -> Result<EchelonBasis> {
    let mut rows = Vec::new();
    for m in 1..=n {
        for w in lyndon_words(ctx.d(), m) {
            let mut e = lyndon_bracket(ctx, &w)?;
            for _ in m..n {
                e = e.pi_times()?;
            }
            rows.push(e.coeffs);
        }
    }
    echelonize_rows(ctx.p(), u_dim(ctx, n)?, rows)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ctx(p: u64, d: usize, n: usize) -> TruncationContext {
        TruncationContext::new(p, d, n).unwrap()
    }

    #[test]
    fn u_dims() {
        let c2 = ctx(3, 2, 5);
        let dims: Vec<usize> = (0..=5).map(|n| u_dim(c2, n).unwrap()).collect();
        assert_eq!(dims, vec![1, 3, 7, 15, 31, 63]);
        let c3 = ctx(3, 3, 4);
        let dims: Vec<usize> = (0..=4).map(|n| u_dim(c3, n).unwrap()).collect();
        assert_eq!(dims, vec![1, 4, 13, 40, 121]);
        assert_eq!(u_dim(ctx(2, 1, 4), 4).unwrap(), 5);
        assert!(matches!(u_dim(c3, 5), Err(Error::DegreeOutOfRange { .. })));
    }

    #[test]
    fn bracket_examples() {
        let c = ctx(3, 2, 4);
        let x1 = GradedElement::generator(c, 0).unwrap();
        let x2 = GradedElement::generator(c, 1).unwrap();
        let b = x1.bracket(&x2).unwrap();
        assert_eq!(b.coefficient(0, &[0, 1]), 1);
        assert_eq!(b.coefficient(0, &[1, 0]), 2);
        assert!(b.bracket(&b).unwrap().is_zero());
        assert_eq!(
            x1.pi_times().unwrap().bracket(&x2).unwrap(),
            b.pi_times().unwrap()
        );
        assert!(matches!(
            b.bracket(&b.pi_times().unwrap()),
            Err(Error::DegreeOverflow { .. })
        ));
    }

    #[test]
    fn p_operator() {
        let c3 = ctx(3, 2, 4);
        let x1 = GradedElement::generator(c3, 0).unwrap();
        assert_eq!(
            x1.apply_p().unwrap(),
            GradedElement::monomial(c3, 1, &[0]).unwrap()
        );

        let c2 = ctx(2, 2, 4);
        let x1 = GradedElement::generator(c2, 0).unwrap();
        let x2 = GradedElement::generator(c2, 1).unwrap();
        let expect = GradedElement::monomial(c2, 0, &[0, 0])
            .unwrap()
            .add(&GradedElement::monomial(c2, 1, &[0]).unwrap())
            .unwrap();
        assert_eq!(x1.apply_p().unwrap(), expect);
        let b = x1.bracket(&x2).unwrap();
        assert_eq!(b.apply_p().unwrap(), b.pi_times().unwrap());
    }

    #[test]
    fn witt_and_lyndon() {
        let w: Vec<usize> = (1..=6).map(|m| witt_number(2, m)).collect();
        assert_eq!(w, vec![2, 1, 2, 3, 6, 9]);
        for d in 1..=3 {
            for m in 1..=6 {
                assert_eq!(lyndon_words(d, m).len(), witt_number(d, m), "d={d} m={m}");
            }
        }
        assert_eq!(lyndon_words(2, 3), vec![vec![0, 0, 1], vec![0, 1, 1]]);
    }

    #[test]
    fn display_form() {
        let c = ctx(3, 2, 3);
        let e = GradedElement::monomial(c, 1, &[0])
            .unwrap()
            .add(&GradedElement::monomial(c, 0, &[0, 1]).unwrap().scale(2))
            .unwrap();
        assert_eq!(e.to_string(), "2*x1*x2 + pi*x1");
    }
}
