//! Truncated Magnus realization of the free pro-p group.
//!
//! An element of `Z_p<<x_1..x_d>>` is stored densely over all words of length
//! at most `N`. A term `c·w` has weight `v_p(c) + |w|`; terms of weight above
//! `N` are dropped, which amounts to storing the coefficient of a word of
//! length `m` modulo `p^(N+1-m)`. The generator `s_i` maps to `1 + x_i`, and
//! `g ∈ S^(n)` exactly when `g - 1` has weight at least `n`. All statements
//! made with these series therefore hold modulo `S^(N+1)`.

use std::cmp::Ordering;
use std::fmt;

use serde::{Serialize, Serializer};

use crate::arith::{checked_pow, is_prime, mul_mod, valuation};
use crate::error::{Error, Result};
use crate::graded::GradedElement;
use crate::word::GroupWord;

/// Prime, generator count and truncation degree shared by every series and
/// graded element of one computation.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct TruncationContext {
    p: u64,
    d: usize,
    truncation: usize,
}

impl TruncationContext {
    pub fn new(p: u64, d: usize, truncation: usize) -> Result<Self> {
        if !is_prime(p) {
            return Err(Error::NonPrimeP(p));
        }
        if d == 0 {
            return Err(Error::NoGenerators);
        }
        if truncation < 2 {
            return Err(Error::TruncationTooSmall(truncation));
        }
        match checked_pow(p, truncation as u32 + 1) {
            Some(m) if m < (1u64 << 62) => {}
            _ => {
                return Err(Error::ModulusTooLarge {
                    p,
                    exponent: truncation + 1,
                })
            }
        }
        Ok(Self { p, d, truncation })
    }

    pub fn p(&self) -> u64 {
        self.p
    }

    pub fn d(&self) -> usize {
        self.d
    }

    pub fn truncation(&self) -> usize {
        self.truncation
    }

    /// `d^m`.
    pub fn words_of_length(&self, m: usize) -> usize {
        self.d.pow(m as u32)
    }

    /// Index of the first word of length `m` in the dense layout.
    pub fn word_offset(&self, m: usize) -> usize {
        (0..m).map(|i| self.words_of_length(i)).sum()
    }

    /// Number of words of length `<= N`.
    pub fn series_len(&self) -> usize {
        self.word_offset(self.truncation + 1)
    }

    /// Coefficient modulus for words of length `m <= N`.
    pub fn modulus_for_length(&self, m: usize) -> u64 {
        self.p.pow((self.truncation + 1 - m) as u32)
    }

    /// Every element of `S/S^(N+1)` has order dividing this.
    pub fn exponent_bound(&self) -> u64 {
        self.p.pow(self.truncation as u32)
    }

    /// Length and lexicographic rank of the word at a dense index.
    pub(crate) fn split_index(&self, idx: usize) -> (usize, usize) {
        let mut m = 0;
        let mut start = 0;
        loop {
            let count = self.words_of_length(m);
            if idx < start + count {
                return (m, idx - start);
            }
            start += count;
            m += 1;
        }
    }

    /// Letters (zero-based) of the word with lexicographic rank `lex` among
    /// words of length `m`.
    pub fn word_letters(&self, m: usize, mut lex: usize) -> Vec<usize> {
        let mut letters = vec![0; m];
        for slot in letters.iter_mut().rev() {
            *slot = lex % self.d;
            lex /= self.d;
        }
        letters
    }

    pub fn word_rank(&self, letters: &[usize]) -> usize {
        letters.iter().fold(0, |acc, &l| acc * self.d + l)
    }
}

/// Filtration weight: a degree, or `Top` for elements trivial in the truncation.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Weight {
    Finite(usize),
    Top,
}

impl Weight {
    pub fn finite(self) -> Option<usize> {
        match self {
            Weight::Finite(n) => Some(n),
            Weight::Top => None,
        }
    }

    pub fn is_top(self) -> bool {
        self == Weight::Top
    }
}

impl PartialOrd for Weight {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Weight {
    fn cmp(&self, other: &Self) -> Ordering {
        match (self, other) {
            (Weight::Finite(a), Weight::Finite(b)) => a.cmp(b),
            (Weight::Finite(_), Weight::Top) => Ordering::Less,
            (Weight::Top, Weight::Finite(_)) => Ordering::Greater,
            (Weight::Top, Weight::Top) => Ordering::Equal,
        }
    }
}

impl fmt::Display for Weight {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Weight::Finite(n) => write!(f, "{n}"),
            Weight::Top => f.write_str("TOP"),
        }
    }
}

impl Serialize for Weight {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        match self {
            Weight::Finite(n) => s.serialize_u64(*n as u64),
            Weight::Top => s.serialize_str("TOP"),
        }
    }
}

/// Element of `Z_p<<x>>` modulo terms of weight `> N`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct TruncatedSeries {
    ctx: TruncationContext,
    coeffs: Vec<u64>,
}

impl TruncatedSeries {
    pub fn zero(ctx: TruncationContext) -> Self {
        Self {
            ctx,
            coeffs: vec![0; ctx.series_len()],
        }
    }

    pub fn one(ctx: TruncationContext) -> Self {
        let mut s = Self::zero(ctx);
        s.coeffs[0] = 1;
        s
    }

    /// `x_i` for a zero-based index.
    pub fn variable(ctx: TruncationContext, i: usize) -> Self {
        let mut s = Self::zero(ctx);
        s.coeffs[1 + i] = 1;
        s
    }

    pub fn ctx(&self) -> TruncationContext {
        self.ctx
    }

    /// Sets the coefficient of a word, reducing it canonically.
    pub fn set(&mut self, letters: &[usize], coeff: i64) {
        let m = letters.len();
        assert!(m <= self.ctx.truncation);
        let modulus = self.ctx.modulus_for_length(m) as i64;
        let idx = self.ctx.word_offset(m) + self.ctx.word_rank(letters);
        self.coeffs[idx] = coeff.rem_euclid(modulus) as u64;
    }

    pub fn coefficient(&self, letters: &[usize]) -> u64 {
        let idx = self.ctx.word_offset(letters.len()) + self.ctx.word_rank(letters);
        self.coeffs[idx]
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|&c| c == 0)
    }

    /// Nonzero terms as `(letters, coefficient)` in word order.
    pub fn terms(&self) -> Vec<(Vec<usize>, u64)> {
        self.coeffs
            .iter()
            .enumerate()
            .filter(|(_, &c)| c != 0)
            .map(|(i, &c)| {
                let (m, lex) = self.ctx.split_index(i);
                (self.ctx.word_letters(m, lex), c)
            })
            .collect()
    }

    /// Minimum of `v_p(c) + |w|` over nonzero terms.
    pub fn weight(&self) -> Weight {
        let p = self.ctx.p;
        let mut best = Weight::Top;
        let mut start = 0;
        for m in 0..=self.ctx.truncation {
            let count = self.ctx.words_of_length(m);
            if let Weight::Finite(b) = best {
                if m >= b {
                    break;
                }
            }
            for &c in &self.coeffs[start..start + count] {
                if c != 0 {
                    let w = Weight::Finite(valuation(c, p) as usize + m);
                    best = best.min(w);
                }
            }
            start += count;
        }
        best
    }

    pub fn add(&self, other: &Self) -> Self {
        self.combine(other, |a, b, m| (a + b) % m)
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.combine(other, |a, b, m| (a + m - b) % m)
    }

    pub fn neg(&self) -> Self {
        Self::zero(self.ctx).sub(self)
    }

    fn combine(&self, other: &Self, f: impl Fn(u64, u64, u64) -> u64) -> Self {
        assert_eq!(self.ctx, other.ctx);
        let mut out = Self::zero(self.ctx);
        let mut start = 0;
        for m in 0..=self.ctx.truncation {
            let modulus = self.ctx.modulus_for_length(m);
            let end = start + self.ctx.words_of_length(m);
            for i in start..end {
                out.coeffs[i] = f(self.coeffs[i], other.coeffs[i], modulus);
            }
            start = end;
        }
        out
    }

    fn nonzero(&self) -> Vec<(usize, usize, u64)> {
        let mut out = Vec::new();
        let mut start = 0;
        for m in 0..=self.ctx.truncation {
            let count = self.ctx.words_of_length(m);
            for (lex, &c) in self.coeffs[start..start + count].iter().enumerate() {
                if c != 0 {
                    out.push((m, lex, c));
                }
            }
            start += count;
        }
        out
    }

    pub fn mul(&self, other: &Self) -> Self {
        assert_eq!(self.ctx, other.ctx);
        let ctx = self.ctx;
        let n = ctx.truncation;
        let offsets: Vec<usize> = (0..=n).map(|m| ctx.word_offset(m)).collect();
        let dpow: Vec<usize> = (0..=n).map(|m| ctx.words_of_length(m)).collect();
        let moduli: Vec<u64> = (0..=n).map(|m| ctx.modulus_for_length(m)).collect();
        let lhs = self.nonzero();
        let rhs = other.nonzero();
        let mut out = Self::zero(ctx);
        for &(m1, l1, a) in &lhs {
            for &(m2, l2, b) in &rhs {
                let m = m1 + m2;
                if m > n {
                    // rhs is sorted by length
                    break;
                }
                let idx = offsets[m] + l1 * dpow[m2] + l2;
                let md = moduli[m];
                out.coeffs[idx] = (out.coeffs[idx] + mul_mod(a, b, md)) % md;
            }
        }
        out
    }
}

impl fmt::Display for TruncatedSeries {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let terms = self.terms();
        if terms.is_empty() {
            return f.write_str("0");
        }
        for (i, (w, c)) in terms.iter().enumerate() {
            if i > 0 {
                f.write_str(" + ")?;
            }
            if w.is_empty() {
                write!(f, "{c}")?;
            } else {
                if *c != 1 {
                    write!(f, "{c}*")?;
                }
                for l in w {
                    write!(f, "x{}", l + 1)?;
                }
            }
        }
        Ok(())
    }
}

/// Image of an element of `S` in the truncated series ring (constant term 1).
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct GroupElement {
    series: TruncatedSeries,
}

impl GroupElement {
    pub fn identity(ctx: TruncationContext) -> Self {
        Self {
            series: TruncatedSeries::one(ctx),
        }
    }

    /// `s_i ↦ 1 + x_i`, zero-based `i`.
    pub fn generator(ctx: TruncationContext, i: usize) -> Result<Self> {
        if i >= ctx.d {
            return Err(Error::GeneratorOutOfRange {
                index: i + 1,
                d: ctx.d,
            });
        }
        Ok(Self {
            series: TruncatedSeries::one(ctx).add(&TruncatedSeries::variable(ctx, i)),
        })
    }

    /// Wraps a series with constant term 1.
    pub fn from_series(series: TruncatedSeries) -> Option<Self> {
        (series.coeffs[0] == 1).then_some(Self { series })
    }

    pub fn ctx(&self) -> TruncationContext {
        self.series.ctx
    }

    pub fn series(&self) -> &TruncatedSeries {
        &self.series
    }

    /// `g - 1`.
    pub fn deviation(&self) -> TruncatedSeries {
        let mut s = self.series.clone();
        s.coeffs[0] = 0;
        s
    }

    pub fn is_identity(&self) -> bool {
        self.series.coeffs[1..].iter().all(|&c| c == 0)
    }

    pub fn weight(&self) -> Weight {
        self.deviation().weight()
    }

    pub fn mul(&self, other: &Self) -> Self {
        Self {
            series: self.series.mul(&other.series),
        }
    }

    /// Geometric series `Σ (1-g)^k`, finite because `g - 1` has weight >= 1.
    pub fn inv(&self) -> Self {
        let ctx = self.ctx();
        let minus_h = self.deviation().neg();
        let mut acc = TruncatedSeries::one(ctx);
        let mut term = TruncatedSeries::one(ctx);
        for _ in 0..ctx.truncation {
            term = term.mul(&minus_h);
            if term.is_zero() {
                break;
            }
            acc = acc.add(&term);
        }
        Self { series: acc }
    }

    /// `g^k`; the exponent is read modulo `p^N`, the exponent of `S/S^(N+1)`.
    pub fn pow(&self, k: i64) -> Self {
        let bound = self.ctx().exponent_bound();
        let (base, e) = if k < 0 {
            (self.inv(), k.unsigned_abs() % bound)
        } else {
            (self.clone(), (k as u64) % bound)
        };
        base.pow_unsigned(e)
    }

    fn pow_unsigned(&self, mut e: u64) -> Self {
        let mut acc = Self::identity(self.ctx());
        let mut base = self.clone();
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&base);
            }
            e >>= 1;
            if e > 0 {
                base = base.mul(&base);
            }
        }
        acc
    }

    /// `[g, h] = g^-1 h^-1 g h`.
    pub fn comm(&self, other: &Self) -> Self {
        self.inv().mul(&other.inv()).mul(self).mul(other)
    }

    /// Lowest-weight homogeneous part of `g - 1`, read in `U = F_p[π]<x>`.
    pub fn initial_form(&self) -> Result<GradedElement> {
        let ctx = self.ctx();
        let Weight::Finite(n) = self.weight() else {
            return Err(Error::IdentityElement(ctx.truncation));
        };
        let p = ctx.p;
        let mut out = GradedElement::zero(ctx, n)?;
        let dev = self.deviation();
        let mut start = ctx.word_offset(1);
        for m in 1..=n {
            let count = ctx.words_of_length(m);
            let j = n - m;
            let scale = p.pow(j as u32);
            for (lex, &c) in dev.coeffs[start..start + count].iter().enumerate() {
                if c != 0 && valuation(c, p) as usize == j {
                    out.set_by_rank(j, lex, (c / scale) % p);
                }
            }
            start += count;
        }
        Ok(out)
    }
}

impl fmt::Display for GroupElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.series.fmt(f)
    }
}

/// Evaluates a word with `s_i ↦ 1 + x_i`.
pub fn evaluate_word(ctx: TruncationContext, w: &GroupWord) -> Result<GroupElement> {
    Ok(match w {
        GroupWord::Identity => GroupElement::identity(ctx),
        GroupWord::Gen(i) => GroupElement::generator(ctx, *i)?,
        GroupWord::Pow(base, k) => evaluate_word(ctx, base)?.pow(*k),
        GroupWord::Product(fs) => {
            let mut acc = GroupElement::identity(ctx);
            for f in fs {
                acc = acc.mul(&evaluate_word(ctx, f)?);
            }
            acc
        }
        GroupWord::Comm(a, b) => evaluate_word(ctx, a)?.comm(&evaluate_word(ctx, b)?),
    })
}

/// Exponents whose magnitude reaches `p^N`; they are reduced modulo `p^N`,
/// which is exact in `S/S^(N+1)`.
pub fn exponent_warnings(ctx: TruncationContext, w: &GroupWord) -> Vec<String> {
    fn walk(w: &GroupWord, bound: u64, out: &mut Vec<String>) {
        match w {
            GroupWord::Identity | GroupWord::Gen(_) => {}
            GroupWord::Pow(b, k) => {
                if k.unsigned_abs() >= bound {
                    out.push(format!(
                        "exponent {k} reduced modulo {bound} (exact in S/S^(N+1))"
                    ));
                }
                walk(b, bound, out);
            }
            GroupWord::Product(fs) => fs.iter().for_each(|f| walk(f, bound, out)),
            GroupWord::Comm(a, b) => {
                walk(a, bound, out);
                walk(b, bound, out);
            }
        }
    }
    let mut out = Vec::new();
    walk(w, ctx.exponent_bound(), &mut out);
    out
}
