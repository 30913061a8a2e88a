//! Exact linear algebra over F_p.
//!
//! Everything here works with canonical residues in `[0, p)`. Pivot choice is
//! deterministic (leftmost nonzero column, earliest row) so reports built on
//! top of it are reproducible byte for byte.

use std::collections::BTreeMap;

use serde::Serialize;

use crate::arith::{inv_mod_prime, is_prime, mul_mod};
use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FpMatrix {
    p: u64,
    rows: usize,
    cols: usize,
    entries: Vec<u64>,
}

impl FpMatrix {
    /// Row-major constructor; entries are reduced mod `p`.
    pub fn new(p: u64, rows: usize, cols: usize, entries: Vec<u64>) -> Result<Self> {
        if !is_prime(p) {
            return Err(Error::CompositeModulus(p));
        }
        if entries.len() != rows * cols {
            return Err(Error::DimensionMismatch {
                expected: rows * cols,
                got: entries.len(),
            });
        }
        let entries = entries.into_iter().map(|e| e % p).collect();
        Ok(Self {
            p,
            rows,
            cols,
            entries,
        })
    }

    pub fn from_rows(p: u64, cols: usize, rows: &[Vec<u64>]) -> Result<Self> {
        let mut entries = Vec::with_capacity(rows.len() * cols);
        for r in rows {
            if r.len() != cols {
                return Err(Error::DimensionMismatch {
                    expected: cols,
                    got: r.len(),
                });
            }
            entries.extend_from_slice(r);
        }
        Self::new(p, rows.len(), cols, entries)
    }

    pub fn zeros(p: u64, rows: usize, cols: usize) -> Result<Self> {
        Self::new(p, rows, cols, vec![0; rows * cols])
    }

    pub fn p(&self) -> u64 {
        self.p
    }

    pub fn shape(&self) -> (usize, usize) {
        (self.rows, self.cols)
    }

    pub fn get(&self, r: usize, c: usize) -> u64 {
        self.entries[r * self.cols + c]
    }

    pub fn row(&self, r: usize) -> &[u64] {
        &self.entries[r * self.cols..(r + 1) * self.cols]
    }

    /// Matrix-vector product `M v`.
    pub fn apply(&self, v: &[u64]) -> Result<Vec<u64>> {
        if v.len() != self.cols {
            return Err(Error::DimensionMismatch {
                expected: self.cols,
                got: v.len(),
            });
        }
        Ok((0..self.rows)
            .map(|r| {
                self.row(r)
                    .iter()
                    .zip(v)
                    .fold(0, |acc, (&a, &b)| (acc + mul_mod(a, b, self.p)) % self.p)
            })
            .collect())
    }
}

/// Reduced row-echelon basis of a row space.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct EchelonBasis {
    p: u64,
    cols: usize,
    pivots: Vec<usize>,
    rows: Vec<Vec<u64>>,
}

impl EchelonBasis {
    pub fn empty(p: u64, cols: usize) -> Self {
        Self {
            p,
            cols,
            pivots: Vec::new(),
            rows: Vec::new(),
        }
    }

    pub fn p(&self) -> u64 {
        self.p
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    pub fn pivots(&self) -> &[usize] {
        &self.pivots
    }

    pub fn rows(&self) -> &[Vec<u64>] {
        &self.rows
    }

    pub fn contains(&self, v: &[u64]) -> Result<bool> {
        let (residual, _) = reduce_against(v, self)?;
        Ok(residual.iter().all(|&x| x == 0))
    }

    /// Subspace containment `self ⊆ other`.
    pub fn is_subspace_of(&self, other: &EchelonBasis) -> Result<bool> {
        for r in &self.rows {
            if !other.contains(r)? {
                return Ok(false);
            }
        }
        Ok(true)
    }
}

/// Row-reduces `m` to its reduced row-echelon basis.
pub fn echelonize(m: &FpMatrix) -> Result<EchelonBasis> {
    echelonize_rows(
        m.p,
        m.cols,
        (0..m.rows).map(|r| m.row(r).to_vec()).collect(),
    )
}

/// Same as [`echelonize`] on an explicit row list (rows are reduced mod `p`).
pub fn echelonize_rows(p: u64, cols: usize, mut rows: Vec<Vec<u64>>) -> Result<EchelonBasis> {
    if !is_prime(p) {
        return Err(Error::CompositeModulus(p));
    }
    for r in rows.iter_mut() {
        if r.len() != cols {
            return Err(Error::DimensionMismatch {
                expected: cols,
                got: r.len(),
            });
        }
        r.iter_mut().for_each(|x| *x %= p);
    }
    let mut pivots = Vec::new();
    let mut rank = 0;
    for c in 0..cols {
        let Some(found) = (rank..rows.len()).find(|&r| rows[r][c] != 0) else {
            continue;
        };
        rows.swap(rank, found);
        let inv = inv_mod_prime(rows[rank][c], p);
        for x in rows[rank].iter_mut() {
            *x = mul_mod(*x, inv, p);
        }
        let pivot_row = rows[rank].clone();
        for (r, row) in rows.iter_mut().enumerate() {
            if r == rank || row[c] == 0 {
                continue;
            }
            let f = row[c];
            axpy(row, p - f, &pivot_row, p);
        }
        pivots.push(c);
        rank += 1;
    }
    rows.truncate(rank);
    Ok(EchelonBasis {
        p,
        cols,
        pivots,
        rows,
    })
}

/// `y += a * x` over F_p.
pub(crate) fn axpy(y: &mut [u64], a: u64, x: &[u64], p: u64) {
    if a % p == 0 {
        return;
    }
    for (yi, &xi) in y.iter_mut().zip(x) {
        if xi != 0 {
            *yi = (*yi + mul_mod(a, xi, p)) % p;
        }
    }
}

/// Returns `(residual, coefficients)` with `v = Σ coefficients[i]·rows[i] + residual`.
pub fn reduce_against(v: &[u64], b: &EchelonBasis) -> Result<(Vec<u64>, Vec<u64>)> {
    if v.len() != b.cols {
        return Err(Error::DimensionMismatch {
            expected: b.cols,
            got: v.len(),
        });
    }
    let p = b.p;
    let mut residual: Vec<u64> = v.iter().map(|&x| x % p).collect();
    let mut coeffs = vec![0; b.rows.len()];
    for (i, (&c, row)) in b.pivots.iter().zip(&b.rows).enumerate() {
        let f = residual[c];
        if f != 0 {
            coeffs[i] = f;
            axpy(&mut residual, p - f, row, p);
        }
    }
    Ok((residual, coeffs))
}

pub fn rank(m: &FpMatrix) -> Result<usize> {
    Ok(echelonize(m)?.rank())
}

/// Basis of the right kernel `{v : M v = 0}`.
pub fn kernel(m: &FpMatrix) -> Result<Vec<Vec<u64>>> {
    let e = echelonize(m)?;
    let p = m.p;
    let pivot_set: BTreeMap<usize, usize> =
        e.pivots.iter().enumerate().map(|(i, &c)| (c, i)).collect();
    let mut out = Vec::new();
    for free in (0..m.cols).filter(|c| !pivot_set.contains_key(c)) {
        let mut v = vec![0; m.cols];
        v[free] = 1;
        for (&c, &i) in &pivot_set {
            let x = e.rows[i][free];
            v[c] = (p - x) % p;
        }
        out.push(v);
    }
    Ok(out)
}

/// Incremental echelon form that keeps rows in insertion order.
///
/// Rows are normalized (pivot entry 1, zeros left of the pivot) but are not
/// back-substituted, so each stored row stays tied to whatever produced it.
#[derive(Debug, Clone)]
pub struct RowReducer {
    p: u64,
    cols: usize,
    rows: Vec<Vec<u64>>,
    row_pivots: Vec<usize>,
    by_pivot: BTreeMap<usize, usize>,
}

impl RowReducer {
    pub fn new(p: u64, cols: usize) -> Self {
        Self {
            p,
            cols,
            rows: Vec::new(),
            row_pivots: Vec::new(),
            by_pivot: BTreeMap::new(),
        }
    }

    pub fn len(&self) -> usize {
        self.rows.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rows.is_empty()
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn rows(&self) -> &[Vec<u64>] {
        &self.rows
    }

    pub fn pivot_of(&self, row: usize) -> usize {
        self.row_pivots[row]
    }

    /// Residual and per-row coefficients (indexed by insertion order).
    pub fn reduce(&self, v: &[u64]) -> (Vec<u64>, Vec<u64>) {
        assert_eq!(v.len(), self.cols);
        let p = self.p;
        let mut residual: Vec<u64> = v.iter().map(|&x| x % p).collect();
        let mut coeffs = vec![0; self.rows.len()];
        for (&c, &i) in &self.by_pivot {
            let f = residual[c];
            if f != 0 {
                coeffs[i] = f;
                axpy(&mut residual, p - f, &self.rows[i], p);
            }
        }
        (residual, coeffs)
    }

    /// Inserts a nonzero fully reduced residual whose leading entry is 1.
    /// Returns the new row index.
    pub fn push_normalized(&mut self, row: Vec<u64>) -> usize {
        let pivot = row.iter().position(|&x| x != 0).expect("zero row");
        assert_eq!(row[pivot], 1, "row must be normalized");
        assert!(!self.by_pivot.contains_key(&pivot), "pivot already taken");
        let idx = self.rows.len();
        self.by_pivot.insert(pivot, idx);
        self.row_pivots.push(pivot);
        self.rows.push(row);
        idx
    }

    pub fn to_basis(&self) -> EchelonBasis {
        echelonize_rows(self.p, self.cols, self.rows.clone()).expect("prime modulus")
    }
}
