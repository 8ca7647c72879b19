//! Exact linear algebra over a prime field F_p.
//!
//! Matrices are stored sparsely as a map of nonzero entries; elimination
//! switches to dense rows when the density exceeds 25%. All pivoting is a
//! deterministic left-to-right column scan picking the first nonzero row,
//! so ranks, kernels, and everything built on them are reproducible.

use std::collections::BTreeMap;

use thiserror::Error;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum LinalgError {
    #[error("dimension mismatch: d_in is {in_rows}x{in_cols}, d_out is {out_rows}x{out_cols}")]
    DimensionMismatch { in_rows: usize, in_cols: usize, out_rows: usize, out_cols: usize },
    #[error("moduli differ: {0} vs {1}")]
    ModulusMismatch(u64, u64),
    #[error("composition d_in * d_out is nonzero: not a chain complex window")]
    CompositionNonzero,
    #[error("rank bookkeeping exceeded the chain dimension")]
    RankOverflow,
}

/// Matrix over F_p with sparse map-of-entries storage.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct PrimeFieldMatrix {
    rows: usize,
    cols: usize,
    p: u64,
    entries: BTreeMap<(usize, usize), u64>,
}

const DENSE_THRESHOLD: f64 = 0.25;

impl PrimeFieldMatrix {
    /// Zero matrix. `p` must be a prime; products must fit in u64, so
    /// `p < 2^31` is enforced.
    pub fn zero(rows: usize, cols: usize, p: u64) -> Self {
        assert!((2..1u64 << 31).contains(&p), "field characteristic out of range");
        PrimeFieldMatrix { rows, cols, p, entries: BTreeMap::new() }
    }

    /// Set entry (i, j) to `value` mod p, dropping explicit zeros.
    pub fn set(&mut self, i: usize, j: usize, value: i64) {
        assert!(i < self.rows && j < self.cols, "entry out of bounds");
        let v = value.rem_euclid(self.p as i64) as u64;
        if v == 0 {
            self.entries.remove(&(i, j));
        } else {
            self.entries.insert((i, j), v);
        }
    }

    pub fn from_dense(p: u64, data: Vec<Vec<i64>>) -> Self {
        let rows = data.len();
        let cols = data.first().map_or(0, Vec::len);
        let mut m = PrimeFieldMatrix::zero(rows, cols, p);
        for (i, row) in data.iter().enumerate() {
            assert_eq!(row.len(), cols, "ragged rows");
            for (j, &v) in row.iter().enumerate() {
                m.set(i, j, v);
            }
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn modulus(&self) -> u64 {
        self.p
    }

    pub fn get(&self, i: usize, j: usize) -> u64 {
        *self.entries.get(&(i, j)).unwrap_or(&0)
    }

    pub fn num_nonzero(&self) -> usize {
        self.entries.len()
    }

    pub fn is_zero(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn density(&self) -> f64 {
        if self.rows == 0 || self.cols == 0 {
            0.0
        } else {
            self.entries.len() as f64 / (self.rows * self.cols) as f64
        }
    }

    pub fn transpose(&self) -> Self {
        let mut m = PrimeFieldMatrix::zero(self.cols, self.rows, self.p);
        for (&(i, j), &v) in &self.entries {
            m.entries.insert((j, i), v);
        }
        m
    }

    pub fn mul(&self, other: &Self) -> Result<Self, LinalgError> {
        if self.p != other.p {
            return Err(LinalgError::ModulusMismatch(self.p, other.p));
        }
        if self.cols != other.rows {
            return Err(LinalgError::DimensionMismatch {
                in_rows: self.rows,
                in_cols: self.cols,
                out_rows: other.rows,
                out_cols: other.cols,
            });
        }
        let mut by_row: BTreeMap<usize, Vec<(usize, u64)>> = BTreeMap::new();
        for (&(i, j), &v) in &other.entries {
            by_row.entry(i).or_default().push((j, v));
        }
        let mut out = PrimeFieldMatrix::zero(self.rows, other.cols, self.p);
        for (&(i, t), &a) in &self.entries {
            if let Some(row) = by_row.get(&t) {
                for &(j, b) in row {
                    let cur = out.get(i, j);
                    let v = (cur + a * b % self.p) % self.p;
                    out.set(i, j, v as i64);
                }
            }
        }
        Ok(out)
    }

    /// Rank by Gaussian elimination, deterministic pivot scan.
    pub fn rank(&self) -> usize {
        if self.entries.is_empty() {
            return 0;
        }
        if self.density() > DENSE_THRESHOLD {
            dense_echelon(self.to_dense_rows(), self.cols, self.p).1.len()
        } else {
            sparse_echelon(self.to_sparse_rows(), self.cols, self.p).1.len()
        }
    }

    /// Canonical kernel basis: one vector per free column, ascending, with
    /// a 1 in the free position. Vectors have length `cols`.
    pub fn kernel_basis(&self) -> Vec<Vec<u64>> {
        let (rref, pivots) = if self.density() > DENSE_THRESHOLD {
            let (rows, pivots) = dense_echelon(self.to_dense_rows(), self.cols, self.p);
            (rows.into_iter().map(sparse_from_dense).collect::<Vec<_>>(), pivots)
        } else {
            sparse_echelon(self.to_sparse_rows(), self.cols, self.p)
        };
        let pivot_set: BTreeMap<usize, usize> =
            pivots.iter().enumerate().map(|(r, &c)| (c, r)).collect();
        let mut basis = Vec::new();
        for free in (0..self.cols).filter(|c| !pivot_set.contains_key(c)) {
            let mut v = vec![0u64; self.cols];
            v[free] = 1;
            for (&pc, &pr) in &pivot_set {
                let coeff = rref[pr].get(&free).copied().unwrap_or(0);
                if coeff != 0 {
                    v[pc] = self.p - coeff;
                }
            }
            basis.push(v);
        }
        basis
    }

    /// Apply the matrix to a column vector.
    pub fn apply(&self, v: &[u64]) -> Vec<u64> {
        assert_eq!(v.len(), self.cols);
        let mut out = vec![0u64; self.rows];
        for (&(i, j), &a) in &self.entries {
            out[i] = (out[i] + a * (v[j] % self.p)) % self.p;
        }
        out
    }

    fn to_dense_rows(&self) -> Vec<Vec<u64>> {
        let mut rows = vec![vec![0u64; self.cols]; self.rows];
        for (&(i, j), &v) in &self.entries {
            rows[i][j] = v;
        }
        rows
    }

    fn to_sparse_rows(&self) -> Vec<BTreeMap<usize, u64>> {
        let mut rows = vec![BTreeMap::new(); self.rows];
        for (&(i, j), &v) in &self.entries {
            rows[i].insert(j, v);
        }
        rows
    }
}

fn sparse_from_dense(row: Vec<u64>) -> BTreeMap<usize, u64> {
    row.into_iter().enumerate().filter(|&(_, v)| v != 0).collect()
}

/// Reduced row echelon form, dense rows. Returns the rows and the pivot
/// columns in order.
fn dense_echelon(mut rows: Vec<Vec<u64>>, cols: usize, p: u64) -> (Vec<Vec<u64>>, Vec<usize>) {
    let mut pivots = Vec::new();
    let mut next_row = 0;
    for col in 0..cols {
        let Some(pivot_row) = (next_row..rows.len()).find(|&r| rows[r][col] != 0) else {
            continue;
        };
        rows.swap(next_row, pivot_row);
        let inv = mod_inverse(rows[next_row][col], p);
        for x in rows[next_row][col..].iter_mut() {
            *x = *x * inv % p;
        }
        let pivot = rows[next_row].clone();
        for (r, row) in rows.iter_mut().enumerate() {
            if r != next_row && row[col] != 0 {
                let factor = row[col];
                for (x, &pv) in row[col..].iter_mut().zip(&pivot[col..]) {
                    let sub = factor * pv % p;
                    *x = (*x + p - sub) % p;
                }
            }
        }
        pivots.push(col);
        next_row += 1;
        if next_row == rows.len() {
            break;
        }
    }
    rows.truncate(pivots.len());
    (rows, pivots)
}

/// Reduced row echelon form on sparse rows.
fn sparse_echelon(
    mut rows: Vec<BTreeMap<usize, u64>>,
    cols: usize,
    p: u64,
) -> (Vec<BTreeMap<usize, u64>>, Vec<usize>) {
    let mut pivots = Vec::new();
    let mut next_row = 0;
    for col in 0..cols {
        let Some(pivot_row) = (next_row..rows.len()).find(|&r| rows[r].contains_key(&col)) else {
            continue;
        };
        rows.swap(next_row, pivot_row);
        let inv = mod_inverse(rows[next_row][&col], p);
        let pivot: BTreeMap<usize, u64> =
            rows[next_row].iter().map(|(&c, &v)| (c, v * inv % p)).collect();
        rows[next_row] = pivot.clone();
        for (r, row) in rows.iter_mut().enumerate() {
            if r == next_row {
                continue;
            }
            let Some(&factor) = row.get(&col) else { continue };
            for (&c, &v) in &pivot {
                let sub = factor * v % p;
                let cur = row.get(&c).copied().unwrap_or(0);
                let new = (cur + p - sub) % p;
                if new == 0 {
                    row.remove(&c);
                } else {
                    row.insert(c, new);
                }
            }
        }
        pivots.push(col);
        next_row += 1;
        if next_row == rows.len() {
            break;
        }
    }
    rows.truncate(pivots.len());
    (rows, pivots)
}

fn mod_inverse(a: u64, p: u64) -> u64 {
    // Extended Euclid; a is nonzero mod the prime p.
    let (mut t, mut new_t): (i64, i64) = (0, 1);
    let (mut r, mut new_r): (i64, i64) = (p as i64, (a % p) as i64);
    while new_r != 0 {
        let q = r / new_r;
        (t, new_t) = (new_t, t - q * new_t);
        (r, new_r) = (new_r, r - q * new_r);
    }
    assert_eq!(r, 1, "attempted to invert a noninvertible element");
    t.rem_euclid(p as i64) as u64
}

/// Trial-division primality check for CLI-supplied characteristics.
pub fn is_prime(p: u64) -> bool {
    if p < 2 {
        return false;
    }
    let mut d = 2;
    while d * d <= p {
        if p.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

/// Dimension of homology at a chain window `C_{q+1} --d_out--> C_q
/// --d_in--> C_{q-1}`: dim C_q - rank d_in - rank d_out.
///
/// `d_in` has cols = dim C_q; `d_out` has rows = dim C_q. Errors if the
/// window dimensions disagree or the maps do not compose to zero.
pub fn homology_dim(
    d_in: &PrimeFieldMatrix,
    d_out: &PrimeFieldMatrix,
) -> Result<usize, LinalgError> {
    if d_in.modulus() != d_out.modulus() {
        return Err(LinalgError::ModulusMismatch(d_in.modulus(), d_out.modulus()));
    }
    if d_in.cols() != d_out.rows() {
        return Err(LinalgError::DimensionMismatch {
            in_rows: d_in.rows(),
            in_cols: d_in.cols(),
            out_rows: d_out.rows(),
            out_cols: d_out.cols(),
        });
    }
    if !d_in.mul(d_out)?.is_zero() {
        return Err(LinalgError::CompositionNonzero);
    }
    d_in.cols()
        .checked_sub(d_in.rank())
        .and_then(|k| k.checked_sub(d_out.rank()))
        .ok_or(LinalgError::RankOverflow)
}
