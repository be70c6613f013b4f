//! Exact linear algebra over the prime field F_p.
//!
//! Everything is dense Gaussian elimination with deterministic pivoting
//! (first nonzero entry in column order), so kernel bases and homology
//! representatives are reproducible run to run.  Blocks in this problem
//! are small once split by internal degree and filtration; sparsity is
//! not worth the bookkeeping.

use serde::Serialize;

use crate::error::{Error, Result};

pub fn is_prime(p: u32) -> bool {
    if p < 2 {
        return false;
    }
    let mut d = 2u32;
    while (d as u64) * (d as u64) <= p as u64 {
        if p % d == 0 {
            return false;
        }
        d += 1;
    }
    true
}

/// Multiplicative inverse mod p (p prime, a != 0).
pub fn inv_mod(a: u32, p: u32) -> u32 {
    pow_mod(a, p - 2, p)
}

pub fn pow_mod(base: u32, mut exp: u32, p: u32) -> u32 {
    let mut acc: u64 = 1;
    let mut b = base as u64 % p as u64;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = acc * b % p as u64;
        }
        b = b * b % p as u64;
        exp >>= 1;
    }
    acc as u32
}

/// Dense matrix over F_p, row-major, entries reduced mod p.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct FpMatrix {
    p: u32,
    rows: usize,
    cols: usize,
    entries: Vec<u32>,
}

impl FpMatrix {
    pub fn new(p: u32, rows: usize, cols: usize, entries: Vec<u32>) -> Result<Self> {
        if !is_prime(p) {
            return Err(Error::NotPrime(p));
        }
        if entries.len() != rows * cols {
            return Err(Error::Shape(format!(
                "{} entries for a {rows}x{cols} matrix",
                entries.len()
            )));
        }
        let entries = entries.into_iter().map(|e| e % p).collect();
        Ok(Self { p, rows, cols, entries })
    }

    pub fn zero(p: u32, rows: usize, cols: usize) -> Result<Self> {
        Self::new(p, rows, cols, vec![0; rows * cols])
    }

    pub fn identity(p: u32, n: usize) -> Result<Self> {
        let mut m = Self::zero(p, n, n)?;
        for i in 0..n {
            m.set(i, i, 1);
        }
        Ok(m)
    }

    pub fn p(&self) -> u32 {
        self.p
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, r: usize, c: usize) -> u32 {
        self.entries[r * self.cols + c]
    }

    pub fn set(&mut self, r: usize, c: usize, v: u32) {
        self.entries[r * self.cols + c] = v % self.p;
    }

    /// F_p-rank via elimination on a working copy.
    pub fn rank(&self) -> usize {
        let mut work = self.entries.clone();
        rref(&mut work, self.rows, self.cols, self.p).len()
    }

    /// Basis of the null space { v : m v = 0 }.
    ///
    /// Returns `cols - rank` vectors, one per free column, in column order.
    pub fn kernel_basis(&self) -> Vec<Vec<u32>> {
        let p = self.p as u64;
        let mut work = self.entries.clone();
        let pivots = rref(&mut work, self.rows, self.cols, self.p);
        let pivot_set: Vec<Option<usize>> = {
            let mut v = vec![None; self.cols];
            for (r, &c) in pivots.iter().enumerate() {
                v[c] = Some(r);
            }
            v
        };
        let mut basis = Vec::new();
        for free in 0..self.cols {
            if pivot_set[free].is_some() {
                continue;
            }
            let mut vec = vec![0u32; self.cols];
            vec[free] = 1;
            for (r, &c) in pivots.iter().enumerate() {
                let e = work[r * self.cols + free] as u64;
                vec[c] = ((p - e) % p) as u32;
            }
            basis.push(vec);
        }
        basis
    }

    /// Matrix-vector product.
    pub fn apply(&self, v: &[u32]) -> Vec<u32> {
        let p = self.p as u64;
        (0..self.rows)
            .map(|r| {
                let mut acc = 0u64;
                for c in 0..self.cols {
                    acc = (acc + self.entries[r * self.cols + c] as u64 * v[c] as u64 % p) % p;
                }
                acc as u32
            })
            .collect()
    }

    fn compose(&self, inner: &FpMatrix) -> Result<FpMatrix> {
        if self.cols != inner.rows {
            return Err(Error::Shape(format!(
                "cannot compose {}x{} with {}x{}",
                self.rows, self.cols, inner.rows, inner.cols
            )));
        }
        let p = self.p as u64;
        let mut out = FpMatrix::zero(self.p, self.rows, inner.cols)?;
        for r in 0..self.rows {
            for m in 0..self.cols {
                let a = self.entries[r * self.cols + m] as u64;
                if a == 0 {
                    continue;
                }
                for c in 0..inner.cols {
                    let b = inner.entries[m * inner.cols + c] as u64;
                    if b == 0 {
                        continue;
                    }
                    let idx = r * inner.cols + c;
                    out.entries[idx] = ((out.entries[idx] as u64 + a * b % p) % p) as u32;
                }
            }
        }
        Ok(out)
    }
}

/// dim ker(d_out) - rank(d_in) for a pair of composable differentials
/// d_in: C_{s-1} -> C_s, d_out: C_s -> C_{s+1}.
///
/// Fails if d_out . d_in != 0, which signals a differential-rule bug
/// upstream rather than a legitimate answer.
pub fn homology_dimension(d_in: &FpMatrix, d_out: &FpMatrix) -> Result<usize> {
    if d_in.p != d_out.p {
        return Err(Error::Shape("mismatched moduli".into()));
    }
    if d_out.cols != d_in.rows {
        return Err(Error::Shape(format!(
            "middle space is {} columns of d_out but {} rows of d_in",
            d_out.cols, d_in.rows
        )));
    }
    let comp = d_out.compose(d_in)?;
    for r in 0..comp.rows {
        for c in 0..comp.cols {
            if comp.get(r, c) != 0 {
                return Err(Error::CompositionNonzero { row: r, col: c });
            }
        }
    }
    let ker = d_out.cols - d_out.rank();
    Ok(ker - d_in.rank())
}

/// Reduced row echelon form in place; returns pivot column indices.
fn rref(data: &mut [u32], rows: usize, cols: usize, p: u32) -> Vec<usize> {
    let pp = p as u64;
    let mut pivots = Vec::new();
    let mut r = 0usize;
    for c in 0..cols {
        if r == rows {
            break;
        }
        let Some(pr) = (r..rows).find(|&i| data[i * cols + c] != 0) else {
            continue;
        };
        if pr != r {
            for j in 0..cols {
                data.swap(r * cols + j, pr * cols + j);
            }
        }
        let inv = inv_mod(data[r * cols + c], p) as u64;
        for j in 0..cols {
            data[r * cols + j] = (data[r * cols + j] as u64 * inv % pp) as u32;
        }
        for i in 0..rows {
            if i == r {
                continue;
            }
            let f = data[i * cols + c] as u64;
            if f == 0 {
                continue;
            }
            for j in 0..cols {
                let sub = f * data[r * cols + j] as u64 % pp;
                data[i * cols + j] = ((data[i * cols + j] as u64 + pp - sub) % pp) as u32;
            }
        }
        pivots.push(c);
        r += 1;
    }
    pivots
}

/// Incremental row-echelon span of vectors in F_p^dim.
///
/// Used for image-membership tests and for picking homology representatives
/// that are independent of the boundary space.
#[derive(Debug, Clone)]
pub struct SpanBuilder {
    p: u32,
    dim: usize,
    rows: Vec<Vec<u32>>,
    pivots: Vec<usize>,
}

impl SpanBuilder {
    pub fn new(p: u32, dim: usize) -> Self {
        Self { p, dim, rows: Vec::new(), pivots: Vec::new() }
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    fn reduce(&self, v: &[u32]) -> Vec<u32> {
        let p = self.p as u64;
        let mut w: Vec<u32> = v.iter().map(|&x| x % self.p).collect();
        for (row, &pc) in self.rows.iter().zip(&self.pivots) {
            let f = w[pc] as u64;
            if f == 0 {
                continue;
            }
            for j in 0..self.dim {
                let sub = f * row[j] as u64 % p;
                w[j] = ((w[j] as u64 + p - sub) % p) as u32;
            }
        }
        w
    }

    pub fn contains(&self, v: &[u32]) -> bool {
        self.reduce(v).iter().all(|&x| x == 0)
    }

    /// Adds `v` to the span; returns true if it was independent.
    pub fn insert(&mut self, v: &[u32]) -> bool {
        assert_eq!(v.len(), self.dim);
        let mut w = self.reduce(v);
        let Some(pc) = w.iter().position(|&x| x != 0) else {
            return false;
        };
        let inv = inv_mod(w[pc], self.p) as u64;
        let p = self.p as u64;
        for x in w.iter_mut() {
            *x = (*x as u64 * inv % p) as u32;
        }
        self.rows.push(w);
        self.pivots.push(pc);
        true
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rank_identity_and_zero() {
        assert_eq!(FpMatrix::identity(5, 3).unwrap().rank(), 3);
        assert_eq!(FpMatrix::zero(3, 4, 7).unwrap().rank(), 0);
    }

    #[test]
    fn rank_dependent_rows() {
        // row2 = 2 * row1 over F_3
        let m = FpMatrix::new(3, 2, 2, vec![1, 2, 2, 4]).unwrap();
        assert_eq!(m.rank(), 1);
    }

    #[test]
    fn kernel_of_identity_is_empty() {
        let m = FpMatrix::identity(7, 4).unwrap();
        assert!(m.kernel_basis().is_empty());
    }

    #[test]
    fn kernel_of_zero_is_everything() {
        let m = FpMatrix::zero(3, 2, 2).unwrap();
        assert_eq!(m.kernel_basis().len(), 2);
    }

    #[test]
    fn kernel_vectors_map_to_zero() {
        let m = FpMatrix::new(3, 2, 2, vec![1, 2, 2, 4]).unwrap();
        let ker = m.kernel_basis();
        assert_eq!(ker.len(), 1);
        for v in &ker {
            assert!(m.apply(v).iter().all(|&x| x == 0));
        }
        // (1,1) solves x + 2y = 0 over F_3; the computed vector is proportional
        assert!(m.apply(&[1, 1]).iter().all(|&x| x == 0));
    }

    #[test]
    fn homology_of_zero_differentials() {
        let d_in = FpMatrix::zero(5, 5, 1).unwrap();
        let d_out = FpMatrix::zero(5, 1, 5).unwrap();
        assert_eq!(homology_dimension(&d_in, &d_out).unwrap(), 5);
    }

    #[test]
    fn homology_kills_identity() {
        let d_in = FpMatrix::zero(5, 4, 1).unwrap();
        let d_out = FpMatrix::identity(5, 4).unwrap();
        assert_eq!(homology_dimension(&d_in, &d_out).unwrap(), 0);
    }

    #[test]
    fn homology_counts_quotient() {
        // d_in of rank 1 into a 3-dim space, d_out = 0 -> 3 - 1 = 2
        let d_in = FpMatrix::new(5, 3, 1, vec![1, 2, 0]).unwrap();
        let d_out = FpMatrix::zero(5, 1, 3).unwrap();
        assert_eq!(homology_dimension(&d_in, &d_out).unwrap(), 2);
    }

    #[test]
    fn composition_check_fires() {
        let d_in = FpMatrix::identity(3, 2).unwrap();
        let d_out = FpMatrix::identity(3, 2).unwrap();
        assert!(matches!(
            homology_dimension(&d_in, &d_out),
            Err(Error::CompositionNonzero { .. })
        ));
    }

    #[test]
    fn non_prime_modulus_rejected() {
        assert!(matches!(FpMatrix::zero(6, 1, 1), Err(Error::NotPrime(6))));
        assert!(matches!(FpMatrix::zero(1, 1, 1), Err(Error::NotPrime(1))));
    }

    #[test]
    fn span_builder_membership() {
        let mut sp = SpanBuilder::new(3, 3);
        assert!(sp.insert(&[1, 2, 0]));
        assert!(!sp.insert(&[2, 4, 0]));
        assert!(sp.insert(&[0, 0, 1]));
        assert!(sp.contains(&[2, 1, 2]));
        assert!(!sp.contains(&[0, 1, 0]));
        assert_eq!(sp.rank(), 2);
    }
}
