//! Exact dense linear algebra over the rationals.
//!
//! Everything here is deterministic and exact: Gaussian elimination with the
//! leftmost-pivot rule, reduced row echelon form, kernel bases, and linear
//! solves.  Matrices are small (the oracle works with modules of dimension a
//! few dozen), so the dense representation is the right trade-off.
//!
//! Two idioms recur in the oracle and are provided as first-class utilities:
//!
//! * [`Matrix::kernel_basis`] — a basis of the right null space, used to find
//!   highest-weight vectors as joint kernels of raising generators;
//! * [`RowSpan`] — an incrementally grown subspace in reduced row echelon
//!   form with exact membership tests, used for cyclic spans of submodules.
//!
//! Rows produced by elimination are rescaled to primitive integer vectors
//! (no common factor, first nonzero entry positive) so intermediate entries
//! stay small and output bases are canonical.

use crate::exact::Rational;
use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};
use std::fmt;

/// A dense `rows × cols` matrix of exact rationals, row-major.
#[derive(Clone, PartialEq, Eq)]
pub struct Matrix {
    rows: usize,
    cols: usize,
    data: Vec<Rational>,
}

impl Matrix {
    /// The zero matrix of the given dimensions.
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Matrix {
            rows,
            cols,
            data: vec![Rational::zero(); rows * cols],
        }
    }

    /// The identity matrix of size `n`.
    pub fn identity(n: usize) -> Self {
        let mut m = Matrix::zeros(n, n);
        for i in 0..n {
            m.set(i, i, Rational::one());
        }
        m
    }

    /// Build a matrix entry-wise from a closure.
    pub fn from_fn<F: FnMut(usize, usize) -> Rational>(rows: usize, cols: usize, mut f: F) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                data.push(f(i, j));
            }
        }
        Matrix { rows, cols, data }
    }

    /// Build from row vectors; all rows must share a length.
    pub fn from_rows(rows: Vec<Vec<Rational>>) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        assert!(rows.iter().all(|row| row.len() == c), "ragged rows");
        Matrix {
            rows: r,
            cols: c,
            data: rows.into_iter().flatten().collect(),
        }
    }

    pub fn nrows(&self) -> usize {
        self.rows
    }

    pub fn ncols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> &Rational {
        &self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: Rational) {
        self.data[i * self.cols + j] = v;
    }

    pub fn row(&self, i: usize) -> &[Rational] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(Rational::is_zero)
    }

    /// Matrix product `self · rhs`.
    pub fn mul(&self, rhs: &Matrix) -> Matrix {
        assert_eq!(self.cols, rhs.rows, "dimension mismatch in matrix product");
        let mut out = Matrix::zeros(self.rows, rhs.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..rhs.cols {
                    let b = rhs.get(k, j);
                    if b.is_zero() {
                        continue;
                    }
                    let cur = out.get(i, j).clone();
                    out.set(i, j, cur + a * b);
                }
            }
        }
        out
    }

    /// Matrix–vector product `self · v`.
    pub fn mul_vec(&self, v: &[Rational]) -> Vec<Rational> {
        assert_eq!(self.cols, v.len(), "dimension mismatch in matrix-vector product");
        let mut out = vec![Rational::zero(); self.rows];
        for i in 0..self.rows {
            let mut acc = Rational::zero();
            for (j, x) in v.iter().enumerate() {
                if x.is_zero() {
                    continue;
                }
                acc += self.get(i, j) * x;
            }
            out[i] = acc;
        }
        out
    }

    /// Entry-wise sum.
    pub fn add(&self, rhs: &Matrix) -> Matrix {
        assert_eq!((self.rows, self.cols), (rhs.rows, rhs.cols));
        Matrix {
            rows: self.rows,
            cols: self.cols,
            data: self
                .data
                .iter()
                .zip(&rhs.data)
                .map(|(a, b)| a + b)
                .collect(),
        }
    }

    /// Entry-wise difference.
    pub fn sub(&self, rhs: &Matrix) -> Matrix {
        assert_eq!((self.rows, self.cols), (rhs.rows, rhs.cols));
        Matrix {
            rows: self.rows,
            cols: self.cols,
            data: self
                .data
                .iter()
                .zip(&rhs.data)
                .map(|(a, b)| a - b)
                .collect(),
        }
    }

    /// Multiply every entry by a scalar.
    pub fn scale(&self, s: &Rational) -> Matrix {
        Matrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|a| a * s).collect(),
        }
    }

    /// `self - s·I` for square matrices.
    pub fn sub_scalar_diag(&self, s: &Rational) -> Matrix {
        assert_eq!(self.rows, self.cols, "sub_scalar_diag needs a square matrix");
        let mut out = self.clone();
        for i in 0..self.rows {
            let cur = out.get(i, i).clone();
            out.set(i, i, cur - s.clone());
        }
        out
    }

    pub fn transpose(&self) -> Matrix {
        Matrix::from_fn(self.cols, self.rows, |i, j| self.get(j, i).clone())
    }

    /// Stack two matrices vertically.
    pub fn vstack(&self, below: &Matrix) -> Matrix {
        assert_eq!(self.cols, below.cols, "vstack needs equal column counts");
        let mut data = self.data.clone();
        data.extend(below.data.iter().cloned());
        Matrix {
            rows: self.rows + below.rows,
            cols: self.cols,
            data,
        }
    }

    /// In-place reduced row echelon form; returns the pivot column of each
    /// nonzero row (so `pivots.len()` is the rank).  Rows are rescaled to the
    /// canonical primitive-integer form after reduction.
    pub fn rref(&mut self) -> Vec<usize> {
        let mut pivots = Vec::new();
        let mut row = 0;
        for col in 0..self.cols {
            // Leftmost-pivot rule with the first nonzero candidate.
            let Some(p) = (row..self.rows).find(|&r| !self.get(r, col).is_zero()) else {
                continue;
            };
            self.swap_rows(row, p);
            let inv = self.get(row, col).inverse().expect("pivot is nonzero");
            for j in col..self.cols {
                let v = self.get(row, j) * &inv;
                self.set(row, j, v);
            }
            for r in 0..self.rows {
                if r == row || self.get(r, col).is_zero() {
                    continue;
                }
                let factor = self.get(r, col).clone();
                for j in col..self.cols {
                    let v = self.get(r, j) - &(&factor * self.get(row, j));
                    self.set(r, j, v);
                }
            }
            pivots.push(col);
            row += 1;
            if row == self.rows {
                break;
            }
        }
        for r in 0..row {
            let prim = primitive_scaled(self.row(r));
            self.data[r * self.cols..(r + 1) * self.cols].clone_from_slice(&prim);
        }
        pivots
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for j in 0..self.cols {
            self.data.swap(a * self.cols + j, b * self.cols + j);
        }
    }

    pub fn rank(&self) -> usize {
        let mut m = self.clone();
        m.rref().len()
    }

    /// A canonical basis of the right kernel `{x : self·x = 0}`, one vector
    /// per free column of the RREF, in ascending free-column order, each
    /// rescaled to primitive-integer form.
    pub fn kernel_basis(&self) -> Vec<Vec<Rational>> {
        let mut m = self.clone();
        let pivots = m.rref();
        let pivot_set: std::collections::BTreeSet<usize> = pivots.iter().copied().collect();
        let mut basis = Vec::new();
        for free in 0..self.cols {
            if pivot_set.contains(&free) {
                continue;
            }
            let mut v = vec![Rational::zero(); self.cols];
            v[free] = Rational::one();
            for (r, &pc) in pivots.iter().enumerate() {
                // RREF rows are primitive-scaled, so renormalize by the pivot.
                v[pc] = -&(m.get(r, free) / m.get(r, pc));
            }
            basis.push(primitive_scaled(&v));
        }
        basis
    }

    /// Solve `self · x = b` exactly.  Returns `None` when inconsistent; when
    /// the system is underdetermined, the solution with zero free variables
    /// is returned (deterministic).
    pub fn solve(&self, b: &[Rational]) -> Option<Vec<Rational>> {
        assert_eq!(self.rows, b.len(), "dimension mismatch in solve");
        let mut aug = Matrix::from_fn(self.rows, self.cols + 1, |i, j| {
            if j < self.cols {
                self.get(i, j).clone()
            } else {
                b[i].clone()
            }
        });
        let pivots = aug.rref();
        if pivots.last().is_some_and(|&p| p == self.cols) {
            return None; // a pivot in the RHS column means inconsistency
        }
        let mut x = vec![Rational::zero(); self.cols];
        for (r, &pc) in pivots.iter().enumerate() {
            // RREF rows are primitive-scaled, so renormalize by the pivot.
            let pivot = aug.get(r, pc).clone();
            x[pc] = aug.get(r, self.cols) / &pivot;
        }
        Some(x)
    }
}

impl fmt::Debug for Matrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "Matrix {}x{} [", self.rows, self.cols)?;
        for i in 0..self.rows {
            let row: Vec<String> = self.row(i).iter().map(Rational::to_string).collect();
            writeln!(f, "  [{}]", row.join(", "))?;
        }
        write!(f, "]")
    }
}

/// Rescale a rational vector to the canonical primitive-integer form: entries
/// share no common factor, denominators are cleared, and the first nonzero
/// entry is positive.  The zero vector is returned unchanged.
pub fn primitive_scaled(v: &[Rational]) -> Vec<Rational> {
    let Some(first) = v.iter().find(|x| !x.is_zero()) else {
        return v.to_vec();
    };
    let mut lcm_den = BigInt::one();
    for x in v {
        if !x.is_zero() {
            lcm_den = lcm_den.lcm(x.denom());
        }
    }
    let ints: Vec<BigInt> = v
        .iter()
        .map(|x| (x * &Rational::from_int(lcm_den.clone())).numer().clone())
        .collect();
    let mut gcd = BigInt::zero();
    for n in &ints {
        gcd = gcd.gcd(n);
    }
    let sign = if first.is_negative() { -1 } else { 1 };
    let scale = Rational::new(BigInt::from(sign), BigInt::one())
        * Rational::new(lcm_den, gcd);
    v.iter().map(|x| x * &scale).collect()
}

/// Scalar (dot) product of two vectors.
pub fn dot(a: &[Rational], b: &[Rational]) -> Rational {
    assert_eq!(a.len(), b.len());
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

/// Dot product weighted by a diagonal bilinear form: `Σ form[i]·a[i]·b[i]`.
pub fn form_dot(form: &[Rational], a: &[Rational], b: &[Rational]) -> Rational {
    assert_eq!(a.len(), b.len());
    assert_eq!(a.len(), form.len());
    form.iter()
        .zip(a.iter().zip(b))
        .map(|(f, (x, y))| f * &(x * y))
        .sum()
}

/// `a + c·b` for vectors.
pub fn axpy(a: &[Rational], c: &Rational, b: &[Rational]) -> Vec<Rational> {
    assert_eq!(a.len(), b.len());
    a.iter().zip(b).map(|(x, y)| x + &(c * y)).collect()
}

/// A subspace maintained in reduced row echelon form, supporting incremental
/// insertion and exact membership / reduction queries.
#[derive(Clone, Debug)]
pub struct RowSpan {
    cols: usize,
    rows: Vec<Vec<Rational>>,
    pivots: Vec<usize>,
}

impl RowSpan {
    pub fn new(cols: usize) -> Self {
        RowSpan {
            cols,
            rows: Vec::new(),
            pivots: Vec::new(),
        }
    }

    pub fn dim(&self) -> usize {
        self.rows.len()
    }

    pub fn basis(&self) -> &[Vec<Rational>] {
        &self.rows
    }

    /// Reduce `v` against the span; the returned residual is zero exactly
    /// when `v` lies in the span.
    pub fn reduce(&self, v: &[Rational]) -> Vec<Rational> {
        assert_eq!(v.len(), self.cols);
        let mut w = v.to_vec();
        for (row, &p) in self.rows.iter().zip(&self.pivots) {
            if w[p].is_zero() {
                continue;
            }
            let factor = &w[p] / &row[p];
            w = axpy(&w, &(-factor), row);
        }
        w
    }

    pub fn contains(&self, v: &[Rational]) -> bool {
        self.reduce(v).iter().all(Rational::is_zero)
    }

    /// Insert `v`; returns `true` when the span grew.  The stored basis stays
    /// in RREF with primitive-integer rows.
    pub fn insert(&mut self, v: &[Rational]) -> bool {
        let w = self.reduce(v);
        let Some(p) = w.iter().position(|x| !x.is_zero()) else {
            return false;
        };
        let w = primitive_scaled(&w);
        // Back-substitute the new pivot into existing rows to keep RREF.
        for (row, _) in self.rows.iter_mut().zip(&self.pivots) {
            if row[p].is_zero() {
                continue;
            }
            let factor = &row[p] / &w[p];
            *row = axpy(row, &(-factor), &w);
        }
        for row in self.rows.iter_mut() {
            *row = primitive_scaled(row);
        }
        let at = self.pivots.partition_point(|&q| q < p);
        self.rows.insert(at, w);
        self.pivots.insert(at, p);
        true
    }

    /// Coordinates of `v` in the stored basis, or `None` when `v` is outside
    /// the span.
    pub fn coordinates(&self, v: &[Rational]) -> Option<Vec<Rational>> {
        let mut w = v.to_vec();
        let mut coords = vec![Rational::zero(); self.rows.len()];
        for (i, (row, &p)) in self.rows.iter().zip(&self.pivots).enumerate() {
            if w[p].is_zero() {
                continue;
            }
            let factor = &w[p] / &row[p];
            coords[i] = factor.clone();
            w = axpy(&w, &(-factor), row);
        }
        if w.iter().all(Rational::is_zero) {
            Some(coords)
        } else {
            None
        }
    }
}

/// Express each of `targets` in the span of `basis` (columns); `None` if any
/// target is outside.  Used to write operators in a submodule basis.
pub fn coordinates_in_basis(
    basis: &[Vec<Rational>],
    target: &[Rational],
) -> Option<Vec<Rational>> {
    let dim = target.len();
    assert!(basis.iter().all(|b| b.len() == dim));
    let m = Matrix::from_fn(dim, basis.len(), |i, j| basis[j][i].clone());
    // Solve may return a spurious "solution" only if consistent; verify exactly.
    let x = m.solve(target)?;
    let check = m.mul_vec(&x);
    if check == target.to_vec() {
        Some(x)
    } else {
        None
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::rat;

    fn v(entries: &[i64]) -> Vec<Rational> {
        entries.iter().map(|&x| Rational::from_int(x)).collect()
    }

    #[test]
    fn rref_and_rank() {
        let mut m = Matrix::from_rows(vec![v(&[1, 2, 3]), v(&[2, 4, 6]), v(&[1, 0, 1])]);
        let pivots = m.rref();
        assert_eq!(pivots, vec![0, 1]);
        assert_eq!(m.rank(), 2);
    }

    #[test]
    fn kernel_of_rank_deficient_matrix() {
        let m = Matrix::from_rows(vec![v(&[1, 2, 3]), v(&[4, 5, 6])]);
        let k = m.kernel_basis();
        assert_eq!(k.len(), 1);
        for b in &k {
            assert!(m.mul_vec(b).iter().all(Rational::is_zero));
        }
        // Canonical primitive form: (1, -2, 1).
        assert_eq!(k[0], v(&[1, -2, 1]));
    }

    #[test]
    fn kernel_renormalizes_non_unit_pivots() {
        // RREF rows stay primitive-scaled, so the pivot entry may exceed 1;
        // the back-substitution must divide it out.
        let m = Matrix::from_rows(vec![v(&[2, 1])]);
        assert_eq!(m.kernel_basis(), vec![v(&[1, -2])]);
        let m = Matrix::from_rows(vec![v(&[3, 0, 2]), v(&[0, 5, 10])]);
        let k = m.kernel_basis();
        assert_eq!(k, vec![v(&[2, 6, -3])]);
        assert!(m.mul_vec(&k[0]).iter().all(Rational::is_zero));
    }

    #[test]
    fn solve_consistent_and_inconsistent() {
        let m = Matrix::from_rows(vec![v(&[2, 0]), v(&[0, 4])]);
        let x = m.solve(&v(&[6, 8])).unwrap();
        assert_eq!(x, vec![rat(3, 1), rat(2, 1)]);
        let singular = Matrix::from_rows(vec![v(&[1, 1]), v(&[1, 1])]);
        assert!(singular.solve(&v(&[0, 1])).is_none());
        let under = Matrix::from_rows(vec![v(&[1, 1])]);
        let x = under.solve(&v(&[3])).unwrap();
        assert_eq!(under.mul_vec(&x), v(&[3]));
    }

    #[test]
    fn primitive_scaling_is_canonical() {
        let w = primitive_scaled(&[rat(-1, 2), rat(1, 3), rat(0, 1)]);
        assert_eq!(w, vec![rat(3, 1), rat(-2, 1), rat(0, 1)]);
        let z = primitive_scaled(&[Rational::zero(), Rational::zero()]);
        assert!(z.iter().all(Rational::is_zero));
    }

    #[test]
    fn row_span_membership_and_coordinates() {
        let mut span = RowSpan::new(3);
        assert!(span.insert(&v(&[1, 1, 0])));
        assert!(span.insert(&v(&[0, 1, 1])));
        assert!(!span.insert(&v(&[1, 2, 1])));
        assert_eq!(span.dim(), 2);
        assert!(span.contains(&v(&[2, 3, 1])));
        assert!(!span.contains(&v(&[0, 0, 1])));
        let c = span.coordinates(&v(&[2, 3, 1])).unwrap();
        // Reconstruct from the stored basis.
        let mut rec = vec![Rational::zero(); 3];
        for (ci, row) in c.iter().zip(span.basis()) {
            rec = axpy(&rec, ci, row);
        }
        assert_eq!(rec, v(&[2, 3, 1]));
    }

    #[test]
    fn matrix_products() {
        let a = Matrix::from_rows(vec![v(&[1, 2]), v(&[3, 4])]);
        let b = Matrix::from_rows(vec![v(&[0, 1]), v(&[1, 0])]);
        let ab = a.mul(&b);
        assert_eq!(ab, Matrix::from_rows(vec![v(&[2, 1]), v(&[4, 3])]));
        assert_eq!(a.mul_vec(&v(&[1, 1])), v(&[3, 7]));
        assert_eq!(
            a.sub_scalar_diag(&rat(1, 1)),
            Matrix::from_rows(vec![v(&[0, 2]), v(&[3, 3])])
        );
    }

    #[test]
    fn coordinates_in_explicit_basis() {
        let basis = vec![v(&[1, 0, 1]), v(&[0, 1, 1])];
        let c = coordinates_in_basis(&basis, &v(&[2, 3, 5])).unwrap();
        assert_eq!(c, vec![rat(2, 1), rat(3, 1)]);
        assert!(coordinates_in_basis(&basis, &v(&[0, 0, 1])).is_none());
    }
}
