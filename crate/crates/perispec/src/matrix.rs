//! Dense real matrices and vectors with the sup-norm operator norm.
//!
//! The operator norm induced by the sup-norm on column vectors is the maximum
//! absolute row sum, which is what [`DenseMatrix::inf_op_norm`] computes. A
//! [`StochasticMatrix`] is a validated row-stochastic square matrix: entries
//! within `validation_tol` of the constraints are repaired (negatives clamped
//! to zero, rows renormalized), anything worse is an error.

use crate::error::{Error, Result};
use crate::scalar::{from_f64, Scalar};

/// Dense row-major matrix.
#[derive(Clone, Debug, PartialEq)]
pub struct DenseMatrix<F> {
    rows: usize,
    cols: usize,
    data: Vec<F>,
}

impl<F: Scalar> DenseMatrix<F> {
    /// Build from a row-major entry buffer. Fails on a count mismatch or a
    /// non-finite entry.
    pub fn new(rows: usize, cols: usize, data: Vec<F>) -> Result<Self> {
        if data.len() != rows * cols {
            return Err(Error::ShapeMismatch {
                rows,
                cols,
                found: data.len(),
            });
        }
        if let Some(index) = data.iter().position(|x| !x.is_finite()) {
            return Err(Error::NonFinite { index });
        }
        Ok(Self { rows, cols, data })
    }

    /// Build from nested rows. All rows must have the same length.
    pub fn from_rows(rows: &[Vec<F>]) -> Result<Self> {
        let n_rows = rows.len();
        let n_cols = rows.first().map_or(0, Vec::len);
        for (i, row) in rows.iter().enumerate() {
            if row.len() != n_cols {
                return Err(Error::NonSquare {
                    rows: n_rows,
                    row: i,
                    cols: row.len(),
                });
            }
        }
        Self::new(n_rows, n_cols, rows.concat())
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> F) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                data.push(f(i, j));
            }
        }
        Self { rows, cols, data }
    }

    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self {
            rows,
            cols,
            data: vec![F::zero(); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        Self::from_fn(n, n, |i, j| if i == j { F::one() } else { F::zero() })
    }

    pub fn n_rows(&self) -> usize {
        self.rows
    }

    pub fn n_cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> F {
        self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, value: F) {
        self.data[i * self.cols + j] = value;
    }

    pub fn row(&self, i: usize) -> &[F] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn column(&self, j: usize) -> RealVector<F> {
        RealVector((0..self.rows).map(|i| self.get(i, j)).collect())
    }

    /// Matrix product `self * other`.
    pub fn matmul(&self, other: &Self) -> Self {
        assert_eq!(self.cols, other.rows, "inner dimensions must agree");
        let mut out = Self::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a == F::zero() {
                    continue;
                }
                for j in 0..other.cols {
                    let v = out.get(i, j) + a * other.get(k, j);
                    out.set(i, j, v);
                }
            }
        }
        out
    }

    /// Column-vector image `self * v`.
    pub fn mul_vec(&self, v: &RealVector<F>) -> RealVector<F> {
        assert_eq!(self.cols, v.len(), "vector length must match columns");
        RealVector(
            (0..self.rows)
                .map(|i| {
                    self.row(i)
                        .iter()
                        .zip(v.iter())
                        .fold(F::zero(), |acc, (&a, &x)| acc + a * x)
                })
                .collect(),
        )
    }

    /// Row-vector image `v * self` (left action, used for stationary checks).
    pub fn premul_vec(&self, v: &RealVector<F>) -> RealVector<F> {
        assert_eq!(self.rows, v.len(), "vector length must match rows");
        let mut out = vec![F::zero(); self.cols];
        for i in 0..self.rows {
            let x = v[i];
            if x == F::zero() {
                continue;
            }
            for (j, o) in out.iter_mut().enumerate() {
                *o = *o + x * self.get(i, j);
            }
        }
        RealVector(out)
    }

    pub fn add(&self, other: &Self) -> Self {
        self.zip_with(other, |a, b| a + b)
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.zip_with(other, |a, b| a - b)
    }

    pub fn scale(&self, c: F) -> Self {
        Self {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|&x| x * c).collect(),
        }
    }

    fn zip_with(&self, other: &Self, f: impl Fn(F, F) -> F) -> Self {
        assert_eq!(
            (self.rows, self.cols),
            (other.rows, other.cols),
            "shape mismatch"
        );
        Self {
            rows: self.rows,
            cols: self.cols,
            data: self
                .data
                .iter()
                .zip(&other.data)
                .map(|(&a, &b)| f(a, b))
                .collect(),
        }
    }

    /// Operator norm for the sup-norm on vectors: max absolute row sum.
    pub fn inf_op_norm(&self) -> F {
        (0..self.rows)
            .map(|i| self.row(i).iter().fold(F::zero(), |acc, &x| acc + x.abs()))
            .fold(F::zero(), F::max)
    }

    /// `‖self - other‖` in the sup-norm operator norm, without allocating.
    pub fn inf_norm_diff(&self, other: &Self) -> F {
        assert_eq!(
            (self.rows, self.cols),
            (other.rows, other.cols),
            "shape mismatch"
        );
        (0..self.rows)
            .map(|i| {
                self.row(i)
                    .iter()
                    .zip(other.row(i))
                    .fold(F::zero(), |acc, (&a, &b)| acc + (a - b).abs())
            })
            .fold(F::zero(), F::max)
    }

    /// Largest absolute entry.
    pub fn max_abs(&self) -> F {
        self.data.iter().fold(F::zero(), |acc, &x| acc.max(x.abs()))
    }

    /// `self^k` by binary exponentiation; `k = 0` gives the identity.
    pub fn pow(&self, k: u64) -> Self {
        assert!(self.is_square(), "matrix power requires a square matrix");
        let mut result = Self::identity(self.rows);
        let mut base = self.clone();
        let mut k = k;
        while k > 0 {
            if k & 1 == 1 {
                result = result.matmul(&base);
            }
            k >>= 1;
            if k > 0 {
                base = base.matmul(&base);
            }
        }
        result
    }
}

/// Real column vector with finite entries.
#[derive(Clone, Debug, PartialEq)]
pub struct RealVector<F>(Vec<F>);

impl<F: Scalar> RealVector<F> {
    pub fn new(components: Vec<F>) -> Result<Self> {
        if let Some(index) = components.iter().position(|x| !x.is_finite()) {
            return Err(Error::NonFinite { index });
        }
        Ok(Self(components))
    }

    pub fn zeros(n: usize) -> Self {
        Self(vec![F::zero(); n])
    }

    pub fn ones(n: usize) -> Self {
        Self(vec![F::one(); n])
    }

    /// Standard basis vector `e_i`.
    pub fn basis(n: usize, i: usize) -> Self {
        let mut v = vec![F::zero(); n];
        v[i] = F::one();
        Self(v)
    }

    /// Indicator of a state subset.
    pub fn indicator(n: usize, states: &[usize]) -> Self {
        let mut v = vec![F::zero(); n];
        for &s in states {
            v[s] = F::one();
        }
        Self(v)
    }

    pub fn from_fn(n: usize, f: impl FnMut(usize) -> F) -> Self {
        Self((0..n).map(f).collect())
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn iter(&self) -> std::slice::Iter<'_, F> {
        self.0.iter()
    }

    pub fn as_slice(&self) -> &[F] {
        &self.0
    }

    /// Entrywise (Hadamard) product.
    pub fn hadamard(&self, other: &Self) -> Self {
        assert_eq!(self.len(), other.len(), "length mismatch");
        Self(self.0.iter().zip(&other.0).map(|(&a, &b)| a * b).collect())
    }

    pub fn add(&self, other: &Self) -> Self {
        assert_eq!(self.len(), other.len(), "length mismatch");
        Self(self.0.iter().zip(&other.0).map(|(&a, &b)| a + b).collect())
    }

    pub fn sub(&self, other: &Self) -> Self {
        assert_eq!(self.len(), other.len(), "length mismatch");
        Self(self.0.iter().zip(&other.0).map(|(&a, &b)| a - b).collect())
    }

    pub fn scale(&self, c: F) -> Self {
        Self(self.0.iter().map(|&x| x * c).collect())
    }

    pub fn dot(&self, other: &Self) -> F {
        assert_eq!(self.len(), other.len(), "length mismatch");
        self.0
            .iter()
            .zip(&other.0)
            .fold(F::zero(), |acc, (&a, &b)| acc + a * b)
    }

    pub fn sup_norm(&self) -> F {
        self.0.iter().fold(F::zero(), |acc, &x| acc.max(x.abs()))
    }

    pub fn norm2(&self) -> F {
        self.dot(self).sqrt()
    }

    pub fn diff_sup_norm(&self, other: &Self) -> F {
        self.sub(other).sup_norm()
    }
}

impl<F> std::ops::Index<usize> for RealVector<F> {
    type Output = F;

    fn index(&self, i: usize) -> &F {
        &self.0[i]
    }
}

impl<F: Scalar> From<Vec<F>> for RealVector<F> {
    fn from(v: Vec<F>) -> Self {
        debug_assert!(v.iter().all(|x| x.is_finite()));
        Self(v)
    }
}

/// Validated row-stochastic square matrix: the transition matrix of a finite
/// Markov chain, equivalently a unital positive map on the n-point algebra.
#[derive(Clone, Debug, PartialEq)]
pub struct StochasticMatrix<F> {
    m: DenseMatrix<F>,
}

impl<F: Scalar> StochasticMatrix<F> {
    /// Validate and repair a square matrix of transition probabilities.
    ///
    /// Entries in `[-validation_tol, 0)` are clamped to zero and rows whose
    /// sum is within `validation_tol` of 1 are renormalized, so the all-ones
    /// vector is fixed up to rounding. Violations beyond the tolerance are
    /// reported as errors rather than repaired.
    pub fn new(rows: &[Vec<F>], validation_tol: F) -> Result<Self> {
        Self::from_matrix(DenseMatrix::from_rows(rows)?, validation_tol)
    }

    pub fn from_matrix(m: DenseMatrix<F>, validation_tol: F) -> Result<Self> {
        assert!(
            validation_tol > F::zero(),
            "validation tolerance must be positive"
        );
        let n = m.n_rows();
        if !m.is_square() || n == 0 {
            return Err(Error::NonSquare {
                rows: n,
                row: 0,
                cols: m.n_cols(),
            });
        }
        let mut m = m;
        for i in 0..n {
            let mut sum = F::zero();
            for j in 0..n {
                let x = m.get(i, j);
                if x < F::zero() {
                    if x < -validation_tol {
                        return Err(Error::NegativeEntry {
                            row: i,
                            col: j,
                            value: x.to_f64().unwrap_or(f64::NAN),
                            tol: validation_tol.to_f64().unwrap_or(f64::NAN),
                        });
                    }
                    m.set(i, j, F::zero());
                } else {
                    sum = sum + x;
                }
            }
            if (sum - F::one()).abs() > validation_tol {
                return Err(Error::RowSumViolation {
                    row: i,
                    sum: sum.to_f64().unwrap_or(f64::NAN),
                    tol: validation_tol.to_f64().unwrap_or(f64::NAN),
                });
            }
            for j in 0..n {
                m.set(i, j, m.get(i, j) / sum);
            }
            // Push the rounding residue into the largest entry so the row
            // sums to 1 as exactly as the scalar type allows.
            let new_sum = m.row(i).iter().fold(F::zero(), |acc, &x| acc + x);
            let residue = F::one() - new_sum;
            if residue != F::zero() {
                let jmax = (0..n)
                    .max_by(|&a, &b| {
                        m.get(i, a)
                            .partial_cmp(&m.get(i, b))
                            .expect("finite entries")
                    })
                    .expect("n > 0");
                m.set(i, jmax, m.get(i, jmax) + residue);
            }
        }
        Ok(Self { m })
    }

    /// Check the stochastic constraints without repairing. Used to confirm
    /// that products and powers of stochastic matrices stay stochastic.
    pub fn validate(m: &DenseMatrix<F>, tol: F) -> Result<()> {
        if !m.is_square() || m.n_rows() == 0 {
            return Err(Error::NonSquare {
                rows: m.n_rows(),
                row: 0,
                cols: m.n_cols(),
            });
        }
        for i in 0..m.n_rows() {
            let mut sum = F::zero();
            for j in 0..m.n_cols() {
                let x = m.get(i, j);
                if x < -tol {
                    return Err(Error::NegativeEntry {
                        row: i,
                        col: j,
                        value: x.to_f64().unwrap_or(f64::NAN),
                        tol: tol.to_f64().unwrap_or(f64::NAN),
                    });
                }
                sum = sum + x;
            }
            if (sum - F::one()).abs() > tol {
                return Err(Error::RowSumViolation {
                    row: i,
                    sum: sum.to_f64().unwrap_or(f64::NAN),
                    tol: tol.to_f64().unwrap_or(f64::NAN),
                });
            }
        }
        Ok(())
    }

    pub fn n(&self) -> usize {
        self.m.n_rows()
    }

    pub fn matrix(&self) -> &DenseMatrix<F> {
        &self.m
    }

    pub fn get(&self, i: usize, j: usize) -> F {
        self.m.get(i, j)
    }

    pub fn row(&self, i: usize) -> &[F] {
        self.m.row(i)
    }

    pub fn pow(&self, k: u64) -> DenseMatrix<F> {
        self.m.pow(k)
    }

    /// States `j` with `S[i][j] > zero_tol`: the support of row `i`.
    pub fn row_support(&self, i: usize, zero_tol: F) -> Vec<usize> {
        (0..self.n())
            .filter(|&j| self.get(i, j) > zero_tol)
            .collect()
    }
}

/// Default tolerances, calibrated for `f64`.
pub mod defaults {
    /// Stochastic validation tolerance.
    pub const VALIDATION_TOL: f64 = 1e-9;
    /// Entries at or below this are structural zeros of the support digraph.
    pub const ZERO_TOL: f64 = 1e-12;
    /// Convergence tolerance for projection squaring and algebra residuals.
    pub const PROJ_TOL: f64 = 1e-8;
    /// Floor for rank-revealing pivot thresholds.
    pub const PIVOT_TOL: f64 = 1e-7;
    /// Decoherence-time threshold on the transient norm.
    pub const EPSILON: f64 = 1e-3;
    /// Squaring budget for the projection limit.
    pub const MAX_SQUARINGS: usize = 64;
    /// Squaring budget for the interior spectral radius estimate.
    pub const GAP_ITERS: usize = 20;
    /// Step budget for the decoherence-time linear scan.
    pub const T_MAX: usize = 1_000_000;
    /// Exhaustive face enumeration limit.
    pub const MAX_FACE_N: usize = 16;
}

/// Pivot threshold for rank decisions: `max(PIVOT_TOL, n * eps * ‖m‖∞)`.
pub fn rank_pivot_threshold<F: Scalar>(m: &DenseMatrix<F>) -> F {
    let n = from_f64::<F>(m.n_rows().max(m.n_cols()) as f64);
    from_f64::<F>(defaults::PIVOT_TOL).max(n * F::epsilon() * m.inf_op_norm())
}

#[cfg(test)]
mod tests {
    use super::*;

    pub(crate) fn footnote_rows() -> Vec<Vec<f64>> {
        vec![
            vec![0.5, 0.25, 0.25],
            vec![0.0, 2.0 / 3.0, 1.0 / 3.0],
            vec![0.0, 0.0, 1.0],
        ]
    }

    #[test]
    fn triangular_example_is_valid() {
        let s = StochasticMatrix::new(&footnote_rows(), 1e-9).unwrap();
        assert_eq!(s.n(), 3);
        assert_eq!(s.get(0, 0), 0.5);
    }

    #[test]
    fn identity_is_valid() {
        let s = StochasticMatrix::new(&[vec![1.0, 0.0], vec![0.0, 1.0]], 1e-9).unwrap();
        assert_eq!(s.matrix(), &DenseMatrix::identity(2));
    }

    #[test]
    fn bad_row_sum_is_rejected() {
        let err = StochasticMatrix::new(&[vec![0.5, 0.6], vec![0.2, 0.8]], 1e-9).unwrap_err();
        assert!(matches!(err, Error::RowSumViolation { row: 0, .. }));
    }

    #[test]
    fn negative_beyond_tol_is_rejected() {
        let err = StochasticMatrix::new(&[vec![1.1, -0.1], vec![0.0, 1.0]], 1e-9).unwrap_err();
        assert!(matches!(err, Error::NegativeEntry { .. }));
    }

    #[test]
    fn small_negatives_are_clamped_and_rows_renormalized() {
        let s = StochasticMatrix::new(&[vec![1.0 + 3e-10, -3e-10], vec![0.5, 0.5]], 1e-9).unwrap();
        assert_eq!(s.get(0, 1), 0.0);
        let sum: f64 = s.row(0).iter().sum();
        assert_eq!(sum, 1.0);
    }

    #[test]
    fn non_square_is_rejected() {
        let err = StochasticMatrix::new(&[vec![1.0, 0.0]], 1e-9).unwrap_err();
        assert!(matches!(err, Error::NonSquare { .. }));
    }

    #[test]
    fn swap_squares_to_identity() {
        let swap = DenseMatrix::from_rows(&[vec![0.0, 1.0], vec![1.0, 0.0]]).unwrap();
        assert_eq!(swap.pow(2), DenseMatrix::identity(2));
    }

    #[test]
    fn zeroth_power_is_identity() {
        let a = DenseMatrix::from_rows(&[vec![0.3, 0.7], vec![0.9, 0.1]]).unwrap();
        assert_eq!(a.pow(0), DenseMatrix::identity(2));
    }

    #[test]
    fn triangular_example_power_64_absorbs() {
        let s = StochasticMatrix::new(&footnote_rows(), 1e-9).unwrap();
        let p64 = s.pow(64);

        // Oracle: 64 sequential multiplications.
        let mut direct = DenseMatrix::identity(3);
        for _ in 0..64 {
            direct = direct.matmul(s.matrix());
        }
        assert!(p64.inf_norm_diff(&direct) <= 1e-12);

        for i in 0..3 {
            assert!((p64.get(i, 0)).abs() <= 1e-10);
            assert!((p64.get(i, 1)).abs() <= 1e-10);
            assert!((p64.get(i, 2) - 1.0).abs() <= 1e-10);
        }
    }

    #[test]
    fn inf_op_norm_examples() {
        let s = StochasticMatrix::new(&footnote_rows(), 1e-9).unwrap();
        assert_eq!(s.matrix().inf_op_norm(), 1.0);
        assert_eq!(DenseMatrix::<f64>::zeros(3, 3).inf_op_norm(), 0.0);
        let a = DenseMatrix::from_rows(&[
            vec![1.0, 0.0, -1.0],
            vec![0.0, 1.0, -1.0],
            vec![0.0, 0.0, 0.0],
        ])
        .unwrap();
        assert_eq!(a.inf_op_norm(), 2.0);
    }

    #[test]
    fn non_finite_entries_are_rejected() {
        assert!(DenseMatrix::from_rows(&[vec![f64::NAN]]).is_err());
        assert!(RealVector::new(vec![1.0, f64::INFINITY]).is_err());
    }

    #[test]
    fn works_in_single_precision() {
        let s = StochasticMatrix::<f32>::new(&[vec![0.5f32, 0.5], vec![0.25, 0.75]], 1e-6).unwrap();
        assert!((s.pow(10).inf_op_norm() - 1.0).abs() < 1e-5);
    }

    mod properties {
        use super::*;
        use proptest::prelude::*;

        pub(crate) fn stochastic_rows(max_n: usize) -> impl Strategy<Value = Vec<Vec<f64>>> {
            (1..=max_n)
                .prop_flat_map(|n| {
                    proptest::collection::vec(proptest::collection::vec(0.01f64..1.0, n), n)
                })
                .prop_map(|rows| {
                    rows.into_iter()
                        .map(|row| {
                            let sum: f64 = row.iter().sum();
                            row.into_iter().map(|x| x / sum).collect()
                        })
                        .collect()
                })
        }

        proptest! {
            #![proptest_config(ProptestConfig::with_cases(64))]

            #[test]
            fn powers_stay_stochastic(rows in stochastic_rows(8), k in 0u64..200) {
                let s = StochasticMatrix::new(&rows, 1e-9).unwrap();
                let p = s.pow(k);
                prop_assert!(StochasticMatrix::validate(&p, 1e-9).is_ok());
            }

            #[test]
            fn stochastic_norm_is_one(rows in stochastic_rows(8)) {
                let s = StochasticMatrix::new(&rows, 1e-9).unwrap();
                prop_assert!((s.matrix().inf_op_norm() - 1.0).abs() <= 1e-12);
            }

            #[test]
            fn inf_op_norm_is_submultiplicative(
                a in stochastic_rows(6),
                b in proptest::collection::vec(proptest::collection::vec(-2.0f64..2.0, 6), 6),
            ) {
                let a = DenseMatrix::from_rows(&a).unwrap();
                let n = a.n_rows();
                let b = DenseMatrix::from_rows(
                    &b.into_iter().take(n).map(|r| r.into_iter().take(n).collect()).collect::<Vec<_>>(),
                ).unwrap();
                let ab = a.matmul(&b);
                prop_assert!(ab.inf_op_norm() <= a.inf_op_norm() * b.inf_op_norm() + 1e-12);
            }
        }
    }
}
