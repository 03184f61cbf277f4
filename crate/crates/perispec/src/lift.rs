//! Noncommutative lifts: unital maps on n×n matrices driven by a stochastic
//! block.
//!
//! A [`Superoperator`] stores the matrix of such a map in the matrix-unit
//! basis, diagonal units `e_kk` first (ascending), then off-diagonal units in
//! row-major order. Both constructors produce maps of block form
//! `[[S, B], [0, 0]]`, so their spectrum is `σ(S) ∪ {0}`, their peripheral
//! projection is inherited from the stochastic block, and their persistent
//! algebra is isomorphic to the scalar one under the inclusion of diagonal
//! matrices.

use crate::algebra::PersistentAlgebra;
use crate::chain::ReducedForm;
use crate::error::Result;
use crate::matrix::{rank_pivot_threshold, DenseMatrix, RealVector, StochasticMatrix};
use crate::scalar::{from_f64, Scalar};
use crate::spectral::{numerical_rank, squaring_limit};

/// A linear map on n×n matrices, written in the matrix-unit basis.
#[derive(Clone, Debug, PartialEq)]
pub struct Superoperator<F> {
    n: usize,
    matrix: DenseMatrix<F>,
}

impl<F: Scalar> Superoperator<F> {
    /// Size of the underlying matrix algebra.
    pub fn n(&self) -> usize {
        self.n
    }

    /// The n² × n² matrix of the map.
    pub fn matrix(&self) -> &DenseMatrix<F> {
        &self.matrix
    }

    /// Coordinate of the matrix unit `e_kl` in the basis order.
    pub fn unit_index(n: usize, k: usize, l: usize) -> usize {
        if k == l {
            k
        } else {
            n + k * (n - 1) + if l < k { l } else { l - 1 }
        }
    }

    /// Pad a diagonal-part vector with zero off-diagonal coordinates.
    pub fn embed_diagonal(&self, x: &RealVector<F>) -> RealVector<F> {
        assert_eq!(x.len(), self.n, "diagonal part must have length n");
        RealVector::from_fn(
            self.n * self.n,
            |i| if i < self.n { x[i] } else { F::zero() },
        )
    }

    /// Apply the map to a coordinate vector.
    pub fn apply(&self, coords: &RealVector<F>) -> RealVector<F> {
        self.matrix.mul_vec(coords)
    }

    /// The top-left n×n block: the embedded stochastic matrix.
    pub fn embedded_block(&self) -> DenseMatrix<F> {
        DenseMatrix::from_fn(self.n, self.n, |i, j| self.matrix.get(i, j))
    }

    /// `‖Φ(I) - I‖` in coordinates; zero for a unital map.
    pub fn unitality_residual(&self) -> F {
        let identity_coords = self.embed_diagonal(&RealVector::ones(self.n));
        self.apply(&identity_coords).diff_sup_norm(&identity_coords)
    }
}

/// The pull-over of `S` through the diagonal conditional expectation:
/// `Φ(a) = diag(S · diag(a))`, with matrix `[[S, 0], [0, 0]]`.
pub fn diag_pullover<F: Scalar>(s: &StochasticMatrix<F>) -> Superoperator<F> {
    let n = s.n();
    let mut m = DenseMatrix::zeros(n * n, n * n);
    for i in 0..n {
        for k in 0..n {
            m.set(i, k, s.get(i, k));
        }
    }
    Superoperator { n, matrix: m }
}

/// The two-angle phase-damping map on 2×2 matrices.
///
/// In the basis `{e_11, e_22, e_12, e_21}` its matrix is
///
/// ```text
/// cos²α  sin²α  ½sin2α  ½sin2α
/// cos²β  sin²β  ½sin2β  ½sin2β
///   0      0      0       0
///   0      0      0       0
/// ```
///
/// The squared trigonometric entries are evaluated through the double angle,
/// `cos²θ = (1 + cos 2θ)/2` and `sin²θ = 1 - cos²θ`, which keeps each row
/// summing to 1 exactly and lands on exact halves at θ = π/4.
pub fn phase_damping<F: Scalar>(alpha: F, beta: F) -> Superoperator<F> {
    let half = from_f64::<F>(0.5);
    let row = |theta: F| {
        let two_theta = theta + theta;
        let cos_sq = (F::one() + two_theta.cos()) * half;
        let sin_sq = F::one() - cos_sq;
        let half_sin = two_theta.sin() * half;
        vec![cos_sq, sin_sq, half_sin, half_sin]
    };
    let mut rows = vec![row(alpha), row(beta)];
    rows.push(vec![F::zero(); 4]);
    rows.push(vec![F::zero(); 4]);
    Superoperator {
        n: 2,
        matrix: DenseMatrix::from_rows(&rows).expect("fixed 4x4 shape"),
    }
}

/// Peripheral projection of the lifted map, by the same `L`-power squaring as
/// the scalar case. Valid because `M^k = [[S^k, S^{k-1}B], [0, 0]]` inherits
/// the limit structure of the stochastic block.
pub fn superop_peripheral<F: Scalar>(
    phi: &Superoperator<F>,
    rf_of_s: &ReducedForm,
    proj_tol: F,
    max_squarings: usize,
) -> Result<DenseMatrix<F>> {
    squaring_limit(
        phi.matrix.pow(rf_of_s.period_lcm as u64),
        proj_tol,
        max_squarings,
    )
}

/// Outcome of the persistent-system isomorphism verification.
#[derive(Clone, Copy, Debug)]
pub struct IsoCheck<F> {
    pub scalar_rank: usize,
    pub superop_rank: usize,
    /// `max_k ‖P_Φ ι(e_k) - ι(P_S e_k)‖`: the projections agree through the
    /// inclusion ι of diagonal matrices.
    pub restriction_residual: F,
    /// `max_k ‖M_Φ P_Φ ι(e_k) - ι(S P_S e_k)‖`: restricted dynamics conjugate.
    pub dynamics_residual: F,
    /// Agreement of the Choi–Effros products on idempotent pairs.
    pub structure_residual: F,
    /// `‖P_Φ ι(1) - ι(1)‖`.
    pub unit_residual: F,
    pub holds: bool,
}

/// Verify that the persistent system of the lifted map is isomorphic, through
/// the inclusion of diagonal matrices, to the scalar one.
pub fn persistent_iso_check<F: Scalar>(
    phi: &Superoperator<F>,
    s: &StochasticMatrix<F>,
    alg: &PersistentAlgebra<F>,
    p_phi: &DenseMatrix<F>,
    tol: F,
) -> IsoCheck<F> {
    let n = s.n();
    let p_s = &alg.projection;
    let scalar_rank = numerical_rank(p_s, rank_pivot_threshold(p_s));
    let superop_rank = numerical_rank(p_phi, rank_pivot_threshold(p_phi));

    let mut restriction_residual = F::zero();
    let mut dynamics_residual = F::zero();
    let m_pphi = phi.matrix.matmul(p_phi);
    let s_ps = s.matrix().matmul(p_s);
    for k in 0..n {
        let e_k = RealVector::basis(n, k);
        let padded = phi.embed_diagonal(&e_k);
        let lhs = p_phi.mul_vec(&padded);
        let rhs = phi.embed_diagonal(&RealVector::from(
            (0..n).map(|i| p_s.get(i, k)).collect::<Vec<_>>(),
        ));
        restriction_residual = restriction_residual.max(lhs.diff_sup_norm(&rhs));

        let lhs = m_pphi.mul_vec(&padded);
        let rhs = phi.embed_diagonal(&RealVector::from(
            (0..n).map(|i| s_ps.get(i, k)).collect::<Vec<_>>(),
        ));
        dynamics_residual = dynamics_residual.max(lhs.diff_sup_norm(&rhs));
    }

    // Products of persistent elements are diagonal-on-diagonal, so the
    // structure constants agree iff P_Φ ι(e_i ⊙ e_j) = ι(P_S (e_i ⊙ e_j)).
    let mut structure_residual = F::zero();
    for ei in &alg.idempotents {
        for ej in &alg.idempotents {
            let pointwise = ei.hadamard(ej);
            let lhs = p_phi.mul_vec(&phi.embed_diagonal(&pointwise));
            let rhs = phi.embed_diagonal(&p_s.mul_vec(&pointwise));
            structure_residual = structure_residual.max(lhs.diff_sup_norm(&rhs));
        }
    }

    let unit = phi.embed_diagonal(&RealVector::ones(n));
    let unit_residual = p_phi.mul_vec(&unit).diff_sup_norm(&unit);

    let holds = scalar_rank == superop_rank
        && restriction_residual <= tol
        && dynamics_residual <= tol
        && structure_residual <= tol
        && unit_residual <= tol;

    IsoCheck {
        scalar_rank,
        superop_rank,
        restriction_residual,
        dynamics_residual,
        structure_residual,
        unit_residual,
        holds,
    }
}
