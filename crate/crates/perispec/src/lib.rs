//! Peripheral spectral analysis of finite stochastic matrices.
//!
//! Given a row-stochastic matrix `S`, this crate computes its canonical block
//! upper-triangular reduced form (transient states first, then one
//! irreducible block per recurrent class), the peripheral spectral projection
//! `P = lim S^{L·2^m}` with `L` the lcm of the class periods, the
//! mean-ergodic projection `E_1`, and the individual peripheral
//! eigenprojections — all by iteration, with no general eigensolver.
//!
//! The range of `P` carries the Choi–Effros product `a∘b = P(a⊙b)`, which
//! makes it an abelian C*-algebra; the crate builds a basis and the minimal
//! idempotents of that algebra, verifies that the restriction of `S` is a
//! *-automorphism of order exactly `L` with positive inverse, decides whether
//! the projected product actually differs from the entrywise one, and checks
//! the decoherence splitting into the multiplicative domain plus the
//! vanishing subspace `range(I - P)`.
//!
//! Two noncommutative lifts are included: the pull-over of `S` through the
//! diagonal conditional expectation on n×n matrices, and the two-angle
//! phase-damping map on 2×2 matrices, each verified to have a persistent
//! system isomorphic to the scalar one.
//!
//! Everything is generic over the floating-point scalar (`f32` or `f64`,
//! see [`Scalar`]); the crate-root aliases [`Matrix`], [`Vector`], and
//! [`Stochastic`] fix `f64`, which all default tolerances assume.

pub mod algebra;
pub mod chain;
pub mod error;
pub mod lift;
pub mod matrix;
pub mod report;
pub mod scalar;
pub mod spectral;

pub use algebra::{
    algebra_check, ce_product, decoherence_split_check, minimal_idempotents, multiplicative_domain,
    persistent_basis, product_coincides, restricted_automorphism_check, restriction_order_residual,
    AlgebraCheck, AutomorphismCheck, DecoherenceReport, PersistentAlgebra,
};
pub use chain::{
    canonical_form, class_period, classify_states, cyclic_classes, invariant_faces,
    invariant_faces_bruteforce, is_irreducible, RecurrentClass, ReducedForm,
};
pub use error::{Error, Result};
pub use lift::{
    diag_pullover, persistent_iso_check, phase_damping, superop_peripheral, IsoCheck, Superoperator,
};
pub use matrix::{defaults, rank_pivot_threshold, DenseMatrix, RealVector, StochasticMatrix};
pub use report::{
    analyze_matrix, analyze_phase_damping, analyze_pullover, detect_format, file_meta, param_meta,
    parse_matrix, AnalysisReport, AnalyzeOptions, InputMeta, MatrixFormat,
};
pub use scalar::Scalar;
pub use spectral::{
    cesaro_mean, cesaro_mean_of, decoherence_time, distinct_peripheral_values, eigenprojection,
    ergodic_projection, mass_gap_estimate, numerical_rank, peripheral_projection,
    peripheral_spectrum, stationary_distributions, subsequence_residuals, SpectralData,
    StationaryDistribution, UnitRoot,
};

/// Dense `f64` matrix.
pub type Matrix = DenseMatrix<f64>;
/// Dense `f64` vector.
pub type Vector = RealVector<f64>;
/// Validated `f64` stochastic matrix.
pub type Stochastic = StochasticMatrix<f64>;
