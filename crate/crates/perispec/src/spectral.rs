//! Peripheral spectral projection and friends, without a general eigensolver.
//!
//! For a stochastic matrix the peripheral eigenvalues form, class by class,
//! the groups of `d_j`-th roots of unity, so `S^L` with `L = lcm{d_j}` acts as
//! the identity on the persistent subspace while the interior part contracts.
//! Repeated squaring of `S^L` therefore converges quadratically to the
//! peripheral projection `P`, the group average `(1/L) Σ S^m P` recovers the
//! mean-ergodic projection `E_1`, and the weighted averages
//! `(1/L) Σ λ^{-m} S^m P` isolate the individual peripheral eigenprojections
//! `E_λ` exactly, because the restriction of `S` to the persistent subspace
//! has finite order `L`.
//!
//! The interior spectral radius (and hence the mass gap `1 - r`) is estimated
//! by scaled repeated squaring of `S(I-P)` via the Gelfand formula
//! `r = lim ‖B^k‖^{1/k}`.

use num_integer::gcd;

use crate::chain::ReducedForm;
use crate::error::{Error, Result};
use crate::matrix::{rank_pivot_threshold, DenseMatrix, RealVector, StochasticMatrix};
use crate::scalar::{from_f64, from_usize, Scalar};

/// A point `e^{2πi k/d}` on the unit circle, stored as the reduced rotation `k/d`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct UnitRoot {
    numer: u64,
    denom: u64,
}

impl UnitRoot {
    pub fn new(k: u64, d: u64) -> Self {
        assert!(d > 0, "root order must be positive");
        let k = k % d;
        let g = gcd(k, d).max(1);
        Self {
            numer: k / g,
            denom: d / g,
        }
    }

    pub fn one() -> Self {
        Self { numer: 0, denom: 1 }
    }

    pub fn is_one(&self) -> bool {
        self.numer == 0
    }

    /// Order of the root in the circle group.
    pub fn order(&self) -> u64 {
        self.denom
    }

    /// Cartesian value `(re, im)`.
    pub fn value<F: Scalar>(&self) -> (F, F) {
        let theta = 2.0 * std::f64::consts::PI * self.numer as f64 / self.denom as f64;
        (from_f64(theta.cos()), from_f64(theta.sin()))
    }
}

/// Repeated squaring `A <- A²` until successive iterates differ by at most
/// `tol` in the sup operator norm; returns the post-threshold iterate.
///
/// The final squaring roughly squares the distance to the limit, so the
/// returned matrix is well inside `tol` of the true projection.
pub(crate) fn squaring_limit<F: Scalar>(
    start: DenseMatrix<F>,
    tol: F,
    max_squarings: usize,
) -> Result<DenseMatrix<F>> {
    let mut current = start;
    let mut residual = F::infinity();
    for _ in 0..max_squarings {
        let next = current.matmul(&current);
        residual = next.inf_norm_diff(&current);
        current = next;
        if residual <= tol {
            return Ok(current);
        }
    }
    Err(Error::NoConvergence {
        max_squarings,
        residual: residual.to_f64().unwrap_or(f64::NAN),
    })
}

/// Peripheral projection `P = lim S^{L·2^m}` by repeated squaring of `S^L`.
pub fn peripheral_projection<F: Scalar>(
    s: &StochasticMatrix<F>,
    rf: &ReducedForm,
    proj_tol: F,
    max_squarings: usize,
) -> Result<DenseMatrix<F>> {
    assert!(
        proj_tol > F::zero(),
        "projection tolerance must be positive"
    );
    squaring_limit(s.pow(rf.period_lcm as u64), proj_tol, max_squarings)
}

/// Mean-ergodic projection `E_1 = (1/L) Σ_{m<L} S^m P`.
///
/// The average is exact (not a limit) because the restriction of `S` to the
/// range of `P` has order `L`.
pub fn ergodic_projection<F: Scalar>(
    s: &StochasticMatrix<F>,
    p: &DenseMatrix<F>,
    l: usize,
) -> DenseMatrix<F> {
    let mut acc = p.clone();
    let mut term = p.clone();
    for _ in 1..l {
        term = s.matrix().matmul(&term);
        acc = acc.add(&term);
    }
    acc.scale(F::one() / from_usize(l))
}

/// The literal average `(1/n)(S^0 + S^1 + ... + S^{n-1})`.
///
/// Independent oracle for [`ergodic_projection`]; converges at rate `O(1/n)`.
pub fn cesaro_mean<F: Scalar>(s: &StochasticMatrix<F>, n: usize) -> DenseMatrix<F> {
    assert!(n >= 1, "the mean needs at least one term");
    let mut acc = DenseMatrix::identity(s.n());
    let mut power = DenseMatrix::identity(s.n());
    for _ in 1..n {
        power = s.matrix().matmul(&power);
        acc = acc.add(&power);
    }
    acc.scale(F::one() / from_usize(n))
}

/// Same as [`cesaro_mean`] but for an arbitrary square matrix.
pub fn cesaro_mean_of<F: Scalar>(m: &DenseMatrix<F>, n: usize) -> DenseMatrix<F> {
    assert!(n >= 1, "the mean needs at least one term");
    let mut acc = DenseMatrix::identity(m.n_rows());
    let mut power = DenseMatrix::identity(m.n_rows());
    for _ in 1..n {
        power = m.matmul(&power);
        acc = acc.add(&power);
    }
    acc.scale(F::one() / from_usize(n))
}

/// Peripheral eigenprojection `E_λ = (1/L) Σ_{m<L} λ^{-m} S^m P`, returned as
/// real and imaginary parts.
///
/// `λ` must be a predicted peripheral value: a root of unity of order
/// dividing `L` that occurs in [`peripheral_spectrum`].
pub fn eigenprojection<F: Scalar>(
    s: &StochasticMatrix<F>,
    p: &DenseMatrix<F>,
    rf: &ReducedForm,
    lambda: (F, F),
) -> Result<(DenseMatrix<F>, DenseMatrix<F>)> {
    let l = rf.period_lcm;
    let (re, im) = lambda;

    // λ^L must be 1.
    let (mut pr, mut pi) = (F::one(), F::zero());
    for _ in 0..l {
        let (nr, ni) = (pr * re - pi * im, pr * im + pi * re);
        pr = nr;
        pi = ni;
    }
    let not_peripheral = Error::NotPeripheral {
        re: re.to_f64().unwrap_or(f64::NAN),
        im: im.to_f64().unwrap_or(f64::NAN),
    };
    if ((pr - F::one()).powi(2) + pi.powi(2)).sqrt() > from_f64(1e-12) {
        return Err(not_peripheral);
    }
    let predicted = peripheral_spectrum(rf).iter().any(|root| {
        let (rr, ri) = root.value::<F>();
        ((rr - re).powi(2) + (ri - im).powi(2)).sqrt() <= from_f64(1e-9)
    });
    if !predicted {
        return Err(not_peripheral);
    }

    // λ^{-m} = cos(mθ) - i sin(mθ); accumulate the two real averages.
    let theta = im.atan2(re);
    let mut acc_re = p.clone();
    let mut acc_im = DenseMatrix::zeros(s.n(), s.n());
    let mut term = p.clone();
    for m in 1..l {
        term = s.matrix().matmul(&term);
        let angle = from_usize::<F>(m) * theta;
        acc_re = acc_re.add(&term.scale(angle.cos()));
        acc_im = acc_im.add(&term.scale(-angle.sin()));
    }
    let inv_l = F::one() / from_usize(l);
    Ok((acc_re.scale(inv_l), acc_im.scale(inv_l)))
}

/// Predicted peripheral spectrum: the multiset union, over recurrent classes,
/// of all `d_j`-th roots of unity (one copy per class).
pub fn peripheral_spectrum(rf: &ReducedForm) -> Vec<UnitRoot> {
    let mut values = Vec::with_capacity(rf.peripheral_rank());
    for class in &rf.classes {
        let d = class.period as u64;
        for k in 0..d {
            values.push(UnitRoot::new(k, d));
        }
    }
    values
}

/// Distinct peripheral values, in deterministic order.
pub fn distinct_peripheral_values(rf: &ReducedForm) -> Vec<UnitRoot> {
    let mut set = std::collections::BTreeSet::new();
    peripheral_spectrum(rf)
        .into_iter()
        .filter(|r| set.insert(*r))
        .collect()
}

/// Mass-gap estimate `1 - r`, where `r` approximates the interior spectral
/// radius via `r_m = ‖(S(I-P))^{2^m}‖^{1/2^m}`.
///
/// The powers are renormalized at every squaring and their norms tracked in
/// log space, so the estimate survives far past floating-point underflow.
/// Returns 1 when `S(I-P)` is numerically zero or nilpotent.
pub fn mass_gap_estimate<F: Scalar>(
    s: &StochasticMatrix<F>,
    p: &DenseMatrix<F>,
    iters: usize,
) -> F {
    let identity = DenseMatrix::identity(s.n());
    let b = s.matrix().matmul(&identity.sub(p));
    let norm = b.inf_op_norm();
    if norm == F::zero() {
        return F::one();
    }

    let mut scaled = b.scale(F::one() / norm);
    let mut log_norm = norm.ln();
    let mut r = norm; // ‖B‖^{1/1}
    for m in 1..=iters {
        scaled = scaled.matmul(&scaled);
        let c = scaled.inf_op_norm();
        if c == F::zero() {
            return F::one(); // nilpotent interior part
        }
        scaled = scaled.scale(F::one() / c);
        log_norm = log_norm + log_norm + c.ln();
        let r_m = (log_norm / from_f64(f64::powi(2.0, m as i32))).exp();
        r = r.min(r_m);
    }

    let gap = F::one() - r;
    gap.max(F::min_positive_value()).min(F::one())
}

/// Smallest `t >= 0` with `‖S^t (I-P)‖ <= epsilon`, by linear scan (the
/// sequence need not be monotone).
pub fn decoherence_time<F: Scalar>(
    s: &StochasticMatrix<F>,
    p: &DenseMatrix<F>,
    epsilon: F,
    t_max: usize,
) -> Result<usize> {
    assert!(
        epsilon > F::zero() && epsilon < F::one(),
        "epsilon must lie in (0,1)"
    );
    let mut transient = DenseMatrix::identity(s.n()).sub(p);
    for t in 0..=t_max {
        if transient.inf_op_norm() <= epsilon {
            return Ok(t);
        }
        transient = s.matrix().matmul(&transient);
    }
    Err(Error::Timeout { t_max })
}

/// Diagnostic residuals `‖S^{L·2^m} - P‖` for `m = 0..=m_max`.
pub fn subsequence_residuals<F: Scalar>(
    s: &StochasticMatrix<F>,
    p: &DenseMatrix<F>,
    l: usize,
    m_max: usize,
) -> Vec<F> {
    let mut power = s.pow(l as u64);
    let mut residuals = vec![power.inf_norm_diff(p)];
    for _ in 1..=m_max {
        power = power.matmul(&power);
        residuals.push(power.inf_norm_diff(p));
    }
    residuals
}

/// Numerical rank by Gaussian elimination with partial pivoting; a pivot
/// column counts only when its leading entry exceeds `threshold`.
pub fn numerical_rank<F: Scalar>(m: &DenseMatrix<F>, threshold: F) -> usize {
    let (rows, cols) = (m.n_rows(), m.n_cols());
    let mut a = m.clone();
    let mut rank = 0usize;
    let mut pivot_row = 0usize;
    for col in 0..cols {
        if pivot_row == rows {
            break;
        }
        let (imax, vmax) = (pivot_row..rows)
            .map(|i| (i, a.get(i, col).abs()))
            .max_by(|x, y| x.1.partial_cmp(&y.1).expect("finite"))
            .expect("nonempty row range");
        if vmax <= threshold {
            continue;
        }
        if imax != pivot_row {
            for j in 0..cols {
                let (x, y) = (a.get(pivot_row, j), a.get(imax, j));
                a.set(pivot_row, j, y);
                a.set(imax, j, x);
            }
        }
        for i in pivot_row + 1..rows {
            let factor = a.get(i, col) / a.get(pivot_row, col);
            if factor == F::zero() {
                continue;
            }
            for j in col..cols {
                let v = a.get(i, j) - factor * a.get(pivot_row, j);
                a.set(i, j, v);
            }
        }
        rank += 1;
        pivot_row += 1;
    }
    rank
}

/// Peripheral data of one matrix: projections, predicted spectrum, gap.
#[derive(Clone, Debug)]
pub struct SpectralData<F> {
    /// Peripheral projection.
    pub p: DenseMatrix<F>,
    /// Mean-ergodic (fixed-point) projection.
    pub e1: DenseMatrix<F>,
    /// Order of the restricted dynamics (lcm of class periods).
    pub l: usize,
    /// Predicted peripheral values, with multiplicity one per class.
    pub peripheral_values: Vec<UnitRoot>,
    /// Estimated distance from the unit circle to the interior spectrum.
    pub gap_estimate: F,
    /// Numerical rank of `p`.
    pub rank_p: usize,
}

impl<F: Scalar> SpectralData<F> {
    pub fn compute(
        s: &StochasticMatrix<F>,
        rf: &ReducedForm,
        proj_tol: F,
        max_squarings: usize,
        gap_iters: usize,
    ) -> Result<Self> {
        let p = peripheral_projection(s, rf, proj_tol, max_squarings)?;
        let e1 = ergodic_projection(s, &p, rf.period_lcm);
        let gap_estimate = mass_gap_estimate(s, &p, gap_iters);
        let rank_p = numerical_rank(&p, rank_pivot_threshold(&p));
        Ok(Self {
            p,
            e1,
            l: rf.period_lcm,
            peripheral_values: peripheral_spectrum(rf),
            gap_estimate,
            rank_p,
        })
    }
}

/// A stationary distribution: nonnegative weights summing to 1 with `πS = π`.
#[derive(Clone, Debug, PartialEq)]
pub struct StationaryDistribution<F> {
    pub weights: RealVector<F>,
}

/// One stationary distribution per recurrent class, read off the rows of `E_1`
/// at a representative state of each class. Each vanishes off its own class.
pub fn stationary_distributions<F: Scalar>(
    e1: &DenseMatrix<F>,
    rf: &ReducedForm,
) -> Vec<StationaryDistribution<F>> {
    rf.classes
        .iter()
        .map(|class| {
            let representative = class.states[0];
            StationaryDistribution {
                weights: RealVector::from(e1.row(representative).to_vec()),
            }
        })
        .collect()
}
