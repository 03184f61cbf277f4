//! The persistent algebra of a stochastic matrix.
//!
//! The range of the peripheral projection `P` is an operator system; the
//! Choi–Effros product `a∘b := P(a⊙b)` (with `⊙` the entrywise product) turns
//! it into an abelian C*-algebra. Restricted to recurrent states, elements of
//! `range(P)` are exactly the functions constant on each cyclic class, and
//! that restriction determines them; the minimal idempotents are therefore
//! the projected cyclic-class indicators `P·1_{C_r}`. The construction is
//! still verified at runtime and rejected loudly if the residuals exceed the
//! algebra tolerance.
//!
//! The restriction of `S` itself permutes the cyclic classes, so it is a
//! *-automorphism of finite order `L = lcm{d_j}` with positive inverse
//! `S^{L-1}`. [`restricted_automorphism_check`] verifies all of this
//! numerically, and [`decoherence_split_check`] tests whether the span of the
//! multiplicative-domain blocks and the vanishing subspace `range(I-P)`
//! together recover the whole space.

use crate::chain::ReducedForm;
use crate::error::{Error, Result};
use crate::matrix::{rank_pivot_threshold, DenseMatrix, RealVector, StochasticMatrix};
use crate::scalar::Scalar;
use crate::spectral::numerical_rank;

/// The persistent subspace with its Choi–Effros structure.
#[derive(Clone, Debug)]
pub struct PersistentAlgebra<F> {
    /// Unit-sup-norm basis of `range(P)`, from pivoted column selection.
    pub basis: Vec<RealVector<F>>,
    /// The peripheral projection.
    pub projection: DenseMatrix<F>,
    /// Order of the restricted dynamics.
    pub order: usize,
    /// Minimal idempotents, one per cyclic class (class-major order).
    pub idempotents: Vec<RealVector<F>>,
    /// The cyclic class supporting each idempotent, in the same order.
    pub idempotent_supports: Vec<Vec<usize>>,
    /// The algebra unit: the all-ones vector.
    pub unit: RealVector<F>,
}

impl<F: Scalar> PersistentAlgebra<F> {
    /// Assemble basis, unit, and verified idempotents.
    ///
    /// Fails with `RankMismatch` when the detected rank of `P` disagrees with
    /// the structural prediction `Σ d_j`, and with
    /// `IdempotentVerificationFailed` when the projected cyclic-class
    /// indicators do not behave as minimal idempotents within `alg_tol`.
    pub fn build(
        s: &StochasticMatrix<F>,
        rf: &ReducedForm,
        p: &DenseMatrix<F>,
        pivot_tol: F,
        alg_tol: F,
    ) -> Result<Self> {
        let basis = persistent_basis(p, pivot_tol);
        let expected = rf.peripheral_rank();
        if basis.len() != expected {
            return Err(Error::RankMismatch {
                detected: basis.len(),
                expected,
            });
        }

        let unit = RealVector::ones(s.n());
        let unit_residual = p.mul_vec(&unit).diff_sup_norm(&unit);
        if unit_residual > alg_tol {
            return Err(Error::NotInRange {
                residual: unit_residual.to_f64().unwrap_or(f64::NAN),
                tol: alg_tol.to_f64().unwrap_or(f64::NAN),
            });
        }

        let idempotents = minimal_idempotents(s, rf, p, alg_tol)?;
        let idempotent_supports: Vec<Vec<usize>> = rf
            .classes
            .iter()
            .flat_map(|c| c.cyclic_classes.clone())
            .collect();
        Ok(Self {
            basis,
            projection: p.clone(),
            order: rf.period_lcm,
            idempotents,
            idempotent_supports,
            unit,
        })
    }
}

/// Greedy pivoted column selection: indices of columns of `m` that survive
/// modified Gram-Schmidt deflation with residual norms above `threshold`.
fn pivoted_columns<F: Scalar>(m: &DenseMatrix<F>, threshold: F) -> Vec<usize> {
    let cols = m.n_cols();
    let mut residuals: Vec<RealVector<F>> = (0..cols).map(|j| m.column(j)).collect();
    let mut available: Vec<bool> = vec![true; cols];
    let mut chosen = Vec::new();
    loop {
        let mut best: Option<(usize, F)> = None;
        for j in 0..cols {
            if !available[j] {
                continue;
            }
            let norm = residuals[j].norm2();
            if best.is_none_or(|(_, b)| norm > b) {
                best = Some((j, norm));
            }
        }
        let Some((j, norm)) = best else { break };
        if norm <= threshold {
            break;
        }
        let q = residuals[j].scale(F::one() / norm);
        available[j] = false;
        chosen.push(j);
        for (k, residual) in residuals.iter_mut().enumerate() {
            if available[k] {
                let coeff = residual.dot(&q);
                *residual = residual.sub(&q.scale(coeff));
            }
        }
    }
    chosen
}

/// Basis of `range(P)`: pivoted selection of independent columns of `P`,
/// each re-projected by `P` and rescaled to unit sup-norm.
pub fn persistent_basis<F: Scalar>(p: &DenseMatrix<F>, pivot_tol: F) -> Vec<RealVector<F>> {
    let threshold = pivot_tol.max(rank_pivot_threshold(p));
    pivoted_columns(p, threshold)
        .into_iter()
        .map(|j| {
            let v = p.mul_vec(&p.column(j));
            let norm = v.sup_norm();
            if norm > F::zero() {
                v.scale(F::one() / norm)
            } else {
                v
            }
        })
        .collect()
}

fn range_residual<F: Scalar>(p: &DenseMatrix<F>, a: &RealVector<F>) -> F {
    p.mul_vec(a).diff_sup_norm(a)
}

/// Choi–Effros product `a∘b = P(a⊙b)` for `a, b` in the range of `P`.
pub fn ce_product<F: Scalar>(
    p: &DenseMatrix<F>,
    a: &RealVector<F>,
    b: &RealVector<F>,
    alg_tol: F,
) -> Result<RealVector<F>> {
    for v in [a, b] {
        let residual = range_residual(p, v);
        let scale = F::one().max(v.sup_norm());
        if residual > alg_tol * scale {
            return Err(Error::NotInRange {
                residual: residual.to_f64().unwrap_or(f64::NAN),
                tol: (alg_tol * scale).to_f64().unwrap_or(f64::NAN),
            });
        }
    }
    Ok(p.mul_vec(&a.hadamard(b)))
}

/// Unchecked product used internally on vectors already known to lie in range(P).
fn product<F: Scalar>(p: &DenseMatrix<F>, a: &RealVector<F>, b: &RealVector<F>) -> RealVector<F> {
    p.mul_vec(&a.hadamard(b))
}

/// Residuals of the abelian C*-algebra axioms over all basis pairs and triples.
#[derive(Clone, Copy, Debug)]
pub struct AlgebraCheck<F> {
    /// `max ‖a∘b - b∘a‖`.
    pub commutativity: F,
    /// `max ‖(a∘b)∘c - a∘(b∘c)‖`.
    pub associativity: F,
    /// `max ‖P(a∘b) - a∘b‖`: products stay in the range.
    pub closure: F,
    /// `max ‖1∘a - a‖`.
    pub unit_law: F,
}

impl<F: Scalar> AlgebraCheck<F> {
    pub fn max_residual(&self) -> F {
        self.commutativity
            .max(self.associativity)
            .max(self.closure)
            .max(self.unit_law)
    }

    pub fn passes(&self, alg_tol: F) -> bool {
        self.max_residual() <= alg_tol
    }
}

/// Verify commutativity, associativity, closure, and the unit law on the basis.
pub fn algebra_check<F: Scalar>(alg: &PersistentAlgebra<F>) -> AlgebraCheck<F> {
    let p = &alg.projection;
    let basis = &alg.basis;
    let mut check = AlgebraCheck {
        commutativity: F::zero(),
        associativity: F::zero(),
        closure: F::zero(),
        unit_law: F::zero(),
    };
    for a in basis {
        check.unit_law = check
            .unit_law
            .max(product(p, &alg.unit, a).diff_sup_norm(a));
        for b in basis {
            let ab = product(p, a, b);
            let ba = product(p, b, a);
            check.commutativity = check.commutativity.max(ab.diff_sup_norm(&ba));
            check.closure = check.closure.max(range_residual(p, &ab));
            for c in basis {
                let left = product(p, &ab, c);
                let right = product(p, a, &product(p, b, c));
                check.associativity = check.associativity.max(left.diff_sup_norm(&right));
            }
        }
    }
    check
}

/// Minimal idempotents of the persistent algebra: `P` applied to the
/// indicator of each cyclic class, verified to satisfy `e∘e = e`,
/// `e_k∘e_l = 0`, and `Σ e_k = 1` within `alg_tol`.
pub fn minimal_idempotents<F: Scalar>(
    s: &StochasticMatrix<F>,
    rf: &ReducedForm,
    p: &DenseMatrix<F>,
    alg_tol: F,
) -> Result<Vec<RealVector<F>>> {
    let n = s.n();
    let mut idempotents = Vec::with_capacity(rf.peripheral_rank());
    for class in &rf.classes {
        for cyclic in &class.cyclic_classes {
            idempotents.push(p.mul_vec(&RealVector::indicator(n, cyclic)));
        }
    }

    let mut residual = F::zero();
    let mut total = RealVector::zeros(n);
    for (k, e) in idempotents.iter().enumerate() {
        residual = residual.max(product(p, e, e).diff_sup_norm(e));
        for other in idempotents.iter().skip(k + 1) {
            residual = residual.max(product(p, e, other).sup_norm());
        }
        total = total.add(e);
    }
    residual = residual.max(total.diff_sup_norm(&RealVector::ones(n)));

    if residual > alg_tol {
        return Err(Error::IdempotentVerificationFailed {
            residual: residual.to_f64().unwrap_or(f64::NAN),
        });
    }
    Ok(idempotents)
}

/// `max_a ‖S^k a - a‖` over the basis: how far `S^k` is from the identity on
/// the persistent subspace.
pub fn restriction_order_residual<F: Scalar>(
    s: &StochasticMatrix<F>,
    basis: &[RealVector<F>],
    k: usize,
) -> F {
    let mut worst = F::zero();
    for a in basis {
        let mut v = a.clone();
        for _ in 0..k {
            v = s.matrix().mul_vec(&v);
        }
        worst = worst.max(v.diff_sup_norm(a));
    }
    worst
}

/// Outcome of the restricted *-automorphism verification.
#[derive(Clone, Copy, Debug)]
pub struct AutomorphismCheck<F> {
    /// `max ‖S(a∘b) - Sa∘Sb‖` over basis pairs.
    pub multiplicativity: F,
    /// `‖SP - PS‖`.
    pub commutation: F,
    /// `max ‖P(Sa) - Sa‖`: `S` maps the basis back into `range(P)`.
    pub range_invariance: F,
    /// Smallest divisor of `L` at which the restriction is the identity.
    pub order: usize,
    /// Residual of `S^L = id` on the basis.
    pub order_residual: F,
    /// Smallest idempotent coordinate of the restricted inverse `S^{L-1}`.
    pub inverse_min_coordinate: F,
}

impl<F: Scalar> AutomorphismCheck<F> {
    pub fn passes(&self, alg_tol: F) -> bool {
        self.multiplicativity <= alg_tol
            && self.commutation <= alg_tol
            && self.range_invariance <= alg_tol
            && self.order_residual <= alg_tol
            && self.inverse_min_coordinate >= -alg_tol
    }
}

/// Verify that the restriction of `S` to the persistent algebra is a
/// *-automorphism of order `L` with positive inverse.
///
/// Positivity of the inverse is read off in idempotent coordinates: since the
/// idempotents span the positive cone of an abelian algebra and an element of
/// `range(P)` is determined by its value on each cyclic class, the coordinate
/// of `x` along `e_k` is the value of `x` at any state of the k-th cyclic class.
pub fn restricted_automorphism_check<F: Scalar>(
    s: &StochasticMatrix<F>,
    alg: &PersistentAlgebra<F>,
    alg_tol: F,
) -> AutomorphismCheck<F> {
    let p = &alg.projection;
    let l = alg.order;

    let mut multiplicativity = F::zero();
    let mut range_invariance = F::zero();
    let images: Vec<RealVector<F>> = alg.basis.iter().map(|a| s.matrix().mul_vec(a)).collect();
    for sa in &images {
        range_invariance = range_invariance.max(range_residual(p, sa));
    }
    for (a, sa) in alg.basis.iter().zip(&images) {
        for (b, sb) in alg.basis.iter().zip(&images) {
            let left = s.matrix().mul_vec(&product(p, a, b));
            let right = product(p, sa, sb);
            multiplicativity = multiplicativity.max(left.diff_sup_norm(&right));
        }
    }

    let sp = s.matrix().matmul(p);
    let ps = p.matmul(s.matrix());
    let commutation = sp.inf_norm_diff(&ps);

    let order_residual = restriction_order_residual(s, &alg.basis, l);
    let order = (1..=l)
        .filter(|&d| l.is_multiple_of(d))
        .find(|&d| restriction_order_residual(s, &alg.basis, d) <= alg_tol)
        .unwrap_or(l);

    // Inverse in idempotent coordinates: S^{L-1} e_k = Σ_l c_{kl} e_l with
    // c_{kl} the value at any state of the l-th cyclic class.
    let mut inverse_min = F::infinity();
    for e in &alg.idempotents {
        let mut v = e.clone();
        for _ in 1..l {
            v = s.matrix().mul_vec(&v);
        }
        for support in &alg.idempotent_supports {
            inverse_min = inverse_min.min(v[support[0]]);
        }
    }
    if !inverse_min.is_finite() {
        inverse_min = F::zero();
    }

    AutomorphismCheck {
        multiplicativity,
        commutation,
        range_invariance,
        order,
        order_residual,
        inverse_min_coordinate: inverse_min,
    }
}

/// True iff `range(P)` is closed under the entrywise product, so the
/// Choi–Effros product agrees with the original one on the persistent part.
pub fn product_coincides<F: Scalar>(p: &DenseMatrix<F>, basis: &[RealVector<F>], tol: F) -> bool {
    for a in basis {
        for b in basis {
            if range_residual(p, &a.hadamard(b)) > tol {
                return false;
            }
        }
    }
    true
}

/// The finest partition of states such that every row support lies inside a
/// single block. Functions constant on the blocks form the multiplicative
/// domain of `S`: equality in Jensen's inequality `S(x²) = (Sx)²` row by row
/// forces `x` to be constant on each row support.
pub fn multiplicative_domain<F: Scalar>(s: &StochasticMatrix<F>, zero_tol: F) -> Vec<Vec<usize>> {
    let n = s.n();
    let mut parent: Vec<usize> = (0..n).collect();
    fn find(parent: &mut [usize], mut x: usize) -> usize {
        while parent[x] != x {
            parent[x] = parent[parent[x]];
            x = parent[x];
        }
        x
    }
    for i in 0..n {
        let support = s.row_support(i, zero_tol);
        for pair in support.windows(2) {
            let (a, b) = (find(&mut parent, pair[0]), find(&mut parent, pair[1]));
            if a != b {
                parent[a.max(b)] = a.min(b);
            }
        }
    }
    let mut blocks: std::collections::BTreeMap<usize, Vec<usize>> = Default::default();
    for x in 0..n {
        let root = find(&mut parent, x);
        blocks.entry(root).or_default().push(x);
    }
    blocks.into_values().collect()
}

/// Result of the decoherence-splitting test for `span(blocks) ⊕ range(I-P)`.
#[derive(Clone, Debug)]
pub struct DecoherenceReport {
    /// Multiplicative-domain partition of the states.
    pub partition: Vec<Vec<usize>>,
    /// Dimension of the multiplicative domain (= number of blocks).
    pub dim_multiplicative: usize,
    /// Dimension of the vanishing subspace `range(I-P)`.
    pub dim_vanishing: usize,
    /// Whether the two subspaces span the whole space in direct sum.
    pub split_holds: bool,
    /// Whether the Choi–Effros product coincides with the entrywise one.
    pub product_coincides: bool,
}

/// Check the splitting of the whole space into the multiplicative domain and
/// the vanishing subspace, and record whether the product needs replacing.
pub fn decoherence_split_check<F: Scalar>(
    s: &StochasticMatrix<F>,
    p: &DenseMatrix<F>,
    partition: &[Vec<usize>],
    basis: &[RealVector<F>],
    tol: F,
) -> DecoherenceReport {
    let n = s.n();
    let complement = DenseMatrix::identity(n).sub(p);
    let threshold = tol.max(rank_pivot_threshold(&complement));
    let vanishing = pivoted_columns(&complement, threshold);
    let dim_multiplicative = partition.len();
    let dim_vanishing = vanishing.len();

    let mut spanning: Vec<Vec<F>> = Vec::with_capacity(dim_multiplicative + dim_vanishing);
    for block in partition {
        spanning.push(RealVector::indicator(n, block).as_slice().to_vec());
    }
    for &j in &vanishing {
        spanning.push(complement.column(j).as_slice().to_vec());
    }
    let stacked = DenseMatrix::from_rows(&spanning).expect("rows share length n");
    let rank = numerical_rank(&stacked, rank_pivot_threshold(&stacked));

    DecoherenceReport {
        partition: partition.to_vec(),
        dim_multiplicative,
        dim_vanishing,
        split_holds: dim_multiplicative + dim_vanishing == n && rank == n,
        product_coincides: product_coincides(p, basis, tol),
    }
}
