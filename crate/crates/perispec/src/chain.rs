//! Graph-theoretic structure of a stochastic matrix.
//!
//! States are classified through the strongly connected components of the
//! support digraph (entries above `zero_tol` are edges). A component with no
//! escape edge is a recurrent class; everything else is transient. Each
//! recurrent class carries a period `d` (the gcd of its cycle lengths, a.k.a.
//! the index of imprimitivity) and splits into `d` cyclic classes advanced by
//! one step per application of the matrix. Ordering states transient-first
//! and class-by-class exposes the canonical block upper-triangular form with
//! a strictly substochastic transient block and irreducible diagonal blocks.

use num_integer::{gcd, lcm};

use crate::error::{Error, Result};
use crate::matrix::{defaults, DenseMatrix, StochasticMatrix};
use crate::scalar::Scalar;

/// One recurrent (ergodic) class with its cyclic structure.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RecurrentClass {
    /// Member states, ascending.
    pub states: Vec<usize>,
    /// Index of imprimitivity `d`: gcd of all cycle lengths through the class.
    pub period: usize,
    /// The `d` cyclic classes; edges move `C_r -> C_{r+1 mod d}`. The class
    /// containing the smallest state is `C_0`.
    pub cyclic_classes: Vec<Vec<usize>>,
}

impl RecurrentClass {
    /// States in canonical order: cyclic class by cyclic class, ascending inside.
    pub fn ordered_states(&self) -> Vec<usize> {
        self.cyclic_classes.concat()
    }
}

/// Canonical reduced form of a stochastic matrix.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ReducedForm {
    /// New position of each state: transient states first (ascending), then
    /// each recurrent class (by smallest member), ordered by cyclic class.
    pub permutation: Vec<usize>,
    /// Transient states, ascending.
    pub transient: Vec<usize>,
    /// Recurrent classes, by smallest member.
    pub classes: Vec<RecurrentClass>,
    /// Least common multiple of the class periods; the order of the restricted
    /// dynamics on the persistent subspace.
    pub period_lcm: usize,
}

impl ReducedForm {
    /// Sum of the class periods: the rank of the peripheral projection.
    pub fn peripheral_rank(&self) -> usize {
        self.classes.iter().map(|c| c.period).sum()
    }

    /// Apply the canonical permutation: `out[p(u)][p(v)] = m[u][v]`.
    pub fn permuted<F: Scalar>(&self, m: &DenseMatrix<F>) -> DenseMatrix<F> {
        let n = m.n_rows();
        let mut out = DenseMatrix::zeros(n, n);
        for u in 0..n {
            for v in 0..n {
                out.set(self.permutation[u], self.permutation[v], m.get(u, v));
            }
        }
        out
    }

    /// The transient diagonal block `B_00` (0x0 when there are no transient states).
    pub fn transient_block<F: Scalar>(&self, s: &StochasticMatrix<F>) -> DenseMatrix<F> {
        let t = &self.transient;
        DenseMatrix::from_fn(t.len(), t.len(), |i, j| s.get(t[i], t[j]))
    }

    /// The irreducible diagonal block of class `j`, states in canonical order.
    pub fn class_block<F: Scalar>(&self, s: &StochasticMatrix<F>, j: usize) -> DenseMatrix<F> {
        let order = self.classes[j].ordered_states();
        DenseMatrix::from_fn(order.len(), order.len(), |a, b| s.get(order[a], order[b]))
    }
}

/// Adjacency lists of the support digraph: `u -> v` iff `s[u][v] > zero_tol`.
fn support_adjacency<F: Scalar>(s: &StochasticMatrix<F>, zero_tol: F) -> Vec<Vec<usize>> {
    (0..s.n()).map(|u| s.row_support(u, zero_tol)).collect()
}

/// Tarjan's algorithm, iteratively. Components are returned with members sorted.
fn tarjan_scc(adj: &[Vec<usize>]) -> Vec<Vec<usize>> {
    let n = adj.len();
    let mut index: Vec<Option<usize>> = vec![None; n];
    let mut low = vec![0usize; n];
    let mut on_stack = vec![false; n];
    let mut stack: Vec<usize> = Vec::new();
    let mut comps: Vec<Vec<usize>> = Vec::new();
    let mut counter = 0usize;

    for root in 0..n {
        if index[root].is_some() {
            continue;
        }
        let mut work: Vec<(usize, usize)> = vec![(root, 0)];
        index[root] = Some(counter);
        low[root] = counter;
        counter += 1;
        stack.push(root);
        on_stack[root] = true;

        while let Some(&(v, child)) = work.last() {
            if child < adj[v].len() {
                work.last_mut().expect("nonempty").1 += 1;
                let w = adj[v][child];
                if index[w].is_none() {
                    index[w] = Some(counter);
                    low[w] = counter;
                    counter += 1;
                    stack.push(w);
                    on_stack[w] = true;
                    work.push((w, 0));
                } else if on_stack[w] {
                    low[v] = low[v].min(index[w].expect("visited"));
                }
            } else {
                work.pop();
                if let Some(&(parent, _)) = work.last() {
                    low[parent] = low[parent].min(low[v]);
                }
                if low[v] == index[v].expect("visited") {
                    // v is the root of a component.
                    let mut comp = Vec::new();
                    loop {
                        let w = stack.pop().expect("stack underflow");
                        on_stack[w] = false;
                        comp.push(w);
                        if w == v {
                            break;
                        }
                    }
                    comp.sort_unstable();
                    comps.push(comp);
                }
            }
        }
    }
    comps
}

/// Split the states into the transient set and the recurrent classes.
///
/// A strongly connected component is recurrent iff it has no edge into
/// another component. Classes come back sorted by smallest member.
pub fn classify_states<F: Scalar>(
    s: &StochasticMatrix<F>,
    zero_tol: F,
) -> (Vec<usize>, Vec<Vec<usize>>) {
    let adj = support_adjacency(s, zero_tol);
    let comps = tarjan_scc(&adj);
    let mut comp_of = vec![0usize; s.n()];
    for (cid, comp) in comps.iter().enumerate() {
        for &v in comp {
            comp_of[v] = cid;
        }
    }

    let mut transient = Vec::new();
    let mut classes = Vec::new();
    for (cid, comp) in comps.iter().enumerate() {
        let escapes = comp
            .iter()
            .any(|&u| adj[u].iter().any(|&v| comp_of[v] != cid));
        if escapes {
            transient.extend_from_slice(comp);
        } else {
            classes.push(comp.clone());
        }
    }
    transient.sort_unstable();
    classes.sort_by_key(|c| c[0]);
    (transient, classes)
}

/// BFS depths from `root` inside the class subgraph.
fn bfs_levels(adj: &[Vec<usize>], in_class: &[bool], root: usize) -> Vec<Option<usize>> {
    let mut level = vec![None; adj.len()];
    level[root] = Some(0);
    let mut queue = std::collections::VecDeque::from([root]);
    while let Some(u) = queue.pop_front() {
        let d = level[u].expect("queued");
        for &v in &adj[u] {
            if in_class[v] && level[v].is_none() {
                level[v] = Some(d + 1);
                queue.push_back(v);
            }
        }
    }
    level
}

/// Period (index of imprimitivity) of a recurrent class: the gcd over the
/// class edges `u -> v` of `level(u) + 1 - level(v)`, levels taken from a BFS
/// rooted at the smallest member. Equals the gcd of all cycle lengths.
pub fn class_period<F: Scalar>(
    s: &StochasticMatrix<F>,
    class_states: &[usize],
    zero_tol: F,
) -> Result<usize> {
    let n = s.n();
    let adj = support_adjacency(s, zero_tol);
    let mut in_class = vec![false; n];
    for &u in class_states {
        in_class[u] = true;
    }

    // Closed: no edge may leave the class.
    for &u in class_states {
        if adj[u].iter().any(|&v| !in_class[v]) {
            return Err(Error::NotAClass);
        }
    }

    let root = *class_states.iter().min().ok_or(Error::NotAClass)?;
    let level = bfs_levels(&adj, &in_class, root);
    if class_states.iter().any(|&u| level[u].is_none()) {
        return Err(Error::NotAClass);
    }
    // Strong connectivity: every member must also reach the root.
    let radj = {
        let mut r = vec![Vec::new(); n];
        for (u, out) in adj.iter().enumerate() {
            if in_class[u] {
                for &v in out {
                    r[v].push(u);
                }
            }
        }
        r
    };
    let back = bfs_levels(&radj, &in_class, root);
    if class_states.iter().any(|&u| back[u].is_none()) {
        return Err(Error::NotAClass);
    }

    let mut d = 0usize;
    for &u in class_states {
        let lu = level[u].expect("class is reachable");
        for &v in &adj[u] {
            let lv = level[v].expect("class is reachable");
            d = gcd(d, (lu as i64 + 1 - lv as i64).unsigned_abs() as usize);
        }
    }
    debug_assert!(d > 0, "a closed strongly connected class contains a cycle");
    Ok(d)
}

/// The `d` cyclic classes of a period-`d` recurrent class: `C_r` holds the
/// states at BFS depth `≡ r (mod d)` from the smallest member, which sits in `C_0`.
pub fn cyclic_classes<F: Scalar>(
    s: &StochasticMatrix<F>,
    class_states: &[usize],
    period: usize,
    zero_tol: F,
) -> Vec<Vec<usize>> {
    let adj = support_adjacency(s, zero_tol);
    let mut in_class = vec![false; s.n()];
    for &u in class_states {
        in_class[u] = true;
    }
    let root = *class_states.iter().min().expect("nonempty class");
    let level = bfs_levels(&adj, &in_class, root);

    let mut cyclic = vec![Vec::new(); period];
    for &u in class_states {
        let l = level[u].expect("class is strongly connected");
        cyclic[l % period].push(u);
    }
    for c in &mut cyclic {
        c.sort_unstable();
    }
    cyclic
}

/// Compute the full canonical reduced form.
pub fn canonical_form<F: Scalar>(s: &StochasticMatrix<F>, zero_tol: F) -> Result<ReducedForm> {
    let (transient, class_sets) = classify_states(s, zero_tol);
    assert!(
        !class_sets.is_empty(),
        "a finite stochastic matrix always has at least one recurrent class"
    );

    let mut classes = Vec::with_capacity(class_sets.len());
    for states in class_sets {
        let period = class_period(s, &states, zero_tol)?;
        let cyclic = cyclic_classes(s, &states, period, zero_tol);
        classes.push(RecurrentClass {
            states,
            period,
            cyclic_classes: cyclic,
        });
    }

    let mut order = transient.clone();
    for class in &classes {
        order.extend(class.ordered_states());
    }
    let mut permutation = vec![0usize; s.n()];
    for (pos, &state) in order.iter().enumerate() {
        permutation[state] = pos;
    }

    let period_lcm = classes.iter().fold(1usize, |acc, c| lcm(acc, c.period));
    Ok(ReducedForm {
        permutation,
        transient,
        classes,
        period_lcm,
    })
}

/// True iff the support digraph is strongly connected.
pub fn is_irreducible<F: Scalar>(s: &StochasticMatrix<F>, zero_tol: F) -> bool {
    tarjan_scc(&support_adjacency(s, zero_tol)).len() == 1
}

/// Enumerate every nonempty proper subset `J` of states whose coordinate face
/// is invariant, i.e. the support of each column `j in J` stays inside `J`.
///
/// Exhaustive over all `2^n` subsets, so `n` is capped by `max_n`.
pub fn invariant_faces_bruteforce<F: Scalar>(
    s: &StochasticMatrix<F>,
    zero_tol: F,
    max_n: usize,
) -> Result<Vec<Vec<usize>>> {
    let n = s.n();
    if n > max_n {
        return Err(Error::TooLarge { n, max_n });
    }
    assert!(n < 64, "subset enumeration uses 64-bit masks");

    // Column support bitmasks: S e_j has support col_mask[j].
    let col_mask: Vec<u64> = (0..n)
        .map(|j| {
            (0..n)
                .filter(|&i| s.get(i, j) > zero_tol)
                .fold(0u64, |mask, i| mask | (1 << i))
        })
        .collect();

    let full: u64 = (1u64 << n) - 1;
    let mut faces = Vec::new();
    for subset in 1..full {
        let invariant = (0..n)
            .filter(|&j| subset & (1 << j) != 0)
            .all(|j| col_mask[j] & !subset == 0);
        if invariant {
            faces.push((0..n).filter(|&j| subset & (1 << j) != 0).collect());
        }
    }
    Ok(faces)
}

/// Convenience wrapper around [`invariant_faces_bruteforce`] with the default cap.
pub fn invariant_faces<F: Scalar>(s: &StochasticMatrix<F>, zero_tol: F) -> Result<Vec<Vec<usize>>> {
    invariant_faces_bruteforce(s, zero_tol, defaults::MAX_FACE_N)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::matrix::StochasticMatrix;

    fn footnote() -> StochasticMatrix<f64> {
        StochasticMatrix::new(
            &[
                vec![0.5, 0.25, 0.25],
                vec![0.0, 2.0 / 3.0, 1.0 / 3.0],
                vec![0.0, 0.0, 1.0],
            ],
            1e-9,
        )
        .unwrap()
    }

    fn s3() -> StochasticMatrix<f64> {
        StochasticMatrix::new(
            &[
                vec![0.0, 0.5, 0.5],
                vec![0.0, 0.0, 1.0],
                vec![0.0, 1.0, 0.0],
            ],
            1e-9,
        )
        .unwrap()
    }

    fn cycle(n: usize) -> StochasticMatrix<f64> {
        let rows: Vec<Vec<f64>> = (0..n)
            .map(|i| {
                (0..n)
                    .map(|j| if j == (i + 1) % n { 1.0 } else { 0.0 })
                    .collect()
            })
            .collect();
        StochasticMatrix::new(&rows, 1e-9).unwrap()
    }

    #[test]
    fn classify_footnote() {
        let (transient, classes) = classify_states(&footnote(), 1e-12);
        assert_eq!(transient, vec![0, 1]);
        assert_eq!(classes, vec![vec![2]]);
    }

    #[test]
    fn classify_s3() {
        let (transient, classes) = classify_states(&s3(), 1e-12);
        assert_eq!(transient, vec![0]);
        assert_eq!(classes, vec![vec![1, 2]]);
    }

    #[test]
    fn classify_cycle() {
        let (transient, classes) = classify_states(&cycle(3), 1e-12);
        assert!(transient.is_empty());
        assert_eq!(classes, vec![vec![0, 1, 2]]);
    }

    #[test]
    fn period_of_cycle_is_its_length() {
        assert_eq!(class_period(&cycle(3), &[0, 1, 2], 1e-12).unwrap(), 3);
    }

    #[test]
    fn period_of_s3_class_is_two() {
        assert_eq!(class_period(&s3(), &[1, 2], 1e-12).unwrap(), 2);
    }

    #[test]
    fn self_loop_forces_period_one() {
        let s = StochasticMatrix::new(
            &[
                vec![0.5, 0.5, 0.0],
                vec![0.0, 0.0, 1.0],
                vec![1.0, 0.0, 0.0],
            ],
            1e-9,
        )
        .unwrap();
        assert_eq!(class_period(&s, &[0, 1, 2], 1e-12).unwrap(), 1);
    }

    #[test]
    fn open_or_disconnected_sets_are_rejected() {
        assert!(matches!(
            class_period(&s3(), &[0, 1], 1e-12),
            Err(Error::NotAClass)
        ));
        assert!(matches!(
            class_period(&footnote(), &[0, 1], 1e-12),
            Err(Error::NotAClass)
        ));
    }

    #[test]
    fn cyclic_classes_of_s3() {
        assert_eq!(
            cyclic_classes(&s3(), &[1, 2], 2, 1e-12),
            vec![vec![1], vec![2]]
        );
    }

    #[test]
    fn cyclic_classes_of_four_cycle() {
        let c = cycle(4);
        assert_eq!(
            cyclic_classes(&c, &[0, 1, 2, 3], 4, 1e-12),
            vec![vec![0], vec![1], vec![2], vec![3]]
        );
    }

    #[test]
    fn primitive_class_is_one_block() {
        let s = StochasticMatrix::new(&[vec![0.5, 0.5], vec![0.5, 0.5]], 1e-9).unwrap();
        assert_eq!(cyclic_classes(&s, &[0, 1], 1, 1e-12), vec![vec![0, 1]]);
    }

    #[test]
    fn canonical_footnote() {
        let s = footnote();
        let rf = canonical_form(&s, 1e-12).unwrap();
        assert_eq!(rf.permutation, vec![0, 1, 2]);
        assert_eq!(rf.transient, vec![0, 1]);
        assert_eq!(rf.period_lcm, 1);
        let b00 = rf.transient_block(&s);
        assert_eq!(b00.row(0), &[0.5, 0.25]);
        assert_eq!(b00.row(1), &[0.0, 2.0 / 3.0]);
        assert_eq!(rf.class_block(&s, 0).row(0), &[1.0]);
    }

    #[test]
    fn canonical_s3() {
        let s = s3();
        let rf = canonical_form(&s, 1e-12).unwrap();
        assert_eq!(rf.transient, vec![0]);
        assert_eq!(rf.period_lcm, 2);
        let b = rf.class_block(&s, 0);
        assert_eq!(b.row(0), &[0.0, 1.0]);
        assert_eq!(b.row(1), &[1.0, 0.0]);
        assert_eq!(rf.transient_block(&s).n_rows(), 1);
        assert_eq!(rf.transient_block(&s).get(0, 0), 0.0);
    }

    #[test]
    fn canonical_form_is_conjugation_invariant() {
        // Shuffle S3 by the cycle 0 -> 1 -> 2 -> 0 and expect the same blocks.
        let s = s3();
        let sigma = [1usize, 2, 0];
        let shuffled = StochasticMatrix::new(
            &(0..3)
                .map(|i| {
                    (0..3)
                        .map(|j| {
                            let (oi, oj) = (
                                sigma.iter().position(|&x| x == i).unwrap(),
                                sigma.iter().position(|&x| x == j).unwrap(),
                            );
                            s.get(oi, oj)
                        })
                        .collect()
                })
                .collect::<Vec<_>>(),
            1e-9,
        )
        .unwrap();
        let rf_a = canonical_form(&s, 1e-12).unwrap();
        let rf_b = canonical_form(&shuffled, 1e-12).unwrap();
        assert_eq!(rf_a.transient.len(), rf_b.transient.len());
        assert_eq!(rf_a.period_lcm, rf_b.period_lcm);
        assert_eq!(rf_a.classes[0].period, rf_b.classes[0].period);
        let pa = rf_a.permuted(s.matrix());
        let pb = rf_b.permuted(shuffled.matrix());
        assert!(pa.inf_norm_diff(&pb) <= 1e-15);
    }

    #[test]
    fn irreducibility_examples() {
        assert!(is_irreducible(&cycle(3), 1e-12));
        assert!(!is_irreducible(&footnote(), 1e-12));
        assert!(!is_irreducible(&s3(), 1e-12));
    }

    #[test]
    fn faces_of_cycle_are_trivial() {
        assert!(invariant_faces(&cycle(3), 1e-12).unwrap().is_empty());
    }

    #[test]
    fn footnote_has_the_absorbing_face() {
        let faces = invariant_faces(&footnote(), 1e-12).unwrap();
        assert!(faces.contains(&vec![0]));
    }

    #[test]
    fn positive_two_state_chain_has_no_faces() {
        let s = StochasticMatrix::new(
            &[vec![2.0 / 3.0, 1.0 / 3.0], vec![1.0 / 6.0, 5.0 / 6.0]],
            1e-9,
        )
        .unwrap();
        assert!(invariant_faces(&s, 1e-12).unwrap().is_empty());
    }

    #[test]
    fn face_enumeration_rejects_large_matrices() {
        let n = 17;
        let rows: Vec<Vec<f64>> = (0..n)
            .map(|_| (0..n).map(|_| 1.0 / n as f64).collect())
            .collect();
        let s = StochasticMatrix::new(&rows, 1e-9).unwrap();
        assert!(matches!(
            invariant_faces(&s, 1e-12),
            Err(Error::TooLarge { n: 17, max_n: 16 })
        ));
    }

    /// Primitivity probe: some power of the block has all entries positive.
    fn is_primitive(block: &DenseMatrix<f64>) -> bool {
        let n = block.n_rows();
        let mut p = block.clone();
        for _ in 1..=n * n {
            if (0..n).all(|i| (0..n).all(|j| p.get(i, j) > 0.0)) {
                return true;
            }
            p = p.matmul(block);
        }
        false
    }

    #[test]
    fn period_one_means_primitive_block() {
        for s in [footnote(), s3(), cycle(4)] {
            let rf = canonical_form(&s, 1e-12).unwrap();
            for (j, class) in rf.classes.iter().enumerate() {
                if class.states.len() <= 8 {
                    assert_eq!(class.period == 1, is_primitive(&rf.class_block(&s, j)));
                }
            }
        }
    }

    mod properties {
        use super::*;
        use proptest::prelude::*;

        /// Random stochastic matrices with a sparse support pattern, so that
        /// reducible and periodic structures actually occur.
        fn sparse_stochastic(max_n: usize) -> impl Strategy<Value = StochasticMatrix<f64>> {
            (2..=max_n)
                .prop_flat_map(|n| {
                    proptest::collection::vec(
                        proptest::collection::vec((0.05f64..1.0, proptest::bool::ANY), n),
                        n,
                    )
                })
                .prop_map(|rows| {
                    let n = rows.len();
                    let rows: Vec<Vec<f64>> = rows
                        .into_iter()
                        .enumerate()
                        .map(|(i, row)| {
                            let mut r: Vec<f64> = row
                                .into_iter()
                                .map(|(x, keep)| if keep { x } else { 0.0 })
                                .collect();
                            if r.iter().all(|&x| x == 0.0) {
                                r[(i + 1) % n] = 1.0;
                            }
                            let sum: f64 = r.iter().sum();
                            r.into_iter().map(|x| x / sum).collect()
                        })
                        .collect();
                    StochasticMatrix::new(&rows, 1e-9).unwrap()
                })
        }

        proptest! {
            #![proptest_config(ProptestConfig::with_cases(96))]

            /// Irreducibility by strong connectivity coincides with the
            /// invariant-face enumeration.
            #[test]
            fn irreducibility_matches_face_enumeration(s in sparse_stochastic(7)) {
                let faces = invariant_faces(&s, 1e-12).unwrap();
                prop_assert_eq!(is_irreducible(&s, 1e-12), faces.is_empty());
            }

            /// Permuting into canonical form leaves recurrent rows supported
            /// only on their own diagonal block, and those blocks irreducible.
            #[test]
            fn reduced_form_block_structure(s in sparse_stochastic(7)) {
                let rf = canonical_form(&s, 1e-12).unwrap();
                let permuted = rf.permuted(s.matrix());
                let t = rf.transient.len();
                let mut start = t;
                for (j, class) in rf.classes.iter().enumerate() {
                    let size = class.states.len();
                    for row in start..start + size {
                        for col in 0..s.n() {
                            if col < start || col >= start + size {
                                prop_assert!(permuted.get(row, col) <= 1e-12);
                            }
                        }
                    }
                    let block = rf.class_block(&s, j);
                    let block_s = StochasticMatrix::new(
                        &(0..size).map(|i| block.row(i).to_vec()).collect::<Vec<_>>(),
                        1e-9,
                    ).unwrap();
                    prop_assert!(is_irreducible(&block_s, 1e-12));
                    if size <= 8 {
                        prop_assert_eq!(class.period == 1, is_primitive(&block));
                    }
                    start += size;
                }
            }

            /// Every class edge advances its cyclic class by exactly one step.
            #[test]
            fn cyclic_classes_advance_one_step(s in sparse_stochastic(7)) {
                let rf = canonical_form(&s, 1e-12).unwrap();
                for class in &rf.classes {
                    let d = class.period;
                    let mut position = vec![usize::MAX; s.n()];
                    for (r, c) in class.cyclic_classes.iter().enumerate() {
                        for &u in c {
                            position[u] = r;
                        }
                    }
                    for &u in &class.states {
                        for v in s.row_support(u, 1e-12) {
                            prop_assert_eq!(position[v], (position[u] + 1) % d);
                        }
                    }
                }
            }

            /// The classification is a partition and periods are consistent.
            #[test]
            fn classification_partitions_states(s in sparse_stochastic(7)) {
                let rf = canonical_form(&s, 1e-12).unwrap();
                let mut seen = vec![false; s.n()];
                for &u in rf.transient.iter().chain(rf.classes.iter().flat_map(|c| &c.states)) {
                    prop_assert!(!seen[u]);
                    seen[u] = true;
                }
                prop_assert!(seen.into_iter().all(|b| b));
                prop_assert!(rf.classes.iter().map(|c| c.period).sum::<usize>() >= rf.classes.len());
                for class in &rf.classes {
                    prop_assert_eq!(
                        class.cyclic_classes.iter().map(Vec::len).sum::<usize>(),
                        class.states.len()
                    );
                }
            }
        }
    }
}
