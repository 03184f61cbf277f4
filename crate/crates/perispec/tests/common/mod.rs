//! The verification suite: named desk examples plus 200 seeded random
//! matrices, including forced-reducible and forced-periodic constructions.

use perispec::Stochastic;
use rand::prelude::*;
use rand_chacha::ChaCha8Rng;

pub const SUITE_SEED: u64 = 0x5EED_0001;
pub const RANDOM_SUITE_SIZE: usize = 200;

/// Structure a generator built in on purpose, for cross-checking.
#[derive(Clone, Debug)]
pub struct KnownStructure {
    /// Periods of the recurrent classes (unordered).
    pub periods: Vec<usize>,
    pub n_transient: usize,
}

pub struct SuiteMatrix {
    pub name: String,
    pub s: Stochastic,
    pub known: Option<KnownStructure>,
}

fn stoch(rows: &[Vec<f64>]) -> Stochastic {
    Stochastic::new(rows, 1e-9).expect("suite matrices are valid")
}

fn known(periods: Vec<usize>, n_transient: usize) -> Option<KnownStructure> {
    Some(KnownStructure {
        periods,
        n_transient,
    })
}

pub fn footnote() -> Stochastic {
    stoch(&[
        vec![0.5, 0.25, 0.25],
        vec![0.0, 2.0 / 3.0, 1.0 / 3.0],
        vec![0.0, 0.0, 1.0],
    ])
}

pub fn s3() -> Stochastic {
    stoch(&[
        vec![0.0, 0.5, 0.5],
        vec![0.0, 0.0, 1.0],
        vec![0.0, 1.0, 0.0],
    ])
}

pub fn two_state() -> Stochastic {
    stoch(&[vec![2.0 / 3.0, 1.0 / 3.0], vec![1.0 / 6.0, 5.0 / 6.0]])
}

pub fn identity(n: usize) -> Stochastic {
    let rows: Vec<Vec<f64>> = (0..n)
        .map(|i| (0..n).map(|j| f64::from(i == j)).collect())
        .collect();
    stoch(&rows)
}

pub fn cycle(d: usize) -> Stochastic {
    let rows: Vec<Vec<f64>> = (0..d)
        .map(|i| (0..d).map(|j| f64::from(j == (i + 1) % d)).collect())
        .collect();
    stoch(&rows)
}

pub fn block_diag_2_3() -> Stochastic {
    stoch(&[
        vec![0.0, 1.0, 0.0, 0.0, 0.0],
        vec![1.0, 0.0, 0.0, 0.0, 0.0],
        vec![0.0, 0.0, 0.0, 1.0, 0.0],
        vec![0.0, 0.0, 0.0, 0.0, 1.0],
        vec![0.0, 0.0, 1.0, 0.0, 0.0],
    ])
}

pub fn named_suite() -> Vec<SuiteMatrix> {
    let mut suite = vec![
        SuiteMatrix {
            name: "footnote".into(),
            s: footnote(),
            known: known(vec![1], 2),
        },
        SuiteMatrix {
            name: "s3".into(),
            s: s3(),
            known: known(vec![2], 1),
        },
        SuiteMatrix {
            name: "two-state".into(),
            s: two_state(),
            known: known(vec![1], 0),
        },
        SuiteMatrix {
            name: "block-diag(2,3)".into(),
            s: block_diag_2_3(),
            known: known(vec![2, 3], 0),
        },
    ];
    for n in 1..=4 {
        suite.push(SuiteMatrix {
            name: format!("identity-{n}"),
            s: identity(n),
            known: known(vec![1; n], 0),
        });
    }
    for d in 2..=5 {
        suite.push(SuiteMatrix {
            name: format!("cycle-{d}"),
            s: cycle(d),
            known: known(vec![d], 0),
        });
    }
    suite
}

/// A positive row over the chosen support: entries drawn from [0.2, 1), then
/// normalized, so every surviving transition probability is at least 0.2/n.
fn positive_row(rng: &mut ChaCha8Rng, n: usize, support: &[usize]) -> Vec<f64> {
    let mut row = vec![0.0; n];
    for &j in support {
        row[j] = rng.gen_range(0.2..1.0);
    }
    let sum: f64 = row.iter().sum();
    row.iter_mut().for_each(|x| *x /= sum);
    row
}

fn dense_random(rng: &mut ChaCha8Rng, n: usize) -> Vec<Vec<f64>> {
    let all: Vec<usize> = (0..n).collect();
    (0..n).map(|_| positive_row(rng, n, &all)).collect()
}

fn sparse_random(rng: &mut ChaCha8Rng, n: usize) -> Vec<Vec<f64>> {
    (0..n)
        .map(|i| {
            let mut support: Vec<usize> = (0..n).filter(|_| rng.gen_bool(0.55)).collect();
            if support.is_empty() {
                support.push((i + 1) % n);
            }
            positive_row(rng, n, &support)
        })
        .collect()
}

/// Transient states 0..t feeding `k` dense aperiodic recurrent classes.
fn forced_reducible(rng: &mut ChaCha8Rng, kind_index: usize) -> (Vec<Vec<f64>>, KnownStructure) {
    let k = 1 + kind_index % 3;
    let t = rng.gen_range(1..=3);
    let mut sizes = Vec::with_capacity(k);
    let mut budget = 10 - t - k; // at least one state per class
    for _ in 0..k {
        let extra = rng.gen_range(0..=budget.min(2));
        sizes.push(1 + extra);
        budget -= extra;
    }
    let n = t + sizes.iter().sum::<usize>();

    let all: Vec<usize> = (0..n).collect();
    let mut rows = Vec::with_capacity(n);
    for _ in 0..t {
        rows.push(positive_row(rng, n, &all));
    }
    let mut start = t;
    for &size in &sizes {
        let class: Vec<usize> = (start..start + size).collect();
        for _ in 0..size {
            rows.push(positive_row(rng, n, &class));
        }
        start += size;
    }
    (
        rows,
        KnownStructure {
            periods: vec![1; k],
            n_transient: t,
        },
    )
}

/// Recurrent classes with forced periods (cyclic block structure), plus an
/// optional transient layer feeding everything.
fn forced_periodic(rng: &mut ChaCha8Rng, kind_index: usize) -> (Vec<Vec<f64>>, KnownStructure) {
    let t = kind_index % 3; // 0, 1, or 2 transient states
    let k = 1 + kind_index % 2;
    let mut periods = Vec::with_capacity(k);
    let mut cells: Vec<Vec<usize>> = Vec::new(); // cell sizes per class
    let mut budget = 10 - t;
    for _ in 0..k {
        let d_max = budget.min(5);
        if d_max < 2 {
            break;
        }
        let d = rng.gen_range(2..=d_max);
        let mut class_cells = vec![1usize; d];
        budget -= d;
        for cell in class_cells.iter_mut() {
            if budget > 0 && rng.gen_bool(0.4) {
                *cell += 1;
                budget -= 1;
            }
        }
        periods.push(d);
        cells.push(class_cells);
    }

    let n = t + cells.iter().flatten().sum::<usize>();
    let all: Vec<usize> = (0..n).collect();
    let mut rows = vec![Vec::new(); n];
    for row in rows.iter_mut().take(t) {
        *row = positive_row(rng, n, &all);
    }

    let mut start = t;
    for class_cells in &cells {
        // Consecutive cyclic cells; each cell maps onto the next one.
        let mut cell_states: Vec<Vec<usize>> = Vec::new();
        for &size in class_cells {
            cell_states.push((start..start + size).collect());
            start += size;
        }
        let d = cell_states.len();
        for r in 0..d {
            let next = &cell_states[(r + 1) % d];
            for &u in &cell_states[r] {
                rows[u] = positive_row(rng, n, next);
            }
        }
    }
    (
        rows,
        KnownStructure {
            periods,
            n_transient: t,
        },
    )
}

pub fn random_suite() -> Vec<SuiteMatrix> {
    let mut rng = ChaCha8Rng::seed_from_u64(SUITE_SEED);
    let mut suite = Vec::with_capacity(RANDOM_SUITE_SIZE);
    for i in 0..RANDOM_SUITE_SIZE {
        let (name, rows, known) = match i % 4 {
            0 => {
                let n = rng.gen_range(2..=10);
                (
                    format!("dense-{i}"),
                    dense_random(&mut rng, n),
                    known(vec![1], 0),
                )
            }
            1 => {
                let n = rng.gen_range(2..=10);
                (format!("sparse-{i}"), sparse_random(&mut rng, n), None)
            }
            2 => {
                let (rows, ks) = forced_reducible(&mut rng, i / 4);
                (format!("reducible-{i}"), rows, Some(ks))
            }
            _ => {
                let (rows, ks) = forced_periodic(&mut rng, i / 4);
                (format!("periodic-{i}"), rows, Some(ks))
            }
        };
        suite.push(SuiteMatrix {
            name,
            s: stoch(&rows),
            known,
        });
    }
    suite
}

pub fn full_suite() -> Vec<SuiteMatrix> {
    let mut suite = named_suite();
    suite.extend(random_suite());
    suite
}
