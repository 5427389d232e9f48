//! Frozen values checked against brute-force oracles.
//!
//! Each oracle recomputes a quantity by a route independent of the library
//! implementation (dense elimination, exhaustive enumeration). The frozen
//! tables record the values the oracles produced.

use std::collections::BTreeMap;

use gdirac_core::dirac::{block_states, invariant_basis_with_window, rho_apply, spectrum_report, TensorVector};
use gdirac_core::fock::{bounded_states, FockState, Lattice};
use gdirac_core::linalg::ExactMatrix;
use gdirac_core::spinor::{spin_states_within, SpinState};
use gdirac_core::Scalar;

fn isotropy_pairs(n: i64) -> Vec<(i64, i64)> {
    let idx: Vec<i64> = (-n..=n).filter(|&k| k != 0).collect();
    idx.iter()
        .flat_map(|&i| idx.iter().filter(move |&&j| i * j > 0).map(move |&j| (i, j)))
        .collect()
}

/// Nullity of the stacked dense constraint matrix of `ρ(E_pq)`, `|p|, |q| <= window`.
fn dense_nullity(n: i64, pairs: usize, k: usize, window: i64) -> usize {
    let states = block_states(n, pairs, k);
    let mut rows: Vec<BTreeMap<_, Vec<Scalar>>> = Vec::new();
    for (p, q) in isotropy_pairs(window) {
        let mut block: BTreeMap<_, Vec<Scalar>> = BTreeMap::new();
        for (x, s) in states.iter().enumerate() {
            let image = rho_apply(p, q, &TensorVector::basis(s.clone())).unwrap();
            for (t, c) in image {
                block.entry(t).or_insert_with(|| vec![Scalar::zero(); states.len()])[x] = c;
            }
        }
        rows.push(block);
    }
    let dense: Vec<Vec<Scalar>> = rows.into_iter().flat_map(BTreeMap::into_values).collect();
    if dense.is_empty() {
        return states.len();
    }
    let m = ExactMatrix::from_rows(dense).unwrap();
    states.len() - m.rank()
}

/// Block dimensions `(N, window, M, k, dim)` produced by [`dense_nullity`].
///
/// Only the vacuum block `(0, 0)` is nonempty, for constraint windows `N` and `N + 1` alike.
const FROZEN_DIMS: &[(i64, i64, usize, usize, usize)] = &[
    (1, 1, 0, 0, 1),
    (1, 1, 0, 1, 0),
    (1, 1, 1, 0, 0),
    (1, 1, 1, 1, 0),
    (1, 2, 0, 0, 1),
    (1, 2, 0, 1, 0),
    (1, 2, 1, 0, 0),
    (1, 2, 1, 1, 0),
    (2, 2, 0, 0, 1),
    (2, 2, 0, 1, 0),
    (2, 2, 0, 2, 0),
    (2, 2, 1, 0, 0),
    (2, 2, 1, 1, 0),
    (2, 2, 1, 2, 0),
    (2, 2, 2, 0, 0),
    (2, 2, 2, 1, 0),
    (2, 2, 2, 2, 0),
    (2, 3, 0, 0, 1),
    (2, 3, 0, 1, 0),
    (2, 3, 0, 2, 0),
    (2, 3, 1, 0, 0),
    (2, 3, 1, 1, 0),
    (2, 3, 1, 2, 0),
    (2, 3, 2, 0, 0),
    (2, 3, 2, 1, 0),
    (2, 3, 2, 2, 0),
];

#[test]
fn block_dimensions_match_dense_elimination() {
    for &(n, window, m, k, dim) in FROZEN_DIMS {
        let oracle = dense_nullity(n, m, k, window);
        assert_eq!(oracle, dim, "oracle for N={n}, window={window}, ({m},{k})");
        let block = invariant_basis_with_window(n, m, k, window).unwrap();
        assert_eq!(block.dim(), dim, "solver for N={n}, window={window}, ({m},{k})");
    }
}

#[test]
fn spectrum_tables_are_frozen() {
    let report = spectrum_report(2, 2).unwrap();
    let rows: Vec<(usize, usize, usize, String)> = report
        .blocks
        .iter()
        .map(|b| (b.pairs, b.k, b.dim, b.eig.to_string()))
        .collect();
    let expected: Vec<(usize, usize, usize, String)> = [
        (0, 0, 1, "0"),
        (0, 1, 0, "1/2"),
        (0, 2, 0, "1"),
        (1, 0, 0, "1/2"),
        (1, 1, 0, "1"),
        (1, 2, 0, "3/2"),
        (2, 0, 0, "1"),
        (2, 1, 0, "3/2"),
        (2, 2, 0, "2"),
    ]
    .into_iter()
    .map(|(m, k, d, e)| (m, k, d, e.to_string()))
    .collect();
    assert_eq!(rows, expected);
    assert_eq!(report.kernel_dim, 1);
}

fn all_subsets(items: &[i64]) -> Vec<Vec<i64>> {
    (0..1u32 << items.len())
        .map(|mask| {
            items
                .iter()
                .enumerate()
                .filter(|(i, _)| mask >> i & 1 == 1)
                .map(|(_, &x)| x)
                .collect()
        })
        .collect()
}

#[test]
fn bounded_state_counts_match_enumeration() {
    for n in 1..=4 {
        for lattice in [Lattice::ExcludeZero, Lattice::IncludeZero] {
            let indices: Vec<i64> = (-n..=n).filter(|&k| lattice.contains(k)).collect();
            let mut oracle: Vec<FockState> = all_subsets(&indices)
                .into_iter()
                .map(|occ| {
                    let plus = occ.iter().copied().filter(|&k| lattice.is_plus(k)).collect();
                    let minus = occ.iter().copied().filter(|&k| !lattice.is_plus(k)).collect();
                    FockState::new(plus, minus, lattice).unwrap()
                })
                .collect();
            oracle.sort();
            let mut got = bounded_states(lattice, n);
            got.sort();
            assert_eq!(got, oracle, "{lattice} n={n}");
        }
    }
    let frozen = [(1, 4usize, 8usize), (2, 16, 32), (3, 64, 128), (4, 256, 512)];
    for (n, ex, inc) in frozen {
        assert_eq!(bounded_states(Lattice::ExcludeZero, n).len(), ex);
        assert_eq!(bounded_states(Lattice::IncludeZero, n).len(), inc);
    }
}

#[test]
fn spinor_state_counts_match_enumeration() {
    for n in 1..=3i64 {
        let modes: Vec<(i64, i64)> = (1..=n).flat_map(|m| (-n..=-1).map(move |l| (m, l))).collect();
        let count = spin_states_within(n).len();
        assert_eq!(count, 1 << modes.len(), "n={n}");
        let full = SpinState::new(&modes).unwrap();
        assert!(spin_states_within(n).contains(&full));
    }
    assert_eq!(spin_states_within(2).len(), 16);
    assert_eq!(spin_states_within(3).len(), 512);
}
