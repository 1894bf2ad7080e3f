//! Fixed inputs shared by the benchmarks.

use karyhom_core::complex::differential_matrix;
use karyhom_core::families::{current_algebra, free_three_step_small, free_two_step, heisenberg};
use karyhom_core::{KaryAlgebra, SparseIntMatrix};

/// Named differentials of increasing size.
pub fn differentials() -> Vec<(&'static str, SparseIntMatrix)> {
    let cases: Vec<(&'static str, KaryAlgebra, usize)> = vec![
        ("heisenberg(3,3) d5", heisenberg(3, 3).unwrap(), 5),
        ("free3small(4) d4", free_three_step_small(4).unwrap(), 4),
        ("free3small(5) d5", free_three_step_small(5).unwrap(), 5),
        ("current(heisenberg(5,1),2) d9", current_algebra(&heisenberg(5, 1).unwrap(), 2).unwrap(), 9),
        ("free2(2,5) d5", free_two_step(2, 5).unwrap(), 5),
    ];
    cases
        .into_iter()
        .map(|(name, alg, t)| (name, differential_matrix(&alg, t).unwrap()))
        .collect()
}
