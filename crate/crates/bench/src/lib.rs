//! Shared inputs for the benchmarks.

use impartial::io::{generate, Generator};
use impartial::{InstanceTuple, WeightMatrix};

/// Conforming (n, k) pairs with increasing partition degree.
pub const SIZES: &[(usize, usize)] = &[(9, 6), (32, 16), (50, 20), (120, 40), (300, 60)];

pub fn uniform_matrix(n: usize, seed: u64) -> WeightMatrix {
    uniform_tuple(n, 1, seed).into_matrices().remove(0)
}

pub fn uniform_tuple(n: usize, m: usize, seed: u64) -> InstanceTuple {
    generate(&Generator::UniformInt { n, max: 10, m }, seed).expect("valid generator parameters")
}
