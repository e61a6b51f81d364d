use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::oracle::tightness_instance;
use crate::partition::build_partition_system;
use crate::weights::{InstanceTuple, WeightMatrix};

/// Instance families produced by [`generate`].
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum Generator {
    /// Off-diagonal weights uniform in `0..=max`, one matrix per job.
    UniformInt { n: usize, max: u64, m: usize },
    /// Unit votes, each off-diagonal entry present with probability `p`.
    UnweightedBernoulli { n: usize, p: f64, m: usize },
    /// Worst case for selection on the canonical partition system.
    Tightness { n: usize, k: usize },
}

pub fn generate(generator: &Generator, seed: u64) -> Result<InstanceTuple> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    match *generator {
        Generator::UniformInt { n, max, m } => {
            check_shape(n, m)?;
            let mats = (0..m)
                .map(|_| random_matrix(n, &mut rng, |r| r.random_range(0..=max) as f64))
                .collect();
            InstanceTuple::new(mats)
        }
        Generator::UnweightedBernoulli { n, p, m } => {
            check_shape(n, m)?;
            if !(0.0..=1.0).contains(&p) {
                return Err(Error::precondition(format!("p = {p} is not in [0, 1]")));
            }
            let mats = (0..m)
                .map(|_| random_matrix(n, &mut rng, |r| if r.random_bool(p) { 1.0 } else { 0.0 }))
                .collect();
            InstanceTuple::new(mats)
        }
        Generator::Tightness { n, k } => {
            let ps = build_partition_system(n, k)?;
            Ok(InstanceTuple::single(tightness_instance(n, k, &ps)?))
        }
    }
}

fn check_shape(n: usize, m: usize) -> Result<()> {
    if n == 0 || m == 0 {
        return Err(Error::precondition("n and m must be positive"));
    }
    Ok(())
}

/// Matrix with off-diagonal entries drawn row by row from `draw`.
pub fn random_matrix<R: Rng>(n: usize, rng: &mut R, mut draw: impl FnMut(&mut R) -> f64) -> WeightMatrix {
    let mut a = WeightMatrix::zeros(n);
    for i in 1..=n {
        for j in 1..=n {
            if i != j {
                a.set(i, j, draw(rng)).expect("drawn weights are finite and non-negative");
            }
        }
    }
    a
}
