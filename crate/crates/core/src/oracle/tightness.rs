use serde::Serialize;

use crate::error::{Error, Result};
use crate::partition::{build_partition_system, PartitionSystem};
use crate::ratio::{serialize_alpha, Alpha, ScoreRatio};
use crate::selection::select_k;
use crate::weights::{serialize_score, WeightMatrix};

use super::opt_k;

/// Worst case for selection: each agent `j` of the first candidate set gets
/// one unit vote from the smallest agent `h(j)` that shares `j`'s second
/// candidate set. Every vote is visible only in partition 1, so selection
/// collects exactly 1 while the optimum is `b`.
pub fn tightness_instance(n: usize, k: usize, ps: &PartitionSystem) -> Result<WeightMatrix> {
    if ps.n() != n || ps.k() != k {
        return Err(Error::precondition(format!(
            "partition system is for ({}, {}), expected ({n}, {k})",
            ps.n(),
            ps.k()
        )));
    }
    let b = ps.b();
    if b < 2 || !ps.candidates(1).iter().copied().eq(1..=b) {
        return Err(Error::precondition(
            "first candidate set must be {1, …, b} with b ≥ 2",
        ));
    }
    let mut triplets = Vec::with_capacity(b);
    for j in 1..=b {
        let (l, r) = ps.slots(j);
        debug_assert_eq!(l, 1);
        // the second candidate set meets the first only in j, so every
        // other member is a voter of partition 1
        let h = ps
            .candidates(r)
            .iter()
            .copied()
            .find(|&h| h != j && !ps.is_candidate(1, h))
            .expect("candidate sets have size b ≥ 2 and meet in at most one agent");
        triplets.push((h, j, 1.0));
    }
    WeightMatrix::from_triplets(n, triplets)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TightnessReport {
    pub n: usize,
    pub k: usize,
    pub b: usize,
    #[serde(serialize_with = "serialize_score")]
    pub select_score: f64,
    #[serde(serialize_with = "serialize_score")]
    pub opt_score: f64,
    pub ratio: ScoreRatio,
    #[serde(serialize_with = "serialize_alpha")]
    pub expected: Alpha,
    pub pass: bool,
}

/// Builds the canonical system and worst-case instance for (n, k) and
/// measures selection against the optimum.
pub fn run_tightness(n: usize, k: usize) -> Result<TightnessReport> {
    let ps = build_partition_system(n, k)?;
    let a = tightness_instance(n, k, &ps)?;
    let sel = select_k(&a, k, &ps)?;
    let (_, opt) = opt_k(&a, k)?;
    let ratio = ScoreRatio::new(sel.score, opt);
    let expected = Alpha::new(1, ps.b() as u64);
    Ok(TightnessReport {
        n,
        k,
        b: ps.b(),
        select_score: sel.score,
        opt_score: opt,
        pass: ratio.equals(&expected) && sel.score == 1.0 && opt == ps.b() as f64,
        ratio,
        expected,
    })
}

/// Mechanism score against the optimum on one instance.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RatioReport {
    pub instance: String,
    #[serde(serialize_with = "serialize_score")]
    pub mechanism_score: f64,
    #[serde(serialize_with = "serialize_score")]
    pub oracle_score: f64,
    pub ratio: ScoreRatio,
    #[serde(serialize_with = "serialize_alpha")]
    pub alpha: Alpha,
    pub pass: bool,
}

impl RatioReport {
    pub fn new(instance: impl Into<String>, mechanism_score: f64, oracle_score: f64, alpha: Alpha) -> Self {
        let ratio = ScoreRatio::new(mechanism_score, oracle_score);
        RatioReport {
            instance: instance.into(),
            mechanism_score,
            oracle_score,
            pass: ratio.at_least(&alpha),
            ratio,
            alpha,
        }
    }
}
