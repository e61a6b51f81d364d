//! Deterministic impartial selection of at most `k` agents.
//!
//! Each agent is a candidate in two partitions. In the first (`l(j)`) it is
//! scored by every voter of that partition; in the second (`r(j)`) only by
//! voters not already counted in the first. The two modified scores sum to
//! the full score. Each partition then picks its candidate with the largest
//! `(modified score, index)` pair.

use std::cmp::Ordering;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::partition::{build_partition_system, PartitionSystem};
use crate::ratio::{serialize_alpha, Alpha, ScoreRatio};
use crate::weights::{serialize_opt_score, serialize_score, Agent, AgentSet, WeightMatrix};

/// Per-agent modified scores in its two candidacies.
#[derive(Debug, Clone, PartialEq)]
pub struct ModifiedScoreTable {
    // (left, right) per agent, indexed by agent - 1
    entries: Vec<(f64, f64)>,
}

impl ModifiedScoreTable {
    /// Modified score of `agent` as a candidate of partition `p`, which must
    /// be one of the agent's two slots.
    pub fn get(&self, ps: &PartitionSystem, p: usize, agent: Agent) -> f64 {
        let (l, r) = ps.slots(agent);
        let (left, right) = self.entries[agent - 1];
        if p == l {
            left
        } else {
            debug_assert_eq!(p, r, "agent {agent} is not a candidate of partition {p}");
            right
        }
    }

    pub fn left(&self, agent: Agent) -> f64 {
        self.entries[agent - 1].0
    }

    pub fn right(&self, agent: Agent) -> f64 {
        self.entries[agent - 1].1
    }
}

pub fn modified_scores(a: &WeightMatrix, ps: &PartitionSystem) -> Result<ModifiedScoreTable> {
    if a.n() != ps.n() {
        return Err(Error::DimensionMismatch {
            expected: ps.n(),
            actual: a.n(),
        });
    }
    let entries = (1..=a.n())
        .map(|j| {
            let (l, r) = ps.slots(j);
            let mut left = 0.0;
            let mut right = 0.0;
            for i in 1..=a.n() {
                let w = a.get(i, j);
                if w == 0.0 {
                    continue;
                }
                if !ps.is_candidate(l, i) {
                    left += w;
                } else if !ps.is_candidate(r, i) {
                    // voter of r(j) that was not a voter of l(j)
                    right += w;
                }
            }
            (left, right)
        })
        .collect();
    Ok(ModifiedScoreTable { entries })
}

/// Total order on `(score, index)` pairs used for every tie-break.
pub(crate) fn cmp_scored(a: (f64, Agent), b: (f64, Agent)) -> Ordering {
    a.0.total_cmp(&b.0).then(a.1.cmp(&b.1))
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SelectionResult {
    pub selected: AgentSet,
    /// Winner of each partition, in partition order. Dummy agents introduced
    /// by padding are kept here but never in `selected`.
    pub winners: Vec<Agent>,
    #[serde(serialize_with = "serialize_score")]
    pub score: f64,
    #[serde(serialize_with = "serialize_alpha")]
    pub alpha: Alpha,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub params: Option<ReductionParams>,
    #[serde(
        skip_serializing_if = "Option::is_none",
        serialize_with = "serialize_opt_score"
    )]
    pub opt_score: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub ratio: Option<ScoreRatio>,
}

impl SelectionResult {
    /// Attaches an optimum score and the resulting ratio.
    pub fn with_optimum(mut self, opt: f64) -> Self {
        self.opt_score = Some(opt);
        self.ratio = Some(ScoreRatio::new(self.score, opt));
        self
    }
}

/// Selects one winner per partition of `ps`.
pub fn select_k(a: &WeightMatrix, k: usize, ps: &PartitionSystem) -> Result<SelectionResult> {
    if ps.k() != k {
        return Err(Error::precondition(format!(
            "partition system has {} partitions, expected k = {k}",
            ps.k()
        )));
    }
    let table = modified_scores(a, ps)?;
    let winners: Vec<Agent> = (1..=k)
        .map(|p| {
            ps.candidates(p)
                .iter()
                .map(|&j| (table.get(ps, p, j), j))
                .max_by(|x, y| cmp_scored(*x, *y))
                .map(|(_, j)| j)
                .expect("candidate sets are nonempty")
        })
        .collect();
    let selected: AgentSet = winners.iter().copied().collect();
    let score = a.score(&selected);
    Ok(SelectionResult {
        selected,
        winners,
        score,
        alpha: Alpha::new(1, ps.b() as u64),
        params: None,
        opt_score: None,
        ratio: None,
    })
}

/// Padded parameters for arbitrary (n, k).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct ReductionParams {
    /// Number of partitions actually used: `k` rounded down to even.
    pub k_tilde: usize,
    /// Padded agent count, a multiple of `k_tilde / 2`.
    pub n_tilde: usize,
    pub b: usize,
    #[serde(serialize_with = "serialize_alpha")]
    pub alpha: Alpha,
}

pub fn selection_params(n: usize, k: usize) -> Result<ReductionParams> {
    if k <= 1 || k >= n {
        return Err(Error::applicability(format!(
            "need 1 < k < n, got n = {n}, k = {k}"
        )));
    }
    let k_tilde = k - k % 2;
    // k_tilde >= 2 sqrt(n), in integers
    if k_tilde * k_tilde < 4 * n {
        return Err(Error::applicability(format!(
            "k - k mod 2 = {k_tilde} is below 2·sqrt(n) = 2·sqrt({n})"
        )));
    }
    let half = k_tilde / 2;
    let b = (2 * n).div_ceil(k_tilde);
    let n_tilde = half * b;
    Ok(ReductionParams {
        k_tilde,
        n_tilde,
        b,
        alpha: Alpha::new(k_tilde as u64, (k * b) as u64),
    })
}

pub fn guarantee_alpha(n: usize, k: usize) -> Result<Alpha> {
    selection_params(n, k).map(|p| p.alpha)
}

/// Selection for any applicable (n, k): pads with dummy agents to the
/// nearest conforming size, selects with `k - k mod 2` partitions and drops
/// dummies from the result.
pub fn gen_select(a: &WeightMatrix, k: usize) -> Result<SelectionResult> {
    let params = selection_params(a.n(), k)?;
    let ps = build_partition_system(params.n_tilde, params.k_tilde)?;
    gen_select_with(a, k, &ps)
}

/// [`gen_select`] with a prebuilt system for `(n_tilde, k_tilde)`.
pub fn gen_select_with(a: &WeightMatrix, k: usize, ps: &PartitionSystem) -> Result<SelectionResult> {
    let params = selection_params(a.n(), k)?;
    if ps.n() != params.n_tilde || ps.k() != params.k_tilde {
        return Err(Error::precondition(format!(
            "partition system is for ({}, {}), expected ({}, {})",
            ps.n(),
            ps.k(),
            params.n_tilde,
            params.k_tilde
        )));
    }
    let padded = a.padded(params.n_tilde)?;
    let mut result = select_k(&padded, params.k_tilde, ps)?;
    result.selected.retain(|&j| j <= a.n());
    result.score = a.score(&result.selected);
    result.alpha = params.alpha;
    result.params = Some(params);
    Ok(result)
}
