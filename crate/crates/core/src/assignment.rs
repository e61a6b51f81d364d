//! Impartial assignment of agents to `m` jobs of capacity `k`.
//!
//! The partition system is shared with selection. Every partition picks an
//! injective tuple of `m` candidates, one per job, maximizing the sum of
//! per-job modified scores. An agent picked for two jobs keeps the one where
//! it has the larger full score (larger job index on ties).

use serde::Serialize;

use crate::error::{Error, Result};
use crate::partition::{build_partition_system, PartitionSystem};
use crate::ratio::{serialize_alpha, Alpha, ScoreRatio};
use crate::selection::{modified_scores, ModifiedScoreTable, ReductionParams};
use crate::weights::{serialize_opt_score, serialize_score, Agent, AgentSet, InstanceTuple};

/// `m` pairwise disjoint agent sets, one per job.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(transparent)]
pub struct Assignment {
    jobs: Vec<AgentSet>,
}

impl Assignment {
    pub fn empty(m: usize) -> Self {
        Assignment {
            jobs: vec![AgentSet::new(); m],
        }
    }

    /// Checks disjointness and the capacity `k`.
    pub fn new(jobs: Vec<AgentSet>, k: usize) -> Result<Self> {
        let a = Assignment { jobs };
        if !a.is_feasible(k) {
            return Err(Error::precondition(format!(
                "jobs overlap or exceed capacity k = {k}"
            )));
        }
        Ok(a)
    }

    pub fn jobs(&self) -> &[AgentSet] {
        &self.jobs
    }

    pub fn job(&self, job: usize) -> &AgentSet {
        &self.jobs[job - 1]
    }

    pub fn m(&self) -> usize {
        self.jobs.len()
    }

    pub fn is_feasible(&self, k: usize) -> bool {
        let mut seen = AgentSet::new();
        self.jobs
            .iter()
            .all(|x| x.len() <= k && x.iter().all(|&j| seen.insert(j)))
    }

    /// Sum over jobs of the job's set scored under the job's matrix.
    pub fn score(&self, t: &InstanceTuple) -> f64 {
        self.jobs
            .iter()
            .zip(t.matrices())
            .map(|(x, a)| a.score(x))
            .sum()
    }

    /// Job holding `agent`, if any.
    pub fn job_of(&self, agent: Agent) -> Option<usize> {
        self.jobs.iter().position(|x| x.contains(&agent)).map(|l| l + 1)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct AssignmentResult {
    pub jobs: Assignment,
    /// Tuple picked in each partition, before conflicts were resolved.
    pub partial: Vec<Vec<Agent>>,
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

impl AssignmentResult {
    pub fn with_optimum(mut self, opt: f64) -> Self {
        self.opt_score = Some(opt);
        self.ratio = Some(ScoreRatio::new(self.score, opt));
        self
    }
}

/// Lexicographically largest `(Σ_ℓ σ̂(v_ℓ; A_ℓ), v_1, …, v_m)` over
/// injective tuples `v` drawn from the candidates of partition `p`.
pub fn best_partial_assignment(
    p: usize,
    ps: &PartitionSystem,
    tables: &[ModifiedScoreTable],
    m: usize,
) -> Result<Vec<Agent>> {
    if m > ps.b() {
        return Err(Error::precondition(format!(
            "m = {m} jobs exceed candidate set size b = {}",
            ps.b()
        )));
    }
    if tables.len() != m {
        return Err(Error::precondition(format!(
            "{} score tables for m = {m} jobs",
            tables.len()
        )));
    }
    let mut cands: Vec<Agent> = ps.candidates(p).to_vec();
    cands.sort_unstable_by(|a, b| b.cmp(a));
    // scores[ℓ][c] = modified score of cands[c] for job ℓ
    let scores: Vec<Vec<f64>> = tables
        .iter()
        .map(|t| cands.iter().map(|&j| t.get(ps, p, j)).collect())
        .collect();

    let mut search = TupleSearch {
        scores: &scores,
        used: vec![false; cands.len()],
        current: Vec::with_capacity(m),
        best: None,
    };
    search.run(0.0);
    let (_, best) = search.best.expect("m <= b guarantees a tuple");
    Ok(best.into_iter().map(|c| cands[c]).collect())
}

struct TupleSearch<'a> {
    scores: &'a [Vec<f64>],
    used: Vec<bool>,
    current: Vec<usize>,
    best: Option<(f64, Vec<usize>)>,
}

impl TupleSearch<'_> {
    // Candidates are sorted by decreasing index, so tuples are visited in
    // decreasing lexicographic order and the first tuple reaching the best
    // sum is the lexicographic winner.
    fn run(&mut self, sum: f64) {
        let depth = self.current.len();
        if depth == self.scores.len() {
            if self.best.as_ref().is_none_or(|(s, _)| sum > *s) {
                self.best = Some((sum, self.current.clone()));
            }
            return;
        }
        for c in 0..self.used.len() {
            if self.used[c] {
                continue;
            }
            self.used[c] = true;
            self.current.push(c);
            self.run(sum + self.scores[depth][c]);
            self.current.pop();
            self.used[c] = false;
        }
    }
}

/// Assigns up to `k` agents to each job using the partitions of `ps`.
pub fn assign_k(t: &InstanceTuple, k: usize, ps: &PartitionSystem) -> Result<AssignmentResult> {
    let n = t.n();
    let m = t.m();
    if ps.n() != n {
        return Err(Error::DimensionMismatch {
            expected: ps.n(),
            actual: n,
        });
    }
    if ps.k() != k {
        return Err(Error::precondition(format!(
            "partition system has {} partitions, expected k = {k}",
            ps.k()
        )));
    }
    if m * k > n {
        return Err(Error::precondition(format!(
            "m·k = {} exceeds n = {n}",
            m * k
        )));
    }
    if m > ps.b() {
        return Err(Error::precondition(format!(
            "m = {m} exceeds b = {}",
            ps.b()
        )));
    }

    let tables = t
        .matrices()
        .iter()
        .map(|a| modified_scores(a, ps))
        .collect::<Result<Vec<_>>>()?;

    let mut jobs = vec![AgentSet::new(); m];
    let mut partial = Vec::with_capacity(k);
    for p in 1..=k {
        let x = best_partial_assignment(p, ps, &tables, m)?;
        for (job, &agent) in jobs.iter_mut().zip(&x) {
            job.insert(agent);
        }
        partial.push(x);
    }

    let indegrees: Vec<Vec<f64>> = t.matrices().iter().map(|a| a.indegrees()).collect();
    for j in 1..=n {
        let holding: Vec<usize> = (0..m).filter(|&l| jobs[l].contains(&j)).collect();
        debug_assert!(holding.len() <= 2);
        if holding.len() == 2 {
            let drop = holding
                .iter()
                .copied()
                .min_by(|&x, &y| {
                    indegrees[x][j - 1]
                        .total_cmp(&indegrees[y][j - 1])
                        .then(x.cmp(&y))
                })
                .expect("two jobs");
            jobs[drop].remove(&j);
        }
    }

    let jobs = Assignment { jobs };
    let score = jobs.score(t);
    Ok(AssignmentResult {
        jobs,
        partial,
        score,
        alpha: Alpha::new(1, 2 * ps.b() as u64),
        params: None,
        opt_score: None,
        ratio: None,
    })
}

/// Padding parameters for assignment; `alpha` is half the selection guarantee.
pub fn assignment_params(n: usize, m: usize, k: usize) -> Result<ReductionParams> {
    if m == 0 {
        return Err(Error::applicability("need at least one job"));
    }
    if m * k > n {
        return Err(Error::applicability(format!(
            "m·k = {} exceeds n = {n}",
            m * k
        )));
    }
    let mut params = crate::selection::selection_params(n, k)?;
    params.alpha /= 2;
    Ok(params)
}

pub fn guarantee_alpha_assign(n: usize, m: usize, k: usize) -> Result<Alpha> {
    assignment_params(n, m, k).map(|p| p.alpha)
}

/// Assignment for any applicable (n, m, k), padding every job matrix with
/// dummy agents and dropping them from the result.
pub fn gen_assign(t: &InstanceTuple, k: usize) -> Result<AssignmentResult> {
    let params = assignment_params(t.n(), t.m(), k)?;
    let ps = build_partition_system(params.n_tilde, params.k_tilde)?;
    gen_assign_with(t, k, &ps)
}

pub fn gen_assign_with(t: &InstanceTuple, k: usize, ps: &PartitionSystem) -> Result<AssignmentResult> {
    let params = assignment_params(t.n(), t.m(), k)?;
    if ps.n() != params.n_tilde || ps.k() != params.k_tilde {
        return Err(Error::precondition(format!(
            "partition system is for ({}, {}), expected ({}, {})",
            ps.n(),
            ps.k(),
            params.n_tilde,
            params.k_tilde
        )));
    }
    let padded = t.padded(params.n_tilde)?;
    let mut result = assign_k(&padded, params.k_tilde, ps)?;
    for job in result.jobs.jobs.iter_mut() {
        job.retain(|&j| j <= t.n());
    }
    result.score = result.jobs.score(t);
    result.alpha = params.alpha;
    result.params = Some(params);
    Ok(result)
}
