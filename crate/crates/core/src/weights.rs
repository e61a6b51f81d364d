//! Vote profiles: square nonnegative weight matrices with a zero diagonal.
//!
//! Agents are labeled `1..=n` throughout the public API. Entry `(i, j)` is
//! the weight of the vote agent `i` casts for agent `j`.

use std::collections::BTreeSet;

use serde::{Serialize, Serializer};

use crate::error::{Error, Result};

/// 1-based agent label.
pub type Agent = usize;

/// Ordered set of agents, as returned by every mechanism.
pub type AgentSet = BTreeSet<Agent>;

#[derive(Debug, Clone, PartialEq)]
pub struct WeightMatrix {
    n: usize,
    data: Vec<f64>,
}

impl WeightMatrix {
    pub fn zeros(n: usize) -> Self {
        WeightMatrix {
            n,
            data: vec![0.0; n * n],
        }
    }

    /// Builds a matrix from dense rows, rejecting ragged input, negative or
    /// non-finite weights and a nonzero diagonal.
    pub fn from_rows<R: AsRef<[f64]>>(rows: &[R]) -> Result<Self> {
        let n = rows.len();
        let mut data = Vec::with_capacity(n * n);
        for (i, row) in rows.iter().enumerate() {
            let row = row.as_ref();
            if row.len() != n {
                return Err(Error::InvalidMatrix(format!(
                    "row {} has {} entries, expected {n}",
                    i + 1,
                    row.len()
                )));
            }
            data.extend_from_slice(row);
        }
        let m = WeightMatrix { n, data };
        m.validate()?;
        Ok(m)
    }

    /// Builds a matrix from 1-based `(voter, candidate, weight)` triplets.
    /// Repeated coordinates accumulate.
    pub fn from_triplets<I>(n: usize, triplets: I) -> Result<Self>
    where
        I: IntoIterator<Item = (Agent, Agent, f64)>,
    {
        let mut m = WeightMatrix::zeros(n);
        for (i, j, w) in triplets {
            m.check_agent(i)?;
            m.check_agent(j)?;
            if i == j {
                return Err(Error::InvalidMatrix(format!(
                    "diagonal vote ({i}, {j}) is not allowed"
                )));
            }
            check_weight(w, i, j)?;
            m.data[(i - 1) * n + (j - 1)] += w;
        }
        Ok(m)
    }

    fn validate(&self) -> Result<()> {
        for i in 1..=self.n {
            for j in 1..=self.n {
                let w = self.get(i, j);
                check_weight(w, i, j)?;
                if i == j && w != 0.0 {
                    return Err(Error::InvalidMatrix(format!(
                        "diagonal entry ({i}, {i}) is {w}, must be 0"
                    )));
                }
            }
        }
        Ok(())
    }

    pub fn n(&self) -> usize {
        self.n
    }

    #[inline]
    pub fn get(&self, voter: Agent, candidate: Agent) -> f64 {
        self.data[(voter - 1) * self.n + (candidate - 1)]
    }

    pub fn set(&mut self, voter: Agent, candidate: Agent, weight: f64) -> Result<()> {
        self.check_agent(voter)?;
        self.check_agent(candidate)?;
        check_weight(weight, voter, candidate)?;
        if voter == candidate && weight != 0.0 {
            return Err(Error::InvalidMatrix(format!(
                "diagonal vote ({voter}, {voter}) is not allowed"
            )));
        }
        self.data[(voter - 1) * self.n + (candidate - 1)] = weight;
        Ok(())
    }

    /// The outgoing votes of `voter`.
    pub fn row(&self, voter: Agent) -> &[f64] {
        &self.data[(voter - 1) * self.n..voter * self.n]
    }

    /// Replaces the outgoing votes of `voter`. The diagonal entry of `row`
    /// must be zero.
    pub fn set_row(&mut self, voter: Agent, row: &[f64]) -> Result<()> {
        self.check_agent(voter)?;
        if row.len() != self.n {
            return Err(Error::DimensionMismatch {
                expected: self.n,
                actual: row.len(),
            });
        }
        for (j, &w) in row.iter().enumerate() {
            check_weight(w, voter, j + 1)?;
        }
        if row[voter - 1] != 0.0 {
            return Err(Error::InvalidMatrix(format!(
                "diagonal vote ({voter}, {voter}) is not allowed"
            )));
        }
        let n = self.n;
        self.data[(voter - 1) * n..voter * n].copy_from_slice(row);
        Ok(())
    }

    pub fn rows(&self) -> impl Iterator<Item = &[f64]> {
        self.data.chunks(self.n.max(1)).take(self.n)
    }

    /// Full score of a single agent: the column sum.
    pub fn indegree(&self, candidate: Agent) -> f64 {
        (1..=self.n).map(|i| self.get(i, candidate)).sum()
    }

    /// Full scores of all agents, indexed by `agent - 1`.
    pub fn indegrees(&self) -> Vec<f64> {
        let mut out = vec![0.0; self.n];
        for row in self.rows() {
            for (acc, w) in out.iter_mut().zip(row) {
                *acc += w;
            }
        }
        out
    }

    /// Score of `candidates` counting only votes cast by `voters`.
    pub fn score_from<'a, R, S>(&self, voters: R, candidates: S) -> f64
    where
        R: IntoIterator<Item = &'a Agent>,
        S: IntoIterator<Item = &'a Agent> + Clone,
    {
        let mut total = 0.0;
        for &i in voters {
            for &j in candidates.clone() {
                total += self.get(i, j);
            }
        }
        total
    }

    /// Score of `candidates` counting every voter.
    pub fn score<'a, S>(&self, candidates: S) -> f64
    where
        S: IntoIterator<Item = &'a Agent>,
    {
        candidates.into_iter().map(|&j| self.indegree(j)).sum()
    }

    /// True when every entry is a nonnegative integer exactly representable
    /// in an `f64` mantissa, so sums are exact.
    pub fn is_integral(&self) -> bool {
        self.data
            .iter()
            .all(|w| w.fract() == 0.0 && *w <= MAX_EXACT_WEIGHT)
    }

    /// Embeds the matrix into an `n_tilde × n_tilde` matrix whose extra
    /// (dummy) agents cast and receive no votes.
    pub fn padded(&self, n_tilde: usize) -> Result<Self> {
        if n_tilde < self.n {
            return Err(Error::precondition(format!(
                "cannot pad {n} agents down to {n_tilde}",
                n = self.n
            )));
        }
        let mut out = WeightMatrix::zeros(n_tilde);
        for (i, row) in self.rows().enumerate() {
            out.data[i * n_tilde..i * n_tilde + self.n].copy_from_slice(row);
        }
        Ok(out)
    }

    /// Multiplies every weight by `factor`, which must be positive and finite.
    pub fn scaled(&self, factor: f64) -> Result<Self> {
        if !(factor.is_finite() && factor > 0.0) {
            return Err(Error::precondition(format!(
                "scale factor must be positive and finite, got {factor}"
            )));
        }
        Ok(WeightMatrix {
            n: self.n,
            data: self.data.iter().map(|w| w * factor).collect(),
        })
    }

    pub(crate) fn check_agent(&self, agent: Agent) -> Result<()> {
        if agent == 0 || agent > self.n {
            Err(Error::AgentOutOfRange { agent, n: self.n })
        } else {
            Ok(())
        }
    }
}

const MAX_EXACT_WEIGHT: f64 = (1u64 << 40) as f64;

fn check_weight(w: f64, i: Agent, j: Agent) -> Result<()> {
    if !w.is_finite() || w < 0.0 {
        return Err(Error::InvalidMatrix(format!(
            "entry ({i}, {j}) is {w}, weights must be finite and nonnegative"
        )));
    }
    Ok(())
}

/// `σ_R(S; A)`: votes cast by agents in `voters` for agents in `candidates`.
pub fn total_score(a: &WeightMatrix, voters: &AgentSet, candidates: &AgentSet) -> Result<f64> {
    for &x in voters.iter().chain(candidates) {
        a.check_agent(x)?;
    }
    Ok(a.score_from(voters, candidates))
}

/// One weight matrix per job, all over the same agents.
#[derive(Debug, Clone, PartialEq)]
pub struct InstanceTuple {
    matrices: Vec<WeightMatrix>,
}

impl InstanceTuple {
    pub fn new(matrices: Vec<WeightMatrix>) -> Result<Self> {
        let Some(first) = matrices.first() else {
            return Err(Error::precondition("an instance tuple needs at least one job"));
        };
        let n = first.n();
        if let Some(bad) = matrices.iter().find(|m| m.n() != n) {
            return Err(Error::DimensionMismatch {
                expected: n,
                actual: bad.n(),
            });
        }
        Ok(InstanceTuple { matrices })
    }

    pub fn single(a: WeightMatrix) -> Self {
        InstanceTuple { matrices: vec![a] }
    }

    pub fn n(&self) -> usize {
        self.matrices[0].n()
    }

    /// Number of jobs.
    pub fn m(&self) -> usize {
        self.matrices.len()
    }

    pub fn matrices(&self) -> &[WeightMatrix] {
        &self.matrices
    }

    pub fn job(&self, job: usize) -> &WeightMatrix {
        &self.matrices[job - 1]
    }

    pub fn into_matrices(self) -> Vec<WeightMatrix> {
        self.matrices
    }

    pub fn is_integral(&self) -> bool {
        self.matrices.iter().all(WeightMatrix::is_integral)
    }

    pub fn padded(&self, n_tilde: usize) -> Result<Self> {
        let matrices = self
            .matrices
            .iter()
            .map(|m| m.padded(n_tilde))
            .collect::<Result<_>>()?;
        Ok(InstanceTuple { matrices })
    }

    /// Replaces agent `voter`'s row in every job.
    pub fn set_rows(&mut self, voter: Agent, rows: &[Vec<f64>]) -> Result<()> {
        if rows.len() != self.m() {
            return Err(Error::precondition(format!(
                "expected {} deviating rows, got {}",
                self.m(),
                rows.len()
            )));
        }
        for (m, row) in self.matrices.iter_mut().zip(rows) {
            m.set_row(voter, row)?;
        }
        Ok(())
    }
}

/// Serializes a score as a JSON integer when it is integral, so that exact
/// instances print exact values.
pub fn serialize_score<S: Serializer>(score: &f64, s: S) -> std::result::Result<S::Ok, S::Error> {
    if score.fract() == 0.0 && score.abs() < 9.0e15 {
        s.serialize_i64(*score as i64)
    } else {
        s.serialize_f64(*score)
    }
}

pub fn serialize_opt_score<S: Serializer>(
    score: &Option<f64>,
    s: S,
) -> std::result::Result<S::Ok, S::Error> {
    match score {
        Some(v) => serialize_score(v, s),
        None => s.serialize_none(),
    }
}

/// Wrapper giving a score integral-aware serialization.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Score(#[serde(serialize_with = "serialize_score")] pub f64);
