use std::sync::atomic::{AtomicBool, AtomicU64, Ordering};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::assignment::{assign_k, gen_assign_with, assignment_params};
use crate::error::{Error, Result};
use crate::partition::{build_partition_system, PartitionSystem};
use crate::selection::{gen_select_with, select_k, selection_params};
use crate::weights::{Agent, AgentSet, InstanceTuple};

/// A selection or assignment procedure under test. Selection mechanisms
/// take single-job tuples and return one set.
pub trait Mechanism: Sync {
    fn name(&self) -> String;

    fn run(&self, t: &InstanceTuple) -> Result<Vec<AgentSet>>;
}

fn single_job(t: &InstanceTuple) -> Result<&crate::weights::WeightMatrix> {
    if t.m() != 1 {
        return Err(Error::precondition(format!(
            "selection mechanisms take one job, got {}",
            t.m()
        )));
    }
    Ok(t.job(1))
}

/// Select with a fixed partition system.
pub struct SelectMechanism {
    pub k: usize,
    pub ps: PartitionSystem,
}

impl SelectMechanism {
    pub fn canonical(n: usize, k: usize) -> Result<Self> {
        Ok(SelectMechanism {
            k,
            ps: build_partition_system(n, k)?,
        })
    }
}

impl Mechanism for SelectMechanism {
    fn name(&self) -> String {
        format!("select(n={}, k={})", self.ps.n(), self.k)
    }

    fn run(&self, t: &InstanceTuple) -> Result<Vec<AgentSet>> {
        Ok(vec![select_k(single_job(t)?, self.k, &self.ps)?.selected])
    }
}

/// Padded selection for arbitrary applicable (n, k).
pub struct GenSelectMechanism {
    pub k: usize,
    ps: PartitionSystem,
}

impl GenSelectMechanism {
    pub fn new(n: usize, k: usize) -> Result<Self> {
        let p = selection_params(n, k)?;
        Ok(GenSelectMechanism {
            k,
            ps: build_partition_system(p.n_tilde, p.k_tilde)?,
        })
    }
}

impl Mechanism for GenSelectMechanism {
    fn name(&self) -> String {
        format!("gen-select(k={})", self.k)
    }

    fn run(&self, t: &InstanceTuple) -> Result<Vec<AgentSet>> {
        Ok(vec![gen_select_with(single_job(t)?, self.k, &self.ps)?.selected])
    }
}

pub struct AssignMechanism {
    pub k: usize,
    pub ps: PartitionSystem,
}

impl AssignMechanism {
    pub fn canonical(n: usize, k: usize) -> Result<Self> {
        Ok(AssignMechanism {
            k,
            ps: build_partition_system(n, k)?,
        })
    }
}

impl Mechanism for AssignMechanism {
    fn name(&self) -> String {
        format!("assign(n={}, k={})", self.ps.n(), self.k)
    }

    fn run(&self, t: &InstanceTuple) -> Result<Vec<AgentSet>> {
        Ok(assign_k(t, self.k, &self.ps)?.jobs.jobs().to_vec())
    }
}

pub struct GenAssignMechanism {
    pub k: usize,
    ps: PartitionSystem,
}

impl GenAssignMechanism {
    pub fn new(n: usize, m: usize, k: usize) -> Result<Self> {
        let p = assignment_params(n, m, k)?;
        Ok(GenAssignMechanism {
            k,
            ps: build_partition_system(p.n_tilde, p.k_tilde)?,
        })
    }
}

impl Mechanism for GenAssignMechanism {
    fn name(&self) -> String {
        format!("gen-assign(k={})", self.k)
    }

    fn run(&self, t: &InstanceTuple) -> Result<Vec<AgentSet>> {
        Ok(gen_assign_with(t, self.k, &self.ps)?.jobs.jobs().to_vec())
    }
}

/// The `k` agents with the largest column sums. Optimal, but not impartial.
pub struct TopKMechanism {
    pub k: usize,
}

impl Mechanism for TopKMechanism {
    fn name(&self) -> String {
        format!("top-k(k={})", self.k)
    }

    fn run(&self, t: &InstanceTuple) -> Result<Vec<AgentSet>> {
        Ok(vec![super::opt_k(single_job(t)?, self.k)?.0])
    }
}

/// Always `{1, …, k}`.
pub struct ConstantMechanism {
    pub k: usize,
}

impl Mechanism for ConstantMechanism {
    fn name(&self) -> String {
        format!("constant(k={})", self.k)
    }

    fn run(&self, t: &InstanceTuple) -> Result<Vec<AgentSet>> {
        Ok(vec![(1..=self.k.min(t.n())).collect()])
    }
}

/// Alternative rows tried for each deviating agent.
#[derive(Debug, Clone, PartialEq)]
pub enum Deviations {
    /// Every row with entries from `values` on the `support` agents that
    /// follow the deviating agent cyclically (in every job), zero elsewhere.
    Grid { values: Vec<f64>, support: usize },
    /// `count` rows per agent with independent integer entries in `0..=max`.
    Random { max: u64, count: usize, seed: u64 },
}

/// Base instances and deviations to test.
#[derive(Debug, Clone)]
pub struct ImpartialitySpace {
    pub instances: Vec<InstanceTuple>,
    pub deviations: Deviations,
    /// Cap on mechanism evaluations.
    pub budget: Option<u64>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Violation {
    /// Index into the tested instances.
    pub instance: usize,
    pub agent: Agent,
    pub job: usize,
    /// Deviating rows, one per job.
    pub deviation: Vec<Vec<f64>>,
    pub before: bool,
    pub after: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ImpartialityReport {
    pub mechanism: String,
    pub instances: usize,
    pub trials: u64,
    pub violation_count: u64,
    /// First violations found, at most [`MAX_RECORDED_VIOLATIONS`].
    pub violations: Vec<Violation>,
    pub budget_exhausted: bool,
}

pub const MAX_RECORDED_VIOLATIONS: usize = 32;

impl ImpartialityReport {
    pub fn certified(&self) -> bool {
        self.violation_count == 0 && !self.budget_exhausted
    }
}

/// Compares every agent's membership before and after replacing its own row
/// with each deviation. Work is spread over (instance, agent) pairs.
pub fn check_impartial(mech: &dyn Mechanism, space: &ImpartialitySpace) -> Result<ImpartialityReport> {
    let trials = AtomicU64::new(0);
    let exhausted = AtomicBool::new(false);
    let budget = space.budget.unwrap_or(u64::MAX);

    let baselines = space
        .instances
        .par_iter()
        .map(|t| mech.run(t))
        .collect::<Result<Vec<_>>>()?;

    let pairs: Vec<(usize, Agent)> = space
        .instances
        .iter()
        .enumerate()
        .flat_map(|(idx, t)| (1..=t.n()).map(move |i| (idx, i)))
        .collect();

    let found = pairs
        .par_iter()
        .map(|&(idx, agent)| -> Result<(u64, Vec<Violation>)> {
            let base = &space.instances[idx];
            let before = &baselines[idx];
            let mut count = 0;
            let mut recorded = Vec::new();
            let mut check = |rows: Vec<Vec<f64>>| -> Result<bool> {
                if trials.fetch_add(1, Ordering::Relaxed) >= budget {
                    exhausted.store(true, Ordering::Relaxed);
                    return Ok(false);
                }
                let mut t = base.clone();
                t.set_rows(agent, &rows)?;
                let after = mech.run(&t)?;
                for (job, set) in before.iter().enumerate() {
                    let b = set.contains(&agent);
                    let a = after.get(job).is_some_and(|x| x.contains(&agent));
                    if a != b {
                        count += 1;
                        if recorded.len() < MAX_RECORDED_VIOLATIONS {
                            recorded.push(Violation {
                                instance: idx,
                                agent,
                                job: job + 1,
                                deviation: rows.clone(),
                                before: b,
                                after: a,
                            });
                        }
                    }
                }
                Ok(true)
            };
            for_each_deviation(base, agent, &space.deviations, idx, &mut check)?;
            Ok((count, recorded))
        })
        .collect::<Result<Vec<_>>>()?;

    let violation_count = found.iter().map(|(c, _)| c).sum();
    let violations = found
        .into_iter()
        .flat_map(|(_, v)| v)
        .take(MAX_RECORDED_VIOLATIONS)
        .collect();
    Ok(ImpartialityReport {
        mechanism: mech.name(),
        instances: space.instances.len(),
        trials: trials.load(Ordering::Relaxed).min(budget),
        violation_count,
        violations,
        budget_exhausted: exhausted.load(Ordering::Relaxed),
    })
}

fn for_each_deviation<F>(
    t: &InstanceTuple,
    agent: Agent,
    deviations: &Deviations,
    instance: usize,
    f: &mut F,
) -> Result<()>
where
    F: FnMut(Vec<Vec<f64>>) -> Result<bool>,
{
    let n = t.n();
    let m = t.m();
    match deviations {
        Deviations::Grid { values, support } => {
            let support = (*support).min(n - 1);
            let columns: Vec<usize> = (1..=support).map(|s| (agent - 1 + s) % n).collect();
            let slots = support * m;
            let base = values.len();
            if base == 0 {
                return Ok(());
            }
            let mut digits = vec![0usize; slots];
            loop {
                let rows = (0..m)
                    .map(|l| {
                        let mut row = vec![0.0; n];
                        for (c, &col) in columns.iter().enumerate() {
                            row[col] = values[digits[l * support + c]];
                        }
                        row
                    })
                    .collect();
                if !f(rows)? {
                    return Ok(());
                }
                // odometer increment
                let mut pos = 0;
                loop {
                    if pos == slots {
                        return Ok(());
                    }
                    digits[pos] += 1;
                    if digits[pos] < base {
                        break;
                    }
                    digits[pos] = 0;
                    pos += 1;
                }
            }
        }
        Deviations::Random { max, count, seed } => {
            let mut rng = ChaCha8Rng::seed_from_u64(
                seed ^ (instance as u64).wrapping_mul(0x9E37_79B9_7F4A_7C15) ^ (agent as u64) << 40,
            );
            for _ in 0..*count {
                let rows = (0..m)
                    .map(|_| {
                        (1..=n)
                            .map(|j| {
                                if j == agent {
                                    0.0
                                } else {
                                    rng.random_range(0..=*max) as f64
                                }
                            })
                            .collect()
                    })
                    .collect();
                if !f(rows)? {
                    return Ok(());
                }
            }
            Ok(())
        }
    }
}
