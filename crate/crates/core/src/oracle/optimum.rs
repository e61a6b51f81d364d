use crate::assignment::Assignment;
use crate::error::{Error, Result};
use crate::weights::{Agent, AgentSet, InstanceTuple, WeightMatrix};

/// Default node budget for [`opt_assignment`].
pub const DEFAULT_NODE_BUDGET: u64 = 10_000_000;

/// Best size-`k` set. Scores are additive over agents, so this is the `k`
/// largest column sums; ties go to smaller indices.
pub fn opt_k(a: &WeightMatrix, k: usize) -> Result<(AgentSet, f64)> {
    if k > a.n() {
        return Err(Error::precondition(format!(
            "k = {k} exceeds n = {}",
            a.n()
        )));
    }
    let deg = a.indegrees();
    let mut order: Vec<Agent> = (1..=a.n()).collect();
    order.sort_by(|&x, &y| deg[y - 1].total_cmp(&deg[x - 1]).then(x.cmp(&y)));
    let set: AgentSet = order.into_iter().take(k).collect();
    let score = a.score(&set);
    Ok((set, score))
}

/// Best feasible assignment by branch and bound over agent → job/none
/// labelings. Fails instead of approximating once `budget` nodes have been
/// expanded.
pub fn opt_assignment(t: &InstanceTuple, k: usize, budget: u64) -> Result<(Assignment, f64)> {
    let n = t.n();
    let m = t.m();
    // gain[j][l]: full score of agent j + 1 in job l
    let per_job: Vec<Vec<f64>> = t.matrices().iter().map(|a| a.indegrees()).collect();
    let gain: Vec<Vec<f64>> = (0..n)
        .map(|j| (0..m).map(|l| per_job[l][j]).collect())
        .collect();
    let best_gain = |j: usize| gain[j].iter().copied().fold(0.0, f64::max);

    let mut order: Vec<usize> = (0..n).filter(|&j| best_gain(j) > 0.0).collect();
    order.sort_by(|&x, &y| best_gain(y).total_cmp(&best_gain(x)).then(x.cmp(&y)));

    // suffix bounds over `order[pos..]`
    let len = order.len();
    let mut suffix_max = vec![0.0; len + 1];
    for pos in (0..len).rev() {
        suffix_max[pos] = suffix_max[pos + 1] + best_gain(order[pos]);
    }
    // top[pos][l][c]: sum of the c largest job-l gains in order[pos..]
    let top: Vec<Vec<Vec<f64>>> = (0..=len)
        .map(|pos| {
            (0..m)
                .map(|l| {
                    let mut g: Vec<f64> = order[pos..].iter().map(|&j| gain[j][l]).collect();
                    g.sort_by(|a, b| b.total_cmp(a));
                    let mut acc = vec![0.0];
                    for (i, x) in g.iter().take(k).enumerate() {
                        acc.push(acc[i] + x);
                    }
                    acc
                })
                .collect()
        })
        .collect();

    let mut search = AssignmentSearch {
        gain: &gain,
        order: &order,
        suffix_max: &suffix_max,
        top: &top,
        k,
        load: vec![0; m],
        label: vec![None; len],
        best_label: vec![None; len],
        best: f64::NEG_INFINITY,
        nodes: 0,
        budget,
    };
    search.greedy_incumbent();
    search.dfs(0, 0.0)?;

    let mut jobs = vec![AgentSet::new(); m];
    for (pos, l) in search.best_label.iter().enumerate() {
        if let Some(l) = l {
            jobs[*l].insert(order[pos] + 1);
        }
    }
    let assignment = Assignment::new(jobs, k)?;
    let score = assignment.score(t);
    Ok((assignment, score))
}

struct AssignmentSearch<'a> {
    gain: &'a [Vec<f64>],
    order: &'a [usize],
    suffix_max: &'a [f64],
    top: &'a [Vec<Vec<f64>>],
    k: usize,
    load: Vec<usize>,
    label: Vec<Option<usize>>,
    best_label: Vec<Option<usize>>,
    best: f64,
    nodes: u64,
    budget: u64,
}

impl AssignmentSearch<'_> {
    fn greedy_incumbent(&mut self) {
        let mut load = vec![0; self.load.len()];
        let mut total = 0.0;
        for (pos, &j) in self.order.iter().enumerate() {
            let choice = (0..load.len())
                .filter(|&l| load[l] < self.k)
                .max_by(|&x, &y| self.gain[j][x].total_cmp(&self.gain[j][y]).then(y.cmp(&x)));
            if let Some(l) = choice {
                load[l] += 1;
                total += self.gain[j][l];
                self.best_label[pos] = Some(l);
            }
        }
        self.best = total;
    }

    fn bound(&self, pos: usize) -> f64 {
        let by_capacity: f64 = (0..self.load.len())
            .map(|l| self.top[pos][l][(self.k - self.load[l]).min(self.top[pos][l].len() - 1)])
            .sum();
        by_capacity.min(self.suffix_max[pos])
    }

    fn dfs(&mut self, pos: usize, value: f64) -> Result<()> {
        self.nodes += 1;
        if self.nodes > self.budget {
            return Err(Error::BudgetExceeded {
                budget: self.budget,
            });
        }
        if pos == self.order.len() {
            if value > self.best {
                self.best = value;
                self.best_label.clone_from(&self.label);
            }
            return Ok(());
        }
        if value + self.bound(pos) <= self.best {
            return Ok(());
        }
        let j = self.order[pos];
        let mut jobs: Vec<usize> = (0..self.load.len()).filter(|&l| self.load[l] < self.k).collect();
        jobs.sort_by(|&x, &y| self.gain[j][y].total_cmp(&self.gain[j][x]).then(x.cmp(&y)));
        for l in jobs {
            self.load[l] += 1;
            self.label[pos] = Some(l);
            let r = self.dfs(pos + 1, value + self.gain[j][l]);
            self.load[l] -= 1;
            self.label[pos] = None;
            r?;
        }
        self.dfs(pos + 1, value)
    }
}
