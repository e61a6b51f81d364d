use serde::{Deserialize, Serialize};

use super::coloring::edge_color;
use super::graph::build_regular_bipartite_graph;
use crate::error::{Error, Result};
use crate::weights::{Agent, AgentSet};

/// `k` voter/candidate partitions of agents `1..=n`.
///
/// Every agent is a candidate in exactly two partitions `l(j) < r(j)`,
/// candidate sets have size `b = 2n/k`, two candidate sets share at most one
/// agent, and agents of equal color never share a candidate set. The first
/// candidate set is `{1, …, b}`. Partitions are labeled `1..=k`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PartitionSystem {
    n: usize,
    k: usize,
    b: usize,
    candidate_sets: Vec<Vec<Agent>>,
    slots: Vec<(usize, usize)>,
    colors: Vec<usize>,
    // candidate[(p - 1) * n + (j - 1)]
    candidate: Vec<bool>,
}

/// Checks the (n, k) conditions under which the canonical system exists and
/// returns `b`.
pub fn partition_degree(n: usize, k: usize) -> Result<usize> {
    if k == 0 || !k.is_multiple_of(2) {
        return Err(Error::precondition(format!("k = {k} must be even and positive")));
    }
    if k > n {
        return Err(Error::precondition(format!("k = {k} must not exceed n = {n}")));
    }
    if !(2 * n).is_multiple_of(k) {
        return Err(Error::precondition(format!(
            "b = 2n/k = {}/{k} is not an integer",
            2 * n
        )));
    }
    let b = 2 * n / k;
    if b < 2 {
        return Err(Error::precondition(format!("b = {b} must be at least 2")));
    }
    if b > k / 2 {
        return Err(Error::precondition(format!(
            "b = {b} must not exceed k/2 = {}",
            k / 2
        )));
    }
    Ok(b)
}

/// Whether (n, k) admits the canonical system directly (no padding).
pub fn is_conforming(n: usize, k: usize) -> bool {
    partition_degree(n, k).is_ok()
}

/// The canonical system for (n, k): the circulant bipartite graph on `k`
/// vertices with `n` edges, read through its dual. Graph vertex `p - 1` is
/// partition `p`; the edges at vertex 0 become agents `1..=b`, the rest are
/// numbered in edge order.
pub fn build_partition_system(n: usize, k: usize) -> Result<PartitionSystem> {
    let b = partition_degree(n, k)?;
    let graph = build_regular_bipartite_graph(k, b)?;
    let coloring = edge_color(&graph);
    let hyper = graph.dual();

    // edges are ordered by left endpoint, so the edges at vertex 0 are
    // already 0..b and the labeling is the identity shifted by one
    let label = |edge: usize| edge + 1;
    debug_assert!(hyper.hyperedges()[0].iter().copied().eq(0..b));

    let candidate_sets = hyper
        .hyperedges()
        .iter()
        .map(|e| {
            let mut set: Vec<Agent> = e.iter().map(|&x| label(x)).collect();
            set.sort_unstable();
            set
        })
        .collect();
    let mut colors = vec![0; n];
    for (edge, &c) in coloring.colors().iter().enumerate() {
        colors[label(edge) - 1] = c;
    }
    PartitionSystem::from_parts(n, candidate_sets, colors)
}

impl PartitionSystem {
    /// Assembles a system from explicit candidate sets and agent colors,
    /// verifying every structural property.
    pub fn from_parts(n: usize, candidate_sets: Vec<Vec<Agent>>, colors: Vec<usize>) -> Result<Self> {
        let invalid = |msg: String| Error::InvalidPartitionSystem(msg);
        let k = candidate_sets.len();
        if k == 0 {
            return Err(invalid("no partitions".into()));
        }
        if !(2 * n).is_multiple_of(k) {
            return Err(invalid(format!("2n/k = {}/{k} is not an integer", 2 * n)));
        }
        let b = 2 * n / k;
        if colors.len() != n {
            return Err(invalid(format!("{} colors given for {n} agents", colors.len())));
        }

        let mut candidate = vec![false; k * n];
        let mut sets = Vec::with_capacity(k);
        for (p, set) in candidate_sets.into_iter().enumerate() {
            let mut set = set;
            set.sort_unstable();
            if set.len() != b {
                return Err(invalid(format!(
                    "candidate set {} has {} agents, expected b = {b}",
                    p + 1,
                    set.len()
                )));
            }
            for (idx, &j) in set.iter().enumerate() {
                if j == 0 || j > n {
                    return Err(Error::AgentOutOfRange { agent: j, n });
                }
                if idx > 0 && set[idx - 1] == j {
                    return Err(invalid(format!("agent {j} repeated in candidate set {}", p + 1)));
                }
                candidate[p * n + (j - 1)] = true;
            }
            sets.push(set);
        }

        let mut slots = vec![(0, 0); n];
        for j in 1..=n {
            let parts: Vec<usize> = (1..=k).filter(|&p| candidate[(p - 1) * n + (j - 1)]).collect();
            match parts.as_slice() {
                &[l, r] => slots[j - 1] = (l, r),
                _ => {
                    return Err(invalid(format!(
                        "agent {j} is a candidate in {} partitions, expected 2",
                        parts.len()
                    )))
                }
            }
        }

        for (p, set) in sets.iter().enumerate() {
            for q in p + 1..k {
                let shared = set.iter().filter(|&&j| candidate[q * n + (j - 1)]).count();
                if shared > 1 {
                    return Err(invalid(format!(
                        "candidate sets {} and {} share {shared} agents",
                        p + 1,
                        q + 1
                    )));
                }
            }
        }

        if let Some(j) = colors.iter().position(|&c| c == 0 || c > b) {
            return Err(invalid(format!(
                "agent {} has color {}, expected 1..={b}",
                j + 1,
                colors[j]
            )));
        }
        for (p, set) in sets.iter().enumerate() {
            let mut seen = vec![false; b + 1];
            for &j in set {
                let c = colors[j - 1];
                if std::mem::replace(&mut seen[c], true) {
                    return Err(invalid(format!(
                        "candidate set {} holds two agents of color {c}",
                        p + 1
                    )));
                }
            }
        }

        if !sets[0].iter().copied().eq(1..=b) {
            return Err(invalid(format!(
                "first candidate set must be {{1, …, {b}}}, found {:?}",
                sets[0]
            )));
        }

        Ok(PartitionSystem {
            n,
            k,
            b,
            candidate_sets: sets,
            slots,
            colors,
            candidate,
        })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn k(&self) -> usize {
        self.k
    }

    /// Candidate set size.
    pub fn b(&self) -> usize {
        self.b
    }

    /// Sorted candidate set of partition `p` (1-based).
    pub fn candidates(&self, p: usize) -> &[Agent] {
        &self.candidate_sets[p - 1]
    }

    pub fn candidate_sets(&self) -> &[Vec<Agent>] {
        &self.candidate_sets
    }

    /// Voter set of partition `p`: everyone who is not a candidate there.
    pub fn voters(&self, p: usize) -> AgentSet {
        (1..=self.n).filter(|&j| !self.is_candidate(p, j)).collect()
    }

    #[inline]
    pub fn is_candidate(&self, p: usize, agent: Agent) -> bool {
        self.candidate[(p - 1) * self.n + (agent - 1)]
    }

    /// The two partitions `(l(j), r(j))` with `l(j) < r(j)` where `agent`
    /// is a candidate.
    pub fn slots(&self, agent: Agent) -> (usize, usize) {
        self.slots[agent - 1]
    }

    pub fn color(&self, agent: Agent) -> usize {
        self.colors[agent - 1]
    }

    pub fn colors(&self) -> &[usize] {
        &self.colors
    }

    /// Splits `agents` by color into `b` classes (index `t - 1` holds color
    /// `t`). No class contains two agents that share a candidate set.
    pub fn color_classes(&self, agents: &AgentSet) -> Result<Vec<AgentSet>> {
        let mut classes = vec![AgentSet::new(); self.b];
        for &j in agents {
            if j == 0 || j > self.n {
                return Err(Error::AgentOutOfRange { agent: j, n: self.n });
            }
            classes[self.colors[j - 1] - 1].insert(j);
        }
        Ok(classes)
    }

    pub fn to_document(&self) -> PartitionDocument {
        PartitionDocument {
            n: self.n,
            k: self.k,
            b: self.b,
            candidate_sets: self.candidate_sets.clone(),
            colors: self.colors.clone(),
        }
    }

    pub fn from_document(doc: PartitionDocument) -> Result<Self> {
        let ps = PartitionSystem::from_parts(doc.n, doc.candidate_sets, doc.colors)?;
        if ps.k != doc.k || ps.b != doc.b {
            return Err(Error::InvalidPartitionSystem(format!(
                "header says k = {}, b = {} but the sets give k = {}, b = {}",
                doc.k, doc.b, ps.k, ps.b
            )));
        }
        Ok(ps)
    }
}

/// JSON form of a partition system.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PartitionDocument {
    pub n: usize,
    pub k: usize,
    pub b: usize,
    pub candidate_sets: Vec<Vec<Agent>>,
    pub colors: Vec<usize>,
}
