//! Acceptance suite. Prints one PASS/FAIL line per criterion and exits
//! non-zero if any criterion fails.

use std::collections::BTreeSet;
use std::path::PathBuf;
use std::time::{Duration, Instant};

use rayon::prelude::*;

use impartial::io::{alpha_grid, generate, parse_instance_file, Generator, GridMode};
use impartial::oracle::{
    check_impartial, opt_assignment, opt_k, run_tightness, AssignMechanism, Deviations,
    ImpartialitySpace, SelectMechanism, TopKMechanism, DEFAULT_NODE_BUDGET,
};
use impartial::{
    assign_k, assignment_params, build_partition_system, build_regular_bipartite_graph,
    gen_assign, gen_select, guarantee_alpha, guarantee_alpha_assign, is_conforming, select_k,
    selection_params, Alpha, AgentSet, InstanceTuple, PartitionSystem, ScoreRatio, WeightMatrix,
};

type Outcome = Result<String, String>;

fn fixture(name: &str) -> PathBuf {
    [env!("CARGO_MANIFEST_DIR"), "tests", "fixtures", name].iter().collect()
}

fn nine_agents() -> WeightMatrix {
    parse_instance_file(&fixture("nine_agents.csv"))
        .unwrap()
        .matrix()
        .unwrap()
        .clone()
}

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn uniform(n: usize, m: usize, max: u64, seed: u64) -> InstanceTuple {
    generate(&Generator::UniformInt { n, max, m }, seed).unwrap()
}

/// Random single matrix with a mix of dense, sparse and unit-vote instances.
fn mixed(n: usize, seed: u64) -> WeightMatrix {
    let g = match seed % 3 {
        0 => Generator::UniformInt { n, max: 10, m: 1 },
        1 => Generator::UniformInt { n, max: 1, m: 1 },
        _ => Generator::UnweightedBernoulli { n, p: 0.15, m: 1 },
    };
    generate(&g, seed).unwrap().into_matrices().remove(0)
}

fn c1_example_optimum() -> Outcome {
    let a = nine_agents();
    let (set, score) = opt_k(&a, 6).map_err(|e| e.to_string())?;
    let mut best = 0.0f64;
    for mask in 0u32..(1 << 9) {
        if mask.count_ones() == 6 {
            let s: AgentSet = (1..=9).filter(|j| mask >> (j - 1) & 1 == 1).collect();
            best = best.max(a.score(&s));
        }
    }
    ensure(score == 27.0 && best == 27.0, || format!("opt {score}, enumeration {best}"))?;
    Ok(format!("opt_6 = {score}, set {set:?}"))
}

fn c2_example_mechanism() -> Outcome {
    let a = nine_agents();
    let ps = build_partition_system(9, 6).map_err(|e| e.to_string())?;
    let r = select_k(&a, 6, &ps).map_err(|e| e.to_string())?;
    ensure(r.score >= 9.0, || format!("score {} below 9", r.score))?;
    let golden: AgentSet = [2, 3, 5, 6, 8].into();
    ensure(r.score == 25.0 && r.selected == golden, || {
        format!("canonical golden changed: {} {:?}", r.score, r.selected)
    })?;

    let text = std::fs::read_to_string(fixture("nine_agents_layout.json")).map_err(|e| e.to_string())?;
    let layout = PartitionSystem::from_document(serde_json::from_str(&text).map_err(|e| e.to_string())?)
        .map_err(|e| e.to_string())?;
    let r2 = select_k(&a, 6, &layout).map_err(|e| e.to_string())?;
    ensure(r2.score == 17.0, || format!("alternate layout scored {}", r2.score))?;
    Ok(format!("canonical score {} (golden), alternate layout score {}", r.score, r2.score))
}

fn c3_tightness() -> Outcome {
    let mut pairs = 0;
    for n in 1..=60 {
        for k in (2..=n).step_by(2) {
            if 2 * n % k != 0 {
                continue;
            }
            let b = 2 * n / k;
            if !(2..=k / 2).contains(&b) {
                continue;
            }
            let r = run_tightness(n, k).map_err(|e| format!("({n}, {k}): {e}"))?;
            ensure(
                r.select_score == 1.0
                    && r.opt_score == b as f64
                    && r.ratio == ScoreRatio::Exact(num_rational::Ratio::new(1, b as u128)),
                || format!("({n}, {k}): select {} opt {} ratio {}", r.select_score, r.opt_score, r.ratio),
            )?;
            pairs += 1;
        }
    }
    ensure(pairs > 0, || "no pairs".into())?;
    Ok(format!("{pairs} (n, k) pairs, ratio exactly 1/b"))
}

fn c4_select_bound() -> Outcome {
    let pairs: Vec<(usize, usize)> = (1..=20)
        .flat_map(|n| (1..=n).map(move |k| (n, k)))
        .filter(|&(n, k)| is_conforming(n, k))
        .collect();
    let mut total = 0;
    for &(n, k) in &pairs {
        let ps = build_partition_system(n, k).map_err(|e| e.to_string())?;
        let alpha = Alpha::new(1, ps.b() as u64);
        let failures: Vec<u64> = (0..1000u64)
            .into_par_iter()
            .filter(|&seed| {
                let a = mixed(n, seed);
                let s = select_k(&a, k, &ps).unwrap().score;
                let (_, opt) = opt_k(&a, k).unwrap();
                !ScoreRatio::new(s, opt).at_least(&alpha)
            })
            .collect();
        ensure(failures.is_empty(), || format!("({n}, {k}) failed on seeds {failures:?}"))?;
        total += 1000;
    }
    Ok(format!("{total} instances over pairs {pairs:?}, 0 failures"))
}

fn c5_gen_select_bound() -> Outcome {
    for (n, k) in [(10, 6), (15, 7)] {
        ensure(selection_params(n, k).is_err(), || format!("({n}, {k}) unexpectedly applicable"))?;
    }
    let pairs = [(13, 8), (14, 8), (10, 8), (11, 9), (16, 9), (17, 10), (19, 11), (25, 11)];
    for &(n, k) in &pairs {
        ensure(!is_conforming(n, k), || format!("({n}, {k}) is conforming"))?;
        let alpha = guarantee_alpha(n, k).map_err(|e| e.to_string())?;
        let failures: Vec<u64> = (0..1000u64)
            .into_par_iter()
            .filter(|&seed| {
                let a = mixed(n, seed);
                let r = gen_select(&a, k).unwrap();
                let (_, opt) = opt_k(&a, k).unwrap();
                r.selected.len() > k
                    || r.selected.iter().any(|&j| j > n)
                    || !ScoreRatio::new(r.score, opt).at_least(&alpha)
            })
            .collect();
        ensure(failures.is_empty(), || format!("({n}, {k}) failed on seeds {failures:?}"))?;
    }
    Ok(format!(
        "1000 instances each on {pairs:?}; (10, 6) and (15, 7) rejected as not applicable"
    ))
}

fn c6_impartiality() -> Outcome {
    let grid = |support| Deviations::Grid {
        values: vec![0.0, 1.0, 2.0],
        support,
    };
    let mut base: Vec<InstanceTuple> = (0..4).map(|s| uniform(9, 1, 2, s)).collect();
    base.push(InstanceTuple::single(nine_agents()));
    base.push(InstanceTuple::single(WeightMatrix::zeros(9)));
    let select = SelectMechanism::canonical(9, 6).map_err(|e| e.to_string())?;
    let r1 = check_impartial(
        &select,
        &ImpartialitySpace {
            instances: base,
            deviations: grid(8),
            budget: None,
        },
    )
    .map_err(|e| e.to_string())?;
    ensure(r1.certified(), || format!("select: {} violations", r1.violation_count))?;

    // (8, 4, 2) admits no partition system with enough partitions per job
    ensure(AssignMechanism::canonical(8, 4).is_err(), || "(8, 4) built".into())?;
    let assign = AssignMechanism::canonical(16, 8).map_err(|e| e.to_string())?;
    let r2 = check_impartial(
        &assign,
        &ImpartialitySpace {
            instances: (0..3).map(|s| uniform(16, 2, 2, 100 + s)).collect(),
            deviations: grid(4),
            budget: None,
        },
    )
    .map_err(|e| e.to_string())?;
    ensure(r2.certified(), || format!("assign: {} violations", r2.violation_count))?;

    let mut triplets = vec![(1, 2, 1.0), (2, 1, 1.0)];
    triplets.extend((4..=9).map(|i| (i, 3, 1.0)));
    let mutual = InstanceTuple::single(WeightMatrix::from_triplets(9, triplets).unwrap());
    let r3 = check_impartial(
        &TopKMechanism { k: 2 },
        &ImpartialitySpace {
            instances: vec![mutual],
            deviations: grid(8),
            budget: None,
        },
    )
    .map_err(|e| e.to_string())?;
    ensure(r3.violation_count >= 1, || "top-k passed".into())?;
    Ok(format!(
        "select(9,6) {} trials, assign(16,8,2) {} trials, 0 violations; top-k {} violations",
        r1.trials, r2.trials, r3.violation_count
    ))
}

fn check_system(n: usize, k: usize) -> Result<(), String> {
    let ps = build_partition_system(n, k).map_err(|e| format!("({n}, {k}): {e}"))?;
    let b = ps.b();
    let sets = ps.candidate_sets();
    ensure(sets.len() == k && sets.iter().all(|s| s.len() == b), || format!("({n}, {k}): sizes"))?;
    let mut count = vec![0; n + 1];
    for s in sets {
        for &j in s {
            count[j] += 1;
        }
    }
    ensure(count[1..].iter().all(|&c| c == 2), || format!("({n}, {k}): agent not in exactly two sets"))?;
    for p in 0..k {
        for q in p + 1..k {
            let common = sets[p].iter().filter(|j| sets[q].contains(j)).count();
            ensure(common <= 1, || format!("({n}, {k}): sets {p} and {q} share {common}"))?;
        }
    }
    let colors = ps.colors();
    for s in sets {
        let used: BTreeSet<usize> = s.iter().map(|&j| colors[j - 1]).collect();
        ensure(used.len() == b && used.iter().all(|&c| (1..=b).contains(&c)), || {
            format!("({n}, {k}): coloring")
        })?;
    }
    ensure(sets[0].iter().copied().eq(1..=b), || format!("({n}, {k}): first set is not 1..=b"))
}

fn c7_partition_properties() -> Outcome {
    let pairs: Vec<(usize, usize)> = (1..=200)
        .flat_map(|n| (1..=n).map(move |k| (n, k)))
        .filter(|&(n, k)| is_conforming(n, k))
        .collect();
    pairs.par_iter().try_for_each(|&(n, k)| check_system(n, k))?;
    Ok(format!("{} conforming pairs", pairs.len()))
}

/// Lexicographically smallest sorted edge list over all relabelings.
fn certificate(edges: &[(usize, usize)]) -> Vec<(usize, usize)> {
    fn permutations(k: usize, perm: &mut Vec<usize>, f: &mut dyn FnMut(&[usize])) {
        if k == perm.len() {
            f(perm);
            return;
        }
        for i in k..perm.len() {
            perm.swap(k, i);
            permutations(k + 1, perm, f);
            perm.swap(k, i);
        }
    }
    let mut best: Option<Vec<(usize, usize)>> = None;
    let mut perm: Vec<usize> = (0..8).collect();
    permutations(0, &mut perm, &mut |p| {
        let mut e: Vec<(usize, usize)> = edges
            .iter()
            .map(|&(u, v)| (p[u].min(p[v]), p[u].max(p[v])))
            .collect();
        e.sort_unstable();
        if best.as_ref().is_none_or(|b| e < *b) {
            best = Some(e);
        }
    });
    best.unwrap()
}

fn c8_graph_shapes() -> Outcome {
    let matching = vec![(0, 1), (2, 3), (4, 5), (6, 7)];
    let cycle: Vec<(usize, usize)> = (0..8).map(|i| (i, (i + 1) % 8)).collect();
    let cube: Vec<(usize, usize)> = (0..8usize)
        .flat_map(|u| (0..3).map(move |d| (u, u ^ (1 << d))))
        .filter(|&(u, v)| u < v)
        .collect();
    let k44: Vec<(usize, usize)> = (0..4).flat_map(|u| (4..8).map(move |v| (u, v))).collect();
    for (b, (name, expected)) in [("4P2", matching), ("C8", cycle), ("cube", cube), ("K44", k44)]
        .into_iter()
        .enumerate()
    {
        let g = build_regular_bipartite_graph(8, b + 1).map_err(|e| e.to_string())?;
        ensure(certificate(g.edges()) == certificate(&expected), || {
            format!("b = {} is not {name}", b + 1)
        })?;
    }
    Ok("b = 1, 2, 3, 4 match 4P2, C8, cube, K44".into())
}

fn c9_assign_bound() -> Outcome {
    ensure(assignment_params(18, 2, 8).is_err(), || "(18, 2, 8) unexpectedly applicable".into())?;

    let ps = build_partition_system(16, 8).map_err(|e| e.to_string())?;
    let alpha = Alpha::new(1, 2 * ps.b() as u64);
    let failures: Vec<u64> = (0..200u64)
        .into_par_iter()
        .filter(|&seed| {
            let t = uniform(16, 2, 10, 1000 + seed);
            let r = assign_k(&t, 8, &ps).unwrap();
            let (_, opt) = opt_assignment(&t, 8, DEFAULT_NODE_BUDGET).unwrap();
            !r.jobs.is_feasible(8) || !ScoreRatio::new(r.score, opt).at_least(&alpha)
        })
        .collect();
    ensure(failures.is_empty(), || format!("(16, 2, 8) failed on seeds {failures:?}"))?;

    let (n, m, k) = (21, 2, 10);
    let alpha_gen = guarantee_alpha_assign(n, m, k).map_err(|e| e.to_string())?;
    let failures: Vec<u64> = (0..200u64)
        .into_par_iter()
        .filter(|&seed| {
            let t = uniform(n, m, 10, 2000 + seed);
            let r = gen_assign(&t, k).unwrap();
            let (_, opt) = opt_assignment(&t, k, DEFAULT_NODE_BUDGET).unwrap();
            !r.jobs.is_feasible(k)
                || r.jobs.jobs().iter().flatten().any(|&j| j > n)
                || !ScoreRatio::new(r.score, opt).at_least(&alpha_gen)
        })
        .collect();
    ensure(failures.is_empty(), || format!("({n}, {m}, {k}) failed on seeds {failures:?}"))?;
    Ok(format!(
        "200 tuples at (16, 2, 8) with alpha {alpha}, 200 at (21, 2, 10) with alpha {alpha_gen}; (18, 2, 8) rejected as not applicable"
    ))
}

fn c10_consistency() -> Outcome {
    let ps = build_partition_system(9, 6).map_err(|e| e.to_string())?;
    let ps2 = build_partition_system(20, 10).map_err(|e| e.to_string())?;
    let bad: Vec<u64> = (0..1000u64)
        .into_par_iter()
        .filter(|&seed| {
            let (n, k, ps) = if seed % 2 == 0 { (9, 6, &ps) } else { (20, 10, &ps2) };
            let a = mixed(n, seed);
            let sel = select_k(&a, k, ps).unwrap().selected;
            let t = InstanceTuple::single(a);
            let asg = assign_k(&t, k, ps).unwrap();
            let (_, opt) = opt_k(t.job(1), k).unwrap();
            let (_, opt_asg) = opt_assignment(&t, k, DEFAULT_NODE_BUDGET).unwrap();
            asg.jobs.job(1) != &sel || opt != opt_asg
        })
        .collect();
    ensure(bad.is_empty(), || format!("mismatch on seeds {bad:?}"))?;
    Ok("1000 instances, m = 1 assignment equals selection and optima agree".into())
}

fn c11_grid() -> Outcome {
    let g = alpha_grid(4..=60, 2..=59, GridMode::Select).map_err(|e| e.to_string())?;
    let cell = |n: usize, k: usize| g.cells.iter().find(|c| c.n == n && c.k == k).unwrap().alpha;
    ensure(cell(9, 6) == Some(Alpha::new(1, 3)), || "(9, 6)".into())?;
    ensure(cell(16, 8) == Some(Alpha::new(1, 4)), || "(16, 8)".into())?;
    ensure(cell(9, 4).is_none(), || "(9, 4)".into())?;
    let mut lower = 0;
    let mut upper = 0;
    for c in &g.cells {
        let kt = c.k - c.k % 2;
        if kt * kt == 4 * c.n && c.k < c.n {
            ensure(c.alpha == Some(Alpha::new(2, c.k as u64)), || format!("({}, {}) not 2/k", c.n, c.k))?;
            lower += 1;
        }
        if c.k % 2 == 0 && 3 * c.k >= 2 * c.n && c.k < c.n {
            // from 9 agents on the whole range meets k² ≥ 4n
            let applicable = c.n >= 9 || c.k * c.k >= 4 * c.n;
            let expected = applicable.then(|| Alpha::new(1, 3));
            ensure(c.alpha == expected, || format!("({}, {}) gives {:?}", c.n, c.k, c.alpha))?;
            upper += 1;
        }
        ensure(c.alpha.is_some() == guarantee_alpha(c.n, c.k).is_ok(), || "presence".into())?;
    }
    for k in (2..=59).step_by(2) {
        let col: Vec<Alpha> = g.cells.iter().filter(|c| c.k == k).filter_map(|c| c.alpha).collect();
        ensure(col.windows(2).all(|w| w[1] <= w[0]), || format!("k = {k} not monotone in n"))?;
    }
    Ok(format!("{lower} cells at 2/k, {upper} cells at 1/3, monotone in n"))
}

fn main() {
    type Criterion = (&'static str, &'static str, u64, fn() -> Outcome);
    let criteria: [Criterion; 11] = [
        ("1", "optimum of the 9-agent example", 1, c1_example_optimum),
        ("2", "selection on the 9-agent example", 1, c2_example_mechanism),
        ("3", "worst-case instances reach 1/b", 5, c3_tightness),
        ("4", "selection bound on conforming sizes", 30, c4_select_bound),
        ("5", "padded selection bound", 60, c5_gen_select_bound),
        ("6", "impartiality certification", 300, c6_impartiality),
        ("7", "partition system properties", 10, c7_partition_properties),
        ("8", "graph family shapes", 1, c8_graph_shapes),
        ("9", "assignment bounds", 300, c9_assign_bound),
        ("10", "single-job consistency", 60, c10_consistency),
        ("11", "guarantee grid", 5, c11_grid),
    ];
    let mut failed = Vec::new();
    for (id, name, limit, f) in criteria {
        let start = Instant::now();
        let result = std::panic::catch_unwind(f).unwrap_or_else(|_| Err("panicked".into()));
        let elapsed = start.elapsed();
        let result = result.and_then(|detail| {
            if elapsed > Duration::from_secs(limit) {
                Err(format!("{detail}; exceeded {limit} s"))
            } else {
                Ok(detail)
            }
        });
        match result {
            Ok(detail) => println!("PASS criterion {id:>2}: {name}: {detail} ({:.2} s)", elapsed.as_secs_f64()),
            Err(why) => {
                println!("FAIL criterion {id:>2}: {name}: {why} ({:.2} s)", elapsed.as_secs_f64());
                failed.push(id);
            }
        }
    }
    if !failed.is_empty() {
        eprintln!("failed criteria: {failed:?}");
        std::process::exit(1);
    }
    println!("all {} criteria passed", criteria.len());
}
