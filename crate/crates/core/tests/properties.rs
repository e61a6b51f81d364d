use proptest::prelude::*;
use proptest::sample::select;

use impartial::io::{generate, Generator};
use impartial::oracle::{opt_k, tightness_instance};
use impartial::{
    assign_k, build_partition_system, gen_assign, gen_select, guarantee_alpha, modified_scores,
    select_k, Alpha, InstanceTuple, PartitionSystem, ScoreRatio, WeightMatrix,
};

const CONFORMING: &[(usize, usize)] = &[(9, 6), (12, 8), (16, 8), (15, 10), (20, 10), (8, 8), (25, 10)];

fn matrix(n: usize, max: u64, seed: u64) -> WeightMatrix {
    generate(&Generator::UniformInt { n, max, m: 1 }, seed)
        .unwrap()
        .into_matrices()
        .remove(0)
}

fn tuple(n: usize, m: usize, max: u64, seed: u64) -> InstanceTuple {
    generate(&Generator::UniformInt { n, max, m }, seed).unwrap()
}

/// Sparse matrices make ties and empty partitions common.
fn sparse(n: usize, seed: u64) -> WeightMatrix {
    generate(&Generator::UnweightedBernoulli { n, p: 0.1, m: 1 }, seed)
        .unwrap()
        .into_matrices()
        .remove(0)
}

fn instance(n: usize, seed: u64, dense: bool) -> WeightMatrix {
    if dense {
        matrix(n, 6, seed)
    } else {
        sparse(n, seed)
    }
}

fn winner_score(a: &WeightMatrix, ps: &PartitionSystem, p: usize, w: usize) -> f64 {
    modified_scores(a, ps).unwrap().get(ps, p, w)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn modified_scores_split_the_full_score(
        (n, k) in select(CONFORMING), seed in any::<u64>(), dense in any::<bool>()
    ) {
        let ps = build_partition_system(n, k).unwrap();
        let a = instance(n, seed, dense);
        let t = modified_scores(&a, &ps).unwrap();
        for j in 1..=n {
            prop_assert_eq!(t.left(j) + t.right(j), a.indegree(j));
        }
    }

    #[test]
    fn winners_bound_selection_from_below(
        (n, k) in select(CONFORMING), seed in any::<u64>(), dense in any::<bool>()
    ) {
        let ps = build_partition_system(n, k).unwrap();
        let a = instance(n, seed, dense);
        let r = select_k(&a, k, &ps).unwrap();
        let t = modified_scores(&a, &ps).unwrap();
        let sum: f64 = r.winners.iter().enumerate().map(|(p, &w)| t.get(&ps, p + 1, w)).sum();
        prop_assert!(r.score >= sum);
        // each agent's two candidacies are beaten or matched by the winners
        for j in 1..=n {
            let (l, rr) = ps.slots(j);
            let wl = winner_score(&a, &ps, l, r.winners[l - 1]);
            let wr = winner_score(&a, &ps, rr, r.winners[rr - 1]);
            prop_assert!(wl + wr >= a.indegree(j));
        }
    }

    #[test]
    fn selection_meets_one_over_b(
        (n, k) in select(CONFORMING), seed in any::<u64>(), dense in any::<bool>()
    ) {
        let ps = build_partition_system(n, k).unwrap();
        let a = instance(n, seed, dense);
        let r = select_k(&a, k, &ps).unwrap();
        let (_, opt) = opt_k(&a, k).unwrap();
        prop_assert!(r.selected.len() <= k);
        prop_assert!(r.selected.iter().all(|&j| (1..=n).contains(&j)));
        prop_assert!(ScoreRatio::new(r.score, opt).at_least(&Alpha::new(1, ps.b() as u64)));
    }

    #[test]
    fn scaling_keeps_winners(
        (n, k) in select(CONFORMING), seed in any::<u64>(), factor in select(vec![0.5, 2.0, 3.0, 1024.0])
    ) {
        let ps = build_partition_system(n, k).unwrap();
        let a = matrix(n, 4, seed);
        let r = select_k(&a, k, &ps).unwrap();
        let s = select_k(&a.scaled(factor).unwrap(), k, &ps).unwrap();
        prop_assert_eq!(r.winners, s.winners);
        prop_assert_eq!(r.selected, s.selected);
    }

    #[test]
    fn own_row_never_changes_own_membership(
        (n, k) in select(CONFORMING),
        seed in any::<u64>(),
        agent_pick in any::<prop::sample::Index>(),
        row in prop::collection::vec(0u8..8, 25),
    ) {
        let ps = build_partition_system(n, k).unwrap();
        let a = matrix(n, 5, seed);
        let i = agent_pick.index(n) + 1;
        let mut b = a.clone();
        let new_row: Vec<f64> = (1..=n).map(|j| if j == i { 0.0 } else { row[j - 1] as f64 }).collect();
        b.set_row(i, &new_row).unwrap();
        let before = select_k(&a, k, &ps).unwrap().selected.contains(&i);
        let after = select_k(&b, k, &ps).unwrap().selected.contains(&i);
        prop_assert_eq!(before, after);
    }

    #[test]
    fn padded_selection_meets_its_guarantee(
        (n, k) in select(vec![(13, 8), (14, 8), (10, 8), (16, 9), (17, 10), (22, 13), (30, 12)]),
        seed in any::<u64>(),
        dense in any::<bool>(),
    ) {
        let a = instance(n, seed, dense);
        let r = gen_select(&a, k).unwrap();
        let (_, opt) = opt_k(&a, k).unwrap();
        prop_assert!(r.selected.len() <= k);
        prop_assert!(r.selected.iter().all(|&j| j <= n));
        prop_assert!(ScoreRatio::new(r.score, opt).at_least(&guarantee_alpha(n, k).unwrap()));
    }

    #[test]
    fn chosen_tuples_dominate_single_candidates(
        (n, k, m) in select(vec![(16, 8, 2), (20, 10, 2), (36, 12, 3), (48, 16, 3), (64, 16, 4)]),
        seed in any::<u64>(),
    ) {
        let ps = build_partition_system(n, k).unwrap();
        let t = tuple(n, m, 5, seed);
        let r = assign_k(&t, k, &ps).unwrap();
        let tables: Vec<_> = t.matrices().iter().map(|a| modified_scores(a, &ps).unwrap()).collect();
        let mut half_bound = 0.0;
        for p in 1..=k {
            let chosen = &r.partial[p - 1];
            let value: f64 = chosen.iter().enumerate().map(|(l, &x)| tables[l].get(&ps, p, x)).sum();
            for &j in ps.candidates(p) {
                for table in &tables {
                    prop_assert!(value >= table.get(&ps, p, j));
                }
            }
            half_bound += value;
        }
        prop_assert!(r.jobs.is_feasible(k));
        prop_assert!(2.0 * r.score >= half_bound);
    }

    #[test]
    fn one_job_assignment_is_selection(
        (n, k) in select(CONFORMING), seed in any::<u64>(), dense in any::<bool>()
    ) {
        let ps = build_partition_system(n, k).unwrap();
        let a = instance(n, seed, dense);
        let sel = select_k(&a, k, &ps).unwrap();
        let asg = assign_k(&InstanceTuple::single(a), k, &ps).unwrap();
        prop_assert_eq!(asg.jobs.job(1), &sel.selected);
        prop_assert_eq!(asg.score, sel.score);
    }

    #[test]
    fn padded_assignment_strips_dummies(
        (n, m, k) in select(vec![(21, 2, 10), (22, 2, 10), (30, 2, 12)]),
        seed in any::<u64>(),
    ) {
        let t = tuple(n, m, 5, seed);
        let r = gen_assign(&t, k).unwrap();
        prop_assert!(r.jobs.is_feasible(k));
        prop_assert!(r.jobs.jobs().iter().flatten().all(|&j| j <= n));
    }
}

#[test]
fn worst_case_ratio_is_exact_on_every_small_pair() {
    for &(n, k) in CONFORMING {
        let ps = build_partition_system(n, k).unwrap();
        let a = tightness_instance(n, k, &ps).unwrap();
        let r = select_k(&a, k, &ps).unwrap();
        let (_, opt) = opt_k(&a, k).unwrap();
        assert!(ScoreRatio::new(r.score, opt).equals(&Alpha::new(1, ps.b() as u64)), "({n}, {k})");
    }
}
