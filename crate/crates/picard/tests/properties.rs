//! Randomized invariants. Each property is cheap enough to run at the
//! default case count; anything slow (full enumeration over |X|^|X|
//! maps) is pinned to small carriers.

use picard::analysis::classify::build_disconnection_counterexample;
use picard::analysis::contraction::{check_contraction, AlphaStar};
use picard::analysis::path_bound::geometric_tail_bound;
use picard::graph::DirectedGraph;
use picard::interval::RealSet;
use picard::map::{OrbitStatus, SelfMap, StopRule};
use picard::oracle::{bundled_instance, enumerate_self_maps, FiniteInstance};
use picard::rat::{rat, Rat};
use proptest::prelude::*;

fn three_maps() -> Vec<SelfMap> {
    enumerate_self_maps(3).unwrap().collect()
}

fn rat_pow(base: &Rat, n: usize) -> Rat {
    let mut out = rat("1");
    for _ in 0..n {
        out = &out * base;
    }
    out
}

proptest! {
    #[test]
    fn rat_roundtrips_through_display(p in -1_000_000i64..1_000_000, q in 1u32..1_000_000) {
        let r = rat(&format!("{p}/{q}"));
        let back: Rat = r.to_string().parse().unwrap();
        prop_assert_eq!(back, r);
    }

    #[test]
    fn rat_decimals_equal_their_fractions(p in -9_999_999i64..9_999_999, places in 1u32..7) {
        let scale = 10i64.pow(places);
        let decimal = format!("{}{}.{:0width$}", if p < 0 { "-" } else { "" },
            p.abs() / scale, p.abs() % scale, width = places as usize);
        prop_assert_eq!(rat(&decimal), rat(&format!("{p}/{scale}")));
    }

    #[test]
    fn enumeration_is_total_distinct_and_repeatable(n in 1usize..5) {
        let first: Vec<SelfMap> = enumerate_self_maps(n).unwrap().collect();
        let second: Vec<SelfMap> = enumerate_self_maps(n).unwrap().collect();
        prop_assert_eq!(&first, &second);
        prop_assert_eq!(first.len(), n.pow(n as u32));
        let images: std::collections::BTreeSet<Vec<usize>> = first
            .iter()
            .map(|m| match m {
                SelfMap::Table { image } => image.clone(),
                _ => unreachable!(),
            })
            .collect();
        prop_assert_eq!(images.len(), first.len());
    }

    #[test]
    fn orbit_idx_terminates_at_a_revisit(k in 0usize..256, start in 0usize..4, budget in 5usize..5000) {
        let maps: Vec<SelfMap> = enumerate_self_maps(4).unwrap().collect();
        let orbit = maps[k].orbit_idx(start, budget);
        // a self-map of 4 points revisits within 5 steps, whatever the budget
        prop_assert!(orbit.values.len() <= 5);
        prop_assert!(orbit.values.iter().all(|&v| v < 4));
        prop_assert!(matches!(orbit.status, OrbitStatus::Periodic(c) if c >= 1));
        let replay = maps[k].orbit_idx(start, budget);
        prop_assert_eq!(replay.values, orbit.values);
    }

    #[test]
    fn alpha_star_is_the_least_admissible_constant(k in 0usize..27, j in 1u32..50) {
        let inst = bundled_instance("chain-3-finite").unwrap();
        let maps = three_maps();
        let v = check_contraction(&maps[k], &inst.graph, &inst.family, &inst.carrier);
        if v.is_contraction {
            if let AlphaStar::Value(a) = &v.alpha_star {
                if a.is_positive() {
                    prop_assert!(v.admissible_alpha(a));
                    let below = a * &rat(&format!("{j}/{}", j + 1));
                    prop_assert!(!v.admissible_alpha(&below));
                } else {
                    prop_assert!(!v.admissible_alpha(a));
                    prop_assert!(v.admissible_alpha(&rat("1/2")));
                }
                let mid = &(a + &rat("1")) / &rat("2");
                prop_assert!(v.admissible_alpha(&mid));
            }
        } else {
            prop_assert!(!v.admissible_alpha(&rat("1/2")));
        }
    }

    #[test]
    fn disconnected_graphs_always_yield_a_two_fixed_point_contraction(mask in 0u16..4096) {
        // the 12 ordered off-diagonal pairs on four points, loops added by the builder
        let mut edges = Vec::new();
        let mut bit = 0;
        for i in 0..4usize {
            for j in 0..4usize {
                if i != j {
                    if mask & (1 << bit) != 0 {
                        edges.push((i, j));
                    }
                    bit += 1;
                }
            }
        }
        let (graph, _) = DirectedGraph::finite(4, edges);
        let inst = FiniteInstance::from_coords(
            "random-mask",
            &[("a", rat("0")), ("b", rat("1")), ("c", rat("2")), ("d", rat("3"))],
            graph,
        );
        if inst.graph.is_weakly_connected_idx() {
            prop_assert!(build_disconnection_counterexample(&inst.graph, 0, 1).is_err());
        } else {
            let comp0 = inst.graph.component_idx(0);
            let y0 = (0..4).find(|v| !comp0.contains(v)).unwrap();
            let map = build_disconnection_counterexample(&inst.graph, 0, y0).unwrap();
            let v = check_contraction(&map, &inst.graph, &inst.family, &inst.carrier);
            prop_assert!(v.is_contraction);
            prop_assert_eq!(v.alpha_star.least_threshold(), Some(Rat::zero()));
            prop_assert_eq!(map.fixed_point_indices(), vec![0, y0]);
        }
    }

    #[test]
    fn tail_bound_dominates_every_partial_sum(a in 1u32..8, p in 0i64..41, q in 1i64..9, n in 1usize..50) {
        let alpha = rat(&format!("{a}/8"));
        let r = rat(&format!("{p}/{q}"));
        let tail = geometric_tail_bound(&alpha, &r);
        let mut partial = Rat::zero();
        let mut term = &alpha * &r;
        for _ in 0..n {
            partial = &partial + &term;
            term = &term * &alpha;
        }
        prop_assert!(partial <= tail);
        // the remainder after n terms is exactly alpha^n of the whole tail
        prop_assert_eq!(&tail - &partial, &tail * &rat_pow(&alpha, n));
    }

    #[test]
    fn worked_example_basin_of_the_middle_fixed_point(start in 0.001f64..4.999) {
        let map = picard::map::three_branch_example();
        let orbit = map.orbit_f64(start, 10_000, &StopRule::default());
        prop_assert_eq!(orbit.status, OrbitStatus::Converged);
        let last = *orbit.values.last().unwrap();
        prop_assert!((last - 2.5).abs() < 1e-6, "last = {last}");
    }

    #[test]
    fn worked_example_diverges_outside_the_basin(above in 5.001f64..1e6, below in -1e6f64..-0.001) {
        let map = picard::map::three_branch_example();
        for start in [above, below] {
            let orbit = map.orbit_f64(start, 10_000, &StopRule::default());
            prop_assert_eq!(orbit.status, OrbitStatus::Diverged);
        }
    }

    #[test]
    fn real_set_union_laws(points in proptest::collection::vec(-20i64..20, 1..5), extra in -20i64..20) {
        let mk = |vals: &[i64]| {
            vals.iter().fold(RealSet::empty(), |acc, v| {
                acc.union(&RealSet::point(Rat::int(*v)))
            })
        };
        let s = mk(&points);
        let t = RealSet::point(Rat::int(extra));
        prop_assert_eq!(s.union(&t), t.union(&s));
        prop_assert_eq!(s.union(&s.clone()), s.clone());
        // removing a fresh point is a no-op; removing then re-adding restores
        if !points.contains(&extra) {
            prop_assert_eq!(s.remove_point(&Rat::int(extra)), s.clone());
        }
        prop_assert_eq!(s.remove_point(&Rat::int(points[0])).union(&RealSet::point(Rat::int(points[0]))), s);
    }
}
