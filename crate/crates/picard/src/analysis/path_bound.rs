//! Entourage-weight bookkeeping along G̃-paths.
//!
//! For a basic entourage V, a pair at gauge λ sits inside λV only for
//! λ strictly above the infimum, so each hop gets a strict inflation
//! (1 + slack) and zero-distance hops get the floor `tiny`. Summing
//! the inflated weights over a path and scaling by αⁿ gives the radius
//! that the n-th images of the endpoints are expected to reach.

use crate::graph::DirectedGraph;
use crate::map::SelfMap;
use crate::rat::Rat;
use crate::space::{BasicEntourage, PseudometricFamily};

/// Inflated weight sum `r` along `path`, and whether
/// (Tⁿx₀, Tⁿx_N) ∈ (αⁿ r)·V actually holds.
#[allow(clippy::too_many_arguments)] // the quantifier list of the statement being checked
pub fn path_weight_bound(
    map: &SelfMap,
    graph: &DirectedGraph,
    family: &PseudometricFamily,
    v: &BasicEntourage,
    path: &[usize],
    alpha: &Rat,
    n: usize,
    slack: &Rat,
    tiny: &Rat,
) -> Result<(Rat, bool), String> {
    if !(alpha.is_positive() && *alpha < 1) {
        return Err(format!("alpha must lie strictly inside (0, 1); got {alpha}"));
    }
    if !tiny.is_positive() {
        return Err(format!("the weight floor must be positive; got {tiny}"));
    }
    if slack.is_negative() {
        return Err(format!("the strict-inflation slack cannot be negative; got {slack}"));
    }
    let size = graph
        .n()
        .ok_or_else(|| "path weights are defined over finite graphs".to_string())?;
    if path.is_empty() {
        return Err("the path must contain at least its start vertex".to_string());
    }
    if let Some(&bad) = path.iter().find(|&&x| x >= size) {
        return Err(format!("path vertex {bad} out of range for |X| = {size}"));
    }
    for pair in path.windows(2) {
        let (a, b) = (pair[0], pair[1]);
        if !(graph.has_edge_idx(a, b) || graph.has_edge_idx(b, a)) {
            return Err(format!("({a}, {b}) is not an edge of G̃: the path breaks there"));
        }
    }

    let inflation = &Rat::one() + slack;
    let mut r = if path.len() == 1 { tiny.clone() } else { Rat::zero() };
    for pair in path.windows(2) {
        let infimum = v.lambda_infimum_idx(family, pair[0], pair[1]);
        let lambda = &infimum.max(tiny.clone()) * &inflation;
        r = &r + &lambda;
    }

    let mut radius = r.clone();
    for _ in 0..n {
        radius = &radius * alpha;
    }
    let mut head = path[0];
    let mut tail = *path.last().expect("path is nonempty");
    for _ in 0..n {
        head = map.eval_idx(head);
        tail = map.eval_idx(tail);
    }
    let member = v.scale(&radius).contains_idx(family, head, tail);
    Ok((r, member))
}

/// Total weight of the discarded geometric tail: Σ_{k≥1} αᵏ r.
pub fn geometric_tail_bound(alpha: &Rat, r: &Rat) -> Rat {
    assert!(
        alpha.is_positive() && *alpha < 1,
        "the geometric tail converges only for alpha in (0, 1)"
    );
    &(alpha * r) / &(&Rat::one() - alpha)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rat::rat;
    use crate::space::Pseudometric;

    fn chain3() -> (PseudometricFamily, DirectedGraph, SelfMap) {
        let rows = vec![
            vec![rat("0"), rat("1"), rat("2")],
            vec![rat("1"), rat("0"), rat("1")],
            vec![rat("2"), rat("1"), rat("0")],
        ];
        let family = PseudometricFamily::new(vec![Pseudometric::table("d", rows)]);
        let (graph, _) = DirectedGraph::finite(3, [(0, 1), (1, 2)]);
        let collapse = SelfMap::Table { image: vec![0, 0, 0] };
        (family, graph, collapse)
    }

    #[test]
    fn chain_weights_are_exact_and_contain_the_images() {
        let (family, graph, map) = chain3();
        let v = BasicEntourage::single(0, rat("1"));
        let slack = rat("1/1000");
        let tiny = rat("1/1000000000");
        for n in 0..=5 {
            let (r, member) = path_weight_bound(
                &map, &graph, &family, &v, &[0, 1, 2], &rat("1/2"), n, &slack, &tiny,
            )
            .unwrap();
            // two hops of infimum 1, each inflated by 1 + 1/1000
            assert_eq!(r, rat("1001/500"));
            assert!(member, "containment must hold at n = {n}");
        }
    }

    #[test]
    fn strictness_is_what_the_slack_buys() {
        let (family, graph, map) = chain3();
        let v = BasicEntourage::single(0, rat("1"));
        let tiny = rat("1/1000000000");
        // slack 0 leaves lambda at the unattained infimum: at n = 0 the
        // pair (0, 2) sits exactly on the boundary of rV and is not inside
        let (r, member) = path_weight_bound(
            &map, &graph, &family, &v, &[0, 1, 2], &rat("1/2"), 0, &Rat::zero(), &tiny,
        )
        .unwrap();
        assert_eq!(r, rat("2"));
        assert!(!member);
        // any positive slack restores strict containment
        let (_, member) = path_weight_bound(
            &map, &graph, &family, &v, &[0, 1, 2], &rat("1/2"), 0, &rat("1/1000"), &tiny,
        )
        .unwrap();
        assert!(member);
    }

    #[test]
    fn single_vertex_paths_cost_the_floor() {
        let (family, graph, map) = chain3();
        let v = BasicEntourage::single(0, rat("1"));
        let tiny = rat("1/1000000000");
        let (r, member) = path_weight_bound(
            &map, &graph, &family, &v, &[1], &rat("1/2"), 3, &rat("1/1000"), &tiny,
        )
        .unwrap();
        assert_eq!(r, tiny);
        assert!(member);
    }

    #[test]
    fn preconditions_are_enforced() {
        let (family, graph, map) = chain3();
        let v = BasicEntourage::single(0, rat("1"));
        let slack = rat("1/1000");
        let tiny = rat("1/1000000000");
        let run = |path: &[usize], alpha: &str, slack: &Rat, tiny: &Rat| {
            path_weight_bound(&map, &graph, &family, &v, path, &rat(alpha), 1, slack, tiny)
        };
        assert!(run(&[0, 1], "1", &slack, &tiny).unwrap_err().contains("(0, 1)"));
        assert!(run(&[0, 1], "0", &slack, &tiny).is_err());
        assert!(run(&[], "1/2", &slack, &tiny).is_err());
        assert!(run(&[0, 7], "1/2", &slack, &tiny).unwrap_err().contains("out of range"));
        // 0 - 2 is not an edge in the chain
        assert!(run(&[0, 2], "1/2", &slack, &tiny).unwrap_err().contains("not an edge"));
        assert!(run(&[0, 1], "1/2", &slack, &Rat::zero()).is_err());
        assert!(run(&[0, 1], "1/2", &rat("-1/2"), &tiny).is_err());
        // reversed edges still belong to the symmetrization
        assert!(run(&[2, 1, 0], "1/2", &slack, &tiny).is_ok());
    }

    #[test]
    fn tail_bound_matches_the_partial_sums() {
        let bound = geometric_tail_bound(&rat("1/3"), &rat("2"));
        assert_eq!(bound, Rat::one());
        let mut sum = Rat::zero();
        let mut term = rat("2");
        for _ in 0..40 {
            term = &term * &rat("1/3");
            sum = &sum + &term;
        }
        assert!(sum < bound);
        assert!((&bound - &sum).to_f64() < 1e-9);
    }

    #[test]
    #[should_panic(expected = "alpha in (0, 1)")]
    fn tail_bound_rejects_alpha_one() {
        geometric_tail_bound(&Rat::one(), &rat("2"));
    }
}
