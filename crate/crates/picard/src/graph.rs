//! Directed graphs over the carrier, with the loops E(G) ⊇ Δ(X) the
//! whole theory assumes.
//!
//! Finite carriers store explicit edge sets. Real-line carriers describe
//! edges by a predicate: complete, diagonal-only, or an order relation —
//! either the global ≤ or an interval order with excluded points (x ⪯ y
//! iff x = y, or both points lie in the region and x ≤ y). That last
//! class is what makes components like [1,4] \ {5/2} expressible
//! exactly.

use crate::interval::RealSet;
use crate::map::{affine_fixed_set, quad_fixed_candidates, PieceRule, SelfMap};
use crate::rat::Rat;
use serde::{Deserialize, Serialize};
use std::collections::{BTreeSet, VecDeque};

/// A partial order on the real line usable as an edge predicate.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub enum RealOrder {
    /// x ⪯ y iff x ≤ y everywhere.
    GlobalLeq,
    /// x ⪯ y iff x = y, or x and y both lie in `region` and x ≤ y.
    IntervalOrder { region: RealSet },
}

impl RealOrder {
    pub fn leq_rat(&self, x: &Rat, y: &Rat) -> bool {
        match self {
            RealOrder::GlobalLeq => x <= y,
            RealOrder::IntervalOrder { region } => {
                x == y || (region.contains(x) && region.contains(y) && x <= y)
            }
        }
    }

    pub fn leq_f64(&self, x: f64, y: f64) -> bool {
        match self {
            RealOrder::GlobalLeq => x <= y,
            RealOrder::IntervalOrder { region } => {
                x == y || (region.contains_f64(x) && region.contains_f64(y) && x <= y)
            }
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub enum RealGraphKind {
    /// Every pair is an edge.
    Complete,
    /// Loops only.
    Diagonal,
    /// (x, y) ∈ E iff x ⪯ y (or y ⪯ x when `flipped`, giving G⁻¹).
    OrderLeq { order: RealOrder, flipped: bool },
    /// (x, y) ∈ E iff x ⪯ y or y ⪯ x — the undirected closure of the
    /// order graph.
    OrderComparable { order: RealOrder },
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub enum DirectedGraph {
    Finite { n: usize, edges: BTreeSet<(usize, usize)> },
    Real { kind: RealGraphKind },
}

impl DirectedGraph {
    /// Builds a finite graph, inserting any missing loops. Returns the
    /// number of loops added so the loader can mention it.
    pub fn finite(n: usize, edges: impl IntoIterator<Item = (usize, usize)>) -> (Self, usize) {
        let mut set: BTreeSet<(usize, usize)> = edges.into_iter().collect();
        let mut added = 0;
        for i in 0..n {
            if set.insert((i, i)) {
                added += 1;
            }
        }
        (DirectedGraph::Finite { n, edges: set }, added)
    }

    pub fn finite_complete(n: usize) -> Self {
        let mut edges = BTreeSet::new();
        for i in 0..n {
            for j in 0..n {
                edges.insert((i, j));
            }
        }
        DirectedGraph::Finite { n, edges }
    }

    pub fn finite_loops_only(n: usize) -> Self {
        DirectedGraph::finite(n, []).0
    }

    pub fn real(kind: RealGraphKind) -> Self {
        DirectedGraph::Real { kind }
    }

    pub fn n(&self) -> Option<usize> {
        match self {
            DirectedGraph::Finite { n, .. } => Some(*n),
            DirectedGraph::Real { .. } => None,
        }
    }

    pub fn real_kind(&self) -> Option<&RealGraphKind> {
        match self {
            DirectedGraph::Real { kind } => Some(kind),
            DirectedGraph::Finite { .. } => None,
        }
    }

    pub fn edges(&self) -> &BTreeSet<(usize, usize)> {
        match self {
            DirectedGraph::Finite { edges, .. } => edges,
            DirectedGraph::Real { .. } => panic!("explicit edges queried on a predicate graph"),
        }
    }

    pub fn validate(&self, domain: Option<&RealSet>) -> Vec<String> {
        let mut errs = Vec::new();
        match self {
            DirectedGraph::Finite { n, edges } => {
                for &(i, j) in edges {
                    if i >= *n || j >= *n {
                        errs.push(format!("graph: edge ({i},{j}) points outside the carrier"));
                    }
                }
            }
            DirectedGraph::Real { kind } => {
                let region = match kind {
                    RealGraphKind::OrderLeq { order: RealOrder::IntervalOrder { region }, .. }
                    | RealGraphKind::OrderComparable {
                        order: RealOrder::IntervalOrder { region },
                    } => Some(region),
                    _ => None,
                };
                if let (Some(region), Some(domain)) = (region, domain) {
                    if !region.is_subset_of(domain) {
                        errs.push(format!(
                            "graph: order region {} leaves the domain {}",
                            region, domain
                        ));
                    }
                }
            }
        }
        errs
    }

    pub fn has_edge_idx(&self, i: usize, j: usize) -> bool {
        match self {
            DirectedGraph::Finite { edges, .. } => edges.contains(&(i, j)),
            DirectedGraph::Real { .. } => panic!("index edge queried on a predicate graph"),
        }
    }

    pub fn has_edge_rat(&self, x: &Rat, y: &Rat) -> bool {
        match self {
            DirectedGraph::Finite { .. } => panic!("real edge queried on a finite graph"),
            DirectedGraph::Real { kind } => match kind {
                RealGraphKind::Complete => true,
                RealGraphKind::Diagonal => x == y,
                RealGraphKind::OrderLeq { order, flipped: false } => order.leq_rat(x, y),
                RealGraphKind::OrderLeq { order, flipped: true } => order.leq_rat(y, x),
                RealGraphKind::OrderComparable { order } => {
                    order.leq_rat(x, y) || order.leq_rat(y, x)
                }
            },
        }
    }

    pub fn has_edge_f64(&self, x: f64, y: f64) -> bool {
        match self {
            DirectedGraph::Finite { .. } => panic!("real edge queried on a finite graph"),
            DirectedGraph::Real { kind } => match kind {
                RealGraphKind::Complete => true,
                RealGraphKind::Diagonal => x == y,
                RealGraphKind::OrderLeq { order, flipped: false } => order.leq_f64(x, y),
                RealGraphKind::OrderLeq { order, flipped: true } => order.leq_f64(y, x),
                RealGraphKind::OrderComparable { order } => {
                    order.leq_f64(x, y) || order.leq_f64(y, x)
                }
            },
        }
    }

    /// G⁻¹: every edge reversed.
    pub fn reverse(&self) -> DirectedGraph {
        match self {
            DirectedGraph::Finite { n, edges } => DirectedGraph::Finite {
                n: *n,
                edges: edges.iter().map(|&(i, j)| (j, i)).collect(),
            },
            DirectedGraph::Real { kind } => DirectedGraph::Real {
                kind: match kind {
                    RealGraphKind::Complete => RealGraphKind::Complete,
                    RealGraphKind::Diagonal => RealGraphKind::Diagonal,
                    RealGraphKind::OrderLeq { order, flipped } => RealGraphKind::OrderLeq {
                        order: order.clone(),
                        flipped: !flipped,
                    },
                    RealGraphKind::OrderComparable { order } => {
                        RealGraphKind::OrderComparable { order: order.clone() }
                    }
                },
            },
        }
    }

    /// G̃: edges in both directions.
    pub fn undirected_closure(&self) -> DirectedGraph {
        match self {
            DirectedGraph::Finite { n, edges } => {
                let mut sym = edges.clone();
                sym.extend(edges.iter().map(|&(i, j)| (j, i)));
                DirectedGraph::Finite { n: *n, edges: sym }
            }
            DirectedGraph::Real { kind } => DirectedGraph::Real {
                kind: match kind {
                    RealGraphKind::OrderLeq { order, .. } => {
                        RealGraphKind::OrderComparable { order: order.clone() }
                    }
                    other => other.clone(),
                },
            },
        }
    }

    pub fn is_symmetric(&self) -> bool {
        match self {
            DirectedGraph::Finite { edges, .. } => {
                edges.iter().all(|&(i, j)| edges.contains(&(j, i)))
            }
            DirectedGraph::Real { kind } => !matches!(kind, RealGraphKind::OrderLeq { .. }),
        }
    }

    /// The weak component [x]_G̃, ascending. Edge direction is ignored,
    /// so this works on G directly as well as on its closure.
    #[allow(clippy::needless_range_loop)] // j is a vertex id; seen[j] is mutated mid-loop
    pub fn component_idx(&self, x: usize) -> Vec<usize> {
        let (n, edges) = match self {
            DirectedGraph::Finite { n, edges } => (*n, edges),
            DirectedGraph::Real { .. } => panic!("index component queried on a predicate graph"),
        };
        let mut seen = vec![false; n];
        seen[x] = true;
        let mut queue = VecDeque::from([x]);
        while let Some(i) = queue.pop_front() {
            for j in 0..n {
                if !seen[j] && (edges.contains(&(i, j)) || edges.contains(&(j, i))) {
                    seen[j] = true;
                    queue.push_back(j);
                }
            }
        }
        (0..n).filter(|&i| seen[i]).collect()
    }

    /// All weak components, ordered by least member.
    pub fn components(&self) -> Vec<Vec<usize>> {
        let n = self.n().expect("components by index need a finite graph");
        let mut assigned = vec![false; n];
        let mut out = Vec::new();
        for i in 0..n {
            if !assigned[i] {
                let comp = self.component_idx(i);
                for &j in &comp {
                    assigned[j] = true;
                }
                out.push(comp);
            }
        }
        out
    }

    pub fn is_weakly_connected_idx(&self) -> bool {
        let n = self.n().expect("index connectivity needs a finite graph");
        self.component_idx(0).len() == n
    }

    /// The weak component of a real point, as an exact set. The
    /// predicate classes all have closed forms: an order region is one
    /// component (any two of its points are comparable), everything
    /// outside it is isolated.
    pub fn component_real(&self, domain: &RealSet, x: &Rat) -> RealSet {
        let kind = self.real_kind().expect("real component queried on a finite graph");
        match kind {
            RealGraphKind::Complete => domain.clone(),
            RealGraphKind::Diagonal => RealSet::point(x.clone()),
            RealGraphKind::OrderLeq { order, .. } | RealGraphKind::OrderComparable { order } => {
                match order {
                    RealOrder::GlobalLeq => domain.clone(),
                    RealOrder::IntervalOrder { region } => {
                        if region.contains(x) {
                            region.clone()
                        } else {
                            RealSet::point(x.clone())
                        }
                    }
                }
            }
        }
    }

    pub fn is_weakly_connected_real(&self, domain: &RealSet) -> bool {
        let kind = self.real_kind().expect("real connectivity queried on a finite graph");
        match kind {
            RealGraphKind::Complete => true,
            RealGraphKind::Diagonal => {
                domain.intervals().len() == 1 && domain.intervals()[0].as_point().is_some()
            }
            RealGraphKind::OrderLeq { order, .. } | RealGraphKind::OrderComparable { order } => {
                match order {
                    RealOrder::GlobalLeq => true,
                    RealOrder::IntervalOrder { region } => domain.is_subset_of(region),
                }
            }
        }
    }

    /// Shortest path from x to y in G̃ by edge count; BFS visits
    /// neighbors in ascending index order, so ties break the same way
    /// every run. None iff y is outside [x]_G̃.
    #[allow(clippy::needless_range_loop)] // j is a vertex id; prev[j] is mutated mid-loop
    pub fn find_path_idx(&self, x: usize, y: usize) -> Option<Vec<usize>> {
        let (n, edges) = match self {
            DirectedGraph::Finite { n, edges } => (*n, edges),
            DirectedGraph::Real { .. } => panic!("index path queried on a predicate graph"),
        };
        let mut prev = vec![usize::MAX; n];
        prev[x] = x;
        let mut queue = VecDeque::from([x]);
        while let Some(i) = queue.pop_front() {
            if i == y {
                let mut path = vec![y];
                let mut cur = y;
                while cur != x {
                    cur = prev[cur];
                    path.push(cur);
                }
                path.reverse();
                return Some(path);
            }
            for j in 0..n {
                if prev[j] == usize::MAX && (edges.contains(&(i, j)) || edges.contains(&(j, i))) {
                    prev[j] = i;
                    queue.push_back(j);
                }
            }
        }
        None
    }

    /// Path between real points in G̃. Under every predicate kind two
    /// joinable points are joinable directly, so paths have at most one
    /// edge.
    pub fn find_path_real(&self, x: &Rat, y: &Rat) -> Option<Vec<Rat>> {
        if x == y {
            return Some(vec![x.clone()]);
        }
        let closure = self.undirected_closure();
        if closure.has_edge_rat(x, y) {
            Some(vec![x.clone(), y.clone()])
        } else {
            None
        }
    }

    /// Replay check: consecutive pairs are all edges (of G̃ when
    /// `undirected`).
    pub fn path_valid_idx(&self, path: &[usize], undirected: bool) -> bool {
        !path.is_empty()
            && path.windows(2).all(|w| {
                self.has_edge_idx(w[0], w[1]) || (undirected && self.has_edge_idx(w[1], w[0]))
            })
    }

    /// X_T = {x : (x, Tx) ∈ E(G)} on a finite carrier.
    pub fn x_t_indices(&self, map: &SelfMap) -> Vec<usize> {
        let n = self.n().expect("index X_T needs a finite graph");
        (0..n).filter(|&i| self.has_edge_idx(i, map.eval_idx(i))).collect()
    }

    /// X_T on the real line, solved per piece. Exact for affine pieces
    /// under every predicate and for quadratic pieces under
    /// complete/diagonal kinds; quadratic pieces under order predicates
    /// have irrational boundary sets, so those pieces are skipped and
    /// the flag comes back false.
    pub fn x_t_real(&self, map: &SelfMap) -> (RealSet, bool) {
        let kind = self.real_kind().expect("real X_T queried on a finite graph");
        let mut out = RealSet::empty();
        let mut exact = true;
        for piece in map.pieces() {
            let whole = RealSet::single(piece.interval.clone());
            match kind {
                RealGraphKind::Complete => out = out.union(&whole),
                RealGraphKind::Diagonal => {
                    out = out.union(&piece_fixed_set(piece));
                }
                RealGraphKind::OrderLeq { order, flipped } => {
                    // the loop at x covers the Tx = x case
                    out = out.union(&piece_fixed_set(piece));
                    match &piece.rule {
                        PieceRule::Affine { slope, intercept } => {
                            let cmp = if *flipped {
                                image_below_x(slope, intercept)
                            } else {
                                image_above_x(slope, intercept)
                            };
                            out = out.union(&order_branch(order, piece, &whole, &cmp));
                        }
                        PieceRule::Quadratic { .. } => exact = false,
                    }
                }
                RealGraphKind::OrderComparable { order } => {
                    out = out.union(&piece_fixed_set(piece));
                    match &piece.rule {
                        PieceRule::Affine { slope, intercept } => {
                            let cmp = image_above_x(slope, intercept)
                                .union(&image_below_x(slope, intercept));
                            out = out.union(&order_branch(order, piece, &whole, &cmp));
                        }
                        PieceRule::Quadratic { .. } => exact = false,
                    }
                }
            }
        }
        (out, exact)
    }
}

/// {x : c·x + d ≥ 0} as an exact set.
fn solve_linear_ge(c: &Rat, d: &Rat) -> RealSet {
    use crate::interval::{Endpoint, Interval};
    let root = || -(&(d / c));
    if c.is_positive() {
        RealSet::single(Interval::new(Endpoint::Incl(root()), Endpoint::Unbounded).unwrap())
    } else if c.is_negative() {
        RealSet::single(Interval::new(Endpoint::Unbounded, Endpoint::Incl(root())).unwrap())
    } else if d.is_negative() {
        RealSet::empty()
    } else {
        RealSet::all()
    }
}

/// {x : x ≤ a·x + b}.
fn image_above_x(slope: &Rat, intercept: &Rat) -> RealSet {
    solve_linear_ge(&(slope - &Rat::one()), intercept)
}

/// {x : a·x + b ≤ x}.
fn image_below_x(slope: &Rat, intercept: &Rat) -> RealSet {
    solve_linear_ge(&(&Rat::one() - slope), &-intercept)
}

/// Points of a piece fixed by its rule (always graph edges via loops).
fn piece_fixed_set(piece: &crate::map::Piece) -> RealSet {
    match &piece.rule {
        PieceRule::Affine { slope, intercept } => {
            affine_fixed_set(&piece.interval, slope, intercept)
        }
        PieceRule::Quadratic { coeff } => {
            let mut out = RealSet::empty();
            for cand in quad_fixed_candidates(coeff) {
                if piece.interval.contains(&cand) {
                    out = out.union(&RealSet::point(cand));
                }
            }
            out
        }
    }
}

/// The non-loop part of {x ∈ piece : (x, Tx) satisfies the order
/// predicate}: restrict to the order's region (and its preimage under
/// the piece rule) and to the comparison set.
fn order_branch(
    order: &RealOrder,
    piece: &crate::map::Piece,
    whole: &RealSet,
    cmp: &RealSet,
) -> RealSet {
    let PieceRule::Affine { slope, intercept } = &piece.rule else {
        unreachable!("order branch is affine-only");
    };
    match order {
        RealOrder::GlobalLeq => whole.intersect(cmp),
        RealOrder::IntervalOrder { region } => {
            // T(x) ∈ region, pulled back through the affine rule
            let preimage = if slope.is_zero() {
                if region.contains(intercept) {
                    RealSet::all()
                } else {
                    RealSet::empty()
                }
            } else {
                let inv_slope = slope.recip();
                let inv_intercept = -(&(intercept / slope));
                region.affine_image(&inv_slope, &inv_intercept)
            };
            whole.intersect(region).intersect(&preimage).intersect(cmp)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::interval::Interval;
    use crate::map::{three_branch_example, Piece};
    use crate::rat::rat;

    fn iv(s: &str) -> Interval {
        s.parse().unwrap()
    }

    /// The closing example's order: x ⪯ y iff x = y or both lie in
    /// [1,4] \ {5/2} with x ≤ y.
    fn paper_order() -> RealOrder {
        RealOrder::IntervalOrder {
            region: RealSet::single(iv("[1, 4]")).remove_point(&rat("5/2")),
        }
    }

    fn paper_graph() -> DirectedGraph {
        DirectedGraph::real(RealGraphKind::OrderLeq { order: paper_order(), flipped: false })
    }

    #[test]
    fn loops_are_inserted_on_load() {
        let (g, added) = DirectedGraph::finite(3, [(0, 1)]);
        assert_eq!(added, 3);
        assert!(g.has_edge_idx(0, 0));
        assert!(g.has_edge_idx(2, 2));
        assert!(g.has_edge_idx(0, 1));
        assert!(!g.has_edge_idx(1, 0));
        let (_, re_added) = DirectedGraph::finite(3, g.edges().iter().copied());
        assert_eq!(re_added, 0);
    }

    #[test]
    fn closure_symmetrizes_and_is_idempotent() {
        let (g, _) = DirectedGraph::finite(3, [(0, 1)]);
        let closed = g.undirected_closure();
        assert!(closed.has_edge_idx(1, 0));
        assert!(closed.is_symmetric());
        assert_eq!(closed.undirected_closure(), closed);
        // order graph on {0,1,2} (i <= j): closure is complete
        let (order, _) =
            DirectedGraph::finite(3, (0..3).flat_map(|i| (i..3).map(move |j| (i, j))));
        assert_eq!(order.undirected_closure(), DirectedGraph::finite_complete(3));
    }

    #[test]
    fn reverse_flips_edges() {
        let (g, _) = DirectedGraph::finite(2, [(0, 1)]);
        let r = g.reverse();
        assert!(r.has_edge_idx(1, 0));
        assert!(!r.has_edge_idx(0, 1));
        assert_eq!(r.reverse(), g);
    }

    #[test]
    fn components_partition_the_carrier() {
        // a—b, c isolated
        let (g, _) = DirectedGraph::finite(3, [(0, 1)]);
        assert_eq!(g.component_idx(0), vec![0, 1]);
        assert_eq!(g.component_idx(1), vec![0, 1]);
        assert_eq!(g.component_idx(2), vec![2]);
        assert_eq!(g.components(), vec![vec![0, 1], vec![2]]);
        assert!(!g.is_weakly_connected_idx());

        let loops = DirectedGraph::finite_loops_only(2);
        assert_eq!(loops.component_idx(0), vec![0]);
        assert!(!loops.is_weakly_connected_idx());
        assert!(DirectedGraph::finite_complete(4).is_weakly_connected_idx());

        // membership is symmetric: y ∈ [x] iff x ∈ [y]
        let (g, _) = DirectedGraph::finite(4, [(2, 0), (1, 3)]);
        for x in 0..4 {
            for y in 0..4 {
                assert_eq!(
                    g.component_idx(x).contains(&y),
                    g.component_idx(y).contains(&x)
                );
            }
        }
    }

    #[test]
    fn bfs_paths_are_shortest_and_deterministic() {
        let (chain, _) = DirectedGraph::finite(3, [(0, 1), (1, 2)]);
        assert_eq!(chain.find_path_idx(0, 2), Some(vec![0, 1, 2]));
        assert_eq!(chain.find_path_idx(1, 1), Some(vec![1]));
        // direction is ignored: edge (1,0) still joins 0 to 1
        let (back, _) = DirectedGraph::finite(2, [(1, 0)]);
        assert_eq!(back.find_path_idx(0, 1), Some(vec![0, 1]));
        let (split, _) = DirectedGraph::finite(3, [(0, 1)]);
        assert_eq!(split.find_path_idx(0, 2), None);
        // diamond: both a-b-d and a-c-d are shortest; lower index wins
        let (diamond, _) = DirectedGraph::finite(4, [(0, 1), (0, 2), (1, 3), (2, 3)]);
        assert_eq!(diamond.find_path_idx(0, 3), Some(vec![0, 1, 3]));
        let path = diamond.find_path_idx(0, 3).unwrap();
        assert!(diamond.undirected_closure().path_valid_idx(&path, false));
    }

    #[test]
    fn paper_order_components() {
        let g = paper_graph();
        let domain = RealSet::all();
        let region = RealSet::single(iv("[1, 4]")).remove_point(&rat("5/2"));
        assert_eq!(g.component_real(&domain, &rat("4")), region);
        assert_eq!(g.component_real(&domain, &rat("2")), region);
        assert_eq!(g.component_real(&domain, &rat("5/2")), RealSet::point(rat("5/2")));
        assert_eq!(g.component_real(&domain, &rat("0")), RealSet::point(rat("0")));
        assert!(!g.is_weakly_connected_real(&domain));

        // edges: order holds inside the region, the closure adds the flip
        assert!(g.has_edge_rat(&rat("3"), &rat("4")));
        assert!(!g.has_edge_rat(&rat("4"), &rat("3")));
        assert!(g.undirected_closure().has_edge_rat(&rat("4"), &rat("3")));
        assert!(!g.has_edge_rat(&rat("0"), &rat("4")));
        assert!(g.has_edge_rat(&rat("0"), &rat("0")));
        assert_eq!(g.find_path_real(&rat("4"), &rat("2")), Some(vec![rat("4"), rat("2")]));
        assert_eq!(g.find_path_real(&rat("0"), &rat("4")), None);
    }

    #[test]
    fn predicate_kind_connectivity() {
        let domain = RealSet::all();
        assert!(DirectedGraph::real(RealGraphKind::Complete).is_weakly_connected_real(&domain));
        assert!(DirectedGraph::real(RealGraphKind::OrderLeq {
            order: RealOrder::GlobalLeq,
            flipped: false
        })
        .is_weakly_connected_real(&domain));
        let diag = DirectedGraph::real(RealGraphKind::Diagonal);
        assert!(!diag.is_weakly_connected_real(&domain));
        assert!(diag.is_weakly_connected_real(&RealSet::point(rat("7"))));
        assert_eq!(
            DirectedGraph::real(RealGraphKind::Complete).component_real(&domain, &rat("3")),
            domain
        );
    }

    #[test]
    fn x_t_for_the_paper_example() {
        let (xt, exact) = paper_graph().x_t_real(&three_branch_example());
        assert!(exact);
        assert_eq!(xt.to_string(), "{0} U [1, 5/2] U {5}");
        // spot checks straight against the predicate
        let g = paper_graph();
        let t = three_branch_example();
        for x in ["0", "1", "2", "49/20", "5/2", "5"] {
            assert!(xt.contains(&rat(x)));
            assert!(g.has_edge_rat(&rat(x), &t.eval_rat(&rat(x)).unwrap()));
        }
        for x in ["3", "4", "-1", "1/2", "26/10", "6"] {
            assert!(!xt.contains(&rat(x)), "{x} should not be in X_T");
            assert!(!g.has_edge_rat(&rat(x), &t.eval_rat(&rat(x)).unwrap()));
        }
    }

    #[test]
    fn x_t_under_other_kinds() {
        let t = three_branch_example();
        // complete graph: everything
        let (xt, exact) = DirectedGraph::real(RealGraphKind::Complete).x_t_real(&t);
        assert!(exact);
        assert_eq!(xt, RealSet::all());
        // diagonal: exactly the fixed points
        let (xt, exact) = DirectedGraph::real(RealGraphKind::Diagonal).x_t_real(&t);
        assert!(exact);
        assert_eq!(xt.to_string(), "{0} U {5/2} U {5}");
        // global order: x <= Tx per piece:
        //   2x: x >= 0 and x < 1; (x+5)/3: x <= 5/2; 2x-5: x >= 5
        let (xt, exact) = DirectedGraph::real(RealGraphKind::OrderLeq {
            order: RealOrder::GlobalLeq,
            flipped: false,
        })
        .x_t_real(&t);
        assert!(exact);
        assert_eq!(xt.to_string(), "[0, 5/2] U [5, inf)");
    }

    #[test]
    fn x_t_with_a_quadratic_piece() {
        // x^2/2 away from 0, constant 1 at 0, on [0, inf)
        let quad = SelfMap::piecewise(vec![
            Piece::new(iv("[0, 0]"), PieceRule::Affine { slope: rat("0"), intercept: rat("1") }),
            Piece::new(iv("(0, inf)"), PieceRule::Quadratic { coeff: rat("1/2") }),
        ]);
        let (xt, exact) = DirectedGraph::real(RealGraphKind::Diagonal).x_t_real(&quad);
        assert!(exact);
        assert_eq!(xt, RealSet::point(rat("2")));
        // under an order predicate the quadratic piece is not solved
        let (_, exact) = DirectedGraph::real(RealGraphKind::OrderLeq {
            order: RealOrder::GlobalLeq,
            flipped: false,
        })
        .x_t_real(&quad);
        assert!(!exact);
    }

    #[test]
    fn x_t_identity_is_everything() {
        let (g, _) = DirectedGraph::finite(3, [(0, 1)]);
        let id = SelfMap::table(vec![0, 1, 2]);
        assert_eq!(g.x_t_indices(&id), vec![0, 1, 2]);
        let t = SelfMap::table(vec![1, 0, 2]);
        assert_eq!(g.x_t_indices(&t), vec![0, 2]);
    }
}
