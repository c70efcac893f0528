//! Banach G-contraction certificates.
//!
//! A self-map T is a Banach G-contraction when it preserves the edges of
//! G (B1) and some constant α ∈ (0, 1) uniformly bounds the stretch of
//! every edge under every basic entourage (B2). For pseudometric-family
//! entourages B2 reduces to the pointwise bound ρ(Tx, Ty) ≤ α·ρ(x, y)
//! on edges, so the checker computes the supremum of edge ratios —
//! `alpha-star` — exactly and compares it to 1.

use super::{
    approach_end, boundary_probes, image_of_set, pieces_sorted, sample_in, sample_pair,
    sample_points, TriState,
};
use crate::graph::{DirectedGraph, RealGraphKind, RealOrder};
use crate::interval::{Endpoint, Interval, RealSet};
use crate::map::{PieceRule, SelfMap};
use crate::rat::Rat;
use crate::space::{Carrier, PseudometricFamily};
use serde::{Deserialize, Serialize};
use std::fmt;

/// Supremum of ρ(Tx, Ty)/ρ(x, y) over edges at positive distance.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case", tag = "kind", content = "value")]
pub enum AlphaStar {
    Value(Rat),
    /// Ratios grow without bound: a jump inside the edge-carrying set,
    /// or a quadratic piece with unbounded reach.
    Unbounded,
    /// No edge joins two points at positive distance; the supremum
    /// ranges over the empty set and any constant in (0, 1) certifies.
    Undefined,
}

impl AlphaStar {
    /// The least admissible contraction-constant threshold as a number:
    /// the supremum over the empty ratio set is 0, and an unbounded
    /// supremum has no threshold.
    pub fn least_threshold(&self) -> Option<Rat> {
        match self {
            AlphaStar::Value(v) => Some(v.clone()),
            AlphaStar::Undefined => Some(Rat::zero()),
            AlphaStar::Unbounded => None,
        }
    }

    pub fn value(&self) -> Option<&Rat> {
        match self {
            AlphaStar::Value(v) => Some(v),
            _ => None,
        }
    }
}

impl fmt::Display for AlphaStar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            AlphaStar::Value(v) => write!(f, "{v}"),
            AlphaStar::Unbounded => write!(f, "unbounded"),
            AlphaStar::Undefined => write!(f, "undefined"),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub struct ContractionVerdict {
    /// B1: (x, y) ∈ E(G) implies (Tx, Ty) ∈ E(G).
    pub preserves_edges: bool,
    pub edge_witness: Option<String>,
    /// Zero-distance edges must stay at zero distance.
    pub zero_edge_ok: bool,
    pub zero_edge_witness: Option<String>,
    pub alpha_star: AlphaStar,
    pub is_contraction: bool,
    /// alpha-star landed exactly on 1: nonexpansive on edges but not a
    /// contraction for any admissible constant.
    pub near_miss: bool,
    /// E(G) = Δ(X), so B2 is vacuous off the diagonal.
    pub trivial_graph: bool,
    /// Some part of the verdict rests on sampling instead of exact
    /// piecewise algebra.
    pub heuristic: bool,
    pub notes: Vec<String>,
}

impl ContractionVerdict {
    /// Is the user-supplied constant admissible, i.e. α ∈ (0, 1) with
    /// every edge ratio ≤ α? (B2 asks for a non-strict bound, so
    /// α = alpha-star qualifies whether or not the supremum is attained.)
    pub fn admissible_alpha(&self, alpha: &Rat) -> bool {
        if !self.is_contraction || !alpha.is_positive() || *alpha >= 1 {
            return false;
        }
        match &self.alpha_star {
            AlphaStar::Value(v) => alpha >= v,
            AlphaStar::Undefined => true,
            AlphaStar::Unbounded => false,
        }
    }
}

pub fn check_contraction(
    map: &SelfMap,
    graph: &DirectedGraph,
    family: &PseudometricFamily,
    carrier: &Carrier,
) -> ContractionVerdict {
    match carrier {
        Carrier::Finite { .. } => check_finite(map, graph, family, carrier),
        Carrier::Real { domain, grid } => {
            let kind = graph
                .real_kind()
                .expect("real carrier requires a real graph");
            check_real(map, kind, domain, grid)
        }
    }
}

fn check_finite(
    map: &SelfMap,
    graph: &DirectedGraph,
    family: &PseudometricFamily,
    carrier: &Carrier,
) -> ContractionVerdict {
    let labels = carrier.labels();
    let mut preserves_edges = true;
    let mut edge_witness = None;
    let mut zero_edge_ok = true;
    let mut zero_edge_witness = None;
    let mut sup: Option<(Rat, usize, usize, String)> = None;
    for &(i, j) in graph.edges() {
        let (ti, tj) = (map.eval_idx(i), map.eval_idx(j));
        if !graph.has_edge_idx(ti, tj) {
            preserves_edges = false;
            if edge_witness.is_none() {
                edge_witness = Some(format!(
                    "edge ({}, {}) maps to ({}, {}), which is not an edge",
                    labels[i], labels[j], labels[ti], labels[tj]
                ));
            }
        }
        for pm in &family.members {
            let d = pm.dist_idx(i, j);
            let dt = pm.dist_idx(ti, tj);
            if d.is_zero() {
                if !dt.is_zero() {
                    zero_edge_ok = false;
                    if zero_edge_witness.is_none() {
                        zero_edge_witness = Some(format!(
                            "{}: rho({}, {}) = 0 but rho({}, {}) = {}",
                            pm.id, labels[i], labels[j], labels[ti], labels[tj], dt
                        ));
                    }
                }
            } else {
                let ratio = &dt / &d;
                if sup.as_ref().is_none_or(|(best, ..)| ratio > *best) {
                    sup = Some((ratio, i, j, pm.id.clone()));
                }
            }
        }
    }
    let trivial_graph = graph.edges().iter().all(|&(i, j)| i == j);
    let mut notes = Vec::new();
    let alpha_star = match sup {
        Some((ratio, i, j, pm)) => {
            notes.push(format!(
                "alpha-star attained on edge ({}, {}) under {}",
                labels[i], labels[j], pm
            ));
            AlphaStar::Value(ratio)
        }
        None => AlphaStar::Undefined,
    };
    if trivial_graph {
        notes.push(
            "trivial graph: E(G) = Delta(X), so B2 is vacuous and any constant in (0, 1) certifies"
                .to_string(),
        );
    }
    finish_verdict(
        preserves_edges,
        edge_witness,
        zero_edge_ok,
        zero_edge_witness,
        alpha_star,
        trivial_graph,
        false,
        notes,
    )
}

fn check_real(
    map: &SelfMap,
    kind: &RealGraphKind,
    domain: &RealSet,
    grid: &[Rat],
) -> ContractionVerdict {
    if matches!(kind, RealGraphKind::Diagonal) {
        return finish_verdict(
            true,
            None,
            true,
            None,
            AlphaStar::Undefined,
            true,
            false,
            vec![
                "trivial graph: E(G) = Delta(X), so B2 is vacuous and any constant in (0, 1) certifies"
                    .to_string(),
            ],
        );
    }
    let (preserves_edges, edge_witness, b1_heuristic) = check_b1_real(map, kind, domain, grid);
    let base = edge_base(kind, domain);
    let (alpha_star, alpha_heuristic, alpha_witness, mut notes) =
        alpha_star_real(map, &base, grid);
    if let Some(w) = alpha_witness {
        notes.push(w);
    }
    // Every pseudometric on the line is a positive multiple of |x - y|,
    // so zero distance means equality and T respects it for free.
    finish_verdict(
        preserves_edges,
        edge_witness,
        true,
        None,
        alpha_star,
        false,
        b1_heuristic || alpha_heuristic,
        notes,
    )
}

#[allow(clippy::too_many_arguments)]
fn finish_verdict(
    preserves_edges: bool,
    edge_witness: Option<String>,
    zero_edge_ok: bool,
    zero_edge_witness: Option<String>,
    alpha_star: AlphaStar,
    trivial_graph: bool,
    heuristic: bool,
    notes: Vec<String>,
) -> ContractionVerdict {
    let alpha_ok = match &alpha_star {
        AlphaStar::Value(v) => *v < 1,
        AlphaStar::Undefined => true,
        AlphaStar::Unbounded => false,
    };
    let near_miss = matches!(&alpha_star, AlphaStar::Value(v) if *v == 1);
    ContractionVerdict {
        is_contraction: preserves_edges && zero_edge_ok && alpha_ok,
        preserves_edges,
        edge_witness,
        zero_edge_ok,
        zero_edge_witness,
        alpha_star,
        near_miss,
        trivial_graph,
        heuristic,
        notes,
    }
}

/// The set carrying all non-loop edges of a real graph: every edge pair
/// lies inside it, and every pair inside it (in some order) is an edge.
fn edge_base(kind: &RealGraphKind, domain: &RealSet) -> RealSet {
    match kind {
        RealGraphKind::Complete | RealGraphKind::Diagonal => domain.clone(),
        RealGraphKind::OrderLeq { order, .. } | RealGraphKind::OrderComparable { order } => {
            match order {
                RealOrder::GlobalLeq => domain.clone(),
                RealOrder::IntervalOrder { region } => region.clone(),
            }
        }
    }
}

/// Exact supremum of |Tx - Ty| / |x - y| over distinct pairs of `base`.
/// Falls back to sampled pairs (flagged) only when `base` has gaps of
/// positive width.
fn alpha_star_real(
    map: &SelfMap,
    base: &RealSet,
    grid: &[Rat],
) -> (AlphaStar, bool, Option<String>, Vec<String>) {
    let mut notes = Vec::new();
    if base.is_empty() {
        return (AlphaStar::Undefined, false, None, notes);
    }
    if !base.has_positive_length() {
        // finitely many isolated points: exact pairwise ratios
        let pts: Vec<Rat> = base.isolated_points().cloned().collect();
        let mut sup: Option<Rat> = None;
        for (k, x) in pts.iter().enumerate() {
            for y in &pts[k + 1..] {
                if let (Some(tx), Some(ty)) = (map.eval_rat(x), map.eval_rat(y)) {
                    let ratio = (&tx - &ty).abs() / (x - y).abs();
                    if sup.as_ref().is_none_or(|s| ratio > *s) {
                        sup = Some(ratio);
                    }
                }
            }
        }
        let alpha = match sup {
            Some(s) => AlphaStar::Value(s),
            None => AlphaStar::Undefined,
        };
        return (alpha, false, None, notes);
    }
    // Jumps relative to the base set make ratios unbounded: pairs
    // straddling the jump keep |Tx - Ty| bounded below while |x - y|
    // shrinks to zero.
    for probe in boundary_probes(map, base) {
        if probe.acc_left && probe.acc_right {
            if let (Some(l), Some(r)) = (&probe.left_limit, &probe.right_limit) {
                if l != r {
                    return (
                        AlphaStar::Unbounded,
                        false,
                        Some(format!(
                            "T jumps at x = {} (left limit {}, right limit {}); edge pairs straddling it stretch without bound",
                            probe.at, l, r
                        )),
                        notes,
                    );
                }
            }
        }
        if probe.member {
            if probe.acc_left {
                if let (Some(l), Some(v)) = (&probe.left_limit, &probe.value) {
                    if l != v {
                        return (
                            AlphaStar::Unbounded,
                            false,
                            Some(format!(
                                "T({}) = {} but T(x) -> {} as x -> {} from below; nearby edge pairs stretch without bound",
                                probe.at, v, l, probe.at
                            )),
                            notes,
                        );
                    }
                }
            }
            if probe.acc_right {
                if let (Some(r), Some(v)) = (&probe.right_limit, &probe.value) {
                    if r != v {
                        return (
                            AlphaStar::Unbounded,
                            false,
                            Some(format!(
                                "T({}) = {} but T(x) -> {} as x -> {} from above; nearby edge pairs stretch without bound",
                                probe.at, v, r, probe.at
                            )),
                            notes,
                        );
                    }
                }
            }
        }
    }
    if base.punctured_hull().is_some() {
        // With no jumps across the (punctured) hull, |Tx - Ty| is at most
        // max piece slope times |x - y|, and within-piece pairs approach
        // that bound: the supremum is the largest per-piece slope bound.
        let mut sup: Option<Rat> = None;
        let mut arg: Option<String> = None;
        for piece in map.pieces() {
            let inter = base.intersect(&RealSet::single(piece.interval.clone()));
            if !inter.has_positive_length() {
                continue;
            }
            let contribution = match &piece.rule {
                PieceRule::Affine { slope, .. } => slope.abs(),
                PieceRule::Quadratic { coeff } => {
                    let hull = inter.hull().expect("nonempty intersection");
                    match (hull.lo().value(), hull.hi().value()) {
                        (Some(a), Some(b)) => {
                            &(&Rat::int(2) * &coeff.abs()) * &a.abs().max(b.abs())
                        }
                        _ => {
                            return (
                                AlphaStar::Unbounded,
                                false,
                                Some(format!(
                                    "quadratic piece {} meets the edge-carrying set with unbounded reach",
                                    piece.interval
                                )),
                                notes,
                            )
                        }
                    }
                }
            };
            if sup.as_ref().is_none_or(|s| contribution > *s) {
                arg = Some(format!("piece {} (T(x) = {})", piece.interval, piece.rule));
                sup = Some(contribution);
            }
        }
        return match sup {
            Some(s) => {
                if let Some(a) = arg {
                    notes.push(format!("alpha-star governed by {a}"));
                }
                (AlphaStar::Value(s), false, None, notes)
            }
            None => (AlphaStar::Undefined, false, None, notes),
        };
    }
    // Gapped base: cross-gap ratios are not captured by slopes alone, so
    // estimate the supremum on sample pairs and say so.
    let mut samples = sample_points(base);
    samples.extend(grid.iter().filter(|g| base.contains(g)).cloned());
    samples.sort();
    samples.dedup();
    let mut sup: Option<Rat> = None;
    for (k, x) in samples.iter().enumerate() {
        for y in &samples[k + 1..] {
            if let (Some(tx), Some(ty)) = (map.eval_rat(x), map.eval_rat(y)) {
                let ratio = (&tx - &ty).abs() / (x - y).abs();
                if sup.as_ref().is_none_or(|s| ratio > *s) {
                    sup = Some(ratio);
                }
            }
        }
    }
    notes.push(format!(
        "edge-carrying set {} has gaps; alpha-star estimated from {} sample points",
        base,
        samples.len()
    ));
    let alpha = match sup {
        Some(s) => AlphaStar::Value(s),
        None => AlphaStar::Undefined,
    };
    (alpha, true, None, notes)
}

/// B1 on the line. Exact for affine maps under every supported edge
/// predicate; quadratic pieces under order predicates fall back to
/// sampled pairs (flagged heuristic).
fn check_b1_real(
    map: &SelfMap,
    kind: &RealGraphKind,
    domain: &RealSet,
    grid: &[Rat],
) -> (bool, Option<String>, bool) {
    let order = match kind {
        RealGraphKind::Complete | RealGraphKind::Diagonal => return (true, None, false),
        RealGraphKind::OrderLeq { order, .. } => order,
        RealGraphKind::OrderComparable { order } => order,
    };
    if map.has_quadratic() {
        return b1_sampled(map, kind, domain, grid);
    }
    let comparable = matches!(kind, RealGraphKind::OrderComparable { .. });
    match order {
        RealOrder::GlobalLeq => {
            if comparable {
                // every pair is comparable, so every image pair is an edge
                return (true, None, false);
            }
            match nondecreasing_on(map, domain) {
                Ok(()) => (true, None, false),
                Err((x, y)) => {
                    let (tx, ty) = (map.eval_rat(&x).unwrap(), map.eval_rat(&y).unwrap());
                    (
                        false,
                        Some(format!(
                            "edge ({x}, {y}) maps to ({tx}, {ty}), which is not an edge: T decreases"
                        )),
                        false,
                    )
                }
            }
        }
        RealOrder::IntervalOrder { region } => {
            let tr = image_of_set(map, region);
            if tr.single_point().is_some() {
                // constant on the region: image pairs are loops
                return (true, None, false);
            }
            if tr.is_subset_of(region) {
                if comparable {
                    return (true, None, false);
                }
                return match nondecreasing_on(map, region) {
                    Ok(()) => (true, None, false),
                    Err((x, y)) => {
                        let (tx, ty) = (map.eval_rat(&x).unwrap(), map.eval_rat(&y).unwrap());
                        (
                            false,
                            Some(format!(
                                "edge ({x}, {y}) maps to ({tx}, {ty}), which is not an edge: T decreases on the order region"
                            )),
                            false,
                        )
                    }
                };
            }
            // Some region point maps outside the region while T is not
            // constant there: pair it with a point of different value.
            let outside = tr.subtract(region);
            let z = sample_points(&outside)
                .into_iter()
                .next()
                .expect("nonempty difference has a sample");
            let witness = preimage_sample(map, region, &z).and_then(|xhat| {
                find_point_with_value_ne(map, region, &z).map(|v| {
                    let (lo, hi) = if xhat <= v {
                        (xhat.clone(), v.clone())
                    } else {
                        (v.clone(), xhat.clone())
                    };
                    let (tlo, thi) =
                        (map.eval_rat(&lo).unwrap(), map.eval_rat(&hi).unwrap());
                    format!(
                        "edge ({lo}, {hi}) maps to ({tlo}, {thi}), which is not an edge: {z} lies outside the order region"
                    )
                })
            });
            let msg = witness.unwrap_or_else(|| {
                format!("T sends the order region outside itself (value {z} is not in the region)")
            });
            (false, Some(msg), false)
        }
    }
}

/// Sampled B1 check for rule shapes without exact preimages.
fn b1_sampled(
    map: &SelfMap,
    kind: &RealGraphKind,
    domain: &RealSet,
    grid: &[Rat],
) -> (bool, Option<String>, bool) {
    let graph = DirectedGraph::real(kind.clone());
    let mut samples = sample_points(domain);
    if let RealGraphKind::OrderLeq {
        order: RealOrder::IntervalOrder { region },
        ..
    }
    | RealGraphKind::OrderComparable {
        order: RealOrder::IntervalOrder { region },
    } = kind
    {
        samples.extend(sample_points(region));
    }
    samples.extend(grid.iter().filter(|g| domain.contains(g)).cloned());
    samples.extend(
        map.boundary_points()
            .into_iter()
            .filter(|b| domain.contains(b)),
    );
    samples.sort();
    samples.dedup();
    for x in &samples {
        for y in &samples {
            if x == y || !graph.has_edge_rat(x, y) {
                continue;
            }
            if let (Some(tx), Some(ty)) = (map.eval_rat(x), map.eval_rat(y)) {
                if !graph.has_edge_rat(&tx, &ty) {
                    return (
                        false,
                        Some(format!(
                            "edge ({x}, {y}) maps to ({tx}, {ty}), which is not an edge"
                        )),
                        true,
                    );
                }
            }
        }
    }
    (true, None, true)
}

/// Extended value at a run end: finite limits plus the two infinities
/// that only unbounded first/last runs can produce.
#[derive(Clone, Debug, PartialEq)]
enum Ext {
    NegInf,
    Fin(Rat),
    PosInf,
}

fn ext_le(a: &Ext, b: &Ext) -> bool {
    match (a, b) {
        (Ext::NegInf, _) | (_, Ext::PosInf) => true,
        (Ext::Fin(x), Ext::Fin(y)) => x <= y,
        (Ext::PosInf, _) | (_, Ext::NegInf) => false,
    }
}

fn end_value(rule: &PieceRule, run: &Interval, hi: bool) -> Ext {
    let end = if hi { run.hi() } else { run.lo() };
    if let Some(v) = end.value() {
        return Ext::Fin(rule.eval_rat(v));
    }
    match rule {
        PieceRule::Affine { slope, intercept } => {
            if slope.is_zero() {
                Ext::Fin(intercept.clone())
            } else if slope.is_positive() == hi {
                Ext::PosInf
            } else {
                Ext::NegInf
            }
        }
        PieceRule::Quadratic { coeff } => {
            // x^2 -> +inf toward either unbounded end
            if coeff.is_positive() {
                Ext::PosInf
            } else {
                Ext::NegInf
            }
        }
    }
}

/// Is T nondecreasing as a function on `s`? On failure returns a
/// concrete pair x < y in `s` with T(x) > T(y).
#[allow(clippy::result_large_err)] // the Err *is* the payload: a witness pair
pub(crate) fn nondecreasing_on(map: &SelfMap, s: &RealSet) -> Result<(), (Rat, Rat)> {
    struct Entry<'a> {
        run: Interval,
        rule: &'a PieceRule,
        lo_val: Ext,
        hi_val: Ext,
    }
    let neg_axis = RealSet::single(
        Interval::new(Endpoint::Unbounded, Endpoint::Incl(Rat::zero())).unwrap(),
    );
    let pos_axis = RealSet::single(
        Interval::new(Endpoint::Incl(Rat::zero()), Endpoint::Unbounded).unwrap(),
    );
    let mut entries: Vec<Entry> = Vec::new();
    for piece in pieces_sorted(map) {
        let inter = s.intersect(&RealSet::single(piece.interval.clone()));
        for run in inter.intervals() {
            if run.as_point().is_none() {
                // within-run monotonicity
                match &piece.rule {
                    PieceRule::Affine { slope, .. } => {
                        if slope.is_negative() {
                            return Err(sample_pair(run).expect("positive-length run"));
                        }
                    }
                    PieceRule::Quadratic { coeff } => {
                        let falling = if coeff.is_positive() {
                            RealSet::single(run.clone()).intersect(&neg_axis)
                        } else {
                            RealSet::single(run.clone()).intersect(&pos_axis)
                        };
                        if let Some(bad) =
                            falling.intervals().iter().find(|iv| iv.as_point().is_none())
                        {
                            return Err(sample_pair(bad).expect("positive-length stretch"));
                        }
                    }
                }
            }
            entries.push(Entry {
                lo_val: end_value(&piece.rule, run, false),
                hi_val: end_value(&piece.rule, run, true),
                run: run.clone(),
                rule: &piece.rule,
            });
        }
    }
    for k in 0..entries.len().saturating_sub(1) {
        let (a, b) = (&entries[k], &entries[k + 1]);
        if ext_le(&a.hi_val, &b.lo_val) {
            continue;
        }
        // Interior junction values are finite: only the first run can
        // open at -inf and only the last can close at +inf.
        let (h, l2) = match (&a.hi_val, &b.lo_val) {
            (Ext::Fin(h), Ext::Fin(l)) => (h.clone(), l.clone()),
            _ => return Err((sample_in(&a.run), sample_in(&b.run))),
        };
        let mid = &(&h + &l2) / &Rat::int(2);
        let x = approach_end(a.rule, &a.run, true, |v| *v > mid)
            .unwrap_or_else(|| sample_in(&a.run));
        let y = approach_end(b.rule, &b.run, false, |v| *v < mid)
            .unwrap_or_else(|| sample_in(&b.run));
        return Err((x, y));
    }
    Ok(())
}

/// A point of `within` that T maps to `z`, inverted exactly on affine
/// pieces.
fn preimage_sample(map: &SelfMap, within: &RealSet, z: &Rat) -> Option<Rat> {
    for piece in map.pieces() {
        let inter = within.intersect(&RealSet::single(piece.interval.clone()));
        if inter.is_empty() {
            continue;
        }
        match &piece.rule {
            PieceRule::Affine { slope, intercept } => {
                if slope.is_zero() {
                    if intercept == z {
                        return sample_points(&inter).into_iter().next();
                    }
                } else {
                    let x = &(z - intercept) / slope;
                    if inter.contains(&x) {
                        return Some(x);
                    }
                }
            }
            PieceRule::Quadratic { .. } => continue,
        }
    }
    None
}

/// A point of `s` whose image differs from `z`.
fn find_point_with_value_ne(map: &SelfMap, s: &RealSet, z: &Rat) -> Option<Rat> {
    sample_points(s)
        .into_iter()
        .find(|x| matches!(map.eval_rat(x), Some(v) if &v != z))
}

/// Is T nonexpansive — |Tx - Ty| ≤ |x - y| for all pairs (every
/// pseudometric at once, since each is a positive multiple of |x - y|)?
/// Exact on both carriers.
pub fn check_nonexpansive(map: &SelfMap, family: &PseudometricFamily, carrier: &Carrier) -> TriState {
    match carrier {
        Carrier::Finite { points } => {
            let n = points.len();
            for i in 0..n {
                for j in (i + 1)..n {
                    let (ti, tj) = (map.eval_idx(i), map.eval_idx(j));
                    for pm in &family.members {
                        let d = pm.dist_idx(i, j);
                        let dt = pm.dist_idx(ti, tj);
                        if dt > d {
                            return TriState::Violated(format!(
                                "{}: rho({}, {}) = {} exceeds rho({}, {}) = {}",
                                pm.id,
                                points[ti].label,
                                points[tj].label,
                                dt,
                                points[i].label,
                                points[j].label,
                                d
                            ));
                        }
                    }
                }
            }
            TriState::Holds
        }
        Carrier::Real { domain, .. } => nonexpansive_real(map, domain),
    }
}

fn nonexpansive_real(map: &SelfMap, domain: &RealSet) -> TriState {
    let render = |x: &Rat, y: &Rat, tx: &Rat, ty: &Rat| {
        format!(
            "|T({x}) - T({y})| = {} exceeds |{x} - {y}| = {}",
            (tx - ty).abs(),
            (x - y).abs()
        )
    };
    // per-piece slope bound
    for piece in map.pieces() {
        match &piece.rule {
            PieceRule::Affine { slope, .. } => {
                if slope.abs() > Rat::one() {
                    if let Some((x, y)) = sample_pair(&piece.interval) {
                        let (tx, ty) =
                            (map.eval_rat(&x).unwrap(), map.eval_rat(&y).unwrap());
                        return TriState::Violated(render(&x, &y, &tx, &ty));
                    }
                }
            }
            PieceRule::Quadratic { coeff } => {
                // |Tx - Ty| / |x - y| = |coeff| * |x + y|, with supremum
                // 2*|coeff|*max(|end|) on a bounded piece and unbounded
                // otherwise.
                let exceeds = match (piece.interval.lo().value(), piece.interval.hi().value()) {
                    (Some(a), Some(b)) => {
                        &(&Rat::int(2) * &coeff.abs()) * &a.abs().max(b.abs()) > Rat::one()
                    }
                    _ => true,
                };
                if exceeds {
                    if let Some((x, y)) = expansive_quad_pair(map, &piece.interval, coeff) {
                        let (tx, ty) =
                            (map.eval_rat(&x).unwrap(), map.eval_rat(&y).unwrap());
                        return TriState::Violated(render(&x, &y, &tx, &ty));
                    }
                }
            }
        }
    }
    // jumps: straddling pairs stretch without bound
    for probe in boundary_probes(map, domain) {
        let c = &probe.at;
        if probe.acc_left && probe.acc_right {
            if let (Some(l), Some(r)) = (&probe.left_limit, &probe.right_limit) {
                if l != r {
                    if let Some((x, y)) =
                        near_pair(map, domain, |d| c - d, |d| c + d)
                    {
                        let (tx, ty) =
                            (map.eval_rat(&x).unwrap(), map.eval_rat(&y).unwrap());
                        return TriState::Violated(render(&x, &y, &tx, &ty));
                    }
                }
            }
        }
        if probe.member {
            if probe.acc_left {
                if let (Some(l), Some(v)) = (&probe.left_limit, &probe.value) {
                    if l != v {
                        if let Some((x, y)) =
                            near_pair(map, domain, |d| c - d, |_| c.clone())
                        {
                            let (tx, ty) =
                                (map.eval_rat(&x).unwrap(), map.eval_rat(&y).unwrap());
                            return TriState::Violated(render(&x, &y, &tx, &ty));
                        }
                    }
                }
            }
            if probe.acc_right {
                if let (Some(r), Some(v)) = (&probe.right_limit, &probe.value) {
                    if r != v {
                        if let Some((x, y)) =
                            near_pair(map, domain, |_| c.clone(), |d| c + d)
                        {
                            let (tx, ty) =
                                (map.eval_rat(&x).unwrap(), map.eval_rat(&y).unwrap());
                            return TriState::Violated(render(&x, &y, &tx, &ty));
                        }
                    }
                }
            }
        }
    }
    // gaps between domain runs: the jump across a gap may not exceed the
    // gap width (values at the facing ends are limits, so non-strict)
    let runs = domain.intervals();
    for k in 0..runs.len().saturating_sub(1) {
        let (r1, r2) = (&runs[k], &runs[k + 1]);
        let (b1, v1) = match facing_value(map, r1, true) {
            Some(bv) => bv,
            None => continue,
        };
        let (b2, v2) = match facing_value(map, r2, false) {
            Some(bv) => bv,
            None => continue,
        };
        if (&v1 - &v2).abs() > &b2 - &b1 {
            let att1 = matches!(r1.hi(), Endpoint::Incl(_));
            let att2 = matches!(r2.lo(), Endpoint::Incl(_));
            if let Some((x, y)) = near_pair(
                map,
                domain,
                |d| if att1 { b1.clone() } else { &b1 - d },
                |d| if att2 { b2.clone() } else { &b2 + d },
            ) {
                let (tx, ty) = (map.eval_rat(&x).unwrap(), map.eval_rat(&y).unwrap());
                return TriState::Violated(render(&x, &y, &tx, &ty));
            }
        }
    }
    TriState::Holds
}

/// Boundary value (or one-sided limit) of T at the chosen end of a run.
fn facing_value(map: &SelfMap, run: &Interval, hi: bool) -> Option<(Rat, Rat)> {
    let end = if hi { run.hi() } else { run.lo() };
    let b = end.value()?.clone();
    let v = if matches!(end, Endpoint::Incl(_)) {
        map.eval_rat(&b)?
    } else if hi {
        map.pieces()
            .iter()
            .find(|p| p.interval.accumulates_left(&b))?
            .rule
            .eval_rat(&b)
    } else {
        map.pieces()
            .iter()
            .find(|p| p.interval.accumulates_right(&b))?
            .rule
            .eval_rat(&b)
    };
    Some((b, v))
}

/// Shrinks a two-sided approach until the sampled pair genuinely expands
/// distances; the callers only invoke it where the limit ratio exceeds 1,
/// so the halving loop succeeds.
fn near_pair(
    map: &SelfMap,
    domain: &RealSet,
    x_of: impl Fn(&Rat) -> Rat,
    y_of: impl Fn(&Rat) -> Rat,
) -> Option<(Rat, Rat)> {
    let mut delta = Rat::one();
    for _ in 0..128 {
        let (x, y) = (x_of(&delta), y_of(&delta));
        if x < y && domain.contains(&x) && domain.contains(&y) {
            if let (Some(tx), Some(ty)) = (map.eval_rat(&x), map.eval_rat(&y)) {
                if (&tx - &ty).abs() > &y - &x {
                    return Some((x, y));
                }
            }
        }
        delta = &delta / &Rat::int(2);
    }
    None
}

/// A concrete pair inside a quadratic piece whose ratio |coeff|*|x + y|
/// exceeds 1. Exists whenever the piece's slope supremum does.
fn expansive_quad_pair(map: &SelfMap, iv: &Interval, coeff: &Rat) -> Option<(Rat, Rat)> {
    let t = coeff.abs().recip(); // need |x + y| > t
    let candidates: Vec<(Rat, Rat)> = match (iv.lo().value(), iv.hi().value()) {
        (_, None) => {
            let lo_floor = iv.lo().value().cloned().unwrap_or_else(Rat::zero);
            let x = (&t + &Rat::one()).max(&lo_floor + &Rat::one());
            vec![(x.clone(), &x + &Rat::one())]
        }
        (None, Some(b)) => {
            let x = (-(&t + &Rat::one())).min(b - &Rat::int(2));
            vec![(x.clone(), &x + &Rat::one())]
        }
        (Some(a), Some(b)) => {
            // march toward whichever end has the larger magnitude
            let w = b - a;
            let mut out = Vec::new();
            let mut m = &w / &Rat::int(4);
            for _ in 0..128 {
                out.push((b - &(&m * &Rat::int(2)), b - &m));
                out.push((a + &m, a + &(&m * &Rat::int(2))));
                m = &m / &Rat::int(2);
            }
            out
        }
    };
    candidates.into_iter().find(|(x, y)| {
        x < y
            && iv.contains(x)
            && iv.contains(y)
            && matches!(
                (map.eval_rat(x), map.eval_rat(y)),
                (Some(tx), Some(ty)) if (&tx - &ty).abs() > y - x
            )
    })
}
