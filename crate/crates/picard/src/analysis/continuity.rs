//! Continuity in all the flavors the classification needs: plain,
//! orbital, orbital along graph edges, equicontinuity of the power
//! family, and Property (*) — the graph-limit axiom that lets edge
//! chains pass to their limits.
//!
//! Finite carriers are decided exactly through zero-classes. On the
//! line, plain continuity is an exact one-sided-limit scan; the orbital
//! flavors combine exact certificates (continuity, finite image,
//! diagonal graphs) with probed orbits whose violations are confirmed
//! by exact evaluation at the snapped limit.

use super::contraction::check_nonexpansive;
use super::{boundary_probes, TriState};
use crate::graph::{DirectedGraph, RealGraphKind, RealOrder};
use crate::interval::{Endpoint, Interval, RealSet};
use crate::map::{OrbitStatus, PieceRule, SelfMap, StopRule};
use crate::rat::Rat;
use crate::space::{Carrier, PseudometricFamily};
use serde::{Deserialize, Serialize};

/// How a Property (*) verdict was reached.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum StarProvenance {
    /// Finite separated carrier: convergence is eventual equality.
    FiniteAuto,
    /// Decided exactly from the edge predicate's shape.
    PredicateExact,
    /// Taken from the configuration's declaration.
    Declared,
    /// A concrete violating sequence exists.
    Falsified,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub struct PropertyStar {
    pub state: TriState,
    pub provenance: StarProvenance,
    pub note: Option<String>,
}

/// The full continuity dossier for one map.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub struct ContinuityProfile {
    pub continuous: TriState,
    pub orbitally_continuous: TriState,
    pub orbitally_g_continuous: TriState,
    pub nonexpansive: TriState,
    pub equicontinuous_powers: TriState,
    pub property_star: PropertyStar,
}

/// Is T continuous everywhere on the carrier?
pub fn check_continuity(map: &SelfMap, family: &PseudometricFamily, carrier: &Carrier) -> TriState {
    match carrier {
        Carrier::Finite { points } => {
            let n = points.len();
            if family.is_separating(carrier) {
                // convergent sequences are eventually constant
                return TriState::Holds;
            }
            let classes = family.zero_classes(n);
            for x in 0..n {
                for y in 0..n {
                    if classes[x] == classes[y]
                        && classes[map.eval_idx(x)] != classes[map.eval_idx(y)]
                    {
                        return TriState::Violated(format!(
                            "{} ~ {} at distance zero, but T{} = {} and T{} = {} are separated",
                            points[x].label,
                            points[y].label,
                            points[x].label,
                            points[map.eval_idx(x)].label,
                            points[y].label,
                            points[map.eval_idx(y)].label
                        ));
                    }
                }
            }
            TriState::Holds
        }
        Carrier::Real { domain, .. } => {
            for probe in boundary_probes(map, domain) {
                let c = &probe.at;
                let v = match &probe.value {
                    Some(v) => v,
                    None => continue, // c outside the space: nothing to be continuous at
                };
                if probe.acc_left {
                    if let Some(l) = &probe.left_limit {
                        if l != v {
                            return TriState::Violated(format!(
                                "x_n = {c} - 1/n -> {c}, T(x_n) -> {l} but T({c}) = {v}"
                            ));
                        }
                    }
                }
                if probe.acc_right {
                    if let Some(r) = &probe.right_limit {
                        if r != v {
                            let seq = if c.is_zero() {
                                "x_n = 1/n -> 0".to_string()
                            } else {
                                format!("x_n = {c} + 1/n -> {c}")
                            };
                            return TriState::Violated(format!(
                                "{seq}, T(x_n) -> {r} but T({c}) = {v}"
                            ));
                        }
                    }
                }
            }
            TriState::Holds
        }
    }
}

/// Orbital continuity: for every x and increasing (p_n), T^(p_n)x -> y
/// forces T^(p_n + 1)x -> Ty. With `graph` present, only subsequences
/// whose consecutive orbit pairs are edges count (orbital G-continuity).
pub fn check_orbital_continuity(
    map: &SelfMap,
    graph: Option<&DirectedGraph>,
    family: &PseudometricFamily,
    carrier: &Carrier,
    stop: &StopRule,
    budget: usize,
) -> TriState {
    match carrier {
        Carrier::Finite { points } => orbital_finite(map, graph, family, points.len(), carrier),
        Carrier::Real { domain, grid } => orbital_real(map, graph, family, domain, grid, stop, budget),
    }
}

fn orbital_finite(
    map: &SelfMap,
    graph: Option<&DirectedGraph>,
    family: &PseudometricFamily,
    n: usize,
    carrier: &Carrier,
) -> TriState {
    if family.is_separating(carrier) {
        // limits of orbit subsequences are the values themselves
        return TriState::Holds;
    }
    let labels = carrier.labels();
    let classes = family.zero_classes(n);
    for x in 0..n {
        let orbit = map.orbit_idx(x, n + 2);
        let cycle = orbit.cycle().expect("n + 2 steps over n states always close a cycle");
        for &u in cycle {
            if let Some(g) = graph {
                if !g.has_edge_idx(u, map.eval_idx(u)) {
                    continue; // pattern pairs through u are never edges
                }
            }
            for y in 0..n {
                if classes[y] == classes[u]
                    && classes[map.eval_idx(y)] != classes[map.eval_idx(u)]
                {
                    return TriState::Violated(format!(
                        "orbit of {} keeps visiting {}; {} ~ {} but T{} = {} and T{} = {} are separated",
                        labels[x],
                        labels[u],
                        labels[u],
                        labels[y],
                        labels[u],
                        labels[map.eval_idx(u)],
                        labels[y],
                        labels[map.eval_idx(y)]
                    ));
                }
            }
        }
    }
    TriState::Holds
}

fn orbital_real(
    map: &SelfMap,
    graph: Option<&DirectedGraph>,
    family: &PseudometricFamily,
    domain: &RealSet,
    grid: &[Rat],
    stop: &StopRule,
    budget: usize,
) -> TriState {
    // Exact certificates first.
    if let Some(g) = graph {
        if matches!(g.real_kind(), Some(RealGraphKind::Diagonal)) {
            // edges along the orbit mean each T^(p_n)x is a fixed point,
            // so the subsequence is eventually constant at its limit
            return TriState::Holds;
        }
    }
    let carrier_view = Carrier::Real { domain: domain.clone(), grid: grid.to_vec() };
    if check_continuity(map, family, &carrier_view).holds() {
        return TriState::Holds;
    }
    if map
        .pieces()
        .iter()
        .all(|p| p.interval.as_point().is_some() || matches!(&p.rule, PieceRule::Affine { slope, .. } if slope.is_zero()))
    {
        // T has finite image: orbit values past step 1 live in a finite
        // set, so convergent subsequences are eventually constant
        return TriState::Holds;
    }
    let edge_filtered = match graph.and_then(|g| g.real_kind()) {
        None | Some(RealGraphKind::Complete) => false,
        Some(_) => true,
    };
    let mut starts: Vec<Rat> = grid.iter().filter(|g| domain.contains(g)).cloned().collect();
    starts.extend(map.boundary_points().into_iter().filter(|b| domain.contains(b)));
    starts.sort();
    starts.dedup();
    // Exact falsification: a drain certificate proves orbits entering its
    // zone converge to the zone's omitted endpoint. If the map's value at
    // that endpoint differs, p_n = n violates the property for any start
    // whose exact orbit reaches the zone.
    for drain in drain_certificates(map) {
        let ty = match map.eval_rat(&drain.limit) {
            Some(t) => t,
            None => continue, // limit outside the space: no convergence in X
        };
        if ty == drain.limit {
            continue; // limit is fixed: shifted subsequences converge to Ty
        }
        if edge_filtered {
            let g = graph.expect("filtered implies a graph");
            if !edge_tail_certain(g, &drain) {
                continue; // cannot exhibit an edge-respecting pattern
            }
        }
        for x0 in &starts {
            if exact_orbit_enters(map, x0, &drain.zone, 12) {
                let y = &drain.limit;
                return TriState::Violated(format!(
                    "x = {x0}: T^n(x) -> y = {y} with p_n = n, but T({y}) = {ty} != {y}, so T^(p_n + 1)(x) -> {y} != T(y)"
                ));
            }
        }
    }
    // Secondary numeric sweep for unfiltered orbital continuity: accept a
    // floating orbit limit only when it snaps to a rational that exact
    // evaluation confirms is not fixed.
    if !edge_filtered {
        let mut snap: Vec<Rat> = map.boundary_points();
        snap.extend(grid.iter().cloned());
        let (fixed, _) = map.fixed_points_real();
        snap.extend(fixed.isolated_points().cloned());
        snap.sort();
        snap.dedup();
        for x0 in &starts {
            let orbit = map.orbit_f64(x0.to_f64(), budget, stop);
            if orbit.status != OrbitStatus::Converged {
                continue;
            }
            let yhat = *orbit.values.last().expect("converged orbit has values");
            let y0 = match snap.iter().find(|c| (c.to_f64() - yhat).abs() < 1e-6) {
                Some(c) => c,
                None => continue,
            };
            let ty = match map.eval_rat(y0) {
                Some(t) => t,
                None => continue,
            };
            if ty == *y0 {
                continue;
            }
            return TriState::Violated(format!(
                "x = {x0}: T^n(x) -> y = {y0} with p_n = n, but T({y0}) = {ty} != {y0}, so T^(p_n + 1)(x) -> {y0} != T(y)"
            ));
        }
    }
    TriState::NotDetermined
}

/// An invariant stretch whose orbits provably converge to an endpoint
/// the stretch omits.
struct Drain {
    limit: Rat,
    zone: Interval,
    /// Orbits inside the zone move strictly downward (else upward).
    decreasing: bool,
}

/// Scans pieces for drains: on a fixed-point-free zone abutting an open
/// end of the piece, a strictly increasing rule with `Tx < x` (resp.
/// `Tx > x`) and a limit value that does not undershoot the end keeps
/// the zone invariant and squeezes orbits onto the endpoint. Every
/// condition is decided by exact rational arithmetic; the sign of
/// `Tx - x` is constant on the zone, so one sample settles it.
fn drain_certificates(map: &SelfMap) -> Vec<Drain> {
    let mut out = Vec::new();
    for piece in map.pieces() {
        let iv = &piece.interval;
        if iv.as_point().is_some() {
            continue;
        }
        let fixed = rule_fixed_points(&piece.rule);
        if let Endpoint::Excl(a) = iv.lo() {
            let cap = fixed.iter().filter(|p| *p > a && iv.contains(p)).min();
            let hi = match cap {
                Some(m) => Endpoint::Excl(m.clone()),
                None => iv.hi().clone(),
            };
            if let Some(zone) = Interval::new(Endpoint::Excl(a.clone()), hi) {
                if zone.as_point().is_none() && strictly_increasing_on(&piece.rule, &zone) {
                    let s = super::sample_in(&zone);
                    if piece.rule.eval_rat(&s) < s && piece.rule.eval_rat(a) >= *a {
                        out.push(Drain { limit: a.clone(), zone, decreasing: true });
                    }
                }
            }
        }
        if let Endpoint::Excl(b) = iv.hi() {
            let cap = fixed.iter().filter(|p| *p < b && iv.contains(p)).max();
            let lo = match cap {
                Some(m) => Endpoint::Excl(m.clone()),
                None => iv.lo().clone(),
            };
            if let Some(zone) = Interval::new(lo, Endpoint::Excl(b.clone())) {
                if zone.as_point().is_none() && strictly_increasing_on(&piece.rule, &zone) {
                    let s = super::sample_in(&zone);
                    if piece.rule.eval_rat(&s) > s && piece.rule.eval_rat(b) <= *b {
                        out.push(Drain { limit: b.clone(), zone, decreasing: false });
                    }
                }
            }
        }
    }
    out
}

fn rule_fixed_points(rule: &PieceRule) -> Vec<Rat> {
    match rule {
        PieceRule::Affine { slope, intercept } => {
            if *slope == 1 {
                Vec::new() // shift or identity: handled by the sign sample
            } else {
                vec![intercept / &(&Rat::one() - slope)]
            }
        }
        PieceRule::Quadratic { coeff } => {
            if coeff.is_zero() {
                vec![Rat::zero()]
            } else {
                vec![Rat::zero(), coeff.recip()]
            }
        }
    }
}

fn strictly_increasing_on(rule: &PieceRule, zone: &Interval) -> bool {
    match rule {
        PieceRule::Affine { slope, .. } => slope.is_positive(),
        PieceRule::Quadratic { coeff } => {
            if coeff.is_positive() {
                // c*x^2 climbs on the nonnegative axis
                zone.lo().value().is_some_and(|a| !a.is_negative())
            } else if coeff.is_negative() {
                zone.hi().value().is_some_and(|b| !b.is_positive())
            } else {
                false
            }
        }
    }
}

/// Does the exact orbit from `x0` reach the zone within `depth` steps?
fn exact_orbit_enters(map: &SelfMap, x0: &Rat, zone: &Interval, depth: usize) -> bool {
    let mut x = x0.clone();
    for _ in 0..=depth {
        if zone.contains(&x) {
            return true;
        }
        match map.eval_rat(&x) {
            Some(next) => x = next,
            None => return false,
        }
    }
    false
}

/// Once an orbit is trapped in the drain's zone, are its consecutive
/// pairs guaranteed to be edges?
fn edge_tail_certain(graph: &DirectedGraph, drain: &Drain) -> bool {
    let region_covers = |order: &RealOrder| match order {
        RealOrder::GlobalLeq => true,
        RealOrder::IntervalOrder { region } => {
            let z = RealSet::single(drain.zone.clone());
            region.intersect(&z) == z
        }
    };
    match graph.real_kind() {
        Some(RealGraphKind::Complete) => true,
        Some(RealGraphKind::OrderLeq { order, flipped }) => {
            // downward moves are edges only in the flipped order
            *flipped == drain.decreasing && region_covers(order)
        }
        Some(RealGraphKind::OrderComparable { order }) => region_covers(order),
        _ => false,
    }
}

/// Equicontinuity of the family {T^n : n ≥ 1}.
pub fn check_equicontinuous_powers(
    map: &SelfMap,
    family: &PseudometricFamily,
    carrier: &Carrier,
) -> TriState {
    match carrier {
        Carrier::Finite { points } => {
            let n = points.len();
            if family.is_separating(carrier) {
                return TriState::Holds;
            }
            let classes = family.zero_classes(n);
            for x in 0..n {
                for y in 0..n {
                    if classes[x] != classes[y] {
                        continue;
                    }
                    // follow the pair orbit until it repeats (≤ n^2 states)
                    let (mut px, mut py) = (x, y);
                    for _ in 0..=n * n {
                        if classes[px] != classes[py] {
                            return TriState::Violated(format!(
                                "{} ~ {} but the power orbit separates them at ({}, {})",
                                points[x].label, points[y].label, points[px].label, points[py].label
                            ));
                        }
                        px = map.eval_idx(px);
                        py = map.eval_idx(py);
                    }
                }
            }
            TriState::Holds
        }
        Carrier::Real { domain, .. } => {
            if check_nonexpansive(map, family, carrier).holds() {
                // each application is 1-Lipschitz, hence so is every power
                return TriState::Holds;
            }
            for probe in boundary_probes(map, domain) {
                if !probe.member {
                    continue;
                }
                let v = match &probe.value {
                    Some(v) => v,
                    None => continue,
                };
                let left_bad = probe.acc_left
                    && matches!(&probe.left_limit, Some(l) if l != v);
                let right_bad = probe.acc_right
                    && matches!(&probe.right_limit, Some(r) if r != v);
                if left_bad || right_bad {
                    return TriState::Violated(format!(
                        "T itself is discontinuous at x = {}, so the family fails there at n = 1",
                        probe.at
                    ));
                }
            }
            // an expansive affine piece that traps an escape ray separates
            // pairs geometrically
            for piece in map.pieces() {
                if let PieceRule::Affine { slope, intercept } = &piece.rule {
                    if slope.abs() > Rat::one() {
                        if *slope > 1 {
                            let anchor = intercept / &(&Rat::one() - slope); // fixed point of the rule
                            // an unbounded end of the piece carries the
                            // escape ray away from the anchor
                            let below = matches!(piece.interval.lo(), Endpoint::Unbounded);
                            let above = matches!(piece.interval.hi(), Endpoint::Unbounded);
                            if below || above {
                                return TriState::Violated(format!(
                                    "piece {} has slope {} > 1; pairs escaping from the rule's fixed point {} separate like {}^n",
                                    piece.interval, slope, anchor, slope
                                ));
                            }
                        } else if matches!(piece.interval.lo(), Endpoint::Unbounded)
                            && matches!(piece.interval.hi(), Endpoint::Unbounded)
                        {
                            return TriState::Violated(format!(
                                "slope {} < -1 on the whole line separates pairs geometrically",
                                slope
                            ));
                        }
                    }
                }
            }
            TriState::NotDetermined
        }
    }
}

/// Property (*): whenever consecutive members of a convergent sequence
/// are joined by edges, some subsequence is joined by edges to the limit.
pub fn check_property_star(
    graph: &DirectedGraph,
    family: &PseudometricFamily,
    carrier: &Carrier,
    declared: Option<bool>,
) -> PropertyStar {
    match carrier {
        Carrier::Finite { points } => {
            let n = points.len();
            let classes = family.zero_classes(n);
            for x in 0..n {
                for u in 0..n {
                    if classes[u] == classes[x] && !graph.has_edge_idx(u, x) {
                        return PropertyStar {
                            state: TriState::Violated(format!(
                                "the constant sequence at {} converges to {} but ({}, {}) is never an edge",
                                points[u].label, points[x].label, points[u].label, points[x].label
                            )),
                            provenance: StarProvenance::Falsified,
                            note: None,
                        };
                    }
                }
            }
            PropertyStar {
                state: TriState::Holds,
                provenance: StarProvenance::FiniteAuto,
                note: None,
            }
        }
        Carrier::Real { domain, .. } => {
            let kind = graph.real_kind().expect("real carrier requires a real graph");
            let exact = property_star_real(kind, domain);
            let note = match (&exact.state, declared) {
                (TriState::Holds, Some(false)) => {
                    Some("configuration declared property-star = false, but the edge predicate guarantees it".to_string())
                }
                (TriState::Violated(_), Some(true)) => {
                    Some("configuration declared property-star = true, but the edge predicate falsifies it".to_string())
                }
                _ => None,
            };
            PropertyStar { note, ..exact }
        }
    }
}

fn property_star_real(kind: &RealGraphKind, domain: &RealSet) -> PropertyStar {
    let exact_holds = PropertyStar {
        state: TriState::Holds,
        provenance: StarProvenance::PredicateExact,
        note: None,
    };
    let order = match kind {
        // complete: every pair is an edge, any subsequence works
        RealGraphKind::Complete => return exact_holds,
        // diagonal: edge chains are constant, the limit is the value
        RealGraphKind::Diagonal => return exact_holds,
        RealGraphKind::OrderLeq { order, .. } | RealGraphKind::OrderComparable { order } => order,
    };
    let region = match order {
        // global order: monotone chains keep their edge to the limit
        RealOrder::GlobalLeq => return exact_holds,
        RealOrder::IntervalOrder { region } => region,
    };
    let (check_below, check_above) = match kind {
        RealGraphKind::OrderLeq { flipped: false, .. } => (true, false),
        RealGraphKind::OrderLeq { flipped: true, .. } => (false, true),
        _ => (true, true), // comparable closure: chains may run either way
    };
    for run in region.intervals() {
        if check_below {
            if let Endpoint::Excl(b) = run.hi() {
                if domain.contains(b) {
                    return PropertyStar {
                        state: TriState::Violated(format!(
                            "an increasing sequence in the region converges to {b}, which the region omits; no subsequence has an edge to it"
                        )),
                        provenance: StarProvenance::Falsified,
                        note: None,
                    };
                }
            }
        }
        if check_above {
            if let Endpoint::Excl(a) = run.lo() {
                if domain.contains(a) {
                    return PropertyStar {
                        state: TriState::Violated(format!(
                            "a decreasing sequence in the region converges to {a}, which the region omits; no subsequence has an edge to it"
                        )),
                        provenance: StarProvenance::Falsified,
                        note: None,
                    };
                }
            }
        }
    }
    exact_holds
}

/// Builds the profile and enforces the implication chain
/// continuous ⇒ orbitally continuous ⇒ orbitally G-continuous (and
/// nonexpansive ⇒ equicontinuous powers) as a consistency check.
pub fn build_profile(
    map: &SelfMap,
    graph: &DirectedGraph,
    family: &PseudometricFamily,
    carrier: &Carrier,
    declared_star: Option<bool>,
    stop: &StopRule,
    budget: usize,
) -> Result<ContinuityProfile, String> {
    let continuous = check_continuity(map, family, carrier);
    let mut orbitally_continuous =
        check_orbital_continuity(map, None, family, carrier, stop, budget);
    let mut orbitally_g_continuous =
        check_orbital_continuity(map, Some(graph), family, carrier, stop, budget);
    let nonexpansive = check_nonexpansive(map, family, carrier);
    let equicontinuous_powers = check_equicontinuous_powers(map, family, carrier);
    let property_star = check_property_star(graph, family, carrier, declared_star);

    if continuous.holds() {
        if orbitally_continuous.violated() {
            return Err(format!(
                "internal inconsistency: T is continuous yet orbital continuity reports `{orbitally_continuous}`"
            ));
        }
        if matches!(orbitally_continuous, TriState::NotDetermined) {
            orbitally_continuous = TriState::Holds;
        }
    }
    if orbitally_continuous.holds() {
        if orbitally_g_continuous.violated() {
            return Err(format!(
                "internal inconsistency: orbital continuity holds yet the G-restricted form reports `{orbitally_g_continuous}`"
            ));
        }
        if matches!(orbitally_g_continuous, TriState::NotDetermined) {
            orbitally_g_continuous = TriState::Holds;
        }
    }
    if nonexpansive.holds() && equicontinuous_powers.violated() {
        return Err(
            "internal inconsistency: a nonexpansive map reported non-equicontinuous powers"
                .to_string(),
        );
    }
    Ok(ContinuityProfile {
        continuous,
        orbitally_continuous,
        orbitally_g_continuous,
        nonexpansive,
        equicontinuous_powers,
        property_star,
    })
}
