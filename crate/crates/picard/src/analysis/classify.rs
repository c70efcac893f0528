//! Picard / weakly-Picard classification.
//!
//! The report is assembled in two layers. Verdict-level facts (fixed
//! points, X_T, components, exact finite orbit behavior, invariant-zone
//! certificates on the line) are computed directly. The theorem routes
//! (main2 with Property (*), main3 with orbital continuity, main4 with
//! the G-restricted form) then license the Picard claims; wherever a
//! route makes a prediction the direct computation can test, the two
//! must agree — a mismatch is an internal-consistency error and is
//! never swallowed.

use super::cauchy::detect_cauchy_f64;
use super::continuity::ContinuityProfile;
use super::contraction::ContractionVerdict;
use super::{image_of_set, sample_points, TriState};
use crate::graph::{DirectedGraph, RealGraphKind, RealOrder};
use crate::interval::{Endpoint, RealSet};
use crate::map::{OrbitStatus, PieceRule, SelfMap, StopRule};
use crate::rat::Rat;
use crate::space::{BasicEntourage, Carrier, PseudometricFamily};
use serde::{Deserialize, Serialize};
use std::fmt;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum TheoremRoute {
    Main2,
    Main3,
    Main4,
}

impl fmt::Display for TheoremRoute {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            TheoremRoute::Main2 => write!(f, "main2"),
            TheoremRoute::Main3 => write!(f, "main3"),
            TheoremRoute::Main4 => write!(f, "main4"),
        }
    }
}

/// A point set in either carrier flavor, with its rendering.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub struct SetDescription {
    pub rendered: String,
    pub labels: Option<Vec<String>>,
    pub real: Option<RealSet>,
    pub exact: bool,
}

impl SetDescription {
    fn finite(labels: Vec<String>) -> Self {
        let rendered = format!("{{{}}}", labels.join(", "));
        SetDescription { rendered, labels: Some(labels), real: None, exact: true }
    }

    fn real(set: RealSet, exact: bool) -> Self {
        SetDescription { rendered: set.to_string(), labels: None, real: Some(set), exact }
    }
}

/// Verdict for one weak component of G̃.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub struct ComponentVerdict {
    pub description: String,
    pub members: Option<Vec<String>>,
    /// Why this component falls under the route's per-component claim.
    pub hypothesis: String,
    /// Do all orbits started in the component share one limit?
    pub converges: TriState,
    pub x_star: Option<String>,
    pub x_star_in_component: Option<bool>,
    /// Picard for the restriction: common limit, inside, unique there.
    pub restricted_picard: TriState,
    pub notes: Vec<String>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub struct ClassificationReport {
    pub route: Option<TheoremRoute>,
    pub fixed_points: SetDescription,
    pub x_t: SetDescription,
    pub components_meeting_x_t: Vec<String>,
    /// |Fix(T)| = number of components meeting X_T (finite carriers).
    pub cardinality_check: Option<bool>,
    pub picard: TriState,
    pub weakly_picard: TriState,
    pub restricted: Vec<ComponentVerdict>,
    pub heuristic: bool,
    pub notes: Vec<String>,
}

pub struct ClassifyInputs<'a> {
    pub map: &'a SelfMap,
    pub graph: &'a DirectedGraph,
    pub family: &'a PseudometricFamily,
    pub carrier: &'a Carrier,
    pub profile: &'a ContinuityProfile,
    pub verdict: &'a ContractionVerdict,
    /// Orbit probe starts (real carriers; finite carriers probe all points).
    pub probes: &'a [Rat],
    /// Entourages a probed orbit tail must reach around its claimed limit.
    pub probe_basis: &'a [BasicEntourage],
    pub sequentially_complete: bool,
    pub stop: &'a StopRule,
    pub budget: usize,
    pub window: usize,
}

pub fn classify(inp: &ClassifyInputs) -> Result<ClassificationReport, String> {
    match inp.carrier {
        Carrier::Finite { points } => classify_finite(inp, points.len()),
        Carrier::Real { domain, grid } => classify_real(inp, domain, grid),
    }
}

fn pick_route(inp: &ClassifyInputs, complete: bool, notes: &mut Vec<String>) -> Option<TheoremRoute> {
    if !inp.verdict.is_contraction {
        notes.push("not a verified contraction: descriptive fields only".to_string());
        return None;
    }
    if !complete {
        notes.push(
            "carrier not declared sequentially complete: theorem routes unavailable".to_string(),
        );
        return None;
    }
    if inp.profile.property_star.state.holds() {
        return Some(TheoremRoute::Main2);
    }
    if let TriState::Violated(w) = &inp.profile.property_star.state {
        notes.push(format!("property (*) fails ({w}): main2 route unavailable"));
    }
    if inp.profile.orbitally_continuous.holds() {
        notes.push(
            "main3 is stated for complete carriers; completeness is modeled as declared sequential completeness".to_string(),
        );
        return Some(TheoremRoute::Main3);
    }
    if inp.profile.orbitally_g_continuous.holds() {
        return Some(TheoremRoute::Main4);
    }
    notes.push("no continuity hypothesis available: no theorem route applies".to_string());
    None
}

// ---------------------------------------------------------------------
// finite carriers: everything is decided by exhaustive orbits
// ---------------------------------------------------------------------

/// The unique settling point of the orbit from `x`, if its cycle is a
/// single vertex.
fn settle_target(map: &SelfMap, x: usize, n: usize) -> Option<usize> {
    let orbit = map.orbit_idx(x, n + 2);
    let cycle = orbit.cycle().expect("n + 2 steps close a cycle");
    if cycle.len() == 1 {
        Some(cycle[0])
    } else {
        None
    }
}

fn classify_finite(inp: &ClassifyInputs, n: usize) -> Result<ClassificationReport, String> {
    let labels = inp.carrier.labels();
    let mut notes = Vec::new();
    let route = pick_route(inp, true, &mut notes);

    let fix_idx = inp.map.fixed_point_indices();
    let x_t_idx = inp.graph.x_t_indices(inp.map);
    let comps = inp.graph.components();
    let mut comp_of = vec![0usize; n];
    for (c, comp) in comps.iter().enumerate() {
        for &v in comp {
            comp_of[v] = c;
        }
    }
    let comps_meeting: Vec<usize> = (0..comps.len())
        .filter(|&c| x_t_idx.iter().any(|&x| comp_of[x] == c))
        .collect();
    let render_comp = |c: usize| {
        format!("{{{}}}", comps[c].iter().map(|&v| labels[v]).collect::<Vec<_>>().join(", "))
    };

    let fixed_points =
        SetDescription::finite(fix_idx.iter().map(|&i| labels[i].to_string()).collect());
    let x_t =
        SetDescription::finite(x_t_idx.iter().map(|&i| labels[i].to_string()).collect());

    if !inp.family.is_separating(inp.carrier) {
        return Ok(ClassificationReport {
            route: None,
            fixed_points,
            x_t,
            components_meeting_x_t: comps_meeting.iter().map(|&c| render_comp(c)).collect(),
            cardinality_check: None,
            picard: TriState::NotDetermined,
            weakly_picard: TriState::NotDetermined,
            restricted: Vec::new(),
            heuristic: false,
            notes: vec![
                "family is not separating: limits are not unique, so Picard verdicts are undefined"
                    .to_string(),
            ],
        });
    }

    let settles: Vec<Option<usize>> = (0..n).map(|x| settle_target(inp.map, x, n)).collect();
    let weakly_picard = match settles.iter().position(|s| s.is_none()) {
        Some(x) => TriState::Violated(format!(
            "the orbit from {} cycles without settling on a fixed point",
            labels[x]
        )),
        None => TriState::Holds,
    };
    let picard = if fix_idx.len() != 1 {
        TriState::Violated(format!("Fix(T) has {} members", fix_idx.len()))
    } else if let TriState::Violated(w) = &weakly_picard {
        TriState::Violated(w.clone())
    } else {
        TriState::Holds
    };

    let cardinality_check = Some(fix_idx.len() == comps_meeting.len());

    // Per-component analysis under the route's hypothesis.
    let mut restricted = Vec::new();
    if let Some(route) = route {
        for (c, comp) in comps.iter().enumerate() {
            let hypothesis = match route {
                TheoremRoute::Main2 | TheoremRoute::Main4 => {
                    match comp.iter().find(|&&v| x_t_idx.contains(&v)) {
                        Some(&v) => format!(
                            "{} is in X_T: ({}, {}) is an edge",
                            labels[v],
                            labels[v],
                            labels[inp.map.eval_idx(v)]
                        ),
                        None => continue,
                    }
                }
                TheoremRoute::Main3 => {
                    match comp.iter().find(|&&v| comp_of[inp.map.eval_idx(v)] == c) {
                        Some(&v) => format!(
                            "T{} = {} stays in the component",
                            labels[v],
                            labels[inp.map.eval_idx(v)]
                        ),
                        None => continue,
                    }
                }
            };
            let mut targets = comp.iter().map(|&v| settles[v]);
            let first = targets.next().unwrap_or(None);
            let common = match first {
                Some(f) if targets.all(|t| t == Some(f)) => Some(f),
                _ => None,
            };
            let (converges, x_star, in_comp) = match common {
                Some(f) => (TriState::Holds, Some(f), Some(comp_of[f] == c)),
                None => (
                    TriState::Violated(
                        "orbits from the component do not share a single settling point".to_string(),
                    ),
                    None,
                    None,
                ),
            };
            let restricted_picard = match (common, in_comp) {
                (Some(_), Some(true)) => {
                    if fix_idx.iter().filter(|&&p| comp_of[p] == c).count() == 1 {
                        TriState::Holds
                    } else {
                        TriState::Violated("several fixed points inside the component".to_string())
                    }
                }
                (Some(f), _) => TriState::Violated(format!(
                    "the common limit {} lies outside the component",
                    labels[f]
                )),
                (None, _) => TriState::Violated("orbits do not share a limit".to_string()),
            };
            restricted.push(ComponentVerdict {
                description: render_comp(c),
                members: Some(comp.iter().map(|&v| labels[v].to_string()).collect()),
                hypothesis,
                converges,
                x_star: x_star.map(|f| labels[f].to_string()),
                x_star_in_component: in_comp,
                restricted_picard,
                notes: Vec::new(),
            });
        }
    }

    // Route predictions versus the exhaustive computation.
    if let Some(r) = route {
        let connected = inp.graph.is_weakly_connected_idx();
        let fix_nonempty = !fix_idx.is_empty();
        let existence_hypothesis = match r {
            TheoremRoute::Main2 | TheoremRoute::Main4 => !x_t_idx.is_empty(),
            TheoremRoute::Main3 => (0..n).any(|v| comp_of[inp.map.eval_idx(v)] == comp_of[v]),
        };
        if fix_nonempty != existence_hypothesis {
            return Err(format!(
                "internal inconsistency: {r} predicts a fixed point iff its hypothesis holds, but Fix(T) nonempty = {fix_nonempty} while the hypothesis = {existence_hypothesis}"
            ));
        }
        let global_hypothesis = connected && existence_hypothesis;
        if global_hypothesis && !picard.holds() {
            return Err(format!(
                "internal inconsistency: {r} predicts a Picard operator on this connected instance, but direct orbits report `{picard}`"
            ));
        }
        for cv in &restricted {
            if !cv.converges.holds() {
                return Err(format!(
                    "internal inconsistency: {r} predicts a common limit on component {}, but orbits report `{}`",
                    cv.description, cv.converges
                ));
            }
            if r == TheoremRoute::Main2
                && (cv.x_star_in_component != Some(true) || !cv.restricted_picard.holds())
            {
                return Err(format!(
                    "internal inconsistency: main2 predicts restricted Picard on component {}, but the computed verdict is `{}`",
                    cv.description, cv.restricted_picard
                ));
            }
        }
        if r == TheoremRoute::Main2 && cardinality_check != Some(true) {
            return Err(format!(
                "internal inconsistency: main2 predicts |Fix(T)| = |components meeting X_T|, but {} != {}",
                fix_idx.len(),
                comps_meeting.len()
            ));
        }
        if x_t_idx.len() == n && !weakly_picard.holds() {
            return Err(format!(
                "internal inconsistency: {r} predicts a weakly Picard operator when X_T = X, but orbits report `{weakly_picard}`"
            ));
        }
    }

    Ok(ClassificationReport {
        route,
        fixed_points,
        x_t,
        components_meeting_x_t: comps_meeting.iter().map(|&c| render_comp(c)).collect(),
        cardinality_check,
        picard,
        weakly_picard,
        restricted,
        heuristic: false,
        notes,
    })
}

// ---------------------------------------------------------------------
// real carriers: exact certificates first, probes as corroboration
// ---------------------------------------------------------------------

/// An affine piece that the whole set `s` provably falls into and never
/// leaves: |slope| < 1, the rule's fixed point sits in the piece, the
/// piece maps into itself, and some forward image of `s` lands inside.
/// Every orbit from `s` then converges geometrically to the fixed point.
fn attracting_target(map: &SelfMap, s: &RealSet, depth: usize) -> Option<Rat> {
    let mut candidates = Vec::new();
    for piece in map.pieces() {
        if let PieceRule::Affine { slope, intercept } = &piece.rule {
            if slope.abs() < Rat::one() {
                let anchor = intercept / &(&Rat::one() - slope);
                if !piece.interval.contains(&anchor) {
                    continue;
                }
                let piece_set = RealSet::single(piece.interval.clone());
                if image_of_set(map, &piece_set).is_subset_of(&piece_set) {
                    candidates.push((piece_set, anchor));
                }
            }
        }
    }
    if candidates.is_empty() {
        return None;
    }
    let mut current = s.clone();
    for _ in 0..=depth {
        if let Some((_, anchor)) = candidates.iter().find(|(ps, _)| current.is_subset_of(ps)) {
            return Some(anchor.clone());
        }
        current = image_of_set(map, &current);
        if current.is_empty() {
            return None;
        }
    }
    None
}

/// A ray on which orbits provably run off to infinity: an expansive
/// affine piece whose unbounded side traps the escape, or a quadratic
/// piece past its outer fixed point. Returns a concrete start and the
/// reason.
fn escape_certificate(map: &SelfMap) -> Option<(Rat, String)> {
    for piece in map.pieces() {
        let iv = &piece.interval;
        match &piece.rule {
            PieceRule::Affine { slope, intercept } if slope.abs() > Rat::one() => {
                if *slope > 1 {
                    let anchor = intercept / &(&Rat::one() - slope);
                    if matches!(iv.lo(), Endpoint::Unbounded) {
                        let ceiling = match iv.hi().value() {
                            Some(h) => anchor.min(h.clone()),
                            None => anchor,
                        };
                        let start = &ceiling - &Rat::one();
                        return Some((start.clone(), format!(
                            "the orbit from x = {start} moves monotonically to -infinity on the piece {iv} (slope {slope})"
                        )));
                    }
                    if matches!(iv.hi(), Endpoint::Unbounded) {
                        let floor = match iv.lo().value() {
                            Some(l) => anchor.max(l.clone()),
                            None => anchor,
                        };
                        let start = &floor + &Rat::one();
                        return Some((start.clone(), format!(
                            "the orbit from x = {start} moves monotonically to +infinity on the piece {iv} (slope {slope})"
                        )));
                    }
                } else if matches!(iv.lo(), Endpoint::Unbounded)
                    && matches!(iv.hi(), Endpoint::Unbounded)
                {
                    let anchor = intercept / &(&Rat::one() - slope);
                    let start = &anchor + &Rat::one();
                    return Some((start.clone(), format!(
                        "the orbit from x = {start} oscillates away from {anchor} (slope {slope})"
                    )));
                }
            }
            PieceRule::Quadratic { coeff } if !coeff.is_zero() => {
                if coeff.is_positive() && matches!(iv.hi(), Endpoint::Unbounded) {
                    let mut floor = coeff.recip();
                    if let Some(l) = iv.lo().value() {
                        floor = floor.max(l.clone());
                    }
                    let start = &floor + &Rat::one();
                    return Some((start.clone(), format!(
                        "the orbit from x = {start} outgrows every bound on the piece {iv} (rule {})",
                        piece.rule
                    )));
                }
                if coeff.is_negative() && matches!(iv.lo(), Endpoint::Unbounded) {
                    let mut ceiling = coeff.recip();
                    if let Some(h) = iv.hi().value() {
                        ceiling = ceiling.min(h.clone());
                    }
                    let start = &ceiling - &Rat::one();
                    return Some((start.clone(), format!(
                        "the orbit from x = {start} sinks below every bound on the piece {iv} (rule {})",
                        piece.rule
                    )));
                }
            }
            _ => {}
        }
    }
    None
}

/// Checks that a probed orbit backs a claimed limit: the orbit must
/// converge, pass Cauchy detection, and its final value must sit inside
/// every probe entourage around the limit.
fn corroborate_probe(inp: &ClassifyInputs, start: &Rat, limit: &Rat) -> Result<(), String> {
    let orbit = inp.map.orbit_f64(start.to_f64(), inp.budget, inp.stop);
    if orbit.status != OrbitStatus::Converged {
        return Err(format!(
            "internal inconsistency: the licensed route predicts convergence from {start}, but the probe orbit ended with status {:?} (is the declared sequential-completeness flag right?)",
            orbit.status
        ));
    }
    if !inp.probe_basis.is_empty()
        && !detect_cauchy_f64(&orbit, inp.family, inp.probe_basis, inp.window).is_cauchy()
    {
        return Err(format!(
            "internal inconsistency: the probe orbit from {start} converged numerically but never passed Cauchy detection in the probe entourages"
        ));
    }
    let last = *orbit.values.last().expect("orbit records its start");
    let near = if inp.probe_basis.is_empty() {
        (last - limit.to_f64()).abs() <= 1e-6
    } else {
        inp.probe_basis
            .iter()
            .all(|v| v.contains_f64(inp.family, last, limit.to_f64()))
    };
    if !near {
        return Err(format!(
            "internal inconsistency: the probe orbit from {start} settled at {last}, not at the certified limit {limit}"
        ));
    }
    Ok(())
}

fn classify_real(
    inp: &ClassifyInputs,
    domain: &RealSet,
    _grid: &[Rat],
) -> Result<ClassificationReport, String> {
    let mut notes = Vec::new();
    let mut heuristic = false;
    let route = pick_route(inp, inp.sequentially_complete, &mut notes);
    if let Some(n) = &inp.profile.property_star.note {
        notes.push(n.clone());
    }

    let (fix_set, quad_skipped) = inp.map.fixed_points_real();
    if quad_skipped {
        heuristic = true;
        notes.push(
            "quadratic pieces present: their fixed points are not included in the exact set"
                .to_string(),
        );
    }
    let (x_t_set, x_t_exact) = inp.graph.x_t_real(inp.map);
    if !x_t_exact {
        heuristic = true;
        notes.push("X_T could not be solved exactly on every piece".to_string());
    }
    let fixed_points = SetDescription::real(fix_set.clone(), !quad_skipped);
    let x_t = SetDescription::real(x_t_set.clone(), x_t_exact);

    let kind = inp.graph.real_kind().expect("real carrier requires a real graph");
    // The only multi-point component the predicate kinds admit: the
    // whole domain, or the order region. Everything else is a singleton.
    let main_component: Option<RealSet> = match kind {
        RealGraphKind::Complete => Some(domain.clone()),
        RealGraphKind::Diagonal => None,
        RealGraphKind::OrderLeq { order, .. } | RealGraphKind::OrderComparable { order } => {
            match order {
                RealOrder::GlobalLeq => Some(domain.clone()),
                RealOrder::IntervalOrder { region } => Some(region.intersect(domain)),
            }
        }
    };

    let mut components_meeting_x_t = Vec::new();
    if let Some(mc) = &main_component {
        if !x_t_set.intersect(mc).is_empty() {
            components_meeting_x_t.push(mc.to_string());
        }
    }
    let leftovers = match &main_component {
        Some(mc) => x_t_set.subtract(mc),
        None => x_t_set.clone(),
    };
    for p in leftovers.isolated_points() {
        components_meeting_x_t.push(format!("{{{p}}}"));
    }
    if leftovers.has_positive_length() {
        components_meeting_x_t
            .push(format!("every point of {} is its own component", leftovers));
    }

    // Restricted verdicts for the representative components.
    let mut restricted = Vec::new();
    if let Some(r) = route {
        if let Some(mc) = &main_component {
            if !mc.is_empty() {
                if let Some(cv) = restricted_on_main(inp, r, mc, &fix_set, &mut heuristic)? {
                    restricted.push(cv);
                }
            }
        }
        // Isolated fixed points outside the main component are singleton
        // components; the restriction there is trivially Picard.
        let outside_fix = match &main_component {
            Some(mc) => fix_set.subtract(mc),
            None => fix_set.clone(),
        };
        for p in outside_fix.isolated_points() {
            restricted.push(ComponentVerdict {
                description: format!("{{{p}}}"),
                members: None,
                hypothesis: format!("T({p}) = {p} is a fixed point, so the loop puts it in X_T"),
                converges: TriState::Holds,
                x_star: Some(p.to_string()),
                x_star_in_component: Some(true),
                restricted_picard: TriState::Holds,
                notes: Vec::new(),
            });
        }
        if matches!(kind, RealGraphKind::Diagonal)
            || matches!(
                kind,
                RealGraphKind::OrderLeq { order: RealOrder::IntervalOrder { .. }, .. }
                    | RealGraphKind::OrderComparable { order: RealOrder::IntervalOrder { .. } }
            )
        {
            notes.push(
                "singleton components away from fixed points carry no fixed point and are omitted"
                    .to_string(),
            );
        }
    }

    // Global verdicts.
    let fix_count = if fix_set.has_positive_length() {
        None
    } else {
        Some(fix_set.isolated_points().count())
    };
    let escape = escape_certificate(inp.map);
    let connected = inp.graph.is_weakly_connected_real(domain);

    let picard = if quad_skipped {
        TriState::NotDetermined
    } else {
        match fix_count {
            None => TriState::Violated(format!("fixed points form a stretch: {fix_set}")),
            Some(0) => TriState::Violated("T has no fixed point".to_string()),
            Some(1) => {
                let x_star = fix_set.single_point().expect("one isolated point").clone();
                if route.is_some() && connected {
                    for probe in inp.probes.iter().filter(|p| domain.contains(p)) {
                        corroborate_probe(inp, probe, &x_star)?;
                    }
                    TriState::Holds
                } else if let Some((start, why)) = &escape {
                    if domain.contains(start) {
                        TriState::Violated(why.clone())
                    } else {
                        TriState::NotDetermined
                    }
                } else {
                    TriState::NotDetermined
                }
            }
            Some(k) => TriState::Violated(format!("Fix(T) = {fix_set} has {k} members")),
        }
    };

    let weakly_picard = if let Some((start, why)) = &escape {
        if domain.contains(start) {
            TriState::Violated(why.clone())
        } else {
            TriState::NotDetermined
        }
    } else if picard.holds() {
        TriState::Holds
    } else if route.is_some() && full_cover(inp, kind, domain, &x_t_set, &fix_set, route.unwrap())
    {
        // every component satisfies the per-component hypothesis, so the
        // route's weak-Picard assertion covers the whole carrier
        for probe in inp.probes.iter().filter(|p| domain.contains(p)) {
            let orbit = inp.map.orbit_f64(probe.to_f64(), inp.budget, inp.stop);
            if orbit.status != OrbitStatus::Converged {
                return Err(format!(
                    "internal inconsistency: the licensed route predicts every orbit converges, but the probe from {probe} reports {:?}",
                    orbit.status
                ));
            }
        }
        TriState::Holds
    } else {
        TriState::NotDetermined
    };

    Ok(ClassificationReport {
        route,
        fixed_points,
        x_t,
        components_meeting_x_t,
        cardinality_check: None,
        picard,
        weakly_picard,
        restricted,
        heuristic,
        notes,
    })
}

/// Does the route's "weakly Picard on all of X" hypothesis hold
/// everywhere? main2/main4 need X_T = X; main3 needs Tx ∈ [x]_G̃ for
/// every x, which the predicate kinds decide exactly.
fn full_cover(
    inp: &ClassifyInputs,
    kind: &RealGraphKind,
    domain: &RealSet,
    x_t: &RealSet,
    fix: &RealSet,
    route: TheoremRoute,
) -> bool {
    match route {
        TheoremRoute::Main2 | TheoremRoute::Main4 => domain.is_subset_of(x_t),
        TheoremRoute::Main3 => match kind {
            RealGraphKind::Complete => true,
            // diagonal: [x] = {x}, so Tx ∈ [x] means every point is fixed
            RealGraphKind::Diagonal => domain.is_subset_of(fix),
            RealGraphKind::OrderLeq { order, .. } | RealGraphKind::OrderComparable { order } => {
                match order {
                    RealOrder::GlobalLeq => true,
                    RealOrder::IntervalOrder { region } => {
                        let inside = region.intersect(domain);
                        let outside = domain.subtract(region);
                        image_of_set(inp.map, &inside).is_subset_of(&inside)
                            && outside.is_subset_of(fix)
                    }
                }
            }
        },
    }
}

/// Restricted verdict on the one multi-point component.
fn restricted_on_main(
    inp: &ClassifyInputs,
    route: TheoremRoute,
    mc: &RealSet,
    fix_set: &RealSet,
    heuristic: &mut bool,
) -> Result<Option<ComponentVerdict>, String> {
    let (x_t_set, _) = inp.graph.x_t_real(inp.map);
    let hypothesis = match route {
        TheoremRoute::Main2 | TheoremRoute::Main4 => {
            let meet = x_t_set.intersect(mc);
            match sample_points(&meet).first() {
                Some(w) => format!("{w} is in X_T"),
                None => return Ok(None),
            }
        }
        TheoremRoute::Main3 => {
            if image_of_set(inp.map, mc).intersect(mc).is_empty() {
                return Ok(None);
            }
            // prefer a probe witness for the report
            let witness = inp
                .probes
                .iter()
                .chain(sample_points(mc).iter())
                .find(|x| {
                    mc.contains(x)
                        && inp.map.eval_rat(x).is_some_and(|tx| mc.contains(&tx))
                })
                .cloned();
            match witness {
                Some(w) => {
                    let tw = inp.map.eval_rat(&w).expect("witness is in the domain");
                    format!("T({w}) = {tw} stays in the component")
                }
                None => "T maps part of the component into itself".to_string(),
            }
        }
    };

    let mut cv_notes = Vec::new();
    let (converges, x_star) = match attracting_target(inp.map, mc, 8) {
        Some(anchor) => {
            cv_notes.push(format!(
                "certified by an invariant contracting piece: every orbit from the component converges to {anchor}"
            ));
            (TriState::Holds, Some(anchor))
        }
        None => {
            // probe fallback: consistent snapped limits, labeled heuristic
            let mut snapped: Vec<Rat> = Vec::new();
            let mut failed = false;
            for probe in inp.probes.iter().filter(|p| mc.contains(p)) {
                let orbit = inp.map.orbit_f64(probe.to_f64(), inp.budget, inp.stop);
                if orbit.status != OrbitStatus::Converged {
                    failed = true;
                    break;
                }
                let last = *orbit.values.last().expect("orbit records its start");
                match fix_set.isolated_points().find(|p| (p.to_f64() - last).abs() < 1e-6) {
                    Some(p) => snapped.push(p.clone()),
                    None => {
                        failed = true;
                        break;
                    }
                }
            }
            snapped.dedup();
            match (failed, snapped.as_slice()) {
                (false, [single]) => {
                    *heuristic = true;
                    cv_notes.push(
                        "limit identified by probe orbits only (no invariant-piece certificate)"
                            .to_string(),
                    );
                    (TriState::Holds, Some(single.clone()))
                }
                _ => {
                    if route == TheoremRoute::Main2 {
                        return Err(
                            "internal inconsistency: main2 guarantees a common in-component limit, but probes could not corroborate one".to_string(),
                        );
                    }
                    cv_notes.push(
                        "the route guarantees a common limit, but neither certificates nor probes could identify it"
                            .to_string(),
                    );
                    (TriState::NotDetermined, None)
                }
            }
        }
    };

    if let Some(xs) = &x_star {
        for probe in inp.probes.iter().filter(|p| mc.contains(p)) {
            corroborate_probe(inp, probe, xs)?;
        }
        if !fix_set.contains(xs) {
            return Err(format!(
                "internal inconsistency: the certified limit {xs} is not a fixed point"
            ));
        }
    }

    let in_comp = x_star.as_ref().map(|xs| mc.contains(xs));
    let restricted_picard = match (&converges, in_comp) {
        (TriState::Holds, Some(true)) => {
            let inside = fix_set.intersect(mc);
            if inside.has_positive_length() || inside.isolated_points().count() > 1 {
                TriState::Violated("several fixed points inside the component".to_string())
            } else {
                TriState::Holds
            }
        }
        (TriState::Holds, Some(false)) => TriState::Violated(format!(
            "the common limit {} lies outside the component",
            x_star.as_ref().expect("in_comp implies x_star")
        )),
        _ => TriState::NotDetermined,
    };
    if route == TheoremRoute::Main2 && converges.holds() && in_comp == Some(false) {
        return Err(
            "internal inconsistency: main2 places the restricted limit inside its component, but the certified limit is outside".to_string(),
        );
    }

    Ok(Some(ComponentVerdict {
        description: mc.to_string(),
        members: None,
        hypothesis,
        converges,
        x_star: x_star.map(|x| x.to_string()),
        x_star_in_component: in_comp,
        restricted_picard,
        notes: cv_notes,
    }))
}

// ---------------------------------------------------------------------
// constructions used by the theorem oracles
// ---------------------------------------------------------------------

/// The disconnection counterexample: send the component of `x0` to `x0`
/// and everything else to `y0`. On a disconnected graph this is a
/// Banach G-contraction for every α (edges collapse onto loops) with
/// two fixed points.
pub fn build_disconnection_counterexample(
    graph: &DirectedGraph,
    x0: usize,
    y0: usize,
) -> Result<SelfMap, String> {
    let n = graph
        .n()
        .ok_or_else(|| "the counterexample construction needs a finite graph".to_string())?;
    if x0 >= n || y0 >= n {
        return Err(format!("vertices {x0}, {y0} out of range for |X| = {n}"));
    }
    let comp = graph.component_idx(x0);
    if comp.contains(&y0) {
        return Err(format!(
            "{y0} lies in the component of {x0}: the graph is not disconnected between them"
        ));
    }
    let image = (0..n)
        .map(|v| if comp.contains(&v) { x0 } else { y0 })
        .collect();
    Ok(SelfMap::Table { image })
}

/// Finite-scale check of the dense-convergence extension: if orbits
/// from `a` all settle at `x_star`, discrete equicontinuity upgrades
/// this to every start. On a finite separated carrier the closure of a
/// dense set is the whole space, so the check verifies settling from
/// every point (and that `a` indeed settles there).
pub fn check_equicontinuity_extension(
    map: &SelfMap,
    family: &PseudometricFamily,
    carrier: &Carrier,
    a: &[usize],
    x_star: usize,
) -> bool {
    let n = match carrier {
        Carrier::Finite { points } => points.len(),
        Carrier::Real { .. } => panic!("the extension check is finite-scale only"),
    };
    if !family.is_separating(carrier) {
        return false;
    }
    if a.iter().any(|&x| settle_target(map, x, n) != Some(x_star)) {
        return false;
    }
    (0..n).all(|x| settle_target(map, x, n) == Some(x_star))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::analysis::continuity::build_profile;
    use crate::analysis::contraction::check_contraction;
    use crate::map::three_branch_example;
    use crate::rat::rat;
    use crate::space::Pseudometric;

    fn abs_family() -> PseudometricFamily {
        PseudometricFamily::new(vec![Pseudometric::scaled_abs("abs", Rat::one())])
    }

    fn paper_region() -> RealSet {
        RealSet::single("[1, 4]".parse().unwrap()).remove_point(&rat("5/2"))
    }

    fn paper_graph() -> DirectedGraph {
        DirectedGraph::real(RealGraphKind::OrderLeq {
            order: RealOrder::IntervalOrder { region: paper_region() },
            flipped: false,
        })
    }

    fn classify_paper_example() -> ClassificationReport {
        let map = three_branch_example();
        let graph = paper_graph();
        let family = abs_family();
        let carrier = Carrier::Real {
            domain: RealSet::all(),
            grid: vec![rat("-1"), rat("0"), rat("3"), rat("4")],
        };
        let stop = StopRule::default();
        let profile =
            build_profile(&map, &graph, &family, &carrier, None, &stop, 10_000).unwrap();
        let verdict = check_contraction(&map, &graph, &family, &carrier);
        assert!(verdict.is_contraction);
        let probes = vec![rat("3"), rat("4"), rat("-1"), rat("0")];
        let probe_basis = vec![BasicEntourage::single(0, rat("1/1000000"))];
        classify(&ClassifyInputs {
            map: &map,
            graph: &graph,
            family: &family,
            carrier: &carrier,
            profile: &profile,
            verdict: &verdict,
            probes: &probes,
            probe_basis: &probe_basis,
            sequentially_complete: true,
            stop: &stop,
            budget: 10_000,
            window: 16,
        })
        .unwrap()
    }

    #[test]
    fn paper_example_classification() {
        let report = classify_paper_example();
        assert_eq!(report.route, Some(TheoremRoute::Main3));
        let fix = report.fixed_points.real.as_ref().unwrap();
        let expected: RealSet = [rat("0"), rat("5/2"), rat("5")]
            .into_iter()
            .fold(RealSet::empty(), |acc, p| acc.union(&RealSet::point(p)));
        assert_eq!(fix, &expected);
        assert!(report.fixed_points.exact);
        assert!(report.picard.violated(), "{}", report.picard);
        assert!(report.weakly_picard.violated(), "{}", report.weakly_picard);
        assert!(!report.heuristic);

        // the region component: orbits converge to 5/2, which it omits
        let region = report
            .restricted
            .iter()
            .find(|cv| cv.description == paper_region().to_string())
            .expect("region component analyzed");
        assert_eq!(region.converges, TriState::Holds);
        assert_eq!(region.x_star.as_deref(), Some("5/2"));
        assert_eq!(region.x_star_in_component, Some(false));
        assert!(region.restricted_picard.violated());

        // singleton fixed components are trivially Picard
        for p in ["0", "5/2", "5"] {
            let cv = report
                .restricted
                .iter()
                .find(|cv| cv.description == format!("{{{p}}}"))
                .unwrap_or_else(|| panic!("singleton {{{p}}} analyzed"));
            assert_eq!(cv.restricted_picard, TriState::Holds);
        }
    }

    #[test]
    fn x_t_of_the_paper_example() {
        let map = three_branch_example();
        let (x_t, exact) = paper_graph().x_t_real(&map);
        assert!(exact);
        // loops put every fixed point in X_T; the order contributes [1, 5/2)
        let expected = RealSet::single("[1, 5/2)".parse().unwrap())
            .union(&RealSet::point(rat("0")))
            .union(&RealSet::point(rat("5/2")))
            .union(&RealSet::point(rat("5")));
        assert_eq!(x_t, expected);
    }

    #[test]
    fn two_pair_counterexample_is_weakly_but_not_picard() {
        // a - b and c - d, distances 1 inside pairs and 2 across
        let carrier = Carrier::finite_from_labels(["a", "b", "c", "d"]);
        let rows = vec![
            vec![rat("0"), rat("1"), rat("2"), rat("2")],
            vec![rat("1"), rat("0"), rat("2"), rat("2")],
            vec![rat("2"), rat("2"), rat("0"), rat("1")],
            vec![rat("2"), rat("2"), rat("1"), rat("0")],
        ];
        let family = PseudometricFamily::new(vec![Pseudometric::table("d", rows)]);
        let (graph, _) = DirectedGraph::finite(4, [(0, 1), (1, 0), (2, 3), (3, 2)]);
        let map = build_disconnection_counterexample(&graph, 0, 2).unwrap();
        assert_eq!(map, SelfMap::Table { image: vec![0, 0, 2, 2] });

        let verdict = check_contraction(&map, &graph, &family, &carrier);
        assert!(verdict.is_contraction);
        let stop = StopRule::default();
        let profile =
            build_profile(&map, &graph, &family, &carrier, None, &stop, 100).unwrap();
        let report = classify(&ClassifyInputs {
            map: &map,
            graph: &graph,
            family: &family,
            carrier: &carrier,
            profile: &profile,
            verdict: &verdict,
            probes: &[],
            probe_basis: &[],
            sequentially_complete: true,
            stop: &stop,
            budget: 100,
            window: 16,
        })
        .unwrap();
        assert_eq!(report.route, Some(TheoremRoute::Main2));
        assert!(report.picard.violated());
        assert_eq!(report.weakly_picard, TriState::Holds);
        assert_eq!(report.cardinality_check, Some(true));
        assert_eq!(report.restricted.len(), 2);
        assert!(report.restricted.iter().all(|cv| cv.restricted_picard.holds()));
    }

    #[test]
    fn connected_constant_map_is_picard() {
        let carrier = Carrier::finite_from_labels(["a", "b", "c"]);
        let rows = vec![
            vec![rat("0"), rat("1"), rat("2")],
            vec![rat("1"), rat("0"), rat("1")],
            vec![rat("2"), rat("1"), rat("0")],
        ];
        let family = PseudometricFamily::new(vec![Pseudometric::table("d", rows)]);
        let (graph, _) = DirectedGraph::finite(3, [(0, 1), (1, 0), (1, 2), (2, 1)]);
        let map = SelfMap::Table { image: vec![1, 1, 1] };
        let verdict = check_contraction(&map, &graph, &family, &carrier);
        assert!(verdict.is_contraction);
        let stop = StopRule::default();
        let profile =
            build_profile(&map, &graph, &family, &carrier, None, &stop, 100).unwrap();
        let report = classify(&ClassifyInputs {
            map: &map,
            graph: &graph,
            family: &family,
            carrier: &carrier,
            profile: &profile,
            verdict: &verdict,
            probes: &[],
            probe_basis: &[],
            sequentially_complete: true,
            stop: &stop,
            budget: 100,
            window: 16,
        })
        .unwrap();
        assert_eq!(report.picard, TriState::Holds);
        assert_eq!(report.weakly_picard, TriState::Holds);
        assert_eq!(report.cardinality_check, Some(true));
    }

    #[test]
    fn equicontinuity_extension_finite_scale() {
        let carrier = Carrier::finite_from_labels(["a", "b", "c"]);
        let rows = vec![
            vec![rat("0"), rat("1"), rat("2")],
            vec![rat("1"), rat("0"), rat("1")],
            vec![rat("2"), rat("1"), rat("0")],
        ];
        let family = PseudometricFamily::new(vec![Pseudometric::table("d", rows)]);
        let constant = SelfMap::Table { image: vec![1, 1, 1] };
        assert!(check_equicontinuity_extension(&constant, &family, &carrier, &[0], 1));
        assert!(check_equicontinuity_extension(&constant, &family, &carrier, &[0, 1, 2], 1));
        // a 2-cycle never settles: the contraction hypothesis matters
        let swap = SelfMap::Table { image: vec![1, 0, 2] };
        assert!(!check_equicontinuity_extension(&swap, &family, &carrier, &[0, 1, 2], 2));
        assert!(!check_equicontinuity_extension(&swap, &family, &carrier, &[2], 2));
    }

    #[test]
    fn counterexample_construction_guards() {
        let (connected, _) = DirectedGraph::finite(3, [(0, 1), (1, 2)]);
        assert!(build_disconnection_counterexample(&connected, 0, 2).is_err());
        let (split, _) = DirectedGraph::finite(4, [(0, 1), (2, 3)]);
        let map = build_disconnection_counterexample(&split, 0, 3).unwrap();
        assert_eq!(map, SelfMap::Table { image: vec![0, 0, 3, 3] });
        assert_eq!(map.fixed_point_indices(), vec![0, 3]);
    }

    #[test]
    fn escape_and_attracting_certificates() {
        let map = three_branch_example();
        let (start, _) = escape_certificate(&map).expect("slope-2 ray escapes");
        let orbit = map.orbit_f64(start.to_f64(), 10_000, &StopRule::default());
        assert_eq!(orbit.status, OrbitStatus::Diverged);
        // the middle piece attracts the whole punctured region
        let target = attracting_target(&map, &paper_region(), 8).expect("certificate");
        assert_eq!(target, rat("5/2"));
        // but nothing attracts a set that meets the escaping ray
        let below = RealSet::single("(-inf, 0)".parse().unwrap());
        assert_eq!(attracting_target(&map, &below, 8), None);
    }
}
