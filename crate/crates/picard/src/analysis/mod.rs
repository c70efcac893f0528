//! Property checks for self-maps: contraction certificates, continuity
//! profiles, Cauchy detection on orbits, path-weight bounds, and the
//! Picard / weakly-Picard classification that ties them together.
//!
//! Finite carriers are decided exactly. Real-line carriers are decided
//! exactly wherever the piecewise algebra allows it; the few verdicts
//! that fall back to sampling carry an explicit `heuristic` flag.

pub mod cauchy;
pub mod classify;
pub mod continuity;
pub mod contraction;
pub mod path_bound;

use crate::interval::{Endpoint, Interval, RealSet};
use crate::map::{Piece, PieceRule, SelfMap};
use crate::rat::Rat;
use serde::{Deserialize, Serialize};
use std::fmt;

/// Outcome of a single property check. `Violated` carries a rendered
/// witness; `NotDetermined` is the honest answer when neither a proof
/// nor a counterexample was found.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case", tag = "state", content = "witness")]
pub enum TriState {
    Holds,
    Violated(String),
    NotDetermined,
}

impl TriState {
    pub fn holds(&self) -> bool {
        matches!(self, TriState::Holds)
    }

    pub fn violated(&self) -> bool {
        matches!(self, TriState::Violated(_))
    }
}

impl fmt::Display for TriState {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            TriState::Holds => write!(f, "holds"),
            TriState::Violated(w) => write!(f, "violated ({w})"),
            TriState::NotDetermined => write!(f, "not-determined"),
        }
    }
}

/// One-sided limits and membership data at a piece boundary `at`,
/// with accumulation judged against a reference set `s` (the domain for
/// plain continuity, the edge-carrying set for contraction ratios).
#[derive(Clone, Debug)]
pub(crate) struct BoundaryProbe {
    pub at: Rat,
    /// `s` accumulates at `at` from below / above.
    pub acc_left: bool,
    pub acc_right: bool,
    /// `at` itself belongs to `s`.
    pub member: bool,
    /// Limit of the rule governing points just below / above `at`;
    /// None when no piece reaches that side.
    pub left_limit: Option<Rat>,
    pub right_limit: Option<Rat>,
    /// T(at) when `at` is in the map's domain.
    pub value: Option<Rat>,
}

/// Probes every finite piece endpoint of `map` against the set `s`.
pub(crate) fn boundary_probes(map: &SelfMap, s: &RealSet) -> Vec<BoundaryProbe> {
    map.boundary_points()
        .into_iter()
        .map(|c| {
            let left = map
                .pieces()
                .iter()
                .find(|p| p.interval.accumulates_left(&c))
                .map(|p| p.rule.eval_rat(&c));
            let right = map
                .pieces()
                .iter()
                .find(|p| p.interval.accumulates_right(&c))
                .map(|p| p.rule.eval_rat(&c));
            BoundaryProbe {
                acc_left: s.accumulates_left(&c),
                acc_right: s.accumulates_right(&c),
                member: s.contains(&c),
                left_limit: left,
                right_limit: right,
                value: map.eval_rat(&c),
                at: c,
            }
        })
        .collect()
}

/// A rational point inside a nonempty interval.
pub(crate) fn sample_in(iv: &Interval) -> Rat {
    match (iv.lo().value(), iv.hi().value()) {
        (Some(a), Some(b)) => (a + b) / &Rat::int(2),
        (Some(a), None) => a + &Rat::one(),
        (None, Some(b)) => b - &Rat::one(),
        (None, None) => Rat::zero(),
    }
}

/// Two distinct rational points x < y inside an interval, when it has them.
pub(crate) fn sample_pair(iv: &Interval) -> Option<(Rat, Rat)> {
    if iv.as_point().is_some() {
        return None;
    }
    let (x, y) = match (iv.lo().value(), iv.hi().value()) {
        (Some(a), Some(b)) => {
            let w = b - a;
            (a + &(&w / &Rat::int(3)), a + &(&(&w * &Rat::int(2)) / &Rat::int(3)))
        }
        (Some(a), None) => (a + &Rat::one(), a + &Rat::int(2)),
        (None, Some(b)) => (b - &Rat::int(2), b - &Rat::one()),
        (None, None) => (Rat::zero(), Rat::one()),
    };
    Some((x, y))
}

/// A few rational sample points from every run of the set: attained
/// endpoints, midpoints, isolated points.
pub(crate) fn sample_points(s: &RealSet) -> Vec<Rat> {
    let mut out = Vec::new();
    for iv in s.intervals() {
        if let Some(p) = iv.as_point() {
            out.push(p.clone());
            continue;
        }
        if let Endpoint::Incl(a) = iv.lo() {
            out.push(a.clone());
        }
        if let Endpoint::Incl(b) = iv.hi() {
            out.push(b.clone());
        }
        out.push(sample_in(iv));
        if let Some((x, y)) = sample_pair(iv) {
            out.push(x);
            out.push(y);
        }
    }
    out.sort();
    out.dedup();
    out
}

/// Exact image T(s) for a piecewise map: the union of per-piece images
/// of `s` clipped to each piece.
pub fn image_of_set(map: &SelfMap, s: &RealSet) -> RealSet {
    let mut out = RealSet::empty();
    for piece in map.pieces() {
        let clipped = s.intersect(&RealSet::single(piece.interval.clone()));
        if !clipped.is_empty() {
            out = out.union(&piece.rule.image_of(&clipped));
        }
    }
    out
}

/// Marches from the chosen end of `run` toward its interior, returning
/// the first sample where `pred(rule(x))` holds. The callers use this to
/// turn a limit argument ("values near the end exceed t") into a concrete
/// rational witness; the predicate is guaranteed true sufficiently close
/// to the end, so the halving loop terminates long before 128 rounds.
pub(crate) fn approach_end(
    rule: &PieceRule,
    run: &Interval,
    from_hi: bool,
    pred: impl Fn(&Rat) -> bool,
) -> Option<Rat> {
    let (anchor, attained, inward) = if from_hi {
        match run.hi() {
            Endpoint::Incl(b) => (b.clone(), true, -Rat::one()),
            Endpoint::Excl(b) => (b.clone(), false, -Rat::one()),
            Endpoint::Unbounded => {
                // no finite anchor: march outward from an interior sample
                let mut x = sample_in(run);
                for _ in 0..128 {
                    if pred(&rule.eval_rat(&x)) {
                        return Some(x);
                    }
                    x = if x >= 1 { &x * &Rat::int(2) } else { &x + &Rat::one() };
                }
                return None;
            }
        }
    } else {
        match run.lo() {
            Endpoint::Incl(a) => (a.clone(), true, Rat::one()),
            Endpoint::Excl(a) => (a.clone(), false, Rat::one()),
            Endpoint::Unbounded => {
                let mut x = sample_in(run);
                for _ in 0..128 {
                    if pred(&rule.eval_rat(&x)) {
                        return Some(x);
                    }
                    x = if x <= -1 { &x * &Rat::int(2) } else { &x - &Rat::one() };
                }
                return None;
            }
        }
    };
    if attained && pred(&rule.eval_rat(&anchor)) {
        return Some(anchor);
    }
    let mut delta = match (run.lo().value(), run.hi().value()) {
        (Some(a), Some(b)) => (b - a) / &Rat::int(2),
        _ => Rat::one(),
    };
    for _ in 0..128 {
        let x = &anchor + &(&inward * &delta);
        if run.contains(&x) && pred(&rule.eval_rat(&x)) {
            return Some(x);
        }
        delta = &delta / &Rat::int(2);
    }
    None
}

/// Pieces of the map ordered left to right on the line.
pub(crate) fn pieces_sorted(map: &SelfMap) -> Vec<&Piece> {
    let mut ps: Vec<&Piece> = map.pieces().iter().collect();
    ps.sort_by(|a, b| crate::interval::cmp_lo(a.interval.lo(), b.interval.lo()));
    ps
}
