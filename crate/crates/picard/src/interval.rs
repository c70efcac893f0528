//! Exact interval sets on the rational line.
//!
//! Components of predicate graphs, `X_T` descriptions, and fixed-point
//! sets on the real-line carrier are all finite unions of intervals with
//! rational endpoints, possibly punctured at finitely many points
//! (`[1, 4] \ {5/2}` is the canonical example). [`RealSet`] is that
//! Boolean algebra: normalized, exact, and order-canonical, so set
//! equality is structural equality.

use crate::rat::Rat;
use serde::{Deserialize, Serialize};
use std::cmp::Ordering;
use std::fmt;
use std::str::FromStr;

/// One end of an interval.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(tag = "kind", content = "value", rename_all = "kebab-case")]
pub enum Endpoint {
    Unbounded,
    Incl(Rat),
    Excl(Rat),
}

impl Endpoint {
    pub fn value(&self) -> Option<&Rat> {
        match self {
            Endpoint::Unbounded => None,
            Endpoint::Incl(r) | Endpoint::Excl(r) => Some(r),
        }
    }
}

/// A nonempty interval with rational or unbounded endpoints.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Interval {
    lo: Endpoint,
    hi: Endpoint,
}

/// Position ordering for lower bounds: `Unbounded < Incl(a) < Excl(a)`,
/// then by value.
pub(crate) fn cmp_lo(a: &Endpoint, b: &Endpoint) -> Ordering {
    match (a, b) {
        (Endpoint::Unbounded, Endpoint::Unbounded) => Ordering::Equal,
        (Endpoint::Unbounded, _) => Ordering::Less,
        (_, Endpoint::Unbounded) => Ordering::Greater,
        _ => {
            let (va, vb) = (a.value().unwrap(), b.value().unwrap());
            va.cmp(vb).then_with(|| match (a, b) {
                (Endpoint::Incl(_), Endpoint::Excl(_)) => Ordering::Less,
                (Endpoint::Excl(_), Endpoint::Incl(_)) => Ordering::Greater,
                _ => Ordering::Equal,
            })
        }
    }
}

/// Position ordering for upper bounds: `Excl(a) < Incl(a)`, then by
/// value, with `Unbounded` greatest.
pub(crate) fn cmp_hi(a: &Endpoint, b: &Endpoint) -> Ordering {
    match (a, b) {
        (Endpoint::Unbounded, Endpoint::Unbounded) => Ordering::Equal,
        (Endpoint::Unbounded, _) => Ordering::Greater,
        (_, Endpoint::Unbounded) => Ordering::Less,
        _ => {
            let (va, vb) = (a.value().unwrap(), b.value().unwrap());
            va.cmp(vb).then_with(|| match (a, b) {
                (Endpoint::Excl(_), Endpoint::Incl(_)) => Ordering::Less,
                (Endpoint::Incl(_), Endpoint::Excl(_)) => Ordering::Greater,
                _ => Ordering::Equal,
            })
        }
    }
}

impl Interval {
    /// Builds an interval, returning `None` when the bounds describe the
    /// empty set.
    pub fn new(lo: Endpoint, hi: Endpoint) -> Option<Self> {
        let nonempty = match (lo.value(), hi.value()) {
            (Some(a), Some(b)) => match a.cmp(b) {
                Ordering::Less => true,
                Ordering::Greater => false,
                Ordering::Equal => {
                    matches!(lo, Endpoint::Incl(_)) && matches!(hi, Endpoint::Incl(_))
                }
            },
            _ => true,
        };
        nonempty.then_some(Interval { lo, hi })
    }

    pub fn all() -> Self {
        Interval { lo: Endpoint::Unbounded, hi: Endpoint::Unbounded }
    }

    pub fn point(r: Rat) -> Self {
        Interval { lo: Endpoint::Incl(r.clone()), hi: Endpoint::Incl(r) }
    }

    pub fn closed(a: Rat, b: Rat) -> Self {
        Interval::new(Endpoint::Incl(a), Endpoint::Incl(b)).expect("empty closed interval")
    }

    pub fn lo(&self) -> &Endpoint {
        &self.lo
    }

    pub fn hi(&self) -> &Endpoint {
        &self.hi
    }

    pub fn as_point(&self) -> Option<&Rat> {
        match (&self.lo, &self.hi) {
            (Endpoint::Incl(a), Endpoint::Incl(b)) if a == b => Some(a),
            _ => None,
        }
    }

    pub fn is_bounded(&self) -> bool {
        self.lo.value().is_some() && self.hi.value().is_some()
    }

    pub fn contains(&self, x: &Rat) -> bool {
        let above = match &self.lo {
            Endpoint::Unbounded => true,
            Endpoint::Incl(a) => x >= a,
            Endpoint::Excl(a) => x > a,
        };
        let below = match &self.hi {
            Endpoint::Unbounded => true,
            Endpoint::Incl(b) => x <= b,
            Endpoint::Excl(b) => x < b,
        };
        above && below
    }

    /// Membership for floating-point probes; endpoint values are rounded
    /// to the nearest `f64` and compared with IEEE semantics.
    pub fn contains_f64(&self, x: f64) -> bool {
        let above = match &self.lo {
            Endpoint::Unbounded => true,
            Endpoint::Incl(a) => x >= a.to_f64(),
            Endpoint::Excl(a) => x > a.to_f64(),
        };
        let below = match &self.hi {
            Endpoint::Unbounded => true,
            Endpoint::Incl(b) => x <= b.to_f64(),
            Endpoint::Excl(b) => x < b.to_f64(),
        };
        above && below
    }

    pub fn intersect(&self, other: &Interval) -> Option<Interval> {
        let lo = if cmp_lo(&self.lo, &other.lo) == Ordering::Less {
            other.lo.clone()
        } else {
            self.lo.clone()
        };
        let hi = if cmp_hi(&self.hi, &other.hi) == Ordering::Less {
            self.hi.clone()
        } else {
            other.hi.clone()
        };
        Interval::new(lo, hi)
    }

    /// Exact image under `x -> slope*x + intercept`.
    pub fn affine_image(&self, slope: &Rat, intercept: &Rat) -> Interval {
        if slope.is_zero() {
            return Interval::point(intercept.clone());
        }
        let map_end = |e: &Endpoint| match e {
            Endpoint::Unbounded => Endpoint::Unbounded,
            Endpoint::Incl(r) => Endpoint::Incl(&(slope * r) + intercept),
            Endpoint::Excl(r) => Endpoint::Excl(&(slope * r) + intercept),
        };
        let (lo, hi) = if slope.is_positive() {
            (map_end(&self.lo), map_end(&self.hi))
        } else {
            (map_end(&self.hi), map_end(&self.lo))
        };
        Interval { lo, hi }
    }

    /// Does the interval contain points arbitrarily close to `c` from below?
    pub fn accumulates_left(&self, c: &Rat) -> bool {
        let lo_ok = match &self.lo {
            Endpoint::Unbounded => true,
            Endpoint::Incl(a) | Endpoint::Excl(a) => a < c,
        };
        let hi_ok = match &self.hi {
            Endpoint::Unbounded => true,
            Endpoint::Incl(b) | Endpoint::Excl(b) => b >= c,
        };
        lo_ok && hi_ok
    }

    /// Does the interval contain points arbitrarily close to `c` from above?
    pub fn accumulates_right(&self, c: &Rat) -> bool {
        let hi_ok = match &self.hi {
            Endpoint::Unbounded => true,
            Endpoint::Incl(b) | Endpoint::Excl(b) => b > c,
        };
        let lo_ok = match &self.lo {
            Endpoint::Unbounded => true,
            Endpoint::Incl(a) | Endpoint::Excl(a) => a <= c,
        };
        lo_ok && hi_ok
    }

    /// True when `self` and `next` form one contiguous stretch (overlap,
    /// or touch at a shared endpoint that at least one side includes).
    /// Assumes `self.lo <= next.lo` in lower-bound order.
    fn merges_with(&self, next: &Interval) -> bool {
        match (&self.hi, &next.lo) {
            (Endpoint::Unbounded, _) => true,
            (_, Endpoint::Unbounded) => true,
            _ => {
                let b = self.hi.value().unwrap();
                let a = next.lo.value().unwrap();
                match a.cmp(b) {
                    Ordering::Less => true,
                    Ordering::Greater => false,
                    Ordering::Equal => {
                        matches!(self.hi, Endpoint::Incl(_))
                            || matches!(next.lo, Endpoint::Incl(_))
                    }
                }
            }
        }
    }
}

impl fmt::Display for Interval {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if let Some(p) = self.as_point() {
            return write!(f, "{{{}}}", p);
        }
        match &self.lo {
            Endpoint::Unbounded => write!(f, "(-inf, ")?,
            Endpoint::Incl(a) => write!(f, "[{}, ", a)?,
            Endpoint::Excl(a) => write!(f, "({}, ", a)?,
        }
        match &self.hi {
            Endpoint::Unbounded => write!(f, "inf)"),
            Endpoint::Incl(b) => write!(f, "{}]", b),
            Endpoint::Excl(b) => write!(f, "{})", b),
        }
    }
}

/// Parse error for interval literals.
#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("invalid interval `{0}`")]
pub struct ParseIntervalError(pub String);

impl FromStr for Interval {
    type Err = ParseIntervalError;

    /// Accepts `[1, 4]`, `(4, inf)`, `(-inf, 1)`, `[0, 0]`.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let err = || ParseIntervalError(s.to_string());
        let t = s.trim();
        let lo_incl = match t.chars().next() {
            Some('[') => true,
            Some('(') => false,
            _ => return Err(err()),
        };
        let hi_incl = match t.chars().last() {
            Some(']') => true,
            Some(')') => false,
            _ => return Err(err()),
        };
        let inner = &t[1..t.len() - 1];
        let (a, b) = inner.split_once(',').ok_or_else(err)?;
        let parse_end = |tok: &str, incl: bool, is_lo: bool| -> Result<Endpoint, ParseIntervalError> {
            let tok = tok.trim();
            match tok {
                "inf" | "+inf" => {
                    if is_lo || incl {
                        Err(err())
                    } else {
                        Ok(Endpoint::Unbounded)
                    }
                }
                "-inf" => {
                    if !is_lo || incl {
                        Err(err())
                    } else {
                        Ok(Endpoint::Unbounded)
                    }
                }
                _ => {
                    let r: Rat = tok.parse().map_err(|_| err())?;
                    Ok(if incl { Endpoint::Incl(r) } else { Endpoint::Excl(r) })
                }
            }
        };
        let lo = parse_end(a, lo_incl, true)?;
        let hi = parse_end(b, hi_incl, false)?;
        Interval::new(lo, hi).ok_or_else(err)
    }
}

/// A finite union of disjoint intervals in canonical form.
///
/// Canonical means: sorted by lower bound, pairwise non-mergeable. Two
/// equal sets always have identical representations, so `==` is set
/// equality.
#[derive(Clone, Debug, PartialEq, Eq, Default, Serialize, Deserialize)]
pub struct RealSet {
    intervals: Vec<Interval>,
}

impl RealSet {
    pub fn empty() -> Self {
        RealSet { intervals: Vec::new() }
    }

    pub fn all() -> Self {
        RealSet { intervals: vec![Interval::all()] }
    }

    pub fn single(iv: Interval) -> Self {
        RealSet { intervals: vec![iv] }
    }

    pub fn point(r: Rat) -> Self {
        RealSet::single(Interval::point(r))
    }

    pub fn from_intervals(ivs: impl IntoIterator<Item = Interval>) -> Self {
        let mut intervals: Vec<Interval> = ivs.into_iter().collect();
        intervals.sort_by(|a, b| cmp_lo(&a.lo, &b.lo).then_with(|| cmp_hi(&a.hi, &b.hi)));
        let mut merged: Vec<Interval> = Vec::with_capacity(intervals.len());
        for iv in intervals {
            match merged.last_mut() {
                Some(last) if last.merges_with(&iv) => {
                    if cmp_hi(&iv.hi, &last.hi) == Ordering::Greater {
                        last.hi = iv.hi;
                    }
                }
                _ => merged.push(iv),
            }
        }
        RealSet { intervals: merged }
    }

    pub fn intervals(&self) -> &[Interval] {
        &self.intervals
    }

    pub fn is_empty(&self) -> bool {
        self.intervals.is_empty()
    }

    pub fn contains(&self, x: &Rat) -> bool {
        self.intervals.iter().any(|iv| iv.contains(x))
    }

    pub fn contains_f64(&self, x: f64) -> bool {
        self.intervals.iter().any(|iv| iv.contains_f64(x))
    }

    pub fn union(&self, other: &RealSet) -> RealSet {
        RealSet::from_intervals(self.intervals.iter().chain(&other.intervals).cloned())
    }

    pub fn intersect(&self, other: &RealSet) -> RealSet {
        let mut out = Vec::new();
        for a in &self.intervals {
            for b in &other.intervals {
                if let Some(iv) = a.intersect(b) {
                    out.push(iv);
                }
            }
        }
        RealSet::from_intervals(out)
    }

    /// Complement within the whole line.
    pub fn complement(&self) -> RealSet {
        let mut out = Vec::new();
        let mut cursor = Endpoint::Unbounded; // lower bound of the next gap
        for iv in &self.intervals {
            let gap_hi = match &iv.lo {
                Endpoint::Unbounded => None,
                Endpoint::Incl(a) => Some(Endpoint::Excl(a.clone())),
                Endpoint::Excl(a) => Some(Endpoint::Incl(a.clone())),
            };
            if let Some(hi) = gap_hi {
                if let Some(gap) = Interval::new(cursor.clone(), hi) {
                    out.push(gap);
                }
            }
            cursor = match &iv.hi {
                Endpoint::Unbounded => return RealSet::from_intervals(out),
                Endpoint::Incl(b) => Endpoint::Excl(b.clone()),
                Endpoint::Excl(b) => Endpoint::Incl(b.clone()),
            };
        }
        if let Some(tail) = Interval::new(cursor, Endpoint::Unbounded) {
            out.push(tail);
        }
        RealSet::from_intervals(out)
    }

    pub fn subtract(&self, other: &RealSet) -> RealSet {
        self.intersect(&other.complement())
    }

    pub fn remove_point(&self, p: &Rat) -> RealSet {
        self.subtract(&RealSet::point(p.clone()))
    }

    pub fn affine_image(&self, slope: &Rat, intercept: &Rat) -> RealSet {
        if slope.is_zero() && !self.is_empty() {
            return RealSet::point(intercept.clone());
        }
        RealSet::from_intervals(
            self.intervals.iter().map(|iv| iv.affine_image(slope, intercept)),
        )
    }

    pub fn is_subset_of(&self, other: &RealSet) -> bool {
        self.subtract(other).is_empty()
    }

    /// The isolated points of the set (degenerate intervals).
    pub fn isolated_points(&self) -> impl Iterator<Item = &Rat> {
        self.intervals.iter().filter_map(|iv| iv.as_point())
    }

    /// Does the set contain points arbitrarily close to `c` from below?
    pub fn accumulates_left(&self, c: &Rat) -> bool {
        self.intervals.iter().any(|iv| iv.accumulates_left(c))
    }

    /// Does the set contain points arbitrarily close to `c` from above?
    pub fn accumulates_right(&self, c: &Rat) -> bool {
        self.intervals.iter().any(|iv| iv.accumulates_right(c))
    }

    /// True when some member interval has more than one point.
    pub fn has_positive_length(&self) -> bool {
        self.intervals.iter().any(|iv| iv.as_point().is_none())
    }

    /// Some(p) when the whole set is the single point p.
    pub fn single_point(&self) -> Option<&Rat> {
        match self.intervals.as_slice() {
            [iv] => iv.as_point(),
            _ => None,
        }
    }

    /// Smallest interval containing the set, or None when empty.
    pub fn hull(&self) -> Option<Interval> {
        let first = self.intervals.first()?;
        let last = self.intervals.last()?;
        Some(Interval { lo: first.lo.clone(), hi: last.hi.clone() })
    }

    /// Decomposes a set of the shape "one interval minus finitely many
    /// interior points" into (hull, punctures). Sets with genuine gaps —
    /// anything other than adjacent open endpoints at a shared value —
    /// return None.
    pub fn punctured_hull(&self) -> Option<(Interval, Vec<Rat>)> {
        if self.intervals.is_empty() {
            return None;
        }
        let mut holes = Vec::new();
        for pair in self.intervals.windows(2) {
            match (&pair[0].hi, &pair[1].lo) {
                (Endpoint::Excl(b), Endpoint::Excl(a)) if a == b => holes.push(b.clone()),
                _ => return None,
            }
        }
        Some((self.hull().unwrap(), holes))
    }
}

impl fmt::Display for RealSet {
    /// Renders punctured stretches compactly: `[1, 4] \ {5/2}` instead of
    /// `[1, 5/2) U (5/2, 4]`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.intervals.is_empty() {
            return write!(f, "{{}}");
        }
        let mut parts: Vec<String> = Vec::new();
        let mut i = 0;
        while i < self.intervals.len() {
            let start = i;
            let mut holes: Vec<&Rat> = Vec::new();
            while i + 1 < self.intervals.len() {
                let (cur, next) = (&self.intervals[i], &self.intervals[i + 1]);
                match (&cur.hi, &next.lo) {
                    (Endpoint::Excl(b), Endpoint::Excl(a)) if a == b => {
                        holes.push(b);
                        i += 1;
                    }
                    _ => break,
                }
            }
            let span = Interval {
                lo: self.intervals[start].lo.clone(),
                hi: self.intervals[i].hi.clone(),
            };
            if holes.is_empty() {
                parts.push(span.to_string());
            } else {
                let hole_list =
                    holes.iter().map(|r| r.to_string()).collect::<Vec<_>>().join(", ");
                parts.push(format!("{} \\ {{{}}}", span, hole_list));
            }
            i += 1;
        }
        write!(f, "{}", parts.join(" U "))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rat::rat;

    fn iv(s: &str) -> Interval {
        s.parse().unwrap()
    }

    #[test]
    fn parses_and_displays_intervals() {
        assert_eq!(iv("[1, 4]").to_string(), "[1, 4]");
        assert_eq!(iv("(4, inf)").to_string(), "(4, inf)");
        assert_eq!(iv("(-inf, 1)").to_string(), "(-inf, 1)");
        assert_eq!(iv("[0, 0]").to_string(), "{0}");
        assert!("[inf, 2]".parse::<Interval>().is_err());
        assert!("[4, 1]".parse::<Interval>().is_err());
        assert!("(2, 2]".parse::<Interval>().is_err());
    }

    #[test]
    fn membership_respects_clusivity() {
        let h = iv("[1, 4)");
        assert!(h.contains(&rat("1")));
        assert!(h.contains(&rat("7/2")));
        assert!(!h.contains(&rat("4")));
        assert!(!h.contains(&rat("1/2")));
        assert!(h.contains_f64(3.9999));
        assert!(!h.contains_f64(4.0));
    }

    #[test]
    fn punctured_interval_normal_form() {
        let region = RealSet::single(iv("[1, 4]")).remove_point(&rat("5/2"));
        assert_eq!(region.intervals().len(), 2);
        assert_eq!(region.to_string(), "[1, 4] \\ {5/2}");
        assert!(region.contains(&rat("1")));
        assert!(region.contains(&rat("4")));
        assert!(!region.contains(&rat("5/2")));
        // removing again changes nothing
        assert_eq!(region.remove_point(&rat("5/2")), region);
    }

    #[test]
    fn union_merges_touching_pieces() {
        let a = RealSet::single(iv("[0, 1]"));
        let b = RealSet::single(iv("(1, 2)"));
        assert_eq!(a.union(&b), RealSet::single(iv("[0, 2)")));
        // both-open endpoints stay punctured
        let c = RealSet::single(iv("[0, 1)"));
        let d = RealSet::single(iv("(1, 2)"));
        assert_eq!(c.union(&d).intervals().len(), 2);
        // a point plugs the hole
        let plugged = c.union(&d).union(&RealSet::point(rat("1")));
        assert_eq!(plugged, RealSet::single(iv("[0, 2)")));
    }

    #[test]
    fn intersect_and_subtract() {
        let region = RealSet::single(iv("[1, 4]")).remove_point(&rat("5/2"));
        let left = RealSet::single(iv("(-inf, 5/2]"));
        let first = region.intersect(&left);
        assert_eq!(first, RealSet::single(iv("[1, 5/2)")));
        let gone = region.subtract(&RealSet::single(iv("[1, 4]")));
        assert!(gone.is_empty());
    }

    #[test]
    fn complement_round_trip() {
        let region = RealSet::single(iv("[1, 4]")).remove_point(&rat("5/2"));
        let comp = region.complement();
        assert!(comp.contains(&rat("5/2")));
        assert!(comp.contains(&rat("0")));
        assert!(!comp.contains(&rat("3")));
        assert_eq!(comp.complement(), region);
        assert_eq!(RealSet::all().complement(), RealSet::empty());
        assert_eq!(RealSet::empty().complement(), RealSet::all());
    }

    #[test]
    fn affine_images() {
        let piece = RealSet::single(iv("[1, 4]"));
        // x -> x/3 + 5/3 sends [1,4] to [2,3]
        let img = piece.affine_image(&rat("1/3"), &rat("5/3"));
        assert_eq!(img, RealSet::single(iv("[2, 3]")));
        // negative slope flips
        let neg = piece.affine_image(&rat("-1"), &rat("0"));
        assert_eq!(neg, RealSet::single(iv("[-4, -1]")));
        // constant collapses
        let flat = piece.affine_image(&rat("0"), &rat("7"));
        assert_eq!(flat, RealSet::point(rat("7")));
    }

    #[test]
    fn subset_checks() {
        let region = RealSet::single(iv("[1, 4]")).remove_point(&rat("5/2"));
        let img = RealSet::single(iv("[2, 3]")).remove_point(&rat("5/2"));
        assert!(img.is_subset_of(&region));
        assert!(!RealSet::single(iv("[2, 3]")).is_subset_of(&region));
    }

    #[test]
    fn accumulation_sides() {
        let region = RealSet::single(iv("[1, 4]")).remove_point(&rat("5/2"));
        assert!(region.accumulates_left(&rat("5/2")));
        assert!(region.accumulates_right(&rat("5/2")));
        assert!(region.accumulates_left(&rat("4")));
        assert!(!region.accumulates_right(&rat("4")));
        assert!(!region.accumulates_left(&rat("1")));
        assert!(region.accumulates_right(&rat("1")));
        assert!(!region.accumulates_left(&rat("0")));
        // isolated points accumulate nowhere
        let pt = RealSet::point(rat("5/2"));
        assert!(!pt.accumulates_left(&rat("5/2")));
        assert!(!pt.accumulates_right(&rat("5/2")));
    }

    #[test]
    fn punctured_hull_shapes() {
        let region = RealSet::single(iv("[1, 4]")).remove_point(&rat("5/2"));
        let (hull, holes) = region.punctured_hull().unwrap();
        assert_eq!(hull.to_string(), "[1, 4]");
        assert_eq!(holes, vec![rat("5/2")]);
        assert!(region.has_positive_length());
        assert!(region.single_point().is_none());

        let plain = RealSet::single(iv("(0, inf)"));
        let (h2, holes2) = plain.punctured_hull().unwrap();
        assert_eq!(h2.to_string(), "(0, inf)");
        assert!(holes2.is_empty());

        // genuine gap: no punctured-hull shape
        let gapped = RealSet::from_intervals([iv("[0, 1]"), iv("[2, 3]")]);
        assert!(gapped.punctured_hull().is_none());
        assert_eq!(gapped.hull().unwrap().to_string(), "[0, 3]");

        assert!(RealSet::empty().punctured_hull().is_none());
        assert_eq!(RealSet::point(rat("2")).single_point(), Some(&rat("2")));
        assert!(!RealSet::point(rat("2")).has_positive_length());
    }
}
