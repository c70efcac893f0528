//! Self-maps T: X -> X and their orbits.
//!
//! Finite carriers use total lookup tables over point indices. The real
//! line uses piecewise rules — affine everywhere the exact machinery
//! runs, plus a quadratic piece kind that exists solely for the
//! continuity checker. Orbit generation is double precision with a hard
//! budget; finite orbits are exact and always end in a detected cycle.

use crate::interval::{cmp_hi, Endpoint, Interval, RealSet};
use crate::rat::Rat;
use crate::space::Carrier;
use serde::{Deserialize, Serialize};
use std::cmp::Ordering;
use std::fmt;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub enum PieceRule {
    Affine { slope: Rat, intercept: Rat },
    Quadratic { coeff: Rat },
}

impl PieceRule {
    pub fn eval_rat(&self, x: &Rat) -> Rat {
        match self {
            PieceRule::Affine { slope, intercept } => &(slope * x) + intercept,
            PieceRule::Quadratic { coeff } => coeff * &(x * x),
        }
    }

    pub fn eval_f64(&self, x: f64) -> f64 {
        match self {
            PieceRule::Affine { slope, intercept } => slope.to_f64() * x + intercept.to_f64(),
            PieceRule::Quadratic { coeff } => coeff.to_f64() * x * x,
        }
    }

    /// Exact image of a set of arguments under this rule.
    pub fn image_of(&self, set: &RealSet) -> RealSet {
        match self {
            PieceRule::Affine { slope, intercept } => set.affine_image(slope, intercept),
            PieceRule::Quadratic { coeff } => RealSet::from_intervals(
                set.intervals()
                    .iter()
                    .map(|iv| square_image(iv).affine_image(coeff, &Rat::zero())),
            ),
        }
    }
}

impl fmt::Display for PieceRule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let coeff_part = |c: &Rat, var: &str| -> String {
            if *c == 1 {
                var.to_string()
            } else if *c == -1 {
                format!("-{var}")
            } else {
                format!("{c}*{var}")
            }
        };
        match self {
            PieceRule::Affine { slope, intercept } => {
                if slope.is_zero() {
                    return write!(f, "{}", intercept);
                }
                write!(f, "{}", coeff_part(slope, "x"))?;
                if intercept.is_positive() {
                    write!(f, " + {}", intercept)?;
                } else if intercept.is_negative() {
                    write!(f, " - {}", -intercept)?;
                }
                Ok(())
            }
            PieceRule::Quadratic { coeff } => write!(f, "{}", coeff_part(coeff, "x^2")),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Piece {
    pub interval: Interval,
    pub rule: PieceRule,
}

/// Exact image of an interval under x -> x^2.
pub(crate) fn square_image(iv: &Interval) -> Interval {
    let zero = Rat::zero();
    let sq = |e: &Endpoint| match e {
        Endpoint::Unbounded => Endpoint::Unbounded,
        Endpoint::Incl(r) => Endpoint::Incl(r * r),
        Endpoint::Excl(r) => Endpoint::Excl(r * r),
    };
    if iv.contains(&zero) {
        let hi = match (sq(iv.lo()), sq(iv.hi())) {
            (Endpoint::Unbounded, _) | (_, Endpoint::Unbounded) => Endpoint::Unbounded,
            (a, b) => {
                if cmp_hi(&a, &b) == Ordering::Less {
                    b
                } else {
                    a
                }
            }
        };
        Interval::new(Endpoint::Incl(zero), hi).expect("squared interval is nonempty")
    } else if matches!(iv.lo().value(), Some(a) if !a.is_negative()) {
        // entirely positive: squaring is increasing
        Interval::new(sq(iv.lo()), sq(iv.hi())).expect("squared interval is nonempty")
    } else {
        // entirely negative: squaring is decreasing
        Interval::new(sq(iv.hi()), sq(iv.lo())).expect("squared interval is nonempty")
    }
}

impl Piece {
    pub fn new(interval: Interval, rule: PieceRule) -> Self {
        Piece { interval, rule }
    }

    /// Exact image of the piece under its rule.
    pub fn image(&self) -> Interval {
        match &self.rule {
            PieceRule::Affine { slope, intercept } => self.interval.affine_image(slope, intercept),
            PieceRule::Quadratic { coeff } => {
                square_image(&self.interval).affine_image(coeff, &Rat::zero())
            }
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub enum SelfMap {
    /// image[i] is the index T maps point i to.
    Table { image: Vec<usize> },
    Piecewise { pieces: Vec<Piece> },
}

impl SelfMap {
    pub fn table(image: Vec<usize>) -> Self {
        SelfMap::Table { image }
    }

    pub fn piecewise(pieces: Vec<Piece>) -> Self {
        SelfMap::Piecewise { pieces }
    }

    pub fn eval_idx(&self, i: usize) -> usize {
        match self {
            SelfMap::Table { image } => image[i],
            SelfMap::Piecewise { .. } => panic!("index evaluation on a piecewise map"),
        }
    }

    pub fn pieces(&self) -> &[Piece] {
        match self {
            SelfMap::Table { .. } => &[],
            SelfMap::Piecewise { pieces } => pieces,
        }
    }

    pub fn has_quadratic(&self) -> bool {
        self.pieces().iter().any(|p| matches!(p.rule, PieceRule::Quadratic { .. }))
    }

    pub fn piece_at_rat(&self, x: &Rat) -> Option<&Piece> {
        self.pieces().iter().find(|p| p.interval.contains(x))
    }

    pub fn piece_at_f64(&self, x: f64) -> Option<&Piece> {
        self.pieces().iter().find(|p| p.interval.contains_f64(x))
    }

    pub fn eval_rat(&self, x: &Rat) -> Option<Rat> {
        self.piece_at_rat(x).map(|p| p.rule.eval_rat(x))
    }

    pub fn eval_f64(&self, x: f64) -> Option<f64> {
        self.piece_at_f64(x).map(|p| p.rule.eval_f64(x))
    }

    /// All finite piece endpoints, sorted and deduplicated — the only
    /// places a piecewise map can be discontinuous.
    pub fn boundary_points(&self) -> Vec<Rat> {
        let mut out: Vec<Rat> = self
            .pieces()
            .iter()
            .flat_map(|p| [p.interval.lo().value(), p.interval.hi().value()])
            .flatten()
            .cloned()
            .collect();
        out.sort();
        out.dedup();
        out
    }

    pub fn validate(&self, carrier: &Carrier) -> Vec<String> {
        let mut errs = Vec::new();
        match (self, carrier) {
            (SelfMap::Table { image }, Carrier::Finite { points }) => {
                let n = points.len();
                if image.len() != n {
                    errs.push(format!(
                        "map: table has {} entries for a {}-point carrier",
                        image.len(),
                        n
                    ));
                }
                for (i, &t) in image.iter().enumerate() {
                    if t >= n {
                        errs.push(format!("map: entry {i} points outside the carrier"));
                    }
                }
            }
            (SelfMap::Piecewise { pieces }, Carrier::Real { domain, .. }) => {
                if pieces.is_empty() {
                    errs.push("map: needs at least one piece".into());
                }
                for (i, p) in pieces.iter().enumerate() {
                    for q in &pieces[..i] {
                        if p.interval.intersect(&q.interval).is_some() {
                            errs.push(format!(
                                "map: pieces {} and {} overlap",
                                q.interval, p.interval
                            ));
                        }
                    }
                    if let PieceRule::Quadratic { coeff } = &p.rule {
                        if coeff.is_zero() {
                            errs.push(format!(
                                "map: quadratic piece on {} has zero coefficient (write it as a constant)",
                                p.interval
                            ));
                        }
                    }
                    let img = RealSet::single(p.image());
                    if !img.is_subset_of(domain) {
                        errs.push(format!(
                            "map: piece {} maps onto {}, which leaves the domain {}",
                            p.interval, img, domain
                        ));
                    }
                }
                let cover = RealSet::from_intervals(pieces.iter().map(|p| p.interval.clone()));
                if &cover != domain {
                    errs.push(format!(
                        "map: pieces cover {} but the domain is {}",
                        cover, domain
                    ));
                }
            }
            (SelfMap::Table { .. }, Carrier::Real { .. }) => {
                errs.push("map: table maps need a finite carrier".into());
            }
            (SelfMap::Piecewise { .. }, Carrier::Finite { .. }) => {
                errs.push("map: piecewise maps need the real-line carrier".into());
            }
        }
        errs
    }

    pub fn fixed_point_indices(&self) -> Vec<usize> {
        match self {
            SelfMap::Table { image } => {
                image.iter().enumerate().filter(|&(i, &t)| i == t).map(|(i, _)| i).collect()
            }
            SelfMap::Piecewise { .. } => panic!("index fixed points on a piecewise map"),
        }
    }

    /// Exact fixed-point set over the affine pieces. The flag reports
    /// whether quadratic pieces were present and skipped.
    pub fn fixed_points_real(&self) -> (RealSet, bool) {
        let mut out = RealSet::empty();
        let mut quadratic_skipped = false;
        for p in self.pieces() {
            match &p.rule {
                PieceRule::Affine { slope, intercept } => {
                    out = out.union(&affine_fixed_set(&p.interval, slope, intercept));
                }
                PieceRule::Quadratic { .. } => quadratic_skipped = true,
            }
        }
        (out, quadratic_skipped)
    }

    pub fn orbit_idx(&self, start: usize, budget: usize) -> OrbitIdx {
        let n = match self {
            SelfMap::Table { image } => image.len(),
            SelfMap::Piecewise { .. } => panic!("index orbit on a piecewise map"),
        };
        let mut values = vec![start];
        let mut first_seen = vec![usize::MAX; n];
        first_seen[start] = 0;
        for step in 1..=budget {
            let y = self.eval_idx(*values.last().unwrap());
            values.push(y);
            if first_seen[y] != usize::MAX {
                return OrbitIdx { values, status: OrbitStatus::Periodic(step - first_seen[y]) };
            }
            first_seen[y] = step;
        }
        // unreachable once budget >= |X| (pigeonhole), but honor tiny budgets
        OrbitIdx { values, status: OrbitStatus::BudgetExhausted }
    }

    pub fn orbit_f64(&self, start: f64, budget: usize, stop: &StopRule) -> OrbitF64 {
        let mut values = vec![start];
        let mut calm = 0usize;
        let mut status = OrbitStatus::BudgetExhausted;
        for _ in 0..budget {
            let x = *values.last().unwrap();
            if !x.is_finite() || x.abs() > stop.diverge_bound {
                status = OrbitStatus::Diverged;
                break;
            }
            let Some(y) = self.eval_f64(x) else {
                // rounding pushed the iterate off every piece; the orbit
                // has left the modeled space
                status = OrbitStatus::Diverged;
                break;
            };
            values.push(y);
            if (y - x).abs() < stop.eps {
                calm += 1;
                if calm >= stop.window {
                    status = OrbitStatus::Converged;
                    break;
                }
            } else {
                calm = 0;
            }
        }
        OrbitF64 { values, status }
    }
}

/// Solutions of a*x + b = x inside an interval: a single point when the
/// slope is not 1, the whole interval for identity pieces, nothing for
/// pure shifts.
pub(crate) fn affine_fixed_set(interval: &Interval, slope: &Rat, intercept: &Rat) -> RealSet {
    if *slope == 1 {
        if intercept.is_zero() {
            RealSet::single(interval.clone())
        } else {
            RealSet::empty()
        }
    } else {
        let hat = intercept / &(&Rat::one() - slope);
        if interval.contains(&hat) {
            RealSet::point(hat)
        } else {
            RealSet::empty()
        }
    }
}

/// The rational roots of c*x^2 = x, namely 0 and 1/c.
pub(crate) fn quad_fixed_candidates(coeff: &Rat) -> [Rat; 2] {
    [Rat::zero(), coeff.recip()]
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum OrbitStatus {
    Converged,
    Periodic(usize),
    Diverged,
    BudgetExhausted,
}

/// Numeric stopping thresholds for real-line orbits: converged after
/// `window` consecutive steps smaller than `eps`, diverged past
/// `diverge_bound`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct StopRule {
    pub eps: f64,
    pub window: usize,
    pub diverge_bound: f64,
}

impl Default for StopRule {
    fn default() -> Self {
        StopRule { eps: 1e-9, window: 16, diverge_bound: 1e12 }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct OrbitIdx {
    pub values: Vec<usize>,
    pub status: OrbitStatus,
}

impl OrbitIdx {
    pub fn start(&self) -> usize {
        self.values[0]
    }

    /// The states of the terminal cycle, in orbit order.
    pub fn cycle(&self) -> Option<&[usize]> {
        match self.status {
            OrbitStatus::Periodic(c) => Some(&self.values[self.values.len() - 1 - c..self.values.len() - 1]),
            _ => None,
        }
    }

    /// The eventual value for orbits that settle (cycle length 1).
    pub fn limit(&self) -> Option<usize> {
        match self.status {
            OrbitStatus::Periodic(1) => Some(*self.values.last().unwrap()),
            _ => None,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct OrbitF64 {
    pub values: Vec<f64>,
    pub status: OrbitStatus,
}

impl OrbitF64 {
    pub fn start(&self) -> f64 {
        self.values[0]
    }

    pub fn limit(&self) -> Option<f64> {
        match self.status {
            OrbitStatus::Converged => Some(*self.values.last().unwrap()),
            _ => None,
        }
    }
}

/// The three-branch map of the closing example: 2x below 1, (x+5)/3 on
/// [1,4], 2x-5 above 4. Also available as the bundled
/// `paper-final-example` config; exposed here so tests and callers can
/// build it without going through the parser.
pub fn three_branch_example() -> SelfMap {
    use crate::rat::rat;
    SelfMap::piecewise(vec![
        Piece::new(
            "(-inf, 1)".parse().unwrap(),
            PieceRule::Affine { slope: rat("2"), intercept: rat("0") },
        ),
        Piece::new(
            "[1, 4]".parse().unwrap(),
            PieceRule::Affine { slope: rat("1/3"), intercept: rat("5/3") },
        ),
        Piece::new(
            "(4, inf)".parse().unwrap(),
            PieceRule::Affine { slope: rat("2"), intercept: rat("-5") },
        ),
    ])
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rat::rat;

    fn iv(s: &str) -> Interval {
        s.parse().unwrap()
    }

    #[test]
    fn evaluates_the_three_branch_map() {
        let t = three_branch_example();
        assert_eq!(t.eval_rat(&rat("4")), Some(rat("3")));
        assert_eq!(t.eval_rat(&rat("1/2")), Some(rat("1")));
        assert_eq!(t.eval_rat(&rat("31/10")), Some(rat("27/10")));
        assert_eq!(t.eval_rat(&rat("5")), Some(rat("5")));
        assert_eq!(t.eval_rat(&rat("-1")), Some(rat("-2")));
        assert_eq!(t.eval_f64(0.5), Some(1.0));
        assert_eq!(t.eval_f64(4.0), Some(3.0));
    }

    #[test]
    fn finds_all_three_fixed_points() {
        let (fixed, skipped) = three_branch_example().fixed_points_real();
        assert!(!skipped);
        let pts: Vec<&Rat> = fixed.isolated_points().collect();
        assert_eq!(pts, vec![&rat("0"), &rat("5/2"), &rat("5")]);
        assert_eq!(fixed.to_string(), "{0} U {5/2} U {5}");
    }

    #[test]
    fn identity_and_shift_pieces() {
        // identity on [0,1]: a whole interval of fixed points; x+1 above: none
        let t = SelfMap::piecewise(vec![
            Piece::new(iv("[0, 1]"), PieceRule::Affine { slope: rat("1"), intercept: rat("0") }),
            Piece::new(iv("(1, inf)"), PieceRule::Affine { slope: rat("1"), intercept: rat("1") }),
        ]);
        let (fixed, _) = t.fixed_points_real();
        assert_eq!(fixed, RealSet::single(iv("[0, 1]")));
    }

    #[test]
    fn quadratic_images_are_exact() {
        let sq = |s: &str| {
            Piece::new(iv(s), PieceRule::Quadratic { coeff: rat("1/2") }).image().to_string()
        };
        assert_eq!(sq("(0, inf)"), "(0, inf)");
        assert_eq!(sq("[-2, 2]"), "[0, 2]");
        assert_eq!(sq("(-2, 2)"), "[0, 2)");
        assert_eq!(sq("[1, 3)"), "[1/2, 9/2)");
        assert_eq!(sq("(-3, -1]"), "[1/2, 9/2)");
        assert_eq!(sq("(-inf, 0)"), "(0, inf)");
        // negative coefficient flips
        let neg = Piece::new(iv("[0, 2]"), PieceRule::Quadratic { coeff: rat("-1") });
        assert_eq!(neg.image().to_string(), "[-4, 0]");
    }

    #[test]
    fn validation_catches_bad_piecewise_maps() {
        let domain = RealSet::single(iv("[0, 1]"));
        let carrier = Carrier::Real { domain, grid: vec![] };
        // overlapping pieces, escaping image, and a coverage gap
        let t = SelfMap::piecewise(vec![
            Piece::new(iv("[0, 1/2]"), PieceRule::Affine { slope: rat("2"), intercept: rat("0") }),
            Piece::new(iv("[1/2, 3/4)"), PieceRule::Affine { slope: rat("0"), intercept: rat("5") }),
        ]);
        let errs = t.validate(&carrier);
        assert!(errs.iter().any(|e| e.contains("overlap")));
        assert!(errs.iter().any(|e| e.contains("leaves the domain")));
        assert!(errs.iter().any(|e| e.contains("cover")));
    }

    #[test]
    fn three_branch_map_is_a_valid_self_map_on_the_line() {
        let carrier = Carrier::Real { domain: RealSet::all(), grid: vec![] };
        assert!(three_branch_example().validate(&carrier).is_empty());
    }

    #[test]
    fn table_orbits_detect_cycles() {
        // constant map: x, c, c
        let t = SelfMap::table(vec![1, 1, 1]);
        let o = t.orbit_idx(0, 100);
        assert_eq!(o.values, vec![0, 1, 1]);
        assert_eq!(o.status, OrbitStatus::Periodic(1));
        assert_eq!(o.limit(), Some(1));
        assert_eq!(o.cycle(), Some(&[1][..]));

        // swap: 2-cycle, no limit
        let swap = SelfMap::table(vec![1, 0]);
        let o = swap.orbit_idx(0, 100);
        assert_eq!(o.status, OrbitStatus::Periodic(2));
        assert_eq!(o.limit(), None);
        assert_eq!(o.cycle(), Some(&[0, 1][..]));

        // pigeonhole: any 4-point orbit cycles within 5 recorded values
        let t = SelfMap::table(vec![1, 2, 3, 1]);
        let o = t.orbit_idx(0, 100);
        assert!(o.values.len() <= 5);
        assert_eq!(o.status, OrbitStatus::Periodic(3));
    }

    #[test]
    fn real_orbit_from_3_settles_near_5_halves() {
        let t = three_branch_example();
        let o = t.orbit_f64(3.0, 10_000, &StopRule::default());
        assert_eq!(o.status, OrbitStatus::Converged);
        assert!((o.limit().unwrap() - 2.5).abs() < 1e-6);
        assert!((o.values[1] - 8.0 / 3.0).abs() < 1e-12);
        assert!((o.values[2] - 23.0 / 9.0).abs() < 1e-12);
        assert!(o.values.len() < 60);
        // replay: every recorded step is T of the previous value
        for w in o.values.windows(2) {
            assert_eq!(t.eval_f64(w[0]), Some(w[1]));
        }
    }

    #[test]
    fn real_orbit_from_minus_1_diverges() {
        let t = three_branch_example();
        let o = t.orbit_f64(-1.0, 10_000, &StopRule::default());
        assert_eq!(o.status, OrbitStatus::Diverged);
        assert_eq!(&o.values[..3], &[-1.0, -2.0, -4.0]);
    }

    #[test]
    fn orbits_are_deterministic() {
        let t = three_branch_example();
        let a = t.orbit_f64(3.7, 10_000, &StopRule::default());
        let b = t.orbit_f64(3.7, 10_000, &StopRule::default());
        assert_eq!(a, b);
    }

    #[test]
    fn rule_display_reads_naturally() {
        let show = |slope: &str, intercept: &str| {
            PieceRule::Affine { slope: rat(slope), intercept: rat(intercept) }.to_string()
        };
        assert_eq!(show("2", "0"), "2*x");
        assert_eq!(show("1/3", "5/3"), "1/3*x + 5/3");
        assert_eq!(show("2", "-5"), "2*x - 5");
        assert_eq!(show("0", "1"), "1");
        assert_eq!(show("1", "0"), "x");
        assert_eq!(PieceRule::Quadratic { coeff: rat("1/2") }.to_string(), "1/2*x^2");
    }
}
