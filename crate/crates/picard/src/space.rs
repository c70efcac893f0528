//! Carriers, pseudometric families, and the basic-entourage algebra.
//!
//! A uniform space here is always presented by a generating family of
//! pseudometrics: distance tables on finite carriers, positively scaled
//! absolute difference on the real line. Basic entourages are finite
//! intersections of strict balls V(rho, r) = {(x,y): rho(x,y) < r}; all
//! membership tests use strict inequality and exact arithmetic (rational
//! on carriers, plain IEEE comparison for floating probes — tolerance
//! belongs to convergence detection, not to membership).

use crate::interval::RealSet;
use crate::rat::Rat;
use serde::{Deserialize, Serialize};

/// A labeled point of a finite carrier. The coordinate is cosmetic
/// (display and declaration order only); all distances come from tables.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct FinitePoint {
    pub label: String,
    pub coord: Option<Rat>,
}

/// The underlying set X.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub enum Carrier {
    /// Finitely many labeled points; everything downstream is exact.
    Finite { points: Vec<FinitePoint> },
    /// A subset of the real line plus an ordered probe grid for the
    /// heuristic checks.
    Real { domain: RealSet, grid: Vec<Rat> },
}

impl Carrier {
    pub fn finite_from_labels<S: Into<String>>(labels: impl IntoIterator<Item = S>) -> Self {
        Carrier::Finite {
            points: labels
                .into_iter()
                .map(|l| FinitePoint { label: l.into(), coord: None })
                .collect(),
        }
    }

    /// None on the real carrier; a carrier is never empty (validated),
    /// so there is no is_empty counterpart.
    #[allow(clippy::len_without_is_empty)]
    pub fn len(&self) -> Option<usize> {
        match self {
            Carrier::Finite { points } => Some(points.len()),
            Carrier::Real { .. } => None,
        }
    }

    pub fn is_finite(&self) -> bool {
        matches!(self, Carrier::Finite { .. })
    }

    pub fn labels(&self) -> Vec<&str> {
        match self {
            Carrier::Finite { points } => points.iter().map(|p| p.label.as_str()).collect(),
            Carrier::Real { .. } => Vec::new(),
        }
    }

    pub fn index_of(&self, label: &str) -> Option<usize> {
        match self {
            Carrier::Finite { points } => points.iter().position(|p| p.label == label),
            Carrier::Real { .. } => None,
        }
    }

    /// Structural problems, all collected.
    pub fn validate(&self) -> Vec<String> {
        let mut errs = Vec::new();
        match self {
            Carrier::Finite { points } => {
                if points.is_empty() {
                    errs.push("carrier: needs at least one point".into());
                }
                for (i, p) in points.iter().enumerate() {
                    if points[..i].iter().any(|q| q.label == p.label) {
                        errs.push(format!("carrier: duplicate label `{}`", p.label));
                    }
                }
            }
            Carrier::Real { domain, grid } => {
                if domain.is_empty() {
                    errs.push("carrier: real domain is empty".into());
                }
                for w in grid.windows(2) {
                    if w[0] >= w[1] {
                        errs.push(format!(
                            "carrier: sample grid not strictly increasing at {} >= {}",
                            w[0], w[1]
                        ));
                    }
                }
                for g in grid {
                    if !domain.contains(g) {
                        errs.push(format!("carrier: grid point {} outside domain {}", g, domain));
                    }
                }
            }
        }
        errs
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub enum PseudometricKind {
    /// Symmetric nonnegative matrix with zero diagonal, indexed like the
    /// finite carrier.
    Table(Vec<Vec<Rat>>),
    /// rho(x, y) = factor * |x - y| on the real line, factor > 0.
    ScaledAbs(Rat),
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Pseudometric {
    pub id: String,
    pub kind: PseudometricKind,
}

impl Pseudometric {
    pub fn table(id: impl Into<String>, rows: Vec<Vec<Rat>>) -> Self {
        Pseudometric { id: id.into(), kind: PseudometricKind::Table(rows) }
    }

    pub fn scaled_abs(id: impl Into<String>, factor: Rat) -> Self {
        Pseudometric { id: id.into(), kind: PseudometricKind::ScaledAbs(factor) }
    }

    pub fn dist_idx(&self, i: usize, j: usize) -> Rat {
        match &self.kind {
            PseudometricKind::Table(rows) => rows[i][j].clone(),
            PseudometricKind::ScaledAbs(_) => {
                panic!("index distance queried on a real-line pseudometric")
            }
        }
    }

    pub fn dist_rat(&self, x: &Rat, y: &Rat) -> Rat {
        match &self.kind {
            PseudometricKind::ScaledAbs(c) => c * &(x - y).abs(),
            PseudometricKind::Table(_) => {
                panic!("real distance queried on a table pseudometric")
            }
        }
    }

    pub fn dist_f64(&self, x: f64, y: f64) -> f64 {
        match &self.kind {
            PseudometricKind::ScaledAbs(c) => c.to_f64() * (x - y).abs(),
            PseudometricKind::Table(_) => {
                panic!("real distance queried on a table pseudometric")
            }
        }
    }

    /// Pseudometric-axiom check for tables: square shape, zero diagonal,
    /// symmetry, nonnegativity, triangle inequality over all triples.
    /// Every violation is reported.
    #[allow(clippy::needless_range_loop)] // i, j are matrix coordinates
    pub fn validate(&self, carrier: &Carrier) -> Vec<String> {
        let mut errs = Vec::new();
        match (&self.kind, carrier) {
            (PseudometricKind::Table(rows), Carrier::Finite { points }) => {
                let n = points.len();
                if rows.len() != n || rows.iter().any(|r| r.len() != n) {
                    errs.push(format!(
                        "pseudometric {}: table must be {n}x{n} to match the carrier",
                        self.id
                    ));
                    return errs; // shape is broken; element checks would index out of range
                }
                let lbl = |i: usize| points[i].label.as_str();
                for i in 0..n {
                    if !rows[i][i].is_zero() {
                        errs.push(format!(
                            "pseudometric {}: rho({l},{l}) = {} != 0",
                            self.id,
                            rows[i][i],
                            l = lbl(i)
                        ));
                    }
                    for j in 0..n {
                        if rows[i][j].is_negative() {
                            errs.push(format!(
                                "pseudometric {}: rho({},{}) = {} < 0",
                                self.id,
                                lbl(i),
                                lbl(j),
                                rows[i][j]
                            ));
                        }
                        if i < j && rows[i][j] != rows[j][i] {
                            errs.push(format!(
                                "pseudometric {}: asymmetric, rho({},{}) = {} but rho({},{}) = {}",
                                self.id,
                                lbl(i),
                                lbl(j),
                                rows[i][j],
                                lbl(j),
                                lbl(i),
                                rows[j][i]
                            ));
                        }
                    }
                }
                for i in 0..n {
                    for j in 0..n {
                        for k in 0..n {
                            if rows[i][k] > &rows[i][j] + &rows[j][k] {
                                errs.push(format!(
                                    "pseudometric {}: triangle inequality fails, rho({},{}) = {} > {} = rho({0},{},{}) + rho(..)",
                                    self.id, lbl(i), lbl(k), rows[i][k],
                                    &rows[i][j] + &rows[j][k], lbl(j), lbl(j)
                                ));
                            }
                        }
                    }
                }
            }
            (PseudometricKind::ScaledAbs(c), Carrier::Real { .. }) => {
                if !c.is_positive() {
                    errs.push(format!(
                        "pseudometric {}: scale factor must be positive, got {}",
                        self.id, c
                    ));
                }
            }
            (PseudometricKind::Table(_), Carrier::Real { .. }) => {
                errs.push(format!(
                    "pseudometric {}: distance tables need a finite carrier",
                    self.id
                ));
            }
            (PseudometricKind::ScaledAbs(_), Carrier::Finite { .. }) => {
                errs.push(format!(
                    "pseudometric {}: scaled |x-y| needs the real-line carrier",
                    self.id
                ));
            }
        }
        errs
    }
}

/// The generating family F of the uniformity.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PseudometricFamily {
    pub members: Vec<Pseudometric>,
}

impl PseudometricFamily {
    pub fn new(members: Vec<Pseudometric>) -> Self {
        PseudometricFamily { members }
    }

    pub fn index_of(&self, id: &str) -> Option<usize> {
        self.members.iter().position(|m| m.id == id)
    }

    pub fn validate(&self, carrier: &Carrier) -> Vec<String> {
        let mut errs = Vec::new();
        if self.members.is_empty() {
            errs.push("pseudometric family must be nonempty".into());
        }
        for (i, m) in self.members.iter().enumerate() {
            if self.members[..i].iter().any(|o| o.id == m.id) {
                errs.push(format!("duplicate pseudometric id `{}`", m.id));
            }
            errs.extend(m.validate(carrier));
        }
        errs
    }

    /// True iff every pair of distinct points is told apart by some
    /// member. Exact on finite carriers; scaled |x-y| always separates.
    pub fn is_separating(&self, carrier: &Carrier) -> bool {
        match carrier {
            Carrier::Finite { points } => {
                let n = points.len();
                (0..n).all(|i| {
                    (i + 1..n).all(|j| {
                        self.members.iter().any(|m| m.dist_idx(i, j).is_positive())
                    })
                })
            }
            Carrier::Real { .. } => true,
        }
    }

    /// Partition of a finite carrier by "all pseudometrics vanish":
    /// returns one class id per point. Classes are the uniformity's
    /// indistinguishability blocks; for a separating family every class
    /// is a singleton.
    #[allow(clippy::needless_range_loop)] // j is a point id; class[j] is mutated mid-loop
    pub fn zero_classes(&self, n: usize) -> Vec<usize> {
        let mut class = vec![usize::MAX; n];
        let mut next = 0;
        for i in 0..n {
            if class[i] != usize::MAX {
                continue;
            }
            class[i] = next;
            for j in i + 1..n {
                if class[j] == usize::MAX
                    && self.members.iter().all(|m| m.dist_idx(i, j).is_zero())
                {
                    class[j] = next;
                }
            }
            next += 1;
        }
        class
    }

    /// Largest table entry across the family (finite carriers).
    pub fn max_distance(&self, n: usize) -> Rat {
        let mut best = Rat::zero();
        for m in &self.members {
            for i in 0..n {
                for j in 0..n {
                    let d = m.dist_idx(i, j);
                    if d > best {
                        best = d;
                    }
                }
            }
        }
        best
    }
}

/// One strict ball V(rho_i, r_i) of a basic entourage.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct EntourageTerm {
    /// Index into the family.
    pub pm: usize,
    pub radius: Rat,
}

/// A basic entourage: the finite intersection of its terms' strict balls.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BasicEntourage {
    pub terms: Vec<EntourageTerm>,
}

impl BasicEntourage {
    pub fn single(pm: usize, radius: Rat) -> Self {
        BasicEntourage { terms: vec![EntourageTerm { pm, radius }] }
    }

    pub fn validate(&self, family: &PseudometricFamily) -> Vec<String> {
        let mut errs = Vec::new();
        if self.terms.is_empty() {
            errs.push("entourage needs at least one term".into());
        }
        for t in &self.terms {
            if !t.radius.is_positive() {
                errs.push(format!("entourage radius must be positive, got {}", t.radius));
            }
            if t.pm >= family.members.len() {
                errs.push(format!("entourage refers to pseudometric #{} which does not exist", t.pm));
            }
        }
        errs
    }

    pub fn contains_idx(&self, family: &PseudometricFamily, i: usize, j: usize) -> bool {
        self.terms
            .iter()
            .all(|t| family.members[t.pm].dist_idx(i, j) < t.radius)
    }

    pub fn contains_rat(&self, family: &PseudometricFamily, x: &Rat, y: &Rat) -> bool {
        self.terms
            .iter()
            .all(|t| family.members[t.pm].dist_rat(x, y) < t.radius)
    }

    pub fn contains_f64(&self, family: &PseudometricFamily, x: f64, y: f64) -> bool {
        self.terms
            .iter()
            .all(|t| family.members[t.pm].dist_f64(x, y) < t.radius.to_f64())
    }

    /// alpha * V = the intersection of V(rho_i, alpha * r_i).
    ///
    /// Panics if `alpha` is not strictly positive; nonpositive factors
    /// are rejected at the input boundary.
    pub fn scale(&self, alpha: &Rat) -> BasicEntourage {
        assert!(alpha.is_positive(), "entourage scale factor must be positive");
        BasicEntourage {
            terms: self
                .terms
                .iter()
                .map(|t| EntourageTerm { pm: t.pm, radius: alpha * &t.radius })
                .collect(),
        }
    }

    /// The unattained infimum lambda* = max_i rho_i(x,y)/r_i: the pair
    /// (x,y) lies in lambda*V exactly for lambda > lambda* (for
    /// lambda* = 0 every positive lambda works).
    pub fn lambda_infimum_idx(&self, family: &PseudometricFamily, i: usize, j: usize) -> Rat {
        self.terms
            .iter()
            .map(|t| &family.members[t.pm].dist_idx(i, j) / &t.radius)
            .max()
            .expect("entourage has at least one term")
    }

    pub fn lambda_infimum_rat(&self, family: &PseudometricFamily, x: &Rat, y: &Rat) -> Rat {
        self.terms
            .iter()
            .map(|t| &family.members[t.pm].dist_rat(x, y) / &t.radius)
            .max()
            .expect("entourage has at least one term")
    }

    pub fn minkowski_gauge<'a>(&'a self, family: &'a PseudometricFamily) -> MinkowskiGauge<'a> {
        MinkowskiGauge { entourage: self, family }
    }
}

/// The gauge of an entourage: rho_V(x,y) = max_i rho_i(x,y)/r_i. It is a
/// pseudometric, and V = V(rho_V, 1) pointwise.
pub struct MinkowskiGauge<'a> {
    entourage: &'a BasicEntourage,
    family: &'a PseudometricFamily,
}

impl MinkowskiGauge<'_> {
    pub fn value_idx(&self, i: usize, j: usize) -> Rat {
        self.entourage.lambda_infimum_idx(self.family, i, j)
    }

    pub fn value_rat(&self, x: &Rat, y: &Rat) -> Rat {
        self.entourage.lambda_infimum_rat(self.family, x, y)
    }
}

/// Self-test of the composition law alphaV o betaV <= (alpha+beta)V over
/// the supplied triples: whenever (x,y) lands in alphaV and (y,z) in
/// betaV, (x,z) must land in (alpha+beta)V. Always true for valid
/// pseudometrics; a false return means a table violates the triangle
/// inequality.
pub fn compose_bound_check_idx(
    family: &PseudometricFamily,
    v: &BasicEntourage,
    alpha: &Rat,
    beta: &Rat,
    triples: &[(usize, usize, usize)],
) -> bool {
    let va = v.scale(alpha);
    let vb = v.scale(beta);
    let vab = v.scale(&(alpha + beta));
    triples.iter().all(|&(x, y, z)| {
        !(va.contains_idx(family, x, y) && vb.contains_idx(family, y, z))
            || vab.contains_idx(family, x, z)
    })
}

pub fn compose_bound_check_rat(
    family: &PseudometricFamily,
    v: &BasicEntourage,
    alpha: &Rat,
    beta: &Rat,
    triples: &[(Rat, Rat, Rat)],
) -> bool {
    let va = v.scale(alpha);
    let vb = v.scale(beta);
    let vab = v.scale(&(alpha + beta));
    triples.iter().all(|(x, y, z)| {
        !(va.contains_rat(family, x, y) && vb.contains_rat(family, y, z))
            || vab.contains_rat(family, x, z)
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rat::rat;

    fn table3() -> (Carrier, PseudometricFamily) {
        // a -1- b -1- c with d(a,c) = 2: a degenerate but valid metric
        let carrier = Carrier::finite_from_labels(["a", "b", "c"]);
        let rows = vec![
            vec![rat("0"), rat("1"), rat("2")],
            vec![rat("1"), rat("0"), rat("1")],
            vec![rat("2"), rat("1"), rat("0")],
        ];
        let family = PseudometricFamily::new(vec![Pseudometric::table("d", rows)]);
        (carrier, family)
    }

    fn real_family() -> (Carrier, PseudometricFamily) {
        let carrier = Carrier::Real { domain: RealSet::all(), grid: vec![] };
        let family = PseudometricFamily::new(vec![Pseudometric::scaled_abs("abs", rat("1"))]);
        (carrier, family)
    }

    #[test]
    fn valid_tables_pass_validation() {
        let (carrier, family) = table3();
        assert!(family.validate(&carrier).is_empty());
        assert!(family.is_separating(&carrier));
    }

    #[test]
    fn corrupted_tables_report_every_violation() {
        let carrier = Carrier::finite_from_labels(["a", "b", "c"]);
        // asymmetric, negative entry, dirty diagonal, triangle break
        let rows = vec![
            vec![rat("0"), rat("1"), rat("5")],
            vec![rat("2"), rat("1"), rat("1")],
            vec![rat("5"), rat("-1"), rat("0")],
        ];
        let pm = Pseudometric::table("bad", rows);
        let errs = pm.validate(&carrier);
        assert!(errs.iter().any(|e| e.contains("asymmetric")));
        assert!(errs.iter().any(|e| e.contains("< 0")));
        assert!(errs.iter().any(|e| e.contains("!= 0")));
        assert!(errs.iter().any(|e| e.contains("triangle")));
        assert!(errs.len() >= 4);
    }

    #[test]
    fn membership_is_strict() {
        let (_, family) = real_family();
        let v = BasicEntourage::single(0, rat("1"));
        // diagonal always inside
        assert!(v.contains_rat(&family, &rat("17/3"), &rat("17/3")));
        // distance exactly 1 is outside
        assert!(!v.contains_rat(&family, &rat("4"), &rat("3")));
        assert!(v.contains_rat(&family, &rat("4"), &rat("301/100")));
        // paper map values: T(4) = 3 and T(31/10) = 27/10 are closer than 1/3
        let third = BasicEntourage::single(0, rat("1/3"));
        assert!(third.contains_rat(&family, &rat("3"), &rat("27/10")));
        assert!(!third.contains_rat(&family, &rat("3"), &rat("8/3"))); // distance exactly 1/3
    }

    #[test]
    fn scaling_distributes_over_terms() {
        let family = PseudometricFamily::new(vec![
        // two scaled-abs members stand in for distinct family gauges
            Pseudometric::scaled_abs("p", rat("1")),
            Pseudometric::scaled_abs("q", rat("2")),
        ]);
        let v = BasicEntourage {
            terms: vec![
                EntourageTerm { pm: 0, radius: rat("1") },
                EntourageTerm { pm: 1, radius: rat("2") },
            ],
        };
        let scaled = v.scale(&rat("1/3"));
        assert_eq!(scaled.terms[0].radius, rat("1/3"));
        assert_eq!(scaled.terms[1].radius, rat("2/3"));
        assert_eq!(v.scale(&rat("1")), v);
        assert!(v.validate(&family).is_empty());
    }

    #[test]
    fn scale_monotone_in_alpha() {
        let (_, family) = table3();
        let v = BasicEntourage::single(0, rat("3/2"));
        let small = v.scale(&rat("1/2"));
        let big = v.scale(&rat("5/6"));
        for i in 0..3 {
            for j in 0..3 {
                if small.contains_idx(&family, i, j) {
                    assert!(big.contains_idx(&family, i, j));
                }
            }
        }
    }

    #[test]
    #[should_panic(expected = "positive")]
    fn nonpositive_scale_factor_panics() {
        let v = BasicEntourage::single(0, rat("1"));
        v.scale(&rat("0"));
    }

    #[test]
    fn lambda_infimum_is_unattained() {
        let (_, family) = table3();
        let v = BasicEntourage::single(0, rat("1"));
        // identical points: infimum 0
        assert_eq!(v.lambda_infimum_idx(&family, 1, 1), rat("0"));
        // d(a,c) = 2, r = 1: lambda* = 2, not attained
        let l = v.lambda_infimum_idx(&family, 0, 2);
        assert_eq!(l, rat("2"));
        assert!(!v.scale(&l).contains_idx(&family, 0, 2));
        assert!(v.scale(&rat("2001/1000")).contains_idx(&family, 0, 2));
    }

    #[test]
    fn lambda_infimum_takes_worst_term() {
        // rho1(x,y) = 3 with r1 = 1, rho2(x,y) = 1 with r2 = 2: max(3, 1/2) = 3
        let carrier = Carrier::finite_from_labels(["x", "y"]);
        let family = PseudometricFamily::new(vec![
            Pseudometric::table("p", vec![vec![rat("0"), rat("3")], vec![rat("3"), rat("0")]]),
            Pseudometric::table("q", vec![vec![rat("0"), rat("1")], vec![rat("1"), rat("0")]]),
        ]);
        assert!(family.validate(&carrier).is_empty());
        let v = BasicEntourage {
            terms: vec![
                EntourageTerm { pm: 0, radius: rat("1") },
                EntourageTerm { pm: 1, radius: rat("2") },
            ],
        };
        assert_eq!(v.lambda_infimum_idx(&family, 0, 1), rat("3"));
    }

    #[test]
    fn gauge_identity_exhaustive() {
        let (_, family) = table3();
        for radius in ["1", "2", "1/2", "3/2"] {
            let v = BasicEntourage::single(0, rat(radius));
            let gauge = v.minkowski_gauge(&family);
            for i in 0..3 {
                for j in 0..3 {
                    assert_eq!(
                        v.contains_idx(&family, i, j),
                        gauge.value_idx(i, j) < rat("1"),
                        "gauge identity broken at ({i},{j}) radius {radius}"
                    );
                }
            }
        }
        // unit radius: gauge is the pseudometric itself; radius 2 halves it
        let unit = BasicEntourage::single(0, rat("1"));
        let two = BasicEntourage::single(0, rat("2"));
        for i in 0..3 {
            for j in 0..3 {
                let d = family.members[0].dist_idx(i, j);
                assert_eq!(unit.minkowski_gauge(&family).value_idx(i, j), d);
                assert_eq!(two.minkowski_gauge(&family).value_idx(i, j), &d / &rat("2"));
            }
        }
    }

    #[test]
    fn composition_bound_holds_on_valid_tables() {
        let (_, family) = table3();
        let v = BasicEntourage::single(0, rat("1"));
        let mut triples = Vec::new();
        for x in 0..3 {
            for y in 0..3 {
                for z in 0..3 {
                    triples.push((x, y, z));
                }
            }
        }
        for (a, b) in [("1", "1"), ("1/2", "3/2"), ("2", "3")] {
            assert!(compose_bound_check_idx(&family, &v, &rat(a), &rat(b), &triples));
        }
        let (_, rf) = real_family();
        let rv = BasicEntourage::single(0, rat("1"));
        let rt = vec![(rat("0"), rat("9/10"), rat("17/10"))];
        assert!(compose_bound_check_rat(&rf, &rv, &rat("1"), &rat("1"), &rt));
    }

    #[test]
    fn composition_check_flags_triangle_violation() {
        // d(a,c) = 3 > d(a,b) + d(b,c) = 2: composing through b escapes 2V
        let rows = vec![
            vec![rat("0"), rat("1"), rat("3")],
            vec![rat("1"), rat("0"), rat("1")],
            vec![rat("3"), rat("1"), rat("0")],
        ];
        let family = PseudometricFamily::new(vec![Pseudometric::table("broken", rows)]);
        let carrier = Carrier::finite_from_labels(["a", "b", "c"]);
        assert!(!family.validate(&carrier).is_empty());
        let v = BasicEntourage::single(0, rat("3/2"));
        let triples = vec![(0, 1, 2)];
        assert!(!compose_bound_check_idx(&family, &v, &rat("1"), &rat("1"), &triples));
    }

    #[test]
    fn zero_classes_and_separation() {
        let carrier = Carrier::finite_from_labels(["a", "b", "c"]);
        // b and c indistinguishable: separating fails, classes {a}, {b,c}
        let rows = vec![
            vec![rat("0"), rat("1"), rat("1")],
            vec![rat("1"), rat("0"), rat("0")],
            vec![rat("1"), rat("0"), rat("0")],
        ];
        let family = PseudometricFamily::new(vec![Pseudometric::table("d", rows)]);
        assert!(family.validate(&carrier).is_empty());
        assert!(!family.is_separating(&carrier));
        assert_eq!(family.zero_classes(3), vec![0, 1, 1]);

        let (carrier3, family3) = table3();
        assert!(family3.is_separating(&carrier3));
        assert_eq!(family3.zero_classes(3), vec![0, 1, 2]);
        assert_eq!(family3.max_distance(3), rat("2"));
    }

    #[test]
    fn separating_family_basis_intersects_to_diagonal() {
        let (_, family) = table3();
        // pairs with every gauge zero are exactly the diagonal
        for i in 0..3 {
            for j in 0..3 {
                let all_zero = family.members.iter().all(|m| m.dist_idx(i, j).is_zero());
                assert_eq!(all_zero, i == j);
            }
        }
    }
}
