//! Cauchy detection for recorded orbits and the two-orbit equivalence
//! (C1: each orbit Cauchy; C2: the orbits eventually entourage-close to
//! one another).
//!
//! Real-line orbits are floating recordings, so verdicts are windowed:
//! `Cauchy { from }` certifies the recorded window, `NotWithinBudget`
//! refuses to certify. Finite orbits close a cycle by pigeonhole and
//! are decided exactly: the tail is Cauchy iff the cycle stays inside
//! one zero-class of the family.

use crate::map::{OrbitF64, OrbitIdx};
use crate::space::{BasicEntourage, PseudometricFamily};
use serde::{Deserialize, Serialize};
use std::fmt;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case", tag = "state", content = "detail")]
pub enum CauchyVerdict {
    /// All recorded pairs from `from` through `from + window` lie in
    /// every basis entourage (finite carriers: exact from `from` on).
    Cauchy { from: usize },
    /// Exact refutation: the orbit provably never settles.
    NotCauchy { witness: String },
    /// The recording is too short or never flattens out.
    NotWithinBudget,
}

impl CauchyVerdict {
    pub fn is_cauchy(&self) -> bool {
        matches!(self, CauchyVerdict::Cauchy { .. })
    }
}

impl fmt::Display for CauchyVerdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CauchyVerdict::Cauchy { from } => write!(f, "cauchy (from index {from})"),
            CauchyVerdict::NotCauchy { witness } => write!(f, "not cauchy ({witness})"),
            CauchyVerdict::NotWithinBudget => write!(f, "not within budget"),
        }
    }
}

/// Least `from` such that every pair of recorded values indexed in
/// `[from, from + window]` lies in every basis entourage. The full
/// window must fit inside the recording, so short orbits cannot pass
/// on an accidental one-point tail.
pub fn detect_cauchy_f64(
    orbit: &OrbitF64,
    family: &PseudometricFamily,
    basis: &[BasicEntourage],
    window: usize,
) -> CauchyVerdict {
    assert!(!basis.is_empty(), "cauchy detection needs a nonempty basis");
    let values = &orbit.values;
    if values.len() < window + 1 {
        return CauchyVerdict::NotWithinBudget;
    }
    for from in 0..=values.len() - (window + 1) {
        let block = &values[from..=from + window];
        let ok = basis.iter().all(|v| {
            block.iter().enumerate().all(|(i, &x)| {
                block[i + 1..].iter().all(|&y| v.contains_f64(family, x, y))
            })
        });
        if ok {
            return CauchyVerdict::Cauchy { from };
        }
    }
    CauchyVerdict::NotWithinBudget
}

/// Exact finite decision: the orbit enters its cycle within |X| steps;
/// past that point distances are eternally zero iff the cycle sits in
/// one zero-class.
pub fn detect_cauchy_finite(
    orbit: &OrbitIdx,
    family: &PseudometricFamily,
    labels: &[&str],
) -> CauchyVerdict {
    let cycle = match orbit.cycle() {
        Some(c) => c,
        None => return CauchyVerdict::NotWithinBudget, // budget below |X|
    };
    let classes = family.zero_classes(labels.len());
    let class = classes[cycle[0]];
    if let Some(&stray) = cycle.iter().find(|&&u| classes[u] != class) {
        return CauchyVerdict::NotCauchy {
            witness: format!(
                "the orbit cycles through {} and {} at positive distance forever",
                labels[cycle[0]], labels[stray]
            ),
        };
    }
    let from = orbit
        .values
        .iter()
        .position(|v| cycle.contains(v))
        .expect("cycle members appear in the recording");
    CauchyVerdict::Cauchy { from }
}

/// C1 ∧ C2 on recorded real orbits: both detect as Cauchy and some
/// suffix (at least `window + 1` long) of the paired values is inside
/// every basis entourage.
pub fn cauchy_equivalent_f64(
    a: &OrbitF64,
    b: &OrbitF64,
    family: &PseudometricFamily,
    basis: &[BasicEntourage],
    window: usize,
) -> bool {
    if !detect_cauchy_f64(a, family, basis, window).is_cauchy()
        || !detect_cauchy_f64(b, family, basis, window).is_cauchy()
    {
        return false;
    }
    let len = a.values.len().min(b.values.len());
    if len < window + 1 {
        return false;
    }
    'suffix: for from in 0..=len - (window + 1) {
        for n in from..len {
            if !basis
                .iter()
                .all(|v| v.contains_f64(family, a.values[n], b.values[n]))
            {
                continue 'suffix;
            }
        }
        return true;
    }
    false
}

/// Exact finite equivalence: both cycles settle into a zero-class and
/// the two classes coincide.
pub fn cauchy_equivalent_finite(
    a: &OrbitIdx,
    b: &OrbitIdx,
    family: &PseudometricFamily,
    labels: &[&str],
) -> bool {
    let (ca, cb) = match (
        detect_cauchy_finite(a, family, labels),
        detect_cauchy_finite(b, family, labels),
    ) {
        (CauchyVerdict::Cauchy { .. }, CauchyVerdict::Cauchy { .. }) => (
            a.cycle().expect("checked")[0],
            b.cycle().expect("checked")[0],
        ),
        _ => return false,
    };
    let classes = family.zero_classes(labels.len());
    classes[ca] == classes[cb]
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::map::{three_branch_example, SelfMap, StopRule};
    use crate::rat::{rat, Rat};
    use crate::space::Pseudometric;

    fn abs_family() -> PseudometricFamily {
        PseudometricFamily::new(vec![Pseudometric::scaled_abs("abs", Rat::one())])
    }

    fn micron_basis() -> Vec<BasicEntourage> {
        vec![BasicEntourage::single(0, rat("1/1000000"))]
    }

    #[test]
    fn orbit_from_three_is_cauchy_within_forty() {
        let t = three_branch_example();
        let orbit = t.orbit_f64(3.0, 10_000, &StopRule::default());
        let verdict = detect_cauchy_f64(&orbit, &abs_family(), &micron_basis(), 16);
        match verdict {
            CauchyVerdict::Cauchy { from } => assert!(from <= 40, "from = {from}"),
            other => panic!("expected cauchy, got {other}"),
        }
    }

    #[test]
    fn orbit_from_minus_one_diverges_and_defies_detection() {
        let t = three_branch_example();
        let orbit = t.orbit_f64(-1.0, 10_000, &StopRule::default());
        assert_eq!(orbit.status, crate::map::OrbitStatus::Diverged);
        assert_eq!(
            detect_cauchy_f64(&orbit, &abs_family(), &micron_basis(), 16),
            CauchyVerdict::NotWithinBudget
        );
    }

    #[test]
    fn equivalence_pairs_from_the_worked_example() {
        let t = three_branch_example();
        let stop = StopRule::default();
        let a = t.orbit_f64(3.0, 10_000, &stop);
        let b = t.orbit_f64(4.0, 10_000, &stop);
        let c = t.orbit_f64(-1.0, 10_000, &stop);
        let family = abs_family();
        let basis = micron_basis();
        assert!(cauchy_equivalent_f64(&a, &b, &family, &basis, 16));
        assert!(cauchy_equivalent_f64(&a, &a, &family, &basis, 16));
        assert!(!cauchy_equivalent_f64(&a, &c, &family, &basis, 16));
    }

    #[test]
    fn constant_orbit_is_cauchy_from_zero() {
        let t = SelfMap::Piecewise {
            pieces: vec![crate::map::Piece {
                interval: "(-inf, inf)".parse().unwrap(),
                rule: crate::map::PieceRule::Affine { slope: rat("0"), intercept: rat("7") },
            }],
        };
        let orbit = t.orbit_f64(7.0, 100, &StopRule::default());
        assert_eq!(
            detect_cauchy_f64(&orbit, &abs_family(), &micron_basis(), 16),
            CauchyVerdict::Cauchy { from: 0 }
        );
    }

    #[test]
    fn finite_cycle_verdicts_are_exact() {
        let labels = ["a", "b", "c"];
        // b and c at distance zero; a separated from both
        let rows = vec![
            vec![rat("0"), rat("1"), rat("1")],
            vec![rat("1"), rat("0"), rat("0")],
            vec![rat("1"), rat("0"), rat("0")],
        ];
        let family = PseudometricFamily::new(vec![Pseudometric::table("d", rows)]);
        // a -> b -> c -> b: cycle {b, c} inside one class
        let t = SelfMap::Table { image: vec![1, 2, 1] };
        let orbit = t.orbit_idx(0, 5);
        assert_eq!(
            detect_cauchy_finite(&orbit, &family, &labels),
            CauchyVerdict::Cauchy { from: 1 }
        );
        // 2-cycle a <-> b at positive distance never settles
        let swap = SelfMap::Table { image: vec![1, 0, 2] };
        let orbit = swap.orbit_idx(0, 5);
        assert!(matches!(
            detect_cauchy_finite(&orbit, &family, &labels),
            CauchyVerdict::NotCauchy { .. }
        ));
        // same settling class from different starts: equivalent
        let o1 = t.orbit_idx(0, 5);
        let o2 = t.orbit_idx(2, 5);
        assert!(cauchy_equivalent_finite(&o1, &o2, &family, &labels));
        let o3 = swap.orbit_idx(0, 5);
        assert!(!cauchy_equivalent_finite(&o1, &o3, &family, &labels));
    }

    #[test]
    fn short_recordings_refuse_to_certify() {
        let t = three_branch_example();
        let orbit = t.orbit_f64(3.0, 5, &StopRule::default());
        assert_eq!(
            detect_cauchy_f64(&orbit, &abs_family(), &micron_basis(), 16),
            CauchyVerdict::NotWithinBudget
        );
    }
}
