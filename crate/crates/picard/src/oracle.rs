//! Exhaustive finite-model validation.
//!
//! Everything here re-derives the theorem statements from raw orbit and
//! edge data, then compares against what the analysis layer claims, so
//! a regression in either side surfaces as a disagreement. Instances
//! stay tiny (|X| ≤ 4 by default) and map enumeration is total, which
//! keeps every verdict exact.

use crate::analysis::cauchy::cauchy_equivalent_finite;
use crate::analysis::classify::build_disconnection_counterexample;
use crate::analysis::contraction::{check_contraction, AlphaStar, ContractionVerdict};
use crate::analysis::path_bound::path_weight_bound;
use crate::graph::DirectedGraph;
use crate::map::SelfMap;
use crate::rat::{rat, Rat};
use crate::space::{Carrier, FinitePoint, Pseudometric, PseudometricFamily};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

/// Seed for every randomized check unless the caller overrides it; it
/// is echoed into reports so a run can be replayed bit for bit.
pub const DEFAULT_SEED: u64 = 1729;

/// Full map enumeration refuses beyond 5⁵ images.
pub const ENUMERATION_BUDGET: usize = 3125;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct FiniteInstance {
    pub name: String,
    pub carrier: Carrier,
    pub family: PseudometricFamily,
    pub graph: DirectedGraph,
}

impl FiniteInstance {
    /// Points on a line: the single pseudometric is |coordᵢ − coordⱼ|,
    /// which makes symmetry and the triangle inequality automatic.
    pub fn from_coords(
        name: &str,
        points: &[(&str, Rat)],
        graph: DirectedGraph,
    ) -> FiniteInstance {
        let rows = points
            .iter()
            .map(|(_, xi)| points.iter().map(|(_, xj)| (xi - xj).abs()).collect())
            .collect();
        FiniteInstance {
            name: name.to_string(),
            carrier: Carrier::Finite {
                points: points
                    .iter()
                    .map(|(l, x)| FinitePoint { label: l.to_string(), coord: Some(x.clone()) })
                    .collect(),
            },
            family: PseudometricFamily::new(vec![Pseudometric::table("d", rows)]),
            graph,
        }
    }

    pub fn from_table(
        name: &str,
        labels: &[&str],
        rows: Vec<Vec<Rat>>,
        graph: DirectedGraph,
    ) -> FiniteInstance {
        FiniteInstance {
            name: name.to_string(),
            carrier: Carrier::finite_from_labels(labels.iter().copied()),
            family: PseudometricFamily::new(vec![Pseudometric::table("d", rows)]),
            graph,
        }
    }

    pub fn n(&self) -> usize {
        self.carrier.len().expect("finite instance")
    }

    pub fn labels(&self) -> Vec<&str> {
        self.carrier.labels()
    }

    pub fn is_separating(&self) -> bool {
        self.family.is_separating(&self.carrier)
    }
}

/// The instance library every exhaustive check runs over.
pub fn bundled_instances() -> Vec<FiniteInstance> {
    let two_pair_rows = vec![
        vec![rat("0"), rat("1"), rat("2"), rat("2")],
        vec![rat("1"), rat("0"), rat("2"), rat("2")],
        vec![rat("2"), rat("2"), rat("0"), rat("1")],
        vec![rat("2"), rat("2"), rat("1"), rat("0")],
    ];
    vec![
        FiniteInstance::from_coords(
            "chain-3-finite",
            &[("a", rat("0")), ("b", rat("1")), ("c", rat("2"))],
            DirectedGraph::finite(3, [(0, 1), (1, 2)]).0,
        ),
        FiniteInstance::from_table(
            "two-component-finite",
            &["a", "b", "c", "d"],
            two_pair_rows,
            DirectedGraph::finite(4, [(0, 1), (1, 0), (2, 3), (3, 2)]).0,
        ),
        FiniteInstance::from_coords(
            "complete-3",
            &[("p", rat("0")), ("q", rat("1")), ("r", rat("3"))],
            DirectedGraph::finite_complete(3),
        ),
        FiniteInstance::from_coords(
            "isolated-pair",
            &[("u", rat("0")), ("v", rat("1"))],
            DirectedGraph::finite_loops_only(2),
        ),
        FiniteInstance::from_table(
            "non-separated-pair",
            &["s", "t"],
            vec![vec![rat("0"), rat("0")], vec![rat("0"), rat("0")]],
            DirectedGraph::finite_complete(2),
        ),
        planted_b2_instance(),
    ]
}

pub fn bundled_instance(name: &str) -> Option<FiniteInstance> {
    bundled_instances().into_iter().find(|i| i.name == name)
}

/// Four collinear points whose distances realize the planted B2 failure
/// ρ(x, y) = 4/5 against ρ(Tx, Ty) = 9/10 under [`planted_b2_map`].
pub fn planted_b2_instance() -> FiniteInstance {
    FiniteInstance::from_coords(
        "planted-b2",
        &[
            ("a", rat("0")),
            ("b", rat("4/5")),
            ("c", rat("2")),
            ("d", rat("29/10")),
        ],
        DirectedGraph::finite_complete(4),
    )
}

/// a → c, b → d, c → c, d → d: stretches the (a, b) edge from 4/5 to
/// 9/10, so B2 fails for every α < 9/8.
pub fn planted_b2_map() -> SelfMap {
    SelfMap::Table { image: vec![2, 3, 2, 3] }
}

// ---------------------------------------------------------------------
// enumeration
// ---------------------------------------------------------------------

/// All |X|^|X| self-maps in a fixed order: map k sends vertex i to
/// (k / |X|^i) mod |X|, so the image of vertex 0 cycles fastest.
pub fn enumerate_self_maps(n: usize) -> Result<impl Iterator<Item = SelfMap>, String> {
    let total = (n as u128).pow(n as u32);
    if total > ENUMERATION_BUDGET as u128 {
        return Err(format!(
            "|X|^|X| = {total} self-maps on {n} points exceeds the enumeration budget of {ENUMERATION_BUDGET}"
        ));
    }
    Ok((0..total as usize).map(move |code| {
        let mut rest = code;
        let image = (0..n)
            .map(|_| {
                let v = rest % n;
                rest /= n;
                v
            })
            .collect();
        SelfMap::Table { image }
    }))
}

/// The contraction stream: enumeration index, map, and its verdict.
pub fn enumerate_contractions(
    inst: &FiniteInstance,
) -> Result<Vec<(usize, SelfMap, ContractionVerdict)>, String> {
    let maps = enumerate_self_maps(inst.n())?;
    Ok(maps
        .enumerate()
        .filter_map(|(idx, map)| {
            let v = check_contraction(&map, &inst.graph, &inst.family, &inst.carrier);
            v.is_contraction.then_some((idx, map, v))
        })
        .collect())
}

// ---------------------------------------------------------------------
// verdicts
// ---------------------------------------------------------------------

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub struct Counterexample {
    pub instance: String,
    pub map: String,
    pub details: String,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub struct TheoremVerdict {
    pub theorem: String,
    pub instance: String,
    pub holds: bool,
    pub counterexample: Option<Counterexample>,
    pub maps_enumerated: usize,
    pub contractions_found: usize,
    pub notes: Vec<String>,
}

fn render_map(map: &SelfMap, labels: &[&str]) -> String {
    match map {
        SelfMap::Table { image } => image
            .iter()
            .enumerate()
            .map(|(i, &j)| format!("{} -> {}", labels[i], labels[j]))
            .collect::<Vec<_>>()
            .join(", "),
        SelfMap::Piecewise { .. } => "piecewise".to_string(),
    }
}

/// B2 at a concrete constant, read off the pointwise reduction.
fn b2_at(verdict: &ContractionVerdict, alpha: &Rat) -> bool {
    verdict.zero_edge_ok
        && match &verdict.alpha_star {
            AlphaStar::Value(v) => alpha >= v,
            AlphaStar::Undefined => true,
            AlphaStar::Unbounded => false,
        }
}

fn alpha_eighths() -> Vec<Rat> {
    (1..8).map(|k| Rat::new(k, 8)).collect()
}

fn settle_target(map: &SelfMap, x: usize, n: usize) -> Option<usize> {
    let orbit = map.orbit_idx(x, n + 2);
    let cycle = orbit.cycle().expect("n + 2 steps close a cycle");
    (cycle.len() == 1).then(|| cycle[0])
}

// ---------------------------------------------------------------------
// main1: weak connectivity ⇔ orbit equivalence ⇔ at most one fixed point
// ---------------------------------------------------------------------

pub fn verify_main1(inst: &FiniteInstance) -> TheoremVerdict {
    let n = inst.n();
    let labels = inst.labels();
    let contractions = enumerate_contractions(inst).expect("bundled instances are within budget");
    let maps_enumerated = (n as u128).pow(n as u32) as usize;
    let separating = inst.is_separating();

    let connected = inst.graph.is_weakly_connected_idx();

    let mut equiv_all = true;
    let mut equiv_witness: Option<Counterexample> = None;
    for (idx, map, _) in &contractions {
        let orbits: Vec<_> = (0..n).map(|x| map.orbit_idx(x, n + 2)).collect();
        'pairs: for x in 0..n {
            for y in x + 1..n {
                if !cauchy_equivalent_finite(&orbits[x], &orbits[y], &inst.family, &labels) {
                    equiv_all = false;
                    equiv_witness.get_or_insert_with(|| Counterexample {
                        instance: inst.name.clone(),
                        map: render_map(map, &labels),
                        details: format!(
                            "contraction #{idx}: orbits from {} and {} are not Cauchy equivalent",
                            labels[x], labels[y]
                        ),
                    });
                    break 'pairs;
                }
            }
        }
    }

    let mut at_most_one = true;
    let mut fix_witness: Option<Counterexample> = None;
    for (idx, map, _) in &contractions {
        let fix = map.fixed_point_indices();
        if fix.len() > 1 {
            at_most_one = false;
            fix_witness.get_or_insert_with(|| Counterexample {
                instance: inst.name.clone(),
                map: render_map(map, &labels),
                details: format!(
                    "contraction #{idx} fixes {}",
                    fix.iter().map(|&i| labels[i]).collect::<Vec<_>>().join(" and ")
                ),
            });
            break;
        }
    }

    let mut notes = vec![
        format!("(i) G is weakly connected = {connected}"),
        format!(
            "(ii) all orbit pairs Cauchy equivalent across {} contractions = {equiv_all}",
            contractions.len()
        ),
        format!("(iii) every contraction has at most one fixed point = {at_most_one}"),
    ];

    let mut holds;
    let mut counterexample = None;
    if separating {
        holds = connected == equiv_all && equiv_all == at_most_one;
        if !holds {
            counterexample = equiv_witness.or(fix_witness);
        }
    } else {
        // without separation only (iii) ⇒ (i) survives
        holds = !at_most_one || connected;
        notes.push(
            "family is not separating: only the (iii) implies (i) direction is claimed".to_string(),
        );
        if !holds {
            counterexample = Some(Counterexample {
                instance: inst.name.clone(),
                map: String::new(),
                details: "every contraction has at most one fixed point, yet G is disconnected"
                    .to_string(),
            });
        }
    }

    if !connected {
        let comp0 = inst.graph.component_idx(0);
        let y0 = (1..n).find(|v| !comp0.contains(v)).expect("disconnected graph");
        match build_disconnection_counterexample(&inst.graph, 0, y0) {
            Ok(cmap) => {
                let v = check_contraction(&cmap, &inst.graph, &inst.family, &inst.carrier);
                let fix = cmap.fixed_point_indices();
                let replayed = v.is_contraction
                    && v.alpha_star.least_threshold() == Some(Rat::zero())
                    && fix == vec![0, y0];
                if replayed {
                    notes.push(format!(
                        "disconnection counterexample replays: {} is a contraction with alpha-star threshold 0 and Fix = {{{}, {}}}",
                        render_map(&cmap, &labels),
                        labels[0],
                        labels[y0]
                    ));
                } else {
                    holds = false;
                    counterexample.get_or_insert(Counterexample {
                        instance: inst.name.clone(),
                        map: render_map(&cmap, &labels),
                        details: format!(
                            "disconnection counterexample failed to replay: contraction = {}, threshold = {:?}, Fix = {:?}",
                            v.is_contraction,
                            v.alpha_star.least_threshold(),
                            fix.iter().map(|&i| labels[i]).collect::<Vec<_>>()
                        ),
                    });
                }
            }
            Err(e) => {
                holds = false;
                counterexample.get_or_insert(Counterexample {
                    instance: inst.name.clone(),
                    map: String::new(),
                    details: format!("disconnection counterexample construction failed: {e}"),
                });
            }
        }
    }

    TheoremVerdict {
        theorem: "main1".to_string(),
        instance: inst.name.clone(),
        holds,
        counterexample,
        maps_enumerated,
        contractions_found: contractions.len(),
        notes,
    }
}

// ---------------------------------------------------------------------
// B2 reduction: pointwise ratios versus the entourage-quantified form
// ---------------------------------------------------------------------

/// One entourage check of B2: does (x, y) ∈ V(ρ_pm, r) ∩ E(G) imply
/// (Tx, Ty) ∈ αV for every edge? `None` when it holds, otherwise a
/// refutation witness naming the radius.
pub fn b2_direct_check_at(
    map: &SelfMap,
    graph: &DirectedGraph,
    family: &PseudometricFamily,
    labels: &[&str],
    alpha: &Rat,
    pm: usize,
    r: &Rat,
) -> Option<String> {
    let member = &family.members[pm];
    let scaled = alpha * r;
    for &(i, j) in graph.edges() {
        if member.dist_idx(i, j) < *r {
            let image = member.dist_idx(map.eval_idx(i), map.eval_idx(j));
            if image >= scaled {
                return Some(format!(
                    "edge ({}, {}) lies in V({}, {r}) but its image pair sits at distance {image} >= alpha * r = {scaled}",
                    labels[i], labels[j], member.id
                ));
            }
        }
    }
    None
}

/// The instance-wide radius grid: K evenly spaced radii spanning
/// (0, 2·max-distance], plus each positive edge distance nudged a
/// relative 10⁻⁹ to either side.
fn radius_grid(inst: &FiniteInstance, k: usize) -> Vec<Rat> {
    let n = inst.n();
    let maxd = inst.family.max_distance(n);
    let mut grid = Vec::new();
    if maxd.is_positive() {
        let step = &(&rat("2") * &maxd) / &Rat::new(k as i64, 1);
        for j in 1..=k {
            grid.push(&step * &Rat::new(j as i64, 1));
        }
    } else {
        grid.push(Rat::one());
    }
    let lo = &Rat::one() - &rat("1/1000000000");
    let hi = &Rat::one() + &rat("1/1000000000");
    for &(i, j) in inst.graph.edges() {
        for m in &inst.family.members {
            let d = m.dist_idx(i, j);
            if d.is_positive() {
                grid.push(&d * &lo);
                grid.push(&d * &hi);
            }
        }
    }
    grid
}

/// Per-map midpoint radii (ρ(x,y) + ρ(Tx,Ty)) / 2 over the edges: when
/// a map stretches an edge, the midpoint lands inside the refuting
/// window, so the direct check cannot miss the failure.
fn midpoint_radii(inst: &FiniteInstance, map: &SelfMap) -> Vec<Rat> {
    let mut mids = Vec::new();
    for &(i, j) in inst.graph.edges() {
        for m in &inst.family.members {
            let mid = &(&m.dist_idx(i, j) + &m.dist_idx(map.eval_idx(i), map.eval_idx(j)))
                / &rat("2");
            if mid.is_positive() {
                mids.push(mid);
            }
        }
    }
    mids
}

pub fn verify_b2_reduction(inst: &FiniteInstance, k: usize) -> TheoremVerdict {
    let n = inst.n();
    let labels = inst.labels();
    let alphas = alpha_eighths();
    let base_grid = radius_grid(inst, k);
    let maps: Vec<SelfMap> = match enumerate_self_maps(n) {
        Ok(m) => m.collect(),
        Err(e) => {
            return TheoremVerdict {
                theorem: "b2-reduction".to_string(),
                instance: inst.name.clone(),
                holds: false,
                counterexample: None,
                maps_enumerated: 0,
                contractions_found: 0,
                notes: vec![e],
            }
        }
    };

    let mut holds = true;
    let mut counterexample = None;
    let mut contractions = 0usize;
    for (idx, map) in maps.iter().enumerate() {
        let verdict = check_contraction(map, &inst.graph, &inst.family, &inst.carrier);
        if verdict.is_contraction {
            contractions += 1;
        }
        // midpoints first: they refute a stretched edge immediately
        let mut radii = midpoint_radii(inst, map);
        radii.extend(base_grid.iter().cloned());
        for alpha in &alphas {
            let pointwise = b2_at(&verdict, alpha);
            let mut refutation = None;
            'direct: for pm in 0..inst.family.members.len() {
                for r in &radii {
                    if let Some(w) =
                        b2_direct_check_at(map, &inst.graph, &inst.family, &labels, alpha, pm, r)
                    {
                        refutation = Some(w);
                        break 'direct;
                    }
                }
            }
            let direct = refutation.is_none();
            if pointwise != direct {
                holds = false;
                counterexample.get_or_insert_with(|| Counterexample {
                    instance: inst.name.clone(),
                    map: render_map(map, &labels),
                    details: format!(
                        "map #{idx}, alpha = {alpha}: pointwise says {pointwise}, the entourage sweep says {direct}{}",
                        refutation.map_or(String::new(), |w| format!(" ({w})"))
                    ),
                });
            }
        }
    }

    TheoremVerdict {
        theorem: "b2-reduction".to_string(),
        instance: inst.name.clone(),
        holds,
        counterexample,
        maps_enumerated: maps.len(),
        contractions_found: contractions,
        notes: vec![format!(
            "alpha grid = eighths, radius grid = {} points spanning (0, 2*max-distance] plus critical and midpoint radii",
            k
        )],
    }
}

// ---------------------------------------------------------------------
// main2: the cardinality bijection and its satellite assertions
// ---------------------------------------------------------------------

pub fn verify_main2_cardinality(inst: &FiniteInstance) -> TheoremVerdict {
    let n = inst.n();
    let labels = inst.labels();
    let maps_enumerated = (n as u128).pow(n as u32) as usize;
    if !inst.is_separating() {
        return TheoremVerdict {
            theorem: "main2-cardinality".to_string(),
            instance: inst.name.clone(),
            holds: true,
            counterexample: None,
            maps_enumerated: 0,
            contractions_found: 0,
            notes: vec![
                "family is not separating, so the main2 hypotheses never hold here; nothing to check"
                    .to_string(),
            ],
        };
    }
    let contractions = enumerate_contractions(inst).expect("bundled instances are within budget");
    let comps = inst.graph.components();
    let mut comp_of = vec![0usize; n];
    for (c, comp) in comps.iter().enumerate() {
        for &v in comp {
            comp_of[v] = c;
        }
    }
    let connected = comps.len() == 1;

    let mut holds = true;
    let mut counterexample: Option<Counterexample> = None;
    let fail = |map: &SelfMap, labels: &[&str], idx: usize, what: String,
                    holds: &mut bool,
                    cex: &mut Option<Counterexample>,
                    name: &str| {
        *holds = false;
        cex.get_or_insert(Counterexample {
            instance: name.to_string(),
            map: render_map(map, labels),
            details: format!("contraction #{idx}: {what}"),
        });
    };

    for (idx, map, _) in &contractions {
        let fix = map.fixed_point_indices();
        let x_t = inst.graph.x_t_indices(map);
        let comps_meeting: Vec<usize> = (0..comps.len())
            .filter(|&c| x_t.iter().any(|&x| comp_of[x] == c))
            .collect();
        let settles: Vec<Option<usize>> = (0..n).map(|x| settle_target(map, x, n)).collect();

        // (3) the bijection
        if fix.len() != comps_meeting.len() {
            fail(
                map,
                &labels,
                *idx,
                format!(
                    "|Fix| = {} but {} components meet X_T",
                    fix.len(),
                    comps_meeting.len()
                ),
                &mut holds,
                &mut counterexample,
                &inst.name,
            );
            continue;
        }
        // (1) restricted Picard on every component meeting X_T
        for &c in &comps_meeting {
            let targets: Vec<Option<usize>> =
                comps[c].iter().map(|&v| settles[v]).collect();
            let ok = match targets.first().copied().flatten() {
                Some(t) => {
                    targets.iter().all(|&s| s == Some(t))
                        && comp_of[t] == c
                        && fix.iter().filter(|&&p| comp_of[p] == c).count() == 1
                        && fix.contains(&t)
                }
                None => false,
            };
            if !ok {
                fail(
                    map,
                    &labels,
                    *idx,
                    format!(
                        "component {{{}}} meets X_T but is not restricted Picard",
                        comps[c].iter().map(|&v| labels[v]).collect::<Vec<_>>().join(", ")
                    ),
                    &mut holds,
                    &mut counterexample,
                    &inst.name,
                );
            }
        }
        // (2) global Picard when connected and X_T is inhabited
        if connected && !x_t.is_empty() {
            let picard = fix.len() == 1 && settles.iter().all(|&s| s == Some(fix[0]));
            if !picard {
                fail(
                    map,
                    &labels,
                    *idx,
                    "connected with X_T nonempty, yet not a Picard operator".to_string(),
                    &mut holds,
                    &mut counterexample,
                    &inst.name,
                );
            }
        }
        // (4) existence
        if fix.is_empty() != x_t.is_empty() {
            fail(
                map,
                &labels,
                *idx,
                format!("Fix empty = {} but X_T empty = {}", fix.is_empty(), x_t.is_empty()),
                &mut holds,
                &mut counterexample,
                &inst.name,
            );
        }
        // (5) uniqueness
        let one_component =
            !x_t.is_empty() && x_t.iter().all(|&x| comp_of[x] == comp_of[x_t[0]]);
        if (fix.len() == 1) != one_component {
            fail(
                map,
                &labels,
                *idx,
                format!(
                    "|Fix| = {} but X_T inside a single component = {one_component}",
                    fix.len()
                ),
                &mut holds,
                &mut counterexample,
                &inst.name,
            );
        }
        // (6) weakly Picard on X' = union of components meeting X_T
        for &c in &comps_meeting {
            for &v in &comps[c] {
                let ok = matches!(settles[v], Some(t) if fix.contains(&t));
                if !ok {
                    fail(
                        map,
                        &labels,
                        *idx,
                        format!("orbit from {} in X' does not settle on a fixed point", labels[v]),
                        &mut holds,
                        &mut counterexample,
                        &inst.name,
                    );
                }
            }
        }
        // (7) weakly Picard everywhere when X_T = X
        if x_t.len() == n {
            let weakly = (0..n).all(|v| matches!(settles[v], Some(t) if fix.contains(&t)));
            if !weakly {
                fail(
                    map,
                    &labels,
                    *idx,
                    "X_T = X, yet some orbit misses the fixed points".to_string(),
                    &mut holds,
                    &mut counterexample,
                    &inst.name,
                );
            }
        }
    }

    TheoremVerdict {
        theorem: "main2-cardinality".to_string(),
        instance: inst.name.clone(),
        holds,
        counterexample,
        maps_enumerated,
        contractions_found: contractions.len(),
        notes: vec!["checked assertions 1, 2, 3, 4, 5, 6, 7 on every contraction".to_string()],
    }
}

// ---------------------------------------------------------------------
// path-weight lemma over random trials
// ---------------------------------------------------------------------

pub fn verify_path_bound(inst: &FiniteInstance, trials: usize, seed: u64) -> TheoremVerdict {
    let n = inst.n();
    let labels = inst.labels();
    let contractions = enumerate_contractions(inst).expect("bundled instances are within budget");
    let maps_enumerated = (n as u128).pow(n as u32) as usize;
    let usable: Vec<(usize, &SelfMap, Rat)> = contractions
        .iter()
        .filter_map(|(idx, map, v)| {
            let t = v.alpha_star.least_threshold()?;
            // strictly inside (t, 1): admissible and valid for the lemma
            Some((*idx, map, &(&t + &Rat::one()) / &rat("2")))
        })
        .collect();
    if usable.is_empty() {
        return TheoremVerdict {
            theorem: "path-bound".to_string(),
            instance: inst.name.clone(),
            holds: true,
            counterexample: None,
            maps_enumerated,
            contractions_found: 0,
            notes: vec!["no contractions to sample; nothing to check".to_string()],
        };
    }

    let maxd = inst.family.max_distance(n);
    let slack = rat("1/1000");
    let tiny = rat("1/1000000000");
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut holds = true;
    let mut counterexample = None;
    for trial in 0..trials {
        let (idx, map, alpha) = &usable[rng.gen_range(0..usable.len())];
        let x = rng.gen_range(0..n);
        let comp = inst.graph.component_idx(x);
        let y = comp[rng.gen_range(0..comp.len())];
        let path = inst
            .graph
            .find_path_idx(x, y)
            .expect("y was drawn from the component of x");
        let pm = rng.gen_range(0..inst.family.members.len());
        let radius = if maxd.is_positive() {
            &maxd * &Rat::new(rng.gen_range(1..=16), 8)
        } else {
            Rat::one()
        };
        let v = crate::space::BasicEntourage::single(pm, radius);
        let steps = rng.gen_range(1..=10usize);
        match path_weight_bound(
            map, &inst.graph, &inst.family, &v, &path, alpha, steps, &slack, &tiny,
        ) {
            Ok((r, member)) => {
                if !member || !r.is_positive() {
                    holds = false;
                    counterexample.get_or_insert_with(|| Counterexample {
                        instance: inst.name.clone(),
                        map: render_map(map, &labels),
                        details: format!(
                            "trial {trial}: contraction #{idx}, path {:?}, n = {steps}: r = {r}, member = {member}",
                            path.iter().map(|&i| labels[i]).collect::<Vec<_>>()
                        ),
                    });
                }
            }
            Err(e) => {
                holds = false;
                counterexample.get_or_insert_with(|| Counterexample {
                    instance: inst.name.clone(),
                    map: render_map(map, &labels),
                    details: format!("trial {trial}: {e}"),
                });
            }
        }
    }

    TheoremVerdict {
        theorem: "path-bound".to_string(),
        instance: inst.name.clone(),
        holds,
        counterexample,
        maps_enumerated,
        contractions_found: contractions.len(),
        notes: vec![format!("{trials} random trials, seed = {seed}")],
    }
}

// ---------------------------------------------------------------------
// symmetry: B1/B2 transfer to G⁻¹ and G̃
// ---------------------------------------------------------------------

pub fn verify_tilde(inst: &FiniteInstance) -> TheoremVerdict {
    let n = inst.n();
    let labels = inst.labels();
    let reverse = inst.graph.reverse();
    let closure = inst.graph.undirected_closure();
    let alphas = alpha_eighths();

    let mut holds = true;
    let mut counterexample = None;
    let mut contractions = 0usize;
    let maps: Vec<SelfMap> = enumerate_self_maps(n)
        .expect("bundled instances are within budget")
        .collect();
    for (idx, map) in maps.iter().enumerate() {
        let vg = check_contraction(map, &inst.graph, &inst.family, &inst.carrier);
        let vr = check_contraction(map, &reverse, &inst.family, &inst.carrier);
        let vc = check_contraction(map, &closure, &inst.family, &inst.carrier);
        if vg.is_contraction {
            contractions += 1;
        }
        let mut problems = Vec::new();
        if vg.preserves_edges && !(vr.preserves_edges && vc.preserves_edges) {
            problems.push("B1 holds for G but not for G-inverse or the closure".to_string());
        }
        for alpha in &alphas {
            if b2_at(&vg, alpha) && !(b2_at(&vr, alpha) && b2_at(&vc, alpha)) {
                problems.push(format!("B2 at alpha = {alpha} does not transfer"));
            }
        }
        if vg.is_contraction && !(vr.is_contraction && vc.is_contraction) {
            problems.push("a Banach G-contraction failed on G-inverse or the closure".to_string());
        }
        if let Some(p) = problems.first() {
            holds = false;
            counterexample.get_or_insert_with(|| Counterexample {
                instance: inst.name.clone(),
                map: render_map(map, &labels),
                details: format!("map #{idx}: {p}"),
            });
        }
    }

    TheoremVerdict {
        theorem: "tilde".to_string(),
        instance: inst.name.clone(),
        holds,
        counterexample,
        maps_enumerated: maps.len(),
        contractions_found: contractions,
        notes: vec!["checked B1, B2 (alpha grid), and the combined property for every map".to_string()],
    }
}

// ---------------------------------------------------------------------
// component invariance: T x₀ ∈ [x₀]_G̃ traps and contracts the component
// ---------------------------------------------------------------------

fn induced_subinstance(inst: &FiniteInstance, comp: &[usize]) -> FiniteInstance {
    let labels = inst.labels();
    let rows: Vec<Vec<Vec<Rat>>> = inst
        .family
        .members
        .iter()
        .map(|m| {
            comp.iter()
                .map(|&i| comp.iter().map(|&j| m.dist_idx(i, j)).collect())
                .collect()
        })
        .collect();
    let members = inst
        .family
        .members
        .iter()
        .zip(rows)
        .map(|(m, r)| Pseudometric::table(m.id.clone(), r))
        .collect();
    let closure = inst.graph.undirected_closure();
    let mut edges = Vec::new();
    for (pi, &i) in comp.iter().enumerate() {
        for (pj, &j) in comp.iter().enumerate() {
            if closure.has_edge_idx(i, j) {
                edges.push((pi, pj));
            }
        }
    }
    FiniteInstance {
        name: format!("{}[component]", inst.name),
        carrier: Carrier::finite_from_labels(comp.iter().map(|&i| labels[i])),
        family: PseudometricFamily::new(members),
        graph: DirectedGraph::finite(comp.len(), edges).0,
    }
}

pub fn verify_component_invariance(inst: &FiniteInstance) -> TheoremVerdict {
    let n = inst.n();
    let labels = inst.labels();
    let contractions = enumerate_contractions(inst).expect("bundled instances are within budget");
    let maps_enumerated = (n as u128).pow(n as u32) as usize;
    let comps = inst.graph.components();

    let mut holds = true;
    let mut counterexample: Option<Counterexample> = None;
    for (idx, map, _) in &contractions {
        for comp in &comps {
            if !comp.iter().any(|&x0| comp.contains(&map.eval_idx(x0))) {
                continue; // no x₀ with Tx₀ in the component
            }
            let mut problems = Vec::new();
            if let Some(&escapee) =
                comp.iter().find(|&&y| !comp.contains(&map.eval_idx(y)))
            {
                problems.push(format!(
                    "T({}) leaves the component, so it is not T-invariant",
                    labels[escapee]
                ));
            } else {
                let sub = induced_subinstance(inst, comp);
                let sub_map = SelfMap::Table {
                    image: comp
                        .iter()
                        .map(|&i| {
                            comp.iter()
                                .position(|&j| j == map.eval_idx(i))
                                .expect("component is T-invariant")
                        })
                        .collect(),
                };
                let sv = check_contraction(&sub_map, &sub.graph, &sub.family, &sub.carrier);
                if !sv.is_contraction {
                    problems.push(
                        "the restriction is not a Banach contraction for the induced component graph"
                            .to_string(),
                    );
                }
                for (ai, &x) in comp.iter().enumerate() {
                    for &y in &comp[ai + 1..] {
                        let ox = map.orbit_idx(x, n + 2);
                        let oy = map.orbit_idx(y, n + 2);
                        if !cauchy_equivalent_finite(&ox, &oy, &inst.family, &labels) {
                            problems.push(format!(
                                "orbits from {} and {} are not Cauchy equivalent",
                                labels[x], labels[y]
                            ));
                        }
                    }
                }
            }
            if let Some(p) = problems.first() {
                holds = false;
                counterexample.get_or_insert(Counterexample {
                    instance: inst.name.clone(),
                    map: render_map(map, &labels),
                    details: format!(
                        "contraction #{idx}, component {{{}}}: {p}",
                        comp.iter().map(|&v| labels[v]).collect::<Vec<_>>().join(", ")
                    ),
                });
            }
        }
    }

    TheoremVerdict {
        theorem: "component-invariance".to_string(),
        instance: inst.name.clone(),
        holds,
        counterexample,
        maps_enumerated,
        contractions_found: contractions.len(),
        notes: Vec::new(),
    }
}

/// The whole battery, as the `validate` command runs it.
pub fn verify_all(inst: &FiniteInstance, k: usize, trials: usize, seed: u64) -> Vec<TheoremVerdict> {
    vec![
        verify_main1(inst),
        verify_b2_reduction(inst, k),
        verify_main2_cardinality(inst),
        verify_path_bound(inst, trials, seed),
        verify_tilde(inst),
        verify_component_invariance(inst),
    ]
}
