//! Line-oriented config files.
//!
//! A config is a sequence of `[block]` headers with `key = value` lines;
//! `#` starts a comment line. Numbers accept integers, `p/q` fractions,
//! decimals, and scientific notation. Parsing collects *every* problem
//! it can find rather than stopping at the first, so a fix round trip
//! is one edit session, not ten.

use crate::graph::{DirectedGraph, RealGraphKind, RealOrder};
use crate::interval::{Interval, RealSet};
use crate::map::{Piece, PieceRule, SelfMap};
use crate::rat::Rat;
use crate::space::{BasicEntourage, Carrier, FinitePoint, Pseudometric, PseudometricFamily};
use serde::{Deserialize, Serialize};
use std::path::Path;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub struct AnalysisConfig {
    /// Basis entourages as (pseudometric id, radius), ids resolved.
    pub basis: Vec<(String, Rat)>,
    /// Probe starting points exactly as written.
    pub probes: Vec<String>,
    /// Probe resolution for a finite carrier.
    pub probe_indices: Vec<usize>,
    /// Probe resolution for the real carrier.
    pub probe_points: Vec<Rat>,
    pub budget: usize,
    pub window: usize,
    pub sequentially_complete: Option<bool>,
    pub property_star: Option<bool>,
}

impl Default for AnalysisConfig {
    fn default() -> Self {
        AnalysisConfig {
            basis: Vec::new(),
            probes: Vec::new(),
            probe_indices: Vec::new(),
            probe_points: Vec::new(),
            budget: 10_000,
            window: 16,
            sequentially_complete: None,
            property_star: None,
        }
    }
}

impl AnalysisConfig {
    pub fn basis_entourages(&self, family: &PseudometricFamily) -> Vec<BasicEntourage> {
        self.basis
            .iter()
            .map(|(id, r)| {
                let pm = family
                    .members
                    .iter()
                    .position(|m| m.id == *id)
                    .expect("entourage ids are resolved during parsing");
                BasicEntourage::single(pm, r.clone())
            })
            .collect()
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub struct SpaceConfig {
    pub carrier: Carrier,
    pub family: PseudometricFamily,
    pub graph: DirectedGraph,
    pub map: SelfMap,
    pub analysis: AnalysisConfig,
}

pub fn parse_config(path: &Path) -> Result<SpaceConfig, Vec<String>> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| vec![format!("cannot read {}: {e}", path.display())])?;
    parse_config_str(&text)
}

// ---------------------------------------------------------------------
// lexing
// ---------------------------------------------------------------------

struct Entry {
    line: usize,
    key: String,
    value: String,
}

struct Block {
    name: String,
    arg: Option<String>,
    line: usize,
    entries: Vec<Entry>,
}

fn lex(text: &str, errs: &mut Vec<String>) -> Vec<Block> {
    let mut blocks: Vec<Block> = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let no = i + 1;
        let t = raw.trim();
        if t.is_empty() || t.starts_with('#') {
            continue;
        }
        if let Some(inner) = t.strip_prefix('[') {
            let Some(inner) = inner.strip_suffix(']') else {
                errs.push(format!("line {no}: block header must look like [name]"));
                continue;
            };
            let inner = inner.trim();
            let (name, arg) = match inner.split_once(char::is_whitespace) {
                Some((n, a)) => (n.to_string(), Some(a.trim().to_string())),
                None => (inner.to_string(), None),
            };
            if name.is_empty() {
                errs.push(format!("line {no}: empty block header"));
                continue;
            }
            blocks.push(Block { name, arg, line: no, entries: Vec::new() });
        } else if let Some((k, v)) = t.split_once('=') {
            match blocks.last_mut() {
                Some(b) => b.entries.push(Entry {
                    line: no,
                    key: k.trim().to_string(),
                    value: v.trim().to_string(),
                }),
                None => errs.push(format!(
                    "line {no}: `{}` appears before any [block] header",
                    k.trim()
                )),
            }
        } else {
            errs.push(format!("line {no}: expected `key = value` or a [block] header"));
        }
    }
    blocks
}

// ---------------------------------------------------------------------
// small helpers
// ---------------------------------------------------------------------

fn parse_rat(s: &str, what: &str, line: usize, errs: &mut Vec<String>) -> Option<Rat> {
    match s.parse::<Rat>() {
        Ok(r) => Some(r),
        Err(_) => {
            errs.push(format!("line {line}: {what}: `{s}` is not a number"));
            None
        }
    }
}

fn parse_bool(s: &str, what: &str, line: usize, errs: &mut Vec<String>) -> Option<bool> {
    match s {
        "true" => Some(true),
        "false" => Some(false),
        other => {
            errs.push(format!("line {line}: {what} must be true or false, not `{other}`"));
            None
        }
    }
}

fn comma_list(s: &str) -> Vec<&str> {
    s.split(',').map(str::trim).collect()
}

/// One `value` per singleton key; repeated keys are flagged.
struct KeyBag<'a> {
    entries: &'a [Entry],
}

impl<'a> KeyBag<'a> {
    fn get(&self, key: &str, errs: &mut Vec<String>) -> Option<&'a Entry> {
        let mut found = None;
        for e in self.entries.iter().filter(|e| e.key == key) {
            if found.is_some() {
                errs.push(format!("line {}: duplicate key `{key}`", e.line));
            } else {
                found = Some(e);
            }
        }
        found
    }
}

fn flag_unknown_keys(block: &Block, allowed: &[&str], prefixes: &[&str], errs: &mut Vec<String>) {
    for e in &block.entries {
        let known = allowed.contains(&e.key.as_str())
            || prefixes.iter().any(|p| e.key.starts_with(p) && e.key.len() > p.len());
        if !known {
            errs.push(format!(
                "line {}: unknown key `{}` in [{}]",
                e.line, e.key, block.name
            ));
        }
    }
}

// ---------------------------------------------------------------------
// carrier
// ---------------------------------------------------------------------

fn build_carrier(block: &Block, errs: &mut Vec<String>) -> Option<Carrier> {
    let bag = KeyBag { entries: &block.entries };
    let kind = bag.get("kind", errs);
    let Some(kind) = kind else {
        errs.push(format!("line {}: [carrier] needs `kind = finite` or `kind = real`", block.line));
        return None;
    };
    match kind.value.as_str() {
        "finite" => {
            flag_unknown_keys(block, &["kind", "labels", "coords"], &[], errs);
            let Some(labels_e) = bag.get("labels", errs) else {
                errs.push(format!("line {}: a finite carrier needs `labels = a, b, ...`", block.line));
                return None;
            };
            let labels = comma_list(&labels_e.value);
            if labels.iter().any(|l| l.is_empty()) {
                errs.push(format!("line {}: empty label in the list", labels_e.line));
                return None;
            }
            let coords: Option<Vec<Rat>> = match bag.get("coords", errs) {
                Some(ce) => {
                    let toks = comma_list(&ce.value);
                    if toks.len() != labels.len() {
                        errs.push(format!(
                            "line {}: {} coords for {} labels",
                            ce.line,
                            toks.len(),
                            labels.len()
                        ));
                        return None;
                    }
                    let mut cs = Vec::new();
                    for t in toks {
                        cs.push(parse_rat(t, "coords", ce.line, errs)?);
                    }
                    Some(cs)
                }
                None => None,
            };
            Some(Carrier::Finite {
                points: labels
                    .iter()
                    .enumerate()
                    .map(|(i, l)| FinitePoint {
                        label: l.to_string(),
                        coord: coords.as_ref().map(|cs| cs[i].clone()),
                    })
                    .collect(),
            })
        }
        "real" => {
            flag_unknown_keys(block, &["kind", "domain", "exclude", "grid"], &[], errs);
            let Some(domain_e) = bag.get("domain", errs) else {
                errs.push(format!(
                    "line {}: the real carrier needs `domain = [lo, hi]`",
                    block.line
                ));
                return None;
            };
            let iv: Interval = match domain_e.value.parse() {
                Ok(iv) => iv,
                Err(_) => {
                    errs.push(format!(
                        "line {}: `{}` is not an interval (write e.g. [1, 4] or (-inf, inf))",
                        domain_e.line, domain_e.value
                    ));
                    return None;
                }
            };
            let mut domain = RealSet::single(iv);
            if let Some(ex) = bag.get("exclude", errs) {
                for t in comma_list(&ex.value) {
                    let p = parse_rat(t, "exclude", ex.line, errs)?;
                    domain = domain.remove_point(&p);
                }
            }
            let mut grid = Vec::new();
            if let Some(g) = bag.get("grid", errs) {
                for t in comma_list(&g.value) {
                    grid.push(parse_rat(t, "grid", g.line, errs)?);
                }
            }
            Some(Carrier::Real { domain, grid })
        }
        other => {
            errs.push(format!(
                "line {}: carrier kind `{other}` is not one of finite, real",
                kind.line
            ));
            None
        }
    }
}

// ---------------------------------------------------------------------
// pseudometrics
// ---------------------------------------------------------------------

fn build_pseudometric(
    block: &Block,
    carrier: Option<&Carrier>,
    errs: &mut Vec<String>,
) -> Option<Pseudometric> {
    let Some(id) = block.arg.clone() else {
        errs.push(format!(
            "line {}: the block needs a name: [pseudometric d]",
            block.line
        ));
        return None;
    };
    let bag = KeyBag { entries: &block.entries };
    let Some(kind) = bag.get("kind", errs) else {
        errs.push(format!(
            "line {}: [pseudometric {id}] needs `kind = table` or `kind = scaled-abs`",
            block.line
        ));
        return None;
    };
    match kind.value.as_str() {
        "table" => {
            flag_unknown_keys(block, &["kind"], &["row "], errs);
            let carrier = carrier?;
            let labels = carrier.labels();
            if labels.is_empty() {
                errs.push(format!(
                    "line {}: distance tables need a finite carrier",
                    block.line
                ));
                return None;
            }
            let mut rows: Vec<Option<Vec<Rat>>> = vec![None; labels.len()];
            for e in block.entries.iter().filter(|e| e.key.starts_with("row ")) {
                let label = e.key["row ".len()..].trim();
                let Some(i) = labels.iter().position(|l| *l == label) else {
                    errs.push(format!(
                        "line {}: `{label}` is not a carrier label",
                        e.line
                    ));
                    continue;
                };
                if rows[i].is_some() {
                    errs.push(format!("line {}: duplicate row for `{label}`", e.line));
                    continue;
                }
                let toks = comma_list(&e.value);
                if toks.len() != labels.len() {
                    errs.push(format!(
                        "line {}: row `{label}` has {} entries for a {}-point carrier",
                        e.line,
                        toks.len(),
                        labels.len()
                    ));
                    continue;
                }
                let mut vals = Vec::new();
                for t in toks {
                    vals.push(parse_rat(t, "row entry", e.line, errs)?);
                }
                rows[i] = Some(vals);
            }
            let mut table = Vec::new();
            for (i, row) in rows.into_iter().enumerate() {
                match row {
                    Some(r) => table.push(r),
                    None => {
                        errs.push(format!(
                            "line {}: [pseudometric {id}] is missing `row {}`",
                            block.line, labels[i]
                        ));
                        return None;
                    }
                }
            }
            Some(Pseudometric::table(id, table))
        }
        "scaled-abs" => {
            flag_unknown_keys(block, &["kind", "factor"], &[], errs);
            let Some(f) = bag.get("factor", errs) else {
                errs.push(format!(
                    "line {}: scaled-abs needs `factor = c` with c > 0",
                    block.line
                ));
                return None;
            };
            let factor = parse_rat(&f.value, "factor", f.line, errs)?;
            Some(Pseudometric::scaled_abs(id, factor))
        }
        other => {
            errs.push(format!(
                "line {}: pseudometric kind `{other}` is not one of table, scaled-abs",
                kind.line
            ));
            None
        }
    }
}

// ---------------------------------------------------------------------
// graph
// ---------------------------------------------------------------------

const GRAPH_KINDS: &str = "explicit, complete, diagonal-only, order-leq, order-comparable, custom-interval-order";

fn build_graph(
    block: &Block,
    carrier: Option<&Carrier>,
    errs: &mut Vec<String>,
) -> Option<DirectedGraph> {
    let bag = KeyBag { entries: &block.entries };
    let Some(kind) = bag.get("kind", errs) else {
        errs.push(format!(
            "line {}: [graph] needs `kind = ...` ({GRAPH_KINDS})",
            block.line
        ));
        return None;
    };
    flag_unknown_keys(block, &["kind", "edges", "region", "exclude"], &[], errs);
    let carrier = carrier?;
    let n = carrier.len();
    match kind.value.as_str() {
        "explicit" => {
            let Some(n) = n else {
                errs.push(format!(
                    "line {}: explicit edges need a finite carrier",
                    kind.line
                ));
                return None;
            };
            let Some(edges_e) = bag.get("edges", errs) else {
                errs.push(format!(
                    "line {}: explicit graphs need `edges = a -> b, ...` (loops are implied)",
                    block.line
                ));
                return None;
            };
            let mut edges = Vec::new();
            let mut ok = true;
            for tok in comma_list(&edges_e.value) {
                let Some((a, b)) = tok.split_once("->") else {
                    errs.push(format!(
                        "line {}: `{tok}` is not an edge (write a -> b)",
                        edges_e.line
                    ));
                    ok = false;
                    continue;
                };
                let (a, b) = (a.trim(), b.trim());
                match (carrier.index_of(a), carrier.index_of(b)) {
                    (Some(i), Some(j)) => edges.push((i, j)),
                    _ => {
                        for l in [a, b] {
                            if carrier.index_of(l).is_none() {
                                errs.push(format!(
                                    "line {}: `{l}` is not a carrier label",
                                    edges_e.line
                                ));
                            }
                        }
                        ok = false;
                    }
                }
            }
            ok.then(|| DirectedGraph::finite(n, edges).0)
        }
        "complete" => Some(match n {
            Some(n) => DirectedGraph::finite_complete(n),
            None => DirectedGraph::real(RealGraphKind::Complete),
        }),
        "diagonal-only" => Some(match n {
            Some(n) => DirectedGraph::finite_loops_only(n),
            None => DirectedGraph::real(RealGraphKind::Diagonal),
        }),
        "order-leq" | "order-comparable" => {
            let comparable = kind.value == "order-comparable";
            match carrier {
                Carrier::Finite { points } => {
                    let coords: Option<Vec<&Rat>> =
                        points.iter().map(|p| p.coord.as_ref()).collect();
                    let Some(coords) = coords else {
                        errs.push(format!(
                            "line {}: order predicates on a finite carrier need `coords`",
                            kind.line
                        ));
                        return None;
                    };
                    let n = points.len();
                    let mut edges = Vec::new();
                    for i in 0..n {
                        for j in 0..n {
                            let fwd = coords[i] <= coords[j];
                            if fwd || (comparable && coords[j] <= coords[i]) {
                                edges.push((i, j));
                            }
                        }
                    }
                    Some(DirectedGraph::finite(n, edges).0)
                }
                Carrier::Real { .. } => Some(DirectedGraph::real(if comparable {
                    RealGraphKind::OrderComparable { order: RealOrder::GlobalLeq }
                } else {
                    RealGraphKind::OrderLeq { order: RealOrder::GlobalLeq, flipped: false }
                })),
            }
        }
        "custom-interval-order" => {
            if carrier.is_finite() {
                errs.push(format!(
                    "line {}: custom-interval-order needs the real-line carrier",
                    kind.line
                ));
                return None;
            }
            let Some(region_e) = bag.get("region", errs) else {
                errs.push(format!(
                    "line {}: custom-interval-order needs `region = [lo, hi]`",
                    block.line
                ));
                return None;
            };
            let iv: Interval = match region_e.value.parse() {
                Ok(iv) => iv,
                Err(_) => {
                    errs.push(format!(
                        "line {}: `{}` is not an interval",
                        region_e.line, region_e.value
                    ));
                    return None;
                }
            };
            let mut region = RealSet::single(iv);
            if let Some(ex) = bag.get("exclude", errs) {
                for t in comma_list(&ex.value) {
                    let p = parse_rat(t, "exclude", ex.line, errs)?;
                    region = region.remove_point(&p);
                }
            }
            Some(DirectedGraph::real(RealGraphKind::OrderLeq {
                order: RealOrder::IntervalOrder { region },
                flipped: false,
            }))
        }
        other => {
            errs.push(format!(
                "line {}: graph kind `{other}` is not one of {GRAPH_KINDS}",
                kind.line
            ));
            None
        }
    }
}

// ---------------------------------------------------------------------
// map
// ---------------------------------------------------------------------

fn build_map(block: &Block, carrier: Option<&Carrier>, errs: &mut Vec<String>) -> Option<SelfMap> {
    let bag = KeyBag { entries: &block.entries };
    flag_unknown_keys(block, &["table"], &["piece "], errs);
    let table = bag.get("table", errs);
    let piece_entries: Vec<&Entry> =
        block.entries.iter().filter(|e| e.key.starts_with("piece ")).collect();
    match (table, piece_entries.is_empty()) {
        (Some(_), false) => {
            errs.push(format!(
                "line {}: [map] mixes `table` and `piece` entries; pick one style",
                block.line
            ));
            None
        }
        (None, true) => {
            errs.push(format!(
                "line {}: [map] needs either `table = a -> b, ...` or `piece ... = ...` lines",
                block.line
            ));
            None
        }
        (Some(t), true) => {
            let carrier = carrier?;
            if !carrier.is_finite() {
                errs.push(format!(
                    "line {}: table maps need a finite carrier",
                    t.line
                ));
                return None;
            }
            let labels = carrier.labels();
            let mut image: Vec<Option<usize>> = vec![None; labels.len()];
            let mut ok = true;
            for tok in comma_list(&t.value) {
                let Some((a, b)) = tok.split_once("->") else {
                    errs.push(format!(
                        "line {}: `{tok}` is not an assignment (write a -> b)",
                        t.line
                    ));
                    ok = false;
                    continue;
                };
                let (a, b) = (a.trim(), b.trim());
                match (carrier.index_of(a), carrier.index_of(b)) {
                    (Some(i), Some(j)) => {
                        if image[i].is_some() {
                            errs.push(format!("line {}: `{a}` is mapped twice", t.line));
                            ok = false;
                        } else {
                            image[i] = Some(j);
                        }
                    }
                    _ => {
                        for l in [a, b] {
                            if carrier.index_of(l).is_none() {
                                errs.push(format!(
                                    "line {}: `{l}` is not a carrier label",
                                    t.line
                                ));
                            }
                        }
                        ok = false;
                    }
                }
            }
            for (i, v) in image.iter().enumerate() {
                if v.is_none() {
                    errs.push(format!(
                        "line {}: the table never maps `{}`",
                        t.line, labels[i]
                    ));
                    ok = false;
                }
            }
            ok.then(|| SelfMap::Table { image: image.into_iter().flatten().collect() })
        }
        (None, false) => {
            let mut pieces = Vec::new();
            let mut ok = true;
            for e in piece_entries {
                let iv_text = e.key["piece ".len()..].trim();
                let interval: Interval = match iv_text.parse() {
                    Ok(iv) => iv,
                    Err(_) => {
                        errs.push(format!(
                            "line {}: `{iv_text}` is not an interval",
                            e.line
                        ));
                        ok = false;
                        continue;
                    }
                };
                match parse_rule(&e.value) {
                    Ok(rule) => pieces.push(Piece { interval, rule }),
                    Err(msg) => {
                        errs.push(format!("line {}: {msg}", e.line));
                        ok = false;
                    }
                }
            }
            ok.then_some(SelfMap::Piecewise { pieces })
        }
    }
}

/// Parses a one-variable rule: affine forms like `2x - 5`, `(x + 5)/3`,
/// `x/2 + 1`, `0`, or a pure quadratic `x^2/2`, `3x^2`.
pub fn parse_rule(s: &str) -> Result<PieceRule, String> {
    let t = s.trim();
    if t.is_empty() {
        return Err("empty rule expression".to_string());
    }
    // whole-expression division: (expr)/q
    if let Some(rest) = t.strip_prefix('(') {
        let Some(close) = rest.find(')') else {
            return Err(format!("unbalanced parenthesis in `{t}`"));
        };
        let inner = &rest[..close];
        let tail = rest[close + 1..].trim();
        let Some(den) = tail.strip_prefix('/') else {
            return Err(format!(
                "unsupported parenthesized form `{t}`: only (expr)/q is recognized"
            ));
        };
        let den = den.trim();
        let d: Rat = den
            .parse()
            .map_err(|_| format!("`{den}` is not a number"))?;
        if d.is_zero() {
            return Err("division by zero".to_string());
        }
        return Ok(match parse_rule(inner)? {
            PieceRule::Affine { slope, intercept } => {
                PieceRule::Affine { slope: &slope / &d, intercept: &intercept / &d }
            }
            PieceRule::Quadratic { coeff } => PieceRule::Quadratic { coeff: &coeff / &d },
        });
    }
    // signed monomials, watching out for exponent signs (1e-6)
    let mut terms: Vec<String> = Vec::new();
    let mut cur = String::new();
    for c in t.chars() {
        let after_exp = matches!(cur.trim_end().chars().last(), Some('e') | Some('E'));
        if (c == '+' || c == '-') && !cur.trim().is_empty() && !after_exp {
            terms.push(cur.clone());
            cur.clear();
            if c == '-' {
                cur.push('-');
            }
        } else if c == '+' && cur.trim().is_empty() {
            // leading plus
        } else {
            cur.push(c);
        }
    }
    if !cur.trim().is_empty() {
        terms.push(cur);
    }
    let mut slope = Rat::zero();
    let mut intercept = Rat::zero();
    let mut quad: Option<Rat> = None;
    for term in &terms {
        let flat: String = term.chars().filter(|c| !c.is_whitespace()).collect();
        if let Some(i) = flat.find("x^2") {
            let c = monomial_coeff(&flat[..i], &flat[i + 3..], term)?;
            quad = Some(match quad {
                Some(q) => &q + &c,
                None => c,
            });
        } else if let Some(i) = flat.find('x') {
            let c = monomial_coeff(&flat[..i], &flat[i + 1..], term)?;
            slope = &slope + &c;
        } else {
            let c: Rat = flat
                .parse()
                .map_err(|_| format!("`{term}` is not a number"))?;
            intercept = &intercept + &c;
        }
    }
    match quad {
        Some(coeff) => {
            if !slope.is_zero() || !intercept.is_zero() {
                Err(format!(
                    "`{t}` mixes x^2 with affine terms; a piece is either affine or a pure quadratic"
                ))
            } else {
                Ok(PieceRule::Quadratic { coeff })
            }
        }
        None => Ok(PieceRule::Affine { slope, intercept }),
    }
}

fn monomial_coeff(prefix: &str, suffix: &str, term: &str) -> Result<Rat, String> {
    let c: Rat = match prefix {
        "" | "+" => Rat::one(),
        "-" => Rat::new(-1, 1),
        p => {
            let p = p.strip_suffix('*').unwrap_or(p);
            p.parse().map_err(|_| format!("`{p}` is not a coefficient in `{term}`"))?
        }
    };
    match suffix {
        "" => Ok(c),
        s => {
            let den = s
                .strip_prefix('/')
                .ok_or_else(|| format!("unexpected `{s}` after x in `{term}`"))?;
            let d: Rat = den
                .parse()
                .map_err(|_| format!("`{den}` is not a divisor in `{term}`"))?;
            if d.is_zero() {
                return Err("division by zero".to_string());
            }
            Ok(&c / &d)
        }
    }
}

// ---------------------------------------------------------------------
// analysis
// ---------------------------------------------------------------------

fn build_analysis(
    block: Option<&Block>,
    carrier: Option<&Carrier>,
    family: Option<&PseudometricFamily>,
    errs: &mut Vec<String>,
) -> AnalysisConfig {
    let mut out = AnalysisConfig::default();
    let Some(block) = block else {
        return out;
    };
    flag_unknown_keys(
        block,
        &["entourage", "probes", "budget", "window", "sequentially-complete", "property-star"],
        &[],
        errs,
    );
    let bag = KeyBag { entries: &block.entries };
    for e in block.entries.iter().filter(|e| e.key == "entourage") {
        let Some((id, radius)) = e.value.split_once(':') else {
            errs.push(format!(
                "line {}: write `entourage = id : radius`",
                e.line
            ));
            continue;
        };
        let (id, radius) = (id.trim(), radius.trim());
        let Some(r) = parse_rat(radius, "entourage radius", e.line, errs) else {
            continue;
        };
        if !r.is_positive() {
            errs.push(format!("line {}: entourage radius must be positive", e.line));
            continue;
        }
        if let Some(family) = family {
            if !family.members.iter().any(|m| m.id == id) {
                errs.push(format!(
                    "line {}: entourage references unknown pseudometric `{id}`",
                    e.line
                ));
                continue;
            }
        }
        out.basis.push((id.to_string(), r));
    }
    if let Some(p) = bag.get("probes", errs) {
        for tok in comma_list(&p.value) {
            out.probes.push(tok.to_string());
            match carrier {
                Some(c @ Carrier::Finite { .. }) => match c.index_of(tok) {
                    Some(i) => out.probe_indices.push(i),
                    None => errs.push(format!(
                        "line {}: probe `{tok}` is not a carrier label",
                        p.line
                    )),
                },
                Some(Carrier::Real { domain, .. }) => {
                    if let Some(x) = parse_rat(tok, "probe", p.line, errs) {
                        if !domain.contains(&x) {
                            errs.push(format!(
                                "line {}: probe {x} lies outside the domain {domain}",
                                p.line
                            ));
                        } else {
                            out.probe_points.push(x);
                        }
                    }
                }
                None => {}
            }
        }
    }
    if let Some(b) = bag.get("budget", errs) {
        match b.value.parse::<usize>() {
            Ok(v) if v > 0 => out.budget = v,
            _ => errs.push(format!(
                "line {}: budget must be a positive integer",
                b.line
            )),
        }
    }
    if let Some(w) = bag.get("window", errs) {
        match w.value.parse::<usize>() {
            Ok(v) if v > 0 => out.window = v,
            _ => errs.push(format!(
                "line {}: window must be a positive integer",
                w.line
            )),
        }
    }
    if let Some(e) = bag.get("sequentially-complete", errs) {
        out.sequentially_complete = parse_bool(&e.value, "sequentially-complete", e.line, errs);
    }
    if let Some(e) = bag.get("property-star", errs) {
        out.property_star = parse_bool(&e.value, "property-star", e.line, errs);
    }
    out
}

// ---------------------------------------------------------------------
// assembly
// ---------------------------------------------------------------------

pub fn parse_config_str(text: &str) -> Result<SpaceConfig, Vec<String>> {
    let mut errs = Vec::new();
    let blocks = lex(text, &mut errs);

    let mut carrier_b = None;
    let mut graph_b = None;
    let mut map_b = None;
    let mut analysis_b = None;
    let mut pm_blocks = Vec::new();
    for b in &blocks {
        let slot = match b.name.as_str() {
            "carrier" => &mut carrier_b,
            "graph" => &mut graph_b,
            "map" => &mut map_b,
            "analysis" => &mut analysis_b,
            "pseudometric" => {
                pm_blocks.push(b);
                continue;
            }
            other => {
                errs.push(format!("line {}: unknown block [{other}]", b.line));
                continue;
            }
        };
        if slot.is_some() {
            errs.push(format!("line {}: duplicate [{}] block", b.line, b.name));
        } else {
            *slot = Some(b);
        }
    }

    let carrier = match carrier_b {
        Some(b) => build_carrier(b, &mut errs),
        None => {
            errs.push("missing [carrier] block".to_string());
            None
        }
    };

    let mut members = Vec::new();
    let mut members_ok = !pm_blocks.is_empty();
    if pm_blocks.is_empty() {
        errs.push("missing [pseudometric <id>] block; at least one is required".to_string());
    }
    for b in &pm_blocks {
        if let (Some(id), true) = (&b.arg, members.iter().any(|m: &Pseudometric| Some(&m.id) == b.arg.as_ref())) {
            errs.push(format!("line {}: duplicate pseudometric id `{id}`", b.line));
            members_ok = false;
            continue;
        }
        match build_pseudometric(b, carrier.as_ref(), &mut errs) {
            Some(pm) => members.push(pm),
            None => members_ok = false,
        }
    }
    let family = members_ok.then(|| PseudometricFamily::new(members));

    let graph = match graph_b {
        Some(b) => build_graph(b, carrier.as_ref(), &mut errs),
        None => {
            errs.push("missing [graph] block".to_string());
            None
        }
    };

    let map = match map_b {
        Some(b) => build_map(b, carrier.as_ref(), &mut errs),
        None => {
            errs.push("missing [map] block".to_string());
            None
        }
    };

    let analysis = build_analysis(analysis_b, carrier.as_ref(), family.as_ref(), &mut errs);

    // component-level validation on whatever assembled
    if let Some(c) = &carrier {
        errs.extend(c.validate());
        if let Some(f) = &family {
            errs.extend(f.validate(c));
        }
        if let Some(m) = &map {
            errs.extend(m.validate(c));
        }
        if let Some(g) = &graph {
            let domain = match c {
                Carrier::Real { domain, .. } => Some(domain),
                Carrier::Finite { .. } => None,
            };
            errs.extend(g.validate(domain));
        }
    }

    if errs.is_empty() {
        // every None above pushes at least one diagnostic, so all parts
        // are present here
        Ok(SpaceConfig {
            carrier: carrier.expect("validated"),
            family: family.expect("validated"),
            graph: graph.expect("validated"),
            map: map.expect("validated"),
            analysis,
        })
    } else {
        Err(errs)
    }
}

// ---------------------------------------------------------------------
// bundled examples
// ---------------------------------------------------------------------

pub const BUNDLED_CONFIGS: &[(&str, &str)] = &[
    ("paper-final-example", include_str!("../configs/paper-final-example.cfg")),
    ("orbital-continuity-ex1", include_str!("../configs/orbital-continuity-ex1.cfg")),
    ("orbital-continuity-ex2", include_str!("../configs/orbital-continuity-ex2.cfg")),
    ("two-component-finite", include_str!("../configs/two-component-finite.cfg")),
    ("chain-3-finite", include_str!("../configs/chain-3-finite.cfg")),
    ("complete-graph-G0", include_str!("../configs/complete-graph-G0.cfg")),
];

pub fn bundled_config(name: &str) -> Option<&'static str> {
    BUNDLED_CONFIGS.iter().find(|(n, _)| *n == name).map(|(_, t)| *t)
}
