//! Command-line dispatch: resolve the config, run the requested
//! command, print one report, and map outcomes to exit codes
//! (0 = everything holds, 1 = a property failed, 2 = config error).

use crate::analysis::cauchy::{cauchy_equivalent_f64, cauchy_equivalent_finite, detect_cauchy_f64, detect_cauchy_finite};
use crate::analysis::classify::{classify, ClassifyInputs};
use crate::analysis::continuity::build_profile;
use crate::analysis::contraction::check_contraction;
use crate::config::{bundled_config, parse_config_str, SpaceConfig, BUNDLED_CONFIGS};
use crate::map::{OrbitF64, OrbitIdx, StopRule};
use crate::oracle::{verify_all, FiniteInstance, DEFAULT_SEED, ENUMERATION_BUDGET};
use crate::rat::Rat;
use crate::report::{OrbitReport, Report};
use crate::space::Carrier;
use clap::{Parser, ValueEnum};
use std::path::Path;

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
pub enum Command {
    /// Contraction certificate plus the continuity dossier
    Check,
    /// Picard orbits from the declared probes, with Cauchy diagnostics
    Iterate,
    /// Picard / weakly-Picard classification
    Classify,
    /// Exhaustive theorem validation on a finite carrier
    Validate,
    /// Everything above in one document
    Report,
}

impl Command {
    fn name(self) -> &'static str {
        match self {
            Command::Check => "check",
            Command::Iterate => "iterate",
            Command::Classify => "classify",
            Command::Validate => "validate",
            Command::Report => "report",
        }
    }
}

#[derive(Parser, Debug)]
#[command(
    name = "picard",
    version,
    about = "Certify Banach graph-contractions and run Picard iteration on uniform spaces"
)]
pub struct Cli {
    /// Config file path, or the name of a bundled example
    #[arg(long, env = "PICARD_CONFIG")]
    pub config: String,

    /// What to run
    #[arg(long, env = "PICARD_COMMAND", value_enum)]
    pub command: Command,

    /// Also test this contraction constant for admissibility (p/q or decimal)
    #[arg(long, env = "PICARD_ALPHA")]
    pub alpha: Option<String>,

    /// Convergence threshold for real-line orbits (default 1e-9)
    #[arg(long, env = "PICARD_EPS")]
    pub eps: Option<f64>,

    /// Iteration budget override
    #[arg(long, env = "PICARD_MAX_ITER")]
    pub max_iter: Option<usize>,

    /// Stability window override
    #[arg(long, env = "PICARD_WINDOW")]
    pub window: Option<usize>,

    /// Seed for the randomized oracle trials
    #[arg(long, env = "PICARD_SEED")]
    pub seed: Option<u64>,

    /// Emit the structured JSON report instead of text
    #[arg(long, env = "PICARD_JSON", value_parser = clap::builder::FalseyValueParser::new())]
    pub json: bool,

    /// Largest carrier the validate command will enumerate (default 4)
    #[arg(long, env = "PICARD_MAX_CARRIER")]
    pub max_carrier: Option<usize>,
}

pub fn run(cli: &Cli) -> i32 {
    match execute(cli) {
        Ok(report) => {
            let out = if cli.json { report.to_json() } else { report.to_text() };
            print!("{out}");
            i32::from(report.any_violation())
        }
        Err(msgs) => {
            for m in &msgs {
                eprintln!("error: {m}");
            }
            2
        }
    }
}

fn load_config_text(spec: &str) -> Result<(String, String), Vec<String>> {
    let path = Path::new(spec);
    if path.exists() {
        let text = std::fs::read_to_string(path)
            .map_err(|e| vec![format!("cannot read {spec}: {e}")])?;
        let name = path
            .file_stem()
            .map(|s| s.to_string_lossy().into_owned())
            .unwrap_or_else(|| spec.to_string());
        return Ok((text, name));
    }
    if let Some(text) = bundled_config(spec) {
        return Ok((text.to_string(), spec.to_string()));
    }
    let names: Vec<&str> = BUNDLED_CONFIGS.iter().map(|(n, _)| *n).collect();
    Err(vec![format!(
        "`{spec}` is neither a readable file nor a bundled config (bundled: {})",
        names.join(", ")
    )])
}

pub fn execute(cli: &Cli) -> Result<Report, Vec<String>> {
    let (text, name) = load_config_text(&cli.config)?;
    execute_source(&text, &name, cli)
}

/// The whole pipeline on in-memory config text; `execute` adds only the
/// path / bundled-name resolution on top of this.
pub fn execute_source(text: &str, name: &str, cli: &Cli) -> Result<Report, Vec<String>> {
    let cfg = parse_config_str(text)?;
    let seed = cli.seed.unwrap_or(DEFAULT_SEED);
    let budget = cli.max_iter.unwrap_or(cfg.analysis.budget);
    let window = cli.window.unwrap_or(cfg.analysis.window);
    let stop = StopRule {
        eps: cli.eps.unwrap_or(1e-9),
        window,
        diverge_bound: 1e12,
    };
    let alpha = match &cli.alpha {
        Some(s) => Some(
            s.parse::<Rat>()
                .map_err(|_| vec![format!("--alpha: `{s}` is not a number")])?,
        ),
        None => None,
    };

    let mut report = Report::new(cli.command.name(), text, seed);
    match cli.command {
        Command::Check => {
            section_check(&cfg, &stop, budget, alpha.as_ref(), &mut report)?;
        }
        Command::Iterate => {
            section_iterate(&cfg, &stop, budget, window, &mut report)?;
        }
        Command::Classify => {
            section_classify(&cfg, &stop, budget, window, &mut report)?;
        }
        Command::Validate => {
            section_validate(&cfg, name, seed, cli.max_carrier, &mut report)?;
        }
        Command::Report => {
            section_check(&cfg, &stop, budget, alpha.as_ref(), &mut report)?;
            section_iterate(&cfg, &stop, budget, window, &mut report)?;
            section_classify(&cfg, &stop, budget, window, &mut report)?;
            if cfg.carrier.is_finite() {
                section_validate(&cfg, name, seed, cli.max_carrier, &mut report)?;
            } else {
                report
                    .notes
                    .push("theorem validation is skipped on the real carrier".to_string());
            }
        }
    }
    Ok(report)
}

fn section_check(
    cfg: &SpaceConfig,
    stop: &StopRule,
    budget: usize,
    alpha: Option<&Rat>,
    report: &mut Report,
) -> Result<(), Vec<String>> {
    let verdict = check_contraction(&cfg.map, &cfg.graph, &cfg.family, &cfg.carrier);
    let profile = build_profile(
        &cfg.map,
        &cfg.graph,
        &cfg.family,
        &cfg.carrier,
        cfg.analysis.property_star,
        stop,
        budget,
    )
    .map_err(|e| vec![e])?;
    if let Some(a) = alpha {
        report.notes.push(format!(
            "alpha = {a} is {} for this map",
            if verdict.admissible_alpha(a) { "admissible" } else { "not admissible" }
        ));
    }
    report.contraction = Some(verdict);
    report.continuity = Some(profile);
    Ok(())
}

fn section_iterate(
    cfg: &SpaceConfig,
    stop: &StopRule,
    budget: usize,
    window: usize,
    report: &mut Report,
) -> Result<(), Vec<String>> {
    let mut orbits = Vec::new();
    match &cfg.carrier {
        Carrier::Finite { .. } => {
            let labels = cfg.carrier.labels();
            let mut first: Option<OrbitIdx> = None;
            for &i in &cfg.analysis.probe_indices {
                let orbit = cfg.map.orbit_idx(i, budget);
                let cauchy = detect_cauchy_finite(&orbit, &cfg.family, &labels);
                let equivalent_to_first = first
                    .as_ref()
                    .map(|f| cauchy_equivalent_finite(f, &orbit, &cfg.family, &labels));
                orbits.push(OrbitReport {
                    start: labels[i].to_string(),
                    steps: orbit.values.len() - 1,
                    last: labels[*orbit.values.last().expect("orbit has a start")].to_string(),
                    status: orbit.status,
                    cauchy,
                    equivalent_to_first,
                });
                first.get_or_insert(orbit);
            }
        }
        Carrier::Real { .. } => {
            let basis = cfg.analysis.basis_entourages(&cfg.family);
            if basis.is_empty() {
                return Err(vec![
                    "iterate on the real carrier needs at least one `entourage = id : radius` line in [analysis]"
                        .to_string(),
                ]);
            }
            let mut first: Option<OrbitF64> = None;
            for x in &cfg.analysis.probe_points {
                let orbit = cfg.map.orbit_f64(x.to_f64(), budget, stop);
                let cauchy = detect_cauchy_f64(&orbit, &cfg.family, &basis, window);
                let equivalent_to_first = first
                    .as_ref()
                    .map(|f| cauchy_equivalent_f64(f, &orbit, &cfg.family, &basis, window));
                orbits.push(OrbitReport {
                    start: x.to_string(),
                    steps: orbit.values.len() - 1,
                    last: format!("{}", orbit.values.last().expect("orbit has a start")),
                    status: orbit.status,
                    cauchy,
                    equivalent_to_first,
                });
                first.get_or_insert(orbit);
            }
        }
    }
    if orbits.is_empty() {
        report
            .notes
            .push("no probes declared in [analysis]; nothing to iterate".to_string());
    }
    report.orbits = Some(orbits);
    Ok(())
}

fn section_classify(
    cfg: &SpaceConfig,
    stop: &StopRule,
    budget: usize,
    window: usize,
    report: &mut Report,
) -> Result<(), Vec<String>> {
    let verdict = check_contraction(&cfg.map, &cfg.graph, &cfg.family, &cfg.carrier);
    let profile = build_profile(
        &cfg.map,
        &cfg.graph,
        &cfg.family,
        &cfg.carrier,
        cfg.analysis.property_star,
        stop,
        budget,
    )
    .map_err(|e| vec![e])?;
    let basis = cfg.analysis.basis_entourages(&cfg.family);
    let sequentially_complete =
        cfg.carrier.is_finite() || cfg.analysis.sequentially_complete.unwrap_or(false);
    let class = classify(&ClassifyInputs {
        map: &cfg.map,
        graph: &cfg.graph,
        family: &cfg.family,
        carrier: &cfg.carrier,
        profile: &profile,
        verdict: &verdict,
        probes: &cfg.analysis.probe_points,
        probe_basis: &basis,
        sequentially_complete,
        stop,
        budget,
        window,
    })
    .map_err(|e| vec![e])?;
    report.classification = Some(class);
    Ok(())
}

fn section_validate(
    cfg: &SpaceConfig,
    name: &str,
    seed: u64,
    max_carrier: Option<usize>,
    report: &mut Report,
) -> Result<(), Vec<String>> {
    if !cfg.carrier.is_finite() {
        return Err(vec![
            "validate needs a finite carrier: exhaustive theorem checks on the real line are unsupported"
                .to_string(),
        ]);
    }
    let n = cfg.carrier.len().expect("finite carrier");
    let cap = max_carrier.unwrap_or(4);
    if n > cap {
        return Err(vec![format!(
            "validate caps the carrier at {cap} points, but {n} are declared ({n}^{n} self-maps); raise --max-carrier deliberately"
        )]);
    }
    if (n as u128).pow(n as u32) > ENUMERATION_BUDGET as u128 {
        return Err(vec![format!(
            "{n}^{n} self-maps exceed the enumeration budget of {ENUMERATION_BUDGET}"
        )]);
    }
    let inst = FiniteInstance {
        name: name.to_string(),
        carrier: cfg.carrier.clone(),
        family: cfg.family.clone(),
        graph: cfg.graph.clone(),
    };
    report.theorems = Some(verify_all(&inst, 64, 200, seed));
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cli(config: &str, command: Command) -> Cli {
        Cli {
            config: config.to_string(),
            command,
            alpha: None,
            eps: None,
            max_iter: None,
            window: None,
            seed: None,
            json: false,
            max_carrier: None,
        }
    }

    #[test]
    fn bundled_names_resolve_without_files() {
        let (text, name) = load_config_text("chain-3-finite").unwrap();
        assert_eq!(name, "chain-3-finite");
        assert!(text.contains("[carrier]"));
        let err = load_config_text("no-such-config").unwrap_err();
        assert!(err[0].contains("bundled:"), "{err:?}");
    }

    #[test]
    fn validate_on_the_real_carrier_is_unsupported() {
        let c = cli("paper-final-example", Command::Validate);
        let err = execute(&c).unwrap_err();
        assert!(err[0].contains("finite carrier"), "{err:?}");
    }

    #[test]
    fn validate_respects_the_carrier_cap() {
        let mut c = cli("two-component-finite", Command::Validate);
        c.max_carrier = Some(3);
        let err = execute(&c).unwrap_err();
        assert!(err[0].contains("caps the carrier at 3"), "{err:?}");
    }

    #[test]
    fn check_on_the_worked_example_is_a_contraction() {
        let c = cli("paper-final-example", Command::Check);
        let report = execute(&c).unwrap();
        let v = report.contraction.as_ref().unwrap();
        assert!(v.is_contraction);
        assert!(!report.any_violation());
    }

    #[test]
    fn classify_reports_the_picard_violation() {
        let c = cli("paper-final-example", Command::Classify);
        let report = execute(&c).unwrap();
        let class = report.classification.as_ref().unwrap();
        assert!(class.picard.violated());
        assert!(report.any_violation());
    }

    #[test]
    fn iterate_flags_the_divergent_probe() {
        let c = cli("paper-final-example", Command::Iterate);
        let report = execute(&c).unwrap();
        let orbits = report.orbits.as_ref().unwrap();
        assert_eq!(orbits.len(), 4);
        assert!(orbits[0].cauchy.is_cauchy());
        assert_eq!(orbits[1].equivalent_to_first, Some(true));
        assert_eq!(orbits[2].equivalent_to_first, Some(false));
        assert!(report.any_violation());
    }

    #[test]
    fn validate_runs_the_oracle_battery() {
        let c = cli("two-component-finite", Command::Validate);
        let report = execute(&c).unwrap();
        let ts = report.theorems.as_ref().unwrap();
        assert_eq!(ts.len(), 6);
        assert!(ts.iter().all(|t| t.holds), "{ts:#?}");
        assert!(!report.any_violation());
    }

    #[test]
    fn alpha_flag_reports_admissibility() {
        let mut c = cli("complete-graph-G0", Command::Check);
        c.alpha = Some("2/3".to_string());
        let report = execute(&c).unwrap();
        assert!(report.notes.iter().any(|n| n.contains("alpha = 2/3") && n.contains(" admissible")));
        c.alpha = Some("1/4".to_string());
        let report = execute(&c).unwrap();
        assert!(report.notes.iter().any(|n| n.contains("not admissible")), "{:?}", report.notes);
    }
}
