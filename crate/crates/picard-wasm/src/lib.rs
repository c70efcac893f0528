//! Browser bindings: each export takes config text (or a bundled name)
//! and hands back a JSON string, so the page needs no generated types.

use picard::cli::{execute_source, Cli, Command};
use picard::config::{bundled_config, parse_config_str, BUNDLED_CONFIGS};
use picard::map::StopRule;
use picard::rat::Rat;
use serde_json::json;
use wasm_bindgen::prelude::*;

#[wasm_bindgen]
pub fn version() -> String {
    env!("CARGO_PKG_VERSION").to_string()
}

/// Names of the configs compiled into the library, for the picker.
#[wasm_bindgen]
pub fn bundled_names() -> String {
    let names: Vec<&str> = BUNDLED_CONFIGS.iter().map(|(n, _)| *n).collect();
    serde_json::to_string(&names).unwrap()
}

/// Source text of one bundled config, or null.
#[wasm_bindgen]
pub fn bundled_source(name: &str) -> String {
    serde_json::to_string(&bundled_config(name)).unwrap()
}

fn errors_json(msgs: &[String]) -> String {
    json!({ "errors": msgs }).to_string()
}

fn base_cli(command: Command) -> Cli {
    Cli {
        config: String::new(),
        command,
        alpha: None,
        eps: None,
        max_iter: None,
        window: None,
        seed: None,
        json: true,
        max_carrier: None,
    }
}

/// Full analysis of a config: contraction certificate, continuity
/// dossier, orbits from the declared probes, and the classification.
/// Finite carriers additionally get the theorem validation suite.
#[wasm_bindgen]
pub fn analyze(config_text: &str, alpha: Option<String>) -> String {
    let mut cli = base_cli(Command::Report);
    cli.alpha = alpha.filter(|s| !s.trim().is_empty());
    match execute_source(config_text, "editor", &cli) {
        Ok(report) => report.to_json(),
        Err(msgs) => errors_json(&msgs),
    }
}

/// One Picard orbit from a user-chosen start. Real carriers take a
/// number and record the float path; finite carriers take a label.
#[wasm_bindgen]
pub fn orbit(config_text: &str, start: &str, budget: usize) -> String {
    let cfg = match parse_config_str(config_text) {
        Ok(c) => c,
        Err(msgs) => return errors_json(&msgs),
    };
    let budget = budget.clamp(1, 100_000);
    match &cfg.carrier {
        picard::space::Carrier::Finite { points } => {
            let Some(idx) = points.iter().position(|p| p.label == start.trim()) else {
                return errors_json(&[format!("`{start}` is not a carrier label")]);
            };
            let o = cfg.map.orbit_idx(idx, budget);
            let labels: Vec<&str> = o.values.iter().map(|&i| points[i].label.as_str()).collect();
            json!({ "kind": "finite", "labels": labels, "status": o.status }).to_string()
        }
        picard::space::Carrier::Real { .. } => {
            let Ok(x0) = start.trim().parse::<Rat>() else {
                return errors_json(&[format!("`{start}` is not a number")]);
            };
            let o = cfg.map.orbit_f64(x0.to_f64(), budget, &StopRule::default());
            json!({ "kind": "real", "values": o.values, "status": o.status }).to_string()
        }
    }
}

/// Samples of T over [lo, hi] for the cobweb plot: x, T(x), and whether
/// x sits inside the graph's edge-carrying region.
#[wasm_bindgen]
pub fn curve(config_text: &str, lo: f64, hi: f64, samples: usize) -> String {
    let cfg = match parse_config_str(config_text) {
        Ok(c) => c,
        Err(msgs) => return errors_json(&msgs),
    };
    let picard::space::Carrier::Real { .. } = &cfg.carrier else {
        return errors_json(&["the plot needs a real carrier".to_string()]);
    };
    if !(lo.is_finite() && hi.is_finite() && lo < hi) {
        return errors_json(&["the plot range must be a finite interval".to_string()]);
    }
    let samples = samples.clamp(2, 4000);
    let mut xs = Vec::with_capacity(samples);
    let mut ys = Vec::with_capacity(samples);
    for i in 0..samples {
        let x = lo + (hi - lo) * (i as f64) / ((samples - 1) as f64);
        xs.push(x);
        ys.push(cfg.map.eval_f64(x));
    }
    // fixed points the classifier can certify, for markers on the plot
    let fixed: Vec<f64> = {
        let cli = base_cli(Command::Classify);
        match execute_source(config_text, "editor", &cli) {
            Ok(report) => report
                .classification
                .and_then(|c| c.fixed_points.real)
                .map(|set| set.isolated_points().map(Rat::to_f64).collect())
                .unwrap_or_default(),
            Err(_) => Vec::new(),
        }
    };
    json!({ "x": xs, "y": ys, "fixed": fixed }).to_string()
}

// the exports are ordinary functions, so the host test runner covers them
#[cfg(test)]
mod tests {
    use super::*;
    use serde_json::Value;

    fn v(s: String) -> Value {
        serde_json::from_str(&s).unwrap()
    }

    #[test]
    fn bundled_names_lists_all_six() {
        let names = v(bundled_names());
        assert_eq!(names.as_array().unwrap().len(), 6);
        assert!(v(bundled_source("chain-3-finite")).is_string());
        assert!(v(bundled_source("nope")).is_null());
    }

    #[test]
    fn analyze_returns_a_full_report() {
        let cfg = bundled_config("chain-3-finite").unwrap();
        let doc = v(analyze(cfg, None));
        assert_eq!(doc["contraction"]["is-contraction"], true);
        assert_eq!(doc["theorems"].as_array().unwrap().len(), 6);
        assert_eq!(doc["provenance"]["command"], "report");
    }

    #[test]
    fn analyze_surfaces_config_errors() {
        let doc = v(analyze("[carrier]\nkind = bogus\n", None));
        assert!(!doc["errors"].as_array().unwrap().is_empty());
    }

    #[test]
    fn analyze_threads_the_alpha_probe_through() {
        let cfg = bundled_config("complete-graph-G0").unwrap();
        let doc = v(analyze(cfg, Some("2/3".to_string())));
        let notes = serde_json::to_string(&doc["notes"]).unwrap();
        assert!(notes.contains("alpha = 2/3 is admissible"), "{notes}");
    }

    #[test]
    fn orbit_walks_labels_on_finite_carriers() {
        let cfg = bundled_config("chain-3-finite").unwrap();
        let doc = v(orbit(cfg, "c", 50));
        assert_eq!(doc["kind"], "finite");
        assert_eq!(doc["labels"][0], "c");
        assert_eq!(doc["labels"].as_array().unwrap().last().unwrap(), "a");
        let bad = v(orbit(cfg, "z", 50));
        assert!(bad["errors"][0].as_str().unwrap().contains("label"));
    }

    #[test]
    fn orbit_records_floats_on_the_real_carrier() {
        let cfg = bundled_config("paper-final-example").unwrap();
        let doc = v(orbit(cfg, "3", 200));
        assert_eq!(doc["kind"], "real");
        let values = doc["values"].as_array().unwrap();
        let last = values.last().unwrap().as_f64().unwrap();
        assert!((last - 2.5).abs() < 1e-6, "{last}");
        assert_eq!(doc["status"], "converged");
    }

    #[test]
    fn curve_samples_the_map_and_marks_fixed_points() {
        let cfg = bundled_config("paper-final-example").unwrap();
        let doc = v(curve(cfg, -1.0, 6.0, 101));
        assert_eq!(doc["x"].as_array().unwrap().len(), 101);
        assert_eq!(doc["y"].as_array().unwrap().len(), 101);
        let fixed: Vec<f64> = doc["fixed"]
            .as_array()
            .unwrap()
            .iter()
            .map(|f| f.as_f64().unwrap())
            .collect();
        assert_eq!(fixed, vec![0.0, 2.5, 5.0]);
        let finite = bundled_config("chain-3-finite").unwrap();
        assert!(v(curve(finite, 0.0, 1.0, 10))["errors"][0]
            .as_str()
            .unwrap()
            .contains("real carrier"));
    }
}
