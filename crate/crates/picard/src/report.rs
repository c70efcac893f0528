//! Run reports: one structured document per invocation, stable enough
//! to diff across runs, plus a text projection generated by flattening
//! the structured form — so the text view cannot silently drop fields.

use crate::analysis::cauchy::CauchyVerdict;
use crate::analysis::classify::ClassificationReport;
use crate::analysis::continuity::ContinuityProfile;
use crate::analysis::contraction::ContractionVerdict;
use crate::map::OrbitStatus;
use crate::oracle::TheoremVerdict;
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub struct Provenance {
    pub command: String,
    pub config_sha256: String,
    pub seed: u64,
    pub version: String,
}

/// One probe orbit as the `iterate` command reports it.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub struct OrbitReport {
    pub start: String,
    pub steps: usize,
    pub last: String,
    pub status: OrbitStatus,
    pub cauchy: CauchyVerdict,
    /// Cauchy equivalence against the first probe's orbit; the first
    /// entry carries no comparison.
    pub equivalent_to_first: Option<bool>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub struct Report {
    pub provenance: Provenance,
    pub notes: Vec<String>,
    pub contraction: Option<ContractionVerdict>,
    pub continuity: Option<ContinuityProfile>,
    pub orbits: Option<Vec<OrbitReport>>,
    pub classification: Option<ClassificationReport>,
    pub theorems: Option<Vec<TheoremVerdict>>,
}

pub fn sha256_hex(text: &str) -> String {
    let mut h = Sha256::new();
    h.update(text.as_bytes());
    let digest = h.finalize();
    digest.iter().map(|b| format!("{b:02x}")).collect()
}

impl Report {
    pub fn new(command: &str, config_text: &str, seed: u64) -> Report {
        Report {
            provenance: Provenance {
                command: command.to_string(),
                config_sha256: sha256_hex(config_text),
                seed,
                version: env!("CARGO_PKG_VERSION").to_string(),
            },
            notes: Vec::new(),
            contraction: None,
            continuity: None,
            orbits: None,
            classification: None,
            theorems: None,
        }
    }

    /// Drives exit code 1: did any requested property fail?
    pub fn any_violation(&self) -> bool {
        let contraction = self.contraction.as_ref().is_some_and(|v| !v.is_contraction);
        let orbits = self
            .orbits
            .as_ref()
            .is_some_and(|os| os.iter().any(|o| !o.cauchy.is_cauchy()));
        let class = self.classification.as_ref().is_some_and(|c| {
            c.picard.violated() || c.weakly_picard.violated()
        });
        let theorems = self.theorems.as_ref().is_some_and(|ts| ts.iter().any(|t| !t.holds));
        contraction || orbits || class || theorems
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("a report always serializes");
        s.push('\n');
        s
    }

    /// Flattened `path = value` lines for every field of the structured
    /// form, in sorted key order.
    pub fn to_text(&self) -> String {
        let value = serde_json::to_value(self).expect("a report always serializes");
        let mut lines = vec!["picard run report".to_string()];
        flatten("", &value, &mut lines);
        lines.push(format!("violations = {}", self.any_violation()));
        lines.push(String::new());
        lines.join("\n")
    }
}

fn flatten(prefix: &str, v: &serde_json::Value, out: &mut Vec<String>) {
    use serde_json::Value;
    let join = |key: &str| {
        if prefix.is_empty() {
            key.to_string()
        } else {
            format!("{prefix}.{key}")
        }
    };
    match v {
        Value::Object(map) => {
            if map.is_empty() {
                out.push(format!("{prefix} = {{}}"));
            }
            for (k, val) in map {
                flatten(&join(k), val, out);
            }
        }
        Value::Array(arr) => {
            if arr.is_empty() {
                out.push(format!("{prefix} = []"));
            }
            for (i, val) in arr.iter().enumerate() {
                flatten(&format!("{prefix}[{i}]"), val, out);
            }
        }
        Value::String(s) => out.push(format!("{prefix} = {s}")),
        Value::Null => out.push(format!("{prefix} = null")),
        other => out.push(format!("{prefix} = {other}")),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::oracle::{bundled_instance, verify_main1};

    fn sample() -> Report {
        let mut r = Report::new("validate", "[carrier]\nkind = finite\n", 1729);
        let inst = bundled_instance("chain-3-finite").unwrap();
        r.theorems = Some(vec![verify_main1(&inst)]);
        r.notes.push("sample note".to_string());
        r
    }

    #[test]
    fn identical_inputs_give_identical_bytes() {
        assert_eq!(sample().to_json(), sample().to_json());
        assert_eq!(sample().to_text(), sample().to_text());
    }

    #[test]
    fn text_projection_renders_every_structured_leaf() {
        let r = sample();
        let text = r.to_text();
        let value = serde_json::to_value(&r).unwrap();
        let mut lines = Vec::new();
        flatten("", &value, &mut lines);
        for line in &lines {
            let path = line.split(" = ").next().unwrap();
            assert!(text.contains(path), "missing {path} in text projection");
        }
        assert!(text.contains("provenance.command = validate"));
        assert!(text.contains("provenance.seed = 1729"));
        assert!(text.contains("theorems[0].holds = true"));
        assert!(text.contains("violations = false"));
    }

    #[test]
    fn hash_is_stable_and_hex() {
        let h = sha256_hex("abc");
        assert_eq!(h, "ba7816bf8f01cfea414140de5dae2223b00361a396177a9cb410ff61f20015ad");
    }

    #[test]
    fn violations_follow_section_outcomes() {
        let mut r = Report::new("check", "x", 0);
        assert!(!r.any_violation());
        let inst = bundled_instance("chain-3-finite").unwrap();
        let mut v = verify_main1(&inst);
        v.holds = false;
        r.theorems = Some(vec![v]);
        assert!(r.any_violation());
    }
}
