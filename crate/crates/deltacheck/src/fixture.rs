//! The fixture corpus: PPU scenarios and seeded single-rule violations.
//!
//! Every fixture is a directory holding a `manifest.pl` and an
//! `expectations.json`; its id is the directory path below the corpus root,
//! e.g. `ppu-sc3` or `seeded/B04`.

use std::collections::BTreeMap;
use std::fs;
use std::path::{Path, PathBuf};

use deltacheck_core::{CheckReport, Diagnostic, ProductLine};
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::load::{load_product_line, LoadError};

pub const MANIFEST: &str = "manifest.pl";
pub const EXPECTATIONS: &str = "expectations.json";

/// The `fixtures/` directory of this repository.
pub fn corpus_root() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../../fixtures")
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Expectations {
    pub id: String,
    pub description: String,
    /// Seeded fixtures only: the rule the mutation violates.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub target: Option<String>,
    /// Further rules the mutation necessarily violates as well.
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub entailed: Vec<String>,
    /// Keyed by variant name, the core included.
    pub variants: BTreeMap<String, VariantExpectation>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct VariantExpectation {
    /// Strategy name to check count.
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub checks: BTreeMap<String, usize>,
    /// Strategy name to per-model check counts, where pinned.
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub model_checks: BTreeMap<String, BTreeMap<String, usize>>,
    /// The complete diagnostic list, in canonical order.
    pub diagnostics: Vec<ExpectedDiagnostic>,
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExpectedDiagnostic {
    pub rule: String,
    pub severity: String,
    pub model: String,
    pub elements: Vec<String>,
}

impl From<&Diagnostic> for ExpectedDiagnostic {
    fn from(d: &Diagnostic) -> Self {
        ExpectedDiagnostic {
            rule: d.rule.to_string(),
            severity: d.severity.to_string(),
            model: d.model.to_string(),
            elements: d.elements.clone(),
        }
    }
}

impl VariantExpectation {
    /// Records what `report` found; counts are added by the caller.
    pub fn observed(report: &CheckReport) -> Self {
        VariantExpectation {
            checks: BTreeMap::new(),
            model_checks: BTreeMap::new(),
            diagnostics: report.diagnostics.iter().map(ExpectedDiagnostic::from).collect(),
        }
    }
}

#[derive(Debug, Clone)]
pub struct Fixture {
    pub id: String,
    pub dir: PathBuf,
    pub line: ProductLine,
    pub expectations: Expectations,
}

#[derive(Debug, Error)]
pub enum FixtureError {
    #[error("unknown fixture `{0}`")]
    Unknown(String),
    #[error("fixture `{id}`: {source}")]
    Load {
        id: String,
        #[source]
        source: LoadError,
    },
    #[error("fixture `{id}`: malformed {EXPECTATIONS}: {source}")]
    Expectations {
        id: String,
        #[source]
        source: serde_json::Error,
    },
}

pub fn load_fixture(root: &Path, id: &str) -> Result<Fixture, FixtureError> {
    let dir = root.join(id);
    let manifest = dir.join(MANIFEST);
    if id.is_empty() || id.contains("..") || !manifest.is_file() {
        return Err(FixtureError::Unknown(id.into()));
    }
    let line = load_product_line(&manifest).map_err(|source| FixtureError::Load {
        id: id.into(),
        source,
    })?;
    let text = fs::read_to_string(dir.join(EXPECTATIONS)).map_err(|e| FixtureError::Load {
        id: id.into(),
        source: LoadError::Io {
            path: dir.join(EXPECTATIONS),
            source: e,
        },
    })?;
    let expectations = serde_json::from_str(&text).map_err(|source| FixtureError::Expectations {
        id: id.into(),
        source,
    })?;
    Ok(Fixture {
        id: id.into(),
        dir,
        line,
        expectations,
    })
}

/// Ids of every fixture under `root`, sorted.
pub fn fixture_ids(root: &Path) -> Vec<String> {
    let mut ids = Vec::new();
    let mut stack = vec![root.to_path_buf()];
    while let Some(dir) = stack.pop() {
        let Ok(entries) = fs::read_dir(&dir) else { continue };
        for entry in entries.flatten() {
            let path = entry.path();
            if !path.is_dir() {
                continue;
            }
            if path.join(MANIFEST).is_file() {
                let id = path.strip_prefix(root).expect("below root");
                ids.push(id.components().map(|c| c.as_os_str().to_string_lossy()).collect::<Vec<_>>().join("/"));
            } else {
                stack.push(path);
            }
        }
    }
    ids.sort();
    ids
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn unknown_ids_are_rejected() {
        let root = corpus_root();
        assert!(matches!(load_fixture(&root, "ppu-sc9"), Err(FixtureError::Unknown(_))));
        assert!(matches!(load_fixture(&root, "../fixtures/ppu-sc0"), Err(FixtureError::Unknown(_))));
        assert!(matches!(load_fixture(&root, ""), Err(FixtureError::Unknown(_))));
    }

    #[test]
    fn expectations_round_trip() {
        let text = r#"{"id":"x","description":"d","target":"B04","variants":{"seed":{"diagnostics":[
            {"rule":"B04","severity":"error","model":"statechart:Crane","elements":["AtSlide"]}]}}}"#;
        let e: Expectations = serde_json::from_str(text).unwrap();
        assert_eq!(e.target.as_deref(), Some("B04"));
        assert!(e.entailed.is_empty());
        let again: Expectations = serde_json::from_str(&serde_json::to_string(&e).unwrap()).unwrap();
        assert_eq!(again, e);
    }
}
