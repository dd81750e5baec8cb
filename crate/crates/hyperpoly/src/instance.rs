//! The JSON instance format.
//!
//! ```json
//! {"kind":"product","n":2,"matrix":[[1,1],[1,1]]}
//! {"kind":"explicit","n":2,"terms":[{"exp":[1,1],"coef":2.0}]}
//! ```
//!
//! Two optional fields ride along with every family: `name`, used in
//! reports, and `expected`, a label for negative controls.

use std::fs;
use std::path::{Path, PathBuf};

use anyhow::{bail, Context};
use hyperpoly_core::{InstanceSpec, PolynomialOracle};
use serde::{Deserialize, Serialize};

/// Label marking a polynomial whose support is not that of any hyperbolic
/// polynomial; suites expect their checks to fail on it.
pub const NOT_S_HYPERBOLIC: &str = "not S-hyperbolic";

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Term {
    pub exp: Vec<u32>,
    pub coef: f64,
}

/// One polynomial family, tagged by `kind`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum Family {
    Explicit { n: usize, terms: Vec<Term> },
    Determinantal { n: usize, matrices: Vec<Vec<Vec<f64>>> },
    Product { n: usize, matrix: Vec<Vec<f64>> },
    Trace { n: usize, adjacency: Vec<Vec<f64>> },
    Powersum { n: usize },
}

impl Family {
    pub fn n(&self) -> usize {
        match self {
            Family::Explicit { n, .. }
            | Family::Determinantal { n, .. }
            | Family::Product { n, .. }
            | Family::Trace { n, .. }
            | Family::Powersum { n } => *n,
        }
    }

    pub fn to_spec(&self) -> InstanceSpec {
        match self.clone() {
            Family::Explicit { n, terms } => {
                InstanceSpec::Explicit { n, terms: terms.into_iter().map(|t| (t.exp, t.coef)).collect() }
            }
            Family::Determinantal { n, matrices } => InstanceSpec::Determinantal { n, matrices },
            Family::Product { n, matrix } => InstanceSpec::Product { n, matrix },
            Family::Trace { n, adjacency } => InstanceSpec::Trace { n, adjacency },
            Family::Powersum { n } => InstanceSpec::PowerSum { n },
        }
    }

    pub fn oracle(&self) -> hyperpoly_core::Result<PolynomialOracle> {
        hyperpoly_core::oracle::make_oracle(self.to_spec())
    }
}

/// The contents of an instance file.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct InstanceFile {
    #[serde(flatten)]
    pub family: Family,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub name: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub expected: Option<String>,
}

impl InstanceFile {
    pub fn new(family: Family) -> Self {
        InstanceFile { family, name: None, expected: None }
    }

    pub fn named(mut self, name: impl Into<String>) -> Self {
        self.name = Some(name.into());
        self
    }

    pub fn expecting(mut self, label: impl Into<String>) -> Self {
        self.expected = Some(label.into());
        self
    }

    pub fn is_negative_control(&self) -> bool {
        self.expected.as_deref() == Some(NOT_S_HYPERBOLIC)
    }

    pub fn parse(text: &str) -> anyhow::Result<Self> {
        let file: InstanceFile = serde_json::from_str(text).context("malformed instance JSON")?;
        if let Some(label) = &file.expected {
            if label != NOT_S_HYPERBOLIC {
                bail!("unknown expected label {label:?}");
            }
        }
        Ok(file)
    }

    pub fn load(path: &Path) -> anyhow::Result<Self> {
        let text = fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
        Self::parse(&text).with_context(|| format!("in {}", path.display()))
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("instance serializes")
    }
}

/// A validated instance ready for evaluation.
#[derive(Debug)]
pub struct Loaded {
    pub name: String,
    pub file: InstanceFile,
    pub oracle: PolynomialOracle,
}

impl Loaded {
    pub fn from_file(file: InstanceFile, fallback_name: &str) -> anyhow::Result<Self> {
        let name = file.name.clone().unwrap_or_else(|| fallback_name.to_string());
        let oracle = file.family.oracle().with_context(|| format!("instance {name}"))?;
        Ok(Loaded { name, file, oracle })
    }

    pub fn load(path: &Path) -> anyhow::Result<Self> {
        let stem = path.file_stem().map(|s| s.to_string_lossy().into_owned()).unwrap_or_default();
        Self::from_file(InstanceFile::load(path)?, &stem)
    }
}

/// Instance files of a corpus directory in name order.
pub fn corpus_paths(dir: &Path) -> anyhow::Result<Vec<PathBuf>> {
    let entries = fs::read_dir(dir).with_context(|| format!("corpus directory {}", dir.display()))?;
    let mut paths = Vec::new();
    for entry in entries {
        let path = entry?.path();
        if path.extension().is_some_and(|e| e == "json") {
            paths.push(path);
        }
    }
    if paths.is_empty() {
        bail!("no instances in {}", dir.display());
    }
    paths.sort();
    Ok(paths)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_every_family() {
        let texts = [
            r#"{"kind":"determinantal","n":2,"matrices":[[[1,0],[0,0]],[[0,0],[0,1]]]}"#,
            r#"{"kind":"product","n":2,"matrix":[[1,1],[1,1]]}"#,
            r#"{"kind":"trace","n":2,"adjacency":[[0,1],[1,0]]}"#,
            r#"{"kind":"powersum","n":3,"expected":"not S-hyperbolic"}"#,
            r#"{"kind":"explicit","n":2,"terms":[{"exp":[1,1],"coef":2.0}],"name":"xy"}"#,
        ];
        let values = [6.0, 4.0, 2.0, 3.0, 2.0];
        for (t, v) in texts.iter().zip(values) {
            let f = InstanceFile::parse(t).unwrap();
            let o = f.family.oracle().unwrap();
            let x = if f.family.n() == 2 && v == 6.0 { vec![2.0, 3.0] } else { vec![1.0; f.family.n()] };
            assert_eq!(o.eval(&x).unwrap(), v);
            let back = InstanceFile::parse(&f.to_json()).unwrap();
            assert_eq!(back, f);
        }
    }

    #[test]
    fn rejects_malformed_input() {
        assert!(InstanceFile::parse(r#"{"kind":"cubic","n":2}"#).is_err());
        assert!(InstanceFile::parse(r#"{"kind":"product","n":2}"#).is_err());
        assert!(InstanceFile::parse(r#"{"kind":"powersum","n":2,"expected":"fine"}"#).is_err());
        let f = InstanceFile::parse(r#"{"kind":"product","n":3,"matrix":[[1,1],[1,1]]}"#).unwrap();
        assert!(f.family.oracle().is_err());
    }

    #[test]
    fn indefinite_matrix_is_rejected() {
        let f = InstanceFile::parse(r#"{"kind":"determinantal","n":2,"matrices":[[[1,0],[0,-1]],[[1,0],[0,1]]]}"#)
            .unwrap()
            .named("bad");
        let err = Loaded::from_file(f, "x").unwrap_err();
        assert!(format!("{err:#}").contains("bad"));
    }
}
