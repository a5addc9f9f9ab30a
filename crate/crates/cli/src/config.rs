use std::fs;
use std::path::{Path, PathBuf};

use serde::Deserialize;

use nematic_core::Parameters;

use crate::Failure;

pub const SCHEMA: u32 = 1;

/// `c` is a single value for most commands and a list for `sweep`.
#[derive(Debug, Clone, PartialEq, Deserialize)]
#[serde(untagged)]
pub enum CValue {
    One(f64),
    Many(Vec<f64>),
}

/// Settings read from a JSON file; command-line flags take precedence.
#[derive(Debug, Clone, Default, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    pub schema: Option<u32>,
    pub h: Option<f64>,
    pub r: Option<f64>,
    pub c: Option<CValue>,
    pub nodes: Option<usize>,
    pub step: Option<f64>,
    pub tol: Option<f64>,
    pub out: Option<PathBuf>,
    pub azimuthal: Option<usize>,
    pub source: Option<String>,
    pub init: Option<String>,
    pub gamma: Option<f64>,
    pub kappa: Option<f64>,
    pub field: Option<String>,
    pub input: Option<PathBuf>,
}

impl RunConfig {
    pub fn load(path: &Path) -> Result<Self, Failure> {
        let text = fs::read_to_string(path)
            .map_err(|e| Failure::Usage(format!("cannot read config {}: {e}", path.display())))?;
        let cfg: RunConfig = serde_json::from_str(&text)
            .map_err(|e| Failure::Usage(format!("malformed config {}: {e}", path.display())))?;
        match cfg.schema {
            Some(SCHEMA) => Ok(cfg),
            Some(other) => Err(Failure::Usage(format!(
                "config schema {other} is not supported (expected {SCHEMA})"
            ))),
            None => Err(Failure::Usage(format!(
                "config {} lacks the \"schema\": {SCHEMA} field",
                path.display()
            ))),
        }
    }

    pub fn h(&self) -> Result<f64, Failure> {
        self.h.ok_or_else(|| Failure::Usage("missing --h".into()))
    }

    pub fn r(&self) -> Result<f64, Failure> {
        self.r.ok_or_else(|| Failure::Usage("missing --r".into()))
    }

    pub fn c_single(&self, default: Option<f64>) -> Result<f64, Failure> {
        match &self.c {
            Some(CValue::One(c)) => Ok(*c),
            Some(CValue::Many(v)) if v.len() == 1 => Ok(v[0]),
            Some(CValue::Many(_)) => Err(Failure::Usage("expected a single value for --c".into())),
            None => default.ok_or_else(|| Failure::Usage("missing --c".into())),
        }
    }

    pub fn c_list(&self) -> Result<Vec<f64>, Failure> {
        match &self.c {
            Some(CValue::One(c)) => Ok(vec![*c]),
            Some(CValue::Many(v)) if !v.is_empty() => Ok(v.clone()),
            _ => Err(Failure::Usage("missing --c list".into())),
        }
    }

    pub fn params(&self, default_c: Option<f64>) -> Result<Parameters, Failure> {
        let (h, r, c) = (self.h()?, self.r()?, self.c_single(default_c)?);
        Parameters::new(h, r, c).map_err(|e| Failure::Usage(e.to_string()))
    }

    pub fn out_dir(&self) -> PathBuf {
        self.out.clone().unwrap_or_else(|| PathBuf::from("."))
    }
}

/// Parses `--c` as one number or a comma-separated list.
pub fn parse_c(text: &str) -> Result<CValue, Failure> {
    let values = text
        .split(',')
        .map(|s| {
            s.trim()
                .parse::<f64>()
                .map_err(|e| Failure::Usage(format!("bad --c entry {s:?}: {e}")))
        })
        .collect::<Result<Vec<f64>, Failure>>()?;
    Ok(if values.len() == 1 {
        CValue::One(values[0])
    } else {
        CValue::Many(values)
    })
}
