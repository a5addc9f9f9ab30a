use serde::{Deserialize, Serialize};

use crate::catenary::constants;
use crate::error::{Error, Result};

/// Problem instance: rings of radius `r` at `x = ±h`, nematic weight `c`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Parameters {
    pub h: f64,
    pub r: f64,
    pub c: f64,
}

impl Parameters {
    pub fn new(h: f64, r: f64, c: f64) -> Result<Self> {
        let ok = |v: f64| v.is_finite();
        if !(ok(h) && h > 0.0) || !(ok(r) && r > 0.0) || !(ok(c) && c >= 0.0) {
            return Err(Error::InvalidParameters(format!(
                "need h > 0, r > 0, c ≥ 0; got h = {h}, r = {r}, c = {c}"
            )));
        }
        Ok(Self { h, r, c })
    }

    pub fn ratio(&self) -> f64 {
        self.h / self.r
    }

    /// True when `h/r > ω`, where existence and the qualitative properties
    /// of minimizers are no longer guaranteed.
    pub fn outside_standing_assumption(&self) -> bool {
        self.ratio() > constants().omega
    }

    pub fn with_c(&self, c: f64) -> Result<Self> {
        Self::new(self.h, self.r, c)
    }
}
