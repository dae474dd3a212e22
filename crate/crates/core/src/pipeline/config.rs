//! Config-file loading for custom recurrence pairs (same JSON tree style
//! as the certificate).

use std::path::Path;

use num_bigint::BigInt;
use serde::{Deserialize, Serialize};

use crate::sequences::{BinaryRecurrence, RecurrencePair};

use super::PipelineError;

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct RecurrenceConfig {
    pub name: String,
    pub a: i64,
    pub b: i64,
    pub u0: i64,
    pub u1: i64,
}

/// A pair configuration: `u` is the sequence indexed by k, `v` the one
/// whose terms are multiplied (`U_k = V_m · V_n`).
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct PairConfig {
    pub u: RecurrenceConfig,
    pub v: RecurrenceConfig,
}

impl PairConfig {
    pub fn load(path: &Path) -> Result<Self, PipelineError> {
        let text = std::fs::read_to_string(path)?;
        serde_json::from_str(&text)
            .map_err(|e| PipelineError::Validation(format!("config parse error: {e}")))
    }

    /// Validates the structural conditions and builds the pair; any
    /// violation is a validation error (exit code 2).
    pub fn build(&self) -> Result<RecurrencePair, PipelineError> {
        let u = BinaryRecurrence::new(
            &self.u.name,
            BigInt::from(self.u.a),
            BigInt::from(self.u.b),
            BigInt::from(self.u.u0),
            BigInt::from(self.u.u1),
        )?;
        let v = BinaryRecurrence::new(
            &self.v.name,
            BigInt::from(self.v.a),
            BigInt::from(self.v.b),
            BigInt::from(self.v.u0),
            BigInt::from(self.v.u1),
        )?;
        Ok(RecurrencePair::new(u, v)?)
    }
}
