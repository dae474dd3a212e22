//! Certified solver for the exponential Diophantine equations
//! `F_k = P_m · P_n` and `P_k = F_m · F_n` over the Fibonacci and Pell
//! sequences.
//!
//! The pipeline has three stages, each emitting a machine-checkable
//! record into a proof certificate:
//!
//! 1. **bound** — linear forms in logarithms turn each equation into an
//!    absolute index bound of order 10^30 ([`linforms`]);
//! 2. **reduce** — continued-fraction reduction collapses that bound to
//!    two digits ([`reduction`]);
//! 3. **search** — exact big-integer enumeration below the reduced bound
//!    lists every solution ([`pipeline`]).
//!
//! All real arithmetic is interval-certified ([`realcore`]); all integer
//! arithmetic is exact ([`sequences`]).

pub mod linforms;
pub mod pipeline;
pub mod realcore;
pub mod reduction;
pub mod sequences;

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

/// Which of the two product equations is being solved.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Equation {
    /// `F_k = P_m · P_n`: a Fibonacci number as a product of two Pell numbers.
    Fpp,
    /// `P_k = F_m · F_n`: a Pell number as a product of two Fibonacci numbers.
    Ffp,
}

impl Equation {
    pub const BOTH: [Equation; 2] = [Equation::Fpp, Equation::Ffp];

    pub fn name(self) -> &'static str {
        match self {
            Equation::Fpp => "fpp",
            Equation::Ffp => "ffp",
        }
    }
}

impl fmt::Display for Equation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Equation {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.to_ascii_lowercase().as_str() {
            "fpp" => Ok(Equation::Fpp),
            "ffp" => Ok(Equation::Ffp),
            other => Err(format!("unknown equation `{other}` (expected fpp or ffp)")),
        }
    }
}
