//! Claim-level verifiers for the double-attachment homology formulas, flap
//! bouquets and collapsible disc-like candidates.
//!
//! Every verifier returns a [`Report`]: a list of claims, each pairing an
//! expected value with a computed one. Expected values come from closed
//! formulas or construction data, computed values from exact algebra on
//! the built complex.

mod disc;
mod double;
mod flap;

use serde::Serialize;
use serde_json::{json, Value};
use thiserror::Error;

use crate::algebra::CoverError;
use crate::branched::BranchError;
use crate::cohomology::CohomologyError;
use crate::complex::ComplexError;

pub use disc::{disc_candidates, verify_disc_candidate, DiscCandidate};
pub use double::{
    double_attachment_expected, standard_instances, verify_double_attachment, DoubleInstance, ExpectedRanks, HandleData,
};
pub use flap::{standard_flap_cases, verify_flap_bouquet, FlapCase, FlapPiece};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum VerifyError {
    #[error("inconsistent handle data: {0}")]
    InconsistentHandleData(String),
    #[error(transparent)]
    Branch(#[from] BranchError),
    #[error(transparent)]
    Complex(#[from] ComplexError),
    #[error(transparent)]
    Cover(#[from] CoverError),
    #[error(transparent)]
    Cohomology(#[from] CohomologyError),
}

/// One checked statement.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Claim {
    #[serde(rename = "claim-id")]
    pub claim_id: String,
    pub anchor: String,
    pub expected: Value,
    pub computed: Value,
    pub pass: bool,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize)]
pub struct Report {
    pub claims: Vec<Claim>,
}

impl Report {
    pub fn new() -> Self {
        Report::default()
    }

    /// Records a claim that passes when `expected == computed`.
    pub fn check(&mut self, id: impl Into<String>, anchor: &str, expected: Value, computed: Value) -> bool {
        let pass = expected == computed;
        self.push(id, anchor, expected, computed, pass);
        pass
    }

    pub fn push(&mut self, id: impl Into<String>, anchor: &str, expected: Value, computed: Value, pass: bool) {
        self.claims.push(Claim { claim_id: id.into(), anchor: anchor.into(), expected, computed, pass });
    }

    pub fn extend(&mut self, other: Report) {
        self.claims.extend(other.claims);
    }

    pub fn passed(&self) -> bool {
        self.claims.iter().all(|c| c.pass)
    }

    pub fn failures(&self) -> impl Iterator<Item = &Claim> {
        self.claims.iter().filter(|c| !c.pass)
    }

    /// Claims sorted by id, as JSON.
    pub fn to_json(&self) -> Value {
        let mut claims = self.claims.clone();
        claims.sort_by(|a, b| a.claim_id.cmp(&b.claim_id));
        json!({ "pass": self.passed(), "claims": claims })
    }
}
