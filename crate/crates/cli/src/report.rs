//! Claim-by-claim verification report.
//!
//! The `claims` section is a pure function of the configuration and seed;
//! wall-clock timings live in a separate `timing` section.

use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Pass,
    Fail,
    Skipped,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Claim {
    pub claim_id: String,
    pub description: String,
    /// Short statement of the mathematical claim being reproduced.
    pub anchor: String,
    pub status: Status,
    /// Why the claim failed or was skipped.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub reason: Option<String>,
    pub data: serde_json::Value,
}

impl Claim {
    pub fn passed(&self) -> bool {
        self.status == Status::Pass
    }

    /// One line suitable for CI logs.
    pub fn summary_line(&self) -> String {
        let tag = match self.status {
            Status::Pass => "PASS",
            Status::Fail => "FAIL",
            Status::Skipped => "SKIP",
        };
        let mut line = format!("{tag} [{}] {}", self.claim_id, self.description);
        if let Some(r) = &self.reason {
            let _ = write!(line, " ({r})");
        }
        line
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Timing {
    pub claim_id: String,
    pub millis: u128,
    pub budget_millis: Option<u128>,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct Report {
    pub seed: u64,
    pub claims: Vec<Claim>,
    pub timing: Vec<Timing>,
}

impl Report {
    pub fn new(seed: u64) -> Self {
        Self {
            seed,
            ..Self::default()
        }
    }

    pub fn push(&mut self, claim: Claim, timing: Timing) {
        assert!(
            self.claims.iter().all(|c| c.claim_id != claim.claim_id),
            "claim {} reported twice",
            claim.claim_id
        );
        self.claims.push(claim);
        self.timing.push(timing);
    }

    /// No claim failed. Skipped claims do not count as failures.
    pub fn all_passed(&self) -> bool {
        self.claims.iter().all(|c| c.status != Status::Fail)
    }

    /// The deterministic part of the report: seed and claims, no timings.
    pub fn data_json(&self) -> String {
        #[derive(Serialize)]
        struct Data<'a> {
            seed: u64,
            claims: &'a [Claim],
        }
        serde_json::to_string_pretty(&Data {
            seed: self.seed,
            claims: &self.claims,
        })
        .expect("report serializes")
    }

    pub fn to_text(&self) -> String {
        let mut out = String::new();
        for (c, t) in self.claims.iter().zip(&self.timing) {
            let _ = writeln!(out, "{}  [{} ms]", c.summary_line(), t.millis);
        }
        let failed = self
            .claims
            .iter()
            .filter(|c| c.status == Status::Fail)
            .count();
        let _ = writeln!(out, "{} claims, {} failed", self.claims.len(), failed);
        out
    }
}
