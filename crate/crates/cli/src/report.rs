//! Report types and their text rendering.

use std::collections::BTreeMap;
use std::fmt::Write;

use mil_core::group::{FieldData, GroupData};
use serde::{Deserialize, Serialize};

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Status {
    Pass,
    Inconclusive,
    Fail,
}

impl Status {
    pub fn label(self) -> &'static str {
        match self {
            Status::Pass => "PASS",
            Status::Fail => "FAIL",
            Status::Inconclusive => "INCONCLUSIVE",
        }
    }

    /// Fail dominates inconclusive, which dominates pass.
    pub fn combine<'a>(it: impl IntoIterator<Item = &'a Status>) -> Status {
        it.into_iter().copied().max().unwrap_or(Status::Pass)
    }

    pub fn exit_code(self) -> i32 {
        match self {
            Status::Pass => 0,
            Status::Fail => 2,
            Status::Inconclusive => 3,
        }
    }
}

/// Data needed to re-verify a claim without rerunning the scenario.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum Witness {
    /// `Tr^G_chi(witness) = theta`, with `chi` the character of `theta`.
    DirectSummand { group: GroupData, theta: String, witness: String },
    /// Invariants of the given degrees forming a system of parameters,
    /// possibly over an extension of the group's field.
    Parameters { group: GroupData, field: FieldData, polynomials: Vec<String>, degrees: Vec<u32> },
    /// An invariant in `(J A) ∩ A^G` missing from `J A^G` in the given degree.
    Contraction { group: GroupData, generators: Vec<String>, degree: u32, polynomial: String },
    /// Polynomials invariant under the group.
    Invariants { group: GroupData, polynomials: Vec<String> },
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Claim {
    pub id: String,
    /// Library operation exercised by the claim.
    pub operation: String,
    pub expected: String,
    pub observed: String,
    pub status: Status,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub witness: Option<Witness>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub detail: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub recheck: Option<bool>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ScenarioReport {
    pub scenario: String,
    pub anchor: String,
    pub parameters: BTreeMap<String, u64>,
    pub seed: u64,
    pub status: Status,
    /// Fields used, by characteristic, degree and modulus.
    pub fields: Vec<FieldData>,
    pub claims: Vec<Claim>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub elapsed_ms: Option<u64>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RunReport {
    pub tool: String,
    pub version: String,
    pub status: Status,
    pub scenarios: Vec<ScenarioReport>,
}

impl RunReport {
    pub fn new(scenarios: Vec<ScenarioReport>) -> RunReport {
        let status = Status::combine(scenarios.iter().map(|s| &s.status));
        RunReport { tool: "mil".into(), version: env!("CARGO_PKG_VERSION").into(), status, scenarios }
    }

    pub fn refresh_status(&mut self) {
        for s in &mut self.scenarios {
            s.status = Status::combine(s.claims.iter().map(|c| &c.status));
        }
        self.status = Status::combine(self.scenarios.iter().map(|s| &s.status));
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }

    pub fn to_text(&self) -> String {
        let mut out = String::new();
        for s in &self.scenarios {
            let params: Vec<String> = s.parameters.iter().map(|(k, v)| format!("{k}={v}")).collect();
            let _ = writeln!(out, "{} ({}) {}", s.scenario, params.join(" "), s.status.label());
            for c in &s.claims {
                let _ = writeln!(out, "  [{}] {}: {}", c.status.label(), c.id, c.observed);
                if c.status != Status::Pass {
                    let _ = writeln!(out, "      expected: {}", c.expected);
                    if let Some(d) = &c.detail {
                        let _ = writeln!(out, "      detail: {d}");
                    }
                }
                if c.recheck == Some(false) {
                    let _ = writeln!(out, "      recheck failed");
                }
            }
            if let Some(ms) = s.elapsed_ms {
                let _ = writeln!(out, "  elapsed: {ms} ms");
            }
        }
        let _ = writeln!(out, "overall: {}", self.status.label());
        out
    }
}
