//! Pass/fail reports shared by the validators and the CLI.

use serde::{Deserialize, Serialize};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Check {
    pub name: String,
    pub pass: bool,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub witness: Option<String>,
}

impl Check {
    pub fn pass(name: impl Into<String>) -> Self {
        Check { name: name.into(), pass: true, witness: None }
    }

    pub fn fail(name: impl Into<String>, witness: impl Into<String>) -> Self {
        Check { name: name.into(), pass: false, witness: Some(witness.into()) }
    }

    /// A check that passed but still carries a note worth reporting.
    pub fn pass_with(name: impl Into<String>, witness: impl Into<String>) -> Self {
        Check { name: name.into(), pass: true, witness: Some(witness.into()) }
    }

    pub fn from_result(name: impl Into<String>, r: std::result::Result<(), String>) -> Self {
        match r {
            Ok(()) => Check::pass(name),
            Err(w) => Check::fail(name, w),
        }
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct ValidationReport {
    pub checks: Vec<Check>,
}

impl ValidationReport {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn push(&mut self, check: Check) {
        self.checks.push(check);
    }

    pub fn extend(&mut self, other: ValidationReport) {
        self.checks.extend(other.checks);
    }

    pub fn all_pass(&self) -> bool {
        self.checks.iter().all(|c| c.pass)
    }

    pub fn get(&self, name: &str) -> Option<&Check> {
        self.checks.iter().find(|c| c.name == name)
    }

    pub fn failures(&self) -> impl Iterator<Item = &Check> {
        self.checks.iter().filter(|c| !c.pass)
    }

    /// One line per check, `PASS name` or `FAIL name: witness`.
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        for c in &self.checks {
            match (&c.witness, c.pass) {
                (Some(w), true) => out.push_str(&format!("PASS {} ({})\n", c.name, w)),
                (None, true) => out.push_str(&format!("PASS {}\n", c.name)),
                (Some(w), false) => out.push_str(&format!("FAIL {}: {}\n", c.name, w)),
                (None, false) => out.push_str(&format!("FAIL {}\n", c.name)),
            }
        }
        out
    }
}
