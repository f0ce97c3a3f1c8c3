//! Machine-readable verification reports.

use serde::Serialize;
use serde_json::Value;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Check {
    pub name: String,
    pub pass: bool,
    pub witness: Value,
}

impl Check {
    pub fn new(name: impl Into<String>, pass: bool, witness: Value) -> Check {
        Check {
            name: name.into(),
            pass,
            witness,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Report {
    pub lemma: String,
    pub checks: Vec<Check>,
}

impl Report {
    pub fn new(lemma: impl Into<String>) -> Report {
        Report {
            lemma: lemma.into(),
            checks: Vec::new(),
        }
    }

    pub fn push(&mut self, check: Check) {
        self.checks.push(check);
    }

    pub fn all_pass(&self) -> bool {
        self.checks.iter().all(|c| c.pass)
    }

    pub fn check(&self, name: &str) -> Option<&Check> {
        self.checks.iter().find(|c| c.name == name)
    }
}
