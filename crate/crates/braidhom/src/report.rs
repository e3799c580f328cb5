//! Result containers shared by the engine, the oracle, and the CLI.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::linalg::HomologyGroup;

/// One homology group per (degree, weight) cell of a requested rectangle.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HomologyTable {
    pub graph: String,
    pub reduced: bool,
    pub max_degree: usize,
    pub max_weight: usize,
    pub entries: BTreeMap<(usize, usize), HomologyGroup>,
}

impl HomologyTable {
    pub fn get(&self, i: usize, k: usize) -> &HomologyGroup {
        &self.entries[&(i, k)]
    }
}

/// Outcome of one named verification, with per-slice diagnostics.
#[derive(Clone, Debug, Serialize, Deserialize, PartialEq, Eq)]
pub struct CheckReport {
    pub name: String,
    pub params: String,
    pub pass: bool,
    pub diagnostics: Vec<Diagnostic>,
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq, Eq)]
pub struct Diagnostic {
    pub label: String,
    pub pass: bool,
    pub detail: String,
}

impl CheckReport {
    pub fn new(name: &str, params: String) -> CheckReport {
        CheckReport { name: name.to_string(), params, pass: true, diagnostics: Vec::new() }
    }

    pub fn push(&mut self, label: String, pass: bool, detail: String) {
        self.pass &= pass;
        self.diagnostics.push(Diagnostic { label, pass, detail });
    }

    pub fn summary(&self) -> String {
        let failing: Vec<&str> = self
            .diagnostics
            .iter()
            .filter(|d| !d.pass)
            .map(|d| d.label.as_str())
            .collect();
        if self.pass {
            format!("{} ok ({} slices)", self.name, self.diagnostics.len())
        } else {
            format!("{} FAILED at {}", self.name, failing.join(", "))
        }
    }
}
