//! JSON report records shared by the verification routines and the CLI.

use serde::Serialize;

pub const SCHEMA: u32 = 1;

#[derive(Clone, Debug, Serialize, PartialEq)]
pub struct RelationReport {
    pub relation: String,
    pub degree: usize,
    pub trials: usize,
    pub pass: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub counterexample: Option<String>,
}

#[derive(Clone, Debug, Serialize, PartialEq)]
pub struct NumericReport {
    pub identity: String,
    pub lhs: f64,
    pub rhs: f64,
    pub abs_err: f64,
    pub rel_err: f64,
    pub grid: usize,
    /// Change under grid doubling, relative to the same scale as `rel_err`.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub drift: Option<f64>,
    pub pass: bool,
}

#[derive(Clone, Debug, Serialize, PartialEq)]
pub struct Check {
    pub name: String,
    pub pass: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub detail: Option<String>,
}

impl Check {
    pub fn new(name: impl Into<String>, pass: bool) -> Self {
        Check { name: name.into(), pass, detail: None }
    }

    pub fn with(name: impl Into<String>, pass: bool, detail: impl Into<String>) -> Self {
        Check { name: name.into(), pass, detail: Some(detail.into()) }
    }
}

pub fn all_pass<'a>(it: impl IntoIterator<Item = &'a RelationReport>) -> bool {
    it.into_iter().all(|r| r.pass)
}
