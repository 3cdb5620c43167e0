//! Text format for set-valued systems (`.sbm` files).
//!
//! ```text
//! # three agents on the non-negative half-line
//! universe [0, inf)
//! const A = [1, 2] | (5, 7]
//! state X1 = [2, 5]
//! state X2 = [4, 7]
//! rule X1 = X1 | X2 & A
//! rule X2 = ~X1 \ X2
//! option seed = 7
//! ```
//!
//! Operators bind as `~` over `&` over `\` and `^` over `|`, all binary ones
//! left-associative. `X` is the universe and `empty` the empty set, both in
//! set literals and in rules. `NAME(0)` in a rule stands for the initial
//! value of state `NAME`, a constant fixed when the system is instantiated.

mod lexer;
mod parser;
mod print;

use std::collections::BTreeMap;
use std::fmt;

use serde::Serialize;

use crate::error::Result;
use crate::expr::{Sbm, SetExpr};
use crate::interval::{IntervalSet, Universe};

pub use parser::parse;
pub use print::pretty_print;

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize)]
pub struct Span {
    pub line: usize,
    pub column: usize,
    pub len: usize,
}

impl Span {
    pub fn new(line: usize, column: usize, len: usize) -> Self {
        Span { line, column, len }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Severity {
    Error,
    Warning,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Diagnostic {
    pub severity: Severity,
    pub span: Span,
    pub message: String,
    pub hint: Option<String>,
}

impl Diagnostic {
    pub fn error(span: Span, message: impl Into<String>, hint: Option<&str>) -> Self {
        Diagnostic {
            severity: Severity::Error,
            span,
            message: message.into(),
            hint: hint.map(str::to_string),
        }
    }
}

impl fmt::Display for Diagnostic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let level = match self.severity {
            Severity::Error => "error",
            Severity::Warning => "warning",
        };
        write!(
            f,
            "{level} at {}:{}: {}",
            self.span.line, self.span.column, self.message
        )?;
        if let Some(hint) = &self.hint {
            write!(f, "\n  hint: {hint}")?;
        }
        Ok(())
    }
}

/// Settings carried by `option` lines. Unset fields fall back to the
/// library defaults.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize)]
pub struct Options {
    pub max_rounds: Option<usize>,
    pub enum_cap: Option<usize>,
    pub partition_cap: Option<usize>,
    pub listing_cap: Option<usize>,
    pub seed: Option<u64>,
}

impl Options {
    pub const NAMES: [&'static str; 5] = ["max_rounds", "enum_cap", "partition_cap", "listing_cap", "seed"];

    pub(crate) fn set(&mut self, name: &str, value: u64) -> bool {
        let v = Some(value as usize);
        match name {
            "max_rounds" => self.max_rounds = v,
            "enum_cap" => self.enum_cap = v,
            "partition_cap" => self.partition_cap = v,
            "listing_cap" => self.listing_cap = v,
            "seed" => self.seed = Some(value),
            _ => return false,
        }
        true
    }

    pub(crate) fn entries(&self) -> Vec<(&'static str, u64)> {
        let fields = [
            self.max_rounds.map(|v| v as u64),
            self.enum_cap.map(|v| v as u64),
            self.partition_cap.map(|v| v as u64),
            self.listing_cap.map(|v| v as u64),
            self.seed,
        ];
        Options::NAMES
            .iter()
            .zip(fields)
            .filter_map(|(name, v)| v.map(|v| (*name, v)))
            .collect()
    }
}

/// A parsed system: universe, named constants, state variables with their
/// initial sets and one update rule per variable.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SystemSpec {
    pub universe: Universe,
    pub constants: Vec<(String, IntervalSet)>,
    /// Variable names and initial sets, in declaration order.
    pub states: Vec<(String, IntervalSet)>,
    /// `rules[i]` updates `states[i]`; `Var(j)` refers to `states[j]`.
    pub rules: Vec<SetExpr>,
    pub options: Options,
}

/// Name used for the constant holding the initial value of a state.
pub fn initial_value_name(state: &str) -> String {
    format!("{state}(0)")
}

impl SystemSpec {
    pub fn names(&self) -> Vec<String> {
        self.states.iter().map(|(n, _)| n.clone()).collect()
    }

    pub fn initial_state(&self) -> Vec<IntervalSet> {
        self.states.iter().map(|(_, s)| s.clone()).collect()
    }

    /// The same system started from different initial sets.
    pub fn with_initial(&self, initial: Vec<IntervalSet>) -> Result<SystemSpec> {
        if initial.len() != self.states.len() {
            return Err(crate::Error::ArityMismatch {
                expected: self.states.len(),
                found: initial.len(),
            });
        }
        let mut out = self.clone();
        for ((_, s), new) in out.states.iter_mut().zip(initial) {
            self.universe.check(&new)?;
            *s = new;
        }
        Ok(out)
    }

    /// The set-valued map. References `NAME(0)` become constants bound to
    /// the current initial sets.
    pub fn to_sbm(&self) -> Result<Sbm> {
        let mut constants: BTreeMap<String, IntervalSet> = self.constants.iter().cloned().collect();
        for (name, init) in &self.states {
            constants.insert(initial_value_name(name), init.clone());
        }
        let used: std::collections::BTreeSet<String> = self.rules.iter().flat_map(|r| r.constants()).collect();
        constants.retain(|k, _| used.contains(k));
        Sbm::with_names(self.universe.clone(), self.names(), self.rules.clone(), constants)
    }
}
