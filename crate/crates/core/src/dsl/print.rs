use std::fmt::Write;

use super::SystemSpec;

/// Canonical text of a system. Parsing the output gives back an equal spec.
pub fn pretty_print(spec: &SystemSpec) -> String {
    let mut out = String::new();
    let names = spec.names();
    writeln!(out, "universe {}", spec.universe).unwrap();
    if !spec.constants.is_empty() {
        out.push('\n');
        for (name, set) in &spec.constants {
            writeln!(out, "const {name} = {set}").unwrap();
        }
    }
    out.push('\n');
    for (name, set) in &spec.states {
        writeln!(out, "state {name} = {set}").unwrap();
    }
    out.push('\n');
    for (name, rule) in names.iter().zip(&spec.rules) {
        writeln!(out, "rule {name} = {}", rule.display_with(&names)).unwrap();
    }
    let options = spec.options.entries();
    if !options.is_empty() {
        out.push('\n');
        for (name, value) in options {
            writeln!(out, "option {name} = {value}").unwrap();
        }
    }
    out
}
