//! Report envelopes. Field order is fixed by the struct layout, so identical
//! inputs and seeds give byte-identical JSON.

use std::path::Path;

use serde::Serialize;

use crate::error::CliError;

pub const SCHEMA: &str = "tightwalk-report/1";

#[derive(Serialize)]
pub struct Report<'a, T: Serialize> {
    pub schema: &'static str,
    pub command: &'a str,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub graph_hash: Option<String>,
    pub result: T,
}

impl<'a, T: Serialize> Report<'a, T> {
    pub fn new(command: &'a str, seed: Option<u64>, graph_hash: Option<String>, result: T) -> Self {
        Report {
            schema: SCHEMA,
            command,
            seed,
            graph_hash,
            result,
        }
    }

    pub fn to_json(&self) -> Result<String, CliError> {
        let mut s = serde_json::to_string_pretty(self)?;
        s.push('\n');
        Ok(s)
    }
}

/// Writes `text` to `path`, or to stdout when no path is given.
pub fn emit(text: &str, path: Option<&Path>) -> Result<(), CliError> {
    match path {
        Some(p) => std::fs::write(p, text)?,
        None => print!("{text}"),
    }
    Ok(())
}
