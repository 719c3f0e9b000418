//! Readers for lparse/SModels numeric format and a small textual rule syntax.

mod smodels;
mod text;

use thiserror::Error;

use crate::program::{Program, ProgramError};

pub use smodels::{emit_smodels, parse_smodels};
pub use text::{emit_text, parse_text};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ParseError {
    #[error("line {line}: malformed record: {msg}")]
    MalformedRecord { line: usize, msg: String },
    #[error("line {line}: unsupported rule type {code}")]
    UnsupportedRuleType { line: usize, code: i64 },
    #[error("line {line}: minimize statement with non-unit weight {weight}")]
    NonUnitWeight { line: usize, weight: i64 },
    #[error("line {line}, column {col}: {msg}")]
    Syntax { line: usize, col: usize, msg: String },
    #[error("line {line}: {source}")]
    Program { line: usize, source: ProgramError },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Format {
    Auto,
    Smodels,
    Text,
}

/// Parses `src`; `Format::Auto` picks SModels when the first significant character is a digit.
pub fn parse_program(src: &str, format: Format) -> Result<Program, ParseError> {
    let format = match format {
        Format::Auto => {
            let first = src
                .lines()
                .map(str::trim_start)
                .find(|l| !l.is_empty() && !l.starts_with('%'))
                .and_then(|l| l.chars().next());
            if first.is_some_and(|c| c.is_ascii_digit()) {
                Format::Smodels
            } else {
                Format::Text
            }
        }
        f => f,
    };
    match format {
        Format::Smodels => parse_smodels(src),
        _ => parse_text(src),
    }
}
