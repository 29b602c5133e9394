//! Text and JSON encodings of walls and routes.
//!
//! The text format is line based: one record per line, `#` starts a comment,
//! blank lines are ignored. See [`text`] for the grammar and the canonical
//! serialization rules, and [`json`] for the object schema used by the service.

pub mod json;
pub mod text;

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::model::{Route, Wall};

pub use json::{from_json_object, to_json_object};
pub use text::{parse_document, parse_document_bytes, serialize_document};

/// File extension for text documents.
pub const FILE_EXTENSION: &str = "crux";

#[derive(Debug, Clone, PartialEq)]
pub struct Document {
    pub wall: Wall,
    pub routes: Vec<Route>,
}

impl Document {
    pub fn route(&self, name: &str) -> Option<&Route> {
        self.routes.iter().find(|r| r.name == name)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
pub struct SourceLocation {
    pub line: usize,
    pub column: usize,
}

impl SourceLocation {
    pub fn new(line: usize, column: usize) -> Self {
        SourceLocation { line: line.max(1), column: column.max(1) }
    }
}

impl fmt::Display for SourceLocation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}", self.line, self.column)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum ParseErrorCode {
    UnknownKeyword,
    Arity,
    NumberFormat,
    DuplicateId,
    UndefinedRef,
    Range,
}

impl ParseErrorCode {
    pub fn as_str(self) -> &'static str {
        match self {
            ParseErrorCode::UnknownKeyword => "UNKNOWN_KEYWORD",
            ParseErrorCode::Arity => "ARITY",
            ParseErrorCode::NumberFormat => "NUMBER_FORMAT",
            ParseErrorCode::DuplicateId => "DUPLICATE_ID",
            ParseErrorCode::UndefinedRef => "UNDEFINED_REF",
            ParseErrorCode::Range => "RANGE",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ParseError {
    pub location: SourceLocation,
    pub code: ParseErrorCode,
    pub message: String,
}

impl ParseError {
    pub fn new(location: SourceLocation, code: ParseErrorCode, message: impl Into<String>) -> Self {
        ParseError { location, code, message: message.into() }
    }
}

impl fmt::Display for ParseError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} {}: {}", self.location, self.code.as_str(), self.message)
    }
}

impl std::error::Error for ParseError {}

/// Formats a float the canonical way: three decimals, no negative zero.
pub(crate) fn fmt_num(v: f64) -> String {
    let s = format!("{v:.3}");
    if s == "-0.000" {
        "0.000".to_string()
    } else {
        s
    }
}
