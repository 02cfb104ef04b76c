//! Textual syntax for models, deltas and product-line manifests.
//!
//! See `docs/DSL-REFERENCE.md` for the grammar. Parsing is total: every input
//! yields either a value or a [`ParseError`] with a location inside the input.

mod lexer;
mod manifest;
mod parser;
mod serialize;

use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;

use thiserror::Error;

pub use manifest::{Manifest, VariantDecl};
pub use parser::{parse_delta, parse_document, parse_manifest, parse_model};
pub use serialize::{serialize_delta, serialize_manifest, serialize_model};

use crate::delta::Delta;
use crate::model::Model;

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct SourceLocation {
    pub file: String,
    /// 1-based.
    pub line: u32,
    /// 1-based, counted in characters.
    pub column: u32,
}

impl SourceLocation {
    pub fn new(file: &str, line: u32, column: u32) -> Self {
        SourceLocation {
            file: file.into(),
            line,
            column,
        }
    }
}

impl fmt::Display for SourceLocation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}:{}", self.file, self.line, self.column)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("{location}: {message}")]
pub struct ParseError {
    pub location: SourceLocation,
    pub message: String,
    /// Token descriptions that would have been accepted; may be empty.
    pub expected: Vec<String>,
}

impl ParseError {
    pub(crate) fn new(location: SourceLocation, message: impl Into<String>) -> Self {
        ParseError {
            location,
            message: message.into(),
            expected: Vec::new(),
        }
    }
}

/// Any top-level document.
#[derive(Debug, Clone, PartialEq)]
pub enum Document {
    Model(Model),
    Delta(Delta),
    Manifest(Manifest),
}
