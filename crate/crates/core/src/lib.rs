//! Delta-oriented modeling of multi-perspective automation systems and
//! consistency checking of the generated variants.
//!
//! A product line consists of core models (workflows, architectures, state
//! charts and one mapping between them) plus deltas that add, remove or
//! modify model elements. [`checker::Checker`] checks the core and each
//! variant against the rule catalog in [`rules`].

#![no_std]

extern crate alloc;

#[cfg(test)]
mod arbitrary;
pub mod checker;
pub mod delta;
pub mod dsl;
pub mod graph;
pub mod index;
pub mod model;
pub mod rules;

pub use checker::{compare_reports, CheckError, CheckReport, Checker, Comparison, ProductLine, Strategy, VariantBaseline, VariantSpec};
pub use delta::{apply_delta, generate_variant, ApplicationError, Delta, DeltaOperation, TouchSet};
pub use dsl::{ParseError, SourceLocation};
pub use model::{Model, ModelRef, ModelSet, Perspective};
pub use rules::{Diagnostic, ImpactTable, RuleId, Severity};
