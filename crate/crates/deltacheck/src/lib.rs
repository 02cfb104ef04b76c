//! Loading product lines from disk, rendering reports, the fixture corpus and
//! the `deltacheck` command line. Model semantics live in `deltacheck-core`.

pub mod cli;
pub mod fixture;
pub mod load;
pub mod report;

pub use load::{load_product_line, LoadError};
