use alloc::string::String;
use alloc::vec::Vec;

/// A product line as written in a `.pl` file. Paths are kept verbatim;
/// resolving them against the manifest's directory is left to the caller.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct Manifest {
    pub name: String,
    pub core_files: Vec<String>,
    pub delta_files: Vec<String>,
    /// In declaration order.
    pub variants: Vec<VariantDecl>,
}

impl Manifest {
    pub fn new(name: impl Into<String>) -> Self {
        Manifest {
            name: name.into(),
            ..Default::default()
        }
    }
}

/// A variant and the names of the deltas applied to the core, in order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct VariantDecl {
    pub name: String,
    pub deltas: Vec<String>,
}
