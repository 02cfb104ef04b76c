//! Reading a product line from a manifest and the model and delta files it names.

use std::collections::BTreeMap;
use std::fs;
use std::io;
use std::path::{Path, PathBuf};

use deltacheck_core::dsl::{parse_document, parse_manifest, Document, Manifest};
use deltacheck_core::{ModelSet, ParseError, ProductLine, VariantSpec};
use thiserror::Error;

#[derive(Debug, Error)]
pub enum LoadError {
    #[error("cannot read {}: {source}", path.display())]
    Io {
        path: PathBuf,
        #[source]
        source: io::Error,
    },
    #[error("{0}")]
    Parse(#[from] ParseError),
    #[error("{}: expected a {expected}, found a {found}", path.display())]
    WrongDocument {
        path: PathBuf,
        expected: &'static str,
        found: &'static str,
    },
    #[error("{}: model `{model}` is already defined by another core file", path.display())]
    DuplicateModel { path: PathBuf, model: String },
    #[error("{}: mapping is already defined by another core file", path.display())]
    DuplicateMapping { path: PathBuf },
    #[error("{}: delta `{name}` is already defined by another delta file", path.display())]
    DuplicateDelta { path: PathBuf, name: String },
    #[error("variant `{variant}` applies unknown delta `{delta}`")]
    UnknownDelta { variant: String, delta: String },
}

fn kind_of(doc: &Document) -> &'static str {
    match doc {
        Document::Model(_) => "model",
        Document::Delta(_) => "delta",
        Document::Manifest(_) => "manifest",
    }
}

fn read(path: &Path) -> Result<String, LoadError> {
    fs::read_to_string(path).map_err(|source| LoadError::Io {
        path: path.to_path_buf(),
        source,
    })
}

fn parse_file(path: &Path) -> Result<Document, LoadError> {
    let text = read(path)?;
    Ok(parse_document(&path.display().to_string(), &text)?)
}

/// Parses the manifest at `path` without loading the files it lists.
pub fn read_manifest(path: &Path) -> Result<Manifest, LoadError> {
    let text = read(path)?;
    Ok(parse_manifest(&path.display().to_string(), &text)?)
}

/// Loads the manifest at `path`; listed files are resolved against its directory.
pub fn load_product_line(path: &Path) -> Result<ProductLine, LoadError> {
    let manifest = read_manifest(path)?;
    let base = path.parent().unwrap_or(Path::new(""));
    product_line(&manifest, base)
}

/// Builds the product line described by `manifest`, reading files relative to `base`.
pub fn product_line(manifest: &Manifest, base: &Path) -> Result<ProductLine, LoadError> {
    let mut core = ModelSet::new();
    let mut mapping_seen = false;
    for file in &manifest.core_files {
        let path = base.join(file);
        let model = match parse_file(&path)? {
            Document::Model(m) => m,
            other => {
                return Err(LoadError::WrongDocument {
                    expected: "model",
                    found: kind_of(&other),
                    path,
                })
            }
        };
        let model_ref = model.model_ref();
        if model_ref == deltacheck_core::ModelRef::Mapping {
            if mapping_seen {
                return Err(LoadError::DuplicateMapping { path });
            }
            mapping_seen = true;
        }
        if !core.insert(model) {
            return Err(LoadError::DuplicateModel {
                path,
                model: model_ref.to_string(),
            });
        }
    }

    let mut deltas = BTreeMap::new();
    for file in &manifest.delta_files {
        let path = base.join(file);
        let delta = match parse_file(&path)? {
            Document::Delta(d) => d,
            other => {
                return Err(LoadError::WrongDocument {
                    expected: "delta",
                    found: kind_of(&other),
                    path,
                })
            }
        };
        if deltas.contains_key(&delta.name) {
            return Err(LoadError::DuplicateDelta {
                path,
                name: delta.name,
            });
        }
        deltas.insert(delta.name.clone(), delta);
    }

    let mut variants = Vec::with_capacity(manifest.variants.len());
    for v in &manifest.variants {
        if let Some(missing) = v.deltas.iter().find(|d| !deltas.contains_key(*d)) {
            return Err(LoadError::UnknownDelta {
                variant: v.name.clone(),
                delta: missing.clone(),
            });
        }
        variants.push(VariantSpec::new(v.name.clone(), v.deltas.iter().cloned()));
    }

    Ok(ProductLine {
        name: manifest.name.clone(),
        core,
        deltas,
        variants,
    })
}
