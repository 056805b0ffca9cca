//! Reading documents from disk, with digests and cross-reference checks.

use std::fs;
use std::path::{Path, PathBuf};

use gamma_core::homological::{ChainComplex, ChainMap, ChainMapDocument, ComplexDocument};
use gamma_core::module::{GammaModule, ModuleDocument};
use gamma_core::{GammaSemiring, StructureDocument};
use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::CliError;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct InputDigest {
    pub path: String,
    pub sha256: String,
}

/// Collects the digest of every file read during one command.
#[derive(Debug, Default)]
pub struct Loader {
    pub inputs: Vec<InputDigest>,
}

fn resolve(base: &Path, reference: &str) -> PathBuf {
    base.parent().unwrap_or(Path::new("")).join(reference)
}

fn same_file(a: &Path, b: &Path) -> bool {
    match (fs::canonicalize(a), fs::canonicalize(b)) {
        (Ok(x), Ok(y)) => x == y,
        _ => false,
    }
}

impl Loader {
    fn read<T: DeserializeOwned>(&mut self, path: &Path) -> Result<T, CliError> {
        let bytes = fs::read(path).map_err(|e| CliError::input(format!("{}: {e}", path.display())))?;
        let label = path.display().to_string();
        if !self.inputs.iter().any(|d| d.path == label) {
            self.inputs.push(InputDigest {
                path: label,
                sha256: hex::encode(Sha256::digest(&bytes)),
            });
        }
        serde_json::from_slice(&bytes).map_err(|e| {
            CliError::input(format!("{}: line {} column {}: {e}", path.display(), e.line(), e.column()))
        })
    }

    pub fn structure(&mut self, path: &Path) -> Result<GammaSemiring, CliError> {
        let doc: StructureDocument = self.read(path)?;
        GammaSemiring::validate_document(&doc).map_err(|e| CliError::from(e).at(path))
    }

    /// A module document whose `over` must name `structure_path`.
    pub fn module(&mut self, path: &Path, t: &GammaSemiring, structure_path: &Path) -> Result<GammaModule, CliError> {
        let doc: ModuleDocument = self.read(path)?;
        if !same_file(&resolve(path, &doc.over), structure_path) {
            return Err(CliError::input(format!(
                "{}: module is over {}, not {}",
                path.display(),
                doc.over,
                structure_path.display()
            )));
        }
        GammaModule::from_document(&doc, t).map_err(|e| CliError::from(e).at(path))
    }

    pub fn complex(&mut self, path: &Path, t: &GammaSemiring, structure_path: &Path) -> Result<ChainComplex, CliError> {
        let doc: ComplexDocument = self.read(path)?;
        if !same_file(&resolve(path, &doc.over), structure_path) {
            return Err(CliError::input(format!(
                "{}: complex is over {}, not {}",
                path.display(),
                doc.over,
                structure_path.display()
            )));
        }
        let mut entries = Vec::new();
        for deg in &doc.degrees {
            let m = self.module(&resolve(path, &deg.module), t, structure_path)?;
            entries.push((deg.n, m, deg.d.clone()));
        }
        ChainComplex::from_degrees(entries).map_err(|e| CliError::from(e).at(path))
    }

    pub fn chain_map(&mut self, path: &Path, t: &GammaSemiring, structure_path: &Path) -> Result<ChainMap, CliError> {
        let doc: ChainMapDocument = self.read(path)?;
        let source = self.complex(&resolve(path, &doc.source), t, structure_path)?;
        let target = self.complex(&resolve(path, &doc.target), t, structure_path)?;
        let mut components = std::collections::BTreeMap::new();
        for c in doc.components {
            if components.insert(c.n, c.map).is_some() {
                return Err(CliError::input(format!("{}: degree {} repeated", path.display(), c.n)));
            }
        }
        ChainMap::new(source, target, components).map_err(|e| CliError::from(e).at(path))
    }
}
