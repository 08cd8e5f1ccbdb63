use std::fs::File;
use std::io::{BufReader, BufWriter, Write};
use std::path::Path;

use serde::{Deserialize, Serialize};

use super::IoError;
use crate::baselines::{HexamerModel, LpModel, NaiveBayesModel};
use crate::learn::FmacaTree;
use crate::sequences::{encode_bases, EncodingScheme, Label};
use crate::Result;

pub const SCHEMA_VERSION: u64 = 1;

/// A trained classifier of any supported kind.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", content = "payload", rename_all = "snake_case")]
pub enum Model {
    FmacaTree(FmacaTree),
    Lp(LpModel),
    Nb(NaiveBayesModel),
    Hexamer(HexamerModel),
}

impl Model {
    pub fn kind(&self) -> &'static str {
        match self {
            Model::FmacaTree(_) => "fmaca_tree",
            Model::Lp(_) => "lp",
            Model::Nb(_) => "nb",
            Model::Hexamer(_) => "hexamer",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ModelMetadata {
    pub seed: u64,
    /// How windows become configurations; only meaningful for FMACA trees.
    pub encoding: Option<EncodingScheme>,
    /// Window length in bases.
    pub length: usize,
}

/// On-disk form: `schema_version`, `kind`, `payload`, `metadata`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ModelFile {
    pub schema_version: u64,
    #[serde(flatten)]
    pub model: Model,
    pub metadata: ModelMetadata,
}

impl ModelFile {
    pub fn new(model: Model, metadata: ModelMetadata) -> Self {
        ModelFile { schema_version: SCHEMA_VERSION, model, metadata }
    }

    /// Classify one window of exactly `metadata.length` bases.
    pub fn classify(&self, bases: &str) -> Result<Label> {
        if bases.len() != self.metadata.length {
            return Err(IoError::WindowLength { expected: self.metadata.length, found: bases.len() }.into());
        }
        let bases = bases.to_ascii_uppercase();
        Ok(match &self.model {
            Model::FmacaTree(tree) => {
                let scheme = self.metadata.encoding.clone().unwrap_or(EncodingScheme::BaseQuartile);
                let config = encode_bases(&bases, &scheme)?;
                let label = tree.classify(&config)?.label;
                Label::from_index(label).unwrap_or(Label::Noncoding)
            }
            Model::Lp(m) => m.classify(&bases)?,
            Model::Nb(m) => m.classify(&bases)?,
            Model::Hexamer(m) => m.classify(&bases)?,
        })
    }

    pub fn to_json(&self) -> std::result::Result<String, IoError> {
        Ok(serde_json::to_string_pretty(self)?)
    }

    /// Parse a model document, checking the schema version first so that
    /// future formats fail with a clear message rather than a field error.
    pub fn from_json(text: &str) -> std::result::Result<Self, IoError> {
        let value: serde_json::Value = serde_json::from_str(text)?;
        match value.get("schema_version").and_then(serde_json::Value::as_u64) {
            Some(SCHEMA_VERSION) => Ok(serde_json::from_value(value)?),
            Some(found) => Err(IoError::SchemaMismatch { found, expected: SCHEMA_VERSION }),
            None => Err(IoError::Json(serde::de::Error::missing_field("schema_version"))),
        }
    }
}

pub fn save_model(model: &ModelFile, path: impl AsRef<Path>) -> std::result::Result<(), IoError> {
    let mut w = BufWriter::new(File::create(path)?);
    w.write_all(model.to_json()?.as_bytes())?;
    w.write_all(b"\n")?;
    w.flush()?;
    Ok(())
}

pub fn load_model(path: impl AsRef<Path>) -> std::result::Result<ModelFile, IoError> {
    let mut text = String::new();
    std::io::Read::read_to_string(&mut BufReader::new(File::open(path)?), &mut text)?;
    ModelFile::from_json(&text)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::baselines::{estimate_codon_table, Background};
    use crate::io::{generate_synthetic, SyntheticSpec};

    fn lp_file() -> ModelFile {
        let windows = generate_synthetic(&SyntheticSpec::new(54, 20, 20, 5)).unwrap();
        let coding = estimate_codon_table(&windows, Label::Coding).unwrap();
        let model = LpModel::new(coding, Background::Uniform(0.0156)).unwrap();
        ModelFile::new(Model::Lp(model), ModelMetadata { seed: 5, encoding: None, length: 54 })
    }

    #[test]
    fn lp_frequencies_survive_exactly() {
        let file = lp_file();
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("lp.json");
        save_model(&file, &path).unwrap();
        let back = load_model(&path).unwrap();
        assert_eq!(back, file);
        let (Model::Lp(a), Model::Lp(b)) = (&file.model, &back.model) else { panic!() };
        for (x, y) in a.coding.frequencies().iter().zip(b.coding.frequencies()) {
            assert_eq!(x.to_bits(), y.to_bits());
        }
    }

    #[test]
    fn top_level_keys() {
        let value: serde_json::Value = serde_json::from_str(&lp_file().to_json().unwrap()).unwrap();
        let mut keys: Vec<_> = value.as_object().unwrap().keys().cloned().collect();
        keys.sort();
        assert_eq!(keys, ["kind", "metadata", "payload", "schema_version"]);
        assert_eq!(value["kind"], "lp");
    }

    #[test]
    fn unknown_schema_is_rejected() {
        let mut value: serde_json::Value = serde_json::from_str(&lp_file().to_json().unwrap()).unwrap();
        value["schema_version"] = 999.into();
        let err = ModelFile::from_json(&value.to_string()).unwrap_err();
        assert!(matches!(err, IoError::SchemaMismatch { found: 999, expected: 1 }));
    }

    #[test]
    fn length_is_checked() {
        let file = lp_file();
        let err = file.classify(&"A".repeat(55)).unwrap_err();
        assert!(err.to_string().contains("55"), "{err}");
        assert!(file.classify(&"A".repeat(54)).is_ok());
    }
}
