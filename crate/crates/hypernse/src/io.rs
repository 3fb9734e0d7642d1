//! File formats: sparse-field JSON, run manifests, CSV time series.

use crate::datum::DatumMetadata;
use crate::spectral::frequency::{Frequency, SHELL_CONVENTION};
use crate::spectral::sparse::SparseSpectralField;
use crate::{Error, Result};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};
use std::fs;
use std::path::Path;

pub const NORMALIZATION: &str = "normalized-measure";

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct FieldHeader {
    pub alpha: f64,
    pub convention: String,
    pub normalization: String,
}

/// On-disk schema: a header object plus one `[kx, ky, kz, re1, im1, re2,
/// im2, re3, im3]` record per mode, Hermitian partners both stored, sorted
/// lexicographically so files are byte-reproducible.
#[derive(Serialize, Deserialize)]
struct FieldFile {
    header: FieldHeader,
    #[serde(skip_serializing_if = "Option::is_none")]
    metadata: Option<DatumMetadata>,
    modes: Vec<[f64; 9]>,
}

pub fn save_field(
    path: &Path,
    field: &SparseSpectralField,
    alpha: f64,
    metadata: Option<DatumMetadata>,
) -> Result<()> {
    let modes = field
        .sorted_entries()
        .into_iter()
        .map(|(xi, v)| {
            [
                xi.0[0] as f64,
                xi.0[1] as f64,
                xi.0[2] as f64,
                v[0].re,
                v[0].im,
                v[1].re,
                v[1].im,
                v[2].re,
                v[2].im,
            ]
        })
        .collect();
    let file = FieldFile {
        header: FieldHeader {
            alpha,
            convention: SHELL_CONVENTION.to_string(),
            normalization: NORMALIZATION.to_string(),
        },
        metadata,
        modes,
    };
    let json = serde_json::to_string_pretty(&file)
        .map_err(|e| Error::Malformed(e.to_string()))?;
    fs::write(path, json)?;
    Ok(())
}

pub fn load_field(
    path: &Path,
) -> Result<(SparseSpectralField, FieldHeader, Option<DatumMetadata>)> {
    let text = fs::read_to_string(path)?;
    let file: FieldFile =
        serde_json::from_str(&text).map_err(|e| Error::Malformed(e.to_string()))?;
    if file.header.convention != SHELL_CONVENTION {
        return Err(Error::Malformed(format!(
            "unsupported shell convention {:?}",
            file.header.convention
        )));
    }
    if file.header.normalization != NORMALIZATION {
        return Err(Error::Malformed(format!(
            "unsupported normalization {:?}",
            file.header.normalization
        )));
    }
    let mut field = SparseSpectralField::new();
    for rec in &file.modes {
        let k: Vec<i64> = rec[..3]
            .iter()
            .map(|&x| {
                if x.fract() == 0.0 && x.abs() < 9e15 {
                    Ok(x as i64)
                } else {
                    Err(Error::Malformed(format!("non-integer frequency {x}")))
                }
            })
            .collect::<Result<_>>()?;
        field.insert(
            Frequency::new(k[0], k[1], k[2]),
            [
                Complex64::new(rec[3], rec[4]),
                Complex64::new(rec[5], rec[6]),
                Complex64::new(rec[7], rec[8]),
            ],
        );
    }
    Ok((field, file.header, file.metadata))
}

/// SHA-256 of a file's bytes, hex-encoded.
pub fn content_hash(path: &Path) -> Result<String> {
    let bytes = fs::read(path)?;
    let mut hasher = Sha256::new();
    hasher.update(&bytes);
    Ok(format!("{:x}", hasher.finalize()))
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct InputRef {
    pub path: String,
    pub sha256: String,
}

/// Self-contained record of one CLI invocation: re-running from it
/// reproduces the outputs bit-for-bit.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct RunManifest {
    pub subcommand: String,
    pub toolkit_version: String,
    pub config: serde_json::Value,
    pub inputs: Vec<InputRef>,
    pub outputs: Vec<String>,
}

impl RunManifest {
    pub fn new(subcommand: &str, config: serde_json::Value) -> Self {
        RunManifest {
            subcommand: subcommand.to_string(),
            toolkit_version: env!("CARGO_PKG_VERSION").to_string(),
            config,
            inputs: Vec::new(),
            outputs: Vec::new(),
        }
    }

    pub fn add_input(&mut self, path: &Path) -> Result<()> {
        self.inputs.push(InputRef {
            path: path.display().to_string(),
            sha256: content_hash(path)?,
        });
        Ok(())
    }

    pub fn save(&self, path: &Path) -> Result<()> {
        let json = serde_json::to_string_pretty(self)
            .map_err(|e| Error::Malformed(e.to_string()))?;
        fs::write(path, json)?;
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::datum::{assemble_datum, DatumConfig};

    #[test]
    fn field_round_trips_bit_exactly() {
        let datum = assemble_datum(&DatumConfig::new(1.0, &[4]).relaxed()).unwrap();
        let dir = tempfile::tempdir().unwrap();
        let p = dir.path().join("d.json");
        save_field(&p, &datum.field, 1.0, Some(datum.metadata())).unwrap();
        let (loaded, header, meta) = load_field(&p).unwrap();
        assert_eq!(header.convention, SHELL_CONVENTION);
        assert_eq!(meta.unwrap().mode_count, 110);
        assert_eq!(loaded.sorted_entries(), datum.field.sorted_entries());
        // saving the loaded field reproduces the file byte-for-byte
        let p2 = dir.path().join("d2.json");
        save_field(&p2, &loaded, 1.0, Some(datum.metadata())).unwrap();
        assert_eq!(
            std::fs::read(&p).unwrap(),
            std::fs::read(&p2).unwrap()
        );
    }

    #[test]
    fn malformed_files_are_rejected() {
        let dir = tempfile::tempdir().unwrap();
        let p = dir.path().join("bad.json");
        std::fs::write(&p, "{ not json").unwrap();
        assert!(matches!(load_field(&p), Err(Error::Malformed(_))));
        std::fs::write(
            &p,
            r#"{"header":{"alpha":1.0,"convention":"other","normalization":"normalized-measure"},"modes":[]}"#,
        )
        .unwrap();
        assert!(matches!(load_field(&p), Err(Error::Malformed(_))));
    }
}
