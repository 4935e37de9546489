//! Dataset manifests: `sample_id,reference,degraded,mos,codec_tag`.

use std::collections::HashSet;
use std::path::{Path, PathBuf};

use pcqa_core::eval::{CodecTag, Group};
use serde::Deserialize;

use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq)]
pub struct DatasetSample {
    pub sample_id: String,
    pub reference: PathBuf,
    pub degraded: PathBuf,
    pub mos: f64,
    pub codec: CodecTag,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ManifestOptions {
    pub mos_range: (f64, f64),
    /// Fail when a referenced cloud does not exist.
    pub check_paths: bool,
}

impl Default for ManifestOptions {
    fn default() -> Self {
        ManifestOptions { mos_range: (1.0, 5.0), check_paths: true }
    }
}

#[derive(Debug, Deserialize)]
struct Row {
    sample_id: String,
    reference: String,
    degraded: String,
    mos: f64,
    codec_tag: String,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Manifest {
    pub samples: Vec<DatasetSample>,
}

impl Manifest {
    /// Relative cloud paths resolve against the manifest's directory.
    pub fn load(path: &Path, opts: &ManifestOptions) -> Result<Self> {
        let base = path.parent().unwrap_or(Path::new("."));
        let mut reader = csv::Reader::from_path(path).map_err(|e| Error::format(path, e.to_string()))?;
        let mut seen = HashSet::new();
        let mut samples = Vec::new();
        let (lo, hi) = opts.mos_range;
        for (i, row) in reader.deserialize::<Row>().enumerate() {
            let at = |msg: String| Error::format(path, format!("row {}: {msg}", i + 2));
            let row = row.map_err(|e| at(e.to_string()))?;
            if !seen.insert(row.sample_id.clone()) {
                return Err(at(format!("duplicate sample_id '{}'", row.sample_id)));
            }
            if !(row.mos >= lo && row.mos <= hi) {
                return Err(at(format!("mos {} outside [{lo}, {hi}]", row.mos)));
            }
            let codec =
                CodecTag::parse(&row.codec_tag).ok_or_else(|| at(format!("unknown codec_tag '{}'", row.codec_tag)))?;
            let resolve = |p: &str| {
                let p = Path::new(p);
                if p.is_absolute() {
                    p.to_path_buf()
                } else {
                    base.join(p)
                }
            };
            let (reference, degraded) = (resolve(&row.reference), resolve(&row.degraded));
            if opts.check_paths {
                for p in [&reference, &degraded] {
                    if !p.is_file() {
                        return Err(at(format!("unresolvable path {}", p.display())));
                    }
                }
            }
            samples.push(DatasetSample { sample_id: row.sample_id, reference, degraded, mos: row.mos, codec });
        }
        if samples.is_empty() {
            return Err(Error::format(path, "manifest has no samples"));
        }
        Ok(Manifest { samples })
    }

    /// Samples in any of `groups`, in manifest order.
    pub fn filtered(&self, groups: &[Group]) -> Vec<&DatasetSample> {
        self.samples.iter().filter(|s| groups.iter().any(|g| g.contains(s.codec))).collect()
    }
}
