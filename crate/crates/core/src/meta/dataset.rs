use std::collections::BTreeMap;
use std::fs;
use std::path::{Path, PathBuf};

use serde_json::{json, Map, Value};

use crate::error::{Result, ScootError};

/// Ground-truth sketches and every algorithm's synthesis for each photo.
///
/// Manifest form, paths relative to the manifest's directory:
/// `{"gt": {photo: path}, "algorithms": {algo: {photo: path}}}`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BenchmarkDataset {
    gt: BTreeMap<String, PathBuf>,
    algorithms: BTreeMap<String, BTreeMap<String, PathBuf>>,
}

impl BenchmarkDataset {
    /// Validates that every algorithm covers exactly the ground-truth photos
    /// and that there are at least two algorithms.
    pub fn new(
        gt: BTreeMap<String, PathBuf>,
        algorithms: BTreeMap<String, BTreeMap<String, PathBuf>>,
    ) -> Result<Self> {
        Self::checked(gt, algorithms, Path::new("<memory>"))
    }

    fn checked(
        gt: BTreeMap<String, PathBuf>,
        algorithms: BTreeMap<String, BTreeMap<String, PathBuf>>,
        source: &Path,
    ) -> Result<Self> {
        let err = |key: String, message: &str| ScootError::Manifest {
            path: source.to_path_buf(),
            key,
            message: message.to_string(),
        };
        if gt.is_empty() {
            return Err(err("gt".into(), "no ground-truth sketches"));
        }
        if algorithms.len() < 2 {
            return Err(err("algorithms".into(), "at least two algorithms are required"));
        }
        for (algo, outputs) in &algorithms {
            if let Some(photo) = gt.keys().find(|p| !outputs.contains_key(*p)) {
                return Err(err(format!("algorithms.{algo}.{photo}"), "missing synthesis"));
            }
            if let Some(photo) = outputs.keys().find(|p| !gt.contains_key(*p)) {
                return Err(err(format!("algorithms.{algo}.{photo}"), "photo id has no ground truth"));
            }
        }
        Ok(Self { gt, algorithms })
    }

    pub fn load(manifest: impl AsRef<Path>) -> Result<Self> {
        let path = manifest.as_ref();
        let text = fs::read_to_string(path).map_err(|e| ScootError::io(path, e))?;
        Self::from_json(&text, path)
    }

    /// Parses manifest text; relative paths resolve against `manifest`'s
    /// parent directory.
    pub fn from_json(text: &str, manifest: &Path) -> Result<Self> {
        let err = |key: &str, message: String| ScootError::Manifest {
            path: manifest.to_path_buf(),
            key: key.to_string(),
            message,
        };
        let base = manifest.parent().unwrap_or(Path::new(""));
        let root: Value = serde_json::from_str(text).map_err(|e| err("$", e.to_string()))?;
        let root = root
            .as_object()
            .ok_or_else(|| err("$", "expected a JSON object".into()))?;
        if let Some(key) = root.keys().find(|k| *k != "gt" && *k != "algorithms") {
            return Err(err(key, "unexpected key".into()));
        }
        let path_map = |value: Option<&Value>, key: &str| -> Result<BTreeMap<String, PathBuf>> {
            let obj = value
                .ok_or_else(|| err(key, "missing".into()))?
                .as_object()
                .ok_or_else(|| err(key, "expected an object of photo id to path".into()))?;
            obj.iter()
                .map(|(id, p)| {
                    let p = p
                        .as_str()
                        .ok_or_else(|| err(&format!("{key}.{id}"), "expected a path string".into()))?;
                    Ok((id.clone(), base.join(p)))
                })
                .collect()
        };
        let gt = path_map(root.get("gt"), "gt")?;
        let algos = root
            .get("algorithms")
            .ok_or_else(|| err("algorithms", "missing".into()))?
            .as_object()
            .ok_or_else(|| err("algorithms", "expected an object of algorithm id to outputs".into()))?;
        let mut algorithms = BTreeMap::new();
        for (algo, outputs) in algos {
            algorithms.insert(algo.clone(), path_map(Some(outputs), &format!("algorithms.{algo}"))?);
        }
        Self::checked(gt, algorithms, manifest)
    }

    /// Manifest JSON with paths made relative to `base` where possible.
    pub fn to_json(&self, base: &Path) -> Value {
        let rel = |p: &PathBuf| {
            Value::String(p.strip_prefix(base).unwrap_or(p).to_string_lossy().into_owned())
        };
        let gt: Map<String, Value> = self.gt.iter().map(|(k, p)| (k.clone(), rel(p))).collect();
        let algorithms: Map<String, Value> = self
            .algorithms
            .iter()
            .map(|(a, m)| {
                let outputs: Map<String, Value> = m.iter().map(|(k, p)| (k.clone(), rel(p))).collect();
                (a.clone(), Value::Object(outputs))
            })
            .collect();
        json!({ "gt": gt, "algorithms": algorithms })
    }

    /// Photo ids in sorted order.
    pub fn photos(&self) -> impl Iterator<Item = &str> {
        self.gt.keys().map(String::as_str)
    }

    pub fn photo_count(&self) -> usize {
        self.gt.len()
    }

    /// Algorithm ids in sorted order.
    pub fn algorithms(&self) -> impl Iterator<Item = &str> {
        self.algorithms.keys().map(String::as_str)
    }

    pub fn gt_path(&self, photo: &str) -> Option<&Path> {
        self.gt.get(photo).map(PathBuf::as_path)
    }

    pub fn synthesis_path(&self, algorithm: &str, photo: &str) -> Option<&Path> {
        self.algorithms.get(algorithm)?.get(photo).map(PathBuf::as_path)
    }

    /// Synthesis paths for `photo`, ordered by algorithm id.
    pub fn syntheses(&self, photo: &str) -> Vec<(&str, &Path)> {
        self.algorithms
            .iter()
            .filter_map(|(a, m)| m.get(photo).map(|p| (a.as_str(), p.as_path())))
            .collect()
    }
}

/// One human-ranked comparison: `better` was preferred over `worse`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RankedPair {
    pub gt: PathBuf,
    pub better: PathBuf,
    pub worse: PathBuf,
}

/// Manifest form: `[{"gt": path, "better": path, "worse": path}, ...]`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RankedPairSet {
    entries: Vec<RankedPair>,
}

impl RankedPairSet {
    pub fn new(entries: Vec<RankedPair>) -> Result<Self> {
        Self::checked(entries, Path::new("<memory>"))
    }

    fn checked(entries: Vec<RankedPair>, source: &Path) -> Result<Self> {
        for (i, e) in entries.iter().enumerate() {
            if e.gt == e.better || e.gt == e.worse || e.better == e.worse {
                return Err(ScootError::Manifest {
                    path: source.to_path_buf(),
                    key: format!("[{i}]"),
                    message: "gt, better and worse must be distinct paths".into(),
                });
            }
        }
        Ok(Self { entries })
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self> {
        let path = path.as_ref();
        let text = fs::read_to_string(path).map_err(|e| ScootError::io(path, e))?;
        Self::from_json(&text, path)
    }

    pub fn from_json(text: &str, manifest: &Path) -> Result<Self> {
        let err = |key: String, message: String| ScootError::Manifest {
            path: manifest.to_path_buf(),
            key,
            message,
        };
        let base = manifest.parent().unwrap_or(Path::new(""));
        let root: Value = serde_json::from_str(text).map_err(|e| err("$".into(), e.to_string()))?;
        let list = root
            .as_array()
            .ok_or_else(|| err("$".into(), "expected a JSON list".into()))?;
        let mut entries = Vec::with_capacity(list.len());
        for (i, item) in list.iter().enumerate() {
            let obj = item
                .as_object()
                .ok_or_else(|| err(format!("[{i}]"), "expected an object".into()))?;
            let field = |name: &str| -> Result<PathBuf> {
                obj.get(name)
                    .and_then(Value::as_str)
                    .map(|p| base.join(p))
                    .ok_or_else(|| err(format!("[{i}].{name}"), "missing path string".into()))
            };
            entries.push(RankedPair {
                gt: field("gt")?,
                better: field("better")?,
                worse: field("worse")?,
            });
        }
        Self::checked(entries, manifest)
    }

    pub fn to_json(&self, base: &Path) -> Value {
        let rel = |p: &PathBuf| p.strip_prefix(base).unwrap_or(p).to_string_lossy().into_owned();
        Value::Array(
            self.entries
                .iter()
                .map(|e| json!({ "gt": rel(&e.gt), "better": rel(&e.better), "worse": rel(&e.worse) }))
                .collect(),
        )
    }

    pub fn entries(&self) -> &[RankedPair] {
        &self.entries
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }
}
