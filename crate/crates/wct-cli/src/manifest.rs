//! Dataset manifests: one `path,label,id` row per image, labels `normal`
//! or `abnormal`. Paths are resolved relative to the manifest's directory.

use std::collections::BTreeSet;
use std::path::{Path, PathBuf};

use crate::error::{read_text, write_text, CliError, CliResult};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Label {
    Normal,
    Abnormal,
}

impl Label {
    pub fn name(self) -> &'static str {
        match self {
            Label::Normal => "normal",
            Label::Abnormal => "abnormal",
        }
    }

    /// ±1 with abnormal as the positive class.
    pub fn sign(self) -> i8 {
        match self {
            Label::Normal => -1,
            Label::Abnormal => 1,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ManifestEntry {
    pub path: PathBuf,
    pub label: Label,
    pub id: String,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Manifest {
    pub entries: Vec<ManifestEntry>,
}

impl Manifest {
    pub fn new(entries: Vec<ManifestEntry>) -> CliResult<Self> {
        let mut paths = BTreeSet::new();
        let mut ids = BTreeSet::new();
        for e in &entries {
            if !paths.insert(e.path.clone()) {
                return Err(CliError::Data(format!(
                    "duplicate manifest path {}",
                    e.path.display()
                )));
            }
            if !ids.insert(e.id.clone()) {
                return Err(CliError::Data(format!("duplicate manifest id {}", e.id)));
            }
        }
        Ok(Self { entries })
    }

    pub fn load(path: &Path) -> CliResult<Self> {
        let text = read_text(path)?;
        let base = path.parent().unwrap_or_else(|| Path::new(""));
        let mut entries = Vec::new();
        for (lineno, raw) in text.lines().enumerate() {
            let line = raw.trim();
            if line.is_empty() || (lineno == 0 && line == "path,label,id") {
                continue;
            }
            let parse_err = |message: String| CliError::Parse {
                path: path.to_path_buf(),
                line: lineno + 1,
                message,
            };
            let fields: Vec<&str> = line.split(',').collect();
            if fields.len() != 3 {
                return Err(parse_err(format!(
                    "expected path,label,id — found {} fields",
                    fields.len()
                )));
            }
            let label = match fields[1] {
                "normal" => Label::Normal,
                "abnormal" => Label::Abnormal,
                other => return Err(parse_err(format!("unknown label {other:?}"))),
            };
            entries.push(ManifestEntry {
                path: base.join(fields[0]),
                label,
                id: fields[2].to_string(),
            });
        }
        if entries.is_empty() {
            return Err(CliError::Data(format!(
                "manifest {} lists no images",
                path.display()
            )));
        }
        Manifest::new(entries)
    }

    /// Write with paths relative to the manifest location.
    pub fn save(&self, path: &Path) -> CliResult<()> {
        let base = path.parent().unwrap_or_else(|| Path::new(""));
        let mut out = String::from("path,label,id\n");
        for e in &self.entries {
            let rel = e.path.strip_prefix(base).unwrap_or(&e.path);
            let rel = rel.to_string_lossy();
            for (field, name) in [(rel.as_ref(), "path"), (e.id.as_str(), "id")] {
                if field.contains(',') || field.contains('\n') {
                    return Err(CliError::Data(format!(
                        "manifest {name} {field:?} may not contain commas or newlines"
                    )));
                }
            }
            out.push_str(&format!("{},{},{}\n", rel, e.label.name(), e.id));
        }
        write_text(path, &out)
    }

    pub fn class_counts(&self) -> (usize, usize) {
        let abnormal = self
            .entries
            .iter()
            .filter(|e| e.label == Label::Abnormal)
            .count();
        (abnormal, self.entries.len() - abnormal)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn save_load_round_trips() {
        let dir = std::env::temp_dir().join(format!("wct-manifest-{}", std::process::id()));
        std::fs::create_dir_all(&dir).unwrap();
        let manifest = Manifest::new(vec![
            ManifestEntry {
                path: dir.join("a.pgm"),
                label: Label::Normal,
                id: "a".into(),
            },
            ManifestEntry {
                path: dir.join("b.pgm"),
                label: Label::Abnormal,
                id: "b".into(),
            },
        ])
        .unwrap();
        let file = dir.join("manifest.csv");
        manifest.save(&file).unwrap();
        let back = Manifest::load(&file).unwrap();
        assert_eq!(manifest, back);
        assert_eq!(back.class_counts(), (1, 1));
        std::fs::remove_dir_all(&dir).ok();
    }

    #[test]
    fn duplicates_and_bad_labels_are_rejected() {
        let e = ManifestEntry {
            path: PathBuf::from("x.pgm"),
            label: Label::Normal,
            id: "x".into(),
        };
        assert!(Manifest::new(vec![e.clone(), e]).is_err());
    }
}
