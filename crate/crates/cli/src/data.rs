//! Bundled data files and the directory override.

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};

use modreg_core::eis::{parse_curves, CurveModel, EisensteinCombination};
use modreg_core::goncharov::CocycleFile;
use num_rational::Rational64;
use sha2::{Digest, Sha256};

use crate::CliError;

/// Environment variable naming a directory that replaces the bundled data.
pub const DATA_DIR_ENV: &str = "MODREG_DATA_DIR";

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub enum DataFile {
    Curves,
    Tables,
    Cocycles,
    Eisenstein,
}

impl DataFile {
    pub fn file_name(self) -> &'static str {
        match self {
            DataFile::Curves => "curves.txt",
            DataFile::Tables => "tables.txt",
            DataFile::Cocycles => "cocycles.txt",
            DataFile::Eisenstein => "eisenstein.txt",
        }
    }

    fn bundled(self) -> &'static str {
        match self {
            DataFile::Curves => include_str!("../../../data/curves.txt"),
            DataFile::Tables => include_str!("../../../data/tables.txt"),
            DataFile::Cocycles => include_str!("../../../data/cocycles.txt"),
            DataFile::Eisenstein => include_str!("../../../data/eisenstein.txt"),
        }
    }
}

/// Reads data files either from the binary or from an override directory,
/// remembering the SHA-256 of every file it hands out.
#[derive(Debug, Default)]
pub struct DataStore {
    dir: Option<PathBuf>,
    hashes: BTreeMap<String, String>,
}

impl DataStore {
    pub fn bundled() -> Self {
        DataStore::default()
    }

    pub fn from_dir(dir: impl AsRef<Path>) -> Self {
        DataStore {
            dir: Some(dir.as_ref().to_path_buf()),
            hashes: BTreeMap::new(),
        }
    }

    pub fn load(&mut self, file: DataFile) -> Result<String, CliError> {
        let text = match &self.dir {
            None => file.bundled().to_string(),
            Some(dir) => {
                let path = dir.join(file.file_name());
                std::fs::read_to_string(&path).map_err(|e| CliError::Data {
                    file: file.file_name().to_string(),
                    path: path.display().to_string(),
                    reason: e.to_string(),
                })?
            }
        };
        self.hashes.insert(
            file.file_name().to_string(),
            hex::encode(Sha256::digest(text.as_bytes())),
        );
        Ok(text)
    }

    /// SHA-256 of every file loaded so far, keyed by file name.
    pub fn hashes(&self) -> &BTreeMap<String, String> {
        &self.hashes
    }

    pub fn curves(&mut self) -> Result<BTreeMap<String, CurveModel>, CliError> {
        let text = self.load(DataFile::Curves)?;
        parse_curves(&text).map_err(|e| CliError::parse(DataFile::Curves, e))
    }

    pub fn cocycles(&mut self) -> Result<CocycleFile, CliError> {
        let text = self.load(DataFile::Cocycles)?;
        CocycleFile::parse(&text).map_err(|e| CliError::parse(DataFile::Cocycles, e))
    }

    pub fn eisenstein(&mut self) -> Result<EisensteinCombination, CliError> {
        let text = self.load(DataFile::Eisenstein)?;
        EisensteinCombination::parse(&text).map_err(|e| CliError::parse(DataFile::Eisenstein, e))
    }

    pub fn tables(&mut self) -> Result<Vec<TableRow>, CliError> {
        let text = self.load(DataFile::Tables)?;
        parse_tables(&text)
    }
}

/// One identity `m(P) = r·L'(f, -1) + s·ζ'(-2)` from the table manifest.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TableRow {
    pub table: String,
    pub polynomial: String,
    pub label: String,
    pub r: Rational64,
    pub s: Rational64,
    pub g: u32,
    /// `proved` or `numerical`.
    pub source: String,
}

impl TableRow {
    pub fn is_proved(&self) -> bool {
        self.source == "proved"
    }
}

/// Parses lines `table | polynomial | label | r | s | g | source`.
pub fn parse_tables(text: &str) -> Result<Vec<TableRow>, CliError> {
    let mut rows = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let bad = |msg: &str| CliError::Parse {
            file: DataFile::Tables.file_name().to_string(),
            msg: format!("line {}: {msg}", i + 1),
        };
        let f: Vec<&str> = line.split('|').map(str::trim).collect();
        let [table, polynomial, label, r, s, g, source] = f[..] else {
            return Err(bad("expected 7 fields"));
        };
        if source != "proved" && source != "numerical" {
            return Err(bad("source must be `proved` or `numerical`"));
        }
        rows.push(TableRow {
            table: table.to_string(),
            polynomial: polynomial.to_string(),
            label: label.to_string(),
            r: r.parse().map_err(|_| bad("bad r"))?,
            s: s.parse().map_err(|_| bad("bad s"))?,
            g: g.parse().map_err(|_| bad("bad g"))?,
            source: source.to_string(),
        });
    }
    Ok(rows)
}
