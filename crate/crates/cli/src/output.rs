//! CSV rendering and the output manifest.

use std::fmt::Write as _;
use std::io;
use std::path::{Path, PathBuf};

use sha2::{Digest, Sha256};

/// Nine significant digits in scientific notation; locale independent.
pub fn num(x: f64) -> String {
    format!("{x:.8e}")
}

/// A comma-separated table built row by row.
#[derive(Debug, Clone, Default)]
pub struct Table {
    text: String,
    columns: usize,
}

impl Table {
    pub fn new<S: AsRef<str>>(header: &[S]) -> Self {
        let mut t = Self {
            text: String::new(),
            columns: header.len(),
        };
        t.push_row(header.iter().map(|s| s.as_ref().to_string()));
        t
    }

    pub fn row<I: IntoIterator<Item = String>>(&mut self, cells: I) -> &mut Self {
        self.push_row(cells);
        self
    }

    fn push_row<I: IntoIterator<Item = String>>(&mut self, cells: I) {
        let cells: Vec<String> = cells.into_iter().collect();
        debug_assert_eq!(cells.len(), self.columns, "row width");
        self.text.push_str(&cells.join(","));
        self.text.push('\n');
    }

    pub fn len(&self) -> usize {
        self.text.lines().count().saturating_sub(1)
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn into_bytes(self) -> Vec<u8> {
        self.text.into_bytes()
    }
}

/// Rendered output file, relative to the output directory.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OutputFile {
    pub path: PathBuf,
    pub bytes: Vec<u8>,
}

impl OutputFile {
    pub fn new(path: impl Into<PathBuf>, bytes: Vec<u8>) -> Self {
        Self {
            path: path.into(),
            bytes,
        }
    }

    pub fn text(&self) -> &str {
        std::str::from_utf8(&self.bytes).unwrap_or("")
    }
}

pub fn sha256_hex(bytes: &[u8]) -> String {
    hex::encode(Sha256::digest(bytes))
}

/// Writes `files` under `dir` followed by a `MANIFEST` listing each with its
/// size and checksum.
pub fn write_all(
    dir: &Path,
    files: &[OutputFile],
    complete: bool,
    notes: &[String],
) -> io::Result<()> {
    std::fs::create_dir_all(dir)?;
    for f in files {
        let p = dir.join(&f.path);
        if let Some(parent) = p.parent() {
            std::fs::create_dir_all(parent)?;
        }
        std::fs::write(p, &f.bytes)?;
    }
    std::fs::write(dir.join("MANIFEST"), manifest(files, complete, notes))
}

pub fn manifest(files: &[OutputFile], complete: bool, notes: &[String]) -> String {
    let mut s = String::new();
    let _ = writeln!(
        s,
        "status: {}",
        if complete { "complete" } else { "incomplete" }
    );
    for n in notes {
        let _ = writeln!(s, "note: {n}");
    }
    for f in files {
        let _ = writeln!(
            s,
            "{}  {:>10}  {}",
            sha256_hex(&f.bytes),
            f.bytes.len(),
            f.path.display()
        );
    }
    s
}
