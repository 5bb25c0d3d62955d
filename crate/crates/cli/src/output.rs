//! Result emission: JSON summary on stdout, optional files written atomically.

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use santalo_core::{Error, Result};
use serde_json::Value;

/// Collects the artifacts of one subcommand and writes them once at the end.
pub struct Output {
    dir: Option<PathBuf>,
    files: Vec<(String, Vec<u8>)>,
}

impl Output {
    pub fn new(dir: Option<PathBuf>) -> Self {
        Self { dir, files: Vec::new() }
    }

    /// Queues a CSV table. Floats use Rust's shortest round-trip formatting.
    pub fn csv(&mut self, name: &str, header: &[&str], rows: impl IntoIterator<Item = Vec<String>>) -> Result<()> {
        let mut w = csv::Writer::from_writer(Vec::new());
        w.write_record(header).map_err(csv_error)?;
        for row in rows {
            w.write_record(&row).map_err(csv_error)?;
        }
        let bytes = w.into_inner().map_err(|e| Error::Io(e.to_string()))?;
        self.files.push((name.to_string(), bytes));
        Ok(())
    }

    pub fn raw(&mut self, name: &str, bytes: Vec<u8>) {
        self.files.push((name.to_string(), bytes));
    }

    /// Prints the summary and writes all queued files plus `summary.json`
    /// into the output directory, if one was given.
    pub fn finish(self, summary: &Value) -> Result<()> {
        let text = serde_json::to_string_pretty(summary).map_err(|e| Error::Io(e.to_string()))?;
        if let Some(dir) = &self.dir {
            fs::create_dir_all(dir).map_err(|e| Error::Io(format!("{}: {e}", dir.display())))?;
            for (name, bytes) in &self.files {
                write_atomic(&dir.join(name), bytes)?;
            }
            write_atomic(&dir.join("summary.json"), format!("{text}\n").as_bytes())?;
        }
        // A closed pipe (`| head`) is not an error of the computation.
        match writeln!(std::io::stdout().lock(), "{text}") {
            Err(e) if e.kind() != std::io::ErrorKind::BrokenPipe => Err(Error::Io(e.to_string())),
            _ => Ok(()),
        }
    }
}

fn csv_error(e: csv::Error) -> Error {
    Error::Io(e.to_string())
}

/// Writes through a temporary sibling file and renames it into place, so a
/// reader never observes a partially written artifact.
pub fn write_atomic(path: &Path, bytes: &[u8]) -> Result<()> {
    let dir = path.parent().filter(|d| !d.as_os_str().is_empty()).unwrap_or(Path::new("."));
    let io = |e: std::io::Error| Error::Io(format!("{}: {e}", path.display()));
    let mut tmp = tempfile::NamedTempFile::new_in(dir).map_err(io)?;
    tmp.write_all(bytes).map_err(io)?;
    tmp.as_file().sync_all().map_err(io)?;
    tmp.persist(path).map_err(|e| io(e.error))?;
    Ok(())
}

pub fn num(x: f64) -> String {
    x.to_string()
}
