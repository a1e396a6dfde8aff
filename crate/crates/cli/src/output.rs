use std::io::Write;
use std::path::{Path, PathBuf};

use crate::CliError;

pub const VERSION: &str = env!("CARGO_PKG_VERSION");

/// A CSV document with `#` comment lines (tool version, seed, parameters)
/// ahead of the header row.
pub struct CsvReport {
    comments: Vec<String>,
    writer: csv::Writer<Vec<u8>>,
}

impl CsvReport {
    pub fn new(command: &str, seed: u64, header: &[&str]) -> Result<CsvReport, CliError> {
        let mut writer = csv::Writer::from_writer(Vec::new());
        writer.write_record(header)?;
        Ok(CsvReport {
            comments: vec![
                format!("fuzzy-refine {VERSION}"),
                format!("command={command}"),
                format!("seed={seed}"),
            ],
            writer,
        })
    }

    pub fn comment(&mut self, key: &str, value: impl std::fmt::Display) -> &mut Self {
        self.comments.push(format!("{key}={value}"));
        self
    }

    pub fn row<I, S>(&mut self, fields: I) -> Result<(), CliError>
    where
        I: IntoIterator<Item = S>,
        S: AsRef<[u8]>,
    {
        self.writer.write_record(fields)?;
        Ok(())
    }

    pub fn into_bytes(self) -> Result<Vec<u8>, CliError> {
        let mut out = Vec::new();
        for c in &self.comments {
            writeln!(out, "# {c}")?;
        }
        let body = self
            .writer
            .into_inner()
            .map_err(|e| CliError::Io(std::io::Error::other(e.error().to_string())))?;
        out.extend_from_slice(&body);
        Ok(out)
    }
}

/// Writes through a temporary file in the same directory, then renames.
pub fn write_atomic(path: &Path, bytes: &[u8]) -> Result<(), CliError> {
    let dir = match path.parent() {
        Some(p) if !p.as_os_str().is_empty() => p.to_path_buf(),
        _ => PathBuf::from("."),
    };
    std::fs::create_dir_all(&dir)?;
    let mut tmp = tempfile::NamedTempFile::new_in(&dir)?;
    tmp.write_all(bytes)?;
    tmp.as_file().sync_all()?;
    tmp.persist(path).map_err(|e| CliError::Io(e.error))?;
    Ok(())
}

/// Where a single-file command writes: `--out`, else the output directory
/// under `default_name`, else stdout.
pub fn emit(
    report: CsvReport,
    out: Option<&Path>,
    out_dir: Option<&Path>,
    default_name: &str,
) -> Result<Option<PathBuf>, CliError> {
    let bytes = report.into_bytes()?;
    let target = out
        .map(Path::to_path_buf)
        .or_else(|| out_dir.map(|d| d.join(default_name)));
    match target {
        Some(path) => {
            write_atomic(&path, &bytes)?;
            Ok(Some(path))
        }
        None => {
            std::io::stdout().write_all(&bytes)?;
            Ok(None)
        }
    }
}

/// Shortest round-trip representation, so reruns give identical bytes.
pub fn num(x: f64) -> String {
    format!("{x}")
}
