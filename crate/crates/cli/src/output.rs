//! Rendering and atomic writing of reports.

use std::io::Write;

use serde::Serialize;

use crate::{Common, Failure, Format};

/// Flat rows for `--format csv`.
pub struct Table {
    header: Vec<String>,
    rows: Vec<Vec<String>>,
}

impl Table {
    pub fn new(header: &[&str]) -> Self {
        Table { header: header.iter().map(|s| s.to_string()).collect(), rows: Vec::new() }
    }

    pub fn row<I: IntoIterator<Item = String>>(&mut self, cells: I) {
        self.rows.push(cells.into_iter().collect());
    }

    fn render(&self) -> Result<Vec<u8>, Failure> {
        let mut w = csv::Writer::from_writer(Vec::new());
        w.write_record(&self.header).map_err(|e| Failure::Io(e.to_string()))?;
        for r in &self.rows {
            w.write_record(r).map_err(|e| Failure::Io(e.to_string()))?;
        }
        w.into_inner().map_err(|e| Failure::Io(e.to_string()))
    }
}

pub fn emit<T: Serialize>(common: &Common, doc: &T, table: &Table) -> Result<(), Failure> {
    let bytes = match common.format {
        Format::Json => {
            let mut s = serde_json::to_string_pretty(doc).map_err(|e| Failure::Io(e.to_string()))?;
            s.push('\n');
            s.into_bytes()
        }
        Format::Csv => table.render()?,
    };
    match &common.out {
        None => std::io::stdout().write_all(&bytes).map_err(|e| Failure::Io(e.to_string())),
        Some(path) => {
            let dir = match path.parent() {
                Some(d) if !d.as_os_str().is_empty() => d.to_path_buf(),
                _ => std::path::PathBuf::from("."),
            };
            let io = |e: std::io::Error| Failure::Io(format!("{}: {e}", path.display()));
            let mut tmp = tempfile::NamedTempFile::new_in(&dir).map_err(io)?;
            tmp.write_all(&bytes).map_err(io)?;
            tmp.as_file().sync_all().map_err(io)?;
            tmp.persist(path).map_err(|e| io(e.error))?;
            Ok(())
        }
    }
}
