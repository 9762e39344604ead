//! CSV emission: `#` metadata block, header row, 17-significant-digit floats, LF.

use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use sha2::{Digest, Sha256};

use crate::CliError;

pub struct Meta {
    pub command: &'static str,
    pub config_sha256: String,
    pub seed: u64,
    pub trials: u64,
}

impl Meta {
    pub fn new(command: &'static str, config_bytes: Option<&[u8]>, seed: u64, trials: u64) -> Self {
        let config_sha256 = match config_bytes {
            Some(b) => Sha256::digest(b).iter().map(|x| format!("{x:02x}")).collect(),
            None => "none".to_string(),
        };
        Meta { command, config_sha256, seed, trials }
    }
}

pub fn float(x: f64) -> String {
    if x.is_nan() {
        "nan".into()
    } else {
        format!("{x:.16e}")
    }
}

pub struct Table {
    header: Vec<String>,
    rows: Vec<Vec<String>>,
}

impl Table {
    pub fn new(header: Vec<String>) -> Self {
        Table { header, rows: Vec::new() }
    }

    pub fn push(&mut self, row: Vec<String>) {
        debug_assert_eq!(row.len(), self.header.len());
        self.rows.push(row);
    }

    pub fn render(&self, meta: &Meta, extra: &[(&str, String)]) -> String {
        let mut s = String::new();
        let _ = writeln!(s, "# tool: risevt {}", env!("CARGO_PKG_VERSION"));
        let _ = writeln!(s, "# command: {}", meta.command);
        let _ = writeln!(s, "# config_sha256: {}", meta.config_sha256);
        let _ = writeln!(s, "# seed: {}", meta.seed);
        let _ = writeln!(s, "# trials: {}", meta.trials);
        for (k, v) in extra {
            let _ = writeln!(s, "# {k}: {v}");
        }
        s.push_str(&self.header.join(","));
        s.push('\n');
        for r in &self.rows {
            s.push_str(&r.join(","));
            s.push('\n');
        }
        s
    }

    pub fn write(&self, dir: &Path, file: &str, meta: &Meta, extra: &[(&str, String)]) -> Result<PathBuf, CliError> {
        std::fs::create_dir_all(dir).map_err(|e| CliError::Io(format!("{}: {e}", dir.display())))?;
        let path = dir.join(file);
        std::fs::write(&path, self.render(meta, extra)).map_err(|e| CliError::Io(format!("{}: {e}", path.display())))?;
        Ok(path)
    }
}
