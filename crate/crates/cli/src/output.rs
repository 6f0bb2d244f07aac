use std::fs;
use std::io::Write;
use std::path::Path;

use orthopar::io::to_json_full_precision;
use orthopar::Error;
use serde::Serialize;

pub const OK: u8 = 0;
pub const CHECK_FAILED: u8 = 1;
pub const INPUT_ERROR: u8 = 2;
pub const NOT_CONVERGED: u8 = 3;
pub const NUMERICAL: u8 = 4;

#[derive(Debug)]
pub struct Failure {
    pub code: u8,
    pub message: String,
}

impl Failure {
    pub fn input(message: impl Into<String>) -> Self {
        Self { code: INPUT_ERROR, message: message.into() }
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let code = match e {
            Error::InvalidInput(_) | Error::Domain(_) => INPUT_ERROR,
            Error::NotPositiveDefinite { .. } | Error::Conditioning(_) | Error::Accuracy { .. } => NUMERICAL,
        };
        Self { code, message: e.to_string() }
    }
}

/// Who produced a report and with which settings. `flags` lists the
/// effective settings, not the raw command line, and leaves out `--out`.
#[derive(Debug, Clone, Serialize)]
pub struct Provenance {
    pub tool: &'static str,
    pub version: &'static str,
    pub command: &'static str,
    pub flags: Vec<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
}

impl Provenance {
    pub fn new(command: &'static str, flags: Vec<String>, seed: Option<u64>) -> Self {
        Self { tool: "orthopar", version: env!("CARGO_PKG_VERSION"), command, flags, seed }
    }

    pub fn line(&self) -> String {
        let mut s = format!("{} {} {}", self.tool, self.version, self.command);
        for f in &self.flags {
            s.push(' ');
            s.push_str(f);
        }
        if let Some(seed) = self.seed {
            s.push_str(&format!(" (seed {seed})"));
        }
        s
    }
}

pub fn json<T: Serialize>(value: &T) -> Result<String, Failure> {
    to_json_full_precision(value).map_err(|e| Failure { code: NUMERICAL, message: format!("JSON output: {e}") })
}

pub fn emit(out: Option<&Path>, text: &str) -> Result<(), Failure> {
    match out {
        Some(path) => fs::write(path, text).map_err(|e| Failure::input(format!("cannot write {}: {e}", path.display()))),
        None => {
            let mut stdout = std::io::stdout().lock();
            stdout.write_all(text.as_bytes()).and_then(|_| stdout.flush()).map_err(|e| Failure::input(e.to_string()))
        }
    }
}

pub fn read_input(path: &Path) -> Result<Vec<u8>, Failure> {
    if path == Path::new("-") {
        let mut buf = Vec::new();
        std::io::Read::read_to_end(&mut std::io::stdin(), &mut buf).map_err(|e| Failure::input(e.to_string()))?;
        return Ok(buf);
    }
    fs::read(path).map_err(|e| Failure::input(format!("cannot read {}: {e}", path.display())))
}

pub fn read_text(path: &Path) -> Result<String, Failure> {
    String::from_utf8(read_input(path)?).map_err(|_| Failure::input(format!("{} is not UTF-8 text", path.display())))
}

/// A Markdown table with the given header and rows.
pub fn md_table(header: &[&str], rows: &[Vec<String>]) -> String {
    let mut s = format!("| {} |\n|{}\n", header.join(" | "), "---|".repeat(header.len()));
    for r in rows {
        s.push_str(&format!("| {} |\n", r.join(" | ")));
    }
    s
}
