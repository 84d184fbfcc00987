use std::collections::BTreeMap;
use std::fmt;
use std::fs;
use std::io::Write;
use std::path::Path;

use vstates::cmkernel::Model;

/// CLI failure with its exit code.
#[derive(Debug)]
pub enum CliError {
    /// Bad input: exit 1.
    Usage(String),
    /// Numerical failure: exit 2.
    Numerical(String),
}

impl CliError {
    pub fn code(&self) -> u8 {
        match self {
            CliError::Usage(_) => 1,
            CliError::Numerical(_) => 2,
        }
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Usage(m) | CliError::Numerical(m) => f.write_str(m),
        }
    }
}

impl From<vstates::Error> for CliError {
    fn from(e: vstates::Error) -> Self {
        if e.is_validation() {
            CliError::Usage(e.to_string())
        } else {
            CliError::Numerical(e.to_string())
        }
    }
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        CliError::Usage(format!("i/o: {e}"))
    }
}

impl From<serde_json::Error> for CliError {
    fn from(e: serde_json::Error) -> Self {
        CliError::Numerical(format!("json: {e}"))
    }
}

/// Shortest representation that parses back to the same f64.
pub fn num(x: f64) -> String {
    format!("{x:?}")
}

pub fn params_map(model: &Model) -> BTreeMap<String, f64> {
    model
        .params()
        .into_iter()
        .map(|(k, v)| (k.to_string(), v))
        .collect()
}

/// `#`-prefixed metadata lines.
pub fn csv_header(invocation: &str, meta: &[(&str, String)]) -> String {
    let mut s = format!("# {invocation}\n");
    for (k, v) in meta {
        s.push_str(&format!("# {k}={v}\n"));
    }
    s
}

pub fn write_output(path: Option<&Path>, content: &str) -> Result<(), CliError> {
    match path {
        Some(p) => {
            let fail = |e: std::io::Error| CliError::Usage(format!("cannot write {}: {e}", p.display()));
            if let Some(dir) = p.parent().filter(|d| !d.as_os_str().is_empty()) {
                fs::create_dir_all(dir).map_err(fail)?;
            }
            fs::write(p, content).map_err(fail)
        }
        None => {
            let mut out = std::io::stdout().lock();
            out.write_all(content.as_bytes())?;
            out.flush()?;
            Ok(())
        }
    }
}
