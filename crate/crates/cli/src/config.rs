//! Flat `key = value` config files, merged in front of the command-line flags.

use std::ffi::OsString;
use std::fs;
use std::path::Path;

use crate::CliError;

/// Parses `key = value` lines into `--key value` pairs. Blank lines and lines
/// starting with `#` are skipped.
pub fn parse(text: &str, origin: &Path) -> Result<Vec<OsString>, CliError> {
    let mut args = Vec::new();
    for (i, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let (key, value) = line
            .split_once('=')
            .ok_or_else(|| CliError::config(format!("{}:{}: expected key = value", origin.display(), i + 1)))?;
        let key = key.trim();
        if key.is_empty() || key.starts_with('-') || key == "config" {
            return Err(CliError::config(format!(
                "{}:{}: invalid key '{key}'",
                origin.display(),
                i + 1
            )));
        }
        args.push(format!("--{key}").into());
        args.push(value.trim().into());
    }
    Ok(args)
}

fn config_path(argv: &[OsString]) -> Option<OsString> {
    let mut it = argv.iter();
    while let Some(a) = it.next() {
        let s = a.to_string_lossy();
        if s == "--config" {
            return it.next().cloned();
        }
        if let Some(p) = s.strip_prefix("--config=") {
            return Some(p.into());
        }
    }
    None
}

/// Inserts the config file's flags right after the subcommand, so later
/// command-line occurrences override them.
pub fn merge(argv: Vec<OsString>) -> Result<Vec<OsString>, CliError> {
    let Some(path) = config_path(&argv) else {
        return Ok(argv);
    };
    let path = Path::new(&path);
    let text = fs::read_to_string(path)
        .map_err(|e| CliError::config(format!("cannot read config {}: {e}", path.display())))?;
    let extra = parse(&text, path)?;
    let split = argv.len().min(2);
    let mut out: Vec<OsString> = argv[..split].to_vec();
    out.extend(extra);
    out.extend_from_slice(&argv[split..]);
    Ok(out)
}
