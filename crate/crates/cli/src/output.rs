use std::fs;
use std::io::Write;
use std::path::PathBuf;

use coverage_correction::harness::Table;

use crate::cli::{Common, Format};
use crate::CliError;

pub const OUT_DIR_ENV: &str = "COVCORR_OUT_DIR";

fn render(table: &Table, format: Format) -> String {
    match format {
        Format::Csv => table.to_csv(),
        Format::Json => {
            let mut s = table.to_json();
            s.push('\n');
            s
        }
    }
}

fn out_dir(common: &Common) -> Option<PathBuf> {
    common.out_dir.clone().or_else(|| {
        std::env::var_os(OUT_DIR_ENV)
            .filter(|v| !v.is_empty())
            .map(PathBuf::from)
    })
}

/// Writes `table` to stdout, or to `<dir>/<name>.<ext>` when an output
/// directory is configured.
pub fn emit(table: &Table, name: &str, common: &Common) -> Result<(), CliError> {
    let text = render(table, common.out);
    match out_dir(common) {
        Some(dir) => {
            fs::create_dir_all(&dir).map_err(|e| CliError::run(format!("cannot create {}: {e}", dir.display())))?;
            let ext = match common.out {
                Format::Csv => "csv",
                Format::Json => "json",
            };
            let path = dir.join(format!("{name}.{ext}"));
            fs::write(&path, text).map_err(|e| CliError::run(format!("cannot write {}: {e}", path.display())))?;
            eprintln!("wrote {}", path.display());
        }
        None => {
            let mut out = std::io::stdout().lock();
            out.write_all(text.as_bytes())
                .and_then(|_| out.flush())
                .map_err(|e| CliError::run(format!("cannot write output: {e}")))?;
        }
    }
    Ok(())
}

/// Like [`emit`], but a side table goes to stderr when there is no output
/// directory, keeping stdout a single document.
pub fn emit_side(table: &Table, name: &str, common: &Common) -> Result<(), CliError> {
    if out_dir(common).is_some() {
        emit(table, name, common)
    } else {
        eprint!("{}", render(table, Format::Csv));
        Ok(())
    }
}
