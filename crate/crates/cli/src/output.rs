//! Artifact output: stdout, a file, or a directory of per-task files, written atomically.

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{Context, Result};

use crate::config::Format;
use crate::tasks::Artifact;

/// A target is a directory when it exists as one, ends in a separator, or has no extension.
pub fn is_dir_target(p: &Path) -> bool {
    p.is_dir() || p.as_os_str().to_string_lossy().ends_with(std::path::MAIN_SEPARATOR) || p.extension().is_none()
}

pub fn write_atomic(path: &Path, content: &str) -> Result<()> {
    if let Some(parent) = path.parent().filter(|p| !p.as_os_str().is_empty()) {
        fs::create_dir_all(parent).with_context(|| format!("creating {}", parent.display()))?;
    }
    let tmp = path.with_extension(format!("{}.tmp", path.extension().and_then(|e| e.to_str()).unwrap_or("")));
    fs::write(&tmp, content).with_context(|| format!("writing {}", tmp.display()))?;
    fs::rename(&tmp, path).with_context(|| format!("renaming to {}", path.display()))?;
    Ok(())
}

fn render(art: &Artifact, format: Format) -> String {
    match format {
        Format::Json => format!("{:#}\n", art.json),
        Format::Csv => art.csv.clone(),
    }
}

/// Writes one artifact and returns where it went (`None` for stdout).
///
/// `out = csv` or `out = json` is shorthand for that format on stdout.
pub fn emit(art: &Artifact, name: &str, out: Option<&Path>, format: Format) -> Result<Option<PathBuf>> {
    let (out, format) = match out.and_then(|p| p.to_str()) {
        Some("csv") => (None, Format::Csv),
        Some("json") => (None, Format::Json),
        _ => (out, format),
    };
    let text = render(art, format);
    match out {
        None => {
            let mut so = std::io::stdout().lock();
            so.write_all(text.as_bytes())?;
            so.flush()?;
            Ok(None)
        }
        Some(p) => {
            let path = if is_dir_target(p) { p.join(format!("{name}.{}", format.ext())) } else { p.to_path_buf() };
            write_atomic(&path, &text)?;
            Ok(Some(path))
        }
    }
}

pub fn report_failures(art: &Artifact) {
    if let Some(rows) = art.json.get("rows").and_then(|r| r.as_array()) {
        for row in rows.iter().filter(|r| r.get("status").and_then(|s| s.as_str()) == Some("fail")) {
            eprintln!("FAIL {}", row);
        }
    }
}

pub fn status(art: &Artifact) -> ExitCode {
    if art.verdict == Some(false) {
        report_failures(art);
        ExitCode::FAILURE
    } else {
        ExitCode::SUCCESS
    }
}
