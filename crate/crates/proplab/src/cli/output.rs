//! Report files: comment headers, atomic writes and the manifest.

use std::io::Write;
use std::path::{Path, PathBuf};

use sha2::{Digest, Sha256};

use crate::error::{Error, Result};
use crate::experiments::{DecayReport, ExperimentConfig};

/// Writes `contents` to `path` via a temporary sibling and a rename.
pub fn write_atomic(path: &Path, contents: &[u8]) -> Result<()> {
    let dir = path.parent().unwrap_or(Path::new("."));
    let name = path.file_name().and_then(|s| s.to_str()).unwrap_or("out");
    let tmp = dir.join(format!(".{name}.tmp{}", std::process::id()));
    let result = (|| {
        let mut f = std::fs::File::create(&tmp)?;
        f.write_all(contents)?;
        f.sync_all()?;
        std::fs::rename(&tmp, path)
    })();
    if result.is_err() {
        let _ = std::fs::remove_file(&tmp);
    }
    result.map_err(|e| Error::io(path, e))
}

pub fn header(command: &str, cfg: &ExperimentConfig, report: &DecayReport) -> String {
    format!(
        "# proplab {}\n# command={command} kind={}\n# config_hash={}\n# grid n={} L={} h={}\n",
        crate::VERSION,
        report.kind,
        cfg.hash(),
        report.grid_n,
        report.grid_l,
        crate::experiments::fmt_f64(report.grid_h),
    )
}

pub fn sha256_hex(bytes: &[u8]) -> String {
    hex::encode(Sha256::digest(bytes))
}

/// Writes `series.csv`, `certificates.csv`, `summary.txt` and finally
/// `manifest.txt`; returns the paths in that order.
pub fn write_report(
    out: &Path,
    command: &str,
    extra: &[(String, String)],
    cfg: &ExperimentConfig,
    report: &DecayReport,
) -> Result<Vec<PathBuf>> {
    std::fs::create_dir_all(out).map_err(|e| Error::io(out, e))?;
    let head = header(command, cfg, report);
    let files = [
        ("series.csv", report.series_csv()),
        ("certificates.csv", report.certificates_csv()),
        ("summary.txt", report.summary()),
    ];
    let mut paths = Vec::new();
    let mut manifest_files = String::new();
    let mut all = Sha256::new();
    for (name, body) in files {
        let text = format!("{head}{body}");
        let p = out.join(name);
        write_atomic(&p, text.as_bytes())?;
        let digest = sha256_hex(text.as_bytes());
        all.update(name.as_bytes());
        all.update(digest.as_bytes());
        manifest_files.push_str(&format!("file.{name}.sha256={digest}\n"));
        paths.push(p);
    }
    let mut manifest = head;
    for (k, v) in extra {
        manifest.push_str(&format!("run.{k}={v}\n"));
    }
    for (k, v) in cfg.resolved() {
        manifest.push_str(&format!("config.{k}={v}\n"));
    }
    manifest.push_str(&manifest_files);
    manifest.push_str(&format!("content_hash={}\n", hex::encode(all.finalize())));
    let p = out.join("manifest.txt");
    write_atomic(&p, manifest.as_bytes())?;
    paths.push(p);
    Ok(paths)
}
