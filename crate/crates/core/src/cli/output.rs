use std::fs;
use std::io::Write;
use std::path::Path;

use crate::consistency::ConvergenceCurve;
use crate::{Error, Result};

pub const CSV_HEADER: &str = "measure,n,M,count_S,count_S_and_H1,estimate,std_error,oracle,defined";

/// Nine significant digits in positional notation.
pub fn format_sig9(v: f64) -> String {
    if v == 0.0 || !v.is_finite() {
        return format!("{v}");
    }
    let sci = format!("{v:.8e}");
    let exponent: i32 = sci
        .rsplit_once('e')
        .and_then(|(_, e)| e.parse().ok())
        .expect("rust scientific format");
    let decimals = (8 - exponent).max(0) as usize;
    format!("{v:.decimals$}")
}

fn opt(v: Option<f64>) -> String {
    v.map(format_sig9).unwrap_or_default()
}

/// Header plus one row per `(measure, n)`, curves in the order given.
pub fn convergence_csv(curves: &[ConvergenceCurve]) -> String {
    let mut out = String::from(CSV_HEADER);
    out.push('\n');
    for curve in curves {
        for row in &curve.rows {
            let e = &row.estimate;
            out.push_str(&format!(
                "{},{},{},{},{},{},{},{},{}\n",
                curve.measure,
                e.n,
                e.replications,
                e.count_s,
                e.count_s_and_h1,
                opt(e.estimate),
                opt(e.std_error),
                opt(row.oracle),
                e.defined(),
            ));
        }
    }
    out
}

/// Writes `contents` next to `path` and renames it into place.
pub fn write_atomic(path: &Path, contents: &str) -> Result<()> {
    let io = |source| Error::Io {
        path: path.display().to_string(),
        source,
    };
    let file_name = path
        .file_name()
        .ok_or_else(|| io(std::io::Error::other("path has no file name")))?;
    let tmp = path.with_file_name(format!(
        ".{}.tmp-{}",
        file_name.to_string_lossy(),
        std::process::id()
    ));
    let result = (|| {
        let mut f = fs::File::create(&tmp)?;
        f.write_all(contents.as_bytes())?;
        f.sync_all()?;
        fs::rename(&tmp, path)
    })();
    if result.is_err() {
        let _ = fs::remove_file(&tmp);
    }
    result.map_err(io)
}

pub fn emit_convergence_csv(curves: &[ConvergenceCurve], path: &Path) -> Result<()> {
    if curves.is_empty() {
        return Err(Error::domain("no curves to write"));
    }
    write_atomic(path, &convergence_csv(curves))
}
