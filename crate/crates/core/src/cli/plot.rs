//! Splits a long-format series into one two-column data file per quantity.

use std::fs;
use std::path::{Path, PathBuf};

use super::output::SERIES_HEADER;
use crate::error::{Error, Result};

/// Writes `<stem>.<quantity>.dat` files (prefixed by the experiment name when
/// the series mixes experiments) into `out_dir`, defaulting to the series'
/// directory. Returns the paths in the order quantities first appear.
pub fn emit_plot_data(series: &Path, out_dir: Option<&Path>) -> Result<Vec<PathBuf>> {
    let mut reader = csv::Reader::from_path(series)
        .map_err(|e| Error::config(format!("cannot read series {}: {e}", series.display())))?;
    let header = reader
        .headers()
        .map_err(|e| Error::config(format!("bad series header: {e}")))?
        .clone();
    if header.iter().ne(SERIES_HEADER.iter().copied()) {
        return Err(Error::config(format!(
            "series header must be {}, found {}",
            SERIES_HEADER.join(","),
            header.iter().collect::<Vec<_>>().join(",")
        )));
    }

    // ((experiment, quantity), [(x, value)])
    type Group = ((String, String), Vec<(String, String)>);
    let mut groups: Vec<Group> = Vec::new();
    for rec in reader.records() {
        let rec = rec.map_err(|e| Error::config(format!("bad series row: {e}")))?;
        let key = (rec[0].to_string(), rec[2].to_string());
        let point = (rec[1].to_string(), rec[3].to_string());
        match groups.iter_mut().find(|(k, _)| *k == key) {
            Some((_, rows)) => rows.push(point),
            None => groups.push((key, vec![point])),
        }
    }
    if groups.is_empty() {
        return Err(Error::config(format!("series {} has no rows", series.display())));
    }

    let mixed = groups.iter().any(|((e, _), _)| *e != groups[0].0 .0);
    let stem = series
        .file_name()
        .and_then(|s| s.to_str())
        .map(|s| s.trim_end_matches(".csv").trim_end_matches(".series"))
        .unwrap_or("series")
        .to_string();
    let dir = out_dir
        .map(Path::to_path_buf)
        .or_else(|| series.parent().map(Path::to_path_buf))
        .unwrap_or_default();
    if !dir.as_os_str().is_empty() {
        fs::create_dir_all(&dir).map_err(|e| Error::config(format!("cannot create {}: {e}", dir.display())))?;
    }

    let mut written = Vec::with_capacity(groups.len());
    for ((experiment, quantity), rows) in groups {
        let name = if mixed {
            format!("{stem}.{experiment}.{quantity}.dat")
        } else {
            format!("{stem}.{quantity}.dat")
        };
        let path = dir.join(name);
        let mut text = String::from("x value\n");
        for (x, v) in rows {
            text.push_str(&x);
            text.push(' ');
            text.push_str(&v);
            text.push('\n');
        }
        fs::write(&path, text).map_err(|e| Error::config(format!("cannot write {}: {e}", path.display())))?;
        written.push(path);
    }
    Ok(written)
}
