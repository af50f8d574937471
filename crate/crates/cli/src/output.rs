//! Atomic file writes and CSV formatting.

use std::fs;
use std::io::{self, Write};
use std::path::{Path, PathBuf};

use modmhd_core::analysis::DiagnosticsRecord;

/// Writes `bytes` to a temporary sibling of `path`, then renames it into
/// place, so readers never observe a partial file.
pub fn write_atomic(path: &Path, bytes: &[u8]) -> io::Result<()> {
    let name = path.file_name().ok_or_else(|| io::Error::new(io::ErrorKind::InvalidInput, "path has no file name"))?;
    let mut tmp_name = std::ffi::OsString::from(".");
    tmp_name.push(name);
    tmp_name.push(".tmp");
    let tmp: PathBuf = path.with_file_name(tmp_name);
    let result = (|| {
        let mut f = fs::File::create(&tmp)?;
        f.write_all(bytes)?;
        f.sync_all()?;
        fs::rename(&tmp, path)
    })();
    if result.is_err() {
        let _ = fs::remove_file(&tmp);
    }
    result
}

/// 17 significant digits; parses back to the same double.
pub fn fmt_f64(x: f64) -> String {
    format!("{x:.16e}")
}

pub fn diagnostics_csv(records: &[DiagnosticsRecord]) -> String {
    let mut out = DiagnosticsRecord::COLUMNS.join(",");
    out.push('\n');
    for r in records {
        let row: Vec<String> = r.values().iter().map(|&v| fmt_f64(v)).collect();
        out.push_str(&row.join(","));
        out.push('\n');
    }
    out
}

#[derive(Debug, thiserror::Error)]
pub enum CsvError {
    #[error("bad header: expected {expected:?}, found {found:?}")]
    Header { expected: String, found: String },
    #[error("line {line}: {message}")]
    Row { line: usize, message: String },
}

pub fn parse_diagnostics_csv(text: &str) -> Result<Vec<DiagnosticsRecord>, CsvError> {
    let mut lines = text.lines();
    let expected = DiagnosticsRecord::COLUMNS.join(",");
    let header = lines.next().unwrap_or("");
    if header != expected {
        return Err(CsvError::Header { expected, found: header.to_string() });
    }
    lines
        .enumerate()
        .map(|(i, line)| {
            let line_no = i + 2;
            let vals = line
                .split(',')
                .map(|s| s.parse::<f64>().map_err(|e| CsvError::Row { line: line_no, message: format!("{s:?}: {e}") }))
                .collect::<Result<Vec<_>, _>>()?;
            let arr: [f64; 16] = vals
                .try_into()
                .map_err(|v: Vec<f64>| CsvError::Row { line: line_no, message: format!("expected 16 fields, found {}", v.len()) })?;
            Ok(DiagnosticsRecord::from_values(arr))
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn seventeen_digit_round_trip() {
        for x in [0.1, 1.0 / 3.0, -2.5e-300, 6.02214076e23, f64::MIN_POSITIVE, 0.0, -0.0, f64::MAX] {
            let back: f64 = fmt_f64(x).parse().unwrap();
            assert_eq!(back.to_bits(), x.to_bits(), "{x}");
        }
    }

    #[test]
    fn atomic_write_replaces_and_leaves_no_temp() {
        let dir = tempfile::tempdir().unwrap();
        let p = dir.path().join("a.csv");
        write_atomic(&p, b"one").unwrap();
        write_atomic(&p, b"two").unwrap();
        assert_eq!(fs::read(&p).unwrap(), b"two");
        assert_eq!(fs::read_dir(dir.path()).unwrap().count(), 1);
        assert!(write_atomic(&dir.path().join("missing/x.csv"), b"z").is_err());
    }

    #[test]
    fn csv_header_and_parse() {
        let rec = DiagnosticsRecord::from_values(std::array::from_fn(|i| (i as f64 + 1.0) / 7.0));
        let text = diagnostics_csv(&[rec, rec]);
        assert!(text.starts_with(
            "t,dt,mass,momx,momy,momz,e_kin,e_mag,e_int,e_tot,divA_l2,divA_max,divH_l2,ohm_resid,gauge_drift,entropy\n"
        ));
        assert_eq!(parse_diagnostics_csv(&text).unwrap(), vec![rec, rec]);
        assert!(parse_diagnostics_csv("t,dt\n").is_err());
    }
}
