use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::Path;

use crate::error::Result;

/// First line of every scatter file: `#schema=xcoh-scatter/1`.
pub const SCATTER_SCHEMA: &str = "xcoh-scatter/1";
pub const SWEEP_SCHEMA: &str = "xcoh-sweep/1";

/// A buffered writer for `path`, or for standard output when `path` is `-`.
pub fn open_output(path: &Path) -> Result<Box<dyn Write>> {
    if path.as_os_str() == "-" {
        return Ok(Box::new(BufWriter::new(io::stdout().lock())));
    }
    let file = File::create(path)
        .map_err(|e| io::Error::new(e.kind(), format!("cannot create {}: {e}", path.display())))?;
    Ok(Box::new(BufWriter::new(file)))
}

pub(crate) fn write_preamble(
    w: &mut dyn Write,
    schema: &str,
    meta: &[(&str, String)],
) -> io::Result<()> {
    writeln!(w, "#schema={schema}")?;
    for (k, v) in meta {
        writeln!(w, "#{k}={v}")?;
    }
    Ok(())
}

pub(crate) fn write_row<S: AsRef<str>>(w: &mut dyn Write, fields: &[S]) -> io::Result<()> {
    for (i, f) in fields.iter().enumerate() {
        if i > 0 {
            w.write_all(b",")?;
        }
        w.write_all(f.as_ref().as_bytes())?;
    }
    w.write_all(b"\n")
}

/// Shortest representation that round-trips, switching to exponent form for
/// very small or large magnitudes.
pub(crate) fn num(v: f64) -> String {
    if v == 0.0 {
        // Fold -0 into 0.
        "0.0".to_string()
    } else {
        format!("{v:?}")
    }
}
