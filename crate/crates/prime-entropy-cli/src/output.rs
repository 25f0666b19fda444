//! CSV and JSON rendering.
//!
//! CSV rows are numeric-only (plus bare identifiers), so no quoting is ever
//! needed. Reals print with 15 significant digits, which both survives a
//! parse back to f64 and re-prints to the identical string — emitted CSV is
//! a fixed point of parse-then-serialize.

use prime_entropy::{Error, Result};

/// 15 significant digits, exponent notation.
pub fn fmt_real(x: f64) -> String {
    format!("{x:.14e}")
}

/// One CSV table: header line plus data lines, trailing newline.
pub fn render_csv(header: &str, rows: &[String]) -> String {
    let mut out = String::with_capacity(rows.len() * 32 + header.len() + 1);
    out.push_str(header);
    out.push('\n');
    for row in rows {
        out.push_str(row);
        out.push('\n');
    }
    out
}

/// Re-parse emitted CSV by field type (u64, then real, then bare string) and
/// re-serialize. For output produced by this crate the result is
/// byte-identical, which the tests pin down.
pub fn reserialize_csv(text: &str) -> Result<String> {
    let mut lines = text.lines();
    let header = lines
        .next()
        .ok_or_else(|| Error::Domain("empty csv".into()))?;
    let columns = header.split(',').count();
    let mut rows = Vec::new();
    for line in lines {
        let fields: Vec<&str> = line.split(',').collect();
        if fields.len() != columns {
            return Err(Error::Domain(format!(
                "row has {} fields, header has {columns}: {line:?}",
                fields.len()
            )));
        }
        let rendered: Vec<String> = fields
            .iter()
            .map(|field| {
                if field.is_empty() {
                    String::new()
                } else if let Ok(v) = field.parse::<u64>() {
                    v.to_string()
                } else if let Ok(v) = field.parse::<f64>() {
                    fmt_real(v)
                } else {
                    (*field).to_string()
                }
            })
            .collect();
        rows.push(rendered.join(","));
    }
    Ok(render_csv(header, &rows))
}
