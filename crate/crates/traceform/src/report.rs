//! Report emission: deterministic CSV tables plus JSON summaries, both
//! stamped with a schema version and a config hash. Timestamps live only in
//! CSV comment lines so identical runs produce byte-identical bodies.

use crate::error::{Error, Result};
use std::fmt::Write as _;
use std::path::Path;

pub const SCHEMA_VERSION: &str = "1";

/// FNV-1a 64-bit hash of the canonical config text, hex-encoded.
pub fn config_hash(canonical: &str) -> String {
    let mut hash: u64 = 0xcbf2_9ce4_8422_2325;
    for byte in canonical.as_bytes() {
        hash ^= u64::from(*byte);
        hash = hash.wrapping_mul(0x0000_0100_0000_01b3);
    }
    format!("{hash:016x}")
}

/// A CSV table with comment headers. The body (header row + data rows) is
/// deterministic; volatile information goes into `# comments`.
#[derive(Debug, Clone)]
pub struct CsvReport {
    columns: Vec<String>,
    rows: Vec<Vec<String>>,
    comments: Vec<String>,
}

/// Canonical float formatting for CSV cells: shortest round-trip form.
pub fn fmt_f64(x: f64) -> String {
    if x.is_nan() {
        "nan".to_string()
    } else if x.is_infinite() {
        if x > 0.0 { "inf" } else { "-inf" }.to_string()
    } else {
        format!("{x}")
    }
}

impl CsvReport {
    pub fn new(columns: &[&str]) -> Self {
        Self {
            columns: columns.iter().map(|c| c.to_string()).collect(),
            rows: Vec::new(),
            comments: Vec::new(),
        }
    }

    /// Add a `# key: value` comment line (not part of the body).
    pub fn comment(&mut self, key: &str, value: &str) {
        self.comments.push(format!("# {key}: {value}"));
    }

    pub fn push_row(&mut self, cells: Vec<String>) {
        assert_eq!(cells.len(), self.columns.len(), "row arity mismatch");
        self.rows.push(cells);
    }

    /// Render the complete file contents.
    pub fn render(&self) -> String {
        let mut out = String::new();
        for c in &self.comments {
            out.push_str(c);
            out.push('\n');
        }
        let _ = writeln!(out, "{}", self.columns.join(","));
        for row in &self.rows {
            let _ = writeln!(out, "{}", row.join(","));
        }
        out
    }

    /// Body only (header + rows, comments stripped) — the byte-identical
    /// part across reruns.
    pub fn body(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "{}", self.columns.join(","));
        for row in &self.rows {
            let _ = writeln!(out, "{}", row.join(","));
        }
        out
    }

    pub fn write_to(&self, path: &Path) -> Result<()> {
        if let Some(parent) = path.parent() {
            std::fs::create_dir_all(parent)?;
        }
        std::fs::write(path, self.render())?;
        Ok(())
    }
}

/// Write a JSON summary with the standard provenance fields injected.
pub fn write_json_summary(path: &Path, hash: &str, mut value: serde_json::Value) -> Result<()> {
    let obj = value
        .as_object_mut()
        .ok_or_else(|| Error::InvalidParameter("summary must be a JSON object".into()))?;
    obj.insert(
        "schema_version".to_string(),
        serde_json::Value::String(SCHEMA_VERSION.to_string()),
    );
    obj.insert(
        "config_hash".to_string(),
        serde_json::Value::String(hash.to_string()),
    );
    if let Some(parent) = path.parent() {
        std::fs::create_dir_all(parent)?;
    }
    let text =
        serde_json::to_string_pretty(&value).map_err(|e| Error::InvalidParameter(e.to_string()))?;
    std::fs::write(path, text + "\n")?;
    Ok(())
}

/// Seconds since the Unix epoch, for comment lines only.
pub fn unix_timestamp() -> u64 {
    std::time::SystemTime::now()
        .duration_since(std::time::UNIX_EPOCH)
        .map(|d| d.as_secs())
        .unwrap_or(0)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn hash_is_stable_and_content_sensitive() {
        let a = config_hash("{\"kernel\":1}");
        let b = config_hash("{\"kernel\":1}");
        let c = config_hash("{\"kernel\":2}");
        assert_eq!(a, b);
        assert_ne!(a, c);
        assert_eq!(a.len(), 16);
    }

    #[test]
    fn body_excludes_comments() {
        let mut r = CsvReport::new(&["n", "value"]);
        r.comment("generated-unix", "12345");
        r.push_row(vec!["1".into(), fmt_f64(0.5)]);
        let rendered = r.render();
        assert!(rendered.starts_with("# generated-unix: 12345\n"));
        assert_eq!(r.body(), "n,value\n1,0.5\n");
    }

    #[test]
    fn float_formatting_round_trips() {
        for x in [0.1, 1.0 / 3.0, 2.0_f64.sqrt(), 1e-300, -4.75] {
            let s = fmt_f64(x);
            let back: f64 = s.parse().unwrap();
            assert_eq!(back, x);
        }
        assert_eq!(fmt_f64(f64::INFINITY), "inf");
    }
}
