//! Table emission: CSV with commented header (artifact version, config echo,
//! per-column descriptions) or an equivalent JSON document. Cell text uses
//! the shortest round-trip float form, so identical runs produce identical
//! bytes.

use std::io::Write;
use std::path::Path;

use anyhow::{Context, Result};

use crate::config::{ExperimentConfig, OutputFormat};

pub const ARTIFACT: &str = "expcluster";
pub const VERSION: &str = env!("CARGO_PKG_VERSION");

pub struct Column {
    pub name: &'static str,
    pub description: &'static str,
}

pub struct TableDoc {
    pub columns: Vec<Column>,
    pub rows: Vec<Vec<String>>,
}

impl TableDoc {
    pub fn new(columns: Vec<Column>) -> Self {
        TableDoc { columns, rows: Vec::new() }
    }

    pub fn push(&mut self, row: Vec<String>) {
        debug_assert_eq!(row.len(), self.columns.len());
        self.rows.push(row);
    }
}

/// Shortest round-trip representation; scientific form outside a moderate
/// magnitude band (plain `Display` would print hundreds of zeros there);
/// empty cell for missing values.
pub fn cell_f64(v: f64) -> String {
    if v.is_nan() {
        String::new()
    } else if v != 0.0 && (v.abs() < 1e-6 || v.abs() >= 1e15) {
        format!("{v:e}")
    } else {
        format!("{v}")
    }
}

pub fn write_doc(cfg: &ExperimentConfig, doc: &TableDoc, out: Option<&Path>) -> Result<()> {
    let text = render(cfg, doc)?;
    write_text(&text, out)
}

pub fn write_text(text: &str, out: Option<&Path>) -> Result<()> {
    match out {
        Some(path) => {
            std::fs::write(path, text).with_context(|| format!("writing {}", path.display()))?
        }
        None => {
            std::io::stdout().write_all(text.as_bytes())?;
        }
    }
    Ok(())
}

/// Header + column preamble of a CSV document, without the data rows; used
/// directly by commands that stream large row sets.
pub fn csv_preamble(cfg: &ExperimentConfig, columns: &[Column]) -> Result<String> {
    let mut s = String::new();
    s.push_str(&format!("# {ARTIFACT} {VERSION}\n"));
    s.push_str(&format!("# config: {}\n", cfg.to_json()?));
    for c in columns {
        s.push_str(&format!("# column {}: {}\n", c.name, c.description));
    }
    let names: Vec<&str> = columns.iter().map(|c| c.name).collect();
    s.push_str(&names.join(","));
    s.push('\n');
    Ok(s)
}

fn render(cfg: &ExperimentConfig, doc: &TableDoc) -> Result<String> {
    match cfg.format {
        OutputFormat::Csv => render_csv(cfg, doc),
        OutputFormat::Json => render_json(cfg, doc),
    }
}

fn render_csv(cfg: &ExperimentConfig, doc: &TableDoc) -> Result<String> {
    let mut s = csv_preamble(cfg, &doc.columns)?;
    for row in &doc.rows {
        s.push_str(&row.join(","));
        s.push('\n');
    }
    Ok(s)
}

fn render_json(cfg: &ExperimentConfig, doc: &TableDoc) -> Result<String> {
    let columns: Vec<serde_json::Value> = doc
        .columns
        .iter()
        .map(|c| serde_json::json!({ "name": c.name, "description": c.description }))
        .collect();
    let rows: Vec<serde_json::Value> = doc
        .rows
        .iter()
        .map(|row| {
            let obj: serde_json::Map<String, serde_json::Value> = doc
                .columns
                .iter()
                .zip(row)
                .map(|(c, v)| (c.name.to_string(), serde_json::Value::String(v.clone())))
                .collect();
            serde_json::Value::Object(obj)
        })
        .collect();
    let body = serde_json::json!({
        "artifact": ARTIFACT,
        "version": VERSION,
        "config": serde_json::from_str::<serde_json::Value>(&cfg.to_json()?)?,
        "columns": columns,
        "rows": rows,
    });
    Ok(format!("{}\n", serde_json::to_string_pretty(&body)?))
}
