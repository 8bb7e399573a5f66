//! Loading defect datasets from CSV or ARFF files.
//!
//! Every column that is not the label, count, id or an ignored column is a
//! measure. Rows with a missing, unparseable, negative or non-finite cell are
//! dropped one by one and reported; the rest of the file is kept.

use std::collections::BTreeMap;
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use eam_core::{Dataset, ModuleRecord};
use serde::Deserialize;

use crate::error::{EvalError, Result};

pub const DEFAULT_LABEL: &str = "Defective";

/// Column roles given on the command line. Unset fields fall back to the
/// sidecar schema file, then to the defaults.
#[derive(Debug, Clone, Default)]
pub struct LoadOptions {
    pub label_col: Option<String>,
    pub count_col: Option<String>,
    pub id_col: Option<String>,
    /// Explicit sidecar; otherwise `<stem>.schema.json` next to the data is
    /// used when present.
    pub schema: Option<PathBuf>,
}

/// Contents of a `*.schema.json` sidecar.
#[derive(Debug, Clone, Default, Deserialize, PartialEq)]
#[serde(deny_unknown_fields)]
pub struct SchemaFile {
    pub label: Option<String>,
    pub count: Option<String>,
    pub id: Option<String>,
    #[serde(default)]
    pub ignore: Vec<String>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct RejectedRow {
    /// 1-based line in the source file.
    pub line: usize,
    pub reason: String,
}

#[derive(Debug, Clone)]
pub struct Loaded {
    pub dataset: Dataset,
    pub rejected: Vec<RejectedRow>,
    pub ignored: Vec<String>,
}

/// Header plus raw rows tagged with their source line.
struct Table {
    header: Vec<String>,
    rows: Vec<(usize, Vec<String>)>,
}

pub fn load_dataset(path: &Path, opts: &LoadOptions) -> Result<Loaded> {
    let table = if is_arff(path) {
        let text = fs::read_to_string(path).map_err(|e| EvalError::io(path, e))?;
        parse_arff(path, &text)?
    } else {
        read_csv_table(path)?
    };
    let sidecar = match &opts.schema {
        Some(p) => read_schema(p)?,
        None => {
            let p = path.with_extension("schema.json");
            if p.is_file() {
                read_schema(&p)?
            } else {
                SchemaFile::default()
            }
        }
    };
    build(path, table, opts, &sidecar)
}

fn is_arff(path: &Path) -> bool {
    path.extension()
        .and_then(|e| e.to_str())
        .is_some_and(|e| e.eq_ignore_ascii_case("arff"))
}

pub fn read_schema(path: &Path) -> Result<SchemaFile> {
    let text = fs::read_to_string(path).map_err(|e| EvalError::io(path, e))?;
    serde_json::from_str(&text).map_err(|source| EvalError::Schema {
        path: path.to_path_buf(),
        source,
    })
}

fn read_csv_table(path: &Path) -> Result<Table> {
    let csv_err = |source| EvalError::Csv {
        path: path.to_path_buf(),
        source,
    };
    let mut rdr = csv::ReaderBuilder::new()
        .flexible(true)
        .trim(csv::Trim::All)
        .from_path(path)
        .map_err(|e| match e.into_kind() {
            csv::ErrorKind::Io(io) => EvalError::io(path, io),
            kind => EvalError::Usage(format!("{}: {kind:?}", path.display())),
        })?;
    let header: Vec<String> = rdr.headers().map_err(csv_err)?.iter().map(str::to_string).collect();
    let mut rows = Vec::new();
    for rec in rdr.records() {
        let rec = rec.map_err(csv_err)?;
        let line = rec.position().map_or(0, |p| p.line() as usize);
        rows.push((line, rec.iter().map(str::to_string).collect()));
    }
    Ok(Table { header, rows })
}

fn unquote(s: &str) -> &str {
    let s = s.trim();
    for q in ['\'', '"'] {
        if s.len() >= 2 && s.starts_with(q) && s.ends_with(q) {
            return &s[1..s.len() - 1];
        }
    }
    s
}

/// Minimal dense ARFF: `@attribute` names and `@data` rows. Types are not
/// checked here; cells are validated like CSV cells.
fn parse_arff(path: &Path, text: &str) -> Result<Table> {
    let err = |line, message: &str| EvalError::Parse {
        path: path.to_path_buf(),
        line,
        message: message.to_string(),
    };
    let mut header = Vec::new();
    let mut rows = Vec::new();
    let mut in_data = false;
    for (i, raw) in text.lines().enumerate() {
        let line = i + 1;
        let s = raw.trim();
        if s.is_empty() || s.starts_with('%') {
            continue;
        }
        if in_data {
            if s.starts_with('{') {
                return Err(err(line, "sparse ARFF rows are not supported"));
            }
            rows.push((line, s.split(',').map(|c| unquote(c).to_string()).collect()));
            continue;
        }
        let lower = s.to_ascii_lowercase();
        if lower.starts_with("@attribute") {
            let rest = s["@attribute".len()..].trim_start();
            let name = if let Some(q) = rest.chars().next().filter(|c| *c == '\'' || *c == '"') {
                let end = rest[1..].find(q).ok_or_else(|| err(line, "unterminated attribute name"))?;
                &rest[1..=end]
            } else {
                rest.split_whitespace().next().ok_or_else(|| err(line, "attribute without a name"))?
            };
            header.push(name.to_string());
        } else if lower.starts_with("@data") {
            in_data = true;
        } else if !lower.starts_with("@relation") {
            return Err(err(line, "expected @relation, @attribute or @data"));
        }
    }
    if !in_data {
        return Err(err(text.lines().count(), "no @data section"));
    }
    Ok(Table { header, rows })
}

pub fn parse_label(s: &str) -> Option<bool> {
    match s.to_ascii_lowercase().as_str() {
        "y" | "yes" | "true" | "1" => Some(true),
        "n" | "no" | "false" | "0" => Some(false),
        _ => None,
    }
}

fn parse_measure(s: &str) -> std::result::Result<f64, String> {
    if s.is_empty() || s == "?" {
        return Err("missing value".into());
    }
    let v: f64 = s.parse().map_err(|_| format!("`{s}` is not a number"))?;
    if !v.is_finite() {
        return Err(format!("`{s}` is not finite"));
    }
    if v < 0.0 {
        return Err(format!("negative value {s}"));
    }
    Ok(v)
}

fn parse_count(s: &str) -> std::result::Result<u32, String> {
    let v = parse_measure(s)?;
    if v.fract() != 0.0 || v > f64::from(u32::MAX) {
        return Err(format!("defect count `{s}` is not a whole number"));
    }
    Ok(v as u32)
}

fn build(path: &Path, table: Table, opts: &LoadOptions, sidecar: &SchemaFile) -> Result<Loaded> {
    let find = |name: &str| -> Result<usize> {
        table
            .header
            .iter()
            .position(|h| h == name)
            .ok_or_else(|| EvalError::MissingColumn {
                path: path.to_path_buf(),
                column: name.to_string(),
                available: table.header.join(", "),
            })
    };
    let count_name = opts.count_col.clone().or_else(|| sidecar.count.clone());
    let count_col = count_name.as_deref().map(find).transpose()?;
    let label_name = opts
        .label_col
        .clone()
        .or_else(|| sidecar.label.clone())
        .unwrap_or_else(|| DEFAULT_LABEL.to_string());
    // with only a count column the label is derived from it
    let label_col = match find(&label_name) {
        Ok(i) => Some(i),
        Err(_) if count_col.is_some() && opts.label_col.is_none() && sidecar.label.is_none() => None,
        Err(e) => return Err(e),
    };
    let id_col = opts.id_col.clone().or_else(|| sidecar.id.clone()).as_deref().map(find).transpose()?;
    let mut ignored = Vec::new();
    for name in &sidecar.ignore {
        find(name)?;
        ignored.push(name.clone());
    }

    let roles = [label_col, count_col, id_col];
    let measure_cols: Vec<usize> = (0..table.header.len())
        .filter(|i| !roles.contains(&Some(*i)) && !ignored.contains(&table.header[*i]))
        .collect();
    for &c in &measure_cols {
        let numeric = table
            .rows
            .iter()
            .any(|(_, r)| r.get(c).is_some_and(|v| v.parse::<f64>().is_ok()));
        if !numeric && !table.rows.is_empty() {
            return Err(EvalError::NonNumericColumn {
                path: path.to_path_buf(),
                column: table.header[c].clone(),
            });
        }
    }
    let schema: Vec<String> = measure_cols.iter().map(|&c| table.header[c].clone()).collect();

    let mut records = Vec::with_capacity(table.rows.len());
    let mut rejected = Vec::new();
    for (row_no, (line, cells)) in table.rows.iter().enumerate() {
        match row_record(&table.header, cells, row_no, &measure_cols, label_col, count_col, id_col) {
            Ok(r) => records.push(r),
            Err(reason) => rejected.push(RejectedRow { line: *line, reason }),
        }
    }
    if records.is_empty() {
        return Err(EvalError::NoRows {
            path: path.to_path_buf(),
            rejected: rejected.len(),
        });
    }
    let dataset = Dataset::new(schema, records)?;
    Ok(Loaded {
        dataset,
        rejected,
        ignored,
    })
}

fn row_record(
    header: &[String],
    cells: &[String],
    row_no: usize,
    measure_cols: &[usize],
    label_col: Option<usize>,
    count_col: Option<usize>,
    id_col: Option<usize>,
) -> std::result::Result<ModuleRecord, String> {
    if cells.len() != header.len() {
        return Err(format!("expected {} fields, found {}", header.len(), cells.len()));
    }
    let mut measures = BTreeMap::new();
    for &c in measure_cols {
        let v = parse_measure(&cells[c]).map_err(|e| format!("column {}: {e}", header[c]))?;
        measures.insert(header[c].clone(), v);
    }
    let count = count_col
        .map(|c| parse_count(&cells[c]).map_err(|e| format!("column {}: {e}", header[c])))
        .transpose()?;
    let defective = match label_col {
        Some(c) => parse_label(&cells[c]).ok_or_else(|| format!("column {}: unrecognized label `{}`", header[c], cells[c]))?,
        None => count.is_some_and(|n| n > 0),
    };
    let id = match id_col {
        Some(c) if !cells[c].is_empty() => cells[c].clone(),
        Some(c) => return Err(format!("column {}: empty id", header[c])),
        None => (row_no + 1).to_string(),
    };
    ModuleRecord::new(id, measures, defective, count).map_err(|e| e.to_string())
}

/// Writes `id`, the measures, `Defective` (Y/N) and, when present,
/// `Defects`. Floats use the shortest representation that reads back
/// exactly, so loading the file again reproduces `d`.
pub fn write_dataset_csv<W: Write>(d: &Dataset, out: W) -> Result<(), csv::Error> {
    let mut w = csv::Writer::from_writer(out);
    let counts = d.defect_counts();
    let mut header = vec!["id".to_string()];
    header.extend(d.schema().iter().cloned());
    header.push(DEFAULT_LABEL.to_string());
    if counts.is_some() {
        header.push("Defects".to_string());
    }
    w.write_record(&header)?;
    for (i, r) in d.records().iter().enumerate() {
        let mut row = vec![r.id.clone()];
        row.extend(d.schema().iter().map(|m| r.measures[m].to_string()));
        row.push(if r.defective { "Y" } else { "N" }.to_string());
        if let Some(c) = &counts {
            row.push(c[i].to_string());
        }
        w.write_record(&row)?;
    }
    w.flush()?;
    Ok(())
}

/// Options that reload a file written by [`write_dataset_csv`].
pub fn roundtrip_options(d: &Dataset) -> LoadOptions {
    LoadOptions {
        label_col: Some(DEFAULT_LABEL.to_string()),
        count_col: d.defect_counts().map(|_| "Defects".to_string()),
        id_col: Some("id".to_string()),
        schema: None,
    }
}
