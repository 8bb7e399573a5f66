//! External score files: `id,score` pairs matched by module id, or a single
//! column taken in dataset order. A non-numeric first row is a header.

use std::path::Path;

use eam_core::{Dataset, ScoreKind, ScoreVector};

use crate::error::{EvalError, Result};

pub fn import_scores(path: &Path, d: &Dataset, kind: ScoreKind) -> Result<ScoreVector> {
    let mut rdr = csv::ReaderBuilder::new()
        .has_headers(false)
        .flexible(true)
        .trim(csv::Trim::All)
        .from_path(path)
        .map_err(|e| match e.into_kind() {
            csv::ErrorKind::Io(io) => EvalError::io(path, io),
            kind => EvalError::Usage(format!("{}: {kind:?}", path.display())),
        })?;
    let parse_err = |line, message: String| EvalError::Parse {
        path: path.to_path_buf(),
        line,
        message,
    };
    let mut rows = Vec::new();
    for rec in rdr.records() {
        let rec = rec.map_err(|source| EvalError::Csv {
            path: path.to_path_buf(),
            source,
        })?;
        let line = rec.position().map_or(0, |p| p.line() as usize);
        rows.push((line, rec.iter().map(str::to_string).collect::<Vec<_>>()));
    }
    let Some((_, first)) = rows.first() else {
        return Err(parse_err(1, "empty score file".into()));
    };
    let width = first.len();
    if !(1..=2).contains(&width) {
        return Err(parse_err(1, format!("expected 1 or 2 columns, found {width}")));
    }
    if first.last().is_some_and(|v| v.parse::<f64>().is_err()) {
        rows.remove(0);
    }
    let mut ids = Vec::with_capacity(rows.len());
    let mut values = Vec::with_capacity(rows.len());
    for (line, cells) in &rows {
        if cells.len() != width {
            return Err(parse_err(*line, format!("expected {width} fields, found {}", cells.len())));
        }
        let raw = &cells[width - 1];
        let v: f64 = raw
            .parse()
            .map_err(|_| parse_err(*line, format!("`{raw}` is not a number")))?;
        values.push(v);
        if width == 2 {
            ids.push(cells[0].clone());
        }
    }
    if width == 2 {
        let pairs: Vec<(String, f64)> = ids.into_iter().zip(values).collect();
        Ok(ScoreVector::align_by_id(d, &pairs, kind)?)
    } else {
        Ok(ScoreVector::for_dataset(d, values, kind)?)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use eam_core::fixtures::toy_dataset;

    fn import(body: &str) -> Result<ScoreVector> {
        let dir = tempfile::tempdir().unwrap();
        let p = dir.path().join("s.csv");
        std::fs::write(&p, body).unwrap();
        import_scores(&p, &toy_dataset(), ScoreKind::Probability)
    }

    #[test]
    fn pairs_are_matched_by_id() {
        let s = import("id,score\nE,0.3\nA,0.9\nC,0.6\nB,0.8\nD,0.4\n").unwrap();
        assert_eq!(s.scores(), [0.9, 0.8, 0.6, 0.4, 0.3]);
    }

    #[test]
    fn single_column_in_order() {
        let s = import("0.9\n0.8\n0.6\n0.4\n0.3\n").unwrap();
        assert_eq!(s.scores()[4], 0.3);
        assert!(import("0.9\n0.8\n").is_err());
    }

    #[test]
    fn unknown_ids_and_bad_values_are_errors() {
        assert!(matches!(
            import("A,0.9\nB,0.8\nC,0.6\nD,0.4\nZ,0.3\n"),
            Err(EvalError::Core(eam_core::Error::UnmatchedIds { .. }))
        ));
        let e = import("A,0.9\nB,zero\n").unwrap_err();
        assert!(e.to_string().contains("line 2"));
    }
}
