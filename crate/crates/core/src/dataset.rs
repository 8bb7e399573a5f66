//! Module records and validated datasets.

use alloc::collections::BTreeMap;
use alloc::format;
use alloc::string::{String, ToString};
use alloc::vec::Vec;

use crate::error::{Error, Result};

/// One software module: named code measures plus its defectiveness label.
#[derive(Debug, Clone, PartialEq)]
pub struct ModuleRecord {
    pub id: String,
    pub measures: BTreeMap<String, f64>,
    pub defective: bool,
    pub defect_count: Option<u32>,
}

impl ModuleRecord {
    pub fn new(
        id: impl Into<String>,
        measures: BTreeMap<String, f64>,
        defective: bool,
        defect_count: Option<u32>,
    ) -> Result<Self> {
        let record = ModuleRecord {
            id: id.into(),
            measures,
            defective,
            defect_count,
        };
        record.validate()?;
        Ok(record)
    }

    /// Convenience constructor from `(name, value)` pairs.
    pub fn from_pairs<'a>(
        id: impl Into<String>,
        pairs: impl IntoIterator<Item = (&'a str, f64)>,
        defective: bool,
    ) -> Result<Self> {
        let measures = pairs
            .into_iter()
            .map(|(k, v)| (k.to_string(), v))
            .collect();
        Self::new(id, measures, defective, None)
    }

    pub fn measure(&self, name: &str) -> Option<f64> {
        self.measures.get(name).copied()
    }

    fn validate(&self) -> Result<()> {
        for (name, &value) in &self.measures {
            if !value.is_finite() || value < 0.0 {
                return Err(Error::InvalidMeasure {
                    id: self.id.clone(),
                    measure: name.clone(),
                    value,
                });
            }
        }
        if let Some(count) = self.defect_count {
            if (count > 0) != self.defective {
                return Err(Error::CountLabelMismatch {
                    id: self.id.clone(),
                    count,
                    defective: self.defective,
                });
            }
        }
        Ok(())
    }
}

/// An ordered, validated collection of module records sharing one schema.
///
/// Record order is significant: it is the last tie-breaking key in every
/// ranking. A dataset is immutable once built.
#[derive(Debug, Clone, PartialEq)]
pub struct Dataset {
    schema: Vec<String>,
    records: Vec<ModuleRecord>,
    positives: usize,
}

impl Dataset {
    pub fn new(schema: Vec<String>, records: Vec<ModuleRecord>) -> Result<Self> {
        if records.is_empty() {
            return Err(Error::EmptyDataset);
        }
        for (i, name) in schema.iter().enumerate() {
            if schema[..i].contains(name) {
                return Err(Error::DuplicateMeasure(name.clone()));
            }
        }
        for record in &records {
            record.validate()?;
            if record.measures.len() != schema.len()
                || !schema.iter().all(|m| record.measures.contains_key(m))
            {
                let extra: Vec<&str> = record
                    .measures
                    .keys()
                    .filter(|k| !schema.contains(k))
                    .map(String::as_str)
                    .collect();
                let missing: Vec<&str> = schema
                    .iter()
                    .filter(|m| !record.measures.contains_key(*m))
                    .map(String::as_str)
                    .collect();
                return Err(Error::SchemaMismatch {
                    id: record.id.clone(),
                    detail: format!("missing [{}], extra [{}]", missing.join(","), extra.join(",")),
                });
            }
        }
        let positives = records.iter().filter(|r| r.defective).count();
        Ok(Dataset {
            schema,
            records,
            positives,
        })
    }

    pub fn schema(&self) -> &[String] {
        &self.schema
    }

    pub fn records(&self) -> &[ModuleRecord] {
        &self.records
    }

    /// Number of modules, `n`.
    pub fn len(&self) -> usize {
        self.records.len()
    }

    /// Always false: a dataset holds at least one module.
    pub fn is_empty(&self) -> bool {
        self.records.is_empty()
    }

    /// Actually positive (defective) modules, `AP`.
    pub fn positives(&self) -> usize {
        self.positives
    }

    /// Actually negative modules, `AN`.
    pub fn negatives(&self) -> usize {
        self.records.len() - self.positives
    }

    /// `AP / n`.
    pub fn prevalence(&self) -> f64 {
        self.positives as f64 / self.records.len() as f64
    }

    pub fn labels(&self) -> Vec<bool> {
        self.records.iter().map(|r| r.defective).collect()
    }

    pub fn id(&self, index: usize) -> &str {
        &self.records[index].id
    }

    pub fn has_measure(&self, name: &str) -> bool {
        self.schema.iter().any(|m| m == name)
    }

    /// Values of one measure in record order.
    pub fn measure_vector(&self, name: &str) -> Result<Vec<f64>> {
        if !self.has_measure(name) {
            return Err(self.unknown_measure(name));
        }
        Ok(self.records.iter().map(|r| r.measures[name]).collect())
    }

    pub(crate) fn unknown_measure(&self, name: &str) -> Error {
        Error::UnknownMeasure {
            name: name.to_string(),
            available: self.schema.join(", "),
        }
    }

    /// Defect counts for every module, or `None` if any module lacks one.
    pub fn defect_counts(&self) -> Option<Vec<u32>> {
        self.records.iter().map(|r| r.defect_count).collect()
    }

    /// Returns a copy of the dataset with an extra measure appended to the
    /// schema. Values must be aligned with record order.
    pub fn with_measure(&self, name: &str, values: &[f64]) -> Result<Dataset> {
        if values.len() != self.records.len() {
            return Err(Error::DimensionMismatch {
                expected: self.records.len(),
                found: values.len(),
            });
        }
        if self.has_measure(name) {
            return Err(Error::DuplicateMeasure(name.to_string()));
        }
        let mut schema = self.schema.clone();
        schema.push(name.to_string());
        let records = self
            .records
            .iter()
            .zip(values)
            .map(|(r, &v)| {
                let mut r = r.clone();
                r.measures.insert(name.to_string(), v);
                r
            })
            .collect();
        Dataset::new(schema, records)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec;

    fn loc_dataset(values: &[f64], labels: &[bool]) -> Dataset {
        let records = values
            .iter()
            .zip(labels)
            .enumerate()
            .map(|(i, (&v, &l))| ModuleRecord::from_pairs(format!("m{i}"), [("LOC", v)], l).unwrap())
            .collect();
        Dataset::new(vec!["LOC".into()], records).unwrap()
    }

    #[test]
    fn prevalence_endpoints_and_quarter() {
        assert_eq!(loc_dataset(&[1.0, 2.0], &[false, false]).prevalence(), 0.0);
        assert_eq!(loc_dataset(&[1.0, 2.0], &[true, true]).prevalence(), 1.0);
        let d = loc_dataset(&[1.0, 2.0, 3.0, 4.0], &[false, true, false, false]);
        assert_eq!(d.prevalence(), 0.25);
        assert_eq!(d.positives() + d.negatives(), d.len());
    }

    #[test]
    fn measure_vector_in_order() {
        let d = loc_dataset(&[10.0, 20.0], &[true, false]);
        assert_eq!(d.measure_vector("LOC").unwrap(), vec![10.0, 20.0]);
        let c = loc_dataset(&[3.0, 3.0, 3.0], &[true, false, true]);
        assert_eq!(c.measure_vector("LOC").unwrap(), vec![3.0; 3]);
    }

    #[test]
    fn unknown_measure_lists_available() {
        let d = loc_dataset(&[10.0, 20.0], &[true, false]);
        match d.measure_vector("XYZ") {
            Err(Error::UnknownMeasure { name, available }) => {
                assert_eq!(name, "XYZ");
                assert!(available.contains("LOC"));
            }
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn rejects_invalid_records() {
        assert!(matches!(
            ModuleRecord::from_pairs("a", [("LOC", -1.0)], false),
            Err(Error::InvalidMeasure { .. })
        ));
        assert!(matches!(
            ModuleRecord::from_pairs("a", [("LOC", f64::NAN)], false),
            Err(Error::InvalidMeasure { .. })
        ));
        let mut m = BTreeMap::new();
        m.insert("LOC".to_string(), 1.0);
        assert!(matches!(
            ModuleRecord::new("a", m.clone(), false, Some(2)),
            Err(Error::CountLabelMismatch { .. })
        ));
        assert!(ModuleRecord::new("a", m, true, Some(2)).is_ok());
        assert_eq!(Dataset::new(vec!["LOC".into()], vec![]), Err(Error::EmptyDataset));
    }

    #[test]
    fn schema_must_match_records() {
        let r = ModuleRecord::from_pairs("a", [("LOC", 1.0)], false).unwrap();
        assert!(matches!(
            Dataset::new(vec!["LOC".into(), "McCC".into()], vec![r.clone()]),
            Err(Error::SchemaMismatch { .. })
        ));
        assert!(matches!(
            Dataset::new(vec!["LOC".into(), "LOC".into()], vec![r]),
            Err(Error::DuplicateMeasure(_))
        ));
    }

    #[test]
    fn with_measure_appends_column() {
        let d = loc_dataset(&[10.0, 20.0], &[true, false]);
        let e = d.with_measure("half", &[5.0, 10.0]).unwrap();
        assert_eq!(e.schema(), &["LOC".to_string(), "half".to_string()]);
        assert_eq!(e.measure_vector("half").unwrap(), vec![5.0, 10.0]);
        assert!(d.with_measure("LOC", &[1.0, 1.0]).is_err());
        assert!(d.with_measure("x", &[1.0]).is_err());
    }
}
