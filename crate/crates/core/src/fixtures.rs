//! The five-module toy instance used by the built-in self-test and by the
//! test suites: modules `A..E`, defective `A`, `C`, `E`.

use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;

use crate::dataset::{Dataset, ModuleRecord};
use crate::model::{ScoreKind, ScoreVector};

pub const TOY_LOC: [f64; 5] = [10.0, 20.0, 30.0, 40.0, 100.0];
pub const TOY_MCCC: [f64; 5] = [5.0, 1.0, 9.0, 2.0, 3.0];
pub const TOY_DEFECTIVE: [bool; 5] = [true, false, true, false, true];
pub const TOY_SCORES: [f64; 5] = [0.9, 0.8, 0.6, 0.4, 0.3];

pub fn toy_dataset() -> Dataset {
    let records: Vec<ModuleRecord> = ["A", "B", "C", "D", "E"]
        .iter()
        .enumerate()
        .map(|(i, id)| {
            ModuleRecord::from_pairs(*id, [("LOC", TOY_LOC[i]), ("McCC", TOY_MCCC[i])], TOY_DEFECTIVE[i])
                .expect("toy record is valid")
        })
        .collect();
    Dataset::new(vec![String::from("LOC"), String::from("McCC")], records).expect("toy dataset is valid")
}

pub fn toy_scores() -> ScoreVector {
    ScoreVector::for_dataset(&toy_dataset(), TOY_SCORES.to_vec(), ScoreKind::Probability)
        .expect("toy scores are valid")
}
