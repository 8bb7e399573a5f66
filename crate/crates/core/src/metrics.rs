//! Confusion matrix at a whole-module cutoff, the usual threshold metrics,
//! and tie-aware ROC AUC.

use alloc::vec::Vec;

use crate::dataset::Dataset;
use crate::error::{Error, Result};
use crate::model::ScoreVector;
use crate::ranking::RankedList;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct ConfusionMatrix {
    pub tp: u64,
    pub fp: u64,
    pub tn: u64,
    pub fn_: u64,
}

impl ConfusionMatrix {
    /// Actual positives.
    pub fn ap(&self) -> u64 {
        self.tp + self.fn_
    }

    pub fn an(&self) -> u64 {
        self.tn + self.fp
    }

    /// Estimated positives.
    pub fn ep(&self) -> u64 {
        self.tp + self.fp
    }

    pub fn en(&self) -> u64 {
        self.tn + self.fn_
    }

    pub fn n(&self) -> u64 {
        self.tp + self.fp + self.tn + self.fn_
    }
}

/// The first `ep` modules of `order` are estimated positive.
pub fn confusion_at_cutoff(order: &RankedList, d: &Dataset, ep: usize) -> Result<ConfusionMatrix> {
    let n = d.len();
    if ep > n || order.len() != n {
        return Err(Error::CutoffOutOfRange { ep, n });
    }
    let records = d.records();
    let tp = order.order()[..ep].iter().filter(|&&i| records[i].defective).count() as u64;
    let ap = d.positives() as u64;
    let ep = ep as u64;
    let n = n as u64;
    Ok(ConfusionMatrix {
        tp,
        fp: ep - tp,
        fn_: ap - tp,
        tn: n - ep - (ap - tp),
    })
}

/// Threshold metrics. `None` marks a metric whose denominator is zero.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct ClassificationMetrics {
    pub tpr: Option<f64>,
    pub tnr: Option<f64>,
    pub fpr: Option<f64>,
    pub ppv: Option<f64>,
    pub acc: Option<f64>,
    pub ba: Option<f64>,
    pub gmean: Option<f64>,
    pub f1: Option<f64>,
    pub mcc: Option<f64>,
}

impl ClassificationMetrics {
    pub const NAMES: [&'static str; 9] = ["TPR", "TNR", "FPR", "PPV", "Acc", "BA", "Gmean", "F1", "MCC"];

    /// `(name, value)` pairs in a fixed order.
    pub fn entries(&self) -> [(&'static str, Option<f64>); 9] {
        let v = [
            self.tpr, self.tnr, self.fpr, self.ppv, self.acc, self.ba, self.gmean, self.f1, self.mcc,
        ];
        let mut out = [("", None); 9];
        for (slot, (name, value)) in out.iter_mut().zip(Self::NAMES.iter().zip(v)) {
            *slot = (name, value);
        }
        out
    }
}

fn ratio(num: u64, den: u64) -> Option<f64> {
    (den > 0).then(|| num as f64 / den as f64)
}

pub fn classification_metrics(c: &ConfusionMatrix) -> ClassificationMetrics {
    let tpr = ratio(c.tp, c.ap());
    let tnr = ratio(c.tn, c.an());
    let ppv = ratio(c.tp, c.ep());
    let ba = tpr.zip(tnr).map(|(a, b)| (a + b) / 2.0);
    let gmean = tpr.zip(tnr).map(|(a, b)| libm::sqrt(a * b));
    let f1 = ppv
        .zip(tpr)
        .and_then(|(p, r)| (p + r > 0.0).then(|| 2.0 * p * r / (p + r)));
    let den = c.en() as f64 * c.ep() as f64 * c.an() as f64 * c.ap() as f64;
    let mcc = (den > 0.0).then(|| {
        let num = c.tp as f64 * c.tn as f64 - c.fp as f64 * c.fn_ as f64;
        (num / libm::sqrt(den)).clamp(-1.0, 1.0)
    });
    ClassificationMetrics {
        tpr,
        tnr,
        fpr: ratio(c.fp, c.an()),
        ppv,
        acc: ratio(c.tp + c.tn, c.n()),
        ba,
        gmean,
        f1,
        mcc,
    }
}

/// Mann-Whitney AUC: the probability that a random defective module scores
/// above a random clean one, ties counting one half.
pub fn roc_auc(s: &ScoreVector, d: &Dataset) -> Result<f64> {
    if s.len() != d.len() {
        return Err(Error::DimensionMismatch {
            expected: d.len(),
            found: s.len(),
        });
    }
    let pos = d.positives();
    let neg = d.negatives();
    if pos == 0 || neg == 0 {
        return Err(Error::SingleClass);
    }
    let scores = s.scores();
    if let Some(i) = scores.iter().position(|v| v.is_nan()) {
        return Err(Error::NanScore {
            id: alloc::string::ToString::to_string(d.id(i)),
        });
    }
    let mut idx: Vec<usize> = (0..scores.len()).collect();
    idx.sort_by(|&a, &b| scores[a].total_cmp(&scores[b]));
    let labels = d.labels();
    let mut rank_sum = 0.0;
    let mut start = 0;
    while start < idx.len() {
        let mut end = start + 1;
        while end < idx.len() && scores[idx[end]] == scores[idx[start]] {
            end += 1;
        }
        // ranks start..end (1-based: start+1 ..= end) share their average
        let avg = (start + 1 + end) as f64 / 2.0;
        let positives = idx[start..end].iter().filter(|&&i| labels[i]).count();
        rank_sum += avg * positives as f64;
        start = end;
    }
    let (p, n) = (pos as f64, neg as f64);
    Ok((rank_sum - p * (p + 1.0) / 2.0) / (p * n))
}
