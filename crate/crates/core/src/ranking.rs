//! Module orderings: by score (PofB), by score density (NPofB) and the
//! optimal ordering that bounds every cost-efficiency curve from above.

use alloc::string::ToString;
use alloc::vec::Vec;
use core::cmp::Ordering;
use core::fmt;
use core::str::FromStr;

use crate::dataset::Dataset;
use crate::effort::EffortDriver;
use crate::error::{Error, Result};
use crate::model::ScoreVector;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub enum RankPolicy {
    Score,
    Density,
    Optimal,
    /// An ordering supplied from outside (tests, exhaustive search).
    Explicit,
}

impl RankPolicy {
    pub fn as_str(self) -> &'static str {
        match self {
            RankPolicy::Score => "score",
            RankPolicy::Density => "density",
            RankPolicy::Optimal => "optimal",
            RankPolicy::Explicit => "explicit",
        }
    }
}

impl fmt::Display for RankPolicy {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for RankPolicy {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim() {
            "score" => Ok(RankPolicy::Score),
            "density" => Ok(RankPolicy::Density),
            "optimal" => Ok(RankPolicy::Optimal),
            _ => Err(Error::ParseOption {
                what: "ranking policy",
                value: s.to_string(),
            }),
        }
    }
}

/// How modules with equal keys are ordered, by the active driver's value.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum TieBreak {
    /// Cheaper modules first.
    #[default]
    Ascending,
    /// Costlier modules first.
    Descending,
    /// Dataset order only.
    Input,
}

impl TieBreak {
    pub fn as_str(self) -> &'static str {
        match self {
            TieBreak::Ascending => "asc",
            TieBreak::Descending => "desc",
            TieBreak::Input => "input",
        }
    }
}

impl FromStr for TieBreak {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim() {
            "asc" => Ok(TieBreak::Ascending),
            "desc" => Ok(TieBreak::Descending),
            "input" => Ok(TieBreak::Input),
            _ => Err(Error::ParseOption {
                what: "tie-break rule",
                value: s.to_string(),
            }),
        }
    }
}

/// A permutation of module indices plus the key each module was ranked by.
#[derive(Debug, Clone, PartialEq)]
pub struct RankedList {
    order: Vec<usize>,
    policy: RankPolicy,
    key_values: Vec<f64>,
    flagged: Vec<usize>,
}

impl RankedList {
    pub fn from_permutation(order: Vec<usize>) -> Result<Self> {
        let n = order.len();
        let mut seen = alloc::vec![false; n];
        for &i in &order {
            if i >= n || seen[i] {
                return Err(Error::InvalidPermutation(n));
            }
            seen[i] = true;
        }
        let mut key_values = alloc::vec![0.0; n];
        for (pos, &i) in order.iter().enumerate() {
            key_values[i] = (n - pos) as f64;
        }
        Ok(RankedList {
            order,
            policy: RankPolicy::Explicit,
            key_values,
            flagged: Vec::new(),
        })
    }

    /// Module indices, best first.
    pub fn order(&self) -> &[usize] {
        &self.order
    }

    pub fn policy(&self) -> RankPolicy {
        self.policy
    }

    /// Ranking key per module, indexed by module (not by position).
    /// Modules flagged by the density ranking carry `-inf`.
    pub fn key_values(&self) -> &[f64] {
        &self.key_values
    }

    /// Modules placed last because their normalizing measure is zero.
    pub fn flagged(&self) -> &[usize] {
        &self.flagged
    }

    pub fn len(&self) -> usize {
        self.order.len()
    }

    pub fn is_empty(&self) -> bool {
        self.order.is_empty()
    }
}

fn check_tie_values(d: &Dataset, tie_values: &[f64]) -> Result<()> {
    if tie_values.len() != d.len() {
        return Err(Error::DimensionMismatch {
            expected: d.len(),
            found: tie_values.len(),
        });
    }
    Ok(())
}

fn tie_cmp(tie_values: &[f64], tie_break: TieBreak, a: usize, b: usize) -> Ordering {
    let by_value = match tie_break {
        TieBreak::Ascending => tie_values[a].total_cmp(&tie_values[b]),
        TieBreak::Descending => tie_values[b].total_cmp(&tie_values[a]),
        TieBreak::Input => Ordering::Equal,
    };
    by_value.then(a.cmp(&b))
}

/// Sorts `indices` by descending key, then by the tie rule, then by index.
fn sort_descending(indices: &mut [usize], keys: &[f64], tie_values: &[f64], tie_break: TieBreak) {
    indices.sort_by(|&a, &b| {
        keys[b]
            .partial_cmp(&keys[a])
            .unwrap_or(Ordering::Equal)
            .then_with(|| tie_cmp(tie_values, tie_break, a, b))
    });
}

fn check_scores(s: &ScoreVector, d: &Dataset) -> Result<()> {
    if s.len() != d.len() {
        return Err(Error::DimensionMismatch {
            expected: d.len(),
            found: s.len(),
        });
    }
    if let Some(i) = s.scores().iter().position(|v| v.is_nan()) {
        return Err(Error::NanScore {
            id: d.id(i).to_string(),
        });
    }
    Ok(())
}

/// Descending score. `tie_values` are the active driver's per-module values.
pub fn rank_by_score(s: &ScoreVector, d: &Dataset, tie_values: &[f64], tie_break: TieBreak) -> Result<RankedList> {
    check_scores(s, d)?;
    check_tie_values(d, tie_values)?;
    let keys = s.scores().to_vec();
    let mut order: Vec<usize> = (0..d.len()).collect();
    sort_descending(&mut order, &keys, tie_values, tie_break);
    Ok(RankedList {
        order,
        policy: RankPolicy::Score,
        key_values: keys,
        flagged: Vec::new(),
    })
}

/// Descending `score / norm_measure`. Modules whose normalizing measure is
/// zero are flagged and placed last, among themselves by descending score.
pub fn rank_by_density(
    s: &ScoreVector,
    d: &Dataset,
    norm_measure: &str,
    tie_values: &[f64],
    tie_break: TieBreak,
) -> Result<RankedList> {
    check_scores(s, d)?;
    check_tie_values(d, tie_values)?;
    let norm = d.measure_vector(norm_measure)?;
    let (mut ranked, mut flagged): (Vec<usize>, Vec<usize>) = (0..d.len()).partition(|&i| norm[i] > 0.0);
    let keys: Vec<f64> = s
        .scores()
        .iter()
        .zip(&norm)
        .map(|(&sc, &m)| if m > 0.0 { sc / m } else { f64::NEG_INFINITY })
        .collect();
    sort_descending(&mut ranked, &keys, tie_values, tie_break);
    sort_descending(&mut flagged, s.scores(), tie_values, tie_break);
    let flagged_sorted = flagged.clone();
    ranked.extend(flagged);
    Ok(RankedList {
        order: ranked,
        policy: RankPolicy::Density,
        key_values: keys,
        flagged: flagged_sorted,
    })
}

/// Defective modules first by ascending effort, then the rest by ascending
/// effort; equal efforts keep dataset order.
pub fn optimal_ranking(d: &Dataset, drv: &EffortDriver) -> Result<RankedList> {
    let values = drv.values(d)?;
    let labels = d.labels();
    let mut order: Vec<usize> = (0..d.len()).collect();
    order.sort_by(|&a, &b| {
        labels[b]
            .cmp(&labels[a])
            .then(values[a].total_cmp(&values[b]))
            .then(a.cmp(&b))
    });
    Ok(RankedList {
        order,
        policy: RankPolicy::Optimal,
        key_values: values,
        flagged: Vec::new(),
    })
}

/// Optimal ordering when the benefit is defects found: defective modules by
/// descending defects per unit of effort (zero-effort ones first), then the
/// rest by ascending effort. With one defect per defective module this is
/// the same order as [`optimal_ranking`].
pub fn optimal_ranking_by_defects(d: &Dataset, drv: &EffortDriver) -> Result<RankedList> {
    let counts = d.defect_counts().ok_or(Error::MissingDefectCounts)?;
    let values = drv.values(d)?;
    let density: Vec<f64> = counts
        .iter()
        .zip(&values)
        .map(|(&c, &v)| if c == 0 { 0.0 } else if v > 0.0 { c as f64 / v } else { f64::INFINITY })
        .collect();
    let mut order: Vec<usize> = (0..d.len()).collect();
    order.sort_by(|&a, &b| {
        (counts[b] > 0)
            .cmp(&(counts[a] > 0))
            .then(density[b].total_cmp(&density[a]))
            .then(values[a].total_cmp(&values[b]))
            .then(a.cmp(&b))
    });
    Ok(RankedList {
        order,
        policy: RankPolicy::Optimal,
        key_values: density,
        flagged: Vec::new(),
    })
}
