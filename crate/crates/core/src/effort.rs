//! Effort drivers and the translation of an effort budget into a number of
//! whole modules that can be analyzed.
//!
//! A driver maps each module to an analysis effort, `c_M * m_i` for a single
//! measure `M`, or `lambda * s_i + (1 - lambda) * q_i` for the composite of a
//! size measure `s` and a complexity measure `q`. Only effort *fractions*
//! of the whole system are ever used downstream, so the unit cost `c_M`
//! cancels out; it is carried so that the cancellation can be checked.

use alloc::string::{String, ToString};
use alloc::vec::Vec;
use core::fmt;
use core::str::FromStr;

use crate::dataset::{Dataset, ModuleRecord};
use crate::error::{Error, Result};
use crate::ranking::RankedList;

/// Slack allowed when comparing a cumulative effort fraction to a budget.
pub const BUDGET_TOLERANCE: f64 = 1e-12;

#[derive(Debug, Clone, PartialEq)]
pub enum DriverForm {
    Single(String),
    Composite {
        size: String,
        complexity: String,
        lambda: f64,
        /// Min-max normalize both measures over the dataset before mixing.
        normalize: bool,
    },
}

#[derive(Debug, Clone, PartialEq)]
pub struct EffortDriver {
    form: DriverForm,
    unit_cost: Option<f64>,
}

impl EffortDriver {
    pub fn single(measure: impl Into<String>) -> Self {
        EffortDriver {
            form: DriverForm::Single(measure.into()),
            unit_cost: None,
        }
    }

    pub fn composite(size: impl Into<String>, complexity: impl Into<String>, lambda: f64) -> Result<Self> {
        if !(0.0..=1.0).contains(&lambda) {
            return Err(Error::InvalidLambda(lambda));
        }
        Ok(EffortDriver {
            form: DriverForm::Composite {
                size: size.into(),
                complexity: complexity.into(),
                lambda,
                normalize: false,
            },
            unit_cost: None,
        })
    }

    pub fn with_unit_cost(mut self, cost: f64) -> Result<Self> {
        if !(cost.is_finite() && cost > 0.0) {
            return Err(Error::InvalidUnitCost(cost));
        }
        self.unit_cost = Some(cost);
        Ok(self)
    }

    /// Switches a composite driver to min-max normalized measures. No effect
    /// on single-measure drivers.
    pub fn normalized(mut self) -> Self {
        if let DriverForm::Composite { normalize, .. } = &mut self.form {
            *normalize = true;
        }
        self
    }

    pub fn form(&self) -> &DriverForm {
        &self.form
    }

    pub fn unit_cost(&self) -> f64 {
        self.unit_cost.unwrap_or(1.0)
    }

    /// Canonical textual form, as accepted by [`FromStr`].
    pub fn label(&self) -> String {
        self.to_string()
    }

    /// Per-module effort values over a dataset, in record order.
    pub fn values(&self, d: &Dataset) -> Result<Vec<f64>> {
        let c = self.unit_cost();
        match &self.form {
            DriverForm::Single(m) => Ok(d.measure_vector(m)?.into_iter().map(|v| c * v).collect()),
            DriverForm::Composite {
                size,
                complexity,
                lambda,
                normalize,
            } => {
                let mut s = d.measure_vector(size)?;
                let mut q = d.measure_vector(complexity)?;
                if *normalize {
                    min_max(&mut s);
                    min_max(&mut q);
                }
                Ok(s.iter()
                    .zip(&q)
                    .map(|(a, b)| c * (lambda * a + (1.0 - lambda) * b))
                    .collect())
            }
        }
    }
}

fn min_max(v: &mut [f64]) {
    let lo = v.iter().copied().fold(f64::INFINITY, f64::min);
    let hi = v.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let span = hi - lo;
    for x in v.iter_mut() {
        *x = if span > 0.0 { (*x - lo) / span } else { 0.0 };
    }
}

impl fmt::Display for EffortDriver {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.form {
            DriverForm::Single(m) => f.write_str(m)?,
            DriverForm::Composite {
                size,
                complexity,
                lambda,
                normalize,
            } => {
                let tag = if *normalize { "composite-minmax" } else { "composite" };
                write!(f, "{tag}:{size},{complexity},{lambda}")?;
            }
        }
        if let Some(c) = self.unit_cost {
            write!(f, "*{c}")?;
        }
        Ok(())
    }
}

/// Accepts `LOC`, `composite:LOC,McCC,0.2` and `composite-minmax:LOC,McCC,0.2`,
/// each optionally followed by `*<unit cost>`.
impl FromStr for EffortDriver {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let bad = || Error::ParseDriver(s.to_string());
        let (body, cost) = match s.rsplit_once('*') {
            Some((body, cost)) => (body.trim(), Some(cost.trim().parse::<f64>().map_err(|_| bad())?)),
            None => (s.trim(), None),
        };
        let driver = match body.split_once(':') {
            Some((tag @ ("composite" | "composite-minmax"), args)) => {
                let parts: Vec<&str> = args.split(',').map(str::trim).collect();
                let [size, complexity, lambda] = parts.as_slice() else {
                    return Err(bad());
                };
                if size.is_empty() || complexity.is_empty() {
                    return Err(bad());
                }
                let lambda: f64 = lambda.parse().map_err(|_| bad())?;
                let d = EffortDriver::composite(*size, *complexity, lambda)?;
                if tag == "composite-minmax" {
                    d.normalized()
                } else {
                    d
                }
            }
            Some(_) => return Err(bad()),
            None if !body.is_empty() && !body.contains(',') => EffortDriver::single(body),
            None => return Err(bad()),
        };
        match cost {
            Some(c) => driver.with_unit_cost(c),
            None => Ok(driver),
        }
    }
}

/// A fraction of the effort needed to analyze the whole system.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd)]
pub struct EffortBudget(f64);

impl EffortBudget {
    pub fn new(fraction: f64) -> Result<Self> {
        if (0.0..=1.0).contains(&fraction) {
            Ok(EffortBudget(fraction))
        } else {
            Err(Error::InvalidBudget(fraction))
        }
    }

    pub fn fraction(self) -> f64 {
        self.0
    }
}

/// Effort of one module under a driver. Composite drivers that normalize
/// over the dataset cannot be evaluated on a lone record.
pub fn module_effort(drv: &EffortDriver, r: &ModuleRecord) -> Result<f64> {
    let get = |m: &str| {
        r.measure(m).ok_or_else(|| Error::UnknownMeasure {
            name: m.to_string(),
            available: r.measures.keys().cloned().collect::<Vec<_>>().join(", "),
        })
    };
    let c = drv.unit_cost();
    match &drv.form {
        DriverForm::Single(m) => Ok(c * get(m)?),
        DriverForm::Composite { normalize: true, .. } => Err(Error::DatasetLevelDriver(drv.label())),
        DriverForm::Composite {
            size,
            complexity,
            lambda,
            ..
        } => Ok(c * (lambda * get(size)? + (1.0 - lambda) * get(complexity)?)),
    }
}

/// Entry `k` is the share of total effort consumed by the first `k + 1`
/// modules of `order`. The last entry is exactly 1.
pub fn cumulative_effort_fractions(drv: &EffortDriver, order: &RankedList, d: &Dataset) -> Result<Vec<f64>> {
    let values = drv.values(d)?;
    fractions_along(&values, order.order(), &drv.label())
}

pub(crate) fn fractions_along(values: &[f64], order: &[usize], label: &str) -> Result<Vec<f64>> {
    let mut prefix = Vec::with_capacity(order.len());
    let mut acc = 0.0;
    for &i in order {
        acc += values[i];
        prefix.push(acc);
    }
    if acc.is_nan() || acc <= 0.0 {
        return Err(Error::DegenerateDriver(label.to_string()));
    }
    let total = acc;
    let mut fractions: Vec<f64> = prefix.into_iter().map(|p| p / total).collect();
    if let Some(last) = fractions.last_mut() {
        *last = 1.0;
    }
    Ok(fractions)
}

/// Largest number of leading modules whose cumulative effort fraction stays
/// within the budget. `fractions` must be non-decreasing.
pub fn cutoff_for_fractions(fractions: &[f64], b: EffortBudget) -> usize {
    let limit = b.fraction() + BUDGET_TOLERANCE;
    fractions.partition_point(|&f| f <= limit)
}

/// `EP`: how many of the top-ranked modules the budget allows to analyze.
pub fn budget_to_cutoff(drv: &EffortDriver, order: &RankedList, d: &Dataset, b: EffortBudget) -> Result<usize> {
    Ok(cutoff_for_fractions(&cumulative_effort_fractions(drv, order, d)?, b))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures::toy_dataset;
    use crate::ranking::RankedList;
    use alloc::vec;

    fn identity(n: usize) -> RankedList {
        RankedList::from_permutation((0..n).collect()).unwrap()
    }

    #[test]
    fn single_and_composite_effort() {
        let r = ModuleRecord::from_pairs("a", [("LOC", 10.0), ("McCC", 5.0)], true).unwrap();
        assert_eq!(module_effort(&EffortDriver::single("LOC"), &r).unwrap(), 10.0);
        let c = EffortDriver::composite("LOC", "McCC", 0.5).unwrap();
        assert_eq!(module_effort(&c, &r).unwrap(), 7.5);
        assert!(module_effort(&EffortDriver::single("HDIF"), &r).is_err());
        assert!(module_effort(&c.normalized(), &r).is_err());
    }

    #[test]
    fn composite_boundaries_match_single_drivers() {
        let d = toy_dataset();
        let loc = EffortDriver::single("LOC").values(&d).unwrap();
        let mcc = EffortDriver::single("McCC").values(&d).unwrap();
        assert_eq!(EffortDriver::composite("LOC", "McCC", 1.0).unwrap().values(&d).unwrap(), loc);
        assert_eq!(EffortDriver::composite("LOC", "McCC", 0.0).unwrap().values(&d).unwrap(), mcc);
        assert!(EffortDriver::composite("LOC", "McCC", 1.5).is_err());
    }

    #[test]
    fn toy_fractions_and_cancellation() {
        let d = toy_dataset();
        let order = identity(5);
        let loc = EffortDriver::single("LOC");
        let f = cumulative_effort_fractions(&loc, &order, &d).unwrap();
        assert_eq!(f, vec![0.05, 0.15, 0.30, 0.50, 1.00]);
        let scaled = loc.clone().with_unit_cost(10.0).unwrap();
        assert_eq!(cumulative_effort_fractions(&scaled, &order, &d).unwrap(), f);
    }

    #[test]
    fn proportional_driver_gives_same_fractions() {
        let d = toy_dataset();
        let doubled: Vec<f64> = d.measure_vector("LOC").unwrap().iter().map(|v| 2.0 * v).collect();
        let d = d.with_measure("LOC2", &doubled).unwrap();
        let order = identity(5);
        assert_eq!(
            cumulative_effort_fractions(&EffortDriver::single("LOC"), &order, &d).unwrap(),
            cumulative_effort_fractions(&EffortDriver::single("LOC2"), &order, &d).unwrap()
        );
    }

    #[test]
    fn cutoffs_on_toy() {
        let f = [0.05, 0.15, 0.30, 0.50, 1.00];
        assert_eq!(cutoff_for_fractions(&f, EffortBudget::new(0.5).unwrap()), 4);
        assert_eq!(cutoff_for_fractions(&f, EffortBudget::new(0.0).unwrap()), 0);
        assert_eq!(cutoff_for_fractions(&f, EffortBudget::new(1.0).unwrap()), 5);
        let d = toy_dataset();
        let order = identity(5);
        let half = EffortBudget::new(0.5).unwrap();
        assert_eq!(budget_to_cutoff(&EffortDriver::single("LOC"), &order, &d, half).unwrap(), 4);
        assert_eq!(budget_to_cutoff(&EffortDriver::single("McCC"), &order, &d, half).unwrap(), 2);
    }

    #[test]
    fn zero_total_is_degenerate() {
        let d = toy_dataset().with_measure("Z", &[0.0; 5]).unwrap();
        assert!(matches!(
            cumulative_effort_fractions(&EffortDriver::single("Z"), &identity(5), &d),
            Err(Error::DegenerateDriver(_))
        ));
    }

    #[test]
    fn budget_validation() {
        assert!(EffortBudget::new(-0.1).is_err());
        assert!(EffortBudget::new(1.1).is_err());
        assert!(EffortBudget::new(f64::NAN).is_err());
    }

    #[test]
    fn driver_syntax_round_trips() {
        for s in ["LOC", "composite:LOC,McCC,0.2", "composite-minmax:LOC,McCC,0.5", "McCC*10"] {
            let d: EffortDriver = s.parse().unwrap();
            assert_eq!(d.label(), s);
        }
        assert!("composite:LOC,McCC".parse::<EffortDriver>().is_err());
        assert!("composite:LOC,McCC,2".parse::<EffortDriver>().is_err());
        assert!("LOC*0".parse::<EffortDriver>().is_err());
        assert!("".parse::<EffortDriver>().is_err());
        assert!("other:LOC".parse::<EffortDriver>().is_err());
    }
}
