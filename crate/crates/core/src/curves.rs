//! Cost-efficiency curves (benefit against cumulative effort fraction along
//! a ranking), PofB@t and Popt.

use alloc::string::{String, ToString};
use alloc::vec::Vec;
use core::str::FromStr;

use crate::dataset::Dataset;
use crate::effort::{fractions_along, EffortBudget, EffortDriver, BUDGET_TOLERANCE};
use crate::error::{Error, Result};
use crate::ranking::{RankPolicy, RankedList};

/// What the y axis counts.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Benefit {
    /// Proportion of defective modules found.
    #[default]
    Modules,
    /// Proportion of defects found; needs per-module defect counts.
    Defects,
}

impl Benefit {
    pub fn as_str(self) -> &'static str {
        match self {
            Benefit::Modules => "modules",
            Benefit::Defects => "defects",
        }
    }
}

impl FromStr for Benefit {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim() {
            "modules" => Ok(Benefit::Modules),
            "defects" => Ok(Benefit::Defects),
            _ => Err(Error::ParseOption {
                what: "benefit mode",
                value: s.to_string(),
            }),
        }
    }
}

/// How a curve is read between its vertices when integrating.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Interpolation {
    /// Straight segments between consecutive module boundaries.
    #[default]
    Linear,
    /// Right-continuous steps: only whole modules count.
    Step,
}

impl Interpolation {
    pub fn as_str(self) -> &'static str {
        match self {
            Interpolation::Linear => "linear",
            Interpolation::Step => "step",
        }
    }
}

impl FromStr for Interpolation {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim() {
            "linear" => Ok(Interpolation::Linear),
            "step" => Ok(Interpolation::Step),
            _ => Err(Error::ParseOption {
                what: "interpolation",
                value: s.to_string(),
            }),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CurvePoint {
    pub effort: f64,
    pub benefit: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct CostEfficiencyCurve {
    points: Vec<CurvePoint>,
    driver: String,
    policy: RankPolicy,
    benefit: Benefit,
}

impl CostEfficiencyCurve {
    /// `(0, 0)` followed by one point per module boundary.
    pub fn points(&self) -> &[CurvePoint] {
        &self.points
    }

    pub fn driver(&self) -> &str {
        &self.driver
    }

    pub fn policy(&self) -> RankPolicy {
        self.policy
    }

    pub fn benefit(&self) -> Benefit {
        self.benefit
    }
}

/// Per-module gains and their total for a benefit mode.
pub(crate) fn gains(d: &Dataset, benefit: Benefit) -> Result<Vec<f64>> {
    match benefit {
        Benefit::Modules => Ok(d
            .records()
            .iter()
            .map(|r| if r.defective { 1.0 } else { 0.0 })
            .collect()),
        Benefit::Defects => Ok(d
            .defect_counts()
            .ok_or(Error::MissingDefectCounts)?
            .into_iter()
            .map(f64::from)
            .collect()),
    }
}

pub(crate) fn curve_from_values(
    order: &RankedList,
    values: &[f64],
    gains: &[f64],
    driver: &str,
    benefit: Benefit,
) -> Result<CostEfficiencyCurve> {
    let xs = fractions_along(values, order.order(), driver)?;
    let total: f64 = order.order().iter().map(|&i| gains[i]).sum();
    let mut points = Vec::with_capacity(xs.len() + 1);
    points.push(CurvePoint {
        effort: 0.0,
        benefit: 0.0,
    });
    let mut found = 0.0;
    for (&i, &x) in order.order().iter().zip(&xs) {
        found += gains[i];
        points.push(CurvePoint {
            effort: x,
            benefit: if total > 0.0 { found / total } else { 0.0 },
        });
    }
    if total > 0.0 {
        if let Some(last) = points.last_mut() {
            last.benefit = 1.0;
        }
    }
    Ok(CostEfficiencyCurve {
        points,
        driver: driver.to_string(),
        policy: order.policy(),
        benefit,
    })
}

/// Follows `order`, accumulating effort fractions on x and the share of
/// defective modules (or defects) found on y. With no defective module the
/// curve stays at y = 0.
pub fn cost_efficiency_curve(
    order: &RankedList,
    drv: &EffortDriver,
    d: &Dataset,
    benefit: Benefit,
) -> Result<CostEfficiencyCurve> {
    if order.len() != d.len() {
        return Err(Error::DimensionMismatch {
            expected: d.len(),
            found: order.len(),
        });
    }
    let values = drv.values(d)?;
    let gains = gains(d, benefit)?;
    curve_from_values(order, &values, &gains, &drv.label(), benefit)
}

/// Benefit reached when only whole modules within the budget are analyzed.
pub fn pofb_at(curve: &CostEfficiencyCurve, b: EffortBudget) -> f64 {
    let limit = b.fraction() + BUDGET_TOLERANCE;
    let k = curve.points.partition_point(|p| p.effort <= limit);
    // points[0] is (0, 0), so k >= 1.
    curve.points[k.max(1) - 1].benefit
}

/// `1 - area between the curves`. Both curves must share driver and benefit
/// mode; `optimal` is normally the curve of [`crate::optimal_ranking`].
pub fn popt(model: &CostEfficiencyCurve, optimal: &CostEfficiencyCurve, interp: Interpolation) -> Result<f64> {
    if model.driver != optimal.driver {
        return Err(Error::CurveMismatch(alloc::format!(
            "driver `{}` vs `{}`",
            model.driver, optimal.driver
        )));
    }
    if model.benefit != optimal.benefit {
        return Err(Error::CurveMismatch(alloc::format!(
            "benefit `{}` vs `{}`",
            model.benefit.as_str(),
            optimal.benefit.as_str()
        )));
    }
    Ok(1.0 - area_between(&model.points, &optimal.points, interp))
}

/// Value just right of `x` (the last vertex sitting at `x`, if any).
fn right_limit(pts: &[CurvePoint], x: f64) -> f64 {
    let j = pts.partition_point(|p| p.effort <= x);
    if j == 0 {
        return pts[0].benefit;
    }
    let a = pts[j - 1];
    if a.effort == x || j == pts.len() {
        return a.benefit;
    }
    lerp(a, pts[j], x)
}

/// Value just left of `x` (the first vertex sitting at `x`, if any).
fn left_limit(pts: &[CurvePoint], x: f64) -> f64 {
    let j = pts.partition_point(|p| p.effort < x);
    if j == pts.len() {
        return pts[j - 1].benefit;
    }
    let b = pts[j];
    if b.effort == x || j == 0 {
        return b.benefit;
    }
    lerp(pts[j - 1], b, x)
}

fn lerp(a: CurvePoint, b: CurvePoint, x: f64) -> f64 {
    a.benefit + (b.benefit - a.benefit) * (x - a.effort) / (b.effort - a.effort)
}

/// Unsigned area between two curves over their merged x-grid. Vertical
/// segments (zero-effort modules) contribute nothing.
pub fn area_between(a: &[CurvePoint], b: &[CurvePoint], interp: Interpolation) -> f64 {
    let mut grid: Vec<f64> = a.iter().chain(b).map(|p| p.effort).collect();
    grid.sort_by(f64::total_cmp);
    grid.dedup();
    let mut area = 0.0;
    for w in grid.windows(2) {
        let (x0, x1) = (w[0], w[1]);
        let width = x1 - x0;
        match interp {
            Interpolation::Step => {
                area += width * (right_limit_step(a, x0) - right_limit_step(b, x0)).abs();
            }
            Interpolation::Linear => {
                let d0 = right_limit(a, x0) - right_limit(b, x0);
                let d1 = left_limit(a, x1) - left_limit(b, x1);
                if d0 * d1 >= 0.0 {
                    area += width * (d0.abs() + d1.abs()) / 2.0;
                } else {
                    // the curves cross inside the interval
                    let t = d0 / (d0 - d1);
                    area += width * (t * d0.abs() + (1.0 - t) * d1.abs()) / 2.0;
                }
            }
        }
    }
    area
}

fn right_limit_step(pts: &[CurvePoint], x: f64) -> f64 {
    let j = pts.partition_point(|p| p.effort <= x);
    pts[j.max(1) - 1].benefit
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures::toy_dataset;
    use crate::ranking::optimal_ranking;

    fn identity() -> RankedList {
        RankedList::from_permutation((0..5).collect()).unwrap()
    }

    fn xy(c: &CostEfficiencyCurve) -> Vec<(f64, f64)> {
        c.points().iter().map(|p| (p.effort, p.benefit)).collect()
    }

    fn assert_points(c: &CostEfficiencyCurve, expected: &[(f64, f64)]) {
        let got = xy(c);
        assert_eq!(got.len(), expected.len());
        for ((gx, gy), (ex, ey)) in got.iter().zip(expected) {
            assert!((gx - ex).abs() < 1e-15 && (gy - ey).abs() < 1e-15, "{got:?} vs {expected:?}");
        }
    }

    #[test]
    fn toy_curves_differ_by_driver() {
        let d = toy_dataset();
        let loc = cost_efficiency_curve(&identity(), &EffortDriver::single("LOC"), &d, Benefit::Modules).unwrap();
        let third = 1.0 / 3.0;
        let two = 2.0 / 3.0;
        assert_points(&loc, &[(0.0, 0.0), (0.05, third), (0.15, third), (0.30, two), (0.50, two), (1.0, 1.0)]);
        let mcc = cost_efficiency_curve(&identity(), &EffortDriver::single("McCC"), &d, Benefit::Modules).unwrap();
        assert_points(&mcc, &[(0.0, 0.0), (0.25, third), (0.30, third), (0.75, two), (0.85, two), (1.0, 1.0)]);
    }

    #[test]
    fn toy_pofb() {
        let d = toy_dataset();
        let loc = cost_efficiency_curve(&identity(), &EffortDriver::single("LOC"), &d, Benefit::Modules).unwrap();
        let b = |f| EffortBudget::new(f).unwrap();
        assert!((pofb_at(&loc, b(0.5)) - 2.0 / 3.0).abs() < 1e-15);
        assert!((pofb_at(&loc, b(0.2)) - 1.0 / 3.0).abs() < 1e-15);
        assert_eq!(pofb_at(&loc, b(1.0)), 1.0);
        assert_eq!(pofb_at(&loc, b(0.0)), 0.0);
    }

    #[test]
    fn toy_popt_matches_exact_areas() {
        // Exact rational areas: LOC 1 - (4/5 - 2/3) = 13/15, McCC 4/5.
        let d = toy_dataset();
        for (driver, expected) in [("LOC", 13.0 / 15.0), ("McCC", 0.8)] {
            let drv = EffortDriver::single(driver);
            let model = cost_efficiency_curve(&identity(), &drv, &d, Benefit::Modules).unwrap();
            let opt = cost_efficiency_curve(&optimal_ranking(&d, &drv).unwrap(), &drv, &d, Benefit::Modules).unwrap();
            let p = popt(&model, &opt, Interpolation::Linear).unwrap();
            assert!((p - expected).abs() < 1e-14, "{driver}: {p}");
            assert_eq!(popt(&opt, &opt, Interpolation::Linear).unwrap(), 1.0);
        }
    }

    #[test]
    fn popt_rejects_mismatched_curves() {
        let d = toy_dataset();
        let a = cost_efficiency_curve(&identity(), &EffortDriver::single("LOC"), &d, Benefit::Modules).unwrap();
        let b = cost_efficiency_curve(&identity(), &EffortDriver::single("McCC"), &d, Benefit::Modules).unwrap();
        assert!(matches!(popt(&a, &b, Interpolation::Linear), Err(Error::CurveMismatch(_))));
    }

    #[test]
    fn crossing_curves_count_both_lobes() {
        let p = |effort, benefit| CurvePoint { effort, benefit };
        let a = [p(0.0, 0.0), p(0.5, 1.0), p(1.0, 1.0)];
        let b = [p(0.0, 0.0), p(0.5, 0.0), p(1.0, 1.0)];
        // |a-b| is a triangle of height 1 on [0,0.5] plus one on [0.5,1]
        assert!((area_between(&a, &b, Interpolation::Linear) - 0.5).abs() < 1e-15);
        let c = [p(0.0, 0.0), p(1.0, 1.0)];
        let e = [p(0.0, 1.0), p(1.0, 0.0)];
        assert!((area_between(&c, &e, Interpolation::Linear) - 0.5).abs() < 1e-15);
        assert!((area_between(&a, &b, Interpolation::Step) - 0.5).abs() < 1e-15);
    }

    #[test]
    fn vertical_segments_are_handled() {
        let p = |effort, benefit| CurvePoint { effort, benefit };
        let a = [p(0.0, 0.0), p(0.0, 0.5), p(1.0, 1.0)];
        let b = [p(0.0, 0.0), p(1.0, 1.0)];
        assert!((area_between(&a, &b, Interpolation::Linear) - 0.25).abs() < 1e-15);
        assert!((area_between(&a, &b, Interpolation::Step) - 0.5).abs() < 1e-15);
    }

    #[test]
    fn defects_mode_needs_counts() {
        let d = toy_dataset();
        assert_eq!(
            cost_efficiency_curve(&identity(), &EffortDriver::single("LOC"), &d, Benefit::Defects),
            Err(Error::MissingDefectCounts)
        );
    }

    #[test]
    fn parses_modes() {
        assert_eq!("defects".parse::<Benefit>().unwrap(), Benefit::Defects);
        assert_eq!("step".parse::<Interpolation>().unwrap(), Interpolation::Step);
        assert!("area".parse::<Interpolation>().is_err());
    }
}
