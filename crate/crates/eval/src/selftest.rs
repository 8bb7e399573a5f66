//! Hand-enumerated values on the five-module toy instance, checked against
//! the library. Any mismatch points at the check that broke.

use eam_core::fixtures::{toy_dataset, toy_scores};
use eam_core::{
    evaluate_suite, optimal_ranking, roc_auc, ConfusionMatrix, CurvePoint, EffortBudget, EffortDriver, RankPolicy,
    SuiteConfig,
};

#[derive(Debug, Clone, PartialEq)]
pub struct Check {
    pub name: String,
    pub expected: String,
    pub actual: String,
    pub pass: bool,
}

fn check<T: PartialEq + std::fmt::Debug>(out: &mut Vec<Check>, name: &str, expected: T, actual: T) {
    out.push(Check {
        name: name.to_string(),
        pass: expected == actual,
        expected: format!("{expected:?}"),
        actual: format!("{actual:?}"),
    });
}

fn close(out: &mut Vec<Check>, name: &str, expected: f64, actual: f64, tol: f64) {
    out.push(Check {
        name: name.to_string(),
        pass: (expected - actual).abs() <= tol,
        expected: format!("{expected}"),
        actual: format!("{actual}"),
    });
}

fn xy(points: &[CurvePoint]) -> Vec<(f64, f64)> {
    points.iter().map(|p| (p.effort, p.benefit)).collect()
}

fn cm(tp: u64, fp: u64, tn: u64, fn_: u64) -> ConfusionMatrix {
    ConfusionMatrix { tp, fp, tn, fn_ }
}

pub fn run_checks() -> Vec<Check> {
    let mut out = Vec::new();
    let d = toy_dataset();
    let s = toy_scores();
    let budget = |f| EffortBudget::new(f).expect("constant budget");
    let config = SuiteConfig {
        drivers: vec![EffortDriver::single("LOC"), EffortDriver::single("McCC")],
        budgets: vec![budget(0.2), budget(0.5)],
        ..SuiteConfig::default()
    };
    let results = match evaluate_suite(&d, &s, &config) {
        Ok(r) => r,
        Err(e) => {
            out.push(Check {
                name: "toy suite evaluates".into(),
                expected: "Ok".into(),
                actual: e.to_string(),
                pass: false,
            });
            return out;
        }
    };
    let loc = results.cell(RankPolicy::Score, "LOC").expect("LOC cell");
    let mcc = results.cell(RankPolicy::Score, "McCC").expect("McCC cell");
    let (t, tt) = (1.0 / 3.0, 2.0 / 3.0);

    check(&mut out, "score ranking", vec![0, 1, 2, 3, 4], loc.ranking.order().to_vec());
    check(
        &mut out,
        "LOC curve points",
        vec![(0.0, 0.0), (10.0 / 200.0, t), (30.0 / 200.0, t), (60.0 / 200.0, tt), (100.0 / 200.0, tt), (1.0, 1.0)],
        xy(loc.curve.points()),
    );
    check(
        &mut out,
        "McCC curve points",
        vec![(0.0, 0.0), (5.0 / 20.0, t), (6.0 / 20.0, t), (15.0 / 20.0, tt), (17.0 / 20.0, tt), (1.0, 1.0)],
        xy(mcc.curve.points()),
    );
    check(&mut out, "EP at 50% effort, LOC", 4, loc.budgets[1].cutoff);
    check(&mut out, "EP at 50% effort, McCC", 2, mcc.budgets[1].cutoff);
    check(&mut out, "EP at 20% effort, LOC", 2, loc.budgets[0].cutoff);
    check(&mut out, "EP at 20% effort, McCC", 0, mcc.budgets[0].cutoff);
    check(&mut out, "PofB50, LOC", tt, loc.budgets[1].pofb);
    check(&mut out, "PofB50, McCC", t, mcc.budgets[1].pofb);
    check(&mut out, "PofB20, LOC", t, loc.budgets[0].pofb);
    check(&mut out, "PofB20, McCC", 0.0, mcc.budgets[0].pofb);
    check(&mut out, "confusion at 50%, LOC", cm(2, 2, 0, 1), loc.budgets[1].confusion);
    check(&mut out, "confusion at 50%, McCC", cm(1, 1, 1, 2), mcc.budgets[1].confusion);
    check(&mut out, "confusion at 20%, McCC", cm(0, 0, 2, 3), mcc.budgets[0].confusion);
    check(&mut out, "PPV undefined when nothing is inspected", None, mcc.budgets[0].metrics.ppv);
    close(&mut out, "MCC at 50%, LOC", -2.0 / 24f64.sqrt(), loc.budgets[1].metrics.mcc.unwrap_or(f64::NAN), 1e-15);
    close(&mut out, "Popt, LOC", 13.0 / 15.0, loc.popt, 1e-12);
    close(&mut out, "Popt, McCC", 0.8, mcc.popt, 1e-12);
    let opt = |m| optimal_ranking(&d, &EffortDriver::single(m)).map(|r| r.order().to_vec());
    check(&mut out, "optimal order, LOC", Ok(vec![0, 2, 4, 1, 3]), opt("LOC"));
    check(&mut out, "optimal order, McCC", Ok(vec![4, 0, 2, 1, 3]), opt("McCC"));
    check(&mut out, "AUC", Ok(0.5), roc_auc(&s, &d));

    let scaled = SuiteConfig {
        drivers: vec![EffortDriver::single("LOC").with_unit_cost(7.0).expect("positive cost")],
        ..config.clone()
    };
    match evaluate_suite(&d, &s, &scaled) {
        Ok(r) => {
            let c = &r.cells[0];
            check(&mut out, "unit cost cancels: curve", xy(loc.curve.points()), xy(c.curve.points()));
            check(&mut out, "unit cost cancels: Popt", loc.popt, c.popt);
        }
        Err(e) => check(&mut out, "unit cost cancels", "Ok".to_string(), e.to_string()),
    }
    out
}

pub fn render(checks: &[Check]) -> String {
    let width = checks.iter().map(|c| c.name.len()).max().unwrap_or(0);
    let mut s = String::new();
    for c in checks {
        let status = if c.pass { "PASS" } else { "FAIL" };
        if c.pass {
            s.push_str(&format!("{status}  {}", c.name));
        } else {
            s.push_str(&format!("{status}  {:<width$}  expected {} got {}", c.name, c.expected, c.actual));
        }
        s.push('\n');
    }
    let failed = checks.iter().filter(|c| !c.pass).count();
    s.push_str(&format!("{} checks, {} failed\n", checks.len(), failed));
    s
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn all_checks_pass() {
        let checks = run_checks();
        let failed: Vec<_> = checks.iter().filter(|c| !c.pass).collect();
        assert!(failed.is_empty(), "{failed:#?}");
    }

    #[test]
    fn failures_are_named() {
        let checks = vec![Check {
            name: "x".into(),
            expected: "1".into(),
            actual: "2".into(),
            pass: false,
        }];
        assert!(render(&checks).contains("FAIL  x  expected 1 got 2"));
    }
}
