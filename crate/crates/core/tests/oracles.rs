//! Checks against independent reference computations: finite differences,
//! a plain two-parameter Newton solver, and exhaustive permutation search.

use eam_core::{
    cost_efficiency_curve, fit_blr, log_likelihood_and_gradient, optimal_ranking, predict_proba, Benefit, Dataset,
    EffortDriver, ModuleRecord, PredictorSpec, RankedList,
};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn synthetic(rng: &mut ChaCha8Rng, n: usize) -> Dataset {
    let records = (0..n)
        .map(|i| {
            let a: f64 = rng.random_range(0.0..10.0);
            let b: f64 = rng.random_range(0.0..5.0);
            let eta = -2.0 + 0.4 * a - 0.3 * b;
            let p = 1.0 / (1.0 + (-eta).exp());
            let y = rng.random::<f64>() < p;
            ModuleRecord::from_pairs(format!("m{i}"), [("a", a), ("b", b)], y).unwrap()
        })
        .collect();
    Dataset::new(vec!["a".into(), "b".into()], records).unwrap()
}

fn preds() -> Vec<PredictorSpec> {
    PredictorSpec::parse_list("a,b").unwrap()
}

#[test]
fn gradient_matches_central_differences() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    let d = synthetic(&mut rng, 60);
    let h = 1e-6;
    for _ in 0..20 {
        let coef: Vec<f64> = (0..3).map(|_| rng.random_range(-1.0..1.0)).collect();
        let (_, grad) = log_likelihood_and_gradient(&coef, &d, &preds()).unwrap();
        for j in 0..3 {
            let mut up = coef.clone();
            let mut down = coef.clone();
            up[j] += h;
            down[j] -= h;
            let fd = (log_likelihood_and_gradient(&up, &d, &preds()).unwrap().0
                - log_likelihood_and_gradient(&down, &d, &preds()).unwrap().0)
                / (2.0 * h);
            let rel = (grad[j] - fd).abs() / grad[j].abs().max(fd.abs()).max(1.0);
            assert!(rel < 1e-6, "component {j}: analytic {} vs fd {fd}", grad[j]);
        }
    }
}

#[test]
fn gradient_vanishes_at_fit() {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    for n in [40, 200, 1000] {
        let d = synthetic(&mut rng, n);
        let m = fit_blr(&d, &preds()).unwrap();
        assert!(m.diagnostics().converged);
        let (_, g) = log_likelihood_and_gradient(m.coefficients(), &d, &preds()).unwrap();
        let worst = g.iter().fold(0.0f64, |a, v| a.max(v.abs()));
        assert!(worst < 1e-6, "n={n}: {g:?}");
    }
}

#[test]
fn refit_is_bit_identical() {
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    let d = synthetic(&mut rng, 150);
    let a = fit_blr(&d, &preds()).unwrap();
    let b = fit_blr(&d, &preds()).unwrap();
    assert_eq!(a.coefficients(), b.coefficients());
    assert_eq!(predict_proba(&a, &d).unwrap(), predict_proba(&b, &d).unwrap());
}

/// Newton's method on the raw two-parameter log-likelihood, no scaling.
fn newton_two_param(x: &[f64], y: &[bool]) -> (f64, f64) {
    let (mut b0, mut b1) = (0.0f64, 0.0f64);
    for _ in 0..200 {
        let (mut g0, mut g1, mut h00, mut h01, mut h11) = (0.0, 0.0, 0.0, 0.0, 0.0);
        for (&xi, &yi) in x.iter().zip(y) {
            let p = 1.0 / (1.0 + (-(b0 + b1 * xi)).exp());
            let r = f64::from(u8::from(yi)) - p;
            let w = p * (1.0 - p);
            g0 += r;
            g1 += r * xi;
            h00 += w;
            h01 += w * xi;
            h11 += w * xi * xi;
        }
        let det = h00 * h11 - h01 * h01;
        let d0 = (h11 * g0 - h01 * g1) / det;
        let d1 = (h00 * g1 - h01 * g0) / det;
        b0 += d0;
        b1 += d1;
        if d0.abs().max(d1.abs()) < 1e-13 {
            break;
        }
    }
    (b0, b1)
}

#[test]
fn irls_agrees_with_unscaled_newton() {
    let mut rng = ChaCha8Rng::seed_from_u64(21);
    for _ in 0..10 {
        let d = synthetic(&mut rng, 80);
        let x = d.measure_vector("a").unwrap();
        let (b0, b1) = newton_two_param(&x, &d.labels());
        let m = fit_blr(&d, &[PredictorSpec::Measure("a".into())]).unwrap();
        let c = m.coefficients();
        assert!((c[0] - b0).abs() <= 1e-4 * b0.abs().max(1e-3), "{c:?} vs {b0}");
        assert!((c[1] - b1).abs() <= 1e-4 * b1.abs().max(1e-3), "{c:?} vs {b1}");
    }
}

fn permutations(n: usize) -> Vec<Vec<usize>> {
    fn rec(prefix: &mut Vec<usize>, used: &mut [bool], out: &mut Vec<Vec<usize>>) {
        if prefix.len() == used.len() {
            out.push(prefix.clone());
            return;
        }
        for i in 0..used.len() {
            if !used[i] {
                used[i] = true;
                prefix.push(i);
                rec(prefix, used, out);
                prefix.pop();
                used[i] = false;
            }
        }
    }
    let mut out = Vec::new();
    rec(&mut Vec::new(), &mut vec![false; n], &mut out);
    out
}

/// Defective modules found by the longest prefix of `order` within `budget`.
fn found_within(order: &[usize], effort: &[f64], labels: &[bool], budget: f64) -> usize {
    let mut spent = 0.0;
    let mut found = 0;
    for &i in order {
        spent += effort[i];
        if spent > budget + 1e-9 {
            break;
        }
        found += usize::from(labels[i]);
    }
    found
}

#[test]
fn optimal_order_beats_every_permutation_small() {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    for _ in 0..40 {
        let n = rng.random_range(1..=6);
        let effort: Vec<f64> = (0..n).map(|_| f64::from(rng.random_range(0u32..30))).collect();
        if effort.iter().sum::<f64>() == 0.0 {
            continue;
        }
        let labels: Vec<bool> = (0..n).map(|_| rng.random()).collect();
        let records = (0..n)
            .map(|i| ModuleRecord::from_pairs(format!("{i}"), [("E", effort[i])], labels[i]).unwrap())
            .collect();
        let d = Dataset::new(vec!["E".into()], records).unwrap();
        let opt = optimal_ranking(&d, &EffortDriver::single("E")).unwrap();
        let mut spent = 0.0;
        for &i in opt.order() {
            spent += effort[i];
            let best = found_within(opt.order(), &effort, &labels, spent);
            for p in permutations(n) {
                assert!(found_within(&p, &effort, &labels, spent) <= best);
            }
        }
        // the optimal curve is an upper envelope at its own boundaries
        let oc = cost_efficiency_curve(&opt, &EffortDriver::single("E"), &d, Benefit::Modules).unwrap();
        for p in permutations(n) {
            let c = cost_efficiency_curve(&RankedList::from_permutation(p).unwrap(), &EffortDriver::single("E"), &d, Benefit::Modules)
                .unwrap();
            for q in c.points() {
                let k = oc.points().partition_point(|o| o.effort <= q.effort + 1e-12);
                assert!(q.benefit <= oc.points()[k - 1].benefit + 1e-12);
            }
        }
    }
}
