use nlfem::bspline::{bspline_derivative, bspline_eval, bspline_eval_recursive, SplineDegree};
use nlfem::quadrature::gauss_legendre_on;

const B1: SplineDegree = SplineDegree::LINEAR;
const B3: SplineDegree = SplineDegree::CUBIC;

fn degrees() -> [SplineDegree; 4] {
    [SplineDegree::CONSTANT, SplineDegree::LINEAR, SplineDegree::QUADRATIC, SplineDegree::CUBIC]
}

#[test]
fn cubic_examples() {
    assert_eq!(bspline_eval(B3, 0.0), 0.0);
    assert!((bspline_eval(B3, 2.0) - 2.0 / 3.0).abs() < 1e-15);
    assert!((bspline_eval(B3, 1.0) - 1.0 / 6.0).abs() < 1e-15);
    assert!((bspline_eval(B3, 3.0) - 1.0 / 6.0).abs() < 1e-15);
    assert_eq!(bspline_eval(B1, 0.5), 0.5);
}

#[test]
fn derivative_examples() {
    assert!(bspline_derivative(B3, 2.0).unwrap().abs() < 1e-15);
    assert_eq!(bspline_derivative(B1, 0.5).unwrap(), 1.0);
    assert!((bspline_derivative(B3, 0.5).unwrap() - 0.125).abs() < 1e-15);
}

#[test]
fn hat_breakpoint_takes_right_limit() {
    assert_eq!(bspline_derivative(B1, 1.0).unwrap(), -1.0);
    assert_eq!(bspline_derivative(B1, 0.0).unwrap(), 1.0);
    assert_eq!(bspline_eval(SplineDegree::CONSTANT, 0.0), 1.0);
    assert_eq!(bspline_eval(SplineDegree::CONSTANT, 1.0), 0.0);
}

#[test]
fn support_is_exact() {
    for p in degrees() {
        let top = p.get() as f64 + 1.0;
        for i in 0..200 {
            let off = i as f64 * 0.05;
            // B_0 uses [0, 1), so only its left knot carries a value
            if !(p == SplineDegree::CONSTANT && i == 0) {
                assert_eq!(bspline_eval(p, -off), 0.0, "p={} t={}", p.get(), -off);
            }
            assert_eq!(bspline_eval(p, top + off), 0.0, "p={} t={}", p.get(), top + off);
        }
    }
}

#[test]
fn values_are_bounded() {
    for p in degrees() {
        for i in 0..=4000 {
            let t = -0.5 + i as f64 * 0.00125;
            let v = bspline_eval(p, t);
            assert!((0.0..=1.0).contains(&v));
        }
    }
}

#[test]
fn cubic_symmetry() {
    for i in 0..1000 {
        let t = -2.0 + 4.0 * i as f64 / 999.0;
        assert!((bspline_eval(B3, 2.0 + t) - bspline_eval(B3, 2.0 - t)).abs() < 1e-14, "t={t}");
    }
}

#[test]
fn partition_of_unity() {
    for p in [SplineDegree::LINEAR, SplineDegree::QUADRATIC, SplineDegree::CUBIC] {
        for i in 0..500 {
            let t = -3.0 + 7.0 * i as f64 / 499.0;
            let s: f64 = (-8..=8).map(|j| bspline_eval(p, t - j as f64)).sum();
            assert!((s - 1.0).abs() < 1e-13, "p={} t={t} sum={s}", p.get());
        }
    }
}

#[test]
fn closed_forms_agree_with_recursion() {
    for p in degrees() {
        for i in 0..=1000 {
            let t = -0.5 + 5.0 * i as f64 / 1000.0;
            assert!((bspline_eval(p, t) - bspline_eval_recursive(p, t)).abs() < 1e-14);
        }
    }
}

#[test]
fn hats_convolve_to_cubic() {
    // integrate piece by piece between the kinks of both factors
    for i in 0..=400 {
        let t = -2.0 + 4.0 * i as f64 / 400.0;
        let mut cuts = vec![0.0, 1.0, 2.0, -t, 1.0 - t, 2.0 - t];
        cuts.retain(|c| (0.0..=2.0).contains(c));
        cuts.sort_by(f64::total_cmp);
        let mut total = 0.0;
        for w in cuts.windows(2) {
            if w[1] - w[0] < 1e-15 {
                continue;
            }
            for (s, wt) in gauss_legendre_on(64, w[0], w[1]).unwrap() {
                total += wt * bspline_eval(B1, t + s) * bspline_eval(B1, s);
            }
        }
        assert!((total - bspline_eval(B3, 2.0 + t)).abs() < 1e-12, "t={t}");
    }
}

#[test]
fn derivative_matches_finite_differences() {
    let eps = 1e-6;
    for p in [SplineDegree::LINEAR, SplineDegree::QUADRATIC, SplineDegree::CUBIC] {
        for i in 0..400 {
            let t = -0.5 + 5.0 * (i as f64 + 0.37) / 400.0;
            if (t - t.round()).abs() < 1e-3 {
                continue;
            }
            let fd = (bspline_eval(p, t + eps) - bspline_eval(p, t - eps)) / (2.0 * eps);
            assert!((fd - bspline_derivative(p, t).unwrap()).abs() < 1e-6, "p={} t={t}", p.get());
        }
    }
}

#[test]
fn degree_validation() {
    for p in 0..=3 {
        assert_eq!(SplineDegree::new(p).unwrap().get(), p);
    }
    assert!(SplineDegree::new(4).is_err());
}
