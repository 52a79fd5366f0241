use cmkit::family::{
    alpha, beta, delta_psi, f_derivative, f_eval, ratio_infinity, ratio_zero, to_f64, Rational,
};
use cmkit::verifier::{check_cm, CmSign, GridSpec};
use cmkit::{FamilyIndex, FamilyParams, Polygamma};
use proptest::prelude::*;

fn idx(p: u32, m: u32, n: u32, q: u32) -> FamilyIndex {
    FamilyIndex::new(p, m, n, q).unwrap()
}

fn any_index() -> impl Strategy<Value = FamilyIndex> {
    let all = FamilyIndex::enumerate(6);
    (0..all.len()).prop_map(move |i| all[i])
}

#[test]
fn threshold_constants() {
    assert_eq!(alpha(idx(3, 2, 2, 1)).unwrap(), Rational::new(1, 2));
    assert_eq!(beta(idx(3, 2, 2, 1)).unwrap(), Rational::new(2, 3));
    for n in 2..=6u32 {
        assert_eq!(alpha(idx(n + 1, n, n, n - 1)).unwrap(), Rational::new((n - 1) as u128, n as u128));
        assert_eq!(beta(idx(n + 1, n, n, n - 1)).unwrap(), Rational::new(n as u128, (n + 1) as u128));
    }
    assert_eq!(alpha(idx(3, 2, 1, 0)).unwrap(), Rational::new(1, 2));
}

#[test]
fn thresholds_lie_in_unit_interval() {
    let one = Rational::from_integer(1);
    let zero = Rational::from_integer(0);
    for index in FamilyIndex::enumerate(8) {
        let a = alpha(index).unwrap();
        // (2,1,1,0) sits exactly on the upper bound
        if index == idx(2, 1, 1, 0) {
            assert_eq!(a, one);
        } else {
            assert!(a > zero && a < one, "{index}: alpha = {a}");
        }
        if index.q() >= 1 {
            let b = beta(index).unwrap();
            assert!(a < b && b < one, "{index}: alpha = {a}, beta = {b}");
        }
    }
}

#[test]
fn delta_psi_trivial_values() {
    let e = Polygamma::default();
    for &(x, c) in &[(0.3, 0.1), (2.0, 5.0), (40.0, 1e-9)] {
        assert_eq!(delta_psi(&e, -1, x, c).unwrap(), -1.0);
    }
    assert!((delta_psi(&e, 0, 1.0, 1.0).unwrap() - 1.0).abs() < 1e-15);
    assert_eq!(delta_psi(&e, -1, 3.0, 0.0).unwrap(), -1.0);
    assert_eq!(delta_psi(&e, 2, 3.0, 0.0).unwrap(), e.polygamma(3, 3.0).unwrap());
    assert!(delta_psi(&e, 0, 0.0, 1.0).is_err());
}

#[test]
fn s_zero_is_positive() {
    let e = Polygamma::default();
    for index in FamilyIndex::enumerate(6) {
        for &c in &[0.0, 0.5, 2.0] {
            let params = FamilyParams::new(index, 0.0, c).unwrap();
            for x in GridSpec::default().points() {
                let v = f_eval(&e, &params, x).unwrap();
                assert!(v > 0.0, "{index} c={c} x={x}: {v}");
            }
        }
    }
}

#[test]
fn derivative_zero_is_eval() {
    let e = Polygamma::default();
    let params = FamilyParams::new(idx(4, 3, 2, 1), 0.4, 0.7).unwrap();
    for &x in &[0.1, 1.0, 9.0] {
        assert_eq!(f_derivative(&e, &params, 0, x).unwrap().value, f_eval(&e, &params, x).unwrap());
    }
}

#[test]
fn derivative_order_cap() {
    let e = Polygamma::default();
    let params = FamilyParams::new(idx(3, 2, 2, 1), 0.5, 0.5).unwrap();
    assert!(f_derivative(&e, &params, 61, 1.0).is_ok());
    assert!(f_derivative(&e, &params, 62, 1.0).is_err());
}

#[test]
fn continuity_as_step_vanishes() {
    let e = Polygamma::default();
    for index in FamilyIndex::enumerate(5) {
        let s = 0.5 * to_f64(alpha(index).unwrap());
        for &x in &[0.2, 1.0, 7.0] {
            let f0 = f_eval(&e, &FamilyParams::new(index, s, 0.0).unwrap(), x).unwrap();
            let err = |c: f64| {
                let fc = f_eval(&e, &FamilyParams::new(index, s, c).unwrap(), x).unwrap();
                ((fc - f0) / f0).abs()
            };
            let (e3, e6, e8) = (err(1e-3), err(1e-6), err(1e-8));
            assert!(e8 <= 1e-6, "{index} x={x}: {e8}");
            // first-order approach: three decades of c buy about three decades of error
            assert!(e6 <= 1e-2 * e3 + 1e-13, "{index} x={x}: {e3} -> {e6}");
            assert!(e8 <= e6 + 1e-13, "{index} x={x}: {e6} -> {e8}");
        }
    }
}

#[test]
fn ratio_limits() {
    let e = Polygamma::default();
    assert!((ratio_infinity(&e, idx(3, 2, 2, 1), 0.5, 1e4).unwrap() - 0.5).abs() <= 5e-4);
    assert!((ratio_infinity(&e, idx(2, 1, 1, 0), 1.0, 1e4).unwrap() - 1.0).abs() <= 5e-4);
    assert!((ratio_zero(&e, idx(2, 1, 1, 0), 0.5, 1e-6).unwrap() - 2.0).abs() <= 1e-3);
    assert!((ratio_zero(&e, idx(3, 2, 1, 0), 2.0, 1e-6).unwrap() - 0.25).abs() <= 1e-3);
    assert!((ratio_zero(&e, idx(2, 1, 1, 0), 1.0, 1e-6).unwrap() - 1.0).abs() <= 1e-3);
    assert!(ratio_zero(&e, idx(3, 2, 2, 1), 0.5, 1e-6).is_err());
    let gaps: Vec<f64> = [1e2, 1e3, 1e4]
        .iter()
        .map(|&x| (ratio_infinity(&e, idx(3, 2, 2, 1), 0.5, x).unwrap() - 0.5).abs())
        .collect();
    assert!(gaps[0] > gaps[1] && gaps[1] > gaps[2], "{gaps:?}");
}

#[test]
fn step_zero_regression() {
    let e = Polygamma::default();
    for index in [idx(3, 2, 2, 1), idx(4, 3, 2, 1)] {
        let a = to_f64(alpha(index).unwrap());
        let b = to_f64(beta(index).unwrap());
        let grid = GridSpec::default();
        let plus = check_cm(&e, &FamilyParams::new(index, a, 0.0).unwrap(), CmSign::Plus, &grid, 12, 1e-9).unwrap();
        let minus = check_cm(&e, &FamilyParams::new(index, b, 0.0).unwrap(), CmSign::Minus, &grid, 12, 1e-9).unwrap();
        assert!(plus.passed(), "{index}: {:?}", plus.witness);
        assert!(minus.passed(), "{index}: {:?}", minus.witness);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn linear_in_s(index in any_index(), lx in -3.0f64..4.0, c in 0.0f64..4.0, s in -2.0f64..2.0) {
        let e = Polygamma::default();
        let x = lx.exp();
        let at = |s: f64| f_eval(&e, &FamilyParams::new(index, s, c).unwrap(), x).unwrap();
        let (f0, f1, fs) = (at(0.0), at(1.0), at(s));
        let scale = f0.abs() + s.abs() * (f0 - f1).abs();
        prop_assert!((fs - (f0 - s * (f0 - f1))).abs() <= 1e-12 * scale);
    }

    #[test]
    fn leibniz_matches_finite_difference(
        index in any_index(),
        k in 1u32..=6,
        lx in -2.0f64..3.0,
        c in prop::sample::select(vec![0.0, 0.25, 0.5, 2.0, 4.0]),
        frac in 0.0f64..1.0,
    ) {
        let e = Polygamma::default();
        let x = lx.exp();
        let params = FamilyParams::new(index, frac * to_f64(alpha(index).unwrap()), c).unwrap();
        let h = 1e-4 * x;
        let lo = f_derivative(&e, &params, k - 1, x - h).unwrap().value;
        let hi = f_derivative(&e, &params, k - 1, x + h).unwrap().value;
        let fd = (hi - lo) / (2.0 * h);
        let exact = f_derivative(&e, &params, k, x).unwrap();
        prop_assert!(
            (fd - exact.value).abs() <= 1e-5 * exact.value.abs().max(exact.scale * 1e-3),
            "fd={fd} exact={} scale={}", exact.value, exact.scale
        );
    }

    #[test]
    fn difference_lies_in_mean_value_bracket(lx in -3.0f64..4.0, lc in -6.0f64..1.5) {
        let e = Polygamma::default();
        let (x, c) = (lx.exp(), lc.exp());
        let d = delta_psi(&e, 1, x, c).unwrap();
        // the second polygamma is increasing, so the bracket is its endpoint values
        let (lo, hi) = (e.polygamma(2, x).unwrap(), e.polygamma(2, x + c).unwrap());
        let slack = 1e-12 * lo.abs();
        prop_assert!(d >= lo - slack && d <= hi + slack, "{lo} <= {d} <= {hi}");
    }
}
