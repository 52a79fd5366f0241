use cmkit::family::{alpha, beta, f_eval, to_f64};
use cmkit::kernels::{
    a_poly, assertion3_kernel, beta_exact, beta_integral, f_aux, find_root, g_kernel, g_kernel_q0,
    g_kernel_recast, h, laplace_oracle_f, log_superadditivity_gap, r, u, u_monotonicity, v,
    x_over_expm1, z, interior_grid, scan_monotone, Direction,
};
use cmkit::{FamilyIndex, FamilyParams, Polygamma, QuadratureSpec};

fn idx(p: u32, m: u32, n: u32, q: u32) -> FamilyIndex {
    FamilyIndex::new(p, m, n, q).unwrap()
}

fn log_grid(lo: f64, hi: f64, n: usize) -> Vec<f64> {
    let (a, b) = (lo.ln(), hi.ln());
    (0..n).map(|i| (a + (b - a) * i as f64 / (n - 1) as f64).exp()).collect()
}

fn linear_grid(lo: f64, hi: f64, n: usize) -> Vec<f64> {
    (0..n).map(|i| lo + (hi - lo) * i as f64 / (n - 1) as f64).collect()
}

#[test]
fn u_monotone_in_lemma_direction() {
    for a in [0.5, 2.0, 10.0] {
        for c in [0.25, 0.5, 2.0, 3.0, 4.0] {
            let scan = u_monotonicity(a, c, 200, 1e-12);
            assert!(scan.pass, "a={a} c={c}: {scan:?}");
        }
    }
}

#[test]
fn v_increasing_for_small_c_and_decreasing_for_large() {
    let grid = log_grid(0.01, 20.0, 200);
    assert!(scan_monotone(|x| v(0.5, x), &grid, Direction::Increasing, 1e-12).pass);
    assert!(scan_monotone(|x| v(0.25, x), &grid, Direction::Increasing, 1e-12).pass);
    assert!(scan_monotone(|x| v(3.0, x), &grid, Direction::Decreasing, 1e-12).pass);
}

#[test]
fn z_decreasing_in_c() {
    let cs = linear_grid(0.1, 4.0, 100);
    for x in [0.05, 0.5, 2.0, 10.0] {
        assert!(scan_monotone(|c| z(x, c), &cs, Direction::Decreasing, 1e-12).pass, "x={x}");
    }
}

#[test]
fn f_aux_non_positive() {
    for t in linear_grid(0.0, 50.0, 2001) {
        assert!(f_aux(t) <= 0.0, "t={t}");
    }
}

#[test]
fn kernel_polynomial_single_sign_change() {
    for (mm, nn, cc) in [(2u32, 1u32, 0.5), (3, 1, 0.5), (4, 2, 0.3), (6, 1, 0.9), (7, 3, 0.05)] {
        let root = find_root(mm, nn, cc).unwrap();
        assert!(root.t0 >= 1.0);
        let (lo, hi) = root.bracket;
        assert!(a_poly(lo, mm, nn, cc).unwrap() * a_poly(hi, mm, nn, cc).unwrap() <= 0.0);
        let a1 = a_poly(1.0, mm, nn, cc).unwrap();
        let scale = 1.0 + cc * root.t0.powi(mm as i32);
        assert!(root.residual.abs() <= 1e-10 * (1.0 + a1.abs()) * scale, "{root:?}");
        let grid = log_grid(1.0, 10.0 * root.t0, 10_000);
        let values: Vec<f64> = grid.iter().map(|&t| a_poly(t, mm, nn, cc).unwrap()).collect();
        let changes = values.windows(2).filter(|w| (w[0] > 0.0) != (w[1] > 0.0)).count();
        assert_eq!(changes, 1, "({mm},{nn},{cc})");
    }
}

#[test]
fn kernel_sign_split_at_s0() {
    for index in FamilyIndex::enumerate(8).into_iter().filter(|i| i.q() >= 1) {
        let a = to_f64(alpha(index).unwrap());
        let (mm, nn) = (index.p() - index.q(), index.n() - index.q());
        let root = find_root(mm, nn, a).unwrap();
        for s in interior_grid(0.0, 1.0, 400) {
            let t = (1.0 + s) / (1.0 - s);
            let val = a_poly(t, mm, nn, a).unwrap();
            let tol = 1e-12 * (1.0 + a * t.powi(mm as i32));
            if s <= root.s0 {
                assert!(val >= -tol, "{index} s={s}");
            } else {
                assert!(val <= tol, "{index} s={s}");
            }
        }
    }
}

#[test]
fn r_increasing_in_c() {
    let cs = linear_grid(0.1, 5.0, 200);
    for (s, t) in [(0.3, 1.0), (1.0, 3.0), (0.1, 10.0)] {
        assert!(scan_monotone(|c| r(s, t, c), &cs, Direction::Increasing, 0.0).pass);
    }
}

#[test]
fn x_over_expm1_strictly_decreasing() {
    let grid = linear_grid(1e-3, 50.0, 5000);
    let vals: Vec<f64> = grid.iter().map(|&x| x_over_expm1(x)).collect();
    assert!(vals.windows(2).all(|w| w[1] < w[0]));
}

#[test]
fn h_pointwise_inequality() {
    for c in [0.25, 0.5, 1.0, 2.0, 4.0] {
        for t in log_grid(0.01, 30.0, 40) {
            for frac in [0.05, 0.3, 0.5, 0.8, 0.99] {
                let s = frac * t;
                let lhs = h(c, t - s);
                let rhs = c * h(c, t);
                let tol = 1e-12 * lhs.abs().max(rhs.abs());
                if c <= 1.0 {
                    assert!(lhs - rhs >= -tol, "c={c} t={t} s={s}");
                }
                if c >= 1.0 {
                    assert!(lhs - rhs <= tol, "c={c} t={t} s={s}");
                }
            }
        }
    }
}

#[test]
fn superadditivity_gap_signs() {
    for c in [0.25, 0.5, 2.0, 4.0] {
        for t in log_grid(0.05, 20.0, 25) {
            for frac in [0.1, 0.5, 0.9] {
                let g = log_superadditivity_gap(c, frac * t, t);
                if c < 1.0 {
                    assert!(g >= -1e-12, "c={c} t={t}");
                } else {
                    assert!(g <= 1e-12, "c={c} t={t}");
                }
            }
        }
    }
    let mut last = f64::INFINITY;
    for d in [1e-1, 1e-2, 1e-3, 1e-4, 1e-6] {
        let g = log_superadditivity_gap(0.5, 0.7, 0.7 + d);
        assert!(g < last);
        last = g;
    }
    assert!(last < 1e-5);
}

#[test]
fn assertion3_kernel_increasing() {
    let grid = interior_grid(0.0, 1.0, 200);
    for a in [0.5, 2.0, 10.0] {
        for c in [0.25, 1.0, 4.0] {
            let scan = scan_monotone(|s| assertion3_kernel(s, a, c), &grid, Direction::Increasing, 0.0);
            assert!(scan.pass, "a={a} c={c}");
        }
    }
    assert!(assertion3_kernel(0.9999, 2.0, 0.5) > 1e3 * assertion3_kernel(0.5, 2.0, 0.5));
    let base = 1.0 / (4.0 * (1.0 - 0.25));
    assert!((assertion3_kernel(0.5, 2.0, 1.0) - base).abs() < 1e-15);
}

#[test]
fn unit_step_identities() {
    for s in [0.1, 0.5, 0.9] {
        assert_eq!(u(s, 3.0, 1.0), 1.0);
    }
    for x in [0.01, 1.0, 20.0] {
        assert!(v(1.0, x).abs() < 1e-15);
    }
}

#[test]
fn beta_and_zero_integral_identities() {
    let spec = QuadratureSpec::default();
    for x in 1..=6u32 {
        for y in 1..=6u32 {
            let quad = beta_integral(x, y, &spec).unwrap();
            assert!((quad - to_f64(beta_exact(x, y))).abs() <= 1e-10, "B({x},{y})");
        }
    }
    for index in FamilyIndex::enumerate(6) {
        let res = cmkit::kernels::zero_integral_residual(index, &spec).unwrap();
        assert!(res.abs() <= 1e-10, "{index}: {res}");
    }
}

#[test]
fn folded_kernel_matches_direct_convolution() {
    let spec = QuadratureSpec::default();
    for index in [idx(3, 2, 2, 1), idx(4, 3, 2, 1), idx(5, 3, 3, 1), idx(6, 4, 4, 2)] {
        for (s, c) in [(to_f64(alpha(index).unwrap()), 0.5), (to_f64(beta(index).unwrap()), 3.0), (0.1, 1.7)] {
            for t in [0.03, 0.7, 4.0, 25.0] {
                let direct = g_kernel(index, s, c, t, &spec).unwrap();
                let folded = g_kernel_recast(index, s, c, t, &spec).unwrap();
                assert!(
                    (direct.value - folded.value).abs() <= 1e-10 * direct.scale,
                    "{index} s={s} c={c} t={t}: {} vs {}",
                    direct.value,
                    folded.value
                );
            }
        }
    }
}

#[test]
fn g_sign_follows_theorem_clauses() {
    let spec = QuadratureSpec::default();
    let index = idx(3, 2, 2, 1);
    let (a, b) = (0.5, 2.0 / 3.0);
    for t in log_grid(0.01, 50.0, 60) {
        let g = g_kernel(index, a, 0.5, t, &spec).unwrap();
        assert!(g.value >= -1e-10 * g.scale, "t={t}");
        let g = g_kernel(index, a, 2.0, t, &spec).unwrap();
        assert!(g.value <= 1e-10 * g.scale, "t={t}");
        for c in [0.25, 1.0, 3.0] {
            let g = g_kernel(index, b, c, t, &spec).unwrap();
            assert!(g.value <= 1e-10 * g.scale, "beta t={t} c={c}");
        }
    }
    // q = 0 kernel at alpha and alpha/c
    let index = idx(2, 1, 1, 0);
    for t in log_grid(0.01, 50.0, 60) {
        let g = g_kernel_q0(index, 1.0, 0.5, t, &spec).unwrap();
        assert!(g.value >= -1e-10 * g.scale);
        let g = g_kernel_q0(index, 2.0, 0.5, t, &spec).unwrap();
        assert!(g.value <= 1e-10 * g.scale);
        let g = g_kernel_q0(index, 1.0, 2.0, t, &spec).unwrap();
        assert!(g.value <= 1e-10 * g.scale);
        let g = g_kernel_q0(index, 0.5, 2.0, t, &spec).unwrap();
        assert!(g.value >= -1e-10 * g.scale);
    }
}

#[test]
fn laplace_reconstruction_agrees_with_closed_form() {
    let spec = QuadratureSpec { rel_tol: 1e-10, ..Default::default() };
    let engine = Polygamma::default();
    let cases = [
        (idx(3, 2, 2, 1), 0.5, 0.5, vec![1.0, 5.0]),
        (idx(2, 1, 1, 0), 1.0, 0.5, vec![1.0, 2.0, 5.0]),
        (idx(3, 2, 2, 1), 0.0, 0.5, vec![1.0]),
        (idx(4, 3, 2, 1), 0.4, 2.0, vec![0.7, 3.0]),
        (idx(3, 2, 1, 0), 0.25, 2.0, vec![0.5, 4.0]),
    ];
    for (index, s, c, xs) in cases {
        let params = FamilyParams::new(index, s, c).unwrap();
        for x in xs {
            let oracle = laplace_oracle_f(&params, x, &spec).unwrap();
            let closed = f_eval(&engine, &params, x).unwrap();
            assert!(
                (oracle - closed).abs() <= 1e-6 * closed.abs() + 1e-12,
                "{index} s={s} c={c} x={x}: {oracle:e} vs {closed:e}"
            );
        }
    }
}
