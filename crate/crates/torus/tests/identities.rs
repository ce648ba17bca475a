//! Grid-refinement behavior: the solver hits its tolerance on band-limited
//! data at every resolution, and residuals on a fixed smooth (but not
//! band-limited) right-hand side decrease under refinement until they reach
//! the double-precision floor.

use abcml_torus::{random_real_form11, tolerances, Form11, TorusGrid};
use rustfft::num_complex::Complex64;

const TAU: f64 = 2.0 * std::f64::consts::PI;

/// `F0(x,y) = u(x)·v(y)` with `u = 1/(a - cos 2πx)`: smooth with slowly
/// decaying Fourier coefficients, so truncation error is visible at N = 64
/// and gone by N = 256.
fn slow_potential(a: f64) -> impl Fn(f64, f64) -> f64 {
    move |x, y| 1.0 / (a - (TAU * x).cos()) / (a - (TAU * y).cos())
}

/// The laplacian of `slow_potential` in closed form:
/// `u'' = (2π)² w² (2 sin²(2πx)·w - cos(2πx))` with `w = u`.
fn slow_laplacian(a: f64) -> impl Fn(f64, f64) -> f64 {
    let u = move |t: f64| 1.0 / (a - (TAU * t).cos());
    let u2 = move |t: f64| {
        let w = u(t);
        TAU * TAU * w * w * (2.0 * (TAU * t).sin().powi(2) * w - (TAU * t).cos())
    };
    move |x, y| u2(x) * u(y) + u(x) * u2(y)
}

fn smooth_rhs(grid: &TorusGrid, a: f64) -> Form11 {
    // rho = i·del·delbar F0 has dz∧dz̄ coefficient (i/4)·ΔF0
    let lap = slow_laplacian(a);
    Form11(grid.sample(move |x, y| Complex64::new(0.0, 0.25 * lap(x, y))))
}

#[test]
fn band_limited_data_meets_tolerances_at_every_resolution() {
    for n in [64usize, 128, 256] {
        let grid = TorusGrid::new(n).unwrap();
        for seed in 0..3u64 {
            let rho = random_real_form11(&grid, 8, 40 + seed);
            let report = grid.ibp_identity_check(&rho).unwrap();
            assert!(report.solve_residual < tolerances::SOLVE_TOL, "N={n}: {report:?}");
            assert!(report.residual < tolerances::IBP_TOL, "N={n}: {report:?}");
            assert!(report.dirichlet_energy > 0.0);
        }
    }
}

#[test]
fn solve_then_apply_is_identity_minus_mean() {
    for n in [64usize, 128, 256] {
        let grid = TorusGrid::new(n).unwrap();
        let f0 = grid.sample_real(|x, y| (TAU * x).cos() * (TAU * y).sin() + 0.3 * (2.0 * TAU * y).cos());
        let rho = grid.i_del_delbar(&f0).unwrap();
        let f = grid.solve_i_ddbar(&rho).unwrap();
        // f0 is already mean-free
        let diff = f.sub(&f0);
        assert!(diff.max_abs() < tolerances::SOLVE_TOL * f0.max_abs(), "N={n}");
    }
}

#[test]
fn errors_decrease_under_refinement_on_smooth_data() {
    // The right-hand side is the sampled analytic laplacian, so the grid
    // solution differs from the sampled continuum solution by spectral
    // truncation, which must shrink monotonically to the floor.
    let a = 1.15;
    let floor = 1e-12;
    let potential = slow_potential(a);
    let mut errors = Vec::new();
    let mut ibp_residuals = Vec::new();
    for n in [64usize, 128, 256] {
        let grid = TorusGrid::new(n).unwrap();
        let rho = smooth_rhs(&grid, a);
        let f = grid.solve_i_ddbar(&rho).unwrap();
        let f0 = grid.sample_real(&potential);
        let mean = f0.mean();
        let err = f
            .values
            .iter()
            .zip(&f0.values)
            .map(|(got, want)| (got - (want - mean)).norm())
            .fold(0.0, f64::max)
            / f0.max_abs();
        errors.push(err);
        let report = grid.ibp_identity_check(&rho).unwrap();
        assert!(report.residual < tolerances::IBP_TOL, "N={n}: {report:?}");
        ibp_residuals.push(report.residual);
    }
    // monotone up to the floor
    assert!(errors[0] > errors[1].max(floor), "no visible truncation: {errors:?}");
    assert!(errors[1] <= errors[0] && errors[2] <= errors[1] + floor, "{errors:?}");
    assert!(errors[0] > 1e-10, "expected visible truncation at N=64: {errors:?}");
    assert!(errors[2] < floor, "expected spectral floor at N=256: {errors:?}");
    for w in ibp_residuals.windows(2) {
        assert!(w[1] <= w[0] + floor, "ibp residual grew: {ibp_residuals:?}");
    }
}
