//! Spectral calculus on the flat torus `C/(Z + iZ)`.
//!
//! Functions and form coefficients are sampled on an `N×N` grid and
//! differentiated in Fourier space, so all identities hold to spectral
//! accuracy on band-limited data. The module checks the computational
//! identities behind the surface-level nontriviality argument: the
//! `i·del·delbar` equation has a unique zero-mean solution, the Dirichlet
//! pairing of `(1,0)`-forms is positive definite, and integration by parts
//! turns `∫ F·rho` into `-⟨∂F, ∂F⟩_D`.
//!
//! Conventions: `z = x + iy` with unit periods, `i·dz∧dz̄ = 2·dx∧dy`, and
//! quadrature is the trapezoidal rule (the grid mean), which is exact for
//! band-limited periodic integrands.

use rustfft::num_complex::Complex64;
use rustfft::FftPlanner;
use thiserror::Error;

pub mod tolerances {
    //! Thresholds with their error-budget rationale.

    /// `∫ rho` must vanish up to this fraction of `max|rho|` for the
    /// `i·del·delbar` equation to be solvable.
    pub const MEAN_TOL: f64 = 1e-12;
    /// Relative residual of the spectral solve on band-limited data:
    /// double precision with one multiplier division.
    pub const SOLVE_TOL: f64 = 1e-10;
    /// Integration-by-parts residual: two spectral derivatives lose about
    /// two digits over the solver floor.
    pub const IBP_TOL: f64 = 1e-8;
    /// Imaginary contamination allowed on quantities that must be real.
    pub const REALITY_TOL: f64 = 1e-12;
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum TorusError {
    #[error("grid resolution must be even and at least 8, got {0}")]
    BadResolution(usize),
    #[error("form does not match this grid (expected {expected}, got {got})")]
    GridMismatch { expected: usize, got: usize },
    #[error("right-hand side has nonzero integral {integral} (tolerance {tolerance})")]
    NonzeroMean { integral: f64, tolerance: f64 },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct TorusGrid {
    n: usize,
}

/// Sampled complex function on the grid, row-major over `(x_i, y_j)`.
#[derive(Debug, Clone, PartialEq)]
pub struct GridFunction {
    n: usize,
    pub values: Vec<Complex64>,
}

/// Coefficient of `dz`.
#[derive(Debug, Clone, PartialEq)]
pub struct Form10(pub GridFunction);

/// Coefficient of `dz̄`.
#[derive(Debug, Clone, PartialEq)]
pub struct Form01(pub GridFunction);

/// Coefficient of `dz∧dz̄`.
#[derive(Debug, Clone, PartialEq)]
pub struct Form11(pub GridFunction);

impl Form11 {
    /// A `(1,1)`-form is real iff its `dz∧dz̄` coefficient is purely
    /// imaginary (`conj(h·dz∧dz̄) = -h̄·dz∧dz̄`).
    pub fn is_real_form(&self, tol: f64) -> bool {
        let scale = self.0.max_abs().max(1.0);
        self.0.values.iter().all(|v| v.re.abs() <= tol * scale)
    }
}

impl GridFunction {
    pub fn resolution(&self) -> usize {
        self.n
    }

    pub fn max_abs(&self) -> f64 {
        self.values.iter().map(|v| v.norm()).fold(0.0, f64::max)
    }

    pub fn max_imag(&self) -> f64 {
        self.values.iter().map(|v| v.im.abs()).fold(0.0, f64::max)
    }

    pub fn mean(&self) -> Complex64 {
        let s: Complex64 = self.values.iter().sum();
        s / self.values.len() as f64
    }

    fn zip_with(&self, other: &GridFunction, f: impl Fn(Complex64, Complex64) -> Complex64) -> GridFunction {
        assert_eq!(self.n, other.n);
        GridFunction {
            n: self.n,
            values: self.values.iter().zip(&other.values).map(|(a, b)| f(*a, *b)).collect(),
        }
    }

    pub fn sub(&self, other: &GridFunction) -> GridFunction {
        self.zip_with(other, |a, b| a - b)
    }
}

impl TorusGrid {
    pub fn new(n: usize) -> Result<TorusGrid, TorusError> {
        if n < 8 || n % 2 != 0 {
            return Err(TorusError::BadResolution(n));
        }
        Ok(TorusGrid { n })
    }

    pub fn resolution(&self) -> usize {
        self.n
    }

    /// Samples `f(x, y)` on the grid.
    pub fn sample(&self, f: impl Fn(f64, f64) -> Complex64) -> GridFunction {
        let n = self.n;
        let mut values = Vec::with_capacity(n * n);
        for i in 0..n {
            for j in 0..n {
                values.push(f(i as f64 / n as f64, j as f64 / n as f64));
            }
        }
        GridFunction { n, values }
    }

    pub fn sample_real(&self, f: impl Fn(f64, f64) -> f64) -> GridFunction {
        self.sample(|x, y| Complex64::new(f(x, y), 0.0))
    }

    fn check(&self, f: &GridFunction) -> Result<(), TorusError> {
        if f.n != self.n {
            return Err(TorusError::GridMismatch { expected: self.n, got: f.n });
        }
        Ok(())
    }

    /// Signed frequency of bin `k`.
    fn freq(&self, k: usize) -> f64 {
        if k <= self.n / 2 {
            k as f64
        } else {
            k as f64 - self.n as f64
        }
    }

    /// Applies a Fourier multiplier `m(k, l)`.
    fn multiplier(&self, f: &GridFunction, m: impl Fn(f64, f64) -> Complex64) -> GridFunction {
        let n = self.n;
        let mut hat = f.values.clone();
        fft2(&mut hat, n, false);
        for i in 0..n {
            let k = self.freq(i);
            for j in 0..n {
                let l = self.freq(j);
                hat[i * n + j] *= m(k, l);
            }
        }
        fft2(&mut hat, n, true);
        let scale = 1.0 / (n * n) as f64;
        for v in &mut hat {
            *v *= scale;
        }
        GridFunction { n, values: hat }
    }

    /// `∂/∂z = (∂_x - i ∂_y)/2`: multiplier `π(l + i k)` on mode `(k,l)`.
    fn d_z(&self, f: &GridFunction) -> GridFunction {
        self.multiplier(f, |k, l| Complex64::new(std::f64::consts::PI * l, std::f64::consts::PI * k))
    }

    /// `∂/∂z̄ = (∂_x + i ∂_y)/2`: multiplier `π(-l + i k)`.
    fn d_zbar(&self, f: &GridFunction) -> GridFunction {
        self.multiplier(f, |k, l| Complex64::new(-std::f64::consts::PI * l, std::f64::consts::PI * k))
    }

    /// `del f = (∂f/∂z)·dz`.
    pub fn del(&self, f: &GridFunction) -> Result<Form10, TorusError> {
        self.check(f)?;
        Ok(Form10(self.d_z(f)))
    }

    /// `delbar f = (∂f/∂z̄)·dz̄`.
    pub fn delbar(&self, f: &GridFunction) -> Result<Form01, TorusError> {
        self.check(f)?;
        Ok(Form01(self.d_zbar(f)))
    }

    /// `del` of a `(0,1)`-form: `del(g dz̄) = (∂g/∂z)·dz∧dz̄`.
    pub fn del_01(&self, g: &Form01) -> Result<Form11, TorusError> {
        self.check(&g.0)?;
        Ok(Form11(self.d_z(&g.0)))
    }

    /// `delbar` of a `(1,0)`-form: `delbar(g dz) = -(∂g/∂z̄)·dz∧dz̄`.
    pub fn delbar_10(&self, g: &Form10) -> Result<Form11, TorusError> {
        self.check(&g.0)?;
        let d = self.d_zbar(&g.0);
        Ok(Form11(GridFunction { n: d.n, values: d.values.into_iter().map(|v| -v).collect() }))
    }

    /// `i·del·delbar f` as a `(1,1)`-form.
    pub fn i_del_delbar(&self, f: &GridFunction) -> Result<Form11, TorusError> {
        self.check(f)?;
        let ddbar = self.d_z(&self.d_zbar(f));
        Ok(Form11(GridFunction {
            n: ddbar.n,
            values: ddbar.values.into_iter().map(|v| Complex64::new(0.0, 1.0) * v).collect(),
        }))
    }

    /// `∫ h·dz∧dz̄ = -2i · mean(h)` on the unit-area torus.
    pub fn integrate_form11(&self, rho: &Form11) -> Result<Complex64, TorusError> {
        self.check(&rho.0)?;
        Ok(Complex64::new(0.0, -2.0) * rho.0.mean())
    }

    /// `∫ F·rho` for a function `F` and a `(1,1)`-form `rho`.
    pub fn integrate_f_form11(&self, f: &GridFunction, rho: &Form11) -> Result<Complex64, TorusError> {
        self.check(f)?;
        self.check(&rho.0)?;
        let prod = f.zip_with(&rho.0, |a, b| a * b);
        Ok(Complex64::new(0.0, -2.0) * prod.mean())
    }

    /// Dirichlet pairing `⟨a, b⟩_D = i ∫ a ∧ b̄` of `(1,0)`-forms: with the
    /// fixed conventions this is `2·mean(f·conj(g))`.
    pub fn dirichlet_pairing(&self, a: &Form10, b: &Form10) -> Result<Complex64, TorusError> {
        self.check(&a.0)?;
        self.check(&b.0)?;
        let prod = a.0.zip_with(&b.0, |x, y| x * y.conj());
        Ok(2.0 * prod.mean())
    }

    /// Solves `i·del·delbar F = rho` for the unique zero-mean `F`.
    /// Rejects right-hand sides with nonzero integral.
    pub fn solve_i_ddbar(&self, rho: &Form11) -> Result<GridFunction, TorusError> {
        self.check(&rho.0)?;
        let integral = self.integrate_form11(rho)?;
        let tolerance = tolerances::MEAN_TOL * rho.0.max_abs().max(f64::MIN_POSITIVE);
        if integral.norm() > tolerance {
            return Err(TorusError::NonzeroMean { integral: integral.norm(), tolerance });
        }
        let n = self.n;
        let mut hat = rho.0.values.clone();
        fft2(&mut hat, n, false);
        let pi2 = std::f64::consts::PI * std::f64::consts::PI;
        for i in 0..n {
            let k = self.freq(i);
            for j in 0..n {
                let l = self.freq(j);
                let idx = i * n + j;
                if i == 0 && j == 0 {
                    hat[idx] = Complex64::new(0.0, 0.0); // zero-mean gauge
                } else {
                    // i·del·delbar multiplier is -i·π²(k² + l²)
                    hat[idx] /= Complex64::new(0.0, -pi2 * (k * k + l * l));
                }
            }
        }
        fft2(&mut hat, n, true);
        let scale = 1.0 / (n * n) as f64;
        for v in &mut hat {
            *v *= scale;
        }
        Ok(GridFunction { n, values: hat })
    }

    /// Relative max-norm residual of `i·del·delbar F - rho`.
    pub fn solve_residual(&self, f: &GridFunction, rho: &Form11) -> Result<f64, TorusError> {
        let applied = self.i_del_delbar(f)?;
        let diff = applied.0.sub(&rho.0);
        Ok(diff.max_abs() / rho.0.max_abs().max(f64::MIN_POSITIVE))
    }

    /// Solves for `F` and evaluates the integration-by-parts identity
    /// `∫ F·rho = -⟨∂F, ∂F⟩_D`.
    pub fn ibp_identity_check(&self, rho: &Form11) -> Result<IbpReport, TorusError> {
        let f = self.solve_i_ddbar(rho)?;
        let solve_residual = self.solve_residual(&f, rho)?;
        let df = self.del(&f)?;
        let energy = self.dirichlet_pairing(&df, &df)?;
        let pairing = self.integrate_f_form11(&f, rho)?;
        let lhs = pairing + energy;
        let residual = lhs.norm() / energy.re.abs().max(1.0);
        Ok(IbpReport {
            residual,
            solve_residual,
            dirichlet_energy: energy.re,
            energy_imag: energy.im.abs(),
            f_max_imag: f.max_imag(),
        })
    }
}

/// Diagnostics of one integration-by-parts check.
#[derive(Debug, Clone, PartialEq)]
pub struct IbpReport {
    /// `|∫F·rho + ⟨∂F,∂F⟩_D| / max(1, ⟨∂F,∂F⟩_D)`
    pub residual: f64,
    /// relative residual of the spectral solve itself
    pub solve_residual: f64,
    /// `⟨∂F,∂F⟩_D`, strictly positive for nonzero real data
    pub dirichlet_energy: f64,
    pub energy_imag: f64,
    /// imaginary contamination of `F` (should vanish for real `rho`)
    pub f_max_imag: f64,
}

/// Deterministic band-limited real `(1,1)`-form with zero integral:
/// `rho = i·w·dz∧dz̄` for a random real trigonometric polynomial `w` with
/// frequencies bounded by `band`. Built in the spectral domain and
/// symmetrized, so reality is exact.
pub fn random_real_form11(grid: &TorusGrid, band: usize, seed: u64) -> Form11 {
    let n = grid.resolution();
    assert!(band >= 1 && band <= n / 4, "band must stay below the Nyquist safety margin");
    let mut rng = Splitmix(seed);
    let b = band as f64;
    let mut hat = vec![Complex64::new(0.0, 0.0); n * n];
    for i in 0..n {
        let k = grid.freq(i);
        for j in 0..n {
            let l = grid.freq(j);
            if (k == 0.0 && l == 0.0) || k.abs() > b || l.abs() > b {
                continue;
            }
            hat[i * n + j] = Complex64::new(rng.unit() - 0.5, rng.unit() - 0.5);
        }
    }
    // w_hat(k) = (hat(k) + conj(hat(-k)))/2 makes the samples exactly real
    let mut sym = vec![Complex64::new(0.0, 0.0); n * n];
    for i in 0..n {
        for j in 0..n {
            let (i2, j2) = ((n - i) % n, (n - j) % n);
            sym[i * n + j] = 0.5 * (hat[i * n + j] + hat[i2 * n + j2].conj());
        }
    }
    fft2(&mut sym, n, true);
    let scale = 1.0 / n as f64;
    let values = sym.into_iter().map(|v| Complex64::new(0.0, v.re * scale)).collect();
    Form11(GridFunction { n, values })
}

struct Splitmix(u64);

impl Splitmix {
    fn next_u64(&mut self) -> u64 {
        self.0 = self.0.wrapping_add(0x9E37_79B9_7F4A_7C15);
        let mut z = self.0;
        z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
        z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
        z ^ (z >> 31)
    }

    fn unit(&mut self) -> f64 {
        (self.next_u64() >> 11) as f64 / (1u64 << 53) as f64
    }
}

fn fft2(values: &mut [Complex64], n: usize, inverse: bool) {
    let mut planner = FftPlanner::new();
    let fft = if inverse { planner.plan_fft_inverse(n) } else { planner.plan_fft_forward(n) };
    for row in values.chunks_exact_mut(n) {
        fft.process(row);
    }
    transpose(values, n);
    for row in values.chunks_exact_mut(n) {
        fft.process(row);
    }
    transpose(values, n);
}

fn transpose(values: &mut [Complex64], n: usize) {
    for i in 0..n {
        for j in (i + 1)..n {
            values.swap(i * n + j, j * n + i);
        }
    }
}
