//! Bethe ansatz for the sector eigenproblem and its one-body image.
//!
//! An eigenvector with energy `E` is encoded by the monic polynomial
//! `G(u) = Σ ρ_j u^{m−j}`, which solves
//!
//! ```text
//! (Au² + Ωu) G″ + (Bu + Ω(l−m+1−u²)) G′ + (Ωmu + C) G = E G
//! ```
//!
//! Its roots obey the Bethe equations
//! `b(u_q)/a(u_q) = Σ_{p≠q} 2/(u_p − u_q)` and give
//! `E = A m(m−1) + B m + C − Ω Σ u_q`.

mod fd;
mod potential;
mod sextic;

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::model::{abc_coefficients, AbcCoefficients, ModelParams, Sector};
use crate::spectral::rho_coefficients;

pub use fd::{fd_schrodinger, fd_schrodinger_regularized, FdSpectrum};
pub use potential::{
    gauge_exponent, potential_a0, potential_general, potential_no_scatter, substitution_u, wavefunction_general,
    wavefunction_no_scatter,
};
pub use sextic::{
    critical_point_analysis, degenerate_quadratic_coupling, threshold_correction, threshold_exact, CriticalPointReport,
    SexticPotential, StationaryPoint,
};

/// Largest `m` accepted by [`polynomial_g`].
pub const POLYNOMIAL_MAX_M: usize = 100;

/// Roots closer than this (relative) are reported as repeated.
pub const REPEATED_ROOT_TOL: f64 = 1e-8;

/// `a(u) = a2 u² + a1 u + a0`, `b(u) = b2 u² + b1 u + b0`, `c(u) = c1 u + c0`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OdeCoefficients {
    pub a2: f64,
    pub a1: f64,
    pub a0: f64,
    pub b2: f64,
    pub b1: f64,
    pub b0: f64,
    pub c1: f64,
    pub c0: f64,
}

impl OdeCoefficients {
    pub fn new(abc: &AbcCoefficients, omega: f64, sector: &Sector) -> Self {
        let (l, m) = (sector.l() as f64, sector.m() as f64);
        OdeCoefficients {
            a2: abc.a_coef,
            a1: omega,
            a0: 0.0,
            b2: -omega,
            b1: abc.b_coef,
            b0: omega * (l - m + 1.0),
            c1: omega * m,
            c0: abc.c_coef,
        }
    }

    pub fn from_params(params: &ModelParams, sector: &Sector) -> Self {
        Self::new(&abc_coefficients(params, sector), params.omega, sector)
    }

    pub fn a(&self, u: Complex64) -> Complex64 {
        (u * self.a2 + self.a1) * u + self.a0
    }

    pub fn b(&self, u: Complex64) -> Complex64 {
        (u * self.b2 + self.b1) * u + self.b0
    }

    pub fn c(&self, u: Complex64) -> Complex64 {
        u * self.c1 + self.c0
    }

    fn da(&self, u: Complex64) -> Complex64 {
        u * (2.0 * self.a2) + self.a1
    }

    fn db(&self, u: Complex64) -> Complex64 {
        u * (2.0 * self.b2) + self.b1
    }

    /// `a G″ + b G′ + (c − E) G` for the polynomial with coefficients
    /// `rho` (leading first), together with the sum of the magnitudes of
    /// the individual terms as a scale.
    pub fn residual(&self, rho: &[f64], e: f64, u: Complex64) -> (Complex64, f64) {
        let (g, dg, ddg) = horner2(rho, u);
        let terms = [self.a(u) * ddg, self.b(u) * dg, self.c(u) * g, -g * e];
        let scale = terms.iter().map(|t| t.norm()).sum();
        (terms.iter().sum(), scale)
    }
}

/// `G`, `G′`, `G″` at `u` for coefficients stored leading first.
fn horner2(coeffs: &[f64], u: Complex64) -> (Complex64, Complex64, Complex64) {
    let zero = Complex64::new(0.0, 0.0);
    let (mut p, mut dp, mut ddp) = (zero, zero, zero);
    for &c in coeffs {
        ddp = ddp * u + dp * 2.0;
        dp = dp * u + p;
        p = p * u + c;
    }
    (p, dp, ddp)
}

/// Coefficients `ρ_0 = 1, ρ_1, …, ρ_m` of `G(u)` at energy `e`.
pub fn polynomial_g(params: &ModelParams, sector: &Sector, e: f64) -> Result<Vec<f64>> {
    if sector.m() > POLYNOMIAL_MAX_M {
        return Err(Error::SectorTooLarge {
            m: sector.m(),
            limit: POLYNOMIAL_MAX_M,
        });
    }
    rho_coefficients(params, sector, e)
}

#[derive(Debug, Clone, PartialEq)]
pub struct BetheRoots {
    pub roots: Vec<Complex64>,
    /// `A m(m−1) + B m + C − Ω Σ u_q`; the imaginary part of the root sum is
    /// dropped (it vanishes for conjugate-closed root sets).
    pub energy: f64,
    /// The energy the roots were computed for.
    pub input_energy: f64,
    pub sector: Sector,
    pub params: ModelParams,
}

impl BetheRoots {
    /// `|b(u_q)/a(u_q) − Σ_{p≠q} 2/(u_p − u_q)|` per root.
    pub fn bae_residuals(&self) -> Vec<f64> {
        let ode = OdeCoefficients::from_params(&self.params, &self.sector);
        bae_residuals(&ode, &self.roots)
    }

    /// Roots whose imaginary part is below `tol·(1 + |u|)`.
    pub fn real_root_count(&self, tol: f64) -> usize {
        self.roots
            .iter()
            .filter(|u| u.im.abs() <= tol * (1.0 + u.norm()))
            .count()
    }

    /// Imaginary part of `Σ u_q`.
    pub fn root_sum_imag(&self) -> f64 {
        self.roots.iter().map(|u| u.im).sum()
    }
}

fn bae_residuals(ode: &OdeCoefficients, roots: &[Complex64]) -> Vec<f64> {
    roots
        .iter()
        .enumerate()
        .map(|(q, &uq)| {
            let sum: Complex64 = roots
                .iter()
                .enumerate()
                .filter(|&(p, _)| p != q)
                .map(|(_, &up)| 2.0 / (up - uq))
                .sum();
            (ode.b(uq) / ode.a(uq) - sum).norm()
        })
        .collect()
}

/// Bethe roots for the eigenvalue `e`: companion-matrix roots of `G(u)`
/// polished by Newton iteration on the Bethe equations.
pub fn bethe_roots(params: &ModelParams, sector: &Sector, e: f64) -> Result<BetheRoots> {
    let rho = polynomial_g(params, sector, e)?;
    let ode = OdeCoefficients::from_params(params, sector);
    let seeds = polynomial_roots(&rho)?;
    let roots = refine(&ode, seeds)?;
    check_distinct(&roots)?;
    let abc = abc_coefficients(params, sector);
    let m = sector.m() as f64;
    let sum: Complex64 = roots.iter().sum();
    let energy = abc.a_coef * m * (m - 1.0) + abc.b_coef * m + abc.c_coef - params.omega * sum.re;
    Ok(BetheRoots {
        roots,
        energy,
        input_energy: e,
        sector: *sector,
        params: *params,
    })
}

fn check_distinct(roots: &[Complex64]) -> Result<()> {
    for (i, a) in roots.iter().enumerate() {
        for b in &roots[i + 1..] {
            if (a - b).norm() <= REPEATED_ROOT_TOL * (1.0 + a.norm().max(b.norm())) {
                return Err(Error::RepeatedRoots {
                    a: format!("{a}"),
                    b: format!("{b}"),
                });
            }
        }
    }
    Ok(())
}

/// Roots of the monic polynomial with coefficients `rho` (leading first).
pub fn polynomial_roots(rho: &[f64]) -> Result<Vec<Complex64>> {
    let m = rho.len().saturating_sub(1);
    match m {
        0 => return Ok(Vec::new()),
        1 => return Ok(vec![Complex64::new(-rho[1] / rho[0], 0.0)]),
        _ => {}
    }
    // u = σv with σ chosen so the rescaled coefficients are of order one
    let sigma = (1..=m)
        .map(|j| (rho[j] / rho[0]).abs().powf(1.0 / j as f64))
        .fold(0.0, f64::max)
        .max(f64::MIN_POSITIVE);
    let mut comp = DMatrix::<f64>::zeros(m, m);
    for j in 0..m {
        comp[(0, j)] = -rho[j + 1] / (rho[0] * sigma.powi(j as i32 + 1));
    }
    for i in 1..m {
        comp[(i, i - 1)] = 1.0;
    }
    balance(&mut comp);
    let eig = comp.complex_eigenvalues().iter().map(|v| v * sigma).collect::<Vec<_>>();
    if eig.iter().any(|v| !v.re.is_finite() || !v.im.is_finite()) {
        return Err(Error::NoConvergence { index: 0 });
    }
    // one Newton step on G itself tightens the eigenvalue solver's output
    Ok(eig
        .into_iter()
        .map(|u| {
            let (g, dg, _) = horner2(rho, u);
            if dg.norm() > 0.0 {
                let next = u - g / dg;
                if next.re.is_finite() && next.im.is_finite() {
                    return next;
                }
            }
            u
        })
        .collect())
}

/// Diagonal similarity scaling by powers of two that equalises row and
/// column norms.
fn balance(a: &mut DMatrix<f64>) {
    let n = a.nrows();
    let radix = 2.0;
    let mut done = false;
    while !done {
        done = true;
        for i in 0..n {
            let mut c = 0.0;
            let mut r = 0.0;
            for j in 0..n {
                if j != i {
                    c += a[(j, i)].abs();
                    r += a[(i, j)].abs();
                }
            }
            if c == 0.0 || r == 0.0 {
                continue;
            }
            let s = c + r;
            let mut f = 1.0;
            let mut g = r / radix;
            while c < g {
                f *= radix;
                c *= radix * radix;
            }
            g = r * radix;
            while c >= g {
                f /= radix;
                c /= radix * radix;
            }
            if (c + r) / f < 0.95 * s {
                done = false;
                for j in 0..n {
                    a[(i, j)] /= f;
                    a[(j, i)] *= f;
                }
            }
        }
    }
}

/// `F_q = b(u_q) − a(u_q) Σ_{p≠q} 2/(u_p − u_q)`.
fn cleared_residual(ode: &OdeCoefficients, u: &[Complex64]) -> Vec<Complex64> {
    (0..u.len())
        .map(|q| {
            let s: Complex64 = (0..u.len()).filter(|&p| p != q).map(|p| 2.0 / (u[p] - u[q])).sum();
            ode.b(u[q]) - ode.a(u[q]) * s
        })
        .collect()
}

fn norm_inf(v: &[Complex64]) -> f64 {
    v.iter().map(|c| c.norm()).fold(0.0, f64::max)
}

fn refine(ode: &OdeCoefficients, mut u: Vec<Complex64>) -> Result<Vec<Complex64>> {
    let m = u.len();
    if m == 0 {
        return Ok(u);
    }
    let mut f = cleared_residual(ode, &u);
    let initial = norm_inf(&f);
    let mut best = (initial, u.clone());
    for _ in 0..30 {
        let mut jac = DMatrix::<Complex64>::zeros(m, m);
        for q in 0..m {
            let mut s = Complex64::new(0.0, 0.0);
            let mut s2 = Complex64::new(0.0, 0.0);
            for p in 0..m {
                if p == q {
                    continue;
                }
                let inv = 1.0 / (u[p] - u[q]);
                s += 2.0 * inv;
                s2 += 2.0 * inv * inv;
                jac[(q, p)] = ode.a(u[q]) * 2.0 * inv * inv;
            }
            jac[(q, q)] = ode.db(u[q]) - ode.da(u[q]) * s - ode.a(u[q]) * s2;
        }
        let rhs = DVector::from_iterator(m, f.iter().map(|v| -v));
        let Some(step) = jac.lu().solve(&rhs) else {
            break;
        };
        let mut next = u.clone();
        for (x, d) in next.iter_mut().zip(step.iter()) {
            *x += d;
        }
        let fn_next = cleared_residual(ode, &next);
        let r = norm_inf(&fn_next);
        if !r.is_finite() {
            break;
        }
        let small_step = norm_inf(step.as_slice()) <= 1e-15 * (1.0 + norm_inf(&u));
        u = next;
        f = fn_next;
        if r < best.0 {
            best = (r, u.clone());
        }
        if small_step || r == 0.0 {
            break;
        }
    }
    if !best.0.is_finite() || best.0 > initial.max(f64::MIN_POSITIVE) {
        return Err(Error::RefinementDiverged { residual: best.0 });
    }
    Ok(best.1)
}
