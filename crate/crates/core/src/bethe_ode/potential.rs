//! Schrödinger image `−ψ″ + V(x)ψ = Eψ` of the Bethe ODE.
//!
//! With `u(x) = (Ω/2A)(cos √A x − 1)` and `ψ = e^{f} G(u(x))`, the gauge
//! exponent obeys `2f′u′ + u″ + b(u) = 0` and `V = c(u) + f″ + f′²`. The
//! closed forms below use `h = √A x / 2` and stay finite as `A → 0`.

use num_complex::Complex64;

use super::BetheRoots;
use crate::error::{Error, Result};
use crate::model::{abc_coefficients, AbcCoefficients, Sector};

/// `u(x)`, written as `−(Ω/A) sin²(√A x/2)` to avoid cancellation.
pub fn substitution_u(x: f64, a_coef: f64, omega: f64) -> f64 {
    let h = 0.5 * a_coef.sqrt() * x;
    -(omega / a_coef) * h.sin().powi(2)
}

struct Trig {
    sqrt_a: f64,
    s: f64,
    h: f64,
}

fn trig(x: f64, a_coef: f64) -> Result<Trig> {
    if !(a_coef > 0.0) {
        return Err(Error::Domain(format!(
            "trigonometric potential needs A > 0, got {a_coef}"
        )));
    }
    let sqrt_a = a_coef.sqrt();
    let s = sqrt_a * x;
    if s.sin().abs() < 1e-12 {
        return Err(Error::Singular(x));
    }
    Ok(Trig { sqrt_a, s, h: 0.5 * s })
}

/// `f′` and `f″`.
fn gauge_derivatives(t: &Trig, abc: &AbcCoefficients, omega: f64, j: f64) -> (f64, f64) {
    let a = abc.a_coef;
    let b = abc.b_coef;
    let (sh, ch) = t.h.sin_cos();
    let (ss, cs) = t.s.sin_cos();
    let w2 = omega * omega;
    let d1 = -w2 * sh.powi(3) / (2.0 * a * t.sqrt_a * ch) - b / (2.0 * t.sqrt_a) * (sh / ch)
        + t.sqrt_a * ((j + 1.0) / ss - 0.5 * cs / ss);
    let d2 = -w2 / (4.0 * a) * (3.0 * sh * sh + sh.powi(4) / (ch * ch)) - 0.25 * b / (ch * ch)
        + a * (-(j + 1.0) * cs / (ss * ss) + 0.5 / (ss * ss));
    (d1, d2)
}

/// Trigonometric potential for `A > 0`. Singular where `√A x ∈ πℤ`.
pub fn potential_general(x: f64, abc: &AbcCoefficients, omega: f64, sector: &Sector) -> Result<f64> {
    let t = trig(x, abc.a_coef)?;
    let j = sector.j_imbalance() as f64;
    let (d1, d2) = gauge_derivatives(&t, abc, omega, j);
    let u = -(omega / abc.a_coef) * t.h.sin().powi(2);
    let c = omega * sector.m() as f64 * u + abc.c_coef;
    Ok(c + d2 + d1 * d1)
}

/// Gauge exponent `f(x)`, fixed by `f(π/(2√A)) = 0`.
pub fn gauge_exponent(x: f64, abc: &AbcCoefficients, omega: f64, sector: &Sector) -> Result<f64> {
    let t = trig(x, abc.a_coef)?;
    let j = sector.j_imbalance() as f64;
    let a = abc.a_coef;
    let b = abc.b_coef;
    let prim = |s: f64| {
        let ch = (0.5 * s).cos();
        let lc = ch.abs().ln();
        -(omega * omega / (a * a)) * (-lc + 0.5 * ch * ch) + (b / a) * lc + (j + 1.0) * (0.5 * s).tan().abs().ln()
            - 0.5 * s.sin().abs().ln()
    };
    Ok(prim(t.s) - prim(std::f64::consts::FRAC_PI_2))
}

/// `ψ(x) = e^{f(x)} Π (u(x) − u_q)` for `A > 0`.
pub fn wavefunction_general(x: f64, roots: &BetheRoots) -> Result<Complex64> {
    let abc = abc_coefficients(&roots.params, &roots.sector);
    let f = gauge_exponent(x, &abc, roots.params.omega, &roots.sector)?;
    let u = substitution_u(x, abc.a_coef, roots.params.omega);
    let g: Complex64 = roots.roots.iter().map(|r| u - r).product();
    Ok(g * f.exp())
}

/// `A → 0` limit:
/// `C − B(J+1)/2 + (J²−¼)x⁻² + (B²/16 − Ω²(N+2)/8)x² + Ω²Bx⁴/32 + Ω⁴x⁶/256`.
pub fn potential_a0(x: f64, b_coef: f64, c_coef: f64, omega: f64, n_total: usize, j_imbalance: usize) -> Result<f64> {
    if !(x > 0.0) {
        return Err(Error::Domain(format!("potential needs x > 0, got {x}")));
    }
    let (n, j) = (n_total as f64, j_imbalance as f64);
    let w2 = omega * omega;
    let x2 = x * x;
    Ok(c_coef - b_coef * (j + 1.0) / 2.0
        + (j * j - 0.25) / x2
        + (b_coef * b_coef / 16.0 - w2 * (n + 2.0) / 8.0) * x2
        + w2 * b_coef * x2 * x2 / 32.0
        + w2 * w2 * x2 * x2 * x2 / 256.0)
}

/// The no-scattering potential
/// `μ(N+1)/2 + (J²−¼)x⁻² + (μ² − 2Ω²(N+2))x²/16 − μΩ²x⁴/32 + Ω⁴x⁶/256`.
pub fn potential_no_scatter(x: f64, mu: f64, omega: f64, n_total: usize, j_imbalance: usize) -> Result<f64> {
    if !(x > 0.0) {
        return Err(Error::Domain(format!("potential needs x > 0, got {x}")));
    }
    let (n, j) = (n_total as f64, j_imbalance as f64);
    let w2 = omega * omega;
    let x2 = x * x;
    Ok(
        mu * (n + 1.0) / 2.0 + (j * j - 0.25) / x2 + (mu * mu - 2.0 * w2 * (n + 2.0)) * x2 / 16.0
            - mu * w2 * x2 * x2 / 32.0
            + w2 * w2 * x2 * x2 * x2 / 256.0,
    )
}

/// `x^{J+½} exp(−Ω²x⁴/64 + μx²/8) Π(−Ωx²/4 − u_p)`.
pub fn wavefunction_no_scatter(
    x: f64,
    roots: &BetheRoots,
    mu: f64,
    omega: f64,
    j_imbalance: usize,
) -> Result<Complex64> {
    if !(x > 0.0) {
        return Err(Error::Domain(format!("wavefunction needs x > 0, got {x}")));
    }
    let x2 = x * x;
    let u = -omega * x2 / 4.0;
    let g: Complex64 = roots.roots.iter().map(|r| u - r).product();
    let envelope = ((j_imbalance as f64 + 0.5) * x.ln() - omega * omega * x2 * x2 / 64.0 + mu * x2 / 8.0).exp();
    Ok(g * envelope)
}
