//! Stationary points of `V(x) = 𝒜x⁻² + 𝓑x² + 𝒞x⁴ + 𝒟x⁶` on `x > 0`.
//!
//! With `y = x²`, `V′(x) = 2x⁻³ h(y)` where
//! `h(y) = 3𝒟y⁴ + 2𝒞y³ + 𝓑y² − 𝒜`. For `𝒞, 𝒟 > 0` the only interior
//! extremum of `h` sits at `y* = (−3𝒞 + √(9𝒞² − 24𝓑𝒟))/(12𝒟)` (present when
//! `𝓑 < 0`), so `h` is monotone on `(0, y*)` and `(y*, ∞)`.

use crate::error::{Error, Result};
use crate::numeric::bisect;
use crate::semiclassical::Character;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SexticPotential {
    pub centrifugal: f64,
    pub quadratic: f64,
    pub quartic: f64,
    pub sextic: f64,
    pub offset: f64,
}

impl SexticPotential {
    /// The `A → 0` potential for given `B`, `C`.
    pub fn a0(b_coef: f64, c_coef: f64, omega: f64, n_total: usize, j_imbalance: usize) -> Self {
        let (n, j) = (n_total as f64, j_imbalance as f64);
        let w2 = omega * omega;
        SexticPotential {
            centrifugal: j * j - 0.25,
            quadratic: b_coef * b_coef / 16.0 - w2 * (n + 2.0) / 8.0,
            quartic: w2 * b_coef / 32.0,
            sextic: w2 * w2 / 256.0,
            offset: c_coef - b_coef * (j + 1.0) / 2.0,
        }
    }

    /// The no-scattering potential (`B = −μ`, `C = mμ`).
    pub fn no_scattering(mu: f64, omega: f64, n_total: usize, j_imbalance: usize) -> Self {
        let m = (n_total - j_imbalance) / 2;
        Self::a0(-mu, m as f64 * mu, omega, n_total, j_imbalance)
    }

    pub fn value(&self, x: f64) -> f64 {
        let y = x * x;
        self.offset + self.centrifugal / y + y * (self.quadratic + y * (self.quartic + y * self.sextic))
    }

    pub fn derivative(&self, x: f64) -> f64 {
        let y = x * x;
        -2.0 * self.centrifugal / (y * x)
            + x * (2.0 * self.quadratic + y * (4.0 * self.quartic + 6.0 * self.sextic * y))
    }

    pub fn second_derivative(&self, x: f64) -> f64 {
        let y = x * x;
        6.0 * self.centrifugal / (y * y) + 2.0 * self.quadratic + y * (12.0 * self.quartic + 30.0 * self.sextic * y)
    }

    /// Sum of the magnitudes of the terms of `V′(x)`.
    pub fn derivative_scale(&self, x: f64) -> f64 {
        let y = x * x;
        (2.0 * self.centrifugal / (y * x)).abs()
            + (2.0 * self.quadratic * x).abs()
            + (4.0 * self.quartic * x * y).abs()
            + (6.0 * self.sextic * x * y * y).abs()
    }

    fn h(&self, y: f64) -> f64 {
        y * y * (self.quadratic + y * (2.0 * self.quartic + 3.0 * self.sextic * y)) - self.centrifugal
    }

    fn h_scale(&self, y: f64) -> f64 {
        let y2 = y * y;
        (3.0 * self.sextic * y2 * y2).abs()
            + (2.0 * self.quartic * y2 * y).abs()
            + (self.quadratic * y2).abs()
            + self.centrifugal.abs()
    }

    /// Interior extremum `y*` of `h`, when `𝓑 < 0`.
    fn y_star(&self) -> Option<f64> {
        let (c, d) = (self.quartic, self.sextic);
        if self.quadratic >= 0.0 {
            return None;
        }
        let disc = 9.0 * c * c - 24.0 * self.quadratic * d;
        Some((-3.0 * c + disc.sqrt()) / (12.0 * d))
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StationaryPoint {
    pub x: f64,
    pub value: f64,
    pub kind: Character,
}

#[derive(Debug, Clone, PartialEq)]
pub struct CriticalPointReport {
    /// Stationary points with `x > 0`, ascending in `x`.
    pub points: Vec<StationaryPoint>,
    /// A degenerate stationary point (`V′ = V″ = 0`) exists.
    pub bifurcation: bool,
    /// Its location, `0` for the `𝒜 = 𝓑 = 0` origin case.
    pub degenerate_x: Option<f64>,
}

/// Relative size of `h(y*)` treated as a double root.
const DEGENERATE_TOL: f64 = 1e-12;

pub fn critical_point_analysis(p: &SexticPotential) -> Result<CriticalPointReport> {
    if !(p.quartic > 0.0 && p.sextic > 0.0) {
        return Err(Error::Domain(format!(
            "critical-point analysis needs positive quartic and sextic terms, got {} and {}",
            p.quartic, p.sextic
        )));
    }
    let mut ys = Vec::new();
    let mut degenerate_x = None;
    if p.centrifugal == 0.0 && p.quadratic == 0.0 {
        degenerate_x = Some(0.0);
    }
    let top = upper_bracket(p);
    match p.y_star() {
        None => {
            if p.h(0.0) < 0.0 {
                ys.push(bisect(|y| p.h(y), 0.0, top, 0.0));
            }
        }
        Some(ys_) => {
            let hs = p.h(ys_);
            if hs.abs() <= DEGENERATE_TOL * p.h_scale(ys_) {
                degenerate_x = Some(ys_.sqrt());
                ys.push(ys_);
            } else {
                let h0 = p.h(0.0);
                if h0 > 0.0 && hs < 0.0 {
                    ys.push(bisect(|y| p.h(y), 0.0, ys_, 0.0));
                }
                if hs < 0.0 {
                    ys.push(bisect(|y| p.h(y), ys_, top.max(2.0 * ys_), 0.0));
                }
            }
        }
    }
    let points = ys
        .into_iter()
        .filter(|&y| y > 0.0)
        .map(|y| {
            let x = y.sqrt();
            let v2 = p.second_derivative(x);
            let kind = if Some(x) == degenerate_x {
                Character::Degenerate
            } else if v2 > 0.0 {
                Character::Minimum
            } else {
                Character::Maximum
            };
            StationaryPoint {
                x,
                value: p.value(x),
                kind,
            }
        })
        .collect();
    Ok(CriticalPointReport {
        points,
        bifurcation: degenerate_x.is_some(),
        degenerate_x,
    })
}

/// A `y` with `h(y) > 0` beyond every root.
fn upper_bracket(p: &SexticPotential) -> f64 {
    let mut y = p.y_star().unwrap_or(1.0).max(1.0);
    while p.h(y) <= 0.0 {
        y *= 2.0;
    }
    y
}

/// Quadratic coefficient `𝓑 < 0` at which the two stationary points merge,
/// with the merger location `x`. Needs `𝒜 < 0` (a double root at the
/// origin when `𝒜 = 0`); `None` for `𝒜 > 0`.
///
/// `h(y*)` increases monotonically with `𝓑` (its `𝓑`-derivative is
/// `y*² > 0`), so the root is bracketed and bisected;
/// `3(𝒜𝒞²)^{1/3}` only seeds the bracket.
pub fn degenerate_quadratic_coupling(centrifugal: f64, quartic: f64, sextic: f64) -> Option<(f64, f64)> {
    if centrifugal > 0.0 {
        return None;
    }
    if centrifugal == 0.0 {
        return Some((0.0, 0.0));
    }
    let at = |b: f64| {
        let p = SexticPotential {
            centrifugal,
            quadratic: b,
            quartic,
            sextic,
            offset: 0.0,
        };
        let y = p.y_star().expect("quadratic coefficient is negative");
        (p.h(y), y)
    };
    let seed = 3.0 * (centrifugal * quartic * quartic).cbrt();
    let mut lo = seed;
    while at(lo).0 >= 0.0 {
        lo *= 2.0;
    }
    let mut hi = 0.5 * seed;
    while at(hi).0 < 0.0 {
        hi *= 0.5;
    }
    let b = bisect(|b| at(b).0, lo, hi, 0.0);
    Some((b, at(b).1.sqrt()))
}

/// Leading quantum correction to the classical threshold,
/// `μ* = −Ω√(2(N+2)) + (3Ω/2)(2(N+2))^{−1/6}`.
pub fn threshold_correction(n_total: usize, omega: f64) -> f64 {
    let t = 2.0 * (n_total as f64 + 2.0);
    -omega * t.sqrt() + 1.5 * omega * t.powf(-1.0 / 6.0)
}

/// `μ < 0` at which the no-scattering potential acquires a degenerate
/// stationary point, solved without the small-`𝓑` approximation.
pub fn threshold_exact(n_total: usize, j_imbalance: usize, omega: f64) -> Result<f64> {
    if j_imbalance != 0 {
        return Err(Error::Domain(
            "a stationary pair needs an attractive centrifugal term (J = 0)".into(),
        ));
    }
    if !(omega > 0.0) {
        return Err(Error::ZeroOmega("the threshold"));
    }
    // h(y*) as a function of μ: positive where the pair is absent
    let phi = |mu: f64| {
        let p = SexticPotential::no_scattering(mu, omega, n_total, j_imbalance);
        match p.y_star() {
            Some(y) => p.h(y) / p.h_scale(y),
            None => 1.0,
        }
    };
    let lo = -omega * (2.0 * (n_total as f64 + 2.0)).sqrt();
    let steps = 4000;
    let mut prev = lo;
    for i in 1..steps {
        let mu = lo * (1.0 - i as f64 / steps as f64);
        if phi(mu) < 0.0 {
            return Ok(bisect(phi, prev, mu, 0.0));
        }
        prev = mu;
    }
    Err(Error::NoConvergence { index: 0 })
}
