//! Classical one-degree-of-freedom reduction of the model.
//!
//! ```text
//! H(z, θ) = λz² + 2(α−λ)z + λ − 2α + β + R(z) cos θ
//! R(z)    = √(2(1−z)(z+c₊)(z+c₋)),   c± = 1 ± 2k,   θ = 4φ/N
//! ```
//!
//! on `z ∈ [2k−1, 1]`. Interior fixed points sit at `θ = 0` with
//! `f(z) = g(z)` or at `θ = π` with `f(z) = −g(z)`, where
//! `f(z) = λz + α − λ` and `g = −R′/2`. For `k = 0` the radical has a
//! simple zero at `z = −1`, `g(−1) = −1` is finite, and the circle `z = −1`
//! carries extra fixed points with `cos θ = 2λ − α`.

use std::f64::consts::PI;

use crate::error::{Error, Result};
use crate::model::SemiclassicalCouplings;
use crate::numeric::bisect;

/// Default number of bracketing intervals for the root search.
pub const ROOT_GRID: usize = 10_000;

/// Fixed points with `|det Hessian|` below this are labelled degenerate.
pub const DEGENERATE_DET: f64 = 1e-10;

/// A point of phase space; `theta` is the scaled phase `4φ/N`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PhasePoint {
    pub z: f64,
    pub theta: f64,
}

impl PhasePoint {
    pub fn new(z: f64, theta: f64) -> Self {
        PhasePoint { z, theta }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Branch {
    /// `θ = 0`, `f(z) = g(z)`.
    Phi0,
    /// `θ = π`, `f(z) = −g(z)`.
    PhiPi,
    /// On the circle `z = −1` (zero imbalance only).
    ZBoundary,
}

impl Branch {
    pub fn as_str(&self) -> &'static str {
        match self {
            Branch::Phi0 => "phi0",
            Branch::PhiPi => "phiPi",
            Branch::ZBoundary => "zBoundary",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Character {
    Minimum,
    Maximum,
    Saddle,
    Degenerate,
}

impl Character {
    pub fn as_str(&self) -> &'static str {
        match self {
            Character::Minimum => "minimum",
            Character::Maximum => "maximum",
            Character::Saddle => "saddle",
            Character::Degenerate => "degenerate",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FixedPoint {
    pub point: PhasePoint,
    pub branch: Branch,
    pub character: Character,
    /// The whole circle `z = −1` is stationary (its phase is arbitrary);
    /// `point.theta` is then a placeholder 0.
    pub theta_free: bool,
}

/// `c₊`, `c₋` and the lower end `2k − 1` of the `z` domain.
#[derive(Debug, Clone, Copy)]
struct Geometry {
    k: f64,
    c_plus: f64,
    c_minus: f64,
}

impl Geometry {
    fn new(k: f64) -> Self {
        Geometry {
            k,
            c_plus: 1.0 + 2.0 * k,
            c_minus: 1.0 - 2.0 * k,
        }
    }

    fn z_min(&self) -> f64 {
        2.0 * self.k - 1.0
    }

    fn balanced(&self) -> bool {
        self.k == 0.0
    }

    fn q(&self, z: f64) -> f64 {
        (z + self.c_plus) * (z + self.c_minus)
    }

    fn radicand(&self, z: f64) -> f64 {
        2.0 * (1.0 - z) * self.q(z)
    }

    fn radical(&self, z: f64) -> f64 {
        if self.balanced() {
            // √(2(1−z))·(1+z), free of the double root at −1
            (2.0 * (1.0 - z)).max(0.0).sqrt() * (1.0 + z)
        } else {
            self.radicand(z).max(0.0).sqrt()
        }
    }

    fn check(&self, z: f64) -> Result<()> {
        let lo = self.z_min();
        if !(lo..=1.0).contains(&z) {
            Err(Error::OutsideDomain { z, lo })
        } else {
            Ok(())
        }
    }

    /// `g(z)`; caller guarantees `z` is interior (or `−1` when balanced).
    fn g(&self, z: f64) -> f64 {
        if self.balanced() {
            (3.0 * z - 1.0) / (2.0 * (2.0 * (1.0 - z)).sqrt())
        } else {
            let num = (z - 1.0) * (2.0 * z + 2.0) + self.q(z);
            num / (2.0 * self.radicand(z).sqrt())
        }
    }

    /// `g′(z) = −R″/2`.
    fn dg(&self, z: f64) -> f64 {
        if self.balanced() {
            (5.0 - 3.0 * z) / (4.0 * 2f64.sqrt() * (1.0 - z).powf(1.5))
        } else {
            let p = self.radicand(z);
            let r = p.sqrt();
            let dp = 2.0 * ((1.0 - z) * (2.0 * z + 2.0) - self.q(z));
            let ddp = -4.0 * (3.0 * z + 1.0);
            let ddr = ddp / (2.0 * r) - dp * dp / (4.0 * r * r * r);
            -0.5 * ddr
        }
    }
}

/// Classical energy of a phase-space point.
pub fn classical_energy(p: PhasePoint, c: &SemiclassicalCouplings, k: f64) -> Result<f64> {
    let geo = Geometry::new(k);
    geo.check(p.z)?;
    Ok(energy_unchecked(&geo, p, c))
}

fn energy_unchecked(geo: &Geometry, p: PhasePoint, c: &SemiclassicalCouplings) -> f64 {
    let z = p.z;
    c.lambda * z * z + 2.0 * (c.alpha - c.lambda) * z + c.lambda - 2.0 * c.alpha
        + c.beta
        + geo.radical(z) * p.theta.cos()
}

/// Gradient `(∂H/∂z, ∂H/∂θ)` at an interior point.
pub fn energy_gradient(p: PhasePoint, c: &SemiclassicalCouplings, k: f64) -> Result<(f64, f64)> {
    let geo = Geometry::new(k);
    geo.check(p.z)?;
    let interior = p.z < 1.0 && (p.z > geo.z_min() || geo.balanced());
    if !interior || geo.radicand(p.z) <= 0.0 && !geo.balanced() {
        return Err(Error::BoundaryEvaluation(p.z));
    }
    // R′ = −2g
    let dr = -2.0 * geo.g(p.z);
    let dz = 2.0 * c.lambda * p.z + 2.0 * c.alpha - 2.0 * c.lambda + dr * p.theta.cos();
    let dtheta = -geo.radical(p.z) * p.theta.sin();
    Ok((dz, dtheta))
}

/// Hamilton's equations `(dz/dt, dφ/dt) = (∂H/∂φ, −∂H/∂z)` with `θ = 4φ/N`.
pub fn hamilton_rhs(p: PhasePoint, c: &SemiclassicalCouplings, k: f64, n_total: usize) -> Result<(f64, f64)> {
    let geo = Geometry::new(k);
    geo.check(p.z)?;
    if geo.radicand(p.z) <= 0.0 {
        return Err(Error::BoundaryEvaluation(p.z));
    }
    let (dz, dtheta) = energy_gradient(p, c, k)?;
    let scale = 4.0 / n_total as f64;
    Ok((scale * dtheta, -dz))
}

/// `g(z) = [(z−1)(2z+2) + (z+c₊)(z+c₋)] / [2R(z)]`.
///
/// Diverges at `z = 1`, and at `z = 2k−1` unless `k = 0`, where the limit
/// `g(−1) = −1` is returned.
pub fn g_value(z: f64, k: f64) -> Result<f64> {
    let geo = Geometry::new(k);
    geo.check(z)?;
    if z == 1.0 || (z == geo.z_min() && !geo.balanced()) {
        return Err(Error::Divergent(z));
    }
    Ok(geo.g(z))
}

pub fn g_derivative(z: f64, k: f64) -> Result<f64> {
    let geo = Geometry::new(k);
    geo.check(z)?;
    if z == 1.0 || (z == geo.z_min() && !geo.balanced()) {
        return Err(Error::Divergent(z));
    }
    Ok(geo.dg(z))
}

/// Bracketing nodes: cosine-clustered towards both (divergent) ends.
fn root_grid(geo: &Geometry, intervals: usize) -> Vec<f64> {
    let lo = geo.z_min();
    let width = 1.0 - lo;
    let mut nodes = Vec::with_capacity(intervals + 1);
    if geo.balanced() {
        nodes.push(-1.0);
    }
    for i in 0..intervals {
        let t = (i as f64 + 0.5) / intervals as f64;
        let s = 0.5 * (1.0 - (PI * t).cos());
        let z = lo + width * s;
        if z > lo && z < 1.0 && nodes.last().is_none_or(|&prev| z > prev) {
            nodes.push(z);
        }
    }
    nodes
}

/// Roots of `f(z) − sign·g(z)` on the interior, sorted ascending.
///
/// Also reports whether a root sits exactly at `z = −1` (balanced case),
/// where the branch touches the boundary circle.
fn branch_roots(geo: &Geometry, c: &SemiclassicalCouplings, sign: f64, intervals: usize) -> (Vec<f64>, bool) {
    let h = |z: f64| c.lambda * z + c.alpha - c.lambda - sign * geo.g(z);
    let nodes = root_grid(geo, intervals);
    let vals: Vec<f64> = nodes.iter().map(|&z| h(z)).collect();
    let mut roots = Vec::new();
    let mut on_boundary = false;
    for i in 0..nodes.len() {
        if vals[i] == 0.0 {
            if i == 0 && geo.balanced() {
                on_boundary = true;
            } else {
                roots.push(nodes[i]);
            }
            continue;
        }
        if i + 1 < nodes.len() && vals[i + 1] != 0.0 && (vals[i] < 0.0) != (vals[i + 1] < 0.0) {
            roots.push(bisect(h, nodes[i], nodes[i + 1], 0.0));
        }
    }
    (roots, on_boundary)
}

fn classify(h_zz: f64, h_tt: f64, h_zt: f64) -> Character {
    let det = h_zz * h_tt - h_zt * h_zt;
    if det.abs() < DEGENERATE_DET {
        Character::Degenerate
    } else if det < 0.0 {
        Character::Saddle
    } else if h_tt > 0.0 {
        Character::Minimum
    } else {
        Character::Maximum
    }
}

/// All fixed points, using the default bracketing grid.
pub fn fixed_points(c: &SemiclassicalCouplings, k: f64) -> Vec<FixedPoint> {
    fixed_points_with_grid(c, k, ROOT_GRID)
}

pub fn fixed_points_with_grid(c: &SemiclassicalCouplings, k: f64, intervals: usize) -> Vec<FixedPoint> {
    assert!((0.0..1.0).contains(&k), "fractional imbalance must lie in [0, 1)");
    let geo = Geometry::new(k);
    let mut out = Vec::new();
    for (branch, sign, theta) in [(Branch::Phi0, 1.0, 0.0), (Branch::PhiPi, -1.0, PI)] {
        let cos = theta.cos();
        for z in branch_roots(&geo, c, sign, intervals).0 {
            // diagonal Hessian on θ ∈ {0, π}
            let h_zz = 2.0 * c.lambda - 2.0 * geo.dg(z) * cos;
            let h_tt = -geo.radical(z) * cos;
            out.push(FixedPoint {
                point: PhasePoint::new(z, theta),
                branch,
                character: classify(h_zz, h_tt, 0.0),
                theta_free: false,
            });
        }
    }
    if geo.balanced() {
        out.extend(boundary_fixed_points(c));
    }
    out
}

/// Fixed points on `z = −1` for zero imbalance.
fn boundary_fixed_points(c: &SemiclassicalCouplings) -> Vec<FixedPoint> {
    let cos = 2.0 * c.lambda - c.alpha;
    let mut out = Vec::new();
    if cos.abs() <= 1.0 {
        let theta = cos.acos();
        // R(−1) = 0, R′(−1) = 2, R″(−1) = −1
        let mut thetas = vec![theta];
        if theta != 0.0 && theta != PI {
            thetas.insert(0, -theta);
        }
        for t in thetas {
            let h_zz = 2.0 * c.lambda - t.cos();
            let h_zt = -2.0 * t.sin();
            out.push(FixedPoint {
                point: PhasePoint::new(-1.0, t),
                branch: Branch::ZBoundary,
                character: classify(h_zz, 0.0, h_zt),
                theta_free: false,
            });
        }
    } else {
        // ∂H/∂z = 2(α − 2λ + cos θ) keeps one sign on the whole circle
        let character = if c.alpha - 2.0 * c.lambda > 1.0 {
            Character::Minimum
        } else {
            Character::Maximum
        };
        out.push(FixedPoint {
            point: PhasePoint::new(-1.0, 0.0),
            branch: Branch::ZBoundary,
            character,
            theta_free: true,
        });
    }
    out
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Region {
    A,
    B,
    C,
    I,
    II,
    III,
    IV,
    V,
    /// Counts that match none of the tabulated regions.
    Unlisted,
}

impl Region {
    pub fn as_str(&self) -> &'static str {
        match self {
            Region::A => "A",
            Region::B => "B",
            Region::C => "C",
            Region::I => "I",
            Region::II => "II",
            Region::III => "III",
            Region::IV => "IV",
            Region::V => "V",
            Region::Unlisted => "unlisted",
        }
    }
}

/// Solution counts per branch and the resulting region label.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct RegionLabel {
    pub label: Region,
    pub phi0: usize,
    pub phi_pi: usize,
    /// Solutions of `cos θ = 2λ − α` on `z = −1` (zero imbalance only).
    pub z_boundary: usize,
    /// The couplings sit (numerically) on a bifurcation boundary.
    pub ambiguous: bool,
}

pub fn region_classify(c: &SemiclassicalCouplings, k: f64) -> RegionLabel {
    region_classify_with_grid(c, k, ROOT_GRID)
}

pub fn region_classify_with_grid(c: &SemiclassicalCouplings, k: f64, intervals: usize) -> RegionLabel {
    let geo = Geometry::new(k);
    let (r0, touch0) = branch_roots(&geo, c, 1.0, intervals);
    let (rp, touchp) = branch_roots(&geo, c, -1.0, intervals);
    let degenerate_root = |roots: &[f64], sign: f64| {
        roots.iter().any(|&z| {
            let slope = c.lambda - sign * geo.dg(z);
            slope.abs() < 1e-9 * (1.0 + c.lambda.abs())
        })
    };
    let mut ambiguous = touch0 || touchp || degenerate_root(&r0, 1.0) || degenerate_root(&rp, -1.0);
    let (phi0, phi_pi) = (r0.len(), rp.len());
    let label;
    let mut z_boundary = 0;
    if geo.balanced() {
        let cos = 2.0 * c.lambda - c.alpha;
        if (cos.abs() - 1.0).abs() < 1e-9 {
            ambiguous = true;
        }
        z_boundary = match cos.abs() {
            a if a < 1.0 => 2,
            a if a == 1.0 => 1,
            _ => 0,
        };
        label = match (phi0, phi_pi, z_boundary) {
            (0, 1, 0) => Region::I,
            (2, 1, 0) => Region::II,
            (1, 1, 2) => Region::III,
            (1, 0, 0) => Region::IV,
            (1, 2, 0) => Region::V,
            _ => Region::Unlisted,
        };
    } else {
        label = match (phi0, phi_pi) {
            (1, 1) => Region::A,
            (3, 1) => Region::B,
            (1, 3) => Region::C,
            _ => Region::Unlisted,
        };
    }
    RegionLabel {
        label,
        phi0,
        phi_pi,
        z_boundary,
        ambiguous,
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BoundarySource {
    /// `f` tangent to `±g` at an interior `z₀`.
    Tangency,
    /// Solvability edge `|2λ − α| = 1` of the `z = −1` condition.
    ZBoundaryLine,
}

impl BoundarySource {
    pub fn as_str(&self) -> &'static str {
        match self {
            BoundarySource::Tangency => "tangency",
            BoundarySource::ZBoundaryLine => "zBoundaryLine",
        }
    }
}

/// A bifurcation boundary in the `(α, λ)` plane, sampled in order.
#[derive(Debug, Clone, PartialEq)]
pub struct BoundaryCurve {
    /// `(z₀, α, λ)`; line samples carry `z₀ = −1`.
    pub samples: Vec<(f64, f64, f64)>,
    /// `+1` for the `θ = 0` branch, `−1` for `θ = π`.
    pub branch_sign: i8,
    pub source: BoundarySource,
}

/// Cosine-clustered `z₀` samples strictly inside `(2k−1, 1)`.
pub fn default_z_grid(k: f64, count: usize) -> Vec<f64> {
    let lo = 2.0 * k - 1.0;
    (0..count)
        .map(|i| {
            let t = (i as f64 + 0.5) / count as f64;
            lo + (1.0 - lo) * 0.5 * (1.0 - (PI * t).cos())
        })
        .collect()
}

/// Tangency curves `λ = ±g′(z₀)`, `α = ±g(z₀) − λ(z₀ − 1)` for both
/// branches, plus the lines `λ = (α ± 1)/2` sampled at `alpha_samples` when
/// `k = 0`.
pub fn boundary_curves(k: f64, z_grid: &[f64], alpha_samples: &[f64]) -> Result<Vec<BoundaryCurve>> {
    let geo = Geometry::new(k);
    if let Some(&z) = z_grid.iter().find(|&&z| z <= geo.z_min() || z >= 1.0) {
        return Err(Error::OutsideDomain { z, lo: geo.z_min() });
    }
    let mut curves = Vec::new();
    for sign in [1i8, -1] {
        let s = sign as f64;
        let samples = z_grid
            .iter()
            .map(|&z0| {
                let lambda = s * geo.dg(z0);
                let alpha = s * geo.g(z0) - lambda * (z0 - 1.0);
                (z0, alpha, lambda)
            })
            .collect();
        curves.push(BoundaryCurve {
            samples,
            branch_sign: sign,
            source: BoundarySource::Tangency,
        });
    }
    if geo.balanced() {
        for sign in [1i8, -1] {
            let s = sign as f64;
            let samples = alpha_samples
                .iter()
                .map(|&alpha| (-1.0, alpha, (alpha + s) / 2.0))
                .collect();
            curves.push(BoundaryCurve {
                samples,
                branch_sign: sign,
                source: BoundarySource::ZBoundaryLine,
            });
        }
    }
    Ok(curves)
}

/// Values of `α` where a boundary curve crosses `λ = 0` (linear
/// interpolation between consecutive samples).
pub fn lambda_zero_crossings(curve: &BoundaryCurve) -> Vec<f64> {
    let mut out = Vec::new();
    for w in curve.samples.windows(2) {
        let (_, a0, l0) = w[0];
        let (_, a1, l1) = w[1];
        if l0 == 0.0 {
            out.push(a0);
        } else if (l0 < 0.0) != (l1 < 0.0) && l1 != 0.0 {
            out.push(a0 + (a1 - a0) * l0 / (l0 - l1));
        }
    }
    if let Some(&(_, a, l)) = curve.samples.last() {
        if l == 0.0 {
            out.push(a);
        }
    }
    out
}

/// `H` sampled on `z_samples × theta_samples` (rows follow `z`).
///
/// Samples on the domain ends use the vanishing radical.
pub fn level_curve_grid(
    c: &SemiclassicalCouplings,
    k: f64,
    z_samples: &[f64],
    theta_samples: &[f64],
) -> Result<Vec<Vec<f64>>> {
    let geo = Geometry::new(k);
    for &z in z_samples {
        geo.check(z)?;
    }
    Ok(z_samples
        .iter()
        .map(|&z| {
            theta_samples
                .iter()
                .map(|&t| energy_unchecked(&geo, PhasePoint::new(z, t), c))
                .collect()
        })
        .collect())
}
