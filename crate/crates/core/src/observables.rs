//! Ground-state expectation values, spectral time evolution and the
//! ground-state fidelity `W_Δ(δ) = |⟨Ψ(δ(1−Δ))|Ψ(δ(1+Δ))⟩|`.

use num_complex::Complex64;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::model::{ModelParams, Sector};
use crate::numeric::{golden_min, local_minima};
use crate::spectral::{build_tridiagonal, QuantumState, SpectralDecomposition};

/// `⟨z⟩ = ⟨N_a + N_b − 2N_c⟩/N = Σ |ψ_j|² (N − 4j)/N`.
pub fn expectation_z(state: &QuantumState) -> f64 {
    let n = state.sector.n_total() as f64;
    let norm = state.norm_sqr();
    state
        .amplitudes
        .iter()
        .enumerate()
        .map(|(j, a)| a.norm_sqr() * (n - 4.0 * j as f64) / n)
        .sum::<f64>()
        / norm
}

/// `⟨N_c⟩ = Σ |ψ_j|² j`.
pub fn expectation_nc(state: &QuantumState) -> f64 {
    let norm = state.norm_sqr();
    state
        .amplitudes
        .iter()
        .enumerate()
        .map(|(j, a)| a.norm_sqr() * j as f64)
        .sum::<f64>()
        / norm
}

/// Precomputed eigenbasis components of an initial state.
struct Propagator<'a> {
    decomp: &'a SpectralDecomposition,
    coeffs: Vec<Complex64>,
}

impl<'a> Propagator<'a> {
    fn new(decomp: &'a SpectralDecomposition, initial: &QuantumState) -> Result<Self> {
        if decomp.sector != initial.sector {
            return Err(Error::SectorMismatch);
        }
        let coeffs = decomp
            .eigenvectors
            .iter()
            .map(|v| v.iter().zip(&initial.amplitudes).map(|(a, b)| b * a).sum())
            .collect();
        Ok(Propagator { decomp, coeffs })
    }

    fn at(&self, t: f64) -> Vec<Complex64> {
        let mut out = vec![Complex64::new(0.0, 0.0); self.decomp.dim()];
        for ((v, &e), &c) in self
            .decomp
            .eigenvectors
            .iter()
            .zip(&self.decomp.eigenvalues)
            .zip(&self.coeffs)
        {
            let phase = c * Complex64::from_polar(1.0, -e * t);
            for (o, x) in out.iter_mut().zip(v) {
                *o += phase * x;
            }
        }
        out
    }
}

/// `Σ_n |n⟩⟨n| e^{−iE_n t}` applied to `initial`.
pub fn evolve(decomp: &SpectralDecomposition, initial: &QuantumState, t: f64) -> Result<QuantumState> {
    let prop = Propagator::new(decomp, initial)?;
    if t == 0.0 {
        return Ok(initial.clone());
    }
    Ok(QuantumState {
        sector: initial.sector,
        amplitudes: prop.at(t),
    })
}

#[derive(Debug, Clone, PartialEq)]
pub struct TimeSeries {
    pub times: Vec<f64>,
    pub values: Vec<f64>,
}

impl TimeSeries {
    pub fn peak_to_peak(&self) -> f64 {
        let (lo, hi) = self
            .values
            .iter()
            .fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), &v| {
                (lo.min(v), hi.max(v))
            });
        hi - lo
    }

    /// Largest `|value − target|`.
    pub fn max_deviation(&self, target: f64) -> f64 {
        self.values.iter().fold(0.0, |a, v| a.max((v - target).abs()))
    }

    /// Largest change between consecutive samples.
    pub fn max_step(&self) -> f64 {
        self.values.windows(2).fold(0.0, |a, w| a.max((w[1] - w[0]).abs()))
    }
}

/// `⟨z(t)⟩` on `t_grid`, evaluated in parallel.
pub fn z_trace(decomp: &SpectralDecomposition, initial: &QuantumState, t_grid: &[f64]) -> Result<TimeSeries> {
    let prop = Propagator::new(decomp, initial)?;
    let z0 = expectation_z(initial);
    let values = t_grid
        .par_iter()
        .map(|&t| {
            if t == 0.0 {
                return z0;
            }
            let state = QuantumState {
                sector: initial.sector,
                amplitudes: prop.at(t),
            };
            expectation_z(&state)
        })
        .collect();
    Ok(TimeSeries {
        times: t_grid.to_vec(),
        values,
    })
}

/// A local minimum of an overlap curve.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PreTransition {
    pub coupling: f64,
    pub overlap: f64,
    /// Located by golden-section search between the neighbouring samples,
    /// rather than taken from the grid.
    pub refined: bool,
}

#[derive(Debug, Clone, PartialEq)]
pub struct OverlapCurve {
    pub delta_rel: f64,
    pub couplings: Vec<f64>,
    /// `NaN` where a ground state was degenerate.
    pub overlaps: Vec<f64>,
    pub flagged: Vec<bool>,
    pub minima: Vec<PreTransition>,
}

impl OverlapCurve {
    /// Smallest unflagged overlap.
    pub fn min_overlap(&self) -> f64 {
        self.overlaps
            .iter()
            .zip(&self.flagged)
            .filter(|(_, &f)| !f)
            .fold(f64::INFINITY, |a, (&w, _)| a.min(w))
    }
}

fn ground_vector(params: &ModelParams, sector: &Sector) -> Result<QuantumState> {
    build_tridiagonal(params, sector).ground_state().map(|(_, s)| s)
}

/// `W_Δ(δ)` for the family `params_at(δ)`.
pub fn fidelity<F: Fn(f64) -> ModelParams>(
    params_at: &F,
    sector: &Sector,
    delta_rel: f64,
    coupling: f64,
) -> Result<f64> {
    if delta_rel == 0.0 {
        return Ok(1.0);
    }
    let lo = ground_vector(&params_at(coupling * (1.0 - delta_rel)), sector)?;
    let hi = ground_vector(&params_at(coupling * (1.0 + delta_rel)), sector)?;
    Ok(lo.inner(&hi)?.norm().min(1.0))
}

/// Refinement tolerance for minima, in the coupling.
pub const MINIMUM_TOL: f64 = 1e-4;

/// Overlap curve on `grid`, with local minima refined by golden-section
/// search. Degenerate samples are flagged and do not abort the curve.
pub fn fidelity_curve<F>(params_at: F, sector: &Sector, delta_rel: f64, grid: &[f64]) -> OverlapCurve
where
    F: Fn(f64) -> ModelParams + Sync,
{
    let samples: Vec<Option<f64>> = grid
        .par_iter()
        .map(|&d| fidelity(&params_at, sector, delta_rel, d).ok())
        .collect();
    let overlaps: Vec<f64> = samples.iter().map(|s| s.unwrap_or(f64::NAN)).collect();
    let flagged = samples.iter().map(Option::is_none).collect();
    let minima = local_minima(&overlaps)
        .into_par_iter()
        .map(|i| refine_minimum(&params_at, sector, delta_rel, grid, &overlaps, i))
        .collect();
    OverlapCurve {
        delta_rel,
        couplings: grid.to_vec(),
        overlaps,
        flagged,
        minima,
    }
}

fn refine_minimum<F: Fn(f64) -> ModelParams>(
    params_at: &F,
    sector: &Sector,
    delta_rel: f64,
    grid: &[f64],
    overlaps: &[f64],
    i: usize,
) -> PreTransition {
    let grid_point = PreTransition {
        coupling: grid[i],
        overlap: overlaps[i],
        refined: false,
    };
    let mut failed = false;
    let (x, w) = golden_min(
        |d| {
            fidelity(params_at, sector, delta_rel, d).unwrap_or_else(|_| {
                failed = true;
                f64::INFINITY
            })
        },
        grid[i - 1],
        grid[i + 1],
        MINIMUM_TOL,
    );
    if failed || !(w <= overlaps[i]) {
        return grid_point;
    }
    PreTransition {
        coupling: x,
        overlap: w,
        refined: true,
    }
}

/// Local minima of the sampled curve; refined locations are used where
/// the curve carries them.
pub fn pre_transitions(curve: &OverlapCurve) -> Vec<PreTransition> {
    if curve.overlaps.len() < 3 {
        return Vec::new();
    }
    local_minima(&curve.overlaps)
        .into_iter()
        .map(|i| {
            let (a, b) = (curve.couplings[i - 1], curve.couplings[i + 1]);
            curve
                .minima
                .iter()
                .find(|m| m.coupling >= a.min(b) && m.coupling <= a.max(b))
                .copied()
                .unwrap_or(PreTransition {
                    coupling: curve.couplings[i],
                    overlap: curve.overlaps[i],
                    refined: false,
                })
        })
        .collect()
}
