//! Sector Hamiltonian as a symmetric tridiagonal operator.
//!
//! In the normalised basis `|l−j; m−j; j⟩` the Hamiltonian has diagonal
//! `𝒰_j` and off-diagonal `t_j = Ω√(j(l−j+1)(m−j+1))`. The unnormalised
//! coefficients `ρ_j` of the polynomial representation are related to the
//! normalised amplitudes by `ψ_j = ρ_j √((l−j)!(m−j)!j!)`.

pub mod tridiag;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::model::{hopping_unchecked, u_diag_unchecked, ModelParams, Sector};

/// Sector Hamiltonian in normalised form.
#[derive(Debug, Clone, PartialEq)]
pub struct TridiagonalOperator {
    pub sector: Sector,
    /// `𝒰_0..=𝒰_m`
    pub diag: Vec<f64>,
    /// `t_1..=t_m`
    pub offdiag: Vec<f64>,
}

pub fn build_tridiagonal(params: &ModelParams, sector: &Sector) -> TridiagonalOperator {
    let m = sector.m();
    TridiagonalOperator {
        sector: *sector,
        diag: (0..=m).map(|j| u_diag_unchecked(params, sector, j)).collect(),
        offdiag: (1..=m).map(|j| hopping_unchecked(sector, params.omega, j)).collect(),
    }
}

impl TridiagonalOperator {
    /// Operator from explicit entries; lengths must fit the sector.
    pub fn from_parts(sector: Sector, diag: Vec<f64>, offdiag: Vec<f64>) -> Result<Self> {
        if diag.len() != sector.dim() || offdiag.len() + 1 != diag.len() {
            return Err(Error::Domain(format!(
                "operator entries ({}, {}) do not fit sector dimension {}",
                diag.len(),
                offdiag.len(),
                sector.dim()
            )));
        }
        Ok(TridiagonalOperator { sector, diag, offdiag })
    }

    pub fn dim(&self) -> usize {
        self.diag.len()
    }

    /// Infinity norm, an upper bound on the spectral radius.
    pub fn norm(&self) -> f64 {
        let (lo, hi) = tridiag::gershgorin(&self.diag, &self.offdiag);
        lo.abs().max(hi.abs())
    }

    pub fn apply(&self, v: &[f64]) -> Vec<f64> {
        let n = self.dim();
        (0..n)
            .map(|i| {
                let mut s = self.diag[i] * v[i];
                if i > 0 {
                    s += self.offdiag[i - 1] * v[i - 1];
                }
                if i + 1 < n {
                    s += self.offdiag[i] * v[i + 1];
                }
                s
            })
            .collect()
    }

    pub fn apply_complex(&self, v: &[Complex64]) -> Vec<Complex64> {
        let n = self.dim();
        (0..n)
            .map(|i| {
                let mut s = v[i] * self.diag[i];
                if i > 0 {
                    s += v[i - 1] * self.offdiag[i - 1];
                }
                if i + 1 < n {
                    s += v[i + 1] * self.offdiag[i];
                }
                s
            })
            .collect()
    }

    /// Lowest eigenpair without a full decomposition: Sturm bisection for
    /// `E₀` and `E₁`, then inverse iteration. Same sign convention as
    /// [`ground_state`].
    pub fn ground_state(&self) -> Result<(f64, QuantumState)> {
        let e0 = tridiag::kth_eigenvalue(&self.diag, &self.offdiag, 0);
        if self.dim() > 1 {
            let e1 = tridiag::kth_eigenvalue(&self.diag, &self.offdiag, 1);
            check_gap(e0, e1)?;
        }
        let v = tridiag::inverse_iteration(&self.diag, &self.offdiag, e0);
        Ok((e0, QuantumState::from_real(self.sector, &v)))
    }
}

fn check_gap(e0: f64, e1: f64) -> Result<()> {
    let gap = e1 - e0;
    if gap <= 1e-10 * (1.0 + e0.abs()) {
        Err(Error::DegenerateGroundState { e0, gap })
    } else {
        Ok(())
    }
}

/// Full spectrum of a sector Hamiltonian.
#[derive(Debug, Clone, PartialEq)]
pub struct SpectralDecomposition {
    pub sector: Sector,
    /// Ascending.
    pub eigenvalues: Vec<f64>,
    /// Orthonormal; `eigenvectors[n][j]` is the amplitude of basis state `j`
    /// in eigenstate `n`.
    pub eigenvectors: Vec<Vec<f64>>,
}

pub fn eigendecompose(op: &TridiagonalOperator) -> Result<SpectralDecomposition> {
    let (eigenvalues, mut eigenvectors) = tridiag::ql_implicit(&op.diag, &op.offdiag, true)?;
    for v in eigenvectors.iter_mut() {
        tridiag::fix_sign(v);
    }
    Ok(SpectralDecomposition {
        sector: op.sector,
        eigenvalues,
        eigenvectors,
    })
}

/// Eigenvalues only (no vector accumulation).
pub fn eigenvalues(op: &TridiagonalOperator) -> Result<Vec<f64>> {
    Ok(tridiag::ql_implicit(&op.diag, &op.offdiag, false)?.0)
}

impl SpectralDecomposition {
    pub fn dim(&self) -> usize {
        self.eigenvalues.len()
    }

    pub fn eigenstate(&self, n: usize) -> QuantumState {
        QuantumState::from_real(self.sector, &self.eigenvectors[n])
    }
}

/// Normalised lowest eigenstate; rejects near-degenerate ground states.
pub fn ground_state(decomp: &SpectralDecomposition) -> Result<QuantumState> {
    if decomp.dim() > 1 {
        check_gap(decomp.eigenvalues[0], decomp.eigenvalues[1])?;
    }
    Ok(decomp.eigenstate(0))
}

/// A state of one sector, amplitudes on the normalised basis `j = 0..=m`.
#[derive(Debug, Clone, PartialEq)]
pub struct QuantumState {
    pub sector: Sector,
    pub amplitudes: Vec<Complex64>,
}

impl QuantumState {
    /// Basis state `|l−j; m−j; j⟩`.
    pub fn basis(sector: Sector, j: usize) -> Result<Self> {
        if j > sector.m() {
            return Err(Error::IndexOutOfRange {
                index: j,
                lo: 0,
                hi: sector.m(),
            });
        }
        let mut amplitudes = vec![Complex64::new(0.0, 0.0); sector.dim()];
        amplitudes[j] = Complex64::new(1.0, 0.0);
        Ok(QuantumState { sector, amplitudes })
    }

    pub fn from_real(sector: Sector, v: &[f64]) -> Self {
        QuantumState {
            sector,
            amplitudes: v.iter().map(|&x| Complex64::new(x, 0.0)).collect(),
        }
    }

    pub fn norm_sqr(&self) -> f64 {
        self.amplitudes.iter().map(|a| a.norm_sqr()).sum()
    }

    pub fn probabilities(&self) -> Vec<f64> {
        self.amplitudes.iter().map(|a| a.norm_sqr()).collect()
    }

    /// `⟨self|other⟩`.
    pub fn inner(&self, other: &QuantumState) -> Result<Complex64> {
        if self.sector != other.sector {
            return Err(Error::SectorMismatch);
        }
        Ok(self
            .amplitudes
            .iter()
            .zip(&other.amplitudes)
            .map(|(a, b)| a.conj() * b)
            .sum())
    }
}

/// Largest `m` accepted by [`char_poly_eval`].
pub const CHAR_POLY_MAX_M: usize = 60;

/// Defect of the top equation of the unnormalised recursion,
/// `(𝒰_m − E)ρ_m + Ω(l−m+1)ρ_{m−1}`, after running the recursion from
/// `ρ₀ = 1`. Zero exactly when `E` is an eigenvalue.
///
/// The running coefficients are rescaled by positive factors to delay
/// overflow, so only the sign and zeros of the result are meaningful. With
/// `Ω = 0` the recursion degenerates and the product `Π(𝒰_j − E)` is
/// returned instead.
pub fn char_poly_eval(params: &ModelParams, sector: &Sector, e_trial: f64) -> Result<f64> {
    let m = sector.m();
    if m > CHAR_POLY_MAX_M {
        return Err(Error::SectorTooLarge {
            m,
            limit: CHAR_POLY_MAX_M,
        });
    }
    let u = |j| u_diag_unchecked(params, sector, j);
    let omega = params.omega;
    if omega == 0.0 {
        return Ok((0..=m).map(|j| u(j) - e_trial).product());
    }
    let l = sector.l() as f64;
    let mf = m as f64;
    let mut prev = 0.0; // ρ_{j−1}
    let mut cur = 1.0; // ρ_j
    for j in 0..m {
        let jf = j as f64;
        let back = if j == 0 {
            0.0
        } else {
            omega * (l + 1.0 - jf) * (mf + 1.0 - jf) * prev
        };
        let next = ((e_trial - u(j)) * cur - back) / (omega * (jf + 1.0));
        prev = cur;
        cur = next;
        let scale = prev.abs().max(cur.abs());
        if scale > 1e100 || (scale < 1e-100 && scale > 0.0) {
            prev /= scale;
            cur /= scale;
        }
        if !cur.is_finite() {
            return Err(Error::Overflow { index: j + 1 });
        }
    }
    if m == 0 {
        return Ok(u(0) - e_trial);
    }
    Ok((u(m) - e_trial) * cur + omega * (l - mf + 1.0) * prev)
}

/// Coefficients `ρ_0..=ρ_m` of the unnormalised recursion with `ρ₀ = 1`.
pub fn rho_coefficients(params: &ModelParams, sector: &Sector, e: f64) -> Result<Vec<f64>> {
    let m = sector.m();
    let omega = params.omega;
    if omega == 0.0 {
        return Err(Error::ZeroOmega("the coefficient recursion"));
    }
    let l = sector.l() as f64;
    let mf = m as f64;
    let mut rho = Vec::with_capacity(m + 1);
    rho.push(1.0);
    for j in 0..m {
        let jf = j as f64;
        let back = if j == 0 {
            0.0
        } else {
            omega * (l + 1.0 - jf) * (mf + 1.0 - jf) * rho[j - 1]
        };
        let next = ((e - u_diag_unchecked(params, sector, j)) * rho[j] - back) / (omega * (jf + 1.0));
        if !next.is_finite() || next.abs() > 1e280 {
            return Err(Error::Overflow { index: j + 1 });
        }
        rho.push(next);
    }
    Ok(rho)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sector(n: i64, j: i64) -> Sector {
        Sector::new(n, j).unwrap()
    }

    #[test]
    fn two_state_sector() {
        let (mu, om) = (0.8, 1.7);
        let op = build_tridiagonal(&ModelParams::no_scattering(mu, om), &sector(2, 0));
        assert_eq!(op.diag, vec![0.0, mu]);
        assert_eq!(op.offdiag, vec![om]);
        let d = eigendecompose(&op).unwrap();
        let disc = (mu * mu + 4.0 * om * om).sqrt();
        assert!((d.eigenvalues[0] - (mu - disc) / 2.0).abs() < 1e-14);
        assert!((d.eigenvalues[1] - (mu + disc) / 2.0).abs() < 1e-14);
    }

    #[test]
    fn zero_omega_is_diagonal() {
        let p = ModelParams {
            u_aa: 0.3,
            u_cc: -0.2,
            mu_b: 1.1,
            mu_c: -0.7,
            ..Default::default()
        };
        let s = sector(14, 4);
        let op = build_tridiagonal(&p, &s);
        assert!(op.offdiag.iter().all(|&t| t == 0.0));
        let mut sorted = op.diag.clone();
        sorted.sort_by(f64::total_cmp);
        assert_eq!(eigendecompose(&op).unwrap().eigenvalues, sorted);
    }

    #[test]
    fn ground_state_limits() {
        let s = sector(10, 2);
        let op = build_tridiagonal(&ModelParams::no_scattering(-1.0, 0.0), &s);
        let g = ground_state(&eigendecompose(&op).unwrap()).unwrap();
        assert_eq!(g.amplitudes[s.m()].re, 1.0);

        let op = build_tridiagonal(&ModelParams::no_scattering(1.0, 0.0), &s);
        let g = ground_state(&eigendecompose(&op).unwrap()).unwrap();
        assert_eq!(g.amplitudes[0].re, 1.0);

        let op = build_tridiagonal(&ModelParams::no_scattering(0.0, 1.0), &sector(2, 0));
        let d = eigendecompose(&op).unwrap();
        let g = ground_state(&d).unwrap();
        let h = std::f64::consts::FRAC_1_SQRT_2;
        assert!((d.eigenvalues[0] + 1.0).abs() < 1e-15);
        // both amplitudes have equal magnitude; the first wins the sign tie
        assert!((g.amplitudes[0].re - h).abs() < 1e-15);
        assert!((g.amplitudes[1].re + h).abs() < 1e-15);
    }

    #[test]
    fn degenerate_ground_state_rejected() {
        // μ = 0, Ω = 0: every basis state has energy 0
        let op = build_tridiagonal(&ModelParams::default(), &sector(6, 0));
        let d = eigendecompose(&op).unwrap();
        assert!(matches!(ground_state(&d), Err(Error::DegenerateGroundState { .. })));
        assert!(matches!(op.ground_state(), Err(Error::DegenerateGroundState { .. })));
    }

    #[test]
    fn fast_ground_state_agrees_with_full() {
        let p = ModelParams {
            u_aa: 0.01,
            u_bc: -0.02,
            mu_c: -12.0,
            mu_a: 0.3,
            omega: 1.0,
            ..Default::default()
        };
        for s in [sector(60, 0), sector(61, 3), sector(200, 10)] {
            let op = build_tridiagonal(&p, &s);
            let full = eigendecompose(&op).unwrap();
            let slow = ground_state(&full).unwrap();
            let (e0, fast) = op.ground_state().unwrap();
            assert!((e0 - full.eigenvalues[0]).abs() <= 1e-10 * (1.0 + e0.abs()));
            for (a, b) in slow.amplitudes.iter().zip(&fast.amplitudes) {
                assert!((a - b).norm() < 1e-10);
            }
        }
    }

    #[test]
    fn char_poly_two_state_root() {
        let (mu, om) = (-0.4, 1.0);
        let p = ModelParams::no_scattering(mu, om);
        let s = sector(2, 0);
        let e = (mu - (mu * mu + 4.0 * om * om).sqrt()) / 2.0;
        assert!(char_poly_eval(&p, &s, e).unwrap().abs() < 1e-12);
        assert!(char_poly_eval(&p, &s, e + 0.1).unwrap().abs() > 1e-3);
    }

    #[test]
    fn char_poly_zero_omega() {
        let p = ModelParams {
            u_cc: 0.5,
            mu_a: 0.2,
            ..Default::default()
        };
        let s = sector(8, 2);
        for j in 0..=s.m() {
            let uj = crate::model::u_diag(&p, &s, j).unwrap();
            assert_eq!(char_poly_eval(&p, &s, uj).unwrap(), 0.0);
        }
    }

    #[test]
    fn char_poly_rejects_large_sector() {
        let p = ModelParams::no_scattering(1.0, 1.0);
        assert!(matches!(
            char_poly_eval(&p, &sector(122, 0), 0.0),
            Err(Error::SectorTooLarge { m: 61, .. })
        ));
    }

    #[test]
    fn rho_matches_normalised_eigenvector() {
        // ψ_j ∝ ρ_j √((l−j)!(m−j)!j!)
        let p = ModelParams::no_scattering(-2.0, 1.0);
        let s = sector(12, 2);
        let d = eigendecompose(&build_tridiagonal(&p, &s)).unwrap();
        let rho = rho_coefficients(&p, &s, d.eigenvalues[0]).unwrap();
        let lnfact = |n: usize| (1..=n).map(|k| (k as f64).ln()).sum::<f64>();
        let mut psi: Vec<f64> = (0..=s.m())
            .map(|j| rho[j] * (0.5 * (lnfact(s.l() - j) + lnfact(s.m() - j) + lnfact(j))).exp())
            .collect();
        tridiag::normalise(&mut psi);
        tridiag::fix_sign(&mut psi);
        for (a, b) in psi.iter().zip(&d.eigenvectors[0]) {
            assert!((a - b).abs() < 1e-9);
        }
    }
}
