//! Model parameters, conserved sectors and matrix elements of the
//! three-mode Hamiltonian
//!
//! ```text
//! H = Σ U_ij N_i N_j + Σ μ_i N_i + Ω (a†b†c + c†ba)
//! ```
//!
//! `J = N_a − N_b` and `N = N_a + N_b + 2N_c` are conserved. A sector
//! `(N, J)` is spanned by `|l−j; m−j; j⟩`, `j = 0..=m`, with
//! `l = (N+J)/2` and `m = (N−J)/2`. The index `j` counts molecules.

use crate::error::{Error, Result};

/// The nine couplings of the Hamiltonian plus the interconversion amplitude Ω.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct ModelParams {
    pub u_aa: f64,
    pub u_bb: f64,
    pub u_cc: f64,
    pub u_ab: f64,
    pub u_ac: f64,
    pub u_bc: f64,
    pub mu_a: f64,
    pub mu_b: f64,
    pub mu_c: f64,
    pub omega: f64,
}

impl ModelParams {
    /// `H = μ N_c + Ω(a†b†c + c†ba)`.
    pub fn no_scattering(mu: f64, omega: f64) -> Self {
        ModelParams {
            mu_c: mu,
            omega,
            ..Default::default()
        }
    }

    /// Realises the semi-classical pair `(α, λ)` for total number `N`
    /// through `μ_c` and `U_cc` only. `λ = 0` gives the no-scattering model.
    pub fn from_alpha_lambda(alpha: f64, lambda: f64, n_total: usize, omega: f64) -> Self {
        let root = (2.0 * n_total as f64).sqrt();
        ModelParams {
            mu_c: mu_from_alpha(alpha, n_total, omega),
            u_cc: 4.0 * lambda * omega / root,
            omega,
            ..Default::default()
        }
    }

    pub fn is_finite(&self) -> bool {
        self.as_array().iter().all(|v| v.is_finite())
    }

    pub fn as_array(&self) -> [f64; 10] {
        [
            self.u_aa, self.u_bb, self.u_cc, self.u_ab, self.u_ac, self.u_bc, self.mu_a, self.mu_b, self.mu_c,
            self.omega,
        ]
    }

    pub fn from_array(v: [f64; 10]) -> Self {
        ModelParams {
            u_aa: v[0],
            u_bb: v[1],
            u_cc: v[2],
            u_ab: v[3],
            u_ac: v[4],
            u_bc: v[5],
            mu_a: v[6],
            mu_b: v[7],
            mu_c: v[8],
            omega: v[9],
        }
    }

    /// Relabels species a ↔ b.
    pub fn swap_atoms(&self) -> Self {
        ModelParams {
            u_aa: self.u_bb,
            u_bb: self.u_aa,
            u_ac: self.u_bc,
            u_bc: self.u_ac,
            mu_a: self.mu_b,
            mu_b: self.mu_a,
            ..*self
        }
    }
}

/// `μ = −αΩ√(2N)` for the no-scattering model.
pub fn mu_from_alpha(alpha: f64, n_total: usize, omega: f64) -> f64 {
    -alpha * omega * (2.0 * n_total as f64).sqrt()
}

/// Inverse of [`mu_from_alpha`].
pub fn alpha_from_mu(mu: f64, n_total: usize, omega: f64) -> f64 {
    -mu / (omega * (2.0 * n_total as f64).sqrt())
}

/// Conserved quantum numbers `(N, J)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Sector {
    n_total: usize,
    j_imbalance: usize,
}

impl Sector {
    pub fn new(n_total: i64, j_imbalance: i64) -> Result<Self> {
        let bad = |reason| Error::InvalidSector {
            n_total,
            j_imbalance,
            reason,
        };
        if n_total < 0 {
            return Err(bad("N must be non-negative"));
        }
        if j_imbalance < 0 {
            return Err(bad("J must be non-negative; swap the atomic labels for J < 0"));
        }
        if j_imbalance > n_total {
            return Err(bad("J must not exceed N"));
        }
        if (n_total - j_imbalance) % 2 != 0 {
            return Err(bad("N − J must be even"));
        }
        Ok(Sector {
            n_total: n_total as usize,
            j_imbalance: j_imbalance as usize,
        })
    }

    /// Sector with the imbalance closest to `k·N` that respects parity
    /// (ties go to the smaller J).
    pub fn from_fraction(n_total: usize, k: f64) -> Result<Self> {
        let target = k * n_total as f64;
        let lo = target.floor() as i64;
        let candidates = [lo - 1, lo, lo + 1, lo + 2];
        let best = candidates
            .iter()
            .copied()
            .filter(|&j| j >= 0 && j <= n_total as i64 && (n_total as i64 - j) % 2 == 0)
            .min_by(|a, b| {
                let da = (*a as f64 - target).abs();
                let db = (*b as f64 - target).abs();
                da.total_cmp(&db).then(a.cmp(b))
            })
            .ok_or(Error::InvalidSector {
                n_total: n_total as i64,
                j_imbalance: lo,
                reason: "no admissible imbalance near k·N",
            })?;
        Sector::new(n_total as i64, best)
    }

    pub fn n_total(&self) -> usize {
        self.n_total
    }
    pub fn j_imbalance(&self) -> usize {
        self.j_imbalance
    }
    /// `l = (N+J)/2`.
    pub fn l(&self) -> usize {
        (self.n_total + self.j_imbalance) / 2
    }
    /// `m = (N−J)/2`, the maximal molecule number.
    pub fn m(&self) -> usize {
        (self.n_total - self.j_imbalance) / 2
    }
    /// Fractional imbalance `k = J/N` (0 for the empty sector).
    pub fn k(&self) -> f64 {
        if self.n_total == 0 {
            0.0
        } else {
            self.j_imbalance as f64 / self.n_total as f64
        }
    }
    pub fn dim(&self) -> usize {
        self.m() + 1
    }

    /// Occupations `(n_a, n_b, n_c)` of basis state `j`.
    pub fn occupations(&self, j: usize) -> (usize, usize, usize) {
        (self.l() - j, self.m() - j, j)
    }

    fn check_index(&self, j: usize, lo: usize) -> Result<()> {
        if j < lo || j > self.m() {
            Err(Error::IndexOutOfRange {
                index: j,
                lo,
                hi: self.m(),
            })
        } else {
            Ok(())
        }
    }
}

/// Diagonal element `𝒰_j`, evaluated directly from the occupation numbers.
pub fn u_diag(params: &ModelParams, sector: &Sector, j: usize) -> Result<f64> {
    sector.check_index(j, 0)?;
    Ok(u_diag_unchecked(params, sector, j))
}

pub(crate) fn u_diag_unchecked(p: &ModelParams, sector: &Sector, j: usize) -> f64 {
    let (na, nb, nc) = sector.occupations(j);
    let (na, nb, nc) = (na as f64, nb as f64, nc as f64);
    p.u_aa * na * na
        + p.u_bb * nb * nb
        + p.u_cc * nc * nc
        + p.u_ab * na * nb
        + p.u_ac * na * nc
        + p.u_bc * nb * nc
        + p.mu_a * na
        + p.mu_b * nb
        + p.mu_c * nc
}

/// Off-diagonal element between normalised basis states `j−1` and `j`:
/// `t_j = Ω √(j (l−j+1) (m−j+1))`.
pub fn hopping(sector: &Sector, omega: f64, j: usize) -> Result<f64> {
    sector.check_index(j, 1)?;
    Ok(hopping_unchecked(sector, omega, j))
}

pub(crate) fn hopping_unchecked(sector: &Sector, omega: f64, j: usize) -> f64 {
    let jf = j as f64;
    let a = (sector.l() - j + 1) as f64;
    let b = (sector.m() - j + 1) as f64;
    omega * (jf * a * b).sqrt()
}

/// `𝒰_j = A(m−j)(m−j−1) + B(m−j) + C`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AbcCoefficients {
    pub a_coef: f64,
    pub b_coef: f64,
    pub c_coef: f64,
}

impl AbcCoefficients {
    pub fn u_j(&self, sector: &Sector, j: usize) -> f64 {
        let p = (sector.m() - j) as f64;
        self.a_coef * p * (p - 1.0) + self.b_coef * p + self.c_coef
    }
}

/// Quadratic-form coefficients of the diagonal elements.
///
/// `C` is the `j = m` value of `𝒰_j`: `(l−m)²U_aa + m²U_cc + m(l−m)U_ac
/// + (l−m)μ_a + mμ_c`.
pub fn abc_coefficients(p: &ModelParams, sector: &Sector) -> AbcCoefficients {
    let l = sector.l() as f64;
    let m = sector.m() as f64;
    let a_coef = p.u_aa + p.u_bb + p.u_cc + p.u_ab - p.u_ac - p.u_bc;
    let b_coef = (1.0 + 2.0 * l - 2.0 * m) * p.u_aa
        + p.u_bb
        + (1.0 - 2.0 * m) * p.u_cc
        + (1.0 + l - m) * p.u_ab
        + (2.0 * m - l - 1.0) * p.u_ac
        + (m - 1.0) * p.u_bc
        + p.mu_a
        + p.mu_b
        - p.mu_c;
    let c_coef = (l - m) * (l - m) * p.u_aa + m * m * p.u_cc + m * (l - m) * p.u_ac + (l - m) * p.mu_a + m * p.mu_c;
    AbcCoefficients { a_coef, b_coef, c_coef }
}

/// Effective couplings `(λ, α, β)` of the classical Hamiltonian.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct SemiclassicalCouplings {
    pub lambda: f64,
    pub alpha: f64,
    pub beta: f64,
}

impl SemiclassicalCouplings {
    pub fn new(lambda: f64, alpha: f64) -> Self {
        SemiclassicalCouplings {
            lambda,
            alpha,
            beta: 0.0,
        }
    }
}

pub fn semiclassical_couplings(p: &ModelParams, sector: &Sector) -> Result<SemiclassicalCouplings> {
    if p.omega == 0.0 {
        return Err(Error::ZeroOmega("semi-classical couplings"));
    }
    if sector.n_total() == 0 {
        return Err(Error::InvalidSector {
            n_total: 0,
            j_imbalance: 0,
            reason: "N must be positive for the semi-classical limit",
        });
    }
    let n = sector.n_total() as f64;
    let k = sector.k();
    let scale = (2.0 * n).sqrt() / p.omega;
    let lambda = scale * (p.u_aa + p.u_bb + p.u_cc + p.u_ab - p.u_ac - p.u_bc) / 4.0;
    let alpha = scale
        * ((1.0 + k) / 2.0 * p.u_aa + (1.0 - k) / 2.0 * p.u_bb + 0.5 * p.u_ab
            - (1.0 + k) / 4.0 * p.u_ac
            - (1.0 - k) / 4.0 * p.u_bc
            + (p.mu_a + p.mu_b - p.mu_c) / (2.0 * n));
    let beta = scale
        * ((1.0 + k).powi(2) * p.u_aa
            + (1.0 - k).powi(2) * p.u_bb
            + (1.0 - k * k) * p.u_ab
            + 2.0 / n * ((1.0 + k) * p.mu_a + (1.0 - k) * p.mu_b));
    Ok(SemiclassicalCouplings { lambda, alpha, beta })
}
