//! Dense full-Fock oracle: the Hamiltonian built from truncated ladder
//! operators on the product space of the three modes.

use hmbec::ModelParams;
use nalgebra::{DMatrix, SymmetricEigen};

fn lowering(dim: usize) -> DMatrix<f64> {
    let mut m = DMatrix::zeros(dim, dim);
    for k in 1..dim {
        m[(k - 1, k)] = (k as f64).sqrt();
    }
    m
}

pub struct DenseFock {
    /// `(n_a, n_b, n_c)` of each product-basis index.
    pub states: Vec<(usize, usize, usize)>,
    pub na: DMatrix<f64>,
    pub nb: DMatrix<f64>,
    pub nc: DMatrix<f64>,
    /// `a†b†c + c†ba`.
    pub exchange: DMatrix<f64>,
}

impl DenseFock {
    /// Modes truncated so that every state with `N ≤ n_max` is exact.
    pub fn new(n_max: usize) -> Self {
        let (da, db, dc) = (n_max + 1, n_max + 1, n_max / 2 + 1);
        let (ia, ib, ic) = (
            DMatrix::identity(da, da),
            DMatrix::identity(db, db),
            DMatrix::identity(dc, dc),
        );
        let a = lowering(da).kronecker(&ib).kronecker(&ic);
        let b = ia.kronecker(&lowering(db)).kronecker(&ic);
        let c = ia.kronecker(&ib).kronecker(&lowering(dc));
        let hop = a.transpose() * b.transpose() * &c;
        let exchange = &hop + hop.transpose();
        let states = (0..da)
            .flat_map(|x| (0..db).flat_map(move |y| (0..dc).map(move |z| (x, y, z))))
            .collect();
        DenseFock {
            states,
            na: a.transpose() * &a,
            nb: b.transpose() * &b,
            nc: c.transpose() * &c,
            exchange,
        }
    }

    pub fn hamiltonian(&self, p: &ModelParams) -> DMatrix<f64> {
        let (na, nb, nc) = (&self.na, &self.nb, &self.nc);
        p.u_aa * (na * na)
            + p.u_bb * (nb * nb)
            + p.u_cc * (nc * nc)
            + p.u_ab * (na * nb)
            + p.u_ac * (na * nc)
            + p.u_bc * (nb * nc)
            + p.mu_a * na
            + p.mu_b * nb
            + p.mu_c * nc
            + p.omega * &self.exchange
    }

    pub fn total_number(&self) -> DMatrix<f64> {
        &self.na + &self.nb + 2.0 * &self.nc
    }

    pub fn imbalance(&self) -> DMatrix<f64> {
        &self.na - &self.nb
    }

    /// Ascending eigenvalues of the `(N, J)` block of `h`.
    pub fn block_eigenvalues(&self, h: &DMatrix<f64>, n: usize, j: usize) -> Vec<f64> {
        let idx: Vec<usize> = self
            .states
            .iter()
            .enumerate()
            .filter(|(_, &(a, b, c))| a + b + 2 * c == n && a as i64 - b as i64 == j as i64)
            .map(|(i, _)| i)
            .collect();
        let block = DMatrix::from_fn(idx.len(), idx.len(), |r, s| h[(idx[r], idx[s])]);
        let mut ev: Vec<f64> = SymmetricEigen::new(block).eigenvalues.iter().copied().collect();
        ev.sort_by(f64::total_cmp);
        ev
    }
}

/// Largest entry of `xy − yx`.
pub fn commutator_norm(x: &DMatrix<f64>, y: &DMatrix<f64>) -> f64 {
    (x * y - y * x).amax()
}
