use hmbec::{
    bethe_roots, build_tridiagonal, eigendecompose, expectation_nc, expectation_z, fidelity_curve, ground_state,
    ModelParams, Sector,
};
use proptest::prelude::*;

mod common;

use common::{commutator_norm, DenseFock};

fn params() -> impl Strategy<Value = ModelParams> {
    (prop::array::uniform9(-2.0..2.0f64), 0.1..2.0f64).prop_map(|(u, omega)| ModelParams {
        u_aa: u[0],
        u_bb: u[1],
        u_cc: u[2],
        u_ab: u[3],
        u_ac: u[4],
        u_bc: u[5],
        mu_a: u[6],
        mu_b: u[7],
        mu_c: u[8],
        omega,
    })
}

/// `(N, J)` with `N ≤ 8`, `J ≡ N (mod 2)`.
fn small_sector() -> impl Strategy<Value = (usize, usize)> {
    (0usize..=8).prop_flat_map(|n| (Just(n), (0..=n / 2).prop_map(move |h| n - 2 * h)))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn sector_spectrum_matches_dense_fock(p in params(), (n, j) in small_sector()) {
        let fock = DenseFock::new(8);
        let h = fock.hamiltonian(&p);
        prop_assert!(commutator_norm(&h, &fock.total_number()) < 1e-10);
        prop_assert!(commutator_norm(&h, &fock.imbalance()) < 1e-10);
        let dense = fock.block_eigenvalues(&h, n, j);
        let ev = eigendecompose(&build_tridiagonal(&p, &Sector::new(n as i64, j as i64).unwrap()))
            .unwrap()
            .eigenvalues;
        prop_assert_eq!(ev.len(), dense.len());
        let scale = 1.0 + dense.iter().fold(0.0f64, |m, e| m.max(e.abs()));
        for (a, b) in ev.iter().zip(&dense) {
            prop_assert!((a - b).abs() < 1e-10 * scale, "{a} vs {b}");
        }
    }

    #[test]
    fn bethe_energy_closes(p in params(), (n, j) in small_sector()) {
        let sector = Sector::new(n as i64, j as i64).unwrap();
        let ev = eigendecompose(&build_tridiagonal(&p, &sector)).unwrap().eigenvalues;
        for e in ev {
            let Ok(r) = bethe_roots(&p, &sector, e) else { continue };
            prop_assert_eq!(r.roots.len(), sector.dim() - 1);
            prop_assert!((r.energy - e).abs() < 1e-6 * (1.0 + e.abs()), "{} vs {e}", r.energy);
        }
    }

    #[test]
    fn ground_state_observables_bounded(
        alpha in -3.0..3.0f64,
        lambda in -1.0..1.0f64,
        n in 2usize..120,
        frac in 0.0..1.0f64,
    ) {
        let j = ((n as f64 * frac) as usize / 2) * 2 + n % 2;
        let j = j.min(n);
        let sector = Sector::new(n as i64, j as i64).unwrap();
        let p = ModelParams::from_alpha_lambda(alpha, lambda, n, 1.0);
        let Ok(g) = ground_state(&eigendecompose(&build_tridiagonal(&p, &sector)).unwrap()) else {
            return Ok(());
        };
        prop_assert!((g.norm_sqr() - 1.0).abs() < 1e-10);
        let z = expectation_z(&g);
        prop_assert!((-1.0 - 1e-12..=1.0 + 1e-12).contains(&z), "{z}");
        let nc = expectation_nc(&g);
        prop_assert!((-1e-12..=((n - j) / 2) as f64 + 1e-12).contains(&nc), "{nc}");
    }

    #[test]
    fn fidelity_stays_in_unit_interval(n in 4usize..200, delta in 0.001..0.2f64, lambda in -0.5..0.5f64) {
        let sector = Sector::new((n - n % 2) as i64, 0).unwrap();
        let grid: Vec<f64> = (0..9).map(|i| 0.2 + 0.2 * i as f64).collect();
        let curve = fidelity_curve(
            |a| ModelParams::from_alpha_lambda(a, lambda, n - n % 2, 1.0),
            &sector,
            delta,
            &grid,
        );
        for (w, f) in curve.overlaps.iter().zip(&curve.flagged) {
            if !f {
                prop_assert!((0.0..=1.0 + 1e-12).contains(w), "{w}");
            }
        }
    }
}
