//! Dense-free eigen-solvers for real symmetric tridiagonal matrices.
//!
//! `diag` has length `n`, `off` has length `n − 1` with `off[i]` coupling
//! rows `i` and `i + 1`.

use crate::error::{Error, Result};

const MAX_QL_ITER: usize = 60;

/// Implicit-shift QL. Returns eigenvalues in ascending order together with
/// (optionally) the orthonormal eigenvectors, one row per eigenvalue.
pub fn ql_implicit(diag: &[f64], off: &[f64], want_vectors: bool) -> Result<(Vec<f64>, Vec<Vec<f64>>)> {
    let n = diag.len();
    assert!(n == 0 || off.len() == n - 1, "off-diagonal length must be n − 1");
    if n == 0 {
        return Ok((Vec::new(), Vec::new()));
    }
    let mut d = diag.to_vec();
    let mut e = vec![0.0; n];
    e[..n - 1].copy_from_slice(off);

    // rows are eigenvectors: z[i * n + k] is component k of vector i
    let mut z = if want_vectors {
        let mut z = vec![0.0; n * n];
        for i in 0..n {
            z[i * n + i] = 1.0;
        }
        z
    } else {
        Vec::new()
    };

    for l in 0..n {
        let mut iter = 0;
        loop {
            let mut m = l;
            while m + 1 < n {
                let dd = d[m].abs() + d[m + 1].abs();
                if e[m].abs() <= f64::EPSILON * dd {
                    break;
                }
                m += 1;
            }
            if m == l {
                break;
            }
            iter += 1;
            if iter > MAX_QL_ITER {
                return Err(Error::NoConvergence { index: l });
            }
            let mut g = (d[l + 1] - d[l]) / (2.0 * e[l]);
            let mut r = g.hypot(1.0);
            g = d[m] - d[l] + e[l] / (g + r.copysign(g));
            let (mut s, mut c, mut p) = (1.0f64, 1.0f64, 0.0f64);
            let mut i = m;
            let mut deflated = false;
            while i > l {
                i -= 1;
                let f = s * e[i];
                let b = c * e[i];
                r = f.hypot(g);
                e[i + 1] = r;
                if r == 0.0 {
                    d[i + 1] -= p;
                    e[m] = 0.0;
                    deflated = true;
                    break;
                }
                s = f / r;
                c = g / r;
                g = d[i + 1] - p;
                r = (d[i] - g) * s + 2.0 * c * b;
                p = s * r;
                d[i + 1] = g + p;
                g = c * r - b;
                if want_vectors {
                    let (head, tail) = z.split_at_mut((i + 1) * n);
                    let zi = &mut head[i * n..];
                    let zi1 = &mut tail[..n];
                    for (a, b) in zi.iter_mut().zip(zi1.iter_mut()) {
                        let f = *b;
                        *b = s * *a + c * f;
                        *a = c * *a - s * f;
                    }
                }
            }
            if deflated {
                continue;
            }
            d[l] -= p;
            e[l] = g;
            e[m] = 0.0;
        }
    }

    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| d[a].total_cmp(&d[b]).then(a.cmp(&b)));
    let values = order.iter().map(|&i| d[i]).collect();
    let vectors = if want_vectors {
        order.iter().map(|&i| z[i * n..(i + 1) * n].to_vec()).collect()
    } else {
        Vec::new()
    };
    Ok((values, vectors))
}

/// Number of eigenvalues strictly below `x` (Sturm sequence count).
pub fn sturm_count(diag: &[f64], off: &[f64], x: f64) -> usize {
    let (lo, hi) = gershgorin(diag, off);
    sturm_count_scaled(
        diag,
        off,
        x,
        f64::EPSILON * f64::EPSILON * lo.abs().max(hi.abs()).max(1.0),
    )
}

fn sturm_count_scaled(diag: &[f64], off: &[f64], x: f64, tiny: f64) -> usize {
    let mut count = 0;
    let mut q = 1.0;
    for i in 0..diag.len() {
        let coupling = if i == 0 { 0.0 } else { off[i - 1] * off[i - 1] / q };
        q = diag[i] - x - coupling;
        if q == 0.0 {
            q = -tiny;
        }
        if q < 0.0 {
            count += 1;
        }
    }
    count
}

/// Gershgorin interval `[lo, hi]` containing the whole spectrum.
pub fn gershgorin(diag: &[f64], off: &[f64]) -> (f64, f64) {
    let n = diag.len();
    let mut lo = f64::INFINITY;
    let mut hi = f64::NEG_INFINITY;
    for i in 0..n {
        let left = if i > 0 { off[i - 1].abs() } else { 0.0 };
        let right = if i + 1 < n { off[i].abs() } else { 0.0 };
        lo = lo.min(diag[i] - left - right);
        hi = hi.max(diag[i] + left + right);
    }
    (lo, hi)
}

/// The `k`-th smallest eigenvalue (0-based) by Sturm bisection, resolved to
/// machine precision.
pub fn kth_eigenvalue(diag: &[f64], off: &[f64], k: usize) -> f64 {
    assert!(k < diag.len());
    let (lo0, hi0) = gershgorin(diag, off);
    let pad = 1e-12 * (lo0.abs() + hi0.abs()) + f64::MIN_POSITIVE;
    let tiny = f64::EPSILON * f64::EPSILON * lo0.abs().max(hi0.abs()).max(1.0);
    let (mut lo, mut hi) = (lo0 - pad, hi0 + pad);
    for _ in 0..2000 {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        if sturm_count_scaled(diag, off, mid, tiny) > k {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    0.5 * (lo + hi)
}

/// Eigenvector for an (accurately known) eigenvalue by inverse iteration,
/// unit-normalised with the largest-magnitude component positive.
pub fn inverse_iteration(diag: &[f64], off: &[f64], eigenvalue: f64) -> Vec<f64> {
    let n = diag.len();
    if n == 1 {
        return vec![1.0];
    }
    let (lo, hi) = gershgorin(diag, off);
    let norm = lo.abs().max(hi.abs()).max(f64::MIN_POSITIVE);
    let lu = TridiagLu::factor(diag, off, eigenvalue, f64::EPSILON * norm);
    let mut x: Vec<f64> = (0..n).map(|i| 1.0 + 1e-3 * ((i * 7919) % 97) as f64 / 97.0).collect();
    for _ in 0..4 {
        lu.solve(&mut x);
        normalise(&mut x);
    }
    fix_sign(&mut x);
    x
}

pub(crate) fn normalise(x: &mut [f64]) {
    let norm = x.iter().map(|v| v * v).sum::<f64>().sqrt();
    if norm > 0.0 {
        x.iter_mut().for_each(|v| *v /= norm);
    }
}

/// Largest-magnitude component made positive (first one on ties).
pub(crate) fn fix_sign(x: &mut [f64]) {
    let mut best = 0;
    for (i, v) in x.iter().enumerate() {
        if v.abs() > x[best].abs() {
            best = i;
        }
    }
    if x.get(best).is_some_and(|&v| v < 0.0) {
        x.iter_mut().for_each(|v| *v = -*v);
    }
}

/// LU factorisation of `T − σI` with partial pivoting (second super-diagonal
/// fill-in), as in LAPACK `dgttrf`.
struct TridiagLu {
    dl: Vec<f64>,
    d: Vec<f64>,
    du: Vec<f64>,
    du2: Vec<f64>,
    swap: Vec<bool>,
}

impl TridiagLu {
    fn factor(diag: &[f64], off: &[f64], shift: f64, tiny: f64) -> Self {
        let n = diag.len();
        let mut d: Vec<f64> = diag.iter().map(|v| v - shift).collect();
        let mut dl = off.to_vec();
        let mut du = off.to_vec();
        let mut du2 = vec![0.0; n.saturating_sub(2)];
        let mut swap = vec![false; n.saturating_sub(1)];
        for i in 0..n - 1 {
            if d[i].abs() >= dl[i].abs() {
                if d[i] == 0.0 {
                    d[i] = tiny;
                }
                let fact = dl[i] / d[i];
                dl[i] = fact;
                d[i + 1] -= fact * du[i];
            } else {
                let fact = d[i] / dl[i];
                d[i] = dl[i];
                dl[i] = fact;
                let temp = du[i];
                du[i] = d[i + 1];
                d[i + 1] = temp - fact * d[i + 1];
                if i + 1 < n - 1 {
                    du2[i] = du[i + 1];
                    du[i + 1] *= -fact;
                }
                swap[i] = true;
            }
        }
        if d[n - 1] == 0.0 {
            d[n - 1] = tiny;
        }
        for v in d.iter_mut() {
            if v.abs() < tiny {
                *v = tiny.copysign(*v);
            }
        }
        TridiagLu { dl, d, du, du2, swap }
    }

    fn solve(&self, b: &mut [f64]) {
        let n = self.d.len();
        for i in 0..n - 1 {
            if self.swap[i] {
                b.swap(i, i + 1);
                b[i + 1] -= self.dl[i] * b[i];
            } else {
                b[i + 1] -= self.dl[i] * b[i];
            }
        }
        b[n - 1] /= self.d[n - 1];
        if n > 1 {
            b[n - 2] = (b[n - 2] - self.du[n - 2] * b[n - 1]) / self.d[n - 2];
        }
        for i in (0..n.saturating_sub(2)).rev() {
            b[i] = (b[i] - self.du[i] * b[i + 1] - self.du2[i] * b[i + 2]) / self.d[i];
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn apply(diag: &[f64], off: &[f64], v: &[f64]) -> Vec<f64> {
        let n = diag.len();
        (0..n)
            .map(|i| {
                let mut s = diag[i] * v[i];
                if i > 0 {
                    s += off[i - 1] * v[i - 1];
                }
                if i + 1 < n {
                    s += off[i] * v[i + 1];
                }
                s
            })
            .collect()
    }

    fn sample(n: usize) -> (Vec<f64>, Vec<f64>) {
        let diag = (0..n).map(|i| ((i * 37 % 11) as f64 - 5.0) * 0.7).collect();
        let off = (0..n - 1).map(|i| 0.3 + ((i * 13 % 7) as f64) * 0.2).collect();
        (diag, off)
    }

    #[test]
    fn two_by_two_closed_form() {
        let (mu, om) = (1.3, 0.7);
        let (vals, vecs) = ql_implicit(&[0.0, mu], &[om], true).unwrap();
        let disc = (mu * mu + 4.0 * om * om).sqrt();
        assert!((vals[0] - (mu - disc) / 2.0).abs() < 1e-14);
        assert!((vals[1] - (mu + disc) / 2.0).abs() < 1e-14);
        assert_eq!(vecs.len(), 2);
    }

    #[test]
    fn residuals_and_orthonormality() {
        let (diag, off) = sample(120);
        let (vals, vecs) = ql_implicit(&diag, &off, true).unwrap();
        let (lo, hi) = gershgorin(&diag, &off);
        let norm = lo.abs().max(hi.abs());
        for (e, v) in vals.iter().zip(&vecs) {
            let hv = apply(&diag, &off, v);
            let res = hv.iter().zip(v).map(|(a, b)| (a - e * b).powi(2)).sum::<f64>().sqrt();
            assert!(res <= 1e-12 * norm, "residual {res}");
        }
        for i in 0..vecs.len() {
            for j in i..vecs.len() {
                let dot: f64 = vecs[i].iter().zip(&vecs[j]).map(|(a, b)| a * b).sum();
                let want = if i == j { 1.0 } else { 0.0 };
                assert!((dot - want).abs() < 1e-12);
            }
        }
        assert!(vals.windows(2).all(|w| w[0] <= w[1]));
    }

    #[test]
    fn diagonal_matrix_sorted() {
        let diag = [3.0, -1.0, 2.0, 0.5];
        let (vals, _) = ql_implicit(&diag, &[0.0, 0.0, 0.0], false).unwrap();
        assert_eq!(vals, vec![-1.0, 0.5, 2.0, 3.0]);
    }

    #[test]
    fn bisection_matches_ql() {
        let (diag, off) = sample(80);
        let (vals, _) = ql_implicit(&diag, &off, false).unwrap();
        for k in [0, 1, 40, 79] {
            let e = kth_eigenvalue(&diag, &off, k);
            assert!((e - vals[k]).abs() < 1e-12, "k={k}: {e} vs {}", vals[k]);
        }
        assert_eq!(sturm_count(&diag, &off, vals[10] + 1e-9), 11);
    }

    #[test]
    fn inverse_iteration_matches_ql_vector() {
        let (diag, off) = sample(60);
        let (vals, vecs) = ql_implicit(&diag, &off, true).unwrap();
        for k in [0, 5] {
            let mut want = vecs[k].clone();
            fix_sign(&mut want);
            let got = inverse_iteration(&diag, &off, kth_eigenvalue(&diag, &off, k));
            let err = got.iter().zip(&want).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max);
            assert!(err < 1e-10, "k={k} err={err} (E={})", vals[k]);
        }
    }
}
