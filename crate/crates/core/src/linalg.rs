//! Dense complex eigensolver for general (non-Hermitian) matrices.
//!
//! Householder reduction to Hessenberg form followed by single-shift QR with
//! Wilkinson shifts, giving a Schur form `A = Q T Q†`. Eigenvectors are
//! recovered from `T` by back substitution.

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64 as C64;

use crate::error::{invalid, Result};

const ZERO: C64 = C64 { re: 0.0, im: 0.0 };
const ONE: C64 = C64 { re: 1.0, im: 0.0 };

#[derive(Clone, Debug)]
pub struct Schur {
    pub q: DMatrix<C64>,
    pub t: DMatrix<C64>,
}

#[derive(Clone, Debug)]
pub struct Eigen {
    pub values: DVector<C64>,
    /// Unit-norm right eigenvectors as columns.
    pub vectors: DMatrix<C64>,
}

fn hessenberg(a: &mut DMatrix<C64>, q: &mut DMatrix<C64>) {
    let n = a.nrows();
    for k in 0..n.saturating_sub(2) {
        let x: Vec<C64> = (k + 1..n).map(|i| a[(i, k)]).collect();
        let norm = x.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        if norm == 0.0 {
            continue;
        }
        let phase = if x[0].norm() == 0.0 { ONE } else { x[0] / x[0].norm() };
        let alpha = -phase * norm;
        let mut v = x;
        v[0] -= alpha;
        let vn = v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        if vn == 0.0 {
            continue;
        }
        for z in v.iter_mut() {
            *z /= vn;
        }
        // A ← P A with P = I − 2vv†, acting on rows k+1..n.
        for j in 0..n {
            let dot: C64 = v.iter().enumerate().map(|(r, vr)| vr.conj() * a[(k + 1 + r, j)]).sum();
            for (r, vr) in v.iter().enumerate() {
                a[(k + 1 + r, j)] -= 2.0 * vr * dot;
            }
        }
        // A ← A P and Q ← Q P on columns k+1..n.
        for m in [&mut *a, &mut *q] {
            for i in 0..n {
                let dot: C64 = v.iter().enumerate().map(|(c, vc)| m[(i, k + 1 + c)] * vc).sum();
                for (c, vc) in v.iter().enumerate() {
                    m[(i, k + 1 + c)] -= 2.0 * dot * vc.conj();
                }
            }
        }
        for i in k + 2..n {
            a[(i, k)] = ZERO;
        }
    }
}

/// Unitary rotation `[c s; −s̄ c]` mapping `(x, y)` to `(r, 0)`.
fn givens(x: C64, y: C64) -> (f64, C64) {
    if y == ZERO {
        return (1.0, ZERO);
    }
    if x == ZERO {
        return (0.0, y.conj() / y.norm());
    }
    let norm = (x.norm_sqr() + y.norm_sqr()).sqrt();
    let phase = x / x.norm();
    (x.norm() / norm, phase * y.conj() / norm)
}

/// Complex Schur decomposition `A = Q T Q†` with `T` upper triangular.
pub fn schur(a: &DMatrix<C64>) -> Result<Schur> {
    let n = a.nrows();
    if n != a.ncols() {
        return invalid("Schur decomposition needs a square matrix");
    }
    let mut t = a.clone();
    let mut q = DMatrix::identity(n, n);
    if n <= 1 {
        return Ok(Schur { q, t });
    }
    hessenberg(&mut t, &mut q);

    let eps = f64::EPSILON;
    let mut hi = n - 1;
    let mut iter = 0usize;
    let mut total = 0usize;
    while hi > 0 {
        let mut l = hi;
        while l > 0 {
            let scale = t[(l - 1, l - 1)].norm() + t[(l, l)].norm();
            let floor = if scale == 0.0 { f64::MIN_POSITIVE } else { eps * scale };
            if t[(l, l - 1)].norm() <= floor {
                t[(l, l - 1)] = ZERO;
                break;
            }
            l -= 1;
        }
        if l == hi {
            hi -= 1;
            iter = 0;
            continue;
        }
        iter += 1;
        total += 1;
        if total > 100 * n {
            return invalid("complex QR iteration did not converge");
        }

        let (a11, a12, a21, a22) = (t[(hi - 1, hi - 1)], t[(hi - 1, hi)], t[(hi, hi - 1)], t[(hi, hi)]);
        let shift = if iter % 11 == 0 {
            // Exceptional shift to break cycles.
            a22 + C64::new(0.75 * a21.norm(), 0.0)
        } else {
            let half = (a11 - a22) * 0.5;
            let disc = (half * half + a12 * a21).sqrt();
            let mean = (a11 + a22) * 0.5;
            let (r1, r2) = (mean + disc, mean - disc);
            if (r1 - a22).norm() < (r2 - a22).norm() { r1 } else { r2 }
        };

        let mut x = t[(l, l)] - shift;
        let mut y = t[(l + 1, l)];
        for k in l..hi {
            let (c, s) = givens(x, y);
            let col0 = if k > l { k - 1 } else { l };
            for j in col0..n {
                let (h1, h2) = (t[(k, j)], t[(k + 1, j)]);
                t[(k, j)] = c * h1 + s * h2;
                t[(k + 1, j)] = -s.conj() * h1 + c * h2;
            }
            let row_end = (k + 2).min(hi);
            for i in 0..=row_end {
                let (h1, h2) = (t[(i, k)], t[(i, k + 1)]);
                t[(i, k)] = h1 * c + h2 * s.conj();
                t[(i, k + 1)] = -h1 * s + h2 * c;
            }
            for i in 0..n {
                let (h1, h2) = (q[(i, k)], q[(i, k + 1)]);
                q[(i, k)] = h1 * c + h2 * s.conj();
                q[(i, k + 1)] = -h1 * s + h2 * c;
            }
            if k > l {
                t[(k + 1, k - 1)] = ZERO;
            }
            if k + 1 < hi {
                x = t[(k + 1, k)];
                y = t[(k + 2, k)];
            }
        }
    }
    for j in 0..n {
        for i in j + 1..n {
            t[(i, j)] = ZERO;
        }
    }
    Ok(Schur { q, t })
}

pub fn eigenvalues(a: &DMatrix<C64>) -> Result<DVector<C64>> {
    let s = schur(a)?;
    Ok(s.t.diagonal())
}

/// Eigenvalues and unit right eigenvectors.
///
/// When two diagonal entries of `T` coincide to working precision and the
/// back-substitution residual vanishes, the component is set to zero, which
/// yields independent vectors for a diagonalizable degenerate eigenvalue.
pub fn eigen(a: &DMatrix<C64>) -> Result<Eigen> {
    let s = schur(a)?;
    let n = a.nrows();
    let t = &s.t;
    let tnorm = t.iter().map(|z| z.norm()).fold(0.0, f64::max).max(f64::MIN_POSITIVE);
    let small = 1e3 * f64::EPSILON * tnorm;
    let mut y = DMatrix::<C64>::zeros(n, n);
    for k in 0..n {
        let lambda = t[(k, k)];
        y[(k, k)] = ONE;
        for i in (0..k).rev() {
            let rhs: C64 = (i + 1..=k).map(|j| t[(i, j)] * y[(j, k)]).sum();
            let den = t[(i, i)] - lambda;
            y[(i, k)] = if den.norm() > small {
                -rhs / den
            } else if rhs.norm() <= small * (1.0 + col_norm(&y, k)) {
                ZERO
            } else {
                -rhs / C64::new(small, 0.0)
            };
        }
    }
    let mut vectors = &s.q * y;
    for k in 0..n {
        let nrm = col_norm(&vectors, k);
        if nrm > 0.0 {
            let mut col = vectors.column_mut(k);
            col /= C64::new(nrm, 0.0);
        }
    }
    Ok(Eigen { values: t.diagonal(), vectors })
}

fn col_norm(m: &DMatrix<C64>, k: usize) -> f64 {
    m.column(k).iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn random(n: usize, seed: u64) -> DMatrix<C64> {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        DMatrix::from_fn(n, n, |_, _| C64::new(rng.random::<f64>() - 0.5, rng.random::<f64>() - 0.5))
    }

    fn max_abs(m: &DMatrix<C64>) -> f64 {
        m.iter().map(|z| z.norm()).fold(0.0, f64::max)
    }

    #[test]
    fn schur_reconstructs() {
        for (n, seed) in [(1, 0), (2, 1), (4, 2), (9, 3), (30, 4), (51, 5)] {
            let a = random(n, seed);
            let s = schur(&a).unwrap();
            let recon = &s.q * &s.t * s.q.adjoint();
            assert!(max_abs(&(recon - &a)) < 1e-12 * n as f64, "n={n}");
            let unit = s.q.adjoint() * &s.q - DMatrix::identity(n, n);
            assert!(max_abs(&unit) < 1e-12 * n as f64);
        }
    }

    #[test]
    fn eigenpairs_satisfy_definition() {
        for (n, seed) in [(3, 7), (8, 8), (40, 9)] {
            let a = random(n, seed);
            let e = eigen(&a).unwrap();
            for k in 0..n {
                let v = e.vectors.column(k);
                let r = &a * v - v * e.values[k];
                assert!(r.norm() < 1e-10, "n={n} k={k} {}", r.norm());
            }
        }
    }

    #[test]
    fn known_spectrum() {
        // Rotation generator: eigenvalues ±i.
        let a = DMatrix::from_row_slice(2, 2, &[ZERO, -ONE, ONE, ZERO]);
        let mut v: Vec<f64> = eigenvalues(&a).unwrap().iter().map(|z| z.im).collect();
        v.sort_by(f64::total_cmp);
        assert!((v[0] + 1.0).abs() < 1e-14 && (v[1] - 1.0).abs() < 1e-14);
    }

    #[test]
    fn degenerate_diagonalizable() {
        // Arrow matrix with a repeated dot diagonal: many exactly degenerate
        // eigenvalues, still diagonalizable.
        let n = 12;
        let d = C64::new(1.44, -0.0017);
        let mut a = DMatrix::from_diagonal_element(n, n, d);
        a[(0, 0)] = C64::new(1.44, -0.0165);
        for j in 1..n {
            a[(0, j)] = C64::new(0.0167, 0.0);
            a[(j, 0)] = C64::new(0.0167, 0.0);
        }
        let e = eigen(&a).unwrap();
        for k in 0..n {
            let v = e.vectors.column(k);
            assert!((&a * v - v * e.values[k]).norm() < 1e-12);
        }
        let inv = e.vectors.clone().try_inverse().expect("eigenvectors independent");
        assert!(max_abs(&inv) < 1e3);
    }
}
