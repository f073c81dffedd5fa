//! Triplet storage for the (very sparse) ladder and projector operators.
//!
//! Dense matrices handed to these kernels are column-major `n × n` slices, the
//! layout nalgebra uses for `DMatrix`.

use nalgebra::DMatrix;
use num_complex::Complex64 as C64;

#[derive(Clone, Debug, Default, PartialEq)]
pub struct SparseOp {
    dim: usize,
    entries: Vec<(usize, usize, C64)>,
}

impl SparseOp {
    pub fn from_dense(m: &DMatrix<C64>) -> Self {
        let dim = m.nrows();
        let mut entries = Vec::new();
        for i in 0..dim {
            for k in 0..m.ncols() {
                let v = m[(i, k)];
                if v != C64::new(0.0, 0.0) {
                    entries.push((i, k, v));
                }
            }
        }
        SparseOp { dim, entries }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn nnz(&self) -> usize {
        self.entries.len()
    }

    pub fn entries(&self) -> &[(usize, usize, C64)] {
        &self.entries
    }

    /// `out += scale · A x`
    pub fn matvec_acc(&self, x: &[C64], scale: C64, out: &mut [C64]) {
        for &(i, k, v) in &self.entries {
            out[i] += scale * v * x[k];
        }
    }

    /// `out += scale · A ρ` for a column-major dense `ρ`.
    pub fn left_mul_acc(&self, rho: &[C64], scale: C64, out: &mut [C64]) {
        let n = self.dim;
        for j in 0..n {
            let col = &rho[j * n..(j + 1) * n];
            let out_col = &mut out[j * n..(j + 1) * n];
            for &(i, k, v) in &self.entries {
                out_col[i] += scale * v * col[k];
            }
        }
    }

    /// `out += A ρ A†`
    pub fn sandwich_acc(&self, rho: &[C64], out: &mut [C64]) {
        let n = self.dim;
        for &(b, d, y) in &self.entries {
            let yc = y.conj();
            let col = &rho[d * n..(d + 1) * n];
            let out_col = &mut out[b * n..(b + 1) * n];
            for &(a, c, x) in &self.entries {
                out_col[a] += x * col[c] * yc;
            }
        }
    }

    /// `⟨x|A|x⟩` without normalization.
    pub fn expectation_vec(&self, x: &[C64]) -> C64 {
        self.entries.iter().map(|&(i, k, v)| x[i].conj() * v * x[k]).sum()
    }

    /// `tr(A ρ)` for a column-major `ρ`.
    pub fn trace_with(&self, rho: &[C64]) -> C64 {
        let n = self.dim;
        self.entries.iter().map(|&(i, k, v)| v * rho[k + i * n]).sum()
    }

    /// Entry-wise `self + scale·other`, merged on a common pattern.
    pub fn combined(&self, other: &SparseOp, scale: C64) -> SparseOp {
        let mut dense = DMatrix::<C64>::zeros(self.dim, self.dim);
        for &(i, k, v) in &self.entries {
            dense[(i, k)] += v;
        }
        for &(i, k, v) in &other.entries {
            dense[(i, k)] += scale * v;
        }
        SparseOp::from_dense(&dense)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sample(n: usize, seed: u64) -> DMatrix<C64> {
        // Small LCG; only needs to be irregular.
        let mut s = seed;
        let mut next = move || {
            s = s.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
            ((s >> 11) as f64 / (1u64 << 53) as f64) - 0.5
        };
        DMatrix::from_fn(n, n, |_, _| {
            let (a, b, keep) = (next(), next(), next());
            if keep > 0.1 {
                C64::new(0.0, 0.0)
            } else {
                C64::new(a, b)
            }
        })
    }

    #[test]
    fn kernels_match_dense_products() {
        let n = 7;
        let a = sample(n, 1);
        let rho = DMatrix::from_fn(n, n, |i, j| C64::new((i * 3 + j) as f64, (i as f64) - (j as f64)));
        let sp = SparseOp::from_dense(&a);

        let mut out = vec![C64::new(0.0, 0.0); n * n];
        sp.left_mul_acc(rho.as_slice(), C64::new(1.0, 0.0), &mut out);
        let dense = &a * &rho;
        for (x, y) in out.iter().zip(dense.as_slice()) {
            assert!((x - y).norm() < 1e-12);
        }

        let mut out = vec![C64::new(0.0, 0.0); n * n];
        sp.sandwich_acc(rho.as_slice(), &mut out);
        let dense = &a * &rho * a.adjoint();
        for (x, y) in out.iter().zip(dense.as_slice()) {
            assert!((x - y).norm() < 1e-10);
        }

        let tr = sp.trace_with(rho.as_slice());
        assert!((tr - (&a * &rho).trace()).norm() < 1e-10);
    }
}
