//! Seeded random matrices for tests, demos and generated families.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use crate::linalg::{self, c, CMatrix, Complex64};

pub type SeededRng = ChaCha8Rng;

pub fn rng(seed: u64) -> SeededRng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn gaussian(rng: &mut SeededRng) -> f64 {
    rng.sample(StandardNormal)
}

/// Matrix with independent standard complex Gaussian entries.
pub fn random_complex(rng: &mut SeededRng, rows: usize, cols: usize) -> CMatrix {
    CMatrix::from_fn(rows, cols, |_, _| {
        Complex64::new(gaussian(rng), gaussian(rng)) * c(std::f64::consts::FRAC_1_SQRT_2)
    })
}

/// Hermitian matrix with operator norm exactly `scale` (unless zero).
pub fn random_hermitian(rng: &mut SeededRng, n: usize, scale: f64) -> CMatrix {
    let g = random_complex(rng, n, n);
    let h = linalg::hermitian_part(&g);
    let norm = linalg::hermitian_norm(&h);
    if norm == 0.0 {
        return h;
    }
    h * c(scale / norm)
}

/// Haar-like unitary from the QR factorization of a Gaussian matrix.
pub fn random_unitary(rng: &mut SeededRng, n: usize) -> CMatrix {
    let g = random_complex(rng, n, n);
    let qr = g.qr();
    let q = qr.q();
    let r = qr.r();
    let mut q = q;
    for k in 0..n {
        let d = r[(k, k)];
        if d.norm() > 0.0 {
            let phase = d / c(d.norm());
            let mut col = q.column_mut(k);
            col *= phase;
        }
    }
    q
}

/// Hermitian matrix `V diag(values) V*` with a random unitary `V`.
pub fn random_with_spectrum(rng: &mut SeededRng, values: &[f64]) -> CMatrix {
    let v = random_unitary(rng, values.len());
    let d = linalg::real_diagonal(values);
    linalg::hermitian_part(&(&v * d * v.adjoint()))
}

/// Random orthogonal projection of the given rank.
pub fn random_projection(rng: &mut SeededRng, n: usize, rank: usize) -> CMatrix {
    let v = random_unitary(rng, n);
    let block = v.columns(0, rank.min(n)).into_owned();
    linalg::hermitian_part(&(&block * block.adjoint()))
}

pub fn uniform(rng: &mut SeededRng, lo: f64, hi: f64) -> f64 {
    rng.random_range(lo..hi)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn seeded_generators_are_reproducible() {
        let a = random_hermitian(&mut rng(3), 5, 2.0);
        let b = random_hermitian(&mut rng(3), 5, 2.0);
        assert_eq!(a, b);
        assert!((linalg::hermitian_norm(&a) - 2.0).abs() < 1e-12);
    }

    #[test]
    fn unitary_and_projection() {
        let mut g = rng(11);
        let u = random_unitary(&mut g, 6);
        assert!(linalg::unitarity_defect(&u) < 1e-12);
        let p = random_projection(&mut g, 6, 2);
        assert!(linalg::projection_defect(&p) < 1e-12);
        assert!((p.trace().re - 2.0).abs() < 1e-12);
    }
}
