#![allow(dead_code)]

use spectra_sect::linalg::{self, c, CMatrix};
use spectra_sect::opcore::{ProjectionMatrix, TailDescriptor, TailType, TruncatedOperator};
use spectra_sect::random::{random_hermitian, random_unitary, random_with_spectrum, uniform, SeededRng};

/// Random operator with the given spectrum and a positive linear tail above it.
pub fn operator_with_spectrum(rng: &mut SeededRng, values: &[f64]) -> TruncatedOperator {
    let top = values.iter().fold(0.0_f64, |m, v| m.max(v.abs()));
    let n = values.len();
    let tail = TailDescriptor::positive()
        .with_rate(1.0, 2.0 * (top + 1.0) / (n + 1) as f64)
        .unwrap();
    TruncatedOperator::new(random_with_spectrum(rng, values), tail).unwrap()
}

/// Spectrum in `[-scale, scale]` with no eigenvalue within `margin` of `+-r`.
pub fn spectrum_avoiding(rng: &mut SeededRng, n: usize, scale: f64, r: f64, margin: f64) -> Vec<f64> {
    let mut out = Vec::with_capacity(n);
    while out.len() < n {
        let v = uniform(rng, -scale, scale);
        if (v.abs() - r).abs() > margin {
            out.push(v);
        }
    }
    out.sort_by(f64::total_cmp);
    out
}

/// `1_[r, inf)(A)` plus a random projection of the window `(-r, r)`.
pub fn random_window_section(rng: &mut SeededRng, a: &TruncatedOperator, r: f64) -> ProjectionMatrix {
    let dec = a.eig();
    let (_, upper) = dec.columns_where(|v| v >= r);
    let (_, window) = dec.columns_where(|v| v.abs() < r);
    let mut p = &upper * upper.adjoint();
    let w = window.ncols();
    if w > 0 {
        let rank = (uniform(rng, 0.0, (w + 1) as f64).floor() as usize).min(w);
        let u = random_unitary(rng, w);
        let cols = u.columns(0, rank).into_owned();
        let basis = &window * cols;
        p += &basis * basis.adjoint();
    }
    ProjectionMatrix::new(linalg::hermitian_part(&p), a.tail().positive_tail_type()).unwrap()
}

/// `W P W*` with `W = exp(iH)` acting on the window subspace, `||H|| = angle`.
pub fn rotate_in_window(
    rng: &mut SeededRng,
    a: &TruncatedOperator,
    p: &ProjectionMatrix,
    r: f64,
    angle: f64,
) -> ProjectionMatrix {
    let (_, window) = a.eig().columns_where(|v| v.abs() < r);
    let w = window.ncols();
    if w == 0 {
        return p.clone();
    }
    let rot = linalg::unitary_exp(&random_hermitian(rng, w, angle));
    let n = a.dim();
    let full = &window * (rot - linalg::identity(w)) * window.adjoint() + linalg::identity(n);
    let q = &full * p.entries() * full.adjoint();
    ProjectionMatrix::new(linalg::hermitian_part(&q), p.tail_type()).unwrap()
}

pub fn zero_tail_projection(m: CMatrix) -> ProjectionMatrix {
    ProjectionMatrix::new(m, TailType::Zero).unwrap()
}

pub fn scalar(x: f64) -> CMatrix {
    CMatrix::from_element(1, 1, c(x))
}
