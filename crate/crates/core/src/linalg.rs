//! Dense complex linear algebra helpers and the Liouville-space conventions.
//!
//! Vectorization is column-major, so `vec(X rho Y) = (Y^T kron X) vec(rho)`.

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;

pub type CMat = DMatrix<Complex64>;
pub type CVec = DVector<Complex64>;

pub const I: Complex64 = Complex64::new(0.0, 1.0);

pub fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

pub fn identity(d: usize) -> CMat {
    CMat::identity(d, d)
}

/// Column-major vectorization.
pub fn vectorize(m: &CMat) -> CVec {
    CVec::from_column_slice(m.as_slice())
}

pub fn unvectorize(v: &CVec, d: usize) -> CMat {
    assert_eq!(v.len(), d * d, "vector length is not a square");
    CMat::from_column_slice(d, d, v.as_slice())
}

/// `X_L rho = X rho`.
pub fn left(x: &CMat) -> CMat {
    identity(x.nrows()).kronecker(x)
}

/// `X_R rho = rho X`.
pub fn right(x: &CMat) -> CMat {
    x.transpose().kronecker(&identity(x.nrows()))
}

/// `X^- rho = [X, rho]`.
pub fn commutator(x: &CMat) -> CMat {
    left(x) - right(x)
}

/// `X^+ rho = {X, rho}`.
pub fn anticommutator(x: &CMat) -> CMat {
    left(x) + right(x)
}

pub fn is_hermitian(m: &CMat, tol: f64) -> bool {
    m.is_square() && (m - m.adjoint()).iter().all(|z| z.norm() <= tol)
}

/// Largest entry modulus of `m - m^dagger`.
pub fn hermiticity_residual(m: &CMat) -> f64 {
    (m - m.adjoint())
        .iter()
        .map(|z| z.norm())
        .fold(0.0, f64::max)
}

/// Eigenvalues (ascending) and eigenvectors of a Hermitian matrix.
pub fn hermitian_eigen(m: &CMat) -> (Vec<f64>, CMat) {
    let sym = (m + m.adjoint()) * c(0.5, 0.0);
    let eig = sym.symmetric_eigen();
    let mut order: Vec<usize> = (0..eig.eigenvalues.len()).collect();
    order.sort_by(|&a, &b| eig.eigenvalues[a].total_cmp(&eig.eigenvalues[b]));
    let values = order.iter().map(|&k| eig.eigenvalues[k]).collect();
    let vectors = CMat::from_columns(
        &order
            .iter()
            .map(|&k| eig.eigenvectors.column(k))
            .collect::<Vec<_>>(),
    );
    (values, vectors)
}

/// Smallest eigenvalue of the Hermitian part.
pub fn min_eigenvalue(m: &CMat) -> f64 {
    let (values, _) = hermitian_eigen(m);
    values.first().copied().unwrap_or(f64::NAN)
}

/// `exp(s H)` for Hermitian `H` and complex `s`, via the eigenbasis.
pub fn hermitian_exp(values: &[f64], vectors: &CMat, s: Complex64) -> CMat {
    let diag = CVec::from_iterator(values.len(), values.iter().map(|&e| (s * e).exp()));
    let mut scaled = vectors.clone();
    for (mut col, d) in scaled.column_iter_mut().zip(diag.iter()) {
        col *= *d;
    }
    scaled * vectors.adjoint()
}

/// Sum of singular values.
pub fn trace_norm(m: &CMat) -> f64 {
    m.clone().singular_values().iter().sum()
}

pub fn trace(m: &CMat) -> Complex64 {
    m.trace()
}

/// Largest entry modulus.
pub fn max_abs(m: &CMat) -> f64 {
    m.iter().map(|z| z.norm()).fold(0.0, f64::max)
}

/// Formats like C's `%.12e`: `1.234567890123e+00`.
pub fn fmt_e12(x: f64) -> String {
    if !x.is_finite() {
        return if x.is_nan() {
            "nan".into()
        } else if x > 0.0 {
            "inf".into()
        } else {
            "-inf".into()
        };
    }
    let s = format!("{x:.12e}");
    let (mantissa, exp) = s.split_once('e').expect("exponent present");
    let exp: i32 = exp.parse().expect("integer exponent");
    format!(
        "{mantissa}e{}{:02}",
        if exp < 0 { '-' } else { '+' },
        exp.abs()
    )
}

/// Builds a matrix from row-major `[re, im]` pairs.
pub fn from_row_major_pairs(d: usize, entries: &[[f64; 2]]) -> Option<CMat> {
    (entries.len() == d * d)
        .then(|| CMat::from_row_iterator(d, d, entries.iter().map(|p| c(p[0], p[1]))))
}
