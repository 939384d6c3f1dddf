//! Dense-matrix oracles built from 2x2 Pauli matrices.

#![allow(dead_code)]

use nalgebra::{Complex, DMatrix};
use subsyscode::PauliOperator;

pub type C = Complex<f64>;

fn c(re: f64, im: f64) -> C {
    Complex::new(re, im)
}

pub fn eye2() -> DMatrix<C> {
    DMatrix::from_row_slice(2, 2, &[c(1., 0.), c(0., 0.), c(0., 0.), c(1., 0.)])
}

pub fn x2() -> DMatrix<C> {
    DMatrix::from_row_slice(2, 2, &[c(0., 0.), c(1., 0.), c(1., 0.), c(0., 0.)])
}

pub fn z2() -> DMatrix<C> {
    DMatrix::from_row_slice(2, 2, &[c(1., 0.), c(0., 0.), c(0., 0.), c(-1., 0.)])
}

fn i_pow(k: u8) -> C {
    [c(1., 0.), c(0., 1.), c(-1., 0.), c(0., -1.)][(k % 4) as usize]
}

/// `i^phase * kron_s X^a_s Z^b_s`, site 0 as the most significant factor.
pub fn matrix(p: &PauliOperator) -> DMatrix<C> {
    let mut m = DMatrix::from_element(1, 1, i_pow(p.phase_exp()));
    for s in 0..p.num_sites() {
        let mut f = eye2();
        if p.x_bit(s) {
            f = &f * x2();
        }
        if p.z_bit(s) {
            f = &f * z2();
        }
        m = m.kronecker(&f);
    }
    m
}

pub fn approx_eq(a: &DMatrix<C>, b: &DMatrix<C>) -> bool {
    a.shape() == b.shape() && a.iter().zip(b.iter()).all(|(x, y)| (x - y).norm() < 1e-12)
}

/// Real matrix of a Hermitian X/Z-only operator with phase 0.
pub fn real_matrix(p: &PauliOperator) -> DMatrix<f64> {
    assert!(p.support().all(|s| !(p.x_bit(s) && p.z_bit(s))) && p.phase_exp() == 0);
    matrix(p).map(|z| z.re)
}
