//! Subspaces of `Scalar^n` represented by (not necessarily canonical) bases.

use crate::matrix::{Matrix, Vector};

fn basis_matrix(n: usize, basis: &[Vector]) -> Matrix {
    Matrix::from_cols(n, basis)
}

/// Canonical basis: pivot columns of the stacked vectors.
pub fn span(n: usize, vectors: &[Vector]) -> Vec<Vector> {
    if vectors.is_empty() {
        return Vec::new();
    }
    basis_matrix(n, vectors).image_basis()
}

pub fn sum(n: usize, u: &[Vector], w: &[Vector]) -> Vec<Vector> {
    let all: Vec<Vector> = u.iter().chain(w).cloned().collect();
    span(n, &all)
}

pub fn intersection(n: usize, u: &[Vector], w: &[Vector]) -> Vec<Vector> {
    if u.is_empty() || w.is_empty() {
        return Vec::new();
    }
    let um = basis_matrix(n, u);
    let wm = basis_matrix(n, w);
    let system = Matrix::hstack(&[&um, &(-&wm)]);
    let k = u.len();
    let vecs: Vec<Vector> = system.kernel_basis().into_iter().map(|x| um.mul_vec(&x[..k])).collect();
    span(n, &vecs)
}

/// `{y : yᵀu = 0 for all u}`.
pub fn annihilator(n: usize, u: &[Vector]) -> Vec<Vector> {
    if u.is_empty() {
        return Matrix::identity(n).columns();
    }
    basis_matrix(n, u).transpose().kernel_basis()
}

/// `{v : a·v ∈ U}`.
pub fn preimage(a: &Matrix, u: &[Vector]) -> Vec<Vector> {
    let n = a.rows();
    let ann = annihilator(n, u);
    if ann.is_empty() {
        return Matrix::identity(a.cols()).columns();
    }
    let nm = Matrix::from_cols(n, &ann).transpose();
    (&nm * a).kernel_basis()
}

pub fn dim(n: usize, u: &[Vector]) -> usize {
    if u.is_empty() {
        0
    } else {
        basis_matrix(n, u).rank()
    }
}

pub fn contains(n: usize, u: &[Vector], v: &[Scalar]) -> bool {
    let mut all = u.to_vec();
    all.push(v.to_vec());
    dim(n, &all) == dim(n, u)
}

use crate::scalar::GaussianRational as Scalar;
