//! Dense matrices over the Gaussian rationals and the exact elimination
//! kernels (rref, rank, kernel, image, commutant) built on them.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::scalar::GaussianRational as Scalar;

pub type Vector = Vec<Scalar>;

/// Row-major dense matrix. Zero-sized matrices are allowed.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Matrix {
    rows: usize,
    cols: usize,
    data: Vec<Scalar>,
}

impl Matrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Matrix {
            rows,
            cols,
            data: vec![Scalar::zero(); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        Self::scalar(n, &Scalar::one())
    }

    pub fn scalar(n: usize, s: &Scalar) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.set(i, i, s.clone());
        }
        m
    }

    pub fn diag(entries: &[Scalar]) -> Self {
        let mut m = Self::zeros(entries.len(), entries.len());
        for (i, e) in entries.iter().enumerate() {
            m.set(i, i, e.clone());
        }
        m
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> Scalar) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                data.push(f(i, j));
            }
        }
        Matrix { rows, cols, data }
    }

    pub fn from_rows(rows: Vec<Vec<Scalar>>) -> Result<Self> {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        if rows.iter().any(|row| row.len() != c) {
            return Err(Error::SizeMismatch("ragged rows".into()));
        }
        Ok(Matrix {
            rows: r,
            cols: c,
            data: rows.into_iter().flatten().collect(),
        })
    }

    /// Integer convenience constructor, mostly for tests.
    pub fn from_i64(rows: &[&[i64]]) -> Self {
        Self::from_rows(
            rows.iter()
                .map(|r| r.iter().map(|&v| Scalar::from_int(v)).collect())
                .collect(),
        )
        .expect("rectangular integer matrix")
    }

    /// Matrix whose columns are `cols`, each of length `rows`.
    pub fn from_cols(rows: usize, cols: &[Vector]) -> Self {
        Self::from_fn(rows, cols.len(), |i, j| cols[j][i].clone())
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> &Scalar {
        &self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: Scalar) {
        self.data[i * self.cols + j] = v;
    }

    pub fn entries(&self) -> &[Scalar] {
        &self.data
    }

    pub fn row(&self, i: usize) -> &[Scalar] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn col(&self, j: usize) -> Vector {
        (0..self.rows).map(|i| self.get(i, j).clone()).collect()
    }

    pub fn columns(&self) -> Vec<Vector> {
        (0..self.cols).map(|j| self.col(j)).collect()
    }

    pub fn to_rows(&self) -> Vec<Vec<Scalar>> {
        (0..self.rows).map(|i| self.row(i).to_vec()).collect()
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(Zero::is_zero)
    }

    pub fn transpose(&self) -> Matrix {
        Matrix::from_fn(self.cols, self.rows, |i, j| self.get(j, i).clone())
    }

    pub fn trace(&self) -> Scalar {
        let mut t = Scalar::zero();
        for i in 0..self.rows.min(self.cols) {
            t += self.get(i, i);
        }
        t
    }

    pub fn scale(&self, s: &Scalar) -> Matrix {
        Matrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|v| v * s).collect(),
        }
    }

    /// `self + s·I`.
    pub fn add_scalar(&self, s: &Scalar) -> Matrix {
        let mut m = self.clone();
        for i in 0..self.rows.min(self.cols) {
            let v = m.get(i, i) + s;
            m.set(i, i, v);
        }
        m
    }

    pub fn mul_vec(&self, v: &[Scalar]) -> Vector {
        assert_eq!(v.len(), self.cols, "matrix-vector size mismatch");
        (0..self.rows)
            .map(|i| {
                let mut acc = Scalar::zero();
                for (a, b) in self.row(i).iter().zip(v) {
                    if !a.is_zero() && !b.is_zero() {
                        acc += &(a * b);
                    }
                }
                acc
            })
            .collect()
    }

    pub fn submatrix(&self, r0: usize, r1: usize, c0: usize, c1: usize) -> Matrix {
        Matrix::from_fn(r1 - r0, c1 - c0, |i, j| self.get(r0 + i, c0 + j).clone())
    }

    pub fn set_block(&mut self, r0: usize, c0: usize, block: &Matrix) {
        for i in 0..block.rows {
            for j in 0..block.cols {
                self.set(r0 + i, c0 + j, block.get(i, j).clone());
            }
        }
    }

    pub fn hstack(parts: &[&Matrix]) -> Matrix {
        let rows = parts.first().map_or(0, |m| m.rows);
        let cols = parts.iter().map(|m| m.cols).sum();
        let mut out = Matrix::zeros(rows, cols);
        let mut c = 0;
        for p in parts {
            assert_eq!(p.rows, rows, "hstack row mismatch");
            out.set_block(0, c, p);
            c += p.cols;
        }
        out
    }

    pub fn vstack(parts: &[&Matrix]) -> Matrix {
        let cols = parts.first().map_or(0, |m| m.cols);
        let rows = parts.iter().map(|m| m.rows).sum();
        let mut out = Matrix::zeros(rows, cols);
        let mut r = 0;
        for p in parts {
            assert_eq!(p.cols, cols, "vstack column mismatch");
            out.set_block(r, 0, p);
            r += p.rows;
        }
        out
    }

    pub fn block_diag(parts: &[Matrix]) -> Matrix {
        let rows = parts.iter().map(|m| m.rows).sum();
        let cols = parts.iter().map(|m| m.cols).sum();
        let mut out = Matrix::zeros(rows, cols);
        let (mut r, mut c) = (0, 0);
        for p in parts {
            out.set_block(r, c, p);
            r += p.rows;
            c += p.cols;
        }
        out
    }

    /// Reduced row echelon form and the (strictly increasing) pivot columns.
    pub fn rref(&self) -> (Matrix, Vec<usize>) {
        let mut rows = self.to_rows();
        let pivots = rref_in_place(&mut rows, self.cols);
        let mut out = Matrix::zeros(self.rows, self.cols);
        for (i, row) in rows.into_iter().enumerate() {
            for (j, v) in row.into_iter().enumerate() {
                out.set(i, j, v);
            }
        }
        (out, pivots)
    }

    pub fn rank(&self) -> usize {
        let mut rows = self.to_rows();
        rref_in_place(&mut rows, self.cols).len()
    }

    /// Right null space, one vector per free column with that free variable
    /// set to 1 and the other free variables set to 0.
    pub fn kernel_basis(&self) -> Vec<Vector> {
        let (r, pivots) = self.rref();
        let mut is_pivot = vec![false; self.cols];
        for &p in &pivots {
            is_pivot[p] = true;
        }
        (0..self.cols)
            .filter(|&c| !is_pivot[c])
            .map(|free| {
                let mut v = vec![Scalar::zero(); self.cols];
                v[free] = Scalar::one();
                for (row, &pc) in pivots.iter().enumerate() {
                    v[pc] = -r.get(row, free);
                }
                v
            })
            .collect()
    }

    /// The pivot columns of `self`, a canonical basis of the column space.
    pub fn image_basis(&self) -> Vec<Vector> {
        let (_, pivots) = self.rref();
        pivots.into_iter().map(|c| self.col(c)).collect()
    }

    pub fn inverse(&self) -> Option<Matrix> {
        if !self.is_square() {
            return None;
        }
        let n = self.rows;
        let aug = Matrix::hstack(&[self, &Matrix::identity(n)]);
        let (r, pivots) = aug.rref();
        if pivots.len() < n || pivots[n - 1] != n - 1 {
            return None;
        }
        Some(r.submatrix(0, n, n, 2 * n))
    }

    pub fn determinant(&self) -> Scalar {
        assert!(self.is_square(), "determinant of a non-square matrix");
        let n = self.rows;
        let mut rows = self.to_rows();
        let mut det = Scalar::one();
        for col in 0..n {
            let Some(p) = (col..n).find(|&r| !rows[r][col].is_zero()) else {
                return Scalar::zero();
            };
            if p != col {
                rows.swap(p, col);
                det = -det;
            }
            let pivot = rows[col][col].clone();
            det = &det * &pivot;
            let inv = pivot.inv().expect("nonzero pivot");
            let (top, below) = rows.split_at_mut(col + 1);
            let pivot_row = &top[col];
            for row in below.iter_mut() {
                if row[col].is_zero() {
                    continue;
                }
                let f = &row[col] * &inv;
                for (x, pv) in row[col..].iter_mut().zip(&pivot_row[col..]) {
                    if !pv.is_zero() {
                        let d = &f * pv;
                        *x -= &d;
                    }
                }
            }
        }
        det
    }

    /// Solves `basis · X = target` for `X`, where `basis` has independent
    /// columns. Returns `None` when some column of `target` is outside the span.
    pub fn solve_in_basis(basis: &Matrix, target: &Matrix) -> Option<Matrix> {
        assert_eq!(basis.rows, target.rows, "solve_in_basis row mismatch");
        let k = basis.cols;
        let aug = Matrix::hstack(&[basis, target]);
        let (r, pivots) = aug.rref();
        if pivots.len() > k || pivots.iter().enumerate().any(|(i, &p)| p != i) {
            return None;
        }
        if pivots.len() < k {
            // dependent basis columns
            return None;
        }
        Some(r.submatrix(0, k, k, k + target.cols))
    }

    pub fn pow(&self, e: u32) -> Matrix {
        let mut acc = Matrix::identity(self.rows);
        for _ in 0..e {
            acc = &acc * self;
        }
        acc
    }
}

pub(crate) fn rref_in_place(rows: &mut [Vec<Scalar>], ncols: usize) -> Vec<usize> {
    let nrows = rows.len();
    let mut pivots = Vec::new();
    let mut pr = 0;
    for col in 0..ncols {
        if pr >= nrows {
            break;
        }
        let Some(found) = (pr..nrows).find(|&r| !rows[r][col].is_zero()) else {
            continue;
        };
        rows.swap(found, pr);
        let inv = rows[pr][col].inv().expect("nonzero pivot");
        if inv != Scalar::one() {
            for x in rows[pr][col..ncols].iter_mut() {
                if !x.is_zero() {
                    *x = &*x * &inv;
                }
            }
        }
        let (before, rest) = rows.split_at_mut(pr);
        let (pivot_row, after) = rest.split_first_mut().expect("pivot row");
        for row in before.iter_mut().chain(after.iter_mut()) {
            if row[col].is_zero() {
                continue;
            }
            let f = row[col].clone();
            for c in col..ncols {
                if !pivot_row[c].is_zero() {
                    let d = &f * &pivot_row[c];
                    row[c] -= &d;
                }
            }
        }
        pivots.push(col);
        pr += 1;
    }
    pivots
}

impl fmt::Debug for Matrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for i in 0..self.rows {
            if i > 0 {
                write!(f, "; ")?;
            }
            for j in 0..self.cols {
                if j > 0 {
                    write!(f, " ")?;
                }
                write!(f, "{}", self.get(i, j))?;
            }
        }
        write!(f, "]")
    }
}

impl<'a> Add<&'a Matrix> for &'a Matrix {
    type Output = Matrix;
    fn add(self, rhs: &Matrix) -> Matrix {
        assert_eq!((self.rows, self.cols), (rhs.rows, rhs.cols), "matrix add shape");
        Matrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&rhs.data).map(|(a, b)| a + b).collect(),
        }
    }
}

impl<'a> Sub<&'a Matrix> for &'a Matrix {
    type Output = Matrix;
    fn sub(self, rhs: &Matrix) -> Matrix {
        assert_eq!((self.rows, self.cols), (rhs.rows, rhs.cols), "matrix sub shape");
        Matrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&rhs.data).map(|(a, b)| a - b).collect(),
        }
    }
}

impl<'a> Mul<&'a Matrix> for &'a Matrix {
    type Output = Matrix;
    fn mul(self, rhs: &Matrix) -> Matrix {
        assert_eq!(self.cols, rhs.rows, "matrix product shape");
        let mut out = Matrix::zeros(self.rows, rhs.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..rhs.cols {
                    let b = rhs.get(k, j);
                    if !b.is_zero() {
                        let idx = i * out.cols + j;
                        out.data[idx] += &(a * b);
                    }
                }
            }
        }
        out
    }
}

impl Neg for &Matrix {
    type Output = Matrix;
    fn neg(self) -> Matrix {
        Matrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|v| -v).collect(),
        }
    }
}

/// Incremental row-echelon basis of a subspace of `Scalar^len`.
#[derive(Clone, Debug)]
pub(crate) struct SpanBuilder {
    len: usize,
    rows: Vec<(usize, Vector)>,
}

impl SpanBuilder {
    pub(crate) fn new(len: usize) -> Self {
        SpanBuilder { len, rows: Vec::new() }
    }

    pub(crate) fn dim(&self) -> usize {
        self.rows.len()
    }

    fn reduce(&self, v: &mut [Scalar]) {
        for (p, row) in &self.rows {
            if v[*p].is_zero() {
                continue;
            }
            let f = v[*p].clone();
            for (x, r) in v.iter_mut().zip(row) {
                if !r.is_zero() {
                    let d = &f * r;
                    *x -= &d;
                }
            }
        }
    }

    /// Adds `v` to the span; returns `true` if the dimension grew.
    pub(crate) fn insert(&mut self, v: &[Scalar]) -> bool {
        debug_assert_eq!(v.len(), self.len);
        let mut w = v.to_vec();
        self.reduce(&mut w);
        let Some(p) = w.iter().position(|x| !x.is_zero()) else {
            return false;
        };
        let inv = w[p].inv().expect("nonzero");
        for x in w.iter_mut() {
            if !x.is_zero() {
                *x = &*x * &inv;
            }
        }
        self.rows.push((p, w));
        true
    }
}

/// Dimension of `{X : AX = XA}`.
pub fn commutant_dim(a: &Matrix) -> Result<usize> {
    if !a.is_square() {
        return Err(Error::NonSquare {
            rows: a.rows(),
            cols: a.cols(),
        });
    }
    let n = a.rows();
    let rows = sylvester_equations(std::slice::from_ref(a), std::slice::from_ref(a))?;
    Ok(n * n - rows.len())
}

/// Dimension of the unital algebra generated by `mats` inside `M(n)`.
///
/// Breadth-first closure of `span{I}` under left multiplication by the
/// generators; the span of all words is the smallest subspace containing
/// `I` that is stable under those multiplications.
pub fn generated_algebra_dim(mats: &[Matrix], n: usize) -> Result<usize> {
    for m in mats {
        if m.rows() != n || m.cols() != n {
            return Err(Error::SizeMismatch(format!(
                "expected {n}x{n}, got {}x{}",
                m.rows(),
                m.cols()
            )));
        }
    }
    let mut span = SpanBuilder::new(n * n);
    let id = Matrix::identity(n);
    span.insert(id.entries());
    let mut queue = vec![id];
    while let Some(w) = queue.pop() {
        for g in mats {
            let next = g * &w;
            if span.insert(next.entries()) {
                if span.dim() == n * n {
                    return Ok(n * n);
                }
                queue.push(next);
            }
        }
    }
    Ok(span.dim())
}

/// Linearly independent equations cutting out the intertwiner space.
fn sylvester_equations(a_list: &[Matrix], b_list: &[Matrix]) -> Result<Vec<Vector>> {
    if a_list.len() != b_list.len() {
        return Err(Error::LengthMismatch {
            expected: a_list.len(),
            got: b_list.len(),
        });
    }
    let Some(a0) = a_list.first() else {
        return Err(Error::SizeMismatch("empty matrix lists".into()));
    };
    let m = a0.rows();
    let k = b_list[0].rows();
    for (a, b) in a_list.iter().zip(b_list) {
        if !a.is_square() || !b.is_square() || a.rows() != m || b.rows() != k {
            return Err(Error::SizeMismatch("intertwiner operands".into()));
        }
    }
    // Unknown g_{rs} has index r*m + s. Equation (i, j) of block t:
    //   sum_s g_{is} a_{sj} - sum_r b_{ir} g_{rj} = 0.
    let unknowns = k * m;
    let mut rows: Vec<Vector> = Vec::new();
    let mut span = SpanBuilder::new(unknowns);
    for (a, b) in a_list.iter().zip(b_list) {
        for i in 0..k {
            for j in 0..m {
                let mut eq = vec![Scalar::zero(); unknowns];
                for s in 0..m {
                    let v = a.get(s, j);
                    if !v.is_zero() {
                        eq[i * m + s] += v;
                    }
                }
                for r in 0..k {
                    let v = b.get(i, r);
                    if !v.is_zero() {
                        eq[r * m + j] -= v;
                    }
                }
                if eq.iter().any(|x| !x.is_zero()) && span.insert(&eq) {
                    rows.push(eq);
                }
            }
        }
    }
    Ok(rows)
}

/// Basis of `{g : g·a_j = b_j·g for all j}`, where `a_j` is `m×m`, `b_j` is
/// `k×k` and `g` is `k×m`.
pub fn solve_sylvester_space(a_list: &[Matrix], b_list: &[Matrix]) -> Result<Vec<Matrix>> {
    let rows = sylvester_equations(a_list, b_list)?;
    let (m, k) = (a_list[0].rows(), b_list[0].rows());
    let system = if rows.is_empty() {
        Matrix::zeros(0, k * m)
    } else {
        Matrix::from_rows(rows)?
    };
    Ok(system
        .kernel_basis()
        .into_iter()
        .map(|v| Matrix::from_fn(k, m, |r, s| v[r * m + s].clone()))
        .collect())
}
