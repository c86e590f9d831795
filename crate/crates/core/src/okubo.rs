//! Systems `(x - T) u' = A u` in Okubo normal form, their Schlesinger
//! forms, the image realization of middle convolution and the generic Euler
//! transformation.

use num_traits::Zero;

use crate::error::{Error, Result};
use crate::katz::{predicted_scheme, split_top};
use crate::matrix::{Matrix, Vector};
use crate::scalar::GaussianRational as Scalar;
use crate::scheme::{Part, RiemannScheme};
use crate::schlesinger::{largest_invariant_subspace, verify_scheme, SchlesingerTuple};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OkuboSystem {
    blocks: Vec<usize>,
    poles: Vec<Scalar>,
    a: Matrix,
    scheme: Option<RiemannScheme>,
}

impl OkuboSystem {
    pub fn new(blocks: Vec<usize>, poles: Vec<Scalar>, a: Matrix) -> Result<Self> {
        if blocks.is_empty() || blocks.len() != poles.len() {
            return Err(Error::LengthMismatch {
                expected: blocks.len(),
                got: poles.len(),
            });
        }
        if blocks.contains(&0) {
            return Err(Error::InvalidTuple("block sizes must be positive".into()));
        }
        for (i, t) in poles.iter().enumerate() {
            if poles[..i].contains(t) {
                return Err(Error::DuplicatePole(t.to_string()));
            }
        }
        if !a.is_square() {
            return Err(Error::NonSquare {
                rows: a.rows(),
                cols: a.cols(),
            });
        }
        let n: usize = blocks.iter().sum();
        if a.rows() != n {
            return Err(Error::PartitionSizeMismatch { sum: n, size: a.rows() });
        }
        Ok(OkuboSystem {
            blocks,
            poles,
            a,
            scheme: None,
        })
    }

    /// Attaches the Riemann scheme of the Schlesinger form after checking it.
    pub fn with_scheme(mut self, scheme: RiemannScheme) -> Result<Self> {
        if !verify_scheme(&scf_from_onf(&self), &scheme)? {
            return Err(Error::InvalidTuple(format!(
                "declared scheme {scheme} does not match the system"
            )));
        }
        self.scheme = Some(scheme);
        Ok(self)
    }

    pub(crate) fn with_scheme_if_valid(mut self, scheme: Option<RiemannScheme>) -> Self {
        let scf = scf_from_onf(&self);
        self.scheme = scheme.filter(|s| verify_scheme(&scf, s).unwrap_or(false));
        self
    }

    pub fn blocks(&self) -> &[usize] {
        &self.blocks
    }

    pub fn poles(&self) -> &[Scalar] {
        &self.poles
    }

    pub fn a(&self) -> &Matrix {
        &self.a
    }

    pub fn scheme(&self) -> Option<&RiemannScheme> {
        self.scheme.as_ref()
    }

    pub fn n(&self) -> usize {
        self.a.rows()
    }

    pub fn p(&self) -> usize {
        self.blocks.len()
    }

    /// Start offset of each block.
    pub fn offsets(&self) -> Vec<usize> {
        let mut out = Vec::with_capacity(self.blocks.len());
        let mut acc = 0;
        for &b in &self.blocks {
            out.push(acc);
            acc += b;
        }
        out
    }

    /// `A_{ij}` with 0-based block indices.
    pub fn block(&self, i: usize, j: usize) -> Matrix {
        let off = self.offsets();
        self.a
            .submatrix(off[i], off[i] + self.blocks[i], off[j], off[j] + self.blocks[j])
    }

    /// Reorders blocks (and poles) so that position `k` holds old block
    /// `order[k]` (0-based).
    pub fn reorder_blocks(&self, order: &[usize]) -> Result<OkuboSystem> {
        let p = self.p();
        let mut seen = vec![false; p];
        if order.len() != p || order.iter().any(|&k| k >= p || std::mem::replace(&mut seen[k], true)) {
            return Err(Error::NotAPermutation(p));
        }
        let off = self.offsets();
        let index: Vec<usize> = order.iter().flat_map(|&k| off[k]..off[k] + self.blocks[k]).collect();
        let a = Matrix::from_fn(self.n(), self.n(), |r, c| self.a.get(index[r], index[c]).clone());
        let blocks = order.iter().map(|&k| self.blocks[k]).collect();
        let poles: Vec<Scalar> = order.iter().map(|&k| self.poles[k].clone()).collect();
        let out = OkuboSystem::new(blocks, poles.clone(), a)?;
        let scheme = self
            .scheme
            .as_ref()
            .map(|s| {
                let mut cols = vec![s.column(0).to_vec()];
                cols.extend(order.iter().map(|&k| s.column(k + 1).to_vec()));
                RiemannScheme::new(poles, cols)
            })
            .transpose()?;
        Ok(OkuboSystem { scheme, ..out })
    }
}

/// `A_j = diag(0, I_{n_j}, 0) A`.
pub fn scf_from_onf(o: &OkuboSystem) -> SchlesingerTuple {
    let n = o.n();
    let off = o.offsets();
    let mats = o
        .blocks
        .iter()
        .zip(&off)
        .map(|(&b, &start)| {
            let mut m = Matrix::zeros(n, n);
            m.set_block(start, 0, &o.a.submatrix(start, start + b, 0, n));
            m
        })
        .collect();
    SchlesingerTuple::new(o.poles.clone(), mats)
        .expect("valid Okubo system")
        .with_scheme_unchecked(o.scheme.clone())
}

/// Conjugates `t` into Okubo shape using the image bases of the residues.
pub fn onf_from_scf(t: &SchlesingerTuple) -> Result<OkuboSystem> {
    let n = t.n();
    let images: Vec<Vec<Vector>> = t.matrices().iter().map(Matrix::image_basis).collect();
    let total: usize = images.iter().map(Vec::len).sum();
    if total != n {
        return Err(Error::NotOkuboConvertible(format!(
            "ranks of the residues sum to {total}, rank is {n}"
        )));
    }
    if let Some(j) = images.iter().position(Vec::is_empty) {
        return Err(Error::NotOkuboConvertible(format!("residue {} is zero", j + 1)));
    }
    let cols: Vec<Vector> = images.iter().flatten().cloned().collect();
    let g = Matrix::from_cols(n, &cols);
    let gi = g
        .inverse()
        .ok_or_else(|| Error::NotOkuboConvertible("images of the residues do not span".into()))?;
    let mut sum = Matrix::zeros(n, n);
    for a in t.matrices() {
        sum = &sum + a;
    }
    let a = &(&gi * &sum) * &g;
    let blocks = images.iter().map(Vec::len).collect();
    let out = OkuboSystem::new(blocks, t.poles().to_vec(), a)?;
    Ok(OkuboSystem {
        scheme: t.scheme().cloned(),
        ..out
    })
}

fn block_condition(o: &OkuboSystem, a: &Matrix) -> bool {
    let n = o.n();
    let off = o.offsets();
    (0..o.p()).all(|i| {
        let (s, e) = (off[i], off[i] + o.blocks[i]);
        let aii = a.submatrix(s, e, s, e);
        let others: Vec<usize> = (0..n).filter(|r| *r < s || *r >= e).collect();
        let col = Matrix::from_fn(others.len(), e - s, |r, c| a.get(others[r], s + c).clone());
        let w = if others.is_empty() {
            Matrix::identity(e - s).columns()
        } else {
            col.kernel_basis()
        };
        largest_invariant_subspace(&aii, w).is_empty()
    })
}

/// `rank A = n` together with the block-level form of the τ-quantified rank
/// conditions.
pub fn check_onf_conditions(o: &OkuboSystem) -> bool {
    if o.a.rank() != o.n() {
        return false;
    }
    if o.p() == 1 {
        return true;
    }
    block_condition(o, &o.a) && block_condition(o, &o.a.transpose())
}

/// The Okubo system obtained from `mc_λ(t)` through the images of the
/// residues, for `λ ≠ 0` not an eigenvalue of `A_0`.
pub fn mc_to_onf(t: &SchlesingerTuple, lambda: &Scalar) -> Result<OkuboSystem> {
    if lambda.is_zero() {
        return Err(Error::ZeroLambda);
    }
    let n = t.n();
    let p = t.p();
    let a0 = crate::schlesinger::residue_at_infinity(t);
    if a0.add_scalar(&-lambda).rank() != n {
        return Err(Error::EigenvalueCollision(format!(
            "{lambda} is an eigenvalue of the residue at infinity"
        )));
    }
    // -G'_0 has (j, k) block A_j + λ δ_jk.
    let mut g = Matrix::zeros(p * n, p * n);
    for (j, aj) in t.matrices().iter().enumerate() {
        for k in 0..p {
            let block = if j == k { aj.add_scalar(lambda) } else { aj.clone() };
            g.set_block(j * n, k * n, &block);
        }
    }
    let images: Vec<Matrix> = t
        .matrices()
        .iter()
        .map(|a| Matrix::from_cols(n, &a.image_basis()))
        .collect();
    if let Some(j) = images.iter().position(|m| m.cols() == 0) {
        return Err(Error::NotOkuboConvertible(format!("residue {} is zero", j + 1)));
    }
    let basis = Matrix::block_diag(&images);
    let a = Matrix::solve_in_basis(&basis, &(&g * &basis))
        .expect("the image of the block-diagonal residue matrix is invariant");
    let blocks = images.iter().map(Matrix::cols).collect();
    let out = OkuboSystem::new(blocks, t.poles().to_vec(), a)?;
    let scheme = t.scheme().and_then(|s| predicted_scheme(s, lambda).ok());
    Ok(out.with_scheme_if_valid(scheme))
}

/// Image realization of `mc_λ` on an Okubo system.
pub fn mc_via_images(o: &OkuboSystem, lambda: &Scalar) -> Result<OkuboSystem> {
    if lambda.is_zero() {
        return Err(Error::ZeroLambda);
    }
    if o.a.add_scalar(lambda).rank() != o.n() {
        return Err(Error::EigenvalueCollision(format!("{} is an eigenvalue of A", -lambda)));
    }
    if !check_onf_conditions(o) {
        return Err(Error::ConditionsFail("rank A = n or the block conditions fail".into()));
    }
    mc_to_onf(&scf_from_onf(o), lambda)
}

/// The scheme of `A + λ` given the scheme of `A`.
pub fn euler_scheme(s: &RiemannScheme, blocks: &[usize], lambda: &Scalar) -> Option<RiemannScheme> {
    let n = s.rank();
    let zero = Scalar::zero();
    let mut cols = vec![s
        .column(0)
        .iter()
        .map(|p| Part::new(&p.value - lambda, p.mult))
        .collect::<Vec<_>>()];
    for (col, &nj) in s.columns()[1..].iter().zip(blocks) {
        let (m, rest) = split_top(col, &zero);
        if m != n - nj {
            return None;
        }
        let mut c = vec![Part::new(zero.clone(), m)];
        c.extend(rest.into_iter().map(|p| Part::new(&p.value + lambda, p.mult)));
        cols.push(c);
    }
    RiemannScheme::new(s.poles().to_vec(), cols).ok()
}

/// `E_λ : A ↦ A + λ`.
pub fn euler_transform(o: &OkuboSystem, lambda: &Scalar) -> Result<OkuboSystem> {
    if lambda.is_zero() {
        return Ok(o.clone());
    }
    if o.a.add_scalar(lambda).rank() != o.n() {
        return Err(Error::EigenvalueCollision(format!("{} is an eigenvalue of A", -lambda)));
    }
    if !check_onf_conditions(o) {
        return Err(Error::ConditionsFail("rank A = n or the block conditions fail".into()));
    }
    let out = OkuboSystem::new(o.blocks.clone(), o.poles.clone(), o.a.add_scalar(lambda))?;
    let scheme = o.scheme.as_ref().and_then(|s| euler_scheme(s, &o.blocks, lambda));
    Ok(out.with_scheme_if_valid(scheme))
}

/// Smallest positive integer not in `forbidden`.
pub fn pick_generic(forbidden: &[Scalar]) -> Scalar {
    let mut k = 1i64;
    loop {
        let c = Scalar::from_int(k);
        if !forbidden.contains(&c) {
            return c;
        }
        k += 1;
    }
}

/// Smallest positive integer `ε` outside `forbidden` for which `accept`
/// holds, trying at most `limit` candidates.
pub(crate) fn pick_generic_with(
    forbidden: &[Scalar],
    limit: usize,
    mut accept: impl FnMut(&Scalar) -> bool,
) -> Option<Scalar> {
    let mut tried = forbidden.to_vec();
    for _ in 0..limit {
        let c = pick_generic(&tried);
        if accept(&c) {
            return Some(c);
        }
        tried.push(c);
    }
    None
}
