//! Addition, convolution, middle convolution and the pole permutations, with
//! the induced transformations of Riemann schemes.

use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::matrix::{Matrix, Vector};
use crate::scalar::GaussianRational as Scalar;
use crate::scheme::{Part, RiemannScheme};
use crate::schlesinger::{is_irreducible, residue_at_infinity, SchlesingerTuple};

/// The convolution `(G_1, ..., G_p)` together with the invariant subspaces
/// `K`, `L_λ` and a complement of their sum.
#[derive(Clone, Debug)]
pub struct ConvolutionData {
    pub big_matrices: Vec<Matrix>,
    pub k_basis: Vec<Vector>,
    pub l_basis: Vec<Vector>,
    /// Standard basis vectors completing `K + L_λ`.
    pub complement_basis: Vec<Vector>,
    /// Reduced rows spanning `K + L_λ` and their pivot columns.
    sum_rows: Vec<Vector>,
    sum_pivots: Vec<usize>,
    complement_positions: Vec<usize>,
}

impl ConvolutionData {
    pub fn dim(&self) -> usize {
        self.big_matrices.first().map_or(0, Matrix::rows)
    }

    /// Coordinates of the class of `v` in the complement basis.
    pub fn quotient_coords(&self, v: &[Scalar]) -> Vector {
        let mut w = v.to_vec();
        for (row, &p) in self.sum_rows.iter().zip(&self.sum_pivots) {
            if w[p].is_zero() {
                continue;
            }
            let f = w[p].clone();
            for (x, r) in w.iter_mut().zip(row) {
                if !r.is_zero() {
                    *x -= &(&f * r);
                }
            }
        }
        self.complement_positions.iter().map(|&c| w[c].clone()).collect()
    }

    /// Matrix of the map induced by `m` on the quotient.
    pub fn induced(&self, m: &Matrix) -> Matrix {
        let cols: Vec<Vector> = self
            .complement_positions
            .iter()
            .map(|&c| self.quotient_coords(&m.col(c)))
            .collect();
        Matrix::from_cols(self.complement_positions.len(), &cols)
    }
}

pub fn addition(t: &SchlesingerTuple, mu: &[Scalar]) -> Result<SchlesingerTuple> {
    if mu.len() != t.p() {
        return Err(Error::LengthMismatch {
            expected: t.p(),
            got: mu.len(),
        });
    }
    let mats = t.matrices().iter().zip(mu).map(|(a, m)| a.add_scalar(m)).collect();
    let out = SchlesingerTuple::new(t.poles().to_vec(), mats)?;
    let scheme = t.scheme().map(|s| shift_scheme(s, mu)).transpose()?;
    Ok(out.with_scheme_unchecked(scheme))
}

pub fn shift_scheme(s: &RiemannScheme, mu: &[Scalar]) -> Result<RiemannScheme> {
    let mut total = Scalar::zero();
    for m in mu {
        total += m;
    }
    let mut cols: Vec<Vec<Part>> = Vec::with_capacity(s.columns().len());
    cols.push(
        s.column(0)
            .iter()
            .map(|p| Part::new(&p.value - &total, p.mult))
            .collect(),
    );
    for (col, m) in s.columns()[1..].iter().zip(mu) {
        cols.push(col.iter().map(|p| Part::new(&p.value + m, p.mult)).collect());
    }
    RiemannScheme::new(s.poles().to_vec(), cols)
}

fn big_matrices(t: &SchlesingerTuple, lambda: &Scalar) -> Vec<Matrix> {
    let n = t.n();
    let p = t.p();
    (0..p)
        .map(|j| {
            let mut g = Matrix::zeros(p * n, p * n);
            for (k, a) in t.matrices().iter().enumerate() {
                let block = if k == j { a.add_scalar(lambda) } else { a.clone() };
                g.set_block(j * n, k * n, &block);
            }
            g
        })
        .collect()
}

pub fn convolution(t: &SchlesingerTuple, lambda: &Scalar) -> ConvolutionData {
    let n = t.n();
    let p = t.p();
    let dim = p * n;
    let big = big_matrices(t, lambda);
    let mut k_basis = Vec::new();
    for (j, a) in t.matrices().iter().enumerate() {
        for v in a.kernel_basis() {
            let mut w = vec![Scalar::zero(); dim];
            w[j * n..(j + 1) * n].clone_from_slice(&v);
            k_basis.push(w);
        }
    }
    let mut sum = Matrix::zeros(dim, dim);
    for g in &big {
        sum = &sum + g;
    }
    let l_basis = sum.kernel_basis();
    let spanning: Vec<Vector> = k_basis.iter().chain(&l_basis).cloned().collect();
    let (sum_rows, sum_pivots) = if spanning.is_empty() {
        (Vec::new(), Vec::new())
    } else {
        let rows = Matrix::from_cols(dim, &spanning).transpose();
        let (r, piv) = rows.rref();
        let kept: Vec<Vector> = (0..piv.len()).map(|i| r.row(i).to_vec()).collect();
        (kept, piv)
    };
    let complement_positions: Vec<usize> = (0..dim).filter(|c| !sum_pivots.contains(c)).collect();
    let complement_basis = complement_positions
        .iter()
        .map(|&c| {
            let mut e = vec![Scalar::zero(); dim];
            e[c] = Scalar::one();
            e
        })
        .collect();
    ConvolutionData {
        big_matrices: big,
        k_basis,
        l_basis,
        complement_basis,
        sum_rows,
        sum_pivots,
        complement_positions,
    }
}

pub fn middle_convolution(t: &SchlesingerTuple, lambda: &Scalar) -> SchlesingerTuple {
    let data = convolution(t, lambda);
    let mats = data.big_matrices.iter().map(|g| data.induced(g)).collect();
    let out = SchlesingerTuple::new(t.poles().to_vec(), mats).expect("poles are unchanged");
    let scheme = t.scheme().and_then(|s| predicted_scheme(s, lambda).ok());
    out.with_scheme_if_valid(scheme)
}

fn check_index(j: usize, p: usize) -> Result<()> {
    if j == 0 || j > p {
        return Err(Error::IndexOutOfRange { index: j, len: p });
    }
    Ok(())
}

/// `T_(j,∞)`: `B_j` becomes the residue at infinity. `j` is 1-based.
pub fn swap_with_infinity(t: &SchlesingerTuple, j: usize) -> Result<SchlesingerTuple> {
    check_index(j, t.p())?;
    let mut mats = t.matrices().to_vec();
    mats[j - 1] = residue_at_infinity(t);
    let out = SchlesingerTuple::new(t.poles().to_vec(), mats)?;
    let scheme = t
        .scheme()
        .map(|s| {
            let mut cols = s.columns().to_vec();
            cols.swap(0, j);
            RiemannScheme::new(s.poles().to_vec(), cols)
        })
        .transpose()?;
    Ok(out.with_scheme_unchecked(scheme))
}

/// `T_σ`: position `k` receives `(t_σ(k), B_σ(k))`. `sigma` is 1-based.
pub fn permute(t: &SchlesingerTuple, sigma: &[usize]) -> Result<SchlesingerTuple> {
    let p = t.p();
    let mut seen = vec![false; p];
    if sigma.len() != p {
        return Err(Error::NotAPermutation(p));
    }
    for &s in sigma {
        if s == 0 || s > p || seen[s - 1] {
            return Err(Error::NotAPermutation(p));
        }
        seen[s - 1] = true;
    }
    let poles = sigma.iter().map(|&s| t.poles()[s - 1].clone()).collect();
    let mats = sigma.iter().map(|&s| t.matrix(s - 1).clone()).collect();
    let out = SchlesingerTuple::new(poles, mats)?;
    let scheme = t
        .scheme()
        .map(|s| {
            let mut cols = vec![s.column(0).to_vec()];
            cols.extend(sigma.iter().map(|&k| s.column(k).to_vec()));
            RiemannScheme::new(out.poles().to_vec(), cols)
        })
        .transpose()?;
    Ok(out.with_scheme_unchecked(scheme))
}

/// `T_(p+1,∞)`: appends `-(B_1 + ... + B_p)` at `t_new`.
pub fn append_infinity_pole(t: &SchlesingerTuple, t_new: &Scalar) -> Result<SchlesingerTuple> {
    if t.poles().contains(t_new) {
        return Err(Error::DuplicatePole(t_new.to_string()));
    }
    let mut poles = t.poles().to_vec();
    poles.push(t_new.clone());
    let mut mats = t.matrices().to_vec();
    mats.push(residue_at_infinity(t));
    let out = SchlesingerTuple::new(poles, mats)?;
    let scheme = t
        .scheme()
        .map(|s| {
            let mut cols = s.columns().to_vec();
            let inf = std::mem::replace(&mut cols[0], vec![Part::new(Scalar::zero(), t.n())]);
            cols.push(inf);
            RiemannScheme::new(out.poles().to_vec(), cols)
        })
        .transpose()?;
    Ok(out.with_scheme_unchecked(scheme))
}

/// Splits off the largest part labelled `label` (multiplicity 0 if absent).
pub(crate) fn split_top(col: &[Part], label: &Scalar) -> (usize, Vec<Part>) {
    match col.iter().position(|p| &p.value == label) {
        Some(i) => {
            let mut rest = col.to_vec();
            let top = rest.remove(i);
            (top.mult, rest)
        }
        None => (0, col.to_vec()),
    }
}

/// The scheme of `mc_λ` predicted from the scheme of the input.
pub fn predicted_scheme(s: &RiemannScheme, lambda: &Scalar) -> Result<RiemannScheme> {
    if lambda.is_zero() {
        return Ok(s.clone());
    }
    let n = s.rank() as i64;
    let p = s.p() as i64;
    let zero = Scalar::zero();
    let (m0, rest0) = split_top(s.column(0), lambda);
    let mut tops = vec![m0];
    let mut rests = vec![rest0];
    for col in &s.columns()[1..] {
        let (m, rest) = split_top(col, &zero);
        tops.push(m);
        rests.push(rest);
    }
    let d = tops.iter().map(|&m| m as i64).sum::<i64>() - (p - 1) * n;
    let mut cols = Vec::with_capacity(tops.len());
    for (k, (top, rest)) in tops.iter().zip(rests).enumerate() {
        let new_top = *top as i64 - d;
        if new_top < 0 {
            return Err(Error::NotNormalizable(format!(
                "multiplicity {top} at point {k} is smaller than d = {d}"
            )));
        }
        let (top_label, shift) = if k == 0 {
            (-lambda, -lambda)
        } else {
            (Scalar::zero(), lambda.clone())
        };
        let mut col = vec![Part::new(top_label, new_top as usize)];
        col.extend(rest.into_iter().map(|p| Part::new(&p.value + &shift, p.mult)));
        cols.push(col);
    }
    RiemannScheme::new(s.poles().to_vec(), cols)
}

/// `d` of the transformation at `λ`, after the same normalization as
/// [`predicted_scheme`].
pub fn predicted_d(s: &RiemannScheme, lambda: &Scalar) -> i64 {
    let zero = Scalar::zero();
    let mut total = split_top(s.column(0), lambda).0 as i64;
    for col in &s.columns()[1..] {
        total += split_top(col, &zero).0 as i64;
    }
    total - (s.p() as i64 - 1) * s.rank() as i64
}

/// One step of the Katz reduction: normalize the dominant eigenvalues by an
/// addition, then middle convolve at their sum.
pub fn mc_max(t: &SchlesingerTuple) -> Result<SchlesingerTuple> {
    let s = t
        .scheme()
        .ok_or_else(|| Error::SchemeUnavailable("mc_max needs a declared scheme".into()))?
        .clone();
    if !is_irreducible(t) {
        return Err(Error::NotIrreducible);
    }
    let tops: Vec<Scalar> = s.columns().iter().map(|c| c[0].value.clone()).collect();
    let mu: Vec<Scalar> = tops[1..].iter().map(|v| -v).collect();
    let mut lambda = Scalar::zero();
    for v in &tops {
        lambda += v;
    }
    let shifted = addition(t, &mu)?;
    let dm: i64 = s.columns().iter().map(|c| c[0].mult as i64).sum::<i64>() - (s.p() as i64 - 1) * s.rank() as i64;
    if lambda.is_zero() && dm > 0 {
        return Err(Error::NotIrreducible);
    }
    Ok(middle_convolution(&shifted, &lambda))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::schlesinger::{index_of_rigidity, is_equivalent};
    use crate::subspace;

    fn s(v: i64) -> Scalar {
        Scalar::from_int(v)
    }

    fn m(rows: &[&[i64]]) -> Matrix {
        Matrix::from_i64(rows)
    }

    fn tuple(mats: Vec<Matrix>) -> SchlesingerTuple {
        SchlesingerTuple::with_default_poles(mats).unwrap()
    }

    fn sample() -> SchlesingerTuple {
        tuple(vec![m(&[&[1, 1], &[0, 0]]), m(&[&[0, 0], &[1, 2]])])
    }

    #[test]
    fn addition_examples() {
        let t = sample();
        assert_eq!(addition(&t, &[s(0), s(0)]).unwrap(), t);
        let one = tuple(vec![m(&[&[2]])]);
        assert_eq!(addition(&one, &[s(3)]).unwrap().matrix(0), &m(&[&[5]]));
        let shifted = addition(&t, &[s(1), s(-3)]).unwrap();
        assert_eq!(residue_at_infinity(&shifted), residue_at_infinity(&t).add_scalar(&s(2)));
        assert!(addition(&t, &[s(1)]).is_err());
    }

    #[test]
    fn convolution_examples() {
        let one = tuple(vec![m(&[&[3]])]);
        let c = convolution(&one, &s(2));
        assert_eq!(c.big_matrices, vec![m(&[&[5]])]);
        let two = tuple(vec![m(&[&[3]]), m(&[&[4]])]);
        let c = convolution(&two, &s(2));
        assert_eq!(c.big_matrices[0], m(&[&[5, 4], &[0, 0]]));
        assert_eq!(c.big_matrices[1], m(&[&[0, 0], &[3, 6]]));
        assert!(c.k_basis.is_empty());
    }

    #[test]
    fn convolution_subspaces_are_invariant() {
        let t = sample();
        let c = convolution(&t, &s(3));
        let dim = c.dim();
        for g in &c.big_matrices {
            for v in c.k_basis.iter().chain(&c.l_basis) {
                let sum: Vec<Vector> = c.k_basis.iter().chain(&c.l_basis).cloned().collect();
                assert!(subspace::contains(dim, &sum, &g.mul_vec(v)));
            }
        }
        let span = subspace::sum(dim, &c.k_basis, &c.l_basis).len();
        assert_eq!(span + c.complement_basis.len(), dim);
    }

    #[test]
    fn mc_rank_one_direct() {
        // p = 1: G_1 = A_1 + λ, K = ker A_1, L = ker(A_1 + λ).
        let t = tuple(vec![m(&[&[4]])]);
        assert_eq!(middle_convolution(&t, &s(1)).n(), 1);
        assert_eq!(middle_convolution(&t, &s(-4)).n(), 0);
        let z = tuple(vec![m(&[&[0]])]);
        assert_eq!(middle_convolution(&z, &s(1)).n(), 0);
    }

    #[test]
    fn mc_zero_is_identity_up_to_equivalence() {
        let t = sample();
        assert!(is_equivalent(&middle_convolution(&t, &s(0)), &t));
    }

    #[test]
    fn mc_composition_law() {
        let t = sample();
        let lhs = middle_convolution(&middle_convolution(&t, &s(2)), &s(3));
        let rhs = middle_convolution(&t, &s(5));
        assert!(is_equivalent(&lhs, &rhs));
        assert_eq!(index_of_rigidity(&lhs), index_of_rigidity(&t));
    }

    #[test]
    fn swaps_and_permutations() {
        let t = tuple(vec![
            m(&[&[1, 1], &[0, 0]]),
            m(&[&[0, 0], &[1, 2]]),
            m(&[&[1, 0], &[3, 1]]),
        ]);
        let sw = swap_with_infinity(&t, 2).unwrap();
        assert_eq!(swap_with_infinity(&sw, 2).unwrap(), t);
        assert_eq!(index_of_rigidity(&sw), index_of_rigidity(&t));
        assert!(swap_with_infinity(&t, 4).is_err());
        assert_eq!(permute(&t, &[1, 2, 3]).unwrap(), t);
        let tr = permute(&t, &[2, 1, 3]).unwrap();
        assert_eq!(permute(&tr, &[2, 1, 3]).unwrap(), t);
        assert!(matches!(permute(&t, &[1, 1, 3]), Err(Error::NotAPermutation(3))));
        let single = tuple(vec![m(&[&[2]])]);
        assert_eq!(swap_with_infinity(&single, 1).unwrap().matrix(0), &m(&[&[-2]]));
    }

    #[test]
    fn append_infinity_pole_examples() {
        let t = sample();
        let a = append_infinity_pole(&t, &s(7)).unwrap();
        assert_eq!((a.p(), a.n()), (3, 2));
        assert_eq!(index_of_rigidity(&a), index_of_rigidity(&t));
        let back = swap_with_infinity(&a, 3).unwrap();
        assert!(back.matrix(2).is_zero());
        assert!(matches!(append_infinity_pole(&t, &s(1)), Err(Error::DuplicatePole(_))));
    }

    fn hyper_scheme(a: i64, b: i64, c: i64, e: i64) -> RiemannScheme {
        RiemannScheme::new(
            vec![s(1), s(2)],
            vec![
                vec![Part::new(s(a), 1), Part::new(s(b), 1)],
                vec![Part::new(s(0), 1), Part::new(s(c), 1)],
                vec![Part::new(s(0), 1), Part::new(s(e), 1)],
            ],
        )
        .unwrap()
    }

    #[test]
    fn predicted_scheme_examples() {
        let h = hyper_scheme(2, -7, 3, 2);
        assert_eq!(predicted_scheme(&h, &s(0)).unwrap(), h);
        assert_eq!(predicted_d(&h, &s(2)), 1);
        let r = predicted_scheme(&h, &s(2)).unwrap();
        assert_eq!(r.rank(), 1);
        assert_eq!(r.column(0), &[Part::new(s(-9), 1)]);
        assert_eq!(r.column(1), &[Part::new(s(5), 1)]);
        assert_eq!(r.column(2), &[Part::new(s(4), 1)]);
    }

    #[test]
    fn predicted_scheme_d4_to_okubo_type() {
        let d4 = RiemannScheme::new(
            vec![s(1), s(2), s(3)],
            vec![
                vec![Part::new(s(5), 1), Part::new(s(6), 1)],
                vec![Part::new(s(0), 1), Part::new(s(1), 1)],
                vec![Part::new(s(0), 1), Part::new(s(2), 1)],
                vec![Part::new(s(0), 1), Part::new(s(3), 1)],
            ],
        )
        .unwrap();
        assert_eq!(predicted_d(&d4, &s(9)), -1);
        let r = predicted_scheme(&d4, &s(9)).unwrap();
        assert_eq!(
            r.spectral_type(),
            vec![vec![1, 1, 1], vec![2, 1], vec![2, 1], vec![2, 1]]
        );
    }
}
