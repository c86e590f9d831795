//! Tuples of residue matrices `(A_1, ..., A_p)` at poles `t_1, ..., t_p`,
//! with the structural predicates used by the Katz and Okubo layers.

use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::matrix::{commutant_dim, generated_algebra_dim, solve_sylvester_space, Matrix, Vector};
use crate::scalar::GaussianRational as Scalar;
use crate::scheme::{canonicalize, Part, RiemannScheme};
use crate::subspace;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SchlesingerTuple {
    poles: Vec<Scalar>,
    matrices: Vec<Matrix>,
    scheme: Option<RiemannScheme>,
}

impl SchlesingerTuple {
    /// Rank 0 is accepted because middle convolution can produce it.
    pub fn new(poles: Vec<Scalar>, matrices: Vec<Matrix>) -> Result<Self> {
        if poles.is_empty() {
            return Err(Error::InvalidTuple("at least one pole is required".into()));
        }
        if poles.len() != matrices.len() {
            return Err(Error::LengthMismatch {
                expected: poles.len(),
                got: matrices.len(),
            });
        }
        for (i, a) in poles.iter().enumerate() {
            if poles[..i].contains(a) {
                return Err(Error::DuplicatePole(a.to_string()));
            }
        }
        let n = matrices[0].rows();
        for m in &matrices {
            if !m.is_square() {
                return Err(Error::NonSquare {
                    rows: m.rows(),
                    cols: m.cols(),
                });
            }
            if m.rows() != n {
                return Err(Error::SizeMismatch(format!("residues of sizes {} and {}", n, m.rows())));
            }
        }
        Ok(SchlesingerTuple {
            poles,
            matrices,
            scheme: None,
        })
    }

    /// Poles `1, 2, ..., p`.
    pub fn with_default_poles(matrices: Vec<Matrix>) -> Result<Self> {
        let poles = (1..=matrices.len() as i64).map(Scalar::from_int).collect();
        Self::new(poles, matrices)
    }

    /// Attaches a scheme after checking it against the matrices.
    pub fn with_scheme(mut self, scheme: RiemannScheme) -> Result<Self> {
        if !verify_scheme(&self, &scheme)? {
            return Err(Error::InvalidTuple(format!(
                "declared scheme {scheme} does not match the residues"
            )));
        }
        self.scheme = Some(scheme);
        Ok(self)
    }

    /// Attaches a scheme if it verifies, otherwise leaves none.
    pub(crate) fn with_scheme_if_valid(mut self, scheme: Option<RiemannScheme>) -> Self {
        self.scheme = scheme.filter(|s| verify_scheme(&self, s).unwrap_or(false));
        self
    }

    pub(crate) fn with_scheme_unchecked(mut self, scheme: Option<RiemannScheme>) -> Self {
        self.scheme = scheme;
        self
    }

    pub fn without_scheme(mut self) -> Self {
        self.scheme = None;
        self
    }

    pub fn poles(&self) -> &[Scalar] {
        &self.poles
    }

    pub fn matrices(&self) -> &[Matrix] {
        &self.matrices
    }

    pub fn matrix(&self, j: usize) -> &Matrix {
        &self.matrices[j]
    }

    pub fn scheme(&self) -> Option<&RiemannScheme> {
        self.scheme.as_ref()
    }

    pub fn p(&self) -> usize {
        self.matrices.len()
    }

    /// The rank of the system.
    pub fn n(&self) -> usize {
        self.matrices[0].rows()
    }

    /// `A_0, A_1, ..., A_p`.
    pub fn all_residues(&self) -> Vec<Matrix> {
        std::iter::once(residue_at_infinity(self))
            .chain(self.matrices.iter().cloned())
            .collect()
    }

    pub fn transposed(&self) -> SchlesingerTuple {
        SchlesingerTuple {
            poles: self.poles.clone(),
            matrices: self.matrices.iter().map(Matrix::transpose).collect(),
            scheme: None,
        }
    }

    /// Simultaneous conjugation `g A_j g⁻¹`; the scheme is unaffected.
    pub fn conjugate(&self, g: &Matrix) -> Result<SchlesingerTuple> {
        let gi = g
            .inverse()
            .ok_or_else(|| Error::InvalidTuple("conjugating matrix is singular".into()))?;
        Ok(SchlesingerTuple {
            poles: self.poles.clone(),
            matrices: self.matrices.iter().map(|a| &(g * a) * &gi).collect(),
            scheme: self.scheme.clone(),
        })
    }
}

pub fn residue_at_infinity(t: &SchlesingerTuple) -> Matrix {
    let n = t.n();
    let mut sum = Matrix::zeros(n, n);
    for a in &t.matrices {
        sum = &sum + a;
    }
    -&sum
}

/// Largest `a`-invariant subspace contained in `w`.
pub(crate) fn largest_invariant_subspace(a: &Matrix, w: Vec<Vector>) -> Vec<Vector> {
    let n = a.rows();
    let mut u = w;
    loop {
        if u.is_empty() {
            return u;
        }
        let next = subspace::intersection(n, &u, &subspace::preimage(a, &u));
        if next.len() == u.len() {
            return u;
        }
        u = next;
    }
}

fn star_vector(t: &SchlesingerTuple) -> Vec<bool> {
    let n = t.n();
    let p = t.p();
    if p == 1 {
        // Only the τ = 0 instance is meaningful with a single pole.
        return vec![t.matrices[0].rank() == n];
    }
    let kernels: Vec<Vec<Vector>> = t.matrices.iter().map(Matrix::kernel_basis).collect();
    (0..p)
        .map(|i| {
            let mut w: Option<Vec<Vector>> = None;
            for (nu, k) in kernels.iter().enumerate() {
                if nu == i {
                    continue;
                }
                w = Some(match w {
                    None => k.clone(),
                    Some(prev) => subspace::intersection(n, &prev, k),
                });
            }
            let w = w.unwrap_or_default();
            largest_invariant_subspace(&t.matrices[i], w).is_empty()
        })
        .collect()
}

/// Per pole, whether the kernel condition and its dual image condition hold
/// for every `τ`.
pub fn check_star_conditions(t: &SchlesingerTuple) -> (Vec<bool>, Vec<bool>) {
    (star_vector(t), star_vector(&t.transposed()))
}

pub fn satisfies_star_conditions(t: &SchlesingerTuple) -> bool {
    let (a, b) = check_star_conditions(t);
    a.into_iter().chain(b).all(|x| x)
}

pub fn is_irreducible(t: &SchlesingerTuple) -> bool {
    let n = t.n();
    generated_algebra_dim(&t.matrices, n).is_ok_and(|d| d == n * n)
}

type CyclicBasis = (Vec<Vector>, Vec<(usize, usize)>);

/// Breadth-first basis `u_k = W_k(A) v` of the cyclic module generated by
/// `v`, with the words recorded as generator index paths from `v`.
fn cyclic_basis(mats: &[Matrix], v: Vector) -> Option<CyclicBasis> {
    let n = v.len();
    let mut span = crate::matrix::SpanBuilder::new(n);
    if !span.insert(&v) {
        return None;
    }
    let mut basis = vec![v];
    // parent[k] = (index of parent basis vector, generator); entry 0 is unused.
    let mut parent = vec![(usize::MAX, usize::MAX)];
    let mut head = 0;
    while head < basis.len() && basis.len() < n {
        for (j, a) in mats.iter().enumerate() {
            let next = a.mul_vec(&basis[head]);
            if span.insert(&next) {
                basis.push(next);
                parent.push((head, j));
                if basis.len() == n {
                    break;
                }
            }
        }
        head += 1;
    }
    (basis.len() == n).then_some((basis, parent))
}

/// Basis of `{g : g A_j = B_j g}` via a cyclic vector of `a` when one is
/// available among the standard basis vectors.
fn intertwiners(a: &[Matrix], b: &[Matrix]) -> Result<Vec<Matrix>> {
    let n = a[0].rows();
    let cyclic = (0..n).find_map(|i| {
        let mut e = vec![Scalar::zero(); n];
        e[i] = Scalar::one();
        cyclic_basis(a, e)
    });
    let Some((basis, parent)) = cyclic else {
        return solve_sylvester_space(a, b);
    };
    let wa = Matrix::from_cols(n, &basis);
    let wa_inv = wa.inverse().expect("cyclic basis is independent");
    let mut words: Vec<Matrix> = Vec::with_capacity(n);
    words.push(Matrix::identity(n));
    for &(par, j) in parent.iter().skip(1) {
        let w = &b[j] * &words[par];
        words.push(w);
    }
    let mut rows: Vec<Vec<Scalar>> = Vec::new();
    for (aj, bj) in a.iter().zip(b) {
        let coords = &wa_inv * &(aj * &wa);
        for (k, wk) in words.iter().enumerate() {
            let mut c = -&(bj * wk);
            for (l, wl) in words.iter().enumerate() {
                let coef = coords.get(l, k);
                if !coef.is_zero() {
                    c = &c + &wl.scale(coef);
                }
            }
            rows.extend(c.to_rows());
        }
    }
    let system = Matrix::from_rows(rows)?;
    Ok(system
        .kernel_basis()
        .into_iter()
        .map(|x| {
            let cols: Vec<Vector> = words.iter().map(|w| w.mul_vec(&x)).collect();
            &Matrix::from_cols(n, &cols) * &wa_inv
        })
        .collect())
}

fn combination(basis: &[Matrix], coeffs: &[i64]) -> Matrix {
    let mut g = Matrix::zeros(basis[0].rows(), basis[0].cols());
    for (b, &c) in basis.iter().zip(coeffs) {
        if c != 0 {
            g = &g + &b.scale(&Scalar::from_int(c));
        }
    }
    g
}

/// Whether some `g ∈ GL(n)` satisfies `g A_j g⁻¹ = B_j` for all `j`.
pub fn is_equivalent(a: &SchlesingerTuple, b: &SchlesingerTuple) -> bool {
    if a.p() != b.p() || a.n() != b.n() || a.poles != b.poles {
        return false;
    }
    let n = a.n();
    if n == 0 {
        return true;
    }
    let ra = a.all_residues();
    let rb = b.all_residues();
    for (x, y) in ra.iter().zip(&rb) {
        if x.trace() != y.trace() || x.rank() != y.rank() {
            return false;
        }
    }
    let Ok(basis) = intertwiners(&a.matrices, &b.matrices) else {
        return false;
    };
    if basis.is_empty() {
        return false;
    }
    let k = basis.len();
    let is_invertible = |coeffs: &[i64]| !combination(&basis, coeffs).determinant().is_zero();
    let probes: Vec<Vec<i64>> = vec![
        {
            let mut e = vec![0; k];
            e[0] = 1;
            e
        },
        vec![1; k],
        (1..=k as i64).collect(),
        (0..k as i64).map(|i| (i * i) % 7 + 1).collect(),
    ];
    if probes.iter().any(|c| is_invertible(c)) {
        return true;
    }
    // det(Σ c_i g_i) has degree at most n in each c_i, so it vanishes on
    // the grid {0..n}^k only if it is identically zero.
    let mut coeffs = vec![0i64; k];
    loop {
        if is_invertible(&coeffs) {
            return true;
        }
        let mut i = 0;
        loop {
            if i == k {
                return false;
            }
            coeffs[i] += 1;
            if coeffs[i] <= n as i64 {
                break;
            }
            coeffs[i] = 0;
            i += 1;
        }
    }
}

pub fn index_of_rigidity(t: &SchlesingerTuple) -> i64 {
    let n = t.n() as i64;
    let p = t.p() as i64;
    let sum: i64 = t
        .all_residues()
        .iter()
        .map(|a| commutant_dim(a).expect("square residue") as i64)
        .sum();
    sum - (p - 1) * n * n
}

pub fn sorted_parts(parts: &[Part]) -> Vec<Part> {
    let mut v = parts.to_vec();
    canonicalize(&mut v);
    v
}

/// Whether `m` is conjugate to `L(parts)`.
pub fn matches_conjugacy_class(m: &Matrix, parts: &[Part]) -> Result<bool> {
    if !m.is_square() {
        return Err(Error::NonSquare {
            rows: m.rows(),
            cols: m.cols(),
        });
    }
    let n = m.rows();
    let sum: usize = parts.iter().map(|p| p.mult).sum();
    if sum != n {
        return Err(Error::PartitionSizeMismatch { sum, size: n });
    }
    let parts = sorted_parts(parts);
    let mut prod = Matrix::identity(n);
    let mut expected = 0;
    for part in &parts {
        prod = &prod * &m.add_scalar(&-&part.value);
        expected += part.mult;
        if n - prod.rank() != expected {
            return Ok(false);
        }
    }
    Ok(true)
}

/// The block bidiagonal normal form `L(m; λ)` in canonical part order.
pub fn build_l(parts: &[Part]) -> Matrix {
    let parts = sorted_parts(parts);
    let n: usize = parts.iter().map(|p| p.mult).sum();
    let mut out = Matrix::zeros(n, n);
    let mut offset = 0;
    for (i, part) in parts.iter().enumerate() {
        for d in 0..part.mult {
            out.set(offset + d, offset + d, part.value.clone());
        }
        if let Some(next) = parts.get(i + 1) {
            for d in 0..next.mult {
                out.set(offset + d, offset + part.mult + d, Scalar::one());
            }
        }
        offset += part.mult;
    }
    out
}

pub fn verify_scheme(t: &SchlesingerTuple, s: &RiemannScheme) -> Result<bool> {
    if s.poles() != t.poles() {
        return Err(Error::PointMismatch(format!(
            "scheme has {} finite points, tuple has poles {:?}",
            s.p(),
            t.poles()
        )));
    }
    for (a, col) in t.all_residues().iter().zip(s.columns()) {
        match matches_conjugacy_class(a, col) {
            Ok(true) => {}
            Ok(false) | Err(Error::PartitionSizeMismatch { .. }) => return Ok(false),
            Err(e) => return Err(e),
        }
    }
    Ok(true)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn s(v: i64) -> Scalar {
        Scalar::from_int(v)
    }

    fn m(rows: &[&[i64]]) -> Matrix {
        Matrix::from_i64(rows)
    }

    fn tuple(mats: Vec<Matrix>) -> SchlesingerTuple {
        SchlesingerTuple::with_default_poles(mats).unwrap()
    }

    #[test]
    fn residue_at_infinity_examples() {
        assert_eq!(residue_at_infinity(&tuple(vec![m(&[&[2]])])), m(&[&[-2]]));
        let e11 = m(&[&[1, 0], &[0, 0]]);
        let e22 = m(&[&[0, 0], &[0, 1]]);
        assert_eq!(residue_at_infinity(&tuple(vec![e11, e22])), m(&[&[-1, 0], &[0, -1]]));
    }

    #[test]
    fn star_examples() {
        let (a, b) = check_star_conditions(&tuple(vec![m(&[&[5]])]));
        assert_eq!((a, b), (vec![true], vec![true]));
        let e11 = m(&[&[1, 0], &[0, 0]]);
        let (a, _) = check_star_conditions(&tuple(vec![e11.clone(), e11]));
        assert!(!a[0]);
    }

    #[test]
    fn irreducibility_examples() {
        assert!(is_irreducible(&tuple(vec![m(&[&[3]]), m(&[&[1]])])));
        let d1 = m(&[&[1, 0], &[0, 2]]);
        let d2 = m(&[&[3, 0], &[0, 4]]);
        assert!(!is_irreducible(&tuple(vec![d1, d2])));
        let a1 = m(&[&[1, 1], &[0, 0]]);
        let a2 = m(&[&[0, 0], &[1, 2]]);
        assert!(is_irreducible(&tuple(vec![a1, a2])));
    }

    #[test]
    fn equivalence_examples() {
        let a = tuple(vec![m(&[&[1, 1], &[0, 0]]), m(&[&[0, 0], &[1, 2]])]);
        assert!(is_equivalent(&a, &a));
        let g = m(&[&[2, 1], &[1, 1]]);
        assert!(is_equivalent(&a, &a.conjugate(&g).unwrap()));
        let r1 = tuple(vec![m(&[&[1, 0], &[0, 0]]), m(&[&[0, 0], &[0, 0]])]);
        let r2 = tuple(vec![m(&[&[1, 0], &[0, 1]]), m(&[&[-1, 0], &[0, -1]])]);
        assert!(!is_equivalent(&r1, &r2));
    }

    #[test]
    fn equivalence_of_reducible_tuples() {
        // Reducible, with no cyclic standard vector: exercises the full grid.
        let a = tuple(vec![m(&[&[1, 0], &[0, 1]]), m(&[&[0, 0], &[0, 0]])]);
        let b = a.conjugate(&m(&[&[1, 2], &[3, 4]])).unwrap();
        assert!(is_equivalent(&a, &b));
        let c = tuple(vec![m(&[&[1, 0], &[0, 2]]), m(&[&[0, 0], &[0, 0]])]);
        let d = tuple(vec![m(&[&[2, 0], &[0, 1]]), m(&[&[0, 0], &[0, 0]])]);
        assert!(is_equivalent(&c, &d));
        let e = tuple(vec![m(&[&[1, 1], &[0, 1]]), m(&[&[0, 0], &[0, 0]])]);
        let f = tuple(vec![m(&[&[1, 0], &[0, 1]]), m(&[&[0, 0], &[0, 0]])]);
        assert!(!is_equivalent(&e, &f));
    }

    #[test]
    fn rigidity_examples() {
        assert_eq!(index_of_rigidity(&tuple(vec![m(&[&[1]]), m(&[&[2]])])), 2);
    }

    #[test]
    fn build_l_examples() {
        assert_eq!(build_l(&[Part::new(s(7), 3)]), Matrix::scalar(3, &s(7)));
        let l = build_l(&[Part::new(s(1), 2), Part::new(s(2), 1), Part::new(s(3), 1)]);
        assert_eq!(l, m(&[&[1, 0, 1, 0], &[0, 1, 0, 0], &[0, 0, 2, 1], &[0, 0, 0, 3]]));
        let l2 = build_l(&[Part::new(s(0), 1), Part::new(s(5), 2)]);
        assert_eq!(l2, m(&[&[5, 0, 1], &[0, 5, 0], &[0, 0, 0]]));
    }

    #[test]
    fn conjugacy_class_examples() {
        let parts = [Part::new(s(4), 3)];
        assert!(matches_conjugacy_class(&Matrix::scalar(3, &s(4)), &parts).unwrap());
        let lp = [Part::new(s(1), 2), Part::new(s(2), 1), Part::new(s(3), 1)];
        assert!(matches_conjugacy_class(&build_l(&lp), &lp).unwrap());
        let jordan = [Part::new(s(2), 1), Part::new(s(2), 1)];
        assert!(!matches_conjugacy_class(&Matrix::scalar(2, &s(2)), &jordan).unwrap());
        assert!(matches_conjugacy_class(&m(&[&[2, 1], &[0, 2]]), &jordan).unwrap());
        assert_eq!(
            matches_conjugacy_class(&Matrix::identity(2), &parts),
            Err(Error::PartitionSizeMismatch { sum: 3, size: 2 })
        );
    }

    #[test]
    fn verify_scheme_rank_one() {
        let lambda = Scalar::from_frac(1, 3);
        let t = SchlesingerTuple::new(vec![s(0)], vec![Matrix::scalar(1, &lambda)]).unwrap();
        let good = RiemannScheme::new(
            vec![s(0)],
            vec![vec![Part::new(-&lambda, 1)], vec![Part::new(lambda.clone(), 1)]],
        )
        .unwrap();
        assert!(verify_scheme(&t, &good).unwrap());
        let bad = RiemannScheme::new(
            vec![s(0)],
            vec![vec![Part::new(lambda.clone(), 1)], vec![Part::new(lambda, 1)]],
        )
        .unwrap();
        assert!(!verify_scheme(&t, &bad).unwrap());
        let elsewhere =
            RiemannScheme::new(vec![s(1)], vec![vec![Part::new(s(0), 1)], vec![Part::new(s(0), 1)]]).unwrap();
        assert!(matches!(verify_scheme(&t, &elsewhere), Err(Error::PointMismatch(_))));
    }
}
