//! Deterministic families of irreducible systems with known Riemann schemes.

use crate::error::Result;
use crate::katz::{addition, middle_convolution};
use crate::matrix::Matrix;
use crate::okubo::{mc_to_onf, OkuboSystem};
use crate::scalar::GaussianRational as Scalar;
use crate::scheme::{Part, RiemannScheme};
use crate::schlesinger::{is_irreducible, residue_at_infinity, SchlesingerTuple};

/// `(x - t) u' = λ u` as a rank-one Okubo system.
pub fn rank_one_onf(lambda: &Scalar, t: &Scalar) -> Result<OkuboSystem> {
    let scheme = RiemannScheme::new(
        vec![t.clone()],
        vec![vec![Part::new(-lambda, 1)], vec![Part::new(lambda.clone(), 1)]],
    )?;
    OkuboSystem::new(vec![1], vec![t.clone()], Matrix::scalar(1, lambda))?.with_scheme(scheme)
}

fn frac(a: i64, b: i64) -> Scalar {
    Scalar::from_frac(a, b)
}

/// One rank-raising step `mc_μ ∘ M_(α,0)` on a tuple of type
/// `1^k, 1^k, (k-1)1`, returning `None` when the choice is not generic.
fn hyper_step(t: &SchlesingerTuple, alpha: &Scalar, mu: &Scalar) -> Option<SchlesingerTuple> {
    let shifted = addition(t, &[alpha.clone(), Scalar::default()]).ok()?;
    let next = middle_convolution(&shifted, mu);
    let ok = next.n() == t.n() + 1 && next.scheme().is_some() && is_irreducible(&next);
    ok.then_some(next)
}

const ALPHAS: [(i64, i64); 6] = [(1, 3), (2, 7), (3, 11), (5, 13), (4, 17), (7, 19)];
const MUS: [(i64, i64); 6] = [(1, 2), (3, 5), (5, 9), (7, 11), (9, 23), (11, 29)];

/// Irreducible Schlesinger tuple of spectral type `1^n, 1^n, (n-1)1` with
/// poles `0, 1`, carrying its verified scheme.
pub fn hypergeometric_scf(n: usize) -> SchlesingerTuple {
    assert!(n >= 1, "rank must be positive");
    let a = frac(1, 5);
    let b = frac(2, 9);
    let scheme = RiemannScheme::new(
        vec![Scalar::from_int(0), Scalar::from_int(1)],
        vec![
            vec![Part::new(-&(&a + &b), 1)],
            vec![Part::new(a.clone(), 1)],
            vec![Part::new(b.clone(), 1)],
        ],
    )
    .expect("rank-one scheme");
    let mut t = SchlesingerTuple::new(
        vec![Scalar::from_int(0), Scalar::from_int(1)],
        vec![Matrix::scalar(1, &a), Matrix::scalar(1, &b)],
    )
    .and_then(|t| t.with_scheme(scheme))
    .expect("rank-one tuple");
    for k in 1..n {
        t = (0..ALPHAS.len() * MUS.len())
            .find_map(|i| {
                let (an, ad) = ALPHAS[(i + k) % ALPHAS.len()];
                let (mn, md) = MUS[(i / ALPHAS.len() + k) % MUS.len()];
                hyper_step(&t, &frac(an, ad), &frac(mn, md))
            })
            .expect("a generic step exists");
    }
    t
}

/// Okubo realization of the type `1^n, 1^n, (n-1)1`, carrying its scheme.
pub fn hypergeometric_onf(n: usize) -> OkuboSystem {
    if n == 1 {
        return rank_one_onf(&frac(1, 2), &Scalar::from_int(0)).expect("rank-one system");
    }
    let base = hypergeometric_scf(n - 1);
    for (an, ad) in ALPHAS {
        for (mn, md) in MUS {
            let Ok(shifted) = addition(&base, &[frac(an, ad), Scalar::default()]) else {
                continue;
            };
            if let Ok(o) = mc_to_onf(&shifted, &frac(mn, md)) {
                if o.n() == n && o.scheme().is_some() {
                    return o;
                }
            }
        }
    }
    unreachable!("generic parameters exist")
}

/// Distinct rational eigenvalues of a 2×2 matrix, if any.
fn split_eigenvalues(m: &Matrix) -> Option<(Scalar, Scalar)> {
    let tr = m.trace();
    let det = m.determinant();
    let disc = &(&tr * &tr) - &(&Scalar::from_int(4) * &det);
    let root = disc.sqrt()?;
    if root == Scalar::default() {
        return None;
    }
    let half = frac(1, 2);
    Some((&(&tr + &root) * &half, &(&tr - &root) * &half))
}

/// A basic irreducible tuple of spectral type `11,11,11,11`, found by
/// searching rank-one residues `u vᵀ` with small integer entries.
pub fn d4_basic() -> SchlesingerTuple {
    let range = -2i64..=2;
    let mut vecs = Vec::new();
    for a in range.clone() {
        for b in range.clone() {
            if (a, b) != (0, 0) {
                vecs.push([a, b]);
            }
        }
    }
    let rank_one =
        |u: [i64; 2], v: [i64; 2]| Matrix::from_i64(&[&[u[0] * v[0], u[0] * v[1]], &[u[1] * v[0], u[1] * v[1]]]);
    let mut candidates = Vec::new();
    for u in &vecs {
        for v in &vecs {
            let m = rank_one(*u, *v);
            let tr = m.trace();
            if tr != Scalar::default() && !candidates.contains(&m) {
                candidates.push(m);
            }
        }
    }
    let poles: Vec<Scalar> = (0..3).map(Scalar::from_int).collect();
    for a1 in &candidates {
        for a2 in &candidates {
            for a3 in &candidates {
                let Ok(t) = SchlesingerTuple::new(poles.clone(), vec![a1.clone(), a2.clone(), a3.clone()]) else {
                    continue;
                };
                let a0 = residue_at_infinity(&t);
                let Some((e1, e2)) = split_eigenvalues(&a0) else {
                    continue;
                };
                if !is_irreducible(&t) {
                    continue;
                }
                let mut cols = vec![vec![Part::new(e1, 1), Part::new(e2, 1)]];
                for a in [a1, a2, a3] {
                    cols.push(vec![Part::new(Scalar::default(), 1), Part::new(a.trace(), 1)]);
                }
                let scheme = RiemannScheme::new(poles.clone(), cols).expect("consistent columns");
                if let Ok(t) = t.with_scheme(scheme) {
                    return t;
                }
            }
        }
    }
    unreachable!("the search space contains a basic tuple")
}
