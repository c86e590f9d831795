//! Seeded random instances for the identity harness.

use fuchsian::katz::{addition, middle_convolution};
use fuchsian::okubo::{check_onf_conditions, scf_from_onf};
use fuchsian::schlesinger::is_irreducible;
use fuchsian::{GaussianRational as Scalar, Matrix, OkuboSystem, Part, RiemannScheme, SchlesingerTuple};
use rand::Rng;

const ENTRY: i64 = 3;
const MAX_TRIES: usize = 10_000;

pub fn random_matrix<R: Rng>(rng: &mut R, rows: usize, cols: usize) -> Matrix {
    Matrix::from_fn(rows, cols, |_, _| Scalar::from_int(rng.gen_range(-ENTRY..=ENTRY)))
}

/// A non-integer rational `k/d` with `d ∈ {2, 3, 5}`; such values are never
/// eigenvalues of integer matrices.
pub fn random_generic<R: Rng>(rng: &mut R) -> Scalar {
    let d = [2, 3, 5][rng.gen_range(0..3)];
    loop {
        let k = rng.gen_range(-3 * d..=3 * d);
        if k % d != 0 {
            return Scalar::from_frac(k, d);
        }
    }
}

fn integer_poles(p: usize) -> Vec<Scalar> {
    (0..p as i64).map(Scalar::from_int).collect()
}

/// Irreducible tuple with nonzero integer residues, entries in `[-3, 3]`,
/// rank in `1..=bound` and two or three poles.
pub fn random_irreducible_scf<R: Rng>(rng: &mut R, bound: usize) -> SchlesingerTuple {
    for _ in 0..MAX_TRIES {
        let n = rng.gen_range(1..=bound.max(1));
        let p = rng.gen_range(2..=3);
        let mats: Vec<Matrix> = (0..p).map(|_| random_matrix(rng, n, n)).collect();
        if mats.iter().any(|m| m.rank() == 0) {
            continue;
        }
        let t = SchlesingerTuple::new(integer_poles(p), mats).expect("square matrices");
        if is_irreducible(&t) {
            return t;
        }
    }
    panic!("no irreducible tuple found");
}

fn random_composition<R: Rng>(rng: &mut R, n: usize, p: usize) -> Vec<usize> {
    let mut cuts: Vec<usize> = rand::seq::index::sample(rng, n - 1, p - 1)
        .into_iter()
        .map(|c| c + 1)
        .collect();
    cuts.sort_unstable();
    let mut out = Vec::with_capacity(p);
    let mut prev = 0;
    for c in cuts.into_iter().chain([n]) {
        out.push(c - prev);
        prev = c;
    }
    out
}

/// Linearly irreducible Okubo system satisfying the rank conditions, rank in
/// `1..=bound`, at most three blocks.
pub fn random_onf<R: Rng>(rng: &mut R, bound: usize) -> OkuboSystem {
    for _ in 0..MAX_TRIES {
        let n = rng.gen_range(1..=bound.max(1));
        let p = rng.gen_range(1..=n.min(3));
        let blocks = random_composition(rng, n, p);
        let a = random_matrix(rng, n, n);
        let o = OkuboSystem::new(blocks, integer_poles(p), a).expect("valid shape");
        if check_onf_conditions(&o) && is_irreducible(&scf_from_onf(&o)) {
            return o;
        }
    }
    panic!("no Okubo system found");
}

/// Okubo system drawn without filtering on the rank conditions.
pub fn random_onf_unfiltered<R: Rng>(rng: &mut R, bound: usize) -> OkuboSystem {
    let n = rng.gen_range(1..=bound.max(1));
    let p = rng.gen_range(1..=n.min(3));
    let blocks = random_composition(rng, n, p);
    OkuboSystem::new(blocks, integer_poles(p), random_matrix(rng, n, n)).expect("valid shape")
}

/// Rigid irreducible tuple with nonzero residues carrying its scheme, built
/// from a rank-one tuple by random additions and convolutions; rank in
/// `2..=bound`.
pub fn random_rigid<R: Rng>(rng: &mut R, bound: usize) -> SchlesingerTuple {
    let bound = bound.max(2);
    'outer: for _ in 0..MAX_TRIES {
        let p = rng.gen_range(2..=3);
        let labels: Vec<Scalar> = (0..p).map(|_| random_generic(rng)).collect();
        let sum = labels.iter().fold(Scalar::default(), |acc, v| &acc + v);
        let mut cols = vec![vec![Part::new(-&sum, 1)]];
        cols.extend(labels.iter().map(|v| vec![Part::new(v.clone(), 1)]));
        let scheme = RiemannScheme::new(integer_poles(p), cols).expect("rank-one scheme");
        let mats = labels.iter().map(|v| Matrix::scalar(1, v)).collect();
        let mut t = SchlesingerTuple::new(integer_poles(p), mats)
            .and_then(|t| t.with_scheme(scheme))
            .expect("rank-one tuple");
        let target = rng.gen_range(2..=bound);
        for _ in 0..6 {
            let mu: Vec<Scalar> = (0..p)
                .map(|_| {
                    if rng.gen_bool(0.5) {
                        Scalar::default()
                    } else {
                        random_generic(rng)
                    }
                })
                .collect();
            let Ok(shifted) = addition(&t, &mu) else {
                continue 'outer;
            };
            let next = middle_convolution(&shifted, &random_generic(rng));
            let degenerate = next.matrices().iter().any(|m| m.rank() == 0);
            if next.n() == 0 || next.n() > bound || next.scheme().is_none() || degenerate || !is_irreducible(&next) {
                continue;
            }
            t = next;
            if t.n() >= target {
                return t;
            }
        }
        if t.n() >= 2 && t.matrices().iter().all(|m| m.rank() > 0) {
            return t;
        }
    }
    panic!("no rigid tuple found");
}
