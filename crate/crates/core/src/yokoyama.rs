//! Extension and restriction of Okubo systems, both in closed form and as
//! composites of Katz operations, and their action on Riemann schemes.

use num_traits::Zero;

use crate::error::{Error, Result};
use crate::katz::{
    addition, append_infinity_pole, middle_convolution, predicted_scheme, shift_scheme, split_top, swap_with_infinity,
};
use crate::matrix::Matrix;
use crate::okubo::{check_onf_conditions, euler_transform, pick_generic, pick_generic_with, scf_from_onf, OkuboSystem};
use crate::scalar::GaussianRational as Scalar;
use crate::scheme::{Part, RiemannScheme};
use crate::schlesinger::{is_irreducible, residue_at_infinity, SchlesingerTuple};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ExtensionParams {
    pub rho1: Scalar,
    pub rho2: Scalar,
    /// The pole added by the extension.
    pub t_new: Scalar,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RestrictionParams {
    pub mu1: Scalar,
    pub mu2: Scalar,
    /// 1-based index of the block removed.
    pub j: usize,
}

/// Both sides of a composite identity.
#[derive(Clone, Debug)]
pub struct CompositeResult {
    /// The side built from extensions, restrictions and Euler transformations.
    pub okubo: OkuboSystem,
    /// The side built from middle convolutions, additions and `T`.
    pub katz: SchlesingerTuple,
    pub epsilon: Scalar,
}

fn check_extension(o: &OkuboSystem, params: &ExtensionParams) -> Result<()> {
    if params.rho1.is_zero() || params.rho2.is_zero() {
        return Err(Error::ZeroRho);
    }
    if o.poles().contains(&params.t_new) {
        return Err(Error::DuplicatePole(params.t_new.to_string()));
    }
    if !check_onf_conditions(o) {
        return Err(Error::ConditionsFail("rank A = n or the block conditions fail".into()));
    }
    Ok(())
}

/// `Â = [[A, I], [-(A-ρ1)(A-ρ2), -A+ρ1+ρ2]]` on `C^n ⊕ IM (A-ρ1)(A-ρ2)`,
/// written in the pivot-column basis of the image.
pub fn extend_direct(o: &OkuboSystem, params: &ExtensionParams) -> Result<OkuboSystem> {
    check_extension(o, params)?;
    let n = o.n();
    let a = o.a();
    let q = &a.add_scalar(&-&params.rho1) * &a.add_scalar(&-&params.rho2);
    let image = q.image_basis();
    if image.is_empty() {
        return Err(Error::DegenerateExtension);
    }
    let r = image.len();
    let b = Matrix::from_cols(n, &image);
    let c = Matrix::solve_in_basis(&b, &-&q).expect("columns of Q lie in its image");
    let shifted = (-a).add_scalar(&(&params.rho1 + &params.rho2));
    let d = Matrix::solve_in_basis(&b, &(&shifted * &b)).expect("the image of Q is A-invariant");
    let mut hat = Matrix::zeros(n + r, n + r);
    hat.set_block(0, 0, a);
    hat.set_block(0, n, &b);
    hat.set_block(n, 0, &c);
    hat.set_block(n, n, &d);
    let mut blocks = o.blocks().to_vec();
    blocks.push(r);
    let mut poles = o.poles().to_vec();
    poles.push(params.t_new.clone());
    let out = OkuboSystem::new(blocks, poles, hat)?;
    let scheme = o.scheme().and_then(|s| scheme_of_extension(s, params).ok());
    Ok(out.with_scheme_if_valid(scheme))
}

/// `mc_ρ1 ∘ M_(0,…,0,ρ2-ρ1) ∘ T_(p+1,∞) ∘ mc_-ρ1` on the Schlesinger form.
pub fn extend_composite(o: &OkuboSystem, params: &ExtensionParams) -> Result<SchlesingerTuple> {
    check_extension(o, params)?;
    let t = scf_from_onf(o);
    let t = middle_convolution(&t, &-&params.rho1);
    let t = append_infinity_pole(&t, &params.t_new)?;
    let mut mu = vec![Scalar::zero(); t.p()];
    mu[t.p() - 1] = &params.rho2 - &params.rho1;
    let t = addition(&t, &mu)?;
    Ok(middle_convolution(&t, &params.rho1))
}

/// Roots of the minimal polynomial of `a` when it has degree at most 2 and
/// splits over the Gaussian rationals.
pub fn quadratic_roots(a: &Matrix) -> Option<(Scalar, Scalar)> {
    let n = a.rows();
    if n == 0 {
        return None;
    }
    let id = Matrix::identity(n);
    let diag = a.get(0, 0).clone();
    if *a == Matrix::scalar(n, &diag) {
        return Some((diag.clone(), diag));
    }
    // A² = c1 A + c0 I.
    let vec = |m: &Matrix| Matrix::from_fn(n * n, 1, |i, _| m.entries()[i].clone());
    let basis = Matrix::hstack(&[&vec(a), &vec(&id)]);
    let coef = Matrix::solve_in_basis(&basis, &vec(&(a * a)))?;
    let (c1, c0) = (coef.get(0, 0).clone(), coef.get(1, 0).clone());
    let four = Scalar::from_int(4);
    let disc = &(&c1 * &c1) + &(&four * &c0);
    let root = disc.sqrt()?;
    let half = Scalar::from_frac(1, 2);
    let mu1 = &(&c1 + &root) * &half;
    let mu2 = &(&c1 - &root) * &half;
    Some((mu1, mu2))
}

/// `R^p_j = R^p ∘ T_(j,p)`: block `p` takes the place of block `j`, then the
/// last block is removed.
pub fn restrict(o: &OkuboSystem, params: &RestrictionParams) -> Result<OkuboSystem> {
    let p = o.p();
    let j = params.j;
    if j == 0 || j > p {
        return Err(Error::IndexOutOfRange { index: j, len: p });
    }
    if p < 2 {
        return Err(Error::InvalidTuple("restriction needs at least two blocks".into()));
    }
    let a = o.a();
    let q = &a.add_scalar(&-&params.mu1) * &a.add_scalar(&-&params.mu2);
    if !q.is_zero() {
        return Err(Error::NotQ2);
    }
    let sum = &params.mu1 + &params.mu2;
    let ajj = o.block(j - 1, j - 1);
    if ajj.add_scalar(&-&sum).rank() != ajj.rows() {
        return Err(Error::CRViolated(sum.to_string()));
    }
    if !is_irreducible(&scf_from_onf(o)) {
        return Err(Error::NotIrreducible);
    }
    let mut order: Vec<usize> = (0..p).collect();
    order.swap(j - 1, p - 1);
    let moved = o.reorder_blocks(&order)?;
    let keep = o.n() - o.blocks()[j - 1];
    let blocks = moved.blocks()[..p - 1].to_vec();
    let poles = moved.poles()[..p - 1].to_vec();
    let out = OkuboSystem::new(blocks, poles, moved.a().submatrix(0, keep, 0, keep))?;
    let scheme = moved.scheme().and_then(|s| scheme_of_restriction(s).ok());
    Ok(out.with_scheme_if_valid(scheme))
}

/// `mc_μ1 ∘ T_(p,∞) ∘ M_(0,…,0,μ1-μ2) ∘ mc_-μ1` applied after moving block
/// `j` to the last position.
pub fn restrict_composite(o: &OkuboSystem, params: &RestrictionParams) -> Result<SchlesingerTuple> {
    let p = o.p();
    let j = params.j;
    if j == 0 || j > p {
        return Err(Error::IndexOutOfRange { index: j, len: p });
    }
    let mut order: Vec<usize> = (0..p).collect();
    order.swap(j - 1, p - 1);
    let t = scf_from_onf(&o.reorder_blocks(&order)?);
    let t = middle_convolution(&t, &-&params.mu1);
    let mut mu = vec![Scalar::zero(); p];
    mu[p - 1] = &params.mu1 - &params.mu2;
    let t = addition(&t, &mu)?;
    let t = swap_with_infinity(&t, p)?;
    let t = middle_convolution(&t, &params.mu1);
    let kept = t.poles()[..p - 1].to_vec();
    // The last residue is now zero; drop it.
    let mats = t.matrices()[..p - 1].to_vec();
    if !t.matrix(p - 1).is_zero() {
        return Err(Error::NotQ2);
    }
    SchlesingerTuple::new(kept, mats)
}

fn structural_split(col: &[Part]) -> (usize, Vec<Part>) {
    split_top(col, &Scalar::zero())
}

/// Splits the column at infinity into the largest parts labelled `-ρ1` and
/// `-ρ2` and the remaining `(μ_k, m_k)`.
fn split_infinity(col: &[Part], rho1: &Scalar, rho2: &Scalar) -> (usize, usize, Vec<Part>) {
    let (m1, rest) = split_top(col, &-rho1);
    let (m2, rest) = split_top(&rest, &-rho2);
    (m1, m2, rest)
}

/// Riemann scheme after `E^p_{ρ1,ρ2}`.
pub fn scheme_of_extension(s: &RiemannScheme, params: &ExtensionParams) -> Result<RiemannScheme> {
    let n = s.rank();
    let (rho1, rho2) = (&params.rho1, &params.rho2);
    let (m1, m2, rest) = split_infinity(s.column(0), rho1, rho2);
    let hat_n = 2 * n - m1 - m2;
    let mut cols = vec![vec![Part::new(-rho1, n - m2), Part::new(-rho2, n - m1)]];
    for col in &s.columns()[1..] {
        let (z, others) = structural_split(col);
        if z >= n {
            return Err(Error::NotONFShape("a finite column has no nonzero block".into()));
        }
        let mut c = vec![Part::new(Scalar::zero(), z + hat_n - n)];
        c.extend(others);
        cols.push(c);
    }
    let rho_sum = rho1 + rho2;
    let mut last = vec![Part::new(Scalar::zero(), n)];
    // Remaining labels at infinity are -μ_k.
    last.extend(rest.iter().map(|p| Part::new(&rho_sum + &p.value, p.mult)));
    cols.push(last);
    let mut poles = s.poles().to_vec();
    poles.push(params.t_new.clone());
    RiemannScheme::new(poles, cols)
}

/// Riemann scheme after `R^p`, reading `μ1, μ2` from the column at infinity.
pub fn scheme_of_restriction(s: &RiemannScheme) -> Result<RiemannScheme> {
    let inf = s.column(0);
    if inf.len() != 2 || inf[0].value == inf[1].value {
        return Err(Error::NotQ2);
    }
    let p = s.p();
    if p < 2 {
        return Err(Error::NotONFShape("restriction needs two finite points".into()));
    }
    let n = s.rank();
    let mu1 = -&inf[0].value;
    let mu2 = -&inf[1].value;
    let (zp, lam_p) = structural_split(s.column(p));
    let np = n - zp;
    let sum = &mu1 + &mu2;
    if lam_p.iter().any(|part| part.value == sum) {
        return Err(Error::CRViolated(sum.to_string()));
    }
    if inf[0].mult < np || inf[1].mult < np {
        return Err(Error::NotONFShape(format!(
            "multiplicities at infinity are smaller than n_p = {np}"
        )));
    }
    let check_n = n - np;
    let mut col0 = vec![Part::new(-&mu1, inf[0].mult - np), Part::new(-&mu2, inf[1].mult - np)];
    col0.extend(lam_p.iter().map(|part| Part::new(&part.value - &sum, part.mult)));
    let mut cols = vec![col0];
    for col in &s.columns()[1..p] {
        let (z, others) = structural_split(col);
        let nj = n - z;
        if nj > check_n {
            return Err(Error::NotONFShape("block larger than the restricted rank".into()));
        }
        let mut c = vec![Part::new(Scalar::zero(), check_n - nj)];
        c.extend(others);
        cols.push(c);
    }
    RiemannScheme::new(s.poles()[..p - 1].to_vec(), cols)
}

fn relabel_pole(t: &SchlesingerTuple, j: usize, pole: &Scalar) -> Result<SchlesingerTuple> {
    let mut poles = t.poles().to_vec();
    poles[j - 1] = pole.clone();
    let out = SchlesingerTuple::new(poles.clone(), t.matrices().to_vec())?;
    let scheme = t
        .scheme()
        .map(|s| RiemannScheme::new(poles, s.columns().to_vec()))
        .transpose()?;
    Ok(out.with_scheme_unchecked(scheme))
}

fn is_eigenvalue(m: &Matrix, v: &Scalar) -> bool {
    m.add_scalar(&-v).rank() != m.rows()
}

fn addition_at(t: &SchlesingerTuple, j: usize, v: Scalar) -> Result<SchlesingerTuple> {
    let mut mu = vec![Scalar::zero(); t.p()];
    mu[j - 1] = v;
    addition(t, &mu)
}

const EPSILON_TRIES: usize = 64;

/// `R^{p+1}_j ∘ E_ε ∘ E^p_{ρ1,ρ2}` together with
/// `mc_{ρ1+ε} ∘ M_(…,ρ2-ρ1 at j,…) ∘ T_(j,∞) ∘ mc_-ρ1`.
pub fn re_composite(
    o: &OkuboSystem,
    j: usize,
    rho1: &Scalar,
    rho2: &Scalar,
    epsilon: Option<&Scalar>,
) -> Result<CompositeResult> {
    let p = o.p();
    if j == 0 || j > p {
        return Err(Error::IndexOutOfRange { index: j, len: p });
    }
    let params = ExtensionParams {
        rho1: rho1.clone(),
        rho2: rho2.clone(),
        t_new: pick_generic(o.poles()),
    };
    let ext = extend_direct(o, &params)?;
    let katz_pre = {
        let t = middle_convolution(&scf_from_onf(o), &-rho1);
        let t = swap_with_infinity(&t, j)?;
        addition_at(&t, j, rho2 - rho1)?
    };
    let ajj = o.block(j - 1, j - 1);
    let a0 = residue_at_infinity(&katz_pre);
    let generic = |eps: &Scalar| {
        let m = rho1 + eps;
        !m.is_zero()
            && !is_eigenvalue(ext.a(), &-eps)
            && !is_eigenvalue(&ajj, &(&(rho1 + rho2) + eps))
            && !is_eigenvalue(&a0, &m)
    };
    let eps = match epsilon {
        Some(e) if generic(e) => e.clone(),
        Some(e) => return Err(Error::NotGeneric(e.to_string())),
        None => pick_generic_with(&[], EPSILON_TRIES, generic)
            .ok_or_else(|| Error::NotGeneric("no admissible epsilon found".into()))?,
    };
    let shifted = euler_transform(&ext, &eps)?;
    let okubo = restrict(
        &shifted,
        &RestrictionParams {
            mu1: rho1 + &eps,
            mu2: rho2 + &eps,
            j,
        },
    )?;
    let katz = middle_convolution(&katz_pre, &(rho1 + &eps));
    let katz = relabel_pole(&katz, j, &params.t_new)?;
    Ok(CompositeResult {
        okubo,
        katz,
        epsilon: eps,
    })
}

/// `R_j ∘ E^p_{ρ1+ε, ρ1+ρ2+ρ3+ε} ∘ R_j ∘ E_ε ∘ E^p_{ρ1,ρ2}` together with
/// `mc_{ρ1+ε} ∘ M_(…,ρ1+ρ3 at j,…) ∘ mc_-ρ1`.
pub fn rere_composite(
    o: &OkuboSystem,
    j: usize,
    rho1: &Scalar,
    rho2: &Scalar,
    rho3: &Scalar,
    epsilon: Option<&Scalar>,
) -> Result<CompositeResult> {
    let p = o.p();
    if j == 0 || j > p {
        return Err(Error::IndexOutOfRange { index: j, len: p });
    }
    let katz_pre = addition_at(&middle_convolution(&scf_from_onf(o), &-rho1), j, rho1 + rho3)?;
    let a0 = residue_at_infinity(&katz_pre);
    let rho123 = &(rho1 + rho2) + rho3;
    let attempt = |eps: &Scalar| -> Result<Option<(OkuboSystem, Option<Scalar>)>> {
        let first = match re_composite(o, j, rho1, rho2, Some(eps)) {
            Ok(r) => r,
            Err(Error::NotGeneric(_)) => return Ok(None),
            Err(e) => return Err(e),
        };
        let r1 = rho1 + eps;
        let r2 = &rho123 + eps;
        if r1.is_zero() || r2.is_zero() || is_eigenvalue(&a0, &r1) {
            return Ok(None);
        }
        let y = first.okubo;
        let yjj = y.block(j - 1, j - 1);
        if is_eigenvalue(&yjj, &(&r1 + &r2)) {
            return Ok(None);
        }
        let params = ExtensionParams {
            rho1: r1.clone(),
            rho2: r2.clone(),
            t_new: pick_generic(y.poles()),
        };
        match extend_direct(&y, &params) {
            Ok(ext) => {
                let out = restrict(&ext, &RestrictionParams { mu1: r1, mu2: r2, j })?;
                Ok(Some((out, Some(params.t_new))))
            }
            Err(Error::DegenerateExtension) => match restrict_through_empty(&y, j, &params) {
                Ok(out) => Ok(Some((out, None))),
                Err(Error::CRViolated(_)) => Ok(None),
                Err(e) => Err(e),
            },
            Err(e) => Err(e),
        }
    };
    let (okubo, t_new, eps) = match epsilon {
        Some(e) => match attempt(e)? {
            Some((out, t)) => (out, t, e.clone()),
            None => return Err(Error::NotGeneric(e.to_string())),
        },
        None => {
            let mut tried = Vec::new();
            let mut found = None;
            for _ in 0..EPSILON_TRIES {
                let e = pick_generic(&tried);
                if let Some((out, t)) = attempt(&e)? {
                    found = Some((out, t, e));
                    break;
                }
                tried.push(e);
            }
            found.ok_or_else(|| Error::NotGeneric("no admissible epsilon found".into()))?
        }
    };
    let katz = middle_convolution(&katz_pre, &(rho1 + &eps));
    let katz = match t_new {
        Some(t) => relabel_pole(&katz, j, &t)?,
        None => drop_pole(&katz, j)?,
    };
    Ok(CompositeResult {
        okubo,
        katz,
        epsilon: eps,
    })
}

/// `R^{p+1}_j ∘ E^p_{ρ1,ρ2}` when the extension adds an empty block: the
/// restriction then deletes block `j` together with its pole.
fn restrict_through_empty(y: &OkuboSystem, j: usize, params: &ExtensionParams) -> Result<OkuboSystem> {
    let p = y.p();
    if p < 2 {
        return Err(Error::InvalidTuple("restriction needs at least two blocks".into()));
    }
    let sum = &params.rho1 + &params.rho2;
    let yjj = y.block(j - 1, j - 1);
    if is_eigenvalue(&yjj, &sum) {
        return Err(Error::CRViolated(sum.to_string()));
    }
    if !is_irreducible(&scf_from_onf(y)) {
        return Err(Error::NotIrreducible);
    }
    let order: Vec<usize> = (0..p).filter(|&k| k != j - 1).chain([j - 1]).collect();
    let moved = y.reorder_blocks(&order)?;
    let keep = y.n() - y.blocks()[j - 1];
    let out = OkuboSystem::new(
        moved.blocks()[..p - 1].to_vec(),
        moved.poles()[..p - 1].to_vec(),
        moved.a().submatrix(0, keep, 0, keep),
    )?;
    let scheme = moved.scheme().and_then(|s| {
        let ext = scheme_of_extension(s, params).ok()?;
        let without_new = RiemannScheme::new(s.poles().to_vec(), ext.columns()[..=p].to_vec()).ok()?;
        scheme_of_restriction(&without_new).ok()
    });
    Ok(out.with_scheme_if_valid(scheme))
}

/// Removes the pole `j` (1-based), whose residue must vanish.
fn drop_pole(t: &SchlesingerTuple, j: usize) -> Result<SchlesingerTuple> {
    if !t.matrix(j - 1).is_zero() {
        return Err(Error::InvalidTuple(format!("residue at pole {j} does not vanish")));
    }
    let keep = |v: &[Scalar]| -> Vec<Scalar> {
        v.iter()
            .enumerate()
            .filter(|&(k, _)| k != j - 1)
            .map(|(_, x)| x.clone())
            .collect()
    };
    let mats: Vec<Matrix> = t
        .matrices()
        .iter()
        .enumerate()
        .filter(|&(k, _)| k != j - 1)
        .map(|(_, m)| m.clone())
        .collect();
    let out = SchlesingerTuple::new(keep(t.poles()), mats)?;
    let scheme = t.scheme().and_then(|s| {
        let cols: Vec<Vec<Part>> = s
            .columns()
            .iter()
            .enumerate()
            .filter(|&(k, _)| k != j)
            .map(|(_, c)| c.clone())
            .collect();
        RiemannScheme::new(keep(s.poles()), cols).ok()
    });
    Ok(out.with_scheme_if_valid(scheme))
}

/// Parameters of one rank-lowering step within Okubo systems.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ReductionStep {
    /// 1-based block index.
    pub j: usize,
    pub rho1: Scalar,
    pub rho2: Scalar,
    pub rho3: Scalar,
    /// The rank drop `m_{0,1} - m_{j,1} + m_{j,2}`.
    pub d: usize,
}

/// Reads a rank-lowering step off a scheme in Okubo shape, choosing the
/// block with the largest drop; `None` when no block lowers the rank.
pub fn reduction_step_for_scheme(s: &RiemannScheme) -> Option<ReductionStep> {
    let inf = s.column(0);
    if inf.len() < 2 {
        return None;
    }
    let (l01, m01) = (&inf[0].value, inf[0].mult as i64);
    let l02 = &inf[1].value;
    let mut best: Option<(usize, Scalar, i64)> = None;
    for j in 1..=s.p() {
        let (mj1, rest) = structural_split(s.column(j));
        let Some(second) = rest.first() else { continue };
        let d = m01 - mj1 as i64 + second.mult as i64;
        if d > 0 && best.as_ref().is_none_or(|b| d > b.2) {
            best = Some((j, second.value.clone(), d));
        }
    }
    // The right-hand side does not involve ρ2; when both eigenvalues of A are
    // used the first extension would be degenerate, so a generic ρ2 is taken.
    let rho2 = if inf[0].mult + inf[1].mult < s.rank() {
        -l02
    } else {
        let spectrum: Vec<Scalar> = inf.iter().map(|part| -&part.value).collect();
        pick_generic(&spectrum)
    };
    best.map(|(j, l_j2, d)| ReductionStep {
        j,
        rho1: -l01,
        rho2,
        rho3: -&l_j2,
        d: d as usize,
    })
}

/// The step for an Okubo system with a declared scheme.
pub fn reduction_parameters(o: &OkuboSystem) -> Result<Option<ReductionStep>> {
    let s = o
        .scheme()
        .ok_or_else(|| Error::SchemeUnavailable("the reduction step needs a declared scheme".into()))?;
    Ok(reduction_step_for_scheme(s))
}

/// Scheme after the rank-lowering step with shift `ε`, computed on the
/// Katz side `mc_{ρ1+ε} ∘ M_(ρ1+ρ3 at j) ∘ mc_-ρ1`; the point `j` is
/// dropped when its column becomes trivial and moved to `t_new` otherwise.
pub fn reduction_scheme(
    s: &RiemannScheme,
    step: &ReductionStep,
    epsilon: &Scalar,
    t_new: &Scalar,
) -> Result<RiemannScheme> {
    let s1 = predicted_scheme(s, &-&step.rho1)?;
    let mut mu = vec![Scalar::zero(); s.p()];
    mu[step.j - 1] = &step.rho1 + &step.rho3;
    let s2 = shift_scheme(&s1, &mu)?;
    let s3 = predicted_scheme(&s2, &(&step.rho1 + epsilon))?;
    let j = step.j;
    let trivial = s3.column(j).len() == 1 && s3.column(j)[0].value.is_zero();
    let mut poles = s3.poles().to_vec();
    let mut cols = s3.columns().to_vec();
    if trivial {
        poles.remove(j - 1);
        cols.remove(j);
    } else {
        poles[j - 1] = t_new.clone();
    }
    RiemannScheme::new(poles, cols)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::okubo::check_onf_conditions;
    use crate::schlesinger::{index_of_rigidity, is_equivalent};

    fn s(v: i64) -> Scalar {
        Scalar::from_int(v)
    }

    fn rank_one(lambda: &Scalar) -> OkuboSystem {
        let scheme = RiemannScheme::new(
            vec![s(0)],
            vec![vec![Part::new(-lambda, 1)], vec![Part::new(lambda.clone(), 1)]],
        )
        .unwrap();
        OkuboSystem::new(vec![1], vec![s(0)], Matrix::scalar(1, lambda))
            .unwrap()
            .with_scheme(scheme)
            .unwrap()
    }

    fn hyper_params() -> ExtensionParams {
        ExtensionParams {
            rho1: s(2),
            rho2: Scalar::from_frac(5, 3),
            t_new: s(1),
        }
    }

    #[test]
    fn hypergeometric_extension() {
        let lambda = Scalar::from_frac(1, 2);
        let o = rank_one(&lambda);
        let params = hyper_params();
        let ext = extend_direct(&o, &params).unwrap();
        assert_eq!(ext.n(), 2);
        assert_eq!(ext.blocks(), &[1, 1]);
        let expected = RiemannScheme::new(
            vec![s(0), s(1)],
            vec![
                vec![Part::new(-&params.rho1, 1), Part::new(-&params.rho2, 1)],
                vec![Part::new(s(0), 1), Part::new(lambda.clone(), 1)],
                vec![
                    Part::new(s(0), 1),
                    Part::new(&(&params.rho1 + &params.rho2) - &lambda, 1),
                ],
            ],
        )
        .unwrap();
        assert_eq!(ext.scheme(), Some(&expected));
        assert!(is_irreducible(&scf_from_onf(&ext)));
        assert!(check_onf_conditions(&ext));
        let comp = extend_composite(&o, &params).unwrap();
        assert!(is_equivalent(&comp, &scf_from_onf(&ext)));
        assert_eq!(index_of_rigidity(&comp), 2);
    }

    #[test]
    fn extension_preconditions() {
        let o = rank_one(&s(3));
        let zero = ExtensionParams {
            rho1: s(0),
            rho2: s(1),
            t_new: s(1),
        };
        assert_eq!(extend_direct(&o, &zero), Err(Error::ZeroRho));
        let degenerate = ExtensionParams {
            rho1: s(3),
            rho2: s(5),
            t_new: s(1),
        };
        assert_eq!(extend_direct(&o, &degenerate), Err(Error::DegenerateExtension));
        let dup = ExtensionParams {
            rho1: s(1),
            rho2: s(2),
            t_new: s(0),
        };
        assert!(matches!(extend_direct(&o, &dup), Err(Error::DuplicatePole(_))));
    }

    #[test]
    fn equal_rho_extension() {
        let o = rank_one(&s(3));
        let params = ExtensionParams {
            rho1: s(1),
            rho2: s(1),
            t_new: s(1),
        };
        let ext = extend_direct(&o, &params).unwrap();
        let comp = extend_composite(&o, &params).unwrap();
        assert!(is_equivalent(&comp, &scf_from_onf(&ext)));
    }

    #[test]
    fn restriction_inverts_extension() {
        let o = rank_one(&Scalar::from_frac(1, 2));
        let params = hyper_params();
        let ext = extend_direct(&o, &params).unwrap();
        let (mu1, mu2) = quadratic_roots(ext.a()).unwrap();
        let mut mus = [mu1, mu2];
        mus.sort();
        let mut rhos = [params.rho1.clone(), params.rho2.clone()];
        rhos.sort();
        assert_eq!(mus, rhos);
        let back = restrict(
            &ext,
            &RestrictionParams {
                mu1: params.rho1.clone(),
                mu2: params.rho2.clone(),
                j: 2,
            },
        )
        .unwrap();
        assert_eq!(back.a(), o.a());
        assert_eq!(back.scheme(), o.scheme());
        let wrong = RestrictionParams {
            mu1: s(7),
            mu2: s(8),
            j: 2,
        };
        assert_eq!(restrict(&ext, &wrong), Err(Error::NotQ2));
    }

    #[test]
    fn restriction_matches_katz_pipeline() {
        let o = rank_one(&Scalar::from_frac(1, 2));
        let params = hyper_params();
        let ext = extend_direct(&o, &params).unwrap();
        let rp = RestrictionParams {
            mu1: params.rho1.clone(),
            mu2: params.rho2.clone(),
            j: 2,
        };
        let direct = restrict(&ext, &rp).unwrap();
        let comp = restrict_composite(&ext, &rp).unwrap();
        assert!(is_equivalent(&comp, &scf_from_onf(&direct)));
    }

    #[test]
    fn scheme_of_restriction_inverts_extension() {
        let o = rank_one(&Scalar::from_frac(1, 2));
        let params = hyper_params();
        let ext_scheme = scheme_of_extension(o.scheme().unwrap(), &params).unwrap();
        let back = scheme_of_restriction(&ext_scheme).unwrap();
        assert_eq!(&back, o.scheme().unwrap());
        assert_eq!(back.rank(), ext_scheme.rank() - 1);
    }

    #[test]
    fn scheme_of_extension_generic_rho_doubles_rank() {
        let o = rank_one(&s(3));
        let params = ExtensionParams {
            rho1: s(1),
            rho2: s(2),
            t_new: s(5),
        };
        let sc = scheme_of_extension(o.scheme().unwrap(), &params).unwrap();
        assert_eq!(sc.rank(), 2);
        for col in sc.columns() {
            assert_eq!(col.iter().map(|p| p.mult).sum::<usize>(), 2);
        }
    }

    fn image_rank(o: &OkuboSystem, rho1: &Scalar, rho2: &Scalar) -> usize {
        (&o.a().add_scalar(&-rho1) * &o.a().add_scalar(&-rho2)).rank()
    }

    #[test]
    fn re_composite_sides_agree() {
        let o = crate::instances::hypergeometric_onf(3);
        for j in 1..=o.p() {
            for (r1, r2) in [(2, 3), (-1, 4), (5, 5)] {
                let (rho1, rho2) = (s(r1), s(r2));
                let res = re_composite(&o, j, &rho1, &rho2, None).unwrap();
                let expected = o.n() + image_rank(&o, &rho1, &rho2) - o.blocks()[j - 1];
                assert_eq!(res.okubo.n(), expected);
                assert!(is_equivalent(&scf_from_onf(&res.okubo), &res.katz));
            }
        }
    }

    #[test]
    fn rere_composite_reduces_rank() {
        for n in 2..=4 {
            let o = crate::instances::hypergeometric_onf(n);
            let st = reduction_parameters(&o).unwrap().unwrap();
            let res = rere_composite(&o, st.j, &st.rho1, &st.rho2, &st.rho3, None).unwrap();
            assert_eq!(res.okubo.n(), n - st.d);
            let predicted = reduction_scheme(o.scheme().unwrap(), &st, &res.epsilon, &s(99)).unwrap();
            assert_eq!(predicted.spectral_type(), res.okubo.scheme().unwrap().spectral_type());
            assert!(is_equivalent(&scf_from_onf(&res.okubo), &res.katz));
            assert_eq!(index_of_rigidity(&res.katz), 2);
        }
    }

    #[test]
    fn rere_with_opposite_rho3_is_mc_epsilon() {
        let o = crate::instances::hypergeometric_onf(2);
        let res = rere_composite(&o, 1, &s(2), &s(3), &s(-2), None).unwrap();
        let direct = crate::katz::middle_convolution(&scf_from_onf(&o), &res.epsilon);
        let katz = relabel_pole(&direct, 1, res.katz.poles().first().unwrap()).unwrap();
        assert!(is_equivalent(&katz, &res.katz));
    }

    #[test]
    fn reduction_reaches_rank_one() {
        for n in 2..=4 {
            let mut o = crate::instances::hypergeometric_onf(n);
            while o.n() > 1 {
                let st = reduction_parameters(&o).unwrap().expect("rigid systems reduce");
                o = rere_composite(&o, st.j, &st.rho1, &st.rho2, &st.rho3, None)
                    .unwrap()
                    .okubo;
                assert!(o.scheme().is_some());
                assert_eq!(index_of_rigidity(&scf_from_onf(&o)), 2);
            }
        }
    }

    #[test]
    fn non_generic_epsilon_rejected() {
        let o = rank_one(&s(3));
        // -ε equal to an eigenvalue of the extended matrix.
        let ext = extend_direct(
            &o,
            &ExtensionParams {
                rho1: s(1),
                rho2: s(2),
                t_new: s(1),
            },
        )
        .unwrap();
        let (e1, _) = quadratic_roots(ext.a()).unwrap_or((s(1), s(1)));
        let bad = -&e1;
        assert!(matches!(
            re_composite(&o, 1, &s(1), &s(2), Some(&bad)),
            Err(Error::NotGeneric(_))
        ));
    }
}
