//! The identity harness: seeded instances checked against the algebraic
//! relations between the two calculi.

use fuchsian::katz::{addition, middle_convolution, permute, swap_with_infinity};
use fuchsian::okubo::{check_onf_conditions, mc_to_onf, mc_via_images, onf_from_scf, scf_from_onf};
use fuchsian::schlesinger::{check_star_conditions, index_of_rigidity, is_equivalent, residue_at_infinity};
use fuchsian::spectral::{lemma_ineq_holds, PartitionTuple};
use fuchsian::yokoyama::{
    extend_composite, extend_direct, re_composite, rere_composite, restrict, ExtensionParams, RestrictionParams,
};
use fuchsian::{Error, GaussianRational as Scalar, OkuboSystem, SchlesingerTuple};
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::generate::{random_generic, random_irreducible_scf, random_onf, random_onf_unfiltered, random_rigid};

/// Knobs for the harness; `corrupt_mc` swaps in a wrong convolution so that
/// the harness can be seen to fail.
#[derive(Clone, Copy, Debug, Default)]
pub struct VerifyOptions {
    pub corrupt_mc: bool,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Check {
    pub instance: usize,
    pub identity: &'static str,
    pub passed: bool,
    pub detail: String,
}

#[derive(Clone, Debug, Default)]
pub struct VerifyReport {
    pub checks: Vec<Check>,
}

impl VerifyReport {
    pub fn all_passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }

    pub fn failures(&self) -> impl Iterator<Item = &Check> {
        self.checks.iter().filter(|c| !c.passed)
    }

    pub fn render(&self) -> String {
        let mut out = String::new();
        for c in &self.checks {
            let status = if c.passed { "PASS" } else { "FAIL" };
            out.push_str(&format!("instance {:>3}  {:<28} {status}", c.instance, c.identity));
            if !c.detail.is_empty() {
                out.push_str(&format!("  ({})", c.detail));
            }
            out.push('\n');
        }
        let failed = self.failures().count();
        out.push_str(&format!("{} checks, {} failed\n", self.checks.len(), failed));
        out
    }

    fn push(&mut self, instance: usize, identity: &'static str, outcome: Outcome) {
        let (passed, detail) = match outcome {
            Ok(true) => (true, String::new()),
            Ok(false) => (false, "relation does not hold".to_string()),
            Err(e) => (false, e.to_string()),
        };
        self.checks.push(Check {
            instance,
            identity,
            passed,
            detail,
        });
    }
}

type Outcome = fuchsian::Result<bool>;

fn mc(opts: VerifyOptions, t: &SchlesingerTuple, lambda: &Scalar) -> SchlesingerTuple {
    if opts.corrupt_mc {
        middle_convolution(t, &(lambda + &Scalar::from_int(1)))
    } else {
        middle_convolution(t, lambda)
    }
}

pub fn mc_zero_is_identity(opts: VerifyOptions, t: &SchlesingerTuple) -> Outcome {
    Ok(is_equivalent(&mc(opts, t, &Scalar::default()), t))
}

pub fn mc_composition(opts: VerifyOptions, t: &SchlesingerTuple, l1: &Scalar, l2: &Scalar) -> Outcome {
    let lhs = mc(opts, &mc(opts, t, l1), l2);
    let rhs = mc(opts, t, &(l1 + l2));
    Ok(is_equivalent(&lhs, &rhs))
}

pub fn idx_invariance(opts: VerifyOptions, t: &SchlesingerTuple, lambda: &Scalar, mu: &[Scalar], j: usize) -> Outcome {
    let idx = index_of_rigidity(t);
    let after_mc = index_of_rigidity(&mc(opts, t, lambda));
    let after_add = index_of_rigidity(&addition(t, mu)?);
    let after_swap = index_of_rigidity(&swap_with_infinity(t, j)?);
    Ok(after_mc == idx && after_add == idx && after_swap == idx)
}

pub fn mc_commutes_with_permutation(
    opts: VerifyOptions,
    t: &SchlesingerTuple,
    lambda: &Scalar,
    sigma: &[usize],
) -> Outcome {
    let lhs = mc(opts, &permute(t, sigma)?, lambda);
    let rhs = permute(&mc(opts, t, lambda), sigma)?;
    Ok(is_equivalent(&lhs, &rhs))
}

pub fn restriction_inverts_extension(o: &OkuboSystem, params: &ExtensionParams) -> Outcome {
    let ext = extend_direct(o, params)?;
    let back = restrict(
        &ext,
        &RestrictionParams {
            mu1: params.rho1.clone(),
            mu2: params.rho2.clone(),
            j: o.p() + 1,
        },
    )?;
    Ok(back.a() == o.a() && back.blocks() == o.blocks())
}

pub fn extension_pipelines_agree(o: &OkuboSystem, params: &ExtensionParams) -> Outcome {
    let direct = extend_direct(o, params)?;
    let comp = extend_composite(o, params)?;
    let rank_ok = direct.n() == o.n() + direct.blocks()[o.p()];
    Ok(rank_ok && is_equivalent(&scf_from_onf(&direct), &comp))
}

/// Both sides of the `RE` relation agree and the rank is
/// `n + dim IM (A-ρ1)(A-ρ2) - n_j`.
pub fn re_relation(o: &OkuboSystem, j: usize, rho1: &Scalar, rho2: &Scalar) -> Outcome {
    let res = re_composite(o, j, rho1, rho2, None)?;
    let image = (&o.a().add_scalar(&-rho1) * &o.a().add_scalar(&-rho2)).rank();
    let rank_ok = res.okubo.n() == o.n() + image - o.blocks()[j - 1];
    Ok(rank_ok && is_equivalent(&scf_from_onf(&res.okubo), &res.katz))
}

pub fn rere_relation(o: &OkuboSystem, j: usize, rho1: &Scalar, rho2: &Scalar, rho3: &Scalar) -> Outcome {
    let res = rere_composite(o, j, rho1, rho2, rho3, None)?;
    Ok(is_equivalent(&scf_from_onf(&res.okubo), &res.katz))
}

/// The convolution through images agrees with the quotient construction and
/// has block sizes `dim IM A_j`.
pub fn mc_by_images(o: &OkuboSystem, lambda: &Scalar) -> Outcome {
    let scf = scf_from_onf(o);
    let img = mc_via_images(o, lambda)?;
    let quotient = middle_convolution(&scf, lambda);
    let ranks: Vec<usize> = scf.matrices().iter().map(|m| m.rank()).collect();
    Ok(img.blocks() == ranks.as_slice() && is_equivalent(&scf_from_onf(&img), &quotient))
}

/// Block sizes of the Okubo form of `mc_λ(t)` are the ranks of the residues.
pub fn mc_to_onf_blocks(t: &SchlesingerTuple, lambda: &Scalar) -> Outcome {
    let o = mc_to_onf(t, lambda)?;
    let ranks: Vec<usize> = t.matrices().iter().map(|m| m.rank()).collect();
    Ok(o.blocks() == ranks.as_slice() && is_equivalent(&scf_from_onf(&o), &middle_convolution(t, lambda)))
}

/// The rank conditions on `A` hold exactly when both families of star
/// conditions hold for the Schlesinger form.
pub fn okubo_conditions_agree(o: &OkuboSystem) -> Outcome {
    let (a, b) = check_star_conditions(&scf_from_onf(o));
    Ok(check_onf_conditions(o) == a.iter().chain(&b).all(|x| *x))
}

/// `mc_λ(t)` converts to Okubo form exactly when `λ` is not an eigenvalue of
/// `A_0`; checked for every eigenvalue at infinity and one generic value.
pub fn okubo_convertibility(t: &SchlesingerTuple, generic: &Scalar) -> Outcome {
    let scheme = t
        .scheme()
        .ok_or_else(|| Error::SchemeUnavailable("instance carries no scheme".into()))?;
    let a0 = residue_at_infinity(t);
    let mut lambdas: Vec<Scalar> = scheme.column(0).iter().map(|p| p.value.clone()).collect();
    lambdas.push(generic.clone());
    for lambda in lambdas.iter().filter(|l| **l != Scalar::default()) {
        let collides = a0.add_scalar(&-lambda).rank() != a0.rows();
        let converts = onf_from_scf(&middle_convolution(t, lambda)).is_ok();
        if converts == collides {
            return Ok(false);
        }
    }
    Ok(true)
}

/// The inequality for the Katz step on the spectral type; vacuous when its
/// hypotheses fail.
pub fn katz_inequality(t: &SchlesingerTuple) -> Outcome {
    let scheme = t
        .scheme()
        .ok_or_else(|| Error::SchemeUnavailable("instance carries no scheme".into()))?;
    match lemma_ineq_holds(&PartitionTuple::from_scheme(scheme)) {
        Err(Error::PreconditionFail(_)) => Ok(true),
        other => other,
    }
}

fn random_ext_params<R: Rng>(rng: &mut R, o: &OkuboSystem) -> ExtensionParams {
    let t_new = fuchsian::okubo::pick_generic(o.poles());
    loop {
        let rho1 = random_generic(rng);
        let rho2 = random_generic(rng);
        // Integer matrices have no non-integer rational eigenvalues, so the
        // extension is never degenerate.
        if rho1 != Scalar::default() && rho2 != Scalar::default() {
            return ExtensionParams { rho1, rho2, t_new };
        }
    }
}

/// Katz-calculus identities on irreducible Schlesinger tuples.
pub fn verify_scf_family<R: Rng>(rng: &mut R, report: &mut VerifyReport, k: usize, bound: usize, opts: VerifyOptions) {
    let t = random_irreducible_scf(rng, bound);
    report.push(k, "mc_0 = id", mc_zero_is_identity(opts, &t));
    let (l1, l2) = (random_generic(rng), random_generic(rng));
    report.push(k, "mc composition", mc_composition(opts, &t, &l1, &l2));
    let mu: Vec<Scalar> = (0..t.p()).map(|_| random_generic(rng)).collect();
    let j = rng.gen_range(1..=t.p());
    report.push(k, "idx invariance", idx_invariance(opts, &t, &l1, &mu, j));
    let mut sigma: Vec<usize> = (1..=t.p()).collect();
    sigma.shuffle(rng);
    report.push(
        k,
        "mc commutes with T_sigma",
        mc_commutes_with_permutation(opts, &t, &l1, &sigma),
    );
    report.push(k, "Okubo form of mc", mc_to_onf_blocks(&t, &l2));
}

/// Extension, restriction and convolution identities on Okubo systems.
pub fn verify_onf_family<R: Rng>(rng: &mut R, report: &mut VerifyReport, k: usize, bound: usize) {
    let o = random_onf(rng, bound);
    let params = random_ext_params(rng, &o);
    report.push(k, "R o E = id", restriction_inverts_extension(&o, &params));
    report.push(k, "extension pipelines", extension_pipelines_agree(&o, &params));
    let j = rng.gen_range(1..=o.p());
    report.push(k, "RE relation", re_relation(&o, j, &params.rho1, &params.rho2));
    let rho3 = random_generic(rng);
    report.push(
        k,
        "RERE relation",
        rere_relation(&o, j, &params.rho1, &params.rho2, &rho3),
    );
    report.push(k, "mc through images", mc_by_images(&o, &random_generic(rng)));
    let raw = random_onf_unfiltered(rng, bound);
    report.push(k, "Okubo conditions", okubo_conditions_agree(&raw));
}

/// Convertibility and the Katz step inequality on rigid tuples with schemes.
pub fn verify_rigid_family<R: Rng>(rng: &mut R, report: &mut VerifyReport, k: usize, bound: usize) {
    let r = random_rigid(rng, bound);
    report.push(
        k,
        "Okubo convertibility",
        okubo_convertibility(&r, &random_generic(rng)),
    );
    report.push(k, "Katz step inequality", katz_inequality(&r));
}

/// Runs every identity on `count` instances of each family.
pub fn run_verify(seed: u64, count: usize, bound: usize, opts: VerifyOptions) -> VerifyReport {
    let mut report = VerifyReport::default();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for k in 0..count {
        verify_scf_family(&mut rng, &mut report, k, bound, opts);
        verify_onf_family(&mut rng, &mut report, k, bound);
        verify_rigid_family(&mut rng, &mut report, k, bound);
    }
    report
}
