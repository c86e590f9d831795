//! JSON file formats for systems and operation logs.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::katz::{addition, middle_convolution, permute, swap_with_infinity};
use crate::matrix::Matrix;
use crate::okubo::{euler_transform, onf_from_scf, scf_from_onf, OkuboSystem};
use crate::scalar::GaussianRational as Scalar;
use crate::scheme::RiemannScheme;
use crate::schlesinger::SchlesingerTuple;
use crate::yokoyama::{extend_direct, quadratic_roots, restrict, ExtensionParams, RestrictionParams};

type Rows = Vec<Vec<Scalar>>;

#[derive(Serialize, Deserialize)]
struct ScfFile {
    poles: Vec<Scalar>,
    matrices: Vec<Rows>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    scheme: Option<RiemannScheme>,
}

#[derive(Serialize, Deserialize)]
struct OnfFile {
    blocks: Vec<usize>,
    poles: Vec<Scalar>,
    #[serde(rename = "A")]
    a: Rows,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    scheme: Option<RiemannScheme>,
}

/// A system in either normal form.
#[derive(Clone, Debug)]
pub enum System {
    Scf(SchlesingerTuple),
    Onf(OkuboSystem),
}

impl System {
    pub fn rank(&self) -> usize {
        match self {
            System::Scf(t) => t.n(),
            System::Onf(o) => o.n(),
        }
    }

    pub fn scheme(&self) -> Option<&RiemannScheme> {
        match self {
            System::Scf(t) => t.scheme(),
            System::Onf(o) => o.scheme(),
        }
    }

    /// The Schlesinger form of the system.
    pub fn to_scf(&self) -> SchlesingerTuple {
        match self {
            System::Scf(t) => t.clone(),
            System::Onf(o) => scf_from_onf(o),
        }
    }

    pub fn to_json(&self) -> String {
        let value = match self {
            System::Scf(t) => serde_json::to_value(ScfFile {
                poles: t.poles().to_vec(),
                matrices: t.matrices().iter().map(Matrix::to_rows).collect(),
                scheme: t.scheme().cloned(),
            }),
            System::Onf(o) => serde_json::to_value(OnfFile {
                blocks: o.blocks().to_vec(),
                poles: o.poles().to_vec(),
                a: o.a().to_rows(),
                scheme: o.scheme().cloned(),
            }),
        };
        serde_json::to_string_pretty(&value.expect("systems serialize")).expect("values print")
    }
}

fn parse_err(e: serde_json::Error) -> Error {
    Error::Parse(e.to_string())
}

/// Reads either format; a top-level `"blocks"` key marks an Okubo system.
/// A declared scheme is checked against the matrices.
pub fn parse_system(text: &str) -> Result<System> {
    let value: serde_json::Value = serde_json::from_str(text).map_err(parse_err)?;
    if value.get("blocks").is_some() {
        let f: OnfFile = serde_json::from_value(value).map_err(parse_err)?;
        let o = OkuboSystem::new(f.blocks, f.poles, Matrix::from_rows(f.a)?)?;
        Ok(System::Onf(match f.scheme {
            Some(s) => o.with_scheme(s)?,
            None => o,
        }))
    } else {
        let f: ScfFile = serde_json::from_value(value).map_err(parse_err)?;
        let mats = f
            .matrices
            .into_iter()
            .map(Matrix::from_rows)
            .collect::<Result<Vec<_>>>()?;
        let t = SchlesingerTuple::new(f.poles, mats)?;
        Ok(System::Scf(match f.scheme {
            Some(s) => t.with_scheme(s)?,
            None => t,
        }))
    }
}

/// One entry of an operation log.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "op", rename_all = "lowercase")]
pub enum Op {
    Mc {
        lambda: Scalar,
    },
    Add {
        mu: Vec<Scalar>,
    },
    SwapInf {
        j: usize,
    },
    Perm {
        sigma: Vec<usize>,
    },
    Extend {
        rho1: Scalar,
        rho2: Scalar,
        t: Scalar,
    },
    Restrict {
        j: usize,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        mu1: Option<Scalar>,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        mu2: Option<Scalar>,
    },
    Euler {
        lambda: Scalar,
    },
    /// Conversion to Okubo normal form.
    Onf,
    /// Conversion to Schlesinger form.
    Scf,
}

impl Op {
    pub fn name(&self) -> &'static str {
        match self {
            Op::Mc { .. } => "mc",
            Op::Add { .. } => "add",
            Op::SwapInf { .. } => "swapinf",
            Op::Perm { .. } => "perm",
            Op::Extend { .. } => "extend",
            Op::Restrict { .. } => "restrict",
            Op::Euler { .. } => "euler",
            Op::Onf => "onf",
            Op::Scf => "scf",
        }
    }
}

fn require_onf(s: &System, op: &Op) -> Result<OkuboSystem> {
    match s {
        System::Onf(o) => Ok(o.clone()),
        System::Scf(_) => Err(Error::InvalidTuple(format!(
            "{} needs an Okubo system; convert with {{\"op\":\"onf\"}} first",
            op.name()
        ))),
    }
}

/// Applies one operation; operations of the Katz calculus act on the
/// Schlesinger form of an Okubo input.
pub fn apply_op(s: &System, op: &Op) -> Result<System> {
    Ok(match op {
        Op::Mc { lambda } => System::Scf(middle_convolution(&s.to_scf(), lambda)),
        Op::Add { mu } => System::Scf(addition(&s.to_scf(), mu)?),
        Op::SwapInf { j } => System::Scf(swap_with_infinity(&s.to_scf(), *j)?),
        Op::Perm { sigma } => System::Scf(permute(&s.to_scf(), sigma)?),
        Op::Extend { rho1, rho2, t } => {
            let o = require_onf(s, op)?;
            let params = ExtensionParams {
                rho1: rho1.clone(),
                rho2: rho2.clone(),
                t_new: t.clone(),
            };
            System::Onf(extend_direct(&o, &params)?)
        }
        Op::Restrict { j, mu1, mu2 } => {
            let o = require_onf(s, op)?;
            let (mu1, mu2) = match (mu1, mu2) {
                (Some(a), Some(b)) => (a.clone(), b.clone()),
                _ => quadratic_roots(o.a()).ok_or(Error::NotQ2)?,
            };
            System::Onf(restrict(&o, &RestrictionParams { mu1, mu2, j: *j })?)
        }
        Op::Euler { lambda } => System::Onf(euler_transform(&require_onf(s, op)?, lambda)?),
        Op::Onf => match s {
            System::Onf(o) => System::Onf(o.clone()),
            System::Scf(t) => System::Onf(onf_from_scf(t)?),
        },
        Op::Scf => System::Scf(s.to_scf()),
    })
}

/// Parses JSON lines, skipping blank lines; extra fields are ignored so
/// that step logs replay as operation lists.
pub fn parse_ops(text: &str) -> Result<Vec<Op>> {
    text.lines()
        .filter(|l| !l.trim().is_empty())
        .map(|l| serde_json::from_str(l).map_err(parse_err))
        .collect()
}
