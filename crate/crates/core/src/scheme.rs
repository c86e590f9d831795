//! Riemann schemes: per singular point, the eigenvalue/multiplicity data of
//! the residue matrix in the canonical `L(m; λ)` order.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::scalar::GaussianRational as Scalar;

/// One `[λ]_(m)` entry of a scheme column.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Part {
    pub value: Scalar,
    pub mult: usize,
}

impl Part {
    pub fn new(value: Scalar, mult: usize) -> Self {
        Part { value, mult }
    }
}

/// Multiplicity descending, then eigenvalue ascending on `(re, im)`.
pub fn canonical_cmp(a: &Part, b: &Part) -> std::cmp::Ordering {
    b.mult.cmp(&a.mult).then_with(|| a.value.cmp(&b.value))
}

/// Sorts canonically and drops zero multiplicities.
pub fn canonicalize(parts: &mut Vec<Part>) {
    parts.retain(|p| p.mult > 0);
    parts.sort_by(canonical_cmp);
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Point {
    Infinity,
    Finite(Scalar),
}

impl fmt::Display for Point {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Point::Infinity => write!(f, "inf"),
            Point::Finite(t) => write!(f, "{t}"),
        }
    }
}

/// Column 0 belongs to `x = ∞`, column `j` to the pole `t_j`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct RiemannScheme {
    poles: Vec<Scalar>,
    columns: Vec<Vec<Part>>,
}

impl RiemannScheme {
    /// `columns[0]` is the column at infinity; `columns.len()` must be
    /// `poles.len() + 1` and every column must have the same total.
    pub fn new(poles: Vec<Scalar>, columns: Vec<Vec<Part>>) -> Result<Self> {
        if columns.len() != poles.len() + 1 {
            return Err(Error::LengthMismatch {
                expected: poles.len() + 1,
                got: columns.len(),
            });
        }
        for (i, a) in poles.iter().enumerate() {
            if poles[..i].contains(a) {
                return Err(Error::DuplicatePole(a.to_string()));
            }
        }
        let mut columns = columns;
        for c in columns.iter_mut() {
            canonicalize(c);
        }
        let totals: Vec<usize> = columns.iter().map(|c| c.iter().map(|p| p.mult).sum()).collect();
        if totals.windows(2).any(|w| w[0] != w[1]) {
            return Err(Error::InconsistentColumns(totals));
        }
        Ok(RiemannScheme { poles, columns })
    }

    pub fn poles(&self) -> &[Scalar] {
        &self.poles
    }

    pub fn points(&self) -> Vec<Point> {
        std::iter::once(Point::Infinity)
            .chain(self.poles.iter().cloned().map(Point::Finite))
            .collect()
    }

    pub fn columns(&self) -> &[Vec<Part>] {
        &self.columns
    }

    pub fn column(&self, k: usize) -> &[Part] {
        &self.columns[k]
    }

    pub fn rank(&self) -> usize {
        self.columns[0].iter().map(|p| p.mult).sum()
    }

    /// Number of finite singular points.
    pub fn p(&self) -> usize {
        self.poles.len()
    }

    /// The label-free multiplicity data.
    pub fn spectral_type(&self) -> Vec<Vec<usize>> {
        self.columns
            .iter()
            .map(|c| c.iter().map(|p| p.mult).collect())
            .collect()
    }

    /// Sum over all points of eigenvalue times multiplicity; zero for any
    /// scheme realized by a tuple (the trace of `A_0 + A_1 + ... + A_p`).
    pub fn fuchs_sum(&self) -> Scalar {
        let mut s = Scalar::default();
        for c in &self.columns {
            for p in c {
                s += &(&p.value * &Scalar::from_int(p.mult as i64));
            }
        }
        s
    }
}

impl fmt::Display for RiemannScheme {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{")?;
        for (k, (pt, col)) in self.points().iter().zip(&self.columns).enumerate() {
            if k > 0 {
                write!(f, "; ")?;
            }
            write!(f, "{pt}:")?;
            for p in col {
                write!(f, " [{}]_({})", p.value, p.mult)?;
            }
        }
        write!(f, "}}")
    }
}

#[derive(Serialize, Deserialize)]
struct RawScheme {
    points: Vec<String>,
    columns: Vec<Vec<Part>>,
}

impl Serialize for RiemannScheme {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        RawScheme {
            points: self.points().iter().map(ToString::to_string).collect(),
            columns: self.columns.clone(),
        }
        .serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for RiemannScheme {
    fn deserialize<D: serde::Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        use serde::de::Error as _;
        let raw = RawScheme::deserialize(deserializer)?;
        let mut points = raw.points.into_iter();
        match points.next().as_deref() {
            Some("inf") => {}
            _ => return Err(D::Error::custom("first scheme point must be \"inf\"")),
        }
        let poles = points
            .map(|s| s.parse::<Scalar>().map_err(D::Error::custom))
            .collect::<std::result::Result<Vec<_>, _>>()?;
        RiemannScheme::new(poles, raw.columns).map_err(D::Error::custom)
    }
}
