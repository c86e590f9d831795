//! Exact Gaussian-rational scalars `a + b i` with `a, b` in ℚ.

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, AddAssign, Div, Mul, MulAssign, Neg, Sub, SubAssign};
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::Error;

/// A complex number with exact rational real and imaginary parts.
///
/// Both parts are kept in lowest terms with positive denominators (this is
/// what `BigRational` maintains), so `==` is structural equality.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct GaussianRational {
    re: BigRational,
    im: BigRational,
}

impl GaussianRational {
    pub fn new(re: BigRational, im: BigRational) -> Self {
        GaussianRational { re, im }
    }

    pub fn from_int(v: i64) -> Self {
        GaussianRational {
            re: BigRational::from_integer(BigInt::from(v)),
            im: BigRational::zero(),
        }
    }

    /// `num / den` as a real scalar. Panics when `den == 0`.
    pub fn from_frac(num: i64, den: i64) -> Self {
        GaussianRational {
            re: BigRational::new(BigInt::from(num), BigInt::from(den)),
            im: BigRational::zero(),
        }
    }

    pub fn complex(re: i64, im: i64) -> Self {
        GaussianRational {
            re: BigRational::from_integer(BigInt::from(re)),
            im: BigRational::from_integer(BigInt::from(im)),
        }
    }

    pub fn i() -> Self {
        Self::complex(0, 1)
    }

    pub fn re(&self) -> &BigRational {
        &self.re
    }

    pub fn im(&self) -> &BigRational {
        &self.im
    }

    pub fn is_real(&self) -> bool {
        self.im.is_zero()
    }

    pub fn conj(&self) -> Self {
        GaussianRational {
            re: self.re.clone(),
            im: -self.im.clone(),
        }
    }

    /// `|z|^2 = re^2 + im^2`.
    pub fn norm_sqr(&self) -> BigRational {
        &self.re * &self.re + &self.im * &self.im
    }

    pub fn inv(&self) -> Option<Self> {
        if self.is_zero() {
            return None;
        }
        if self.im.is_zero() {
            return Some(GaussianRational {
                re: self.re.recip(),
                im: BigRational::zero(),
            });
        }
        let n = self.norm_sqr();
        Some(GaussianRational {
            re: &self.re / &n,
            im: -(&self.im / &n),
        })
    }

    /// Integer value if the scalar is a real integer.
    pub fn to_i64(&self) -> Option<i64> {
        use num_traits::ToPrimitive;
        if self.im.is_zero() && self.re.is_integer() {
            self.re.to_integer().to_i64()
        } else {
            None
        }
    }

    /// Exact square root inside the Gaussian rationals, if one exists.
    pub fn sqrt(&self) -> Option<Self> {
        if self.is_zero() {
            return Some(Self::zero());
        }
        // (x + yi)^2 = a + bi  =>  x^2 = (a + |z|)/2, y^2 = (|z| - a)/2.
        let modulus = rational_sqrt(&self.norm_sqr())?;
        let two = BigRational::from_integer(BigInt::from(2));
        let x2 = (&self.re + &modulus) / &two;
        let x = rational_sqrt(&x2)?;
        let y = if x.is_zero() {
            rational_sqrt(&((&modulus - &self.re) / &two))?
        } else {
            &self.im / (&two * &x)
        };
        let root = GaussianRational { re: x, im: y };
        if &(&root * &root) == self {
            Some(root)
        } else {
            let neg_im = GaussianRational {
                re: root.re.clone(),
                im: -root.im.clone(),
            };
            if &(&neg_im * &neg_im) == self {
                Some(neg_im)
            } else {
                None
            }
        }
    }
}

fn rational_sqrt(q: &BigRational) -> Option<BigRational> {
    if q.is_negative() {
        return None;
    }
    let n = q.numer().sqrt();
    let d = q.denom().sqrt();
    if &(&n * &n) == q.numer() && &(&d * &d) == q.denom() {
        Some(BigRational::new(n, d))
    } else {
        None
    }
}

impl Zero for GaussianRational {
    fn zero() -> Self {
        GaussianRational {
            re: BigRational::zero(),
            im: BigRational::zero(),
        }
    }
    fn is_zero(&self) -> bool {
        self.re.is_zero() && self.im.is_zero()
    }
}

impl One for GaussianRational {
    fn one() -> Self {
        GaussianRational {
            re: BigRational::one(),
            im: BigRational::zero(),
        }
    }
}

/// Lexicographic order on `(re, im)`; used only to make orderings canonical.
impl Ord for GaussianRational {
    fn cmp(&self, other: &Self) -> Ordering {
        self.re.cmp(&other.re).then_with(|| self.im.cmp(&other.im))
    }
}

impl PartialOrd for GaussianRational {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl From<i64> for GaussianRational {
    fn from(v: i64) -> Self {
        Self::from_int(v)
    }
}

impl From<BigRational> for GaussianRational {
    fn from(re: BigRational) -> Self {
        GaussianRational {
            re,
            im: BigRational::zero(),
        }
    }
}

impl<'a> Add<&'a GaussianRational> for &'a GaussianRational {
    type Output = GaussianRational;
    fn add(self, rhs: &GaussianRational) -> GaussianRational {
        GaussianRational {
            re: &self.re + &rhs.re,
            im: if self.im.is_zero() && rhs.im.is_zero() {
                BigRational::zero()
            } else {
                &self.im + &rhs.im
            },
        }
    }
}

impl<'a> Sub<&'a GaussianRational> for &'a GaussianRational {
    type Output = GaussianRational;
    fn sub(self, rhs: &GaussianRational) -> GaussianRational {
        GaussianRational {
            re: &self.re - &rhs.re,
            im: if self.im.is_zero() && rhs.im.is_zero() {
                BigRational::zero()
            } else {
                &self.im - &rhs.im
            },
        }
    }
}

impl<'a> Mul<&'a GaussianRational> for &'a GaussianRational {
    type Output = GaussianRational;
    fn mul(self, rhs: &GaussianRational) -> GaussianRational {
        if self.is_zero() || rhs.is_zero() {
            return GaussianRational::zero();
        }
        match (self.im.is_zero(), rhs.im.is_zero()) {
            (true, true) => GaussianRational {
                re: &self.re * &rhs.re,
                im: BigRational::zero(),
            },
            (true, false) => GaussianRational {
                re: &self.re * &rhs.re,
                im: &self.re * &rhs.im,
            },
            (false, true) => GaussianRational {
                re: &self.re * &rhs.re,
                im: &self.im * &rhs.re,
            },
            (false, false) => GaussianRational {
                re: &self.re * &rhs.re - &self.im * &rhs.im,
                im: &self.re * &rhs.im + &self.im * &rhs.re,
            },
        }
    }
}

impl<'a> Div<&'a GaussianRational> for &'a GaussianRational {
    type Output = GaussianRational;
    fn div(self, rhs: &GaussianRational) -> GaussianRational {
        if rhs.im.is_zero() {
            assert!(!rhs.re.is_zero(), "division by zero");
            return GaussianRational {
                re: &self.re / &rhs.re,
                im: if self.im.is_zero() {
                    BigRational::zero()
                } else {
                    &self.im / &rhs.re
                },
            };
        }
        let inv = rhs.inv().expect("division by zero");
        self * &inv
    }
}

macro_rules! forward_owned {
    ($tr:ident, $m:ident) => {
        impl $tr<GaussianRational> for GaussianRational {
            type Output = GaussianRational;
            fn $m(self, rhs: GaussianRational) -> GaussianRational {
                (&self).$m(&rhs)
            }
        }
        impl<'a> $tr<&'a GaussianRational> for GaussianRational {
            type Output = GaussianRational;
            fn $m(self, rhs: &GaussianRational) -> GaussianRational {
                (&self).$m(rhs)
            }
        }
    };
}

forward_owned!(Add, add);
forward_owned!(Sub, sub);
forward_owned!(Mul, mul);
forward_owned!(Div, div);

impl Neg for GaussianRational {
    type Output = GaussianRational;
    fn neg(self) -> GaussianRational {
        GaussianRational {
            re: -self.re,
            im: -self.im,
        }
    }
}

impl Neg for &GaussianRational {
    type Output = GaussianRational;
    fn neg(self) -> GaussianRational {
        GaussianRational {
            re: -self.re.clone(),
            im: -self.im.clone(),
        }
    }
}

impl AddAssign<&GaussianRational> for GaussianRational {
    fn add_assign(&mut self, rhs: &GaussianRational) {
        self.re += &rhs.re;
        if !rhs.im.is_zero() {
            self.im += &rhs.im;
        }
    }
}

impl SubAssign<&GaussianRational> for GaussianRational {
    fn sub_assign(&mut self, rhs: &GaussianRational) {
        self.re -= &rhs.re;
        if !rhs.im.is_zero() {
            self.im -= &rhs.im;
        }
    }
}

impl MulAssign<&GaussianRational> for GaussianRational {
    fn mul_assign(&mut self, rhs: &GaussianRational) {
        *self = &*self * rhs;
    }
}

fn fmt_rational(q: &BigRational, f: &mut fmt::Formatter<'_>) -> fmt::Result {
    if q.is_integer() {
        write!(f, "{}", q.numer())
    } else {
        write!(f, "{}/{}", q.numer(), q.denom())
    }
}

impl fmt::Display for GaussianRational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.im.is_zero() {
            return fmt_rational(&self.re, f);
        }
        if !self.re.is_zero() {
            fmt_rational(&self.re, f)?;
            if self.im.is_positive() {
                write!(f, "+")?;
            }
        }
        if self.im == BigRational::one() {
            write!(f, "i")
        } else if self.im == -BigRational::one() {
            write!(f, "-i")
        } else {
            fmt_rational(&self.im, f)?;
            write!(f, "i")
        }
    }
}

impl fmt::Debug for GaussianRational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

fn parse_unsigned_rational(s: &str) -> Option<BigRational> {
    let (num, den) = match s.split_once('/') {
        Some((n, d)) => (n, Some(d)),
        None => (s, None),
    };
    let digits = |t: &str| !t.is_empty() && t.bytes().all(|b| b.is_ascii_digit());
    if !digits(num) {
        return None;
    }
    let n: BigInt = num.parse().ok()?;
    match den {
        None => Some(BigRational::from_integer(n)),
        Some(d) => {
            if !digits(d) {
                return None;
            }
            let d: BigInt = d.parse().ok()?;
            if d.is_zero() {
                return None;
            }
            Some(BigRational::new(n, d))
        }
    }
}

fn parse_signed_rational(s: &str) -> Option<BigRational> {
    match s.strip_prefix('-') {
        Some(rest) => parse_unsigned_rational(rest).map(|q| -q),
        None => parse_unsigned_rational(s),
    }
}

/// Coefficient of `i`: an optional rational, empty meaning 1.
fn parse_imag_coeff(sign: bool, s: &str) -> Option<BigRational> {
    let q = if s.is_empty() {
        BigRational::one()
    } else {
        parse_unsigned_rational(s)?
    };
    Some(if sign { -q } else { q })
}

impl FromStr for GaussianRational {
    type Err = Error;

    /// Accepts `3`, `-1/2`, `1/2+3i`, `2-i`, `-i`, `5/3i`.
    fn from_str(raw: &str) -> Result<Self, Error> {
        let s: String = raw.chars().filter(|c| !c.is_whitespace()).collect();
        let bad = || Error::Parse(format!("invalid Gaussian rational {raw:?}"));
        if s.is_empty() {
            return Err(bad());
        }
        let Some(body) = s.strip_suffix('i') else {
            return parse_signed_rational(&s).map(GaussianRational::from).ok_or_else(bad);
        };
        // Split at the last sign that is not the leading character.
        let split = body
            .char_indices()
            .skip(1)
            .filter(|&(_, c)| c == '+' || c == '-')
            .map(|(k, _)| k)
            .last();
        match split {
            Some(k) => {
                let re = parse_signed_rational(&body[..k]).ok_or_else(bad)?;
                let im = parse_imag_coeff(&body[k..k + 1] == "-", &body[k + 1..]).ok_or_else(bad)?;
                Ok(GaussianRational { re, im })
            }
            None => {
                let (neg, coeff) = match body.strip_prefix('-') {
                    Some(rest) => (true, rest),
                    None => (false, body.strip_prefix('+').unwrap_or(body)),
                };
                let im = parse_imag_coeff(neg, coeff).ok_or_else(bad)?;
                Ok(GaussianRational {
                    re: BigRational::zero(),
                    im,
                })
            }
        }
    }
}

impl serde::Serialize for GaussianRational {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

impl<'de> serde::Deserialize<'de> for GaussianRational {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        struct V;
        impl serde::de::Visitor<'_> for V {
            type Value = GaussianRational;
            fn expecting(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
                write!(f, "a Gaussian rational as a string or an integer")
            }
            fn visit_str<E: serde::de::Error>(self, v: &str) -> Result<GaussianRational, E> {
                v.parse().map_err(E::custom)
            }
            fn visit_i64<E: serde::de::Error>(self, v: i64) -> Result<GaussianRational, E> {
                Ok(GaussianRational::from_int(v))
            }
            fn visit_u64<E: serde::de::Error>(self, v: u64) -> Result<GaussianRational, E> {
                Ok(GaussianRational::from(BigRational::from_integer(BigInt::from(v))))
            }
        }
        d.deserialize_any(V)
    }
}
