//! Exact Gaussian rationals, the coefficient field of every jet in the crate.

use std::fmt;
use std::ops::{Add, AddAssign, Div, Mul, MulAssign, Neg, Sub, SubAssign};
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::{Serialize, Serializer};

/// An element `re + im·i` of Q(i).
///
/// Both parts are kept as reduced fractions, so structural equality is
/// field equality.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct Coeff {
    re: BigRational,
    im: BigRational,
}

impl Coeff {
    pub fn new(re: BigRational, im: BigRational) -> Self {
        Coeff { re, im }
    }

    pub fn from_int(n: i64) -> Self {
        Coeff {
            re: BigRational::from_integer(BigInt::from(n)),
            im: BigRational::zero(),
        }
    }

    pub fn from_frac(num: i64, den: i64) -> Self {
        assert!(den != 0, "zero denominator");
        Coeff {
            re: BigRational::new(BigInt::from(num), BigInt::from(den)),
            im: BigRational::zero(),
        }
    }

    pub fn from_rational(re: BigRational) -> Self {
        Coeff {
            re,
            im: BigRational::zero(),
        }
    }

    pub fn gaussian(re: i64, im: i64) -> Self {
        Coeff {
            re: BigRational::from_integer(BigInt::from(re)),
            im: BigRational::from_integer(BigInt::from(im)),
        }
    }

    /// The imaginary unit.
    pub fn i() -> Self {
        Coeff::gaussian(0, 1)
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
        Coeff {
            re: self.re.clone(),
            im: -self.im.clone(),
        }
    }

    /// `re² + im²`, a non-negative rational.
    pub fn norm_sqr(&self) -> BigRational {
        &self.re * &self.re + &self.im * &self.im
    }

    /// Multiplicative inverse, `None` for zero.
    pub fn inv(&self) -> Option<Self> {
        if self.is_zero() {
            return None;
        }
        if self.im.is_zero() {
            return Some(Coeff::from_rational(self.re.recip()));
        }
        let n = self.norm_sqr();
        Some(Coeff {
            re: &self.re / &n,
            im: -(&self.im / &n),
        })
    }

    /// Integer power; negative exponents invert. Panics on `0^(-k)`.
    pub fn pow(&self, exp: i64) -> Self {
        if exp < 0 {
            return self
                .inv()
                .expect("negative power of zero coefficient")
                .pow(-exp);
        }
        let mut base = self.clone();
        let mut e = exp as u64;
        let mut acc = Coeff::one();
        while e > 0 {
            if e & 1 == 1 {
                acc = &acc * &base;
            }
            e >>= 1;
            if e > 0 {
                base = &base * &base;
            }
        }
        acc
    }

    /// Least common multiple of the denominators of both parts.
    pub fn common_denominator(&self) -> BigInt {
        use num_integer::Integer;
        self.re.denom().lcm(self.im.denom())
    }

    /// Approximate value, used only to seed exact searches.
    pub fn to_f64_pair(&self) -> (f64, f64) {
        (rational_to_f64(&self.re), rational_to_f64(&self.im))
    }
}

fn rational_to_f64(r: &BigRational) -> f64 {
    use num_traits::ToPrimitive;
    r.to_f64().unwrap_or(f64::NAN)
}

impl Zero for Coeff {
    fn zero() -> Self {
        Coeff {
            re: BigRational::zero(),
            im: BigRational::zero(),
        }
    }

    fn is_zero(&self) -> bool {
        self.re.is_zero() && self.im.is_zero()
    }
}

impl One for Coeff {
    fn one() -> Self {
        Coeff::from_int(1)
    }
}

impl From<i64> for Coeff {
    fn from(n: i64) -> Self {
        Coeff::from_int(n)
    }
}

impl<'a> Add<&'a Coeff> for &'a Coeff {
    type Output = Coeff;
    fn add(self, rhs: &'a Coeff) -> Coeff {
        Coeff {
            re: &self.re + &rhs.re,
            im: if self.im.is_zero() && rhs.im.is_zero() {
                BigRational::zero()
            } else {
                &self.im + &rhs.im
            },
        }
    }
}

impl<'a> Sub<&'a Coeff> for &'a Coeff {
    type Output = Coeff;
    fn sub(self, rhs: &'a Coeff) -> Coeff {
        Coeff {
            re: &self.re - &rhs.re,
            im: if self.im.is_zero() && rhs.im.is_zero() {
                BigRational::zero()
            } else {
                &self.im - &rhs.im
            },
        }
    }
}

impl<'a> Mul<&'a Coeff> for &'a Coeff {
    type Output = Coeff;
    fn mul(self, rhs: &'a Coeff) -> Coeff {
        if self.is_zero() || rhs.is_zero() {
            return Coeff::zero();
        }
        match (self.im.is_zero(), rhs.im.is_zero()) {
            (true, true) => Coeff::from_rational(&self.re * &rhs.re),
            (true, false) => Coeff {
                re: &self.re * &rhs.re,
                im: &self.re * &rhs.im,
            },
            (false, true) => Coeff {
                re: &self.re * &rhs.re,
                im: &self.im * &rhs.re,
            },
            (false, false) => Coeff {
                re: &self.re * &rhs.re - &self.im * &rhs.im,
                im: &self.re * &rhs.im + &self.im * &rhs.re,
            },
        }
    }
}

impl<'a> Div<&'a Coeff> for &'a Coeff {
    type Output = Coeff;
    fn div(self, rhs: &'a Coeff) -> Coeff {
        let inv = rhs.inv().expect("division by zero coefficient");
        self * &inv
    }
}

macro_rules! forward_owned {
    ($tr:ident, $m:ident) => {
        impl $tr<Coeff> for Coeff {
            type Output = Coeff;
            fn $m(self, rhs: Coeff) -> Coeff {
                (&self).$m(&rhs)
            }
        }
        impl<'a> $tr<&'a Coeff> for Coeff {
            type Output = Coeff;
            fn $m(self, rhs: &'a Coeff) -> Coeff {
                (&self).$m(rhs)
            }
        }
    };
}
forward_owned!(Add, add);
forward_owned!(Sub, sub);
forward_owned!(Mul, mul);
forward_owned!(Div, div);

impl Neg for Coeff {
    type Output = Coeff;
    fn neg(self) -> Coeff {
        Coeff {
            re: -self.re,
            im: -self.im,
        }
    }
}

impl Neg for &Coeff {
    type Output = Coeff;
    fn neg(self) -> Coeff {
        -(self.clone())
    }
}

impl AddAssign<&Coeff> for Coeff {
    fn add_assign(&mut self, rhs: &Coeff) {
        self.re += &rhs.re;
        if !rhs.im.is_zero() {
            self.im += &rhs.im;
        }
    }
}

impl SubAssign<&Coeff> for Coeff {
    fn sub_assign(&mut self, rhs: &Coeff) {
        self.re -= &rhs.re;
        if !rhs.im.is_zero() {
            self.im -= &rhs.im;
        }
    }
}

impl MulAssign<&Coeff> for Coeff {
    fn mul_assign(&mut self, rhs: &Coeff) {
        *self = &*self * rhs;
    }
}

fn fmt_rational(r: &BigRational) -> String {
    if r.is_integer() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

impl fmt::Display for Coeff {
    /// `3`, `-1/2`, `2i`, `1/3-5/2i`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.im.is_zero() {
            return write!(f, "{}", fmt_rational(&self.re));
        }
        let im_abs = self.im.abs();
        let im_txt = if im_abs.is_one() {
            String::new()
        } else {
            fmt_rational(&im_abs)
        };
        if self.re.is_zero() {
            let sign = if self.im.is_negative() { "-" } else { "" };
            return write!(f, "{sign}{im_txt}i");
        }
        let sign = if self.im.is_negative() { '-' } else { '+' };
        write!(f, "{}{}{}i", fmt_rational(&self.re), sign, im_txt)
    }
}

impl fmt::Debug for Coeff {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl Serialize for Coeff {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

/// Error for [`Coeff::from_str`].
#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("malformed coefficient literal `{0}`")]
pub struct ParseCoeffError(pub String);

fn parse_rational(s: &str) -> Option<BigRational> {
    let s = s.trim();
    if s.is_empty() {
        return None;
    }
    match s.split_once('/') {
        Some((n, d)) => {
            let n: BigInt = n.trim().parse().ok()?;
            let d: BigInt = d.trim().parse().ok()?;
            if d.is_zero() {
                return None;
            }
            Some(BigRational::new(n, d))
        }
        None => Some(BigRational::from_integer(s.parse().ok()?)),
    }
}

impl FromStr for Coeff {
    type Err = ParseCoeffError;

    /// Accepts exactly the strings produced by `Display`.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let err = || ParseCoeffError(s.to_string());
        let t = s.trim();
        let Some(body) = t.strip_suffix('i') else {
            return parse_rational(t).map(Coeff::from_rational).ok_or_else(err);
        };
        // split at the last sign that is not the leading one
        let split = body
            .char_indices()
            .skip(1)
            .filter(|(_, c)| *c == '+' || *c == '-')
            .map(|(k, _)| k)
            .last();
        let (re, im_txt) = match split {
            Some(k) => (parse_rational(&body[..k]).ok_or_else(err)?, &body[k..]),
            None => (BigRational::zero(), body),
        };
        let im = match im_txt {
            "" | "+" => BigRational::one(),
            "-" => -BigRational::one(),
            other => parse_rational(other.strip_prefix('+').unwrap_or(other)).ok_or_else(err)?,
        };
        Ok(Coeff { re, im })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn display_round_trips() {
        for c in [
            Coeff::from_int(3),
            Coeff::from_frac(-1, 2),
            Coeff::gaussian(0, 2),
            Coeff::gaussian(0, -1),
            Coeff::new(
                BigRational::new(1.into(), 3.into()),
                BigRational::new((-5).into(), 2.into()),
            ),
            Coeff::gaussian(-4, 1),
        ] {
            let txt = c.to_string();
            assert_eq!(txt.parse::<Coeff>().unwrap(), c, "{txt}");
        }
    }

    #[test]
    fn field_operations() {
        let a = Coeff::gaussian(1, 1);
        let b = Coeff::gaussian(1, -1);
        assert_eq!(&a * &b, Coeff::from_int(2));
        assert_eq!(&a / &a, Coeff::one());
        assert_eq!(a.pow(2), Coeff::gaussian(0, 2));
        assert_eq!(a.pow(-1), Coeff::new(
            BigRational::new(1.into(), 2.into()),
            BigRational::new((-1).into(), 2.into()),
        ));
        assert!(Coeff::zero().inv().is_none());
    }

    #[test]
    fn reduced_representation() {
        assert_eq!(Coeff::from_frac(2, 4), Coeff::from_frac(-1, -2));
        assert_eq!(Coeff::from_frac(6, 3).to_string(), "2");
    }
}
