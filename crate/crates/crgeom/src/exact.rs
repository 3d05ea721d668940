//! Exact scalars: arbitrary-precision rationals and Gaussian rationals.

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, AddAssign, Mul, MulAssign, Neg, Sub, SubAssign};
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::de::Error as _;
use serde::{Deserialize, Deserializer, Serialize, Serializer};
use thiserror::Error;

/// Reduced arbitrary-precision rational with positive denominator.
pub type Rational = BigRational;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ArithError {
    #[error("division by zero")]
    DivisionByZero,
    #[error("malformed number `{0}`")]
    Malformed(String),
}

/// Rational from a pair of machine integers.
pub fn rat(num: i64, den: i64) -> Rational {
    Rational::new(BigInt::from(num), BigInt::from(den))
}

/// Rational from a machine integer.
pub fn rint(v: i64) -> Rational {
    Rational::from_integer(BigInt::from(v))
}

/// Parses `p` or `p/q` with optional sign.
pub fn parse_rational(s: &str) -> Result<Rational, ArithError> {
    let s = s.trim();
    let bad = || ArithError::Malformed(s.to_string());
    let (p, q) = match s.split_once('/') {
        Some((p, q)) => (p.trim(), q.trim()),
        None => (s, "1"),
    };
    let p: BigInt = p.parse().map_err(|_| bad())?;
    let q: BigInt = q.parse().map_err(|_| bad())?;
    if q.is_zero() {
        return Err(ArithError::DivisionByZero);
    }
    Ok(Rational::new(p, q))
}

/// Canonical text of a rational: `p` for integers, otherwise `p/q`.
pub fn render_rational(r: &Rational) -> String {
    if r.is_integer() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

pub fn factorial(n: u32) -> BigInt {
    (1..=n).fold(BigInt::one(), |acc, k| acc * BigInt::from(k))
}

/// Exact complex number `re + im·i` with rational parts.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct GaussianRational {
    pub re: Rational,
    pub im: Rational,
}

impl GaussianRational {
    pub fn new(re: Rational, im: Rational) -> Self {
        Self { re, im }
    }

    pub fn real(re: Rational) -> Self {
        Self {
            re,
            im: Rational::zero(),
        }
    }

    pub fn from_int(v: i64) -> Self {
        Self::real(rint(v))
    }

    pub fn from_frac(num: i64, den: i64) -> Self {
        Self::real(rat(num, den))
    }

    pub fn zero() -> Self {
        Self::default()
    }

    pub fn one() -> Self {
        Self::from_int(1)
    }

    pub fn i() -> Self {
        Self {
            re: Rational::zero(),
            im: Rational::one(),
        }
    }

    pub fn is_zero(&self) -> bool {
        self.re.is_zero() && self.im.is_zero()
    }

    pub fn is_one(&self) -> bool {
        self.re.is_one() && self.im.is_zero()
    }

    pub fn is_real(&self) -> bool {
        self.im.is_zero()
    }

    pub fn conj(&self) -> Self {
        Self {
            re: self.re.clone(),
            im: -self.im.clone(),
        }
    }

    /// `re² + im²`.
    pub fn norm_sqr(&self) -> Rational {
        &self.re * &self.re + &self.im * &self.im
    }

    pub fn inv(&self) -> Result<Self, ArithError> {
        let d = self.norm_sqr();
        if d.is_zero() {
            return Err(ArithError::DivisionByZero);
        }
        Ok(Self {
            re: &self.re / &d,
            im: -(&self.im / &d),
        })
    }

    pub fn checked_div(&self, other: &Self) -> Result<Self, ArithError> {
        Ok(self * &other.inv()?)
    }

    pub fn scale(&self, r: &Rational) -> Self {
        Self {
            re: &self.re * r,
            im: &self.im * r,
        }
    }

    pub fn pow(&self, e: u32) -> Self {
        let mut acc = Self::one();
        for _ in 0..e {
            acc = &acc * self;
        }
        acc
    }

    /// `i^e`.
    pub fn i_pow(e: u32) -> Self {
        match e % 4 {
            0 => Self::from_int(1),
            1 => Self::i(),
            2 => Self::from_int(-1),
            _ => -Self::i(),
        }
    }

    /// Canonical text: `p/q` when real, otherwise `(p/q)+(r/s)i`.
    pub fn render(&self) -> String {
        if self.im.is_zero() {
            render_rational(&self.re)
        } else {
            format!(
                "({})+({})i",
                render_rational(&self.re),
                render_rational(&self.im)
            )
        }
    }

    pub fn parse(s: &str) -> Result<Self, ArithError> {
        let t = s.trim();
        if let Some(body) = t.strip_suffix(")i") {
            // (re)+(im)i
            let bad = || ArithError::Malformed(t.to_string());
            let body = body.strip_prefix('(').ok_or_else(bad)?;
            let (re, im) = body.split_once(")+(").ok_or_else(bad)?;
            Ok(Self::new(parse_rational(re)?, parse_rational(im)?))
        } else {
            Ok(Self::real(parse_rational(t)?))
        }
    }
}

impl fmt::Display for GaussianRational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.render())
    }
}

impl fmt::Debug for GaussianRational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.render())
    }
}

impl FromStr for GaussianRational {
    type Err = ArithError;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Self::parse(s)
    }
}

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

impl From<Rational> for GaussianRational {
    fn from(r: Rational) -> Self {
        Self::real(r)
    }
}

impl From<i64> for GaussianRational {
    fn from(v: i64) -> Self {
        Self::from_int(v)
    }
}

impl<'a> Add<&'a GaussianRational> for &'a GaussianRational {
    type Output = GaussianRational;
    fn add(self, o: &GaussianRational) -> GaussianRational {
        GaussianRational {
            re: &self.re + &o.re,
            im: &self.im + &o.im,
        }
    }
}

impl<'a> Sub<&'a GaussianRational> for &'a GaussianRational {
    type Output = GaussianRational;
    fn sub(self, o: &GaussianRational) -> GaussianRational {
        GaussianRational {
            re: &self.re - &o.re,
            im: &self.im - &o.im,
        }
    }
}

impl<'a> Mul<&'a GaussianRational> for &'a GaussianRational {
    type Output = GaussianRational;
    fn mul(self, o: &GaussianRational) -> GaussianRational {
        GaussianRational {
            re: &self.re * &o.re - &self.im * &o.im,
            im: &self.re * &o.im + &self.im * &o.re,
        }
    }
}

macro_rules! owned_binop {
    ($tr:ident, $m:ident) => {
        impl $tr for GaussianRational {
            type Output = GaussianRational;
            fn $m(self, o: GaussianRational) -> GaussianRational {
                (&self).$m(&o)
            }
        }
        impl<'a> $tr<&'a GaussianRational> for GaussianRational {
            type Output = GaussianRational;
            fn $m(self, o: &GaussianRational) -> GaussianRational {
                (&self).$m(o)
            }
        }
    };
}
owned_binop!(Add, add);
owned_binop!(Sub, sub);
owned_binop!(Mul, mul);

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
    fn add_assign(&mut self, o: &GaussianRational) {
        self.re += &o.re;
        self.im += &o.im;
    }
}

impl SubAssign<&GaussianRational> for GaussianRational {
    fn sub_assign(&mut self, o: &GaussianRational) {
        self.re -= &o.re;
        self.im -= &o.im;
    }
}

impl MulAssign<&GaussianRational> for GaussianRational {
    fn mul_assign(&mut self, o: &GaussianRational) {
        *self = &*self * o;
    }
}

fn rational_pair(r: &Rational) -> [String; 2] {
    [r.numer().to_string(), r.denom().to_string()]
}

fn rational_from_pair(p: &[String; 2]) -> Result<Rational, ArithError> {
    let num: BigInt = p[0]
        .parse()
        .map_err(|_| ArithError::Malformed(p[0].clone()))?;
    let den: BigInt = p[1]
        .parse()
        .map_err(|_| ArithError::Malformed(p[1].clone()))?;
    if den.is_zero() {
        return Err(ArithError::DivisionByZero);
    }
    if den.is_negative() {
        return Ok(Rational::new(-num, -den));
    }
    Ok(Rational::new(num, den))
}

#[derive(Serialize, Deserialize)]
struct GrWire {
    re: [String; 2],
    im: [String; 2],
}

impl Serialize for GaussianRational {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        GrWire {
            re: rational_pair(&self.re),
            im: rational_pair(&self.im),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for GaussianRational {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let w = GrWire::deserialize(d)?;
        Ok(Self {
            re: rational_from_pair(&w.re).map_err(D::Error::custom)?,
            im: rational_from_pair(&w.im).map_err(D::Error::custom)?,
        })
    }
}

/// Exact square root of a rational when it is a perfect square.
pub fn rational_sqrt(r: &Rational) -> Option<Rational> {
    if r.is_negative() {
        return None;
    }
    let n = r.numer().sqrt();
    let d = r.denom().sqrt();
    (&n * &n == *r.numer() && &d * &d == *r.denom()).then(|| Rational::new(n, d))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn g(a: (i64, i64), b: (i64, i64)) -> GaussianRational {
        GaussianRational::new(rat(a.0, a.1), rat(b.0, b.1))
    }

    #[test]
    fn product_with_conjugate_is_norm() {
        let z = g((1, 2), (1, 1));
        assert_eq!(&z * &z.conj(), GaussianRational::from_frac(5, 4));
    }

    #[test]
    fn additive_identity() {
        assert_eq!(
            GaussianRational::one() + GaussianRational::zero(),
            GaussianRational::one()
        );
    }

    #[test]
    fn division_by_rational() {
        let q = g((2, 3), (1, 3))
            .checked_div(&GaussianRational::from_frac(1, 3))
            .unwrap();
        assert_eq!(q, g((2, 1), (1, 1)));
    }

    #[test]
    fn division_by_zero_is_an_error() {
        let r = GaussianRational::one().checked_div(&GaussianRational::zero());
        assert_eq!(r, Err(ArithError::DivisionByZero));
        assert!(parse_rational("1/0").is_err());
    }

    #[test]
    fn text_forms() {
        assert_eq!(g((-3, 4), (0, 1)).render(), "-3/4");
        assert_eq!(g((0, 1), (1, 1)).render(), "(0)+(1)i");
        assert_eq!(g((1, 2), (-5, 3)).render(), "(1/2)+(-5/3)i");
        for s in ["7", "-3/4", "(0)+(1)i", "(1/2)+(-5/3)i"] {
            assert_eq!(GaussianRational::parse(s).unwrap().render(), s);
        }
    }

    #[test]
    fn json_form() {
        let z = g((1, 2), (-5, 3));
        let v = serde_json::to_value(&z).unwrap();
        assert_eq!(v, serde_json::json!({"re": ["1", "2"], "im": ["-5", "3"]}));
        let back: GaussianRational = serde_json::from_value(v).unwrap();
        assert_eq!(back, z);
    }

    #[test]
    fn ordering_is_lexicographic() {
        assert!(g((0, 1), (5, 1)) < g((1, 1), (-5, 1)));
        assert!(g((1, 1), (-5, 1)) < g((1, 1), (0, 1)));
    }

    #[test]
    fn sqrt_of_squares() {
        assert_eq!(rational_sqrt(&rat(9, 4)), Some(rat(3, 2)));
        assert_eq!(rational_sqrt(&rat(2, 1)), None);
    }
}
