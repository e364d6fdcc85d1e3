//! Gaussian rationals `a + bi` with arbitrary-precision rational parts.

use std::fmt;
use std::ops::{Add, AddAssign, Div, Mul, MulAssign, Neg, Sub, SubAssign};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::error::Error;

/// An exact complex number with rational real and imaginary parts.
///
/// `BigRational` keeps both parts reduced with a positive denominator, so
/// derived equality is exact structural equality.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Default)]
pub struct ExactScalar {
    pub re: BigRational,
    pub im: BigRational,
}

impl ExactScalar {
    pub fn new(re: BigRational, im: BigRational) -> Self {
        Self { re, im }
    }

    pub fn real(re: BigRational) -> Self {
        Self {
            re,
            im: BigRational::zero(),
        }
    }

    pub fn from_integer(value: i64) -> Self {
        Self::real(BigRational::from_integer(BigInt::from(value)))
    }

    pub fn from_ratio(num: i64, den: i64) -> Self {
        Self::real(BigRational::new(BigInt::from(num), BigInt::from(den)))
    }

    pub fn i() -> Self {
        Self::new(BigRational::zero(), BigRational::one())
    }

    pub fn conj(&self) -> Self {
        Self::new(self.re.clone(), -self.im.clone())
    }

    /// `|z|^2`, always a nonnegative rational.
    pub fn norm_sqr(&self) -> BigRational {
        &self.re * &self.re + &self.im * &self.im
    }

    pub fn is_real(&self) -> bool {
        self.im.is_zero()
    }

    pub fn inv(&self) -> Option<Self> {
        let d = self.norm_sqr();
        if d.is_zero() {
            return None;
        }
        Some(Self::new(&self.re / &d, -&self.im / &d))
    }

    pub fn scale(&self, factor: &BigRational) -> Self {
        Self::new(&self.re * factor, &self.im * factor)
    }

    pub fn to_f64_pair(&self) -> (f64, f64) {
        (ratio_to_f64(&self.re), ratio_to_f64(&self.im))
    }
}

/// Lossy conversion used only for reporting.
pub fn ratio_to_f64(value: &BigRational) -> f64 {
    use num_traits::ToPrimitive;
    value.to_f64().unwrap_or_else(|| {
        // Huge numerator and denominator: scale both down first.
        let n = value.numer().bits() as i64;
        let d = value.denom().bits() as i64;
        let shift = (n.max(d) - 1000).max(0) as usize;
        let num = (value.numer() >> shift).to_f64().unwrap_or(f64::NAN);
        let den = (value.denom() >> shift).to_f64().unwrap_or(f64::NAN);
        num / den
    })
}

/// Formats a rational as `"num/den"`, always with an explicit denominator.
pub fn format_ratio(value: &BigRational) -> String {
    format!("{}/{}", value.numer(), value.denom())
}

/// Parses `"num/den"` or a bare integer. The denominator must be positive
/// and the fraction already in lowest terms.
pub fn parse_ratio(text: &str) -> Result<BigRational, Error> {
    let bad = || Error::Parse(format!("invalid rational {text:?}"));
    let text = text.trim();
    let (num, den) = match text.split_once('/') {
        Some((n, d)) => (n.trim(), d.trim()),
        None => (text, "1"),
    };
    let num: BigInt = num.parse().map_err(|_| bad())?;
    let den: BigInt = den.parse().map_err(|_| bad())?;
    if den <= BigInt::zero() {
        return Err(Error::Parse(format!(
            "rational {text:?} must have a positive denominator"
        )));
    }
    let value = BigRational::new(num.clone(), den.clone());
    if value.numer() != &num || value.denom() != &den {
        return Err(Error::Parse(format!(
            "rational {text:?} is not in lowest terms"
        )));
    }
    Ok(value)
}

/// Parses an exponent written as an integer, a fraction `a/b` or a decimal
/// such as `1.05` (read exactly as `21/20`).
pub fn parse_exponent(text: &str) -> Result<BigRational, Error> {
    let t = text.trim();
    let bad = || Error::Parse(format!("invalid exponent {text:?}"));
    if let Some((n, d)) = t.split_once('/') {
        let n: BigInt = n.trim().parse().map_err(|_| bad())?;
        let d: BigInt = d.trim().parse().map_err(|_| bad())?;
        if d.is_zero() {
            return Err(bad());
        }
        return Ok(BigRational::new(n, d));
    }
    let (negative, body) = match t.strip_prefix('-') {
        Some(rest) => (true, rest),
        None => (false, t.strip_prefix('+').unwrap_or(t)),
    };
    let (int_part, frac_part) = body.split_once('.').unwrap_or((body, ""));
    if int_part.is_empty() && frac_part.is_empty() {
        return Err(bad());
    }
    if !int_part.chars().chain(frac_part.chars()).all(|c| c.is_ascii_digit()) {
        return Err(bad());
    }
    let digits = format!("{int_part}{frac_part}");
    let num: BigInt = if digits.is_empty() { BigInt::zero() } else { digits.parse().map_err(|_| bad())? };
    let den = num_traits::pow(BigInt::from(10), frac_part.len());
    let value = BigRational::new(num, den);
    Ok(if negative { -value } else { value })
}

/// A quantity that is exact when the exponents involved are integers and a
/// double otherwise.
#[derive(Clone, Debug, PartialEq)]
pub enum SpectralValue {
    Exact(BigRational),
    Approx(f64),
}

impl SpectralValue {
    pub fn to_f64(&self) -> f64 {
        match self {
            SpectralValue::Exact(v) => ratio_to_f64(v),
            SpectralValue::Approx(v) => *v,
        }
    }

    pub fn exact(&self) -> Option<&BigRational> {
        match self {
            SpectralValue::Exact(v) => Some(v),
            SpectralValue::Approx(_) => None,
        }
    }

    pub fn is_exact(&self) -> bool {
        matches!(self, SpectralValue::Exact(_))
    }
}

/// `base^exponent`: exact for integer exponents, a double otherwise.
/// `base` must be positive when the exponent is negative or fractional.
pub fn rational_power(base: &BigRational, exponent: &BigRational) -> SpectralValue {
    if exponent.is_integer() {
        use num_traits::ToPrimitive;
        let e = exponent.to_integer().to_i32().expect("exponent fits in i32");
        SpectralValue::Exact(num_traits::Pow::pow(base, e))
    } else {
        SpectralValue::Approx(ratio_to_f64(base).powf(ratio_to_f64(exponent)))
    }
}

impl fmt::Display for ExactScalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.im.is_zero() {
            write!(f, "{}", self.re)
        } else if self.re.is_zero() {
            write!(f, "{}i", self.im)
        } else {
            write!(f, "({} + {}i)", self.re, self.im)
        }
    }
}

impl Zero for ExactScalar {
    fn zero() -> Self {
        Self::default()
    }

    fn is_zero(&self) -> bool {
        self.re.is_zero() && self.im.is_zero()
    }
}

impl One for ExactScalar {
    fn one() -> Self {
        Self::real(BigRational::one())
    }
}

impl From<BigRational> for ExactScalar {
    fn from(value: BigRational) -> Self {
        Self::real(value)
    }
}

impl From<i64> for ExactScalar {
    fn from(value: i64) -> Self {
        Self::from_integer(value)
    }
}

impl Add<&ExactScalar> for &ExactScalar {
    type Output = ExactScalar;
    fn add(self, rhs: &ExactScalar) -> ExactScalar {
        ExactScalar::new(&self.re + &rhs.re, &self.im + &rhs.im)
    }
}

impl Add for ExactScalar {
    type Output = ExactScalar;
    fn add(self, rhs: ExactScalar) -> ExactScalar {
        &self + &rhs
    }
}

impl AddAssign<&ExactScalar> for ExactScalar {
    fn add_assign(&mut self, rhs: &ExactScalar) {
        self.re += &rhs.re;
        self.im += &rhs.im;
    }
}

impl Sub<&ExactScalar> for &ExactScalar {
    type Output = ExactScalar;
    fn sub(self, rhs: &ExactScalar) -> ExactScalar {
        ExactScalar::new(&self.re - &rhs.re, &self.im - &rhs.im)
    }
}

impl Sub for ExactScalar {
    type Output = ExactScalar;
    fn sub(self, rhs: ExactScalar) -> ExactScalar {
        &self - &rhs
    }
}

impl SubAssign<&ExactScalar> for ExactScalar {
    fn sub_assign(&mut self, rhs: &ExactScalar) {
        self.re -= &rhs.re;
        self.im -= &rhs.im;
    }
}

impl Mul<&ExactScalar> for &ExactScalar {
    type Output = ExactScalar;
    fn mul(self, rhs: &ExactScalar) -> ExactScalar {
        if self.im.is_zero() && rhs.im.is_zero() {
            return ExactScalar::real(&self.re * &rhs.re);
        }
        ExactScalar::new(
            &self.re * &rhs.re - &self.im * &rhs.im,
            &self.re * &rhs.im + &self.im * &rhs.re,
        )
    }
}

impl Mul for ExactScalar {
    type Output = ExactScalar;
    fn mul(self, rhs: ExactScalar) -> ExactScalar {
        &self * &rhs
    }
}

impl MulAssign<&ExactScalar> for ExactScalar {
    fn mul_assign(&mut self, rhs: &ExactScalar) {
        *self = &*self * rhs;
    }
}

impl Div<&ExactScalar> for &ExactScalar {
    type Output = ExactScalar;
    /// Panics on division by zero, like `BigRational`.
    #[allow(clippy::suspicious_arithmetic_impl)]
    fn div(self, rhs: &ExactScalar) -> ExactScalar {
        let inv = rhs.inv().expect("division by zero ExactScalar");
        self * &inv
    }
}

impl Neg for ExactScalar {
    type Output = ExactScalar;
    fn neg(self) -> ExactScalar {
        ExactScalar::new(-self.re, -self.im)
    }
}

impl Neg for &ExactScalar {
    type Output = ExactScalar;
    fn neg(self) -> ExactScalar {
        ExactScalar::new(-&self.re, -&self.im)
    }
}
