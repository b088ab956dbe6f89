//! Exact fractions over 64-bit integers.
//!
//! Every value is kept in lowest terms with a positive denominator, so the
//! derived `Eq`/`Hash` coincide with numeric equality. Arithmetic goes
//! through 128-bit intermediates and fails with [`Error::Overflow`] when the
//! reduced result does not fit back into 64 bits. Comparison never overflows.

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::str::FromStr;

use crate::error::{Error, Result};

#[derive(Clone, Copy, PartialEq, Eq, Hash)]
pub struct Rational {
    num: i64,
    den: i64,
}

fn gcd_u128(mut a: u128, mut b: u128) -> u128 {
    while b != 0 {
        let t = a % b;
        a = b;
        b = t;
    }
    a
}

impl Rational {
    pub const ZERO: Rational = Rational { num: 0, den: 1 };
    pub const ONE: Rational = Rational { num: 1, den: 1 };

    /// Builds `num / den` in lowest terms. A zero denominator is rejected.
    pub fn new(num: i64, den: i64) -> Result<Self> {
        if den == 0 {
            return Err(Error::InvalidConfig("zero denominator".into()));
        }
        Self::reduce(num as i128, den as i128, "rational construction")
    }

    pub const fn from_integer(n: i64) -> Self {
        Rational { num: n, den: 1 }
    }

    fn reduce(num: i128, den: i128, ctx: &'static str) -> Result<Self> {
        debug_assert!(den != 0);
        let (num, den) = if den < 0 { (-num, -den) } else { (num, den) };
        let g = gcd_u128(num.unsigned_abs(), den.unsigned_abs()).max(1) as i128;
        let (num, den) = (num / g, den / g);
        match (i64::try_from(num), i64::try_from(den)) {
            (Ok(num), Ok(den)) => Ok(Rational { num, den }),
            _ => Err(Error::Overflow(ctx)),
        }
    }

    pub const fn numer(&self) -> i64 {
        self.num
    }

    pub const fn denom(&self) -> i64 {
        self.den
    }

    pub const fn is_zero(&self) -> bool {
        self.num == 0
    }

    pub const fn is_positive(&self) -> bool {
        self.num > 0
    }

    pub const fn is_integer(&self) -> bool {
        self.den == 1
    }

    pub fn checked_add(self, rhs: Rational) -> Result<Rational> {
        if self.den == rhs.den {
            return Self::reduce(self.num as i128 + rhs.num as i128, self.den as i128, "addition");
        }
        let num = self.num as i128 * rhs.den as i128 + rhs.num as i128 * self.den as i128;
        Self::reduce(num, self.den as i128 * rhs.den as i128, "addition")
    }

    pub fn checked_sub(self, rhs: Rational) -> Result<Rational> {
        self.checked_add(-rhs)
    }

    pub fn checked_mul(self, rhs: Rational) -> Result<Rational> {
        Self::reduce(
            self.num as i128 * rhs.num as i128,
            self.den as i128 * rhs.den as i128,
            "multiplication",
        )
    }

    pub fn checked_div(self, rhs: Rational) -> Result<Rational> {
        if rhs.num == 0 {
            return Err(Error::InvalidConfig("division by zero".into()));
        }
        Self::reduce(
            self.num as i128 * rhs.den as i128,
            self.den as i128 * rhs.num as i128,
            "division",
        )
    }

    pub fn to_f64(&self) -> f64 {
        self.num as f64 / self.den as f64
    }

    /// Largest integer not above the value.
    pub fn floor(&self) -> i64 {
        self.num.div_euclid(self.den)
    }

    /// Exact decimal expansion if the denominator divides a power of ten.
    pub fn exact_decimal(&self) -> Option<String> {
        let mut d = self.den;
        let (mut twos, mut fives) = (0u32, 0u32);
        while d % 2 == 0 {
            d /= 2;
            twos += 1;
        }
        while d % 5 == 0 {
            d /= 5;
            fives += 1;
        }
        if d != 1 {
            return None;
        }
        let digits = twos.max(fives);
        let scale = 10i128.pow(digits);
        let scaled = self.num as i128 * (scale / self.den as i128);
        Some(fixed_point(scaled, digits))
    }

    /// Decimal string rounded half away from zero to `digits` places.
    pub fn to_decimal(&self, digits: u32) -> String {
        let scale = 10i128.pow(digits);
        let n = self.num as i128 * scale;
        let d = self.den as i128;
        let q = n / d;
        let r = n % d;
        let q = if 2 * r.abs() >= d { q + n.signum() } else { q };
        fixed_point(q, digits)
    }
}

fn fixed_point(scaled: i128, digits: u32) -> String {
    let sign = if scaled < 0 { "-" } else { "" };
    let abs = scaled.unsigned_abs();
    if digits == 0 {
        return format!("{sign}{abs}");
    }
    let scale = 10u128.pow(digits);
    format!("{sign}{}.{:0width$}", abs / scale, abs % scale, width = digits as usize)
}

impl Default for Rational {
    fn default() -> Self {
        Rational::ZERO
    }
}

impl From<i64> for Rational {
    fn from(n: i64) -> Self {
        Rational::from_integer(n)
    }
}

impl Ord for Rational {
    fn cmp(&self, other: &Self) -> Ordering {
        if self.den == other.den {
            return self.num.cmp(&other.num);
        }
        (self.num as i128 * other.den as i128).cmp(&(other.num as i128 * self.den as i128))
    }
}

impl PartialOrd for Rational {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Neg for Rational {
    type Output = Rational;
    fn neg(self) -> Rational {
        // i64::MIN has no positive counterpart in lowest terms
        assert!(self.num != i64::MIN, "rational negation overflow");
        Rational {
            num: -self.num,
            den: self.den,
        }
    }
}

// Operator forms panic on overflow; library code uses the checked methods.
impl Add for Rational {
    type Output = Rational;
    fn add(self, rhs: Rational) -> Rational {
        self.checked_add(rhs).expect("rational overflow")
    }
}

impl Sub for Rational {
    type Output = Rational;
    fn sub(self, rhs: Rational) -> Rational {
        self.checked_sub(rhs).expect("rational overflow")
    }
}

impl Mul for Rational {
    type Output = Rational;
    fn mul(self, rhs: Rational) -> Rational {
        self.checked_mul(rhs).expect("rational overflow")
    }
}

impl fmt::Display for Rational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.den == 1 {
            write!(f, "{}", self.num)
        } else {
            write!(f, "{}/{}", self.num, self.den)
        }
    }
}

impl fmt::Debug for Rational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}/{}", self.num, self.den)
    }
}

/// Parse error for [`Rational::from_str`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ParseRationalError(pub String);

impl fmt::Display for ParseRationalError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "invalid rational {:?}", self.0)
    }
}

impl std::error::Error for ParseRationalError {}

impl FromStr for Rational {
    type Err = ParseRationalError;

    /// Accepts `7`, `-3/4` and plain decimals such as `1.5`.
    fn from_str(s: &str) -> std::result::Result<Self, Self::Err> {
        let err = || ParseRationalError(s.to_string());
        let s = s.trim();
        if let Some((n, d)) = s.split_once('/') {
            let n: i64 = n.trim().parse().map_err(|_| err())?;
            let d: i64 = d.trim().parse().map_err(|_| err())?;
            return Rational::new(n, d).map_err(|_| err());
        }
        if let Some((int, frac)) = s.split_once('.') {
            if frac.is_empty() || !frac.bytes().all(|b| b.is_ascii_digit()) || frac.len() > 18 {
                return Err(err());
            }
            let negative = int.starts_with('-');
            let int_part: i64 = match int {
                "" | "-" | "+" => 0,
                _ => int.parse().map_err(|_| err())?,
            };
            let scale = 10i128.pow(frac.len() as u32);
            let frac_part: i128 = frac.parse().map_err(|_| err())?;
            let mut num = int_part.unsigned_abs() as i128 * scale + frac_part;
            if negative {
                num = -num;
            }
            return Rational::reduce(num, scale, "decimal parse").map_err(|_| err());
        }
        s.parse::<i64>().map(Rational::from_integer).map_err(|_| err())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn r(n: i64, d: i64) -> Rational {
        Rational::new(n, d).unwrap()
    }

    #[test]
    fn normalizes_sign_and_terms() {
        let x = r(6, -8);
        assert_eq!((x.numer(), x.denom()), (-3, 4));
        assert_eq!(r(0, -5), Rational::ZERO);
    }

    #[test]
    fn zero_denominator_rejected() {
        assert!(Rational::new(1, 0).is_err());
    }

    #[test]
    fn overflow_is_reported() {
        let big = Rational::from_integer(i64::MAX);
        assert_eq!(big.checked_add(Rational::ONE), Err(Error::Overflow("addition")));
        let tiny = r(1, i64::MAX);
        assert!(tiny.checked_mul(r(1, 3)).is_err());
    }

    #[test]
    fn comparison_does_not_overflow() {
        let a = r(i64::MAX, i64::MAX - 1);
        let b = r(i64::MAX - 1, i64::MAX - 2);
        assert!(a < b);
    }

    #[test]
    fn parse_forms() {
        assert_eq!("3/2".parse::<Rational>().unwrap(), r(3, 2));
        assert_eq!("1.5".parse::<Rational>().unwrap(), r(3, 2));
        assert_eq!("-0.25".parse::<Rational>().unwrap(), r(-1, 4));
        assert_eq!(" 7 ".parse::<Rational>().unwrap(), r(7, 1));
        assert!("1/0".parse::<Rational>().is_err());
        assert!("abc".parse::<Rational>().is_err());
        assert!("1.".parse::<Rational>().is_err());
    }

    #[test]
    fn decimal_rendering() {
        assert_eq!(r(78, 25).exact_decimal().as_deref(), Some("3.12"));
        assert_eq!(r(99, 35).exact_decimal(), None);
        assert_eq!(r(99, 35).to_decimal(2), "2.83");
        assert_eq!(r(3, 1).exact_decimal().as_deref(), Some("3"));
        assert_eq!(r(-1, 8).exact_decimal().as_deref(), Some("-0.125"));
        assert_eq!(r(2039, 500).to_decimal(3), "4.078");
        assert_eq!(r(1, 2).to_decimal(0), "1");
        assert_eq!(r(-5, 3).to_decimal(1), "-1.7");
    }

    #[test]
    fn display() {
        assert_eq!(r(27, 10).to_string(), "27/10");
        assert_eq!(r(4, 2).to_string(), "2");
    }

    fn small() -> impl Strategy<Value = Rational> {
        (-1000i64..1000, 1i64..1000).prop_map(|(n, d)| r(n, d))
    }

    proptest! {
        #[test]
        fn add_sub_roundtrip(a in small(), b in small()) {
            prop_assert_eq!((a + b) - b, a);
        }

        #[test]
        fn mul_div_roundtrip(a in small(), b in small()) {
            prop_assume!(!a.is_zero());
            let q = b.checked_div(a).unwrap();
            prop_assert_eq!(a * q, b);
        }

        #[test]
        fn order_matches_floats(a in small(), b in small()) {
            if a.to_f64() < b.to_f64() {
                prop_assert!(a < b);
            }
            prop_assert_eq!(a == b, a.cmp(&b) == Ordering::Equal);
        }

        #[test]
        fn lowest_terms(n in -10_000i64..10_000, d in 1i64..10_000) {
            let x = r(n, d);
            prop_assert!(x.denom() > 0);
            prop_assert_eq!(gcd_u128(x.numer().unsigned_abs() as u128, x.denom() as u128).max(1), 1);
        }
    }
}
