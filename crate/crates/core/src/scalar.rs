//! Exact numbers of the form `a + b·√2` with rational `a` and `b`.
//!
//! Every distance, map value and comparison-function output in this crate is a
//! [`Scalar`]. Finite instances only ever produce the rational part; interval
//! instances use the `√2` component to carry irrational sample points (the
//! rationality classes of piecewise maps) without resorting to floats. The
//! field `Q(√2)` is closed under the affine maps and linear comparison
//! functions we support, and its order is decidable exactly.

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

/// Builds `num/den` as a big rational. Panics when `den == 0`.
pub fn rat(num: i64, den: i64) -> BigRational {
    BigRational::new(BigInt::from(num), BigInt::from(den))
}

/// Parses `"p/q"` or `"p"` into a rational.
pub fn parse_rational(text: &str) -> Option<BigRational> {
    let text = text.trim();
    if text.is_empty() {
        return None;
    }
    match text.split_once('/') {
        Some((p, q)) => {
            let p = BigInt::from_str(p.trim()).ok()?;
            let q = BigInt::from_str(q.trim()).ok()?;
            if q.is_zero() {
                return None;
            }
            Some(BigRational::new(p, q))
        }
        None => BigInt::from_str(text).ok().map(BigRational::from_integer),
    }
}

/// Renders a rational as `p` or `p/q`.
pub fn format_rational(value: &BigRational) -> String {
    if value.is_integer() {
        value.numer().to_string()
    } else {
        format!("{}/{}", value.numer(), value.denom())
    }
}

/// An element `a + b·√2` of the quadratic field `Q(√2)`.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Scalar {
    rational: BigRational,
    surd: BigRational,
}

impl Scalar {
    pub fn new(rational: BigRational, surd: BigRational) -> Self {
        Scalar { rational, surd }
    }

    pub fn from_rational(value: BigRational) -> Self {
        Scalar::new(value, BigRational::zero())
    }

    pub fn from_integer(value: i64) -> Self {
        Scalar::from_rational(BigRational::from_integer(BigInt::from(value)))
    }

    pub fn ratio(num: i64, den: i64) -> Self {
        Scalar::from_rational(rat(num, den))
    }

    pub fn zero() -> Self {
        Scalar::from_rational(BigRational::zero())
    }

    pub fn one() -> Self {
        Scalar::from_rational(BigRational::one())
    }

    /// `k·√2`.
    pub fn sqrt2_times(k: BigRational) -> Self {
        Scalar::new(BigRational::zero(), k)
    }

    pub fn rational_part(&self) -> &BigRational {
        &self.rational
    }

    pub fn surd_part(&self) -> &BigRational {
        &self.surd
    }

    pub fn is_rational(&self) -> bool {
        self.surd.is_zero()
    }

    /// The value as a rational, if it has no `√2` component.
    pub fn as_rational(&self) -> Option<&BigRational> {
        self.is_rational().then_some(&self.rational)
    }

    pub fn is_zero(&self) -> bool {
        self.rational.is_zero() && self.surd.is_zero()
    }

    pub fn signum(&self) -> Ordering {
        let a = self.rational.cmp(&BigRational::zero());
        let b = self.surd.cmp(&BigRational::zero());
        match (a, b) {
            (x, Ordering::Equal) => x,
            (Ordering::Equal, y) => y,
            (x, y) if x == y => x,
            // Opposite signs: compare a² with 2b².
            (x, _) => {
                let a2 = &self.rational * &self.rational;
                let b2 = &self.surd * &self.surd * rat(2, 1);
                match a2.cmp(&b2) {
                    Ordering::Greater => x,
                    Ordering::Less => x.reverse(),
                    Ordering::Equal => Ordering::Equal,
                }
            }
        }
    }

    pub fn is_positive(&self) -> bool {
        self.signum() == Ordering::Greater
    }

    pub fn is_negative(&self) -> bool {
        self.signum() == Ordering::Less
    }

    pub fn abs(&self) -> Scalar {
        if self.is_negative() {
            -self.clone()
        } else {
            self.clone()
        }
    }

    pub fn scale(&self, k: &BigRational) -> Scalar {
        Scalar::new(&self.rational * k, &self.surd * k)
    }

    /// Division by a nonzero rational. Panics on zero.
    pub fn div_rational(&self, k: &BigRational) -> Scalar {
        assert!(!k.is_zero(), "division by zero");
        Scalar::new(&self.rational / k, &self.surd / k)
    }

    pub fn half(&self) -> Scalar {
        self.div_rational(&rat(2, 1))
    }

    pub fn max(self, other: Scalar) -> Scalar {
        if other > self {
            other
        } else {
            self
        }
    }

    /// A float approximation, for display only.
    pub fn approx(&self) -> f64 {
        use num_traits::ToPrimitive;
        self.rational.to_f64().unwrap_or(f64::NAN)
            + self.surd.to_f64().unwrap_or(f64::NAN) * std::f64::consts::SQRT_2
    }
}

impl Ord for Scalar {
    fn cmp(&self, other: &Self) -> Ordering {
        if self.is_rational() && other.is_rational() {
            return self.rational.cmp(&other.rational);
        }
        (self.clone() - other.clone()).signum()
    }
}

impl PartialOrd for Scalar {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl From<BigRational> for Scalar {
    fn from(value: BigRational) -> Self {
        Scalar::from_rational(value)
    }
}

impl From<i64> for Scalar {
    fn from(value: i64) -> Self {
        Scalar::from_integer(value)
    }
}

impl Add for Scalar {
    type Output = Scalar;
    fn add(self, rhs: Scalar) -> Scalar {
        Scalar::new(self.rational + rhs.rational, self.surd + rhs.surd)
    }
}

impl<'a> Add<&'a Scalar> for &'a Scalar {
    type Output = Scalar;
    fn add(self, rhs: &Scalar) -> Scalar {
        Scalar::new(&self.rational + &rhs.rational, &self.surd + &rhs.surd)
    }
}

impl Sub for Scalar {
    type Output = Scalar;
    fn sub(self, rhs: Scalar) -> Scalar {
        Scalar::new(self.rational - rhs.rational, self.surd - rhs.surd)
    }
}

impl<'a> Sub<&'a Scalar> for &'a Scalar {
    type Output = Scalar;
    fn sub(self, rhs: &Scalar) -> Scalar {
        Scalar::new(&self.rational - &rhs.rational, &self.surd - &rhs.surd)
    }
}

impl Neg for Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        Scalar::new(-self.rational, -self.surd)
    }
}

impl<'a> Mul<&'a Scalar> for &'a Scalar {
    type Output = Scalar;
    fn mul(self, rhs: &Scalar) -> Scalar {
        // (a + b√2)(c + d√2) = (ac + 2bd) + (ad + bc)√2
        let two = rat(2, 1);
        Scalar::new(
            &self.rational * &rhs.rational + &self.surd * &rhs.surd * two,
            &self.rational * &rhs.surd + &self.surd * &rhs.rational,
        )
    }
}

impl Mul for Scalar {
    type Output = Scalar;
    fn mul(self, rhs: Scalar) -> Scalar {
        &self * &rhs
    }
}

impl fmt::Display for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.surd.is_zero() {
            return f.write_str(&format_rational(&self.rational));
        }
        let surd = if self.surd.is_one() {
            "sqrt2".to_string()
        } else if (-self.surd.clone()).is_one() {
            "-sqrt2".to_string()
        } else {
            format!("{}*sqrt2", format_rational(&self.surd))
        };
        if self.rational.is_zero() {
            f.write_str(&surd)
        } else if self.surd.is_positive() {
            write!(f, "{}+{}", format_rational(&self.rational), surd)
        } else {
            write!(f, "{}{}", format_rational(&self.rational), surd)
        }
    }
}

impl fmt::Debug for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("`{0}` is not an exact number (expected p/q, k*sqrt2 or p/q+k*sqrt2)")]
pub struct ParseScalarError(pub String);

fn parse_surd_term(term: &str) -> Option<BigRational> {
    let term = term.trim();
    let coeff = term.strip_suffix("sqrt2")?.trim();
    let coeff = coeff.strip_suffix('*').unwrap_or(coeff).trim();
    match coeff {
        "" | "+" => Some(BigRational::one()),
        "-" => Some(-BigRational::one()),
        c => parse_rational(c),
    }
}

impl FromStr for Scalar {
    type Err = ParseScalarError;

    fn from_str(text: &str) -> Result<Self, Self::Err> {
        let err = || ParseScalarError(text.to_string());
        let t = text.trim();
        if !t.contains("sqrt2") {
            return parse_rational(t).map(Scalar::from_rational).ok_or_else(err);
        }
        // Split "a+b*sqrt2" / "a-b*sqrt2" at the sign that starts the surd term.
        let split = t
            .char_indices()
            .skip(1)
            .filter(|(_, c)| *c == '+' || *c == '-')
            .map(|(i, _)| i)
            .find(|&i| t[i..].contains("sqrt2") && !t[..i].ends_with('/'));
        match split {
            Some(i) if !t[..i].trim().is_empty() && !t[..i].trim().ends_with('*') => {
                let a = parse_rational(&t[..i]).ok_or_else(err)?;
                let b = parse_surd_term(&t[i..]).ok_or_else(err)?;
                Ok(Scalar::new(a, b))
            }
            _ => parse_surd_term(t).map(Scalar::sqrt2_times).ok_or_else(err),
        }
    }
}

impl Serialize for Scalar {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.serialize_str(&self.to_string())
    }
}

impl<'de> Deserialize<'de> for Scalar {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let text = String::deserialize(deserializer)?;
        text.parse().map_err(serde::de::Error::custom)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn s(text: &str) -> Scalar {
        text.parse().unwrap()
    }

    #[test]
    fn parses_and_prints() {
        assert_eq!(s("3/6").to_string(), "1/2");
        assert_eq!(s("sqrt2").to_string(), "sqrt2");
        assert_eq!(s("1/2*sqrt2").to_string(), "1/2*sqrt2");
        assert_eq!(s("1+sqrt2").to_string(), "1+sqrt2");
        assert_eq!(s("2-1/2*sqrt2").to_string(), "2-1/2*sqrt2");
        assert_eq!(s("-sqrt2").to_string(), "-sqrt2");
        assert!("0.5".parse::<Scalar>().is_err());
        assert!("1/0".parse::<Scalar>().is_err());
    }

    #[test]
    fn order_against_known_values() {
        // √2 ≈ 1.41421
        assert!(s("sqrt2") > s("1414/1000"));
        assert!(s("sqrt2") < s("1415/1000"));
        assert!(s("3-2*sqrt2") > Scalar::zero()); // 0.1716
        assert!(s("-3+2*sqrt2") < Scalar::zero());
        assert!(s("1/2*sqrt2") < Scalar::one());
    }

    #[test]
    fn multiplication_closes_the_field() {
        assert_eq!(&s("sqrt2") * &s("sqrt2"), Scalar::from_integer(2));
        assert_eq!(&s("1+sqrt2") * &s("-1+sqrt2"), Scalar::one());
    }

    proptest! {
        #[test]
        fn order_agrees_with_floats(a in -50i64..50, b in -50i64..50, c in -50i64..50, d in -50i64..50) {
            let x = Scalar::new(rat(a, 7), rat(b, 5));
            let y = Scalar::new(rat(c, 7), rat(d, 5));
            let (fx, fy) = (x.approx(), y.approx());
            if (fx - fy).abs() > 1e-9 {
                prop_assert_eq!(x < y, fx < fy);
            }
        }

        #[test]
        fn display_round_trips(a in -50i64..50, b in -50i64..50) {
            let x = Scalar::new(rat(a, 3), rat(b, 4));
            prop_assert_eq!(x.to_string().parse::<Scalar>().unwrap(), x);
        }
    }
}
