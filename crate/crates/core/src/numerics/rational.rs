//! Exact rationals in lowest terms.
//!
//! Values whose numerator and denominator fit in `i64` are kept inline and
//! combined in `i128`, which cannot overflow for a single add or multiply.
//! Anything larger spills to [`BigRational`]. Both representations are
//! normalized after every operation, so equality is structural.

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, AddAssign, Mul, Neg, Sub};
use std::str::FromStr;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

#[derive(Clone, Debug)]
enum Repr {
    Small { num: i64, den: i64 },
    Big(BigRational),
}

/// An exact rational number, always reduced with a positive denominator.
#[derive(Clone, Debug)]
pub struct Rational(Repr);

fn gcd_i128(a: i128, b: i128) -> i128 {
    a.gcd(&b)
}

impl Rational {
    pub fn zero() -> Self {
        Rational(Repr::Small { num: 0, den: 1 })
    }

    pub fn one() -> Self {
        Rational(Repr::Small { num: 1, den: 1 })
    }

    pub fn from_integer(n: i64) -> Self {
        Rational(Repr::Small { num: n, den: 1 })
    }

    /// Builds `num/den`. Returns `None` when `den == 0`.
    pub fn new(num: i64, den: i64) -> Option<Self> {
        if den == 0 {
            return None;
        }
        Some(Self::from_i128(num as i128, den as i128))
    }

    pub fn from_bigs(num: BigInt, den: BigInt) -> Option<Self> {
        if den.is_zero() {
            return None;
        }
        Some(Self::from_big(BigRational::new(num, den)))
    }

    pub fn from_bigint(n: BigInt) -> Self {
        Self::from_big(BigRational::from_integer(n))
    }

    fn from_i128(num: i128, den: i128) -> Self {
        debug_assert!(den != 0);
        let g = gcd_i128(num, den);
        let (mut n, mut d) = if g > 1 { (num / g, den / g) } else { (num, den) };
        if d < 0 {
            n = -n;
            d = -d;
        }
        match (i64::try_from(n), i64::try_from(d)) {
            (Ok(num), Ok(den)) => Rational(Repr::Small { num, den }),
            _ => Rational(Repr::Big(BigRational::new(n.into(), d.into()))),
        }
    }

    fn from_big(r: BigRational) -> Self {
        // BigRational::new already reduces; demote when it fits.
        match (r.numer().to_i64(), r.denom().to_i64()) {
            (Some(num), Some(den)) => Rational(Repr::Small { num, den }),
            _ => Rational(Repr::Big(r)),
        }
    }

    pub fn to_big(&self) -> BigRational {
        match &self.0 {
            Repr::Small { num, den } => BigRational::new_raw((*num).into(), (*den).into()),
            Repr::Big(r) => r.clone(),
        }
    }

    pub fn numer(&self) -> BigInt {
        match &self.0 {
            Repr::Small { num, .. } => (*num).into(),
            Repr::Big(r) => r.numer().clone(),
        }
    }

    pub fn denom(&self) -> BigInt {
        match &self.0 {
            Repr::Small { den, .. } => (*den).into(),
            Repr::Big(r) => r.denom().clone(),
        }
    }

    pub fn is_zero(&self) -> bool {
        match &self.0 {
            Repr::Small { num, .. } => *num == 0,
            Repr::Big(r) => r.is_zero(),
        }
    }

    pub fn is_integer(&self) -> bool {
        match &self.0 {
            Repr::Small { den, .. } => *den == 1,
            Repr::Big(r) => r.is_integer(),
        }
    }

    /// -1, 0 or 1.
    pub fn signum(&self) -> i32 {
        match &self.0 {
            Repr::Small { num, .. } => num.signum() as i32,
            Repr::Big(r) => {
                if r.is_zero() {
                    0
                } else if r.is_positive() {
                    1
                } else {
                    -1
                }
            }
        }
    }

    pub fn abs(&self) -> Self {
        if self.signum() < 0 {
            -self
        } else {
            self.clone()
        }
    }

    /// Multiplicative inverse; `None` for zero.
    pub fn recip(&self) -> Option<Self> {
        if self.is_zero() {
            return None;
        }
        Some(match &self.0 {
            Repr::Small { num, den } => Self::from_i128(*den as i128, *num as i128),
            Repr::Big(r) => Self::from_big(r.recip()),
        })
    }

    /// `base^-exp` for small positive bases.
    pub fn inverse_power(base: u32, exp: u32) -> Self {
        let den = num_traits::pow(BigInt::from(base), exp as usize);
        Self::from_big(BigRational::new(BigInt::one(), den))
    }

    /// Clamps into `[0, 1]`.
    pub fn clamp_unit(&self) -> Self {
        if self.signum() <= 0 {
            Self::zero()
        } else if *self >= Self::one() {
            Self::one()
        } else {
            self.clone()
        }
    }

    pub fn is_in_unit(&self) -> bool {
        self.signum() >= 0 && *self <= Self::one()
    }

    pub fn floor(&self) -> BigInt {
        self.to_big().floor().to_integer()
    }
}

impl Default for Rational {
    fn default() -> Self {
        Self::zero()
    }
}

impl PartialEq for Rational {
    fn eq(&self, other: &Self) -> bool {
        match (&self.0, &other.0) {
            (Repr::Small { num: a, den: b }, Repr::Small { num: c, den: d }) => a == c && b == d,
            // Normalization guarantees a value fitting in i64 is never Big.
            (Repr::Big(x), Repr::Big(y)) => x == y,
            _ => false,
        }
    }
}

impl Eq for Rational {}

impl std::hash::Hash for Rational {
    fn hash<H: std::hash::Hasher>(&self, state: &mut H) {
        self.numer().hash(state);
        self.denom().hash(state);
    }
}

impl PartialOrd for Rational {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Rational {
    fn cmp(&self, other: &Self) -> Ordering {
        match (&self.0, &other.0) {
            (Repr::Small { num: a, den: b }, Repr::Small { num: c, den: d }) => {
                (*a as i128 * *d as i128).cmp(&(*c as i128 * *b as i128))
            }
            _ => self.to_big().cmp(&other.to_big()),
        }
    }
}

impl<'a> Add<&'a Rational> for &'a Rational {
    type Output = Rational;
    fn add(self, rhs: &'a Rational) -> Rational {
        match (&self.0, &rhs.0) {
            (Repr::Small { num: a, den: b }, Repr::Small { num: c, den: d }) => {
                let (a, b, c, d) = (*a as i128, *b as i128, *c as i128, *d as i128);
                if b == d {
                    Rational::from_i128(a + c, b)
                } else {
                    Rational::from_i128(a * d + c * b, b * d)
                }
            }
            _ => Rational::from_big(self.to_big() + rhs.to_big()),
        }
    }
}

impl<'a> Sub<&'a Rational> for &'a Rational {
    type Output = Rational;
    fn sub(self, rhs: &'a Rational) -> Rational {
        self + &(-rhs)
    }
}

impl<'a> Mul<&'a Rational> for &'a Rational {
    type Output = Rational;
    fn mul(self, rhs: &'a Rational) -> Rational {
        match (&self.0, &rhs.0) {
            (Repr::Small { num: a, den: b }, Repr::Small { num: c, den: d }) => {
                Rational::from_i128(*a as i128 * *c as i128, *b as i128 * *d as i128)
            }
            _ => Rational::from_big(self.to_big() * rhs.to_big()),
        }
    }
}

impl Neg for &Rational {
    type Output = Rational;
    fn neg(self) -> Rational {
        match &self.0 {
            Repr::Small { num, den } if *num != i64::MIN => Rational(Repr::Small { num: -num, den: *den }),
            _ => Rational::from_big(-self.to_big()),
        }
    }
}

impl Neg for Rational {
    type Output = Rational;
    fn neg(self) -> Rational {
        -&self
    }
}

impl Add for Rational {
    type Output = Rational;
    fn add(self, rhs: Rational) -> Rational {
        &self + &rhs
    }
}

impl Sub for Rational {
    type Output = Rational;
    fn sub(self, rhs: Rational) -> Rational {
        &self - &rhs
    }
}

impl Mul for Rational {
    type Output = Rational;
    fn mul(self, rhs: Rational) -> Rational {
        &self * &rhs
    }
}

impl AddAssign<&Rational> for Rational {
    fn add_assign(&mut self, rhs: &Rational) {
        *self = &*self + rhs;
    }
}

impl From<i64> for Rational {
    fn from(n: i64) -> Self {
        Rational::from_integer(n)
    }
}

impl From<BigRational> for Rational {
    fn from(r: BigRational) -> Self {
        Rational::from_big(r)
    }
}

impl fmt::Display for Rational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.0 {
            Repr::Small { num, den: 1 } => write!(f, "{num}"),
            Repr::Small { num, den } => write!(f, "{num}/{den}"),
            Repr::Big(r) if r.is_integer() => write!(f, "{}", r.numer()),
            Repr::Big(r) => write!(f, "{}/{}", r.numer(), r.denom()),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("invalid rational literal `{0}`")]
pub struct ParseRationalError(pub String);

impl FromStr for Rational {
    type Err = ParseRationalError;

    /// Accepts `p` or `p/q`.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let err = || ParseRationalError(s.to_string());
        let s = s.trim();
        let (p, q) = match s.split_once('/') {
            Some((p, q)) => (p.trim(), q.trim()),
            None => (s, "1"),
        };
        let p: BigInt = p.parse().map_err(|_| err())?;
        let q: BigInt = q.parse().map_err(|_| err())?;
        Rational::from_bigs(p, q).ok_or_else(err)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(n: i64, d: i64) -> Rational {
        Rational::new(n, d).unwrap()
    }

    #[test]
    fn lowest_terms_positive_denominator() {
        let r = q(6, -8);
        assert_eq!(r.numer(), BigInt::from(-3));
        assert_eq!(r.denom(), BigInt::from(4));
        assert_eq!(r, q(-3, 4));
    }

    #[test]
    fn zero_denominator_rejected() {
        assert!(Rational::new(1, 0).is_none());
        assert!("3/0".parse::<Rational>().is_err());
    }

    #[test]
    fn spills_to_big_and_back() {
        let big = q(i64::MAX, 1);
        let sq = &big * &big;
        assert!(matches!(sq.0, Repr::Big(_)));
        let back = &sq * &q(1, i64::MAX).mul(q(1, i64::MAX));
        assert_eq!(back, Rational::one());
        assert!(matches!(back.0, Repr::Small { .. }));
    }

    #[test]
    fn min_value_negates() {
        let m = Rational::from_integer(i64::MIN);
        let n = -&m;
        assert_eq!(n.numer(), -BigInt::from(i64::MIN));
        assert_eq!(-&n, m);
    }

    #[test]
    fn display_and_parse() {
        assert_eq!(q(13, 16).to_string(), "13/16");
        assert_eq!(q(4, 2).to_string(), "2");
        assert_eq!("-6/8".parse::<Rational>().unwrap(), q(-3, 4));
        assert_eq!("7".parse::<Rational>().unwrap(), q(7, 1));
    }

    #[test]
    fn inverse_power_of_four() {
        assert_eq!(Rational::inverse_power(4, 2), q(1, 16));
        let deep = Rational::inverse_power(4, 40);
        assert_eq!(deep.denom(), num_traits::pow(BigInt::from(4), 40));
    }

    #[test]
    fn ordering_mixed_representations() {
        let tiny = Rational::inverse_power(2, 100);
        assert!(tiny > Rational::zero());
        assert!(tiny < q(1, i64::MAX));
    }
}
