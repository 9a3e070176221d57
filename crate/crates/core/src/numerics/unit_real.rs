//! Demand-driven digit expansions of reals in `[0, 1)`.

use std::fmt;
use std::sync::{Arc, Mutex, MutexGuard};

use num_bigint::BigInt;

use super::{Interval, NumericError, Rational};
use crate::codec::OracleTable;
use crate::degrees::DegreeLabel;

/// How an oracle table's membership bits are laid out as digits.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Packing {
    /// Base 2, digit = bit.
    Binary,
    /// Base 4, digit = 2·bit + 1, so every digit is 1 or 3.
    Cantor4,
}

impl Packing {
    pub fn base(self) -> u32 {
        match self {
            Packing::Binary => 2,
            Packing::Cantor4 => 4,
        }
    }

    pub fn digit(self, bit: bool) -> u8 {
        match self {
            Packing::Binary => u8::from(bit),
            Packing::Cantor4 => 2 * u8::from(bit) + 1,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Packing::Binary => "binary",
            Packing::Cantor4 => "cantor4",
        }
    }

    pub fn from_name(s: &str) -> Option<Self> {
        match s {
            "binary" => Some(Packing::Binary),
            "cantor4" => Some(Packing::Cantor4),
            _ => None,
        }
    }
}

type DigitFn = dyn Fn(u64) -> u8 + Send + Sync;

enum DigitSource {
    /// Long division of `num/den`, `0 <= num < den`.
    Fraction { num: BigInt, den: BigInt },
    /// A finite expansion; digits past the end are 0.
    Finite(Vec<u8>),
    /// A truncated oracle; digits past the horizon are unknown.
    Oracle { table: Arc<OracleTable>, packing: Packing },
    /// Arbitrary deterministic generator, called once per position in order.
    Generator(Box<DigitFn>),
}

#[derive(Default)]
struct Memo {
    digits: Vec<u8>,
    /// Long-division remainder after `digits.len()` digits.
    remainder: Option<BigInt>,
}

struct Inner {
    base: u32,
    source: DigitSource,
    memo: Mutex<Memo>,
}

/// A real in `[0, 1)` given by its base-β digits (β = 2 or 4 for the
/// shipped constructors), produced on demand and cached.
///
/// Clones share the digit cache; [`UnitReal::same_object`] tests that
/// identity. The cache sits behind a mutex, so a shared stream is safe to
/// query from several threads but queries serialize.
#[derive(Clone)]
pub struct UnitReal {
    inner: Arc<Inner>,
    label: Option<DegreeLabel>,
}

impl UnitReal {
    fn from_source(base: u32, source: DigitSource) -> Self {
        UnitReal {
            inner: Arc::new(Inner { base, source, memo: Mutex::new(Memo::default()) }),
            label: None,
        }
    }

    /// The base-`base` expansion of a rational in `[0, 1)`.
    pub fn from_rational(value: &Rational, base: u32) -> Result<Self, NumericError> {
        check_base(base)?;
        if value.signum() < 0 || *value >= Rational::one() {
            return Err(NumericError::OutOfUnitInterval(value.to_string()));
        }
        Ok(Self::from_source(base, DigitSource::Fraction { num: value.numer(), den: value.denom() }))
    }

    /// A finite expansion with an explicit horizon of `digits.len()`.
    pub fn from_digits(digits: Vec<u8>, base: u32) -> Result<Self, NumericError> {
        check_base(base)?;
        if let Some(&d) = digits.iter().find(|&&d| u32::from(d) >= base) {
            return Err(NumericError::DigitOutOfRange { digit: d, base });
        }
        Ok(Self::from_source(base, DigitSource::Finite(digits)))
    }

    pub fn from_bits(bits: &[bool]) -> Self {
        Self::from_source(2, DigitSource::Finite(bits.iter().map(|&b| u8::from(b)).collect()))
    }

    /// The oracle table read as a real: binary digits are the bits
    /// themselves, Cantor-4 digits are `2·bit + 1`.
    pub fn from_oracle(table: Arc<OracleTable>, packing: Packing) -> Self {
        Self::from_source(packing.base(), DigitSource::Oracle { table, packing })
    }

    /// Digits from a generator `f(n)` for `n >= 1`. The generator must be a
    /// pure function of `n`; out-of-range digits surface as errors on query.
    pub fn from_fn(base: u32, f: impl Fn(u64) -> u8 + Send + Sync + 'static) -> Result<Self, NumericError> {
        check_base(base)?;
        Ok(Self::from_source(base, DigitSource::Generator(Box::new(f))))
    }

    /// The rational this stream expands, when it was built from one.
    pub fn as_fraction(&self) -> Option<Rational> {
        match &self.inner.source {
            DigitSource::Fraction { num, den } => Rational::from_bigs(num.clone(), den.clone()),
            _ => None,
        }
    }

    pub fn with_label(mut self, label: DegreeLabel) -> Self {
        self.label = Some(label);
        self
    }

    pub fn label(&self) -> Option<&DegreeLabel> {
        self.label.as_ref()
    }

    pub fn base(&self) -> u32 {
        self.inner.base
    }

    /// Recorded length of a finite expansion or oracle table.
    pub fn horizon(&self) -> Option<u64> {
        match &self.inner.source {
            DigitSource::Finite(d) => Some(d.len() as u64),
            DigitSource::Oracle { table, .. } => Some(table.horizon()),
            _ => None,
        }
    }

    /// True when digits past the horizon are errors rather than zeros.
    pub fn is_oracle(&self) -> bool {
        matches!(self.inner.source, DigitSource::Oracle { .. })
    }

    pub fn oracle_table(&self) -> Option<(&Arc<OracleTable>, Packing)> {
        match &self.inner.source {
            DigitSource::Oracle { table, packing } => Some((table, *packing)),
            _ => None,
        }
    }

    pub fn same_object(&self, other: &UnitReal) -> bool {
        Arc::ptr_eq(&self.inner, &other.inner)
    }

    fn memo(&self) -> MutexGuard<'_, Memo> {
        // A poisoned memo still holds only fully computed digits.
        self.inner.memo.lock().unwrap_or_else(|e| e.into_inner())
    }

    /// The `n`-th digit, `n >= 1`.
    pub fn digit_at(&self, n: u64) -> Result<u8, NumericError> {
        if n == 0 {
            return Err(NumericError::DigitIndexZero);
        }
        match &self.inner.source {
            DigitSource::Finite(d) => Ok(d.get((n - 1) as usize).copied().unwrap_or(0)),
            DigitSource::Oracle { table, packing } => match table.get(n) {
                Some(bit) => Ok(packing.digit(bit)),
                None => Err(NumericError::HorizonExceeded { index: n, horizon: table.horizon() }),
            },
            DigitSource::Fraction { num, den } => {
                let mut memo = self.memo();
                let base = BigInt::from(self.inner.base);
                while (memo.digits.len() as u64) < n {
                    let r = memo.remainder.take().unwrap_or_else(|| num.clone()) * &base;
                    let d = &r / den;
                    let rem = r - &d * den;
                    memo.digits.push(u8::try_from(&d).expect("digit below base"));
                    memo.remainder = Some(rem);
                }
                Ok(memo.digits[(n - 1) as usize])
            }
            DigitSource::Generator(f) => {
                let mut memo = self.memo();
                while (memo.digits.len() as u64) < n {
                    let pos = memo.digits.len() as u64 + 1;
                    let d = f(pos);
                    if u32::from(d) >= self.inner.base {
                        return Err(NumericError::DigitOutOfRange { digit: d, base: self.inner.base });
                    }
                    memo.digits.push(d);
                }
                Ok(memo.digits[(n - 1) as usize])
            }
        }
    }

    /// The first `n` digits.
    pub fn prefix(&self, n: u64) -> Result<Vec<u8>, NumericError> {
        (1..=n).map(|i| self.digit_at(i)).collect()
    }

    /// Closed interval containing the value, using at most `k` digits.
    ///
    /// Finite expansions and oracle tables become exact once `k` reaches
    /// their horizon: the oracle stands for its truncation.
    pub fn enclosure(&self, k: u64) -> Result<Interval, NumericError> {
        let (used, exact) = match self.horizon() {
            Some(h) if k >= h => (h, true),
            _ => (k, false),
        };
        let base = Rational::from_integer(i64::from(self.inner.base));
        let mut value = Rational::zero();
        // Horner from the last digit keeps intermediate denominators small.
        for i in (1..=used).rev() {
            let d = Rational::from_integer(i64::from(self.digit_at(i)?));
            value = &(&value + &d) * &base.recip().expect("base > 0");
        }
        if exact {
            return Ok(Interval::point(value));
        }
        let width = Rational::inverse_power(self.inner.base, used as u32);
        let hi = &value + &width;
        Ok(Interval::new(value, hi))
    }

    /// Snapshot of the first `n` digits as a finite, independently owned
    /// expansion that can be shared read-only.
    pub fn freeze(&self, n: u64) -> Result<UnitReal, NumericError> {
        let digits = self.prefix(n)?;
        let mut frozen = UnitReal::from_digits(digits, self.inner.base)?;
        frozen.label = self.label.clone();
        Ok(frozen)
    }
}

fn check_base(base: u32) -> Result<(), NumericError> {
    if (2..=36).contains(&base) {
        Ok(())
    } else {
        Err(NumericError::UnsupportedBase(base))
    }
}

impl fmt::Debug for UnitReal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let kind = match &self.inner.source {
            DigitSource::Fraction { num, den } => format!("fraction {num}/{den}"),
            DigitSource::Finite(d) => format!("finite[{}]", d.len()),
            DigitSource::Oracle { table, packing } => format!("oracle[{}, {}]", table.horizon(), packing.name()),
            DigitSource::Generator(_) => "generator".to_string(),
        };
        f.debug_struct("UnitReal")
            .field("base", &self.inner.base)
            .field("source", &kind)
            .field("label", &self.label)
            .finish()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn one_third_binary() {
        let third = UnitReal::from_rational(&Rational::new(1, 3).unwrap(), 2).unwrap();
        assert_eq!(third.prefix(6).unwrap(), vec![0, 1, 0, 1, 0, 1]);
        assert_eq!(third.digit_at(4).unwrap(), 1);
    }

    #[test]
    fn out_of_order_queries_agree() {
        let r = UnitReal::from_rational(&Rational::new(5, 7).unwrap(), 2).unwrap();
        let late = r.digit_at(20).unwrap();
        let fresh = UnitReal::from_rational(&Rational::new(5, 7).unwrap(), 2).unwrap();
        assert_eq!(fresh.prefix(20).unwrap()[19], late);
        assert_eq!(r.prefix(20).unwrap(), fresh.prefix(20).unwrap());
    }

    #[test]
    fn finite_pads_with_zero_oracle_errors() {
        let r = UnitReal::from_bits(&[true]);
        assert_eq!(r.digit_at(1).unwrap(), 1);
        assert_eq!(r.digit_at(9).unwrap(), 0);
        assert_eq!(r.horizon(), Some(1));

        let o = UnitReal::from_oracle(Arc::new(OracleTable::from_bits(vec![true])), Packing::Binary);
        assert_eq!(o.digit_at(1).unwrap(), 1);
        assert_eq!(o.digit_at(2), Err(NumericError::HorizonExceeded { index: 2, horizon: 1 }));
    }

    #[test]
    fn cantor_oracle_digits() {
        let o = UnitReal::from_oracle(Arc::new(OracleTable::from_bits(vec![true, false])), Packing::Cantor4);
        assert_eq!(o.prefix(2).unwrap(), vec![3, 1]);
        assert_eq!(o.enclosure(10).unwrap(), Interval::point(Rational::new(13, 16).unwrap()));
    }

    #[test]
    fn index_zero_rejected() {
        let r = UnitReal::from_bits(&[]);
        assert_eq!(r.digit_at(0), Err(NumericError::DigitIndexZero));
    }

    #[test]
    fn generator_digit_range_checked() {
        let r = UnitReal::from_fn(2, |n| if n == 3 { 2 } else { 1 }).unwrap();
        assert_eq!(r.digit_at(2).unwrap(), 1);
        assert_eq!(r.digit_at(3), Err(NumericError::DigitOutOfRange { digit: 2, base: 2 }));
    }

    #[test]
    fn enclosure_contains_value() {
        let v = Rational::new(2, 3).unwrap();
        let r = UnitReal::from_rational(&v, 2).unwrap();
        for k in 1..20 {
            let iv = r.enclosure(k).unwrap();
            assert!(iv.contains(&v), "k={k} {iv:?}");
            assert_eq!(iv.width(), Rational::inverse_power(2, k as u32));
        }
        let half = UnitReal::from_rational(&Rational::new(1, 2).unwrap(), 2).unwrap();
        assert!(half.enclosure(3).unwrap().contains(&Rational::new(1, 2).unwrap()));
    }
}
