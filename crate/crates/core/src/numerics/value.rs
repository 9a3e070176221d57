use std::fmt;

use super::{NumericError, Rational, UnitReal};

/// Closed rational interval `[lo, hi]`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Interval {
    pub lo: Rational,
    pub hi: Rational,
}

impl Interval {
    pub fn new(lo: Rational, hi: Rational) -> Self {
        debug_assert!(lo <= hi);
        Interval { lo, hi }
    }

    pub fn point(v: Rational) -> Self {
        Interval { hi: v.clone(), lo: v }
    }

    pub fn width(&self) -> Rational {
        &self.hi - &self.lo
    }

    pub fn contains(&self, v: &Rational) -> bool {
        self.lo <= *v && *v <= self.hi
    }

    pub fn is_point(&self) -> bool {
        self.lo == self.hi
    }

    fn scale(&self, c: &Rational) -> Interval {
        let (a, b) = (c * &self.lo, c * &self.hi);
        if c.signum() >= 0 {
            Interval { lo: a, hi: b }
        } else {
            Interval { lo: b, hi: a }
        }
    }

    fn add(&self, other: &Interval) -> Interval {
        Interval { lo: &self.lo + &other.lo, hi: &self.hi + &other.hi }
    }
}

/// What a lazy comparison does when it runs out of digits.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum OnExhaustion {
    ReportUnknown,
    Fail,
}

/// Cap on the number of digits read from any one lazy real while deciding a
/// sign or comparison.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct PrecisionBudget {
    max_digits: u32,
    on_exhaustion: OnExhaustion,
}

impl PrecisionBudget {
    pub fn new(max_digits: u32, on_exhaustion: OnExhaustion) -> Result<Self, NumericError> {
        if max_digits == 0 {
            return Err(NumericError::InvalidBudget);
        }
        Ok(PrecisionBudget { max_digits, on_exhaustion })
    }

    pub fn digits(max_digits: u32) -> Result<Self, NumericError> {
        Self::new(max_digits, OnExhaustion::ReportUnknown)
    }

    pub fn max_digits(&self) -> u32 {
        self.max_digits
    }

    pub fn on_exhaustion(&self) -> OnExhaustion {
        self.on_exhaustion
    }

    /// Digit counts tried in order: 8, 16, 32, … capped at `max_digits`.
    pub(crate) fn schedule(&self) -> impl Iterator<Item = u64> {
        let max = u64::from(self.max_digits);
        let mut next = Some(max.min(8));
        std::iter::from_fn(move || {
            let cur = next?;
            next = if cur >= max { None } else { Some((cur * 2).min(max)) };
            Some(cur)
        })
    }
}

impl Default for PrecisionBudget {
    fn default() -> Self {
        PrecisionBudget { max_digits: 256, on_exhaustion: OnExhaustion::ReportUnknown }
    }
}

/// An exact value: a rational constant plus a rational combination of lazy
/// unit reals. With no lazy terms it is simply a rational.
///
/// Affine neuron dynamics keep every state inside this form as long as a
/// lazy weight never multiplies a lazy state.
#[derive(Clone, Debug, Default)]
pub struct Value {
    constant: Rational,
    terms: Vec<(Rational, UnitReal)>,
}

impl Value {
    pub fn exact(q: Rational) -> Self {
        Value { constant: q, terms: Vec::new() }
    }

    pub fn zero() -> Self {
        Self::exact(Rational::zero())
    }

    pub fn one() -> Self {
        Self::exact(Rational::one())
    }

    pub fn real(r: UnitReal) -> Self {
        Value { constant: Rational::zero(), terms: vec![(Rational::one(), r)] }
    }

    pub fn is_exact(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn as_exact(&self) -> Option<&Rational> {
        self.is_exact().then_some(&self.constant)
    }

    pub fn constant(&self) -> &Rational {
        &self.constant
    }

    pub fn terms(&self) -> &[(Rational, UnitReal)] {
        &self.terms
    }

    pub fn add_rational(&mut self, q: &Rational) {
        self.constant += q;
    }

    /// `self += c · r`, merging with an existing term on the same stream.
    pub fn add_real(&mut self, c: &Rational, r: &UnitReal) {
        if c.is_zero() {
            return;
        }
        if let Some(pos) = self.terms.iter().position(|(_, t)| t.same_object(r)) {
            let merged = &self.terms[pos].0 + c;
            if merged.is_zero() {
                self.terms.remove(pos);
            } else {
                self.terms[pos].0 = merged;
            }
        } else {
            self.terms.push((c.clone(), r.clone()));
        }
    }

    /// `self += c · other`.
    pub fn add_scaled(&mut self, c: &Rational, other: &Value) {
        if c.is_zero() {
            return;
        }
        self.constant += &(c * &other.constant);
        for (k, r) in &other.terms {
            self.add_real(&(c * k), r);
        }
    }

    pub fn scaled(&self, c: &Rational) -> Value {
        let mut out = Value::zero();
        out.add_scaled(c, self);
        out
    }

    pub fn sub(&self, other: &Value) -> Value {
        let mut out = self.clone();
        out.add_scaled(&-Rational::one(), other);
        out
    }

    /// Enclosure reading at most `k` digits from each lazy term.
    pub fn enclosure_at(&self, k: u64) -> Result<Interval, NumericError> {
        let mut acc = Interval::point(self.constant.clone());
        for (c, r) in &self.terms {
            acc = acc.add(&r.enclosure(k)?.scale(c));
        }
        Ok(acc)
    }

    /// Enclosure of width at most `2^-bits`, reading as many digits as that
    /// requires.
    pub fn enclose(&self, bits: u32) -> Result<Interval, NumericError> {
        let target = Rational::inverse_power(2, bits);
        let mut k = u64::from(bits).max(1);
        loop {
            let iv = self.enclosure_at(k)?;
            if iv.width() <= target {
                return Ok(iv);
            }
            k = self.digits_for(&target, k);
        }
    }

    /// Next digit count to try: enough for each term's contribution to fall
    /// below `target / terms`, and strictly more than `k`.
    fn digits_for(&self, target: &Rational, k: u64) -> u64 {
        let n = self.terms.len().max(1) as u64;
        let mut need = k + 1;
        for (c, r) in &self.terms {
            let mag = c.abs();
            let bits_c = mag.numer().bits() as i64 - mag.denom().bits() as i64 + 1;
            let bits_t = target.denom().bits() as i64;
            let bits_n = 64 - n.leading_zeros() as i64;
            let bits = (bits_c + bits_t + bits_n).max(1) as u64;
            let per_digit = u64::from(31 - r.base().leading_zeros()).max(1);
            need = need.max(bits.div_ceil(per_digit));
        }
        need
    }
}

impl From<Rational> for Value {
    fn from(q: Rational) -> Self {
        Value::exact(q)
    }
}

impl fmt::Display for Value {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.constant)?;
        for (c, r) in &self.terms {
            let tag = r.label().map(|l| l.to_string()).unwrap_or_else(|| "?".into());
            write!(f, " + {c}·real[{tag}]")?;
        }
        Ok(())
    }
}
