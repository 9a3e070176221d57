//! Activations and exact affine forms.

use std::cmp::Ordering;

use super::{ExactScalar, Interval, NumericError, OnExhaustion, PrecisionBudget, Rational, Value};

/// Three-valued comparison result for lazily known reals.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Comparison {
    Less,
    Equal,
    Greater,
    Unknown,
}

impl From<Ordering> for Comparison {
    fn from(o: Ordering) -> Self {
        match o {
            Ordering::Less => Comparison::Less,
            Ordering::Equal => Comparison::Equal,
            Ordering::Greater => Comparison::Greater,
        }
    }
}

/// Result of [`affine_combine`].
#[derive(Clone, Debug)]
pub enum Affine {
    Exact(Rational),
    /// Lazy operands: the symbolic value and an enclosure of width at most
    /// `2^-max_digits`.
    Enclosed { value: Value, interval: Interval },
}

fn require_budget(budget: Option<&PrecisionBudget>) -> Result<&PrecisionBudget, NumericError> {
    budget.ok_or(NumericError::BudgetRequired)
}

/// Refines `x` until `decide` returns an answer or the budget runs out.
fn refine<T>(
    x: &Value,
    budget: &PrecisionBudget,
    mut decide: impl FnMut(&Interval) -> Option<T>,
) -> Result<Option<T>, NumericError> {
    for k in budget.schedule() {
        let iv = x.enclosure_at(k)?;
        if let Some(ans) = decide(&iv) {
            return Ok(Some(ans));
        }
        if iv.is_point() {
            break;
        }
    }
    Ok(None)
}

/// Saturated-linear activation: 0 below 0, identity on `[0, 1]`, 1 above.
///
/// Lazy inputs keep their symbolic form when they are certainly inside the
/// unit interval.
pub fn saturated_sigma(x: &Value, budget: Option<&PrecisionBudget>) -> Result<Value, NumericError> {
    if let Some(q) = x.as_exact() {
        return Ok(Value::exact(q.clamp_unit()));
    }
    let budget = require_budget(budget)?;
    let zero = Rational::zero();
    let one = Rational::one();
    refine(x, budget, |iv| {
        if iv.hi <= zero {
            Some(Value::zero())
        } else if iv.lo >= one {
            Some(Value::one())
        } else if iv.lo >= zero && iv.hi <= one {
            Some(x.clone())
        } else {
            None
        }
    })?
    .ok_or(NumericError::UnknownSign)
}

/// Binary threshold: 0 for `x <= 0`, 1 otherwise.
pub fn signal(x: &Value, budget: Option<&PrecisionBudget>) -> Result<bool, NumericError> {
    if let Some(q) = x.as_exact() {
        return Ok(q.signum() > 0);
    }
    let budget = require_budget(budget)?;
    let zero = Rational::zero();
    refine(x, budget, |iv| {
        if iv.lo > zero {
            Some(true)
        } else if iv.hi <= zero {
            Some(false)
        } else {
            None
        }
    })?
    .ok_or(NumericError::UnknownSign)
}

/// `s · v` as a value. A lazy scalar may multiply only an exact value.
pub fn scalar_times(s: &ExactScalar, v: &Value) -> Result<Value, NumericError> {
    if let Some(q) = s.as_rational() {
        return Ok(v.scaled(&q));
    }
    let real = s.as_real().expect("lazy scalar");
    let c = v.as_exact().ok_or(NumericError::NonlinearLazy)?;
    let mut out = Value::zero();
    out.add_real(c, real);
    Ok(out)
}

/// `Σ weights·states + Σ input_weights·inputs + bias`.
pub fn affine_combine(
    weights: &[ExactScalar],
    states: &[Value],
    input_weights: &[ExactScalar],
    inputs: &[bool],
    bias: &ExactScalar,
    budget: Option<&PrecisionBudget>,
) -> Result<Affine, NumericError> {
    if weights.len() != states.len() {
        return Err(NumericError::Shape { expected: weights.len(), found: states.len() });
    }
    if input_weights.len() != inputs.len() {
        return Err(NumericError::Shape { expected: input_weights.len(), found: inputs.len() });
    }
    let mut acc = bias.to_value();
    for (w, x) in weights.iter().zip(states) {
        let term = scalar_times(w, x)?;
        acc.add_scaled(&Rational::one(), &term);
    }
    for (w, &u) in input_weights.iter().zip(inputs) {
        if u {
            acc.add_scaled(&Rational::one(), &w.to_value());
        }
    }
    if let Some(q) = acc.as_exact() {
        return Ok(Affine::Exact(q.clone()));
    }
    let budget = require_budget(budget)?;
    let interval = acc.enclose(budget.max_digits())?;
    Ok(Affine::Enclosed { value: acc, interval })
}

/// Compares two values, reading at most `budget.max_digits()` digits of any
/// lazy term. Two lazy values are reported `Equal` only when their
/// difference vanishes symbolically, i.e. they are built from the same
/// stream objects with the same coefficients.
pub fn compare_with_precision(x: &Value, y: &Value, budget: &PrecisionBudget) -> Result<Comparison, NumericError> {
    if let (Some(a), Some(b)) = (x.as_exact(), y.as_exact()) {
        return Ok(a.cmp(b).into());
    }
    let diff = x.sub(y);
    if let Some(d) = diff.as_exact() {
        return Ok(d.signum().cmp(&0).into());
    }
    let zero = Rational::zero();
    let verdict = refine(&diff, budget, |iv| {
        if iv.lo > zero {
            Some(Comparison::Greater)
        } else if iv.hi < zero {
            Some(Comparison::Less)
        } else {
            None
        }
    })?;
    match (verdict, budget.on_exhaustion()) {
        (Some(v), _) => Ok(v),
        (None, OnExhaustion::ReportUnknown) => Ok(Comparison::Unknown),
        (None, OnExhaustion::Fail) => Err(NumericError::BudgetExhausted),
    }
}
