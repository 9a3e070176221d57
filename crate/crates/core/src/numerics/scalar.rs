use std::fmt;
use std::sync::Arc;

use num_bigint::BigInt;

use super::{NumericError, Packing, Rational, UnitReal, Value};
use crate::codec::OracleTable;
use crate::degrees::DegreeLabel;

#[derive(Clone, Debug)]
pub enum ScalarKind {
    Integer(BigInt),
    Rational(Rational),
    /// A computable (or at least generated) digit stream.
    Stream(UnitReal),
    /// A truncated oracle table read as a real.
    Oracle { table: Arc<OracleTable>, packing: Packing, real: UnitReal },
}

/// A weight or bias: an integer, a rational, or a lazily known real in
/// `[0, 1)`, optionally tagged with the degree it is declared to carry.
#[derive(Clone, Debug)]
pub struct ExactScalar {
    kind: ScalarKind,
    label: Option<DegreeLabel>,
}

impl ExactScalar {
    pub fn integer(n: impl Into<BigInt>) -> Self {
        ExactScalar { kind: ScalarKind::Integer(n.into()), label: None }
    }

    pub fn rational(q: Rational) -> Self {
        ExactScalar { kind: ScalarKind::Rational(q), label: None }
    }

    /// `num/den`; fails on a zero denominator.
    pub fn ratio(num: i64, den: i64) -> Result<Self, NumericError> {
        Rational::new(num, den).map(Self::rational).ok_or(NumericError::ZeroDenominator)
    }

    pub fn zero() -> Self {
        Self::integer(0)
    }

    /// Wraps a stream; its label (if any) becomes the scalar's label.
    pub fn stream(real: UnitReal) -> Self {
        let label = real.label().cloned();
        ExactScalar { kind: ScalarKind::Stream(real), label }
    }

    pub fn oracle(table: Arc<OracleTable>, packing: Packing) -> Self {
        let real = UnitReal::from_oracle(table.clone(), packing);
        ExactScalar { kind: ScalarKind::Oracle { table, packing, real }, label: None }
    }

    /// Attaches a degree label. Integers and rationals are computable, so
    /// they accept only the bottom label.
    pub fn with_label(mut self, label: DegreeLabel) -> Result<Self, NumericError> {
        match &mut self.kind {
            ScalarKind::Integer(_) | ScalarKind::Rational(_) if !label.is_bottom() => {
                return Err(NumericError::LabelOnExact(label.to_string()))
            }
            ScalarKind::Integer(_) | ScalarKind::Rational(_) => {}
            ScalarKind::Stream(r) | ScalarKind::Oracle { real: r, .. } => {
                *r = r.clone().with_label(label.clone());
            }
        }
        self.label = Some(label);
        Ok(self)
    }

    pub fn kind(&self) -> &ScalarKind {
        &self.kind
    }

    pub fn label(&self) -> Option<&DegreeLabel> {
        self.label.as_ref()
    }

    pub fn is_integer(&self) -> bool {
        matches!(self.kind, ScalarKind::Integer(_))
    }

    /// Integer or rational.
    pub fn is_exact(&self) -> bool {
        matches!(self.kind, ScalarKind::Integer(_) | ScalarKind::Rational(_))
    }

    pub fn is_zero(&self) -> bool {
        self.as_rational().is_some_and(|q| q.is_zero())
    }

    pub fn as_rational(&self) -> Option<Rational> {
        match &self.kind {
            ScalarKind::Integer(n) => Some(Rational::from_bigint(n.clone())),
            ScalarKind::Rational(q) => Some(q.clone()),
            _ => None,
        }
    }

    pub fn as_real(&self) -> Option<&UnitReal> {
        match &self.kind {
            ScalarKind::Stream(r) | ScalarKind::Oracle { real: r, .. } => Some(r),
            _ => None,
        }
    }

    pub fn to_value(&self) -> Value {
        match self.as_real() {
            Some(r) => Value::real(r.clone()),
            None => Value::exact(self.as_rational().expect("exact scalar")),
        }
    }
}

impl From<Rational> for ExactScalar {
    fn from(q: Rational) -> Self {
        ExactScalar::rational(q)
    }
}

impl fmt::Display for ExactScalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.kind {
            ScalarKind::Integer(n) => write!(f, "int:{n}")?,
            ScalarKind::Rational(q) => {
                if q.is_integer() {
                    write!(f, "rat:{q}/1")?
                } else {
                    write!(f, "rat:{q}")?
                }
            }
            ScalarKind::Stream(r) => match r.as_fraction() {
                Some(q) if r.base() == 2 => write!(f, "stream:{q}")?,
                Some(q) => write!(f, "stream:{q}:{}", r.base())?,
                None => f.write_str("stream:<generated>")?,
            },
            ScalarKind::Oracle { table, packing, .. } => {
                let src = table.source().map(|p| p.display().to_string()).unwrap_or_else(|| "<memory>".into());
                write!(f, "oracle:{src}:{}", packing.name())?
            }
        }
        if let Some(l) = &self.label {
            write!(f, "@{l}")?;
        }
        Ok(())
    }
}
