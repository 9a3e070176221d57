//! Packing bit strings into rationals in `[0, 1)`.
//!
//! The Cantor-4 packing writes bit `b` as base-4 digit `2b + 1`. Every
//! nonempty packing lies in `[1/4, 1)`, and the top-bit test `4x − 2` is
//! never zero on a valid packing (it lies in `[-1, 0)` or `[1, 2)`), so the
//! threshold gadgets that decode it never sit on their boundary.

use num_bigint::BigInt;
use num_traits::{One, Zero};

use super::CodecError;
use crate::numerics::{Packing, Rational};

/// `Σ (2bᵢ + 1)·4^-i`; the empty string packs to 0.
pub fn cantor_encode(bits: &[bool]) -> Rational {
    pack(bits, Packing::Cantor4)
}

/// Pops the top bit of a Cantor-4 packing: `bit = signal(4x − 2)`,
/// `remainder = σ(4x − 2·bit − 1)`. Returns `None` for the empty packing.
pub fn cantor_decode_step(x: &Rational) -> Result<Option<(bool, Rational)>, CodecError> {
    if !is_cantor4(x) {
        return Err(CodecError::Encoding(format!("{x} is not a Cantor-4 packing")));
    }
    Ok(decode_step_unchecked(x))
}

fn decode_step_unchecked(x: &Rational) -> Option<(bool, Rational)> {
    if x.is_zero() {
        return None;
    }
    let four = Rational::from_integer(4);
    let scaled = &four * x;
    let bit = (&scaled - &Rational::from_integer(2)).signum() > 0;
    let shift = Rational::from_integer(2 * i64::from(bit) + 1);
    Some((bit, (&scaled - &shift).clamp_unit()))
}

/// Unpacks every bit of a Cantor-4 packing.
pub fn cantor_decode(x: &Rational) -> Result<Vec<bool>, CodecError> {
    if !is_cantor4(x) {
        return Err(CodecError::Encoding(format!("{x} is not a Cantor-4 packing")));
    }
    let mut bits = Vec::new();
    let mut cur = x.clone();
    while let Some((b, rest)) = decode_step_unchecked(&cur) {
        bits.push(b);
        cur = rest;
    }
    Ok(bits)
}

/// True when `x` is 0 or a finite base-4 expansion with digits in {1, 3}.
pub fn is_cantor4(x: &Rational) -> bool {
    if x.signum() < 0 || *x >= Rational::one() {
        return false;
    }
    if !is_power_of(&x.denom(), 4) {
        return false;
    }
    let four = Rational::from_integer(4);
    let mut cur = x.clone();
    while !cur.is_zero() {
        let scaled = &four * &cur;
        let d = scaled.floor();
        if d != BigInt::from(1) && d != BigInt::from(3) {
            return false;
        }
        cur = &scaled - &Rational::from_bigint(d);
    }
    true
}

fn is_power_of(n: &BigInt, base: u32) -> bool {
    let base = BigInt::from(base);
    let mut n = n.clone();
    while n > BigInt::one() {
        if !(&n % &base).is_zero() {
            return false;
        }
        n /= &base;
    }
    n.is_one()
}

/// Packs bits with either digit scheme.
pub fn pack(bits: &[bool], packing: Packing) -> Rational {
    let base = Rational::from_integer(i64::from(packing.base()));
    let inv = base.recip().expect("nonzero base");
    bits.iter().rev().fold(Rational::zero(), |acc, &b| {
        let d = Rational::from_integer(i64::from(packing.digit(b)));
        &(&acc + &d) * &inv
    })
}

/// Pops the top bit under either scheme.
///
/// Binary packing cannot distinguish trailing zeros from the end of the
/// string: `0` is always `None`, so `pack(“10”)` unpacks as `“1”`.
pub fn unpack_step(x: &Rational, packing: Packing) -> Result<Option<(bool, Rational)>, CodecError> {
    match packing {
        Packing::Cantor4 => cantor_decode_step(x),
        Packing::Binary => {
            if x.signum() < 0 || *x >= Rational::one() || !is_power_of(&x.denom(), 2) {
                return Err(CodecError::Encoding(format!("{x} is not a finite binary packing")));
            }
            if x.is_zero() {
                return Ok(None);
            }
            let scaled = &Rational::from_integer(2) * x;
            let bit = scaled >= Rational::one();
            let rest = if bit { &scaled - &Rational::one() } else { scaled };
            Ok(Some((bit, rest)))
        }
    }
}
