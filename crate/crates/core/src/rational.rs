//! The scalar field: arbitrary-precision rational numbers.
//!
//! Everything in this crate computes over ℚ with exact arithmetic, so the
//! scalar type is fixed once here. `num`'s `BigRational` already maintains
//! the invariants we need (numerator and denominator coprime, denominator
//! positive, zero stored as 0/1), so we use it directly instead of rolling
//! our own.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Zero;

/// Arbitrary-precision rational scalar used throughout the crate.
pub type Rat = BigRational;

/// Shorthand for an integer-valued rational.
pub fn rat(n: i64) -> Rat {
    Rat::from_integer(BigInt::from(n))
}

/// Shorthand for the rational `n/d`. Panics if `d == 0`.
pub fn ratio(n: i64, d: i64) -> Rat {
    Rat::new(BigInt::from(n), BigInt::from(d))
}

/// Parses a rational from text: an optionally signed integer, or `p/q`.
pub fn parse_rat(s: &str) -> Result<Rat, String> {
    let t = s.trim();
    t.parse::<Rat>()
        .map_err(|e| format!("invalid rational `{t}`: {e}"))
        .and_then(|r| {
            if t.contains('/') && r.denom().is_zero() {
                Err(format!("invalid rational `{t}`: zero denominator"))
            } else {
                Ok(r)
            }
        })
}
