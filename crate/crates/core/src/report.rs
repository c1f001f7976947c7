//! Serialization helpers for reports: exact values as strings, floats at
//! 12 significant digits.

use num_bigint::BigUint;
use num_rational::{BigRational, Rational64};
use serde::Serializer;

/// `x` rounded to 12 significant digits.
pub fn round_sig12(x: f64) -> f64 {
    if !x.is_finite() || x == 0.0 {
        return x;
    }
    format!("{x:.11e}").parse().unwrap_or(x)
}

pub fn sig12<S: Serializer>(x: &f64, s: S) -> Result<S::Ok, S::Error> {
    if x.is_finite() {
        s.serialize_f64(round_sig12(*x))
    } else {
        s.serialize_str(&x.to_string())
    }
}

pub fn sig12_opt<S: Serializer>(x: &Option<f64>, s: S) -> Result<S::Ok, S::Error> {
    match x {
        Some(v) => sig12(v, s),
        None => s.serialize_none(),
    }
}

pub fn rational64_str<S: Serializer>(q: &Rational64, s: S) -> Result<S::Ok, S::Error> {
    s.serialize_str(&q.to_string())
}

pub fn rational64_opt_str<S: Serializer>(q: &Option<Rational64>, s: S) -> Result<S::Ok, S::Error> {
    match q {
        Some(v) => s.serialize_str(&v.to_string()),
        None => s.serialize_none(),
    }
}

pub fn big_rational_str<S: Serializer>(q: &BigRational, s: S) -> Result<S::Ok, S::Error> {
    s.serialize_str(&q.to_string())
}

pub fn big_rational_opt_str<S: Serializer>(q: &Option<BigRational>, s: S) -> Result<S::Ok, S::Error> {
    match q {
        Some(v) => s.serialize_str(&v.to_string()),
        None => s.serialize_none(),
    }
}

pub fn biguint_str<S: Serializer>(n: &BigUint, s: S) -> Result<S::Ok, S::Error> {
    s.serialize_str(&n.to_string())
}

pub fn biguint_opt_str<S: Serializer>(n: &Option<BigUint>, s: S) -> Result<S::Ok, S::Error> {
    match n {
        Some(v) => s.serialize_str(&v.to_string()),
        None => s.serialize_none(),
    }
}

/// Natural log of a positive rational, through big-integer logs.
pub fn big_rational_ln(q: &BigRational) -> f64 {
    use num_traits::Signed;
    let num = q.numer().abs().to_biguint().expect("nonnegative");
    let den = q.denom().abs().to_biguint().expect("nonnegative");
    crate::growth::big_ln(&num) - crate::growth::big_ln(&den)
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_bigint::BigInt;

    #[test]
    fn rounding() {
        assert_eq!(round_sig12(2.0 / 3.0), 0.666666666667);
        assert_eq!(round_sig12(0.0), 0.0);
        assert_eq!(round_sig12(1.0e-30 / 3.0), 3.33333333333e-31);
    }

    #[test]
    fn rational_logs() {
        let q = BigRational::new(BigInt::from(3), BigInt::from(2));
        assert!((big_rational_ln(&q) - 1.5f64.ln()).abs() < 1e-12);
    }
}
