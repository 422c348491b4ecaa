use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use std::str::FromStr;

/// Exact rational scalar. `num_rational::BigRational` already maintains the
/// two invariants this crate relies on everywhere: fractions are stored
/// reduced and the denominator is positive.
pub type Rational = num_rational::BigRational;

/// Rational from a machine-integer fraction. Panics on zero denominator.
pub fn rat(num: i64, den: i64) -> Rational {
    Rational::new(BigInt::from(num), BigInt::from(den))
}

/// Rational from a machine integer.
pub fn rint(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

/// Canonical string form used by every serializer in the workspace:
/// always "num/den" with the reduced fraction and positive denominator,
/// including "/1" for integers, so the encoding is bijective.
pub fn rat_to_string(r: &Rational) -> String {
    format!("{}/{}", r.numer(), r.denom())
}

/// Inverse of [`rat_to_string`]. Also accepts a bare integer string.
pub fn rat_from_str(s: &str) -> Result<Rational, String> {
    let (num, den) = match s.split_once('/') {
        Some((n, d)) => (n, d),
        None => (s, "1"),
    };
    let num = BigInt::from_str(num.trim()).map_err(|e| format!("bad numerator `{num}`: {e}"))?;
    let den = BigInt::from_str(den.trim()).map_err(|e| format!("bad denominator `{den}`: {e}"))?;
    if den.is_zero() {
        return Err(format!("zero denominator in `{s}`"));
    }
    Ok(Rational::new(num, den))
}

/// Binomial coefficient with rational top argument: x(x-1)...(x-i+1)/i!.
pub fn binom_rational(x: &Rational, i: usize) -> Rational {
    let mut acc = Rational::one();
    for k in 0..i {
        acc = acc * (x - rint(k as i64)) / rint((k + 1) as i64);
    }
    acc
}

/// True when the rational is a nonnegative integer.
pub fn is_nonneg_integer(r: &Rational) -> bool {
    r.is_integer() && !r.numer().is_negative()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn canonical_string_roundtrip() {
        for (n, d) in [(0, 1), (3, 1), (-1, 2), (10, -4), (7, 21)] {
            let r = rat(n, d);
            assert_eq!(rat_from_str(&rat_to_string(&r)).unwrap(), r);
        }
        assert_eq!(rat_to_string(&rat(10, -4)), "-5/2");
        assert_eq!(rat_from_str("4").unwrap(), rint(4));
        assert!(rat_from_str("1/0").is_err());
    }

    #[test]
    fn binom_half() {
        // Coefficients of the binomial series for (1+x)^(1/2).
        let half = rat(1, 2);
        assert_eq!(binom_rational(&half, 0), rint(1));
        assert_eq!(binom_rational(&half, 1), rat(1, 2));
        assert_eq!(binom_rational(&half, 2), rat(-1, 8));
        assert_eq!(binom_rational(&half, 3), rat(1, 16));
    }
}
