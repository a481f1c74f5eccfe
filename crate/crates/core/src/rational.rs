//! Exact rational scalars and their textual forms.
//!
//! Every probability that enters the chains is a [`Rational`]; decimal input such
//! as `0.44` is read as the fraction `11/25`, never as a binary float.

use dashu_base::{Abs, BitTest, SquareRoot, UnsignedAbs};
use dashu_int::{IBig, Sign, UBig};
use num_traits::Signed;

use crate::error::{Error, Result};

pub type Rational = dashu_ratio::RBig;

pub fn int(n: i64) -> Rational {
    Rational::from(n)
}

pub fn ratio(num: i64, den: i64) -> Rational {
    assert!(den != 0, "zero denominator");
    Rational::from_parts_signed(IBig::from(num), IBig::from(den))
}

pub fn pow10(exp: u32) -> UBig {
    UBig::from(10u8).pow(exp as usize)
}

/// `10^exp` as a rational, for any sign of `exp`.
fn power_of_ten(exp: i64) -> Rational {
    let magnitude = pow10(exp.unsigned_abs() as u32);
    if exp >= 0 {
        Rational::from(magnitude)
    } else {
        Rational::from_parts(IBig::from(1u8), magnitude)
    }
}

/// Parses `p/q`, an integer, a decimal (`0.44`, `.5`) or scientific notation (`1e-7`).
pub fn parse_rational(text: &str) -> Result<Rational> {
    let s = text.trim();
    let bad = || Error::Parse(format!("not a rational number: {text:?}"));
    if s.is_empty() {
        return Err(bad());
    }
    if let Some((num, den)) = s.split_once('/') {
        let num: IBig = num.trim().parse().map_err(|_| bad())?;
        let den: IBig = den.trim().parse().map_err(|_| bad())?;
        if den.is_zero() {
            return Err(Error::Parse(format!("zero denominator in {text:?}")));
        }
        return Ok(Rational::from_parts_signed(num, den));
    }

    let (mantissa, exponent) = match s.find(['e', 'E']) {
        Some(at) => {
            let exp: i32 = s[at + 1..].parse().map_err(|_| bad())?;
            (&s[..at], exp)
        }
        None => (s, 0),
    };
    let (negative, digits) = match mantissa.strip_prefix('-') {
        Some(rest) => (true, rest),
        None => (false, mantissa.strip_prefix('+').unwrap_or(mantissa)),
    };
    let (whole, frac) = digits.split_once('.').unwrap_or((digits, ""));
    if whole.is_empty() && frac.is_empty() {
        return Err(bad());
    }
    if !whole.bytes().chain(frac.bytes()).all(|b| b.is_ascii_digit()) {
        return Err(bad());
    }
    let all_digits: UBig = format!("{whole}{frac}").parse().map_err(|_| bad())?;
    let value = Rational::from(all_digits) * power_of_ten(i64::from(exponent) - frac.len() as i64);
    Ok(if negative { -value } else { value })
}

/// `numerator/denominator`, always with an explicit denominator (`1/1`, `0/1`).
pub fn fraction_string(r: &Rational) -> String {
    format!("{}/{}", r.numerator(), r.denominator())
}

/// Round-half-away-from-zero of `r` to an integer.
fn round_half_away(r: &Rational) -> IBig {
    let den = r.denominator();
    // floor((2|n| + d) / 2d)
    let twice = r.numerator().unsigned_abs() * UBig::from(2u8);
    let magnitude = (twice + den) / (den * UBig::from(2u8));
    let sign = if r.is_negative() { Sign::Negative } else { Sign::Positive };
    IBig::from_parts(sign, magnitude)
}

/// Correctly rounded fixed-point rendering with `digits` places after the point.
pub fn to_fixed(r: &Rational, digits: u32) -> String {
    let scaled = round_half_away(&(r * Rational::from(pow10(digits))));
    render_scaled(&scaled, digits)
}

fn render_scaled(scaled: &IBig, digits: u32) -> String {
    let negative = scaled.is_negative();
    let mut body = scaled.unsigned_abs().to_string();
    if digits > 0 {
        let width = digits as usize + 1;
        if body.len() < width {
            body = format!("{}{}", "0".repeat(width - body.len()), body);
        }
        body.insert(body.len() - digits as usize, '.');
    }
    if negative {
        format!("-{body}")
    } else {
        body
    }
}

/// Exact `floor(log10(|r|))` for nonzero `r`.
pub fn decimal_exponent(r: &Rational) -> i64 {
    assert!(!r.is_zero(), "decimal exponent of zero");
    let a = Abs::abs(r.clone());
    let mut e = log10_abs(&a).floor() as i64;
    // correct the float estimate against exact powers of ten
    while power_of_ten(e) > a {
        e -= 1;
    }
    while power_of_ten(e + 1) <= a {
        e += 1;
    }
    e
}

/// Scientific notation with `sig` significant digits, e.g. `-7.95109e-9`.
pub fn to_scientific(r: &Rational, sig: u32) -> String {
    if r.is_zero() {
        return "0".to_string();
    }
    assert!(sig >= 1);
    let mut e = decimal_exponent(r);
    let mut mantissa = round_half_away(&(r * power_of_ten(sig as i64 - 1 - e)));
    if (&mantissa).unsigned_abs() >= pow10(sig) {
        // rounding carried into a new digit, e.g. 9.999995 -> 10.0000
        e += 1;
        mantissa = round_half_away(&(r * power_of_ten(sig as i64 - 1 - e)));
    }
    format!("{}e{}", render_scaled(&mantissa, sig - 1), e)
}

/// `log10(|r|)` accurate to double precision for arbitrarily large or small `r`.
pub fn log10_abs(r: &Rational) -> f64 {
    if r.is_zero() {
        return f64::NEG_INFINITY;
    }
    log10_ubig(&r.numerator().unsigned_abs()) - log10_ubig(r.denominator())
}

fn log10_ubig(b: &UBig) -> f64 {
    let bits = b.bit_len();
    if bits <= 1000 {
        return b.to_f64().value().log10();
    }
    let shift = bits - 64;
    let top = (b >> shift).to_f64().value();
    top.log10() + shift as f64 * std::f64::consts::LOG10_2
}

/// Nearest double to `r`, including values whose numerator or denominator exceed `f64` range.
pub fn to_f64(r: &Rational) -> f64 {
    r.to_f64().value()
}

/// Correctly rounded fixed-point rendering of `sqrt(r)` for `r >= 0`.
pub fn sqrt_to_fixed(r: &Rational, digits: u32) -> String {
    assert!(!r.is_negative(), "square root of a negative rational");
    let scaled = r * Rational::from(pow10(2 * digits));
    let floor_sqrt = scaled.floor().unsigned_abs().sqrt();
    // round to nearest: compare scaled against (s + 1/2)^2
    let half_up = Rational::from(floor_sqrt.clone()) + ratio(1, 2);
    let rounded = if scaled >= &half_up * &half_up { floor_sqrt + UBig::from(1u8) } else { floor_sqrt };
    render_scaled(&IBig::from(rounded), digits)
}

pub fn sign_of(r: &Rational) -> i8 {
    if r.is_positive() {
        1
    } else if r.is_negative() {
        -1
    } else {
        0
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_decimal_as_exact_fraction() {
        assert_eq!(parse_rational("0.44").unwrap(), ratio(11, 25));
        assert_eq!(parse_rational(".5").unwrap(), ratio(1, 2));
        assert_eq!(parse_rational("1").unwrap(), int(1));
        assert_eq!(parse_rational("3/12").unwrap(), ratio(1, 4));
        assert_eq!(parse_rational("1e-7").unwrap(), ratio(1, 10_000_000));
        assert_eq!(parse_rational("-2.5E1").unwrap(), int(-25));
    }

    #[test]
    fn rejects_malformed() {
        for s in ["", "abc", "1/0", "0.4.4", "1/x", ".", "--1"] {
            assert!(parse_rational(s).is_err(), "{s}");
        }
    }

    #[test]
    fn fraction_strings_are_explicit() {
        assert_eq!(fraction_string(&int(1)), "1/1");
        assert_eq!(fraction_string(&int(0)), "0/1");
        assert_eq!(fraction_string(&ratio(-6, 4)), "-3/2");
    }

    #[test]
    fn fixed_rounding() {
        assert_eq!(to_fixed(&ratio(1, 3), 4), "0.3333");
        assert_eq!(to_fixed(&ratio(2, 3), 4), "0.6667");
        assert_eq!(to_fixed(&ratio(-1, 8), 2), "-0.13");
        assert_eq!(to_fixed(&ratio(1, 2), 0), "1");
        assert_eq!(to_fixed(&int(11), 3), "11.000");
        assert_eq!(to_fixed(&ratio(-1, 1000), 2), "0.00");
    }

    #[test]
    fn scientific_rendering() {
        assert_eq!(to_scientific(&ratio(-795109, 100_000_000_000_000), 6), "-7.95109e-9");
        assert_eq!(to_scientific(&ratio(9999995, 1_000_000), 6), "1.00000e1");
        assert_eq!(to_scientific(&int(1), 6), "1.00000e0");
        assert_eq!(to_scientific(&int(0), 6), "0");
        assert_eq!(to_scientific(&ratio(1, 1000), 3), "1.00e-3");
    }

    #[test]
    fn sqrt_rendering() {
        assert_eq!(sqrt_to_fixed(&int(2), 6), "1.414214");
        assert_eq!(sqrt_to_fixed(&int(0), 3), "0.000");
        assert_eq!(sqrt_to_fixed(&int(16), 2), "4.00");
    }

    #[test]
    fn huge_values_convert() {
        let tiny = Rational::from_parts(IBig::from(1u8), UBig::from(2u8).pow(1500));
        assert!((log10_abs(&tiny) + 1500.0 * std::f64::consts::LOG10_2).abs() < 1e-9);
        assert_eq!(to_f64(&tiny), 0.0);
        assert!((to_f64(&ratio(1, 3)) - 1.0 / 3.0).abs() < 1e-16);
        assert_eq!(decimal_exponent(&ratio(1, 1000)), -3);
        assert_eq!(decimal_exponent(&ratio(999, 1000)), -1);
    }
}
