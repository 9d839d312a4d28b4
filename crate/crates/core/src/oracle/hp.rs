//! Extended-precision binary floating point helpers.

use dashu_float::round::mode::HalfEven;
use dashu_float::FBig;

pub type HpFloat = FBig<HalfEven, 2>;

/// Binary precision giving `digits` decimal digits plus guard bits.
pub fn bits_for_digits(digits: usize) -> usize {
    (digits as f64 * std::f64::consts::LOG2_10).ceil() as usize + 32
}

/// Exact conversion of a finite `f64`, at working precision `bits`.
pub fn from_f64(x: f64, bits: usize) -> HpFloat {
    HpFloat::try_from(x).expect("finite value").with_precision(bits).value()
}

pub fn from_i64(x: i64, bits: usize) -> HpFloat {
    HpFloat::from(x).with_precision(bits).value()
}

/// `num/den` rounded to `bits`.
pub fn ratio(num: i64, den: i64, bits: usize) -> HpFloat {
    from_i64(num, bits) / from_i64(den, bits)
}

pub fn pi(bits: usize) -> HpFloat {
    HpFloat::pi(bits)
}

pub fn to_f64(x: &HpFloat) -> f64 {
    x.to_f64().value()
}

pub fn is_positive(x: &HpFloat) -> bool {
    *x > HpFloat::ZERO
}

/// Scientific notation with `digits` significant digits, e.g.
/// `-1.2345e-7`. Deterministic across platforms.
pub fn to_sci(x: &HpFloat, digits: usize) -> String {
    if *x == HpFloat::ZERO {
        return "0".to_string();
    }
    let dec = x.to_decimal().value().with_precision(digits).value();
    let repr = dec.repr();
    let sig = repr.significand().to_string();
    let (neg, sig) = match sig.strip_prefix('-') {
        Some(s) => (true, s.to_string()),
        None => (false, sig),
    };
    let sig = sig.trim_end_matches('0');
    let sig = if sig.is_empty() { "0" } else { sig };
    let trailing = repr.significand().to_string().trim_start_matches('-').len() - sig.len();
    let exp = repr.exponent() + trailing as isize + sig.len() as isize - 1;
    let mut out = String::new();
    if neg {
        out.push('-');
    }
    out.push_str(&sig[..1]);
    if sig.len() > 1 {
        out.push('.');
        out.push_str(&sig[1..]);
    }
    out.push('e');
    out.push_str(&exp.to_string());
    out
}

/// Parses a decimal string at precision `bits`.
pub fn parse(s: &str, bits: usize) -> Option<HpFloat> {
    let d: dashu_float::DBig = s.trim().parse().ok()?;
    Some(d.with_base_and_precision::<2>(bits).value().with_rounding::<HalfEven>())
}
