//! Exact rational helpers: certified enclosures of `ln` and `exp`,
//! harmonic numbers and conversions.
//!
//! Enclosures are returned as `(lo, hi)` with `lo <= true value <= hi`; both
//! ends are dyadic rationals so repeated use does not blow up denominators.

use num_bigint::{BigInt, BigUint, Sign};
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

pub fn ratio(num: i64, den: i64) -> BigRational {
    BigRational::new(BigInt::from(num), BigInt::from(den))
}

pub fn int(n: impl Into<BigInt>) -> BigRational {
    BigRational::from_integer(n.into())
}

/// Exact rational value of a finite float.
pub fn from_f64(x: f64) -> BigRational {
    BigRational::from_float(x).expect("finite float")
}

pub fn to_f64(x: &BigRational) -> f64 {
    x.to_f64().unwrap_or(f64::NAN)
}

/// Parses `"3/4"`, `"0.19"` or `"2"` into an exact rational.
pub fn parse_rational(text: &str) -> Option<BigRational> {
    let text = text.trim();
    if let Some((n, d)) = text.split_once('/') {
        let n: BigInt = n.trim().parse().ok()?;
        let d: BigInt = d.trim().parse().ok()?;
        if d.is_zero() {
            return None;
        }
        return Some(BigRational::new(n, d));
    }
    if let Some((whole, frac)) = text.split_once('.') {
        let negative = whole.starts_with('-');
        let whole_abs = whole.trim_start_matches('-');
        if !frac.chars().all(|c| c.is_ascii_digit()) {
            return None;
        }
        let digits = format!("{}{}", if whole_abs.is_empty() { "0" } else { whole_abs }, frac);
        let num: BigInt = digits.parse().ok()?;
        let den = BigInt::from(10u32).pow(frac.len() as u32);
        let value = BigRational::new(num, den);
        return Some(if negative { -value } else { value });
    }
    text.parse::<BigInt>().ok().map(BigRational::from_integer)
}

fn pow2(exp: u64) -> BigInt {
    BigInt::one() << exp
}

fn round_down(x: &BigRational, bits: u64) -> BigRational {
    let scaled = x * BigRational::from_integer(pow2(bits));
    BigRational::new(scaled.floor().to_integer(), pow2(bits))
}

fn round_up(x: &BigRational, bits: u64) -> BigRational {
    let scaled = x * BigRational::from_integer(pow2(bits));
    BigRational::new(scaled.ceil().to_integer(), pow2(bits))
}

/// `2 atanh(t) = ln((1+t)/(1-t))` for `0 <= t <= 1/3`, enclosed to `2^-bits`.
fn two_atanh(t: &BigRational, bits: u64) -> (BigRational, BigRational) {
    let t2 = t * t;
    let mut power = t.clone();
    let mut sum = BigRational::zero();
    let mut i: u64 = 0;
    let eps = BigRational::new(BigInt::one(), pow2(bits + 2));
    let one_minus_t2 = BigRational::one() - &t2;
    loop {
        let term = &power / int(2 * i + 1);
        sum += &term;
        power = &power * &t2;
        // remaining tail of sum_{j>i} t^(2j+1)/(2j+1) <= t^(2i+3) / ((2i+3)(1-t^2))
        let tail = &power / (int(2 * i + 3) * &one_minus_t2);
        if tail <= eps || power.is_zero() {
            let lo = &sum * int(2);
            let hi = (&sum + &tail) * int(2);
            return (round_down(&lo, bits + 2), round_up(&hi, bits + 2));
        }
        i += 1;
    }
}

/// Enclosure of `ln 2` of width at most `2^-bits`.
pub fn ln2_enclosure(bits: u64) -> (BigRational, BigRational) {
    two_atanh(&ratio(1, 3), bits)
}

/// Enclosure of `ln x` for `x > 0`.
pub fn ln_enclosure(x: &BigRational, bits: u64) -> (BigRational, BigRational) {
    assert!(x.is_positive(), "ln of a non-positive number");
    // x = 2^m * y with 1 <= y < 2
    let mut m: i64 = (x.numer().bits() as i64) - (x.denom().bits() as i64);
    let scale = |m: i64| -> BigRational {
        if m >= 0 {
            int(pow2(m as u64))
        } else {
            BigRational::new(BigInt::one(), pow2((-m) as u64))
        }
    };
    let mut y = x / scale(m);
    while y >= int(2) {
        m += 1;
        y = x / scale(m);
    }
    while y < BigRational::one() {
        m -= 1;
        y = x / scale(m);
    }
    let guard = bits + 8 + (m.unsigned_abs().max(1).ilog2() as u64) + 2;
    let t = (&y - BigRational::one()) / (&y + BigRational::one());
    let (ly_lo, ly_hi) = two_atanh(&t, guard);
    let (l2_lo, l2_hi) = ln2_enclosure(guard);
    let mm = int(m);
    let (lo, hi) = if m >= 0 {
        (&mm * &l2_lo + ly_lo, &mm * &l2_hi + ly_hi)
    } else {
        (&mm * &l2_hi + ly_lo, &mm * &l2_lo + ly_hi)
    };
    (round_down(&lo, bits + 4), round_up(&hi, bits + 4))
}

/// A fixed dyadic approximation of `ln x` within `2^-48`, the lower end of
/// the enclosure. Used wherever a deterministic rational stand-in is needed.
pub fn ln_approx(x: &BigRational) -> BigRational {
    ln_enclosure(x, 48).0
}

/// Enclosure of `e^x` for `x >= 0` with relative width about `2^-bits`.
pub fn exp_enclosure(x: &BigRational, bits: u64) -> (BigRational, BigRational) {
    assert!(!x.is_negative(), "exp_enclosure expects x >= 0");
    // reduce: z = x / 2^r <= 1/2
    let mut r: u64 = 0;
    let half = ratio(1, 2);
    let mut z = x.clone();
    while z > half {
        z /= int(2);
        r += 1;
    }
    let work = bits + 2 * r + 24;
    let eps = BigRational::new(BigInt::one(), pow2(work));
    let mut term = BigRational::one();
    let mut sum = BigRational::zero();
    let mut i: u64 = 0;
    loop {
        sum += &term;
        i += 1;
        term = &term * &z / int(i);
        if term <= eps {
            break;
        }
    }
    // tail <= term / (1 - z) <= 2 term
    let mut lo = round_down(&sum, work);
    let mut hi = round_up(&(&sum + &term * int(2)), work);
    for _ in 0..r {
        lo = round_down(&(&lo * &lo), work);
        hi = round_up(&(&hi * &hi), work);
    }
    (lo, hi)
}

/// `floor(e^x)` for `0 <= x < 43`; `None` for larger exponents.
pub fn floor_exp(x: &BigRational) -> Option<u64> {
    if *x >= int(43) {
        return None;
    }
    let mut bits = 64;
    loop {
        let (lo, hi) = exp_enclosure(x, bits);
        let a = lo.floor().to_integer();
        let b = hi.floor().to_integer();
        if a == b {
            return a.to_u64();
        }
        bits *= 2;
        assert!(bits <= 1 << 16, "exp enclosure failed to separate an integer");
    }
}

/// `H_n = 1 + 1/2 + ... + 1/n`.
pub fn harmonic(n: u64) -> BigRational {
    let mut sum = BigRational::zero();
    for k in 1..=n {
        sum += BigRational::new(BigInt::one(), BigInt::from(k));
    }
    sum
}

/// `base^exp` for a non-negative integer exponent.
pub fn pow(base: &BigRational, exp: u64) -> BigRational {
    let mut result = BigRational::one();
    let mut b = base.clone();
    let mut e = exp;
    while e > 0 {
        if e & 1 == 1 {
            result *= &b;
        }
        b = &b * &b;
        e >>= 1;
    }
    result
}

/// `ceil(x)` as a `u64`, saturating.
pub fn ceil_u64(x: &BigRational) -> u64 {
    x.ceil().to_integer().to_u64().unwrap_or(u64::MAX)
}

/// `floor(x * 2^64)` clamped to `[0, u64::MAX]`: the threshold turning a
/// uniform `u64` draw into a Bernoulli(x) trial.
pub fn probability_threshold(x: &BigRational) -> u64 {
    if !x.is_positive() {
        return 0;
    }
    if *x >= BigRational::one() {
        return u64::MAX;
    }
    let scaled = (x * int(pow2(64))).floor().to_integer();
    scaled.to_u64().unwrap_or(u64::MAX)
}

pub fn biguint_to_bigint(x: BigUint) -> BigInt {
    BigInt::from_biguint(Sign::Plus, x)
}

pub fn is_integer(x: &BigRational) -> bool {
    x.denom().is_one()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ln2_brackets_float() {
        let (lo, hi) = ln2_enclosure(60);
        assert!(to_f64(&lo) <= std::f64::consts::LN_2 + 1e-15);
        assert!(to_f64(&hi) >= std::f64::consts::LN_2 - 1e-15);
        assert!(&hi - &lo < BigRational::new(BigInt::one(), pow2(58)));
    }

    #[test]
    fn ln_enclosure_matches_float() {
        for x in [0.001, 0.5, 1.0, 1.5, 3.0, 12.0, 170.0, 1e6] {
            let (lo, hi) = ln_enclosure(&from_f64(x), 50);
            let f = x.ln();
            assert!(to_f64(&lo) <= f + 1e-12, "lo for {x}");
            assert!(to_f64(&hi) >= f - 1e-12, "hi for {x}");
            assert!(to_f64(&(&hi - &lo)) < 1e-12);
        }
        let (lo, hi) = ln_enclosure(&int(1), 40);
        assert!(lo <= BigRational::zero() && hi >= BigRational::zero());
    }

    #[test]
    fn exp_floor_known_values() {
        assert_eq!(floor_exp(&int(0)), Some(1));
        assert_eq!(floor_exp(&int(1)), Some(2));
        assert_eq!(floor_exp(&int(2)), Some(7));
        assert_eq!(floor_exp(&int(3)), Some(20));
        assert_eq!(floor_exp(&int(5)), Some(148));
        assert_eq!(floor_exp(&ratio(3, 2)), Some(4));
        assert_eq!(floor_exp(&int(20)), Some(485_165_195));
        assert_eq!(floor_exp(&int(50)), None);
    }

    #[test]
    fn exp_enclosure_brackets() {
        let (lo, hi) = exp_enclosure(&int(10), 40);
        let f = 10f64.exp();
        assert!(to_f64(&lo) <= f * (1.0 + 1e-12));
        assert!(to_f64(&hi) >= f * (1.0 - 1e-12));
    }

    #[test]
    fn harmonic_small() {
        assert_eq!(harmonic(1), int(1));
        assert_eq!(harmonic(3), ratio(11, 6));
    }

    #[test]
    fn parse_rationals() {
        assert_eq!(parse_rational("3/4"), Some(ratio(3, 4)));
        assert_eq!(parse_rational("0.19"), Some(ratio(19, 100)));
        assert_eq!(parse_rational("2"), Some(int(2)));
        assert_eq!(parse_rational(".5"), Some(ratio(1, 2)));
        assert_eq!(parse_rational("1/0"), None);
        assert_eq!(parse_rational("x"), None);
    }

    #[test]
    fn thresholds() {
        assert_eq!(probability_threshold(&int(0)), 0);
        assert_eq!(probability_threshold(&int(1)), u64::MAX);
        assert_eq!(probability_threshold(&ratio(1, 2)), 1u64 << 63);
    }
}
