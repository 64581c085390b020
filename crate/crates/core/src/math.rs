//! Small exact-arithmetic helpers shared by the code, threshold and preset
//! modules.

use num_bigint::BigUint;
use num_integer::Roots;
use num_rational::Ratio;
use num_traits::{One, ToPrimitive, Zero};

/// Exact non-negative rational used for ε, δ and squared thresholds.
pub type Rational = Ratio<u128>;

/// Parses `"p/q"` or a plain integer into a [`Rational`].
pub fn parse_rational(text: &str) -> Option<Rational> {
    let text = text.trim();
    match text.split_once('/') {
        Some((num, den)) => {
            let num: u128 = num.trim().parse().ok()?;
            let den: u128 = den.trim().parse().ok()?;
            (den != 0).then(|| Rational::new(num, den))
        }
        None => text.parse::<u128>().ok().map(Rational::from_integer),
    }
}

/// Renders a rational as `"p/q"` (or `"p"` when integral).
pub fn format_rational(value: &Rational) -> String {
    if value.is_integer() {
        value.numer().to_string()
    } else {
        format!("{}/{}", value.numer(), value.denom())
    }
}

pub fn rational_to_f64(value: &Rational) -> f64 {
    *value.numer() as f64 / *value.denom() as f64
}

/// `⌊value⌋`.
pub fn floor(value: &Rational) -> u128 {
    value.numer() / value.denom()
}

/// `⌈value⌉`.
pub fn ceil(value: &Rational) -> u128 {
    value.numer().div_ceil(*value.denom())
}

/// `⌊√value⌋`, exact. Uses `⌊√x⌋ = ⌊√⌊x⌋⌋` for non-negative `x`.
pub fn floor_sqrt(value: &Rational) -> u128 {
    floor(value).sqrt()
}

/// Deterministic primality test for 64-bit integers (Miller–Rabin with the
/// first twelve prime bases, exact below 3.3·10^24).
pub fn is_prime(n: u64) -> bool {
    const BASES: [u64; 12] = [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37];
    if n < 2 {
        return false;
    }
    for &p in &BASES {
        if n.is_multiple_of(p) {
            return n == p;
        }
    }
    let mut d = n - 1;
    let mut s = 0;
    while d.is_multiple_of(2) {
        d /= 2;
        s += 1;
    }
    let mul = |a: u64, b: u64| ((a as u128 * b as u128) % n as u128) as u64;
    let pow = |mut base: u64, mut exp: u64| {
        let mut acc = 1u64;
        while exp > 0 {
            if exp & 1 == 1 {
                acc = mul(acc, base);
            }
            base = mul(base, base);
            exp >>= 1;
        }
        acc
    };
    'witness: for &a in &BASES {
        let mut x = pow(a, d);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..s {
            x = mul(x, x);
            if x == n - 1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

/// Least prime `>= n`.
pub fn next_prime(n: u64) -> u64 {
    let mut candidate = n.max(2);
    while !is_prime(candidate) {
        candidate += 1;
    }
    candidate
}

/// `log2(n)` for arbitrarily large `n`, accurate to f64 precision.
pub fn log2_big(n: &BigUint) -> f64 {
    let bits = n.bits();
    if bits <= 64 {
        return n.to_u64().map_or(f64::NAN, |v| (v as f64).log2());
    }
    let shift = bits - 53;
    let top = (n >> shift).to_u64().unwrap_or(0);
    (top as f64).log2() + shift as f64
}

/// `⌈n^{1/k}⌉` for `k >= 1`.
pub fn ceil_nth_root(n: &BigUint, k: u32) -> BigUint {
    let root = n.nth_root(k);
    if root.pow(k) < *n {
        root + BigUint::one()
    } else {
        root
    }
}

/// Parses a decimal integer, or `b^e` for a power.
pub fn parse_big(text: &str) -> Option<BigUint> {
    let text = text.trim();
    if let Some((base, exp)) = text.split_once('^') {
        let base: BigUint = base.trim().parse().ok()?;
        let exp: u32 = exp.trim().parse().ok()?;
        return Some(base.pow(exp));
    }
    let value: BigUint = text.parse().ok()?;
    (!value.is_zero()).then_some(value)
}
