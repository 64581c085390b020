//! Parameter calculators for the three pipelines. All logarithms are base 2;
//! real-valued formulas are floored, the alphabet is bumped to the next
//! prime, and every rounding step is listed in the record's `notes`.

use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};
use serde::Serialize;

use super::ReductionError;
use crate::math::{ceil_nth_root, log2_big, next_prime};

/// Default lower bound on `⌊log n / log log n⌋` for the second pipeline.
pub const DEFAULT_W1_FLOOR: u64 = 100;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PresetCheck {
    pub name: String,
    pub holds: bool,
    pub detail: String,
}

/// Every tunable symbol of one pipeline run, with derived thresholds.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PipelineParams {
    pub theorem: String,
    pub n: String,
    pub k: u64,
    pub r: u64,
    pub m: u64,
    pub c: u64,
    pub sigma_size: u64,
    pub epsilon: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub c0: Option<u64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub sigma_prime_size: Option<u64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub big_r: Option<u64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub big_m: Option<u64>,
    /// Relative distance of the code feeding the threshold graph.
    pub delta: String,
    /// `h² = 2ε/(1-δ)` from the rounded parameters.
    pub h_squared: String,
    /// Block length of the threshold graph (`m`, or `mM` when concatenated).
    pub block_length: String,
    /// Yes-case weight `2·block_length`.
    pub completeness: String,
    /// `⌊min{block_length·h/k, (1-ε)·block_length·c}⌋`.
    pub soundness: String,
    /// The gap is empty: soundness threshold `≤` completeness weight.
    pub degenerate: bool,
    pub log_base: u32,
    pub checks: Vec<PresetCheck>,
    pub notes: Vec<String>,
}

impl PipelineParams {
    pub fn check(&self, name: &str) -> Option<&PresetCheck> {
        self.checks.iter().find(|c| c.name == name)
    }

    pub fn all_checks_hold(&self) -> bool {
        self.checks.iter().all(|c| c.holds)
    }
}

fn ratio(n: u64, d: u64) -> BigRational {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

fn show(q: &BigRational) -> String {
    if q.is_integer() {
        q.numer().to_string()
    } else {
        format!("{}/{}", q.numer(), q.denom())
    }
}

/// `⌊x⌋` for a non-negative rational.
fn floor_big(q: &BigRational) -> BigUint {
    q.floor().to_integer().to_biguint().unwrap_or_default()
}

/// `⌊min{L·h/k, (1-ε)·L·c}⌋` with `h` given by its exact square. The first
/// term is `⌊√(L²h²/k²)⌋`, exact.
pub(crate) fn soundness_floor(length: &BigUint, k: u64, h_squared: &BigRational, epsilon: &BigRational, c: u64) -> BigUint {
    let length = BigRational::from_integer(BigInt::from(length.clone()));
    let k = BigRational::from_integer(BigInt::from(k));
    let first = floor_big(&(&length * &length * h_squared / (&k * &k))).sqrt();
    let second = floor_big(&((BigRational::one() - epsilon) * length * BigRational::from_integer(BigInt::from(c))));
    first.min(second)
}

fn h_squared_of(epsilon: &BigRational, delta: &BigRational) -> BigRational {
    BigRational::from_integer(BigInt::from(2)) * epsilon / (BigRational::one() - delta)
}

fn push(checks: &mut Vec<PresetCheck>, name: &str, holds: bool, detail: String) {
    checks.push(PresetCheck {
        name: name.to_string(),
        holds,
        detail,
    });
}

fn to_u64(value: &BigUint, what: &str) -> Result<u64, ReductionError> {
    value
        .to_u64()
        .ok_or_else(|| ReductionError::Precondition(format!("{what} = {value} does not fit in 64 bits")))
}

/// First pipeline: `r = k`, `m = k⁵`, `c = 4c₀`, `ε = 1/2`, and `|Σ|` the
/// least prime `≥ max(m, ⌈n^{1/k}⌉)`. Requires `k ≥ 2c₀`.
pub fn preset_w2(n: &BigUint, k: u64, c0: u64) -> Result<PipelineParams, ReductionError> {
    if k < 2 {
        return Err(ReductionError::SmallK(k));
    }
    if c0 == 0 {
        return Err(ReductionError::Precondition("c0 must be positive".to_string()));
    }
    if k < 2 * c0 {
        return Err(ReductionError::Precondition(format!("k >= 2*c0 fails: k = {k}, 2*c0 = {}", 2 * c0)));
    }
    let m = k
        .checked_pow(5)
        .ok_or_else(|| ReductionError::Precondition(format!("m = k^5 overflows for k = {k}")))?;
    let c = 4 * c0;
    let root = to_u64(&ceil_nth_root(n, k as u32), "ceil(n^(1/k))")?;
    let sigma = next_prime(m.max(root));
    let epsilon = ratio(1, 2);
    let delta = ratio(m - k, m);
    let h_squared = h_squared_of(&epsilon, &delta);
    let length = BigUint::from(m);
    let completeness = &length * 2u32;
    let soundness = soundness_floor(&length, k, &h_squared, &epsilon, c);

    let mut checks = Vec::new();
    push(&mut checks, "k >= 2c0", true, format!("{k} >= {}", 2 * c0));
    push(&mut checks, "sigma >= m", sigma >= m, format!("{sigma} >= {m}"));
    let sigma_pow = BigUint::from(sigma).pow(k as u32);
    push(&mut checks, "sigma^r >= n", &sigma_pow >= n, format!("{sigma}^{k} >= {n}"));
    push(&mut checks, "k | m", m % k == 0, format!("{m} mod {k} = {}", m % k));
    push(&mut checks, "r <= m <= sigma", k <= m && m <= sigma, format!("{k} <= {m} <= {sigma}"));
    let two_c0_m = BigUint::from(2 * c0) * m;
    push(
        &mut checks,
        "soundness = 2c0*m",
        soundness == two_c0_m,
        format!("{soundness} vs {two_c0_m}"),
    );
    Ok(PipelineParams {
        theorem: "w2".to_string(),
        n: n.to_string(),
        k,
        r: k,
        m,
        c,
        sigma_size: sigma,
        epsilon: show(&epsilon),
        c0: Some(c0),
        sigma_prime_size: None,
        big_r: None,
        big_m: None,
        delta: show(&delta),
        h_squared: show(&h_squared),
        block_length: length.to_string(),
        degenerate: soundness <= completeness,
        completeness: completeness.to_string(),
        soundness: soundness.to_string(),
        log_base: 2,
        checks,
        notes: vec![format!("sigma = next_prime(max(m, ceil(n^(1/k)))) = next_prime(max({m}, {root}))")],
    })
}

/// `(L, log₂ L)` for `L = log₂ n`, refusing `n` too small for `log log n > 0`.
fn logs(n: &BigUint) -> Result<(f64, f64), ReductionError> {
    let l = log2_big(n);
    if !(l > 2.0) {
        return Err(ReductionError::Precondition(format!("log2 n = {l} must exceed 2")));
    }
    Ok((l, l.log2()))
}

/// Second pipeline: `r = ⌊L/LL⌋`, `m ≈ (L/LL)³`, `c = ⌊L/(k·LL)⌋`,
/// `|Σ| ≈ (L/LL)³`, `ε = 1/2`, with `L = log₂ n` and `LL = log₂ L`. The
/// guard `⌊L/LL⌋ ≥ max(2k, floor)` must hold.
pub fn preset_w1(n: &BigUint, k: u64, floor: u64) -> Result<PipelineParams, ReductionError> {
    if k < 2 {
        return Err(ReductionError::SmallK(k));
    }
    let (l, ll) = logs(n)?;
    let q = l / ll;
    let r = q.floor() as u64;
    let guard = (2 * k).max(floor);
    if r < guard {
        return Err(ReductionError::Precondition(format!(
            "floor(log n / log log n) = {r} is below max(2k, {floor}) = {guard}"
        )));
    }
    let m_raw = (q * q * q).floor() as u64;
    let m = k * (m_raw / k);
    let c = (l / (k as f64 * ll)).floor() as u64;
    let sigma = next_prime(m_raw.max(m));
    let epsilon = ratio(1, 2);
    let delta = ratio(m - r, m);
    let h_squared = h_squared_of(&epsilon, &delta);
    let length = BigUint::from(m);
    let completeness = &length * 2u32;
    let soundness = soundness_floor(&length, k, &h_squared, &epsilon, c);

    let mut checks = Vec::new();
    push(&mut checks, "guard", true, format!("{r} >= {guard}"));
    push(&mut checks, "sigma >= m", sigma >= m, format!("{sigma} >= {m}"));
    let sigma_pow = BigUint::from(sigma).pow(r as u32);
    push(&mut checks, "sigma^r >= n", &sigma_pow >= n, format!("{sigma}^{r} >= n"));
    push(&mut checks, "k | m", m.is_multiple_of(k), format!("{m} mod {k} = {}", m % k));
    push(&mut checks, "r <= m <= sigma", r <= m && m <= sigma, format!("{r} <= {m} <= {sigma}"));
    let over_m = l / (2.0 * k as f64 * ll);
    Ok(PipelineParams {
        theorem: "w1".to_string(),
        n: n.to_string(),
        k,
        r,
        m,
        c,
        sigma_size: sigma,
        epsilon: show(&epsilon),
        c0: None,
        sigma_prime_size: None,
        big_r: None,
        big_m: None,
        delta: show(&delta),
        h_squared: show(&h_squared),
        block_length: length.to_string(),
        degenerate: soundness <= completeness,
        completeness: completeness.to_string(),
        soundness: soundness.to_string(),
        log_base: 2,
        checks,
        notes: vec![
            format!("log2 n = {l}, log2 log2 n = {ll}"),
            format!("m = k * floor(floor((L/LL)^3) / k) = {k} * floor({m_raw} / {k}) = {m}"),
            format!("sigma = next_prime(floor((L/LL)^3)) = next_prime({m_raw})"),
            format!("(1-eps)*m*c / m = c/2 ~ L/(2k*LL) = {over_m}"),
        ],
    })
}

/// Third pipeline, with a concatenated code: outer RS over `|Σ| ≈ L²` with
/// `r = 2`, `m = ⌊L²⌋`; inner RS over `Σ' = Σ²` with `R = ⌊L/(4LL)⌋`,
/// `M ≈ L³/(8LL)`; `c = ⌊L/(k·LL)⌋`, `ε = 1/2`. `M` is lowered until
/// `k | mM`.
pub fn preset_derand(n: &BigUint, k: u64) -> Result<PipelineParams, ReductionError> {
    if k < 2 {
        return Err(ReductionError::SmallK(k));
    }
    let (l, ll) = logs(n)?;
    let m = (l * l).floor() as u64;
    let sigma = next_prime(m);
    let sigma_prime = sigma
        .checked_mul(sigma)
        .ok_or_else(|| ReductionError::Precondition(format!("|Σ'| = {sigma}^2 overflows")))?;
    let r = 2u64;
    let big_r = (l / (4.0 * ll)).floor() as u64;
    let big_m_raw = (l * l * l / (8.0 * ll)).floor() as u64;
    let mut big_m = big_m_raw;
    while big_m > 0 && !(m as u128 * big_m as u128).is_multiple_of(k as u128) {
        big_m -= 1;
    }
    if big_r == 0 || big_m < big_r || big_m > sigma_prime || r > m || m > sigma {
        return Err(ReductionError::Precondition(format!(
            "rounding gives R = {big_r}, M = {big_m}, |Σ'| = {sigma_prime}, m = {m}, |Σ| = {sigma}; \
             need 1 <= R <= M <= |Σ'| and 2 <= m <= |Σ|"
        )));
    }
    let c = (l / (k as f64 * ll)).floor() as u64;
    if c == 0 {
        return Err(ReductionError::Precondition(format!("c = floor(L/(k*LL)) = 0 for k = {k}")));
    }
    let epsilon = ratio(1, 2);
    let delta1 = ratio(m - r, m);
    let delta2 = ratio(big_m - big_r, big_m);
    let delta = &delta1 * &delta2;
    let h_squared = h_squared_of(&epsilon, &delta);
    let length = BigUint::from(m) * big_m;
    let completeness = &length * 2u32;
    let soundness = soundness_floor(&length, k, &h_squared, &epsilon, c);

    let mut checks = Vec::new();
    let bits = (r * big_r) as f64 * (sigma as f64).log2();
    let (low, high) = (l - 4.0 * ll, l + l / (2.0 * ll));
    push(
        &mut checks,
        "sigma^(rR) ~ n",
        low < bits && bits <= high,
        format!("log2 sigma^(rR) = {bits} in ({low}, {high}], log2 n = {l}"),
    );
    let unrounded_bits = 2.0 * (l / (4.0 * ll)) * (l * l).log2();
    push(
        &mut checks,
        "unrounded sigma^(rR) = n",
        ((unrounded_bits - l) / l).abs() <= 1e-9,
        format!("2 * (L/(4LL)) * log2(L^2) = {unrounded_bits} vs L = {l}"),
    );
    let formula = l.powi(5) / (8.0 * ll);
    let unrounded = (l * l) * (l * l * l / (8.0 * ll));
    push(
        &mut checks,
        "unrounded mM = L^5/(8LL)",
        ((unrounded - formula) / formula).abs() <= 1e-9,
        format!("{unrounded} vs {formula}"),
    );
    let length_f = length.to_f64().unwrap_or(f64::INFINITY);
    push(
        &mut checks,
        "mM <= L^5/(8LL)",
        length_f <= formula * (1.0 + 1e-12),
        format!("{length} <= {formula}"),
    );
    push(&mut checks, "k | mM", (&length % k).is_zero(), format!("{length} mod {k}"));
    push(
        &mut checks,
        "R <= M <= sigma'",
        big_r <= big_m && big_m <= sigma_prime,
        format!("{big_r} <= {big_m} <= {sigma_prime}"),
    );
    push(&mut checks, "r <= m <= sigma", r <= m && m <= sigma, format!("{r} <= {m} <= {sigma}"));
    let one_minus = (BigRational::one() - &delta).to_f64().unwrap_or(f64::NAN);
    push(
        &mut checks,
        "delta1*delta2 >= 1 - 4/L^2",
        one_minus * l * l <= 4.0 * (1.0 + 1e-12),
        format!("1 - delta = {one_minus}, 4/L^2 = {}", 4.0 / (l * l)),
    );
    let mut notes = vec![
        format!("log2 n = {l}, log2 log2 n = {ll}"),
        format!("sigma = next_prime(floor(L^2)) = next_prime({m}); sigma' = sigma^2"),
        format!("delta1 = 1 - r/m = {}, delta2 = 1 - R/M = {}", show(&delta1), show(&delta2)),
        format!("h ~ L/2 = {}", l / 2.0),
    ];
    if big_m != big_m_raw {
        notes.push(format!("M lowered from {big_m_raw} to {big_m} so that k | mM"));
    }
    Ok(PipelineParams {
        theorem: "derand".to_string(),
        n: n.to_string(),
        k,
        r,
        m,
        c,
        sigma_size: sigma,
        epsilon: show(&epsilon),
        c0: None,
        sigma_prime_size: Some(sigma_prime),
        big_r: Some(big_r),
        big_m: Some(big_m),
        delta: show(&delta),
        h_squared: show(&h_squared),
        block_length: length.to_string(),
        degenerate: soundness <= completeness,
        completeness: completeness.to_string(),
        soundness: soundness.to_string(),
        log_base: 2,
        checks,
        notes,
    })
}
