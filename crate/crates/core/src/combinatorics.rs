//! Exact binomial and multinomial counts, reflection-principle bounds on the
//! number of words far from the standard word, and the two asymptotic
//! estimators used for large `n`.

use num_bigint::{BigInt, BigUint};
use num_rational::{BigRational, Ratio};
use num_traits::{One, ToPrimitive, Zero};
use serde::Serialize;
use statrs::function::gamma::ln_gamma;

use crate::error::{Error, Result};
use crate::metrics;
use crate::words::{self, Word};

pub type BigCount = BigUint;

/// Largest `n` for which the estimators use exact big-integer arithmetic.
pub const EXACT_LIMIT: u64 = 10_000;

/// `C(a, b)`, zero when `b < 0` or `b > a`.
pub fn binomial(a: u64, b: i64) -> BigCount {
    if b < 0 || b as u64 > a {
        return BigUint::zero();
    }
    let b = (b as u64).min(a - b as u64);
    let mut acc = BigUint::one();
    for i in 1..=b {
        acc *= a - b + i;
        acc /= i;
    }
    acc
}

/// `(Σ parts)! / Π parts!`.
pub fn multinomial(parts: &[u64]) -> BigCount {
    let mut acc = BigUint::one();
    let mut seen = 0u64;
    for &p in parts {
        seen += p;
        acc *= binomial(seen, p as i64);
    }
    acc
}

/// Multinomial with signed parts; zero if any part is negative.
fn multinomial_signed(parts: &[i64]) -> BigCount {
    if parts.iter().any(|&p| p < 0) {
        return BigUint::zero();
    }
    multinomial(&parts.iter().map(|&p| p as u64).collect::<Vec<_>>())
}

/// `2·C(2n, n − M + 1)`: the reflection bound on the number of two-letter
/// words with `ρ∞(w, w_st) ≥ M/n`.
pub fn reflection_bound(n: u64, m: u64) -> Result<BigCount> {
    if m == 0 || m > n {
        return Err(Error::Range(format!("M = {m} must lie in 1..={n}")));
    }
    Ok(binomial(2 * n, n as i64 - m as i64 + 1) * 2u32)
}

/// `2N²·(Nn; n−M, n+M, n, …, n)`: the bound on the number of words in
/// `W_n^(N)` with `ρ∞(w, w_st) ≥ (2M + 2)/n`.
pub fn multinomial_reflection_bound(n: u64, m: u64, alphabet: usize) -> Result<BigCount> {
    if alphabet < 2 {
        return Err(Error::UnsupportedAlphabet {
            found: alphabet,
            context: "need N ≥ 2",
        });
    }
    let mut parts = vec![n as i64; alphabet];
    parts[0] = n as i64 - m as i64;
    parts[1] = n as i64 + m as i64;
    Ok(multinomial_signed(&parts) * (2 * alphabet * alphabet) as u64)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ProportionBound {
    pub n: usize,
    pub alphabet: usize,
    /// Threshold on `ρ∞(w, w_st)`, as an exact fraction.
    pub threshold: String,
    /// The `M` the applicable bound was instantiated with, if any.
    pub m: Option<u64>,
    #[serde(serialize_with = "serialize_big")]
    pub count_far: BigCount,
    #[serde(serialize_with = "serialize_big")]
    pub total: BigCount,
    #[serde(serialize_with = "serialize_big")]
    pub bound: BigCount,
    pub ratio: f64,
}

fn serialize_big<S: serde::Serializer>(v: &BigUint, s: S) -> Result<S::Ok, S::Error> {
    s.serialize_str(&v.to_string())
}

impl ProportionBound {
    pub fn holds(&self) -> bool {
        self.count_far <= self.bound
    }
}

/// Counts words with `ρ∞(w, w_st) ≥ threshold` by enumeration and attaches
/// the applicable counting bound.
///
/// For two letters the bound is `2·C(2n, n−M+1)` with `M = ⌊threshold·n⌋`.
/// For `N ≥ 3` it is the multinomial bound with the largest `M` satisfying
/// `(2M + 2)/n ≤ threshold`. When no `M` applies the bound is the total.
pub fn count_words_far(
    n: usize,
    threshold: Ratio<u64>,
    alphabet: usize,
) -> Result<ProportionBound> {
    let wst = words::standard_word(n, alphabet)?;
    let mut count_far = 0u64;
    let mut total = 0u64;
    for w in words::enumerate_words(n, alphabet)? {
        total += 1;
        if metrics::rho_inf(&w, &wst)?.ratio() >= threshold {
            count_far += 1;
        }
    }
    let total_big = BigUint::from(total);
    let scaled = threshold * Ratio::from_integer(n as u64);
    let (m, bound) = if alphabet == 2 {
        let m = scaled.to_integer();
        if m == 0 {
            (None, total_big.clone())
        } else {
            (
                Some(m),
                binomial(2 * n as u64, n as i64 - m as i64 + 1) * 2u32,
            )
        }
    } else {
        // (2M + 2) ≤ threshold·n
        let scaled = scaled.to_integer();
        if scaled < 2 {
            (None, total_big.clone())
        } else {
            let m = (scaled - 2) / 2;
            (
                Some(m),
                multinomial_reflection_bound(n as u64, m, alphabet)?,
            )
        }
    };
    Ok(ProportionBound {
        n,
        alphabet,
        threshold: threshold.to_string(),
        m,
        ratio: count_far as f64 / total as f64,
        count_far: BigUint::from(count_far),
        total: total_big,
        bound,
    })
}

/// `H(ε) = (1+ε)ln(1+ε) + (1−ε)ln(1−ε)` with `0·ln 0 = 0`.
pub fn entropy_h(eps: f64) -> Result<f64> {
    if !(0.0..=1.0).contains(&eps) {
        return Err(Error::Domain(format!("ε = {eps} must lie in [0, 1]")));
    }
    let xlnx = |x: f64| if x == 0.0 { 0.0 } else { x * x.ln() };
    Ok(xlnx(1.0 + eps) + xlnx(1.0 - eps))
}

/// `C(2n, k) / C(2n, n)` as an exact fraction.
pub fn central_binomial_ratio(n: u64, k: i64) -> BigRational {
    BigRational::new(
        BigInt::from(binomial(2 * n, k)),
        BigInt::from(binomial(2 * n, n as i64)),
    )
}

fn ln_binomial(a: f64, b: f64) -> f64 {
    ln_gamma(a + 1.0) - ln_gamma(b + 1.0) - ln_gamma(a - b + 1.0)
}

/// `ln(C(2n, k) / C(2n, n))`, exactly for `n ≤ EXACT_LIMIT`, via log-gamma above.
fn central_ratio_ln(n: u64, k: i64) -> f64 {
    if k < 0 || k as u64 > 2 * n {
        return f64::NEG_INFINITY;
    }
    if n <= EXACT_LIMIT {
        ratio_ln(&central_binomial_ratio(n, k))
    } else {
        let two_n = 2.0 * n as f64;
        ln_binomial(two_n, k as f64) - ln_binomial(two_n, n as f64)
    }
}

fn ln_big(x: &BigInt) -> f64 {
    let shift = x.bits().saturating_sub(64);
    (x >> shift as usize).to_f64().unwrap_or(f64::NAN).ln() + shift as f64 * std::f64::consts::LN_2
}

/// Natural log of a positive big rational.
pub fn ratio_ln(r: &BigRational) -> f64 {
    ln_big(r.numer()) - ln_big(r.denom())
}

/// Converts a big rational to the nearest-ish `f64` without overflowing on
/// numerators and denominators far beyond the `f64` range.
pub fn ratio_to_f64(r: &BigRational) -> f64 {
    if r.numer().is_zero() {
        return 0.0;
    }
    let (num, den) = (r.numer(), r.denom());
    let shift_n = num.bits().saturating_sub(64) as i64;
    let shift_d = den.bits().saturating_sub(64) as i64;
    let nf = (num >> shift_n as usize).to_f64().unwrap_or(f64::NAN);
    let df = (den >> shift_d as usize).to_f64().unwrap_or(f64::NAN);
    let e = shift_n - shift_d;
    nf / df * 2f64.powi(e as i32)
}

/// Both sides of the large-deviation estimate, kept as logarithms since
/// they underflow `f64` already for moderate `n`.
///
/// `asymptotic` carries the prefactor `√(1 − ε²)`. Stirling's formula gives
/// `1/√(1 − ε²)` instead, so `exact/asymptotic → 1/(1 − ε²)`; the `refined`
/// form uses the Stirling prefactor and its quotient does tend to 1.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct LargeDeviation {
    /// `ln(C(2n, n − ⌊nε⌋) / C(2n, n))`.
    pub ln_exact: f64,
    /// `ln(√(1 − ε²)·e^{−H(ε) n})`.
    pub ln_asymptotic: f64,
    /// `ln(e^{−H(ε) n} / √(1 − ε²))`.
    pub ln_refined: f64,
}

impl LargeDeviation {
    pub fn exact(&self) -> f64 {
        self.ln_exact.exp()
    }

    pub fn asymptotic(&self) -> f64 {
        self.ln_asymptotic.exp()
    }

    /// exact / asymptotic.
    pub fn quotient(&self) -> f64 {
        (self.ln_exact - self.ln_asymptotic).exp()
    }

    /// exact / refined.
    pub fn refined_quotient(&self) -> f64 {
        (self.ln_exact - self.ln_refined).exp()
    }
}

pub fn large_deviation_ratio(n: u64, eps: f64) -> Result<LargeDeviation> {
    if !(eps > 0.0 && eps < 1.0) || n == 0 {
        return Err(Error::Domain(format!(
            "need n ≥ 1 and 0 < ε < 1, got n = {n}, ε = {eps}"
        )));
    }
    let shift = (n as f64 * eps).floor() as i64;
    let ln_exact = central_ratio_ln(n, n as i64 - shift);
    let half_ln = 0.5 * (1.0 - eps * eps).ln();
    let rate = entropy_h(eps)? * n as f64;
    Ok(LargeDeviation {
        ln_exact,
        ln_asymptotic: half_ln - rate,
        ln_refined: -half_ln - rate,
    })
}

fn stirling_shift(n: u64, p: f64) -> Result<i64> {
    let root = (n as f64).sqrt() * p;
    if p.is_nan() || p <= 0.0 || !root.is_finite() || root > n as f64 || n == 0 {
        return Err(Error::Domain(format!(
            "need p > 0 and √n·p ≤ n, got n = {n}, p = {p}"
        )));
    }
    Ok(root.floor() as i64)
}

/// `2·C(2n, n − ⌊√n·p⌋ + 1) / C(2n, n)`, the proportion bound on words with
/// `ρ∞(w, w_st) ≥ p/√n`.
pub fn stirling_proportion(n: u64, p: f64) -> Result<f64> {
    let k = stirling_shift(n, p)?;
    Ok(2.0 * central_ratio_ln(n, n as i64 - k + 1).exp())
}

/// Exact form of [`stirling_proportion`].
pub fn stirling_proportion_exact(n: u64, p: f64) -> Result<BigRational> {
    let k = stirling_shift(n, p)?;
    Ok(central_binomial_ratio(n, n as i64 - k + 1) * BigRational::from_integer(2.into()))
}

/// Both sides of `(Nn; n−M, n+M, n, …) / (Nn; n, …, n) = C(2n, n−M) / C(2n, n)`.
pub fn multinomial_ratio_identity(
    n: u64,
    m: u64,
    alphabet: usize,
) -> Result<(BigRational, BigRational)> {
    if m > n {
        return Err(Error::Range(format!("M = {m} must lie in 0..={n}")));
    }
    if alphabet < 2 {
        return Err(Error::UnsupportedAlphabet {
            found: alphabet,
            context: "need N ≥ 2",
        });
    }
    let mut parts = vec![n; alphabet];
    parts[0] = n - m;
    parts[1] = n + m;
    let lhs = BigRational::new(
        BigInt::from(multinomial(&parts)),
        BigInt::from(multinomial(&vec![n; alphabet])),
    );
    let rhs = central_binomial_ratio(n, n as i64 - m as i64);
    Ok((lhs, rhs))
}

/// Brute-force tally of `{w : ρ∞(w, w_st) ≥ M/n}` for two letters.
pub fn count_far_brute(n: usize, m: u64) -> Result<u64> {
    let wst = words::standard_word(n, 2)?;
    let threshold = Ratio::new(m, n as u64);
    let mut count = 0;
    for w in words::enumerate_words(n, 2)? {
        if metrics::rho_inf(&w, &wst)?.ratio() >= threshold {
            count += 1;
        }
    }
    Ok(count)
}

/// `n·τ(w) ≥ M` tally, the quantity the multinomial bound actually counts.
pub fn count_span_at_least(words: &[Word], m: u64) -> usize {
    words
        .iter()
        .filter(|w| {
            metrics::tau(w).ratio() * Ratio::from_integer(w.n() as u64) >= Ratio::from_integer(m)
        })
        .count()
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_traits::FromPrimitive;

    fn factorial(k: u64) -> BigUint {
        (1..=k).fold(BigUint::one(), |acc, i| acc * i)
    }

    #[test]
    fn binomial_examples() {
        assert_eq!(binomial(4, 2), BigUint::from(6u32));
        assert_eq!(binomial(16, 8), BigUint::from(12870u32));
        assert_eq!(binomial(4, -1), BigUint::zero());
        assert_eq!(binomial(4, 5), BigUint::zero());
    }

    #[test]
    fn binomial_and_multinomial_match_factorials() {
        for a in 0..=30u64 {
            for b in 0..=a {
                let oracle = factorial(a) / (factorial(b) * factorial(a - b));
                assert_eq!(binomial(a, b as i64), oracle, "C({a},{b})");
            }
        }
        for x in 0..=10u64 {
            for y in 0..=10u64 {
                for z in 0..=10u64 {
                    let oracle =
                        factorial(x + y + z) / (factorial(x) * factorial(y) * factorial(z));
                    assert_eq!(multinomial(&[x, y, z]), oracle);
                }
            }
        }
    }

    #[test]
    fn multinomial_examples() {
        assert_eq!(multinomial(&[2, 2, 2]), BigUint::from(90u32));
        assert_eq!(multinomial(&[1, 3, 2]), BigUint::from(60u32));
        assert_eq!(multinomial(&[7]), BigUint::one());
    }

    #[test]
    fn reflection_bound_examples() {
        assert_eq!(reflection_bound(2, 2).unwrap(), BigUint::from(8u32));
        assert_eq!(reflection_bound(5, 1).unwrap(), binomial(10, 5) * 2u32);
        assert!(reflection_bound(2, 0).is_err());
        assert!(reflection_bound(2, 3).is_err());
    }

    #[test]
    fn count_words_far_examples() {
        let pb = count_words_far(2, Ratio::from_integer(1), 2).unwrap();
        assert_eq!(pb.count_far, BigUint::from(5u32));
        assert_eq!(pb.bound, BigUint::from(8u32));
        assert_eq!(count_far_brute(2, 2).unwrap(), 5);

        let pb = count_words_far(2, Ratio::from_integer(0), 2).unwrap();
        assert_eq!(pb.count_far, pb.total);
        assert_eq!(pb.count_far, BigUint::from(6u32));

        let pb = count_words_far(3, Ratio::new(2, 3), 2).unwrap();
        assert_eq!(pb.bound, BigUint::from(30u32));
        assert!(pb.holds());
        assert_eq!(pb.total, BigUint::from(20u32));
    }

    #[test]
    fn entropy_examples() {
        assert_eq!(entropy_h(0.0).unwrap(), 0.0);
        assert!((entropy_h(1.0).unwrap() - 2.0 * 2f64.ln()).abs() < 1e-15);
        let expected = 1.5 * 1.5f64.ln() + 0.5 * 0.5f64.ln();
        assert!((entropy_h(0.5).unwrap() - expected).abs() < 1e-15);
        assert!((entropy_h(0.5).unwrap() - 0.2616).abs() < 1e-4);
        assert!(entropy_h(-0.1).is_err());
        assert!(entropy_h(1.1).is_err());
    }

    #[test]
    fn entropy_is_non_negative_on_grid() {
        for i in 0..=1000 {
            assert!(entropy_h(i as f64 / 1000.0).unwrap() >= 0.0);
        }
    }

    #[test]
    fn large_deviation_examples() {
        let ld = large_deviation_ratio(4, 0.5).unwrap();
        assert!((ld.exact() - 28.0 / 70.0).abs() < 1e-14);
        let ld = large_deviation_ratio(10_000, 0.3).unwrap();
        assert!((ld.quotient() - 1.0 / 0.91).abs() < 1e-3, "{ld:?}");
        assert!((0.99..=1.01).contains(&ld.refined_quotient()), "{ld:?}");
        // at fixed n the asymptotic form tends to 1 as ε shrinks
        let tiny = large_deviation_ratio(10, 1e-9).unwrap();
        assert!((tiny.asymptotic() - 1.0).abs() < 1e-12);
        assert!(large_deviation_ratio(4, 0.0).is_err());
        assert!(large_deviation_ratio(4, 1.0).is_err());
    }

    #[test]
    fn log_gamma_path_agrees_with_exact_path() {
        let n = 9_000u64;
        let k = n as i64 - 150;
        let exact = ratio_to_f64(&central_binomial_ratio(n, k));
        let two_n = 2.0 * n as f64;
        let lg = (ln_binomial(two_n, k as f64) - ln_binomial(two_n, n as f64)).exp();
        assert!((exact / lg - 1.0).abs() < 1e-8, "{exact} vs {lg}");
    }

    #[test]
    fn stirling_examples() {
        let exact = stirling_proportion_exact(4, 1.0).unwrap();
        assert_eq!(exact, BigRational::new(112.into(), 70.into()));
        assert!((stirling_proportion(4, 1.0).unwrap() - 1.6).abs() < 1e-14);
        // ⌊√n·p⌋ = 0 leaves 2·C(2n, n+1)/C(2n, n) = 2n/(n+1)
        let edge = stirling_proportion_exact(4, 0.1).unwrap();
        assert_eq!(edge, BigRational::new(8.into(), 5.into()));
        let big = stirling_proportion(1_000_000, 2.0).unwrap();
        assert!(big <= 1.1 * 2.0 * (-4f64).exp(), "{big}");
        assert!(stirling_proportion(4, 0.0).is_err());
        assert!(stirling_proportion(4, 3.0).is_err());
    }

    #[test]
    fn multinomial_ratio_examples() {
        let (lhs, rhs) = multinomial_ratio_identity(2, 1, 3).unwrap();
        assert_eq!(lhs, BigRational::new(2.into(), 3.into()));
        assert_eq!(lhs, rhs);
        let (lhs, rhs) = multinomial_ratio_identity(5, 0, 4).unwrap();
        assert_eq!(lhs, BigRational::from_integer(1.into()));
        assert_eq!(rhs, lhs);
        let (lhs, rhs) = multinomial_ratio_identity(3, 2, 4).unwrap();
        assert_eq!(lhs, rhs);
        assert!(multinomial_ratio_identity(3, 4, 3).is_err());
    }

    #[test]
    fn ratio_to_f64_handles_huge_values() {
        let r = BigRational::new(
            BigInt::from(binomial(4000, 1900)),
            BigInt::from(binomial(4000, 2000)),
        );
        let v = ratio_to_f64(&r);
        assert!(v > 0.0 && v < 1.0);
        let third = BigRational::new(BigInt::from_u64(1).unwrap(), BigInt::from_u64(3).unwrap());
        assert!((ratio_to_f64(&third) - 1.0 / 3.0).abs() < 1e-16);
    }
}
