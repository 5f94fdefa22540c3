//! Log-domain scalar arithmetic.
//!
//! Counting formulas multiply binomial coefficients against powers of
//! probabilities, which over- and underflows `f64` long before the inputs get
//! interesting. Everything here therefore works on natural logarithms:
//! [`LogValue`] wraps a nonnegative real stored as `ln(magnitude)` (zero is
//! `-inf`), and the free functions provide stable building blocks
//! (`ln C(n,k)`, binomial pmf/cdf by recurrence, log-sum-exp).

use std::ops::{Div, Mul};

/// A nonnegative real number represented by the natural log of its magnitude.
///
/// Zero is encoded as `-inf`. Values are totally ordered (the representation
/// is never NaN), and products/quotients never overflow for the graph sizes
/// this crate targets.
#[derive(Clone, Copy, Debug, PartialEq, PartialOrd)]
pub struct LogValue(f64);

impl LogValue {
    pub const ZERO: LogValue = LogValue(f64::NEG_INFINITY);
    pub const ONE: LogValue = LogValue(0.0);

    /// Value `e^ln`. `-inf` encodes zero; NaN is rejected.
    pub fn from_ln(ln: f64) -> Self {
        assert!(!ln.is_nan(), "LogValue from NaN");
        LogValue(ln)
    }

    /// Wrap an ordinary nonnegative float.
    pub fn from_value(x: f64) -> Self {
        assert!(x >= 0.0, "LogValue from negative value {x}");
        LogValue(x.ln())
    }

    /// Natural log of the magnitude (`-inf` for zero).
    pub fn ln(self) -> f64 {
        self.0
    }

    /// The magnitude as `f64`; may over- or underflow for extreme exponents.
    pub fn value(self) -> f64 {
        self.0.exp()
    }

    pub fn is_zero(self) -> bool {
        self.0 == f64::NEG_INFINITY
    }

    /// Raise to a nonnegative power, with the convention `0^0 = 1`.
    pub fn pow(self, exponent: f64) -> Self {
        if exponent == 0.0 {
            LogValue::ONE
        } else {
            LogValue(self.0 * exponent)
        }
    }

    /// Sum an iterator of values using one log-sum-exp pass.
    pub fn sum(values: impl IntoIterator<Item = LogValue>) -> Self {
        let logs: Vec<f64> = values.into_iter().map(|v| v.0).collect();
        LogValue(log_sum_exp(&logs))
    }
}

impl Mul for LogValue {
    type Output = LogValue;
    fn mul(self, rhs: LogValue) -> LogValue {
        if self.is_zero() || rhs.is_zero() {
            LogValue::ZERO
        } else {
            LogValue(self.0 + rhs.0)
        }
    }
}

impl Div for LogValue {
    type Output = LogValue;
    fn div(self, rhs: LogValue) -> LogValue {
        assert!(!rhs.is_zero(), "LogValue division by zero");
        if self.is_zero() {
            LogValue::ZERO
        } else {
            LogValue(self.0 - rhs.0)
        }
    }
}

/// `ln(1 - e^a)` for `a <= 0`, switching between `ln(-expm1 a)` and
/// `ln1p(-exp a)` at `-ln 2` to keep full precision at both ends.
pub fn log1mexp(a: f64) -> f64 {
    debug_assert!(a <= 0.0, "log1mexp domain: a = {a}");
    if a == 0.0 {
        f64::NEG_INFINITY
    } else if a > -std::f64::consts::LN_2 {
        (-a.exp_m1()).ln()
    } else {
        (-a.exp()).ln_1p()
    }
}

/// `ln(sum e^x)` over the slice; `-inf` for an empty or all-zero sum.
pub fn log_sum_exp(xs: &[f64]) -> f64 {
    let m = xs.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    if m == f64::NEG_INFINITY {
        return f64::NEG_INFINITY;
    }
    let sum: f64 = xs.iter().map(|&x| (x - m).exp()).sum();
    m + sum.ln()
}

/// `ln(n!)` via `lgamma`.
pub fn ln_factorial(n: u64) -> f64 {
    libm::lgamma((n + 1) as f64)
}

/// `ln C(n, k)`; `-inf` when `k > n` (no ways).
pub fn ln_choose(n: u64, k: u64) -> f64 {
    if k > n {
        return f64::NEG_INFINITY;
    }
    ln_factorial(n) - ln_factorial(k) - ln_factorial(n - k)
}

/// Logs of `Pr(Bin(m, p) = j)` for `j = 0..=min(j_max, m)`, computed by the
/// stable ratio recurrence in log space.
pub fn ln_binom_pmf_table(m: u64, p: f64, j_max: u64) -> Vec<f64> {
    assert!((0.0..=1.0).contains(&p), "probability out of range: {p}");
    let top = j_max.min(m);
    let mut table = Vec::with_capacity(top as usize + 1);
    if p <= 0.0 {
        table.push(0.0);
        table.extend((1..=top).map(|_| f64::NEG_INFINITY));
        return table;
    }
    if p >= 1.0 {
        table.extend((0..=top).map(|j| if j == m { 0.0 } else { f64::NEG_INFINITY }));
        return table;
    }
    let ln_odds = p.ln() - (-p).ln_1p();
    let mut ln_pmf = m as f64 * (-p).ln_1p();
    table.push(ln_pmf);
    for j in 0..top {
        ln_pmf += ((m - j) as f64).ln() - ((j + 1) as f64).ln() + ln_odds;
        table.push(ln_pmf);
    }
    table
}

/// `ln Pr(Bin(m, p) = j)`.
pub fn ln_binom_pmf(m: u64, p: f64, j: u64) -> f64 {
    if j > m {
        return f64::NEG_INFINITY;
    }
    *ln_binom_pmf_table(m, p, j).last().unwrap()
}

/// `ln Pr(Bin(m, p) < limit)` (strict); `-inf` when `limit == 0`, `0.0` when
/// `limit > m`.
pub fn ln_binom_cdf_below(m: u64, p: f64, limit: u64) -> f64 {
    if limit == 0 {
        return f64::NEG_INFINITY;
    }
    if limit > m {
        return 0.0;
    }
    log_sum_exp(&ln_binom_pmf_table(m, p, limit - 1))
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_bigint::BigUint;

    fn exact_choose(n: u64, k: u64) -> BigUint {
        let mut acc = BigUint::from(1u32);
        for i in 0..k.min(n - k) {
            acc = acc * BigUint::from(n - i) / BigUint::from(i + 1);
        }
        acc
    }

    /// High-precision `ln` of a big integer: split off the top bits as an
    /// exact mantissa and add the discarded exponent back as `bits * ln 2`.
    fn ln_big(x: &BigUint) -> f64 {
        let bits = x.bits();
        if bits <= 52 {
            let v: u64 = x.try_into().expect("fits");
            return (v as f64).ln();
        }
        let shift = bits - 52;
        let top: u64 = (x >> shift).try_into().expect("52 bits fit");
        (top as f64).ln() + shift as f64 * std::f64::consts::LN_2
    }

    #[test]
    fn ln_choose_matches_exact_binomials() {
        for n in [1u64, 5, 10, 40, 100, 500] {
            for k in 0..=n.min(12) {
                let exact = ln_big(&exact_choose(n, k));
                let got = ln_choose(n, k);
                assert!(
                    (got - exact).abs() <= 1e-8 * exact.abs().max(1.0),
                    "ln C({n},{k}): {got} vs {exact}"
                );
            }
        }
        let exact = ln_big(&exact_choose(4096, 2048));
        assert!((ln_choose(4096, 2048) - exact).abs() < 1e-8 * exact);
    }

    #[test]
    fn ln_choose_out_of_range_is_zero_ways() {
        assert_eq!(ln_choose(3, 4), f64::NEG_INFINITY);
    }

    #[test]
    fn logvalue_arithmetic() {
        let a = LogValue::from_value(3.0);
        let b = LogValue::from_value(4.0);
        assert!(((a * b).value() - 12.0).abs() < 1e-12);
        assert!(((a / b).value() - 0.75).abs() < 1e-12);
        assert!((LogValue::sum([a, b]).value() - 7.0).abs() < 1e-12);
        assert_eq!(LogValue::ZERO * a, LogValue::ZERO);
        assert!(a < b);
        assert_eq!(LogValue::ZERO.pow(0.0), LogValue::ONE);
        assert!(LogValue::ZERO.pow(3.0).is_zero());
    }

    #[test]
    fn log1mexp_accuracy() {
        // Large negative a: 1 - e^a ~ 1.
        assert!((log1mexp(-50.0) - (-(-50.0f64).exp()).ln_1p()).abs() < 1e-15);
        // Tiny a: 1 - e^a ~ -a.
        let a = -1e-12;
        assert!((log1mexp(a) - (-a).ln()).abs() < 1e-9);
        assert_eq!(log1mexp(0.0), f64::NEG_INFINITY);
    }

    #[test]
    fn binom_pmf_sums_to_one() {
        for &(m, p) in &[(10u64, 0.3), (25, 0.5), (40, 0.9), (7, 0.0), (7, 1.0)] {
            let table = ln_binom_pmf_table(m, p, m);
            let total = log_sum_exp(&table);
            assert!(total.abs() < 1e-10, "Bin({m},{p}) sums to exp({total})");
        }
    }

    #[test]
    fn binom_pmf_matches_direct_formula() {
        let m = 30;
        let p = 0.37f64;
        for j in 0..=m {
            let direct = ln_choose(m, j)
                + j as f64 * p.ln()
                + (m - j) as f64 * (1.0 - p).ln();
            let got = ln_binom_pmf(m, p, j);
            assert!((got - direct).abs() < 1e-9, "j={j}: {got} vs {direct}");
        }
    }

    #[test]
    fn binom_cdf_edges() {
        assert_eq!(ln_binom_cdf_below(10, 0.4, 0), f64::NEG_INFINITY);
        assert_eq!(ln_binom_cdf_below(10, 0.4, 11), 0.0);
        // Pr(Bin(3, 0.5) < 2) = 1/8 + 3/8 = 1/2.
        assert!((ln_binom_cdf_below(3, 0.5, 2) - 0.5f64.ln()).abs() < 1e-12);
    }

    #[test]
    fn log_sum_exp_handles_extremes() {
        assert_eq!(log_sum_exp(&[]), f64::NEG_INFINITY);
        assert_eq!(log_sum_exp(&[f64::NEG_INFINITY]), f64::NEG_INFINITY);
        let big = log_sum_exp(&[1e7, 1e7]);
        assert!((big - (1e7 + std::f64::consts::LN_2)).abs() < 1e-6);
    }
}
