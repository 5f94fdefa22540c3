//! The counting formulas that locate the domination number of `G(n, p)`.
//!
//! The central quantity is
//!
//! ```text
//! f(n, k, p) = C(n, k) * (1 - (1-p)^k)^(n-k)
//! ```
//!
//! the expected number of dominating `k`-sets of `G(n, p)` (for `k = n` the
//! empty product makes `f = 1` even at `p = 0`). The crossing index `r` is the
//! smallest `k` with `f(n, k, p) > 1/(pn)`; the domination number concentrates
//! on `{r, r+1}`. Around `r` this module also evaluates:
//!
//! * a closed-form estimate of `r`,
//! * Chernoff tails via `phi(x) = (1+x)ln(1+x) - x`,
//! * the overlap-pair weight `Q_i` and the second-moment ratio `E W_i / P_i`
//!   used to bound the variance of the dominating-set count,
//! * the expected directed damage `E Z_uv` of a missing edge, and
//! * a Monte Carlo estimator for the cross-domination probability `P_i`.
//!
//! All heavy products are evaluated in log space ([`crate::logspace`]).

use num_rational::Ratio;
use rand::Rng;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::graph::RandomSource;
use crate::logspace::{
    ln_binom_cdf_below, ln_binom_pmf_table, ln_factorial, log1mexp, LogValue,
};

/// Everything derived from an `(n, p, epsilon)` triple.
///
/// Invariants established by [`FormulaContext::new`]:
/// `p_hat > p`, `1 <= r <= n` with the crossing property
/// (`f(n,r,p) > 1/(pn)` and, for `r > 1`, `f(n,r-1,p) <= 1/(pn)`),
/// `rho = epsilon^2`, and `0 <= heavy_threshold <= r`.
#[derive(Clone, Copy, Debug, Serialize)]
pub struct FormulaContext {
    pub n: u64,
    pub p: f64,
    pub epsilon: f64,
    /// `ln(1 / (1 - p))`, the rate at which `(1-p)^k` decays.
    pub p_hat: f64,
    /// Smallest `k` with `f(n, k, p) > 1/(pn)`.
    pub r: u64,
    /// `epsilon^2`, the density parameter of the heavy/light split.
    pub rho: f64,
    /// `floor(rho * p * r)`: damage contributions with overlap `j` at or
    /// below this threshold are "heavy", the rest "light".
    pub heavy_threshold: u64,
}

impl FormulaContext {
    /// Validate `(n, p, epsilon)` and derive `p_hat`, `r`, `rho`, and the
    /// heavy/light threshold.
    pub fn new(n: u64, p: f64, epsilon: f64) -> Result<Self> {
        if n < 1 {
            return Err(Error::domain("n must be at least 1"));
        }
        if !(p > 0.0 && p < 1.0) {
            return Err(Error::domain(format!(
                "p must lie strictly between 0 and 1, got {p}"
            )));
        }
        if !(epsilon > 0.0) {
            return Err(Error::domain(format!(
                "epsilon must be positive, got {epsilon}"
            )));
        }
        let r = compute_r(n, p)?;
        let p_hat = hat_probability(p);
        let rho = epsilon * epsilon;
        let heavy_threshold = (rho * p * r as f64).floor() as u64;
        if heavy_threshold > r {
            return Err(Error::domain(format!(
                "epsilon = {epsilon} is too large: heavy threshold {heavy_threshold} exceeds r = {r}"
            )));
        }
        Ok(FormulaContext {
            n,
            p,
            epsilon,
            p_hat,
            r,
            rho,
            heavy_threshold,
        })
    }
}

/// `p_hat = ln(1 / (1 - p))`; satisfies `p_hat > p` on `(0, 1)` and
/// `p_hat(1 - 1/e) = 1`.
pub fn hat_probability(p: f64) -> f64 {
    -(-p).ln_1p()
}

/// `ln f(n, k, p)` as a [`LogValue`] of `f` itself.
///
/// Conventions: `f(n, n, p) = 1` for every `p` (empty product), and
/// `f(n, k, 0) = 0` for `k < n`.
pub fn log_f(n: u64, k: u64, p: f64) -> Result<LogValue> {
    if !(1..=n).contains(&k) {
        return Err(Error::domain(format!(
            "k must lie in 1..=n, got k = {k}, n = {n}"
        )));
    }
    if !(0.0..=1.0).contains(&p) {
        return Err(Error::domain(format!(
            "p must lie in [0, 1], got {p}"
        )));
    }
    if k == n {
        return Ok(LogValue::ONE);
    }
    if p == 0.0 {
        return Ok(LogValue::ZERO);
    }
    // ln f = ln C(n,k) + (n-k) ln(1 - (1-p)^k), with (1-p)^k kept in logs.
    let ln_qk = k as f64 * (-p).ln_1p();
    let ln_bracket = log1mexp(ln_qk);
    Ok(LogValue::from_ln(
        crate::logspace::ln_choose(n, k) + (n - k) as f64 * ln_bracket,
    ))
}

/// The crossing index `r`: smallest `k >= 1` with `f(n, k, p) > 1/(pn)`,
/// found by a linear scan (the scan always terminates because
/// `f(n, n, p) = 1 > 1/(pn)`).
///
/// Requires `p * n > 1`; smaller products are a domain error.
pub fn compute_r(n: u64, p: f64) -> Result<u64> {
    if !(p > 0.0 && p <= 1.0) {
        return Err(Error::domain(format!(
            "p must lie in (0, 1], got {p}"
        )));
    }
    if p * n as f64 <= 1.0 {
        return Err(Error::domain(format!(
            "the crossing index needs p*n > 1, got p*n = {}",
            p * n as f64
        )));
    }
    let ln_threshold = -(p.ln() + (n as f64).ln());
    for k in 1..=n {
        if log_f(n, k, p)?.ln() > ln_threshold {
            return Ok(k);
        }
    }
    unreachable!("f(n, n, p) = 1 always exceeds 1/(pn) when pn > 1")
}

/// Closed-form estimate of the crossing index:
/// `ceil((1/p_hat) * ln(p_hat * n / ln^2(pn)))`, floored at 1.
///
/// Requires `pn > e` so the iterated logarithm is positive.
pub fn r_closed_form(n: u64, p: f64) -> Result<u64> {
    if !(p > 0.0 && p < 1.0) {
        return Err(Error::domain(format!(
            "p must lie strictly between 0 and 1, got {p}"
        )));
    }
    let pn = p * n as f64;
    if pn <= std::f64::consts::E {
        return Err(Error::domain(format!(
            "the closed form needs p*n > e, got p*n = {pn}"
        )));
    }
    let p_hat = hat_probability(p);
    let inner = p_hat * n as f64 / pn.ln().powi(2);
    let estimate = (inner.ln() / p_hat).ceil();
    Ok(if estimate < 1.0 { 1 } else { estimate as u64 })
}

/// Chernoff rate function `phi(x) = (1+x)ln(1+x) - x` for `x >= -1`, with the
/// limit `phi(-1) = 1`; `+inf` below the domain.
pub fn chernoff_phi(x: f64) -> f64 {
    if x < -1.0 {
        f64::INFINITY
    } else if x == -1.0 {
        1.0
    } else {
        (1.0 + x) * x.ln_1p() - x
    }
}

/// Lower-tail bound `Pr(X <= (1-delta) mu) <= exp(-mu phi(-delta))` for
/// binomial/hypergeometric `X` with mean `mu`; requires `0 < delta < 1`.
pub fn chernoff_lower_tail(mu: f64, delta: f64) -> Result<f64> {
    if !(mu >= 0.0) {
        return Err(Error::domain(format!("mean must be nonnegative, got {mu}")));
    }
    if !(delta > 0.0 && delta < 1.0) {
        return Err(Error::domain(format!(
            "lower-tail delta must lie in (0, 1), got {delta}"
        )));
    }
    Ok((-mu * chernoff_phi(-delta)).exp())
}

/// Upper-tail bound `Pr(X >= (1+delta) mu) <= exp(-delta^2 mu / (2+delta))`;
/// requires `delta > 0`.
pub fn chernoff_upper_tail(mu: f64, delta: f64) -> Result<f64> {
    if !(mu >= 0.0) {
        return Err(Error::domain(format!("mean must be nonnegative, got {mu}")));
    }
    if !(delta > 0.0) {
        return Err(Error::domain(format!(
            "upper-tail delta must be positive, got {delta}"
        )));
    }
    Ok((-delta * delta * mu / (2.0 + delta)).exp())
}

/// Tail weight `Q_i` of an overlap-`i` pair: the probability that a vertex of
/// the first set sees fewer than `L` of its own set's other members while
/// both "outside" halves stay below the threshold,
///
/// ```text
/// Q_i = sum_{j=0}^{min(i-1, L-1)} Pr(Bin(i-1, p) = j) * Pr(Bin(r-i, p) < L-j)^2
/// ```
///
/// with `L` the context's heavy threshold. `Q_i = 0` whenever `L = 0`.
pub fn q_i(ctx: &FormulaContext, i: u64) -> Result<f64> {
    if !(1..=ctx.r).contains(&i) {
        return Err(Error::domain(format!(
            "overlap i must lie in 1..=r, got i = {i}, r = {}",
            ctx.r
        )));
    }
    let l = ctx.heavy_threshold;
    if l == 0 {
        return Ok(0.0);
    }
    let j_top = (i - 1).min(l - 1);
    let pmf = ln_binom_pmf_table(i - 1, ctx.p, j_top);
    let mut total = 0.0;
    for j in 0..=j_top {
        let own = pmf[j as usize].exp();
        let outside = ln_binom_cdf_below(ctx.r - i, ctx.p, l - j).exp();
        total += own * outside * outside;
    }
    debug_assert!(total <= 1.0 + 1e-9, "Q_i = {total} escaped [0, 1]");
    Ok(total.min(1.0))
}

/// `ln(E W_i / P_i)` for overlap `i`: the count of ordered pairs of
/// dominating `r`-sets sharing exactly `i` vertices, divided by the
/// cross-domination probability `P_i`:
///
/// ```text
/// E W_i / P_i = n! / (i! ((r-i)!)^2 (n-2r+i)!)
///               * (1 - q^i + q^i (1 - q^{r-i})^2)^(n-2r+i),   q = 1 - p.
/// ```
///
/// Domain error when `n - 2r + i < 0` (two `r`-sets with overlap `i` do not
/// fit in `n` vertices). At `i = r` this reduces exactly to `f(n, r, p)`.
pub fn log_ewi_over_pi(ctx: &FormulaContext, i: u64) -> Result<LogValue> {
    let (n, r, p) = (ctx.n, ctx.r, ctx.p);
    if i > r {
        return Err(Error::domain(format!(
            "overlap i must lie in 0..=r, got i = {i}, r = {r}"
        )));
    }
    if n + i < 2 * r {
        return Err(Error::domain(format!(
            "overlap i = {i} is infeasible: n - 2r + i = {} is negative",
            n as i64 - 2 * r as i64 + i as i64
        )));
    }
    let outside = n - 2 * r + i;
    let ln_multinomial = ln_factorial(n)
        - ln_factorial(i)
        - 2.0 * ln_factorial(r - i)
        - ln_factorial(outside);
    if outside == 0 {
        return Ok(LogValue::from_ln(ln_multinomial));
    }
    // Bracket = 1 - q^r (1 + s) with s = 1 - q^{r-i}; evaluated fully in
    // logs so that i = r collapses bitwise onto the log_f bracket.
    let ln_q = (-p).ln_1p();
    let s = -((r - i) as f64 * ln_q).exp_m1();
    let ln_w = r as f64 * ln_q + s.ln_1p();
    let ln_bracket = log1mexp(ln_w);
    Ok(LogValue::from_ln(
        ln_multinomial + outside as f64 * ln_bracket,
    ))
}

/// Expected directed damage of a missing pair,
/// `E Z_uv = (n - r) / (p n (n-1)) * f(n, r, p)`.
pub fn expected_damage(ctx: &FormulaContext) -> LogValue {
    let (n, r, p) = (ctx.n, ctx.r, ctx.p);
    if n == r {
        return LogValue::ZERO;
    }
    let ln_coef =
        ((n - r) as f64).ln() - (p.ln() + (n as f64).ln() + ((n - 1) as f64).ln());
    let f = log_f(n, r, p).expect("context guarantees the domain");
    LogValue::from_ln(f.ln() + ln_coef)
}

/// Monte Carlo estimate of a cross-domination probability.
#[derive(Clone, Copy, Debug, Serialize)]
pub struct PiEstimate {
    /// Estimated probability.
    pub value: f64,
    /// Binomial standard error `sqrt(v(1-v)/samples)`; zero for exact cases.
    pub std_error: f64,
    /// Number of Monte Carlo samples actually drawn (zero for exact cases).
    pub samples: u64,
}

/// Estimate `P_i`: the probability that two fixed `r`-sets `D`, `D'` sharing
/// exactly `i` vertices dominate *each other* across the split — every vertex
/// of `D \ D'` has a `G(n,p)`-neighbor in `D'` and symmetrically.
///
/// Only the `<= 2r - i` involved vertices' adjacency is sampled. Exact
/// short-circuits: `i = r` gives 1, `p = 1` gives 1, `p = 0` with `i < r`
/// gives 0.
pub fn estimate_pi(
    n: u64,
    p: f64,
    r: u64,
    i: u64,
    samples: u64,
    src: RandomSource,
) -> Result<PiEstimate> {
    if !(0.0..=1.0).contains(&p) {
        return Err(Error::domain(format!("p must lie in [0, 1], got {p}")));
    }
    if !(1..=n).contains(&r) {
        return Err(Error::domain(format!("r must lie in 1..=n, got {r}")));
    }
    if i > r {
        return Err(Error::domain(format!(
            "overlap i must lie in 0..=r, got {i}"
        )));
    }
    if 2 * r - i > n {
        return Err(Error::domain(format!(
            "two r-sets with overlap {i} need {} vertices, only n = {n} available",
            2 * r - i
        )));
    }
    if samples == 0 {
        return Err(Error::domain("samples must be at least 1"));
    }
    let exact = |value: f64| PiEstimate {
        value,
        std_error: 0.0,
        samples: 0,
    };
    if i == r {
        return Ok(exact(1.0));
    }
    if p == 1.0 {
        return Ok(exact(1.0));
    }
    if p == 0.0 {
        return Ok(exact(0.0));
    }

    // a = |D \ D'| = |D' \ D|, c = |D ∩ D'|. The relevant pairs are
    // (D\D')×(D'\D) (shared by both directions), (D\D')×(D∩D'), and
    // (D'\D)×(D∩D'); each is one Bernoulli draw.
    let a = (r - i) as usize;
    let c = i as usize;
    let mut rng = src.rng();
    let mut successes = 0u64;
    let mut ab = vec![false; a * a];
    for _ in 0..samples {
        for bit in ab.iter_mut() {
            *bit = rng.random_bool(p);
        }
        let mut ok = true;
        // Every x in D \ D' needs a neighbor in D' = (D'\D) ∪ (D∩D').
        for x in 0..a {
            let mut covered = (0..a).any(|y| ab[x * a + y]);
            if !covered {
                covered = (0..c).any(|_| rng.random_bool(p));
            }
            if !covered {
                ok = false;
            }
        }
        // Every y in D' \ D needs a neighbor in D = (D\D') ∪ (D∩D').
        for y in 0..a {
            let mut covered = (0..a).any(|x| ab[x * a + y]);
            if !covered {
                covered = (0..c).any(|_| rng.random_bool(p));
            }
            if !covered {
                ok = false;
            }
        }
        if ok {
            successes += 1;
        }
    }
    let value = successes as f64 / samples as f64;
    Ok(PiEstimate {
        value,
        std_error: (value * (1.0 - value) / samples as f64).sqrt(),
        samples,
    })
}

/// Exact density of a sorted set of positive integers within `[1, n]`:
/// `|I ∩ [1..n]| / n` as a reduced rational.
pub fn density_prefix(sorted: &[u64], n: u64) -> Result<Ratio<u64>> {
    if n == 0 {
        return Err(Error::domain("density denominator n must be at least 1"));
    }
    for window in sorted.windows(2) {
        if window[0] >= window[1] {
            return Err(Error::domain(
                "density input must be strictly increasing",
            ));
        }
    }
    if sorted.first().is_some_and(|&x| x == 0) {
        return Err(Error::domain("density input must be positive integers"));
    }
    let count = sorted.partition_point(|&x| x <= n) as u64;
    Ok(Ratio::new(count, n))
}
