//! Confluent hypergeometric and Whittaker functions for real arguments.
//!
//! The Kummer function is summed directly,
//!
//! ```text
//! M(a,b,z) = Σ_{n≥0} (a)_n z^n / ((b)_n n!),
//! ```
//!
//! and the Whittaker pair is built on top of it:
//!
//! ```text
//! M_{κ,μ}(z) = e^{−z/2} z^{μ+1/2} M(μ−κ+1/2, 1+2μ, z),
//! W_{κ,μ}(z) = Γ(−2μ)/Γ(1/2−μ−κ) · M_{κ,μ}(z) + Γ(2μ)/Γ(1/2+μ−κ) · M_{κ,−μ}(z).
//! ```
//!
//! Everything is summed in software extended precision (`crate::extended`)
//! with explicit truncation and rounding budgets: a result is only returned
//! once the tail bound and the accumulated-rounding bound are both below the
//! requested relative tolerance *of the final sum*, raising the working
//! precision geometrically when cancellation would otherwise eat the budget.
//! This keeps alternating series (z < 0) and the strongly cancelling
//! M-pair combination inside `W` honest without any asymptotic expansions;
//! the intended argument range is the moderate-z regime (z ≲ a few hundred)
//! where the Taylor series is reliable at extended precision.

use crate::error::SolverError;
use crate::extended::{gamma, BigFloat, MIN_PREC};

/// Accuracy request for every evaluation in this module.
///
/// `rel_tol` is the certified relative error of the returned value,
/// `max_terms` caps the series length, and `working_precision` is the
/// *starting* number of decimal digits carried internally (raised
/// automatically when cancellation demands it).
#[derive(Debug, Clone, PartialEq)]
pub struct Accuracy {
    /// Relative tolerance of the returned value (0 < rel_tol < 1).
    pub rel_tol: f64,
    /// Hard cap on the number of series terms (≥ 10).
    pub max_terms: usize,
    /// Starting internal precision in decimal digits (≥ 16).
    pub working_precision: u32,
}

impl Default for Accuracy {
    fn default() -> Self {
        Accuracy { rel_tol: 1e-14, max_terms: 10_000, working_precision: 34 }
    }
}

impl Accuracy {
    /// Validated constructor.
    pub fn new(rel_tol: f64, max_terms: usize, working_precision: u32) -> Result<Self, SolverError> {
        if !(rel_tol > 0.0 && rel_tol < 1.0) {
            return Err(SolverError::Domain(format!(
                "relative tolerance must be in (0,1), got {rel_tol}"
            )));
        }
        if max_terms < 10 {
            return Err(SolverError::Domain(format!(
                "series cap must be at least 10, got {max_terms}"
            )));
        }
        if working_precision < 16 {
            return Err(SolverError::Domain(format!(
                "working precision must be at least 16 decimal digits, got {working_precision}"
            )));
        }
        Ok(Accuracy { rel_tol, max_terms, working_precision })
    }

    /// Starting binary precision corresponding to `working_precision` digits.
    pub(crate) fn bits(&self) -> u32 {
        let b = (self.working_precision as f64 * std::f64::consts::LOG2_10).ceil() as u32;
        b.max(MIN_PREC)
    }
}

/// Number of bits a relative tolerance corresponds to (rounded up).
fn tol_bits(rel_tol: f64) -> i64 {
    (-rel_tol.log2()).ceil() as i64
}

/// Absolute ceiling for the working precision of any single evaluation.
fn precision_cap(base_bits: u32) -> u32 {
    8192.max(16 * base_bits)
}

/// Outcome of a single fixed-precision pass over the Kummer series.
struct SeriesPass {
    sum: BigFloat,
    /// Largest `hi_pos` any term reached (tracks the cancellation ceiling).
    max_term_hi: i64,
    terms_used: usize,
}

/// One pass of Σ (a)_n z^n / ((b)_n n!) at fixed binary precision `wp`.
///
/// Terms are generated by the exact-ratio recurrence
/// t_{n+1} = t_n · (a+n) z / ((b+n)(n+1)), with (a+n) and (b+n) formed in
/// extended precision so no Pochhammer digits are lost. Summation stops once
/// the index is past the guaranteed-decay point n ≥ 2|z|+|a|+|b|+10 (from
/// there on |t_{n+1}/t_n| ≤ 1/2, so the tail is at most twice the last term)
/// and three consecutive terms sit `tail_bits` below the running sum.
///
/// `a` and `b` are extended-precision values: callers that combine several
/// series (the Whittaker connection formula, Wronskian identities) must feed
/// parameter sets that satisfy their defining relations *exactly*, because
/// any inconsistency between, say, the series parameters and the matching Γ
/// arguments is amplified by the e^{z} growth of the cancelling parts.
fn kummer_series_pass(
    a: &BigFloat,
    b: &BigFloat,
    z: &BigFloat,
    wp: u32,
    tail_bits: i64,
    max_terms: usize,
) -> Result<SeriesPass, SolverError> {
    let a_big = a.with_prec(wp);
    let b_big = b.with_prec(wp);
    let z_big = z.with_prec(wp);
    let mut term = BigFloat::one(wp);
    let mut sum = BigFloat::one(wp);
    let mut max_term_hi: i64 = term.hi_pos();
    let n_decay =
        (2.0 * z.to_f64().abs() + a.to_f64().abs() + b.to_f64().abs() + 10.0) as usize;
    let mut consecutive_small = 0usize;

    for n in 0..max_terms {
        let an = &a_big + &BigFloat::from_u64(n as u64, wp);
        if an.is_zero() {
            // (a)_{n+1} = 0: the series terminates exactly here.
            return Ok(SeriesPass { sum, max_term_hi, terms_used: n + 1 });
        }
        let bn = &b_big + &BigFloat::from_u64(n as u64, wp);
        if bn.is_zero() {
            return Err(SolverError::Domain(format!(
                "Kummer series pole: b + n = 0 at n = {n} (b = {}) before termination",
                b.to_f64()
            )));
        }
        let np1 = BigFloat::from_u64(n as u64 + 1, wp);
        term = &(&(&term * &an) * &z_big) / &(&bn * &np1);
        sum = &sum + &term;
        max_term_hi = max_term_hi.max(term.hi_pos());

        if n + 1 >= n_decay && term.hi_pos() <= sum.hi_pos() - tail_bits {
            consecutive_small += 1;
            if consecutive_small >= 3 {
                return Ok(SeriesPass { sum, max_term_hi, terms_used: n + 2 });
            }
        } else {
            consecutive_small = 0;
        }
    }
    Err(SolverError::Convergence(format!(
        "Kummer series did not meet the tolerance within {max_terms} terms \
         (a = {}, b = {}, z = {})",
        a.to_f64(),
        b.to_f64(),
        z.to_f64()
    )))
}

/// Kummer M(a,b,z) certified to `rel_tol` relative error of the value itself,
/// raising the working precision until the accumulated rounding error is
/// provably below the budget even under cancellation.
pub(crate) fn kummer_m_big(
    a: &BigFloat,
    b: &BigFloat,
    z: f64,
    base_bits: u32,
    rel_tol: f64,
    max_terms: usize,
) -> Result<BigFloat, SolverError> {
    kummer_m_bigz(a, b, &BigFloat::from_f64(z, 64), base_bits, rel_tol, max_terms)
}

/// [`kummer_m_big`] with an extended-precision argument, for coordinates
/// (such as the origin coordinate of a strongly shifted well) whose digits
/// matter beyond f64.
pub(crate) fn kummer_m_bigz(
    a: &BigFloat,
    b: &BigFloat,
    z: &BigFloat,
    base_bits: u32,
    rel_tol: f64,
    max_terms: usize,
) -> Result<BigFloat, SolverError> {
    let needed = tol_bits(rel_tol);
    let tail_bits = needed + 4;
    let cap = precision_cap(base_bits);
    let mut wp = base_bits + 32;
    loop {
        let pass = kummer_series_pass(a, b, z, wp, tail_bits, max_terms)?;
        if pass.sum.is_zero() {
            // Only an exactly terminating sum can cancel to zero; it is exact.
            return Ok(pass.sum);
        }
        // Each term costs a handful of correctly-truncated operations, each
        // within 1 ulp at wp of a value no larger than the largest term, so
        // the accumulated rounding error is below 5 N · 2^(max_term_hi − wp).
        let log_ops = (5.0 * pass.terms_used as f64).log2().ceil() as i64;
        let rounding_hi = pass.max_term_hi - wp as i64 + log_ops;
        if rounding_hi <= pass.sum.hi_pos() - needed - 2 {
            return Ok(pass.sum);
        }
        wp *= 2;
        if wp > cap {
            return Err(SolverError::Convergence(format!(
                "Kummer series cancellation exhausted the precision ceiling of {cap} bits \
                 (a = {}, b = {}, z = {})",
                a.to_f64(),
                b.to_f64(),
                z.to_f64()
            )));
        }
    }
}

/// Precision at which series parameters are assembled from f64 inputs: wide
/// enough that sums like μ − κ + 1/2 of double-precision values are exact,
/// so parameter sets that must satisfy algebraic relations actually do.
fn param_prec(base_bits: u32) -> u32 {
    (base_bits + 32).max(192)
}

/// M(a,b,z) to the requested accuracy.
pub fn kummer_m(a: f64, b: f64, z: f64, acc: &Accuracy) -> Result<f64, SolverError> {
    let pp = param_prec(acc.bits());
    let a_big = BigFloat::from_f64(a, pp);
    let b_big = BigFloat::from_f64(b, pp);
    Ok(kummer_m_big(&a_big, &b_big, z, acc.bits(), acc.rel_tol, acc.max_terms)?.to_f64())
}

/// d/dz M(a,b,z) = (a/b) · M(a+1, b+1, z).
pub fn kummer_m_dz(a: f64, b: f64, z: f64, acc: &Accuracy) -> Result<f64, SolverError> {
    if b == 0.0 {
        return Err(SolverError::Domain(
            "derivative prefactor a/b is undefined at b = 0".to_string(),
        ));
    }
    let pp = param_prec(acc.bits());
    let one = BigFloat::one(pp);
    let a1 = &BigFloat::from_f64(a, pp) + &one;
    let b1 = &BigFloat::from_f64(b, pp) + &one;
    let m2 = kummer_m_big(&a1, &b1, z, acc.bits(), acc.rel_tol, acc.max_terms)?;
    let wp = m2.precision();
    let ratio = &BigFloat::from_f64(a, wp) / &BigFloat::from_f64(b, wp);
    Ok((&ratio * &m2).to_f64())
}

/// A Whittaker function value together with its z-derivative, kept in
/// extended precision for downstream linear algebra.
#[derive(Debug, Clone)]
pub(crate) struct WhittakerPair {
    pub value: BigFloat,
    pub dvalue: BigFloat,
}

/// Reject the forbidden second index: 1 + 2μ must not be zero or a negative
/// integer (the M series denominator would hit a pole before termination).
fn check_whittaker_mu(mu: f64) -> Result<(), SolverError> {
    let b = 1.0 + 2.0 * mu;
    if b <= 0.0 && b == b.round() {
        return Err(SolverError::Domain(format!(
            "Whittaker M undefined: 1 + 2μ = {b} is zero or a negative integer (μ = {mu})"
        )));
    }
    Ok(())
}

fn check_positive_z(z: f64) -> Result<(), SolverError> {
    if !(z > 0.0) || !z.is_finite() {
        return Err(SolverError::Domain(format!(
            "Whittaker functions require z > 0, got z = {z}"
        )));
    }
    Ok(())
}

/// e^{−z/2} z^{μ+1/2} at precision `wp` (z > 0).
fn whittaker_prefactor(mu: f64, z: f64, wp: u32) -> BigFloat {
    let z_big = BigFloat::from_f64(z, wp);
    let half = BigFloat::from_f64(0.5, wp);
    let em = (-&z_big.mul_pow2(-1)).exp();
    let zp = z_big.pow_real(&(&BigFloat::from_f64(mu, wp) + &half));
    &em * &zp
}

/// The Kummer parameters of M_{κ,μ}: a = μ − κ + 1/2 and b = 1 + 2μ, summed
/// in extended precision so both are exact dyadic functions of (κ, μ). The
/// exactness matters: identities between the ±μ branches (the Wronskian, the
/// W connection formula) hold only for parameter sets satisfying the defining
/// relations exactly, and a stray half-ulp in a or b is amplified by the
/// e^{z} growth of the individually-large parts those identities cancel.
fn whittaker_series_params(kappa: f64, mu: f64, pp: u32) -> (BigFloat, BigFloat) {
    let half = BigFloat::from_f64(0.5, pp);
    let mu_big = BigFloat::from_f64(mu, pp);
    let kap_big = BigFloat::from_f64(kappa, pp);
    let a = &(&mu_big - &kap_big) + &half;
    let b = &BigFloat::one(pp) + &mu_big.mul_pow2(1);
    (a, b)
}

/// Assemble M_{κ,μ}(z) and d/dz M_{κ,μ}(z) from precomputed series
/// parameters (a, b) = (μ−κ+1/2, 1+2μ).
///
/// The derivative uses the product rule on the defining representation:
/// d/dz M_{κ,μ} = e^{−z/2} z^{μ+1/2} [(−1/2 + (μ+1/2)/z)·M(a,b,z) + (a/b)·M(a+1,b+1,z)].
fn whittaker_pair_from_params(
    a: &BigFloat,
    b: &BigFloat,
    mu: f64,
    z: f64,
    base_bits: u32,
    rel_tol: f64,
    max_terms: usize,
) -> Result<WhittakerPair, SolverError> {
    let one = BigFloat::one(a.precision());
    let a1 = a + &one;
    let b1 = b + &one;
    let s = kummer_m_big(a, b, z, base_bits, rel_tol, max_terms)?;
    let s2 = kummer_m_big(&a1, &b1, z, base_bits, rel_tol, max_terms)?;
    let wp = s.precision().max(s2.precision()).max(base_bits + 32);
    let pre = whittaker_prefactor(mu, z, wp);
    let z_big = BigFloat::from_f64(z, wp);
    let half = BigFloat::from_f64(0.5, wp);
    let mu_big = BigFloat::from_f64(mu, wp);
    // (−1/2 + (μ+1/2)/z)
    let slope = &(-&half) + &(&(&mu_big + &half) / &z_big);
    let ratio = &a.with_prec(wp) / &b.with_prec(wp);
    let value = &pre * &s;
    let dvalue = &pre * &(&(&slope * &s) + &(&ratio * &s2));
    Ok(WhittakerPair { value, dvalue })
}

/// M_{κ,μ}(z) alone, in extended precision.
pub(crate) fn whittaker_m_value_big(
    kappa: f64,
    mu: f64,
    z: f64,
    base_bits: u32,
    rel_tol: f64,
    max_terms: usize,
) -> Result<BigFloat, SolverError> {
    check_positive_z(z)?;
    check_whittaker_mu(mu)?;
    let (a, b) = whittaker_series_params(kappa, mu, param_prec(base_bits));
    let s = kummer_m_big(&a, &b, z, base_bits, rel_tol, max_terms)?;
    let pre = whittaker_prefactor(mu, z, s.precision().max(base_bits + 32));
    Ok(&pre * &s)
}

/// M_{κ,μ}(z) and d/dz M_{κ,μ}(z) in extended precision.
pub(crate) fn whittaker_m_pair_big(
    kappa: f64,
    mu: f64,
    z: f64,
    base_bits: u32,
    rel_tol: f64,
    max_terms: usize,
) -> Result<WhittakerPair, SolverError> {
    check_positive_z(z)?;
    check_whittaker_mu(mu)?;
    let (a, b) = whittaker_series_params(kappa, mu, param_prec(base_bits));
    whittaker_pair_from_params(&a, &b, mu, z, base_bits, rel_tol, max_terms)
}

/// M_{κ,μ}(z) to the requested accuracy.
pub fn whittaker_m(kappa: f64, mu: f64, z: f64, acc: &Accuracy) -> Result<f64, SolverError> {
    Ok(whittaker_m_value_big(kappa, mu, z, acc.bits(), acc.rel_tol, acc.max_terms)?.to_f64())
}

/// d/dz M_{κ,μ}(z) to the requested accuracy.
pub fn whittaker_m_dz(kappa: f64, mu: f64, z: f64, acc: &Accuracy) -> Result<f64, SolverError> {
    Ok(whittaker_m_pair_big(kappa, mu, z, acc.bits(), acc.rel_tol, acc.max_terms)?
        .dvalue
        .to_f64())
}

/// Move μ off (half-)integer degeneracies of 2μ, where the second Whittaker
/// solution degenerates and the two-M connection formula has cancelling
/// poles. The relative offset of 1e−13 approximates the degenerate limit to
/// ~1e−13 relative accuracy; results at such μ carry that extra error.
pub(crate) fn regularized_mu(mu: f64) -> f64 {
    let two = 2.0 * mu;
    if (two - two.round()).abs() < 1e-12 {
        if mu.abs() < 5e-13 {
            // Near μ = 0 a relative offset cannot escape the degeneracy.
            5e-14
        } else {
            mu * (1.0 + 1e-13)
        }
    } else {
        mu
    }
}

/// Connection coefficient Γ(num)/Γ(den) at precision `wp`.
///
/// An exact non-positive-integer `den` is a Γ pole in the denominator, so the
/// coefficient is exactly zero — that is the bound-state/terminating case in
/// which W collapses onto a single M. (`num` is kept off poles by the μ
/// regularization before this is called.)
fn gamma_ratio(num: &BigFloat, den: &BigFloat, wp: u32) -> Result<BigFloat, SolverError> {
    if den.is_zero() || (den.sign() < 0 && den.is_integer()) {
        return Ok(BigFloat::zero(wp));
    }
    let g_num = gamma(num, wp).map_err(|e| {
        SolverError::Domain(format!(
            "Γ({}) in the connection coefficient: {e}",
            num.to_f64()
        ))
    })?;
    let g_den = gamma(den, wp).map_err(|e| {
        SolverError::Domain(format!(
            "Γ({}) in the connection coefficient: {e}",
            den.to_f64()
        ))
    })?;
    Ok(&g_num / &g_den)
}

/// W_{κ,μ}(z) and d/dz W_{κ,μ}(z) in extended precision via the two-M
/// connection formula, with the tolerance retargeted after measuring how many
/// bits the combination cancels (the pair grows like e^{+z/2} while W decays
/// like e^{−z/2}, so large z cancels ~z/ln 2 bits by construction).
pub(crate) fn whittaker_w_pair_big(
    kappa: f64,
    mu: f64,
    z: f64,
    base_bits: u32,
    rel_tol: f64,
    max_terms: usize,
) -> Result<WhittakerPair, SolverError> {
    check_positive_z(z)?;
    let mu_eff = regularized_mu(mu);
    let nudged = mu_eff != mu;
    let cap = precision_cap(base_bits) as i64;
    // Both branches and both Γ coefficients are built from one exact set of
    // parameter values: the Γ denominator of each coefficient IS the Kummer
    // a-parameter of the branch it multiplies the *other* way around
    // (1/2 − μ − κ = a₋ and 1/2 + μ − κ = a₊), and sharing the identical
    // extended-precision objects keeps the e^{+z/2} parts of the two addends
    // cancelling to working precision instead of to f64 rounding.
    let pp = param_prec(base_bits);
    let (a_plus, b_plus) = whittaker_series_params(kappa, mu_eff, pp);
    let (a_minus, b_minus) = whittaker_series_params(kappa, -mu_eff, pp);
    let two_mu = BigFloat::from_f64(mu_eff, pp).mul_pow2(1);
    let mut inner_tol = rel_tol / 8.0;
    loop {
        let bits = (base_bits as i64).max(tol_bits(inner_tol) + 16) as u32;
        let plus =
            whittaker_pair_from_params(&a_plus, &b_plus, mu_eff, z, bits, inner_tol, max_terms)?;
        let minus =
            whittaker_pair_from_params(&a_minus, &b_minus, -mu_eff, z, bits, inner_tol, max_terms)?;
        let wp = plus
            .value
            .precision()
            .max(minus.value.precision())
            .max(bits + 32);
        let c1 = gamma_ratio(&(-&two_mu), &a_minus, wp)?;
        let c2 = gamma_ratio(&two_mu, &a_plus, wp)?;
        let t1 = &c1 * &plus.value;
        let t2 = &c2 * &minus.value;
        let value = &t1 + &t2;
        let dvalue = &(&c1 * &plus.dvalue) + &(&c2 * &minus.dvalue);
        let big_hi = t1.hi_pos().max(t2.hi_pos());
        let out_hi = if value.is_zero() { big_hi - wp as i64 } else { value.hi_pos() };
        // Each addend is accurate to inner_tol of itself; after cancelling
        // big_hi − out_hi bits the combination is accurate to
        // inner_tol · 2^(big_hi − out_hi) of the result.
        let cancel = (big_hi - out_hi).max(0);
        if inner_tol * (cancel as f64).exp2() <= rel_tol {
            return Ok(WhittakerPair { value, dvalue });
        }
        inner_tol = rel_tol * (-(cancel as f64 + 8.0)).exp2();
        if tol_bits(inner_tol) + 64 > cap {
            return Err(if nudged {
                SolverError::NotImplementedFallback(format!(
                    "W_{{κ,μ}} at 2μ ≈ integer (μ = {mu}): the regularized-μ evaluation \
                     exceeded the precision ceiling; no logarithmic-solution path is \
                     implemented for this regime"
                ))
            } else {
                SolverError::Convergence(format!(
                    "W_{{κ,μ}} connection cancellation exhausted the precision ceiling \
                     (κ = {kappa}, μ = {mu}, z = {z})"
                ))
            });
        }
    }
}

/// W_{κ,μ}(z) to the requested accuracy (recessive solution as z → ∞).
pub fn whittaker_w(kappa: f64, mu: f64, z: f64, acc: &Accuracy) -> Result<f64, SolverError> {
    Ok(whittaker_w_pair_big(kappa, mu, z, acc.bits(), acc.rel_tol, acc.max_terms)?
        .value
        .to_f64())
}

/// d/dz W_{κ,μ}(z) to the requested accuracy.
pub fn whittaker_w_dz(kappa: f64, mu: f64, z: f64, acc: &Accuracy) -> Result<f64, SolverError> {
    Ok(whittaker_w_pair_big(kappa, mu, z, acc.bits(), acc.rel_tol, acc.max_terms)?
        .dvalue
        .to_f64())
}
