//! The closed-form regular solution of the symmetrized-Morse well at a
//! trial bound-state energy.
//!
//! On the right half-line x ≥ 0 the substitution
//!
//! ```text
//! t(x) = (2γ₂/α) e^{−α(x−d)},   ψ(x) = t^{−1/2} w(t)
//! ```
//!
//! turns −ψ″ + V_sym ψ = Eψ with E = −k² into the Whittaker equation
//!
//! ```text
//! w″ + (−1/4 + κ/t + (1/4 − μ²)/t²) w = 0,   κ = γ₁²/(αγ₂),   μ = k/α,
//! ```
//!
//! spanned by M_{κ,+μ}(t) ~ t^{μ+1/2} (decaying like e^{−kx} as x → ∞) and
//! M_{κ,−μ}(t) ~ t^{−μ+1/2} (growing like e^{+kx}). The parity condition at
//! the origin — ψ(0)=1, ψ′(0)=0 even; ψ(0)=0, ψ′(0)=1 odd — fixes the mixing
//! coefficients (c_decay, c_grow) through a 2×2 linear system at t₀ = t(0)
//! whose determinant is known analytically: with the basis functionals
//!
//! ```text
//! f_ν = t₀^{−1/2} M_{κ,ν}(t₀),
//! g_ν = α [ (1/2) t₀^{−1/2} M_{κ,ν}(t₀) − t₀^{1/2} M′_{κ,ν}(t₀) ]   (= dψ_ν/dx at 0),
//! ```
//!
//! the determinant f₊g₋ − f₋g₊ = −α·W[M_{κ,μ}, M_{κ,−μ}] = 2αμ = 2k, because
//! the Whittaker Wronskian is the constant −2μ. The numerically computed
//! Wronskian is still compared against −2μ as a precision certificate before
//! any coefficient is released.
//!
//! The growing coefficient c_grow is the tail functional L(E): it vanishes
//! exactly at eigenvalues, and its sign equals the eventual sign of ψ(x→∞).
//! Between two trial energies with equal interior node counts and opposite
//! sign(L) lies exactly one eigenvalue of the sector — the property the
//! bracketing search is built on.

use crate::error::SolverError;
use crate::extended::BigFloat;
use crate::potentials::{v_sym, MorseParams};
use crate::specfun::{
    regularized_mu, whittaker_m_pair_big, whittaker_m_value_big, Accuracy, WhittakerPair,
};
use crate::Parity;

/// A trial bound-state energy E = −k² together with the Whittaker indices it
/// induces for the given potential.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EnergyTrial {
    /// Trial momentum, k > 0 (E = −k²).
    pub k: f64,
    /// First Whittaker index κ = γ₁²/(αγ₂).
    pub kappa: f64,
    /// Second Whittaker index μ = k/α.
    pub mu: f64,
}

impl EnergyTrial {
    /// Derive the indices from a momentum and the potential parameters.
    pub fn new(k: f64, p: &MorseParams) -> Result<Self, SolverError> {
        p.validate()?;
        if !(k > 0.0) || !k.is_finite() {
            return Err(SolverError::Domain(format!(
                "trial momentum must be finite and > 0, got {k}"
            )));
        }
        let kappa = p.gamma1 * p.gamma1 / (p.alpha * p.gamma2);
        let mu = k / p.alpha;
        if !kappa.is_finite() || !mu.is_finite() || !(mu > 0.0) {
            return Err(SolverError::Domain(format!(
                "Whittaker indices must be finite with μ > 0, got κ = {kappa}, μ = {mu}"
            )));
        }
        Ok(EnergyTrial { k, kappa, mu })
    }

    /// The trial energy E = −k².
    pub fn energy(&self) -> f64 {
        -self.k * self.k
    }

    /// Reject a trial whose indices do not belong to `p` (guards against
    /// mixing trials across parameter sets).
    fn check_consistent(&self, p: &MorseParams) -> Result<(), SolverError> {
        let fresh = EnergyTrial::new(self.k, p)?;
        let close = |a: f64, b: f64| (a - b).abs() <= 1e-12 * a.abs().max(b.abs());
        if !close(fresh.kappa, self.kappa) || !close(fresh.mu, self.mu) {
            return Err(SolverError::Domain(format!(
                "trial indices (κ = {}, μ = {}) do not match the supplied potential \
                 (expected κ = {}, μ = {})",
                self.kappa, self.mu, fresh.kappa, fresh.mu
            )));
        }
        Ok(())
    }
}

/// Configuration for building and evaluating regular solutions.
#[derive(Debug, Clone, PartialEq)]
pub struct SolverOptions {
    /// Accuracy request forwarded to every special-function evaluation that
    /// feeds the mixing coefficients.
    pub accuracy: Accuracy,
    /// Series-safety bound on the Whittaker coordinate: requests with
    /// t₀ > t_max fail loudly instead of silently losing digits to
    /// cancellation in the M series.
    pub t_max: f64,
    /// Largest |x| at which a wave may be evaluated.
    pub x_render_max: f64,
    /// Padding added past the outer classical turning point when a node
    /// window is derived from the energy.
    pub node_pad: f64,
    /// Default sampling density for node counting.
    pub node_grid: usize,
}

impl SolverOptions {
    /// Defaults scaled to the potential: t_max = 200, x_render_max = 12/α,
    /// node_pad = 1/α, node_grid = 2000.
    pub fn for_params(p: &MorseParams) -> Self {
        SolverOptions {
            accuracy: Accuracy::new(1e-16, 10_000, 40).expect("static accuracy is valid"),
            t_max: 200.0,
            x_render_max: 12.0 / p.alpha,
            node_pad: 1.0 / p.alpha,
            node_grid: 2000,
        }
    }

    /// Enforce the structural invariants.
    pub fn validate(&self) -> Result<(), SolverError> {
        if !(self.t_max > 0.0) || !self.t_max.is_finite() {
            return Err(SolverError::Domain(format!(
                "t_max must be finite and > 0, got {}",
                self.t_max
            )));
        }
        if !(self.x_render_max > 0.0) || !self.x_render_max.is_finite() {
            return Err(SolverError::Domain(format!(
                "x_render_max must be finite and > 0, got {}",
                self.x_render_max
            )));
        }
        if !(self.node_pad >= 0.0) || !self.node_pad.is_finite() {
            return Err(SolverError::Domain(format!(
                "node_pad must be finite and ≥ 0, got {}",
                self.node_pad
            )));
        }
        if self.node_grid < 200 {
            return Err(SolverError::Domain(format!(
                "node_grid must be at least 200, got {}",
                self.node_grid
            )));
        }
        Ok(())
    }

}

/// Map x ≥ 0 to the Whittaker coordinate t = (2γ₂/α)·e^{−α(x−d)}.
///
/// Strictly decreasing in x, with t(0) = t₀ = (2γ₂/α)e^{αd} the largest value
/// ever used; requests past the series-safety bound `opts.t_max` are refused
/// (deep-barrier wells need the recessive-basis path or higher precision).
pub fn to_whittaker_coordinate(
    x: f64,
    p: &MorseParams,
    opts: &SolverOptions,
) -> Result<f64, SolverError> {
    if !(x >= 0.0) || !x.is_finite() {
        return Err(SolverError::Domain(format!(
            "the Whittaker coordinate is defined on the right half-line, got x = {x}"
        )));
    }
    let t = (2.0 * p.gamma2 / p.alpha) * (-p.alpha * (x - p.shift)).exp();
    if t > opts.t_max {
        return Err(SolverError::Guard(format!(
            "Whittaker coordinate t = {t} at x = {x} exceeds the series-safety bound \
             t_max = {}; the regular M-series would cancel catastrophically there",
            opts.t_max
        )));
    }
    Ok(t)
}

/// A parity-constrained regular solution: the mixing coefficients of the
/// decaying/growing Whittaker members that satisfy the origin normalization
/// (even: ψ(0)=1, ψ′(0)=0; odd: ψ(0)=0, ψ′(0)=1).
#[derive(Debug, Clone)]
pub struct RegularWave {
    /// Potential the wave solves.
    pub params: MorseParams,
    /// Trial energy and indices.
    pub trial: EnergyTrial,
    /// Parity sector.
    pub parity: Parity,
    /// Coefficient of the decaying member M_{κ,+μ}.
    pub c_decay: f64,
    /// Coefficient of the growing member M_{κ,−μ} — the tail functional L(E).
    pub c_grow: f64,
    /// Full-precision coefficients. Near a 2μ-integer degeneracy the basis
    /// members are huge and nearly parallel, and ψ emerges from their
    /// cancellation; combining with f64-rounded coefficients would put an
    /// absolute noise floor of ~|c·M|·ε on every evaluation, which can exceed
    /// ψ itself near the origin. All evaluations combine with these instead.
    c_decay_big: BigFloat,
    c_grow_big: BigFloat,
    /// μ actually used in the basis (nudged off 2μ-integer degeneracies).
    mu_eff: f64,
    /// Whittaker coordinate of the origin.
    t0: f64,
    /// Accuracy that passed the Wronskian certificate (escalated past the
    /// requested accuracy when the basis demanded it).
    acc_used: Accuracy,
    /// Reduced accuracy for node-scan sign decisions, anchored to the largest
    /// coefficient/basis product so the cancellation noise stays ~1e−10·|ψ|.
    scan_acc: Accuracy,
    opts: SolverOptions,
}

/// Evaluate both basis members and assemble (ψ, dψ/dx) at coordinate t from
/// given mixing coefficients, entirely in extended precision.
fn assemble_wave(
    kappa: f64,
    mu_eff: f64,
    alpha: f64,
    t: f64,
    c_decay: &BigFloat,
    c_grow: &BigFloat,
    acc: &Accuracy,
) -> Result<(f64, f64), SolverError> {
    let plus = whittaker_m_pair_big(kappa, mu_eff, t, acc.bits(), acc.rel_tol, acc.max_terms)?;
    let minus = whittaker_m_pair_big(kappa, -mu_eff, t, acc.bits(), acc.rel_tol, acc.max_terms)?;
    let wp = plus.value.precision().max(minus.value.precision());
    let w = &(c_decay * &plus.value) + &(c_grow * &minus.value);
    let dw = &(c_decay * &plus.dvalue) + &(c_grow * &minus.dvalue);
    let t_big = BigFloat::from_f64(t, wp);
    let sqrt_t = t_big.sqrt();
    let inv_sqrt_t = &BigFloat::one(wp) / &sqrt_t;
    let alpha_big = BigFloat::from_f64(alpha, wp);
    let psi = &inv_sqrt_t * &w;
    let dpsi = &alpha_big * &(&psi.mul_pow2(-1) - &(&sqrt_t * &dw));
    Ok((psi.to_f64(), dpsi.to_f64()))
}

/// Solve the 2×2 origin-condition system for the mixing coefficients.
///
/// The right-hand side is the parity normalization; the determinant is the
/// analytic 2k (in the nudged index: 2αμ_eff). The numerically computed basis
/// Wronskian must reproduce −2μ to 1e−8 relative before any coefficient is
/// released; a miss escalates the working accuracy and retries, because near
/// a 2μ-integer degeneracy the growing member's series is amplified by the
/// reciprocal of the nudge and legitimately needs the extra digits. Only
/// after the escalation ladder is exhausted is the system declared singular.
pub fn build_regular(
    p: &MorseParams,
    trial: &EnergyTrial,
    parity: Parity,
    opts: &SolverOptions,
) -> Result<RegularWave, SolverError> {
    p.validate()?;
    opts.validate()?;
    trial.check_consistent(p)?;
    let mu_eff = regularized_mu(trial.mu);
    let t0 = to_whittaker_coordinate(0.0, p, opts)?;
    let mut acc = opts.accuracy.clone();
    let mut last_defect = f64::INFINITY;
    for _attempt in 0..6 {
        let plus =
            whittaker_m_pair_big(trial.kappa, mu_eff, t0, acc.bits(), acc.rel_tol, acc.max_terms)?;
        let minus =
            whittaker_m_pair_big(trial.kappa, -mu_eff, t0, acc.bits(), acc.rel_tol, acc.max_terms)?;
        let wp = plus.value.precision().max(minus.value.precision());

        // Precision certificate: W[M_{κ,μ}, M_{κ,−μ}](t₀) must equal −2μ.
        let wronskian = &(&plus.value * &minus.dvalue) - &(&plus.dvalue * &minus.value);
        let w_f = wronskian.to_f64();
        let target = -2.0 * mu_eff;
        last_defect = if wronskian.is_zero() {
            f64::INFINITY
        } else {
            ((w_f - target) / target).abs()
        };
        if !(last_defect <= 1e-8) {
            // The cancellation ate the digit budget. The defect is linear in
            // the certified tolerance of the basis members (W's error is the
            // product magnitude times that tolerance), so one retry aimed a
            // digit below the gate settles it; the floor guards against a
            // meaningless tolerance when the products were astronomical.
            let boost = if last_defect.is_finite() {
                (last_defect / 1e-9).max(1e4)
            } else {
                1e12
            };
            let rel_new = (acc.rel_tol / boost).max(1e-250);
            let extra_digits = boost.log10().ceil() as u32 + 10;
            acc = Accuracy::new(rel_new, acc.max_terms, acc.working_precision + extra_digits)?;
            continue;
        }

        let basis = |pair: &WhittakerPair| -> (BigFloat, BigFloat) {
            let t_big = BigFloat::from_f64(t0, wp);
            let sqrt_t = t_big.sqrt();
            let inv_sqrt_t = &BigFloat::one(wp) / &sqrt_t;
            let alpha_big = BigFloat::from_f64(p.alpha, wp);
            let f = &inv_sqrt_t * &pair.value;
            let g = &alpha_big * &(&f.mul_pow2(-1) - &(&sqrt_t * &pair.dvalue));
            (f, g)
        };
        let (f_dec, g_dec) = basis(&plus);
        let (f_gro, g_gro) = basis(&minus);
        // det = f₊g₋ − f₋g₊ = 2αμ exactly.
        let det = (&BigFloat::from_f64(p.alpha, wp) * &BigFloat::from_f64(mu_eff, wp)).mul_pow2(1);
        let (c_decay, c_grow) = match parity {
            Parity::Even => (&g_gro / &det, -&(&g_dec / &det)),
            Parity::Odd => (-&(&f_gro / &det), &f_dec / &det),
        };
        // Node scans only decide signs, but every evaluation of ψ is a
        // cancellation between the two coefficient/basis products, which peak
        // at t₀. Anchor the scan tolerance to that peak so the absolute noise
        // floor sits ~1e−10 below the O(1) normalized wave instead of ~1e−10
        // below the (possibly astronomical) products.
        let amp = (&c_decay * &plus.value)
            .to_f64()
            .abs()
            .max((&c_grow * &minus.value).to_f64().abs())
            .clamp(1.0, 1e250);
        let scan_rel = (1e-10 / amp).max(1e-280);
        let scan_digits = 17 + amp.log10().ceil().max(0.0) as u32;
        let scan_acc = Accuracy::new(scan_rel, acc.max_terms, scan_digits)?;
        return Ok(RegularWave {
            params: *p,
            trial: *trial,
            parity,
            c_decay: c_decay.to_f64(),
            c_grow: c_grow.to_f64(),
            c_decay_big: c_decay,
            c_grow_big: c_grow,
            mu_eff,
            t0,
            acc_used: acc,
            scan_acc,
            opts: opts.clone(),
        });
    }
    Err(SolverError::SingularSystem(format!(
        "basis Wronskian at t₀ = {t0} still misses −2μ by {last_defect:.3e} relative after \
         precision escalation; the basis is numerically degenerate"
    )))
}

impl RegularWave {
    /// Whittaker coordinate of the origin for this wave.
    pub fn origin_coordinate(&self) -> f64 {
        self.t0
    }

    /// ψ(x) and dψ/dx. Negative x is produced by parity reflection; |x| must
    /// stay within the configured render window.
    pub fn eval(&self, x: f64) -> Result<(f64, f64), SolverError> {
        if !x.is_finite() || x.abs() > self.opts.x_render_max {
            return Err(SolverError::Guard(format!(
                "evaluation point x = {x} is outside the render window |x| ≤ {}",
                self.opts.x_render_max
            )));
        }
        if x < 0.0 {
            let (v, d) = self.eval(-x)?;
            let s = self.parity.reflection_sign();
            return Ok((s * v, -s * d));
        }
        let t = to_whittaker_coordinate(x, &self.params, &self.opts)?;
        assemble_wave(
            self.trial.kappa,
            self.mu_eff,
            self.params.alpha,
            t,
            &self.c_decay_big,
            &self.c_grow_big,
            &self.acc_used,
        )
    }

    /// Accuracy for node-scan sign decisions: cheaper than the certified
    /// coefficient accuracy, but pre-scaled to clear the cancellation noise
    /// of this wave's basis products (see `build_regular`).
    fn scan_accuracy(&self) -> Accuracy {
        self.scan_acc.clone()
    }

    /// ψ(x) alone on x ≥ 0, at reduced accuracy — enough for sign decisions
    /// during node scans, at a fraction of the coefficient-path cost.
    fn psi_at(&self, x: f64, acc: &Accuracy) -> Result<f64, SolverError> {
        let t = to_whittaker_coordinate(x, &self.params, &self.opts)?;
        let vp = whittaker_m_value_big(
            self.trial.kappa,
            self.mu_eff,
            t,
            acc.bits(),
            acc.rel_tol,
            acc.max_terms,
        )?;
        let vm = whittaker_m_value_big(
            self.trial.kappa,
            -self.mu_eff,
            t,
            acc.bits(),
            acc.rel_tol,
            acc.max_terms,
        )?;
        let w = &(&self.c_decay_big * &vp) + &(&self.c_grow_big * &vm);
        Ok(t.powf(-0.5) * w.to_f64())
    }

    fn sign_at(&self, x: f64, acc: &Accuracy) -> Result<i8, SolverError> {
        let v = self.psi_at(x, acc)?;
        Ok(if v > 0.0 {
            1
        } else if v < 0.0 {
            -1
        } else {
            0
        })
    }
}

/// The tail functional L(E): the coefficient of the growing basis member.
/// L vanishes exactly at sector eigenvalues, and sign(L) is the eventual
/// sign of ψ(x → ∞).
pub fn tail_functional(
    p: &MorseParams,
    trial: &EnergyTrial,
    parity: Parity,
    opts: &SolverOptions,
) -> Result<f64, SolverError> {
    Ok(build_regular(p, trial, parity, opts)?.c_grow)
}

/// Count the interior nodes of the regular solution on (0, x_max].
///
/// Strict sign changes between grid samples are refined by bisection to a
/// width of 1e−10·x_max; a candidate cell is first sub-sampled to rule out
/// multiple crossings hiding inside it (GridTooCoarse if found). Grazing
/// zeros — |ψ| dips without a sign change — are not nodes. The origin anchor
/// sign is +1 for both sectors by the normalization (ψ(0)=1 even,
/// ψ′(0)=1 odd), so a node in the first cell is still detected.
pub fn node_count(
    p: &MorseParams,
    trial: &EnergyTrial,
    parity: Parity,
    x_max: f64,
    n_grid: usize,
    opts: &SolverOptions,
) -> Result<usize, SolverError> {
    let wave = build_regular(p, trial, parity, opts)?;
    node_count_of(&wave, x_max, n_grid)
}

/// [`node_count`] on an already-built wave (reused by classification, which
/// needs the tail sign and the node count from a single construction).
pub(crate) fn node_count_of(
    wave: &RegularWave,
    x_max: f64,
    n_grid: usize,
) -> Result<usize, SolverError> {
    if n_grid < 200 {
        return Err(SolverError::Domain(format!(
            "node grid must have at least 200 cells, got {n_grid}"
        )));
    }
    if !(x_max > 0.0) || !x_max.is_finite() {
        return Err(SolverError::Domain(format!(
            "node window must be finite and > 0, got {x_max}"
        )));
    }
    if !(v_sym(x_max, &wave.params) > wave.trial.energy()) {
        return Err(SolverError::Domain(format!(
            "node window x_max = {x_max} does not reach the classically forbidden region \
             (V_sym(x_max) = {} ≤ E = {})",
            v_sym(x_max, &wave.params),
            wave.trial.energy()
        )));
    }
    let acc = wave.scan_accuracy();
    let dx = x_max / n_grid as f64;
    let mut count = 0usize;
    let mut prev_x = 0.0f64;
    let mut prev_s: i8 = 1;
    for i in 1..=n_grid {
        let x = if i == n_grid { x_max } else { i as f64 * dx };
        let s = wave.sign_at(x, &acc)?;
        if s == 0 {
            continue;
        }
        if s != prev_s {
            refine_crossing(wave, prev_x, prev_s, x, s, &acc, 1e-10 * x_max)?;
            count += 1;
        }
        prev_x = x;
        prev_s = s;
    }
    Ok(count)
}

/// Localize the crossing in [lo, hi] (endpoint signs differ) to `width`,
/// first sub-sampling the cell to detect hidden multiple crossings.
fn refine_crossing(
    wave: &RegularWave,
    lo: f64,
    s_lo: i8,
    hi: f64,
    s_hi: i8,
    acc: &Accuracy,
    width: f64,
) -> Result<(), SolverError> {
    let mut flips = 0usize;
    let mut last = s_lo;
    for j in 1..8 {
        let xj = lo + (hi - lo) * j as f64 / 8.0;
        let s = wave.sign_at(xj, acc)?;
        if s != 0 && s != last {
            flips += 1;
            last = s;
        }
    }
    if s_hi != last {
        flips += 1;
    }
    if flips > 1 {
        return Err(SolverError::GridTooCoarse(format!(
            "cell [{lo}, {hi}] contains {flips} sign changes; refine the node grid"
        )));
    }
    let (mut a, mut b, mut sa) = (lo, hi, s_lo);
    while b - a > width {
        let m = 0.5 * (a + b);
        if m <= a || m >= b {
            break;
        }
        let sm = wave.sign_at(m, acc)?;
        if sm == 0 {
            return Ok(()); // landed exactly on the zero: crossing confirmed
        }
        if sm == sa {
            a = m;
            sa = sm;
        } else {
            b = m;
        }
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numerov::{integrate_outward, ShootingConfig};
    use crate::potentials::outer_turning_point;
    use approx::assert_relative_eq;
    use proptest::prelude::*;

    fn sym_well() -> MorseParams {
        MorseParams::equal_strength(1.0, 1.8, 1.0).unwrap()
    }

    fn opts() -> SolverOptions {
        SolverOptions::for_params(&sym_well())
    }

    fn even_wave(k: f64) -> RegularWave {
        let p = sym_well();
        let trial = EnergyTrial::new(k, &p).unwrap();
        build_regular(&p, &trial, Parity::Even, &opts()).unwrap()
    }

    fn odd_wave(k: f64) -> RegularWave {
        let p = sym_well();
        let trial = EnergyTrial::new(k, &p).unwrap();
        build_regular(&p, &trial, Parity::Odd, &opts()).unwrap()
    }

    #[test]
    fn trial_constructor_checks_momentum_and_indices() {
        let p = sym_well();
        let t = EnergyTrial::new(1.355765, &p).unwrap();
        // κ = γ₁²/(αγ₂) = 1.8²/1.8 for the equal-strength well.
        assert_relative_eq!(t.kappa, 1.8, max_relative = 1e-15);
        assert_relative_eq!(t.mu, 1.355765, max_relative = 1e-15);
        assert_relative_eq!(t.energy(), -1.355765 * 1.355765, max_relative = 1e-15);
        assert!(EnergyTrial::new(0.0, &p).is_err());
        assert!(EnergyTrial::new(-1.0, &p).is_err());
        assert!(EnergyTrial::new(f64::NAN, &p).is_err());
    }

    #[test]
    fn whittaker_coordinate_matches_closed_form() {
        let p = sym_well();
        let o = opts();
        // At x = d the exponent vanishes: t = 2γ₂/α.
        assert_relative_eq!(
            to_whittaker_coordinate(1.0, &p, &o).unwrap(),
            3.6,
            max_relative = 1e-15
        );
        // At the origin t₀ = (2γ₂/α)e^{αd} = 3.6·e.
        assert_relative_eq!(
            to_whittaker_coordinate(0.0, &p, &o).unwrap(),
            9.785814582452563,
            max_relative = 1e-15
        );
        // Strictly decreasing, vanishing at infinity.
        let t1 = to_whittaker_coordinate(1.0, &p, &o).unwrap();
        let t4 = to_whittaker_coordinate(4.0, &p, &o).unwrap();
        let t10 = to_whittaker_coordinate(10.0, &p, &o).unwrap();
        assert!(t1 > t4 && t4 > t10 && t10 > 0.0);
        assert!(t10 < 1e-3);
        assert!(matches!(
            to_whittaker_coordinate(-0.5, &p, &o),
            Err(SolverError::Domain(_))
        ));
    }

    #[test]
    fn deep_barrier_origin_trips_the_series_guard() {
        let p = sym_well();
        let tight = SolverOptions { t_max: 5.0, ..opts() };
        // t₀ ≈ 9.79 > 5 at the origin, but t(2) ≈ 1.32 is fine.
        assert!(matches!(
            to_whittaker_coordinate(0.0, &p, &tight),
            Err(SolverError::Guard(_))
        ));
        assert!(to_whittaker_coordinate(2.0, &p, &tight).is_ok());
        // d = 5 pushes t₀ = 3.6·e⁵ ≈ 534 past the default bound of 200.
        let deep = MorseParams::equal_strength(1.0, 1.8, 5.0).unwrap();
        let trial = EnergyTrial::new(1.0, &deep).unwrap();
        assert!(matches!(
            build_regular(&deep, &trial, Parity::Even, &SolverOptions::for_params(&deep)),
            Err(SolverError::Guard(_))
        ));
    }

    #[test]
    fn even_normalization_holds_at_origin() {
        let wave = even_wave(1.355765);
        let (psi, dpsi) = wave.eval(0.0).unwrap();
        assert!((psi - 1.0).abs() <= 1e-13, "ψ(0) = {psi:.16}");
        assert!(dpsi.abs() <= 1e-12, "ψ′(0) = {dpsi:.3e}");
    }

    #[test]
    fn odd_normalization_holds_at_origin() {
        let wave = odd_wave(1.268113);
        let (psi, dpsi) = wave.eval(0.0).unwrap();
        assert!(psi.abs() <= 1e-13, "ψ(0) = {psi:.3e}");
        assert!((dpsi - 1.0).abs() <= 1e-12, "ψ′(0) = {dpsi:.16}");
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(40))]
        #[test]
        fn parity_reflection_is_exact(
            k in 0.2f64..1.75,
            x in 0.01f64..8.0,
            odd in proptest::bool::ANY,
        ) {
            let wave = if odd { odd_wave(k) } else { even_wave(k) };
            let s = wave.parity.reflection_sign();
            let (v, d) = wave.eval(x).unwrap();
            let (vr, dr) = wave.eval(-x).unwrap();
            // Reflection is implemented analytically, so the identity is exact.
            prop_assert_eq!(vr, s * v);
            prop_assert_eq!(dr, -s * d);
        }
    }

    #[test]
    fn ground_trial_stays_bounded_and_sign_definite() {
        // k very near the even ground level: the growing admixture is tiny,
        // so the profile decays cleanly until noise-scale growth far out.
        let wave = even_wave(1.355765);
        let mut x = 0.0;
        while x <= 6.8 {
            let (psi, _) = wave.eval(x).unwrap();
            assert!(psi > 0.0, "ψ({x}) = {psi:.3e} lost sign-definiteness");
            assert!(psi.abs() < 3.0, "ψ({x}) = {psi:.3e} is unbounded");
            x += 0.2;
        }
    }

    #[test]
    fn bracketing_trials_diverge_to_opposite_signs() {
        let lo = even_wave(1.354);
        let hi = even_wave(1.358);
        let (psi_lo, _) = lo.eval(8.0).unwrap();
        let (psi_hi, _) = hi.eval(8.0).unwrap();
        assert!(
            psi_lo * psi_hi < 0.0,
            "tails at x=8 should have split: {psi_lo:.3e} vs {psi_hi:.3e}"
        );
    }

    #[test]
    fn ode_residual_vanishes_on_the_window() {
        // −ψ″ + (V−E)ψ = 0 with ψ″ from central differences of the analytic
        // first derivative.
        let wave = even_wave(1.355765);
        let p = sym_well();
        let e = wave.trial.energy();
        let delta = 1e-6;
        let mut max_psi = 0.0f64;
        let mut max_residual = 0.0f64;
        let mut x = 0.1;
        while x <= 5.0 {
            let (psi, _) = wave.eval(x).unwrap();
            let (_, d_plus) = wave.eval(x + delta).unwrap();
            let (_, d_minus) = wave.eval(x - delta).unwrap();
            let psi_dd = (d_plus - d_minus) / (2.0 * delta);
            let residual = -psi_dd + (v_sym(x, &p) - e) * psi;
            max_psi = max_psi.max(psi.abs());
            max_residual = max_residual.max(residual.abs());
            x += 0.2;
        }
        assert!(
            max_residual <= 1e-8 * max_psi,
            "residual {max_residual:.3e} vs scale {max_psi:.3e}"
        );
    }

    #[test]
    fn tail_functional_flips_across_even_ground() {
        let p = sym_well();
        let o = opts();
        let l_lo = tail_functional(&p, &EnergyTrial::new(1.354, &p).unwrap(), Parity::Even, &o)
            .unwrap();
        let l_hi = tail_functional(&p, &EnergyTrial::new(1.358, &p).unwrap(), Parity::Even, &o)
            .unwrap();
        assert!(l_lo * l_hi < 0.0, "L(1.354) = {l_lo:.3e}, L(1.358) = {l_hi:.3e}");
    }

    #[test]
    fn tail_functional_flips_across_odd_ground() {
        let p = sym_well();
        let o = opts();
        let l_lo = tail_functional(&p, &EnergyTrial::new(1.268110, &p).unwrap(), Parity::Odd, &o)
            .unwrap();
        let l_hi = tail_functional(&p, &EnergyTrial::new(1.268116, &p).unwrap(), Parity::Odd, &o)
            .unwrap();
        assert!(
            l_lo * l_hi < 0.0,
            "L(1.268110) = {l_lo:.3e}, L(1.268116) = {l_hi:.3e}"
        );
    }

    #[test]
    fn tail_functional_is_continuous_through_the_root() {
        // Scan L(k) across the even ground root: exactly one sign change and
        // no jump discontinuity (second differences stay at the smooth-curve
        // scale, far below the functional's magnitude at the interval ends).
        let p = sym_well();
        let o = opts();
        let scale = tail_functional(&p, &EnergyTrial::new(1.354, &p).unwrap(), Parity::Even, &o)
            .unwrap()
            .abs()
            .max(
                tail_functional(&p, &EnergyTrial::new(1.358, &p).unwrap(), Parity::Even, &o)
                    .unwrap()
                    .abs(),
            );
        let n = 800usize;
        let (k_lo, k_hi) = (1.355760, 1.355770);
        let mut values = Vec::with_capacity(n + 1);
        for i in 0..=n {
            let k = k_lo + (k_hi - k_lo) * i as f64 / n as f64;
            values.push(
                tail_functional(&p, &EnergyTrial::new(k, &p).unwrap(), Parity::Even, &o).unwrap(),
            );
        }
        let flips = values
            .windows(2)
            .filter(|w| w[0].signum() != w[1].signum())
            .count();
        assert_eq!(flips, 1, "expected exactly one root crossing in the window");
        let max_jump = values
            .windows(3)
            .map(|w| (w[2] - 2.0 * w[1] + w[0]).abs())
            .fold(0.0f64, f64::max);
        assert!(
            max_jump <= 1e-6 * scale,
            "second difference {max_jump:.3e} vs scale {scale:.3e}"
        );
    }

    #[test]
    fn ground_trials_have_no_interior_nodes() {
        let p = sym_well();
        let o = opts();
        let even = EnergyTrial::new(1.355765, &p).unwrap();
        assert_eq!(node_count(&p, &even, Parity::Even, 6.5, 2000, &o).unwrap(), 0);
        // The odd origin zero is parity-imposed, not an interior node.
        let odd = EnergyTrial::new(1.268113, &p).unwrap();
        assert_eq!(node_count(&p, &odd, Parity::Odd, 6.5, 2000, &o).unwrap(), 0);
    }

    #[test]
    fn node_count_steps_between_levels() {
        let p = sym_well();
        let o = opts();
        // Far below the ground level (even below the well bottom): node-free,
        // with the tail functional on the below-ground side (positive).
        let deep = EnergyTrial::new(2.5, &p).unwrap();
        assert_eq!(node_count(&p, &deep, Parity::Even, 6.5, 2000, &o).unwrap(), 0);
        assert!(tail_functional(&p, &deep, Parity::Even, &o).unwrap() > 0.0);
        // Between the two even levels (k₀ ≈ 1.3558, k₁ ≈ 0.4011): one node.
        let mid = EnergyTrial::new(0.8, &p).unwrap();
        assert_eq!(node_count(&p, &mid, Parity::Even, 6.5, 2000, &o).unwrap(), 1);
        // Between the two odd levels (k₀ ≈ 1.2681, k₁ ≈ 0.2476): one node.
        let mid_odd = EnergyTrial::new(0.6, &p).unwrap();
        assert_eq!(node_count(&p, &mid_odd, Parity::Odd, 6.5, 2000, &o).unwrap(), 1);
        // Above both even levels: two nodes.
        let shallow = EnergyTrial::new(0.3, &p).unwrap();
        assert_eq!(node_count(&p, &shallow, Parity::Even, 8.0, 2000, &o).unwrap(), 2);
    }

    #[test]
    fn node_count_is_monotone_along_the_energy_grid() {
        // Oscillation theorem: per sector, the node count is a non-decreasing
        // step function of E (k decreasing). Fixed window, 200-point grid.
        let p = sym_well();
        let o = opts();
        let n_pts = 200usize;
        let (k_top, k_bot) = (1.85f64, 0.12f64);
        let ratio = (k_bot / k_top).powf(1.0 / (n_pts - 1) as f64);
        let mut k = k_top;
        let mut prev = 0usize;
        for _ in 0..n_pts {
            let trial = EnergyTrial::new(k, &p).unwrap();
            // Window 8 keeps V(x_max) > E down to k = 0.12 (E = −0.0144).
            let n = node_count(&p, &trial, Parity::Even, 8.0, 240, &o).unwrap();
            assert!(
                n >= prev,
                "node count dropped from {prev} to {n} at k = {k:.6}"
            );
            prev = n;
            k *= ratio;
        }
        assert!(prev >= 2, "grid should end above both even levels, saw {prev}");
    }

    #[test]
    fn matches_independent_finite_difference_profile() {
        // The same IVP integrated by the Numerov scheme must reproduce the
        // closed-form profile pointwise.
        let p = sym_well();
        let wave = even_wave(1.355765);
        let cfg = ShootingConfig { x_max: 16.0, h_step: 1e-4, match_tol: 1e-10 };
        let profile = integrate_outward(&p, wave.trial.energy(), Parity::Even, &cfg).unwrap();
        let mut x = 0.5;
        while x <= 6.0 {
            let (psi, _) = wave.eval(x).unwrap();
            let psi_fd = profile.value_at(x);
            assert!(
                (psi_fd - psi).abs() <= 1e-7 * psi.abs(),
                "at x = {x}: closed form {psi:.12e} vs finite difference {psi_fd:.12e}"
            );
            x += 0.5;
        }
    }

    #[test]
    fn node_counts_agree_with_finite_difference_oracle_at_random_energies() {
        let p = sym_well();
        let o = opts();
        let cfg = ShootingConfig { x_max: 16.0, h_step: 1e-4, match_tol: 1e-10 };
        // Small linear-congruential stream: deterministic, dependency-free.
        let mut state = 0x2545F4914F6CDD1Du64;
        let mut next_k = || {
            state = state.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
            let u = (state >> 11) as f64 / (1u64 << 53) as f64;
            0.2 + u * (1.75 - 0.2)
        };
        for i in 0..20 {
            let k = next_k();
            let parity = if i % 2 == 0 { Parity::Even } else { Parity::Odd };
            let trial = EnergyTrial::new(k, &p).unwrap();
            let x_turn = outer_turning_point(trial.energy(), &p).unwrap();
            let window = (x_turn + 1.0).min(8.0) + 0.0371;
            let analytic = node_count(&p, &trial, parity, window, 600, &o).unwrap();
            let profile = integrate_outward(&p, trial.energy(), parity, &cfg).unwrap();
            let discrete = profile.node_count_up_to(window);
            assert_eq!(
                analytic, discrete,
                "node counts split at k = {k:.8} ({parity}): analytic {analytic}, discrete {discrete}"
            );
        }
    }

    #[test]
    fn render_window_bounds_evaluation() {
        let wave = even_wave(1.0);
        assert!(matches!(wave.eval(12.5), Err(SolverError::Guard(_))));
        assert!(matches!(wave.eval(-12.5), Err(SolverError::Guard(_))));
        assert!(wave.eval(11.9).is_ok());
    }

    #[test]
    fn options_and_trial_mismatches_are_rejected() {
        let p = sym_well();
        let trial = EnergyTrial::new(1.0, &p).unwrap();
        let bad_grid = SolverOptions { node_grid: 100, ..opts() };
        assert!(matches!(
            build_regular(&p, &trial, Parity::Even, &bad_grid),
            Err(SolverError::Domain(_))
        ));
        let other = MorseParams::equal_strength(1.0, 1.0, 1.0).unwrap();
        assert!(matches!(
            build_regular(&other, &trial, Parity::Even, &opts()),
            Err(SolverError::Domain(_))
        ));
        assert!(matches!(
            node_count(&p, &trial, Parity::Even, 6.0, 100, &opts()),
            Err(SolverError::Domain(_))
        ));
        // Window that never reaches the forbidden region: k²  tiny, window short.
        let shallow = EnergyTrial::new(0.05, &p).unwrap();
        assert!(matches!(
            node_count(&p, &shallow, Parity::Even, 2.0, 400, &opts()),
            Err(SolverError::Domain(_))
        ));
    }
}
