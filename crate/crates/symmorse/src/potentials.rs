//! Morse-type wells on the line: the basic exponential well, its left-right
//! symmetrization, the sign-flipped single-well variant, and the closed-form
//! full-line spectrum. Units are ℏ = 2m = 1 throughout, so energies carry
//! inverse-length-squared units and the Schrödinger operator is −d²/dx² + V.
//!
//! The basic well is
//!
//! V(x) = −2γ₁² e^{−αx} + γ₂² e^{−2αx},
//!
//! an attractive exponential tail behind a steeper exponential core (α > 0,
//! γ₂ > 0). It dips to −γ₁⁴/γ₂² at x* = ln(γ₂²/γ₁²)/α and vanishes from
//! below as x → +∞. The symmetrized profile
//!
//! V_sym(x) = V(−d + |x|)
//!
//! glues the shifted well to its mirror image: for d > x* this is a double
//! well with a central barrier of height V(−d) ≈ γ₂² e^{2αd}, kinked (but
//! continuous) at the origin; for d below x* the two minima merge into a
//! single barrier-free dip. −V_sym turns the central barrier into a single
//! well bounded by hills.
//!
//! On the full line, V(x) supports the finite ladder
//!
//! E_n = −(γ₁²/γ₂ − α(n + 1/2))², n = 0, …, ⌈γ₁²/(αγ₂) − 1/2⌉ − 1,
//!
//! which is empty when the well strength γ₁²/(αγ₂) is 1/2 or less.

use serde::{Deserialize, Serialize};

use crate::error::SolverError;

/// Parameters of the Morse-type well family.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MorseParams {
    /// Decay rate α > 0 of the exponentials (inverse length).
    pub alpha: f64,
    /// Strength γ₁ of the attractive −2γ₁² e^{−αx} term.
    pub gamma1: f64,
    /// Strength γ₂ > 0 of the repulsive γ₂² e^{−2αx} core.
    pub gamma2: f64,
    /// Symmetrization shift d in V_sym(x) = V(−d + |x|). Positive d builds a
    /// central barrier; negative (barrier-free) d is allowed.
    #[serde(alias = "d")]
    pub shift: f64,
}

impl MorseParams {
    /// Validated constructor.
    pub fn new(alpha: f64, gamma1: f64, gamma2: f64, shift: f64) -> Result<Self, SolverError> {
        let p = MorseParams { alpha, gamma1, gamma2, shift };
        p.validate()?;
        Ok(p)
    }

    /// Equal-strength convenience constructor (γ₁ = γ₂ = γ).
    pub fn equal_strength(alpha: f64, gamma: f64, shift: f64) -> Result<Self, SolverError> {
        Self::new(alpha, gamma, gamma, shift)
    }

    /// Check the parameter invariants (useful after deserialization, which
    /// bypasses `new`).
    pub fn validate(&self) -> Result<(), SolverError> {
        if !(self.alpha > 0.0) || !self.alpha.is_finite() {
            return Err(SolverError::Domain(format!(
                "alpha must be finite and > 0, got {}",
                self.alpha
            )));
        }
        if !(self.gamma2 > 0.0) || !self.gamma2.is_finite() {
            return Err(SolverError::Domain(format!(
                "gamma2 must be finite and > 0, got {}",
                self.gamma2
            )));
        }
        if !self.gamma1.is_finite() {
            return Err(SolverError::Domain(format!(
                "gamma1 must be finite, got {}",
                self.gamma1
            )));
        }
        if !self.shift.is_finite() {
            return Err(SolverError::Domain(format!(
                "shift must be finite, got {}",
                self.shift
            )));
        }
        Ok(())
    }

    /// Location x* = ln(γ₂²/γ₁²)/α of the Morse minimum (γ₁ ≠ 0).
    pub fn morse_min_location(&self) -> f64 {
        ((self.gamma2 * self.gamma2) / (self.gamma1 * self.gamma1)).ln() / self.alpha
    }

    /// Depth V(x*) = −γ₁⁴/γ₂² of the Morse minimum.
    pub fn morse_min_value(&self) -> f64 {
        let g1 = self.gamma1 * self.gamma1;
        -(g1 * g1) / (self.gamma2 * self.gamma2)
    }

    /// Dimensionless well strength γ₁²/(αγ₂); bound states exist on the full
    /// line exactly when this exceeds 1/2.
    pub fn well_strength(&self) -> f64 {
        self.gamma1 * self.gamma1 / (self.alpha * self.gamma2)
    }
}

/// The basic well V(x) = −2γ₁² e^{−αx} + γ₂² e^{−2αx}.
///
/// Evaluated in factored form e^{−αx}(γ₂² e^{−αx} − 2γ₁²) so that deep-core
/// overflow (very negative x) saturates to +∞ instead of producing ∞ − ∞.
pub fn v_morse(x: f64, p: &MorseParams) -> f64 {
    let u = (-p.alpha * x).exp();
    u * (p.gamma2 * p.gamma2 * u - 2.0 * p.gamma1 * p.gamma1)
}

/// The left-right symmetrization V_sym(x) = V(−d + |x|): even in x,
/// continuous at the origin, generally with a derivative kink there.
pub fn v_sym(x: f64, p: &MorseParams) -> f64 {
    v_morse(x.abs() - p.shift, p)
}

/// The sign-flipped single-well variant −V_sym(x).
pub fn v_single_well(x: f64, p: &MorseParams) -> f64 {
    -v_sym(x, p)
}

/// Global minimum of V_sym. The Morse dip −γ₁⁴/γ₂² is attained iff the
/// minimum location lies inside the sampled half-line argument range
/// [−d, ∞); otherwise the lowest point is the origin value V(−d).
pub fn v_sym_min(p: &MorseParams) -> f64 {
    if p.gamma1 == 0.0 {
        // Purely repulsive core: the infimum 0 is approached but not attained.
        return 0.0;
    }
    if p.morse_min_location() >= -p.shift {
        p.morse_min_value()
    } else {
        v_morse(-p.shift, p)
    }
}

/// Classical outer turning point of V_sym at energy E, i.e. the solution of
/// V_sym(x) = E on the outer slope (x > 0 side), valid for
/// min V_sym < E < 0. In the core coordinate u = e^{−α(x−d)} the condition
/// is the quadratic γ₂²u² − 2γ₁²u = E, whose smaller root
/// u = [γ₁² − √(γ₁⁴ + γ₂²E)]/γ₂² is the outer crossing:
///
/// x_turn = d − ln(u)/α.
///
/// The root is evaluated through the root product, u = −E/(γ₁² + √(…)), which
/// stays exact as E → 0⁻ where the textbook form cancels to zero.
///
/// Returns None outside (min V, 0). For barrier-free shifts the returned
/// coordinate may be ≤ 0; callers clamp to their window as needed.
pub fn outer_turning_point(energy: f64, p: &MorseParams) -> Option<f64> {
    if !(energy < 0.0) {
        return None;
    }
    let g1 = p.gamma1 * p.gamma1;
    let disc = g1 * g1 + p.gamma2 * p.gamma2 * energy;
    if disc < 0.0 {
        return None; // below the bottom of the well
    }
    let u_small = -energy / (g1 + disc.sqrt());
    if !(u_small > 0.0) {
        return None;
    }
    Some(p.shift - u_small.ln() / p.alpha)
}

/// Closed-form full-line spectrum of the basic well:
/// E_n = −(γ₁²/γ₂ − α(n + 1/2))² for n = 0, …, ⌈γ₁²/(αγ₂) − 1/2⌉ − 1,
/// strictly increasing; empty when γ₁²/(αγ₂) ≤ 1/2. (The threshold state
/// with γ₁²/(αγ₂) − n − 1/2 = 0 is not bound and is excluded.)
pub fn exact_full_line_morse_spectrum(p: &MorseParams) -> Vec<f64> {
    let s = p.well_strength();
    if !(s > 0.5) {
        return Vec::new();
    }
    let n_max = (s - 0.5).ceil() as i64 - 1;
    let mut levels = Vec::with_capacity((n_max + 1).max(0) as usize);
    for n in 0..=n_max {
        let k = p.gamma1 * p.gamma1 / p.gamma2 - p.alpha * (n as f64 + 0.5);
        levels.push(-k * k);
    }
    levels
}
