//! Bound-state solver for one-dimensional piecewise-analytic Schrödinger
//! problems, built around the left-right-symmetrized Morse potential
//!
//! ```text
//! V(x) = V_morse(-d + |x|),   V_morse(x) = -2 γ₁² e^{-αx} + γ₂² e^{-2αx}
//! ```
//!
//! in units ℏ = 2m = 1, so the stationary equation reads
//! `-ψ'' + V(x) ψ = E ψ` with bound states at `E = -k² < 0`.
//!
//! The solver constructs the parity-constrained regular solution on the
//! half line in closed form (Whittaker functions of a transformed
//! coordinate), classifies any trial energy by its node count and the sign
//! of the growing tail coefficient, and turns that classification into
//! certified two-sided energy brackets by bisection. An independent
//! fourth-order finite-difference (Numerov) shooting oracle cross-checks
//! every analytic result, and a piecewise matcher generalizes the
//! construction to chains of solvable segments.
//!
//! Module map:
//! - [`extended`] — arbitrary-precision binary floats, Γ, π, ln 2.
//! - [`specfun`] — Kummer and Whittaker functions with verified accuracy.
//! - [`potentials`] — the well family, its symmetrization, closed-form spectra.
//! - [`regular`] — the closed-form parity-constrained regular solution, its
//!   tail functional, and certified node counting.
//! - [`bracket`] — certified two-sided brackets, interleaved spectra, and
//!   tunnelling-doublet gaps (with an extended-precision secular fallback).
//! - [`numerov`] — the independent finite-difference shooting oracle.
//! - [`piecewise`] — transfer-matrix matching of segment chains (constant
//!   levels and Morse arms) with the same certified bracketing.

pub mod bracket;
pub mod error;
pub mod extended;
pub mod numerov;
pub mod piecewise;
pub mod potentials;
pub mod regular;
pub(crate) mod search;
pub mod specfun;

pub use bracket::{
    bracket_level, classify, degeneracy_gap, spectrum, EnergyBracket, SpectrumEntry,
};
pub use error::SolverError;

/// Parity sector of the symmetric problem: the origin boundary condition
/// selecting even (ψ′(0) = 0, ψ(0) = 1) or odd (ψ(0) = 0, ψ′(0) = 1)
/// solutions of the symmetric well.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, serde::Serialize, serde::Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Parity {
    Even,
    Odd,
}

impl Parity {
    /// Reflection eigenvalue: ψ(−x) = sign · ψ(x).
    pub fn reflection_sign(self) -> f64 {
        match self {
            Parity::Even => 1.0,
            Parity::Odd => -1.0,
        }
    }
}

impl std::fmt::Display for Parity {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Parity::Even => write!(f, "even"),
            Parity::Odd => write!(f, "odd"),
        }
    }
}
pub use numerov::{
    eigenvalue, full_line_eigenvalue, integrate_outward, ShootingConfig, ShootingProfile,
};
pub use piecewise::{
    bracket_secular, chain_accuracy, full_line_morse_chain, match_boundary,
    symmetrized_morse_chain, Segment, SegmentChain, SegmentDef, SegmentKind, Transfer,
};
pub use potentials::{
    exact_full_line_morse_spectrum, outer_turning_point, v_morse, v_single_well, v_sym,
    v_sym_min, MorseParams,
};
pub use regular::{
    build_regular, node_count, tail_functional, to_whittaker_coordinate, EnergyTrial,
    RegularWave, SolverOptions,
};
pub use specfun::{
    kummer_m, kummer_m_dz, whittaker_m, whittaker_m_dz, whittaker_w, whittaker_w_dz, Accuracy,
};
