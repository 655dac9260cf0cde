//! Piecewise-analytic potential chains matched by ψ/ψ′ continuity.
//!
//! A chain covers the line with K+1 segments −∞ = a₀ < a₁ < … < a_{K+1} = +∞,
//! each carrying a potential whose solution basis at trial energy E = −k² is
//! known in closed form:
//!
//! - a constant level V₀: real exponentials e^{±q(x−x_r)} with q = √(V₀−E)
//!   where the region is forbidden, trig functions cos/sin(ω(x−x_r)) with
//!   ω = √(E−V₀) where it is allowed, and the linear pair {1, x−x_r} exactly
//!   at E = V₀;
//! - a Morse arm V(ξ) = e^{−αξ}(γ₂² e^{−αξ} − 2γ₁²) with ξ = ±(x − origin):
//!   Whittaker functions of t = (2γ₂/α) e^{−αξ} with indices κ = γ₁²/(αγ₂)
//!   and μ = k/α, the members picked per segment so that growth and decay
//!   separate cleanly at any open end (W_{κ,μ} pairs with M_{κ,μ} toward the
//!   t → ∞ wall, M_{κ,+μ} pairs with M_{κ,−μ} toward t → 0).
//!
//! Continuity of ψ and ψ′ across a boundary is a linear map on the two basis
//! coefficients — a 2×2 transfer matrix. Assembly starts from a unit
//! coefficient on the member that decays as x → −∞ and propagates rightward;
//! the coefficient of the member that grows as x → +∞ is then the secular
//! function of the trial energy. It vanishes exactly at the bound states and
//! flips sign across each simple zero, so together with a node count over
//! the classically allowed hull it drives the same Sturm search as the
//! closed-form machinery. One calibration sign σ, measured below the ground
//! state, absorbs the chain's arbitrary member ordering and gauge factors.
//!
//! Everything here runs in plain f64: arms whose Whittaker coordinate
//! exceeds the series-safety bound, or whose basis products cancel past
//! double precision at a matching point, fail loudly (Guard /
//! SingularTransfer) instead of returning noise.

use serde::{Deserialize, Serialize};

use crate::bracket::{sign_of, EnergyBracket, FLOOR_FACTOR, K_TOL_FLOOR};
use crate::error::SolverError;
use crate::potentials::{v_morse, MorseParams};
use crate::search::{bisect_tail_sign, isolate_level, levels_deeper, IsolatedBracket, LevelQuery};
use crate::specfun::{
    regularized_mu, whittaker_m, whittaker_m_dz, whittaker_w, whittaker_w_dz, Accuracy,
};

/// Series-safety bound on the Whittaker coordinate anywhere a basis is
/// evaluated; beyond it the M series loses too many digits to cancellation.
const T_MAX: f64 = 200.0;
/// Node-count grid for scan-phase classifications.
const SCAN_GRID: usize = 1200;
/// Node-count grid for the final edge evidence.
const EVIDENCE_GRID: usize = 2000;
/// Geometric decay of the momentum scan.
const SCAN_RATIO: f64 = 0.98;
/// Scan step budget.
const MAX_SCAN_STEPS: usize = 1200;
/// Padding added on both sides of the classically allowed hull when a node
/// window is derived from the trial energy.
const NODE_PAD: f64 = 1.0;
/// A matching-point Wronskian smaller than this fraction of its constituent
/// products is indistinguishable from rounding noise.
const DET_GUARD: f64 = 1e-13;

/// The analytic family a segment draws its potential and solution basis from.
///
/// Serialized adjacently tagged, so a chain file is a JSON list of
/// `{"type": "constant"|"morse", "params": {…}, "a_left"?, "a_right"?}`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "type", content = "params", rename_all = "lowercase")]
pub enum SegmentKind {
    /// V(x) = v0.
    Constant { v0: f64 },
    /// One Morse arm V(x) = e^{−αξ}(γ₂² e^{−αξ} − 2γ₁²) in the running
    /// coordinate ξ = x − origin, or ξ = −(x − origin) when `mirrored` —
    /// mirroring reflects the arm so its hard exponential wall faces +∞.
    Morse {
        alpha: f64,
        gamma1: f64,
        gamma2: f64,
        #[serde(default)]
        origin: f64,
        #[serde(default)]
        mirrored: bool,
    },
}

impl SegmentKind {
    /// The potential value of this family at x (ignoring segment extents).
    pub fn potential(&self, x: f64) -> f64 {
        match self {
            SegmentKind::Constant { v0 } => *v0,
            SegmentKind::Morse {
                alpha,
                gamma1,
                gamma2,
                origin,
                mirrored,
            } => {
                let p = MorseParams {
                    alpha: *alpha,
                    gamma1: *gamma1,
                    gamma2: *gamma2,
                    shift: 0.0,
                };
                let xi = if *mirrored { origin - x } else { x - origin };
                v_morse(xi, &p)
            }
        }
    }

    /// Potential limit as x → −∞ within this family's formula.
    fn limit_left(&self) -> f64 {
        match self {
            SegmentKind::Constant { v0 } => *v0,
            SegmentKind::Morse { mirrored, .. } => {
                if *mirrored {
                    0.0
                } else {
                    f64::INFINITY
                }
            }
        }
    }

    /// Potential limit as x → +∞ within this family's formula.
    fn limit_right(&self) -> f64 {
        match self {
            SegmentKind::Constant { v0 } => *v0,
            SegmentKind::Morse { mirrored, .. } => {
                if *mirrored {
                    f64::INFINITY
                } else {
                    0.0
                }
            }
        }
    }

    fn validate(&self) -> Result<(), SolverError> {
        match self {
            SegmentKind::Constant { v0 } => {
                if !v0.is_finite() {
                    return Err(SolverError::InvalidChain(format!(
                        "constant level must be finite, got {v0}"
                    )));
                }
            }
            SegmentKind::Morse {
                alpha,
                gamma1,
                gamma2,
                origin,
                ..
            } => {
                if !(*alpha > 0.0) || !alpha.is_finite() {
                    return Err(SolverError::InvalidChain(format!(
                        "Morse decay rate must be finite and > 0, got {alpha}"
                    )));
                }
                if !(*gamma2 > 0.0) || !gamma2.is_finite() {
                    return Err(SolverError::InvalidChain(format!(
                        "Morse core strength must be finite and > 0, got {gamma2}"
                    )));
                }
                if !gamma1.is_finite() {
                    return Err(SolverError::InvalidChain(format!(
                        "Morse attraction strength must be finite, got {gamma1}"
                    )));
                }
                if !origin.is_finite() {
                    return Err(SolverError::InvalidChain(format!(
                        "Morse origin must be finite, got {origin}"
                    )));
                }
            }
        }
        Ok(())
    }
}

fn unit_gauge() -> [f64; 2] {
    [1.0, 1.0]
}

fn is_unit_gauge(g: &[f64; 2]) -> bool {
    *g == [1.0, 1.0]
}

/// One segment of a chain: a potential family, an extent, and per-member
/// gauge factors. `None` extents mean the segment runs to ±∞; only the first
/// segment may leave `a_left` open and only the last may leave `a_right`
/// open. The gauge rescales each basis member — physics never depends on it,
/// and rescaling is the standard cure when propagated coefficients threaten
/// to overflow.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SegmentDef {
    #[serde(flatten)]
    pub kind: SegmentKind,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub a_left: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub a_right: Option<f64>,
    #[serde(default = "unit_gauge", skip_serializing_if = "is_unit_gauge")]
    pub gauge: [f64; 2],
}

impl SegmentDef {
    /// A constant-potential segment with unit gauge.
    pub fn constant(v0: f64, a_left: Option<f64>, a_right: Option<f64>) -> Self {
        SegmentDef {
            kind: SegmentKind::Constant { v0 },
            a_left,
            a_right,
            gauge: unit_gauge(),
        }
    }

    /// A Morse-arm segment with unit gauge.
    pub fn morse_arm(
        alpha: f64,
        gamma1: f64,
        gamma2: f64,
        origin: f64,
        mirrored: bool,
        a_left: Option<f64>,
        a_right: Option<f64>,
    ) -> Self {
        SegmentDef {
            kind: SegmentKind::Morse {
                alpha,
                gamma1,
                gamma2,
                origin,
                mirrored,
            },
            a_left,
            a_right,
            gauge: unit_gauge(),
        }
    }

    /// The same segment with both basis members rescaled.
    pub fn with_gauge(mut self, gauge: [f64; 2]) -> Self {
        self.gauge = gauge;
        self
    }

    /// Check the segment-local invariants (finite parameters, ordered
    /// extent, invertible gauge).
    pub fn validate(&self) -> Result<(), SolverError> {
        self.kind.validate()?;
        for a in [self.a_left, self.a_right].into_iter().flatten() {
            if !a.is_finite() {
                return Err(SolverError::InvalidChain(format!(
                    "segment boundaries must be finite when present, got {a}"
                )));
            }
        }
        if let (Some(l), Some(r)) = (self.a_left, self.a_right) {
            if !(l < r) {
                return Err(SolverError::InvalidChain(format!(
                    "segment extent is reversed or empty: [{l}, {r}]"
                )));
            }
        }
        for g in self.gauge {
            if !g.is_finite() || g == 0.0 {
                return Err(SolverError::InvalidChain(format!(
                    "gauge factors must be finite and nonzero, got {g}"
                )));
            }
        }
        Ok(())
    }
}

/// Which Whittaker pair spans a Morse segment's solution space.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum WhittakerMembers {
    /// (W_{κ,μ}, M_{κ,μ}): chosen when the segment's open end faces its
    /// t → ∞ wall, where W decays like e^{−t/2} and M grows like e^{+t/2}.
    WAndM,
    /// (M_{κ,+μ}, M_{κ,−μ}): chosen otherwise; toward t → 0 the reduced
    /// waves behave as e^{∓kξ}, so the +μ member decays and −μ grows.
    MPair,
}

/// A concrete solution basis at one trial energy. Members are stored as
/// (value, d/dx) pairs of the reduced wave ψ, never of the raw special
/// function, so matching is always in physical variables.
#[derive(Debug, Clone)]
enum Basis {
    /// E < V₀: members e^{+q(x−x_r)}, e^{−q(x−x_r)}.
    Forbidden { q: f64, x_ref: f64 },
    /// E > V₀: members cos(ω(x−x_r)), sin(ω(x−x_r)).
    Oscillating { omega: f64, x_ref: f64 },
    /// E = V₀ exactly: members 1, x−x_r.
    Linear { x_ref: f64 },
    /// Morse arm: members t^{−1/2}·w_i(t) with t = scale·e^{−α·sgn·(x−origin)}
    /// and w_i the Whittaker pair; ψ′ = α·sgn·(½t^{−1/2}w − t^{1/2}w′).
    Whittaker {
        kappa: f64,
        mu_eff: f64,
        alpha: f64,
        sgn: f64,
        origin: f64,
        scale: f64,
        members: WhittakerMembers,
        acc: Accuracy,
    },
}

impl Basis {
    /// The Whittaker coordinate at x, guarded against the series-safety
    /// bound and against exponent underflow.
    fn whittaker_t(scale: f64, alpha: f64, sgn: f64, origin: f64, x: f64) -> Result<f64, SolverError> {
        let xi = sgn * (x - origin);
        let t = scale * (-alpha * xi).exp();
        if !(t > 0.0) || !t.is_finite() {
            return Err(SolverError::Guard(format!(
                "Whittaker coordinate degenerated to {t} at x = {x}; the point lies too deep \
                 in the exponential region for f64"
            )));
        }
        if t > T_MAX {
            return Err(SolverError::Guard(format!(
                "Whittaker coordinate t = {t:.6e} at x = {x} exceeds the series-safety bound \
                 {T_MAX}; this arm is too deep for the double-precision matcher"
            )));
        }
        Ok(t)
    }

    /// Both members and their x-derivatives at x: rows [ψᵢ(x), ψᵢ′(x)].
    fn eval(&self, x: f64) -> Result<[[f64; 2]; 2], SolverError> {
        let rows = match self {
            Basis::Forbidden { q, x_ref } => {
                let u = q * (x - x_ref);
                let ep = u.exp();
                let em = (-u).exp();
                [[ep, q * ep], [em, -q * em]]
            }
            Basis::Oscillating { omega, x_ref } => {
                let (s, c) = (omega * (x - x_ref)).sin_cos();
                [[c, -omega * s], [s, omega * c]]
            }
            Basis::Linear { x_ref } => [[1.0, 0.0], [x - x_ref, 1.0]],
            Basis::Whittaker {
                kappa,
                mu_eff,
                alpha,
                sgn,
                origin,
                scale,
                members,
                acc,
            } => {
                let t = Self::whittaker_t(*scale, *alpha, *sgn, *origin, x)?;
                let rt = t.sqrt();
                let slope = alpha * sgn;
                let pairs: [(f64, f64); 2] = match members {
                    WhittakerMembers::WAndM => [
                        (
                            whittaker_w(*kappa, *mu_eff, t, acc)?,
                            whittaker_w_dz(*kappa, *mu_eff, t, acc)?,
                        ),
                        (
                            whittaker_m(*kappa, *mu_eff, t, acc)?,
                            whittaker_m_dz(*kappa, *mu_eff, t, acc)?,
                        ),
                    ],
                    WhittakerMembers::MPair => [
                        (
                            whittaker_m(*kappa, *mu_eff, t, acc)?,
                            whittaker_m_dz(*kappa, *mu_eff, t, acc)?,
                        ),
                        (
                            whittaker_m(*kappa, -*mu_eff, t, acc)?,
                            whittaker_m_dz(*kappa, -*mu_eff, t, acc)?,
                        ),
                    ],
                };
                let mut rows = [[0.0f64; 2]; 2];
                for (i, (w, dw)) in pairs.iter().enumerate() {
                    let psi = w / rt;
                    rows[i] = [psi, slope * (0.5 * psi - rt * dw)];
                }
                rows
            }
        };
        for r in &rows {
            for v in r {
                if !v.is_finite() {
                    return Err(SolverError::Guard(format!(
                        "basis member overflowed at x = {x}; rescale the segment gauge or \
                         split the segment"
                    )));
                }
            }
        }
        Ok(rows)
    }

    /// Member values only (no derivatives) — the cheap path for node scans.
    fn values(&self, x: f64) -> Result<[f64; 2], SolverError> {
        let vals = match self {
            Basis::Forbidden { q, x_ref } => {
                let u = q * (x - x_ref);
                [u.exp(), (-u).exp()]
            }
            Basis::Oscillating { omega, x_ref } => {
                let (s, c) = (omega * (x - x_ref)).sin_cos();
                [c, s]
            }
            Basis::Linear { x_ref } => [1.0, x - x_ref],
            Basis::Whittaker {
                kappa,
                mu_eff,
                alpha,
                sgn,
                origin,
                scale,
                members,
                acc,
            } => {
                let t = Self::whittaker_t(*scale, *alpha, *sgn, *origin, x)?;
                let rt = t.sqrt();
                match members {
                    WhittakerMembers::WAndM => [
                        whittaker_w(*kappa, *mu_eff, t, acc)? / rt,
                        whittaker_m(*kappa, *mu_eff, t, acc)? / rt,
                    ],
                    WhittakerMembers::MPair => [
                        whittaker_m(*kappa, *mu_eff, t, acc)? / rt,
                        whittaker_m(*kappa, -*mu_eff, t, acc)? / rt,
                    ],
                }
            }
        };
        for v in vals {
            if !v.is_finite() {
                return Err(SolverError::Guard(format!(
                    "basis member overflowed at x = {x}; rescale the segment gauge or split \
                     the segment"
                )));
            }
        }
        Ok(vals)
    }
}

/// A segment instantiated at one trial energy: its definition, its concrete
/// solution basis, and the coefficients ψ = c₀·b₀ + c₁·b₁ set during chain
/// assembly (standalone segments carry zeros).
#[derive(Debug, Clone)]
pub struct Segment {
    /// The definition this segment was built from.
    pub def: SegmentDef,
    /// Basis coefficients of the propagated solution on this segment.
    pub c: [f64; 2],
    basis: Basis,
}

impl Segment {
    /// Instantiate `def` at trial energy E. Constant segments anchor their
    /// basis at the left boundary (falling back to the right one, then to 0,
    /// when open); Morse segments pick the Whittaker pair that separates
    /// growth from decay at their open end, and need E < 0 so that μ = k/α
    /// is real.
    pub fn build(def: &SegmentDef, energy: f64, acc: &Accuracy) -> Result<Self, SolverError> {
        def.validate()?;
        if !energy.is_finite() {
            return Err(SolverError::Domain(format!(
                "trial energy must be finite, got {energy}"
            )));
        }
        let basis = match &def.kind {
            SegmentKind::Constant { v0 } => {
                let x_ref = match (def.a_left, def.a_right) {
                    (Some(a), _) => a,
                    (None, Some(b)) => b,
                    (None, None) => 0.0,
                };
                let diff = energy - v0;
                if diff < 0.0 {
                    Basis::Forbidden {
                        q: (-diff).sqrt(),
                        x_ref,
                    }
                } else if diff > 0.0 {
                    Basis::Oscillating {
                        omega: diff.sqrt(),
                        x_ref,
                    }
                } else {
                    Basis::Linear { x_ref }
                }
            }
            SegmentKind::Morse {
                alpha,
                gamma1,
                gamma2,
                origin,
                mirrored,
            } => {
                if !(energy < 0.0) {
                    return Err(SolverError::Domain(format!(
                        "Morse segments support bound trials E < 0 only, got E = {energy}"
                    )));
                }
                let k = (-energy).sqrt();
                let open_left = def.a_left.is_none();
                let open_right = def.a_right.is_none();
                // The t → ∞ wall sits at x → −∞ for a direct arm and at
                // x → +∞ for a mirrored one.
                let members = if (open_left && !mirrored) || (open_right && *mirrored) {
                    WhittakerMembers::WAndM
                } else {
                    WhittakerMembers::MPair
                };
                Basis::Whittaker {
                    kappa: gamma1 * gamma1 / (alpha * gamma2),
                    mu_eff: regularized_mu(k / alpha),
                    alpha: *alpha,
                    sgn: if *mirrored { -1.0 } else { 1.0 },
                    origin: *origin,
                    scale: 2.0 * gamma2 / alpha,
                    members,
                    acc: acc.clone(),
                }
            }
        };
        Ok(Segment {
            def: def.clone(),
            c: [0.0, 0.0],
            basis,
        })
    }

    /// Gauge-scaled basis rows [ψᵢ(x), ψᵢ′(x)] at x.
    pub fn basis_at(&self, x: f64) -> Result<[[f64; 2]; 2], SolverError> {
        let mut rows = self.basis.eval(x)?;
        for (row, g) in rows.iter_mut().zip(self.def.gauge) {
            row[0] *= g;
            row[1] *= g;
        }
        Ok(rows)
    }

    /// Gauge-scaled member values at x (the node-scan fast path).
    fn values_at(&self, x: f64) -> Result<[f64; 2], SolverError> {
        let mut vals = self.basis.values(x)?;
        for (v, g) in vals.iter_mut().zip(self.def.gauge) {
            *v *= g;
        }
        Ok(vals)
    }

    /// Slot of the member that decays as x → −∞, if the basis separates
    /// growth from decay there.
    fn decay_slot_left(&self) -> Option<usize> {
        match &self.basis {
            Basis::Forbidden { .. } => Some(0),
            Basis::Oscillating { .. } | Basis::Linear { .. } => None,
            Basis::Whittaker { sgn, members, .. } => {
                if *sgn > 0.0 {
                    // x → −∞ is the t → ∞ wall: only W decays there.
                    match members {
                        WhittakerMembers::WAndM => Some(0),
                        WhittakerMembers::MPair => None,
                    }
                } else {
                    // x → −∞ is the t → 0 tail: M_{κ,+μ} decays there.
                    match members {
                        WhittakerMembers::WAndM => Some(1),
                        WhittakerMembers::MPair => Some(0),
                    }
                }
            }
        }
    }

    /// Slot of the member that grows as x → +∞, if the basis separates
    /// growth from decay there.
    fn grow_slot_right(&self) -> Option<usize> {
        match &self.basis {
            Basis::Forbidden { .. } => Some(0),
            Basis::Oscillating { .. } | Basis::Linear { .. } => None,
            Basis::Whittaker { sgn, members, .. } => {
                if *sgn > 0.0 {
                    // x → +∞ is the t → 0 tail: M_{κ,−μ} grows there, and in
                    // the (W, M) pair the generic growth lives in W.
                    match members {
                        WhittakerMembers::WAndM => Some(0),
                        WhittakerMembers::MPair => Some(1),
                    }
                } else {
                    // x → +∞ is the t → ∞ wall: M grows like e^{+t/2}.
                    match members {
                        WhittakerMembers::WAndM => Some(1),
                        WhittakerMembers::MPair => None,
                    }
                }
            }
        }
    }
}

/// The linear map c_right = T·c_left induced by requiring ψ and ψ′ to be
/// continuous at one matching point.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Transfer {
    /// Row-major entries: `m[i][j]` maps left coefficient j into right slot i.
    pub m: [[f64; 2]; 2],
}

impl Transfer {
    pub fn identity() -> Self {
        Transfer {
            m: [[1.0, 0.0], [0.0, 1.0]],
        }
    }

    /// Apply to a coefficient vector.
    pub fn apply(&self, c: [f64; 2]) -> [f64; 2] {
        [
            self.m[0][0] * c[0] + self.m[0][1] * c[1],
            self.m[1][0] * c[0] + self.m[1][1] * c[1],
        ]
    }

    /// Composition `later ∘ self` (this transfer acts first).
    pub fn then(&self, later: &Transfer) -> Transfer {
        let a = later.m;
        let b = self.m;
        Transfer {
            m: [
                [
                    a[0][0] * b[0][0] + a[0][1] * b[1][0],
                    a[0][0] * b[0][1] + a[0][1] * b[1][1],
                ],
                [
                    a[1][0] * b[0][0] + a[1][1] * b[1][0],
                    a[1][0] * b[0][1] + a[1][1] * b[1][1],
                ],
            ],
        }
    }
}

/// The transfer matrix across one matching point: expand the left segment's
/// (ψ, ψ′) in the right segment's basis. Fails with SingularTransfer when
/// the right basis Wronskian has cancelled below f64 resolution at `a` —
/// the loud symptom of an arm evaluated too deep in its exponential regime.
pub fn match_boundary(left: &Segment, right: &Segment, a: f64) -> Result<Transfer, SolverError> {
    if !a.is_finite() {
        return Err(SolverError::Domain(format!(
            "matching point must be finite, got {a}"
        )));
    }
    let bl = left.basis_at(a)?;
    let br = right.basis_at(a)?;
    let (f1, df1) = (bl[0][0], bl[0][1]);
    let (f2, df2) = (bl[1][0], bl[1][1]);
    let (g1, dg1) = (br[0][0], br[0][1]);
    let (g2, dg2) = (br[1][0], br[1][1]);
    let det = g1 * dg2 - g2 * dg1;
    let det_scale = (g1 * dg2).abs().max((g2 * dg1).abs()).max(f64::MIN_POSITIVE);
    if !det.is_finite() || det.abs() <= DET_GUARD * det_scale {
        return Err(SolverError::SingularTransfer(format!(
            "right-hand basis is numerically degenerate at x = {a}: Wronskian {det:.3e} \
             against product scale {det_scale:.3e}"
        )));
    }
    let t = Transfer {
        m: [
            [(dg2 * f1 - g2 * df1) / det, (dg2 * f2 - g2 * df2) / det],
            [(g1 * df1 - dg1 * f1) / det, (g1 * df2 - dg1 * f2) / det],
        ],
    };
    for row in &t.m {
        for v in row {
            if !v.is_finite() {
                return Err(SolverError::Guard(format!(
                    "transfer entries overflowed at x = {a}; rescale the segment gauges"
                )));
            }
        }
    }
    Ok(t)
}

/// A fully assembled chain at one trial energy: every segment carries the
/// coefficients of the solution that decays as x → −∞ (unit coefficient on
/// the decaying member of the first basis).
#[derive(Debug, Clone)]
pub struct SegmentChain {
    segments: Vec<Segment>,
    /// Interior boundaries a₁ < … < a_K (one fewer than segments).
    boundaries: Vec<f64>,
    energy: f64,
}

impl SegmentChain {
    /// Validate the definitions, build every basis at E, and propagate the
    /// left-decaying solution across all boundaries.
    pub fn assemble(
        defs: &[SegmentDef],
        energy: f64,
        acc: &Accuracy,
    ) -> Result<Self, SolverError> {
        validate_defs(defs)?;
        if !energy.is_finite() {
            return Err(SolverError::Domain(format!(
                "trial energy must be finite, got {energy}"
            )));
        }
        let v_left = defs[0].kind.limit_left();
        let v_right = defs[defs.len() - 1].kind.limit_right();
        if !(energy < v_left) || !(energy < v_right) {
            return Err(SolverError::InvalidChain(format!(
                "trial energy {energy} is not strictly below both asymptotic potential \
                 limits ({v_left}, {v_right}); the chain has no bound-state tails there"
            )));
        }
        let mut segments = defs
            .iter()
            .map(|d| Segment::build(d, energy, acc))
            .collect::<Result<Vec<_>, _>>()?;
        let slot = segments[0].decay_slot_left().ok_or_else(|| {
            SolverError::InvalidChain(
                "the leftmost segment has no member decaying as x → −∞".to_string(),
            )
        })?;
        segments[segments.len() - 1].grow_slot_right().ok_or_else(|| {
            SolverError::InvalidChain(
                "the rightmost segment has no growth/decay separation as x → +∞".to_string(),
            )
        })?;
        segments[0].c = [0.0, 0.0];
        segments[0].c[slot] = 1.0;
        let boundaries: Vec<f64> = defs[..defs.len() - 1]
            .iter()
            .map(|d| d.a_right.expect("interior boundaries were validated"))
            .collect();
        for j in 1..segments.len() {
            let t = match_boundary(&segments[j - 1], &segments[j], boundaries[j - 1])?;
            let c = t.apply(segments[j - 1].c);
            if !c[0].is_finite() || !c[1].is_finite() {
                return Err(SolverError::Guard(format!(
                    "coefficient propagation overflowed crossing x = {}; rescale the \
                     segment gauges",
                    boundaries[j - 1]
                )));
            }
            segments[j].c = c;
        }
        Ok(SegmentChain {
            segments,
            boundaries,
            energy,
        })
    }

    /// The secular function at this chain's trial energy: the coefficient of
    /// the member of the last basis that grows as x → +∞. Zero exactly at
    /// bound states; sign flips across each simple zero.
    pub fn secular(&self) -> f64 {
        let last = self.segments.last().expect("assembled chains are non-empty");
        let slot = last
            .grow_slot_right()
            .expect("assembly verified the outer growth/decay separation");
        last.c[slot]
    }

    /// The propagated wave and its derivative at x. Points exactly on a
    /// boundary use the left segment; continuity makes the choice invisible.
    pub fn eval(&self, x: f64) -> Result<(f64, f64), SolverError> {
        if !x.is_finite() {
            return Err(SolverError::Domain(format!(
                "evaluation point must be finite, got {x}"
            )));
        }
        let seg = &self.segments[self.segment_index(x)];
        let rows = seg.basis_at(x)?;
        Ok((
            seg.c[0] * rows[0][0] + seg.c[1] * rows[1][0],
            seg.c[0] * rows[0][1] + seg.c[1] * rows[1][1],
        ))
    }

    /// The propagated wave value alone (cheaper than [`Self::eval`]).
    pub fn value(&self, x: f64) -> Result<f64, SolverError> {
        if !x.is_finite() {
            return Err(SolverError::Domain(format!(
                "evaluation point must be finite, got {x}"
            )));
        }
        let seg = &self.segments[self.segment_index(x)];
        let vals = seg.values_at(x)?;
        Ok(seg.c[0] * vals[0] + seg.c[1] * vals[1])
    }

    /// Strict sign changes of the propagated wave on an inclusive uniform
    /// grid over [x_lo, x_hi]. Exact zeros are skipped so a node straddled
    /// by the grid counts once; grids below 200 cells are refused.
    pub fn node_count(&self, x_lo: f64, x_hi: f64, n_grid: usize) -> Result<usize, SolverError> {
        if !x_lo.is_finite() || !x_hi.is_finite() || !(x_lo < x_hi) {
            return Err(SolverError::Domain(format!(
                "node window must be finite and ordered, got [{x_lo}, {x_hi}]"
            )));
        }
        if n_grid < 200 {
            return Err(SolverError::Domain(format!(
                "node grid must have at least 200 cells, got {n_grid}"
            )));
        }
        let mut count = 0usize;
        let mut last: i8 = 0;
        for i in 0..=n_grid {
            let x = x_lo + (x_hi - x_lo) * (i as f64) / (n_grid as f64);
            let s = sign_of(self.value(x)?);
            if s != 0 {
                if last != 0 && s != last {
                    count += 1;
                }
                last = s;
            }
        }
        Ok(count)
    }

    /// The chain's potential at x (segments own their half-open cells
    /// (a_{j−1}, a_j], matching [`Self::eval`]).
    pub fn potential(&self, x: f64) -> f64 {
        self.segments[self.segment_index(x)].def.kind.potential(x)
    }

    /// The trial energy this chain was assembled at.
    pub fn energy(&self) -> f64 {
        self.energy
    }

    /// The instantiated segments with their propagated coefficients.
    pub fn segments(&self) -> &[Segment] {
        &self.segments
    }

    /// The interior matching points.
    pub fn boundaries(&self) -> &[f64] {
        &self.boundaries
    }

    fn segment_index(&self, x: f64) -> usize {
        self.boundaries
            .iter()
            .position(|&b| x <= b)
            .unwrap_or(self.segments.len() - 1)
    }
}

/// Structural validation shared by assembly and bracketing: at least one
/// segment, open outer ends, bounded and agreeing interior boundaries in
/// strictly increasing order, and per-segment invariants.
fn validate_defs(defs: &[SegmentDef]) -> Result<(), SolverError> {
    if defs.is_empty() {
        return Err(SolverError::InvalidChain(
            "a chain needs at least one segment".to_string(),
        ));
    }
    for (j, d) in defs.iter().enumerate() {
        d.validate().map_err(|e| match e {
            SolverError::InvalidChain(m) => {
                SolverError::InvalidChain(format!("segment {j}: {m}"))
            }
            other => other,
        })?;
    }
    if defs[0].a_left.is_some() {
        return Err(SolverError::InvalidChain(
            "the first segment must extend to x = −∞ (no a_left)".to_string(),
        ));
    }
    if defs[defs.len() - 1].a_right.is_some() {
        return Err(SolverError::InvalidChain(
            "the last segment must extend to x = +∞ (no a_right)".to_string(),
        ));
    }
    for (j, d) in defs.iter().enumerate() {
        if j > 0 && d.a_left.is_none() {
            return Err(SolverError::InvalidChain(format!(
                "segment {j} is not the first yet has no left boundary"
            )));
        }
        if j + 1 < defs.len() && d.a_right.is_none() {
            return Err(SolverError::InvalidChain(format!(
                "segment {j} is not the last yet has no right boundary"
            )));
        }
    }
    for j in 1..defs.len() {
        let l = defs[j].a_left.expect("checked above");
        let r = defs[j - 1].a_right.expect("checked above");
        if l != r {
            return Err(SolverError::InvalidChain(format!(
                "segments {}/{} disagree on their shared boundary: {r} vs {l}",
                j - 1,
                j
            )));
        }
    }
    let bounds: Vec<f64> = defs[..defs.len() - 1]
        .iter()
        .map(|d| d.a_right.expect("checked above"))
        .collect();
    for w in bounds.windows(2) {
        if !(w[0] < w[1]) {
            return Err(SolverError::InvalidChain(format!(
                "interior boundaries must increase strictly, got {} then {}",
                w[0], w[1]
            )));
        }
    }
    Ok(())
}

/// The classically allowed hull of the chain at energy E, padded on both
/// sides — the window all arrived nodes of the left-decaying solution live
/// in. (The one extra zero that marches in from +∞ just after an eigenvalue
/// crossing may or may not be inside; the level-counting rule is exact
/// either way, so the window only needs to cover the hull.) Below every well
/// bottom there is no allowed region and any bounded window works.
fn node_window(defs: &[SegmentDef], energy: f64) -> (f64, f64) {
    let mut lo = f64::INFINITY;
    let mut hi = f64::NEG_INFINITY;
    for d in defs {
        let ext_lo = d.a_left.unwrap_or(f64::NEG_INFINITY);
        let ext_hi = d.a_right.unwrap_or(f64::INFINITY);
        match &d.kind {
            SegmentKind::Constant { v0 } => {
                if *v0 < energy && ext_lo.is_finite() && ext_hi.is_finite() {
                    lo = lo.min(ext_lo);
                    hi = hi.max(ext_hi);
                }
            }
            SegmentKind::Morse {
                alpha,
                gamma1,
                gamma2,
                origin,
                mirrored,
            } => {
                if energy >= 0.0 {
                    continue;
                }
                let g1sq = gamma1 * gamma1;
                let disc = g1sq * g1sq - gamma2 * gamma2 * (-energy);
                if disc <= 0.0 {
                    continue;
                }
                // Turning points in u = e^{−αξ}: γ₂²u² − 2γ₁²u − E = 0, with
                // the small root taken from the root product to stay stable
                // when E → 0.
                let u_big = (g1sq + disc.sqrt()) / (gamma2 * gamma2);
                let u_small = -energy / (gamma2 * gamma2 * u_big);
                let xi_lo = -u_big.ln() / alpha;
                let xi_hi = -u_small.ln() / alpha;
                let (mut x_lo, mut x_hi) = if *mirrored {
                    (origin - xi_hi, origin - xi_lo)
                } else {
                    (origin + xi_lo, origin + xi_hi)
                };
                x_lo = x_lo.max(ext_lo);
                x_hi = x_hi.min(ext_hi);
                if x_lo < x_hi {
                    lo = lo.min(x_lo);
                    hi = hi.max(x_hi);
                }
            }
        }
    }
    if !(lo < hi) {
        let b_first = defs[0].a_right.unwrap_or(0.0);
        let b_last = defs[defs.len() - 1].a_left.unwrap_or(0.0);
        return (
            b_first.min(b_last) - NODE_PAD,
            b_first.max(b_last) + NODE_PAD,
        );
    }
    (lo - NODE_PAD, hi + NODE_PAD)
}

/// The infimum of the chain potential over the whole line.
fn global_minimum(defs: &[SegmentDef]) -> f64 {
    let mut vmin = f64::INFINITY;
    for d in defs {
        let ext_lo = d.a_left.unwrap_or(f64::NEG_INFINITY);
        let ext_hi = d.a_right.unwrap_or(f64::INFINITY);
        let m = match &d.kind {
            SegmentKind::Constant { v0 } => *v0,
            SegmentKind::Morse {
                alpha,
                gamma1,
                gamma2,
                origin,
                mirrored,
            } => {
                let p = MorseParams {
                    alpha: *alpha,
                    gamma1: *gamma1,
                    gamma2: *gamma2,
                    shift: 0.0,
                };
                let (xi_lo, xi_hi) = if *mirrored {
                    (origin - ext_hi, origin - ext_lo)
                } else {
                    (ext_lo - origin, ext_hi - origin)
                };
                // The arm is unimodal in ξ, so the minimum over the extent
                // sits at its interior minimum clamped into [ξ_lo, ξ_hi].
                let xi_star = p.morse_min_location().max(xi_lo).min(xi_hi);
                v_morse(xi_star, &p)
            }
        };
        vmin = vmin.min(m);
    }
    vmin
}

/// Node count and σ-calibrated secular sign at momentum k.
fn classify_chain(
    defs: &[SegmentDef],
    k: f64,
    acc: &Accuracy,
    sigma: i8,
    n_grid: usize,
) -> Result<(usize, i8), SolverError> {
    let energy = -k * k;
    let chain = SegmentChain::assemble(defs, energy, acc)?;
    let (w_lo, w_hi) = node_window(defs, energy);
    let nodes = chain.node_count(w_lo, w_hi, n_grid)?;
    Ok((nodes, sigma * sign_of(chain.secular())))
}

/// Raw secular sign at momentum k (no node scan).
fn secular_sign(defs: &[SegmentDef], k: f64, acc: &Accuracy) -> Result<i8, SolverError> {
    Ok(sign_of(SegmentChain::assemble(defs, -k * k, acc)?.secular()))
}

/// Certify a two-sided momentum bracket around the chain's `level`-th bound
/// state (0 = deepest), with the same evidence contract as the closed-form
/// bracketer: both edges within `k_tol`, node counts equal to `level` at
/// both edges, and opposite secular signs across them. The returned bracket
/// carries `parity: None` — chains have no parity decomposition.
///
/// Requires both asymptotic potential limits ≥ 0 so every scanned trial
/// E = −k² < 0 has bound-state tails, and at least two segments (a single
/// segment has no matching condition, hence a constant secular function).
pub fn bracket_secular(
    defs: &[SegmentDef],
    level: usize,
    k_tol: f64,
    acc: &Accuracy,
) -> Result<EnergyBracket, SolverError> {
    validate_defs(defs)?;
    if defs.len() < 2 {
        return Err(SolverError::InvalidChain(
            "a single-segment chain has a constant secular function; there is nothing to \
             bracket"
                .to_string(),
        ));
    }
    if !(k_tol > 0.0) || !k_tol.is_finite() {
        return Err(SolverError::Domain(format!(
            "bracket tolerance must be finite and > 0, got {k_tol}"
        )));
    }
    if k_tol < K_TOL_FLOOR {
        return Err(SolverError::PrecisionFloor(format!(
            "k_tol = {k_tol:e} is below the f64 certification floor {K_TOL_FLOOR:e}; \
             edge evidence would be dominated by rounding"
        )));
    }
    let v_left = defs[0].kind.limit_left();
    let v_right = defs[defs.len() - 1].kind.limit_right();
    if v_left < 0.0 || v_right < 0.0 {
        return Err(SolverError::InvalidChain(format!(
            "momentum scanning requires non-negative asymptotic potential limits, got \
             ({v_left}, {v_right}); shift the energy reference"
        )));
    }
    let vmin = global_minimum(defs);
    if !(vmin < 0.0) {
        return Err(SolverError::NoSuchLevel(format!(
            "the chain potential has infimum {vmin} ≥ 0; no bound levels exist below the \
             asymptotic limits"
        )));
    }
    let k_start = (-vmin).sqrt() * (1.0 - 1e-9);
    let mut evals = 0usize;

    // Calibration: chains carry arbitrary member ordering and gauge signs,
    // so the secular sign at the scan start — below the ground state, where
    // no flip has occurred yet — defines +1 for the Sturm bookkeeping.
    let sigma = {
        let s = secular_sign(defs, k_start, acc)?;
        evals += 1;
        if s == 0 {
            return Err(SolverError::Guard(format!(
                "secular function vanishes at the scan start k = {k_start}; the well \
                 bottom sits exactly on an eigenvalue"
            )));
        }
        s
    };

    // One probe just above the floor settles existence before any scan.
    let k_floor = k_start * FLOOR_FACTOR;
    let (n_f, s_f) = classify_chain(defs, k_floor, acc, sigma, SCAN_GRID)?;
    evals += 1;
    let deep = levels_deeper(n_f, s_f);
    if deep <= level {
        return Err(SolverError::NoSuchLevel(format!(
            "the chain holds only {deep} levels above k = {k_floor:.3e}; level {level} \
             does not exist"
        )));
    }

    let query = LevelQuery {
        level,
        k_start,
        scan_ratio: SCAN_RATIO,
        max_scan_steps: MAX_SCAN_STEPS,
        k_floor,
    };
    let isolated = isolate_level(
        &query,
        &mut |k| classify_chain(defs, k, acc, sigma, SCAN_GRID),
        &mut evals,
    )?;

    // Bisect on the secular sign alone, then certify both edges at the fine
    // evidence grid; inconsistent evidence shrinks the bracket and retries.
    let mut width_target = k_tol / 4.0;
    let mut bracket = isolated;
    loop {
        let stop = |lo: f64, hi: f64| hi - lo <= width_target;
        let (lo, hi) = bisect_tail_sign(
            bracket,
            &stop,
            &mut |k| Ok(sigma * secular_sign(defs, k, acc)?),
            &mut evals,
        )?;
        let (n_lo, s_lo) = classify_chain(defs, lo, acc, sigma, EVIDENCE_GRID)?;
        evals += 1;
        let (n_hi, s_hi) = classify_chain(defs, hi, acc, sigma, EVIDENCE_GRID)?;
        evals += 1;
        if n_lo == level && n_hi == level && s_lo != s_hi {
            return Ok(EnergyBracket {
                level,
                parity: None,
                k_lo: lo,
                k_hi: hi,
                node_evidence: (n_lo, n_hi),
                sign_evidence: (s_lo, s_hi),
                evaluations: evals,
            });
        }
        if hi - lo <= 4.0 * f64::EPSILON * hi {
            return Err(SolverError::PrecisionFloor(format!(
                "edge evidence for chain level {level} cannot be established: node counts \
                 ({n_lo}, {n_hi}) and signs ({s_lo}, {s_hi}) at the f64-minimal bracket \
                 [{lo}, {hi}]"
            )));
        }
        width_target = ((hi - lo) / 4.0).max(2.0 * f64::EPSILON * hi);
        bracket = IsolatedBracket { k_lo: lo, k_hi: hi };
    }
}

/// Default accuracy for chain work: comfortably below f64 rounding with
/// headroom for the mild cancellation inside the special-function series.
pub fn chain_accuracy() -> Accuracy {
    Accuracy::new(1e-14, 40_000, 24).expect("static accuracy is valid")
}

/// The whole-line symmetrized well V(x) = v_morse(|x| − d) as a two-segment
/// chain: a mirrored arm on (−∞, 0] and a direct arm on [0, ∞).
pub fn symmetrized_morse_chain(p: &MorseParams) -> Result<Vec<SegmentDef>, SolverError> {
    p.validate()?;
    Ok(vec![
        SegmentDef::morse_arm(
            p.alpha,
            p.gamma1,
            p.gamma2,
            -p.shift,
            true,
            None,
            Some(0.0),
        ),
        SegmentDef::morse_arm(p.alpha, p.gamma1, p.gamma2, p.shift, false, Some(0.0), None),
    ])
}

/// A single Morse arm over the whole line, split at its interior minimum so
/// each piece has exactly one open end (and hence an unambiguous Whittaker
/// pair).
pub fn full_line_morse_chain(p: &MorseParams) -> Result<Vec<SegmentDef>, SolverError> {
    p.validate()?;
    let xm = p.morse_min_location();
    if !xm.is_finite() {
        return Err(SolverError::Domain(
            "a purely repulsive arm has no interior minimum to split at".to_string(),
        ));
    }
    Ok(vec![
        SegmentDef::morse_arm(p.alpha, p.gamma1, p.gamma2, 0.0, false, None, Some(xm)),
        SegmentDef::morse_arm(p.alpha, p.gamma1, p.gamma2, 0.0, false, Some(xm), None),
    ])
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numerov::shoot_from_node;
    use crate::regular::{tail_functional, EnergyTrial, SolverOptions};
    use crate::Parity;
    use approx::assert_abs_diff_eq;
    use proptest::prelude::*;

    /// Even/odd ground momenta of the d = 1, α = 1, γ = 1.8 symmetric well,
    /// computed independently to many digits.
    const EVEN_K0: f64 = 1.3557629340521218;
    const ODD_K0: f64 = 1.2681111413660038;
    /// Ground momentum of the depth-4, half-width-1 square well, the root of
    /// √(4−k²)·tan(√(4−k²)) = k, computed independently to many digits.
    const SQW_K0: f64 = 1.7144605366650247;
    const SQW_E0: f64 = -2.939374931781725;

    fn square_well() -> Vec<SegmentDef> {
        vec![
            SegmentDef::constant(0.0, None, Some(-1.0)),
            SegmentDef::constant(-4.0, Some(-1.0), Some(1.0)),
            SegmentDef::constant(0.0, Some(1.0), None),
        ]
    }

    fn stepped_well() -> Vec<SegmentDef> {
        vec![
            SegmentDef::constant(0.0, None, Some(-1.0)),
            SegmentDef::constant(-4.0, Some(-1.0), Some(0.0)),
            SegmentDef::constant(-2.0, Some(0.0), Some(1.0)),
            SegmentDef::constant(0.0, Some(1.0), None),
        ]
    }

    fn stepped_v(x: f64) -> f64 {
        if x < -1.0 {
            0.0
        } else if x < 0.0 {
            -4.0
        } else if x < 1.0 {
            -2.0
        } else {
            0.0
        }
    }

    #[test]
    fn identical_bases_give_the_identity_transfer() {
        let acc = chain_accuracy();
        let cdef = SegmentDef::constant(-2.0, Some(0.0), Some(2.0));
        let mdef = SegmentDef::morse_arm(1.0, 1.2, 0.9, 0.3, false, Some(0.0), Some(2.0));
        for def in [cdef, mdef] {
            let s = Segment::build(&def, -1.0, &acc).unwrap();
            let t = match_boundary(&s, &s, 1.0).unwrap();
            // Identical rows make the solve cancel exactly, entry by entry.
            assert_eq!(t.m, Transfer::identity().m, "{def:?}");
        }
    }

    #[test]
    fn hand_derived_constant_transfer_matches() {
        // Forbidden level 0 on the left of x = 0, allowed level −4 on the
        // right, E = −1: left members (eˣ, e⁻ˣ), right members
        // (cos √3 x, sin √3 x). Expanding by hand:
        //   eˣ  = cos √3 x + (1/√3) sin √3 x + O(x²)
        //   e⁻ˣ = cos √3 x − (1/√3) sin √3 x + O(x²)
        let acc = chain_accuracy();
        let left = Segment::build(&SegmentDef::constant(0.0, None, Some(0.0)), -1.0, &acc).unwrap();
        let right =
            Segment::build(&SegmentDef::constant(-4.0, Some(0.0), None), -1.0, &acc).unwrap();
        let t = match_boundary(&left, &right, 0.0).unwrap();
        let r3 = 3.0f64.sqrt().recip();
        let expect = [[1.0, 1.0], [r3, -r3]];
        for i in 0..2 {
            for j in 0..2 {
                assert_abs_diff_eq!(t.m[i][j], expect[i][j], epsilon = 1e-14);
            }
        }
    }

    #[test]
    fn matched_waves_are_continuous_at_boundaries() {
        let p = MorseParams::equal_strength(1.0, 1.8, 1.0).unwrap();
        let defs = symmetrized_morse_chain(&p).unwrap();
        let chain = SegmentChain::assemble(&defs, -(1.3f64 * 1.3), &chain_accuracy()).unwrap();
        let (psi_l, dpsi_l) = chain.eval(-1e-9).unwrap();
        let (psi_r, dpsi_r) = chain.eval(1e-9).unwrap();
        assert_abs_diff_eq!(psi_l, psi_r, epsilon = 1e-6 * psi_l.abs().max(1.0));
        assert_abs_diff_eq!(dpsi_l, dpsi_r, epsilon = 1e-6 * dpsi_l.abs().max(1.0));
        // And the derivative really is the x-derivative of the value.
        let h = 1e-6;
        let (psi0, dpsi0) = chain.eval(0.7).unwrap();
        let num = (chain.value(0.7 + h).unwrap() - chain.value(0.7 - h).unwrap()) / (2.0 * h);
        assert_abs_diff_eq!(num, dpsi0, epsilon = 1e-5 * dpsi0.abs().max(1.0));
        let _ = psi0;
    }

    #[test]
    fn square_well_ground_state_matches_the_transcendental_root() {
        // Independent oracle: bisect √(4−k²)·tan(√(4−k²)) − k on [1.6, 1.8].
        let f = |k: f64| {
            let omega = (4.0 - k * k).sqrt();
            omega * omega.tan() - k
        };
        let (mut lo, mut hi) = (1.6f64, 1.8f64);
        assert!(f(lo) > 0.0 && f(hi) < 0.0);
        for _ in 0..60 {
            let mid = 0.5 * (lo + hi);
            if f(mid) > 0.0 {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        let k_ref = 0.5 * (lo + hi);
        assert_abs_diff_eq!(k_ref, SQW_K0, epsilon = 1e-12);

        let b = bracket_secular(&square_well(), 0, 1e-10, &chain_accuracy()).unwrap();
        assert!(b.k_lo < k_ref && k_ref < b.k_hi, "{b:?}");
        assert!(b.k_hi - b.k_lo <= 2e-10);
        assert_eq!(b.parity, None);
        assert_eq!(b.node_evidence, (0, 0));
        let e_mid = -(0.5 * (b.k_lo + b.k_hi)).powi(2);
        assert_abs_diff_eq!(e_mid, SQW_E0, epsilon = 1e-9);
    }

    #[test]
    fn square_well_first_excited_level_and_missing_levels() {
        let b = bracket_secular(&square_well(), 1, 1e-8, &chain_accuracy()).unwrap();
        assert_eq!(b.node_evidence, (1, 1));
        // Odd-sector condition: √(4−k²)·cot(√(4−k²)) = −k.
        let g = |k: f64| {
            let omega = (4.0 - k * k).sqrt();
            omega / omega.tan() + k
        };
        let k_mid = 0.5 * (b.k_lo + b.k_hi);
        assert!(g(b.k_lo) * g(b.k_hi) < 0.0, "root not inside: {b:?}");
        assert!(k_mid > 0.5 && k_mid < 0.8);

        let err = bracket_secular(&square_well(), 5, 1e-8, &chain_accuracy()).unwrap_err();
        assert!(matches!(err, SolverError::NoSuchLevel(_)), "{err}");
    }

    #[test]
    fn two_segment_symmetrized_morse_reproduces_the_half_line_brackets() {
        let p = MorseParams::equal_strength(1.0, 1.8, 1.0).unwrap();
        let defs = symmetrized_morse_chain(&p).unwrap();
        let acc = chain_accuracy();

        let b0 = bracket_secular(&defs, 0, 1e-5, &acc).unwrap();
        assert!(b0.k_lo < EVEN_K0 && EVEN_K0 < b0.k_hi, "{b0:?}");
        assert!(b0.k_hi - b0.k_lo <= 2e-5);
        assert_eq!(b0.node_evidence, (0, 0));
        assert_eq!(b0.parity, None);

        let b1 = bracket_secular(&defs, 1, 3e-6, &acc).unwrap();
        assert!(b1.k_lo < ODD_K0 && ODD_K0 < b1.k_hi, "{b1:?}");
        assert!(b1.k_hi - b1.k_lo <= 6e-6);
        assert_eq!(b1.node_evidence, (1, 1));
    }

    #[test]
    fn chain_secular_sign_tracks_the_half_line_tail_sign() {
        // Between the odd and even ground momenta, and above both, the
        // chain's secular sign must follow the even-sector tail functional
        // up to one fixed calibration sign (the odd factor does not vanish
        // there, so every sign change is an even-sector eigenvalue).
        let p = MorseParams::equal_strength(1.0, 1.8, 1.0).unwrap();
        let defs = symmetrized_morse_chain(&p).unwrap();
        let acc = chain_accuracy();
        let opts = SolverOptions::for_params(&p);
        let samples = [1.28, 1.30, 1.32, 1.34, 1.36, 1.40, 1.45];
        let mut calib: Option<i8> = None;
        for k in samples {
            let s_chain = sign_of(
                SegmentChain::assemble(&defs, -k * k, &acc)
                    .unwrap()
                    .secular(),
            );
            let trial = EnergyTrial::new(k, &p).unwrap();
            let s_half = sign_of(tail_functional(&p, &trial, Parity::Even, &opts).unwrap());
            assert!(s_chain != 0 && s_half != 0, "degenerate sign at k = {k}");
            let rel = s_chain * s_half;
            match calib {
                None => calib = Some(rel),
                Some(c) => assert_eq!(rel, c, "sign pattern diverged at k = {k}"),
            }
        }
    }

    #[test]
    fn full_line_morse_bracket_contains_the_closed_form_root() {
        // α = γ₁ = γ₂ = 1 has eigen-momenta k_n = κ − n − 1/2 = 1/2 − n, so
        // exactly one level at k₀ = 1/2, E₀ = −1/4.
        let p = MorseParams::new(1.0, 1.0, 1.0, 0.0).unwrap();
        let defs = full_line_morse_chain(&p).unwrap();
        let b = bracket_secular(&defs, 0, 1e-6, &chain_accuracy()).unwrap();
        assert!(b.k_lo < 0.5 && 0.5 < b.k_hi, "{b:?}");
        assert_eq!(b.node_evidence, (0, 0));
        let e_mid = -(0.5 * (b.k_lo + b.k_hi)).powi(2);
        assert_abs_diff_eq!(e_mid, -0.25, epsilon = 1.1e-6);

        let err = bracket_secular(&defs, 1, 1e-6, &chain_accuracy()).unwrap_err();
        assert!(matches!(err, SolverError::NoSuchLevel(_)), "{err}");
    }

    #[test]
    fn stepped_well_agrees_with_the_finite_difference_oracle() {
        let defs = stepped_well();
        let acc = chain_accuracy();
        for level in [0usize, 1] {
            // Independent oracle: Numerov shooting from a far node, with the
            // same Sturm search driving the momentum scan.
            let mut classify_fd = |k: f64| -> Result<(usize, i8), SolverError> {
                let e = -k * k;
                let prof = shoot_from_node(&|x| stepped_v(x) - e, -12.0, 12.0, 2e-4);
                Ok((prof.node_count(), prof.tail_sign()))
            };
            let q = LevelQuery {
                level,
                k_start: 2.0 * (1.0 - 1e-9),
                scan_ratio: 0.98,
                max_scan_steps: 600,
                k_floor: 1e-3,
            };
            let mut evals = 0usize;
            let isolated = isolate_level(&q, &mut classify_fd, &mut evals).unwrap();
            let (lo, hi) = bisect_tail_sign(
                isolated,
                &|lo, hi| hi - lo <= 2e-9,
                &mut |k| classify_fd(k).map(|(_, s)| s),
                &mut evals,
            )
            .unwrap();
            let k_fd = 0.5 * (lo + hi);

            let b = bracket_secular(&defs, level, 1e-5, &acc).unwrap();
            assert!(
                b.k_lo < k_fd && k_fd < b.k_hi,
                "level {level}: oracle {k_fd} outside {b:?}"
            );
            assert_eq!(b.node_evidence, (level, level));
        }
    }

    #[test]
    fn single_segment_chains_have_the_trivial_secular() {
        let acc = chain_accuracy();
        // One forbidden constant: both slots are the same member, so the
        // unit launch coefficient is reported unchanged.
        let lone = [SegmentDef::constant(1.0, None, None)];
        let chain = SegmentChain::assemble(&lone, -0.5, &acc).unwrap();
        assert_eq!(chain.secular(), 1.0);

        // A whole-line Morse arm, direct and mirrored: the (W, M) pair puts
        // launch and growth in one slot again.
        let direct = [SegmentDef::morse_arm(1.0, 1.0, 1.0, 0.0, false, None, None)];
        let chain = SegmentChain::assemble(&direct, -0.3, &acc).unwrap();
        assert_eq!(chain.secular(), 1.0);
        let mirrored = [SegmentDef::morse_arm(1.0, 1.0, 1.0, 0.0, true, None, None)];
        let chain = SegmentChain::assemble(&mirrored, -0.3, &acc).unwrap();
        assert_eq!(chain.secular(), 1.0);

        // A trial at or above the asymptotic limits has no bound tails.
        let err = SegmentChain::assemble(&lone, 1.5, &acc).unwrap_err();
        assert!(matches!(err, SolverError::InvalidChain(_)), "{err}");
        let err = SegmentChain::assemble(&lone, 1.0, &acc).unwrap_err();
        assert!(matches!(err, SolverError::InvalidChain(_)), "{err}");
    }

    #[test]
    fn malformed_chains_are_rejected() {
        let acc = chain_accuracy();
        let cases: Vec<Vec<SegmentDef>> = vec![
            // Empty chain.
            vec![],
            // First segment must be open on the left.
            vec![
                SegmentDef::constant(0.0, Some(-3.0), Some(0.0)),
                SegmentDef::constant(-1.0, Some(0.0), None),
            ],
            // Last segment must be open on the right.
            vec![
                SegmentDef::constant(0.0, None, Some(0.0)),
                SegmentDef::constant(-1.0, Some(0.0), Some(3.0)),
            ],
            // Interior segment missing its right boundary.
            vec![
                SegmentDef::constant(0.0, None, Some(0.0)),
                SegmentDef::constant(-1.0, Some(0.0), None),
                SegmentDef::constant(0.0, Some(1.0), None),
            ],
            // Adjacent segments disagreeing on the shared boundary.
            vec![
                SegmentDef::constant(0.0, None, Some(0.5)),
                SegmentDef::constant(-1.0, Some(0.6), None),
            ],
            // Reversed extent.
            vec![
                SegmentDef::constant(0.0, None, Some(1.0)),
                SegmentDef::constant(-1.0, Some(1.0), Some(0.5)),
                SegmentDef::constant(0.0, Some(0.5), None),
            ],
            // Zero gauge.
            vec![
                SegmentDef::constant(0.0, None, Some(0.0)),
                SegmentDef::constant(-1.0, Some(0.0), None).with_gauge([0.0, 1.0]),
            ],
            // Non-finite boundary.
            vec![
                SegmentDef::constant(0.0, None, Some(f64::NAN)),
                SegmentDef::constant(-1.0, Some(f64::NAN), None),
            ],
        ];
        for defs in cases {
            let err = SegmentChain::assemble(&defs, -0.5, &acc).unwrap_err();
            assert!(matches!(err, SolverError::InvalidChain(_)), "{defs:?}: {err}");
        }

        // Oscillating outer tails: E not below the asymptotic limits.
        let open = vec![
            SegmentDef::constant(-2.0, None, Some(0.0)),
            SegmentDef::constant(0.0, Some(0.0), None),
        ];
        let err = SegmentChain::assemble(&open, -1.0, &acc).unwrap_err();
        assert!(matches!(err, SolverError::InvalidChain(_)), "{err}");

        // Morse segments refuse non-negative trial energies outright.
        let mdef = SegmentDef::morse_arm(1.0, 1.0, 1.0, 0.0, false, Some(0.0), Some(1.0));
        let err = Segment::build(&mdef, 0.0, &acc).unwrap_err();
        assert!(matches!(err, SolverError::Domain(_)), "{err}");
    }

    #[test]
    fn bracket_rejects_bad_tolerances_and_trivial_wells() {
        let acc = chain_accuracy();
        let defs = square_well();
        for bad in [0.0, -1e-6, f64::NAN] {
            let err = bracket_secular(&defs, 0, bad, &acc).unwrap_err();
            assert!(matches!(err, SolverError::Domain(_)), "{bad}: {err}");
        }
        let err = bracket_secular(&defs, 0, 1e-13, &acc).unwrap_err();
        assert!(matches!(err, SolverError::PrecisionFloor(_)), "{err}");

        // Negative asymptotic limits leave no scannable momentum range.
        let sunken = vec![
            SegmentDef::constant(-1.0, None, Some(0.0)),
            SegmentDef::constant(0.0, Some(0.0), None),
        ];
        let err = bracket_secular(&sunken, 0, 1e-6, &acc).unwrap_err();
        assert!(matches!(err, SolverError::InvalidChain(_)), "{err}");

        // A chain that never dips below zero holds no bound levels.
        let barrier = vec![
            SegmentDef::constant(0.0, None, Some(0.0)),
            SegmentDef::constant(2.0, Some(0.0), Some(1.0)),
            SegmentDef::constant(0.0, Some(1.0), None),
        ];
        let err = bracket_secular(&barrier, 0, 1e-6, &acc).unwrap_err();
        assert!(matches!(err, SolverError::NoSuchLevel(_)), "{err}");

        // Single segments have no matching condition to bracket on.
        let lone = vec![SegmentDef::constant(-1.0, None, None)];
        let err = bracket_secular(&lone, 0, 1e-6, &acc).unwrap_err();
        assert!(matches!(err, SolverError::InvalidChain(_)), "{err}");
    }

    #[test]
    fn gauge_rescaling_leaves_the_certified_root_in_place() {
        let acc = chain_accuracy();
        let base = square_well();
        let k_tol = 1e-12;
        let reference = bracket_secular(&base, 0, k_tol, &acc).unwrap();
        let m_ref = 0.5 * (reference.k_lo + reference.k_hi);

        let gauges: Vec<Vec<SegmentDef>> = vec![
            // Uniform rescale of the interior basis.
            {
                let mut d = base.clone();
                d[1] = d[1].clone().with_gauge([7.3, 7.3]);
                d
            },
            // Mixed, sign-flipping interior rescale.
            {
                let mut d = base.clone();
                d[1] = d[1].clone().with_gauge([-2.0, 7.3]);
                d
            },
            // Outer rescales touch the launch and detection members.
            {
                let mut d = base.clone();
                d[0] = d[0].clone().with_gauge([0.5, 3.0]);
                d[2] = d[2].clone().with_gauge([1.0, -2.0]);
                d
            },
        ];
        for defs in gauges {
            let b = bracket_secular(&defs, 0, k_tol, &acc).unwrap();
            let m = 0.5 * (b.k_lo + b.k_hi);
            assert!(
                (m - m_ref).abs() <= 1e-12,
                "midpoint moved: {m} vs {m_ref} for {defs:?}"
            );
        }
    }

    #[test]
    fn deep_barrier_chains_fail_loudly() {
        // At d = 3 the matching point sits at t₀ ≈ 72, where the M-pair
        // products reach e^{t₀} ≈ 10³¹ and the f64 Wronskian is pure noise;
        // the matcher must refuse rather than hand back a quiet wrong root.
        let p = MorseParams::equal_strength(1.0, 1.8, 3.0).unwrap();
        let defs = symmetrized_morse_chain(&p).unwrap();
        let err = bracket_secular(&defs, 0, 1e-5, &chain_accuracy()).unwrap_err();
        assert!(
            matches!(
                err,
                SolverError::SingularTransfer(_) | SolverError::Guard(_)
            ),
            "{err}"
        );
    }

    #[test]
    fn chain_files_roundtrip_through_json() {
        let defs = vec![
            SegmentDef::constant(0.0, None, Some(-1.0)),
            SegmentDef::morse_arm(1.0, 1.8, 1.8, 1.0, false, Some(-1.0), Some(2.0))
                .with_gauge([2.0, -1.0]),
            SegmentDef::constant(0.0, Some(2.0), None),
        ];
        let text = serde_json::to_string_pretty(&defs).unwrap();
        assert!(text.contains("\"type\": \"constant\""));
        assert!(text.contains("\"type\": \"morse\""));
        assert!(text.contains("\"params\""));
        let back: Vec<SegmentDef> = serde_json::from_str(&text).unwrap();
        assert_eq!(back, defs);

        // Hand-written file shape: absent extents mean ±∞, absent gauge is
        // the unit gauge, absent Morse origin/mirrored take their defaults.
        let raw = r#"[
            {"type": "constant", "params": {"v0": 0.0}, "a_right": -1.0},
            {"type": "morse", "params": {"alpha": 1.0, "gamma1": 1.8, "gamma2": 1.8},
             "a_left": -1.0, "a_right": 2.0},
            {"type": "constant", "params": {"v0": 0.0}, "a_left": 2.0}
        ]"#;
        let parsed: Vec<SegmentDef> = serde_json::from_str(raw).unwrap();
        assert_eq!(parsed[0], SegmentDef::constant(0.0, None, Some(-1.0)));
        assert_eq!(
            parsed[1],
            SegmentDef::morse_arm(1.0, 1.8, 1.8, 0.0, false, Some(-1.0), Some(2.0))
        );
        assert_eq!(parsed[2], SegmentDef::constant(0.0, Some(2.0), None));
    }

    fn constant_segment() -> impl Strategy<Value = SegmentDef> {
        (-6.0..3.0f64).prop_map(|v0| SegmentDef::constant(v0, Some(-1.5), Some(1.5)))
    }

    fn morse_segment() -> impl Strategy<Value = SegmentDef> {
        (
            0.8..1.2f64,
            0.0..1.5f64,
            0.5..1.5f64,
            -0.3..0.3f64,
            proptest::bool::ANY,
        )
            .prop_map(|(alpha, gamma1, gamma2, origin, mirrored)| {
                SegmentDef::morse_arm(
                    alpha,
                    gamma1,
                    gamma2,
                    origin,
                    mirrored,
                    Some(-1.5),
                    Some(1.5),
                )
            })
    }

    fn any_segment() -> impl Strategy<Value = SegmentDef> {
        prop_oneof![3 => constant_segment(), 2 => morse_segment()]
    }

    proptest! {
        #![proptest_config(ProptestConfig { cases: 48, ..ProptestConfig::default() })]

        /// Re-expanding through an intermediate basis must agree with the
        /// direct expansion at the same point.
        #[test]
        fn transfer_composition_is_associative(
            a in any_segment(),
            b in any_segment(),
            c in any_segment(),
            e in -5.5..-0.2f64,
            x in -1.0..1.0f64,
        ) {
            let acc = chain_accuracy();
            let sa = Segment::build(&a, e, &acc).unwrap();
            let sb = Segment::build(&b, e, &acc).unwrap();
            let sc = Segment::build(&c, e, &acc).unwrap();
            let t_ab = match_boundary(&sa, &sb, x).unwrap();
            let t_bc = match_boundary(&sb, &sc, x).unwrap();
            let t_ac = match_boundary(&sa, &sc, x).unwrap();
            let composed = t_ab.then(&t_bc);
            let scale = t_ac
                .m
                .iter()
                .flatten()
                .fold(1.0f64, |m, v| m.max(v.abs()));
            for i in 0..2 {
                for j in 0..2 {
                    prop_assert!(
                        (composed.m[i][j] - t_ac.m[i][j]).abs() <= 1e-12 * scale,
                        "entry ({},{}): {} vs {}",
                        i, j, composed.m[i][j], t_ac.m[i][j]
                    );
                }
            }
        }
    }

    proptest! {
        #![proptest_config(ProptestConfig { cases: 8, ..ProptestConfig::default() })]

        /// Rescaling an interior basis is invisible to the certified roots.
        #[test]
        fn random_gauges_preserve_square_well_roots(
            v_mid in -6.0..-0.8f64,
            b1 in -2.0..-0.2f64,
            b2 in 0.2..2.0f64,
            g0 in prop_oneof![-9.0..-0.2f64, 0.2..9.0f64],
            g1 in prop_oneof![-9.0..-0.2f64, 0.2..9.0f64],
        ) {
            let base = vec![
                SegmentDef::constant(0.0, None, Some(b1)),
                SegmentDef::constant(v_mid, Some(b1), Some(b2)),
                SegmentDef::constant(0.0, Some(b2), None),
            ];
            let mut gauged = base.clone();
            gauged[1] = gauged[1].clone().with_gauge([g0, g1]);
            let acc = chain_accuracy();
            let a = bracket_secular(&base, 0, 1e-9, &acc).unwrap();
            let b = bracket_secular(&gauged, 0, 1e-9, &acc).unwrap();
            let (ma, mb) = (0.5 * (a.k_lo + a.k_hi), 0.5 * (b.k_lo + b.k_hi));
            prop_assert!((ma - mb).abs() <= 1e-9, "{ma} vs {mb}");
        }
    }
}
