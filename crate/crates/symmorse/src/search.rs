//! Momentum-space level isolation and tail-sign bisection, shared by every
//! eigenvalue backend (the closed-form solution bracketer, the
//! finite-difference shooting solver, and the piecewise matcher).
//!
//! All backends expose the same two observables at a trial momentum
//! k = √(−E):
//!
//! - a node count of the regular solution over a classically-motivated
//!   window, and
//! - the sign of the coefficient of the growing tail (or of the profile at
//!   the far wall, its discrete analogue).
//!
//! Sturm oscillation theory makes `nodes + flip` a monotone step function of
//! decreasing k that counts the eigenvalues deeper than the trial energy:
//! the tail sign below the sector ground state is +1 for our normalizations,
//! and it flips exactly once at every eigenvalue, while one extra node
//! enters the window shortly after each flip. Scanning k geometrically
//! downward from just below the well depth therefore isolates any requested
//! level between two trial momenta, and plain bisection on the tail sign
//! then sharpens the bracket to tolerance. Sharing this driver across
//! backends means a disagreement between them indicts the solution
//! machinery, never the search logic.

use crate::error::SolverError;

/// How many eigenvalues lie deeper (larger k) than the probed momentum,
/// given the node count and tail sign observed there. Below the ground
/// state the tail sign is +1 and there are no nodes; each crossed eigenvalue
/// flips the sign first and grows a visible node shortly after, so the count
/// is `nodes` when the sign still matches the parity of `nodes` and
/// `nodes + 1` once it has flipped. A tail exactly at zero sits on an
/// eigenvalue; it is attributed to the shallower side.
pub(crate) fn levels_deeper(nodes: usize, tail_sign: i8) -> usize {
    let unflipped: i8 = if nodes % 2 == 0 { 1 } else { -1 };
    if tail_sign == unflipped || tail_sign == 0 {
        nodes
    } else {
        nodes + 1
    }
}

/// Scan plan for isolating one level.
pub(crate) struct LevelQuery {
    /// 0-based index of the level within the scanned ladder (deepest = 0).
    pub level: usize,
    /// Scan starts here, just below the momentum of the well bottom.
    pub k_start: f64,
    /// Geometric decay factor per scan step, in (0, 1).
    pub scan_ratio: f64,
    /// Scan step budget before giving up with NoSuchLevel.
    pub max_scan_steps: usize,
    /// Below this momentum the backend's observables are unreliable (e.g.
    /// the turning point leaves the integration window); the scan probes the
    /// floor once and stops.
    pub k_floor: f64,
}

/// A momentum interval certified to contain exactly the requested level:
/// `levels_deeper(k_hi) == level` and `levels_deeper(k_lo) == level + 1`.
#[derive(Debug, Clone, Copy)]
pub(crate) struct IsolatedBracket {
    pub k_lo: f64,
    pub k_hi: f64,
}

/// Isolate level `q.level` with a downward geometric scan followed by
/// midpoint refinement of any multi-level jump. `classify` returns
/// (nodes, tail_sign) at a trial momentum; `evals` counts every call.
pub(crate) fn isolate_level(
    q: &LevelQuery,
    classify: &mut dyn FnMut(f64) -> Result<(usize, i8), SolverError>,
    evals: &mut usize,
) -> Result<IsolatedBracket, SolverError> {
    let mut count_at = |k: f64, evals: &mut usize| -> Result<usize, SolverError> {
        let (nodes, sign) = classify(k)?;
        *evals += 1;
        Ok(levels_deeper(nodes, sign))
    };

    let mut hi = q.k_start;
    let mut c_hi = count_at(hi, evals)?;
    if c_hi > q.level {
        return Err(SolverError::Guard(format!(
            "scan started at k = {hi} with {c_hi} levels already deeper; k_start must sit \
             below the well bottom"
        )));
    }

    // Downward geometric scan until the cumulative count passes the level.
    let (mut lo, mut c_lo);
    let mut k = hi;
    let mut steps = 0usize;
    loop {
        steps += 1;
        if steps > q.max_scan_steps {
            return Err(SolverError::NoSuchLevel(format!(
                "level {} not found above k = {k:.3e} after {} scan steps",
                q.level, q.max_scan_steps
            )));
        }
        let at_floor = k * q.scan_ratio <= q.k_floor;
        k = if at_floor { q.k_floor } else { k * q.scan_ratio };
        let c = count_at(k, evals)?;
        if c > q.level {
            lo = k;
            c_lo = c;
            break;
        }
        hi = k;
        c_hi = c;
        if at_floor {
            return Err(SolverError::NoSuchLevel(format!(
                "only {c} levels lie above the reliable momentum floor {:.3e}; \
                 level {} does not exist there (a larger domain may expose shallower levels)",
                q.k_floor, q.level
            )));
        }
    }

    // Shrink until the interval holds exactly one eigenvalue boundary.
    while !(c_hi == q.level && c_lo == q.level + 1) {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            return Err(SolverError::PrecisionFloor(format!(
                "levels {}..{} are closer than f64 spacing near k = {mid}; \
                 they cannot be separated at this precision",
                c_hi, c_lo
            )));
        }
        let c = count_at(mid, evals)?;
        if c <= q.level {
            hi = mid;
            c_hi = c;
        } else {
            lo = mid;
            c_lo = c;
        }
    }
    Ok(IsolatedBracket { k_lo: lo, k_hi: hi })
}

/// Bisect an isolated bracket on the tail sign alone until `stop(k_lo, k_hi)`
/// is satisfied. The sign at `k_hi` (the deeper-energy, not-yet-flipped side)
/// orients the search; an exactly-zero tail collapses the bracket to a
/// relative ±1e−13 pinch around the root. Returns (k_lo, k_hi).
pub(crate) fn bisect_tail_sign(
    bracket: IsolatedBracket,
    stop: &dyn Fn(f64, f64) -> bool,
    tail_sign: &mut dyn FnMut(f64) -> Result<i8, SolverError>,
    evals: &mut usize,
) -> Result<(f64, f64), SolverError> {
    let mut lo = bracket.k_lo;
    let mut hi = bracket.k_hi;
    let s_hi = {
        let s = tail_sign(hi)?;
        *evals += 1;
        s
    };
    if s_hi == 0 {
        return Ok((hi * (1.0 - 1e-13), hi * (1.0 + 1e-13)));
    }
    let mut iterations = 0usize;
    while !stop(lo, hi) {
        iterations += 1;
        if iterations > 400 {
            return Err(SolverError::Convergence(format!(
                "tail-sign bisection did not reach the stopping width within 400 steps \
                 (current bracket [{lo}, {hi}])"
            )));
        }
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            // f64 resolution exhausted; the bracket cannot shrink further.
            break;
        }
        let s = tail_sign(mid)?;
        *evals += 1;
        if s == 0 {
            lo = mid * (1.0 - 1e-13);
            hi = mid * (1.0 + 1e-13);
            break;
        }
        if s == s_hi {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    Ok((lo, hi))
}
