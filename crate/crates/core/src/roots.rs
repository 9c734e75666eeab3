//! Decisive roots of the block characteristic function on the imaginary axis.
//!
//! With `z = i y` the characteristic function of a block splits into
//!
//! ```text
//! Re = (b tau^2 - y^2) cos y - a tau y sin y + b_tau tau^2
//! Im = (b tau^2 - y^2) sin y + a tau y cos y + a_tau tau y
//! ```
//!
//! For phase delay (`a_tau = 0`) the decisive root is the unique zero of the
//! imaginary part in `(0, pi]`. For frequency delay (`b_tau = 0`) the zeros of
//! the real part carry the information: one root lies in `(0, pi/2)` and one
//! in every interval `(m pi - pi/2, m pi + pi/2)`; the decisive pair
//! `(y*, y**)` minimizes the distance to `rho = tau sqrt(b)` over odd and even
//! interval indices respectively, and always lies within `3 pi / 2` of `rho`.
//! All roots are bracketed, so plain bisection is used throughout.

use serde::{Deserialize, Serialize};
use std::f64::consts::{FRAC_PI_2, PI};

use crate::error::{Error, Result};

/// Bisection interval target.
const BISECT_TOL: f64 = 1e-13;
/// Bisection iteration cap.
const BISECT_MAX_ITER: usize = 200;
/// Shrink applied to interval endpoints where `cos y = 0` exactly.
const ENDPOINT_SHRINK: f64 = 1e-9;
/// Left end of brackets that open at zero.
const EPS_LEFT: f64 = 1e-12;
/// Below this value of `b tau^2` the frequency-delay analysis switches to the
/// `b -> 0` limit, where the even decisive root degenerates to `y** = 0`.
const B_TAU2_ZERO: f64 = 1e-18;

/// Imaginary part of the characteristic function at `z = i y` for the
/// phase-delay case (`a_tau = 0`): `(b tau^2 - y^2) sin y + a tau y cos y`.
pub fn im_part(y: f64, a: f64, b: f64, tau: f64) -> f64 {
    (b * tau * tau - y * y) * y.sin() + a * tau * y * y.cos()
}

/// Real part of the characteristic function at `z = i y` for the
/// frequency-delay case (`b_tau = 0`): `(b tau^2 - y^2) cos y - a tau y sin y`.
pub fn re_part(y: f64, a: f64, b: f64, tau: f64) -> f64 {
    (b * tau * tau - y * y) * y.cos() - a * tau * y * y.sin()
}

/// One bracketed root candidate for the frequency-delay case.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RootCandidate {
    /// Interval index: the root lies in `(m pi - pi/2, m pi + pi/2)`
    /// (`(0, pi/2)` for `m = 0`).
    pub m: usize,
    pub y: f64,
    /// |re_part(y)| after re-evaluation.
    pub residual: f64,
}

/// Decisive roots of one block.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub enum DecisiveRoots {
    PhaseDelay {
        /// The unique root of the imaginary part in `(0, pi]` (dimensionless,
        /// `y = omega tau`).
        y1: f64,
        /// |im_part(y1)| after re-evaluation.
        residual: f64,
    },
    FrequencyDelay {
        /// Decisive root from odd interval indices.
        y_star: f64,
        m_star: usize,
        residual_star: f64,
        /// Decisive root from even interval indices (0 in the `b -> 0` limit).
        y_star_star: f64,
        m_star_star: usize,
        residual_star_star: f64,
        /// All candidates examined (intervals `j-1, j, j+1` around `rho`).
        candidates: Vec<RootCandidate>,
    },
}

impl DecisiveRoots {
    pub fn class_name(&self) -> &'static str {
        match self {
            DecisiveRoots::PhaseDelay { .. } => "phase-delay",
            DecisiveRoots::FrequencyDelay { .. } => "frequency-delay",
        }
    }
}

fn bisect<F: Fn(f64) -> f64>(f: &F, mut lo: f64, mut hi: f64, m: usize) -> Result<f64> {
    let f_lo = f(lo);
    let f_hi = f(hi);
    if f_lo == 0.0 {
        return Ok(lo);
    }
    if f_hi == 0.0 {
        return Ok(hi);
    }
    if f_lo.signum() == f_hi.signum() {
        return Err(Error::BracketFailure { m, lo, hi, f_lo, f_hi });
    }
    let mut iter = 0;
    while hi - lo > BISECT_TOL && iter < BISECT_MAX_ITER {
        let mid = 0.5 * (lo + hi);
        let f_mid = f(mid);
        if f_mid == 0.0 {
            return Ok(mid);
        }
        if f_mid.signum() == f_lo.signum() {
            lo = mid;
        } else {
            hi = mid;
        }
        iter += 1;
    }
    Ok(0.5 * (lo + hi))
}

/// Decisive root for the phase-delay case: the unique zero of [`im_part`] in
/// `(0, pi]`. Requires `a > 0`, `-a < b tau <= 0` and `tau > 0`.
pub fn decisive_root_phase(a: f64, b: f64, tau: f64) -> Result<DecisiveRoots> {
    if !(tau > 0.0) {
        return Err(Error::InvalidArgument { name: "tau", value: tau, constraint: "must be > 0" });
    }
    let b_tau = b * tau;
    if !(a > 0.0) || !(b_tau <= 0.0) || !(-a < b_tau) {
        return Err(Error::OutsidePhaseRegime { a, b_tau_product: b_tau });
    }
    let f = |y: f64| im_part(y, a, b, tau);
    // im_part(eps) ~ eps tau (a + b tau) > 0 by the regime check;
    // im_part(pi) = -a tau pi + O(b tau^2 sin pi) < 0.
    let y1 = bisect(&f, EPS_LEFT, PI, 0)?;
    Ok(DecisiveRoots::PhaseDelay { y1, residual: f(y1).abs() })
}

/// Decisive roots for the frequency-delay case. Requires `a > 0`, `b >= 0`
/// and `tau > 0` (the `b = 0` longitudinal mode is handled as the `b -> 0`
/// limit with `y** = 0`).
///
/// Locates `rho = tau sqrt(b)` in its interval `j`, finds the bracketed root
/// of [`re_part`] in each of the intervals `j-1, j, j+1` (clipped below at
/// `m = 0`), and selects the decisive roots as the candidates minimizing
/// `|y - rho|` over odd and even `m`. Equidistant ties go to the smaller root.
pub fn decisive_roots_frequency(a: f64, b: f64, tau: f64) -> Result<DecisiveRoots> {
    if !(a > 0.0) || !(b >= 0.0) || !(tau > 0.0) {
        return Err(Error::OutsideFrequencyRegime { a, b, tau });
    }
    let b_tau2 = b * tau * tau;
    let f = |y: f64| re_part(y, a, b, tau);

    if b_tau2 < B_TAU2_ZERO {
        // b -> 0 limit: re_part(0) = b tau^2 = 0, so the even decisive root
        // degenerates to 0 and the odd one sits in interval 1.
        let y_star = bisect(&f, FRAC_PI_2 + ENDPOINT_SHRINK, 3.0 * FRAC_PI_2 - ENDPOINT_SHRINK, 1)?;
        let candidates = vec![
            RootCandidate { m: 0, y: 0.0, residual: b_tau2 },
            RootCandidate { m: 1, y: y_star, residual: f(y_star).abs() },
        ];
        return Ok(DecisiveRoots::FrequencyDelay {
            y_star,
            m_star: 1,
            residual_star: f(y_star).abs(),
            y_star_star: 0.0,
            m_star_star: 0,
            residual_star_star: b_tau2,
            candidates,
        });
    }

    let rho = b_tau2.sqrt();
    // Interval index j with rho in (j pi - pi/2, j pi + pi/2]; exact endpoint
    // values are assigned to the lower interval.
    let shifted = rho / PI + 0.5;
    let mut j = shifted.floor() as i64;
    if shifted.fract() == 0.0 && j > 0 {
        j -= 1;
    }

    let m_lo = (j - 1).max(0) as usize;
    let m_hi = (j + 1) as usize;
    let mut candidates = Vec::new();
    for m in m_lo..=m_hi {
        let (lo, hi) = if m == 0 {
            (EPS_LEFT, FRAC_PI_2 - ENDPOINT_SHRINK)
        } else {
            (m as f64 * PI - FRAC_PI_2 + ENDPOINT_SHRINK, m as f64 * PI + FRAC_PI_2 - ENDPOINT_SHRINK)
        };
        let y = bisect(&f, lo, hi, m)?;
        candidates.push(RootCandidate { m, y, residual: f(y).abs() });
    }

    let pick = |parity: usize| -> Option<&RootCandidate> {
        candidates
            .iter()
            .filter(|c| c.m % 2 == parity)
            .min_by(|x, y_| {
                let dx = (x.y - rho).abs();
                let dy = (y_.y - rho).abs();
                dx.partial_cmp(&dy)
                    .unwrap()
                    .then(x.y.partial_cmp(&y_.y).unwrap())
            })
    };
    let star = pick(1).expect("an odd interval is always examined");
    let star_star = pick(0).expect("an even interval is always examined");

    Ok(DecisiveRoots::FrequencyDelay {
        y_star: star.y,
        m_star: star.m,
        residual_star: star.residual,
        y_star_star: star_star.y,
        m_star_star: star_star.m,
        residual_star_star: star_star.residual,
        candidates,
    })
}
