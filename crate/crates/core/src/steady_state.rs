//! Synchronous fixed point of the sine-coupled models and the effective graph
//! Laplacian of the linearization around it.
//!
//! Both supported models share the steady-state equation
//! `P_i = sum_j K_ij sin(phi_i - phi_j)`. The solver runs Newton iteration on
//! the residual with node 0 pinned to zero phase (the dynamics are invariant
//! under a uniform shift, so some gauge must be fixed), starting from the flat
//! profile `phi = 0`. Solutions with an edge angle at or beyond pi/2 are
//! rejected: the flow model is only meaningful on the normal-operation branch.

use ndarray::{Array1, Array2};

use crate::error::{Error, Result};
use crate::linalg::lu_solve;
use crate::network::Network;

/// Default residual tolerance (s^-2).
pub const DEFAULT_TOL: f64 = 1e-10;
/// Default Newton iteration cap.
pub const DEFAULT_MAX_ITER: usize = 50;

/// Phase-locked fixed point with diagnostics.
#[derive(Debug, Clone)]
pub struct SynchronousState {
    /// Fixed-point phase angles, gauge-fixed to `phases[0] = 0` (radians).
    pub phases: Array1<f64>,
    /// Max-norm of the power-flow residual (s^-2).
    pub residual_norm: f64,
    /// Largest |phi_i - phi_j| over edges (radians), strictly below pi/2.
    pub max_edge_angle: f64,
    /// Newton iterations used.
    pub iterations: usize,
    /// Residual max-norm after each iteration (index 0 is the initial guess).
    pub residual_history: Vec<f64>,
}

fn residual(network: &Network, phases: &Array1<f64>) -> Array1<f64> {
    let n = network.n();
    let k = network.adjacency();
    let mut r = network.power().clone();
    for i in 0..n {
        for j in 0..n {
            let kij = k[[i, j]];
            if kij > 0.0 {
                r[i] -= kij * (phases[i] - phases[j]).sin();
            }
        }
    }
    r
}

fn max_norm(v: &Array1<f64>) -> f64 {
    v.iter().fold(0.0f64, |m, x| m.max(x.abs()))
}

/// Largest |phi_i - phi_j| over the network's edges.
pub fn max_edge_angle(network: &Network, phases: &Array1<f64>) -> f64 {
    network
        .edges()
        .into_iter()
        .map(|(i, j, _)| (phases[i] - phases[j]).abs())
        .fold(0.0, f64::max)
}

/// Solve the synchronous fixed point by Newton iteration.
///
/// Requires balanced power and a connected network. Returns an error if the
/// iteration does not reach `tol` within `max_iter` steps, if the Newton
/// matrix becomes singular, or if the converged solution leaves the
/// normal-operation branch (some edge angle >= pi/2).
pub fn solve_fixed_point(network: &Network, tol: f64, max_iter: usize) -> Result<SynchronousState> {
    network.check_power_balance()?;
    if !network.is_connected() {
        return Err(Error::Disconnected);
    }
    let n = network.n();
    let mut phases = Array1::zeros(n);
    let mut r = residual(network, &phases);
    let mut norm = max_norm(&r);
    let mut history = vec![norm];
    let mut iterations = 0;

    while norm > tol {
        if iterations >= max_iter {
            return Err(Error::NoConvergence { iterations, residual: norm });
        }
        // Newton matrix: the effective Laplacian at the current phases,
        // grounded at node 0. d r_i / d phi_k = -L(phi)_ik.
        let k = network.adjacency();
        let mut jac = Array2::zeros((n - 1, n - 1));
        for i in 1..n {
            let mut diag = 0.0;
            for j in 0..n {
                let kij = k[[i, j]];
                if kij > 0.0 {
                    let w = kij * (phases[i] - phases[j]).cos();
                    diag += w;
                    if j >= 1 {
                        jac[[i - 1, j - 1]] = -w;
                    }
                }
            }
            jac[[i - 1, i - 1]] = diag;
        }
        let rhs = Array1::from_iter((1..n).map(|i| r[i]));
        let delta = lu_solve(jac, rhs)?;
        for i in 1..n {
            phases[i] += delta[i - 1];
        }
        r = residual(network, &phases);
        norm = max_norm(&r);
        history.push(norm);
        iterations += 1;
        if !norm.is_finite() {
            return Err(Error::NoConvergence { iterations, residual: norm });
        }
    }

    // Reject solutions outside the normal-operation branch.
    for (i, j, _) in network.edges() {
        let angle = (phases[i] - phases[j]).abs();
        if angle >= std::f64::consts::FRAC_PI_2 {
            return Err(Error::AngleLimit { i, j, angle });
        }
    }

    Ok(SynchronousState {
        max_edge_angle: max_edge_angle(network, &phases),
        phases,
        residual_norm: norm,
        iterations,
        residual_history: history,
    })
}

/// Effective graph Laplacian of the linearization around a fixed point.
#[derive(Debug, Clone)]
pub struct EffectiveLaplacian {
    /// Symmetric n x n matrix with zero row sums (s^-2).
    pub matrix: Array2<f64>,
    /// Fixed-point factors `w_ij = cos(phi_j - phi_i)` per edge `(i, j, w)`.
    pub edge_weights: Vec<(usize, usize, f64)>,
}

/// Build the effective Laplacian `L_ij = -w_ij K_ij + delta_ij sum_j w_ij K_ij`
/// with `w_ij = cos(phi_j - phi_i)`.
pub fn effective_laplacian(
    network: &Network,
    state: &SynchronousState,
) -> Result<EffectiveLaplacian> {
    let n = network.n();
    let mut matrix = Array2::zeros((n, n));
    let mut edge_weights = Vec::new();
    for (i, j, kij) in network.edges() {
        let w = (state.phases[j] - state.phases[i]).cos();
        if w <= 0.0 {
            return Err(Error::NonPositiveEdgeWeight { i, j, weight: w });
        }
        edge_weights.push((i, j, w));
        let entry = w * kij;
        matrix[[i, j]] = -entry;
        matrix[[j, i]] = -entry;
        matrix[[i, i]] += entry;
        matrix[[j, j]] += entry;
    }
    Ok(EffectiveLaplacian { matrix, edge_weights })
}
