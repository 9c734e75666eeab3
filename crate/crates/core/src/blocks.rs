//! Model linearizations and per-eigenvalue second-order DDE block
//! coefficients.
//!
//! A model is linearized on the synchronization manifold into eight scalars:
//! the local partials `F_phi, F_omega, F_phi_tau, F_omega_tau` and the coupling
//! partials `G_phi, G_omega, G_phi_tau, G_omega_tau` (the latter with the
//! fixed-point factor `w_ij` divided out). In the eigenbasis of the effective
//! Laplacian each mode obeys
//!
//! ```text
//! theta'' = (F_phi - lambda G_phi) theta + (F_omega - lambda G_omega) theta'
//!         + (F_phi_tau - lambda G_phi_tau) theta_tau
//!         + (F_omega_tau - lambda G_omega_tau) theta'_tau
//! ```
//!
//! and the block coefficients `(a, b, a_tau, b_tau)` are the negations of
//! those right-hand-side factors, so that the block reads
//! `theta'' = -a theta' - b theta - a_tau theta'_tau - b_tau theta_tau`.
//! The delay must live either in the phase channel or in the frequency
//! channel, never both.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Which channel carries the delay.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum DelayClass {
    /// Delay in the phase arguments (`b_tau` channel).
    PhaseDelay,
    /// Delay in the frequency arguments (`a_tau` channel).
    FrequencyDelay,
}

/// The eight linearization scalars plus the delayed-local-dynamics flag.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ModelJacobians {
    pub f_phi: f64,
    pub f_omega: f64,
    pub f_phi_tau: f64,
    pub f_omega_tau: f64,
    pub g_phi: f64,
    pub g_omega: f64,
    pub g_phi_tau: f64,
    pub g_omega_tau: f64,
    /// True when the local dynamics themselves are delayed (f_tau != 0);
    /// decides whether the longitudinal mode joins the transversal set.
    pub delayed_local: bool,
}

impl ModelJacobians {
    /// Validate the eight scalars: exactly one delayed channel (phase or
    /// frequency) must be active.
    pub fn new(
        f_phi: f64,
        f_omega: f64,
        f_phi_tau: f64,
        f_omega_tau: f64,
        g_phi: f64,
        g_omega: f64,
        g_phi_tau: f64,
        g_omega_tau: f64,
    ) -> Result<Self> {
        let phase_channel = f_phi_tau != 0.0 || g_phi_tau != 0.0;
        let freq_channel = f_omega_tau != 0.0 || g_omega_tau != 0.0;
        if phase_channel && freq_channel {
            return Err(Error::BothDelayChannels);
        }
        if !phase_channel && !freq_channel {
            return Err(Error::NoDelayChannel);
        }
        Ok(ModelJacobians {
            f_phi,
            f_omega,
            f_phi_tau,
            f_omega_tau,
            g_phi,
            g_omega,
            g_phi_tau,
            g_omega_tau,
            delayed_local: f_phi_tau != 0.0 || f_omega_tau != 0.0,
        })
    }

    pub fn delay_class(&self) -> DelayClass {
        if self.f_phi_tau != 0.0 || self.g_phi_tau != 0.0 {
            DelayClass::PhaseDelay
        } else {
            DelayClass::FrequencyDelay
        }
    }
}

/// Linearization of the droop-controlled inverter model
/// `phi'' = -alpha_tilde phi' + beta_tilde (P - sum K sin(phase diff at t - tau))`.
///
/// The droop factor `beta_tilde` multiplies the coupling, so it is folded into
/// the delayed coupling partial and the effective Laplacian keeps its bare
/// s^-2 scale. Per mode this yields `(a, b, a_tau, b_tau) =
/// (alpha_tilde, 0, 0, beta_tilde * lambda)`.
pub fn jacobians_inverter(alpha_tilde: f64, beta_tilde: f64) -> Result<ModelJacobians> {
    if !(alpha_tilde > 0.0) {
        return Err(Error::NonPositiveParameter { name: "alpha_tilde", value: alpha_tilde });
    }
    if !(beta_tilde > 0.0) {
        return Err(Error::NonPositiveParameter { name: "beta_tilde", value: beta_tilde });
    }
    ModelJacobians::new(0.0, -alpha_tilde, 0.0, 0.0, 0.0, 0.0, beta_tilde, 0.0)
}

/// Linearization of the decentral smart grid control model
/// `phi'' = P - alpha phi' - gamma phi'(t - tau) + sum K sin(phase diff)`.
///
/// The price elasticity acts as a second, delayed damping; per mode this
/// yields `(a, b, a_tau, b_tau) = (alpha, lambda, gamma, 0)`.
pub fn jacobians_dsgc(alpha: f64, gamma: f64) -> Result<ModelJacobians> {
    if !(alpha > 0.0) {
        return Err(Error::NonPositiveParameter { name: "alpha", value: alpha });
    }
    if !(gamma > 0.0) {
        return Err(Error::NonPositiveParameter { name: "gamma", value: gamma });
    }
    ModelJacobians::new(0.0, -alpha, 0.0, -gamma, 1.0, 0.0, 0.0, 0.0)
}

/// Coefficients of one second-order DDE block
/// `theta'' = -a theta' - b theta - a_tau theta'_tau - b_tau theta_tau`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BlockCoefficients {
    /// Effective Laplacian eigenvalue (s^-2).
    pub lambda: f64,
    /// Instantaneous damping (s^-1).
    pub a: f64,
    /// Instantaneous stiffness (s^-2).
    pub b: f64,
    /// Delayed damping (s^-1).
    pub a_tau: f64,
    /// Delayed stiffness (s^-2).
    pub b_tau: f64,
}

/// Combine local and coupling partials, affine in `lambda`, into block
/// coefficients under the sign convention above.
pub fn block_coefficients(jac: &ModelJacobians, lambda: f64) -> Result<BlockCoefficients> {
    if !(lambda >= 0.0) {
        return Err(Error::NegativeLambda { lambda });
    }
    Ok(BlockCoefficients {
        lambda,
        a: -(jac.f_omega - lambda * jac.g_omega),
        b: -(jac.f_phi - lambda * jac.g_phi),
        a_tau: -(jac.f_omega_tau - lambda * jac.g_omega_tau),
        b_tau: -(jac.f_phi_tau - lambda * jac.g_phi_tau),
    })
}

/// Mode indices relevant for stability (1-based over ascending eigenvalues):
/// `{2..n}` when only the coupling is delayed, `{1..n}` when the local
/// dynamics carry the delay.
pub fn transversal_set(jac: &ModelJacobians, n: usize) -> Vec<usize> {
    let start = if jac.delayed_local { 1 } else { 2 };
    (start..=n).collect()
}

/// Model selection with parameters; produces the matching Jacobians and, for
/// the two named models, the nonlinear right-hand side for simulation.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Model {
    Inverter { alpha_tilde: f64, beta_tilde: f64 },
    Dsgc { alpha: f64, gamma: f64 },
    Generic { jacobians: ModelJacobians },
}

impl Model {
    pub fn jacobians(&self) -> Result<ModelJacobians> {
        match *self {
            Model::Inverter { alpha_tilde, beta_tilde } => {
                jacobians_inverter(alpha_tilde, beta_tilde)
            }
            Model::Dsgc { alpha, gamma } => jacobians_dsgc(alpha, gamma),
            Model::Generic { jacobians } => ModelJacobians::new(
                jacobians.f_phi,
                jacobians.f_omega,
                jacobians.f_phi_tau,
                jacobians.f_omega_tau,
                jacobians.g_phi,
                jacobians.g_omega,
                jacobians.g_phi_tau,
                jacobians.g_omega_tau,
            ),
        }
    }

    pub fn name(&self) -> &'static str {
        match self {
            Model::Inverter { .. } => "inverter",
            Model::Dsgc { .. } => "dsgc",
            Model::Generic { .. } => "generic",
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;
    use proptest::prelude::*;

    #[test]
    fn inverter_anchor_identity() {
        // (a, b, a_tau, b_tau) = (alpha_tilde, 0, 0, beta_tilde * lambda), exactly.
        let jac = jacobians_inverter(0.1, 0.07).unwrap();
        for lambda in [0.0, 1.0, 7.937253933193771, 31.749015732775087] {
            let c = block_coefficients(&jac, lambda).unwrap();
            assert_eq!(c.a, 0.1);
            assert_eq!(c.b, 0.0);
            assert_eq!(c.a_tau, 0.0);
            assert_eq!(c.b_tau, 0.07 * lambda);
        }
        assert_eq!(jac.delay_class(), DelayClass::PhaseDelay);
        assert!(!jac.delayed_local);
    }

    #[test]
    fn inverter_example_value() {
        let jac = jacobians_inverter(0.1, 0.07).unwrap();
        let c = block_coefficients(&jac, 31.749).unwrap();
        assert_abs_diff_eq!(c.b_tau, 2.22243, epsilon = 1e-5);
        let c0 = block_coefficients(&jac, 0.0).unwrap();
        assert_eq!(c0.b_tau, 0.0);
    }

    #[test]
    fn dsgc_anchor_identity() {
        // (a, b, a_tau, b_tau) = (alpha, lambda, gamma, 0), exactly.
        let jac = jacobians_dsgc(0.1, 0.25).unwrap();
        for lambda in [0.0, 7.937253933193771, 31.749015732775087] {
            let c = block_coefficients(&jac, lambda).unwrap();
            assert_eq!(c.a, 0.1);
            assert_eq!(c.b, lambda);
            assert_eq!(c.a_tau, 0.25);
            assert_eq!(c.b_tau, 0.0);
        }
        assert_eq!(jac.delay_class(), DelayClass::FrequencyDelay);
        assert!(jac.delayed_local);
    }

    #[test]
    fn generic_sign_convention() {
        // F_omega = -0.2, G_omega = 0.05, lambda = 2 -> a = 0.3.
        let jac = ModelJacobians::new(0.0, -0.2, 0.1, 0.0, 0.0, 0.05, 0.0, 0.0).unwrap();
        let c = block_coefficients(&jac, 2.0).unwrap();
        assert_abs_diff_eq!(c.a, 0.3, epsilon = 1e-15);
    }

    #[test]
    fn both_delay_channels_rejected() {
        assert!(matches!(
            ModelJacobians::new(0.0, -0.1, 0.5, -0.2, 0.0, 0.0, 0.0, 0.0),
            Err(Error::BothDelayChannels)
        ));
        assert!(matches!(
            ModelJacobians::new(0.0, -0.1, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0),
            Err(Error::NoDelayChannel)
        ));
    }

    #[test]
    fn nonpositive_parameters_rejected() {
        assert!(jacobians_inverter(0.0, 0.07).is_err());
        assert!(jacobians_inverter(0.1, -0.1).is_err());
        assert!(jacobians_dsgc(-0.1, 0.25).is_err());
        assert!(jacobians_dsgc(0.1, 0.0).is_err());
    }

    #[test]
    fn negative_lambda_rejected() {
        let jac = jacobians_inverter(0.1, 0.07).unwrap();
        assert!(matches!(
            block_coefficients(&jac, -1.0),
            Err(Error::NegativeLambda { .. })
        ));
    }

    #[test]
    fn transversal_sets() {
        let inv = jacobians_inverter(0.1, 0.07).unwrap();
        let dsgc = jacobians_dsgc(0.1, 0.25).unwrap();
        assert_eq!(transversal_set(&inv, 4), vec![2, 3, 4]);
        assert_eq!(transversal_set(&dsgc, 4), vec![1, 2, 3, 4]);
        assert_eq!(transversal_set(&inv, 2), vec![2]);
    }

    proptest! {
        /// Coefficients are affine in lambda: values at 0 and 1 determine all
        /// modes.
        #[test]
        fn coefficients_affine_in_lambda(
            f_phi in -2.0f64..2.0,
            f_omega in -2.0f64..2.0,
            g_phi in -2.0f64..2.0,
            g_omega in -2.0f64..2.0,
            g_phi_tau in 0.01f64..2.0,
            lambda in 0.0f64..100.0,
        ) {
            let jac = ModelJacobians::new(
                f_phi, f_omega, 0.0, 0.0, g_phi, g_omega, g_phi_tau, 0.0,
            ).unwrap();
            let c0 = block_coefficients(&jac, 0.0).unwrap();
            let c1 = block_coefficients(&jac, 1.0).unwrap();
            let c = block_coefficients(&jac, lambda).unwrap();
            let predict = |at0: f64, at1: f64| at0 + lambda * (at1 - at0);
            prop_assert!((c.a - predict(c0.a, c1.a)).abs() < 1e-9);
            prop_assert!((c.b - predict(c0.b, c1.b)).abs() < 1e-9);
            prop_assert!((c.b_tau - predict(c0.b_tau, c1.b_tau)).abs() < 1e-9);
        }
    }
}
