//! Equivariance of the flat norm under integer dilations.
//!
//! If `{T - dS, S}` is optimal at scale `k`, the dilated pair is optimal at
//! scale 1 for the dilated input, and `F_1(d_k T) = k^deg(T) F_k(T)`.

use super::{flat_norm_lp, LpConfig};
use crate::complex::{dilate_pushforward, Chain};
use crate::decomposition::Decomposition;
use crate::error::{Error, Result};
use crate::numfmt::sig9;

#[derive(Clone, Debug)]
pub struct ScalingReport {
    pub factor: usize,
    /// `F_k(T)`.
    pub scaled_value: f64,
    /// `F_1(d_k T)`.
    pub dilated_value: f64,
    /// `k^deg(T) F_k(T)`.
    pub expected_dilated_value: f64,
    /// `M(d_k S) + M(d_k T - d(d_k S))` for the optimal `S` at scale `k`.
    pub pushed_objective: f64,
    pub support_pushed_s: usize,
    pub support_dilated_s: usize,
    /// Whether the dilated optimum and the pushed-forward `S` agree.
    pub supports_equal: bool,
    pub at_scale: Decomposition,
    pub dilated: Decomposition,
}

impl ScalingReport {
    pub fn value_error(&self) -> f64 {
        (self.dilated_value - self.expected_dilated_value).abs()
    }

    pub fn pushed_error(&self) -> f64 {
        (self.pushed_objective - self.dilated_value).abs()
    }

    pub fn holds(&self, tol: f64) -> bool {
        self.value_error() <= tol && self.pushed_error() <= tol
    }

    pub fn report(&self) -> String {
        format!(
            "factor={}\nscaled_value={}\ndilated_value={}\nexpected_dilated_value={}\n\
             pushed_objective={}\nsupport_pushed_s={}\nsupport_dilated_s={}\nsupports_equal={}\n",
            self.factor,
            sig9(self.scaled_value),
            sig9(self.dilated_value),
            sig9(self.expected_dilated_value),
            sig9(self.pushed_objective),
            self.support_pushed_s,
            self.support_dilated_s,
            self.supports_equal
        )
    }
}

/// Solves `T` at scale `lambda` and `d_lambda T` at scale 1 and compares.
/// `lambda` must be a positive integer.
pub fn scaling_check(t: &Chain, lambda: f64) -> Result<ScalingReport> {
    if !(lambda.is_finite() && lambda >= 1.0 && lambda.fract() == 0.0) {
        return Err(Error::InvalidParameter(format!(
            "scaling check needs a positive integer scale, got {lambda}"
        )));
    }
    let factor = lambda as usize;
    let at_scale = flat_norm_lp(t, &LpConfig::new(lambda))?;
    let dt = dilate_pushforward(t, factor)?;
    let dilated = flat_norm_lp(&dt, &LpConfig::new(1.0))?;
    let ds = dilate_pushforward(&at_scale.s_chain, factor)?;
    let pushed_objective = ds.unit_mass() + dt.try_sub(&ds.boundary()?)?.unit_mass();
    let expected = (factor as f64).powi(t.degree() as i32) * at_scale.value;
    let supports_equal = ds.support() == dilated.s_chain.support();
    Ok(ScalingReport {
        factor,
        scaled_value: at_scale.value,
        dilated_value: dilated.value,
        expected_dilated_value: expected,
        pushed_objective,
        support_pushed_s: ds.len(),
        support_dilated_s: dilated.s_chain.len(),
        supports_equal,
        at_scale,
        dilated,
    })
}
