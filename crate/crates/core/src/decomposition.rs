//! The optimal pair `{T - dS, S}` returned by every solver.

use std::fmt::Write as _;

use crate::complex::{BinarySet, Chain};
use crate::error::{Error, Result};
use crate::mincut::Connectivity;
use crate::numfmt::sig9;

/// Outcome of the optional non-uniqueness probe of the LP solver.
#[derive(Clone, Debug)]
pub struct UniquenessProbe {
    /// No other optimal `S` was found on the optimal face.
    pub unique: bool,
    /// Optimal fillings reached by the two lexicographic tie-breaks.
    pub alternates: Vec<Chain>,
}

/// Which solver produced a decomposition, with its certificate data.
#[derive(Clone, Debug)]
pub enum Provenance {
    MinCut {
        connectivity: Connectivity,
        /// Max-flow value; equals the cut value and hence `value`.
        max_flow: f64,
    },
    ChainLp {
        /// Absolute difference between `value` and `dual_bound`.
        gap: f64,
        dual_bound: f64,
        iterations: usize,
        /// Working-set rounds until no dual constraint was violated.
        rounds: usize,
        integral: bool,
        lambda_zero: bool,
        uniqueness: Option<UniquenessProbe>,
    },
    DualLp {
        gap: f64,
        dual_value: f64,
        iterations: usize,
        rounds: usize,
    },
}

impl Provenance {
    pub fn solver_name(&self) -> &'static str {
        match self {
            Provenance::MinCut { .. } => "mincut",
            Provenance::ChainLp { .. } => "lp",
            Provenance::DualLp { .. } => "dual",
        }
    }

    /// Certified optimality gap; zero for min-cut solutions.
    pub fn gap(&self) -> f64 {
        match self {
            Provenance::MinCut { .. } => 0.0,
            Provenance::ChainLp { gap, .. } | Provenance::DualLp { gap, .. } => *gap,
        }
    }
}

#[derive(Clone, Debug)]
pub struct Decomposition {
    pub lambda: f64,
    /// The input current `T`.
    pub input: Chain,
    /// The minimizing set for min-cut solutions.
    pub sigma: Option<BinarySet>,
    pub s_chain: Chain,
    pub t_minus_ds: Chain,
    pub mass_s: f64,
    pub mass_t_minus_ds: f64,
    pub value: f64,
    pub provenance: Provenance,
}

impl Decomposition {
    /// Builds the record from `T` and `S`, computing the residual and masses
    /// under unit weights. `residual_mass` overrides the residual mass when a
    /// solver measures it with a different metric.
    pub(crate) fn assemble(
        input: Chain,
        s_chain: Chain,
        lambda: f64,
        sigma: Option<BinarySet>,
        residual_mass: Option<f64>,
        provenance: Provenance,
    ) -> Result<Self> {
        if s_chain.degree() != input.degree() + 1 {
            return Err(Error::Degree(format!(
                "filling of degree {} for a {}-current",
                s_chain.degree(),
                input.degree()
            )));
        }
        let t_minus_ds = input.try_sub(&s_chain.boundary()?)?;
        let mass_s = s_chain.unit_mass();
        let mass_t_minus_ds = residual_mass.unwrap_or_else(|| t_minus_ds.unit_mass());
        Ok(Decomposition {
            lambda,
            input,
            sigma,
            s_chain,
            t_minus_ds,
            mass_s,
            mass_t_minus_ds,
            value: lambda * mass_s + mass_t_minus_ds,
            provenance,
        })
    }

    /// Checks `value = lambda*M(S) + M(T - dS)` and `t_minus_ds = T - dS`.
    pub fn check_invariants(&self, tol: f64) -> Result<()> {
        let expected = self.lambda * self.mass_s + self.mass_t_minus_ds;
        if (expected - self.value).abs() > tol * (1.0 + self.value.abs()) {
            return Err(Error::Solver(format!(
                "value {} differs from lambda*M(S) + M(T-dS) = {}",
                self.value, expected
            )));
        }
        let residual = self.input.try_sub(&self.s_chain.boundary()?)?;
        let diff = residual.max_abs_diff(&self.t_minus_ds)?;
        if diff > tol {
            return Err(Error::Solver(format!(
                "stored residual differs from T - dS by {diff}"
            )));
        }
        Ok(())
    }

    /// Line-oriented `key=value` report.
    pub fn report(&self) -> String {
        let mut out = String::new();
        let mut kv = |k: &str, v: String| {
            let _ = writeln!(out, "{k}={v}");
        };
        kv("solver", self.provenance.solver_name().into());
        kv("lambda", sig9(self.lambda));
        kv("value", sig9(self.value));
        kv("mass_s", sig9(self.mass_s));
        kv("mass_t_minus_ds", sig9(self.mass_t_minus_ds));
        kv("gap", sig9(self.provenance.gap()));
        kv("mass_t", sig9(self.input.unit_mass()));
        kv("support_s", self.s_chain.len().to_string());
        kv("support_t_minus_ds", self.t_minus_ds.len().to_string());
        match &self.provenance {
            Provenance::MinCut {
                connectivity,
                max_flow,
            } => {
                kv("connectivity", connectivity.to_string());
                kv("max_flow", sig9(*max_flow));
                if let Some(sigma) = &self.sigma {
                    kv("sigma_cells", sigma.len().to_string());
                }
            }
            Provenance::ChainLp {
                dual_bound,
                iterations,
                rounds,
                integral,
                lambda_zero,
                uniqueness,
                ..
            } => {
                kv("dual_bound", sig9(*dual_bound));
                kv("iterations", iterations.to_string());
                kv("rounds", rounds.to_string());
                kv("integral", integral.to_string());
                if *lambda_zero {
                    kv("lambda_zero", "true".into());
                }
                if let Some(p) = uniqueness {
                    kv("unique", p.unique.to_string());
                }
            }
            Provenance::DualLp {
                dual_value,
                iterations,
                rounds,
                ..
            } => {
                kv("dual_value", sig9(*dual_value));
                kv("iterations", iterations.to_string());
                kv("rounds", rounds.to_string());
            }
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::complex::{Cell, CubicalComplex};

    #[test]
    fn assemble_computes_residual() {
        let cx = CubicalComplex::grid2(2, 2).unwrap();
        let face = Chain::from_cells(&cx, 2, [(Cell::face2(0, 0), 1.0)]).unwrap();
        let t = face.boundary().unwrap();
        let d = Decomposition::assemble(
            t,
            face,
            3.0,
            None,
            None,
            Provenance::DualLp {
                gap: 0.0,
                dual_value: 3.0,
                iterations: 0,
                rounds: 1,
            },
        )
        .unwrap();
        assert!(d.t_minus_ds.is_zero());
        assert_eq!(d.value, 3.0);
        d.check_invariants(1e-12).unwrap();
        let report = d.report();
        assert!(report.contains("value=3\n"));
        assert!(report.contains("mass_t_minus_ds=0\n"));
    }
}
