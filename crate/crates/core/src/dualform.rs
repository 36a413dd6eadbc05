//! The dual formulation: maximize `T(phi)` over cochains with `|phi| <= 1`
//! and `|d phi| <= lambda`.
//!
//! The dual LP is solved directly, with
//!
//! ```text
//! min  -sum t_e (p_e - m_e)
//! s.t. w_f - d(p - m)_f = 0,   p, m in [0, 1],  w in [-lambda, lambda]
//! ```
//!
//! over a working set of k-cells; `phi` is zero elsewhere, which keeps it
//! feasible on the whole complex. The row multipliers are a filling `S`.
//! Its primal objective on the whole complex matches the dual value exactly
//! when the working set is large enough; otherwise the k-cells where `T - dS`
//! leaks out of the working set are added and the LP is solved again.

use std::sync::Arc;

use crate::chainlp::{margin, INTEGRALITY_TOL};
use crate::complex::{CellBox, Chain, FormCochain};
use crate::decomposition::{Decomposition, Provenance};
use crate::error::{Error, Result};
use crate::mincut::Connectivity;
use crate::numfmt::sig9;
use crate::simplex::{LinearProgram, SimplexOptions};

/// Feasibility tolerance for `|phi| <= 1` and `|d phi| <= lambda`.
pub const FEASIBILITY_TOL: f64 = 1e-9;

/// Tolerance for detecting active constraints.
pub const SLACKNESS_TOL: f64 = 1e-6;

const MAX_ROUNDS: usize = 10_000;

#[derive(Clone, Debug)]
pub struct DualSolution {
    pub lambda: f64,
    pub phi: FormCochain,
    /// `sum t_e phi_e`.
    pub value: f64,
    /// Filling read off the row multipliers.
    pub s_chain: Chain,
    /// `lambda M(S) + M(T - dS)` on the whole complex.
    pub primal_value: f64,
    pub gap: f64,
    pub iterations: usize,
    pub rounds: usize,
}

impl DualSolution {
    /// The primal decomposition recovered from the dual solve.
    pub fn decomposition(&self, t: &Chain) -> Result<Decomposition> {
        Decomposition::assemble(
            t.clone(),
            self.s_chain.clone(),
            self.lambda,
            None,
            None,
            Provenance::DualLp {
                gap: self.gap,
                dual_value: self.value,
                iterations: self.iterations,
                rounds: self.rounds,
            },
        )
    }
}

/// Maximizes `T(phi)` subject to `|phi| <= 1`, `|d phi| <= lambda`.
///
/// Fails with a solver error if the primal value of the recovered filling
/// does not match the dual value within `gap_tolerance` (relative).
pub fn dual_flat_norm(t: &Chain, lambda: f64, gap_tolerance: f64) -> Result<DualSolution> {
    if !(lambda.is_finite() && lambda > 0.0) {
        return Err(Error::InvalidParameter(format!(
            "lambda must be positive and finite, got {lambda}"
        )));
    }
    if !(gap_tolerance.is_finite() && gap_tolerance > 0.0) {
        return Err(Error::InvalidParameter(format!(
            "gap tolerance must be positive, got {gap_tolerance}"
        )));
    }
    let cx = Arc::clone(t.complex());
    let k = t.degree();
    if k + 1 > cx.dimension() {
        return Err(Error::Degree(format!(
            "a {k}-chain has no dual coboundary constraint in a {}-dimensional complex",
            cx.dimension()
        )));
    }
    if t.is_zero() {
        return Ok(DualSolution {
            lambda,
            phi: FormCochain::zeros(&cx, k)?,
            value: 0.0,
            s_chain: Chain::zero(&cx, k + 1)?,
            primal_value: 0.0,
            gap: 0.0,
            iterations: 0,
            rounds: 0,
        });
    }

    let bx = CellBox::around(&cx, t.cells().map(|(c, _)| c), margin(lambda, cx.num_cells(k)));
    let mut working: Vec<bool> = cx
        .cells(k)
        .iter()
        .map(|c| bx.as_ref().is_some_and(|b| b.contains(c)))
        .collect();
    for (e, _) in t.iter() {
        working[e] = true;
    }

    let nk = cx.num_cells(k);
    let nf = cx.num_cells(k + 1);
    let mut iterations = 0;
    for rounds in 1..=MAX_ROUNDS {
        let edges: Vec<usize> = (0..nk).filter(|&e| working[e]).collect();
        let mut row_of = vec![usize::MAX; nf];
        for &e in &edges {
            for &(f, _) in cx.coboundary_column(k, e) {
                row_of[f] = 0;
            }
        }
        let faces: Vec<usize> = (0..nf).filter(|&f| row_of[f] == 0).collect();
        for (r, &f) in faces.iter().enumerate() {
            row_of[f] = r;
        }

        let mut lp = LinearProgram::new(vec![0.0; faces.len()]);
        for &e in &edges {
            let col: Vec<(usize, f64)> = cx
                .coboundary_column(k, e)
                .iter()
                .map(|&(f, s)| (row_of[f], -s))
                .collect();
            let neg: Vec<(usize, f64)> = col.iter().map(|&(r, s)| (r, -s)).collect();
            lp.add_column(-t.get(e), 0.0, 1.0, col);
            lp.add_column(t.get(e), 0.0, 1.0, neg);
        }
        for r in 0..faces.len() {
            lp.add_column(0.0, -lambda, lambda, [(r, 1.0)]);
        }
        let sol = lp.solve(&SimplexOptions::default())?;
        iterations += sol.iterations;

        let mut values = vec![0.0; nk];
        for (i, &e) in edges.iter().enumerate() {
            values[e] = sol.x[2 * i] - sol.x[2 * i + 1];
        }
        let phi = FormCochain::from_values(&cx, k, values)?;
        let value = phi.pair(t)?;

        let mut s = Chain::from_ids(
            &cx,
            k + 1,
            faces
                .iter()
                .enumerate()
                .map(|(r, &f)| (f, sol.duals[r]))
                .filter(|(_, v)| v.abs() > 1e-9),
        )?;
        if s.is_integral(INTEGRALITY_TOL) {
            s = s.rounded();
        }
        let residual = t.try_sub(&s.boundary()?)?;
        let primal_value = lambda * s.unit_mass() + residual.unit_mass();
        let gap = (primal_value - value).abs();
        if gap <= gap_tolerance * value.abs().max(1.0) {
            return Ok(DualSolution {
                lambda,
                phi,
                value,
                s_chain: s,
                primal_value,
                gap,
                iterations,
                rounds,
            });
        }
        let leaks: Vec<usize> = residual.iter().map(|(e, _)| e).filter(|&e| !working[e]).collect();
        if leaks.is_empty() {
            return Err(Error::Solver(format!(
                "dual value {value} and recovered primal value {primal_value} differ by {gap:.3e} \
                 ({rounds} rounds, {iterations} pivots)"
            )));
        }
        for e in leaks {
            working[e] = true;
        }
    }
    Err(Error::Solver(format!(
        "dual working set did not converge in {MAX_ROUNDS} rounds"
    )))
}

/// Optimality structure of a primal decomposition against a dual cochain.
#[derive(Clone, Debug)]
pub struct SlacknessReport {
    pub lambda: f64,
    pub primal_value: f64,
    /// `T(phi)`.
    pub dual_value: f64,
    pub gap: f64,
    /// Largest excess of `|phi|` over 1.
    pub phi_excess: f64,
    /// Largest excess of `|d phi|` over `lambda`.
    pub dphi_excess: f64,
    /// Cells of `spt S` where `d phi != lambda sign(S)`, with `d phi`.
    pub filling_violations: Vec<(usize, f64)>,
    /// Cells of `spt (T - dS)` where `phi != sign(T - dS)`, with `phi`.
    pub residual_violations: Vec<(usize, f64)>,
}

impl SlacknessReport {
    pub fn feasible(&self) -> bool {
        self.phi_excess <= FEASIBILITY_TOL && self.dphi_excess <= FEASIBILITY_TOL * self.lambda.max(1.0)
    }

    pub fn passed(&self) -> bool {
        self.feasible() && self.filling_violations.is_empty() && self.residual_violations.is_empty()
    }

    pub fn report(&self) -> String {
        format!(
            "lambda={}\nprimal_value={}\ndual_value={}\ngap={}\nphi_excess={}\ndphi_excess={}\n\
             feasible={}\nfilling_violations={}\nresidual_violations={}\npassed={}\n",
            sig9(self.lambda),
            sig9(self.primal_value),
            sig9(self.dual_value),
            sig9(self.gap),
            sig9(self.phi_excess),
            sig9(self.dphi_excess),
            self.feasible(),
            self.filling_violations.len(),
            self.residual_violations.len(),
            self.passed()
        )
    }
}

/// Checks `d phi = lambda sign(S)` on `spt S` and `phi = sign(T - dS)` on
/// `spt (T - dS)`, both within `tol`, and the feasibility of `phi`.
pub fn complementary_slackness_report(
    primal: &Decomposition,
    phi: &FormCochain,
    tol: f64,
) -> Result<SlacknessReport> {
    let t = &primal.input;
    if !t.complex().same_shape(phi.complex()) {
        return Err(Error::ComplexMismatch);
    }
    if phi.degree() != t.degree() {
        return Err(Error::Degree(format!(
            "a {}-cochain cannot certify a {}-current",
            phi.degree(),
            t.degree()
        )));
    }
    if let Provenance::MinCut { connectivity, .. } = primal.provenance {
        if connectivity != Connectivity::Four {
            return Err(Error::InvalidParameter(format!(
                "a {connectivity}-neighbourhood cut measures a different perimeter than the dual LP"
            )));
        }
    }
    let lambda = primal.lambda;
    let dphi = phi.coboundary()?;
    let phi_excess = phi.values().iter().fold(0.0f64, |m, v| m.max(v.abs() - 1.0));
    let dphi_excess = dphi.values().iter().fold(0.0f64, |m, v| m.max(v.abs() - lambda));
    let filling_violations = primal
        .s_chain
        .iter()
        .filter(|&(f, s)| (dphi.get(f) - lambda * s.signum()).abs() > tol)
        .map(|(f, _)| (f, dphi.get(f)))
        .collect();
    let residual_violations = primal
        .t_minus_ds
        .iter()
        .filter(|&(e, r)| (phi.get(e) - r.signum()).abs() > tol)
        .map(|(e, _)| (e, phi.get(e)))
        .collect();
    let dual_value = phi.pair(t)?;
    Ok(SlacknessReport {
        lambda,
        primal_value: primal.value,
        dual_value,
        gap: (primal.value - dual_value).abs(),
        phi_excess: phi_excess.max(0.0),
        dphi_excess: dphi_excess.max(0.0),
        filling_violations,
        residual_violations,
    })
}

/// The cells where the dual constraint is active: `|d phi| >= lambda - tol`,
/// as a chain with coefficient 1.
pub fn extract_x(phi: &FormCochain, lambda: f64, tol: f64) -> Result<Chain> {
    let dphi = phi.coboundary()?;
    Chain::from_ids(
        phi.complex(),
        phi.degree() + 1,
        dphi.values()
            .iter()
            .enumerate()
            .filter(|(_, v)| v.abs() >= lambda - tol)
            .map(|(f, _)| (f, 1.0)),
    )
}
