//! Flat norm with scale by linear programming over chains.
//!
//! For a k-chain `T` the solver minimizes `lambda M(S) + M(T - dS)` over
//! (k+1)-chains `S`, splitting every absolute value into a nonnegative pair:
//!
//! ```text
//! min  lambda * sum(s+ + s-) + sum(r+ + r-)
//! s.t. d(s+ - s-) + (r+ - r-) = T
//! ```
//!
//! The row multipliers of an optimal basis form a k-cochain `phi` with
//! `|phi| <= 1` and `|d phi| <= lambda` whose pairing with `T` certifies the
//! optimum. Large complexes are handled by column generation: the LP starts
//! on the (k+1)-cells near `spt T` and grows by every cell whose dual
//! constraint is violated until none is, at which point the optimum is
//! global.

mod scaling;

pub use scaling::{scaling_check, ScalingReport};

use std::sync::Arc;

use crate::complex::{CellBox, Chain, CubicalComplex, FormCochain};
use crate::decomposition::{Decomposition, Provenance, UniquenessProbe};
use crate::error::{Error, Result};
use crate::simplex::{LinearProgram, LpSolution, SimplexError, SimplexOptions};

/// Coefficients within this distance of an integer count as integral.
pub const INTEGRALITY_TOL: f64 = 1e-6;

const MAX_ROUNDS: usize = 10_000;

#[derive(Clone, Debug, PartialEq)]
pub struct LpConfig {
    pub lambda: f64,
    /// Largest accepted relative gap between the primal value and the dual
    /// bound.
    pub duality_gap_tolerance: f64,
    /// Round near-integral optima to integers.
    pub integrality_rounding: bool,
    /// Re-solve on the optimal face with two opposite tie-breaks to detect
    /// non-unique fillings.
    pub probe_uniqueness: bool,
}

impl LpConfig {
    pub fn new(lambda: f64) -> Self {
        LpConfig {
            lambda,
            duality_gap_tolerance: 1e-9,
            integrality_rounding: true,
            probe_uniqueness: false,
        }
    }

    pub fn with_uniqueness_probe(mut self) -> Self {
        self.probe_uniqueness = true;
        self
    }

    pub fn with_gap_tolerance(mut self, tol: f64) -> Self {
        self.duality_gap_tolerance = tol;
        self
    }

    pub(crate) fn validate(&self) -> Result<()> {
        if !(self.lambda.is_finite() && self.lambda >= 0.0) {
            return Err(Error::InvalidParameter(format!(
                "lambda must be finite and nonnegative, got {}",
                self.lambda
            )));
        }
        if !(self.duality_gap_tolerance.is_finite() && self.duality_gap_tolerance > 0.0) {
            return Err(Error::InvalidParameter(format!(
                "duality gap tolerance must be positive, got {}",
                self.duality_gap_tolerance
            )));
        }
        Ok(())
    }
}

/// Flat norm with scale `lambda` of `t`, with its optimal decomposition.
pub fn flat_norm_lp(t: &Chain, config: &LpConfig) -> Result<Decomposition> {
    config.validate()?;
    let cx = Arc::clone(t.complex());
    let k = t.degree();
    if k + 1 > cx.dimension() {
        return Err(Error::Degree(format!(
            "a {k}-chain has no fillings in a {}-dimensional complex",
            cx.dimension()
        )));
    }
    let lambda = config.lambda;
    if t.is_zero() {
        let s = Chain::zero(&cx, k + 1)?;
        return Decomposition::assemble(
            t.clone(),
            s,
            lambda,
            None,
            None,
            Provenance::ChainLp {
                gap: 0.0,
                dual_bound: 0.0,
                iterations: 0,
                rounds: 0,
                integral: true,
                lambda_zero: lambda == 0.0,
                uniqueness: config.probe_uniqueness.then(|| UniquenessProbe {
                    unique: true,
                    alternates: Vec::new(),
                }),
            },
        );
    }

    solve_from(t, config, initial_working_set(t, lambda))
}

/// Column generation from the given working set of (k+1)-cells.
pub(crate) fn solve_from(t: &Chain, config: &LpConfig, mut working: Vec<bool>) -> Result<Decomposition> {
    let lambda = config.lambda;
    let mut rounds = 0;
    let mut iterations = 0;
    let (solved, phi) = loop {
        rounds += 1;
        let problem = FillingLp::build(t, lambda, &working, None)?;
        let sol = problem.lp.solve(&SimplexOptions::default())?;
        iterations += sol.iterations;
        let phi = problem.cochain(&sol)?;
        let violated = violated_cells(&phi, lambda, &working, 1e-9)?;
        if violated.is_empty() {
            break ((problem, sol), phi);
        }
        if rounds >= MAX_ROUNDS {
            return Err(Error::Solver(format!(
                "column generation did not converge in {MAX_ROUNDS} rounds"
            )));
        }
        for f in violated {
            working[f] = true;
        }
    };
    let (problem, sol) = solved;
    let dual_bound = phi.pair(t)?;
    let raw = problem.filling(&sol)?;
    let decomposition = |s: Chain, integral: bool, uniqueness: Option<UniquenessProbe>| {
        let mut d = Decomposition::assemble(
            t.clone(),
            s,
            lambda,
            None,
            None,
            Provenance::ChainLp {
                gap: 0.0,
                dual_bound,
                iterations,
                rounds,
                integral,
                lambda_zero: lambda == 0.0,
                uniqueness,
            },
        )?;
        let gap = (d.value - dual_bound).abs();
        if let Provenance::ChainLp { gap: g, .. } = &mut d.provenance {
            *g = gap;
        }
        Ok::<_, Error>(d)
    };

    let mut best = decomposition(raw.clone(), raw.is_integral(1e-12), None)?;
    if config.integrality_rounding && raw.is_integral(INTEGRALITY_TOL) {
        let rounded = decomposition(raw.rounded(), true, None)?;
        if rounded.value <= best.value + config.duality_gap_tolerance * best.value.abs().max(1.0) {
            best = rounded;
        }
    }
    let rel_gap = best.provenance.gap() / best.value.abs().max(1.0);
    if rel_gap > config.duality_gap_tolerance {
        return Err(Error::Solver(format!(
            "duality gap {:.3e} exceeds tolerance {:.3e} (primal {}, dual {}, {} rounds, {} pivots)",
            rel_gap, config.duality_gap_tolerance, best.value, dual_bound, rounds, iterations
        )));
    }

    if config.probe_uniqueness {
        let probe = probe_uniqueness(t, config, &phi, &best)?;
        if let Provenance::ChainLp { uniqueness, .. } = &mut best.provenance {
            *uniqueness = Some(probe);
        }
    }
    Ok(best)
}

/// Flat norm at scale 1.
pub fn flat_norm(t: &Chain) -> Result<Decomposition> {
    flat_norm_lp(t, &LpConfig::new(1.0))
}

/// (k+1)-cells inside the box around `spt t`, grown by `margin(lambda)`.
pub(crate) fn initial_working_set(t: &Chain, lambda: f64) -> Vec<bool> {
    let cx = t.complex();
    let k = t.degree();
    boxed_working_set(t, margin(lambda, cx.num_cells(k + 1)))
}

pub(crate) fn boxed_working_set(t: &Chain, margin: usize) -> Vec<bool> {
    let cx = t.complex();
    let k = t.degree();
    let bx = CellBox::around(cx, t.cells().map(|(c, _)| c), margin);
    cx.cells(k + 1)
        .iter()
        .map(|c| bx.as_ref().is_some_and(|b| b.contains(c)))
        .collect()
}

/// Complexes with at most this many cells of the working degree are solved
/// whole; larger ones start from a box around the input.
pub(crate) const WHOLE_COMPLEX_CELLS: usize = 60_000;

/// A dual cochain can fall off by at most about `lambda` per cell away from
/// `spt T`, so optimal cochains tend to be supported within `1/lambda` cells
/// of it. Starting there saves most column-generation rounds.
pub(crate) fn margin(lambda: f64, cells: usize) -> usize {
    if lambda <= 0.0 || cells <= WHOLE_COMPLEX_CELLS {
        return usize::MAX / 4;
    }
    (1.0 / lambda).ceil().min(1e6) as usize + 1
}

/// (k+1)-cells outside `working` whose dual constraint `|d phi| <= lambda`
/// is violated by more than `tol`.
pub(crate) fn violated_cells(phi: &FormCochain, lambda: f64, working: &[bool], tol: f64) -> Result<Vec<usize>> {
    let dphi = phi.coboundary()?;
    Ok(dphi
        .values()
        .iter()
        .enumerate()
        .filter(|&(f, v)| !working[f] && v.abs() > lambda + tol)
        .map(|(f, _)| f)
        .collect())
}

/// The restricted filling LP on a set of (k+1)-cells.
pub(crate) struct FillingLp {
    complex: Arc<CubicalComplex>,
    degree: usize,
    pub(crate) lp: LinearProgram,
    /// k-cell id of every constraint row.
    rows: Vec<usize>,
    /// (k+1)-cell id of every `s+`/`s-` column pair.
    cells: Vec<usize>,
}

impl FillingLp {
    /// Builds the LP over the (k+1)-cells flagged in `working`. With a
    /// `face`, every column that complementary slackness with the given
    /// optimal `(phi, d phi)` forces to zero is fixed at zero, which leaves
    /// exactly the optimal solutions feasible.
    pub(crate) fn build(
        t: &Chain,
        lambda: f64,
        working: &[bool],
        face: Option<(&FormCochain, &FormCochain)>,
    ) -> Result<Self> {
        let cx = Arc::clone(t.complex());
        let k = t.degree();
        let cells: Vec<usize> = (0..working.len()).filter(|&f| working[f]).collect();

        let nk = cx.num_cells(k);
        let mut is_row = vec![false; nk];
        for &f in &cells {
            for &(e, _) in cx.boundary_column(k + 1, f) {
                is_row[e] = true;
            }
        }
        for (e, _) in t.iter() {
            is_row[e] = true;
        }
        let rows: Vec<usize> = (0..nk).filter(|&e| is_row[e]).collect();
        let mut row_of = vec![usize::MAX; nk];
        for (r, &e) in rows.iter().enumerate() {
            row_of[e] = r;
        }

        const ACTIVE: f64 = 1e-7;
        let upper = |value: Option<f64>, bound: f64| match value {
            Some(v) if v < bound - ACTIVE => 0.0,
            _ => f64::INFINITY,
        };
        let mut lp = LinearProgram::new(rows.iter().map(|&e| t.get(e)).collect());
        for &f in &cells {
            let col: Vec<(usize, f64)> = cx
                .boundary_column(k + 1, f)
                .iter()
                .map(|&(e, s)| (row_of[e], s))
                .collect();
            let neg: Vec<(usize, f64)> = col.iter().map(|&(r, s)| (r, -s)).collect();
            let dphi = face.map(|(_, d)| d.get(f));
            lp.add_column(lambda, 0.0, upper(dphi, lambda), col);
            lp.add_column(lambda, 0.0, upper(dphi.map(|v| -v), lambda), neg);
        }
        for (r, &e) in rows.iter().enumerate() {
            let phi = face.map(|(p, _)| p.get(e));
            lp.add_column(1.0, 0.0, upper(phi, 1.0), [(r, 1.0)]);
            lp.add_column(1.0, 0.0, upper(phi.map(|v| -v), 1.0), [(r, -1.0)]);
        }
        Ok(FillingLp {
            complex: cx,
            degree: k,
            lp,
            rows,
            cells,
        })
    }

    /// Row multipliers as a cochain on the whole complex, zero off the rows.
    pub(crate) fn cochain(&self, sol: &LpSolution) -> Result<FormCochain> {
        let mut values = vec![0.0; self.complex.num_cells(self.degree)];
        for (r, &e) in self.rows.iter().enumerate() {
            values[e] = sol.duals[r];
        }
        FormCochain::from_values(&self.complex, self.degree, values)
    }

    pub(crate) fn filling(&self, sol: &LpSolution) -> Result<Chain> {
        let terms = self
            .cells
            .iter()
            .enumerate()
            .map(|(i, &f)| (f, sol.x[2 * i] - sol.x[2 * i + 1]))
            .filter(|(_, v)| v.abs() > 1e-9);
        Chain::from_ids(&self.complex, self.degree + 1, terms)
    }

    /// Sets the objective to `sign * sum w(f) s_f` over the filling columns.
    fn set_signed_objective(&mut self, sign: f64, weight: impl Fn(usize) -> f64) {
        let n_cells = self.cells.len();
        for j in 0..self.lp.num_cols() {
            let cost = match j {
                j if j < 2 * n_cells && j % 2 == 0 => sign * weight(j / 2),
                j if j < 2 * n_cells => -sign * weight(j / 2),
                _ => 0.0,
            };
            self.lp.set_cost(j, cost);
        }
    }
}

/// Looks for other optimal fillings on the optimal face.
///
/// By complementary slackness with the optimal `phi`, the optimal fillings
/// are exactly the feasible points once `s_f` is fixed at zero off
/// `d phi = lambda sign(s_f)` and `r_e` off `phi = sign(r_e)`. On that face
/// the LP is solved twice, minimizing and then maximizing a fixed linear
/// functional `sum c_f s_f` with irrational-looking weights. Both solves agree
/// with the returned filling exactly when the functional is constant on the
/// face, which for such weights means the face is a single point.
fn probe_uniqueness(
    t: &Chain,
    config: &LpConfig,
    phi: &FormCochain,
    best: &Decomposition,
) -> Result<UniquenessProbe> {
    let lambda = config.lambda;
    let dphi = phi.coboundary()?;
    let active: Vec<bool> = dphi
        .values()
        .iter()
        .map(|v| v.abs() >= lambda - 1e-7)
        .collect();
    let mut alternates = Vec::new();
    for sign in [1.0, -1.0] {
        let mut problem = FillingLp::build(t, lambda, &active, Some((phi, &dphi)))?;
        problem.set_signed_objective(sign, |i| 1.0 + ((i + 1) as f64 * std::f64::consts::SQRT_2).fract());
        let sol = match problem.lp.solve(&SimplexOptions::default()) {
            Ok(sol) => sol,
            // an unbounded face (only possible at lambda = 0) is not a point
            Err(SimplexError::Unbounded(_)) => {
                return Ok(UniquenessProbe {
                    unique: false,
                    alternates,
                })
            }
            Err(e) => return Err(e.into()),
        };
        let mut s = problem.filling(&sol)?.pruned(INTEGRALITY_TOL);
        if s.is_integral(INTEGRALITY_TOL) {
            s = s.rounded();
        }
        alternates.push(s);
    }
    let mut unique = true;
    for s in &alternates {
        if s.max_abs_diff(&best.s_chain)? > INTEGRALITY_TOL {
            unique = false;
        }
    }
    Ok(UniquenessProbe { unique, alternates })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::complex::{Axis, Cell};

    fn square(lambda: f64) -> Decomposition {
        let cx = CubicalComplex::grid2(3, 3).unwrap();
        let f = Chain::from_cells(&cx, 2, [(Cell::face2(1, 1), 1.0)]).unwrap();
        flat_norm_lp(&f.boundary().unwrap(), &LpConfig::new(lambda)).unwrap()
    }

    #[test]
    fn unit_square_regimes() {
        let d = square(5.0);
        assert!((d.value - 4.0).abs() < 1e-9);
        assert!(d.s_chain.is_zero());
        let d = square(3.0);
        assert!((d.value - 3.0).abs() < 1e-9);
        assert_eq!(d.s_chain.len(), 1);
        assert_eq!(d.s_chain.coefficient(&Cell::face2(1, 1)), 1.0);
        assert!(d.t_minus_ds.is_zero());
        d.check_invariants(1e-12).unwrap();
    }

    #[test]
    fn single_edge_is_not_filled() {
        let cx = CubicalComplex::grid2(2, 2).unwrap();
        let t = Chain::from_cells(&cx, 1, [(Cell::edge2(0, 1, Axis::X), 1.0)]).unwrap();
        let d = flat_norm(&t).unwrap();
        assert!((d.value - 1.0).abs() < 1e-9);
        assert!(d.s_chain.is_zero());
    }

    #[test]
    fn violated_cells_outside_working_set() {
        let cx = CubicalComplex::grid2(3, 1).unwrap();
        let mut phi = FormCochain::zeros(&cx, 1).unwrap();
        let e = cx.cell_id(&Cell::edge2(2, 0, Axis::X)).unwrap();
        phi.set(e, 1.0);
        let mut working = vec![false; 3];
        assert_eq!(violated_cells(&phi, 0.5, &working, 1e-9).unwrap(), vec![2]);
        working[2] = true;
        assert!(violated_cells(&phi, 0.5, &working, 1e-9).unwrap().is_empty());
        assert!(violated_cells(&phi, 1.0, &[false; 3], 1e-9).unwrap().is_empty());
    }

    #[test]
    fn zero_chain() {
        let cx = CubicalComplex::grid2(2, 2).unwrap();
        let d = flat_norm(&Chain::zero(&cx, 1).unwrap()).unwrap();
        assert_eq!(d.value, 0.0);
    }

    #[test]
    fn rejects_top_degree_and_bad_lambda() {
        let cx = CubicalComplex::grid2(2, 2).unwrap();
        let t = Chain::from_cells(&cx, 2, [(Cell::face2(0, 0), 1.0)]).unwrap();
        assert!(flat_norm(&t).is_err());
        let e = Chain::from_cells(&cx, 1, [(Cell::edge2(0, 0, Axis::X), 1.0)]).unwrap();
        assert!(flat_norm_lp(&e, &LpConfig::new(-1.0)).is_err());
        assert!(flat_norm_lp(&e, &LpConfig::new(1.0).with_gap_tolerance(0.0)).is_err());
    }

    #[test]
    fn lambda_zero_is_flagged() {
        let cx = CubicalComplex::grid2(3, 3).unwrap();
        let f = Chain::from_cells(&cx, 2, [(Cell::face2(1, 1), 1.0)]).unwrap();
        let d = flat_norm_lp(&f.boundary().unwrap(), &LpConfig::new(0.0)).unwrap();
        assert!(d.value.abs() < 1e-9);
        assert!(d.report().contains("lambda_zero=true"));
    }

    #[test]
    fn large_square_loop_is_filled() {
        let cx = CubicalComplex::grid2(12, 12).unwrap();
        let block = Chain::from_ids(
            &cx,
            2,
            cx.cells(2)
                .iter()
                .enumerate()
                .filter(|(_, c)| (2..10).contains(&c.coords[0]) && (2..10).contains(&c.coords[1]))
                .map(|(i, _)| (i, 1.0)),
        )
        .unwrap();
        let t = block.boundary().unwrap();
        let d = flat_norm_lp(&t, &LpConfig::new(0.25)).unwrap();
        // filling 64 cells costs 16 < perimeter 32
        assert!((d.value - 16.0).abs() < 1e-9, "{}", d.value);
        assert_eq!(d.s_chain.len(), 64);
    }

    #[test]
    fn column_generation_from_a_tight_box() {
        let cx = CubicalComplex::grid2(12, 12).unwrap();
        let ring = crate::complex::BinarySet::from_fn(&cx, |[x, y, _]| {
            let (dx, dy) = (x as f64 - 5.5, y as f64 - 5.5);
            (dx * dx + dy * dy) < 16.0 && (dx.abs() > 1.0 || dy.abs() > 1.0)
        });
        let t = crate::complex::boundary_of_set(&ring);
        for lambda in [0.3, 1.0, 2.5] {
            let config = LpConfig::new(lambda);
            let whole = flat_norm_lp(&t, &config).unwrap();
            let grown = solve_from(&t, &config, boxed_working_set(&t, 0)).unwrap();
            assert!((whole.value - grown.value).abs() < 1e-9);
            grown.check_invariants(1e-9).unwrap();
        }
    }

    #[test]
    fn uniqueness_probe_on_unique_optimum() {
        let cx = CubicalComplex::grid2(3, 3).unwrap();
        let f = Chain::from_cells(&cx, 2, [(Cell::face2(1, 1), 1.0)]).unwrap();
        let d = flat_norm_lp(&f.boundary().unwrap(), &LpConfig::new(3.0).with_uniqueness_probe()).unwrap();
        match d.provenance {
            Provenance::ChainLp {
                uniqueness: Some(p), ..
            } => assert!(p.unique),
            _ => unreachable!(),
        }
    }

    #[test]
    fn uniqueness_probe_detects_tie() {
        // at lambda = 4 filling the unit square ties with leaving it
        let cx = CubicalComplex::grid2(3, 3).unwrap();
        let f = Chain::from_cells(&cx, 2, [(Cell::face2(1, 1), 1.0)]).unwrap();
        let d = flat_norm_lp(&f.boundary().unwrap(), &LpConfig::new(4.0).with_uniqueness_probe()).unwrap();
        assert!((d.value - 4.0).abs() < 1e-9, "{}", d.value);
        match d.provenance {
            Provenance::ChainLp {
                uniqueness: Some(p), ..
            } => {
                assert!(!p.unique);
                let sizes: Vec<usize> = p.alternates.iter().map(Chain::len).collect();
                assert!(sizes.contains(&0) && sizes.contains(&1), "{sizes:?}");
            }
            _ => unreachable!(),
        }
    }
}
