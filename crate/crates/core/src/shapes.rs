//! Flat norm distances between shapes and multiscale λ-sweeps.

use rayon::prelude::*;

use crate::chainlp::{flat_norm_lp, LpConfig};
use crate::complex::{boundary_of_set, BinarySet, Chain};
use crate::decomposition::Decomposition;
use crate::error::{Error, Result};
use crate::mincut::{l1tv_denoise, Connectivity, MincutConfig};
use crate::numfmt::sig9;

/// Which solver computes the decomposition.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Method {
    MinCut(Connectivity),
    Lp,
}

impl Method {
    pub fn name(self) -> &'static str {
        match self {
            Method::MinCut(_) => "mincut",
            Method::Lp => "lp",
        }
    }
}

fn solve_set(set: &BinarySet, lambda: f64, method: Method) -> Result<Decomposition> {
    match method {
        Method::MinCut(connectivity) => l1tv_denoise(set, &MincutConfig::new(lambda, connectivity)),
        Method::Lp => {
            if !(lambda.is_finite() && lambda > 0.0) {
                return Err(Error::InvalidParameter(format!(
                    "lambda must be positive and finite, got {lambda}"
                )));
            }
            flat_norm_lp(&boundary_of_set(set), &LpConfig::new(lambda))
        }
    }
}

/// `F_lambda` of the boundary of `a xor b`.
pub fn shape_distance(a: &BinarySet, b: &BinarySet, lambda: f64, method: Method) -> Result<Decomposition> {
    let diff = a.symmetric_difference(b)?;
    solve_set(&diff, lambda, method)
}

/// `F_lambda(t1 - t2)` by the chain LP.
pub fn chain_distance(t1: &Chain, t2: &Chain, lambda: f64) -> Result<Decomposition> {
    flat_norm_lp(&t1.try_sub(t2)?, &LpConfig::new(lambda))
}

#[derive(Clone, Copy, Debug)]
pub enum SweepInput<'a> {
    Set(&'a BinarySet),
    Chain(&'a Chain),
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SweepEntry {
    pub lambda: f64,
    pub value: f64,
    pub mass_s: f64,
    pub mass_t_minus_ds: f64,
}

#[derive(Clone, Debug)]
pub struct SweepSignature {
    pub entries: Vec<SweepEntry>,
    pub decompositions: Vec<Decomposition>,
}

impl SweepSignature {
    pub fn is_monotone(&self, tol: f64) -> bool {
        self.entries.windows(2).all(|w| w[1].value >= w[0].value - tol)
    }

    /// Divided differences of the value are nonincreasing.
    pub fn is_concave(&self, tol: f64) -> bool {
        let slopes: Vec<f64> = self
            .entries
            .windows(2)
            .map(|w| (w[1].value - w[0].value) / (w[1].lambda - w[0].lambda))
            .collect();
        slopes.windows(2).all(|s| s[1] <= s[0] + tol)
    }

    pub fn mass_s_nonincreasing(&self, tol: f64) -> bool {
        self.entries.windows(2).all(|w| w[1].mass_s <= w[0].mass_s + tol)
    }

    pub fn check(&self, tol: f64) -> Result<()> {
        if !self.is_monotone(tol) {
            return Err(Error::Solver("sweep values are not nondecreasing in lambda".into()));
        }
        if !self.is_concave(tol) {
            return Err(Error::Solver("sweep values are not concave in lambda".into()));
        }
        if !self.mass_s_nonincreasing(tol) {
            return Err(Error::Solver("filling mass grows with lambda".into()));
        }
        Ok(())
    }

    pub fn to_csv(&self) -> String {
        let mut out = String::from("lambda,value,mass_s,mass_t_minus_ds\n");
        for e in &self.entries {
            out.push_str(&format!(
                "{},{},{},{}\n",
                sig9(e.lambda),
                sig9(e.value),
                sig9(e.mass_s),
                sig9(e.mass_t_minus_ds)
            ));
        }
        out
    }
}

/// Solves every λ in `lambdas` (strictly ascending, positive) in parallel.
/// The result does not depend on the number of threads.
pub fn lambda_sweep(input: SweepInput<'_>, lambdas: &[f64], method: Method) -> Result<SweepSignature> {
    if lambdas.is_empty() {
        return Err(Error::InvalidParameter("the lambda list is empty".into()));
    }
    if let Some(&bad) = lambdas.iter().find(|l| !(l.is_finite() && **l > 0.0)) {
        return Err(Error::InvalidParameter(format!(
            "lambda values must be positive and finite, got {bad}"
        )));
    }
    if lambdas.windows(2).any(|w| w[1] <= w[0]) {
        return Err(Error::InvalidParameter(
            "lambda values must be strictly ascending".into(),
        ));
    }
    let decompositions: Vec<Decomposition> = lambdas
        .par_iter()
        .map(|&lambda| match input {
            SweepInput::Set(set) => solve_set(set, lambda, method),
            SweepInput::Chain(chain) => match method {
                Method::Lp => flat_norm_lp(chain, &LpConfig::new(lambda)),
                Method::MinCut(_) => Err(Error::Unsupported(
                    "min-cut sweeps need a pixel set; use the LP for chains".into(),
                )),
            },
        })
        .collect::<Result<_>>()?;
    let entries = decompositions
        .iter()
        .map(|d| SweepEntry {
            lambda: d.lambda,
            value: d.value,
            mass_s: d.mass_s,
            mass_t_minus_ds: d.mass_t_minus_ds,
        })
        .collect();
    Ok(SweepSignature {
        entries,
        decompositions,
    })
}

/// Symmetric matrix of pairwise shape distances.
#[derive(Clone, Debug, PartialEq)]
pub struct DistanceMatrix {
    pub names: Vec<String>,
    pub values: Vec<Vec<f64>>,
}

impl DistanceMatrix {
    pub fn to_csv(&self) -> String {
        let mut out = String::from("shape");
        for n in &self.names {
            out.push(',');
            out.push_str(n);
        }
        out.push('\n');
        for (n, row) in self.names.iter().zip(&self.values) {
            out.push_str(n);
            for v in row {
                out.push(',');
                out.push_str(&sig9(*v));
            }
            out.push('\n');
        }
        out
    }
}

pub fn distance_matrix(
    shapes: &[(String, BinarySet)],
    lambda: f64,
    method: Method,
) -> Result<DistanceMatrix> {
    let n = shapes.len();
    let pairs: Vec<(usize, usize)> = (0..n).flat_map(|i| (i + 1..n).map(move |j| (i, j))).collect();
    let dists: Vec<f64> = pairs
        .par_iter()
        .map(|&(i, j)| shape_distance(&shapes[i].1, &shapes[j].1, lambda, method).map(|d| d.value))
        .collect::<Result<_>>()?;
    let mut values = vec![vec![0.0; n]; n];
    for (&(i, j), d) in pairs.iter().zip(dists) {
        values[i][j] = d;
        values[j][i] = d;
    }
    Ok(DistanceMatrix {
        names: shapes.iter().map(|(name, _)| name.clone()).collect(),
        values,
    })
}
