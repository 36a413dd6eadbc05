//! A deterministic bounded-variable primal simplex solver.
//!
//! Solves `min c'x  s.t.  Ax = b,  l <= x <= u` with sparse columns, finite
//! lower bounds and possibly infinite upper bounds. The basis inverse is kept
//! in product form (a file of eta columns) and rebuilt periodically. A crash
//! basis is assembled from singleton columns, so problems that come with an
//! obvious slack basis skip phase one entirely.
//!
//! Pricing is Dantzig's rule with lowest-index tie breaking; after a run of
//! degenerate pivots the solver switches to Bland's rule until it makes
//! progress again. Identical inputs always produce identical pivots.

use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum SimplexError {
    #[error("problem is infeasible (phase-one residual {0:.3e})")]
    Infeasible(f64),
    #[error("problem is unbounded along variable {0}")]
    Unbounded(usize),
    #[error("iteration limit {0} reached")]
    IterationLimit(usize),
    #[error("numerical failure: {0}")]
    Numerical(String),
    #[error("invalid problem: {0}")]
    Invalid(String),
}

impl From<SimplexError> for crate::Error {
    fn from(e: SimplexError) -> Self {
        crate::Error::Solver(e.to_string())
    }
}

#[derive(Clone, Debug)]
pub struct SimplexOptions {
    /// Reduced-cost threshold for optimality.
    pub optimality_tol: f64,
    /// Allowed bound violation of basic variables.
    pub feasibility_tol: f64,
    /// Smallest admissible pivot magnitude.
    pub pivot_tol: f64,
    /// Pivots between basis reinversions.
    pub reinvert_every: usize,
    /// Consecutive degenerate pivots before switching to Bland's rule.
    pub degenerate_limit: usize,
    /// Relative size of the right-hand-side perturbation used against
    /// stalling on degenerate vertices; zero disables it.
    pub perturbation: f64,
    pub max_iterations: Option<usize>,
}

impl Default for SimplexOptions {
    fn default() -> Self {
        SimplexOptions {
            optimality_tol: 1e-9,
            feasibility_tol: 1e-9,
            pivot_tol: 1e-9,
            reinvert_every: 100,
            degenerate_limit: 40,
            perturbation: 1e-7,
            max_iterations: None,
        }
    }
}

/// A linear program in equality form with bounded variables.
#[derive(Clone, Debug, Default)]
pub struct LinearProgram {
    rhs: Vec<f64>,
    col_start: Vec<usize>,
    entries: Vec<(usize, f64)>,
    cost: Vec<f64>,
    lower: Vec<f64>,
    upper: Vec<f64>,
}

impl LinearProgram {
    pub fn new(rhs: Vec<f64>) -> Self {
        LinearProgram {
            rhs,
            col_start: vec![0],
            ..Default::default()
        }
    }

    pub fn num_rows(&self) -> usize {
        self.rhs.len()
    }

    pub fn num_cols(&self) -> usize {
        self.cost.len()
    }

    /// Adds a variable and returns its index. Repeated rows are summed.
    pub fn add_column(
        &mut self,
        cost: f64,
        lower: f64,
        upper: f64,
        entries: impl IntoIterator<Item = (usize, f64)>,
    ) -> usize {
        let start = self.entries.len();
        for (r, a) in entries {
            if a == 0.0 {
                continue;
            }
            if let Some(e) = self.entries[start..].iter_mut().find(|e| e.0 == r) {
                e.1 += a;
            } else {
                self.entries.push((r, a));
            }
        }
        let mut col: Vec<(usize, f64)> = self.entries.drain(start..).filter(|e| e.1 != 0.0).collect();
        col.sort_by_key(|e| e.0);
        self.entries.extend(col);
        self.col_start.push(self.entries.len());
        self.cost.push(cost);
        self.lower.push(lower);
        self.upper.push(upper);
        self.cost.len() - 1
    }

    pub fn column(&self, j: usize) -> &[(usize, f64)] {
        &self.entries[self.col_start[j]..self.col_start[j + 1]]
    }

    pub fn cost(&self, j: usize) -> f64 {
        self.cost[j]
    }

    pub fn set_cost(&mut self, j: usize, cost: f64) {
        self.cost[j] = cost;
    }

    pub fn bounds(&self, j: usize) -> (f64, f64) {
        (self.lower[j], self.upper[j])
    }

    pub fn rhs(&self) -> &[f64] {
        &self.rhs
    }

    /// Adds a constraint row `sum coeffs_j x_j = rhs` over existing columns.
    pub fn add_row(&mut self, coeffs: &[(usize, f64)], rhs: f64) -> usize {
        let r = self.rhs.len();
        self.rhs.push(rhs);
        let mut extra: Vec<Vec<(usize, f64)>> = vec![Vec::new(); self.num_cols()];
        for &(j, a) in coeffs {
            if a != 0.0 {
                extra[j].push((r, a));
            }
        }
        let mut entries = Vec::with_capacity(self.entries.len() + coeffs.len());
        let mut starts = vec![0];
        for (j, add) in extra.into_iter().enumerate() {
            entries.extend_from_slice(self.column(j));
            let a: f64 = add.iter().map(|e| e.1).sum();
            if a != 0.0 {
                entries.push((r, a));
            }
            starts.push(entries.len());
        }
        self.entries = entries;
        self.col_start = starts;
        r
    }

    fn validate(&self) -> Result<(), SimplexError> {
        for j in 0..self.num_cols() {
            let (l, u) = (self.lower[j], self.upper[j]);
            if !l.is_finite() {
                return Err(SimplexError::Invalid(format!("variable {j} lacks a finite lower bound")));
            }
            if u.is_nan() || u < l {
                return Err(SimplexError::Invalid(format!("variable {j} has empty bounds [{l}, {u}]")));
            }
            if !self.cost[j].is_finite() {
                return Err(SimplexError::Invalid(format!("variable {j} has a non-finite cost")));
            }
            if self.column(j).iter().any(|&(r, a)| r >= self.rhs.len() || !a.is_finite()) {
                return Err(SimplexError::Invalid(format!("variable {j} has a bad column entry")));
            }
        }
        if self.rhs.iter().any(|b| !b.is_finite()) {
            return Err(SimplexError::Invalid("non-finite right-hand side".into()));
        }
        Ok(())
    }

    pub fn solve(&self, opts: &SimplexOptions) -> Result<LpSolution, SimplexError> {
        self.validate()?;
        Engine::new(self, opts).run()
    }
}

/// Optimal primal values, row duals and objective of a solved program.
#[derive(Clone, Debug)]
pub struct LpSolution {
    pub x: Vec<f64>,
    /// Row multipliers `y` with reduced costs `c - A'y`.
    pub duals: Vec<f64>,
    pub objective: f64,
    pub iterations: usize,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum State {
    Basic,
    Lower,
    Upper,
}

/// Product-form inverse: `B^-1 = E_k ... E_1`.
const PRICE_WINDOW: usize = 1000;

#[derive(Default)]
struct EtaFile {
    pos: Vec<usize>,
    pivot: Vec<f64>,
    start: Vec<usize>,
    idx: Vec<usize>,
    val: Vec<f64>,
}

impl EtaFile {
    fn clear(&mut self) {
        self.pos.clear();
        self.pivot.clear();
        self.start.clear();
        self.idx.clear();
        self.val.clear();
    }

    fn len(&self) -> usize {
        self.pos.len()
    }

    fn push(&mut self, p: usize, d: &[f64], drop: f64) {
        let dp = d[p];
        self.pos.push(p);
        self.pivot.push(1.0 / dp);
        self.start.push(self.idx.len());
        for (i, &di) in d.iter().enumerate() {
            if i != p && di.abs() > drop {
                self.idx.push(i);
                self.val.push(-di / dp);
            }
        }
    }

    fn push_scale(&mut self, p: usize, a: f64) {
        self.pos.push(p);
        self.pivot.push(1.0 / a);
        self.start.push(self.idx.len());
    }

    fn range(&self, e: usize) -> std::ops::Range<usize> {
        let end = self.start.get(e + 1).copied().unwrap_or(self.idx.len());
        self.start[e]..end
    }

    fn ftran(&self, x: &mut [f64]) {
        for e in 0..self.len() {
            let p = self.pos[e];
            let t = x[p];
            if t == 0.0 {
                continue;
            }
            x[p] = t * self.pivot[e];
            for k in self.range(e) {
                x[self.idx[k]] += self.val[k] * t;
            }
        }
    }

    /// `ftran` on a sparse vector; `nz` lists the possibly nonzero entries
    /// and is extended as fill appears.
    fn ftran_sparse(&self, x: &mut [f64], nz: &mut Vec<usize>, mark: &mut [bool]) {
        for e in 0..self.len() {
            let p = self.pos[e];
            let t = x[p];
            if t == 0.0 {
                continue;
            }
            x[p] = t * self.pivot[e];
            for k in self.range(e) {
                let i = self.idx[k];
                if !mark[i] {
                    mark[i] = true;
                    nz.push(i);
                }
                x[i] += self.val[k] * t;
            }
        }
    }

    fn push_sparse(&mut self, p: usize, d: &[f64], nz: &[usize], drop: f64) {
        let dp = d[p];
        self.pos.push(p);
        self.pivot.push(1.0 / dp);
        self.start.push(self.idx.len());
        for &i in nz {
            if i != p && d[i].abs() > drop {
                self.idx.push(i);
                self.val.push(-d[i] / dp);
            }
        }
    }

    fn btran(&self, y: &mut [f64]) {
        for e in (0..self.len()).rev() {
            let p = self.pos[e];
            let mut s = y[p] * self.pivot[e];
            for k in self.range(e) {
                s += self.val[k] * y[self.idx[k]];
            }
            y[p] = s;
        }
    }
}

struct Engine<'a> {
    lp: &'a LinearProgram,
    opts: &'a SimplexOptions,
    rhs: Vec<f64>,
    m: usize,
    n_struct: usize,
    /// Artificial columns: `(row, sign)`.
    artificial: Vec<(usize, f64)>,
    cost: Vec<f64>,
    lower: Vec<f64>,
    upper: Vec<f64>,
    state: Vec<State>,
    head: Vec<usize>,
    xb: Vec<f64>,
    etas: EtaFile,
    since_reinvert: usize,
    /// Start of the next partial pricing window.
    price_start: usize,
    iterations: usize,
}

impl<'a> Engine<'a> {
    fn new(lp: &'a LinearProgram, opts: &'a SimplexOptions) -> Self {
        let m = lp.num_rows();
        let n = lp.num_cols();
        Engine {
            lp,
            opts,
            rhs: lp.rhs.clone(),
            m,
            n_struct: n,
            artificial: Vec::new(),
            cost: lp.cost.clone(),
            lower: lp.lower.clone(),
            upper: lp.upper.clone(),
            state: vec![State::Lower; n],
            head: vec![usize::MAX; m],
            xb: vec![0.0; m],
            etas: EtaFile::default(),
            since_reinvert: 0,
            price_start: 0,
            iterations: 0,
        }
    }

    fn n_total(&self) -> usize {
        self.n_struct + self.artificial.len()
    }

    fn column(&self, j: usize) -> ColumnRef<'_> {
        if j < self.n_struct {
            ColumnRef::Sparse(self.lp.column(j))
        } else {
            ColumnRef::Unit(self.artificial[j - self.n_struct])
        }
    }

    fn nonbasic_value(&self, j: usize) -> f64 {
        match self.state[j] {
            State::Upper => self.upper[j],
            _ => self.lower[j],
        }
    }

    /// Builds the starting basis from singleton columns, adding artificials
    /// for rows that have none. Returns true if phase one is needed.
    fn crash(&mut self) -> bool {
        let mut residual = self.rhs.clone();
        for j in 0..self.n_struct {
            let v = self.lower[j];
            if v != 0.0 {
                for &(r, a) in self.lp.column(j) {
                    residual[r] -= a * v;
                }
            }
        }
        let mut singles: Vec<Vec<usize>> = vec![Vec::new(); self.m];
        for j in 0..self.n_struct {
            if let [(r, _)] = self.lp.column(j) {
                singles[*r].push(j);
            }
        }
        let tol = self.opts.feasibility_tol;
        let mut needs_phase_one = false;
        for r in 0..self.m {
            let pick = singles[r].iter().copied().find(|&j| {
                let a = self.lp.column(j)[0].1;
                let v = self.lower[j] + residual[r] / a;
                v >= self.lower[j] - tol && v <= self.upper[j] + tol
            });
            match pick {
                Some(j) => {
                    let a = self.lp.column(j)[0].1;
                    self.state[j] = State::Basic;
                    self.head[r] = j;
                    if a != 1.0 {
                        self.etas.push_scale(r, a);
                    }
                }
                None => {
                    let sign = if residual[r] < 0.0 { -1.0 } else { 1.0 };
                    let j = self.n_total();
                    self.artificial.push((r, sign));
                    self.cost.push(0.0);
                    self.lower.push(0.0);
                    self.upper.push(f64::INFINITY);
                    self.state.push(State::Basic);
                    self.head[r] = j;
                    if sign != 1.0 {
                        self.etas.push_scale(r, sign);
                    }
                    if residual[r].abs() > tol {
                        needs_phase_one = true;
                    }
                }
            }
        }
        self.recompute_xb();
        needs_phase_one
    }

    fn recompute_xb(&mut self) {
        let mut r = self.rhs.clone();
        for j in 0..self.n_total() {
            if self.state[j] == State::Basic {
                continue;
            }
            let v = self.nonbasic_value(j);
            if v != 0.0 {
                self.column(j).for_each(|row, a| r[row] -= a * v);
            }
        }
        self.etas.ftran(&mut r);
        self.xb = r;
    }

    fn reinvert(&mut self) -> Result<(), SimplexError> {
        self.etas.clear();
        let mut claimed = vec![false; self.m];
        let mut new_head = vec![usize::MAX; self.m];
        let mut basics: Vec<usize> = self.head.clone();
        basics.sort_unstable();
        let mut rest = Vec::new();
        for &j in &basics {
            match self.column(j).single() {
                Some((r, a)) if !claimed[r] => {
                    claimed[r] = true;
                    new_head[r] = j;
                    if a != 1.0 {
                        self.etas.push_scale(r, a);
                    }
                }
                _ => rest.push(j),
            }
        }
        let (order, bump) = self.triangular_order(rest, &claimed);
        let mut work = vec![0.0; self.m];
        let mut mark = vec![false; self.m];
        let mut nz = Vec::new();
        for (j, r) in order {
            self.column(j).for_each(|i, a| {
                work[i] = a;
                mark[i] = true;
                nz.push(i);
            });
            self.etas.ftran_sparse(&mut work, &mut nz, &mut mark);
            claimed[r] = true;
            new_head[r] = j;
            self.etas.push_sparse(r, &work, &nz, 1e-14);
            for &i in &nz {
                work[i] = 0.0;
                mark[i] = false;
            }
            nz.clear();
        }
        for j in bump {
            self.column(j).for_each(|r, a| {
                work[r] = a;
                mark[r] = true;
                nz.push(r);
            });
            self.etas.ftran_sparse(&mut work, &mut nz, &mut mark);
            let mut best: Option<(usize, f64)> = None;
            for &r in &nz {
                let v = work[r];
                if claimed[r] || v.abs() <= self.opts.pivot_tol {
                    continue;
                }
                if best.is_none_or(|(b, bv)| v.abs() > bv || (v.abs() == bv && r < b)) {
                    best = Some((r, v.abs()));
                }
            }
            let (r, _) = best.ok_or_else(|| SimplexError::Numerical("singular basis during reinversion".into()))?;
            claimed[r] = true;
            new_head[r] = j;
            self.etas.push_sparse(r, &work, &nz, 1e-14);
            for &i in &nz {
                work[i] = 0.0;
                mark[i] = false;
            }
            nz.clear();
        }
        self.head = new_head;
        self.since_reinvert = 0;
        self.recompute_xb();
        Ok(())
    }

    /// Orders the non-slack basic columns by row singletons so their etas
    /// need no fill; whatever is left over is returned as the bump.
    fn triangular_order(&self, cols: Vec<usize>, claimed: &[bool]) -> (Vec<(usize, usize)>, Vec<usize>) {
        let mut count = vec![0usize; self.m];
        let mut rows: Vec<Vec<usize>> = vec![Vec::new(); self.m];
        for (k, &j) in cols.iter().enumerate() {
            self.column(j).for_each(|r, _| {
                if !claimed[r] {
                    count[r] += 1;
                    rows[r].push(k);
                }
            });
        }
        let mut active = vec![true; cols.len()];
        let mut taken = claimed.to_vec();
        let mut queue: Vec<usize> = (0..self.m).filter(|&r| count[r] == 1).rev().collect();
        let mut order = Vec::new();
        while let Some(r) = queue.pop() {
            if taken[r] || count[r] != 1 {
                continue;
            }
            let Some(&k) = rows[r].iter().find(|&&k| active[k]) else {
                continue;
            };
            let j = cols[k];
            let mut pivot = 0.0;
            self.column(j).for_each(|i, a| {
                if i == r {
                    pivot = a;
                }
            });
            if pivot.abs() <= self.opts.pivot_tol {
                continue;
            }
            active[k] = false;
            taken[r] = true;
            order.push((j, r));
            self.column(j).for_each(|i, _| {
                if !claimed[i] {
                    count[i] -= 1;
                    if count[i] == 1 && !taken[i] {
                        queue.push(i);
                    }
                }
            });
        }
        let mut bump: Vec<usize> = cols.iter().zip(&active).filter(|(_, &a)| a).map(|(&j, _)| j).collect();
        bump.sort_by_key(|&j| (self.column(j).len(), j));
        (order, bump)
    }

    fn duals(&self) -> Vec<f64> {
        let mut y: Vec<f64> = self.head.iter().map(|&j| self.cost[j]).collect();
        self.etas.btran(&mut y);
        y
    }

    fn reduced_cost(&self, j: usize, y: &[f64]) -> f64 {
        let mut rc = self.cost[j];
        self.column(j).for_each(|r, a| rc -= a * y[r]);
        rc
    }

    fn candidate_score(&self, j: usize, y: &[f64]) -> Option<f64> {
        let st = self.state[j];
        if st == State::Basic || self.upper[j] <= self.lower[j] {
            return None;
        }
        let tol = self.opts.optimality_tol;
        let rc = self.reduced_cost(j, y);
        match st {
            State::Lower if rc < -tol => Some(-rc),
            State::Upper if rc > tol => Some(rc),
            _ => None,
        }
    }

    /// Dantzig pricing over windows of the columns, taking the best candidate
    /// of the first window that has one. Bland's rule scans from the start.
    fn choose_entering(&mut self, y: &[f64], bland: bool) -> Option<(usize, f64)> {
        let n = self.n_total();
        if n == 0 {
            return None;
        }
        if bland {
            return (0..n)
                .find(|&j| self.candidate_score(j, y).is_some())
                .map(|j| (j, self.reduced_cost(j, y)));
        }
        let window = (n / 8).max(PRICE_WINDOW).min(n);
        let mut start = self.price_start % n;
        let mut scanned = 0;
        while scanned < n {
            let len = window.min(n - scanned);
            let mut best: Option<(usize, f64)> = None;
            for k in 0..len {
                let j = (start + k) % n;
                if let Some(score) = self.candidate_score(j, y) {
                    if best.is_none_or(|(_, s)| score > s) {
                        best = Some((j, score));
                    }
                }
            }
            scanned += len;
            start = (start + len) % n;
            if let Some((j, _)) = best {
                self.price_start = start;
                return Some((j, self.reduced_cost(j, y)));
            }
        }
        None
    }

    fn iterate(&mut self, limit: usize) -> Result<(), SimplexError> {
        let mut degenerate = 0usize;
        let mut verified = false;
        let mut d = vec![0.0; self.m];
        loop {
            if self.since_reinvert >= self.opts.reinvert_every {
                self.reinvert()?;
            }
            let y = self.duals();
            let bland = degenerate >= self.opts.degenerate_limit;
            let Some((q, rc)) = self.choose_entering(&y, bland) else {
                if verified || self.since_reinvert == 0 {
                    return Ok(());
                }
                self.reinvert()?;
                verified = true;
                continue;
            };
            verified = false;
            if self.iterations >= limit {
                return Err(SimplexError::IterationLimit(limit));
            }
            self.iterations += 1;

            d.iter_mut().for_each(|v| *v = 0.0);
            self.column(q).for_each(|r, a| d[r] = a);
            self.etas.ftran(&mut d);
            let dir = if rc < 0.0 { 1.0 } else { -1.0 };

            let mut best: Option<(usize, f64, f64)> = None; // (pos, limit, |d|)
            for (i, &di) in d.iter().enumerate() {
                if di.abs() <= self.opts.pivot_tol {
                    continue;
                }
                let v = self.head[i];
                let rate = -dir * di;
                let limit = if rate < 0.0 {
                    (self.xb[i] - self.lower[v]).max(0.0) / -rate
                } else if self.upper[v].is_finite() {
                    (self.upper[v] - self.xb[i]).max(0.0) / rate
                } else {
                    continue;
                };
                let better = match best {
                    None => true,
                    Some((bi, bl, bd)) => {
                        let tie = (limit - bl).abs() <= 1e-12 * (1.0 + bl);
                        if !tie {
                            limit < bl
                        } else if bland {
                            v < self.head[bi]
                        } else {
                            di.abs() > bd || (di.abs() == bd && v < self.head[bi])
                        }
                    }
                };
                if better {
                    best = Some((i, limit, di.abs()));
                }
            }

            let range = self.upper[q] - self.lower[q];
            let flip = match best {
                None => range.is_finite(),
                Some((_, bl, _)) => range <= bl,
            };
            if best.is_none() && !flip {
                return Err(SimplexError::Unbounded(q));
            }
            let theta = if flip { range } else { best.expect("leaving row").1 };
            if theta > 1e-12 {
                degenerate = 0;
            } else {
                degenerate += 1;
            }
            if theta != 0.0 {
                for (i, &di) in d.iter().enumerate() {
                    if di != 0.0 {
                        self.xb[i] -= dir * theta * di;
                    }
                }
            }
            if flip {
                self.state[q] = if self.state[q] == State::Lower {
                    State::Upper
                } else {
                    State::Lower
                };
                continue;
            }
            let (r, _, _) = best.expect("leaving row");
            let leaving = self.head[r];
            let rate = -dir * d[r];
            self.state[leaving] = if rate < 0.0 { State::Lower } else { State::Upper };
            let entering_value = self.nonbasic_value(q) + dir * theta;
            self.state[q] = State::Basic;
            self.head[r] = q;
            self.xb[r] = entering_value;
            self.etas.push(r, &d, 1e-14);
            self.since_reinvert += 1;
        }
    }

    /// Dual simplex pivots until every basic variable is within its bounds.
    /// Needs a dual feasible basis, which it preserves.
    fn dual_cleanup(&mut self, limit: usize) -> Result<(), SimplexError> {
        let tol = self.opts.feasibility_tol;
        let mut rho = vec![0.0; self.m];
        let mut d = vec![0.0; self.m];
        loop {
            if self.since_reinvert >= self.opts.reinvert_every {
                self.reinvert()?;
            }
            let mut leave: Option<(usize, f64)> = None;
            for (p, &v) in self.head.iter().enumerate() {
                let x = self.xb[p];
                let viol = if x < self.lower[v] - tol {
                    self.lower[v] - x
                } else if x > self.upper[v] + tol {
                    x - self.upper[v]
                } else {
                    continue;
                };
                if leave.is_none_or(|(_, b)| viol > b) {
                    leave = Some((p, viol));
                }
            }
            let Some((r, viol)) = leave else {
                return Ok(());
            };
            if self.iterations >= limit {
                return Err(SimplexError::IterationLimit(limit));
            }
            self.iterations += 1;
            let v = self.head[r];
            let below = self.xb[r] < self.lower[v];

            rho.iter_mut().for_each(|x| *x = 0.0);
            rho[r] = 1.0;
            self.etas.btran(&mut rho);
            let y = self.duals();
            let mut best: Option<(usize, f64, f64)> = None; // (var, ratio, |alpha|)
            for j in 0..self.n_total() {
                let st = self.state[j];
                if st == State::Basic || self.upper[j] <= self.lower[j] {
                    continue;
                }
                let mut alpha = 0.0;
                self.column(j).for_each(|i, a| alpha += rho[i] * a);
                if alpha.abs() <= self.opts.pivot_tol {
                    continue;
                }
                let at_lower = st == State::Lower;
                if below != (at_lower == (alpha < 0.0)) {
                    continue;
                }
                let ratio = self.reduced_cost(j, &y).abs() / alpha.abs();
                let better = match best {
                    None => true,
                    Some((_, br, ba)) => {
                        ratio < br - 1e-12 || (ratio <= br + 1e-12 && alpha.abs() > ba)
                    }
                };
                if better {
                    best = Some((j, ratio, alpha.abs()));
                }
            }
            let Some((q, _, _)) = best else {
                return Err(SimplexError::Infeasible(viol));
            };
            d.iter_mut().for_each(|x| *x = 0.0);
            self.column(q).for_each(|i, a| d[i] = a);
            self.etas.ftran(&mut d);
            let target = if below { self.lower[v] } else { self.upper[v] };
            let delta = (self.xb[r] - target) / d[r];
            for (i, &di) in d.iter().enumerate() {
                if di != 0.0 {
                    self.xb[i] -= di * delta;
                }
            }
            self.state[v] = if below { State::Lower } else { State::Upper };
            let entering_value = self.nonbasic_value(q) + delta;
            self.state[q] = State::Basic;
            self.head[r] = q;
            self.xb[r] = entering_value;
            self.etas.push(r, &d, 1e-14);
            self.since_reinvert += 1;
        }
    }

    /// Phase one (if the crash basis needs it) and phase two on `self.rhs`.
    fn solve_phases(&mut self, limit: usize) -> Result<(), SimplexError> {
        let n = self.n_struct;
        if self.crash() {
            let total = self.n_total();
            let real_cost = std::mem::replace(&mut self.cost, vec![0.0; total]);
            for k in 0..self.artificial.len() {
                self.cost[n + k] = 1.0;
            }
            self.iterate(limit)?;
            let residual: f64 = (0..self.artificial.len())
                .map(|k| {
                    let j = n + k;
                    match self.state[j] {
                        State::Basic => {
                            let p = self.head.iter().position(|&h| h == j).expect("basic");
                            self.xb[p].max(0.0)
                        }
                        _ => self.nonbasic_value(j),
                    }
                })
                .sum();
            let scale = self.rhs.iter().fold(1.0f64, |m, b| m.max(b.abs()));
            if residual > self.opts.feasibility_tol * scale * 10.0 {
                return Err(SimplexError::Infeasible(residual));
            }
            self.cost = real_cost;
        }
        for k in 0..self.artificial.len() {
            let j = n + k;
            self.cost[j] = 0.0;
            self.upper[j] = 0.0;
            if self.state[j] == State::Upper {
                self.state[j] = State::Lower;
            }
        }
        self.recompute_xb();
        self.iterate(limit)
    }

    fn run(mut self) -> Result<LpSolution, SimplexError> {
        let n = self.n_struct;
        let limit = self
            .opts
            .max_iterations
            .unwrap_or(50 * (self.m + n) + 10_000);
        let perturb = self.opts.perturbation;
        if perturb > 0.0 {
            // Solve a nearby nondegenerate problem first, then restore the
            // right-hand side and repair the few bound violations this leaves.
            let scale = self.rhs.iter().fold(1.0f64, |m, b| m.max(b.abs()));
            for (i, b) in self.rhs.iter_mut().enumerate() {
                *b += perturb * scale * (1.0 + ((i + 1) as f64 * 0.618_033_988_749_895).fract());
            }
            match self.solve_phases(limit) {
                Ok(()) => {}
                Err(SimplexError::Infeasible(_)) => {
                    let plain = SimplexOptions {
                        perturbation: 0.0,
                        ..self.opts.clone()
                    };
                    return Engine::new(self.lp, &plain).run();
                }
                Err(e) => return Err(e),
            }
            self.rhs = self.lp.rhs.clone();
            self.reinvert()?;
            self.dual_cleanup(limit)?;
            self.iterate(limit)?;
        } else {
            self.solve_phases(limit)?;
        }
        if self.since_reinvert > 0 {
            self.reinvert()?;
        }

        let mut x = vec![0.0; n];
        for (j, xj) in x.iter_mut().enumerate() {
            if self.state[j] != State::Basic {
                *xj = self.nonbasic_value(j);
            }
        }
        for (p, &j) in self.head.iter().enumerate() {
            if j < n {
                x[j] = self.xb[p].clamp(self.lower[j], self.upper[j]);
            }
        }
        let duals = self.duals();
        let objective = x.iter().zip(&self.lp.cost).map(|(v, c)| v * c).sum();
        Ok(LpSolution {
            x,
            duals,
            objective,
            iterations: self.iterations,
        })
    }
}

enum ColumnRef<'a> {
    Sparse(&'a [(usize, f64)]),
    Unit((usize, f64)),
}

impl ColumnRef<'_> {
    fn for_each(&self, mut f: impl FnMut(usize, f64)) {
        match self {
            ColumnRef::Sparse(entries) => entries.iter().for_each(|&(r, a)| f(r, a)),
            ColumnRef::Unit((r, a)) => f(*r, *a),
        }
    }

    fn len(&self) -> usize {
        match self {
            ColumnRef::Sparse(e) => e.len(),
            ColumnRef::Unit(_) => 1,
        }
    }

    fn single(&self) -> Option<(usize, f64)> {
        match self {
            ColumnRef::Sparse([(r, a)]) => Some((*r, *a)),
            ColumnRef::Sparse(_) => None,
            ColumnRef::Unit(e) => Some(*e),
        }
    }
}
