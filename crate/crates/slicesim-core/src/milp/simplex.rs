//! Bounded-variable dual simplex over the LU-factored basis.
//!
//! The working problem attaches one logical variable per row (`Ax + s = b`
//! with `s` bounded by the row sense), scales rows by powers of two so
//! pivot magnitudes stay near one, and tightens implied upper bounds once
//! at build time. Solves start from an all-logical basis, a caller-supplied
//! basis snapshot, or the workspace's still-warm basis from the previous
//! solve. Dual feasibility is restored by bound flips where both bounds are
//! finite and by a large working bound otherwise; a variable resting on
//! that artificial bound at optimality marks the problem unbounded.
//!
//! Every scan runs in fixed index order and all ties break toward the
//! lowest index, so solves are bit-reproducible.

use alloc::string::ToString;
use alloc::vec;
use alloc::vec::Vec;

use super::lu::{BasisInverse, ColumnSource};
use super::{MilpModel, Relation, SolveError, StopCheck, VarKind};

/// Primal bound violations below this are treated as feasible.
const PTOL: f64 = 1e-9;
/// Pricing coefficients below this magnitude are treated as zero.
const ZTOL: f64 = 1e-9;
/// Smallest pivot magnitude accepted during a basis change.
const PIVOT_MIN: f64 = 1e-8;
/// Working stand-in for an infinite bound when dual feasibility needs one.
const BIG_BOUND: f64 = 1e8;
/// Values at or above this on an artificially bounded variable mean the
/// problem is unbounded in that direction.
const BIG_DETECT: f64 = 9e7;
/// Pricing entries smaller than this are treated as structural zeros;
/// larger ones participate in reduced-cost updates even when they are too
/// small to pivot on, which keeps the updates consistent across huge steps.
const DRIFT_TOL: f64 = 1e-12;
/// Consecutive degenerate pivots before switching to Bland's rule.
const STALL_LIMIT: u32 = 300;
/// Iterations spent under Bland's rule once a stall is detected.
const BLAND_SPAN: u64 = 120;

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
enum VarState {
    // Discriminants are the wire codes stored in `BasisSnapshot`; the
    // encoder casts them and `restore_snapshot` matches on them.
    AtLower = 0,
    AtUpper = 1,
    Basic = 2,
}

/// Nonbasic states of every variable; enough to reconstruct a basis.
#[derive(Clone, Debug)]
pub(super) struct BasisSnapshot {
    states: Vec<u8>,
}

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub(super) enum LpStatus {
    Optimal,
    Infeasible,
    Unbounded,
    Stopped,
}

pub(super) struct LpResult {
    pub status: LpStatus,
    /// Objective in original units, without the model's constant offset.
    pub objective: f64,
    /// Values for all structural and logical variables (empty unless
    /// `Optimal`).
    pub x: Vec<f64>,
    pub snapshot: BasisSnapshot,
    pub iterations: u64,
}

/// How to seed the basis for a solve.
pub(super) enum Warm<'a> {
    /// All-logical starting basis.
    Cold,
    /// Reuse the workspace basis left by the solve that returned this
    /// generation number; falls back to cold when stale.
    Cached(u64),
    /// Rebuild the basis recorded in a snapshot.
    Snapshot(&'a BasisSnapshot),
}

/// The model compiled to solver form: scaled rows, logical variables,
/// cost vector, and implied-bound tightenings. Built once per model and
/// shared by every node of a branch-and-bound run.
pub(super) struct WorkLp {
    pub m: usize,
    pub n_struct: usize,
    pub n_total: usize,
    col_ptr: Vec<usize>,
    row_idx: Vec<usize>,
    vals: Vec<f64>,
    rhs: Vec<f64>,
    /// Bounds for structural variables straight from their kinds.
    pub base_lower: Vec<f64>,
    pub base_upper: Vec<f64>,
    /// Upper bounds implied by the rows (always <= `base_upper`).
    tight_upper: Vec<f64>,
    logical_lower: Vec<f64>,
    logical_upper: Vec<f64>,
    pub cost: Vec<f64>,
    /// `1 + max |c|`; dual tolerances scale with it.
    cost_scale: f64,
    /// Structural indices of binary variables, ascending.
    pub binaries: Vec<usize>,
    /// Bound tightening proved the root relaxation empty.
    root_infeasible: bool,
}

/// Scale that brings `maxabs` into `[1, 2)` using a power of two, so
/// scaling is exact in floating point.
fn pow2_row_scale(maxabs: f64) -> f64 {
    let bits = maxabs.to_bits();
    let exp = ((bits >> 52) & 0x7ff) as i64;
    if exp == 0 || exp == 0x7ff {
        return 1.0;
    }
    let target = 2046 - exp;
    if !(1..=2046).contains(&target) {
        return 1.0;
    }
    f64::from_bits((target as u64) << 52)
}

impl WorkLp {
    pub fn build(model: &MilpModel) -> WorkLp {
        let m = model.num_constraints();
        let n_struct = model.num_vars();

        let mut scale = vec![1.0f64; m];
        for (i, row) in model.constraints().iter().enumerate() {
            let maxabs = row
                .terms
                .iter()
                .map(|&(_, c)| c.abs())
                .fold(0.0f64, f64::max);
            if maxabs > 0.0 {
                scale[i] = pow2_row_scale(maxabs);
            }
        }

        // Assemble scaled columns; visiting rows in order keeps each
        // column's row indices sorted.
        let mut cols: Vec<Vec<(usize, f64)>> = vec![Vec::new(); n_struct];
        let mut rhs = vec![0.0f64; m];
        let mut logical_lower = vec![0.0f64; m];
        let mut logical_upper = vec![0.0f64; m];
        for (i, row) in model.constraints().iter().enumerate() {
            for &(var, coeff) in &row.terms {
                if coeff != 0.0 {
                    cols[var.0].push((i, coeff * scale[i]));
                }
            }
            rhs[i] = row.rhs * scale[i];
            let (lo, hi) = match row.relation {
                Relation::Le => (0.0, f64::INFINITY),
                Relation::Eq => (0.0, 0.0),
                Relation::Ge => (f64::NEG_INFINITY, 0.0),
            };
            logical_lower[i] = lo;
            logical_upper[i] = hi;
        }
        let mut col_ptr = Vec::with_capacity(n_struct + 1);
        let mut row_idx = Vec::new();
        let mut vals = Vec::new();
        col_ptr.push(0);
        for col in &cols {
            for &(r, v) in col {
                row_idx.push(r);
                vals.push(v);
            }
            col_ptr.push(row_idx.len());
        }

        let mut base_lower = vec![0.0f64; n_struct];
        let mut base_upper = vec![f64::INFINITY; n_struct];
        let mut binaries = Vec::new();
        for (j, var) in model.vars().iter().enumerate() {
            match var.kind {
                VarKind::Binary => {
                    base_upper[j] = 1.0;
                    binaries.push(j);
                }
                VarKind::Continuous => {}
            }
            base_lower[j] = 0.0;
        }

        let mut cost = vec![0.0f64; n_struct + m];
        let mut cost_scale = 1.0f64;
        for (j, c) in cost.iter_mut().enumerate().take(n_struct) {
            *c = model.objective_coeff(super::VarId(j));
            cost_scale = cost_scale.max(1.0 + c.abs());
        }

        let mut lp = WorkLp {
            m,
            n_struct,
            n_total: n_struct + m,
            col_ptr,
            row_idx,
            vals,
            rhs,
            base_lower,
            base_upper,
            tight_upper: Vec::new(),
            logical_lower,
            logical_upper,
            cost,
            cost_scale,
            binaries,
            root_infeasible: false,
        };
        lp.tighten_bounds(model);
        lp
    }

    /// Derives implied upper bounds from rows whose other terms have a
    /// finite minimum activity. Sound for every branch-and-bound node
    /// because branching only shrinks domains.
    fn tighten_bounds(&mut self, model: &MilpModel) {
        self.tight_upper = self.base_upper.clone();
        // Each row as one or two `<=` forms.
        let mut le_rows: Vec<(Vec<(usize, f64)>, f64)> = Vec::new();
        for row in model.constraints() {
            let terms: Vec<(usize, f64)> =
                row.terms.iter().map(|&(v, c)| (v.0, c)).collect();
            match row.relation {
                Relation::Le => le_rows.push((terms, row.rhs)),
                Relation::Ge => {
                    le_rows.push((terms.iter().map(|&(v, c)| (v, -c)).collect(), -row.rhs))
                }
                Relation::Eq => {
                    le_rows.push((terms.clone(), row.rhs));
                    le_rows.push((terms.iter().map(|&(v, c)| (v, -c)).collect(), -row.rhs));
                }
            }
        }
        for _round in 0..3 {
            let mut improved = false;
            for (terms, rhs) in &le_rows {
                let mut min_sum = 0.0f64;
                let mut inf_count = 0usize;
                for &(j, a) in terms {
                    if a > 0.0 {
                        min_sum += a * self.base_lower[j];
                    } else if self.tight_upper[j].is_finite() {
                        min_sum += a * self.tight_upper[j];
                    } else {
                        inf_count += 1;
                    }
                }
                if inf_count > 0 {
                    continue;
                }
                for &(j, a) in terms {
                    if a <= 0.0 {
                        continue;
                    }
                    let limit = self.base_lower[j] + (rhs - min_sum) / a;
                    if limit < self.tight_upper[j] - 1e-12 {
                        self.tight_upper[j] = limit;
                        improved = true;
                        if limit < self.base_lower[j] - 1e-7 {
                            self.root_infeasible = true;
                        }
                    }
                }
            }
            if !improved {
                break;
            }
        }
    }

    fn column(&self, j: usize) -> (&[usize], &[f64]) {
        let (s, e) = (self.col_ptr[j], self.col_ptr[j + 1]);
        (&self.row_idx[s..e], &self.vals[s..e])
    }

    /// Dot product of structural or logical column `j` with a dense row
    /// vector.
    fn col_dot(&self, j: usize, dense: &[f64]) -> f64 {
        if j < self.n_struct {
            let (rows, vals) = self.column(j);
            let mut acc = 0.0;
            for (r, v) in rows.iter().zip(vals) {
                acc += v * dense[*r];
            }
            acc
        } else {
            dense[j - self.n_struct]
        }
    }
}

impl ColumnSource for WorkLp {
    fn row_count(&self) -> usize {
        self.m
    }
    fn push_column(&self, var: usize, out: &mut Vec<(usize, f64)>) {
        if var < self.n_struct {
            let (rows, vals) = self.column(var);
            for (r, v) in rows.iter().zip(vals) {
                out.push((*r, *v));
            }
        } else {
            out.push((var - self.n_struct, 1.0));
        }
    }
}

/// Reusable solver state: the current basis with its factorization plus
/// all scratch buffers. Keeping it across solves lets consecutive
/// branch-and-bound nodes skip refactorization when the basis carries
/// over unchanged.
pub(super) struct Workspace {
    generation: u64,
    cached: Option<u64>,
    n_total: usize,
    m: usize,
    state: Vec<VarState>,
    basic: Vec<usize>,
    inverse: Option<BasisInverse>,
    lower: Vec<f64>,
    upper: Vec<f64>,
    patched: Vec<bool>,
    any_patched: bool,
    d: Vec<f64>,
    x_basic: Vec<f64>,
    dense_rows: Vec<f64>,
    dense_pos: Vec<f64>,
    rho: Vec<f64>,
    alpha: Vec<(usize, f64)>,
    banned: Vec<usize>,
}

impl Workspace {
    pub fn new() -> Workspace {
        Workspace {
            generation: 0,
            cached: None,
            n_total: 0,
            m: 0,
            state: Vec::new(),
            basic: Vec::new(),
            inverse: None,
            lower: Vec::new(),
            upper: Vec::new(),
            patched: Vec::new(),
            any_patched: false,
            d: Vec::new(),
            x_basic: Vec::new(),
            dense_rows: Vec::new(),
            dense_pos: Vec::new(),
            rho: Vec::new(),
            alpha: Vec::new(),
            banned: Vec::new(),
        }
    }

    fn fit(&mut self, lp: &WorkLp) {
        if self.n_total != lp.n_total || self.m != lp.m {
            self.n_total = lp.n_total;
            self.m = lp.m;
            self.cached = None;
            self.inverse = None;
            self.state = vec![VarState::AtLower; lp.n_total];
            self.basic = vec![0; lp.m];
            self.lower = vec![0.0; lp.n_total];
            self.upper = vec![0.0; lp.n_total];
            self.patched = vec![false; lp.n_total];
            self.d = vec![0.0; lp.n_total];
            self.x_basic = vec![0.0; lp.m];
            self.dense_rows = vec![0.0; lp.m];
            self.dense_pos = vec![0.0; lp.m];
            self.rho = vec![0.0; lp.m];
        }
    }
}

/// One dual-simplex solve. `node_lower`/`node_upper` cover the structural
/// variables only; logical bounds come from the row senses. Returns the
/// result together with the workspace generation that a follow-up solve
/// can pass as [`Warm::Cached`].
pub(super) fn dual_solve(
    lp: &WorkLp,
    node_lower: &[f64],
    node_upper: &[f64],
    warm: Warm<'_>,
    ws: &mut Workspace,
    stop: Option<&dyn StopCheck>,
) -> Result<(LpResult, u64), SolveError> {
    ws.fit(lp);
    let stale_generation = ws.cached.unwrap_or(0);

    // Working bounds: node bounds intersected with implied uppers.
    for j in 0..lp.n_struct {
        ws.lower[j] = node_lower[j];
        ws.upper[j] = node_upper[j].min(lp.tight_upper[j]);
    }
    for i in 0..lp.m {
        ws.lower[lp.n_struct + i] = lp.logical_lower[i];
        ws.upper[lp.n_struct + i] = lp.logical_upper[i];
    }
    if lp.root_infeasible {
        return Ok((infeasible_result(ws), stale_generation));
    }
    for j in 0..lp.n_total {
        if ws.lower[j] > ws.upper[j] + 1e-9 {
            return Ok((infeasible_result(ws), stale_generation));
        }
    }
    if lp.m == 0 {
        return solve_without_rows(lp, ws).map(|r| (r, stale_generation));
    }

    let mut engine = Engine {
        lp,
        ws,
        stop,
        iterations: 0,
        just_refactored: true,
    };
    engine.install_basis(warm)?;
    let result = engine.run()?;
    ws.generation += 1;
    ws.cached = Some(ws.generation);
    Ok((result, ws.generation))
}

/// Degenerate model with variables but no rows: every variable sits at
/// its cost-preferred bound.
fn solve_without_rows(lp: &WorkLp, ws: &mut Workspace) -> Result<LpResult, SolveError> {
    let mut x = vec![0.0f64; lp.n_total];
    let mut states = vec![0u8; lp.n_total];
    let mut objective = 0.0;
    for j in 0..lp.n_struct {
        let c = lp.cost[j];
        if c < 0.0 {
            if !ws.upper[j].is_finite() {
                return Ok(LpResult {
                    status: LpStatus::Unbounded,
                    objective: f64::NEG_INFINITY,
                    x: Vec::new(),
                    snapshot: BasisSnapshot { states: Vec::new() },
                    iterations: 0,
                });
            }
            x[j] = ws.upper[j];
            states[j] = 1;
        } else {
            x[j] = ws.lower[j];
        }
        objective += c * x[j];
    }
    Ok(LpResult {
        status: LpStatus::Optimal,
        objective,
        x,
        snapshot: BasisSnapshot { states },
        iterations: 0,
    })
}

fn infeasible_result(ws: &Workspace) -> LpResult {
    LpResult {
        status: LpStatus::Infeasible,
        objective: f64::INFINITY,
        x: Vec::new(),
        snapshot: BasisSnapshot {
            states: ws.state.iter().map(|s| *s as u8).collect(),
        },
        iterations: 0,
    }
}

enum PivotStep {
    Done,
    RetryIteration,
    Infeasible,
}

struct Engine<'a> {
    lp: &'a WorkLp,
    ws: &'a mut Workspace,
    stop: Option<&'a dyn StopCheck>,
    iterations: u64,
    just_refactored: bool,
}

impl Engine<'_> {
    fn install_basis(&mut self, warm: Warm<'_>) -> Result<(), SolveError> {
        let restored = match warm {
            Warm::Cached(generation) => {
                self.ws.cached == Some(generation) && self.ws.inverse.is_some()
            }
            Warm::Snapshot(snapshot) => self.restore_snapshot(snapshot),
            Warm::Cold => false,
        };
        for p in self.ws.patched.iter_mut() {
            *p = false;
        }
        self.ws.any_patched = false;
        if !restored {
            self.cold_basis()?;
        }
        self.compute_duals();
        self.fix_dual_feasibility();
        self.compute_x_basic();
        Ok(())
    }

    fn restore_snapshot(&mut self, snapshot: &BasisSnapshot) -> bool {
        if snapshot.states.len() != self.lp.n_total {
            return false;
        }
        let mut basic = Vec::with_capacity(self.lp.m);
        for (j, &code) in snapshot.states.iter().enumerate() {
            let state = match code {
                0 => VarState::AtLower,
                1 => VarState::AtUpper,
                _ => VarState::Basic,
            };
            if state == VarState::Basic {
                basic.push(j);
            } else {
                let bound = if state == VarState::AtLower {
                    self.ws.lower[j]
                } else {
                    self.ws.upper[j]
                };
                if !bound.is_finite() {
                    return false;
                }
            }
            self.ws.state[j] = state;
        }
        if basic.len() != self.lp.m {
            return false;
        }
        match BasisInverse::new(self.lp, &basic) {
            Ok(inverse) => {
                self.ws.basic = basic;
                self.ws.inverse = Some(inverse);
                true
            }
            Err(_) => false,
        }
    }

    fn cold_basis(&mut self) -> Result<(), SolveError> {
        for j in 0..self.lp.n_struct {
            self.ws.state[j] = if self.ws.lower[j].is_finite() {
                VarState::AtLower
            } else if self.ws.upper[j].is_finite() {
                VarState::AtUpper
            } else {
                self.ws.lower[j] = -BIG_BOUND;
                self.ws.patched[j] = true;
                self.ws.any_patched = true;
                VarState::AtLower
            };
        }
        for i in 0..self.lp.m {
            self.ws.state[self.lp.n_struct + i] = VarState::Basic;
            self.ws.basic[i] = self.lp.n_struct + i;
        }
        self.ws.inverse = Some(
            BasisInverse::new(self.lp, &self.ws.basic)
                .map_err(|_| SolveError::Numeric("identity basis failed to factor".to_string()))?,
        );
        Ok(())
    }

    fn refactor(&mut self) -> Result<(), SolveError> {
        match BasisInverse::new(self.lp, &self.ws.basic) {
            Ok(inverse) => {
                self.ws.inverse = Some(inverse);
                self.just_refactored = true;
                self.compute_duals();
                self.fix_dual_feasibility();
                self.compute_x_basic();
                Ok(())
            }
            Err(_) => Err(SolveError::Numeric(
                "basis became singular during refactorization".to_string(),
            )),
        }
    }

    /// Recomputes all reduced costs from scratch: `d = c - A^T B^{-T} c_B`.
    fn compute_duals(&mut self) {
        let lp = self.lp;
        let Workspace {
            inverse,
            dense_pos,
            dense_rows,
            basic,
            d,
            state,
            ..
        } = &mut *self.ws;
        for p in 0..lp.m {
            dense_pos[p] = lp.cost[basic[p]];
        }
        inverse
            .as_mut()
            .expect("basis installed")
            .btran(dense_pos, dense_rows);
        for j in 0..lp.n_total {
            d[j] = if state[j] == VarState::Basic {
                0.0
            } else {
                lp.cost[j] - lp.col_dot(j, dense_rows)
            };
        }
    }

    /// Restores the dual-feasibility sign conditions, flipping bounds
    /// where the opposite bound is finite and installing the large
    /// working bound otherwise. Returns whether any state changed.
    fn fix_dual_feasibility(&mut self) -> bool {
        let dtol = 1e-7 * self.lp.cost_scale;
        let ws = &mut *self.ws;
        let mut changed = false;
        for j in 0..self.lp.n_total {
            if ws.state[j] == VarState::Basic || ws.lower[j] >= ws.upper[j] {
                continue;
            }
            match ws.state[j] {
                VarState::AtLower if ws.d[j] < -dtol => {
                    if !ws.upper[j].is_finite() {
                        ws.upper[j] = BIG_BOUND;
                        ws.patched[j] = true;
                        ws.any_patched = true;
                    }
                    ws.state[j] = VarState::AtUpper;
                    changed = true;
                }
                VarState::AtUpper if ws.d[j] > dtol => {
                    if !ws.lower[j].is_finite() {
                        ws.lower[j] = -BIG_BOUND;
                        ws.patched[j] = true;
                        ws.any_patched = true;
                    }
                    ws.state[j] = VarState::AtLower;
                    changed = true;
                }
                _ => {}
            }
        }
        changed
    }

    /// Recomputes basic values: `x_B = B^{-1}(b - N x_N)`.
    fn compute_x_basic(&mut self) {
        let lp = self.lp;
        let Workspace {
            inverse,
            dense_rows,
            x_basic,
            state,
            lower,
            upper,
            ..
        } = &mut *self.ws;
        dense_rows.copy_from_slice(&lp.rhs);
        for j in 0..lp.n_total {
            if state[j] == VarState::Basic {
                continue;
            }
            let v = match state[j] {
                VarState::AtLower => lower[j],
                _ => upper[j],
            };
            if v == 0.0 {
                continue;
            }
            if j < lp.n_struct {
                let (rows, vals) = lp.column(j);
                for (r, c) in rows.iter().zip(vals) {
                    dense_rows[*r] -= c * v;
                }
            } else {
                dense_rows[j - lp.n_struct] -= v;
            }
        }
        inverse
            .as_mut()
            .expect("basis installed")
            .ftran(dense_rows, x_basic);
    }

    fn should_stop(&self) -> bool {
        self.stop.map(|s| s.should_stop()).unwrap_or(false)
    }

    fn run(&mut self) -> Result<LpResult, SolveError> {
        let m = self.lp.m;
        let max_iterations = 50_000 + 200 * m as u64;
        let mut verify_rounds = 0u32;
        let mut degenerate_run = 0u32;
        let mut bland_until = 0u64;

        loop {
            if self.iterations > max_iterations {
                return Err(SolveError::Numeric(
                    "dual simplex iteration limit exceeded".to_string(),
                ));
            }
            if self.iterations % 128 == 0 && self.should_stop() {
                return Ok(self.extract(LpStatus::Stopped));
            }
            if self
                .ws
                .inverse
                .as_ref()
                .expect("basis installed")
                .wants_refactor(m)
            {
                self.refactor()?;
            }

            let bland = self.iterations < bland_until;

            // Leaving variable: the basic entry with the largest bound
            // violation (under Bland's rule: the first violated position).
            let mut leave_pos = usize::MAX;
            let mut leave_viol = PTOL;
            let mut leave_below = false;
            for p in 0..m {
                let j = self.ws.basic[p];
                let x = self.ws.x_basic[p];
                let below = self.ws.lower[j] - x;
                let above = x - self.ws.upper[j];
                let (viol, is_below) = if below >= above {
                    (below, true)
                } else {
                    (above, false)
                };
                if viol > leave_viol {
                    leave_pos = p;
                    leave_viol = viol;
                    leave_below = is_below;
                    if bland {
                        break;
                    }
                }
            }
            if leave_pos == usize::MAX {
                // Primal feasible; verify dual feasibility against fresh
                // reduced costs before declaring optimality.
                self.compute_duals();
                let changed = self.fix_dual_feasibility();
                if changed && verify_rounds < 4 {
                    verify_rounds += 1;
                    self.compute_x_basic();
                    continue;
                }
                return Ok(self.extract(LpStatus::Optimal));
            }

            match self.pivot(leave_pos, leave_below, bland, &mut degenerate_run)? {
                PivotStep::Done => {
                    if degenerate_run > STALL_LIMIT {
                        bland_until = self.iterations + BLAND_SPAN;
                        degenerate_run = 0;
                    }
                }
                PivotStep::RetryIteration => {}
                PivotStep::Infeasible => {
                    return Ok(self.extract(LpStatus::Infeasible));
                }
            }
            self.iterations += 1;
        }
    }

    /// One dual pivot on the chosen leaving row: price the row, run the
    /// ratio test, and exchange the basis. Numerically poor candidates are
    /// skipped; persistent disagreement with the factorization forces a
    /// refactorization and a retry of the iteration.
    fn pivot(
        &mut self,
        leave_pos: usize,
        leave_below: bool,
        bland: bool,
        degenerate_run: &mut u32,
    ) -> Result<PivotStep, SolveError> {
        let lp = self.lp;
        let leave_var = self.ws.basic[leave_pos];
        let target = if leave_below {
            self.ws.lower[leave_var]
        } else {
            self.ws.upper[leave_var]
        };

        // Row of the basis inverse for pricing: rho = B^{-T} e_r.
        {
            let Workspace {
                inverse,
                dense_pos,
                rho,
                ..
            } = &mut *self.ws;
            for v in dense_pos.iter_mut() {
                *v = 0.0;
            }
            dense_pos[leave_pos] = 1.0;
            inverse
                .as_mut()
                .expect("basis installed")
                .btran(dense_pos, rho);
        }

        // Price every nonbasic candidate: alpha_j = a_j . rho. Candidates
        // whose reduced cost sits on the wrong side of its bound condition
        // must not enter through a clamped zero ratio -- pivoting them in
        // makes the dual step negative and transfers the infeasibility to
        // the leaving variable, amplified by 1/|alpha|. Flip their bound
        // instead (the flip is what a dual-feasible basis wants anyway)
        // and retry the iteration with fresh basic values.
        let mut flipped = false;
        {
            let neg_step = 1e-9 * lp.cost_scale;
            let Workspace {
                alpha,
                banned,
                state,
                lower,
                upper,
                rho,
                d,
                patched,
                any_patched,
                ..
            } = &mut *self.ws;
            alpha.clear();
            for j in 0..lp.n_total {
                if state[j] == VarState::Basic || lower[j] >= upper[j] {
                    continue;
                }
                let a = lp.col_dot(j, rho);
                if a.abs() <= DRIFT_TOL {
                    continue;
                }
                if a.abs() > ZTOL {
                    let at_lower = state[j] == VarState::AtLower;
                    let admissible = if leave_below {
                        (at_lower && a < -ZTOL) || (!at_lower && a > ZTOL)
                    } else {
                        (at_lower && a > ZTOL) || (!at_lower && a < -ZTOL)
                    };
                    let wrong = if at_lower { -d[j] } else { d[j] };
                    if admissible && wrong > neg_step * a.abs() {
                        if at_lower {
                            if !upper[j].is_finite() {
                                upper[j] = BIG_BOUND;
                                patched[j] = true;
                                *any_patched = true;
                            }
                            state[j] = VarState::AtUpper;
                        } else {
                            if !lower[j].is_finite() {
                                lower[j] = -BIG_BOUND;
                                patched[j] = true;
                                *any_patched = true;
                            }
                            state[j] = VarState::AtLower;
                        }
                        flipped = true;
                        continue;
                    }
                }
                alpha.push((j, a));
            }
            banned.clear();
        }
        if flipped {
            self.compute_x_basic();
            return Ok(PivotStep::RetryIteration);
        }

        for _attempt in 0..6 {
            let Some((enter, alpha_enter)) = self.select_entering(leave_below, bland) else {
                return if self.ws.banned.is_empty() && self.just_refactored {
                    // Dual ray against fresh duals and fresh basic values:
                    // no column can absorb a genuine violation.
                    Ok(PivotStep::Infeasible)
                } else if self.just_refactored {
                    Err(SolveError::Numeric(
                        "no numerically usable pivot in a fresh basis".to_string(),
                    ))
                } else {
                    // The violated bound may be an artifact of the
                    // incrementally maintained values; recompute before
                    // certifying anything.
                    self.refactor()?;
                    Ok(PivotStep::RetryIteration)
                };
            };

            // Basis representation of the entering column: w = B^{-1} a.
            {
                let Workspace {
                    inverse,
                    dense_rows,
                    dense_pos,
                    ..
                } = &mut *self.ws;
                for v in dense_rows.iter_mut() {
                    *v = 0.0;
                }
                if enter < lp.n_struct {
                    let (rows, vals) = lp.column(enter);
                    for (r, c) in rows.iter().zip(vals) {
                        dense_rows[*r] = *c;
                    }
                } else {
                    dense_rows[enter - lp.n_struct] = 1.0;
                }
                inverse
                    .as_mut()
                    .expect("basis installed")
                    .ftran(dense_rows, dense_pos);
            }
            let w_r = self.ws.dense_pos[leave_pos];
            if (w_r - alpha_enter).abs() > 1e-6 * (1.0 + alpha_enter.abs()) {
                if self.just_refactored {
                    return Err(SolveError::Numeric(
                        "pricing disagrees with a fresh factorization".to_string(),
                    ));
                }
                self.refactor()?;
                return Ok(PivotStep::RetryIteration);
            }
            if w_r.abs() < PIVOT_MIN {
                self.ws.banned.push(enter);
                continue;
            }

            // Dual step, primal step, and the basis exchange.
            let Workspace {
                inverse,
                dense_pos,
                alpha,
                d,
                x_basic,
                state,
                basic,
                lower,
                upper,
                ..
            } = &mut *self.ws;
            let t_dual = d[enter] / w_r;
            let delta = (x_basic[leave_pos] - target) / w_r;
            for &(j, a) in alpha.iter() {
                if j != enter {
                    d[j] -= t_dual * a;
                }
            }
            d[enter] = 0.0;
            d[leave_var] = -t_dual;
            let enter_value = match state[enter] {
                VarState::AtLower => lower[enter],
                _ => upper[enter],
            } + delta;
            for p in 0..lp.m {
                x_basic[p] -= delta * dense_pos[p];
            }
            x_basic[leave_pos] = enter_value;
            state[leave_var] = if leave_below {
                VarState::AtLower
            } else {
                VarState::AtUpper
            };
            state[enter] = VarState::Basic;
            basic[leave_pos] = enter;
            inverse
                .as_mut()
                .expect("basis installed")
                .push_update(leave_pos, dense_pos);
            self.just_refactored = false;
            if delta.abs() <= 1e-12 {
                *degenerate_run += 1;
            } else {
                *degenerate_run = 0;
            }
            if t_dual.abs() > 1e6 {
                self.refactor()?;
            }
            return Ok(PivotStep::Done);
        }

        // Every attempted candidate had an unusable pivot magnitude.
        if self.just_refactored {
            Err(SolveError::Numeric(
                "no numerically usable pivot in a fresh basis".to_string(),
            ))
        } else {
            self.refactor()?;
            Ok(PivotStep::RetryIteration)
        }
    }

    /// Dual ratio test over the priced candidates. Returns the entering
    /// variable and its pricing coefficient, or `None` when no column is
    /// admissible (certificate of primal infeasibility when nothing was
    /// banned).
    fn select_entering(&self, leave_below: bool, bland: bool) -> Option<(usize, f64)> {
        let mut best: Option<(usize, f64, f64, f64)> = None; // (j, alpha, ratio, |alpha|)
        for &(j, alpha) in self.ws.alpha.iter() {
            if self.ws.banned.contains(&j) {
                continue;
            }
            // Admissible sign combinations: moving the entering variable
            // must push the leaving basic back toward its violated bound.
            let at_lower = self.ws.state[j] == VarState::AtLower;
            let admissible = if leave_below {
                (at_lower && alpha < -ZTOL) || (!at_lower && alpha > ZTOL)
            } else {
                (at_lower && alpha > ZTOL) || (!at_lower && alpha < -ZTOL)
            };
            if !admissible {
                continue;
            }
            let slack = if at_lower {
                self.ws.d[j].max(0.0)
            } else {
                (-self.ws.d[j]).max(0.0)
            };
            let ratio = slack / alpha.abs();
            let better = match best {
                None => true,
                Some((bj, _, bratio, bmag)) => {
                    if bland {
                        // Bland's rule: the lowest admissible index among
                        // the minimal ratios.
                        ratio < bratio - 1e-12 || (ratio <= bratio + 1e-12 && j < bj)
                    } else {
                        ratio < bratio - 1e-12
                            || ((ratio - bratio).abs() <= 1e-12
                                && (alpha.abs() > bmag + 1e-12
                                    || ((alpha.abs() - bmag).abs() <= 1e-12 && j < bj)))
                    }
                }
            };
            if better {
                best = Some((j, alpha, ratio, alpha.abs()));
            }
        }
        best.map(|(j, alpha, _, _)| (j, alpha))
    }

    fn extract(&mut self, status: LpStatus) -> LpResult {
        let snapshot = BasisSnapshot {
            states: self.ws.state.iter().map(|s| *s as u8).collect(),
        };
        if status != LpStatus::Optimal {
            let objective = match status {
                LpStatus::Unbounded => f64::NEG_INFINITY,
                _ => f64::INFINITY,
            };
            return LpResult {
                status,
                objective,
                x: Vec::new(),
                snapshot,
                iterations: self.iterations,
            };
        }
        let lp = self.lp;
        let mut x = vec![0.0f64; lp.n_total];
        for j in 0..lp.n_total {
            x[j] = match self.ws.state[j] {
                VarState::Basic => 0.0, // filled from positions below
                VarState::AtLower => self.ws.lower[j],
                VarState::AtUpper => self.ws.upper[j],
            };
        }
        for p in 0..lp.m {
            x[self.ws.basic[p]] = self.ws.x_basic[p];
        }
        // Clamp into bounds and snap values that sit within tolerance of a
        // bound exactly onto it; keeps clean solutions exactly integral.
        for j in 0..lp.n_total {
            let (lo, hi) = (self.ws.lower[j], self.ws.upper[j]);
            if x[j] < lo {
                x[j] = lo;
            }
            if x[j] > hi {
                x[j] = hi;
            }
            if lo.is_finite() && (x[j] - lo).abs() < 1e-9 {
                x[j] = lo;
            } else if hi.is_finite() && (hi - x[j]).abs() < 1e-9 {
                x[j] = hi;
            }
        }
        if self.ws.any_patched {
            for j in 0..lp.n_total {
                if self.ws.patched[j] && x[j].abs() >= BIG_DETECT {
                    return LpResult {
                        status: LpStatus::Unbounded,
                        objective: f64::NEG_INFINITY,
                        x: Vec::new(),
                        snapshot,
                        iterations: self.iterations,
                    };
                }
            }
        }
        let mut objective = 0.0;
        for j in 0..lp.n_struct {
            if lp.cost[j] != 0.0 {
                objective += lp.cost[j] * x[j];
            }
        }
        LpResult {
            status: LpStatus::Optimal,
            objective,
            x,
            snapshot,
            iterations: self.iterations,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::super::{MilpModel, Relation, VarId};
    use super::*;

    fn solve_fresh(model: &MilpModel) -> LpResult {
        let lp = WorkLp::build(model);
        let mut ws = Workspace::new();
        let (result, _) = dual_solve(
            &lp,
            &lp.base_lower,
            &lp.base_upper,
            Warm::Cold,
            &mut ws,
            None,
        )
        .expect("solve");
        result
    }

    #[test]
    fn simple_lp_hits_the_blend_vertex() {
        // min -3x - 5y s.t. x <= 4, 2y <= 12, 3x + 2y <= 18.
        let mut m = MilpModel::new();
        let x = m.add_continuous("x");
        let y = m.add_continuous("y");
        m.set_objective(x, -3.0);
        m.set_objective(y, -5.0);
        m.add_constraint("c1", alloc::vec![(x, 1.0)], Relation::Le, 4.0);
        m.add_constraint("c2", alloc::vec![(y, 2.0)], Relation::Le, 12.0);
        m.add_constraint("c3", alloc::vec![(x, 3.0), (y, 2.0)], Relation::Le, 18.0);
        let r = solve_fresh(&m);
        assert_eq!(r.status, LpStatus::Optimal);
        assert!((r.objective - (-36.0)).abs() < 1e-9);
        assert!((r.x[x.0] - 2.0).abs() < 1e-9);
        assert!((r.x[y.0] - 6.0).abs() < 1e-9);
    }

    #[test]
    fn equality_and_ge_rows_are_honored() {
        // min x + 2y s.t. x + y = 10, x - y >= 2.
        let mut m = MilpModel::new();
        let x = m.add_continuous("x");
        let y = m.add_continuous("y");
        m.set_objective(x, 1.0);
        m.set_objective(y, 2.0);
        m.add_constraint("sum", alloc::vec![(x, 1.0), (y, 1.0)], Relation::Eq, 10.0);
        m.add_constraint("gap", alloc::vec![(x, 1.0), (y, -1.0)], Relation::Ge, 2.0);
        let r = solve_fresh(&m);
        assert_eq!(r.status, LpStatus::Optimal);
        assert!((r.objective - 10.0).abs() < 1e-9, "objective {}", r.objective);
        assert!((r.x[x.0] - 10.0).abs() < 1e-9);
        assert!(r.x[y.0].abs() < 1e-9);
    }

    #[test]
    fn infeasible_rows_are_detected() {
        let mut m = MilpModel::new();
        let x = m.add_continuous("x");
        m.add_constraint("lo", alloc::vec![(x, 1.0)], Relation::Ge, 5.0);
        m.add_constraint("hi", alloc::vec![(x, 1.0)], Relation::Le, 3.0);
        let r = solve_fresh(&m);
        assert_eq!(r.status, LpStatus::Infeasible);
        assert_eq!(r.objective, f64::INFINITY);
    }

    #[test]
    fn unbounded_direction_is_detected() {
        // min -x with x only limited by a row that y can always slacken.
        let mut m = MilpModel::new();
        let x = m.add_continuous("x");
        let y = m.add_continuous("y");
        m.set_objective(x, -1.0);
        m.add_constraint("c", alloc::vec![(x, 1.0), (y, -1.0)], Relation::Le, 5.0);
        let r = solve_fresh(&m);
        assert_eq!(r.status, LpStatus::Unbounded);
    }

    #[test]
    fn bounded_negative_cost_uses_the_upper_bound() {
        let mut m = MilpModel::new();
        let x = m.add_binary("x");
        m.set_objective(x, -7.0);
        m.add_constraint("noop", alloc::vec![(x, 1.0)], Relation::Le, 9.0);
        let r = solve_fresh(&m);
        assert_eq!(r.status, LpStatus::Optimal);
        assert!((r.x[x.0] - 1.0).abs() < 1e-12);
        assert!((r.objective + 7.0).abs() < 1e-12);
    }

    #[test]
    fn implied_bounds_cap_free_variables() {
        // Both variables appear only in an equality with positive
        // coefficients, so the tightener caps them at rhs / coeff.
        let mut m = MilpModel::new();
        let a = m.add_continuous("a");
        let b = m.add_continuous("b");
        m.add_constraint("split", alloc::vec![(a, 2.0), (b, 1.0)], Relation::Eq, 6.0);
        let lp = WorkLp::build(&m);
        assert!((lp.tight_upper[a.0] - 3.0).abs() < 1e-12);
        assert!((lp.tight_upper[b.0] - 6.0).abs() < 1e-12);
    }

    #[test]
    fn warm_starts_reach_the_same_optimum() {
        let mut m = MilpModel::new();
        let x = m.add_continuous("x");
        let y = m.add_continuous("y");
        m.set_objective(x, 1.0);
        m.set_objective(y, 3.0);
        m.add_constraint("need", alloc::vec![(x, 1.0), (y, 1.0)], Relation::Ge, 4.0);
        m.add_constraint("cap", alloc::vec![(x, 1.0)], Relation::Le, 3.0);
        let lp = WorkLp::build(&m);
        let mut ws = Workspace::new();
        let (cold, generation) = dual_solve(
            &lp,
            &lp.base_lower,
            &lp.base_upper,
            Warm::Cold,
            &mut ws,
            None,
        )
        .expect("cold solve");
        assert_eq!(cold.status, LpStatus::Optimal);
        assert!((cold.objective - 6.0).abs() < 1e-9, "x=3, y=1 -> 6");

        // Tighten x's bound and re-solve from the cached basis, then from
        // the snapshot; both must agree with each other.
        let mut upper = lp.base_upper.clone();
        upper[x.0] = 1.0;
        let (warm, _) = dual_solve(
            &lp,
            &lp.base_lower,
            &upper,
            Warm::Cached(generation),
            &mut ws,
            None,
        )
        .expect("warm solve");
        assert_eq!(warm.status, LpStatus::Optimal);
        assert!((warm.objective - 10.0).abs() < 1e-9, "x=1, y=3 -> 1 + 9");

        let mut ws2 = Workspace::new();
        let (snap, _) = dual_solve(
            &lp,
            &lp.base_lower,
            &upper,
            Warm::Snapshot(&cold.snapshot),
            &mut ws2,
            None,
        )
        .expect("snapshot solve");
        assert_eq!(snap.status, LpStatus::Optimal);
        assert!((snap.objective - warm.objective).abs() < 1e-9);
    }

    #[test]
    fn repeated_solves_are_bit_identical() {
        let mut m = MilpModel::new();
        let vars: Vec<VarId> = (0..6)
            .map(|i| m.add_continuous(alloc::format!("v{i}")))
            .collect();
        for (i, &v) in vars.iter().enumerate() {
            m.set_objective(v, 1.0 + i as f64 * 0.25);
        }
        for i in 0..4 {
            let terms: Vec<(VarId, f64)> = vars
                .iter()
                .enumerate()
                .map(|(j, &v)| (v, ((i * 7 + j * 3) % 5) as f64 + 1.0))
                .collect();
            m.add_constraint(
                alloc::format!("r{i}"),
                terms,
                Relation::Ge,
                10.0 + i as f64,
            );
        }
        let a = solve_fresh(&m);
        let b = solve_fresh(&m);
        assert_eq!(a.status, LpStatus::Optimal);
        assert_eq!(a.objective.to_bits(), b.objective.to_bits());
        for (u, v) in a.x.iter().zip(b.x.iter()) {
            assert_eq!(u.to_bits(), v.to_bits());
        }
    }
}
