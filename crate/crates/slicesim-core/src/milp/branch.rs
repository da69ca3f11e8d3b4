//! Best-bound branch and bound over the dual simplex.
//!
//! Nodes are ordered by their parent relaxation bound (ties to the oldest
//! node), branching fixes the most fractional binary (ties to the lowest
//! variable id), and the child matching the fractional value's rounding is
//! queued first. A single dive from the root supplies an early incumbent
//! so the best-bound phase starts with a pruning reference. Children warm
//! start from their parent's final basis; integral solutions are re-solved
//! with every binary fixed, which clears roundoff from the continuous part
//! before the solution is accepted as an incumbent.

use alloc::rc::Rc;
use alloc::string::ToString;
use alloc::vec::Vec;

use super::simplex::{dual_solve, BasisSnapshot, LpResult, LpStatus, Warm, WorkLp, Workspace};
use super::{MilpModel, MilpSolution, SolveError, SolveOptions, SolveStats, SolveStatus};

pub(super) fn solve_relaxation(model: &MilpModel) -> Result<MilpSolution, SolveError> {
    let lp = WorkLp::build(model);
    let mut ws = Workspace::new();
    let (result, _) = dual_solve(
        &lp,
        &lp.base_lower,
        &lp.base_upper,
        Warm::Cold,
        &mut ws,
        None,
    )?;
    let stats = SolveStats {
        simplex_iterations: result.iterations,
        nodes_explored: 1,
        ..SolveStats::default()
    };
    Ok(finish(model, &lp, result, stats))
}

fn finish(
    model: &MilpModel,
    lp: &WorkLp,
    result: LpResult,
    mut stats: SolveStats,
) -> MilpSolution {
    let (status, objective, values) = match result.status {
        LpStatus::Optimal => {
            let values: Vec<f64> = result.x[..lp.n_struct].to_vec();
            let objective = model.objective_value(&values);
            (SolveStatus::Optimal, objective, values)
        }
        LpStatus::Infeasible => (SolveStatus::Infeasible, f64::INFINITY, Vec::new()),
        LpStatus::Unbounded => (SolveStatus::Unbounded, f64::NEG_INFINITY, Vec::new()),
        LpStatus::Stopped => (SolveStatus::TimeLimit, f64::INFINITY, Vec::new()),
    };
    stats.best_bound = match status {
        SolveStatus::Optimal => objective,
        SolveStatus::Infeasible => f64::INFINITY,
        _ => f64::NEG_INFINITY,
    };
    MilpSolution {
        status,
        objective,
        values,
        stats,
    }
}

/// A queued branch decision; bounds are reconstructed by walking the
/// parent chain so nodes stay small.
struct Node {
    parent: usize,
    var: usize,
    value: f64,
    snapshot: Option<Rc<BasisSnapshot>>,
}

const NO_PARENT: usize = usize::MAX;

#[derive(PartialEq)]
struct HeapEntry {
    bound: f64,
    seq: u64,
    node: usize,
}

impl Eq for HeapEntry {}

impl PartialOrd for HeapEntry {
    fn partial_cmp(&self, other: &Self) -> Option<core::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for HeapEntry {
    /// Max-heap order inverted twice: the "greatest" entry is the one
    /// with the smallest bound, then the smallest sequence number.
    fn cmp(&self, other: &Self) -> core::cmp::Ordering {
        other
            .bound
            .total_cmp(&self.bound)
            .then_with(|| other.seq.cmp(&self.seq))
    }
}

struct Tree<'a, 'b> {
    model: &'a MilpModel,
    lp: &'a WorkLp,
    options: &'a SolveOptions<'b>,
    ws: Workspace,
    arena: Vec<Node>,
    heap: alloc::collections::BinaryHeap<HeapEntry>,
    lower: Vec<f64>,
    upper: Vec<f64>,
    incumbent: Option<(f64, Vec<f64>)>, // objective without offset, full x
    stats: SolveStats,
    seq: u64,
    /// Root relaxation objective (offset-less); NaN until the root solves.
    root_bound: f64,
    /// Valid offset-less lower bound for the subtree of the entry popped in
    /// the current loop iteration, folded into the reported bound if the
    /// search stops mid-iteration.
    pending_bound: Option<f64>,
}

pub(super) fn solve(
    model: &MilpModel,
    options: &SolveOptions<'_>,
) -> Result<MilpSolution, SolveError> {
    let lp = WorkLp::build(model);
    let mut tree = Tree {
        model,
        lp: &lp,
        options,
        ws: Workspace::new(),
        arena: Vec::new(),
        heap: alloc::collections::BinaryHeap::new(),
        lower: lp.base_lower.clone(),
        upper: lp.base_upper.clone(),
        incumbent: None,
        stats: SolveStats::default(),
        seq: 0,
        root_bound: f64::NAN,
        pending_bound: None,
    };
    tree.run()
}

impl Tree<'_, '_> {
    fn deadline_hit(&self) -> bool {
        self.options
            .deadline
            .map(|d| d.should_stop())
            .unwrap_or(false)
    }

    fn solve_current(&mut self, warm: Warm<'_>) -> Result<(LpResult, u64), SolveError> {
        let out = dual_solve(
            self.lp,
            &self.lower,
            &self.upper,
            warm,
            &mut self.ws,
            self.options.deadline,
        )?;
        self.stats.nodes_explored += 1;
        self.stats.simplex_iterations += out.0.iterations;
        Ok(out)
    }

    fn reset_bounds(&mut self) {
        self.lower.copy_from_slice(&self.lp.base_lower);
        self.upper.copy_from_slice(&self.lp.base_upper);
    }

    fn apply_chain(&mut self, mut idx: usize) {
        self.reset_bounds();
        while idx != NO_PARENT {
            let node = &self.arena[idx];
            self.lower[node.var] = node.value;
            self.upper[node.var] = node.value;
            idx = node.parent;
        }
    }

    /// The most fractional binary (ties to the lowest index), if any.
    fn fractional_binary(&self, x: &[f64]) -> Option<(usize, f64)> {
        let tol = self.options.integrality_tol;
        // (var, value, priority, score): higher priority first, then most
        // fractional, then lowest index (first seen wins on ties).
        let mut best: Option<(usize, f64, i32, f64)> = None;
        for &j in &self.lp.binaries {
            let v = x[j];
            let frac_dist = (v - roundhalf(v)).abs();
            if frac_dist <= tol {
                continue;
            }
            let priority = self.model.branch_priority(crate::milp::VarId(j));
            let score = v.min(1.0 - v).min(0.5); // distance from integrality
            let improves = match best {
                None => true,
                Some((_, _, p, s)) => priority > p || (priority == p && score > s + 1e-15),
            };
            if improves {
                best = Some((j, v, priority, score));
            }
        }
        best.map(|(j, v, _, _)| (j, v))
    }

    /// Re-solves with every binary pinned to its rounded value so the
    /// continuous part is exact, then offers the result as an incumbent.
    fn register_incumbent(&mut self, x: &[f64], generation: u64) -> Result<(), SolveError> {
        let saved_lower = self.lower.clone();
        let saved_upper = self.upper.clone();
        for &j in &self.lp.binaries {
            let v = roundhalf(x[j]);
            self.lower[j] = v;
            self.upper[j] = v;
        }
        let (clean, _) = self.solve_current(Warm::Cached(generation))?;
        let candidate = match clean.status {
            LpStatus::Optimal => Some((clean.objective, clean.x)),
            // Numerically marginal: keep the raw node solution rather than
            // lose a genuine incumbent.
            _ => {
                let mut raw = x.to_vec();
                for &j in &self.lp.binaries {
                    raw[j] = roundhalf(raw[j]);
                }
                let mut objective = 0.0;
                for (j, &c) in self.lp.cost.iter().enumerate().take(self.lp.n_struct) {
                    objective += c * raw[j];
                }
                Some((objective, raw))
            }
        };
        self.lower = saved_lower;
        self.upper = saved_upper;
        if let Some((objective, values)) = candidate {
            let better = match &self.incumbent {
                None => true,
                Some((best, _)) => objective < best - 1e-12,
            };
            if better {
                self.incumbent = Some((objective, values));
            }
        }
        Ok(())
    }

    fn incumbent_bound(&self) -> f64 {
        self.incumbent
            .as_ref()
            .map(|(obj, _)| *obj)
            .unwrap_or(f64::INFINITY)
    }

    /// Pins every binary to the caller-provided seed and solves the
    /// remaining LP; only a cleanly optimal subproblem is accepted as the
    /// starting incumbent. A seed that is infeasible, mis-sized, or worse
    /// than what is already known is discarded, so seeding can speed up the
    /// search but never change its result.
    fn seed_incumbent(&mut self, seed: &[f64], generation: u64) -> Result<(), SolveError> {
        if seed.len() != self.model.num_vars() {
            return Ok(());
        }
        let saved_lower = self.lower.clone();
        let saved_upper = self.upper.clone();
        for &j in &self.lp.binaries {
            let v = roundhalf(seed[j]);
            self.lower[j] = v;
            self.upper[j] = v;
        }
        let (clean, _) = self.solve_current(Warm::Cached(generation))?;
        if clean.status == LpStatus::Optimal {
            let better = match &self.incumbent {
                None => true,
                Some((best, _)) => clean.objective < *best - 1e-12,
            };
            if better {
                self.incumbent = Some((clean.objective, clean.x));
            }
        }
        self.lower = saved_lower;
        self.upper = saved_upper;
        Ok(())
    }

    fn run(&mut self) -> Result<MilpSolution, SolveError> {
        // Root relaxation.
        let (root, root_generation) = self.solve_current(Warm::Cold)?;
        if root.status != LpStatus::Optimal {
            let stats = self.stats;
            return Ok(finish(self.model, self.lp, root, stats));
        }
        let root_bound = root.objective;
        self.root_bound = root_bound;
        if let Some(seed) = self.options.incumbent {
            self.seed_incumbent(seed, root_generation)?;
        }
        match self.fractional_binary(&root.x) {
            None => {
                self.register_incumbent(&root.x, root_generation)?;
                return Ok(self.conclude(SolveStatus::Optimal));
            }
            Some((var, value)) => {
                let root_snapshot = Rc::new(root.snapshot);
                // A seeded incumbent replaces the plunge for the initial
                // upper bound.
                if self.incumbent.is_none() {
                    self.dive(&root.x, root_generation)?;
                }
                if self.options.stop_at_first_incumbent && self.incumbent.is_some() {
                    return Ok(self.conclude(SolveStatus::TimeLimit));
                }
                if root_bound >= self.incumbent_bound() - self.options.gap_tol {
                    return Ok(self.conclude(SolveStatus::Optimal));
                }
                self.push_children(NO_PARENT, var, value, root_bound, Some(root_snapshot));
            }
        }

        // Best-bound exploration. Limit checks run before the pop so an
        // aborted search still has its whole frontier available for the
        // reported bound.
        loop {
            self.pending_bound = None;
            if let Some(max_nodes) = self.options.max_nodes {
                if self.stats.nodes_explored >= max_nodes {
                    return Ok(self.conclude(SolveStatus::TimeLimit));
                }
            }
            if self.deadline_hit() {
                return Ok(self.conclude(SolveStatus::TimeLimit));
            }
            let Some(entry) = self.heap.pop() else { break };
            if entry.bound >= self.incumbent_bound() - self.options.gap_tol {
                continue;
            }
            self.pending_bound = Some(entry.bound);
            self.apply_chain(entry.node);
            // Take the parent basis out of the node; the sibling holds its
            // own Rc, so the snapshot stays alive for it.
            let parent_basis = self.arena[entry.node].snapshot.take();
            let (result, generation) = match &parent_basis {
                Some(rc) => self.solve_current(Warm::Snapshot(rc.as_ref()))?,
                None => self.solve_current(Warm::Cold)?,
            };
            match result.status {
                LpStatus::Infeasible => continue,
                LpStatus::Stopped => {
                    return Ok(self.conclude(SolveStatus::TimeLimit));
                }
                LpStatus::Unbounded => {
                    return Err(SolveError::Numeric(
                        "a restricted subproblem reported an unbounded ray".to_string(),
                    ));
                }
                LpStatus::Optimal => {}
            }
            self.pending_bound = Some(result.objective);
            if result.objective >= self.incumbent_bound() - self.options.gap_tol {
                continue;
            }
            match self.fractional_binary(&result.x) {
                None => {
                    self.register_incumbent(&result.x, generation)?;
                    if self.options.stop_at_first_incumbent {
                        return Ok(self.conclude(SolveStatus::TimeLimit));
                    }
                }
                Some((var, value)) => {
                    let snapshot = Rc::new(result.snapshot);
                    self.push_children(
                        entry.node,
                        var,
                        value,
                        result.objective,
                        Some(snapshot),
                    );
                }
            }
        }

        if self.incumbent.is_some() {
            Ok(self.conclude(SolveStatus::Optimal))
        } else {
            Ok(self.conclude(SolveStatus::Infeasible))
        }
    }

    /// Depth-first plunge from the root solution, fixing each fractional
    /// binary toward its rounding, to obtain a first incumbent quickly.
    fn dive(&mut self, root_x: &[f64], root_generation: u64) -> Result<(), SolveError> {
        self.reset_bounds();
        let mut x = root_x.to_vec();
        let mut generation = root_generation;
        for _depth in 0..self.lp.binaries.len() + 1 {
            if self.deadline_hit() {
                return Ok(());
            }
            let Some((var, value)) = self.fractional_binary(&x) else {
                self.register_incumbent(&x, generation)?;
                break;
            };
            let fixed = roundhalf(value);
            self.lower[var] = fixed;
            self.upper[var] = fixed;
            let (result, next_generation) = self.solve_current(Warm::Cached(generation))?;
            if result.status != LpStatus::Optimal {
                break;
            }
            x = result.x;
            generation = next_generation;
        }
        self.reset_bounds();
        Ok(())
    }

    fn push_children(
        &mut self,
        parent: usize,
        var: usize,
        value: f64,
        bound: f64,
        snapshot: Option<Rc<BasisSnapshot>>,
    ) {
        // The child agreeing with the rounded value explores first.
        let preferred = roundhalf(value);
        for &fix in &[preferred, 1.0 - preferred] {
            let node = Node {
                parent,
                var,
                value: fix,
                snapshot: snapshot.clone(),
            };
            self.arena.push(node);
            let entry = HeapEntry {
                bound,
                seq: self.seq,
                node: self.arena.len() - 1,
            };
            self.seq += 1;
            self.heap.push(entry);
        }
    }

    /// Tightest offset-adjusted lower bound over everything still open:
    /// the frontier plus any half-processed entry; the root relaxation
    /// when the search stopped before branching.
    fn open_bound(&self) -> f64 {
        let frontier = self
            .heap
            .iter()
            .map(|e| e.bound)
            .chain(self.pending_bound)
            .fold(f64::INFINITY, f64::min);
        let raw = if frontier.is_finite() {
            frontier
        } else if self.root_bound.is_nan() {
            return f64::NEG_INFINITY;
        } else {
            self.root_bound
        };
        raw + self.model.objective_offset()
    }

    fn conclude(&mut self, status: SolveStatus) -> MilpSolution {
        let mut stats = self.stats;
        match (&self.incumbent, status) {
            (Some((_, x)), SolveStatus::Optimal | SolveStatus::TimeLimit) => {
                let values: Vec<f64> = x[..self.lp.n_struct].to_vec();
                let objective = self.model.objective_value(&values);
                stats.best_bound = match status {
                    SolveStatus::Optimal => objective,
                    _ => self.open_bound().min(objective),
                };
                MilpSolution {
                    status,
                    objective,
                    values,
                    stats,
                }
            }
            (None, SolveStatus::TimeLimit) => {
                stats.best_bound = self.open_bound();
                MilpSolution {
                    status: SolveStatus::TimeLimit,
                    objective: f64::INFINITY,
                    values: Vec::new(),
                    stats,
                }
            }
            _ => {
                stats.best_bound = f64::INFINITY;
                MilpSolution {
                    status: SolveStatus::Infeasible,
                    objective: f64::INFINITY,
                    values: Vec::new(),
                    stats,
                }
            }
        }
    }
}

/// Round-half-away-from-zero without pulling in platform math.
fn roundhalf(v: f64) -> f64 {
    if v >= 0.0 {
        let floor = (v as i64) as f64;
        if v - floor >= 0.5 {
            floor + 1.0
        } else {
            floor
        }
    } else {
        -roundhalf(-v)
    }
}

#[cfg(test)]
mod tests {
    use super::super::{solve_milp, MilpModel, Relation, SolveOptions, SolveStatus, VarId};
    use super::roundhalf;
    use alloc::vec::Vec;

    #[test]
    fn rounding_helper_behaves() {
        assert_eq!(roundhalf(0.4), 0.0);
        assert_eq!(roundhalf(0.5), 1.0);
        assert_eq!(roundhalf(0.99), 1.0);
        assert_eq!(roundhalf(1.0), 1.0);
        assert_eq!(roundhalf(-0.6), -1.0);
    }

    #[test]
    fn knapsack_is_solved_to_optimality() {
        // max 10a + 13b + 7c st 3a + 4b + 2c <= 6 -> min of negated.
        let mut m = MilpModel::new();
        let a = m.add_binary("a");
        let b = m.add_binary("b");
        let c = m.add_binary("c");
        m.set_objective(a, -10.0);
        m.set_objective(b, -13.0);
        m.set_objective(c, -7.0);
        m.add_constraint(
            "cap",
            alloc::vec![(a, 3.0), (b, 4.0), (c, 2.0)],
            Relation::Le,
            6.0,
        );
        let sol = solve_milp(&m, &SolveOptions::default()).expect("solve");
        assert_eq!(sol.status, SolveStatus::Optimal);
        // Best is b + c = weight 6, value 20.
        assert!((sol.objective + 20.0).abs() < 1e-9, "objective {}", sol.objective);
        assert_eq!(sol.value(a), 0.0);
        assert_eq!(sol.value(b), 1.0);
        assert_eq!(sol.value(c), 1.0);
    }

    #[test]
    fn equality_forces_integrality_choices() {
        // Exactly one of three options, each with a different cost.
        let mut m = MilpModel::new();
        let xs: Vec<VarId> = (0..3).map(|i| m.add_binary(alloc::format!("x{i}"))).collect();
        m.set_objective(xs[0], 5.0);
        m.set_objective(xs[1], 3.0);
        m.set_objective(xs[2], 4.0);
        m.add_constraint(
            "pick",
            xs.iter().map(|&v| (v, 1.0)).collect(),
            Relation::Eq,
            1.0,
        );
        let sol = solve_milp(&m, &SolveOptions::default()).expect("solve");
        assert_eq!(sol.status, SolveStatus::Optimal);
        assert!((sol.objective - 3.0).abs() < 1e-9);
        assert_eq!(sol.value(xs[1]), 1.0);
    }

    #[test]
    fn infeasible_integer_program_is_reported() {
        let mut m = MilpModel::new();
        let x = m.add_binary("x");
        let y = m.add_binary("y");
        m.add_constraint("a", alloc::vec![(x, 1.0), (y, 1.0)], Relation::Ge, 3.0);
        let sol = solve_milp(&m, &SolveOptions::default()).expect("solve");
        assert_eq!(sol.status, SolveStatus::Infeasible);
        assert_eq!(sol.objective, f64::INFINITY);
        assert!(sol.values.is_empty());
    }

    #[test]
    fn mixed_integer_blend_matches_hand_solution() {
        // min 2x + 3y + z st x + y >= 1.5 (x binary forces y >= 0.5),
        // y + z = 2.
        let mut m = MilpModel::new();
        let x = m.add_binary("x");
        let y = m.add_continuous("y");
        let z = m.add_continuous("z");
        m.set_objective(x, 2.0);
        m.set_objective(y, 3.0);
        m.set_objective(z, 1.0);
        m.add_constraint("need", alloc::vec![(x, 1.0), (y, 1.0)], Relation::Ge, 1.5);
        m.add_constraint("fill", alloc::vec![(y, 1.0), (z, 1.0)], Relation::Eq, 2.0);
        let sol = solve_milp(&m, &SolveOptions::default()).expect("solve");
        assert_eq!(sol.status, SolveStatus::Optimal);
        // Options: x=1 -> y >= 0.5, cost 2 + 1.5 + 1.5 = 5; x=0 -> y >= 1.5,
        // cost 4.5 + 0.5 = 5. Tie at 5.
        assert!((sol.objective - 5.0).abs() < 1e-9, "objective {}", sol.objective);
    }

    #[test]
    fn first_incumbent_mode_returns_quickly() {
        let mut m = MilpModel::new();
        let xs: Vec<VarId> = (0..8).map(|i| m.add_binary(alloc::format!("x{i}"))).collect();
        for (i, &v) in xs.iter().enumerate() {
            m.set_objective(v, -((i % 4) as f64 + 1.0));
        }
        m.add_constraint(
            "cap",
            xs.iter().map(|&v| (v, 2.0)).collect(),
            Relation::Le,
            7.0,
        );
        let options = SolveOptions {
            stop_at_first_incumbent: true,
            ..SolveOptions::default()
        };
        let sol = solve_milp(&m, &options).expect("solve");
        assert_eq!(sol.status, SolveStatus::TimeLimit);
        assert!(sol.has_assignment());
        // The incumbent must be integral and feasible.
        let weight: f64 = sol.values.iter().map(|v| v * 2.0).sum();
        assert!(weight <= 7.0 + 1e-9);
        for v in &sol.values {
            assert!(v.abs() < 1e-9 || (v - 1.0).abs() < 1e-9);
        }
    }

    #[test]
    fn node_budget_surfaces_as_time_limit() {
        let mut m = MilpModel::new();
        let xs: Vec<VarId> = (0..10).map(|i| m.add_binary(alloc::format!("x{i}"))).collect();
        for (i, &v) in xs.iter().enumerate() {
            m.set_objective(v, -(1.0 + (i as f64) * 0.1));
        }
        m.add_constraint(
            "cap",
            xs.iter()
                .enumerate()
                .map(|(i, &v)| (v, 1.0 + (i % 3) as f64))
                .collect(),
            Relation::Le,
            4.5,
        );
        let options = SolveOptions {
            max_nodes: Some(2),
            ..SolveOptions::default()
        };
        let sol = solve_milp(&m, &options).expect("solve");
        // With such a small budget the solver cannot prove optimality.
        assert_eq!(sol.status, SolveStatus::TimeLimit);
    }
}

#[cfg(test)]
mod warm_paths {
    use super::super::simplex::{dual_solve, LpStatus, Warm, WorkLp, Workspace};
    use super::super::{MilpModel, Relation};
    use alloc::vec;

    /// A child node fixes a variable that was basic in the parent; the
    /// cold, cached, and snapshot-restored solves must agree bit for bit.
    #[test]
    fn child_solve_paths_agree() {
        let mut model = MilpModel::new();
        let b0 = model.add_binary("b0");
        let b1 = model.add_binary("b1");
        let b2 = model.add_binary("b2");
        model.set_objective(b0, -0.5);
        model.set_objective(b1, -1.0);
        model.add_constraint("r0", vec![(b0, -2.0), (b1, -0.5)], Relation::Le, 0.0);
        model.add_constraint("r1", vec![(b0, 1.5), (b2, 1.0)], Relation::Eq, 1.0);
        let _ = (b1, b2);

        let lp = WorkLp::build(&model);
        let lower = lp.base_lower.clone();
        let upper = lp.base_upper.clone();

        let mut ws = Workspace::new();
        let (root, root_gen) =
            dual_solve(&lp, &lower, &upper, Warm::Cold, &mut ws, None).expect("root");
        assert_eq!(root.status, LpStatus::Optimal);
        assert!((root.objective + 4.0 / 3.0).abs() <= 1e-9);

        // Down branch: fix b0 to zero.
        let mut child_upper = upper.clone();
        child_upper[0] = 0.0;

        let mut ws_cold = Workspace::new();
        let (cold, _) =
            dual_solve(&lp, &lower, &child_upper, Warm::Cold, &mut ws_cold, None).expect("cold");
        let (cached, _) = dual_solve(
            &lp,
            &lower,
            &child_upper,
            Warm::Cached(root_gen),
            &mut ws,
            None,
        )
        .expect("cached");
        let mut ws_snap = Workspace::new();
        let (snap, _) = dual_solve(
            &lp,
            &lower,
            &child_upper,
            Warm::Snapshot(&root.snapshot),
            &mut ws_snap,
            None,
        )
        .expect("snapshot");

        for result in [&cold, &cached, &snap] {
            assert_eq!(result.status, LpStatus::Optimal);
            assert_eq!(result.objective.to_bits(), (-1.0f64).to_bits());
            assert_eq!(result.x.len(), cold.x.len());
        }
        for (u, v) in cold.x.iter().zip(cached.x.iter()) {
            assert_eq!(u.to_bits(), v.to_bits());
        }
        for (u, v) in cold.x.iter().zip(snap.x.iter()) {
            assert_eq!(u.to_bits(), v.to_bits());
        }
    }
}

#[cfg(test)]
mod cycler {
    use super::super::{solve_milp, MilpModel, Relation, SolveOptions};
    use alloc::vec;
    use alloc::vec::Vec;

    #[test]
    fn cycling_model_terminates() {
        let costs = [-5.0, -4.5, 0.0, 3.5, -1.0, 1.0];
        let rows: Vec<(Vec<f64>, Relation, f64)> = vec![
            (vec![1.5, -0.5, -1.5, 0.0, -1.0, 0.0], Relation::Le, 1.5),
            (vec![-1.5, -1.0, -0.5, 0.0, -1.0, 1.5], Relation::Ge, -1.5),
            (vec![0.5, 1.0, 0.0, -1.0, -1.5, 0.0], Relation::Ge, -1.0),
            (vec![0.5, 0.5, 1.0, 1.5, 1.0, -2.0], Relation::Ge, 1.5),
            (vec![2.0, -1.0, -2.0, -1.0, 0.5, -2.0], Relation::Ge, 1.0),
        ];
        let mut model = MilpModel::new();
        let vars: Vec<_> = (0..6).map(|i| model.add_binary(alloc::format!("b{i}"))).collect();
        for (i, &c) in costs.iter().enumerate() {
            model.set_objective(vars[i], c);
        }
        for (r, (coeffs, rel, rhs)) in rows.iter().enumerate() {
            let terms: Vec<_> = coeffs
                .iter()
                .enumerate()
                .filter(|(_, c)| **c != 0.0)
                .map(|(j, &c)| (vars[j], c))
                .collect();
            model.add_constraint(alloc::format!("r{r}"), terms, *rel, *rhs);
        }
        let sol = solve_milp(&model, &SolveOptions::default()).expect("terminates");
        std::eprintln!("status {:?} obj {}", sol.status, sol.objective);
    }
}
