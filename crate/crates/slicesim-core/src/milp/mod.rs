//! Mixed-integer linear programming with a built-in deterministic solver.
//!
//! Models are built variable-by-variable and row-by-row ([`MilpModel`]),
//! solved either by the internal engine ([`solve_milp`],
//! [`solve_lp_relaxation`]) or through a pluggable external solver
//! ([`ExternalSolver`], [`solve_with`]). The internal engine is a bounded
//! dual simplex over a sparse LU factorization, wrapped in best-bound
//! branch and bound; every choice it makes (pivoting, branching, node
//! order) breaks ties by index, so repeated solves of the same model give
//! identical results.

mod branch;
mod lu;
mod simplex;

use alloc::string::String;
use alloc::vec::Vec;

/// Index of a decision variable within its model.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(transparent))]
pub struct VarId(pub usize);

impl core::fmt::Display for VarId {
    fn fmt(&self, f: &mut core::fmt::Formatter<'_>) -> core::fmt::Result {
        write!(f, "x{}", self.0)
    }
}

/// Variable domain: binaries live in `{0, 1}`, continuous variables in
/// `[0, +inf)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub enum VarKind {
    Binary,
    Continuous,
}

#[derive(Clone, Debug, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct Variable {
    pub kind: VarKind,
    pub name: String,
}

/// Row sense of a linear constraint.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub enum Relation {
    Le,
    Eq,
    Ge,
}

impl Relation {
    fn symbol(&self) -> &'static str {
        match self {
            Relation::Le => "<=",
            Relation::Eq => "=",
            Relation::Ge => ">=",
        }
    }
}

/// One linear row: `sum(coeff * var) relation rhs`. The tag names the
/// constraint family for dumps and diagnostics.
#[derive(Clone, Debug, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct LinearConstraint {
    pub terms: Vec<(VarId, f64)>,
    pub relation: Relation,
    pub rhs: f64,
    pub tag: String,
}

/// Model construction errors.
#[derive(Clone, Debug, PartialEq, thiserror::Error)]
pub enum ModelError {
    #[error("constraint '{tag}' references unknown variable {var}")]
    UnknownVariable { tag: String, var: VarId },
    #[error("constraint '{tag}' lists variable {var} twice")]
    DuplicateTerm { tag: String, var: VarId },
    #[error("constraint '{tag}' contains a non-finite coefficient or rhs")]
    NonFiniteConstraint { tag: String },
    #[error("objective coefficient for {var} is not finite")]
    NonFiniteObjective { var: VarId },
}

/// A mixed-integer linear program in minimization form.
#[derive(Clone, Debug, PartialEq, Default)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct MilpModel {
    vars: Vec<Variable>,
    constraints: Vec<LinearConstraint>,
    objective: Vec<f64>,
    objective_offset: f64,
    branch_priority: Vec<i32>,
}

impl MilpModel {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn add_var(&mut self, kind: VarKind, name: impl Into<String>) -> VarId {
        let id = VarId(self.vars.len());
        self.vars.push(Variable {
            kind,
            name: name.into(),
        });
        self.objective.push(0.0);
        self.branch_priority.push(0);
        id
    }

    pub fn add_binary(&mut self, name: impl Into<String>) -> VarId {
        self.add_var(VarKind::Binary, name)
    }

    pub fn add_continuous(&mut self, name: impl Into<String>) -> VarId {
        self.add_var(VarKind::Continuous, name)
    }

    /// Sets the objective coefficient of `var` (minimization).
    pub fn set_objective(&mut self, var: VarId, coeff: f64) {
        self.objective[var.0] = coeff;
    }

    /// Sets the branching priority of `var`. When the search selects a
    /// fractional integer variable to branch on, higher-priority variables
    /// are considered first; within a priority class the most fractional
    /// one wins. Defaults to 0.
    pub fn set_branch_priority(&mut self, var: VarId, priority: i32) {
        self.branch_priority[var.0] = priority;
    }

    pub fn branch_priority(&self, var: VarId) -> i32 {
        self.branch_priority[var.0]
    }

    pub fn add_objective(&mut self, var: VarId, coeff: f64) {
        self.objective[var.0] += coeff;
    }

    /// Adds a constant to the objective, e.g. cost contributions fixed
    /// before the model is built.
    pub fn add_objective_offset(&mut self, offset: f64) {
        self.objective_offset += offset;
    }

    pub fn add_constraint(
        &mut self,
        tag: impl Into<String>,
        terms: Vec<(VarId, f64)>,
        relation: Relation,
        rhs: f64,
    ) {
        self.constraints.push(LinearConstraint {
            terms,
            relation,
            rhs,
            tag: tag.into(),
        });
    }

    pub fn num_vars(&self) -> usize {
        self.vars.len()
    }

    pub fn num_constraints(&self) -> usize {
        self.constraints.len()
    }

    pub fn var(&self, id: VarId) -> &Variable {
        &self.vars[id.0]
    }

    pub fn vars(&self) -> &[Variable] {
        &self.vars
    }

    pub fn constraints(&self) -> &[LinearConstraint] {
        &self.constraints
    }

    pub fn objective_coeff(&self, id: VarId) -> f64 {
        self.objective[id.0]
    }

    pub fn objective_offset(&self) -> f64 {
        self.objective_offset
    }

    /// Objective value (offset included) of an assignment.
    pub fn objective_value(&self, values: &[f64]) -> f64 {
        let linear: f64 = self
            .objective
            .iter()
            .zip(values)
            .map(|(c, x)| c * x)
            .sum();
        linear + self.objective_offset
    }

    /// Structural validation; solvers run this before touching the model.
    pub fn validate(&self) -> Result<(), ModelError> {
        for (i, c) in self.objective.iter().enumerate() {
            if !c.is_finite() {
                return Err(ModelError::NonFiniteObjective { var: VarId(i) });
            }
        }
        for row in &self.constraints {
            if !row.rhs.is_finite() {
                return Err(ModelError::NonFiniteConstraint {
                    tag: row.tag.clone(),
                });
            }
            let mut seen: Vec<usize> = Vec::with_capacity(row.terms.len());
            for &(var, coeff) in &row.terms {
                if var.0 >= self.vars.len() {
                    return Err(ModelError::UnknownVariable {
                        tag: row.tag.clone(),
                        var,
                    });
                }
                if !coeff.is_finite() {
                    return Err(ModelError::NonFiniteConstraint {
                        tag: row.tag.clone(),
                    });
                }
                if seen.contains(&var.0) {
                    return Err(ModelError::DuplicateTerm {
                        tag: row.tag.clone(),
                        var,
                    });
                }
                seen.push(var.0);
            }
        }
        Ok(())
    }

    /// Row activity and violation of an assignment against one constraint,
    /// as `(activity, violation)`; violation is 0 when satisfied.
    pub fn row_violation(&self, row: &LinearConstraint, values: &[f64]) -> (f64, f64) {
        let activity: f64 = row.terms.iter().map(|&(v, c)| c * values[v.0]).sum();
        let violation = match row.relation {
            Relation::Le => (activity - row.rhs).max(0.0),
            Relation::Ge => (row.rhs - activity).max(0.0),
            Relation::Eq => (activity - row.rhs).abs(),
        };
        (activity, violation)
    }

    /// Renders the model in an LP-style textual format for debugging.
    /// Rows keep their tags, so constraint families remain identifiable.
    pub fn to_lp_text(&self) -> String {
        use core::fmt::Write;
        let mut out = String::new();
        let _ = writeln!(out, "minimize");
        let mut first = true;
        let _ = write!(out, "  obj:");
        for (i, &c) in self.objective.iter().enumerate() {
            if c == 0.0 {
                continue;
            }
            let _ = write_term(&mut out, c, &self.vars[i].name, first);
            first = false;
        }
        if first {
            let _ = write!(out, " 0");
        }
        if self.objective_offset != 0.0 {
            let _ = write!(out, " + {}", self.objective_offset);
        }
        let _ = writeln!(out);
        let _ = writeln!(out, "subject to");
        for (i, row) in self.constraints.iter().enumerate() {
            let _ = write!(out, "  {} (r{}):", row.tag, i);
            let mut first = true;
            for &(var, coeff) in &row.terms {
                let _ = write_term(&mut out, coeff, &self.vars[var.0].name, first);
                first = false;
            }
            if first {
                let _ = write!(out, " 0");
            }
            let _ = writeln!(out, " {} {}", row.relation.symbol(), row.rhs);
        }
        let _ = writeln!(out, "bounds");
        for v in &self.vars {
            match v.kind {
                VarKind::Binary => {
                    let _ = writeln!(out, "  0 <= {} <= 1", v.name);
                }
                VarKind::Continuous => {
                    let _ = writeln!(out, "  0 <= {}", v.name);
                }
            }
        }
        let _ = writeln!(out, "binary");
        for v in &self.vars {
            if v.kind == VarKind::Binary {
                let _ = writeln!(out, "  {}", v.name);
            }
        }
        out
    }
}

fn write_term(
    out: &mut String,
    coeff: f64,
    name: &str,
    first: bool,
) -> core::fmt::Result {
    use core::fmt::Write;
    if first {
        if coeff < 0.0 {
            write!(out, " -")?;
        }
    } else if coeff < 0.0 {
        write!(out, " -")?;
    } else {
        write!(out, " +")?;
    }
    let mag = if coeff < 0.0 { -coeff } else { coeff };
    if mag == 1.0 {
        write!(out, " {name}")
    } else {
        write!(out, " {mag} {name}")
    }
}

/// Terminal state of a solve.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub enum SolveStatus {
    /// Proven optimal within the gap tolerance.
    Optimal,
    Infeasible,
    Unbounded,
    /// Stopped by a limit (deadline, node budget, or first-incumbent mode);
    /// `values` holds the best incumbent found, if any.
    TimeLimit,
}

#[derive(Clone, Copy, Debug, Default, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct SolveStats {
    pub simplex_iterations: u64,
    pub nodes_explored: u64,
    /// Proven lower bound on the optimum at termination: equals the
    /// objective for `Optimal`, the tightest open-subtree bound for
    /// `TimeLimit`, and `+inf` for `Infeasible`.
    pub best_bound: f64,
}

/// Result of a solve. For `Infeasible` the objective is `+inf` and `values`
/// is empty; for `Unbounded` the objective is `-inf`. A `TimeLimit` result
/// carries the incumbent (possibly empty when none was found).
#[derive(Clone, Debug, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct MilpSolution {
    pub status: SolveStatus,
    pub objective: f64,
    pub values: Vec<f64>,
    pub stats: SolveStats,
}

impl MilpSolution {
    pub fn value(&self, var: VarId) -> f64 {
        self.values[var.0]
    }

    pub fn has_assignment(&self) -> bool {
        !self.values.is_empty()
    }
}

/// External stop signal checked periodically during a solve.
pub trait StopCheck {
    fn should_stop(&self) -> bool;
}

impl<F: Fn() -> bool> StopCheck for F {
    fn should_stop(&self) -> bool {
        self()
    }
}

/// Solver knobs. Defaults suit the allocation models in this crate.
#[derive(Clone, Copy)]
pub struct SolveOptions<'a> {
    /// A binary is considered integral within this distance of 0/1.
    pub integrality_tol: f64,
    /// Absolute slack allowed when pruning nodes against the incumbent;
    /// bounds the distance of the reported objective from the true optimum.
    pub gap_tol: f64,
    /// Give up after exploring this many branch-and-bound nodes.
    pub max_nodes: Option<u64>,
    /// Checked periodically; a `true` aborts with `TimeLimit`.
    pub deadline: Option<&'a dyn StopCheck>,
    /// Return as soon as the first integral solution is found (status
    /// `TimeLimit`, incumbent attached). Used for pure feasibility checks.
    pub stop_at_first_incumbent: bool,
    /// Structural variable values (length `num_vars`) to seed the search
    /// with. Binaries are pinned to their rounded seed values and the
    /// remaining LP is solved; if that subproblem is feasible, its solution
    /// becomes the starting incumbent, tightening pruning from the first
    /// node. An infeasible or ill-sized seed is silently discarded, so a
    /// heuristic seed can never change the reported optimum.
    pub incumbent: Option<&'a [f64]>,
}

impl Default for SolveOptions<'_> {
    fn default() -> Self {
        SolveOptions {
            integrality_tol: 1e-6,
            gap_tol: 1e-7,
            max_nodes: None,
            deadline: None,
            stop_at_first_incumbent: false,
            incumbent: None,
        }
    }
}

/// Solve failures that are not expressible as a [`SolveStatus`].
#[derive(Clone, Debug, PartialEq, thiserror::Error)]
pub enum SolveError {
    #[error(transparent)]
    Model(#[from] ModelError),
    #[error("numerical failure in the simplex engine: {0}")]
    Numeric(String),
    #[error("external solver '{name}' is not available: {reason}")]
    AdapterUnavailable { name: String, reason: String },
    #[error("external solver '{name}' failed: {reason}")]
    AdapterFailed { name: String, reason: String },
}

/// Solves the LP relaxation (binaries relaxed to `[0, 1]`).
pub fn solve_lp_relaxation(model: &MilpModel) -> Result<MilpSolution, SolveError> {
    model.validate()?;
    branch::solve_relaxation(model)
}

/// Solves the MILP with the internal branch-and-bound engine.
///
/// Branching picks the most fractional binary (ties to the lowest id),
/// node selection is best-bound (ties to the oldest node), and the bound
/// side explored first follows the fractional value. Repeated calls on the
/// same model return identical solutions.
pub fn solve_milp(
    model: &MilpModel,
    options: &SolveOptions<'_>,
) -> Result<MilpSolution, SolveError> {
    model.validate()?;
    branch::solve(model, options)
}

/// A pluggable MILP back end (e.g. an industrial solver reached over IPC).
pub trait ExternalSolver {
    fn name(&self) -> &str;
    /// Cheap availability probe; [`solve_with`] turns a `false` into a
    /// configuration error before any solve is attempted.
    fn is_available(&self) -> Result<(), String>;
    fn solve(
        &self,
        model: &MilpModel,
        options: &SolveOptions<'_>,
    ) -> Result<MilpSolution, String>;
}

/// Which engine a caller wants to use.
#[derive(Clone, Copy, Default)]
pub enum SolverChoice<'a> {
    #[default]
    Internal,
    External(&'a dyn ExternalSolver),
}

/// Solves with the chosen engine. A missing external adapter is reported
/// as [`SolveError::AdapterUnavailable`] — never silently replaced by the
/// internal engine.
pub fn solve_with(
    choice: SolverChoice<'_>,
    model: &MilpModel,
    options: &SolveOptions<'_>,
) -> Result<MilpSolution, SolveError> {
    match choice {
        SolverChoice::Internal => solve_milp(model, options),
        SolverChoice::External(solver) => {
            model.validate()?;
            solver
                .is_available()
                .map_err(|reason| SolveError::AdapterUnavailable {
                    name: solver.name().into(),
                    reason,
                })?;
            solver
                .solve(model, options)
                .map_err(|reason| SolveError::AdapterFailed {
                    name: solver.name().into(),
                    reason,
                })
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn tiny_model() -> (MilpModel, VarId, VarId) {
        // min -x - 2y  s.t.  x + y <= 1.5, binaries.
        let mut m = MilpModel::new();
        let x = m.add_binary("x");
        let y = m.add_binary("y");
        m.set_objective(x, -1.0);
        m.set_objective(y, -2.0);
        m.add_constraint("cap", alloc::vec![(x, 1.0), (y, 1.0)], Relation::Le, 1.5);
        (m, x, y)
    }

    #[test]
    fn validate_catches_duplicate_terms() {
        let (mut m, x, _) = tiny_model();
        m.add_constraint("dup", alloc::vec![(x, 1.0), (x, 2.0)], Relation::Le, 3.0);
        assert!(matches!(
            m.validate(),
            Err(ModelError::DuplicateTerm { .. })
        ));
    }

    #[test]
    fn validate_catches_unknown_variable() {
        let (mut m, _, _) = tiny_model();
        m.add_constraint("bad", alloc::vec![(VarId(99), 1.0)], Relation::Le, 1.0);
        assert!(matches!(
            m.validate(),
            Err(ModelError::UnknownVariable { .. })
        ));
    }

    #[test]
    fn lp_text_mentions_tags_and_bounds() {
        let (m, _, _) = tiny_model();
        let text = m.to_lp_text();
        assert!(text.contains("minimize"));
        assert!(text.contains("cap (r0):"));
        assert!(text.contains("0 <= x <= 1"));
        assert!(text.contains("binary"));
    }

    #[test]
    fn objective_value_includes_offset() {
        let (mut m, _, _) = tiny_model();
        m.add_objective_offset(10.0);
        assert_eq!(m.objective_value(&[1.0, 1.0]), 10.0 - 3.0);
    }

    #[test]
    fn constant_rows_are_honoured() {
        // A constraint with no terms still asserts something about zero.
        let mut model = MilpModel::new();
        let x = model.add_binary("x");
        model.set_objective(x, -1.0);
        model.add_constraint("never", Vec::new(), Relation::Ge, 0.5);
        let solution = solve_milp(&model, &SolveOptions::default()).unwrap();
        assert_eq!(solution.status, SolveStatus::Infeasible);

        let mut model = MilpModel::new();
        let x = model.add_binary("x");
        model.set_objective(x, -1.0);
        model.add_constraint("always", Vec::new(), Relation::Le, 0.5);
        let solution = solve_milp(&model, &SolveOptions::default()).unwrap();
        assert_eq!(solution.status, SolveStatus::Optimal);
        assert!((solution.objective + 1.0).abs() <= 1e-9);
    }

    #[test]
    fn deadline_stops_the_search_immediately() {
        let (m, _, _) = tiny_model();
        let stop = || true;
        let options = SolveOptions {
            deadline: Some(&stop),
            ..SolveOptions::default()
        };
        let sol = solve_milp(&m, &options).unwrap();
        assert_eq!(sol.status, SolveStatus::TimeLimit);
    }

    #[test]
    fn external_choice_requires_availability() {
        struct Absent;
        impl ExternalSolver for Absent {
            fn name(&self) -> &str {
                "absent"
            }
            fn is_available(&self) -> Result<(), String> {
                Err("not installed".into())
            }
            fn solve(
                &self,
                _: &MilpModel,
                _: &SolveOptions<'_>,
            ) -> Result<MilpSolution, String> {
                unreachable!()
            }
        }
        let (m, _, _) = tiny_model();
        let err = solve_with(
            SolverChoice::External(&Absent),
            &m,
            &SolveOptions::default(),
        )
        .unwrap_err();
        assert!(matches!(err, SolveError::AdapterUnavailable { .. }));
    }
}

#[cfg(test)]
mod oracle_tests {
    //! Exhaustive-enumeration oracle: on small all-binary models the
    //! branch-and-bound result must match the best of the 2^k assignments,
    //! evaluated directly against the rows without any solver machinery.

    use super::*;
    use alloc::format;
    use alloc::vec::Vec;
    use proptest::prelude::*;

    #[derive(Clone, Debug)]
    struct RawModel {
        costs: Vec<f64>,
        rows: Vec<(Vec<f64>, u8, f64)>,
    }

    fn raw_model_strategy() -> impl Strategy<Value = RawModel> {
        (2usize..=9).prop_flat_map(|nv| {
            let costs = proptest::collection::vec(-12i8..=12, nv)
                .prop_map(|v| v.into_iter().map(|c| c as f64 * 0.5).collect::<Vec<_>>());
            let row = (
                proptest::collection::vec(-4i8..=4, nv),
                0u8..3,
                -6i8..=14,
            )
                .prop_map(|(coeffs, rel, rhs)| {
                    (
                        coeffs.into_iter().map(|c| c as f64 * 0.5).collect::<Vec<f64>>(),
                        rel,
                        rhs as f64 * 0.5,
                    )
                });
            let rows = proptest::collection::vec(row, 0..6);
            (costs, rows).prop_map(|(costs, rows)| RawModel { costs, rows })
        })
    }

    fn build(raw: &RawModel) -> MilpModel {
        let mut model = MilpModel::new();
        let vars: Vec<VarId> = (0..raw.costs.len())
            .map(|i| model.add_binary(format!("b{i}")))
            .collect();
        for (i, &c) in raw.costs.iter().enumerate() {
            model.set_objective(vars[i], c);
        }
        for (r, (coeffs, rel, rhs)) in raw.rows.iter().enumerate() {
            let terms: Vec<(VarId, f64)> = coeffs
                .iter()
                .enumerate()
                .filter(|(_, c)| **c != 0.0)
                .map(|(j, &c)| (vars[j], c))
                .collect();
            let relation = match rel {
                0 => Relation::Le,
                1 => Relation::Ge,
                _ => Relation::Eq,
            };
            model.add_constraint(format!("r{r}"), terms, relation, *rhs);
        }
        model
    }

    /// Best objective over all assignments, or `None` when none is
    /// feasible. Integer-valued data makes the checks exact.
    fn enumerate(raw: &RawModel) -> Option<f64> {
        let nv = raw.costs.len();
        let mut best: Option<f64> = None;
        for mask in 0u32..(1 << nv) {
            let x: Vec<f64> = (0..nv)
                .map(|j| if mask & (1 << j) != 0 { 1.0 } else { 0.0 })
                .collect();
            let feasible = raw.rows.iter().all(|(coeffs, rel, rhs)| {
                let activity: f64 = coeffs.iter().zip(&x).map(|(c, v)| c * v).sum();
                match rel {
                    0 => activity <= rhs + 1e-9,
                    1 => activity >= rhs - 1e-9,
                    _ => (activity - rhs).abs() <= 1e-9,
                }
            });
            if !feasible {
                continue;
            }
            let objective: f64 = raw.costs.iter().zip(&x).map(|(c, v)| c * v).sum();
            best = Some(match best {
                None => objective,
                Some(b) => b.min(objective),
            });
        }
        best
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(300))]

        #[test]
        fn branch_and_bound_matches_enumeration(raw in raw_model_strategy()) {
            let model = build(&raw);
            let solution = solve_milp(&model, &SolveOptions::default()).expect("solver ran");
            match enumerate(&raw) {
                None => prop_assert_eq!(solution.status, SolveStatus::Infeasible),
                Some(best) => {
                    prop_assert_eq!(solution.status, SolveStatus::Optimal);
                    prop_assert!(
                        (solution.objective - best).abs() <= 1e-6,
                        "solver {} vs enumeration {}",
                        solution.objective,
                        best
                    );
                    // The reported assignment must be integral and feasible.
                    for (j, v) in solution.values.iter().enumerate() {
                        prop_assert!(
                            v.abs() <= 1e-9 || (v - 1.0).abs() <= 1e-9,
                            "value {j} = {v} is not integral"
                        );
                    }
                    for row in model.constraints() {
                        let (_, violation) = model.row_violation(row, &solution.values);
                        prop_assert!(violation <= 1e-6, "row '{}' violated by {}", row.tag, violation);
                    }
                }
            }
        }

        #[test]
        fn solves_are_reproducible(raw in raw_model_strategy()) {
            let model = build(&raw);
            let a = solve_milp(&model, &SolveOptions::default()).expect("first solve");
            let b = solve_milp(&model, &SolveOptions::default()).expect("second solve");
            prop_assert_eq!(a.status, b.status);
            prop_assert_eq!(a.objective.to_bits(), b.objective.to_bits());
            prop_assert_eq!(a.values.len(), b.values.len());
            for (u, v) in a.values.iter().zip(b.values.iter()) {
                prop_assert_eq!(u.to_bits(), v.to_bits());
            }
        }
    }
}
