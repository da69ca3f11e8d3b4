//! Joint resource allocation: one MILP that places VMs on cloud nodes and
//! routes virtual links over candidate paths at minimum total cost.
//!
//! The module owns the model assembly used by every optimisation variant in
//! this crate (the joint model here, the elastic admission probes in
//! [`crate::admission`], and the node/link stages of the disjoint baseline in
//! [`crate::disjoint`]), plus the decoding and pricing of solver output.
//!
//! # Model
//!
//! For a network with nodes `n`, links `l`, candidate paths `p` per ordered
//! node pair, and a batch of slices with VMs `m` and virtual links `e`:
//!
//! * `gamma[n] ∈ {0,1}` — node `n` is powered on;
//! * `xi[m,n] ∈ {0,1}` — VM `m` runs on node `n`;
//! * `theta[e,n,n'] ∈ {0,1}` — the endpoints of `e` are hosted on the
//!   ordered pair `(n,n')`;
//! * `pi[e,p] ∈ {0,1}` — virtual link `e` is routed over candidate path `p`.
//!
//! Constraint families (row tags use these names verbatim):
//!
//! * `C1` — per node and resource, hosted demand fits the capacity;
//! * `C2` — each VM is placed on exactly one node;
//! * `C3` — a hosting node must be powered on;
//! * `C4` — each virtual link is routed over exactly one candidate path
//!   (the intra path of a node is the candidate for co-located endpoints);
//! * `C5` — routing is coupled to placement: `theta[e,n,n']` equals
//!   `xi[a,n]·xi[b,n']` for the endpoints `(a,b)` of `e` (`C5-b`..`C5-d`
//!   linearise the product; `C5-a` ties the path choice to `theta`);
//! * `C6` — per physical link, routed traffic fits the bandwidth;
//! * `C7` — per virtual link, the routed path's delay meets the bound.
//!
//! The objective prices bandwidth (`zeta · beta`, with `beta` the
//! cost-weighted routed traffic) plus node power (`upsilon · Σ P_n`, with
//! `P_n` affine in compute utilisation).

use alloc::format;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;

use crate::milp::{MilpModel, MilpSolution, Relation, VarId};
use crate::slices::{RequestBatch, SliceId};
use crate::topology::{
    CloudNode, LinkId, NodeId, PhysicalNetwork, PhysicalPath, ResourceKind, Resources,
};

/// Weights of the two cost terms in the total-cost objective.
#[derive(Clone, Copy, Debug, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct CostWeights {
    /// Weight of the bandwidth term `beta`.
    pub zeta: f64,
    /// Weight of the aggregate node power draw.
    pub upsilon: f64,
}

impl Default for CostWeights {
    fn default() -> Self {
        CostWeights {
            zeta: 9e-5,
            upsilon: 1.0,
        }
    }
}

/// One set bit of the one-hot VM placement matrix: VM `vm` of `slice` runs
/// on node `node`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct VmAssignment {
    pub slice: SliceId,
    pub vm: usize,
    pub node: usize,
}

/// The routing choice of one virtual link: candidate path `ordinal` of the
/// ordered node pair `(from_node, to_node)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct VlRoute {
    pub slice: SliceId,
    pub vl: usize,
    pub from_node: usize,
    pub to_node: usize,
    pub ordinal: usize,
}

/// An active endpoint coupling: the endpoints of virtual link `vl` are
/// hosted on the ordered node pair `(from_node, to_node)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct CouplingBit {
    pub slice: SliceId,
    pub vl: usize,
    pub from_node: usize,
    pub to_node: usize,
}

/// A validated, fully decoded allocation.
///
/// All vectors are sorted: `assignments` and `couplings`/`routes` follow
/// batch order (ascending slice id, then VM/VL index), `nodes_on` is
/// ascending. Every VM has exactly one assignment and every virtual link
/// exactly one route — violations are rejected during decoding.
#[derive(Clone, Debug, Default, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct Placement {
    pub assignments: Vec<VmAssignment>,
    pub nodes_on: Vec<usize>,
    pub routes: Vec<VlRoute>,
    pub couplings: Vec<CouplingBit>,
}

impl Placement {
    /// The node hosting VM `vm` of `slice`, if assigned.
    pub fn host_of(&self, slice: SliceId, vm: usize) -> Option<usize> {
        self.assignments
            .iter()
            .find(|a| a.slice == slice && a.vm == vm)
            .map(|a| a.node)
    }

    /// The route chosen for virtual link `vl` of `slice`, if any.
    pub fn route_of(&self, slice: SliceId, vl: usize) -> Option<&VlRoute> {
        self.routes.iter().find(|r| r.slice == slice && r.vl == vl)
    }

    pub fn is_on(&self, node: usize) -> bool {
        self.nodes_on.binary_search(&node).is_ok()
    }
}

/// Itemised cost of a placement.
#[derive(Clone, Debug, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct CostReport {
    /// `zeta * beta + upsilon * total_power_w`.
    pub total: f64,
    /// Cost-weighted routed traffic, summed over all virtual links.
    pub beta: f64,
    /// Power draw per node, indexed by node id.
    pub node_power_w: Vec<f64>,
    pub total_power_w: f64,
    /// Compute utilisation per node in `[0, 1]`, indexed by node id.
    pub node_utilization: Vec<f64>,
}

/// A solver assignment failed validation against the model's invariants.
///
/// `tag` names the violated constraint family (`"C1"`..`"C7"`, the binary
/// domains `"C8"`..`"C10"`, an elastic slack `"C1-a"`/`"C6-a"`/`"C7-a"`
/// that should have been zero, `"OBJ"` for a cost mismatch, or
/// `"SOLUTION"` when no assignment is attached at all).
#[derive(Clone, Debug, PartialEq, thiserror::Error)]
#[error("solution violates {tag}: {detail}")]
pub struct InvariantViolation {
    pub tag: &'static str,
    pub detail: String,
}

fn violation(tag: &'static str, detail: String) -> InvariantViolation {
    InvariantViolation { tag, detail }
}

/// What a model's objective row measures.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub enum ModelObjective {
    /// `zeta * beta + upsilon * Σ P_n` — the full cost function.
    CostTotal,
    /// `upsilon * Σ P_n` only (node stage of the disjoint baseline).
    PowerOnly,
    /// Sum of the elastic slack variables (admission-control probes).
    SlackSum,
}

/// Assembly switches shared by the joint model, the elastic admission
/// probes and the disjoint stages.
#[derive(Clone, Copy, Debug)]
pub(crate) struct BuildOptions<'a> {
    pub objective: ModelObjective,
    /// Include routing (`pi`, and for free placement `theta`) with rows
    /// `C4`..`C7`.
    pub include_links: bool,
    /// Soften `C1` with per-node, per-resource slack variables.
    pub elastic_nodes: bool,
    /// Soften `C6`/`C7` with per-link and per-slice slack variables.
    pub elastic_links: bool,
    /// Freeze placement: no `gamma`/`xi` variables; routing is pinned to
    /// the hosting pair of each virtual link (`C5` rows force every
    /// candidate path of that pair, which together with `C4` is
    /// satisfiable only when the pair has exactly one candidate).
    pub fixed: Option<&'a Placement>,
}

/// One VM of the flattened batch.
#[derive(Clone, Debug)]
pub struct VmEntry {
    pub slice: SliceId,
    /// VM index within its slice.
    pub vm: usize,
    /// Position of the slice within the batch.
    pub slice_pos: usize,
    pub demand: Resources,
}

/// One virtual link of the flattened batch; `a`/`b` index the flattened VM
/// table.
#[derive(Clone, Debug)]
pub struct VlEntry {
    pub slice: SliceId,
    /// Virtual-link index within its slice.
    pub vl: usize,
    /// Position of the slice within the batch.
    pub slice_pos: usize,
    pub a: usize,
    pub b: usize,
    pub rate_kbps: f64,
    pub max_delay_ms: f64,
}

#[derive(Clone, Debug)]
enum PiLayout {
    /// No routing variables.
    None,
    /// Free placement: every VL carries one `pi` per candidate path of
    /// every ordered node pair. `pair_offset[n*N + n']` is the offset of
    /// pair `(n,n')` within a VL's block; `per_vl` the block size.
    Full {
        pair_offset: Vec<usize>,
        per_vl: usize,
    },
    /// Frozen placement: each VL carries `pi` only for the candidate paths of
    /// its hosting pair. `vl_base` has length `V+1`.
    Fixed {
        vl_base: Vec<usize>,
        vl_pair: Vec<(usize, usize)>,
    },
}

/// Maps the problem's structured variables to model columns.
///
/// Produced by the model builders; everything needed to interpret a
/// [`MilpSolution`] (VM/VL tables, variable offsets, the frozen placement
/// of link-only stages) is carried here, so decoding needs no access to the
/// original batch.
#[derive(Clone, Debug)]
pub struct VarMap {
    node_count: usize,
    link_count: usize,
    objective: ModelObjective,
    vms: Vec<VmEntry>,
    vls: Vec<VlEntry>,
    slice_ids: Vec<SliceId>,
    has_nodes: bool,
    has_theta: bool,
    gamma0: usize,
    xi0: usize,
    theta0: usize,
    pi0: usize,
    pi_layout: PiLayout,
    sigma_vm0: Option<usize>,
    sigma_bw0: Option<usize>,
    sigma_tau0: Option<usize>,
    /// Base of the slice-on-node indicator block, when present.
    use0: Option<usize>,
    num_vars: usize,
    /// Host per flattened VM when the placement is frozen.
    fixed_hosts: Option<Vec<usize>>,
    /// Powered-on flag per node when the placement is frozen.
    fixed_on: Option<Vec<bool>>,
    /// Cost weights the objective was priced with.
    weights: CostWeights,
}

fn kind_index(kind: ResourceKind) -> usize {
    match kind {
        ResourceKind::Compute => 0,
        ResourceKind::Memory => 1,
        ResourceKind::Storage => 2,
    }
}

impl VarMap {
    pub fn node_count(&self) -> usize {
        self.node_count
    }

    pub fn link_count(&self) -> usize {
        self.link_count
    }

    pub fn vm_count(&self) -> usize {
        self.vms.len()
    }

    pub fn vl_count(&self) -> usize {
        self.vls.len()
    }

    pub fn slice_count(&self) -> usize {
        self.slice_ids.len()
    }

    pub fn vms(&self) -> &[VmEntry] {
        &self.vms
    }

    pub fn vls(&self) -> &[VlEntry] {
        &self.vls
    }

    pub fn slice_ids(&self) -> &[SliceId] {
        &self.slice_ids
    }

    pub fn objective_kind(&self) -> ModelObjective {
        self.objective
    }

    /// Total number of model variables (structural vector length).
    pub fn var_count(&self) -> usize {
        self.num_vars
    }

    /// Whether placement is decided by this model (`gamma`/`xi` present).
    pub fn places_vms(&self) -> bool {
        self.has_nodes
    }

    pub fn gamma(&self, n: usize) -> Option<VarId> {
        (self.has_nodes && n < self.node_count).then(|| VarId(self.gamma0 + n))
    }

    pub fn xi(&self, g: usize, n: usize) -> Option<VarId> {
        (self.has_nodes && g < self.vms.len() && n < self.node_count)
            .then(|| VarId(self.xi0 + g * self.node_count + n))
    }

    pub fn theta(&self, v: usize, n: usize, np: usize) -> Option<VarId> {
        let nn = self.node_count;
        (self.has_theta && v < self.vls.len() && n < nn && np < nn)
            .then(|| VarId(self.theta0 + v * nn * nn + n * nn + np))
    }

    /// The routing variable of candidate path `b` of ordered pair
    /// `(n, np)` for virtual link `v`, if that path exists in this model.
    pub fn pi(&self, v: usize, n: usize, np: usize, b: usize) -> Option<VarId> {
        if v >= self.vls.len() {
            return None;
        }
        match &self.pi_layout {
            PiLayout::None => None,
            PiLayout::Full {
                pair_offset,
                per_vl,
            } => {
                let nn = self.node_count;
                if n >= nn || np >= nn {
                    return None;
                }
                let pair = n * nn + np;
                let count = pair_offset[pair + 1] - pair_offset[pair];
                (b < count).then(|| VarId(self.pi0 + v * per_vl + pair_offset[pair] + b))
            }
            PiLayout::Fixed { vl_base, vl_pair } => {
                if vl_pair[v] != (n, np) {
                    return None;
                }
                let count = vl_base[v + 1] - vl_base[v];
                (b < count).then(|| VarId(self.pi0 + vl_base[v] + b))
            }
        }
    }

    /// All routing variables of virtual link `v` as `(n, np, ordinal, id)`
    /// in canonical order.
    pub fn pi_vars_of_vl(&self, v: usize) -> Vec<(usize, usize, usize, VarId)> {
        let mut out = Vec::new();
        if v >= self.vls.len() {
            return out;
        }
        match &self.pi_layout {
            PiLayout::None => {}
            PiLayout::Full {
                pair_offset,
                per_vl,
            } => {
                let nn = self.node_count;
                for n in 0..nn {
                    for np in 0..nn {
                        let pair = n * nn + np;
                        for b in 0..pair_offset[pair + 1] - pair_offset[pair] {
                            out.push((
                                n,
                                np,
                                b,
                                VarId(self.pi0 + v * per_vl + pair_offset[pair] + b),
                            ));
                        }
                    }
                }
            }
            PiLayout::Fixed { vl_base, vl_pair } => {
                let (n, np) = vl_pair[v];
                for b in 0..vl_base[v + 1] - vl_base[v] {
                    out.push((n, np, b, VarId(self.pi0 + vl_base[v] + b)));
                }
            }
        }
        out
    }

    /// Slack on the `C1` row of node `n` and resource `kind`, if elastic.
    pub fn sigma_vm(&self, n: usize, kind: ResourceKind) -> Option<VarId> {
        self.sigma_vm0
            .filter(|_| n < self.node_count)
            .map(|base| VarId(base + n * 3 + kind_index(kind)))
    }

    /// Slack on the `C6` row of link `l`, if elastic.
    pub fn sigma_bw(&self, l: usize) -> Option<VarId> {
        self.sigma_bw0
            .filter(|_| l < self.link_count)
            .map(|base| VarId(base + l))
    }

    /// Shared delay slack of the slice at batch position `pos`, if elastic.
    pub fn sigma_tau(&self, pos: usize) -> Option<VarId> {
        self.sigma_tau0
            .filter(|_| pos < self.slice_ids.len())
            .map(|base| VarId(base + pos))
    }

    /// Indicator that the slice at batch position `pos` places at least
    /// one VM on node `n`, when the model carries the indicator block.
    pub fn slice_uses(&self, pos: usize, n: usize) -> Option<VarId> {
        self.use0
            .filter(|_| pos < self.slice_ids.len() && n < self.node_count)
            .map(|base| VarId(base + pos * self.node_count + n))
    }

    /// Host of flattened VM `g` when the placement is frozen.
    pub fn fixed_host(&self, g: usize) -> Option<usize> {
        self.fixed_hosts.as_ref().map(|h| h[g])
    }
}

fn vm_label(e: &VmEntry) -> String {
    format!("{}.{}.m{}", e.slice.tenant, e.slice.slice, e.vm)
}

fn vl_label(e: &VlEntry) -> String {
    format!("{}.{}.e{}", e.slice.tenant, e.slice.slice, e.vl)
}

/// Sum of `unit_cost` over the path's links.
pub(crate) fn path_cost(network: &PhysicalNetwork, path: &PhysicalPath) -> f64 {
    path.links
        .iter()
        .map(|&l| network.link(l).unit_cost)
        .sum()
}

/// Sum of `delay_ms` over the path's links.
pub(crate) fn path_delay(network: &PhysicalNetwork, path: &PhysicalPath) -> f64 {
    path.links
        .iter()
        .map(|&l| network.link(l).delay_ms)
        .sum()
}

fn flatten_batch(batch: &RequestBatch) -> (Vec<VmEntry>, Vec<VlEntry>, Vec<SliceId>) {
    let mut vms = Vec::new();
    let mut vls = Vec::new();
    let mut slice_ids = Vec::new();
    let mut vm_base = Vec::new();
    for (pos, slice) in batch.slices.iter().enumerate() {
        slice_ids.push(slice.id);
        vm_base.push(vms.len());
        for d in &slice.vms {
            vms.push(VmEntry {
                slice: slice.id,
                vm: d.vm,
                slice_pos: pos,
                demand: d.demand.clone(),
            });
        }
    }
    for (pos, slice) in batch.slices.iter().enumerate() {
        for (e, vl) in slice.vls.iter().enumerate() {
            let local = |m: usize| -> usize {
                slice
                    .vms
                    .iter()
                    .position(|d| d.vm == m)
                    .expect("virtual-link endpoint names a VM absent from its slice")
            };
            vls.push(VlEntry {
                slice: slice.id,
                vl: e,
                slice_pos: pos,
                a: vm_base[pos] + local(vl.endpoints.0),
                b: vm_base[pos] + local(vl.endpoints.1),
                rate_kbps: vl.rate_kbps,
                max_delay_ms: vl.max_delay_ms,
            });
        }
    }
    (vms, vls, slice_ids)
}

/// Builds a model per `opts`.
///
/// Variable order: `gamma` (per node), `xi` (VM-major, then node), `theta`
/// (VL-major, then ordered pair), `pi` (VL-major, ordered pair, path
/// ordinal), then slack blocks (`C1` node-major with resources in
/// compute/memory/storage order, `C6` per link, `C7` per slice). Row order
/// follows the constraint numbering. Both orders are deterministic
/// functions of the inputs.
///
/// With `opts.fixed`, the placement must assign a host to every VM of
/// `batch` (the link stages of the disjoint pipeline guarantee this);
/// anything else is a programming error and panics.
pub(crate) fn assemble_model(
    network: &PhysicalNetwork,
    batch: &RequestBatch,
    weights: &CostWeights,
    opts: &BuildOptions<'_>,
) -> (MilpModel, VarMap) {
    let nn = network.node_count();
    let (vms, vls, slice_ids) = flatten_batch(batch);

    let has_nodes = opts.fixed.is_none();
    let include_links = opts.include_links;
    let has_theta = include_links && has_nodes;

    let (fixed_hosts, fixed_on) = match opts.fixed {
        None => (None, None),
        Some(placement) => {
            let hosts: Vec<usize> = vms
                .iter()
                .map(|e| {
                    placement
                        .host_of(e.slice, e.vm)
                        .expect("frozen placement must cover every VM of the batch")
                })
                .collect();
            let mut on = vec![false; nn];
            for &n in &placement.nodes_on {
                on[n] = true;
            }
            (Some(hosts), Some(on))
        }
    };

    let mut model = MilpModel::new();

    let gamma0 = model.num_vars();
    if has_nodes {
        for n in 0..nn {
            model.add_binary(format!("gamma[n{n}]"));
        }
    }
    let xi0 = model.num_vars();
    if has_nodes {
        for e in &vms {
            for n in 0..nn {
                model.add_binary(format!("xi[{}@n{n}]", vm_label(e)));
            }
        }
    }
    let theta0 = model.num_vars();
    if has_theta {
        for e in &vls {
            for n in 0..nn {
                for np in 0..nn {
                    model.add_binary(format!("theta[{}:n{n}-n{np}]", vl_label(e)));
                }
            }
        }
    }
    let pi0 = model.num_vars();
    let pi_layout = if !include_links {
        PiLayout::None
    } else if has_nodes {
        let mut pair_offset = vec![0usize; nn * nn + 1];
        for n in 0..nn {
            for np in 0..nn {
                let pair = n * nn + np;
                pair_offset[pair + 1] =
                    pair_offset[pair] + network.paths_between(NodeId(n), NodeId(np)).len();
            }
        }
        let per_vl = pair_offset[nn * nn];
        for e in &vls {
            for n in 0..nn {
                for np in 0..nn {
                    for b in 0..network.paths_between(NodeId(n), NodeId(np)).len() {
                        model.add_binary(format!("pi[{}:n{n}-n{np}#{b}]", vl_label(e)));
                    }
                }
            }
        }
        PiLayout::Full {
            pair_offset,
            per_vl,
        }
    } else {
        let hosts = fixed_hosts.as_ref().unwrap();
        let mut vl_base = vec![0usize; vls.len() + 1];
        let mut vl_pair = Vec::with_capacity(vls.len());
        for (v, e) in vls.iter().enumerate() {
            let (ha, hb) = (hosts[e.a], hosts[e.b]);
            let count = network.paths_between(NodeId(ha), NodeId(hb)).len();
            vl_base[v + 1] = vl_base[v] + count;
            vl_pair.push((ha, hb));
            for b in 0..count {
                model.add_binary(format!("pi[{}:n{ha}-n{hb}#{b}]", vl_label(e)));
            }
        }
        PiLayout::Fixed { vl_base, vl_pair }
    };

    let sigma_vm0 = (opts.elastic_nodes && has_nodes).then(|| {
        let base = model.num_vars();
        for n in 0..nn {
            for kind in ResourceKind::ALL {
                model.add_continuous(format!("sigma_vm[n{n}:{}]", kind.label()));
            }
        }
        base
    });
    let sigma_bw0 = (opts.elastic_links && include_links).then(|| {
        let base = model.num_vars();
        for l in 0..network.link_count() {
            model.add_continuous(format!("sigma_bw[l{l}]"));
        }
        base
    });
    let sigma_tau0 = (opts.elastic_links && include_links).then(|| {
        let base = model.num_vars();
        for id in &slice_ids {
            model.add_continuous(format!("sigma_tau[{}.{}]", id.tenant, id.slice));
        }
        base
    });
    // Slice-on-node indicators. Linked to `xi` below, they expose the
    // slice/node incidence structure — the combinatorial core of the
    // placement — as first-class binaries the search can branch on before
    // descending to individual VMs. High priority steers the search there.
    let use0 = (has_nodes && nn > 1 && !slice_ids.is_empty()).then(|| {
        let base = model.num_vars();
        for id in &slice_ids {
            for n in 0..nn {
                let v = model.add_binary(format!("use[{}.{}:n{n}]", id.tenant, id.slice));
                model.set_branch_priority(v, 100);
            }
        }
        base
    });

    let map = VarMap {
        node_count: nn,
        link_count: network.link_count(),
        objective: opts.objective,
        vms,
        vls,
        slice_ids,
        has_nodes,
        has_theta,
        gamma0,
        xi0,
        theta0,
        pi0,
        pi_layout,
        sigma_vm0,
        sigma_bw0,
        sigma_tau0,
        use0,
        num_vars: model.num_vars(),
        fixed_hosts,
        fixed_on,
        weights: *weights,
    };

    // Objective.
    let power_terms = |model: &mut MilpModel, map: &VarMap, upsilon: f64| {
        for n in 0..nn {
            let node = network.node(NodeId(n));
            model.add_objective(map.gamma(n).unwrap(), upsilon * node.power_idle_w);
            let span = node.power_max_w - node.power_idle_w;
            let cap = node.capacity.get(ResourceKind::Compute);
            for (g, e) in map.vms.iter().enumerate() {
                let coeff = if cap > 0.0 {
                    upsilon * span * e.demand.get(ResourceKind::Compute) / cap
                } else {
                    0.0
                };
                model.add_objective(map.xi(g, n).unwrap(), coeff);
            }
        }
    };
    let beta_terms = |model: &mut MilpModel, map: &VarMap, zeta: f64| {
        for (v, e) in map.vls.iter().enumerate() {
            for (n, np, b, id) in map.pi_vars_of_vl(v) {
                let path = &network.paths_between(NodeId(n), NodeId(np))[b];
                model.add_objective(id, zeta * e.rate_kbps * path_cost(network, path));
            }
        }
    };
    match opts.objective {
        ModelObjective::CostTotal => {
            if has_nodes {
                power_terms(&mut model, &map, weights.upsilon);
            } else {
                model.add_objective_offset(weights.upsilon * fixed_power(network, &map));
            }
            beta_terms(&mut model, &map, weights.zeta);
        }
        ModelObjective::PowerOnly => {
            if has_nodes {
                power_terms(&mut model, &map, weights.upsilon);
            } else {
                model.add_objective_offset(weights.upsilon * fixed_power(network, &map));
            }
        }
        ModelObjective::SlackSum => {
            for n in 0..nn {
                for kind in ResourceKind::ALL {
                    if let Some(id) = map.sigma_vm(n, kind) {
                        model.add_objective(id, 1.0);
                    }
                }
            }
            for l in 0..map.link_count {
                if let Some(id) = map.sigma_bw(l) {
                    model.add_objective(id, 1.0);
                }
            }
            for pos in 0..map.slice_count() {
                if let Some(id) = map.sigma_tau(pos) {
                    model.add_objective(id, 1.0);
                }
            }
        }
    }

    // Rows.
    if has_nodes {
        for n in 0..nn {
            let node = network.node(NodeId(n));
            for kind in ResourceKind::ALL {
                // Capacity in activation form, `Σ ξ·φ ≤ r·γ`: identical
                // integer solutions (a powered-off node hosts nothing
                // anyway), but the relaxation can no longer understate
                // idle power by powering nodes on fractionally.
                let mut terms: Vec<(VarId, f64)> = map
                    .vms
                    .iter()
                    .enumerate()
                    .map(|(g, e)| (map.xi(g, n).unwrap(), e.demand.get(kind)))
                    .collect();
                terms.push((map.gamma(n).unwrap(), -node.capacity.get(kind)));
                if let Some(id) = map.sigma_vm(n, kind) {
                    terms.push((id, -1.0));
                }
                model.add_constraint(
                    format!("C1:n{n}:{}", kind.label()),
                    terms,
                    Relation::Le,
                    0.0,
                );
            }
        }
        // Rounding cut: hosting the whole batch needs at least
        // `ceil(total demand / largest capacity)` powered-on nodes, per
        // resource. Implied rows never beat this bound fractionally, so it
        // saves the search from chasing fractional node counts. Only valid
        // when capacity is hard.
        if map.sigma_vm0.is_none() && !map.vms.is_empty() {
            let mut needed = 0usize;
            for kind in ResourceKind::ALL {
                let demand: f64 = map.vms.iter().map(|e| e.demand.get(kind)).sum();
                let largest = (0..nn)
                    .map(|n| network.node(NodeId(n)).capacity.get(kind))
                    .fold(0.0f64, f64::max);
                if largest > 0.0 {
                    needed = needed.max(ceil_usize(demand / largest));
                }
            }
            if needed > 0 {
                let terms: Vec<(VarId, f64)> =
                    (0..nn).map(|n| (map.gamma(n).unwrap(), 1.0)).collect();
                model.add_constraint("CUT:active-nodes", terms, Relation::Ge, needed as f64);
            }
        }
        for (g, e) in map.vms.iter().enumerate() {
            let terms: Vec<(VarId, f64)> =
                (0..nn).map(|n| (map.xi(g, n).unwrap(), 1.0)).collect();
            model.add_constraint(format!("C2:{}", vm_label(e)), terms, Relation::Eq, 1.0);
        }
        for n in 0..nn {
            for (g, e) in map.vms.iter().enumerate() {
                model.add_constraint(
                    format!("C3:n{n}:{}", vm_label(e)),
                    vec![(map.xi(g, n).unwrap(), 1.0), (map.gamma(n).unwrap(), -1.0)],
                    Relation::Le,
                    0.0,
                );
            }
        }
        // Link the slice-on-node indicators to the placement bits: an
        // indicator is set exactly when the slice has a VM on the node
        // (`Σ xi >= use` and `Σ xi <= |slice| * use`).
        if map.use0.is_some() {
            for (pos, id) in map.slice_ids.iter().enumerate() {
                let members: Vec<usize> = (0..map.vms.len())
                    .filter(|&g| map.vms[g].slice_pos == pos)
                    .collect();
                for n in 0..nn {
                    let used = map.slice_uses(pos, n).unwrap();
                    let mut ge: Vec<(VarId, f64)> = members
                        .iter()
                        .map(|&g| (map.xi(g, n).unwrap(), 1.0))
                        .collect();
                    ge.push((used, -1.0));
                    model.add_constraint(
                        format!("CUT:slice-node:{}.{}:n{n}", id.tenant, id.slice),
                        ge,
                        Relation::Ge,
                        0.0,
                    );
                    if members.is_empty() {
                        continue;
                    }
                    let mut le: Vec<(VarId, f64)> = members
                        .iter()
                        .map(|&g| (map.xi(g, n).unwrap(), 1.0))
                        .collect();
                    le.push((used, -(members.len() as f64)));
                    model.add_constraint(
                        format!("CUT:slice-span:{}.{}:n{n}", id.tenant, id.slice),
                        le,
                        Relation::Le,
                        0.0,
                    );
                }
            }
            // Counting cut: each node's capacity admits only so many whole
            // slices, so when the batch holds more slices than all nodes
            // can host intact, the surplus must each touch a second node.
            // Bounds the indicator total from below, which is what lets
            // the split-price rows charge the relaxation at the root.
            if map.sigma_vm0.is_none() {
                let placed: Vec<usize> = (0..map.slice_count())
                    .filter(|&pos| map.vms.iter().any(|e| e.slice_pos == pos))
                    .collect();
                let mut whole_cap = Some(0usize);
                for n in 0..nn {
                    let cap = &network.node(NodeId(n)).capacity;
                    let mut fit = usize::MAX;
                    for kind in ResourceKind::ALL {
                        let least: f64 = placed
                            .iter()
                            .map(|&pos| {
                                map.vms
                                    .iter()
                                    .filter(|e| e.slice_pos == pos)
                                    .map(|e| e.demand.get(kind))
                                    .sum::<f64>()
                            })
                            .fold(f64::INFINITY, f64::min);
                        if least > 0.0 {
                            let ratio = cap.get(kind) / least;
                            if ratio.is_finite() && (ratio as usize) < fit {
                                fit = ratio as usize;
                            }
                        }
                    }
                    whole_cap = match (whole_cap, fit) {
                        (Some(total), f) if f != usize::MAX => Some(total + f),
                        _ => None,
                    };
                }
                if let Some(cap) = whole_cap {
                    let surplus = placed.len().saturating_sub(cap);
                    if surplus > 0 {
                        let map_ref = &map;
                        let terms: Vec<(VarId, f64)> = placed
                            .iter()
                            .flat_map(|&pos| {
                                (0..nn)
                                    .map(move |n| (map_ref.slice_uses(pos, n).unwrap(), 1.0))
                            })
                            .collect();
                        model.add_constraint(
                            "CUT:split-count",
                            terms,
                            Relation::Ge,
                            (placed.len() + surplus) as f64,
                        );
                    }
                }
            }
        }
    }

    if include_links && !map.vls.is_empty() {
        for (v, e) in map.vls.iter().enumerate() {
            let terms: Vec<(VarId, f64)> = map
                .pi_vars_of_vl(v)
                .into_iter()
                .map(|(_, _, _, id)| (id, 1.0))
                .collect();
            model.add_constraint(format!("C4:{}", vl_label(e)), terms, Relation::Eq, 1.0);
        }
        if has_theta {
            // Rounding cut: a node with room for `u` VMs can host only a
            // bounded number of co-located virtual links (their endpoint
            // pairs must fit among those `u` slots), so the intra coupling
            // bits on each node are capped. Implied by capacity and
            // placement for integral solutions, but it stops the
            // relaxation from co-locating everything fractionally. Hard
            // capacity only.
            if map.sigma_vm0.is_none() {
                for n in 0..nn {
                    if let Some(rhs) = colocation_bound(network, &map, n) {
                        let terms: Vec<(VarId, f64)> = (0..map.vls.len())
                            .map(|v| (map.theta(v, n, n).unwrap(), 1.0))
                            .collect();
                        model.add_constraint(
                            format!("CUT:colocation:n{n}"),
                            terms,
                            Relation::Le,
                            rhs as f64,
                        );
                    }
                }
            }
            // A slice on a single node has no crossing links, so its
            // off-diagonal coupling mass is capped by how many extra nodes
            // it touches. Forces the relaxation to lift the incidence
            // indicators of whichever slices it routes across nodes.
            if map.use0.is_some() {
                for (pos, id) in map.slice_ids.iter().enumerate() {
                    let slice_vls: Vec<usize> = (0..map.vls.len())
                        .filter(|&v| map.vls[v].slice_pos == pos)
                        .collect();
                    if slice_vls.is_empty() {
                        continue;
                    }
                    let m = slice_vls.len() as f64;
                    let mut terms: Vec<(VarId, f64)> = Vec::new();
                    for &v in &slice_vls {
                        for n in 0..nn {
                            for np in 0..nn {
                                if n != np {
                                    terms.push((map.theta(v, n, np).unwrap(), 1.0));
                                }
                            }
                        }
                    }
                    for n in 0..nn {
                        terms.push((map.slice_uses(pos, n).unwrap(), -m));
                    }
                    model.add_constraint(
                        format!("CUT:slice-cross:{}.{}", id.tenant, id.slice),
                        terms,
                        Relation::Le,
                        -m,
                    );
                }
            }
            // Split pricing: charge each slice's routing at least its
            // provable minimum for the number of nodes it touches. The
            // relaxation otherwise routes crossing links through
            // fractional co-location for free; these rows price the
            // incidence indicators so branching on them moves the bound.
            if map.use0.is_some()
                && matches!(opts.objective, ModelObjective::CostTotal)
                && weights.zeta > 0.0
            {
                let hard_delay = map.sigma_tau0.is_none();
                for (pos, id) in map.slice_ids.iter().enumerate() {
                    match slice_split_price(network, &map, pos, hard_delay) {
                        None => {}
                        Some(SplitPrice::NeverSplits) => {
                            let terms: Vec<(VarId, f64)> = (0..nn)
                                .map(|n| (map.slice_uses(pos, n).unwrap(), 1.0))
                                .collect();
                            model.add_constraint(
                                format!("CUT:slice-whole:{}.{}", id.tenant, id.slice),
                                terms,
                                Relation::Le,
                                1.0,
                            );
                        }
                        Some(SplitPrice::Priced { base, step }) => {
                            let mut terms: Vec<(VarId, f64)> = Vec::new();
                            for (v, e) in map.vls.iter().enumerate() {
                                if e.slice_pos != pos {
                                    continue;
                                }
                                for (n, np, b, pid) in map.pi_vars_of_vl(v) {
                                    let path = &network.paths_between(NodeId(n), NodeId(np))[b];
                                    let c =
                                        weights.zeta * e.rate_kbps * path_cost(network, path);
                                    terms.push((pid, c));
                                }
                            }
                            for n in 0..nn {
                                terms.push((map.slice_uses(pos, n).unwrap(), -step));
                            }
                            model.add_constraint(
                                format!("CUT:slice-price:{}.{}", id.tenant, id.slice),
                                terms,
                                Relation::Ge,
                                base - step,
                            );
                        }
                    }
                }
            }
            for (v, e) in map.vls.iter().enumerate() {
                for n in 0..nn {
                    for np in 0..nn {
                        let mut terms: Vec<(VarId, f64)> = (0..network
                            .paths_between(NodeId(n), NodeId(np))
                            .len())
                            .map(|b| (map.pi(v, n, np, b).unwrap(), 1.0))
                            .collect();
                        terms.push((map.theta(v, n, np).unwrap(), -1.0));
                        model.add_constraint(
                            format!("C5-a:{}:n{n}-n{np}", vl_label(e)),
                            terms,
                            Relation::Eq,
                            0.0,
                        );
                    }
                }
            }
            for (v, e) in map.vls.iter().enumerate() {
                for n in 0..nn {
                    for np in 0..nn {
                        model.add_constraint(
                            format!("C5-b:{}:n{n}-n{np}", vl_label(e)),
                            vec![
                                (map.theta(v, n, np).unwrap(), 1.0),
                                (map.xi(e.a, n).unwrap(), -1.0),
                                (map.xi(e.b, np).unwrap(), 1.0),
                            ],
                            Relation::Le,
                            1.0,
                        );
                    }
                }
            }
            for (v, e) in map.vls.iter().enumerate() {
                for n in 0..nn {
                    for np in 0..nn {
                        model.add_constraint(
                            format!("C5-c:{}:n{n}-n{np}", vl_label(e)),
                            vec![
                                (map.xi(e.a, n).unwrap(), 1.0),
                                (map.xi(e.b, np).unwrap(), 1.0),
                                (map.theta(v, n, np).unwrap(), -1.0),
                            ],
                            Relation::Le,
                            1.0,
                        );
                    }
                }
            }
            for (v, e) in map.vls.iter().enumerate() {
                for n in 0..nn {
                    for np in 0..nn {
                        model.add_constraint(
                            format!("C5-d:{}:n{n}-n{np}", vl_label(e)),
                            vec![
                                (map.theta(v, n, np).unwrap(), 1.0),
                                (map.xi(e.b, np).unwrap(), -1.0),
                            ],
                            Relation::Le,
                            0.0,
                        );
                    }
                }
            }
        } else {
            // Frozen placement: the coupling constraints degenerate to
            // constants and force every candidate path of the hosting
            // pair. Kept literal — a pair with several candidates makes
            // the stage infeasible by design.
            for (v, e) in map.vls.iter().enumerate() {
                for (n, np, b, id) in map.pi_vars_of_vl(v) {
                    model.add_constraint(
                        format!("C5:{}:n{n}-n{np}#{b}", vl_label(e)),
                        vec![(id, 1.0)],
                        Relation::Eq,
                        1.0,
                    );
                }
            }
        }
        for l in 0..network.link_count() {
            let link = network.link(LinkId(l));
            let mut terms: Vec<(VarId, f64)> = Vec::new();
            for (v, e) in map.vls.iter().enumerate() {
                for (n, np, b, id) in map.pi_vars_of_vl(v) {
                    let path = &network.paths_between(NodeId(n), NodeId(np))[b];
                    if path.uses(LinkId(l)) {
                        terms.push((id, e.rate_kbps));
                    }
                }
            }
            if let Some(id) = map.sigma_bw(l) {
                terms.push((id, -1.0));
            }
            model.add_constraint(
                format!("C6:l{l}"),
                terms,
                Relation::Le,
                link.bandwidth_kbps,
            );
        }
        for (v, e) in map.vls.iter().enumerate() {
            let mut terms: Vec<(VarId, f64)> = map
                .pi_vars_of_vl(v)
                .into_iter()
                .map(|(n, np, b, id)| {
                    let path = &network.paths_between(NodeId(n), NodeId(np))[b];
                    (id, path_delay(network, path))
                })
                .collect();
            if let Some(id) = map.sigma_tau(e.slice_pos) {
                terms.push((id, -1.0));
            }
            model.add_constraint(
                format!("C7:{}", vl_label(e)),
                terms,
                Relation::Le,
                e.max_delay_ms,
            );
        }
    }

    (model, map)
}

/// Ceiling of a nonnegative finite value without std float intrinsics.
fn ceil_usize(v: f64) -> usize {
    let t = v as usize;
    if (t as f64) < v {
        t + 1
    } else {
        t
    }
}

/// Upper-bounds how many virtual links can ride node `n`'s intra path:
/// their endpoint pairs must be co-hosted there, and capacity admits only
/// so many VMs. Conservative (a valid over-estimate), computed by a small
/// assignment DP: `dp[j]` is the most intra-countable VLs over any mix of
/// per-slice VM slot usage summing to `j`. Returns `None` when the bound
/// cannot beat the trivial one (every VL intra).
fn colocation_bound(network: &PhysicalNetwork, map: &VarMap, n: usize) -> Option<usize> {
    let total_vms = map.vms.len();
    let total_vls = map.vls.len();
    if total_vms == 0 || total_vls == 0 {
        return None;
    }
    let cap = &network.node(NodeId(n)).capacity;
    let mut slots = total_vms;
    for kind in ResourceKind::ALL {
        let min_demand = map
            .vms
            .iter()
            .map(|e| e.demand.get(kind))
            .fold(f64::INFINITY, f64::min);
        if min_demand > 0.0 {
            let ratio = cap.get(kind) / min_demand;
            if ratio.is_finite() && ratio >= 0.0 && (ratio as usize) < slots {
                slots = ratio as usize;
            }
        }
    }
    if slots >= total_vms {
        return None;
    }

    // Per-slice profiles: f[k] = the most VLs of the slice with both
    // endpoints among k of its VMs (exact by subset enumeration for small
    // slices, a pair-counting bound beyond that).
    let mut profiles: Vec<Vec<usize>> = Vec::with_capacity(map.slice_count());
    for pos in 0..map.slice_count() {
        let members: Vec<usize> = (0..total_vms)
            .filter(|&g| map.vms[g].slice_pos == pos)
            .collect();
        let vls: Vec<(usize, usize)> = map
            .vls
            .iter()
            .filter(|e| e.slice_pos == pos)
            .map(|e| {
                let local = |g: usize| members.iter().position(|&x| x == g).unwrap();
                (local(e.a), local(e.b))
            })
            .collect();
        let m = members.len();
        let mut f = vec![0usize; m + 1];
        if m <= 16 {
            for subset in 0u32..(1u32 << m) {
                let k = subset.count_ones() as usize;
                let inside = vls
                    .iter()
                    .filter(|&&(a, b)| subset & (1 << a) != 0 && subset & (1 << b) != 0)
                    .count();
                if inside > f[k] {
                    f[k] = inside;
                }
            }
        } else {
            // Large hand-built slice: bound by pair count times the worst
            // endpoint-pair multiplicity.
            let mut mult = 1usize;
            for (i, &(a, b)) in vls.iter().enumerate() {
                let same = vls[i..]
                    .iter()
                    .filter(|&&(c, d)| (c, d) == (a, b) || (d, c) == (a, b))
                    .count();
                mult = mult.max(same);
            }
            for (k, slot) in f.iter_mut().enumerate() {
                *slot = (k * k.saturating_sub(1) / 2 * mult).min(vls.len());
            }
        }
        profiles.push(f);
    }

    let mut dp = vec![0usize; slots + 1];
    for f in &profiles {
        let prev = dp.clone();
        for j in 0..=slots {
            for (k, &gain) in f.iter().enumerate().take(j + 1).skip(1) {
                let candidate = prev[j - k] + gain;
                if candidate > dp[j] {
                    dp[j] = candidate;
                }
            }
        }
    }
    let bound = dp[slots];
    (bound < total_vls).then_some(bound)
}

/// What spreading a slice over several nodes provably costs in routing.
enum SplitPrice {
    /// No split admits a delay-feasible routing: the slice must stay on
    /// one node.
    NeverSplits,
    /// Touching `k` nodes costs at least `base + step * (k - 1)` in
    /// weighted path-cost terms.
    Priced { base: f64, step: f64 },
}

/// Prices the slice at batch position `pos` by brute force over split
/// patterns: for every partition of its VMs into `k` groups on `k`
/// distinct nodes, each virtual link is charged the cheapest candidate
/// path of its endpoint pair (delay-feasible paths only when delay is
/// hard). The resulting per-`k` minima yield a linear lower bound on the
/// routing cost as a function of how many nodes the slice touches — valid
/// for every integral solution because actual routings can only cost
/// more. Returns `None` when the slice is too large to enumerate or the
/// bound is vacuous.
fn slice_split_price(
    network: &PhysicalNetwork,
    map: &VarMap,
    pos: usize,
    hard_delay: bool,
) -> Option<SplitPrice> {
    let nn = map.node_count;
    let members: Vec<usize> = (0..map.vms.len())
        .filter(|&g| map.vms[g].slice_pos == pos)
        .collect();
    let m = members.len();
    let vls: Vec<&VlEntry> = map.vls.iter().filter(|e| e.slice_pos == pos).collect();
    if m < 2 || m > 4 || nn < 2 || nn > 6 || vls.is_empty() {
        return None;
    }
    let local = |g: usize| members.iter().position(|&x| x == g).unwrap();
    let ends: Vec<(usize, usize)> = vls.iter().map(|e| (local(e.a), local(e.b))).collect();

    // cheapest[e][n*nn+np]: least weighted cost any admissible candidate
    // path offers virtual link `e` between hosts `n` and `np`.
    let zeta = map.weights.zeta;
    let mut cheapest = vec![vec![f64::INFINITY; nn * nn]; vls.len()];
    for (v, e) in vls.iter().enumerate() {
        for n in 0..nn {
            for np in 0..nn {
                let mut best = f64::INFINITY;
                for path in network.paths_between(NodeId(n), NodeId(np)) {
                    if hard_delay && path_delay(network, path) > e.max_delay_ms + 1e-9 {
                        continue;
                    }
                    let c = zeta * e.rate_kbps * path_cost(network, path);
                    if c < best {
                        best = c;
                    }
                }
                cheapest[v][n * nn + np] = best;
            }
        }
    }

    let placement_cost = |groups: &[usize], nodes: &[usize]| -> f64 {
        let mut total = 0.0;
        for (v, &(a, b)) in ends.iter().enumerate() {
            total += cheapest[v][nodes[groups[a]] * nn + nodes[groups[b]]];
            if !total.is_finite() {
                return f64::INFINITY;
            }
        }
        total
    };

    let whole = vec![0usize; m];
    let mut base = f64::INFINITY;
    for n in 0..nn {
        let c = placement_cost(&whole, &[n]);
        if c < base {
            base = c;
        }
    }
    if !base.is_finite() {
        return None;
    }

    // extra[k] = min over partitions into k groups and injective node
    // assignments, minus `base`.
    let max_k = m.min(nn);
    let mut step = f64::INFINITY;
    let mut any_split = false;
    // Restricted-growth strings enumerate the set partitions of the VMs.
    let mut rgs = vec![0usize; m];
    loop {
        let k = rgs.iter().copied().max().unwrap() + 1;
        if k >= 2 && k <= max_k {
            let mut best = f64::INFINITY;
            // Odometer over ordered k-tuples of distinct nodes.
            let mut nodes = vec![0usize; k];
            'tuples: loop {
                let mut mask = 0u32;
                let mut distinct = true;
                for &n in &nodes {
                    if mask & (1 << n) != 0 {
                        distinct = false;
                        break;
                    }
                    mask |= 1 << n;
                }
                if distinct {
                    let c = placement_cost(&rgs, &nodes);
                    if c < best {
                        best = c;
                    }
                }
                for d in (0..k).rev() {
                    nodes[d] += 1;
                    if nodes[d] < nn {
                        continue 'tuples;
                    }
                    nodes[d] = 0;
                }
                break;
            }
            if best.is_finite() {
                any_split = true;
                let candidate = (best - base) / (k - 1) as f64;
                if candidate < step {
                    step = candidate;
                }
            }
        }
        // Next restricted-growth string.
        let mut done = true;
        for i in (1..m).rev() {
            let prefix_max = rgs[..i].iter().copied().max().unwrap();
            if rgs[i] <= prefix_max {
                rgs[i] += 1;
                for slot in rgs.iter_mut().skip(i + 1) {
                    *slot = 0;
                }
                done = false;
                break;
            }
        }
        if done {
            break;
        }
    }

    if !any_split {
        return Some(SplitPrice::NeverSplits);
    }
    if step <= 1e-9 {
        return None;
    }
    Some(SplitPrice::Priced { base, step })
}

/// Total power draw of a frozen placement.
fn fixed_power(network: &PhysicalNetwork, map: &VarMap) -> f64 {
    let hosts = map
        .fixed_hosts
        .as_ref()
        .expect("fixed_power requires a frozen placement");
    let on = map.fixed_on.as_ref().unwrap();
    let mut total = 0.0;
    for n in 0..map.node_count {
        let node = network.node(NodeId(n));
        let cap = node.capacity.get(ResourceKind::Compute);
        let used: f64 = map
            .vms
            .iter()
            .enumerate()
            .filter(|(g, _)| hosts[*g] == n)
            .map(|(_, e)| e.demand.get(ResourceKind::Compute))
            .sum();
        let util = if cap > 0.0 { used / cap } else { 0.0 };
        total += node_power(node, util, on[n]);
    }
    total
}

/// Builds the joint placement-and-routing model (full cost objective, all
/// constraint families hard).
pub fn build_jra_model(
    network: &PhysicalNetwork,
    batch: &RequestBatch,
    weights: &CostWeights,
) -> (MilpModel, VarMap) {
    assemble_model(
        network,
        batch,
        weights,
        &BuildOptions {
            objective: ModelObjective::CostTotal,
            include_links: true,
            elastic_nodes: false,
            elastic_links: false,
            fixed: None,
        },
    )
}

/// A first-fit packing encoded as a seed for
/// [`SolveOptions::incumbent`](crate::milp::SolveOptions): slices go whole
/// onto the first node with room for all their VMs (falling back to
/// VM-by-VM first-fit for slices too large to co-locate), and each virtual
/// link rides the cheapest delay-feasible path between its hosts.
///
/// With elastic capacity, VMs that fit nowhere land on the least-loaded
/// node for the slack variables to absorb; otherwise such a batch yields
/// `None`. The solver re-validates any seed, so a returned vector that
/// turns out infeasible (say, over bandwidth) is merely ignored — seeding
/// accelerates the search but never changes its result.
/// Lexicographic price of a partial seed: the model's own objective first
/// (slack sum for elastic variants, weighted cost otherwise), routing cost
/// as a tie-break so equally slack-optimal seeds still route sensibly.
#[derive(Clone, Copy, PartialEq)]
struct SeedPrice {
    primary: f64,
    secondary: f64,
}

impl SeedPrice {
    const ZERO: SeedPrice = SeedPrice {
        primary: 0.0,
        secondary: 0.0,
    };

    fn add(self, other: SeedPrice) -> SeedPrice {
        SeedPrice {
            primary: self.primary + other.primary,
            secondary: self.secondary + other.secondary,
        }
    }

    fn better_than(&self, other: &SeedPrice) -> bool {
        if self.primary < other.primary - 1e-12 {
            return true;
        }
        if self.primary > other.primary + 1e-12 {
            return false;
        }
        self.secondary < other.secondary - 1e-12
    }
}

/// A placement under construction during the greedy seed search.
struct SeedState {
    hosts: Vec<usize>,
    /// Chosen route per VL index: (from node, to node, path ordinal).
    routes: Vec<Option<(usize, usize, usize)>>,
    used: Vec<Resources>,
    link_load: Vec<f64>,
    on: Vec<bool>,
    price: SeedPrice,
}

impl SeedState {
    fn new(network: &PhysicalNetwork, map: &VarMap) -> SeedState {
        SeedState {
            hosts: vec![usize::MAX; map.vms.len()],
            routes: vec![None; map.vls.len()],
            used: vec![Resources::new(0.0, 0.0, 0.0); map.node_count],
            link_load: vec![0.0; network.link_count()],
            on: vec![false; map.node_count],
            price: SeedPrice::ZERO,
        }
    }
}

/// Price of powering node `n` with `extra` demand added, under the map's
/// objective: power/cost models charge the affine power curve (plus the
/// idle draw when the node first turns on) and slack models charge the
/// capacity overshoot.
fn node_price(
    network: &PhysicalNetwork,
    map: &VarMap,
    state: &SeedState,
    n: usize,
    extra: &Resources,
) -> SeedPrice {
    let node = network.node(NodeId(n));
    match map.objective {
        ModelObjective::SlackSum => {
            let mut overshoot = 0.0;
            for kind in ResourceKind::ALL {
                let cap = node.capacity.get(kind);
                let before = (state.used[n].get(kind) - cap).max(0.0);
                let after = (state.used[n].get(kind) + extra.get(kind) - cap).max(0.0);
                overshoot += after - before;
            }
            SeedPrice {
                primary: overshoot,
                secondary: 0.0,
            }
        }
        _ => {
            let upsilon = map.weights.upsilon;
            let cap = node.capacity.get(ResourceKind::Compute);
            let span = node.power_max_w - node.power_idle_w;
            let util_term = if cap > 0.0 {
                upsilon * span * extra.get(ResourceKind::Compute) / cap
            } else {
                0.0
            };
            let idle_term = if state.on[n] {
                0.0
            } else {
                upsilon * node.power_idle_w
            };
            SeedPrice {
                primary: util_term + idle_term,
                secondary: 0.0,
            }
        }
    }
}

/// Cheapest route for VL `e` between fixed hosts, aware of bandwidth already
/// committed by earlier routes. Hard models require zero overshoot; elastic
/// link models price overshoot into the primary term instead. Returns the
/// path ordinal and its price.
fn route_price(
    network: &PhysicalNetwork,
    map: &VarMap,
    link_load: &[f64],
    e: &VlEntry,
    ha: usize,
    hb: usize,
) -> Option<(usize, SeedPrice)> {
    let elastic_links = map.sigma_tau0.is_some();
    let hard = map.sigma_bw0.is_none();
    let mut best: Option<(usize, SeedPrice)> = None;
    for (b, p) in network
        .paths_between(NodeId(ha), NodeId(hb))
        .iter()
        .enumerate()
    {
        let over_delay = (path_delay(network, p) - e.max_delay_ms).max(0.0);
        let mut over_bw = 0.0;
        for l in &p.links {
            let bw = network.link(*l).bandwidth_kbps;
            let before = (link_load[l.0] - bw).max(0.0);
            let after = (link_load[l.0] + e.rate_kbps - bw).max(0.0);
            over_bw += after - before;
        }
        if hard && !elastic_links && (over_delay > 1e-9 || over_bw > 1e-9) {
            continue;
        }
        let cost = map.weights.zeta * e.rate_kbps * path_cost(network, p);
        let price = match map.objective {
            ModelObjective::SlackSum => SeedPrice {
                primary: over_delay + over_bw,
                secondary: cost,
            },
            _ => SeedPrice {
                primary: cost,
                secondary: over_delay + over_bw,
            },
        };
        let improves = best
            .as_ref()
            .map_or(true, |(_, cur)| price.better_than(cur));
        if improves {
            best = Some((b, price));
        }
    }
    best
}

/// Commits one slice's VMs to `assignment` (parallel to `members`) and
/// routes its VLs, accumulating price; `None` when the model is hard and
/// either capacity or routing fails.
fn commit_slice(
    network: &PhysicalNetwork,
    map: &VarMap,
    state: &mut SeedState,
    members: &[usize],
    assignment: &[usize],
) -> Option<()> {
    let hard = map.sigma_vm0.is_none();
    for (&g, &n) in members.iter().zip(assignment) {
        let demand = &map.vms[g].demand;
        if hard
            && !state.used[n]
                .add(demand)
                .fits_within(&network.node(NodeId(n)).capacity, 1e-9)
        {
            return None;
        }
        let price = node_price(network, map, state, n, demand);
        state.price = state.price.add(price);
        state.used[n] = state.used[n].add(demand);
        state.on[n] = true;
        state.hosts[g] = n;
    }
    if matches!(map.pi_layout, PiLayout::Full { .. }) {
        let pos = map.vms[members[0]].slice_pos;
        for (v, e) in map.vls.iter().enumerate() {
            if e.slice_pos != pos {
                continue;
            }
            let (ha, hb) = (state.hosts[e.a], state.hosts[e.b]);
            let (b, price) = route_price(network, map, &state.link_load, e, ha, hb)?;
            state.price = state.price.add(price);
            let path = &network.paths_between(NodeId(ha), NodeId(hb))[b];
            for l in &path.links {
                state.link_load[l.0] += e.rate_kbps;
            }
            state.routes[v] = Some((ha, hb, b));
        }
    }
    Some(())
}

/// Runs the sequential packing heuristic over slices in `order`, restricted
/// to the first `allowed` nodes: whole-slice first fit, then exact-priced
/// split enumeration when a slice no longer fits in one piece. Elastic
/// models never fail placement (slack absorbs overshoot); hard models
/// return `None` when neither fits.
fn seed_attempt(
    network: &PhysicalNetwork,
    map: &VarMap,
    order: &[usize],
    allowed: usize,
) -> Option<SeedState> {
    let mut state = SeedState::new(network, map);
    let hard = map.sigma_vm0.is_none();
    for &pos in order {
        let members: Vec<usize> = (0..map.vms.len())
            .filter(|&g| map.vms[g].slice_pos == pos)
            .collect();
        if members.is_empty() {
            continue;
        }
        let mut total = Resources::new(0.0, 0.0, 0.0);
        for &g in &members {
            total = total.add(&map.vms[g].demand);
        }
        let whole = (0..allowed).find(|&n| {
            state.used[n]
                .add(&total)
                .fits_within(&network.node(NodeId(n)).capacity, 1e-9)
        });
        if let Some(n) = whole {
            let assignment = vec![n; members.len()];
            commit_slice(network, map, &mut state, &members, &assignment)?;
            continue;
        }
        // Split enumeration: price every assignment of the slice's VMs to
        // allowed nodes exactly (capacity, power or slack, and routing with
        // bandwidth residuals) and commit the cheapest.
        let m = members.len();
        if m <= 6 && allowed.pow(m as u32) <= 8192 {
            let mut best: Option<(Vec<usize>, SeedPrice)> = None;
            let mut assignment = vec![0usize; m];
            loop {
                let mut trial = SeedState {
                    hosts: state.hosts.clone(),
                    routes: state.routes.clone(),
                    used: state.used.clone(),
                    link_load: state.link_load.clone(),
                    on: state.on.clone(),
                    price: SeedPrice::ZERO,
                };
                let ok = commit_slice(network, map, &mut trial, &members, &assignment);
                if ok.is_some() {
                    let improves = best
                        .as_ref()
                        .map_or(true, |(_, cur)| trial.price.better_than(cur));
                    if improves {
                        best = Some((assignment.clone(), trial.price));
                    }
                }
                // Next assignment in lexicographic order.
                let mut i = 0;
                loop {
                    if i == m {
                        break;
                    }
                    assignment[i] += 1;
                    if assignment[i] < allowed {
                        break;
                    }
                    assignment[i] = 0;
                    i += 1;
                }
                if i == m {
                    break;
                }
            }
            let (assignment, _) = best?;
            commit_slice(network, map, &mut state, &members, &assignment)?;
        } else {
            // Oversized slice: place VM by VM, first node that fits, else
            // (elastic only) the node with the most compute headroom.
            for &g in &members {
                let demand = map.vms[g].demand;
                let n = (0..allowed).find(|&n| {
                    state.used[n]
                        .add(&demand)
                        .fits_within(&network.node(NodeId(n)).capacity, 1e-9)
                });
                let n = match n {
                    Some(n) => n,
                    None if hard => return None,
                    None => (0..allowed)
                        .min_by(|&a, &b| {
                            let head = |n: usize| {
                                state.used[n].get(ResourceKind::Compute)
                                    - network.node(NodeId(n)).capacity.get(ResourceKind::Compute)
                            };
                            head(a)
                                .partial_cmp(&head(b))
                                .unwrap_or(core::cmp::Ordering::Equal)
                        })
                        .unwrap_or(0),
                };
                let price = node_price(network, map, &state, n, &demand);
                state.price = state.price.add(price);
                state.used[n] = state.used[n].add(&demand);
                state.on[n] = true;
                state.hosts[g] = n;
            }
            if matches!(map.pi_layout, PiLayout::Full { .. }) {
                for (v, e) in map.vls.iter().enumerate() {
                    if e.slice_pos != pos {
                        continue;
                    }
                    let (ha, hb) = (state.hosts[e.a], state.hosts[e.b]);
                    let (b, price) = route_price(network, map, &state.link_load, e, ha, hb)?;
                    state.price = state.price.add(price);
                    let path = &network.paths_between(NodeId(ha), NodeId(hb))[b];
                    for l in &path.links {
                        state.link_load[l.0] += e.rate_kbps;
                    }
                    state.routes[v] = Some((ha, hb, b));
                }
            }
        }
    }
    Some(state)
}

/// Builds a heuristic integral seed for the assembled model: a family of
/// packing orders is tried (plain first fit, each slice deferred to split
/// last, and tight packs onto few nodes for power-driven objectives) and
/// the exact-priced best is returned as a variable vector suitable for
/// [`crate::milp::SolveOptions::incumbent`]. Returns `None` when the model
/// has no placement freedom or no candidate is feasible.
pub fn greedy_incumbent(network: &PhysicalNetwork, map: &VarMap) -> Option<Vec<f64>> {
    if !map.places_vms() {
        return None;
    }
    let nn = map.node_count;
    let slice_count = map.slice_count();
    let base: Vec<usize> = (0..slice_count).collect();

    let mut candidates: Vec<(Vec<usize>, usize)> = Vec::new();
    candidates.push((base.clone(), nn));
    for s in 0..slice_count {
        let mut order: Vec<usize> = base.iter().copied().filter(|&x| x != s).collect();
        order.push(s);
        candidates.push((order, nn));
    }
    // Tight packs: restrict to the first k nodes, down to the capacity
    // floor, so power-minimizing objectives can trade splits for idle draw.
    let mut needed = 1usize;
    for kind in ResourceKind::ALL {
        let demand: f64 = map.vms.iter().map(|e| e.demand.get(kind)).sum();
        let largest = (0..nn)
            .map(|n| network.node(NodeId(n)).capacity.get(kind))
            .fold(0.0f64, f64::max);
        if largest > 0.0 {
            needed = needed.max(ceil_usize(demand / largest));
        }
    }
    for k in needed..nn {
        candidates.push((base.clone(), k));
    }

    let mut best: Option<SeedState> = None;
    for (order, allowed) in &candidates {
        if *allowed == 0 {
            continue;
        }
        if let Some(state) = seed_attempt(network, map, order, *allowed) {
            let improves = best
                .as_ref()
                .map_or(true, |cur| state.price.better_than(&cur.price));
            if improves {
                best = Some(state);
            }
        }
    }
    let state = best?;

    let mut seed = vec![0.0f64; map.num_vars];
    for n in 0..nn {
        if state.on[n] {
            seed[map.gamma(n).unwrap().0] = 1.0;
        }
    }
    for (g, &h) in state.hosts.iter().enumerate() {
        seed[map.xi(g, h).unwrap().0] = 1.0;
        if let Some(id) = map.slice_uses(map.vms[g].slice_pos, h) {
            seed[id.0] = 1.0;
        }
    }
    for (v, e) in map.vls.iter().enumerate() {
        let (ha, hb) = (state.hosts[e.a], state.hosts[e.b]);
        if let Some(id) = map.theta(v, ha, hb) {
            seed[id.0] = 1.0;
        }
    }
    for (v, route) in state.routes.iter().enumerate() {
        if let Some((ha, hb, b)) = route {
            if let Some(id) = map.pi(v, *ha, *hb, *b) {
                seed[id.0] = 1.0;
            }
        }
    }
    Some(seed)
}

/// Power draw of one node: zero when powered off, otherwise affine in
/// compute utilisation between `power_idle_w` (idle) and `power_max_w`
/// (full compute load).
pub fn node_power(node: &CloudNode, compute_utilization: f64, on: bool) -> f64 {
    if !on {
        return 0.0;
    }
    (node.power_max_w - node.power_idle_w) * compute_utilization + node.power_idle_w
}

/// The bandwidth cost `beta` of a placement: for every routed virtual
/// link, its rate times the cost-sum of the chosen path's links.
///
/// Panics if a route references a slice/VL/path that does not exist in
/// `batch`/`network` — placements must be decoded against the same inputs.
pub fn bandwidth_cost(
    network: &PhysicalNetwork,
    batch: &RequestBatch,
    placement: &Placement,
) -> f64 {
    let mut beta = 0.0;
    for route in &placement.routes {
        let slice = batch
            .slice(route.slice)
            .expect("route references a slice absent from the batch");
        let vl = &slice.vls[route.vl];
        let path =
            &network.paths_between(NodeId(route.from_node), NodeId(route.to_node))[route.ordinal];
        beta += vl.rate_kbps * path_cost(network, path);
    }
    beta
}

const DECODE_TOL: f64 = 1e-6;

fn binary_value(
    solution: &MilpSolution,
    id: VarId,
    tag: &'static str,
    what: &str,
) -> Result<bool, InvariantViolation> {
    let x = solution.value(id);
    let nearest = if x < 0.5 { 0.0 } else { 1.0 };
    if (x - nearest).abs() > DECODE_TOL {
        return Err(violation(
            tag,
            format!("{what} has non-binary value {x}"),
        ));
    }
    Ok(nearest == 1.0)
}

/// Validates a solver assignment against every constraint family and prices
/// it.
///
/// All constraints are checked in their hard form — elastic models decode
/// cleanly only when every slack is (numerically) zero. The recomputed cost
/// is cross-checked against the solver's objective for cost-type models.
pub fn decode_and_cost(
    network: &PhysicalNetwork,
    weights: &CostWeights,
    map: &VarMap,
    solution: &MilpSolution,
) -> Result<(Placement, CostReport), InvariantViolation> {
    if !solution.has_assignment() {
        return Err(violation(
            "SOLUTION",
            format!("status {:?} carries no assignment", solution.status),
        ));
    }
    let nn = map.node_count;

    // Placement bits: from the solution, or from the frozen placement.
    let (hosts, on) = if map.has_nodes {
        let mut on = vec![false; nn];
        for n in 0..nn {
            on[n] = binary_value(solution, map.gamma(n).unwrap(), "C9", &format!("gamma[n{n}]"))?;
        }
        let mut hosts = Vec::with_capacity(map.vms.len());
        for (g, e) in map.vms.iter().enumerate() {
            let mut host = None;
            let mut count = 0usize;
            for n in 0..nn {
                if binary_value(
                    solution,
                    map.xi(g, n).unwrap(),
                    "C8",
                    &format!("xi[{}@n{n}]", vm_label(e)),
                )? {
                    host = Some(n);
                    count += 1;
                }
            }
            if count != 1 {
                return Err(violation(
                    "C2",
                    format!("VM {} is assigned to {count} nodes", vm_label(e)),
                ));
            }
            hosts.push(host.unwrap());
        }
        (hosts, on)
    } else {
        (
            map.fixed_hosts.clone().unwrap(),
            map.fixed_on.clone().unwrap(),
        )
    };

    // C3: hosting nodes are powered on.
    for (g, e) in map.vms.iter().enumerate() {
        if !on[hosts[g]] {
            return Err(violation(
                "C3",
                format!("VM {} runs on powered-off node n{}", vm_label(e), hosts[g]),
            ));
        }
    }

    // C1: capacity per node and resource.
    for n in 0..nn {
        let node = network.node(NodeId(n));
        for kind in ResourceKind::ALL {
            let used: f64 = map
                .vms
                .iter()
                .enumerate()
                .filter(|(g, _)| hosts[*g] == n)
                .map(|(_, e)| e.demand.get(kind))
                .sum();
            let cap = node.capacity.get(kind);
            if used > cap + DECODE_TOL * cap.max(1.0) {
                return Err(violation(
                    "C1",
                    format!(
                        "node n{n} {} load {used} exceeds capacity {cap}",
                        kind.label()
                    ),
                ));
            }
        }
    }

    // C4/C5/C10: exactly one route per VL, consistent with the hosts.
    let mut routes = Vec::with_capacity(map.vls.len());
    for (v, e) in map.vls.iter().enumerate() {
        let mut chosen = None;
        let mut count = 0usize;
        for (n, np, b, id) in map.pi_vars_of_vl(v) {
            if binary_value(
                solution,
                id,
                "C10",
                &format!("pi[{}:n{n}-n{np}#{b}]", vl_label(e)),
            )? {
                chosen = Some((n, np, b));
                count += 1;
            }
        }
        if count != 1 {
            return Err(violation(
                "C4",
                format!("virtual link {} has {count} active routes", vl_label(e)),
            ));
        }
        let (n, np, b) = chosen.unwrap();
        let (ha, hb) = (hosts[e.a], hosts[e.b]);
        if (n, np) != (ha, hb) {
            return Err(violation(
                "C5",
                format!(
                    "virtual link {} is routed over pair (n{n},n{np}) but its endpoints sit on (n{ha},n{hb})",
                    vl_label(e)
                ),
            ));
        }
        routes.push(VlRoute {
            slice: e.slice,
            vl: e.vl,
            from_node: n,
            to_node: np,
            ordinal: b,
        });
    }

    // C5 coupling bits match the placement exactly.
    if map.has_theta {
        for (v, e) in map.vls.iter().enumerate() {
            let (ha, hb) = (hosts[e.a], hosts[e.b]);
            for n in 0..nn {
                for np in 0..nn {
                    let got = binary_value(
                        solution,
                        map.theta(v, n, np).unwrap(),
                        "C5",
                        &format!("theta[{}:n{n}-n{np}]", vl_label(e)),
                    )?;
                    let want = n == ha && np == hb;
                    if got != want {
                        return Err(violation(
                            "C5",
                            format!(
                                "theta[{}:n{n}-n{np}] is {} but the endpoints sit on (n{ha},n{hb})",
                                vl_label(e),
                                got as u8
                            ),
                        ));
                    }
                }
            }
        }
    }

    // C6: link bandwidth.
    let mut load = vec![0.0f64; network.link_count()];
    for (route, e) in routes.iter().zip(map.vls.iter()) {
        let path = &network.paths_between(NodeId(route.from_node), NodeId(route.to_node))
            [route.ordinal];
        for &l in &path.links {
            load[l.0] += e.rate_kbps;
        }
    }
    for l in 0..network.link_count() {
        let bw = network.link(LinkId(l)).bandwidth_kbps;
        if load[l] > bw + DECODE_TOL * bw.max(1.0) {
            return Err(violation(
                "C6",
                format!("link l{l} carries {} of {bw} kbps", load[l]),
            ));
        }
    }

    // C7: per-VL delay bound.
    for (route, e) in routes.iter().zip(map.vls.iter()) {
        let path = &network.paths_between(NodeId(route.from_node), NodeId(route.to_node))
            [route.ordinal];
        let delay = path_delay(network, path);
        if delay > e.max_delay_ms + DECODE_TOL {
            return Err(violation(
                "C7",
                format!(
                    "virtual link {} rides a {delay} ms path against a {} ms bound",
                    vl_label(e),
                    e.max_delay_ms
                ),
            ));
        }
    }

    // Elastic slacks, if present, must be zero for a clean decode.
    for n in 0..nn {
        for kind in ResourceKind::ALL {
            if let Some(id) = map.sigma_vm(n, kind) {
                let s = solution.value(id);
                if s > DECODE_TOL {
                    return Err(violation(
                        "C1-a",
                        format!("node n{n} {} slack is {s}", kind.label()),
                    ));
                }
            }
        }
    }
    for l in 0..map.link_count {
        if let Some(id) = map.sigma_bw(l) {
            let s = solution.value(id);
            if s > DECODE_TOL {
                return Err(violation("C6-a", format!("link l{l} slack is {s}")));
            }
        }
    }
    for pos in 0..map.slice_count() {
        if let Some(id) = map.sigma_tau(pos) {
            let s = solution.value(id);
            if s > DECODE_TOL {
                let sid = map.slice_ids[pos];
                return Err(violation(
                    "C7-a",
                    format!("slice ({},{}) delay slack is {s}", sid.tenant, sid.slice),
                ));
            }
        }
    }

    // Assemble the placement.
    let assignments: Vec<VmAssignment> = map
        .vms
        .iter()
        .enumerate()
        .map(|(g, e)| VmAssignment {
            slice: e.slice,
            vm: e.vm,
            node: hosts[g],
        })
        .collect();
    let nodes_on: Vec<usize> = (0..nn).filter(|&n| on[n]).collect();
    let couplings: Vec<CouplingBit> = map
        .vls
        .iter()
        .map(|e| CouplingBit {
            slice: e.slice,
            vl: e.vl,
            from_node: hosts[e.a],
            to_node: hosts[e.b],
        })
        .collect();
    let placement = Placement {
        assignments,
        nodes_on,
        routes,
        couplings,
    };

    // Price it.
    let mut node_power_w = vec![0.0f64; nn];
    let mut node_utilization = vec![0.0f64; nn];
    for n in 0..nn {
        let node = network.node(NodeId(n));
        let cap = node.capacity.get(ResourceKind::Compute);
        let used: f64 = map
            .vms
            .iter()
            .enumerate()
            .filter(|(g, _)| hosts[*g] == n)
            .map(|(_, e)| e.demand.get(ResourceKind::Compute))
            .sum();
        node_utilization[n] = if cap > 0.0 { used / cap } else { 0.0 };
        node_power_w[n] = node_power(node, node_utilization[n], on[n]);
    }
    let total_power_w: f64 = node_power_w.iter().sum();
    let mut beta = 0.0;
    for (route, e) in placement.routes.iter().zip(map.vls.iter()) {
        let path = &network.paths_between(NodeId(route.from_node), NodeId(route.to_node))
            [route.ordinal];
        beta += e.rate_kbps * path_cost(network, path);
    }
    let total = weights.zeta * beta + weights.upsilon * total_power_w;
    let report = CostReport {
        total,
        beta,
        node_power_w,
        total_power_w,
        node_utilization,
    };

    // Double-entry check against the solver's own objective.
    let expected = match map.objective {
        ModelObjective::CostTotal => Some(report.total),
        ModelObjective::PowerOnly => Some(weights.upsilon * report.total_power_w),
        ModelObjective::SlackSum => None,
    };
    if let Some(expected) = expected {
        let diff = (expected - solution.objective).abs();
        if diff > DECODE_TOL * expected.abs().max(1.0) {
            return Err(violation(
                "OBJ",
                format!(
                    "recomputed cost {expected} disagrees with the solver objective {}",
                    solution.objective
                ),
            ));
        }
    }

    Ok((placement, report))
}

/// Exhaustive reference optimum of the joint problem, for cross-checking
/// the solver on tiny instances.
///
/// Enumerates every VM-to-node assignment and, per assignment, every
/// combination of candidate paths, keeping the cheapest feasible total
/// cost. Exponential in VMs and virtual links — intended for instances of
/// a few VMs on a few nodes only. Returns `None` when no feasible
/// allocation exists.
pub fn brute_force_optimum(
    network: &PhysicalNetwork,
    batch: &RequestBatch,
    weights: &CostWeights,
) -> Option<f64> {
    let (vms, vls, _) = flatten_batch(batch);
    let nn = network.node_count();
    let gcount = vms.len();
    let mut best: Option<f64> = None;

    let mut hosts = vec![0usize; gcount];
    loop {
        // C1 per node, power of the induced gamma.
        let mut feasible = true;
        let mut power = 0.0;
        for n in 0..nn {
            let node = network.node(NodeId(n));
            let mut used = Resources::new(0.0, 0.0, 0.0);
            let mut any = false;
            for (g, e) in vms.iter().enumerate() {
                if hosts[g] == n {
                    used = used.add(&e.demand);
                    any = true;
                }
            }
            if !used.fits_within(&node.capacity, 1e-9) {
                feasible = false;
                break;
            }
            let cap = node.capacity.get(ResourceKind::Compute);
            let util = if cap > 0.0 {
                used.get(ResourceKind::Compute) / cap
            } else {
                0.0
            };
            power += node_power(node, util, any);
        }

        if feasible {
            // Candidate paths per VL: the hosting pair's paths within the
            // delay bound.
            let cands: Vec<Vec<&PhysicalPath>> = vls
                .iter()
                .map(|e| {
                    network
                        .paths_between(NodeId(hosts[e.a]), NodeId(hosts[e.b]))
                        .iter()
                        .filter(|p| path_delay(network, p) <= e.max_delay_ms + 1e-9)
                        .collect()
                })
                .collect();
            if cands.iter().all(|c| !c.is_empty()) {
                // Enumerate path combinations under the bandwidth caps.
                let mut choice = vec![0usize; vls.len()];
                'combos: loop {
                    let mut load = vec![0.0f64; network.link_count()];
                    let mut beta = 0.0;
                    let mut ok = true;
                    for (v, e) in vls.iter().enumerate() {
                        let path = cands[v][choice[v]];
                        for &l in &path.links {
                            load[l.0] += e.rate_kbps;
                        }
                        beta += e.rate_kbps * path_cost(network, path);
                    }
                    for l in 0..network.link_count() {
                        let bw = network.link(LinkId(l)).bandwidth_kbps;
                        if load[l] > bw + 1e-9 * bw.max(1.0) {
                            ok = false;
                            break;
                        }
                    }
                    if ok {
                        let total = weights.zeta * beta + weights.upsilon * power;
                        if best.map_or(true, |b| total < b) {
                            best = Some(total);
                        }
                    }
                    // Next combination.
                    let mut v = 0;
                    loop {
                        if v == vls.len() {
                            break 'combos;
                        }
                        choice[v] += 1;
                        if choice[v] < cands[v].len() {
                            break;
                        }
                        choice[v] = 0;
                        v += 1;
                    }
                    if vls.is_empty() {
                        break;
                    }
                }
            }
        }

        // Next assignment.
        let mut g = 0;
        loop {
            if g == gcount {
                return best;
            }
            hosts[g] += 1;
            if hosts[g] < nn {
                break;
            }
            hosts[g] = 0;
            g += 1;
        }
        if gcount == 0 {
            return best;
        }
    }
}
