//! Physical network model: cloud nodes, links and enumerated routing paths.
//!
//! A network is assembled from nodes and links via [`enumerate_paths`], which
//! validates the input and precomputes every candidate routing path: all
//! simple inter-node paths with at most `max_hops` links for every ordered
//! node pair, plus exactly one intra-node path per node (the node's
//! self-loop link). Placement models index paths by `(source, target,
//! ordinal)`, so path order is fixed: depth-first discovery with neighbors
//! visited in ascending node order.
//!
//! [`generate_random_topology`] draws the experiment topologies: an
//! Erdős–Rényi graph resampled until connected, with link parameters drawn
//! uniformly from configurable ranges.

use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

/// Index of a cloud node. Nodes are numbered `0..node_count`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(transparent))]
pub struct NodeId(pub usize);

/// Index of a physical link. Links are numbered `0..link_count`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(transparent))]
pub struct LinkId(pub usize);

impl core::fmt::Display for NodeId {
    fn fmt(&self, f: &mut core::fmt::Formatter<'_>) -> core::fmt::Result {
        write!(f, "{}", self.0)
    }
}

impl core::fmt::Display for LinkId {
    fn fmt(&self, f: &mut core::fmt::Formatter<'_>) -> core::fmt::Result {
        write!(f, "{}", self.0)
    }
}

/// A compute/memory/storage triple, used both for node capacities and VM
/// demands. Units follow the experiment tables: MHz, GB, GB.
#[derive(Clone, Copy, Debug, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct Resources {
    pub compute_mhz: f64,
    pub memory_gb: f64,
    pub storage_gb: f64,
}

impl Resources {
    pub const ZERO: Resources = Resources {
        compute_mhz: 0.0,
        memory_gb: 0.0,
        storage_gb: 0.0,
    };

    pub fn new(compute_mhz: f64, memory_gb: f64, storage_gb: f64) -> Self {
        Resources {
            compute_mhz,
            memory_gb,
            storage_gb,
        }
    }

    pub fn get(&self, kind: ResourceKind) -> f64 {
        match kind {
            ResourceKind::Compute => self.compute_mhz,
            ResourceKind::Memory => self.memory_gb,
            ResourceKind::Storage => self.storage_gb,
        }
    }

    pub fn add(&self, other: &Resources) -> Resources {
        Resources {
            compute_mhz: self.compute_mhz + other.compute_mhz,
            memory_gb: self.memory_gb + other.memory_gb,
            storage_gb: self.storage_gb + other.storage_gb,
        }
    }

    /// Componentwise `self <= other + tol`.
    pub fn fits_within(&self, other: &Resources, tol: f64) -> bool {
        ResourceKind::ALL
            .iter()
            .all(|&k| self.get(k) <= other.get(k) + tol)
    }

    pub fn is_strictly_positive(&self) -> bool {
        ResourceKind::ALL.iter().all(|&k| self.get(k) > 0.0)
    }

    pub fn is_non_negative(&self) -> bool {
        ResourceKind::ALL.iter().all(|&k| self.get(k) >= 0.0)
    }
}

/// One of the three node resource dimensions.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub enum ResourceKind {
    Compute,
    Memory,
    Storage,
}

impl ResourceKind {
    /// All kinds, in the order admission control inspects them.
    pub const ALL: [ResourceKind; 3] = [
        ResourceKind::Compute,
        ResourceKind::Memory,
        ResourceKind::Storage,
    ];

    pub fn label(&self) -> &'static str {
        match self {
            ResourceKind::Compute => "compute",
            ResourceKind::Memory => "memory",
            ResourceKind::Storage => "storage",
        }
    }
}

/// A cloud node with its capacity vector and power envelope.
///
/// Power draw is affine in compute utilization: `p_idle_w` when powered on
/// and idle, `p_max_w` at full compute load, zero when powered off.
#[derive(Clone, Debug, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct CloudNode {
    pub id: NodeId,
    pub capacity: Resources,
    pub power_idle_w: f64,
    pub power_max_w: f64,
}

/// Whether a link connects a node to itself (intra) or two nodes (inter).
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub enum LinkKind {
    Intra,
    Inter,
}

/// A physical link. Every node carries exactly one intra link (`u == v`)
/// modeling its internal switching fabric; inter links are undirected and
/// at most one may exist per node pair.
#[derive(Clone, Debug, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct PhysicalLink {
    pub id: LinkId,
    pub u: NodeId,
    pub v: NodeId,
    pub bandwidth_kbps: f64,
    pub delay_ms: f64,
    /// Transport cost per unit of rate routed over this link.
    pub unit_cost: f64,
    pub kind: LinkKind,
}

impl PhysicalLink {
    pub fn is_intra(&self) -> bool {
        self.u == self.v
    }

    /// The endpoint opposite to `n`, for inter links.
    pub fn other(&self, n: NodeId) -> NodeId {
        if self.u == n {
            self.v
        } else {
            self.u
        }
    }
}

/// A candidate routing path between an ordered node pair.
///
/// Inter paths are simple (no repeated node) and consist of inter links
/// only; the single intra path of a node consists of its intra link. Paths
/// between a pair are identified by `ordinal`, their index in discovery
/// order.
#[derive(Clone, Debug, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct PhysicalPath {
    pub source: NodeId,
    pub target: NodeId,
    pub ordinal: usize,
    pub links: Vec<LinkId>,
    /// Link-membership indicator, indexed by `LinkId`: `membership[l]` is
    /// true exactly when link `l` lies on this path.
    pub membership: Vec<bool>,
}

impl PhysicalPath {
    pub fn uses(&self, link: LinkId) -> bool {
        self.membership.get(link.0).copied().unwrap_or(false)
    }

    pub fn hop_count(&self) -> usize {
        self.links.len()
    }
}

/// Validation and assembly failures for physical networks.
#[derive(Clone, Debug, PartialEq, thiserror::Error)]
pub enum TopologyError {
    #[error("network must contain at least one node")]
    EmptyNetwork,
    #[error("node ids must be sequential from zero (found {found} at position {position})")]
    NonSequentialNodeId { position: usize, found: usize },
    #[error("link ids must be sequential from zero (found {found} at position {position})")]
    NonSequentialLinkId { position: usize, found: usize },
    #[error("node {node} has a non-positive capacity component")]
    NonPositiveCapacity { node: NodeId },
    #[error("node {node} has an invalid power envelope (need 0 <= idle <= max)")]
    InvalidPowerEnvelope { node: NodeId },
    #[error("link {link} references a node that does not exist")]
    UnknownEndpoint { link: LinkId },
    #[error("link {link} kind is inconsistent with its endpoints")]
    InconsistentLinkKind { link: LinkId },
    #[error("link {link} must have positive bandwidth")]
    NonPositiveBandwidth { link: LinkId },
    #[error("link {link} must have non-negative delay")]
    NegativeDelay { link: LinkId },
    #[error("link {link} must have non-negative unit cost")]
    NegativeUnitCost { link: LinkId },
    #[error("node {node} has no intra link")]
    MissingIntraLink { node: NodeId },
    #[error("node {node} has more than one intra link")]
    DuplicateIntraLink { node: NodeId },
    #[error("nodes {u} and {v} are joined by more than one inter link")]
    DuplicateInterLink { u: NodeId, v: NodeId },
    #[error("the inter-link graph is not connected")]
    DisconnectedGraph,
    #[error("no path from {from} to {to} within the hop budget")]
    NoPathWithinHops { from: NodeId, to: NodeId },
    #[error("max_hops must be at least 1")]
    ZeroMaxHops,
    #[error("edge probability must lie in (0, 1]")]
    InvalidEdgeProbability,
    #[error("random topology generation exhausted its retry budget without a connected graph")]
    RetriesExhausted,
}

/// A validated physical network with its enumerated routing paths.
#[derive(Clone, Debug, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct PhysicalNetwork {
    nodes: Vec<CloudNode>,
    links: Vec<PhysicalLink>,
    /// All paths, sorted by `(source, target, ordinal)`.
    paths: Vec<PhysicalPath>,
    /// `pair_ranges[u * n + v]` is the `paths` range for ordered pair `(u, v)`.
    pair_ranges: Vec<(usize, usize)>,
    max_hops: usize,
}

impl PhysicalNetwork {
    pub fn node_count(&self) -> usize {
        self.nodes.len()
    }

    pub fn link_count(&self) -> usize {
        self.links.len()
    }

    pub fn nodes(&self) -> &[CloudNode] {
        &self.nodes
    }

    pub fn links(&self) -> &[PhysicalLink] {
        &self.links
    }

    pub fn node(&self, id: NodeId) -> &CloudNode {
        &self.nodes[id.0]
    }

    pub fn link(&self, id: LinkId) -> &PhysicalLink {
        &self.links[id.0]
    }

    /// The intra link of `n`.
    pub fn intra_link(&self, n: NodeId) -> &PhysicalLink {
        self.links
            .iter()
            .find(|l| l.is_intra() && l.u == n)
            .expect("validated network has an intra link per node")
    }

    pub fn max_hops(&self) -> usize {
        self.max_hops
    }

    /// Every enumerated path, sorted by `(source, target, ordinal)`.
    pub fn all_paths(&self) -> &[PhysicalPath] {
        &self.paths
    }

    /// Candidate paths for the ordered pair `(from, to)`; `from == to`
    /// yields exactly the intra path.
    pub fn paths_between(&self, from: NodeId, to: NodeId) -> &[PhysicalPath] {
        let (lo, hi) = self.pair_ranges[from.0 * self.nodes.len() + to.0];
        &self.paths[lo..hi]
    }

    /// Path lookup by its model identity.
    pub fn path(&self, from: NodeId, to: NodeId, ordinal: usize) -> Option<&PhysicalPath> {
        self.paths_between(from, to).get(ordinal)
    }

    /// Global index of a path in `all_paths()` order.
    pub fn path_index(&self, from: NodeId, to: NodeId, ordinal: usize) -> usize {
        let (lo, _) = self.pair_ranges[from.0 * self.nodes.len() + to.0];
        lo + ordinal
    }
}

/// Sum of link delays along `path`.
pub fn path_delay(network: &PhysicalNetwork, path: &PhysicalPath) -> f64 {
    path.links
        .iter()
        .map(|&l| network.link(l).delay_ms)
        .sum()
}

fn validate(nodes: &[CloudNode], links: &[PhysicalLink]) -> Result<(), TopologyError> {
    if nodes.is_empty() {
        return Err(TopologyError::EmptyNetwork);
    }
    for (i, node) in nodes.iter().enumerate() {
        if node.id.0 != i {
            return Err(TopologyError::NonSequentialNodeId {
                position: i,
                found: node.id.0,
            });
        }
        if !node.capacity.is_strictly_positive() {
            return Err(TopologyError::NonPositiveCapacity { node: node.id });
        }
        if !(node.power_idle_w >= 0.0 && node.power_idle_w <= node.power_max_w) {
            return Err(TopologyError::InvalidPowerEnvelope { node: node.id });
        }
    }
    let n = nodes.len();
    let mut intra_seen = vec![false; n];
    let mut inter_seen = vec![false; n * n];
    for (i, link) in links.iter().enumerate() {
        if link.id.0 != i {
            return Err(TopologyError::NonSequentialLinkId {
                position: i,
                found: link.id.0,
            });
        }
        if link.u.0 >= n || link.v.0 >= n {
            return Err(TopologyError::UnknownEndpoint { link: link.id });
        }
        let expected = if link.is_intra() {
            LinkKind::Intra
        } else {
            LinkKind::Inter
        };
        if link.kind != expected {
            return Err(TopologyError::InconsistentLinkKind { link: link.id });
        }
        if !(link.bandwidth_kbps > 0.0) {
            return Err(TopologyError::NonPositiveBandwidth { link: link.id });
        }
        if !(link.delay_ms >= 0.0) {
            return Err(TopologyError::NegativeDelay { link: link.id });
        }
        if !(link.unit_cost >= 0.0) {
            return Err(TopologyError::NegativeUnitCost { link: link.id });
        }
        if link.is_intra() {
            if intra_seen[link.u.0] {
                return Err(TopologyError::DuplicateIntraLink { node: link.u });
            }
            intra_seen[link.u.0] = true;
        } else {
            let (a, b) = (link.u.0.min(link.v.0), link.u.0.max(link.v.0));
            if inter_seen[a * n + b] {
                return Err(TopologyError::DuplicateInterLink {
                    u: NodeId(a),
                    v: NodeId(b),
                });
            }
            inter_seen[a * n + b] = true;
        }
    }
    if let Some(node) = intra_seen.iter().position(|&s| !s) {
        return Err(TopologyError::MissingIntraLink { node: NodeId(node) });
    }

    // Connectivity over inter links (trivial for a single node).
    let mut reach = vec![false; n];
    let mut stack = vec![0usize];
    reach[0] = true;
    while let Some(u) = stack.pop() {
        for link in links.iter().filter(|l| !l.is_intra()) {
            for (a, b) in [(link.u.0, link.v.0), (link.v.0, link.u.0)] {
                if a == u && !reach[b] {
                    reach[b] = true;
                    stack.push(b);
                }
            }
        }
    }
    if reach.iter().any(|&r| !r) {
        return Err(TopologyError::DisconnectedGraph);
    }
    Ok(())
}

/// Validates `nodes`/`links` and assembles the network with every candidate
/// path enumerated.
///
/// For each ordered pair of distinct nodes this finds all simple paths over
/// inter links with at most `max_hops` links, in depth-first order visiting
/// neighbors by ascending node id; for each node it adds the one intra path
/// over the node's intra link. Fails if any ordered pair would end up with
/// no path, since placement models require at least one candidate.
pub fn enumerate_paths(
    nodes: Vec<CloudNode>,
    links: Vec<PhysicalLink>,
    max_hops: usize,
) -> Result<PhysicalNetwork, TopologyError> {
    if max_hops == 0 {
        return Err(TopologyError::ZeroMaxHops);
    }
    validate(&nodes, &links)?;

    let n = nodes.len();
    let link_count = links.len();

    // Adjacency over inter links, neighbors ascending.
    let mut adjacency: Vec<Vec<(NodeId, LinkId)>> = vec![Vec::new(); n];
    for link in links.iter().filter(|l| !l.is_intra()) {
        adjacency[link.u.0].push((link.v, link.id));
        adjacency[link.v.0].push((link.u, link.id));
    }
    for list in &mut adjacency {
        list.sort_by_key(|(node, _)| node.0);
    }

    let mut paths = Vec::new();
    let mut pair_ranges = vec![(0usize, 0usize); n * n];

    for from in 0..n {
        for to in 0..n {
            let lo = paths.len();
            if from == to {
                let intra = links
                    .iter()
                    .find(|l| l.is_intra() && l.u.0 == from)
                    .expect("validated");
                let mut membership = vec![false; link_count];
                membership[intra.id.0] = true;
                paths.push(PhysicalPath {
                    source: NodeId(from),
                    target: NodeId(to),
                    ordinal: 0,
                    links: vec![intra.id],
                    membership,
                });
            } else {
                let mut visited = vec![false; n];
                visited[from] = true;
                let mut trail: Vec<LinkId> = Vec::new();
                dfs_paths(
                    from,
                    to,
                    max_hops,
                    &adjacency,
                    &mut visited,
                    &mut trail,
                    &mut |trail| {
                        let mut membership = vec![false; link_count];
                        for l in trail {
                            membership[l.0] = true;
                        }
                        paths.push(PhysicalPath {
                            source: NodeId(from),
                            target: NodeId(to),
                            ordinal: 0, // fixed below
                            links: trail.to_vec(),
                            membership,
                        });
                    },
                );
                if paths.len() == lo {
                    return Err(TopologyError::NoPathWithinHops {
                        from: NodeId(from),
                        to: NodeId(to),
                    });
                }
            }
            for (ordinal, path) in paths[lo..].iter_mut().enumerate() {
                path.ordinal = ordinal;
            }
            pair_ranges[from * n + to] = (lo, paths.len());
        }
    }

    Ok(PhysicalNetwork {
        nodes,
        links,
        paths,
        pair_ranges,
        max_hops,
    })
}

fn dfs_paths(
    at: usize,
    to: usize,
    hops_left: usize,
    adjacency: &[Vec<(NodeId, LinkId)>],
    visited: &mut [bool],
    trail: &mut Vec<LinkId>,
    emit: &mut impl FnMut(&[LinkId]),
) {
    if hops_left == 0 {
        return;
    }
    for &(next, link) in &adjacency[at] {
        if next.0 == to {
            trail.push(link);
            emit(trail);
            trail.pop();
        } else if !visited[next.0] {
            visited[next.0] = true;
            trail.push(link);
            dfs_paths(next.0, to, hops_left - 1, adjacency, visited, trail, emit);
            trail.pop();
            visited[next.0] = false;
        }
    }
}

/// Parameters for [`generate_random_topology`]. Defaults reproduce the
/// experiment setup: identical nodes, Erdős–Rényi inter links with p = 0.6,
/// and uniformly drawn link attributes.
#[derive(Clone, Debug, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(default))]
pub struct TopologyParams {
    pub edge_probability: f64,
    /// Inter-link bandwidth range, Kbps.
    pub inter_bandwidth_kbps: (f64, f64),
    /// Inter-link delay range, ms.
    pub inter_delay_ms: (f64, f64),
    /// Inter-link unit cost is `factor * bandwidth` with the factor drawn
    /// from this range.
    pub inter_cost_factor: (f64, f64),
    pub intra_bandwidth_kbps: f64,
    pub intra_delay_ms: f64,
    pub intra_unit_cost: f64,
    pub node_capacity: Resources,
    pub power_idle_w: f64,
    pub power_max_w: f64,
    pub max_hops: usize,
}

impl Default for TopologyParams {
    fn default() -> Self {
        TopologyParams {
            edge_probability: 0.6,
            inter_bandwidth_kbps: (9e4, 1.9e5),
            inter_delay_ms: (0.1, 4.0),
            inter_cost_factor: (1e-3, 1e-2),
            intra_bandwidth_kbps: 1e7,
            intra_delay_ms: 0.0,
            intra_unit_cost: 1.0,
            node_capacity: Resources::new(7000.0, 800.0, 2000.0),
            power_idle_w: 100.0,
            power_max_w: 200.0,
            max_hops: 4,
        }
    }
}

const CONNECTIVITY_RETRY_BUDGET: usize = 100_000;

/// Draws a random connected topology.
///
/// The adjacency is Erdős–Rényi over unordered pairs in lexicographic
/// order, resampled from scratch until the graph is connected. Links are
/// then materialized — intra links first (one per node, ascending), then
/// inter links in lexicographic pair order, drawing bandwidth, delay and
/// cost factor in that order — and paths are enumerated. The exact draw
/// order is part of the determinism contract: one `(node_count, seed,
/// params)` triple always yields the same network.
pub fn generate_random_topology(
    node_count: usize,
    seed: u64,
    params: &TopologyParams,
) -> Result<PhysicalNetwork, TopologyError> {
    if node_count == 0 {
        return Err(TopologyError::EmptyNetwork);
    }
    if node_count > 1
        && !(params.edge_probability > 0.0 && params.edge_probability <= 1.0)
    {
        return Err(TopologyError::InvalidEdgeProbability);
    }

    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let pair_count = node_count * (node_count - 1) / 2;
    let mut edges: Vec<(usize, usize)> = Vec::with_capacity(pair_count);
    let mut attempts = 0;
    loop {
        edges.clear();
        for u in 0..node_count {
            for v in (u + 1)..node_count {
                if rng.random_bool(params.edge_probability) {
                    edges.push((u, v));
                }
            }
        }
        if connected(node_count, &edges) {
            break;
        }
        attempts += 1;
        if attempts >= CONNECTIVITY_RETRY_BUDGET {
            return Err(TopologyError::RetriesExhausted);
        }
    }

    let nodes: Vec<CloudNode> = (0..node_count)
        .map(|i| CloudNode {
            id: NodeId(i),
            capacity: params.node_capacity,
            power_idle_w: params.power_idle_w,
            power_max_w: params.power_max_w,
        })
        .collect();

    let mut links: Vec<PhysicalLink> = Vec::with_capacity(node_count + edges.len());
    for i in 0..node_count {
        links.push(PhysicalLink {
            id: LinkId(links.len()),
            u: NodeId(i),
            v: NodeId(i),
            bandwidth_kbps: params.intra_bandwidth_kbps,
            delay_ms: params.intra_delay_ms,
            unit_cost: params.intra_unit_cost,
            kind: LinkKind::Intra,
        });
    }
    for &(u, v) in &edges {
        let bandwidth = draw_range(&mut rng, params.inter_bandwidth_kbps);
        let delay = draw_range(&mut rng, params.inter_delay_ms);
        let factor = draw_range(&mut rng, params.inter_cost_factor);
        links.push(PhysicalLink {
            id: LinkId(links.len()),
            u: NodeId(u),
            v: NodeId(v),
            bandwidth_kbps: bandwidth,
            delay_ms: delay,
            unit_cost: factor * bandwidth,
            kind: LinkKind::Inter,
        });
    }

    enumerate_paths(nodes, links, params.max_hops)
}

fn draw_range(rng: &mut ChaCha8Rng, (lo, hi): (f64, f64)) -> f64 {
    if lo == hi {
        lo
    } else {
        rng.random_range(lo..hi)
    }
}

fn connected(node_count: usize, edges: &[(usize, usize)]) -> bool {
    if node_count <= 1 {
        return true;
    }
    let mut reach = vec![false; node_count];
    let mut stack = vec![0usize];
    reach[0] = true;
    let mut seen = 1;
    while let Some(u) = stack.pop() {
        for &(a, b) in edges {
            let next = if a == u {
                b
            } else if b == u {
                a
            } else {
                continue;
            };
            if !reach[next] {
                reach[next] = true;
                seen += 1;
                stack.push(next);
            }
        }
    }
    seen == node_count
}

/// Convenience description of a path for error messages and dumps.
pub fn describe_path(network: &PhysicalNetwork, path: &PhysicalPath) -> String {
    use core::fmt::Write;
    let mut out = String::new();
    let _ = write!(out, "{}->{}#{}", path.source, path.target, path.ordinal);
    let _ = write!(out, " [");
    for (i, l) in path.links.iter().enumerate() {
        let link = network.link(*l);
        if i > 0 {
            let _ = write!(out, ",");
        }
        let _ = write!(out, "{}-{}", link.u, link.v);
    }
    let _ = write!(out, "]");
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    pub(crate) fn test_node(i: usize) -> CloudNode {
        CloudNode {
            id: NodeId(i),
            capacity: Resources::new(7000.0, 800.0, 2000.0),
            power_idle_w: 100.0,
            power_max_w: 200.0,
        }
    }

    pub(crate) fn intra(id: usize, n: usize) -> PhysicalLink {
        PhysicalLink {
            id: LinkId(id),
            u: NodeId(n),
            v: NodeId(n),
            bandwidth_kbps: 1e7,
            delay_ms: 0.0,
            unit_cost: 1.0,
            kind: LinkKind::Intra,
        }
    }

    pub(crate) fn inter(id: usize, u: usize, v: usize, delay: f64) -> PhysicalLink {
        PhysicalLink {
            id: LinkId(id),
            u: NodeId(u),
            v: NodeId(v),
            bandwidth_kbps: 1e5,
            delay_ms: delay,
            unit_cost: 100.0,
            kind: LinkKind::Inter,
        }
    }

    /// Complete graph on `n` nodes with uniform link attributes.
    pub(crate) fn complete(n: usize, max_hops: usize) -> PhysicalNetwork {
        let nodes = (0..n).map(test_node).collect();
        let mut links: Vec<PhysicalLink> = (0..n).map(|i| intra(i, i)).collect();
        for u in 0..n {
            for v in (u + 1)..n {
                links.push(inter(links.len(), u, v, 1.0));
            }
        }
        enumerate_paths(nodes, links, max_hops).unwrap()
    }

    #[test]
    fn complete_triangle_has_direct_and_detour_paths() {
        let net = complete(3, 2);
        let paths = net.paths_between(NodeId(0), NodeId(2));
        assert_eq!(paths.len(), 2);
        // Discovery order: neighbor 1 first (detour), then neighbor 2 (direct).
        assert_eq!(paths[0].hop_count(), 2);
        assert_eq!(paths[1].hop_count(), 1);
        assert_eq!(paths[0].ordinal, 0);
        assert_eq!(paths[1].ordinal, 1);
    }

    #[test]
    fn intra_pair_has_exactly_one_single_link_path() {
        let net = complete(3, 2);
        for n in 0..3 {
            let paths = net.paths_between(NodeId(n), NodeId(n));
            assert_eq!(paths.len(), 1);
            assert_eq!(paths[0].links.len(), 1);
            let link = net.link(paths[0].links[0]);
            assert!(link.is_intra());
            assert_eq!(link.u, NodeId(n));
            assert_eq!(path_delay(&net, &paths[0]), 0.0);
        }
    }

    #[test]
    fn membership_indicator_matches_link_list() {
        let net = complete(4, 3);
        for path in net.all_paths() {
            for link in net.links() {
                assert_eq!(
                    path.uses(link.id),
                    path.links.contains(&link.id),
                    "indicator mismatch on {}",
                    describe_path(&net, path)
                );
            }
        }
    }

    #[test]
    fn paths_are_simple_and_within_hop_budget() {
        let net = complete(4, 3);
        for path in net.all_paths() {
            assert!(path.hop_count() <= 3);
            if path.source == path.target {
                continue;
            }
            // Walk the links and confirm no node repeats.
            let mut at = path.source;
            let mut seen = vec![at];
            for &l in &path.links {
                let link = net.link(l);
                assert!(!link.is_intra());
                at = link.other(at);
                assert!(!seen.contains(&at), "repeated node in path");
                seen.push(at);
            }
            assert_eq!(at, path.target);
        }
    }

    #[test]
    fn line_graph_path_delay_accumulates() {
        // 0 - 1 - 2 - 3 with delays 1, 2, 3.
        let nodes = (0..4).map(test_node).collect();
        let mut links: Vec<PhysicalLink> = (0..4).map(|i| intra(i, i)).collect();
        links.push(inter(4, 0, 1, 1.0));
        links.push(inter(5, 1, 2, 2.0));
        links.push(inter(6, 2, 3, 3.0));
        let net = enumerate_paths(nodes, links, 4).unwrap();
        let paths = net.paths_between(NodeId(0), NodeId(3));
        assert_eq!(paths.len(), 1);
        assert_eq!(path_delay(&net, &paths[0]), 6.0);
    }

    #[test]
    fn hop_budget_below_diameter_is_rejected() {
        let nodes: Vec<CloudNode> = (0..4).map(test_node).collect();
        let mut links: Vec<PhysicalLink> = (0..4).map(|i| intra(i, i)).collect();
        links.push(inter(4, 0, 1, 1.0));
        links.push(inter(5, 1, 2, 2.0));
        links.push(inter(6, 2, 3, 3.0));
        let err = enumerate_paths(nodes, links, 2).unwrap_err();
        assert_eq!(
            err,
            TopologyError::NoPathWithinHops {
                from: NodeId(0),
                to: NodeId(3)
            }
        );
    }

    #[test]
    fn disconnected_graph_is_rejected() {
        let nodes: Vec<CloudNode> = (0..3).map(test_node).collect();
        let mut links: Vec<PhysicalLink> = (0..3).map(|i| intra(i, i)).collect();
        links.push(inter(3, 0, 1, 1.0));
        let err = enumerate_paths(nodes, links, 4).unwrap_err();
        assert_eq!(err, TopologyError::DisconnectedGraph);
    }

    #[test]
    fn missing_intra_link_is_rejected() {
        let nodes: Vec<CloudNode> = (0..2).map(test_node).collect();
        let links = vec![intra(0, 0), inter(1, 0, 1, 1.0)];
        let err = enumerate_paths(nodes, links, 2).unwrap_err();
        assert_eq!(err, TopologyError::MissingIntraLink { node: NodeId(1) });
    }

    #[test]
    fn zero_bandwidth_is_rejected() {
        let nodes: Vec<CloudNode> = (0..2).map(test_node).collect();
        let mut bad = inter(2, 0, 1, 1.0);
        bad.bandwidth_kbps = 0.0;
        let links = vec![intra(0, 0), intra(1, 1), bad];
        let err = enumerate_paths(nodes, links, 2).unwrap_err();
        assert_eq!(err, TopologyError::NonPositiveBandwidth { link: LinkId(2) });
    }

    #[test]
    fn duplicate_inter_link_is_rejected() {
        let nodes: Vec<CloudNode> = (0..2).map(test_node).collect();
        let links = vec![
            intra(0, 0),
            intra(1, 1),
            inter(2, 0, 1, 1.0),
            inter(3, 1, 0, 2.0),
        ];
        let err = enumerate_paths(nodes, links, 2).unwrap_err();
        assert_eq!(
            err,
            TopologyError::DuplicateInterLink {
                u: NodeId(0),
                v: NodeId(1)
            }
        );
    }

    #[test]
    fn single_node_network_has_only_the_intra_path() {
        let net = enumerate_paths(vec![test_node(0)], vec![intra(0, 0)], 4).unwrap();
        assert_eq!(net.all_paths().len(), 1);
        assert_eq!(net.paths_between(NodeId(0), NodeId(0)).len(), 1);
    }

    #[test]
    fn generator_is_deterministic_and_respects_ranges() {
        let params = TopologyParams::default();
        let a = generate_random_topology(4, 7, &params).unwrap();
        let b = generate_random_topology(4, 7, &params).unwrap();
        assert_eq!(a, b);

        let c = generate_random_topology(4, 8, &params).unwrap();
        assert_ne!(a, c, "different seeds should differ in general");

        for link in a.links() {
            match link.kind {
                LinkKind::Intra => {
                    assert_eq!(link.bandwidth_kbps, params.intra_bandwidth_kbps);
                    assert_eq!(link.delay_ms, params.intra_delay_ms);
                    assert_eq!(link.unit_cost, params.intra_unit_cost);
                }
                LinkKind::Inter => {
                    let (blo, bhi) = params.inter_bandwidth_kbps;
                    assert!(link.bandwidth_kbps >= blo && link.bandwidth_kbps < bhi);
                    let (dlo, dhi) = params.inter_delay_ms;
                    assert!(link.delay_ms >= dlo && link.delay_ms < dhi);
                    let factor = link.unit_cost / link.bandwidth_kbps;
                    let (flo, fhi) = params.inter_cost_factor;
                    assert!(factor >= flo * 0.999 && factor <= fhi * 1.001);
                }
            }
        }
    }

    #[test]
    fn generator_covers_every_ordered_pair() {
        for seed in 0..20 {
            let net =
                generate_random_topology(4, seed, &TopologyParams::default()).unwrap();
            for u in 0..4 {
                for v in 0..4 {
                    assert!(
                        !net.paths_between(NodeId(u), NodeId(v)).is_empty(),
                        "seed {seed} pair ({u},{v})"
                    );
                }
            }
        }
    }

    #[test]
    fn generator_rejects_bad_probability() {
        let mut params = TopologyParams::default();
        params.edge_probability = 0.0;
        assert_eq!(
            generate_random_topology(3, 1, &params).unwrap_err(),
            TopologyError::InvalidEdgeProbability
        );
    }
}
