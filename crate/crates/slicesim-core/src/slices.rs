//! Slice requests: per-tenant bundles of VMs joined by virtual links.
//!
//! A batch holds the requests of `tenant_count` tenants, each tenant
//! contributing a fixed number of slices. Every slice carries VM resource
//! demands and virtual links (VLs) with a data rate and an end-to-end delay
//! bound. [`generate_batch`] reproduces the experiment workload; demand
//! sums per slice and per batch feed the admission-control rejection rules.

use alloc::vec::Vec;

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::topology::{ResourceKind, Resources};

/// Identity of a slice: tenant index `t` and the tenant's slice index `k`,
/// both zero-based. Ordering is lexicographic, which is also the rejection
/// tie-break order.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct SliceId {
    pub tenant: usize,
    pub slice: usize,
}

impl core::fmt::Display for SliceId {
    fn fmt(&self, f: &mut core::fmt::Formatter<'_>) -> core::fmt::Result {
        write!(f, "({},{})", self.tenant, self.slice)
    }
}

/// Resource demand of one VM within a slice.
#[derive(Clone, Debug, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct VmDemand {
    /// VM index `m` within its slice.
    pub vm: usize,
    pub demand: Resources,
}

/// A virtual link between two VMs of the same slice.
#[derive(Clone, Debug, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct VlDemand {
    /// Endpoint VM indices `(m, m')` with `m < m'`.
    pub endpoints: (usize, usize),
    /// Requested data rate, Kbps.
    pub rate_kbps: f64,
    /// End-to-end delay bound, ms.
    pub max_delay_ms: f64,
}

/// Admission status of a slice. Transitions are only
/// `Pending -> Accepted` and `Pending -> Rejected`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub enum SliceStatus {
    Pending,
    Accepted,
    Rejected,
}

/// One slice request.
#[derive(Clone, Debug, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct SliceRequest {
    pub id: SliceId,
    pub vms: Vec<VmDemand>,
    pub vls: Vec<VlDemand>,
    pub status: SliceStatus,
}

/// A batch of slice requests from `tenant_count` tenants.
#[derive(Clone, Debug, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct RequestBatch {
    /// Sorted by `(tenant, slice)`.
    pub slices: Vec<SliceRequest>,
    pub tenant_count: usize,
    /// Slice count per tenant, indexed by tenant.
    pub slices_per_tenant: Vec<usize>,
}

/// Virtual-link pattern connecting the VMs of a slice.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub enum VlShape {
    /// Every unordered VM pair: `m(m-1)/2` links.
    Mesh,
    /// Consecutive VMs: `m-1` links.
    Chain,
    /// VM 0 to every other VM: `m-1` links.
    Star,
}

/// Demand dimension used by admission-control rejection rules: the three VM
/// resources plus the aggregate VL rate.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum DemandKind {
    Resource(ResourceKind),
    Rate,
}

/// Parameters for [`generate_batch`]; defaults reproduce the experiment
/// workload (three identical VMs per slice, full-mesh VLs, uniform rate and
/// delay-bound draws).
#[derive(Clone, Debug, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(default))]
pub struct SliceParams {
    pub vms_per_slice: usize,
    pub vm_demand: Resources,
    /// VL rate range, Kbps.
    pub rate_kbps: (f64, f64),
    /// VL delay-bound range, ms.
    pub max_delay_ms: (f64, f64),
    pub shape: VlShape,
}

impl Default for SliceParams {
    fn default() -> Self {
        SliceParams {
            vms_per_slice: 3,
            vm_demand: Resources::new(1000.0, 64.0, 120.0),
            rate_kbps: (1e4, 1.1e5),
            max_delay_ms: (5.0, 14.0),
            shape: VlShape::Mesh,
        }
    }
}

/// Validation failures for externally supplied batches.
#[derive(Clone, Debug, PartialEq, thiserror::Error)]
pub enum BatchError {
    #[error("slice list is not sorted by (tenant, slice) or contains duplicates")]
    UnsortedOrDuplicate,
    #[error("tenant_count/slices_per_tenant do not match the slice list")]
    CountMismatch,
    #[error("slice {id} has no VMs")]
    EmptySlice { id: SliceId },
    #[error("slice {id} VM indices are not 0..vm_count")]
    BadVmIndices { id: SliceId },
    #[error("slice {id} has a VM with a negative demand component")]
    NegativeDemand { id: SliceId },
    #[error("slice {id} has a VL with endpoints out of range or not (m < m')")]
    BadVlEndpoints { id: SliceId },
    #[error("slice {id} has duplicate VL endpoint pairs")]
    DuplicateVl { id: SliceId },
    #[error("slice {id} has a VL with a non-positive rate")]
    NonPositiveRate { id: SliceId },
    #[error("slice {id} has a VL with a negative delay bound")]
    NegativeDelayBound { id: SliceId },
}

impl RequestBatch {
    pub fn empty() -> Self {
        RequestBatch {
            slices: Vec::new(),
            tenant_count: 0,
            slices_per_tenant: Vec::new(),
        }
    }

    /// Total number of slice requests.
    pub fn len(&self) -> usize {
        self.slices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.slices.is_empty()
    }

    pub fn slice(&self, id: SliceId) -> Option<&SliceRequest> {
        self.slices.iter().find(|s| s.id == id)
    }

    /// A batch containing only the given slices (statuses preserved),
    /// with tenant bookkeeping recomputed.
    pub fn restricted_to(&self, keep: impl Fn(&SliceRequest) -> bool) -> RequestBatch {
        let slices: Vec<SliceRequest> =
            self.slices.iter().filter(|s| keep(s)).cloned().collect();
        rebuild(slices)
    }

    /// Checks the structural invariants required of externally supplied
    /// batches.
    pub fn validate(&self) -> Result<(), BatchError> {
        for pair in self.slices.windows(2) {
            if pair[0].id >= pair[1].id {
                return Err(BatchError::UnsortedOrDuplicate);
            }
        }
        let mut counts = alloc::vec![0usize; self.tenant_count];
        for s in &self.slices {
            if s.id.tenant >= self.tenant_count {
                return Err(BatchError::CountMismatch);
            }
            counts[s.id.tenant] += 1;
            if s.vms.is_empty() {
                return Err(BatchError::EmptySlice { id: s.id });
            }
            for (i, vm) in s.vms.iter().enumerate() {
                if vm.vm != i {
                    return Err(BatchError::BadVmIndices { id: s.id });
                }
                if !vm.demand.is_non_negative() {
                    return Err(BatchError::NegativeDemand { id: s.id });
                }
            }
            let mut seen_pairs: Vec<(usize, usize)> = Vec::new();
            for vl in &s.vls {
                let (a, b) = vl.endpoints;
                if a >= b || b >= s.vms.len() {
                    return Err(BatchError::BadVlEndpoints { id: s.id });
                }
                if seen_pairs.contains(&(a, b)) {
                    return Err(BatchError::DuplicateVl { id: s.id });
                }
                seen_pairs.push((a, b));
                if !(vl.rate_kbps > 0.0) {
                    return Err(BatchError::NonPositiveRate { id: s.id });
                }
                if !(vl.max_delay_ms >= 0.0) {
                    return Err(BatchError::NegativeDelayBound { id: s.id });
                }
            }
        }
        if counts != self.slices_per_tenant {
            return Err(BatchError::CountMismatch);
        }
        Ok(())
    }
}

fn rebuild(slices: Vec<SliceRequest>) -> RequestBatch {
    let tenant_count = slices.iter().map(|s| s.id.tenant + 1).max().unwrap_or(0);
    let mut slices_per_tenant = alloc::vec![0usize; tenant_count];
    for s in &slices {
        slices_per_tenant[s.id.tenant] += 1;
    }
    RequestBatch {
        slices,
        tenant_count,
        slices_per_tenant,
    }
}

fn vl_pairs(shape: VlShape, vm_count: usize) -> Vec<(usize, usize)> {
    let mut pairs = Vec::new();
    match shape {
        VlShape::Mesh => {
            for a in 0..vm_count {
                for b in (a + 1)..vm_count {
                    pairs.push((a, b));
                }
            }
        }
        VlShape::Chain => {
            for a in 0..vm_count.saturating_sub(1) {
                pairs.push((a, a + 1));
            }
        }
        VlShape::Star => {
            for b in 1..vm_count {
                pairs.push((0, b));
            }
        }
    }
    pairs
}

const SEED_MIX_TENANT: u64 = 0x9e37_79b9_7f4a_7c15;
const SEED_MIX_SLICE: u64 = 0xbf58_476d_1ce4_e5b9;

fn splitmix64(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9e37_79b9_7f4a_7c15);
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

/// Stable per-slice stream seed. Keeping draws keyed by `(t, k)` makes
/// batches nested: the batch for `tenant_count` T is a prefix of the batch
/// for T+1 under the same seed, which the sweep harness relies on.
fn slice_seed(seed: u64, tenant: usize, slice: usize) -> u64 {
    let a = splitmix64(seed ^ SEED_MIX_TENANT.wrapping_mul(tenant as u64 + 1));
    splitmix64(a ^ SEED_MIX_SLICE.wrapping_mul(slice as u64 + 1))
}

/// Draws a request batch: `slices_per_tenant` slices for each of
/// `tenant_count` tenants, all in `Pending` state.
///
/// VM demands are the constant `params.vm_demand`; per VL, rate and delay
/// bound are drawn uniformly, in the canonical VL order of the shape. Draws
/// are keyed per slice, so batches with the same seed nest across tenant
/// counts.
pub fn generate_batch(
    tenant_count: usize,
    slices_per_tenant: usize,
    seed: u64,
    params: &SliceParams,
) -> RequestBatch {
    let mut slices = Vec::with_capacity(tenant_count * slices_per_tenant);
    for t in 0..tenant_count {
        for k in 0..slices_per_tenant {
            let mut rng = ChaCha8Rng::seed_from_u64(slice_seed(seed, t, k));
            let vms: Vec<VmDemand> = (0..params.vms_per_slice)
                .map(|m| VmDemand {
                    vm: m,
                    demand: params.vm_demand,
                })
                .collect();
            let vls: Vec<VlDemand> = vl_pairs(params.shape, params.vms_per_slice)
                .into_iter()
                .map(|endpoints| {
                    let rate = draw(&mut rng, params.rate_kbps);
                    let delay = draw(&mut rng, params.max_delay_ms);
                    VlDemand {
                        endpoints,
                        rate_kbps: rate,
                        max_delay_ms: delay,
                    }
                })
                .collect();
            slices.push(SliceRequest {
                id: SliceId { tenant: t, slice: k },
                vms,
                vls,
                status: SliceStatus::Pending,
            });
        }
    }
    RequestBatch {
        slices,
        tenant_count,
        slices_per_tenant: alloc::vec![slices_per_tenant; tenant_count],
    }
}

fn draw(rng: &mut ChaCha8Rng, (lo, hi): (f64, f64)) -> f64 {
    if lo == hi {
        lo
    } else {
        rng.random_range(lo..hi)
    }
}

/// Demand sum of one slice along `kind` (the `SumUsed` quantities driving
/// rejection choices).
pub fn slice_demand(slice: &SliceRequest, kind: DemandKind) -> f64 {
    match kind {
        DemandKind::Resource(r) => slice.vms.iter().map(|vm| vm.demand.get(r)).sum(),
        DemandKind::Rate => slice.vls.iter().map(|vl| vl.rate_kbps).sum(),
    }
}

/// Batch-wide demand sum along `kind`.
pub fn total_demand(batch: &RequestBatch, kind: DemandKind) -> f64 {
    batch.slices.iter().map(|s| slice_demand(s, kind)).sum()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn default_batch_shape_matches_experiment_workload() {
        let batch = generate_batch(4, 1, 3, &SliceParams::default());
        assert_eq!(batch.len(), 4);
        assert_eq!(batch.tenant_count, 4);
        assert_eq!(batch.slices_per_tenant, vec![1, 1, 1, 1]);
        for s in &batch.slices {
            assert_eq!(s.vms.len(), 3);
            assert_eq!(s.vls.len(), 3, "mesh over 3 VMs");
            assert_eq!(s.status, SliceStatus::Pending);
            for vm in &s.vms {
                assert_eq!(vm.demand, Resources::new(1000.0, 64.0, 120.0));
            }
            for vl in &s.vls {
                assert!(vl.rate_kbps >= 1e4 && vl.rate_kbps < 1.1e5);
                assert!(vl.max_delay_ms >= 5.0 && vl.max_delay_ms < 14.0);
            }
        }
        batch.validate().unwrap();
    }

    #[test]
    fn batches_nest_across_tenant_counts() {
        let params = SliceParams::default();
        let small = generate_batch(3, 2, 99, &params);
        let large = generate_batch(5, 2, 99, &params);
        assert_eq!(&large.slices[..small.len()], &small.slices[..]);
    }

    #[test]
    fn generation_is_deterministic() {
        let params = SliceParams::default();
        assert_eq!(
            generate_batch(6, 1, 42, &params),
            generate_batch(6, 1, 42, &params)
        );
        assert_ne!(
            generate_batch(6, 1, 42, &params),
            generate_batch(6, 1, 43, &params)
        );
    }

    #[test]
    fn shapes_produce_expected_vl_counts() {
        assert_eq!(vl_pairs(VlShape::Mesh, 4).len(), 6);
        assert_eq!(vl_pairs(VlShape::Chain, 4), vec![(0, 1), (1, 2), (2, 3)]);
        assert_eq!(vl_pairs(VlShape::Star, 4), vec![(0, 1), (0, 2), (0, 3)]);
        assert_eq!(vl_pairs(VlShape::Mesh, 1).len(), 0);
    }

    #[test]
    fn demand_sums_match_hand_arithmetic() {
        let batch = generate_batch(2, 1, 5, &SliceParams::default());
        let s = &batch.slices[0];
        assert_eq!(
            slice_demand(s, DemandKind::Resource(ResourceKind::Compute)),
            3000.0
        );
        assert_eq!(
            slice_demand(s, DemandKind::Resource(ResourceKind::Memory)),
            192.0
        );
        assert_eq!(
            slice_demand(s, DemandKind::Resource(ResourceKind::Storage)),
            360.0
        );
        assert_eq!(
            total_demand(&batch, DemandKind::Resource(ResourceKind::Compute)),
            6000.0
        );
        let rate_sum: f64 = s.vls.iter().map(|v| v.rate_kbps).sum();
        assert_eq!(slice_demand(s, DemandKind::Rate), rate_sum);
    }

    #[test]
    fn restricted_to_rebuilds_counts() {
        let batch = generate_batch(3, 2, 1, &SliceParams::default());
        let only_tenant_1 = batch.restricted_to(|s| s.id.tenant == 1);
        assert_eq!(only_tenant_1.len(), 2);
        assert_eq!(only_tenant_1.tenant_count, 2);
        assert_eq!(only_tenant_1.slices_per_tenant, vec![0, 2]);
    }

    #[test]
    fn validate_rejects_duplicate_vl() {
        let mut batch = generate_batch(1, 1, 0, &SliceParams::default());
        let dup = batch.slices[0].vls[0].clone();
        batch.slices[0].vls.push(dup);
        assert_eq!(
            batch.validate().unwrap_err(),
            BatchError::DuplicateVl {
                id: SliceId { tenant: 0, slice: 0 }
            }
        );
    }

    #[test]
    fn validate_rejects_bad_endpoints() {
        let mut batch = generate_batch(1, 1, 0, &SliceParams::default());
        batch.slices[0].vls[0].endpoints = (2, 1);
        assert_eq!(
            batch.validate().unwrap_err(),
            BatchError::BadVlEndpoints {
                id: SliceId { tenant: 0, slice: 0 }
            }
        );
    }

    #[test]
    fn validate_rejects_count_mismatch() {
        let mut batch = generate_batch(2, 1, 0, &SliceParams::default());
        batch.slices_per_tenant = vec![2, 0];
        assert_eq!(batch.validate().unwrap_err(), BatchError::CountMismatch);
    }
}
