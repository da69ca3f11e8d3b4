//! Resource allocation for slice-enabled virtualized networks.
//!
//! The crate models a physical cloud network (nodes with compute, memory and
//! storage capacities; intra- and inter-node links with bandwidth, delay and
//! transport cost) together with batches of network-slice requests, and
//! decides which requests to admit and where to place them.
//!
//! Two strategies are implemented on top of a built-in MILP engine:
//!
//! * [`jra`] — joint placement of VMs and virtual links in a single model,
//!   driven by the elastic admission loop in [`admission`];
//! * [`disjoint`] — a baseline that first places VMs (power-optimal, link
//!   blind) and then routes virtual links over the frozen placement.
//!
//! The crate is `no_std`-compatible (requires `alloc`); the default `std`
//! feature only forwards to the dependencies. All algorithms are
//! deterministic: identical inputs and seeds produce identical outputs.

#![cfg_attr(not(any(test, feature = "std")), no_std)]

extern crate alloc;

pub mod jra;
pub mod milp;
pub mod slices;
pub mod topology;
