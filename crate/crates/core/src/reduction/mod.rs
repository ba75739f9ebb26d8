//! NAE-3-SAT-E4 instances, gadgets and the four reductions to locally
//! balanced partition problems.

pub mod construct;
pub mod gadget;
pub mod nae;
pub mod roles;

pub use construct::{
    assignment_to_partition, audit_roles, partition_to_assignment, reduce, reduce_closed_odd,
    reduce_closed_subcubic, reduce_open_biregular, reduce_open_even, ReductionArtifact,
    ReductionError, ReductionKind, Role,
};
pub use gadget::{verified_gadget, verify_gadget, Gadget, GadgetFailure, GadgetKind};
pub use nae::{brute_sat, nae_eval, parse_nae, Assignment, NaeError, NaeInstance};
