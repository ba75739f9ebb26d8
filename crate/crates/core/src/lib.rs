//! Locally-balanced 2-partitions of graphs.
//!
//! A 2-partition labels every vertex 0 or 1. It is locally balanced with
//! an open (closed) neighborhood when every open (closed) neighborhood holds
//! as many 0s as 1s, up to a difference of one.
//!
//! - [`graph`]: graphs, multigraphs, the edge-list format, structural queries.
//! - [`balance`]: partitions, balances and the validity checkers.
//! - [`solver`]: exact propagation-and-backtracking solver plus a brute-force
//!   oracle.
//! - [`biregular`]: the polynomial algorithm for `(2, 2k+1)`-biregular graphs.
//! - [`reduction`]: NAE-3-SAT-E4 instances, gadgets and the four hardness
//!   reductions with their assignment/partition maps.

pub mod balance;
pub mod biregular;
pub mod graph;
pub mod reduction;
pub mod solver;

pub use balance::{balance_report, check, phi_star, BalanceReport, Mode, TwoPartition};
pub use graph::{parse_graph, Graph, MultiGraph};
