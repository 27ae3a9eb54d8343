//! Pair partitions behind the Gaussian diagram formula.
//!
//! `Π(n_1, …, n_ℓ)` is the set of perfect matchings of `{0, …, N-1}`
//! (grouped into consecutive blocks of sizes `n_i`) that never pair two
//! elements of one group and that connect all groups. Each such partition
//! induces a loop-free connected multigraph on the groups; for symmetric
//! kernels the diagram value depends only on that multigraph, which is what
//! [`diagram_classes`] exploits.

mod bounds;
mod matching;
mod multigraph;
mod partition;

pub use bounds::{alpha, count_bounds, matching_lower_bound, CountBounds, CountRecord};
pub use matching::{matching_number, maximum_matching};
pub use multigraph::{count_partitions, diagram_classes, partition_to_multigraph, DiagramClass, DiagramMultigraph};
pub use partition::{enumerate_partitions, GroupedIndexSet, PairPartition, Partitions, DEFAULT_ENUMERATION_CAP};
