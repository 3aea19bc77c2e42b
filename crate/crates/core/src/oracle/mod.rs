//! Brute-force checks written independently of the construction code.

mod cover;
mod margin;
mod partition;
mod separation;

pub use crate::group::FiniteGroupTable;
pub use cover::{
    exact_cover_search, exact_cover_search_with_budget, monotile_extend_finite, monotile_extend_finite_with_budget,
    CoverSolution, DEFAULT_NODE_BUDGET,
};
pub use margin::{brute_margin_table, MarginEntry, MarginTable};
pub use partition::{independent_partition_check, independent_partition_check_json, PartitionCheck, PartitionDefect};
pub use separation::{d_separation_scan, SeparationScan};
