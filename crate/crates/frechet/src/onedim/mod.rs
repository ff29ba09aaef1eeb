//! Piece pairs reduced to separated one-dimensional curves.

pub mod exits;
pub mod greedy;
pub mod project;
pub mod range_index;
pub mod region;
pub mod trace;

pub use exits::EntryExitSets;
pub use greedy::Reduced;
pub use project::{project_pieces, Separated1D};
pub use range_index::{build_range_index, RangeIndex, ValueRange};
pub use region::{
    round_and_prepare, solve_region_pieces, solve_region_pieces_with_stats, Prepared, RegionStats,
};
