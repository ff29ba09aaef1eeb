//! The approximate decider: a sweep over the free-space diagram in which
//! piece×piece blocks are solved as one unit and everything else cell by
//! cell.

pub mod cell;
pub mod front;
pub mod graph;
pub mod stats;

pub use cell::solve_cell;
pub use front::ReachFront;
pub use graph::{
    approximate_decide, build_region_graph, decide_le, DecisionOutcome, NodeId, Rect, RegionGraph,
    SweepCounters, Verdict,
};
pub use stats::{complexity_stats, complexity_stats_bruteforce, ComplexityStats};
