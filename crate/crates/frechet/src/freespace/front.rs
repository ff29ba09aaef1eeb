use crate::baseline::Interval;

/// Reachable boundary intervals of a rectangular block, in cell-local
/// parameters: `horizontal[i] ⊆ [0,1]` lies on the edge of column `i`,
/// `vertical[j]` on the edge of row `j`. Used for both the entering
/// bottom/left boundary and the exiting top/right boundary.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct ReachFront {
    pub horizontal: Vec<Option<Interval>>,
    pub vertical: Vec<Option<Interval>>,
}

impl ReachFront {
    pub fn empty(columns: usize, rows: usize) -> ReachFront {
        ReachFront {
            horizontal: vec![None; columns],
            vertical: vec![None; rows],
        }
    }

    pub fn is_empty(&self) -> bool {
        self.horizontal
            .iter()
            .chain(&self.vertical)
            .all(Option::is_none)
    }
}
