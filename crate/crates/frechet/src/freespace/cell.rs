use crate::baseline::{propagate_cell, FreeSpaceCell, Interval};

use super::ReachFront;

fn clip(entry: Option<Interval>, free: Option<Interval>) -> Option<Interval> {
    entry.and_then(|e| free.and_then(|f| f.intersect(&e)))
}

/// Exact reachability across one cell. `entry` has one bottom and one left
/// interval; the result has one top and one right interval.
pub fn solve_cell(cell: &FreeSpaceCell, entry: &ReachFront) -> ReachFront {
    let bottom = clip(entry.horizontal.first().copied().flatten(), cell.bottom);
    let left = clip(entry.vertical.first().copied().flatten(), cell.left);
    let (top, right) = propagate_cell(cell, bottom, left);
    ReachFront {
        horizontal: vec![top],
        vertical: vec![right],
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::Curve;

    fn curve(v: &[[f64; 2]]) -> Curve {
        Curve::new(v.iter().map(|x| x.to_vec()).collect()).unwrap()
    }

    #[test]
    fn fully_free_cell() {
        let pi = curve(&[[0., 0.], [1., 0.]]);
        let sigma = curve(&[[0., 0.1], [1., 0.1]]);
        let cell = FreeSpaceCell::new(&pi, &sigma, 0, 0, 5.0);
        let full = Interval::new(0.0, 1.0);
        let out = solve_cell(
            &cell,
            &ReachFront {
                horizontal: vec![full],
                vertical: vec![None],
            },
        );
        assert_eq!(out.horizontal, vec![full]);
        assert_eq!(out.vertical, vec![full]);
    }

    #[test]
    fn empty_entry() {
        let pi = curve(&[[0., 0.], [1., 0.]]);
        let cell = FreeSpaceCell::new(&pi, &pi, 0, 0, 5.0);
        assert!(solve_cell(&cell, &ReachFront::empty(1, 1)).is_empty());
    }
}
