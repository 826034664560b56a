//! The two `K_4` colorings used as verifier fixtures.
//!
//! Edge order is `01 02 03 12 13 23`.

use crate::coloring::EdgeColoring;

/// Complete and connected with 4 colors: `{01,02}`, `{12,13}`, `{23}`, `{03}`.
pub fn k4_complete_four() -> EdgeColoring {
    EdgeColoring::new(4, 4, vec![0, 0, 3, 1, 1, 2]).expect("fixture is valid")
}

/// Connected with 5 colors but not complete: `{01,02}` plus singletons
/// `03`, `12`, `13`, `23`. The disjoint singletons `03` (color 1) and `12`
/// (color 2) form the only uncovered pair.
pub fn k4_incomplete_five() -> EdgeColoring {
    EdgeColoring::new(4, 5, vec![0, 0, 1, 2, 3, 4]).expect("fixture is valid")
}
