//! The worked `Z_3 → Z_5` example: explicit tiles for `(s, s′) = (2, 1)`
//! with a hand-picked bijection instead of the canonical one.

use crate::tile::explicit_tile;
use crate::transducer::{Homeo, LeafBijection};
use crate::word::Word;

/// `τ(0,0) = (0)`, `τ(1) = (1)`, `τ(2) = (2)`, `τ(0,1) = (3)`, `τ(0,2) = (4)`.
pub const WORKED_TAU: [(&[u32], &[u32]); 5] = [
    (&[0, 0], &[0]),
    (&[1], &[1]),
    (&[2], &[2]),
    (&[0, 1], &[3]),
    (&[0, 2], &[4]),
];

pub fn worked_example_tau() -> LeafBijection {
    let source = explicit_tile(3, 2).expect("valid parameters").tile;
    let target = explicit_tile(5, 1).expect("valid parameters").tile;
    let pairs = WORKED_TAU.iter().map(|(from, to)| {
        (
            Word::new(3, from).expect("base-3 digits"),
            Word::new(5, to).expect("base-5 digits"),
        )
    });
    LeafBijection::new(source, target, pairs).expect("fixture is a bijection")
}

pub fn worked_example() -> Homeo {
    Homeo::new(worked_example_tau())
}
