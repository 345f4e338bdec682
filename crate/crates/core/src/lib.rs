//! Explicit homeomorphisms between rings of `p`-adic integers.
//!
//! A tile of the complete `p`-ary tree (a complete prefix code over the
//! digits `0..p`) factors every `p`-adic expansion uniquely into leaf blocks.
//! Given tiles over bases `p` and `q` with the same number of leaves and a
//! bijection between their leaves, replacing each block by its image is a
//! homeomorphism `Z_p → Z_q`, realized here as a finite-state transducer.

pub mod error;
pub mod exec;
pub mod fixtures;
pub mod oracle;
pub mod render;
pub mod stream;
pub mod tile;
pub mod transducer;
pub mod word;

pub use error::{Error, Result, TileViolation};
pub use exec::Execution;
pub use stream::{
    parse_rational, rational_to_stream, residue_equal, DigitSource, DigitStream, Truncation,
};
pub use tile::{
    enumerate_tiles, enumerate_tiles_with_leaves, explicit_tile, leaf_count, partition_at_level,
    replicate, solve_diophantine, verify_tile, verify_tile_oracle, DiophantineSolution,
    ExplicitTile, ExplicitTileParams, Tile, DEFAULT_CAP,
};
pub use transducer::{
    canonical_tau, check_inclusion_isomorphism, check_level_map, compose, factorize, Applied,
    Composite, Factorization, Homeo, LeafBijection, ParseState, Transducer,
};
pub use word::{ball_contains, ball_of, is_prefix, nu, word_cmp, Ball, Word};
