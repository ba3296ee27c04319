//! Biperiodic Fibonacci words and their overlapping self-similar cell structures.
//!
//! * [`word`]: generation of `f`, `t`, `p` and `I` words and their lengths.
//! * [`cell`] and [`decompose`]: positioned cells, the three parity-case
//!   decompositions, refinement and flattening.
//! * [`verify`]: brute-force checks of every identity over parameter grids.
//! * [`cli`]: the `bifib` command-line front end.

pub mod cell;
pub mod cli;
pub mod decompose;
pub mod verify;
pub mod word;

pub use cell::{expand_all_i, expand_i, flatten, Cell, CellKind, CellStructure, ParentWord};
pub use decompose::{
    decompose, decompose_even_r, decompose_odd_even, decompose_odd_odd, expand_f_squared,
    period_l, refine, DecomposeError, DecomposeOptions, ParityCase,
};
pub use verify::{check_balanced, verify_grid, verify_identity, Grid, IdentityId, Status};
pub use word::{
    last_two, length_f, palindromic_prefix, rs, word_f, word_i, word_t, Convention, ParityPair,
    Params, Word, WordError,
};
