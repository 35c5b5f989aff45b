//! Finite-state automorphisms of regular rooted trees.
//!
//! The crate covers three layers:
//!
//! - [`automaton`]: exact calculus of finite invertible Mealy machines acting
//!   on the `n`-regular rooted tree (action, product, inverse, minimization,
//!   equality, Moore diagrams), plus alphabet refinement in [`refine`].
//! - [`embed`]: the embedding of `GL(n, Z)` into automorphisms of the
//!   `2^n`-regular tree, driven by a factorization of unimodular matrices
//!   into elementary factors ([`matrix`]).
//! - [`free`]: a rank-2 free group of automorphisms of the binary tree
//!   obtained by refining two Sanov generators, with bounded relation search.
//!
//! Letters are 0-based internally and 1-based in every user-facing format.
//! A letter of the `2^n` alphabet encodes the bit vector `(x_1, …, x_n)` as
//! `x_1 + 2 x_2 + … + 2^(n-1) x_n`.

pub mod automaton;
pub mod embed;
pub mod error;
pub mod figures;
pub mod free;
pub mod matrix;
pub mod perm;
pub mod refine;
pub mod verify;

pub use automaton::{format_word, parse_word, Letter, StateData, TreeAutomorphism, Word};
pub use error::{Error, Result};
pub use perm::Permutation;
pub use refine::RefinementMap;
