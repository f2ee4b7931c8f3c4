//! Free groups on integer-indexed bases: reduced words, Stallings graphs,
//! automorphisms with explicit inverses, and windowed free factors.

mod aut;
mod stallings;
mod window;
mod word;

pub use aut::{invert, Aut};
pub use stallings::{fold, fold_in_order, PreGraph, StallingsGraph};
pub use window::{ArmLayout, Corank, Provenance, WindowedFactor};
pub use word::{Letter, Word};
