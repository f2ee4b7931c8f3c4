//! Flux homomorphisms and the displacement pseudo-norm on star families.
//!
//! A partition of the ends is fixed by the midpoint `x_0` of a spine edge on
//! one arm. The graded factors `A_n` grow from the far side of `x_0` into
//! that arm (or shrink away from it for `n < 0`), and every infinite-rank
//! factor is handled through a finite window whose cut is derived from the
//! support of the element; each computation is repeated at twice the cut
//! and must agree.

mod displacement;
mod flux;
mod partition;

pub use displacement::{abs_displacement, displacement, zk_embedding_check, ZkReport};
pub use flux::{admissible_pair, flux, flux_at, flux_family, FluxFamily, FluxValue};
pub use partition::EndPartition;
