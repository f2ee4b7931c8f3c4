//! Finite terms for locally finite infinite graphs, their end profiles, and
//! finite truncations.
//!
//! Attachment names: `root` everywhere; `v<i>` on finite graphs and on the
//! spine families (plus `w<i>` for spine midpoints); inside a wedge, `a.` and
//! `b.` select the left and right operand, and unprefixed names go left.

mod denote;
mod profile;
mod term;

pub use denote::{truncate, truncate_at, TruncatedVertex, Truncation, Vid};
pub use profile::{end_profile, Card, EndProfile};
pub use term::{FiniteGraph, GraphBlueprint};
