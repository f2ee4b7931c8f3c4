//! The comb length function and the trees it produces.
//!
//! On a graph whose complement of the core has a component `T` with
//! infinite end space, `ℓ(g)` is the least `k` such that `g` fixes every
//! geodesic line of `T` at distance at least `k` from the core. It is an
//! ultranorm, so `d(g, h) = ℓ(g⁻¹h)` is an ultrametric and the classes of
//! elements are the leaves of a tree. The module also provides the leveled
//! tree model of the comb, bounded-geometry witnesses and four-point
//! hyperbolicity checks for finite metrics.

mod hyperbolic;
mod length;
mod leveled;
mod ultratree;

pub use hyperbolic::{delta_exact, hyperbolicity_delta, is_ultrametric, parse_distance_table};
pub use length::{bounded_geometry_witness, BallCertificate, CombContext};
pub use leveled::{transitivity_witness, LeveledVertex};
pub use ultratree::{dendrogram, ultratree, UltraNode, UltraTree};
