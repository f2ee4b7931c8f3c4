//! Certified witnesses that a mapping class group is coarsely bounded.
//!
//! For `K = [v_1, v_n]` the open subgroup `V_K` fixes the core up to
//! `v_n` and everything hanging off it. A witness writes a given element as
//! an ordered product of factors, each either from a small finite set `F`
//! or certified to lie in `V_K`, so that the product lies in `(F V_K)^k`
//! with `k` bounded independently of the element. The same construction is
//! provided for finitely supported permutations of the integers.

mod sinfty;
mod vk;
mod witness;

pub use sinfty::{sinfty_factorize, FinitePerm, PermFactor, SinftyFactorization};
pub use vk::{vk_certificate, VkCertificate};
pub use witness::{
    approximate_inverse, f_set, far_rays_factorize, full_witness, loops_factorize, power_bound, ray_factorize,
    Membership, NamedElement, WitnessFactor, WitnessFactorization,
};

/// Number of `F V` blocks a factor sequence needs, where `true` marks a
/// factor from `F`. Each block is an optional `F` followed by `V` factors.
pub(crate) fn blocks(tags: &[bool]) -> u32 {
    let f = tags.iter().filter(|&&t| t).count() as u32;
    f + u32::from(tags.first() == Some(&false))
}
