use serde::{Deserialize, Serialize};

use crate::freegrp::Word;
use crate::mcg::{Family, MappingClass};
use crate::{Error, Result};

/// Evidence that an element lies in `V_K` for `K = [v_1, v_n]`.
///
/// Reading at `v_n` instead of the far basepoint conjugates the far table by
/// `conjugator`. The element is in `V_K` when, in that frame, it fixes
/// `a_1..a_n`, maps `A_{n+1,∞}` into itself, fixes the rays hanging off `K`
/// and moves every other ray end only by a word in `A_{n+1,∞}`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct VkCertificate {
    pub n: u32,
    pub conjugator: Word,
}

impl VkCertificate {
    /// Checks the certificate against an element.
    pub fn verify(&self, g: &MappingClass) -> Result<()> {
        let n = self.n as i32;
        let c = &self.conjugator;
        let far = |w: &Word| w.gens().into_iter().all(|x| x > n);
        if !far(c) {
            return Err(Error::Rejected(format!("conjugator {c} meets K")));
        }
        let phi = g.core();
        for i in 1..=n {
            let img = c.inverse().conjugate(&phi.image(i));
            if img != Word::gen(i) {
                return Err(Error::Rejected(format!("a{i} ↦ {img} is not fixed")));
            }
        }
        for i in phi.touched() {
            if i > n && !far(&phi.image(i)) {
                return Err(Error::Rejected(format!("a{i} is mapped into K")));
            }
        }
        for k in near_rays(g.family(), self.n) {
            if g.ray_word(k) != *c {
                return Err(Error::Rejected(format!("ray R{k} hanging off K is moved")));
            }
        }
        for (&k, r) in g.rays() {
            if !is_near(g.family(), self.n, k) && !far(r) {
                return Err(Error::Rejected(format!("ray R{k} is dragged through K")));
            }
        }
        Ok(())
    }
}

/// Rays disconnected from the far end by `[v_1, v_n]`.
pub(crate) fn near_rays(family: Family, n: u32) -> Vec<u32> {
    match family {
        Family::Hungry(k) => (1..=k).collect(),
        Family::Millipede => (1..=n).collect(),
        _ => vec![],
    }
}

fn is_near(family: Family, n: u32, k: u32) -> bool {
    match family {
        Family::Hungry(_) => true,
        Family::Millipede => k <= n,
        _ => false,
    }
}

/// Registered families whose pure mapping class group is coarsely bounded.
pub(crate) fn check_family(family: Family) -> Result<()> {
    match family {
        Family::LochNess | Family::Hungry(_) | Family::Millipede => Ok(()),
        other => Err(Error::Rejected(format!("{other} is not in the coarsely bounded family"))),
    }
}

/// Decides membership in `V_K` and returns the certificate.
pub fn vk_certificate(g: &MappingClass, n: u32) -> Result<VkCertificate> {
    check_family(g.family())?;
    if n == 0 {
        return Err(Error::Rejected("K = [v1, vn] needs n ≥ 1".into()));
    }
    // a_1 must be fixed in the v_n frame: Φ(a_1) = p a_1 p⁻¹ and c = p⁻¹.
    let (p, q) = g.core().image(1).cyclic_split();
    if q != Word::gen(1) {
        return Err(Error::Rejected(format!("a1 ↦ {} is not a conjugate of a1", g.core().image(1))));
    }
    let cert = VkCertificate { n, conjugator: p.inverse() };
    cert.verify(g)?;
    Ok(cert)
}
