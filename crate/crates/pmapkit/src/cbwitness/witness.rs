use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use super::blocks;
use super::vk::{check_family, near_rays, vk_certificate, VkCertificate};
use crate::freegrp::{Aut, Word};
use crate::mcg::{loop_swap, Family, MappingClass};
use crate::{Error, Result};

/// A named element of the finite set `F`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct NamedElement {
    pub name: String,
    pub element: MappingClass,
}

/// Why a factor is allowed.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub enum Membership {
    /// Index into the finite set `F`.
    InF(usize),
    InVK(VkCertificate),
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct WitnessFactor {
    pub name: String,
    pub element: MappingClass,
    pub membership: Membership,
}

/// `target` written as an ordered product of factors from `F ∪ V_K`,
/// `K = [v_1, v_n]`, together with the block count `power` such that the
/// product lies in `(F V_K)^power`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct WitnessFactorization {
    pub target: MappingClass,
    pub n: u32,
    pub f_set: Vec<NamedElement>,
    pub factors: Vec<WitnessFactor>,
    pub power: u32,
    pub bound: u32,
    pub construction: String,
}

impl WitnessFactorization {
    /// Re-verifies the product, every membership and the power.
    pub fn verify(&self) -> Result<()> {
        let family = self.target.family();
        if self.f_set != f_set(family, self.n)? {
            return Err(Error::Rejected("the finite set F is not the standard one for this window".into()));
        }
        if self.bound > power_bound(family, self.n)? {
            return Err(Error::Rejected(format!("declared bound {} exceeds the bound for {family}", self.bound)));
        }
        let mut product = MappingClass::identity(self.target.family());
        for x in &self.factors {
            product = product.compose(&x.element)?;
            match &x.membership {
                Membership::InF(i) => {
                    let f = self
                        .f_set
                        .get(*i)
                        .ok_or_else(|| Error::Rejected(format!("factor {} cites a missing F element", x.name)))?;
                    if f.element != x.element {
                        return Err(Error::Rejected(format!("factor {} is not {}", x.name, f.name)));
                    }
                }
                Membership::InVK(cert) => {
                    if cert.n != self.n {
                        return Err(Error::Rejected(format!("factor {} certifies the wrong window", x.name)));
                    }
                    cert.verify(&x.element)
                        .map_err(|e| Error::Rejected(format!("factor {}: {e}", x.name)))?;
                }
            }
        }
        if product != self.target {
            return Err(Error::Rejected("the factors do not multiply to the target".into()));
        }
        let tags: Vec<bool> = self.factors.iter().map(|x| matches!(x.membership, Membership::InF(_))).collect();
        if blocks(&tags) != self.power {
            return Err(Error::Rejected(format!("declared power {} but the factors need {}", self.power, blocks(&tags))));
        }
        if self.power > self.bound {
            return Err(Error::Rejected(format!("power {} exceeds the bound {}", self.power, self.bound)));
        }
        Ok(())
    }
}

/// The finite set `F = {f, φ(a_{n+1}, I_k)^{±1}}` with `f = L(n, 1, n+1)`
/// and one interval `I_k = R_k.0` per ray hanging off `K`.
pub fn f_set(family: Family, n: u32) -> Result<Vec<NamedElement>> {
    check_family(family)?;
    if n == 0 {
        return Err(Error::Rejected("K = [v1, vn] needs n ≥ 1".into()));
    }
    let mut out = vec![NamedElement { name: "f".into(), element: loop_swap(family, n, 1, n as i64 + 1)? }];
    for k in near_rays(family, n) {
        let w = ray_map(family, k, Word::gen(n as i32 + 1))?;
        out.push(NamedElement { name: format!("t{k}"), element: w.clone() });
        out.push(NamedElement { name: format!("t{k}⁻¹"), element: w.inverse() });
    }
    Ok(out)
}

fn ray_map(family: Family, k: u32, w: Word) -> Result<MappingClass> {
    MappingClass::from_parts(family, Aut::identity(), BTreeMap::from([(k, w)]), None)
}

fn swap(family: Family, n: u32, m1: u32, m2: u32) -> Result<MappingClass> {
    loop_swap(family, n, m1 as i64, m2 as i64)
}

fn max_gen<'a>(words: impl IntoIterator<Item = &'a Word>) -> u32 {
    words.into_iter().filter_map(|w| w.max_gen()).max().unwrap_or(0).max(0) as u32
}

struct Chain {
    family: Family,
    n: u32,
    f_set: Vec<NamedElement>,
    factors: Vec<WitnessFactor>,
}

impl Chain {
    fn new(family: Family, n: u32) -> Result<Self> {
        Ok(Chain { family, n, f_set: f_set(family, n)?, factors: vec![] })
    }

    fn f(&mut self, index: usize) {
        let x = &self.f_set[index];
        self.factors.push(WitnessFactor {
            name: x.name.clone(),
            element: x.element.clone(),
            membership: Membership::InF(index),
        });
    }

    fn ray_f(&mut self, k: u32, inverse: bool) -> Result<()> {
        let name = if inverse { format!("t{k}⁻¹") } else { format!("t{k}") };
        let i = self
            .f_set
            .iter()
            .position(|x| x.name == name)
            .ok_or_else(|| Error::Rejected(format!("ray R{k} has no element in F for this window")))?;
        self.f(i);
        Ok(())
    }

    fn v(&mut self, name: &str, element: MappingClass) -> Result<()> {
        if element.is_identity() {
            return Ok(());
        }
        let cert = vk_certificate(&element, self.n)
            .map_err(|e| Error::Internal(format!("construction step {name} left V_K: {e}")))?;
        self.factors.push(WitnessFactor { name: name.into(), element, membership: Membership::InVK(cert) });
        Ok(())
    }

    fn finish(self, target: MappingClass, bound: u32, construction: &str) -> Result<WitnessFactorization> {
        let tags: Vec<bool> = self.factors.iter().map(|x| matches!(x.membership, Membership::InF(_))).collect();
        let w = WitnessFactorization {
            target,
            n: self.n,
            f_set: self.f_set,
            factors: self.factors,
            power: blocks(&tags),
            bound,
            construction: construction.into(),
        };
        w.verify().map_err(|e| Error::Internal(format!("{construction}: {e}")))?;
        Ok(w)
    }

    /// `u = g f ν f g` with `ν = f g u g f ∈ V_K`, for `u` supported on
    /// loops, or on rays beyond `K`, within `[v_1, v_m]`.
    fn conjugate_out(&mut self, u: &MappingClass, m: u32) -> Result<()> {
        let (n, fam) = (self.n, self.family);
        let f = self.f_set[0].element.clone();
        let g = swap(fam, n, n + 1, m + 1)?;
        let nu = f.compose(&g)?.compose(u)?.compose(&g)?.compose(&f)?;
        self.v("g", g.clone())?;
        self.f(0);
        self.v("ν", nu)?;
        self.f(0);
        self.v("g", g)
    }

    fn ray(&mut self, k: u32, w: &Word) -> Result<()> {
        let (n, fam) = (self.n, self.family);
        let t = Word::gen(n as i32 + 1);
        if w.is_identity() {
            return Ok(());
        }
        if *w == t || *w == t.inverse() {
            return self.ray_f(k, *w != t);
        }
        let m = max_gen([w]).max(2 * n + 1);
        let f = self.f_set[0].element.clone();
        let h = swap(fam, 1, n + 1, m + 1)?;
        let g = swap(fam, n, n + 1, m + 2)?;
        let w1 = h.core().apply(w);
        let w2 = f.core().apply(&g.core().apply(&w1));
        let top = m as i32 + 2;
        let rho = MappingClass::from_parts(
            fam,
            Aut::from_images(BTreeMap::from([(top, Word::gen(top).mul(&w2))]))?,
            BTreeMap::new(),
            None,
        )?;
        self.v("h", h.clone())?;
        self.ray_f(k, true)?;
        self.v("g", g.clone())?;
        self.f(0);
        self.v("ρg", rho.compose(&g)?)?;
        self.ray_f(k, false)?;
        self.v("gρ⁻¹", g.compose(&rho.inverse())?)?;
        self.f(0);
        self.v("gh", g.compose(&h)?)
    }
}

/// Factors an element supported on the loops of `[v_1, v_m]` as
/// `g f ν f g` in `(F V_K)^3`.
pub fn loops_factorize(u: &MappingClass, n: u32) -> Result<WitnessFactorization> {
    if !u.rays().is_empty() || u.shift().is_some() {
        return Err(Error::Rejected("the element is not supported on loops only".into()));
    }
    let mut chain = Chain::new(u.family(), n)?;
    if !u.is_identity() {
        let m = max_gen(u.core().images().values()).max(*u.core().touched().last().unwrap_or(&0) as u32).max(2 * n);
        chain.conjugate_out(u, m)?;
    }
    chain.finish(u.clone(), 3, "loops")
}

/// Factors the word map `φ(w, R_k.0)` into nine factors in `(F V_K)^5`.
pub fn ray_factorize(family: Family, k: u32, w: &Word, n: u32) -> Result<WitnessFactorization> {
    let target = ray_map(family, k, w.clone())?;
    let mut chain = Chain::new(family, n)?;
    chain.ray(k, w)?;
    chain.finish(target, 5, "ray")
}

/// Factors a product of ray words on rays beyond `K` (Millipede) as
/// `g f ν f g` in `(F V_K)^3`.
pub fn far_rays_factorize(u: &MappingClass, n: u32) -> Result<WitnessFactorization> {
    if !u.core().is_identity() || u.rays().keys().any(|k| near_rays(u.family(), n).contains(k)) {
        return Err(Error::Rejected("the element is not supported on rays beyond K".into()));
    }
    let mut chain = Chain::new(u.family(), n)?;
    if !u.is_identity() {
        chain.conjugate_out(u, max_gen(u.rays().values()).max(2 * n))?;
    }
    chain.finish(u.clone(), 3, "far rays")
}

/// Returns `u` with `u φ ∈ V_K`, together with `m` such that `u` is
/// totally supported on `[v_1, v_m]` and the rays meeting it.
///
/// Registered elements are compactly supported with explicit inverses, so
/// `u` is the identity when `φ` already lies in `V_K` and `φ⁻¹` otherwise.
pub fn approximate_inverse(phi: &MappingClass, n: u32) -> Result<(MappingClass, u32)> {
    check_family(phi.family())?;
    if vk_certificate(phi, n).is_ok() {
        return Ok((MappingClass::identity(phi.family()), n));
    }
    let u = phi.inverse();
    let m = max_gen(u.core().images().values().chain(u.rays().values()))
        .max(u.core().touched().last().copied().unwrap_or(0).max(0) as u32)
        .max(u.rays().keys().copied().max().unwrap_or(0))
        .max(n);
    Ok((u, m))
}

/// Exponent bound of the construction for each family.
pub fn power_bound(family: Family, n: u32) -> Result<u32> {
    match family {
        Family::LochNess => Ok(4),
        Family::Hungry(k) => Ok(4 + 5 * k),
        Family::Millipede => Ok(7 + 5 * n),
        other => Err(Error::Rejected(format!("{other} is not in the coarsely bounded family"))),
    }
}

/// Certified factorization of `φ` over `F ∪ V_K` for `K = [v_1, v_n]`.
pub fn full_witness(phi: &MappingClass, n: u32) -> Result<WitnessFactorization> {
    let fam = phi.family();
    let bound = power_bound(fam, n)?;
    let mut chain = Chain::new(fam, n)?;
    if phi.is_identity() {
        return chain.finish(phi.clone(), bound, "identity");
    }
    if vk_certificate(phi, n).is_ok() {
        chain.v("φ", phi.clone())?;
        return chain.finish(phi.clone(), bound, "in V_K");
    }
    let (u, _) = approximate_inverse(phi, n)?;
    let rest = u.compose(phi)?;
    // φ = u⁻¹ (u φ) and u⁻¹ = (rays beyond K) ∘ (rays off K) ∘ (loops).
    let uinv = u.inverse();
    let (rays, loops) = uinv.split();
    let near = near_rays(fam, n);
    let mut far = MappingClass::identity(fam);
    for (k, r) in &rays {
        if !near.contains(k) {
            far = r.compose(&far)?;
        }
    }
    if !far.is_identity() {
        chain.conjugate_out(&far, max_gen(far.rays().values()).max(2 * n))?;
    }
    for (k, r) in rays.iter().rev() {
        if near.contains(k) {
            chain.ray(*k, &r.ray_word(*k))?;
        }
    }
    if !loops.is_identity() {
        let m = max_gen(loops.core().images().values())
            .max(loops.core().touched().last().copied().unwrap_or(0).max(0) as u32)
            .max(2 * n);
        chain.conjugate_out(&loops, m)?;
    }
    chain.v("uφ", rest)?;
    let construction = match fam {
        Family::LochNess => "loch ness",
        Family::Hungry(_) => "hungry",
        _ => "millipede",
    };
    chain.finish(phi.clone(), bound, construction)
}
