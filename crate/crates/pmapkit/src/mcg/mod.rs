//! Pure mapping classes on the registered graph families.
//!
//! Elements are written as expressions over word maps, loop swaps, loop
//! shifts and core automorphisms (see [`Expr`]) and reduced to a
//! [`MappingClass`] normal form. Two elements are equal exactly when their
//! normal forms are, which in turn is equality of the induced automorphisms
//! at the far basepoint and at every ray end, plus equal shift powers.
//!
//! Word maps push off spine edges: a map `W(w, E_j)` becomes conjugation by
//! `w` of every loop and ray on the far side of the edge, read from any
//! basepoint. The loop and ray words of the result are recovered by
//! [`MappingClass::split`].

mod element;
mod expr;
mod family;

use std::collections::BTreeMap;

pub use element::{Basepoint, InducedAut, MappingClass, ShiftPart};
pub use expr::{Expr, ShiftSpec, Slot, WordMap};
pub use family::Family;

use crate::freegrp::{Aut, Word};
use crate::{reject, unsupported, Result};

/// Parses and normalizes an element expression.
pub fn parse_element(family: Family, text: &str) -> Result<MappingClass> {
    normalize(family, &text.parse()?)
}

/// Normal form of an expression. `g * f` is `g ∘ f`.
pub fn normalize(family: Family, e: &Expr) -> Result<MappingClass> {
    family.validate()?;
    match e {
        Expr::Id => Ok(MappingClass::identity(family)),
        Expr::Product(items) => {
            let mut acc = MappingClass::identity(family);
            for item in items {
                acc = acc.compose(&normalize(family, item)?)?;
            }
            Ok(acc)
        }
        Expr::Power(inner, k) => normalize(family, inner)?.pow(*k),
        Expr::Words(maps) => {
            let w = WordData::new(family, maps)?;
            if family.is_one_ended() {
                let rays = w.ray_keys().into_iter().map(|k| (k, w.ray_conjugator(k))).collect();
                MappingClass::from_parts(family, w.core()?, rays, None)
            } else {
                MappingClass::from_parts(family, w.core()?, BTreeMap::new(), None)
            }
        }
        Expr::Swap { n, m1, m2 } => loop_swap(family, *n, *m1, *m2),
        Expr::Shift(s) => loop_shift(family, *s),
        Expr::Core(images) => MappingClass::from_parts(family, Aut::from_images(images.clone())?, BTreeMap::new(), None),
    }
}

/// The loop swap exchanging the `n` loops from `a_{m1}` with the `n` loops
/// from `a_{m2}`.
pub fn loop_swap(family: Family, n: u32, m1: i64, m2: i64) -> Result<MappingClass> {
    if let Family::Star(_) = family {
        return unsupported("loop swaps on stars with three or more arms are not registered");
    }
    if m2 - m1 < n as i64 {
        return reject(format!("LS({n},{m1},{m2}) needs m2 - m1 ≥ n"));
    }
    if family.is_one_ended() && m1 < 1 {
        return reject(format!("LS({n},{m1},{m2}) needs m1 ≥ 1"));
    }
    let mut sigma = BTreeMap::new();
    for t in 0..n as i64 {
        let (x, y) = (to_gen(m1 + t)?, to_gen(m2 + t)?);
        sigma.insert(x, y);
        sigma.insert(y, x);
    }
    MappingClass::from_parts(family, Aut::permutation(&sigma)?, BTreeMap::new(), None)
}

/// The loop shift moving the loops at positions `≡ offset (mod stride)`
/// along the line by `stride · power`.
pub fn loop_shift(family: Family, s: ShiftSpec) -> Result<MappingClass> {
    if family.is_one_ended() {
        return reject(format!("{family} has a single end accumulated by loops, so it has no loop shifts"));
    }
    if s.stride == 0 || s.offset >= s.stride {
        return reject("a shift needs stride ≥ 1 and offset < stride");
    }
    let part = ShiftPart { line: s.line, stride: s.stride, powers: BTreeMap::from([(s.offset, s.power)]) };
    MappingClass::from_parts(family, Aut::identity(), BTreeMap::new(), Some(part))
}

/// Automorphism induced at `bp` by the expression, computed factor by
/// factor. Every factor must fix the basepoint. This never consults the
/// normal form and so serves as an independent check of it.
pub fn induced(family: Family, e: &Expr, bp: Basepoint) -> Result<InducedAut> {
    if !family.is_one_ended() {
        return reject("induced tables are read on one-ended families; use images for stars");
    }
    check_basepoint(family, bp)?;
    match e {
        Expr::Id => Ok(InducedAut::identity()),
        Expr::Product(items) => {
            let mut acc = InducedAut::identity();
            for item in items {
                acc = acc.compose(&induced(family, item, bp)?);
            }
            Ok(acc)
        }
        Expr::Power(inner, k) => Ok(induced(family, inner, bp)?.pow(*k)),
        Expr::Words(maps) => {
            let w = WordData::new(family, maps)?;
            let conjugator = match bp {
                Basepoint::Far => Word::identity(),
                Basepoint::Ray(k) => w.ray_conjugator(k),
                Basepoint::Vertex(j) => w.path_to_far(j),
            };
            Ok(InducedAut { conjugator, core: w.core()? })
        }
        Expr::Swap { n, m1, m2 } => {
            if let Basepoint::Vertex(j) = bp {
                let inside = |m: i64| (m..m + *n as i64).contains(&j);
                if inside(*m1) || inside(*m2) {
                    return reject(format!("basepoint v{j} lies inside the swapped blocks"));
                }
            }
            let g = loop_swap(family, *n, *m1, *m2)?;
            Ok(InducedAut { conjugator: Word::identity(), core: g.core().clone() })
        }
        Expr::Core(_) => {
            let g = normalize(family, e)?;
            g.induced(bp).map(|t| InducedAut { conjugator: Word::identity(), core: t.core })
        }
        Expr::Shift(s) => loop_shift(family, *s).map(|_| InducedAut::identity()),
    }
}

fn check_basepoint(family: Family, bp: Basepoint) -> Result<()> {
    match bp {
        Basepoint::Ray(k) if !family.has_ray(k) => reject(format!("{family} has no ray R{k}")),
        Basepoint::Vertex(j) if j < first_position(family) => reject(format!("{family} has no vertex v{j}")),
        _ => Ok(()),
    }
}

fn first_position(family: Family) -> i64 {
    match family {
        Family::Hungry(_) => 0,
        _ => 1,
    }
}

fn to_gen(i: i64) -> Result<i32> {
    i32::try_from(i).or_else(|_| reject(format!("loop index {i} out of range")))
}

/// The slots of a simultaneous word map, sorted by kind.
struct WordData {
    family: Family,
    edges: BTreeMap<i64, Word>,
    loop_start: BTreeMap<i32, Word>,
    loop_end: BTreeMap<i32, Word>,
    rays: BTreeMap<u32, BTreeMap<u32, Word>>,
}

impl WordData {
    fn new(family: Family, maps: &[WordMap]) -> Result<Self> {
        let mut d = WordData {
            family,
            edges: BTreeMap::new(),
            loop_start: BTreeMap::new(),
            loop_end: BTreeMap::new(),
            rays: BTreeMap::new(),
        };
        let mut seen = std::collections::BTreeSet::new();
        for m in maps {
            if !seen.insert(m.slot) {
                return reject(format!("slot {} used twice in one multi-word map", m.slot));
            }
            if let Some(g) = m.word.gens().into_iter().find(|&g| !family.is_loop(g)) {
                return reject(format!("a{g} is not a loop of {family}"));
            }
            let w = if m.reversed { m.word.inverse() } else { m.word.clone() };
            match m.slot {
                Slot::Loop { index, end } => {
                    if !family.is_loop(index) {
                        return reject(format!("{family} has no loop a{index}"));
                    }
                    let table = if end == 0 { &mut d.loop_start } else { &mut d.loop_end };
                    table.insert(index, w);
                }
                Slot::Ray { ray, sub } => {
                    if !family.has_ray(ray) {
                        return reject(format!("{family} has no ray R{ray}"));
                    }
                    d.rays.entry(ray).or_default().insert(sub, w);
                }
                Slot::Edge(j) => {
                    match family {
                        Family::Comb => return unsupported("word maps on spine edges of the comb family"),
                        Family::Ladder | Family::Star(_) => {
                            return unsupported("word maps on spine edges of star families")
                        }
                        _ => {}
                    }
                    if j < first_position(family) {
                        return reject(format!("{family} has no spine edge E{j}"));
                    }
                    d.edges.insert(j, w);
                }
            }
        }
        Ok(d)
    }

    /// Word read along the mapped spine from `v_p` out to the far end.
    fn path_to_far(&self, p: i64) -> Word {
        self.edges.range(p..).fold(Word::identity(), |acc, (_, w)| acc.mul(w))
    }

    fn ray_conjugator(&self, k: u32) -> Word {
        let along = self
            .rays
            .get(&k)
            .map(|subs| subs.values().rev().fold(Word::identity(), |acc, w| acc.mul(w)))
            .unwrap_or_default();
        along.mul(&self.path_to_far(self.family.ray_position(k)))
    }

    fn ray_keys(&self) -> Vec<u32> {
        let mut keys: Vec<u32> = self.rays.keys().copied().collect();
        if let Some((&last, _)) = self.edges.iter().next_back() {
            keys.extend(self.family.rays_up_to(last));
        }
        keys.sort_unstable();
        keys.dedup();
        keys
    }

    /// Induced automorphism at the far basepoint.
    fn core(&self) -> Result<Aut> {
        let mut loops: std::collections::BTreeSet<i32> =
            self.loop_start.keys().chain(self.loop_end.keys()).copied().collect();
        if self.family.is_one_ended() {
            if let Some((&last, _)) = self.edges.iter().next_back() {
                loops.extend(1..=to_gen(last)?);
            }
        }
        let mut images = BTreeMap::new();
        for i in loops {
            let pre = self.loop_start.get(&i).cloned().unwrap_or_default();
            let post = self.loop_end.get(&i).cloned().unwrap_or_default();
            let looped = pre.mul(&Word::gen(i)).mul(&post);
            let q = self.path_to_far(i as i64);
            images.insert(i, q.conjugate(&looped));
        }
        Aut::from_images(images)
    }
}
