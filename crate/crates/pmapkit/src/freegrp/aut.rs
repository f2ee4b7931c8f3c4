use std::collections::{BTreeMap, BTreeSet};

use serde::{Deserialize, Serialize};

use super::word::Word;
use crate::{Error, Result};

/// A finitely supported automorphism of a free group on an integer-indexed
/// basis, stored together with its inverse.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "AutRepr", into = "AutRepr")]
pub struct Aut {
    fwd: BTreeMap<i32, Word>,
    bwd: BTreeMap<i32, Word>,
}

#[derive(Serialize, Deserialize)]
struct AutRepr {
    images: BTreeMap<i32, Word>,
    inverse: BTreeMap<i32, Word>,
}

impl From<Aut> for AutRepr {
    fn from(a: Aut) -> Self {
        AutRepr { images: a.fwd, inverse: a.bwd }
    }
}

impl TryFrom<AutRepr> for Aut {
    type Error = Error;
    fn try_from(r: AutRepr) -> Result<Aut> {
        Aut::from_parts(r.images, r.inverse)
    }
}

fn strip(mut m: BTreeMap<i32, Word>) -> BTreeMap<i32, Word> {
    m.retain(|&g, w| *w != Word::gen(g));
    m
}

fn image_in(map: &BTreeMap<i32, Word>, g: i32) -> Word {
    map.get(&g).cloned().unwrap_or_else(|| Word::gen(g))
}

impl Aut {
    pub fn identity() -> Self {
        Aut::default()
    }

    /// Builds the automorphism with the given basis images, computing the
    /// inverse by labeled folding. Fails if the images do not form a basis.
    pub fn from_images(images: BTreeMap<i32, Word>) -> Result<Aut> {
        let fwd = strip(images);
        match invert(&fwd) {
            Some(bwd) => Ok(Aut { fwd, bwd: strip(bwd) }),
            None => Err(Error::Rejected(
                "basis images do not define an automorphism".to_string(),
            )),
        }
    }

    /// Builds an automorphism from both directions, checking they are inverse.
    pub fn from_parts(fwd: BTreeMap<i32, Word>, bwd: BTreeMap<i32, Word>) -> Result<Aut> {
        let a = Aut { fwd: strip(fwd), bwd: strip(bwd) };
        let keys: BTreeSet<i32> = a.touched();
        for g in keys {
            let x = Word::gen(g);
            if a.apply(&a.apply_inverse(&x)) != x || a.apply_inverse(&a.apply(&x)) != x {
                return Err(Error::Rejected(format!(
                    "images and inverse images disagree at a{g}"
                )));
            }
        }
        Ok(a)
    }

    /// The basis permutation `a_i ↦ a_{σ(i)}`.
    pub fn permutation(sigma: &BTreeMap<i32, i32>) -> Result<Aut> {
        let mut fwd = BTreeMap::new();
        let mut bwd = BTreeMap::new();
        for (&i, &j) in sigma {
            if bwd.insert(j, Word::gen(i)).is_some() {
                return Err(Error::Rejected("map on indices is not injective".into()));
            }
            fwd.insert(i, Word::gen(j));
        }
        let keys: BTreeSet<i32> = fwd.keys().copied().collect();
        let vals: BTreeSet<i32> = bwd.keys().copied().collect();
        if keys != vals {
            return Err(Error::Rejected("map on indices is not a permutation".into()));
        }
        Ok(Aut { fwd: strip(fwd), bwd: strip(bwd) })
    }

    pub fn images(&self) -> &BTreeMap<i32, Word> {
        &self.fwd
    }

    pub fn inverse_images(&self) -> &BTreeMap<i32, Word> {
        &self.bwd
    }

    pub fn image(&self, g: i32) -> Word {
        image_in(&self.fwd, g)
    }

    pub fn preimage(&self, g: i32) -> Word {
        image_in(&self.bwd, g)
    }

    pub fn apply(&self, w: &Word) -> Word {
        w.substitute(|g| self.image(g))
    }

    pub fn apply_inverse(&self, w: &Word) -> Word {
        w.substitute(|g| self.preimage(g))
    }

    pub fn is_identity(&self) -> bool {
        self.fwd.is_empty()
    }

    pub fn support(&self) -> BTreeSet<i32> {
        self.fwd.keys().copied().collect()
    }

    /// Every generator appearing in the support, the images or the inverse
    /// images.
    pub fn touched(&self) -> BTreeSet<i32> {
        let mut s = BTreeSet::new();
        for (g, w) in self.fwd.iter().chain(self.bwd.iter()) {
            s.insert(*g);
            s.extend(w.gens());
        }
        s
    }

    /// `self ∘ other`.
    pub fn compose(&self, other: &Aut) -> Aut {
        let keys: BTreeSet<i32> = self.fwd.keys().chain(other.fwd.keys()).copied().collect();
        let fwd = keys.into_iter().map(|g| (g, self.apply(&other.image(g)))).collect();
        let keys: BTreeSet<i32> = self.bwd.keys().chain(other.bwd.keys()).copied().collect();
        let bwd = keys
            .into_iter()
            .map(|g| (g, other.apply_inverse(&self.preimage(g))))
            .collect();
        Aut { fwd: strip(fwd), bwd: strip(bwd) }
    }

    pub fn inverse(&self) -> Aut {
        Aut { fwd: self.bwd.clone(), bwd: self.fwd.clone() }
    }

    /// Conjugates by the basis relabeling `σ`: the result is `σ ∘ self ∘ σ⁻¹`.
    pub fn relabel(&self, sigma: impl Fn(i32) -> i32) -> Aut {
        let fwd = self.fwd.iter().map(|(&g, w)| (sigma(g), w.map_gens(&sigma))).collect();
        let bwd = self.bwd.iter().map(|(&g, w)| (sigma(g), w.map_gens(&sigma))).collect();
        Aut { fwd: strip(fwd), bwd: strip(bwd) }
    }
}

struct LEdge {
    from: usize,
    to: usize,
    gen: i32,
    label: Word,
}

/// Inverts the endomorphism `a_g ↦ images[g]` (identity on unlisted
/// generators) by folding the petal graph of the images while carrying
/// source-side labels. Returns `None` unless it is an automorphism.
///
/// Invariant: reading any closed path at the basepoint, the product of the
/// labels maps to the reduced word spelled by the path.
pub fn invert(images: &BTreeMap<i32, Word>) -> Option<BTreeMap<i32, Word>> {
    let mut window: BTreeSet<i32> = images.keys().copied().collect();
    for w in images.values() {
        window.extend(w.gens());
    }
    let mut edges: Vec<Option<LEdge>> = Vec::new();
    let mut vertices = 1usize;
    for &x in &window {
        let u = images.get(&x).cloned().unwrap_or_else(|| Word::gen(x));
        if u.is_identity() {
            return None;
        }
        let letters = u.letters();
        let mut cur = 0;
        for (i, l) in letters.iter().enumerate() {
            let next = if i + 1 == letters.len() {
                0
            } else {
                vertices += 1;
                vertices - 1
            };
            let lab = if i == 0 { Word::gen(x) } else { Word::identity() };
            let e = if l.inv {
                LEdge { from: next, to: cur, gen: l.gen, label: lab.inverse() }
            } else {
                LEdge { from: cur, to: next, gen: l.gen, label: lab }
            };
            edges.push(Some(e));
            cur = next;
        }
    }

    while let Some((u, (e1, out1), (e2, out2))) = find_fold(&edges) {
        let read = |e: &LEdge, out: bool| if out { e.label.clone() } else { e.label.inverse() };
        let other = |e: &LEdge, out: bool| if out { e.to } else { e.from };
        let (a, b) = (edges[e1].as_ref()?, edges[e2].as_ref()?);
        let (s1, s2) = (read(a, out1), read(b, out2));
        let (v1, v2) = (other(a, out1), other(b, out2));
        if v1 == v2 {
            if s1 != s2 {
                return None;
            }
        } else if v2 != 0 && v2 != u {
            gauge(&mut edges, v2, &s2.inverse().mul(&s1));
            merge(&mut edges, v2, v1);
        } else if v1 != 0 && v1 != u {
            gauge(&mut edges, v1, &s1.inverse().mul(&s2));
            merge(&mut edges, v1, v2);
        } else if v1 == u {
            gauge(&mut edges, u, &s1.inverse().mul(&s2));
            merge(&mut edges, u, 0);
        } else {
            gauge(&mut edges, u, &s2.inverse().mul(&s1));
            merge(&mut edges, u, 0);
        }
        edges[e2] = None;
    }

    let mut inverse = BTreeMap::new();
    for e in edges.iter().flatten() {
        if e.from != 0 || e.to != 0 || inverse.insert(e.gen, e.label.clone()).is_some() {
            return None;
        }
    }
    if inverse.keys().copied().collect::<BTreeSet<_>>() != window {
        return None;
    }
    for (&g, w) in &inverse {
        let back = w.substitute(|h| images.get(&h).cloned().unwrap_or_else(|| Word::gen(h)));
        if back != Word::gen(g) {
            return None;
        }
    }
    Some(inverse)
}

type HalfEdge = (usize, bool);

fn find_fold(edges: &[Option<LEdge>]) -> Option<(usize, HalfEdge, HalfEdge)> {
    let mut seen: BTreeMap<(usize, i32, bool), usize> = BTreeMap::new();
    for (i, e) in edges.iter().enumerate() {
        let Some(e) = e else { continue };
        for (v, out) in [(e.from, true), (e.to, false)] {
            if let Some(&j) = seen.get(&(v, e.gen, out)) {
                return Some((v, (j, out), (i, out)));
            }
            seen.insert((v, e.gen, out), i);
        }
    }
    None
}

fn gauge(edges: &mut [Option<LEdge>], z: usize, delta: &Word) {
    let dinv = delta.inverse();
    for e in edges.iter_mut().flatten() {
        if e.to == z {
            e.label = e.label.mul(delta);
        }
        if e.from == z {
            e.label = dinv.mul(&e.label);
        }
    }
}

fn merge(edges: &mut [Option<LEdge>], from: usize, into: usize) {
    for e in edges.iter_mut().flatten() {
        if e.from == from {
            e.from = into;
        }
        if e.to == from {
            e.to = into;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn w(s: &str) -> Word {
        s.parse().unwrap()
    }

    fn imgs(pairs: &[(i32, &str)]) -> BTreeMap<i32, Word> {
        pairs.iter().map(|&(g, s)| (g, w(s))).collect()
    }

    #[test]
    fn transvection_inverse() {
        let a = Aut::from_images(imgs(&[(1, "a1 a2")])).unwrap();
        assert_eq!(a.preimage(1), w("a1 A2"));
        assert!(a.compose(&a.inverse()).is_identity());
    }

    #[test]
    fn permutation_and_conjugation() {
        let a = Aut::from_images(imgs(&[(1, "a2"), (2, "a1")])).unwrap();
        assert_eq!(a.inverse(), a);
        let c = Aut::from_images(imgs(&[(1, "A3 a1 a3"), (2, "A3 a2 a3")])).unwrap();
        assert_eq!(c.preimage(2), w("a3 a2 A3"));
    }

    #[test]
    fn non_automorphisms_are_rejected() {
        assert!(Aut::from_images(imgs(&[(1, "a1 a1")])).is_err());
        assert!(Aut::from_images(imgs(&[(1, "a2")])).is_err());
        assert!(Aut::from_images(imgs(&[(1, "a1 a2 a1 A2")])).is_err());
        assert!(Aut::from_images(imgs(&[(1, "")])).is_err());
    }

    #[test]
    fn long_nielsen_product_inverts() {
        let t1 = Aut::from_images(imgs(&[(1, "a1 a2")])).unwrap();
        let t2 = Aut::from_images(imgs(&[(2, "a3 a2 a1")])).unwrap();
        let t3 = Aut::from_images(imgs(&[(3, "A1 a3 a2")])).unwrap();
        let p = t1.compose(&t2).compose(&t3).compose(&t1);
        let q = Aut::from_images(p.images().clone()).unwrap();
        assert_eq!(p, q);
    }

    #[test]
    fn relabel_conjugates() {
        let c = Aut::from_images(imgs(&[(1, "a1 a2")])).unwrap();
        let r = c.relabel(|g| g + 10);
        assert_eq!(r.image(11), w("a11 a12"));
        assert_eq!(r.preimage(11), w("a11 A12"));
    }
}
