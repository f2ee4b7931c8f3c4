//! Free factors of infinite-rank free groups presented through a finite
//! window.
//!
//! The loops of a star of loop-rays are indexed by an arm and a position
//! `t ≥ 1` along the arm, plus a single center loop (`t = 0`). A windowed
//! factor at cut `c` is `T * H`, where `T` is generated by every loop beyond
//! position `c` on a chosen set of arms and `H` is a finitely generated
//! subgroup on the loops at positions `≤ c`.

use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};

use super::stallings::StallingsGraph;
use super::word::Word;
use crate::{Error, Result};

const ARM_STRIDE: i32 = 1 << 20;

/// Loop enumeration of a star with `arms` loop-rays. Arms 0 and 1 use the
/// integer line (`a_{-t}` and `a_t`), so two arms give the ladder indexing.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct ArmLayout {
    pub arms: u32,
}

impl ArmLayout {
    pub fn new(arms: u32) -> Result<Self> {
        if arms < 2 {
            return Err(Error::Rejected("a star needs at least two arms".into()));
        }
        Ok(ArmLayout { arms })
    }

    pub fn ladder() -> Self {
        ArmLayout { arms: 2 }
    }

    /// Generator index of the loop at position `t` on `arm`; `t = 0` is the
    /// center for every arm.
    pub fn letter(&self, arm: u32, t: u32) -> i32 {
        let t = t as i32;
        match (arm, t) {
            (_, 0) => 0,
            (0, t) => -t,
            (1, t) => t,
            (a, t) => a as i32 * ARM_STRIDE + t,
        }
    }

    /// Inverse of [`ArmLayout::letter`]; the center reports arm 0.
    pub fn locate(&self, gen: i32) -> Result<(u32, u32)> {
        let found = if gen == 0 {
            Some((0, 0))
        } else if gen < 0 {
            Some((0, gen.unsigned_abs()))
        } else if gen < ARM_STRIDE {
            Some((1, gen as u32))
        } else {
            let arm = (gen / ARM_STRIDE) as u32;
            let t = (gen % ARM_STRIDE) as u32;
            (arm < self.arms && t > 0).then_some((arm, t))
        };
        found.ok_or_else(|| Error::Rejected(format!("a{gen} is not a loop of this star")))
    }

    /// All loops at positions `≤ cut`.
    pub fn window(&self, cut: u32) -> BTreeSet<i32> {
        let mut s = BTreeSet::from([0]);
        for arm in 0..self.arms {
            for t in 1..=cut {
                s.insert(self.letter(arm, t));
            }
        }
        s
    }
}

/// How a windowed factor was obtained. Only these constructions are known
/// to produce free factors, so corank refuses anything else.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Provenance {
    /// Generated by a set of loops.
    Subgraph,
    /// Image of a registered factor under a registered automorphism.
    Image,
    /// Intersection of registered factors.
    Intersection,
    /// Arbitrary generators; free-factor status unknown.
    Unregistered,
}

impl Provenance {
    fn registered(self) -> bool {
        self != Provenance::Unregistered
    }
}

/// Corank value: finite, or infinite when the tails differ.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Corank {
    Finite(u64),
    Infinite,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WindowedFactor {
    layout: ArmLayout,
    cut: u32,
    tails: BTreeSet<u32>,
    gens: Vec<Word>,
    graph: StallingsGraph,
    provenance: Provenance,
}

impl WindowedFactor {
    /// The factor generated by the loops `letters` (all at positions `≤ cut`)
    /// together with every loop beyond `cut` on the arms in `tails`.
    pub fn subgraph(
        layout: ArmLayout,
        cut: u32,
        tails: BTreeSet<u32>,
        letters: impl IntoIterator<Item = i32>,
    ) -> Result<Self> {
        let gens: Vec<Word> = letters.into_iter().map(Word::gen).collect();
        Self::build(layout, cut, tails, gens, Provenance::Subgraph)
    }

    /// A factor from arbitrary generators. It can be intersected and tested
    /// for membership, but corank refuses it.
    pub fn unregistered(layout: ArmLayout, cut: u32, tails: BTreeSet<u32>, gens: Vec<Word>) -> Result<Self> {
        Self::build(layout, cut, tails, gens, Provenance::Unregistered)
    }

    /// Used by registered automorphism images. The caller vouches for the
    /// construction.
    pub fn image_of(
        source: &WindowedFactor,
        cut: u32,
        gens: Vec<Word>,
    ) -> Result<Self> {
        let prov = if source.provenance.registered() { Provenance::Image } else { Provenance::Unregistered };
        Self::build(source.layout, cut, source.tails.clone(), gens, prov)
    }

    fn build(
        layout: ArmLayout,
        cut: u32,
        tails: BTreeSet<u32>,
        gens: Vec<Word>,
        provenance: Provenance,
    ) -> Result<Self> {
        if let Some(&a) = tails.iter().find(|&&a| a >= layout.arms) {
            return Err(Error::Rejected(format!("arm {a} does not exist")));
        }
        for w in &gens {
            for g in w.gens() {
                let (_, t) = layout.locate(g)?;
                if t > cut {
                    return Err(Error::Rejected(format!(
                        "generator {w} leaves the window at cut {cut}"
                    )));
                }
            }
        }
        let graph = StallingsGraph::from_generators(&gens);
        let gens = graph.basis();
        Ok(WindowedFactor { layout, cut, tails, gens, graph, provenance })
    }

    pub fn layout(&self) -> ArmLayout {
        self.layout
    }

    pub fn cut(&self) -> u32 {
        self.cut
    }

    pub fn tails(&self) -> &BTreeSet<u32> {
        &self.tails
    }

    /// A free basis of the finite part.
    pub fn gens(&self) -> &[Word] {
        &self.gens
    }

    pub fn provenance(&self) -> Provenance {
        self.provenance
    }

    /// Rank of the finite part `H`.
    pub fn finite_rank(&self) -> usize {
        self.graph.rank()
    }

    /// The same subgroup presented at a larger cut: tail loops between the
    /// old and new cut move into the finite part.
    pub fn recut(&self, cut: u32) -> Result<Self> {
        if cut < self.cut {
            return Err(Error::Internal("recut can only enlarge the window".into()));
        }
        if cut == self.cut {
            return Ok(self.clone());
        }
        let mut gens = self.gens.clone();
        for &arm in &self.tails {
            for t in self.cut + 1..=cut {
                gens.push(Word::gen(self.layout.letter(arm, t)));
            }
        }
        Self::build(self.layout, cut, self.tails.clone(), gens, self.provenance)
    }

    /// Membership of an element written with loops at any positions.
    pub fn contains(&self, w: &Word) -> Result<bool> {
        let mut need = self.cut;
        for g in w.gens() {
            need = need.max(self.layout.locate(g)?.1);
        }
        let this = self.recut(need)?;
        Ok(this.graph.contains(w))
    }

    /// Whether `self ≤ other`.
    pub fn is_subgroup_of(&self, other: &WindowedFactor) -> Result<bool> {
        let (a, b) = common_cut(self, other)?;
        Ok(a.tails.is_subset(&b.tails) && a.graph.is_subgroup_of(&b.graph))
    }

    /// Kurosh intersection: tails intersect, finite parts meet in a pullback.
    pub fn intersect(&self, other: &WindowedFactor) -> Result<Self> {
        let (a, b) = common_cut(self, other)?;
        let graph = a.graph.intersect(&b.graph);
        let prov = if a.provenance.registered() && b.provenance.registered() {
            Provenance::Intersection
        } else {
            Provenance::Unregistered
        };
        let tails = a.tails.intersection(&b.tails).copied().collect();
        Self::build(a.layout, a.cut, tails, graph.basis(), prov)
    }

    /// Corank of `small` in `big`. Both must be registered and `small ≤ big`.
    pub fn cork(big: &WindowedFactor, small: &WindowedFactor) -> Result<Corank> {
        if !big.provenance.registered() || !small.provenance.registered() {
            return Err(Error::Rejected(
                "corank needs registered free factors".into(),
            ));
        }
        let (b, s) = common_cut(big, small)?;
        if !s.tails.is_subset(&b.tails) || !s.graph.is_subgroup_of(&b.graph) {
            return Err(Error::Rejected("corank needs nested factors".into()));
        }
        if s.tails != b.tails {
            return Ok(Corank::Infinite);
        }
        let (rb, rs) = (b.graph.rank(), s.graph.rank());
        if rs > rb {
            return Err(Error::Internal("nested factor has larger rank".into()));
        }
        Ok(Corank::Finite((rb - rs) as u64))
    }
}

fn common_cut(a: &WindowedFactor, b: &WindowedFactor) -> Result<(WindowedFactor, WindowedFactor)> {
    if a.layout != b.layout {
        return Err(Error::Rejected("factors live in different groups".into()));
    }
    let cut = a.cut.max(b.cut);
    Ok((a.recut(cut)?, b.recut(cut)?))
}
