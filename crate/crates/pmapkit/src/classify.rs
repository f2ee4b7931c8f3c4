//! Decision procedures for coarse boundedness, local coarse boundedness,
//! asymptotic dimension and the first-cohomology bound, read off an end
//! profile. Every verdict carries the rule that produced it.

use serde::{Deserialize, Serialize};

use crate::blueprint::{end_profile, Card, EndProfile, GraphBlueprint};
use crate::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum CbVerdict {
    CB,
    NotCB,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum LocallyCbVerdict {
    LocallyCB,
    NotLocallyCB,
}

/// The branch taken, as a stable tag plus the rule it applies.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Reason {
    pub tag: String,
    pub rule: String,
}

impl Reason {
    fn new(tag: &str, rule: &str) -> Self {
        Reason { tag: tag.into(), rule: rule.into() }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Asdim {
    #[serde(rename = "0")]
    Zero,
    #[serde(rename = "infinite")]
    Infinite,
    #[serde(rename = "discrete-case")]
    DiscreteCase,
    #[serde(rename = "not-defined")]
    NotDefined,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum H1Bound {
    Rank(u64),
    Sum(H1Sum),
}

/// Marker for a countable direct sum of copies of `ℤ`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum H1Sum {
    #[serde(rename = "countably-infinite-direct-sum")]
    CountablyInfiniteDirectSum,
}

impl H1Bound {
    pub const DIRECT_SUM: H1Bound = H1Bound::Sum(H1Sum::CountablyInfiniteDirectSum);
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum MapCbNote {
    MapCB,
    MapNotCB,
    #[serde(rename = "unknown")]
    Unknown,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct ClassificationReport {
    pub profile: EndProfile,
    pub cb_verdict: CbVerdict,
    pub cb_reason: Reason,
    pub locally_cb_verdict: LocallyCbVerdict,
    pub loc_cb_reason: Reason,
    pub asdim: Asdim,
    pub h1_lower_bound: H1Bound,
    pub map_cb_note: MapCbNote,
}

fn check(p: &EndProfile) -> Result<()> {
    p.check()?;
    if p.end_count.is_zero() && p.rank == Card::ONE {
        return Err(Error::Rejected("a circle is outside the classification".into()));
    }
    Ok(())
}

/// Coarse boundedness of the pure mapping class group.
pub fn classify_cb(p: &EndProfile) -> Result<(CbVerdict, Reason)> {
    check(p)?;
    use CbVerdict::*;
    Ok(match p.rank {
        Card::Finite(0) => (CB, Reason::new("rank-0", "a tree has trivial pure mapping class group")),
        Card::Finite(1) if p.is_lasso => (
            CB,
            Reason::new("lasso", "a rank-one graph gives a CB group if and only if it has exactly one end"),
        ),
        Card::Finite(1) => (
            NotCB,
            Reason::new(
                "rank1-multi-end",
                "a rank-one graph with at least two ends is not CB; the group splits as R ⋊ PMap(Γ_c^*) with R not CB",
            ),
        ),
        Card::Finite(_) => (
            NotCB,
            Reason::new("finite-rank≥2", "finite rank at least two: the group surjects onto Out(F_n), which is not CB"),
        ),
        _ if p.el_count >= Card::Finite(2) => (
            NotCB,
            Reason::new(
                "two-ends-accumulated",
                "at least two ends accumulated by loops give a nontrivial flux map to ℤ",
            ),
        ),
        _ if p.el_complement_discrete => (
            CB,
            Reason::new(
                "el-one-discrete",
                "one end accumulated by loops and E ∖ E_ℓ without accumulation point: CB",
            ),
        ),
        _ => (
            NotCB,
            Reason::new(
                "accumulation-point",
                "E ∖ E_ℓ containing an accumulation point gives an unbounded length function",
            ),
        ),
    })
}

/// Local coarse boundedness of the pure mapping class group.
pub fn classify_locally_cb(p: &EndProfile) -> Result<(LocallyCbVerdict, Reason)> {
    check(p)?;
    use LocallyCbVerdict::*;
    Ok(if p.rank.is_finite() {
        (LocallyCB, Reason::new("finite-rank", "finite rank: the group is discrete, so the identity is an open CB set"))
    } else if !p.el_count.is_finite() {
        (
            NotLocallyCB,
            Reason::new("infinite-el", "infinitely many ends accumulated by loops: not locally CB"),
        )
    } else if !p.infinite_end_components_of_complement_of_core.is_finite() {
        (
            NotLocallyCB,
            Reason::new(
                "infinite-components",
                "infinitely many components of Γ ∖ Γ_c with infinite end spaces: not locally CB",
            ),
        )
    } else {
        (
            LocallyCB,
            Reason::new(
                "finite-components",
                "finitely many ends accumulated by loops and only finitely many components with infinite end spaces",
            ),
        )
    })
}

/// Asymptotic dimension, defined for locally CB groups of infinite rank.
pub fn asdim(p: &EndProfile) -> Result<Asdim> {
    let (loc, _) = classify_locally_cb(p)?;
    Ok(if p.rank.is_finite() {
        Asdim::DiscreteCase
    } else if loc != LocallyCbVerdict::LocallyCB {
        Asdim::NotDefined
    } else if p.el_count == Card::ONE {
        Asdim::Zero
    } else {
        Asdim::Infinite
    })
}

/// Lower bound on the rank of `H^1(PMap; ℤ)` from independent flux maps.
pub fn h1_lower_bound(p: &EndProfile) -> Result<H1Bound> {
    check(p)?;
    Ok(match p.el_count {
        Card::Finite(n) if n >= 2 => H1Bound::Rank(n - 1),
        Card::Finite(_) => H1Bound::Rank(0),
        _ => H1Bound::DIRECT_SUM,
    })
}

/// What is known about the full mapping class group.
pub fn map_cb_note(p: &EndProfile) -> Result<MapCbNote> {
    check(p)?;
    Ok(if p.el_count >= Card::Finite(2) && p.end_count.is_finite() {
        MapCbNote::MapNotCB
    } else if p.el_count == Card::ONE && p.el_complement_discrete {
        MapCbNote::MapCB
    } else {
        MapCbNote::Unknown
    })
}

pub fn classify(p: &EndProfile) -> Result<ClassificationReport> {
    let (cb_verdict, cb_reason) = classify_cb(p)?;
    let (locally_cb_verdict, loc_cb_reason) = classify_locally_cb(p)?;
    Ok(ClassificationReport {
        profile: *p,
        cb_verdict,
        cb_reason,
        locally_cb_verdict,
        loc_cb_reason,
        asdim: asdim(p)?,
        h1_lower_bound: h1_lower_bound(p)?,
        map_cb_note: map_cb_note(p)?,
    })
}

pub fn classify_blueprint(b: &GraphBlueprint) -> Result<ClassificationReport> {
    classify(&end_profile(b)?)
}
