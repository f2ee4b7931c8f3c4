use serde::{Deserialize, Serialize};

use crate::blueprint::{truncate, GraphBlueprint};
use crate::freegrp::{Aut, Word};
use crate::mcg::{Family, MappingClass};
use crate::{Error, Result};

/// The comb `T` hanging off the Loch Ness core at `v_1`, with tooth `k`
/// attached at spine distance `k`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CombContext {
    pub family: Family,
}

/// `H_n = ℓ⁻¹([0, n])` is carried by the `n`-neighborhood `Δ_n` of the
/// core, which is properly homotopy equivalent to `Γ_M`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct BallCertificate {
    pub n: u32,
    /// Edges of `T` leaving `Δ_n`, counted on a truncation.
    pub stubs: u32,
    pub monster: Family,
}

fn count_combs(b: &GraphBlueprint) -> Result<(u32, bool)> {
    // (components with infinite end space, whether the rest is Loch Ness)
    match b {
        GraphBlueprint::LochNess => Ok((0, true)),
        GraphBlueprint::Comb(_) | GraphBlueprint::TreeSpray(None) => Ok((1, false)),
        GraphBlueprint::Wedge { left, right, .. } => {
            let (a, l) = count_combs(left)?;
            let (c, r) = count_combs(right)?;
            Ok((a + c, l || r))
        }
        _ => Ok((0, false)),
    }
}

impl CombContext {
    /// The context for a registered family.
    pub fn for_family(family: Family) -> Result<Self> {
        match family {
            Family::Comb => Ok(CombContext { family }),
            other => Err(Error::Rejected(format!(
                "{other} has no component outside the core with infinite end space"
            ))),
        }
    }

    /// Finds the unique component of `Γ ∖ Γ_c` with infinite end space.
    pub fn from_blueprint(b: &GraphBlueprint) -> Result<Self> {
        if *b == Family::Comb.blueprint() {
            return Self::for_family(Family::Comb);
        }
        match count_combs(b)? {
            (0, _) => Err(Error::Rejected("no component outside the core has infinite end space".into())),
            (1, true) => Err(Error::Unsupported(
                "only the Loch Ness graph with a comb of rays at v1 has registered elements".into(),
            )),
            (1, false) => Err(Error::Rejected("the core is not the Loch Ness graph".into())),
            (k, _) => Err(Error::Rejected(format!(
                "{k} components outside the core have infinite end space; the length function needs exactly one"
            ))),
        }
    }

    fn check(&self, g: &MappingClass) -> Result<()> {
        if g.family() != self.family {
            return Err(Error::Rejected(format!("{} is not an element on {}", g.family(), self.family)));
        }
        Ok(())
    }

    /// `ℓ(g) = 1 + max{k : tooth k carries a nontrivial word}`, or 0.
    ///
    /// A line between two ends of `T` keeps its class exactly when both
    /// ends carry the same ray word; the spine end carries the trivial word
    /// for every registered element, and the line through tooth `k` stays
    /// at distance `k` from the core.
    pub fn length(&self, g: &MappingClass) -> Result<u32> {
        self.check(g)?;
        Ok(g.rays().iter().filter(|(_, w)| !w.is_identity()).map(|(&k, _)| k + 1).max().unwrap_or(0))
    }

    /// `d(g, h) = ℓ(g⁻¹ h)`.
    pub fn distance(&self, g: &MappingClass, h: &MappingClass) -> Result<u32> {
        self.length(&g.inverse().compose(h)?)
    }

    /// Identifies `Δ_n ≃ Γ_M` by counting the edges of `T` that leave the
    /// `n`-neighborhood of the core on a truncation.
    pub fn cb_ball(&self, n: u32) -> Result<BallCertificate> {
        let t = truncate(&self.family.blueprint(), n)?;
        let stubs = t.vertices.iter().filter(|v| v.label.starts_with("b.") && v.distance == n).count() as u32;
        let monster = if stubs == 0 { Family::LochNess } else { Family::Hungry(stubs) };
        Ok(BallCertificate { n, stubs, monster })
    }
}

/// An element `g` with `ℓ(g) = n + 1` and `ℓ(f⁻¹g) > n` for every `f` in
/// `fs`, so `g ∉ F·H_n`.
///
/// Lines of the comb sit at distance at least 1, so no element has length
/// 1 and `n ≥ 1` is required.
pub fn bounded_geometry_witness(ctx: &CombContext, n: u32, fs: &[MappingClass]) -> Result<MappingClass> {
    if n == 0 {
        return Err(Error::Rejected("H_1 = H_0 on the comb: no line sits at distance 0".into()));
    }
    for f in fs {
        ctx.check(f)?;
    }
    for j in 1..=fs.len() as i64 + 1 {
        let w = Word::gen(1).pow(j);
        let g = MappingClass::from_parts(ctx.family, Aut::identity(), [(n, w)].into(), None)?;
        let mut ok = true;
        for f in fs {
            if ctx.distance(f, &g)? <= n {
                ok = false;
                break;
            }
        }
        if ok {
            return Ok(g);
        }
    }
    Err(Error::Internal("every candidate word was excluded".into()))
}
