use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::blueprint::{FiniteGraph, GraphBlueprint};
use crate::freegrp::ArmLayout;
use crate::{Error, Result};

/// The graphs on which mapping classes can be written down.
///
/// The one-ended families share the Loch Ness spine `v1, w1, v2, ...` with
/// loop `a_i` at `v_i`. Rays sit at `w0` for Hungry, at `v_k` for Millipede,
/// and for Comb a comb of rays hangs at `v1` with tooth `k` at distance `k`.
/// The star families join `n` loop-rays at a center loop `a0`; the ladder is
/// the star with two arms indexed by the integers.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Family {
    LochNess,
    Hungry(u32),
    Millipede,
    Comb,
    Ladder,
    Star(u32),
}

impl Family {
    pub fn is_one_ended(self) -> bool {
        !matches!(self, Family::Ladder | Family::Star(_))
    }

    /// Loop layout of a star family.
    pub fn layout(self) -> Option<ArmLayout> {
        match self {
            Family::Ladder => Some(ArmLayout::ladder()),
            Family::Star(n) => Some(ArmLayout { arms: n }),
            _ => None,
        }
    }

    pub fn validate(self) -> Result<()> {
        match self {
            Family::Hungry(0) => Err(Error::Rejected("Hungry needs N ≥ 1".into())),
            Family::Star(n) if n < 2 => Err(Error::Rejected("a star needs at least two arms".into())),
            _ => Ok(()),
        }
    }

    pub fn is_loop(self, g: i32) -> bool {
        match self.layout() {
            Some(l) => l.locate(g).is_ok(),
            None => g >= 1,
        }
    }

    pub fn has_ray(self, k: u32) -> bool {
        match self {
            Family::Hungry(n) => (1..=n).contains(&k),
            Family::Millipede | Family::Comb => k >= 1,
            _ => false,
        }
    }

    /// Spine position where ray `k` meets the core side: `0` is `w0`.
    pub(crate) fn ray_position(self, k: u32) -> i64 {
        match self {
            Family::Millipede => k as i64,
            Family::Comb => 1,
            _ => 0,
        }
    }

    /// Rays meeting the spine at positions `≤ j`, when finitely many.
    pub(crate) fn rays_up_to(self, j: i64) -> Vec<u32> {
        match self {
            Family::Hungry(n) => (1..=n).collect(),
            Family::Millipede => (1..=j.max(0) as u32).collect(),
            _ => vec![],
        }
    }

    pub fn blueprint(self) -> GraphBlueprint {
        match self {
            Family::LochNess => GraphBlueprint::LochNess,
            Family::Hungry(n) => GraphBlueprint::Hungry(n),
            Family::Millipede => GraphBlueprint::Millipede,
            Family::Comb => GraphBlueprint::wedge(
                GraphBlueprint::LochNess,
                GraphBlueprint::comb(GraphBlueprint::ray()),
                ("root", "root"),
            ),
            Family::Ladder => GraphBlueprint::Ladder,
            Family::Star(n) => {
                let mut b = GraphBlueprint::Finite(FiniteGraph::new(1, vec![(0, 0)], vec![]));
                for _ in 0..n {
                    b = GraphBlueprint::wedge(b, GraphBlueprint::LochNess, ("root", "root"));
                }
                b
            }
        }
    }
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Family::LochNess => f.write_str("LochNess"),
            Family::Hungry(n) => write!(f, "Hungry({n})"),
            Family::Millipede => f.write_str("Millipede"),
            Family::Comb => f.write_str("Comb"),
            Family::Ladder => f.write_str("Ladder"),
            Family::Star(n) => write!(f, "Star({n})"),
        }
    }
}

impl FromStr for Family {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        let lower = s.to_ascii_lowercase();
        let arg = |prefix: &str| -> Option<u32> {
            lower.strip_prefix(prefix)?.strip_suffix(')')?.trim().parse().ok()
        };
        let fam = match lower.as_str() {
            "lochness" | "gamma0" => Family::LochNess,
            "millipede" | "gammainf" => Family::Millipede,
            "comb" => Family::Comb,
            "ladder" => Family::Ladder,
            _ => {
                if let Some(n) = arg("hungry(") {
                    Family::Hungry(n)
                } else if let Some(n) = arg("star(") {
                    Family::Star(n)
                } else {
                    return Err(Error::Parse(format!("unknown graph family '{s}'")));
                }
            }
        };
        fam.validate()?;
        Ok(fam)
    }
}

impl Serialize for Family {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for Family {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        String::deserialize(d)?.parse().map_err(serde::de::Error::custom)
    }
}
