use std::collections::BTreeSet;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::freegrp::{ArmLayout, WindowedFactor, Word};
use crate::mcg::{Family, MappingClass};
use crate::{Error, Result};

/// The partition cut out by the midpoint of the edge between positions
/// `position` and `position + 1` on `arm`. The right side is the far part
/// of that arm; the left side holds the center and every other arm.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct EndPartition {
    pub arm: u32,
    pub position: u32,
}

impl EndPartition {
    /// Checks that both sides contain an end accumulated by loops.
    pub fn new(family: Family, arm: u32, position: u32) -> Result<Self> {
        let layout = family.layout().ok_or_else(|| {
            Error::Rejected(format!("{family} has a single end accumulated by loops; a partition needs two"))
        })?;
        if arm >= layout.arms {
            return Err(Error::Rejected(format!("{family} has no arm {arm}")));
        }
        Ok(EndPartition { arm, position })
    }

    /// The ladder partition at the edge `(v_0, v_1)`.
    pub fn ladder() -> Self {
        EndPartition { arm: 1, position: 0 }
    }

    pub(crate) fn layout(&self, family: Family) -> Result<ArmLayout> {
        EndPartition::new(family, self.arm, self.position)?;
        Ok(family.layout().expect("checked"))
    }

    /// Whether the loop at `(arm, t)` lies in `Γ_n`.
    fn in_level(&self, n: i64, arm: u32, t: u32) -> bool {
        let s = self.position as i64 + n;
        if t == 0 {
            s >= 0
        } else if arm == self.arm {
            t as i64 <= s
        } else {
            s >= 0 || t as i64 >= -s
        }
    }

    fn left_arms(&self, layout: ArmLayout) -> BTreeSet<u32> {
        (0..layout.arms).filter(|&a| a != self.arm).collect()
    }

    /// `A_n` presented at `cut`.
    pub fn level(&self, family: Family, n: i64, cut: u32) -> Result<WindowedFactor> {
        let layout = self.layout(family)?;
        let letters = self.level_letters(layout, n, cut)?;
        WindowedFactor::subgraph(layout, cut, self.left_arms(layout), letters)
    }

    fn level_letters(&self, layout: ArmLayout, n: i64, cut: u32) -> Result<Vec<i32>> {
        let mut out = vec![];
        for g in layout.window(cut) {
            let (arm, t) = layout.locate(g)?;
            if self.in_level(n, arm, t) {
                out.push(g);
            }
        }
        Ok(out)
    }

    /// `B`, the fundamental group of the closure of the right side.
    pub fn complement(&self, family: Family, cut: u32) -> Result<WindowedFactor> {
        let layout = self.layout(family)?;
        let letters = self.complement_letters(layout, cut);
        WindowedFactor::subgraph(layout, cut, BTreeSet::from([self.arm]), letters)
    }

    fn complement_letters(&self, layout: ArmLayout, cut: u32) -> Vec<i32> {
        (self.position + 1..=cut).map(|t| layout.letter(self.arm, t)).collect()
    }

    /// `f_*(A_n)` presented at `cut`.
    pub(crate) fn push_level(&self, f: &MappingClass, n: i64, cut: u32) -> Result<WindowedFactor> {
        let layout = self.layout(f.family())?;
        let source = self.level(f.family(), n, cut)?;
        let reach = cut + reach(f).1 + 1;
        let letters = self.level_letters(layout, n, reach)?;
        push(f, &source, layout, letters, cut)
    }

    /// `f_*(B)` presented at `cut`.
    pub(crate) fn push_complement(&self, f: &MappingClass, cut: u32) -> Result<WindowedFactor> {
        let layout = self.layout(f.family())?;
        let source = self.complement(f.family(), cut)?;
        let letters = self.complement_letters(layout, cut + reach(f).1 + 1);
        push(f, &source, layout, letters, cut)
    }
}

/// Image of a factor whose letters up to a margin beyond `cut` are given.
/// Images landing beyond `cut` must be single tail letters; the margin
/// covers every letter the element can move into the window.
fn push(
    f: &MappingClass,
    source: &WindowedFactor,
    layout: ArmLayout,
    letters: Vec<i32>,
    cut: u32,
) -> Result<WindowedFactor> {
    let mut gens: Vec<Word> = vec![];
    for g in letters {
        let img = f.image(g);
        let mut far = false;
        for x in img.gens() {
            let (arm, t) = layout.locate(x)?;
            if t > cut {
                if img.len() != 1 || !source.tails().contains(&arm) {
                    return Err(Error::Internal(format!("a{g} ↦ {img} leaves the window at cut {cut}")));
                }
                far = true;
            }
        }
        if !far {
            gens.push(img);
        }
    }
    WindowedFactor::image_of(source, cut, gens)
}

/// `(R, D)`: the largest position touched by the core automorphism and the
/// largest distance the shift moves a loop.
pub(crate) fn reach(f: &MappingClass) -> (u32, u32) {
    let layout = f.family().layout();
    let r = f
        .core()
        .touched()
        .into_iter()
        .filter_map(|g| layout.and_then(|l| l.locate(g).ok()).map(|(_, t)| t))
        .max()
        .unwrap_or(0);
    let d = f.shift().map_or(0, |s| {
        s.stride * s.powers.values().map(|e| e.unsigned_abs() as u32).max().unwrap_or(0)
    });
    (r, d)
}

/// A cut large enough for `f`, the partition and level offsets up to `extra`.
pub(crate) fn cut_for(f: &MappingClass, part: &EndPartition, extra: u64) -> u32 {
    let (r, d) = reach(f);
    r + 2 * d + part.position + extra as u32 + 2
}

impl fmt::Display for EndPartition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "arm{}:{}-{}", self.arm, self.position, self.position + 1)
    }
}

impl FromStr for EndPartition {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let bad = || Error::Parse(format!("partition '{s}' is not of the form arm<k>:<p>-<p+1>"));
        let rest = s.trim().strip_prefix("arm").ok_or_else(bad)?;
        let (arm, edge) = rest.split_once(':').ok_or_else(bad)?;
        let (p, q) = edge.split_once('-').ok_or_else(bad)?;
        let (arm, p, q): (u32, u32, u32) =
            (arm.parse().map_err(|_| bad())?, p.parse().map_err(|_| bad())?, q.parse().map_err(|_| bad())?);
        if q != p + 1 {
            return Err(bad());
        }
        Ok(EndPartition { arm, position: p })
    }
}

impl Serialize for EndPartition {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for EndPartition {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        String::deserialize(d)?.parse().map_err(serde::de::Error::custom)
    }
}
