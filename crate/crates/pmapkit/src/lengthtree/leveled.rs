use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::freegrp::{Aut, Word};
use crate::mcg::{Family, MappingClass};
use crate::{Error, Result};

/// A vertex `(n, f)` of the leveled tree: `f` prescribes a word on each
/// tooth `i ≥ n`, trivial for all but finitely many.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct LeveledVertex {
    pub level: u32,
    pub words: BTreeMap<u32, Word>,
}

impl LeveledVertex {
    pub fn new(level: u32, words: BTreeMap<u32, Word>) -> Result<Self> {
        if level == 0 {
            return Err(Error::Rejected("levels start at 1".into()));
        }
        if let Some(k) = words.keys().find(|&&k| k < level) {
            return Err(Error::Rejected(format!("tooth {k} lies below level {level}")));
        }
        Ok(LeveledVertex { level, words: words.into_iter().filter(|(_, w)| !w.is_identity()).collect() })
    }

    pub fn base(level: u32) -> Result<Self> {
        Self::new(level, BTreeMap::new())
    }

    pub fn word(&self, i: u32) -> Word {
        self.words.get(&i).cloned().unwrap_or_default()
    }

    /// `(φ·f)(i) = w_i · φ_c*(f(i))` for `φ = ∏ φ(w_i, I_i) ∘ φ_c`.
    pub fn act(&self, phi: &MappingClass) -> Result<LeveledVertex> {
        if phi.family() != Family::Comb {
            return Err(Error::Rejected("the leveled tree is built on the comb family".into()));
        }
        let mut words = BTreeMap::new();
        let teeth = self.words.keys().chain(phi.rays().keys()).copied().filter(|&i| i >= self.level);
        for i in teeth {
            let w = phi.ray_word(i).mul(&phi.core().apply(&self.word(i)));
            if !w.is_identity() {
                words.insert(i, w);
            }
        }
        Ok(LeveledVertex { level: self.level, words })
    }

    /// Levels differ by one and the prescriptions agree where both apply.
    pub fn adjacent(&self, other: &LeveledVertex) -> bool {
        let lo = self.level.max(other.level);
        self.level.abs_diff(other.level) == 1 && {
            let keys = self.words.keys().chain(other.words.keys()).filter(|&&k| k >= lo);
            keys.into_iter().all(|&k| self.word(k) == other.word(k))
        }
    }
}

impl fmt::Display for LeveledVertex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {{", self.level)?;
        for (i, (k, w)) in self.words.iter().enumerate() {
            if i > 0 {
                f.write_str(", ")?;
            }
            write!(f, "{k}: {w}")?;
        }
        f.write_str("})")
    }
}

/// Reads `(n, {i: word, ...})` or a bare level `n`.
impl FromStr for LeveledVertex {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let bad = || Error::Parse(format!("'{s}' is not a vertex (n, {{i: word, ...}})"));
        let t = s.trim();
        let t = t.strip_prefix('(').and_then(|t| t.strip_suffix(')')).unwrap_or(t);
        let (level, rest) = t.split_once(',').unwrap_or((t, "{}"));
        let level: u32 = level.trim().parse().map_err(|_| bad())?;
        let body = rest.trim().strip_prefix('{').and_then(|r| r.strip_suffix('}')).ok_or_else(bad)?;
        let mut words = BTreeMap::new();
        for entry in body.split(',').map(str::trim).filter(|e| !e.is_empty()) {
            let (k, w) = entry.split_once(':').ok_or_else(bad)?;
            let k: u32 = k.trim().parse().map_err(|_| bad())?;
            if words.insert(k, w.trim().parse::<Word>()?).is_some() {
                return Err(Error::Parse(format!("tooth {k} is listed twice")));
            }
        }
        LeveledVertex::new(level, words)
    }
}

/// `∏ φ(f(i), I_i)`, which maps `(n, Id)` to `(n, f)`.
pub fn transitivity_witness(v: &LeveledVertex) -> Result<MappingClass> {
    MappingClass::from_parts(Family::Comb, Aut::identity(), v.words.clone(), None)
}
