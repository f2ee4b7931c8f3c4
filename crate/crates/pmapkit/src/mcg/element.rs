use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use super::expr::{Expr, ShiftSpec, Slot, WordMap};
use super::family::Family;
use crate::freegrp::{Aut, Word};
use crate::{Error, Result};

/// A point at which induced automorphisms are read.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Basepoint {
    /// Far out along the loop end of a one-ended family.
    Far,
    /// Far out along ray `k`.
    Ray(u32),
    /// The spine vertex `v_j` (`w0` for `j = 0` on Hungry graphs).
    Vertex(i64),
}

impl fmt::Display for Basepoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Basepoint::Far => f.write_str("far"),
            Basepoint::Ray(k) => write!(f, "R{k}"),
            Basepoint::Vertex(j) => write!(f, "v{j}"),
        }
    }
}

impl FromStr for Basepoint {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let bad = || Error::Parse(format!("bad basepoint '{s}' (far, R<k>, v<j>)"));
        let s = s.trim();
        if s == "far" {
            Ok(Basepoint::Far)
        } else if let Some(k) = s.strip_prefix('R') {
            Ok(Basepoint::Ray(k.parse().map_err(|_| bad())?))
        } else if let Some(j) = s.strip_prefix('v') {
            Ok(Basepoint::Vertex(j.parse().map_err(|_| bad())?))
        } else {
            Err(bad())
        }
    }
}

/// An automorphism `a ↦ c · Φ(a) · c⁻¹` with `Φ` finitely supported.
/// The pair is unique, so equality of tables is equality of maps.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct InducedAut {
    pub conjugator: Word,
    pub core: Aut,
}

impl InducedAut {
    pub fn identity() -> Self {
        InducedAut::default()
    }

    pub fn image(&self, g: i32) -> Word {
        self.conjugator.inverse().conjugate(&self.core.image(g))
    }

    pub fn apply(&self, w: &Word) -> Word {
        w.substitute(|g| self.image(g))
    }

    /// `self ∘ other`.
    pub fn compose(&self, other: &InducedAut) -> InducedAut {
        InducedAut {
            conjugator: self.conjugator.mul(&self.core.apply(&other.conjugator)),
            core: self.core.compose(&other.core),
        }
    }

    pub fn inverse(&self) -> InducedAut {
        let core = self.core.inverse();
        InducedAut { conjugator: core.apply(&self.conjugator).inverse(), core }
    }

    pub fn pow(&self, e: i64) -> InducedAut {
        let base = if e < 0 { self.inverse() } else { self.clone() };
        (0..e.unsigned_abs()).fold(InducedAut::identity(), |acc, _| acc.compose(&base))
    }

    pub fn is_identity(&self) -> bool {
        self.conjugator.is_identity() && self.core.is_identity()
    }
}

/// The loop-shift part of a star element: line, stride, and a power for
/// each residue class of positions.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct ShiftPart {
    pub line: (u32, u32),
    pub stride: u32,
    /// Non-zero powers keyed by offset `< stride`.
    pub powers: BTreeMap<u32, i64>,
}

impl ShiftPart {
    fn position(&self, family: Family, g: i32) -> Option<i64> {
        let layout = family.layout()?;
        let (arm, t) = layout.locate(g).ok()?;
        if t == 0 {
            Some(0)
        } else if arm == self.line.0 {
            Some(-(t as i64))
        } else if arm == self.line.1 {
            Some(t as i64)
        } else {
            None
        }
    }

    fn letter(&self, family: Family, p: i64) -> i32 {
        let layout = family.layout().expect("star family");
        match p {
            0 => 0,
            p if p < 0 => layout.letter(self.line.0, p.unsigned_abs() as u32),
            p => layout.letter(self.line.1, p as u32),
        }
    }

    /// The basis permutation `σ`.
    pub fn apply(&self, family: Family, g: i32) -> i32 {
        match self.position(family, g) {
            None => g,
            Some(p) => {
                let k = self.stride as i64;
                let e = self.powers.get(&(p.rem_euclid(k) as u32)).copied().unwrap_or(0);
                self.letter(family, p + k * e)
            }
        }
    }

    fn inverse(&self) -> ShiftPart {
        ShiftPart {
            powers: self.powers.iter().map(|(&o, &e)| (o, -e)).collect(),
            ..self.clone()
        }
    }

    /// Label for the registered shift with this line, stride and offset.
    pub fn key(&self, offset: u32) -> String {
        format!("line={}-{},stride={},offset={}", self.line.0, self.line.1, self.stride, offset)
    }
}

/// Normal form of a pure mapping class on a registered family.
///
/// One-ended families: `core` is the automorphism induced at the far
/// basepoint and `rays[k]` the word `r_k` such that the automorphism induced
/// at the end of ray `k` is `a ↦ r_k Φ(a) r_k⁻¹`. Star families: the element
/// is `core ∘ σ` for the shift permutation `σ`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct MappingClass {
    family: Family,
    core: Aut,
    rays: BTreeMap<u32, Word>,
    shift: Option<ShiftPart>,
}

impl MappingClass {
    pub fn identity(family: Family) -> Self {
        MappingClass { family, core: Aut::identity(), rays: BTreeMap::new(), shift: None }
    }

    pub fn family(&self) -> Family {
        self.family
    }

    pub fn core(&self) -> &Aut {
        &self.core
    }

    pub fn rays(&self) -> &BTreeMap<u32, Word> {
        &self.rays
    }

    pub fn ray_word(&self, k: u32) -> Word {
        self.rays.get(&k).cloned().unwrap_or_default()
    }

    pub fn shift(&self) -> Option<&ShiftPart> {
        self.shift.as_ref()
    }

    pub fn is_identity(&self) -> bool {
        self.core.is_identity() && self.rays.is_empty() && self.shift.is_none()
    }

    /// Builds and validates a normal form.
    pub fn from_parts(
        family: Family,
        core: Aut,
        rays: BTreeMap<u32, Word>,
        shift: Option<ShiftPart>,
    ) -> Result<Self> {
        family.validate()?;
        for g in core.touched() {
            if !family.is_loop(g) {
                return Err(Error::Rejected(format!("a{g} is not a loop of {family}")));
            }
        }
        let mut clean = BTreeMap::new();
        for (k, w) in rays {
            if !family.has_ray(k) {
                return Err(Error::Rejected(format!("{family} has no ray R{k}")));
            }
            if let Some(g) = w.gens().into_iter().find(|&g| !family.is_loop(g)) {
                return Err(Error::Rejected(format!("a{g} is not a loop of {family}")));
            }
            if !w.is_identity() {
                clean.insert(k, w);
            }
        }
        let shift = match shift {
            None => None,
            Some(s) => {
                let layout = family
                    .layout()
                    .ok_or_else(|| Error::Unsupported(format!("loop shifts need a star family, not {family}")))?;
                if s.stride == 0 || s.line.0 == s.line.1 || s.line.0 >= layout.arms || s.line.1 >= layout.arms {
                    return Err(Error::Rejected("bad loop shift line or stride".into()));
                }
                let powers: BTreeMap<u32, i64> = s.powers.into_iter().filter(|&(_, e)| e != 0).collect();
                if powers.keys().any(|&o| o >= s.stride) {
                    return Err(Error::Rejected("shift offset must be below the stride".into()));
                }
                (!powers.is_empty()).then_some(ShiftPart { powers, ..s })
            }
        };
        Ok(MappingClass { family, core, rays: clean, shift })
    }

    fn same_family(&self, other: &MappingClass) -> Result<()> {
        if self.family != other.family {
            return Err(Error::Rejected(format!(
                "cannot combine elements of {} and {}",
                self.family, other.family
            )));
        }
        Ok(())
    }

    /// `self ∘ other`.
    pub fn compose(&self, other: &MappingClass) -> Result<MappingClass> {
        self.same_family(other)?;
        let fam = self.family;
        if fam.is_one_ended() {
            let core = self.core.compose(&other.core);
            let mut rays = BTreeMap::new();
            for k in self.rays.keys().chain(other.rays.keys()) {
                let w = self.ray_word(*k).mul(&self.core.apply(&other.ray_word(*k)));
                rays.insert(*k, w);
            }
            return MappingClass::from_parts(fam, core, rays, None);
        }
        // (C1 σ1)(C2 σ2) = C1 (σ1 C2 σ1⁻¹) σ1 σ2
        let shift = match (&self.shift, &other.shift) {
            (None, s) | (s, None) => s.clone(),
            (Some(a), Some(b)) => {
                if a.line != b.line || a.stride != b.stride {
                    return Err(Error::Unsupported(
                        "loop shifts on different lines or strides do not commute with the registered rules".into(),
                    ));
                }
                let mut powers = a.powers.clone();
                for (o, e) in &b.powers {
                    *powers.entry(*o).or_insert(0) += e;
                }
                Some(ShiftPart { powers, ..a.clone() })
            }
        };
        let moved = match &self.shift {
            None => other.core.clone(),
            Some(s) => other.core.relabel(|g| s.apply(fam, g)),
        };
        MappingClass::from_parts(fam, self.core.compose(&moved), BTreeMap::new(), shift)
    }

    pub fn inverse(&self) -> MappingClass {
        let fam = self.family;
        let inv = self.core.inverse();
        if fam.is_one_ended() {
            let rays = self.rays.iter().map(|(&k, w)| (k, inv.apply(w).inverse())).collect();
            return MappingClass { family: fam, core: inv, rays, shift: None };
        }
        // (C σ)⁻¹ = (σ⁻¹ C⁻¹ σ) σ⁻¹
        match &self.shift {
            None => MappingClass { core: inv, ..self.clone() },
            Some(s) => {
                let sinv = s.inverse();
                MappingClass {
                    family: fam,
                    core: inv.relabel(|g| sinv.apply(fam, g)),
                    rays: BTreeMap::new(),
                    shift: Some(sinv),
                }
            }
        }
    }

    pub fn pow(&self, e: i64) -> Result<MappingClass> {
        let base = if e < 0 { self.inverse() } else { self.clone() };
        let mut acc = MappingClass::identity(self.family);
        let mut sq = base;
        let mut n = e.unsigned_abs();
        while n > 0 {
            if n & 1 == 1 {
                acc = acc.compose(&sq)?;
            }
            n >>= 1;
            if n > 0 {
                sq = sq.compose(&sq)?;
            }
        }
        Ok(acc)
    }

    /// Induced automorphism at a basepoint of a one-ended family.
    pub fn induced(&self, bp: Basepoint) -> Result<InducedAut> {
        if !self.family.is_one_ended() {
            return Err(Error::Rejected("use window_images for star families".into()));
        }
        match bp {
            Basepoint::Far => Ok(InducedAut { conjugator: Word::identity(), core: self.core.clone() }),
            Basepoint::Ray(k) if self.family.has_ray(k) => {
                Ok(InducedAut { conjugator: self.ray_word(k), core: self.core.clone() })
            }
            Basepoint::Ray(k) => Err(Error::Rejected(format!("{} has no ray R{k}", self.family))),
            Basepoint::Vertex(j) => {
                let reach = self.core.touched().into_iter().max().unwrap_or(0) as i64;
                if j <= reach {
                    return Err(Error::Rejected(format!(
                        "basepoint v{j} lies inside the support; use a vertex beyond v{reach}"
                    )));
                }
                Ok(InducedAut { conjugator: Word::identity(), core: self.core.clone() })
            }
        }
    }

    /// Image of a basis element: at the far basepoint for one-ended families,
    /// `C(σ(a))` at the center for star families.
    pub fn image(&self, g: i32) -> Word {
        let s = self.shift.as_ref().map_or(g, |s| s.apply(self.family, g));
        self.core.image(s)
    }

    /// Basis images `a ↦ C(σ(a))` of the loops at positions `≤ cut` of a
    /// star family.
    pub fn window_images(&self, cut: u32) -> Result<BTreeMap<i32, Word>> {
        let layout = self
            .family
            .layout()
            .ok_or_else(|| Error::Rejected("windows are defined on star families".into()))?;
        Ok(layout
            .window(cut)
            .into_iter()
            .map(|g| {
                let s = self.shift.as_ref().map_or(g, |s| s.apply(self.family, g));
                (g, self.core.image(s))
            })
            .collect())
    }

    /// The decomposition `u = u_{R_m} ∘ … ∘ u_{R_1} ∘ u_ℓ` into single-ray
    /// word maps and a core part.
    pub fn split(&self) -> (Vec<(u32, MappingClass)>, MappingClass) {
        let rays = self
            .rays
            .iter()
            .map(|(&k, w)| {
                let m = MappingClass {
                    family: self.family,
                    core: Aut::identity(),
                    rays: BTreeMap::from([(k, w.clone())]),
                    shift: None,
                };
                (k, m)
            })
            .collect();
        let core = MappingClass { rays: BTreeMap::new(), ..self.clone() };
        (rays, core)
    }

    /// An expression that normalizes back to this element.
    pub fn to_expr(&self) -> Expr {
        let mut items = vec![];
        if !self.rays.is_empty() {
            items.push(Expr::Words(
                self.rays
                    .iter()
                    .map(|(&k, w)| WordMap { word: w.clone(), slot: Slot::Ray { ray: k, sub: 0 }, reversed: false })
                    .collect(),
            ));
        }
        if !self.core.is_identity() {
            items.push(Expr::Core(self.core.images().clone()));
        }
        if let Some(s) = &self.shift {
            for (&offset, &power) in &s.powers {
                items.push(Expr::Shift(ShiftSpec { power, stride: s.stride, offset, line: s.line }));
            }
        }
        Expr::product(items)
    }
}

impl fmt::Display for MappingClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.to_expr())
    }
}

#[derive(Serialize, Deserialize)]
#[serde(rename_all = "camelCase", deny_unknown_fields)]
struct Repr {
    graph: Family,
    core_aut: Aut,
    multi_word: BTreeMap<String, Word>,
    shift_powers: BTreeMap<String, i64>,
}

impl Serialize for MappingClass {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let multi_word = self.rays.iter().map(|(k, w)| (Slot::Ray { ray: *k, sub: 0 }.to_string(), w.clone())).collect();
        let shift_powers = self
            .shift
            .iter()
            .flat_map(|sp| sp.powers.iter().map(move |(&o, &e)| (sp.key(o), e)))
            .collect();
        Repr { graph: self.family, core_aut: self.core.clone(), multi_word, shift_powers }.serialize(s)
    }
}

impl<'de> Deserialize<'de> for MappingClass {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let r = Repr::deserialize(d)?;
        from_repr(r).map_err(serde::de::Error::custom)
    }
}

fn from_repr(r: Repr) -> Result<MappingClass> {
    let mut rays = BTreeMap::new();
    for (slot, w) in r.multi_word {
        match slot.parse::<Slot>()? {
            Slot::Ray { ray, sub: 0 } => {
                rays.insert(ray, w);
            }
            other => return Err(Error::Parse(format!("normal forms carry only R<k>.0 slots, found {other}"))),
        }
    }
    let mut shift: Option<ShiftPart> = None;
    for (key, e) in r.shift_powers {
        let mut line = None;
        let mut stride = None;
        let mut offset = None;
        for part in key.split(',') {
            let (k, v) = part.split_once('=').ok_or_else(|| Error::Parse(format!("bad shift key '{key}'")))?;
            let num = |v: &str| v.parse::<u32>().map_err(|_| Error::Parse(format!("bad shift key '{key}'")));
            match k {
                "line" => {
                    let (a, b) = v.split_once('-').ok_or_else(|| Error::Parse(format!("bad shift key '{key}'")))?;
                    line = Some((num(a)?, num(b)?));
                }
                "stride" => stride = Some(num(v)?),
                "offset" => offset = Some(num(v)?),
                _ => return Err(Error::Parse(format!("bad shift key '{key}'"))),
            }
        }
        let (Some(line), Some(stride), Some(offset)) = (line, stride, offset) else {
            return Err(Error::Parse(format!("incomplete shift key '{key}'")));
        };
        let sp = shift.get_or_insert_with(|| ShiftPart { line, stride, powers: BTreeMap::new() });
        if sp.line != line || sp.stride != stride {
            return Err(Error::Unsupported("shift powers on several lines or strides".into()));
        }
        sp.powers.insert(offset, e);
    }
    MappingClass::from_parts(r.graph, r.core_aut, rays, shift)
}
