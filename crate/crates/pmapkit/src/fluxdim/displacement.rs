use serde::{Deserialize, Serialize};

use super::partition::{cut_for, EndPartition};
use crate::freegrp::{Corank, WindowedFactor};
use crate::mcg::{loop_shift, Family, MappingClass, ShiftSpec};
use crate::{Error, HalfInt, Result};

fn cork_of_meet(side: &WindowedFactor, image: &WindowedFactor) -> Result<u64> {
    match WindowedFactor::cork(side, &side.intersect(image)?)? {
        Corank::Finite(v) => Ok(v),
        Corank::Infinite => Err(Error::Internal("displacement corank is infinite".into())),
    }
}

fn displacement_in_window(f: &MappingClass, part: &EndPartition, cut: u32) -> Result<u64> {
    let fam = f.family();
    let a = part.level(fam, 0, cut)?;
    let b = part.complement(fam, cut)?;
    Ok(cork_of_meet(&a, &part.push_level(f, 0, cut)?)? + cork_of_meet(&b, &part.push_complement(f, cut)?)?)
}

/// `D(f) = cork(A, f_*(A) ∩ A) + cork(B, f_*(B) ∩ B)`.
pub fn displacement(f: &MappingClass, part: &EndPartition) -> Result<u64> {
    let cut = cut_for(f, part, 0);
    let d = displacement_in_window(f, part, cut)?;
    if displacement_in_window(f, part, 2 * cut)? != d {
        return Err(Error::Internal("displacement changed under window doubling".into()));
    }
    Ok(d)
}

/// `|D|(f) = (D(f) + D(f⁻¹)) / 2`.
pub fn abs_displacement(f: &MappingClass, part: &EndPartition) -> Result<HalfInt> {
    let twice = displacement(f, part)? + displacement(&f.inverse(), part)?;
    Ok(HalfInt::from_twice(twice as i64))
}

/// Outcome of checking `|D|(h_0^{e_0} ⋯ h_{k−1}^{e_{k−1}}) = Σ|e_i|` on
/// the stride-`k` subladder shifts.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ZkReport {
    pub k: u32,
    pub bound: u32,
    pub checked: usize,
    /// Exponent vectors where the two sides differ, with `2|D|`.
    pub failures: Vec<(Vec<i64>, i64)>,
}

impl ZkReport {
    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }
}

/// Checks every exponent vector in `[−bound, bound]^k`.
pub fn zk_embedding_check(k: u32, bound: u32) -> Result<ZkReport> {
    if k == 0 {
        return Err(Error::Rejected("k must be at least 1".into()));
    }
    let part = EndPartition::ladder();
    let b = bound as i64;
    let mut report = ZkReport { k, bound, checked: 0, failures: vec![] };
    let mut e = vec![-b; k as usize];
    loop {
        let mut g = MappingClass::identity(Family::Ladder);
        for (r, &power) in e.iter().enumerate() {
            let h = loop_shift(Family::Ladder, ShiftSpec { power, stride: k, offset: r as u32, line: (0, 1) })?;
            g = g.compose(&h)?;
        }
        let d = abs_displacement(&g, &part)?;
        let l1: i64 = e.iter().map(|x| x.abs()).sum();
        if d != HalfInt::from_int(l1) {
            report.failures.push((e.clone(), d.twice()));
        }
        report.checked += 1;
        // Odometer step through the box.
        let mut i = 0;
        while i < e.len() && e[i] == b {
            e[i] = -b;
            i += 1;
        }
        if i == e.len() {
            break;
        }
        e[i] += 1;
    }
    Ok(report)
}
