use serde::{Deserialize, Serialize};

use super::partition::{cut_for, EndPartition};
use crate::freegrp::{Corank, WindowedFactor};
use crate::mcg::{loop_shift, Family, MappingClass, ShiftSpec};
use crate::{Error, Result};

/// A flux value with the admissible pair it was read from.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FluxValue {
    pub value: i64,
    pub m: i64,
    pub n: i64,
}

fn finite(c: Corank) -> Option<i64> {
    match c {
        Corank::Finite(v) => Some(v as i64),
        Corank::Infinite => None,
    }
}

fn flux_in_window(f: &MappingClass, part: &EndPartition, m: i64, n: i64, cut: u32) -> Result<Option<i64>> {
    let fam = f.family();
    let am = part.level(fam, m, cut)?;
    let an = part.level(fam, n, cut)?;
    let img = part.push_level(f, n, cut)?;
    if !an.is_subgroup_of(&am)? || !img.is_subgroup_of(&am)? {
        return Ok(None);
    }
    let (Some(a), Some(b)) = (finite(WindowedFactor::cork(&am, &an)?), finite(WindowedFactor::cork(&am, &img)?)) else {
        return Ok(None);
    };
    Ok(Some(a - b))
}

/// `cork(A_m, A_n) − cork(A_m, f_*(A_n))`, or `None` when `(m, n)` is not
/// admissible for `f`. Evaluated at two cuts that must agree.
pub fn flux_at(f: &MappingClass, part: &EndPartition, m: i64, n: i64) -> Result<Option<i64>> {
    if m < n {
        return Ok(None);
    }
    let cut = cut_for(f, part, m.unsigned_abs().max(n.unsigned_abs()));
    let v = flux_in_window(f, part, m, n, cut)?;
    let doubled = flux_in_window(f, part, m, n, 2 * cut)?;
    if v != doubled {
        return Err(Error::Internal(format!("flux at ({m}, {n}) changed under window doubling")));
    }
    Ok(v)
}

/// The smallest `m ≥ n` making `(m, n)` admissible for `f`.
pub fn admissible_pair(f: &MappingClass, part: &EndPartition, n: i64) -> Result<i64> {
    let limit = n + 2 * cut_for(f, part, n.unsigned_abs()) as i64;
    for m in n..=limit {
        if flux_at(f, part, m, n)?.is_some() {
            return Ok(m);
        }
    }
    Err(Error::Internal(format!("no admissible pair for n = {n} below m = {limit}")))
}

/// The flux of `f` across the partition, read at the first admissible
/// pair with `n = 0`.
pub fn flux(f: &MappingClass, part: &EndPartition) -> Result<FluxValue> {
    part.layout(f.family())?;
    let m = admissible_pair(f, part, 0)?;
    let value = flux_at(f, part, m, 0)?.expect("admissible");
    Ok(FluxValue { value, m, n: 0 })
}

/// Partitions `P_i` isolating arm `i`, shifts `h_j` from arm 0 to arm `j`,
/// and the matrix `Φ_{P_i}(h_j)`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FluxFamily {
    pub partitions: Vec<EndPartition>,
    pub shifts: Vec<MappingClass>,
    pub matrix: Vec<Vec<i64>>,
}

impl FluxFamily {
    /// Whether the pairing matrix is the identity.
    pub fn is_identity(&self) -> bool {
        self.matrix
            .iter()
            .enumerate()
            .all(|(i, row)| row.iter().enumerate().all(|(j, &v)| v == i64::from(i == j)))
    }
}

/// Independent flux maps on a star family with `n ≥ 2` ends accumulated by
/// loops, certifying `rank H¹ ≥ n − 1`.
pub fn flux_family(family: Family) -> Result<FluxFamily> {
    let arms = match family.layout() {
        Some(l) => l.arms,
        None => {
            return Err(Error::Rejected(format!(
                "{family} has one end accumulated by loops; the family needs at least two"
            )))
        }
    };
    let partitions: Vec<EndPartition> =
        (1..arms).map(|i| EndPartition::new(family, i, 0)).collect::<Result<_>>()?;
    let shifts: Vec<MappingClass> = (1..arms)
        .map(|j| loop_shift(family, ShiftSpec { power: 1, stride: 1, offset: 0, line: (0, j) }))
        .collect::<Result<_>>()?;
    let matrix = partitions
        .iter()
        .map(|p| shifts.iter().map(|h| flux(h, p).map(|v| v.value)).collect::<Result<Vec<_>>>())
        .collect::<Result<_>>()?;
    Ok(FluxFamily { partitions, shifts, matrix })
}
