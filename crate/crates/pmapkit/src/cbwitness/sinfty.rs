use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use serde::{Deserialize, Serialize};

use super::blocks;

/// A finitely supported bijection of the positive integers.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct FinitePerm(BTreeMap<u32, u32>);

impl FinitePerm {
    pub fn identity() -> Self {
        FinitePerm::default()
    }

    /// Builds a permutation from its non-fixed points; `None` unless the map
    /// is a bijection of its support onto itself.
    pub fn from_map(map: BTreeMap<u32, u32>) -> Option<Self> {
        let map: BTreeMap<u32, u32> = map.into_iter().filter(|(a, b)| a != b).collect();
        let dom: BTreeSet<u32> = map.keys().copied().collect();
        let img: BTreeSet<u32> = map.values().copied().collect();
        (dom == img && !dom.contains(&0)).then_some(FinitePerm(map))
    }

    /// The product of the given disjoint or overlapping transpositions,
    /// applied right to left.
    pub fn transpositions(pairs: &[(u32, u32)]) -> Self {
        pairs.iter().rev().fold(FinitePerm::identity(), |acc, &(a, b)| {
            FinitePerm::from_map([(a, b), (b, a)].into()).expect("transposition").compose(&acc)
        })
    }

    pub fn apply(&self, i: u32) -> u32 {
        self.0.get(&i).copied().unwrap_or(i)
    }

    pub fn support(&self) -> BTreeSet<u32> {
        self.0.keys().copied().collect()
    }

    pub fn is_identity(&self) -> bool {
        self.0.is_empty()
    }

    /// `self ∘ other`.
    pub fn compose(&self, other: &FinitePerm) -> FinitePerm {
        let keys: BTreeSet<u32> = self.0.keys().chain(other.0.keys()).copied().collect();
        let map = keys.into_iter().map(|i| (i, self.apply(other.apply(i)))).collect();
        FinitePerm::from_map(map).expect("composition of bijections")
    }

    pub fn inverse(&self) -> FinitePerm {
        FinitePerm(self.0.iter().map(|(&a, &b)| (b, a)).collect())
    }

    /// Whether the permutation lies in `V_K` for `K = {1..n}`.
    pub fn fixes_prefix(&self, n: u32) -> bool {
        (1..=n).all(|i| self.apply(i) == i)
    }
}

impl fmt::Display for FinitePerm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return f.write_str("()");
        }
        let mut seen = BTreeSet::new();
        for &start in self.0.keys() {
            if !seen.insert(start) {
                continue;
            }
            write!(f, "({start}")?;
            let mut i = self.apply(start);
            while i != start {
                seen.insert(i);
                write!(f, " {i}")?;
                i = self.apply(i);
            }
            f.write_str(")")?;
        }
        Ok(())
    }
}

/// A factor of an `S∞` factorization with its membership tag.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PermFactor {
    pub name: String,
    pub perm: FinitePerm,
    /// `true` for the finite set `F = {f}`, `false` for `V_K`.
    pub in_f: bool,
}

/// `σ = g f ν⁻¹ f g (uσ)` with `ν = f g u g f`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SinftyFactorization {
    pub target: FinitePerm,
    pub n: u32,
    pub f: FinitePerm,
    pub u: FinitePerm,
    pub m: u32,
    pub g: FinitePerm,
    pub factors: Vec<PermFactor>,
    pub power: u32,
}

impl SinftyFactorization {
    /// Re-checks the product, every `V_K` membership and the power.
    pub fn verify(&self) -> bool {
        let product = self.factors.iter().fold(FinitePerm::identity(), |acc, x| acc.compose(&x.perm));
        let members = self
            .factors
            .iter()
            .all(|x| if x.in_f { x.perm == self.f } else { x.perm.fixes_prefix(self.n) });
        let tags: Vec<bool> = self.factors.iter().map(|x| x.in_f).collect();
        product == self.target && members && blocks(&tags) == self.power && self.power <= 3
    }
}

/// Writes `σ` as a product in `(F V_K)^3` with `F = {f}`,
/// `f = (1 n+1)(2 n+2)⋯(n 2n)` and `K = {1..n}`.
pub fn sinfty_factorize(sigma: &FinitePerm, n: u32) -> SinftyFactorization {
    let f = FinitePerm::transpositions(&(1..=n).map(|i| (i, n + i)).collect::<Vec<_>>());
    if sigma.is_identity() {
        return SinftyFactorization {
            target: sigma.clone(),
            n,
            f,
            u: FinitePerm::identity(),
            m: 2 * n,
            g: FinitePerm::identity(),
            factors: vec![],
            power: 0,
        };
    }
    // u undoes σ on K; σ⁻¹ is finitely supported, so it serves.
    let u = sigma.inverse();
    let m = u.support().into_iter().chain([2 * n]).max().unwrap_or(0);
    let g = FinitePerm::transpositions(&(1..=n).map(|i| (n + i, m + i)).collect::<Vec<_>>());
    let nu = f.compose(&g).compose(&u).compose(&g).compose(&f);
    let rest = u.compose(sigma);
    let mut factors = vec![
        PermFactor { name: "g".into(), perm: g.clone(), in_f: false },
        PermFactor { name: "f".into(), perm: f.clone(), in_f: true },
        PermFactor { name: "ν⁻¹".into(), perm: nu.inverse(), in_f: false },
        PermFactor { name: "f".into(), perm: f.clone(), in_f: true },
        PermFactor { name: "g".into(), perm: g.clone(), in_f: false },
    ];
    if !rest.is_identity() {
        factors.push(PermFactor { name: "uσ".into(), perm: rest, in_f: false });
    }
    let tags: Vec<bool> = factors.iter().map(|x| x.in_f).collect();
    let power = blocks(&tags);
    SinftyFactorization { target: sigma.clone(), n, f, u, m, g, factors, power }
}
