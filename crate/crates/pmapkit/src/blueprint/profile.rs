//! End profiles by structural recursion.
//!
//! Each blueprint compiles to a schema: a finite graph `G` whose vertices
//! carry gadgets (rays, loop-rays, combs, tree sprays) summarized by the same
//! attributes recursively. Gadgets of positive rank pin the core; the rest
//! hang off it as trees.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use super::term::GraphBlueprint;
use crate::{Error, Result};

/// Cardinalities on the scale the classifiers read.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Card {
    Finite(u64),
    Countable,
    Continuum,
}

impl Card {
    pub const ZERO: Card = Card::Finite(0);
    pub const ONE: Card = Card::Finite(1);

    pub fn is_zero(self) -> bool {
        self == Card::ZERO
    }

    pub fn is_finite(self) -> bool {
        matches!(self, Card::Finite(_))
    }

    pub fn finite(self) -> Option<u64> {
        match self {
            Card::Finite(n) => Some(n),
            _ => None,
        }
    }

    pub fn add(self, other: Card) -> Card {
        match (self, other) {
            (Card::Finite(a), Card::Finite(b)) => Card::Finite(a.saturating_add(b)),
            (a, b) => a.max(b),
        }
    }

    /// Countably many copies of `self`.
    pub fn times_countable(self) -> Card {
        if self.is_zero() {
            Card::ZERO
        } else {
            self.max(Card::Countable)
        }
    }
}

impl fmt::Display for Card {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Card::Finite(n) => write!(f, "{n}"),
            Card::Countable => f.write_str("countably-infinite"),
            Card::Continuum => f.write_str("continuum"),
        }
    }
}

impl Serialize for Card {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        match self {
            Card::Finite(n) => s.serialize_u64(*n),
            other => s.serialize_str(&other.to_string()),
        }
    }
}

impl<'de> Deserialize<'de> for Card {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        match serde_json::Value::deserialize(d)? {
            serde_json::Value::Number(n) => n
                .as_u64()
                .map(Card::Finite)
                .ok_or_else(|| serde::de::Error::custom("cardinal must be a non-negative integer")),
            serde_json::Value::String(s) if s == "countably-infinite" => Ok(Card::Countable),
            serde_json::Value::String(s) if s == "continuum" => Ok(Card::Continuum),
            other => Err(serde::de::Error::custom(format!("bad cardinal {other}"))),
        }
    }
}

/// The rank and end-space predicates of a graph.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct EndProfile {
    /// `Countable` stands for infinite rank.
    pub rank: Card,
    pub end_count: Card,
    /// Number of ends accumulated by loops.
    pub el_count: Card,
    /// No end outside `E_ℓ` is a limit of other ends.
    pub el_complement_discrete: bool,
    /// `E ∖ E_ℓ` is infinite, so it accumulates somewhere in `E`.
    pub el_complement_has_accumulation: bool,
    /// Components of `Γ ∖ Γ_c` with infinitely many ends.
    pub infinite_end_components_of_complement_of_core: Card,
    pub is_lasso: bool,
}

impl EndProfile {
    /// Checks the invariants every realizable profile satisfies.
    pub fn check(&self) -> Result<()> {
        let bad = |m: &str| Err(Error::Rejected(format!("inconsistent profile: {m}")));
        if self.el_count > self.end_count {
            return bad("more loop-accumulated ends than ends");
        }
        if self.rank > Card::Countable {
            return bad("rank is at most countable");
        }
        if (self.rank == Card::Countable) != (self.el_count >= Card::ONE) {
            return bad("rank is infinite exactly when some end is accumulated by loops");
        }
        if !self.el_complement_discrete && !self.el_complement_has_accumulation {
            return bad("a non-discrete complement needs infinitely many ends");
        }
        if self.is_lasso != (self.rank == Card::ONE && self.end_count == Card::ONE) {
            return bad("lasso flag disagrees with rank and end count");
        }
        if self.infinite_end_components_of_complement_of_core > Card::Countable {
            return bad("at most countably many complementary components");
        }
        if self.el_complement_has_accumulation && self.end_count.is_finite() {
            return bad("an infinite complement needs infinitely many ends");
        }
        if !self.el_complement_has_accumulation && !self.end_count.is_finite() && self.el_count.is_finite() {
            return bad("infinitely many ends with finitely many in E_ℓ leave an infinite complement");
        }
        // A tree component with infinitely many ends has a limit among them.
        if self.el_complement_discrete && !self.infinite_end_components_of_complement_of_core.is_zero() {
            return bad("an infinite-end component of Γ ∖ Γ_c breaks discreteness");
        }
        Ok(())
    }
}

/// Attributes of a piece of graph hanging at a root vertex.
#[derive(Clone, Debug, PartialEq, Eq)]
struct Summary {
    rank: Card,
    ends: Card,
    el: Card,
    /// `|E ∖ E_ℓ|`.
    plain: Card,
    disc: bool,
    /// Infinite-end components of the piece minus its core. Meaningful when
    /// the piece is summarized with its root in the core.
    comps: Card,
    /// End counts of the components of the piece minus its root, when the
    /// piece is a tree.
    branches: Vec<Card>,
    /// Whether the root lies in the core of the piece.
    root_in_core: bool,
}

impl Summary {
    fn ray() -> Self {
        Summary {
            rank: Card::ZERO,
            ends: Card::ONE,
            el: Card::ZERO,
            plain: Card::ONE,
            disc: true,
            comps: Card::ZERO,
            branches: vec![Card::ONE],
            root_in_core: false,
        }
    }

    fn loop_ray(rays: Card) -> Self {
        Summary {
            rank: Card::Countable,
            ends: Card::ONE.add(rays),
            el: Card::ONE,
            plain: rays,
            disc: true,
            comps: Card::ZERO,
            branches: vec![],
            root_in_core: true,
        }
    }
}

#[derive(Default)]
struct Schema {
    vertices: usize,
    edges: Vec<(usize, usize)>,
    gadgets: Vec<(usize, Summary)>,
    names: BTreeMap<String, usize>,
}

impl Schema {
    fn vertex(&mut self) -> usize {
        self.vertices += 1;
        self.vertices - 1
    }

    fn single(g: Summary) -> Self {
        let mut s = Schema::default();
        let v = s.vertex();
        s.attach(v, g);
        s.names.insert("root".into(), v);
        s
    }

    /// Attaches a gadget; a positive-rank gadget whose root is not in its
    /// own core is attached through a stub edge.
    fn attach(&mut self, v: usize, g: Summary) {
        if g.rank > Card::ZERO && !g.root_in_core {
            let w = self.vertex();
            self.edges.push((v, w));
            self.gadgets.push((w, Summary { root_in_core: true, ..g }));
        } else {
            self.gadgets.push((v, g));
        }
    }

    fn resolve(&self, name: &str) -> Result<usize> {
        self.names
            .get(name)
            .copied()
            .ok_or_else(|| Error::Rejected(format!("no attachment vertex '{name}' in this blueprint")))
    }

    fn compile(b: &GraphBlueprint) -> Result<Schema> {
        Ok(match b {
            GraphBlueprint::Finite(g) => {
                g.validate()?;
                let mut s = Schema { vertices: g.vertices as usize, ..Schema::default() };
                s.edges = g.edges.iter().map(|&(a, b)| (a as usize, b as usize)).collect();
                for &r in &g.rays {
                    s.attach(r as usize, Summary::ray());
                }
                for v in 0..g.vertices {
                    s.names.insert(format!("v{v}"), v as usize);
                }
                s.names.insert("root".into(), 0);
                for (k, &v) in &g.attach {
                    s.names.insert(k.clone(), v as usize);
                }
                s
            }
            GraphBlueprint::LochNess | GraphBlueprint::Millipede => {
                let rays = if *b == GraphBlueprint::Millipede { Card::Countable } else { Card::ZERO };
                let mut s = Schema::single(Summary::loop_ray(rays));
                // Every named spine vertex lies in the core, so all of them
                // are interchangeable for the profile.
                s.names.insert("spine".into(), 0);
                s
            }
            GraphBlueprint::Hungry(n) => {
                if *n == 0 {
                    return Err(Error::Rejected("Hungry needs N ≥ 1".into()));
                }
                let mut s = Schema::default();
                let w0 = s.vertex();
                let v1 = s.vertex();
                s.edges.push((w0, v1));
                s.attach(v1, Summary::loop_ray(Card::ZERO));
                for _ in 0..*n {
                    s.attach(w0, Summary::ray());
                }
                s.names.insert("root".into(), w0);
                s.names.insert("spine".into(), v1);
                s
            }
            GraphBlueprint::Ladder => {
                let mut s = Schema::single(Summary::loop_ray(Card::ZERO));
                s.attach(0, Summary::loop_ray(Card::ZERO));
                s.names.insert("spine".into(), 0);
                s
            }
            GraphBlueprint::Wedge { left, right, at } => {
                let mut l = Schema::compile(left)?;
                let r = Schema::compile(right)?;
                let x = l.resolve(&schema_key(left, &at.0)?)?;
                let y = r.resolve(&schema_key(right, &at.1)?)?;
                let offset = l.vertices;
                let map = |v: usize| if v == y { x } else if v > y { offset + v - 1 } else { offset + v };
                l.vertices += r.vertices - 1;
                l.edges.extend(r.edges.iter().map(|&(a, b)| (map(a), map(b))));
                l.gadgets.extend(r.gadgets.into_iter().map(|(v, g)| (map(v), g)));
                let left_names: Vec<(String, usize)> = l.names.iter().map(|(k, &v)| (k.clone(), v)).collect();
                for (k, v) in left_names {
                    l.names.insert(format!("a.{k}"), v);
                }
                for (k, v) in r.names {
                    l.names.insert(format!("b.{k}"), map(v));
                }
                l
            }
            GraphBlueprint::Comb(tooth) => Schema::single(comb(tooth)?),
            GraphBlueprint::TreeSpray(dec) => Schema::single(spray(dec.as_deref())?),
        })
    }

    /// Summary of the whole schema as a piece rooted at `root`. When
    /// `anchored`, the root is forced into the core.
    fn summarize(&self, root: usize, anchored: bool) -> Summary {
        let n = self.vertices;
        let mut adj: Vec<Vec<usize>> = vec![vec![]; n];
        for &(a, b) in &self.edges {
            adj[a].push(b);
            adj[b].push(a);
        }
        let cycle = (self.edges.len() as u64 + 1).saturating_sub(n as u64);
        let mut rank = Card::Finite(cycle);
        let (mut ends, mut el, mut plain, mut disc) = (Card::ZERO, Card::ZERO, Card::ZERO, true);
        let mut by_vertex: Vec<Vec<&Summary>> = vec![vec![]; n];
        for (v, g) in &self.gadgets {
            rank = rank.add(g.rank);
            ends = ends.add(g.ends);
            el = el.add(g.el);
            plain = plain.add(g.plain);
            disc &= g.disc;
            by_vertex[*v].push(g);
        }
        let positive = |v: usize| by_vertex[v].iter().any(|g| g.rank > Card::ZERO);
        let tree_ends = |v: usize| {
            by_vertex[v].iter().filter(|g| g.rank.is_zero()).fold(Card::ZERO, |acc, g| acc.add(g.ends))
        };
        let mut summary = Summary {
            rank,
            ends,
            el,
            plain,
            disc,
            comps: Card::ZERO,
            branches: vec![],
            root_in_core: false,
        };

        if rank.is_zero() && !anchored {
            // A tree: record the branches at the root.
            let mut branches: Vec<Card> = by_vertex[root].iter().flat_map(|g| g.branches.clone()).collect();
            let mut seen = BTreeSet::from([root]);
            for &start in &adj[root] {
                if !seen.insert(start) {
                    continue;
                }
                let mut total = tree_ends(start);
                let mut stack = vec![start];
                while let Some(v) = stack.pop() {
                    for &w in &adj[v] {
                        if seen.insert(w) {
                            total = total.add(tree_ends(w));
                            stack.push(w);
                        }
                    }
                }
                branches.push(total);
            }
            summary.comps = if ends.is_finite() { Card::ZERO } else { Card::ONE };
            summary.branches = branches;
            return summary;
        }

        // Core: prune non-anchor vertices of degree at most one.
        let anchor = |v: usize| positive(v) || (anchored && v == root);
        let mut alive = vec![true; n];
        let mut degree: Vec<usize> = adj.iter().map(Vec::len).collect();
        let mut queue: Vec<usize> = (0..n).filter(|&v| degree[v] <= 1 && !anchor(v)).collect();
        while let Some(v) = queue.pop() {
            if !alive[v] {
                continue;
            }
            alive[v] = false;
            for &w in &adj[v] {
                if alive[w] {
                    degree[w] -= 1;
                    if degree[w] <= 1 && !anchor(w) {
                        queue.push(w);
                    }
                }
            }
        }
        let mut comps = Card::ZERO;
        for (v, g) in &self.gadgets {
            if g.rank > Card::ZERO {
                comps = comps.add(g.comps);
            } else if alive[*v] {
                for &b in &g.branches {
                    if !b.is_finite() {
                        comps = comps.add(Card::ONE);
                    }
                }
            }
        }
        let mut seen: Vec<bool> = alive.clone();
        for start in 0..n {
            if seen[start] {
                continue;
            }
            seen[start] = true;
            let mut total = tree_ends(start);
            let mut stack = vec![start];
            while let Some(v) = stack.pop() {
                for &w in &adj[v] {
                    if !seen[w] {
                        seen[w] = true;
                        total = total.add(tree_ends(w));
                        stack.push(w);
                    }
                }
            }
            if !total.is_finite() {
                comps = comps.add(Card::ONE);
            }
        }
        summary.comps = comps;
        summary.root_in_core = alive[root];
        summary
    }
}

/// Schema key of an attachment name. Named spine vertices of the
/// one-ended families all lie in the core and share one schema vertex.
fn schema_key(b: &GraphBlueprint, name: &str) -> Result<String> {
    let missing = || Error::Rejected(format!("no attachment vertex '{name}' in this blueprint"));
    if super::denote::Denoted::new(b).resolve(name).is_none() {
        return Err(missing());
    }
    Ok(match b {
        GraphBlueprint::Wedge { left, right, .. } => {
            if let Some(rest) = name.strip_prefix("a.") {
                format!("a.{}", schema_key(left, rest)?)
            } else if let Some(rest) = name.strip_prefix("b.") {
                format!("b.{}", schema_key(right, rest)?)
            } else {
                schema_key(left, name)?
            }
        }
        GraphBlueprint::Hungry(_) if name == "root" || name == "w0" => "root".into(),
        GraphBlueprint::LochNess | GraphBlueprint::Millipede | GraphBlueprint::Ladder | GraphBlueprint::Hungry(_) => {
            "spine".into()
        }
        _ => name.into(),
    })
}

fn summarize_rooted(b: &GraphBlueprint, anchored: bool) -> Result<Summary> {
    let s = Schema::compile(b)?;
    let root = s.resolve("root")?;
    Ok(s.summarize(root, anchored))
}

fn comb(tooth: &GraphBlueprint) -> Result<Summary> {
    let free = summarize_rooted(tooth, false)?;
    if free.rank.is_zero() {
        let ends = Card::ONE.add(free.ends.times_countable());
        return Ok(Summary {
            rank: Card::ZERO,
            ends,
            el: Card::ZERO,
            plain: ends,
            // The spine end is a limit of tooth ends whenever teeth have ends.
            disc: free.ends.is_zero(),
            comps: Card::ZERO,
            branches: vec![ends],
            root_in_core: false,
        });
    }
    let t = summarize_rooted(tooth, true)?;
    Ok(Summary {
        rank: Card::Countable,
        ends: Card::ONE.add(t.ends.times_countable()),
        el: Card::ONE.add(t.el.times_countable()),
        plain: t.plain.times_countable(),
        disc: t.disc,
        comps: t.comps.times_countable(),
        branches: vec![],
        root_in_core: false,
    })
}

fn spray(dec: Option<&GraphBlueprint>) -> Result<Summary> {
    let (free, anchored) = match dec {
        None => (None, None),
        Some(d) => (Some(summarize_rooted(d, false)?), Some(summarize_rooted(d, true)?)),
    };
    let positive = free.as_ref().is_some_and(|f| f.rank > Card::ZERO);
    if !positive {
        let mut branches = vec![Card::Continuum, Card::Continuum];
        if let Some(f) = free {
            branches.extend(f.branches);
        }
        return Ok(Summary {
            rank: Card::ZERO,
            ends: Card::Continuum,
            el: Card::ZERO,
            plain: Card::Continuum,
            disc: false,
            comps: Card::ZERO,
            branches,
            root_in_core: false,
        });
    }
    let d = anchored.expect("decoration summarized");
    Ok(Summary {
        rank: Card::Countable,
        ends: Card::Continuum,
        el: Card::Continuum,
        plain: d.plain.times_countable(),
        disc: d.disc,
        comps: d.comps.times_countable(),
        branches: vec![],
        root_in_core: true,
    })
}

/// The end profile of a blueprint.
pub fn end_profile(b: &GraphBlueprint) -> Result<EndProfile> {
    b.validate()?;
    let s = summarize_rooted(b, false)?;
    let comps = if s.rank.is_zero() {
        if s.ends.is_finite() { Card::ZERO } else { Card::ONE }
    } else {
        s.comps
    };
    let p = EndProfile {
        rank: s.rank,
        end_count: s.ends,
        el_count: s.el,
        el_complement_discrete: s.disc,
        el_complement_has_accumulation: !s.plain.is_finite(),
        infinite_end_components_of_complement_of_core: comps,
        is_lasso: s.rank == Card::ONE && s.ends == Card::ONE,
    };
    p.check().map_err(|e| Error::Internal(format!("computed profile failed its own check: {e}")))?;
    Ok(p)
}
