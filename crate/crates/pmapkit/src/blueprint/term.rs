use std::collections::{BTreeMap, BTreeSet};

use serde::{Deserialize, Deserializer, Serialize, Serializer};
use serde_json::{json, Value};

use crate::{Error, Result};

/// A finite multigraph with rays attached at some vertices.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FiniteGraph {
    pub vertices: u32,
    /// Undirected edges; `(v, v)` is a loop. Parallel edges are allowed.
    pub edges: Vec<(u32, u32)>,
    /// One ray is attached at each listed vertex (repeats allowed).
    pub rays: Vec<u32>,
    /// Named attachment vertices. `root` defaults to vertex 0.
    pub attach: BTreeMap<String, u32>,
}

impl FiniteGraph {
    pub fn new(vertices: u32, edges: Vec<(u32, u32)>, rays: Vec<u32>) -> Self {
        FiniteGraph { vertices, edges, rays, attach: BTreeMap::new() }
    }

    /// Vertex named `name`: an attachment name, `root`, or `v<i>`.
    pub fn resolve(&self, name: &str) -> Option<u32> {
        if let Some(&v) = self.attach.get(name) {
            return Some(v);
        }
        if name == "root" {
            return Some(0);
        }
        let v: u32 = name.strip_prefix('v')?.parse().ok()?;
        (v < self.vertices).then_some(v)
    }

    pub fn validate(&self) -> Result<()> {
        if self.vertices == 0 {
            return Err(Error::Rejected("finite graph without vertices".into()));
        }
        let all = self.edges.iter().flat_map(|&(a, b)| [a, b]);
        if let Some(v) = all
            .chain(self.rays.iter().copied())
            .chain(self.attach.values().copied())
            .find(|&v| v >= self.vertices)
        {
            return Err(Error::Rejected(format!("vertex {v} out of range")));
        }
        let mut seen = BTreeSet::from([0u32]);
        let mut stack = vec![0u32];
        while let Some(v) = stack.pop() {
            for &(a, b) in &self.edges {
                for (x, y) in [(a, b), (b, a)] {
                    if x == v && seen.insert(y) {
                        stack.push(y);
                    }
                }
            }
        }
        if seen.len() as u32 != self.vertices {
            return Err(Error::Rejected("finite graph is disconnected".into()));
        }
        Ok(())
    }

    /// Cycle rank `|E| − |V| + 1` of the finite part.
    pub fn cycle_rank(&self) -> u64 {
        (self.edges.len() as u64 + 1).saturating_sub(self.vertices as u64)
    }
}

/// A finite term denoting a locally finite infinite graph in standard form.
///
/// Each constructor exposes a `root` vertex. `Wedge` identifies a vertex of
/// the left operand with one of the right operand; its root is the left root.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum GraphBlueprint {
    Finite(FiniteGraph),
    /// One end, accumulated by loops. Root `v1`; also `v<i>`, `w<i>`.
    LochNess,
    /// Loch Ness with `N` rays attached at `w0`. Root `w0`.
    Hungry(u32),
    /// Loch Ness with a ray at every loop vertex. Root `v1`.
    Millipede,
    /// Loops at every integer along a bi-infinite spine. Root `v0`.
    Ladder,
    Wedge {
        left: Box<GraphBlueprint>,
        right: Box<GraphBlueprint>,
        at: (String, String),
    },
    /// A ray `s0, s1, ...` with a copy of the tooth attached at each `s_i`,
    /// `i ≥ 1`, by the tooth's root. Root `s0`.
    Comb(Box<GraphBlueprint>),
    /// A rooted binary tree with a copy of the decoration at every vertex.
    TreeSpray(Option<Box<GraphBlueprint>>),
}

impl GraphBlueprint {
    pub fn wedge(left: GraphBlueprint, right: GraphBlueprint, at: (&str, &str)) -> Self {
        GraphBlueprint::Wedge {
            left: Box::new(left),
            right: Box::new(right),
            at: (at.0.to_string(), at.1.to_string()),
        }
    }

    pub fn comb(tooth: GraphBlueprint) -> Self {
        GraphBlueprint::Comb(Box::new(tooth))
    }

    pub fn spray(decoration: Option<GraphBlueprint>) -> Self {
        GraphBlueprint::TreeSpray(decoration.map(Box::new))
    }

    /// A single ray.
    pub fn ray() -> Self {
        GraphBlueprint::Finite(FiniteGraph::new(1, vec![], vec![0]))
    }

    /// A loop with one ray: the lasso.
    pub fn lasso() -> Self {
        GraphBlueprint::Finite(FiniteGraph::new(1, vec![(0, 0)], vec![0]))
    }

    pub fn validate(&self) -> Result<()> {
        match self {
            GraphBlueprint::Finite(g) => g.validate(),
            GraphBlueprint::Hungry(0) => Err(Error::Rejected("Hungry needs N ≥ 1".into())),
            GraphBlueprint::Wedge { left, right, at } => {
                left.validate()?;
                right.validate()?;
                if !left.has_attachment(&at.0) {
                    return Err(Error::Rejected(format!("left operand has no vertex '{}'", at.0)));
                }
                if !right.has_attachment(&at.1) {
                    return Err(Error::Rejected(format!("right operand has no vertex '{}'", at.1)));
                }
                Ok(())
            }
            GraphBlueprint::Comb(t) => t.validate(),
            GraphBlueprint::TreeSpray(Some(d)) => d.validate(),
            _ => Ok(()),
        }
    }

    pub fn has_attachment(&self, name: &str) -> bool {
        super::denote::Denoted::new(self).resolve(name).is_some()
    }

    pub fn to_json(&self) -> Value {
        match self {
            GraphBlueprint::Finite(g) => {
                let edges: Vec<Value> = g.edges.iter().map(|&(a, b)| json!([a, b])).collect();
                json!(["FiniteGraph", {
                    "vertices": g.vertices,
                    "edges": edges,
                    "rays": g.rays,
                    "attach": g.attach,
                }])
            }
            GraphBlueprint::LochNess => json!(["LochNess"]),
            GraphBlueprint::Hungry(n) => json!(["Hungry", n]),
            GraphBlueprint::Millipede => json!(["Millipede"]),
            GraphBlueprint::Ladder => json!(["Ladder"]),
            GraphBlueprint::Wedge { left, right, at } => {
                json!(["Wedge", left.to_json(), right.to_json(), [at.0, at.1]])
            }
            GraphBlueprint::Comb(t) => json!(["Comb", t.to_json()]),
            GraphBlueprint::TreeSpray(d) => {
                json!(["TreeSpray", d.as_ref().map(|d| d.to_json()).unwrap_or(Value::Null)])
            }
        }
    }

    pub fn from_json(v: &Value) -> Result<Self> {
        let bad = |m: &str| Error::Parse(format!("blueprint: {m}"));
        let arr = v.as_array().ok_or_else(|| bad("expected [constructor, args...]"))?;
        let name = arr.first().and_then(Value::as_str).ok_or_else(|| bad("missing constructor name"))?;
        let args = &arr[1..];
        let arity = |n: usize| {
            if args.len() == n {
                Ok(())
            } else {
                Err(bad(&format!("{name} takes {n} argument(s)")))
            }
        };
        let b = match name {
            "LochNess" => {
                arity(0)?;
                GraphBlueprint::LochNess
            }
            "Millipede" => {
                arity(0)?;
                GraphBlueprint::Millipede
            }
            "Ladder" => {
                arity(0)?;
                GraphBlueprint::Ladder
            }
            "Hungry" => {
                arity(1)?;
                let n = args[0].as_u64().ok_or_else(|| bad("Hungry takes a positive integer"))?;
                GraphBlueprint::Hungry(u32::try_from(n).map_err(|_| bad("Hungry argument too large"))?)
            }
            "Comb" => {
                arity(1)?;
                GraphBlueprint::comb(Self::from_json(&args[0])?)
            }
            "TreeSpray" => {
                arity(1)?;
                match &args[0] {
                    Value::Null => GraphBlueprint::TreeSpray(None),
                    d => GraphBlueprint::spray(Some(Self::from_json(d)?)),
                }
            }
            "Wedge" => {
                arity(3)?;
                let at: (String, String) = serde_json::from_value(args[2].clone())
                    .map_err(|_| bad("Wedge attachment must be a pair of names"))?;
                GraphBlueprint::Wedge {
                    left: Box::new(Self::from_json(&args[0])?),
                    right: Box::new(Self::from_json(&args[1])?),
                    at,
                }
            }
            "FiniteGraph" => {
                arity(1)?;
                #[derive(Deserialize)]
                #[serde(deny_unknown_fields)]
                struct Fg {
                    vertices: u32,
                    #[serde(default)]
                    edges: Vec<(u32, u32)>,
                    #[serde(default)]
                    rays: Vec<u32>,
                    #[serde(default)]
                    attach: BTreeMap<String, u32>,
                }
                let fg: Fg = serde_json::from_value(args[0].clone())
                    .map_err(|e| bad(&format!("FiniteGraph: {e}")))?;
                GraphBlueprint::Finite(FiniteGraph {
                    vertices: fg.vertices,
                    edges: fg.edges,
                    rays: fg.rays,
                    attach: fg.attach,
                })
            }
            other => return Err(bad(&format!("unknown constructor '{other}'"))),
        };
        Ok(b)
    }
}

impl Serialize for GraphBlueprint {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        self.to_json().serialize(s)
    }
}

impl<'de> Deserialize<'de> for GraphBlueprint {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let v = Value::deserialize(d)?;
        GraphBlueprint::from_json(&v).map_err(serde::de::Error::custom)
    }
}
