//! The graph a blueprint denotes, explored lazily from named vertices.

use std::collections::{BTreeMap, VecDeque};
use std::fmt::Write as _;

use serde::Serialize;

use super::term::{FiniteGraph, GraphBlueprint};
use crate::{Error, Result};

/// Structured vertex or edge identifier.
pub type Vid = Vec<i64>;

/// Cap on materialized vertices.
const MAX_VERTICES: usize = 500_000;

#[derive(Clone, Debug)]
pub(crate) enum Denoted {
    Finite(FiniteGraph),
    /// Spine `v_i, w_i`; loops at `v_i`. `lo` is the least spine index
    /// (`None` for the bi-infinite ladder). `w0` exists when `hungry_rays > 0`.
    Spine { lo: Option<i64>, hungry_rays: u32, millipede: bool },
    Wedge { left: Box<Denoted>, right: Box<Denoted>, x: Vid, y: Vid },
    Comb { tooth: Box<Denoted>, root: Vid },
    Spray(Option<(Box<Denoted>, Vid)>),
}

fn prefixed(p: &[i64], v: &[i64]) -> Vid {
    p.iter().chain(v).copied().collect()
}

impl Denoted {
    pub(crate) fn new(b: &GraphBlueprint) -> Self {
        match b {
            GraphBlueprint::Finite(g) => Denoted::Finite(g.clone()),
            GraphBlueprint::LochNess => Denoted::Spine { lo: Some(1), hungry_rays: 0, millipede: false },
            GraphBlueprint::Hungry(n) => Denoted::Spine { lo: Some(1), hungry_rays: *n, millipede: false },
            GraphBlueprint::Millipede => Denoted::Spine { lo: Some(1), hungry_rays: 0, millipede: true },
            GraphBlueprint::Ladder => Denoted::Spine { lo: None, hungry_rays: 0, millipede: false },
            GraphBlueprint::Wedge { left, right, at } => {
                let l = Denoted::new(left);
                let r = Denoted::new(right);
                let x = l.resolve(&at.0).unwrap_or_default();
                let y = r.resolve(&at.1).unwrap_or_default();
                Denoted::Wedge { left: Box::new(l), right: Box::new(r), x, y }
            }
            GraphBlueprint::Comb(t) => {
                let tooth = Denoted::new(t);
                let root = tooth.resolve("root").unwrap_or_default();
                Denoted::Comb { tooth: Box::new(tooth), root }
            }
            GraphBlueprint::TreeSpray(d) => Denoted::Spray(d.as_ref().map(|d| {
                let dec = Denoted::new(d);
                let root = dec.resolve("root").unwrap_or_default();
                (Box::new(dec), root)
            })),
        }
    }

    /// The vertex carrying an attachment name.
    pub(crate) fn resolve(&self, name: &str) -> Option<Vid> {
        match self {
            Denoted::Finite(g) => g.resolve(name).map(|v| vec![0, v as i64]),
            Denoted::Spine { lo, hungry_rays, .. } => {
                let in_range = |i: i64, w: bool| match lo {
                    None => true,
                    Some(lo) => i >= *lo || (w && *hungry_rays > 0 && i == lo - 1),
                };
                if name == "root" {
                    return Some(match (lo, hungry_rays) {
                        (None, _) => vec![0, 0],
                        (Some(lo), 0) => vec![0, *lo],
                        (Some(lo), _) => vec![1, lo - 1],
                    });
                }
                let (kind, rest) = if let Some(r) = name.strip_prefix('v') {
                    (0, r)
                } else {
                    (1, name.strip_prefix('w')?)
                };
                let i: i64 = rest.parse().ok()?;
                in_range(i, kind == 1).then(|| vec![kind, i])
            }
            Denoted::Wedge { left, right, x, y } => {
                if let Some(rest) = name.strip_prefix("a.") {
                    left.resolve(rest).map(|v| prefixed(&[0], &v))
                } else if let Some(rest) = name.strip_prefix("b.") {
                    right.resolve(rest).map(|v| self.map_right(&v, x, y))
                } else {
                    left.resolve(name).map(|v| prefixed(&[0], &v))
                }
            }
            Denoted::Comb { .. } => (name == "root").then(|| vec![0, 0]),
            Denoted::Spray(_) => (name == "root").then(|| vec![0, 0, 0]),
        }
    }

    fn map_right(&self, v: &[i64], x: &[i64], y: &[i64]) -> Vid {
        if v == y {
            prefixed(&[0], x)
        } else {
            prefixed(&[1], v)
        }
    }

    /// Incident edges of `v` as `(edge id, other endpoint)`. A loop is
    /// reported once with itself as the other endpoint.
    pub(crate) fn neighbors(&self, v: &[i64]) -> Vec<(Vid, Vid)> {
        let mut out = vec![];
        match self {
            Denoted::Finite(g) => match v {
                [0, i] => {
                    let i = *i as u32;
                    for (e, &(a, b)) in g.edges.iter().enumerate() {
                        if a == i {
                            out.push((vec![0, e as i64], vec![0, b as i64]));
                        } else if b == i {
                            out.push((vec![0, e as i64], vec![0, a as i64]));
                        }
                    }
                    for (k, &r) in g.rays.iter().enumerate() {
                        if r == i {
                            out.push((vec![1, k as i64, 1], vec![1, k as i64, 1]));
                        }
                    }
                }
                [1, k, j] => ray_neighbors(&mut out, &[1, *k], *j, vec![0, g.rays[*k as usize] as i64]),
                _ => {}
            },
            Denoted::Spine { lo, hungry_rays, millipede } => {
                let has_v = |i: i64| lo.is_none_or(|lo| i >= lo);
                match v {
                    [0, i] => {
                        let i = *i;
                        out.push((vec![2, i], vec![0, i]));
                        out.push((vec![0, i], vec![1, i]));
                        if has_v(i - 1) || *hungry_rays > 0 {
                            out.push((vec![1, i - 1], vec![1, i - 1]));
                        }
                        if *millipede {
                            out.push((vec![3, i, 1], vec![3, i, 1]));
                        }
                    }
                    [1, i] => {
                        let i = *i;
                        if has_v(i) {
                            out.push((vec![0, i], vec![0, i]));
                        } else {
                            for k in 1..=*hungry_rays as i64 {
                                out.push((vec![3, k, 1], vec![3, k, 1]));
                            }
                        }
                        out.push((vec![1, i], vec![0, i + 1]));
                    }
                    [3, k, j] => {
                        let base = if *millipede { vec![0, *k] } else { vec![1, lo.unwrap_or(1) - 1] };
                        ray_neighbors(&mut out, &[3, *k], *j, base);
                    }
                    _ => {}
                }
            }
            Denoted::Wedge { left, right, x, y } => match v.split_first() {
                Some((0, rest)) => {
                    for (e, w) in left.neighbors(rest) {
                        out.push((prefixed(&[0], &e), prefixed(&[0], &w)));
                    }
                    if rest == x.as_slice() {
                        for (e, w) in right.neighbors(y) {
                            out.push((prefixed(&[1], &e), self.map_right(&w, x, y)));
                        }
                    }
                }
                Some((1, rest)) => {
                    for (e, w) in right.neighbors(rest) {
                        out.push((prefixed(&[1], &e), self.map_right(&w, x, y)));
                    }
                }
                _ => {}
            },
            Denoted::Comb { tooth, root } => {
                let lift = |i: i64, t: &[i64]| if t == root.as_slice() { vec![0, i] } else { prefixed(&[1, i], t) };
                match v {
                    [0, i] => {
                        let i = *i;
                        if i > 0 {
                            out.push((vec![0, i - 1], vec![0, i - 1]));
                            for (e, w) in tooth.neighbors(root) {
                                out.push((prefixed(&[1, i], &e), lift(i, &w)));
                            }
                        }
                        out.push((vec![0, i], vec![0, i + 1]));
                    }
                    [1, i, t @ ..] => {
                        for (e, w) in tooth.neighbors(t) {
                            out.push((prefixed(&[1, *i], &e), lift(*i, &w)));
                        }
                    }
                    _ => {}
                }
            }
            Denoted::Spray(dec) => {
                let lift = |d: i64, b: i64, t: &[i64], root: &[i64]| {
                    if t == root {
                        vec![0, d, b]
                    } else {
                        prefixed(&[1, d, b], t)
                    }
                };
                match v {
                    [0, d, b] => {
                        let (d, b) = (*d, *b);
                        if d > 0 {
                            out.push((vec![0, d, b], vec![0, d - 1, b >> 1]));
                        }
                        if d < 62 {
                            for c in [2 * b, 2 * b + 1] {
                                out.push((vec![0, d + 1, c], vec![0, d + 1, c]));
                            }
                        }
                        if let Some((dec, root)) = dec {
                            for (e, w) in dec.neighbors(root) {
                                out.push((prefixed(&[1, d, b], &e), lift(d, b, &w, root)));
                            }
                        }
                    }
                    [1, d, b, t @ ..] => {
                        if let Some((dec, root)) = dec {
                            for (e, w) in dec.neighbors(t) {
                                out.push((prefixed(&[1, *d, *b], &e), lift(*d, *b, &w, root)));
                            }
                        }
                    }
                    _ => {}
                }
            }
        }
        out
    }

    /// A readable name for a vertex id.
    pub(crate) fn label(&self, v: &[i64]) -> String {
        match self {
            Denoted::Finite(_) => match v {
                [0, i] => format!("v{i}"),
                [1, k, j] => format!("r{k}.{j}"),
                _ => "?".into(),
            },
            Denoted::Spine { .. } => match v {
                [0, i] => format!("v{i}"),
                [1, i] => format!("w{i}"),
                [3, k, j] => format!("r{k}.{j}"),
                _ => "?".into(),
            },
            Denoted::Wedge { left, right, .. } => match v.split_first() {
                Some((0, rest)) => left.label(rest),
                Some((1, rest)) => format!("b.{}", right.label(rest)),
                _ => "?".into(),
            },
            Denoted::Comb { tooth, .. } => match v {
                [0, i] => format!("s{i}"),
                [1, i, t @ ..] => format!("t{i}.{}", tooth.label(t)),
                _ => "?".into(),
            },
            Denoted::Spray(dec) => match (v, dec) {
                ([0, d, b], _) => format!("n{d}_{b}"),
                ([1, d, b, t @ ..], Some((dec, _))) => format!("n{d}_{b}.{}", dec.label(t)),
                _ => "?".into(),
            },
        }
    }
}

fn ray_neighbors(out: &mut Vec<(Vid, Vid)>, ray: &[i64], j: i64, base: Vid) {
    let at = |j: i64| prefixed(ray, &[j]);
    out.push((at(j), if j == 1 { base } else { at(j - 1) }));
    out.push((at(j + 1), at(j + 1)));
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct TruncatedVertex {
    pub id: Vid,
    pub label: String,
    pub distance: u32,
    /// Has a neighbor outside the ball.
    pub boundary: bool,
}

/// A finite ball of a denoted graph.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Truncation {
    pub radius: u32,
    pub vertices: Vec<TruncatedVertex>,
    /// Edges as vertex index pairs; loops are `(i, i)`.
    pub edges: Vec<(usize, usize)>,
}

impl Truncation {
    /// Cycle rank `|E| − |V| + 1`.
    pub fn rank(&self) -> usize {
        (self.edges.len() + 1).saturating_sub(self.vertices.len())
    }

    pub fn loop_count(&self) -> usize {
        self.edges.iter().filter(|(a, b)| a == b).count()
    }

    pub fn index_of(&self, label: &str) -> Option<usize> {
        self.vertices.iter().position(|v| v.label == label)
    }

    pub fn to_dot(&self) -> String {
        let mut s = String::from("graph truncation {\n");
        for (i, v) in self.vertices.iter().enumerate() {
            let shape = if v.boundary { ", shape=box" } else { "" };
            let _ = writeln!(s, "  n{i} [label=\"{}\"{shape}];", v.label);
        }
        for (a, b) in &self.edges {
            let _ = writeln!(s, "  n{a} -- n{b};");
        }
        s.push_str("}\n");
        s
    }
}

/// The induced subgraph on vertices within `radius` of the root.
pub fn truncate(b: &GraphBlueprint, radius: u32) -> Result<Truncation> {
    truncate_at(b, "root", radius)
}

/// The induced subgraph on vertices within `radius` of a named vertex.
pub fn truncate_at(b: &GraphBlueprint, center: &str, radius: u32) -> Result<Truncation> {
    b.validate()?;
    let d = Denoted::new(b);
    let start = d
        .resolve(center)
        .ok_or_else(|| Error::Rejected(format!("no vertex named '{center}'")))?;
    let mut index: BTreeMap<Vid, usize> = BTreeMap::from([(start.clone(), 0)]);
    let mut vertices = vec![TruncatedVertex { label: d.label(&start), id: start.clone(), distance: 0, boundary: false }];
    let mut queue = VecDeque::from([start]);
    let mut incident = vec![];
    while let Some(v) = queue.pop_front() {
        let i = index[&v];
        let dist = vertices[i].distance;
        let nbrs = d.neighbors(&v);
        for (_, w) in &nbrs {
            if !index.contains_key(w) {
                if dist == radius {
                    vertices[i].boundary = true;
                    continue;
                }
                if vertices.len() >= MAX_VERTICES {
                    return Err(Error::Rejected("truncation too large".into()));
                }
                index.insert(w.clone(), vertices.len());
                vertices.push(TruncatedVertex { label: d.label(w), id: w.clone(), distance: dist + 1, boundary: false });
                queue.push_back(w.clone());
            }
        }
        incident.push((v, nbrs));
    }
    let mut seen = BTreeMap::new();
    for (v, nbrs) in incident {
        for (e, w) in nbrs {
            if let (Some(&a), Some(&b)) = (index.get(&v), index.get(&w)) {
                seen.entry(e).or_insert((a.min(b), a.max(b)));
            }
        }
    }
    let mut edges: Vec<(usize, usize)> = seen.into_values().collect();
    edges.sort_unstable();
    Ok(Truncation { radius, vertices, edges })
}
