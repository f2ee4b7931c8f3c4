use std::collections::BTreeMap;
use std::fmt::Write;

use serde::{Deserialize, Serialize};

use super::length::CombContext;
use crate::mcg::MappingClass;
use crate::{Error, HalfInt, Result};

/// A node of a rooted tree whose leaves are classes of points at distance 0.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct UltraNode {
    /// Half the distance between points in different children.
    pub height: HalfInt,
    pub children: Vec<usize>,
    /// Input points below this node.
    pub points: Vec<usize>,
}

/// A dendrogram: a leaf `x` and a leaf `y` are joined by a path of length
/// `d(x, y)` through their lowest common ancestor.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct UltraTree {
    pub labels: Vec<String>,
    pub nodes: Vec<UltraNode>,
    pub root: usize,
    /// The leaf node holding each point.
    pub leaf_of: Vec<usize>,
    /// `(x, y)_Id` for group elements; empty for a bare metric.
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub gromov_at_identity: Vec<Vec<HalfInt>>,
}

impl UltraTree {
    pub fn is_leaf(&self, node: usize) -> bool {
        self.nodes[node].children.is_empty()
    }

    pub fn leaves(&self) -> Vec<usize> {
        (0..self.nodes.len()).filter(|&i| self.is_leaf(i)).collect()
    }

    fn parents(&self) -> Vec<Option<usize>> {
        let mut p = vec![None; self.nodes.len()];
        for (i, n) in self.nodes.iter().enumerate() {
            for &c in &n.children {
                p[c] = Some(i);
            }
        }
        p
    }

    /// Lowest common ancestor of the leaves holding two points.
    pub fn lca(&self, x: usize, y: usize) -> usize {
        let parents = self.parents();
        let mut up = vec![false; self.nodes.len()];
        let mut a = Some(self.leaf_of[x]);
        while let Some(i) = a {
            up[i] = true;
            a = parents[i];
        }
        let mut b = self.leaf_of[y];
        while !up[b] {
            b = parents[b].expect("the root is an ancestor of every leaf");
        }
        b
    }

    /// Path length between the leaves of two points.
    pub fn leaf_distance(&self, x: usize, y: usize) -> HalfInt {
        let h = self.nodes[self.lca(x, y)].height;
        HalfInt::from_twice(2 * h.twice())
    }

    pub fn to_dot(&self) -> String {
        let mut s = String::from("graph ultratree {\n");
        for (i, n) in self.nodes.iter().enumerate() {
            if n.children.is_empty() {
                let names: Vec<&str> = n.points.iter().map(|&p| self.labels[p].as_str()).collect();
                let _ = writeln!(s, "  n{i} [shape=box, label=\"{}\"];", names.join(", ").replace('"', "'"));
            } else {
                let _ = writeln!(s, "  n{i} [label=\"{}\"];", n.height);
            }
        }
        for (i, n) in self.nodes.iter().enumerate() {
            for &c in &n.children {
                let len = HalfInt::from_twice(n.height.twice() - self.nodes[c].height.twice());
                let _ = writeln!(s, "  n{i} -- n{c} [label=\"{len}\"];");
            }
        }
        s.push_str("}\n");
        s
    }
}

fn find(p: &mut [usize], x: usize) -> usize {
    let mut r = x;
    while p[r] != r {
        r = p[r];
    }
    let mut y = x;
    while p[y] != r {
        let next = p[y];
        p[y] = r;
        y = next;
    }
    r
}

/// Builds the tree of an integer ultrametric (zero allowed off the
/// diagonal) by merging classes at increasing distances.
pub fn dendrogram(labels: Vec<String>, d: &[Vec<u32>]) -> Result<UltraTree> {
    let n = d.len();
    if n == 0 || labels.len() != n || d.iter().any(|r| r.len() != n) {
        return Err(Error::Rejected("need a non-empty square table with one label per point".into()));
    }
    for x in 0..n {
        for y in 0..n {
            if d[x][y] != d[y][x] || (x == y && d[x][y] != 0) {
                return Err(Error::Rejected(format!("d({x},{y}) is asymmetric or nonzero on the diagonal")));
            }
            for z in 0..n {
                if d[x][z] > d[x][y].max(d[y][z]) {
                    return Err(Error::Rejected(format!("({x},{y},{z}) violates the ultrametric inequality")));
                }
            }
        }
    }
    let mut levels: Vec<u32> = d.iter().flatten().copied().collect();
    levels.sort_unstable();
    levels.dedup();

    let mut parent: Vec<usize> = (0..n).collect();
    let mut node_of: BTreeMap<usize, usize> = BTreeMap::new();
    let mut nodes: Vec<UltraNode> = Vec::new();
    for level in levels {
        // Groups of current classes that merge at this level.
        let mut groups: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
        for x in 0..n {
            for y in x + 1..n {
                if d[x][y] == level {
                    let (a, b) = (find(&mut parent, x), find(&mut parent, y));
                    if a != b {
                        parent[a.max(b)] = a.min(b);
                    }
                }
            }
        }
        for x in 0..n {
            groups.entry(find(&mut parent, x)).or_default().push(x);
        }
        for members in groups.into_values() {
            let height = HalfInt::from_twice(level as i64);
            if level == 0 {
                nodes.push(UltraNode { height, children: vec![], points: members });
                for &m in &nodes.last().expect("just pushed").points {
                    node_of.insert(m, nodes.len() - 1);
                }
                continue;
            }
            let mut children: Vec<usize> = members.iter().map(|m| node_of[m]).collect();
            children.sort_unstable();
            children.dedup();
            if children.len() < 2 {
                continue;
            }
            nodes.push(UltraNode { height, children, points: members.clone() });
            let id = nodes.len() - 1;
            for m in members {
                node_of.insert(m, id);
            }
        }
    }
    let root = node_of[&0];
    let mut leaf_of = vec![0; n];
    for (i, node) in nodes.iter().enumerate() {
        if node.children.is_empty() {
            for &p in &node.points {
                leaf_of[p] = i;
            }
        }
    }
    Ok(UltraTree { labels, nodes, root, leaf_of, gromov_at_identity: vec![] })
}

/// The tree of the classes of `elements` under `d(g, h) = ℓ(g⁻¹h)`.
pub fn ultratree(ctx: &CombContext, elements: &[(String, MappingClass)]) -> Result<UltraTree> {
    let n = elements.len();
    let mut d = vec![vec![0u32; n]; n];
    for i in 0..n {
        for j in i + 1..n {
            let v = ctx.distance(&elements[i].1, &elements[j].1)?;
            d[i][j] = v;
            d[j][i] = v;
        }
    }
    let mut tree = dendrogram(elements.iter().map(|(s, _)| s.clone()).collect(), &d)?;
    let lengths = elements.iter().map(|(_, g)| ctx.length(g)).collect::<Result<Vec<_>>>()?;
    tree.gromov_at_identity = (0..n)
        .map(|i| (0..n).map(|j| HalfInt::from_twice(lengths[i] as i64 + lengths[j] as i64 - d[i][j] as i64)).collect())
        .collect();
    Ok(tree)
}

impl CombContext {
    /// `(g, h)_Id = ½(ℓ(g) + ℓ(h) − d(g, h))`.
    pub fn gromov_at_identity(&self, g: &MappingClass, h: &MappingClass) -> Result<HalfInt> {
        let s = self.length(g)? as i64 + self.length(h)? as i64 - self.distance(g, h)? as i64;
        Ok(HalfInt::from_twice(s))
    }
}
