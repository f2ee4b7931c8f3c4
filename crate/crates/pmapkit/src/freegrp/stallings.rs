use std::collections::{BTreeMap, HashMap, VecDeque};
use std::fmt::Write as _;

use super::word::{Letter, Word};

/// A finite basepointed graph with edges labeled by generator indices,
/// not necessarily folded.
#[derive(Clone, Debug, Default)]
pub struct PreGraph {
    pub vertices: usize,
    pub base: usize,
    pub edges: Vec<(usize, i32, usize)>,
}

impl PreGraph {
    pub fn new() -> Self {
        PreGraph { vertices: 1, base: 0, edges: Vec::new() }
    }

    pub fn add_vertex(&mut self) -> usize {
        self.vertices += 1;
        self.vertices - 1
    }

    pub fn add_edge(&mut self, from: usize, gen: i32, to: usize) {
        self.edges.push((from, gen, to));
    }

    /// Adds a path reading `word` from `from` to `to`, creating interior
    /// vertices. An empty word identifies nothing and adds nothing, so callers
    /// should only pass nontrivial words.
    pub fn add_path(&mut self, from: usize, to: usize, word: &Word) {
        let letters = word.letters();
        let mut cur = from;
        for (i, l) in letters.iter().enumerate() {
            let next = if i + 1 == letters.len() { to } else { self.add_vertex() };
            if l.inv {
                self.add_edge(next, l.gen, cur);
            } else {
                self.add_edge(cur, l.gen, next);
            }
            cur = next;
        }
    }

    /// The bouquet of petals spelling each generator.
    pub fn petals(gens: &[Word]) -> Self {
        let mut g = PreGraph::new();
        for w in gens.iter().filter(|w| !w.is_identity()) {
            g.add_path(0, 0, w);
        }
        g
    }
}

struct UnionFind(Vec<usize>);

impl UnionFind {
    fn new(n: usize) -> Self {
        UnionFind((0..n).collect())
    }

    fn find(&mut self, x: usize) -> usize {
        let mut r = x;
        while self.0[r] != r {
            r = self.0[r];
        }
        let mut c = x;
        while self.0[c] != r {
            let next = self.0[c];
            self.0[c] = r;
            c = next;
        }
        r
    }

    fn union(&mut self, a: usize, b: usize) {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra != rb {
            self.0[ra.max(rb)] = ra.min(rb);
        }
    }
}

/// A folded core graph with basepoint `0`, numbered canonically by a
/// breadth-first walk from the basepoint, so isomorphic graphs are equal.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct StallingsGraph {
    out: Vec<BTreeMap<i32, usize>>,
    inc: Vec<BTreeMap<i32, usize>>,
}

impl StallingsGraph {
    /// The trivial subgroup: a single vertex.
    pub fn trivial() -> Self {
        StallingsGraph { out: vec![BTreeMap::new()], inc: vec![BTreeMap::new()] }
    }

    pub fn from_generators(gens: &[Word]) -> Self {
        fold(&PreGraph::petals(gens))
    }

    pub fn vertex_count(&self) -> usize {
        self.out.len()
    }

    pub fn edge_count(&self) -> usize {
        self.out.iter().map(|m| m.len()).sum()
    }

    pub fn edges(&self) -> impl Iterator<Item = (usize, i32, usize)> + '_ {
        self.out
            .iter()
            .enumerate()
            .flat_map(|(u, m)| m.iter().map(move |(&g, &v)| (u, g, v)))
    }

    /// First Betti number `|E| − |V| + 1`.
    pub fn rank(&self) -> usize {
        self.edge_count() + 1 - self.vertex_count()
    }

    fn step(&self, v: usize, l: Letter) -> Option<usize> {
        if l.inv {
            self.inc[v].get(&l.gen).copied()
        } else {
            self.out[v].get(&l.gen).copied()
        }
    }

    pub fn contains(&self, w: &Word) -> bool {
        let mut v = 0;
        for &l in w.letters() {
            match self.step(v, l) {
                Some(n) => v = n,
                None => return false,
            }
        }
        v == 0
    }

    /// A free basis read off a breadth-first spanning tree.
    pub fn basis(&self) -> Vec<Word> {
        let n = self.vertex_count();
        let mut path: Vec<Option<Word>> = vec![None; n];
        let mut tree: Vec<(usize, i32, usize)> = Vec::new();
        path[0] = Some(Word::identity());
        let mut queue = VecDeque::from([0usize]);
        while let Some(u) = queue.pop_front() {
            let pu = path[u].clone().unwrap();
            let mut nbrs: Vec<(Letter, usize)> = Vec::new();
            nbrs.extend(self.out[u].iter().map(|(&g, &v)| (Letter { gen: g, inv: false }, v)));
            nbrs.extend(self.inc[u].iter().map(|(&g, &v)| (Letter { gen: g, inv: true }, v)));
            nbrs.sort();
            for (l, v) in nbrs {
                if path[v].is_none() {
                    path[v] = Some(pu.mul(&Word::from_letters([l])));
                    if l.inv {
                        tree.push((v, l.gen, u));
                    } else {
                        tree.push((u, l.gen, v));
                    }
                    queue.push_back(v);
                }
            }
        }
        let mut out = Vec::new();
        for (u, g, v) in self.edges() {
            if tree.contains(&(u, g, v)) {
                continue;
            }
            let pu = path[u].as_ref().unwrap();
            let pv = path[v].as_ref().unwrap();
            out.push(pu.mul(&Word::gen(g)).mul(&pv.inverse()));
        }
        out
    }

    /// Whether every element of `self` lies in `other`.
    pub fn is_subgroup_of(&self, other: &StallingsGraph) -> bool {
        self.basis().iter().all(|w| other.contains(w))
    }

    /// The labels appearing on edges.
    pub fn labels(&self) -> std::collections::BTreeSet<i32> {
        self.edges().map(|(_, g, _)| g).collect()
    }

    /// Fiber product at the pair of basepoints, folded and trimmed.
    pub fn intersect(&self, other: &StallingsGraph) -> StallingsGraph {
        let mut index: HashMap<(usize, usize), usize> = HashMap::new();
        let mut pre = PreGraph::new();
        index.insert((0, 0), 0);
        let mut queue = VecDeque::from([(0usize, 0usize)]);
        while let Some((a, b)) = queue.pop_front() {
            let here = index[&(a, b)];
            for (&g, &ta) in &self.out[a] {
                if let Some(&tb) = other.out[b].get(&g) {
                    let there = *index.entry((ta, tb)).or_insert_with(|| {
                        queue.push_back((ta, tb));
                        pre.add_vertex()
                    });
                    pre.add_edge(here, g, there);
                }
            }
            for (&g, &sa) in &self.inc[a] {
                if let Some(&sb) = other.inc[b].get(&g) {
                    if !index.contains_key(&(sa, sb)) {
                        let v = pre.add_vertex();
                        index.insert((sa, sb), v);
                        queue.push_back((sa, sb));
                    }
                }
            }
        }
        fold(&pre)
    }

    pub fn to_dot(&self, name: &str) -> String {
        let mut s = String::new();
        let _ = writeln!(s, "digraph \"{name}\" {{");
        let _ = writeln!(s, "  0 [shape=doublecircle];");
        for v in 1..self.vertex_count() {
            let _ = writeln!(s, "  {v} [shape=circle];");
        }
        for (u, g, v) in self.edges() {
            let _ = writeln!(s, "  {u} -> {v} [label=\"a{g}\"];");
        }
        s.push_str("}\n");
        s
    }
}

/// Folds with the edges processed in their stored order.
pub fn fold(pre: &PreGraph) -> StallingsGraph {
    let order: Vec<usize> = (0..pre.edges.len()).collect();
    fold_in_order(pre, &order)
}

/// Folds processing edges in the given order. The result does not depend on
/// the order; this entry point exists so that can be tested.
pub fn fold_in_order(pre: &PreGraph, order: &[usize]) -> StallingsGraph {
    let mut uf = UnionFind::new(pre.vertices);
    loop {
        let mut changed = false;
        let mut out: HashMap<(usize, i32), usize> = HashMap::new();
        let mut inc: HashMap<(usize, i32), usize> = HashMap::new();
        for &i in order {
            let (u, g, v) = pre.edges[i];
            let (ru, rv) = (uf.find(u), uf.find(v));
            match out.get(&(ru, g)).copied() {
                Some(t) => {
                    let t = uf.find(t);
                    if t != rv {
                        uf.union(t, rv);
                        changed = true;
                    }
                }
                None => {
                    out.insert((ru, g), rv);
                }
            }
            let (ru, rv) = (uf.find(u), uf.find(v));
            match inc.get(&(rv, g)).copied() {
                Some(s) => {
                    let s = uf.find(s);
                    if s != ru {
                        uf.union(s, ru);
                        changed = true;
                    }
                }
                None => {
                    inc.insert((rv, g), ru);
                }
            }
        }
        if !changed {
            break;
        }
    }
    let base = uf.find(pre.base);
    let mut edges: Vec<(usize, i32, usize)> = pre
        .edges
        .iter()
        .map(|&(u, g, v)| (uf.find(u), g, uf.find(v)))
        .collect();
    edges.sort();
    edges.dedup();
    trim_and_canonicalize(base, edges)
}

fn trim_and_canonicalize(base: usize, mut edges: Vec<(usize, i32, usize)>) -> StallingsGraph {
    loop {
        let mut degree: HashMap<usize, usize> = HashMap::new();
        for &(u, _, v) in &edges {
            *degree.entry(u).or_default() += 1;
            *degree.entry(v).or_default() += 1;
        }
        let before = edges.len();
        edges.retain(|&(u, _, v)| {
            let hair = |x: usize| x != base && degree[&x] <= 1;
            !(hair(u) || hair(v))
        });
        if edges.len() == before {
            break;
        }
    }
    let mut adj: HashMap<usize, Vec<(Letter, usize)>> = HashMap::new();
    for &(u, g, v) in &edges {
        adj.entry(u).or_default().push((Letter { gen: g, inv: false }, v));
        adj.entry(v).or_default().push((Letter { gen: g, inv: true }, u));
    }
    for list in adj.values_mut() {
        list.sort();
    }
    let mut number: HashMap<usize, usize> = HashMap::new();
    number.insert(base, 0);
    let mut queue = VecDeque::from([base]);
    while let Some(u) = queue.pop_front() {
        for &(_, v) in adj.get(&u).map(|v| v.as_slice()).unwrap_or(&[]) {
            if !number.contains_key(&v) {
                number.insert(v, number.len());
                queue.push_back(v);
            }
        }
    }
    let n = number.len();
    let mut out = vec![BTreeMap::new(); n];
    let mut inc = vec![BTreeMap::new(); n];
    for &(u, g, v) in &edges {
        if let (Some(&a), Some(&b)) = (number.get(&u), number.get(&v)) {
            out[a].insert(g, b);
            inc[b].insert(g, a);
        }
    }
    StallingsGraph { out, inc }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn w(s: &str) -> Word {
        s.parse().unwrap()
    }

    #[test]
    fn doubled_edge_folds_to_single_loop() {
        let mut pre = PreGraph::new();
        pre.add_edge(0, 1, 0);
        pre.add_edge(0, 1, 0);
        let s = fold(&pre);
        assert_eq!((s.vertex_count(), s.edge_count(), s.rank()), (1, 1, 1));
    }

    #[test]
    fn two_products_fold_to_three_vertices() {
        let s = StallingsGraph::from_generators(&[w("a1 a2"), w("a1 a3")]);
        assert_eq!(s.vertex_count(), 2);
        assert_eq!(s.rank(), 2);
        let s = StallingsGraph::from_generators(&[w("a1 a2 a1"), w("a1 a3 a1")]);
        assert_eq!(s.rank(), 2);
    }

    #[test]
    fn base_on_hair_survives() {
        let s = StallingsGraph::from_generators(&[w("a1 a2 A1")]);
        assert_eq!(s.vertex_count(), 2);
        assert_eq!(s.rank(), 1);
        assert!(s.contains(&w("a1 a2 a2 A1")));
        assert!(!s.contains(&w("a2")));
    }

    #[test]
    fn folding_is_idempotent() {
        let s = StallingsGraph::from_generators(&[w("a1 a2 A1"), w("a2 a2 a3")]);
        let mut pre = PreGraph::new();
        pre.vertices = s.vertex_count();
        pre.edges = s.edges().collect();
        assert_eq!(fold(&pre), s);
    }

    #[test]
    fn rank_examples() {
        assert_eq!(StallingsGraph::trivial().rank(), 0);
        let rose = StallingsGraph::from_generators(&[w("a1"), w("a2"), w("a3"), w("a4")]);
        assert_eq!(rose.rank(), 4);
    }

    #[test]
    fn intersections() {
        let a1 = StallingsGraph::from_generators(&[w("a1")]);
        let a2 = StallingsGraph::from_generators(&[w("a2")]);
        assert_eq!(a1.intersect(&a2).rank(), 0);
        let s12 = StallingsGraph::from_generators(&[w("a1"), w("a2")]);
        let s23 = StallingsGraph::from_generators(&[w("a2"), w("a3")]);
        assert_eq!(s12.intersect(&s23), a2);
        let s = StallingsGraph::from_generators(&[w("a1 a2 A1"), w("a2 a2 a3")]);
        assert_eq!(s.intersect(&s), s);
    }

    #[test]
    fn basis_generates_the_same_subgroup() {
        let s = StallingsGraph::from_generators(&[w("a1 a2 A1"), w("a2 a2 a3"), w("a3 a1")]);
        let again = StallingsGraph::from_generators(&s.basis());
        assert_eq!(s, again);
        assert_eq!(s.basis().len(), s.rank());
    }
}
