//! Finite sets, maps between them, and finite (co)limits.
//!
//! Everything downstream is computed with plain `usize` indices into
//! labelled finite sets. Colimits are union-find quotients of a disjoint
//! union; limits are enumerated as compatible tuples.

use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum FinError {
    #[error("map value {value} at position {pos} is outside a target of size {dst}")]
    OutOfRange { pos: usize, value: usize, dst: usize },
    #[error("edge {edge} has a map {src}->{dst} but the nodes have sizes {from}->{to}")]
    EdgeMismatch { edge: usize, src: usize, dst: usize, from: usize, to: usize },
    #[error("edge {edge} refers to a missing node")]
    MissingNode { edge: usize },
    #[error("cannot compose {0}->{1} after {2}->{3}")]
    Compose(usize, usize, usize, usize),
}

/// A finite set given by its element labels. Elements are `0..size`.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct FinSetObj {
    labels: Vec<String>,
}

impl FinSetObj {
    pub fn new(labels: Vec<String>) -> Self {
        FinSetObj { labels }
    }

    /// Elements labelled by their own index.
    pub fn anonymous(size: usize) -> Self {
        FinSetObj { labels: (0..size).map(|i| i.to_string()).collect() }
    }

    pub fn point() -> Self {
        FinSetObj { labels: vec!["*".into()] }
    }

    pub fn empty() -> Self {
        FinSetObj::default()
    }

    pub fn size(&self) -> usize {
        self.labels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn label(&self, i: usize) -> &str {
        &self.labels[i]
    }
}

/// A function `0..src -> 0..dst` stored as a table.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct FinMap {
    dst: usize,
    table: Vec<usize>,
}

impl FinMap {
    pub fn new(dst: usize, table: Vec<usize>) -> Result<Self, FinError> {
        if let Some((pos, &value)) = table.iter().enumerate().find(|(_, &v)| v >= dst) {
            return Err(FinError::OutOfRange { pos, value, dst });
        }
        Ok(FinMap { dst, table })
    }

    /// Unchecked constructor for internal tables known to be in range.
    pub(crate) fn raw(dst: usize, table: Vec<usize>) -> Self {
        debug_assert!(table.iter().all(|&v| v < dst));
        FinMap { dst, table }
    }

    pub fn identity(n: usize) -> Self {
        FinMap { dst: n, table: (0..n).collect() }
    }

    pub fn constant(src: usize, dst: usize, value: usize) -> Result<Self, FinError> {
        FinMap::new(dst, vec![value; src])
    }

    pub fn src(&self) -> usize {
        self.table.len()
    }

    pub fn dst(&self) -> usize {
        self.dst
    }

    pub fn table(&self) -> &[usize] {
        &self.table
    }

    pub fn apply(&self, i: usize) -> usize {
        self.table[i]
    }

    /// `g ∘ self`.
    pub fn then(&self, g: &FinMap) -> Result<FinMap, FinError> {
        if self.dst != g.src() {
            return Err(FinError::Compose(g.src(), g.dst, self.src(), self.dst));
        }
        Ok(FinMap { dst: g.dst, table: self.table.iter().map(|&x| g.table[x]).collect() })
    }

    pub fn is_injective(&self) -> bool {
        let mut seen = vec![false; self.dst];
        self.table.iter().all(|&v| !std::mem::replace(&mut seen[v], true))
    }

    pub fn is_surjective(&self) -> bool {
        let mut seen = vec![false; self.dst];
        for &v in &self.table {
            seen[v] = true;
        }
        seen.into_iter().all(|b| b)
    }

    pub fn is_bijective(&self) -> bool {
        self.src() == self.dst && self.is_injective()
    }

    pub fn inverse(&self) -> Option<FinMap> {
        if !self.is_bijective() {
            return None;
        }
        let mut inv = vec![0; self.dst];
        for (i, &v) in self.table.iter().enumerate() {
            inv[v] = i;
        }
        Some(FinMap { dst: self.src(), table: inv })
    }
}

/// True when the map is a bijection (the only way a comparison map of
/// finite sets can be an isomorphism).
pub fn is_canonical_iso(f: &FinMap) -> bool {
    f.is_bijective()
}

/// Union-find whose representative is always the smallest member.
#[derive(Clone, Debug)]
pub struct UnionFind {
    parent: Vec<usize>,
}

impl UnionFind {
    pub fn new(n: usize) -> Self {
        UnionFind { parent: (0..n).collect() }
    }

    pub fn len(&self) -> usize {
        self.parent.len()
    }

    pub fn is_empty(&self) -> bool {
        self.parent.is_empty()
    }

    pub fn find(&mut self, mut x: usize) -> usize {
        let mut root = x;
        while self.parent[root] != root {
            root = self.parent[root];
        }
        while self.parent[x] != root {
            let next = self.parent[x];
            self.parent[x] = root;
            x = next;
        }
        root
    }

    pub fn union(&mut self, a: usize, b: usize) {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra != rb {
            let (lo, hi) = if ra < rb { (ra, rb) } else { (rb, ra) };
            self.parent[hi] = lo;
        }
    }

    /// Class of every element plus the representative of every class,
    /// classes numbered in order of their smallest member.
    pub fn classes(&mut self) -> Quotient {
        let n = self.parent.len();
        let mut class_of = vec![usize::MAX; n];
        let mut reps = Vec::new();
        for i in 0..n {
            let r = self.find(i);
            if r == i {
                class_of[i] = reps.len();
                reps.push(i);
            } else {
                class_of[i] = class_of[r];
            }
        }
        Quotient { class_of, reps }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Quotient {
    pub class_of: Vec<usize>,
    pub reps: Vec<usize>,
}

impl Quotient {
    pub fn len(&self) -> usize {
        self.reps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.reps.is_empty()
    }

    pub fn projection(&self) -> FinMap {
        FinMap::raw(self.reps.len(), self.class_of.clone())
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Edge {
    pub from: usize,
    pub to: usize,
    pub map: FinMap,
}

/// A finite diagram of finite sets: nodes plus arrows between them.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct FinDiagram {
    pub nodes: Vec<FinSetObj>,
    pub edges: Vec<Edge>,
}

impl FinDiagram {
    pub fn new() -> Self {
        FinDiagram::default()
    }

    pub fn add_node(&mut self, obj: FinSetObj) -> usize {
        self.nodes.push(obj);
        self.nodes.len() - 1
    }

    pub fn add_edge(&mut self, from: usize, to: usize, map: FinMap) -> Result<usize, FinError> {
        let edge = self.edges.len();
        self.check_edge(edge, from, to, &map)?;
        self.edges.push(Edge { from, to, map });
        Ok(edge)
    }

    fn check_edge(&self, edge: usize, from: usize, to: usize, map: &FinMap) -> Result<(), FinError> {
        let (Some(a), Some(b)) = (self.nodes.get(from), self.nodes.get(to)) else {
            return Err(FinError::MissingNode { edge });
        };
        if a.size() != map.src() || b.size() != map.dst() {
            return Err(FinError::EdgeMismatch {
                edge,
                src: map.src(),
                dst: map.dst(),
                from: a.size(),
                to: b.size(),
            });
        }
        Ok(())
    }

    pub fn validate(&self) -> Result<(), FinError> {
        self.edges.iter().enumerate().try_for_each(|(i, e)| self.check_edge(i, e.from, e.to, &e.map))
    }

    fn offsets(&self) -> Vec<usize> {
        let mut acc = 0;
        self.nodes
            .iter()
            .map(|n| {
                let o = acc;
                acc += n.size();
                o
            })
            .collect()
    }
}

/// Apex plus one leg per node. For a colimit the legs point into the
/// apex, for a limit they point out of it.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Cocone {
    pub apex: FinSetObj,
    pub legs: Vec<FinMap>,
}

pub type Cone = Cocone;

/// Colimit as the quotient of the disjoint union by the edge relations.
/// Classes are ordered by their smallest global index and labelled by that
/// element's label.
pub fn colimit(d: &FinDiagram) -> Result<Cocone, FinError> {
    d.validate()?;
    let offs = d.offsets();
    let total: usize = d.nodes.iter().map(FinSetObj::size).sum();
    let mut uf = UnionFind::new(total);
    for e in &d.edges {
        for (x, &y) in e.map.table().iter().enumerate() {
            uf.union(offs[e.from] + x, offs[e.to] + y);
        }
    }
    let q = uf.classes();
    let mut owner = Vec::with_capacity(total);
    for (i, n) in d.nodes.iter().enumerate() {
        owner.extend((0..n.size()).map(|x| (i, x)));
    }
    let apex = FinSetObj::new(
        q.reps
            .iter()
            .map(|&r| {
                let (node, x) = owner[r];
                d.nodes[node].label(x).to_string()
            })
            .collect(),
    );
    let legs = d
        .nodes
        .iter()
        .zip(&offs)
        .map(|(n, &o)| FinMap::raw(q.len(), (0..n.size()).map(|x| q.class_of[o + x]).collect()))
        .collect();
    Ok(Cocone { apex, legs })
}

/// Limit as the set of compatible families, in lexicographic order of the
/// node coordinates.
pub fn limit(d: &FinDiagram) -> Result<Cone, FinError> {
    d.validate()?;
    let k = d.nodes.len();
    let mut tuples: Vec<Vec<usize>> = Vec::new();
    let mut cur = vec![usize::MAX; k];
    limit_search(d, 0, &mut cur, &mut tuples);
    let apex = FinSetObj::new(
        tuples
            .iter()
            .map(|t| {
                let parts: Vec<&str> = t.iter().enumerate().map(|(i, &x)| d.nodes[i].label(x)).collect();
                format!("({})", parts.join(","))
            })
            .collect(),
    );
    let legs = (0..k)
        .map(|i| FinMap::raw(d.nodes[i].size(), tuples.iter().map(|t| t[i]).collect()))
        .collect();
    Ok(Cone { apex, legs })
}

fn limit_search(d: &FinDiagram, i: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
    if i == d.nodes.len() {
        out.push(cur.clone());
        return;
    }
    for x in 0..d.nodes[i].size() {
        cur[i] = x;
        let ok = d.edges.iter().all(|e| {
            let (a, b) = (cur[e.from], cur[e.to]);
            // only edges whose endpoints are both assigned so far
            e.from > i || e.to > i || a == usize::MAX || b == usize::MAX || e.map.apply(a) == b
        });
        if ok {
            limit_search(d, i + 1, cur, out);
        }
    }
    cur[i] = usize::MAX;
}

/// Product with lexicographic element order (last coordinate fastest).
pub fn product(objs: &[FinSetObj]) -> (FinSetObj, Vec<FinMap>) {
    let sizes: Vec<usize> = objs.iter().map(FinSetObj::size).collect();
    let total: usize = sizes.iter().product();
    let mut labels = Vec::with_capacity(total);
    let mut legs: Vec<Vec<usize>> = vec![Vec::with_capacity(total); objs.len()];
    for idx in 0..total {
        let coords = unrank(idx, &sizes);
        let parts: Vec<&str> = coords.iter().enumerate().map(|(i, &x)| objs[i].label(x)).collect();
        labels.push(format!("({})", parts.join(",")));
        for (i, &x) in coords.iter().enumerate() {
            legs[i].push(x);
        }
    }
    let legs = legs.into_iter().zip(&sizes).map(|(t, &s)| FinMap::raw(s, t)).collect();
    (FinSetObj::new(labels), legs)
}

/// Mixed-radix rank, last coordinate fastest.
pub fn rank(coords: &[usize], sizes: &[usize]) -> usize {
    coords.iter().zip(sizes).fold(0, |acc, (&c, &s)| acc * s + c)
}

pub fn unrank(mut idx: usize, sizes: &[usize]) -> Vec<usize> {
    let mut out = vec![0; sizes.len()];
    for i in (0..sizes.len()).rev() {
        out[i] = idx % sizes[i];
        idx /= sizes[i];
    }
    out
}

/// One morphism `a -> b` of the indexing category of a coend, with the
/// set `F(b, a)` and its two maps to `F(a, a)` and `F(b, b)`.
#[derive(Clone, Debug)]
pub struct CoendMor {
    pub from: usize,
    pub to: usize,
    pub obj: FinSetObj,
    pub left: FinMap,
    pub right: FinMap,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CoendResult {
    pub apex: FinSetObj,
    /// Leg out of each diagonal set `F(c, c)`.
    pub legs: Vec<FinMap>,
}

/// Coend of a finite bifunctor given by its diagonal values and the two
/// actions of every listed morphism.
pub fn coend(diagonal: &[FinSetObj], mors: &[CoendMor]) -> Result<CoendResult, FinError> {
    let mut d = FinDiagram::new();
    for obj in diagonal {
        d.add_node(obj.clone());
    }
    for m in mors {
        if m.from >= diagonal.len() || m.to >= diagonal.len() {
            return Err(FinError::MissingNode { edge: d.edges.len() });
        }
        let node = d.add_node(m.obj.clone());
        d.add_edge(node, m.from, m.left.clone())?;
        d.add_edge(node, m.to, m.right.clone())?;
    }
    let c = colimit(&d)?;
    Ok(CoendResult { apex: c.apex, legs: c.legs.into_iter().take(diagonal.len()).collect() })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn map(dst: usize, t: &[usize]) -> FinMap {
        FinMap::new(dst, t.to_vec()).unwrap()
    }

    #[test]
    fn out_of_range_rejected() {
        assert!(matches!(FinMap::new(2, vec![0, 2]), Err(FinError::OutOfRange { pos: 1, .. })));
    }

    #[test]
    fn composition_and_inverse() {
        let f = map(3, &[2, 0, 1]);
        let g = f.inverse().unwrap();
        assert_eq!(f.then(&g).unwrap(), FinMap::identity(3));
        assert!(is_canonical_iso(&f));
        assert!(!is_canonical_iso(&map(3, &[0, 0, 1])));
    }

    #[test]
    fn coequalizer_of_two_maps() {
        // 2 => 4, x -> x and x -> x+2 glues {0,2} and {1,3}
        let mut d = FinDiagram::new();
        let a = d.add_node(FinSetObj::anonymous(2));
        let b = d.add_node(FinSetObj::anonymous(4));
        d.add_edge(a, b, map(4, &[0, 1])).unwrap();
        d.add_edge(a, b, map(4, &[2, 3])).unwrap();
        let c = colimit(&d).unwrap();
        assert_eq!(c.apex.size(), 2);
        assert_eq!(c.legs[1].table(), &[0, 1, 0, 1]);
    }

    #[test]
    fn pullback_counts_pairs() {
        // pullback of 3 -> 2 <- 2 via parity
        let mut d = FinDiagram::new();
        let a = d.add_node(FinSetObj::anonymous(3));
        let b = d.add_node(FinSetObj::anonymous(2));
        let c = d.add_node(FinSetObj::anonymous(2));
        d.add_edge(a, c, map(2, &[0, 1, 0])).unwrap();
        d.add_edge(b, c, map(2, &[0, 1])).unwrap();
        let l = limit(&d).unwrap();
        assert_eq!(l.apex.size(), 3);
        for t in 0..3 {
            assert_eq!(d.edges[0].map.apply(l.legs[0].apply(t)), l.legs[2].apply(t));
        }
    }

    #[test]
    fn product_rank_roundtrip() {
        let sizes = [2, 3, 4];
        for i in 0..24 {
            assert_eq!(rank(&unrank(i, &sizes), &sizes), i);
        }
        let (p, legs) = product(&[FinSetObj::anonymous(2), FinSetObj::anonymous(3)]);
        assert_eq!(p.size(), 6);
        assert_eq!(legs[0].table(), &[0, 0, 0, 1, 1, 1]);
    }

    #[test]
    fn coend_of_hom_is_objects_mod_maps() {
        // two objects, one arrow 0 -> 1, F(x, y) = 1 everywhere
        let diag = vec![FinSetObj::point(), FinSetObj::point()];
        let m = CoendMor { from: 0, to: 1, obj: FinSetObj::point(), left: map(1, &[0]), right: map(1, &[0]) };
        let c = coend(&diag, &[m]).unwrap();
        assert_eq!(c.apex.size(), 1);
    }

    #[test]
    fn bad_edge_rejected() {
        let mut d = FinDiagram::new();
        let a = d.add_node(FinSetObj::anonymous(2));
        assert!(matches!(d.add_edge(a, a, map(3, &[0, 1])), Err(FinError::EdgeMismatch { .. })));
    }
}
