//! Parenthesisations of `n` letters and the poset `W_n` they form.

use std::collections::{HashMap, VecDeque};
use std::fmt;

use serde::Serialize;

use super::OplaxError;

/// A planar tree whose leaves are the letters `1..=n` read left to right.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum ParenTree {
    Leaf,
    Node(Vec<ParenTree>),
}

/// Group children `l+1..=l+r` of the node at `path` into one factor.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Insertion {
    pub path: Vec<usize>,
    pub l: usize,
    pub r: usize,
}

/// Where a deleted letter sat: child `pos` of the node at `path` of the
/// smaller tree, or, if its bracket had length two, next to the subtree
/// now at `path` (`pos = 0` means the letter was on the left).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Removal {
    pub path: Vec<usize>,
    pub pos: usize,
    pub collapsed: bool,
}

impl ParenTree {
    pub fn corolla(n: usize) -> Self {
        ParenTree::Node(vec![ParenTree::Leaf; n])
    }

    /// `(x1 … (x_{l+1} … x_{l+r}) … x_n)`.
    pub fn single(n: usize, l: usize, r: usize) -> Self {
        ParenTree::corolla(n).insert(&Insertion { path: vec![], l, r })
    }

    pub fn leaves(&self) -> usize {
        match self {
            ParenTree::Leaf => 1,
            ParenTree::Node(cs) => cs.iter().map(ParenTree::leaves).sum(),
        }
    }

    pub fn children(&self) -> &[ParenTree] {
        match self {
            ParenTree::Leaf => &[],
            ParenTree::Node(cs) => cs,
        }
    }

    pub fn arity(&self) -> usize {
        self.children().len()
    }

    pub fn at(&self, path: &[usize]) -> &ParenTree {
        path.iter().fold(self, |t, &i| &t.children()[i])
    }

    fn at_mut(&mut self, path: &[usize]) -> &mut ParenTree {
        let mut t = self;
        for &i in path {
            match t {
                ParenTree::Node(cs) => t = &mut cs[i],
                ParenTree::Leaf => panic!("path runs through a leaf"),
            }
        }
        t
    }

    pub fn insert(&self, ins: &Insertion) -> ParenTree {
        let mut out = self.clone();
        if let ParenTree::Node(cs) = out.at_mut(&ins.path) {
            let grouped: Vec<ParenTree> = cs.drain(ins.l..ins.l + ins.r).collect();
            cs.insert(ins.l, ParenTree::Node(grouped));
        }
        out
    }

    /// Paths to all internal nodes, parents before children.
    pub fn node_paths(&self) -> Vec<Vec<usize>> {
        let mut out = Vec::new();
        let mut stack = vec![vec![]];
        while let Some(p) = stack.pop() {
            let t = self.at(&p);
            if let ParenTree::Node(cs) = t {
                for (i, c) in cs.iter().enumerate().rev() {
                    if matches!(c, ParenTree::Node(_)) {
                        let mut q = p.clone();
                        q.push(i);
                        stack.push(q);
                    }
                }
                out.push(p);
            }
        }
        out
    }

    /// Path to leaf number `i` (0-based).
    pub fn leaf_path(&self, i: usize) -> Vec<usize> {
        let mut path = Vec::new();
        let mut t = self;
        let mut i = i;
        while let ParenTree::Node(cs) = t {
            for (j, c) in cs.iter().enumerate() {
                let k = c.leaves();
                if i < k {
                    path.push(j);
                    t = c;
                    break;
                }
                i -= k;
            }
        }
        path
    }

    /// Delete leaf `i`, dropping a bracket that would be left with a single
    /// factor.
    pub fn remove_leaf(&self, i: usize) -> (ParenTree, Removal) {
        let lp = self.leaf_path(i);
        let (pos, parent) = lp.split_last().expect("a tree with one leaf has nothing to remove");
        let mut out = self.clone();
        let node = out.at_mut(parent);
        let ParenTree::Node(cs) = node else { unreachable!() };
        if cs.len() >= 3 {
            cs.remove(*pos);
            (out, Removal { path: parent.to_vec(), pos: *pos, collapsed: false })
        } else {
            let sibling = cs[1 - pos].clone();
            *node = sibling;
            (out, Removal { path: parent.to_vec(), pos: *pos, collapsed: true })
        }
    }

    pub fn is_corolla(&self) -> bool {
        self.children().iter().all(|c| *c == ParenTree::Leaf)
    }

    fn render(&self, next: &mut usize, sep: &str, out: &mut String) {
        match self {
            ParenTree::Leaf => {
                *next += 1;
                out.push_str(&next.to_string());
            }
            ParenTree::Node(cs) => {
                out.push('(');
                for (i, c) in cs.iter().enumerate() {
                    if i > 0 {
                        out.push_str(sep);
                    }
                    c.render(next, sep, out);
                }
                out.push(')');
            }
        }
    }
}

impl fmt::Display for ParenTree {
    /// Digits run together up to nine letters, e.g. `((12)(34))`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let sep = if self.leaves() <= 9 { "" } else { "," };
        let mut s = String::new();
        self.render(&mut 0, sep, &mut s);
        f.write_str(&s)
    }
}

/// Every planar tree with `m` leaves and all brackets of length at least 2.
fn all_trees(m: usize, memo: &mut HashMap<usize, Vec<ParenTree>>) -> Vec<ParenTree> {
    if let Some(v) = memo.get(&m) {
        return v.clone();
    }
    let out = if m == 1 {
        vec![ParenTree::Leaf]
    } else {
        let mut out = Vec::new();
        for comp in compositions(m).into_iter().filter(|c| c.len() >= 2) {
            let mut acc: Vec<Vec<ParenTree>> = vec![vec![]];
            for &part in &comp {
                let subs = all_trees(part, memo);
                acc = acc
                    .into_iter()
                    .flat_map(|pre| {
                        subs.iter().map(move |s| {
                            let mut v = pre.clone();
                            v.push(s.clone());
                            v
                        })
                    })
                    .collect();
            }
            out.extend(acc.into_iter().map(ParenTree::Node));
        }
        out
    };
    memo.insert(m, out.clone());
    out
}

fn compositions(m: usize) -> Vec<Vec<usize>> {
    if m == 0 {
        return vec![vec![]];
    }
    (1..=m)
        .flat_map(|first| {
            compositions(m - first).into_iter().map(move |mut rest| {
                rest.insert(0, first);
                rest
            })
        })
        .collect()
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Cover {
    /// The element with fewer brackets.
    pub from: usize,
    pub to: usize,
    pub ins: Insertion,
}

#[derive(Clone, Debug)]
pub struct WnPoset {
    pub n: usize,
    pub elements: Vec<ParenTree>,
    pub covers: Vec<Cover>,
    index: HashMap<ParenTree, usize>,
}

pub fn enumerate_wn(n: usize) -> Result<WnPoset, OplaxError> {
    if n < 3 {
        return Err(OplaxError::TooFewLetters(n));
    }
    let elements: Vec<ParenTree> =
        all_trees(n, &mut HashMap::new()).into_iter().filter(|t| !t.is_corolla()).collect();
    let index: HashMap<ParenTree, usize> = elements.iter().cloned().enumerate().map(|(i, t)| (t, i)).collect();
    let mut covers = Vec::new();
    for (from, t) in elements.iter().enumerate() {
        for path in t.node_paths() {
            let a = t.at(&path).arity();
            for r in 2..a {
                for l in 0..=a - r {
                    let ins = Insertion { path: path.clone(), l, r };
                    let to = index[&t.insert(&ins)];
                    covers.push(Cover { from, to, ins });
                }
            }
        }
    }
    Ok(WnPoset { n, elements, covers, index })
}

impl WnPoset {
    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    pub fn index_of(&self, t: &ParenTree) -> Option<usize> {
        self.index.get(t).copied()
    }

    /// Connected components of the undirected cover graph.
    pub fn components(&self) -> usize {
        let mut adj = vec![Vec::new(); self.len()];
        for c in &self.covers {
            adj[c.from].push(c.to);
            adj[c.to].push(c.from);
        }
        let mut seen = vec![false; self.len()];
        let mut count = 0;
        for s in 0..self.len() {
            if seen[s] {
                continue;
            }
            count += 1;
            seen[s] = true;
            let mut q = VecDeque::from([s]);
            while let Some(v) = q.pop_front() {
                for &w in &adj[v] {
                    if !seen[w] {
                        seen[w] = true;
                        q.push_back(w);
                    }
                }
            }
        }
        count
    }

    pub fn is_connected(&self) -> bool {
        self.components() == 1
    }

    /// Hasse diagram, arrows from fewer brackets to more.
    pub fn to_dot(&self) -> String {
        self.to_dot_with(|_| String::new())
    }

    pub(crate) fn to_dot_with(&self, note: impl Fn(usize) -> String) -> String {
        let mut s = format!("digraph W{} {{\n  rankdir=LR;\n", self.n);
        for (i, t) in self.elements.iter().enumerate() {
            s.push_str(&format!("  n{i} [label=\"{t}{}\"];\n", note(i)));
        }
        for c in &self.covers {
            s.push_str(&format!("  n{} -> n{};\n", c.from, c.to));
        }
        s.push_str("}\n");
        s
    }

    pub fn to_json(&self) -> serde_json::Value {
        serde_json::json!({
            "n": self.n,
            "elements": self.elements.iter().map(ToString::to_string).collect::<Vec<_>>(),
            "covers": self.covers.iter().map(|c| [c.from, c.to]).collect::<Vec<_>>(),
            "connected": self.is_connected(),
        })
    }
}

pub fn is_connected(n: usize) -> Result<bool, OplaxError> {
    Ok(enumerate_wn(n)?.is_connected())
}

#[cfg(test)]
mod tests {
    use super::*;

    /// Little Schröder numbers from their three-term recurrence.
    fn schroeder(n: usize) -> usize {
        let mut s = vec![0, 1, 1];
        for k in 2..n {
            let next = (3 * (2 * k - 1) * s[k] - (k - 2) * s[k - 1]) / (k + 1);
            s.push(next);
        }
        s[n]
    }

    #[test]
    fn sizes_match_recurrence() {
        assert_eq!(enumerate_wn(3).unwrap().len(), 2);
        assert_eq!(enumerate_wn(4).unwrap().len(), 10);
        for n in 3..=7 {
            assert_eq!(enumerate_wn(n).unwrap().len(), schroeder(n) - 1, "n = {n}");
        }
        assert!(enumerate_wn(2).is_err());
    }

    #[test]
    fn w4_breakdown() {
        let w = enumerate_wn(4).unwrap();
        let binary = w.elements.iter().filter(|t| t.node_paths().iter().all(|p| t.at(p).arity() == 2)).count();
        let ternary_root = w.elements.iter().filter(|t| t.arity() == 3).count();
        assert_eq!((binary, ternary_root, w.len() - binary - ternary_root), (5, 3, 2));
        let name = |i: usize| w.elements[i].to_string();
        let edges: Vec<(String, String)> = w.covers.iter().map(|c| (name(c.from), name(c.to))).collect();
        assert!(edges.contains(&("((12)34)".into(), "(((12)3)4)".into())));
        assert!(edges.contains(&("((12)34)".into(), "((12)(34))".into())));
    }

    #[test]
    fn connectivity() {
        let w3 = enumerate_wn(3).unwrap();
        assert!(w3.covers.is_empty());
        assert_eq!(w3.components(), 2);
        for n in 4..=7 {
            assert!(is_connected(n).unwrap(), "n = {n}");
        }
    }

    #[test]
    fn removing_letters() {
        let t = ParenTree::single(4, 1, 2); // (1(23)4)
        assert_eq!(t.to_string(), "(1(23)4)");
        let (u, rm) = t.remove_leaf(1);
        assert_eq!(u, ParenTree::corolla(3));
        assert_eq!(rm, Removal { path: vec![1], pos: 0, collapsed: true });
        let (u, rm) = ParenTree::single(4, 0, 3).remove_leaf(3);
        assert_eq!(u.to_string(), "(123)");
        assert_eq!(rm, Removal { path: vec![], pos: 1, collapsed: true });
    }
}
