//! The diagram `D[X, μ] : W_n -> E` and the completion of arity-three data
//! by limits over it.

use std::cell::RefCell;
use std::collections::HashMap;
use std::rc::Rc;

use super::{
    check_normal_oplax, enumerate_wn, mu_at, tuples_from, Carrier, Cone, Map, Obj, OplaxError, OplaxStructure,
    ParenTree, WnPoset,
};

/// Node objects and one map per cover.
pub struct OplaxDiagram<C: Carrier> {
    pub poset: Rc<WnPoset>,
    pub nodes: Vec<C::Obj>,
    pub edges: Vec<C::Map>,
}

impl<C: Carrier> OplaxDiagram<C> {
    pub fn sizes(&self, c: &C) -> Vec<Vec<usize>> {
        self.nodes.iter().map(|x| c.sizes(x)).collect()
    }

    pub fn edges_bijective(&self, c: &C) -> bool {
        self.edges.iter().all(|f| c.is_iso(f))
    }

    /// Every pair of chains with the same ends composes to the same map;
    /// returns the offending `(from, to)` pairs.
    pub fn non_commuting(&self, c: &C) -> Vec<(usize, usize)> {
        let p = &self.poset;
        let depth: Vec<usize> = p.elements.iter().map(|t| t.node_paths().len()).collect();
        let mut order: Vec<usize> = (0..p.len()).collect();
        order.sort_by_key(|&i| depth[i]);
        let mut out = Vec::new();
        for a in 0..p.len() {
            let mut reach: HashMap<usize, C::Map> = HashMap::new();
            reach.insert(a, c.identity(&self.nodes[a]));
            for &b in &order {
                let Some(fb) = reach.get(&b).cloned() else { continue };
                for (ci, cov) in p.covers.iter().enumerate().filter(|(_, cov)| cov.from == b) {
                    let g = c.then(&fb, &self.edges[ci]);
                    match reach.get(&cov.to) {
                        Some(h) if *h != g => out.push((a, cov.to)),
                        Some(_) => {}
                        None => {
                            reach.insert(cov.to, g);
                        }
                    }
                }
            }
        }
        out.sort_unstable();
        out.dedup();
        out
    }

    pub fn to_dot(&self, c: &C) -> String {
        let sizes = self.sizes(c);
        self.poset.to_dot_with(|i| format!("\\n{:?}", sizes[i]))
    }
}

fn offset_of(w: &ParenTree, path: &[usize]) -> usize {
    let mut t = w;
    let mut off = 0;
    for &i in path {
        off += t.children()[..i].iter().map(ParenTree::leaves).sum::<usize>();
        t = &t.children()[i];
    }
    off
}

/// The object `D[X](w)`.
pub(crate) fn eval<S: OplaxStructure + ?Sized>(s: &S, xs: &[Obj<S>], w: &ParenTree) -> Result<Obj<S>, OplaxError> {
    match w {
        ParenTree::Leaf => Ok(xs[0].clone()),
        ParenTree::Node(_) => s.mu(&args(s, xs, w)?),
    }
}

/// Objects of the factors of the root of `w`.
fn args<S: OplaxStructure + ?Sized>(s: &S, xs: &[Obj<S>], w: &ParenTree) -> Result<Vec<Obj<S>>, OplaxError> {
    let mut off = 0;
    w.children()
        .iter()
        .map(|c| {
            let k = c.leaves();
            let o = eval(s, &xs[off..off + k], c);
            off += k;
            o
        })
        .collect()
}

fn args_at<S: OplaxStructure + ?Sized>(
    s: &S,
    xs: &[Obj<S>],
    w: &ParenTree,
    path: &[usize],
) -> Result<Vec<Obj<S>>, OplaxError> {
    let node = w.at(path);
    let off = offset_of(w, path);
    args(s, &xs[off..off + node.leaves()], node)
}

/// Extend a map between the subtrees at `path` to the whole trees, which
/// agree away from `path`.
fn lift<S: OplaxStructure + ?Sized>(
    s: &S,
    src: (&[Obj<S>], &ParenTree),
    dst: (&[Obj<S>], &ParenTree),
    path: &[usize],
    mut f: Map<S>,
) -> Result<Map<S>, OplaxError> {
    for i in (0..path.len()).rev() {
        let p = &path[..i];
        let xs = args_at(s, src.0, src.1, p)?;
        let ys = args_at(s, dst.0, dst.1, p)?;
        f = mu_at(s, &xs, path[i], &ys[path[i]], &f)?;
    }
    Ok(f)
}

/// `D[X](f)` for a tuple of maps `f : X -> Y`.
fn tree_map<S: OplaxStructure + ?Sized>(
    s: &S,
    xs: &[Obj<S>],
    ys: &[Obj<S>],
    fs: &[Map<S>],
    w: &ParenTree,
) -> Result<Map<S>, OplaxError> {
    match w {
        ParenTree::Leaf => Ok(fs[0].clone()),
        ParenTree::Node(cs) => {
            let mut off = 0;
            let mut maps = Vec::new();
            for c in cs {
                let k = c.leaves();
                maps.push(tree_map(s, &xs[off..off + k], &ys[off..off + k], &fs[off..off + k], c)?);
                off += k;
            }
            s.mu_map(&args(s, xs, w)?, &args(s, ys, w)?, &maps)
        }
    }
}

pub fn build_diagram<S: OplaxStructure + ?Sized>(s: &S, xs: &[Obj<S>]) -> Result<OplaxDiagram<S::C>, OplaxError> {
    build_with(s, xs, Rc::new(enumerate_wn(xs.len())?))
}

fn build_with<S: OplaxStructure + ?Sized>(
    s: &S,
    xs: &[Obj<S>],
    poset: Rc<WnPoset>,
) -> Result<OplaxDiagram<S::C>, OplaxError> {
    if xs.len() - 1 > s.max_arity() {
        return Err(OplaxError::Arity(xs.len() - 1, s.max_arity()));
    }
    let nodes = poset.elements.iter().map(|w| eval(s, xs, w)).collect::<Result<Vec<_>, _>>()?;
    let edges = poset
        .covers
        .iter()
        .map(|cov| {
            let w = &poset.elements[cov.from];
            let w2 = &poset.elements[cov.to];
            let ys = args_at(s, xs, w, &cov.ins.path)?;
            let a = s.alpha(cov.ins.l, cov.ins.r, &ys)?;
            lift(s, (xs, w), (xs, w2), &cov.ins.path, a)
        })
        .collect::<Result<Vec<_>, _>>()?;
    Ok(OplaxDiagram { poset, nodes, edges })
}

struct Level<C: Carrier> {
    diagram: OplaxDiagram<C>,
    cone: Cone<C>,
}

type Memo<K, V> = RefCell<HashMap<K, V>>;

/// Arity-three data extended by `μ_n = lim_{W_n} D[X, μ]` up to `target`.
pub struct Completed<S: OplaxStructure> {
    pub lower: S,
    lower_max: usize,
    target: usize,
    posets: HashMap<usize, Rc<WnPoset>>,
    cache: Memo<Vec<u64>, Rc<Level<S::C>>>,
    alphas: Memo<(usize, usize, Vec<u64>), Map<S>>,
}

/// Complete `lower` to arity `target`, after checking its axioms on all
/// tuples of length at most three drawn from `probe`.
pub fn complete_mu<S: OplaxStructure>(lower: S, target: usize, probe: &[Obj<S>]) -> Result<Completed<S>, OplaxError> {
    let lower_max = lower.max_arity().min(3);
    let tuples: Vec<Vec<Obj<S>>> = (0..=lower_max).flat_map(|n| tuples_from(probe, n)).collect();
    let rep = check_normal_oplax(&lower, lower_max, &tuples);
    if let Some(f) = rep.failures.first() {
        return Err(OplaxError::Lower(format!(
            "{} at (n,l,r,k,s) = ({},{},{},{},{}): {}",
            f.condition, f.n, f.l, f.r, f.k, f.s, f.detail
        )));
    }
    let posets = (lower_max + 1..=target).map(|n| Ok((n, Rc::new(enumerate_wn(n)?)))).collect::<Result<_, OplaxError>>()?;
    Ok(Completed { lower, lower_max, target, posets, cache: RefCell::new(HashMap::new()), alphas: RefCell::new(HashMap::new()) })
}

impl<S: OplaxStructure> Completed<S> {
    fn level(&self, xs: &[Obj<S>]) -> Result<Rc<Level<S::C>>, OplaxError> {
        let c = self.lower.carrier();
        let key: Vec<u64> = xs.iter().map(|x| c.key(x)).collect();
        if let Some(l) = self.cache.borrow().get(&key) {
            return Ok(l.clone());
        }
        let diagram = build_with(self, xs, self.posets[&xs.len()].clone())?;
        let edges: Vec<(usize, usize, Map<S>)> =
            diagram.poset.covers.iter().zip(&diagram.edges).map(|(cov, f)| (cov.from, cov.to, f.clone())).collect();
        let cone = c.limit(&diagram.nodes, &edges)?;
        let l = Rc::new(Level { diagram, cone });
        self.cache.borrow_mut().insert(key, l.clone());
        Ok(l)
    }

    /// The diagram whose limit is `μ_n(X)`, with its limit projections.
    pub fn diagram(&self, xs: &[Obj<S>]) -> Result<(Rc<WnPoset>, Vec<Map<S>>), OplaxError> {
        let l = self.level(xs)?;
        Ok((l.diagram.poset.clone(), l.cone.legs.clone()))
    }

    pub fn with_diagram<T>(&self, xs: &[Obj<S>], f: impl FnOnce(&OplaxDiagram<S::C>) -> T) -> Result<T, OplaxError> {
        Ok(f(&self.level(xs)?.diagram))
    }

    /// `μ_n(X) -> D[X](w)`.
    fn leg(&self, xs: &[Obj<S>], w: &ParenTree) -> Result<Map<S>, OplaxError> {
        let n = xs.len();
        if w.is_corolla() {
            return Ok(self.lower.carrier().identity(&self.mu(xs)?));
        }
        if n > self.lower_max {
            let l = self.level(xs)?;
            let i = l.diagram.poset.index_of(w).expect("element of W_n");
            return Ok(l.cone.legs[i].clone());
        }
        (0..n)
            .flat_map(|l| (2..n).map(move |r| (l, r)))
            .find(|&(l, r)| l + r <= n && ParenTree::single(n, l, r) == *w)
            .map(|(l, r)| self.alpha(l, r, xs))
            .unwrap_or_else(|| Err(OplaxError::Arity(n, self.lower_max)))
    }

    /// `α_{n,l,0} : μ_n(X) -> μ_{n+1}(X_1, …, X_l, I, …)` into the limit,
    /// one leg per element of `W_{n+1}`: delete the unit letter, project,
    /// then put the unit back with a lower `α_{m,j,0}`.
    fn insert_unit(&self, l: usize, xs: &[Obj<S>]) -> Result<Map<S>, OplaxError> {
        let c = self.lower.carrier();
        let mut big = xs.to_vec();
        big.insert(l, self.mu(&[])?);
        let target = self.level(&big)?;
        let src = self.mu(xs)?;
        let legs = target
            .diagram
            .poset
            .elements
            .iter()
            .map(|w| {
                let (small, rm) = w.remove_leaf(l);
                let first = self.leg(xs, &small)?;
                let put = if rm.collapsed {
                    let sub = small.at(&rm.path);
                    let off = offset_of(&small, &rm.path);
                    let z = eval(self, &xs[off..off + sub.leaves()], sub)?;
                    self.alpha(rm.pos, 0, &[z])?
                } else {
                    let zs = args_at(self, xs, &small, &rm.path)?;
                    self.alpha(rm.pos, 0, &zs)?
                };
                let second = lift(self, (xs, &small), (&big, w), &rm.path, put)?;
                Ok(c.then(&first, &second))
            })
            .collect::<Result<Vec<_>, OplaxError>>()?;
        c.factor(&src, &target.cone, &legs)
    }
}

impl<S: OplaxStructure> OplaxStructure for Completed<S> {
    type C = S::C;

    fn carrier(&self) -> &S::C {
        self.lower.carrier()
    }

    fn max_arity(&self) -> usize {
        self.target
    }

    fn mu(&self, xs: &[Obj<S>]) -> Result<Obj<S>, OplaxError> {
        match xs.len() {
            n if n <= self.lower_max => self.lower.mu(xs),
            n if n > self.target => Err(OplaxError::Arity(n, self.target)),
            _ => Ok(self.level(xs)?.cone.apex.clone()),
        }
    }

    fn mu_map(&self, xs: &[Obj<S>], ys: &[Obj<S>], fs: &[Map<S>]) -> Result<Map<S>, OplaxError> {
        if xs.len() <= self.lower_max {
            return self.lower.mu_map(xs, ys, fs);
        }
        let c = self.carrier();
        let lx = self.level(xs)?;
        let ly = self.level(ys)?;
        let legs = lx
            .diagram
            .poset
            .elements
            .iter()
            .zip(&lx.cone.legs)
            .map(|(w, leg)| Ok(c.then(leg, &tree_map(self, xs, ys, fs, w)?)))
            .collect::<Result<Vec<_>, OplaxError>>()?;
        c.factor(&lx.cone.apex, &ly.cone, &legs)
    }

    fn alpha(&self, l: usize, r: usize, xs: &[Obj<S>]) -> Result<Map<S>, OplaxError> {
        let n = xs.len();
        if n <= self.lower_max && n + 1 - r <= self.lower_max {
            return self.lower.alpha(l, r, xs);
        }
        if n + 1 - r > self.target {
            return Err(OplaxError::Arity(n + 1 - r, self.target));
        }
        if r == 1 || (l == 0 && r == n) {
            return Ok(self.carrier().identity(&self.mu(xs)?));
        }
        let key = (l, r, xs.iter().map(|x| self.carrier().key(x)).collect());
        if let Some(f) = self.alphas.borrow().get(&key) {
            return Ok(f.clone());
        }
        let f = if r == 0 { self.insert_unit(l, xs)? } else { self.leg(xs, &ParenTree::single(n, l, r))? };
        self.alphas.borrow_mut().insert(key, f.clone());
        Ok(f)
    }
}
