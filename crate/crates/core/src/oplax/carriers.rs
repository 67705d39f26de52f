//! Concrete carriers and the structures built on them, plus the reduced,
//! truncated and twisted variants of any structure.

use std::cell::RefCell;
use std::collections::hash_map::DefaultHasher;
use std::collections::HashMap;
use std::hash::{Hash, Hasher};
use std::rc::Rc;

use crate::day::{BoxElem, Comparison};
use crate::finset::{limit, rank, unrank, FinDiagram, FinMap, FinSetObj};
use crate::kelly::{
    descend_kelly, identity_box, kelly_exact, kelly_map, mu3, mu3_map, s1, s2, unit_into_left, unit_into_right,
    KellyResult, Mu3Result,
};
use crate::sequences::{SeqMorphism, TruncSeq};

use super::{grouped, Carrier, Cone, Map, Obj, OplaxError, OplaxStructure};

fn mapped(c: Comparison, what: &str) -> Result<SeqMorphism, OplaxError> {
    c.map.ok_or_else(|| OplaxError::IllDefined(what.into()))
}

fn seq_differs(f: &SeqMorphism, g: &SeqMorphism) -> Option<String> {
    if f.components.len() != g.components.len() {
        return Some("different caps".into());
    }
    f.components.iter().zip(&g.components).enumerate().find_map(|(n, (a, b))| {
        (0..a.src().min(b.src()))
            .find(|&x| a.apply(x) != b.apply(x))
            .map(|x| format!("level {n}, element {x}: {} vs {}", a.apply(x), b.apply(x)))
            .or_else(|| (a.src() != b.src()).then(|| format!("level {n}: sizes differ")))
    })
}

fn seq_twist(x: &TruncSeq) -> Option<SeqMorphism> {
    let lvl = (0..=x.cap()).find(|&n| x.size(n) >= 2)?;
    let comps = x
        .sizes()
        .into_iter()
        .enumerate()
        .map(|(n, s)| {
            let mut t: Vec<usize> = (0..s).collect();
            if n == lvl {
                t.swap(0, 1);
            }
            FinMap::raw(s, t)
        })
        .collect();
    Some(SeqMorphism::unchecked(comps))
}

/// Levelwise limit of sequences, plus a lookup from compatible families
/// to apex elements.
struct SeqLimit {
    seq: TruncSeq,
    legs: Vec<SeqMorphism>,
}

fn seq_limit(nodes: &[&TruncSeq], edges: &[(usize, usize, SeqMorphism)]) -> Result<SeqLimit, OplaxError> {
    let cap = nodes.iter().map(|x| x.cap()).min().unwrap_or(0);
    let mut apexes = Vec::new();
    let mut legs: Vec<Vec<FinMap>> = vec![Vec::new(); nodes.len()];
    let mut lookup: Vec<HashMap<Vec<usize>, usize>> = Vec::new();
    for n in 0..=cap {
        let mut d = FinDiagram::new();
        for x in nodes {
            d.add_node(x.level(n).cloned().unwrap_or_else(FinSetObj::empty));
        }
        for (a, b, f) in edges {
            d.add_edge(*a, *b, f.components[n].clone()).map_err(|e| OplaxError::IllDefined(e.to_string()))?;
        }
        let cone = limit(&d).map_err(|e| OplaxError::IllDefined(e.to_string()))?;
        let size = cone.apex.size();
        lookup.push((0..size).map(|e| (cone.legs.iter().map(|l| l.apply(e)).collect(), e)).collect());
        for (i, l) in cone.legs.into_iter().enumerate() {
            legs[i].push(l);
        }
        apexes.push(cone.apex);
    }
    let base = nodes
        .iter()
        .map(|x| x.base())
        .collect::<Option<Vec<usize>>>()
        .and_then(|t| lookup[0].get(&t).copied());
    let flavor = nodes.first().map(|x| x.flavor()).unwrap_or(crate::sequences::Flavor::Lambda);
    let seq = TruncSeq::from_fn(flavor, cap, apexes, base, |f, e| {
        let t: Vec<usize> = legs.iter().zip(nodes).map(|(l, x)| x.apply(f, l[f.dst()].apply(e))).collect();
        lookup[f.src()][&t]
    });
    Ok(SeqLimit { seq, legs: legs.into_iter().map(SeqMorphism::unchecked).collect() })
}

fn seq_factor(src_sizes: &[usize], legs_in: &[SeqMorphism], cone_legs: &[SeqMorphism]) -> Result<SeqMorphism, OplaxError> {
    let comps = src_sizes
        .iter()
        .enumerate()
        .map(|(n, &size)| {
            let apex = cone_legs.first().map_or(1, |l| l.components[n].src());
            let lookup: HashMap<Vec<usize>, usize> =
                (0..apex).map(|e| (cone_legs.iter().map(|l| l.components[n].apply(e)).collect(), e)).collect();
            let table = (0..size)
                .map(|x| {
                    let t: Vec<usize> = legs_in.iter().map(|l| l.components[n].apply(x)).collect();
                    lookup.get(&t).copied().ok_or(OplaxError::NotCompatible { level: n, elem: x })
                })
                .collect::<Result<Vec<_>, _>>()?;
            Ok(FinMap::raw(apex, table))
        })
        .collect::<Result<Vec<_>, OplaxError>>()?;
    Ok(SeqMorphism::unchecked(comps))
}

/// Sequences of finite sets.
#[derive(Clone, Debug, Default)]
pub struct SeqCarrier;

impl Carrier for SeqCarrier {
    type Obj = Rc<TruncSeq>;
    type Map = SeqMorphism;

    fn key(&self, x: &Self::Obj) -> u64 {
        x.fingerprint()
    }

    fn identity(&self, x: &Self::Obj) -> SeqMorphism {
        SeqMorphism::identity(x)
    }

    fn then(&self, f: &SeqMorphism, g: &SeqMorphism) -> SeqMorphism {
        f.then(g)
    }

    fn is_iso(&self, f: &SeqMorphism) -> bool {
        f.is_iso()
    }

    fn sizes(&self, x: &Self::Obj) -> Vec<usize> {
        x.sizes()
    }

    fn limit(&self, nodes: &[Self::Obj], edges: &[(usize, usize, SeqMorphism)]) -> Result<Cone<Self>, OplaxError> {
        let refs: Vec<&TruncSeq> = nodes.iter().map(|x| x.as_ref()).collect();
        let l = seq_limit(&refs, edges)?;
        Ok(Cone { apex: Rc::new(l.seq), legs: l.legs })
    }

    fn factor(&self, src: &Self::Obj, cone: &Cone<Self>, legs: &[SeqMorphism]) -> Result<SeqMorphism, OplaxError> {
        seq_factor(&src.sizes(), legs, &cone.legs)
    }

    fn twist(&self, x: &Self::Obj) -> Option<SeqMorphism> {
        seq_twist(x)
    }

    fn differs(&self, f: &SeqMorphism, g: &SeqMorphism) -> Option<String> {
        seq_differs(f, g)
    }
}

type Cache<K, V> = RefCell<HashMap<K, V>>;
/// A product with its underlying sequence, shared.
type Product<R> = (Rc<R>, Rc<TruncSeq>);

/// `μ2 = ⊙`, `μ3` the three-fold product, and the comparison maps between
/// them, on based sequences truncated at `cap`.
pub struct KellyLower {
    pub cap: usize,
    carrier: SeqCarrier,
    unit: Rc<TruncSeq>,
    k2: Cache<(u64, u64), Product<KellyResult>>,
    k3: Cache<(u64, u64, u64), Product<Mu3Result>>,
    alphas: Cache<(usize, usize, Vec<u64>), SeqMorphism>,
}

impl KellyLower {
    pub fn new(cap: usize) -> Self {
        KellyLower {
            cap,
            carrier: SeqCarrier,
            unit: Rc::new(TruncSeq::i1(cap)),
            k2: RefCell::new(HashMap::new()),
            k3: RefCell::new(HashMap::new()),
            alphas: RefCell::new(HashMap::new()),
        }
    }

    pub fn obj(&self, x: &TruncSeq) -> Rc<TruncSeq> {
        Rc::new(x.extend_cap(self.cap))
    }

    pub fn kelly(&self, a: &TruncSeq, b: &TruncSeq) -> Result<Rc<KellyResult>, OplaxError> {
        Ok(self.k2(a, b)?.0)
    }

    fn k2(&self, a: &TruncSeq, b: &TruncSeq) -> Result<Product<KellyResult>, OplaxError> {
        let key = (a.fingerprint(), b.fingerprint());
        if let Some(v) = self.k2.borrow().get(&key) {
            return Ok(v.clone());
        }
        let r = kelly_exact(a, b, self.cap)?;
        let seq = Rc::new(r.seq.clone());
        let v = (Rc::new(r), seq);
        self.k2.borrow_mut().insert(key, v.clone());
        Ok(v)
    }

    fn k3(&self, a: &TruncSeq, b: &TruncSeq, c: &TruncSeq) -> Result<Product<Mu3Result>, OplaxError> {
        let key = (a.fingerprint(), b.fingerprint(), c.fingerprint());
        if let Some(v) = self.k3.borrow().get(&key) {
            return Ok(v.clone());
        }
        let r = mu3(a, b, c, self.cap, None, false)?;
        let seq = Rc::new(r.seq.clone());
        let v = (Rc::new(r), seq);
        self.k3.borrow_mut().insert(key, v.clone());
        Ok(v)
    }

    /// `α_{2,l,0}`: put a unit into the product, reading `(k, x, y)` as a
    /// three-fold element whose unit entry is the identity.
    fn unit_into_three(&self, l: usize, a: &TruncSeq, b: &TruncSeq) -> Result<SeqMorphism, OplaxError> {
        let (src, _) = self.k2(a, b)?;
        let i = &*self.unit;
        let (three, tseq) = match l {
            0 => self.k3(i, a, b)?,
            1 => self.k3(a, i, b)?,
            _ => self.k3(a, b, i)?,
        };
        let cmp = descend_kelly(&src, &tseq, |n, k, x, y| match l {
            0 => three.class_of(n, 1, k, 0, &BoxElem { blocks: vec![0; k], parts: vec![x] }, y),
            1 => three.class_of(n, k, k, x, &identity_box(k), y),
            _ => three.class_of(n, k, n, x, y, &identity_box(n)),
        });
        mapped(cmp, "α2,l,0")
    }
}

impl OplaxStructure for KellyLower {
    type C = SeqCarrier;

    fn carrier(&self) -> &SeqCarrier {
        &self.carrier
    }

    fn max_arity(&self) -> usize {
        3
    }

    fn mu(&self, xs: &[Rc<TruncSeq>]) -> Result<Rc<TruncSeq>, OplaxError> {
        match xs {
            [] => Ok(self.unit.clone()),
            [a] => Ok(a.clone()),
            [a, b] => Ok(self.k2(a, b)?.1),
            [a, b, c] => Ok(self.k3(a, b, c)?.1),
            _ => Err(OplaxError::Arity(xs.len(), 3)),
        }
    }

    fn mu_map(&self, xs: &[Rc<TruncSeq>], ys: &[Rc<TruncSeq>], fs: &[SeqMorphism]) -> Result<SeqMorphism, OplaxError> {
        match (xs, ys, fs) {
            ([], [], []) => Ok(SeqMorphism::identity(&self.unit)),
            ([_], [_], [f]) => Ok(f.clone()),
            ([a, b], [c, d], [f, g]) => mapped(kelly_map(&self.k2(a, b)?.0, &self.k2(c, d)?.0, f, g), "μ2 on maps"),
            ([a, b, c], [d, e, g], [f1, f2, f3]) => {
                mapped(mu3_map(&self.k3(a, b, c)?.0, &self.k3(d, e, g)?.0, f1, f2, f3), "μ3 on maps")
            }
            _ => Err(OplaxError::Arity(xs.len(), 3)),
        }
    }

    fn alpha(&self, l: usize, r: usize, xs: &[Rc<TruncSeq>]) -> Result<SeqMorphism, OplaxError> {
        let n = xs.len();
        if n > 3 || n + 1 - r > 3 {
            return Err(OplaxError::Arity(n.max(n + 1 - r), 3));
        }
        if r == 1 || (l == 0 && r == n) {
            return Ok(SeqMorphism::identity(&*self.mu(xs)?));
        }
        let key = (l, r, xs.iter().map(|x| x.fingerprint()).collect());
        if let Some(f) = self.alphas.borrow().get(&key) {
            return Ok(f.clone());
        }
        let f = match (n, l, r) {
            (1, 0, 0) => mapped(unit_into_left(&xs[0], &self.k2(&self.unit, &xs[0])?.0), "α1,0,0"),
            (1, 1, 0) => mapped(unit_into_right(&xs[0], &self.k2(&xs[0], &self.unit)?.0), "α1,1,0"),
            (2, l, 0) => self.unit_into_three(l, &xs[0], &xs[1]),
            (3, 0, 2) => {
                let (m, _) = self.k3(&xs[0], &xs[1], &xs[2])?;
                let (inner, ab) = self.k2(&xs[0], &xs[1])?;
                mapped(s1(&m, &inner, &self.k2(&ab, &xs[2])?.0), "α3,0,2")
            }
            (3, 1, 2) => {
                let (m, _) = self.k3(&xs[0], &xs[1], &xs[2])?;
                let (inner, bc) = self.k2(&xs[1], &xs[2])?;
                mapped(s2(&m, &inner, &self.k2(&xs[0], &bc)?.0), "α3,1,2")
            }
            _ => Err(OplaxError::Arity(n, 3)),
        }?;
        self.alphas.borrow_mut().insert(key, f.clone());
        Ok(f)
    }
}

/// A sequence of pointed finite sets: `points[n]` is fixed by every
/// structure map into level `n`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PointedSeq {
    pub seq: TruncSeq,
    pub points: Vec<usize>,
}

impl PointedSeq {
    /// `X_+`: a disjoint base point added at every level.
    pub fn plus(x: &TruncSeq) -> Self {
        let levels = x
            .levels()
            .iter()
            .map(|l| FinSetObj::new(std::iter::once("∗".to_string()).chain(l.labels().iter().cloned()).collect()))
            .collect();
        let seq = TruncSeq::from_fn(x.flavor(), x.cap(), levels, None, |f, e| if e == 0 { 0 } else { x.apply(f, e - 1) + 1 });
        PointedSeq { points: vec![0; x.cap() + 1], seq }
    }

    fn nonbase(&self, n: usize) -> Vec<usize> {
        (0..self.seq.size(n)).filter(|&e| e != self.points[n]).collect()
    }
}

#[derive(Clone, Debug)]
pub struct PointedCarrier {
    pub cap: usize,
}

impl Carrier for PointedCarrier {
    type Obj = Rc<PointedSeq>;
    type Map = SeqMorphism;

    fn key(&self, x: &Self::Obj) -> u64 {
        let mut h = DefaultHasher::new();
        x.seq.fingerprint().hash(&mut h);
        x.points.hash(&mut h);
        h.finish()
    }

    fn identity(&self, x: &Self::Obj) -> SeqMorphism {
        SeqMorphism::identity(&x.seq)
    }

    fn then(&self, f: &SeqMorphism, g: &SeqMorphism) -> SeqMorphism {
        f.then(g)
    }

    fn is_iso(&self, f: &SeqMorphism) -> bool {
        f.is_iso()
    }

    fn sizes(&self, x: &Self::Obj) -> Vec<usize> {
        x.seq.sizes()
    }

    fn limit(&self, nodes: &[Self::Obj], edges: &[(usize, usize, SeqMorphism)]) -> Result<Cone<Self>, OplaxError> {
        let refs: Vec<&TruncSeq> = nodes.iter().map(|x| &x.seq).collect();
        let l = seq_limit(&refs, edges)?;
        let points = (0..=l.seq.cap())
            .map(|n| {
                let t: Vec<usize> = nodes.iter().map(|x| x.points[n]).collect();
                (0..l.seq.size(n)).find(|&e| l.legs.iter().map(|g| g.components[n].apply(e)).eq(t.iter().copied()))
            })
            .collect::<Option<Vec<usize>>>()
            .ok_or_else(|| OplaxError::IllDefined("base points are not compatible".into()))?;
        Ok(Cone { apex: Rc::new(PointedSeq { seq: l.seq, points }), legs: l.legs })
    }

    fn factor(&self, src: &Self::Obj, cone: &Cone<Self>, legs: &[SeqMorphism]) -> Result<SeqMorphism, OplaxError> {
        seq_factor(&src.seq.sizes(), legs, &cone.legs)
    }

    fn zero(&self) -> Option<Self::Obj> {
        let levels = vec![FinSetObj::new(vec!["∗".into()]); self.cap + 1];
        let seq = TruncSeq::from_fn(crate::sequences::Flavor::Lambda, self.cap, levels, None, |_, _| 0);
        Some(Rc::new(PointedSeq { seq, points: vec![0; self.cap + 1] }))
    }

    fn zero_map(&self, src: &Self::Obj, dst: &Self::Obj) -> Option<SeqMorphism> {
        let comps = (0..=self.cap).map(|n| FinMap::raw(dst.seq.size(n), vec![dst.points[n]; src.seq.size(n)])).collect();
        Some(SeqMorphism::unchecked(comps))
    }

    fn twist(&self, x: &Self::Obj) -> Option<SeqMorphism> {
        seq_twist(&x.seq)
    }

    fn differs(&self, f: &SeqMorphism, g: &SeqMorphism) -> Option<String> {
        seq_differs(f, g)
    }
}

/// The levelwise smash product, a genuine monoidal structure; its `α` are
/// the regrouping bijections and the unit is `S⁰`.
pub struct SmashLower {
    carrier: PointedCarrier,
    cache: Cache<Vec<u64>, Rc<PointedSeq>>,
}

impl SmashLower {
    pub fn new(cap: usize) -> Self {
        SmashLower { carrier: PointedCarrier { cap }, cache: RefCell::new(HashMap::new()) }
    }

    fn smash(&self, xs: &[Rc<PointedSeq>]) -> Rc<PointedSeq> {
        let key: Vec<u64> = xs.iter().map(|x| self.carrier.key(x)).collect();
        if let Some(v) = self.cache.borrow().get(&key) {
            return v.clone();
        }
        let cap = self.carrier.cap;
        let levels = (0..=cap)
            .map(|n| {
                let nb: Vec<Vec<usize>> = xs.iter().map(|x| x.nonbase(n)).collect();
                let radix: Vec<usize> = nb.iter().map(Vec::len).collect();
                let total: usize = radix.iter().product();
                let labels = std::iter::once("∗".to_string())
                    .chain((0..total).map(|i| {
                        let c = unrank(i, &radix);
                        let parts: Vec<&str> = c.iter().enumerate().map(|(j, &p)| xs[j].seq.label(n, nb[j][p])).collect();
                        if parts.is_empty() { "1".to_string() } else { parts.join("∧") }
                    }))
                    .collect();
                FinSetObj::new(labels)
            })
            .collect();
        let seq = TruncSeq::from_fn(crate::sequences::Flavor::Lambda, cap, levels, None, |f, e| {
            let coords = decode(xs, f.dst(), e);
            encode(xs, f.src(), coords.map(|c| c.iter().zip(xs).map(|(&v, x)| x.seq.apply(f, v)).collect()))
        });
        let v = Rc::new(PointedSeq { seq, points: vec![0; cap + 1] });
        self.cache.borrow_mut().insert(key, v.clone());
        v
    }
}

/// Coordinates of an element of the smash of `xs` (the element itself for a
/// single factor); `None` is the base point.
fn decode(xs: &[Rc<PointedSeq>], n: usize, e: usize) -> Option<Vec<usize>> {
    if let [x] = xs {
        return (e != x.points[n]).then(|| vec![e]);
    }
    if e == 0 {
        return None;
    }
    let nb: Vec<Vec<usize>> = xs.iter().map(|x| x.nonbase(n)).collect();
    let radix: Vec<usize> = nb.iter().map(Vec::len).collect();
    Some(unrank(e - 1, &radix).into_iter().zip(&nb).map(|(p, l)| l[p]).collect())
}

fn encode(xs: &[Rc<PointedSeq>], n: usize, coords: Option<Vec<usize>>) -> usize {
    if let [x] = xs {
        return coords.map_or(x.points[n], |c| c[0]);
    }
    let Some(c) = coords else { return 0 };
    let nb: Vec<Vec<usize>> = xs.iter().map(|x| x.nonbase(n)).collect();
    let pos: Option<Vec<usize>> = c.iter().zip(&nb).map(|(v, l)| l.iter().position(|u| u == v)).collect();
    match pos {
        Some(p) => 1 + rank(&p, &nb.iter().map(Vec::len).collect::<Vec<_>>()),
        None => 0,
    }
}

impl OplaxStructure for SmashLower {
    type C = PointedCarrier;

    fn carrier(&self) -> &PointedCarrier {
        &self.carrier
    }

    fn max_arity(&self) -> usize {
        3
    }

    fn mu(&self, xs: &[Rc<PointedSeq>]) -> Result<Rc<PointedSeq>, OplaxError> {
        match xs.len() {
            1 => Ok(xs[0].clone()),
            n if n > 3 => Err(OplaxError::Arity(n, 3)),
            _ => Ok(self.smash(xs)),
        }
    }

    fn mu_map(&self, xs: &[Rc<PointedSeq>], ys: &[Rc<PointedSeq>], fs: &[SeqMorphism]) -> Result<SeqMorphism, OplaxError> {
        if xs.len() > 3 {
            return Err(OplaxError::Arity(xs.len(), 3));
        }
        let src = self.mu(xs)?;
        let comps = (0..=self.carrier.cap)
            .map(|n| {
                let table = (0..src.seq.size(n))
                    .map(|e| {
                        let c = decode(xs, n, e).map(|c| c.iter().zip(fs).map(|(&v, f)| f.components[n].apply(v)).collect());
                        encode(ys, n, c)
                    })
                    .collect();
                FinMap::raw(self.mu(ys).map(|y| y.seq.size(n)).unwrap_or(0), table)
            })
            .collect();
        Ok(SeqMorphism::unchecked(comps))
    }

    fn alpha(&self, l: usize, r: usize, xs: &[Rc<PointedSeq>]) -> Result<SeqMorphism, OplaxError> {
        let n = xs.len();
        if n > 3 || n + 1 - r > 3 {
            return Err(OplaxError::Arity(n.max(n + 1 - r), 3));
        }
        let src = self.mu(xs)?;
        let args = grouped(self, xs, l, r)?;
        let dst = self.mu(&args)?;
        let comps = (0..=self.carrier.cap)
            .map(|m| {
                let table = (0..src.seq.size(m))
                    .map(|e| {
                        let c = decode(xs, m, e).map(|c| {
                            let mut out = c[..l].to_vec();
                            out.push(encode(&xs[l..l + r], m, Some(c[l..l + r].to_vec())));
                            out.extend_from_slice(&c[l + r..]);
                            out
                        });
                        encode(&args, m, c)
                    })
                    .collect();
                FinMap::raw(dst.seq.size(m), table)
            })
            .collect();
        Ok(SeqMorphism::unchecked(comps))
    }
}

/// `ᾱ_{n,l,0} = 0` for `n > 0`; everything else unchanged.
pub struct Reduced<S: OplaxStructure> {
    pub inner: S,
}

impl<S: OplaxStructure> Reduced<S> {
    pub fn new(inner: S) -> Result<Self, OplaxError> {
        inner.carrier().zero().ok_or(OplaxError::NoZero)?;
        Ok(Reduced { inner })
    }
}

impl<S: OplaxStructure> OplaxStructure for Reduced<S> {
    type C = S::C;

    fn carrier(&self) -> &S::C {
        self.inner.carrier()
    }

    fn max_arity(&self) -> usize {
        self.inner.max_arity()
    }

    fn mu(&self, xs: &[Obj<S>]) -> Result<Obj<S>, OplaxError> {
        self.inner.mu(xs)
    }

    fn mu_map(&self, xs: &[Obj<S>], ys: &[Obj<S>], fs: &[Map<S>]) -> Result<Map<S>, OplaxError> {
        self.inner.mu_map(xs, ys, fs)
    }

    fn alpha(&self, l: usize, r: usize, xs: &[Obj<S>]) -> Result<Map<S>, OplaxError> {
        if r == 0 && !xs.is_empty() {
            let src = self.mu(xs)?;
            let dst = self.mu(&grouped(self, xs, l, 0)?)?;
            return self.carrier().zero_map(&src, &dst).ok_or(OplaxError::NoZero);
        }
        self.inner.alpha(l, r, xs)
    }
}

/// `μ_n` replaced by the zero object for `n > k`, with zero maps into and
/// out of it.
pub struct Truncated<S: OplaxStructure> {
    pub inner: S,
    pub k: usize,
    zero: Obj<S>,
}

impl<S: OplaxStructure> Truncated<S> {
    pub fn new(inner: S, k: usize) -> Result<Self, OplaxError> {
        let zero = inner.carrier().zero().ok_or(OplaxError::NoZero)?;
        Ok(Truncated { inner, k, zero })
    }
}

impl<S: OplaxStructure> OplaxStructure for Truncated<S> {
    type C = S::C;

    fn carrier(&self) -> &S::C {
        self.inner.carrier()
    }

    fn max_arity(&self) -> usize {
        self.inner.max_arity()
    }

    fn mu(&self, xs: &[Obj<S>]) -> Result<Obj<S>, OplaxError> {
        if xs.len() > self.k {
            return Ok(self.zero.clone());
        }
        self.inner.mu(xs)
    }

    fn mu_map(&self, xs: &[Obj<S>], ys: &[Obj<S>], fs: &[Map<S>]) -> Result<Map<S>, OplaxError> {
        if xs.len() > self.k {
            return Ok(self.carrier().identity(&self.zero));
        }
        self.inner.mu_map(xs, ys, fs)
    }

    fn alpha(&self, l: usize, r: usize, xs: &[Obj<S>]) -> Result<Map<S>, OplaxError> {
        let n = xs.len();
        if n > self.k || n + 1 - r > self.k {
            let src = self.mu(xs)?;
            let dst = self.mu(&grouped(self, xs, l, r)?)?;
            return self.carrier().zero_map(&src, &dst).ok_or(OplaxError::NoZero);
        }
        self.inner.alpha(l, r, xs)
    }
}

/// One `α_{n,l,r}` post-composed with a non-identity permutation of its
/// target, for mutation tests.
pub struct Twisted<S: OplaxStructure> {
    pub inner: S,
    pub n: usize,
    pub l: usize,
    pub r: usize,
}

impl<S: OplaxStructure> OplaxStructure for Twisted<S> {
    type C = S::C;

    fn carrier(&self) -> &S::C {
        self.inner.carrier()
    }

    fn max_arity(&self) -> usize {
        self.inner.max_arity()
    }

    fn mu(&self, xs: &[Obj<S>]) -> Result<Obj<S>, OplaxError> {
        self.inner.mu(xs)
    }

    fn mu_map(&self, xs: &[Obj<S>], ys: &[Obj<S>], fs: &[Map<S>]) -> Result<Map<S>, OplaxError> {
        self.inner.mu_map(xs, ys, fs)
    }

    fn alpha(&self, l: usize, r: usize, xs: &[Obj<S>]) -> Result<Map<S>, OplaxError> {
        let a = self.inner.alpha(l, r, xs)?;
        if (xs.len(), l, r) != (self.n, self.l, self.r) {
            return Ok(a);
        }
        let dst = self.mu(&grouped(self, xs, l, r)?)?;
        Ok(match self.carrier().twist(&dst) {
            Some(t) => self.carrier().then(&a, &t),
            None => a,
        })
    }
}
