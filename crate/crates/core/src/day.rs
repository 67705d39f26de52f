//! Day convolution `⊠` of Λ-sequences.
//!
//! An element of `(D ⊠ E)(n)` is a class of triples `(λ, d, e)` with
//! `λ : n -> j+k`, `d ∈ D(j)`, `e ∈ E(k)`, under
//! `(λ, D(f1)d, E(f2)e) ~ ((f1 ⊕ f2)λ, d, e)`. Every class has a unique
//! normal form: a splitting of `{1..n}` into labelled blocks together with one
//! element per block. [`BoxElem`] is that normal form for any number of
//! factors, and is reused by the Kelly product.

use std::collections::HashMap;

use thiserror::Error;

use crate::finset::{coend, CoendMor, FinMap, FinSetObj, UnionFind};
use crate::index_cats::{enumerate, factorial, perm_rank, split_injection, Cat, IndexMor};
use crate::sequences::{Flavor, SeqMorphism, TruncSeq};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum DayError {
    #[error("factor {0} has no base point")]
    Unbased(usize),
    #[error(transparent)]
    Fin(#[from] crate::finset::FinError),
}

/// Normal form of an element of `E_1 ⊠ … ⊠ E_k` at level `n`: the block of
/// every point (0-based) and one part per block.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct BoxElem {
    pub blocks: Vec<usize>,
    pub parts: Vec<usize>,
}

impl BoxElem {
    pub fn level(&self) -> usize {
        self.blocks.len()
    }

    pub fn width(&self) -> usize {
        self.parts.len()
    }

    /// Points (1-based, increasing) of block `t`.
    pub fn block(&self, t: usize) -> Vec<usize> {
        self.blocks.iter().enumerate().filter(|(_, &b)| b == t).map(|(x, _)| x + 1).collect()
    }

    pub fn block_sizes(&self) -> Vec<usize> {
        let mut s = vec![0; self.parts.len()];
        for &b in &self.blocks {
            s[b] += 1;
        }
        s
    }

    /// Blocks are consecutive runs `1..n1`, `n1+1..n1+n2`, …
    pub fn is_consecutive(&self) -> bool {
        self.blocks.windows(2).all(|w| w[0] <= w[1])
    }

    /// Consecutive element with the given block sizes and parts.
    pub fn consecutive(sizes: &[usize], parts: Vec<usize>) -> Self {
        let blocks = sizes.iter().enumerate().flat_map(|(t, &s)| std::iter::repeat_n(t, s)).collect();
        BoxElem { blocks, parts }
    }

    /// The shuffle `σ : n -> n` sending the points of each block, in order,
    /// to consecutive positions. The element is the class of `(σ, parts)`.
    pub fn shuffle(&self) -> IndexMor {
        let sizes = self.block_sizes();
        let mut offs = vec![0; sizes.len()];
        for t in 1..sizes.len() {
            offs[t] = offs[t - 1] + sizes[t - 1];
        }
        let mut seen = vec![0; sizes.len()];
        let table = self
            .blocks
            .iter()
            .map(|&b| {
                seen[b] += 1;
                offs[b] + seen[b]
            })
            .collect();
        IndexMor::raw(Cat::Sigma, self.blocks.len(), table)
    }

    /// Restriction along `g : n' -> n`, one factor sequence per block.
    pub fn pullback<'a>(&self, g: &IndexMor, factor: impl Fn(usize) -> &'a TruncSeq) -> BoxElem {
        let k = self.parts.len();
        let mut rank = vec![0; self.blocks.len() + 1];
        let mut count = vec![0; k];
        for (x, &b) in self.blocks.iter().enumerate() {
            count[b] += 1;
            rank[x + 1] = count[b];
        }
        let blocks: Vec<usize> = g.table().iter().map(|&y| self.blocks[y - 1]).collect();
        let mut induced: Vec<Vec<usize>> = vec![Vec::new(); k];
        for &y in g.table() {
            induced[self.blocks[y - 1]].push(rank[y]);
        }
        let parts = (0..k)
            .map(|t| {
                let gt = IndexMor::raw(Cat::Lambda, count[t], std::mem::take(&mut induced[t]));
                factor(t).apply(&gt, self.parts[t])
            })
            .collect();
        BoxElem { blocks, parts }
    }

    /// Covariant action of `f : k -> k'` on blocks, filling the new blocks
    /// with the base point `eta`.
    pub fn pushforward(&self, f: &IndexMor, eta: usize) -> BoxElem {
        let blocks = self.blocks.iter().map(|&b| f.apply(b + 1) - 1).collect();
        let mut parts = vec![eta; f.dst()];
        for (t, &p) in self.parts.iter().enumerate() {
            parts[f.apply(t + 1) - 1] = p;
        }
        BoxElem { blocks, parts }
    }

    pub fn render(&self, label: impl Fn(usize, usize, usize) -> String) -> String {
        let sizes = self.block_sizes();
        let body: Vec<String> = (0..self.parts.len())
            .map(|t| {
                let pts: Vec<String> = self.block(t).iter().map(usize::to_string).collect();
                format!("{{{}}}:{}", pts.join(","), label(t, sizes[t], self.parts[t]))
            })
            .collect();
        format!("[{}]", body.join(" "))
    }
}

/// All normal forms at one level, in a fixed order, with reverse lookup.
#[derive(Clone, Debug, Default)]
pub struct BoxLevel {
    pub elems: Vec<BoxElem>,
    index: HashMap<BoxElem, usize>,
}

impl BoxLevel {
    pub fn from_elems(elems: Vec<BoxElem>) -> Self {
        let index = elems.iter().enumerate().map(|(i, e)| (e.clone(), i)).collect();
        BoxLevel { elems, index }
    }

    /// Normal forms of `factors[0] ⊠ … ⊠ factors[k-1]` at level `n`, ordered
    /// by block assignment (lexicographic) and then by parts.
    pub fn enumerate(factors: &[&TruncSeq], n: usize) -> Self {
        let k = factors.len();
        let mut elems = Vec::new();
        if k == 0 {
            if n == 0 {
                elems.push(BoxElem { blocks: vec![], parts: vec![] });
            }
            return BoxLevel::from_elems(elems);
        }
        let mut blocks = vec![0usize; n];
        loop {
            let mut sizes = vec![0; k];
            for &b in &blocks {
                sizes[b] += 1;
            }
            let counts: Vec<usize> = (0..k).map(|t| factors[t].size(sizes[t])).collect();
            if counts.iter().all(|&c| c > 0) {
                let total: usize = counts.iter().product();
                for idx in 0..total {
                    elems.push(BoxElem { blocks: blocks.clone(), parts: crate::finset::unrank(idx, &counts) });
                }
            }
            // next assignment in lexicographic order
            let mut i = n;
            loop {
                if i == 0 {
                    return BoxLevel::from_elems(elems);
                }
                i -= 1;
                if blocks[i] + 1 < k {
                    blocks[i] += 1;
                    blocks[i + 1..].iter_mut().for_each(|b| *b = 0);
                    break;
                }
            }
        }
    }

    pub fn len(&self) -> usize {
        self.elems.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elems.is_empty()
    }

    pub fn get(&self, e: &BoxElem) -> Option<usize> {
        self.index.get(e).copied()
    }

    pub fn index_of(&self, e: &BoxElem) -> usize {
        match self.index.get(e) {
            Some(&i) => i,
            None => panic!("normal form {e:?} not enumerated"),
        }
    }
}

/// A product computed as a quotient, with the projection from raw elements
/// and the normal form of every class.
#[derive(Clone, Debug)]
pub struct BoxResult {
    pub seq: TruncSeq,
    /// Raw element index to class, one map per level.
    pub witnesses: Vec<FinMap>,
    pub normal_forms: Vec<BoxLevel>,
}

impl BoxResult {
    pub fn class_of_nf(&self, e: &BoxElem) -> Option<usize> {
        self.normal_forms.get(e.level()).and_then(|l| l.get(e))
    }

    pub fn nf(&self, n: usize, class: usize) -> &BoxElem {
        &self.normal_forms[n].elems[class]
    }
}

fn nf_label(factors: &[&TruncSeq], e: &BoxElem) -> String {
    e.render(|t, s, p| factors[t].label(s, p).to_string())
}

fn check_based(factors: &[&TruncSeq]) -> Option<Vec<usize>> {
    factors.iter().map(|f| f.base()).collect()
}

struct RawBox2<'a> {
    d: &'a TruncSeq,
    e: &'a TruncSeq,
    n: usize,
    offs: Vec<usize>,
}

impl<'a> RawBox2<'a> {
    fn new(d: &'a TruncSeq, e: &'a TruncSeq, n: usize) -> Self {
        let mut offs = Vec::with_capacity(n + 2);
        let mut acc = 0;
        for j in 0..=n {
            offs.push(acc);
            acc += factorial(n) * d.size(j) * e.size(n - j);
        }
        offs.push(acc);
        RawBox2 { d, e, n, offs }
    }

    fn total(&self) -> usize {
        self.offs[self.n + 1]
    }

    fn index(&self, j: usize, sigma: &[usize], x: usize, y: usize) -> usize {
        let (dj, ek) = (self.d.size(j), self.e.size(self.n - j));
        self.offs[j] + perm_rank(sigma) * dj * ek + x * ek + y
    }

    fn decode(&self, mut i: usize) -> (usize, usize, usize, usize) {
        let j = (0..=self.n).rev().find(|&j| self.offs[j] <= i).unwrap_or(0);
        i -= self.offs[j];
        let (dj, ek) = (self.d.size(j), self.e.size(self.n - j));
        (j, i / (dj * ek), (i / ek) % dj, i % ek)
    }
}

/// Normal form of the class of `(σ, d, e)`.
fn box2_nf(d: &TruncSeq, e: &TruncSeq, j: usize, sigma: &IndexMor, x: usize, y: usize) -> BoxElem {
    let (_, f1, f2) = split_injection(sigma, j);
    BoxElem {
        blocks: sigma.table().iter().map(|&v| usize::from(v > j)).collect(),
        parts: vec![d.apply(&f1, x), e.apply(&f2, y)],
    }
}

fn out_flavor(a: &TruncSeq, b: &TruncSeq) -> Flavor {
    a.flavor().meet(b.flavor())
}

/// `D ⊠ E` from the explicit formula: a quotient of
/// `⊔_{j+k=n} Σ_n × D(j) × E(k)` by `Σ_j × Σ_k`.
pub fn box2_explicit(d: &TruncSeq, e: &TruncSeq) -> BoxResult {
    box2_explicit_capped(d, e, d.cap().min(e.cap()))
}

pub fn box2_explicit_capped(d: &TruncSeq, e: &TruncSeq, cap: usize) -> BoxResult {
    let perms: Vec<Vec<IndexMor>> = (0..=cap).map(|n| enumerate(Cat::Sigma, n, n)).collect();
    let mut witnesses = Vec::new();
    let mut nfs = Vec::new();
    let mut reps: Vec<Vec<(usize, usize, usize, usize)>> = Vec::new();
    for n in 0..=cap {
        let raw = RawBox2::new(d, e, n);
        let mut uf = UnionFind::new(raw.total());
        for j in 0..=n {
            let k = n - j;
            for sigma in &perms[n] {
                for t in 1..j {
                    let tau = IndexMor::transposition(j, t);
                    let moved = tau.block_sum(&IndexMor::identity(Cat::Sigma, k)).compose(sigma).expect("Σ_n");
                    for x in 0..d.size(j) {
                        for y in 0..e.size(k) {
                            uf.union(raw.index(j, sigma.table(), d.apply(&tau, x), y), raw.index(j, moved.table(), x, y));
                        }
                    }
                }
                for t in 1..k {
                    let tau = IndexMor::transposition(k, t);
                    let moved = IndexMor::identity(Cat::Sigma, j).block_sum(&tau).compose(sigma).expect("Σ_n");
                    for x in 0..d.size(j) {
                        for y in 0..e.size(k) {
                            uf.union(raw.index(j, sigma.table(), x, e.apply(&tau, y)), raw.index(j, moved.table(), x, y));
                        }
                    }
                }
            }
        }
        let q = uf.classes();
        let lvl_reps: Vec<_> = q.reps.iter().map(|&r| raw.decode(r)).collect();
        let elems = lvl_reps.iter().map(|&(j, s, x, y)| box2_nf(d, e, j, &perms[n][s], x, y)).collect();
        nfs.push(BoxLevel::from_elems(elems));
        reps.push(lvl_reps);
        witnesses.push(q.projection());
    }
    let factors = [d, e];
    let levels = nfs.iter().map(|l| FinSetObj::new(l.elems.iter().map(|x| nf_label(&factors, x)).collect())).collect();
    let base = check_based(&factors).map(|b| nfs[0].index_of(&BoxElem { blocks: vec![], parts: b }));
    let seq = TruncSeq::from_fn(out_flavor(d, e), cap, levels, base, |g, c| {
        let (n, n2) = (g.dst(), g.src());
        let (j, s, x, y) = reps[n][c];
        let lambda = perms[n][s].compose(g).expect("composable");
        let (pi, f1, f2) = split_injection(&lambda, j);
        let raw = RawBox2::new(d, e, n2);
        witnesses[n2].apply(raw.index(f1.src(), pi.table(), d.apply(&f1, x), e.apply(&f2, y)))
    });
    BoxResult { seq, witnesses, normal_forms: nfs }
}

struct CoendLevel {
    nodes: Vec<(usize, usize)>,
    homs: Vec<Vec<IndexMor>>,
    legs: Vec<FinMap>,
}

/// `D ⊠ E` as the coend `∫^{j1,j2} Λ(-, j1+j2) × D(j1) × E(j2)` over all
/// pairs with `j1 + j2 ≤ cap`.
pub fn box2_coend(d: &TruncSeq, e: &TruncSeq) -> Result<BoxResult, DayError> {
    let cap = d.cap().min(e.cap());
    let cat = out_flavor(d, e).cat();
    let mut nodes: Vec<(usize, usize)> =
        (0..=cap).flat_map(|s| (0..=s).map(move |j1| (j1, s - j1))).collect();
    nodes.sort_by_key(|&(a, b)| (a + b, a));
    let node_ix: HashMap<(usize, usize), usize> = nodes.iter().enumerate().map(|(i, &c)| (c, i)).collect();
    let mut levels = Vec::new();
    let mut witnesses = Vec::new();
    let mut nfs = Vec::new();
    let mut reps = Vec::new();
    for n in 0..=cap {
        let homs: Vec<Vec<IndexMor>> = nodes.iter().map(|&(a, b)| enumerate(cat, n, a + b)).collect();
        let diag: Vec<FinSetObj> = nodes
            .iter()
            .zip(&homs)
            .map(|(&(a, b), h)| FinSetObj::anonymous(h.len() * d.size(a) * e.size(b)))
            .collect();
        let mut mors = Vec::new();
        for (ia, &(a1, a2)) in nodes.iter().enumerate() {
            for (ib, &(b1, b2)) in nodes.iter().enumerate() {
                for f1 in enumerate(cat, a1, b1) {
                    for f2 in enumerate(cat, a2, b2) {
                        if f1.is_identity() && f2.is_identity() {
                            continue;
                        }
                        let f = f1.block_sum(&f2);
                        let lams = &homs[ia];
                        let size = lams.len() * d.size(b1) * e.size(b2);
                        let mut left = Vec::with_capacity(size);
                        let mut right = Vec::with_capacity(size);
                        for (li, lam) in lams.iter().enumerate() {
                            let moved = f.compose(lam).expect("composable");
                            let ri = homs[ib].iter().position(|l| l.table() == moved.table()).expect("listed");
                            for x in 0..d.size(b1) {
                                for y in 0..e.size(b2) {
                                    left.push((li * d.size(a1) + d.apply(&f1, x)) * e.size(a2) + e.apply(&f2, y));
                                    right.push((ri * d.size(b1) + x) * e.size(b2) + y);
                                }
                            }
                        }
                        mors.push(CoendMor {
                            from: ia,
                            to: ib,
                            obj: FinSetObj::anonymous(size),
                            left: FinMap::new(diag[ia].size(), left)?,
                            right: FinMap::new(diag[ib].size(), right)?,
                        });
                    }
                }
            }
        }
        let c = coend(&diag, &mors)?;
        // representative of each class: first element hitting it
        let mut lvl_reps = vec![None; c.apex.size()];
        for (ni, leg) in c.legs.iter().enumerate() {
            for (i, &cls) in leg.table().iter().enumerate() {
                if lvl_reps[cls].is_none() {
                    lvl_reps[cls] = Some((ni, i));
                }
            }
        }
        let lvl_reps: Vec<(usize, usize)> = lvl_reps.into_iter().map(|r| r.expect("class hit")).collect();
        let elems = lvl_reps
            .iter()
            .map(|&(ni, i)| {
                let (a, b) = nodes[ni];
                let (li, rest) = (i / (d.size(a) * e.size(b)), i % (d.size(a) * e.size(b)));
                let lam = &homs[ni][li];
                let (pi, f1, f2) = split_injection(lam, a);
                
                box2_nf(d, e, f1.src(), &pi, d.apply(&f1, rest / e.size(b)), e.apply(&f2, rest % e.size(b)))
            })
            .collect();
        nfs.push(BoxLevel::from_elems(elems));
        let total: usize = c.legs.iter().map(FinMap::src).sum();
        let table: Vec<usize> = c.legs.iter().flat_map(|l| l.table().iter().copied()).collect();
        witnesses.push(FinMap::raw(c.apex.size(), table));
        debug_assert_eq!(witnesses.last().map(FinMap::src), Some(total));
        reps.push(lvl_reps);
        levels.push(CoendLevel { nodes: nodes.clone(), homs, legs: c.legs });
    }
    let factors = [d, e];
    let labels = nfs.iter().map(|l| FinSetObj::new(l.elems.iter().map(|x| nf_label(&factors, x)).collect())).collect();
    let base = check_based(&factors).map(|b| nfs[0].index_of(&BoxElem { blocks: vec![], parts: b }));
    let seq = TruncSeq::from_fn(out_flavor(d, e), cap, labels, base, |g, cls| {
        let (n, n2) = (g.dst(), g.src());
        let (ni, i) = reps[n][cls];
        let (a, b) = levels[n].nodes[ni];
        let per = d.size(a) * e.size(b);
        let lam = levels[n].homs[ni][i / per].compose(g).expect("composable");
        let ni2 = node_ix[&(a, b)];
        let li = levels[n2].homs[ni2].iter().position(|l| l.table() == lam.table()).expect("listed");
        levels[n2].legs[ni2].apply(li * per + i % per)
    });
    Ok(BoxResult { seq, witnesses, normal_forms: nfs })
}

#[derive(Clone, Debug, PartialEq, Eq, serde::Serialize)]
pub struct LevelVerdict {
    pub level: usize,
    pub src: usize,
    pub dst: usize,
    pub well_defined: bool,
    pub injective: bool,
    pub surjective: bool,
}

#[derive(Clone, Debug, serde::Serialize)]
pub struct Comparison {
    pub levels: Vec<LevelVerdict>,
    pub natural: bool,
    #[serde(skip)]
    pub map: Option<SeqMorphism>,
}

impl Comparison {
    pub fn is_iso(&self) -> bool {
        self.natural && self.levels.iter().all(|l| l.well_defined && l.injective && l.surjective)
    }

    /// Descend a map given on raw elements to classes, recording whether it
    /// is constant on classes.
    pub fn descend(
        src: &TruncSeq,
        dst: &TruncSeq,
        witnesses: &[FinMap],
        mut raw_image: impl FnMut(usize, usize) -> Option<usize>,
    ) -> Comparison {
        let mut levels = Vec::new();
        let mut comps = Vec::new();
        let cap = src.cap().min(dst.cap());
        for n in 0..=cap {
            let w = &witnesses[n];
            let mut img: Vec<Option<usize>> = vec![None; src.size(n)];
            let mut well_defined = true;
            for r in 0..w.src() {
                let Some(t) = raw_image(n, r) else {
                    well_defined = false;
                    continue;
                };
                match img[w.apply(r)] {
                    None => img[w.apply(r)] = Some(t),
                    Some(u) if u != t => well_defined = false,
                    _ => {}
                }
            }
            let table: Vec<usize> = img.iter().map(|x| x.unwrap_or(0)).collect();
            well_defined &= img.iter().all(Option::is_some);
            let m = if well_defined { FinMap::new(dst.size(n), table).ok() } else { None };
            levels.push(LevelVerdict {
                level: n,
                src: src.size(n),
                dst: dst.size(n),
                well_defined: m.is_some(),
                injective: m.as_ref().is_some_and(FinMap::is_injective),
                surjective: m.as_ref().is_some_and(FinMap::is_surjective),
            });
            comps.push(m);
        }
        let map: Option<Vec<FinMap>> = comps.into_iter().collect();
        let map = map.map(SeqMorphism::unchecked);
        let natural = map.as_ref().is_some_and(|m| m.check(&src.restrict_cap(cap), &dst.restrict_cap(cap)).is_ok());
        Comparison { levels, natural, map }
    }

    /// A levelwise map given directly on classes.
    pub fn direct(src: &TruncSeq, dst: &TruncSeq, image: impl FnMut(usize, usize) -> Option<usize>) -> Comparison {
        let ids: Vec<FinMap> = src.sizes().into_iter().map(FinMap::identity).collect();
        Comparison::descend(src, dst, &ids, image)
    }
}

/// The comparison from the explicit quotient to the coend.
pub fn q_compare(d: &TruncSeq, e: &TruncSeq) -> Result<(BoxResult, BoxResult, Comparison), DayError> {
    let ex = box2_explicit(d, e);
    let co = box2_coend(d, e)?;
    let cap = ex.seq.cap();
    let mut raws: Vec<RawBox2> = (0..=cap).map(|n| RawBox2::new(d, e, n)).collect();
    let perms: Vec<Vec<IndexMor>> = (0..=cap).map(|n| enumerate(Cat::Sigma, n, n)).collect();
    let cmp = Comparison::descend(&ex.seq, &co.seq, &ex.witnesses, |n, r| {
        let raw = &mut raws[n];
        let (j, s, x, y) = raw.decode(r);
        // the coend's diagonal node (j, n-j) lists Λ(n, n) = Σ_n in the same order
        let node_off: usize = (0..j).map(|a| perms[n].len() * d.size(a) * e.size(n - a)).sum();
        let i = node_off + (s * d.size(j) + x) * e.size(n - j) + y;
        Some(co.witnesses[n].apply(i))
    });
    Ok((ex, co, cmp))
}

/// `E_1 ⊠ … ⊠ E_k` directly in normal form. The empty product is `I₀`.
pub fn boxn(factors: &[&TruncSeq], cap: usize) -> BoxResult {
    let cap = factors.iter().map(|f| f.cap()).fold(cap, usize::min);
    let nfs: Vec<BoxLevel> = (0..=cap).map(|n| BoxLevel::enumerate(factors, n)).collect();
    let flavor = factors.iter().fold(Flavor::Lambda, |a, f| a.meet(f.flavor()));
    let levels = nfs.iter().map(|l| FinSetObj::new(l.elems.iter().map(|x| nf_label(factors, x)).collect())).collect();
    let base = check_based(factors).map(|b| nfs[0].index_of(&BoxElem { blocks: vec![], parts: b }));
    let seq = TruncSeq::from_fn(flavor, cap, levels, base, |g, x| {
        let y = nfs[g.dst()].elems[x].pullback(g, |t| factors[t]);
        nfs[g.src()].index_of(&y)
    });
    let witnesses = nfs.iter().map(|l| FinMap::identity(l.len())).collect();
    BoxResult { seq, witnesses, normal_forms: nfs }
}

/// The two bracketings of a triple product compared with the direct one.
pub struct AssocReport {
    pub left: Comparison,
    pub right: Comparison,
}

impl AssocReport {
    pub fn is_iso(&self) -> bool {
        self.left.is_iso() && self.right.is_iso()
    }
}

pub fn assoc_compare(d1: &TruncSeq, d2: &TruncSeq, d3: &TruncSeq) -> AssocReport {
    let flat = boxn(&[d1, d2, d3], d1.cap());
    let d12 = box2_explicit(d1, d2);
    let d23 = box2_explicit(d2, d3);
    let left = box2_explicit(&d12.seq, d3);
    let right = box2_explicit(d1, &d23.seq);
    let split = |e: &BoxElem, inner: &[usize]| -> (BoxElem, Vec<usize>) {
        // points whose block is in `inner`, renumbered, plus the complement
        let mut sub = Vec::new();
        let mut outer = Vec::new();
        for &b in &e.blocks {
            if let Some(p) = inner.iter().position(|&i| i == b) {
                sub.push(p);
                outer.push(0);
            } else {
                outer.push(1);
            }
        }
        let parts = inner.iter().map(|&i| e.parts[i]).collect();
        (BoxElem { blocks: sub, parts }, outer)
    };
    let lcmp = Comparison::direct(&flat.seq, &left.seq, |n, x| {
        let e = flat.nf(n, x);
        let (inner, outer) = split(e, &[0, 1]);
        let c = d12.class_of_nf(&inner)?;
        left.class_of_nf(&BoxElem { blocks: outer, parts: vec![c, e.parts[2]] })
    });
    let rcmp = Comparison::direct(&flat.seq, &right.seq, |n, x| {
        let e = flat.nf(n, x);
        let (inner, outer) = split(e, &[1, 2]);
        let c = d23.class_of_nf(&inner)?;
        let outer: Vec<usize> = outer.into_iter().map(|o| 1 - o).collect();
        right.class_of_nf(&BoxElem { blocks: outer, parts: vec![e.parts[0], c] })
    });
    AssocReport { left: lcmp, right: rcmp }
}

/// `I₀ ⊠ D -> D`.
pub fn unit_left(d: &TruncSeq) -> (BoxResult, Comparison) {
    let b = box2_explicit(&TruncSeq::i0(d.cap()), d);
    let cmp = Comparison::direct(&b.seq, d, |n, x| {
        let e = b.nf(n, x);
        e.blocks.iter().all(|&t| t == 1).then_some(e.parts[1])
    });
    (b, cmp)
}

/// `D ⊠ I₀ -> D`.
pub fn unit_right(d: &TruncSeq) -> (BoxResult, Comparison) {
    let b = box2_explicit(d, &TruncSeq::i0(d.cap()));
    let cmp = Comparison::direct(&b.seq, d, |n, x| {
        let e = b.nf(n, x);
        e.blocks.iter().all(|&t| t == 0).then_some(e.parts[0])
    });
    (b, cmp)
}

/// The symmetry `D ⊠ E -> E ⊠ D` together with its reverse.
pub fn swap(d: &TruncSeq, e: &TruncSeq) -> (Comparison, Comparison) {
    let de = box2_explicit(d, e);
    let ed = box2_explicit(e, d);
    let flip = |x: &BoxElem| BoxElem { blocks: x.blocks.iter().map(|&b| 1 - b).collect(), parts: vec![x.parts[1], x.parts[0]] };
    let there = Comparison::direct(&de.seq, &ed.seq, |n, x| ed.class_of_nf(&flip(de.nf(n, x))));
    let back = Comparison::direct(&ed.seq, &de.seq, |n, x| de.class_of_nf(&flip(ed.nf(n, x))));
    (there, back)
}

/// Outcome of the covariant comparison at one level.
#[derive(Clone, Debug, serde::Serialize)]
pub struct CovariantReport {
    pub level: usize,
    pub sigma_classes: usize,
    pub lambda_classes: usize,
    pub injective: bool,
    /// `(j1, j2, copies)`: how many copies of `C(j1) × D(j2)` the term
    /// indexed by `Λ(j1+j2, n)` contributes before gluing.
    pub copies: Vec<(usize, usize, usize)>,
}

/// Day convolution of covariant functors on `Λ`, computed with `Σ` and with
/// `Λ` as indexing category, and the comparison between them. `c` and `d`
/// give the size of each level; all structure maps are the unique maps into
/// a point, so every nonempty level above the first nonempty one must be a
/// point.
pub fn covariant_compare(c: &[usize], d: &[usize], n: usize) -> CovariantReport {
    let size = |v: &[usize], j: usize| v.get(j).copied().unwrap_or(0);
    let collapse = |v: &[usize], x: usize, j: usize| if size(v, j) == 0 { 0 } else { x.min(size(v, j) - 1) };
    let build = |cat: Cat| {
        let nodes: Vec<(usize, usize)> = (0..=n)
            .flat_map(|s| (0..=s).map(move |a| (a, s - a)))
            .filter(|&(a, b)| cat == Cat::Lambda || a + b == n)
            .collect();
        let homs: Vec<Vec<IndexMor>> = nodes.iter().map(|&(a, b)| enumerate(Cat::Lambda, a + b, n)).collect();
        let diag: Vec<FinSetObj> =
            nodes.iter().zip(&homs).map(|(&(a, b), h)| FinSetObj::anonymous(h.len() * size(c, a) * size(d, b))).collect();
        let mut mors = Vec::new();
        for (ia, &(a1, a2)) in nodes.iter().enumerate() {
            for (ib, &(b1, b2)) in nodes.iter().enumerate() {
                for f1 in enumerate(cat, a1, b1) {
                    for f2 in enumerate(cat, a2, b2) {
                        if f1.is_identity() && f2.is_identity() {
                            continue;
                        }
                        let f = f1.block_sum(&f2);
                        let (ca, da) = (size(c, a1), size(d, a2));
                        let mut left = Vec::new();
                        let mut right = Vec::new();
                        for (li, lam) in homs[ib].iter().enumerate() {
                            let pulled = lam.compose(&f).expect("composable");
                            let pi = homs[ia].iter().position(|l| l.table() == pulled.table()).expect("listed");
                            for x in 0..ca {
                                for y in 0..da {
                                    left.push((pi * ca + x) * da + y);
                                    let (x2, y2) = (collapse(c, x, b1), collapse(d, y, b2));
                                    right.push((li * size(c, b1) + x2) * size(d, b2) + y2);
                                }
                            }
                        }
                        mors.push(CoendMor {
                            from: ia,
                            to: ib,
                            obj: FinSetObj::anonymous(left.len()),
                            left: FinMap::raw(diag[ia].size(), left),
                            right: FinMap::raw(diag[ib].size(), right),
                        });
                    }
                }
            }
        }
        (nodes, coend(&diag, &mors).expect("well-formed coend"))
    };
    let (snodes, sig) = build(Cat::Sigma);
    let (lnodes, lam) = build(Cat::Lambda);
    // the Σ-diagonal is the sublist of Λ-diagonal nodes with a+b = n
    let mut image = vec![None; sig.apex.size()];
    let mut injective = true;
    for (si, node) in snodes.iter().enumerate() {
        let li = lnodes.iter().position(|x| x == node).expect("present");
        for (i, &cls) in sig.legs[si].table().iter().enumerate() {
            let t = lam.legs[li].apply(i);
            match image[cls] {
                None => image[cls] = Some(t),
                Some(u) => injective &= u == t,
            }
        }
    }
    let mut seen = std::collections::HashSet::new();
    for t in image.into_iter().flatten() {
        injective &= seen.insert(t);
    }
    let copies = lnodes
        .iter()
        .filter(|&&(a, b)| size(c, a) * size(d, b) > 0)
        .map(|&(a, b)| (a, b, enumerate(Cat::Lambda, a + b, n).len() / (factorial(a) * factorial(b))))
        .collect();
    CovariantReport { level: n, sigma_classes: sig.apex.size(), lambda_classes: lam.apex.size(), injective, copies }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn comm_box_comm_is_powers_of_two() {
        let b = box2_explicit(&TruncSeq::comm(4), &TruncSeq::comm(4));
        assert_eq!(b.seq.sizes(), vec![1, 2, 4, 8, 16]);
        assert!(b.seq.validate().is_ok());
    }

    #[test]
    fn ass_box_ass_is_factorial_shifted() {
        // Σ_{j} C(n,j) j! (n-j)! = (n+1)!
        let b = box2_explicit(&TruncSeq::ass(4), &TruncSeq::ass(4));
        assert_eq!(b.seq.sizes(), vec![1, 2, 6, 24, 120]);
        assert!(b.seq.validate().is_ok());
    }

    #[test]
    fn explicit_and_coend_agree() {
        for (d, e) in [(TruncSeq::comm(3), TruncSeq::ass(3)), (TruncSeq::i1(3), TruncSeq::comm(3))] {
            let (ex, co, cmp) = q_compare(&d, &e).unwrap();
            assert!(cmp.is_iso());
            assert_eq!(ex.seq, co.seq);
        }
    }

    #[test]
    fn units_and_symmetry() {
        let a = TruncSeq::ass(3);
        assert!(unit_left(&a).1.is_iso());
        assert!(unit_right(&a).1.is_iso());
        let (there, back) = swap(&a, &TruncSeq::comm(3));
        assert!(there.is_iso() && back.is_iso());
        let round = there.map.unwrap().then(&back.map.unwrap());
        assert_eq!(round, SeqMorphism::identity(&box2_explicit(&a, &TruncSeq::comm(3)).seq));
    }

    #[test]
    fn triple_product_is_three_to_the_n() {
        let c = TruncSeq::comm(3);
        let t = boxn(&[&c, &c, &c], 3);
        assert_eq!(t.seq.sizes(), vec![1, 3, 9, 27]);
        assert!(assoc_compare(&c, &TruncSeq::ass(3), &c).is_iso());
    }

    #[test]
    fn empty_box_is_i0() {
        assert_eq!(boxn(&[], 3).seq.sizes(), vec![1, 0, 0, 0]);
    }

    #[test]
    fn covariant_sigma_lambda_disagree() {
        let r = covariant_compare(&[0, 0, 1, 1], &[1, 1, 1, 1], 3);
        assert_eq!((r.sigma_classes, r.lambda_classes), (4, 1));
        assert!(!r.injective);
        assert!(r.copies.contains(&(3, 0, 1)));
        assert!(r.copies.contains(&(2, 0, 3)));
    }
}
