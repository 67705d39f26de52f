//! The Kelly (composition) product `D ⊙ E`.
//!
//! `(D ⊙ E)(n)` is the coend over `k` of `D(k) × E^{⊠k}(n)`. Elements are
//! pairs `(d, y)` with `y` in normal form; the coend relations are
//! `(D(f)d, y) ~ (d, f_* y)` for the generators `f` of `Σ` (adjacent
//! transpositions) and, over `Λ`, of the face injections `k-1 -> k`, where
//! `f_*` moves blocks and fills new ones with the base point of `E`.
//!
//! The coend is computed with `k ≤ K`. With a unital second factor the
//! answer at level `n` only involves `k ≤ n`, so any `K ≥ n` is exact.

use thiserror::Error;

use crate::day::{BoxElem, BoxLevel, Comparison};
use crate::finset::{coend, CoendMor, FinMap, FinSetObj, Quotient, UnionFind};
use crate::index_cats::{enumerate, Cat, IndexMor};
use crate::sequences::{Flavor, SeqMorphism, TruncSeq};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum KellyError {
    #[error("the second factor needs a base point for the Λ-relations")]
    Unbased,
    #[error("a Λ-product needs Λ-sequences")]
    Flavor,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, serde::Serialize)]
pub enum Mode {
    Sigma,
    Lambda,
}

/// One level of a Kelly product: raw elements `(k, d, y)` and their classes.
#[derive(Clone, Debug)]
pub struct KellyLevel {
    pub n: usize,
    pub kmax: usize,
    offs: Vec<usize>,
    dsizes: Vec<usize>,
    pub boxes: Vec<BoxLevel>,
    pub quotient: Quotient,
}

impl KellyLevel {
    pub fn raw_count(&self) -> usize {
        self.offs[self.kmax + 1]
    }

    pub fn raw(&self, k: usize, d: usize, y: usize) -> usize {
        self.offs[k] + d * self.boxes[k].len() + y
    }

    pub fn decode(&self, r: usize) -> (usize, usize, usize) {
        let k = (0..=self.kmax).rev().find(|&k| self.offs[k] <= r && self.offs[k + 1] > r).unwrap_or(0);
        let i = r - self.offs[k];
        let b = self.boxes[k].len();
        (k, i / b, i % b)
    }

    pub fn class_of(&self, k: usize, d: usize, y: &BoxElem) -> Option<usize> {
        if k > self.kmax || d >= self.dsizes[k] {
            return None;
        }
        let yi = self.boxes[k].get(y)?;
        Some(self.quotient.class_of[self.raw(k, d, yi)])
    }

    /// Least raw element of a class.
    pub fn rep(&self, class: usize) -> (usize, usize, &BoxElem) {
        let (k, d, y) = self.decode(self.quotient.reps[class]);
        (k, d, &self.boxes[k].elems[y])
    }

    pub fn len(&self) -> usize {
        self.quotient.len()
    }

    pub fn is_empty(&self) -> bool {
        self.quotient.is_empty()
    }
}

/// Quotient of `⊔_{k ≤ K} D(k) × E^{⊠k}(n)` at one level.
pub fn kelly_level(d: &TruncSeq, e: &TruncSeq, n: usize, block_cap: usize, mode: Mode) -> Result<KellyLevel, KellyError> {
    let eta = match mode {
        Mode::Lambda => Some(e.base().ok_or(KellyError::Unbased)?),
        Mode::Sigma => None,
    };
    let kmax = block_cap.min(d.cap());
    let boxes: Vec<BoxLevel> = (0..=kmax).map(|k| BoxLevel::enumerate(&vec![e; k], n)).collect();
    let dsizes: Vec<usize> = (0..=kmax).map(|k| d.size(k)).collect();
    let mut offs = vec![0];
    for k in 0..=kmax {
        offs.push(offs[k] + dsizes[k] * boxes[k].len());
    }
    let mut lvl = KellyLevel { n, kmax, offs, dsizes, boxes, quotient: Quotient { class_of: vec![], reps: vec![] } };
    let mut uf = UnionFind::new(lvl.raw_count());
    for k in 2..=kmax {
        for t in 1..k {
            let tau = IndexMor::transposition(k, t);
            for (yi, y) in lvl.boxes[k].elems.iter().enumerate() {
                let moved = lvl.boxes[k].index_of(&y.pushforward(&tau, 0));
                for x in 0..lvl.dsizes[k] {
                    uf.union(lvl.raw(k, d.apply(&tau, x), yi), lvl.raw(k, x, moved));
                }
            }
        }
    }
    if let Some(eta) = eta {
        for k in 1..=kmax {
            for i in 1..=k {
                let s = IndexMor::skip(k, i);
                for (yi, y) in lvl.boxes[k - 1].elems.iter().enumerate() {
                    let pushed = lvl.boxes[k].index_of(&y.pushforward(&s, eta));
                    for x in 0..lvl.dsizes[k] {
                        uf.union(lvl.raw(k - 1, d.apply(&s, x), yi), lvl.raw(k, x, pushed));
                    }
                }
            }
        }
    }
    lvl.quotient = uf.classes();
    Ok(lvl)
}

/// The same quotient as [`kelly_level`], computed as a generic coend with
/// every morphism `j -> k` of the indexing category (`j, k ≤ K`) rather than
/// the generators. Raw elements are numbered as in [`kelly_level`].
pub fn kelly_level_coend(d: &TruncSeq, e: &TruncSeq, n: usize, block_cap: usize, mode: Mode) -> Result<Quotient, KellyError> {
    let (cat, eta) = match mode {
        Mode::Lambda => (Cat::Lambda, e.base().ok_or(KellyError::Unbased)?),
        Mode::Sigma => (Cat::Sigma, 0),
    };
    let kmax = block_cap.min(d.cap());
    let boxes: Vec<BoxLevel> = (0..=kmax).map(|k| BoxLevel::enumerate(&vec![e; k], n)).collect();
    let diag: Vec<FinSetObj> = (0..=kmax).map(|k| FinSetObj::anonymous(d.size(k) * boxes[k].len())).collect();
    let mut mors = Vec::new();
    for j in 0..=kmax {
        for k in 0..=kmax {
            for f in enumerate(cat, j, k) {
                let (dk, bj) = (d.size(k), boxes[j].len());
                let mut left = Vec::with_capacity(dk * bj);
                let mut right = Vec::with_capacity(dk * bj);
                for x in 0..dk {
                    for (yi, y) in boxes[j].elems.iter().enumerate() {
                        left.push(d.apply(&f, x) * bj + yi);
                        right.push(x * boxes[k].len() + boxes[k].index_of(&y.pushforward(&f, eta)));
                    }
                }
                mors.push(CoendMor {
                    from: j,
                    to: k,
                    obj: FinSetObj::anonymous(dk * bj),
                    left: FinMap::raw(diag[j].size(), left),
                    right: FinMap::raw(diag[k].size(), right),
                });
            }
        }
    }
    let c = coend(&diag, &mors).expect("maps built within range");
    let class_of: Vec<usize> = c.legs.iter().flat_map(|l| l.table().iter().copied()).collect();
    Ok(canonical(&class_of))
}

/// Renumber classes by first occurrence.
pub fn canonical(class_of: &[usize]) -> Quotient {
    let mut seen = std::collections::HashMap::new();
    let mut reps = Vec::new();
    let class_of = class_of
        .iter()
        .enumerate()
        .map(|(i, &c)| {
            *seen.entry(c).or_insert_with(|| {
                reps.push(i);
                reps.len() - 1
            })
        })
        .collect();
    Quotient { class_of, reps }
}

#[derive(Clone, Copy, Debug)]
pub struct KellyOpts {
    pub mode: Mode,
    /// Highest output level; defaults to the cap of the second factor.
    pub cap: Option<usize>,
    /// `K`; defaults to `cap + 2`.
    pub block_cap: Option<usize>,
    /// Also compute with `K + 1` and compare.
    pub check_stability: bool,
}

impl KellyOpts {
    pub fn new(mode: Mode) -> Self {
        KellyOpts { mode, cap: None, block_cap: None, check_stability: true }
    }
}

#[derive(Clone, Debug)]
pub struct KellyResult {
    pub seq: TruncSeq,
    pub mode: Mode,
    pub block_cap: usize,
    /// Per level: the canonical map from the `K` to the `K+1` quotient is a
    /// bijection. `None` when stability was not checked.
    pub stabilized: Option<Vec<bool>>,
    /// `K + 1` exceeded the cap of the first factor, so the stability check
    /// compares a computation with itself.
    pub clamped: bool,
    pub levels: Vec<KellyLevel>,
    pub witnesses: Vec<FinMap>,
}

impl KellyResult {
    pub fn is_stabilized(&self) -> bool {
        self.stabilized.as_ref().is_some_and(|v| v.iter().all(|&b| b))
    }

    pub fn class_of(&self, n: usize, k: usize, d: usize, y: &BoxElem) -> Option<usize> {
        self.levels.get(n)?.class_of(k, d, y)
    }
}

fn render(d: &TruncSeq, e: &TruncSeq, k: usize, x: usize, y: &BoxElem) -> String {
    format!("({};{})", d.label(k, x), y.render(|_, s, p| e.label(s, p).to_string()))
}

pub fn kelly(d: &TruncSeq, e: &TruncSeq, opts: KellyOpts) -> Result<KellyResult, KellyError> {
    if opts.mode == Mode::Lambda && (d.flavor() != Flavor::Lambda || e.flavor() != Flavor::Lambda) {
        return Err(KellyError::Flavor);
    }
    let cap = opts.cap.unwrap_or(e.cap());
    let kk = opts.block_cap.unwrap_or(cap + 2);
    let levels: Vec<KellyLevel> =
        (0..=cap).map(|n| kelly_level(d, e, n, kk, opts.mode)).collect::<Result<_, _>>()?;
    let clamped = kk + 1 > d.cap();
    let stabilized = if opts.check_stability {
        let mut v = Vec::new();
        for lvl in &levels {
            if clamped {
                v.push(true);
                continue;
            }
            let big = kelly_level(d, e, lvl.n, kk + 1, opts.mode)?;
            let map: Vec<usize> = lvl.quotient.reps.iter().map(|&r| big.quotient.class_of[r]).collect();
            v.push(FinMap::raw(big.len(), map).is_bijective());
        }
        Some(v)
    } else {
        None
    };
    let labels = levels
        .iter()
        .map(|l| FinSetObj::new((0..l.len()).map(|c| {
            let (k, x, y) = l.rep(c);
            render(d, e, k, x, y)
        }).collect()))
        .collect();
    let flavor = match opts.mode {
        Mode::Lambda => Flavor::Lambda,
        Mode::Sigma => Flavor::Sigma,
    };
    let base = d.base().and_then(|b| levels[0].class_of(0, b, &BoxElem { blocks: vec![], parts: vec![] }));
    let seq = TruncSeq::from_fn(flavor, cap, labels, base, |g, c| {
        let (k, x, y) = levels[g.dst()].rep(c);
        let y2 = y.pullback(g, |_| e);
        levels[g.src()].class_of(k, x, &y2).expect("pullback stays within the block cap")
    });
    let witnesses = levels.iter().map(|l| l.quotient.projection()).collect();
    Ok(KellyResult { seq, mode: opts.mode, block_cap: kk, stabilized, clamped, levels, witnesses })
}

pub fn kelly_sigma(d: &TruncSeq, e: &TruncSeq, block_cap: Option<usize>) -> Result<KellyResult, KellyError> {
    kelly(d, e, KellyOpts { block_cap, ..KellyOpts::new(Mode::Sigma) })
}

pub fn kelly_lambda(d: &TruncSeq, e: &TruncSeq, block_cap: Option<usize>) -> Result<KellyResult, KellyError> {
    kelly(d, e, KellyOpts { block_cap, ..KellyOpts::new(Mode::Lambda) })
}

/// Kelly product with `K` equal to the output cap and no stability check;
/// exact for unital second factors. Used for all structure maps.
pub fn kelly_exact(d: &TruncSeq, e: &TruncSeq, cap: usize) -> Result<KellyResult, KellyError> {
    kelly(d, e, KellyOpts { mode: Mode::Lambda, cap: Some(cap), block_cap: Some(cap), check_stability: false })
}

/// Apply a levelwise map to every part of a normal form.
pub fn map_parts(y: &BoxElem, f: &SeqMorphism) -> BoxElem {
    let sizes = y.block_sizes();
    BoxElem { blocks: y.blocks.clone(), parts: y.parts.iter().zip(&sizes).map(|(&p, &s)| f.components[s].apply(p)).collect() }
}

/// Compose block structures: `y` splits `t` points into `k` blocks, `z`
/// splits `n` points into `t` blocks. Returns the block of each of the `n`
/// points in the induced `k`-block splitting, and for every `i < k` the
/// splitting of the points of the new block `C_i` by the old blocks of `y`'s
/// block `B_i`, with `z`'s parts.
pub fn regroup(y: &BoxElem, z: &BoxElem) -> (Vec<usize>, Vec<BoxElem>) {
    let outer: Vec<usize> = z.blocks.iter().map(|&s| y.blocks[s]).collect();
    let k = y.parts.len();
    let mut inner = Vec::with_capacity(k);
    for i in 0..k {
        let members: Vec<usize> = (0..y.blocks.len()).filter(|&s| y.blocks[s] == i).collect();
        let blocks = z
            .blocks
            .iter()
            .filter(|&&s| y.blocks[s] == i)
            .map(|s| members.iter().position(|m| m == s).expect("member"))
            .collect();
        inner.push(BoxElem { blocks, parts: members.iter().map(|&s| z.parts[s]).collect() });
    }
    (outer, inner)
}

/// One level of the three-fold product `D1(k) × D2^{⊠k}(t) × D3^{⊠t}(n)`
/// modulo both families of relations.
#[derive(Clone, Debug)]
pub struct Mu3Level {
    pub n: usize,
    pub kmax: usize,
    pub tmax: usize,
    offs: Vec<Vec<usize>>,
    total: usize,
    d1: Vec<usize>,
    pub b3: Vec<BoxLevel>,
    pub quotient: Quotient,
}

#[derive(Clone, Debug)]
pub struct Mu3Result {
    pub seq: TruncSeq,
    pub kmax: usize,
    pub tmax: usize,
    /// `D2^{⊠k}(t)`, shared by every level.
    pub b2: Vec<Vec<BoxLevel>>,
    pub levels: Vec<Mu3Level>,
    pub witnesses: Vec<FinMap>,
    pub stabilized: Option<bool>,
}

/// Raw element of the three-fold product.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Triple<'a> {
    pub k: usize,
    pub t: usize,
    pub d1: usize,
    pub y2: &'a BoxElem,
    pub y3: &'a BoxElem,
}

impl Mu3Result {
    fn raw(&self, lvl: &Mu3Level, k: usize, t: usize, d1: usize, y2: usize, y3: usize) -> usize {
        lvl.offs[t][k] + (d1 * self.b2[k][t].len() + y2) * lvl.b3[t].len() + y3
    }

    pub fn decode(&self, n: usize, r: usize) -> Triple<'_> {
        let lvl = &self.levels[n];
        for t in 0..=lvl.tmax {
            for k in 0..=lvl.kmax {
                let size = lvl.d1[k] * self.b2[k][t].len() * lvl.b3[t].len();
                let o = lvl.offs[t][k];
                if r >= o && r < o + size {
                    let i = r - o;
                    let (b2, b3) = (self.b2[k][t].len(), lvl.b3[t].len());
                    return Triple {
                        k,
                        t,
                        d1: i / (b2 * b3),
                        y2: &self.b2[k][t].elems[(i / b3) % b2],
                        y3: &lvl.b3[t].elems[i % b3],
                    };
                }
            }
        }
        panic!("raw index {r} out of range at level {n}")
    }

    pub fn class_of(&self, n: usize, k: usize, t: usize, d1: usize, y2: &BoxElem, y3: &BoxElem) -> Option<usize> {
        let lvl = self.levels.get(n)?;
        if k > lvl.kmax || t > lvl.tmax || d1 >= lvl.d1[k] {
            return None;
        }
        let (a, b) = (self.b2[k][t].get(y2)?, lvl.b3[t].get(y3)?);
        Some(lvl.quotient.class_of[self.raw(lvl, k, t, d1, a, b)])
    }

    pub fn rep(&self, n: usize, class: usize) -> Triple<'_> {
        self.decode(n, self.levels[n].quotient.reps[class])
    }

    pub fn raw_count(&self, n: usize) -> usize {
        self.levels[n].total
    }
}

/// `μ3(D1, D2, D3)` computed as a single quotient, with `k ≤ kmax` and
/// `t ≤ tmax`; both default to the output cap.
pub fn mu3(
    d1: &TruncSeq,
    d2: &TruncSeq,
    d3: &TruncSeq,
    cap: usize,
    caps: Option<(usize, usize)>,
    check_stability: bool,
) -> Result<Mu3Result, KellyError> {
    let (kc, tc) = caps.unwrap_or((cap, cap));
    let mut r = mu3_inner(d1, d2, d3, cap, kc, tc)?;
    if check_stability {
        let big = mu3_inner(d1, d2, d3, cap, kc + 1, tc + 1)?;
        let mut ok = true;
        for n in 0..=cap {
            let lvl = &r.levels[n];
            let map: Vec<usize> = (0..lvl.quotient.len())
                .map(|c| {
                    let tr = r.rep(n, c);
                    big.class_of(n, tr.k, tr.t, tr.d1, tr.y2, tr.y3).expect("bigger caps contain smaller")
                })
                .collect();
            ok &= FinMap::raw(big.levels[n].quotient.len(), map).is_bijective();
        }
        r.stabilized = Some(ok);
    }
    Ok(r)
}

fn mu3_inner(d1: &TruncSeq, d2: &TruncSeq, d3: &TruncSeq, cap: usize, kc: usize, tc: usize) -> Result<Mu3Result, KellyError> {
    let eta2 = d2.base().ok_or(KellyError::Unbased)?;
    let eta3 = d3.base().ok_or(KellyError::Unbased)?;
    let kmax = kc.min(d1.cap());
    let tmax = tc;
    let b2: Vec<Vec<BoxLevel>> =
        (0..=kmax).map(|k| (0..=tmax).map(|t| BoxLevel::enumerate(&vec![d2; k], t)).collect()).collect();
    let mut res = Mu3Result { seq: TruncSeq::i0(0), kmax, tmax, b2, levels: vec![], witnesses: vec![], stabilized: None };
    for n in 0..=cap {
        let b3: Vec<BoxLevel> = (0..=tmax).map(|t| BoxLevel::enumerate(&vec![d3; t], n)).collect();
        let d1s: Vec<usize> = (0..=kmax).map(|k| d1.size(k)).collect();
        let mut offs = vec![vec![0; kmax + 1]; tmax + 1];
        let mut acc = 0;
        for t in 0..=tmax {
            for k in 0..=kmax {
                offs[t][k] = acc;
                acc += d1s[k] * res.b2[k][t].len() * b3[t].len();
            }
        }
        let mut lvl = Mu3Level { n, kmax, tmax, offs, total: acc, d1: d1s, b3, quotient: Quotient { class_of: vec![], reps: vec![] } };
        let mut uf = UnionFind::new(acc);
        let b2 = &res.b2;
        let raw = |lvl: &Mu3Level, k: usize, t: usize, x: usize, y2: usize, y3: usize| {
            lvl.offs[t][k] + (x * b2[k][t].len() + y2) * lvl.b3[t].len() + y3
        };
        // relations in k
        for t in 0..=tmax {
            let n3 = lvl.b3[t].len();
            for k in 1..=kmax {
                let mut gens: Vec<(IndexMor, usize)> = (1..k).map(|i| (IndexMor::transposition(k, i), k)).collect();
                gens.extend((1..=k).map(|i| (IndexMor::skip(k, i), k - 1)));
                for (f, ksrc) in &gens {
                    for (yi, y) in b2[*ksrc][t].elems.iter().enumerate() {
                        let pushed = b2[k][t].index_of(&y.pushforward(f, eta2));
                        for x in 0..lvl.d1[k] {
                            let fx = d1.apply(f, x);
                            for y3 in 0..n3 {
                                uf.union(raw(&lvl, *ksrc, t, fx, yi, y3), raw(&lvl, k, t, x, pushed, y3));
                            }
                        }
                    }
                }
            }
        }
        // relations in t
        for t in 1..=tmax {
            let mut gens: Vec<(IndexMor, usize)> = (1..t).map(|i| (IndexMor::transposition(t, i), t)).collect();
            gens.extend((1..=t).map(|i| (IndexMor::skip(t, i), t - 1)));
            for (f, tsrc) in &gens {
                let pushed: Vec<usize> =
                    lvl.b3[*tsrc].elems.iter().map(|z| lvl.b3[t].index_of(&z.pushforward(f, eta3))).collect();
                for k in 0..=kmax {
                    for (yi, y) in b2[k][t].elems.iter().enumerate() {
                        let pulled = b2[k][*tsrc].index_of(&y.pullback(f, |_| d2));
                        for x in 0..lvl.d1[k] {
                            for (zi, &zp) in pushed.iter().enumerate() {
                                uf.union(raw(&lvl, k, *tsrc, x, pulled, zi), raw(&lvl, k, t, x, yi, zp));
                            }
                        }
                    }
                }
            }
        }
        lvl.quotient = uf.classes();
        res.witnesses.push(lvl.quotient.projection());
        res.levels.push(lvl);
    }
    let labels: Vec<FinSetObj> = (0..=cap)
        .map(|n| {
            FinSetObj::new(
                (0..res.levels[n].quotient.len())
                    .map(|c| {
                        let tr = res.rep(n, c);
                        format!(
                            "({};{};{})",
                            d1.label(tr.k, tr.d1),
                            tr.y2.render(|_, s, p| d2.label(s, p).to_string()),
                            tr.y3.render(|_, s, p| d3.label(s, p).to_string())
                        )
                    })
                    .collect(),
            )
        })
        .collect();
    let empty = BoxElem { blocks: vec![], parts: vec![] };
    let base = d1.base().and_then(|b| res.class_of(0, 0, 0, b, &empty, &empty));
    let seq = TruncSeq::from_fn(Flavor::Lambda, cap, labels, base, |g, c| {
        let tr = res.rep(g.dst(), c);
        let y3 = tr.y3.pullback(g, |_| d3);
        res.class_of(g.src(), tr.k, tr.t, tr.d1, tr.y2, &y3).expect("within caps")
    });
    res.seq = seq;
    Ok(res)
}

/// Descend a map defined on raw Kelly elements.
pub fn descend_kelly(
    src: &KellyResult,
    dst: &TruncSeq,
    mut f: impl FnMut(usize, usize, usize, &BoxElem) -> Option<usize>,
) -> Comparison {
    Comparison::descend(&src.seq, dst, &src.witnesses, |n, r| {
        let lvl = &src.levels[n];
        let (k, x, y) = lvl.decode(r);
        f(n, k, x, &lvl.boxes[k].elems[y])
    })
}

pub fn descend_mu3(src: &Mu3Result, dst: &TruncSeq, mut f: impl FnMut(usize, &Triple<'_>) -> Option<usize>) -> Comparison {
    Comparison::descend(&src.seq, dst, &src.witnesses, |n, r| f(n, &src.decode(n, r)))
}

/// Functoriality of `⊙` on a pair of maps.
pub fn kelly_map(src: &KellyResult, dst: &KellyResult, f: &SeqMorphism, g: &SeqMorphism) -> Comparison {
    descend_kelly(src, &dst.seq, |n, k, x, y| {
        let fx = f.components.get(k)?.apply(x);
        dst.class_of(n, k, fx, &map_parts(y, g))
    })
}

pub fn mu3_map(src: &Mu3Result, dst: &Mu3Result, f1: &SeqMorphism, f2: &SeqMorphism, f3: &SeqMorphism) -> Comparison {
    descend_mu3(src, &dst.seq, |n, tr| {
        let x = f1.components.get(tr.k)?.apply(tr.d1);
        dst.class_of(n, tr.k, tr.t, x, &map_parts(tr.y2, f2), &map_parts(tr.y3, f3))
    })
}

/// `s1 : μ3(D1,D2,D3) -> (D1 ⊙ D2) ⊙ D3`; `inner` is `D1 ⊙ D2` and `outer`
/// is `inner ⊙ D3`.
pub fn s1(src: &Mu3Result, inner: &KellyResult, outer: &KellyResult) -> Comparison {
    descend_mu3(src, &outer.seq, |n, tr| {
        let x = inner.class_of(tr.t, tr.k, tr.d1, tr.y2)?;
        outer.class_of(n, tr.t, x, tr.y3)
    })
}

/// `s2 : μ3(D1,D2,D3) -> D1 ⊙ (D2 ⊙ D3)`; `inner` is `D2 ⊙ D3` and `outer`
/// is `D1 ⊙ inner`.
pub fn s2(src: &Mu3Result, inner: &KellyResult, outer: &KellyResult) -> Comparison {
    descend_mu3(src, &outer.seq, |n, tr| {
        let (blocks, subs) = regroup(tr.y2, tr.y3);
        let parts: Option<Vec<usize>> = subs
            .iter()
            .zip(&tr.y2.parts)
            .map(|(z, &d2)| inner.class_of(z.level(), z.width(), d2, z))
            .collect();
        outer.class_of(n, tr.k, tr.d1, &BoxElem { blocks, parts: parts? })
    })
}

/// `X -> I₁ ⊙ X`, `x ↦ (∗, x)`.
pub fn unit_into_left(x: &TruncSeq, ix: &KellyResult) -> Comparison {
    Comparison::direct(x, &ix.seq, |n, a| ix.class_of(n, 1, 0, &BoxElem { blocks: vec![0; n], parts: vec![a] }))
}

/// `X -> X ⊙ I₁`, `x ↦ (x, id)`.
pub fn unit_into_right(x: &TruncSeq, xi: &KellyResult) -> Comparison {
    Comparison::direct(x, &xi.seq, |n, a| xi.class_of(n, n, a, &identity_box(n)))
}

/// The element of `I₁^{⊠n}(n)` with every point in its own block.
pub fn identity_box(n: usize) -> BoxElem {
    BoxElem { blocks: (0..n).collect(), parts: vec![0; n] }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn bell(n: usize) -> usize {
        let mut row = vec![1usize];
        for _ in 0..n {
            let mut next = vec![*row.last().unwrap()];
            for &v in &row {
                next.push(next.last().unwrap() + v);
            }
            row = next;
        }
        row[0]
    }

    #[test]
    fn comm_lambda_comm_is_bell() {
        let r = kelly_lambda(&TruncSeq::comm(6), &TruncSeq::comm(4), None).unwrap();
        let want: Vec<usize> = (0..=4).map(bell).collect();
        assert_eq!(r.seq.sizes(), want);
        assert!(r.is_stabilized());
        assert!(r.seq.validate().is_ok());
    }

    #[test]
    fn ass_sigma_ass_grows_with_block_cap() {
        let a = TruncSeq::ass(4);
        let sizes: Vec<usize> = (1..=3).map(|k| kelly_level(&a, &a, 1, k, Mode::Sigma).unwrap().len()).collect();
        assert_eq!(sizes, vec![1, 3, 6]);
        let r = kelly_sigma(&a, &a, Some(2)).unwrap();
        assert!(!r.is_stabilized());
    }

    #[test]
    fn comm_sigma_comm_level_one() {
        let c = TruncSeq::comm(4);
        assert_eq!(kelly_level(&c, &c, 1, 2, Mode::Sigma).unwrap().len(), 2);
    }

    #[test]
    fn units_are_isomorphisms() {
        let a = TruncSeq::ass(3);
        let i = TruncSeq::i1(3);
        let ia = kelly_exact(&i, &a, 3).unwrap();
        let ai = kelly_exact(&a, &i, 3).unwrap();
        assert!(unit_into_left(&a, &ia).is_iso());
        assert!(unit_into_right(&a, &ai).is_iso());
    }

    #[test]
    fn three_fold_matches_both_bracketings() {
        let c = TruncSeq::comm(3);
        let a = TruncSeq::ass(3);
        let m = mu3(&c, &a, &c, 3, None, false).unwrap();
        let cl = kelly_exact(&c, &a, 3).unwrap();
        let l = kelly_exact(&cl.seq, &c, 3).unwrap();
        let ar = kelly_exact(&a, &c, 3).unwrap();
        let r = kelly_exact(&c, &ar.seq, 3).unwrap();
        assert!(s1(&m, &cl, &l).is_iso());
        assert!(s2(&m, &ar, &r).is_iso());
    }

    #[test]
    fn generators_give_the_full_coend() {
        let a = TruncSeq::ass(3);
        let c = TruncSeq::comm(3);
        for (d, e, mode) in [(&a, &a, Mode::Lambda), (&c, &c, Mode::Lambda), (&a, &a, Mode::Sigma), (&c, &a, Mode::Lambda)] {
            for n in 0..=3 {
                let g = kelly_level(d, e, n, 3, mode).unwrap();
                assert_eq!(canonical(&g.quotient.class_of), kelly_level_coend(d, e, n, 3, mode).unwrap());
            }
        }
    }

    #[test]
    fn regroup_composes_blocks() {
        // y: 3 points into 2 blocks {1,3},{2}; z: 4 points into 3 blocks
        let y = BoxElem { blocks: vec![0, 1, 0], parts: vec![7, 8] };
        let z = BoxElem { blocks: vec![2, 0, 1, 2], parts: vec![10, 11, 12] };
        let (outer, inner) = regroup(&y, &z);
        assert_eq!(outer, vec![0, 0, 1, 0]);
        assert_eq!(inner[0], BoxElem { blocks: vec![1, 0, 1], parts: vec![10, 12] });
        assert_eq!(inner[1], BoxElem { blocks: vec![0], parts: vec![11] });
    }
}
