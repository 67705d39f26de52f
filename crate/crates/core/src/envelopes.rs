//! The permutative envelope `C̄` and the category of operators `Ĉ` of an
//! operad, the monad `Y ↦ Y ⊗_Ξ D(n, -)`, and its comparison with `- ⊙ C`.
//!
//! A morphism `n -> m` is a map of finite sets `φ` (effective for `C̄`,
//! arbitrary based for `Ĉ`) with one element of `C(|φ⁻¹(j)|)` for every
//! `j` in `1..=m`.

use std::collections::{BTreeMap, HashMap};

use serde::Serialize;
use thiserror::Error;

use crate::day::{box2_explicit, BoxElem, Comparison};
use crate::finset::{unrank, FinMap, FinSetObj, Quotient, UnionFind};
use crate::index_cats::{enumerate, Cat, IndexMor};
use crate::kelly::{kelly_exact, regroup};
use crate::operads::OperadData;
use crate::rmodules::RModData;
use crate::sequences::{Flavor, TruncSeq};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum EnvelopeError {
    #[error("operad axioms fail: {0}")]
    Invalid(String),
    #[error("the sequence is a {0}-sequence but the monad is over {1}")]
    Flavor(Flavor, Flavor),
    #[error("{0}")]
    Kelly(#[from] crate::kelly::KellyError),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Variant {
    /// Effective maps: `C̄`.
    Bar,
    /// All based maps, inputs over the base point discarded: `Ĉ`.
    Hat,
}

impl Variant {
    fn cat(self) -> Cat {
        match self {
            Variant::Bar => Cat::Fgt0,
            Variant::Hat => Cat::F,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct HomElem {
    pub phi: IndexMor,
    pub parts: Vec<usize>,
}

impl HomElem {
    /// The fibres of `φ` as a normal form of `C^{⊠m}(n)`; only meaningful
    /// for effective `φ`.
    pub fn to_box(&self) -> BoxElem {
        BoxElem { blocks: self.phi.table().iter().map(|&v| v - 1).collect(), parts: self.parts.clone() }
    }

    pub fn from_box(y: &BoxElem) -> Self {
        let table = y.blocks.iter().map(|&b| b + 1).collect();
        HomElem { phi: IndexMor::new(Cat::Fgt0, y.level(), y.width(), table).expect("effective"), parts: y.parts.clone() }
    }
}

/// Hom sets of `C̄` or `Ĉ` between arities `≤ cap`.
#[derive(Clone, Debug)]
pub struct Envelope {
    pub operad: OperadData,
    pub variant: Variant,
    pub cap: usize,
    homs: Vec<Vec<Vec<HomElem>>>,
    index: Vec<Vec<HashMap<HomElem, usize>>>,
}

pub fn envelope(c: &OperadData, variant: Variant, cap: usize) -> Result<Envelope, EnvelopeError> {
    let rep = c.check();
    if !rep.is_ok() {
        return Err(EnvelopeError::Invalid(rep.summary()));
    }
    let cap = cap.min(c.cap());
    let mut homs = vec![vec![Vec::new(); cap + 1]; cap + 1];
    let mut index = vec![vec![HashMap::new(); cap + 1]; cap + 1];
    for n in 0..=cap {
        for m in 0..=cap {
            let mut out = Vec::new();
            for phi in enumerate(variant.cat(), n, m) {
                let radix: Vec<usize> = phi.fibers().iter().map(|f| c.seq.size(f.len())).collect();
                for i in 0..radix.iter().product() {
                    out.push(HomElem { phi: phi.clone(), parts: unrank(i, &radix) });
                }
            }
            index[n][m] = out.iter().cloned().enumerate().map(|(i, h)| (h, i)).collect();
            homs[n][m] = out;
        }
    }
    Ok(Envelope { operad: c.clone(), variant, cap, homs, index })
}

impl Envelope {
    pub fn hom(&self, n: usize, m: usize) -> &[HomElem] {
        &self.homs[n][m]
    }

    pub fn size(&self, n: usize, m: usize) -> usize {
        self.homs[n][m].len()
    }

    pub fn index_of(&self, h: &HomElem) -> Option<usize> {
        self.index.get(h.phi.src())?.get(h.phi.dst())?.get(h).copied()
    }

    pub fn identity(&self, n: usize) -> HomElem {
        HomElem { phi: IndexMor::identity(self.variant.cat(), n), parts: vec![self.operad.unit; n] }
    }

    /// An injection of `Λ` as a morphism: units on hit points, base points
    /// on the others.
    pub fn embed(&self, lam: &IndexMor) -> HomElem {
        let phi = lam.retag(self.variant.cat()).expect("injections are effective");
        let c = &self.operad;
        let parts = phi.fibers().iter().map(|f| if f.is_empty() { c.base() } else { c.unit }).collect();
        HomElem { phi, parts }
    }

    /// `g ∘ f`: the fibre over `j` is assembled from the fibres of `f` over
    /// `g⁻¹(j)` by the operad action; inputs lying over the base point are
    /// dropped.
    pub fn compose(&self, g: &HomElem, f: &HomElem) -> HomElem {
        let table: Vec<usize> = f.phi.table().iter().map(|&v| g.phi.apply(v)).collect();
        let phi = IndexMor::new(self.variant.cat(), f.phi.src(), g.phi.dst(), table).expect("composite");
        let gf = g.phi.fibers();
        let parts = gf
            .iter()
            .zip(&g.parts)
            .map(|(over, &d)| {
                let mut blocks = Vec::new();
                for &v in f.phi.table() {
                    if let Some(t) = over.iter().position(|&i| i == v) {
                        blocks.push(t);
                    }
                }
                let parts = over.iter().map(|&i| f.parts[i - 1]).collect();
                self.operad.act(d, &BoxElem { blocks, parts })
            })
            .collect();
        HomElem { phi, parts }
    }

    pub fn size_table(&self) -> Vec<Vec<usize>> {
        (0..=self.cap).map(|n| (0..=self.cap).map(|m| self.size(n, m)).collect()).collect()
    }

    /// Associativity and unit laws on every composable triple.
    pub fn check_category(&self) -> Vec<String> {
        let mut bad = Vec::new();
        let r = 0..=self.cap;
        for n in r.clone() {
            for f in self.hom(n, n).iter().take(0) {
                let _ = f;
            }
            for m in r.clone() {
                for f in self.hom(n, m) {
                    if self.compose(&self.identity(m), f) != *f || self.compose(f, &self.identity(n)) != *f {
                        bad.push(format!("unit law at {}", f.phi));
                    }
                    for p in r.clone() {
                        for g in self.hom(m, p) {
                            let gf = self.compose(g, f);
                            for q in r.clone() {
                                for h in self.hom(p, q) {
                                    if self.compose(h, &gf) != self.compose(&self.compose(h, g), f) {
                                        bad.push(format!("associativity at {} {} {}", h.phi, g.phi, f.phi));
                                    }
                                }
                            }
                        }
                    }
                }
            }
        }
        bad
    }

    /// `C(-, n)` as a `Λ`-sequence, acting by precomposition.
    pub fn representable(&self, n: usize) -> TruncSeq {
        let levels = (0..=self.cap)
            .map(|m| FinSetObj::new(self.hom(m, n).iter().map(|h| render(&self.operad, h)).collect()))
            .collect();
        TruncSeq::from_fn(Flavor::Lambda, self.cap, levels, None, |lam, x| {
            let h = self.compose(&self.hom(lam.dst(), n)[x], &self.embed(lam));
            self.index_of(&h).expect("closed under composition")
        })
    }
}

fn render(c: &OperadData, h: &HomElem) -> String {
    let parts: Vec<String> =
        h.phi.fibers().iter().zip(&h.parts).map(|(f, &p)| c.seq.label(f.len(), p).to_string()).collect();
    let t: Vec<String> = h.phi.table().iter().map(usize::to_string).collect();
    format!("[{}|{}]", t.join(","), parts.join(","))
}

/// `C̄` sits inside `Ĉ` compatibly with composition.
pub fn check_inclusion(bar: &Envelope, hat: &Envelope) -> bool {
    let incl = |h: &HomElem| HomElem { phi: h.phi.retag(Cat::F).expect("effective maps are based"), parts: h.parts.clone() };
    let cap = bar.cap.min(hat.cap);
    (0..=cap).all(|n| {
        (0..=cap).all(|m| {
            (0..=cap).all(|p| {
                bar.hom(n, m).iter().all(|f| {
                    bar.hom(m, p).iter().all(|g| incl(&bar.compose(g, f)) == hat.compose(&incl(g), &incl(f)))
                })
            })
        })
    })
}

/// `Ĉ(-, n) ≅ C̄(-, n) ⊠ Comm`, one comparison per target `n`.
#[derive(Clone, Debug)]
pub struct ChatReport {
    pub per_target: Vec<Comparison>,
}

impl ChatReport {
    pub fn is_iso(&self) -> bool {
        self.per_target.iter().all(Comparison::is_iso)
    }
}

/// Split the source of a `Ĉ` morphism into the points over `1..=n` and the
/// rest, and send it to the class of `(C̄ part, ∗)`.
pub fn check_chat_formula(c: &OperadData, cap: usize) -> Result<ChatReport, EnvelopeError> {
    let bar = envelope(c, Variant::Bar, cap)?;
    let hat = envelope(c, Variant::Hat, cap)?;
    let cap = bar.cap;
    let comm = TruncSeq::comm(cap);
    let mut per_target = Vec::new();
    for n in 0..=cap {
        let b = bar.representable(n);
        let h = hat.representable(n);
        let bx = box2_explicit(&b, &comm);
        per_target.push(Comparison::direct(&h, &bx.seq, |m, x| {
            let e = &hat.hom(m, n)[x];
            let s: Vec<usize> = e.phi.table().iter().copied().filter(|&v| v != 0).collect();
            let phi = IndexMor::new(Cat::Fgt0, s.len(), n, s).ok()?;
            let inner = bar.index_of(&HomElem { phi, parts: e.parts.clone() })?;
            let blocks = e.phi.table().iter().map(|&v| usize::from(v == 0)).collect();
            bx.class_of_nf(&BoxElem { blocks, parts: vec![inner, 0] })
        }));
    }
    Ok(ChatReport { per_target })
}

// ----- the monad -----

/// One level of `Y ⊗_Ξ D(n, -)`: raw elements `(m, y, x)` and classes.
#[derive(Clone, Debug)]
pub struct MonadLevel {
    offs: Vec<usize>,
    ysizes: Vec<usize>,
    hsizes: Vec<usize>,
    pub quotient: Quotient,
}

impl MonadLevel {
    pub fn raw_count(&self) -> usize {
        *self.offs.last().unwrap_or(&0)
    }

    pub fn raw(&self, m: usize, y: usize, x: usize) -> usize {
        self.offs[m] + y * self.hsizes[m] + x
    }

    pub fn decode(&self, r: usize) -> (usize, usize, usize) {
        let m = (0..self.ysizes.len()).rev().find(|&m| self.offs[m] <= r).unwrap_or(0);
        let i = r - self.offs[m];
        (m, i / self.hsizes[m], i % self.hsizes[m])
    }

    pub fn class(&self, m: usize, y: usize, x: usize) -> usize {
        self.quotient.class_of[self.raw(m, y, x)]
    }
}

#[derive(Clone, Debug)]
pub struct MonadResult {
    pub seq: TruncSeq,
    pub levels: Vec<MonadLevel>,
    pub witnesses: Vec<FinMap>,
    /// `y ↦ (y, id)`.
    pub unit: Comparison,
}

/// `(𝔻^op Y)(n) = ∫^m Y(m) × D(n, m)`, the coend taken over `Ξ` with
/// `m ≤ cap`.
pub fn monad_op_apply(xi: Flavor, env: &Envelope, y: &TruncSeq) -> Result<MonadResult, EnvelopeError> {
    if y.flavor() != xi {
        return Err(EnvelopeError::Flavor(y.flavor(), xi));
    }
    let cap = env.cap.min(y.cap());
    let gens: Vec<IndexMor> = (0..=cap)
        .flat_map(|m| {
            let mut g: Vec<IndexMor> = (1..m).map(|t| IndexMor::transposition(m, t)).collect();
            if xi == Flavor::Lambda {
                g.extend((1..=m).map(|i| IndexMor::skip(m, i)));
            }
            g
        })
        .collect();
    let mut levels = Vec::new();
    for n in 0..=cap {
        let ysizes: Vec<usize> = (0..=cap).map(|m| y.size(m)).collect();
        let hsizes: Vec<usize> = (0..=cap).map(|m| env.size(n, m)).collect();
        let mut offs = vec![0];
        for m in 0..=cap {
            offs.push(offs[m] + ysizes[m] * hsizes[m]);
        }
        let mut lvl = MonadLevel { offs, ysizes, hsizes, quotient: Quotient { class_of: vec![], reps: vec![] } };
        let mut uf = UnionFind::new(lvl.raw_count());
        for f in &gens {
            let (a, b) = (f.src(), f.dst());
            let ef = env.embed(f);
            for (xi_, x) in env.hom(n, a).iter().enumerate() {
                let moved = env.index_of(&env.compose(&ef, x)).expect("closed");
                for yv in 0..y.size(b) {
                    uf.union(lvl.raw(a, y.apply(f, yv), xi_), lvl.raw(b, yv, moved));
                }
            }
        }
        lvl.quotient = uf.classes();
        levels.push(lvl);
    }
    let labels = levels
        .iter()
        .enumerate()
        .map(|(n, l)| {
            FinSetObj::new(
                l.quotient
                    .reps
                    .iter()
                    .map(|&r| {
                        let (m, yv, x) = l.decode(r);
                        format!("({}⊗{})", y.label(m, yv), render(&env.operad, &env.hom(n, m)[x]))
                    })
                    .collect(),
            )
        })
        .collect();
    let base = y.base().map(|b| levels[0].class(0, b, 0));
    let seq = TruncSeq::from_fn(xi, cap, labels, base, |g, c| {
        let (m, yv, x) = levels[g.dst()].decode(levels[g.dst()].quotient.reps[c]);
        let moved = env.compose(&env.hom(g.dst(), m)[x], &env.embed(g));
        levels[g.src()].class(m, yv, env.index_of(&moved).expect("closed"))
    });
    let unit = Comparison::direct(y, &seq, |n, yv| Some(levels[n].class(n, yv, env.index_of(&env.identity(n))?)));
    let witnesses = levels.iter().map(|l| l.quotient.projection()).collect();
    Ok(MonadResult { seq, levels, witnesses, unit })
}

#[derive(Clone, Debug)]
pub struct MonadSameReport {
    /// `Y ⊗_Λ C̄(n, -) -> Y ⊙ C` on raw elements.
    pub comparison: Comparison,
    /// The two multiplications agree under the comparison.
    pub multiplication: bool,
}

impl MonadSameReport {
    pub fn is_ok(&self) -> bool {
        self.comparison.is_iso() && self.multiplication
    }
}

/// Compare the monad of `C̄` with `- ⊙ C`, reading `(φ, c⃗)` as the normal
/// form whose blocks are the fibres of `φ`.
pub fn check_monad_same(c: &OperadData, y: &TruncSeq, cap: usize) -> Result<MonadSameReport, EnvelopeError> {
    let env = envelope(c, Variant::Bar, cap)?;
    let cap = env.cap.min(y.cap());
    let mon = monad_op_apply(Flavor::Lambda, &env, y)?;
    let kel = kelly_exact(y, &c.seq, cap)?;
    let comparison = Comparison::descend(&mon.seq, &kel.seq, &mon.witnesses, |n, r| {
        let (m, yv, x) = mon.levels[n].decode(r);
        kel.class_of(n, m, yv, &env.hom(n, m)[x].to_box())
    });
    let multiplication = match &comparison.map {
        None => false,
        Some(iota) => {
            let twice = monad_op_apply(Flavor::Lambda, &env, &mon.seq)?;
            (0..=cap).all(|n| {
                let lvl = &twice.levels[n];
                (0..lvl.raw_count()).all(|r| {
                    let (m, w, xo) = lvl.decode(r);
                    let outer = &env.hom(n, m)[xo];
                    let (k, yv, x) = mon.levels[m].decode(mon.levels[m].quotient.reps[w]);
                    let composed = env.index_of(&env.compose(&env.hom(m, k)[x], outer)).expect("closed");
                    let left = iota.components[n].apply(mon.levels[n].class(k, yv, composed));
                    let (k2, y2, z2) = kel.levels[m].rep(iota.components[m].apply(w));
                    let (blocks, subs) = regroup(z2, &outer.to_box());
                    let parts = subs.iter().zip(&z2.parts).map(|(s, &p)| c.act(p, s)).collect();
                    kel.class_of(n, k2, y2, &BoxElem { blocks, parts }) == Some(left)
                })
            })
        }
    };
    Ok(MonadSameReport { comparison, multiplication })
}

// ----- functors on C̄^op and right modules -----

/// A functor `C̄^op -> Set`: one set per arity and, for every morphism
/// `x : n -> m`, a map `F(m) -> F(n)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FunctorData {
    pub levels: Vec<FinSetObj>,
    /// `action[(n, m)][x][d]`.
    pub action: BTreeMap<(usize, usize), Vec<Vec<usize>>>,
}

/// `F(x)(d) = d · x` with `x` read as a normal form.
pub fn functor_from_rmodule(m: &RModData, env: &Envelope) -> FunctorData {
    let cap = env.cap.min(m.cap());
    let rho = m.action();
    let levels = m.seq.levels()[..=cap].to_vec();
    let mut action = BTreeMap::new();
    for n in 0..=cap {
        for k in 0..=cap {
            let tabs = env.hom(n, k).iter().map(|x| (0..m.seq.size(k)).map(|d| rho.apply(d, &x.to_box())).collect()).collect();
            action.insert((n, k), tabs);
        }
    }
    FunctorData { levels, action }
}

/// Identities act trivially and `F(g ∘ f) = F(f) F(g)`.
pub fn check_functor(f: &FunctorData, env: &Envelope) -> Vec<String> {
    let cap = f.levels.len() - 1;
    let mut bad = Vec::new();
    for n in 0..=cap {
        let id = env.index_of(&env.identity(n)).expect("identity");
        if f.action[&(n, n)][id].iter().enumerate().any(|(d, &v)| d != v) {
            bad.push(format!("identity of {n} acts non-trivially"));
        }
        for m in 0..=cap {
            for (xi, x) in env.hom(n, m).iter().enumerate() {
                for p in 0..=cap {
                    for (gi, g) in env.hom(m, p).iter().enumerate() {
                        let gf = env.index_of(&env.compose(g, x)).expect("closed");
                        for d in 0..f.levels[p].size() {
                            let lhs = f.action[&(n, p)][gf][d];
                            let rhs = f.action[&(n, m)][xi][f.action[&(m, p)][gi][d]];
                            if lhs != rhs {
                                bad.push(format!("composite of {} and {} at {}", g.phi, x.phi, f.levels[p].label(d)));
                            }
                        }
                    }
                }
            }
        }
    }
    bad
}

/// Restrict a functor along `Λ ⊂ C̄` for the sequence and along the
/// consecutive fibre maps for `ψ`.
pub fn rmodule_from_functor(f: &FunctorData, env: &Envelope, base: Option<usize>) -> RModData {
    let cap = f.levels.len() - 1;
    let seq = TruncSeq::from_fn(Flavor::Lambda, cap, f.levels.clone(), base, |lam, d| {
        let x = env.index_of(&env.embed(lam)).expect("injection");
        f.action[&(lam.src(), lam.dst())][x][d]
    });
    RModData::from_rule(&env.operad, seq, |p, d, parts| {
        let x = HomElem::from_box(&BoxElem::consecutive(p, parts.to_vec()));
        let xi = env.index_of(&x).expect("fibre map");
        f.action[&(p.iter().sum(), p.len())][xi][d]
    })
}

#[derive(Clone, Debug, Serialize)]
pub struct HomSizeTable {
    pub operad: String,
    pub variant: Variant,
    pub sizes: Vec<Vec<usize>>,
}

impl HomSizeTable {
    pub fn new(name: &str, env: &Envelope) -> Self {
        HomSizeTable { operad: name.into(), variant: env.variant, sizes: env.size_table() }
    }

    /// Rows `n`, columns `m`.
    pub fn to_tsv(&self) -> String {
        let cap = self.sizes.len().saturating_sub(1);
        let mut s = String::from("n\\m");
        for m in 0..=cap {
            s.push_str(&format!("\t{m}"));
        }
        s.push('\n');
        for (n, row) in self.sizes.iter().enumerate() {
            s.push_str(&n.to_string());
            for v in row {
                s.push_str(&format!("\t{v}"));
            }
            s.push('\n');
        }
        s
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::index_cats::factorial;
    use crate::rmodules::lift_to_lambda;

    #[test]
    fn hom_sizes() {
        let i1b = envelope(&OperadData::i1(4), Variant::Bar, 4).unwrap();
        let cb = envelope(&OperadData::comm(4), Variant::Bar, 4).unwrap();
        let ch = envelope(&OperadData::comm(4), Variant::Hat, 4).unwrap();
        let i1h = envelope(&OperadData::i1(4), Variant::Hat, 4).unwrap();
        for n in 0..=4 {
            for m in 0..=4 {
                let inj = if n <= m { factorial(m) / factorial(m - n) } else { 0 };
                assert_eq!(i1b.size(n, m), inj);
                assert_eq!(cb.size(n, m), m.pow(n as u32));
                assert_eq!(ch.size(n, m), (m + 1).pow(n as u32));
                assert_eq!(i1h.size(n, m), enumerate(Cat::Pi, n, m).len());
            }
        }
        assert_eq!(i1h.size(1, 1), 2);
    }

    #[test]
    fn composition_is_a_category() {
        for c in [OperadData::comm(2), OperadData::ass(2), OperadData::i1(2)] {
            for v in [Variant::Bar, Variant::Hat] {
                let e = envelope(&c, v, 2).unwrap();
                assert!(e.check_category().is_empty());
            }
        }
        let bar = envelope(&OperadData::ass(2), Variant::Bar, 2).unwrap();
        let hat = envelope(&OperadData::ass(2), Variant::Hat, 2).unwrap();
        assert!(check_inclusion(&bar, &hat));
    }

    #[test]
    fn chat_formula() {
        assert!(check_chat_formula(&OperadData::i1(3), 3).unwrap().is_iso());
        assert!(check_chat_formula(&OperadData::comm(3), 3).unwrap().is_iso());
        assert!(check_chat_formula(&OperadData::ass(2), 2).unwrap().is_iso());
    }

    #[test]
    fn yoneda_for_i1() {
        let env = envelope(&OperadData::i1(3), Variant::Bar, 3).unwrap();
        for y in [TruncSeq::ass(3), TruncSeq::comm(3), TruncSeq::i_m(2, 3)] {
            let r = monad_op_apply(Flavor::Lambda, &env, &y).unwrap();
            assert!(r.unit.is_iso());
        }
        let s = TruncSeq::ass(3).forget_to_sigma();
        assert!(monad_op_apply(Flavor::Lambda, &env, &s).is_err());
    }

    #[test]
    fn monad_matches_kelly() {
        let r = check_monad_same(&OperadData::comm(3), &TruncSeq::comm(3), 3).unwrap();
        assert!(r.is_ok());
        assert_eq!(r.comparison.levels.iter().map(|l| l.src).collect::<Vec<_>>(), vec![1, 1, 2, 5]);
        assert!(check_monad_same(&OperadData::ass(2), &TruncSeq::i1(2), 2).unwrap().is_ok());
        let env = envelope(&OperadData::comm(3), Variant::Bar, 3).unwrap();
        let u = monad_op_apply(Flavor::Lambda, &env, &TruncSeq::comm(3)).unwrap().unit;
        assert!(u.levels.iter().all(|l| l.injective));
    }

    #[test]
    fn functor_round_trip() {
        let c = OperadData::comm(3);
        let env = envelope(&c, Variant::Bar, 3).unwrap();
        let m = RModData::regular(&c);
        let f = functor_from_rmodule(&m, &env);
        assert!(check_functor(&f, &env).is_empty());
        assert_eq!(rmodule_from_functor(&f, &env, m.seq.base()), m);

        let a = TruncSeq::ass(3);
        let i = envelope(&OperadData::i1(3), Variant::Bar, 3).unwrap();
        let m = RModData::from_lambda_seq(&a);
        let f = functor_from_rmodule(&m, &i);
        assert_eq!(rmodule_from_functor(&f, &i, a.base()), m);
        // the Σ-route gives the same functor
        assert_eq!(functor_from_rmodule(&lift_to_lambda(&m.forget()).unwrap(), &i), f);

        let mut bad = f.clone();
        let t = bad.action.get_mut(&(2, 2)).unwrap();
        t[1][0] = 1 - t[1][0];
        assert!(!check_functor(&bad, &i).is_empty());
    }
}
