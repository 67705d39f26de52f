//! Truncated Σ- and Λ-sequences: contravariant functors on `Σ` or `Λ`
//! restricted to objects `0..=cap`.
//!
//! A morphism `f : n -> m` acts as a map `X(m) -> X(n)`. Levels above the
//! cap are read as empty, which is again a valid sequence because no
//! morphism of `Λ` goes from a larger to a smaller object.

use std::collections::hash_map::DefaultHasher;
use std::collections::BTreeMap;
use std::fmt;
use std::hash::{Hash, Hasher};

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::finset::{FinMap, FinSetObj};
use crate::index_cats::{enumerate, Cat, IndexMor};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum SeqError {
    #[error("sequence has {levels} levels but cap {cap}")]
    LevelCount { levels: usize, cap: usize },
    #[error("missing action for {0}")]
    MissingAction(String),
    #[error("action of {mor} has shape {src}->{dst}, expected {esrc}->{edst}")]
    Shape { mor: String, src: usize, dst: usize, esrc: usize, edst: usize },
    #[error("morphism {0} does not belong to the sequence's category")]
    WrongCategory(String),
    #[error("base point {0} is outside level 0")]
    Base(usize),
    #[error("component {level} of a morphism has shape {src}->{dst}, expected {esrc}->{edst}")]
    ComponentShape { level: usize, src: usize, dst: usize, esrc: usize, edst: usize },
    #[error("not natural: {0}")]
    NotNatural(String),
    #[error("flavors differ")]
    Flavor,
    #[error("malformed sequence JSON: {0}")]
    Json(String),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Flavor {
    Sigma,
    Lambda,
}

impl Flavor {
    pub fn cat(self) -> Cat {
        match self {
            Flavor::Sigma => Cat::Sigma,
            Flavor::Lambda => Cat::Lambda,
        }
    }

    pub fn meet(self, other: Flavor) -> Flavor {
        if self == Flavor::Lambda && other == Flavor::Lambda {
            Flavor::Lambda
        } else {
            Flavor::Sigma
        }
    }
}

impl fmt::Display for Flavor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Flavor::Sigma => "sigma",
            Flavor::Lambda => "lambda",
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TruncSeq {
    flavor: Flavor,
    cap: usize,
    levels: Vec<FinSetObj>,
    action: BTreeMap<IndexMor, FinMap>,
    base: Option<usize>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub enum ViolationKind {
    Missing,
    Shape,
    Identity,
    Composition,
    Base,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Violation {
    pub kind: ViolationKind,
    pub detail: String,
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct ValidationReport {
    pub violations: Vec<Violation>,
}

impl ValidationReport {
    pub fn is_ok(&self) -> bool {
        self.violations.is_empty()
    }
}

impl TruncSeq {
    /// Build a sequence from its levels and a rule `(f, x) -> X(f)(x)`,
    /// evaluated on every morphism of the flavor's category up to the cap.
    pub fn from_fn(
        flavor: Flavor,
        cap: usize,
        levels: Vec<FinSetObj>,
        base: Option<usize>,
        mut rule: impl FnMut(&IndexMor, usize) -> usize,
    ) -> Self {
        assert_eq!(levels.len(), cap + 1);
        let mut action = BTreeMap::new();
        for n in 0..=cap {
            for m in 0..=cap {
                for f in enumerate(flavor.cat(), n, m) {
                    let table = (0..levels[m].size()).map(|x| rule(&f, x)).collect();
                    action.insert(f, FinMap::raw(levels[n].size(), table));
                }
            }
        }
        TruncSeq { flavor, cap, levels, action, base }
    }

    /// Assemble from explicit tables; shapes are checked, functoriality is
    /// left to [`TruncSeq::validate`].
    pub fn from_parts(
        flavor: Flavor,
        cap: usize,
        levels: Vec<FinSetObj>,
        action: BTreeMap<IndexMor, FinMap>,
        base: Option<usize>,
    ) -> Result<Self, SeqError> {
        if levels.len() != cap + 1 {
            return Err(SeqError::LevelCount { levels: levels.len(), cap });
        }
        let mut norm = BTreeMap::new();
        for (f, map) in action {
            let f = f.retag(flavor.cat()).map_err(|_| SeqError::WrongCategory(f.to_string()))?;
            if f.src() > cap || f.dst() > cap {
                continue;
            }
            let (esrc, edst) = (levels[f.dst()].size(), levels[f.src()].size());
            if map.src() != esrc || map.dst() != edst {
                return Err(SeqError::Shape {
                    mor: f.to_string(),
                    src: map.src(),
                    dst: map.dst(),
                    esrc,
                    edst,
                });
            }
            norm.insert(f, map);
        }
        for n in 0..=cap {
            for m in 0..=cap {
                for f in enumerate(flavor.cat(), n, m) {
                    if !norm.contains_key(&f) {
                        return Err(SeqError::MissingAction(f.to_string()));
                    }
                }
            }
        }
        if let Some(b) = base {
            if b >= levels[0].size() {
                return Err(SeqError::Base(b));
            }
        }
        Ok(TruncSeq { flavor, cap, levels, action: norm, base })
    }

    pub fn flavor(&self) -> Flavor {
        self.flavor
    }

    pub fn cap(&self) -> usize {
        self.cap
    }

    pub fn base(&self) -> Option<usize> {
        self.base
    }

    pub fn levels(&self) -> &[FinSetObj] {
        &self.levels
    }

    pub fn level(&self, n: usize) -> Option<&FinSetObj> {
        self.levels.get(n)
    }

    /// Size of `X(n)`, zero above the cap.
    pub fn size(&self, n: usize) -> usize {
        self.levels.get(n).map_or(0, FinSetObj::size)
    }

    pub fn sizes(&self) -> Vec<usize> {
        self.levels.iter().map(FinSetObj::size).collect()
    }

    pub fn label(&self, n: usize, x: usize) -> &str {
        self.levels[n].label(x)
    }

    pub fn action(&self) -> &BTreeMap<IndexMor, FinMap> {
        &self.action
    }

    pub fn is_based(&self) -> bool {
        self.base.is_some()
    }

    /// Based with `X(0)` a single point.
    pub fn is_unital(&self) -> bool {
        self.base.is_some() && self.size(0) == 1
    }

    /// Whether `f` acts on this sequence.
    pub fn acts(&self, f: &IndexMor) -> bool {
        f.belongs_to(self.flavor.cat())
    }

    fn key(&self, f: &IndexMor) -> IndexMor {
        IndexMor::raw(self.flavor.cat(), f.dst(), f.table().to_vec())
    }

    /// `X(f) : X(m) -> X(n)` for `f : n -> m`.
    pub fn act(&self, f: &IndexMor) -> Option<&FinMap> {
        if !self.acts(f) {
            return None;
        }
        self.action.get(&self.key(f))
    }

    /// `X(f)(x)`; panics when `f` does not act or `x` is out of range.
    pub fn apply(&self, f: &IndexMor, x: usize) -> usize {
        if f.is_identity() {
            return x;
        }
        match self.act(f) {
            Some(m) => m.apply(x),
            None => panic!("{f} does not act on a {} sequence of cap {}", self.flavor, self.cap),
        }
    }

    /// Restrict the action to permutations.
    pub fn forget_to_sigma(&self) -> TruncSeq {
        let action = self
            .action
            .iter()
            .filter(|(f, _)| f.is_permutation())
            .map(|(f, m)| (f.retag(Cat::Sigma).expect("permutation"), m.clone()))
            .collect();
        TruncSeq { flavor: Flavor::Sigma, cap: self.cap, levels: self.levels.clone(), action, base: self.base }
    }

    pub fn with_base(mut self, base: Option<usize>) -> Self {
        self.base = base;
        self
    }

    /// Extend by empty levels up to `new_cap`.
    pub fn extend_cap(&self, new_cap: usize) -> TruncSeq {
        if new_cap <= self.cap {
            return self.restrict_cap(new_cap);
        }
        let mut levels = self.levels.clone();
        levels.resize(new_cap + 1, FinSetObj::empty());
        TruncSeq::from_fn(self.flavor, new_cap, levels, self.base, |f, x| self.apply(f, x))
    }

    pub fn restrict_cap(&self, new_cap: usize) -> TruncSeq {
        let new_cap = new_cap.min(self.cap);
        let action =
            self.action.iter().filter(|(f, _)| f.dst() <= new_cap).map(|(f, m)| (f.clone(), m.clone())).collect();
        TruncSeq {
            flavor: self.flavor,
            cap: new_cap,
            levels: self.levels[..=new_cap].to_vec(),
            action,
            base: self.base,
        }
    }

    /// Relabel elements without touching the action.
    pub fn relabel(mut self, mut label: impl FnMut(usize, usize) -> String) -> Self {
        for (n, lvl) in self.levels.iter_mut().enumerate() {
            *lvl = FinSetObj::new((0..lvl.size()).map(|x| label(n, x)).collect());
        }
        self
    }

    /// Content hash used to memoise constructions on sequences.
    pub fn fingerprint(&self) -> u64 {
        let mut h = DefaultHasher::new();
        self.flavor.hash(&mut h);
        self.cap.hash(&mut h);
        self.sizes().hash(&mut h);
        for (f, m) in &self.action {
            f.hash(&mut h);
            m.hash(&mut h);
        }
        self.base.hash(&mut h);
        h.finish()
    }

    /// Check identities, all composable pairs and the base point.
    pub fn validate(&self) -> ValidationReport {
        let mut v = Vec::new();
        let cat = self.flavor.cat();
        let push = |v: &mut Vec<Violation>, kind, detail: String| v.push(Violation { kind, detail });
        if let Some(b) = self.base {
            if b >= self.size(0) {
                push(&mut v, ViolationKind::Base, format!("base {b} outside level 0"));
            }
        }
        for n in 0..=self.cap {
            for m in 0..=self.cap {
                for f in enumerate(cat, n, m) {
                    match self.action.get(&f) {
                        None => push(&mut v, ViolationKind::Missing, f.to_string()),
                        Some(map) if map.src() != self.size(m) || map.dst() != self.size(n) => {
                            push(&mut v, ViolationKind::Shape, f.to_string())
                        }
                        Some(map) if f.is_identity() && *map != FinMap::identity(self.size(n)) => {
                            push(&mut v, ViolationKind::Identity, f.to_string())
                        }
                        _ => {}
                    }
                }
            }
        }
        if v.iter().any(|x| x.kind != ViolationKind::Base) {
            return ValidationReport { violations: v };
        }
        for a in 0..=self.cap {
            for b in 0..=self.cap {
                let fs = enumerate(cat, a, b);
                for c in 0..=self.cap {
                    let gs = enumerate(cat, b, c);
                    for f in &fs {
                        let xf = &self.action[f];
                        for g in &gs {
                            let gf = g.compose(f).expect("composable");
                            let xg = &self.action[g];
                            let xgf = &self.action[&gf];
                            if let Some(x) = (0..self.size(c)).find(|&x| xgf.apply(x) != xf.apply(xg.apply(x))) {
                                push(
                                    &mut v,
                                    ViolationKind::Composition,
                                    format!("X({g} . {f}) != X({f}) X({g}) at {}", self.label(c, x)),
                                );
                            }
                        }
                    }
                }
            }
        }
        ValidationReport { violations: v }
    }

    pub fn to_json(&self) -> serde_json::Value {
        serde_json::to_value(SeqJson::from(self)).expect("serialisable")
    }

    pub fn from_json(v: &serde_json::Value) -> Result<Self, SeqError> {
        let j: SeqJson = serde_json::from_value(v.clone()).map_err(|e| SeqError::Json(e.to_string()))?;
        j.try_into()
    }

    // ----- constructors -----

    /// The representable `Λ(-, m)`.
    pub fn i_m(m: usize, cap: usize) -> Self {
        let homs: Vec<Vec<IndexMor>> = (0..=cap).map(|n| enumerate(Cat::Lambda, n, m)).collect();
        let levels = homs.iter().map(|h| FinSetObj::new(h.iter().map(|l| table_label(l.table())).collect())).collect();
        let index: Vec<BTreeMap<Vec<usize>, usize>> = homs
            .iter()
            .map(|h| h.iter().enumerate().map(|(i, l)| (l.table().to_vec(), i)).collect())
            .collect();
        let base = if homs[0].is_empty() { None } else { Some(0) };
        TruncSeq::from_fn(Flavor::Lambda, cap, levels, base, |f, x| {
            let lam = &homs[f.dst()][x];
            let t: Vec<usize> = f.table().iter().map(|&i| lam.apply(i)).collect();
            index[f.src()][&t]
        })
    }

    /// `I₀`: a point in arity 0.
    pub fn i0(cap: usize) -> Self {
        TruncSeq::i_m(0, cap)
    }

    /// `I₁ = Λ(-, 1)`: points in arities 0 and 1.
    pub fn i1(cap: usize) -> Self {
        TruncSeq::i_m(1, cap)
    }

    /// The Σ-sequence unit: a point in arity 1 only.
    pub fn i1_sigma(cap: usize) -> Self {
        let levels = (0..=cap).map(|n| if n == 1 { FinSetObj::point() } else { FinSetObj::empty() }).collect();
        TruncSeq::from_fn(Flavor::Sigma, cap, levels, None, |_, x| x)
    }

    pub fn comm(cap: usize) -> Self {
        TruncSeq::from_fn(Flavor::Lambda, cap, vec![FinSetObj::point(); cap + 1], Some(0), |_, _| 0)
    }

    /// Total orders on `{1..n}`, as words in lexicographic order. An
    /// injection pulls an order back along itself.
    pub fn ass(cap: usize) -> Self {
        let words: Vec<Vec<IndexMor>> = (0..=cap).map(|n| enumerate(Cat::Sigma, n, n)).collect();
        let levels = words.iter().map(|w| FinSetObj::new(w.iter().map(|p| word_label(p.table())).collect())).collect();
        TruncSeq::from_fn(Flavor::Lambda, cap, levels, Some(0), |f, x| {
            let w = words[f.dst()][x].table();
            crate::index_cats::perm_rank(&restrict_word(w, f))
        })
    }

    /// `ι₀(X)`: the set `X` in arity 0.
    pub fn iota0(x: &FinSetObj, cap: usize, base: Option<usize>) -> Self {
        let levels = (0..=cap).map(|n| if n == 0 { x.clone() } else { FinSetObj::empty() }).collect();
        TruncSeq::from_fn(Flavor::Lambda, cap, levels, base, |_, x| x)
    }
}

/// Pull a word (total order on `1..=m`) back along an injection `n -> m`.
pub fn restrict_word(word: &[usize], f: &IndexMor) -> Vec<usize> {
    let mut pre = vec![0; f.dst() + 1];
    for a in 1..=f.src() {
        pre[f.apply(a)] = a;
    }
    word.iter().filter_map(|&l| (pre[l] != 0).then_some(pre[l])).collect()
}

pub fn word_label(w: &[usize]) -> String {
    if w.is_empty() {
        "e".into()
    } else {
        w.iter().map(usize::to_string).collect::<Vec<_>>().join("")
    }
}

fn table_label(t: &[usize]) -> String {
    format!("[{}]", t.iter().map(usize::to_string).collect::<Vec<_>>().join(","))
}

#[derive(Serialize, Deserialize)]
struct SeqJson {
    flavor: Flavor,
    cap: usize,
    levels: Vec<Vec<String>>,
    action: BTreeMap<String, Vec<usize>>,
    base: Option<usize>,
}

impl From<&TruncSeq> for SeqJson {
    fn from(s: &TruncSeq) -> Self {
        SeqJson {
            flavor: s.flavor,
            cap: s.cap,
            levels: s.levels.iter().map(|l| l.labels().to_vec()).collect(),
            action: s.action.iter().filter(|(f, _)| !f.is_identity()).map(|(f, m)| (f.encode(), m.table().to_vec())).collect(),
            base: s.base,
        }
    }
}

impl TryFrom<SeqJson> for TruncSeq {
    type Error = SeqError;
    fn try_from(j: SeqJson) -> Result<Self, SeqError> {
        let levels: Vec<FinSetObj> = j.levels.into_iter().map(FinSetObj::new).collect();
        if levels.len() != j.cap + 1 {
            return Err(SeqError::LevelCount { levels: levels.len(), cap: j.cap });
        }
        let mut action = BTreeMap::new();
        for n in 0..=j.cap {
            action.insert(IndexMor::identity(j.flavor.cat(), n), FinMap::identity(levels[n].size()));
        }
        for (k, t) in j.action {
            let f = IndexMor::decode(&k).map_err(|e| SeqError::Json(e.to_string()))?;
            let dst = levels.get(f.src()).map_or(0, FinSetObj::size);
            let m = FinMap::new(dst, t).map_err(|e| SeqError::Json(e.to_string()))?;
            action.insert(f, m);
        }
        TruncSeq::from_parts(j.flavor, j.cap, levels, action, j.base)
    }
}

/// Levelwise maps between two sequences.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SeqMorphism {
    pub components: Vec<FinMap>,
}

impl SeqMorphism {
    /// Check shapes and naturality against every morphism acting on both.
    pub fn new(src: &TruncSeq, dst: &TruncSeq, components: Vec<FinMap>) -> Result<Self, SeqError> {
        let m = SeqMorphism { components };
        m.check(src, dst)?;
        Ok(m)
    }

    pub fn unchecked(components: Vec<FinMap>) -> Self {
        SeqMorphism { components }
    }

    pub fn identity(x: &TruncSeq) -> Self {
        SeqMorphism { components: x.sizes().into_iter().map(FinMap::identity).collect() }
    }

    pub fn check(&self, src: &TruncSeq, dst: &TruncSeq) -> Result<(), SeqError> {
        let cap = src.cap().min(dst.cap());
        for n in 0..=cap {
            let c = self.components.get(n).ok_or(SeqError::ComponentShape {
                level: n,
                src: 0,
                dst: 0,
                esrc: src.size(n),
                edst: dst.size(n),
            })?;
            if c.src() != src.size(n) || c.dst() != dst.size(n) {
                return Err(SeqError::ComponentShape {
                    level: n,
                    src: c.src(),
                    dst: c.dst(),
                    esrc: src.size(n),
                    edst: dst.size(n),
                });
            }
        }
        let cat = src.flavor().meet(dst.flavor()).cat();
        for n in 0..=cap {
            for m in 0..=cap {
                for f in enumerate(cat, n, m) {
                    for x in 0..src.size(m) {
                        let lhs = self.components[n].apply(src.apply(&f, x));
                        let rhs = dst.apply(&f, self.components[m].apply(x));
                        if lhs != rhs {
                            return Err(SeqError::NotNatural(format!("{f} at {}", src.label(m, x))));
                        }
                    }
                }
            }
        }
        if let (Some(a), Some(b)) = (src.base(), dst.base()) {
            if self.components[0].apply(a) != b {
                return Err(SeqError::NotNatural("base point not preserved".into()));
            }
        }
        Ok(())
    }

    /// `g ∘ self`.
    pub fn then(&self, g: &SeqMorphism) -> SeqMorphism {
        SeqMorphism {
            components: self
                .components
                .iter()
                .zip(&g.components)
                .map(|(a, b)| a.then(b).expect("composable morphisms"))
                .collect(),
        }
    }

    pub fn is_iso(&self) -> bool {
        self.components.iter().all(FinMap::is_bijective)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn standard_sequences_validate() {
        for s in [TruncSeq::comm(3), TruncSeq::ass(3), TruncSeq::i1(3), TruncSeq::i0(3), TruncSeq::i_m(2, 3)] {
            assert!(s.validate().is_ok(), "{:?}", s.validate());
        }
        assert!(TruncSeq::i1_sigma(3).validate().is_ok());
        assert!(TruncSeq::iota0(&FinSetObj::anonymous(2), 2, Some(0)).validate().is_ok());
    }

    #[test]
    fn ass_levels_are_factorials() {
        assert_eq!(TruncSeq::ass(4).sizes(), vec![1, 1, 2, 6, 24]);
        assert_eq!(TruncSeq::i_m(2, 3).sizes(), vec![1, 2, 2, 0]);
    }

    #[test]
    fn ass_skip_deletes_letter() {
        let a = TruncSeq::ass(3);
        // word 312 with letter 2 removed is 21
        let x = a.levels()[3].labels().iter().position(|l| l == "312").unwrap();
        let y = a.apply(&IndexMor::skip(3, 2), x);
        assert_eq!(a.label(2, y), "21");
    }

    #[test]
    fn corrupted_entry_reported() {
        let a = TruncSeq::ass(3);
        let mut action = a.action().clone();
        let s1 = IndexMor::skip(3, 1);
        let mut t = action[&s1].table().to_vec();
        t[0] = 1 - t[0];
        action.insert(s1.clone(), FinMap::new(2, t).unwrap());
        let bad = TruncSeq::from_parts(Flavor::Lambda, 3, a.levels().to_vec(), action, Some(0)).unwrap();
        let r = bad.validate();
        assert!(!r.is_ok());
        assert!(r.violations.iter().all(|v| v.kind == ViolationKind::Composition));
        assert!(r.violations.iter().any(|v| v.detail.contains(&s1.to_string())));
        // equations not passing through level 3 are untouched
        assert!(r.violations.iter().all(|v| v.detail.contains("->3")));
    }

    #[test]
    fn json_roundtrip() {
        let a = TruncSeq::ass(3);
        assert_eq!(TruncSeq::from_json(&a.to_json()).unwrap(), a);
    }

    #[test]
    fn forget_keeps_permutations() {
        let a = TruncSeq::ass(3).forget_to_sigma();
        assert_eq!(a.flavor(), Flavor::Sigma);
        assert!(a.validate().is_ok());
        assert!(a.act(&IndexMor::skip(2, 1)).is_none());
    }

    #[test]
    fn extension_by_empty_is_valid() {
        let a = TruncSeq::ass(2).extend_cap(4);
        assert_eq!(a.sizes(), vec![1, 1, 2, 0, 0]);
        assert!(a.validate().is_ok());
    }
}
