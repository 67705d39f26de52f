//! The indexing categories `Σ ⊂ Λ ⊂ Π ⊂ F` and `F_{>0}`.
//!
//! Objects are `n = {1..n}`. A morphism `n -> m` is a table of length `n`
//! with values in `0..=m`; the value `0` is the basepoint and only occurs in
//! `Π` and `F`.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum IndexError {
    #[error("table {table:?} is not a morphism {src}->{dst} of {cat}")]
    NotInCategory { cat: Cat, src: usize, dst: usize, table: Vec<usize> },
    #[error("cannot compose {0} after {1}")]
    Mismatch(String, String),
    #[error("cannot parse morphism `{0}`")]
    Parse(String),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Cat {
    Sigma,
    Lambda,
    Pi,
    Fgt0,
    F,
}

impl Cat {
    pub const ALL: [Cat; 5] = [Cat::Sigma, Cat::Lambda, Cat::Pi, Cat::Fgt0, Cat::F];

    pub fn name(self) -> &'static str {
        match self {
            Cat::Sigma => "sigma",
            Cat::Lambda => "lambda",
            Cat::Pi => "pi",
            Cat::Fgt0 => "fgt0",
            Cat::F => "f",
        }
    }

    /// Whether `other` is a subcategory of `self`.
    pub fn contains(self, other: Cat) -> bool {
        use Cat::*;
        match self {
            Sigma => other == Sigma,
            Lambda => matches!(other, Sigma | Lambda),
            Pi => matches!(other, Sigma | Lambda | Pi),
            Fgt0 => matches!(other, Sigma | Lambda | Fgt0),
            F => true,
        }
    }

    /// Smallest category containing both.
    pub fn join(self, other: Cat) -> Cat {
        if self.contains(other) {
            self
        } else if other.contains(self) {
            other
        } else {
            Cat::F
        }
    }

    fn allows_zero(self) -> bool {
        matches!(self, Cat::Pi | Cat::F)
    }

    fn injective(self) -> bool {
        matches!(self, Cat::Sigma | Cat::Lambda | Cat::Pi)
    }
}

impl fmt::Display for Cat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Cat {
    type Err = IndexError;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Cat::ALL.into_iter().find(|c| c.name() == s).ok_or_else(|| IndexError::Parse(s.into()))
    }
}

/// A morphism `src -> dst` of one of the indexing categories. The table is
/// 1-based on both sides, with `0` for the basepoint.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct IndexMor {
    cat: Cat,
    src: usize,
    dst: usize,
    table: Vec<usize>,
}

fn table_in(cat: Cat, dst: usize, table: &[usize]) -> bool {
    let mut seen = vec![false; dst + 1];
    for &v in table {
        if v > dst || (v == 0 && !cat.allows_zero()) {
            return false;
        }
        if v != 0 && cat.injective() && std::mem::replace(&mut seen[v], true) {
            return false;
        }
    }
    cat != Cat::Sigma || table.len() == dst
}

impl IndexMor {
    pub fn new(cat: Cat, src: usize, dst: usize, table: Vec<usize>) -> Result<Self, IndexError> {
        if table.len() != src || !table_in(cat, dst, &table) {
            return Err(IndexError::NotInCategory { cat, src, dst, table });
        }
        Ok(IndexMor { cat, src, dst, table })
    }

    pub(crate) fn raw(cat: Cat, dst: usize, table: Vec<usize>) -> Self {
        debug_assert!(table_in(cat, dst, &table), "{cat} {dst} {table:?}");
        IndexMor { cat, src: table.len(), dst, table }
    }

    pub fn identity(cat: Cat, n: usize) -> Self {
        IndexMor::raw(cat, n, (1..=n).collect())
    }

    /// The order-preserving injection `n-1 -> n` missing `i` (1-based).
    pub fn skip(n: usize, i: usize) -> Self {
        assert!(i >= 1 && i <= n);
        IndexMor::raw(Cat::Lambda, n, (1..n).map(|x| if x < i { x } else { x + 1 }).collect())
    }

    /// The adjacent transposition of `t` and `t+1` in `Σ_n`.
    pub fn transposition(n: usize, t: usize) -> Self {
        assert!(t >= 1 && t < n);
        let mut table: Vec<usize> = (1..=n).collect();
        table.swap(t - 1, t);
        IndexMor::raw(Cat::Sigma, n, table)
    }

    pub fn cat(&self) -> Cat {
        self.cat
    }

    pub fn src(&self) -> usize {
        self.src
    }

    pub fn dst(&self) -> usize {
        self.dst
    }

    pub fn table(&self) -> &[usize] {
        &self.table
    }

    /// Image of `x` (1-based, `0` maps to `0`).
    pub fn apply(&self, x: usize) -> usize {
        if x == 0 {
            0
        } else {
            self.table[x - 1]
        }
    }

    /// Smallest category the underlying table lives in.
    pub fn minimal_cat(&self) -> Cat {
        Cat::ALL
            .into_iter()
            .find(|&c| self.table.len() == self.src && table_in(c, self.dst, &self.table))
            .unwrap_or(Cat::F)
    }

    pub fn belongs_to(&self, cat: Cat) -> bool {
        table_in(cat, self.dst, &self.table)
    }

    pub fn retag(&self, cat: Cat) -> Result<Self, IndexError> {
        IndexMor::new(cat, self.src, self.dst, self.table.clone())
    }

    pub fn is_identity(&self) -> bool {
        self.src == self.dst && self.table.iter().enumerate().all(|(i, &v)| v == i + 1)
    }

    pub fn is_permutation(&self) -> bool {
        self.belongs_to(Cat::Sigma)
    }

    /// `self ∘ f`, tagged with the join of the two categories.
    pub fn compose(&self, f: &IndexMor) -> Result<IndexMor, IndexError> {
        if f.dst != self.src {
            return Err(IndexError::Mismatch(self.to_string(), f.to_string()));
        }
        Ok(IndexMor::raw(
            self.cat.join(f.cat),
            self.dst,
            f.table.iter().map(|&x| self.apply(x)).collect(),
        ))
    }

    /// `f1 ⊕ f2 : n1+n2 -> m1+m2`.
    pub fn block_sum(&self, other: &IndexMor) -> IndexMor {
        let shift = self.dst;
        let table = self
            .table
            .iter()
            .copied()
            .chain(other.table.iter().map(|&v| if v == 0 { 0 } else { v + shift }))
            .collect();
        IndexMor::raw(self.cat.join(other.cat), self.dst + other.dst, table)
    }

    /// Preimages of `1..=dst`, each in increasing order.
    pub fn fibers(&self) -> Vec<Vec<usize>> {
        let mut out = vec![Vec::new(); self.dst];
        for (i, &v) in self.table.iter().enumerate() {
            if v != 0 {
                out[v - 1].push(i + 1);
            }
        }
        out
    }

    pub fn inverse(&self) -> Option<IndexMor> {
        if !self.is_permutation() {
            return None;
        }
        let mut inv = vec![0; self.src];
        for (i, &v) in self.table.iter().enumerate() {
            inv[v - 1] = i + 1;
        }
        Some(IndexMor::raw(self.cat, self.src, inv))
    }

    /// Canonical text form, e.g. `lambda:2->3:[1,3]`.
    pub fn encode(&self) -> String {
        self.to_string()
    }

    pub fn decode(s: &str) -> Result<Self, IndexError> {
        s.parse()
    }
}

impl fmt::Display for IndexMor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let t: Vec<String> = self.table.iter().map(usize::to_string).collect();
        write!(f, "{}:{}->{}:[{}]", self.cat, self.src, self.dst, t.join(","))
    }
}

impl FromStr for IndexMor {
    type Err = IndexError;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let bad = || IndexError::Parse(s.to_string());
        let mut parts = s.splitn(3, ':');
        let cat: Cat = parts.next().ok_or_else(bad)?.parse().map_err(|_| bad())?;
        let (src, dst) = parts.next().and_then(|p| p.split_once("->")).ok_or_else(bad)?;
        let src: usize = src.parse().map_err(|_| bad())?;
        let dst: usize = dst.parse().map_err(|_| bad())?;
        let body = parts.next().and_then(|b| b.strip_prefix('[')?.strip_suffix(']')).ok_or_else(bad)?;
        let table = if body.is_empty() {
            Vec::new()
        } else {
            body.split(',').map(|x| x.trim().parse().map_err(|_| bad())).collect::<Result<_, _>>()?
        };
        IndexMor::new(cat, src, dst, table)
    }
}

/// All morphisms `n -> m` of `cat`, in lexicographic order of tables.
pub fn enumerate(cat: Cat, n: usize, m: usize) -> Vec<IndexMor> {
    if cat == Cat::Sigma && n != m {
        return Vec::new();
    }
    let lo = if cat.allows_zero() { 0 } else { 1 };
    let mut out = Vec::new();
    let mut cur = Vec::with_capacity(n);
    let mut used = vec![false; m + 1];
    fn go(
        cat: Cat,
        n: usize,
        m: usize,
        lo: usize,
        cur: &mut Vec<usize>,
        used: &mut [bool],
        out: &mut Vec<IndexMor>,
    ) {
        if cur.len() == n {
            out.push(IndexMor::raw(cat, m, cur.clone()));
            return;
        }
        for v in lo..=m {
            let track = v != 0 && cat.injective();
            if track && used[v] {
                continue;
            }
            if track {
                used[v] = true;
            }
            cur.push(v);
            go(cat, n, m, lo, cur, used, out);
            cur.pop();
            if track {
                used[v] = false;
            }
        }
    }
    go(cat, n, m, lo, &mut cur, &mut used, &mut out);
    out
}

/// Lexicographic rank of a permutation table of `1..=n`.
pub fn perm_rank(table: &[usize]) -> usize {
    let n = table.len();
    let mut rank = 0;
    let mut fact = vec![1usize; n + 1];
    for i in 1..=n {
        fact[i] = fact[i - 1] * i;
    }
    for i in 0..n {
        let smaller = table[i + 1..].iter().filter(|&&v| v < table[i]).count();
        rank += smaller * fact[n - 1 - i];
    }
    rank
}

pub fn factorial(n: usize) -> usize {
    (1..=n).product()
}

/// Factor an injection `λ : n -> j+k` as `(f1 ⊕ f2) ∘ π` with `π` the shuffle
/// sorting the points hitting the first block before those hitting the
/// second. Returns `(π, f1, f2)`.
pub fn split_injection(lambda: &IndexMor, j: usize) -> (IndexMor, IndexMor, IndexMor) {
    let n = lambda.src();
    let mut first = Vec::new();
    let mut second = Vec::new();
    for x in 1..=n {
        let v = lambda.apply(x);
        if v <= j {
            first.push(x);
        } else {
            second.push(x);
        }
    }
    let mut pi = vec![0; n];
    for (t, &x) in first.iter().enumerate() {
        pi[x - 1] = t + 1;
    }
    for (t, &x) in second.iter().enumerate() {
        pi[x - 1] = first.len() + t + 1;
    }
    let f1 = first.iter().map(|&x| lambda.apply(x)).collect();
    let f2 = second.iter().map(|&x| lambda.apply(x) - j).collect();
    let k = lambda.dst() - j;
    let cat = if lambda.cat() == Cat::Sigma { Cat::Sigma } else { Cat::Lambda };
    let f1 = IndexMor::raw(if first.len() == j { cat } else { Cat::Lambda }, j, f1);
    let f2 = IndexMor::raw(if second.len() == k { cat } else { Cat::Lambda }, k, f2);
    (IndexMor::raw(Cat::Sigma, n, pi), f1, f2)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn brute_count(cat: Cat, n: usize, m: usize) -> usize {
        let mut count = 0;
        let total = (m + 1).pow(n as u32);
        for code in 0..total {
            let mut t = Vec::new();
            let mut c = code;
            for _ in 0..n {
                t.push(c % (m + 1));
                c /= m + 1;
            }
            if IndexMor::new(cat, n, m, t).is_ok() {
                count += 1;
            }
        }
        count
    }

    #[test]
    fn counts_match_brute_force() {
        for cat in Cat::ALL {
            for n in 0..=4 {
                for m in 0..=4 {
                    assert_eq!(enumerate(cat, n, m).len(), brute_count(cat, n, m), "{cat} {n} {m}");
                }
            }
        }
    }

    #[test]
    fn closed_forms() {
        // |Λ(n,m)| = m!/(m-n)!, |F(n,m)| = (m+1)^n, |Π(n,m)| = sum_k C(n,k) m!/(m-k)!
        assert_eq!(enumerate(Cat::Lambda, 2, 4).len(), 12);
        assert_eq!(enumerate(Cat::F, 3, 2).len(), 27);
        assert_eq!(enumerate(Cat::Fgt0, 3, 2).len(), 8);
        assert_eq!(enumerate(Cat::Pi, 2, 2).len(), 1 + 4 + 2);
    }

    #[test]
    fn enumeration_is_lexicographic() {
        let all = enumerate(Cat::F, 3, 2);
        assert!(all.windows(2).all(|w| w[0].table() < w[1].table()));
    }

    #[test]
    fn lattice_joins() {
        assert_eq!(Cat::Pi.join(Cat::Fgt0), Cat::F);
        assert_eq!(Cat::Sigma.join(Cat::Lambda), Cat::Lambda);
        assert_eq!(Cat::Lambda.join(Cat::Fgt0), Cat::Fgt0);
    }

    #[test]
    fn composition_associative_and_tagged() {
        let fs = enumerate(Cat::Pi, 2, 2);
        let gs = enumerate(Cat::Fgt0, 2, 2);
        for f in &fs {
            for g in &gs {
                let h = g.compose(f).unwrap();
                assert_eq!(h.cat(), Cat::F);
                for k in &gs {
                    assert_eq!(k.compose(&h).unwrap().table(), k.compose(g).unwrap().compose(f).unwrap().table());
                }
            }
        }
    }

    #[test]
    fn block_sum_and_fibers() {
        let a = IndexMor::new(Cat::Lambda, 1, 2, vec![2]).unwrap();
        let b = IndexMor::new(Cat::F, 2, 1, vec![0, 1]).unwrap();
        let s = a.block_sum(&b);
        assert_eq!(s.table(), &[2, 0, 3]);
        assert_eq!(s.fibers(), vec![vec![], vec![1], vec![3]]);
    }

    #[test]
    fn encode_roundtrip() {
        for f in enumerate(Cat::Pi, 2, 3) {
            assert_eq!(IndexMor::decode(&f.encode()).unwrap(), f);
        }
        assert!(IndexMor::decode("lambda:2->1:[1,1]").is_err());
    }

    #[test]
    fn perm_rank_matches_enumeration() {
        for (i, p) in enumerate(Cat::Sigma, 4, 4).iter().enumerate() {
            assert_eq!(perm_rank(p.table()), i);
        }
    }

    #[test]
    fn split_injection_factors() {
        for lam in enumerate(Cat::Lambda, 3, 4) {
            for j in 0..=4 {
                let (pi, f1, f2) = split_injection(&lam, j);
                assert_eq!(f1.block_sum(&f2).compose(&pi).unwrap().table(), lam.table());
            }
        }
    }
}
