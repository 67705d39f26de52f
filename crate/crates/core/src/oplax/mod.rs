//! Normal oplax monoidal structures: the n-fold products `μ_n` with the
//! comparison maps `α_{n,l,r}`, their completion from arity three by
//! limits over `W_n`, the reduced and truncated variants, and the monoid
//! criterion.
//!
//! The engine is generic over a [`Carrier`] category with finite limits.
//! Two carriers are provided: sequences of finite sets with the Kelly
//! product, and sequences of pointed finite sets with the levelwise smash
//! product.

mod carriers;
mod complete;
mod wn;

pub use carriers::{KellyLower, PointedCarrier, PointedSeq, Reduced, SeqCarrier, SmashLower, Truncated, Twisted};
pub use complete::{build_diagram, complete_mu, Completed, OplaxDiagram};
pub use wn::{enumerate_wn, is_connected, Cover, Insertion, ParenTree, Removal, WnPoset};

use serde::Serialize;
use thiserror::Error;

use crate::operads::{ChingReport, DIAGRAM_ASSOC, DIAGRAM_LEFT_UNIT, DIAGRAM_RIGHT_UNIT};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum OplaxError {
    #[error("W_n needs n >= 3, got {0}")]
    TooFewLetters(usize),
    #[error("arity {0} is beyond the structure (max {1})")]
    Arity(usize, usize),
    #[error("legs are not compatible at level {level}, element {elem}")]
    NotCompatible { level: usize, elem: usize },
    #[error("map not well defined: {0}")]
    IllDefined(String),
    #[error("the carrier has no zero object")]
    NoZero,
    #[error("lower data fails the axioms: {0}")]
    Lower(String),
    #[error("{0}")]
    Kelly(#[from] crate::kelly::KellyError),
}

/// Objects and maps of a category with finite limits, as far as the
/// engine needs them.
pub trait Carrier {
    type Obj: Clone;
    type Map: Clone + PartialEq;

    /// Content hash; equal keys mean interchangeable objects.
    fn key(&self, x: &Self::Obj) -> u64;
    fn identity(&self, x: &Self::Obj) -> Self::Map;
    /// `g ∘ f`.
    fn then(&self, f: &Self::Map, g: &Self::Map) -> Self::Map;
    fn is_iso(&self, f: &Self::Map) -> bool;
    fn sizes(&self, x: &Self::Obj) -> Vec<usize>;
    fn limit(&self, nodes: &[Self::Obj], edges: &[(usize, usize, Self::Map)]) -> Result<Cone<Self>, OplaxError>;
    /// The map into the apex induced by a compatible family of legs.
    fn factor(&self, src: &Self::Obj, cone: &Cone<Self>, legs: &[Self::Map]) -> Result<Self::Map, OplaxError>;
    fn zero(&self) -> Option<Self::Obj> {
        None
    }
    fn zero_map(&self, _src: &Self::Obj, _dst: &Self::Obj) -> Option<Self::Map> {
        None
    }
    /// Some non-identity levelwise permutation, if the object has one.
    fn twist(&self, x: &Self::Obj) -> Option<Self::Map>;
    /// Where two parallel maps differ, for reports.
    fn differs(&self, f: &Self::Map, g: &Self::Map) -> Option<String>;
}

pub struct Cone<C: Carrier + ?Sized> {
    pub apex: C::Obj,
    pub legs: Vec<C::Map>,
}

pub type Obj<S> = <<S as OplaxStructure>::C as Carrier>::Obj;
pub type Map<S> = <<S as OplaxStructure>::C as Carrier>::Map;

/// `μ_n` on objects and maps, and `α_{n,l,r}` with `n = xs.len()`, for
/// every arity up to [`OplaxStructure::max_arity`].
pub trait OplaxStructure {
    type C: Carrier;
    fn carrier(&self) -> &Self::C;
    fn max_arity(&self) -> usize;
    fn mu(&self, xs: &[Obj<Self>]) -> Result<Obj<Self>, OplaxError>;
    fn mu_map(&self, xs: &[Obj<Self>], ys: &[Obj<Self>], fs: &[Map<Self>]) -> Result<Map<Self>, OplaxError>;
    /// `μ_n(X) -> μ_{n-r+1}(X_1, …, μ_r(X_{l+1}, …, X_{l+r}), …, X_n)`.
    fn alpha(&self, l: usize, r: usize, xs: &[Obj<Self>]) -> Result<Map<Self>, OplaxError>;
}

pub fn unit<S: OplaxStructure + ?Sized>(s: &S) -> Result<Obj<S>, OplaxError> {
    s.mu(&[])
}

/// `(X_1, …, μ_r(X_{l+1}, …, X_{l+r}), …, X_n)`.
pub fn grouped<S: OplaxStructure + ?Sized>(s: &S, xs: &[Obj<S>], l: usize, r: usize) -> Result<Vec<Obj<S>>, OplaxError> {
    let mut out = xs[..l].to_vec();
    out.push(s.mu(&xs[l..l + r])?);
    out.extend_from_slice(&xs[l + r..]);
    Ok(out)
}

/// `μ(id, …, f at position i, …, id)`.
pub fn mu_at<S: OplaxStructure + ?Sized>(
    s: &S,
    xs: &[Obj<S>],
    i: usize,
    y: &Obj<S>,
    f: &Map<S>,
) -> Result<Map<S>, OplaxError> {
    let c = s.carrier();
    let mut ys = xs.to_vec();
    ys[i] = y.clone();
    let fs: Vec<Map<S>> = xs.iter().enumerate().map(|(j, x)| if j == i { f.clone() } else { c.identity(x) }).collect();
    s.mu_map(xs, &ys, &fs)
}

#[derive(Clone, Debug, Serialize, PartialEq, Eq)]
pub struct OplaxFailure {
    /// `"a"` for the identity condition, `"b1"` for disjoint brackets and
    /// `"b2"` for nested ones.
    pub condition: &'static str,
    pub tuple: usize,
    pub n: usize,
    pub l: usize,
    pub r: usize,
    pub k: usize,
    pub s: usize,
    pub detail: String,
}

#[derive(Clone, Debug, Default, Serialize)]
pub struct OplaxReport {
    pub checked: usize,
    pub failures: Vec<OplaxFailure>,
}

impl OplaxReport {
    pub fn is_ok(&self) -> bool {
        self.failures.is_empty()
    }
}

/// Instances `(l, r, k, s)` of the two squares for `n` letters whose
/// products all have arity at most `max`.
fn instances(n: usize, max: usize) -> Vec<(&'static str, usize, usize, usize, usize)> {
    let mut out = Vec::new();
    let fits = |arities: &[usize]| arities.iter().all(|&a| a <= max);
    for l in 0..=n {
        for r in 0..=n - l {
            // disjoint, r-block first
            for k in l + r..=n {
                for s in 0..=n - k {
                    if fits(&[n, n + 1 - r, n + 1 - s, n + 2 - r - s, r, s]) {
                        out.push(("b1", l, r, k, s));
                    }
                }
            }
            // the s-block inside the r-block
            for k in l..=l + r {
                for s in 0..=l + r - k {
                    if fits(&[n, n + 1 - r, n + 1 - s, r, s, r + 1 - s]) {
                        out.push(("b2", l, r, k, s));
                    }
                }
            }
        }
    }
    out
}

/// Evaluate condition (a) and both squares of condition (b) on every tuple,
/// for every instance whose products stay within arity `n_max`.
pub fn check_normal_oplax<S: OplaxStructure + ?Sized>(s: &S, n_max: usize, tuples: &[Vec<Obj<S>>]) -> OplaxReport {
    let c = s.carrier();
    let max = n_max.min(s.max_arity());
    let mut rep = OplaxReport::default();
    for (ti, xs) in tuples.iter().enumerate() {
        let n = xs.len();
        if n > max {
            continue;
        }
        let mut fail = |cond, l, r, k, s, detail: String| {
            rep.failures.push(OplaxFailure { condition: cond, tuple: ti, n, l, r, k, s, detail });
        };
        let Ok(top) = s.mu(xs) else {
            fail("a", 0, 0, 0, 0, "μ_n undefined".into());
            continue;
        };
        let id = c.identity(&top);
        for (l, r) in (0..n).map(|l| (l, 1)).chain((n > 0).then_some((0, n))) {
            rep.checked += 1;
            match s.alpha(l, r, xs) {
                Ok(a) if a == id => {}
                Ok(a) => fail("a", l, r, 0, 0, c.differs(&a, &id).unwrap_or_default()),
                Err(e) => fail("a", l, r, 0, 0, e.to_string()),
            }
        }
        for (cond, l, r, k, sz) in instances(n, max) {
            rep.checked += 1;
            let res = if cond == "b1" { square_disjoint(s, xs, l, r, k, sz) } else { square_nested(s, xs, l, r, k, sz) };
            match res {
                Ok((p, q)) if p == q => {}
                Ok((p, q)) => fail(cond, l, r, k, sz, c.differs(&p, &q).unwrap_or_default()),
                Err(e) => fail(cond, l, r, k, sz, e.to_string()),
            }
        }
    }
    rep
}

type Pair<S> = (Map<S>, Map<S>);

fn square_disjoint<S: OplaxStructure + ?Sized>(
    s: &S,
    xs: &[Obj<S>],
    l: usize,
    r: usize,
    k: usize,
    sz: usize,
) -> Result<Pair<S>, OplaxError> {
    let c = s.carrier();
    let xr = grouped(s, xs, l, r)?;
    let xk = grouped(s, xs, k, sz)?;
    let p = c.then(&s.alpha(l, r, xs)?, &s.alpha(k + 1 - r, sz, &xr)?);
    let q = c.then(&s.alpha(k, sz, xs)?, &s.alpha(l, r, &xk)?);
    Ok((p, q))
}

fn square_nested<S: OplaxStructure + ?Sized>(
    s: &S,
    xs: &[Obj<S>],
    l: usize,
    r: usize,
    k: usize,
    sz: usize,
) -> Result<Pair<S>, OplaxError> {
    let c = s.carrier();
    let xr = grouped(s, xs, l, r)?;
    let inner = &xs[l..l + r];
    let inner_alpha = s.alpha(k - l, sz, inner)?;
    let target = s.mu(&grouped(s, inner, k - l, sz)?)?;
    let p = c.then(&s.alpha(l, r, xs)?, &mu_at(s, &xr, l, &target, &inner_alpha)?);
    let xk = grouped(s, xs, k, sz)?;
    let q = c.then(&s.alpha(k, sz, xs)?, &s.alpha(l, r + 1 - sz, &xk)?);
    Ok((p, q))
}

/// Every tuple of length `n` drawn from `palette`, last entry fastest.
pub fn tuples_from<T: Clone>(palette: &[T], n: usize) -> Vec<Vec<T>> {
    let sizes = vec![palette.len(); n];
    let total = palette.len().pow(n as u32);
    (0..total).map(|i| crate::finset::unrank(i, &sizes).into_iter().map(|j| palette[j].clone()).collect()).collect()
}

/// The three monoid diagrams for `(M, m0 : I -> M, m2 : μ2(M, M) -> M)`
/// evaluated as equalities of maps.
pub fn ching_monoid_check<S: OplaxStructure + ?Sized>(
    s: &S,
    m: &Obj<S>,
    m0: &Map<S>,
    m2: &Map<S>,
) -> Result<ChingReport, OplaxError> {
    let c = s.carrier();
    let mut rep = ChingReport::default();
    let i = unit(s)?;
    let mm = s.mu(&[m.clone(), m.clone()])?;
    let three = [m.clone(), m.clone(), m.clone()];
    let id = c.identity(m);
    // a non-natural m2 has no image under μ2; that is a failure of the
    // diagram it appears in, not an error
    let mut record = |name: &str, lhs: Result<Map<S>, OplaxError>, rhs: Result<Map<S>, OplaxError>| {
        let bad = match (lhs, rhs) {
            (Ok(p), Ok(q)) => c.differs(&p, &q),
            (Err(e), _) | (_, Err(e)) => Some(e.to_string()),
        };
        rep.record(name, bad.into_iter().collect());
    };
    let left = (|| Ok(c.then(&c.then(&s.alpha(0, 2, &three)?, &mu_at(s, &[mm.clone(), m.clone()], 0, m, m2)?), m2)))();
    let right = (|| Ok(c.then(&c.then(&s.alpha(1, 2, &three)?, &mu_at(s, &[m.clone(), mm.clone()], 1, m, m2)?), m2)))();
    record(DIAGRAM_ASSOC, left, right);
    let lu = (|| Ok(c.then(&c.then(&s.alpha(0, 0, std::slice::from_ref(m))?, &mu_at(s, &[i.clone(), m.clone()], 0, m, m0)?), m2)))();
    record(DIAGRAM_LEFT_UNIT, lu, Ok(id.clone()));
    let ru = (|| Ok(c.then(&c.then(&s.alpha(1, 0, std::slice::from_ref(m))?, &mu_at(s, &[m.clone(), i.clone()], 1, m, m0)?), m2)))();
    record(DIAGRAM_RIGHT_UNIT, ru, Ok(id));
    Ok(rep)
}

#[cfg(test)]
mod tests;
