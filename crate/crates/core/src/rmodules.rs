//! Right and left modules over an operad, the lift of a right module over
//! `Σ` to one over `Λ`, and module structures on `⊙` and `⊠` products.
//!
//! A right `C`-module on `D` is a family `ψ : D(k) × C(n1) × … × C(nk) ->
//! D(n)` on consecutive layouts. Over `Λ` the maps along an injection
//! `λ : n' -> n` are `φ^λ = D(λ) ψ`.

use thiserror::Error;

use crate::day::{box2_explicit, BoxElem, BoxResult};
use crate::index_cats::{enumerate, Cat, IndexMor};
use crate::kelly::{kelly_exact, regroup, KellyResult};
use crate::operads::{
    check_assoc, check_input_relations, check_left_unit, check_output_naturality, check_right_unit, check_shape,
    underlying, Action, Cite, Law, LawReport, OperadData, ProfileMaps,
};
use crate::sequences::{Flavor, TruncSeq};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ModuleError {
    #[error("module axioms fail: {0}")]
    Invalid(String),
    #[error("lifting needs a module over Σ, got {0}")]
    Flavor(Flavor),
    #[error("the modules are over different operads")]
    Mismatch,
    #[error("the structure map does not descend: {0}")]
    Descent(String),
    #[error("{0}")]
    Kelly(#[from] crate::kelly::KellyError),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RModData {
    pub operad: OperadData,
    pub seq: TruncSeq,
    pub psi: ProfileMaps,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LModData {
    pub operad: OperadData,
    pub seq: TruncSeq,
    pub lambda: ProfileMaps,
}

/// The order preserving injection `n -> k` hitting the slots with `p_i = 1`.
fn slots(p: &[usize]) -> IndexMor {
    let table = p.iter().enumerate().filter(|(_, &v)| v == 1).map(|(i, _)| i + 1).collect();
    IndexMor::new(Cat::Lambda, p.iter().sum(), p.len(), table).expect("injection")
}

impl RModData {
    pub fn action(&self) -> Action<'_> {
        Action { name: "ψ", src: &self.seq, arg: &self.operad.seq, tgt: &self.seq, maps: &self.psi }
    }

    pub fn cap(&self) -> usize {
        self.seq.cap().min(self.operad.cap())
    }

    pub fn from_rule(operad: &OperadData, seq: TruncSeq, rule: impl FnMut(&[usize], usize, &[usize]) -> usize) -> Self {
        let cap = seq.cap().min(operad.cap());
        let psi = ProfileMaps::build(&seq, &operad.seq, cap, rule);
        RModData { operad: operad.clone(), seq, psi }
    }

    /// `C` acting on itself by `γ`.
    pub fn regular(c: &OperadData) -> Self {
        RModData { operad: c.clone(), seq: c.seq.clone(), psi: c.gamma.clone() }
    }

    /// A `Λ`-sequence as a right `I₁`-module: `ψ(d; ∗, …) = D(ι)d` with `ι`
    /// the injection onto the slots of arity one.
    pub fn from_lambda_seq(d: &TruncSeq) -> Self {
        let i1 = OperadData::i1(d.cap());
        RModData::from_rule(&i1, d.clone(), |p, x, _| d.apply(&slots(p), x))
    }

    pub fn forget(&self) -> RModData {
        RModData { operad: self.operad.clone(), seq: self.seq.forget_to_sigma(), psi: self.psi.clone() }
    }

    /// `φ^λ(d; parts) = D(λ) ψ(d; parts)` for `λ : n' -> n`.
    pub fn phi(&self, lam: &IndexMor, p: &[usize], d: usize, parts: &[usize]) -> usize {
        self.seq.apply(lam, self.psi.get(p, d, parts))
    }
}

impl LModData {
    pub fn action(&self) -> Action<'_> {
        Action { name: "λ", src: &self.operad.seq, arg: &self.seq, tgt: &self.seq, maps: &self.lambda }
    }

    pub fn regular(c: &OperadData) -> Self {
        LModData { operad: c.clone(), seq: c.seq.clone(), lambda: c.gamma.clone() }
    }

    pub fn from_rule(operad: &OperadData, seq: TruncSeq, rule: impl FnMut(&[usize], usize, &[usize]) -> usize) -> Self {
        let cap = seq.cap().min(operad.cap());
        let lambda = ProfileMaps::build(&operad.seq, &seq, cap, rule);
        LModData { operad: operad.clone(), seq, lambda }
    }
}

pub fn check_rmodule(m: &RModData) -> LawReport {
    let mut out = LawReport::default();
    underlying(&m.seq, &mut out);
    let p = m.action();
    check_shape(p, &mut out);
    if !out.is_ok() {
        return out;
    }
    check_right_unit(p, m.operad.unit, &mut out);
    check_input_relations(p, &mut out);
    check_output_naturality(p, &mut out);
    check_assoc(p, p, m.operad.action(), p, &mut out);
    if m.seq.flavor() == Flavor::Lambda {
        check_phi_conditions(m, &mut out);
    }
    out
}

pub fn check_lmodule(m: &LModData) -> LawReport {
    let mut out = LawReport::default();
    underlying(&m.seq, &mut out);
    let p = m.action();
    check_shape(p, &mut out);
    if !out.is_ok() {
        return out;
    }
    check_left_unit(p, m.operad.unit, &mut out);
    check_input_relations(p, &mut out);
    check_output_naturality(p, &mut out);
    check_assoc(m.operad.action(), p, p, p, &mut out);
    out
}

/// The two conditions on `φ^λ` over `Λ`, for every injection and profile.
pub fn check_phi_conditions(m: &RModData, out: &mut LawReport) {
    let cap = m.cap();
    let eta = m.operad.base();
    let homs: Vec<Vec<Vec<IndexMor>>> =
        (0..=cap).map(|a| (0..=cap).map(|b| enumerate(Cat::Lambda, a, b)).collect()).collect();
    for (p, t) in &m.psi.tables {
        let n: usize = p.iter().sum();
        if p.len() > cap || n > cap {
            continue;
        }
        let cite = || vec![Cite { table: "ψ", profile: p.clone() }];
        for i in 0..t.values.len() {
            let co = crate::finset::unrank(i, &t.radix);
            let (d, parts) = (co[0], &co[1..]);
            for mid in 0..=n {
                for l1 in &homs[mid][n] {
                    let base = m.phi(l1, p, d, parts);
                    for src in 0..=mid {
                        for l2 in &homs[src][mid] {
                            let comp = l1.compose(l2).expect("composable");
                            if m.phi(&comp, p, d, parts) != m.seq.apply(l2, base) {
                                out.push(Law::Composition, cite(), format!("{l1} after {l2} at {}", m.seq.label(p.len(), d)));
                            }
                        }
                    }
                }
            }
            for (slot, (&ni, &ci)) in p.iter().zip(parts).enumerate() {
                if ni != 0 || ci != eta {
                    continue;
                }
                let face = IndexMor::skip(p.len(), slot + 1);
                let mut q = p.clone();
                q.remove(slot);
                let mut rest = parts.to_vec();
                rest.remove(slot);
                let dd = m.seq.apply(&face, d);
                for src in 0..=n {
                    for lam in &homs[src][n] {
                        if m.phi(lam, p, d, parts) != m.phi(lam, &q, dd, &rest) {
                            let mut c = cite();
                            c.push(Cite { table: "ψ", profile: q.clone() });
                            out.push(Law::BaseInsertion, c, format!("slot {} along {lam}", slot + 1));
                        }
                    }
                }
            }
        }
    }
}

/// Turn a right module over `Σ` into one over `Λ`: the face `D(σ_i)` is
/// `ψ(d; u, …, η, …, u)` with `η` in slot `i`, and a general injection acts
/// through its factorisation into faces and a permutation. The `ψ` tables
/// are kept.
pub fn lift_to_lambda(m: &RModData) -> Result<RModData, ModuleError> {
    if m.seq.flavor() != Flavor::Sigma {
        return Err(ModuleError::Flavor(m.seq.flavor()));
    }
    let rep = check_rmodule(m);
    if !rep.is_ok() {
        return Err(ModuleError::Invalid(rep.summary()));
    }
    let c = &m.operad;
    let (u, eta) = (c.unit, c.base());
    let face = |n: usize, i: usize, d: usize| {
        let mut p = vec![1; n];
        p[i - 1] = 0;
        let mut parts = vec![u; n];
        parts[i - 1] = eta;
        m.psi.get(&p, d, &parts)
    };
    let cap = m.cap();
    let sigma = &m.seq;
    let lifted = TruncSeq::from_fn(Flavor::Lambda, cap, sigma.levels()[..=cap].to_vec(), sigma.base(), |lam, d| {
        let n = lam.dst();
        let mut image: Vec<usize> = lam.table().to_vec();
        image.sort_unstable();
        let mut cur = d;
        let mut level = n;
        for missing in (1..=n).rev().filter(|v| image.binary_search(v).is_err()) {
            cur = face(level, missing, cur);
            level -= 1;
        }
        let pi: Vec<usize> = lam.table().iter().map(|v| image.binary_search(v).expect("in image") + 1).collect();
        let pi = IndexMor::new(Cat::Sigma, pi.len(), pi.len(), pi).expect("permutation");
        sigma.apply(&pi, cur)
    });
    Ok(RModData { operad: c.clone(), seq: lifted, psi: m.psi.clone() })
}

// ----- module structures on products -----

/// `D ⊙ E` for a right module `E`: `(d, y) · z = (d, (y_i · z_i))`.
pub fn right_module_on_kelly(d: &TruncSeq, e: &RModData) -> Result<(KellyResult, RModData), ModuleError> {
    let cap = e.cap().min(d.cap());
    let prod = kelly_exact(d, &e.seq, cap)?;
    let rho = e.action();
    let step = |x: usize, k: usize, y: &BoxElem, z: &BoxElem| -> Option<usize> {
        let (blocks, subs) = regroup(y, z);
        let parts = subs.iter().zip(&y.parts).map(|(s, &b)| rho.apply(b, s)).collect();
        prod.class_of(z.level(), k, x, &BoxElem { blocks, parts })
    };
    let mut failure = None;
    let psi = ProfileMaps::build(&prod.seq, &e.operad.seq, cap, |p, x, parts| {
        let z = BoxElem::consecutive(p, parts.to_vec());
        let (k, dx, y) = prod.levels[p.len()].rep(x);
        step(dx, k, y, &z).unwrap_or_else(|| {
            failure.get_or_insert(format!("block cap exceeded at profile {p:?}"));
            0
        })
    });
    if let Some(f) = failure {
        return Err(ModuleError::Descent(f));
    }
    // the value must not depend on the representative
    for (p, t) in &psi.tables {
        let lvl = &prod.levels[p.len()];
        for (i, &v) in t.values.iter().enumerate() {
            let co = crate::finset::unrank(i, &t.radix);
            let z = BoxElem::consecutive(p, co[1..].to_vec());
            for r in (0..lvl.raw_count()).filter(|&r| lvl.quotient.class_of[r] == co[0]) {
                let (k, dx, yi) = lvl.decode(r);
                if step(dx, k, &lvl.boxes[k].elems[yi], &z) != Some(v) {
                    return Err(ModuleError::Descent(format!("profile {p:?}")));
                }
            }
        }
    }
    let seq = prod.seq.clone();
    Ok((prod, RModData { operad: e.operad.clone(), seq, psi }))
}

/// `D ⊙ E` for a left module `D`: `c · ((d_i, y_i)) = (c · (d_i), y_1 … y_k)`.
pub fn left_module_on_kelly(d: &LModData, e: &TruncSeq) -> Result<(KellyResult, LModData), ModuleError> {
    let cap = d.seq.cap().min(e.cap()).min(d.operad.cap());
    let prod = kelly_exact(&d.seq, e, cap)?;
    let lam = d.action();
    let mut failure = None;
    let maps = ProfileMaps::build(&d.operad.seq, &prod.seq, cap, |p, c, parts| {
        let mut ks = Vec::new();
        let mut ds = Vec::new();
        let mut blocks = Vec::new();
        let mut yparts = Vec::new();
        for (&pi, &x) in p.iter().zip(parts) {
            let (k, dx, y) = prod.levels[pi].rep(x);
            let off = yparts.len();
            blocks.extend(y.blocks.iter().map(|&b| b + off));
            yparts.extend_from_slice(&y.parts);
            ks.push(k);
            ds.push(dx);
        }
        let total: usize = ks.iter().sum();
        if total > cap {
            failure.get_or_insert(format!("block cap exceeded at profile {p:?}"));
            return 0;
        }
        let inner = lam.apply(c, &BoxElem::consecutive(&ks, ds));
        prod.class_of(p.iter().sum(), total, inner, &BoxElem { blocks, parts: yparts }).unwrap_or(0)
    });
    if let Some(f) = failure {
        return Err(ModuleError::Descent(f));
    }
    let seq = prod.seq.clone();
    Ok((prod, LModData { operad: d.operad.clone(), seq, lambda: maps }))
}

/// `(D ⊠ E) ⊙ C ≅ (D ⊙ C) ⊠ (E ⊙ C) -> D ⊠ E`.
pub fn module_on_box(d: &RModData, e: &RModData) -> Result<(BoxResult, RModData), ModuleError> {
    if d.operad != e.operad {
        return Err(ModuleError::Mismatch);
    }
    let bx = box2_explicit(&d.seq, &e.seq);
    let cap = bx.seq.cap().min(d.operad.cap());
    let (rd, re) = (d.action(), e.action());
    let psi = ProfileMaps::build(&bx.seq, &d.operad.seq, cap, |p, x, parts| {
        let nf = bx.nf(p.len(), x);
        let mut blocks = Vec::new();
        let (mut pd, mut cd, mut pe, mut ce) = (Vec::new(), Vec::new(), Vec::new(), Vec::new());
        for (i, (&ni, &ci)) in p.iter().zip(parts).enumerate() {
            let side = nf.blocks[i];
            blocks.extend(std::iter::repeat_n(side, ni));
            if side == 0 {
                pd.push(ni);
                cd.push(ci);
            } else {
                pe.push(ni);
                ce.push(ci);
            }
        }
        let a = rd.apply(nf.parts[0], &BoxElem::consecutive(&pd, cd));
        let b = re.apply(nf.parts[1], &BoxElem::consecutive(&pe, ce));
        bx.class_of_nf(&BoxElem { blocks, parts: vec![a, b] }).expect("normal form")
    });
    let seq = bx.seq.clone();
    Ok((bx, RModData { operad: d.operad.clone(), seq, psi }))
}

/// `C ⊙ (D ⊠ E) -> (C ⊙ D) ⊠ (C ⊙ E) -> D ⊠ E`, using the diagonal of `C`.
pub fn left_module_on_box(d: &LModData, e: &LModData) -> Result<(BoxResult, LModData), ModuleError> {
    if d.operad != e.operad {
        return Err(ModuleError::Mismatch);
    }
    let bx = box2_explicit(&d.seq, &e.seq);
    let cap = bx.seq.cap().min(d.operad.cap());
    let (ld, le) = (d.action(), e.action());
    let maps = ProfileMaps::build(&d.operad.seq, &bx.seq, cap, |p, c, parts| {
        let mut blocks = Vec::new();
        let (mut sd, mut xd, mut se, mut xe) = (Vec::new(), Vec::new(), Vec::new(), Vec::new());
        for (&ni, &x) in p.iter().zip(parts) {
            let nf = bx.nf(ni, x);
            blocks.extend_from_slice(&nf.blocks);
            sd.push(nf.block(0).len());
            xd.push(nf.parts[0]);
            se.push(nf.block(1).len());
            xe.push(nf.parts[1]);
        }
        // the D-points of block i come before those of block i+1, so the
        // consecutive layouts of the two results are already in order
        let a = ld.apply(c, &BoxElem::consecutive(&sd, xd));
        let b = le.apply(c, &BoxElem::consecutive(&se, xe));
        bx.class_of_nf(&BoxElem { blocks, parts: vec![a, b] }).expect("normal form")
    });
    let seq = bx.seq.clone();
    Ok((bx, LModData { operad: d.operad.clone(), seq, lambda: maps }))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn regular_modules_pass() {
        let c = OperadData::comm(3);
        assert!(check_rmodule(&RModData::regular(&c)).is_ok());
        assert!(check_lmodule(&LModData::regular(&c)).is_ok());
        let a = OperadData::ass(3);
        let r = check_rmodule(&RModData::regular(&a));
        assert!(r.is_ok(), "{}", r.summary());
    }

    #[test]
    fn lambda_sequences_are_i1_modules() {
        for d in [TruncSeq::ass(3), TruncSeq::comm(3), TruncSeq::i1(3), TruncSeq::i_m(2, 3)] {
            let m = RModData::from_lambda_seq(&d);
            assert!(check_rmodule(&m).is_ok(), "{}", check_rmodule(&m).summary());
            let back = lift_to_lambda(&m.forget()).unwrap();
            assert_eq!(back, m);
            assert_eq!(back.forget(), m.forget());
        }
    }

    #[test]
    fn mutated_psi_cites_profile() {
        let m = RModData::from_lambda_seq(&TruncSeq::ass(3));
        let mut bad = m.clone();
        let t = bad.psi.tables.get_mut(&vec![1, 1, 0]).unwrap();
        t.values[0] = 1 - t.values[0];
        let r = check_rmodule(&bad);
        assert!(!r.is_ok());
        assert!(r.all_cite("ψ", &[1, 1, 0]), "{}", r.summary());
    }

    #[test]
    fn lift_of_ass_deletes_letters() {
        let m = RModData::from_lambda_seq(&TruncSeq::ass(3)).forget();
        let l = lift_to_lambda(&m).unwrap();
        assert_eq!(l.seq, TruncSeq::ass(3));
    }

    #[test]
    fn lift_over_ass_round_trips() {
        let a = OperadData::ass(3);
        let m = RModData::regular(&a);
        assert_eq!(lift_to_lambda(&m.forget()).unwrap(), m);
    }

    #[test]
    fn kelly_modules() {
        let c = OperadData::comm(3);
        let (prod, m) = right_module_on_kelly(&c.seq, &RModData::regular(&c)).unwrap();
        assert_eq!(prod.seq.sizes(), vec![1, 1, 2, 5]);
        assert!(check_rmodule(&m).is_ok(), "{}", check_rmodule(&m).summary());
        let (_, l) = left_module_on_kelly(&LModData::regular(&c), &c.seq).unwrap();
        assert!(check_lmodule(&l).is_ok(), "{}", check_lmodule(&l).summary());
    }

    #[test]
    fn box_modules() {
        let c = OperadData::comm(3);
        let (_, m) = module_on_box(&RModData::regular(&c), &RModData::regular(&c)).unwrap();
        assert!(check_rmodule(&m).is_ok(), "{}", check_rmodule(&m).summary());
        let (_, l) = left_module_on_box(&LModData::regular(&c), &LModData::regular(&c)).unwrap();
        assert!(check_lmodule(&l).is_ok(), "{}", check_lmodule(&l).summary());
    }

    #[test]
    fn box_over_i1_recovers_day_action() {
        let a = TruncSeq::ass(3);
        let (bx, m) =
            module_on_box(&RModData::from_lambda_seq(&TruncSeq::i1(3)), &RModData::from_lambda_seq(&a)).unwrap();
        let lifted = lift_to_lambda(&m.forget()).unwrap();
        assert_eq!(lifted.seq.action(), bx.seq.action());
    }
}
