use std::rc::Rc;

use super::*;
use crate::operads::{monoid_from_operad, mutate_m2, unit_map, OperadData};
use crate::sequences::TruncSeq;

fn palette(k: &KellyLower) -> Vec<Rc<TruncSeq>> {
    vec![k.obj(&TruncSeq::i1(3)), k.obj(&TruncSeq::comm(3)), k.obj(&TruncSeq::ass(2))]
}

fn battery<T: Clone>(p: &[T], upto: usize) -> Vec<Vec<T>> {
    (0..=upto).flat_map(|n| tuples_from(p, n)).collect()
}

#[test]
fn small_diagrams() {
    let k = KellyLower::new(3);
    let i = k.obj(&TruncSeq::i1(3));
    let d = build_diagram(&k, &[i.clone(), i.clone(), i.clone()]).unwrap();
    assert_eq!(d.nodes.len(), 2);
    assert!(d.edges.is_empty());
    assert!(d.sizes(&SeqCarrier).iter().all(|s| *s == i.sizes()));

    let c = k.obj(&TruncSeq::comm(3));
    let d = build_diagram(&k, &[c.clone(), c.clone(), c.clone(), c.clone()]).unwrap();
    assert_eq!(d.nodes.len(), 10);
    assert!(d.edges_bijective(&SeqCarrier));
    assert!(d.non_commuting(&SeqCarrier).is_empty());
    assert!(d.to_dot(&SeqCarrier).contains("((12)(34))"));

    let unbased = k.obj(&TruncSeq::comm(3).with_base(None));
    assert!(build_diagram(&k, &[c.clone(), c.clone(), c, unbased]).is_err());
}

#[test]
fn completion_over_kelly() {
    let k = KellyLower::new(3);
    let p = palette(&k);
    let s = complete_mu(k, 4, &p).unwrap();
    let (i, c) = (p[0].clone(), p[1].clone());
    let cs = vec![c.clone(); 4];
    let (poset, legs) = s.diagram(&cs).unwrap();
    assert!(legs.iter().all(SeqMorphism::is_iso));
    let node = poset.index_of(&ParenTree::single(4, 0, 2)).unwrap();
    assert_eq!(s.alpha(0, 2, &cs).unwrap(), legs[node]);
    let mu4 = s.mu(&cs).unwrap();
    let left = s.mu(&[s.mu(&[s.mu(&[c.clone(), c.clone()]).unwrap(), c.clone()]).unwrap(), c.clone()]).unwrap();
    assert_eq!(mu4.sizes(), left.sizes());
    assert_eq!(s.mu(&vec![i.clone(); 4]).unwrap().sizes(), i.sizes());

    let tuples = battery(&p, 4);
    let rep = check_normal_oplax(&s, 4, &tuples);
    assert!(rep.is_ok(), "{:?}", rep.failures.first());
    assert!(rep.checked > 1000);
}

use crate::sequences::SeqMorphism;

#[test]
fn twisted_alpha_is_caught() {
    let k = KellyLower::new(3);
    let p = palette(&k);
    let tuples = battery(&p, 3);
    assert!(check_normal_oplax(&k, 3, &tuples).is_ok());
    let t = Twisted { inner: KellyLower::new(3), n: 3, l: 1, r: 2 };
    let rep = check_normal_oplax(&t, 3, &tuples);
    assert!(!rep.is_ok());
    assert!(rep.failures.iter().all(|f| f.n >= 2));
    // arity two sees nothing of α3,1,2
    assert!(check_normal_oplax(&t, 2, &tuples).is_ok());
    assert!(matches!(complete_mu(t, 4, &p), Err(OplaxError::Lower(_))));
}

fn pointed_palette(cap: usize) -> Vec<Rc<PointedSeq>> {
    vec![Rc::new(PointedSeq::plus(&TruncSeq::i1(cap))), Rc::new(PointedSeq::plus(&TruncSeq::comm(cap)))]
}

#[test]
fn reduced_and_truncated() {
    let p = pointed_palette(2);
    let s = complete_mu(SmashLower::new(2), 4, &p).unwrap();
    let tuples = battery(&p, 4);
    assert!(check_normal_oplax(&s, 4, &tuples).is_ok());
    let mu4 = s.mu(&vec![p[1].clone(); 4]).unwrap();

    let red = Reduced::new(s).unwrap();
    let rep = check_normal_oplax(&red, 4, &tuples);
    assert!(rep.is_ok(), "{:?}", rep.failures.first());
    let a = red.alpha(0, 0, &[p[1].clone()]).unwrap();
    assert!(a.components.iter().all(|c| c.table().iter().all(|&v| v == 0)));

    let t3 = Truncated::new(red, 3).unwrap();
    assert!(check_normal_oplax(&t3, 4, &tuples).is_ok());
    assert_eq!(t3.mu(&vec![p[1].clone(); 4]).unwrap().seq.sizes(), vec![1, 1, 1]);
    let t4 = Truncated::new(Reduced::new(complete_mu(SmashLower::new(2), 4, &p).unwrap()).unwrap(), 4).unwrap();
    assert!(check_normal_oplax(&t4, 4, &tuples).is_ok());
    assert_eq!(t4.mu(&vec![p[1].clone(); 4]).unwrap().seq.sizes(), mu4.seq.sizes());
    assert_ne!(mu4.seq.sizes(), vec![1, 1, 1]);

    assert!(matches!(Reduced::new(KellyLower::new(2)), Err(OplaxError::NoZero)));
}

#[test]
fn monoids_through_the_structure() {
    for c in [OperadData::comm(3), OperadData::ass(3)] {
        let k = KellyLower::new(3);
        let m = monoid_from_operad(&c).unwrap();
        let obj = k.obj(&m.seq);
        let m0 = unit_map(&m.seq, c.unit);
        let rep = ching_monoid_check(&k, &obj, &m0, &m.m2).unwrap();
        assert!(rep.is_ok(), "{:?}", rep.first_failure());
    }
    let c = OperadData::ass(3);
    let m = monoid_from_operad(&c).unwrap();
    let bad = mutate_m2(&m, 2, 0, 1 - m.m2.components[2].apply(0));
    let k = KellyLower::new(3);
    let rep = ching_monoid_check(&k, &k.obj(&m.seq), &unit_map(&m.seq, c.unit), &bad.m2).unwrap_or_else(|e| panic!("{e}"));
    assert_eq!(rep.first_failure().unwrap().name, crate::operads::DIAGRAM_ASSOC);
}
