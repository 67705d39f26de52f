//! Constructions chained across modules.

use lamop_core::envelopes::{check_functor, envelope, functor_from_rmodule, rmodule_from_functor, Variant};
use lamop_core::kelly::kelly_exact;
use lamop_core::operads::{b_construction, ching_check_operad, monoid_from_operad, unit_map, OperadData};
use lamop_core::oplax::{self, KellyLower};
use lamop_core::rmodules::{check_rmodule, lift_to_lambda, right_module_on_kelly, RModData};
use lamop_core::sequences::TruncSeq;

#[test]
fn products_survive_json() {
    let c = TruncSeq::comm(3);
    let a = TruncSeq::ass(3);
    for s in [kelly_exact(&c, &a, 3).unwrap().seq, lamop_core::day::box2_explicit(&a, &c).seq] {
        assert!(s.validate().is_ok());
        assert_eq!(TruncSeq::from_json(&s.to_json()).unwrap(), s);
    }
}

#[test]
fn kelly_module_through_the_envelope() {
    // D ⊙ C is a right C-module; read it as a functor on C̄ and back
    let c = OperadData::comm(3);
    let (_, m) = right_module_on_kelly(&TruncSeq::ass(3), &RModData::regular(&c)).unwrap();
    assert!(check_rmodule(&m).is_ok());
    let env = envelope(&c, Variant::Bar, 3).unwrap();
    let f = functor_from_rmodule(&m, &env);
    assert!(check_functor(&f, &env).is_empty());
    assert_eq!(rmodule_from_functor(&f, &env, m.seq.base()), m);
    assert_eq!(lift_to_lambda(&m.forget()).unwrap(), m);
}

#[test]
fn b_of_comm_is_a_monoid_for_the_oplax_structure() {
    let b = b_construction(&OperadData::comm(3)).unwrap().op;
    assert!(ching_check_operad(&b).is_ok());
    let k = KellyLower::new(3);
    let m = monoid_from_operad(&b).unwrap();
    let rep = oplax::ching_monoid_check(&k, &k.obj(&m.seq), &unit_map(&m.seq, b.unit), &m.m2).unwrap();
    assert!(rep.is_ok(), "{:?}", rep.first_failure());
}

#[test]
fn wn_exports() {
    let w = oplax::enumerate_wn(4).unwrap();
    let dot = w.to_dot();
    assert_eq!(dot.matches("->").count(), w.covers.len());
    let j = w.to_json();
    assert_eq!(j["elements"].as_array().unwrap().len(), 10);
    assert!(oplax::enumerate_wn(2).is_err());
}
