use lamop_core::day::box2_explicit;
use lamop_core::finset::{FinMap, UnionFind};
use lamop_core::index_cats::{enumerate, Cat};
use lamop_core::kelly::{canonical, kelly_exact, kelly_level, kelly_level_coend, Mode};
use lamop_core::operads::{check_operad, random_mutation, OperadData};
use lamop_core::sequences::TruncSeq;
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn named(i: usize, cap: usize) -> TruncSeq {
    match i % 4 {
        0 => TruncSeq::i1(cap),
        1 => TruncSeq::comm(cap),
        2 => TruncSeq::ass(cap.min(3)).extend_cap(cap),
        _ => TruncSeq::i_m(2, cap),
    }
}

// contravariance: D(g∘f) = D(f) ∘ D(g)
fn functorial(d: &TruncSeq, a: usize, b: usize, c: usize, fi: usize, gi: usize, x: usize) -> bool {
    let fs = enumerate(Cat::Lambda, a, b);
    let gs = enumerate(Cat::Lambda, b, c);
    if fs.is_empty() || gs.is_empty() || d.size(c) == 0 {
        return true;
    }
    let (f, g) = (&fs[fi % fs.len()], &gs[gi % gs.len()]);
    let x = x % d.size(c);
    let gf = g.compose(f).expect("composable");
    d.apply(&gf, x) == d.apply(f, d.apply(g, x))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn box_products_are_functors(i in 0usize..4, j in 0usize..4, a in 0usize..=3, b in 0usize..=3, c in 0usize..=3,
                                 fi in 0usize..100, gi in 0usize..100, x in 0usize..1000) {
        let p = box2_explicit(&named(i, 3), &named(j, 3)).seq;
        prop_assert!(functorial(&p, a.min(b), b.min(c), c, fi, gi, x));
    }

    #[test]
    fn kelly_products_are_functors(i in 0usize..4, j in 0usize..3, a in 0usize..=3, b in 0usize..=3, c in 0usize..=3,
                                   fi in 0usize..100, gi in 0usize..100, x in 0usize..1000) {
        let p = kelly_exact(&named(i, 3), &named(j, 3), 3).unwrap().seq;
        prop_assert!(functorial(&p, a.min(b), b.min(c), c, fi, gi, x));
    }

    #[test]
    fn union_find_is_the_generated_equivalence(n in 1usize..30, pairs in proptest::collection::vec((0usize..30, 0usize..30), 0..20)) {
        let pairs: Vec<(usize, usize)> = pairs.into_iter().map(|(a, b)| (a % n, b % n)).collect();
        let mut uf = UnionFind::new(n);
        for &(a, b) in &pairs {
            uf.union(a, b);
        }
        let q = uf.classes();
        // brute-force closure by repeated relaxation
        let mut label: Vec<usize> = (0..n).collect();
        loop {
            let mut changed = false;
            for &(a, b) in &pairs {
                let m = label[a].min(label[b]);
                if label[a] != m || label[b] != m {
                    label[a] = m;
                    label[b] = m;
                    changed = true;
                }
            }
            for i in 0..n {
                let l = label[label[i]];
                if l != label[i] {
                    label[i] = l;
                    changed = true;
                }
            }
            if !changed {
                break;
            }
        }
        prop_assert_eq!(canonical(&q.class_of), canonical(&label));
    }

    #[test]
    fn composition_of_finite_maps_is_associative(t1 in proptest::collection::vec(0usize..5, 4),
                                                 t2 in proptest::collection::vec(0usize..3, 5),
                                                 t3 in proptest::collection::vec(0usize..4, 3)) {
        let (f, g, h) = (FinMap::new(5, t1).unwrap(), FinMap::new(3, t2).unwrap(), FinMap::new(4, t3).unwrap());
        let left = f.then(&g).unwrap().then(&h).unwrap();
        let right = f.then(&g.then(&h).unwrap()).unwrap();
        prop_assert_eq!(left, right);
    }

    #[test]
    fn seeded_mutations_are_caught(seed in any::<u64>()) {
        let a = OperadData::ass(3);
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let (bad, m) = random_mutation(&a, &mut rng).unwrap();
        let r = check_operad(&bad);
        prop_assert!(!r.is_ok());
        prop_assert!(r.all_cite("γ", &m.profile), "{:?}", m);
    }
}

#[test]
fn generator_and_full_coends_agree_on_small_products() {
    for i in 0..4 {
        for j in 0..3 {
            let (d, e) = (named(i, 3), named(j, 3));
            for mode in [Mode::Sigma, Mode::Lambda] {
                for n in 0..=3 {
                    let g = kelly_level(&d, &e, n, 3, mode).unwrap();
                    assert_eq!(canonical(&g.quotient.class_of), kelly_level_coend(&d, &e, n, 3, mode).unwrap());
                }
            }
        }
    }
}
