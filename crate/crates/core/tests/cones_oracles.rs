mod common;

use std::sync::Arc;

use cevian_core::cones::{parse_region, ratioset_to_region, region_to_ratioset, AmbientCone, LinForm, Region};
use cevian_core::lterm::Presentation;
use cevian_core::ratcore::{int, rat, ratio, ExtRat, Interval, Rat, RatioSet};
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn plane() -> Arc<AmbientCone> {
    Arc::new(AmbientCone::trivial(2))
}

/// Rational probes of `[0, ∞]`: small fractions plus every endpoint and
/// its neighbours.
fn probes(extra: &[Rat]) -> Vec<ExtRat> {
    let mut out = vec![ExtRat::Inf];
    for n in 0..=40 {
        for d in [1, 2, 3, 7] {
            out.push(ExtRat::Fin(rat(n, d)));
        }
    }
    for e in extra {
        for delta in [rat(0, 1), rat(1, 1000), rat(-1, 1000)] {
            let q = e + delta;
            if q >= int(0) {
                out.push(ExtRat::Fin(q));
            }
        }
    }
    out
}

fn set(s: &str) -> RatioSet {
    s.parse().unwrap()
}

#[test]
fn normalize_merges_overlaps_by_membership() {
    let raw: Vec<Interval> = vec!["[0,1)".parse().unwrap(), "(1/2,2)".parse().unwrap()];
    let u = RatioSet::normalize(&raw).unwrap();
    assert_eq!(u, set("[0,2)"));
    for t in probes(&[rat(1, 2), int(1), int(2)]) {
        assert_eq!(u.contains(&t), raw.iter().any(|i| i.contains(&t)), "at {t}");
    }
}

#[test]
fn intersect_example_by_membership() {
    let (a, b) = (set("[0,1)"), set("(1/2,inf]"));
    let m = a.intersect(&b);
    assert_eq!(m, set("(1/2,1)"));
    for t in probes(&[rat(1, 2), int(1)]) {
        assert_eq!(m.contains(&t), a.contains(&t) && b.contains(&t));
    }
}

#[test]
fn top_cone_example_is_empty_by_elimination() {
    let top = Presentation::cube("123").unwrap();
    let r = parse_region("[x1 > 0, -2*x1 + x2 > 0]", top.ambient.clone()).unwrap();
    assert!(common::fm_empty(&r));
    assert!(r.is_empty().unwrap());
}

#[test]
fn cylinder_of_scaled_initial_set_matches_half_space_on_grid() {
    let cyl = ratioset_to_region(&set("[0,2)"), 1, 2, 2).unwrap();
    let half = Region::half_space(plane(), LinForm::from_ints(&[2, -1])).unwrap();
    for p in common::grid(2, 30) {
        assert_eq!(cyl.contains(&p), half.contains(&p), "at {p:?}");
    }
    assert!(common::fm_subset(&cyl, &half) && common::fm_subset(&half, &cyl));
}

#[test]
fn unit_ratio_chain_has_no_grid_witness() {
    let u = set("[0,1)");
    let c12 = ratioset_to_region(&u, 1, 2, 3).unwrap();
    let c23 = ratioset_to_region(&u, 2, 3, 3).unwrap();
    let c13 = ratioset_to_region(&u, 1, 3, 3).unwrap();
    let meet = c12.meet(&c23).unwrap();
    assert!(meet.is_subset(&c13).unwrap());
    assert!(common::grid_subset(&meet, &c13, &common::grid(3, 20)));
    assert!(common::fm_subset(&meet, &c13));
}

#[test]
fn half_space_of_lambda_one_reads_back_as_initial_set() {
    let r = Region::half_space(plane(), LinForm::from_ints(&[1, -1])).unwrap();
    let u = region_to_ratioset(&r).unwrap();
    assert_eq!(u, set("[0,1)"));
    for p in common::grid(2, 12) {
        let t = ratio(&p[0], &p[1]).unwrap();
        assert_eq!(r.contains(&p), u.contains(&t));
    }
}

fn arb_interval() -> impl Strategy<Value = Interval> {
    let ext = prop_oneof![
        4 => (0i64..12, 1i64..4).prop_map(|(n, d)| ExtRat::Fin(rat(n, d))),
        1 => Just(ExtRat::Inf),
    ];
    (ext.clone(), any::<bool>(), ext, any::<bool>()).prop_map(|(a, ac, b, bc)| {
        let (lo, hi) = if a <= b { (a, b) } else { (b, a) };
        Interval::new(lo, ac, hi, bc)
    })
}

fn arb_set() -> impl Strategy<Value = RatioSet> {
    prop::collection::vec(arb_interval(), 0..4).prop_map(|v| RatioSet::normalize(&v).unwrap())
}

proptest! {
    #[test]
    fn ratioset_operations_are_pointwise(u in arb_set(), v in arb_set()) {
        let ends: Vec<Rat> = u.endpoints().into_iter().chain(v.endpoints()).filter_map(|e| e.finite().cloned()).collect();
        let (j, m, c) = (u.union(&v), u.intersect(&v), u.complement());
        for t in probes(&ends) {
            prop_assert_eq!(j.contains(&t), u.contains(&t) || v.contains(&t));
            prop_assert_eq!(m.contains(&t), u.contains(&t) && v.contains(&t));
            prop_assert_eq!(c.contains(&t), !u.contains(&t));
        }
        prop_assert_eq!(RatioSet::normalize(u.intervals()).unwrap(), u.clone());
        prop_assert_eq!(u.union(&v).complement(), c.intersect(&v.complement()));
    }

    #[test]
    fn ratio_is_antitone_in_x_and_isotone_in_y(x in 1i64..20, y in 0i64..20, dx in 0i64..5, dy in 0i64..5) {
        let (x, y) = (int(x), int(y));
        let fin = |e: ExtRat| e.finite().cloned().unwrap();
        prop_assert!(fin(ratio(&(&x + int(dx)), &y).unwrap()) <= fin(ratio(&x, &y).unwrap()));
        prop_assert!(fin(ratio(&x, &y).unwrap()) <= fin(ratio(&x, &(&y + int(dy))).unwrap()));
    }

    #[test]
    fn cylinders_round_trip(u in arb_set()) {
        let r = ratioset_to_region(&u, 1, 2, 2).unwrap();
        prop_assert_eq!(region_to_ratioset(&r).unwrap(), u.clone());
    }

    #[test]
    fn region_subset_agrees_with_elimination(seed in any::<u64>(), dim in 2usize..=3) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let amb = Arc::new(AmbientCone::trivial(dim));
        let a = common::random_region(&mut rng, &amb);
        let b = common::random_region(&mut rng, &amb);
        let lib = a.is_subset(&b).unwrap();
        prop_assert_eq!(lib, common::fm_subset(&a, &b));
        if let Some(w) = a.subset_witness(&b).unwrap() {
            prop_assert!(a.contains(&w) && !b.contains(&w));
        }
    }

    #[test]
    fn lattice_laws(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let amb = Arc::new(AmbientCone::trivial(2));
        let x = common::random_region(&mut rng, &amb);
        let y = common::random_region(&mut rng, &amb);
        let z = common::random_region(&mut rng, &amb);
        let eq = |p: &Region, q: &Region| p.equals(q).unwrap();
        prop_assert!(eq(&x.meet(&y).unwrap(), &y.meet(&x).unwrap()));
        prop_assert!(eq(&x.join(&x.meet(&y).unwrap()).unwrap(), &x));
        prop_assert!(eq(&x.meet(&x.join(&y).unwrap()).unwrap(), &x));
        let lhs = x.meet(&y.join(&z).unwrap()).unwrap();
        let rhs = x.meet(&y).unwrap().join(&x.meet(&z).unwrap()).unwrap();
        prop_assert!(eq(&lhs, &rhs));
        let unit = Region::unit(amb.clone());
        prop_assert!(eq(&x.meet(&unit).unwrap(), &x));
        prop_assert!(eq(&x.join(&Region::zero(amb.clone())).unwrap(), &x));
        let c = x.complement_in_unit().unwrap();
        prop_assert!(c.meet(&x).unwrap().is_empty().unwrap());
        prop_assert!(eq(&c.join(&x).unwrap(), &unit));
        prop_assert!(!x.contains(&[int(0), int(0)]));
    }
}
