mod common;

use common::*;
use proptest::prelude::*;
use setcons::algebra::BooleanAlgebra;
use setcons::{Interval, IntervalSet};

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn operations_agree_with_pointwise_logic(seed in any::<u64>()) {
        let mut rng = rng(seed);
        let (universe, raw_u) = random_universe(&mut rng);
        let (ra, rb) = (random_raw_set(&mut rng, 4), random_raw_set(&mut rng, 4));
        let a = ra.to_set().intersect(universe.carrier());
        let b = rb.to_set().intersect(universe.carrier());
        for p in probe_points(&mut rng, &[&ra, &rb, &raw_u]) {
            let u = raw_u.contains(&p);
            let (ia, ib) = (u && ra.contains(&p), u && rb.contains(&p));
            prop_assert_eq!(a.contains(&p), ia);
            prop_assert_eq!(a.union(&b).contains(&p), ia || ib);
            prop_assert_eq!(a.intersect(&b).contains(&p), ia && ib);
            prop_assert_eq!(universe.complement(&a).contains(&p), u && !ia);
            prop_assert_eq!(a.difference(&b).contains(&p), ia && !ib);
            prop_assert_eq!(a.sym_diff(&b).contains(&p), ia != ib);
        }
    }

    #[test]
    fn normal_form_is_canonical(seed in any::<u64>()) {
        let mut rng = rng(seed);
        let raw = random_raw_set(&mut rng, 5);
        let set = raw.to_set();
        let pieces: Vec<Interval> = set.intervals().collect();
        // sorted, disjoint and not touching, so no two pieces could merge
        for w in pieces.windows(2) {
            let merged = IntervalSet::normalize(w.iter().cloned());
            prop_assert_eq!(merged.interval_count(), 2);
        }
        prop_assert_eq!(IntervalSet::normalize(pieces.iter().cloned()), set.clone());
        let reversed: Vec<_> = raw.0.iter().rev().cloned().collect();
        prop_assert_eq!(RawSet(reversed).to_set(), set.clone());
        let text = set.to_string();
        prop_assert_eq!(text.parse::<IntervalSet>().unwrap(), set);
    }

    #[test]
    fn de_morgan_and_involution(seed in any::<u64>()) {
        let mut rng = rng(seed);
        let (u, _) = random_universe(&mut rng);
        let (a, b) = (random_set(&mut rng, &u), random_set(&mut rng, &u));
        prop_assert_eq!(u.complement(&a.union(&b)), u.complement(&a).intersect(&u.complement(&b)));
        prop_assert_eq!(u.complement(&a.intersect(&b)), u.complement(&a).union(&u.complement(&b)));
        prop_assert_eq!(u.complement(&u.complement(&a)), a.clone());
        prop_assert_eq!(BooleanAlgebra::sym_diff(&u, &a, &b), a.sym_diff(&b));
        prop_assert_eq!(BooleanAlgebra::difference(&u, &a, &b), a.intersect(&u.complement(&b)));
        prop_assert!(a.intersect(&b).is_subset(&a));
        prop_assert!(a.is_subset(&a.union(&b)));
    }

    #[test]
    fn measure_is_additive(seed in any::<u64>()) {
        let mut rng = rng(seed);
        let (u, _) = random_universe(&mut rng);
        let (a, b) = (random_set(&mut rng, &u), random_set(&mut rng, &u));
        let window = Interval::closed(-5, 25).unwrap();
        let m = |s: &IntervalSet| s.measure(&window).unwrap();
        prop_assert_eq!(m(&a.union(&b)) + m(&a.intersect(&b)), m(&a) + m(&b));
        prop_assert_eq!(m(&a.sym_diff(&b)), m(&a.difference(&b)) + m(&b.difference(&a)));
    }
}

#[test]
fn half_open_gaps_survive_operations() {
    let s = |t: &str| t.parse::<IntervalSet>().unwrap();
    assert_eq!(s("[0,2]").difference(&s("[1,1]")).to_string(), "[0,1) | (1,2]");
    assert_eq!(s("[0,1)").union(&s("[1,2]")).to_string(), "[0,2]");
    assert_eq!(s("[0,1)").union(&s("(1,2]")).to_string(), "[0,1) | (1,2]");
    assert_eq!(s("[0,1]").intersect(&s("[1,2]")).to_string(), "[1,1]");
    assert!(s("[0,1)").intersect(&s("[1,2]")).is_empty());
}
