mod common;

use std::collections::BTreeMap;

use common::*;
use proptest::prelude::*;
use rand::Rng;
use setcons::binary::{equilibria, is_contractive_binary, BinaryMap, ENUMERATION_CAP};
use setcons::convergence::{
    consensus_region, distance_bound_holds, equilibria_sbm, global_fixed_point, is_contractive_encoded,
    is_contractive_sbm, is_locally_attractive_sbm, verify_prop3,
};
use setcons::encoding::{build_partition, translate_map, Partition, PARTITION_CAP};
use setcons::expr::check_composition_bound;
use setcons::{BoolVector, IntervalSet, Sbm, Universe};

proptest! {
    #![proptest_config(ProptestConfig::with_cases(100))]

    #[test]
    fn shadow_and_encoded_routes_agree(seed in any::<u64>()) {
        let mut rng = rng(seed);
        let generators = rng.gen_range(1..=3);
        let (sbm, p) = random_encoded_system(&mut rng, generators);
        let shadow = is_contractive_sbm(&sbm);
        prop_assert_eq!(shadow.contractive, is_contractive_encoded(&sbm, &p).unwrap());
        prop_assert_eq!(shadow.contractive, shadow.cycle_evidence.is_none());
    }

    #[test]
    fn triangular_maps_forget_their_start(seed in any::<u64>()) {
        let mut rng = rng(seed);
        let (u, _) = random_universe(&mut rng);
        let n = rng.gen_range(1..=5);
        let sbm = random_triangular_sbm(&mut rng, &u, n, 2);
        let v = is_contractive_sbm(&sbm);
        prop_assert!(v.contractive);
        let q = v.q.unwrap();
        prop_assert!(q <= n);
        let limit = global_fixed_point(&sbm, &vec![IntervalSet::empty(); n]).unwrap();
        for _ in 0..3 {
            let x: Vec<IntervalSet> = (0..n).map(|_| random_set(&mut rng, &u)).collect();
            prop_assert_eq!(&sbm.iterate(&x, q).unwrap(), &limit);
        }
    }

    #[test]
    fn distance_bound_holds_for_the_incidence(seed in any::<u64>()) {
        let mut rng = rng(seed);
        let (u, _) = random_universe(&mut rng);
        let sbm = random_sbm(&mut rng, &u, 4, 3, 5);
        let n = sbm.arity();
        let x: Vec<IntervalSet> = (0..n).map(|_| random_set(&mut rng, &u)).collect();
        let y: Vec<IntervalSet> = (0..n).map(|_| random_set(&mut rng, &u)).collect();
        prop_assert!(verify_prop3(&sbm, &x, &y).unwrap());
        // any larger matrix works too
        let all = setcons::BoolMatrix::parse_rows(&vec!["1".repeat(n).as_str(); n]).unwrap();
        prop_assert!(distance_bound_holds(&sbm, &all, &x, &y).unwrap());
    }

    #[test]
    fn composition_incidence_is_bounded(seed in any::<u64>()) {
        let mut rng = rng(seed);
        let (u, _) = random_universe(&mut rng);
        let outer = random_sbm(&mut rng, &u, 4, 2, 4);
        let inner = random_sbm_like(&mut rng, &u, outer.arity(), outer.constants().clone(), 4);
        prop_assert!(check_composition_bound(&outer, &inner).unwrap());
        let x: Vec<IntervalSet> = (0..outer.arity()).map(|_| random_set(&mut rng, &u)).collect();
        let composed = outer.compose(&inner).unwrap();
        prop_assert_eq!(composed.eval(&x).unwrap(), outer.eval(&inner.eval(&x).unwrap()).unwrap());
    }

    #[test]
    fn single_cell_systems_are_binary_systems(seed in any::<u64>()) {
        let mut rng = rng(seed);
        let (u, _) = random_universe(&mut rng);
        let n = rng.gen_range(1..=4);
        // constants that are all or nothing keep the partition at one cell
        let constants: BTreeMap<String, IntervalSet> = [
            ("E".to_string(), IntervalSet::empty()),
            ("U".to_string(), u.carrier().clone()),
        ]
        .into();
        let sbm = random_sbm_like(&mut rng, &u, n, constants, 4);
        let p = build_partition(&[], &u, PARTITION_CAP).unwrap();
        prop_assert_eq!(p.kappa(), 1);
        let f = translate_map(&sbm, &p).unwrap();
        let fixed = equilibria(&f, ENUMERATION_CAP).unwrap();
        let summary = equilibria_sbm(&sbm, &p, ENUMERATION_CAP, 100).unwrap();
        prop_assert_eq!(summary.total, Some(fixed.len() as u128));
        for x in &fixed {
            let state = p.decode_state(x).unwrap();
            let verdict = is_locally_attractive_sbm(&sbm, &state, &p).unwrap();
            prop_assert_eq!(verdict.theorem, verdict.direct);
        }
        let semantic_contractive = is_contractive_binary(&f).contractive;
        if is_contractive_sbm(&sbm).contractive {
            prop_assert!(semantic_contractive);
            prop_assert_eq!(fixed.len(), 1);
        }
    }

    #[test]
    fn normal_form_reproduces_the_map(seed in any::<u64>()) {
        let mut rng = rng(seed);
        let (u, _) = random_universe(&mut rng);
        let n = rng.gen_range(1..=4);
        let constants: BTreeMap<String, IntervalSet> = [("U".to_string(), u.carrier().clone())].into();
        let sbm = random_sbm_like(&mut rng, &u, n, constants, 4);
        let x: Vec<IntervalSet> = (0..n).map(|_| random_set(&mut rng, &u)).collect();
        let fx = sbm.eval(&x).unwrap();
        for (i, want) in fx.iter().enumerate() {
            let nf = sbm.nf_coefficients(i, ENUMERATION_CAP).unwrap();
            for (mask, c) in independent_nf(&sbm, i).into_iter().enumerate() {
                prop_assert_eq!(nf.by_mask(mask), c);
            }
            let rebuilt = Sbm::new(u.clone(), vec![nf.to_expr(); n], BTreeMap::new()).unwrap();
            prop_assert_eq!(&rebuilt.eval(&x).unwrap()[0], want);
        }
    }

    #[test]
    fn linear_consensus_region_matches_cells(seed in any::<u64>()) {
        let mut rng = rng(seed);
        let u = Universe::new("[0,20]".parse().unwrap()).unwrap();
        let n = rng.gen_range(1..=3);
        let rows: Vec<Vec<IntervalSet>> = (0..n)
            .map(|_| (0..n).map(|_| RawSet(vec![random_raw_interval(&mut rng)]).to_set().intersect(u.carrier())).collect())
            .collect();
        let linear = setcons::LinearSbm::new(u.clone(), setcons::SetMatrix::new(rows.clone()).unwrap()).unwrap();
        let verdict = consensus_region(&linear);
        let sbm = linear.to_sbm();
        prop_assert_eq!(&setcons::LinearSbm::from_sbm(&sbm).unwrap(), &linear);
        let gens: Vec<IntervalSet> = rows.into_iter().flatten().collect();
        let p = build_partition(&gens, &u, PARTITION_CAP).unwrap();
        let mut region = IntervalSet::empty();
        for (h, cell) in p.cells().iter().enumerate() {
            let f = translate_map(&sbm, &p).unwrap().per_cell_map(h);
            if f.apply(&BoolVector::ones(n)) == BoolVector::ones(n) {
                region = region.union(&cell.region);
            }
        }
        prop_assert_eq!(verdict.region, region);
    }
}

/// Coefficients by the recursion `A_J = F(y_J) Δ (Δ_{K ⊊ J} A_K)`, with
/// `y_J` the indicator of `J` and every constant read as the universe.
fn independent_nf(sbm: &Sbm, i: usize) -> Vec<bool> {
    let n = sbm.arity();
    let u = Universe::new("[0,1]".parse().unwrap()).unwrap();
    let one = u.carrier().clone();
    let lifted = Sbm::new(
        u,
        sbm.components().to_vec(),
        sbm.constants().keys().map(|k| (k.clone(), one.clone())).collect(),
    )
    .unwrap();
    let mut coeff = vec![false; 1 << n];
    for mask in 0..1usize << n {
        let y: Vec<IntervalSet> =
            (0..n).map(|j| if mask >> j & 1 == 1 { one.clone() } else { IntervalSet::empty() }).collect();
        let value = !lifted.eval(&y).unwrap()[i].is_empty();
        let below = (0..mask).filter(|k| k & mask == *k).fold(false, |acc, k| acc ^ coeff[k]);
        coeff[mask] = value ^ below;
    }
    coeff
}

#[test]
fn six_agents_reach_the_same_point_from_many_starts() {
    let spec = setcons::dsl::parse(include_str!("../systems/six_agents.sbm")).unwrap();
    let sbm = spec.to_sbm().unwrap();
    let x3 = spec.initial_state()[2].clone();
    let limit = global_fixed_point(&sbm, &spec.initial_state()).unwrap();
    assert!(limit.iter().all(|x| *x == x3));
    let p = Partition::for_system(&sbm, &spec.initial_state(), PARTITION_CAP).unwrap();
    assert!(is_contractive_encoded(&sbm, &p).unwrap());
    let mut rng = rng(11);
    for _ in 0..5 {
        let x: Vec<IntervalSet> = (0..6).map(|_| random_set(&mut rng, sbm.universe())).collect();
        assert_eq!(sbm.iterate(&x, 6).unwrap(), limit);
    }
}
