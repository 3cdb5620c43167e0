//! Seeded generators and small independent oracles shared by the
//! integration tests and the acceptance runner.
#![allow(dead_code)]

use std::collections::BTreeMap;

use itertools::Itertools;
use num::{BigInt, BigRational};
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use setcons::binary::{BinaryMap, TruthTable};
use setcons::encoding::{build_partition, Partition, PARTITION_CAP};
use setcons::{BoolMatrix, BoolVector, Endpoint, Interval, IntervalSet, Rational, Sbm, SetExpr, Universe};

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn half(k: i64) -> Rational {
    BigRational::new(BigInt::from(k), BigInt::from(2))
}

/// One interval as raw data, kept so membership can be decided without the
/// library's normal form.
#[derive(Debug, Clone)]
pub struct RawInterval {
    pub lo: Option<(Rational, bool)>,
    pub hi: Option<(Rational, bool)>,
}

impl RawInterval {
    pub fn contains(&self, p: &Rational) -> bool {
        let above = match &self.lo {
            None => true,
            Some((v, closed)) => p > v || (*closed && p == v),
        };
        let below = match &self.hi {
            None => true,
            Some((v, closed)) => p < v || (*closed && p == v),
        };
        above && below
    }

    fn to_interval(&self) -> Interval {
        let end = |b: &Option<(Rational, bool)>, inf: Endpoint| match b {
            None => inf,
            Some((v, true)) => Endpoint::closed(v.clone()),
            Some((v, false)) => Endpoint::open(v.clone()),
        };
        Interval::new(end(&self.lo, Endpoint::NegInf), end(&self.hi, Endpoint::PosInf)).expect("generated bounds are ordered")
    }
}

/// A finite union of intervals as generated, possibly overlapping.
#[derive(Debug, Clone, Default)]
pub struct RawSet(pub Vec<RawInterval>);

impl RawSet {
    pub fn contains(&self, p: &Rational) -> bool {
        self.0.iter().any(|i| i.contains(p))
    }

    pub fn to_set(&self) -> IntervalSet {
        IntervalSet::normalize(self.0.iter().map(RawInterval::to_interval))
    }
}

/// Endpoints on the grid of halves in `[-2, 22]`.
pub fn random_raw_interval(rng: &mut impl Rng) -> RawInterval {
    let a = rng.gen_range(-4..=44);
    let b = rng.gen_range(-4..=44);
    let (a, b) = (a.min(b), a.max(b));
    let mut lo_closed = rng.gen_bool(0.5);
    let mut hi_closed = rng.gen_bool(0.5);
    if a == b {
        lo_closed = true;
        hi_closed = true;
    }
    let lo = (!rng.gen_bool(0.05)).then(|| (half(a), lo_closed));
    let hi = (!rng.gen_bool(0.05)).then(|| (half(b), hi_closed));
    RawInterval { lo, hi }
}

pub fn random_raw_set(rng: &mut impl Rng, max_pieces: usize) -> RawSet {
    let k = rng.gen_range(0..=max_pieces);
    RawSet((0..k).map(|_| random_raw_interval(rng)).collect())
}

/// One of a few universes, with its raw description.
pub fn random_universe(rng: &mut impl Rng) -> (Universe, RawSet) {
    let closed = |a: i64, b: i64| RawInterval {
        lo: Some((half(a), true)),
        hi: Some((half(b), true)),
    };
    let raw = match rng.gen_range(0..4) {
        0 => RawSet(vec![closed(0, 40)]),
        1 => RawSet(vec![RawInterval {
            lo: Some((half(0), true)),
            hi: None,
        }]),
        2 => RawSet(vec![RawInterval { lo: None, hi: None }]),
        _ => RawSet(vec![closed(0, 10), closed(20, 40)]),
    };
    (Universe::new(raw.to_set()).expect("nonempty"), raw)
}

/// A random subset of `universe`.
pub fn random_set(rng: &mut impl Rng, universe: &Universe) -> IntervalSet {
    random_raw_set(rng, 3).to_set().intersect(universe.carrier())
}

/// Random expression of depth at most `depth` over the variables `vars`,
/// using sugar operators too.
pub fn random_expr(rng: &mut impl Rng, vars: &[usize], constants: &[String], depth: usize) -> SetExpr {
    if depth == 0 || rng.gen_bool(0.3) {
        let roll = rng.gen_range(0..100);
        return if roll < 34 && !constants.is_empty() && (roll >= 14 || vars.is_empty()) {
            SetExpr::Const(constants.choose(rng).unwrap().clone())
        } else if roll < 8 || (vars.is_empty() && roll < 50) {
            SetExpr::Universe
        } else if roll < 14 || vars.is_empty() {
            SetExpr::Empty
        } else {
            SetExpr::Var(*vars.choose(rng).unwrap())
        };
    }
    let op = rng.gen_range(0..5);
    let mut sub = || Box::new(random_expr(rng, vars, constants, depth - 1));
    match op {
        0 => SetExpr::Union(sub(), sub()),
        1 => SetExpr::Intersect(sub(), sub()),
        2 => SetExpr::Complement(sub()),
        3 => SetExpr::Difference(sub(), sub()),
        _ => SetExpr::SymDiff(sub(), sub()),
    }
}

/// Random map with `1..=max_n` components, `0..=max_constants` named
/// constants and expression depth at most `depth`.
pub fn random_sbm(rng: &mut impl Rng, universe: &Universe, max_n: usize, max_constants: usize, depth: usize) -> Sbm {
    let n = rng.gen_range(1..=max_n);
    let c = rng.gen_range(0..=max_constants);
    let names: Vec<String> = (0..c).map(|k| format!("C{k}")).collect();
    let constants: BTreeMap<String, IntervalSet> =
        names.iter().map(|k| (k.clone(), random_set(rng, universe))).collect();
    random_sbm_like(rng, universe, n, constants, depth)
}

/// Random map of arity `n` over the given constants.
pub fn random_sbm_like(
    rng: &mut impl Rng,
    universe: &Universe,
    n: usize,
    constants: BTreeMap<String, IntervalSet>,
    depth: usize,
) -> Sbm {
    let names: Vec<String> = constants.keys().cloned().collect();
    let vars: Vec<usize> = (0..n).collect();
    let components = (0..n).map(|_| random_expr(rng, &vars, &names, depth)).collect();
    Sbm::new(universe.clone(), components, constants).expect("well formed")
}

/// Random map in which component `order[k]` reads only `order[..k]`, so it
/// is contractive by construction.
pub fn random_triangular_sbm(rng: &mut impl Rng, universe: &Universe, n: usize, max_constants: usize) -> Sbm {
    let c = rng.gen_range(0..=max_constants);
    let constants: BTreeMap<String, IntervalSet> =
        (0..c).map(|k| (format!("C{k}"), random_set(rng, universe))).collect();
    let names: Vec<String> = constants.keys().cloned().collect();
    let mut order: Vec<usize> = (0..n).collect();
    order.shuffle(rng);
    let mut components = vec![SetExpr::Empty; n];
    for (k, &i) in order.iter().enumerate() {
        components[i] = random_expr(rng, &order[..k], &names, 4);
    }
    Sbm::new(universe.clone(), components, constants).expect("well formed")
}

/// A map together with a partition generated by its constants and extra
/// random sets, `generators` in total.
pub fn random_encoded_system(rng: &mut impl Rng, generators: usize) -> (Sbm, Partition) {
    let (universe, _) = random_universe(rng);
    let constants = rng.gen_range(0..=generators);
    let sbm = random_sbm(rng, &universe, 4, constants, 5);
    let mut gens: Vec<IntervalSet> = sbm.constants().values().cloned().collect();
    while gens.len() < generators {
        gens.push(random_set(rng, &universe));
    }
    let partition = build_partition(&gens, &universe, PARTITION_CAP).expect("small partition");
    (sbm, partition)
}

/// A random state whose components are unions of partition cells.
pub fn random_representable_state(rng: &mut impl Rng, partition: &Partition, n: usize) -> Vec<IntervalSet> {
    let bits = BoolVector::from_bits((0..n * partition.kappa()).map(|_| rng.gen_bool(0.5)));
    partition.decode_state(&bits).expect("lengths agree")
}

pub fn random_matrix(rng: &mut impl Rng, n: usize, density: f64) -> BoolMatrix {
    let mut m = BoolMatrix::zeros(n);
    for i in 0..n {
        for j in 0..n {
            m.set(i, j, rng.gen_bool(density));
        }
    }
    m
}

pub fn random_truth_table(rng: &mut impl Rng, n: usize) -> TruthTable {
    let outputs = (0..1u32 << n).map(|_| rng.gen_range(0..1u32 << n)).collect();
    TruthTable::from_outputs(n, outputs).expect("valid table")
}

/// Random map in which component `order[k]` reads only the components
/// `order[..k]`, so its incidence is strictly triangular up to permutation.
pub fn random_triangular_map(rng: &mut impl Rng, n: usize) -> TruthTable {
    let mut order: Vec<usize> = (0..n).collect();
    order.shuffle(rng);
    // one random Boolean function per component, over its allowed inputs
    let tables: Vec<Vec<bool>> = (0..n).map(|k| (0..1usize << k).map(|_| rng.gen_bool(0.5)).collect()).collect();
    let outputs = (0..1u64 << n)
        .map(|idx| {
            let x = BoolVector::from_index(idx, n);
            let mut y = BoolVector::zeros(n);
            for (k, &i) in order.iter().enumerate() {
                let key = order[..k]
                    .iter()
                    .enumerate()
                    .fold(0usize, |acc, (b, &j)| acc | (usize::from(x.get(j)) << b));
                y.set(i, tables[k][key]);
            }
            y.to_index() as u32
        })
        .collect();
    TruthTable::from_outputs(n, outputs).expect("valid table")
}

pub fn all_states(n: usize) -> Vec<BoolVector> {
    (0..1u64 << n).map(|i| BoolVector::from_index(i, n)).collect()
}

/// Some permutation `p` has `m[p[k]][p[l]] = 0` whenever `l >= k`.
pub fn brute_force_triangularizable(m: &BoolMatrix) -> bool {
    let n = m.dim();
    (0..n)
        .permutations(n)
        .any(|p| (0..n).all(|k| (k..n).all(|l| !m.get(p[k], p[l]))))
}

/// Neighbourhood attractiveness by plain simulation: every state at Hamming
/// distance one from `x` stays within distance one for `n` steps and lands
/// on `x`.
pub fn vnn_attractive_by_simulation(f: &dyn BinaryMap, x: &BoolVector) -> bool {
    let n = f.arity();
    let dist = |y: &BoolVector| (0..n).filter(|&i| y.get(i) != x.get(i)).count();
    (0..n).all(|j| {
        let mut y = x.clone();
        y.set(j, !x.get(j));
        for _ in 0..n {
            y = f.apply(&y);
            if dist(&y) > 1 {
                return false;
            }
        }
        &y == x
    })
}

/// Probe points: every generated endpoint, points just beside it and a few
/// random halves and quarters.
pub fn probe_points(rng: &mut impl Rng, sets: &[&RawSet]) -> Vec<Rational> {
    let quarter = BigRational::new(BigInt::from(1), BigInt::from(4));
    let mut points = Vec::new();
    for set in sets {
        for piece in &set.0 {
            for (v, _) in piece.lo.iter().chain(piece.hi.iter()) {
                points.push(v.clone());
                points.push(v - &quarter);
                points.push(v + &quarter);
            }
        }
    }
    for _ in 0..4 {
        points.push(BigRational::new(BigInt::from(rng.gen_range(-12..=100)), BigInt::from(4)));
    }
    points
}
