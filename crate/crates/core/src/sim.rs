//! Round-based simulation: every agent holds one set and, each round,
//! replaces it by its update rule applied to the sets of the agents it
//! listens to.

use std::collections::HashMap;

use num::{BigInt, One, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::caps::Caps;
use crate::convergence::set_distance;
use crate::dsl::SystemSpec;
use crate::encoding::Partition;
use crate::error::{Error, Result};
use crate::expr::Sbm;
use crate::interval::{format_rational, Endpoint, Interval, IntervalSet, Rational};

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Trajectory {
    pub names: Vec<String>,
    /// `rounds[0]` is the initial state and `rounds[t + 1] = F(rounds[t])`.
    pub rounds: Vec<Vec<IntervalSet>>,
    /// Whether a repeated state was found within the round budget.
    pub closed: bool,
    /// Rounds before the cycle is entered (the fixed point, if period 1).
    pub transient: Option<usize>,
    pub period: Option<usize>,
    /// The common set, when the run ends at a fixed point where all agents agree.
    pub consensus: Option<IntervalSet>,
    /// Number of cells of the partition used for exact state hashing.
    pub kappa: usize,
    /// Per round: encoded bits in which the state differs from the last round.
    pub distances: Vec<usize>,
    /// Per round: total length, inside `window`, of the sets by which the
    /// state differs from the last round.
    pub measures: Vec<String>,
    pub window: Interval,
}

impl Trajectory {
    pub fn last(&self) -> &[IntervalSet] {
        self.rounds.last().expect("at least the initial round")
    }
}

/// Runs the system from its declared initial state. `max_rounds` defaults to
/// the file's option, then to `2·n·κ`.
pub fn simulate(spec: &SystemSpec, max_rounds: Option<usize>, caps: &Caps) -> Result<Trajectory> {
    let sbm = spec.to_sbm()?;
    let initial = spec.initial_state();
    let partition = Partition::for_system(&sbm, &initial, caps.partition)?;
    let default_rounds = (2 * sbm.arity() * partition.kappa()).max(1);
    let max_rounds = max_rounds.or(spec.options.max_rounds).unwrap_or(default_rounds);
    run(&sbm, &initial, &partition, max_rounds, spec.names(), default_window(spec))
}

fn run(
    sbm: &Sbm,
    initial: &[IntervalSet],
    partition: &Partition,
    max_rounds: usize,
    names: Vec<String>,
    window: Interval,
) -> Result<Trajectory> {
    let encode = |x: &[IntervalSet]| {
        partition
            .encode_state(x)
            .map_err(|e| Error::Internal(format!("reachable state left the cell algebra: {e}")))
    };
    let mut seen = HashMap::new();
    seen.insert(encode(initial)?, 0usize);
    let mut rounds = vec![initial.to_vec()];
    let mut closure = None;
    for t in 1..=max_rounds {
        let next = sbm.eval(&rounds[t - 1])?;
        let code = encode(&next)?;
        if let Some(&first) = seen.get(&code) {
            closure = Some((first, t - first));
            break;
        }
        seen.insert(code, t);
        rounds.push(next);
    }

    let last = rounds.last().expect("nonempty").clone();
    let mut distances = Vec::with_capacity(rounds.len());
    let mut measures = Vec::with_capacity(rounds.len());
    for x in &rounds {
        let d = set_distance(x, &last)?;
        distances.push(encode(&d)?.count_ones());
        let total = d
            .iter()
            .map(|s| s.measure(&window).unwrap_or_else(Rational::zero))
            .fold(Rational::zero(), |a, b| a + b);
        measures.push(format_rational(&total));
    }
    let consensus = match closure {
        Some((_, 1)) if last.windows(2).all(|w| w[0] == w[1]) => Some(last[0].clone()),
        _ => None,
    };
    Ok(Trajectory {
        names,
        closed: closure.is_some(),
        transient: closure.map(|c| c.0),
        period: closure.map(|c| c.1),
        consensus,
        kappa: partition.kappa(),
        distances,
        measures,
        rounds,
        window,
    })
}

/// A finite stretch of the line covering the universe's and the system's
/// finite endpoints, extended by 10% on unbounded sides.
pub fn default_window(spec: &SystemSpec) -> Interval {
    let carrier = spec.universe.carrier();
    let mut points: Vec<Rational> = carrier.finite_endpoints().cloned().collect();
    for (_, s) in spec.constants.iter().chain(&spec.states) {
        points.extend(s.finite_endpoints().cloned());
    }
    let hull = carrier.hull().expect("universe is nonempty");
    let (Some(min), Some(max)) = (points.iter().min().cloned(), points.iter().max().cloned()) else {
        return Interval::closed(-1, 1).expect("valid");
    };
    let span = &max - &min;
    let pad = if span.is_zero() {
        Rational::one()
    } else {
        span / Rational::from_integer(BigInt::from(10))
    };
    let lo = match hull.lo() {
        Endpoint::NegInf => &min - &pad,
        e => e.value().cloned().expect("finite"),
    };
    let hi = match hull.hi() {
        Endpoint::PosInf => &max + &pad,
        e => e.value().cloned().expect("finite"),
    };
    if lo < hi {
        Interval::closed(lo, hi).expect("lo < hi")
    } else {
        Interval::closed(&lo - Rational::one(), hi + Rational::one()).expect("padded")
    }
}

const GRID: i64 = 1000;

/// A random initial state: each agent gets a union of one to three random
/// intervals with rational endpoints inside the window, clipped to the
/// universe.
pub fn random_initial(spec: &SystemSpec, seed: u64) -> Vec<IntervalSet> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let window = default_window(spec);
    let lo = window.lo().value().expect("finite window").clone();
    let width = window.hi().value().expect("finite window") - &lo;
    let point = |k: i64| &lo + &width * Rational::new(BigInt::from(k), BigInt::from(GRID));
    spec.states
        .iter()
        .map(|_| {
            let pieces = rng.gen_range(1..=3);
            let intervals: Vec<Interval> = (0..pieces)
                .map(|_| {
                    let a = rng.gen_range(0..=GRID);
                    let b = rng.gen_range(0..=GRID);
                    let (a, b) = (a.min(b), a.max(b));
                    if a == b {
                        return Interval::singleton(point(a));
                    }
                    let lo = if rng.gen() { Endpoint::closed(point(a)) } else { Endpoint::open(point(a)) };
                    let hi = if rng.gen() { Endpoint::closed(point(b)) } else { Endpoint::open(point(b)) };
                    Interval::new(lo, hi).expect("a < b")
                })
                .collect();
            IntervalSet::normalize(intervals).intersect(spec.universe.carrier())
        })
        .collect()
}

/// Directed communication graph: an edge `j → i` for every agent `j` whose
/// set agent `i` reads.
pub fn topology(sbm: &Sbm) -> Vec<(usize, usize)> {
    let b = sbm.incidence();
    let n = b.dim();
    (0..n)
        .flat_map(|i| b.row(i).ones_indices().map(move |j| (j, i)).collect::<Vec<_>>())
        .collect()
}

/// One text row per agent and round. Column `k` is `#` when the agent's set
/// meets the `k`-th of `width` equal slices of `window`.
pub fn render_timeline(traj: &Trajectory, window: &Interval, width: usize) -> String {
    let lo = window.lo().value().expect("finite window").clone();
    let span = window.hi().value().expect("finite window") - &lo;
    let edge = |k: usize| &lo + &span * Rational::new(BigInt::from(k), BigInt::from(width));
    let slices: Vec<IntervalSet> = (0..width)
        .map(|k| {
            let piece = if k + 1 == width {
                Interval::closed(edge(k), edge(k + 1))
            } else {
                Interval::closed_open(edge(k), edge(k + 1))
            };
            piece.map(IntervalSet::from).unwrap_or_default()
        })
        .collect();
    let label = traj.names.iter().map(|n| n.len()).max().unwrap_or(0);
    let mut out = format!(
        "window [{}, {}]\n",
        format_rational(&lo),
        format_rational(&(&lo + &span))
    );
    for (t, state) in traj.rounds.iter().enumerate() {
        for (name, set) in traj.names.iter().zip(state) {
            let bar: String = slices
                .iter()
                .map(|s| if s.intersect(set).is_empty() { '.' } else { '#' })
                .collect();
            out.push_str(&format!("t={t:<3} {name:<label$} |{bar}|\n"));
        }
    }
    out
}
