mod common;

use common::*;
use proptest::prelude::*;
use rand::Rng;
use setcons::caps::Caps;
use setcons::convergence::global_fixed_point;
use setcons::dsl::{self, initial_value_name, Options, SystemSpec};
use setcons::sim::{random_initial, simulate};

fn random_spec(rng: &mut impl Rng) -> SystemSpec {
    let (universe, _) = random_universe(rng);
    let n = rng.gen_range(1..=4);
    let c = rng.gen_range(0..=2);
    let constants: Vec<_> = (0..c).map(|k| (format!("c{k}"), random_set(rng, &universe))).collect();
    let states: Vec<_> = (0..n).map(|i| (format!("agent{}", i + 1), random_set(rng, &universe))).collect();
    let mut refs: Vec<String> = constants.iter().map(|(k, _)| k.clone()).collect();
    refs.push(initial_value_name(&states[0].0));
    let vars: Vec<usize> = (0..n).collect();
    let rules = (0..n).map(|_| random_expr(rng, &vars, &refs, 5)).collect();
    let options = Options {
        seed: rng.gen_bool(0.5).then(|| rng.gen()),
        max_rounds: rng.gen_bool(0.3).then(|| rng.gen_range(1..50)),
        ..Options::default()
    };
    SystemSpec {
        universe,
        constants,
        states,
        rules,
        options,
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(150))]

    #[test]
    fn pretty_print_round_trips(seed in any::<u64>()) {
        let mut rng = rng(seed);
        let spec = random_spec(&mut rng);
        let text = dsl::pretty_print(&spec);
        let parsed = dsl::parse(&text);
        prop_assert!(parsed.is_ok(), "{}\n{:?}", text, parsed.err());
        let parsed = parsed.unwrap();
        prop_assert_eq!(&parsed, &spec);
        prop_assert_eq!(dsl::pretty_print(&parsed), text);
    }

    #[test]
    fn seeded_runs_are_reproducible(seed in any::<u64>()) {
        let spec = dsl::parse(include_str!("../systems/three_agents.sbm")).unwrap();
        let once = spec.with_initial(random_initial(&spec, seed)).unwrap();
        let twice = spec.with_initial(random_initial(&spec, seed)).unwrap();
        let a = serde_json::to_string(&simulate(&once, Some(40), &Caps::default()).unwrap()).unwrap();
        let b = serde_json::to_string(&simulate(&twice, Some(40), &Caps::default()).unwrap()).unwrap();
        prop_assert_eq!(a, b);
    }

    #[test]
    fn trajectories_follow_the_map(seed in any::<u64>()) {
        let mut rng = rng(seed);
        let spec = random_spec(&mut rng);
        let sbm = spec.to_sbm().unwrap();
        let traj = simulate(&spec, None, &Caps::default()).unwrap();
        for w in traj.rounds.windows(2) {
            prop_assert_eq!(&sbm.eval(&w[0]).unwrap(), &w[1]);
        }
        if let (Some(t), Some(p)) = (traj.transient, traj.period) {
            // the repeated state itself is not stored again
            prop_assert_eq!(traj.rounds.len(), t + p);
            prop_assert_eq!(&sbm.eval(traj.last()).unwrap(), &traj.rounds[t]);
        }
        prop_assert_eq!(traj.distances.last().copied(), Some(0));
    }
}

#[test]
fn contractive_system_closes_on_its_fixed_point_from_random_starts() {
    let spec = dsl::parse(include_str!("../systems/six_agents.sbm")).unwrap();
    for seed in [1, 2, 3, 4] {
        let run = spec.with_initial(random_initial(&spec, seed)).unwrap();
        let traj = simulate(&run, None, &Caps::default()).unwrap();
        let limit = global_fixed_point(&run.to_sbm().unwrap(), &run.initial_state()).unwrap();
        assert!(traj.closed);
        assert_eq!(traj.period, Some(1));
        assert_eq!(traj.last(), limit.as_slice());
        assert_eq!(traj.consensus.as_ref(), Some(&run.initial_state()[2]));
    }
}

#[test]
fn different_seeds_give_different_starts() {
    let spec = dsl::parse(include_str!("../systems/six_agents.sbm")).unwrap();
    assert_ne!(random_initial(&spec, 1), random_initial(&spec, 2));
    assert_eq!(random_initial(&spec, 9), random_initial(&spec, 9));
}

#[test]
fn diagnostics_point_at_the_problem() {
    let text = "universe [0, 10]\nstate A = [1, 2]\nrule A = A | B\n";
    let diags = dsl::parse(text).unwrap_err();
    assert_eq!(diags.len(), 1);
    assert_eq!((diags[0].span.line, diags[0].span.column), (3, 14));
    assert!(diags[0].message.contains("undefined identifier B"));
}
