//! Round-by-round simulation from random initial sets, with a timeline.

use setcons::caps::Caps;
use setcons::dsl;
use setcons::sim::{default_window, random_initial, render_timeline, simulate};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let seed = std::env::args().nth(1).map(|s| s.parse()).transpose()?.unwrap_or(7);
    let spec = dsl::parse(include_str!("../systems/six_agents.sbm")).map_err(|d| format!("{d:?}"))?;
    let spec = spec.with_initial(random_initial(&spec, seed))?;
    let traj = simulate(&spec, None, &Caps::default())?;

    print!("{}", render_timeline(&traj, &default_window(&spec), 50));
    match (traj.transient, &traj.consensus) {
        (Some(t), Some(c)) => println!("consensus on {c} after {t} rounds"),
        _ => println!("no consensus within {} rounds", traj.rounds.len()),
    }
    println!("distance to the final state per round: {:?}", traj.distances);
    Ok(())
}
