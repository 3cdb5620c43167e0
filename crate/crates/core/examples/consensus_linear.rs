//! Consensus fixed points of a linear system X+ = A X.

use setcons::convergence::consensus_region;
use setcons::{IntervalSet, LinearSbm, SetMatrix, Universe};

fn main() -> setcons::Result<()> {
    let universe = Universe::new("[0, 10]".parse()?)?;
    let entry = |s: &str| s.parse::<IntervalSet>();
    let a = SetMatrix::new(vec![
        vec![entry("[0, 5]")?, entry("[3, 8]")?],
        vec![entry("[6, 9]")?, entry("[2, 4]")?],
    ])?;
    let linear = LinearSbm::new(universe, a)?;
    let verdict = consensus_region(&linear);
    println!("consensus exists: {}", verdict.exists);
    println!("every subset of {} is a common fixed point", verdict.region);

    let phi: IntervalSet = "[2, 3]".parse()?;
    let x = vec![phi.clone(), phi.clone()];
    println!("A ([2,3], [2,3]) = {:?}", linear.apply(&x)?.iter().map(|s| s.to_string()).collect::<Vec<_>>());
    Ok(())
}
