//! Equilibria, cycles and local attractiveness of a 3-bit Boolean network.

use setcons::binary::{
    discrete_derivative, equilibria, is_contractive_binary, is_vnn_attractive, orbit, BinaryMap, ExprMap,
    ENUMERATION_CAP,
};
use setcons::expr::var;
use setcons::BoolVector;

fn main() -> setcons::Result<()> {
    let (x1, x2, x3) = (var(0), var(1), var(2));
    let f = ExprMap::new(vec![
        x3.clone() & (x1.clone() | !x2.clone()),
        x3.clone() & (x1.clone() | x2.clone()) | !x3 & (!x1.clone() | x2),
        x1,
    ])?;

    println!("incidence matrix:\n{}", f.incidence());
    println!("contractive: {}", is_contractive_binary(&f).contractive);
    for x in equilibria(&f, ENUMERATION_CAP)? {
        println!(
            "equilibrium {x}: attractive in its neighbourhood = {}\n{}",
            is_vnn_attractive(&f, &x)?,
            discrete_derivative(&f, &x)
        );
    }
    let start: BoolVector = "001".parse()?;
    let o = orbit(&f, &start, 8)?;
    let cycle: Vec<String> = o.cycle.iter().map(|x| x.to_string()).collect();
    println!("orbit of {start}: transient {}, period {}, cycle {}", o.transient, o.period, cycle.join(" -> "));
    Ok(())
}
