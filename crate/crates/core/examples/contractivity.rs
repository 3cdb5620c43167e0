//! Global convergence test through the incidence matrix.

use setcons::convergence::{global_fixed_point, is_contractive_sbm};
use setcons::dsl;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    for file in [
        include_str!("../systems/six_agents.sbm"),
        include_str!("../systems/three_agents.sbm"),
    ] {
        let spec = dsl::parse(file).map_err(|d| format!("{d:?}"))?;
        let sbm = spec.to_sbm()?;
        let names = spec.names();
        println!("{sbm}\nincidence:\n{}", sbm.incidence());
        let verdict = is_contractive_sbm(&sbm);
        if let (Some(order), Some(q)) = (&verdict.witness, verdict.q) {
            let order: Vec<&str> = order.order().iter().map(|&i| names[i].as_str()).collect();
            println!("contractive, elimination order {}, F^{q} is constant", order.join(" "));
            for (name, set) in names.iter().zip(global_fixed_point(&sbm, &spec.initial_state())?) {
                println!("  {name} -> {set}");
            }
        } else if let Some(cycle) = &verdict.cycle_evidence {
            let cycle: Vec<&str> = cycle.iter().map(|&i| names[i].as_str()).collect();
            println!("not contractive, dependency cycle {}", cycle.join(" -> "));
        }
        println!();
    }
    Ok(())
}
