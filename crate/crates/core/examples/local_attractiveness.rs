//! Which equilibria of a non-contractive system pull their neighbours back.

use setcons::caps::LISTING_CAP;
use setcons::convergence::{equilibria_sbm, is_locally_attractive_sbm};
use setcons::dsl;
use setcons::encoding::{Partition, PARTITION_CAP};
use setcons::binary::ENUMERATION_CAP;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let spec = dsl::parse(include_str!("../systems/boolean_network.sbm")).map_err(|d| format!("{d:?}"))?;
    let sbm = spec.to_sbm()?;
    let partition = Partition::for_system(&sbm, &spec.initial_state(), PARTITION_CAP)?;
    let summary = equilibria_sbm(&sbm, &partition, ENUMERATION_CAP, LISTING_CAP)?;
    println!("{} equilibria over {} cell(s)", summary.total.unwrap_or_default(), summary.kappa);
    for x in summary.listing.unwrap_or_default() {
        let v = is_locally_attractive_sbm(&sbm, &x, &partition)?;
        let shown: Vec<String> = x.iter().map(|s| s.to_string()).collect();
        println!("({}) derivative test: {}, simulation: {}", shown.join(", "), v.theorem, v.direct);
    }
    Ok(())
}
