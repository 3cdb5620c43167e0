//! Cell partition of three sets and the bit-vector form of a set-valued map.

use setcons::binary::BinaryMap;
use setcons::dsl;
use setcons::encoding::{translate_map, Partition, PARTITION_CAP};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let spec = dsl::parse(include_str!("../systems/three_agents.sbm")).map_err(|d| format!("{d:?}"))?;
    let sbm = spec.to_sbm()?;
    let x0 = spec.initial_state();

    let partition = Partition::for_system(&sbm, &x0, PARTITION_CAP)?;
    for (h, cell) in partition.cells().iter().enumerate() {
        println!("Z{} signature {} = {}", h + 1, cell.signature, cell.region);
    }
    for (name, set) in spec.names().iter().zip(&x0) {
        println!("{name} = {set} -> {}", partition.encode(set)?);
    }

    let f = translate_map(&sbm, &partition)?;
    let next = f.apply(&partition.encode_state(&x0)?);
    println!("one encoded step: {next}");
    for (name, set) in spec.names().iter().zip(partition.decode_state(&next)?) {
        println!("  {name} = {set}");
    }
    println!("same as the set-level step: {}", f.commutes_at(&x0)?);
    Ok(())
}
