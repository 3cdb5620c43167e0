//! Unions, intersections and complements of interval sets.

use setcons::{IntervalSet, Universe};

fn main() -> setcons::Result<()> {
    let universe = Universe::new("[0, inf)".parse()?)?;
    let a: IntervalSet = "[2, 5] | (8, 11)".parse()?;
    let b: IntervalSet = "[4, 9]".parse()?;

    println!("A        = {a}");
    println!("B        = {b}");
    println!("A | B    = {}", a.union(&b));
    println!("A & B    = {}", a.intersect(&b));
    println!("A \\ B    = {}", a.difference(&b));
    println!("A ^ B    = {}", a.sym_diff(&b));
    println!("~A       = {}", universe.complement(&a));

    // touching pieces merge, a point removed leaves a gap
    let merged: IntervalSet = "[0, 1) | [1, 2]".parse()?;
    println!("[0,1) | [1,2] = {merged}");
    println!("[0,2] minus the point 1 = {}", merged.difference(&"[1, 1]".parse()?));
    Ok(())
}
