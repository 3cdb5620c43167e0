//! Parsing a system file, reporting diagnostics and printing it back.

use setcons::dsl;

fn main() {
    let good = "universe [0, 10]\nconst A = [1, 2] | (5, 7]\nstate P = [0, 3]\nstate Q = [2, 9]\n\
                rule P = P | Q & A\nrule Q = ~P \\ Q\noption seed = 3\n";
    match dsl::parse(good) {
        Ok(spec) => print!("{}", dsl::pretty_print(&spec)),
        Err(diags) => diags.iter().for_each(|d| eprintln!("{d}")),
    }

    let bad = "universe [0, 10]\nstate P = [0, 3]\nstate P = [1, 2]\nrule P = P | R\noption speed = 2\n";
    println!("\ndiagnostics for a broken file:");
    for d in dsl::parse(bad).unwrap_err() {
        println!("{d}");
    }
}
