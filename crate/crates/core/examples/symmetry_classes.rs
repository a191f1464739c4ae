//! Counts series, their symmetry classes, and what each method keeps.

use symbreak::bench::ais::brute_force_solutions;
use symbreak::bench::{solve, BuildOptions, Instance, Method, SolveOptions};
use symbreak::search::{Mode, ValueOrder};
use symbreak::symmetry::{symmetry_classes, AisSymmetry};

fn main() -> symbreak::Result<()> {
    for n in 5..=9 {
        let all = brute_force_solutions(n);
        let gens = [AisSymmetry::Reverse.symmetry(n), AisSymmetry::Invert.symmetry(n)];
        let classes = symmetry_classes(&all, &gens, 4 * all.len())?;
        print!("n={n}: {} series, {} classes;", all.len(), classes.len());
        for method in [Method::None, Method::StaticLex, Method::Dynamic] {
            let mut s = SolveOptions::new(Mode::All);
            s.time = None;
            let r = solve(&Instance::Ais { n }, &BuildOptions::new(method, ValueOrder::Lex, 0), &s)?;
            print!(" {} {}", method.name(), r.solutions.len());
        }
        println!();
    }
    Ok(())
}
