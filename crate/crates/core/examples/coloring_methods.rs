//! Minimum coloring of a random graph with interchangeable vertices and
//! colors, solved by every method under both value orders.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use symbreak::bench::coloring::generate;
use symbreak::bench::{solve, BuildOptions, Instance, Method, SolveOptions};
use symbreak::search::{Mode, ValueOrder};

fn main() -> symbreak::Result<()> {
    let g = generate(14, 5, &mut ChaCha8Rng::seed_from_u64(11))?;
    println!("{} vertices, blocks {:?}, {} edges", g.n, g.var_parts.sizes(), g.edges.len());
    println!("brute-force chromatic number {:?}", g.brute_force_chromatic());
    let inst = Instance::Coloring(g);
    for method in Method::ALL {
        for order in [ValueOrder::Lex, ValueOrder::Antilex] {
            let mut s = SolveOptions::new(Mode::Optimize);
            if method == Method::Restarts {
                s.cutoff = Some(100);
            }
            match solve(&inst, &BuildOptions::new(method, order, 3), &s) {
                Ok(r) => println!(
                    "{:<14} {:<7} colors {:?} proved {} backtracks {}",
                    method.name(),
                    order.name(),
                    r.stats.best_objective,
                    r.stats.proved_optimal,
                    r.stats.backtracks
                ),
                Err(e) => println!("{:<14} {:<7} {e}", method.name(), order.name()),
            }
        }
    }
    Ok(())
}
