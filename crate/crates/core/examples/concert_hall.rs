//! Concert-hall scheduling: identical applications and identical halls.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use symbreak::bench::concert::generate;
use symbreak::bench::{solve, BuildOptions, Instance, Method, SolveOptions};
use symbreak::search::{Mode, ValueOrder};

fn main() -> symbreak::Result<()> {
    let c = generate(10, 3, 4, &mut ChaCha8Rng::seed_from_u64(5))?;
    for a in &c.apps {
        println!("[{:>2}, {:>2}) offer {:>3}", a.start, a.end, a.offer);
    }
    println!("best profit by brute force: {}", c.brute_force_optimum());
    let inst = Instance::Concert(c.clone());
    for method in [Method::None, Method::StaticLex, Method::Dynamic, Method::SbdsPair] {
        let r = solve(&inst, &BuildOptions::new(method, ValueOrder::Lex, 0), &SolveOptions::new(Mode::Optimize))?;
        let best = r.best().unwrap();
        println!(
            "{:<11} profit {:?} halls {:?} backtracks {}",
            method.name(),
            r.stats.best_objective,
            &best[..c.n()],
            r.stats.backtracks
        );
    }
    Ok(())
}
