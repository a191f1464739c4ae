//! Symmetry breaking during search with the two pair generators versus
//! the whole piecewise group on a small toy problem.

use symbreak::harness::{toy_csp, ToyMethod};
use symbreak::search::ValueOrder;

fn main() -> symbreak::Result<()> {
    for seed in 0..5 {
        let toy = toy_csp(seed);
        let all = toy.brute_force();
        let mut classes: Vec<Vec<i32>> = all.iter().map(|a| toy.canonical(a)).collect();
        classes.sort();
        classes.dedup();
        let pair = toy.enumerate(ToyMethod::SbdsPair, ValueOrder::Lex, seed)?;
        let full = toy.enumerate(ToyMethod::SbdsFull, ValueOrder::Lex, seed)?;
        println!("{}", toy.describe());
        println!("  {} solutions, {} classes, pair keeps {}, full group keeps {}", all.len(), classes.len(), pair.len(), full.len());
    }
    Ok(())
}
