//! Posts the lex-leader set for each series symmetry and searches for the
//! first all-interval series of length 11.

use std::time::Duration;

use symbreak::bench::{solve, BuildOptions, Instance, Method, SolveOptions};
use symbreak::search::{Mode, ValueOrder};
use symbreak::symmetry::AisSymmetry;

fn main() -> symbreak::Result<()> {
    for g in [AisSymmetry::Identity, AisSymmetry::Reverse, AisSymmetry::Invert, AisSymmetry::InvertReverse] {
        let mut o = BuildOptions::new(Method::StaticLex, ValueOrder::Lex, 0);
        o.ais_symmetry = Some(g);
        let mut s = SolveOptions::new(Mode::First);
        s.time = Some(Duration::from_secs(120));
        let r = solve(&Instance::Ais { n: 11 }, &o, &s)?;
        println!(
            "{g:<8} {:?}  branches {:>6}  backtracks {:>6}",
            r.best().unwrap(),
            r.stats.branches,
            r.stats.backtracks
        );
    }
    Ok(())
}
