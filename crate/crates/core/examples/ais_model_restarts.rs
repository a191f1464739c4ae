//! Restarts with a fresh random symmetry each time, averaged over trials.

use std::time::Duration;

use symbreak::bench::{BuildOptions, Instance, Method};
use symbreak::harness::{run_trials, RunConfig};
use symbreak::search::ValueOrder;

fn main() -> symbreak::Result<()> {
    let trials = 200;
    for cutoff in [50, 100, 200] {
        let cfg = RunConfig {
            instance: Instance::Ais { n: 11 },
            name: "ais-11".into(),
            build: BuildOptions::new(Method::Restarts, ValueOrder::Lex, 0),
            cutoff: Some(cutoff),
            time_limit: Some(Duration::from_secs(60)),
            count_all: false,
        };
        let recs = run_trials(&cfg, trials)?;
        let mean = |f: fn(&symbreak::harness::RunRecord) -> u64| recs.iter().map(f).sum::<u64>() as f64 / trials as f64;
        println!("cutoff {cutoff:>3}: mean branches {:.1}, mean restarts {:.2}", mean(|r| r.branches), mean(|r| r.restarts));
    }
    Ok(())
}
