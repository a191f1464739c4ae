//! Fixes X1 = 10 and X11 = 5 by hand, then lets the forced rule pick the
//! symmetry-breaking set that stays consistent with the search.

use symbreak::bench::ais::{diff_brancher, post_ais};
use symbreak::forced::ForcedSets;
use symbreak::search::{search, Limits, Mode, Model, Scripted};
use symbreak::store::Store;

fn main() -> symbreak::Result<()> {
    let mut s = Store::new();
    let v = post_ais(&mut s, 11)?;
    let b = Scripted { script: vec![(v.x[0], 10), (v.x[10], 5)], then: diff_brancher(&v) };
    let mut m = Model::new(s, Box::new(b), v.x.clone());
    m.monitor = Box::new(ForcedSets::for_ais(&v.x, true));
    let r = search(&mut m, Mode::First, Limits::default())?;
    for line in m.monitor.trace() {
        println!("{line}");
    }
    println!("solution {:?}", r.best().unwrap());
    Ok(())
}
