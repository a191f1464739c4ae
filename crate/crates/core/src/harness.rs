//! Batch runs, per-run records and the oracle verification suites.

use std::io::Write;
use std::time::Duration;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::bench::ais::{brute_force_solutions, diff_brancher, post_ais};
use crate::bench::coloring::{self, ColoringInstance};
use crate::bench::{solve, BuildOptions, Instance, SolveOptions};
use crate::bench::model::default_mode;
use crate::constraints::Constraint;
use crate::error::{Error, Result};
use crate::forced::{ForcedPiecewise, ForcedSets};
use crate::sbds::Sbds;
use crate::search::{search, Limits, Mode, Model, SearchMonitor, Status, ValueOrder, VarOrder, VarValueBrancher};
use crate::static_sb::{build_ais_set, PiecewiseLayout};
use crate::store::{PostMode, Store, VarId};
use crate::symmetry::{
    pair_generators, piecewise_canonical, piecewise_group, symmetry_classes, AisSymmetry, Partitions, Symmetry,
};

#[derive(Clone, Debug)]
pub struct RunConfig {
    pub instance: Instance,
    /// Label for the `instance` column (file name or generator spec).
    pub name: String,
    pub build: BuildOptions,
    pub cutoff: Option<u64>,
    pub time_limit: Option<Duration>,
    /// Enumerate every solution instead of the family's default mode.
    pub count_all: bool,
}

/// One output row. `opt` is the best objective, or the number of
/// solutions with `count_all`; it is empty for a first-solution run.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct RunRecord {
    pub family: String,
    pub instance: String,
    pub method: String,
    pub value_order: String,
    pub seed: u64,
    pub opt: Option<i64>,
    pub proved: bool,
    pub branches: u64,
    pub backtracks: u64,
    pub restarts: u64,
    pub time_s: f64,
    #[serde(skip)]
    pub status: Status,
    /// Last solution found.
    #[serde(skip)]
    pub solution: Option<Vec<i32>>,
}

pub fn run(cfg: &RunConfig) -> Result<RunRecord> {
    let mode = if cfg.count_all { Mode::All } else { default_mode(&cfg.instance) };
    let opts = SolveOptions { mode, cutoff: cfg.cutoff, growth: None, time: cfg.time_limit };
    let r = solve(&cfg.instance, &cfg.build, &opts)?;
    let (opt, proved) = match mode {
        Mode::All => (Some(r.stats.solutions as i64), r.status == Status::Complete),
        Mode::Optimize => (r.stats.best_objective.map(i64::from), r.stats.proved_optimal),
        Mode::First => (None, r.status == Status::Complete && r.stats.solutions > 0),
    };
    Ok(RunRecord {
        family: cfg.instance.family().name().to_string(),
        instance: cfg.name.clone(),
        method: cfg.build.method.name().to_string(),
        value_order: cfg.build.value_order.name().to_string(),
        seed: cfg.build.seed,
        opt,
        proved,
        branches: r.stats.branches,
        backtracks: r.stats.backtracks,
        restarts: r.stats.restarts,
        time_s: r.stats.wall_time,
        status: r.status,
        solution: r.best().cloned(),
    })
}

/// `trials` independent runs with seeds `seed, seed + 1, ...`, run in
/// parallel and returned in trial order.
pub fn run_trials(cfg: &RunConfig, trials: u64) -> Result<Vec<RunRecord>> {
    let mut out: Vec<(u64, RunRecord)> = (0..trials)
        .into_par_iter()
        .map(|i| {
            let mut c = cfg.clone();
            c.build.seed = cfg.build.seed.wrapping_add(i);
            run(&c).map(|r| (i, r))
        })
        .collect::<Result<_>>()?;
    out.sort_by_key(|(i, _)| *i);
    Ok(out.into_iter().map(|(_, r)| r).collect())
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, clap::ValueEnum)]
pub enum Format {
    Csv,
    Json,
}

pub fn write_records(records: &[RunRecord], format: Format, out: impl Write) -> Result<()> {
    match format {
        Format::Csv => {
            let mut w = csv::Writer::from_writer(out);
            for r in records {
                w.serialize(r).map_err(|e| Error::Internal(e.to_string()))?;
            }
            w.flush()?;
        }
        Format::Json => {
            let mut out = out;
            serde_json::to_writer_pretty(&mut out, records).map_err(|e| Error::Internal(e.to_string()))?;
            writeln!(out)?;
        }
    }
    Ok(())
}

/// A small coloring CSP (no objective) with its own value partition.
#[derive(Clone, Debug)]
pub struct PiecewiseToy {
    pub graph: ColoringInstance,
    pub val_parts: Partitions,
}

/// Up to 8 vertices, 2 to 4 colors, random variable and value blocks.
pub fn toy_csp(seed: u64) -> PiecewiseToy {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let n = rng.random_range(2..=8);
    let colors = rng.random_range(2..=4);
    let mut graph = coloring::generate(n, 4, &mut rng).expect("positive sizes");
    graph.colors = colors;
    let val_parts = Partitions::from_sizes(&coloring::random_sizes(colors, colors, &mut rng)).expect("positive sizes");
    PiecewiseToy { graph, val_parts }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ToyMethod {
    None,
    Forced { patch: bool },
    SbdsPair,
    /// SBDS with every group element (oracle scale only).
    SbdsFull,
}

impl PiecewiseToy {
    fn store(&self) -> (Store, Vec<VarId>) {
        let mut s = Store::new();
        let xs: Vec<VarId> = (0..self.graph.n).map(|_| s.new_var(1, self.graph.colors as i32)).collect();
        for &(u, v) in &self.graph.edges {
            let _ = s.post(Constraint::ne(xs[u], xs[v]), PostMode::Permanent);
        }
        (s, xs)
    }

    /// Every solution, by plain enumeration of `colors^n` assignments.
    pub fn brute_force(&self) -> Vec<Vec<i32>> {
        let n = self.graph.n;
        let k = self.graph.colors as i32;
        let mut out = Vec::new();
        let mut a = vec![1; n];
        loop {
            if self.graph.edges.iter().all(|&(u, v)| a[u] != a[v]) {
                out.push(a.clone());
            }
            let mut i = 0;
            while i < n && a[i] == k {
                a[i] = 1;
                i += 1;
            }
            if i == n {
                return out;
            }
            a[i] += 1;
        }
    }

    pub fn canonical(&self, a: &[i32]) -> Vec<i32> {
        piecewise_canonical(a, &self.graph.var_parts, &self.val_parts, 1)
    }

    pub fn enumerate(&self, method: ToyMethod, order: ValueOrder, seed: u64) -> Result<Vec<Vec<i32>>> {
        let (mut s, xs) = self.store();
        let vp = &self.graph.var_parts;
        let monitor: Box<dyn SearchMonitor + Send> = match method {
            ToyMethod::None => Box::new(crate::search::NoMonitor),
            ToyMethod::Forced { patch } => {
                let layout = PiecewiseLayout::post(&mut s, xs.clone(), vp.clone(), self.val_parts.clone(), 1)?;
                Box::new(ForcedPiecewise::new(layout, patch))
            }
            ToyMethod::SbdsPair => Box::new(Sbds::new(xs.clone(), pair_generators(vp, &self.val_parts, 1))),
            ToyMethod::SbdsFull => {
                let mut g = piecewise_group(vp, &self.val_parts, 1, 1000)?;
                g.retain(|h| !h.is_identity());
                Box::new(Sbds::new(xs.clone(), g))
            }
        };
        s.schedule_all();
        let b = VarValueBrancher::new(xs.clone(), VarOrder::SmallestDomain, order, seed)
            .with_value_blocks(self.val_parts.clone(), 1);
        let mut m = Model::new(s, Box::new(b), xs);
        m.monitor = monitor;
        Ok(search(&mut m, Mode::All, Limits::default())?.solutions)
    }

    pub fn describe(&self) -> String {
        format!(
            "toy n={} colors={} blocks={:?} value-blocks={:?} edges={}",
            self.graph.n,
            self.graph.colors,
            self.graph.var_parts.sizes(),
            self.val_parts.sizes(),
            self.graph.edges.len()
        )
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct Check {
    pub property: String,
    pub instance: String,
    pub pass: bool,
    pub detail: String,
}

#[derive(Clone, Debug, Default, Serialize)]
pub struct VerifyReport {
    pub suite: String,
    pub checks: Vec<Check>,
}

impl VerifyReport {
    pub fn all_pass(&self) -> bool {
        self.checks.iter().all(|c| c.pass)
    }

    fn push(&mut self, property: &str, instance: String, pass: bool, detail: String) {
        self.checks.push(Check { property: property.to_string(), instance, pass, detail });
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, clap::ValueEnum)]
pub enum Suite {
    Observations,
    Properness,
    SbdsSoundness,
}

/// Largest series the oracle enumerates.
pub const MAX_ORACLE_SERIES: usize = 9;

#[derive(Clone, Debug)]
pub struct VerifyParams {
    pub series: Vec<usize>,
    pub toys: u64,
    pub seed: u64,
}

impl Default for VerifyParams {
    fn default() -> Self {
        VerifyParams { series: vec![5, 6, 7], toys: 50, seed: 0 }
    }
}

fn series_solutions_with(n: usize, set: Option<AisSymmetry>, forced: bool) -> Result<Vec<Vec<i32>>> {
    let mut s = Store::new();
    let v = post_ais(&mut s, n)?;
    if let Some(g) = set {
        for c in build_ais_set(g, &v.x) {
            let _ = s.post(c, PostMode::Permanent);
        }
        s.schedule_all();
    }
    let mut m = Model::new(s, diff_brancher(&v), v.x.clone());
    if forced {
        m.monitor = Box::new(ForcedSets::for_ais(&v.x, true));
    }
    Ok(search(&mut m, Mode::All, Limits::default())?.solutions)
}

fn series_group(n: usize) -> Vec<Symmetry> {
    AisSymmetry::ALL.iter().map(|g| g.symmetry(n)).collect()
}

/// Sizes of the classes hit more or less than once, as a short summary.
fn one_per_class(classes: &crate::symmetry::SymmetryClassTable, kept: &[Vec<i32>]) -> (bool, String) {
    let hits = classes.hits(kept);
    let missing = hits.values().filter(|&&h| h == 0).count();
    let extra = hits.values().filter(|&&h| h > 1).count();
    let stray = kept.len() - hits.values().sum::<usize>();
    let ok = missing == 0 && extra == 0 && stray == 0;
    (ok, format!("{} classes, {} kept, {missing} missed, {extra} repeated, {stray} not solutions", classes.len(), kept.len()))
}

pub fn verify(suite: Suite, p: &VerifyParams) -> Result<VerifyReport> {
    if let Some(&n) = p.series.iter().find(|&&n| !(2..=MAX_ORACLE_SERIES).contains(&n)) {
        return Err(Error::OracleBoundExceeded(format!("series length {n} outside 2..={MAX_ORACLE_SERIES}")));
    }
    let mut rep = VerifyReport { suite: format!("{suite:?}").to_lowercase(), checks: Vec::new() };
    match suite {
        Suite::Observations => {
            for &n in &p.series {
                let all = brute_force_solutions(n);
                let classes = symmetry_classes(&all, &series_group(n), 1_000_000)?;
                let x: Vec<VarId> = (0..n as u32).map(VarId).collect();
                for g in AisSymmetry::ALL {
                    let kept = series_solutions_with(n, Some(g), false)?;
                    let (ok, d) = one_per_class(&classes, &kept);
                    rep.push("sound and complete", format!("ais {n} {g}"), ok, d);
                }
                let uncovered = all
                    .iter()
                    .filter(|a| !AisSymmetry::ALL.iter().any(|&g| build_ais_set(g, &x).iter().all(|c| c.check(a))))
                    .count();
                rep.push("some image holds", format!("ais {n}"), uncovered == 0, format!("{uncovered} uncovered of {}", all.len()));
                let kept = series_solutions_with(n, None, true)?;
                let (ok, d) = one_per_class(&classes, &kept);
                rep.push("forced rule one per class", format!("ais {n}"), ok, d);
            }
            for k in 0..p.toys {
                let toy = toy_csp(p.seed.wrapping_add(k));
                let all = toy.brute_force();
                let classes: std::collections::BTreeSet<Vec<i32>> = all.iter().map(|a| toy.canonical(a)).collect();
                let sols = toy.enumerate(ToyMethod::Forced { patch: true }, ValueOrder::Lex, k)?;
                let canon: std::collections::BTreeSet<Vec<i32>> = sols.iter().map(|a| toy.canonical(a)).collect();
                let ok = canon == classes && sols.len() == classes.len();
                rep.push(
                    "forced rule with patch one per class",
                    toy.describe(),
                    ok,
                    format!("{} classes, {} kept", classes.len(), sols.len()),
                );
            }
        }
        Suite::Properness => {
            for &n in &p.series {
                let group = series_group(n);
                for g in AisSymmetry::ALL {
                    let kept = series_solutions_with(n, Some(g), false)?;
                    let fixed = kept
                        .iter()
                        .filter(|a| group.iter().any(|h| !h.is_identity() && h.apply_to_assignment(a) == **a))
                        .count();
                    rep.push("proper", format!("ais {n} {g}"), fixed == 0, format!("{fixed} of {} fixed by a symmetry", kept.len()));
                }
            }
        }
        Suite::SbdsSoundness => {
            for k in 0..p.toys {
                let toy = toy_csp(p.seed.wrapping_add(k));
                let all = toy.brute_force();
                let classes: std::collections::BTreeSet<Vec<i32>> = all.iter().map(|a| toy.canonical(a)).collect();
                let sols = toy.enumerate(ToyMethod::SbdsPair, ValueOrder::Lex, k)?;
                let canon: std::collections::BTreeSet<Vec<i32>> = sols.iter().map(|a| toy.canonical(a)).collect();
                let ok = canon == classes && sols.len() <= all.len();
                rep.push(
                    "sbds-pair at least one per class",
                    toy.describe(),
                    ok,
                    format!("{} classes, {} kept, {} solutions", classes.len(), sols.len(), all.len()),
                );
                if let Ok(full) = toy.enumerate(ToyMethod::SbdsFull, ValueOrder::Lex, k) {
                    rep.push(
                        "sbds full group one per class",
                        toy.describe(),
                        full.len() == classes.len(),
                        format!("{} classes, {} kept", classes.len(), full.len()),
                    );
                }
            }
        }
    }
    Ok(rep)
}
