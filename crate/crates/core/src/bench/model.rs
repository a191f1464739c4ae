//! Builds a searchable model for an instance and a symmetry-breaking method.

use std::time::Duration;

use rand::seq::IndexedRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::bench::ais::{diff_brancher, post_ais};
use crate::bench::instance::Instance;
use crate::constraints::Constraint;
use crate::error::{Error, Result};
use crate::forced::{ForcedPiecewise, ForcedSets};
use crate::sbds::Sbds;
use crate::search::{
    search, search_with_restarts, Brancher, Chain, Limits, Mode, Model, Objective, RestartPolicy, SearchResult,
    Sense, ValueOrder, VarOrder, VarValueBrancher,
};
use crate::static_sb::{build_ais_set, piecewise_chains, PiecewiseLayout, StaticStrategy};
use crate::store::{PostMode, Store, VarId};
use crate::symmetry::{pair_generators, AisSymmetry, Partitions, PiecewiseSymmetry};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, clap::ValueEnum, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Method {
    StaticLex,
    StaticAntilex,
    StaticRandom,
    Restarts,
    Dynamic,
    SbdsPair,
    None,
}

impl Method {
    pub const ALL: [Method; 7] = [
        Method::StaticLex,
        Method::StaticAntilex,
        Method::StaticRandom,
        Method::Restarts,
        Method::Dynamic,
        Method::SbdsPair,
        Method::None,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Method::StaticLex => "static-lex",
            Method::StaticAntilex => "static-antilex",
            Method::StaticRandom => "static-random",
            Method::Restarts => "restarts",
            Method::Dynamic => "dynamic",
            Method::SbdsPair => "sbds-pair",
            Method::None => "none",
        }
    }
}

#[derive(Clone, Copy, Debug)]
pub struct BuildOptions {
    pub method: Method,
    pub value_order: ValueOrder,
    pub seed: u64,
    /// Series only: which image of the set `static-lex` posts.
    pub ais_symmetry: Option<AisSymmetry>,
    /// Forced rule: commit to a full set at the first solution.
    pub patch: bool,
}

impl BuildOptions {
    pub fn new(method: Method, value_order: ValueOrder, seed: u64) -> Self {
        BuildOptions { method, value_order, seed, ais_symmetry: None, patch: true }
    }
}

/// Per-restart generator: stream `restart` of the seed.
fn restart_rng(seed: u64, restart: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(restart);
    rng
}

fn post_all(store: &mut Store, cs: Vec<Constraint>) {
    for c in cs {
        // a failing post leaves the root inconsistent, which search reports
        let _ = store.post(c, PostMode::Permanent);
    }
}

/// Model for `restart` (only the `restarts` method looks at it).
pub fn build_model(inst: &Instance, opts: &BuildOptions, restart: u64) -> Result<Model> {
    if opts.ais_symmetry.is_some() && (opts.method != Method::StaticLex || !matches!(inst, Instance::Ais { .. })) {
        return Err(Error::Config("--ais-symmetry applies to static-lex on the series family only".into()));
    }
    let mut model = match inst {
        Instance::Ais { n } => build_ais(*n, opts, restart)?,
        Instance::Coloring(_) | Instance::Concert(_) => build_piecewise(inst, opts, restart)?,
    };
    model.store.schedule_all();
    Ok(model)
}

fn build_ais(n: usize, opts: &BuildOptions, restart: u64) -> Result<Model> {
    if opts.value_order != ValueOrder::Lex {
        return Err(Error::Config("the series family branches on differences with a fixed value order".into()));
    }
    let mut store = Store::new();
    let v = post_ais(&mut store, n)?;
    let mut model = Model::new(store, diff_brancher(&v), v.x.clone());
    let pick = |rng: &mut ChaCha8Rng| *AisSymmetry::ALL.choose(rng).expect("four symmetries");
    let posted = match opts.method {
        Method::None => None,
        Method::StaticLex => Some(opts.ais_symmetry.unwrap_or(AisSymmetry::Identity)),
        Method::StaticAntilex => {
            return Err(Error::Config("static-antilex has no meaning for the series family".into()));
        }
        Method::StaticRandom => Some(pick(&mut ChaCha8Rng::seed_from_u64(opts.seed))),
        Method::Restarts => Some(pick(&mut restart_rng(opts.seed, restart))),
        Method::Dynamic => {
            model.monitor = Box::new(ForcedSets::for_ais(&v.x, opts.patch));
            None
        }
        Method::SbdsPair => {
            let gens = vec![AisSymmetry::Reverse.symmetry(n), AisSymmetry::Invert.symmetry(n)];
            model.monitor = Box::new(Sbds::new(v.x.clone(), gens));
            None
        }
    };
    if let Some(g) = posted {
        post_all(&mut model.store, build_ais_set(g, &v.x));
    }
    Ok(model)
}

fn build_piecewise(inst: &Instance, opts: &BuildOptions, restart: u64) -> Result<Model> {
    let mut store = Store::new();
    let (xs, var_parts, val_parts, objective) = match inst {
        Instance::Coloring(c) => {
            c.validate()?;
            let xs: Vec<VarId> = (0..c.n).map(|_| store.new_var(1, c.colors as i32)).collect();
            for &(u, v) in &c.edges {
                let _ = store.post(Constraint::ne(xs[u], xs[v]), PostMode::Permanent);
            }
            let count = store.new_var(1, c.colors as i32);
            let _ = store.post(Constraint::NValue { vars: xs.clone(), count }, PostMode::Permanent);
            let vals = Partitions::from_sizes(&[c.colors])?;
            (xs, c.var_parts.clone(), vals, Objective { var: count, sense: Sense::Minimize })
        }
        Instance::Concert(c) => {
            c.validate()?;
            let r = c.rejected();
            let xs: Vec<VarId> = (0..c.n()).map(|_| store.new_var(1, r)).collect();
            for i in 0..c.n() {
                for j in i + 1..c.n() {
                    if c.apps[i].overlaps(&c.apps[j]) {
                        let ne = Constraint::NotEqualUnless { x: xs[i], y: xs[j], except: r };
                        let _ = store.post(ne, PostMode::Permanent);
                    }
                }
            }
            let offers: Vec<i32> = c.apps.iter().map(|a| a.offer).collect();
            let total = store.new_var(0, offers.iter().sum());
            let profit = Constraint::Profit { vars: xs.clone(), offers, reject: r, total };
            let _ = store.post(profit, PostMode::Permanent);
            (xs, c.var_parts.clone(), c.value_parts(), Objective { var: total, sense: Sense::Maximize })
        }
        Instance::Ais { .. } => unreachable!(),
    };
    let branch_x = VarValueBrancher::new(xs.clone(), VarOrder::SmallestDomain, opts.value_order, opts.seed)
        .with_value_blocks(val_parts.clone(), 1);
    let branch_obj = VarValueBrancher::new(vec![objective.var], VarOrder::InOrder, ValueOrder::Lex, 0);
    let brancher: Box<dyn Brancher + Send> = Box::new(Chain(vec![Box::new(branch_x), Box::new(branch_obj)]));

    let layout = |store: &mut Store| PiecewiseLayout::post(store, xs.clone(), var_parts.clone(), val_parts.clone(), 1);
    let strategy = match opts.method {
        Method::StaticLex => Some(StaticStrategy::Lex.select(&var_parts, &val_parts, 1)),
        Method::StaticAntilex => Some(StaticStrategy::Antilex.select(&var_parts, &val_parts, 1)),
        Method::StaticRandom => Some(StaticStrategy::Random(opts.seed).select(&var_parts, &val_parts, 1)),
        Method::Restarts => {
            Some(PiecewiseSymmetry::sample(&var_parts, &val_parts, 1, &mut restart_rng(opts.seed, restart)))
        }
        _ => None,
    };
    let mut monitor: Option<Box<dyn crate::search::SearchMonitor + Send>> = None;
    if let Some(g) = strategy {
        let l = layout(&mut store)?;
        let chains = piecewise_chains(&l, &g);
        post_all(&mut store, chains);
    } else if opts.method == Method::Dynamic {
        let l = layout(&mut store)?;
        monitor = Some(Box::new(ForcedPiecewise::new(l, opts.patch)));
    } else if opts.method == Method::SbdsPair {
        monitor = Some(Box::new(Sbds::new(xs.clone(), pair_generators(&var_parts, &val_parts, 1))));
    }
    let mut model = Model::new(store, brancher, xs);
    model.objective = Some(objective);
    if let Some(m) = monitor {
        model.monitor = m;
    }
    Ok(model)
}

/// Search settings beyond the model itself.
#[derive(Clone, Copy, Debug)]
pub struct SolveOptions {
    pub mode: Mode,
    /// Required for `restarts`, rejected otherwise.
    pub cutoff: Option<u64>,
    /// Restart budget multiplier; `None` picks 1 for first-solution search
    /// and 1.5 for optimization.
    pub growth: Option<f64>,
    pub time: Option<Duration>,
}

impl SolveOptions {
    pub fn new(mode: Mode) -> Self {
        SolveOptions { mode, cutoff: None, growth: None, time: None }
    }
}

/// Default search mode of a family: first solution for the series,
/// optimization otherwise.
pub fn default_mode(inst: &Instance) -> Mode {
    match inst {
        Instance::Ais { .. } => Mode::First,
        _ => Mode::Optimize,
    }
}

pub fn solve(inst: &Instance, opts: &BuildOptions, s: &SolveOptions) -> Result<SearchResult> {
    if opts.method == Method::Restarts {
        let cutoff = s.cutoff.ok_or_else(|| Error::Config("restarts need a branch cutoff".into()))?;
        let growth = s.growth.unwrap_or(if s.mode == Mode::First { 1.0 } else { 1.5 });
        if growth < 1.0 || growth.is_nan() {
            return Err(Error::Config(format!("restart growth must be at least 1, got {growth}")));
        }
        let policy = RestartPolicy { cutoff, growth, time: s.time };
        return search_with_restarts(|r| build_model(inst, opts, r), s.mode, policy);
    }
    if s.cutoff.is_some() {
        return Err(Error::Config("a branch cutoff only applies to restarts".into()));
    }
    let mut model = build_model(inst, opts, 0)?;
    search(&mut model, s.mode, Limits { branches: None, time: s.time })
}
