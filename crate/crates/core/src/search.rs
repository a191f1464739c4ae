//! Depth-first binary search (`x = v` / `x != v`), branch and bound, and the
//! restart driver.
//!
//! Counting: every left decision and every right branch is one branch. A
//! backtrack is a failure of a node below the root; leaving a solution to
//! continue enumeration is not a backtrack.

use std::time::{Duration, Instant};

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::constraints::{CmpOp, Constraint, Term};
use crate::error::Result;
use crate::store::{Conflict, Domains, PostMode, PropResult, Store, VarId};
use crate::symmetry::Partitions;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "kebab-case")]
pub enum VarOrder {
    InOrder,
    SmallestDomain,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "kebab-case")]
pub enum ValueOrder {
    Lex,
    Antilex,
    Random,
}

impl ValueOrder {
    pub fn name(self) -> &'static str {
        match self {
            ValueOrder::Lex => "lex",
            ValueOrder::Antilex => "antilex",
            ValueOrder::Random => "random",
        }
    }
}

/// Chooses the next decision `var = val`, or `None` when every variable it
/// branches on is fixed.
pub trait Brancher {
    fn select(&mut self, d: &Domains) -> Option<(VarId, i32)>;
}

pub struct VarValueBrancher {
    vars: Vec<VarId>,
    var_order: VarOrder,
    value_order: ValueOrder,
    /// For antilex: value blocks are visited in ascending order, values
    /// within a block descending.
    value_blocks: Option<(Partitions, i32)>,
    rng: ChaCha8Rng,
}

impl VarValueBrancher {
    pub fn new(vars: Vec<VarId>, var_order: VarOrder, value_order: ValueOrder, seed: u64) -> Self {
        VarValueBrancher { vars, var_order, value_order, value_blocks: None, rng: ChaCha8Rng::seed_from_u64(seed) }
    }

    pub fn with_value_blocks(mut self, blocks: Partitions, value_base: i32) -> Self {
        self.value_blocks = Some((blocks, value_base));
        self
    }

    fn pick_value(&mut self, d: &Domains, x: VarId) -> i32 {
        match self.value_order {
            ValueOrder::Lex => d.min(x),
            ValueOrder::Antilex => match &self.value_blocks {
                None => d.max(x),
                Some((blocks, base)) => {
                    let vals = d.dom(x).values();
                    let block = |v: i32| {
                        let k = v - base;
                        if k >= 0 && (k as usize) < blocks.len() {
                            blocks.block_of(k as usize)
                        } else {
                            usize::MAX
                        }
                    };
                    *vals.iter().min_by_key(|&&v| (block(v), std::cmp::Reverse(v))).unwrap()
                }
            },
            ValueOrder::Random => {
                let vals = d.dom(x).values();
                vals[self.rng.random_range(0..vals.len())]
            }
        }
    }
}

impl Brancher for VarValueBrancher {
    fn select(&mut self, d: &Domains) -> Option<(VarId, i32)> {
        let x = match self.var_order {
            VarOrder::InOrder => self.vars.iter().copied().find(|&v| !d.is_fixed(v))?,
            VarOrder::SmallestDomain => {
                let mut best: Option<(u64, VarId)> = None;
                for &v in &self.vars {
                    let s = d.size(v);
                    if s > 1 && best.is_none_or(|(bs, _)| s < bs) {
                        best = Some((s, v));
                    }
                }
                best?.1
            }
        };
        Some((x, self.pick_value(d, x)))
    }
}

/// Tries branchers in turn: the first that still has a decision wins.
pub struct Chain(pub Vec<Box<dyn Brancher + Send>>);

impl Brancher for Chain {
    fn select(&mut self, d: &Domains) -> Option<(VarId, i32)> {
        self.0.iter_mut().find_map(|b| b.select(d))
    }
}

/// Plays a fixed list of decisions (skipping any already decided by
/// propagation), then defers to `then`.
pub struct Scripted {
    pub script: Vec<(VarId, i32)>,
    pub then: Box<dyn Brancher + Send>,
}

impl Brancher for Scripted {
    fn select(&mut self, d: &Domains) -> Option<(VarId, i32)> {
        for &(x, v) in &self.script {
            if !d.is_fixed(x) && d.contains(x, v) {
                return Some((x, v));
            }
        }
        self.then.select(d)
    }
}

/// Hooks into search. All methods default to doing nothing.
pub trait SearchMonitor {
    /// Called at every propagation fixpoint. Returns `true` if it posted
    /// anything, in which case propagation runs again.
    fn on_fixpoint(&mut self, _store: &mut Store) -> Result<bool, Conflict> {
        Ok(false)
    }

    /// Called when the right branch `var != val` opens, after its level is
    /// pushed and before the value is removed. The domains are those of the
    /// parent node.
    fn on_right_branch(&mut self, _store: &mut Store, _var: VarId, _val: i32) -> PropResult {
        Ok(())
    }

    /// Called at each solution, before search moves on.
    fn on_solution(&mut self, _store: &mut Store) -> crate::error::Result<()> {
        Ok(())
    }

    /// Number of constraints this monitor has posted so far.
    fn posted(&self) -> usize {
        0
    }

    /// Log of what was posted, one line per constraint.
    fn trace(&self) -> &[String] {
        &[]
    }
}

pub struct NoMonitor;

impl SearchMonitor for NoMonitor {}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Sense {
    Minimize,
    Maximize,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Objective {
    pub var: VarId,
    pub sense: Sense,
}

impl Objective {
    fn better_than(&self, v: i32) -> Constraint {
        match self.sense {
            Sense::Minimize => Constraint::cmp(Term::var(self.var), CmpOp::Lt, Term::Const(v)),
            Sense::Maximize => Constraint::cmp(Term::Const(v), CmpOp::Lt, Term::var(self.var)),
        }
    }

    fn improves(&self, new: i32, old: i32) -> bool {
        match self.sense {
            Sense::Minimize => new < old,
            Sense::Maximize => new > old,
        }
    }
}

/// A ready-to-search model.
pub struct Model {
    pub store: Store,
    pub brancher: Box<dyn Brancher + Send>,
    pub monitor: Box<dyn SearchMonitor + Send>,
    pub objective: Option<Objective>,
    /// Variables reported in solutions.
    pub output: Vec<VarId>,
}

impl Model {
    pub fn new(store: Store, brancher: Box<dyn Brancher + Send>, output: Vec<VarId>) -> Self {
        Model { store, brancher, monitor: Box::new(NoMonitor), objective: None, output }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Mode {
    /// Stop at the first solution.
    First,
    /// Enumerate every solution.
    All,
    /// Branch and bound on the model's objective.
    Optimize,
}

#[derive(Clone, Copy, Debug, Default)]
pub struct Limits {
    pub branches: Option<u64>,
    pub time: Option<Duration>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    /// Search space exhausted (or first solution found in `First` mode).
    Complete,
    BranchLimit,
    TimeLimit,
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct SearchStats {
    pub branches: u64,
    pub backtracks: u64,
    pub restarts: u64,
    pub solutions: u64,
    pub best_objective: Option<i32>,
    pub proved_optimal: bool,
    pub wall_time: f64,
}

#[derive(Clone, Debug)]
pub struct SearchResult {
    pub status: Status,
    pub stats: SearchStats,
    /// Solutions over `Model::output`, in the order found. In `Optimize`
    /// mode only improving solutions are listed.
    pub solutions: Vec<Vec<i32>>,
}

impl SearchResult {
    pub fn best(&self) -> Option<&Vec<i32>> {
        self.solutions.last()
    }
}

struct Frame {
    var: VarId,
    val: i32,
    right: bool,
}

fn fixpoint(store: &mut Store, monitor: &mut dyn SearchMonitor) -> PropResult {
    loop {
        store.propagate()?;
        if !monitor.on_fixpoint(store)? {
            return Ok(());
        }
    }
}

/// Runs one depth-first search on `model`.
pub fn search(model: &mut Model, mode: Mode, limits: Limits) -> Result<SearchResult> {
    let start = Instant::now();
    let mut stats = SearchStats::default();
    let mut solutions = Vec::new();
    let status = run(model, mode, limits, start, &mut stats, &mut solutions)?;
    stats.wall_time = start.elapsed().as_secs_f64();
    stats.proved_optimal = mode == Mode::Optimize && status == Status::Complete && stats.best_objective.is_some();
    Ok(SearchResult { status, stats, solutions })
}

fn run(
    model: &mut Model,
    mode: Mode,
    limits: Limits,
    start: Instant,
    stats: &mut SearchStats,
    solutions: &mut Vec<Vec<i32>>,
) -> Result<Status> {
    let Model { store, brancher, monitor, objective, output } = model;
    let monitor = monitor.as_mut();
    let base = store.level();
    let objective = if mode == Mode::Optimize {
        Some(objective.ok_or_else(|| crate::Error::Config("optimization requires an objective".into()))?)
    } else {
        None
    };
    let mut stack: Vec<Frame> = Vec::new();
    let mut ok = fixpoint(store, monitor).is_ok();
    if !ok {
        return Ok(Status::Complete);
    }
    loop {
        if ok {
            match brancher.select(store.domains()) {
                None => {
                    let d = store.domains();
                    solutions.push(output.iter().map(|&v| d.min(v)).collect());
                    stats.solutions += 1;
                    if let Some(obj) = objective {
                        let v = d.min(obj.var);
                        if stats.best_objective.is_none_or(|b| obj.improves(v, b)) {
                            stats.best_objective = Some(v);
                        }
                    }
                    monitor.on_solution(store)?;
                    match mode {
                        Mode::First => return Ok(Status::Complete),
                        Mode::All => {}
                        Mode::Optimize => {
                            let obj = objective.unwrap();
                            let _ = store.post(obj.better_than(stats.best_objective.unwrap()), PostMode::Permanent);
                        }
                    }
                    // leave the solution without counting a backtrack
                    match backtrack(store, monitor, &mut stack, stats, base, limits, start) {
                        Ok(true) => ok = true,
                        Ok(false) => return Ok(Status::Complete),
                        Err(Stop(s)) => return Ok(s),
                    }
                }
                Some((x, v)) => {
                    if let Some(s) = check_limits(stats, limits, start) {
                        return Ok(s);
                    }
                    stats.branches += 1;
                    store.push_level();
                    stack.push(Frame { var: x, val: v, right: false });
                    ok = store.domains_mut().assign(x, v).is_ok() && fixpoint(store, monitor).is_ok();
                }
            }
        } else {
            stats.backtracks += 1;
            match backtrack(store, monitor, &mut stack, stats, base, limits, start) {
                Ok(true) => ok = true,
                Ok(false) => return Ok(Status::Complete),
                Err(Stop(s)) => return Ok(s),
            }
        }
    }
}

struct Stop(Status);

/// Undoes nodes until a left decision can be refuted and its right branch
/// reaches a consistent fixpoint. Returns `false` when the tree is exhausted.
fn backtrack(
    store: &mut Store,
    monitor: &mut dyn SearchMonitor,
    stack: &mut Vec<Frame>,
    stats: &mut SearchStats,
    base: usize,
    limits: Limits,
    start: Instant,
) -> Result<bool, Stop> {
    loop {
        let Some(f) = stack.pop() else {
            return Ok(false);
        };
        store.pop_level();
        debug_assert!(store.level() >= base);
        if f.right {
            continue;
        }
        if let Some(s) = check_limits(stats, limits, start) {
            return Err(Stop(s));
        }
        stats.branches += 1;
        store.push_level();
        stack.push(Frame { var: f.var, val: f.val, right: true });
        let consistent = monitor.on_right_branch(store, f.var, f.val).is_ok()
            && store.domains_mut().remove(f.var, f.val).is_ok()
            && fixpoint(store, monitor).is_ok();
        if consistent {
            return Ok(true);
        }
        stats.backtracks += 1;
    }
}

fn check_limits(stats: &SearchStats, limits: Limits, start: Instant) -> Option<Status> {
    if limits.branches.is_some_and(|b| stats.branches >= b) {
        return Some(Status::BranchLimit);
    }
    if let Some(t) = limits.time {
        if stats.branches.is_multiple_of(256) && start.elapsed() >= t {
            return Some(Status::TimeLimit);
        }
    }
    None
}

#[derive(Clone, Copy, Debug)]
pub struct RestartPolicy {
    /// Branch budget of the first run.
    pub cutoff: u64,
    /// Budget multiplier applied after each restart.
    pub growth: f64,
    /// Overall wall-clock budget.
    pub time: Option<Duration>,
}

/// Repeatedly builds a fresh model with `factory(restart_index)` and searches
/// it under the current cutoff. In `First` mode the driver stops at the first
/// solution; in `Optimize` mode the best objective found so far is posted
/// into each new model and the driver stops once a run completes.
pub fn search_with_restarts(
    mut factory: impl FnMut(u64) -> Result<Model>,
    mode: Mode,
    policy: RestartPolicy,
) -> Result<SearchResult> {
    if policy.cutoff == 0 {
        return Err(crate::Error::Config("restart cutoff must be positive".into()));
    }
    if mode == Mode::All {
        return Err(crate::Error::Config("restarts do not support enumerating all solutions".into()));
    }
    let start = Instant::now();
    let mut total = SearchStats::default();
    let mut solutions: Vec<Vec<i32>> = Vec::new();
    let mut cutoff = policy.cutoff as f64;
    for restart in 0.. {
        let mut model = factory(restart)?;
        if let (Some(best), Some(obj)) = (total.best_objective, model.objective) {
            if model.store.post(obj.better_than(best), PostMode::Permanent).is_err() {
                total.restarts = restart;
                total.proved_optimal = true;
                break;
            }
        }
        let remaining = policy.time.map(|t| t.saturating_sub(start.elapsed()));
        let limits = Limits { branches: Some(cutoff.round() as u64), time: remaining };
        let res = search(&mut model, mode, limits)?;
        total.branches += res.stats.branches;
        total.backtracks += res.stats.backtracks;
        total.solutions += res.stats.solutions;
        total.restarts = restart;
        if let Some(v) = res.stats.best_objective {
            total.best_objective = Some(v);
        }
        solutions.extend(res.solutions);
        let done = match mode {
            Mode::First => res.stats.solutions > 0 || res.status == Status::Complete,
            _ => res.status == Status::Complete,
        };
        if done {
            total.proved_optimal = mode == Mode::Optimize && total.best_objective.is_some();
            break;
        }
        if res.status == Status::TimeLimit || policy.time.is_some_and(|t| start.elapsed() >= t) {
            total.wall_time = start.elapsed().as_secs_f64();
            return Ok(SearchResult { status: Status::TimeLimit, stats: total, solutions });
        }
        cutoff *= policy.growth;
    }
    total.wall_time = start.elapsed().as_secs_f64();
    Ok(SearchResult { status: Status::Complete, stats: total, solutions })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn in_order(vars: Vec<VarId>) -> Box<dyn Brancher + Send> {
        Box::new(VarValueBrancher::new(vars, VarOrder::InOrder, ValueOrder::Lex, 0))
    }

    #[test]
    fn enumerates_all_assignments() {
        let mut s = Store::new();
        let x: Vec<VarId> = (0..3).map(|_| s.new_var(0, 2)).collect();
        let mut m = Model::new(s, in_order(x.clone()), x);
        let r = search(&mut m, Mode::All, Limits::default()).unwrap();
        assert_eq!(r.solutions.len(), 27);
        assert_eq!(r.stats.backtracks, 0);
        let mut sorted = r.solutions.clone();
        sorted.sort();
        sorted.dedup();
        assert_eq!(sorted.len(), 27);
    }

    #[test]
    fn root_failure_has_no_solutions() {
        let mut s = Store::new();
        let a = s.new_var(0, 3);
        let b = s.new_var(0, 3);
        s.post(Constraint::lt(a, b), PostMode::Permanent).unwrap();
        let _ = s.post(Constraint::lt(b, a), PostMode::Permanent);
        let mut m = Model::new(s, in_order(vec![a, b]), vec![a, b]);
        let r = search(&mut m, Mode::All, Limits::default()).unwrap();
        assert_eq!(r.status, Status::Complete);
        assert!(r.solutions.is_empty());
    }

    #[test]
    fn maximizes_a_single_variable() {
        let mut s = Store::new();
        let x = s.new_var(1, 5);
        let mut m = Model::new(s, in_order(vec![x]), vec![x]);
        m.objective = Some(Objective { var: x, sense: Sense::Maximize });
        let r = search(&mut m, Mode::Optimize, Limits::default()).unwrap();
        assert_eq!(r.stats.best_objective, Some(5));
        assert!(r.stats.proved_optimal);
    }

    #[test]
    fn branch_limit_interrupts() {
        let mut s = Store::new();
        let x: Vec<VarId> = (0..6).map(|_| s.new_var(0, 5)).collect();
        s.post(Constraint::AllDifferent(x.clone()), PostMode::Permanent).unwrap();
        // pigeonhole: 6 variables, 5 usable values
        for &v in &x {
            s.post(Constraint::cmp(Term::var(v), CmpOp::Le, Term::Const(4)), PostMode::Permanent).ok();
        }
        let mut m = Model::new(s, in_order(x.clone()), x);
        let r = search(&mut m, Mode::First, Limits { branches: Some(3), time: None }).unwrap();
        assert!(matches!(r.status, Status::Complete | Status::BranchLimit));
        assert!(r.stats.branches <= 3);
    }

    #[test]
    fn restart_cutoff_must_be_positive() {
        let res = search_with_restarts(
            |_| unreachable!(),
            Mode::First,
            RestartPolicy { cutoff: 0, growth: 1.0, time: None },
        );
        assert!(res.is_err());
    }

    #[test]
    fn branches_dominate_backtracks() {
        let mut s = Store::new();
        let x: Vec<VarId> = (0..4).map(|_| s.new_var(0, 3)).collect();
        s.post(Constraint::AllDifferent(x.clone()), PostMode::Permanent).unwrap();
        s.post(Constraint::lt(x[3], x[0]), PostMode::Permanent).unwrap();
        let mut m = Model::new(s, in_order(x.clone()), x);
        let r = search(&mut m, Mode::All, Limits::default()).unwrap();
        assert_eq!(r.solutions.len(), 12);
        assert!(r.stats.branches >= r.stats.backtracks);
    }
}
