//! Trailed variable store and the propagation queue.
//!
//! Every domain change made below the root is recorded on the trail together
//! with the previous domain, at most once per variable per level. Popping a
//! level restores the recorded domains and removes the propagators that were
//! posted in scoped mode at that level. Permanent propagators and
//! non-backtrackable variables survive restoration.

use std::collections::VecDeque;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::constraints::Constraint;
use crate::domain::Domain;

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct VarId(pub u32);

impl VarId {
    #[inline]
    pub fn index(self) -> usize {
        self.0 as usize
    }
}

impl fmt::Display for VarId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "v{}", self.0)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct PropId(pub u32);

/// A domain wipe-out. Normal search control flow, not an error.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Conflict;

pub type PropResult = Result<(), Conflict>;

/// How long a posted constraint lives.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum PostMode {
    /// Survives backtracking (monotone posting). At the root this is the
    /// ordinary way to post a model constraint.
    Permanent,
    /// Removed when the level it was posted at is popped.
    Scoped,
}

/// Domains plus the trail that restores them.
pub struct Domains {
    doms: Vec<Domain>,
    backtrackable: Vec<bool>,
    saved_at: Vec<u64>,
    trail: Vec<(VarId, Domain)>,
    epoch: u64,
    changed: Vec<VarId>,
}

impl Domains {
    fn new() -> Self {
        Domains {
            doms: Vec::new(),
            backtrackable: Vec::new(),
            saved_at: Vec::new(),
            trail: Vec::new(),
            epoch: 0,
            changed: Vec::new(),
        }
    }

    pub fn len(&self) -> usize {
        self.doms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.doms.is_empty()
    }

    #[inline]
    pub fn dom(&self, v: VarId) -> &Domain {
        &self.doms[v.index()]
    }

    #[inline]
    pub fn min(&self, v: VarId) -> i32 {
        self.doms[v.index()].min()
    }

    #[inline]
    pub fn max(&self, v: VarId) -> i32 {
        self.doms[v.index()].max()
    }

    #[inline]
    pub fn size(&self, v: VarId) -> u64 {
        self.doms[v.index()].size()
    }

    #[inline]
    pub fn is_fixed(&self, v: VarId) -> bool {
        self.doms[v.index()].is_fixed()
    }

    #[inline]
    pub fn contains(&self, v: VarId, val: i32) -> bool {
        self.doms[v.index()].contains(val)
    }

    /// The value of a fixed variable.
    pub fn value(&self, v: VarId) -> Option<i32> {
        let d = &self.doms[v.index()];
        d.is_fixed().then(|| d.min())
    }

    pub fn is_backtrackable(&self, v: VarId) -> bool {
        self.backtrackable[v.index()]
    }

    fn modify(&mut self, v: VarId, f: impl FnOnce(&mut Domain) -> bool) -> Result<bool, Conflict> {
        let i = v.index();
        let mut d = self.doms[i];
        if !f(&mut d) {
            return Ok(false);
        }
        if self.backtrackable[i] && self.saved_at[i] != self.epoch {
            self.saved_at[i] = self.epoch;
            self.trail.push((v, self.doms[i]));
        }
        self.doms[i] = d;
        self.changed.push(v);
        if d.is_empty() {
            Err(Conflict)
        } else {
            Ok(true)
        }
    }

    pub fn remove(&mut self, v: VarId, val: i32) -> Result<bool, Conflict> {
        self.modify(v, |d| d.remove(val))
    }

    pub fn set_min(&mut self, v: VarId, lo: i32) -> Result<bool, Conflict> {
        self.modify(v, |d| d.set_min(lo))
    }

    pub fn set_max(&mut self, v: VarId, hi: i32) -> Result<bool, Conflict> {
        self.modify(v, |d| d.set_max(hi))
    }

    pub fn assign(&mut self, v: VarId, val: i32) -> Result<bool, Conflict> {
        self.modify(v, |d| d.assign(val))
    }

    pub fn retain(&mut self, v: VarId, keep: impl FnMut(i32) -> bool) -> Result<bool, Conflict> {
        self.modify(v, |d| d.retain(keep))
    }
}

struct Level {
    trail_len: usize,
    prop_trail_len: usize,
    epoch: u64,
}

/// Variables, posted propagators and the search-level stack.
pub struct Store {
    dom: Domains,
    props: Vec<Option<Constraint>>,
    watchers: Vec<Vec<PropId>>,
    queue: VecDeque<PropId>,
    queued: Vec<bool>,
    levels: Vec<Level>,
    prop_trail: Vec<PropId>,
    permanent: Vec<(PropId, usize)>,
    non_backtrackable: Vec<VarId>,
    next_epoch: u64,
    propagations: u64,
}

impl Default for Store {
    fn default() -> Self {
        Self::new()
    }
}

impl Store {
    pub fn new() -> Self {
        Store {
            dom: Domains::new(),
            props: Vec::new(),
            watchers: Vec::new(),
            queue: VecDeque::new(),
            queued: Vec::new(),
            levels: Vec::new(),
            prop_trail: Vec::new(),
            permanent: Vec::new(),
            non_backtrackable: Vec::new(),
            next_epoch: 1,
            propagations: 0,
        }
    }

    pub fn new_var(&mut self, lo: i32, hi: i32) -> VarId {
        self.new_var_with(Domain::new(lo, hi))
    }

    pub fn new_var_with(&mut self, d: Domain) -> VarId {
        let id = VarId(self.dom.doms.len() as u32);
        self.dom.doms.push(d);
        self.dom.backtrackable.push(true);
        self.dom.saved_at.push(0);
        self.watchers.push(Vec::new());
        id
    }

    /// Marks a variable as non-backtrackable: its changes are never undone.
    pub fn set_non_backtrackable(&mut self, v: VarId) {
        if self.dom.backtrackable[v.index()] {
            self.dom.backtrackable[v.index()] = false;
            self.non_backtrackable.push(v);
        }
    }

    pub fn domains(&self) -> &Domains {
        &self.dom
    }

    /// Direct domain access for branching decisions. Callers must run
    /// [`Store::propagate`] afterwards.
    pub fn domains_mut(&mut self) -> &mut Domains {
        &mut self.dom
    }

    pub fn num_vars(&self) -> usize {
        self.dom.len()
    }

    pub fn level(&self) -> usize {
        self.levels.len()
    }

    pub fn propagations(&self) -> u64 {
        self.propagations
    }

    /// Number of live propagators.
    pub fn num_propagators(&self) -> usize {
        self.props.iter().filter(|p| p.is_some()).count()
    }

    pub fn constraint(&self, p: PropId) -> Option<&Constraint> {
        self.props.get(p.0 as usize).and_then(|c| c.as_ref())
    }

    /// Registers `c`, runs it once, and queues watchers of anything it
    /// pruned. A `Conflict` means the constraint failed immediately.
    pub fn post(&mut self, c: Constraint, mode: PostMode) -> Result<PropId, Conflict> {
        let vars = c.vars();
        for v in &vars {
            assert!(v.index() < self.dom.len(), "constraint refers to unknown variable {v}");
        }
        let pid = PropId(self.props.len() as u32);
        self.props.push(Some(c));
        self.queued.push(false);
        let mut seen = vars.clone();
        seen.sort_unstable();
        seen.dedup();
        for v in seen {
            self.watchers[v.index()].push(pid);
        }
        match mode {
            PostMode::Scoped => self.prop_trail.push(pid),
            PostMode::Permanent => {
                if self.level() > 0 {
                    self.permanent.push((pid, self.level()));
                }
            }
        }
        self.run_one(pid)?;
        Ok(pid)
    }

    fn enqueue(&mut self, p: PropId) {
        let i = p.0 as usize;
        if !self.queued[i] {
            self.queued[i] = true;
            self.queue.push_back(p);
        }
    }

    fn schedule_changed(&mut self, except: Option<PropId>) {
        let changed = std::mem::take(&mut self.dom.changed);
        for v in &changed {
            for k in 0..self.watchers[v.index()].len() {
                let w = self.watchers[v.index()][k];
                if Some(w) != except {
                    self.enqueue(w);
                }
            }
        }
        let mut changed = changed;
        changed.clear();
        self.dom.changed = changed;
    }

    fn run_one(&mut self, pid: PropId) -> PropResult {
        self.schedule_changed(None);
        let res = match &self.props[pid.0 as usize] {
            Some(c) => {
                self.propagations += 1;
                c.propagate(&mut self.dom)
            }
            None => Ok(()),
        };
        if res.is_err() {
            self.dom.changed.clear();
            self.clear_queue();
            return res;
        }
        self.schedule_changed(Some(pid));
        Ok(())
    }

    fn clear_queue(&mut self) {
        while let Some(p) = self.queue.pop_front() {
            self.queued[p.0 as usize] = false;
        }
    }

    /// Queues every live propagator.
    pub fn schedule_all(&mut self) {
        for i in 0..self.props.len() {
            if self.props[i].is_some() {
                self.enqueue(PropId(i as u32));
            }
        }
    }

    /// Queues the watchers of variables changed through [`Store::domains_mut`].
    pub fn notify_changes(&mut self) {
        self.schedule_changed(None);
    }

    /// Runs queued propagators until none can prune further.
    pub fn propagate(&mut self) -> PropResult {
        self.schedule_changed(None);
        while let Some(p) = self.queue.pop_front() {
            self.queued[p.0 as usize] = false;
            self.run_one(p)?;
        }
        Ok(())
    }

    pub fn push_level(&mut self) {
        self.levels.push(Level {
            trail_len: self.dom.trail.len(),
            prop_trail_len: self.prop_trail.len(),
            epoch: self.dom.epoch,
        });
        self.dom.epoch = self.next_epoch;
        self.next_epoch += 1;
    }

    /// Restores the state in force when the matching [`Store::push_level`]
    /// was called, except for permanent propagators and non-backtrackable
    /// variables.
    pub fn pop_level(&mut self) {
        let lvl = self.levels.pop().expect("pop_level at root");
        while self.dom.trail.len() > lvl.trail_len {
            let (v, d) = self.dom.trail.pop().unwrap();
            self.dom.doms[v.index()] = d;
        }
        self.dom.epoch = lvl.epoch;
        self.dom.changed.clear();
        self.clear_queue();
        while self.prop_trail.len() > lvl.prop_trail_len {
            let pid = self.prop_trail.pop().unwrap();
            self.remove_prop(pid);
        }
        let here = self.level();
        for k in 0..self.permanent.len() {
            let (pid, at) = self.permanent[k];
            if at > here {
                self.permanent[k].1 = here;
                self.enqueue(pid);
            }
        }
        for k in 0..self.non_backtrackable.len() {
            let v = self.non_backtrackable[k].index();
            for j in 0..self.watchers[v].len() {
                let w = self.watchers[v][j];
                self.enqueue(w);
            }
        }
    }

    /// Pops levels until `level` is current.
    pub fn pop_to(&mut self, level: usize) {
        while self.level() > level {
            self.pop_level();
        }
    }

    fn remove_prop(&mut self, pid: PropId) {
        let i = pid.0 as usize;
        if let Some(c) = self.props[i].take() {
            let mut vars = c.vars();
            vars.sort_unstable();
            vars.dedup();
            for v in vars {
                let list = &mut self.watchers[v.index()];
                if let Some(pos) = list.iter().rposition(|&w| w == pid) {
                    list.remove(pos);
                }
            }
        }
        while matches!(self.props.last(), Some(None)) {
            self.props.pop();
            self.queued.pop();
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::constraints::{CmpOp, Term};

    fn lt(x: VarId, y: VarId) -> Constraint {
        Constraint::cmp(Term::var(x), CmpOp::Lt, Term::var(y))
    }

    #[test]
    fn restore_is_exact() {
        let mut s = Store::new();
        let x = s.new_var(0, 9);
        let y = s.new_var(0, 9);
        s.post(lt(x, y), PostMode::Permanent).unwrap();
        s.propagate().unwrap();
        let before: Vec<Domain> = (0..2).map(|i| *s.domains().dom(VarId(i))).collect();
        s.push_level();
        s.domains_mut().assign(y, 3).unwrap();
        s.propagate().unwrap();
        assert_eq!(s.domains().max(x), 2);
        s.push_level();
        s.domains_mut().remove(x, 0).unwrap();
        s.propagate().unwrap();
        s.pop_level();
        s.pop_level();
        let after: Vec<Domain> = (0..2).map(|i| *s.domains().dom(VarId(i))).collect();
        assert_eq!(before, after);
    }

    #[test]
    fn scoped_props_vanish_and_permanent_survive() {
        let mut s = Store::new();
        let x = s.new_var(0, 5);
        let y = s.new_var(0, 5);
        let z = s.new_var(0, 5);
        s.push_level();
        s.post(lt(x, y), PostMode::Scoped).unwrap();
        s.post(lt(y, z), PostMode::Permanent).unwrap();
        s.propagate().unwrap();
        assert_eq!(s.domains().min(y), 1);
        s.pop_level();
        // the permanent constraint is re-run at the restored level
        s.propagate().unwrap();
        assert_eq!(s.domains().min(y), 0);
        assert_eq!(s.domains().max(y), 4);
        assert_eq!(s.domains().min(z), 1);
        assert_eq!(s.num_propagators(), 1);
    }

    #[test]
    fn non_backtrackable_changes_survive() {
        let mut s = Store::new();
        let b = s.new_var(0, 1);
        let x = s.new_var(0, 5);
        s.set_non_backtrackable(b);
        s.push_level();
        s.domains_mut().assign(b, 1).unwrap();
        s.domains_mut().assign(x, 2).unwrap();
        s.pop_level();
        assert_eq!(s.domains().value(b), Some(1));
        assert!(!s.domains().is_fixed(x));
    }

    #[test]
    fn immediate_failure_on_post() {
        let mut s = Store::new();
        let x = s.new_var(3, 3);
        let y = s.new_var(1, 1);
        assert_eq!(s.post(lt(x, y), PostMode::Permanent), Err(Conflict));
    }
}
