//! Symmetry breaking during search.
//!
//! On each right branch `x != v` with partial assignment `A` on the decision
//! variables, every symmetry `g` of the monitor contributes the nogood
//! `not (g(A) and g(x = v))`, scoped to the subtree.

use std::collections::HashMap;

use crate::constraints::{Constraint, Entailment};
use crate::search::SearchMonitor;
use crate::store::{Conflict, PostMode, PropResult, Store, VarId};
use crate::symmetry::Symmetry;

pub struct Sbds {
    xs: Vec<VarId>,
    pos: HashMap<VarId, usize>,
    symmetries: Vec<Symmetry>,
    posted: usize,
}

impl Sbds {
    /// `symmetries` act on positions of `xs`. Usually generators only.
    pub fn new(xs: Vec<VarId>, symmetries: Vec<Symmetry>) -> Self {
        let pos = xs.iter().enumerate().map(|(i, &v)| (v, i)).collect();
        Sbds { xs, pos, symmetries, posted: 0 }
    }

    fn image(&self, g: &Symmetry, i: usize, v: i32) -> (VarId, i32) {
        (self.xs[g.var_perm()[i]], g.value_map().apply(v))
    }
}

impl SearchMonitor for Sbds {
    fn on_right_branch(&mut self, store: &mut Store, var: VarId, val: i32) -> PropResult {
        let Some(&p) = self.pos.get(&var) else {
            return Ok(());
        };
        let assigned: Vec<(usize, i32)> =
            self.xs.iter().enumerate().filter_map(|(i, &x)| store.domains().value(x).map(|v| (i, v))).collect();
        let mut nogoods = Vec::new();
        'sym: for g in &self.symmetries {
            let mut lits = Vec::new();
            for &(i, v) in assigned.iter().chain(std::iter::once(&(p, val))) {
                let (y, w) = self.image(g, i, v);
                if !store.domains().contains(y, w) {
                    continue 'sym;
                }
                if store.domains().value(y) != Some(w) {
                    lits.push((y, w));
                }
            }
            if lits.is_empty() {
                // g maps the whole node onto itself: the branch is already closed
                return Err(Conflict);
            }
            lits.sort();
            lits.dedup();
            let c = Constraint::Nogood(lits);
            if c.entailment(store.domains()) != Entailment::Entailed {
                nogoods.push(c);
            }
        }
        for c in nogoods {
            self.posted += 1;
            store.post(c, PostMode::Scoped)?;
        }
        Ok(())
    }

    fn posted(&self) -> usize {
        self.posted
    }
}
