//! Dynamic posting by the forced symmetry rule.
//!
//! A candidate constraint is posted once it is entailed, some symmetry that
//! owns it is still consistent with what has been posted, and every
//! consistent symmetry that does not own it is already dead in the current
//! state. Posts are permanent.

use std::collections::BTreeSet;

use crate::constraints::{Constraint, Entailment};
use crate::error::{Error, Result};
use crate::search::SearchMonitor;
use crate::static_sb::{build_ais_set, PiecewiseLayout};
use crate::store::{Conflict, PostMode, Store, VarId};
use crate::symmetry::AisSymmetry;

/// Forced rule over an explicitly enumerated family of symmetric sets
/// `g_1(S), ..., g_k(S)` (the all-interval-series group).
pub struct ForcedSets {
    /// Normalized `g(S)` for each group element, in enumeration order.
    sets: Vec<Vec<Constraint>>,
    names: Vec<String>,
    posted: Vec<Constraint>,
    patch: bool,
    trace: Vec<String>,
}

impl ForcedSets {
    pub fn new(sets: Vec<Vec<Constraint>>, names: Vec<String>, patch: bool) -> Self {
        let sets = sets.into_iter().map(|s| s.iter().map(|c| c.normalized()).collect()).collect();
        ForcedSets { sets, names, posted: Vec::new(), patch, trace: Vec::new() }
    }

    /// The four images of the series set over `x`.
    pub fn for_ais(x: &[VarId], patch: bool) -> Self {
        let sets = AisSymmetry::ALL.iter().map(|&g| build_ais_set(g, x)).collect();
        let names = AisSymmetry::ALL.iter().map(|g| g.name().to_string()).collect();
        Self::new(sets, names, patch)
    }

    /// Names of the sets still consistent with what has been posted.
    pub fn consistent_names(&self) -> Vec<&str> {
        self.consistent().into_iter().map(|g| self.names[g].as_str()).collect()
    }

    /// A symmetry is consistent when every posted constraint belongs to its set.
    pub fn consistent(&self) -> Vec<usize> {
        (0..self.sets.len()).filter(|&g| self.posted.iter().all(|c| self.sets[g].contains(c))).collect()
    }

    fn alive(&self, g: usize, store: &Store) -> bool {
        self.sets[g].iter().all(|c| c.entailment(store.domains()) != Entailment::DisEntailed)
    }

    pub fn posted_constraints(&self) -> &[Constraint] {
        &self.posted
    }

    pub fn set_names(&self) -> &[String] {
        &self.names
    }
}

impl SearchMonitor for ForcedSets {
    fn on_fixpoint(&mut self, store: &mut Store) -> Result<bool, Conflict> {
        let consistent = self.consistent();
        let mut seen = BTreeSet::new();
        for &g in &consistent {
            for (k, c) in self.sets[g].iter().enumerate() {
                if self.posted.contains(c) || !seen.insert((g, k)) {
                    continue;
                }
                if c.entailment(store.domains()) != Entailment::Entailed {
                    continue;
                }
                let blocked: Vec<usize> = consistent
                    .iter()
                    .copied()
                    .filter(|&h| !self.sets[h].contains(c) && self.alive(h, store))
                    .collect();
                if !blocked.is_empty() {
                    continue;
                }
                let c = c.clone();
                self.trace.push(format!("post {c}"));
                self.posted.push(c.clone());
                store.post(c, PostMode::Permanent)?;
                return Ok(true);
            }
        }
        Ok(false)
    }

    fn on_solution(&mut self, store: &mut Store) -> Result<()> {
        if !self.patch {
            return Ok(());
        }
        let chosen = self
            .consistent()
            .into_iter()
            .find(|&g| self.sets[g].iter().all(|c| c.entailment(store.domains()) == Entailment::Entailed))
            .ok_or_else(|| Error::Internal("no consistent symmetry satisfied by the solution".into()))?;
        for c in self.sets[chosen].clone() {
            if !self.posted.contains(&c) {
                self.trace.push(format!("patch {c}"));
                self.posted.push(c.clone());
                let _ = store.post(c, PostMode::Permanent);
            }
        }
        Ok(())
    }

    fn posted(&self) -> usize {
        self.posted.len()
    }

    fn trace(&self) -> &[String] {
        &self.trace
    }
}

/// Forced rule for piecewise interchangeability. Symmetries are never
/// enumerated: the consistent ones are the linear extensions of the
/// committed precedences within each block.
pub struct ForcedPiecewise {
    layout: PiecewiseLayout,
    /// `var_before[i][j]`: `X_i <= X_j` is committed (transitively closed).
    var_before: Vec<Vec<bool>>,
    /// `val_before[j][k]`: `sig(j) >=lex sig(k)` is committed.
    val_before: Vec<Vec<bool>>,
    patch: bool,
    posted: usize,
    trace: Vec<String>,
}

impl ForcedPiecewise {
    pub fn new(layout: PiecewiseLayout, patch: bool) -> Self {
        let n = layout.var_parts.len();
        let m = layout.val_parts.len();
        ForcedPiecewise { var_before: vec![vec![false; n]; n], val_before: vec![vec![false; m]; m], layout, patch, posted: 0, trace: Vec::new() }
    }

    fn commit(rel: &mut [Vec<bool>], i: usize, j: usize) {
        // close transitively: everything before i now precedes everything after j
        let n = rel.len();
        let pre: Vec<usize> = (0..n).filter(|&a| a == i || rel[a][i]).collect();
        let post: Vec<usize> = (0..n).filter(|&b| b == j || rel[j][b]).collect();
        for &a in &pre {
            for &b in &post {
                rel[a][b] = true;
            }
        }
    }

    /// Committed `(earlier, later)` pairs among the decision variables.
    pub fn var_precedences(&self) -> Vec<(usize, usize)> {
        pairs(&self.var_before)
    }

    pub fn value_precedences(&self) -> Vec<(usize, usize)> {
        pairs(&self.val_before)
    }

    fn post(&mut self, store: &mut Store, c: Constraint) -> Result<(), Conflict> {
        self.posted += 1;
        self.trace.push(format!("post {c}"));
        store.post(c, PostMode::Permanent).map(|_| ())
    }
}

fn pairs(rel: &[Vec<bool>]) -> Vec<(usize, usize)> {
    let mut out = Vec::new();
    for (i, row) in rel.iter().enumerate() {
        for (j, &b) in row.iter().enumerate() {
            if b {
                out.push((i, j));
            }
        }
    }
    out
}

/// Kahn's algorithm, always emitting the available node with the least key.
fn topo_order(nodes: std::ops::Range<usize>, rel: &[Vec<bool>], key: impl Fn(usize) -> (Vec<i32>, usize)) -> Vec<usize> {
    let mut left: Vec<usize> = nodes.collect();
    let mut out = Vec::new();
    while !left.is_empty() {
        let pick = left
            .iter()
            .copied()
            .filter(|&u| !left.iter().any(|&w| w != u && rel[w][u]))
            .min_by_key(|&u| key(u))
            .expect("committed precedences are acyclic");
        left.retain(|&u| u != pick);
        out.push(pick);
    }
    out
}

impl SearchMonitor for ForcedPiecewise {
    fn on_fixpoint(&mut self, store: &mut Store) -> Result<bool, Conflict> {
        let d = store.domains();
        // strict orderings between interchangeable variables
        let var_blocks: Vec<_> = self.layout.var_parts.blocks().collect();
        for block in var_blocks {
            for i in block.clone() {
                for j in block.clone() {
                    if i == j || self.var_before[i][j] || self.var_before[j][i] {
                        continue;
                    }
                    let (xi, xj) = (self.layout.xs[i], self.layout.xs[j]);
                    // every extension placing j before i needs X_j <= X_i,
                    // which is dis-entailed exactly when X_i < X_j is entailed
                    if d.max(xi) < d.min(xj) {
                        Self::commit(&mut self.var_before, i, j);
                        let c = self.layout.var_order(i, j);
                        self.post(store, c)?;
                        return Ok(true);
                    }
                }
            }
        }
        // strict orderings between signatures of interchangeable values
        let val_blocks: Vec<_> = self.layout.val_parts.blocks().collect();
        for block in val_blocks {
            for j in block.clone() {
                for k in block.clone() {
                    if j == k || self.val_before[j][k] || self.val_before[k][j] {
                        continue;
                    }
                    // sig(j) >lex sig(k) strictly: sig(j) <=lex sig(k) is dis-entailed
                    let le = Constraint::lex_le(self.layout.signature(j), self.layout.signature(k));
                    if le.entailment(d) == Entailment::DisEntailed {
                        Self::commit(&mut self.val_before, j, k);
                        let c = self.layout.sig_order(j, k);
                        self.post(store, c)?;
                        return Ok(true);
                    }
                }
            }
        }
        Ok(false)
    }

    fn on_solution(&mut self, store: &mut Store) -> Result<()> {
        if !self.patch {
            return Ok(());
        }
        let a: Vec<i32> = self.layout.xs.iter().map(|&x| store.domains().min(x)).collect();
        let mut chains = Vec::new();
        for block in self.layout.var_parts.blocks() {
            let order = topo_order(block, &self.var_before, |u| (vec![a[u]], u));
            chains.push((false, order));
        }
        for block in self.layout.val_parts.blocks() {
            let order = topo_order(block, &self.val_before, |k| {
                (self.layout.signature_of(&a, k).into_iter().map(|c| -c).collect(), k)
            });
            chains.push((true, order));
        }
        for (values, order) in chains {
            for w in order.windows(2) {
                let (p, q) = (w[0], w[1]);
                let rel = if values { &mut self.val_before } else { &mut self.var_before };
                if rel[p][q] {
                    continue;
                }
                if rel[q][p] {
                    return Err(Error::Internal("completion contradicts a committed precedence".into()));
                }
                Self::commit(rel, p, q);
                let c = if values { self.layout.sig_order(p, q) } else { self.layout.var_order(p, q) };
                let _ = self.post(store, c);
            }
        }
        Ok(())
    }

    fn posted(&self) -> usize {
        self.posted
    }

    fn trace(&self) -> &[String] {
        &self.trace
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bench::ais::{brute_force_solutions, diff_brancher, post_ais};
    use crate::search::{search, Limits, Mode, Model, Scripted, SearchMonitor, ValueOrder, VarOrder, VarValueBrancher};
    use crate::symmetry::{piecewise_canonical, symmetry_classes, Partitions, Symmetry};
    use std::collections::BTreeSet;

    #[test]
    fn series_trace_commits_to_inversion() {
        let mut s = Store::new();
        let v = post_ais(&mut s, 11).unwrap();
        let script = vec![(v.x[0], 10), (v.x[10], 5)];
        let b = Scripted { script, then: diff_brancher(&v) };
        let mut m = Model::new(s, Box::new(b), v.x.clone());
        m.monitor = Box::new(ForcedSets::for_ais(&v.x, false));
        let r = search(&mut m, Mode::First, Limits::default()).unwrap();
        assert_eq!(r.solutions, vec![vec![10, 0, 9, 1, 8, 2, 7, 3, 6, 4, 5]]);
        let inv: BTreeSet<String> =
            build_ais_set(AisSymmetry::Invert, &v.x).iter().map(|c| c.normalized().to_string()).collect();
        let posted: BTreeSet<String> =
            m.monitor.trace().iter().map(|l| l.strip_prefix("post ").unwrap().to_string()).collect();
        assert_eq!(posted, inv);
        assert_eq!(m.monitor.posted(), inv.len());
    }

    #[test]
    fn posts_only_members_of_the_surviving_set() {
        let x: Vec<VarId> = (0..11).map(VarId).collect();
        let mut s = Store::new();
        let v = post_ais(&mut s, 11).unwrap();
        assert_eq!(v.x, x);
        let mut f = ForcedSets::for_ais(&x, false);
        s.domains_mut().assign(x[0], 10).unwrap();
        s.propagate().unwrap();
        while f.on_fixpoint(&mut s).unwrap() {
            s.propagate().unwrap();
        }
        // X1 = 10 entails X11 < X1 (rev and inv); rev's lex part then needs
        // X11 = 0, which propagation refutes, so inv is the only survivor
        assert_eq!(f.trace()[0], "post X11 < X1");
        assert_eq!(f.consistent_names(), ["inv"]);
        s.domains_mut().assign(x[10], 5).unwrap();
        s.propagate().unwrap();
        assert!(!f.on_fixpoint(&mut s).unwrap());
        let inv: BTreeSet<String> =
            build_ais_set(AisSymmetry::Invert, &x).iter().map(|c| c.normalized().to_string()).collect();
        let got: BTreeSet<String> = f.posted_constraints().iter().map(|c| c.to_string()).collect();
        assert_eq!(got, inv);
    }

    fn forced_all(n: usize) -> Vec<Vec<i32>> {
        let mut s = Store::new();
        let v = post_ais(&mut s, n).unwrap();
        let mut m = Model::new(s, diff_brancher(&v), v.x.clone());
        m.monitor = Box::new(ForcedSets::for_ais(&v.x, true));
        search(&mut m, Mode::All, Limits::default()).unwrap().solutions
    }

    #[test]
    fn patched_rule_keeps_one_series_per_class() {
        for n in 5..=8 {
            let all = brute_force_solutions(n);
            let gens: Vec<Symmetry> = AisSymmetry::ALL.iter().map(|g| g.symmetry(n)).collect();
            let classes = symmetry_classes(&all, &gens, 100_000).unwrap();
            let kept = forced_all(n);
            let hits = classes.hits(&kept);
            assert!(hits.values().all(|&h| h == 1), "n = {n}: {hits:?}");
            assert_eq!(kept.len(), classes.len(), "n = {n}");
        }
    }

    fn toy(vsizes: &[usize], dsizes: &[usize], order: ValueOrder, patch: bool) -> Vec<Vec<i32>> {
        let var_parts = Partitions::from_sizes(vsizes).unwrap();
        let val_parts = Partitions::from_sizes(dsizes).unwrap();
        let mut s = Store::new();
        let m = val_parts.len() as i32;
        let xs: Vec<VarId> = (0..var_parts.len()).map(|_| s.new_var(1, m)).collect();
        let layout = PiecewiseLayout::post(&mut s, xs.clone(), var_parts, val_parts, 1).unwrap();
        let b = VarValueBrancher::new(xs.clone(), VarOrder::InOrder, order, 3);
        let mut model = Model::new(s, Box::new(b), xs);
        model.monitor = Box::new(ForcedPiecewise::new(layout, patch));
        search(&mut model, Mode::All, Limits::default()).unwrap().solutions
    }

    fn all_assignments(n: usize, m: i32) -> Vec<Vec<i32>> {
        let mut out = vec![vec![]];
        for _ in 0..n {
            out = out.into_iter().flat_map(|a: Vec<i32>| (1..=m).map(move |v| [a.clone(), vec![v]].concat())).collect();
        }
        out
    }

    #[test]
    fn patched_piecewise_rule_keeps_one_per_class() {
        for (vs, ds) in [(vec![2], vec![2]), (vec![2, 2, 1], vec![2, 1]), (vec![3, 1], vec![3]), (vec![4], vec![1, 2])] {
            let var_parts = Partitions::from_sizes(&vs).unwrap();
            let val_parts = Partitions::from_sizes(&ds).unwrap();
            let all = all_assignments(var_parts.len(), val_parts.len() as i32);
            let classes: BTreeSet<Vec<i32>> =
                all.iter().map(|a| piecewise_canonical(a, &var_parts, &val_parts, 1)).collect();
            for order in [ValueOrder::Lex, ValueOrder::Antilex, ValueOrder::Random] {
                let sols = toy(&vs, &ds, order, true);
                let canon: BTreeSet<Vec<i32>> =
                    sols.iter().map(|a| piecewise_canonical(a, &var_parts, &val_parts, 1)).collect();
                assert_eq!(sols.len(), classes.len(), "{vs:?} {ds:?} {order:?}");
                assert_eq!(canon, classes);
            }
        }
    }

    #[test]
    fn unpatched_piecewise_rule_is_sound() {
        let var_parts = Partitions::from_sizes(&[2, 2, 1]).unwrap();
        let val_parts = Partitions::from_sizes(&[2, 1]).unwrap();
        let all = all_assignments(5, 3);
        let classes: BTreeSet<Vec<i32>> = all.iter().map(|a| piecewise_canonical(a, &var_parts, &val_parts, 1)).collect();
        let sols = toy(&[2, 2, 1], &[2, 1], ValueOrder::Lex, false);
        let canon: BTreeSet<Vec<i32>> = sols.iter().map(|a| piecewise_canonical(a, &var_parts, &val_parts, 1)).collect();
        assert_eq!(canon, classes);
        assert!(sols.len() < all.len());
    }
}
