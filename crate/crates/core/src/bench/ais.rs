//! All-interval series: `X1..Xn` a permutation of `0..n`, neighbouring
//! differences a permutation of `1..n`.

use crate::constraints::Constraint;
use crate::error::{Error, Result};
use crate::search::{Brancher, Chain, ValueOrder, VarOrder, VarValueBrancher};
use crate::store::{PostMode, Store, VarId};

#[derive(Clone, Debug)]
pub struct AisVars {
    pub x: Vec<VarId>,
    /// `t[i] = x[i+1] - x[i]`
    pub t: Vec<VarId>,
    /// `d[i] = |t[i]|`
    pub d: Vec<VarId>,
}

pub fn post_ais(store: &mut Store, n: usize) -> Result<AisVars> {
    if n < 2 {
        return Err(Error::Config(format!("series length must be at least 2, got {n}")));
    }
    let top = n as i32 - 1;
    let x: Vec<VarId> = (0..n).map(|_| store.new_var(0, top)).collect();
    let t: Vec<VarId> = (0..n - 1).map(|_| store.new_var(-top, top)).collect();
    let d: Vec<VarId> = (0..n - 1).map(|_| store.new_var(1, top)).collect();
    let fail = || Error::Internal("series model fails at the root".into());
    store.post(Constraint::AllDifferent(x.clone()), PostMode::Permanent).map_err(|_| fail())?;
    for i in 0..n - 1 {
        store.post(Constraint::Diff { t: t[i], x: x[i], y: x[i + 1] }, PostMode::Permanent).map_err(|_| fail())?;
        store.post(Constraint::Abs { d: d[i], t: t[i] }, PostMode::Permanent).map_err(|_| fail())?;
    }
    store.post(Constraint::AllDifferent(d.clone()), PostMode::Permanent).map_err(|_| fail())?;
    Ok(AisVars { x, t, d })
}

/// Branches in order on the differences, trying values of `X(i) - X(i+1)`
/// in numerical order (that is, `t[i]` from its largest value down), then
/// on any series variable left open.
pub fn diff_brancher(v: &AisVars) -> Box<dyn Brancher + Send> {
    Box::new(Chain(vec![
        Box::new(VarValueBrancher::new(v.t.clone(), VarOrder::InOrder, ValueOrder::Antilex, 0)),
        Box::new(VarValueBrancher::new(v.x.clone(), VarOrder::InOrder, ValueOrder::Lex, 0)),
    ]))
}

/// Every permutation of `0..n` whose neighbouring differences are a
/// permutation of `1..n`, by direct enumeration.
pub fn brute_force_solutions(n: usize) -> Vec<Vec<i32>> {
    fn rec(n: usize, cur: &mut Vec<i32>, used: &mut [bool], diffs: &mut [bool], out: &mut Vec<Vec<i32>>) {
        if cur.len() == n {
            out.push(cur.clone());
            return;
        }
        for v in 0..n as i32 {
            if used[v as usize] {
                continue;
            }
            let diff = cur.last().map(|&p| (v - p).unsigned_abs() as usize);
            if let Some(k) = diff {
                if diffs[k] {
                    continue;
                }
                diffs[k] = true;
            }
            used[v as usize] = true;
            cur.push(v);
            rec(n, cur, used, diffs, out);
            cur.pop();
            used[v as usize] = false;
            if let Some(k) = diff {
                diffs[k] = false;
            }
        }
    }
    let mut out = Vec::new();
    rec(n, &mut Vec::new(), &mut vec![false; n], &mut vec![false; n], &mut out);
    out
}
