//! Difference, absolute value, number of distinct values and profit sums.

use crate::store::{Conflict, Domains, PropResult, VarId};

/// `t = y - x`, domain consistent.
pub(super) fn propagate_diff(t: VarId, x: VarId, y: VarId, d: &mut Domains) -> PropResult {
    loop {
        let mut changed = false;
        let (xs, ys) = (d.dom(x).values(), d.dom(y).values());
        changed |= d.retain(t, |tv| xs.iter().any(|&xv| ys.binary_search(&(xv + tv)).is_ok()))?;
        let ts = d.dom(t).values();
        changed |= d.retain(x, |xv| ts.iter().any(|&tv| ys.binary_search(&(xv + tv)).is_ok()))?;
        let xs = d.dom(x).values();
        changed |= d.retain(y, |yv| ts.iter().any(|&tv| xs.binary_search(&(yv - tv)).is_ok()))?;
        if !changed {
            return Ok(());
        }
    }
}

/// `dv = |t|`, domain consistent.
pub(super) fn propagate_abs(dv: VarId, t: VarId, d: &mut Domains) -> PropResult {
    loop {
        let ts = d.dom(t).values();
        let mut changed = d.retain(dv, |v| ts.binary_search(&v).is_ok() || ts.binary_search(&-v).is_ok())?;
        let ds = d.dom(dv).values();
        changed |= d.retain(t, |v| ds.binary_search(&v.abs()).is_ok())?;
        if !changed {
            return Ok(());
        }
    }
}

pub(super) fn propagate_nvalue(vars: &[VarId], count: VarId, d: &mut Domains) -> PropResult {
    let mut fixed: Vec<i32> = vars.iter().filter_map(|&v| d.value(v)).collect();
    fixed.sort_unstable();
    fixed.dedup();
    let free = vars.iter().filter(|&&v| !d.is_fixed(v)).count() as i32;
    let mut union: Vec<i32> = vars.iter().flat_map(|&v| d.dom(v).values()).collect();
    union.sort_unstable();
    union.dedup();
    let lo = fixed.len() as i32;
    d.set_min(count, lo.max(if vars.is_empty() { 0 } else { 1 }))?;
    d.set_max(count, (union.len() as i32).min(lo + free))?;
    if d.max(count) == lo {
        for &v in vars {
            if !d.is_fixed(v) {
                d.retain(v, |x| fixed.binary_search(&x).is_ok())?;
            }
        }
        // newly fixed variables take already used values, so the bounds hold
    }
    Ok(())
}

pub(super) fn propagate_profit(
    vars: &[VarId],
    offers: &[i32],
    reject: i32,
    total: VarId,
    d: &mut Domains,
) -> PropResult {
    loop {
        let mut changed = false;
        let mut sure: i64 = 0;
        let mut maybe: i64 = 0;
        for (&v, &o) in vars.iter().zip(offers) {
            let can_reject = d.contains(v, reject);
            let can_accept = !(d.is_fixed(v) && can_reject);
            if can_accept {
                maybe += o as i64;
                if !can_reject {
                    sure += o as i64;
                }
            }
        }
        changed |= d.set_min(total, sure as i32)?;
        changed |= d.set_max(total, maybe as i32)?;
        let (tmin, tmax) = (d.min(total) as i64, d.max(total) as i64);
        for (&v, &o) in vars.iter().zip(offers) {
            let undecided = d.contains(v, reject) && !d.is_fixed(v);
            if !undecided {
                continue;
            }
            if maybe - (o as i64) < tmin {
                changed |= d.remove(v, reject)?;
            } else if sure + o as i64 > tmax {
                changed |= d.assign(v, reject)?;
            }
        }
        if sure > tmax || maybe < tmin {
            return Err(Conflict);
        }
        if !changed {
            return Ok(());
        }
    }
}
