//! Global cardinality by occurrence counting.

use crate::store::{Conflict, Domains, PropResult, VarId};

pub(super) fn propagate_gcc(vars: &[VarId], values: &[i32], counts: &[VarId], d: &mut Domains) -> PropResult {
    let n = vars.len() as i32;
    for &v in vars {
        d.retain(v, |x| values.contains(&x))?;
    }
    loop {
        let mut changed = false;
        for (j, &val) in values.iter().enumerate() {
            let lo = vars.iter().filter(|&&v| d.value(v) == Some(val)).count() as i32;
            let hi = vars.iter().filter(|&&v| d.contains(v, val)).count() as i32;
            changed |= d.set_min(counts[j], lo)?;
            changed |= d.set_max(counts[j], hi)?;
            if d.max(counts[j]) == lo && hi > lo {
                for &v in vars {
                    if !d.is_fixed(v) {
                        changed |= d.remove(v, val)?;
                    }
                }
            } else if d.min(counts[j]) == hi && hi > lo {
                for &v in vars {
                    if d.contains(v, val) {
                        changed |= d.assign(v, val)?;
                    }
                }
            }
        }
        let total_min: i32 = counts.iter().map(|&c| d.min(c)).sum();
        let total_max: i32 = counts.iter().map(|&c| d.max(c)).sum();
        if total_min > n || total_max < n {
            return Err(Conflict);
        }
        for &c in counts {
            let (cmin, cmax) = (d.min(c), d.max(c));
            changed |= d.set_min(c, n - (total_max - cmax))?;
            changed |= d.set_max(c, n - (total_min - cmin))?;
        }
        if !changed {
            return Ok(());
        }
    }
}
