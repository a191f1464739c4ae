//! `left <=lex right` over vectors of affine views.
//!
//! Filtering is domain consistent when no variable occurs twice: for each
//! position it computes whether the prefix can still be equal, whether a
//! strict decision may already have happened earlier, and whether the suffix
//! can still be satisfied, then keeps exactly the supported values.

use super::{Entailment, Term};
use crate::store::{Domains, PropResult};

pub fn lex_entailment(left: &[Term], right: &[Term], d: &Domains) -> Entailment {
    for (x, y) in left.iter().zip(right) {
        if x.max(d) < y.min(d) {
            return Entailment::Entailed;
        }
        if x.min(d) > y.max(d) {
            return Entailment::DisEntailed;
        }
        if !(x.is_fixed(d) && y.is_fixed(d)) {
            return Entailment::Unknown;
        }
    }
    Entailment::Entailed
}

fn can_equal(x: &Term, y: &Term, d: &Domains) -> bool {
    if x.max(d) < y.min(d) || y.max(d) < x.min(d) {
        return false;
    }
    x.values(d).into_iter().any(|v| y.contains(d, v))
}

pub(super) fn propagate_lex(left: &[Term], right: &[Term], d: &mut Domains) -> PropResult {
    let n = left.len();
    loop {
        let can_lt: Vec<bool> = (0..n).map(|i| left[i].min(d) < right[i].max(d)).collect();
        let can_eq: Vec<bool> = (0..n).map(|i| can_equal(&left[i], &right[i], d)).collect();
        // suffix[i]: positions i.. can be completed to a satisfying tail
        let mut suffix = vec![true; n + 1];
        for i in (0..n).rev() {
            suffix[i] = can_lt[i] || (can_eq[i] && suffix[i + 1]);
        }
        if !suffix[0] {
            return Err(crate::store::Conflict);
        }
        let mut changed = false;
        let mut prefix_eq = true;
        for i in 0..n {
            // a strict decision is still possible before i: position i is free
            if !prefix_eq {
                break;
            }
            let (x, y) = (left[i], right[i]);
            let strict_before = (0..i).any(|j| can_lt[j]);
            if strict_before {
                break;
            }
            let tail = suffix[i + 1];
            let ymax = y.max(d);
            let ys = y.values(d);
            changed |= x.retain(d, |v| v < ymax || (tail && ys.binary_search(&v).is_ok()))?;
            let xmin = x.min(d);
            let xs = x.values(d);
            changed |= y.retain(d, |w| w > xmin || (tail && xs.binary_search(&w).is_ok()))?;
            prefix_eq = can_equal(&x, &y, d);
        }
        if !changed {
            return Ok(());
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::constraints::Constraint;
    use crate::store::{PostMode, Store, VarId};
    use proptest::prelude::*;

    fn enumerate(doms: &[Vec<i32>]) -> Vec<Vec<i32>> {
        let mut out = vec![vec![]];
        for d in doms {
            let mut next = Vec::new();
            for p in &out {
                for &v in d {
                    let mut q = p.clone();
                    q.push(v);
                    next.push(q);
                }
            }
            out = next;
        }
        out
    }

    proptest! {
        #[test]
        fn filtering_matches_brute_force(
            len in 1usize..=4,
            masks in proptest::collection::vec(1u8..16, 8),
        ) {
            let mut s = Store::new();
            let mut doms = Vec::new();
            let mut vars = Vec::new();
            for &mask in &masks[..2 * len] {
                let vals: Vec<i32> = (0..4).filter(|b| mask & (1 << b) != 0).collect();
                let v = s.new_var(0, 3);
                s.domains_mut().retain(v, |x| vals.contains(&x)).unwrap();
                doms.push(vals);
                vars.push(v);
            }
            let left: Vec<Term> = vars[..len].iter().map(|&v| Term::var(v)).collect();
            let right: Vec<Term> = vars[len..].iter().map(|&v| Term::var(v)).collect();
            let c = Constraint::lex_le(left, right);
            let sols: Vec<Vec<i32>> = enumerate(&doms)
                .into_iter()
                .filter(|t| c.check(t))
                .collect();
            let res = s.post(c, PostMode::Permanent).and_then(|_| s.propagate());
            if sols.is_empty() {
                prop_assert!(res.is_err());
            } else {
                prop_assert!(res.is_ok());
                for (k, &v) in vars.iter().enumerate() {
                    let mut expected: Vec<i32> = sols.iter().map(|t| t[k]).collect();
                    expected.sort_unstable();
                    expected.dedup();
                    prop_assert_eq!(s.domains().dom(v).values(), expected);
                }
            }
        }

        #[test]
        fn entailment_is_sound(masks in proptest::collection::vec(1u8..16, 6)) {
            let mut s = Store::new();
            let mut doms = Vec::new();
            for m in &masks {
                let vals: Vec<i32> = (0..4).filter(|b| m & (1 << b) != 0).collect();
                let v = s.new_var(0, 3);
                s.domains_mut().retain(v, |x| vals.contains(&x)).unwrap();
                doms.push(vals);
            }
            let left: Vec<Term> = (0..3).map(|i| Term::var(VarId(i))).collect();
            let right: Vec<Term> = (3..6).map(|i| Term::neg(VarId(i), 3)).collect();
            let c = Constraint::lex_le(left, right);
            let all = enumerate(&doms);
            match c.entailment(s.domains()) {
                Entailment::Entailed => prop_assert!(all.iter().all(|t| c.check(t))),
                Entailment::DisEntailed => prop_assert!(all.iter().all(|t| !c.check(t))),
                Entailment::Unknown => {}
            }
        }
    }

    #[test]
    fn prefix_scan_on_the_running_example() {
        // X1 = 10, X11 = 5: <X11..X6> <=lex <10-X1..10-X6> is dis-entailed
        let mut s = Store::new();
        let x: Vec<VarId> = (0..11).map(|_| s.new_var(0, 10)).collect();
        s.domains_mut().assign(x[0], 10).unwrap();
        s.domains_mut().assign(x[10], 5).unwrap();
        let left: Vec<Term> = (5..11).rev().map(|i| Term::var(x[i])).collect();
        let right: Vec<Term> = (0..6).map(|i| Term::neg(x[i], 10)).collect();
        let c = Constraint::lex_le(left, right);
        assert_eq!(c.entailment(s.domains()), Entailment::DisEntailed);
    }
}
