//! Comparisons between terms and the small logical combinators built on them.

use super::{CmpOp, Constraint, Entailment, ReifyMode, Term};
use crate::store::{Conflict, Domains, PropResult, VarId};

pub(super) fn cmp_entailment(lhs: &Term, op: CmpOp, rhs: &Term, d: &Domains) -> Entailment {
    let (lmin, lmax, rmin, rmax) = (lhs.min(d), lhs.max(d), rhs.min(d), rhs.max(d));
    let same_var = lhs.var_id().is_some() && lhs.var_id() == rhs.var_id();
    if same_var {
        // both sides read the same variable: evaluate pointwise
        let Term::View(w) = lhs else { unreachable!() };
        let mut sat = false;
        let mut unsat = false;
        for x in d.dom(w.var).iter() {
            let mut a = vec![0; w.var.index() + 1];
            a[w.var.index()] = x;
            if op.holds(lhs.eval(&a), rhs.eval(&a)) {
                sat = true;
            } else {
                unsat = true;
            }
        }
        return match (sat, unsat) {
            (true, false) => Entailment::Entailed,
            (false, _) => Entailment::DisEntailed,
            _ => Entailment::Unknown,
        };
    }
    match op {
        CmpOp::Lt => {
            if lmax < rmin {
                Entailment::Entailed
            } else if lmin >= rmax {
                Entailment::DisEntailed
            } else {
                Entailment::Unknown
            }
        }
        CmpOp::Le => {
            if lmax <= rmin {
                Entailment::Entailed
            } else if lmin > rmax {
                Entailment::DisEntailed
            } else {
                Entailment::Unknown
            }
        }
        CmpOp::Eq | CmpOp::Ne => {
            let eq = if lmin == lmax && rmin == rmax && lmin == rmin {
                Entailment::Entailed
            } else if lmax < rmin || rmax < lmin || !intersects(lhs, rhs, d) {
                Entailment::DisEntailed
            } else {
                Entailment::Unknown
            };
            match (op, eq) {
                (CmpOp::Eq, e) => e,
                (_, Entailment::Entailed) => Entailment::DisEntailed,
                (_, Entailment::DisEntailed) => Entailment::Entailed,
                _ => Entailment::Unknown,
            }
        }
    }
}

fn intersects(a: &Term, b: &Term, d: &Domains) -> bool {
    let (small, big) = match (a, b) {
        (Term::Const(_), _) => (a, b),
        (_, Term::Const(_)) => (b, a),
        _ if a.var_id().map(|v| d.size(v)) <= b.var_id().map(|v| d.size(v)) => (a, b),
        _ => (b, a),
    };
    match small {
        Term::Const(c) => big.contains(d, *c),
        Term::View(w) if d.size(w.var) <= 64 => small.values(d).into_iter().any(|v| big.contains(d, v)),
        // wide interval domains: overlapping bounds are treated as intersecting
        Term::View(_) => true,
    }
}

fn cmp_once(lhs: &Term, op: CmpOp, rhs: &Term, d: &mut Domains) -> Result<bool, Conflict> {
    let mut changed = false;
    match op {
        CmpOp::Lt | CmpOp::Le => {
            let gap = if op == CmpOp::Lt { 1 } else { 0 };
            changed |= lhs.set_max(d, rhs.max(d) - gap)?;
            changed |= rhs.set_min(d, lhs.min(d) + gap)?;
        }
        CmpOp::Eq => {
            let (l, r) = (*lhs, *rhs);
            changed |= l.set_min(d, r.min(d))?;
            changed |= l.set_max(d, r.max(d))?;
            changed |= r.set_min(d, l.min(d))?;
            changed |= r.set_max(d, l.max(d))?;
            if l.var_id().is_some() && r.var_id().is_some() {
                let snapshot = d.dom(r.var_id().unwrap()).size() <= 64;
                if snapshot {
                    let rv = r.values(d);
                    changed |= l.retain(d, |v| rv.binary_search(&v).is_ok())?;
                    let lv = l.values(d);
                    changed |= r.retain(d, |v| lv.binary_search(&v).is_ok())?;
                }
            }
        }
        CmpOp::Ne => {
            if lhs.is_fixed(d) {
                changed |= rhs.remove(d, lhs.min(d))?;
            }
            if rhs.is_fixed(d) {
                changed |= lhs.remove(d, rhs.min(d))?;
            }
        }
    }
    Ok(changed)
}

pub(super) fn propagate_cmp(lhs: &Term, op: CmpOp, rhs: &Term, d: &mut Domains) -> PropResult {
    if lhs.var_id().is_some() && lhs.var_id() == rhs.var_id() {
        // a comparison of a variable with a view of itself: filter pointwise
        let Term::View(w) = lhs else { unreachable!() };
        let n = w.var.index() + 1;
        let (l, r) = (*lhs, *rhs);
        d.retain(w.var, |x| {
            let mut a = vec![0; n];
            a[n - 1] = x;
            op.holds(l.eval(&a), r.eval(&a))
        })?;
        return Ok(());
    }
    while cmp_once(lhs, op, rhs, d)? {}
    Ok(())
}

fn as_cmp(c: &Constraint) -> (&Term, CmpOp, &Term) {
    match c {
        Constraint::Cmp { lhs, op, rhs } => (lhs, *op, rhs),
        _ => panic!("expected a comparison"),
    }
}

pub(super) fn propagate_implies(hyp: &Constraint, concl: &Constraint, d: &mut Domains) -> PropResult {
    match hyp.entailment(d) {
        Entailment::DisEntailed => Ok(()),
        Entailment::Entailed => {
            let (l, op, r) = as_cmp(concl);
            propagate_cmp(l, op, r, d)
        }
        Entailment::Unknown => {
            if concl.entailment(d) == Entailment::DisEntailed {
                let neg = hyp.negated_cmp().expect("hypothesis is a comparison");
                let (l, op, r) = as_cmp(&neg);
                propagate_cmp(l, op, r, d)?;
            }
            Ok(())
        }
    }
}

pub(super) fn propagate_reify(b: VarId, inner: &Constraint, mode: ReifyMode, d: &mut Domains) -> PropResult {
    d.set_min(b, 0)?;
    d.set_max(b, 1)?;
    match inner.entailment(d) {
        Entailment::Entailed if mode == ReifyMode::Full => {
            d.assign(b, 1)?;
        }
        Entailment::DisEntailed => {
            d.assign(b, 0)?;
        }
        _ => {}
    }
    match d.value(b) {
        Some(1) => {
            let (l, op, r) = as_cmp(inner);
            propagate_cmp(l, op, r, d)?;
        }
        Some(0) if mode == ReifyMode::Full => {
            let neg = inner.negated_cmp().expect("reified constraint is a comparison");
            let (l, op, r) = as_cmp(&neg);
            propagate_cmp(l, op, r, d)?;
        }
        _ => {}
    }
    Ok(())
}

pub(super) fn propagate_nogood(lits: &[(VarId, i32)], d: &mut Domains) -> PropResult {
    let mut open = None;
    for &(v, val) in lits {
        if !d.contains(v, val) {
            return Ok(());
        }
        if !d.is_fixed(v) {
            if open.is_some() {
                return Ok(());
            }
            open = Some((v, val));
        }
    }
    match open {
        None => Err(Conflict),
        Some((v, val)) => d.remove(v, val).map(|_| ()),
    }
}

pub(super) fn propagate_ne_unless(x: VarId, y: VarId, except: i32, d: &mut Domains) -> PropResult {
    if let Some(v) = d.value(x) {
        if v != except {
            d.remove(y, v)?;
        }
    }
    if let Some(v) = d.value(y) {
        if v != except {
            d.remove(x, v)?;
        }
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::store::{PostMode, Store};

    #[test]
    fn conditional_of_the_second_ordering_constraint() {
        // X1 <= 5 and X1 = 5 => X2 < 5 on a fresh length-11 store
        let mut s = Store::new();
        let x: Vec<VarId> = (0..11).map(|_| s.new_var(0, 10)).collect();
        s.post(Constraint::cmp(Term::var(x[0]), CmpOp::Le, Term::Const(5)), PostMode::Permanent)
            .unwrap();
        let hyp = Constraint::cmp(Term::var(x[0]), CmpOp::Eq, Term::Const(5));
        let concl = Constraint::cmp(Term::var(x[1]), CmpOp::Lt, Term::Const(5));
        s.post(Constraint::implies(hyp, concl), PostMode::Permanent).unwrap();
        s.propagate().unwrap();
        assert_eq!(s.domains().dom(x[0]).values(), (0..=5).collect::<Vec<_>>());
        assert_eq!(s.domains().max(x[1]), 10);

        s.domains_mut().assign(x[0], 5).unwrap();
        s.propagate().unwrap();
        assert_eq!(s.domains().max(x[1]), 4);
    }

    #[test]
    fn implication_contrapositive() {
        let mut s = Store::new();
        let a = s.new_var(0, 10);
        let b = s.new_var(5, 9);
        let hyp = Constraint::cmp(Term::var(a), CmpOp::Eq, Term::Const(5));
        let concl = Constraint::cmp(Term::var(b), CmpOp::Lt, Term::Const(5));
        s.post(Constraint::implies(hyp, concl), PostMode::Permanent).unwrap();
        s.propagate().unwrap();
        assert!(!s.domains().contains(a, 5));
    }

    #[test]
    fn failure_on_violated_post() {
        let mut s = Store::new();
        let a = s.new_var(3, 3);
        let b = s.new_var(1, 1);
        assert_eq!(s.post(Constraint::lt(a, b), PostMode::Permanent).err(), Some(Conflict));
    }

    #[test]
    fn equality_is_domain_consistent() {
        let mut s = Store::new();
        let a = s.new_var(0, 10);
        let b = s.new_var(0, 10);
        s.domains_mut().retain(a, |v| v % 2 == 0).unwrap();
        s.post(Constraint::cmp(Term::var(a), CmpOp::Eq, Term::neg(b, 10)), PostMode::Permanent).unwrap();
        s.propagate().unwrap();
        assert_eq!(s.domains().dom(b).values(), vec![0, 2, 4, 6, 8, 10]);
    }
}
