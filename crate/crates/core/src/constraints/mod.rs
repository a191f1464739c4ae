//! Constraint library.
//!
//! A [`Constraint`] is plain data: it knows its scope, how to check a
//! complete assignment, how to decide entailment against the current
//! domains, how to propagate, and how a symmetry acts on it. The store keeps
//! posted constraints and calls [`Constraint::propagate`] directly, so every
//! propagator here is stateless and runs to its own fixpoint.

mod alldiff;
mod arith;
mod cmp;
mod gcc;
mod lex;
mod term;

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::Error;
use crate::store::{Domains, PropResult, VarId};
use crate::symmetry::{Symmetry, ValueMap};

pub use alldiff::alldiff_prune;
pub use lex::lex_entailment;
pub use term::{AffineView, Term};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum CmpOp {
    Lt,
    Le,
    Eq,
    Ne,
}

impl CmpOp {
    fn holds(self, a: i32, b: i32) -> bool {
        match self {
            CmpOp::Lt => a < b,
            CmpOp::Le => a <= b,
            CmpOp::Eq => a == b,
            CmpOp::Ne => a != b,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Entailment {
    Entailed,
    DisEntailed,
    Unknown,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum ReifyMode {
    /// `b <=> c`
    Full,
    /// `b => c`
    Implication,
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Constraint {
    Cmp { lhs: Term, op: CmpOp, rhs: Term },
    /// Both sides are `Cmp` constraints.
    Implies { hyp: Box<Constraint>, concl: Box<Constraint> },
    LexLe { left: Vec<Term>, right: Vec<Term> },
    AllDifferent(Vec<VarId>),
    /// `counts[j] = |{ x in vars : x = values[j] }|`; every variable takes
    /// one of `values`.
    Gcc { vars: Vec<VarId>, values: Vec<i32>, counts: Vec<VarId> },
    /// `t = y - x`
    Diff { t: VarId, x: VarId, y: VarId },
    /// `d = |t|`
    Abs { d: VarId, t: VarId },
    /// `count` = number of distinct values taken by `vars`.
    NValue { vars: Vec<VarId>, count: VarId },
    /// `total = sum of offers[i] over vars[i] != reject`.
    Profit { vars: Vec<VarId>, offers: Vec<i32>, reject: i32, total: VarId },
    /// `x != y` unless both take `except`.
    NotEqualUnless { x: VarId, y: VarId, except: i32 },
    /// `b` is a 0/1 variable; `inner` is a `Cmp`.
    Reify { b: VarId, inner: Box<Constraint>, mode: ReifyMode },
    /// Not all of the literals `x = v` hold.
    Nogood(Vec<(VarId, i32)>),
}

impl Constraint {
    pub fn cmp(lhs: Term, op: CmpOp, rhs: Term) -> Self {
        Constraint::Cmp { lhs, op, rhs }
    }

    pub fn lt(x: VarId, y: VarId) -> Self {
        Self::cmp(Term::var(x), CmpOp::Lt, Term::var(y))
    }

    pub fn le(x: VarId, y: VarId) -> Self {
        Self::cmp(Term::var(x), CmpOp::Le, Term::var(y))
    }

    pub fn ne(x: VarId, y: VarId) -> Self {
        Self::cmp(Term::var(x), CmpOp::Ne, Term::var(y))
    }

    pub fn implies(hyp: Constraint, concl: Constraint) -> Self {
        assert!(matches!(hyp, Constraint::Cmp { .. }) && matches!(concl, Constraint::Cmp { .. }));
        Constraint::Implies { hyp: Box::new(hyp), concl: Box::new(concl) }
    }

    pub fn lex_le(left: Vec<Term>, right: Vec<Term>) -> Self {
        assert_eq!(left.len(), right.len(), "lex vectors must have equal length");
        Constraint::LexLe { left, right }
    }

    pub fn reify(b: VarId, inner: Constraint, mode: ReifyMode) -> Self {
        assert!(matches!(inner, Constraint::Cmp { .. }));
        Constraint::Reify { b, inner: Box::new(inner), mode }
    }

    /// Every variable the constraint mentions, in order of appearance.
    pub fn vars(&self) -> Vec<VarId> {
        let mut out = Vec::new();
        self.collect_vars(&mut out);
        out
    }

    fn collect_vars(&self, out: &mut Vec<VarId>) {
        match self {
            Constraint::Cmp { lhs, rhs, .. } => out.extend(lhs.var_id().into_iter().chain(rhs.var_id())),
            Constraint::Implies { hyp, concl } => {
                hyp.collect_vars(out);
                concl.collect_vars(out);
            }
            Constraint::LexLe { left, right } => {
                out.extend(left.iter().chain(right).filter_map(Term::var_id));
            }
            Constraint::AllDifferent(vs) => out.extend(vs),
            Constraint::Gcc { vars, counts, .. } => out.extend(vars.iter().chain(counts)),
            Constraint::Diff { t, x, y } => out.extend([*t, *x, *y]),
            Constraint::Abs { d, t } => out.extend([*d, *t]),
            Constraint::NValue { vars, count } => {
                out.extend(vars);
                out.push(*count);
            }
            Constraint::Profit { vars, total, .. } => {
                out.extend(vars);
                out.push(*total);
            }
            Constraint::NotEqualUnless { x, y, .. } => out.extend([*x, *y]),
            Constraint::Reify { b, inner, .. } => {
                out.push(*b);
                inner.collect_vars(out);
            }
            Constraint::Nogood(lits) => out.extend(lits.iter().map(|l| l.0)),
        }
    }

    /// Naive evaluation on a complete assignment indexed by variable.
    pub fn check(&self, a: &[i32]) -> bool {
        match self {
            Constraint::Cmp { lhs, op, rhs } => op.holds(lhs.eval(a), rhs.eval(a)),
            Constraint::Implies { hyp, concl } => !hyp.check(a) || concl.check(a),
            Constraint::LexLe { left, right } => {
                for (l, r) in left.iter().zip(right) {
                    let (x, y) = (l.eval(a), r.eval(a));
                    if x != y {
                        return x < y;
                    }
                }
                true
            }
            Constraint::AllDifferent(vs) => {
                let mut seen: Vec<i32> = vs.iter().map(|v| a[v.index()]).collect();
                seen.sort_unstable();
                seen.windows(2).all(|w| w[0] != w[1])
            }
            Constraint::Gcc { vars, values, counts } => {
                let in_values = vars.iter().all(|v| values.contains(&a[v.index()]));
                in_values
                    && values.iter().zip(counts).all(|(&d, c)| {
                        vars.iter().filter(|v| a[v.index()] == d).count() as i32 == a[c.index()]
                    })
            }
            Constraint::Diff { t, x, y } => a[t.index()] == a[y.index()] - a[x.index()],
            Constraint::Abs { d, t } => a[d.index()] == a[t.index()].abs(),
            Constraint::NValue { vars, count } => {
                let mut vals: Vec<i32> = vars.iter().map(|v| a[v.index()]).collect();
                vals.sort_unstable();
                vals.dedup();
                vals.len() as i32 == a[count.index()]
            }
            Constraint::Profit { vars, offers, reject, total } => {
                let sum: i64 = vars
                    .iter()
                    .zip(offers)
                    .filter(|(v, _)| a[v.index()] != *reject)
                    .map(|(_, &o)| o as i64)
                    .sum();
                sum == a[total.index()] as i64
            }
            Constraint::NotEqualUnless { x, y, except } => {
                let (u, w) = (a[x.index()], a[y.index()]);
                u != w || u == *except
            }
            Constraint::Reify { b, inner, mode } => {
                let bv = a[b.index()];
                let c = inner.check(a);
                match mode {
                    ReifyMode::Full => (bv == 1) == c && (bv == 0 || bv == 1),
                    ReifyMode::Implication => bv == 0 || c,
                }
            }
            Constraint::Nogood(lits) => !lits.iter().all(|&(v, val)| a[v.index()] == val),
        }
    }

    /// Decides entailment against the current domains. Never reports
    /// `Entailed` when some in-domain tuple violates the constraint, nor
    /// `DisEntailed` when some tuple satisfies it.
    pub fn entailment(&self, d: &Domains) -> Entailment {
        match self {
            Constraint::Cmp { lhs, op, rhs } => cmp::cmp_entailment(lhs, *op, rhs, d),
            Constraint::Implies { hyp, concl } => {
                let h = hyp.entailment(d);
                let c = concl.entailment(d);
                if h == Entailment::DisEntailed || c == Entailment::Entailed {
                    Entailment::Entailed
                } else if h == Entailment::Entailed && c == Entailment::DisEntailed {
                    Entailment::DisEntailed
                } else {
                    Entailment::Unknown
                }
            }
            Constraint::LexLe { left, right } => lex::lex_entailment(left, right, d),
            Constraint::AllDifferent(vs) => {
                let mut fixed: Vec<i32> = vs.iter().filter_map(|&v| d.value(v)).collect();
                let n = fixed.len();
                fixed.sort_unstable();
                fixed.dedup();
                if fixed.len() < n {
                    Entailment::DisEntailed
                } else if n == vs.len() {
                    Entailment::Entailed
                } else {
                    Entailment::Unknown
                }
            }
            Constraint::Nogood(lits) => {
                if lits.iter().any(|&(v, val)| !d.contains(v, val)) {
                    Entailment::Entailed
                } else if lits.iter().all(|&(v, val)| d.value(v) == Some(val)) {
                    Entailment::DisEntailed
                } else {
                    Entailment::Unknown
                }
            }
            _ => {
                let vars = self.vars();
                if vars.iter().all(|&v| d.is_fixed(v)) {
                    let mut a = vec![0; d.len()];
                    for v in vars {
                        a[v.index()] = d.min(v);
                    }
                    if self.check(&a) {
                        Entailment::Entailed
                    } else {
                        Entailment::DisEntailed
                    }
                } else {
                    Entailment::Unknown
                }
            }
        }
    }

    /// Prunes the domains of the constraint's variables to its fixpoint.
    pub fn propagate(&self, d: &mut Domains) -> PropResult {
        match self {
            Constraint::Cmp { lhs, op, rhs } => cmp::propagate_cmp(lhs, *op, rhs, d),
            Constraint::Implies { hyp, concl } => cmp::propagate_implies(hyp, concl, d),
            Constraint::LexLe { left, right } => lex::propagate_lex(left, right, d),
            Constraint::AllDifferent(vs) => alldiff::propagate_alldiff(vs, d),
            Constraint::Gcc { vars, values, counts } => gcc::propagate_gcc(vars, values, counts, d),
            Constraint::Diff { t, x, y } => arith::propagate_diff(*t, *x, *y, d),
            Constraint::Abs { d: dv, t } => arith::propagate_abs(*dv, *t, d),
            Constraint::NValue { vars, count } => arith::propagate_nvalue(vars, *count, d),
            Constraint::Profit { vars, offers, reject, total } => {
                arith::propagate_profit(vars, offers, *reject, *total, d)
            }
            Constraint::NotEqualUnless { x, y, except } => cmp::propagate_ne_unless(*x, *y, *except, d),
            Constraint::Reify { b, inner, mode } => cmp::propagate_reify(*b, inner, *mode, d),
            Constraint::Nogood(lits) => cmp::propagate_nogood(lits, d),
        }
    }

    /// The logical negation of a comparison.
    pub fn negated_cmp(&self) -> Option<Constraint> {
        match *self {
            Constraint::Cmp { lhs, op, rhs } => Some(match op {
                CmpOp::Lt => Constraint::cmp(rhs, CmpOp::Le, lhs),
                CmpOp::Le => Constraint::cmp(rhs, CmpOp::Lt, lhs),
                CmpOp::Eq => Constraint::cmp(lhs, CmpOp::Ne, rhs),
                CmpOp::Ne => Constraint::cmp(lhs, CmpOp::Eq, rhs),
            }),
            _ => None,
        }
    }

    /// Applies a symmetry. `scope[i]` is the variable at position `i` of the
    /// symmetry's index space. The result is satisfied by an assignment `A`
    /// exactly when `g^-1(A)` satisfies `self`, and is returned normalized.
    pub fn apply_symmetry(&self, g: &Symmetry, scope: &[VarId]) -> Result<Constraint, Error> {
        let map_var = |v: VarId| -> Result<VarId, Error> {
            let pos = scope.iter().position(|&s| s == v).ok_or_else(|| {
                Error::UnrepresentableSymmetry(format!("variable {v} lies outside the symmetry's scope"))
            })?;
            Ok(scope[g.var_perm()[pos]])
        };
        // X := theta^-1(X) for arithmetic forms
        let inverse_affine = || -> Result<(i32, i32), Error> {
            match g.value_map() {
                ValueMap::Identity => Ok((1, 0)),
                ValueMap::Affine { scale, offset } => Ok((*scale, -scale * offset)),
                ValueMap::Table { .. } if g.value_map().is_identity() => Ok((1, 0)),
                ValueMap::Table { .. } => Err(Error::UnrepresentableSymmetry(
                    "non-affine value permutation applied to an arithmetic constraint".into(),
                )),
            }
        };
        let map_term = |t: &Term| -> Result<Term, Error> {
            match *t {
                Term::Const(c) => Ok(Term::Const(c)),
                Term::View(w) => {
                    let (s, o) = inverse_affine()?;
                    Ok(Term::View(AffineView::new(map_var(w.var)?, w.scale, w.offset).compose(s, o)))
                }
            }
        };
        let out = match self {
            Constraint::Cmp { lhs, op: op @ (CmpOp::Eq | CmpOp::Ne), rhs }
                if is_plain(lhs) && is_plain(rhs) =>
            {
                Constraint::cmp(
                    Term::var(map_var(lhs.var_id().unwrap())?),
                    *op,
                    Term::var(map_var(rhs.var_id().unwrap())?),
                )
            }
            Constraint::Cmp { lhs, op, rhs } => Constraint::cmp(map_term(lhs)?, *op, map_term(rhs)?),
            Constraint::Implies { hyp, concl } => Constraint::Implies {
                hyp: Box::new(hyp.apply_symmetry(g, scope)?),
                concl: Box::new(concl.apply_symmetry(g, scope)?),
            },
            Constraint::LexLe { left, right } => Constraint::LexLe {
                left: left.iter().map(map_term).collect::<Result<_, _>>()?,
                right: right.iter().map(map_term).collect::<Result<_, _>>()?,
            },
            Constraint::AllDifferent(vs) => {
                Constraint::AllDifferent(vs.iter().map(|&v| map_var(v)).collect::<Result<_, _>>()?)
            }
            Constraint::Gcc { vars, values, counts } => Constraint::Gcc {
                vars: vars.iter().map(|&v| map_var(v)).collect::<Result<_, _>>()?,
                values: values.iter().map(|&v| g.value_map().apply(v)).collect(),
                counts: counts.clone(),
            },
            Constraint::Nogood(lits) => Constraint::Nogood(
                lits.iter()
                    .map(|&(v, val)| Ok((map_var(v)?, g.value_map().apply(val))))
                    .collect::<Result<_, Error>>()?,
            ),
            Constraint::Reify { b, inner, mode } => Constraint::Reify {
                b: *b,
                inner: Box::new(inner.apply_symmetry(g, scope)?),
                mode: *mode,
            },
            other => {
                return Err(Error::UnrepresentableSymmetry(format!(
                    "symmetry action not defined for {}",
                    other.kind()
                )))
            }
        };
        Ok(out.normalized())
    }

    fn kind(&self) -> &'static str {
        match self {
            Constraint::Cmp { .. } => "comparison",
            Constraint::Implies { .. } => "implication",
            Constraint::LexLe { .. } => "lex",
            Constraint::AllDifferent(_) => "alldifferent",
            Constraint::Gcc { .. } => "gcc",
            Constraint::Diff { .. } => "difference",
            Constraint::Abs { .. } => "absolute value",
            Constraint::NValue { .. } => "nvalue",
            Constraint::Profit { .. } => "profit",
            Constraint::NotEqualUnless { .. } => "not-equal-unless",
            Constraint::Reify { .. } => "reification",
            Constraint::Nogood(_) => "nogood",
        }
    }

    /// Canonical form: negated views are flipped away where possible and
    /// offsets are moved to the right-hand side, so that equal constraints
    /// compare equal structurally.
    pub fn normalized(&self) -> Constraint {
        match self {
            Constraint::Cmp { lhs, op, rhs } => normalize_cmp(*lhs, *op, *rhs),
            Constraint::Implies { hyp, concl } => Constraint::Implies {
                hyp: Box::new(hyp.normalized()),
                concl: Box::new(concl.normalized()),
            },
            Constraint::LexLe { left, right } => {
                let neg = left.iter().chain(right).filter(|t| t.scale() < 0).count();
                let pos = left.iter().chain(right).filter(|t| t.scale() > 0).count();
                if neg > pos {
                    Constraint::LexLe {
                        left: right.iter().map(|t| t.negate()).collect(),
                        right: left.iter().map(|t| t.negate()).collect(),
                    }
                } else {
                    self.clone()
                }
            }
            Constraint::Reify { b, inner, mode } => Constraint::Reify {
                b: *b,
                inner: Box::new(inner.normalized()),
                mode: *mode,
            },
            other => other.clone(),
        }
    }
}

fn is_plain(t: &Term) -> bool {
    matches!(t, Term::View(w) if w.scale == 1 && w.offset == 0)
}

fn normalize_cmp(mut lhs: Term, op: CmpOp, mut rhs: Term) -> Constraint {
    let negative = |t: &Term| t.scale() < 0;
    let flip = match (lhs, rhs) {
        (Term::Const(_), Term::Const(_)) => false,
        (Term::Const(_), r) => negative(&r),
        (l, Term::Const(_)) => negative(&l),
        (l, r) => negative(&l) && negative(&r),
    };
    if flip {
        let (l, r) = (lhs.negate(), rhs.negate());
        match op {
            CmpOp::Lt | CmpOp::Le => {
                lhs = r;
                rhs = l;
            }
            CmpOp::Eq | CmpOp::Ne => {
                lhs = l;
                rhs = r;
            }
        }
    }
    // move offsets to the right
    match lhs {
        Term::View(w) if w.offset != 0 => {
            rhs = rhs.shift(-w.offset);
            lhs = lhs.shift(-w.offset);
        }
        Term::Const(c) => {
            if let Term::View(w) = rhs {
                lhs = Term::Const(c - w.offset);
                rhs = rhs.shift(-w.offset);
            }
        }
        _ => {}
    }
    if matches!(op, CmpOp::Eq | CmpOp::Ne) {
        let swap = match (lhs, rhs) {
            (Term::Const(_), Term::View(_)) => true,
            (Term::View(a), Term::View(b)) => a.var > b.var && a.scale == b.scale,
            _ => false,
        };
        if swap {
            return normalize_cmp(rhs, op, lhs);
        }
    }
    Constraint::Cmp { lhs, op, rhs }
}

impl fmt::Display for Constraint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let list = |ts: &[Term]| ts.iter().map(|t| t.to_string()).collect::<Vec<_>>().join(", ");
        let vars = |vs: &[VarId]| vs.iter().map(|v| format!("X{}", v.0 + 1)).collect::<Vec<_>>().join(", ");
        match self {
            Constraint::Cmp { lhs: Term::Const(c), op, rhs } => {
                let sym = match op {
                    CmpOp::Lt => ">",
                    CmpOp::Le => ">=",
                    CmpOp::Eq => "=",
                    CmpOp::Ne => "!=",
                };
                write!(f, "{rhs} {sym} {c}")
            }
            Constraint::Cmp { lhs, op, rhs } => {
                let sym = match op {
                    CmpOp::Lt => "<",
                    CmpOp::Le => "<=",
                    CmpOp::Eq => "=",
                    CmpOp::Ne => "!=",
                };
                write!(f, "{lhs} {sym} {rhs}")
            }
            Constraint::Implies { hyp, concl } => write!(f, "{hyp} => {concl}"),
            Constraint::LexLe { left, right } => write!(f, "<{}> <=lex <{}>", list(left), list(right)),
            Constraint::AllDifferent(vs) => write!(f, "alldifferent({})", vars(vs)),
            Constraint::Gcc { vars: vs, values, counts } => {
                write!(f, "gcc([{}], {:?}, [{}])", vars(vs), values, vars(counts))
            }
            Constraint::Diff { t, x, y } => write!(f, "X{} = X{} - X{}", t.0 + 1, y.0 + 1, x.0 + 1),
            Constraint::Abs { d, t } => write!(f, "X{} = |X{}|", d.0 + 1, t.0 + 1),
            Constraint::NValue { vars: vs, count } => write!(f, "X{} = nvalue({})", count.0 + 1, vars(vs)),
            Constraint::Profit { total, .. } => write!(f, "X{} = profit(..)", total.0 + 1),
            Constraint::NotEqualUnless { x, y, except } => {
                write!(f, "X{} != X{} unless both = {except}", x.0 + 1, y.0 + 1)
            }
            Constraint::Reify { b, inner, mode } => match mode {
                ReifyMode::Full => write!(f, "X{} <=> ({inner})", b.0 + 1),
                ReifyMode::Implication => write!(f, "X{} => ({inner})", b.0 + 1),
            },
            Constraint::Nogood(lits) => {
                let s: Vec<String> = lits.iter().map(|(v, val)| format!("X{}={val}", v.0 + 1)).collect();
                write!(f, "not({})", s.join(" & "))
            }
        }
    }
}
