//! Affine views `scale * X + offset` (scale is +1 or -1) and constants.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::store::{Conflict, Domains, VarId};

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct AffineView {
    pub var: VarId,
    pub scale: i32,
    pub offset: i32,
}

impl AffineView {
    pub fn new(var: VarId, scale: i32, offset: i32) -> Self {
        assert!(scale == 1 || scale == -1, "affine views only support scale +1 or -1");
        AffineView { var, scale, offset }
    }

    /// Substitutes `X := scale * X + offset` into the view.
    pub fn compose(self, scale: i32, offset: i32) -> Self {
        AffineView::new(self.var, self.scale * scale, self.scale * offset + self.offset)
    }

    #[inline]
    fn to_var(self, v: i32) -> i32 {
        (v - self.offset) * self.scale
    }

    #[inline]
    fn apply(self, x: i32) -> i32 {
        self.scale * x + self.offset
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Term {
    View(AffineView),
    Const(i32),
}

impl Term {
    pub fn var(v: VarId) -> Self {
        Term::View(AffineView::new(v, 1, 0))
    }

    /// `offset - X`.
    pub fn neg(v: VarId, offset: i32) -> Self {
        Term::View(AffineView::new(v, -1, offset))
    }

    pub fn view(v: VarId, scale: i32, offset: i32) -> Self {
        Term::View(AffineView::new(v, scale, offset))
    }

    pub fn var_id(&self) -> Option<VarId> {
        match self {
            Term::View(w) => Some(w.var),
            Term::Const(_) => None,
        }
    }

    pub fn scale(&self) -> i32 {
        match self {
            Term::View(w) => w.scale,
            Term::Const(_) => 0,
        }
    }

    /// Adds a constant.
    pub fn shift(self, k: i32) -> Self {
        match self {
            Term::View(w) => Term::View(AffineView::new(w.var, w.scale, w.offset + k)),
            Term::Const(c) => Term::Const(c + k),
        }
    }

    /// `-self`.
    pub fn negate(self) -> Self {
        match self {
            Term::View(w) => Term::View(AffineView::new(w.var, -w.scale, -w.offset)),
            Term::Const(c) => Term::Const(-c),
        }
    }

    pub fn eval(&self, assignment: &[i32]) -> i32 {
        match *self {
            Term::View(w) => w.apply(assignment[w.var.index()]),
            Term::Const(c) => c,
        }
    }

    pub fn min(&self, d: &Domains) -> i32 {
        match *self {
            Term::View(w) if w.scale > 0 => d.min(w.var) + w.offset,
            Term::View(w) => w.offset - d.max(w.var),
            Term::Const(c) => c,
        }
    }

    pub fn max(&self, d: &Domains) -> i32 {
        match *self {
            Term::View(w) if w.scale > 0 => d.max(w.var) + w.offset,
            Term::View(w) => w.offset - d.min(w.var),
            Term::Const(c) => c,
        }
    }

    pub fn is_fixed(&self, d: &Domains) -> bool {
        match *self {
            Term::View(w) => d.is_fixed(w.var),
            Term::Const(_) => true,
        }
    }

    pub fn contains(&self, d: &Domains, v: i32) -> bool {
        match *self {
            Term::View(w) => d.contains(w.var, w.to_var(v)),
            Term::Const(c) => c == v,
        }
    }

    pub fn values(&self, d: &Domains) -> Vec<i32> {
        match *self {
            Term::View(w) => {
                let mut vs: Vec<i32> = d.dom(w.var).iter().map(|x| w.apply(x)).collect();
                if w.scale < 0 {
                    vs.reverse();
                }
                vs
            }
            Term::Const(c) => vec![c],
        }
    }

    pub fn remove(&self, d: &mut Domains, v: i32) -> Result<bool, Conflict> {
        match *self {
            Term::View(w) => d.remove(w.var, w.to_var(v)),
            Term::Const(c) if c == v => Err(Conflict),
            Term::Const(_) => Ok(false),
        }
    }

    pub fn set_min(&self, d: &mut Domains, lo: i32) -> Result<bool, Conflict> {
        match *self {
            Term::View(w) if w.scale > 0 => d.set_min(w.var, lo - w.offset),
            Term::View(w) => d.set_max(w.var, w.offset - lo),
            Term::Const(c) if c < lo => Err(Conflict),
            Term::Const(_) => Ok(false),
        }
    }

    pub fn set_max(&self, d: &mut Domains, hi: i32) -> Result<bool, Conflict> {
        match *self {
            Term::View(w) if w.scale > 0 => d.set_max(w.var, hi - w.offset),
            Term::View(w) => d.set_min(w.var, w.offset - hi),
            Term::Const(c) if c > hi => Err(Conflict),
            Term::Const(_) => Ok(false),
        }
    }

    pub fn assign(&self, d: &mut Domains, v: i32) -> Result<bool, Conflict> {
        match *self {
            Term::View(w) => d.assign(w.var, w.to_var(v)),
            Term::Const(c) if c != v => Err(Conflict),
            Term::Const(_) => Ok(false),
        }
    }

    pub fn retain(&self, d: &mut Domains, mut keep: impl FnMut(i32) -> bool) -> Result<bool, Conflict> {
        match *self {
            Term::View(w) => d.retain(w.var, |x| keep(w.apply(x))),
            Term::Const(c) if !keep(c) => Err(Conflict),
            Term::Const(_) => Ok(false),
        }
    }
}

impl fmt::Display for Term {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match *self {
            Term::View(w) => {
                let x = format!("X{}", w.var.0 + 1);
                match (w.scale, w.offset) {
                    (1, 0) => write!(f, "{x}"),
                    (1, o) if o > 0 => write!(f, "{x}+{o}"),
                    (1, o) => write!(f, "{x}{o}"),
                    (_, 0) => write!(f, "-{x}"),
                    (_, o) => write!(f, "{o}-{x}"),
                }
            }
            Term::Const(c) => write!(f, "{c}"),
        }
    }
}
