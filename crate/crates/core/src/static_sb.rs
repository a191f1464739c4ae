//! Symmetry-breaking constraint sets and their symmetric images.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::constraints::{CmpOp, Constraint, Term};
use crate::error::{Error, Result};
use crate::store::{PostMode, Store, VarId};
use crate::symmetry::{AisSymmetry, Partitions, PiecewiseSymmetry, Symmetry};

/// The bespoke set for the all-interval series over `x` (values `0..n`):
///
/// 1. `X1 < Xn`
/// 2. `X1 <= m` and, for odd `n`, `X1 = m => X2 < m`, with `m = (n-1)/2`
/// 3. `<X1..Xh> <=lex <(n-1)-Xn .. (n-1)-X(n-h+1)>`, `h = ceil(n/2)`
pub fn ais_base_set(x: &[VarId]) -> Vec<Constraint> {
    let n = x.len();
    assert!(n >= 2, "series needs at least two variables");
    let top = n as i32 - 1;
    let mid = top / 2;
    let mut out = vec![
        Constraint::lt(x[0], x[n - 1]),
        Constraint::cmp(Term::var(x[0]), CmpOp::Le, Term::Const(mid)),
    ];
    if n % 2 == 1 {
        out.push(Constraint::implies(
            Constraint::cmp(Term::var(x[0]), CmpOp::Eq, Term::Const(mid)),
            Constraint::cmp(Term::var(x[1]), CmpOp::Lt, Term::Const(mid)),
        ));
    }
    let h = n.div_ceil(2);
    out.push(Constraint::lex_le(
        x[..h].iter().map(|&v| Term::var(v)).collect(),
        (0..h).map(|k| Term::neg(x[n - 1 - k], top)).collect(),
    ));
    out
}

/// `g` applied constraint-wise to `set`, in normalized form.
pub fn apply_to_set(set: &[Constraint], g: &Symmetry, scope: &[VarId]) -> Result<Vec<Constraint>> {
    set.iter().map(|c| c.apply_symmetry(g, scope)).collect()
}

/// `g` of the bespoke series set.
pub fn build_ais_set(g: AisSymmetry, x: &[VarId]) -> Vec<Constraint> {
    apply_to_set(&ais_base_set(x), &g.symmetry(x.len()), x).expect("the series group acts affinely")
}

/// Decision variables under piecewise interchangeability, with one
/// occurrence counter per (variable block, value).
#[derive(Clone, Debug)]
pub struct PiecewiseLayout {
    pub var_parts: Partitions,
    pub val_parts: Partitions,
    pub value_base: i32,
    pub xs: Vec<VarId>,
    /// `occ[i][k]` counts value `value_base + k` in variable block `i`.
    pub occ: Vec<Vec<VarId>>,
}

impl PiecewiseLayout {
    /// Creates the counters and posts one Gcc per variable block.
    pub fn post(
        store: &mut Store,
        xs: Vec<VarId>,
        var_parts: Partitions,
        val_parts: Partitions,
        value_base: i32,
    ) -> Result<Self> {
        if var_parts.len() != xs.len() {
            return Err(Error::Config(format!(
                "variable partitions cover {} variables, model has {}",
                var_parts.len(),
                xs.len()
            )));
        }
        let m = val_parts.len();
        let values: Vec<i32> = (0..m as i32).map(|k| value_base + k).collect();
        let mut occ = Vec::new();
        for block in var_parts.blocks() {
            let counts: Vec<VarId> = (0..m).map(|_| store.new_var(0, block.len() as i32)).collect();
            store
                .post(
                    Constraint::Gcc { vars: xs[block].to_vec(), values: values.clone(), counts: counts.clone() },
                    PostMode::Permanent,
                )
                .map_err(|_| Error::Internal("occurrence channeling fails at the root".into()))?;
            occ.push(counts);
        }
        Ok(PiecewiseLayout { var_parts, val_parts, value_base, xs, occ })
    }

    /// `(O^1_k, ..., O^a_k)` for value index `k`.
    pub fn signature(&self, k: usize) -> Vec<Term> {
        self.occ.iter().map(|o| Term::var(o[k])).collect()
    }

    /// Signature of value index `k` in a complete assignment of `xs`.
    pub fn signature_of(&self, a: &[i32], k: usize) -> Vec<i32> {
        let v = self.value_base + k as i32;
        self.var_parts.blocks().map(|b| a[b].iter().filter(|&&x| x == v).count() as i32).collect()
    }

    /// `X_i <= X_j`.
    pub fn var_order(&self, i: usize, j: usize) -> Constraint {
        Constraint::le(self.xs[i], self.xs[j])
    }

    /// `sig(j) >=lex sig(k)`.
    pub fn sig_order(&self, j: usize, k: usize) -> Constraint {
        Constraint::lex_le(self.signature(k), self.signature(j))
    }
}

/// The ordering part of the piecewise set for `(sigma, theta)`:
/// `X_sigma(p) <= ... <= X_sigma(p'-1)` in every variable block and
/// `sig(theta(q)) >=lex ... >=lex sig(theta(q'-1))` in every value block.
/// The Gcc channeling is posted once by [`PiecewiseLayout::post`].
pub fn piecewise_chains(layout: &PiecewiseLayout, g: &PiecewiseSymmetry) -> Vec<Constraint> {
    let mut out = Vec::new();
    for block in layout.var_parts.blocks() {
        for k in block.start..block.end - 1 {
            out.push(layout.var_order(g.sigma_of(k), g.sigma_of(k + 1)));
        }
    }
    for block in layout.val_parts.blocks() {
        for k in block.start..block.end - 1 {
            out.push(layout.sig_order(g.theta_index(k), g.theta_index(k + 1)));
        }
    }
    out
}

/// Which symmetry of the piecewise set a static method posts.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum StaticStrategy {
    Lex,
    Antilex,
    Random(u64),
}

impl StaticStrategy {
    pub fn select(self, var_parts: &Partitions, val_parts: &Partitions, value_base: i32) -> PiecewiseSymmetry {
        match self {
            StaticStrategy::Lex => PiecewiseSymmetry::identity(var_parts, val_parts, value_base),
            StaticStrategy::Antilex => PiecewiseSymmetry::reversal(var_parts, val_parts, value_base),
            StaticStrategy::Random(seed) => {
                let mut rng = ChaCha8Rng::seed_from_u64(seed);
                PiecewiseSymmetry::sample(var_parts, val_parts, value_base, &mut rng)
            }
        }
    }
}
