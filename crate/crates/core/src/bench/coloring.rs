//! Graph coloring with block structure: vertices in the same block are
//! interchangeable, and so are all colors.

use rand::Rng;

use crate::error::{Error, Result};
use crate::symmetry::Partitions;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ColoringInstance {
    pub n: usize,
    /// Available colors `1..=colors`.
    pub colors: usize,
    pub var_parts: Partitions,
    /// `(u, v)` with `u < v`, sorted.
    pub edges: Vec<(usize, usize)>,
}

/// Block sizes drawn uniformly from `1..=max_part`, the last one truncated.
pub fn random_sizes<R: Rng + ?Sized>(n: usize, max_part: usize, rng: &mut R) -> Vec<usize> {
    let mut sizes = Vec::new();
    let mut left = n;
    while left > 0 {
        let s = rng.random_range(1..=max_part).min(left);
        sizes.push(s);
        left -= s;
    }
    sizes
}

pub fn generate<R: Rng + ?Sized>(n: usize, max_part: usize, rng: &mut R) -> Result<ColoringInstance> {
    if n == 0 || max_part == 0 {
        return Err(Error::Config("coloring needs at least one vertex and a positive block size".into()));
    }
    let var_parts = Partitions::from_sizes(&random_sizes(n, max_part, rng))?;
    let blocks: Vec<_> = var_parts.blocks().collect();
    let mut edges = Vec::new();
    for (a, ba) in blocks.iter().enumerate() {
        for (b, bb) in blocks.iter().enumerate().skip(a) {
            if !rng.random_bool(0.5) {
                continue;
            }
            for u in ba.clone() {
                for v in bb.clone() {
                    if u < v && (a != b || u != v) {
                        edges.push((u, v));
                    }
                }
            }
        }
    }
    edges.sort_unstable();
    Ok(ColoringInstance { n, colors: n, var_parts, edges })
}

impl ColoringInstance {
    pub fn validate(&self) -> Result<()> {
        if self.var_parts.len() != self.n {
            return Err(Error::Config(format!("partitions cover {} of {} vertices", self.var_parts.len(), self.n)));
        }
        if self.colors == 0 {
            return Err(Error::Config("at least one color is required".into()));
        }
        for &(u, v) in &self.edges {
            if u >= v || v >= self.n {
                return Err(Error::Config(format!("bad edge {u} {v}")));
            }
        }
        Ok(())
    }

    /// Fewest colors in a proper coloring, by backtracking over color
    /// assignments where each vertex takes a used color or the next unused
    /// one; `None` if `colors` is not enough.
    pub fn brute_force_chromatic(&self) -> Option<usize> {
        let mut adj = vec![Vec::new(); self.n];
        for &(u, v) in &self.edges {
            adj[v].push(u);
        }
        fn colorable(v: usize, used: usize, k: usize, adj: &[Vec<usize>], col: &mut [usize]) -> bool {
            if v == col.len() {
                return true;
            }
            for c in 0..k.min(used + 1) {
                if adj[v].iter().all(|&u| col[u] != c) {
                    col[v] = c;
                    if colorable(v + 1, used.max(c + 1), k, adj, col) {
                        return true;
                    }
                }
            }
            false
        }
        (1..=self.colors).find(|&k| colorable(0, 0, k, &adj, &mut vec![usize::MAX; self.n]))
    }
}
