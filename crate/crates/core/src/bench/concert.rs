//! Concert-hall scheduling: accept applications and assign them halls so
//! that overlapping accepted applications use different halls. Hall `m + 1`
//! means rejected.

use rand::Rng;

use crate::bench::coloring::random_sizes;
use crate::error::{Error, Result};
use crate::symmetry::Partitions;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Application {
    pub start: i32,
    /// Exclusive.
    pub end: i32,
    pub offer: i32,
}

impl Application {
    pub fn overlaps(&self, other: &Application) -> bool {
        self.start < other.end && other.start < self.end
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ConcertInstance {
    pub halls: usize,
    /// Blocks of identical applications.
    pub var_parts: Partitions,
    pub apps: Vec<Application>,
}

pub fn generate<R: Rng + ?Sized>(n: usize, m: usize, max_part: usize, rng: &mut R) -> Result<ConcertInstance> {
    if n == 0 || m == 0 || max_part == 0 {
        return Err(Error::Config("concert hall needs applications, halls and a positive block size".into()));
    }
    let var_parts = Partitions::from_sizes(&random_sizes(n, max_part, rng))?;
    let mut apps = Vec::new();
    for block in var_parts.blocks() {
        let start = rng.random_range(0..=20);
        let app = Application { start, end: start + rng.random_range(1..=10), offer: rng.random_range(1..=100) };
        apps.extend(std::iter::repeat_n(app, block.len()));
    }
    Ok(ConcertInstance { halls: m, var_parts, apps })
}

impl ConcertInstance {
    pub fn n(&self) -> usize {
        self.apps.len()
    }

    pub fn rejected(&self) -> i32 {
        self.halls as i32 + 1
    }

    /// Halls first, then the reject value on its own.
    pub fn value_parts(&self) -> Partitions {
        Partitions::from_sizes(&[self.halls, 1]).expect("halls are positive")
    }

    pub fn validate(&self) -> Result<()> {
        if self.halls == 0 {
            return Err(Error::Config("at least one hall is required".into()));
        }
        if self.var_parts.len() != self.n() {
            return Err(Error::Config(format!("partitions cover {} of {} applications", self.var_parts.len(), self.n())));
        }
        for block in self.var_parts.blocks() {
            if self.apps[block.clone()].iter().any(|a| *a != self.apps[block.start]) {
                return Err(Error::Config(format!("applications {block:?} share a block but differ")));
            }
        }
        if self.apps.iter().any(|a| a.end <= a.start || a.offer < 0) {
            return Err(Error::Config("applications need positive length and non-negative offers".into()));
        }
        Ok(())
    }

    /// Checks a complete or partial (prefix) assignment.
    pub fn is_feasible(&self, a: &[i32]) -> bool {
        let r = self.rejected();
        (0..a.len()).all(|i| {
            (1..=r).contains(&a[i])
                && (0..i).all(|j| a[i] == r || a[i] != a[j] || !self.apps[i].overlaps(&self.apps[j]))
        })
    }

    pub fn profit(&self, a: &[i32]) -> i32 {
        self.apps.iter().zip(a).filter(|(_, &v)| v != self.rejected()).map(|(app, _)| app.offer).sum()
    }

    /// Best profit over all `(m + 1)^n` assignments, cutting off a partial
    /// assignment as soon as it has a hall clash.
    pub fn brute_force_optimum(&self) -> i32 {
        fn rec(inst: &ConcertInstance, a: &mut Vec<i32>, best: &mut i32) {
            if a.len() == inst.n() {
                *best = (*best).max(inst.profit(a));
                return;
            }
            for v in 1..=inst.rejected() {
                a.push(v);
                if inst.is_feasible(a) {
                    rec(inst, a, best);
                }
                a.pop();
            }
        }
        let mut best = 0;
        rec(self, &mut Vec::new(), &mut best);
        best
    }
}
