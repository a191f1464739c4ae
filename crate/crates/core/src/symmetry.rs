//! Symmetries, the all-interval-series group, piecewise interchangeability and
//! a brute-force symmetry-class oracle.
//!
//! A symmetry `g = (sigma, theta)` acts on a complete assignment by
//! `result[sigma(i)] = theta(a[i])`.

use std::collections::{BTreeMap, BTreeSet, HashMap, VecDeque};
use std::fmt;
use std::ops::Range;

use rand::seq::SliceRandom;
use rand::Rng;

use crate::error::{Error, Result};

/// A bijection on values.
#[derive(Clone, Debug)]
pub enum ValueMap {
    Identity,
    /// `v -> scale * v + offset`, scale is +1 or -1.
    Affine { scale: i32, offset: i32 },
    /// `lo + k -> map[k]`; values outside the table are fixed.
    Table { lo: i32, map: Vec<i32> },
}

impl ValueMap {
    pub fn apply(&self, v: i32) -> i32 {
        match self {
            ValueMap::Identity => v,
            ValueMap::Affine { scale, offset } => scale * v + offset,
            ValueMap::Table { lo, map } => {
                let k = v as i64 - *lo as i64;
                if k >= 0 && (k as usize) < map.len() {
                    map[k as usize]
                } else {
                    v
                }
            }
        }
    }

    pub fn is_identity(&self) -> bool {
        match self {
            ValueMap::Identity => true,
            ValueMap::Affine { scale, offset } => *scale == 1 && *offset == 0,
            ValueMap::Table { lo, map } => map.iter().enumerate().all(|(k, &v)| v == lo + k as i32),
        }
    }

    pub fn inverse(&self) -> ValueMap {
        match self {
            ValueMap::Identity => ValueMap::Identity,
            ValueMap::Affine { scale, offset } => ValueMap::Affine { scale: *scale, offset: -scale * offset },
            ValueMap::Table { lo, map } => {
                let mut inv = vec![0; map.len()];
                for (k, &v) in map.iter().enumerate() {
                    inv[(v - lo) as usize] = lo + k as i32;
                }
                ValueMap::Table { lo: *lo, map: inv }
            }
        }
    }

    /// `self` after `inner`.
    pub fn after(&self, inner: &ValueMap) -> ValueMap {
        match (self, inner) {
            (a, b) if b.is_identity() => a.clone(),
            (a, b) if a.is_identity() => b.clone(),
            (ValueMap::Affine { scale: s1, offset: o1 }, ValueMap::Affine { scale: s2, offset: o2 }) => {
                ValueMap::Affine { scale: s1 * s2, offset: s1 * o2 + o1 }
            }
            (ValueMap::Table { lo: l1, map: m1 }, ValueMap::Table { lo: l2, map: m2 }) => {
                let lo = (*l1).min(*l2);
                let hi = (l1 + m1.len() as i32).max(l2 + m2.len() as i32);
                ValueMap::Table { lo, map: (lo..hi).map(|v| self.apply(inner.apply(v))).collect() }
            }
            (ValueMap::Table { lo, map }, other) | (other, ValueMap::Table { lo, map }) => {
                // an affine map composed with a table is tabulated over the
                // table's range, which the affine map must preserve
                let range = *lo..*lo + map.len() as i32;
                assert!(
                    range.clone().all(|v| range.contains(&other.apply(v))),
                    "affine value map does not preserve the table's range"
                );
                ValueMap::Table { lo: *lo, map: range.map(|v| self.apply(inner.apply(v))).collect() }
            }
            _ => unreachable!(),
        }
    }
}

impl PartialEq for ValueMap {
    fn eq(&self, other: &Self) -> bool {
        match (self, other) {
            (a, b) if a.is_identity() || b.is_identity() => a.is_identity() && b.is_identity(),
            (ValueMap::Affine { scale: s1, offset: o1 }, ValueMap::Affine { scale: s2, offset: o2 }) => {
                s1 == s2 && o1 == o2
            }
            (ValueMap::Table { lo, map }, other) | (other, ValueMap::Table { lo, map }) => {
                let (lo2, len2) = match other {
                    ValueMap::Table { lo, map } => (*lo, map.len()),
                    _ => (*lo, map.len()),
                };
                let a = (*lo).min(lo2);
                let b = (lo + map.len() as i32).max(lo2 + len2 as i32);
                (a..b).all(|v| self.apply(v) == other.apply(v))
            }
            _ => false,
        }
    }
}

impl Eq for ValueMap {}

/// A variable permutation over positions `0..n` paired with a value map.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Symmetry {
    var_perm: Vec<usize>,
    value_map: ValueMap,
}

impl Symmetry {
    pub fn new(var_perm: Vec<usize>, value_map: ValueMap) -> Result<Self> {
        let mut seen = vec![false; var_perm.len()];
        for &p in &var_perm {
            if p >= seen.len() || seen[p] {
                return Err(Error::Config("variable permutation is not a bijection".into()));
            }
            seen[p] = true;
        }
        if let ValueMap::Table { lo, map } = &value_map {
            let mut seen = vec![false; map.len()];
            for &v in map {
                let k = v as i64 - *lo as i64;
                if k < 0 || k as usize >= map.len() || seen[k as usize] {
                    return Err(Error::Config("value table is not a bijection".into()));
                }
                seen[k as usize] = true;
            }
        }
        if let ValueMap::Affine { scale, .. } = value_map {
            if scale != 1 && scale != -1 {
                return Err(Error::Config("affine value maps must have scale +1 or -1".into()));
            }
        }
        Ok(Symmetry { var_perm, value_map })
    }

    pub fn identity(n: usize) -> Self {
        Symmetry { var_perm: (0..n).collect(), value_map: ValueMap::Identity }
    }

    pub fn len(&self) -> usize {
        self.var_perm.len()
    }

    pub fn is_empty(&self) -> bool {
        self.var_perm.is_empty()
    }

    pub fn var_perm(&self) -> &[usize] {
        &self.var_perm
    }

    pub fn value_map(&self) -> &ValueMap {
        &self.value_map
    }

    pub fn is_identity(&self) -> bool {
        self.var_perm.iter().enumerate().all(|(i, &p)| i == p) && self.value_map.is_identity()
    }

    /// `result[sigma(i)] = theta(a[i])`.
    pub fn apply_to_assignment(&self, a: &[i32]) -> Vec<i32> {
        assert_eq!(a.len(), self.var_perm.len(), "assignment length does not match the symmetry");
        let mut out = vec![0; a.len()];
        for (i, &v) in a.iter().enumerate() {
            out[self.var_perm[i]] = self.value_map.apply(v);
        }
        out
    }

    /// `g o h`: first `h`, then `g`.
    pub fn compose(g: &Symmetry, h: &Symmetry) -> Symmetry {
        assert_eq!(g.len(), h.len());
        Symmetry {
            var_perm: h.var_perm.iter().map(|&j| g.var_perm[j]).collect(),
            value_map: g.value_map.after(&h.value_map),
        }
    }

    pub fn invert(&self) -> Symmetry {
        let mut inv = vec![0; self.var_perm.len()];
        for (i, &p) in self.var_perm.iter().enumerate() {
            inv[p] = i;
        }
        Symmetry { var_perm: inv, value_map: self.value_map.inverse() }
    }
}

/// The four elements of the all-interval-series group, in enumeration order.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum AisSymmetry {
    Identity,
    Reverse,
    Invert,
    InvertReverse,
}

impl AisSymmetry {
    pub const ALL: [AisSymmetry; 4] =
        [AisSymmetry::Identity, AisSymmetry::Reverse, AisSymmetry::Invert, AisSymmetry::InvertReverse];

    pub fn symmetry(self, n: usize) -> Symmetry {
        let rev: Vec<usize> = (0..n).rev().collect();
        let inv = ValueMap::Affine { scale: -1, offset: n as i32 - 1 };
        match self {
            AisSymmetry::Identity => Symmetry::identity(n),
            AisSymmetry::Reverse => Symmetry { var_perm: rev, value_map: ValueMap::Identity },
            AisSymmetry::Invert => Symmetry { var_perm: (0..n).collect(), value_map: inv },
            AisSymmetry::InvertReverse => Symmetry { var_perm: rev, value_map: inv },
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            AisSymmetry::Identity => "id",
            AisSymmetry::Reverse => "rev",
            AisSymmetry::Invert => "inv",
            AisSymmetry::InvertReverse => "inv-rev",
        }
    }

    pub fn parse(s: &str) -> Option<Self> {
        Self::ALL.into_iter().find(|g| g.name() == s)
    }
}

impl fmt::Display for AisSymmetry {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// Consecutive blocks `bounds[i]..bounds[i+1]` covering `0..bounds.last()`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Partitions {
    bounds: Vec<usize>,
}

impl Partitions {
    pub fn new(bounds: Vec<usize>) -> Result<Self> {
        if bounds.len() < 2 || bounds[0] != 0 {
            return Err(Error::Config("partition bounds must start at 0 and list at least one block".into()));
        }
        if bounds.windows(2).any(|w| w[0] >= w[1]) {
            return Err(Error::Config("partition bounds must be strictly increasing".into()));
        }
        Ok(Partitions { bounds })
    }

    pub fn from_sizes(sizes: &[usize]) -> Result<Self> {
        let mut bounds = vec![0];
        for &s in sizes {
            bounds.push(bounds.last().unwrap() + s);
        }
        Self::new(bounds)
    }

    pub fn singletons(n: usize) -> Self {
        Partitions { bounds: (0..=n).collect() }
    }

    pub fn bounds(&self) -> &[usize] {
        &self.bounds
    }

    /// Number of blocks.
    pub fn count(&self) -> usize {
        self.bounds.len() - 1
    }

    /// Number of covered indices.
    pub fn len(&self) -> usize {
        *self.bounds.last().unwrap()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn block(&self, i: usize) -> Range<usize> {
        self.bounds[i]..self.bounds[i + 1]
    }

    pub fn blocks(&self) -> impl Iterator<Item = Range<usize>> + '_ {
        self.bounds.windows(2).map(|w| w[0]..w[1])
    }

    pub fn sizes(&self) -> Vec<usize> {
        self.blocks().map(|r| r.len()).collect()
    }

    pub fn block_of(&self, k: usize) -> usize {
        self.bounds.partition_point(|&b| b <= k) - 1
    }
}

/// Per-block permutations of variables and of values. Values are
/// `value_base + k` for `k` in the value partitions' index space.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PiecewiseSymmetry {
    pub var_parts: Partitions,
    pub val_parts: Partitions,
    pub value_base: i32,
    /// `sigma[i]` permutes block `i` of the variables (local indices).
    pub sigma: Vec<Vec<usize>>,
    /// `theta[j]` permutes block `j` of the values (local indices).
    pub theta: Vec<Vec<usize>>,
}

impl PiecewiseSymmetry {
    pub fn identity(var_parts: &Partitions, val_parts: &Partitions, value_base: i32) -> Self {
        PiecewiseSymmetry {
            sigma: var_parts.sizes().into_iter().map(|s| (0..s).collect()).collect(),
            theta: val_parts.sizes().into_iter().map(|s| (0..s).collect()).collect(),
            var_parts: var_parts.clone(),
            val_parts: val_parts.clone(),
            value_base,
        }
    }

    /// Full reversal inside every block.
    pub fn reversal(var_parts: &Partitions, val_parts: &Partitions, value_base: i32) -> Self {
        PiecewiseSymmetry {
            sigma: var_parts.sizes().into_iter().map(|s| (0..s).rev().collect()).collect(),
            theta: val_parts.sizes().into_iter().map(|s| (0..s).rev().collect()).collect(),
            var_parts: var_parts.clone(),
            val_parts: val_parts.clone(),
            value_base,
        }
    }

    /// Uniform over the product of the per-block symmetric groups.
    pub fn sample<R: Rng + ?Sized>(var_parts: &Partitions, val_parts: &Partitions, value_base: i32, rng: &mut R) -> Self {
        let mut g = Self::identity(var_parts, val_parts, value_base);
        for p in g.sigma.iter_mut().chain(g.theta.iter_mut()) {
            p.shuffle(rng);
        }
        g
    }

    /// Global position of `sigma(i)`.
    pub fn sigma_of(&self, i: usize) -> usize {
        let b = self.var_parts.block_of(i);
        let start = self.var_parts.bounds()[b];
        start + self.sigma[b][i - start]
    }

    /// Global value index of `theta(k)`.
    pub fn theta_index(&self, k: usize) -> usize {
        let b = self.val_parts.block_of(k);
        let start = self.val_parts.bounds()[b];
        start + self.theta[b][k - start]
    }

    pub fn to_symmetry(&self) -> Symmetry {
        let var_perm = (0..self.var_parts.len()).map(|i| self.sigma_of(i)).collect();
        let map = (0..self.val_parts.len()).map(|k| self.value_base + self.theta_index(k) as i32).collect();
        Symmetry { var_perm, value_map: ValueMap::Table { lo: self.value_base, map } }
    }
}

/// Swaps of consecutive variables and transpositions of consecutive values
/// inside each block.
pub fn pair_generators(var_parts: &Partitions, val_parts: &Partitions, value_base: i32) -> Vec<Symmetry> {
    let n = var_parts.len();
    let m = val_parts.len();
    let mut out = Vec::new();
    for block in var_parts.blocks() {
        for i in block.start..block.end - 1 {
            let mut p: Vec<usize> = (0..n).collect();
            p.swap(i, i + 1);
            out.push(Symmetry { var_perm: p, value_map: ValueMap::Identity });
        }
    }
    for block in val_parts.blocks() {
        for k in block.start..block.end - 1 {
            let mut map: Vec<i32> = (0..m as i32).map(|v| v + value_base).collect();
            map.swap(k, k + 1);
            out.push(Symmetry { var_perm: (0..n).collect(), value_map: ValueMap::Table { lo: value_base, map } });
        }
    }
    out
}

/// Every product of within-block permutations, identity included.
/// Fails when the group has more than `bound` elements.
pub fn piecewise_group(var_parts: &Partitions, val_parts: &Partitions, value_base: i32, bound: usize) -> Result<Vec<Symmetry>> {
    let fact = |k: usize| (1..=k).try_fold(1usize, |a, b| a.checked_mul(b));
    let size = var_parts
        .sizes()
        .into_iter()
        .chain(val_parts.sizes())
        .try_fold(1usize, |a, k| fact(k).and_then(|f| a.checked_mul(f)));
    if size.is_none_or(|s| s > bound) {
        return Err(Error::GroupTooLarge(bound));
    }
    // all combinations of per-block permutations, as local index vectors
    fn product(parts: &Partitions) -> Vec<Vec<usize>> {
        let mut out = vec![Vec::new()];
        for block in parts.blocks() {
            let perms = all_permutations(block.len());
            out = out
                .into_iter()
                .flat_map(|prefix: Vec<usize>| {
                    perms.iter().map(move |p| {
                        let mut v = prefix.clone();
                        v.extend(p.iter().map(|&k| block.start + k));
                        v
                    })
                })
                .collect();
        }
        out
    }
    let mut group = Vec::new();
    for var_perm in product(var_parts) {
        for q in product(val_parts) {
            let map = q.iter().map(|&k| value_base + k as i32).collect();
            group.push(Symmetry { var_perm: var_perm.clone(), value_map: ValueMap::Table { lo: value_base, map } });
        }
    }
    Ok(group)
}

/// Orbits of a solution set; each class is keyed by its lexicographically
/// least member.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct SymmetryClassTable {
    pub classes: BTreeMap<Vec<i32>, BTreeSet<Vec<i32>>>,
}

impl SymmetryClassTable {
    pub fn len(&self) -> usize {
        self.classes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.classes.is_empty()
    }

    /// Representative of the class containing `a`.
    pub fn representative(&self, a: &[i32]) -> Option<&Vec<i32>> {
        self.classes.iter().find(|(_, members)| members.contains(a)).map(|(r, _)| r)
    }

    /// Map from every member to its representative.
    pub fn index(&self) -> HashMap<Vec<i32>, Vec<i32>> {
        let mut out = HashMap::new();
        for (rep, members) in &self.classes {
            for m in members {
                out.insert(m.clone(), rep.clone());
            }
        }
        out
    }

    /// Number of members of `subset` in each class, for every class.
    pub fn hits(&self, subset: &[Vec<i32>]) -> BTreeMap<Vec<i32>, usize> {
        let idx = self.index();
        let mut out: BTreeMap<Vec<i32>, usize> = self.classes.keys().map(|k| (k.clone(), 0)).collect();
        for a in subset {
            if let Some(r) = idx.get(a) {
                *out.get_mut(r).unwrap() += 1;
            }
        }
        out
    }
}

/// Closes each solution under the generated group. `bound` caps the total
/// number of orbit members visited.
pub fn symmetry_classes(solutions: &[Vec<i32>], generators: &[Symmetry], bound: usize) -> Result<SymmetryClassTable> {
    let mut table = SymmetryClassTable::default();
    let mut done: BTreeSet<Vec<i32>> = BTreeSet::new();
    let mut visited = 0usize;
    for s in solutions {
        if done.contains(s) {
            continue;
        }
        let mut orbit = BTreeSet::new();
        let mut queue = VecDeque::new();
        orbit.insert(s.clone());
        queue.push_back(s.clone());
        while let Some(a) = queue.pop_front() {
            visited += 1;
            if visited > bound {
                return Err(Error::GroupTooLarge(bound));
            }
            for g in generators {
                let b = g.apply_to_assignment(&a);
                if orbit.insert(b.clone()) {
                    queue.push_back(b);
                }
            }
        }
        done.extend(orbit.iter().cloned());
        let rep = orbit.iter().next().unwrap().clone();
        table.classes.insert(rep, orbit);
    }
    Ok(table)
}

/// Canonical member of the piecewise class of `a`, computed directly: the
/// least image over all value permutations after sorting each variable
/// block.
pub fn piecewise_canonical(a: &[i32], var_parts: &Partitions, val_parts: &Partitions, value_base: i32) -> Vec<i32> {
    let perms: Vec<Vec<Vec<usize>>> = val_parts.sizes().into_iter().map(all_permutations).collect();
    let mut best: Option<Vec<i32>> = None;
    let mut choice = vec![0usize; perms.len()];
    loop {
        let theta = PiecewiseSymmetry {
            var_parts: var_parts.clone(),
            val_parts: val_parts.clone(),
            value_base,
            sigma: var_parts.sizes().into_iter().map(|s| (0..s).collect()).collect(),
            theta: choice.iter().zip(&perms).map(|(&c, p)| p[c].clone()).collect(),
        };
        let mut img: Vec<i32> =
            a.iter().map(|&v| value_base + theta.theta_index((v - value_base) as usize) as i32).collect();
        for block in var_parts.blocks() {
            img[block].sort_unstable();
        }
        if best.as_ref().is_none_or(|b| img < *b) {
            best = Some(img);
        }
        let mut k = 0;
        while k < choice.len() {
            choice[k] += 1;
            if choice[k] < perms[k].len() {
                break;
            }
            choice[k] = 0;
            k += 1;
        }
        if k == choice.len() {
            break;
        }
    }
    best.unwrap_or_default()
}

/// All permutations of `0..n` in lexicographic order.
pub fn all_permutations(n: usize) -> Vec<Vec<usize>> {
    let mut p: Vec<usize> = (0..n).collect();
    let mut out = vec![p.clone()];
    loop {
        let Some(i) = (1..n).rev().find(|&i| p[i - 1] < p[i]) else {
            return out;
        };
        let j = (i..n).rev().find(|&j| p[j] > p[i - 1]).unwrap();
        p.swap(i - 1, j);
        p[i..].reverse();
        out.push(p.clone());
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    const A: [i32; 11] = [3, 7, 4, 6, 5, 0, 10, 1, 9, 2, 8];

    #[test]
    fn reversal_and_inversion_of_the_series() {
        let rev = AisSymmetry::Reverse.symmetry(11);
        assert_eq!(rev.apply_to_assignment(&A), vec![8, 2, 9, 1, 10, 0, 5, 6, 4, 7, 3]);
        let inv = AisSymmetry::Invert.symmetry(11);
        assert_eq!(inv.apply_to_assignment(&A), vec![7, 3, 6, 4, 5, 10, 0, 9, 1, 8, 2]);
        let both = Symmetry::compose(&inv, &rev);
        assert_eq!(both.apply_to_assignment(&A), vec![2, 8, 1, 9, 0, 10, 5, 4, 6, 3, 7]);
        assert_eq!(both, AisSymmetry::InvertReverse.symmetry(11));
        assert!(Symmetry::compose(&rev, &rev).is_identity());
        assert!(Symmetry::identity(11).invert().is_identity());
    }

    #[test]
    fn one_class_for_the_four_series() {
        let sols: Vec<Vec<i32>> = AisSymmetry::ALL.iter().map(|g| g.symmetry(11).apply_to_assignment(&A)).collect();
        let gens: Vec<Symmetry> = AisSymmetry::ALL.iter().map(|g| g.symmetry(11)).collect();
        let t = symmetry_classes(&sols, &gens, 1000).unwrap();
        assert_eq!(t.len(), 1);
        assert_eq!(t.classes.values().next().unwrap().len(), 4);
        assert!(symmetry_classes(&[], &gens, 10).unwrap().is_empty());
    }

    #[test]
    fn sampler_is_uniform_on_a_pair() {
        let vars = Partitions::from_sizes(&[2]).unwrap();
        let vals = Partitions::from_sizes(&[1]).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        let swaps = (0..10_000)
            .filter(|_| PiecewiseSymmetry::sample(&vars, &vals, 0, &mut rng).sigma[0] == vec![1, 0])
            .count();
        let freq = swaps as f64 / 10_000.0;
        assert!((freq - 0.5).abs() < 0.02, "swap frequency {freq}");
        let single = Partitions::singletons(4);
        assert!(PiecewiseSymmetry::sample(&single, &single, 0, &mut rng).to_symmetry().is_identity());
    }

    #[test]
    fn pair_generator_counts() {
        let p3 = Partitions::from_sizes(&[3]).unwrap();
        let p2 = Partitions::from_sizes(&[2]).unwrap();
        assert_eq!(pair_generators(&p3, &Partitions::singletons(1), 0).len(), 2);
        assert_eq!(pair_generators(&Partitions::singletons(4), &Partitions::singletons(3), 0).len(), 0);
        assert_eq!(pair_generators(&p3, &p2, 0).len(), 3);
    }

    #[test]
    fn canonical_form_agrees_with_orbits() {
        let vars = Partitions::from_sizes(&[2, 1]).unwrap();
        let vals = Partitions::from_sizes(&[2, 1]).unwrap();
        let mut all = Vec::new();
        for k in 0..27 {
            all.push(vec![k % 3, (k / 3) % 3, k / 9]);
        }
        let gens = pair_generators(&vars, &vals, 0);
        let t = symmetry_classes(&all, &gens, 10_000).unwrap();
        for members in t.classes.values() {
            let canon: BTreeSet<Vec<i32>> = members.iter().map(|a| piecewise_canonical(a, &vars, &vals, 0)).collect();
            assert_eq!(canon.len(), 1);
        }
        let canon_all: BTreeSet<Vec<i32>> = all.iter().map(|a| piecewise_canonical(a, &vars, &vals, 0)).collect();
        assert_eq!(canon_all.len(), t.len());
    }

    fn arb_piecewise() -> impl Strategy<Value = (PiecewiseSymmetry, PiecewiseSymmetry, Vec<i32>)> {
        (any::<u64>(), proptest::collection::vec(0i32..4, 6)).prop_map(|(seed, a)| {
            let vars = Partitions::from_sizes(&[3, 1, 2]).unwrap();
            let vals = Partitions::from_sizes(&[2, 2]).unwrap();
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let g = PiecewiseSymmetry::sample(&vars, &vals, 0, &mut rng);
            let h = PiecewiseSymmetry::sample(&vars, &vals, 0, &mut rng);
            (g, h, a)
        })
    }

    proptest! {
        #[test]
        fn action_respects_composition((g, h, a) in arb_piecewise()) {
            let (g, h) = (g.to_symmetry(), h.to_symmetry());
            let gh = Symmetry::compose(&g, &h);
            prop_assert_eq!(gh.apply_to_assignment(&a), g.apply_to_assignment(&h.apply_to_assignment(&a)));
            prop_assert!(Symmetry::compose(&g, &g.invert()).is_identity());
        }

        #[test]
        fn piecewise_preserves_blocks((g, _h, a) in arb_piecewise()) {
            let vars = &g.var_parts;
            for i in 0..6 {
                prop_assert_eq!(vars.block_of(i), vars.block_of(g.sigma_of(i)));
            }
            for k in 0..4 {
                prop_assert_eq!(g.val_parts.block_of(k), g.val_parts.block_of(g.theta_index(k)));
            }
            let img = g.to_symmetry().apply_to_assignment(&a);
            prop_assert_eq!(img.len(), a.len());
        }

        #[test]
        fn ais_group_closed(i in 0usize..4, j in 0usize..4, k in 0usize..4) {
            let gs: Vec<Symmetry> = AisSymmetry::ALL.iter().map(|g| g.symmetry(7)).collect();
            let gh = Symmetry::compose(&gs[i], &gs[j]);
            prop_assert!(gs.contains(&gh));
            let left = Symmetry::compose(&gh, &gs[k]);
            let right = Symmetry::compose(&gs[i], &Symmetry::compose(&gs[j], &gs[k]));
            prop_assert_eq!(left, right);
        }
    }
}
