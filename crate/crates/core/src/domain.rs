//! Finite integer domains.
//!
//! Small domains (at most 64 consecutive candidate values) are stored as a
//! bitset anchored at `base`. Wider domains fall back to an interval, for
//! which only bound updates are exact; removing an interior value from an
//! interval is a no-op.

use std::fmt;

/// Width of the bitset representation.
pub const BITSET_WIDTH: i64 = 64;

#[derive(Clone, Copy, PartialEq, Eq, Hash)]
pub enum Domain {
    Bits { base: i32, bits: u64 },
    Range { lo: i32, hi: i32 },
}

impl Domain {
    /// Domain `lo..=hi`. Empty when `lo > hi`.
    pub fn new(lo: i32, hi: i32) -> Self {
        if lo > hi {
            return Domain::Bits { base: lo, bits: 0 };
        }
        let width = hi as i64 - lo as i64 + 1;
        if width <= BITSET_WIDTH {
            let bits = if width == 64 { u64::MAX } else { (1u64 << width) - 1 };
            Domain::Bits { base: lo, bits }
        } else {
            Domain::Range { lo, hi }
        }
    }

    pub fn singleton(v: i32) -> Self {
        Domain::Bits { base: v, bits: 1 }
    }

    /// Builds a domain holding exactly `values`. Values must span fewer than
    /// 64 integers.
    pub fn from_values(values: &[i32]) -> Self {
        let Some(&lo) = values.iter().min() else {
            return Domain::Bits { base: 0, bits: 0 };
        };
        let mut bits = 0u64;
        for &v in values {
            let off = (v as i64 - lo as i64) as u32;
            assert!((off as i64) < BITSET_WIDTH, "value set too wide for a bitset domain");
            bits |= 1 << off;
        }
        Domain::Bits { base: lo, bits }
    }

    pub fn is_empty(&self) -> bool {
        match *self {
            Domain::Bits { bits, .. } => bits == 0,
            Domain::Range { lo, hi } => lo > hi,
        }
    }

    pub fn min(&self) -> i32 {
        match *self {
            Domain::Bits { base, bits } => base + bits.trailing_zeros() as i32,
            Domain::Range { lo, .. } => lo,
        }
    }

    pub fn max(&self) -> i32 {
        match *self {
            Domain::Bits { base, bits } => base + 63 - bits.leading_zeros() as i32,
            Domain::Range { hi, .. } => hi,
        }
    }

    pub fn size(&self) -> u64 {
        match *self {
            Domain::Bits { bits, .. } => bits.count_ones() as u64,
            Domain::Range { lo, hi } => {
                if lo > hi {
                    0
                } else {
                    (hi as i64 - lo as i64 + 1) as u64
                }
            }
        }
    }

    pub fn is_fixed(&self) -> bool {
        self.size() == 1
    }

    pub fn contains(&self, v: i32) -> bool {
        match *self {
            Domain::Bits { base, bits } => {
                let off = v as i64 - base as i64;
                (0..BITSET_WIDTH).contains(&off) && bits & (1 << off) != 0
            }
            Domain::Range { lo, hi } => lo <= v && v <= hi,
        }
    }

    /// Removes `v`. Returns whether the domain changed.
    pub fn remove(&mut self, v: i32) -> bool {
        match self {
            Domain::Bits { base, bits } => {
                let off = v as i64 - *base as i64;
                if (0..BITSET_WIDTH).contains(&off) && *bits & (1 << off) != 0 {
                    *bits &= !(1 << off);
                    true
                } else {
                    false
                }
            }
            Domain::Range { lo, hi } => {
                if *lo > *hi {
                    false
                } else if v == *lo {
                    *lo += 1;
                    true
                } else if v == *hi {
                    *hi -= 1;
                    true
                } else {
                    false
                }
            }
        }
    }

    /// Restricts to values `>= v`.
    pub fn set_min(&mut self, v: i32) -> bool {
        if self.is_empty() || v <= self.min() {
            return false;
        }
        match self {
            Domain::Bits { base, bits } => {
                let off = v as i64 - *base as i64;
                if off >= BITSET_WIDTH {
                    *bits = 0;
                } else {
                    *bits &= u64::MAX << off;
                }
            }
            Domain::Range { lo, .. } => *lo = v,
        }
        true
    }

    /// Restricts to values `<= v`.
    pub fn set_max(&mut self, v: i32) -> bool {
        if self.is_empty() || v >= self.max() {
            return false;
        }
        match self {
            Domain::Bits { base, bits } => {
                let off = v as i64 - *base as i64;
                if off < 0 {
                    *bits = 0;
                } else {
                    *bits &= u64::MAX >> (63 - off);
                }
            }
            Domain::Range { hi, .. } => *hi = v,
        }
        true
    }

    /// Restricts to the single value `v` (empty if absent).
    pub fn assign(&mut self, v: i32) -> bool {
        if self.is_fixed() && self.min() == v {
            return false;
        }
        if self.contains(v) {
            *self = Domain::singleton(v);
        } else {
            *self = Domain::Bits { base: v, bits: 0 };
        }
        true
    }

    /// Keeps only the values satisfying `keep`. Interval domains only have
    /// their bounds tightened.
    pub fn retain(&mut self, mut keep: impl FnMut(i32) -> bool) -> bool {
        match self {
            Domain::Bits { base, bits } => {
                let mut out = *bits;
                let mut rest = *bits;
                while rest != 0 {
                    let off = rest.trailing_zeros();
                    rest &= rest - 1;
                    if !keep(*base + off as i32) {
                        out &= !(1 << off);
                    }
                }
                let changed = out != *bits;
                *bits = out;
                changed
            }
            Domain::Range { lo, hi } => {
                let (old_lo, old_hi) = (*lo, *hi);
                while *lo <= *hi && !keep(*lo) {
                    *lo += 1;
                }
                while *lo <= *hi && !keep(*hi) {
                    *hi -= 1;
                }
                (old_lo, old_hi) != (*lo, *hi)
            }
        }
    }

    pub fn iter(&self) -> DomainIter {
        match *self {
            Domain::Bits { base, bits } => DomainIter::Bits { base, rest: bits },
            Domain::Range { lo, hi } => DomainIter::Range { next: lo as i64, hi: hi as i64 },
        }
    }

    pub fn values(&self) -> Vec<i32> {
        self.iter().collect()
    }
}

pub enum DomainIter {
    Bits { base: i32, rest: u64 },
    Range { next: i64, hi: i64 },
}

impl Iterator for DomainIter {
    type Item = i32;

    fn next(&mut self) -> Option<i32> {
        match self {
            DomainIter::Bits { base, rest } => {
                if *rest == 0 {
                    return None;
                }
                let off = rest.trailing_zeros();
                *rest &= *rest - 1;
                Some(*base + off as i32)
            }
            DomainIter::Range { next, hi } => {
                if *next > *hi {
                    return None;
                }
                let v = *next as i32;
                *next += 1;
                Some(v)
            }
        }
    }
}

impl fmt::Debug for Domain {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match *self {
            Domain::Bits { .. } => f.debug_set().entries(self.iter()).finish(),
            Domain::Range { lo, hi } => write!(f, "[{lo}..{hi}]"),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn bitset_bounds_and_removal() {
        let mut d = Domain::new(0, 10);
        assert_eq!((d.min(), d.max(), d.size()), (0, 10, 11));
        assert!(d.remove(0));
        assert!(!d.remove(0));
        assert_eq!(d.min(), 1);
        assert!(d.set_max(4));
        assert_eq!(d.values(), vec![1, 2, 3, 4]);
        assert!(d.set_min(4));
        assert!(d.is_fixed());
        assert!(d.set_min(5));
        assert!(d.is_empty());
    }

    #[test]
    fn negative_base_and_full_width() {
        let d = Domain::new(-32, 31);
        assert!(matches!(d, Domain::Bits { .. }));
        assert_eq!((d.min(), d.max(), d.size()), (-32, 31, 64));
        let r = Domain::new(0, 64);
        assert!(matches!(r, Domain::Range { .. }));
    }

    #[test]
    fn interval_interior_removal_is_noop() {
        let mut d = Domain::new(0, 1000);
        assert!(!d.remove(500));
        assert!(d.remove(0));
        assert_eq!(d.min(), 1);
        assert!(d.retain(|v| v >= 10 && v != 999 && v <= 999));
        assert_eq!((d.min(), d.max()), (10, 998));
    }

    #[test]
    fn assign_missing_value_empties() {
        let mut d = Domain::from_values(&[1, 3, 5]);
        assert!(d.assign(2));
        assert!(d.is_empty());
    }
}
