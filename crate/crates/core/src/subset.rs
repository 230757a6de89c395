//! Bitmask subsets of a ground set `{0, ..., n}` with `n <= 30`.

use std::fmt;

use serde::{Deserialize, Serialize};

/// Largest supported index of the ground set; masks live in a `u32`.
pub const MAX_N: usize = 30;

/// A subset of the ground set, one bit per element.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Default, Serialize, Deserialize)]
#[serde(transparent)]
pub struct SubsetMask(pub u32);

impl SubsetMask {
    pub const EMPTY: SubsetMask = SubsetMask(0);

    /// The full ground set of `size` elements.
    pub fn full(size: usize) -> Self {
        debug_assert!(size <= MAX_N + 1);
        if size == 32 {
            SubsetMask(u32::MAX)
        } else {
            SubsetMask((1u32 << size) - 1)
        }
    }

    pub fn singleton(i: usize) -> Self {
        SubsetMask(1 << i)
    }

    pub fn from_elements<I: IntoIterator<Item = usize>>(elems: I) -> Self {
        SubsetMask(elems.into_iter().fold(0, |m, i| m | (1 << i)))
    }

    #[inline]
    pub fn bits(self) -> u32 {
        self.0
    }

    #[inline]
    pub fn len(self) -> usize {
        self.0.count_ones() as usize
    }

    #[inline]
    pub fn is_empty(self) -> bool {
        self.0 == 0
    }

    #[inline]
    pub fn contains(self, i: usize) -> bool {
        self.0 >> i & 1 == 1
    }

    #[inline]
    #[must_use]
    pub fn insert(self, i: usize) -> Self {
        SubsetMask(self.0 | 1 << i)
    }

    #[inline]
    #[must_use]
    pub fn remove(self, i: usize) -> Self {
        SubsetMask(self.0 & !(1 << i))
    }

    #[inline]
    #[must_use]
    pub fn union(self, other: Self) -> Self {
        SubsetMask(self.0 | other.0)
    }

    #[inline]
    #[must_use]
    pub fn intersection(self, other: Self) -> Self {
        SubsetMask(self.0 & other.0)
    }

    #[inline]
    #[must_use]
    pub fn difference(self, other: Self) -> Self {
        SubsetMask(self.0 & !other.0)
    }

    #[inline]
    pub fn is_subset(self, other: Self) -> bool {
        self.0 & !other.0 == 0
    }

    /// Complement inside a ground set of `size` elements.
    #[inline]
    #[must_use]
    pub fn complement(self, size: usize) -> Self {
        SubsetMask::full(size).difference(self)
    }

    /// Smallest element, `None` for the empty set.
    #[inline]
    pub fn min(self) -> Option<usize> {
        (self.0 != 0).then(|| self.0.trailing_zeros() as usize)
    }

    /// Elements in increasing order.
    pub fn iter(self) -> Elements {
        Elements(self.0)
    }

    /// True when no bit at or above `size` is set.
    pub fn fits(self, size: usize) -> bool {
        self.is_subset(SubsetMask::full(size))
    }
}

impl fmt::Debug for SubsetMask {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_set().entries(self.iter()).finish()
    }
}

impl fmt::Display for SubsetMask {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{")?;
        for (k, i) in self.iter().enumerate() {
            if k > 0 {
                write!(f, ",")?;
            }
            write!(f, "{i}")?;
        }
        write!(f, "}}")
    }
}

/// Iterator over the elements of a [`SubsetMask`].
#[derive(Clone)]
pub struct Elements(u32);

impl Iterator for Elements {
    type Item = usize;

    fn next(&mut self) -> Option<usize> {
        if self.0 == 0 {
            return None;
        }
        let i = self.0.trailing_zeros();
        self.0 &= self.0 - 1;
        Some(i as usize)
    }

    fn size_hint(&self) -> (usize, Option<usize>) {
        let c = self.0.count_ones() as usize;
        (c, Some(c))
    }
}

impl ExactSizeIterator for Elements {}

/// All subsets of `mask`, including the empty set and `mask` itself.
pub fn subsets_of(mask: SubsetMask) -> impl Iterator<Item = SubsetMask> {
    let m = mask.0;
    let mut cur = Some(0u32);
    std::iter::from_fn(move || {
        let out = cur?;
        cur = if out == m { None } else { Some((out.wrapping_sub(m)) & m) };
        Some(SubsetMask(out))
    })
}

/// All `k`-element subsets of `{0, ..., size-1}` in increasing numeric order.
pub fn subsets_of_size(size: usize, k: usize) -> impl Iterator<Item = SubsetMask> {
    let limit: u64 = 1u64 << size;
    let mut cur: Option<u64> = if k > size {
        None
    } else {
        Some((1u64 << k) - 1)
    };
    std::iter::from_fn(move || {
        let out = cur?;
        if out >= limit {
            return None;
        }
        cur = if out == 0 {
            None
        } else {
            // Gosper's hack
            let c = out & out.wrapping_neg();
            let r = out + c;
            Some((((r ^ out) >> 2) / c) | r)
        };
        Some(SubsetMask(out as u32))
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn basic_ops() {
        let s = SubsetMask::from_elements([1, 3]);
        assert_eq!(s.bits(), 0b1010);
        assert_eq!(s.len(), 2);
        assert_eq!(s.min(), Some(1));
        assert_eq!(s.complement(5), SubsetMask::from_elements([0, 2, 4]));
        assert_eq!(s.iter().collect::<Vec<_>>(), vec![1, 3]);
        assert_eq!(format!("{s}"), "{1,3}");
        assert!(SubsetMask::EMPTY.min().is_none());
    }

    #[test]
    fn subset_enumeration_counts() {
        let m = SubsetMask::from_elements([0, 2, 5]);
        let all: Vec<_> = subsets_of(m).collect();
        assert_eq!(all.len(), 8);
        assert!(all.iter().all(|s| s.is_subset(m)));
        assert_eq!(subsets_of(SubsetMask::EMPTY).count(), 1);

        assert_eq!(subsets_of_size(6, 3).count(), 20);
        assert_eq!(subsets_of_size(4, 0).collect::<Vec<_>>(), vec![SubsetMask::EMPTY]);
        assert_eq!(subsets_of_size(3, 3).count(), 1);
        assert_eq!(subsets_of_size(3, 4).count(), 0);
        assert!(subsets_of_size(7, 2).all(|s| s.len() == 2 && s.fits(7)));
    }
}
