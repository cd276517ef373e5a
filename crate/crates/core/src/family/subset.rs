use std::cmp::Ordering;
use std::fmt;

use crate::error::{Error, Result};

/// Largest supported ground set. Sets are stored as 64-bit masks.
pub const MAX_N: u32 = 64;

/// A subset of `[n] = {1, ..., n}`.
///
/// Element `e` is stored as bit `e - 1`. The canonical external form is the
/// ascending element list; the mask is a bijective image of it, so equality
/// and hashing agree with the list form.
#[derive(Clone, Copy, PartialEq, Eq, Hash)]
pub struct KSubset {
    mask: u64,
    n: u32,
}

pub(crate) fn full_mask(n: u32) -> u64 {
    if n >= 64 {
        u64::MAX
    } else {
        (1u64 << n) - 1
    }
}

pub(crate) fn check_n(n: u32) -> Result<()> {
    if n == 0 || n > MAX_N {
        Err(Error::param(format!("ground set size n={n} must be in 1..={MAX_N}")))
    } else {
        Ok(())
    }
}

/// Iterate the elements (1-based) of a mask in increasing order.
pub(crate) fn mask_elements(mut mask: u64) -> impl Iterator<Item = u32> {
    std::iter::from_fn(move || {
        if mask == 0 {
            None
        } else {
            let e = mask.trailing_zeros();
            mask &= mask - 1;
            Some(e + 1)
        }
    })
}

/// `A <_L B` iff the minimum of the symmetric difference lies in `A`.
pub(crate) fn lex_cmp_masks(a: u64, b: u64) -> Ordering {
    let diff = a ^ b;
    if diff == 0 {
        Ordering::Equal
    } else if a & (diff & diff.wrapping_neg()) != 0 {
        Ordering::Less
    } else {
        Ordering::Greater
    }
}

impl KSubset {
    /// Build from elements in any order. Duplicates and out-of-range values are rejected.
    pub fn new(n: u32, elements: &[u32]) -> Result<Self> {
        check_n(n)?;
        let mut mask = 0u64;
        for &e in elements {
            if e == 0 || e > n {
                return Err(Error::param(format!("element {e} outside [1, {n}]")));
            }
            let bit = 1u64 << (e - 1);
            if mask & bit != 0 {
                return Err(Error::param(format!("element {e} repeated")));
            }
            mask |= bit;
        }
        Ok(KSubset { mask, n })
    }

    pub fn from_mask(n: u32, mask: u64) -> Result<Self> {
        check_n(n)?;
        if mask & !full_mask(n) != 0 {
            return Err(Error::param(format!("mask {mask:#x} has bits outside [1, {n}]")));
        }
        Ok(KSubset { mask, n })
    }

    pub(crate) fn from_mask_unchecked(n: u32, mask: u64) -> Self {
        debug_assert!(mask & !full_mask(n) == 0);
        KSubset { mask, n }
    }

    pub fn empty(n: u32) -> Self {
        KSubset { mask: 0, n }
    }

    pub fn mask(&self) -> u64 {
        self.mask
    }

    /// Ambient ground-set size.
    pub fn n(&self) -> u32 {
        self.n
    }

    pub fn len(&self) -> u32 {
        self.mask.count_ones()
    }

    pub fn is_empty(&self) -> bool {
        self.mask == 0
    }

    pub fn contains(&self, e: u32) -> bool {
        e >= 1 && e <= self.n && self.mask & (1u64 << (e - 1)) != 0
    }

    pub fn is_subset_of(&self, other: &KSubset) -> bool {
        self.mask & !other.mask == 0
    }

    pub fn elements(&self) -> Vec<u32> {
        mask_elements(self.mask).collect()
    }

    pub fn iter(&self) -> impl Iterator<Item = u32> {
        mask_elements(self.mask)
    }

    pub fn union(&self, other: &KSubset) -> KSubset {
        KSubset::from_mask_unchecked(self.n, self.mask | other.mask)
    }

    pub fn intersection(&self, other: &KSubset) -> KSubset {
        KSubset::from_mask_unchecked(self.n, self.mask & other.mask)
    }

    /// Lexicographic comparison for sets sharing an ambient `n`. Works for
    /// any sizes; on equal sizes it agrees with comparing sorted element lists.
    pub fn lex_cmp(&self, other: &KSubset) -> Ordering {
        lex_cmp_masks(self.mask, other.mask)
    }
}

impl Ord for KSubset {
    fn cmp(&self, other: &Self) -> Ordering {
        self.n.cmp(&other.n).then_with(|| self.lex_cmp(other))
    }
}

impl PartialOrd for KSubset {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for KSubset {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.iter().map(|e| e.to_string()).collect();
        write!(f, "{{{}}}", parts.join(","))
    }
}

impl fmt::Debug for KSubset {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

/// All `k`-subsets of the elements in `ground`, in lexicographic order.
pub struct Combinations {
    n: u32,
    pool: Vec<u32>,
    idx: Vec<usize>,
    done: bool,
}

impl Combinations {
    pub fn new(n: u32, ground: u64, k: u32) -> Self {
        let pool: Vec<u32> = mask_elements(ground).collect();
        let k = k as usize;
        let done = k > pool.len();
        Combinations {
            n,
            pool,
            idx: (0..k).collect(),
            done,
        }
    }
}

impl Iterator for Combinations {
    type Item = KSubset;

    fn next(&mut self) -> Option<KSubset> {
        if self.done {
            return None;
        }
        let mask = self
            .idx
            .iter()
            .fold(0u64, |m, &i| m | (1u64 << (self.pool[i] - 1)));
        let out = KSubset::from_mask_unchecked(self.n, mask);
        // advance to the next index tuple
        let k = self.idx.len();
        let m = self.pool.len();
        let mut i = k;
        loop {
            if i == 0 {
                self.done = true;
                break;
            }
            i -= 1;
            if self.idx[i] < m - k + i {
                self.idx[i] += 1;
                for j in i + 1..k {
                    self.idx[j] = self.idx[j - 1] + 1;
                }
                break;
            }
        }
        Some(out)
    }
}

/// Convenience: every `k`-subset of `[n]` in lex order.
pub fn k_subsets(n: u32, k: u32) -> Combinations {
    Combinations::new(n, full_mask(n), k)
}

/// Every subset of `mask` (including empty and `mask` itself).
pub(crate) fn submasks(mask: u64) -> impl Iterator<Item = u64> {
    let mut next = Some(mask);
    std::iter::from_fn(move || {
        let cur = next?;
        next = if cur == 0 { None } else { Some((cur - 1) & mask) };
        Some(cur)
    })
}
