use std::cmp::Ordering;

use super::subset::{check_n, full_mask, Combinations, KSubset};
use super::SetFamily;
use crate::binom::binomial;
use crate::error::{Error, Result};

/// A prefix length `i` of the lex order on `C([n], k)`, `0 <= i <= C(n, k)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct LexRank(u128);

impl LexRank {
    pub fn new(i: u128, n: u32, k: u32) -> Result<Self> {
        let total = binomial(n, k);
        if i > total {
            return Err(Error::param(format!("rank {i} exceeds C({n},{k}) = {total}")));
        }
        Ok(LexRank(i))
    }

    pub fn get(self) -> u128 {
        self.0
    }
}

/// `A <_L B` iff `min(A Δ B) ∈ A`.
pub fn lex_compare(a: &KSubset, b: &KSubset) -> Result<Ordering> {
    if a.n() != b.n() || a.len() != b.len() {
        return Err(Error::param(format!(
            "cannot compare {a} (n={}, k={}) with {b} (n={}, k={})",
            a.n(),
            a.len(),
            b.n(),
            b.len()
        )));
    }
    Ok(a.lex_cmp(b))
}

/// Position of `a` in the lex order of `C([n], |a|)`, starting at 0.
pub fn lex_rank(a: &KSubset) -> u128 {
    let n = a.n();
    let mut remaining = a.len();
    let mut rank = 0u128;
    for e in 1..=n {
        if remaining == 0 {
            break;
        }
        if a.contains(e) {
            remaining -= 1;
        } else {
            // every set that takes e here precedes a
            rank += binomial(n - e, remaining - 1);
        }
    }
    rank
}

/// The `rank`-th `k`-subset of `[n]` in lex order.
pub fn lex_unrank(rank: u128, k: u32, n: u32) -> Result<KSubset> {
    check_n(n)?;
    let total = binomial(n, k);
    if rank >= total {
        return Err(Error::param(format!("rank {rank} out of range 0..{total}")));
    }
    let mut rank = rank;
    let mut remaining = k;
    let mut mask = 0u64;
    for e in 1..=n {
        if remaining == 0 {
            break;
        }
        let with_e = binomial(n - e, remaining - 1);
        if rank < with_e {
            mask |= 1u64 << (e - 1);
            remaining -= 1;
        } else {
            rank -= with_e;
        }
    }
    Ok(KSubset::from_mask_unchecked(n, mask))
}

/// `L(i, k, n)`: the first `i` sets of `C([n], k)` in lex order.
pub fn lex_family(i: u128, k: u32, n: u32) -> Result<SetFamily> {
    LexRank::new(i, n, k)?;
    let mut fam = SetFamily::empty(n, k)?;
    fill_prefix(&mut fam, i, 1, k, 0);
    Ok(fam)
}

// Either all sets containing `e` (with the current prefix) fit inside the
// remaining budget, or the prefix ends somewhere among them.
fn fill_prefix(fam: &mut SetFamily, i: u128, e: u32, k: u32, acc: u64) {
    if i == 0 {
        return;
    }
    let n = fam.n();
    if k == 0 {
        fam.insert_unchecked(KSubset::from_mask_unchecked(n, acc));
        return;
    }
    let with_e = binomial(n - e, k - 1);
    let bit = 1u64 << (e - 1);
    if i >= with_e {
        let tail = full_mask(n) & !full_mask(e);
        for rest in Combinations::new(n, tail, k - 1) {
            fam.insert_unchecked(KSubset::from_mask_unchecked(n, acc | bit | rest.mask()));
        }
        fill_prefix(fam, i - with_e, e + 1, k, acc);
    } else {
        fill_prefix(fam, i, e + 1, k - 1, acc | bit);
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::family::{construct, k_subsets, Construction};

    fn lists(f: &SetFamily) -> Vec<Vec<u32>> {
        f.iter().map(|a| a.elements()).collect()
    }

    #[test]
    fn small_prefix() {
        let f = lex_family(3, 2, 4).unwrap();
        assert_eq!(lists(&f), vec![vec![1, 2], vec![1, 3], vec![1, 4]]);
        assert!(lex_family(0, 2, 4).unwrap().is_empty());
        assert!(lex_family(7, 2, 4).is_err());
    }

    #[test]
    fn star_is_the_star_sized_prefix() {
        for n in 3..=8 {
            for k in 2..n {
                let l = lex_family(binomial(n - 1, k - 1), k, n).unwrap();
                let s = construct(&Construction::Star { center: 1 }, n, k).unwrap();
                assert_eq!(l, s, "n={n} k={k}");
            }
        }
    }

    #[test]
    fn rank_unrank_agree_with_enumeration() {
        for n in 1..=8 {
            for k in 0..=n {
                for (r, a) in k_subsets(n, k).enumerate() {
                    assert_eq!(lex_rank(&a), r as u128);
                    assert_eq!(lex_unrank(r as u128, k, n).unwrap(), a);
                }
            }
        }
    }

    #[test]
    fn unrank_scales_to_thirty() {
        let total = binomial(30, 15);
        let last = lex_unrank(total - 1, 15, 30).unwrap();
        assert_eq!(last.elements(), (16..=30).collect::<Vec<_>>());
        assert_eq!(lex_rank(&last), total - 1);
    }

    #[test]
    fn compare_rejects_mixed_ambients() {
        let a = KSubset::new(4, &[1, 2]).unwrap();
        let b = KSubset::new(5, &[1, 2]).unwrap();
        let c = KSubset::new(4, &[1, 2, 3]).unwrap();
        assert!(lex_compare(&a, &b).is_err());
        assert!(lex_compare(&a, &c).is_err());
    }
}
