use rand::seq::index;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::lex::{lex_family, lex_unrank};
use super::subset::{check_n, full_mask, k_subsets, Combinations, KSubset};
use super::SetFamily;
use crate::binom::binomial;
use crate::error::{Error, Result};

/// The named families the toolkit knows how to build.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Construction {
    /// All `k`-sets containing `center`.
    Star { center: u32 },
    /// Sets meeting each block `X_i = {(i-1)n/k + 1, ..., in/k}` in exactly one point.
    FranklFuredi,
    /// Sets `A` with `|A ∩ [n/2]|` odd.
    OddBipartite,
    /// The lex prefix `L(rank, k, n)`.
    Lex { rank: u128 },
    /// `size` distinct sets drawn uniformly without replacement.
    Random { size: u128, seed: u64 },
}

pub fn construct(kind: &Construction, n: u32, k: u32) -> Result<SetFamily> {
    check_n(n)?;
    if k > n {
        return Err(Error::param(format!("uniformity k={k} exceeds n={n}")));
    }
    match *kind {
        Construction::Star { center } => star(n, k, center),
        Construction::FranklFuredi => frankl_furedi(n, k),
        Construction::OddBipartite => odd_bipartite(n, k),
        Construction::Lex { rank } => lex_family(rank, k, n),
        Construction::Random { size, seed } => random(n, k, size, seed),
    }
}

fn star(n: u32, k: u32, center: u32) -> Result<SetFamily> {
    if center == 0 || center > n {
        return Err(Error::param(format!("star center {center} outside [1, {n}]")));
    }
    if k == 0 {
        return Err(Error::param("a star needs k >= 1"));
    }
    let bit = 1u64 << (center - 1);
    let rest = full_mask(n) & !bit;
    let mut fam = SetFamily::empty(n, k)?;
    for tail in Combinations::new(n, rest, k - 1) {
        fam.insert_unchecked(KSubset::from_mask_unchecked(n, tail.mask() | bit));
    }
    Ok(fam)
}

fn frankl_furedi(n: u32, k: u32) -> Result<SetFamily> {
    if k == 0 || !n.is_multiple_of(k) {
        return Err(Error::param(format!(
            "transversal construction needs k to divide n (n={n}, k={k})"
        )));
    }
    let block = n / k;
    let mut fam = SetFamily::empty(n, k)?;
    // choice[i] is the offset picked inside block i
    let mut choice = vec![0u32; k as usize];
    loop {
        let mask = choice
            .iter()
            .enumerate()
            .fold(0u64, |m, (i, &c)| m | (1u64 << (i as u32 * block + c)));
        fam.insert_unchecked(KSubset::from_mask_unchecked(n, mask));
        let mut i = k as usize;
        loop {
            if i == 0 {
                return Ok(fam);
            }
            i -= 1;
            choice[i] += 1;
            if choice[i] < block {
                break;
            }
            choice[i] = 0;
        }
    }
}

fn odd_bipartite(n: u32, k: u32) -> Result<SetFamily> {
    if !n.is_multiple_of(2) {
        return Err(Error::param(format!("odd-bipartite construction needs even n (n={n})")));
    }
    let half = full_mask(n / 2);
    let mut fam = SetFamily::empty(n, k)?;
    for a in k_subsets(n, k) {
        if (a.mask() & half).count_ones() % 2 == 1 {
            fam.insert_unchecked(a);
        }
    }
    Ok(fam)
}

fn random(n: u32, k: u32, size: u128, seed: u64) -> Result<SetFamily> {
    let total = binomial(n, k);
    if size > total {
        return Err(Error::param(format!("cannot draw {size} sets from C({n},{k}) = {total}")));
    }
    let total = usize::try_from(total)
        .map_err(|_| Error::param("C(n,k) too large for random sampling"))?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let picks = index::sample(&mut rng, total, size as usize);
    let mut fam = SetFamily::empty(n, k)?;
    for r in picks.iter() {
        fam.insert_unchecked(lex_unrank(r as u128, k, n)?);
    }
    Ok(fam)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn lists(f: &SetFamily) -> Vec<Vec<u32>> {
        f.iter().map(|a| a.elements()).collect()
    }

    #[test]
    fn transversal_family() {
        let f = construct(&Construction::FranklFuredi, 4, 2).unwrap();
        assert_eq!(lists(&f), vec![vec![1, 3], vec![1, 4], vec![2, 3], vec![2, 4]]);
        let f = construct(&Construction::FranklFuredi, 8, 2).unwrap();
        assert_eq!(f.len(), 16);
        let f = construct(&Construction::FranklFuredi, 9, 3).unwrap();
        assert_eq!(f.len(), 27);
        assert!(construct(&Construction::FranklFuredi, 7, 2).is_err());
    }

    #[test]
    fn odd_bipartite_counts() {
        let f = construct(&Construction::OddBipartite, 6, 3).unwrap();
        assert_eq!(f.len(), 10);
        let singles = f.iter().filter(|a| (a.mask() & 0b111).count_ones() == 1).count();
        assert_eq!(singles, 9);
        let f = construct(&Construction::OddBipartite, 8, 4).unwrap();
        assert_eq!(f.len(), 32);
        assert!(construct(&Construction::OddBipartite, 7, 3).is_err());
    }

    #[test]
    fn star_example() {
        let f = construct(&Construction::Star { center: 1 }, 5, 2).unwrap();
        assert_eq!(lists(&f), vec![vec![1, 2], vec![1, 3], vec![1, 4], vec![1, 5]]);
        assert!(construct(&Construction::Star { center: 6 }, 5, 2).is_err());
    }

    #[test]
    fn random_is_reproducible() {
        let a = construct(&Construction::Random { size: 30, seed: 7 }, 10, 4).unwrap();
        let b = construct(&Construction::Random { size: 30, seed: 7 }, 10, 4).unwrap();
        let c = construct(&Construction::Random { size: 30, seed: 8 }, 10, 4).unwrap();
        assert_eq!(a.len(), 30);
        assert_eq!(a, b);
        assert_ne!(a, c);
        assert!(construct(&Construction::Random { size: 7, seed: 0 }, 4, 2).is_err());
    }
}
