use rand::seq::index;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use super::{min_cluster_union, ClusterWitness};
use crate::binom::binomial;
use crate::error::{Error, Result};
use crate::family::KSubset;

/// Rejection-sampling attempts before giving up.
pub const SAMPLE_ATTEMPT_CAP: u64 = 1_000_000;

/// A uniformly random `(d, l, ⌈(d+1)l/d⌉)`-cluster inside `ground`.
///
/// First a uniform `S ⊆ ground` of size `⌈(d+1)l/d⌉` is drawn, then an
/// ordered tuple of `d+1` independent uniform `l`-subsets of `S` is drawn
/// until the sets are distinct with empty intersection. The accepted tuple is
/// uniform over ordered clusters in `C(S, l)`, so each coordinate is
/// marginally uniform over `C(ground, l)`.
pub fn sample_random_cluster(d: u32, l: u32, ground: &KSubset, seed: u64) -> Result<ClusterWitness> {
    if d == 0 || l == 0 {
        return Err(Error::param("sampling needs d >= 1 and l >= 1"));
    }
    let s = min_cluster_union(d, l);
    if ground.len() < s {
        return Err(Error::param(format!(
            "ground set has {} elements, need at least ⌈(d+1)l/d⌉ = {s}",
            ground.len()
        )));
    }
    // complements of size s-l cover S for d+1 sets; distinctness needs enough l-subsets
    if binomial(s, l) < u128::from(d) + 1 {
        return Err(Error::param(format!(
            "C({s},{l}) < d+1 = {}: no {} distinct {l}-sets fit in a set of size {s}",
            d + 1,
            d + 1
        )));
    }
    let n = ground.n();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let pool = ground.elements();
    let chosen: Vec<u32> = index::sample(&mut rng, pool.len(), s as usize)
        .iter()
        .map(|i| pool[i])
        .collect();
    let mut sets = Vec::with_capacity(d as usize + 1);
    for _ in 0..SAMPLE_ATTEMPT_CAP {
        sets.clear();
        for _ in 0..=d {
            let mask = index::sample(&mut rng, chosen.len(), l as usize)
                .iter()
                .fold(0u64, |m, i| m | (1u64 << (chosen[i] - 1)));
            sets.push(KSubset::from_mask_unchecked(n, mask));
        }
        let inter = sets.iter().fold(u64::MAX, |m, a| m & a.mask());
        if inter != 0 {
            continue;
        }
        let distinct = (0..sets.len()).all(|i| (i + 1..sets.len()).all(|j| sets[i] != sets[j]));
        if distinct {
            return Ok(ClusterWitness::new_unchecked(sets, d, s));
        }
    }
    Err(Error::Internal(format!(
        "no (d={d}, l={l}, s={s})-cluster accepted after {SAMPLE_ATTEMPT_CAP} attempts in S = {:?}",
        chosen
    )))
}
