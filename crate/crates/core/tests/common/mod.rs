//! Brute-force oracles shared by the integration tests. They work on plain
//! sorted element vectors and never call the library's search code.
#![allow(dead_code)]

use std::collections::BTreeSet;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

pub type Set = Vec<u32>;

/// All `k`-subsets of `{1..n}` in lex order of element lists.
pub fn subsets(n: u32, k: u32) -> Vec<Set> {
    fn rec(start: u32, n: u32, k: u32, cur: &mut Set, out: &mut Vec<Set>) {
        if cur.len() as u32 == k {
            out.push(cur.clone());
            return;
        }
        for e in start..=n {
            cur.push(e);
            rec(e + 1, n, k, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    rec(1, n, k, &mut Vec::new(), &mut out);
    out
}

/// All `r`-element index tuples `i_0 < ... < i_{r-1}` below `len`.
pub fn index_tuples(len: usize, r: usize) -> Vec<Vec<usize>> {
    fn rec(start: usize, len: usize, r: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == r {
            out.push(cur.clone());
            return;
        }
        for i in start..len {
            cur.push(i);
            rec(i + 1, len, r, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    rec(0, len, r, &mut Vec::new(), &mut out);
    out
}

pub fn union(sets: &[&Set]) -> BTreeSet<u32> {
    sets.iter().flat_map(|s| s.iter().copied()).collect()
}

pub fn intersection(sets: &[&Set]) -> BTreeSet<u32> {
    let mut it = sets.iter();
    let first: BTreeSet<u32> = it.next().map(|s| s.iter().copied().collect()).unwrap_or_default();
    it.fold(first, |acc, s| acc.into_iter().filter(|e| s.contains(e)).collect())
}

pub fn is_subset(a: &Set, b: &Set) -> bool {
    a.iter().all(|e| b.contains(e))
}

pub fn is_cluster(sets: &[&Set], s: u32) -> bool {
    let distinct = (0..sets.len()).all(|i| (i + 1..sets.len()).all(|j| sets[i] != sets[j]));
    distinct && intersection(sets).is_empty() && union(sets).len() as u32 <= s
}

/// Every `(d,k,s)`-cluster among `members`, as index tuples.
pub fn all_clusters(members: &[Set], d: u32, s: u32) -> Vec<Vec<usize>> {
    index_tuples(members.len(), d as usize + 1)
        .into_iter()
        .filter(|t| {
            let sets: Vec<&Set> = t.iter().map(|&i| &members[i]).collect();
            is_cluster(&sets, s)
        })
        .collect()
}

pub fn has_cluster(members: &[Set], d: u32, s: u32) -> bool {
    index_tuples(members.len(), d as usize + 1).into_iter().any(|t| {
        let sets: Vec<&Set> = t.iter().map(|&i| &members[i]).collect();
        is_cluster(&sets, s)
    })
}

pub fn is_r_wise_intersecting(members: &[Set], r: usize) -> bool {
    index_tuples(members.len(), r).into_iter().all(|t| {
        let sets: Vec<&Set> = t.iter().map(|&i| &members[i]).collect();
        !intersection(&sets).is_empty()
    })
}

/// `l`-subsets of `[n]` containing some member.
pub fn upper_shadow(members: &[Set], n: u32, l: u32) -> Vec<Set> {
    subsets(n, l)
        .into_iter()
        .filter(|b| members.iter().any(|a| is_subset(a, b)))
        .collect()
}

pub fn rat(a: i64, b: i64) -> BigRational {
    BigRational::new(BigInt::from(a), BigInt::from(b))
}

fn pow(p: &BigRational, e: u32) -> BigRational {
    (0..e).fold(BigRational::one(), |acc, _| acc * p)
}

/// `μ_p` of the up-set generated by `members`, by summing over all of `2^[n]`.
pub fn biased_measure_power_set(members: &[Set], n: u32, p: &BigRational) -> BigRational {
    let q = BigRational::one() - p;
    let masks: Vec<u64> = members
        .iter()
        .map(|a| a.iter().fold(0u64, |m, &e| m | 1 << (e - 1)))
        .collect();
    let mut total = BigRational::zero();
    let mut weight = vec![BigRational::zero(); n as usize + 1];
    for (r, w) in weight.iter_mut().enumerate() {
        *w = pow(p, r as u32) * pow(&q, n - r as u32);
    }
    for x in 0u64..(1u64 << n) {
        if masks.iter().any(|&m| m & !x == 0) {
            total += &weight[x.count_ones() as usize];
        }
    }
    total
}

/// Deterministic permutation of `[n]` from a seed (Fisher-Yates over a tiny LCG).
pub fn permutation(n: u32, seed: u64) -> Vec<u32> {
    let mut p: Vec<u32> = (1..=n).collect();
    let mut x = seed.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
    for i in (1..p.len()).rev() {
        x = x.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
        let j = ((x >> 33) % (i as u64 + 1)) as usize;
        p.swap(i, j);
    }
    p
}

/// `f(d,k,s,n)` by trying every subfamily, largest first.
pub fn brute_f(d: u32, k: u32, s: u32, n: u32) -> usize {
    let all = subsets(n, k);
    let len = all.len();
    assert!(len <= 20, "brute force only for tiny instances");
    let clusters: Vec<u64> = all_clusters(&all, d, s)
        .into_iter()
        .map(|t| t.iter().fold(0u64, |m, &i| m | 1 << i))
        .collect();
    (0u64..(1u64 << len))
        .filter(|x| clusters.iter().all(|&c| c & x != c))
        .map(|x| x.count_ones() as usize)
        .max()
        .unwrap()
}

pub fn members(f: &clusterkit::SetFamily) -> Vec<Set> {
    f.iter().map(|a| a.elements()).collect()
}
