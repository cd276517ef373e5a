use std::ops::ControlFlow;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::{flow, ClusterWitness};
use crate::error::{Error, Result};
use crate::family::{KSubset, SetFamily};

/// What [`find_cluster`] looks for.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum FindMode {
    /// Any `(d,k,s)`-cluster.
    Exhaustive,
    /// A `(d,k,s)`-cluster that is also a `d`-simplex.
    SimplexOnly,
    /// A `d`-simplex with union at most `min(s, 2k)`.
    SimplexClusterOnly,
}

struct Search<'a> {
    masks: &'a [u64],
    d: usize,
    s: u32,
    k: u32,
    mode: FindMode,
}

impl Search<'_> {
    fn union_cap(&self) -> u32 {
        match self.mode {
            FindMode::SimplexClusterOnly => self.s.min(2 * self.k),
            _ => self.s,
        }
    }

    fn simplex_mode(&self) -> bool {
        self.mode != FindMode::Exhaustive
    }

    // Any d of the chosen sets must meet for a simplex, so a prefix of at
    // most d sets with empty intersection is dead.
    fn run<T>(
        &self,
        picks: &mut Vec<usize>,
        union: u64,
        inter: u64,
        visit: &mut impl FnMut(&[usize]) -> ControlFlow<T>,
    ) -> ControlFlow<T> {
        let depth = picks.len();
        if depth == self.d + 1 {
            if inter != 0 {
                return ControlFlow::Continue(());
            }
            if self.simplex_mode() && !all_d_subsets_meet(self.masks, picks) {
                return ControlFlow::Continue(());
            }
            return visit(picks);
        }
        let start = picks.last().map_or(0, |&i| i + 1);
        let needed = self.d + 1 - depth;
        if self.masks.len() < start + needed {
            return ControlFlow::Continue(());
        }
        let cap = self.union_cap();
        for i in start..=self.masks.len() - needed {
            let m = self.masks[i];
            let u = union | m;
            if u.count_ones() > cap {
                continue;
            }
            let x = inter & m;
            if self.simplex_mode() && x == 0 && depth < self.d {
                continue;
            }
            picks.push(i);
            let r = self.run(picks, u, x, visit);
            picks.pop();
            r?;
        }
        ControlFlow::Continue(())
    }
}

fn all_d_subsets_meet(masks: &[u64], picks: &[usize]) -> bool {
    (0..picks.len()).all(|skip| {
        picks
            .iter()
            .enumerate()
            .filter(|(j, _)| *j != skip)
            .fold(u64::MAX, |m, (_, &i)| m & masks[i])
            != 0
    })
}

fn witness(members: &[KSubset], picks: &[usize], d: u32, s: u32) -> ClusterWitness {
    let sets = picks.iter().map(|&i| members[i]).collect();
    ClusterWitness::new_unchecked(sets, d, s)
}

/// First cluster in lex order of member index tuples, or `None`.
///
/// The outer loop runs in parallel; the result is still the lex-least hit.
pub fn find_cluster(f: &SetFamily, d: u32, s: u32, mode: FindMode) -> Option<ClusterWitness> {
    if d == 0 {
        return None;
    }
    let members = f.to_vec();
    let masks: Vec<u64> = members.iter().map(KSubset::mask).collect();
    let search = Search {
        masks: &masks,
        d: d as usize,
        s,
        k: f.k(),
        mode,
    };
    if masks.len() < d as usize + 1 {
        return None;
    }
    let last_first = masks.len() - (d as usize + 1);
    let hit = (0..=last_first).into_par_iter().find_map_first(|i0| {
        let m = masks[i0];
        if m.count_ones() > search.union_cap() {
            return None;
        }
        let mut picks = vec![i0];
        match search.run(&mut picks, m, m, &mut |p: &[usize]| ControlFlow::Break(p.to_vec())) {
            ControlFlow::Break(p) => Some(p),
            ControlFlow::Continue(()) => None,
        }
    })?;
    Some(witness(&members, &hit, d, s))
}

/// Visit every `(d,k,s)`-cluster of `F` in lex order of index tuples.
pub fn for_each_cluster<T>(
    f: &SetFamily,
    d: u32,
    s: u32,
    mut visit: impl FnMut(&ClusterWitness) -> Option<T>,
) -> Option<T> {
    if d == 0 {
        return None;
    }
    let members = f.to_vec();
    let masks: Vec<u64> = members.iter().map(KSubset::mask).collect();
    let search = Search {
        masks: &masks,
        d: d as usize,
        s,
        k: f.k(),
        mode: FindMode::Exhaustive,
    };
    let mut picks = Vec::with_capacity(d as usize + 1);
    let mut cb = |p: &[usize]| flow(visit(&witness(&members, p, d, s)));
    match search.run(&mut picks, 0, u64::MAX, &mut cb) {
        ControlFlow::Break(t) => Some(t),
        ControlFlow::Continue(()) => None,
    }
}

/// Every cluster among `masks` as a sorted index tuple, in lex order.
pub(crate) fn cluster_tuples(masks: &[u64], k: u32, d: u32, s: u32) -> Vec<Vec<usize>> {
    if d == 0 {
        return Vec::new();
    }
    let search = Search {
        masks,
        d: d as usize,
        s,
        k,
        mode: FindMode::Exhaustive,
    };
    let mut out = Vec::new();
    let mut picks = Vec::with_capacity(d as usize + 1);
    let _ = search.run::<()>(&mut picks, 0, u64::MAX, &mut |p: &[usize]| {
        out.push(p.to_vec());
        ControlFlow::Continue(())
    });
    out
}

/// Number of `(d,k,s)`-clusters in `F`.
pub fn count_clusters(f: &SetFamily, d: u32, s: u32) -> u64 {
    let mut count = 0u64;
    for_each_cluster::<()>(f, d, s, |_| {
        count += 1;
        None
    });
    count
}

/// Outcome of an `s`-wise intersection test.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SWiseReport {
    pub s: u32,
    pub intersecting: bool,
    /// Lex-least tuple of `s` distinct members with empty intersection.
    pub violating: Option<Vec<Vec<u32>>>,
}

/// Whether no `s` distinct members of `F` have empty common intersection.
pub fn s_wise_intersecting(f: &SetFamily, s: u32) -> Result<SWiseReport> {
    if s < 2 {
        return Err(Error::param(format!("s-wise intersection needs s >= 2, got {s}")));
    }
    let members = f.to_vec();
    let masks: Vec<u64> = members.iter().map(KSubset::mask).collect();
    let s_us = s as usize;
    let mut picks = Vec::with_capacity(s_us);
    let hit = swise_dfs(&masks, s_us, &mut picks, u64::MAX);
    Ok(SWiseReport {
        s,
        intersecting: hit.is_none(),
        violating: hit.map(|p| p.iter().map(|&i| members[i].elements()).collect()),
    })
}

fn swise_dfs(masks: &[u64], s: usize, picks: &mut Vec<usize>, inter: u64) -> Option<Vec<usize>> {
    let depth = picks.len();
    if depth == s {
        return (inter == 0).then(|| picks.clone());
    }
    let start = picks.last().map_or(0, |&i| i + 1);
    let needed = s - depth;
    if masks.len() < start + needed {
        return None;
    }
    if depth > 0 && inter == 0 {
        // already empty: the lex-least completion takes the next indices
        let mut out = picks.clone();
        out.extend(start..start + needed);
        return Some(out);
    }
    for i in start..=masks.len() - needed {
        picks.push(i);
        let r = swise_dfs(masks, s, picks, inter & masks[i]);
        picks.pop();
        if r.is_some() {
            return r;
        }
    }
    None
}
