//! `(d,k,s)`-clusters, simplices and the searches built on them.
//!
//! A `(d,k,s)`-cluster is `d+1` distinct `k`-sets whose union has at most
//! `s` elements and whose common intersection is empty.

mod cross;
mod sample;
mod search;

use std::ops::ControlFlow;

use serde::{Deserialize, Serialize};

pub use cross::{find_cross_cluster, union_bound_criterion, UnionBoundReport};
pub use sample::{sample_random_cluster, SAMPLE_ATTEMPT_CAP};
pub use search::{
    count_clusters, find_cluster, for_each_cluster, s_wise_intersecting, FindMode, SWiseReport,
};
pub(crate) use search::cluster_tuples;

use crate::error::{Error, Result};
use crate::family::KSubset;

/// `d+1` member sets certifying a `(d,k,s)`-cluster.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ClusterWitness {
    sets: Vec<KSubset>,
    union_size: u32,
    d: u32,
    k: u32,
    s: u32,
}

impl ClusterWitness {
    pub fn sets(&self) -> &[KSubset] {
        &self.sets
    }

    pub fn union_size(&self) -> u32 {
        self.union_size
    }

    /// Always empty for a valid witness.
    pub fn total_intersection(&self) -> KSubset {
        let n = self.sets[0].n();
        KSubset::from_mask(n, self.sets.iter().fold(u64::MAX, |m, a| m & a.mask()))
            .expect("intersection stays inside [n]")
    }

    pub fn d(&self) -> u32 {
        self.d
    }

    pub fn k(&self) -> u32 {
        self.k
    }

    pub fn s(&self) -> u32 {
        self.s
    }

    pub fn simplex_report(&self) -> SimplexReport {
        simplex_check(&self.sets).expect("witness sets are valid input")
    }

    pub fn to_doc(&self) -> WitnessDoc {
        let report = self.simplex_report();
        WitnessDoc {
            sets: self.sets.iter().map(|a| a.elements()).collect(),
            union_size: self.union_size,
            d: self.d,
            s: self.s,
            simplex: report.is_simplex,
            simplex_cluster: report.is_simplex_cluster,
        }
    }

    // Caller guarantees the cluster conditions.
    pub(crate) fn new_unchecked(sets: Vec<KSubset>, d: u32, s: u32) -> Self {
        let union = sets.iter().fold(0u64, |m, a| m | a.mask());
        let k = sets[0].len();
        ClusterWitness {
            union_size: union.count_ones(),
            sets,
            d,
            k,
            s,
        }
    }
}

/// Wire form of a witness.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct WitnessDoc {
    pub sets: Vec<Vec<u32>>,
    pub union_size: u32,
    pub d: u32,
    pub s: u32,
    pub simplex: bool,
    pub simplex_cluster: bool,
}

impl Serialize for ClusterWitness {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        self.to_doc().serialize(s)
    }
}

/// Why a tuple fails to be a cluster.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "reason", rename_all = "kebab-case")]
pub enum NotCluster {
    UnionTooLarge { union_size: u32, s: u32 },
    IntersectionNonempty { intersection: Vec<u32> },
    Duplicates { first: usize, second: usize },
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ClusterVerdict {
    Cluster(ClusterWitness),
    NotCluster(NotCluster),
}

impl ClusterVerdict {
    pub fn is_cluster(&self) -> bool {
        matches!(self, ClusterVerdict::Cluster(_))
    }

    pub fn witness(&self) -> Option<&ClusterWitness> {
        match self {
            ClusterVerdict::Cluster(w) => Some(w),
            ClusterVerdict::NotCluster(_) => None,
        }
    }
}

fn check_uniform(sets: &[KSubset]) -> Result<u32> {
    let first = sets
        .first()
        .ok_or_else(|| Error::param("need at least one set"))?;
    for a in sets {
        if a.n() != first.n() {
            return Err(Error::param("sets have different ambient n"));
        }
        if a.len() != first.len() {
            return Err(Error::param(format!(
                "mixed set sizes: {} has {} elements, {} has {}",
                first,
                first.len(),
                a,
                a.len()
            )));
        }
    }
    Ok(first.len())
}

/// Decide whether `sets` is a `(d,k,s)`-cluster.
pub fn is_cluster(sets: &[KSubset], d: u32, s: u32) -> Result<ClusterVerdict> {
    if sets.len() != d as usize + 1 {
        return Err(Error::param(format!(
            "a (d={d})-cluster has {} sets, got {}",
            d + 1,
            sets.len()
        )));
    }
    check_uniform(sets)?;
    for i in 0..sets.len() {
        for j in i + 1..sets.len() {
            if sets[i] == sets[j] {
                return Ok(ClusterVerdict::NotCluster(NotCluster::Duplicates { first: i, second: j }));
            }
        }
    }
    let union = sets.iter().fold(0u64, |m, a| m | a.mask());
    if union.count_ones() > s {
        return Ok(ClusterVerdict::NotCluster(NotCluster::UnionTooLarge {
            union_size: union.count_ones(),
            s,
        }));
    }
    let inter = sets.iter().fold(u64::MAX, |m, a| m & a.mask());
    if inter != 0 {
        return Ok(ClusterVerdict::NotCluster(NotCluster::IntersectionNonempty {
            intersection: KSubset::from_mask_unchecked(sets[0].n(), inter).elements(),
        }));
    }
    Ok(ClusterVerdict::Cluster(ClusterWitness::new_unchecked(sets.to_vec(), d, s)))
}

/// Simplex and simplex-cluster status of `d+1` sets.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SimplexReport {
    pub d: u32,
    pub is_simplex: bool,
    /// Indices of a `d`-subset whose intersection is empty, if one exists.
    pub missing_d_subset: Option<Vec<usize>>,
    pub is_simplex_cluster: bool,
    pub union_size: u32,
}

pub fn simplex_check(sets: &[KSubset]) -> Result<SimplexReport> {
    if sets.len() < 2 {
        return Err(Error::param("a simplex needs at least two sets"));
    }
    let k = check_uniform(sets)?;
    for i in 0..sets.len() {
        for j in i + 1..sets.len() {
            if sets[i] == sets[j] {
                return Err(Error::param(format!("set {} repeated", sets[i])));
            }
        }
    }
    let d = sets.len() as u32 - 1;
    let inter = sets.iter().fold(u64::MAX, |m, a| m & a.mask());
    let union = sets.iter().fold(0u64, |m, a| m | a.mask());
    // leaving out index `skip` gives the d-subset of the others
    let missing = (0..sets.len()).rev().find_map(|skip| {
        let partial = sets
            .iter()
            .enumerate()
            .filter(|(i, _)| *i != skip)
            .fold(u64::MAX, |m, (_, a)| m & a.mask());
        (partial == 0).then(|| (0..sets.len()).filter(|&i| i != skip).collect::<Vec<_>>())
    });
    let is_simplex = inter == 0 && missing.is_none();
    Ok(SimplexReport {
        d,
        is_simplex,
        missing_d_subset: missing,
        is_simplex_cluster: is_simplex && union.count_ones() <= 2 * k,
        union_size: union.count_ones(),
    })
}

/// `k - (d-1)(s-k)`: every `d` sets of a `(d,k,s)`-cluster share at least this many elements.
pub fn intersection_lower_bound(d: u32, k: u32, s: u32) -> i64 {
    i64::from(k) - (i64::from(d) - 1) * (i64::from(s) - i64::from(k))
}

/// Whether `s < dk/(d-1)`, which forces every `(d,k,s)`-cluster to be a `d`-simplex.
/// Always `false` for `d = 1`.
pub fn tight_implies_simplex(d: u32, k: u32, s: u32) -> bool {
    d >= 2 && u64::from(s) * u64::from(d - 1) < u64::from(d) * u64::from(k)
}

/// `⌈(d+1)k/d⌉`, the smallest union size a `(d,k,·)`-cluster can have.
pub fn min_cluster_union(d: u32, k: u32) -> u32 {
    ((d + 1) * k).div_ceil(d)
}

pub(crate) fn flow<T>(v: Option<T>) -> ControlFlow<T> {
    match v {
        Some(t) => ControlFlow::Break(t),
        None => ControlFlow::Continue(()),
    }
}
