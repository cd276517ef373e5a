use std::ops::ControlFlow;

use num_rational::BigRational;
use num_traits::{One, Zero};
use rayon::prelude::*;
use serde::Serialize;

use super::{min_cluster_union, ClusterWitness};
use crate::error::{Error, Result};
use crate::family::{KSubset, MeasureValue, SetFamily};
use crate::rational;
use crate::shadow::upper_shadow;

fn check_same_ambient(families: &[SetFamily]) -> Result<()> {
    if families.len() < 2 {
        return Err(Error::param("a cross cluster needs at least two families"));
    }
    let first = &families[0];
    for f in &families[1..] {
        if f.n() != first.n() || f.k() != first.k() || f.ground() != first.ground() {
            return Err(Error::param(format!(
                "families live in different ambients: (n={}, k={}) vs (n={}, k={})",
                first.n(),
                first.k(),
                f.n(),
                f.k()
            )));
        }
    }
    Ok(())
}

/// Sets `A_i ∈ F_i` forming a `(d,k,s)`-cluster, `d = families.len() - 1`.
///
/// With `distinct` the chosen sets must be pairwise different, as in an
/// ordinary cluster. The first hit in lex order of index tuples is returned.
pub fn find_cross_cluster(
    families: &[SetFamily],
    s: u32,
    distinct: bool,
) -> Result<Option<ClusterWitness>> {
    check_same_ambient(families)?;
    let d = families.len() as u32 - 1;
    let members: Vec<Vec<KSubset>> = families.iter().map(SetFamily::to_vec).collect();
    let hit = members[0].par_iter().enumerate().find_map_first(|(_, a0)| {
        if a0.len() > s {
            return None;
        }
        let mut picks = vec![*a0];
        match cross_dfs(&members, s, distinct, &mut picks, a0.mask(), a0.mask()) {
            ControlFlow::Break(()) => Some(picks),
            ControlFlow::Continue(()) => None,
        }
    });
    Ok(hit.map(|sets| ClusterWitness::new_unchecked(sets, d, s)))
}

// On Break, `picks` holds the witness.
fn cross_dfs(
    members: &[Vec<KSubset>],
    s: u32,
    distinct: bool,
    picks: &mut Vec<KSubset>,
    union: u64,
    inter: u64,
) -> ControlFlow<()> {
    let depth = picks.len();
    if depth == members.len() {
        return if inter == 0 {
            ControlFlow::Break(())
        } else {
            ControlFlow::Continue(())
        };
    }
    for a in &members[depth] {
        let u = union | a.mask();
        if u.count_ones() > s {
            continue;
        }
        if distinct && picks.contains(a) {
            continue;
        }
        picks.push(*a);
        if cross_dfs(members, s, distinct, picks, u, inter & a.mask()).is_break() {
            return ControlFlow::Break(());
        }
        picks.pop();
    }
    ControlFlow::Continue(())
}

/// The union-bound certificate for cross clusters among level-`l` shadows.
#[derive(Clone, Debug, Serialize)]
pub struct UnionBoundReport {
    pub d: u32,
    pub l: u32,
    /// `⌈(d+1)l/d⌉`, the union size a guaranteed cross cluster respects.
    pub s: u32,
    pub shadow_measures: Vec<MeasureValue>,
    /// `Σ_i (1 - μ(F_i^{↑l}))`.
    #[serde(serialize_with = "rational::serialize")]
    pub sum_of_deficits: BigRational,
    /// `true` iff the sum is below 1.
    pub guaranteed: bool,
    #[serde(skip)]
    pub shadows: Vec<SetFamily>,
}

/// Compute `Σ_i (1 - μ(F_i^{↑l}))`. When it is below 1, a uniformly random
/// `(d,l,⌈(d+1)l/d⌉)`-cluster hits every shadow with positive probability,
/// so a cross cluster among the shadows exists.
pub fn union_bound_criterion(families: &[SetFamily], l: u32) -> Result<UnionBoundReport> {
    check_same_ambient(families)?;
    let d = families.len() as u32 - 1;
    let shadows = families
        .iter()
        .map(|f| upper_shadow(f, l))
        .collect::<Result<Vec<_>>>()?;
    let shadow_measures: Vec<MeasureValue> = shadows.iter().map(SetFamily::measure).collect();
    let sum_of_deficits = shadow_measures
        .iter()
        .fold(BigRational::zero(), |acc, m| acc + (BigRational::one() - m.value()));
    Ok(UnionBoundReport {
        d,
        l,
        s: min_cluster_union(d, l),
        guaranteed: sum_of_deficits < BigRational::one(),
        shadow_measures,
        sum_of_deficits,
        shadows,
    })
}
