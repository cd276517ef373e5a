//! k-uniform set families over `[n]`, lexicographic machinery, restrictions,
//! juntas, measures and the standard constructions.

mod construct;
pub mod io;
mod junta;
mod lex;
mod measure;
mod subset;

use std::collections::BTreeSet;

pub use construct::{construct, Construction};
pub use junta::{junta_generate, Junta};
pub use lex::{lex_compare, lex_family, lex_rank, lex_unrank, LexRank};
pub use measure::MeasureValue;
pub use subset::{k_subsets, Combinations, KSubset, MAX_N};

pub(crate) use subset::{check_n, full_mask, mask_elements, submasks};

use crate::binom::binomial;
use crate::error::{Error, Result};

/// A family of `k`-subsets drawn from a ground set `X ⊆ [n]`.
///
/// The ground set is all of `[n]` for ordinary families. Restrictions
/// `F_J^B` live on `[n] \ J`, and measures are always taken relative to
/// `C(|X|, k)`. Members iterate in lexicographic order.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct SetFamily {
    n: u32,
    k: u32,
    ground: u64,
    members: BTreeSet<KSubset>,
}

impl SetFamily {
    /// Empty family in `C([n], k)`.
    pub fn empty(n: u32, k: u32) -> Result<Self> {
        check_n(n)?;
        if k > n {
            return Err(Error::param(format!("uniformity k={k} exceeds n={n}")));
        }
        Ok(SetFamily {
            n,
            k,
            ground: full_mask(n),
            members: BTreeSet::new(),
        })
    }

    /// Empty family of `k`-sets over an arbitrary ground set `X ⊆ [n]`.
    pub fn empty_on(n: u32, k: u32, ground: &KSubset) -> Result<Self> {
        check_n(n)?;
        if ground.n() != n {
            return Err(Error::param("ground set has a different ambient n"));
        }
        Ok(SetFamily {
            n,
            k,
            ground: ground.mask(),
            members: BTreeSet::new(),
        })
    }

    pub fn from_members<I>(n: u32, k: u32, members: I) -> Result<Self>
    where
        I: IntoIterator<Item = KSubset>,
    {
        let mut fam = SetFamily::empty(n, k)?;
        for a in members {
            if !fam.insert(a)? {
                return Err(Error::param(format!("duplicate member {a}")));
            }
        }
        Ok(fam)
    }

    /// Members given as element lists.
    pub fn from_lists(n: u32, k: u32, lists: &[&[u32]]) -> Result<Self> {
        let sets = lists
            .iter()
            .map(|l| KSubset::new(n, l))
            .collect::<Result<Vec<_>>>()?;
        SetFamily::from_members(n, k, sets)
    }

    /// All of `C(X, k)`.
    pub fn full_on(n: u32, k: u32, ground: &KSubset) -> Result<Self> {
        let mut fam = SetFamily::empty_on(n, k, ground)?;
        fam.members = Combinations::new(n, ground.mask(), k).collect();
        Ok(fam)
    }

    pub fn full(n: u32, k: u32) -> Result<Self> {
        check_n(n)?;
        SetFamily::full_on(n, k, &KSubset::from_mask_unchecked(n, full_mask(n)))
    }

    /// Insert a member; returns `false` if it was already present.
    pub fn insert(&mut self, a: KSubset) -> Result<bool> {
        if a.n() != self.n {
            return Err(Error::param(format!(
                "set {a} has ambient n={}, family has n={}",
                a.n(),
                self.n
            )));
        }
        if a.len() != self.k {
            return Err(Error::param(format!(
                "set {a} has size {}, family is {}-uniform",
                a.len(),
                self.k
            )));
        }
        if a.mask() & !self.ground != 0 {
            return Err(Error::param(format!("set {a} leaves the ground set")));
        }
        Ok(self.members.insert(a))
    }

    pub(crate) fn insert_unchecked(&mut self, a: KSubset) {
        self.members.insert(a);
    }

    pub fn remove(&mut self, a: &KSubset) -> bool {
        self.members.remove(a)
    }

    pub fn n(&self) -> u32 {
        self.n
    }

    pub fn k(&self) -> u32 {
        self.k
    }

    pub fn ground(&self) -> KSubset {
        KSubset::from_mask_unchecked(self.n, self.ground)
    }

    pub(crate) fn ground_mask(&self) -> u64 {
        self.ground
    }

    pub fn ground_size(&self) -> u32 {
        self.ground.count_ones()
    }

    /// Whether the ground set is all of `[n]`.
    pub fn is_standard(&self) -> bool {
        self.ground == full_mask(self.n)
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    pub fn contains(&self, a: &KSubset) -> bool {
        self.members.contains(a)
    }

    pub fn iter(&self) -> impl Iterator<Item = &KSubset> + '_ {
        self.members.iter()
    }

    pub fn members(&self) -> &BTreeSet<KSubset> {
        &self.members
    }

    pub fn to_vec(&self) -> Vec<KSubset> {
        self.members.iter().copied().collect()
    }

    /// `C(|X|, k)`.
    pub fn universe_size(&self) -> u128 {
        binomial(self.ground_size(), self.k)
    }

    /// `μ(F) = |F| / C(|X|, k)`.
    pub fn measure(&self) -> MeasureValue {
        MeasureValue::from_counts(self.len() as u128, self.universe_size())
    }

    pub(crate) fn same_ambient(&self, other: &SetFamily) -> Result<()> {
        if self.n != other.n || self.k != other.k || self.ground != other.ground {
            return Err(Error::param(format!(
                "families live in different ambients: (n={}, k={}) vs (n={}, k={})",
                self.n, self.k, other.n, other.k
            )));
        }
        Ok(())
    }

    /// `F_J^B = { A ⊆ X \ J, |A| = k - |B| : A ∪ B ∈ F }`.
    pub fn restrict(&self, j: &KSubset, b: &KSubset) -> Result<SetFamily> {
        if j.n() != self.n || b.n() != self.n {
            return Err(Error::param("restriction sets have a different ambient n"));
        }
        if !b.is_subset_of(j) {
            return Err(Error::param(format!("B = {b} is not a subset of J = {j}")));
        }
        if b.len() > self.k {
            return Err(Error::param(format!(
                "|B| = {} exceeds the uniformity k = {}",
                b.len(),
                self.k
            )));
        }
        let ground = self.ground & !j.mask();
        let mut out = SetFamily {
            n: self.n,
            k: self.k - b.len(),
            ground,
            members: BTreeSet::new(),
        };
        for a in &self.members {
            if a.mask() & j.mask() == b.mask() {
                out.members
                    .insert(KSubset::from_mask_unchecked(self.n, a.mask() & !j.mask()));
            }
        }
        Ok(out)
    }

    /// Number of members `A` with `A ∩ J = B`, i.e. `|F_J^B|`.
    pub(crate) fn restriction_count(&self, j: u64, b: u64) -> usize {
        self.members.iter().filter(|a| a.mask() & j == b).count()
    }

    /// `F \ G` as a family.
    pub fn difference(&self, other: &SetFamily) -> Result<SetFamily> {
        self.same_ambient(other)?;
        let mut out = self.clone();
        out.members = self.members.difference(&other.members).copied().collect();
        Ok(out)
    }

    /// Whether every member contains `center` and the family is the full star.
    pub fn is_star_of(&self, center: u32) -> bool {
        if self.k == 0 || center == 0 || center > self.n || self.ground & (1u64 << (center - 1)) == 0 {
            return false;
        }
        self.len() as u128 == binomial(self.ground_size() - 1, self.k - 1)
            && self.members.iter().all(|a| a.contains(center))
    }

    /// The center of the star this family equals, if any.
    pub fn star_center(&self) -> Option<u32> {
        if self.k == 0 {
            return None;
        }
        mask_elements(self.ground).find(|&c| self.is_star_of(c))
    }

    /// Relabel elements by a permutation `perm[e - 1] = π(e)` of `[n]`.
    pub fn relabel(&self, perm: &[u32]) -> Result<SetFamily> {
        if perm.len() != self.n as usize {
            return Err(Error::param("permutation length differs from n"));
        }
        let mut seen = 0u64;
        for &p in perm {
            if p == 0 || p > self.n || seen & (1u64 << (p - 1)) != 0 {
                return Err(Error::param("not a permutation of [n]"));
            }
            seen |= 1u64 << (p - 1);
        }
        let map = |mask: u64| mask_elements(mask).fold(0u64, |m, e| m | (1u64 << (perm[e as usize - 1] - 1)));
        Ok(SetFamily {
            n: self.n,
            k: self.k,
            ground: map(self.ground),
            members: self
                .members
                .iter()
                .map(|a| KSubset::from_mask_unchecked(self.n, map(a.mask())))
                .collect(),
        })
    }
}

impl std::fmt::Debug for SetFamily {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "SetFamily(n={}, k={}, ", self.n, self.k)?;
        if !self.is_standard() {
            write!(f, "ground={}, ", self.ground())?;
        }
        f.debug_list().entries(self.members.iter()).finish()?;
        write!(f, ")")
    }
}

impl<'a> IntoIterator for &'a SetFamily {
    type Item = &'a KSubset;
    type IntoIter = std::collections::btree_set::Iter<'a, KSubset>;

    fn into_iter(self) -> Self::IntoIter {
        self.members.iter()
    }
}

/// Smallest `ε` with `F` `ε`-essentially contained in `G`: `|F \ G| / C(n, k)`.
pub fn essential_containment(f: &SetFamily, g: &SetFamily) -> Result<MeasureValue> {
    f.same_ambient(g)?;
    let outside = f.members.iter().filter(|a| !g.contains(a)).count();
    Ok(MeasureValue::from_counts(outside as u128, f.universe_size()))
}

pub fn measure(f: &SetFamily) -> MeasureValue {
    f.measure()
}

/// `F_J^B` with `J`, `B` given as element lists.
pub fn restrict(f: &SetFamily, j: &[u32], b: &[u32]) -> Result<SetFamily> {
    let j = KSubset::new(f.n(), j)?;
    let b = KSubset::new(f.n(), b)?;
    f.restrict(&j, &b)
}
