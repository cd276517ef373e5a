use std::collections::BTreeSet;

use super::subset::{check_n, full_mask, submasks, KSubset};
use super::SetFamily;
use crate::error::{Error, Result};

/// A pair `(J, G)` with `G ⊆ P(J)`. At level `k` it generates
/// `⟨G⟩ = { A ∈ C([n], k) : A ∩ J ∈ G }`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Junta {
    n: u32,
    k: u32,
    j: KSubset,
    generators: BTreeSet<KSubset>,
}

impl Junta {
    pub fn new<I>(n: u32, k: u32, j: KSubset, generators: I) -> Result<Self>
    where
        I: IntoIterator<Item = KSubset>,
    {
        check_n(n)?;
        if k > n {
            return Err(Error::param(format!("uniformity k={k} exceeds n={n}")));
        }
        if j.n() != n {
            return Err(Error::param("J has a different ambient n"));
        }
        let mut set = BTreeSet::new();
        for b in generators {
            if b.n() != n || !b.is_subset_of(&j) {
                return Err(Error::param(format!("generator {b} is not a subset of J = {j}")));
            }
            if b.len() > k {
                return Err(Error::param(format!(
                    "generator {b} has more than k = {k} elements and can never be realised"
                )));
            }
            set.insert(b);
        }
        Ok(Junta { n, k, j, generators: set })
    }

    /// Junta from element lists.
    pub fn from_lists(n: u32, k: u32, j: &[u32], generators: &[&[u32]]) -> Result<Self> {
        let j = KSubset::new(n, j)?;
        let gens = generators
            .iter()
            .map(|b| KSubset::new(n, b))
            .collect::<Result<Vec<_>>>()?;
        Junta::new(n, k, j, gens)
    }

    /// Every `G ⊆ P(J)` admissible at level `k`, in a fixed order.
    pub fn all_over(n: u32, k: u32, j: KSubset) -> Result<Vec<Junta>> {
        let candidates: Vec<KSubset> = submasks(j.mask())
            .map(|m| KSubset::from_mask_unchecked(n, m))
            .filter(|b| b.len() <= k)
            .collect();
        if candidates.len() > 20 {
            return Err(Error::param("too many generator subsets to enumerate"));
        }
        (0u64..(1u64 << candidates.len()))
            .map(|pick| {
                let gens = candidates
                    .iter()
                    .enumerate()
                    .filter(|(i, _)| pick & (1u64 << i) != 0)
                    .map(|(_, b)| *b);
                Junta::new(n, k, j, gens)
            })
            .collect()
    }

    pub fn n(&self) -> u32 {
        self.n
    }

    pub fn k(&self) -> u32 {
        self.k
    }

    pub fn j(&self) -> &KSubset {
        &self.j
    }

    pub fn generators(&self) -> &BTreeSet<KSubset> {
        &self.generators
    }

    /// `⟨G⟩ ∩ C([n], k)`.
    pub fn generate(&self) -> SetFamily {
        let mut fam = SetFamily::empty(self.n, self.k).expect("validated at construction");
        let j = self.j.mask();
        let outside = full_mask(self.n) & !j;
        for b in &self.generators {
            let need = self.k - b.len();
            for tail in super::Combinations::new(self.n, outside, need) {
                fam.insert_unchecked(KSubset::from_mask_unchecked(self.n, b.mask() | tail.mask()));
            }
        }
        fam
    }

    /// Membership test without realising the family.
    pub fn accepts(&self, a: &KSubset) -> bool {
        a.len() == self.k
            && self
                .generators
                .contains(&KSubset::from_mask_unchecked(self.n, a.mask() & self.j.mask()))
    }
}

/// `junta_generate`: realise `⟨G⟩` at level `k`.
pub fn junta_generate(junta: &Junta, k: u32) -> Result<SetFamily> {
    if k == junta.k {
        return Ok(junta.generate());
    }
    let other = Junta::new(junta.n, k, junta.j, junta.generators.iter().copied())?;
    Ok(other.generate())
}
