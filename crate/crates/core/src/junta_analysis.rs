//! Regularity of families, regular decompositions into juntas, the
//! junta cluster/intersection equivalence, and distance to the nearest star.

use std::collections::HashMap;

use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use rayon::prelude::*;
use serde::Serialize;

use crate::binom::{binomial, ratio};
use crate::cluster::{find_cluster, s_wise_intersecting, FindMode, WitnessDoc};
use crate::error::{Error, Result};
use crate::family::{mask_elements, submasks, Combinations, Junta, KSubset, MeasureValue, SetFamily};
use crate::rational;

/// The pair `(J, B)` realising the largest deviation `|μ(F_J^B) - μ(F)|`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct RegularityWitness {
    #[serde(rename = "J")]
    pub j: Vec<u32>,
    #[serde(rename = "B")]
    pub b: Vec<u32>,
    #[serde(serialize_with = "rational::serialize")]
    pub deviation: BigRational,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct RegularityReport {
    pub r: u32,
    #[serde(serialize_with = "rational::serialize")]
    pub epsilon: BigRational,
    pub regular: bool,
    pub worst_witness: Option<RegularityWitness>,
    pub pairs_checked: u64,
}

// Worst (J, B) for one J, as (deviation, b mask, pairs checked).
fn worst_for_j(
    f: &SetFamily,
    base: &BigRational,
    j: u64,
) -> (Option<(BigRational, u64)>, u64) {
    let ground_size = f.ground_size();
    let jn = j.count_ones();
    let mut counts: HashMap<u64, u128> = HashMap::new();
    for a in f.iter() {
        *counts.entry(a.mask() & j).or_default() += 1;
    }
    let mut subsets: Vec<u64> = submasks(j).collect();
    subsets.sort_by(|a, b| {
        a.count_ones()
            .cmp(&b.count_ones())
            .then_with(|| crate::family::KSubset::from_mask_unchecked(f.n(), *a)
                .lex_cmp(&crate::family::KSubset::from_mask_unchecked(f.n(), *b)))
    });
    let mut worst: Option<(BigRational, u64)> = None;
    let mut checked = 0;
    for b in subsets {
        let bn = b.count_ones();
        if bn > f.k() {
            continue;
        }
        let universe = binomial(ground_size - jn, f.k() - bn);
        if universe == 0 {
            continue;
        }
        checked += 1;
        let mu = ratio(counts.get(&b).copied().unwrap_or(0), universe);
        let dev = (mu - base).abs();
        if worst.as_ref().is_none_or(|(w, _)| dev > *w) {
            worst = Some((dev, b));
        }
    }
    (worst, checked)
}

/// All `J ⊆ X` with `|J| <= r`, by size then lex.
fn candidate_sets(f: &SetFamily, max_size: u32) -> Vec<u64> {
    (0..=max_size.min(f.ground_size()))
        .flat_map(|size| Combinations::new(f.n(), f.ground_mask(), size).map(|c| c.mask()))
        .collect()
}

/// Check `|μ(F_J^B) - μ(F)| <= ε` for every `|J| <= r` and `B ⊆ J`.
///
/// Pairs whose restricted universe `C(|X| - |J|, k - |B|)` is empty are skipped.
pub fn regularity_check(f: &SetFamily, r: u32, epsilon: &BigRational) -> RegularityReport {
    let base = f.measure().into_inner();
    let js = candidate_sets(f, r);
    let per_j: Vec<(Option<(BigRational, u64)>, u64)> =
        js.par_iter().map(|&j| worst_for_j(f, &base, j)).collect();
    let mut worst: Option<(BigRational, u64, u64)> = None;
    let mut pairs = 0;
    for (&j, (w, checked)) in js.iter().zip(per_j) {
        pairs += checked;
        if let Some((dev, b)) = w {
            if worst.as_ref().is_none_or(|(d, _, _)| dev > *d) {
                worst = Some((dev, j, b));
            }
        }
    }
    let regular = worst.as_ref().is_none_or(|(d, _, _)| d <= epsilon);
    RegularityReport {
        r,
        epsilon: epsilon.clone(),
        regular,
        worst_witness: worst.map(|(deviation, j, b)| RegularityWitness {
            j: mask_elements(j).collect(),
            b: mask_elements(b).collect(),
            deviation,
        }),
        pairs_checked: pairs,
    }
}

/// One part `F_J^B` of an accepted decomposition.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PartReport {
    #[serde(rename = "B")]
    pub b: Vec<u32>,
    pub regular: bool,
    pub measure: MeasureValue,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct DecompositionResult {
    #[serde(rename = "J")]
    pub j: Vec<u32>,
    #[serde(rename = "G")]
    pub g: Vec<Vec<u32>>,
    /// Regularity radius actually used: `min(⌈1/δ⌉, |X| - |J|)`.
    pub r: u32,
    /// `|F \ ⟨G⟩| / C(|X|, k)`.
    pub remainder_measure: MeasureValue,
    pub parts: Vec<PartReport>,
}

impl DecompositionResult {
    /// The junta `⟨G⟩` as a value, for families on the full ground set.
    pub fn junta(&self, f: &SetFamily) -> Result<Junta> {
        Junta::from_lists(
            f.n(),
            f.k(),
            &self.j,
            &self.g.iter().map(Vec::as_slice).collect::<Vec<_>>(),
        )
    }
}

fn ceil_inverse(delta: &BigRational) -> u32 {
    let v = (BigRational::one() / delta).ceil().to_integer();
    u32::try_from(v).unwrap_or(u32::MAX)
}

fn try_decomposition(
    f: &SetFamily,
    j: u64,
    delta: &BigRational,
    epsilon: &BigRational,
) -> Option<DecompositionResult> {
    let n = f.n();
    let jset = KSubset::from_mask_unchecked(n, j);
    let r = ceil_inverse(delta).min(f.ground_size() - j.count_ones());
    let half_eps = epsilon / BigRational::from_integer(2.into());
    let mut parts = Vec::new();
    let mut g = Vec::new();
    let mut outside = 0u128;
    let mut subsets: Vec<u64> = submasks(j).collect();
    subsets.sort_by(|a, b| {
        KSubset::from_mask_unchecked(n, *a).lex_cmp(&KSubset::from_mask_unchecked(n, *b))
    });
    subsets.sort_by_key(|m| m.count_ones());
    for b in subsets {
        let bset = KSubset::from_mask_unchecked(n, b);
        let accepted = if b.count_ones() > f.k() {
            false
        } else {
            let part = f.restrict(&jset, &bset).expect("B ⊆ J and |B| <= k");
            if part.universe_size() == 0 {
                false
            } else {
                let mu = part.measure();
                let regular = regularity_check(&part, r, delta).regular;
                if regular && *mu.value() > half_eps {
                    parts.push(PartReport {
                        b: bset.elements(),
                        regular,
                        measure: mu,
                    });
                    true
                } else {
                    false
                }
            }
        };
        if accepted {
            g.push(bset.elements());
        } else {
            outside += f.restriction_count(j, b) as u128;
        }
    }
    let remainder = MeasureValue::from_counts(outside, f.universe_size());
    (remainder.value() <= epsilon).then(|| DecompositionResult {
        j: jset.elements(),
        g,
        r,
        remainder_measure: remainder,
        parts,
    })
}

/// Search `J` by increasing size, then lex, for a decomposition whose parts
/// `F_J^B` (`B ∈ G`) are `(⌈1/δ⌉, δ)`-regular with `μ > ε/2` and whose junta
/// `⟨G⟩` essentially contains `F` up to `ε`. `G` is always the maximal
/// admissible collection for the given `J`.
pub fn find_regular_decomposition(
    f: &SetFamily,
    delta: &BigRational,
    epsilon: &BigRational,
    j_max: u32,
) -> Result<Option<DecompositionResult>> {
    let zero = BigRational::zero();
    let one = BigRational::one();
    if !(*delta > zero && *delta < one && *epsilon > zero && *epsilon < one) {
        return Err(Error::param("delta and epsilon must lie strictly between 0 and 1"));
    }
    if j_max > f.ground_size() {
        return Err(Error::param(format!(
            "j_max = {j_max} exceeds the ground set size {}",
            f.ground_size()
        )));
    }
    for size in 0..=j_max {
        let js: Vec<u64> = Combinations::new(f.n(), f.ground_mask(), size)
            .map(|c| c.mask())
            .collect();
        let hit = js
            .par_iter()
            .find_map_first(|&j| try_decomposition(f, j, delta, epsilon));
        if hit.is_some() {
            return Ok(hit);
        }
    }
    Ok(None)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct JuntaVerdict {
    pub n: u32,
    pub k: u32,
    pub d: u32,
    pub s: u32,
    pub family_size: usize,
    pub cluster_free: bool,
    pub dplus1_wise: bool,
    /// Whether the two predicates agree.
    pub equivalent: bool,
    /// Whether `s >= (d+1)k/d + |J|` and `n >= s`, so agreement is a theorem.
    pub hypotheses_hold: bool,
    pub cluster: Option<WitnessDoc>,
    pub violating: Option<Vec<Vec<u32>>>,
}

/// Realise `⟨G⟩` at level `k` and compare cluster-freeness with `(d+1)`-wise intersection.
pub fn junta_cluster_equivalence(junta: &Junta, k: u32, d: u32, s: u32) -> Result<JuntaVerdict> {
    if d == 0 {
        return Err(Error::param("d must be at least 1"));
    }
    let fam = crate::family::junta_generate(junta, k)?;
    let cluster = find_cluster(&fam, d, s, FindMode::Exhaustive);
    let swise = s_wise_intersecting(&fam, d + 1)?;
    let n = junta.n();
    let j = junta.j().len();
    let hypotheses_hold = u64::from(d) * u64::from(s) >= u64::from(d + 1) * u64::from(k) + u64::from(d) * u64::from(j)
        && n >= s;
    Ok(JuntaVerdict {
        n,
        k,
        d,
        s,
        family_size: fam.len(),
        cluster_free: cluster.is_none(),
        dplus1_wise: swise.intersecting,
        equivalent: cluster.is_none() == swise.intersecting,
        hypotheses_hold,
        cluster: cluster.map(|w| w.to_doc()),
        violating: swise.violating,
    })
}

/// How far `F` is from the nearest star.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct StabilityReport {
    pub best_center: u32,
    /// `|F \ S| / C(n, k)` for the best star `S`.
    pub outside_measure: MeasureValue,
    /// `ε''` with `|F ∩ S| = C(n-1, k-1)(1 - ε'')`.
    #[serde(serialize_with = "rational::serialize")]
    pub inside_deficit: BigRational,
}

pub fn stability_report(f: &SetFamily) -> Result<StabilityReport> {
    if f.k() == 0 || f.ground_size() == 0 {
        return Err(Error::param("stability needs k >= 1 and a nonempty ground set"));
    }
    let star_size = binomial(f.ground_size() - 1, f.k() - 1);
    let mut best: Option<(usize, u32)> = None;
    for c in mask_elements(f.ground_mask()) {
        let outside = f.iter().filter(|a| !a.contains(c)).count();
        if best.is_none_or(|(b, _)| outside < b) {
            best = Some((outside, c));
        }
    }
    let (outside, center) = best.expect("ground set is nonempty");
    let inside = f.len() - outside;
    Ok(StabilityReport {
        best_center: center,
        outside_measure: MeasureValue::from_counts(outside as u128, f.universe_size()),
        inside_deficit: BigRational::one() - ratio(inside as u128, star_size),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::family::{construct, essential_containment, restrict, Construction};
    use crate::rational::parse_rational;
    use crate::shadow::{biased_measure, monotone_closure, BiasedMeasureQuery};

    fn q(s: &str) -> BigRational {
        parse_rational(s).unwrap()
    }

    fn star(n: u32, k: u32) -> SetFamily {
        construct(&Construction::Star { center: 1 }, n, k).unwrap()
    }

    // Conditional probability Pr[A ∈ F | A ∩ J = B] by scanning all of C([n], k).
    fn conditional(f: &SetFamily, j: &[u32], b: &[u32]) -> Option<BigRational> {
        let jm = KSubset::new(f.n(), j).unwrap().mask();
        let bm = KSubset::new(f.n(), b).unwrap().mask();
        let (mut hit, mut total) = (0u128, 0u128);
        for a in crate::family::k_subsets(f.n(), f.k()) {
            if a.mask() & jm == bm {
                total += 1;
                if f.contains(&a) {
                    hit += 1;
                }
            }
        }
        (total > 0).then(|| ratio(hit, total))
    }

    #[test]
    fn full_family_is_regular_at_zero() {
        let f = SetFamily::full(6, 3).unwrap();
        for r in 0..=4 {
            let rep = regularity_check(&f, r, &BigRational::zero());
            assert!(rep.regular);
        }
    }

    #[test]
    fn star_is_irregular_at_radius_one() {
        let rep = regularity_check(&star(6, 3), 1, &q("1/4"));
        assert!(!rep.regular);
        let w = rep.worst_witness.unwrap();
        assert_eq!((w.j, w.b, w.deviation), (vec![1], vec![], q("1/2")));
    }

    #[test]
    fn odd_bipartite_deviations_match_enumeration() {
        let f = construct(&Construction::OddBipartite, 8, 4).unwrap();
        let base = f.measure().into_inner();
        let rep = regularity_check(&f, 1, &BigRational::zero());
        let mut worst = BigRational::zero();
        for e in 1..=8u32 {
            for b in [vec![], vec![e]] {
                let c = conditional(&f, &[e], &b).unwrap();
                assert_eq!(restrict(&f, &[e], &b).unwrap().measure().into_inner(), c);
                let dev = (c - &base).abs();
                if dev > worst {
                    worst = dev;
                }
            }
        }
        assert_eq!(rep.worst_witness.unwrap().deviation, worst);
    }

    #[test]
    fn report_is_tight() {
        for seed in 0..10 {
            let f = construct(&Construction::Random { size: 20, seed }, 7, 3).unwrap();
            let rep = regularity_check(&f, 2, &BigRational::zero());
            let worst = rep.worst_witness.unwrap().deviation;
            assert!(regularity_check(&f, 2, &worst).regular);
            if worst.is_positive() {
                let smaller = &worst - ratio(1, 1_000_000);
                assert!(!regularity_check(&f, 2, &smaller).regular);
            }
        }
    }

    #[test]
    fn decomposition_of_a_star() {
        let f = star(6, 3);
        let d = find_regular_decomposition(&f, &q("1/4"), &q("1/10"), 2).unwrap().unwrap();
        assert_eq!(d.j, vec![1]);
        assert_eq!(d.g, vec![vec![1]]);
        assert_eq!(d.remainder_measure, MeasureValue::zero());
        assert_eq!(d.parts[0].measure, MeasureValue::one());
    }

    #[test]
    fn decomposition_of_a_regular_family_uses_empty_j() {
        let f = SetFamily::full(6, 3).unwrap();
        let d = find_regular_decomposition(&f, &q("1/4"), &q("1/10"), 2).unwrap().unwrap();
        assert!(d.j.is_empty());
        assert_eq!(d.g, vec![Vec::<u32>::new()]);
    }

    #[test]
    fn decomposition_of_a_tiny_family_is_the_empty_junta() {
        let f = SetFamily::from_lists(6, 3, &[&[1, 2, 3]]).unwrap();
        let d = find_regular_decomposition(&f, &q("1/4"), &q("1/10"), 2).unwrap().unwrap();
        assert!(d.j.is_empty() && d.g.is_empty());
        assert_eq!(d.remainder_measure, MeasureValue::from_counts(1, 20));
    }

    #[test]
    fn decompositions_revalidate() {
        for seed in 0..6 {
            let f = construct(&Construction::Random { size: 30 + seed as u128, seed }, 7, 3).unwrap();
            let (delta, eps) = (q("1/3"), q("1/2"));
            if let Some(d) = find_regular_decomposition(&f, &delta, &eps, 3).unwrap() {
                let junta = d.junta(&f).unwrap();
                let ec = essential_containment(&f, &junta.generate()).unwrap();
                assert_eq!(ec, d.remainder_measure);
                assert!(ec.value() <= &eps);
                let jset = KSubset::new(7, &d.j).unwrap();
                for part in &d.parts {
                    let b = KSubset::new(7, &part.b).unwrap();
                    let fam = f.restrict(&jset, &b).unwrap();
                    assert!(regularity_check(&fam, d.r, &delta).regular);
                    assert!(part.measure.value() > &(&eps / BigRational::from_integer(2.into())));
                }
            }
        }
    }

    #[test]
    fn decomposition_parameter_checks() {
        let f = star(5, 2);
        assert!(find_regular_decomposition(&f, &q("0"), &q("1/2"), 1).is_err());
        assert!(find_regular_decomposition(&f, &q("1/2"), &q("1"), 1).is_err());
        assert!(find_regular_decomposition(&f, &q("1/2"), &q("1/2"), 6).is_err());
    }

    #[test]
    fn junta_equivalence_examples() {
        let star = Junta::from_lists(8, 3, &[1], &[&[1]]).unwrap();
        let v = junta_cluster_equivalence(&star, 3, 2, 6).unwrap();
        assert!(v.cluster_free && v.dplus1_wise && v.equivalent && v.hypotheses_hold);

        let two = Junta::from_lists(12, 3, &[1, 2], &[&[1], &[2]]).unwrap();
        let v = junta_cluster_equivalence(&two, 3, 2, 7).unwrap();
        assert!(!v.dplus1_wise && !v.cluster_free && v.equivalent && v.hypotheses_hold);

        let all = Junta::from_lists(8, 3, &[1, 2], &[&[], &[1], &[2], &[1, 2]]).unwrap();
        let v = junta_cluster_equivalence(&all, 3, 2, 7).unwrap();
        assert!(!v.dplus1_wise && !v.cluster_free && v.equivalent);
    }

    #[test]
    fn stability_examples() {
        let r = stability_report(&star(6, 3)).unwrap();
        assert_eq!(r.best_center, 1);
        assert_eq!(r.outside_measure, MeasureValue::zero());
        assert!(r.inside_deficit.is_zero());

        let mut f = star(6, 3);
        f.remove(&KSubset::new(6, &[1, 2, 3]).unwrap());
        let r = stability_report(&f).unwrap();
        assert_eq!(r.best_center, 1);
        assert_eq!(r.outside_measure, MeasureValue::zero());
        assert_eq!(r.inside_deficit, ratio(1, 10));

        let ff = construct(&Construction::FranklFuredi, 4, 2).unwrap();
        let r = stability_report(&ff).unwrap();
        assert_eq!(r.best_center, 1);
        assert_eq!(r.outside_measure, MeasureValue::from_counts(2, 6));
    }

    #[test]
    fn outside_measure_zero_iff_inside_a_star() {
        for seed in 0..40 {
            let f = construct(&Construction::Random { size: 3, seed }, 6, 3).unwrap();
            let contained = (1..=6).any(|c| f.iter().all(|a| a.contains(c)));
            let r = stability_report(&f).unwrap();
            assert_eq!(r.outside_measure.value().is_zero(), contained);
        }
    }

    #[test]
    fn monotone_restriction_dominates_empty_trace() {
        let p = BiasedMeasureQuery::new(q("2/5")).unwrap();
        for seed in 0..12 {
            let n = 8 + (seed % 3) as u32;
            let f = construct(&Construction::Random { size: 6, seed }, n, 3).unwrap();
            let lf = monotone_closure(&f);
            let j = KSubset::new(n, &[1, 2, 3]).unwrap();
            let base = biased_measure(&lf.restrict(&j, &KSubset::empty(n)).unwrap(), &p);
            for b in submasks(j.mask()) {
                let b = KSubset::from_mask(n, b).unwrap();
                let m = biased_measure(&lf.restrict(&j, &b).unwrap(), &p);
                assert!(m >= base, "seed={seed} B={b}");
            }
        }
    }

    #[test]
    fn regular_families_either_small_or_shadow_large() {
        // empirical probe at desk scale with a loose ε
        let eps = q("1/4");
        for f in [SetFamily::full(10, 3).unwrap(), construct(&Construction::OddBipartite, 10, 3).unwrap()] {
            if regularity_check(&f, 2, &q("1/5")).regular {
                let up = crate::shadow::upper_shadow(&f, 6).unwrap().measure();
                assert!(f.measure().value() < &eps || up.value() > &(BigRational::one() - &eps));
            }
        }
    }
}
