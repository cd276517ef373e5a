//! Upper shadows, monotone closures and biased measures, plus the
//! Kruskal–Katona style lower bounds on shadow sizes.

use std::collections::HashSet;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::binom::{binomial, int, pow, ratio};
use crate::error::{Error, Result};
use crate::family::{construct, lex_family, Construction, KSubset, MeasureValue, SetFamily};
use crate::rational;

/// `F^{↑l}`: all `l`-subsets of the ground set containing some member of `F`.
pub fn upper_shadow(f: &SetFamily, l: u32) -> Result<SetFamily> {
    let top = f.ground_size();
    if l < f.k() || l > top {
        return Err(Error::param(format!(
            "shadow level l={l} outside [k, |X|] = [{}, {top}]",
            f.k()
        )));
    }
    let mut current = f.clone();
    for _ in f.k()..l {
        current = step_up(&current);
    }
    Ok(current)
}

// One level of superset expansion.
fn step_up(f: &SetFamily) -> SetFamily {
    let n = f.n();
    let ground = f.ground_mask();
    let mut seen: HashSet<u64> = HashSet::new();
    for a in f.iter() {
        let mut free = ground & !a.mask();
        while free != 0 {
            let bit = free & free.wrapping_neg();
            free &= free - 1;
            seen.insert(a.mask() | bit);
        }
    }
    let mut out = SetFamily::empty_on(n, f.k() + 1, &f.ground()).expect("same ambient");
    for m in seen {
        out.insert_unchecked(KSubset::from_mask_unchecked(n, m));
    }
    out
}

/// A family of subsets of `X` stored level by level, `layers[r] ⊆ C(X, r)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LayeredFamily {
    n: u32,
    ground: KSubset,
    layers: Vec<SetFamily>,
}

impl LayeredFamily {
    pub fn empty(n: u32, ground: KSubset) -> Result<Self> {
        let layers = (0..=ground.len())
            .map(|r| SetFamily::empty_on(n, r, &ground))
            .collect::<Result<Vec<_>>>()?;
        Ok(LayeredFamily { n, ground, layers })
    }

    pub fn n(&self) -> u32 {
        self.n
    }

    pub fn ground(&self) -> &KSubset {
        &self.ground
    }

    /// Number of levels, `|X| + 1`.
    pub fn levels(&self) -> u32 {
        self.layers.len() as u32
    }

    pub fn layer(&self, r: u32) -> Option<&SetFamily> {
        self.layers.get(r as usize)
    }

    pub fn layers(&self) -> &[SetFamily] {
        &self.layers
    }

    pub fn contains(&self, a: &KSubset) -> bool {
        self.layers
            .get(a.len() as usize)
            .is_some_and(|layer| layer.contains(a))
    }

    pub fn total_size(&self) -> usize {
        self.layers.iter().map(SetFamily::len).sum()
    }

    /// Every one-element extension of a member at level `r` is a member at `r + 1`.
    pub fn is_monotone(&self) -> bool {
        self.layers
            .windows(2)
            .all(|w| step_up(&w[0]).iter().all(|a| w[1].contains(a)))
    }

    /// `{ A ⊆ X \ J : A ∪ B ∈ self }`, still stored by level.
    pub fn restrict(&self, j: &KSubset, b: &KSubset) -> Result<LayeredFamily> {
        if !b.is_subset_of(j) {
            return Err(Error::param(format!("B = {b} is not a subset of J = {j}")));
        }
        let ground = KSubset::from_mask(self.n, self.ground.mask() & !j.mask())?;
        let mut out = LayeredFamily::empty(self.n, ground)?;
        for layer in &self.layers {
            for a in layer.iter() {
                if a.mask() & j.mask() == b.mask() {
                    let rest = KSubset::from_mask_unchecked(self.n, a.mask() & !j.mask());
                    out.layers[rest.len() as usize].insert_unchecked(rest);
                }
            }
        }
        Ok(out)
    }
}

/// `F^↑` split into levels; levels below `k` are empty.
pub fn monotone_closure(f: &SetFamily) -> LayeredFamily {
    let mut out = LayeredFamily::empty(f.n(), f.ground()).expect("family ambient is valid");
    let mut current = f.clone();
    let top = f.ground_size();
    for r in f.k()..=top {
        if r > f.k() {
            current = step_up(&current);
        }
        out.layers[r as usize] = current.clone();
    }
    out
}

/// A bias `p ∈ [0, 1]`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct BiasedMeasureQuery {
    #[serde(serialize_with = "rational::serialize", deserialize_with = "rational::deserialize")]
    p: BigRational,
}

impl BiasedMeasureQuery {
    pub fn new(p: BigRational) -> Result<Self> {
        if p.is_negative() || p > BigRational::one() {
            return Err(Error::param(format!(
                "bias p = {} outside [0, 1]",
                rational::format_rational(&p)
            )));
        }
        Ok(BiasedMeasureQuery { p })
    }

    pub fn p(&self) -> &BigRational {
        &self.p
    }
}

/// `μ_p = Σ_r p^r (1-p)^{N-r} C(N, r) μ(layer r)` with `N = |X|`.
pub fn biased_measure(lf: &LayeredFamily, query: &BiasedMeasureQuery) -> MeasureValue {
    let p = query.p();
    let q = BigRational::one() - p;
    let big_n = lf.ground.len();
    let mut total = BigRational::zero();
    for (r, layer) in lf.layers.iter().enumerate() {
        if layer.is_empty() {
            continue;
        }
        let r = r as u32;
        let weight = pow(p, r) * pow(&q, big_n - r) * int(binomial(big_n, r));
        total += weight * layer.measure().into_inner();
    }
    MeasureValue::new(total).expect("a convex combination of measures stays in [0, 1]")
}

/// Outcome of checking the Kruskal–Katona corollary bounds on one family.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct KKBoundReport {
    pub n: u32,
    pub k: u32,
    pub l: u32,
    /// `|F^{↑l}|`.
    pub actual: u128,
    pub size: u128,
    /// `ε` with `|F| = C(n-1,k-1)(1-ε)`, clamped at 0.
    #[serde(serialize_with = "rational::serialize", deserialize_with = "rational::deserialize")]
    pub epsilon: BigRational,
    /// Largest `m` with `|F| ≥ C(n-1,k-1) - C(n-m,k-1)`.
    pub m: u32,
    /// `ε'` with `|F| = C(n-1,k-1) - (1-ε')C(n-m,k-1)`.
    #[serde(serialize_with = "rational::serialize", deserialize_with = "rational::deserialize")]
    pub epsilon_prime: BigRational,
    pub bounds: KKBounds,
    pub satisfied: KKSatisfied,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct KKBounds {
    /// `⌈C(n-1,l-1)(1-ε)⌉`.
    pub bound1: u128,
    /// `⌈C(n-1,l-1) - (1-ε')C(n-m,l-1)⌉`.
    pub bound2: u128,
    /// The supplied constant `C`.
    #[serde(serialize_with = "rational::serialize", deserialize_with = "rational::deserialize")]
    pub c: BigRational,
    /// `C·ε^{1+1/C}`, approximated for display; the comparison itself is exact.
    pub bound3_epsilon: f64,
    /// `C(n-1,l-1)(1 - C·ε^{1+1/C})`, approximated for display.
    pub bound3: f64,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct KKSatisfied {
    pub bound1: bool,
    pub bound2: bool,
    /// Informational: the constant is not known, so failure is not a violation.
    pub bound3: bool,
}

/// Evaluate the three shadow lower bounds for `F` at level `l`.
///
/// Bound 1 holds for every family and bound 2 for every family with
/// `k >= 2` (both follow from Kruskal–Katona). For `k = 1` the lex family
/// behind bound 2 is empty while the bound stays positive, so the flag is
/// informational there. Bound 3 depends on the caller's `C` and is reported,
/// not asserted.
pub fn kk_verify(f: &SetFamily, l: u32, c: &BigRational) -> Result<KKBoundReport> {
    let (n, k) = (f.ground_size(), f.k());
    if !(k < l && l < n) || k == 0 {
        return Err(Error::param(format!("need 1 <= k < l < n, got k={k} l={l} n={n}")));
    }
    if !c.is_positive() {
        return Err(Error::param("the constant C must be positive"));
    }
    let star_k = binomial(n - 1, k - 1);
    let star_l = binomial(n - 1, l - 1);
    let size = f.len() as u128;
    let eff = size.min(star_k);
    let actual = upper_shadow(f, l)?.len() as u128;

    let epsilon = BigRational::one() - ratio(eff, star_k);

    // m ranges over 1..=n-k+1 so that C(n-m, k-1) stays positive
    let mut m = 1;
    for cand in 1..=(n - k + 1) {
        if eff + binomial(n - cand, k - 1) >= star_k {
            m = cand;
        }
    }
    let tail_k = binomial(n - m, k - 1);
    let one_minus_eps_prime = ratio(star_k - eff, tail_k);
    let epsilon_prime = BigRational::one() - &one_minus_eps_prime;

    let b1 = int(star_l) * (BigRational::one() - &epsilon);
    let b2 = int(star_l) - one_minus_eps_prime * int(binomial(n - m, l - 1));
    let bound1 = ceil_u128(&b1);
    let bound2 = ceil_u128(&b2);

    let deficit = BigRational::one() - ratio(actual, star_l);
    let bound3_ok = power_form_at_least(&epsilon, c, &deficit);
    let eps_f = epsilon.to_f64().unwrap_or(f64::NAN);
    let c_f = c.to_f64().unwrap_or(f64::NAN);
    let bound3_epsilon = c_f * eps_f.powf(1.0 + 1.0 / c_f);

    Ok(KKBoundReport {
        n,
        k,
        l,
        actual,
        size,
        epsilon,
        m,
        epsilon_prime,
        bounds: KKBounds {
            bound1,
            bound2,
            c: c.clone(),
            bound3_epsilon,
            bound3: star_l as f64 * (1.0 - bound3_epsilon),
        },
        satisfied: KKSatisfied {
            bound1: actual >= bound1,
            bound2: actual >= bound2,
            bound3: bound3_ok,
        },
    })
}

fn ceil_u128(q: &BigRational) -> u128 {
    if q.is_negative() {
        return 0;
    }
    q.ceil().to_integer().to_u128().expect("bounded by a binomial")
}

/// Exact test of `C·ε^{1+1/C} ≥ x` for rational `C = a/b > 0`, `ε ∈ [0,1]`.
fn power_form_at_least(epsilon: &BigRational, c: &BigRational, x: &BigRational) -> bool {
    if !x.is_positive() {
        return true;
    }
    if epsilon.is_zero() {
        return false;
    }
    let a = c.numer().to_u32();
    let b = c.denom().to_u32();
    match (a, b) {
        (Some(a), Some(b)) if a + b <= 4096 => {
            // ε^{(a+b)/a} ≥ x/C  ⇔  ε^{a+b} ≥ (x/C)^a
            let rhs = x / c;
            pow(epsilon, a + b) >= pow(&rhs, a)
        }
        _ => {
            let e = epsilon.to_f64().unwrap_or(0.0);
            let cf = c.to_f64().unwrap_or(f64::INFINITY);
            cf * e.powf(1.0 + 1.0 / cf) >= x.to_f64().unwrap_or(f64::INFINITY)
        }
    }
}

/// Result of sampling random families against the lex family of the same size.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct KKMinimalityReport {
    pub n: u32,
    pub k: u32,
    pub l: u32,
    pub i: u128,
    pub samples: u32,
    /// `|L(i,k,n)^{↑l}|`.
    pub lex_shadow: u128,
    /// Smallest `|F^{↑l}|` seen; `None` when nothing was sampled.
    pub min_observed: Option<u128>,
    pub violations: u32,
    pub pass: bool,
}

/// Draw `samples` uniform families of size `i` and compare their shadows with the lex family's.
pub fn kk_minimality_test(
    i: u128,
    k: u32,
    l: u32,
    n: u32,
    samples: u32,
    seed: u64,
) -> Result<KKMinimalityReport> {
    if !(k < l && l < n) {
        return Err(Error::param(format!("need k < l < n, got k={k} l={l} n={n}")));
    }
    let lex = lex_family(i, k, n)?;
    let lex_shadow = upper_shadow(&lex, l)?.len() as u128;
    let mut min_observed: Option<u128> = None;
    let mut violations = 0;
    for t in 0..samples {
        let sample_seed = seed.wrapping_mul(0x9E37_79B9_7F4A_7C15).wrapping_add(u64::from(t));
        let f = construct(&Construction::Random { size: i, seed: sample_seed }, n, k)?;
        let s = upper_shadow(&f, l)?.len() as u128;
        min_observed = Some(min_observed.map_or(s, |m| m.min(s)));
        if s < lex_shadow {
            violations += 1;
        }
    }
    Ok(KKMinimalityReport {
        n,
        k,
        l,
        i,
        samples,
        lex_shadow,
        min_observed,
        violations,
        pass: violations == 0,
    })
}

/// Check the per-factor inequalities behind the `ε^{1+1/C}` bound:
/// for `i = 1..m-1`, `1 - (k-1)/(n-i) ≥ ζ` and
/// `(1 - (l-1)/(n-i)) / (1 - (k-1)/(n-i)) ≤ 1 - ζ`, assuming `l - k ≥ ζn` and `n - m ≥ l - 1`.
/// Returns `None` when the hypotheses fail.
pub fn ratio_factors_hold(n: u32, k: u32, l: u32, m: u32, zeta: &BigRational) -> Option<bool> {
    if !(1 <= k && k < l && l < n) || m < 1 || n < m + l - 1 {
        return None;
    }
    if int(u128::from(l - k)) < zeta * int(u128::from(n)) {
        return None;
    }
    let one = BigRational::one();
    let ok = (1..m).all(|i| {
        let d = BigInt::from(n - i);
        let fk = &one - BigRational::new(BigInt::from(k - 1), d.clone());
        let fl = &one - BigRational::new(BigInt::from(l - 1), d);
        fk >= *zeta && fl / fk <= &one - zeta
    });
    Some(ok)
}
