//! Exact and heuristic computation of `f(d,k,s,n)`, the largest size of a
//! `(d,k,s)`-cluster-free subfamily of `C([n],k)`.
//!
//! The exact search materialises every cluster among the candidate sets as a
//! bitmask edge, then runs include/exclude branch-and-bound in candidate
//! order with forward checking: once all but one set of some cluster are
//! chosen, the last one is dropped from the candidates.

use std::time::{Duration, Instant};

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::binom::binomial;
use crate::cluster::cluster_tuples;
use crate::error::{Error, Result};
use crate::family::{check_n, k_subsets, KSubset, SetFamily};

/// Largest `C(n,k)` the exact search accepts.
pub const EXACT_MAX_SETS: u128 = 128;
/// Largest `C(n,k)` for which all maxima are enumerated.
pub const UNIQUENESS_MAX_SETS: u128 = 40;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SolveMode {
    Exact,
    VerifyStar,
    Greedy,
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Budget {
    pub node_cap: Option<u64>,
    pub wall_cap_ms: Option<u64>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SolveInstance {
    pub d: u32,
    pub k: u32,
    pub s: u32,
    pub n: u32,
    pub mode: SolveMode,
    #[serde(default)]
    pub budget: Budget,
    /// Seed for greedy mode.
    #[serde(default)]
    pub seed: u64,
    /// Greedy restarts.
    #[serde(default = "default_restarts")]
    pub restarts: u32,
    /// Enumerate every maximum family and check that each is a star.
    #[serde(default)]
    pub check_uniqueness: bool,
    /// Permutation of `[n]` (`relabel[e-1]` is the image of `e`) applied to
    /// every candidate before searching. The value does not depend on it.
    #[serde(default)]
    pub relabel: Option<Vec<u32>>,
}

fn default_restarts() -> u32 {
    16
}

impl SolveInstance {
    /// Uniqueness checking is on by default in verify-star mode.
    pub fn new(d: u32, k: u32, s: u32, n: u32, mode: SolveMode) -> Self {
        SolveInstance {
            d,
            k,
            s,
            n,
            mode,
            budget: Budget::default(),
            seed: 0,
            restarts: default_restarts(),
            check_uniqueness: mode == SolveMode::VerifyStar,
            relabel: None,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.d < 1 {
            return Err(Error::param("d must be at least 1"));
        }
        check_n(self.n)?;
        if self.k < 1 || self.k > self.n {
            return Err(Error::param(format!(
                "need 1 <= k <= n, got k = {} and n = {}",
                self.k, self.n
            )));
        }
        if let Some(p) = &self.relabel {
            check_permutation(p, self.n)?;
        }
        Ok(())
    }

    pub fn star_size(&self) -> u128 {
        binomial(self.n - 1, self.k - 1)
    }
}

fn check_permutation(p: &[u32], n: u32) -> Result<()> {
    let mut seen = vec![false; n as usize + 1];
    if p.len() != n as usize {
        return Err(Error::param(format!("relabelling must list {n} images, got {}", p.len())));
    }
    for &e in p {
        if e < 1 || e > n || std::mem::replace(&mut seen[e as usize], true) {
            return Err(Error::param("relabelling is not a permutation of [n]"));
        }
    }
    Ok(())
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Uniqueness {
    pub all_maxima_are_stars: bool,
    /// Maximum families visited before stopping.
    pub maxima_examined: u64,
    pub counterexample: Option<Vec<Vec<u32>>>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SolveStats {
    pub nodes: u64,
    pub wall_ms: u64,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SolveResult {
    pub d: u32,
    pub k: u32,
    pub s: u32,
    pub n: u32,
    pub mode: SolveMode,
    /// `f(d,k,s,n)` when `exact`, otherwise a lower bound.
    pub value: u128,
    pub exact: bool,
    pub star_size: u128,
    /// `exact` and `value == C(n-1, k-1)`.
    pub star_is_max: bool,
    #[serde(serialize_with = "serialize_members")]
    pub witness: SetFamily,
    /// `None` when not requested, too large, or cut short by the budget.
    pub uniqueness: Option<Uniqueness>,
    /// Number of clusters among all candidate sets.
    pub clusters: u64,
    pub stats: SolveStats,
}

fn member_lists(f: &SetFamily) -> Vec<Vec<u32>> {
    f.iter().map(KSubset::elements).collect()
}

fn serialize_members<S: serde::Serializer>(f: &SetFamily, ser: S) -> std::result::Result<S::Ok, S::Error> {
    ser.collect_seq(f.iter().map(KSubset::elements))
}

/// Candidate sets in search order plus the clusters among them.
struct Hypergraph {
    sets: Vec<KSubset>,
    edges: Vec<Vec<usize>>,
}

impl Hypergraph {
    fn build(inst: &SolveInstance) -> Result<Self> {
        let mut sets: Vec<KSubset> = k_subsets(inst.n, inst.k).collect();
        if let Some(p) = &inst.relabel {
            sets = sets
                .iter()
                .map(|a| {
                    let img: Vec<u32> = a.iter().map(|e| p[e as usize - 1]).collect();
                    let mut img = img;
                    img.sort_unstable();
                    KSubset::new(inst.n, &img)
                })
                .collect::<Result<_>>()?;
        }
        let masks: Vec<u64> = sets.iter().map(KSubset::mask).collect();
        let edges = cluster_tuples(&masks, inst.k, inst.d, inst.s);
        Ok(Hypergraph { sets, edges })
    }

    fn family(&self, n: u32, k: u32, chosen: impl Iterator<Item = usize>) -> SetFamily {
        let mut f = SetFamily::empty(n, k).expect("validated parameters");
        for i in chosen {
            f.insert_unchecked(self.sets[i]);
        }
        f
    }
}

fn bits(mut m: u128) -> impl Iterator<Item = usize> {
    std::iter::from_fn(move || {
        (m != 0).then(|| {
            let i = m.trailing_zeros() as usize;
            m &= m - 1;
            i
        })
    })
}

struct Bnb {
    incident: Vec<Vec<u128>>,
    nodes: u64,
    node_cap: Option<u64>,
    deadline: Option<Instant>,
    exhausted: bool,
}

impl Bnb {
    fn new(graph: &Hypergraph, budget: &Budget, start: Instant) -> Self {
        let mut incident = vec![Vec::new(); graph.sets.len()];
        for e in &graph.edges {
            let mask = e.iter().fold(0u128, |m, &i| m | 1 << i);
            for &i in e {
                incident[i].push(mask);
            }
        }
        Bnb {
            incident,
            nodes: 0,
            node_cap: budget.node_cap,
            deadline: budget.wall_cap_ms.map(|ms| start + Duration::from_millis(ms)),
            exhausted: false,
        }
    }

    fn tick(&mut self) -> bool {
        if self.exhausted {
            return false;
        }
        self.nodes += 1;
        if self.node_cap.is_some_and(|cap| self.nodes > cap)
            || (self.nodes.is_multiple_of(4096) && self.deadline.is_some_and(|d| Instant::now() > d))
        {
            self.exhausted = true;
        }
        !self.exhausted
    }

    fn include(&self, chosen: u128, allowed: u128, i: usize) -> (u128, u128) {
        let bit = 1u128 << i;
        let chosen = chosen | bit;
        let mut allowed = allowed & !bit;
        for &e in &self.incident[i] {
            let rest = e & !chosen;
            if rest.count_ones() == 1 {
                allowed &= !rest;
            }
        }
        (chosen, allowed)
    }

    /// Raise `best` above its current size. Exclude-first while `best` is
    /// still at `star`, include-first once it has been beaten. Stops early
    /// once `best` reaches `stop_at`.
    fn maximize(&mut self, chosen: u128, allowed: u128, best: &mut u128, star: u32, stop_at: u32) {
        if !self.tick() {
            return;
        }
        let c = chosen.count_ones();
        let best_size = best.count_ones();
        if best_size >= stop_at || c + allowed.count_ones() <= best_size {
            return;
        }
        if allowed == 0 {
            *best = chosen;
            return;
        }
        let i = allowed.trailing_zeros() as usize;
        let bit = 1u128 << i;
        if best_size > star {
            let (ch, al) = self.include(chosen, allowed, i);
            self.maximize(ch, al, best, star, stop_at);
            self.maximize(chosen, allowed & !bit, best, star, stop_at);
        } else {
            self.maximize(chosen, allowed & !bit, best, star, stop_at);
            let (ch, al) = self.include(chosen, allowed, i);
            self.maximize(ch, al, best, star, stop_at);
        }
    }

    /// First cluster-free family of size `target` under the order that
    /// compares families by their last differing candidate: candidates are
    /// decided from the last one down, excluding first.
    fn least_of_size(&mut self, chosen: u128, allowed: u128, target: u32) -> Option<u128> {
        if !self.tick() {
            return None;
        }
        let c = chosen.count_ones();
        if c + allowed.count_ones() < target {
            return None;
        }
        if c == target {
            return Some(chosen);
        }
        let i = 127 - allowed.leading_zeros() as usize;
        self.least_of_size(chosen, allowed & !(1u128 << i), target).or_else(|| {
            let (ch, al) = self.include(chosen, allowed, i);
            self.least_of_size(ch, al, target)
        })
    }

    /// Include-first walk over every cluster-free family of size `target`;
    /// `visit` returns `false` to stop.
    fn enumerate(
        &mut self,
        chosen: u128,
        allowed: u128,
        target: u32,
        visit: &mut impl FnMut(u128) -> bool,
    ) -> bool {
        if !self.tick() {
            return false;
        }
        let c = chosen.count_ones();
        if c + allowed.count_ones() < target {
            return true;
        }
        if c == target {
            return visit(chosen);
        }
        let i = allowed.trailing_zeros() as usize;
        let (ch, al) = self.include(chosen, allowed, i);
        self.enumerate(ch, al, target, visit) && self.enumerate(chosen, allowed & !(1u128 << i), target, visit)
    }
}

fn full_mask(len: usize) -> u128 {
    if len == 128 {
        u128::MAX
    } else {
        (1u128 << len) - 1
    }
}

/// Compute `f(d,k,s,n)` (or a greedy lower bound) for one instance.
pub fn solve(inst: &SolveInstance) -> Result<SolveResult> {
    inst.validate()?;
    let start = Instant::now();
    let total = binomial(inst.n, inst.k);
    if inst.mode == SolveMode::Greedy {
        let graph = Hypergraph::build(inst)?;
        let witness = greedy_on(&graph, inst, inst.seed, inst.restarts);
        return Ok(SolveResult {
            d: inst.d,
            k: inst.k,
            s: inst.s,
            n: inst.n,
            mode: inst.mode,
            value: witness.len() as u128,
            exact: false,
            star_size: inst.star_size(),
            star_is_max: false,
            witness,
            uniqueness: None,
            clusters: graph.edges.len() as u64,
            stats: SolveStats {
                nodes: 0,
                wall_ms: start.elapsed().as_millis() as u64,
            },
        });
    }
    if total > EXACT_MAX_SETS {
        return Err(Error::param(format!(
            "exact search needs C(n,k) <= {EXACT_MAX_SETS}, got C({},{}) = {total}",
            inst.n, inst.k
        )));
    }
    let graph = Hypergraph::build(inst)?;
    let len = graph.sets.len();
    let star = inst.star_size() as u32;
    let mut bnb = Bnb::new(&graph, &inst.budget, start);

    // Candidate order starts with the images of the sets containing 1, so
    // the first C(n-1,k-1) candidates always form a star.
    let star_mask = full_mask(star as usize);
    let mut best = star_mask;
    let stop_at = if inst.mode == SolveMode::VerifyStar {
        star + 1
    } else {
        u32::MAX
    };
    bnb.maximize(0, full_mask(len), &mut best, star, stop_at);
    if inst.mode == SolveMode::VerifyStar && best.count_ones() > star && !bnb.exhausted {
        bnb.maximize(0, full_mask(len), &mut best, star, u32::MAX);
    }
    let mut exact = !bnb.exhausted;
    let value = best.count_ones();

    // Canonical witness: among maxima, the one whose last differing
    // candidate is absent. The star of the first element is already least.
    if exact && value > star {
        if let Some(m) = bnb.least_of_size(0, full_mask(len), value) {
            best = m;
        }
    }

    let witness_family = graph.family(inst.n, inst.k, bits(best));
    let uniqueness = if !exact || !inst.check_uniqueness || total > UNIQUENESS_MAX_SETS {
        None
    } else if value > star {
        Some(Uniqueness {
            all_maxima_are_stars: false,
            maxima_examined: 1,
            counterexample: Some(member_lists(&witness_family)),
        })
    } else {
        let mut examined = 0u64;
        let mut bad = None;
        let sets = &graph.sets;
        let finished = bnb.enumerate(0, full_mask(len), value, &mut |m| {
            examined += 1;
            let common = bits(m).fold(u64::MAX, |acc, i| acc & sets[i].mask());
            if common == 0 {
                bad = Some(m);
                return false;
            }
            true
        });
        if !finished && bad.is_none() {
            exact = false;
            None
        } else {
            Some(Uniqueness {
                all_maxima_are_stars: bad.is_none(),
                maxima_examined: examined,
                counterexample: bad.map(|m| member_lists(&graph.family(inst.n, inst.k, bits(m)))),
            })
        }
    };

    Ok(SolveResult {
        d: inst.d,
        k: inst.k,
        s: inst.s,
        n: inst.n,
        mode: inst.mode,
        value: u128::from(value),
        exact,
        star_size: u128::from(star),
        star_is_max: exact && value == star,
        witness: witness_family,
        uniqueness,
        clusters: graph.edges.len() as u64,
        stats: SolveStats {
            nodes: bnb.nodes,
            wall_ms: start.elapsed().as_millis() as u64,
        },
    })
}

/// Outcome of [`verify_star_extremal`].
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct StarVerdict {
    pub star_extremal: bool,
    pub star_size: u128,
    /// Cluster-free family larger than the star, if one exists.
    pub counterexample: Option<Vec<Vec<u32>>>,
    pub uniqueness: Option<Uniqueness>,
    pub exact: bool,
}

/// Whether no cluster-free family beats the star, with all maxima checked
/// for being stars when `C(n,k) <= 40`.
pub fn verify_star_extremal(d: u32, k: u32, s: u32, n: u32) -> Result<StarVerdict> {
    let r = solve(&SolveInstance::new(d, k, s, n, SolveMode::VerifyStar))?;
    Ok(StarVerdict {
        star_extremal: r.star_is_max,
        star_size: r.star_size,
        counterexample: (r.exact && !r.star_is_max).then(|| member_lists(&r.witness)),
        uniqueness: r.uniqueness,
        exact: r.exact,
    })
}

fn greedy_on(graph: &Hypergraph, inst: &SolveInstance, seed: u64, restarts: u32) -> SetFamily {
    let len = graph.sets.len();
    let mut incident = vec![Vec::new(); len];
    for (id, e) in graph.edges.iter().enumerate() {
        for &i in e {
            incident[i].push(id);
        }
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut best: Vec<usize> = Vec::new();
    let mut order: Vec<usize> = (0..len).collect();
    for _ in 0..restarts.max(1) {
        order.shuffle(&mut rng);
        let mut chosen = vec![false; len];
        let mut picked = Vec::new();
        for &i in &order {
            let blocked = incident[i]
                .iter()
                .any(|&id| graph.edges[id].iter().all(|&j| j == i || chosen[j]));
            if !blocked {
                chosen[i] = true;
                picked.push(i);
            }
        }
        if picked.len() > best.len() {
            best = picked;
        }
    }
    graph.family(inst.n, inst.k, best.into_iter())
}

/// Best of `restarts` randomised greedy passes over `C([n],k)`.
pub fn greedy_lower_bound(d: u32, k: u32, s: u32, n: u32, seed: u64, restarts: u32) -> Result<SetFamily> {
    let inst = SolveInstance::new(d, k, s, n, SolveMode::Greedy);
    inst.validate()?;
    let graph = Hypergraph::build(&inst)?;
    Ok(greedy_on(&graph, &inst, seed, restarts))
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ScanRow {
    pub s: u32,
    pub value: u128,
    pub exact: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct MonotonicityScan {
    pub d: u32,
    pub k: u32,
    pub n: u32,
    pub rows: Vec<ScanRow>,
    pub non_increasing: bool,
    /// Every row with `s < ⌈(d+1)k/d⌉` has `f = C(n,k)`.
    pub full_below_threshold: bool,
    /// Largest `(d+1)`-wise intersecting family, i.e. `f(d,k,n,n)`.
    pub intersecting_max: Option<u128>,
    /// Every row with `s >= min((d+1)k, n)` equals `intersecting_max`.
    pub matches_intersecting_above: bool,
}

impl MonotonicityScan {
    pub fn holds(&self) -> bool {
        self.rows.iter().all(|r| r.exact)
            && self.non_increasing
            && self.full_below_threshold
            && self.matches_intersecting_above
    }
}

/// Exact `f(d,k,s,n)` for every `s` in `s_from..=s_to`.
pub fn f_monotonicity_scan(d: u32, k: u32, n: u32, s_from: u32, s_to: u32, budget: &Budget) -> Result<MonotonicityScan> {
    if s_from > s_to {
        return Err(Error::param(format!("empty s range {s_from}..={s_to}")));
    }
    let run = |s: u32| {
        let mut inst = SolveInstance::new(d, k, s, n, SolveMode::Exact);
        inst.budget = budget.clone();
        solve(&inst).map(|r| ScanRow {
            s,
            value: r.value,
            exact: r.exact,
        })
    };
    let rows: Vec<ScanRow> = (s_from..=s_to).map(run).collect::<Result<_>>()?;
    let threshold = crate::cluster::min_cluster_union(d, k);
    let total = binomial(n, k);
    let above = ((d + 1) * k).min(n);
    let intersecting_max = if rows.iter().any(|r| r.s >= above) {
        Some(match rows.iter().find(|r| r.s == n) {
            Some(r) => r.value,
            None => run(n)?.value,
        })
    } else {
        None
    };
    Ok(MonotonicityScan {
        d,
        k,
        n,
        non_increasing: rows.windows(2).all(|w| w[0].value >= w[1].value),
        full_below_threshold: rows.iter().filter(|r| r.s < threshold).all(|r| r.value == total),
        matches_intersecting_above: rows
            .iter()
            .filter(|r| r.s >= above)
            .all(|r| Some(r.value) == intersecting_max),
        intersecting_max,
        rows,
    })
}
