//! Brute-force ground truth: direct searches for retractions and surjective
//! homomorphisms, exhaustive labeled-poset enumeration, and seeded random
//! instances.

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use crate::pointset::{subsets, PointSet};
use crate::poset::Poset;
use crate::retract::{OrderMap, RetractionWitness};

/// Environment variable overriding [`DEFAULT_BUDGET`].
pub const BUDGET_ENV: &str = "RETRACT_ORACLE_BUDGET";

/// Default search budget in bits: `free points × log2(targets)`.
pub const DEFAULT_BUDGET: f64 = 48.0;

#[derive(Debug, Clone, Copy, PartialEq, Error)]
#[error("search space of {bits:.1} bits exceeds the budget of {budget:.1} bits")]
pub struct SizeGuard {
    pub bits: f64,
    pub budget: f64,
}

/// The budget from [`BUDGET_ENV`], or the default.
pub fn budget() -> f64 {
    std::env::var(BUDGET_ENV)
        .ok()
        .and_then(|s| s.parse().ok())
        .unwrap_or(DEFAULT_BUDGET)
}

fn guard(free: usize, targets: usize, budget: f64) -> Result<(), SizeGuard> {
    let bits = free as f64 * (targets.max(1) as f64).log2();
    if bits > budget {
        Err(SizeGuard { bits, budget })
    } else {
        Ok(())
    }
}

/// Assigns the points of `order` to `targets` one by one, keeping the map
/// order-preserving against every point already assigned.
struct MapSearch<'a> {
    p: &'a Poset,
    order: Vec<usize>,
    targets: Vec<usize>,
}

impl MapSearch<'_> {
    fn run(&self, map: &mut [Option<usize>]) -> bool {
        self.step(0, map)
    }

    fn step(&self, k: usize, map: &mut [Option<usize>]) -> bool {
        let Some(&x) = self.order.get(k) else {
            return true;
        };
        for &t in &self.targets {
            let fits = self
                .p
                .strict_below(x)
                .iter()
                .all(|y| map[y].is_none_or(|s| self.p.le(s, t)))
                && self
                    .p
                    .strict_above(x)
                    .iter()
                    .all(|y| map[y].is_none_or(|s| self.p.le(t, s)));
            if fits {
                map[x] = Some(t);
                if self.step(k + 1, map) {
                    return true;
                }
                map[x] = None;
            }
        }
        false
    }
}

/// A retraction of `p` onto `z`, found by direct search, or `None`.
pub fn oracle_retraction_exists(
    p: &Poset,
    z: PointSet,
) -> Result<Option<RetractionWitness>, SizeGuard> {
    oracle_retraction_with_budget(p, z, budget())
}

pub fn oracle_retraction_with_budget(
    p: &Poset,
    z: PointSet,
    budget: f64,
) -> Result<Option<RetractionWitness>, SizeGuard> {
    let z = z.intersection(p.carrier());
    let free: Vec<usize> = p
        .linear_extension()
        .into_iter()
        .filter(|&x| !z.contains(x))
        .collect();
    guard(free.len(), z.len(), budget)?;
    if z.is_empty() {
        return Ok(None);
    }
    let mut map: Vec<Option<usize>> = (0..p.len()).map(|x| z.contains(x).then_some(x)).collect();
    let search = MapSearch {
        p,
        order: free,
        targets: z.to_vec(),
    };
    if !search.run(&mut map) {
        return Ok(None);
    }
    Ok(Some(RetractionWitness {
        map: map.into_iter().map(|y| y.expect("assigned")).collect(),
        image: z,
    }))
}

/// An order-preserving map of `p` onto `c`, or `None`.
pub fn oracle_surjective_hom_exists(p: &Poset, c: &Poset) -> Result<Option<OrderMap>, SizeGuard> {
    oracle_surjection_with_budget(p, c, budget())
}

pub fn oracle_surjection_with_budget(
    p: &Poset,
    c: &Poset,
    budget: f64,
) -> Result<Option<OrderMap>, SizeGuard> {
    guard(p.len(), c.len(), budget)?;
    if c.len() > p.len() {
        return Ok(None);
    }
    let search = SurjectionSearch {
        p,
        c,
        order: p.linear_extension(),
    };
    let mut local = vec![None; p.len()];
    if !search.step(0, &mut local) {
        return Ok(None);
    }
    Ok(Some(OrderMap::new(
        local.into_iter().map(|y| y.expect("assigned")).collect(),
    )))
}

struct SurjectionSearch<'a> {
    p: &'a Poset,
    c: &'a Poset,
    order: Vec<usize>,
}

impl SurjectionSearch<'_> {
    fn step(&self, k: usize, map: &mut [Option<usize>]) -> bool {
        let hit: PointSet = map.iter().flatten().collect();
        if self.c.len() - hit.len() > self.order.len() - k {
            return false;
        }
        let Some(&x) = self.order.get(k) else {
            return true;
        };
        for t in 0..self.c.len() {
            let fits = self
                .p
                .strict_below(x)
                .iter()
                .all(|y| map[y].is_none_or(|s| self.c.le(s, t)))
                && self
                    .p
                    .strict_above(x)
                    .iter()
                    .all(|y| map[y].is_none_or(|s| self.c.le(t, s)));
            if fits {
                map[x] = Some(t);
                if self.step(k + 1, map) {
                    return true;
                }
                map[x] = None;
            }
        }
        false
    }
}

/// Direct definition check, independent of [`RetractionWitness::verify`].
pub fn is_retraction(p: &Poset, z: PointSet, map: &[usize]) -> bool {
    let n = p.len();
    map.len() == n
        && map.iter().all(|&y| y < n && z.contains(y))
        && z.iter().all(|x| map[x] == x)
        && (0..n).all(|x| (0..n).all(|y| !p.lt(x, y) || p.le(map[x], map[y])))
}

/// Calls `visit` once for every labeled poset on `0..n`.
///
/// Posets on `0..k` are extended by a new point `k` with a down-closed set
/// `D` below it and an up-closed set `U` above it, disjoint and with
/// every point of `D` below every point of `U`. Each labeled poset arises
/// from exactly one such chain of extensions.
pub fn visit_posets(n: usize, mut visit: impl FnMut(&Poset)) {
    let mut rows = Vec::with_capacity(n);
    extend(n, &mut rows, &mut visit);
}

fn extend(n: usize, rows: &mut Vec<PointSet>, visit: &mut impl FnMut(&Poset)) {
    let k = rows.len();
    if k == n {
        visit(&Poset::from_closed_rows(rows.clone()));
        return;
    }
    let mut below_of = vec![PointSet::EMPTY; k];
    for (x, row) in rows.iter().enumerate() {
        for y in row.iter() {
            below_of[y].insert(x);
        }
    }
    let all = PointSet::full(k);
    let down_closed = |d: PointSet| d.iter().all(|x| below_of[x].is_subset(d));
    let up_closed = |u: PointSet| u.iter().all(|x| rows[x].is_subset(u));
    let mut choices = Vec::new();
    for d in subsets(all).filter(|&d| down_closed(d)) {
        // U must lie above every point of D.
        let room = d
            .iter()
            .fold(all.difference(d), |acc, x| acc.intersection(rows[x]));
        choices.extend(subsets(room).filter(|&u| up_closed(u)).map(|u| (d, u)));
    }
    for (d, u) in choices {
        {
            let saved = rows.clone();
            for x in d.iter() {
                rows[x].insert(k);
            }
            rows.push(u);
            extend(n, rows, visit);
            *rows = saved;
        }
    }
}

pub fn enumerate_posets(n: usize) -> Vec<Poset> {
    let mut out = Vec::new();
    visit_posets(n, |p| out.push(p.clone()));
    out
}

/// Every transitive irreflexive relation on `0..n`, by testing all subsets of
/// the off-diagonal pairs. Exponential in `n²`; meant for cross-checking.
pub fn enumerate_posets_naive(n: usize) -> Vec<Poset> {
    let pairs: Vec<(usize, usize)> = (0..n)
        .flat_map(|x| (0..n).filter(move |&y| y != x).map(move |y| (x, y)))
        .collect();
    let mut out = Vec::new();
    for mask in 0u64..(1u64 << pairs.len()) {
        let rel = |x: usize, y: usize| {
            x != y && {
                let i = pairs.iter().position(|&q| q == (x, y)).expect("pair");
                mask >> i & 1 == 1
            }
        };
        let asymmetric = pairs.iter().all(|&(x, y)| !(rel(x, y) && rel(y, x)));
        let transitive =
            (0..n).all(|x| (0..n).all(|y| (0..n).all(|z| !(rel(x, y) && rel(y, z)) || rel(x, z))));
        if asymmetric && transitive {
            let rows = (0..n)
                .map(|x| (0..n).filter(|&y| rel(x, y)).collect())
                .collect();
            out.push(Poset::from_closed_rows(rows));
        }
    }
    out
}

/// Calls `visit` once for every labeled poset of height one on `0..n` without
/// isolated points.
pub fn visit_height_one(n: usize, mut visit: impl FnMut(&Poset)) {
    let all = PointSet::full(n);
    for lower in subsets(all) {
        let upper = all.difference(lower);
        if lower.is_empty() || upper.is_empty() {
            continue;
        }
        let lows = lower.to_vec();
        let mut rows = vec![PointSet::EMPTY; n];
        choose_rows(&lows, 0, upper, &mut rows, &mut visit);
    }
}

fn choose_rows(
    lows: &[usize],
    k: usize,
    upper: PointSet,
    rows: &mut Vec<PointSet>,
    visit: &mut impl FnMut(&Poset),
) {
    if k == lows.len() {
        let covered = rows.iter().fold(PointSet::EMPTY, |acc, &r| acc.union(r));
        if covered == upper {
            visit(&Poset::from_closed_rows(rows.clone()));
        }
        return;
    }
    for row in subsets(upper).filter(|r| !r.is_empty()) {
        rows[lows[k]] = row;
        choose_rows(lows, k + 1, upper, rows, visit);
    }
    rows[lows[k]] = PointSet::EMPTY;
}

/// The closure of a random acyclic relation: points are shuffled and each
/// pair is kept, oriented along the shuffle, with probability `density`.
/// Samples with isolated points are redrawn (up to a fixed number of times).
pub fn random_poset(seed: u64, n: usize, density: f64) -> Poset {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    random_poset_from(&mut rng, n, density)
}

fn random_poset_from(rng: &mut ChaCha8Rng, n: usize, density: f64) -> Poset {
    let density = density.clamp(0.0, 1.0);
    let mut last = Poset::antichain(n);
    for _ in 0..1000 {
        let mut perm: Vec<usize> = (0..n).collect();
        perm.shuffle(rng);
        let mut pairs = Vec::new();
        for i in 0..n {
            for j in i + 1..n {
                if rng.gen_bool(density) {
                    pairs.push((perm[i], perm[j]));
                }
            }
        }
        last = Poset::from_relation(n, &pairs).expect("acyclic by construction");
        if n < 2 || last.validate_ambient().is_ok() {
            break;
        }
    }
    last
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum GeneratorMode {
    /// Every labeled poset for each size in range.
    Exhaustive,
    /// `count` seeded random posets; sizes uniform in range.
    Random { count: usize, density: f64 },
}

/// A reproducible stream of test posets.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct InstanceGenerator {
    pub seed: u64,
    pub min_points: usize,
    pub max_points: usize,
    pub mode: GeneratorMode,
}

impl InstanceGenerator {
    pub fn exhaustive(min_points: usize, max_points: usize) -> Self {
        InstanceGenerator {
            seed: 0,
            min_points,
            max_points,
            mode: GeneratorMode::Exhaustive,
        }
    }

    pub fn random(
        seed: u64,
        min_points: usize,
        max_points: usize,
        count: usize,
        density: f64,
    ) -> Self {
        InstanceGenerator {
            seed,
            min_points,
            max_points,
            mode: GeneratorMode::Random { count, density },
        }
    }

    pub fn for_each(&self, mut visit: impl FnMut(&Poset)) {
        match self.mode {
            GeneratorMode::Exhaustive => {
                for n in self.min_points..=self.max_points {
                    visit_posets(n, &mut visit);
                }
            }
            GeneratorMode::Random { count, density } => {
                let mut rng = ChaCha8Rng::seed_from_u64(self.seed);
                for _ in 0..count {
                    let n = rng.gen_range(self.min_points..=self.max_points);
                    let d = if density > 0.0 {
                        density
                    } else {
                        rng.gen_range(0.2..0.7)
                    };
                    visit(&random_poset_from(&mut rng, n, d));
                }
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;

    fn set(xs: &[usize]) -> PointSet {
        xs.iter().collect()
    }

    #[test]
    fn labeled_poset_counts() {
        let counts: Vec<usize> = (0..=5)
            .map(|n| {
                let mut k = 0;
                visit_posets(n, |_| k += 1);
                k
            })
            .collect();
        assert_eq!(counts, vec![1, 1, 3, 19, 219, 4231]);
    }

    #[test]
    fn naive_enumeration_agrees() {
        for n in 0..=4 {
            let mut fast = enumerate_posets(n);
            let mut naive = enumerate_posets_naive(n);
            let key = |p: &Poset| p.up_rows().iter().map(|r| r.bits()).collect::<Vec<_>>();
            fast.sort_by_key(key);
            naive.sort_by_key(key);
            assert_eq!(fast, naive, "n = {n}");
        }
    }

    #[test]
    fn height_one_counts() {
        // labeled bipartite posets without isolated points
        let count = |n| {
            let mut k = 0;
            visit_height_one(n, |p| {
                assert!(p.middle().is_empty() && p.validate_ambient().is_ok());
                k += 1;
            });
            k
        };
        assert_eq!(count(2), 2);
        assert_eq!(count(3), 6);
        let mut brute = 0;
        visit_posets(4, |p| {
            if p.height() == 1 && p.validate_ambient().is_ok() {
                brute += 1;
            }
        });
        assert_eq!(count(4), brute);
    }

    #[test]
    fn retraction_oracle_examples() {
        let c = fixtures::crown4();
        let id = oracle_retraction_exists(&c, c.carrier()).unwrap().unwrap();
        assert_eq!(id.map, vec![0, 1, 2, 3]);
        let p = fixtures::crown4_mid();
        assert_eq!(
            oracle_retraction_exists(&p, set(&[0, 1, 2, 3])).unwrap(),
            None
        );
        let t = fixtures::crown4_with_top();
        let r = oracle_retraction_exists(&t, set(&[0, 1, 2, 3])).unwrap();
        // t sits above both v and w, which are incomparable in the crown
        assert_eq!(r, None);
    }

    #[test]
    fn fence_is_a_retract() {
        let (p, z) = fixtures::two_bundle_fence();
        let r = oracle_retraction_exists(&p, z).unwrap().unwrap();
        assert!(is_retraction(&p, z, &r.map));
        // frozen: m1 goes up to v, m2 down to b
        assert_eq!(r.map, vec![0, 1, 2, 1, 4, 5, 6, 4, 4, 1]);
    }

    #[test]
    fn surjection_oracle_examples() {
        let chain = Poset::chain(2);
        let f = oracle_surjective_hom_exists(&fixtures::crown4(), &chain)
            .unwrap()
            .unwrap();
        assert!(f.is_order_preserving(&fixtures::crown4(), &chain));
        assert!(f.is_surjective_onto(&chain));
        let c = fixtures::crown4();
        let p = fixtures::crown4_mid();
        assert_eq!(oracle_surjective_hom_exists(&p, &c).unwrap(), None);
        assert_eq!(
            oracle_surjective_hom_exists(&Poset::chain(2), &c).unwrap(),
            None
        );
    }

    #[test]
    fn oracle_witnesses_verify() {
        for p in enumerate_posets(4) {
            for z in subsets(p.carrier()).filter(|z| !z.is_empty()) {
                if let Some(r) = oracle_retraction_exists(&p, z).unwrap() {
                    assert!(is_retraction(&p, z, &r.map));
                    r.verify(&p).unwrap();
                }
            }
        }
    }

    #[test]
    fn retractions_compose() {
        // chain 0<1<2<3 onto {0,1,3} onto {0,3}
        let p = Poset::chain(4);
        let q = set(&[0, 1, 3]);
        let c = set(&[0, 3]);
        let r1 = oracle_retraction_exists(&p, q).unwrap().unwrap();
        let r2 = oracle_retraction_exists(&p, c).unwrap().unwrap();
        let composed: Vec<usize> = r1.map.iter().map(|&y| r2.map[y]).collect();
        assert!(is_retraction(&p, c, &composed));
    }

    #[test]
    fn size_guard_trips() {
        let p = Poset::chain(12);
        let err = oracle_retraction_with_budget(&p, set(&[0, 11]), 4.0).unwrap_err();
        assert!(err.bits > err.budget);
    }

    #[test]
    fn random_posets_are_deterministic() {
        assert_eq!(random_poset(7, 8, 0.4), random_poset(7, 8, 0.4));
        let p = random_poset(3, 9, 0.5);
        assert!(p.validate_ambient().is_ok());
        let g = InstanceGenerator::random(11, 4, 7, 20, 0.0);
        let mut a = Vec::new();
        let mut b = Vec::new();
        g.for_each(|p| a.push(p.clone()));
        g.for_each(|p| b.push(p.clone()));
        assert_eq!(a, b);
    }
}
