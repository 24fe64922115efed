//! 4-crowns among the extremal points and the bundles formed by improper ones.

use serde::Serialize;

use crate::pointset::PointSet;
use crate::poset::Poset;

/// A 4-crown `{a,b} ⊕ {v,w}` with `a < b` and `v < w` as ids.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct Crown4 {
    pub low: (usize, usize),
    pub high: (usize, usize),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum CrownKind {
    Proper,
    Improper,
}

impl Crown4 {
    /// Canonical crown on the given points, if they form one in `p`.
    pub fn new(p: &Poset, a: usize, b: usize, v: usize, w: usize) -> Option<Crown4> {
        let (a, b) = (a.min(b), a.max(b));
        let (v, w) = (v.min(w), v.max(w));
        let distinct = [a, b, v, w].iter().collect::<PointSet>().len() == 4;
        let complete = [a, b].iter().all(|&x| p.lt(x, v) && p.lt(x, w));
        let antichains = !p.comparable(a, b) && !p.comparable(v, w);
        (distinct && complete && antichains).then_some(Crown4 {
            low: (a, b),
            high: (v, w),
        })
    }

    pub fn points(&self) -> PointSet {
        [self.low.0, self.low.1, self.high.0, self.high.1]
            .into_iter()
            .collect()
    }

    pub fn lower(&self) -> PointSet {
        [self.low.0, self.low.1].into_iter().collect()
    }

    pub fn upper(&self) -> PointSet {
        [self.high.0, self.high.1].into_iter().collect()
    }

    /// The four edges `(a,v), (a,w), (b,v), (b,w)`.
    pub fn edges(&self) -> [(usize, usize); 4] {
        let (a, b) = self.low;
        let (v, w) = self.high;
        [(a, v), (a, w), (b, v), (b, w)]
    }
}

/// All 4-crowns with both minimal points in `L(P)` and both maximal points in `U(P)`.
pub fn enumerate_crowns_in_e(p: &Poset) -> Vec<Crown4> {
    let lower = p.lower().to_vec();
    let mut crowns = Vec::new();
    for (i, &a) in lower.iter().enumerate() {
        for &b in &lower[i + 1..] {
            let common = p
                .strict_above(a)
                .intersection(p.strict_above(b))
                .intersection(p.upper())
                .to_vec();
            for (j, &v) in common.iter().enumerate() {
                for &w in &common[j + 1..] {
                    crowns.push(Crown4 {
                        low: (a, b),
                        high: (v, w),
                    });
                }
            }
        }
    }
    crowns
}

/// `[a,v] ∩ [b,w]`; by symmetry equal to `[a,w] ∩ [b,v]`.
pub fn inner(p: &Poset, c: &Crown4) -> PointSet {
    let (a, b) = c.low;
    let (v, w) = c.high;
    p.interval(a, v).intersection(p.interval(b, w))
}

pub fn classify(p: &Poset, c: &Crown4) -> CrownKind {
    if inner(p, c).is_empty() {
        CrownKind::Proper
    } else {
        CrownKind::Improper
    }
}

/// Inner points, their shadows `Ξ(m)`, and the inclusion-maximal shadows (the bundles).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BundleFamily {
    pub inner_points: PointSet,
    /// `(m, Ξ(m))` for every inner point, ascending in `m`.
    pub xi: Vec<(usize, PointSet)>,
    /// Deduplicated maximal shadows, sorted by bit pattern.
    pub bundles: Vec<PointSet>,
}

impl BundleFamily {
    pub fn is_empty(&self) -> bool {
        self.bundles.is_empty()
    }

    pub fn len(&self) -> usize {
        self.bundles.len()
    }

    pub fn union(&self) -> PointSet {
        self.bundles
            .iter()
            .fold(PointSet::EMPTY, |acc, &b| acc.union(b))
    }

    /// Some bundle contains both points.
    pub fn covers_pair(&self, x: usize, y: usize) -> bool {
        self.bundles.iter().any(|b| b.contains(x) && b.contains(y))
    }
}

/// `Ξ(m) = (L(P) ∩ ↓m) ∪ (U(P) ∩ ↑m)`.
pub fn shadow(p: &Poset, m: usize) -> PointSet {
    p.lower()
        .intersection(p.down_set(m))
        .union(p.upper().intersection(p.up_set(m)))
}

/// Inner points are found through their shadows: `m` is inner to some improper
/// crown in `E(P)` iff at least two minimal points lie below it and two maximal
/// points above it.
pub fn bundle_family(p: &Poset) -> BundleFamily {
    let mut inner_points = PointSet::EMPTY;
    let mut xi = Vec::new();
    for m in p.middle().iter() {
        let lows = p.lower().intersection(p.strict_below(m));
        let highs = p.upper().intersection(p.strict_above(m));
        if lows.len() >= 2 && highs.len() >= 2 {
            inner_points.insert(m);
            xi.push((m, lows.union(highs)));
        }
    }
    let mut bundles: Vec<PointSet> = Vec::new();
    for &(_, s) in &xi {
        let dominated = xi.iter().any(|&(_, t)| s != t && s.is_subset(t));
        if !dominated && !bundles.contains(&s) {
            bundles.push(s);
        }
    }
    bundles.sort();
    BundleFamily {
        inner_points,
        xi,
        bundles,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;

    #[test]
    fn crowns_of_small_posets() {
        assert_eq!(enumerate_crowns_in_e(&fixtures::crown4()).len(), 1);
        assert!(enumerate_crowns_in_e(&Poset::chain(3)).is_empty());
        let p = fixtures::crown4_mid();
        let crowns = enumerate_crowns_in_e(&p);
        assert_eq!(crowns.len(), 1);
        assert_eq!(crowns[0].points(), PointSet::full(4));
        assert_eq!(Crown4::new(&p, 1, 0, 3, 2), Some(crowns[0]));
        assert_eq!(Crown4::new(&p, 0, 4, 2, 3), None);
    }

    #[test]
    fn inners() {
        let c = fixtures::crown4();
        let k = enumerate_crowns_in_e(&c)[0];
        assert!(inner(&c, &k).is_empty());
        assert_eq!(classify(&c, &k), CrownKind::Proper);

        let p = fixtures::crown4_mid();
        let k = enumerate_crowns_in_e(&p)[0];
        assert_eq!(inner(&p, &k), PointSet::singleton(4));
        assert_eq!(classify(&p, &k), CrownKind::Improper);
    }

    #[test]
    fn inner_with_two_midpoints_matches_brute_force() {
        // a=0 b=1 v=2 w=3 m1=4 m2=5, both midpoints between {a,b} and {v,w}
        let p = Poset::from_relation(
            6,
            &[
                (0, 4),
                (1, 4),
                (4, 2),
                (4, 3),
                (0, 5),
                (1, 5),
                (5, 2),
                (5, 3),
            ],
        )
        .unwrap();
        let k = enumerate_crowns_in_e(&p)[0];
        let brute: PointSet = (0..6)
            .filter(|&z| p.le(0, z) && p.le(z, 2) && p.le(1, z) && p.le(z, 3))
            .collect();
        assert_eq!(brute, [4, 5].iter().collect());
        assert_eq!(inner(&p, &k), brute);
    }

    #[test]
    fn bundles() {
        assert!(bundle_family(&fixtures::crown4()).is_empty());
        let bf = bundle_family(&fixtures::crown4_mid());
        assert_eq!(bf.bundles, vec![PointSet::full(4)]);
        assert_eq!(bf.inner_points, PointSet::singleton(4));
        let (p, _) = fixtures::two_bundle_fence();
        assert_eq!(bundle_family(&p).len(), 2);
    }

    #[test]
    fn nested_shadows_keep_only_maximal() {
        // m1 below four maximal points, m2 above m1 sees only two of them
        let p = Poset::from_relation(
            7,
            &[
                (0, 5),
                (1, 5),
                (5, 2),
                (5, 3),
                (5, 6),
                (6, 2),
                (6, 3),
                (5, 4),
            ],
        )
        .unwrap();
        let bf = bundle_family(&p);
        assert_eq!(bf.xi.len(), 2);
        assert_eq!(bf.bundles.len(), 1);
        assert_eq!(bf.bundles[0], [0, 1, 2, 3, 4].iter().collect());
    }
}
