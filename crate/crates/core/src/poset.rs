//! Finite posets on the point ids `0..n`.
//!
//! The strict order is stored transitively closed as one down-mask and one
//! up-mask per point, so every comparability query is a single bit test.

use std::collections::VecDeque;

use thiserror::Error;

use crate::pointset::{PointSet, MAX_POINTS};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PosetError {
    #[error("relation pair ({0},{0}) is a self-loop")]
    SelfLoop(usize),
    #[error("relation contains a cycle through points {0} and {1}")]
    Cycle(usize, usize),
    #[error("point id {id} out of range for a poset with {n} points")]
    PointOutOfRange { id: usize, n: usize },
    #[error("posets are limited to {MAX_POINTS} points, got {0}")]
    TooLarge(usize),
    #[error("poset needs at least two points")]
    TooSmall,
    #[error("point {0} is isolated")]
    IsolatedPoint(usize),
}

/// A finite strict partial order on `0..n`.
///
/// Equality compares the order relation only; labels are ignored.
#[derive(Debug, Clone)]
pub struct Poset {
    n: usize,
    below: Vec<PointSet>,
    above: Vec<PointSet>,
    labels: Vec<Option<String>>,
    levels: Levels,
}

/// Minimal, maximal, extremal and middle points of a poset.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Levels {
    pub lower: PointSet,
    pub upper: PointSet,
    pub extremal: PointSet,
    pub middle: PointSet,
}

impl PartialEq for Poset {
    fn eq(&self, other: &Self) -> bool {
        self.n == other.n && self.below == other.below
    }
}

impl Eq for Poset {}

/// An induced subposet together with the ids its points carry in the host.
#[derive(Debug, Clone)]
pub struct SubPoset {
    pub poset: Poset,
    /// `to_host[k]` is the host id of local point `k`; ascending.
    pub to_host: Vec<usize>,
}

impl SubPoset {
    pub fn from_host(&self, x: usize) -> Option<usize> {
        self.to_host.binary_search(&x).ok()
    }

    /// Host ids of a set of local points.
    pub fn lift(&self, s: PointSet) -> PointSet {
        s.map(|k| self.to_host[k])
    }
}

impl Poset {
    /// Builds the transitive closure of `pairs` on `n` points; pairs mean `x < y`.
    pub fn from_relation(n: usize, pairs: &[(usize, usize)]) -> Result<Self, PosetError> {
        if n > MAX_POINTS {
            return Err(PosetError::TooLarge(n));
        }
        let mut above = vec![PointSet::EMPTY; n];
        for &(x, y) in pairs {
            for id in [x, y] {
                if id >= n {
                    return Err(PosetError::PointOutOfRange { id, n });
                }
            }
            if x == y {
                return Err(PosetError::SelfLoop(x));
            }
            above[x].insert(y);
        }
        // Warshall closure on bit rows.
        for k in 0..n {
            let row_k = above[k];
            for row in above.iter_mut() {
                if row.contains(k) {
                    *row = row.union(row_k);
                }
            }
        }
        for (x, row) in above.iter().enumerate() {
            if row.contains(x) {
                let y = row
                    .iter()
                    .find(|&y| y != x && above[y].contains(x))
                    .unwrap_or(x);
                return Err(PosetError::Cycle(x.min(y), x.max(y)));
            }
        }
        Ok(Self::from_closed_rows(above))
    }

    /// The antichain on `n` points.
    pub fn antichain(n: usize) -> Self {
        Self::from_relation(n, &[]).expect("antichain is a poset")
    }

    /// The chain `0 < 1 < .. < n-1`.
    pub fn chain(n: usize) -> Self {
        let pairs: Vec<_> = (1..n).map(|k| (k - 1, k)).collect();
        Self::from_relation(n, &pairs).expect("chain is a poset")
    }

    /// Builds from already transitively closed up-rows; the caller guarantees
    /// the rows describe a strict order.
    pub(crate) fn from_closed_rows(above: Vec<PointSet>) -> Self {
        let n = above.len();
        let mut below = vec![PointSet::EMPTY; n];
        for (x, row) in above.iter().enumerate() {
            for y in row.iter() {
                below[y].insert(x);
            }
        }
        let levels = compute_levels(&below, &above);
        Poset {
            n,
            below,
            above,
            labels: vec![None; n],
            levels,
        }
    }

    pub fn with_labels(mut self, labels: Vec<Option<String>>) -> Self {
        assert_eq!(labels.len(), self.n);
        self.labels = labels;
        self
    }

    pub fn set_label(&mut self, x: usize, name: impl Into<String>) {
        self.labels[x] = Some(name.into());
    }

    pub fn len(&self) -> usize {
        self.n
    }

    pub fn is_empty(&self) -> bool {
        self.n == 0
    }

    pub fn carrier(&self) -> PointSet {
        PointSet::full(self.n)
    }

    pub fn label(&self, x: usize) -> Option<&str> {
        self.labels[x].as_deref()
    }

    pub fn labels(&self) -> &[Option<String>] {
        &self.labels
    }

    /// Display name of a point: its label, or its id.
    pub fn name(&self, x: usize) -> String {
        match &self.labels[x] {
            Some(s) => s.clone(),
            None => x.to_string(),
        }
    }

    /// Finds a point by label or, failing that, by numeric id.
    pub fn lookup(&self, name: &str) -> Option<usize> {
        self.labels
            .iter()
            .position(|l| l.as_deref() == Some(name))
            .or_else(|| name.parse::<usize>().ok().filter(|&x| x < self.n))
    }

    /// `x < y`.
    pub fn lt(&self, x: usize, y: usize) -> bool {
        self.above[x].contains(y)
    }

    /// `x <= y`.
    pub fn le(&self, x: usize, y: usize) -> bool {
        x == y || self.lt(x, y)
    }

    pub fn comparable(&self, x: usize, y: usize) -> bool {
        self.le(x, y) || self.lt(y, x)
    }

    /// Strictly smaller points.
    pub fn strict_below(&self, x: usize) -> PointSet {
        self.below[x]
    }

    /// Strictly larger points.
    pub fn strict_above(&self, x: usize) -> PointSet {
        self.above[x]
    }

    /// `{z : z <= x}`.
    pub fn down_set(&self, x: usize) -> PointSet {
        self.below[x].with(x)
    }

    /// `{z : x <= z}`.
    pub fn up_set(&self, x: usize) -> PointSet {
        self.above[x].with(x)
    }

    /// `[x, y] = up_set(x) ∩ down_set(y)`.
    pub fn interval(&self, x: usize, y: usize) -> PointSet {
        self.up_set(x).intersection(self.down_set(y))
    }

    pub fn levels(&self) -> Levels {
        self.levels
    }

    pub fn lower(&self) -> PointSet {
        self.levels.lower
    }

    pub fn upper(&self) -> PointSet {
        self.levels.upper
    }

    pub fn extremal(&self) -> PointSet {
        self.levels.extremal
    }

    pub fn middle(&self) -> PointSet {
        self.levels.middle
    }

    /// All pairs `x < y`, ordered by `x` then `y`.
    pub fn edges(&self) -> Vec<(usize, usize)> {
        (0..self.n)
            .flat_map(|x| self.above[x].iter().map(move |y| (x, y)))
            .collect()
    }

    pub fn edge_count(&self) -> usize {
        self.above.iter().map(|r| r.len()).sum()
    }

    /// Covering pairs (the Hasse diagram).
    pub fn covers(&self) -> Vec<(usize, usize)> {
        self.edges()
            .into_iter()
            .filter(|&(x, y)| self.above[x].intersection(self.below[y]).is_empty())
            .collect()
    }

    pub fn is_isolated(&self, x: usize) -> bool {
        self.below[x].is_empty() && self.above[x].is_empty()
    }

    /// Length of the longest chain minus one.
    pub fn height(&self) -> usize {
        let mut depth = vec![0usize; self.n];
        for x in self.linear_extension() {
            depth[x] = self.below[x]
                .iter()
                .map(|y| depth[y] + 1)
                .max()
                .unwrap_or(0);
        }
        depth.into_iter().max().unwrap_or(0)
    }

    /// Points ordered so that every point comes after all points below it.
    pub fn linear_extension(&self) -> Vec<usize> {
        let mut order: Vec<usize> = (0..self.n).collect();
        order.sort_by_key(|&x| (self.below[x].len(), x));
        order
    }

    /// Connectedness of the comparability graph. The empty poset counts as connected.
    pub fn is_connected(&self) -> bool {
        if self.n == 0 {
            return true;
        }
        let mut seen = PointSet::singleton(0);
        let mut queue = VecDeque::from([0usize]);
        while let Some(x) = queue.pop_front() {
            let next = self.below[x].union(self.above[x]).difference(seen);
            for y in next.iter() {
                seen.insert(y);
                queue.push_back(y);
            }
        }
        seen.len() == self.n
    }

    /// The standing assumptions on an ambient poset: at least two points, none isolated.
    pub fn validate_ambient(&self) -> Result<(), PosetError> {
        if self.n < 2 {
            return Err(PosetError::TooSmall);
        }
        match (0..self.n).find(|&x| self.is_isolated(x)) {
            Some(x) => Err(PosetError::IsolatedPoint(x)),
            None => Ok(()),
        }
    }

    /// The induced subposet on `y`, with points renumbered in ascending host order.
    pub fn induced(&self, y: PointSet) -> SubPoset {
        let y = y.intersection(self.carrier());
        let to_host = y.to_vec();
        let mut local = [usize::MAX; MAX_POINTS];
        for (k, &x) in to_host.iter().enumerate() {
            local[x] = k;
        }
        let rows = to_host
            .iter()
            .map(|&x| self.above[x].intersection(y).map(|z| local[z]))
            .collect();
        let labels = to_host.iter().map(|&x| self.labels[x].clone()).collect();
        SubPoset {
            poset: Poset::from_closed_rows(rows).with_labels(labels),
            to_host,
        }
    }

    /// Disjoint union `P + Q`; the points of `q` are shifted by `p.len()`.
    pub fn direct_sum(p: &Poset, q: &Poset) -> Result<Poset, PosetError> {
        Self::sum(p, q, false)
    }

    /// Ordinal sum `P ⊕ Q`: every point of `p` below every point of `q`.
    pub fn ordinal_sum(p: &Poset, q: &Poset) -> Result<Poset, PosetError> {
        Self::sum(p, q, true)
    }

    fn sum(p: &Poset, q: &Poset, stack: bool) -> Result<Poset, PosetError> {
        let n = p.n + q.n;
        if n > MAX_POINTS {
            return Err(PosetError::TooLarge(n));
        }
        let shift = |s: PointSet| PointSet::from_bits(s.bits() << p.n);
        let q_all = shift(q.carrier());
        let mut rows: Vec<PointSet> = p
            .above
            .iter()
            .map(|&r| if stack { r.union(q_all) } else { r })
            .collect();
        rows.extend(q.above.iter().map(|&r| shift(r)));
        let labels = p.labels.iter().chain(q.labels.iter()).cloned().collect();
        Ok(Poset::from_closed_rows(rows).with_labels(labels))
    }

    /// `A_m ⊕ A_n`: `m` minimal points `0..m` below `n` maximal points `m..m+n`.
    pub fn complete_bipartite(m: usize, n: usize) -> Poset {
        Self::ordinal_sum(&Self::antichain(m), &Self::antichain(n)).expect("small ordinal sum")
    }

    /// Raw up-rows (strict), indexed by point.
    pub fn up_rows(&self) -> &[PointSet] {
        &self.above
    }
}

fn compute_levels(below: &[PointSet], above: &[PointSet]) -> Levels {
    let mut lower = PointSet::EMPTY;
    let mut upper = PointSet::EMPTY;
    for x in 0..below.len() {
        if below[x].is_empty() {
            lower.insert(x);
        }
        if above[x].is_empty() {
            upper.insert(x);
        }
    }
    let extremal = lower.union(upper);
    Levels {
        lower,
        upper,
        extremal,
        middle: PointSet::full(below.len()).difference(extremal),
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ShapeError {
    #[error("poset is not of height one")]
    NotHeightOne,
    #[error("poset is not connected")]
    NotConnected,
    #[error("poset needs at least one minimal and one maximal point")]
    Degenerate,
}

/// A connected poset of height one, with its two levels listed in ascending order.
#[derive(Debug, Clone)]
pub struct HeightOne {
    poset: Poset,
    lower: Vec<usize>,
    upper: Vec<usize>,
}

impl HeightOne {
    pub fn new(poset: Poset) -> Result<Self, ShapeError> {
        if poset.len() < 2 {
            return Err(ShapeError::Degenerate);
        }
        if !poset.is_connected() {
            return Err(ShapeError::NotConnected);
        }
        if !poset.middle().is_empty() {
            return Err(ShapeError::NotHeightOne);
        }
        let lower = poset.lower().to_vec();
        let upper = poset.upper().to_vec();
        Ok(HeightOne {
            poset,
            lower,
            upper,
        })
    }

    pub fn poset(&self) -> &Poset {
        &self.poset
    }

    pub fn lower(&self) -> &[usize] {
        &self.lower
    }

    pub fn upper(&self) -> &[usize] {
        &self.upper
    }

    pub fn lower_set(&self) -> PointSet {
        self.poset.lower()
    }

    pub fn upper_set(&self) -> PointSet {
        self.poset.upper()
    }

    pub fn len(&self) -> usize {
        self.poset.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn is_lower(&self, z: usize) -> bool {
        self.poset.lower().contains(z)
    }

    /// Every minimal point below every maximal point.
    pub fn is_ordinal_sum(&self) -> bool {
        self.lower
            .iter()
            .all(|&a| self.upper_set().is_subset(self.poset.strict_above(a)))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn crown4() -> Poset {
        Poset::from_relation(4, &[(0, 2), (0, 3), (1, 2), (1, 3)]).unwrap()
    }

    // a=0, b=1, v=2, w=3, m=4
    fn crown4_mid() -> Poset {
        Poset::from_relation(5, &[(0, 4), (1, 4), (4, 2), (4, 3)]).unwrap()
    }

    fn set(xs: &[usize]) -> PointSet {
        xs.iter().collect()
    }

    #[test]
    fn chain_closure() {
        let p = Poset::from_relation(3, &[(0, 1), (1, 2)]).unwrap();
        assert_eq!(p.edges(), vec![(0, 1), (0, 2), (1, 2)]);
        assert_eq!(p.covers(), vec![(0, 1), (1, 2)]);
        assert_eq!(p.height(), 2);
    }

    #[test]
    fn empty_relation_is_antichain() {
        let p = Poset::from_relation(3, &[]).unwrap();
        assert_eq!(p.edge_count(), 0);
        assert_eq!(p, Poset::antichain(3));
    }

    #[test]
    fn rejects_cycles_and_loops() {
        assert_eq!(
            Poset::from_relation(2, &[(0, 1), (1, 0)]),
            Err(PosetError::Cycle(0, 1))
        );
        assert_eq!(
            Poset::from_relation(3, &[(0, 1), (1, 2), (2, 0)]).unwrap_err(),
            PosetError::Cycle(0, 1)
        );
        assert_eq!(
            Poset::from_relation(2, &[(1, 1)]),
            Err(PosetError::SelfLoop(1))
        );
        assert_eq!(
            Poset::from_relation(2, &[(0, 2)]),
            Err(PosetError::PointOutOfRange { id: 2, n: 2 })
        );
    }

    #[test]
    fn levels_of_small_posets() {
        let chain = Poset::chain(3);
        assert_eq!(chain.lower(), set(&[0]));
        assert_eq!(chain.upper(), set(&[2]));
        assert_eq!(chain.middle(), set(&[1]));

        let anti = Poset::antichain(2);
        assert_eq!(anti.lower(), set(&[0, 1]));
        assert_eq!(anti.upper(), set(&[0, 1]));
        assert_eq!(anti.extremal(), set(&[0, 1]));
        assert!(anti.middle().is_empty());

        let c = crown4();
        assert_eq!(c.lower(), set(&[0, 1]));
        assert_eq!(c.upper(), set(&[2, 3]));
        assert!(c.middle().is_empty());
    }

    #[test]
    fn intervals() {
        let chain = Poset::chain(3);
        assert_eq!(chain.interval(0, 2), set(&[0, 1, 2]));
        assert_eq!(crown4().interval(0, 2), set(&[0, 2]));
        assert_eq!(crown4_mid().interval(0, 2), set(&[0, 4, 2]));
        assert!(chain.interval(2, 0).is_empty());
    }

    #[test]
    fn induced_subposets() {
        let chain = Poset::chain(3);
        let sub = chain.induced(set(&[0, 2]));
        assert_eq!(sub.poset, Poset::chain(2));
        assert_eq!(sub.to_host, vec![0, 2]);
        assert_eq!(sub.from_host(2), Some(1));
        assert_eq!(sub.from_host(1), None);

        let p = crown4_mid();
        assert_eq!(p.induced(p.carrier()).poset, p);
        assert_eq!(p.induced(set(&[0, 1, 2, 3])).poset, crown4());
    }

    #[test]
    fn sums() {
        let a2 = Poset::antichain(2);
        assert_eq!(Poset::ordinal_sum(&a2, &a2).unwrap(), crown4());
        let one = Poset::antichain(1);
        assert_eq!(Poset::direct_sum(&one, &one).unwrap(), Poset::antichain(2));
        let v = Poset::ordinal_sum(&one, &a2).unwrap();
        assert_eq!(v.edges(), vec![(0, 1), (0, 2)]);
    }

    #[test]
    fn ambient_validation() {
        assert_eq!(Poset::chain(2).validate_ambient(), Ok(()));
        assert_eq!(
            Poset::antichain(2).validate_ambient(),
            Err(PosetError::IsolatedPoint(0))
        );
        assert_eq!(crown4().validate_ambient(), Ok(()));
        assert_eq!(
            Poset::chain(1).validate_ambient(),
            Err(PosetError::TooSmall)
        );
    }

    #[test]
    fn height_one_shape() {
        let c = HeightOne::new(crown4()).unwrap();
        assert!(c.is_ordinal_sum());
        assert_eq!(c.lower(), &[0, 1]);
        assert_eq!(
            HeightOne::new(Poset::chain(3)).unwrap_err(),
            ShapeError::NotHeightOne
        );
        let two_edges = Poset::from_relation(4, &[(0, 1), (2, 3)]).unwrap();
        assert_eq!(
            HeightOne::new(two_edges).unwrap_err(),
            ShapeError::NotConnected
        );
        let fence = Poset::from_relation(4, &[(0, 2), (0, 3), (1, 3)]).unwrap();
        assert!(!HeightOne::new(fence).unwrap().is_ordinal_sum());
    }

    #[test]
    fn lookup_by_label_or_id() {
        let mut p = Poset::chain(2);
        p.set_label(1, "top");
        assert_eq!(p.lookup("top"), Some(1));
        assert_eq!(p.lookup("0"), Some(0));
        assert_eq!(p.lookup("7"), None);
        assert_eq!(p.name(0), "0");
    }
}
