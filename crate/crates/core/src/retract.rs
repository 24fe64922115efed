//! From separating homomorphisms to explicit maps: strictification,
//! extension from the extremal points, the surjection built from a witness,
//! the retract decision for ordinal sums, and the clique criteria.

use thiserror::Error;

use crate::crown::{classify, enumerate_crowns_in_e, Crown4, CrownKind};
use crate::pointset::PointSet;
use crate::poset::{HeightOne, Poset, SubPoset};
use crate::search::{
    self, check_witness, find_z_separating_in, pattern_in, BundleGraph, SearchError, SearchTarget,
    SeparatingWitness, Violation,
};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum RetractError {
    #[error(transparent)]
    Search(#[from] SearchError),
    #[error("pattern is not an ordinal sum of two antichains (missing edge {0} < {1})")]
    NotOrdinalSum(usize, usize),
    #[error("pattern is not a 4-crown")]
    NotACrown,
    #[error("map is not surjective")]
    NotSurjective,
    #[error("witness rejected: {0}")]
    Witness(#[from] Violation),
    #[error("precondition violated: {0}")]
    Precondition(String),
    #[error("internal check failed: {0}")]
    Internal(String),
}

/// A total map between the carriers of two posets.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OrderMap {
    pub map: Vec<usize>,
}

impl OrderMap {
    pub fn new(map: Vec<usize>) -> Self {
        OrderMap { map }
    }

    pub fn apply(&self, x: usize) -> usize {
        self.map[x]
    }

    pub fn image(&self) -> PointSet {
        self.map.iter().collect()
    }

    /// `x < y` in `source` implies `f(x) <= f(y)` in `target`.
    pub fn is_order_preserving(&self, source: &Poset, target: &Poset) -> bool {
        self.map.len() == source.len()
            && self.map.iter().all(|&y| y < target.len())
            && source
                .edges()
                .into_iter()
                .all(|(x, y)| target.le(self.map[x], self.map[y]))
    }

    pub fn is_surjective_onto(&self, target: &Poset) -> bool {
        self.image() == target.carrier()
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum WitnessError {
    #[error("map has {got} entries for {want} points")]
    Arity { got: usize, want: usize },
    #[error("map is not order-preserving on {0} < {1}")]
    NotOrderPreserving(usize, usize),
    #[error("point {0} of the retract is not fixed")]
    NotFixed(usize),
    #[error("map is not idempotent at {0}")]
    NotIdempotent(usize),
    #[error("image differs from the retract")]
    WrongImage,
}

/// An idempotent order-preserving self-map of `P` with image `image`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RetractionWitness {
    pub map: Vec<usize>,
    pub image: PointSet,
}

impl RetractionWitness {
    pub fn verify(&self, p: &Poset) -> Result<(), WitnessError> {
        if self.map.len() != p.len() || self.map.iter().any(|&y| y >= p.len()) {
            return Err(WitnessError::Arity {
                got: self.map.len(),
                want: p.len(),
            });
        }
        for (x, y) in p.edges() {
            if !p.le(self.map[x], self.map[y]) {
                return Err(WitnessError::NotOrderPreserving(x, y));
            }
        }
        for z in self.image.iter() {
            if self.map[z] != z {
                return Err(WitnessError::NotFixed(z));
            }
        }
        for x in 0..p.len() {
            if self.map[self.map[x]] != self.map[x] {
                return Err(WitnessError::NotIdempotent(x));
            }
        }
        if self.map.iter().collect::<PointSet>() != self.image {
            return Err(WitnessError::WrongImage);
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Decision {
    Retract(RetractionWitness),
    NotRetract,
}

impl Decision {
    pub fn is_retract(&self) -> bool {
        matches!(self, Decision::Retract(_))
    }
}

/// Images of the minimal points below and the maximal points above each point.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AlphaBeta {
    pub alpha: Vec<PointSet>,
    pub beta: Vec<PointSet>,
}

/// `α(x) = f[L(P) ∩ ↓x]`, `β(x) = f[U(P) ∩ ↑x]` for a map defined on `E(P)`.
pub fn alpha_beta(p: &Poset, f: &[Option<usize>]) -> AlphaBeta {
    let image = |s: PointSet| -> PointSet { s.iter().filter_map(|y| f[y]).collect() };
    let alpha = (0..p.len())
        .map(|x| image(p.lower().intersection(p.down_set(x))))
        .collect();
    let beta = (0..p.len())
        .map(|x| image(p.upper().intersection(p.up_set(x))))
        .collect();
    AlphaBeta { alpha, beta }
}

/// Rewrites a surjective homomorphism so that minimal points go to minimal
/// points and maximal to maximal, leaving midpoints untouched. A minimal
/// point whose image is not minimal moves to the smallest-id minimal point
/// below its image; dually for maximal points.
pub fn strictify(p: &Poset, q: &Poset, f: &OrderMap) -> Result<OrderMap, RetractError> {
    if !f.is_surjective_onto(q) {
        return Err(RetractError::NotSurjective);
    }
    let below = |y: usize| q.lower().intersection(q.down_set(y)).first();
    let above = |y: usize| q.upper().intersection(q.up_set(y)).first();
    let map = (0..p.len())
        .map(|x| {
            let y = f.apply(x);
            if p.lower().contains(x) && !q.lower().contains(y) {
                below(y).expect("finite posets have a minimal point below every point")
            } else if p.upper().contains(x) && !q.upper().contains(y) {
                above(y).expect("finite posets have a maximal point above every point")
            } else {
                y
            }
        })
        .collect();
    Ok(OrderMap::new(map))
}

/// Strictification of a retraction onto its image, again a retraction.
pub fn strictify_retraction(
    p: &Poset,
    r: &RetractionWitness,
) -> Result<RetractionWitness, RetractError> {
    let sub = p.induced(r.image);
    let local = r
        .map
        .iter()
        .map(|&y| sub.from_host(y).ok_or(RetractError::NotSurjective))
        .collect::<Result<Vec<_>, _>>()?;
    let g = strictify(p, &sub.poset, &OrderMap::new(local))?;
    Ok(RetractionWitness {
        map: g.map.iter().map(|&k| sub.to_host[k]).collect(),
        image: r.image,
    })
}

/// Extends a homomorphism `f : E(P) → Q` (Q of height one) to all of `P`.
///
/// A midpoint with at least two minimal images below goes to the single
/// maximal image above it; otherwise it goes to its single minimal image
/// below. Returns `None` when some midpoint sees two distinct minimal and two
/// distinct maximal images, which rules out every extension.
///
/// Panics if `f` is undefined on an extremal point or not order-preserving
/// on `E(P)`.
pub fn extend_from_extremals(p: &Poset, q: &Poset, f: &[Option<usize>]) -> Option<OrderMap> {
    assert_eq!(f.len(), p.len(), "map must have one slot per point");
    for x in p.extremal().iter() {
        assert!(
            f[x].is_some_and(|y| y < q.len()),
            "map undefined on extremal point {x}"
        );
    }
    for (x, y) in p.edges() {
        if let (Some(fx), Some(fy)) = (f[x], f[y]) {
            if p.extremal().contains(x) && p.extremal().contains(y) {
                assert!(q.le(fx, fy), "map is not order-preserving on {x} < {y}");
            }
        }
    }
    let ab = alpha_beta(p, f);
    let mut map = vec![0; p.len()];
    for x in 0..p.len() {
        map[x] = match f[x] {
            Some(y) if p.extremal().contains(x) => y,
            _ => {
                let (alpha, beta) = (ab.alpha[x], ab.beta[x]);
                if alpha.len() >= 2 && beta.len() >= 2 {
                    return None;
                }
                if alpha.len() >= 2 {
                    beta.first()?
                } else {
                    alpha.first()?
                }
            }
        };
    }
    let g = OrderMap::new(map);
    assert!(
        g.is_order_preserving(p, q),
        "extension rule produced a non-homomorphism"
    );
    Some(g)
}

/// `Ok` iff no improper 4-crown in `E(P)` meets two distinct fibres over
/// minimal points and two distinct fibres over maximal points; otherwise
/// returns the first such crown.
pub fn check_extension_condition(p: &Poset, f: &[Option<usize>]) -> Result<(), Crown4> {
    for crown in enumerate_crowns_in_e(p) {
        if classify(p, &crown) != CrownKind::Improper {
            continue;
        }
        let (a, b) = crown.low;
        let (v, w) = crown.high;
        if f[a] != f[b] && f[v] != f[w] {
            return Err(crown);
        }
    }
    Ok(())
}

/// Builds a surjective homomorphism `P → C` from a separating witness.
///
/// `lower_core × U(C)` and `L(C) × upper_core` must be edges of `C`; every
/// apex used by the witness must lie in these sets; and `i⁻¹` must be
/// order-preserving on `i[Z]`. Minimal points touched by a bundle whose image
/// lies in `∨(a)` go to `a`, each `i(a)` goes to `a`, and all remaining
/// minimal points go to the smallest id of `lower_core`; dually for maximal
/// points. The result is then extended to the midpoints.
pub fn surjection_from_witness(
    p: &Poset,
    c: &HeightOne,
    w: &SeparatingWitness,
    lower_core: PointSet,
    upper_core: PointSet,
) -> Result<OrderMap, RetractError> {
    let cp = c.poset();
    let pre = |msg: &str| Err(RetractError::Precondition(msg.to_string()));
    if lower_core.is_empty() || upper_core.is_empty() {
        return pre("core sets must be nonempty");
    }
    if !lower_core.is_subset(c.lower_set()) || !upper_core.is_subset(c.upper_set()) {
        return pre("core sets must lie in the levels of the pattern");
    }
    for a in lower_core.iter() {
        if !c.upper_set().is_subset(cp.strict_above(a)) {
            return pre("lower core point not below every maximal point");
        }
    }
    for v in upper_core.iter() {
        if !c.lower_set().is_subset(cp.strict_below(v)) {
            return pre("upper core point not above every minimal point");
        }
    }
    let carrier = w.z_separating.then(|| w.injection.iter().collect());
    check_witness(p, c, w, carrier)?;
    let inj = &w.injection;
    for x in 0..c.len() {
        for y in 0..c.len() {
            if p.lt(inj[x], inj[y]) && !cp.lt(x, y) {
                return pre("inverse of the injection is not order-preserving");
            }
        }
    }
    let bundles = BundleGraph::new(p);
    let bundles = bundles.bundles();

    let mut fibre: Vec<Option<usize>> = vec![None; p.len()];
    let claim = |x: usize, z: usize, fibre: &mut Vec<Option<usize>>| -> Result<(), RetractError> {
        match fibre[x] {
            Some(prev) if prev != z => Err(RetractError::Internal(format!(
                "point {x} claimed by pattern points {prev} and {z}"
            ))),
            _ => {
                fibre[x] = Some(z);
                Ok(())
            }
        }
    };
    for (f, s) in w.phi.iter().enumerate() {
        if let Some(a) = s.vee_apex() {
            if !lower_core.contains(a) {
                return pre("witness uses a lower apex outside the lower core");
            }
            for x in bundles[f].intersection(p.lower()).iter() {
                claim(x, a, &mut fibre)?;
            }
        }
        if let Some(v) = s.wedge_apex() {
            if !upper_core.contains(v) {
                return pre("witness uses an upper apex outside the upper core");
            }
            for x in bundles[f].intersection(p.upper()).iter() {
                claim(x, v, &mut fibre)?;
            }
        }
    }
    for (z, &x) in inj.iter().enumerate() {
        claim(x, z, &mut fibre)?;
    }
    let ell = lower_core.first().expect("nonempty");
    let top = upper_core.first().expect("nonempty");
    for x in p.lower().iter() {
        fibre[x].get_or_insert(ell);
    }
    for x in p.upper().iter() {
        fibre[x].get_or_insert(top);
    }
    for x in p.middle().iter() {
        fibre[x] = None;
    }
    if let Err(crown) = check_extension_condition(p, &fibre) {
        return Err(RetractError::Internal(format!(
            "constructed map violates the extension condition at {crown:?}"
        )));
    }
    let g = extend_from_extremals(p, cp, &fibre)
        .ok_or_else(|| RetractError::Internal("constructed map does not extend".into()))?;
    if !g.is_surjective_onto(cp) {
        return Err(RetractError::Internal(
            "constructed map is not surjective".into(),
        ));
    }
    Ok(g)
}

/// Requires `C = P|_Z` to be `L(C) ⊕ U(C)`.
fn ordinal_pattern(p: &Poset, z: PointSet) -> Result<(SubPoset, HeightOne), RetractError> {
    let (sub, c) = pattern_in(p, z)?;
    for &a in c.lower() {
        for &v in c.upper() {
            if !c.poset().lt(a, v) {
                return Err(RetractError::NotOrdinalSum(sub.to_host[a], sub.to_host[v]));
            }
        }
    }
    Ok((sub, c))
}

/// Decides whether `Z ⊆ E(P)`, inducing an ordinal sum of two antichains, is
/// a retract of `P`, returning a verified retraction when it is.
pub fn decide_retract(p: &Poset, z: PointSet) -> Result<Decision, RetractError> {
    let (sub, c) = ordinal_pattern(p, z)?;
    let bundles = BundleGraph::new(p);
    let Some(w) = find_z_separating_in(&bundles, &sub, &c, SearchTarget::CMax) else {
        return Ok(Decision::NotRetract);
    };
    let retraction = retraction_from_witness(p, &c, &w, z)?;
    Ok(Decision::Retract(retraction))
}

/// Composes the surjection of [`surjection_from_witness`] (with the full
/// levels as cores) with the injection of a `Z`-separating witness.
pub fn retraction_from_witness(
    p: &Poset,
    c: &HeightOne,
    w: &SeparatingWitness,
    z: PointSet,
) -> Result<RetractionWitness, RetractError> {
    check_witness(p, c, w, Some(z))?;
    let g = surjection_from_witness(p, c, w, c.lower_set(), c.upper_set())?;
    let map = g.map.iter().map(|&k| w.injection[k]).collect();
    let r = RetractionWitness { map, image: z };
    r.verify(p)
        .map_err(|e| RetractError::Internal(format!("retraction failed verification: {e}")))?;
    Ok(r)
}

/// `P|_Y` with `Y` the union of all bundles, all inner points, and `Z`.
pub fn reduce_to_core(p: &Poset, z: PointSet) -> Result<SubPoset, RetractError> {
    ordinal_pattern(p, z)?;
    let bundles = BundleGraph::new(p);
    let y = bundles
        .family
        .union()
        .union(bundles.family.inner_points)
        .union(z);
    Ok(p.induced(y))
}

/// The subposet of `C = P|_Z` keeping the edges covered by some bundle, on
/// the local ids of `C`.
pub fn crown_edge_poset(p: &Poset, z: PointSet) -> Result<SubPoset, RetractError> {
    let (sub, _) = pattern_in(p, z)?;
    let bundles = BundleGraph::new(p);
    let pairs: Vec<(usize, usize)> = sub
        .poset
        .edges()
        .into_iter()
        .filter(|&(a, v)| bundles.family.covers_pair(sub.to_host[a], sub.to_host[v]))
        .collect();
    let poset = Poset::from_relation(sub.poset.len(), &pairs)
        .expect("subrelation of a height-one order")
        .with_labels(sub.poset.labels().to_vec());
    Ok(SubPoset {
        poset,
        to_host: sub.to_host,
    })
}

/// On the carrier of `c`: edges `L(C) × {v}` and `{a} × U(C)`.
pub fn n_poset(c: &HeightOne, a: usize, v: usize) -> Poset {
    let mut pairs: Vec<(usize, usize)> = c.lower().iter().map(|&x| (x, v)).collect();
    pairs.extend(c.upper().iter().filter(|&&y| y != v).map(|&y| (a, y)));
    Poset::from_relation(c.len(), &pairs)
        .expect("height-one relation")
        .with_labels(c.poset().labels().to_vec())
}

/// First `(a, v)` (host ids, ascending) whose `N_{a,v}` contains every
/// bundle-covered edge of `C`.
pub fn clique_criterion(p: &Poset, z: PointSet) -> Result<Option<(usize, usize)>, RetractError> {
    let (sub, c) = pattern_in(p, z)?;
    let covered = crown_edge_poset(p, z)?.poset.edges();
    for &a in c.lower() {
        for &v in c.upper() {
            let n = n_poset(&c, a, v);
            if covered.iter().all(|&(x, y)| n.lt(x, y)) {
                return Ok(Some((sub.to_host[a], sub.to_host[v])));
            }
        }
    }
    Ok(None)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CrownVerdict {
    Retract,
    NotRetract,
    /// Some pair of distinct bundles lacks an L-edge or a U-edge.
    NotApplicable,
}

/// For a 4-crown `Z` and a bundle graph in which every pair of bundles shares
/// a minimal and a maximal point: `Z` is a retract iff some crown edge lies
/// in no bundle.
pub fn corollary2_check(p: &Poset, z: PointSet) -> Result<CrownVerdict, RetractError> {
    let (sub, c) = ordinal_pattern(p, z)?;
    if c.lower().len() != 2 || c.upper().len() != 2 {
        return Err(RetractError::NotACrown);
    }
    let bundles = BundleGraph::new(p);
    if !bundles.graph.is_complete() {
        return Ok(CrownVerdict::NotApplicable);
    }
    let uncovered = sub
        .poset
        .edges()
        .into_iter()
        .any(|(a, v)| !bundles.family.covers_pair(sub.to_host[a], sub.to_host[v]));
    Ok(if uncovered {
        CrownVerdict::Retract
    } else {
        CrownVerdict::NotRetract
    })
}

/// Separating witness with clique image, decided by the restricted search.
pub fn clique_witness(p: &Poset, z: PointSet) -> Result<Option<SeparatingWitness>, RetractError> {
    let (sub, c) = pattern_in(p, z)?;
    Ok(search::find_clique_z_separating(
        &BundleGraph::new(p),
        &sub,
        &c,
    ))
}
