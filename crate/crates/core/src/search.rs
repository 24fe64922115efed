//! Search for separating homomorphisms from the bundle graph `F(P)` into
//! `C(C)` or `C_max(C)`.
//!
//! The injection `i : Z → E(P)` is enumerated in the outer loop; for each
//! `i` the bundle images are found by backtracking with forward checking.
//! The separation requirement is a unary constraint once `i` is fixed: a
//! bundle holding `i(a)` may only go to a lower-kind vertex of `∨(a)` (and
//! dually), so it becomes the initial domain filter.

use thiserror::Error;

use crate::crown::{bundle_family, BundleFamily};
use crate::multigraph::{
    build_c_graph, build_c_max, build_f_graph, CVertex, Color, TwoColorMultigraph,
};
use crate::pointset::PointSet;
use crate::poset::{HeightOne, Poset, PosetError, ShapeError, SubPoset};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum SearchTarget {
    CGraph,
    #[default]
    CMax,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct SeparatingOptions {
    /// Require `i⁻¹ : E(P)|_{i[Z]} → C` to be order-preserving.
    pub inverse_order_preserving: bool,
}

/// A separating homomorphism: one image per bundle (in [`BundleFamily`]
/// order) and the injection belonging to it, from ids of `C` to ids of `P`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SeparatingWitness {
    pub phi: Vec<CVertex>,
    pub injection: Vec<usize>,
    pub z_separating: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SearchError {
    #[error(transparent)]
    Ambient(#[from] PosetError),
    #[error("pattern: {0}")]
    Shape(#[from] ShapeError),
    #[error("points {0:?} are not extremal points of the ambient poset")]
    NotExtremal(PointSet),
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Violation {
    #[error("injection has {got} entries, pattern has {want} points")]
    InjectionArity { got: usize, want: usize },
    #[error("injection maps {0} and {1} to the same point")]
    NotInjective(usize, usize),
    #[error("pattern point {z} is mapped to {image}, which is on the wrong level")]
    LevelViolation { z: usize, image: usize },
    #[error("witness has {got} bundle images, there are {want} bundles")]
    PhiArity { got: usize, want: usize },
    #[error("image of bundle {0} is not a vertex of C(C)")]
    NotAVertex(usize),
    #[error("bundles {0} and {1} share a {2:?}-point but their images do not")]
    MissingEdge(usize, usize, Color),
    #[error("bundle {bundle} contains i({z}) but its image is outside the family of {z}")]
    Separation { bundle: usize, z: usize },
    #[error("injection does not permute the carrier Z")]
    NotZSeparating,
}

/// Precomputed bundle side of a search.
#[derive(Debug, Clone)]
pub struct BundleGraph {
    pub family: BundleFamily,
    pub graph: TwoColorMultigraph,
}

impl BundleGraph {
    pub fn new(p: &Poset) -> Self {
        let family = bundle_family(p);
        let graph = build_f_graph(p, &family);
        BundleGraph { family, graph }
    }

    pub fn bundles(&self) -> &[PointSet] {
        &self.family.bundles
    }
}

fn target_vertices(c: &HeightOne, target: SearchTarget) -> (TwoColorMultigraph, Vec<CVertex>) {
    let g = match target {
        SearchTarget::CGraph => build_c_graph(c),
        SearchTarget::CMax => build_c_max(c),
    };
    let vs = g
        .vertices()
        .iter()
        .map(|v| *v.as_cvertex().expect("C vertex"))
        .collect();
    (g, vs)
}

/// The separation requirement for one bundle and one candidate image.
fn separates(c: &HeightOne, bundle: PointSet, image: &CVertex, injection: &[usize]) -> bool {
    if let Some(apex) = image.vee_apex() {
        if c.lower()
            .iter()
            .any(|&a| a != apex && bundle.contains(injection[a]))
        {
            return false;
        }
    }
    if let Some(apex) = image.wedge_apex() {
        if c.upper()
            .iter()
            .any(|&v| v != apex && bundle.contains(injection[v]))
        {
            return false;
        }
    }
    true
}

struct PhiSearch<'a> {
    c: &'a HeightOne,
    bundles: &'a BundleGraph,
    target: &'a TwoColorMultigraph,
    images: &'a [CVertex],
}

impl PhiSearch<'_> {
    /// First assignment of target indices to bundles, if any.
    fn solve(&self, injection: &[usize]) -> Option<Vec<usize>> {
        let bundles = self.bundles.bundles();
        let image_set: PointSet = injection.iter().collect();
        let mut order: Vec<usize> = (0..bundles.len()).collect();
        order.sort_by_key(|&f| {
            (
                std::cmp::Reverse(bundles[f].intersection(image_set).len()),
                f,
            )
        });

        let domains: Vec<Vec<usize>> = order
            .iter()
            .map(|&f| {
                (0..self.images.len())
                    .filter(|&t| separates(self.c, bundles[f], &self.images[t], injection))
                    .collect()
            })
            .collect();
        if domains.iter().any(Vec::is_empty) {
            return None;
        }
        let mut chosen = vec![usize::MAX; order.len()];
        if self.assign(0, &order, domains, &mut chosen) {
            let mut phi = vec![0; bundles.len()];
            for (k, &f) in order.iter().enumerate() {
                phi[f] = chosen[k];
            }
            Some(phi)
        } else {
            None
        }
    }

    fn compatible(&self, f: usize, g: usize, s: usize, t: usize) -> bool {
        let fg = &self.bundles.graph;
        [Color::L, Color::U]
            .into_iter()
            .all(|color| !fg.has_edge(color, f, g) || self.target.has_edge(color, s, t))
    }

    fn assign(
        &self,
        k: usize,
        order: &[usize],
        domains: Vec<Vec<usize>>,
        chosen: &mut [usize],
    ) -> bool {
        if k == order.len() {
            return true;
        }
        let f = order[k];
        for &s in &domains[k] {
            let mut next = domains.clone();
            let mut wiped = false;
            for j in k + 1..order.len() {
                next[j].retain(|&t| self.compatible(f, order[j], s, t));
                if next[j].is_empty() {
                    wiped = true;
                    break;
                }
            }
            if wiped {
                continue;
            }
            chosen[k] = s;
            if self.assign(k + 1, order, next, chosen) {
                return true;
            }
        }
        false
    }
}

/// All permutations of `items`, lexicographic in positions, identity first.
pub(crate) fn permutations(items: &[usize]) -> Vec<Vec<usize>> {
    arrangements(items, items.len())
}

/// All ordered selections of `k` distinct elements of `items`, lexicographic.
pub(crate) fn arrangements(items: &[usize], k: usize) -> Vec<Vec<usize>> {
    fn go(
        items: &[usize],
        k: usize,
        used: &mut Vec<bool>,
        cur: &mut Vec<usize>,
        out: &mut Vec<Vec<usize>>,
    ) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for i in 0..items.len() {
            if !used[i] {
                used[i] = true;
                cur.push(items[i]);
                go(items, k, used, cur, out);
                cur.pop();
                used[i] = false;
            }
        }
    }
    let mut out = Vec::new();
    if k <= items.len() {
        go(
            items,
            k,
            &mut vec![false; items.len()],
            &mut Vec::new(),
            &mut out,
        );
    }
    out
}

/// Level-preserving bijections of `C` onto itself, as maps `C id → C id`.
fn level_bijections(c: &HeightOne) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    for low in permutations(c.lower()) {
        for high in permutations(c.upper()) {
            let mut sigma = vec![0; c.len()];
            for (&a, &img) in c.lower().iter().zip(&low) {
                sigma[a] = img;
            }
            for (&v, &img) in c.upper().iter().zip(&high) {
                sigma[v] = img;
            }
            out.push(sigma);
        }
    }
    out
}

/// Level-preserving injections `C → E(P)`, as maps `C id → P id`.
fn level_injections(p: &Poset, c: &HeightOne) -> Vec<Vec<usize>> {
    let lows = arrangements(&p.lower().to_vec(), c.lower().len());
    let highs = arrangements(&p.upper().to_vec(), c.upper().len());
    let mut out = Vec::new();
    for low in &lows {
        for high in &highs {
            let mut inj = vec![0; c.len()];
            for (&a, &img) in c.lower().iter().zip(low) {
                inj[a] = img;
            }
            for (&v, &img) in c.upper().iter().zip(high) {
                inj[v] = img;
            }
            out.push(inj);
        }
    }
    out
}

fn inverse_is_order_preserving(p: &Poset, c: &HeightOne, inj: &[usize]) -> bool {
    let cp = c.poset();
    (0..cp.len()).all(|x| (0..cp.len()).all(|y| !p.lt(inj[x], inj[y]) || cp.lt(x, y)))
}

/// The pattern `C = P|_Z` for a carrier `Z ⊆ E(P)`.
pub fn pattern_in(p: &Poset, z: PointSet) -> Result<(SubPoset, HeightOne), SearchError> {
    p.validate_ambient()?;
    let outside = z.difference(p.extremal());
    if !outside.is_empty() || !z.is_subset(p.carrier()) {
        return Err(SearchError::NotExtremal(outside));
    }
    let sub = p.induced(z);
    let c = HeightOne::new(sub.poset.clone())?;
    Ok((sub, c))
}

fn search_with(
    c: &HeightOne,
    bundles: &BundleGraph,
    target: SearchTarget,
    injections: impl IntoIterator<Item = Vec<usize>>,
    z_separating: bool,
) -> Option<SeparatingWitness> {
    let (graph, images) = target_vertices(c, target);
    let search = PhiSearch {
        c,
        bundles,
        target: &graph,
        images: &images,
    };
    injections.into_iter().find_map(|inj| {
        search.solve(&inj).map(|phi| SeparatingWitness {
            phi: phi.into_iter().map(|t| images[t]).collect(),
            injection: inj,
            z_separating,
        })
    })
}

/// A `Z`-separating homomorphism for `C = P|_Z`, or `None`.
pub fn find_z_separating(
    p: &Poset,
    z: PointSet,
    target: SearchTarget,
) -> Result<Option<SeparatingWitness>, SearchError> {
    let (sub, c) = pattern_in(p, z)?;
    Ok(find_z_separating_in(&BundleGraph::new(p), &sub, &c, target))
}

pub fn find_z_separating_in(
    bundles: &BundleGraph,
    sub: &SubPoset,
    c: &HeightOne,
    target: SearchTarget,
) -> Option<SeparatingWitness> {
    let injections = level_bijections(c).into_iter().map(|sigma| {
        sigma
            .into_iter()
            .map(|k| sub.to_host[k])
            .collect::<Vec<_>>()
    });
    search_with(c, bundles, target, injections, true)
}

/// A separating homomorphism for an abstract pattern `c`, or `None`.
pub fn find_separating(
    p: &Poset,
    c: &HeightOne,
    target: SearchTarget,
    options: SeparatingOptions,
) -> Result<Option<SeparatingWitness>, SearchError> {
    p.validate_ambient()?;
    Ok(find_separating_in(
        p,
        &BundleGraph::new(p),
        c,
        target,
        options,
    ))
}

pub fn find_separating_in(
    p: &Poset,
    bundles: &BundleGraph,
    c: &HeightOne,
    target: SearchTarget,
    options: SeparatingOptions,
) -> Option<SeparatingWitness> {
    let injections = level_injections(p, c)
        .into_iter()
        .filter(|inj| !options.inverse_order_preserving || inverse_is_order_preserving(p, c, inj));
    search_with(c, bundles, target, injections, false)
}

/// A `Z`-separating homomorphism into `C(C)` whose image is a clique (empty
/// image allowed when there are no bundles), or `None`.
pub fn find_clique_z_separating(
    bundles: &BundleGraph,
    sub: &SubPoset,
    c: &HeightOne,
) -> Option<SeparatingWitness> {
    let (graph, images) = target_vertices(c, SearchTarget::CGraph);
    let cliques = graph.maximal_cliques();
    for sigma in level_bijections(c) {
        let inj: Vec<usize> = sigma.into_iter().map(|k| sub.to_host[k]).collect();
        for clique in &cliques {
            let phi: Option<Vec<CVertex>> = bundles
                .bundles()
                .iter()
                .map(|&f| {
                    clique
                        .iter()
                        .map(|&t| images[t])
                        .find(|s| separates(c, f, s, &inj))
                })
                .collect();
            if let Some(phi) = phi {
                return Some(SeparatingWitness {
                    phi,
                    injection: inj,
                    z_separating: true,
                });
            }
        }
    }
    None
}

/// Checks every defining property of a separating witness. `carrier` is the
/// set `Z` inside `P`, required when the witness claims to be `Z`-separating.
pub fn check_witness(
    p: &Poset,
    c: &HeightOne,
    w: &SeparatingWitness,
    carrier: Option<PointSet>,
) -> Result<(), Violation> {
    let inj = &w.injection;
    if inj.len() != c.len() {
        return Err(Violation::InjectionArity {
            got: inj.len(),
            want: c.len(),
        });
    }
    for x in 0..inj.len() {
        for y in x + 1..inj.len() {
            if inj[x] == inj[y] {
                return Err(Violation::NotInjective(x, y));
            }
        }
    }
    for (z, &image) in inj.iter().enumerate() {
        let level = if c.is_lower(z) { p.lower() } else { p.upper() };
        if !level.contains(image) {
            return Err(Violation::LevelViolation { z, image });
        }
    }
    let fg = BundleGraph::new(p);
    let bundles = fg.bundles();
    if w.phi.len() != bundles.len() {
        return Err(Violation::PhiArity {
            got: w.phi.len(),
            want: bundles.len(),
        });
    }
    for (f, s) in w.phi.iter().enumerate() {
        if CVertex::classify(c, s.set) != Some(*s) {
            return Err(Violation::NotAVertex(f));
        }
    }
    for f in 0..bundles.len() {
        for g in f..bundles.len() {
            let common = w.phi[f].set.intersection(w.phi[g].set);
            for (color, level) in [(Color::L, c.lower_set()), (Color::U, c.upper_set())] {
                if fg.graph.has_edge(color, f, g) && common.is_disjoint(level) {
                    return Err(Violation::MissingEdge(f, g, color));
                }
            }
        }
    }
    for (f, &bundle) in bundles.iter().enumerate() {
        let s = &w.phi[f];
        for (z, &image) in inj.iter().enumerate() {
            if !bundle.contains(image) {
                continue;
            }
            let ok = if c.is_lower(z) {
                s.vee_apex().is_none_or(|a| a == z)
            } else {
                s.wedge_apex().is_none_or(|v| v == z)
            };
            if !ok {
                return Err(Violation::Separation { bundle: f, z });
            }
        }
    }
    if w.z_separating {
        let image: PointSet = inj.iter().collect();
        match carrier {
            Some(zset) if image == zset && zset.is_subset(p.extremal()) => {}
            _ => return Err(Violation::NotZSeparating),
        }
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;
    use crate::multigraph::{theta, Side};

    fn set(xs: &[usize]) -> PointSet {
        xs.iter().collect()
    }

    #[test]
    fn arrangements_count() {
        assert_eq!(arrangements(&[1, 2, 3], 2).len(), 6);
        assert_eq!(permutations(&[4, 7])[0], vec![4, 7]);
        assert!(arrangements(&[1], 2).is_empty());
        assert_eq!(arrangements(&[], 0), vec![Vec::<usize>::new()]);
    }

    #[test]
    fn height_one_host_gives_trivial_witness() {
        let p = fixtures::crown4();
        let w = find_z_separating(&p, p.carrier(), SearchTarget::CMax)
            .unwrap()
            .unwrap();
        assert!(w.phi.is_empty());
        assert_eq!(w.injection, vec![0, 1, 2, 3]);
        let (_, c) = pattern_in(&p, p.carrier()).unwrap();
        assert_eq!(check_witness(&p, &c, &w, Some(p.carrier())), Ok(()));
    }

    /// Exhaustive over the four bijections and eight `C(C)` vertices.
    #[test]
    fn improper_crown_has_no_witness() {
        let p = fixtures::crown4_mid();
        let z = set(&[0, 1, 2, 3]);
        let (sub, c) = pattern_in(&p, z).unwrap();
        let bundle = bundle_family(&p).bundles[0];
        let mut accepted = 0;
        for sigma in level_bijections(&c) {
            let inj: Vec<usize> = sigma.iter().map(|&k| sub.to_host[k]).collect();
            for s in crate::multigraph::c_vertices(&c) {
                if separates(&c, bundle, &s, &inj) {
                    accepted += 1;
                }
            }
        }
        assert_eq!(accepted, 0);
        for target in [SearchTarget::CGraph, SearchTarget::CMax] {
            assert_eq!(find_z_separating(&p, z, target).unwrap(), None);
        }
    }

    #[test]
    fn rejects_non_extremal_carrier() {
        let p = fixtures::crown4_mid();
        assert_eq!(
            find_z_separating(&p, set(&[0, 1, 2, 4]), SearchTarget::CMax),
            Err(SearchError::NotExtremal(set(&[4])))
        );
    }

    #[test]
    fn fence_witness_from_clique_images() {
        let (p, z) = fixtures::two_bundle_fence();
        let (sub, c) = pattern_in(&p, z).unwrap();
        let local = |x: usize| sub.from_host(x).unwrap();
        let (a, b, v, w) = (local(0), local(1), local(4), local(5));
        let bf = bundle_family(&p);
        // bundles sorted by bit pattern: G = {b,q,w,u} comes before F = {a,c,v,p}
        assert_eq!(bf.bundles, vec![set(&[1, 3, 5, 6]), set(&[0, 2, 4, 7])]);
        let wedge_w = CVertex::classify(&c, c.poset().down_set(w)).unwrap();
        let vee_a = CVertex::classify(&c, c.poset().up_set(a)).unwrap();
        assert_eq!(wedge_w.side, Side::Wedge(w));
        assert_eq!(vee_a.side, Side::Vee(a));
        let mut inj = sub.to_host.clone();
        inj.swap(a, b);
        inj.swap(v, w);
        let witness = SeparatingWitness {
            phi: vec![vee_a, wedge_w],
            injection: inj.clone(),
            z_separating: true,
        };
        assert_eq!(check_witness(&p, &c, &witness, Some(z)), Ok(()));

        // with the identity injection the same images break separation
        let bad = SeparatingWitness {
            injection: sub.to_host.clone(),
            ..witness
        };
        assert!(matches!(
            check_witness(&p, &c, &bad, Some(z)),
            Err(Violation::Separation { .. })
        ));
        assert!(find_z_separating(&p, z, SearchTarget::CMax)
            .unwrap()
            .is_some());
        assert!(find_clique_z_separating(&BundleGraph::new(&p), &sub, &c).is_some());
    }

    #[test]
    fn check_witness_violations() {
        let p = fixtures::crown4_mid();
        let chain = HeightOne::new(Poset::chain(2)).unwrap();
        // crown4_mid: one bundle {a,b,v,w}. Pattern a<v mapped to a<v.
        let tip = CVertex::classify(&chain, set(&[0, 1])).unwrap();
        let ok = SeparatingWitness {
            phi: vec![tip],
            injection: vec![0, 2],
            z_separating: false,
        };
        assert_eq!(check_witness(&p, &chain, &ok, None), Ok(()));
        let wrong_level = SeparatingWitness {
            injection: vec![2, 0],
            ..ok.clone()
        };
        assert!(matches!(
            check_witness(&p, &chain, &wrong_level, None),
            Err(Violation::LevelViolation { .. })
        ));
        let no_images = SeparatingWitness {
            phi: vec![],
            ..ok.clone()
        };
        assert!(matches!(
            check_witness(&p, &chain, &no_images, None),
            Err(Violation::PhiArity { .. })
        ));
        let claims_z = SeparatingWitness {
            z_separating: true,
            ..ok
        };
        assert_eq!(
            check_witness(&p, &chain, &claims_z, Some(set(&[0, 3]))),
            Err(Violation::NotZSeparating)
        );

        // bundle holding i(a) and i(b) mapped to a lower-kind vertex
        let crown = HeightOne::new(fixtures::crown4()).unwrap();
        let vee = CVertex::classify(&crown, set(&[0, 2, 3])).unwrap();
        let w = SeparatingWitness {
            phi: vec![vee],
            injection: vec![0, 1, 2, 3],
            z_separating: true,
        };
        assert_eq!(
            check_witness(&p, &crown, &w, Some(set(&[0, 1, 2, 3]))),
            Err(Violation::Separation { bundle: 0, z: 1 })
        );
    }

    #[test]
    fn distinct_vees_on_l_adjacent_bundles_rejected() {
        let p = fixtures::glued_at_minimum();
        // pattern 2-chain + extra: use the crown {a,b,v,w}; bundles share only a
        let c = HeightOne::new(fixtures::crown4()).unwrap();
        let vee_a = CVertex::classify(&c, set(&[0, 2, 3])).unwrap();
        let vee_b = CVertex::classify(&c, set(&[1, 2, 3])).unwrap();
        let w = SeparatingWitness {
            phi: vec![vee_a, vee_b],
            injection: vec![5, 1, 6, 7],
            z_separating: false,
        };
        assert_eq!(
            check_witness(&p, &c, &w, None),
            Err(Violation::MissingEdge(0, 1, Color::L))
        );
    }

    #[test]
    fn chain_pattern_in_improper_crown() {
        let p = fixtures::crown4_mid();
        let chain = HeightOne::new(Poset::chain(2)).unwrap();
        for target in [SearchTarget::CGraph, SearchTarget::CMax] {
            let w = find_separating(&p, &chain, target, SeparatingOptions::default())
                .unwrap()
                .unwrap();
            assert_eq!(w.injection, vec![0, 2]);
            assert!(w.phi[0].is_tip());
            assert_eq!(check_witness(&p, &chain, &w, None), Ok(()));
        }
    }

    #[test]
    fn pigeonhole() {
        let p = Poset::chain(2);
        let crown = HeightOne::new(fixtures::crown4()).unwrap();
        assert_eq!(
            find_separating(&p, &crown, SearchTarget::CMax, SeparatingOptions::default()).unwrap(),
            None
        );
    }

    #[test]
    fn theta_of_c_graph_witness_is_c_max_witness() {
        let (p, z) = fixtures::two_bundle_fence();
        let (_, c) = pattern_in(&p, z).unwrap();
        let w = find_z_separating(&p, z, SearchTarget::CGraph)
            .unwrap()
            .unwrap();
        let collapsed = SeparatingWitness {
            phi: w.phi.iter().map(|s| theta(&c, s)).collect(),
            ..w.clone()
        };
        assert_eq!(check_witness(&p, &c, &collapsed, Some(z)), Ok(()));
    }
}
