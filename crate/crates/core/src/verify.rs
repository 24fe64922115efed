//! Equivalence suites: the decision procedure and its lemmas against the
//! brute-force oracle, over exhaustive small posets and seeded random ones.

use std::fmt;

use crate::crown::{bundle_family, enumerate_crowns_in_e};
use crate::format::write_poset;
use crate::multigraph::build_c_graph;
use crate::oracle::{
    is_retraction, oracle_retraction_exists, oracle_surjective_hom_exists, visit_height_one,
    visit_posets, InstanceGenerator,
};
use crate::pointset::PointSet;
use crate::poset::{HeightOne, Poset};
use crate::retract::{
    check_extension_condition, clique_criterion, clique_witness, corollary2_check, decide_retract,
    extend_from_extremals, reduce_to_core, surjection_from_witness, CrownVerdict, Decision,
};
use crate::search::{
    check_witness, find_separating, find_z_separating, SearchTarget, SeparatingOptions,
    SeparatingWitness,
};

/// Sizes and counts for the suites.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Bounds {
    /// Largest poset in the exhaustive crown suites.
    pub exhaustive_max: usize,
    pub random_posets: usize,
    pub random_max: usize,
    pub surjection_posets: usize,
    pub surjection_max: usize,
    /// Largest poset in the extension suite.
    pub extension_max: usize,
    /// Largest poset in the height-one suite.
    pub height_one_max: usize,
    pub seed: u64,
}

impl Default for Bounds {
    fn default() -> Self {
        Bounds {
            exhaustive_max: 6,
            random_posets: 10_000,
            random_max: 10,
            surjection_posets: 5_000,
            surjection_max: 9,
            extension_max: 6,
            height_one_max: 7,
            seed: 0x5eed,
        }
    }
}

impl Bounds {
    /// Every size capped at `n`, with `count` random posets per random suite.
    pub fn capped(n: usize, count: usize) -> Self {
        let d = Bounds::default();
        Bounds {
            exhaustive_max: d.exhaustive_max.min(n),
            random_posets: count,
            random_max: d.random_max.min(n),
            surjection_posets: count,
            surjection_max: d.surjection_max.min(n),
            extension_max: d.extension_max.min(n),
            height_one_max: d.height_one_max.min(n),
            seed: d.seed,
        }
    }
}

pub const CRITERIA: [&str; 10] = [
    "retract decision agrees with the retraction oracle",
    "separating homomorphism exists iff a surjection onto A_m + A_n exists",
    "C(C) and C_max(C) give the same decision",
    "extension succeeds iff the crown condition holds",
    "N-poset criterion agrees with clique-image search",
    "bundle-complete crown verdict agrees with the decision",
    "reduction to the core keeps decision and bundles",
    "every returned witness verifies",
    "C(C) vertex census",
    "height-one posets retract onto every crown",
];

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SuiteResult {
    pub criterion: usize,
    pub checked: usize,
    pub failures: usize,
    /// First failing instance, in the poset file format.
    pub counterexample: Option<String>,
}

impl SuiteResult {
    pub fn passed(&self) -> bool {
        self.failures == 0
    }

    /// No instance fell within the bounds.
    pub fn is_vacuous(&self) -> bool {
        self.checked == 0
    }

    pub fn name(&self) -> &'static str {
        CRITERIA[self.criterion - 1]
    }
}

impl fmt::Display for SuiteResult {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{} criterion {:>2}: {} ({} checked, {} failed)",
            match (self.passed(), self.is_vacuous()) {
                (false, _) => "FAIL",
                (true, true) => "SKIP",
                (true, false) => "PASS",
            },
            self.criterion,
            self.name(),
            self.checked,
            self.failures
        )
    }
}

struct Tally {
    results: Vec<SuiteResult>,
}

impl Tally {
    fn new() -> Self {
        Tally {
            results: (1..=10)
                .map(|criterion| SuiteResult {
                    criterion,
                    checked: 0,
                    failures: 0,
                    counterexample: None,
                })
                .collect(),
        }
    }

    fn record(&mut self, criterion: usize, ok: bool, context: impl FnOnce() -> String) {
        let r = &mut self.results[criterion - 1];
        r.checked += 1;
        if !ok {
            r.failures += 1;
            if r.counterexample.is_none() {
                r.counterexample = Some(context());
            }
        }
    }
}

fn names(p: &Poset, s: PointSet) -> String {
    s.iter().map(|x| p.name(x)).collect::<Vec<_>>().join(",")
}

/// A reproducible counterexample: the poset file with the pattern in a comment.
pub fn describe(p: &Poset, z: Option<PointSet>, message: &str) -> String {
    let mut out = format!("# {message}\n");
    if let Some(z) = z {
        let lower = z.intersection(p.lower());
        let upper = z.difference(lower);
        out.push_str(&format!(
            "# --lower {} --upper {}\n",
            names(p, lower),
            names(p, upper)
        ));
    }
    out.push_str(&write_poset(p));
    out
}

fn witness_ok(p: &Poset, c: &HeightOne, w: &SeparatingWitness, z: Option<PointSet>) -> bool {
    check_witness(p, c, w, z).is_ok()
}

/// Criteria 1, 3, 5, 6, 7 and 8 on one crown instance.
fn crown_instance(p: &Poset, z: PointSet, fault: bool, t: &mut Tally) {
    let ctx = |msg: &str| describe(p, Some(z), msg);
    let decision = match decide_retract(p, z) {
        Ok(d) => d,
        Err(e) => {
            t.record(1, false, || ctx(&format!("decide_retract failed: {e}")));
            return;
        }
    };
    let decided = fault || decision.is_retract();
    match oracle_retraction_exists(p, z) {
        Ok(oracle) => {
            t.record(1, decided == oracle.is_some(), || {
                ctx(&format!("decision {decided}, oracle {}", oracle.is_some()))
            });
            if let Some(r) = &oracle {
                t.record(8, is_retraction(p, z, &r.map), || {
                    ctx("oracle retraction fails the definition")
                });
            }
        }
        Err(e) => t.record(1, false, || ctx(&e.to_string())),
    }
    if let Decision::Retract(r) = &decision {
        let ok = r.verify(p).is_ok() && is_retraction(p, z, &r.map) && r.image == z;
        t.record(8, ok, || ctx("returned retraction does not verify"));
    }

    let (_, c) = crate::search::pattern_in(p, z).expect("decided instances have a valid pattern");
    let by_c = find_z_separating(p, z, SearchTarget::CGraph).expect("valid pattern");
    let by_max = find_z_separating(p, z, SearchTarget::CMax).expect("valid pattern");
    t.record(3, by_c.is_some() == by_max.is_some(), || {
        ctx(&format!(
            "C(C): {}, C_max(C): {}",
            by_c.is_some(),
            by_max.is_some()
        ))
    });
    for w in by_c.iter().chain(by_max.iter()) {
        t.record(8, witness_ok(p, &c, w, Some(z)), || {
            ctx("separating witness rejected")
        });
    }

    let n_fit = clique_criterion(p, z).expect("valid pattern");
    let clique = clique_witness(p, z).expect("valid pattern");
    t.record(5, n_fit.is_some() == clique.is_some(), || {
        ctx(&format!(
            "N-poset fit {:?}, clique witness {}",
            n_fit,
            clique.is_some()
        ))
    });
    if let Some(w) = &clique {
        t.record(8, witness_ok(p, &c, w, Some(z)), || {
            ctx("clique witness rejected")
        });
    }

    if c.lower().len() == 2 && c.upper().len() == 2 {
        match corollary2_check(p, z) {
            Ok(CrownVerdict::NotApplicable) => {}
            Ok(v) => t.record(
                6,
                (v == CrownVerdict::Retract) == decision.is_retract(),
                || {
                    ctx(&format!(
                        "verdict {v:?}, decision {}",
                        decision.is_retract()
                    ))
                },
            ),
            Err(e) => t.record(6, false, || ctx(&e.to_string())),
        }
    }

    match reduce_to_core(p, z) {
        Ok(core) => {
            let local: PointSet = z
                .iter()
                .map(|x| core.from_host(x).expect("Z is kept"))
                .collect();
            let same_decision = decide_retract(&core.poset, local).map(|d| d.is_retract())
                == Ok(decision.is_retract());
            let host = bundle_family(p);
            let reduced = bundle_family(&core.poset);
            let mut lifted: Vec<PointSet> = reduced.bundles.iter().map(|&b| core.lift(b)).collect();
            lifted.sort();
            let same_bundles =
                lifted == host.bundles && core.lift(reduced.inner_points) == host.inner_points;
            t.record(7, same_decision && same_bundles, || {
                ctx(&format!(
                    "decision kept: {same_decision}, bundles kept: {same_bundles}"
                ))
            });
        }
        Err(e) => t.record(7, false, || ctx(&e.to_string())),
    }
}

fn crown_instances(p: &Poset, fault: bool, t: &mut Tally) {
    if p.validate_ambient().is_err() {
        return;
    }
    for crown in enumerate_crowns_in_e(p) {
        crown_instance(p, crown.points(), fault, t);
    }
}

/// Criteria 2, 3 and 8 for `A_m ⊕ A_n` against one ambient poset.
fn surjection_instance(p: &Poset, m: usize, n: usize, t: &mut Tally) {
    let c = HeightOne::new(Poset::complete_bipartite(m, n)).expect("ordinal sum of antichains");
    let ctx = |msg: &str| describe(p, None, &format!("pattern A_{m} + A_{n}: {msg}"));
    let options = SeparatingOptions {
        inverse_order_preserving: true,
    };
    let sep = find_separating(p, &c, SearchTarget::CMax, options).expect("valid ambient");
    let oracle = match oracle_surjective_hom_exists(p, c.poset()) {
        Ok(f) => f,
        Err(e) => {
            t.record(2, false, || ctx(&e.to_string()));
            return;
        }
    };
    t.record(2, sep.is_some() == oracle.is_some(), || {
        ctx(&format!(
            "separating {}, surjection {}",
            sep.is_some(),
            oracle.is_some()
        ))
    });
    let by_c = find_separating(p, &c, SearchTarget::CGraph, options).expect("valid ambient");
    t.record(3, by_c.is_some() == sep.is_some(), || {
        ctx(&format!(
            "C(C): {}, C_max(C): {}",
            by_c.is_some(),
            sep.is_some()
        ))
    });
    for w in sep.iter().chain(by_c.iter()) {
        t.record(8, witness_ok(p, &c, w, None), || {
            ctx("separating witness rejected")
        });
    }
    if let Some(w) = &sep {
        let built = surjection_from_witness(p, &c, w, c.lower_set(), c.upper_set());
        let ok = built
            .is_ok_and(|g| g.is_order_preserving(p, c.poset()) && g.is_surjective_onto(c.poset()));
        t.record(8, ok, || {
            ctx("surjection built from the witness does not verify")
        });
    }
}

/// All maps from `domain` onto `offset..offset + k`.
fn surjections(domain: &[usize], offset: usize, k: usize) -> Vec<Vec<(usize, usize)>> {
    let mut out = Vec::new();
    let total = k.checked_pow(domain.len() as u32).unwrap_or(0);
    for code in 0..total {
        let mut c = code;
        let mut hit = PointSet::EMPTY;
        let mut map = Vec::with_capacity(domain.len());
        for &x in domain {
            let y = offset + c % k;
            c /= k;
            hit.insert(y);
            map.push((x, y));
        }
        if hit.len() == k {
            out.push(map);
        }
    }
    out
}

/// Criterion 4 for one ambient poset and every strict surjection onto
/// `A_m ⊕ A_n`, `m, n ≤ 3`.
fn extension_instance(p: &Poset, t: &mut Tally) {
    if p.validate_ambient().is_err() {
        return;
    }
    let lower = p.lower().to_vec();
    let upper = p.upper().to_vec();
    for m in 1..=3.min(lower.len()) {
        for n in 1..=3.min(upper.len()) {
            let q = Poset::complete_bipartite(m, n);
            let lows = surjections(&lower, 0, m);
            let highs = surjections(&upper, m, n);
            for lo in &lows {
                for hi in &highs {
                    let mut f = vec![None; p.len()];
                    for &(x, y) in lo.iter().chain(hi.iter()) {
                        f[x] = Some(y);
                    }
                    let ext = extend_from_extremals(p, &q, &f);
                    let cond = check_extension_condition(p, &f).is_ok();
                    let verified = ext.as_ref().is_none_or(|g| {
                        g.is_order_preserving(p, &q)
                            && p.extremal().iter().all(|x| Some(g.apply(x)) == f[x])
                    });
                    t.record(4, ext.is_some() == cond && verified, || {
                        let map: Vec<String> = lo
                            .iter()
                            .chain(hi.iter())
                            .map(|&(x, y)| format!("{}->{}", p.name(x), y))
                            .collect();
                        describe(p, None, &format!("onto A_{m} + A_{n} by {}", map.join(" ")))
                    });
                }
            }
        }
    }
}

fn census(t: &mut Tally) {
    for m in 1..=3usize {
        for n in 1..=3usize {
            let c = HeightOne::new(Poset::complete_bipartite(m, n)).expect("ordinal sum");
            let want = n * ((1 << m) - 1) + m * ((1 << n) - 1) - m * n;
            let got = build_c_graph(&c).vertex_count();
            t.record(9, got == want, || {
                describe(
                    c.poset(),
                    None,
                    &format!("A_{m} + A_{n}: {got} vertices, expected {want}"),
                )
            });
        }
    }
    let crown = HeightOne::new(crate::fixtures::crown4()).expect("crown");
    let got = build_c_graph(&crown).vertex_count();
    t.record(9, got == 8, || {
        describe(crown.poset(), None, &format!("4-crown: {got} vertices"))
    });
}

fn height_one_instance(p: &Poset, t: &mut Tally) {
    for crown in enumerate_crowns_in_e(p) {
        let z = crown.points();
        let ok = match decide_retract(p, z) {
            Ok(Decision::Retract(r)) => r.verify(p).is_ok() && is_retraction(p, z, &r.map),
            _ => false,
        };
        t.record(10, ok, || {
            describe(p, Some(z), "no verified retraction onto the crown")
        });
    }
}

/// Runs every suite. With `inject_fault` the retract decision is replaced by
/// one that always answers "retract", which the oracle must catch.
pub fn run(bounds: &Bounds, inject_fault: bool) -> Vec<SuiteResult> {
    run_with_progress(bounds, inject_fault, |_| {})
}

/// As [`run`], reporting the name of each phase as it starts.
pub fn run_with_progress(
    bounds: &Bounds,
    inject_fault: bool,
    mut progress: impl FnMut(&str),
) -> Vec<SuiteResult> {
    let mut t = Tally::new();

    progress("exhaustive crown instances");
    for n in 4..=bounds.exhaustive_max {
        visit_posets(n, |p| crown_instances(p, inject_fault, &mut t));
    }
    progress("random crown instances");
    InstanceGenerator::random(
        bounds.seed,
        4,
        bounds.random_max.max(4),
        bounds.random_posets,
        0.0,
    )
    .for_each(|p| crown_instances(p, inject_fault, &mut t));

    progress("random surjection instances");
    InstanceGenerator::random(
        bounds.seed ^ 1,
        2,
        bounds.surjection_max.max(2),
        bounds.surjection_posets,
        0.0,
    )
    .for_each(|p| {
        if p.validate_ambient().is_err() {
            return;
        }
        let e = p.extremal().len();
        for m in 1..=3 {
            for n in 1..=3 {
                if m + n <= e {
                    surjection_instance(p, m, n, &mut t);
                }
            }
        }
    });

    progress("extensions");
    for n in 2..=bounds.extension_max {
        visit_posets(n, |p| extension_instance(p, &mut t));
    }

    progress("census");
    census(&mut t);

    progress("height-one posets");
    for n in 4..=bounds.height_one_max {
        visit_height_one(n, |p| height_one_instance(p, &mut t));
    }
    t.results
}
