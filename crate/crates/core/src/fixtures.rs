//! Small named posets used by tests, examples and the CLI documentation.

use crate::pointset::PointSet;
use crate::poset::Poset;

fn labelled(n: usize, names: &[&str], pairs: &[(usize, usize)]) -> Poset {
    let mut p = Poset::from_relation(n, pairs).expect("fixture is a poset");
    for (x, name) in names.iter().enumerate() {
        p.set_label(x, *name);
    }
    p
}

/// `a, b < v, w`.
pub fn crown4() -> Poset {
    labelled(4, &["a", "b", "v", "w"], &[(0, 2), (0, 3), (1, 2), (1, 3)])
}

/// The 4-crown with one midpoint `m` between both levels; the crown is improper.
pub fn crown4_mid() -> Poset {
    labelled(
        5,
        &["a", "b", "v", "w", "m"],
        &[(0, 4), (1, 4), (4, 2), (4, 3)],
    )
}

/// Two improper crowns sharing the minimal point `a` and nothing else.
pub fn glued_at_minimum() -> Poset {
    labelled(
        9,
        &["a", "b", "v", "w", "m", "b2", "v2", "w2", "m2"],
        &[
            (0, 4),
            (1, 4),
            (4, 2),
            (4, 3),
            (0, 8),
            (5, 8),
            (8, 6),
            (8, 7),
        ],
    )
}

/// A 6-crown `C` (cycle `c-v-a-w-b-u`) inside a poset with two bundles:
/// `F = {a, c, v, p}` over midpoint `m1` and `G = {b, q, w, u}` over `m2`.
/// `C` is a retract. Returns the poset and the carrier of `C`.
pub fn two_bundle_fence() -> (Poset, PointSet) {
    let p = labelled(
        10,
        &["a", "b", "c", "q", "v", "w", "u", "p", "m1", "m2"],
        &[
            (0, 4),
            (0, 5),
            (1, 5),
            (1, 6),
            (2, 4),
            (2, 6),
            (0, 8),
            (2, 8),
            (8, 4),
            (8, 7),
            (1, 9),
            (3, 9),
            (9, 5),
            (9, 6),
        ],
    );
    (p, [0, 1, 2, 4, 5, 6].iter().collect())
}

/// The crown with a fifth maximal point `t` above everything.
pub fn crown4_with_top() -> Poset {
    labelled(
        5,
        &["a", "b", "v", "w", "t"],
        &[(0, 2), (0, 3), (1, 2), (1, 3), (2, 4), (3, 4)],
    )
}
