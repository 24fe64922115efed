//! Two-colored multigraphs on bundles and on candidate image sets.
//!
//! Both graph families only ever carry one edge per color between two
//! vertices, so a graph is two symmetric boolean relations (loops included).

use std::fmt::Write as _;

use crate::crown::BundleFamily;
use crate::pointset::{subsets, PointSet};
use crate::poset::{HeightOne, Poset};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Color {
    L,
    U,
}

/// Which of the families `∨(a)` / `∧(v)` a candidate image set belongs to.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Side {
    /// `{a} ∪ N` with `N ⊆ U(C)`, `|N| >= 2`.
    Vee(usize),
    /// `{v} ∪ N` with `N ⊆ L(C)`, `|N| >= 2`.
    Wedge(usize),
    /// A single edge `{a, v}`, member of both `∨(a)` and `∧(v)`.
    Tip { low: usize, high: usize },
}

/// A vertex of `C(C)`: a point set of `C` with its side tag.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct CVertex {
    pub set: PointSet,
    pub side: Side,
}

impl CVertex {
    /// Classifies a point set of `c`; `None` if it is not a vertex of `C(C)`.
    pub fn classify(c: &HeightOne, set: PointSet) -> Option<CVertex> {
        let lows = set.intersection(c.lower_set());
        let highs = set.intersection(c.upper_set());
        if !set.is_subset(c.poset().carrier()) || lows.is_empty() || highs.is_empty() {
            return None;
        }
        let side = match (lows.len(), highs.len()) {
            (1, 1) => Side::Tip {
                low: lows.first()?,
                high: highs.first()?,
            },
            (1, _) => Side::Vee(lows.first()?),
            (_, 1) => Side::Wedge(highs.first()?),
            _ => return None,
        };
        let apex_ok = match side {
            Side::Vee(a) | Side::Tip { low: a, .. } => highs.is_subset(c.poset().strict_above(a)),
            Side::Wedge(v) => lows.is_subset(c.poset().strict_below(v)),
        };
        apex_ok.then_some(CVertex { set, side })
    }

    /// Member of the family `∨(a)` for some `a` (the lower kind); returns `a`.
    pub fn vee_apex(&self) -> Option<usize> {
        match self.side {
            Side::Vee(a) | Side::Tip { low: a, .. } => Some(a),
            Side::Wedge(_) => None,
        }
    }

    /// Member of the family `∧(v)` for some `v` (the upper kind); returns `v`.
    pub fn wedge_apex(&self) -> Option<usize> {
        match self.side {
            Side::Wedge(v) | Side::Tip { high: v, .. } => Some(v),
            Side::Vee(_) => None,
        }
    }

    pub fn is_tip(&self) -> bool {
        matches!(self.side, Side::Tip { .. })
    }
}

/// The vertices of `C_max(C)`: principal up-sets of minimal points and
/// principal down-sets of maximal points.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum CMaxVertex {
    Vee(usize),
    Wedge(usize),
}

impl CMaxVertex {
    pub fn set(&self, c: &HeightOne) -> PointSet {
        match *self {
            CMaxVertex::Vee(a) => c.poset().up_set(a),
            CMaxVertex::Wedge(v) => c.poset().down_set(v),
        }
    }

    pub fn to_cvertex(&self, c: &HeightOne) -> CVertex {
        CVertex::classify(c, self.set(c))
            .expect("principal sets of a connected height-one poset are vertices")
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum VertexLabel {
    Bundle(PointSet),
    C(CVertex),
}

impl VertexLabel {
    pub fn set(&self) -> PointSet {
        match self {
            VertexLabel::Bundle(s) => *s,
            VertexLabel::C(v) => v.set,
        }
    }

    pub fn as_cvertex(&self) -> Option<&CVertex> {
        match self {
            VertexLabel::C(v) => Some(v),
            VertexLabel::Bundle(_) => None,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TwoColorMultigraph {
    vertices: Vec<VertexLabel>,
    l_adj: Vec<bool>,
    u_adj: Vec<bool>,
}

impl TwoColorMultigraph {
    /// Builds a graph whose edges are decided by set intersection with the
    /// given lower and upper point sets.
    fn by_intersection(vertices: Vec<VertexLabel>, lower: PointSet, upper: PointSet) -> Self {
        let n = vertices.len();
        let mut l_adj = vec![false; n * n];
        let mut u_adj = vec![false; n * n];
        for i in 0..n {
            for j in 0..n {
                let common = vertices[i].set().intersection(vertices[j].set());
                l_adj[i * n + j] = !common.is_disjoint(lower);
                u_adj[i * n + j] = !common.is_disjoint(upper);
            }
        }
        TwoColorMultigraph {
            vertices,
            l_adj,
            u_adj,
        }
    }

    pub fn vertices(&self) -> &[VertexLabel] {
        &self.vertices
    }

    pub fn vertex_count(&self) -> usize {
        self.vertices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vertices.is_empty()
    }

    pub fn has_edge(&self, color: Color, i: usize, j: usize) -> bool {
        let n = self.vertices.len();
        match color {
            Color::L => self.l_adj[i * n + j],
            Color::U => self.u_adj[i * n + j],
        }
    }

    pub fn has_both(&self, i: usize, j: usize) -> bool {
        self.has_edge(Color::L, i, j) && self.has_edge(Color::U, i, j)
    }

    /// Number of edges of one color, loops included, each unordered pair once.
    pub fn edge_count(&self, color: Color) -> usize {
        let n = self.vertices.len();
        (0..n)
            .flat_map(|i| (i..n).map(move |j| (i, j)))
            .filter(|&(i, j)| self.has_edge(color, i, j))
            .count()
    }

    /// Every pair of distinct vertices joined by an L-edge and a U-edge.
    pub fn is_complete(&self) -> bool {
        let n = self.vertices.len();
        (0..n).all(|i| (0..n).all(|j| i == j || self.has_both(i, j)))
    }

    pub fn position(&self, set: PointSet) -> Option<usize> {
        self.vertices.iter().position(|v| v.set() == set)
    }

    /// Inclusion-maximal cliques (pairwise L- and U-adjacent) as vertex indices.
    pub fn maximal_cliques(&self) -> Vec<Vec<usize>> {
        let n = self.vertices.len();
        let mut out = Vec::new();
        let mut current = Vec::new();
        self.bron_kerbosch(&mut current, (0..n).collect(), Vec::new(), &mut out);
        out.sort();
        out
    }

    fn bron_kerbosch(
        &self,
        current: &mut Vec<usize>,
        candidates: Vec<usize>,
        excluded: Vec<usize>,
        out: &mut Vec<Vec<usize>>,
    ) {
        if candidates.is_empty() {
            if excluded.is_empty() && !current.is_empty() {
                let mut k = current.clone();
                k.sort_unstable();
                out.push(k);
            }
            return;
        }
        let mut candidates = candidates;
        let mut excluded = excluded;
        while let Some(v) = candidates.pop() {
            let adjacent = |&u: &usize| u != v && self.has_both(u, v);
            current.push(v);
            self.bron_kerbosch(
                current,
                candidates.iter().copied().filter(|u| adjacent(u)).collect(),
                excluded.iter().copied().filter(|u| adjacent(u)).collect(),
                out,
            );
            current.pop();
            excluded.push(v);
        }
    }
}

/// The graph on bundles: L-edge iff two bundles share a minimal point of `P`,
/// U-edge iff they share a maximal point.
pub fn build_f_graph(p: &Poset, bf: &BundleFamily) -> TwoColorMultigraph {
    let vertices = bf.bundles.iter().map(|&b| VertexLabel::Bundle(b)).collect();
    TwoColorMultigraph::by_intersection(vertices, p.lower(), p.upper())
}

/// All vertices of `C(C)`: for each minimal `a`, the sets `{a} ∪ N` with
/// `∅ ≠ N ⊆ ↑a ∩ U(C)`; dually for each maximal `v`. Tips are listed once, on
/// the lower side. Order: lower sides by apex then set, then upper sides.
pub fn c_vertices(c: &HeightOne) -> Vec<CVertex> {
    let p = c.poset();
    let mut out = Vec::new();
    for &a in c.lower() {
        for n in subsets(p.strict_above(a)).filter(|s| !s.is_empty()) {
            out.push(CVertex::classify(c, n.with(a)).expect("valid lower vertex"));
        }
    }
    for &v in c.upper() {
        for n in subsets(p.strict_below(v)).filter(|s| s.len() >= 2) {
            out.push(CVertex::classify(c, n.with(v)).expect("valid upper vertex"));
        }
    }
    out
}

pub fn build_c_graph(c: &HeightOne) -> TwoColorMultigraph {
    let vertices = c_vertices(c).into_iter().map(VertexLabel::C).collect();
    TwoColorMultigraph::by_intersection(vertices, c.lower_set(), c.upper_set())
}

/// Vertices of `C_max(C)` in search order: `Vee(a)` by ascending `a`, then
/// `Wedge(v)` by ascending `v`, dropping a `Wedge` whose set equals an earlier `Vee`.
pub fn c_max_vertices(c: &HeightOne) -> Vec<(CMaxVertex, CVertex)> {
    let mut out: Vec<(CMaxVertex, CVertex)> = Vec::new();
    let all = c
        .lower()
        .iter()
        .map(|&a| CMaxVertex::Vee(a))
        .chain(c.upper().iter().map(|&v| CMaxVertex::Wedge(v)));
    for m in all {
        let cv = m.to_cvertex(c);
        if !out.iter().any(|(_, seen)| seen.set == cv.set) {
            out.push((m, cv));
        }
    }
    out
}

pub fn build_c_max(c: &HeightOne) -> TwoColorMultigraph {
    let vertices = c_max_vertices(c)
        .into_iter()
        .map(|(_, cv)| VertexLabel::C(cv))
        .collect();
    TwoColorMultigraph::by_intersection(vertices, c.lower_set(), c.upper_set())
}

/// Collapse of a `C(C)` vertex onto `C_max(C)`: members of `∨(a)` (tips
/// included) go to `↑a`, the remaining members of `∧(v)` go to `↓v`.
pub fn theta(c: &HeightOne, s: &CVertex) -> CVertex {
    let target = match s.side {
        Side::Vee(a) | Side::Tip { low: a, .. } => CMaxVertex::Vee(a),
        Side::Wedge(v) => CMaxVertex::Wedge(v),
    };
    target.to_cvertex(c)
}

/// Graphviz rendering. Vertices are labelled with their points in ascending
/// id order (named through `name`) and emitted sorted by label; L-edges are
/// solid, U-edges dashed.
pub fn export_dot(g: &TwoColorMultigraph, name: impl Fn(usize) -> String) -> String {
    let labels: Vec<String> = g
        .vertices()
        .iter()
        .map(|v| {
            let names: Vec<String> = v.set().iter().map(&name).collect();
            format!("{{{}}}", names.join(","))
        })
        .collect();
    let mut order: Vec<usize> = (0..labels.len()).collect();
    order.sort_by(|&i, &j| labels[i].cmp(&labels[j]).then(i.cmp(&j)));
    let mut rank = vec![0; order.len()];
    for (r, &i) in order.iter().enumerate() {
        rank[i] = r;
    }

    let mut out = String::from("graph G {\n");
    for (r, &i) in order.iter().enumerate() {
        writeln!(out, "  n{r} [label=\"{}\"];", labels[i]).unwrap();
    }
    for (ri, &i) in order.iter().enumerate() {
        for &j in &order[ri..] {
            let (a, b) = (rank[i], rank[j]);
            if g.has_edge(Color::L, i, j) {
                writeln!(out, "  n{a} -- n{b} [style=solid, label=\"L\"];").unwrap();
            }
            if g.has_edge(Color::U, i, j) {
                writeln!(out, "  n{a} -- n{b} [style=dashed, label=\"U\"];").unwrap();
            }
        }
    }
    out.push_str("}\n");
    out
}
