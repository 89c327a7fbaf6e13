//! Trees, their maximal labellings and tree resolutions of codimension-two ideals.

use std::collections::{BTreeSet, HashSet};

use serde::Serialize;

use super::ConstructionError;
use crate::cmcheck::codimension;
use crate::complex::{CellComplex, ComplexBuilder};
use crate::monomial::{Monomial, MonomialLabelling, Substitution};
use crate::vertex_set::VertexSet;

/// A tree on `0..n` whose edges carry an orientation `(source, target)`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct OrientedTree {
    n: usize,
    edges: Vec<(usize, usize)>,
}

impl OrientedTree {
    pub fn new(n: usize, edges: Vec<(usize, usize)>) -> Result<Self, ConstructionError> {
        if n == 0 || n > crate::vertex_set::MAX_VERTICES {
            return Err(ConstructionError::Parameter(format!("a tree needs 1..=64 vertices, got {n}")));
        }
        if edges.len() != n - 1 {
            return Err(ConstructionError::NotATree(format!("{} edges on {n} vertices", edges.len())));
        }
        let mut uf = UnionFind::new(n);
        for &(s, t) in &edges {
            if s >= n || t >= n {
                return Err(ConstructionError::NotATree(format!("edge ({s}, {t}) leaves [0, {n})")));
            }
            if !uf.union(s, t) {
                return Err(ConstructionError::NotATree(format!("edge ({s}, {t}) closes a cycle")));
            }
        }
        Ok(OrientedTree { n, edges })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn edges(&self) -> &[(usize, usize)] {
        &self.edges
    }

    /// Edges as unordered pairs `(min, max)`, sorted.
    pub fn edge_set(&self) -> BTreeSet<(usize, usize)> {
        self.edges.iter().map(|&(s, t)| (s.min(t), s.max(t))).collect()
    }

    /// The tree as a 1-dimensional cell complex; edge `k` has cell id `n + k`
    /// and boundary `target - source`.
    pub fn as_complex(&self) -> CellComplex {
        let mut b = ComplexBuilder::with_vertices(self.n);
        for &(s, t) in &self.edges {
            b.add_edge(s, t);
        }
        b.build()
    }

    /// Vertices on the source side of edge `k` (the component of the source
    /// once the edge is removed).
    pub fn source_side(&self, k: usize) -> VertexSet {
        let (s, _) = self.edges[k];
        let mut side = VertexSet::singleton(s);
        let mut stack = vec![s];
        while let Some(v) = stack.pop() {
            for (j, &(a, b)) in self.edges.iter().enumerate() {
                if j == k {
                    continue;
                }
                for (p, q) in [(a, b), (b, a)] {
                    if p == v && !side.contains(q) {
                        side.insert(q);
                        stack.push(q);
                    }
                }
            }
        }
        side
    }
}

struct UnionFind(Vec<usize>);

impl UnionFind {
    fn new(n: usize) -> Self {
        UnionFind((0..n).collect())
    }

    fn find(&mut self, v: usize) -> usize {
        let mut r = v;
        while self.0[r] != r {
            r = self.0[r];
        }
        let mut v = v;
        while self.0[v] != r {
            let next = self.0[v];
            self.0[v] = r;
            v = next;
        }
        r
    }

    fn union(&mut self, a: usize, b: usize) -> bool {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra == rb {
            return false;
        }
        self.0[ra.max(rb)] = ra.min(rb);
        true
    }
}

/// Decodes a Prüfer sequence into the edges of a labelled tree on
/// `seq.len() + 2` vertices, each oriented from smaller to larger id.
fn prufer_edges(seq: &[usize]) -> Vec<(usize, usize)> {
    let n = seq.len() + 2;
    let mut degree = vec![1usize; n];
    for &v in seq {
        degree[v] += 1;
    }
    let mut edges = Vec::with_capacity(n - 1);
    for &v in seq {
        let leaf = (0..n).find(|&u| degree[u] == 1).expect("a leaf exists");
        edges.push((leaf.min(v), leaf.max(v)));
        degree[leaf] -= 1;
        degree[v] -= 1;
    }
    let rest: Vec<usize> = (0..n).filter(|&u| degree[u] == 1).collect();
    edges.push((rest[0], rest[1]));
    edges.sort();
    edges
}

/// Every labelled tree on `n` vertices (`n^(n-2)` of them), edges oriented
/// from smaller to larger id.
pub fn all_labelled_trees(n: usize) -> Vec<OrientedTree> {
    match n {
        0 => Vec::new(),
        1 => vec![OrientedTree { n: 1, edges: Vec::new() }],
        _ => {
            let len = n - 2;
            let total = n.pow(len as u32);
            (0..total)
                .map(|mut code| {
                    let seq: Vec<usize> = (0..len)
                        .map(|_| {
                            let d = code % n;
                            code /= n;
                            d
                        })
                        .collect();
                    OrientedTree { n, edges: prufer_edges(&seq) }
                })
                .collect()
        }
    }
}

/// Canonical string of a rooted subtree (AHU encoding).
fn rooted_code(adj: &[Vec<usize>], v: usize, parent: usize) -> String {
    let mut kids: Vec<String> = adj[v].iter().filter(|&&u| u != parent).map(|&u| rooted_code(adj, u, v)).collect();
    kids.sort();
    format!("({})", kids.concat())
}

/// Isomorphism invariant of an unrooted tree: the smallest code over its centres.
pub fn tree_code(t: &OrientedTree) -> String {
    let n = t.n;
    let mut adj = vec![Vec::new(); n];
    for &(s, u) in &t.edges {
        adj[s].push(u);
        adj[u].push(s);
    }
    // peel leaves until one or two centres remain
    let mut degree: Vec<usize> = adj.iter().map(Vec::len).collect();
    let mut layer: Vec<usize> = (0..n).filter(|&v| degree[v] <= 1).collect();
    let mut remaining = n;
    while remaining > 2 {
        remaining -= layer.len();
        let mut next = Vec::new();
        for &v in &layer {
            for &u in &adj[v] {
                degree[u] -= 1;
                if degree[u] == 1 {
                    next.push(u);
                }
            }
        }
        layer = next;
    }
    layer.iter().map(|&c| rooted_code(&adj, c, usize::MAX)).min().unwrap_or_default()
}

/// One representative per isomorphism class of trees on `n` vertices.
pub fn nonisomorphic_trees(n: usize) -> Vec<OrientedTree> {
    let mut seen = HashSet::new();
    all_labelled_trees(n).into_iter().filter(|t| seen.insert(tree_code(t))).collect()
}

/// The labelling `M_v` of a tree: edge `k` contributes `x_k` (variable `2k`)
/// to the source side and `y_k` (variable `2k + 1`) to the target side.
/// The one-vertex tree gets the single label `x_0`.
pub fn tree_maximal_labelling(t: &OrientedTree) -> MonomialLabelling {
    if t.n == 1 {
        return MonomialLabelling::new(1, vec![Monomial::variable(1, 0)]).expect("single label");
    }
    let r = 2 * t.edges.len();
    let mut labels = vec![Monomial::one(r); t.n];
    for k in 0..t.edges.len() {
        let side = t.source_side(k);
        for (v, label) in labels.iter_mut().enumerate() {
            label.0[if side.contains(v) { 2 * k } else { 2 * k + 1 }] = 1;
        }
    }
    MonomialLabelling::new(r, labels).expect("tree labels are pairwise incomparable")
}

/// The substitution from the maximal labelling of `t` onto `l`:
/// `y_e ↦ m_t / gcd`, `x_e ↦ m_s / gcd` for every edge `s → t`.
pub fn tree_unique_morphism(t: &OrientedTree, l: &MonomialLabelling) -> Result<Substitution, ConstructionError> {
    if l.n_vertices() != t.n {
        return Err(ConstructionError::Parameter(format!("{} labels for a tree on {} vertices", l.n_vertices(), t.n)));
    }
    let m = l.labels();
    let images = if t.n == 1 {
        vec![m[0].clone()]
    } else {
        t.edges.iter().flat_map(|&(s, u)| [m[s].excess_over(&m[u]), m[u].excess_over(&m[s])]).collect()
    };
    let source = tree_maximal_labelling(t);
    let sub = Substitution { source_vars: source.n_variables(), target_vars: l.n_variables(), images };
    for (v, big) in source.labels().iter().enumerate() {
        let image = sub.apply(big).expect("arity matches");
        if &image != l.label(v) {
            return Err(ConstructionError::MorphismFailed { vertex: v, expected: l.label(v).clone(), found: image });
        }
    }
    Ok(sub)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct TreeResolutions {
    /// Kruskal tree ordered by (lcm degree, lexicographic edge).
    pub canonical: OrientedTree,
    /// Every tree passing the spanning-forest test, sorted by edge set.
    pub trees: Vec<OrientedTree>,
}

/// Whether `T_{≤i}` spans `K_{≤i}` for every degree threshold `i`.
///
/// `K_{≤i}` has the vertices of label degree at most `i` and the pairs whose
/// lcm has degree at most `i`; a forest spans it exactly when its edge count
/// equals vertices minus components.
pub fn is_spanning_at_all_degrees(t: &OrientedTree, l: &MonomialLabelling) -> bool {
    let n = t.n;
    let m = l.labels();
    let pair_degree = |u: usize, v: usize| m[u].join(&m[v]).degree();
    let mut thresholds: BTreeSet<u32> = m.iter().map(Monomial::degree).collect();
    for u in 0..n {
        for v in u + 1..n {
            thresholds.insert(pair_degree(u, v));
        }
    }
    thresholds.into_iter().all(|i| {
        let verts: Vec<usize> = (0..n).filter(|&v| m[v].degree() <= i).collect();
        let mut uf = UnionFind::new(n);
        let mut components = verts.len();
        for (a, &u) in verts.iter().enumerate() {
            for &v in &verts[a + 1..] {
                if pair_degree(u, v) <= i && uf.union(u, v) {
                    components -= 1;
                }
            }
        }
        let tree_edges = t.edges.iter().filter(|&&(s, u)| pair_degree(s, u) <= i).count();
        tree_edges == verts.len() - components
    })
}

/// Trees on the vertices of a codimension-two labelling that pass the
/// spanning-forest test, and the canonical Kruskal tree.
pub fn tree_resolution_trees(l: &MonomialLabelling) -> Result<TreeResolutions, ConstructionError> {
    let n = l.n_vertices();
    if n < 2 {
        return Err(ConstructionError::Parameter("tree resolutions need at least two generators".into()));
    }
    let codim = codimension(l)?;
    if codim != 2 {
        return Err(ConstructionError::Codimension { expected: 2, found: codim });
    }
    let m = l.labels();
    let mut pairs: Vec<(u32, usize, usize)> = Vec::new();
    for u in 0..n {
        for v in u + 1..n {
            pairs.push((m[u].join(&m[v]).degree(), u, v));
        }
    }
    pairs.sort();
    let mut uf = UnionFind::new(n);
    let edges = pairs.iter().filter(|&&(_, u, v)| uf.union(u, v)).map(|&(_, u, v)| (u, v)).collect();
    let canonical = OrientedTree { n, edges };
    if !is_spanning_at_all_degrees(&canonical, l) {
        return Err(ConstructionError::NoTree);
    }
    let mut trees: Vec<OrientedTree> = all_labelled_trees(n).into_iter().filter(|t| is_spanning_at_all_degrees(t, l)).collect();
    trees.sort_by_key(OrientedTree::edge_set);
    Ok(TreeResolutions { canonical, trees })
}
