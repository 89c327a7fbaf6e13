//! Maximality tests and exhaustive enumeration of valid families.

mod harness;

use std::collections::{HashMap, HashSet};

use rayon::prelude::*;
use serde::Serialize;
use thiserror::Error;

use crate::cmcheck::{check_family_criteria_with, subfamily_unions, CmError};
use crate::complex::{AcyclicityOracle, CellComplex, ComplexError, Field};
use crate::constructions::ConstructionError;
use crate::monomial::{decompose, reduce_family, refinement_compare, MonomialError, Refinement, VertexFamily};
use crate::vertex_set::VertexSet;

pub use harness::{conjecture_harness, ConjectureKind, ConjectureReport, HarnessParams, HarnessRow};

/// Default limit on the number of search candidates.
pub const DEFAULT_MAX_CANDIDATES: usize = 60;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum SearchError {
    #[error("{candidates} candidate sets exceed the limit of {limit}; raise the limit to proceed")]
    Guard { candidates: usize, limit: usize },
    #[error("precondition failed: {0}")]
    Precondition(String),
    #[error("permutation {0:?} is not an automorphism of the complex")]
    NotAnAutomorphism(Vec<usize>),
    #[error("family lives on {family} vertices but the complex has {vertices}")]
    FamilySize { family: usize, vertices: usize },
    #[error("unknown conjecture `{0}`")]
    UnknownConjecture(String),
    #[error(transparent)]
    Complex(#[from] ComplexError),
    #[error(transparent)]
    Cm(#[from] CmError),
    #[error(transparent)]
    Monomial(#[from] MonomialError),
    #[error(transparent)]
    Construction(#[from] ConstructionError),
}

/// Candidate member sets and search options.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SearchSpace {
    pub candidates: Vec<VertexSet>,
    /// Vertex permutations used to deduplicate results up to symmetry.
    pub symmetry: Option<Vec<Vec<usize>>>,
    pub max_candidates: usize,
    /// Drop candidates that already fail the criteria on their own.
    pub prefilter: bool,
    /// Cut branches where some face pair can no longer be separated.
    pub separation_pruning: bool,
    pub field: Field,
}

impl SearchSpace {
    /// Nonempty vertex sets whose restriction is connected, sorted by
    /// (size, lexicographic).
    pub fn connected(x: &CellComplex) -> Self {
        let n = x.n_vertices();
        let edges: Vec<VertexSet> = x.cells_of_dim(1).iter().map(|&e| x.cell(e).vertices).collect();
        let mut candidates: Vec<VertexSet> =
            (1u64..(1u64 << n)).map(VertexSet::from_bits).filter(|&w| is_connected(w, &edges)).collect();
        candidates.sort();
        SearchSpace {
            candidates,
            symmetry: None,
            max_candidates: DEFAULT_MAX_CANDIDATES,
            prefilter: true,
            separation_pruning: true,
            field: Field::Gf2,
        }
    }

    /// Every nonempty vertex set.
    pub fn all_subsets(x: &CellComplex) -> Self {
        let mut s = Self::connected(x);
        s.candidates = (1u64..(1u64 << x.n_vertices())).map(VertexSet::from_bits).collect();
        s.candidates.sort();
        s
    }

    /// Attaches a symmetry group after checking each element is an automorphism.
    pub fn with_symmetry(mut self, x: &CellComplex, group: Vec<Vec<usize>>) -> Result<Self, SearchError> {
        if let Some(bad) = group.iter().find(|p| !x.is_automorphism(p)) {
            return Err(SearchError::NotAnAutomorphism(bad.clone()));
        }
        self.symmetry = Some(group);
        Ok(self)
    }

    pub fn with_max_candidates(mut self, limit: usize) -> Self {
        self.max_candidates = limit;
        self
    }

    pub fn with_field(mut self, field: Field) -> Self {
        self.field = field;
        self
    }
}

fn is_connected(w: VertexSet, edges: &[VertexSet]) -> bool {
    let Some(start) = w.first() else {
        return false;
    };
    let mut reached = VertexSet::singleton(start);
    loop {
        let grown = edges
            .iter()
            .filter(|e| e.is_subset(w) && e.intersects(reached))
            .fold(reached, |acc, &e| acc.union(e));
        if grown == reached {
            return reached == w;
        }
        reached = grown;
    }
}

/// Whether `target` is covered by at most `k` of `sets`.
fn coverable_within(target: VertexSet, sets: &[VertexSet], k: usize) -> bool {
    let Some(v) = target.first() else {
        return true;
    };
    if k == 0 {
        return false;
    }
    sets.iter().any(|&s| s.contains(v) && coverable_within(target.difference(s), sets, k - 1))
}

struct Ctx<'a> {
    oracle: &'a AcyclicityOracle<'a>,
    cands: Vec<VertexSet>,
    d: usize,
    n: usize,
    n_pairs: usize,
    /// For each candidate, the face pairs it separates.
    separates: Vec<Vec<u64>>,
    pruning: bool,
}

struct Node {
    chosen: Vec<usize>,
    sets: Vec<VertexSet>,
    unions: Vec<VertexSet>,
    seen: HashSet<VertexSet>,
    separated: Vec<u64>,
}

impl Ctx<'_> {
    fn full(&self) -> VertexSet {
        VertexSet::full(self.n)
    }

    /// Whether candidate `j` keeps the first two criteria. Both are
    /// inherited by subfamilies, so a rejected candidate stays rejected
    /// further down the branch.
    fn admissible(&self, node: &Node, j: usize) -> bool {
        let s = self.cands[j];
        if self.d >= 1 && coverable_within(self.full().difference(s), &node.sets, self.d - 1) {
            return false;
        }
        node.unions.iter().all(|&u| {
            let w = u.union(s);
            node.seen.contains(&w) || self.oracle.is_acyclic(self.full().difference(w))
        })
    }

    /// Adds an admissible candidate; returns the number of new unions.
    fn push(&self, node: &mut Node, j: usize) -> usize {
        let s = self.cands[j];
        let fresh: Vec<VertexSet> = node.unions.iter().map(|&u| u.union(s)).filter(|w| !node.seen.contains(w)).collect();
        let mut added = 0;
        for w in fresh {
            if node.seen.insert(w) {
                node.unions.push(w);
                added += 1;
            }
        }
        node.chosen.push(j);
        node.sets.push(s);
        for (a, b) in node.separated.iter_mut().zip(&self.separates[j]) {
            *a |= b;
        }
        added
    }

    fn pop(&self, node: &mut Node, added: usize, separated: Vec<u64>) {
        node.chosen.pop();
        node.sets.pop();
        node.separated = separated;
        for _ in 0..added {
            let w = node.unions.pop().expect("union recorded");
            node.seen.remove(&w);
        }
    }

    fn all_separated(&self, sep: &[u64]) -> bool {
        (0..self.n_pairs).all(|p| sep[p / 64] >> (p % 64) & 1 == 1)
    }

    /// `open` holds the candidates after the last chosen one that were
    /// admissible at the parent.
    fn dfs(&self, node: &mut Node, open: &[usize], out: &mut Vec<Vec<usize>>, stop_at_first: bool) {
        let done = self.all_separated(&node.separated);
        if done {
            out.push(node.chosen.clone());
            if stop_at_first {
                return;
            }
        }
        let viable: Vec<usize> = open.iter().copied().filter(|&j| self.admissible(node, j)).collect();
        if self.pruning && !done {
            let mut reach = node.separated.clone();
            for &j in &viable {
                for (a, b) in reach.iter_mut().zip(&self.separates[j]) {
                    *a |= b;
                }
            }
            if !self.all_separated(&reach) {
                return;
            }
        }
        for (k, &j) in viable.iter().enumerate() {
            let saved = node.separated.clone();
            let added = self.push(node, j);
            self.dfs(node, &viable[k + 1..], out, stop_at_first);
            self.pop(node, added, saved);
            if stop_at_first && !out.is_empty() {
                return;
            }
        }
    }

    fn root(&self) -> Node {
        Node {
            chosen: Vec::new(),
            unions: vec![VertexSet::EMPTY],
            seen: HashSet::from([VertexSet::EMPTY]),
            sets: Vec::new(),
            separated: vec![0; self.n_pairs.div_ceil(64).max(1)],
        }
    }

    fn branch(&self, i: usize, stop_at_first: bool) -> Vec<Vec<usize>> {
        let mut node = self.root();
        let mut out = Vec::new();
        if self.admissible(&node, i) {
            self.push(&mut node, i);
            let open: Vec<usize> = (i + 1..self.cands.len()).collect();
            self.dfs(&mut node, &open, &mut out, stop_at_first);
        }
        out
    }
}

fn build_ctx<'a>(oracle: &'a AcyclicityOracle<'a>, space: &SearchSpace) -> Result<Ctx<'a>, SearchError> {
    let x = oracle.complex();
    let n = x.n_vertices();
    let d = x.dim().ok_or_else(|| SearchError::Precondition("the complex is void".into()))?;
    let full = VertexSet::full(n);
    let mut cands: Vec<VertexSet> = Vec::new();
    for &s in &space.candidates {
        if s.is_empty() || !s.is_subset(full) {
            return Err(SearchError::Precondition(format!("candidate {s} is not a nonempty subset of the vertices")));
        }
        if cands.contains(&s) {
            continue;
        }
        if space.prefilter && ((d >= 1 && s == full) || !oracle.is_acyclic(full.difference(s))) {
            continue;
        }
        cands.push(s);
    }
    if cands.len() > space.max_candidates {
        return Err(SearchError::Guard { candidates: cands.len(), limit: space.max_candidates });
    }
    let mut pairs = x.covering_pairs();
    pairs.sort();
    pairs.dedup();
    let words = pairs.len().div_ceil(64).max(1);
    let separates: Vec<Vec<u64>> = cands
        .iter()
        .map(|&s| {
            let mut bits = vec![0u64; words];
            for (p, &(face, cell)) in pairs.iter().enumerate() {
                if s.is_disjoint(face) && s.intersects(cell) {
                    bits[p / 64] |= 1 << (p % 64);
                }
            }
            bits
        })
        .collect();
    Ok(Ctx { oracle, cands, d, n, n_pairs: pairs.len(), separates, pruning: space.separation_pruning })
}

fn canonical_list(mut fams: Vec<VertexFamily>) -> Vec<VertexFamily> {
    for f in &mut fams {
        *f = f.canonical();
    }
    fams.sort_by(|a, b| a.len().cmp(&b.len()).then_with(|| a.sets().cmp(b.sets())));
    fams.dedup();
    fams
}

/// Smallest image of `f` under the group, as a canonical family.
fn orbit_representative(f: &VertexFamily, group: &[Vec<usize>]) -> VertexFamily {
    let mut best = f.canonical();
    for p in group {
        let g = f.map(p).canonical();
        if g.sets() < best.sets() {
            best = g;
        }
    }
    best
}

fn dedupe_symmetry(fams: Vec<VertexFamily>, space: &SearchSpace) -> Vec<VertexFamily> {
    match &space.symmetry {
        None => fams,
        Some(group) => canonical_list(fams.iter().map(|f| orbit_representative(f, group)).collect()),
    }
}

fn enumerate_raw(x: &CellComplex, space: &SearchSpace, stop_at_first: bool) -> Result<Vec<VertexFamily>, SearchError> {
    let oracle = AcyclicityOracle::new(x, space.field)?;
    let ctx = build_ctx(&oracle, space)?;
    if !oracle.is_acyclic(ctx.full()) {
        return Ok(Vec::new());
    }
    let found: Vec<Vec<usize>> = if stop_at_first {
        (0..ctx.cands.len()).into_par_iter().map(|i| ctx.branch(i, true)).find_any(|v| !v.is_empty()).unwrap_or_default()
    } else {
        (0..ctx.cands.len()).into_par_iter().flat_map_iter(|i| ctx.branch(i, false)).collect()
    };
    let fams = found
        .into_iter()
        .map(|idx| VertexFamily::new(x.n_vertices(), idx.into_iter().map(|i| ctx.cands[i]).collect()))
        .collect::<Result<Vec<_>, _>>()?;
    Ok(canonical_list(fams))
}

/// All families over the candidates satisfying the three criteria,
/// deduplicated up to the space's symmetry group.
pub fn enumerate_valid_families(x: &CellComplex, space: &SearchSpace) -> Result<Vec<VertexFamily>, SearchError> {
    Ok(dedupe_symmetry(enumerate_raw(x, space, false)?, space))
}

/// Some valid family over the candidates, if one exists.
pub fn find_valid_family(x: &CellComplex, space: &SearchSpace) -> Result<Option<VertexFamily>, SearchError> {
    Ok(enumerate_raw(x, space, true)?.into_iter().next())
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum MaximalityWitness {
    /// A member that is a disjoint union of other members.
    Decomposable { member: VertexSet, parts: Vec<VertexSet> },
    /// A set that can be added while keeping the criteria.
    Addable { set: VertexSet },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct MaximalityVerdict {
    pub maximal: bool,
    pub witness: Option<MaximalityWitness>,
}

/// Reduced and admitting no valid single-set extension by a set that is
/// not a disjoint union of members.
pub fn is_maximal(x: &CellComplex, f: &VertexFamily, field: Field) -> Result<MaximalityVerdict, SearchError> {
    let oracle = AcyclicityOracle::new(x, field)?;
    is_maximal_with(&oracle, f)
}

pub fn is_maximal_with(oracle: &AcyclicityOracle<'_>, f: &VertexFamily) -> Result<MaximalityVerdict, SearchError> {
    let x = oracle.complex();
    if f.n() != x.n_vertices() {
        return Err(SearchError::FamilySize { family: f.n(), vertices: x.n_vertices() });
    }
    let report = check_family_criteria_with(oracle, f)?;
    if !report.valid {
        return Err(SearchError::Precondition("the family fails the criteria".into()));
    }
    for &s in f.sets() {
        if let Some(parts) = decompose(s, f.sets()) {
            let parts = parts.into_iter().map(|i| f.sets()[i]).collect();
            return Ok(MaximalityVerdict { maximal: false, witness: Some(MaximalityWitness::Decomposable { member: s, parts }) });
        }
    }
    let addable = first_addable(oracle, f, (1u64..(1u64 << x.n_vertices())).map(VertexSet::from_bits));
    Ok(MaximalityVerdict { maximal: addable.is_none(), witness: addable.map(|set| MaximalityWitness::Addable { set }) })
}

fn first_addable(oracle: &AcyclicityOracle<'_>, f: &VertexFamily, sets: impl Iterator<Item = VertexSet>) -> Option<VertexSet> {
    let x = oracle.complex();
    let n = x.n_vertices();
    let d = x.dim().unwrap_or(0);
    let full = VertexSet::full(n);
    let unions = subfamily_unions(f.sets());
    let mut tried = Vec::new();
    for t in sets {
        if f.contains(t) || tried.contains(&t) {
            continue;
        }
        tried.push(t);
        if !oracle.is_acyclic(full.difference(t)) {
            continue;
        }
        if d >= 1 && coverable_within(full.difference(t), f.sets(), d - 1) {
            continue;
        }
        if decompose(t, f.sets()).is_some() {
            continue;
        }
        if unions.iter().all(|&u| oracle.is_acyclic(full.difference(u.union(t)))) {
            return Some(t);
        }
    }
    None
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct MaximalSearch {
    pub valid: usize,
    pub reduced: usize,
    pub families: Vec<VertexFamily>,
    /// Reduced valid families where single-set maximality and
    /// refinement-order maximality disagree.
    pub divergences: Vec<VertexFamily>,
}

/// Maximal valid families, with the refinement-order cross-check.
pub fn enumerate_maximal_report(x: &CellComplex, space: &SearchSpace) -> Result<MaximalSearch, SearchError> {
    let valid = enumerate_raw(x, space, false)?;
    let oracle = AcyclicityOracle::new(x, space.field)?;
    let valid_set: HashSet<&VertexFamily> = valid.iter().collect();
    let reduced: Vec<&VertexFamily> = valid.iter().filter(|f| reduce_family(f) == **f).collect();

    let verdicts: Vec<bool> = reduced
        .par_iter()
        .map(|&f| {
            // a valid one-set extension already found by the search
            let cheap_reject = space.candidates.iter().any(|&s| {
                !f.contains(s)
                    && decompose(s, f.sets()).is_none()
                    && f.with(s).is_ok_and(|g| valid_set.contains(&g.canonical()))
            });
            Ok(!cheap_reject && is_maximal_with(&oracle, f)?.maximal)
        })
        .collect::<Result<_, SearchError>>()?;

    // refinement order among reduced valid families, bucketed by size: a
    // strict refinement of F has at least as many members
    let mut by_len: HashMap<usize, Vec<&VertexFamily>> = HashMap::new();
    for &f in &reduced {
        by_len.entry(f.len()).or_default().push(f);
    }
    let refinement_maximal: Vec<bool> = reduced
        .par_iter()
        .map(|&f| {
            !by_len
                .iter()
                .filter(|(&len, _)| len >= f.len())
                .flat_map(|(_, gs)| gs.iter())
                .any(|&g| g != f && refinement_compare(g, f) == Ok(Refinement::Greater))
        })
        .collect();

    let mut families = Vec::new();
    let mut divergences = Vec::new();
    for ((&f, &m), &r) in reduced.iter().zip(&verdicts).zip(&refinement_maximal) {
        if m {
            families.push(f.clone());
        }
        if m != r {
            divergences.push(f.clone());
        }
    }
    Ok(MaximalSearch {
        valid: valid.len(),
        reduced: reduced.len(),
        families: dedupe_symmetry(canonical_list(families), space),
        divergences: canonical_list(divergences),
    })
}

pub fn enumerate_maximal_families(x: &CellComplex, space: &SearchSpace) -> Result<Vec<VertexFamily>, SearchError> {
    Ok(enumerate_maximal_report(x, space)?.families)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum CoveringWitness {
    /// No `dim` members avoiding `vertex` complete `member` to a cover.
    AvoidingCover { member: VertexSet, vertex: usize },
    /// No `dim - 1` members complete the disjoint pair to a cover.
    DisjointPair { first: VertexSet, second: VertexSet },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CoveringReport {
    pub ok: bool,
    /// Whether the disjoint-pair check ran (it needs a single top cell).
    pub pair_check: bool,
    pub witness: Option<CoveringWitness>,
}

/// Covering properties of a maximal family. The disjoint-pair property is
/// only checked when the complex has a single top cell.
pub fn covering_property_check(x: &CellComplex, f: &VertexFamily, field: Field) -> Result<CoveringReport, SearchError> {
    if !is_maximal(x, f, field)?.maximal {
        return Err(SearchError::Precondition("the family is not maximal".into()));
    }
    let n = x.n_vertices();
    let d = x.dim().unwrap_or(0);
    let full = VertexSet::full(n);
    for &t in f.sets() {
        for v in t {
            let avoiding: Vec<VertexSet> = f.sets().iter().copied().filter(|s| !s.contains(v)).collect();
            if !coverable_within(full.difference(t), &avoiding, d) {
                return Ok(CoveringReport {
                    ok: false,
                    pair_check: false,
                    witness: Some(CoveringWitness::AvoidingCover { member: t, vertex: v }),
                });
            }
        }
    }
    let pair_check = x.has_single_top_cell();
    if pair_check && d >= 1 {
        for (i, &a) in f.sets().iter().enumerate() {
            for &b in &f.sets()[i + 1..] {
                if a.is_disjoint(b) && !coverable_within(full.difference(a.union(b)), f.sets(), d - 1) {
                    return Ok(CoveringReport {
                        ok: false,
                        pair_check,
                        witness: Some(CoveringWitness::DisjointPair { first: a, second: b }),
                    });
                }
            }
        }
    }
    Ok(CoveringReport { ok: true, pair_check, witness: None })
}
