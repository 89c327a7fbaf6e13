//! Cohen-Macaulay checks for labelled cell complexes.

mod free;

use std::collections::HashSet;

use serde::Serialize;
use thiserror::Error;

use crate::complex::{AcyclicityOracle, CellComplex, ComplexError, Field};
use crate::monomial::{lcm_lattice, Monomial, MonomialError, MonomialLabelling, VertexFamily};
use crate::vertex_set::VertexSet;

pub use free::{build_free_complex, strand_homology, strand_oracle, CellularFreeComplex, FreeEntry, Generator};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum CmError {
    #[error(transparent)]
    Complex(#[from] ComplexError),
    #[error(transparent)]
    Monomial(#[from] MonomialError),
    #[error("labelling has {labels} labels but the complex has {vertices} vertices")]
    LabelCount { labels: usize, vertices: usize },
    #[error("family lives on {family} vertices but the complex has {vertices}")]
    FamilySize { family: usize, vertices: usize },
    #[error("vertex {0} cannot be covered")]
    Uncoverable(usize),
    #[error("differentials compose to a non-zero map from degree {degree} (entry {row}, {col})")]
    NotAComplex { degree: usize, row: usize, col: usize },
    #[error("the complex is void")]
    Void,
}

/// Minimum number of `sets` whose union contains `universe`, with the
/// indices of one optimal choice. `None` if no cover exists.
pub fn min_set_cover(universe: VertexSet, sets: &[VertexSet]) -> Option<Vec<usize>> {
    let reach = sets.iter().fold(VertexSet::EMPTY, |a, &s| a.union(s));
    if !universe.is_subset(reach) {
        return None;
    }
    let mut best = greedy_cover(universe, sets);
    let mut chosen = Vec::new();
    cover_search(universe, VertexSet::EMPTY, sets, &mut chosen, &mut best);
    Some(best)
}

fn greedy_cover(universe: VertexSet, sets: &[VertexSet]) -> Vec<usize> {
    let mut covered = VertexSet::EMPTY;
    let mut chosen = Vec::new();
    while !universe.is_subset(covered) {
        let (i, _) = sets
            .iter()
            .enumerate()
            .max_by_key(|(i, s)| (s.intersection(universe).difference(covered).len(), std::cmp::Reverse(*i)))
            .expect("cover exists");
        chosen.push(i);
        covered = covered.union(sets[i]);
    }
    chosen
}

fn cover_search(universe: VertexSet, covered: VertexSet, sets: &[VertexSet], chosen: &mut Vec<usize>, best: &mut Vec<usize>) {
    let Some(v) = universe.difference(covered).first() else {
        if chosen.len() < best.len() {
            best.clone_from(chosen);
        }
        return;
    };
    if chosen.len() + 1 >= best.len() {
        return;
    }
    // lower bound: remaining elements over the largest possible gain
    let left = universe.difference(covered);
    let gain = sets.iter().map(|s| s.intersection(left).len()).max().unwrap_or(0);
    if gain == 0 || chosen.len() + left.len().div_ceil(gain) >= best.len() {
        return;
    }
    for (i, &s) in sets.iter().enumerate() {
        if s.contains(v) {
            chosen.push(i);
            cover_search(universe, covered.union(s), sets, chosen, best);
            chosen.pop();
        }
    }
}

/// Codimension of the ideal generated by the labels: the fewest variables
/// meeting every label.
pub fn codimension(l: &MonomialLabelling) -> Result<usize, CmError> {
    let sets = l.variable_sets();
    let universe = VertexSet::full(l.n_vertices());
    min_set_cover(universe, &sets)
        .map(|c| c.len())
        .ok_or_else(|| CmError::Uncoverable(universe.difference(sets.iter().fold(VertexSet::EMPTY, |a, &s| a.union(s))).first().unwrap_or(0)))
}

/// Fewest members of `f` covering `[n]`.
pub fn codimension_family(f: &VertexFamily) -> Result<usize, CmError> {
    let universe = VertexSet::full(f.n());
    min_set_cover(universe, f.sets())
        .map(|c| c.len())
        .ok_or_else(|| CmError::Uncoverable(universe.difference(f.union()).first().unwrap_or(0)))
}

/// Outcome of the three family criteria.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct FamilyReport {
    pub dim: usize,
    /// No `dim` members cover the vertex set.
    pub cond1: bool,
    /// The complement of every union of members is acyclic.
    pub cond2: bool,
    /// Every covering face pair is separated by some member.
    pub cond3: bool,
    pub covers: bool,
    pub valid: bool,
    /// Members of a cover by at most `dim` sets.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub cover: Option<Vec<VertexSet>>,
    /// A union whose complement is not acyclic.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub bad_union: Option<VertexSet>,
    /// A covering pair `(face, cell)` no member separates.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub unseparated: Option<(VertexSet, VertexSet)>,
}

pub fn check_family_criteria(x: &CellComplex, f: &VertexFamily, field: Field) -> Result<FamilyReport, CmError> {
    let oracle = AcyclicityOracle::new(x, field)?;
    check_family_criteria_with(&oracle, f)
}

/// Same as [`check_family_criteria`] with a shared acyclicity cache.
pub fn check_family_criteria_with(oracle: &AcyclicityOracle<'_>, f: &VertexFamily) -> Result<FamilyReport, CmError> {
    let x = oracle.complex();
    if f.n() != x.n_vertices() {
        return Err(CmError::FamilySize { family: f.n(), vertices: x.n_vertices() });
    }
    let d = x.dim().ok_or(CmError::Void)?;
    let n = x.n_vertices();
    let universe = VertexSet::full(n);

    let cover = min_set_cover(universe, f.sets()).filter(|c| c.len() <= d);
    let cond1 = cover.is_none();

    let bad_union = subfamily_unions(f.sets()).into_iter().find(|&w| !oracle.is_acyclic(w.complement(n)));
    let cond2 = bad_union.is_none();

    let unseparated = first_unseparated(x, f.sets());
    let cond3 = unseparated.is_none();
    let covers = f.covers();

    Ok(FamilyReport {
        dim: d,
        cond1,
        cond2,
        cond3,
        covers,
        valid: cond1 && cond2 && cond3 && covers,
        cover: cover.map(|c| c.into_iter().map(|i| f.sets()[i]).collect()),
        bad_union,
        unseparated,
    })
}

/// All distinct unions of subfamilies, the empty union first.
pub fn subfamily_unions(sets: &[VertexSet]) -> Vec<VertexSet> {
    let mut seen: HashSet<VertexSet> = HashSet::from([VertexSet::EMPTY]);
    let mut out = vec![VertexSet::EMPTY];
    let mut i = 0;
    while i < out.len() {
        let u = out[i];
        for &s in sets {
            let w = u.union(s);
            if seen.insert(w) {
                out.push(w);
            }
        }
        i += 1;
    }
    out
}

/// First covering pair `F' ⊊ G'` with no member `S` such that
/// `S ∩ F' = ∅` and `S ∩ G' ≠ ∅`.
pub fn first_unseparated(x: &CellComplex, sets: &[VertexSet]) -> Option<(VertexSet, VertexSet)> {
    let mut seen = HashSet::new();
    x.covering_pairs()
        .into_iter()
        .filter(|p| seen.insert(*p))
        .find(|&(face, cell)| !sets.iter().any(|&s| s.is_disjoint(face) && s.intersects(cell)))
}

fn check_labels(x: &CellComplex, l: &MonomialLabelling) -> Result<(), CmError> {
    if l.n_vertices() != x.n_vertices() {
        return Err(CmError::LabelCount { labels: l.n_vertices(), vertices: x.n_vertices() });
    }
    Ok(())
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ResolutionCheck {
    pub ok: bool,
    pub lattice_points: usize,
    /// First lattice point whose subcomplex is not acyclic, with its vertices.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness: Option<(Monomial, VertexSet)>,
}

pub fn check_cellular_resolution(x: &CellComplex, l: &MonomialLabelling, field: Field) -> Result<ResolutionCheck, CmError> {
    check_labels(x, l)?;
    let oracle = AcyclicityOracle::new(x, field)?;
    let lattice = lcm_lattice(l);
    let witness = lattice.points.iter().find_map(|b| {
        let w = l.dividing_set(b);
        (!oracle.is_acyclic(w)).then(|| (b.clone(), w))
    });
    Ok(ResolutionCheck { ok: witness.is_none(), lattice_points: lattice.len(), witness })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct MinimalityCheck {
    pub ok: bool,
    /// A covering pair `(face, cell)` with equal multidegrees.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness: Option<(VertexSet, VertexSet)>,
}

pub fn check_minimal(x: &CellComplex, l: &MonomialLabelling) -> Result<MinimalityCheck, CmError> {
    check_labels(x, l)?;
    let witness = x.covering_pairs().into_iter().find(|&(face, cell)| l.multidegree(face) == l.multidegree(cell));
    Ok(MinimalityCheck { ok: witness.is_none(), witness })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum CmWitness {
    Multidegree { multidegree: Monomial, vertices: VertexSet },
    FacePair { face: VertexSet, cell: VertexSet },
    Codimension { codimension: usize, expected: usize, cover: Vec<usize> },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CmVerdict {
    pub field: Field,
    pub dim: usize,
    pub is_cellular_resolution: bool,
    pub is_minimal: bool,
    pub codimension: usize,
    /// Length of the cellular resolution, when it is one.
    pub projective_dimension: Option<usize>,
    pub is_cm: bool,
    pub witness: Option<CmWitness>,
}

pub fn check_cm_labelling(x: &CellComplex, l: &MonomialLabelling, field: Field) -> Result<CmVerdict, CmError> {
    let dim = x.dim().ok_or(CmError::Void)?;
    let res = check_cellular_resolution(x, l, field)?;
    let min = check_minimal(x, l)?;
    let cover = min_set_cover(VertexSet::full(l.n_vertices()), &l.variable_sets())
        .ok_or(CmError::Uncoverable(0))?;
    let codim = cover.len();
    let witness = if let Some((multidegree, vertices)) = res.witness.clone() {
        Some(CmWitness::Multidegree { multidegree, vertices })
    } else if let Some((face, cell)) = min.witness {
        Some(CmWitness::FacePair { face, cell })
    } else if codim != dim + 1 {
        Some(CmWitness::Codimension { codimension: codim, expected: dim + 1, cover })
    } else {
        None
    };
    Ok(CmVerdict {
        field,
        dim,
        is_cellular_resolution: res.ok,
        is_minimal: min.ok,
        codimension: codim,
        projective_dimension: res.ok.then_some(dim + 1),
        is_cm: res.ok && min.ok && codim == dim + 1,
        witness,
    })
}

/// Cell counts per dimension.
pub fn f_vector(x: &CellComplex) -> Vec<usize> {
    x.f_vector()
}

/// `f_i = f_{d-1-i}` for `i < d` and a single top cell.
pub fn f_symmetry(x: &CellComplex) -> bool {
    let f = x.f_vector();
    let Some(d) = x.dim() else {
        return false;
    };
    f[d] == 1 && (0..d).all(|i| f[i] == f[d - 1 - i])
}
