//! Regular cell complexes with signed boundary data.
//!
//! A complex is a dense list of cells. Every cell records its dimension, the
//! set of vertices it contains, and its boundary as `(cell id, incidence)`
//! pairs with incidence in `{+1, -1}`, or `0` when the orientation has not
//! been chosen yet. Unsigned complexes only support GF(2) computations until
//! [`assign_signs`] has been run on them.

mod homology;
mod linalg;
mod signs;

use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::vertex_set::{VertexSet, MAX_VERTICES};

pub use homology::{reduced_homology, reduced_homology_on, AcyclicityOracle, HomologyReport};
pub use linalg::{rank, SparseMatrix};
pub use signs::assign_signs;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ComplexError {
    #[error("complex has {0} vertices; at most {MAX_VERTICES} are supported")]
    TooManyVertices(usize),
    #[error("cell {cell} has id {id}; ids must be dense and match the cell's position")]
    NonDenseId { cell: usize, id: usize },
    #[error("cell {cell} references vertex {vertex} outside [0, {n_vertices})")]
    VertexOutOfRange { cell: usize, vertex: usize, n_vertices: usize },
    #[error("cell {cell} references missing boundary cell {face}")]
    BoundaryOutOfRange { cell: usize, face: usize },
    #[error("cell {cell} has incidence {sign} on face {face}; expected -1, 0 or +1")]
    BadSign { cell: usize, face: usize, sign: i8 },
    #[error("vertex {0} has no 0-cell")]
    MissingVertex(usize),
    #[error("vertex subset contains id {vertex} outside [0, {n_vertices})")]
    SubsetOutOfRange { vertex: usize, n_vertices: usize },
    #[error("field {0} needs signed incidences, but the complex has unset signs")]
    UnsignedComplex(Field),
    #[error("sign constraints are inconsistent around cell {cell} (cycle through faces {cycle:?})")]
    InconsistentSigns { cell: usize, cycle: Vec<usize> },
    #[error("cannot assign signs: {0}")]
    NotRegular(String),
}

/// Coefficient field for homology and rank computations.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Default)]
pub enum Field {
    #[default]
    Gf2,
    /// Prime field of the given odd characteristic.
    Gfp(u32),
    Rational,
}

impl Field {
    pub fn needs_signs(self) -> bool {
        !matches!(self, Field::Gf2)
    }
}

impl fmt::Display for Field {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Field::Gf2 => f.write_str("gf2"),
            Field::Gfp(p) => write!(f, "gf{p}"),
            Field::Rational => f.write_str("rational"),
        }
    }
}

impl FromStr for Field {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        let s = s.trim().to_ascii_lowercase();
        match s.as_str() {
            "gf2" | "2" => Ok(Field::Gf2),
            "rational" | "q" | "rationals" => Ok(Field::Rational),
            _ => {
                let digits = s.strip_prefix("gf").unwrap_or(&s);
                let p: u32 = digits
                    .parse()
                    .map_err(|_| format!("unknown field `{s}` (expected gf2, gf<p> or rational)"))?;
                if !is_prime(p) {
                    return Err(format!("{p} is not prime"));
                }
                Ok(if p == 2 { Field::Gf2 } else { Field::Gfp(p) })
            }
        }
    }
}

impl Serialize for Field {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for Field {
    fn deserialize<D: serde::Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let s = String::deserialize(deserializer)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

fn is_prime(p: u32) -> bool {
    p >= 2 && (2..).take_while(|d| d * d <= p).all(|d| p % d != 0)
}

/// One cell of a regular cell complex.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Cell {
    pub dim: usize,
    pub vertices: VertexSet,
    /// `(face id, incidence)`; incidence 0 means "unset".
    pub boundary: Vec<(usize, i8)>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CellComplex {
    n_vertices: usize,
    cells: Vec<Cell>,
    by_dim: Vec<Vec<usize>>,
}

impl CellComplex {
    /// Builds a complex after checking that every index is in range.
    ///
    /// Deeper structural properties (closure, diamond property, `∂∘∂ = 0`)
    /// are reported by [`validate_complex`] instead.
    pub fn new(n_vertices: usize, cells: Vec<Cell>) -> Result<Self, ComplexError> {
        if n_vertices > MAX_VERTICES {
            return Err(ComplexError::TooManyVertices(n_vertices));
        }
        let universe = VertexSet::full(n_vertices);
        for (id, cell) in cells.iter().enumerate() {
            if let Some(vertex) = cell.vertices.difference(universe).first() {
                return Err(ComplexError::VertexOutOfRange { cell: id, vertex, n_vertices });
            }
            for &(face, sign) in &cell.boundary {
                if face >= cells.len() {
                    return Err(ComplexError::BoundaryOutOfRange { cell: id, face });
                }
                if !(-1..=1).contains(&sign) {
                    return Err(ComplexError::BadSign { cell: id, face, sign });
                }
            }
        }
        let top = cells.iter().map(|c| c.dim + 1).max().unwrap_or(0);
        let mut by_dim = vec![Vec::new(); top];
        for (id, cell) in cells.iter().enumerate() {
            by_dim[cell.dim].push(id);
        }
        Ok(CellComplex { n_vertices, cells, by_dim })
    }

    /// The complex with no cells at all.
    pub fn void(n_vertices: usize) -> Self {
        CellComplex { n_vertices, cells: Vec::new(), by_dim: Vec::new() }
    }

    pub fn n_vertices(&self) -> usize {
        self.n_vertices
    }

    pub fn cells(&self) -> &[Cell] {
        &self.cells
    }

    pub fn cell(&self, id: usize) -> &Cell {
        &self.cells[id]
    }

    pub fn len(&self) -> usize {
        self.cells.len()
    }

    pub fn is_void(&self) -> bool {
        self.cells.is_empty()
    }

    /// Top dimension, or `None` for the void complex.
    pub fn dim(&self) -> Option<usize> {
        self.by_dim.len().checked_sub(1)
    }

    pub fn cells_of_dim(&self, dim: usize) -> &[usize] {
        self.by_dim.get(dim).map_or(&[], Vec::as_slice)
    }

    /// The set of vertices carried by 0-cells.
    pub fn vertex_set(&self) -> VertexSet {
        self.cells_of_dim(0).iter().map(|&c| self.cells[c].vertices).fold(VertexSet::EMPTY, VertexSet::union)
    }

    /// Cell counts per dimension.
    pub fn f_vector(&self) -> Vec<usize> {
        self.by_dim.iter().map(Vec::len).collect()
    }

    /// True when every incidence carries a sign.
    pub fn is_signed(&self) -> bool {
        self.cells.iter().all(|c| c.boundary.iter().all(|&(_, s)| s != 0))
    }

    /// The 0-cell carrying vertex `v`.
    pub fn vertex_cell(&self, v: usize) -> Option<usize> {
        self.cells_of_dim(0).iter().copied().find(|&c| self.cells[c].vertices.contains(v))
    }

    /// Covering pairs `(face, cell)` with `face` in the boundary of `cell`,
    /// expressed through vertex sets. Includes `(∅, v)` for every vertex.
    pub fn covering_pairs(&self) -> Vec<(VertexSet, VertexSet)> {
        let mut pairs = Vec::new();
        for cell in &self.cells {
            if cell.dim == 0 {
                pairs.push((VertexSet::EMPTY, cell.vertices));
            }
            for &(face, _) in &cell.boundary {
                pairs.push((self.cells[face].vertices, cell.vertices));
            }
        }
        pairs
    }

    /// Cells with exactly one top-dimensional cell, i.e. complexes shaped
    /// like the face complex of a single polytope.
    pub fn has_single_top_cell(&self) -> bool {
        self.by_dim.last().is_some_and(|top| top.len() == 1)
    }

    /// Applies a vertex permutation and returns whether it maps cells onto
    /// cells (as vertex sets).
    pub fn is_automorphism(&self, perm: &[usize]) -> bool {
        if perm.len() != self.n_vertices {
            return false;
        }
        let mut seen = vec![false; perm.len()];
        for &p in perm {
            if p >= perm.len() || std::mem::replace(&mut seen[p], true) {
                return false;
            }
        }
        let faces: HashMap<VertexSet, usize> = self.cells.iter().map(|c| (c.vertices, c.dim)).collect();
        self.cells
            .iter()
            .all(|c| faces.get(&c.vertices.map(perm)) == Some(&c.dim))
    }

    pub(crate) fn with_cells(&self, cells: Vec<Cell>) -> Self {
        CellComplex::new(self.n_vertices, cells).expect("cells derived from a valid complex")
    }
}

/// A violated structural invariant.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Diagnostic {
    /// A 0-cell without exactly one vertex, or with a non-empty boundary.
    MalformedVertexCell { cell: usize },
    DuplicateVertexCell { vertex: usize, cells: [usize; 2] },
    /// A vertex used by `cell` that has no 0-cell of its own.
    MissingVertexCell { vertex: usize, cell: usize },
    EmptyBoundary { cell: usize },
    BoundaryDimension { cell: usize, face: usize },
    RepeatedFace { cell: usize, face: usize },
    /// The cell's vertex set differs from the union of its boundary cells.
    VertexSetMismatch { cell: usize, expected: Vec<usize>, found: Vec<usize> },
    /// An edge must have exactly two endpoints.
    EdgeEndpoints { cell: usize, count: usize },
    /// A codimension-two face lies in the wrong number of boundary cells.
    Diamond { cell: usize, face: usize, count: usize },
    /// `∂∘∂` has a non-zero entry.
    BoundarySquare { cell: usize, face: usize, coefficient: i64 },
    /// The endpoints of an edge must carry opposite incidences.
    EdgeOrientation { cell: usize },
    /// Some but not all incidences are signed.
    PartiallySigned { cell: usize, face: usize },
}

impl fmt::Display for Diagnostic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", serde_json::to_string(self).unwrap_or_default())
    }
}

/// Checks every structural invariant of a regular cell complex.
///
/// Returns one diagnostic per violation; an empty list means the complex is
/// well formed.
pub fn validate_complex(x: &CellComplex) -> Vec<Diagnostic> {
    let mut out = Vec::new();
    let cells = x.cells();

    let mut vertex_owner: BTreeMap<usize, usize> = BTreeMap::new();
    for &c in x.cells_of_dim(0) {
        let cell = &cells[c];
        if cell.vertices.len() != 1 || !cell.boundary.is_empty() {
            out.push(Diagnostic::MalformedVertexCell { cell: c });
            continue;
        }
        let v = cell.vertices.first().unwrap();
        if let Some(&other) = vertex_owner.get(&v) {
            out.push(Diagnostic::DuplicateVertexCell { vertex: v, cells: [other, c] });
        } else {
            vertex_owner.insert(v, c);
        }
    }

    let fully_signed = x.is_signed();
    let any_signed = cells.iter().any(|c| c.boundary.iter().any(|&(_, s)| s != 0));
    let mut partial_reported = false;

    for (id, cell) in cells.iter().enumerate() {
        if cell.dim == 0 {
            continue;
        }
        for v in cell.vertices {
            if !vertex_owner.contains_key(&v) {
                out.push(Diagnostic::MissingVertexCell { vertex: v, cell: id });
            }
        }
        if cell.boundary.is_empty() {
            out.push(Diagnostic::EmptyBoundary { cell: id });
            continue;
        }
        let mut seen = Vec::with_capacity(cell.boundary.len());
        let mut union = VertexSet::EMPTY;
        for &(face, sign) in &cell.boundary {
            if cells[face].dim + 1 != cell.dim {
                out.push(Diagnostic::BoundaryDimension { cell: id, face });
            }
            if seen.contains(&face) {
                out.push(Diagnostic::RepeatedFace { cell: id, face });
            }
            seen.push(face);
            union = union.union(cells[face].vertices);
            if any_signed && !fully_signed && sign == 0 && !partial_reported {
                out.push(Diagnostic::PartiallySigned { cell: id, face });
                partial_reported = true;
            }
        }
        if union != cell.vertices {
            out.push(Diagnostic::VertexSetMismatch {
                cell: id,
                expected: union.to_vec(),
                found: cell.vertices.to_vec(),
            });
        }
        if cell.dim == 1 && cell.boundary.len() != 2 {
            out.push(Diagnostic::EdgeEndpoints { cell: id, count: cell.boundary.len() });
        }

        if cell.dim >= 2 {
            // count how many boundary cells contain each codimension-two face,
            // and accumulate the integer coefficient of ∂∘∂
            let mut count: BTreeMap<usize, (usize, i64)> = BTreeMap::new();
            for &(face, s1) in &cell.boundary {
                for &(ridge, s2) in &cells[face].boundary {
                    let entry = count.entry(ridge).or_default();
                    entry.0 += 1;
                    entry.1 += i64::from(s1) * i64::from(s2);
                }
            }
            for (&ridge, &(n, coefficient)) in &count {
                if n != 2 {
                    out.push(Diagnostic::Diamond { cell: id, face: ridge, count: n });
                } else if fully_signed && coefficient != 0 {
                    out.push(Diagnostic::BoundarySquare { cell: id, face: ridge, coefficient });
                }
            }
        } else if fully_signed && cell.boundary.len() == 2 {
            // ∂∘∂ into the augmentation: the two endpoints need opposite signs
            let total: i64 = cell.boundary.iter().map(|&(_, s)| i64::from(s)).sum();
            if total != 0 {
                out.push(Diagnostic::EdgeOrientation { cell: id });
            }
        }
    }
    out
}

/// The subcomplex of cells whose vertex sets lie inside `w`.
///
/// Vertex ids are kept, so restrictions compose:
/// `restrict(restrict(x, w), u) == restrict(x, w ∩ u)`.
pub fn restrict(x: &CellComplex, w: VertexSet) -> Result<CellComplex, ComplexError> {
    if let Some(vertex) = w.difference(VertexSet::full(x.n_vertices)).first() {
        return Err(ComplexError::SubsetOutOfRange { vertex, n_vertices: x.n_vertices });
    }
    let mut new_id = vec![usize::MAX; x.len()];
    let mut kept = Vec::new();
    for (id, cell) in x.cells().iter().enumerate() {
        if cell.vertices.is_subset(w) {
            new_id[id] = kept.len();
            kept.push(id);
        }
    }
    let cells = kept
        .iter()
        .map(|&id| {
            let cell = x.cell(id);
            Cell {
                dim: cell.dim,
                vertices: cell.vertices,
                boundary: cell.boundary.iter().map(|&(f, s)| (new_id[f], s)).collect(),
            }
        })
        .collect();
    Ok(x.with_cells(cells))
}

/// Incrementally builds complexes whose cell vertex sets are derived from
/// their boundaries.
#[derive(Debug, Default)]
pub struct ComplexBuilder {
    n_vertices: usize,
    cells: Vec<Cell>,
    vertex_cells: Vec<usize>,
}

impl ComplexBuilder {
    /// Starts a complex whose first `n_vertices` cells are the 0-cells
    /// `0, 1, ..., n_vertices - 1` (so vertex `v` has cell id `v`).
    pub fn with_vertices(n_vertices: usize) -> Self {
        let mut b = ComplexBuilder { n_vertices, ..Default::default() };
        for v in 0..n_vertices {
            b.vertex_cells.push(b.cells.len());
            b.cells.push(Cell { dim: 0, vertices: VertexSet::singleton(v), boundary: Vec::new() });
        }
        b
    }

    pub fn vertex_cell(&self, v: usize) -> usize {
        self.vertex_cells[v]
    }

    pub fn cell(&self, id: usize) -> &Cell {
        &self.cells[id]
    }

    /// Adds a cell with the given boundary; returns its id.
    pub fn add_cell(&mut self, boundary: Vec<(usize, i8)>) -> usize {
        let dim = self.cells[boundary[0].0].dim + 1;
        let vertices = boundary.iter().fold(VertexSet::EMPTY, |acc, &(f, _)| acc.union(self.cells[f].vertices));
        self.cells.push(Cell { dim, vertices, boundary });
        self.cells.len() - 1
    }

    /// Edge from `tail` to `head`, with boundary `head - tail`.
    pub fn add_edge(&mut self, tail: usize, head: usize) -> usize {
        let (t, h) = (self.vertex_cells[tail], self.vertex_cells[head]);
        self.add_cell(vec![(t, -1), (h, 1)])
    }

    pub fn len(&self) -> usize {
        self.cells.len()
    }

    pub fn is_empty(&self) -> bool {
        self.cells.is_empty()
    }

    pub fn build(self) -> CellComplex {
        CellComplex::new(self.n_vertices, self.cells).expect("builder keeps indices in range")
    }
}

/// JSON wire form: `{"n_vertices": int, "cells": [{"id", "dim", "vertices", "boundary": [[id, sign]]}]}`.
#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct ComplexDoc {
    n_vertices: usize,
    cells: Vec<CellDoc>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct CellDoc {
    id: usize,
    dim: usize,
    vertices: VertexSet,
    boundary: Vec<(usize, i8)>,
}

impl TryFrom<ComplexDoc> for CellComplex {
    type Error = ComplexError;

    fn try_from(doc: ComplexDoc) -> Result<Self, ComplexError> {
        let mut cells = Vec::with_capacity(doc.cells.len());
        for (pos, c) in doc.cells.into_iter().enumerate() {
            if c.id != pos {
                return Err(ComplexError::NonDenseId { cell: pos, id: c.id });
            }
            cells.push(Cell { dim: c.dim, vertices: c.vertices, boundary: c.boundary });
        }
        let x = CellComplex::new(doc.n_vertices, cells)?;
        if let Some(v) = VertexSet::full(x.n_vertices).difference(x.vertex_set()).first() {
            return Err(ComplexError::MissingVertex(v));
        }
        Ok(x)
    }
}

impl From<&CellComplex> for ComplexDoc {
    fn from(x: &CellComplex) -> Self {
        ComplexDoc {
            n_vertices: x.n_vertices,
            cells: x
                .cells
                .iter()
                .enumerate()
                .map(|(id, c)| CellDoc { id, dim: c.dim, vertices: c.vertices, boundary: c.boundary.clone() })
                .collect(),
        }
    }
}

impl Serialize for CellComplex {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        ComplexDoc::from(self).serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for CellComplex {
    fn deserialize<D: serde::Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let doc = ComplexDoc::deserialize(deserializer)?;
        CellComplex::try_from(doc).map_err(serde::de::Error::custom)
    }
}
