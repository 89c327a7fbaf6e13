//! Reduced homology of (restricted) cell complexes over a field.

use std::collections::{BTreeMap, HashMap};
use std::sync::atomic::{AtomicU8, Ordering};
use std::sync::RwLock;

use serde::Serialize;

use super::linalg::{rank, SparseMatrix};
use super::{CellComplex, ComplexError, Field};
use crate::vertex_set::VertexSet;

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct HomologyReport {
    pub field: Field,
    /// Non-zero reduced Betti numbers, keyed by dimension (`-1` is the
    /// augmentation degree).
    pub reduced_betti: BTreeMap<i64, usize>,
    pub acyclic: bool,
}

/// Reduced homology of `x` over `field`.
pub fn reduced_homology(x: &CellComplex, field: Field) -> Result<HomologyReport, ComplexError> {
    reduced_homology_on(x, x.vertex_set(), field)
}

/// Reduced homology of the restriction of `x` to the vertex set `w`,
/// computed without materialising the subcomplex.
pub fn reduced_homology_on(x: &CellComplex, w: VertexSet, field: Field) -> Result<HomologyReport, ComplexError> {
    if field.needs_signs() && !x.is_signed() {
        return Err(ComplexError::UnsignedComplex(field));
    }
    if let Some(vertex) = w.difference(VertexSet::full(x.n_vertices())).first() {
        return Err(ComplexError::SubsetOutOfRange { vertex, n_vertices: x.n_vertices() });
    }
    Ok(homology_unchecked(x, w, field))
}

/// Cells of the restriction grouped by dimension, plus each cell's position
/// inside its dimension.
struct Restricted {
    by_dim: Vec<Vec<usize>>,
    pos: Vec<usize>,
}

fn restricted(x: &CellComplex, w: VertexSet) -> Restricted {
    let mut by_dim: Vec<Vec<usize>> = Vec::new();
    let mut pos = vec![usize::MAX; x.len()];
    for d in 0..=x.dim().unwrap_or(0) {
        let kept: Vec<usize> = x.cells_of_dim(d).iter().copied().filter(|&c| x.cell(c).vertices.is_subset(w)).collect();
        if kept.is_empty() {
            break;
        }
        for (i, &c) in kept.iter().enumerate() {
            pos[c] = i;
        }
        by_dim.push(kept);
    }
    Restricted { by_dim, pos }
}

fn homology_unchecked(x: &CellComplex, w: VertexSet, field: Field) -> HomologyReport {
    let r = restricted(x, w);
    let mut reduced_betti = BTreeMap::new();
    if !r.by_dim.is_empty() {
        // ranks[k] = rank of ∂_k : C_k -> C_{k-1}; ∂_0 is the augmentation
        let top = r.by_dim.len();
        let mut ranks = vec![0usize; top + 1];
        ranks[0] = 1;
        for (k, slot) in ranks.iter_mut().enumerate().take(top).skip(1) {
            *slot = boundary_rank(x, &r, k, field);
        }
        // β̃_{-1} = 1 - rank(augmentation) = 0 for a non-void complex
        for k in 0..top {
            let beta = r.by_dim[k].len() - ranks[k] - ranks[k + 1];
            if beta != 0 {
                reduced_betti.insert(k as i64, beta);
            }
        }
    }
    HomologyReport { field, acyclic: reduced_betti.is_empty(), reduced_betti }
}

fn boundary_rank(x: &CellComplex, r: &Restricted, k: usize, field: Field) -> usize {
    let (rows, cols) = (&r.by_dim[k - 1], &r.by_dim[k]);
    let mut m = SparseMatrix::new(rows.len(), cols.len());
    for (j, &c) in cols.iter().enumerate() {
        for &(face, sign) in &x.cell(c).boundary {
            let s = if sign == 0 { 1 } else { i64::from(sign) };
            m.push(r.pos[face], j, s);
        }
    }
    rank(&m, field)
}

/// Reduced Euler characteristic of the restriction to `w` (`0` when void).
fn reduced_euler(x: &CellComplex, w: VertexSet) -> i64 {
    let mut chi = 0i64;
    let mut any = false;
    for c in x.cells() {
        if c.vertices.is_subset(w) {
            any = true;
            chi += if c.dim % 2 == 0 { 1 } else { -1 };
        }
    }
    if any {
        chi - 1
    } else {
        0
    }
}

const DENSE_LIMIT: usize = 22;
const UNKNOWN: u8 = 0;
const ACYCLIC: u8 = 1;
const NOT_ACYCLIC: u8 = 2;

/// Memoised acyclicity test for vertex-induced subcomplexes of one complex.
///
/// Safe to share between threads. Verdicts never depend on cache state.
pub struct AcyclicityOracle<'a> {
    x: &'a CellComplex,
    field: Field,
    dense: Vec<AtomicU8>,
    sparse: RwLock<HashMap<VertexSet, bool>>,
}

impl<'a> AcyclicityOracle<'a> {
    pub fn new(x: &'a CellComplex, field: Field) -> Result<Self, ComplexError> {
        if field.needs_signs() && !x.is_signed() {
            return Err(ComplexError::UnsignedComplex(field));
        }
        let dense = if x.n_vertices() <= DENSE_LIMIT {
            (0..1usize << x.n_vertices()).map(|_| AtomicU8::new(UNKNOWN)).collect()
        } else {
            Vec::new()
        };
        Ok(AcyclicityOracle { x, field, dense, sparse: RwLock::new(HashMap::new()) })
    }

    pub fn complex(&self) -> &'a CellComplex {
        self.x
    }

    pub fn field(&self) -> Field {
        self.field
    }

    /// Whether the restriction of the complex to `w` is acyclic.
    ///
    /// `w` must lie inside `[0, n_vertices)`.
    pub fn is_acyclic(&self, w: VertexSet) -> bool {
        debug_assert!(w.is_subset(VertexSet::full(self.x.n_vertices())));
        if !self.dense.is_empty() {
            let slot = &self.dense[w.bits() as usize];
            match slot.load(Ordering::Relaxed) {
                ACYCLIC => return true,
                NOT_ACYCLIC => return false,
                _ => {}
            }
            let verdict = self.compute(w);
            slot.store(if verdict { ACYCLIC } else { NOT_ACYCLIC }, Ordering::Relaxed);
            return verdict;
        }
        if let Some(&v) = self.sparse.read().expect("cache lock").get(&w) {
            return v;
        }
        let verdict = self.compute(w);
        self.sparse.write().expect("cache lock").insert(w, verdict);
        verdict
    }

    fn compute(&self, w: VertexSet) -> bool {
        if reduced_euler(self.x, w) != 0 {
            return false;
        }
        homology_unchecked(self.x, w, self.field).acyclic
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::complex::{restrict, Cell, ComplexBuilder};
    use crate::constructions::polygon_complex;
    use proptest::prelude::*;

    fn set(v: &[usize]) -> VertexSet {
        v.iter().collect()
    }

    fn cycle(n: usize) -> CellComplex {
        let mut b = ComplexBuilder::with_vertices(n);
        for i in 0..n {
            b.add_edge(i, (i + 1) % n);
        }
        b.build()
    }

    #[test]
    fn circle_has_one_loop() {
        for field in [Field::Gf2, Field::Gfp(3), Field::Rational] {
            let h = reduced_homology(&cycle(5), field).unwrap();
            assert_eq!(h.reduced_betti, BTreeMap::from([(1, 1)]));
            assert!(!h.acyclic);
        }
    }

    #[test]
    fn disk_is_acyclic() {
        let x = polygon_complex(5).unwrap();
        for field in [Field::Gf2, Field::Rational] {
            assert!(reduced_homology(&x, field).unwrap().acyclic);
        }
    }

    #[test]
    fn two_points_and_void() {
        let x = polygon_complex(5).unwrap();
        let h = reduced_homology_on(&x, set(&[0, 2]), Field::Gf2).unwrap();
        assert_eq!(h.reduced_betti, BTreeMap::from([(0, 1)]));
        let void = reduced_homology_on(&x, VertexSet::EMPTY, Field::Rational).unwrap();
        assert!(void.acyclic && void.reduced_betti.is_empty());
        assert!(reduced_homology(&CellComplex::void(0), Field::Gf2).unwrap().acyclic);
    }

    #[test]
    fn unsigned_complex_needs_gf2() {
        let cells = vec![
            Cell { dim: 0, vertices: set(&[0]), boundary: vec![] },
            Cell { dim: 0, vertices: set(&[1]), boundary: vec![] },
            Cell { dim: 1, vertices: set(&[0, 1]), boundary: vec![(0, 0), (1, 0)] },
        ];
        let x = CellComplex::new(2, cells).unwrap();
        assert!(reduced_homology(&x, Field::Gf2).unwrap().acyclic);
        assert_eq!(reduced_homology(&x, Field::Rational), Err(ComplexError::UnsignedComplex(Field::Rational)));
        assert!(AcyclicityOracle::new(&x, Field::Gfp(5)).is_err());
    }

    #[test]
    fn oracle_matches_direct_computation() {
        let x = polygon_complex(6).unwrap();
        let oracle = AcyclicityOracle::new(&x, Field::Rational).unwrap();
        for bits in 0..64u64 {
            let w = VertexSet::from_bits(bits);
            let direct = reduced_homology_on(&x, w, Field::Rational).unwrap().acyclic;
            assert_eq!(oracle.is_acyclic(w), direct);
            assert_eq!(oracle.is_acyclic(w), direct);
        }
    }

    proptest! {
        #[test]
        fn euler_characteristic_matches_betti(bits in 0u64..128, field in prop_oneof![Just(Field::Gf2), Just(Field::Gfp(3)), Just(Field::Rational)]) {
            let x = polygon_complex(7).unwrap();
            let w = VertexSet::from_bits(bits);
            let h = reduced_homology_on(&x, w, field).unwrap();
            let alt: i64 = h.reduced_betti.iter().map(|(&d, &b)| if d % 2 == 0 { b as i64 } else { -(b as i64) }).sum();
            prop_assert_eq!(alt, reduced_euler(&x, w));
        }

        #[test]
        fn restriction_composes(a in 0u64..128, b in 0u64..128) {
            let x = polygon_complex(7).unwrap();
            let (w, u) = (VertexSet::from_bits(a), VertexSet::from_bits(b));
            let lhs = restrict(&restrict(&x, w).unwrap(), u).unwrap();
            let rhs = restrict(&x, w.intersection(u)).unwrap();
            prop_assert_eq!(lhs, rhs);
        }
    }
}
