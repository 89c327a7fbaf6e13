//! The free complex supported on a labelled cell complex.

use std::collections::BTreeMap;

use serde::Serialize;

use super::CmError;
use crate::complex::{rank, reduced_homology_on, CellComplex, ComplexError, Field, SparseMatrix};
use crate::monomial::{Monomial, MonomialLabelling};

/// A basis element: a cell (or the empty face in degree 0) and its multidegree.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Generator {
    pub cell: Option<usize>,
    pub multidegree: Monomial,
}

/// Entry `sign · monomial` of a differential matrix.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct FreeEntry {
    pub row: usize,
    pub col: usize,
    pub sign: i8,
    pub monomial: Monomial,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CellularFreeComplex {
    pub n_variables: usize,
    /// `generators[i]` spans homological degree `i`.
    pub generators: Vec<Vec<Generator>>,
    /// `differentials[i]` maps degree `i + 1` to degree `i`.
    pub differentials: Vec<Vec<FreeEntry>>,
}

impl CellularFreeComplex {
    pub fn ranks(&self) -> Vec<usize> {
        self.generators.iter().map(Vec::len).collect()
    }

    /// First non-zero entry of a composition `d_i ∘ d_{i+1}`, as
    /// `(degree of the source, row, col)`.
    pub fn composition_defect(&self) -> Option<(usize, usize, usize)> {
        for i in 1..self.differentials.len() {
            let (lower, upper) = (&self.differentials[i - 1], &self.differentials[i]);
            let mut by_row: BTreeMap<usize, Vec<&FreeEntry>> = BTreeMap::new();
            for e in lower {
                by_row.entry(e.col).or_default().push(e);
            }
            let mut sum: BTreeMap<(usize, usize), i64> = BTreeMap::new();
            for u in upper {
                for l in by_row.get(&u.row).into_iter().flatten() {
                    // both products carry the same monomial, so only signs add up
                    debug_assert_eq!(u.monomial.mul(&l.monomial), self.generators[i + 1][u.col].multidegree.excess_over(&self.generators[i - 1][l.row].multidegree));
                    *sum.entry((l.row, u.col)).or_default() += i64::from(u.sign) * i64::from(l.sign);
                }
            }
            if let Some((&(row, col), _)) = sum.iter().find(|(_, &v)| v != 0) {
                return Some((i + 1, row, col));
            }
        }
        None
    }

    /// Graded Betti numbers as `(homological degree, total degree) -> count`.
    pub fn graded_betti(&self) -> BTreeMap<(usize, u32), usize> {
        let mut table = BTreeMap::new();
        for (i, gens) in self.generators.iter().enumerate() {
            for g in gens {
                *table.entry((i, g.multidegree.degree())).or_insert(0) += 1;
            }
        }
        table
    }
}

/// Reads off the free complex of `l` on `x` and checks `d∘d = 0`.
pub fn build_free_complex(x: &CellComplex, l: &MonomialLabelling) -> Result<CellularFreeComplex, CmError> {
    if l.n_vertices() != x.n_vertices() {
        return Err(CmError::LabelCount { labels: l.n_vertices(), vertices: x.n_vertices() });
    }
    if !x.is_signed() {
        return Err(ComplexError::UnsignedComplex(Field::Rational).into());
    }
    let dim = x.dim().ok_or(CmError::Void)?;
    let r = l.n_variables();
    let mut generators = vec![vec![Generator { cell: None, multidegree: Monomial::one(r) }]];
    let mut pos = vec![0usize; x.len()];
    for d in 0..=dim {
        let gens = x
            .cells_of_dim(d)
            .iter()
            .enumerate()
            .map(|(i, &c)| {
                pos[c] = i;
                Generator { cell: Some(c), multidegree: l.multidegree(x.cell(c).vertices) }
            })
            .collect();
        generators.push(gens);
    }

    let mut differentials = Vec::with_capacity(dim + 1);
    differentials.push(
        generators[1]
            .iter()
            .enumerate()
            .map(|(col, g)| FreeEntry { row: 0, col, sign: 1, monomial: g.multidegree.clone() })
            .collect(),
    );
    for d in 1..=dim {
        let mut entries = Vec::new();
        for (col, &c) in x.cells_of_dim(d).iter().enumerate() {
            let top = &generators[d + 1][col].multidegree;
            for &(face, sign) in &x.cell(c).boundary {
                let row = pos[face];
                let monomial = top.quotient(&generators[d][row].multidegree).expect("faces have smaller multidegree");
                entries.push(FreeEntry { row, col, sign, monomial });
            }
        }
        differentials.push(entries);
    }

    let fc = CellularFreeComplex { n_variables: r, generators, differentials };
    if let Some((degree, row, col)) = fc.composition_defect() {
        return Err(CmError::NotAComplex { degree, row, col });
    }
    Ok(fc)
}

/// Homology of the degree-`b` strand, keyed by homological degree minus
/// one so it lines up with reduced cell homology (`-1` is degree 0).
///
/// `None` when the strand maps do not compose to zero over `field`.
pub fn strand_homology(fc: &CellularFreeComplex, b: &Monomial, field: Field) -> Option<BTreeMap<i64, usize>> {
    let mut index: Vec<Vec<Option<usize>>> = Vec::with_capacity(fc.generators.len());
    let mut sizes = Vec::with_capacity(fc.generators.len());
    for gens in &fc.generators {
        let mut k = 0;
        index.push(
            gens.iter()
                .map(|g| {
                    g.multidegree.divides(b).then(|| {
                        k += 1;
                        k - 1
                    })
                })
                .collect(),
        );
        sizes.push(k);
    }
    if !strand_composes(fc, &index, field) {
        return None;
    }
    // ranks[i] = rank of the strand map from degree i to i-1
    let mut ranks = vec![0usize; sizes.len() + 1];
    for (i, entries) in fc.differentials.iter().enumerate() {
        let mut m = SparseMatrix::new(sizes[i], sizes[i + 1]);
        for e in entries {
            if let (Some(r), Some(c)) = (index[i][e.row], index[i + 1][e.col]) {
                m.push(r, c, i64::from(e.sign));
            }
        }
        ranks[i + 1] = rank(&m, field);
    }
    let mut out = BTreeMap::new();
    for (i, &c) in sizes.iter().enumerate() {
        let h = c - ranks[i] - ranks[i + 1];
        if h != 0 {
            out.insert(i as i64 - 1, h);
        }
    }
    Some(out)
}

fn strand_composes(fc: &CellularFreeComplex, index: &[Vec<Option<usize>>], field: Field) -> bool {
    let vanishes = |v: i64| match field {
        Field::Gf2 => v % 2 == 0,
        Field::Gfp(p) => v % i64::from(p) == 0,
        Field::Rational => v == 0,
    };
    for i in 1..fc.differentials.len() {
        let mut lower: BTreeMap<usize, Vec<&FreeEntry>> = BTreeMap::new();
        for e in &fc.differentials[i - 1] {
            if index[i - 1][e.row].is_some() && index[i][e.col].is_some() {
                lower.entry(e.col).or_default().push(e);
            }
        }
        let mut sum: BTreeMap<(usize, usize), i64> = BTreeMap::new();
        for u in &fc.differentials[i] {
            if index[i + 1][u.col].is_none() {
                continue;
            }
            for l in lower.get(&u.row).into_iter().flatten() {
                *sum.entry((l.row, u.col)).or_default() += i64::from(u.sign) * i64::from(l.sign);
            }
        }
        if !sum.values().all(|&v| vanishes(v)) {
            return false;
        }
    }
    true
}

/// Compares the degree-`b` strand of the free complex with the reduced
/// homology of the subcomplex on the vertices whose labels divide `b`.
pub fn strand_oracle(x: &CellComplex, l: &MonomialLabelling, b: &Monomial, field: Field) -> Result<bool, CmError> {
    let fc = build_free_complex(x, l)?;
    strand_matches(&fc, x, l, b, field)
}

pub(crate) fn strand_matches(
    fc: &CellularFreeComplex,
    x: &CellComplex,
    l: &MonomialLabelling,
    b: &Monomial,
    field: Field,
) -> Result<bool, CmError> {
    let w = l.dividing_set(b);
    let expected = if w.is_empty() {
        // only the degree-0 generator survives
        BTreeMap::from([(-1, 1)])
    } else {
        reduced_homology_on(x, w, field)?.reduced_betti
    };
    Ok(strand_homology(fc, b, field) == Some(expected))
}
