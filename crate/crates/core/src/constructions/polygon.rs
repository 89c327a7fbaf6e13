//! Subdivided polygons, strings and the polygon families.

use serde::Serialize;

use super::ConstructionError;
use crate::complex::{CellComplex, ComplexBuilder};
use crate::monomial::VertexFamily;
use crate::vertex_set::VertexSet;

/// Cyclic run `{start, start + 1, ..., end}` modulo `modulus`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct StringSubset {
    pub start: usize,
    pub end: usize,
    pub modulus: usize,
}

impl StringSubset {
    pub fn new(start: usize, end: usize, modulus: usize) -> Self {
        debug_assert!(start < modulus && end < modulus);
        StringSubset { start, end, modulus }
    }

    /// The string of `len` vertices starting at `start`.
    pub fn with_len(start: usize, len: usize, modulus: usize) -> Self {
        debug_assert!((1..=modulus).contains(&len));
        Self::new(start % modulus, (start + len - 1) % modulus, modulus)
    }

    pub fn len(&self) -> usize {
        (self.end + self.modulus - self.start) % self.modulus + 1
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn to_set(&self) -> VertexSet {
        (0..self.len()).map(|k| (self.start + k) % self.modulus).collect()
    }
}

/// `[i, j]` as a vertex set.
pub fn string(i: usize, j: usize, n: usize) -> VertexSet {
    StringSubset::new(i % n, j % n, n).to_set()
}

/// All `n` strings of length `len` on the `n`-gon, by starting vertex.
pub fn strings_of_length(n: usize, len: usize) -> Vec<VertexSet> {
    (0..n).map(|i| StringSubset::with_len(i, len, n).to_set()).collect()
}

/// Whether `s` is a cyclic run of consecutive vertices of the `n`-gon.
pub fn is_string(s: VertexSet, n: usize) -> bool {
    if s.is_empty() {
        return false;
    }
    if s.len() == n {
        return true;
    }
    // exactly one vertex of s has its predecessor outside s
    s.iter().filter(|&v| !s.contains((v + n - 1) % n)).count() == 1
}

/// The `n`-gon disk cut by non-crossing chords.
///
/// Rim edge `i` runs from `i` to `i + 1 (mod n)`; chords run from the smaller
/// to the larger endpoint. Each 2-cell is traversed in increasing cyclic
/// order and takes sign `+1` on edges oriented along the traversal.
pub fn subdivided_polygon(n: usize, chords: &[(usize, usize)]) -> Result<CellComplex, ConstructionError> {
    if n < 3 {
        return Err(ConstructionError::Parameter(format!("a polygon needs at least 3 vertices, got {n}")));
    }
    if n > crate::vertex_set::MAX_VERTICES {
        return Err(ConstructionError::Parameter(format!("{n} vertices exceed the supported maximum")));
    }
    let mut b = ComplexBuilder::with_vertices(n);
    let mut edges: Vec<((usize, usize), usize)> = (0..n).map(|i| ((i, (i + 1) % n), b.add_edge(i, (i + 1) % n))).collect();
    let mut faces: Vec<Vec<usize>> = vec![(0..n).collect()];

    for &(u, v) in chords {
        let (lo, hi) = (u.min(v), u.max(v));
        if hi >= n || hi - lo < 2 || (lo == 0 && hi == n - 1) {
            return Err(ConstructionError::Parameter(format!("({u}, {v}) is not a chord of the {n}-gon")));
        }
        if edges.iter().any(|&(e, _)| e == (lo, hi)) {
            return Err(ConstructionError::Parameter(format!("chord ({lo}, {hi}) given twice")));
        }
        let Some(k) = faces.iter().position(|f| f.contains(&lo) && f.contains(&hi)) else {
            return Err(ConstructionError::Parameter(format!("chord ({lo}, {hi}) crosses another chord")));
        };
        let face = faces.remove(k);
        let (i, j) = (face.iter().position(|&w| w == lo).unwrap(), face.iter().position(|&w| w == hi).unwrap());
        let (i, j) = (i.min(j), i.max(j));
        let inner = face[i..=j].to_vec();
        let outer: Vec<usize> = face[j..].iter().chain(&face[..=i]).copied().collect();
        faces.insert(k, outer);
        faces.insert(k, inner);
        edges.push(((lo, hi), b.add_edge(lo, hi)));
    }

    for face in &faces {
        let m = face.len();
        let boundary = (0..m)
            .map(|k| {
                let (a, c) = (face[k], face[(k + 1) % m]);
                if let Some(&(_, e)) = edges.iter().find(|&&(p, _)| p == (a, c)) {
                    (e, 1)
                } else {
                    let &(_, e) = edges.iter().find(|&&(p, _)| p == (c, a)).expect("face edges exist");
                    (e, -1)
                }
            })
            .collect();
        b.add_cell(boundary);
    }
    Ok(b.build())
}

/// The `n`-gon disk with a single 2-cell.
pub fn polygon_complex(n: usize) -> Result<CellComplex, ConstructionError> {
    subdivided_polygon(n, &[])
}

fn check_chord(n: usize, a: usize) -> Result<(), ConstructionError> {
    if a < 2 || 2 * a > n {
        return Err(ConstructionError::Parameter(format!("chord (0, {a}) needs 2 <= a and 2a <= n = {n}")));
    }
    Ok(())
}

/// The `n`-gon split by the chord `{0, a}`.
pub fn chord_complex(n: usize, a: usize) -> Result<CellComplex, ConstructionError> {
    check_chord(n, a)?;
    subdivided_polygon(n, &[(0, a)])
}

/// All strings of length `r` on the `(2r + 1)`-gon.
pub fn polygon_family(n: usize) -> Result<VertexFamily, ConstructionError> {
    if n < 3 {
        return Err(ConstructionError::Parameter(format!("a polygon needs at least 3 vertices, got {n}")));
    }
    if n % 2 == 0 {
        return Err(ConstructionError::EvenPolygon(n));
    }
    Ok(VertexFamily::new(n, strings_of_length(n, (n - 1) / 2))?)
}

/// The two maximal families on the chord complex `(n, a)`.
pub fn chord_families(n: usize, a: usize) -> Result<(VertexFamily, VertexFamily), ConstructionError> {
    check_chord(n, a)?;
    let r = n / 2;
    let inner = string(1, a - 1, n);
    let chord_span = string(0, a, n);
    if n % 2 == 1 {
        let mut f1 = strings_of_length(n, r);
        f1.push(inner);

        let mut f2: Vec<VertexSet> = strings_of_length(n, r + 1).into_iter().filter(|s| chord_span.is_subset(*s)).collect();
        f2.extend(strings_of_length(n, r).into_iter().filter(|s| {
            (s.contains(0) && !s.contains(a - 1)) || (s.contains(a) && !s.contains(1))
        }));
        if r > 1 {
            f2.extend(strings_of_length(n, r - 1).into_iter().filter(|s| s.is_disjoint(chord_span)));
        }
        f2.push(inner);
        Ok((VertexFamily::new(n, f1)?, VertexFamily::new(n, f2)?))
    } else {
        let mut f1: Vec<VertexSet> = strings_of_length(n, r).into_iter().filter(|s| s.contains(0)).collect();
        let avoid = VertexSet::from_bits(0b11);
        f1.extend(strings_of_length(n, r - 1).into_iter().filter(|s| s.is_disjoint(avoid)));
        f1.push(inner);
        let f1 = VertexFamily::new(n, f1)?;
        let f2 = f1.map(&chord_reflection(n, a));
        Ok((f1, f2))
    }
}

/// The reflection `i ↦ a - i (mod n)`, which fixes the chord `{0, a}`.
pub fn chord_reflection(n: usize, a: usize) -> Vec<usize> {
    (0..n).map(|i| (a + n - i) % n).collect()
}

/// All `2n` symmetries of the `n`-gon, identity first.
pub fn dihedral_group(n: usize) -> Vec<Vec<usize>> {
    let mut g = Vec::with_capacity(2 * n);
    for k in 0..n {
        g.push((0..n).map(|i| (i + k) % n).collect());
    }
    for k in 0..n {
        g.push((0..n).map(|i| (k + n - i) % n).collect());
    }
    g
}
