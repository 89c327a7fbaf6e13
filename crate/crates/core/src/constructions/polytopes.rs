//! Pyramids, elongated pyramids, the wheel polytope and bipyramids.

use super::ConstructionError;
use crate::complex::{assign_signs, Cell, CellComplex, ComplexBuilder};
use crate::monomial::VertexFamily;
use crate::vertex_set::{VertexSet, MAX_VERTICES};

/// Cone over `x` with apex `n = x.n_vertices()`.
///
/// Cell `c` keeps its id, the apex gets id `x.len()` and `cone(c)` gets id
/// `x.len() + 1 + c`. Boundaries follow the mapping cone:
/// `∂ cone(v) = v - t` and `∂ cone(c) = c - cone(∂c)`.
pub fn pyramid(x: &CellComplex) -> Result<CellComplex, ConstructionError> {
    let n = x.n_vertices();
    if n + 1 > MAX_VERTICES {
        return Err(ConstructionError::Parameter(format!("pyramid over {n} vertices exceeds the vertex limit")));
    }
    let base = x.len();
    let apex = base;
    let cone = |c: usize| base + 1 + c;
    let mut cells: Vec<Cell> = x.cells().to_vec();
    cells.push(Cell { dim: 0, vertices: VertexSet::singleton(n), boundary: Vec::new() });
    for (c, cell) in x.cells().iter().enumerate() {
        let boundary = if cell.dim == 0 {
            vec![(c, 1), (apex, -1)]
        } else {
            std::iter::once((c, 1)).chain(cell.boundary.iter().map(|&(f, s)| (cone(f), -s))).collect()
        };
        let mut vertices = cell.vertices;
        vertices.insert(n);
        cells.push(Cell { dim: cell.dim + 1, vertices, boundary });
    }
    Ok(CellComplex::new(n + 1, cells)?)
}

/// `F ∪ {{t}}` with the apex `t = n`.
pub fn pyramid_family(f: &VertexFamily) -> Result<VertexFamily, ConstructionError> {
    let n = f.n();
    let mut sets = f.sets().to_vec();
    sets.push(VertexSet::singleton(n));
    Ok(VertexFamily::new(n + 1, sets)?)
}

/// Prism over `x` with a cone on its top copy, as a single convex polytope.
///
/// Vertex `(v, 0)` is `v`, `(v, 1)` is `n + v` and the apex is `2n`. `x`
/// must have exactly one top cell. Signs come from [`assign_signs`].
pub fn elongated_pyramid(x: &CellComplex) -> Result<CellComplex, ConstructionError> {
    let n = x.n_vertices();
    if 2 * n + 1 > MAX_VERTICES {
        return Err(ConstructionError::Parameter(format!("elongated pyramid over {n} vertices exceeds the vertex limit")));
    }
    if !x.has_single_top_cell() {
        return Err(ConstructionError::Parameter("the base must have exactly one top cell".into()));
    }
    let d = x.dim().expect("non-void");
    if d == 0 {
        return Err(ConstructionError::Parameter("the base must have positive dimension".into()));
    }
    let top = x.cells_of_dim(d)[0];
    let apex = 2 * n;
    let mut b = ComplexBuilder::with_vertices(2 * n + 1);
    let none = usize::MAX;
    let (mut zero, mut one, mut prism, mut cone) = (vec![none; x.len()], vec![none; x.len()], vec![none; x.len()], vec![none; x.len()]);

    for dim in 0..=d {
        for &c in x.cells_of_dim(dim) {
            let cell = x.cell(c);
            if dim == 0 {
                let v = cell.vertices.first().expect("vertex cell");
                zero[c] = b.vertex_cell(v);
                one[c] = b.vertex_cell(n + v);
                prism[c] = b.add_cell(vec![(zero[c], 0), (one[c], 0)]);
                cone[c] = b.add_cell(vec![(one[c], 0), (b.vertex_cell(apex), 0)]);
                continue;
            }
            zero[c] = b.add_cell(cell.boundary.iter().map(|&(f, _)| (zero[f], 0)).collect());
            if c == top {
                continue;
            }
            one[c] = b.add_cell(cell.boundary.iter().map(|&(f, _)| (one[f], 0)).collect());
            let mut pb = vec![(zero[c], 0), (one[c], 0)];
            pb.extend(cell.boundary.iter().map(|&(f, _)| (prism[f], 0)));
            prism[c] = b.add_cell(pb);
            let mut cb = vec![(one[c], 0)];
            cb.extend(cell.boundary.iter().map(|&(f, _)| (cone[f], 0)));
            cone[c] = b.add_cell(cb);
        }
    }
    let facets = &x.cell(top).boundary;
    let mut tb = vec![(zero[top], 0)];
    tb.extend(facets.iter().map(|&(f, _)| (prism[f], 0)));
    tb.extend(facets.iter().map(|&(f, _)| (cone[f], 0)));
    b.add_cell(tb);
    Ok(assign_signs(&b.build())?)
}

/// `{S×{1} ∪ {t}} ∪ {S×{0,1}} ∪ {V×{0}}` for `S` in `f`.
pub fn ep_family(f: &VertexFamily) -> Result<VertexFamily, ConstructionError> {
    let n = f.n();
    let lift = |s: VertexSet| -> VertexSet { s.iter().map(|v| n + v).collect() };
    let apex = VertexSet::singleton(2 * n);
    let mut sets: Vec<VertexSet> = f.sets().iter().map(|&s| lift(s).union(apex)).collect();
    sets.extend(f.sets().iter().map(|&s| s.union(lift(s))));
    sets.push(VertexSet::full(n));
    Ok(VertexFamily::new(2 * n + 1, sets)?)
}

/// The self-dual 3-polytope with a `2n`-gon rim `0..2n`, centre `c = 2n`
/// joined to the odd rim vertices, and outer edges between consecutive even
/// rim vertices.
pub fn wheel_polytope(n: usize) -> Result<CellComplex, ConstructionError> {
    if n < 3 {
        return Err(ConstructionError::Parameter(format!("the wheel polytope needs n >= 3, got {n}")));
    }
    if 2 * n + 1 > MAX_VERTICES {
        return Err(ConstructionError::Parameter(format!("wheel polytope with n = {n} exceeds the vertex limit")));
    }
    let m = 2 * n;
    let c = m;
    let mut b = ComplexBuilder::with_vertices(m + 1);
    let unsigned = |b: &mut ComplexBuilder, u: usize, v: usize| b.add_cell(vec![(u, 0), (v, 0)]);
    let rim: Vec<usize> = (0..m).map(|i| unsigned(&mut b, i, (i + 1) % m)).collect();
    let spoke: Vec<usize> = (0..n).map(|i| unsigned(&mut b, c, 2 * i + 1)).collect();
    let outer: Vec<usize> = (0..n).map(|i| unsigned(&mut b, 2 * i, (2 * i + 2) % m)).collect();

    let mut faces = Vec::with_capacity(m + 1);
    for i in 0..n {
        faces.push(b.add_cell(vec![(rim[2 * i], 0), (rim[2 * i + 1], 0), (outer[i], 0)]));
    }
    for i in 0..n {
        let j = (i + 1) % n;
        faces.push(b.add_cell(vec![(spoke[i], 0), (rim[2 * i + 1], 0), (rim[(2 * i + 2) % m], 0), (spoke[j], 0)]));
    }
    faces.push(b.add_cell(outer.iter().map(|&e| (e, 0)).collect()));
    b.add_cell(faces.iter().map(|&f| (f, 0)).collect());
    Ok(assign_signs(&b.build())?)
}

/// The ten-member family on `wheel_polytope(4)` (centre `c = 8`).
pub fn prop48_family() -> VertexFamily {
    VertexFamily::from_lists(
        9,
        &[
            &[0, 1, 2],
            &[2, 3, 4],
            &[4, 5, 6],
            &[6, 7, 0],
            &[8, 1, 3],
            &[8, 3, 5],
            &[8, 5, 7],
            &[8, 7, 1],
            &[1, 2, 3],
            &[3, 4, 5],
        ],
    )
    .expect("fixed family is valid")
}

/// Bipyramid over the `n`-gon: rim `0..n`, apexes `n` and `n + 1`.
pub fn bipyramid(n: usize) -> Result<CellComplex, ConstructionError> {
    if n < 3 || n + 2 > MAX_VERTICES {
        return Err(ConstructionError::Parameter(format!("bipyramid needs 3 <= n <= 62, got {n}")));
    }
    let mut b = ComplexBuilder::with_vertices(n + 2);
    let rim: Vec<usize> = (0..n).map(|i| b.add_cell(vec![(i, 0), ((i + 1) % n, 0)])).collect();
    let mut faces = Vec::new();
    for apex in [n, n + 1] {
        let spokes: Vec<usize> = (0..n).map(|i| b.add_cell(vec![(i, 0), (apex, 0)])).collect();
        for i in 0..n {
            faces.push(b.add_cell(vec![(rim[i], 0), (spokes[i], 0), (spokes[(i + 1) % n], 0)]));
        }
    }
    b.add_cell(faces.iter().map(|&f| (f, 0)).collect());
    Ok(assign_signs(&b.build())?)
}
