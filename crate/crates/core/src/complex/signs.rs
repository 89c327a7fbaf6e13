//! Orientation solving for unsigned regular cell complexes.

use std::collections::{BTreeMap, VecDeque};

use super::{Cell, CellComplex, ComplexError};

/// Chooses incidence signs so that `∂∘∂ = 0`.
///
/// Edges get `+1` on the larger vertex id and `-1` on the smaller. For a
/// cell of dimension `d ≥ 2` the facet signs are propagated along ridges:
/// two facets `f1, f2` sharing a ridge `g` need
/// `s(f1)·s(f2) = -[f1:g]·[f2:g]`. The first facet in boundary order gets
/// `+1`, so the result is deterministic. Existing signs are ignored.
pub fn assign_signs(x: &CellComplex) -> Result<CellComplex, ComplexError> {
    let mut cells: Vec<Cell> = x.cells().to_vec();
    for d in 1..=x.dim().unwrap_or(0) {
        for &c in x.cells_of_dim(d) {
            let signs = if d == 1 { edge_signs(&cells, c)? } else { facet_signs(&cells, c)? };
            for (entry, s) in cells[c].boundary.iter_mut().zip(signs) {
                entry.1 = s;
            }
        }
    }
    Ok(x.with_cells(cells))
}

fn edge_signs(cells: &[Cell], c: usize) -> Result<Vec<i8>, ComplexError> {
    let b = &cells[c].boundary;
    if b.len() != 2 {
        return Err(ComplexError::NotRegular(format!("edge {c} has {} endpoints", b.len())));
    }
    let (u, v) = (cells[b[0].0].vertices.first(), cells[b[1].0].vertices.first());
    if u == v {
        return Err(ComplexError::NotRegular(format!("edge {c} is a loop")));
    }
    Ok(if u > v { vec![1, -1] } else { vec![-1, 1] })
}

fn facet_signs(cells: &[Cell], c: usize) -> Result<Vec<i8>, ComplexError> {
    let facets = &cells[c].boundary;
    // ridge -> [(facet position, incidence of ridge in facet)]
    let mut ridges: BTreeMap<usize, Vec<(usize, i8)>> = BTreeMap::new();
    for (i, &(f, _)) in facets.iter().enumerate() {
        for &(g, s) in &cells[f].boundary {
            ridges.entry(g).or_default().push((i, s));
        }
    }
    let mut adj: Vec<Vec<(usize, i8)>> = vec![Vec::new(); facets.len()];
    for (&g, around) in &ridges {
        if around.len() != 2 {
            return Err(ComplexError::NotRegular(format!(
                "face {g} lies in {} facets of cell {c}",
                around.len()
            )));
        }
        let [(a, sa), (b, sb)] = [around[0], around[1]];
        let product = -sa * sb;
        adj[a].push((b, product));
        adj[b].push((a, product));
    }

    let mut sign = vec![0i8; facets.len()];
    let mut parent = vec![usize::MAX; facets.len()];
    for root in 0..facets.len() {
        if sign[root] != 0 {
            continue;
        }
        sign[root] = 1;
        let mut queue = VecDeque::from([root]);
        while let Some(a) = queue.pop_front() {
            for &(b, product) in &adj[a] {
                let want = sign[a] * product;
                if sign[b] == 0 {
                    sign[b] = want;
                    parent[b] = a;
                    queue.push_back(b);
                } else if sign[b] != want {
                    let cycle = conflict_cycle(&parent, a, b).into_iter().map(|i| facets[i].0).collect();
                    return Err(ComplexError::InconsistentSigns { cell: c, cycle });
                }
            }
        }
    }
    Ok(sign)
}

/// The tree path `a → lca → b`, closing the cycle through the edge `a–b`.
fn conflict_cycle(parent: &[usize], a: usize, b: usize) -> Vec<usize> {
    let path = |mut v: usize| {
        let mut p = vec![v];
        while parent[v] != usize::MAX {
            v = parent[v];
            p.push(v);
        }
        p
    };
    let (pa, pb) = (path(a), path(b));
    let lca = *pa.iter().find(|v| pb.contains(v)).expect("same BFS tree");
    let mut cycle: Vec<usize> = pa.iter().copied().take_while(|&v| v != lca).collect();
    cycle.push(lca);
    let tail: Vec<usize> = pb.iter().copied().take_while(|&v| v != lca).collect();
    cycle.extend(tail.into_iter().rev());
    cycle
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::complex::{reduced_homology, validate_complex, ComplexBuilder, Field};
    use crate::vertex_set::VertexSet;

    fn unsigned(x: &CellComplex) -> CellComplex {
        let cells = x
            .cells()
            .iter()
            .map(|c| Cell { boundary: c.boundary.iter().map(|&(f, _)| (f, 0)).collect(), ..c.clone() })
            .collect();
        CellComplex::new(x.n_vertices(), cells).unwrap()
    }

    #[test]
    fn graph_edges_point_to_larger_vertex() {
        let mut b = ComplexBuilder::with_vertices(3);
        b.add_edge(2, 0);
        b.add_edge(0, 1);
        let x = assign_signs(&unsigned(&b.build())).unwrap();
        for &e in x.cells_of_dim(1) {
            for &(v, s) in &x.cell(e).boundary {
                let is_max = x.cell(v).vertices.first() == x.cell(e).vertices.last();
                assert_eq!(s, if is_max { 1 } else { -1 });
            }
        }
    }

    #[test]
    fn square_becomes_a_cycle() {
        let mut b = ComplexBuilder::with_vertices(4);
        let e: Vec<usize> = (0..4).map(|i| b.add_edge(i, (i + 1) % 4)).collect();
        b.add_cell(e.iter().map(|&e| (e, 0)).collect());
        let x = assign_signs(&unsigned(&b.build())).unwrap();
        assert!(validate_complex(&x).is_empty());
        assert!(reduced_homology(&x, Field::Rational).unwrap().acyclic);
    }

    #[test]
    fn tetrahedron_boundary_gets_a_two_sphere() {
        // boundary of the 3-simplex, then with the solid cell added
        let mut b = ComplexBuilder::with_vertices(4);
        let mut edge = std::collections::HashMap::new();
        for i in 0..4 {
            for j in i + 1..4 {
                edge.insert((i, j), b.add_edge(i, j));
            }
        }
        let mut tris = Vec::new();
        for skip in 0..4 {
            let v: Vec<usize> = (0..4).filter(|&k| k != skip).collect();
            tris.push(b.add_cell(vec![(edge[&(v[0], v[1])], 0), (edge[&(v[1], v[2])], 0), (edge[&(v[0], v[2])], 0)]));
        }
        let sphere = assign_signs(&unsigned(&b.build())).unwrap();
        assert!(validate_complex(&sphere).is_empty());
        let h = reduced_homology(&sphere, Field::Rational).unwrap();
        assert_eq!(h.reduced_betti.get(&2), Some(&1));

        let mut b2 = ComplexBuilder::with_vertices(4);
        for c in sphere.cells().iter().skip(4) {
            b2.add_cell(c.boundary.clone());
        }
        b2.add_cell(tris.iter().map(|&t| (t, 0)).collect());
        let ball = assign_signs(&b2.build()).unwrap();
        assert!(validate_complex(&ball).is_empty());
        assert!(reduced_homology(&ball, Field::Rational).unwrap().acyclic);
    }

    #[test]
    fn non_manifold_boundary_is_rejected() {
        // a 2-cell bounded by a path whose endpoints sit in one edge only
        let mut b = ComplexBuilder::with_vertices(3);
        let e1 = b.add_edge(0, 1);
        let e2 = b.add_edge(1, 2);
        b.add_cell(vec![(e1, 0), (e2, 0)]);
        let err = assign_signs(&b.build()).unwrap_err();
        assert!(matches!(err, ComplexError::NotRegular(_)));
    }

    #[test]
    fn mobius_like_constraints_are_inconsistent() {
        // Three "facets" pairwise glued along three ridges with constraints
        // whose product around the triangle is -1.
        let cells = vec![
            Cell { dim: 0, vertices: VertexSet::singleton(0), boundary: vec![] },
            Cell { dim: 0, vertices: VertexSet::singleton(1), boundary: vec![] },
            Cell { dim: 0, vertices: VertexSet::singleton(2), boundary: vec![] },
            Cell { dim: 1, vertices: VertexSet::from_bits(0b011), boundary: vec![(0, -1), (1, 1)] },
            Cell { dim: 1, vertices: VertexSet::from_bits(0b110), boundary: vec![(1, -1), (2, 1)] },
            Cell { dim: 1, vertices: VertexSet::from_bits(0b101), boundary: vec![(0, -1), (2, 1)] },
            Cell { dim: 2, vertices: VertexSet::from_bits(0b111), boundary: vec![(3, 0), (4, 0), (5, 0)] },
        ];
        let x = CellComplex::new(3, cells).unwrap();
        // consistent: the triangle is fine
        assert!(assign_signs(&x).is_ok());
        // now corrupt a lower incidence after signing and ask only for facet solving
        let mut bad = x.cells().to_vec();
        bad[3].boundary = vec![(0, 1), (1, 1)];
        let err = facet_signs(&bad, 6).unwrap_err();
        match err {
            ComplexError::InconsistentSigns { cell, cycle } => {
                assert_eq!(cell, 6);
                assert!(cycle.len() >= 2);
            }
            other => panic!("unexpected {other:?}"),
        }
    }
}
