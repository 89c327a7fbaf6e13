//! Reduction, refinement order and morphisms between vertex families.

use serde::Serialize;

use super::{Monomial, MonomialError, Substitution, VertexFamily};
use crate::vertex_set::VertexSet;

/// Partitions `target` into members of `pieces` (excluding `target` itself),
/// returning the indices used, or `None` when no partition exists.
pub fn decompose(target: VertexSet, pieces: &[VertexSet]) -> Option<Vec<usize>> {
    let mut usable: Vec<usize> = (0..pieces.len())
        .filter(|&i| pieces[i] != target && !pieces[i].is_empty() && pieces[i].is_subset(target))
        .collect();
    usable.sort_by(|&a, &b| pieces[b].len().cmp(&pieces[a].len()).then(a.cmp(&b)));
    let mut chosen = Vec::new();
    exact_cover(target, VertexSet::EMPTY, pieces, &usable, &mut chosen).then_some(chosen)
}

fn exact_cover(target: VertexSet, covered: VertexSet, pieces: &[VertexSet], usable: &[usize], chosen: &mut Vec<usize>) -> bool {
    let Some(v) = target.difference(covered).first() else {
        return true;
    };
    for &i in usable {
        let s = pieces[i];
        if s.contains(v) && s.is_disjoint(covered) {
            chosen.push(i);
            if exact_cover(target, covered.union(s), pieces, usable, chosen) {
                return true;
            }
            chosen.pop();
        }
    }
    false
}

/// Partition of `target` into members of `pieces`, allowing `target` itself.
fn partition(target: VertexSet, pieces: &[VertexSet]) -> Option<Vec<usize>> {
    match pieces.iter().position(|&s| s == target) {
        Some(i) => Some(vec![i]),
        None => decompose(target, pieces),
    }
}

/// Members that are not disjoint unions of other members, in original order.
pub fn reduce_family(f: &VertexFamily) -> VertexFamily {
    let sets = f.sets().iter().copied().filter(|&s| decompose(s, f.sets()).is_none()).collect();
    VertexFamily::new(f.n(), sets).expect("subfamily of a valid family")
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Refinement {
    /// The first family strictly refines the second.
    Greater,
    /// The second family strictly refines the first.
    Less,
    Equal,
    /// Distinct families refining each other; only possible when one of them
    /// is not reduced.
    Equivalent,
    Incomparable,
}

fn check_n(f: &VertexFamily, g: &VertexFamily) -> Result<(), MonomialError> {
    if f.n() != g.n() {
        return Err(MonomialError::SizeMismatch { left: f.n(), right: g.n() });
    }
    Ok(())
}

fn refines(f: &VertexFamily, g: &VertexFamily) -> bool {
    g.sets().iter().all(|&t| partition(t, f.sets()).is_some())
}

/// Compares `f` and `g` in the refinement order: `f ⪰ g` when every member
/// of `g` is a disjoint union of members of `f`.
pub fn refinement_compare(f: &VertexFamily, g: &VertexFamily) -> Result<Refinement, MonomialError> {
    check_n(f, g)?;
    if f.same_sets(g) {
        return Ok(Refinement::Equal);
    }
    Ok(match (refines(f, g), refines(g, f)) {
        (true, true) => Refinement::Equivalent,
        (true, false) => Refinement::Greater,
        (false, true) => Refinement::Less,
        (false, false) => Refinement::Incomparable,
    })
}

/// Whether there is a morphism `f → g`: every member of `g` partitions into
/// members of `f`.
pub fn morphism_exists(f: &VertexFamily, g: &VertexFamily) -> Result<bool, MonomialError> {
    check_n(f, g)?;
    Ok(refines(f, g))
}

/// The variable substitution realising a morphism `f → g`.
///
/// The variable of `S ∈ f` goes to the product of the variables of those
/// `T ∈ g` whose partition uses `S`, so `labelling_of(f)` is carried onto
/// `labelling_of(g)`.
pub fn morphism_map(f: &VertexFamily, g: &VertexFamily) -> Result<Option<Substitution>, MonomialError> {
    check_n(f, g)?;
    let mut images = vec![Monomial::one(g.len()); f.len()];
    for (q, &t) in g.sets().iter().enumerate() {
        let Some(parts) = partition(t, f.sets()) else {
            return Ok(None);
        };
        for p in parts {
            images[p].0[q] += 1;
        }
    }
    Ok(Some(Substitution { source_vars: f.len(), target_vars: g.len(), images }))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::monomial::labelling_of;
    use proptest::prelude::*;

    fn fam(n: usize, lists: &[&[usize]]) -> VertexFamily {
        VertexFamily::from_lists(n, lists).unwrap()
    }

    #[test]
    fn reduction_examples() {
        let f = fam(2, &[&[0], &[1], &[0, 1]]);
        assert!(reduce_family(&f).same_sets(&fam(2, &[&[0], &[1]])));
        let g = fam(3, &[&[0, 1], &[1, 2]]);
        assert_eq!(reduce_family(&g), g);
        let hex = fam(6, &[&[0, 1, 5], &[0], &[1, 2, 3], &[2], &[3, 4, 5], &[4]]);
        assert_eq!(reduce_family(&hex), hex);
    }

    #[test]
    fn refinement_examples() {
        let f = fam(2, &[&[0], &[1], &[0, 1]]);
        let g = fam(2, &[&[0, 1]]);
        assert_eq!(refinement_compare(&f, &g).unwrap(), Refinement::Greater);
        assert_eq!(refinement_compare(&g, &f).unwrap(), Refinement::Less);
        assert_eq!(refinement_compare(&f, &f).unwrap(), Refinement::Equal);
        let a = fam(3, &[&[0, 1]]);
        let b = fam(3, &[&[1, 2]]);
        assert_eq!(refinement_compare(&a, &b).unwrap(), Refinement::Incomparable);
        let reduced = fam(2, &[&[0], &[1]]);
        assert_eq!(refinement_compare(&f, &reduced).unwrap(), Refinement::Equivalent);
        assert!(refinement_compare(&a, &fam(4, &[&[0]])).is_err());
    }

    #[test]
    fn morphism_examples() {
        let pent: Vec<Vec<usize>> = (0..5).map(|i| vec![i, (i + 1) % 5]).collect();
        let lists: Vec<&[usize]> = pent.iter().map(Vec::as_slice).collect();
        let p = fam(5, &lists);
        // replacing {0,1} by {0} and {1}: the split target cannot be built from p
        let mut split: Vec<&[usize]> = lists[1..].to_vec();
        split.push(&[0]);
        split.push(&[1]);
        let q = fam(5, &split);
        assert!(!morphism_exists(&p, &q).unwrap());
        assert!(morphism_exists(&q, &p).unwrap());
    }

    #[test]
    fn morphism_map_carries_labellings() {
        let f = fam(3, &[&[0], &[1], &[2], &[1, 2]]);
        let g = fam(3, &[&[0, 1], &[1, 2], &[0, 2]]);
        let s = morphism_map(&f, &g).unwrap().unwrap();
        let lf = labelling_of(&f).unwrap();
        let lg = labelling_of(&g).unwrap();
        // either partition of {1,2} gives the same labels
        assert_eq!(s.apply_all(lf.labels()).unwrap(), lg.labels());
        assert!(morphism_map(&g, &f).unwrap().is_none());
        assert_eq!(lf.n_variables(), 4);
    }

    fn arb_family() -> impl Strategy<Value = VertexFamily> {
        proptest::collection::btree_set(1u64..(1 << 6), 1..7)
            .prop_map(|bits| VertexFamily::new(6, bits.into_iter().map(VertexSet::from_bits).collect()).unwrap())
    }

    proptest! {
        #[test]
        fn reduce_is_idempotent(f in arb_family()) {
            let r = reduce_family(&f);
            prop_assert_eq!(reduce_family(&r), r.clone());
            // reduction loses nothing in the refinement order
            prop_assert!(morphism_exists(&r, &f).unwrap());
        }

        #[test]
        fn refinement_is_a_preorder(f in arb_family(), g in arb_family(), h in arb_family()) {
            prop_assert_eq!(refinement_compare(&f, &f).unwrap(), Refinement::Equal);
            if morphism_exists(&f, &g).unwrap() && morphism_exists(&g, &h).unwrap() {
                prop_assert!(morphism_exists(&f, &h).unwrap());
            }
            let (rf, rg) = (reduce_family(&f), reduce_family(&g));
            if morphism_exists(&rf, &rg).unwrap() && morphism_exists(&rg, &rf).unwrap() {
                prop_assert!(rf.same_sets(&rg));
            }
        }
    }
}
