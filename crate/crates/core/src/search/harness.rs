//! Data gathering for the two open conjectures. Reports are evidence only.

use std::str::FromStr;

use serde::Serialize;

use super::{enumerate_maximal_report, find_valid_family, SearchError, SearchSpace};
use crate::cmcheck::{check_family_criteria, f_symmetry, f_vector};
use crate::complex::{CellComplex, Field};
use crate::constructions::{
    bipyramid, dihedral_group, elongated_pyramid, ep_family, polygon_complex, polygon_family, prop48_family, pyramid,
    pyramid_family, subdivided_polygon, wheel_polytope,
};
use crate::monomial::VertexFamily;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum ConjectureKind {
    /// Maximal families on a polygon with k chords have n + k members.
    #[serde(rename = "3.10")]
    ChordCount,
    /// A polytope admitting a valid family has a symmetric f-vector.
    #[serde(rename = "4.2")]
    SelfDual,
}

impl FromStr for ConjectureKind {
    type Err = SearchError;

    fn from_str(s: &str) -> Result<Self, SearchError> {
        match s {
            "3.10" => Ok(ConjectureKind::ChordCount),
            "4.2" => Ok(ConjectureKind::SelfDual),
            other => Err(SearchError::UnknownConjecture(other.to_string())),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct HarnessParams {
    /// Largest polygon size for chord instances.
    pub max_n: usize,
    /// Largest number of chords.
    pub max_chords: usize,
    /// Largest wheel polytope.
    pub max_wheel: usize,
    /// Candidate limit passed to each search.
    pub max_candidates: usize,
    pub field: Field,
}

impl Default for HarnessParams {
    fn default() -> Self {
        HarnessParams { max_n: 7, max_chords: 2, max_wheel: 5, max_candidates: 200, field: Field::Gf2 }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum HarnessRow {
    Chords {
        instance: String,
        n: usize,
        chords: Vec<(usize, usize)>,
        expected: usize,
        family_sizes: Vec<usize>,
        holds: bool,
    },
    Polytope {
        instance: String,
        f_vector: Vec<usize>,
        symmetric: bool,
        /// None when the search was refused by the guard.
        admits_valid_family: Option<bool>,
        evidence: String,
        holds: bool,
    },
    Skipped {
        instance: String,
        reason: String,
    },
}

impl HarnessRow {
    pub fn is_counterexample(&self) -> bool {
        matches!(self, HarnessRow::Chords { holds: false, .. } | HarnessRow::Polytope { holds: false, .. })
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ConjectureReport {
    pub conjecture: ConjectureKind,
    pub params: HarnessParams,
    pub rows: Vec<HarnessRow>,
    /// Instances contradicting the conjecture. Nonzero means a finding, not a bug.
    pub counterexamples: Vec<String>,
}

pub fn conjecture_harness(kind: ConjectureKind, params: &HarnessParams) -> Result<ConjectureReport, SearchError> {
    let rows = match kind {
        ConjectureKind::ChordCount => chord_rows(params)?,
        ConjectureKind::SelfDual => polytope_rows(params)?,
    };
    let counterexamples = rows
        .iter()
        .filter(|r| r.is_counterexample())
        .map(|r| match r {
            HarnessRow::Chords { instance, .. } | HarnessRow::Polytope { instance, .. } => instance.clone(),
            HarnessRow::Skipped { instance, .. } => instance.clone(),
        })
        .collect();
    Ok(ConjectureReport { conjecture: kind, params: params.clone(), rows, counterexamples })
}

fn crosses((a, b): (usize, usize), (c, d): (usize, usize)) -> bool {
    let inside = |v: usize| a < v && v < b;
    let shared = a == c || a == d || b == c || b == d;
    !shared && inside(c) != inside(d)
}

fn normalize(mut chords: Vec<(usize, usize)>) -> Vec<(usize, usize)> {
    for c in &mut chords {
        if c.0 > c.1 {
            *c = (c.1, c.0);
        }
    }
    chords.sort_unstable();
    chords
}

/// Sets of k pairwise non-crossing chords of the n-gon, one per dihedral orbit.
pub fn chord_configurations(n: usize, k: usize) -> Vec<Vec<(usize, usize)>> {
    let all: Vec<(usize, usize)> =
        (0..n).flat_map(|i| (i + 2..n).map(move |j| (i, j))).filter(|&(i, j)| !(i == 0 && j == n - 1)).collect();
    let group = dihedral_group(n);
    let mut out: Vec<Vec<(usize, usize)>> = Vec::new();
    let mut pick = Vec::new();
    fn rec(
        all: &[(usize, usize)],
        start: usize,
        k: usize,
        pick: &mut Vec<(usize, usize)>,
        found: &mut Vec<Vec<(usize, usize)>>,
    ) {
        if pick.len() == k {
            found.push(pick.clone());
            return;
        }
        for i in start..all.len() {
            if pick.iter().all(|&c| !crosses(c, all[i])) {
                pick.push(all[i]);
                rec(all, i + 1, k, pick, found);
                pick.pop();
            }
        }
    }
    let mut found = Vec::new();
    rec(&all, 0, k, &mut pick, &mut found);
    for cs in found {
        let rep = group
            .iter()
            .map(|p| normalize(cs.iter().map(|&(a, b)| (p[a], p[b])).collect()))
            .min()
            .expect("group is nonempty");
        if !out.contains(&rep) {
            out.push(rep);
        }
    }
    out.sort();
    out
}

fn chord_rows(params: &HarnessParams) -> Result<Vec<HarnessRow>, SearchError> {
    let mut rows = Vec::new();
    for n in 4..=params.max_n {
        for k in 1..=params.max_chords {
            for chords in chord_configurations(n, k) {
                let instance = format!("polygon n={n} chords={chords:?}");
                let x = subdivided_polygon(n, &chords)?;
                let space = SearchSpace::connected(&x).with_max_candidates(params.max_candidates).with_field(params.field);
                match enumerate_maximal_report(&x, &space) {
                    Ok(report) => {
                        let family_sizes: Vec<usize> = report.families.iter().map(VertexFamily::len).collect();
                        let expected = n + k;
                        let holds = family_sizes.iter().all(|&s| s == expected);
                        rows.push(HarnessRow::Chords { instance, n, chords, expected, family_sizes, holds });
                    }
                    Err(SearchError::Guard { candidates, limit }) => rows.push(HarnessRow::Skipped {
                        instance,
                        reason: format!("{candidates} candidates exceed {limit}"),
                    }),
                    Err(e) => return Err(e),
                }
            }
        }
    }
    Ok(rows)
}

fn polytope_row(
    instance: String,
    x: &CellComplex,
    known: Option<VertexFamily>,
    params: &HarnessParams,
) -> Result<HarnessRow, SearchError> {
    let fv = f_vector(x);
    let symmetric = f_symmetry(x);
    let (admits, evidence) = match known {
        Some(f) if check_family_criteria(x, &f, params.field)?.valid => (Some(true), format!("known family {f}")),
        _ => {
            let space = SearchSpace::connected(x).with_max_candidates(params.max_candidates).with_field(params.field);
            match find_valid_family(x, &space) {
                Ok(Some(f)) => (Some(true), format!("search found {f}")),
                Ok(None) => (Some(false), "exhaustive search found none".to_string()),
                Err(SearchError::Guard { candidates, limit }) => {
                    (None, format!("undetermined: {candidates} candidates exceed {limit}"))
                }
                Err(e) => return Err(e),
            }
        }
    };
    let holds = admits != Some(true) || symmetric;
    Ok(HarnessRow::Polytope { instance, f_vector: fv, symmetric, admits_valid_family: admits, evidence, holds })
}

fn polytope_rows(params: &HarnessParams) -> Result<Vec<HarnessRow>, SearchError> {
    let mut rows = Vec::new();
    for n in 3..=params.max_wheel {
        let known = (n == 4).then(prop48_family);
        rows.push(polytope_row(format!("wheel n={n}"), &wheel_polytope(n)?, known, params)?);
    }
    for n in 3..=params.max_n.min(6) {
        let base = polygon_complex(n)?;
        let known = if n % 2 == 1 { Some(pyramid_family(&polygon_family(n)?)?) } else { None };
        rows.push(polytope_row(format!("pyramid over {n}-gon"), &pyramid(&base)?, known, params)?);
    }
    for n in 3..=params.max_n.min(5) {
        let base = polygon_complex(n)?;
        let known = if n % 2 == 1 { Some(ep_family(&polygon_family(n)?)?) } else { None };
        rows.push(polytope_row(format!("elongated pyramid over {n}-gon"), &elongated_pyramid(&base)?, known, params)?);
    }
    for n in 3..=4 {
        rows.push(polytope_row(format!("bipyramid n={n}"), &bipyramid(n)?, None, params)?);
    }
    Ok(rows)
}
