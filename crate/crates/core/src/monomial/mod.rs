//! Monomials, labellings, vertex families and lcm lattices.

mod family;

use std::collections::HashSet;
use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::vertex_set::{VertexSet, MAX_VERTICES};

pub use family::{
    decompose, morphism_exists, morphism_map, reduce_family, refinement_compare, Refinement,
};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum MonomialError {
    #[error("label {label} has {found} exponents, expected {expected}")]
    LengthMismatch { label: usize, expected: usize, found: usize },
    #[error("label {divisor} divides label {multiple}")]
    Divisibility { divisor: usize, multiple: usize },
    #[error("variable {0} occurs in no label")]
    UnusedVariable(usize),
    #[error("label {0} is not square-free")]
    NotSquareFree(usize),
    #[error("variables {first} and {second} have the same vertex set, so the labelling lies outside CM_*")]
    DuplicateVariableSets { first: usize, second: usize },
    #[error("vertex {0} lies in no member of the family")]
    UncoveredVertex(usize),
    #[error("member {index} contains vertex {vertex} outside [0, {n})")]
    VertexOutOfRange { index: usize, vertex: usize, n: usize },
    #[error("member {0} is empty")]
    EmptySet(usize),
    #[error("members {first} and {second} are equal")]
    DuplicateSet { first: usize, second: usize },
    #[error("families live on {left} and {right} vertices")]
    SizeMismatch { left: usize, right: usize },
    #[error("{0} vertices exceed the supported maximum of {MAX_VERTICES}")]
    TooManyVertices(usize),
    #[error("substitution maps {source_vars} variables but was applied to a monomial in {found}")]
    SubstitutionArity { source_vars: usize, found: usize },
    #[error("cannot compose substitutions: {left} target variables vs {right} source variables")]
    CompositionArity { left: usize, right: usize },
}

/// A monomial `x^a` stored as its exponent vector.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Monomial(pub Vec<u32>);

impl Monomial {
    pub fn one(n_variables: usize) -> Self {
        Monomial(vec![0; n_variables])
    }

    pub fn variable(n_variables: usize, p: usize) -> Self {
        let mut m = Self::one(n_variables);
        m.0[p] = 1;
        m
    }

    /// Square-free monomial with the given support.
    pub fn from_support(n_variables: usize, support: impl IntoIterator<Item = usize>) -> Self {
        let mut m = Self::one(n_variables);
        for p in support {
            m.0[p] = 1;
        }
        m
    }

    pub fn n_variables(&self) -> usize {
        self.0.len()
    }

    pub fn exponents(&self) -> &[u32] {
        &self.0
    }

    pub fn degree(&self) -> u32 {
        self.0.iter().sum()
    }

    pub fn is_one(&self) -> bool {
        self.0.iter().all(|&e| e == 0)
    }

    pub fn is_square_free(&self) -> bool {
        self.0.iter().all(|&e| e <= 1)
    }

    pub fn divides(&self, other: &Monomial) -> bool {
        self.0.iter().zip(&other.0).all(|(a, b)| a <= b)
    }

    /// Least common multiple.
    pub fn join(&self, other: &Monomial) -> Monomial {
        Monomial(self.0.iter().zip(&other.0).map(|(&a, &b)| a.max(b)).collect())
    }

    pub fn mul(&self, other: &Monomial) -> Monomial {
        Monomial(self.0.iter().zip(&other.0).map(|(&a, &b)| a + b).collect())
    }

    /// `self / other`, if `other` divides `self`.
    pub fn quotient(&self, other: &Monomial) -> Option<Monomial> {
        other.divides(self).then(|| Monomial(self.0.iter().zip(&other.0).map(|(&a, &b)| a - b).collect()))
    }

    /// Numerator of `self / other` in lowest terms.
    pub fn excess_over(&self, other: &Monomial) -> Monomial {
        Monomial(self.0.iter().zip(&other.0).map(|(&a, &b)| a.saturating_sub(b)).collect())
    }

    pub fn support(&self) -> Vec<usize> {
        self.0.iter().enumerate().filter(|(_, &e)| e > 0).map(|(p, _)| p).collect()
    }
}

impl fmt::Debug for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl fmt::Display for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_one() {
            return f.write_str("1");
        }
        let mut first = true;
        for (p, &e) in self.0.iter().enumerate() {
            if e == 0 {
                continue;
            }
            if !first {
                f.write_str("*")?;
            }
            first = false;
            write!(f, "x{p}")?;
            if e > 1 {
                write!(f, "^{e}")?;
            }
        }
        Ok(())
    }
}

/// One monomial per vertex over `n_variables` variables.
///
/// Invariants: no label divides another, and every variable occurs.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct MonomialLabelling {
    n_variables: usize,
    labels: Vec<Monomial>,
}

impl MonomialLabelling {
    pub fn new(n_variables: usize, labels: Vec<Monomial>) -> Result<Self, MonomialError> {
        for (i, m) in labels.iter().enumerate() {
            if m.n_variables() != n_variables {
                return Err(MonomialError::LengthMismatch { label: i, expected: n_variables, found: m.n_variables() });
            }
        }
        for (i, a) in labels.iter().enumerate() {
            for (j, b) in labels.iter().enumerate() {
                if i != j && a.divides(b) {
                    return Err(MonomialError::Divisibility { divisor: i, multiple: j });
                }
            }
        }
        if let Some(p) = (0..n_variables).find(|&p| labels.iter().all(|m| m.0[p] == 0)) {
            return Err(MonomialError::UnusedVariable(p));
        }
        Ok(MonomialLabelling { n_variables, labels })
    }

    /// Builds a square-free labelling from per-vertex variable lists.
    pub fn from_supports(n_variables: usize, supports: &[&[usize]]) -> Result<Self, MonomialError> {
        Self::new(n_variables, supports.iter().map(|s| Monomial::from_support(n_variables, s.iter().copied())).collect())
    }

    pub fn n_variables(&self) -> usize {
        self.n_variables
    }

    pub fn n_vertices(&self) -> usize {
        self.labels.len()
    }

    pub fn labels(&self) -> &[Monomial] {
        &self.labels
    }

    pub fn label(&self, v: usize) -> &Monomial {
        &self.labels[v]
    }

    pub fn is_square_free(&self) -> bool {
        self.labels.iter().all(Monomial::is_square_free)
    }

    /// Join of the labels of the vertices in `w`.
    pub fn multidegree(&self, w: VertexSet) -> Monomial {
        w.iter().fold(Monomial::one(self.n_variables), |acc, v| acc.join(&self.labels[v]))
    }

    /// Vertices whose label divides `b`.
    pub fn dividing_set(&self, b: &Monomial) -> VertexSet {
        self.labels.iter().enumerate().filter(|(_, m)| m.divides(b)).map(|(v, _)| v).collect()
    }

    /// `V_p` for every variable `p`, in variable order.
    pub fn variable_sets(&self) -> Vec<VertexSet> {
        (0..self.n_variables)
            .map(|p| self.labels.iter().enumerate().filter(|(_, m)| m.0[p] > 0).map(|(v, _)| v).collect())
            .collect()
    }
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct LabellingDoc {
    n_variables: usize,
    labels: Vec<Monomial>,
}

impl<'de> Deserialize<'de> for MonomialLabelling {
    fn deserialize<D: serde::Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let doc = LabellingDoc::deserialize(deserializer)?;
        MonomialLabelling::new(doc.n_variables, doc.labels).map_err(serde::de::Error::custom)
    }
}

/// A list of distinct nonempty subsets of `[n]`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct VertexFamily {
    n: usize,
    sets: Vec<VertexSet>,
}

impl VertexFamily {
    pub fn new(n: usize, sets: Vec<VertexSet>) -> Result<Self, MonomialError> {
        if n > MAX_VERTICES {
            return Err(MonomialError::TooManyVertices(n));
        }
        let universe = VertexSet::full(n);
        for (i, s) in sets.iter().enumerate() {
            if s.is_empty() {
                return Err(MonomialError::EmptySet(i));
            }
            if let Some(vertex) = s.difference(universe).first() {
                return Err(MonomialError::VertexOutOfRange { index: i, vertex, n });
            }
            if let Some(j) = sets[..i].iter().position(|t| t == s) {
                return Err(MonomialError::DuplicateSet { first: j, second: i });
            }
        }
        Ok(VertexFamily { n, sets })
    }

    /// Convenience constructor from vertex lists.
    pub fn from_lists(n: usize, lists: &[&[usize]]) -> Result<Self, MonomialError> {
        Self::new(n, lists.iter().map(|l| l.iter().collect()).collect())
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn sets(&self) -> &[VertexSet] {
        &self.sets
    }

    pub fn len(&self) -> usize {
        self.sets.len()
    }

    pub fn is_empty(&self) -> bool {
        self.sets.is_empty()
    }

    pub fn contains(&self, s: VertexSet) -> bool {
        self.sets.contains(&s)
    }

    pub fn union(&self) -> VertexSet {
        self.sets.iter().fold(VertexSet::EMPTY, |a, &s| a.union(s))
    }

    pub fn covers(&self) -> bool {
        self.union() == VertexSet::full(self.n)
    }

    /// Same members sorted by (size, lexicographic).
    pub fn canonical(&self) -> VertexFamily {
        let mut sets = self.sets.clone();
        sets.sort();
        VertexFamily { n: self.n, sets }
    }

    /// Equality as unordered families.
    pub fn same_sets(&self, other: &VertexFamily) -> bool {
        self.n == other.n && self.canonical().sets == other.canonical().sets
    }

    pub fn with(&self, s: VertexSet) -> Result<VertexFamily, MonomialError> {
        let mut sets = self.sets.clone();
        sets.push(s);
        VertexFamily::new(self.n, sets)
    }

    /// Image under a vertex permutation.
    pub fn map(&self, perm: &[usize]) -> VertexFamily {
        VertexFamily { n: self.n, sets: self.sets.iter().map(|s| s.map(perm)).collect() }
    }
}

impl fmt::Display for VertexFamily {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("[")?;
        for (i, s) in self.sets.iter().enumerate() {
            if i > 0 {
                f.write_str(" ")?;
            }
            write!(f, "{s}")?;
        }
        f.write_str("]")
    }
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct FamilyDoc {
    n: usize,
    sets: Vec<Vec<usize>>,
}

impl<'de> Deserialize<'de> for VertexFamily {
    fn deserialize<D: serde::Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let doc = FamilyDoc::deserialize(deserializer)?;
        if doc.n > MAX_VERTICES {
            return Err(serde::de::Error::custom(MonomialError::TooManyVertices(doc.n)));
        }
        let mut sets = Vec::with_capacity(doc.sets.len());
        for (index, list) in doc.sets.iter().enumerate() {
            if let Some(&vertex) = list.iter().find(|&&v| v >= doc.n) {
                return Err(serde::de::Error::custom(MonomialError::VertexOutOfRange { index, vertex, n: doc.n }));
            }
            sets.push(list.iter().collect());
        }
        VertexFamily::new(doc.n, sets).map_err(serde::de::Error::custom)
    }
}

/// A ring map sending source variable `p` to the monomial `images[p]` in
/// the target variables.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Substitution {
    pub source_vars: usize,
    pub target_vars: usize,
    pub images: Vec<Monomial>,
}

impl Substitution {
    pub fn identity(n: usize) -> Self {
        Substitution { source_vars: n, target_vars: n, images: (0..n).map(|p| Monomial::variable(n, p)).collect() }
    }

    pub fn apply(&self, m: &Monomial) -> Result<Monomial, MonomialError> {
        if m.n_variables() != self.source_vars {
            return Err(MonomialError::SubstitutionArity { source_vars: self.source_vars, found: m.n_variables() });
        }
        let mut out = vec![0u32; self.target_vars];
        for (p, &e) in m.0.iter().enumerate() {
            for (slot, &f) in out.iter_mut().zip(&self.images[p].0) {
                *slot += e * f;
            }
        }
        Ok(Monomial(out))
    }

    /// `then ∘ self`: apply `self` first.
    pub fn compose(&self, then: &Substitution) -> Result<Substitution, MonomialError> {
        if self.target_vars != then.source_vars {
            return Err(MonomialError::CompositionArity { left: self.target_vars, right: then.source_vars });
        }
        let images = self.images.iter().map(|m| then.apply(m)).collect::<Result<_, _>>()?;
        Ok(Substitution { source_vars: self.source_vars, target_vars: then.target_vars, images })
    }

    /// Images of all labels, without re-checking labelling invariants.
    pub fn apply_all(&self, labels: &[Monomial]) -> Result<Vec<Monomial>, MonomialError> {
        labels.iter().map(|m| self.apply(m)).collect()
    }
}

/// Join-closure of a set of monomials.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct LcmLattice {
    pub n_variables: usize,
    /// Sorted by (degree, exponent vector).
    pub points: Vec<Monomial>,
}

impl LcmLattice {
    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn contains(&self, m: &Monomial) -> bool {
        self.points.contains(m)
    }
}

pub fn lcm_lattice(l: &MonomialLabelling) -> LcmLattice {
    let gens = l.labels();
    let mut seen: HashSet<Monomial> = gens.iter().cloned().collect();
    let mut frontier: Vec<Monomial> = seen.iter().cloned().collect();
    while let Some(p) = frontier.pop() {
        for g in gens {
            let j = p.join(g);
            if !seen.contains(&j) {
                seen.insert(j.clone());
                frontier.push(j);
            }
        }
    }
    let mut points: Vec<Monomial> = seen.into_iter().collect();
    points.sort_by(|a, b| a.degree().cmp(&b.degree()).then_with(|| a.cmp(b)));
    LcmLattice { n_variables: l.n_variables(), points }
}

/// The family of variable sets `V_p` of a square-free labelling.
pub fn family_of(l: &MonomialLabelling) -> Result<VertexFamily, MonomialError> {
    if let Some(i) = l.labels().iter().position(|m| !m.is_square_free()) {
        return Err(MonomialError::NotSquareFree(i));
    }
    let sets = l.variable_sets();
    for (j, s) in sets.iter().enumerate() {
        if let Some(i) = sets[..j].iter().position(|t| t == s) {
            return Err(MonomialError::DuplicateVariableSets { first: i, second: j });
        }
    }
    VertexFamily::new(l.n_vertices(), sets)
}

/// One variable per member, in list order; vertex `i` gets the product of
/// the variables whose member contains `i`.
pub fn labelling_of(f: &VertexFamily) -> Result<MonomialLabelling, MonomialError> {
    if let Some(v) = VertexSet::full(f.n()).difference(f.union()).first() {
        return Err(MonomialError::UncoveredVertex(v));
    }
    let labels = (0..f.n())
        .map(|v| Monomial::from_support(f.len(), f.sets().iter().enumerate().filter(|(_, s)| s.contains(v)).map(|(p, _)| p)))
        .collect();
    MonomialLabelling::new(f.len(), labels)
}

/// Polarization of a labelling together with the substitution that undoes it.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Polarization {
    pub labelling: MonomialLabelling,
    /// Sends `x_{p,k}` back to `x_p`.
    pub depolarize: Substitution,
    /// `(p, k)` for every new variable, `k` counted from 1.
    pub origin: Vec<(usize, u32)>,
}

/// Standard polarization: `x_p^k ↦ x_{p,1}···x_{p,k}`.
///
/// New variables are ordered by original variable, then by `k`.
pub fn polarization(l: &MonomialLabelling) -> Polarization {
    let mut origin = Vec::new();
    let mut offset = Vec::with_capacity(l.n_variables());
    for p in 0..l.n_variables() {
        offset.push(origin.len());
        let e = l.labels().iter().map(|m| m.0[p]).max().unwrap_or(0);
        origin.extend((1..=e).map(|k| (p, k)));
    }
    let r = origin.len();
    let labels = l
        .labels()
        .iter()
        .map(|m| Monomial::from_support(r, (0..l.n_variables()).flat_map(|p| offset[p]..offset[p] + m.0[p] as usize)))
        .collect();
    let labelling = MonomialLabelling::new(r, labels).expect("polarization preserves the labelling invariants");
    let depolarize = Substitution {
        source_vars: r,
        target_vars: l.n_variables(),
        images: origin.iter().map(|&(p, _)| Monomial::variable(l.n_variables(), p)).collect(),
    };
    Polarization { labelling, depolarize, origin }
}

pub fn polarize(l: &MonomialLabelling) -> MonomialLabelling {
    polarization(l).labelling
}
