//! Explicit complexes, families and labelled fixtures.

mod fixtures;
mod polygon;
mod polytopes;
mod trees;

use thiserror::Error;

use crate::cmcheck::CmError;
use crate::complex::ComplexError;
use crate::monomial::{Monomial, MonomialError};

pub use fixtures::{all_fixtures, figure_fixture, hexagon_two_chords, Fixture, CATALOGUE};
pub use polygon::{
    chord_complex, chord_families, chord_reflection, dihedral_group, is_string, polygon_complex, polygon_family, string,
    strings_of_length, subdivided_polygon, StringSubset,
};
pub use polytopes::{bipyramid, elongated_pyramid, ep_family, prop48_family, pyramid, pyramid_family, wheel_polytope};
pub use trees::{
    all_labelled_trees, is_spanning_at_all_degrees, nonisomorphic_trees, tree_code, tree_maximal_labelling,
    tree_resolution_trees, tree_unique_morphism, OrientedTree, TreeResolutions,
};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ConstructionError {
    #[error("invalid parameters: {0}")]
    Parameter(String),
    #[error("the {0}-gon has no Cohen-Macaulay labelling")]
    EvenPolygon(usize),
    #[error("not a tree: {0}")]
    NotATree(String),
    #[error("expected codimension {expected}, found {found}")]
    Codimension { expected: usize, found: usize },
    #[error("no tree passes the spanning-forest test")]
    NoTree,
    #[error("substitution sends vertex {vertex} to {found}, expected {expected}")]
    MorphismFailed { vertex: usize, expected: Monomial, found: Monomial },
    #[error("unknown fixture `{0}`")]
    UnknownFixture(String),
    #[error(transparent)]
    Complex(#[from] ComplexError),
    #[error(transparent)]
    Monomial(#[from] MonomialError),
    #[error(transparent)]
    Cm(#[from] CmError),
}
