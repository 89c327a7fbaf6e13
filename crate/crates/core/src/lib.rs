//! Monomial-labelled regular cell complexes.
//!
//! The crate decides whether a labelling of a cell complex gives a minimal
//! cellular resolution with Cohen-Macaulay quotient, builds the standard
//! families of such labellings, and enumerates maximal labellings on small
//! complexes.

pub mod cmcheck;
pub mod complex;
pub mod constructions;
pub mod monomial;
pub mod search;
pub mod vertex_set;

pub use cmcheck::{
    build_free_complex, check_cellular_resolution, check_cm_labelling, check_family_criteria, check_minimal, codimension,
    codimension_family, f_symmetry, f_vector, strand_oracle, CellularFreeComplex, CmError, CmVerdict, FamilyReport,
};
pub use complex::{
    assign_signs, reduced_homology, restrict, validate_complex, CellComplex, ComplexError, Diagnostic, Field,
    HomologyReport,
};
pub use monomial::{
    family_of, labelling_of, lcm_lattice, morphism_exists, polarize, reduce_family, refinement_compare, LcmLattice,
    Monomial, MonomialError, MonomialLabelling, Refinement, Substitution, VertexFamily,
};
pub use search::{
    covering_property_check, enumerate_maximal_families, enumerate_valid_families, is_maximal, SearchError, SearchSpace,
};
pub use vertex_set::VertexSet;
