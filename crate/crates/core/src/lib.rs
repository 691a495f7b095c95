//! Conjugacy classification of monomial birational maps of projective space.
//!
//! A monomial map is encoded by its exponent matrix in GL(n,Z), and two
//! monomial maps are birationally conjugate exactly when their matrices are
//! GL(n,Z)-conjugate. This crate provides:
//!
//! - [`matrix`]: exact integer linear algebra (determinants, characteristic
//!   polynomials, exterior powers, Smith normal forms);
//! - [`map`]: the dictionary between map expressions like `x*y, 1/x` and
//!   exponent matrices, with composition, order, and projective degree;
//! - [`dyndeg`]: dynamical degrees via spectral radii of exterior powers and
//!   an empirical degree-growth estimator;
//! - [`sl2`]: the complete 2x2 theory: spectral classification, reduction to
//!   reduced matrices, LLS periods, realization and enumeration of reduced
//!   forms, and a certificate-producing conjugacy decision;
//! - [`sail`]: an independent geometric computation of LLS periods from
//!   lattice sails, used as a cross-check oracle;
//! - [`gln`]: the general pipeline: similarity-invariant filters, rational
//!   conjugacy by invariant factors, and a bounded certificate search over
//!   the solution lattice (complete for 2x2, semi-decision beyond).

pub mod dyndeg;
pub mod error;
pub mod gln;
pub mod map;
pub mod matrix;
pub mod poly;
pub mod sail;
pub mod sl2;

pub use dyndeg::{degree_growth, dynamical_degrees, DegreeProfile};
pub use error::{Error, Result};
pub use gln::{
    integral_conjugacy, invariant_filter, rational_conjugacy, search_conjugator, solution_lattice,
    verify_certificate, ConjugacyVerdict, SolutionLattice, Witness,
};
pub use map::{parse_map, print_map, MonomialMap, Order};
pub use matrix::{IntMatrix, SmithForm};
pub use poly::IntPoly;
pub use sail::{sail_lls_oracle, Sail2D};
pub use sl2::{
    cf_eval, cf_expand_odd, classify, conjugate_2x2, enumerate_reduced, lls_period, realize,
    reduce, CFExpansion, LLSPeriod, ReducedForm, SpectrumClass,
};
