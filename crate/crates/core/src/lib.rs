//! Exact Varchenko matrices of hyperplane arrangements: regions and faces,
//! intersection posets, the determinant formula, explicit diagonal forms with
//! certificates, and invariants of specialized matrices.

pub mod cli;
pub mod diagonalize;
pub mod error;
pub mod fourier_motzkin;
pub mod geometry;
pub mod io;
pub mod linalg;
pub mod matinvariants;
pub mod polyring;
pub mod ring;
pub mod signedsets;
pub mod varchenko;

pub use diagonalize::{diagonalize, expected_diagonal, snf_q, DiagonalizationCertificate};
pub use error::{Error, Result};
pub use geometry::{Arrangement, Hyperplane, IntersectionPoset, Mode};
pub use polyring::{Monomial, Polynomial, UniPoly};
pub use signedsets::{ElementSet, Sign, SignVector, SignedFamily};
pub use varchenko::{build_varchenko, det_bruteforce, det_formula, FactoredDeterminant, LabeledMatrix};
