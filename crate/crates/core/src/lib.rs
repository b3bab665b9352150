//! Exact-arithmetic toolkit for type II multiple orthogonal polynomials.
//!
//! The algebra is generic over [`Scalar`]; the aliases below fix it to exact
//! rationals, which is what every identity check in the crate uses.

pub mod banded;
pub mod darboux;
pub mod dense;
pub mod error;
pub mod matpoly;
pub mod matrix_mop;
pub mod moments;
pub mod poly;
pub mod recurrence;
pub mod scalar;
pub mod suite;
pub mod symmetrize;
pub mod weyl;

pub use banded::{banded_mul, unit_bidiagonal_solve, BandedMatrix};
pub use darboux::{
    cyclic_permutation, darboux_families, free_parameter_slots, intertwining_failures, lu_hessenberg, split_bidiagonals,
    DarbouxFactorization, DarbouxFamilySet,
};
pub use dense::Mat;
pub use error::{MopError, Result};
pub use matpoly::MatrixPoly;
pub use matrix_mop::{
    coefficient_cascade, favard_blocks, favard_moments, favard_orthogonality, group3_wn, verify_w_recurrence,
    CascadeCoefficients, FavardBlocks, FourTermRecurrence,
};
pub use moments::{
    check_symmetric_moment_relations, g0_from_v00, hankel_regularity, moments_from_jacobi, orthogonality_report, HankelBlock,
    MomentTable, Normalization,
};
pub use poly::{compose_power, Poly};
pub use recurrence::{
    from_jacobi, generate_symmetric, generate_type2, is_d_symmetric, to_jacobi, vector_matrix_form, DSymmetryCertificate,
    RecurrenceSystem, SymmetricRecurrence,
};
pub use scalar::{format_rational, int, parse_rational, rat, Rational, Scalar};
pub use symmetrize::{deinterleave, desymmetrize, gamma_at_zero, interleave, symmetrize_direct, SymmetrizationResult};
pub use weyl::{eval_series, residue_decomposition, stieltjes_coefficients, weyl_coefficients, SeriesCoefficients};

pub type QPoly = Poly<Rational>;
pub type QBanded = BandedMatrix<Rational>;
pub type QMat = Mat<Rational>;
pub type QMatrixPoly = MatrixPoly<Rational>;
pub type QRecurrence = RecurrenceSystem<Rational>;
pub type QSymmetricRecurrence = SymmetricRecurrence<Rational>;
pub type QFactorization = DarbouxFactorization<Rational>;
pub type QMomentTable = MomentTable<Rational>;
pub type QFourTermRecurrence = FourTermRecurrence<Rational>;
