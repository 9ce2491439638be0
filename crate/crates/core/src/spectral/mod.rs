//! Laguerre machinery, polynomial spaces on the cone, and the bound-state
//! spectrum.

pub mod basis;
pub mod h0;
pub mod harmonic;
pub mod laguerre;

pub use basis::{default_point_count, restricted_basis, restricted_basis_on, Domain, FilteredBasis};
pub use h0::{bound_state_check, bound_state_energy, h0_matrix_spectrum, BoundState, H0Matrix, Level, SpectrumResult};
pub use harmonic::{
    harmonic_dimension, phi_klm_eigenvalue, phi_klm_gamma, phi_klm_residual, skew_form, skew_symmetry_check, slice_laplacian_residual,
    solid_harmonics, SkewCheck, SolidHarmonic,
};
pub use laguerre::{laguerre_norm, laguerre_orthogonality_check, GaussLaguerre, LaguerrePoly, UniPoly};
