//! Euclidean Jordan algebras, their conformal Lie algebras, and the hidden
//! action of the conformal algebra on the Kepler cone.

pub mod algebra;
pub mod cone;
pub mod division;
pub mod error;
pub mod frames;
pub mod hidden;
pub mod linalg;
pub mod random;
pub mod report;
pub mod runner;
pub mod scalar;
pub mod spectral;
pub mod tkk;

pub use algebra::{Algebra, AlgebraSpec, Descriptor, Family, JordanElement};
pub use error::{JkaError, Result};
pub use linalg::Mat;
pub use scalar::{ComplexScalar, Field, ModP, Scalar, C64, CQ, Q};
