//! Functions on the cone and the differential operators acting on them.

pub mod action;
pub mod function;
pub mod operator;
pub mod suites;

pub use action::{HiddenAction, HiddenConstants};
pub use function::{to_exponent, ExactValue, Exponent, Monomial, TermKey, WeightedFunction};
pub use operator::{anticommutator, commutator, compose, lincomb, ConeOperator};
pub use suites::{
    function_max, function_residual, identity_residual, run_identity_suite, Criterion, IdentityResult, Precision, Samples, Suite, SuiteOptions,
    SuiteResult, TestSet,
};
