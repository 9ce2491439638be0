//! Shared fixtures for the benchmarks.

use std::sync::Arc;

use jka::hidden::suites::default_test_set;
use jka::hidden::{HiddenAction, Samples, WeightedFunction};
use jka::scalar::CRat;
use jka::Algebra;

pub fn algebra(spec: &str) -> Arc<Algebra> {
    Algebra::shared(spec.parse().expect("valid algebra spec")).expect("algebra builds")
}

/// The operators, test functions and exact sample points for one algebra.
pub struct HiddenFixture {
    pub action: HiddenAction<CRat>,
    pub tests: Vec<WeightedFunction<CRat>>,
    pub points: Samples,
}

impl HiddenFixture {
    pub fn new(spec: &str, points: usize) -> Self {
        let alg = algebra(spec);
        let tests = default_test_set::<CRat>(&alg);
        let points = Samples::for_scalar::<CRat>(&alg, 0, points);
        HiddenFixture { action: HiddenAction::new(alg).expect("action builds"), tests, points }
    }
}
