//! Identity suites: each identity is a pair of operators compared on a set
//! of test functions at sampled cone points.

use std::fmt;
use std::str::FromStr;
use std::sync::Arc;

use num_traits::One;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::action::{HiddenAction, HiddenConstants};
use super::function::{to_exponent, ExactValue, Exponent, Monomial, WeightedFunction};
use super::operator::{anticommutator, commutator, compose, lincomb, square, sum, ConeOperator};
use crate::algebra::{Algebra, AlgebraSpec};
use crate::cone::{cone_samples, rational_cone_samples, ConePoint, RationalConePoint};
use crate::error::{JkaError, Result};
use crate::random::{rational_vec, substream, JkaRng};
use crate::scalar::{q, ComplexScalar, CRat, Q, C64};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Suite {
    TkkHidden,
    VectorFields,
    Quadratic,
    Lenz,
    #[serde(rename = "appendixB")]
    AppendixB,
}

impl Suite {
    pub const ALL: [Suite; 5] = [Suite::TkkHidden, Suite::VectorFields, Suite::Quadratic, Suite::Lenz, Suite::AppendixB];

    pub fn name(self) -> &'static str {
        match self {
            Suite::TkkHidden => "tkk_hidden",
            Suite::VectorFields => "vector_fields",
            Suite::Quadratic => "quadratic",
            Suite::Lenz => "lenz",
            Suite::AppendixB => "appendixB",
        }
    }
}

impl fmt::Display for Suite {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Suite {
    type Err = JkaError;
    fn from_str(s: &str) -> Result<Self> {
        Suite::ALL
            .into_iter()
            .find(|k| k.name().eq_ignore_ascii_case(s.trim()))
            .ok_or_else(|| JkaError::UnknownSuite(s.to_string()))
    }
}

/// Which test functions to use.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum TestSet {
    /// `e^{−r}r^{−κ}x^m` for `|m| ≤ 2` and `e^{−r}r^{−κ−1}x^m` for `|m| ≤ 1`.
    Default,
    /// A seeded subset of the default set of the given size (always keeps the
    /// two constant-monomial members).
    Sampled(usize),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Precision {
    /// Complex rational coefficients; only evaluation rounds.
    Exact,
    /// `f64` coefficients throughout.
    Float,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SuiteOptions {
    pub seed: u64,
    pub points: usize,
    pub tol: f64,
    pub test_set: TestSet,
    pub precision: Precision,
}

impl Default for SuiteOptions {
    fn default() -> Self {
        SuiteOptions { seed: 0, points: 20, tol: 1e-8, test_set: TestSet::Default, precision: Precision::Exact }
    }
}

/// How a measured value is judged.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Criterion {
    /// Pass iff the residual is at most the threshold.
    AtMost,
    /// Pass iff the value exceeds the threshold (sensitivity checks).
    Exceeds,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct IdentityResult {
    pub id: String,
    pub value: f64,
    pub threshold: f64,
    pub criterion: Criterion,
    pub pass: bool,
}

impl IdentityResult {
    pub fn at_most(id: &str, value: f64, tol: f64) -> Self {
        IdentityResult { id: id.into(), value, threshold: tol, criterion: Criterion::AtMost, pass: value <= tol }
    }

    pub fn exceeds(id: &str, value: f64, threshold: f64) -> Self {
        IdentityResult { id: id.into(), value, threshold, criterion: Criterion::Exceeds, pass: value > threshold }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SuiteResult {
    pub algebra: AlgebraSpec,
    pub suite: Suite,
    pub identities: Vec<IdentityResult>,
}

impl SuiteResult {
    pub fn pass(&self) -> bool {
        self.identities.iter().all(|i| i.pass)
    }
}

/// The default test set; `κ = (ρ/2 − 1)δ/2`.
pub fn default_test_set<C: ComplexScalar>(alg: &Algebra) -> Vec<WeightedFunction<C>> {
    let dim = alg.dim();
    let kappa = HiddenConstants::for_algebra(alg).kappa;
    let s0 = -to_exponent(&kappa);
    let minus_one = Exponent::from_integer(-1);
    let mut out = Vec::new();
    for m in Monomial::up_to_degree(dim, 2) {
        out.push(WeightedFunction::term(dim, C::one(), minus_one, s0, m));
    }
    for m in Monomial::up_to_degree(dim, 1) {
        out.push(WeightedFunction::term(dim, C::one(), minus_one, s0 - 1, m));
    }
    out
}

pub fn test_set<C: ComplexScalar>(alg: &Algebra, which: TestSet, seed: u64) -> Vec<WeightedFunction<C>> {
    let full = default_test_set::<C>(alg);
    match which {
        TestSet::Default => full,
        TestSet::Sampled(k) if k >= full.len() => full,
        TestSet::Sampled(k) => {
            use rand::seq::index::sample;
            let dim = alg.dim();
            // indices of the two constant-monomial members
            let n2 = Monomial::up_to_degree(dim, 2).len();
            let fixed = [0usize, n2];
            let rest: Vec<usize> = (0..full.len()).filter(|i| !fixed.contains(i)).collect();
            let mut g = substream(seed, 0x7e57);
            let mut pick: Vec<usize> = sample(&mut g, rest.len(), k.saturating_sub(2)).into_iter().map(|i| rest[i]).collect();
            pick.extend(fixed);
            pick.sort_unstable();
            pick.into_iter().map(|i| full[i].clone()).collect()
        }
    }
}

/// Evaluation points: rational ones for exact coefficients, so that a
/// residual is either exactly zero or evaluated after exact cancellation.
pub enum Samples {
    Float(Vec<ConePoint>),
    Exact(Vec<RationalConePoint>),
}

impl Samples {
    pub fn for_scalar<C: ComplexScalar>(alg: &Algebra, seed: u64, count: usize) -> Samples {
        if C::is_exact() {
            Samples::Exact(rational_cone_samples(alg, seed, count))
        } else {
            Samples::Float(cone_samples(alg, seed, count))
        }
    }

    pub fn len(&self) -> usize {
        match self {
            Samples::Float(p) => p.len(),
            Samples::Exact(p) => p.len(),
        }
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }
}

fn exact_values<C: ComplexScalar>(f: &WeightedFunction<C>, points: &[RationalConePoint]) -> Result<Vec<ExactValue>> {
    if !C::is_exact() {
        return Err(JkaError::InvalidInput("rational points need exact coefficients".into()));
    }
    points.iter().map(|p| f.eval_exact(p.x(), p.r())).collect()
}

/// Largest relative difference `|l − r| / (1 + |l| + |r|)` over the points.
pub fn function_residual<C: ComplexScalar>(
    lhs: &WeightedFunction<C>,
    rhs: &WeightedFunction<C>,
    points: &Samples,
) -> Result<f64> {
    let mut worst: f64 = 0.0;
    match points {
        Samples::Float(pts) => {
            let (l, r) = (lhs.to_c64(), rhs.to_c64());
            for p in pts {
                let (a, b) = (l.eval(p.x(), p.r())?, r.eval(p.x(), p.r())?);
                worst = worst.max((a - b).norm() / (1.0 + a.norm() + b.norm()));
            }
        }
        Samples::Exact(pts) => {
            let diff = exact_values(&lhs.sub(rhs), pts)?;
            let (l, r) = (lhs.to_c64(), rhs.to_c64());
            for (d, p) in diff.into_iter().zip(pts) {
                if d.is_zero() {
                    continue;
                }
                let f = p.to_float();
                let scale = 1.0 + l.eval(f.x(), f.r())?.norm() + r.eval(f.x(), f.r())?.norm();
                worst = worst.max(d.to_c64().norm() / scale);
            }
        }
    }
    Ok(worst)
}

/// Largest absolute value of a function over the points.
pub fn function_max<C: ComplexScalar>(f: &WeightedFunction<C>, points: &Samples) -> Result<f64> {
    let mut worst: f64 = 0.0;
    match points {
        Samples::Float(pts) => {
            let f = f.to_c64();
            for p in pts {
                worst = worst.max(f.eval(p.x(), p.r())?.norm());
            }
        }
        Samples::Exact(pts) => {
            for v in exact_values(f, pts)? {
                worst = worst.max(v.to_c64().norm());
            }
        }
    }
    Ok(worst)
}

/// `max_{f,x} |(lhs f)(x) − (rhs f)(x)| / (1 + |(lhs f)(x)| + |(rhs f)(x)|)`.
pub fn identity_residual<C: ComplexScalar>(
    lhs: &ConeOperator<C>,
    rhs: &ConeOperator<C>,
    tests: &[WeightedFunction<C>],
    points: &Samples,
) -> Result<f64> {
    if tests.is_empty() || points.is_empty() {
        return Err(JkaError::InvalidInput("empty test set or point set".into()));
    }
    let per: Vec<Result<f64>> = tests
        .par_iter()
        .map(|f| function_residual(&lhs.apply(f), &rhs.apply(f), points))
        .collect();
    let mut worst: f64 = 0.0;
    for r in per {
        worst = worst.max(r?);
    }
    Ok(worst)
}

/// Random rational parameters for a suite, one stream per suite.
struct Params {
    g: JkaRng,
    dim: usize,
}

impl Params {
    fn new(seed: u64, suite: Suite, dim: usize) -> Self {
        Params { g: substream(seed, 0x5000 + suite as u64), dim }
    }

    fn vector(&mut self) -> Vec<Q> {
        rational_vec(&mut self.g, self.dim)
    }
}

/// Runs one suite in the requested precision.
pub fn run_identity_suite(alg: Arc<Algebra>, suite: Suite, opts: &SuiteOptions) -> Result<SuiteResult> {
    match opts.precision {
        Precision::Exact => run_suite_in::<CRat>(alg, suite, opts),
        Precision::Float => run_suite_in::<C64>(alg, suite, opts),
    }
}

pub fn run_suite_in<C: ComplexScalar>(alg: Arc<Algebra>, suite: Suite, opts: &SuiteOptions) -> Result<SuiteResult> {
    let points = Samples::for_scalar::<C>(&alg, opts.seed, opts.points);
    let tests = test_set::<C>(&alg, opts.test_set, opts.seed);
    let mut params = Params::new(opts.seed, suite, alg.dim());
    let identities = match suite {
        Suite::TkkHidden => tkk_hidden::<C>(&alg, &mut params, &tests, &points, opts.tol)?,
        Suite::VectorFields => vector_fields::<C>(&alg, &mut params, &tests, &points, opts.tol)?,
        Suite::Quadratic => quadratic::<C>(&alg, &mut params, &tests, &points, opts.tol)?,
        Suite::Lenz => lenz::<C>(&alg, &mut params, &tests, &points, opts.tol)?,
        Suite::AppendixB => appendix::<C>(&alg, &mut params, &tests, &points, opts.tol)?,
    };
    Ok(SuiteResult { algebra: alg.spec(), suite, identities })
}

type Check<C> = (&'static str, ConeOperator<C>, ConeOperator<C>);

fn run_checks<C: ComplexScalar>(
    checks: Vec<Check<C>>,
    tests: &[WeightedFunction<C>],
    points: &Samples,
    tol: f64,
) -> Result<Vec<IdentityResult>> {
    checks
        .into_iter()
        .map(|(id, l, r)| Ok(IdentityResult::at_most(id, identity_residual(&l, &r, tests, points)?, tol)))
        .collect()
}

fn tkk_hidden<C: ComplexScalar>(
    alg: &Arc<Algebra>,
    p: &mut Params,
    tests: &[WeightedFunction<C>],
    points: &Samples,
    tol: f64,
) -> Result<Vec<IdentityResult>> {
    let h = HiddenAction::<C>::new(alg.clone())?;
    let (u, v, z, w) = (p.vector(), p.vector(), p.vector(), p.vector());
    let two = C::from_i64(2);
    let uvz = alg.triple(&u, &v, &z);
    let vuz = alg.triple(&v, &u, &z);
    let vuw = alg.triple(&v, &u, &w);
    let checks: Vec<Check<C>> = vec![
        ("tkk.xx", commutator(&h.tilde_x(&u), &h.tilde_x(&v)), ConeOperator::zero()),
        ("tkk.yy", commutator(&h.tilde_y(&u), &h.tilde_y(&v)), ConeOperator::zero()),
        ("tkk.xy", commutator(&h.tilde_x(&u), &h.tilde_y(&v)), h.tilde_s(&u, &v).scale(-two)),
        ("tkk.sx", commutator(&h.tilde_s(&u, &v), &h.tilde_x(&z)), h.tilde_x(&uvz)),
        ("tkk.sy", commutator(&h.tilde_s(&u, &v), &h.tilde_y(&z)), h.tilde_y(&vuz).scale(-C::one())),
        (
            "tkk.ss",
            commutator(&h.tilde_s(&u, &v), &h.tilde_s(&z, &w)),
            lincomb(vec![(C::one(), h.tilde_s(&uvz, &w)), (-C::one(), h.tilde_s(&z, &vuw))]),
        ),
    ];
    run_checks(checks, tests, points, tol)
}

fn vector_fields<C: ComplexScalar>(
    alg: &Arc<Algebra>,
    p: &mut Params,
    tests: &[WeightedFunction<C>],
    points: &Samples,
    tol: f64,
) -> Result<Vec<IdentityResult>> {
    let h = HiddenAction::<C>::new(alg.clone())?;
    let (u, v, z, w) = (p.vector(), p.vector(), p.vector(), p.vector());
    let two = C::from_i64(2);
    let uvz = alg.triple(&u, &v, &z);
    let vuz = alg.triple(&v, &u, &z);
    let vuw = alg.triple(&v, &u, &w);
    let checks: Vec<Check<C>> = vec![
        ("vf.xx", commutator(&h.hat_x(&u), &h.hat_x(&v)), ConeOperator::zero()),
        ("vf.yy", commutator(&h.hat_y(&u), &h.hat_y(&v)), ConeOperator::zero()),
        ("vf.xy", commutator(&h.hat_x(&u), &h.hat_y(&v)), h.hat_s(&u, &v).scale(-two)),
        ("vf.sx", commutator(&h.hat_s(&u, &v), &h.hat_x(&z)), h.hat_x(&uvz)),
        ("vf.sy", commutator(&h.hat_s(&u, &v), &h.hat_y(&z)), h.hat_y(&vuz).scale(-C::one())),
        (
            "vf.ss",
            commutator(&h.hat_s(&u, &v), &h.hat_s(&z, &w)),
            lincomb(vec![(C::one(), h.hat_s(&uvz, &w)), (-C::one(), h.hat_s(&z, &vuw))]),
        ),
    ];
    run_checks(checks, tests, points, tol)
}

/// `Σ_α (1/g_α) f(b_α)`: an orthonormal-basis sum over the constructed basis.
fn basis_sum<C: ComplexScalar>(alg: &Algebra, f: impl Fn(&[Q]) -> ConeOperator<C>) -> ConeOperator<C> {
    let g = alg.gram();
    lincomb(
        (0..alg.dim())
            .map(|a| (C::from_q(&g[a].recip()), f(&alg.basis_vector::<Q>(a))))
            .collect(),
    )
}

fn quadratic<C: ComplexScalar>(
    alg: &Arc<Algebra>,
    p: &mut Params,
    tests: &[WeightedFunction<C>],
    points: &Samples,
    tol: f64,
) -> Result<Vec<IdentityResult>> {
    let h = HiddenAction::<C>::new(alg.clone())?;
    let k = h.constants().clone();
    let e = alg.unit::<Q>();
    let rho = C::from_i64(alg.rank() as i64);
    let two_over_rho = C::from_ratio(2, alg.rank() as i64);
    let half = C::from_ratio(1, 2);
    let id = ConeOperator::<C>::identity;
    let (xe, ye, le) = (h.tilde_x(&e), h.tilde_y(&e), h.tilde_l(&e));
    let u = p.vector();
    let (xu, yu, lu) = (h.tilde_x(&u), h.tilde_y(&u), h.tilde_l(&u));
    let cas = C::from_q(&k.casimir);
    let ground = HiddenConstants::ground(alg.rank(), alg.degree());

    let primary = lincomb(vec![
        (two_over_rho.clone(), basis_sum(alg, |b| square(&h.tilde_l(b)))),
        (-C::one(), square(&le)),
        (-half.clone(), anticommutator(&xe, &ye)),
    ]);
    // tildeL_{α,u} = [tildeL_α, tildeL_u]
    let l_alpha_u = |b: &[Q]| commutator(&h.tilde_l(b), &lu);
    let gram = alg.gram();
    let mut pair_sum = Vec::new();
    for a in 0..alg.dim() {
        for b in a + 1..alg.dim() {
            let c = h.tilde_l(&alg.basis_vector::<Q>(a));
            let d = h.tilde_l(&alg.basis_vector::<Q>(b));
            let w = C::from_q(&(Q::from_integer(2.into()) / (&gram[a] * &gram[b])));
            pair_sum.push((w, square(&commutator(&c, &d))));
        }
    }
    let checks: Vec<Check<C>> = vec![
        ("quad.primary", primary, id().scale(-cas.clone())),
        (
            "quad.xl",
            basis_sum(alg, |b| anticommutator(&h.tilde_x(b), &h.tilde_l(b))),
            anticommutator(&xe, &le).scale(rho.clone()),
        ),
        (
            "quad.yl",
            basis_sum(alg, |b| anticommutator(&h.tilde_y(b), &h.tilde_l(b))),
            anticommutator(&ye, &le).scale(rho.clone()),
        ),
        ("quad.xx", basis_sum(alg, |b| square(&h.tilde_x(b))), square(&xe).scale(rho.clone())),
        ("quad.yy", basis_sum(alg, |b| square(&h.tilde_y(b))), square(&ye).scale(rho.clone())),
        (
            "quad.xy",
            basis_sum(alg, |b| anticommutator(&h.tilde_x(b), &h.tilde_y(b))).scale(half.clone()),
            lincomb(vec![(rho.clone(), square(&le)), (rho.clone() * cas, id())]),
        ),
        (
            "quad.lll",
            basis_sum(alg, |b| anticommutator(&l_alpha_u(b), &h.tilde_l(b))).scale(two_over_rho.clone()),
            lincomb(vec![(-half.clone(), anticommutator(&xu, &ye)), (half.clone(), anticommutator(&xe, &yu))]),
        ),
        (
            "quad.llx",
            basis_sum(alg, |b| anticommutator(&l_alpha_u(b), &h.tilde_x(b))).scale(two_over_rho.clone()),
            lincomb(vec![(-C::one(), anticommutator(&xu, &le)), (C::one(), anticommutator(&lu, &xe))]),
        ),
        (
            "quad.lly",
            basis_sum(alg, |b| anticommutator(&l_alpha_u(b), &h.tilde_y(b))).scale(two_over_rho),
            lincomb(vec![(C::one(), anticommutator(&yu, &le)), (-C::one(), anticommutator(&lu, &ye))]),
        ),
        (
            "quad.laplacian",
            lincomb(pair_sum).scale(C::from_q(&k.a)),
            lincomb(vec![
                (half, anticommutator(&xe, &ye)),
                (-C::one(), square(&le)),
                (C::from_q(&(&ground * (&ground - Q::one()))), id()),
            ]),
        ),
    ];
    run_checks(checks, tests, points, tol)
}

fn lenz<C: ComplexScalar>(
    alg: &Arc<Algebra>,
    p: &mut Params,
    tests: &[WeightedFunction<C>],
    points: &Samples,
    tol: f64,
) -> Result<Vec<IdentityResult>> {
    let h = HiddenAction::<C>::new(alg.clone())?;
    let (u, v, z, w) = (p.vector(), p.vector(), p.vector(), p.vector());
    let ham = h.hamiltonian();
    let d = alg.lmul(&u).commutator(&alg.lmul(&v));
    let dz = d.apply(&z);
    let dw = d.apply(&w);
    let luv = h.l_uv(&u, &v);
    let checks: Vec<Check<C>> = vec![
        ("lenz.lh", commutator(&luv, &ham), ConeOperator::zero()),
        (
            "lenz.ll",
            commutator(&luv, &h.l_uv(&z, &w)),
            sum(&[h.l_uv(&dz, &w), h.l_uv(&z, &dw)]),
        ),
        ("lenz.la", commutator(&luv, &h.lenz(&z)), h.lenz(&dz)),
        ("lenz.ah", commutator(&h.lenz(&u), &ham), ConeOperator::zero()),
        (
            "lenz.aa",
            commutator(&h.lenz(&u), &h.lenz(&v)),
            compose(&[ham.clone(), luv.clone()]).scale(C::from_i64(-2)),
        ),
    ];
    run_checks(checks, tests, points, tol)
}

/// Projection onto the orthogonal complement of `e`.
fn perp(alg: &Algebra, u: &[Q]) -> Vec<Q> {
    let e = alg.unit::<Q>();
    let c = alg.inner(u, &e);
    u.iter().zip(&e).map(|(a, b)| a - &c * b).collect()
}

/// Sensitivity of the action to `A` and `B`.
pub const PERTURBATION: (i64, i64) = (1, 1000);
pub const DEPARTURE: f64 = 1e-4;

fn appendix<C: ComplexScalar>(
    alg: &Arc<Algebra>,
    p: &mut Params,
    tests: &[WeightedFunction<C>],
    points: &Samples,
    tol: f64,
) -> Result<Vec<IdentityResult>> {
    let dim = alg.dim();
    let k = HiddenConstants::for_algebra(alg);
    let eps = q(PERTURBATION.0, PERTURBATION.1);
    let exact = HiddenAction::<C>::new(alg.clone())?;
    let a_shift = HiddenAction::<C>::with_constants(alg.clone(), &k.a + &eps, k.b.clone())?;
    let b_shift = HiddenAction::<C>::with_constants(alg.clone(), k.a.clone(), &k.b + &eps)?;
    let e = alg.unit::<Q>();
    let u = p.vector();
    let v = p.vector();
    let (u0, v0) = (perp(alg, &u), perp(alg, &v));
    let one = WeightedFunction::<C>::one(dim);
    let two = C::from_i64(2);
    let rho_delta = (alg.rank() * alg.degree()) as i64;
    let mut out = Vec::new();

    // [X, ⟨u|x⟩] = 2 tildeL_u, and its failure when A moves
    let x_commutator = |h: &HiddenAction<C>| {
        let ux = ConeOperator::multiply(h.inner_form(&u), "<u|x>");
        (commutator(&h.x(), &ux), h.tilde_l(&u).scale(two.clone()))
    };
    let (l, r) = x_commutator(&exact);
    out.push(IdentityResult::at_most("appendix.x_commutator", identity_residual(&l, &r, tests, points)?, tol));
    let (l, r) = x_commutator(&a_shift);
    out.push(IdentityResult::exceeds("appendix.x_commutator_a_shift", identity_residual(&l, &r, tests, points)?, DEPARTURE));

    // [Δ, ⟨u|x⟩] = −2r tildeL_u + 2⟨u|x⟩ tildeL_e
    {
        let ux = ConeOperator::multiply(exact.inner_form(&u), "<u|x>");
        let r_op = ConeOperator::multiply(exact.inner_form(&e), "r");
        let rhs = lincomb(vec![
            (-two.clone(), compose(&[r_op, exact.tilde_l(&u)])),
            (two.clone(), compose(&[ux.clone(), exact.tilde_l(&e)])),
        ]);
        let lhs = commutator(&exact.laplacian(), &ux);
        out.push(IdentityResult::at_most("appendix.laplacian_commutator", identity_residual(&lhs, &rhs, tests, points)?, tol));
    }
    // Δ⟨u|x⟩ = −(ρδ/2)(⟨u|x⟩ − ⟨u|e⟩ r)
    {
        let lhs = exact.laplacian().apply(&exact.inner_form(&u));
        let ue = alg.inner(&u, &e);
        let rhs = exact
            .inner_form(&u)
            .sub(&exact.inner_form(&e).scale(&C::from_q(&ue)))
            .scale(&C::from_ratio(-rho_delta, 2));
        out.push(IdentityResult::at_most("appendix.laplacian_linear", function_residual(&lhs, &rhs, points)?, tol));
    }

    // O(1): [tildeL_v, [tildeL_u, X]](1) − [tildeL_{uv}, X](1), with u, v ⊥ e
    let o_fn = |h: &HiddenAction<C>| {
        let inner = commutator(&h.tilde_l(&u0), &h.x());
        let a = commutator(&h.tilde_l(&v0), &inner).apply(&one);
        let b = commutator(&h.tilde_l(&alg.mul(&u0, &v0)), &h.x()).apply(&one);
        a.sub(&b)
    };
    let zero = WeightedFunction::<C>::zero(dim);
    let o_exact = o_fn(&exact);
    out.push(IdentityResult::at_most("appendix.o_one", function_residual(&o_exact, &zero, points)?, tol));
    // with B + ε the residual is −2ε(−⟨x|uv⟩/r² + ⟨x|u⟩⟨x|v⟩/r³)
    let o_shift = o_fn(&b_shift);
    let pred_o = {
        let r2 = WeightedFunction::rpow(dim, C::one(), Exponent::from_integer(-2));
        let r3 = WeightedFunction::rpow(dim, C::one(), Exponent::from_integer(-3));
        let uv = exact.inner_form(&alg.mul(&u0, &v0)).mul(&r2).neg();
        let prod = exact.inner_form(&u0).mul(&exact.inner_form(&v0)).mul(&r3);
        uv.add(&prod).scale(&(C::from_q(&eps) * C::from_i64(-2)))
    };
    out.push(IdentityResult::at_most("appendix.o_one_b_shift", function_residual(&o_shift, &pred_o, points)?, tol));

    // 𝒪(1) = [[tildeL_u, X], X](1), with u ⊥ e
    let big_o = |h: &HiddenAction<C>| commutator(&commutator(&h.tilde_l(&u0), &h.x()), &h.x()).apply(&one);
    out.push(IdentityResult::at_most("appendix.scr_o_one", function_residual(&big_o(&exact), &zero, points)?, tol));
    let shifted = big_o(&b_shift);
    let pred = exact
        .inner_form(&u0)
        .mul(&WeightedFunction::rpow(dim, C::one(), Exponent::from_integer(-3)))
        .scale(&(C::from_i64(rho_delta) * C::from_q(&eps)));
    out.push(IdentityResult::at_most("appendix.scr_o_one_b_shift", function_residual(&shifted, &pred, points)?, tol));
    out.push(IdentityResult::exceeds("appendix.scr_o_one_b_departure", function_max(&shifted, points)?, DEPARTURE));
    // for rank two the residual does not involve A at all
    if alg.rank() > 2 {
        out.push(IdentityResult::exceeds("appendix.scr_o_one_a_departure", function_max(&big_o(&a_shift), points)?, DEPARTURE));
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::Family;

    #[test]
    fn suite_names_roundtrip() {
        for s in Suite::ALL {
            assert_eq!(s.name().parse::<Suite>().unwrap(), s);
        }
        assert!("nope".parse::<Suite>().is_err());
    }

    #[test]
    fn default_test_set_size() {
        let alg = Algebra::new(AlgebraSpec::new(Family::Gamma, 3)).unwrap();
        // 1 + 4 + 10 quadratic-or-less, plus 1 + 4
        assert_eq!(default_test_set::<CRat>(&alg).len(), 20);
        assert_eq!(test_set::<CRat>(&alg, TestSet::Sampled(6), 1).len(), 6);
    }
}
