//! The Kepler cone: rank-one semi-positive elements `x² = tr(x) x`, `tr x > 0`.

use num_traits::Signed;
use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::algebra::Algebra;
use crate::error::{JkaError, Result};
use crate::frames::{norm, standard_frame};
use crate::linalg::{expm, Mat};
use crate::random::{rational_vec, rng, small_rational, substream, JkaRng};
use crate::scalar::{q_to_f64, Q};

pub const MEMBERSHIP_TOL: f64 = 1e-10;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ConePoint {
    x: Vec<f64>,
    r: f64,
}

impl ConePoint {
    pub fn new(alg: &Algebra, x: Vec<f64>, tol: f64) -> Result<Self> {
        if x.len() != alg.dim() {
            return Err(JkaError::InvalidInput(format!("expected {} coordinates", alg.dim())));
        }
        let defect = cone_defect(alg, &x);
        if !(alg.trace(&x) > 0.0) || defect > tol {
            return Err(JkaError::NotRankOne { defect });
        }
        let r = alg.inner(&alg.unit::<f64>(), &x);
        Ok(ConePoint { x, r })
    }

    pub fn x(&self) -> &[f64] {
        &self.x
    }

    /// `⟨e|x⟩ = tr(x)/ρ`.
    pub fn r(&self) -> f64 {
        self.r
    }

    pub fn scaled(&self, t: f64) -> ConePoint {
        ConePoint { x: self.x.iter().map(|v| v * t).collect(), r: self.r * t }
    }
}

/// A tangent vector at a cone point.
#[derive(Clone, Debug)]
pub struct TangentVector {
    pub base: ConePoint,
    pub dir: Vec<f64>,
}

/// `‖x² − tr(x) x‖ / ‖x‖²`.
pub fn cone_defect(alg: &Algebra, x: &[f64]) -> f64 {
    let tr = alg.trace(x);
    let sq = alg.square(x);
    let diff: Vec<f64> = sq.iter().zip(x).map(|(s, v)| s - tr * v).collect();
    let n = norm(alg, x);
    if n == 0.0 {
        return f64::INFINITY;
    }
    norm(alg, &diff) / (n * n)
}

pub fn cone_contains(alg: &Algebra, x: &[f64], tol: f64) -> bool {
    alg.trace(x) > 0.0 && cone_defect(alg, x) <= tol
}

/// The commutators `[L_α, L_β]`, `α < β`, over the constructed basis.
pub fn derivation_generators(alg: &Algebra) -> Vec<(usize, usize, Mat<f64>)> {
    let n = alg.dim();
    let ls: Vec<Mat<f64>> = (0..n).map(|i| alg.lmul(&alg.basis_vector::<f64>(i))).collect();
    let mut out = Vec::new();
    for a in 0..n {
        for b in a + 1..n {
            let d = ls[a].commutator(&ls[b]);
            if !d.is_zero() {
                out.push((a, b, d));
            }
        }
    }
    out
}

/// `t·exp(D) e₁₁` with `t ∈ [1/2, 2]` and `D` a random rational
/// combination of the `[L_α, L_β]`.
pub fn cone_sample(alg: &Algebra, gens: &[(usize, usize, Mat<f64>)], rng: &mut JkaRng) -> ConePoint {
    let n = alg.dim();
    let e11: Vec<f64> = standard_frame(alg)[0].iter().map(q_to_f64).collect();
    let t: f64 = rng.gen_range(0.5..=2.0);
    let mut d = Mat::<f64>::zeros(n, n);
    for (_, _, g) in gens {
        let c: Q = small_rational(rng);
        d = d.add(&g.scale(&q_to_f64(&c)));
    }
    let x: Vec<f64> = expm(&d).apply(&e11).iter().map(|v| t * v).collect();
    let r = alg.inner(&alg.unit::<f64>(), &x);
    ConePoint { x, r }
}

/// `count` seeded cone points.
pub fn cone_samples(alg: &Algebra, seed: u64, count: usize) -> Vec<ConePoint> {
    let gens = derivation_generators(alg);
    let mut g = substream(seed, 0xc0e);
    (0..count).map(|_| cone_sample(alg, &gens, &mut g)).collect()
}

/// A cone point with rational coordinates.
#[derive(Clone, Debug, PartialEq)]
pub struct RationalConePoint {
    x: Vec<Q>,
    r: Q,
}

impl RationalConePoint {
    /// Checks `x² = tr(x) x` and `tr x > 0` exactly.
    pub fn new(alg: &Algebra, x: Vec<Q>) -> Result<Self> {
        if x.len() != alg.dim() {
            return Err(JkaError::InvalidInput(format!("expected {} coordinates", alg.dim())));
        }
        let tr = alg.trace(&x);
        let sq = alg.square(&x);
        let rank_one = sq.iter().zip(&x).all(|(s, v)| *s == &tr * v);
        if !tr.is_positive() || !rank_one {
            let f: Vec<f64> = x.iter().map(q_to_f64).collect();
            return Err(JkaError::NotRankOne { defect: cone_defect(alg, &f) });
        }
        let r = alg.inner(&alg.unit::<Q>(), &x);
        Ok(RationalConePoint { x, r })
    }

    pub fn x(&self) -> &[Q] {
        &self.x
    }

    pub fn r(&self) -> &Q {
        &self.r
    }

    pub fn to_float(&self) -> ConePoint {
        ConePoint { x: self.x.iter().map(q_to_f64).collect(), r: q_to_f64(&self.r) }
    }
}

/// `P(y) e₁₁` for a random rational `y`, rescaled so that `r` is a rational
/// in `[1/2, 2]`. The quadratic representation preserves rank, so the result
/// is an exact cone point.
pub fn rational_cone_sample(alg: &Algebra, rng: &mut JkaRng) -> RationalConePoint {
    let e11 = standard_frame(alg).swap_remove(0);
    let unit = alg.unit::<Q>();
    loop {
        let y = rational_vec(rng, alg.dim());
        let x = alg.quadratic_rep(&y).apply(&e11);
        let r = alg.inner(&unit, &x);
        if !r.is_positive() {
            continue;
        }
        let t = Q::new(rng.gen_range(2..=8).into(), 4.into());
        let scale = t / r;
        let x = x.iter().map(|v| v * &scale).collect();
        return RationalConePoint::new(alg, x).expect("quadratic image of a primitive idempotent has rank one");
    }
}

pub fn rational_cone_samples(alg: &Algebra, seed: u64, count: usize) -> Vec<RationalConePoint> {
    let mut g = substream(seed, 0xc0f);
    (0..count).map(|_| rational_cone_sample(alg, &mut g)).collect()
}

/// `κ⟨u|x⟩/r + (ρδ/4)⟨u|e⟩`, with `κ = (ρ/2 − 1)δ/2`.
pub fn lambda_weight(alg: &Algebra, u: &[f64], x: &ConePoint) -> Result<f64> {
    if x.r <= 1e-12 {
        return Err(JkaError::ApexEvaluation);
    }
    let rho = alg.rank() as f64;
    let delta = alg.degree() as f64;
    let kappa = (rho / 2.0 - 1.0) * delta / 2.0;
    let e = alg.unit::<f64>();
    Ok(kappa * alg.inner(u, &x.x) / x.r + rho * delta / 4.0 * alg.inner(u, &e))
}

/// Max-norm difference between `Σ_{α,β}|[L_α,L_β]x⟩⟨[L_α,L_β]x| / (ρ²/2·(1 + δ(ρ−2)/4))`
/// (orthonormal sum) and `r L_x − |x⟩⟨x|`.
pub fn projector_identity_residual(alg: &Algebra, gens: &[(usize, usize, Mat<f64>)], x: &ConePoint) -> f64 {
    let rho = alg.rank() as f64;
    let delta = alg.degree() as f64;
    let g = alg.gram_as::<f64>();
    let n = alg.dim();
    let mut lhs = Mat::<f64>::zeros(n, n);
    for (a, b, d) in gens {
        let dx = d.apply(&x.x);
        // both orders contribute the same outer product
        let w = 2.0 / (g[*a] * g[*b]);
        lhs = lhs.add(&alg.ket_bra(&dx, &dx).scale(&w));
    }
    let lhs = lhs.scale(&(1.0 / (rho * rho / 2.0 * (1.0 + delta * (rho - 2.0) / 4.0))));
    let rhs = alg.lmul(&x.x).scale(&x.r).sub(&alg.ket_bra(&x.x, &x.x));
    lhs.sub(&rhs).max_abs()
}

/// Orthogonal projection onto `⊕_j V_1j` for the frame through `x`:
/// `P₁(c) + P_½(c) = L_c(3 − 2L_c)` with `c = x/tr(x)`.
pub fn tangent_projector(alg: &Algebra, x: &ConePoint) -> Mat<f64> {
    let tr = alg.trace(&x.x);
    let c: Vec<f64> = x.x.iter().map(|v| v / tr).collect();
    let l = alg.lmul(&c);
    let n = alg.dim();
    l.matmul(&Mat::identity(n).scale(&3.0).sub(&l.scale(&2.0)))
}

pub fn tangent_project(alg: &Algebra, x: &ConePoint, v: &[f64]) -> TangentVector {
    TangentVector { base: x.clone(), dir: tangent_projector(alg, x).apply(v) }
}

/// `(2/ρ)⟨v|v⟩ − ⟨e|v⟩²`.
pub fn kepler_metric(alg: &Algebra, v: &[f64]) -> f64 {
    let e = alg.unit::<f64>();
    let ev = alg.inner(&e, v);
    2.0 / alg.rank() as f64 * alg.inner(v, v) - ev * ev
}

/// `x ↦ (tr x/ρ, √2 x/|x|)`.
pub fn cone_to_product(alg: &Algebra, x: &[f64]) -> (f64, Vec<f64>) {
    let n = norm(alg, x);
    (alg.trace(x) / alg.rank() as f64, x.iter().map(|v| 2f64.sqrt() * v / n).collect())
}

/// Inverse of [`cone_to_product`] on `ℝ₊ × ℙ`.
pub fn product_to_cone(alg: &Algebra, r: f64, p: &[f64]) -> Vec<f64> {
    let rho = alg.rank() as f64;
    p.iter().map(|v| r * rho * v / (2.0 * rho).sqrt()).collect()
}

/// Rescales a cone point onto `ℙ = {tr x = √(2ρ)}`.
pub fn to_slice(alg: &Algebra, x: &ConePoint) -> ConePoint {
    let rho = alg.rank() as f64;
    x.scaled((2.0 * rho).sqrt() / alg.trace(&x.x))
}

/// `|ds²_K(v, v) − (dr² + r² ds²_E|ℙ)(dι v, dι v)|` for a tangent vector `v` at `x`.
pub fn isometry_defect(alg: &Algebra, t: &TangentVector) -> f64 {
    let x = t.base.x();
    let v = &t.dir;
    let e = alg.unit::<f64>();
    let (r, _) = cone_to_product(alg, x);
    let n = norm(alg, x);
    let xv = alg.inner(x, v);
    let dp: Vec<f64> = v
        .iter()
        .zip(x)
        .map(|(vi, xi)| 2f64.sqrt() * (vi / n - xi * xv / (n * n * n)))
        .collect();
    let dr = alg.inner(&e, v);
    let product = dr * dr + r * r * alg.inner(&dp, &dp);
    (kepler_metric(alg, v) - product).abs()
}

/// Unit-speed check along the radial ray through `p ∈ ℙ`: returns `ds²_K(ẋ, ẋ)`.
pub fn radial_speed_squared(alg: &Algebra, p: &[f64]) -> f64 {
    let a = product_to_cone(alg, 1.0, p);
    let b = product_to_cone(alg, 0.0, p);
    let v: Vec<f64> = a.iter().zip(&b).map(|(a, b)| a - b).collect();
    kepler_metric(alg, &v)
}

/// A seeded cone point, for callers that only need one.
pub fn sample_point(alg: &Algebra, seed: u64) -> ConePoint {
    let gens = derivation_generators(alg);
    cone_sample(alg, &gens, &mut rng(seed))
}
