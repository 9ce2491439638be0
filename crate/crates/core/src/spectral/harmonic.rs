//! Explicit eigenfunctions for the light-cone algebras `Γ(n)`: solid harmonics,
//! the Laguerre-times-harmonic eigenbasis of `H̃₀`, and a quadrature check of
//! skew-symmetry.

use std::collections::HashMap;
use std::f64::consts::PI;
use std::sync::Arc;

use num_traits::{One, Zero};
use rand_distr::{Distribution, StandardNormal};
use serde::Serialize;
use statrs::function::gamma::gamma;

use super::laguerre::LaguerrePoly;
use crate::algebra::{Algebra, AlgebraSpec, Family};
use crate::error::{JkaError, Result};
use crate::hidden::{function_residual, to_exponent, ConeOperator, Exponent, HiddenAction, HiddenConstants, Monomial, Samples, WeightedFunction};
use crate::linalg::Mat;
use crate::random::substream;
use crate::scalar::{q, q_to_f64, qi, ComplexScalar, CRat, Scalar, C64, Q};

/// A homogeneous harmonic polynomial on `ℝⁿ` with exact coefficients.
#[derive(Clone, Debug, PartialEq)]
pub struct SolidHarmonic {
    pub n: usize,
    pub degree: usize,
    pub terms: Vec<(Monomial, Q)>,
}

impl SolidHarmonic {
    /// The same polynomial in the spatial coordinates `x₁…xₙ` of `Γ(n)`.
    pub fn on_cone<C: ComplexScalar>(&self) -> WeightedFunction<C> {
        let dim = self.n + 1;
        let mut f = WeightedFunction::zero(dim);
        for (m, c) in &self.terms {
            let mut exps = vec![0u8];
            exps.extend_from_slice(m.exponents());
            let key = Monomial::from_exponents(&exps);
            f = f.add(&WeightedFunction::term(dim, C::from_q(c), Exponent::zero(), Exponent::zero(), key));
        }
        f
    }

    pub fn eval(&self, x: &[f64]) -> f64 {
        self.terms.iter().map(|(m, c)| q_to_f64(c) * m.eval(x)).sum()
    }
}

fn gamma_algebra(n: usize) -> Result<Arc<Algebra>> {
    Algebra::shared(AlgebraSpec::new(Family::Gamma, n))
}

fn factorial_weight(m: &Monomial) -> Q {
    m.exponents().iter().fold(Q::one(), |acc, &a| acc * (1..=a as i64).fold(Q::one(), |f, k| f * qi(k)))
}

fn fischer(a: &[(Monomial, Q)], b: &HashMap<Monomial, Q>) -> Q {
    a.iter().filter_map(|(m, c)| b.get(m).map(|d| c * d * factorial_weight(m))).fold(Q::zero(), |s, v| s + v)
}

/// `C(n+l−1, l) − C(n+l−3, l−2)`.
pub fn harmonic_dimension(n: usize, l: usize) -> usize {
    let binom = |a: usize, b: usize| -> usize { (0..b).fold(1usize, |acc, k| acc * (a - k) / (k + 1)) };
    let all = binom(n + l - 1, l);
    if l < 2 {
        all
    } else {
        all - binom(n + l - 3, l - 2)
    }
}

/// A basis of harmonic polynomials of degree `l` on `ℝⁿ`: the kernel of the
/// Euclidean Laplacian on degree-`l` forms, orthogonalized for the Fischer
/// product `⟨x^a|x^b⟩ = δ_ab a!`.
pub fn solid_harmonics(n: usize, l: usize) -> Result<Vec<SolidHarmonic>> {
    if n == 0 {
        return Err(JkaError::InvalidInput("harmonics need at least one variable".into()));
    }
    let top = Monomial::of_degree(n, l);
    let kernel: Vec<Vec<Q>> = if l < 2 {
        (0..top.len()).map(|j| (0..top.len()).map(|i| if i == j { Q::one() } else { Q::zero() }).collect()).collect()
    } else {
        let low = Monomial::of_degree(n, l - 2);
        let row: HashMap<Monomial, usize> = low.iter().enumerate().map(|(i, m)| (*m, i)).collect();
        let mut lap = Mat::<Q>::zeros(low.len(), top.len());
        for (j, m) in top.iter().enumerate() {
            for i in 0..n {
                let a = m.exponent(i) as i64;
                if a >= 2 {
                    let target = m.lower(i).lower(i);
                    let r = row[&target];
                    let v = lap.at(r, j) + qi(a * (a - 1));
                    lap.set(r, j, v);
                }
            }
        }
        lap.nullspace()
    };
    let mut out: Vec<SolidHarmonic> = Vec::new();
    let mut lookups: Vec<HashMap<Monomial, Q>> = Vec::new();
    for v in kernel {
        let mut terms: HashMap<Monomial, Q> = top.iter().zip(v).filter(|(_, c)| !c.is_zero()).map(|(m, c)| (*m, c)).collect();
        for (prev, look) in out.iter().zip(&lookups) {
            let list: Vec<(Monomial, Q)> = terms.iter().map(|(m, c)| (*m, c.clone())).collect();
            let coef = fischer(&list, look) / fischer(&prev.terms, look);
            for (m, c) in &prev.terms {
                let e = terms.entry(*m).or_insert_with(Q::zero);
                *e -= &coef * c;
            }
        }
        let mut list: Vec<(Monomial, Q)> = terms.into_iter().filter(|(_, c)| !c.is_zero()).collect();
        list.sort_by(|a, b| b.0.cmp(&a.0));
        lookups.push(list.iter().cloned().collect());
        out.push(SolidHarmonic { n, degree: l, terms: list });
    }
    let want = harmonic_dimension(n, l);
    if out.len() != want {
        return Err(JkaError::InvalidInput(format!("found {} harmonics of degree {l}, expected {want}", out.len())));
    }
    Ok(out)
}

/// `−(k + l − 1 + ρδ/4)`.
pub fn phi_klm_eigenvalue(n: usize, k: usize, l: usize) -> Q {
    -(qi(k as i64 + l as i64 - 1) + HiddenConstants::ground(2, n - 1))
}

/// `r^{−κ} L_{k−1}^{2l+ρδ/2−1}(2r) e^{−r} Y(x)` with `Y` the `m`-th solid
/// harmonic of degree `l` in the spatial coordinates.
pub fn phi_klm_gamma<C: ComplexScalar>(n: usize, k: usize, l: usize, m: usize) -> Result<WeightedFunction<C>> {
    let alg = gamma_algebra(n)?;
    if k == 0 {
        return Err(JkaError::InvalidInput("the radial index starts at 1".into()));
    }
    let harmonics = solid_harmonics(n, l)?;
    let y = harmonics.get(m).ok_or_else(|| {
        JkaError::InvalidInput(format!("only {} harmonics of degree {l} on ℝ^{n}", harmonics.len()))
    })?;
    let rho = alg.rank() as i64;
    let delta = alg.degree() as i64;
    let alpha = qi(2 * l as i64) + q(rho * delta, 2) - Q::one();
    let kappa = to_exponent(&HiddenConstants::for_algebra(&alg).kappa);
    let lag = LaguerrePoly::new(k - 1, &alpha).poly.dilate(&qi(2));
    let dim = alg.dim();
    let mut radial = WeightedFunction::zero(dim);
    for (j, c) in lag.0.iter().enumerate() {
        if !c.is_zero() {
            let s = Exponent::from_integer(j as i64) - kappa;
            radial = radial.add(&WeightedFunction::term(dim, C::from_q(c), Exponent::from_integer(-1), s, Monomial::one(dim)));
        }
    }
    Ok(radial.mul(&y.on_cone::<C>()))
}

/// Largest relative residual of `H̃₀ φ − λ φ` at exact cone points.
pub fn phi_klm_residual(n: usize, k: usize, l: usize, m: usize, seed: u64, points: usize) -> Result<f64> {
    let alg = gamma_algebra(n)?;
    let phi = phi_klm_gamma::<CRat>(n, k, l, m)?;
    let h = HiddenAction::<CRat>::new(alg.clone())?;
    let lhs = h.h0_tilde().apply(&phi);
    let rhs = phi.scale(&CRat::from_q(&phi_klm_eigenvalue(n, k, l)));
    function_residual(&lhs, &rhs, &Samples::for_scalar::<CRat>(&alg, seed, points))
}

/// Largest relative residual of `Δ Y + l(l + ρδ/2 − 1) Y` at exact cone points,
/// `Δ` the angular Laplacian of the hidden action.
pub fn slice_laplacian_residual(n: usize, l: usize, m: usize, seed: u64, points: usize) -> Result<f64> {
    let alg = gamma_algebra(n)?;
    let harmonics = solid_harmonics(n, l)?;
    let y = harmonics
        .get(m)
        .ok_or_else(|| JkaError::InvalidInput(format!("only {} harmonics of degree {l}", harmonics.len())))?
        .on_cone::<CRat>();
    let h = HiddenAction::<CRat>::new(alg.clone())?;
    let lq = qi(l as i64);
    let shift = q((alg.rank() * alg.degree()) as i64, 2) - Q::one();
    let eigen = -(&lq * (&lq + shift));
    let lhs = h.laplacian().apply(&y);
    let rhs = y.scale(&CRat::from_q(&eigen));
    function_residual(&lhs, &rhs, &Samples::for_scalar::<CRat>(&alg, seed, points))
}

/// Result of integrating `(Tψ₁)ψ₂ + ψ₁(Tψ₂)` over the cone.
#[derive(Clone, Debug, Serialize)]
pub struct SkewCheck {
    pub integral: f64,
    /// Monte Carlo standard error of `integral`.
    pub std_error: f64,
    /// The same integral with absolute values, for scale.
    pub scale: f64,
    pub directions: usize,
}

impl SkewCheck {
    pub fn passed(&self) -> bool {
        self.integral.abs() <= 5.0 * self.std_error + 1e-10 * self.scale
    }
}

/// `∫ (Tψ₁)ψ₂ + ψ₁(Tψ₂)` against `(1/r) vol = r^{n−2} dr dω` on the cone of
/// `Γ(n)`, Gauss–Laguerre in `r` and antithetic Monte Carlo over the sphere.
/// The functions must decay like `e^{−r}`.
pub fn skew_form(
    n: usize,
    op: &ConeOperator<C64>,
    psi1: &WeightedFunction<C64>,
    psi2: &WeightedFunction<C64>,
    seed: u64,
    directions: usize,
    order: usize,
) -> Result<SkewCheck> {
    if n < 2 || directions < 2 {
        return Err(JkaError::InvalidInput("need n ≥ 2 and at least two directions".into()));
    }
    let t1 = op.apply(psi1);
    let t2 = op.apply(psi2);
    let rule = super::laguerre::GaussLaguerre::new(order, n as f64 - 2.0)?;
    // r = t/2 turns e^{−2r} r^{n−2} dr into 2^{1−n} t^{n−2} e^{−t} dt
    let jac = 0.5f64.powi(n as i32 - 1);
    let area = 2.0 * PI.powf(n as f64 / 2.0) / gamma(n as f64 / 2.0);
    let mut rng = substream(seed, 0x5e3);
    let radial = |omega: &[f64]| -> Result<(f64, f64)> {
        let (mut val, mut abs) = (0.0, 0.0);
        for (&t, &w) in rule.nodes.iter().zip(&rule.weights) {
            let r = t / 2.0;
            let mut x = vec![r];
            x.extend(omega.iter().map(|o| r * o));
            let a = t1.eval(&x, r)?.re * psi2.eval(&x, r)?.re;
            let b = psi1.eval(&x, r)?.re * t2.eval(&x, r)?.re;
            let lift = w * t.exp() * jac;
            val += lift * (a + b);
            abs += lift * (a.abs() + b.abs());
        }
        Ok((val, abs))
    };
    let pairs = directions / 2;
    let (mut sum, mut sum_sq, mut abs_sum) = (0.0, 0.0, 0.0);
    for _ in 0..pairs {
        let g: Vec<f64> = (0..n).map(|_| StandardNormal.sample(&mut rng)).collect();
        let norm = g.iter().map(|v| v * v).sum::<f64>().sqrt();
        let omega: Vec<f64> = g.iter().map(|v| v / norm).collect();
        let flipped: Vec<f64> = omega.iter().map(|v| -v).collect();
        let (v1, a1) = radial(&omega)?;
        let (v2, a2) = radial(&flipped)?;
        let v = 0.5 * (v1 + v2);
        sum += v;
        sum_sq += v * v;
        abs_sum += 0.5 * (a1 + a2);
    }
    let p = pairs as f64;
    let mean = sum / p;
    let var = ((sum_sq / p - mean * mean) * p / (p - 1.0).max(1.0)).max(0.0);
    Ok(SkewCheck {
        integral: area * mean,
        std_error: area * (var / p).sqrt(),
        scale: area * abs_sum / p,
        directions: 2 * pairs,
    })
}

/// [`skew_form`] for `tildeL_u`.
pub fn skew_symmetry_check(
    n: usize,
    u: &[Q],
    psi1: &WeightedFunction<C64>,
    psi2: &WeightedFunction<C64>,
    seed: u64,
    directions: usize,
) -> Result<SkewCheck> {
    let alg = gamma_algebra(n)?;
    if u.len() != alg.dim() {
        return Err(JkaError::InvalidInput(format!("expected {} coordinates, got {}", alg.dim(), u.len())));
    }
    let h = HiddenAction::<C64>::new(alg)?;
    skew_form(n, &h.tilde_l(u), psi1, psi2, seed, directions, 24)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn harmonic_counts() {
        for l in 0..5 {
            assert_eq!(solid_harmonics(3, l).unwrap().len(), 2 * l + 1);
        }
        assert_eq!(solid_harmonics(4, 2).unwrap().len(), 9);
    }

    #[test]
    fn harmonics_are_fischer_orthogonal() {
        let hs = solid_harmonics(3, 3).unwrap();
        for i in 0..hs.len() {
            let look: HashMap<Monomial, Q> = hs[i].terms.iter().cloned().collect();
            for h in &hs[..i] {
                assert!(fischer(&h.terms, &look).is_zero());
            }
        }
    }

    #[test]
    fn eigenvalue_examples() {
        assert_eq!(phi_klm_eigenvalue(3, 1, 0), qi(-1));
        assert_eq!(phi_klm_eigenvalue(3, 1, 1), qi(-2));
        assert_eq!(phi_klm_eigenvalue(3, 2, 0), qi(-2));
        assert_eq!(phi_klm_eigenvalue(4, 1, 0), q(-3, 2));
    }

    #[test]
    fn radial_index_starts_at_one() {
        assert!(phi_klm_gamma::<C64>(3, 0, 0, 0).is_err());
        assert!(phi_klm_gamma::<C64>(3, 1, 1, 3).is_err());
    }

    #[test]
    fn eigenfunctions_of_h0() {
        for (k, l, m) in [(1, 0, 0), (1, 1, 0), (2, 0, 0), (2, 1, 2), (1, 2, 3), (3, 1, 1)] {
            let res = phi_klm_residual(3, k, l, m, 7, 6).unwrap();
            assert_eq!(res, 0.0, "k={k} l={l} m={m}");
        }
        assert_eq!(phi_klm_residual(4, 2, 2, 1, 3, 4).unwrap(), 0.0);
    }

    #[test]
    fn wrong_eigenvalue_is_detected() {
        let alg = gamma_algebra(3).unwrap();
        let phi = phi_klm_gamma::<CRat>(3, 2, 1, 0).unwrap();
        let h = HiddenAction::<CRat>::new(alg.clone()).unwrap();
        let lhs = h.h0_tilde().apply(&phi);
        let rhs = phi.scale(&CRat::from_q(&qi(-2)));
        assert!(function_residual(&lhs, &rhs, &Samples::for_scalar::<CRat>(&alg, 1, 4)).unwrap() > 1e-3);
    }

    #[test]
    fn angular_laplacian() {
        for l in 0..4 {
            for m in 0..solid_harmonics(3, l).unwrap().len() {
                assert_eq!(slice_laplacian_residual(3, l, m, 2, 5).unwrap(), 0.0);
            }
        }
        assert_eq!(slice_laplacian_residual(5, 2, 4, 2, 5).unwrap(), 0.0);
    }

    #[test]
    fn tilde_l_is_skew() {
        let p1 = phi_klm_gamma::<C64>(3, 1, 1, 0).unwrap();
        let p2 = phi_klm_gamma::<C64>(3, 2, 0, 0).unwrap();
        let alg = gamma_algebra(3).unwrap();
        for i in 0..alg.dim() {
            let u = alg.basis_vector::<Q>(i);
            let c = skew_symmetry_check(3, &u, &p1, &p2, 11, 400).unwrap();
            assert!(c.passed(), "u = b{i}: {c:?}");
        }
    }

    #[test]
    fn hat_l_alone_is_not_skew() {
        let p = phi_klm_gamma::<C64>(3, 1, 0, 0).unwrap();
        let alg = gamma_algebra(3).unwrap();
        let h = HiddenAction::<C64>::new(alg.clone()).unwrap();
        let c = skew_form(3, &h.hat_l(&alg.unit::<Q>()), &p, &p, 5, 200, 24).unwrap();
        assert!(!c.passed(), "{c:?}");
    }
}
