//! The matrix of the conformal Hamiltonian on weighted polynomials of bounded
//! degree, its spectrum, and the bound states it produces.

use std::sync::Arc;

use nalgebra::linalg::Schur;
use nalgebra::{DMatrix, DVector};
use num_traits::{One, ToPrimitive};
use rayon::prelude::*;
use serde::Serialize;

use super::basis::{default_point_count, restricted_basis_on, Domain, FilteredBasis};
use crate::algebra::Algebra;
use crate::error::{JkaError, Result};
use crate::hidden::{function_residual, to_exponent, Exponent, HiddenAction, HiddenConstants, Samples, WeightedFunction};
use crate::scalar::{q, q_to_f64, CRat, C64};

/// Eigenvalues closer than this belong to one level.
pub const CLUSTER_WIDTH: f64 = 1e-4;
/// Largest relative least-squares residual accepted when re-expanding.
pub const CLOSURE_TOL: f64 = 1e-7;

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Level {
    #[serde(rename = "I")]
    pub index: usize,
    pub eigenvalue: f64,
    pub multiplicity: usize,
    pub energy: f64,
}

#[derive(Clone, Debug, Serialize)]
pub struct SpectrumResult {
    pub family: String,
    pub n: usize,
    pub rho: usize,
    pub delta: usize,
    pub d: usize,
    /// All eigenvalues, ascending.
    pub eigenvalues: Vec<f64>,
    pub levels: Vec<Level>,
    /// Largest distance of a cluster centre from `−(I + ρδ/4)`.
    pub ladder_defect: f64,
    pub closure: f64,
}

impl SpectrumResult {
    pub fn multiplicities(&self) -> Vec<usize> {
        self.levels.iter().map(|l| l.multiplicity).collect()
    }
}

/// `−(1/2)/(I + ρδ/4)²`.
pub fn bound_state_energy(alg: &Algebra, level: usize) -> f64 {
    let n = level as f64 + q_to_f64(&HiddenConstants::ground(alg.rank(), alg.degree()));
    -0.5 / (n * n)
}

/// `H̃₀` on `span{e^{−r} r^{−κ} p}`, `p` running over independent monomials of
/// degree `≤ d` on the cone.
pub struct H0Matrix {
    pub basis: FilteredBasis,
    pub matrix: DMatrix<f64>,
    pub closure: f64,
    kappa: Exponent,
}

impl H0Matrix {
    pub fn new(alg: Arc<Algebra>, d: usize, seed: u64) -> Result<Self> {
        let basis = restricted_basis_on(&alg, d, default_point_count(&alg, d), seed, Domain::Cone)?;
        let constants = HiddenConstants::for_algebra(&alg);
        let kappa = to_exponent(&constants.kappa);
        let h = HiddenAction::<CRat>::new(alg.clone())?;
        let h0 = h.h0_tilde();
        let exact = basis.exact_points.clone().expect("cone bases carry exact points");
        let weights: Vec<f64> = basis.points.iter().map(|p| (-p.r()).exp() * p.r().powf(-q_to_f64(&constants.kappa))).collect();
        let dim = alg.dim();
        let columns: Vec<Result<DVector<f64>>> = basis
            .selected_monomials()
            .par_iter()
            .map(|m| {
                let f = WeightedFunction::<CRat>::term(dim, CRat::one(), Exponent::from_integer(-1), -kappa, *m);
                let g = h0.apply(&f);
                let mut out = DVector::zeros(exact.len());
                for (k, p) in exact.iter().enumerate() {
                    let v = g.eval_exact(p.x(), p.r())?.to_c64();
                    if v.im.abs() > 1e-9 * (1.0 + v.re.abs()) {
                        return Err(JkaError::InvalidInput("H0 produced an imaginary part".into()));
                    }
                    out[k] = v.re / weights[k];
                }
                Ok(out)
            })
            .collect();
        let columns = columns.into_iter().collect::<Result<Vec<_>>>()?;
        let images = DMatrix::from_columns(&columns);
        let svd = basis.evaluation.clone().svd(true, true);
        let matrix = svd.solve(&images, 1e-13).map_err(|e| JkaError::InvalidInput(e.to_string()))?;
        let fitted = &basis.evaluation * &matrix;
        let closure = (0..images.ncols())
            .map(|j| (fitted.column(j) - images.column(j)).norm() / images.column(j).norm().max(1e-300))
            .fold(0.0, f64::max);
        if closure > CLOSURE_TOL {
            return Err(JkaError::ClosureFailure { residual: closure });
        }
        Ok(H0Matrix { basis, matrix, closure, kappa })
    }

    /// Eigenvalues sorted ascending; fails if any has a visible imaginary part.
    pub fn eigenvalues(&self) -> Result<Vec<f64>> {
        // the unbounded iteration behind `complex_eigenvalues` can stall on
        // nearly triangular input
        let schur = Schur::try_new(self.matrix.clone(), 1e-14, 100_000)
            .ok_or_else(|| JkaError::InvalidInput("Schur iteration did not converge".into()))?;
        let ev = schur.complex_eigenvalues();
        let mut out = Vec::with_capacity(ev.len());
        for z in ev.iter() {
            if z.im.abs() > CLUSTER_WIDTH {
                return Err(JkaError::InvalidInput(format!("complex eigenvalue {z}")));
            }
            out.push(z.re);
        }
        out.sort_by(f64::total_cmp);
        Ok(out)
    }

    /// A unit vector `c` with `(M − λ) c ≈ 0`, read off the smallest singular value.
    pub fn eigenvector(&self, lambda: f64) -> DVector<f64> {
        let n = self.matrix.nrows();
        let shifted = &self.matrix - DMatrix::<f64>::identity(n, n) * lambda;
        let svd = shifted.svd(false, true);
        let vt = svd.v_t.expect("requested right singular vectors");
        let k = svd.singular_values.iter().enumerate().min_by(|a, b| a.1.total_cmp(b.1)).map(|(i, _)| i).expect("nonempty");
        vt.row(k).transpose()
    }

    /// `Σ c_j e^{−r} r^{−κ} x^{m_j}`.
    pub fn function(&self, coeffs: &DVector<f64>) -> WeightedFunction<C64> {
        let mons = self.basis.selected_monomials();
        let dim = mons.first().map(|m| m.dim()).unwrap_or(0);
        let mut f = WeightedFunction::zero(dim);
        for (m, c) in mons.iter().zip(coeffs.iter()) {
            f = f.add(&WeightedFunction::term(dim, C64::new(*c, 0.0), Exponent::from_integer(-1), -self.kappa, *m));
        }
        f
    }
}

fn cluster(values: &[f64]) -> Vec<(f64, usize)> {
    let mut out: Vec<(f64, usize, f64)> = Vec::new();
    for &v in values {
        match out.last_mut() {
            Some((sum, count, last)) if v - *last <= CLUSTER_WIDTH => {
                *sum += v;
                *count += 1;
                *last = v;
            }
            _ => out.push((v, 1, v)),
        }
    }
    out.into_iter().map(|(sum, count, _)| (sum / count as f64, count)).collect()
}

/// Spectrum of `H̃₀` on weighted polynomials of degree `≤ d`, grouped into
/// levels `I` at `−(I + ρδ/4)`.
pub fn h0_matrix_spectrum(alg: Arc<Algebra>, d: usize, seed: u64) -> Result<SpectrumResult> {
    let m = H0Matrix::new(alg.clone(), d, seed)?;
    let eigenvalues = m.eigenvalues()?;
    let ground = q_to_f64(&HiddenConstants::ground(alg.rank(), alg.degree()));
    let mut levels = Vec::new();
    let mut ladder_defect: f64 = 0.0;
    // ascending eigenvalues, so reversing lists the levels by increasing I
    for (centre, multiplicity) in cluster(&eigenvalues).into_iter().rev() {
        let index = (-centre - ground).round();
        ladder_defect = ladder_defect.max((centre + index + ground).abs());
        let index = index.to_usize().ok_or_else(|| JkaError::InvalidInput(format!("eigenvalue {centre} above the ground level")))?;
        levels.push(Level { index, eigenvalue: centre, multiplicity, energy: bound_state_energy(&alg, index) });
    }
    let spec = alg.spec();
    Ok(SpectrumResult {
        family: spec.family.name().to_string(),
        n: spec.n,
        rho: alg.rank(),
        delta: alg.degree(),
        d,
        eigenvalues,
        levels,
        ladder_defect,
        closure: m.closure,
    })
}

#[derive(Clone, Debug, Serialize)]
pub struct BoundState {
    pub level: usize,
    /// `I + ρδ/4`.
    pub principal: f64,
    pub energy: f64,
    /// Max relative residual of `h ψ − E ψ` over the sample points.
    pub residual: f64,
}

/// Takes an eigenvector of `H̃₀` at `−n_I`, forms `ψ(x) = ψ̃(x/n_I)` and checks
/// `h ψ = E_I ψ`.
pub fn bound_state_check(alg: Arc<Algebra>, level: usize, d: usize, seed: u64, points: usize) -> Result<BoundState> {
    if level > d {
        return Err(JkaError::InvalidInput(format!("level {level} needs degree at least {level}")));
    }
    let m = H0Matrix::new(alg.clone(), d, seed)?;
    let ground = to_exponent(&HiddenConstants::ground(alg.rank(), alg.degree()));
    let principal = ground + Exponent::from_integer(level as i64);
    let target = -q_to_f64(&q(*principal.numer(), *principal.denom()));
    let eigenvalues = m.eigenvalues()?;
    if !eigenvalues.iter().any(|v| (v - target).abs() < CLUSTER_WIDTH) {
        return Err(JkaError::AmbiguousCluster(target));
    }
    let coeffs = m.eigenvector(target);
    let psi = m.function(&coeffs).rescaled_argument(principal)?;
    let h = HiddenAction::<C64>::new(alg.clone())?;
    let energy = bound_state_energy(&alg, level);
    let lhs = h.hamiltonian().apply(&psi);
    let rhs = psi.scale(&C64::new(energy, 0.0));
    let samples = Samples::for_scalar::<C64>(&alg, seed, points);
    let residual = function_residual(&lhs, &rhs, &samples)?;
    Ok(BoundState { level, principal: -target, energy, residual })
}
