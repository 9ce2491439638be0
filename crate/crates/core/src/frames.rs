//! Spectral decomposition, Jordan frames and Peirce decompositions (float mode).

use std::collections::BTreeMap;

use nalgebra::{DMatrix, DVector};

use crate::algebra::{Algebra, Family};
use crate::error::{JkaError, Result};
use crate::linalg::Mat;
use crate::random::{gaussian_vec, JkaRng};
use crate::scalar::{qi, Q};

pub const DEFAULT_TOL: f64 = 1e-9;

fn axpy(a: f64, x: &[f64], y: &[f64]) -> Vec<f64> {
    x.iter().zip(y).map(|(x, y)| a * x + y).collect()
}

fn scaled(a: f64, x: &[f64]) -> Vec<f64> {
    x.iter().map(|v| a * v).collect()
}

pub fn norm(alg: &Algebra, x: &[f64]) -> f64 {
    alg.inner(x, x).max(0.0).sqrt()
}

/// Projections onto the Peirce spaces of an idempotent `c`, eigenvalues 1, 1/2, 0.
pub fn peirce_projectors(alg: &Algebra, c: &[f64]) -> [Mat<f64>; 3] {
    let n = alg.dim();
    let l = alg.lmul(c);
    let id = Mat::identity(n);
    let two_l_minus_1 = l.scale(&2.0).sub(&id);
    let p1 = l.matmul(&two_l_minus_1);
    let p_half = l.matmul(&id.sub(&l)).scale(&4.0);
    let p0 = two_l_minus_1.matmul(&l.sub(&id));
    [p1, p_half, p0]
}

/// Eigenvalues of `a` with their spectral idempotents, ascending.
pub fn spectral_decompose(alg: &Algebra, a: &[f64], tol: f64) -> Result<Vec<(f64, Vec<f64>)>> {
    let scale = norm(alg, a).max(1.0);
    if norm(alg, a) == 0.0 {
        return Err(JkaError::InvalidInput("spectral decomposition of zero".into()));
    }
    let n = alg.dim();
    let rho = alg.rank();
    let mut powers = vec![alg.unit::<f64>()];
    for k in 1..=rho {
        let next = alg.mul(&powers[k - 1], a);
        powers.push(next);
    }
    // degree of the minimal polynomial
    let mut coeffs = None;
    for k in 1..=rho {
        let m = DMatrix::from_fn(n, k, |i, j| powers[j][i] / scale.powi(j as i32));
        let rhs = DVector::from_fn(n, |i, _| powers[k][i] / scale.powi(k as i32));
        let svd = m.clone().svd(true, true);
        let sol = svd.solve(&rhs, 1e-14).map_err(|e| JkaError::InvalidInput(e.to_string()))?;
        let resid = (&m * &sol - &rhs).norm();
        if resid < tol * 10.0 || k == rho {
            coeffs = Some((0..k).map(|j| sol[j] * scale.powi((k - j) as i32)).collect::<Vec<_>>());
            break;
        }
    }
    let coeffs = coeffs.expect("rank bound reached");
    let k = coeffs.len();
    // companion matrix of t^k − Σ c_j t^j
    let comp = DMatrix::from_fn(k, k, |i, j| {
        if i + 1 == j {
            1.0
        } else if i == k - 1 {
            coeffs[j]
        } else {
            0.0
        }
    });
    let mut roots: Vec<f64> = comp
        .complex_eigenvalues()
        .iter()
        .map(|z| {
            if z.im.abs() > 1e-6 * scale {
                Err(JkaError::InvalidInput(format!("complex eigenvalue {z}")))
            } else {
                Ok(z.re)
            }
        })
        .collect::<Result<_>>()?;
    roots.sort_by(f64::total_cmp);
    for w in roots.windows(2) {
        if w[1] - w[0] < tol.max(1e-7) * scale {
            return Err(JkaError::ClusteredSpectrum { a: w[0], b: w[1], tol });
        }
    }
    let e = alg.unit::<f64>();
    Ok(roots
        .iter()
        .enumerate()
        .map(|(idx, &lam)| {
            let mut c = e.clone();
            for (jdx, &mu) in roots.iter().enumerate() {
                if jdx != idx {
                    let f = axpy(-mu, &e, a);
                    c = scaled(1.0 / (lam - mu), &alg.mul(&c, &f));
                }
            }
            (lam, c)
        })
        .collect())
}

#[derive(Clone, Debug)]
pub struct JordanFrame {
    pub idempotents: Vec<Vec<f64>>,
    /// `(i, j) → [e_ij^μ]` for `i < j`, each of length `1/√ρ`.
    pub offdiag: BTreeMap<(usize, usize), Vec<Vec<f64>>>,
}

#[derive(Clone, Debug)]
pub struct PeirceDecomposition {
    /// `(i, j) → basis of V_ij` for `i <= j`.
    pub components: BTreeMap<(usize, usize), Vec<Vec<f64>>>,
}

impl PeirceDecomposition {
    pub fn total_dim(&self) -> usize {
        self.components.values().map(Vec::len).sum()
    }
}

fn random_in(p: &Mat<f64>, rng: &mut JkaRng) -> Vec<f64> {
    p.apply(&gaussian_vec(rng, p.cols()))
}

fn split_idempotent(alg: &Algebra, c: &[f64], rng: &mut JkaRng, tol: f64, depth: usize) -> Result<Vec<Vec<f64>>> {
    let tr = alg.trace(c);
    if (tr - 1.0).abs() < 1e-6 {
        return Ok(vec![c.to_vec()]);
    }
    if depth > 40 {
        return Err(JkaError::FrameViolation("could not split a non-primitive idempotent".into()));
    }
    let [p1, _, _] = peirce_projectors(alg, c);
    let e = alg.unit::<f64>();
    let rest: Vec<f64> = e.iter().zip(c).map(|(a, b)| a - b).collect();
    // first attempt uses a fixed element so that diagonal seeds give the diagonal frame
    let fixed: Vec<f64> = standard_frame(alg)
        .iter()
        .enumerate()
        .fold(alg.zero::<f64>(), |acc, (k, f)| axpy((k + 1) as f64, &alg.coords_to_f64(f), &acc));
    for attempt in 0..20 {
        let z = if attempt == 0 { p1.apply(&fixed) } else { random_in(&p1, rng) };
        let shift = 1.0 + 4.0 * (alg.rank() as f64 * alg.inner(&z, &z)).sqrt();
        let shifted = axpy(shift, &rest, &z);
        let Ok(parts) = spectral_decompose(alg, &shifted, tol) else { continue };
        let mut out = Vec::new();
        for (lam, idem) in parts {
            if (lam - shift).abs() < 1e-6 * shift {
                continue;
            }
            out.extend(split_idempotent(alg, &idem, rng, tol, depth + 1)?);
        }
        return Ok(out);
    }
    Err(JkaError::FrameViolation("random elements kept clustering".into()))
}

/// Gram–Schmidt in `⟨·|·⟩` over the columns of `p`, keeping `want` vectors.
fn orthonormal_image(alg: &Algebra, p: &Mat<f64>, want: usize, length: f64) -> Result<Vec<Vec<f64>>> {
    let mut out: Vec<Vec<f64>> = Vec::new();
    let mut cols: Vec<Vec<f64>> = (0..p.cols()).map(|j| p.column(j)).collect();
    cols.sort_by(|a, b| norm(alg, b).total_cmp(&norm(alg, a)));
    for mut v in cols {
        for u in &out {
            let c = alg.inner(&v, u) / alg.inner(u, u);
            v = axpy(-c, u, &v);
        }
        let nv = norm(alg, &v);
        if nv > 1e-8 {
            out.push(scaled(1.0 / nv, &v));
        }
    }
    if out.len() != want {
        return Err(JkaError::RankDeficient { expected: want, found: out.len() });
    }
    Ok(out.into_iter().map(|v| scaled(length, &v)).collect())
}

/// Completes `x0/tr(x0)` to a Jordan frame.
pub fn jordan_frame(alg: &Algebra, x0: &[f64], rng: &mut JkaRng, tol: f64) -> Result<JordanFrame> {
    let tr = alg.trace(x0);
    let sq = alg.square(x0);
    let defect = norm(alg, &axpy(-tr, x0, &sq)) / norm(alg, x0).powi(2).max(f64::MIN_POSITIVE);
    if tr <= 0.0 || defect > 1e-8 {
        return Err(JkaError::NotRankOne { defect });
    }
    let e11 = scaled(1.0 / tr, x0);
    let e = alg.unit::<f64>();
    let rest: Vec<f64> = e.iter().zip(&e11).map(|(a, b)| a - b).collect();
    let mut idempotents = vec![e11];
    if alg.rank() > 1 {
        idempotents.extend(split_idempotent(alg, &rest, rng, tol, 0)?);
    }
    if idempotents.len() != alg.rank() {
        return Err(JkaError::FrameViolation(format!("found {} idempotents", idempotents.len())));
    }
    let rho = alg.rank();
    let length = 1.0 / (rho as f64).sqrt();
    let mut offdiag = BTreeMap::new();
    for i in 0..rho {
        for j in i + 1..rho {
            let p = alg.lmul(&idempotents[i]).matmul(&alg.lmul(&idempotents[j])).scale(&4.0);
            offdiag.insert((i, j), orthonormal_image(alg, &p, alg.degree(), length)?);
        }
    }
    Ok(JordanFrame { idempotents, offdiag })
}

impl JordanFrame {
    /// Largest violation of the frame axioms.
    pub fn defect(&self, alg: &Algebra) -> f64 {
        let rho = alg.rank();
        let mut worst: f64 = 0.0;
        let mut bump = |v: f64| worst = worst.max(v.abs());
        let diff = |a: &[f64], b: &[f64]| a.iter().zip(b).map(|(x, y)| (x - y).abs()).fold(0.0, f64::max);
        let mut sum = alg.zero::<f64>();
        for (i, c) in self.idempotents.iter().enumerate() {
            bump(diff(&alg.square(c), c));
            bump(alg.trace(c) - 1.0);
            bump(alg.inner(c, c) - 1.0 / rho as f64);
            for d in &self.idempotents[i + 1..] {
                bump(diff(&alg.mul(c, d), &alg.zero::<f64>()));
            }
            sum = axpy(1.0, c, &sum);
        }
        bump(diff(&sum, &alg.unit::<f64>()));
        for (&(i, j), vs) in &self.offdiag {
            let half_sum = scaled(0.5, &axpy(1.0, &self.idempotents[i], &self.idempotents[j]));
            for (m, v) in vs.iter().enumerate() {
                bump(diff(&alg.mul(&self.idempotents[i], v), &scaled(0.5, v)));
                bump(diff(&alg.mul(&self.idempotents[j], v), &scaled(0.5, v)));
                bump(diff(&alg.square(v), &half_sum));
                bump(alg.trace(v));
                bump(alg.inner(v, v) - 1.0 / rho as f64);
                for w in &vs[m + 1..] {
                    bump(alg.inner(v, w));
                }
            }
        }
        worst
    }
}

/// Joint eigenspaces of the frame's multiplication operators.
pub fn peirce_decompose(alg: &Algebra, frame: &JordanFrame) -> Result<PeirceDecomposition> {
    let defect = frame.defect(alg);
    if defect > 1e-8 {
        return Err(JkaError::FrameViolation(format!("defect {defect:.3e}")));
    }
    let rho = alg.rank();
    let mut components = BTreeMap::new();
    for (i, c) in frame.idempotents.iter().enumerate() {
        components.insert((i, i), vec![c.clone()]);
    }
    for i in 0..rho {
        for j in i + 1..rho {
            let p = alg
                .lmul(&frame.idempotents[i])
                .matmul(&alg.lmul(&frame.idempotents[j]))
                .scale(&4.0);
            components.insert((i, j), orthonormal_image(alg, &p, alg.degree(), 1.0)?);
        }
    }
    Ok(PeirceDecomposition { components })
}

/// An exact frame in the constructed basis: diagonal units, or `½(1, ±v_1)`.
pub fn standard_frame(alg: &Algebra) -> Vec<Vec<Q>> {
    match alg.family() {
        Family::Gamma => {
            let half = Q::new(1.into(), 2.into());
            let mut a = alg.zero::<Q>();
            let mut b = alg.zero::<Q>();
            a[0] = half.clone();
            b[0] = half.clone();
            a[1] = half.clone();
            b[1] = -half;
            vec![a, b]
        }
        _ => (0..alg.rank())
            .map(|i| {
                let mut v = alg.zero::<Q>();
                v[i] = qi(1);
                v
            })
            .collect(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::AlgebraSpec;
    use crate::random::rng;

    #[test]
    fn gamma2_spectrum_by_hand() {
        let alg = Algebra::new(AlgebraSpec::new(Family::Gamma, 2)).unwrap();
        let parts = spectral_decompose(&alg, &[0.0, 1.0, 0.0], DEFAULT_TOL).unwrap();
        assert_eq!(parts.len(), 2);
        assert!((parts[0].0 + 1.0).abs() < 1e-12 && (parts[1].0 - 1.0).abs() < 1e-12);
        let expect = [0.5, -0.5, 0.0];
        assert!(parts[0].1.iter().zip(expect).all(|(a, b)| (a - b).abs() < 1e-12));
    }

    #[test]
    fn frame_of_a_diagonal_unit() {
        let alg = Algebra::new(AlgebraSpec::new(Family::HermR, 3)).unwrap();
        let mut x0 = alg.zero::<f64>();
        x0[0] = 1.0;
        let frame = jordan_frame(&alg, &x0, &mut rng(3), DEFAULT_TOL).unwrap();
        assert!(frame.defect(&alg) < 1e-10);
        let mut diag: Vec<usize> = frame
            .idempotents
            .iter()
            .map(|c| c.iter().position(|v| (v - 1.0).abs() < 1e-9).unwrap())
            .collect();
        diag.sort();
        assert_eq!(diag, vec![0, 1, 2]);
    }
}
