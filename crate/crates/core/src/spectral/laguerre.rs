//! Generalized Laguerre polynomials with exact coefficients, and
//! Gauss–Laguerre quadrature.

use nalgebra::{DMatrix, SymmetricEigen};
use num_traits::{One, Zero};
use statrs::function::gamma::{gamma, ln_gamma};

use crate::error::{JkaError, Result};
use crate::scalar::{q_to_f64, qi, Q};

/// A polynomial in one variable with rational coefficients, lowest degree first.
#[derive(Clone, Debug, PartialEq)]
pub struct UniPoly(pub Vec<Q>);

impl UniPoly {
    pub fn zero() -> Self {
        UniPoly(Vec::new())
    }

    pub fn constant(c: Q) -> Self {
        UniPoly(vec![c]).trimmed()
    }

    /// `x`.
    pub fn x() -> Self {
        UniPoly(vec![Q::zero(), Q::one()])
    }

    fn trimmed(mut self) -> Self {
        while self.0.last().is_some_and(|c| c.is_zero()) {
            self.0.pop();
        }
        self
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(|c| c.is_zero())
    }

    pub fn degree(&self) -> Option<usize> {
        self.0.iter().rposition(|c| !c.is_zero())
    }

    pub fn coeff(&self, k: usize) -> Q {
        self.0.get(k).cloned().unwrap_or_else(Q::zero)
    }

    pub fn add(&self, other: &Self) -> Self {
        let n = self.0.len().max(other.0.len());
        UniPoly((0..n).map(|k| self.coeff(k) + other.coeff(k)).collect()).trimmed()
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.scale(&-Q::one()))
    }

    pub fn scale(&self, c: &Q) -> Self {
        UniPoly(self.0.iter().map(|v| v * c).collect()).trimmed()
    }

    pub fn mul(&self, other: &Self) -> Self {
        if self.is_zero() || other.is_zero() {
            return Self::zero();
        }
        let mut out = vec![Q::zero(); self.0.len() + other.0.len() - 1];
        for (i, a) in self.0.iter().enumerate() {
            for (j, b) in other.0.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        UniPoly(out).trimmed()
    }

    pub fn derivative(&self) -> Self {
        UniPoly(self.0.iter().enumerate().skip(1).map(|(k, c)| c * qi(k as i64)).collect()).trimmed()
    }

    /// `p(c·x)`.
    pub fn dilate(&self, c: &Q) -> Self {
        let mut pow = Q::one();
        let mut out = Vec::with_capacity(self.0.len());
        for v in &self.0 {
            out.push(v * &pow);
            pow *= c;
        }
        UniPoly(out).trimmed()
    }

    pub fn eval(&self, x: &Q) -> Q {
        self.0.iter().rev().fold(Q::zero(), |acc, c| acc * x + c)
    }

    pub fn eval_f64(&self, x: f64) -> f64 {
        self.0.iter().rev().fold(0.0, |acc, c| acc * x + q_to_f64(c))
    }
}

/// `L_n^α` with exact coefficients.
#[derive(Clone, Debug, PartialEq)]
pub struct LaguerrePoly {
    pub n: usize,
    pub alpha: Q,
    pub poly: UniPoly,
}

impl LaguerrePoly {
    /// Built from `L_0 = 1`, `L_1 = 1 + α − x` and the three-term recurrence
    /// `(k+1) L_{k+1} = (2k+1+α−x) L_k − (k+α) L_{k−1}`.
    pub fn new(n: usize, alpha: &Q) -> Self {
        Self::sequence(n, alpha).pop().expect("sequence is never empty")
    }

    /// `L_0^α, …, L_n^α`.
    pub fn sequence(n: usize, alpha: &Q) -> Vec<LaguerrePoly> {
        let mut polys = vec![UniPoly::constant(Q::one())];
        if n >= 1 {
            polys.push(UniPoly(vec![alpha + Q::one(), -Q::one()]));
        }
        for k in 1..n {
            let kq = qi(k as i64);
            let lin = UniPoly(vec![qi(2 * k as i64 + 1) + alpha, -Q::one()]);
            let next = lin.mul(&polys[k]).sub(&polys[k - 1].scale(&(&kq + alpha)));
            polys.push(next.scale(&(Q::one() / qi(k as i64 + 1))));
        }
        polys
            .into_iter()
            .enumerate()
            .map(|(k, poly)| LaguerrePoly { n: k, alpha: alpha.clone(), poly })
            .collect()
    }

    pub fn eval(&self, x: &Q) -> Q {
        self.poly.eval(x)
    }

    pub fn eval_f64(&self, x: f64) -> f64 {
        self.poly.eval_f64(x)
    }
}

/// `n L_n^α − (n+α) L_{n−1}^α + x L_{n−1}^{α+1}`, exactly.
pub fn lowering_defect(n: usize, alpha: &Q) -> UniPoly {
    assert!(n >= 1);
    let ln = LaguerrePoly::new(n, alpha).poly;
    let prev = LaguerrePoly::new(n - 1, alpha).poly;
    let shifted = LaguerrePoly::new(n - 1, &(alpha + Q::one())).poly;
    ln.scale(&qi(n as i64))
        .sub(&prev.scale(&(qi(n as i64) + alpha)))
        .add(&UniPoly::x().mul(&shifted))
}

/// `(n+1) L_{n+1}^α − (2n+1+α−x) L_n^α + (n+α) L_{n−1}^α`, exactly.
pub fn three_term_defect(n: usize, alpha: &Q) -> UniPoly {
    assert!(n >= 1);
    let seq = LaguerrePoly::sequence(n + 1, alpha);
    let lin = UniPoly(vec![qi(2 * n as i64 + 1) + alpha, -Q::one()]);
    seq[n + 1]
        .poly
        .scale(&qi(n as i64 + 1))
        .sub(&lin.mul(&seq[n].poly))
        .add(&seq[n - 1].poly.scale(&(qi(n as i64) + alpha)))
}

/// `x y″ + (α+1−x) y′ + n y` for `y = L_n^α`.
pub fn ode_defect(n: usize, alpha: &Q) -> UniPoly {
    let y = LaguerrePoly::new(n, alpha).poly;
    let d1 = y.derivative();
    let d2 = d1.derivative();
    UniPoly::x()
        .mul(&d2)
        .add(&UniPoly(vec![alpha + Q::one(), -Q::one()]).mul(&d1))
        .add(&y.scale(&qi(n as i64)))
}

/// Gauss rule for the weight `x^α e^{−x}` on `(0, ∞)`.
#[derive(Clone, Debug)]
pub struct GaussLaguerre {
    pub alpha: f64,
    pub nodes: Vec<f64>,
    pub weights: Vec<f64>,
}

impl GaussLaguerre {
    /// Golub–Welsch: nodes are the eigenvalues of the Jacobi matrix of the
    /// monic Laguerre recurrence, weights `Γ(α+1)·v₀²`.
    pub fn new(order: usize, alpha: f64) -> Result<Self> {
        if order == 0 || alpha <= -1.0 {
            return Err(JkaError::InvalidInput(format!("Gauss–Laguerre needs order ≥ 1 and α > −1 (got {order}, {alpha})")));
        }
        let mut jac = DMatrix::<f64>::zeros(order, order);
        for k in 0..order {
            jac[(k, k)] = 2.0 * k as f64 + alpha + 1.0;
            if k + 1 < order {
                let b = ((k + 1) as f64 * (k as f64 + 1.0 + alpha)).sqrt();
                jac[(k, k + 1)] = b;
                jac[(k + 1, k)] = b;
            }
        }
        let eig = SymmetricEigen::new(jac);
        let mass = gamma(alpha + 1.0);
        let mut pairs: Vec<(f64, f64)> = (0..order)
            .map(|i| (eig.eigenvalues[i], mass * eig.eigenvectors[(0, i)].powi(2)))
            .collect();
        pairs.sort_by(|a, b| a.0.total_cmp(&b.0));
        let (nodes, weights) = pairs.into_iter().unzip();
        Ok(GaussLaguerre { alpha, nodes, weights })
    }

    /// Exact for `x^α e^{−x} p(x)` with `deg p ≤ 2·order − 1`.
    pub fn integrate(&self, f: impl Fn(f64) -> f64) -> f64 {
        self.nodes.iter().zip(&self.weights).map(|(&x, &w)| w * f(x)).sum()
    }
}

/// `Γ(n+α+1)/n!`.
pub fn laguerre_norm(n: usize, alpha: f64) -> f64 {
    (ln_gamma(n as f64 + alpha + 1.0) - ln_gamma(n as f64 + 1.0)).exp()
}

/// `|∫ x^α e^{−x} L_n L_m dx − δ_nm Γ(n+α+1)/n!|` by quadrature, relative to
/// the norm when `n = m`.
pub fn laguerre_orthogonality_check(n: usize, m: usize, alpha: &Q, order: usize) -> Result<f64> {
    if 2 * order < n + m + 1 {
        return Err(JkaError::UnderResolved { order, degree: n + m });
    }
    let a = q_to_f64(alpha);
    let rule = GaussLaguerre::new(order, a)?;
    let (ln, lm) = (LaguerrePoly::new(n, alpha), LaguerrePoly::new(m, alpha));
    let value = rule.integrate(|x| ln.eval_f64(x) * lm.eval_f64(x));
    if n == m {
        let norm = laguerre_norm(n, a);
        Ok((value - norm).abs() / norm.max(1.0))
    } else {
        let scale = (laguerre_norm(n, a) * laguerre_norm(m, a)).sqrt().max(1.0);
        Ok(value.abs() / scale)
    }
}
