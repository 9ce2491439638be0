//! The simple Euclidean Jordan algebras and their canonical operators.
//!
//! Elements are coordinate vectors in a fixed orthogonal basis `b_0, …`.
//! The basis is not normalized: `⟨b_i|b_j⟩ = g_i δ_ij` with rational `g_i`,
//! because unit-length vectors would need `√ρ`. Sums over an orthonormal
//! basis are therefore written `Σ_i (1/g_i) …` throughout the crate.

use std::fmt;
use std::str::FromStr;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::division::{DivisionKind, DivisionRingElement};
use crate::error::{JkaError, Result};
use crate::linalg::Mat;
use num_traits::Zero;

use crate::scalar::{q, qi, Scalar, Q};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Family {
    Gamma,
    HermR,
    HermC,
    HermH,
    HermO,
}

impl Family {
    pub const ALL: [Family; 5] = [Family::Gamma, Family::HermR, Family::HermC, Family::HermH, Family::HermO];

    pub fn name(self) -> &'static str {
        match self {
            Family::Gamma => "gamma",
            Family::HermR => "herm_r",
            Family::HermC => "herm_c",
            Family::HermH => "herm_h",
            Family::HermO => "herm_o",
        }
    }

    fn division(self) -> Option<DivisionKind> {
        match self {
            Family::Gamma => None,
            Family::HermR => Some(DivisionKind::Real),
            Family::HermC => Some(DivisionKind::Complex),
            Family::HermH => Some(DivisionKind::Quaternion),
            Family::HermO => Some(DivisionKind::Octonion),
        }
    }
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Family {
    type Err = JkaError;
    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "gamma" => Ok(Family::Gamma),
            "herm_r" => Ok(Family::HermR),
            "herm_c" => Ok(Family::HermC),
            "herm_h" => Ok(Family::HermH),
            "herm_o" => Ok(Family::HermO),
            other => Err(JkaError::UnknownFamily(other.to_string())),
        }
    }
}

/// A family together with its size parameter, written `FAMILY:N`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct AlgebraSpec {
    pub family: Family,
    pub n: usize,
}

impl AlgebraSpec {
    pub fn new(family: Family, n: usize) -> Self {
        AlgebraSpec { family, n }
    }

    /// `(ρ, δ)` from the classification table.
    pub fn rank_degree(self) -> (usize, usize) {
        match self.family {
            Family::Gamma => (2, self.n - 1),
            Family::HermR => (self.n, 1),
            Family::HermC => (self.n, 2),
            Family::HermH => (self.n, 4),
            Family::HermO => (3, 8),
        }
    }

    pub fn validate(self) -> Result<()> {
        let bad = |reason: &str| {
            Err(JkaError::OutOfRange { family: self.family.to_string(), n: self.n, reason: reason.into() })
        };
        match self.family {
            Family::Gamma if self.n < 2 => bad("needs n >= 2"),
            Family::HermR if self.n < 1 => bad("needs n >= 1"),
            Family::HermC | Family::HermH if self.n < 2 => bad("needs n >= 2"),
            Family::HermO if self.n > 3 => bad("octonionic hermitian matrices are Jordan only for n <= 3"),
            Family::HermO if self.n < 3 => bad("only n = 3 is provided"),
            _ => Ok(()),
        }
    }
}

impl fmt::Display for AlgebraSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}", self.family, self.n)
    }
}

impl FromStr for AlgebraSpec {
    type Err = JkaError;
    fn from_str(s: &str) -> Result<Self> {
        let (fam, n) = s.split_once(':').ok_or_else(|| JkaError::BadAlgebraSpec(s.to_string()))?;
        let family = fam.parse()?;
        let n = n.trim().parse().map_err(|_| JkaError::BadAlgebraSpec(s.to_string()))?;
        let spec = AlgebraSpec { family, n };
        spec.validate()?;
        Ok(spec)
    }
}

/// One nonzero structure constant: `b_i b_j` has `num/den` along `b_k`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct StructureConstant {
    pub i: usize,
    pub j: usize,
    pub k: usize,
    pub num: i64,
    pub den: i64,
}

/// Serializable summary of an algebra.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Descriptor {
    pub family: Family,
    pub n: usize,
    pub rho: usize,
    pub delta: usize,
    pub dim: usize,
}

#[derive(Clone, Debug)]
pub struct Algebra {
    spec: AlgebraSpec,
    rho: usize,
    delta: usize,
    dim: usize,
    gram: Vec<Q>,
    trace: Vec<Q>,
    unit: Vec<Q>,
    // i <= j only
    table: Vec<StructureConstant>,
    labels: Vec<String>,
}

impl PartialEq for Algebra {
    fn eq(&self, other: &Self) -> bool {
        self.spec == other.spec
    }
}

fn pair_index(n: usize, i: usize, j: usize) -> usize {
    // position of (i, j), i < j, in row-major upper-triangular order
    i * (2 * n - i - 1) / 2 + (j - i - 1)
}

impl Algebra {
    pub fn new(spec: AlgebraSpec) -> Result<Self> {
        spec.validate()?;
        Ok(match spec.family.division() {
            None => Self::build_gamma(spec),
            Some(kind) => Self::build_herm(spec, kind),
        })
    }

    pub fn shared(spec: AlgebraSpec) -> Result<Arc<Self>> {
        Self::new(spec).map(Arc::new)
    }

    fn build_gamma(spec: AlgebraSpec) -> Self {
        let n = spec.n;
        let dim = n + 1;
        let mut table = Vec::new();
        for j in 0..dim {
            table.push(StructureConstant { i: 0, j, k: j, num: 1, den: 1 });
        }
        for k in 1..dim {
            table.push(StructureConstant { i: k, j: k, k: 0, num: 1, den: 1 });
        }
        let mut trace = vec![qi(0); dim];
        trace[0] = qi(2);
        let mut unit = vec![qi(0); dim];
        unit[0] = qi(1);
        let mut labels = vec!["e".to_string()];
        labels.extend((1..dim).map(|k| format!("v{k}")));
        Algebra { spec, rho: 2, delta: n - 1, dim, gram: vec![qi(1); dim], trace, unit, table, labels }
    }

    fn build_herm(spec: AlgebraSpec, kind: DivisionKind) -> Self {
        let n = spec.n;
        let d = kind.dim();
        let dim = n + d * n * (n - 1) / 2;
        let mut labels: Vec<String> = (0..n).map(|i| format!("E{}{}", i + 1, i + 1)).collect();
        for i in 0..n {
            for j in i + 1..n {
                for mu in 0..d {
                    labels.push(format!("F{}{}^{}", i + 1, j + 1, mu));
                }
            }
        }
        let mut alg = Algebra {
            spec,
            rho: n,
            delta: d,
            dim,
            gram: (0..dim).map(|a| if a < n { q(1, n as i64) } else { q(2, n as i64) }).collect(),
            trace: (0..dim).map(|a| if a < n { qi(1) } else { qi(0) }).collect(),
            unit: (0..dim).map(|a| if a < n { qi(1) } else { qi(0) }).collect(),
            table: Vec::new(),
            labels,
        };
        let mats: Vec<_> = (0..dim)
            .map(|a| {
                let mut c = vec![qi(0); dim];
                c[a] = qi(1);
                alg.herm_matrix(&c)
            })
            .collect();
        let mut table = Vec::new();
        for a in 0..dim {
            for b in a..dim {
                let prod = herm_jordan_product(&mats[a], &mats[b]);
                let coords = alg.herm_coords(&prod);
                for (k, c) in coords.into_iter().enumerate() {
                    if c != qi(0) {
                        let num = i64::try_from(c.numer()).expect("small structure constant");
                        let den = i64::try_from(c.denom()).expect("small structure constant");
                        table.push(StructureConstant { i: a, j: b, k, num, den });
                    }
                }
            }
        }
        alg.table = table;
        alg
    }

    pub fn spec(&self) -> AlgebraSpec {
        self.spec
    }

    pub fn family(&self) -> Family {
        self.spec.family
    }

    pub fn rank(&self) -> usize {
        self.rho
    }

    pub fn degree(&self) -> usize {
        self.delta
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn descriptor(&self) -> Descriptor {
        Descriptor { family: self.spec.family, n: self.spec.n, rho: self.rho, delta: self.delta, dim: self.dim }
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn structure_constants(&self) -> &[StructureConstant] {
        &self.table
    }

    /// `g_i = ⟨b_i|b_i⟩`.
    pub fn gram(&self) -> &[Q] {
        &self.gram
    }

    pub fn gram_as<T: Scalar>(&self) -> Vec<T> {
        self.gram.iter().map(T::from_q).collect()
    }

    /// `ε_i = ⟨e|b_i⟩`, the coordinates of the linear function `r = ⟨e|x⟩`.
    pub fn unit_functional<T: Scalar>(&self) -> Vec<T> {
        let rho = qi(self.rho as i64);
        self.trace.iter().map(|t| T::from_q(&(t / &rho))).collect()
    }

    pub fn unit<T: Scalar>(&self) -> Vec<T> {
        self.unit.iter().map(T::from_q).collect()
    }

    pub fn basis_vector<T: Scalar>(&self, i: usize) -> Vec<T> {
        let mut v = vec![T::zero(); self.dim];
        v[i] = T::one();
        v
    }

    pub fn zero<T: Scalar>(&self) -> Vec<T> {
        vec![T::zero(); self.dim]
    }

    pub fn mul<T: Scalar>(&self, u: &[T], v: &[T]) -> Vec<T> {
        assert_eq!(u.len(), self.dim);
        assert_eq!(v.len(), self.dim);
        let mut out = vec![T::zero(); self.dim];
        for c in &self.table {
            let mut t = u[c.i].clone() * v[c.j].clone();
            if c.i != c.j {
                t = t + u[c.j].clone() * v[c.i].clone();
            }
            if t.is_zero() {
                continue;
            }
            out[c.k] = out[c.k].clone() + t * T::from_ratio(c.num, c.den);
        }
        out
    }

    pub fn square<T: Scalar>(&self, u: &[T]) -> Vec<T> {
        self.mul(u, u)
    }

    /// `u^k` for `k >= 0`.
    pub fn power<T: Scalar>(&self, u: &[T], k: usize) -> Vec<T> {
        let mut acc = self.unit();
        for _ in 0..k {
            acc = self.mul(&acc, u);
        }
        acc
    }

    pub fn trace<T: Scalar>(&self, u: &[T]) -> T {
        u.iter()
            .zip(&self.trace)
            .filter(|(_, t)| !t.is_zero())
            .fold(T::zero(), |acc, (x, t)| acc + x.clone() * T::from_q(t))
    }

    /// `⟨u|v⟩ = tr(uv)/ρ`, evaluated through the diagonal Gram matrix.
    pub fn inner<T: Scalar>(&self, u: &[T], v: &[T]) -> T {
        u.iter()
            .zip(v)
            .zip(&self.gram)
            .fold(T::zero(), |acc, ((a, b), g)| acc + a.clone() * b.clone() * T::from_q(g))
    }

    /// The matrix of `L_u` acting on coordinate columns.
    pub fn lmul<T: Scalar>(&self, u: &[T]) -> Mat<T> {
        let mut m: Mat<T> = Mat::zeros(self.dim, self.dim);
        for c in &self.table {
            let coef = T::from_ratio(c.num, c.den);
            // b_i b_j = c b_k: column j gets u_i c, column i gets u_j c
            if !u[c.i].is_zero() {
                let cell = m.at_mut(c.k, c.j);
                *cell = cell.clone() + u[c.i].clone() * coef.clone();
            }
            if c.i != c.j && !u[c.j].is_zero() {
                let cell = m.at_mut(c.k, c.i);
                *cell = cell.clone() + u[c.j].clone() * coef;
            }
        }
        m
    }

    /// `{uvw} = u(vw) + w(vu) − (uw)v`.
    pub fn triple<T: Scalar>(&self, u: &[T], v: &[T], w: &[T]) -> Vec<T> {
        let a = self.mul(u, &self.mul(v, w));
        let b = self.mul(w, &self.mul(v, u));
        let c = self.mul(&self.mul(u, w), v);
        a.into_iter().zip(b).zip(c).map(|((a, b), c)| a + b - c).collect()
    }

    /// `S_uv = [L_u, L_v] + L_{uv}`, the map `z ↦ {uvz}`.
    pub fn s_map<T: Scalar>(&self, u: &[T], v: &[T]) -> Mat<T> {
        let lu = self.lmul(u);
        let lv = self.lmul(v);
        lu.commutator(&lv).add(&self.lmul(&self.mul(u, v)))
    }

    /// `P(x) = 2L_x² − L_{x²}`.
    pub fn quadratic_rep<T: Scalar>(&self, x: &[T]) -> Mat<T> {
        let lx = self.lmul(x);
        let two = T::from_i64(2);
        lx.matmul(&lx).scale(&two).sub(&self.lmul(&self.square(x)))
    }

    /// Adjoint with respect to `⟨·|·⟩`: `m' = G⁻¹ mᵀ G`.
    pub fn adjoint<T: Scalar>(&self, m: &Mat<T>) -> Mat<T> {
        let ratio: Vec<Vec<Q>> = (0..self.dim)
            .map(|i| (0..self.dim).map(|j| &self.gram[j] / &self.gram[i]).collect())
            .collect();
        Mat::from_fn(self.dim, self.dim, |i, j| {
            let v = m.at(j, i);
            if v.is_zero() {
                T::zero()
            } else {
                v.clone() * T::from_q(&ratio[i][j])
            }
        })
    }

    /// `|a⟩⟨b|` as a matrix on coordinates: `z ↦ ⟨b|z⟩ a`.
    pub fn ket_bra<T: Scalar>(&self, a: &[T], b: &[T]) -> Mat<T> {
        let gb: Vec<T> = b.iter().zip(&self.gram).map(|(x, g)| x.clone() * T::from_q(g)).collect();
        Mat::outer(a, &gb)
    }

    pub fn coords_to_f64<T: Scalar>(&self, u: &[T]) -> Vec<f64> {
        u.iter().map(|x| x.to_c64().re).collect()
    }

    /// Product tensor as CSV-ready triples `(α, β, γ, coefficient)`, both orders.
    pub fn product_triples(&self) -> Vec<(usize, usize, usize, String)> {
        let mut out = Vec::new();
        for c in &self.table {
            let coef = q(c.num, c.den).to_string();
            out.push((c.i, c.j, c.k, coef.clone()));
            if c.i != c.j {
                out.push((c.j, c.i, c.k, coef));
            }
        }
        out.sort_by(|a, b| (a.0, a.1, a.2).cmp(&(b.0, b.1, b.2)));
        out
    }

    fn herm_kind(&self) -> DivisionKind {
        self.spec.family.division().expect("hermitian family")
    }

    /// Coordinates to an `n × n` hermitian matrix over the division ring.
    pub fn herm_matrix<T: Scalar>(&self, u: &[T]) -> Vec<Vec<DivisionRingElement<T>>> {
        let kind = self.herm_kind();
        let n = self.spec.n;
        let d = kind.dim();
        let mut m = vec![vec![DivisionRingElement::zero(kind); n]; n];
        for i in 0..n {
            m[i][i] = DivisionRingElement::real(kind, u[i].clone());
        }
        for i in 0..n {
            for j in i + 1..n {
                let base = n + pair_index(n, i, j) * d;
                let z = DivisionRingElement::new(u[base..base + d].to_vec());
                m[j][i] = z.conj();
                m[i][j] = z;
            }
        }
        m
    }

    /// Inverse of [`Algebra::herm_matrix`]; reads the upper triangle.
    pub fn herm_coords<T: Scalar>(&self, m: &[Vec<DivisionRingElement<T>>]) -> Vec<T> {
        let n = self.spec.n;
        let d = self.herm_kind().dim();
        let mut out = vec![T::zero(); self.dim];
        for i in 0..n {
            out[i] = m[i][i].re().clone();
            for j in i + 1..n {
                let base = n + pair_index(n, i, j) * d;
                out[base..base + d].clone_from_slice(m[i][j].coords());
            }
        }
        out
    }

    /// Index of the off-diagonal coordinate `(i, j, μ)`, `i < j`, of a hermitian family.
    pub fn offdiag_index(&self, i: usize, j: usize, mu: usize) -> usize {
        let n = self.spec.n;
        n + pair_index(n, i, j) * self.delta + mu
    }
}

fn herm_jordan_product<T: Scalar>(
    a: &[Vec<DivisionRingElement<T>>],
    b: &[Vec<DivisionRingElement<T>>],
) -> Vec<Vec<DivisionRingElement<T>>> {
    let n = a.len();
    let kind = a[0][0].kind();
    let half = T::from_ratio(1, 2);
    let mut out = vec![vec![DivisionRingElement::zero(kind); n]; n];
    for i in 0..n {
        for j in 0..n {
            let mut acc = DivisionRingElement::zero(kind);
            for k in 0..n {
                acc = &acc + &(&a[i][k] * &b[k][j]);
                acc = &acc + &(&b[i][k] * &a[k][j]);
            }
            out[i][j] = acc.scale(&half);
        }
    }
    out
}

/// An element tied to its algebra; operations check that operands agree.
#[derive(Clone, Debug, PartialEq)]
pub struct JordanElement<T> {
    alg: Arc<Algebra>,
    coords: Vec<T>,
}

impl<T: Scalar> JordanElement<T> {
    pub fn new(alg: Arc<Algebra>, coords: Vec<T>) -> Result<Self> {
        if coords.len() != alg.dim() {
            return Err(JkaError::InvalidInput(format!(
                "expected {} coordinates, got {}",
                alg.dim(),
                coords.len()
            )));
        }
        Ok(JordanElement { alg, coords })
    }

    pub fn unit(alg: Arc<Algebra>) -> Self {
        let coords = alg.unit();
        JordanElement { alg, coords }
    }

    pub fn algebra(&self) -> &Arc<Algebra> {
        &self.alg
    }

    pub fn coords(&self) -> &[T] {
        &self.coords
    }

    fn same(&self, other: &Self) -> Result<()> {
        if Arc::ptr_eq(&self.alg, &other.alg) || *self.alg == *other.alg {
            Ok(())
        } else {
            Err(JkaError::AlgebraMismatch)
        }
    }

    pub fn mul(&self, other: &Self) -> Result<Self> {
        self.same(other)?;
        Ok(JordanElement { alg: self.alg.clone(), coords: self.alg.mul(&self.coords, &other.coords) })
    }

    pub fn trace(&self) -> T {
        self.alg.trace(&self.coords)
    }

    pub fn inner(&self, other: &Self) -> Result<T> {
        self.same(other)?;
        Ok(self.alg.inner(&self.coords, &other.coords))
    }

    pub fn triple(&self, v: &Self, w: &Self) -> Result<Self> {
        self.same(v)?;
        self.same(w)?;
        Ok(JordanElement { alg: self.alg.clone(), coords: self.alg.triple(&self.coords, &v.coords, &w.coords) })
    }

    pub fn lmul(&self) -> Mat<T> {
        self.alg.lmul(&self.coords)
    }

    pub fn quadratic_rep(&self) -> Mat<T> {
        self.alg.quadratic_rep(&self.coords)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn dimensions_follow_the_rank_degree_formula() {
        for spec in [
            AlgebraSpec::new(Family::Gamma, 3),
            AlgebraSpec::new(Family::HermR, 4),
            AlgebraSpec::new(Family::HermC, 3),
            AlgebraSpec::new(Family::HermH, 3),
            AlgebraSpec::new(Family::HermO, 3),
        ] {
            let a = Algebra::new(spec).unwrap();
            let (rho, delta) = (a.rank(), a.degree());
            assert_eq!(a.dim(), rho + delta * rho * (rho - 1) / 2, "{spec}");
        }
    }

    #[test]
    fn parse_and_reject() {
        assert_eq!("gamma:3".parse::<AlgebraSpec>().unwrap(), AlgebraSpec::new(Family::Gamma, 3));
        assert!(matches!("herm_o:4".parse::<AlgebraSpec>(), Err(JkaError::OutOfRange { .. })));
        assert!(matches!("spin:4".parse::<AlgebraSpec>(), Err(JkaError::UnknownFamily(_))));
        assert!(matches!("gamma".parse::<AlgebraSpec>(), Err(JkaError::BadAlgebraSpec(_))));
    }

    #[test]
    fn herm_matrix_roundtrip() {
        let a = Algebra::new(AlgebraSpec::new(Family::HermH, 3)).unwrap();
        let u: Vec<Q> = (0..a.dim()).map(|i| q(i as i64 - 4, 3)).collect();
        assert_eq!(a.herm_coords(&a.herm_matrix(&u)), u);
    }

    #[test]
    fn lmul_matches_mul() {
        let a = Algebra::new(AlgebraSpec::new(Family::HermC, 3)).unwrap();
        let u: Vec<Q> = (0..a.dim()).map(|i| q(i as i64 % 5 - 2, 2)).collect();
        let v: Vec<Q> = (0..a.dim()).map(|i| q(3 - i as i64 % 4, 1)).collect();
        assert_eq!(a.lmul(&u).apply(&v), a.mul(&u, &v));
    }
}
