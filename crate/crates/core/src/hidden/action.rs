//! Constants and operator builders for the conformal action on cone functions.

use std::collections::HashMap;
use std::sync::Arc;

use num_traits::{One, Zero};

use super::function::{Exponent, Monomial, Poly, WeightedFunction};
use super::operator::{commutator, compose, lincomb, square, ConeOperator, RadialBlindSecondOrder, VectorField};
use crate::algebra::{Algebra, Family};
use crate::error::{JkaError, Result};
use crate::linalg::Mat;
use crate::scalar::{q, qi, ComplexScalar, Q};

/// The constants of the action, as exact rationals.
#[derive(Clone, Debug, PartialEq)]
pub struct HiddenConstants {
    pub a: Q,
    pub b: Q,
    pub kappa: Q,
    /// Constant term of the primary quadratic relation.
    pub casimir: Q,
}

impl HiddenConstants {
    pub fn new(rho: usize, delta: usize) -> Self {
        let rho = qi(rho as i64);
        let delta = qi(delta as i64);
        let two = qi(2);
        let four = qi(4);
        let shape = Q::one() + &delta * (&rho - &two) / &four;
        let a = &two / (&rho * &rho) / &shape;
        let b = &delta / qi(8) * (&rho - &two) * ((qi(3) * &rho / &two - Q::one()) * &delta - &two);
        let kappa = (&rho / &two - Q::one()) * &delta / &two;
        let casimir = &rho * &delta / &four * &shape;
        HiddenConstants { a, b, kappa, casimir }
    }

    pub fn for_algebra(alg: &Algebra) -> Self {
        Self::new(alg.rank(), alg.degree())
    }

    /// `A` from `A⁻¹ = (ρ²/2)(1 + δ(ρ−2)/4)`.
    pub fn a_from_inverse(rho: usize, delta: usize) -> Q {
        let rho = qi(rho as i64);
        let inv = &rho * &rho / qi(2) * (Q::one() + qi(delta as i64) * (&rho - qi(2)) / qi(4));
        inv.recip()
    }

    /// Closed forms per family, written independently of [`HiddenConstants::new`].
    pub fn family_table(family: Family, n: usize) -> (Q, Q) {
        let n = n as i64;
        match family {
            Family::Gamma => (q(1, 2), Q::zero()),
            Family::HermR => (q(8, n * n * (n + 2)), q(3 * (n - 2) * (n - 2), 16)),
            Family::HermC => (q(4, n * n * n), q((n - 2) * (3 * n - 4), 4)),
            Family::HermH => (q(2, n * n * (n - 1)), qi(3 * (n - 1) * (n - 2))),
            Family::HermO => (q(2, 27), qi(26)),
        }
    }

    /// `ρδ/4`, the ground-state shift of the spectrum.
    pub fn ground(rho: usize, delta: usize) -> Q {
        q((rho * delta) as i64, 4)
    }
}

/// Builds the operators for one algebra with given values of `A` and `B`.
pub struct HiddenAction<C> {
    alg: Arc<Algebra>,
    constants: HiddenConstants,
    a_used: Q,
    b_used: Q,
    eps: Vec<C>,
    laplacian: ConeOperator<C>,
    x_op: ConeOperator<C>,
    hat_e: ConeOperator<C>,
}

fn c<C: ComplexScalar>(v: &Q) -> C {
    C::from_q(v)
}

impl<C: ComplexScalar> HiddenAction<C> {
    pub fn new(alg: Arc<Algebra>) -> Result<Self> {
        let k = HiddenConstants::for_algebra(&alg);
        let (a, b) = (k.a.clone(), k.b.clone());
        Self::with_constants(alg, a, b)
    }

    /// Same as [`HiddenAction::new`] with `A` and `B` overridden.
    pub fn with_constants(alg: Arc<Algebra>, a_used: Q, b_used: Q) -> Result<Self> {
        if alg.rank() < 2 {
            return Err(JkaError::OutOfRange {
                family: alg.family().to_string(),
                n: alg.spec().n,
                reason: "the action needs rank at least 2".into(),
            });
        }
        let constants = HiddenConstants::for_algebra(&alg);
        let eps: Vec<C> = alg.unit_functional::<Q>().iter().map(c).collect();
        let dim = alg.dim();
        let hat_e = {
            let id = Mat::<Q>::identity(dim);
            ConeOperator::vector_field(linear_field(&eps, &id, -Q::one()), "hatL(e)")
        };
        let laplacian = build_laplacian(&alg, &eps, &a_used)?;
        let mut this = HiddenAction {
            alg,
            constants,
            a_used,
            b_used,
            eps,
            laplacian,
            x_op: ConeOperator::zero(),
            hat_e,
        };
        this.x_op = this.build_x();
        Ok(this)
    }

    pub fn algebra(&self) -> &Arc<Algebra> {
        &self.alg
    }

    pub fn constants(&self) -> &HiddenConstants {
        &self.constants
    }

    pub fn a_used(&self) -> &Q {
        &self.a_used
    }

    pub fn b_used(&self) -> &Q {
        &self.b_used
    }

    pub fn dim(&self) -> usize {
        self.alg.dim()
    }

    pub fn unit_functional(&self) -> &[C] {
        &self.eps
    }

    fn name(&self, u: &[Q]) -> String {
        if u == self.alg.unit::<Q>().as_slice() {
            return "e".into();
        }
        let nz: Vec<usize> = (0..u.len()).filter(|&i| !u[i].is_zero()).collect();
        match nz.as_slice() {
            [] => "0".into(),
            [i] if u[*i].is_one() => format!("b{i}"),
            _ => format!("w{:x}", u.iter().fold(0u32, |h, v| h.wrapping_mul(31).wrapping_add(v.numer().bits() as u32 + 7 * v.denom().bits() as u32))),
        }
    }

    /// `⟨u|x⟩` as a linear function.
    pub fn inner_form(&self, u: &[Q]) -> WeightedFunction<C> {
        let g = self.alg.gram();
        let coeffs: Vec<C> = u.iter().zip(g).map(|(a, b)| c(&(a * b))).collect();
        WeightedFunction::linear(&coeffs)
    }

    /// `λ_u = κ⟨u|x⟩/r + (ρδ/4)⟨u|e⟩`.
    pub fn lambda(&self, u: &[Q]) -> WeightedFunction<C> {
        let dim = self.dim();
        let rho = self.alg.rank();
        let delta = self.alg.degree();
        let over_r = WeightedFunction::rpow(dim, c(&self.constants.kappa), Exponent::from_integer(-1));
        let ue = self.alg.inner(u, &self.alg.unit::<Q>());
        let shift = HiddenConstants::ground(rho, delta) * ue;
        self.inner_form(u).mul(&over_r).add(&WeightedFunction::constant(dim, c(&shift)))
    }

    /// The field `x ↦ −Mx`.
    pub fn linear_field_op(&self, m: &Mat<Q>, label: impl Into<String>) -> ConeOperator<C> {
        ConeOperator::vector_field(linear_field(&self.eps, m, -Q::one()), label)
    }

    /// `−⟨ux|∂⟩`.
    pub fn hat_l(&self, u: &[Q]) -> ConeOperator<C> {
        if u == self.alg.unit::<Q>().as_slice() {
            return self.hat_e.clone();
        }
        self.linear_field_op(&self.alg.lmul(u), format!("hatL({})", self.name(u)))
    }

    /// `hatL(u) − λ_u`.
    pub fn tilde_l(&self, u: &[Q]) -> ConeOperator<C> {
        let lam = ConeOperator::multiply(self.lambda(u), format!("λ({})", self.name(u)));
        lincomb(vec![(C::one(), self.hat_l(u)), (-C::one(), lam)]).relabel(format!("tildeL({})", self.name(u)))
    }

    /// `A Σ_{α,β} [hatL_α, hatL_β]²` over an orthonormal basis.
    pub fn laplacian(&self) -> ConeOperator<C> {
        self.laplacian.clone()
    }

    fn build_x(&self) -> ConeOperator<C> {
        let dim = self.dim();
        let rho = self.alg.rank() as i64;
        let delta = self.alg.degree() as i64;
        let c1 = C::from_i64((rho - 1) * delta - 1);
        let radial = lincomb(vec![
            (C::one(), square(&self.hat_e)),
            (-c1, self.hat_e.clone()),
            (C::one(), self.laplacian.clone()),
            (c(&self.b_used), ConeOperator::identity()),
        ]);
        let inv_r = ConeOperator::mul_rpow(dim, -C::one(), Exponent::from_integer(-1));
        compose(&[inv_r, radial]).relabel("X")
    }

    /// `X = −(1/r)(hatL_e² − ((ρ−1)δ−1) hatL_e + Δ + B)`.
    pub fn x(&self) -> ConeOperator<C> {
        self.x_op.clone()
    }

    /// `[tildeL_u, tildeL_v] + tildeL_{uv}`.
    pub fn tilde_s(&self, u: &[Q], v: &[Q]) -> ConeOperator<C> {
        let uv = self.alg.mul(u, v);
        lincomb(vec![(C::one(), commutator(&self.tilde_l(u), &self.tilde_l(v))), (C::one(), self.tilde_l(&uv))])
            .relabel(format!("tildeS({},{})", self.name(u), self.name(v)))
    }

    /// `−i [tildeL_u, X]`.
    pub fn tilde_x(&self, u: &[Q]) -> ConeOperator<C> {
        commutator(&self.tilde_l(u), &self.x_op)
            .scale(-C::imag_unit())
            .relabel(format!("tildeX({})", self.name(u)))
    }

    /// `−i⟨v|x⟩`.
    pub fn tilde_y(&self, v: &[Q]) -> ConeOperator<C> {
        ConeOperator::multiply(self.inner_form(v).scale(&-C::imag_unit()), format!("tildeY({})", self.name(v)))
    }

    /// `−⟨S_uv x|∂⟩`.
    pub fn hat_s(&self, u: &[Q], v: &[Q]) -> ConeOperator<C> {
        self.linear_field_op(&self.alg.s_map(u, v), format!("hatS({},{})", self.name(u), self.name(v)))
    }

    /// `−⟨u|∂⟩`.
    pub fn hat_x(&self, u: &[Q]) -> ConeOperator<C> {
        let dim = self.dim();
        let comps = (0..dim)
            .filter(|&i| !u[i].is_zero())
            .map(|i| (i, vec![(Monomial::one(dim), c(&-u[i].clone()))]))
            .collect();
        ConeOperator::vector_field(VectorField::new(&self.eps, comps), format!("hatX({})", self.name(u)))
    }

    /// `−⟨{xvx}|∂⟩`.
    pub fn hat_y(&self, v: &[Q]) -> ConeOperator<C> {
        let dim = self.dim();
        let mut acc: Vec<HashMap<Monomial, Q>> = vec![HashMap::new(); dim];
        for k in 0..dim {
            let bk = self.alg.basis_vector::<Q>(k);
            for l in k..dim {
                let bl = self.alg.basis_vector::<Q>(l);
                let t = self.alg.triple(&bk, v, &bl);
                let mono = Monomial::var(dim, k).mul(&Monomial::var(dim, l));
                let f = if k == l { qi(1) } else { qi(2) };
                for (i, ti) in t.iter().enumerate() {
                    if !ti.is_zero() {
                        *acc[i].entry(mono.clone()).or_insert_with(Q::zero) -= ti * &f;
                    }
                }
            }
        }
        let comps = acc.into_iter().enumerate().map(|(i, m)| (i, to_poly(m))).collect();
        ConeOperator::vector_field(VectorField::new(&self.eps, comps), format!("hatY({})", self.name(v)))
    }

    /// `−(i/2)(tildeX_e + tildeY_e)`.
    pub fn h0_tilde(&self) -> ConeOperator<C> {
        let e = self.alg.unit::<Q>();
        let k = -C::imag_unit() * C::from_ratio(1, 2);
        lincomb(vec![(k.clone(), self.tilde_x(&e)), (k, self.tilde_y(&e))]).relabel("H0")
    }

    /// `(1/r)((i/2) tildeX_e − 1)`.
    pub fn hamiltonian(&self) -> ConeOperator<C> {
        let e = self.alg.unit::<Q>();
        let inner = lincomb(vec![
            (C::imag_unit() * C::from_ratio(1, 2), self.tilde_x(&e)),
            (-C::one(), ConeOperator::identity()),
        ]);
        let inv_r = ConeOperator::mul_rpow(self.dim(), C::one(), Exponent::from_integer(-1));
        compose(&[inv_r, inner]).relabel("h")
    }

    /// `(i/2) tildeX_u − ⟨u|x⟩ h`.
    pub fn lenz(&self, u: &[Q]) -> ConeOperator<C> {
        let ux = ConeOperator::multiply(self.inner_form(u), format!("<{}|x>", self.name(u)));
        lincomb(vec![
            (C::imag_unit() * C::from_ratio(1, 2), self.tilde_x(u)),
            (-C::one(), compose(&[ux, self.hamiltonian()])),
        ])
        .relabel(format!("A({})", self.name(u)))
    }

    /// `[hatL_u, hatL_v]`.
    pub fn l_uv(&self, u: &[Q], v: &[Q]) -> ConeOperator<C> {
        commutator(&self.hat_l(u), &self.hat_l(v)).relabel(format!("L({},{})", self.name(u), self.name(v)))
    }

    /// Builds an operator by name.
    pub fn build(&self, kind: &str, params: &[Vec<Q>]) -> Result<ConeOperator<C>> {
        let need = |n: usize| -> Result<()> {
            if params.len() == n {
                Ok(())
            } else {
                Err(JkaError::InvalidInput(format!("{kind} takes {n} vector parameters")))
            }
        };
        Ok(match kind {
            "hatL" => {
                need(1)?;
                self.hat_l(&params[0])
            }
            "tildeL" => {
                need(1)?;
                self.tilde_l(&params[0])
            }
            "X" => {
                need(0)?;
                self.x()
            }
            "tildeS" => {
                need(2)?;
                self.tilde_s(&params[0], &params[1])
            }
            "tildeX" => {
                need(1)?;
                self.tilde_x(&params[0])
            }
            "tildeY" => {
                need(1)?;
                self.tilde_y(&params[0])
            }
            "hatS" => {
                need(2)?;
                self.hat_s(&params[0], &params[1])
            }
            "hatX" => {
                need(1)?;
                self.hat_x(&params[0])
            }
            "hatY" => {
                need(1)?;
                self.hat_y(&params[0])
            }
            "H0tilde" => {
                need(0)?;
                self.h0_tilde()
            }
            "hamiltonian" => {
                need(0)?;
                self.hamiltonian()
            }
            "lenz" => {
                need(1)?;
                self.lenz(&params[0])
            }
            "Luv" => {
                need(2)?;
                self.l_uv(&params[0], &params[1])
            }
            "laplacian" => {
                need(0)?;
                self.laplacian()
            }
            other => return Err(JkaError::UnknownOperator(other.to_string())),
        })
    }
}

fn to_poly<C: ComplexScalar>(m: HashMap<Monomial, Q>) -> Poly<C> {
    let mut v: Vec<(Monomial, Q)> = m.into_iter().filter(|(_, c)| !c.is_zero()).collect();
    v.sort_by(|a, b| a.0.cmp(&b.0));
    v.into_iter().map(|(m, q)| (m, c(&q))).collect()
}

/// `x ↦ sign · Mx` as a vector field.
fn linear_field<C: ComplexScalar>(eps: &[C], m: &Mat<Q>, sign: Q) -> VectorField<C> {
    let dim = m.rows();
    let comps = (0..dim)
        .map(|i| {
            let p: Poly<C> = (0..dim)
                .filter(|&k| !m.at(i, k).is_zero())
                .map(|k| (Monomial::var(dim, k), c(&(m.at(i, k) * &sign))))
                .collect();
            (i, p)
        })
        .collect();
    VectorField::new(eps, comps)
}

/// `A Σ_{α,β} w_αβ [L_α, L_β]²` as a second-order operator with quadratic and
/// linear coefficients, `w_αβ = 1/(g_α g_β)` for the orthogonal basis.
fn build_laplacian<C: ComplexScalar>(alg: &Algebra, eps: &[C], a: &Q) -> Result<ConeOperator<C>> {
    let dim = alg.dim();
    let g = alg.gram();
    let ls: Vec<Mat<Q>> = (0..dim).map(|i| alg.lmul(&alg.basis_vector::<Q>(i))).collect();
    let mut second: HashMap<(usize, usize), HashMap<Monomial, Q>> = HashMap::new();
    let mut first: HashMap<usize, HashMap<Monomial, Q>> = HashMap::new();
    for al in 0..dim {
        for be in al + 1..dim {
            let d = ls[al].commutator(&ls[be]);
            if d.is_zero() {
                continue;
            }
            // ordered pairs (α,β) and (β,α) give the same square
            let w = qi(2) * a / (&g[al] * &g[be]);
            let nz: Vec<(usize, usize, Q)> = (0..dim)
                .flat_map(|i| (0..dim).map(move |k| (i, k)))
                .filter(|&(i, k)| !d.at(i, k).is_zero())
                .map(|(i, k)| (i, k, d.at(i, k).clone()))
                .collect();
            for (i, k, x) in &nz {
                for (j, l, y) in &nz {
                    if i > j {
                        continue;
                    }
                    let f = if i == j { qi(1) } else { qi(2) };
                    let mono = Monomial::var(dim, *k).mul(&Monomial::var(dim, *l));
                    *second.entry((*i, *j)).or_default().entry(mono).or_insert_with(Q::zero) += &w * x * y * f;
                }
            }
            let d2 = d.matmul(&d);
            for j in 0..dim {
                for k in 0..dim {
                    let v = d2.at(j, k);
                    if !v.is_zero() {
                        *first.entry(j).or_default().entry(Monomial::var(dim, k)).or_insert_with(Q::zero) += &w * v;
                    }
                }
            }
        }
    }
    let mut second: Vec<(usize, usize, Poly<C>)> =
        second.into_iter().map(|((i, j), m)| (i, j, to_poly(m))).filter(|(_, _, p)| !p.is_empty()).collect();
    second.sort_by_key(|(i, j, _)| (*i, *j));
    let mut first: Vec<(usize, Poly<C>)> =
        first.into_iter().map(|(j, m)| (j, to_poly(m))).filter(|(_, p)| !p.is_empty()).collect();
    first.sort_by_key(|(j, _)| *j);
    let op = RadialBlindSecondOrder::new(eps, second, first)?;
    Ok(ConeOperator::second_order(op, "Δ"))
}
