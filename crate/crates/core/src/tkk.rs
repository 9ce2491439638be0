//! The conformal algebra `co(V) = V ⊕ str(V) ⊕ V*` with its bracket, Cartan
//! involution, Killing form and the non-compact `sl₂` data.

use std::sync::Arc;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::algebra::{Algebra, Family};
use crate::error::{JkaError, Result};
use crate::frames::standard_frame;
use crate::linalg::{independent_subset, symmetric_eigenvalues, EchelonBasis, Mat};
use crate::random::{rational_vec, substream};
use crate::scalar::{ComplexScalar, Field, ModP, Rat, Scalar, CQ, Q};

/// `X_x + s + Y_y`, with `s` stored as its action on `V`.
#[derive(Clone, Debug, PartialEq)]
pub struct ConformalElement<T> {
    pub x: Vec<T>,
    pub s: Mat<T>,
    pub y: Vec<T>,
}

impl<T: Scalar> ConformalElement<T> {
    pub fn zero(dim: usize) -> Self {
        ConformalElement { x: vec![T::zero(); dim], s: Mat::zeros(dim, dim), y: vec![T::zero(); dim] }
    }

    pub fn x_part(x: Vec<T>) -> Self {
        let n = x.len();
        ConformalElement { x, s: Mat::zeros(n, n), y: vec![T::zero(); n] }
    }

    pub fn y_part(y: Vec<T>) -> Self {
        let n = y.len();
        ConformalElement { x: vec![T::zero(); n], s: Mat::zeros(n, n), y }
    }

    pub fn s_part(s: Mat<T>) -> Self {
        let n = s.rows();
        ConformalElement { x: vec![T::zero(); n], s, y: vec![T::zero(); n] }
    }

    pub fn add(&self, o: &Self) -> Self {
        ConformalElement {
            x: self.x.iter().zip(&o.x).map(|(a, b)| a.clone() + b.clone()).collect(),
            s: self.s.add(&o.s),
            y: self.y.iter().zip(&o.y).map(|(a, b)| a.clone() + b.clone()).collect(),
        }
    }

    pub fn sub(&self, o: &Self) -> Self {
        self.add(&o.scale(&-T::one()))
    }

    pub fn scale(&self, c: &T) -> Self {
        ConformalElement {
            x: self.x.iter().map(|a| a.clone() * c.clone()).collect(),
            s: self.s.scale(c),
            y: self.y.iter().map(|a| a.clone() * c.clone()).collect(),
        }
    }

    pub fn is_zero(&self) -> bool {
        self.x.iter().all(|a| a.is_zero()) && self.s.is_zero() && self.y.iter().all(|a| a.is_zero())
    }

    pub fn max_abs(&self) -> f64 {
        self.x.iter().chain(&self.y).map(|a| a.magnitude()).fold(self.s.max_abs(), f64::max)
    }

    /// Flattened coordinates `(x, s row-major, y)`.
    pub fn flatten(&self) -> Vec<T> {
        let mut v = self.x.clone();
        v.extend(self.s.entries().iter().cloned());
        v.extend(self.y.iter().cloned());
        v
    }

    pub fn map<U: Scalar>(&self, f: impl Fn(&T) -> U) -> ConformalElement<U> {
        ConformalElement { x: self.x.iter().map(&f).collect(), s: self.s.map(&f), y: self.y.iter().map(&f).collect() }
    }
}

/// The conformal algebra of a Jordan algebra.
#[derive(Clone, Debug)]
pub struct Tkk {
    alg: Arc<Algebra>,
}

impl Tkk {
    pub fn new(alg: Arc<Algebra>) -> Self {
        Tkk { alg }
    }

    pub fn algebra(&self) -> &Algebra {
        &self.alg
    }

    pub fn x(&self, u: &[Q]) -> ConformalElement<Q> {
        ConformalElement::x_part(u.to_vec())
    }

    pub fn y(&self, v: &[Q]) -> ConformalElement<Q> {
        ConformalElement::y_part(v.to_vec())
    }

    pub fn s<T: Scalar>(&self, u: &[T], v: &[T]) -> ConformalElement<T> {
        ConformalElement::s_part(self.alg.s_map(u, v))
    }

    pub fn bracket<T: Scalar>(&self, a: &ConformalElement<T>, b: &ConformalElement<T>) -> ConformalElement<T> {
        let alg = &*self.alg;
        let two = T::from_i64(2);
        let x: Vec<T> = a.s.apply(&b.x).into_iter().zip(b.s.apply(&a.x)).map(|(p, q)| p - q).collect();
        let mut s = a.s.commutator(&b.s);
        if a.x.iter().any(|v| !v.is_zero()) && b.y.iter().any(|v| !v.is_zero()) {
            s = s.sub(&alg.s_map(&a.x, &b.y).scale(&two));
        }
        if b.x.iter().any(|v| !v.is_zero()) && a.y.iter().any(|v| !v.is_zero()) {
            s = s.add(&alg.s_map(&b.x, &a.y).scale(&two));
        }
        let y: Vec<T> = alg
            .adjoint(&b.s)
            .apply(&a.y)
            .into_iter()
            .zip(alg.adjoint(&a.s).apply(&b.y))
            .map(|(p, q)| p - q)
            .collect();
        ConformalElement { x, s, y }
    }

    /// `θ(X_u + s + Y_v) = X_v − s' + Y_u`.
    pub fn theta<T: Scalar>(&self, a: &ConformalElement<T>) -> ConformalElement<T> {
        ConformalElement { x: a.y.clone(), s: self.alg.adjoint(&a.s).neg(), y: a.x.clone() }
    }

    /// `S_{b_α b_β}` for all ordered pairs.
    pub fn structure_span<T: Scalar>(&self) -> Vec<Mat<T>> {
        let n = self.alg.dim();
        let basis: Vec<Vec<T>> = (0..n).map(|i| self.alg.basis_vector(i)).collect();
        (0..n * n).into_par_iter().map(|k| self.alg.s_map(&basis[k / n], &basis[k % n])).collect()
    }

    /// `[L_α, L_β]` for `α < β`.
    pub fn derivation_span<T: Scalar>(&self) -> Vec<Mat<T>> {
        let n = self.alg.dim();
        let ls: Vec<Mat<T>> = (0..n).map(|i| self.alg.lmul(&self.alg.basis_vector::<T>(i))).collect();
        let pairs: Vec<(usize, usize)> = (0..n).flat_map(|a| (a + 1..n).map(move |b| (a, b))).collect();
        pairs.into_par_iter().map(|(a, b)| ls[a].commutator(&ls[b])).collect()
    }

    /// Whether `s` lies in the structure algebra (exact rank test).
    pub fn in_structure_algebra(&self, s: &Mat<Q>) -> bool {
        let n = self.alg.dim();
        let mut basis = EchelonBasis::<ModP>::new(n * n);
        for m in self.structure_span::<ModP>() {
            basis.insert(m.entries());
        }
        basis.contains(s.map(ModP::from_q).entries())
    }

    pub fn dims(&self) -> LieDims {
        let n = self.alg.dim();
        let der = rank_of(self.derivation_span::<ModP>().iter().map(|m| m.entries().to_vec()), n * n);
        let stru = rank_of(self.structure_span::<ModP>().iter().map(|m| m.entries().to_vec()), n * n);
        let mut u_vectors: Vec<Vec<ModP>> = self
            .derivation_span::<ModP>()
            .into_iter()
            .map(|d| ConformalElement::s_part(d).flatten())
            .collect();
        for g in 0..n {
            let b = self.alg.basis_vector::<ModP>(g);
            u_vectors.push(ConformalElement { x: b.clone(), s: Mat::zeros(n, n), y: b }.flatten());
        }
        let u = rank_of(u_vectors.into_iter(), 2 * n + n * n);
        let spec = self.alg.spec();
        LieDims { family: spec.family, n: spec.n, der, r#str: stru, u, co: 2 * n + stru }
    }

    /// A basis of `co(V)`: all `X_i`, all `Y_i`, then independent `S_{b_α b_β}`.
    pub fn basis<T: Field>(&self) -> CoBasis<T> {
        let n = self.alg.dim();
        let span_p = self.structure_span::<ModP>();
        let flat: Vec<Vec<ModP>> = span_p.iter().map(|m| m.entries().to_vec()).collect();
        let chosen = independent_subset(&flat);
        let k = chosen.len();
        // rows of the n²×k matrix that carry an invertible k×k block
        let cols: Vec<Vec<ModP>> = chosen.iter().map(|&c| flat[c].clone()).collect();
        let mut r = Mat::from_rows(&cols); // k × n²
        let pivot_rows = r.rref(0.0);
        let basis_vecs: Vec<Vec<T>> = (0..n).map(|i| self.alg.basis_vector(i)).collect();
        let s_elems: Vec<Mat<T>> = chosen
            .iter()
            .map(|&c| self.alg.s_map(&basis_vecs[c / n], &basis_vecs[c % n]))
            .collect();
        let block = Mat::from_fn(k, k, |i, j| s_elems[j].entries()[pivot_rows[i]].clone());
        let block_inv = block.inverse().expect("pivot block is invertible");
        let mut elements = Vec::with_capacity(2 * n + k);
        for b in &basis_vecs {
            elements.push(ConformalElement::x_part(b.clone()));
        }
        for b in &basis_vecs {
            elements.push(ConformalElement::y_part(b.clone()));
        }
        for s in &s_elems {
            elements.push(ConformalElement::s_part(s.clone()));
        }
        CoBasis { dim: n, elements, pivot_rows, block_inv }
    }

    /// `K(a, b) = tr(ad_a ad_b)`.
    pub fn killing<T: Field>(&self, basis: &CoBasis<T>, a: &ConformalElement<T>, b: &ConformalElement<T>) -> T {
        self.ad(basis, a).trace_of_product(&self.ad(basis, b))
    }

    pub fn ad<T: Field>(&self, basis: &CoBasis<T>, a: &ConformalElement<T>) -> Mat<T> {
        let cols: Vec<Vec<T>> =
            basis.elements.par_iter().map(|b| basis.coordinates(&self.bracket(a, b))).collect();
        Mat::from_columns(&cols)
    }

    /// Gram matrix of `(a, b) ↦ K(a, θb)` on the basis.
    pub fn killing_theta_gram<T: Field>(&self, basis: &CoBasis<T>) -> Mat<T> {
        let ads: Vec<Mat<T>> = basis.elements.iter().map(|b| self.ad(basis, b)).collect();
        let theta_ads: Vec<Mat<T>> = basis.elements.iter().map(|b| self.ad(basis, &self.theta(b))).collect();
        let m = basis.elements.len();
        let entries: Vec<T> = (0..m * m)
            .into_par_iter()
            .map(|k| ads[k / m].trace_of_product(&theta_ads[k % m]))
            .collect();
        Mat::from_fn(m, m, |i, j| entries[i * m + j].clone())
    }
}

fn rank_of(vectors: impl Iterator<Item = Vec<ModP>>, len: usize) -> usize {
    let mut basis = EchelonBasis::new(len);
    for v in vectors {
        basis.insert(&v);
    }
    basis.rank()
}

/// A concrete basis of `co(V)` with a coordinate map.
#[derive(Clone, Debug)]
pub struct CoBasis<T> {
    dim: usize,
    pub elements: Vec<ConformalElement<T>>,
    pivot_rows: Vec<usize>,
    block_inv: Mat<T>,
}

impl<T: Field> CoBasis<T> {
    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    /// Coordinates of `a`; the `s` part is assumed to lie in the structure algebra.
    pub fn coordinates(&self, a: &ConformalElement<T>) -> Vec<T> {
        let mut out = a.x.clone();
        out.extend(a.y.iter().cloned());
        let rhs: Vec<T> = self.pivot_rows.iter().map(|&r| a.s.entries()[r].clone()).collect();
        out.extend(self.block_inv.apply(&rhs));
        debug_assert_eq!(out.len(), 2 * self.dim + self.pivot_rows.len());
        out
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct LieDims {
    pub family: Family,
    pub n: usize,
    pub der: usize,
    #[serde(rename = "str")]
    pub r#str: usize,
    pub u: usize,
    pub co: usize,
}

/// Exact residuals of antisymmetry and Jacobi on `count` random triples.
pub fn axiom_residuals(tkk: &Tkk, count: usize, seed: u64) -> (f64, f64) {
    let res: Vec<(f64, f64)> = (0..count)
        .into_par_iter()
        .map(|t| {
            let mut rng = substream(seed, t as u64);
            // word-sized rationals with big-integer fallback: exact and much faster
            let mut draw = || random_element(tkk, &mut rng).map(Rat::from_q);
            let (a, b, c) = (draw(), draw(), draw());
            let anti = tkk.bracket(&a, &b).add(&tkk.bracket(&b, &a));
            let jac = tkk
                .bracket(&a, &tkk.bracket(&b, &c))
                .add(&tkk.bracket(&b, &tkk.bracket(&c, &a)))
                .add(&tkk.bracket(&c, &tkk.bracket(&a, &b)));
            (anti.max_abs(), jac.max_abs())
        })
        .collect();
    res.into_iter().fold((0.0, 0.0), |acc, r| (acc.0.max(r.0), acc.1.max(r.1)))
}

/// A random exact element: random `x`, `y`, and two random `S_uv` terms.
pub fn random_element(tkk: &Tkk, rng: &mut crate::random::JkaRng) -> ConformalElement<Q> {
    let n = tkk.alg.dim();
    let x = rational_vec(rng, n);
    let y = rational_vec(rng, n);
    let s1 = tkk.alg.s_map(&rational_vec(rng, n), &rational_vec(rng, n));
    let s2 = tkk.alg.s_map(&rational_vec(rng, n), &rational_vec(rng, n));
    ConformalElement { x, s: s1.add(&s2), y }
}

fn to_complex(v: &[Q]) -> Vec<CQ> {
    v.iter().map(CQ::from_q).collect()
}

/// `h_u = i(X_u + Y_u)`.
pub fn h_elem(alg: &Algebra, u: &[Q]) -> ConformalElement<CQ> {
    let i = CQ::imag_unit();
    let u = to_complex(u);
    let n = alg.dim();
    ConformalElement { x: u.clone(), s: Mat::zeros(n, n), y: u }.scale(&i)
}

/// `E_u^± = (i/2)(X_u − Y_u) ∓ L_u`.
pub fn e_elem(alg: &Algebra, u: &[Q], plus: bool) -> ConformalElement<CQ> {
    let half_i = CQ::imag_unit() * CQ::from_ratio(1, 2);
    let uc = to_complex(u);
    let l = alg.lmul(&uc);
    ConformalElement {
        x: uc.iter().map(|a| a.clone() * half_i.clone()).collect(),
        s: if plus { l.neg() } else { l },
        y: uc.iter().map(|a| -(a.clone() * half_i.clone())).collect(),
    }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct VoganReport {
    /// `(relation, exact zero)` pairs.
    pub relations: Vec<(String, bool)>,
}

impl VoganReport {
    pub fn all_exact(&self) -> bool {
        self.relations.iter().all(|r| r.1)
    }
}

/// The `α₀` sl₂ triple and the four brackets among `h_u`, `E_u^±`.
pub fn vogan_sl2_check(tkk: &Tkk, pairs: usize, seed: u64) -> VoganReport {
    let alg = tkk.algebra();
    let frame = standard_frame(alg);
    let e11 = &frame[0];
    let h = h_elem(alg, e11);
    let ep = e_elem(alg, e11, true);
    let em = e_elem(alg, e11, false);
    let two = CQ::from_i64(2);
    let mut relations = vec![
        ("[H,E+] = 2E+".to_string(), tkk.bracket(&h, &ep).sub(&ep.scale(&two)).is_zero()),
        ("[H,E-] = -2E-".to_string(), tkk.bracket(&h, &em).add(&em.scale(&two)).is_zero()),
        ("[E+,E-] = -H".to_string(), tkk.bracket(&ep, &em).add(&h).is_zero()),
    ];
    let mut ok = [true; 6];
    for t in 0..pairs {
        let mut rng = substream(seed, t as u64);
        let u = rational_vec(&mut rng, alg.dim());
        let v = rational_vec(&mut rng, alg.dim());
        let uv = alg.mul(&u, &v);
        let lu = alg.lmul(&to_complex(&u));
        let lv = alg.lmul(&to_complex(&v));
        let dl = ConformalElement::s_part(lu.commutator(&lv));
        let (hu, hv) = (h_elem(alg, &u), h_elem(alg, &v));
        let (eup, eum) = (e_elem(alg, &u, true), e_elem(alg, &u, false));
        let (evp, evm) = (e_elem(alg, &v, true), e_elem(alg, &v, false));
        ok[0] &= tkk.bracket(&hu, &evp).sub(&e_elem(alg, &uv, true).scale(&two)).is_zero();
        ok[1] &= tkk.bracket(&hu, &evm).add(&e_elem(alg, &uv, false).scale(&two)).is_zero();
        ok[2] &= tkk.bracket(&eup, &evm).add(&h_elem(alg, &uv)).add(&dl.scale(&two)).is_zero();
        ok[3] &= tkk.bracket(&eup, &evp).is_zero();
        ok[4] &= tkk.bracket(&eum, &evm).is_zero();
        ok[5] &= tkk.bracket(&hu, &hv).sub(&dl.scale(&CQ::from_i64(4))).is_zero();
    }
    let names = [
        "[h_u,E_v+] = 2E_uv+",
        "[h_u,E_v-] = -2E_uv-",
        "[E_u+,E_v-] = -h_uv - 2[L_u,L_v]",
        "[E_u+,E_v+] = 0",
        "[E_u-,E_v-] = 0",
        "[h_u,h_v] = 4[L_u,L_v]",
    ];
    relations.extend(names.iter().zip(ok).map(|(n, o)| (n.to_string(), o)));
    VoganReport { relations }
}

/// Largest eigenvalue of the Killing-θ Gram matrix, plus an exact
/// negative-definiteness verdict from a rational LDLᵀ factorization.
pub fn killing_definiteness(tkk: &Tkk) -> Result<(f64, bool)> {
    let basis = tkk.basis::<Q>();
    let expected = tkk.dims().co;
    if basis.len() != expected {
        return Err(JkaError::RankDeficient { expected, found: basis.len() });
    }
    let g = tkk.killing_theta_gram(&basis);
    let max_ev = symmetric_eigenvalues(&g.to_f64()).last().copied().unwrap_or(0.0);
    Ok((max_ev, negative_definite_exact(&g)))
}

/// Sylvester-type test: all LDLᵀ pivots of `−m` strictly positive.
pub fn negative_definite_exact(m: &Mat<Q>) -> bool {
    use num_traits::Signed;
    let n = m.rows();
    let mut a = m.neg();
    for k in 0..n {
        let p = a.at(k, k).clone();
        if !p.is_positive() {
            return false;
        }
        for i in k + 1..n {
            let f = a.at(i, k).clone() / p.clone();
            if f == Q::from_integer(0.into()) {
                continue;
            }
            for j in k..n {
                let v = a.at(i, j).clone() - f.clone() * a.at(k, j).clone();
                a.set(i, j, v);
            }
        }
    }
    true
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::AlgebraSpec;

    fn tkk(f: Family, n: usize) -> Tkk {
        Tkk::new(Algebra::shared(AlgebraSpec::new(f, n)).unwrap())
    }

    #[test]
    fn x_e_y_e_bracket() {
        let t = tkk(Family::HermR, 3);
        let e = t.algebra().unit::<Q>();
        let lhs = t.bracket(&t.x(&e), &t.y(&e));
        let expect = ConformalElement::s_part(t.algebra().lmul(&e).scale(&Q::from_integer((-2).into())));
        assert_eq!(lhs, expect);
    }

    #[test]
    fn gamma3_dims() {
        let d = tkk(Family::Gamma, 3).dims();
        assert_eq!(d.co, 15);
    }
}
