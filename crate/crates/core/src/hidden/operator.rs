//! Linear operators on [`WeightedFunction`]s built from multiplications and
//! polynomial vector fields.

use std::collections::HashMap;
use std::fmt;
use std::sync::{Arc, Mutex};

use super::function::{ratio, Exponent, Monomial, Poly, TermKey, WeightedFunction};
use crate::error::{JkaError, Result};
use crate::scalar::Scalar;

/// `Σ_i p_i(x) ∂_i`.
pub struct VectorField<C> {
    components: Vec<(usize, Poly<C>)>,
    /// `Σ_i ε_i p_i`, the derivative of `r` along the field.
    along_r: Poly<C>,
}

impl<C: Scalar> VectorField<C> {
    /// `eps` is the unit functional `ε_i = ⟨e|b_i⟩`, so that `∂_i r = ε_i`.
    pub fn new(eps: &[C], components: Vec<(usize, Poly<C>)>) -> Self {
        let dim = eps.len();
        let mut acc: WeightedFunction<C> = WeightedFunction::zero(dim);
        for (i, p) in &components {
            if !eps[*i].is_zero() {
                acc.add_scaled(&eps[*i], &WeightedFunction::from_poly(dim, p));
            }
        }
        let along_r = acc.terms().map(|(k, c)| (k.mono.clone(), c.clone())).collect();
        let components = components.into_iter().filter(|(_, p)| !p.is_empty()).collect();
        VectorField { components, along_r }
    }

    fn apply_term(&self, key: &TermKey, c: &C, out: &mut WeightedFunction<C>) {
        if !self.along_r.is_empty() {
            let g: C = ratio(&key.gamma);
            let s: C = ratio(&key.s);
            for (m, p) in &self.along_r {
                let mono = key.mono.mul(m);
                if !g.is_zero() {
                    out.add_term(
                        TermKey { gamma: key.gamma, s: key.s, mono: mono.clone() },
                        g.clone() * c.clone() * p.clone(),
                    );
                }
                if !s.is_zero() {
                    out.add_term(
                        TermKey { gamma: key.gamma, s: key.s - 1, mono },
                        s.clone() * c.clone() * p.clone(),
                    );
                }
            }
        }
        for (i, p) in &self.components {
            let e = key.mono.exponent(*i);
            if e == 0 {
                continue;
            }
            let lowered = key.mono.lower(*i);
            let f = C::from_i64(e as i64) * c.clone();
            for (m, q) in p {
                out.add_term(
                    TermKey { gamma: key.gamma, s: key.s, mono: lowered.mul(m) },
                    f.clone() * q.clone(),
                );
            }
        }
    }
}

/// `Σ_{i,j} Q_ij(x) ∂_i ∂_j + Σ_j P_j(x) ∂_j` for an operator that annihilates
/// every function of `r` and maps `g(r) p(x)` to `g(r) (Δp)(x)`.
pub struct RadialBlindSecondOrder<C> {
    dim: usize,
    /// `(i, j, Q_ij)` with `i ≤ j`; off-diagonal entries already doubled.
    second: Vec<(usize, usize, Poly<C>)>,
    first: Vec<(usize, Poly<C>)>,
    memo: Mutex<HashMap<Monomial, Arc<Poly<C>>>>,
}

impl<C: Scalar> RadialBlindSecondOrder<C> {
    /// Checks that the coefficients kill `r`: `Σ_i Q_ij ε_i = 0` and `Σ_j P_j ε_j = 0`.
    pub fn new(eps: &[C], second: Vec<(usize, usize, Poly<C>)>, first: Vec<(usize, Poly<C>)>) -> Result<Self> {
        let dim = eps.len();
        let mut q_eps: Vec<WeightedFunction<C>> = vec![WeightedFunction::zero(dim); dim];
        for (i, j, p) in &second {
            let p = WeightedFunction::from_poly(dim, p);
            if i == j {
                q_eps[*j].add_scaled(&eps[*i], &p);
            } else {
                // stored entries are Q_ij + Q_ji
                let half = C::from_ratio(1, 2);
                q_eps[*j].add_scaled(&(eps[*i].clone() * half.clone()), &p);
                q_eps[*i].add_scaled(&(eps[*j].clone() * half), &p);
            }
        }
        let mut p_eps: WeightedFunction<C> = WeightedFunction::zero(dim);
        for (j, p) in &first {
            p_eps.add_scaled(&eps[*j], &WeightedFunction::from_poly(dim, p));
        }
        let residual = q_eps.iter().map(max_coeff).fold(max_coeff(&p_eps), f64::max);
        let limit = if C::is_exact() { 0.0 } else { 1e-12 };
        if residual > limit {
            return Err(JkaError::InvalidInput(format!("second-order operator does not annihilate r ({residual:.3e})")));
        }
        Ok(RadialBlindSecondOrder { dim, second, first, memo: Mutex::new(HashMap::new()) })
    }

    fn on_monomial(&self, m: &Monomial) -> Arc<Poly<C>> {
        if let Some(p) = self.memo.lock().expect("memo lock").get(m) {
            return p.clone();
        }
        let mut acc: WeightedFunction<C> = WeightedFunction::zero(self.dim);
        let zero = Exponent::from_integer(0);
        let mut push = |mono: Monomial, c: C| acc.add_term(TermKey { gamma: zero, s: zero, mono }, c);
        for (i, j, q) in &self.second {
            let (ei, ej) = (m.exponent(*i) as i64, m.exponent(*j) as i64);
            let (factor, lowered) = if i == j {
                if ei < 2 {
                    continue;
                }
                (ei * (ei - 1), m.lower(*i).lower(*i))
            } else {
                if ei == 0 || ej == 0 {
                    continue;
                }
                (ei * ej, m.lower(*i).lower(*j))
            };
            let f = C::from_i64(factor);
            for (mq, c) in q {
                push(lowered.mul(mq), f.clone() * c.clone());
            }
        }
        for (j, p) in &self.first {
            let ej = m.exponent(*j) as i64;
            if ej == 0 {
                continue;
            }
            let lowered = m.lower(*j);
            let f = C::from_i64(ej);
            for (mp, c) in p {
                push(lowered.mul(mp), f.clone() * c.clone());
            }
        }
        let poly: Arc<Poly<C>> = Arc::new(acc.terms().map(|(k, c)| (k.mono.clone(), c.clone())).collect());
        self.memo.lock().expect("memo lock").insert(m.clone(), poly.clone());
        poly
    }

    fn apply_term(&self, key: &TermKey, c: &C, out: &mut WeightedFunction<C>) {
        let image = self.on_monomial(&key.mono);
        for (m, v) in image.iter() {
            out.add_term(TermKey { gamma: key.gamma, s: key.s, mono: m.clone() }, c.clone() * v.clone());
        }
    }
}

fn max_coeff<C: Scalar>(f: &WeightedFunction<C>) -> f64 {
    f.terms().map(|(_, c)| c.magnitude()).fold(0.0, f64::max)
}

enum Node<C> {
    Zero,
    Identity,
    Multiply(WeightedFunction<C>),
    Field(VectorField<C>),
    SecondOrder(RadialBlindSecondOrder<C>),
    /// `ops[0] ∘ ops[1] ∘ …`, applied right to left.
    Compose(Vec<ConeOperator<C>>),
    LinComb(Vec<(C, ConeOperator<C>)>),
}

/// A linear endomorphism of weighted functions with a printable expression.
#[derive(Clone)]
pub struct ConeOperator<C> {
    node: Arc<Node<C>>,
    label: Arc<str>,
}

impl<C> fmt::Debug for ConeOperator<C> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.label)
    }
}

impl<C: Scalar> ConeOperator<C> {
    fn make(node: Node<C>, label: impl Into<String>) -> Self {
        ConeOperator { node: Arc::new(node), label: label.into().into() }
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn relabel(&self, label: impl Into<String>) -> Self {
        ConeOperator { node: self.node.clone(), label: label.into().into() }
    }

    pub fn zero() -> Self {
        Self::make(Node::Zero, "0")
    }

    pub fn identity() -> Self {
        Self::make(Node::Identity, "1")
    }

    pub fn is_zero(&self) -> bool {
        matches!(*self.node, Node::Zero)
    }

    /// Multiplication by a weighted function.
    pub fn multiply(f: WeightedFunction<C>, label: impl Into<String>) -> Self {
        if f.is_zero() {
            return Self::zero();
        }
        Self::make(Node::Multiply(f), label)
    }

    /// Multiplication by a polynomial.
    pub fn mul_poly(dim: usize, p: &Poly<C>, label: impl Into<String>) -> Self {
        Self::multiply(WeightedFunction::from_poly(dim, p), label)
    }

    /// Multiplication by `c · r^s`.
    pub fn mul_rpow(dim: usize, c: C, s: Exponent) -> Self {
        let label = format!("r^({s})");
        Self::multiply(WeightedFunction::rpow(dim, c, s), label)
    }

    /// `∂/∂x^i` in the constructed coordinates.
    pub fn partial(eps: &[C], i: usize) -> Self {
        let one = vec![(Monomial::one(eps.len()), C::one())];
        Self::vector_field(VectorField::new(eps, vec![(i, one)]), format!("∂{i}"))
    }

    pub fn vector_field(field: VectorField<C>, label: impl Into<String>) -> Self {
        if field.components.is_empty() {
            return Self::zero();
        }
        Self::make(Node::Field(field), label)
    }

    pub fn second_order(op: RadialBlindSecondOrder<C>, label: impl Into<String>) -> Self {
        Self::make(Node::SecondOrder(op), label)
    }

    /// `self ∘ other`.
    pub fn then_after(&self, other: &Self) -> Self {
        compose(&[self.clone(), other.clone()])
    }

    pub fn scale(&self, c: C) -> Self {
        lincomb(vec![(c, self.clone())])
    }

    /// Applies the operator to `f`.
    pub fn apply(&self, f: &WeightedFunction<C>) -> WeightedFunction<C> {
        match &*self.node {
            Node::Zero => WeightedFunction::zero(f.dim()),
            Node::Identity => f.clone(),
            Node::Multiply(g) => f.mul(g),
            Node::Field(v) => {
                let mut out = WeightedFunction::zero(f.dim());
                for (k, c) in f.terms() {
                    v.apply_term(k, c, &mut out);
                }
                out
            }
            Node::SecondOrder(d) => {
                let mut out = WeightedFunction::zero(f.dim());
                for (k, c) in f.terms() {
                    d.apply_term(k, c, &mut out);
                }
                out
            }
            Node::Compose(ops) => {
                let mut cur = f.clone();
                for op in ops.iter().rev() {
                    if cur.is_zero() {
                        break;
                    }
                    cur = op.apply(&cur);
                }
                cur
            }
            Node::LinComb(items) => {
                let mut out = WeightedFunction::zero(f.dim());
                for (c, op) in items {
                    out.add_scaled(c, &op.apply(f));
                }
                out
            }
        }
    }
}

fn paren(op: &str) -> String {
    if op.contains(' ') && !(op.starts_with('[') || op.starts_with('{') || op.starts_with('(')) {
        format!("({op})")
    } else {
        op.to_string()
    }
}

/// `ops[0] ∘ ops[1] ∘ …`.
pub fn compose<C: Scalar>(ops: &[ConeOperator<C>]) -> ConeOperator<C> {
    if ops.iter().any(|o| o.is_zero()) {
        return ConeOperator::zero();
    }
    let ops: Vec<_> = ops.iter().filter(|o| !matches!(*o.node, Node::Identity)).cloned().collect();
    match ops.len() {
        0 => ConeOperator::identity(),
        1 => ops[0].clone(),
        _ => {
            let label = ops.iter().map(|o| paren(&o.label)).collect::<Vec<_>>().join("·");
            ConeOperator::make(Node::Compose(ops), label)
        }
    }
}

/// `Σ c_k op_k`.
pub fn lincomb<C: Scalar>(items: Vec<(C, ConeOperator<C>)>) -> ConeOperator<C> {
    let items: Vec<_> = items.into_iter().filter(|(c, o)| !c.is_zero() && !o.is_zero()).collect();
    if items.is_empty() {
        return ConeOperator::zero();
    }
    if items.len() == 1 && items[0].0 == C::one() {
        return items[0].1.clone();
    }
    let label = items
        .iter()
        .map(|(c, o)| if *c == C::one() { paren(&o.label) } else { format!("({c:?})·{}", paren(&o.label)) })
        .collect::<Vec<_>>()
        .join(" + ");
    ConeOperator::make(Node::LinComb(items), label)
}

pub fn sum<C: Scalar>(ops: &[ConeOperator<C>]) -> ConeOperator<C> {
    lincomb(ops.iter().map(|o| (C::one(), o.clone())).collect())
}

/// `[a, b] = ab − ba`.
pub fn commutator<C: Scalar>(a: &ConeOperator<C>, b: &ConeOperator<C>) -> ConeOperator<C> {
    if a.is_zero() || b.is_zero() {
        return ConeOperator::zero();
    }
    lincomb(vec![(C::one(), compose(&[a.clone(), b.clone()])), (-C::one(), compose(&[b.clone(), a.clone()]))])
        .relabel(format!("[{}, {}]", a.label, b.label))
}

/// `{a, b} = ab + ba`.
pub fn anticommutator<C: Scalar>(a: &ConeOperator<C>, b: &ConeOperator<C>) -> ConeOperator<C> {
    lincomb(vec![(C::one(), compose(&[a.clone(), b.clone()])), (C::one(), compose(&[b.clone(), a.clone()]))])
        .relabel(format!("{{{}, {}}}", a.label, b.label))
}

pub fn square<C: Scalar>(a: &ConeOperator<C>) -> ConeOperator<C> {
    compose(&[a.clone(), a.clone()]).relabel(format!("{}²", paren(&a.label)))
}
