//! Finite sums of `c · e^{γr} · r^s · x^m` on the ambient space, `r = ⟨e|x⟩`.

use std::cmp::Ordering;
use std::collections::hash_map::Entry;
use std::fmt;
use std::hash::{Hash, Hasher};

use num_rational::Rational64;
use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use rustc_hash::FxHashMap;

use crate::error::{JkaError, Result};
use crate::scalar::{ComplexScalar, Scalar, C64, CQ, Q};

pub type Exponent = Rational64;

/// Largest ambient dimension a monomial can carry (the octonionic case).
pub const MAX_DIM: usize = 27;

/// Exponent vector over the ambient coordinates.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Monomial {
    dim: u8,
    exps: [u8; MAX_DIM],
}

impl fmt::Debug for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self
            .exponents()
            .iter()
            .enumerate()
            .filter(|(_, &e)| e > 0)
            .map(|(i, &e)| if e == 1 { format!("x{i}") } else { format!("x{i}^{e}") })
            .collect();
        if parts.is_empty() {
            write!(f, "1")
        } else {
            write!(f, "{}", parts.join("·"))
        }
    }
}

impl Monomial {
    pub fn one(dim: usize) -> Self {
        assert!(dim <= MAX_DIM, "ambient dimension {dim} exceeds {MAX_DIM}");
        Monomial { dim: dim as u8, exps: [0; MAX_DIM] }
    }

    pub fn var(dim: usize, i: usize) -> Self {
        let mut m = Self::one(dim);
        m.exps[i] = 1;
        m
    }

    pub fn from_exponents(exps: &[u8]) -> Self {
        let mut m = Self::one(exps.len());
        m.exps[..exps.len()].copy_from_slice(exps);
        m
    }

    pub fn exponents(&self) -> &[u8] {
        &self.exps[..self.dim as usize]
    }

    pub fn dim(&self) -> usize {
        self.dim as usize
    }

    pub fn degree(&self) -> usize {
        self.exps.iter().map(|&e| e as usize).sum()
    }

    pub fn exponent(&self, i: usize) -> u8 {
        self.exps[i]
    }

    pub fn mul(&self, other: &Monomial) -> Monomial {
        let mut out = *self;
        for (a, b) in out.exps.iter_mut().zip(other.exps.iter()) {
            *a += b;
        }
        out
    }

    /// `x^m / x_i`, assuming `m_i > 0`.
    pub fn lower(&self, i: usize) -> Monomial {
        let mut out = *self;
        out.exps[i] -= 1;
        out
    }

    pub fn eval(&self, x: &[f64]) -> f64 {
        self.exponents().iter().zip(x).map(|(&e, &v)| v.powi(e as i32)).product()
    }

    /// All monomials of total degree exactly `d`, lexicographically descending.
    pub fn of_degree(dim: usize, d: usize) -> Vec<Monomial> {
        let mut out = Vec::new();
        let mut cur = vec![0u8; dim];
        fn rec(i: usize, left: usize, cur: &mut Vec<u8>, out: &mut Vec<Monomial>) {
            if i + 1 == cur.len() {
                cur[i] = left as u8;
                out.push(Monomial::from_exponents(cur));
                return;
            }
            for e in (0..=left).rev() {
                cur[i] = e as u8;
                rec(i + 1, left - e, cur, out);
            }
            cur[i] = 0;
        }
        if dim == 0 {
            return out;
        }
        rec(0, d, &mut cur, &mut out);
        out
    }

    /// All monomials of degree at most `d`, grouped by degree.
    pub fn up_to_degree(dim: usize, d: usize) -> Vec<Monomial> {
        (0..=d).flat_map(|k| Monomial::of_degree(dim, k)).collect()
    }
}

/// `(γ, s, m)` for a term `e^{γr} r^s x^m`.
#[derive(Clone, Copy, Debug)]
pub struct TermKey {
    pub gamma: Exponent,
    pub s: Exponent,
    pub mono: Monomial,
}

impl TermKey {
    // Exponents are always kept in lowest terms, so the raw parts identify them.
    fn raw(&self) -> (i64, i64, i64, i64) {
        (*self.gamma.numer(), *self.gamma.denom(), *self.s.numer(), *self.s.denom())
    }
}

impl PartialEq for TermKey {
    fn eq(&self, other: &Self) -> bool {
        self.raw() == other.raw() && self.mono == other.mono
    }
}

impl Eq for TermKey {}

impl Hash for TermKey {
    fn hash<H: Hasher>(&self, state: &mut H) {
        self.raw().hash(state);
        self.mono.hash(state);
    }
}

impl PartialOrd for TermKey {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for TermKey {
    fn cmp(&self, other: &Self) -> Ordering {
        self.gamma.cmp(&other.gamma).then(self.s.cmp(&other.s)).then(self.mono.cmp(&other.mono))
    }
}

/// A polynomial as a sparse list of monomials.
pub type Poly<C> = Vec<(Monomial, C)>;

/// Converts a small exact rational to an exponent.
pub fn to_exponent(v: &crate::scalar::Q) -> Exponent {
    let n = i64::try_from(v.numer()).expect("exponent numerator fits in i64");
    let d = i64::try_from(v.denom()).expect("exponent denominator fits in i64");
    Exponent::new(n, d)
}

pub fn ratio<C: Scalar>(r: &Exponent) -> C {
    C::from_ratio(*r.numer(), *r.denom())
}

#[derive(Clone, PartialEq)]
pub struct WeightedFunction<C> {
    dim: usize,
    terms: FxHashMap<TermKey, C>,
}

impl<C: Scalar> fmt::Debug for WeightedFunction<C> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let parts: Vec<String> = self
            .sorted_terms()
            .into_iter()
            .map(|(k, c)| format!("({c:?})·e^({}r)·r^({})·{:?}", k.gamma, k.s, k.mono))
            .collect();
        write!(f, "{}", parts.join(" + "))
    }
}

impl<C: Scalar> WeightedFunction<C> {
    pub fn zero(dim: usize) -> Self {
        WeightedFunction { dim, terms: FxHashMap::default() }
    }

    pub fn constant(dim: usize, c: C) -> Self {
        Self::term(dim, c, Exponent::zero(), Exponent::zero(), Monomial::one(dim))
    }

    pub fn one(dim: usize) -> Self {
        Self::constant(dim, C::one())
    }

    pub fn term(dim: usize, c: C, gamma: Exponent, s: Exponent, mono: Monomial) -> Self {
        assert_eq!(mono.dim(), dim);
        let mut out = Self::zero(dim);
        out.add_term(TermKey { gamma, s, mono }, c);
        out
    }

    /// `c · r^s`.
    pub fn rpow(dim: usize, c: C, s: Exponent) -> Self {
        Self::term(dim, c, Exponent::zero(), s, Monomial::one(dim))
    }

    /// `Σ_k c_k x_k`.
    pub fn linear(coeffs: &[C]) -> Self {
        let dim = coeffs.len();
        let mut out = Self::zero(dim);
        for (k, c) in coeffs.iter().enumerate() {
            out.add_term(TermKey { gamma: Exponent::zero(), s: Exponent::zero(), mono: Monomial::var(dim, k) }, c.clone());
        }
        out
    }

    pub fn from_poly(dim: usize, p: &Poly<C>) -> Self {
        let mut out = Self::zero(dim);
        for (m, c) in p {
            out.add_term(TermKey { gamma: Exponent::zero(), s: Exponent::zero(), mono: m.clone() }, c.clone());
        }
        out
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// Terms in an order that depends only on how the function was built.
    pub fn terms(&self) -> impl Iterator<Item = (&TermKey, &C)> {
        self.terms.iter()
    }

    pub fn sorted_terms(&self) -> Vec<(&TermKey, &C)> {
        let mut out: Vec<_> = self.terms.iter().collect();
        out.sort_by(|a, b| a.0.cmp(b.0));
        out
    }

    pub fn max_degree(&self) -> usize {
        self.terms.keys().map(|k| k.mono.degree()).max().unwrap_or(0)
    }

    /// Adds `c` to the coefficient of `key`, dropping it if it cancels.
    pub fn add_term(&mut self, key: TermKey, c: C) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(key) {
            Entry::Vacant(v) => {
                v.insert(c);
            }
            Entry::Occupied(mut o) => {
                let sum = o.get().clone() + c;
                if sum.is_zero() {
                    o.remove();
                } else {
                    *o.get_mut() = sum;
                }
            }
        }
    }

    pub fn add_scaled(&mut self, c: &C, other: &Self) {
        assert_eq!(self.dim, other.dim);
        for (k, v) in &other.terms {
            self.add_term(k.clone(), c.clone() * v.clone());
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut out = self.clone();
        out.add_scaled(&C::one(), other);
        out
    }

    pub fn sub(&self, other: &Self) -> Self {
        let mut out = self.clone();
        out.add_scaled(&-C::one(), other);
        out
    }

    pub fn scale(&self, c: &C) -> Self {
        if c.is_zero() {
            return Self::zero(self.dim);
        }
        WeightedFunction {
            dim: self.dim,
            terms: self.terms.iter().map(|(k, v)| (k.clone(), v.clone() * c.clone())).collect(),
        }
    }

    pub fn neg(&self) -> Self {
        self.scale(&-C::one())
    }

    pub fn mul(&self, other: &Self) -> Self {
        assert_eq!(self.dim, other.dim);
        let mut out = Self::zero(self.dim);
        for (a, ca) in &self.terms {
            for (b, cb) in &other.terms {
                out.add_term(
                    TermKey { gamma: a.gamma + b.gamma, s: a.s + b.s, mono: a.mono.mul(&b.mono) },
                    ca.clone() * cb.clone(),
                );
            }
        }
        out
    }

    pub fn map_coeffs<D: Scalar>(&self, f: impl Fn(&C) -> D) -> WeightedFunction<D> {
        let mut out = WeightedFunction::zero(self.dim);
        for (k, v) in &self.terms {
            out.add_term(k.clone(), f(v));
        }
        out
    }

    pub fn to_c64(&self) -> WeightedFunction<C64> {
        self.map_coeffs(|c| c.to_c64())
    }

    /// Evaluates at `x`, where `r = ⟨e|x⟩` is supplied by the caller.
    pub fn eval(&self, x: &[f64], r: f64) -> Result<C64> {
        assert_eq!(x.len(), self.dim);
        let mut maxe = vec![0u8; self.dim];
        for k in self.terms.keys() {
            for (m, &e) in maxe.iter_mut().zip(k.mono.exponents()) {
                *m = (*m).max(e);
            }
        }
        let powers: Vec<Vec<f64>> = x
            .iter()
            .zip(&maxe)
            .map(|(&v, &e)| {
                let mut p = Vec::with_capacity(e as usize + 1);
                let mut acc = 1.0;
                for _ in 0..=e {
                    p.push(acc);
                    acc *= v;
                }
                p
            })
            .collect();
        let mut sum = C64::new(0.0, 0.0);
        for (k, c) in &self.terms {
            let s = *k.s.numer() as f64 / *k.s.denom() as f64;
            if r <= 0.0 && (s < 0.0 || !k.s.is_integer()) {
                return Err(JkaError::ApexEvaluation);
            }
            let g = *k.gamma.numer() as f64 / *k.gamma.denom() as f64;
            let rs = if k.s.is_integer() { r.powi(*k.s.numer() as i32) } else { r.powf(s) };
            let mut v = (g * r).exp() * rs;
            for (i, &e) in k.mono.exponents().iter().enumerate() {
                if e > 0 {
                    v *= powers[i][e as usize];
                }
            }
            sum += c.to_c64() * v;
        }
        Ok(sum)
    }

    /// Evaluates exactly at a rational point, leaving the transcendental
    /// factors `e^{γr} r^{s₀}` (`0 ≤ s₀ < 1`) symbolic.
    ///
    /// With `x = X/D`, `r = R/D` over a common denominator, each group is
    /// summed in integers after clearing `D` and negative powers of `R`.
    pub fn eval_exact(&self, x: &[Q], r: &Q) -> Result<ExactValue>
    where
        C: ComplexScalar,
    {
        assert_eq!(x.len(), self.dim);
        if !r.is_positive() {
            return Err(JkaError::ApexEvaluation);
        }
        let den = x.iter().fold(r.denom().clone(), |acc, v| acc.lcm(v.denom()));
        let clear = |v: &Q| v.numer() * (&den / v.denom());
        let nums: Vec<BigInt> = x.iter().map(clear).collect();
        let rn = clear(r);
        let mut xpow = PowerTable::new(nums);
        let mut rpow = PowerTable::new(vec![rn.clone(), den.clone()]);

        type Group<'a, C> = Vec<(i64, usize, &'a Monomial, &'a C)>;
        let mut groups: FxHashMap<(i64, i64, i64, i64), (Exponent, Exponent, Group<C>)> = FxHashMap::default();
        for (k, c) in self.sorted_terms() {
            let whole = k.s.floor();
            let frac = k.s - whole;
            let key = (*k.gamma.numer(), *k.gamma.denom(), *frac.numer(), *frac.denom());
            let slot = groups.entry(key).or_insert_with(|| (k.gamma, frac, Vec::new()));
            slot.2.push((whole.to_integer(), k.mono.degree(), &k.mono, c));
        }
        let mut parts = Vec::new();
        for (gamma, frac, terms) in groups.into_values() {
            let kmin = terms.iter().map(|t| t.0).min().expect("nonempty group");
            let top = terms.iter().map(|t| t.0 + t.1 as i64).max().expect("nonempty group");
            let (mut re, mut im) = (FractionSum::default(), FractionSum::default());
            for (k, deg, mono, c) in terms {
                let mut v = rpow.get(0, (k - kmin) as usize).clone();
                v *= rpow.get(1, (top - k - deg as i64) as usize);
                for (i, &e) in mono.exponents().iter().enumerate() {
                    if e > 0 {
                        v *= xpow.get(i, e as usize);
                    }
                }
                let c = c.to_cq().expect("exact coefficients");
                re.add(&c.re, &v);
                im.add(&c.im, &v);
            }
            let scale = Q::from_integer(rpow.get(1, top.max(0) as usize).clone())
                * Q::from_integer(rpow.get(0, (-kmin).max(0) as usize).clone())
                / Q::from_integer(rpow.get(1, (-top).max(0) as usize).clone())
                / Q::from_integer(rpow.get(0, kmin.max(0) as usize).clone());
            let value = CQ::new(re.value() / &scale, im.value() / &scale);
            if !value.is_zero() {
                parts.push((gamma, frac, value));
            }
        }
        parts.sort_by(|a, b| a.0.cmp(&b.0).then(a.1.cmp(&b.1)));
        Ok(ExactValue { r: r.clone(), parts })
    }

    /// `f(x/n)` for a rational `n > 0`, up to the overall factor `n^{-s₀}`,
    /// where `s₀` is the `r`-exponent of the least term: every term must have
    /// `s − s₀` integral.
    pub fn rescaled_argument(&self, n: Exponent) -> Result<Self> {
        let Some(s0) = self.terms.keys().min().map(|k| k.s) else {
            return Ok(self.clone());
        };
        let mut out = Self::zero(self.dim);
        for (k, c) in &self.terms {
            let shift = k.s - s0;
            if !shift.is_integer() {
                return Err(JkaError::InvalidInput("r-exponents differ by a non-integer".into()));
            }
            let power = shift.to_integer() + k.mono.degree() as i64;
            let factor = n.recip().pow(power as i32);
            out.add_term(
                TermKey { gamma: k.gamma / n, s: k.s, mono: k.mono.clone() },
                c.clone() * ratio::<C>(&factor),
            );
        }
        Ok(out)
    }
}

/// Lazily extended powers of a few big integers.
struct PowerTable {
    rows: Vec<Vec<BigInt>>,
}

impl PowerTable {
    fn new(bases: Vec<BigInt>) -> Self {
        PowerTable { rows: bases.into_iter().map(|b| vec![BigInt::one(), b]).collect() }
    }

    fn get(&mut self, i: usize, e: usize) -> &BigInt {
        let row = &mut self.rows[i];
        while row.len() <= e {
            let next = &row[row.len() - 1] * &row[1];
            row.push(next);
        }
        &row[e]
    }
}

/// `Σ (a/b)·v` kept as one fraction over a growing common denominator.
struct FractionSum {
    num: BigInt,
    den: BigInt,
}

impl Default for FractionSum {
    fn default() -> Self {
        FractionSum { num: BigInt::zero(), den: BigInt::one() }
    }
}

impl FractionSum {
    fn add(&mut self, c: &Q, v: &BigInt) {
        if c.is_zero() {
            return;
        }
        let b = c.denom();
        if !(&self.den % b).is_zero() {
            let m = b / self.den.gcd(b);
            self.num *= &m;
            self.den *= m;
        }
        self.num += c.numer() * v * (&self.den / b);
    }

    fn value(self) -> Q {
        Q::new(self.num, self.den)
    }
}

/// `Σ c · e^{γr} r^{s₀}` with exact complex rational `c`, distinct `(γ, s₀)`.
#[derive(Clone, Debug, PartialEq)]
pub struct ExactValue {
    r: Q,
    parts: Vec<(Exponent, Exponent, CQ)>,
}

impl ExactValue {
    /// Exact: `e^{γr} r^{s₀}` for distinct `(γ, s₀)` are independent along rays.
    pub fn is_zero(&self) -> bool {
        self.parts.is_empty()
    }

    pub fn sub(&self, other: &ExactValue) -> ExactValue {
        let mut parts = self.parts.clone();
        for (g, s, c) in &other.parts {
            match parts.iter_mut().find(|p| p.0 == *g && p.1 == *s) {
                Some(p) => p.2 = &p.2 - c,
                None => parts.push((*g, *s, -c.clone())),
            }
        }
        parts.retain(|p| !p.2.is_zero());
        ExactValue { r: self.r.clone(), parts }
    }

    pub fn to_c64(&self) -> C64 {
        let r = crate::scalar::q_to_f64(&self.r);
        self.parts
            .iter()
            .map(|(g, s, c)| {
                let w = (ratio::<f64>(g) * r).exp() * r.powf(ratio::<f64>(s));
                c.to_c64() * w
            })
            .sum()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::CQ;

    fn cq(n: i64) -> CQ {
        CQ::from_i64(n)
    }

    #[test]
    fn eval_of_exponential() {
        let f = WeightedFunction::<CQ>::term(2, cq(1), Exponent::from_integer(-1), Exponent::zero(), Monomial::one(2));
        let v = f.eval(&[1.0, 0.0], 1.0).unwrap();
        assert!((v.re - (-1f64).exp()).abs() < 1e-15);
    }

    #[test]
    fn eval_of_half_power() {
        let f = WeightedFunction::<CQ>::term(3, cq(1), Exponent::zero(), Exponent::new(1, 2), Monomial::var(3, 0));
        let v = f.eval(&[2.0, 0.0, 0.0], 2.0).unwrap();
        assert!((v.re - 2f64.powf(1.5)).abs() < 1e-14);
    }

    #[test]
    fn apex_is_rejected() {
        let f = WeightedFunction::<CQ>::rpow(2, cq(1), Exponent::from_integer(-1));
        assert!(f.eval(&[0.0, 0.0], 0.0).is_err());
    }

    #[test]
    fn cancellation_drops_terms() {
        let f = WeightedFunction::<CQ>::linear(&[cq(1), cq(2)]);
        assert!(f.sub(&f).is_zero());
        assert_eq!(f.mul(&f).len(), 3);
    }

    #[test]
    fn exact_eval_groups_transcendentals() {
        use crate::scalar::q;
        let half = Exponent::new(1, 2);
        // r^{3/2} x0 − r^{1/2} x0 r vanishes identically
        let mut f = WeightedFunction::<CQ>::term(2, cq(1), Exponent::zero(), Exponent::new(3, 2), Monomial::var(2, 0));
        f.add_term(TermKey { gamma: Exponent::zero(), s: half, mono: Monomial::var(2, 0).mul(&Monomial::var(2, 0)) }, cq(-1));
        let x = [q(3, 2), q(1, 3)];
        let v = f.eval_exact(&x, &q(3, 2)).unwrap();
        assert!(v.is_zero());
        let g = WeightedFunction::<CQ>::term(2, cq(2), Exponent::from_integer(-1), half, Monomial::var(2, 1));
        let v = g.eval_exact(&x, &q(3, 2)).unwrap().to_c64();
        let want = g.eval(&[1.5, 1.0 / 3.0], 1.5).unwrap();
        assert!((v - want).norm() < 1e-15);
    }

    #[test]
    fn monomial_counts() {
        assert_eq!(Monomial::of_degree(4, 2).len(), 10);
        assert_eq!(Monomial::up_to_degree(3, 3).len(), 20);
    }
}
