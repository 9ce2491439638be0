//! The four normed division algebras, built by Cayley–Dickson doubling.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use serde::{Deserialize, Serialize};

use crate::scalar::Scalar;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum DivisionKind {
    Real,
    Complex,
    Quaternion,
    Octonion,
}

impl DivisionKind {
    pub fn dim(self) -> usize {
        match self {
            DivisionKind::Real => 1,
            DivisionKind::Complex => 2,
            DivisionKind::Quaternion => 4,
            DivisionKind::Octonion => 8,
        }
    }

    pub fn from_dim(d: usize) -> Option<Self> {
        match d {
            1 => Some(DivisionKind::Real),
            2 => Some(DivisionKind::Complex),
            4 => Some(DivisionKind::Quaternion),
            8 => Some(DivisionKind::Octonion),
            _ => None,
        }
    }
}

/// An element of R, C, H or O in the basis 1, e_1, …, e_{d-1}.
#[derive(Clone, PartialEq)]
pub struct DivisionRingElement<T> {
    coords: Vec<T>,
}

impl<T: Scalar> fmt::Debug for DivisionRingElement<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}{:?}", self.kind(), self.coords)
    }
}

// (a, b)(c, d) = (ac - d*b, da + bc*)
fn cd_mul<T: Scalar>(x: &[T], y: &[T]) -> Vec<T> {
    let n = x.len();
    if n == 1 {
        return vec![x[0].clone() * y[0].clone()];
    }
    let h = n / 2;
    let (a, b) = x.split_at(h);
    let (c, d) = y.split_at(h);
    let ac = cd_mul(a, c);
    let dcb = cd_mul(&cd_conj(d), b);
    let da = cd_mul(d, a);
    let bcc = cd_mul(b, &cd_conj(c));
    let mut out: Vec<T> = ac.into_iter().zip(dcb).map(|(p, q)| p - q).collect();
    out.extend(da.into_iter().zip(bcc).map(|(p, q)| p + q));
    out
}

fn cd_conj<T: Scalar>(x: &[T]) -> Vec<T> {
    let mut out = Vec::with_capacity(x.len());
    out.push(x[0].clone());
    out.extend(x[1..].iter().map(|v| -v.clone()));
    out
}

impl<T: Scalar> DivisionRingElement<T> {
    pub fn new(coords: Vec<T>) -> Self {
        assert!(DivisionKind::from_dim(coords.len()).is_some(), "length must be 1, 2, 4 or 8");
        DivisionRingElement { coords }
    }

    pub fn zero(kind: DivisionKind) -> Self {
        DivisionRingElement { coords: vec![T::zero(); kind.dim()] }
    }

    pub fn one(kind: DivisionKind) -> Self {
        Self::unit(kind, 0)
    }

    /// The `i`-th imaginary unit (`i = 0` gives 1).
    pub fn unit(kind: DivisionKind, i: usize) -> Self {
        let mut coords = vec![T::zero(); kind.dim()];
        coords[i] = T::one();
        DivisionRingElement { coords }
    }

    pub fn real(kind: DivisionKind, v: T) -> Self {
        let mut out = Self::zero(kind);
        out.coords[0] = v;
        out
    }

    pub fn kind(&self) -> DivisionKind {
        DivisionKind::from_dim(self.coords.len()).expect("valid length")
    }

    pub fn coords(&self) -> &[T] {
        &self.coords
    }

    pub fn re(&self) -> &T {
        &self.coords[0]
    }

    pub fn conj(&self) -> Self {
        DivisionRingElement { coords: cd_conj(&self.coords) }
    }

    /// Squared norm `x x*`.
    pub fn norm(&self) -> T {
        self.coords.iter().fold(T::zero(), |acc, c| acc + c.clone() * c.clone())
    }

    pub fn is_zero(&self) -> bool {
        self.coords.iter().all(|c| c.is_zero())
    }

    pub fn scale(&self, s: &T) -> Self {
        DivisionRingElement { coords: self.coords.iter().map(|c| c.clone() * s.clone()).collect() }
    }
}

impl<T: Scalar> Add for &DivisionRingElement<T> {
    type Output = DivisionRingElement<T>;
    fn add(self, rhs: Self) -> DivisionRingElement<T> {
        assert_eq!(self.coords.len(), rhs.coords.len());
        DivisionRingElement {
            coords: self.coords.iter().zip(&rhs.coords).map(|(a, b)| a.clone() + b.clone()).collect(),
        }
    }
}

impl<T: Scalar> Sub for &DivisionRingElement<T> {
    type Output = DivisionRingElement<T>;
    fn sub(self, rhs: Self) -> DivisionRingElement<T> {
        assert_eq!(self.coords.len(), rhs.coords.len());
        DivisionRingElement {
            coords: self.coords.iter().zip(&rhs.coords).map(|(a, b)| a.clone() - b.clone()).collect(),
        }
    }
}

impl<T: Scalar> Mul for &DivisionRingElement<T> {
    type Output = DivisionRingElement<T>;
    fn mul(self, rhs: Self) -> DivisionRingElement<T> {
        assert_eq!(self.coords.len(), rhs.coords.len());
        DivisionRingElement { coords: cd_mul(&self.coords, &rhs.coords) }
    }
}

impl<T: Scalar> Neg for &DivisionRingElement<T> {
    type Output = DivisionRingElement<T>;
    fn neg(self) -> DivisionRingElement<T> {
        DivisionRingElement { coords: self.coords.iter().map(|c| -c.clone()).collect() }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::{qi, Q};

    fn oct(v: [i64; 8]) -> DivisionRingElement<Q> {
        DivisionRingElement::new(v.iter().map(|&x| qi(x)).collect())
    }

    #[test]
    fn quaternion_units() {
        let i = DivisionRingElement::<Q>::unit(DivisionKind::Quaternion, 1);
        let j = DivisionRingElement::<Q>::unit(DivisionKind::Quaternion, 2);
        let minus_one = DivisionRingElement::real(DivisionKind::Quaternion, qi(-1));
        assert_eq!(&i * &i, minus_one);
        assert_eq!(&j * &j, minus_one);
        assert_eq!(&i * &j, -&(&j * &i));
    }

    #[test]
    fn octonions_are_not_associative() {
        let e = |k| DivisionRingElement::<Q>::unit(DivisionKind::Octonion, k);
        let found = (1..8).any(|a| {
            (1..8).any(|b| (1..8).any(|c| &(&e(a) * &e(b)) * &e(c) != &e(a) * &(&e(b) * &e(c))))
        });
        assert!(found);
    }

    #[test]
    fn conjugate_of_product_reverses() {
        let x = oct([1, 2, -1, 0, 3, 1, -2, 5]);
        let y = oct([0, -1, 4, 2, 1, 1, 0, -3]);
        assert_eq!((&x * &y).conj(), &y.conj() * &x.conj());
        assert_eq!(&x * &x.conj(), DivisionRingElement::real(DivisionKind::Octonion, x.norm()));
    }
}
