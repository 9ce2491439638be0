//! Scalar rings used throughout the crate.
//!
//! Exact work happens over [`Q`] (arbitrary precision rationals) and its
//! complexification [`CQ`]; numerical work over `f64` and [`C64`]. Ranks of
//! large spanning sets are computed over the prime field [`ModP`].

use std::fmt::Debug;
use std::ops::{Add, Div, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_complex::Complex;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

pub type Q = BigRational;
pub type CQ = Complex<Q>;
pub type C64 = Complex<f64>;

/// Builds the rational `num/den`.
pub fn q(num: i64, den: i64) -> Q {
    Q::new(BigInt::from(num), BigInt::from(den))
}

pub fn qi(num: i64) -> Q {
    Q::from_integer(BigInt::from(num))
}

pub fn q_to_f64(v: &Q) -> f64 {
    match (v.numer().to_f64(), v.denom().to_f64()) {
        (Some(n), Some(d)) if n.is_finite() && d.is_finite() => n / d,
        _ => {
            // Scale both down so the quotient survives the conversion.
            let shift = v.numer().bits().max(v.denom().bits()).saturating_sub(1000);
            let n = (v.numer() >> shift).to_f64().unwrap_or(0.0);
            let d = (v.denom() >> shift).to_f64().unwrap_or(1.0);
            n / d
        }
    }
}

/// A commutative ring with a canonical embedding of the rationals.
pub trait Scalar:
    Clone
    + PartialEq
    + Debug
    + Send
    + Sync
    + 'static
    + Zero
    + One
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Neg<Output = Self>
{
    fn from_q(v: &Q) -> Self;

    fn from_i64(v: i64) -> Self {
        Self::from_q(&qi(v))
    }

    fn from_ratio(num: i64, den: i64) -> Self {
        Self::from_q(&q(num, den))
    }

    /// Size used for pivot selection and for discarding round-off.
    fn magnitude(&self) -> f64;

    /// Whether `self` is exactly representable, i.e. comparisons with zero
    /// are decisions rather than tolerances.
    fn is_exact() -> bool;

    fn to_c64(&self) -> C64;
}

pub trait Field: Scalar + Div<Output = Self> {
    fn inv(&self) -> Self {
        Self::one() / self.clone()
    }
}

impl Scalar for Q {
    fn from_q(v: &Q) -> Self {
        v.clone()
    }
    fn magnitude(&self) -> f64 {
        q_to_f64(&self.abs())
    }
    fn is_exact() -> bool {
        true
    }
    fn to_c64(&self) -> C64 {
        C64::new(q_to_f64(self), 0.0)
    }
}
impl Field for Q {}

impl Scalar for f64 {
    fn from_q(v: &Q) -> Self {
        q_to_f64(v)
    }
    fn from_i64(v: i64) -> Self {
        v as f64
    }
    fn from_ratio(num: i64, den: i64) -> Self {
        num as f64 / den as f64
    }
    fn magnitude(&self) -> f64 {
        self.abs()
    }
    fn is_exact() -> bool {
        false
    }
    fn to_c64(&self) -> C64 {
        C64::new(*self, 0.0)
    }
}
impl Field for f64 {}

impl Scalar for CQ {
    fn from_q(v: &Q) -> Self {
        Complex::new(v.clone(), Q::zero())
    }
    fn magnitude(&self) -> f64 {
        q_to_f64(&self.re.abs()) + q_to_f64(&self.im.abs())
    }
    fn is_exact() -> bool {
        true
    }
    fn to_c64(&self) -> C64 {
        C64::new(q_to_f64(&self.re), q_to_f64(&self.im))
    }
}
impl Field for CQ {}

impl Scalar for C64 {
    fn from_q(v: &Q) -> Self {
        C64::new(q_to_f64(v), 0.0)
    }
    fn from_i64(v: i64) -> Self {
        C64::new(v as f64, 0.0)
    }
    fn from_ratio(num: i64, den: i64) -> Self {
        C64::new(num as f64 / den as f64, 0.0)
    }
    fn magnitude(&self) -> f64 {
        self.norm()
    }
    fn is_exact() -> bool {
        false
    }
    fn to_c64(&self) -> C64 {
        *self
    }
}
impl Field for C64 {}

/// Complex scalars: the hidden-action operators carry factors of `i`.
pub trait ComplexScalar: Field {
    fn imag_unit() -> Self;
    fn from_cq(v: &CQ) -> Self;
    /// The exact value, for exact scalar types.
    fn to_cq(&self) -> Option<CQ>;
}

impl ComplexScalar for CQ {
    fn imag_unit() -> Self {
        Complex::new(Q::zero(), Q::one())
    }
    fn from_cq(v: &CQ) -> Self {
        v.clone()
    }
    fn to_cq(&self) -> Option<CQ> {
        Some(self.clone())
    }
}

impl ComplexScalar for C64 {
    fn imag_unit() -> Self {
        C64::new(0.0, 1.0)
    }
    fn from_cq(v: &CQ) -> Self {
        v.to_c64()
    }
    fn to_cq(&self) -> Option<CQ> {
        None
    }
}

/// The Mersenne prime 2^61 - 1.
pub const MODULUS: u64 = (1 << 61) - 1;

/// Element of the prime field of order [`MODULUS`].
#[derive(Clone, Copy, PartialEq, Eq, Debug, Hash)]
pub struct ModP(pub u64);

impl ModP {
    fn reduce(v: u128) -> u64 {
        let m = MODULUS as u128;
        let folded = (v & m) + (v >> 61);
        let folded = (folded & m) + (folded >> 61);
        (folded % m) as u64
    }

    pub fn pow(self, mut e: u64) -> ModP {
        let mut base = self;
        let mut acc = ModP(1);
        while e > 0 {
            if e & 1 == 1 {
                acc = acc * base;
            }
            base = base * base;
            e >>= 1;
        }
        acc
    }

    fn from_bigint(v: &BigInt) -> ModP {
        let m = BigInt::from(MODULUS);
        let r = v.mod_floor(&m);
        ModP(r.to_u64().expect("residue fits in u64"))
    }
}

impl Zero for ModP {
    fn zero() -> Self {
        ModP(0)
    }
    fn is_zero(&self) -> bool {
        self.0 == 0
    }
}

impl One for ModP {
    fn one() -> Self {
        ModP(1)
    }
}

impl Add for ModP {
    type Output = ModP;
    fn add(self, rhs: ModP) -> ModP {
        let s = self.0 + rhs.0;
        ModP(if s >= MODULUS { s - MODULUS } else { s })
    }
}

impl Sub for ModP {
    type Output = ModP;
    fn sub(self, rhs: ModP) -> ModP {
        ModP(if self.0 >= rhs.0 { self.0 - rhs.0 } else { self.0 + MODULUS - rhs.0 })
    }
}

impl Mul for ModP {
    type Output = ModP;
    fn mul(self, rhs: ModP) -> ModP {
        ModP(ModP::reduce(self.0 as u128 * rhs.0 as u128))
    }
}

impl Neg for ModP {
    type Output = ModP;
    fn neg(self) -> ModP {
        ModP(if self.0 == 0 { 0 } else { MODULUS - self.0 })
    }
}

impl Div for ModP {
    type Output = ModP;
    #[allow(clippy::suspicious_arithmetic_impl)]
    fn div(self, rhs: ModP) -> ModP {
        assert!(rhs.0 != 0, "division by zero in GF(p)");
        self * rhs.pow(MODULUS - 2)
    }
}

impl Scalar for ModP {
    fn from_q(v: &Q) -> Self {
        ModP::from_bigint(v.numer()) / ModP::from_bigint(v.denom())
    }
    fn from_i64(v: i64) -> Self {
        let r = v.rem_euclid(MODULUS as i64) as u64;
        ModP(r)
    }
    fn from_ratio(num: i64, den: i64) -> Self {
        ModP::from_i64(num) / ModP::from_i64(den)
    }
    fn magnitude(&self) -> f64 {
        if self.0 == 0 {
            0.0
        } else {
            1.0
        }
    }
    fn is_exact() -> bool {
        true
    }
    fn to_c64(&self) -> C64 {
        panic!("GF(p) elements have no complex embedding")
    }
}
impl Field for ModP {}

/// An exact rational that stays on machine words while it can.
///
/// Values that fit `i64 / i64` are always stored as `Small` in lowest terms
/// with a positive denominator, so equality is structural.
#[derive(Clone)]
pub enum Rat {
    Small(i64, i64),
    Big(Box<Q>),
}

pub type CRat = Complex<Rat>;

impl Rat {
    fn from_i128(n: i128, d: i128) -> Rat {
        debug_assert!(d != 0);
        let g = n.gcd(&d);
        let (mut n, mut d) = (n / g, d / g);
        if d < 0 {
            n = -n;
            d = -d;
        }
        match (i64::try_from(n), i64::try_from(d)) {
            (Ok(n), Ok(d)) => Rat::Small(n, d),
            _ => Rat::Big(Box::new(Q::new(BigInt::from(n), BigInt::from(d)))),
        }
    }

    fn from_big(v: Q) -> Rat {
        match (v.numer().to_i64(), v.denom().to_i64()) {
            (Some(n), Some(d)) => Rat::Small(n, d),
            _ => Rat::Big(Box::new(v)),
        }
    }

    pub fn to_q(&self) -> Q {
        match self {
            Rat::Small(n, d) => q(*n, *d),
            Rat::Big(v) => (**v).clone(),
        }
    }

    pub fn to_f64(&self) -> f64 {
        match self {
            Rat::Small(n, d) => *n as f64 / *d as f64,
            Rat::Big(v) => q_to_f64(v),
        }
    }
}

impl Debug for Rat {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Rat::Small(n, 1) => write!(f, "{n}"),
            Rat::Small(n, d) => write!(f, "{n}/{d}"),
            Rat::Big(v) => write!(f, "{v}"),
        }
    }
}

impl PartialEq for Rat {
    fn eq(&self, other: &Rat) -> bool {
        match (self, other) {
            (Rat::Small(a, b), Rat::Small(c, d)) => a == c && b == d,
            (Rat::Big(a), Rat::Big(b)) => a == b,
            _ => false,
        }
    }
}

impl Zero for Rat {
    fn zero() -> Rat {
        Rat::Small(0, 1)
    }
    fn is_zero(&self) -> bool {
        matches!(self, Rat::Small(0, _))
    }
}

impl One for Rat {
    fn one() -> Rat {
        Rat::Small(1, 1)
    }
}

impl Add for Rat {
    type Output = Rat;
    fn add(self, rhs: Rat) -> Rat {
        match (&self, &rhs) {
            (Rat::Small(a, b), Rat::Small(c, d)) => {
                if *b == *d {
                    return Rat::from_i128(*a as i128 + *c as i128, *b as i128);
                }
                let (b, d) = (*b as i128, *d as i128);
                Rat::from_i128(*a as i128 * d + *c as i128 * b, b * d)
            }
            _ => Rat::from_big(self.to_q() + rhs.to_q()),
        }
    }
}

impl Neg for Rat {
    type Output = Rat;
    fn neg(self) -> Rat {
        match self {
            Rat::Small(n, d) if n != i64::MIN => Rat::Small(-n, d),
            other => Rat::from_big(-other.to_q()),
        }
    }
}

impl Sub for Rat {
    type Output = Rat;
    fn sub(self, rhs: Rat) -> Rat {
        self + (-rhs)
    }
}

impl Mul for Rat {
    type Output = Rat;
    fn mul(self, rhs: Rat) -> Rat {
        match (&self, &rhs) {
            (Rat::Small(a, b), Rat::Small(c, d)) => Rat::from_i128(*a as i128 * *c as i128, *b as i128 * *d as i128),
            _ => Rat::from_big(self.to_q() * rhs.to_q()),
        }
    }
}

impl Div for Rat {
    type Output = Rat;
    fn div(self, rhs: Rat) -> Rat {
        assert!(!rhs.is_zero(), "division by zero rational");
        match (&self, &rhs) {
            (Rat::Small(a, b), Rat::Small(c, d)) => Rat::from_i128(*a as i128 * *d as i128, *b as i128 * *c as i128),
            _ => Rat::from_big(self.to_q() / rhs.to_q()),
        }
    }
}

impl std::ops::Rem for Rat {
    type Output = Rat;
    fn rem(self, rhs: Rat) -> Rat {
        Rat::from_big(self.to_q() % rhs.to_q())
    }
}

impl num_traits::Num for Rat {
    type FromStrRadixErr = num_rational::ParseRatioError;
    fn from_str_radix(s: &str, radix: u32) -> std::result::Result<Rat, Self::FromStrRadixErr> {
        Q::from_str_radix(s, radix).map(Rat::from_big)
    }
}

impl Scalar for Rat {
    fn from_q(v: &Q) -> Self {
        Rat::from_big(v.clone())
    }
    fn from_i64(v: i64) -> Self {
        Rat::Small(v, 1)
    }
    fn from_ratio(num: i64, den: i64) -> Self {
        Rat::from_i128(num as i128, den as i128)
    }
    fn magnitude(&self) -> f64 {
        self.to_f64().abs()
    }
    fn is_exact() -> bool {
        true
    }
    fn to_c64(&self) -> C64 {
        C64::new(self.to_f64(), 0.0)
    }
}
impl Field for Rat {}

impl Scalar for CRat {
    fn from_q(v: &Q) -> Self {
        Complex::new(Rat::from_big(v.clone()), Rat::zero())
    }
    fn from_i64(v: i64) -> Self {
        Complex::new(Rat::Small(v, 1), Rat::zero())
    }
    fn from_ratio(num: i64, den: i64) -> Self {
        Complex::new(Rat::from_i128(num as i128, den as i128), Rat::zero())
    }
    fn magnitude(&self) -> f64 {
        self.re.to_f64().abs() + self.im.to_f64().abs()
    }
    fn is_exact() -> bool {
        true
    }
    fn to_c64(&self) -> C64 {
        C64::new(self.re.to_f64(), self.im.to_f64())
    }
}
impl Field for CRat {}

impl ComplexScalar for CRat {
    fn imag_unit() -> Self {
        Complex::new(Rat::zero(), Rat::one())
    }
    fn from_cq(v: &CQ) -> Self {
        Complex::new(Rat::from_big(v.re.clone()), Rat::from_big(v.im.clone()))
    }
    fn to_cq(&self) -> Option<CQ> {
        Some(Complex::new(self.re.to_q(), self.im.to_q()))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn modp_inverse() {
        let a = ModP::from_q(&q(3, 7));
        assert_eq!(a * ModP::from_i64(7), ModP::from_i64(3));
        assert_eq!(ModP::from_i64(-1) + ModP::one(), ModP::zero());
    }

    #[test]
    fn rat_matches_bigrational() {
        let vals = [q(3, 7), q(-5, 12), q(i64::MAX, 3), q(1, i64::MAX), q(-7, 2)];
        for a in &vals {
            for b in &vals {
                let (x, y) = (Rat::from_big(a.clone()), Rat::from_big(b.clone()));
                assert_eq!((x.clone() + y.clone()).to_q(), a + b);
                assert_eq!((x.clone() - y.clone()).to_q(), a - b);
                assert_eq!((x.clone() * y.clone()).to_q(), a * b);
                assert_eq!((x / y).to_q(), a / b);
            }
        }
        let big = Rat::from_big(q(i64::MAX, 1)) * Rat::from_big(q(i64::MAX, 1));
        assert!(matches!(big, Rat::Big(_)));
        assert_eq!(big / Rat::from_big(q(i64::MAX, 1)), Rat::Small(i64::MAX, 1));
    }

    #[test]
    fn huge_rational_converts() {
        let big = Q::new(BigInt::from(10).pow(400) * 3, BigInt::from(10).pow(400));
        assert!((q_to_f64(&big) - 3.0).abs() < 1e-12);
    }
}
