use std::sync::Arc;

use jka::division::{DivisionKind, DivisionRingElement};
use jka::random::{rational_vec, rng};
use jka::scalar::{qi, Q};
use jka::{Algebra, AlgebraSpec, Family, Mat};
use num_traits::{One, Zero};
use proptest::prelude::*;

const ALGEBRAS: [(Family, usize); 9] = [
    (Family::Gamma, 2),
    (Family::Gamma, 3),
    (Family::Gamma, 5),
    (Family::HermR, 2),
    (Family::HermR, 3),
    (Family::HermC, 2),
    (Family::HermC, 3),
    (Family::HermH, 3),
    (Family::HermO, 3),
];

fn algebra(i: usize) -> Arc<Algebra> {
    let (f, n) = ALGEBRAS[i % ALGEBRAS.len()];
    Algebra::shared(AlgebraSpec::new(f, n)).unwrap()
}

fn sub(a: &[Q], b: &[Q]) -> Vec<Q> {
    a.iter().zip(b).map(|(x, y)| x - y).collect()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn product_is_commutative_and_jordan(idx in 0usize..ALGEBRAS.len(), seed in any::<u64>()) {
        let alg = algebra(idx);
        let mut g = rng(seed);
        let u = rational_vec(&mut g, alg.dim());
        let v = rational_vec(&mut g, alg.dim());
        prop_assert_eq!(alg.mul(&u, &v), alg.mul(&v, &u));
        let lu = alg.lmul(&u);
        let lu2 = alg.lmul(&alg.square(&u));
        prop_assert!(lu.commutator(&lu2).is_zero());
    }

    #[test]
    fn powers_associate(idx in 0usize..ALGEBRAS.len(), seed in any::<u64>()) {
        let alg = algebra(idx);
        let u = rational_vec(&mut rng(seed), alg.dim());
        for total in 2..=6 {
            for r in 1..total {
                let lhs = alg.mul(&alg.power(&u, r), &alg.power(&u, total - r));
                prop_assert_eq!(&lhs, &alg.power(&u, total), "u^{} u^{}", r, total - r);
            }
        }
    }

    #[test]
    fn commutators_of_multiplications_are_derivations(idx in 0usize..ALGEBRAS.len(), seed in any::<u64>()) {
        let alg = algebra(idx);
        let mut g = rng(seed);
        let u = rational_vec(&mut g, alg.dim());
        let v = rational_vec(&mut g, alg.dim());
        let z = rational_vec(&mut g, alg.dim());
        let lhs = alg.lmul(&u).commutator(&alg.lmul(&v)).commutator(&alg.lmul(&z));
        let w = sub(&alg.mul(&u, &alg.mul(&v, &z)), &alg.mul(&v, &alg.mul(&u, &z)));
        prop_assert_eq!(lhs, alg.lmul(&w));
    }

    #[test]
    fn trace_form_is_associative(idx in 0usize..ALGEBRAS.len(), seed in any::<u64>()) {
        let alg = algebra(idx);
        let mut g = rng(seed);
        let u = rational_vec(&mut g, alg.dim());
        let v = rational_vec(&mut g, alg.dim());
        let z = rational_vec(&mut g, alg.dim());
        prop_assert_eq!(alg.inner(&alg.mul(&u, &v), &z), alg.inner(&v, &alg.mul(&u, &z)));
        prop_assert!(alg.inner(&u, &u) >= Q::zero());
    }

    #[test]
    fn octonion_norm_is_multiplicative(seed in any::<u64>()) {
        let mut g = rng(seed);
        let a = DivisionRingElement::new(rational_vec(&mut g, 8));
        let b = DivisionRingElement::new(rational_vec(&mut g, 8));
        prop_assert_eq!(a.kind(), DivisionKind::Octonion);
        prop_assert_eq!((&a * &b).norm(), a.norm() * b.norm());
        prop_assert_eq!((&a * &b).conj(), &b.conj() * &a.conj());
    }

    #[test]
    fn low_rank_isomorphisms_preserve_products(which in 0usize..2, seed in any::<u64>()) {
        // Γ(2) ≅ Herm(2,ℝ) and Γ(3) ≅ Herm(2,ℂ) via (a; b, c) ↦ [[a+b, c], [c̄, a−b]]
        let (gamma, herm) = if which == 0 {
            (algebra(0), Algebra::shared(AlgebraSpec::new(Family::HermR, 2)).unwrap())
        } else {
            (algebra(1), algebra(5))
        };
        let kind = if which == 0 { DivisionKind::Real } else { DivisionKind::Complex };
        let phi = |x: &[Q]| -> Vec<Q> {
            let z = DivisionRingElement::new(x[2..].to_vec());
            let m = vec![
                vec![DivisionRingElement::real(kind, &x[0] + &x[1]), z.clone()],
                vec![z.conj(), DivisionRingElement::real(kind, &x[0] - &x[1])],
            ];
            herm.herm_coords(&m)
        };
        let mut g = rng(seed);
        let u = rational_vec(&mut g, gamma.dim());
        let v = rational_vec(&mut g, gamma.dim());
        prop_assert_eq!(phi(&gamma.mul(&u, &v)), herm.mul(&phi(&u), &phi(&v)));
        prop_assert_eq!(gamma.trace(&u), herm.trace(&phi(&u)));
        prop_assert_eq!(power_sums(&gamma.lmul(&u)), power_sums(&herm.lmul(&phi(&u))));
    }
}

/// `tr L^k` for `k = 1..=dim`; equal sums mean equal eigenvalue multisets.
fn power_sums(l: &Mat<Q>) -> Vec<Q> {
    let mut p = l.clone();
    let mut out = Vec::new();
    for _ in 0..l.rows() {
        out.push(p.trace());
        p = p.matmul(l);
    }
    out
}

#[test]
fn rank_degree_and_dimension_agree_for_isomorphic_pairs() {
    for (a, b) in [((Family::Gamma, 2), (Family::HermR, 2)), ((Family::Gamma, 3), (Family::HermC, 2))] {
        let a = Algebra::new(AlgebraSpec::new(a.0, a.1)).unwrap();
        let b = Algebra::new(AlgebraSpec::new(b.0, b.1)).unwrap();
        assert_eq!((a.rank(), a.degree(), a.dim()), (b.rank(), b.degree(), b.dim()));
    }
}

#[test]
fn dimension_matches_rank_and_degree() {
    for i in 0..ALGEBRAS.len() {
        let alg = algebra(i);
        let (rho, delta) = (alg.rank(), alg.degree());
        assert_eq!(alg.dim(), rho + delta * rho * (rho - 1) / 2, "{}", alg.spec());
        assert_eq!(alg.trace(&alg.unit::<Q>()), qi(rho as i64));
        assert_eq!(alg.inner(&alg.unit::<Q>(), &alg.unit::<Q>()), Q::one());
    }
}
