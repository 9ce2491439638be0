use std::sync::Arc;

use jka::cone::{
    cone_samples, cone_to_product, isometry_defect, kepler_metric, radial_speed_squared, rational_cone_samples, tangent_project,
    to_slice,
};
use jka::hidden::function::Exponent;
use jka::hidden::suites::default_test_set;
use jka::hidden::{commutator, function_max, function_residual, ConeOperator, HiddenAction, HiddenConstants, Monomial, Samples, WeightedFunction};
use jka::random::{gaussian_vec, rational_vec, rng};
use jka::scalar::{qi, CRat, Scalar, Q};
use jka::{Algebra, AlgebraSpec, Family, Mat};
use num_traits::{Signed, Zero};
use proptest::prelude::*;

const ALGEBRAS: [(Family, usize); 7] = [
    (Family::Gamma, 2),
    (Family::Gamma, 3),
    (Family::Gamma, 5),
    (Family::HermR, 3),
    (Family::HermC, 3),
    (Family::HermH, 3),
    (Family::HermO, 3),
];

fn algebra(i: usize) -> Arc<Algebra> {
    let (f, n) = ALGEBRAS[i];
    Algebra::shared(AlgebraSpec::new(f, n)).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn radial_rays_have_unit_speed(idx in 0usize..ALGEBRAS.len(), seed in any::<u64>()) {
        let alg = algebra(idx);
        let x = &cone_samples(&alg, seed, 1)[0];
        let (r, p) = cone_to_product(&alg, x.x());
        prop_assert!((r - x.r()).abs() < 1e-12);
        prop_assert!((alg.inner(&p, &p) - 2.0).abs() < 1e-12);
        prop_assert!((radial_speed_squared(&alg, &p) - 1.0).abs() < 1e-12);
        let s = to_slice(&alg, x);
        prop_assert!((alg.trace(s.x()) - (2.0 * alg.rank() as f64).sqrt()).abs() < 1e-12);
    }

    #[test]
    fn metric_splits_as_a_cone(idx in 0usize..ALGEBRAS.len(), seed in any::<u64>()) {
        let alg = algebra(idx);
        let x = &cone_samples(&alg, seed, 1)[0];
        let v = gaussian_vec(&mut rng(seed), alg.dim());
        let t = tangent_project(&alg, x, &v);
        let scale = 1.0 + kepler_metric(&alg, &t.dir).abs();
        prop_assert!(isometry_defect(&alg, &t) / scale < 1e-10);
        prop_assert!(kepler_metric(&alg, &t.dir) >= -1e-12);
    }

    #[test]
    fn unique_a_matches_its_inverse_form(rho in 2usize..8, delta in 1usize..9) {
        let k = HiddenConstants::new(rho, delta);
        prop_assert_eq!(&k.a, &HiddenConstants::a_from_inverse(rho, delta));
        prop_assert!(k.a.is_positive());
        prop_assert_eq!(HiddenConstants::ground(rho, delta), qi((rho * delta) as i64) / qi(4));
    }
}

#[test]
fn table_constants_agree_with_family_closed_forms() {
    let cases = [
        (Family::Gamma, 2..7),
        (Family::HermR, 3..6),
        (Family::HermC, 3..5),
        (Family::HermH, 3..4),
        (Family::HermO, 3..4),
    ];
    for (f, range) in cases {
        for n in range {
            let (rho, delta) = AlgebraSpec::new(f, n).rank_degree();
            let k = HiddenConstants::new(rho, delta);
            assert_eq!((k.a, k.b), HiddenConstants::family_table(f, n), "{f:?} {n}");
        }
    }
}

#[test]
fn sum_of_squared_multiplications() {
    for i in 0..ALGEBRAS.len() {
        let alg = algebra(i);
        let n = alg.dim();
        let (rho, delta) = (qi(alg.rank() as i64), qi(alg.degree() as i64));
        let mut lhs = Mat::<Q>::zeros(n, n);
        for (a, g) in alg.gram().iter().enumerate() {
            let l = alg.lmul(&alg.basis_vector::<Q>(a));
            lhs = lhs.add(&l.matmul(&l).scale(&(Q::from_integer(1.into()) / g)));
        }
        let e = alg.unit::<Q>();
        let c1 = &rho * (Q::from_integer(1.into()) + (&rho - qi(2)) * &delta / qi(4));
        let c2 = &rho * &rho * &delta / qi(4);
        let rhs = alg.lmul(&e).scale(&c1).add(&alg.ket_bra(&e, &e).scale(&c2));
        assert_eq!(lhs, rhs, "{}", alg.spec());
    }
}

/// `⟨w|x² − tr(x) x⟩` as a polynomial in the coordinates.
fn cone_equation(alg: &Algebra, w: &[Q]) -> WeightedFunction<CRat> {
    let n = alg.dim();
    let zero = Exponent::from_integer(0);
    let mut f = WeightedFunction::zero(n);
    for i in 0..n {
        let bi = alg.basis_vector::<Q>(i);
        for j in 0..n {
            let bj = alg.basis_vector::<Q>(j);
            let c = alg.inner(w, &alg.mul(&bi, &bj)) - alg.trace(&bi) * alg.inner(w, &bj);
            if c.is_zero() {
                continue;
            }
            let mono = Monomial::var(n, i).mul(&Monomial::var(n, j));
            f = f.add(&WeightedFunction::term(n, CRat::from_q(&c), zero, zero, mono));
        }
    }
    f
}

#[test]
fn generators_inside_the_laplacian_are_tangent() {
    for i in [0, 1, 3, 4] {
        let alg = algebra(i);
        let h = HiddenAction::<CRat>::new(alg.clone()).unwrap();
        let pts = Samples::Exact(rational_cone_samples(&alg, 3, 10));
        let w = rational_vec(&mut rng(i as u64), alg.dim());
        let f = cone_equation(&alg, &w);
        assert_eq!(function_max(&f, &pts).unwrap(), 0.0);
        let mut ops = vec![h.hat_l(&alg.unit::<Q>())];
        let n = alg.dim();
        for a in 0..n {
            for b in a + 1..n {
                ops.push(commutator(&h.hat_l(&alg.basis_vector::<Q>(a)), &h.hat_l(&alg.basis_vector::<Q>(b))));
            }
        }
        for op in &ops {
            let v = function_max(&op.apply(&f), &pts).unwrap();
            assert!(v < 1e-9, "{} {}: {v:e}", alg.spec(), op.label());
        }
        // a coordinate derivative is not tangent
        let eps = alg.unit_functional::<CRat>();
        let off = (0..n).map(|k| function_max(&ConeOperator::partial(&eps, k).apply(&f), &pts).unwrap()).fold(0.0, f64::max);
        assert!(off > 1e-3, "{}", alg.spec());
    }
}

fn off_cone_residual(alg: &Algebra, lhs: &WeightedFunction<CRat>, rhs: &WeightedFunction<CRat>, seed: u64) -> f64 {
    let mut g = rng(seed);
    let mut worst: f64 = 0.0;
    let mut taken = 0;
    while taken < 5 {
        let x = rational_vec(&mut g, alg.dim());
        let r = alg.inner(&alg.unit::<Q>(), &x);
        if !r.is_positive() {
            continue;
        }
        taken += 1;
        let (a, b) = (lhs.eval_exact(&x, &r).unwrap(), rhs.eval_exact(&x, &r).unwrap());
        let d = a.sub(&b).to_c64().norm();
        worst = worst.max(d / (1.0 + a.to_c64().norm() + b.to_c64().norm()));
    }
    worst
}

#[test]
fn conformal_relations_fail_off_the_cone() {
    for i in [1, 3] {
        let alg = algebra(i);
        let h = HiddenAction::<CRat>::new(alg.clone()).unwrap();
        let mut g = rng(11);
        let u = rational_vec(&mut g, alg.dim());
        let v = rational_vec(&mut g, alg.dim());
        let lhs = commutator(&h.tilde_x(&u), &h.tilde_y(&v));
        let rhs = h.tilde_s(&u, &v).scale(CRat::from_i64(-2));
        let on = Samples::Exact(rational_cone_samples(&alg, 4, 5));
        let mut off: f64 = 0.0;
        for f in default_test_set::<CRat>(&alg).iter().take(6) {
            let (l, r) = (lhs.apply(f), rhs.apply(f));
            assert_eq!(function_residual(&l, &r, &on).unwrap(), 0.0, "{}", alg.spec());
            off = off.max(off_cone_residual(&alg, &l, &r, 9));
        }
        assert!(off > 1e-3, "{}: {off:e}", alg.spec());
    }
}
