use std::sync::Arc;

use jka::cone::cone_samples;
use jka::frames::{jordan_frame, peirce_decompose, standard_frame, DEFAULT_TOL};
use jka::random::{rng, substream};
use jka::scalar::{q, Q};
use jka::tkk::{random_element, ConformalElement, Tkk};
use jka::{Algebra, AlgebraSpec, Family};
use proptest::prelude::*;

const FRAME_ALGEBRAS: [(Family, usize); 7] = [
    (Family::Gamma, 2),
    (Family::Gamma, 4),
    (Family::HermR, 3),
    (Family::HermC, 3),
    (Family::HermR, 4),
    (Family::HermH, 3),
    (Family::HermO, 3),
];

const LIE_ALGEBRAS: [(Family, usize); 4] = [(Family::Gamma, 2), (Family::Gamma, 3), (Family::HermR, 3), (Family::HermC, 3)];

fn shared(f: Family, n: usize) -> Arc<Algebra> {
    Algebra::shared(AlgebraSpec::new(f, n)).unwrap()
}

fn max_diff(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y).abs()).fold(0.0, f64::max)
}

#[test]
fn frames_through_sampled_cone_points() {
    for (f, n) in FRAME_ALGEBRAS {
        let alg = shared(f, n);
        for (k, p) in cone_samples(&alg, 17, 100).iter().enumerate() {
            let frame = jordan_frame(&alg, p.x(), &mut substream(17, k as u64), DEFAULT_TOL).unwrap();
            let d = frame.defect(&alg);
            assert!(d < 1e-10, "{}: point {k} defect {d:e}", alg.spec());
        }
    }
}

#[test]
fn peirce_components_follow_the_eigenvalue_law() {
    for (f, n) in FRAME_ALGEBRAS {
        let alg = shared(f, n);
        let p = &cone_samples(&alg, 5, 1)[0];
        let frame = jordan_frame(&alg, p.x(), &mut rng(5), DEFAULT_TOL).unwrap();
        let dec = peirce_decompose(&alg, &frame).unwrap();
        assert_eq!(dec.total_dim(), alg.dim());
        for (&(j, k), vs) in &dec.components {
            for v in vs {
                for (i, c) in frame.idempotents.iter().enumerate() {
                    let lambda = if j == k { (i == j) as u8 as f64 } else { ((i == j) as u8 + (i == k) as u8) as f64 / 2.0 };
                    let want: Vec<f64> = v.iter().map(|x| lambda * x).collect();
                    assert!(max_diff(&alg.mul(c, v), &want) < 1e-9, "{} c{i} on V{j}{k}", alg.spec());
                }
            }
        }
    }
}

#[test]
fn standard_frames_are_exact() {
    for (f, n) in FRAME_ALGEBRAS {
        let alg = Algebra::new(AlgebraSpec::new(f, n)).unwrap();
        let frame = standard_frame(&alg);
        let mut sum = alg.zero::<Q>();
        for (i, c) in frame.iter().enumerate() {
            assert_eq!(&alg.square(c), c);
            for d in &frame[i + 1..] {
                assert_eq!(alg.mul(c, d), alg.zero::<Q>());
            }
            sum = sum.iter().zip(c).map(|(a, b)| a + b).collect();
        }
        assert_eq!(sum, alg.unit::<Q>());
    }
}

#[test]
fn compact_part_is_derivations_plus_v() {
    for (f, n) in FRAME_ALGEBRAS {
        let alg = shared(f, n);
        let d = Tkk::new(alg.clone()).dims();
        assert_eq!(d.u, d.der + alg.dim(), "{}", alg.spec());
        assert_eq!(d.co, d.r#str + 2 * alg.dim(), "{}", alg.spec());
    }
}

fn halves(tkk: &Tkk, a: &ConformalElement<Q>) -> (ConformalElement<Q>, ConformalElement<Q>) {
    let half = q(1, 2);
    let t = tkk.theta(a);
    (a.add(&t).scale(&half), a.sub(&t).scale(&half))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(12))]

    #[test]
    fn cartan_involution_grades_the_bracket(idx in 0usize..LIE_ALGEBRAS.len(), seed in any::<u64>()) {
        let (f, n) = LIE_ALGEBRAS[idx];
        let tkk = Tkk::new(shared(f, n));
        let mut g = rng(seed);
        let a = random_element(&tkk, &mut g);
        let b = random_element(&tkk, &mut g);
        prop_assert_eq!(tkk.theta(&tkk.theta(&a)), a.clone());
        prop_assert_eq!(tkk.theta(&tkk.bracket(&a, &b)), tkk.bracket(&tkk.theta(&a), &tkk.theta(&b)));
        let (k1, p1) = halves(&tkk, &a);
        let (k2, p2) = halves(&tkk, &b);
        let kk = tkk.bracket(&k1, &k2);
        let kp = tkk.bracket(&k1, &p2);
        let pp = tkk.bracket(&p1, &p2);
        prop_assert_eq!(tkk.theta(&kk), kk);
        prop_assert_eq!(tkk.theta(&kp), kp.scale(&q(-1, 1)));
        prop_assert_eq!(tkk.theta(&pp), pp);
    }

    #[test]
    fn unit_generator_is_central_in_compact_part(idx in 0usize..LIE_ALGEBRAS.len(), seed in any::<u64>()) {
        let (f, n) = LIE_ALGEBRAS[idx];
        let alg = shared(f, n);
        let tkk = Tkk::new(alg.clone());
        let e = alg.unit::<Q>();
        let z = tkk.x(&e).add(&tkk.y(&e));
        let (k, p) = halves(&tkk, &random_element(&tkk, &mut rng(seed)));
        prop_assert!(tkk.bracket(&z, &k).is_zero());
        if !p.is_zero() {
            prop_assert!(!tkk.bracket(&z, &p).is_zero());
        }
    }
}
