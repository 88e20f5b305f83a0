//! Property tests for the algebraic invariants and the module contracts.

use std::sync::OnceLock;

use blowup_core::algebra::mpoly::det as mdet;
use blowup_core::canonical::{full_reduce, in_window, CanonicalForm};
use blowup_core::charts::{from_v_coords, to_v_coords};
use blowup_core::glue::{
    topo_equal, topological_class, validate_glue, BaseBundleToken, BlowupBundleDescriptor, GlueMap,
};
use blowup_core::io::{parse_document, to_json, DescriptorDoc, PolyDoc};
use blowup_core::iso_moduli::moduli::J2_SPLIT;
use blowup_core::iso_moduli::{
    are_isomorphic, are_separated, classify_j2, discover_j2, DiscoveryConfig, IsoBounds, ModuliJ2Point,
    ProjectivePoint, ReferenceFamily,
};
use blowup_core::sampling::{random_gauge_pair, random_gauge_pair_on_ell, random_nonzero, random_window_point};
use blowup_core::splitting::splitting_type;
use blowup_core::{GaussianRational, LaurentPoly, MPoly, Mat2, Monomial, Rational, SplittingType, TransitionMatrix, UPoly};
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn gq() -> impl Strategy<Value = GaussianRational> {
    (-6i64..=6, 1i64..=4, -3i64..=3, 1i64..=3).prop_map(|(a, b, c, d)| GaussianRational::from_parts(a, b, c, d))
}

fn laurent() -> impl Strategy<Value = LaurentPoly> {
    prop::collection::vec((-4i64..=4, 0u32..=3, gq()), 0..5)
        .prop_map(|ts| LaurentPoly::from_terms(ts.into_iter().map(|(z, u, c)| (Monomial::new(z, u), c))))
}

fn mat() -> impl Strategy<Value = Mat2> {
    (laurent(), laurent(), laurent(), laurent()).prop_map(|(a, b, c, d)| Mat2::new(a, b, c, d))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(1000))]

    #[test]
    fn laurent_ring_axioms(a in laurent(), b in laurent(), c in laurent()) {
        prop_assert_eq!(&a + &b, &b + &a);
        prop_assert_eq!(&a * &b, &b * &a);
        prop_assert_eq!(&(&a + &b) + &c, &a + &(&b + &c));
        prop_assert_eq!(&(&a * &b) * &c, &a * &(&b * &c));
        prop_assert_eq!(&a * &(&b + &c), &(&a * &b) + &(&a * &c));
        prop_assert_eq!(&a * &LaurentPoly::one(), a.clone());
        prop_assert!((&a - &a).is_zero());
    }

    #[test]
    fn gaussian_field_axioms(a in gq(), b in gq()) {
        prop_assert_eq!(&a * &b, &b * &a);
        if !b.is_zero() {
            prop_assert_eq!(&(&a / &b) * &b, a.clone());
        }
        prop_assert_eq!((&a * &a.conj()).re, a.norm_sqr());
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(300))]

    #[test]
    fn determinant_is_multiplicative(a in mat(), b in mat()) {
        prop_assert_eq!((&a * &b).det(), &a.det() * &b.det());
    }

    #[test]
    fn evaluation_is_a_ring_homomorphism(a in laurent(), b in laurent(), z in gq(), u in gq()) {
        prop_assume!(!z.is_zero());
        let ev = |p: &LaurentPoly| p.evaluate(&z, &u).unwrap();
        prop_assert_eq!(ev(&(&a * &b)), &ev(&a) * &ev(&b));
        prop_assert_eq!(ev(&(&a + &b)), &ev(&a) + &ev(&b));
    }

    #[test]
    fn truncated_product_matches_product(a in laurent(), b in laurent(), n in 0u32..4) {
        prop_assert_eq!(a.mul_trunc(&b, n), (&a * &b).truncate_u(n));
    }

    #[test]
    fn jet_inverse_is_an_inverse(c in gq(), e in -3i64..=3, tail in laurent(), n in 0u32..4) {
        prop_assume!(!c.is_zero());
        let f = &LaurentPoly::monomial(c, e, 0) + &tail.filter(|m| m.u > 0);
        let g = f.jet_inverse(n).unwrap();
        prop_assert_eq!(f.mul_trunc(&g, n), LaurentPoly::one());
    }

    #[test]
    fn chart_change_round_trips(a in laurent(), k in 1u32..4) {
        prop_assert_eq!(from_v_coords(&to_v_coords(&a, k), k), a);
    }

    #[test]
    fn poly_documents_round_trip(a in laurent()) {
        let text = to_json(&PolyDoc::from_poly(&a));
        let doc: PolyDoc = parse_document(&text).unwrap();
        prop_assert_eq!(doc.to_poly("").unwrap(), a);
    }

    #[test]
    fn sturm_counts_constructed_roots(roots in prop::collection::btree_set(-8i64..=8, 0..5)) {
        // ∏ (8t − r): roots r/8, counted in (0, 1].
        let mut p = UPoly::from_ints(&[1]);
        for &r in &roots {
            let f = UPoly::from_ints(&[-r, 8]);
            let mut c = vec![Rational::from_integer(0.into()); p.coeffs().len() + 1];
            for (i, a) in p.coeffs().iter().enumerate() {
                for (j, b) in f.coeffs().iter().enumerate() {
                    c[i + j] += a * b;
                }
            }
            p = UPoly::new(c);
        }
        let expected = roots.iter().filter(|&&r| 0 < r && r <= 8).count();
        let zero = Rational::from_integer(0.into());
        let one = Rational::from_integer(1.into());
        prop_assert_eq!(p.count_roots(&zero, &one), expected);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn splitting_type_is_gauge_invariant(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let j1 = rng.gen_range(-3..=3);
        let j2 = rng.gen_range(-3..=j1);
        let m = Mat2::upper(j1, LaurentPoly::monomial(random_nonzero(&mut rng), rng.gen_range(j2..=j1), 0), j2);
        let (h_u, h_v) = random_gauge_pair_on_ell(&mut rng, 2);
        let g = &(&h_v * &m) * &h_u.inverse_laurent().unwrap();
        let s = splitting_type(&m).unwrap();
        prop_assert_eq!(splitting_type(&g).unwrap(), s);
        prop_assert_eq!(s.degree(), j1 + j2);
    }

    #[test]
    fn reduction_certificates_verify_and_land_in_the_window(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let j2 = rng.gen_range(-3..=1);
        let j1 = j2 + rng.gen_range(0..=5);
        let k = rng.gen_range(1..=2u32);
        let mut q = LaurentPoly::zero();
        for _ in 0..rng.gen_range(0..=5) {
            q.add_term(Monomial::new(rng.gen_range(j2 - 1..=j1 + 1), rng.gen_range(1..=3)), &random_nonzero(&mut rng));
        }
        let t = TransitionMatrix::validate(Mat2::upper(j1, q, j2), k).unwrap();
        let r = full_reduce(&t, None).unwrap();
        prop_assert!(r.certificate.verify(t.matrix(), &r.form.matrix()).is_ok());
        for &(i, l) in r.form.coeffs().keys() {
            prop_assert!(in_window(r.form.split(), k, i, l));
        }
        // A canonical form reduces to itself.
        let again = full_reduce(&r.form.transition(), None).unwrap();
        prop_assert_eq!(again.form, r.form);
    }
}

fn family() -> &'static ReferenceFamily {
    static FAMILY: OnceLock<ReferenceFamily> = OnceLock::new();
    FAMILY.get_or_init(|| discover_j2(&DiscoveryConfig { samples: 120, seed: 11, ..DiscoveryConfig::default() }).unwrap().family)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(120))]

    #[test]
    fn classification_is_scaling_invariant(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut w = random_window_point(&mut rng, 3);
        for c in w.iter_mut() {
            if rng.gen_bool(0.3) {
                *c = GaussianRational::zero();
            }
        }
        let lambda = random_nonzero(&mut rng);
        let scaled: Vec<_> = w.iter().map(|c| c * &lambda).collect();
        let b = IsoBounds::direct();
        let a = classify_j2(family(), [w[0].clone(), w[1].clone(), w[2].clone()], b).unwrap();
        let s = classify_j2(family(), [scaled[0].clone(), scaled[1].clone(), scaled[2].clone()], b).unwrap();
        prop_assert_eq!(a, s);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(40))]

    #[test]
    fn oracle_strategies_agree(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let j = 2;
        let n = blowup_core::canonical::param_space_dim(j, -j, 1);
        let w = random_window_point(&mut rng, n);
        let form = CanonicalForm::from_window_vector(1, SplittingType::new(j, -j), &w).unwrap();
        let t = form.transition();
        let w2 = random_window_point(&mut rng, n);
        let other = CanonicalForm::from_window_vector(1, SplittingType::new(j, -j), &w2).unwrap().transition();
        let reduced = are_isomorphic(&t, &other, IsoBounds::default()).unwrap();
        let direct = are_isomorphic(&t, &other, IsoBounds::direct()).unwrap();
        prop_assert_eq!(reduced.is_isomorphic(), direct.is_isomorphic());
        prop_assert_eq!(reduced.is_distinct(), direct.is_distinct());
        // A gauge-equivalent copy is recognised and the certificate checks out.
        let (h_u, h_v) = random_gauge_pair(&mut rng, 1, 1, 1);
        let copy = t.gauge(&h_u, &h_v).unwrap();
        match are_isomorphic(&t, &copy, IsoBounds::default()).unwrap() {
            blowup_core::iso_moduli::IsoVerdict::Isomorphic(c) => prop_assert!(c.verify(t.matrix(), copy.matrix()).is_ok()),
            v => prop_assert!(false, "gauge copy not recognised: {:?}", v),
        }
    }
}

fn small_mpoly(rng: &mut ChaCha8Rng) -> MPoly {
    let mut p = MPoly::zero(2);
    for _ in 0..rng.gen_range(0..=2) {
        p.add_term(vec![rng.gen_range(0..=1), rng.gen_range(0..=1)], &GaussianRational::from_int(rng.gen_range(-2..=2)));
    }
    p
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(500))]

    #[test]
    fn glue_acceptance_matches_constant_determinant(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let entries: Vec<Vec<MPoly>> = (0..2).map(|_| (0..2).map(|_| small_mpoly(&mut rng)).collect()).collect();
        // Oracle: the determinant takes one nonzero value at the origin and at
        // a grid of sample points.
        let a = &entries[0][0];
        let d_at = |x: &[GaussianRational]| {
            &(&a.eval(x) * &entries[1][1].eval(x)) - &(&entries[0][1].eval(x) * &entries[1][0].eval(x))
        };
        let origin = d_at(&[GaussianRational::zero(), GaussianRational::zero()]);
        let constant = (-2..=2).all(|s| (-2..=2).all(|t| d_at(&[GaussianRational::from_int(s), GaussianRational::from_int(t)]) == origin));
        let expected = constant && !origin.is_zero();
        let got = validate_glue(2, 2, entries.clone());
        prop_assert_eq!(got.is_ok(), expected);
        if got.is_ok() {
            let radial: Vec<Vec<MPoly>> = entries.iter().map(|r| r.iter().map(MPoly::radial).collect()).collect();
            prop_assert!((&mdet(&radial) - &mdet(&entries).extend_vars(1)).is_zero());
        }
    }

    #[test]
    fn separation_is_symmetric(a in -20i64..=20, b in -20i64..=20, d in 1i64..=7, pick in 0usize..4) {
        let point = |n: i64| match (n, pick) {
            (0, 0) => ModuliJ2Point::Q1,
            (0, 1) => ModuliJ2Point::Q2,
            (0, 2) => ModuliJ2Point::Generic(ProjectivePoint::Infinity),
            _ => ModuliJ2Point::Generic(ProjectivePoint::Finite(GaussianRational::from_ratio(n, d))),
        };
        let (x, y) = (point(a), point(b));
        prop_assert_eq!(are_separated(&x, &y), are_separated(&y, &x));
        prop_assert_eq!(are_separated(&x, &y), x != y && !(matches!(x, ModuliJ2Point::Q1 | ModuliJ2Point::Q2) && matches!(y, ModuliJ2Point::Q1 | ModuliJ2Point::Q2)));
    }
}

fn base(id: &str) -> BaseBundleToken {
    BaseBundleToken { id: id.into(), c1: 0, surface: "P2".into() }
}

#[test]
fn topo_equal_is_an_equivalence_relation() {
    let mut rng = ChaCha8Rng::seed_from_u64(21);
    let mut classes = Vec::new();
    for n in 0..12 {
        let w = if n % 4 == 0 { vec![GaussianRational::zero(); 3] } else { random_window_point(&mut rng, 3) };
        for lambda in [GaussianRational::one(), random_nonzero(&mut rng)] {
            let scaled: Vec<_> = w.iter().map(|c| c * &lambda).collect();
            let local = CanonicalForm::from_window_vector(1, J2_SPLIT, &scaled).unwrap();
            let id = if n % 5 == 4 { "F" } else { "E" };
            let d = BlowupBundleDescriptor::new(base(id), local, GlueMap::identity(2, 2)).unwrap();
            classes.push(topological_class(&d));
        }
    }
    let b = IsoBounds::default();
    let eq: Vec<Vec<bool>> = classes
        .iter()
        .map(|x| classes.iter().map(|y| topo_equal(x, y, b).unwrap()).collect())
        .collect();
    let n = classes.len();
    for i in 0..n {
        assert!(eq[i][i]);
        for j in 0..n {
            assert_eq!(eq[i][j], eq[j][i]);
            for k in 0..n {
                if eq[i][j] && eq[j][k] {
                    assert!(eq[i][k]);
                }
            }
        }
    }
    // Scaled copies are always identified.
    for i in (0..n).step_by(2) {
        assert!(eq[i][i + 1]);
    }
}

#[test]
fn descriptor_documents_round_trip() {
    let mut rng = ChaCha8Rng::seed_from_u64(22);
    for _ in 0..20 {
        let w = random_window_point(&mut rng, 3);
        let local = CanonicalForm::from_window_vector(1, J2_SPLIT, &w).unwrap();
        let x = MPoly::var(2, 0);
        let phi = validate_glue(2, 2, vec![vec![MPoly::one(2), x], vec![MPoly::zero(2), MPoly::constant(2, random_nonzero(&mut rng))]]).unwrap();
        let d = BlowupBundleDescriptor::new(base("E"), local, phi).unwrap();
        let text = to_json(&DescriptorDoc::from_descriptor(&d));
        let back: DescriptorDoc = parse_document(&text).unwrap();
        assert_eq!(back.descriptor().unwrap(), d);
        assert_eq!(to_json(&back), text);
    }
}
