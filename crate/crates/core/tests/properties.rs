use std::sync::{Arc, OnceLock};

use num_bigint::BigInt;
use num_rational::BigRational;
use proptest::prelude::*;
use proptest::test_runner::RngSeed;

use nilform::builtin::builtin;
use nilform::coeffield::{Coefficient, GaussRational, RuleSet};
use nilform::complexgeom::{adapted_family_i, adapted_family_ii, Family, SU3Model, Sign};
use nilform::connections::{bianchi_residual, bismut, chern, curvature, first_structure_residual, levi_civita, pontrjagin_trace};
use nilform::exterior::{Blade, Coframe, Form, JAction};
use nilform::linalg;
use nilform::liealg::StructureEquations;

fn cases(n: u32) -> ProptestConfig {
    ProptestConfig { cases: n, rng_seed: RngSeed::Fixed(0x6e69_6c66), ..ProptestConfig::default() }
}

fn gauss(re: i64, im: i64) -> Coefficient {
    Coefficient::constant(GaussRational::new(BigRational::from_integer(re.into()), BigRational::from_integer(im.into())))
}

fn rational(n: i64, d: i64) -> Coefficient {
    Coefficient::constant(GaussRational::real(BigRational::new(BigInt::from(n), BigInt::from(d))))
}

/// Small Gaussian-integer polynomials in `r, s`.
fn polynomial() -> impl Strategy<Value = Coefficient> {
    prop::collection::vec((-3i64..=3, -3i64..=3, 0i32..=2, 0i32..=2), 1..=3).prop_map(|terms| {
        let r = Coefficient::var("r");
        let s = Coefficient::var("s");
        let mut acc = Coefficient::zero();
        for (re, im, er, es) in terms {
            let mono = &r.pow(er).unwrap() * &s.pow(es).unwrap();
            acc = &acc + &(&gauss(re, im) * &mono);
        }
        acc
    })
}

/// A polynomial, optionally divided by `r + s²`.
fn coefficient() -> impl Strategy<Value = Coefficient> {
    (polynomial(), any::<bool>()).prop_map(|(p, divide)| {
        if divide {
            &p / &(&Coefficient::var("r") + &Coefficient::var("s").pow(2).unwrap())
        } else {
            p
        }
    })
}

fn nonzero_coefficient() -> impl Strategy<Value = Coefficient> {
    coefficient().prop_filter("nonzero", |c| !c.is_zero())
}

fn form_on(cf: Arc<Coframe>, degree: usize) -> impl Strategy<Value = Form> {
    prop::collection::vec((prop::sample::subsequence((0..6).collect::<Vec<usize>>(), degree), polynomial()), 1..=4).prop_map(
        move |terms| {
            let mut f = Form::zero(&cf);
            for (idx, c) in terms {
                f = &f + &Form::monomial(&cf, &idx, c);
            }
            f
        },
    )
}

fn real_form(degree: usize) -> impl Strategy<Value = Form> {
    form_on(Coframe::standard_real(), degree)
}

fn graded_pair() -> impl Strategy<Value = (usize, Form, usize, Form)> {
    (1usize..=4, 1usize..=4).prop_flat_map(|(p, q)| (Just(p), real_form(p), Just(q), real_form(q)))
}

fn nonzero_rational() -> impl Strategy<Value = Coefficient> {
    (1i64..=9, 1i64..=5, any::<bool>()).prop_map(|(n, d, neg)| rational(if neg { -n } else { n }, d))
}

fn sign() -> impl Strategy<Value = Sign> {
    prop_oneof![Just(Sign::Plus), Just(Sign::Minus)]
}

/// Family I or II at random rational parameters.
fn family_model() -> impl Strategy<Value = SU3Model> {
    (any::<bool>(), nonzero_rational(), nonzero_rational(), nonzero_rational(), sign()).prop_filter_map(
        "p² ≠ q²",
        |(first, r, p, q, sg)| {
            if first {
                Some(adapted_family_i(&r, &p, sg).unwrap())
            } else if &p * &p != &q * &q {
                Some(adapted_family_ii(&r, &p, &q, sg).unwrap())
            } else {
                None
            }
        },
    )
}

fn builtin_real_structures() -> &'static [StructureEquations] {
    static CACHE: OnceLock<Vec<StructureEquations>> = OnceLock::new();
    CACHE.get_or_init(|| {
        let mut out = Vec::new();
        for name in ["family1", "family2", "eps0", "eps1", "beta", "abelian"] {
            for sg in [Sign::Plus, Sign::Minus] {
                out.push(builtin(name, sg).unwrap().real_structure().unwrap().0);
            }
        }
        out
    })
}

fn connection_identities_hold(m: &SU3Model) {
    let lc = levi_civita(&m.equations).unwrap();
    assert!(first_structure_residual(&lc, &m.equations).iter().all(Form::is_zero), "torsion-free");
    for c in [lc, chern(m).unwrap(), bismut(m).unwrap()] {
        let omega = curvature(&c, &m.equations).unwrap();
        assert!(bianchi_residual(&c, &omega, &m.equations).iter().flatten().all(Form::is_zero), "Bianchi {}", c.kind);
        let (trace, _) = pontrjagin_trace(&omega);
        assert!(m.equations.differential(&trace).unwrap().is_zero(), "closed trace {}", c.kind);
    }
}

proptest! {
    #![proptest_config(cases(48))]

    #[test]
    fn coefficient_field_laws(a in coefficient(), b in coefficient(), c in nonzero_coefficient()) {
        prop_assert_eq!(&a + &b, &b + &a);
        prop_assert_eq!(&a * &b, &b * &a);
        prop_assert_eq!(&(&a + &b) * &c, &(&a * &c) + &(&b * &c));
        prop_assert_eq!(&(&a / &c) * &c, a.clone());
        prop_assert_eq!((&a * &b).conjugate(), &a.conjugate() * &b.conjugate());
        prop_assert_eq!(a.conjugate().conjugate(), a);
    }

    #[test]
    fn canonical_coefficient_text_reparses(a in coefficient()) {
        let back = nilform::parse::coefficient(&a.to_string(), &["r", "s"]).unwrap();
        prop_assert_eq!(&back, &a);
        let compact = nilform::parse::coefficient(&a.to_compact_string(), &["r", "s"]).unwrap();
        prop_assert_eq!(compact, a);
    }

    #[test]
    fn rules_respect_arithmetic(a in coefficient(), b in coefficient()) {
        let rules = RuleSet::single("s", Coefficient::var("r")).unwrap();
        prop_assert_eq!(rules.apply(&(&a * &b)), rules.apply(&(&rules.apply(&a) * &rules.apply(&b))));
        prop_assert_eq!(rules.apply(&(&a + &b)), &rules.apply(&a) + &rules.apply(&b));
    }

    #[test]
    fn wedge_is_graded_commutative((p, a, q, b) in graded_pair()) {
        let ab = &a ^ &b;
        let ba = &b ^ &a;
        prop_assert_eq!(ab, if (p * q) % 2 == 0 { ba } else { -&ba });
    }

    #[test]
    fn wedge_is_associative(a in real_form(1), b in real_form(2), c in real_form(2)) {
        prop_assert_eq!(&(&a ^ &b) ^ &c, &a ^ &(&b ^ &c));
    }

    #[test]
    fn j_squares_to_degree_sign(a in (1usize..=5).prop_flat_map(real_form)) {
        let j = JAction::adapted();
        let k = a.degree().unwrap();
        prop_assert_eq!(a.apply_j(&j).unwrap().apply_j(&j).unwrap(), if k % 2 == 0 { a.clone() } else { -&a });
    }

    #[test]
    fn star_squares_to_sign(a in (0usize..=6).prop_flat_map(real_form)) {
        let k = a.degree().unwrap_or(0);
        let twice = a.hodge_star().unwrap().hodge_star().unwrap();
        prop_assert_eq!(twice, if (k * (6 - k)) % 2 == 0 { a.clone() } else { -&a });
    }

    #[test]
    fn frame_evaluation_is_alternating(a in real_form(2), x in 0usize..6, y in 0usize..6) {
        let xy = a.evaluate_on_frame(&[x, y]).unwrap();
        let yx = a.evaluate_on_frame(&[y, x]).unwrap();
        prop_assert_eq!(xy, -yx);
    }

    #[test]
    fn conjugation_is_an_automorphism(a in form_on(Coframe::standard_complex(), 1), b in form_on(Coframe::standard_complex(), 2)) {
        prop_assert_eq!((&a ^ &b).conjugate(), &a.conjugate() ^ &b.conjugate());
        prop_assert_eq!(b.conjugate().conjugate(), b.clone());
        for name in ["eps1", "family2"] {
            let s = builtin(name, Sign::Plus).unwrap().equations;
            prop_assert_eq!(s.differential(&b).unwrap().conjugate(), s.differential(&b.conjugate()).unwrap());
        }
    }

    #[test]
    fn d_squared_vanishes((idx, a) in (0usize..12, 1usize..=3).prop_flat_map(|(idx, k)| {
        (Just(idx), form_on(builtin_real_structures()[idx].coframe().clone(), k))
    })) {
        let s = &builtin_real_structures()[idx];
        prop_assert!(s.differential(&s.differential(&a).unwrap()).unwrap().is_zero());
    }

    #[test]
    fn transform_composes(m in prop::collection::vec(-2i64..=2, 9), n in prop::collection::vec(-2i64..=2, 9)) {
        let mat = |v: &[i64]| -> Vec<Vec<Coefficient>> { v.chunks(3).map(|r| r.iter().map(|&x| gauss(x, (x + 1) % 2)).collect()).collect() };
        let (a, b) = (mat(&m), mat(&n));
        prop_assume!(!linalg::determinant(&a).is_zero() && !linalg::determinant(&b).is_zero());
        let s = builtin("eps0", Sign::Plus).unwrap().equations;
        let (once, _) = s.transform(&a, None).unwrap();
        let (twice, _) = once.transform(&b, None).unwrap();
        let (direct, _) = s.transform(&linalg::mul(&b, &a), None).unwrap();
        prop_assert_eq!(twice, direct);
    }
}

proptest! {
    #![proptest_config(cases(24))]

    #[test]
    fn connection_identities_on_random_family_models(m in family_model()) {
        connection_identities_hold(&m);
    }
}

#[test]
fn connection_identities_on_builtin_models() {
    for sg in [Sign::Plus, Sign::Minus] {
        for fam in [Family::I, Family::II] {
            let m = nilform::builtin::family(fam, sg).unwrap().su3_model().unwrap();
            connection_identities_hold(&m);
        }
    }
}

#[test]
fn blade_sign_convention() {
    assert_eq!(Blade::from_indices(&[1, 0]).unwrap().0, -1);
    assert_eq!(Blade::from_indices(&[0, 0]), None);
}
