use nilform::builtin::{builtin, family, NAMES};
use nilform::coeffield::{Assignment, Coefficient, RuleSet, Var};
use nilform::complexgeom::{
    ascending_series, check_balanced, check_integrable, classify_complex_structure, HermitianData, Family, Nilpotency,
    Sign,
};
use nilform::exterior::{Coframe, Form, JAction};
use nilform::liealg::{structures_equal, StructureEquations};
use nilform::model::parse_model;
use nilform::numeric::Sampler;
use nilform::parse::{form, Scope};

const SIGNS: [Sign; 2] = [Sign::Plus, Sign::Minus];

fn v(n: &str) -> Coefficient {
    Coefficient::var(n)
}

fn sq(n: &str) -> Coefficient {
    v(n).pow(2).unwrap()
}

fn c(text: &str, params: &[&str]) -> Coefficient {
    nilform::parse::coefficient(text, params).unwrap()
}

fn real_from_text(text: &str) -> StructureEquations {
    parse_model(text).unwrap().equations
}

fn alpha() -> std::sync::Arc<Coframe> {
    Coframe::real(&["a1", "a2", "a3", "a4", "a5", "a6"]).unwrap()
}

fn pm(sign: Sign) -> &'static str {
    if sign == Sign::Plus {
        "+"
    } else {
        "-"
    }
}

#[test]
fn jacobi_holds_for_every_structure() {
    let general = builtin("general", Sign::Plus).unwrap();
    assert!(!general.equations.check_jacobi().passes(), "|E| = 1 is needed");
    assert!(general.equations.check_jacobi_with(&general.rules).passes());
    for sign in SIGNS {
        for name in ["eps0", "eps1", "family1", "family2"] {
            let m = builtin(name, sign).unwrap();
            assert!(m.equations.check_jacobi().passes(), "{name} {sign}");
            let (real, _) = m.real_structure().unwrap();
            assert!(real.check_jacobi().passes(), "{name} {sign} realified");
        }
        for fam in [Family::I, Family::II] {
            assert!(family(fam, sign).unwrap().su3_model().unwrap().equations.check_jacobi().passes());
        }
    }
    assert!(builtin("beta", Sign::Plus).unwrap().equations.check_jacobi().passes());
    for name in NAMES {
        let m = builtin(name, Sign::Plus).unwrap();
        assert!(m.equations.check_jacobi_with(&m.rules).passes(), "{name}");
    }
}

#[test]
fn jacobi_failure_is_reported() {
    let s = real_from_text("coframe real: e1 e2 e3 e4 e5 e6\nd e3 = e1^e2\nd e4 = e3^e4\n");
    let rep = s.check_jacobi();
    assert!(!rep.passes());
    let cf = s.coframe().clone();
    let e = |i: usize| Form::generator(&cf, i);
    let d2 = s.differential(&s.generator_differential(3)).unwrap();
    assert_eq!(d2, &(&e(0) ^ &e(1)) ^ &e(3));
}

#[test]
fn structures_compare_by_equations() {
    let f1p = family(Family::I, Sign::Plus).unwrap().su3_model().unwrap();
    let f1m = family(Family::I, Sign::Minus).unwrap().su3_model().unwrap();
    assert!(structures_equal(&f1p.equations, &f1p.equations).unwrap());
    assert!(!structures_equal(&f1p.equations, &f1m.equations).unwrap());
    let e0 = builtin("eps0", Sign::Plus).unwrap();
    let e1 = builtin("eps1", Sign::Plus).unwrap();
    assert!(!structures_equal(&e0.equations, &e1.equations).unwrap());
}

#[test]
fn complex_equations_are_integrable() {
    for sign in SIGNS {
        for name in ["eps0", "eps1", "family1", "family2"] {
            let m = builtin(name, sign).unwrap();
            assert!(check_integrable(&m.equations).unwrap().passes(), "{name} {sign}");
        }
    }
    let bad = parse_model("coframe complex: w1 w2 w3\nd w2 = ~w1^~w3\n").unwrap();
    let rep = check_integrable(&bad.equations).unwrap();
    assert!(!rep.passes());
    assert!(rep.to_string().contains("~w1^~w3"), "{rep}");
}

#[test]
fn non_nilpotent_structures_have_trivial_series() {
    for sign in SIGNS {
        for name in ["eps0", "eps1"] {
            let (real, j) = builtin(name, sign).unwrap().real_structure().unwrap();
            let (kind, chain) = classify_complex_structure(&real, &j).unwrap();
            assert_eq!(kind, Nilpotency::NonNilpotent, "{name} {sign}");
            assert_eq!(chain.limit().len(), 0);
            assert!(chain.is_j_invariant(&j));
        }
    }
    let (abelian, j) = builtin("abelian", Sign::Plus).unwrap().real_structure().unwrap();
    let (kind, chain) = classify_complex_structure(&abelian, &j).unwrap();
    assert_eq!(kind, Nilpotency::Nilpotent);
    assert_eq!(chain.dimensions(), vec![0, 6]);
}

#[test]
fn nilpotent_complex_structure_series_exhausts() {
    // Iwasawa-type equations: dω³ = ω^{12}
    let m = parse_model("coframe complex: w1 w2 w3\nd w3 = w1^w2\n").unwrap();
    let (real, j) = m.real_structure().unwrap();
    let chain = ascending_series(&real, &j).unwrap();
    assert_eq!(chain.dimensions(), vec![0, 2, 6]);
    assert!(chain.is_j_invariant(&j));
}

#[test]
fn realification_with_the_eps0_map() {
    let a = alpha();
    let sc = Scope::new(Some(&a), Vec::<String>::new());
    let target = real_from_text("coframe real: a1 a2 a3 a4 a5 a6\nd a4 = a1^a2\nd a5 = a2^a3\nd a6 = a1^a4 - a3^a5\n");
    for sign in SIGNS {
        let m = builtin("eps0", sign).unwrap();
        let map: Vec<Form> = ["a1 - i*a3", "a4 + i*a5", &format!("(1/2)*a2 {} 2*i*a6", pm(sign))]
            .iter()
            .map(|t| form(t, &sc).unwrap())
            .collect();
        let (real, j) = m.equations.realify(&map, &RuleSet::new()).unwrap();
        // no sign adjustment is needed
        assert!(structures_equal(&real, &target).unwrap(), "{sign}: {real}");
        assert_eq!(classify_complex_structure(&real, &j).unwrap().0, Nilpotency::NonNilpotent);
    }
}

#[test]
fn realification_with_the_eps1_map() {
    let a = alpha();
    let sc = Scope::new(Some(&a), ["sqrt2"]);
    let rules = RuleSet::single("sqrt2", Coefficient::int(2)).unwrap();
    let target = real_from_text("coframe real: a1 a2 a3 a4 a5 a6\nd a3 = a1^a2\nd a4 = a1^a3\nd a5 = a2^a3\nd a6 = a1^a4 + a2^a5\n");
    for sign in SIGNS {
        let m = builtin("eps1", sign).unwrap();
        let map: Vec<Form> = ["(sqrt2/2)*(a1 + i*a2)", "sqrt2*(a4 + i*a5)", &format!("a3 {} 2*i*a6", pm(sign))]
            .iter()
            .map(|t| form(t, &sc).unwrap())
            .collect();
        let (real, j) = m.equations.realify(&map, &rules).unwrap();
        assert!(structures_equal(&real, &target).unwrap(), "{sign}: {real}");
        assert_eq!(classify_complex_structure(&real, &j).unwrap().0, Nilpotency::NonNilpotent);
    }
}

#[test]
fn abelian_realification_is_trivial() {
    let m = parse_model("coframe complex: w1 w2 w3\n").unwrap();
    let (real, j) = m.real_structure().unwrap();
    assert!(real.differentials().iter().all(Form::is_zero));
    assert_eq!(j, JAction::adapted());
}

/// `u + ū = 0` and `z = −iuv/s²`, for `u = i·u_im` and `v = v_re + i v_im`:
/// `z = u_im·v/s²`.
fn balanced_data(r2: Coefficient, s2: Coefficient, t2: Coefficient, u_im: Coefficient, vv: Coefficient) -> HermitianData {
    let u = &Coefficient::i() * &u_im;
    let z = &(&u_im * &vv) / &s2;
    HermitianData { r2, s2, t2, u, v: vv, z }
}

fn f_wedge_df(name: &str, h: &HermitianData) -> Form {
    let m = builtin(name, Sign::Plus).unwrap();
    let f = h.fundamental_form(m.coframe()).unwrap();
    check_balanced(&m.equations, &f, &RuleSet::new()).unwrap().f_wedge_df
}

#[test]
fn balanced_condition_symbolic() {
    let h = HermitianData::generic();
    for sign in SIGNS {
        let m = builtin("eps0", sign).unwrap();
        let cf = m.coframe().clone();
        let f = h.fundamental_form(&cf).unwrap();
        let fdf = check_balanced(&m.equations, &f, &RuleSet::new()).unwrap().f_wedge_df;
        // the ω^{123 1̄3̄} component is (uv − is²z)/4, zero iff z = −iuv/s²
        let z_part = &(&(&h.u * &h.v) - &(&(&Coefficient::i() * &h.s2) * &h.z)) * &Coefficient::ratio(1, 4);
        assert_eq!(fdf.component(&[0, 1, 2, 3, 5]), z_part);
        // with that z, the ω^{123 1̄2̄} component is ±Re(u)(s²t² − |v|²)/(2s²), zero iff u + ū = 0
        let hz = HermitianData { z: &(&(&-Coefficient::i() * &h.u) * &h.v) / &h.s2, ..h.clone() };
        let fdf_z = check_balanced(&m.equations, &hz.fundamental_form(&cf).unwrap(), &RuleSet::new()).unwrap().f_wedge_df;
        let v2 = &h.v * &h.v.conjugate();
        let u_re_part = &(&v("u_re") * &(&(&h.s2 * &h.t2) - &v2)) / &(&Coefficient::int(2) * &h.s2);
        let comp = fdf_z.component(&[0, 1, 2, 3, 4]);
        assert!(comp == u_re_part || comp == -&u_re_part, "{comp}");
        let hb = balanced_data(sq("r"), sq("s"), sq("t"), v("u_im"), &v("v_re") + &(&Coefficient::i() * &v("v_im")));
        assert!(check_balanced(&m.equations, &hb.fundamental_form(&cf).unwrap(), &RuleSet::new()).unwrap().passes());
    }
}

#[test]
fn eps1_is_never_balanced_symbolically() {
    let h = HermitianData::generic();
    let fdf = f_wedge_df("eps1", &h);
    // imaginary part of the ω^{123 1̄2̄} component is −(s²t² − |v|²)/4 < 0
    let comp = fdf.component(&[0, 1, 2, 3, 4]);
    let im = &(&comp - &comp.conjugate()) * &(&-Coefficient::i() * &Coefficient::ratio(1, 2));
    let expect = &(&(&h.s2 * &h.t2) - &(&h.v * &h.v.conjugate())) * &Coefficient::ratio(-1, 4);
    assert_eq!(im, expect);
}

/// Draws positive-definite data from `draw`, redrawing when the
/// positivity inequalities fail.
fn positive_samples(count: usize, seed: u64, draw: impl Fn(&mut Sampler) -> (HermitianData, Assignment)) -> Vec<HermitianData> {
    let mut sampler = Sampler::new(seed);
    let mut out = Vec::new();
    while out.len() < count {
        let (h, a) = draw(&mut sampler);
        if h.check_positivity(&a).unwrap().passes() {
            out.push(h.specialize(&a).unwrap());
        }
    }
    out
}

fn assignment(s: &mut Sampler, names: &[&str]) -> Assignment {
    let vars: Vec<Var> = names.iter().map(|n| Var::new(n)).collect();
    s.assignment(&vars)
}

#[test]
fn balanced_condition_random_instances() {
    let balanced = positive_samples(5, 11, |s| {
        let a = assignment(s, &["r", "s", "t", "u_im", "v_re", "v_im"]);
        (balanced_data(sq("r"), sq("s"), sq("t"), v("u_im"), &v("v_re") + &(&Coefficient::i() * &v("v_im"))), a)
    });
    for h in &balanced {
        assert!(f_wedge_df("eps0", h).is_zero(), "{h:?}");
    }
    let generic = positive_samples(5, 12, |s| {
        let a = assignment(s, &["r", "s", "t", "u_re", "u_im", "v_re", "v_im", "z_re", "z_im"]);
        (HermitianData::generic(), a)
    });
    for h in &generic {
        assert!(!f_wedge_df("eps0", h).is_zero(), "{h:?}");
    }
    for h in balanced.iter().chain(&generic) {
        assert!(!f_wedge_df("eps1", h).is_zero(), "{h:?}");
    }
}

#[test]
fn positivity_examples() {
    let one = Coefficient::one;
    let zero = Coefficient::zero;
    let h = HermitianData::diagonal(one(), one(), one());
    assert!(h.check_positivity(&Assignment::new()).unwrap().passes());
    let hu = HermitianData { u: one(), ..h.clone() };
    let rep = hu.check_positivity(&Assignment::new()).unwrap();
    assert!(!rep.passes() && !rep.conditions[0].1);
    let hv = HermitianData { v: Coefficient::ratio(1, 2), u: zero(), ..h.clone() };
    assert!(hv.check_positivity(&Assignment::new()).unwrap().passes());
}

#[test]
fn metric_is_j_invariant() {
    assert!(HermitianData::generic().metric_is_j_invariant());
    assert!(HermitianData::diagonal(sq("r"), sq("s"), Coefficient::one()).metric_is_j_invariant());
}

fn eq3_rules_theta() -> RuleSet {
    RuleSet::single("b", c("1 - a**2", &["a"])).unwrap()
}

#[test]
fn rotation_and_shear_preserve_the_equations() {
    let rules = eq3_rules_theta();
    // e^{iθ} = a + ib with a² + b² = 1, B = k e^{iθ}, c real
    let e = c("a + i*b", &["a", "b"]);
    let zero = Coefficient::zero;
    for sign in SIGNS {
        let m = builtin("eps0", sign).unwrap();
        let shear = |bb: Coefficient| {
            vec![vec![e.clone(), zero(), zero()], vec![bb, &v("c") * &e, zero()], vec![zero(), zero(), v("c")]]
        };
        let (out, _) = m.equations.transform(&shear(&v("k") * &e), None).unwrap();
        assert!(structures_equal(&out.apply_rules(&rules), &m.equations).unwrap(), "{sign}");
        // Im(e^{iθ} B̄) ≠ 0 breaks the equations
        let (bad, _) = m.equations.transform(&shear(&(&v("k") * &e) * &Coefficient::i()), None).unwrap();
        assert!(!structures_equal(&bad.apply_rules(&rules), &m.equations).unwrap(), "{sign}");
        let id: Vec<Vec<Coefficient>> =
            (0..3).map(|i| (0..3).map(|j| if i == j { Coefficient::one() } else { zero() }).collect()).collect();
        let f = HermitianData::generic().fundamental_form(m.coframe()).unwrap();
        let (same, g) = m.equations.transform(&id, Some(&f)).unwrap();
        assert_eq!(same, m.equations);
        assert_eq!(g.unwrap(), f);
    }
}

#[test]
fn normalizing_map_without_v_gives_the_diagonal_normal_form() {
    // v = 0 forces z = 0; the map ω¹ = −σ¹, ω² = t(−(ui/s²)σ¹ + σ²), ω³ = −tσ³
    let zero = Coefficient::zero;
    let params = ["r", "s", "t", "u_im"];
    for sign in SIGNS {
        let m = builtin("eps0", sign).unwrap();
        let cf = m.coframe().clone();
        let h = balanced_data(sq("r"), sq("s"), sq("t"), v("u_im"), zero());
        let f = h.fundamental_form(&cf).unwrap();
        let u = &h.u;
        let lead = &(&-&(u * &Coefficient::i()) / &h.s2) * &v("t");
        let map = vec![
            vec![-Coefficient::one(), zero(), zero()],
            vec![lead, v("t"), zero()],
            vec![zero(), zero(), -v("t")],
        ];
        let (eqs, g) = m.equations.transform(&map, Some(&f)).unwrap();
        assert!(structures_equal(&eqs, &m.equations).unwrap());
        let expect = HermitianData::diagonal(
            c("(r**2*s**2 - u_im**2)/s**2", &params),
            c("s**2/t**2", &params),
            Coefficient::one(),
        )
        .fundamental_form(&cf)
        .unwrap();
        assert_eq!(g.unwrap(), expect, "{sign}");
    }
}

#[test]
fn normalizing_map_with_v_gives_the_off_diagonal_normal_form() {
    // v = −c²e^{iθ}, e^{iθ} = a + ib; ω¹ = −e^{iθ}σ¹, ω² = ce^{iθ}(−(ui/s²)σ¹ + σ²), ω³ = −cσ³
    let rules = eq3_rules_theta();
    let zero = Coefficient::zero;
    let params = ["r", "s", "t", "u_im", "c", "a", "b"];
    let e = c("a + i*b", &params);
    for sign in SIGNS {
        let m = builtin("eps0", sign).unwrap();
        let cf = m.coframe().clone();
        let vv = &-&sq("c") * &e;
        let h = balanced_data(sq("r"), sq("s"), sq("t"), v("u_im"), vv);
        let f = h.fundamental_form(&cf).unwrap();
        let ce = &v("c") * &e;
        let lead = &(&-&(&h.u * &Coefficient::i()) / &h.s2) * &ce;
        let map = vec![vec![-&e, zero(), zero()], vec![lead, ce, zero()], vec![zero(), zero(), -v("c")]];
        let (eqs, g) = m.equations.transform(&map, Some(&f)).unwrap();
        assert!(structures_equal(&eqs.apply_rules(&rules), &m.equations).unwrap());
        let expect = HermitianData {
            r2: c("(r**2*s**2 - u_im**2)/s**2", &params),
            s2: c("s**2/c**2", &params),
            t2: c("t**2/c**2", &params),
            u: zero(),
            v: Coefficient::one(),
            z: zero(),
        }
        .fundamental_form(&cf)
        .unwrap();
        assert_eq!(g.unwrap().apply_rules(&rules), expect, "{sign}");
    }
}

#[test]
fn lee_form_matches_balanced_check() {
    for sign in SIGNS {
        for fam in [Family::I, Family::II] {
            let model = family(fam, sign).unwrap();
            let m = model.su3_model().unwrap();
            assert!(m.lee_form().is_zero());
            assert!(m.dpsi().is_zero());
            let fw = &m.f ^ &m.df();
            assert!(fw.is_zero());
            assert!(m.equations.differential(&(&m.f ^ &m.f)).unwrap().is_zero());
        }
        let m = builtin("eps1", sign).unwrap().su3_model().unwrap();
        assert!(!m.lee_form().is_zero());
        assert!(!(&m.f ^ &m.df()).is_zero());
    }
}
