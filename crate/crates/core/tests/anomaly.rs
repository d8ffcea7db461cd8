//! Anomaly cancellation for both families and the Strominger report.

use nilform::anomaly::{solve_anomaly, strominger_report};
use nilform::coeffield::{Assignment, Coefficient, RuleSet, Var};
use nilform::complexgeom::{adapted_family_i, adapted_family_ii, Sign, SU3Model};
use nilform::connections::{chern, curvature, instanton_family, pontrjagin_trace};
use nilform::error::Error;
use nilform::exterior::{Blade, Form};
use nilform::parse::coefficient;

fn v(n: &str) -> Coefficient {
    Coefficient::var(n)
}

fn family_i(sign: Sign) -> SU3Model {
    adapted_family_i(&v("r"), &v("s"), sign).unwrap()
}

fn family_ii(sign: Sign) -> SU3Model {
    adapted_family_ii(&v("r"), &v("p"), &v("q"), sign).unwrap()
}

fn tau_rule() -> RuleSet {
    RuleSet::single("tau", coefficient("(s**4 - 1)/(9*r**2*s**2)", &["r", "s"]).unwrap()).unwrap()
}

fn quarter_rule() -> RuleSet {
    RuleSet::single("q", coefficient("1/(4*p**2)", &["p"]).unwrap()).unwrap()
}

fn p1(m: &SU3Model, c: &nilform::connections::Connection) -> Form {
    pontrjagin_trace(&curvature(c, &m.equations).unwrap()).1
}

#[test]
fn family_i_multiplier() {
    for sign in [Sign::Plus, Sign::Minus] {
        let m = family_i(sign);
        let a = instanton_family(m.coframe(), &v("lambda"), &v("mu"), &v("tau"));
        let (p1c, p1a) = (p1(&m, &chern(&m).unwrap()), p1(&m, &a));
        let sol = solve_anomaly(&m.dt(), &p1c, &p1a, &tau_rule()).unwrap();
        assert_eq!(sol.multiplier, coefficient("4*pi2*r**2*s**2", &["r", "s"]).unwrap());
        assert_eq!(sol.alpha_prime, coefficient("2*r**2*s**2", &["r", "s"]).unwrap());
        assert!(sol.residual.is_zero());
        let sol = sol
            .with_samples(&[Assignment::new().with("r", 1, 1).with("s", 2, 1), Assignment::new().with("r", 3, 1).with("s", 1, 1)])
            .unwrap();
        assert!(sol.positive_at_samples());
        assert_eq!(sol.positivity[0].value.to_string(), "8");
        assert_eq!(sol.positivity[1].value.to_string(), "18");

        // Solve the e1234 component −8/(r²s²) = M(c − kτ²) for τ².
        let b = Blade::from_indices(&[0, 1, 2, 3]).unwrap().1;
        let k = p1a.coefficient(b).substitute(Var::new("tau"), &Coefficient::one()).unwrap();
        let tau2 = &(&(&sol.multiplier * &p1c.coefficient(b)) - &m.dt().coefficient(b)) / &(&sol.multiplier * &k);
        assert_eq!(tau2, coefficient("(s**4 - 1)/(9*r**2*s**2)", &["r", "s"]).unwrap());
    }
}

#[test]
fn family_i_without_rule_is_not_proportional() {
    let m = family_i(Sign::Plus);
    let a = instanton_family(m.coframe(), &v("lambda"), &v("mu"), &v("tau"));
    let r = solve_anomaly(&m.dt(), &p1(&m, &chern(&m).unwrap()), &p1(&m, &a), &RuleSet::new());
    assert!(matches!(r, Err(Error::NotProportional(_))));
}

#[test]
fn family_ii_needs_s2_equal_t2() {
    for sign in [Sign::Plus, Sign::Minus] {
        let m = family_ii(sign);
        let flat = instanton_family(m.coframe(), &v("lambda"), &v("mu"), &Coefficient::zero());
        let p1c = p1(&m, &chern(&m).unwrap());
        let p1a = p1(&m, &flat);
        assert!(p1a.is_zero());
        assert!(matches!(solve_anomaly(&m.dt(), &p1c, &p1a, &RuleSet::new()), Err(Error::NotProportional(_))));
        let sol = solve_anomaly(&m.dt(), &p1c, &p1a, &quarter_rule()).unwrap();
        assert_eq!(sol.multiplier, coefficient("4*pi2*r**2", &["r"]).unwrap());
        assert_eq!(sol.alpha_prime, coefficient("2*r**2", &["r"]).unwrap());
    }
}

#[test]
fn strominger_reports() {
    for sign in [Sign::Plus, Sign::Minus] {
        let m = family_i(sign);
        let a = instanton_family(m.coframe(), &v("lambda"), &v("mu"), &v("tau"));
        let sample = Assignment::new().with("r", 1, 1).with("s", 2, 1).with("lambda", 0, 1).with("mu", 0, 1);
        let rep = strominger_report(&m, &a, &tau_rule(), &[sample]).unwrap();
        assert!(rep.passes(), "{rep}");
        assert!(!rep.flat_instanton);

        let rep = strominger_report(&m, &chern(&m).unwrap(), &tau_rule(), &[]).unwrap();
        assert!(rep.bismut_passes() && rep.balanced_passes());
        assert!(!rep.instanton_passes());
        assert!(!rep.passes());

        let m = family_ii(sign);
        let flat = instanton_family(m.coframe(), &v("lambda"), &v("mu"), &Coefficient::zero());
        let sample = Assignment::new().with("r", 1, 1).with("p", 1, 1);
        let rep = strominger_report(&m, &flat, &quarter_rule(), &[sample]).unwrap();
        assert!(rep.passes(), "{rep}");
        assert!(rep.flat_instanton);
        assert!(rep.to_string().contains("(c) instanton: pass (flat)"));
    }
}
