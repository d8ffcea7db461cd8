//! Family I in its adapted coframe: torsion, Chern connection and curvature,
//! the instanton family and the anomaly multiplier.

use nilform::coeffield::{Coefficient, RuleSet};
use nilform::complexgeom::{adapted_family_i, Sign, SU3Model};
use nilform::connections::{chern, curvature, instanton_check, instanton_family, pontrjagin_trace, su3_connection_check};
use nilform::exterior::Form;
use nilform::parse::{form, Scope};

const SIGNS: [Sign; 2] = [Sign::Plus, Sign::Minus];

fn model(sign: Sign) -> SU3Model {
    adapted_family_i(&Coefficient::var("r"), &Coefficient::var("s"), sign).unwrap()
}

/// Parses `text` after replacing `PM`/`MP` by the sign and its opposite.
fn f(m: &SU3Model, sign: Sign, text: &str) -> Form {
    let (pm, mp) = match sign {
        Sign::Plus => ("+", "-"),
        Sign::Minus => ("-", "+"),
    };
    let text = text.replace("PM", pm).replace("MP", mp);
    form(&text, &Scope::new(Some(m.coframe()), ["r", "s", "tau", "lambda", "mu"])).unwrap()
}

#[test]
fn df_torsion_and_dt() {
    for sign in SIGNS {
        let m = model(sign);
        assert_eq!(m.df(), f(&m, sign, "-(2*s/r)*e1^e4^e5 + (2*s/r)*e2^e3^e5 MP (2/(r*s))*(e1^e3^e5 + e2^e4^e5)"));
        assert_eq!(m.torsion(), f(&m, sign, "(2*s/r)*e1^e4^e6 - (2*s/r)*e2^e3^e6 PM (2/(r*s))*(e1^e3^e6 + e2^e4^e6)"));
        assert_eq!(m.dt(), f(&m, sign, "-(8/r**2)*((1/s**2)*e1^e2^e3^e4 + s**2*e1^e2^e5^e6)"));
        assert!(m.dpsi().is_zero());
    }
}

#[test]
fn chern_torsion_forms() {
    for sign in SIGNS {
        let m = model(sign);
        let c = chern(&m).unwrap().torsion_forms.unwrap();
        let expect = [
            ((1, 3), "MP(2/(r*s))*e6"),
            ((2, 4), "MP(2/(r*s))*e6"),
            ((1, 4), "-(2*s/r)*e6"),
            ((2, 3), "(2*s/r)*e6"),
            ((1, 5), "-(2*s/r)*e3 PM (2/(r*s))*e4"),
            ((2, 5), "MP(2/(r*s))*e3 - (2*s/r)*e4"),
            ((3, 5), "-(2*s/r)*e1 MP (2/(r*s))*e2"),
            ((4, 5), "PM(2/(r*s))*e1 - (2*s/r)*e2"),
        ];
        for i in 1..=6 {
            for j in i + 1..=6 {
                let want = expect.iter().find(|(k, _)| *k == (i, j)).map_or(Form::zero(m.coframe()), |(_, t)| f(&m, sign, t));
                assert_eq!(c[i - 1][j - 1], want, "C {i} {j}");
                assert_eq!(c[j - 1][i - 1], -&want);
            }
        }
    }
}

#[test]
fn chern_connection_and_curvature() {
    for sign in SIGNS {
        let m = model(sign);
        let conn = chern(&m).unwrap();
        let sigma = [
            ((1, 3), "-(s/r)*e5"),
            ((2, 4), "-(s/r)*e5"),
            ((1, 4), "(s/r)*e6"),
            ((2, 3), "-(s/r)*e6"),
            ((1, 5), "MP(1/(r*s))*e4"),
            ((2, 6), "MP(1/(r*s))*e4"),
            ((1, 6), "MP(1/(r*s))*e3"),
            ((2, 5), "PM(1/(r*s))*e3"),
            ((3, 5), "PM(1/(r*s))*e2"),
            ((4, 6), "PM(1/(r*s))*e2"),
            ((3, 6), "PM(1/(r*s))*e1"),
            ((4, 5), "MP(1/(r*s))*e1"),
        ];
        for i in 1..=6 {
            for j in i + 1..=6 {
                let want = sigma.iter().find(|(k, _)| *k == (i, j)).map_or(Form::zero(m.coframe()), |(_, t)| f(&m, sign, t));
                assert_eq!(conn.sigma[i - 1][j - 1], want, "sigma {i} {j}");
            }
        }
        assert!(su3_connection_check(&conn).passes());

        let omega = curvature(&conn, &m.equations).unwrap();
        let o12 = f(&m, sign, "-(2/(r**2*s**2))*(e3^e4 + s**4*e5^e6)");
        let o34 = f(&m, sign, "-(2/(r**2*s**2))*(e1^e2 - s**4*e5^e6)");
        let curv = [
            ((1, 2), o12.clone()),
            ((1, 3), f(&m, sign, "-(1/(r**2*s**2))*(e1^e3 + e2^e4)")),
            ((2, 4), f(&m, sign, "-(1/(r**2*s**2))*(e1^e3 + e2^e4)")),
            ((1, 4), f(&m, sign, "PM(2/r**2)*(e1^e3 + e2^e4) + (1/(r**2*s**2))*(e1^e4 - e2^e3)")),
            ((2, 3), f(&m, sign, "MP(2/r**2)*(e1^e3 + e2^e4) - (1/(r**2*s**2))*(e1^e4 - e2^e3)")),
            ((1, 5), f(&m, sign, "PM(1/r**2)*(e1^e6 - e2^e5)")),
            ((2, 6), f(&m, sign, "PM(1/r**2)*(e1^e6 - e2^e5)")),
            ((1, 6), f(&m, sign, "MP(1/r**2)*(e1^e5 + e2^e6)")),
            ((2, 5), f(&m, sign, "PM(1/r**2)*(e1^e5 + e2^e6)")),
            ((3, 4), o34.clone()),
            ((3, 5), f(&m, sign, "MP(1/r**2)*(e3^e6 - e4^e5)")),
            ((4, 6), f(&m, sign, "MP(1/r**2)*(e3^e6 - e4^e5)")),
            ((3, 6), f(&m, sign, "PM(1/r**2)*(e3^e5 + e4^e6)")),
            ((4, 5), f(&m, sign, "MP(1/r**2)*(e3^e5 + e4^e6)")),
            ((5, 6), -&(&o12 + &o34)),
        ];
        for ((i, j), want) in curv {
            assert_eq!(omega.entry(i - 1, j - 1), &want, "Omega {i} {j}");
        }
        let (_, p1) = pontrjagin_trace(&omega);
        assert_eq!(p1, f(&m, sign, "-(2/(pi2*r**4))*(e1^e2^e3^e4 + e1^e2^e5^e6)"));
    }
}

#[test]
fn instanton_family_curvature_and_p1() {
    let lm = |n: &str| Coefficient::var(n);
    for sign in SIGNS {
        let m = model(sign);
        let a = instanton_family(m.coframe(), &lm("lambda"), &lm("mu"), &lm("tau"));
        assert!(su3_connection_check(&a).passes());
        let omega = curvature(&a, &m.equations).unwrap();
        // Ω = τ·de⁶, so the sign follows the complex structure.
        let plus = f(&m, sign, "PM(2*tau/(r*s))*(e1^e3 + e2^e4)");
        for i in 1..=6 {
            for j in i + 1..=6 {
                let want = match (i, j) {
                    (2, 3) | (2, 5) | (4, 5) => -&plus,
                    (5, 6) => plus.scale(&Coefficient::int(-2)),
                    _ => plus.clone(),
                };
                assert_eq!(omega.entry(i - 1, j - 1), &want, "Omega {i} {j}");
            }
        }
        assert!(instanton_check(&omega, &m.j).passes());
        let (_, p1) = pontrjagin_trace(&omega);
        assert_eq!(p1, f(&m, sign, "(-18*tau**2/(pi2*r**2*s**2))*e1^e2^e3^e4"));

        let rules = RuleSet::single("tau", nilform::parse::coefficient("(s**4 - 1)/(9*r**2*s**2)", &["r", "s"]).unwrap()).unwrap();
        let (_, p1c) = pontrjagin_trace(&curvature(&chern(&m).unwrap(), &m.equations).unwrap());
        let rhs = (&p1c - &p1).apply_rules(&rules);
        let k = f(&m, sign, "4*pi2*r**2*s**2").coefficient(nilform::exterior::Blade::ONE);
        assert_eq!(m.dt(), rhs.scale(&k));
    }
}
