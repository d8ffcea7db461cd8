//! Closed forms quoted from the source derivation, as symbolic tables.
//!
//! `PM`/`MP` stand for the sign of the complex structure and its opposite.

use std::sync::Arc;

use crate::coeffield::Coefficient;
use crate::complexgeom::{adapted_family_i, adapted_family_ii, Sign};
use crate::exterior::{Coframe, Form};
use crate::parse::{form, Scope};

use super::{Entry, Table};

pub(crate) const FAMILY_I_PARAMS: [&str; 5] = ["r", "s", "tau", "lambda", "mu"];
pub(crate) const FAMILY_II_PARAMS: [&str; 3] = ["r", "p", "q"];

pub(crate) fn signed(sign: Sign, text: &str) -> String {
    let (pm, mp) = sign.symbols();
    text.replace("PM", pm).replace("MP", mp)
}

struct Parser {
    cf: Arc<Coframe>,
    scope: Scope,
    sign: Sign,
}

impl Parser {
    fn new(params: &[&str], sign: Sign) -> Self {
        let cf = Coframe::standard_real();
        let scope = Scope::new(Some(&cf), params.iter().copied());
        Self { cf, scope, sign }
    }

    fn f(&self, text: &str) -> Form {
        form(&signed(self.sign, text), &self.scope).expect("well-formed closed form")
    }

    /// All 15 upper entries `(i, j)`, 1-based, zero where not listed.
    fn upper(&self, group: &'static str, list: &[((usize, usize), Form)]) -> Vec<Entry> {
        let mut out = Vec::new();
        for i in 1..=6 {
            for j in i + 1..=6 {
                let form = list.iter().find(|(ij, _)| *ij == (i, j)).map_or(Form::zero(&self.cf), |(_, f)| f.clone());
                out.push(Entry { group, slot: (i, j), form });
            }
        }
        out
    }
}

fn single(group: &'static str, form: Form) -> Entry {
    Entry { group, slot: (0, 0), form }
}

fn structure(eqs: &[Form]) -> Vec<Entry> {
    eqs.iter().enumerate().map(|(k, f)| Entry { group: "structure", slot: (k + 1, 0), form: f.clone() }).collect()
}

pub(crate) fn family_i(sign: Sign) -> Table {
    let p = Parser::new(&FAMILY_I_PARAMS, sign);
    let v = Coefficient::var;
    let mut t = structure(adapted_family_i(&v("r"), &v("s"), sign).expect("nonzero symbols").equations.differentials());
    t.push(single("dF", p.f("-(2*s/r)*e1^e4^e5 + (2*s/r)*e2^e3^e5 MP (2/(r*s))*(e1^e3^e5 + e2^e4^e5)")));
    t.push(single("T", p.f("(2*s/r)*e1^e4^e6 - (2*s/r)*e2^e3^e6 PM (2/(r*s))*(e1^e3^e6 + e2^e4^e6)")));
    t.push(single("dT", p.f("-(8/r**2)*((1/s**2)*e1^e2^e3^e4 + s**2*e1^e2^e5^e6)")));

    let c = [
        ((1, 3), "MP(2/(r*s))*e6"),
        ((2, 4), "MP(2/(r*s))*e6"),
        ((1, 4), "-(2*s/r)*e6"),
        ((2, 3), "(2*s/r)*e6"),
        ((1, 5), "-(2*s/r)*e3 PM (2/(r*s))*e4"),
        ((2, 5), "MP(2/(r*s))*e3 - (2*s/r)*e4"),
        ((3, 5), "-(2*s/r)*e1 MP (2/(r*s))*e2"),
        ((4, 5), "PM(2/(r*s))*e1 - (2*s/r)*e2"),
    ];
    t.extend(p.upper("C", &c.map(|(ij, s)| (ij, p.f(s)))));

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
    t.extend(p.upper("sigma", &sigma.map(|(ij, s)| (ij, p.f(s)))));

    let o12 = p.f("-(2/(r**2*s**2))*(e3^e4 + s**4*e5^e6)");
    let o34 = p.f("-(2/(r**2*s**2))*(e1^e2 - s**4*e5^e6)");
    let omega = [
        ((1, 2), o12.clone()),
        ((1, 3), p.f("-(1/(r**2*s**2))*(e1^e3 + e2^e4)")),
        ((2, 4), p.f("-(1/(r**2*s**2))*(e1^e3 + e2^e4)")),
        ((1, 4), p.f("PM(2/r**2)*(e1^e3 + e2^e4) + (1/(r**2*s**2))*(e1^e4 - e2^e3)")),
        ((2, 3), p.f("MP(2/r**2)*(e1^e3 + e2^e4) - (1/(r**2*s**2))*(e1^e4 - e2^e3)")),
        ((1, 5), p.f("PM(1/r**2)*(e1^e6 - e2^e5)")),
        ((2, 6), p.f("PM(1/r**2)*(e1^e6 - e2^e5)")),
        ((1, 6), p.f("MP(1/r**2)*(e1^e5 + e2^e6)")),
        ((2, 5), p.f("PM(1/r**2)*(e1^e5 + e2^e6)")),
        ((3, 4), o34.clone()),
        ((3, 5), p.f("MP(1/r**2)*(e3^e6 - e4^e5)")),
        ((4, 6), p.f("MP(1/r**2)*(e3^e6 - e4^e5)")),
        ((3, 6), p.f("PM(1/r**2)*(e3^e5 + e4^e6)")),
        ((4, 5), p.f("MP(1/r**2)*(e3^e5 + e4^e6)")),
        ((5, 6), -&(&o12 + &o34)),
    ];
    t.extend(p.upper("Omega", &omega));
    t.push(single("p1", p.f("-(2/(pi2*r**4))*(e1^e2^e3^e4 + e1^e2^e5^e6)")));

    // Ω^A = τ·de⁶ entrywise, with the signs of the fixed matrix.
    let plus = p.f("PM(2*tau/(r*s))*(e1^e3 + e2^e4)");
    let mut omega_a = Vec::new();
    for i in 1..=6 {
        for j in i + 1..=6 {
            let f = match (i, j) {
                (2, 3) | (2, 5) | (4, 5) => -&plus,
                (5, 6) => plus.scale(&Coefficient::int(-2)),
                _ => plus.clone(),
            };
            omega_a.push(((i, j), f));
        }
    }
    t.extend(p.upper("OmegaA", &omega_a));
    t.push(single("p1A", p.f("(-18*tau**2/(pi2*r**2*s**2))*e1^e2^e3^e4")));
    t
}

pub(crate) fn family_ii(sign: Sign) -> Table {
    let p = Parser::new(&FAMILY_II_PARAMS, sign);
    let v = Coefficient::var;
    let mut t = structure(adapted_family_ii(&v("r"), &v("p"), &v("q"), sign).expect("distinct symbols").equations.differentials());
    t.push(single("dF", p.f("1/(r*(p**2 - q**2))*(MP(e1^e3^e4 - e1^e5^e6) + 4*p*q*(p**2 + q**2)*e1^e4^e5 PM (p/q)*(e1^e3^e5 + e2^e4^e5) MP (q/p)*(e1^e4^e6 - e2^e4^e5) - 4*p**2*q**2*(e2^e3^e4 - e2^e5^e6) - 4*p*q*(p**2*e2^e3^e5 - q**2*e2^e4^e6))")));
    t.push(single("T", p.f("1/(r*(p**2 - q**2))*(PM(e2^e3^e4 - e2^e5^e6) + 4*p*q*(p**2 + q**2)*e2^e3^e6 MP (p/q)*(e1^e3^e6 + e2^e4^e6) PM (q/p)*(e2^e3^e5 - e1^e3^e6) - 4*p**2*q**2*(e1^e3^e4 - e1^e5^e6) - 4*p*q*(p**2*e1^e4^e6 - q**2*e1^e3^e5))")));
    t.push(single("dT", p.f("(-2*(p**2 + q**2))/(r**2*p**2*q**2*(p**2 - q**2)**2)*((1 + 16*p**2*q**6)*p**2*e1^e2^e3^e4 + (1 + 16*p**4*q**4)*p*q*(e1^e2^e3^e5 + e1^e2^e4^e6) + (1 + 16*p**6*q**2)*q**2*e1^e2^e5^e6)")));

    let k = "1/(r*(p**2 - q**2))";
    let c = [
        ((1, 3), "PM e3 PM (p/q)*e6"),
        ((1, 4), "PM e4 PM (q/p)*e5 + 4*p*q*(p**2 + q**2)*e6"),
        ((1, 5), "4*p*q*(p**2 + q**2)*e3 MP (p/q)*e4 MP e5"),
        ((1, 6), "MP (q/p)*e3 MP e6"),
        ((2, 3), "4*p**2*q**2*e3 - 4*p**3*q*e6"),
        ((2, 4), "4*p**2*q**2*e4 - 4*p*q**3*e5 PM ((p**2 + q**2)/(p*q))*e6"),
        ((2, 5), "PM ((p**2 + q**2)/(p*q))*e3 + 4*p**3*q*e4 - 4*p**2*q**2*e5"),
        ((2, 6), "4*p*q**3*e3 - 4*p**2*q**2*e6"),
        ((3, 4), "4*p**2*q**2*e1 MP e2"),
        ((3, 5), "4*p**3*q*e1 PM (p/q)*e2"),
        ((4, 5), "MP ((p**2 + q**2)/(p*q))*e1 + 4*p*q*(p**2 + q**2)*e2"),
        ((4, 6), "-4*p*q**3*e1 MP (q/p)*e2"),
        ((5, 6), "-4*p**2*q**2*e1 PM e2"),
    ];
    t.extend(p.upper("C", &c.map(|(ij, s)| (ij, p.f(&format!("{k}*({s})"))))));

    let h = "1/(2*r*(p**2 - q**2))";
    let a = format!("{h}*(PM e3 + 4*p**2*q**2*e4 + 4*p**3*q*e5 MP (q/p)*e6)");
    let b = format!("{h}*(4*p**2*q**2*e3 MP e4 MP (q/p)*e5 - 4*p**3*q*e6)");
    let cc = format!("{h}*(-4*p*q**3*e3 PM (p/q)*e4 PM e5 + 4*p**2*q**2*e6)");
    let d = format!("{h}*(PM (p/q)*e3 + 4*p*q**3*e4 + 4*p**2*q**2*e5 MP e6)");
    let e = "PM (1/(r*(p**2 - q**2)))*e2".to_string();
    let g = "MP (1/(2*r*p*q))*e2".to_string();
    let kk = "MP ((p**2 + q**2)/(2*r*p*q*(p**2 - q**2)))*e1".to_string();
    let neg = |t: &str| format!("-({t})");
    let sigma = [
        ((1, 3), a.clone()),
        ((2, 4), a),
        ((1, 4), b.clone()),
        ((2, 3), neg(&b)),
        ((1, 5), cc.clone()),
        ((2, 6), cc),
        ((1, 6), d.clone()),
        ((2, 5), neg(&d)),
        ((3, 4), e.clone()),
        ((5, 6), neg(&e)),
        ((3, 5), g.clone()),
        ((4, 6), g),
        ((3, 6), kk.clone()),
        ((4, 5), neg(&kk)),
    ];
    t.extend(p.upper("sigma", &sigma.map(|(ij, s)| (ij, p.f(&s)))));

    let g = "1/(r**2*(p**2 - q**2)**2)";
    let o12 = format!("-{g}*((p**2 + q**2)*(1 + 16*p**2*q**6)/(2*q**2)*e3^e4 + (p**2 + q**2)*(1 + 16*p**6*q**2)/(2*p**2)*e5^e6 + (p**2 + q**2)*(1 + 16*p**4*q**4)/(2*p*q)*(e3^e5 + e4^e6) PM 4*p*q*(p**2 - q**2)*(e3^e6 - e4^e5))");
    let o13 = format!("-{g}*((p**2 + q**2)/(4*q**2)*(e1^e3 + e2^e4) PM q**2*(3*p**2 - q**2)*(e1^e4 - e2^e3) PM p*q*(3*p**2 - q**2)*(e1^e5 + e2^e6) - (p**2 + q**2)/(4*p*q)*(e1^e6 - e2^e5))");
    let o14 = format!("{g}*(PM (2*p**4 - 3*p**2*q**2 - q**4)*(e1^e3 + e2^e4) + (p**2 + q**2)/(4*q**2)*(e1^e4 - e2^e3) + (p**2 + q**2)/(4*p*q)*(e1^e5 + e2^e6) MP p*q*(p**2 - 3*q**2)*(e1^e6 - e2^e5))");
    let o15 = format!("{g}*(MP p*q*(3*p**2 - q**2)*(e1^e3 + e2^e4) + (p**2 + q**2)/(4*p*q)*(e1^e4 - e2^e3) + (p**2 + q**2)/(4*p**2)*(e1^e5 + e2^e6) PM (p**4 + 3*p**2*q**2 - 2*q**4)*(e1^e6 - e2^e5))");
    let o16 = format!("{g}*((p**2 + q**2)/(4*p*q)*(e1^e3 + e2^e4) MP p*q*(p**2 - 3*q**2)*(e1^e4 - e2^e3) MP p**2*(p**2 - 3*q**2)*(e1^e5 + e2^e6) - (p**2 + q**2)/(4*p**2)*(e1^e6 - e2^e5))");
    let o34 = format!("-{g}*((p**4 - q**4)/(2*p**2*q**2)*e1^e2 - (1 + 16*p**4*q**4)/2*e3^e4 - q**2*(1 + 16*p**8)/(2*p**2)*e5^e6 - q*(1 + 16*p**6*q**2)/(2*p)*(e3^e5 + e4^e6) MP 2*p*q*(p**2 - q**2)*(e3^e6 - e4^e5))");
    let o35 = format!("-{g}*((p**2 + q**2)/(p*q)*e1^e2 + p*(1 + 16*p**2*q**6)/(2*q)*e3^e4 + q*(1 + 16*p**6*q**2)/(2*p)*e5^e6 + (1 + 16*p**4*q**4)/2*(e3^e5 + e4^e6) PM (p**4 - q**4)*(e3^e6 - e4^e5))");
    let o36 = "PM 1/(r**2*(p**2 - q**2))*(2*p*q*(e3^e4 + e5^e6) + (p**2 + q**2)*(e3^e5 + e4^e6))".to_string();
    let omega = [
        ((1, 2), o12.clone()),
        ((1, 3), o13.clone()),
        ((2, 4), o13),
        ((1, 4), o14.clone()),
        ((2, 3), neg(&o14)),
        ((1, 5), o15.clone()),
        ((2, 6), o15),
        ((1, 6), o16.clone()),
        ((2, 5), neg(&o16)),
        ((3, 4), o34.clone()),
        ((3, 5), o35.clone()),
        ((4, 6), o35),
        ((3, 6), o36.clone()),
        ((4, 5), neg(&o36)),
        ((5, 6), format!("-({o12}) - ({o34})")),
    ];
    t.extend(p.upper("Omega", &omega.map(|(ij, s)| (ij, p.f(&s)))));
    t.push(single("p1", p.f("(-2*(p**2 + q**2))/(pi2*r**4*(p**2 - q**2)**2)*((p**2 + q**2)*(e1^e2^e3^e4 + e1^e2^e5^e6) + 2*p*q*(e1^e2^e3^e5 + e1^e2^e4^e6))")));
    t
}
