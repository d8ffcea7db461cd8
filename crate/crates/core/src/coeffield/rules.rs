//! Square-reduction rules `x**2 -> f`, where `f` is free of every rule variable.

use std::fmt;

use super::{Assignment, Coefficient, Poly, Var};
use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Rule {
    pub var: Var,
    pub replacement: Coefficient,
}

impl fmt::Display for Rule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}**2 -> {}", self.var, self.replacement)
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct RuleSet {
    rules: Vec<Rule>,
}

impl RuleSet {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn single(name: &str, replacement: Coefficient) -> Result<Self> {
        let mut r = Self::new();
        r.add(name, replacement)?;
        Ok(r)
    }

    pub fn add(&mut self, name: &str, replacement: Coefficient) -> Result<()> {
        let var = Var::new(name);
        if self.rules.iter().any(|r| r.var == var) {
            return Err(Error::DuplicateRule(name.into()));
        }
        if replacement.contains_var(var) || self.rules.iter().any(|r| replacement.contains_var(r.var)) {
            return Err(Error::RuleCycle(name.into()));
        }
        if self.rules.iter().any(|r| r.replacement.contains_var(var)) {
            return Err(Error::RuleCycle(name.into()));
        }
        self.rules.push(Rule { var, replacement });
        Ok(())
    }

    pub fn is_empty(&self) -> bool {
        self.rules.is_empty()
    }

    pub fn rules(&self) -> &[Rule] {
        &self.rules
    }

    /// Substitutes assigned parameters into every replacement. Rule
    /// variables themselves must stay unassigned.
    pub fn specialize(&self, a: &Assignment) -> Result<Self> {
        let mut out = Self::new();
        for r in &self.rules {
            if a.get(r.var).is_some() {
                return Err(Error::InvalidModel(format!("rule variable `{}` cannot be assigned", r.var)));
            }
            out.rules.push(Rule { var: r.var, replacement: r.replacement.specialize(a)? });
        }
        Ok(out)
    }

    pub fn is_rule_var(&self, v: Var) -> bool {
        self.rules.iter().any(|r| r.var == v)
    }

    /// Reduces every rule variable to degree at most one and clears rule
    /// variables from the denominator by multiplying with the conjugate
    /// `D0 - D1·x`, so the result is canonical modulo the rule relations.
    pub fn apply(&self, c: &Coefficient) -> Coefficient {
        if self.rules.is_empty() || !self.rules.iter().any(|r| c.contains_var(r.var)) {
            return c.clone();
        }
        let mut cur = c.clone();
        loop {
            let n = self.reduce_poly(cur.numer());
            let d = self.reduce_poly(cur.denom());
            cur = match n.checked_div(&d) {
                Ok(q) => q,
                // the relations make the denominator vanish; leave it unreduced
                Err(_) => return cur,
            };
            let Some(rule) = self.rules.iter().find(|r| cur.denom().contains_var(r.var)) else {
                return cur;
            };
            let x = rule.var;
            let parts = cur.denom().coeffs_in(x);
            if parts.len() > 2 {
                continue;
            }
            let conj = parts[0].sub(&parts[1].mul(&Poly::var(x)));
            let norm = Coefficient::from_poly(parts[0].mul(&parts[0]))
                - &Coefficient::from_poly(parts[1].mul(&parts[1])) * &rule.replacement;
            if norm.is_zero() {
                return cur;
            }
            let num = Coefficient::from_poly(cur.numer().mul(&conj));
            cur = &num / &norm;
        }
    }

    fn reduce_poly(&self, p: &Poly) -> Coefficient {
        let mut acc = Coefficient::from_poly(p.clone());
        for rule in &self.rules {
            if acc.numer().degree_in(rule.var) < 2 && acc.denom().degree_in(rule.var) < 2 {
                continue;
            }
            let n = reduce_in(acc.numer(), rule);
            let d = reduce_in(acc.denom(), rule);
            acc = &n / &d;
        }
        acc
    }
}

/// `Σ c_k x^k  ->  Σ c_k f^(k div 2) x^(k mod 2)`
fn reduce_in(p: &Poly, rule: &Rule) -> Coefficient {
    let coeffs = p.coeffs_in(rule.var);
    if coeffs.len() <= 2 {
        return Coefficient::from_poly(p.clone());
    }
    let x = Coefficient::from_poly(Poly::var(rule.var));
    let mut even = Coefficient::zero();
    let mut odd = Coefficient::zero();
    let mut power = Coefficient::one();
    for (k, c) in coeffs.iter().enumerate() {
        if k >= 2 && k % 2 == 0 {
            power = &power * &rule.replacement;
        }
        if c.is_zero() {
            continue;
        }
        let term = &Coefficient::from_poly(c.clone()) * &power;
        if k % 2 == 0 {
            even = &even + &term;
        } else {
            odd = &odd + &term;
        }
    }
    &even + &(&odd * &x)
}

impl fmt::Display for RuleSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for r in &self.rules {
            writeln!(f, "rule: {r}")?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(n: &str) -> Coefficient {
        Coefficient::var(n)
    }

    fn tau_rule() -> RuleSet {
        let (r, s) = (c("r"), c("s"));
        let repl = &(&s.pow(4).unwrap() - &Coefficient::one())
            / &(&Coefficient::int(9) * &(&r.pow(2).unwrap() * &s.pow(2).unwrap()));
        RuleSet::single("tau", repl).unwrap()
    }

    #[test]
    fn direct_substitution() {
        let rules = tau_rule();
        let e = &Coefficient::int(72) * &c("tau").pow(2).unwrap();
        let expect = &(&Coefficient::int(8) * &(&c("s").pow(4).unwrap() - &Coefficient::one()))
            / &(&c("r").pow(2).unwrap() * &c("s").pow(2).unwrap());
        assert_eq!(rules.apply(&e), expect);
    }

    #[test]
    fn odd_power_keeps_one_factor() {
        let rules = tau_rule();
        let e = c("tau").pow(3).unwrap();
        let expect = &c("tau") * &rules.rules()[0].replacement;
        assert_eq!(rules.apply(&e), expect);
    }

    #[test]
    fn absent_variable_untouched() {
        let s2 = c("s").pow(2).unwrap();
        assert_eq!(tau_rule().apply(&s2), s2);
    }

    #[test]
    fn rationalizes_denominator() {
        let rules = RuleSet::single("sqrt2", Coefficient::int(2)).unwrap();
        let e = &Coefficient::one() / &c("sqrt2");
        assert_eq!(rules.apply(&e), &c("sqrt2") / &Coefficient::int(2));
        let e = &(&Coefficient::int(2) * &c("x")) / &(&c("sqrt2") * &c("x"));
        assert_eq!(rules.apply(&e), c("sqrt2"));
    }

    #[test]
    fn cycles_rejected() {
        assert_eq!(RuleSet::single("t", c("t")), Err(Error::RuleCycle("t".into())));
        let mut rs = RuleSet::single("a", c("b")).unwrap();
        assert_eq!(rs.add("b", Coefficient::one()), Err(Error::RuleCycle("b".into())));
        assert_eq!(rs.add("a", Coefficient::one()), Err(Error::DuplicateRule("a".into())));
    }

    #[test]
    fn idempotent() {
        let rules = tau_rule();
        let e = &(&c("tau").pow(5).unwrap() + &c("r")) / &(&c("tau").pow(2).unwrap() + &c("s"));
        let once = rules.apply(&e);
        assert_eq!(rules.apply(&once), once);
        assert!(once.numer().degree_in(Var::new("tau")) < 2);
        assert!(!once.denom().contains_var(Var::new("tau")));
    }
}
