//! The anomaly cancellation condition `dT = M·(p₁(∇) − p₁(A))` and the full
//! Strominger system report.

use std::fmt;

use num_traits::Zero;

use crate::coeffield::{Assignment, Coefficient, GaussRational, RuleSet, Var, PI2};
use crate::complexgeom::{check_balanced, SU3Model};
use crate::connections::{
    bismut, chern, curvature, instanton_check, pontrjagin_trace, su3_connection_check, su3_curvature_check, Connection,
    InstantonReport, Su3ConnectionReport,
};
use crate::error::{Error, Result};
use crate::exterior::Form;

/// `α′` evaluated at one sample point.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PositivitySample {
    pub assignment: Assignment,
    pub value: GaussRational,
}

impl PositivitySample {
    pub fn positive(&self) -> bool {
        self.value.is_real() && self.value.re > Zero::zero()
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AnomalySolution {
    /// `M` with `dT = M·(p₁(∇) − p₁(A))`.
    pub multiplier: Coefficient,
    /// `M/(2·pi2)`.
    pub alpha_prime: Coefficient,
    pub residual: Form,
    pub positivity: Vec<PositivitySample>,
}

impl AnomalySolution {
    /// Evaluates `α′` at each sample and records the values.
    pub fn with_samples(mut self, samples: &[Assignment]) -> Result<Self> {
        for a in samples {
            let value = self.alpha_prime.eval(a)?;
            self.positivity.push(PositivitySample { assignment: a.clone(), value });
        }
        Ok(self)
    }

    pub fn positive_at_samples(&self) -> bool {
        self.positivity.iter().all(PositivitySample::positive)
    }
}

impl fmt::Display for AnomalySolution {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "M = {}", self.multiplier)?;
        write!(f, "alpha' = {}", self.alpha_prime)?;
        for s in &self.positivity {
            write!(f, "\nalpha' at {} = {} ({})", s.assignment, s.value, if s.positive() { "positive" } else { "not positive" })?;
        }
        Ok(())
    }
}

/// Finds `M` from the first nonzero component of `p₁∇ − p₁A` and checks
/// the remaining components after applying `rules`.
pub fn solve_anomaly(dt: &Form, p1_nabla: &Form, p1_a: &Form, rules: &RuleSet) -> Result<AnomalySolution> {
    let diff = p1_nabla.checked_add(&-p1_a)?.apply_rules(rules);
    if dt.coframe() != diff.coframe() {
        return Err(Error::CoframeMismatch);
    }
    let dt = dt.apply_rules(rules);
    let Some((blade, d)) = diff.terms().next() else {
        return Err(Error::ZeroDifference);
    };
    let multiplier = rules.apply(&dt.coefficient(blade).checked_div(d)?);
    let residual = (&dt - &diff.scale(&multiplier)).apply_rules(rules);
    if !residual.is_zero() {
        return Err(Error::NotProportional(format!("multiplier {multiplier} leaves residual {residual}")));
    }
    let alpha_prime = rules.apply(&multiplier.checked_div(&(&Coefficient::int(2) * &Coefficient::var(PI2)))?);
    if alpha_prime.contains_var(Var::new(PI2)) {
        return Err(Error::NotProportional(format!("alpha' = {alpha_prime} depends on {PI2}")));
    }
    Ok(AnomalySolution { multiplier, alpha_prime, residual, positivity: Vec::new() })
}

/// Verdicts on the four conditions of the Strominger system.
#[derive(Clone, Debug)]
pub struct StromingerReport {
    /// (a) the Bismut curvature takes values in su(3).
    pub bismut_su3: Su3ConnectionReport,
    /// (b) balanced, i.e. vanishing Lee form.
    pub lee_form: Form,
    pub f_wedge_df: Form,
    /// (c) `A` is an su(3) connection with su(3) curvature.
    pub connection_su3: Su3ConnectionReport,
    pub instanton: InstantonReport,
    pub flat_instanton: bool,
    /// (d) anomaly cancellation with respect to the Chern connection.
    pub anomaly: Result<AnomalySolution>,
}

impl StromingerReport {
    pub fn bismut_passes(&self) -> bool {
        self.bismut_su3.passes()
    }

    pub fn balanced_passes(&self) -> bool {
        self.lee_form.is_zero() && self.f_wedge_df.is_zero()
    }

    pub fn instanton_passes(&self) -> bool {
        self.connection_su3.passes() && self.instanton.passes()
    }

    pub fn anomaly_passes(&self) -> bool {
        matches!(&self.anomaly, Ok(s) if s.positive_at_samples())
    }

    pub fn passes(&self) -> bool {
        self.bismut_passes() && self.balanced_passes() && self.instanton_passes() && self.anomaly_passes()
    }
}

fn verdict(ok: bool) -> &'static str {
    if ok {
        "pass"
    } else {
        "fail"
    }
}

impl fmt::Display for StromingerReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "(a) Bismut curvature in su(3), holonomy side: {}", verdict(self.bismut_passes()))?;
        writeln!(f, "(b) balanced, Lee form zero: {}", verdict(self.balanced_passes()))?;
        if !self.balanced_passes() {
            writeln!(f, "    theta = {}", self.lee_form)?;
        }
        write!(f, "(c) instanton: {}", verdict(self.instanton_passes()))?;
        if self.instanton_passes() && self.flat_instanton {
            write!(f, " (flat)")?;
        }
        writeln!(f)?;
        if !self.connection_su3.passes() {
            writeln!(f, "    connection does not preserve F and Psi")?;
        }
        if !self.instanton.trace_free() {
            writeln!(f, "    curvature not trace-free")?;
        }
        if !self.instanton.j_invariant() {
            writeln!(f, "    curvature not J-invariant")?;
        }
        writeln!(f, "(d) anomaly cancellation: {}", verdict(self.anomaly_passes()))?;
        match &self.anomaly {
            Ok(s) => {
                for line in s.to_string().lines() {
                    writeln!(f, "    {line}")?;
                }
            }
            Err(e) => writeln!(f, "    {e}")?,
        }
        write!(f, "overall: {}", verdict(self.passes()))
    }
}

pub fn strominger_report(m: &SU3Model, a: &Connection, rules: &RuleSet, samples: &[Assignment]) -> Result<StromingerReport> {
    let m = m.apply_rules(rules);
    let a = a.apply_rules(rules);
    let bismut_curv = curvature(&bismut(&m)?, &m.equations)?.apply_rules(rules);
    let bismut_su3 = su3_curvature_check(&bismut_curv);
    let lee_form = m.lee_form().apply_rules(rules);
    let f_wedge_df = check_balanced(&m.equations, &m.f, rules)?.f_wedge_df;
    let connection_su3 = su3_connection_check(&a);
    let omega_a = curvature(&a, &m.equations)?.apply_rules(rules);
    let instanton = instanton_check(&omega_a, &m.j);
    let flat_instanton = omega_a.is_zero();
    let (_, p1c) = pontrjagin_trace(&curvature(&chern(&m)?, &m.equations)?.apply_rules(rules));
    let (_, p1a) = pontrjagin_trace(&omega_a);
    let anomaly = solve_anomaly(&m.dt(), &p1c, &p1a, rules).and_then(|s| s.with_samples(samples));
    Ok(StromingerReport { bismut_su3, lee_form, f_wedge_df, connection_su3, instanton, flat_instanton, anomaly })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exterior::Coframe;

    #[test]
    fn proportional_and_not() {
        let cf = Coframe::standard_real();
        let e = |i: &[usize], c: i64| Form::monomial(&cf, i, Coefficient::int(c));
        let pi2 = Coefficient::var(PI2);
        let p1 = e(&[0, 1, 2, 3], 1).scale(&pi2.inv().unwrap());
        let dt = e(&[0, 1, 2, 3], 6);
        let s = solve_anomaly(&dt, &p1, &Form::zero(&cf), &RuleSet::new()).unwrap();
        assert_eq!(s.multiplier, &Coefficient::int(6) * &pi2);
        assert_eq!(s.alpha_prime, Coefficient::int(3));
        let dt2 = &dt + &e(&[0, 1, 4, 5], 1);
        assert!(matches!(solve_anomaly(&dt2, &p1, &Form::zero(&cf), &RuleSet::new()), Err(Error::NotProportional(_))));
        assert_eq!(solve_anomaly(&dt, &p1, &p1, &RuleSet::new()), Err(Error::ZeroDifference));
    }
}
