//! Exact evaluation of symbolic results at seeded random rational points.
//!
//! A symbolic identity is re-derived from specialized inputs and compared
//! with the specialization of the symbolic answer. Rule variables stay
//! symbolic; their rules are specialized along with everything else.

use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::coeffield::{Assignment, RuleSet, Var};
use crate::error::{Error, Result};
use crate::exterior::Form;

pub const DEFAULT_SEED: u64 = 0x6e69_6c66;
pub const DEFAULT_SAMPLES: usize = 3;
const MAX_ATTEMPTS: usize = 64;

/// Nonzero rationals `n/d` with `1 ≤ |n| ≤ 12`, `1 ≤ d ≤ 7`.
pub struct Sampler {
    rng: ChaCha8Rng,
}

impl Sampler {
    pub fn new(seed: u64) -> Self {
        Self { rng: ChaCha8Rng::seed_from_u64(seed) }
    }

    pub fn rational(&mut self) -> BigRational {
        let n: i64 = self.rng.gen_range(1..=12);
        let n = if self.rng.gen_bool(0.5) { -n } else { n };
        let d: i64 = self.rng.gen_range(1..=7);
        BigRational::new(BigInt::from(n), BigInt::from(d))
    }

    /// Uniform index below `n`.
    pub fn index(&mut self, n: usize) -> usize {
        self.rng.gen_range(0..n)
    }

    /// `k` distinct indices below `n`, increasing.
    pub fn subset(&mut self, n: usize, k: usize) -> Vec<usize> {
        let mut v = rand::seq::index::sample(&mut self.rng, n, k).into_vec();
        v.sort_unstable();
        v
    }

    pub fn assignment<'a>(&mut self, vars: impl IntoIterator<Item = &'a Var>) -> Assignment {
        let mut a = Assignment::new();
        for v in vars {
            a.set(v.name(), self.rational());
        }
        a
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NumericSample {
    pub assignment: Assignment,
    /// `None` on agreement, otherwise the difference.
    pub mismatch: Option<Form>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NumericReport {
    pub samples: Vec<NumericSample>,
    /// Points skipped because some denominator vanished there.
    pub skipped: usize,
}

impl NumericReport {
    pub fn passes(&self) -> bool {
        !self.samples.is_empty() && self.samples.iter().all(|s| s.mismatch.is_none())
    }

    pub fn mismatches(&self) -> usize {
        self.samples.iter().filter(|s| s.mismatch.is_some()).count()
    }
}

impl fmt::Display for NumericReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for s in &self.samples {
            match &s.mismatch {
                None => writeln!(f, "numeric {}: agree", s.assignment)?,
                Some(d) => writeln!(f, "numeric {}: differ by {d}", s.assignment)?,
            }
        }
        write!(f, "numeric cross-check: {} ({} of {} points agree)", if self.passes() { "pass" } else { "fail" }, self.samples.len() - self.mismatches(), self.samples.len())
    }
}

/// Errors caused by a sample point hitting a vanishing denominator.
pub fn is_degenerate(e: &Error) -> bool {
    matches!(e, Error::EvalDivisionByZero | Error::DegenerateParameters(_) | Error::ZeroDenominator | Error::SingularMap | Error::SingularTransformation)
}

/// Compares `symbolic` with `recompute(a, rules|a)` at `count` points over
/// `vars` (rule variables excluded). Points where either side hits a
/// vanishing denominator are skipped and redrawn.
pub fn cross_check(
    symbolic: &Form,
    rules: &RuleSet,
    vars: &[Var],
    count: usize,
    seed: u64,
    mut recompute: impl FnMut(&Assignment, &RuleSet) -> Result<Form>,
) -> Result<NumericReport> {
    let vars: Vec<Var> = vars.iter().copied().filter(|v| !rules.is_rule_var(*v)).collect();
    let mut sampler = Sampler::new(seed);
    let mut samples = Vec::new();
    let mut skipped = 0;
    for _ in 0..MAX_ATTEMPTS {
        if samples.len() == count {
            break;
        }
        let a = sampler.assignment(&vars);
        let attempt = (|| {
            let r = rules.specialize(&a)?;
            let want = symbolic.specialize(&a)?.apply_rules(&r);
            let got = recompute(&a, &r)?.apply_rules(&r);
            Ok::<_, Error>((got, want))
        })();
        match attempt {
            Ok((got, want)) => {
                let mismatch = (got != want).then(|| &got - &want);
                samples.push(NumericSample { assignment: a, mismatch });
            }
            Err(e) if is_degenerate(&e) => skipped += 1,
            Err(e) => return Err(e),
        }
    }
    Ok(NumericReport { samples, skipped })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::coeffield::Coefficient;
    use crate::exterior::Coframe;

    #[test]
    fn seeded_and_nonzero() {
        let vars = [Var::new("r"), Var::new("s")];
        let a = Sampler::new(7).assignment(&vars);
        let b = Sampler::new(7).assignment(&vars);
        assert_eq!(a, b);
        assert!(a.iter().all(|(_, q)| *q != BigRational::from_integer(0.into())));
    }

    #[test]
    fn detects_disagreement() {
        let cf = Coframe::standard_real();
        let x = Form::term(&cf, crate::exterior::Blade::generator(0), Coefficient::var("r"));
        let vars = [Var::new("r")];
        let ok = cross_check(&x, &RuleSet::new(), &vars, 3, 1, |a, _| x.specialize(a)).unwrap();
        assert!(ok.passes());
        let bad = cross_check(&x, &RuleSet::new(), &vars, 3, 1, |a, _| Ok(x.specialize(a)?.scale(&Coefficient::int(2)))).unwrap();
        assert_eq!(bad.mismatches(), 3);
    }
}
