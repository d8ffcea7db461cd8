//! Exact scalars: Gaussian rationals, polynomials and rational functions
//! in real parameters, square-reduction rules and rational evaluation.

mod coefficient;
mod gauss;
mod poly;
mod rules;

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;

pub use coefficient::Coefficient;
pub use gauss::GaussRational;
pub use poly::{Monomial, Poly, Var};
pub use rules::{Rule, RuleSet};

use crate::error::{Error, Result};

/// Reserved parameter standing for π².
pub const PI2: &str = "pi2";

/// Rational values for real parameters.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Assignment {
    values: BTreeMap<Var, BigRational>,
}

impl Assignment {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn set(&mut self, name: &str, value: BigRational) {
        self.values.insert(Var::new(name), value);
    }

    pub fn with(mut self, name: &str, num: i64, den: i64) -> Self {
        self.set(name, BigRational::new(BigInt::from(num), BigInt::from(den)));
        self
    }

    pub fn get(&self, v: Var) -> Option<&BigRational> {
        self.values.get(&v)
    }

    pub fn iter(&self) -> impl Iterator<Item = (Var, &BigRational)> {
        self.values.iter().map(|(v, q)| (*v, q))
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    /// Parses `name=p/q` or `name=n`.
    pub fn parse_pair(&mut self, text: &str) -> Result<()> {
        let bad = || Error::Parse { line: 1, column: 1, message: format!("expected name=p/q, got `{text}`") };
        let (name, value) = text.split_once('=').ok_or_else(bad)?;
        let name = name.trim();
        if name.is_empty() || !name.chars().all(|c| c.is_alphanumeric() || c == '_') {
            return Err(bad());
        }
        let value = value.trim();
        let q = match value.split_once('/') {
            Some((n, d)) => {
                let n: BigInt = n.trim().parse().map_err(|_| bad())?;
                let d: BigInt = d.trim().parse().map_err(|_| bad())?;
                if d == BigInt::from(0) {
                    return Err(Error::ZeroDenominator);
                }
                BigRational::new(n, d)
            }
            None => BigRational::from_integer(value.parse().map_err(|_| bad())?),
        };
        self.set(name, q);
        Ok(())
    }

    pub fn parse_pairs(pairs: &[&str]) -> Result<Self> {
        let mut a = Self::new();
        for p in pairs {
            a.parse_pair(p)?;
        }
        Ok(a)
    }
}

impl fmt::Display for Assignment {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.values.iter().map(|(v, q)| format!("{v}={q}")).collect();
        write!(f, "{{{}}}", parts.join(", "))
    }
}
