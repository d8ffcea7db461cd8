use std::collections::BTreeSet;
use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use super::gauss::GaussRational;
use super::poly::{Poly, Var};
use super::Assignment;
use crate::error::{Error, Result};

/// A reduced rational function over ℚ(i) in real parameters.
///
/// The denominator is monic with respect to the graded-lex order, so two
/// equal rational functions have identical representations.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Coefficient {
    num: Poly,
    den: Poly,
}

impl Coefficient {
    pub fn zero() -> Self {
        Self { num: Poly::zero(), den: Poly::one() }
    }

    pub fn one() -> Self {
        Self::from_poly(Poly::one())
    }

    pub fn from_poly(p: Poly) -> Self {
        Self { num: p, den: Poly::one() }
    }

    pub fn int(n: i64) -> Self {
        Self::from_poly(Poly::constant(GaussRational::from_int(n)))
    }

    pub fn ratio(n: i64, d: i64) -> Self {
        Self::from_poly(Poly::constant(GaussRational::from_ratio(n, d)))
    }

    pub fn constant(c: GaussRational) -> Self {
        Self::from_poly(Poly::constant(c))
    }

    pub fn i() -> Self {
        Self::constant(GaussRational::i())
    }

    pub fn var(name: &str) -> Self {
        Self::from_poly(Poly::var(Var::new(name)))
    }

    /// Builds `num/den` in lowest terms with a monic denominator.
    pub fn normalize(num: Poly, den: Poly) -> Result<Self> {
        if den.is_zero() {
            return Err(Error::ZeroDenominator);
        }
        if num.is_zero() {
            return Ok(Self::zero());
        }
        if let Some(c) = den.constant_value() {
            let inv = c.inv().expect("nonzero constant");
            return Ok(Self { num: num.scale(&inv), den: Poly::one() });
        }
        let g = num.gcd(&den);
        let (num, den) = if g.is_one() {
            (num, den)
        } else {
            (num.div_exact(&g).expect("gcd divides"), den.div_exact(&g).expect("gcd divides"))
        };
        let lc = den.leading_coeff();
        if lc.is_one() {
            return Ok(Self { num, den });
        }
        let inv = lc.inv().expect("nonzero leading coefficient");
        Ok(Self { num: num.scale(&inv), den: den.scale(&inv) })
    }

    pub fn numer(&self) -> &Poly {
        &self.num
    }

    pub fn denom(&self) -> &Poly {
        &self.den
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    pub fn is_one(&self) -> bool {
        self.den.is_one() && self.num.is_one()
    }

    pub fn is_polynomial(&self) -> bool {
        self.den.is_one()
    }

    pub fn constant_value(&self) -> Option<GaussRational> {
        if self.den.is_one() {
            self.num.constant_value()
        } else {
            None
        }
    }

    pub fn vars(&self) -> BTreeSet<Var> {
        let mut v = self.num.vars();
        v.extend(self.den.vars());
        v
    }

    pub fn contains_var(&self, v: Var) -> bool {
        self.num.contains_var(v) || self.den.contains_var(v)
    }

    /// True when every coefficient is real (the function is fixed by conjugation).
    pub fn is_real(&self) -> bool {
        self.num.is_real() && self.den.is_real()
    }

    pub fn conjugate(&self) -> Self {
        Self { num: self.num.conj(), den: self.den.conj() }
    }

    pub fn checked_div(&self, o: &Coefficient) -> Result<Coefficient> {
        if o.is_zero() {
            return Err(Error::ZeroDenominator);
        }
        let inv = Coefficient { num: o.den.clone(), den: o.num.clone() };
        let inv = if inv.den.leading_coeff().is_one() {
            inv
        } else {
            Self::normalize(inv.num, inv.den)?
        };
        Ok(self * &inv)
    }

    pub fn inv(&self) -> Result<Coefficient> {
        Coefficient::one().checked_div(self)
    }

    pub fn pow(&self, e: i32) -> Result<Coefficient> {
        let base = if e < 0 { self.inv()? } else { self.clone() };
        let n = e.unsigned_abs();
        Ok(Self { num: base.num.pow(n), den: base.den.pow(n) })
    }

    pub fn scale(&self, c: &GaussRational) -> Coefficient {
        if c.is_zero() {
            return Self::zero();
        }
        Self { num: self.num.scale(c), den: self.den.clone() }
    }

    pub fn eval(&self, a: &Assignment) -> Result<GaussRational> {
        let lookup = |v: Var| a.get(v).map(|q| GaussRational::real(q.clone()));
        let n = self.num.eval(&lookup).map_err(|v| Error::UnassignedParameter(v.name().into()))?;
        let d = self.den.eval(&lookup).map_err(|v| Error::UnassignedParameter(v.name().into()))?;
        if d.is_zero() {
            return Err(Error::EvalDivisionByZero);
        }
        Ok(&n / &d)
    }

    /// Substitutes a rational function for `v`.
    pub fn substitute(&self, v: Var, value: &Coefficient) -> Result<Coefficient> {
        if !self.contains_var(v) {
            return Ok(self.clone());
        }
        let n = substitute_poly(&self.num, v, value);
        let d = substitute_poly(&self.den, v, value);
        n.checked_div(&d).map_err(|_| Error::EvalDivisionByZero)
    }

    /// Substitutes every assigned parameter.
    pub fn specialize(&self, a: &Assignment) -> Result<Coefficient> {
        let mut out = self.clone();
        for v in self.vars() {
            if let Some(q) = a.get(v) {
                out = out.substitute(v, &Coefficient::constant(GaussRational::real(q.clone())))?;
            }
        }
        Ok(out)
    }

    /// `√c` when numerator and denominator are monomials with even
    /// exponents and the constant is a positive rational square.
    pub fn monomial_sqrt(&self) -> Option<Coefficient> {
        let root = |p: &Poly| -> Option<Poly> {
            if !p.is_monomial() {
                return None;
            }
            let (m, c) = p.leading()?;
            if !c.is_real() || !c.re.is_positive() {
                return None;
            }
            let (n, d) = (c.re.numer().sqrt(), c.re.denom().sqrt());
            if &(&n * &n) != c.re.numer() || &(&d * &d) != c.re.denom() {
                return None;
            }
            let mut out = Poly::constant(GaussRational::real(BigRational::new(n, d)));
            for (v, e) in m.factors() {
                if e % 2 != 0 {
                    return None;
                }
                out = out.mul(&Poly::var(*v).pow(e / 2));
            }
            Some(out)
        };
        Some(Self::normalize(root(&self.num)?, root(&self.den)?).expect("nonzero root"))
    }

    /// Factor `k` making numerator and denominator integral with no common
    /// integer content.
    fn integral_scale(&self) -> BigRational {
        let all = || self.num.terms().chain(self.den.terms()).map(|(_, c)| c);
        let mut lcm = BigInt::one();
        for c in all() {
            lcm = lcm.lcm(&c.denom_lcm());
        }
        let mut g = BigInt::zero();
        for c in all() {
            let scaled = GaussRational::new(&c.re * &lcm, &c.im * &lcm);
            g = g.gcd(&scaled.numer_gcd());
        }
        BigRational::new(lcm, g)
    }
}

/// Rational content of a polynomial, signed like its leading coefficient
/// when that coefficient is real.
fn signed_content(p: &Poly) -> BigRational {
    let mut num_gcd = BigInt::zero();
    let mut den_lcm = BigInt::one();
    for (_, c) in p.terms() {
        num_gcd = num_gcd.gcd(&c.numer_gcd());
        den_lcm = den_lcm.lcm(&c.denom_lcm());
    }
    if num_gcd.is_zero() {
        return BigRational::one();
    }
    let content = BigRational::new(num_gcd, den_lcm);
    let lc = p.leading_coeff();
    if lc.is_real() && lc.re.is_negative() {
        -content
    } else {
        content
    }
}

fn substitute_poly(p: &Poly, v: Var, value: &Coefficient) -> Coefficient {
    let coeffs = p.coeffs_in(v);
    let mut acc = Coefficient::zero();
    for c in coeffs.iter().rev() {
        acc = &(&acc * value) + &Coefficient::from_poly(c.clone());
    }
    acc
}

fn fmt_poly_factored(p: &Poly) -> String {
    if p.len() < 2 {
        return p.to_string();
    }
    let c = signed_content(p);
    if c.is_one() {
        return p.to_string();
    }
    let inner = p.scale(&GaussRational::real(c.recip()));
    if (-&c).is_one() {
        format!("-({inner})")
    } else {
        format!("{}*({inner})", GaussRational::real(c))
    }
}

impl Coefficient {
    /// Inline text such as `8*s**2/r**2` or `(s**4 - 1)/(9*r**2*s**2)`,
    /// parenthesizing numerator and denominator only when needed.
    pub fn to_compact_string(&self) -> String {
        let k = GaussRational::real(self.integral_scale());
        let num = self.num.scale(&k);
        let den = self.den.scale(&k);
        let ns = fmt_poly_factored(&num);
        if den.is_one() {
            return ns;
        }
        let factored = num.len() > 1 && !signed_content(&num).is_one();
        let ns = if num.len() > 1 && !factored { format!("({ns})") } else { ns };
        let ds = den.to_string();
        let ds = if den.len() > 1 || ds.replace("**", "").contains('*') { format!("({ds})") } else { ds };
        format!("{ns}/{ds}")
    }

    /// True when the leading numerator coefficient has negative real part,
    /// or is negative imaginary.
    pub fn leads_negative(&self) -> bool {
        !self.num.leading_coeff().is_positive_normal()
    }
}

impl fmt::Display for Coefficient {
    /// `num` alone when the denominator is 1, otherwise `(num)/(den)` with
    /// an integral primitive denominator and integer content factored out.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.den.is_one() {
            return f.write_str(&fmt_poly_factored(&self.num));
        }
        let k = GaussRational::real(self.integral_scale());
        let num = self.num.scale(&k);
        let den = self.den.scale(&k);
        write!(f, "({})/({})", fmt_poly_factored(&num), den)
    }
}

impl fmt::Debug for Coefficient {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl<'a> Add<&'a Coefficient> for &'a Coefficient {
    type Output = Coefficient;
    fn add(self, o: &Coefficient) -> Coefficient {
        if self.is_zero() {
            return o.clone();
        }
        if o.is_zero() {
            return self.clone();
        }
        if self.den == o.den {
            let num = self.num.add(&o.num);
            if self.den.is_one() {
                return Coefficient::from_poly(num);
            }
            return Coefficient::normalize(num, self.den.clone()).expect("nonzero denominator");
        }
        // a/1 + b/d is already reduced when b/d is
        if self.den.is_one() {
            return Coefficient { num: self.num.mul(&o.den).add(&o.num), den: o.den.clone() };
        }
        if o.den.is_one() {
            return Coefficient { num: o.num.mul(&self.den).add(&self.num), den: self.den.clone() };
        }
        let g = self.den.gcd(&o.den);
        let (a_co, b_co) = if g.is_one() {
            (o.den.clone(), self.den.clone())
        } else {
            (o.den.div_exact(&g).expect("gcd divides"), self.den.div_exact(&g).expect("gcd divides"))
        };
        let num = self.num.mul(&a_co).add(&o.num.mul(&b_co));
        let den = self.den.mul(&a_co);
        if g.is_one() {
            // coprime denominators leave nothing to cancel
            return Coefficient { num, den };
        }
        Coefficient::normalize(num, den).expect("nonzero denominator")
    }
}

impl<'a> Sub<&'a Coefficient> for &'a Coefficient {
    type Output = Coefficient;
    fn sub(self, o: &Coefficient) -> Coefficient {
        self + &(-o)
    }
}

impl<'a> Mul<&'a Coefficient> for &'a Coefficient {
    type Output = Coefficient;
    fn mul(self, o: &Coefficient) -> Coefficient {
        if self.is_zero() || o.is_zero() {
            return Coefficient::zero();
        }
        if let Some(c) = o.constant_value() {
            return self.scale(&c);
        }
        if let Some(c) = self.constant_value() {
            return o.scale(&c);
        }
        if self.den.is_one() && o.den.is_one() {
            return Coefficient::from_poly(self.num.mul(&o.num));
        }
        let g1 = self.num.gcd(&o.den);
        let g2 = o.num.gcd(&self.den);
        let a_num = self.num.div_exact(&g1).expect("gcd divides");
        let b_den = o.den.div_exact(&g1).expect("gcd divides");
        let b_num = o.num.div_exact(&g2).expect("gcd divides");
        let a_den = self.den.div_exact(&g2).expect("gcd divides");
        let num = a_num.mul(&b_num);
        let den = a_den.mul(&b_den);
        let lc = den.leading_coeff();
        if lc.is_one() {
            Coefficient { num, den }
        } else {
            let inv = lc.inv().expect("nonzero");
            Coefficient { num: num.scale(&inv), den: den.scale(&inv) }
        }
    }
}

impl<'a> Div<&'a Coefficient> for &'a Coefficient {
    type Output = Coefficient;
    /// Panics when dividing by zero; see [`Coefficient::checked_div`].
    fn div(self, o: &Coefficient) -> Coefficient {
        self.checked_div(o).expect("division by zero coefficient")
    }
}

impl Neg for &Coefficient {
    type Output = Coefficient;
    fn neg(self) -> Coefficient {
        Coefficient { num: self.num.neg(), den: self.den.clone() }
    }
}

impl Neg for Coefficient {
    type Output = Coefficient;
    fn neg(self) -> Coefficient {
        -&self
    }
}

macro_rules! forward_owned {
    ($tr:ident, $m:ident) => {
        impl $tr for Coefficient {
            type Output = Coefficient;
            fn $m(self, o: Coefficient) -> Coefficient {
                (&self).$m(&o)
            }
        }
    };
}
forward_owned!(Add, add);
forward_owned!(Sub, sub);
forward_owned!(Mul, mul);
forward_owned!(Div, div);

impl From<i64> for Coefficient {
    fn from(n: i64) -> Self {
        Coefficient::int(n)
    }
}

impl From<GaussRational> for Coefficient {
    fn from(c: GaussRational) -> Self {
        Coefficient::constant(c)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(name: &str) -> Coefficient {
        Coefficient::var(name)
    }

    #[test]
    fn normalize_cancels_gcd() {
        let s = Poly::var(Var::new("s"));
        let one = Poly::one();
        let q = Coefficient::normalize(s.pow(4).sub(&one), s.pow(2).sub(&one)).unwrap();
        assert_eq!(q, Coefficient::from_poly(s.pow(2).add(&one)));
    }

    #[test]
    fn normalize_zero_numerator() {
        let r = Poly::var(Var::new("r"));
        assert!(Coefficient::normalize(Poly::zero(), r).unwrap().is_zero());
    }

    #[test]
    fn normalize_rejects_zero_denominator() {
        assert_eq!(Coefficient::normalize(Poly::one(), Poly::zero()), Err(Error::ZeroDenominator));
    }

    #[test]
    fn already_reduced_fraction() {
        let q = &(&Coefficient::int(2) * &c("s")) / &c("r");
        assert_eq!(q.to_string(), "(2*s)/(r)");
        let again = Coefficient::normalize(q.numer().clone(), q.denom().clone()).unwrap();
        assert_eq!(again, q);
    }

    #[test]
    fn eval_examples() {
        let q = &(&Coefficient::int(2) * &c("s")) / &c("r");
        let a = Assignment::parse_pairs(&["r=2", "s=3"]).unwrap();
        assert_eq!(q.eval(&a).unwrap(), GaussRational::from_int(3));

        let tau2 = c("tau").pow(2).unwrap();
        let e = &(&Coefficient::int(-18) * &tau2) / &(&c("r").pow(2).unwrap() * &c("s").pow(2).unwrap());
        let a = Assignment::parse_pairs(&["r=1", "s=1", "tau=1/3"]).unwrap();
        assert_eq!(e.eval(&a).unwrap(), GaussRational::from_int(-2));

        let ir = &Coefficient::i() * &c("r");
        let a = Assignment::parse_pairs(&["r=5"]).unwrap();
        assert_eq!(ir.eval(&a).unwrap(), &GaussRational::from_int(5) * &GaussRational::i());
    }

    #[test]
    fn eval_errors() {
        let q = &Coefficient::one() / &(&c("r") - &Coefficient::int(1));
        let a = Assignment::parse_pairs(&["r=1"]).unwrap();
        assert_eq!(q.eval(&a), Err(Error::EvalDivisionByZero));
        assert_eq!(q.eval(&Assignment::default()), Err(Error::UnassignedParameter("r".into())));
    }

    #[test]
    fn conjugation() {
        assert_eq!(Coefficient::i().conjugate(), -Coefficient::i());
        let z = &c("r") + &(&Coefficient::i() * &c("s"));
        assert_eq!(z.conjugate(), &c("r") - &(&Coefficient::i() * &c("s")));
        let w = &(&(&Coefficient::one() + &Coefficient::i()) * &c("u")) / &c("s").pow(2).unwrap();
        assert_eq!(w.conjugate().conjugate(), w);
    }

    #[test]
    fn printing() {
        let e = &Coefficient::int(-8) / &(&c("r").pow(2).unwrap() * &c("s").pow(2).unwrap());
        assert_eq!(e.to_string(), "(-8)/(r**2*s**2)");
        let f = &(&c("s").pow(4).unwrap() - &Coefficient::one()) * &Coefficient::int(8);
        assert_eq!(f.to_string(), "8*(s**4 - 1)");
        let h = &Coefficient::one() / &(&Coefficient::int(2) * &c("r"));
        assert_eq!(h.to_string(), "(1)/(2*r)");
    }

    #[test]
    fn negative_power() {
        let r = c("r");
        assert_eq!(r.pow(-2).unwrap(), &Coefficient::one() / &(&r * &r));
        assert_eq!(Coefficient::zero().pow(-1), Err(Error::ZeroDenominator));
    }
}
