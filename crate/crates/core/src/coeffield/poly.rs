//! Sparse multivariate polynomials over the Gaussian rationals.
//!
//! Variables are interned names compared by their spelling, so two
//! polynomials built independently always agree on the variable order.
//! Monomials are ordered graded-lexicographically; the leading term of a
//! polynomial is the last entry of its term map.

use std::cmp::Ordering;
use std::collections::{BTreeMap, BTreeSet, HashSet};
use std::fmt;
use std::sync::Mutex;

use num_traits::{One, Zero};
use smallvec::SmallVec;

use super::gauss::GaussRational;

/// An interned parameter name.
#[derive(Clone, Copy, PartialEq, Eq, Hash)]
pub struct Var(&'static str);

static INTERNER: Mutex<Option<HashSet<&'static str>>> = Mutex::new(None);

impl Var {
    pub fn new(name: &str) -> Var {
        let mut guard = INTERNER.lock().unwrap_or_else(|e| e.into_inner());
        let set = guard.get_or_insert_with(HashSet::new);
        if let Some(s) = set.get(name) {
            return Var(s);
        }
        let leaked: &'static str = Box::leak(name.to_string().into_boxed_str());
        set.insert(leaked);
        Var(leaked)
    }

    pub fn name(&self) -> &'static str {
        self.0
    }
}

impl PartialOrd for Var {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Var {
    fn cmp(&self, other: &Self) -> Ordering {
        if std::ptr::eq(self.0, other.0) {
            Ordering::Equal
        } else {
            self.0.cmp(other.0)
        }
    }
}

impl fmt::Debug for Var {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.0)
    }
}

impl fmt::Display for Var {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.0)
    }
}

/// Power product with strictly increasing variables and positive exponents.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct Monomial(SmallVec<[(Var, u32); 4]>);

impl Monomial {
    pub fn one() -> Self {
        Monomial(SmallVec::new())
    }

    pub fn var(v: Var, e: u32) -> Self {
        if e == 0 {
            return Self::one();
        }
        let mut s = SmallVec::new();
        s.push((v, e));
        Monomial(s)
    }

    pub fn is_one(&self) -> bool {
        self.0.is_empty()
    }

    pub fn degree(&self) -> u32 {
        self.0.iter().map(|(_, e)| e).sum()
    }

    pub fn exponent(&self, v: Var) -> u32 {
        self.0.iter().find(|(w, _)| *w == v).map_or(0, |(_, e)| *e)
    }

    pub fn factors(&self) -> impl Iterator<Item = &(Var, u32)> {
        self.0.iter()
    }

    pub fn mul(&self, o: &Monomial) -> Monomial {
        let (a, b) = (&self.0, &o.0);
        let mut out = SmallVec::with_capacity(a.len() + b.len());
        let (mut i, mut j) = (0, 0);
        while i < a.len() && j < b.len() {
            match a[i].0.cmp(&b[j].0) {
                Ordering::Less => {
                    out.push(a[i]);
                    i += 1;
                }
                Ordering::Greater => {
                    out.push(b[j]);
                    j += 1;
                }
                Ordering::Equal => {
                    out.push((a[i].0, a[i].1 + b[j].1));
                    i += 1;
                    j += 1;
                }
            }
        }
        out.extend_from_slice(&a[i..]);
        out.extend_from_slice(&b[j..]);
        Monomial(out)
    }

    /// `self / o` when `o` divides `self`.
    pub fn div(&self, o: &Monomial) -> Option<Monomial> {
        let mut out = SmallVec::with_capacity(self.0.len());
        let mut j = 0;
        for &(v, e) in self.0.iter() {
            if j < o.0.len() && o.0[j].0 < v {
                return None;
            }
            if j < o.0.len() && o.0[j].0 == v {
                let f = o.0[j].1;
                j += 1;
                match e.cmp(&f) {
                    Ordering::Less => return None,
                    Ordering::Equal => continue,
                    Ordering::Greater => out.push((v, e - f)),
                }
            } else {
                out.push((v, e));
            }
        }
        if j < o.0.len() {
            return None;
        }
        Some(Monomial(out))
    }

    /// Componentwise minimum of exponents.
    pub fn gcd(&self, o: &Monomial) -> Monomial {
        let mut out = SmallVec::new();
        for &(v, e) in self.0.iter() {
            let f = o.exponent(v);
            if f > 0 {
                out.push((v, e.min(f)));
            }
        }
        Monomial(out)
    }

    /// Removes `v` from the monomial, returning its former exponent.
    fn split_off(&self, v: Var) -> (u32, Monomial) {
        let mut out = SmallVec::new();
        let mut e = 0;
        for &(w, f) in self.0.iter() {
            if w == v {
                e = f;
            } else {
                out.push((w, f));
            }
        }
        (e, Monomial(out))
    }

    fn lex_cmp(&self, o: &Monomial) -> Ordering {
        let (a, b) = (&self.0, &o.0);
        let (mut i, mut j) = (0, 0);
        loop {
            match (a.get(i), b.get(j)) {
                (None, None) => return Ordering::Equal,
                (Some(_), None) => return Ordering::Greater,
                (None, Some(_)) => return Ordering::Less,
                (Some((va, ea)), Some((vb, eb))) => match va.cmp(vb) {
                    Ordering::Equal => {
                        if ea != eb {
                            return ea.cmp(eb);
                        }
                        i += 1;
                        j += 1;
                    }
                    Ordering::Less => return Ordering::Greater,
                    Ordering::Greater => return Ordering::Less,
                },
            }
        }
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Monomial {
    /// Graded lexicographic order.
    fn cmp(&self, other: &Self) -> Ordering {
        self.degree().cmp(&other.degree()).then_with(|| self.lex_cmp(other))
    }
}

impl fmt::Debug for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl fmt::Display for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return f.write_str("1");
        }
        for (k, (v, e)) in self.0.iter().enumerate() {
            if k > 0 {
                f.write_str("*")?;
            }
            if *e == 1 {
                write!(f, "{v}")?;
            } else {
                write!(f, "{v}**{e}")?;
            }
        }
        Ok(())
    }
}

#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct Poly {
    terms: BTreeMap<Monomial, GaussRational>,
}

impl Poly {
    pub fn zero() -> Self {
        Self { terms: BTreeMap::new() }
    }

    pub fn one() -> Self {
        Self::constant(GaussRational::one())
    }

    pub fn constant(c: GaussRational) -> Self {
        Self::term(c, Monomial::one())
    }

    pub fn var(v: Var) -> Self {
        Self::term(GaussRational::one(), Monomial::var(v, 1))
    }

    pub fn term(c: GaussRational, m: Monomial) -> Self {
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(m, c);
        }
        Self { terms }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.terms.len() == 1
            && self.terms.first_key_value().is_some_and(|(m, c)| m.is_one() && c.is_one())
    }

    pub fn is_constant(&self) -> bool {
        self.terms.keys().all(Monomial::is_one)
    }

    pub fn constant_value(&self) -> Option<GaussRational> {
        match self.terms.len() {
            0 => Some(GaussRational::zero()),
            1 => self.terms.get(&Monomial::one()).cloned(),
            _ => None,
        }
    }

    pub fn is_monomial(&self) -> bool {
        self.terms.len() == 1
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    /// Terms in ascending graded-lex order.
    pub fn terms(&self) -> impl DoubleEndedIterator<Item = (&Monomial, &GaussRational)> {
        self.terms.iter()
    }

    pub fn leading(&self) -> Option<(&Monomial, &GaussRational)> {
        self.terms.last_key_value()
    }

    pub fn leading_coeff(&self) -> GaussRational {
        self.leading().map_or_else(GaussRational::zero, |(_, c)| c.clone())
    }

    pub fn total_degree(&self) -> u32 {
        self.terms.keys().map(Monomial::degree).max().unwrap_or(0)
    }

    pub fn vars(&self) -> BTreeSet<Var> {
        self.terms.keys().flat_map(|m| m.factors().map(|(v, _)| *v)).collect()
    }

    pub fn contains_var(&self, v: Var) -> bool {
        self.terms.keys().any(|m| m.exponent(v) > 0)
    }

    pub fn degree_in(&self, v: Var) -> u32 {
        self.terms.keys().map(|m| m.exponent(v)).max().unwrap_or(0)
    }

    fn add_term(&mut self, m: Monomial, c: GaussRational) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(m) {
            std::collections::btree_map::Entry::Vacant(e) => {
                e.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut e) => {
                *e.get_mut() += &c;
                if e.get().is_zero() {
                    e.remove();
                }
            }
        }
    }

    pub fn add(&self, o: &Poly) -> Poly {
        let (mut out, other) = if self.len() >= o.len() { (self.clone(), o) } else { (o.clone(), self) };
        for (m, c) in &other.terms {
            out.add_term(m.clone(), c.clone());
        }
        out
    }

    pub fn sub(&self, o: &Poly) -> Poly {
        let mut out = self.clone();
        for (m, c) in &o.terms {
            out.add_term(m.clone(), -c);
        }
        out
    }

    pub fn neg(&self) -> Poly {
        Poly { terms: self.terms.iter().map(|(m, c)| (m.clone(), -c)).collect() }
    }

    pub fn mul(&self, o: &Poly) -> Poly {
        if self.is_zero() || o.is_zero() {
            return Poly::zero();
        }
        if let Some(c) = o.constant_value() {
            return self.scale(&c);
        }
        if let Some(c) = self.constant_value() {
            return o.scale(&c);
        }
        let mut out = Poly::zero();
        for (ma, ca) in &self.terms {
            for (mb, cb) in &o.terms {
                out.add_term(ma.mul(mb), ca * cb);
            }
        }
        out
    }

    pub fn scale(&self, c: &GaussRational) -> Poly {
        if c.is_zero() {
            return Poly::zero();
        }
        if c.is_one() {
            return self.clone();
        }
        Poly { terms: self.terms.iter().map(|(m, d)| (m.clone(), d * c)).collect() }
    }

    pub fn mul_monomial(&self, m: &Monomial) -> Poly {
        Poly { terms: self.terms.iter().map(|(n, c)| (n.mul(m), c.clone())).collect() }
    }

    pub fn pow(&self, mut e: u32) -> Poly {
        let mut base = self.clone();
        let mut acc = Poly::one();
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&base);
            }
            e >>= 1;
            if e > 0 {
                base = base.mul(&base);
            }
        }
        acc
    }

    pub fn conj(&self) -> Poly {
        Poly { terms: self.terms.iter().map(|(m, c)| (m.clone(), c.conj())).collect() }
    }

    pub fn is_real(&self) -> bool {
        self.terms.values().all(GaussRational::is_real)
    }

    /// Divides by the leading coefficient.
    pub fn monic(&self) -> Poly {
        match self.leading() {
            None => Poly::zero(),
            Some((_, c)) if c.is_one() => self.clone(),
            Some((_, c)) => {
                let inv = c.inv().expect("nonzero leading coefficient");
                self.scale(&inv)
            }
        }
    }

    /// Componentwise-minimal monomial dividing every term.
    pub fn monomial_content(&self) -> Monomial {
        let mut it = self.terms.keys();
        let Some(first) = it.next() else { return Monomial::one() };
        let mut g = first.clone();
        for m in it {
            if g.is_one() {
                break;
            }
            g = g.gcd(m);
        }
        g
    }

    pub fn div_monomial(&self, m: &Monomial) -> Option<Poly> {
        let mut terms = BTreeMap::new();
        for (n, c) in &self.terms {
            terms.insert(n.div(m)?, c.clone());
        }
        Some(Poly { terms })
    }

    /// Exact quotient `self / d`, or `None` when `d` does not divide `self`.
    pub fn div_exact(&self, d: &Poly) -> Option<Poly> {
        let (lm_d, lc_d) = d.leading()?;
        if self.is_zero() {
            return Some(Poly::zero());
        }
        if let Some(c) = d.constant_value() {
            return Some(self.scale(&c.inv()?));
        }
        if d.is_monomial() {
            return self.div_monomial(lm_d).map(|p| p.scale(&lc_d.inv().expect("nonzero")));
        }
        let lc_inv = lc_d.inv().expect("nonzero leading coefficient");
        let mut rem = self.clone();
        let mut q = Poly::zero();
        while let Some((lm_r, lc_r)) = rem.leading() {
            let m = lm_r.div(lm_d)?;
            let c = lc_r * &lc_inv;
            for (n, e) in &d.terms {
                rem.add_term(n.mul(&m), -(&c * e));
            }
            q.add_term(m, c);
        }
        Some(q)
    }

    /// Coefficient of `v^k`, as a polynomial free of `v`.
    pub fn coeff_of(&self, v: Var, k: u32) -> Poly {
        let mut out = Poly::zero();
        for (m, c) in &self.terms {
            let (e, rest) = m.split_off(v);
            if e == k {
                out.terms.insert(rest, c.clone());
            }
        }
        out
    }

    /// Splits into coefficients of powers of `v` (index = power).
    pub fn coeffs_in(&self, v: Var) -> Vec<Poly> {
        let deg = self.degree_in(v) as usize;
        let mut out = vec![Poly::zero(); deg + 1];
        for (m, c) in &self.terms {
            let (e, rest) = m.split_off(v);
            out[e as usize].terms.insert(rest, c.clone());
        }
        out
    }

    pub fn eval(&self, values: &dyn Fn(Var) -> Option<GaussRational>) -> Result<GaussRational, Var> {
        let mut acc = GaussRational::zero();
        for (m, c) in &self.terms {
            let mut t = c.clone();
            for (v, e) in m.factors() {
                let x = values(*v).ok_or(*v)?;
                t = &t * &x.pow(*e);
            }
            acc += &t;
        }
        Ok(acc)
    }

    /// Substitutes a constant for one variable.
    pub fn substitute(&self, v: Var, value: &GaussRational) -> Poly {
        let mut out = Poly::zero();
        for (m, c) in &self.terms {
            let (e, rest) = m.split_off(v);
            out.add_term(rest, c * &value.pow(e));
        }
        out
    }

    fn primitive_part_in(&self, v: Var) -> Poly {
        let content = self.content_in(v);
        self.div_exact(&content).expect("content divides")
    }

    /// Gcd of the coefficients with respect to `v`.
    fn content_in(&self, v: Var) -> Poly {
        let mut g = Poly::zero();
        for c in self.coeffs_in(v) {
            if c.is_zero() {
                continue;
            }
            g = if g.is_zero() { c.monic() } else { g.gcd(&c) };
            if g.is_one() {
                break;
            }
        }
        g
    }

    /// Pseudo-remainder of `self` by `d` with respect to `v`.
    fn pseudo_rem(&self, d: &Poly, v: Var) -> Poly {
        let dd = d.degree_in(v);
        let lc_d = d.coeff_of(v, dd);
        let mut r = self.clone();
        while !r.is_zero() {
            let dr = r.degree_in(v);
            if dr < dd {
                break;
            }
            let lc_r = r.coeff_of(v, dr);
            let shift = Monomial::var(v, dr - dd);
            r = r.mul(&lc_d).sub(&d.mul(&lc_r).mul_monomial(&shift));
        }
        r
    }

    /// Monic greatest common divisor.
    pub fn gcd(&self, o: &Poly) -> Poly {
        if self.is_zero() {
            return o.monic();
        }
        if o.is_zero() {
            return self.monic();
        }
        if self.is_constant() || o.is_constant() {
            return Poly::one();
        }
        if self == o {
            return self.monic();
        }
        let ma = self.monomial_content();
        let mb = o.monomial_content();
        let g0 = ma.gcd(&mb);
        let a = self.div_monomial(&ma).expect("content divides");
        let b = o.div_monomial(&mb).expect("content divides");
        let g0p = Poly::term(GaussRational::one(), g0);
        if a.is_constant() || b.is_constant() {
            return g0p;
        }
        let (small, big) = if a.total_degree() <= b.total_degree() { (&a, &b) } else { (&b, &a) };
        if big.div_exact(small).is_some() {
            return small.monic().mul(&g0p);
        }
        let va = a.vars();
        let vb = b.vars();
        let Some(&x) = va.intersection(&vb).next() else {
            return g0p;
        };
        let ca = a.content_in(x);
        let cb = b.content_in(x);
        let c = ca.gcd(&cb);
        let pa = a.div_exact(&ca).expect("content divides");
        let pb = b.div_exact(&cb).expect("content divides");
        let (mut u, mut w) = if pa.degree_in(x) >= pb.degree_in(x) { (pa, pb) } else { (pb, pa) };
        loop {
            let r = u.pseudo_rem(&w, x);
            if r.is_zero() {
                break;
            }
            if r.degree_in(x) == 0 {
                w = Poly::one();
                break;
            }
            u = w;
            w = r.primitive_part_in(x);
        }
        let g = if w.is_one() { w } else { w.primitive_part_in(x) };
        g.mul(&c).mul(&g0p).monic()
    }
}

impl fmt::Debug for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl fmt::Display for Poly {
    /// Terms in descending graded-lex order, e.g. `2*r**2*s - s + 1`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return f.write_str("0");
        }
        for (k, (m, c)) in self.terms.iter().rev().enumerate() {
            let negative = c.is_real() && c.re < num_rational::BigRational::zero()
                || c.re.is_zero() && c.im < num_rational::BigRational::zero();
            let mag = if negative { -c } else { c.clone() };
            if k == 0 {
                if negative {
                    f.write_str("-")?;
                }
            } else {
                f.write_str(if negative { " - " } else { " + " })?;
            }
            if m.is_one() {
                write!(f, "{mag}")?;
            } else if mag.is_one() {
                write!(f, "{m}")?;
            } else {
                write!(f, "{mag}*{m}")?;
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn v(n: &str) -> Poly {
        Poly::var(Var::new(n))
    }
    fn k(n: i64) -> Poly {
        Poly::constant(GaussRational::from_int(n))
    }

    #[test]
    fn grlex_order() {
        let r = Var::new("r");
        let s = Var::new("s");
        let r2 = Monomial::var(r, 2);
        let rs = Monomial::var(r, 1).mul(&Monomial::var(s, 1));
        let s2 = Monomial::var(s, 2);
        let s3 = Monomial::var(s, 3);
        assert!(r2 > rs && rs > s2 && s3 > r2);
    }

    #[test]
    fn gcd_cancels_common_factor() {
        let s = v("s");
        let num = s.pow(4).sub(&k(1));
        let den = s.pow(2).sub(&k(1));
        assert_eq!(num.gcd(&den), den);
        let q = num.div_exact(&den).unwrap();
        assert_eq!(q, s.pow(2).add(&k(1)));
    }

    #[test]
    fn gcd_multivariate() {
        let (p, q, r) = (v("p"), v("q"), v("r"));
        let f = p.mul(&p).sub(&q.mul(&q));
        let a = f.mul(&r).mul(&p.add(&k(2)));
        let b = f.mul(&q.add(&r)).mul(&p);
        assert_eq!(a.gcd(&b), f.monic());
        let c = p.add(&q);
        assert_eq!(a.gcd(&c.mul(&r).mul(&r)), c.mul(&r).monic());
    }

    #[test]
    fn gcd_coprime_is_one() {
        let (p, q) = (v("p"), v("q"));
        assert!(p.add(&k(1)).gcd(&q.sub(&k(1))).is_one());
        assert!(p.mul(&q).add(&k(1)).gcd(&p.sub(&q)).is_one());
    }

    #[test]
    fn display_orders_terms() {
        let (r, s) = (v("r"), v("s"));
        let p = r.pow(2).mul(&s).scale(&GaussRational::from_int(2)).sub(&s).add(&k(1));
        assert_eq!(p.to_string(), "2*r**2*s - s + 1");
    }

    #[test]
    fn exact_division_rejects_non_divisor() {
        let (p, q) = (v("p"), v("q"));
        assert!(p.mul(&p).add(&q).div_exact(&p.add(&q)).is_none());
    }
}
