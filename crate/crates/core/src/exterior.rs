//! The exterior algebra on a rank-6 coframe.
//!
//! A real coframe has six named generators. A complex coframe has three
//! named (1,0)-generators `w1, w2, w3` followed by their conjugates
//! `~w1, ~w2, ~w3`, so both kinds index generators `0..6` and share the
//! same bitmask representation of basis monomials.

use std::cmp::Ordering;
use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::ops::{Add, BitXor, Mul, Neg, Sub};
use std::sync::Arc;

use crate::coeffield::{Assignment, Coefficient, RuleSet, Var};
use crate::error::{Error, Result};

pub const RANK: usize = 6;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum CoframeKind {
    Real,
    Complex,
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Coframe {
    kind: CoframeKind,
    names: Vec<String>,
}

impl Coframe {
    pub fn real(names: &[&str]) -> Result<Arc<Self>> {
        Self::new(CoframeKind::Real, names.iter().map(|s| s.to_string()).collect())
    }

    pub fn complex(names: &[&str]) -> Result<Arc<Self>> {
        Self::new(CoframeKind::Complex, names.iter().map(|s| s.to_string()).collect())
    }

    pub fn new(kind: CoframeKind, names: Vec<String>) -> Result<Arc<Self>> {
        let expected = match kind {
            CoframeKind::Real => RANK,
            CoframeKind::Complex => RANK / 2,
        };
        if names.len() != expected {
            return Err(Error::InvalidModel(format!(
                "{} coframe needs {expected} generators, got {}",
                if kind == CoframeKind::Real { "real" } else { "complex" },
                names.len()
            )));
        }
        for (k, n) in names.iter().enumerate() {
            if names[..k].contains(n) {
                return Err(Error::DuplicateGenerator(n.clone()));
            }
        }
        Ok(Arc::new(Self { kind, names }))
    }

    /// `e1, …, e6`
    pub fn standard_real() -> Arc<Self> {
        Self::real(&["e1", "e2", "e3", "e4", "e5", "e6"]).expect("valid coframe")
    }

    /// `w1, w2, w3` and conjugates.
    pub fn standard_complex() -> Arc<Self> {
        Self::complex(&["w1", "w2", "w3"]).expect("valid coframe")
    }

    pub fn kind(&self) -> CoframeKind {
        self.kind
    }

    pub fn is_real(&self) -> bool {
        self.kind == CoframeKind::Real
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    /// Number of generators whose differentials are stored (6 real, 3 complex).
    pub fn independent_generators(&self) -> usize {
        self.names.len()
    }

    pub fn generator_name(&self, idx: usize) -> String {
        match self.kind {
            CoframeKind::Real => self.names[idx].clone(),
            CoframeKind::Complex if idx < 3 => self.names[idx].clone(),
            CoframeKind::Complex => format!("~{}", self.names[idx - 3]),
        }
    }

    pub fn index_of(&self, name: &str) -> Option<usize> {
        match self.kind {
            CoframeKind::Real => self.names.iter().position(|n| n == name),
            CoframeKind::Complex => match name.strip_prefix('~') {
                Some(base) => self.names.iter().position(|n| n == base).map(|i| i + 3),
                None => self.names.iter().position(|n| n == name),
            },
        }
    }

    /// Index of the conjugate generator (identity on real coframes).
    pub fn conjugate_index(&self, idx: usize) -> usize {
        match self.kind {
            CoframeKind::Real => idx,
            CoframeKind::Complex => (idx + 3) % 6,
        }
    }
}

/// A basis monomial `g^{i1} ∧ … ∧ g^{ik}` with `i1 < … < ik`, as a bitmask.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug)]
pub struct Blade(pub u8);

impl Blade {
    pub const ONE: Blade = Blade(0);

    pub fn from_indices(idx: &[usize]) -> Option<(i32, Blade)> {
        let mut b = Blade::ONE;
        let mut sign = 1;
        for &i in idx {
            let (s, nb) = b.wedge(Blade(1 << i))?;
            sign *= s;
            b = nb;
        }
        Some((sign, b))
    }

    pub fn generator(i: usize) -> Blade {
        Blade(1 << i)
    }

    pub fn degree(self) -> usize {
        self.0.count_ones() as usize
    }

    pub fn contains(self, i: usize) -> bool {
        self.0 & (1 << i) != 0
    }

    pub fn indices(self) -> impl Iterator<Item = usize> {
        (0..RANK).filter(move |i| self.contains(*i))
    }

    /// Sign and product, or `None` when the blades share a generator.
    pub fn wedge(self, o: Blade) -> Option<(i32, Blade)> {
        if self.0 & o.0 != 0 {
            return None;
        }
        let mut swaps = 0u32;
        for j in o.indices() {
            swaps += (self.0 >> (j + 1)).count_ones();
        }
        Some((if swaps % 2 == 0 { 1 } else { -1 }, Blade(self.0 | o.0)))
    }

    pub fn complement(self) -> Blade {
        Blade(!self.0 & 0b11_1111)
    }
}

impl PartialOrd for Blade {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Blade {
    /// Degree first, then the index tuples lexicographically.
    fn cmp(&self, other: &Self) -> Ordering {
        self.degree().cmp(&other.degree()).then_with(|| self.indices().cmp(other.indices()))
    }
}

/// Sparse element of the exterior algebra; mixed degrees allowed.
#[derive(Clone, PartialEq, Eq)]
pub struct Form {
    coframe: Arc<Coframe>,
    terms: BTreeMap<Blade, Coefficient>,
}

impl Form {
    pub fn zero(coframe: &Arc<Coframe>) -> Self {
        Self { coframe: coframe.clone(), terms: BTreeMap::new() }
    }

    pub fn scalar(coframe: &Arc<Coframe>, c: Coefficient) -> Self {
        Self::term(coframe, Blade::ONE, c)
    }

    pub fn term(coframe: &Arc<Coframe>, b: Blade, c: Coefficient) -> Self {
        let mut f = Self::zero(coframe);
        f.add_term(b, c);
        f
    }

    pub fn generator(coframe: &Arc<Coframe>, i: usize) -> Self {
        Self::term(coframe, Blade::generator(i), Coefficient::one())
    }

    /// `c · g^{i1} ∧ … ∧ g^{ik}` for arbitrary (possibly unsorted) indices.
    pub fn monomial(coframe: &Arc<Coframe>, idx: &[usize], c: Coefficient) -> Self {
        match Blade::from_indices(idx) {
            Some((sign, b)) => Self::term(coframe, b, if sign < 0 { -c } else { c }),
            None => Self::zero(coframe),
        }
    }

    pub fn coframe(&self) -> &Arc<Coframe> {
        &self.coframe
    }

    pub fn terms(&self) -> impl Iterator<Item = (Blade, &Coefficient)> {
        self.terms.iter().map(|(b, c)| (*b, c))
    }

    pub fn coefficient(&self, b: Blade) -> Coefficient {
        self.terms.get(&b).cloned().unwrap_or_else(Coefficient::zero)
    }

    /// Coefficient of the basis monomial with the given indices (sign-adjusted).
    pub fn component(&self, idx: &[usize]) -> Coefficient {
        match Blade::from_indices(idx) {
            Some((sign, b)) => {
                let c = self.coefficient(b);
                if sign < 0 {
                    -c
                } else {
                    c
                }
            }
            None => Coefficient::zero(),
        }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    /// The common degree of all terms; `None` for mixed degrees. Zero has degree `Some(0)`.
    pub fn degree(&self) -> Option<usize> {
        let mut it = self.terms.keys().map(|b| b.degree());
        let first = it.next().unwrap_or(0);
        it.all(|d| d == first).then_some(first)
    }

    pub fn homogeneous_degree(&self) -> Result<usize> {
        self.degree().ok_or(Error::NonHomogeneous)
    }

    pub fn add_term(&mut self, b: Blade, c: Coefficient) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(b) {
            std::collections::btree_map::Entry::Vacant(e) => {
                e.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut e) => {
                let sum = e.get() + &c;
                if sum.is_zero() {
                    e.remove();
                } else {
                    *e.get_mut() = sum;
                }
            }
        }
    }

    fn check_same(&self, o: &Form) -> Result<()> {
        if Arc::ptr_eq(&self.coframe, &o.coframe) || self.coframe == o.coframe {
            Ok(())
        } else {
            Err(Error::CoframeMismatch)
        }
    }

    pub fn checked_add(&self, o: &Form) -> Result<Form> {
        self.check_same(o)?;
        let mut out = self.clone();
        for (b, c) in &o.terms {
            out.add_term(*b, c.clone());
        }
        Ok(out)
    }

    pub fn wedge(&self, o: &Form) -> Result<Form> {
        self.check_same(o)?;
        let mut out = Form::zero(&self.coframe);
        for (ba, ca) in &self.terms {
            for (bb, cb) in &o.terms {
                if let Some((sign, b)) = ba.wedge(*bb) {
                    let c = ca * cb;
                    out.add_term(b, if sign < 0 { -c } else { c });
                }
            }
        }
        Ok(out)
    }

    pub fn scale(&self, c: &Coefficient) -> Form {
        if c.is_zero() {
            return Form::zero(&self.coframe);
        }
        if c.is_one() {
            return self.clone();
        }
        self.map_coefficients(|x| x * c)
    }

    pub fn map_coefficients(&self, mut f: impl FnMut(&Coefficient) -> Coefficient) -> Form {
        let mut out = Form::zero(&self.coframe);
        for (b, c) in &self.terms {
            out.add_term(*b, f(c));
        }
        out
    }

    pub fn try_map_coefficients(&self, mut f: impl FnMut(&Coefficient) -> Result<Coefficient>) -> Result<Form> {
        let mut out = Form::zero(&self.coframe);
        for (b, c) in &self.terms {
            out.add_term(*b, f(c)?);
        }
        Ok(out)
    }

    pub fn apply_rules(&self, rules: &RuleSet) -> Form {
        if rules.is_empty() {
            return self.clone();
        }
        self.map_coefficients(|c| rules.apply(c))
    }

    pub fn specialize(&self, a: &Assignment) -> Result<Form> {
        self.try_map_coefficients(|c| c.specialize(a))
    }

    /// Complex conjugation: conjugates coefficients and, on complex
    /// coframes, swaps each generator with its conjugate.
    pub fn conjugate(&self) -> Form {
        let mut out = Form::zero(&self.coframe);
        for (b, c) in &self.terms {
            let idx: Vec<usize> = b.indices().map(|i| self.coframe.conjugate_index(i)).collect();
            let (sign, nb) = Blade::from_indices(&idx).expect("conjugation is a bijection");
            let c = c.conjugate();
            out.add_term(nb, if sign < 0 { -c } else { c });
        }
        out
    }

    /// Substitutes each generator `g^i` by `images[i]` (forms on `target`).
    pub fn pullback(&self, images: &[Form], target: &Arc<Coframe>) -> Form {
        let mut out = Form::zero(target);
        let mut cache: BTreeMap<Blade, Form> = BTreeMap::new();
        for (b, c) in &self.terms {
            let img = cache
                .entry(*b)
                .or_insert_with(|| {
                    b.indices().fold(Form::scalar(target, Coefficient::one()), |acc, i| {
                        acc.wedge(&images[i]).expect("images share the target coframe")
                    })
                })
                .scale(c);
            for (nb, nc) in img.terms {
                out.add_term(nb, nc);
            }
        }
        out
    }

    pub fn apply_j(&self, j: &JAction) -> Result<Form> {
        if !self.coframe.is_real() {
            return Err(Error::ComplexCoframe);
        }
        self.homogeneous_degree()?;
        let images: Vec<Form> = (0..RANK).map(|i| j.image(&self.coframe, i)).collect();
        Ok(self.pullback(&images, &self.coframe))
    }

    /// Hodge star for the orthonormal coframe with `e^{123456}` positive.
    pub fn hodge_star(&self) -> Result<Form> {
        if !self.coframe.is_real() {
            return Err(Error::ComplexCoframe);
        }
        self.homogeneous_degree()?;
        let mut out = Form::zero(&self.coframe);
        for (b, c) in &self.terms {
            let comp = b.complement();
            let (sign, _) = b.wedge(comp).expect("disjoint");
            out.add_term(comp, if sign < 0 { -c } else { c.clone() });
        }
        Ok(out)
    }

    /// Value on frame vectors `e_{j1}, …, e_{jk}` (determinant convention).
    pub fn evaluate_on_frame(&self, vectors: &[usize]) -> Result<Coefficient> {
        let k = vectors.len();
        if let Some(bad) = self.terms.keys().find(|b| b.degree() != k) {
            return Err(Error::DegreeMismatch { expected: bad.degree(), got: k });
        }
        Ok(self.component(vectors))
    }

    /// Value on arbitrary vectors given by their frame components.
    pub fn evaluate_on_vectors(&self, vectors: &[Vec<Coefficient>]) -> Result<Coefficient> {
        let k = vectors.len();
        if let Some(bad) = self.terms.keys().find(|b| b.degree() != k) {
            return Err(Error::DegreeMismatch { expected: bad.degree(), got: k });
        }
        let mut acc = Coefficient::zero();
        for (b, c) in &self.terms {
            let rows: Vec<usize> = b.indices().collect();
            let det = minor_det(vectors, &rows);
            if !det.is_zero() {
                acc = &acc + &(c * &det);
            }
        }
        Ok(acc)
    }

    /// Restricts to the terms of one degree.
    pub fn part_of_degree(&self, k: usize) -> Form {
        let mut out = Form::zero(&self.coframe);
        for (b, c) in &self.terms {
            if b.degree() == k {
                out.terms.insert(*b, c.clone());
            }
        }
        out
    }

    /// Canonical text with a common factor pulled out: the first
    /// coefficient, except that a variable whose exponent changes sign
    /// across terms stays inside, e.g. `(-8/r**2)*((1/s**2)*e1^e2 + s**2*e3^e4)`.
    pub fn display_factored(&self) -> String {
        let Some((_, lead)) = self.terms.iter().next() else { return "0".into() };
        if self.terms.len() == 1 {
            return self.to_string();
        }
        let vars: BTreeSet<Var> = self.terms.values().flat_map(Coefficient::vars).collect();
        let mut factor = lead.clone();
        for x in vars {
            let vals: Vec<i32> = self.terms.values().map(|c| valuation(c, x)).collect();
            let keep = if vals.iter().all(|&e| e >= 0) {
                *vals.iter().min().expect("terms")
            } else if vals.iter().all(|&e| e <= 0) {
                *vals.iter().max().expect("terms")
            } else {
                0
            };
            factor = &factor * &Coefficient::var(x.name()).pow(keep - valuation(lead, x)).expect("nonzero variable");
        }
        if factor.is_one() {
            return self.to_string();
        }
        let inner = self.scale(&factor.inv().expect("nonzero"));
        format!("{}*({inner})", paren_coefficient(&factor))
    }

    fn blade_name(&self, b: Blade) -> String {
        if b == Blade::ONE {
            return "1".into();
        }
        b.indices().map(|i| self.coframe.generator_name(i)).collect::<Vec<_>>().join("^")
    }
}

/// Exponent of `x` in the monomial content of `c`, negative for the denominator.
fn valuation(c: &Coefficient, x: Var) -> i32 {
    c.numer().monomial_content().exponent(x) as i32 - c.denom().monomial_content().exponent(x) as i32
}

fn paren_coefficient(c: &Coefficient) -> String {
    let s = c.to_compact_string();
    if s.contains(' ') || s.contains('/') || s.starts_with('-') {
        format!("({s})")
    } else {
        s
    }
}

fn minor_det(vectors: &[Vec<Coefficient>], rows: &[usize]) -> Coefficient {
    let k = rows.len();
    if k == 0 {
        return Coefficient::one();
    }
    // Laplace expansion along the first vector
    let mut acc = Coefficient::zero();
    for (pos, &r) in rows.iter().enumerate() {
        let entry = &vectors[0][r];
        if entry.is_zero() {
            continue;
        }
        let rest_rows: Vec<usize> = rows.iter().copied().filter(|&x| x != r).collect();
        let sub = minor_det(&vectors[1..], &rest_rows);
        if sub.is_zero() {
            continue;
        }
        let t = entry * &sub;
        acc = if pos % 2 == 0 { &acc + &t } else { &acc - &t };
    }
    acc
}

impl fmt::Display for Form {
    /// `e1^e2 - 2*s*e1^e5 + (-8/r**2)*e3^e4`-style canonical text: terms by
    /// degree then index tuple, fractional or compound coefficients
    /// parenthesized with their sign.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return f.write_str("0");
        }
        for (k, (b, c)) in self.terms.iter().enumerate() {
            let name = self.blade_name(*b);
            let mag = -c;
            let text = if *b == Blade::ONE {
                let s = c.to_compact_string();
                if s.contains(' ') { format!("({s})") } else { s }
            } else if c.is_one() {
                name
            } else if mag.is_one() {
                format!("-{name}")
            } else if c.leads_negative() && !paren_coefficient(&mag).starts_with('(') {
                format!("-{}*{name}", paren_coefficient(&mag))
            } else {
                format!("{}*{name}", paren_coefficient(c))
            };
            match text.strip_prefix('-') {
                Some(rest) if k > 0 => write!(f, " - {rest}")?,
                _ if k > 0 => write!(f, " + {text}")?,
                _ => f.write_str(&text)?,
            }
        }
        Ok(())
    }
}

impl fmt::Debug for Form {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl<'a> Add<&'a Form> for &'a Form {
    type Output = Form;
    /// Panics on coframe mismatch; see [`Form::checked_add`].
    fn add(self, o: &Form) -> Form {
        self.checked_add(o).expect("coframe mismatch")
    }
}

impl<'a> Sub<&'a Form> for &'a Form {
    type Output = Form;
    fn sub(self, o: &Form) -> Form {
        self.checked_add(&-o).expect("coframe mismatch")
    }
}

impl Neg for &Form {
    type Output = Form;
    fn neg(self) -> Form {
        self.map_coefficients(|c| -c)
    }
}

impl<'a> BitXor<&'a Form> for &'a Form {
    type Output = Form;
    /// Wedge product; panics on coframe mismatch, see [`Form::wedge`].
    fn bitxor(self, o: &Form) -> Form {
        self.wedge(o).expect("coframe mismatch")
    }
}

impl<'a> Mul<&'a Coefficient> for &'a Form {
    type Output = Form;
    fn mul(self, c: &Coefficient) -> Form {
        self.scale(c)
    }
}

/// The action of an almost complex structure on real 1-forms:
/// `J(e^i) = Σ_j m[i][j] e^j`, extended to k-forms by
/// `(Ja)(X1,…,Xk) = (−1)^k a(JX1,…,JXk)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct JAction {
    m: Vec<Vec<Coefficient>>,
}

impl JAction {
    pub fn new(m: Vec<Vec<Coefficient>>) -> Result<Self> {
        if m.len() != RANK || m.iter().any(|row| row.len() != RANK) {
            return Err(Error::InvalidModel("J must be a 6x6 matrix".into()));
        }
        let j = Self { m };
        let sq = j.squared();
        for (a, row) in sq.iter().enumerate() {
            for (b, x) in row.iter().enumerate() {
                let expect = if a == b { Coefficient::int(-1) } else { Coefficient::zero() };
                if *x != expect {
                    return Err(Error::InvalidModel("J does not square to -1".into()));
                }
            }
        }
        Ok(j)
    }

    /// `Je¹ = −e², Je³ = −e⁴, Je⁵ = −e⁶`.
    pub fn adapted() -> Self {
        let mut m = vec![vec![Coefficient::zero(); RANK]; RANK];
        for k in 0..3 {
            m[2 * k][2 * k + 1] = Coefficient::int(-1);
            m[2 * k + 1][2 * k] = Coefficient::one();
        }
        Self { m }
    }

    pub fn matrix(&self) -> &[Vec<Coefficient>] {
        &self.m
    }

    fn squared(&self) -> Vec<Vec<Coefficient>> {
        let mut out = vec![vec![Coefficient::zero(); RANK]; RANK];
        for (a, row) in out.iter_mut().enumerate() {
            for (b, x) in row.iter_mut().enumerate() {
                for k in 0..RANK {
                    if !self.m[a][k].is_zero() && !self.m[k][b].is_zero() {
                        *x = &*x + &(&self.m[a][k] * &self.m[k][b]);
                    }
                }
            }
        }
        out
    }

    /// `J(e^i)` as a 1-form.
    pub fn image(&self, coframe: &Arc<Coframe>, i: usize) -> Form {
        let mut f = Form::zero(coframe);
        for (j, c) in self.m[i].iter().enumerate() {
            f.add_term(Blade::generator(j), c.clone());
        }
        f
    }

    /// Frame components of `J e_l` for each frame vector `e_l`.
    pub fn vector_images(&self) -> Vec<Vec<Coefficient>> {
        (0..RANK).map(|l| (0..RANK).map(|i| -&self.m[i][l]).collect()).collect()
    }
}
