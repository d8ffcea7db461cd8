//! Complex structures, Hermitian metrics and SU(3)-structures on the
//! 6-dimensional algebras.

use std::fmt;
use std::sync::Arc;

use crate::coeffield::{Assignment, Coefficient, GaussRational, RuleSet};
use crate::error::{Error, Result};
use crate::exterior::{Coframe, Form, JAction, RANK};
use crate::liealg::{default_realification_map, StructureEquations};
use crate::linalg::{self, Matrix};
use crate::parse::{self, Scope};

/// The (0,2)-part of a form on a complex coframe.
pub fn zero_two_part(f: &Form) -> Form {
    let mut out = Form::zero(f.coframe());
    for (b, c) in f.terms() {
        if b.degree() == 2 && b.indices().all(|i| i >= 3) {
            out.add_term(b, c.clone());
        }
    }
    out
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IntegrabilityReport {
    /// Generators whose differential has a nonzero (0,2)-part, with that part.
    pub offending: Vec<(String, Form)>,
}

impl IntegrabilityReport {
    pub fn passes(&self) -> bool {
        self.offending.is_empty()
    }
}

impl fmt::Display for IntegrabilityReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (name, part) in &self.offending {
            writeln!(f, "(0,2)-part of d {name} = {part}")?;
        }
        write!(f, "integrable: {}", if self.passes() { "pass" } else { "fail" })
    }
}

pub fn check_integrable(s: &StructureEquations) -> Result<IntegrabilityReport> {
    if s.is_real() {
        return Err(Error::RealCoframe);
    }
    let offending = s
        .differentials()
        .iter()
        .enumerate()
        .filter_map(|(i, d)| {
            let part = zero_two_part(d);
            (!part.is_zero()).then(|| (s.coframe().generator_name(i), part))
        })
        .collect();
    Ok(IntegrabilityReport { offending })
}

/// The series `g_0 = 0`, `g_l = {X : [X,g], [JX,g] ⊆ g_{l−1}}` up to stabilization.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SubspaceChain {
    /// Basis vectors (frame components) of each term.
    pub terms: Vec<Vec<Vec<Coefficient>>>,
    /// Set when parameters are present, so ranks are generic ranks.
    pub generic_rank: bool,
}

impl SubspaceChain {
    pub fn dimensions(&self) -> Vec<usize> {
        self.terms.iter().map(Vec::len).collect()
    }

    pub fn limit(&self) -> &[Vec<Coefficient>] {
        self.terms.last().expect("chain starts with zero")
    }

    /// Whether every term is mapped into itself by `J`.
    pub fn is_j_invariant(&self, j: &JAction) -> bool {
        let jv = j.vector_images();
        self.terms.iter().all(|basis| {
            basis.iter().all(|v| {
                let image: Vec<Coefficient> = (0..RANK)
                    .map(|i| (0..RANK).fold(Coefficient::zero(), |acc, l| &acc + &(&v[l] * &jv[l][i])))
                    .collect();
                let mut ext = basis.clone();
                ext.push(image);
                linalg::rank(&ext) == basis.len()
            })
        })
    }
}

impl fmt::Display for SubspaceChain {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let dims: Vec<String> = self.dimensions().iter().map(usize::to_string).collect();
        write!(f, "dimensions: {}", dims.join(" -> "))?;
        if self.generic_rank {
            write!(f, " (warning: ranks computed generically in the parameters)")?;
        }
        Ok(())
    }
}

pub fn ascending_series(s: &StructureEquations, j: &JAction) -> Result<SubspaceChain> {
    if !s.is_real() {
        return Err(Error::ComplexCoframe);
    }
    let unit = |i: usize| -> Vec<Coefficient> {
        (0..RANK).map(|k| if k == i { Coefficient::one() } else { Coefficient::zero() }).collect()
    };
    let jv = j.vector_images();
    // brackets[i][j] = [e_i, e_j], jbrackets[i][j] = [J e_i, e_j]
    let brackets: Vec<Vec<Vec<Coefficient>>> =
        (0..RANK).map(|i| (0..RANK).map(|k| s.bracket(&unit(i), &unit(k))).collect()).collect();
    let jbrackets: Vec<Vec<Vec<Coefficient>>> =
        (0..RANK).map(|i| (0..RANK).map(|k| s.bracket(&jv[i], &unit(k))).collect()).collect();
    let generic_rank =
        !s.parameters().is_empty() || j.matrix().iter().flatten().any(|c| c.constant_value().is_none());

    let mut terms: Vec<Vec<Vec<Coefficient>>> = vec![Vec::new()];
    loop {
        let prev = terms.last().expect("nonempty");
        let ann = if prev.is_empty() {
            (0..RANK).map(unit).collect()
        } else {
            linalg::nullspace(prev, RANK)
        };
        let mut rows: Matrix = Vec::new();
        for phi in &ann {
            for table in [&brackets, &jbrackets] {
                for k in 0..RANK {
                    let row: Vec<Coefficient> = (0..RANK)
                        .map(|i| (0..RANK).fold(Coefficient::zero(), |acc, m| &acc + &(&phi[m] * &table[i][k][m])))
                        .collect();
                    if row.iter().any(|c| !c.is_zero()) {
                        rows.push(row);
                    }
                }
            }
        }
        let next = linalg::nullspace(&rows, RANK);
        if next.len() == prev.len() {
            break;
        }
        terms.push(next);
    }
    Ok(SubspaceChain { terms, generic_rank })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Nilpotency {
    Nilpotent,
    NonNilpotent,
}

impl fmt::Display for Nilpotency {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Nilpotency::Nilpotent => "nilpotent",
            Nilpotency::NonNilpotent => "non-nilpotent",
        })
    }
}

pub fn classify_complex_structure(s: &StructureEquations, j: &JAction) -> Result<(Nilpotency, SubspaceChain)> {
    let chain = ascending_series(s, j)?;
    let kind = if chain.limit().len() == RANK { Nilpotency::Nilpotent } else { Nilpotency::NonNilpotent };
    Ok((kind, chain))
}

/// Metric data relative to a (1,0)-coframe:
/// `2F = i(r²ω^{11̄} + s²ω^{22̄} + t²ω^{33̄}) + uω^{12̄} − ūω^{21̄} + vω^{23̄} − v̄ω^{32̄} + zω^{13̄} − z̄ω^{31̄}`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HermitianData {
    pub r2: Coefficient,
    pub s2: Coefficient,
    pub t2: Coefficient,
    pub u: Coefficient,
    pub v: Coefficient,
    pub z: Coefficient,
}

impl HermitianData {
    pub fn diagonal(r2: Coefficient, s2: Coefficient, t2: Coefficient) -> Self {
        Self { r2, s2, t2, u: Coefficient::zero(), v: Coefficient::zero(), z: Coefficient::zero() }
    }

    /// Symbolic data in `r, s, t` and the real and imaginary parts
    /// `u_re, u_im, v_re, v_im, z_re, z_im`.
    pub fn generic() -> Self {
        let sq = |n: &str| Coefficient::var(n).pow(2).expect("positive power");
        let cx = |n: &str| &Coefficient::var(&format!("{n}_re")) + &(&Coefficient::i() * &Coefficient::var(&format!("{n}_im")));
        Self { r2: sq("r"), s2: sq("s"), t2: sq("t"), u: cx("u"), v: cx("v"), z: cx("z") }
    }

    pub fn specialize(&self, a: &Assignment) -> Result<Self> {
        Ok(Self {
            r2: self.r2.specialize(a)?,
            s2: self.s2.specialize(a)?,
            t2: self.t2.specialize(a)?,
            u: self.u.specialize(a)?,
            v: self.v.specialize(a)?,
            z: self.z.specialize(a)?,
        })
    }

    pub fn fundamental_form(&self, coframe: &Arc<Coframe>) -> Result<Form> {
        if coframe.is_real() {
            return Err(Error::RealCoframe);
        }
        let i = Coefficient::i();
        let half = Coefficient::ratio(1, 2);
        let mut f = Form::zero(coframe);
        let mut put = |a: usize, b: usize, c: Coefficient| {
            f = &f + &Form::monomial(coframe, &[a, b + 3], &half * &c);
        };
        put(0, 0, &i * &self.r2);
        put(1, 1, &i * &self.s2);
        put(2, 2, &i * &self.t2);
        put(0, 1, self.u.clone());
        put(1, 0, -self.u.conjugate());
        put(1, 2, self.v.clone());
        put(2, 1, -self.v.conjugate());
        put(0, 2, self.z.clone());
        put(2, 0, -self.z.conjugate());
        Ok(f)
    }

    /// Symmetric matrix of `g` in the basis `(ω^1, ω^2, ω^3, ω̄^1, ω̄^2, ω̄^3)`,
    /// where `ω^jω̄^k` is the symmetrized product.
    pub fn metric_matrix(&self) -> Matrix {
        let mut g = linalg::zeros(RANK, RANK);
        let half = Coefficient::ratio(1, 2);
        let mi2 = &Coefficient::i() * &Coefficient::ratio(-1, 2);
        let mut put = |a: usize, b: usize, c: Coefficient| {
            let c = &half * &c;
            g[a][b + 3] = &g[a][b + 3] + &c;
            g[b + 3][a] = &g[b + 3][a] + &c;
        };
        put(0, 0, self.r2.clone());
        put(1, 1, self.s2.clone());
        put(2, 2, self.t2.clone());
        put(0, 1, &mi2 * &self.u);
        put(1, 0, &mi2 * &(-self.u.conjugate()));
        put(1, 2, &mi2 * &self.v);
        put(2, 1, &mi2 * &(-self.v.conjugate()));
        put(0, 2, &mi2 * &self.z);
        put(2, 0, &mi2 * &(-self.z.conjugate()));
        g
    }

    /// `g(J·,J·) = g`: on `(1,0)/(0,1)` covectors `J` acts by `±i`, so the
    /// pure-type blocks of the metric matrix must vanish.
    pub fn metric_is_j_invariant(&self) -> bool {
        let g = self.metric_matrix();
        let eig = |a: usize| if a < 3 { Coefficient::i() } else { -Coefficient::i() };
        (0..RANK).all(|a| (0..RANK).all(|b| (&(&eig(a) * &eig(b)) * &g[a][b]) == g[a][b]))
    }

    pub fn check_positivity(&self, a: &Assignment) -> Result<PositivityReport> {
        let h = self.specialize(a)?;
        let val = |c: &Coefficient| c.eval(a);
        let (r2, s2, t2) = (val(&h.r2)?, val(&h.s2)?, val(&h.t2)?);
        let (u, v, z) = (val(&h.u)?, val(&h.v)?, val(&h.z)?);
        let re = |x: &GaussRational| x.re.clone();
        let (r2, s2, t2) = (re(&r2), re(&s2), re(&t2));
        let (nu, nv, nz) = (u.norm_sqr(), v.norm_sqr(), z.norm_sqr());
        let cross = &(&(&GaussRational::i() * &u.conj()) * &v.conj()) * &z;
        let conditions = vec![
            ("r^2 s^2 > |u|^2".to_string(), &r2 * &s2 > nu),
            ("s^2 t^2 > |v|^2".to_string(), &s2 * &t2 > nv),
            ("r^2 t^2 > |z|^2".to_string(), &r2 * &t2 > nz),
            (
                "r^2 s^2 t^2 + 2 Re(i conj(u) conj(v) z) > t^2|u|^2 + r^2|v|^2 + s^2|z|^2".to_string(),
                &(&(&r2 * &s2) * &t2) + &(cross.re * num_rational::BigRational::from_integer(2.into()))
                    > &(&(&t2 * &nu) + &(&r2 * &nv)) + &(&s2 * &nz),
            ),
        ];
        Ok(PositivityReport { conditions })
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PositivityReport {
    pub conditions: Vec<(String, bool)>,
}

impl PositivityReport {
    pub fn passes(&self) -> bool {
        self.conditions.iter().all(|(_, ok)| *ok)
    }
}

impl fmt::Display for PositivityReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (c, ok) in &self.conditions {
            writeln!(f, "{}: {c}", if *ok { "pass" } else { "fail" })?;
        }
        write!(f, "positive: {}", if self.passes() { "pass" } else { "fail" })
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BalancedReport {
    pub f_wedge_df: Form,
}

impl BalancedReport {
    pub fn passes(&self) -> bool {
        self.f_wedge_df.is_zero()
    }
}

impl fmt::Display for BalancedReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "F^dF = {}", self.f_wedge_df)?;
        write!(f, "balanced: {}", if self.passes() { "pass" } else { "fail" })
    }
}

/// `F ∧ dF`, reduced modulo `rules`; balanced iff zero.
pub fn check_balanced(s: &StructureEquations, f: &Form, rules: &RuleSet) -> Result<BalancedReport> {
    let df = s.differential(f)?;
    Ok(BalancedReport { f_wedge_df: f.wedge(&df)?.apply_rules(rules) })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Family {
    I,
    II,
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Family::I => "I",
            Family::II => "II",
        })
    }
}

/// Choice of `J_0^+` or `J_0^-`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Sign {
    Plus,
    Minus,
}

impl Sign {
    pub fn factor(self) -> i64 {
        match self {
            Sign::Plus => 1,
            Sign::Minus => -1,
        }
    }

    /// `±` and `∓` rendered for this sign.
    pub fn symbols(self) -> (&'static str, &'static str) {
        match self {
            Sign::Plus => ("+", "-"),
            Sign::Minus => ("-", "+"),
        }
    }
}

impl fmt::Display for Sign {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.symbols().0)
    }
}

/// Real structure equations in an adapted orthonormal coframe with `J`,
/// `F = e^{12} + e^{34} + e^{56}` and `Ψ = (e¹+ie²)∧(e³+ie⁴)∧(e⁵+ie⁶)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SU3Model {
    pub equations: StructureEquations,
    pub j: JAction,
    pub f: Form,
    pub psi: Form,
    pub family: Option<Family>,
    pub sign: Option<Sign>,
}

impl SU3Model {
    pub fn new(equations: StructureEquations, j: JAction) -> Result<Self> {
        if !equations.is_real() {
            return Err(Error::ComplexCoframe);
        }
        let cf = equations.coframe().clone();
        let f = standard_kahler_form(&cf);
        let psi = standard_volume_form(&cf);
        Ok(Self { equations, j, f, psi, family: None, sign: None })
    }

    pub fn coframe(&self) -> &Arc<Coframe> {
        self.equations.coframe()
    }

    pub fn df(&self) -> Form {
        self.equations.differential(&self.f).expect("same coframe")
    }

    /// `T = J dF`.
    pub fn torsion(&self) -> Form {
        self.df().apply_j(&self.j).expect("dF is a 3-form on a real coframe")
    }

    pub fn dt(&self) -> Form {
        self.equations.differential(&self.torsion()).expect("same coframe")
    }

    pub fn dpsi(&self) -> Form {
        self.equations.differential(&self.psi).expect("same coframe")
    }

    /// `θ = −½ J(δF)` with `δ = −*d*`.
    pub fn lee_form(&self) -> Form {
        let star = self.f.hodge_star().expect("real homogeneous");
        let d = self.equations.differential(&star).expect("same coframe");
        let delta = -&d.hodge_star().expect("real homogeneous");
        delta.apply_j(&self.j).expect("1-form").scale(&Coefficient::ratio(-1, 2))
    }

    pub fn apply_rules(&self, rules: &RuleSet) -> Self {
        Self { equations: self.equations.apply_rules(rules), ..self.clone() }
    }

    pub fn specialize(&self, a: &Assignment) -> Result<Self> {
        let mut jm = Vec::new();
        for row in self.j.matrix() {
            jm.push(row.iter().map(|c| c.specialize(a)).collect::<Result<Vec<_>>>()?);
        }
        Ok(Self {
            equations: self.equations.specialize(a)?,
            j: JAction::new(jm)?,
            f: self.f.specialize(a)?,
            psi: self.psi.specialize(a)?,
            ..self.clone()
        })
    }
}

pub fn standard_kahler_form(cf: &Arc<Coframe>) -> Form {
    (0..3).fold(Form::zero(cf), |acc, k| &acc + &Form::monomial(cf, &[2 * k, 2 * k + 1], Coefficient::one()))
}

pub fn standard_volume_form(cf: &Arc<Coframe>) -> Form {
    let m = default_realification_map(cf);
    &(&m[0] ^ &m[1]) ^ &m[2]
}

fn real_equations(params: &[&str], lines: [&str; 6]) -> StructureEquations {
    let cf = Coframe::standard_real();
    let scope = Scope::new(Some(&cf), params.iter().copied());
    let diffs = lines.iter().map(|t| parse::form(t, &scope).expect("well-formed built-in")).collect();
    StructureEquations::new(&cf, diffs).expect("2-forms")
}

fn require_nonzero(c: &Coefficient, name: &str) -> Result<()> {
    if c.is_zero() {
        return Err(Error::DegenerateParameters(format!("{name} must be nonzero")));
    }
    Ok(())
}

/// Family I in its adapted coframe, with `r, s` given as coefficients
/// (symbols or numbers).
pub fn adapted_family_i(r: &Coefficient, s: &Coefficient, sign: Sign) -> Result<SU3Model> {
    require_nonzero(r, "r")?;
    require_nonzero(s, "s")?;
    let (pm, _) = sign.symbols();
    let eqs = real_equations(
        &["r", "s"],
        ["0", "0", "(2*s/r)*e1^e5", "(2*s/r)*e2^e5", "0", &format!("{pm}(2/(r*s))*(e1^e3 + e2^e4)")],
    );
    let eqs = substitute_params(&eqs, &[("r", r), ("s", s)])?;
    let mut m = SU3Model::new(eqs, JAction::adapted())?;
    m.family = Some(Family::I);
    m.sign = Some(sign);
    Ok(m)
}

/// Family II in its adapted coframe, parametrized by `r` and the distinct
/// roots `p, q` (so `s² = p² + q²`, `t² = (p² + q²)/(4p²q²)`).
pub fn adapted_family_ii(r: &Coefficient, p: &Coefficient, q: &Coefficient, sign: Sign) -> Result<SU3Model> {
    require_nonzero(r, "r")?;
    require_nonzero(p, "p")?;
    require_nonzero(q, "q")?;
    if (&p.pow(2)? - &q.pow(2)?).is_zero() {
        return Err(Error::DegenerateParameters("p and q must be different roots".into()));
    }
    let (pm, mp) = sign.symbols();
    let de3 = format!(
        "p/(r*(p**2 - q**2))*({mp}(1/p)*(e1^e3 + e2^e4) {pm} (q/p**2)*(e1^e6 - e2^e5) - 4*p*q*(q*e1^e4 + p*e1^e5))"
    );
    let de6 = format!(
        "q/(r*(p**2 - q**2))*({mp}(p/q**2)*(e1^e3 + e2^e4) {pm} (1/q)*(e1^e6 - e2^e5) - 4*p*q*(q*e1^e4 + p*e1^e5))"
    );
    let eqs = real_equations(
        &["r", "p", "q"],
        [
            "0",
            "0",
            &de3,
            "(-4*p**2*q)/(r*(p**2 - q**2))*(q*e2^e4 + p*e2^e5)",
            "(4*p*q**2)/(r*(p**2 - q**2))*(q*e2^e4 + p*e2^e5)",
            &de6,
        ],
    );
    let eqs = substitute_params(&eqs, &[("r", r), ("p", p), ("q", q)])?;
    let mut m = SU3Model::new(eqs, JAction::adapted())?;
    m.family = Some(Family::II);
    m.sign = Some(sign);
    Ok(m)
}

/// Abelian algebra with the standard structure: the flat Kähler model.
pub fn kahler_flat() -> SU3Model {
    SU3Model::new(StructureEquations::abelian(&Coframe::standard_real()), JAction::adapted()).expect("real coframe")
}

fn substitute_params(eqs: &StructureEquations, values: &[(&str, &Coefficient)]) -> Result<StructureEquations> {
    let mut diffs = Vec::new();
    for d in eqs.differentials() {
        let mut out = d.clone();
        for (name, value) in values {
            let v = crate::coeffield::Var::new(name);
            if **value != Coefficient::var(name) {
                out = out.try_map_coefficients(|c| c.substitute(v, value))?;
            }
        }
        diffs.push(out);
    }
    StructureEquations::new(eqs.coframe(), diffs)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn v(n: &str) -> Coefficient {
        Coefficient::var(n)
    }

    #[test]
    fn family_i_constants() {
        let m = adapted_family_i(&v("r"), &v("s"), Sign::Plus).unwrap();
        let a = m.equations.structure_constant(2, 0, 4);
        assert_eq!(a, &(&Coefficient::int(2) * &v("s")) / &v("r"));
        assert!(m.equations.check_jacobi().passes());
    }

    #[test]
    fn degenerate_parameters() {
        assert!(matches!(
            adapted_family_i(&Coefficient::zero(), &v("s"), Sign::Plus),
            Err(Error::DegenerateParameters(_))
        ));
        assert!(matches!(
            adapted_family_ii(&v("r"), &v("p"), &v("p"), Sign::Plus),
            Err(Error::DegenerateParameters(_))
        ));
    }

    #[test]
    fn kahler_flat_torsion_vanishes() {
        let m = kahler_flat();
        assert!(m.torsion().is_zero());
        assert!(m.lee_form().is_zero());
    }

    #[test]
    fn positivity_examples() {
        let one = HermitianData::diagonal(Coefficient::one(), Coefficient::one(), Coefficient::one());
        assert!(one.check_positivity(&Assignment::new()).unwrap().passes());
        let mut bad = one.clone();
        bad.u = Coefficient::one();
        let rep = bad.check_positivity(&Assignment::new()).unwrap();
        assert!(!rep.conditions[0].1);
        let mut ok = one;
        ok.v = Coefficient::ratio(1, 2);
        assert!(ok.check_positivity(&Assignment::new()).unwrap().passes());
    }

    #[test]
    fn integrability_flags_zero_two_terms() {
        let cf = Coframe::standard_complex();
        let scope = Scope::new(Some(&cf), Vec::<String>::new());
        let d2 = parse::form("~w1^~w3", &scope).unwrap();
        let s = StructureEquations::new(&cf, vec![Form::zero(&cf), d2.clone(), Form::zero(&cf)]).unwrap();
        let rep = check_integrable(&s).unwrap();
        assert_eq!(rep.offending, vec![("w2".to_string(), d2)]);
    }
}
