//! Linear connections in an orthonormal real coframe: Levi-Civita, Chern,
//! Bismut, the instanton family `A_{λ,μ,τ}`, curvature and Pontrjagin forms.
//!
//! Matrices are 0-indexed: `sigma[i][j]` is `σ^{i+1}_{j+1}`, with
//! `σ^i_j(e_k) = g(∇_{e_k} e_j, e_i)`.

use std::fmt;
use std::sync::Arc;

use crate::coeffield::{Coefficient, RuleSet, PI2};
use crate::complexgeom::SU3Model;
use crate::error::{Error, Result};
use crate::exterior::{Blade, Coframe, Form, JAction, RANK};
use crate::liealg::StructureEquations;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ConnectionKind {
    LeviCivita,
    Chern,
    Bismut,
    Custom,
}

impl fmt::Display for ConnectionKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            ConnectionKind::LeviCivita => "levi-civita",
            ConnectionKind::Chern => "chern",
            ConnectionKind::Bismut => "bismut",
            ConnectionKind::Custom => "custom",
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Connection {
    pub kind: ConnectionKind,
    pub sigma: Vec<Vec<Form>>,
    /// The torsion 1-forms `C^i_j` of a Chern connection.
    pub torsion_forms: Option<Vec<Vec<Form>>>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CurvatureMatrix {
    pub omega: Vec<Vec<Form>>,
}

fn unit(i: usize) -> Vec<Coefficient> {
    (0..RANK).map(|k| if k == i { Coefficient::one() } else { Coefficient::zero() }).collect()
}

/// `Σ_k values[k] e^k`.
fn one_form(cf: &Arc<Coframe>, values: impl IntoIterator<Item = Coefficient>) -> Form {
    let mut f = Form::zero(cf);
    for (k, c) in values.into_iter().enumerate() {
        f.add_term(Blade::generator(k), c);
    }
    f
}

fn build(cf: &Arc<Coframe>, value: impl Fn(usize, usize, usize) -> Coefficient) -> Vec<Vec<Form>> {
    (0..RANK).map(|i| (0..RANK).map(|j| one_form(cf, (0..RANK).map(|k| value(i, j, k)))).collect()).collect()
}

impl Connection {
    /// A skew connection from its upper-triangular entries.
    pub fn from_upper(cf: &Arc<Coframe>, entries: &[((usize, usize), Form)]) -> Result<Self> {
        let mut sigma = vec![vec![Form::zero(cf); RANK]; RANK];
        for ((i, j), f) in entries {
            if i >= j || *j >= RANK {
                return Err(Error::InvalidModel(format!("connection entry ({}, {}) is not above the diagonal", i + 1, j + 1)));
            }
            if f.coframe() != cf {
                return Err(Error::CoframeMismatch);
            }
            if !f.is_zero() && f.degree() != Some(1) {
                return Err(Error::InvalidModel(format!("connection entry ({}, {}) is not a 1-form", i + 1, j + 1)));
            }
            sigma[*i][*j] = f.clone();
            sigma[*j][*i] = -f;
        }
        Ok(Self { kind: ConnectionKind::Custom, sigma, torsion_forms: None })
    }

    pub fn zero(cf: &Arc<Coframe>) -> Self {
        Self { kind: ConnectionKind::Custom, sigma: vec![vec![Form::zero(cf); RANK]; RANK], torsion_forms: None }
    }

    pub fn entry(&self, i: usize, j: usize) -> &Form {
        &self.sigma[i][j]
    }

    pub fn is_skew(&self) -> bool {
        (0..RANK).all(|i| (0..RANK).all(|j| self.sigma[i][j] == -&self.sigma[j][i]))
    }

    pub fn apply_rules(&self, rules: &RuleSet) -> Self {
        let map = |m: &Vec<Vec<Form>>| m.iter().map(|row| row.iter().map(|f| f.apply_rules(rules)).collect()).collect();
        Self { kind: self.kind, sigma: map(&self.sigma), torsion_forms: self.torsion_forms.as_ref().map(map) }
    }
}

pub fn levi_civita(s: &StructureEquations) -> Result<Connection> {
    if !s.is_real() {
        return Err(Error::ComplexCoframe);
    }
    let a: Vec<Vec<Vec<Coefficient>>> = (0..RANK)
        .map(|k| (0..RANK).map(|i| (0..RANK).map(|j| s.structure_constant(k, i, j)).collect()).collect())
        .collect();
    let half = Coefficient::ratio(1, 2);
    let sigma = build(s.coframe(), |i, j, k| &half * &(&(&a[i][j][k] - &a[k][i][j]) + &a[j][k][i]));
    Ok(Connection { kind: ConnectionKind::LeviCivita, sigma, torsion_forms: None })
}

/// `C^i_j(e_k) = dF(Je_k, e_i, e_j)`.
pub fn chern_torsion_forms(m: &SU3Model) -> Vec<Vec<Form>> {
    let df = m.df();
    let jv = m.j.vector_images();
    build(m.coframe(), |i, j, k| {
        if i == j {
            return Coefficient::zero();
        }
        df.evaluate_on_vectors(&[jv[k].clone(), unit(i), unit(j)]).expect("dF is a 3-form")
    })
}

pub fn chern(m: &SU3Model) -> Result<Connection> {
    let lc = levi_civita(&m.equations)?;
    let c = chern_torsion_forms(m);
    let half = Coefficient::ratio(1, 2);
    let sigma = (0..RANK).map(|i| (0..RANK).map(|j| &lc.sigma[i][j] - &c[i][j].scale(&half)).collect()).collect();
    Ok(Connection { kind: ConnectionKind::Chern, sigma, torsion_forms: Some(c) })
}

/// `σ⁺^i_j(e_k) = σ^g^i_j(e_k) + ½T(e_k, e_j, e_i)`.
pub fn bismut(m: &SU3Model) -> Result<Connection> {
    let lc = levi_civita(&m.equations)?;
    let t = m.torsion();
    let half = Coefficient::ratio(1, 2);
    let shift = build(m.coframe(), |i, j, k| &half * &t.component(&[k, j, i]));
    let sigma = (0..RANK).map(|i| (0..RANK).map(|j| &lc.sigma[i][j] + &shift[i][j]).collect()).collect();
    Ok(Connection { kind: ConnectionKind::Bismut, sigma, torsion_forms: None })
}

/// `A_{λ,μ,τ}`: `σ²₃ = σ²₅ = σ⁴₅ = ½σ⁵₆ = −(λe¹ + μe² + τe⁶)` and every other
/// upper entry `λe¹ + μe² + τe⁶`.
pub fn instanton_family(cf: &Arc<Coframe>, lambda: &Coefficient, mu: &Coefficient, tau: &Coefficient) -> Connection {
    let base = one_form(
        cf,
        [lambda.clone(), mu.clone(), Coefficient::zero(), Coefficient::zero(), Coefficient::zero(), tau.clone()],
    );
    let mut entries = Vec::new();
    for i in 0..RANK {
        for j in i + 1..RANK {
            let f = match (i + 1, j + 1) {
                (2, 3) | (2, 5) | (4, 5) => -&base,
                (5, 6) => base.scale(&Coefficient::int(-2)),
                _ => base.clone(),
            };
            entries.push(((i, j), f));
        }
    }
    Connection::from_upper(cf, &entries).expect("well-formed entries")
}

pub fn curvature(c: &Connection, s: &StructureEquations) -> Result<CurvatureMatrix> {
    let mut omega = Vec::with_capacity(RANK);
    for i in 0..RANK {
        let mut row = Vec::with_capacity(RANK);
        for j in 0..RANK {
            let mut o = s.differential(&c.sigma[i][j])?;
            for k in 0..RANK {
                if !c.sigma[i][k].is_zero() && !c.sigma[k][j].is_zero() {
                    o = &o + &c.sigma[i][k].wedge(&c.sigma[k][j])?;
                }
            }
            row.push(o);
        }
        omega.push(row);
    }
    Ok(CurvatureMatrix { omega })
}

impl CurvatureMatrix {
    pub fn entry(&self, i: usize, j: usize) -> &Form {
        &self.omega[i][j]
    }

    pub fn is_zero(&self) -> bool {
        self.omega.iter().flatten().all(Form::is_zero)
    }

    pub fn apply_rules(&self, rules: &RuleSet) -> Self {
        Self { omega: self.omega.iter().map(|row| row.iter().map(|f| f.apply_rules(rules)).collect()).collect() }
    }

    /// Swaps the form slots with the endomorphism indices:
    /// entry `(k, l)` of the result is `Σ_{i<j} Ω^i_j(e_k, e_l) e^{ij}`.
    pub fn slot_transpose(&self) -> Self {
        let cf = self.omega[0][0].coframe().clone();
        let mut omega = vec![vec![Form::zero(&cf); RANK]; RANK];
        for i in 0..RANK {
            for j in i + 1..RANK {
                let (_, eij) = Blade::from_indices(&[i, j]).expect("distinct indices");
                for (b, c) in self.omega[i][j].terms() {
                    let idx: Vec<usize> = b.indices().collect();
                    let (k, l) = (idx[0], idx[1]);
                    omega[k][l].add_term(eij, c.clone());
                    omega[l][k].add_term(eij, -c);
                }
            }
        }
        Self { omega }
    }
}

/// `de^i + Σ_j σ^i_j ∧ e^j` for each `i`; zero for a torsion-free connection.
pub fn first_structure_residual(c: &Connection, s: &StructureEquations) -> Vec<Form> {
    let cf = s.coframe();
    (0..RANK)
        .map(|i| {
            (0..RANK).fold(s.generator_differential(i), |acc, j| &acc + &(&c.sigma[i][j] ^ &Form::generator(cf, j)))
        })
        .collect()
}

/// `dΩ^i_j − Σ_k (Ω^i_k∧σ^k_j − σ^i_k∧Ω^k_j)`; zero by the second Bianchi identity.
pub fn bianchi_residual(c: &Connection, omega: &CurvatureMatrix, s: &StructureEquations) -> Vec<Vec<Form>> {
    (0..RANK)
        .map(|i| {
            (0..RANK)
                .map(|j| {
                    let mut acc = s.differential(&omega.omega[i][j]).expect("same coframe");
                    for k in 0..RANK {
                        acc = &acc - &(&omega.omega[i][k] ^ &c.sigma[k][j]);
                        acc = &acc + &(&c.sigma[i][k] ^ &omega.omega[k][j]);
                    }
                    acc
                })
                .collect()
        })
        .collect()
}

/// Named relation that must vanish, with its current value.
pub type Relation = (String, Form);

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Su3ConnectionReport {
    pub relations: Vec<Relation>,
}

impl Su3ConnectionReport {
    pub fn passes(&self) -> bool {
        self.relations.iter().all(|(_, f)| f.is_zero())
    }
}

impl fmt::Display for Su3ConnectionReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (name, v) in &self.relations {
            writeln!(f, "{}: {name}{}", if v.is_zero() { "pass" } else { "fail" }, if v.is_zero() { String::new() } else { format!(" (difference {v})") })?;
        }
        write!(f, "su(3): {}", if self.passes() { "pass" } else { "fail" })
    }
}

/// The relations saying a skew connection preserves `F` and `Ψ`.
pub fn su3_connection_check(c: &Connection) -> Su3ConnectionReport {
    su3_relations(&c.sigma, "sigma")
}

/// The same relations on the endomorphism indices of a curvature matrix:
/// `Ω(X, Y)` lies in su(3) for every pair of vectors, the curvature-level
/// condition for holonomy in SU(3).
pub fn su3_curvature_check(omega: &CurvatureMatrix) -> Su3ConnectionReport {
    su3_relations(&omega.omega, "Omega")
}

fn su3_relations(m: &[Vec<Form>], name: &str) -> Su3ConnectionReport {
    let s = |i: usize, j: usize| &m[i - 1][j - 1];
    let pairs: [((usize, usize), (usize, usize), bool); 6] = [
        ((1, 3), (2, 4), false),
        ((1, 4), (2, 3), true),
        ((1, 5), (2, 6), false),
        ((1, 6), (2, 5), true),
        ((3, 5), (4, 6), false),
        ((3, 6), (4, 5), true),
    ];
    let mut relations: Vec<Relation> = pairs
        .iter()
        .map(|&((a, b), (x, y), neg)| {
            let diff = if neg { s(a, b) + s(x, y) } else { s(a, b) - s(x, y) };
            (format!("{name} {a} {b} = {}{name} {x} {y}", if neg { "-" } else { "" }), diff)
        })
        .collect();
    relations.push((format!("{name} 1 2 + {name} 3 4 + {name} 5 6 = 0"), &(s(1, 2) + s(3, 4)) + s(5, 6)));
    Su3ConnectionReport { relations }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct InstantonReport {
    /// `(i, j, Ω^i_j(e₁,e₂) + Ω^i_j(e₃,e₄) + Ω^i_j(e₅,e₆))` where nonzero.
    pub trace_failures: Vec<(usize, usize, Coefficient)>,
    /// `(i, j, k, l, Ω^i_j(Je_k,Je_l) − Ω^i_j(e_k,e_l))` where nonzero.
    pub invariance_failures: Vec<(usize, usize, usize, usize, Coefficient)>,
}

impl InstantonReport {
    pub fn passes(&self) -> bool {
        self.trace_failures.is_empty() && self.invariance_failures.is_empty()
    }

    pub fn trace_free(&self) -> bool {
        self.trace_failures.is_empty()
    }

    pub fn j_invariant(&self) -> bool {
        self.invariance_failures.is_empty()
    }
}

impl fmt::Display for InstantonReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, j, v) in &self.trace_failures {
            writeln!(f, "Omega {} {} (e1,e2)+(e3,e4)+(e5,e6) = {v}", i + 1, j + 1)?;
        }
        for (i, j, k, l, v) in &self.invariance_failures {
            writeln!(f, "Omega {} {} (Je{},Je{}) - (e{},e{}) = {v}", i + 1, j + 1, k + 1, l + 1, k + 1, l + 1)?;
        }
        writeln!(f, "trace condition: {}", if self.trace_free() { "pass" } else { "fail" })?;
        writeln!(f, "J-invariance: {}", if self.j_invariant() { "pass" } else { "fail" })?;
        write!(f, "instanton: {}", if self.passes() { "pass" } else { "fail" })
    }
}

/// Both su(3) conditions on every upper entry of `Ω`.
pub fn instanton_check(omega: &CurvatureMatrix, j: &JAction) -> InstantonReport {
    let jv = j.vector_images();
    let mut trace_failures = Vec::new();
    let mut invariance_failures = Vec::new();
    for a in 0..RANK {
        for b in a + 1..RANK {
            let o = &omega.omega[a][b];
            if o.is_zero() {
                continue;
            }
            let ev = |x: usize, y: usize| o.evaluate_on_frame(&[x, y]).expect("curvature entries are 2-forms");
            let tr = &(&ev(0, 1) + &ev(2, 3)) + &ev(4, 5);
            if !tr.is_zero() {
                trace_failures.push((a, b, tr));
            }
            for k in 0..RANK {
                for l in k + 1..RANK {
                    let rotated = o.evaluate_on_vectors(&[jv[k].clone(), jv[l].clone()]).expect("2-form");
                    let d = &rotated - &ev(k, l);
                    if !d.is_zero() {
                        invariance_failures.push((a, b, k, l, d));
                    }
                }
            }
        }
    }
    InstantonReport { trace_failures, invariance_failures }
}

/// Both su(3) conditions on the endomorphism part of `Ω`: every `Ω(e_k, e_l)`,
/// read as a 2-form, is J-invariant and trace-free. Equivalent to
/// [`su3_curvature_check`].
pub fn holonomy_check(omega: &CurvatureMatrix, j: &JAction) -> InstantonReport {
    instanton_check(&omega.slot_transpose(), j)
}

/// `(Σ_{i<j} Ω^i_j∧Ω^i_j, trace/(8·pi2))`.
pub fn pontrjagin_trace(omega: &CurvatureMatrix) -> (Form, Form) {
    let cf = omega.omega[0][0].coframe().clone();
    let mut trace = Form::zero(&cf);
    for i in 0..RANK {
        for j in i + 1..RANK {
            let o = &omega.omega[i][j];
            if !o.is_zero() {
                trace = &trace + &(o ^ o);
            }
        }
    }
    let scale = (&Coefficient::int(8) * &Coefficient::var(PI2)).inv().expect("nonzero");
    let p1 = trace.scale(&scale);
    (trace, p1)
}

fn fmt_upper(f: &mut fmt::Formatter<'_>, name: &str, m: &[Vec<Form>]) -> fmt::Result {
    let mut any = false;
    for (i, row) in m.iter().enumerate() {
        for (j, x) in row.iter().enumerate().skip(i + 1) {
            if !x.is_zero() {
                if any {
                    writeln!(f)?;
                }
                write!(f, "{name} {} {} = {x}", i + 1, j + 1)?;
                any = true;
            }
        }
    }
    if !any {
        write!(f, "{name} = 0")?;
    }
    Ok(())
}

impl fmt::Display for Connection {
    /// Nonzero upper-triangular entries as `sigma i j = <form>` lines.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt_upper(f, "sigma", &self.sigma)
    }
}

impl fmt::Display for CurvatureMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt_upper(f, "Omega", &self.omega)
    }
}
