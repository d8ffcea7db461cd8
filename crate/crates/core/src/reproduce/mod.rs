//! The reproduction suite: every acceptance criterion, run over the
//! built-in models for both families and both signs.
//!
//! Criteria run concurrently; each one collects its own checks and the
//! ledger prints them in criterion order.

mod criteria;
mod displays;

use std::fmt;
use std::thread;

use crate::builtin::builtin;
use crate::coeffield::{Assignment, Coefficient, GaussRational, RuleSet, Var};
use crate::complexgeom::{adapted_family_i, adapted_family_ii, Family, SU3Model, Sign};
use crate::connections::{chern, curvature, instanton_family, pontrjagin_trace};
use crate::error::Result;
use crate::exterior::{Coframe, Form};
use crate::liealg::default_realification_map;

pub const CRITERIA: usize = 12;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Style {
    PassFail,
    Confirm,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Check {
    pub label: String,
    pub passed: bool,
    pub style: Style,
}

impl fmt::Display for Check {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let verdict = match (self.style, self.passed) {
            (Style::PassFail, true) => "pass",
            (Style::PassFail, false) => "fail",
            (Style::Confirm, true) => "confirmed",
            (Style::Confirm, false) => "refuted",
        };
        write!(f, "{}: {verdict}", self.label)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Criterion {
    pub number: usize,
    pub title: &'static str,
    pub checks: Vec<Check>,
    /// Informational lines; they never affect the verdict.
    pub notes: Vec<String>,
}

impl Criterion {
    pub fn passes(&self) -> bool {
        !self.checks.is_empty() && self.checks.iter().all(|c| c.passed)
    }

    /// `[ 5] title: pass`
    pub fn summary(&self) -> String {
        format!("[{:>2}] {}: {}", self.number, self.title, if self.passes() { "pass" } else { "fail" })
    }
}

impl fmt::Display for Criterion {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.summary())?;
        for c in &self.checks {
            write!(f, "\n     {c}")?;
        }
        for n in &self.notes {
            write!(f, "\n     note: {n}")?;
        }
        Ok(())
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Ledger {
    pub criteria: Vec<Criterion>,
}

impl Ledger {
    pub fn passes(&self) -> bool {
        self.criteria.iter().all(Criterion::passes)
    }

    pub fn passed(&self) -> usize {
        self.criteria.iter().filter(|c| c.passes()).count()
    }
}

impl fmt::Display for Ledger {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for c in &self.criteria {
            writeln!(f, "{c}\n")?;
        }
        write!(f, "reproduction: {}/{} criteria pass", self.passed(), self.criteria.len())
    }
}

/// Runs criterion `number` (1-based).
pub fn criterion(number: usize) -> Option<Criterion> {
    criteria::run(number)
}

/// Runs every criterion, concurrently.
pub fn run() -> Ledger {
    let criteria = thread::scope(|scope| {
        let handles: Vec<_> = (1..=CRITERIA)
            .map(|n| {
                thread::Builder::new()
                    .stack_size(32 << 20)
                    .spawn_scoped(scope, move || criterion(n).expect("criterion in range"))
                    .expect("spawn criterion thread")
            })
            .collect();
        handles.into_iter().map(|h| h.join().expect("criterion thread")).collect()
    });
    Ledger { criteria }
}

/// Accumulates the checks of one criterion.
#[derive(Default)]
pub(crate) struct Sheet {
    checks: Vec<Check>,
    notes: Vec<String>,
}

impl Sheet {
    fn check(&mut self, label: impl Into<String>, passed: bool) {
        self.checks.push(Check { label: label.into(), passed, style: Style::PassFail });
    }

    fn confirm(&mut self, label: impl Into<String>, passed: bool) {
        self.checks.push(Check { label: label.into(), passed, style: Style::Confirm });
    }

    /// A failed computation counts as a failed check.
    fn attempt(&mut self, label: impl Into<String>, r: Result<bool>) {
        let label = label.into();
        match r {
            Ok(passed) => self.check(label, passed),
            Err(e) => {
                self.notes.push(format!("{label}: {e}"));
                self.check(label, false);
            }
        }
    }

    fn note(&mut self, text: impl Into<String>) {
        self.notes.push(text.into());
    }

    fn finish(self, number: usize, title: &'static str) -> Criterion {
        Criterion { number, title, checks: self.checks, notes: self.notes }
    }
}

/// One value of a computation: a group such as `Omega`, and a 1-based
/// slot (`(i, j)` for matrices, `(k, 0)` for structure equations).
#[derive(Clone, Debug)]
pub(crate) struct Entry {
    pub group: &'static str,
    pub slot: (usize, usize),
    pub form: Form,
}

impl Entry {
    fn name(&self) -> String {
        match self.slot {
            (0, 0) => self.group.to_string(),
            (k, 0) => format!("{} {k}", self.group),
            (i, j) => format!("{} {i} {j}", self.group),
        }
    }
}

pub(crate) type Table = Vec<Entry>;

/// Parameter values: a number where assigned, the symbol otherwise.
#[derive(Clone, Copy)]
pub(crate) struct Values<'a>(Option<&'a Assignment>);

impl Values<'_> {
    pub const SYMBOLIC: Values<'static> = Values(None);

    fn get(&self, name: &str) -> Coefficient {
        match self.0.and_then(|a| a.get(Var::new(name))) {
            Some(q) => Coefficient::constant(GaussRational::real(q.clone())),
            None => Coefficient::var(name),
        }
    }
}

pub(crate) fn family_model(fam: Family, sign: Sign, v: Values) -> Result<SU3Model> {
    match fam {
        Family::I => adapted_family_i(&v.get("r"), &v.get("s"), sign),
        Family::II => adapted_family_ii(&v.get("r"), &v.get("p"), &v.get("q"), sign),
    }
}

/// The adapted structure equations, derived from the complex ones.
fn derived_structure(fam: Family, sign: Sign, v: Values) -> Result<Vec<Form>> {
    let real = Coframe::standard_real();
    let (complex, scales) = match fam {
        Family::I => (builtin("family1", sign)?.equations, [v.get("r"), v.get("s"), Coefficient::one()]),
        Family::II => {
            let (p, q) = (v.get("p"), v.get("q"));
            let zero = Coefficient::zero;
            let half = Coefficient::ratio(1, 2);
            // σ¹ = ω¹, σ² = ω² + (i/(2p²))ω³, σ³ = iω² − (1/(2q²))ω³
            let m = vec![
                vec![Coefficient::one(), zero(), zero()],
                vec![zero(), Coefficient::one(), (&(&Coefficient::i() * &half)).checked_div(&p.pow(2)?)?],
                vec![zero(), Coefficient::i(), (&-&half).checked_div(&q.pow(2)?)?],
            ];
            let (sigma, _) = builtin("eps0", sign)?.equations.transform(&m, None)?;
            (sigma, [v.get("r"), p, q])
        }
    };
    let map: Vec<Form> =
        default_realification_map(&real).iter().zip(&scales).map(|(w, c)| Ok(w.scale(&c.inv()?))).collect::<Result<_>>()?;
    let (eqs, _) = complex.realify(&map, &RuleSet::new())?;
    Ok(eqs.differentials().to_vec())
}

fn upper(group: &'static str, m: impl Fn(usize, usize) -> Form) -> Vec<Entry> {
    let mut out = Vec::new();
    for i in 1..=6 {
        for j in i + 1..=6 {
            out.push(Entry { group, slot: (i, j), form: m(i - 1, j - 1) });
        }
    }
    out
}

/// Every quantity of a family's closed-form table, computed from the
/// structure equations at `v`.
pub(crate) fn family_table(fam: Family, sign: Sign, v: Values) -> Result<Table> {
    let single = |group, form| Entry { group, slot: (0, 0), form };
    let mut t: Table = derived_structure(fam, sign, v)?
        .into_iter()
        .enumerate()
        .map(|(k, form)| Entry { group: "structure", slot: (k + 1, 0), form })
        .collect();
    let m = family_model(fam, sign, v)?;
    t.push(single("dF", m.df()));
    t.push(single("T", m.torsion()));
    t.push(single("dT", m.dt()));
    let conn = chern(&m)?;
    let c = conn.torsion_forms.clone().expect("the Chern connection carries its torsion forms");
    t.extend(upper("C", |i, j| c[i][j].clone()));
    t.extend(upper("sigma", |i, j| conn.entry(i, j).clone()));
    let omega = curvature(&conn, &m.equations)?;
    t.extend(upper("Omega", |i, j| omega.entry(i, j).clone()));
    t.push(single("p1", pontrjagin_trace(&omega).1));
    if fam == Family::I {
        let a = instanton_family(m.coframe(), &v.get("lambda"), &v.get("mu"), &v.get("tau"));
        let omega_a = curvature(&a, &m.equations)?;
        t.extend(upper("OmegaA", |i, j| omega_a.entry(i, j).clone()));
        t.push(single("p1A", pontrjagin_trace(&omega_a).1));
    }
    Ok(t)
}

pub(crate) fn expected_table(fam: Family, sign: Sign) -> Table {
    match fam {
        Family::I => displays::family_i(sign),
        Family::II => displays::family_ii(sign),
    }
}

pub(crate) fn family_params(fam: Family) -> &'static [&'static str] {
    match fam {
        Family::I => &displays::FAMILY_I_PARAMS,
        Family::II => &displays::FAMILY_II_PARAMS,
    }
}

/// Entries of `want` that `got` does not reproduce, with their difference.
pub(crate) fn table_mismatches(got: &Table, want: &Table) -> Vec<(usize, String)> {
    let mut out = Vec::new();
    for (k, w) in want.iter().enumerate() {
        match got.iter().find(|g| g.group == w.group && g.slot == w.slot) {
            Some(g) if g.form == w.form => {}
            Some(g) => out.push((k, format!("{} differs by {}", w.name(), &g.form - &w.form))),
            None => out.push((k, format!("{} missing", w.name()))),
        }
    }
    out
}
