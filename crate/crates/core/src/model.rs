//! Line-oriented model files.
//!
//! ```text
//! # comment
//! params: r s
//! assume: r != 0
//! rule: tau**2 -> (s**4 - 1)/(9*r**2*s**2)
//! coframe complex: w1 w2 w3
//! d w2 = w1^w3 + w1^~w3
//! F = (1/2)*i*r**2*w1^~w1 + ...
//! J e1 = -e2            (real coframes)
//! sigma 1 2 = e1 + e2   (real coframes)
//! ```
//!
//! Generators without a `d` line are closed.

use std::collections::BTreeSet;
use std::fmt;
use std::sync::Arc;

use crate::coeffield::{Coefficient, RuleSet, Var, PI2};
use crate::complexgeom::{standard_kahler_form, SU3Model};
use crate::connections::Connection;
use crate::error::{Error, Result};
use crate::exterior::{Blade, Coframe, CoframeKind, Form, JAction, RANK};
use crate::liealg::{default_realification_map, StructureEquations};
use crate::parse::{self, Scope};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ModelFile {
    pub params: Vec<String>,
    pub assumptions: Vec<String>,
    pub rules: RuleSet,
    pub equations: StructureEquations,
    pub j: Option<JAction>,
    pub f: Option<Form>,
    pub connection: Vec<((usize, usize), Form)>,
}

fn perr(line: usize, column: usize, message: impl Into<String>) -> Error {
    Error::Parse { line, column, message: message.into() }
}

fn is_ident(s: &str) -> bool {
    let mut c = s.chars();
    matches!(c.next(), Some(a) if a.is_alphabetic() || a == '_') && c.all(|a| a.is_alphanumeric() || a == '_')
}

struct Builder {
    params: Vec<String>,
    assumptions: Vec<String>,
    rules: RuleSet,
    coframe: Option<Arc<Coframe>>,
    diffs: Vec<Option<Form>>,
    j_rows: Vec<Option<Form>>,
    f: Option<Form>,
    connection: Vec<((usize, usize), Form)>,
}

impl Builder {
    fn new() -> Self {
        Builder {
            params: Vec::new(),
            assumptions: Vec::new(),
            rules: RuleSet::new(),
            coframe: None,
            diffs: Vec::new(),
            j_rows: vec![None; RANK],
            f: None,
            connection: Vec::new(),
        }
    }

    fn scope(&self) -> Scope {
        Scope::new(self.coframe.as_ref(), self.params.iter().cloned())
    }

    fn coframe(&self, line: usize) -> Result<&Arc<Coframe>> {
        self.coframe.as_ref().ok_or_else(|| perr(line, 1, "coframe must be declared first"))
    }
}

/// Splits `lhs = rhs`, returning the rhs and its column offset.
fn split_eq(body: &str, start: usize, line: usize) -> Result<(&str, &str, usize)> {
    let k = body.find('=').ok_or_else(|| perr(line, start + 1, "expected `=`"))?;
    let rhs = &body[k + 1..];
    let lead = rhs.len() - rhs.trim_start().len();
    Ok((body[..k].trim(), rhs.trim(), start + body[..k + 1].chars().count() + lead))
}

pub fn parse_model(text: &str) -> Result<ModelFile> {
    let mut b = Builder::new();
    for (idx, raw) in text.lines().enumerate() {
        let line = idx + 1;
        let content = raw.split('#').next().unwrap_or("");
        let trimmed = content.trim_end();
        let indent = trimmed.len() - trimmed.trim_start().len();
        let body = trimmed.trim_start();
        if body.is_empty() {
            continue;
        }
        let (word, rest) = body.split_once(|c: char| c.is_whitespace() || c == ':').unwrap_or((body, ""));
        let rest_col = indent + word.chars().count() + 1;
        match word {
            "params" => parse_params(&mut b, rest, line, rest_col)?,
            "assume" => parse_assume(&mut b, rest, line, rest_col)?,
            "rule" => parse_rule(&mut b, rest, line, rest_col)?,
            "coframe" => parse_coframe(&mut b, rest, line, rest_col)?,
            "d" | "J" => {
                let (lhs, rhs, col) = split_eq(rest, rest_col, line)?;
                let cf = b.coframe(line)?.clone();
                let gen = cf
                    .index_of(lhs)
                    .filter(|&g| g < cf.independent_generators())
                    .ok_or_else(|| perr(line, rest_col + 1, format!("`{lhs}` is not a generator")))?;
                let form = parse::form_at(rhs, &b.scope(), line, col)?;
                let degree = if word == "d" { 2 } else { 1 };
                if !form.is_zero() && form.degree() != Some(degree) {
                    return Err(perr(line, col + 1, format!("expected a {degree}-form")));
                }
                let slot = if word == "d" {
                    &mut b.diffs[gen]
                } else {
                    if !cf.is_real() {
                        return Err(perr(line, 1, "J lines need a real coframe"));
                    }
                    &mut b.j_rows[gen]
                };
                if slot.replace(form).is_some() {
                    return Err(perr(line, 1, format!("second `{word}` line for `{lhs}`")));
                }
            }
            "F" => {
                let (_, rhs, col) = split_eq(rest, rest_col, line)?;
                b.coframe(line)?;
                let form = parse::form_at(rhs, &b.scope(), line, col)?;
                if !form.is_zero() && form.degree() != Some(2) {
                    return Err(perr(line, col + 1, "F must be a 2-form"));
                }
                if b.f.replace(form).is_some() {
                    return Err(perr(line, 1, "second `F` line"));
                }
            }
            "sigma" => {
                let (lhs, rhs, col) = split_eq(rest, rest_col, line)?;
                let cf = b.coframe(line)?.clone();
                if !cf.is_real() {
                    return Err(perr(line, 1, "connection lines need a real coframe"));
                }
                let ij: Vec<usize> = lhs.split_whitespace().filter_map(|t| t.parse().ok()).collect();
                let ok = lhs.split_whitespace().count() == 2 && ij.len() == 2 && 1 <= ij[0] && ij[0] < ij[1] && ij[1] <= RANK;
                if !ok {
                    return Err(perr(line, rest_col + 1, "expected `sigma i j` with 1 <= i < j <= 6"));
                }
                let form = parse::form_at(rhs, &b.scope(), line, col)?;
                if !form.is_zero() && form.degree() != Some(1) {
                    return Err(perr(line, col + 1, "connection entries are 1-forms"));
                }
                let key = (ij[0] - 1, ij[1] - 1);
                if b.connection.iter().any(|(k, _)| *k == key) {
                    return Err(perr(line, 1, format!("second `sigma {} {}` line", ij[0], ij[1])));
                }
                b.connection.push((key, form));
            }
            _ => return Err(perr(line, indent + 1, format!("unknown directive `{word}`"))),
        }
    }
    let cf = b.coframe.clone().ok_or_else(|| perr(text.lines().count().max(1), 1, "missing coframe declaration"))?;
    let diffs = b.diffs.iter().map(|d| d.clone().unwrap_or_else(|| Form::zero(&cf))).collect();
    let equations = StructureEquations::new(&cf, diffs)?;
    let j = if b.j_rows.iter().any(Option::is_some) {
        let mut m = Vec::new();
        for (k, row) in b.j_rows.iter().enumerate() {
            let row = row.as_ref().ok_or_else(|| Error::InvalidModel(format!("missing `J {}` line", cf.generator_name(k))))?;
            m.push((0..RANK).map(|i| row.component(&[i])).collect());
        }
        Some(JAction::new(m)?)
    } else {
        None
    };
    b.connection.sort_by_key(|(k, _)| *k);
    Ok(ModelFile {
        params: b.params,
        assumptions: b.assumptions,
        rules: b.rules,
        equations,
        j,
        f: b.f,
        connection: b.connection,
    })
}

/// A rules file: `rule:` lines (the prefix is optional) over `params`,
/// which further `params:` lines extend.
///
/// ```text
/// params: tau
/// rule: tau**2 -> (s**4 - 1)/(9*r**2*s**2)
/// ```
pub fn parse_rules(text: &str, params: &[String]) -> Result<RuleSet> {
    let mut b = Builder::new();
    b.params = params.to_vec();
    for (idx, raw) in text.lines().enumerate() {
        let line = idx + 1;
        let content = raw.split('#').next().unwrap_or("").trim_end();
        let indent = content.len() - content.trim_start().len();
        let body = content.trim_start();
        if body.is_empty() {
            continue;
        }
        let (word, rest) = body.split_once(':').map(|(w, r)| (w.trim(), r)).unwrap_or(("rule", body));
        let rest_col = if rest.len() == body.len() { indent } else { indent + word.chars().count() + 1 };
        match word {
            "params" => {
                for name in rest.split(|c: char| c.is_whitespace() || c == ',').filter(|s| !s.is_empty()) {
                    if !b.params.iter().any(|p| p == name) {
                        parse_params(&mut b, name, line, rest_col)?;
                    }
                }
            }
            "rule" => parse_rule(&mut b, rest, line, rest_col)?,
            _ => return Err(perr(line, indent + 1, format!("expected `rule:` or `params:`, found `{word}:`"))),
        }
    }
    Ok(b.rules)
}

fn parse_params(b: &mut Builder, rest: &str, line: usize, col: usize) -> Result<()> {
    if b.coframe.is_some() {
        return Err(perr(line, 1, "params must precede the coframe"));
    }
    for name in rest.split(|c: char| c.is_whitespace() || c == ',').filter(|s| !s.is_empty()) {
        if !is_ident(name) || name == "i" || name == PI2 {
            return Err(perr(line, col, format!("`{name}` is not a valid parameter name")));
        }
        if b.params.iter().any(|p| p == name) {
            return Err(perr(line, col, format!("parameter `{name}` declared twice")));
        }
        b.params.push(name.to_string());
    }
    Ok(())
}

fn parse_assume(b: &mut Builder, rest: &str, line: usize, col: usize) -> Result<()> {
    let Some((name, zero)) = rest.split_once("!=") else {
        return Err(perr(line, col, "expected `assume: <name> != 0`"));
    };
    let name = name.trim();
    if zero.trim() != "0" {
        return Err(perr(line, col, "expected `assume: <name> != 0`"));
    }
    if !b.params.iter().any(|p| p == name) {
        return Err(Error::UnknownParameter(name.into()));
    }
    b.assumptions.push(name.into());
    Ok(())
}

fn parse_rule(b: &mut Builder, rest: &str, line: usize, col: usize) -> Result<()> {
    let Some((lhs, rhs)) = rest.split_once("->") else {
        return Err(perr(line, col, "expected `rule: <name>**2 -> <expr>`"));
    };
    let name = lhs.trim().strip_suffix("**2").map(str::trim).ok_or_else(|| perr(line, col, "rules have the form `<name>**2 -> <expr>`"))?;
    if !b.params.iter().any(|p| p == name) {
        return Err(Error::UnknownParameter(name.into()));
    }
    let offset = col + lhs.chars().count() + 2;
    let value = parse::coefficient_at(rhs.trim(), &Scope::new(None, b.params.iter().cloned()), line, offset)?;
    b.rules.add(name, value)
}

fn parse_coframe(b: &mut Builder, rest: &str, line: usize, col: usize) -> Result<()> {
    if b.coframe.is_some() {
        return Err(perr(line, 1, "coframe declared twice"));
    }
    let (kind, names) = rest.split_once(':').ok_or_else(|| perr(line, col, "expected `coframe real|complex: <names>`"))?;
    let kind = match kind.trim() {
        "real" => CoframeKind::Real,
        "complex" => CoframeKind::Complex,
        other => return Err(perr(line, col, format!("unknown coframe kind `{other}`"))),
    };
    let names: Vec<String> = names.split(|c: char| c.is_whitespace() || c == ',').filter(|s| !s.is_empty()).map(String::from).collect();
    if names.is_empty() {
        return Err(perr(line, col + rest.chars().count(), "empty coframe declaration"));
    }
    for n in &names {
        if !is_ident(n) || n == "i" || n == PI2 || b.params.contains(n) {
            return Err(perr(line, col, format!("`{n}` is not a valid generator name")));
        }
    }
    let cf = Coframe::new(kind, names).map_err(|e| match e {
        Error::InvalidModel(m) => perr(line, col, m),
        e => e,
    })?;
    b.diffs = vec![None; cf.independent_generators()];
    b.coframe = Some(cf);
    Ok(())
}

impl ModelFile {
    pub fn coframe(&self) -> &Arc<Coframe> {
        self.equations.coframe()
    }

    pub fn param_vars(&self) -> Vec<Var> {
        self.params.iter().map(|p| Var::new(p)).collect()
    }

    /// `ω^k = (1/c_k)(e^{2k−1} + i e^{2k})` when `2F = i Σ c_k² ω^{kk̄}` with
    /// monomial `c_k`; the default identification when `F` is absent.
    pub fn adapted_map(&self) -> Result<Vec<Form>> {
        let cf = self.coframe();
        if cf.is_real() {
            return Err(Error::RealCoframe);
        }
        let real = Coframe::standard_real();
        let default = default_realification_map(&real);
        let Some(f) = &self.f else {
            return Ok(default);
        };
        let mut scales = Vec::new();
        for k in 0..3 {
            let c = f.component(&[k, k + 3]);
            // F = (i/2) c² ω^{kk̄}
            let sq = &c * &(&Coefficient::int(-2) * &Coefficient::i());
            let root = sq.monomial_sqrt().ok_or_else(|| {
                Error::InvalidModel(format!("F coefficient of {}^~{} is not (i/2) times a monomial square", cf.generator_name(k), cf.generator_name(k)))
            })?;
            scales.push(root);
        }
        let diagonal = (0..3).fold(Form::zero(cf), |acc, k| {
            &acc + &Form::monomial(cf, &[k, k + 3], f.component(&[k, k + 3]))
        });
        if &diagonal != f {
            return Err(Error::InvalidModel("F is not diagonal in the complex coframe".into()));
        }
        Ok(default.iter().zip(&scales).map(|(w, c)| w.scale(&c.inv().expect("nonzero root"))).collect())
    }

    /// Real equations and `J`: realified through [`Self::adapted_map`] for
    /// complex models, as given (default adapted `J`) for real ones.
    pub fn real_structure(&self) -> Result<(StructureEquations, JAction)> {
        if self.coframe().is_real() {
            return Ok((self.equations.clone(), self.j.clone().unwrap_or_else(JAction::adapted)));
        }
        self.equations.realify(&self.adapted_map()?, &self.rules)
    }

    /// The model as an SU(3)-structure in an adapted orthonormal coframe.
    pub fn su3_model(&self) -> Result<SU3Model> {
        let (eqs, j) = self.real_structure()?;
        if j != JAction::adapted() {
            return Err(Error::InvalidModel("J is not adapted (Je1 = -e2, Je3 = -e4, Je5 = -e6)".into()));
        }
        if self.coframe().is_real() {
            if let Some(f) = &self.f {
                if f != &standard_kahler_form(self.coframe()) {
                    return Err(Error::InvalidModel("F must be e1^e2 + e3^e4 + e5^e6 in a real model".into()));
                }
            }
        }
        SU3Model::new(eqs, j)
    }

    /// The connection given by `sigma` lines, if any.
    pub fn custom_connection(&self) -> Result<Option<Connection>> {
        if self.connection.is_empty() {
            return Ok(None);
        }
        Connection::from_upper(self.coframe(), &self.connection).map(Some)
    }

    /// Every parameter a computation may leave symbolic.
    pub fn symbols(&self) -> BTreeSet<Var> {
        self.param_vars().into_iter().collect()
    }
}

impl fmt::Display for ModelFile {
    /// Canonical text; [`parse_model`] reads it back to an equal model.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let cf = self.coframe();
        if !self.params.is_empty() {
            writeln!(f, "params: {}", self.params.join(" "))?;
        }
        for a in &self.assumptions {
            writeln!(f, "assume: {a} != 0")?;
        }
        for r in self.rules.rules() {
            writeln!(f, "rule: {r}")?;
        }
        let kind = if cf.is_real() { "real" } else { "complex" };
        writeln!(f, "coframe {kind}: {}", cf.names().join(" "))?;
        for (k, d) in self.equations.differentials().iter().enumerate() {
            writeln!(f, "d {} = {d}", cf.generator_name(k))?;
        }
        if let Some(j) = &self.j {
            for k in 0..RANK {
                writeln!(f, "J {} = {}", cf.generator_name(k), j.image(cf, k))?;
            }
        }
        if let Some(form) = &self.f {
            writeln!(f, "F = {form}")?;
        }
        for ((i, j), s) in &self.connection {
            writeln!(f, "sigma {} {} = {s}", i + 1, j + 1)?;
        }
        Ok(())
    }
}

/// `Form` of the frame blade with unit coefficient.
pub fn blade_form(cf: &Arc<Coframe>, idx: &[usize]) -> Form {
    let (sign, b) = Blade::from_indices(idx).expect("distinct indices");
    Form::term(cf, b, Coefficient::int(sign as i64))
}
