//! Structure equations of a 6-dimensional Lie algebra on the coframe side,
//! the Chevalley–Eilenberg differential, coframe changes and realification.

use std::collections::BTreeSet;
use std::fmt;
use std::sync::Arc;

use crate::coeffield::{Assignment, Coefficient, RuleSet, Var};
use crate::error::{Error, Result};
use crate::exterior::{Blade, Coframe, Form, JAction, RANK};
use crate::linalg::{self, Matrix};

/// A coframe together with the differential of each generator.
///
/// On complex coframes only `dω^1, dω^2, dω^3` are stored; the conjugate
/// generators get the conjugate differentials.
#[derive(Clone, PartialEq, Eq)]
pub struct StructureEquations {
    coframe: Arc<Coframe>,
    diffs: Vec<Form>,
}

impl StructureEquations {
    pub fn new(coframe: &Arc<Coframe>, diffs: Vec<Form>) -> Result<Self> {
        if diffs.len() != coframe.independent_generators() {
            return Err(Error::InvalidModel(format!(
                "expected {} differentials, got {}",
                coframe.independent_generators(),
                diffs.len()
            )));
        }
        for d in &diffs {
            if d.coframe() != coframe {
                return Err(Error::CoframeMismatch);
            }
            if !d.is_zero() && d.degree() != Some(2) {
                return Err(Error::InvalidModel(format!("differential `{d}` is not a 2-form")));
            }
        }
        Ok(Self { coframe: coframe.clone(), diffs })
    }

    /// All differentials zero.
    pub fn abelian(coframe: &Arc<Coframe>) -> Self {
        let diffs = vec![Form::zero(coframe); coframe.independent_generators()];
        Self { coframe: coframe.clone(), diffs }
    }

    pub fn coframe(&self) -> &Arc<Coframe> {
        &self.coframe
    }

    pub fn is_real(&self) -> bool {
        self.coframe.is_real()
    }

    /// Stored differentials, one per independent generator.
    pub fn differentials(&self) -> &[Form] {
        &self.diffs
    }

    /// Differential of generator `idx` (conjugate generators included).
    pub fn generator_differential(&self, idx: usize) -> Form {
        if idx < self.diffs.len() {
            self.diffs[idx].clone()
        } else {
            self.diffs[idx - self.diffs.len()].conjugate()
        }
    }

    pub fn parameters(&self) -> BTreeSet<Var> {
        let mut out = BTreeSet::new();
        for d in &self.diffs {
            for (_, c) in d.terms() {
                out.extend(c.vars());
            }
        }
        out
    }

    pub fn differential(&self, a: &Form) -> Result<Form> {
        if a.coframe() != &self.coframe {
            return Err(Error::CoframeMismatch);
        }
        let gens: Vec<Form> = (0..RANK).map(|i| self.generator_differential(i)).collect();
        let mut out = Form::zero(&self.coframe);
        for (b, c) in a.terms() {
            let db = self.blade_differential(b, &gens);
            for (nb, nc) in db.scale(c).terms() {
                out.add_term(nb, nc.clone());
            }
        }
        Ok(out)
    }

    fn blade_differential(&self, b: Blade, gens: &[Form]) -> Form {
        let idx: Vec<usize> = b.indices().collect();
        let one = Form::scalar(&self.coframe, Coefficient::one());
        let mut out = Form::zero(&self.coframe);
        for (p, &g) in idx.iter().enumerate() {
            if gens[g].is_zero() {
                continue;
            }
            let before = idx[..p].iter().fold(one.clone(), |acc, &i| &acc ^ &Form::generator(&self.coframe, i));
            let after = idx[p + 1..].iter().fold(one.clone(), |acc, &i| &acc ^ &Form::generator(&self.coframe, i));
            let term = &(&before ^ &gens[g]) ^ &after;
            out = if p % 2 == 0 { &out + &term } else { &out - &term };
        }
        out
    }

    /// `a^k_{ij} = de^k(e_i, e_j)`; real coframes only.
    pub fn structure_constant(&self, k: usize, i: usize, j: usize) -> Coefficient {
        self.generator_differential(k).component(&[i, j])
    }

    /// Frame components of `[X, Y]`, using `de^k(X, Y) = −e^k([X, Y])`.
    pub fn bracket(&self, x: &[Coefficient], y: &[Coefficient]) -> Vec<Coefficient> {
        (0..RANK)
            .map(|k| {
                let dk = self.generator_differential(k);
                let v = dk.evaluate_on_vectors(&[x.to_vec(), y.to_vec()]).unwrap_or_else(|_| Coefficient::zero());
                -v
            })
            .collect()
    }

    pub fn check_jacobi(&self) -> JacobiReport {
        self.check_jacobi_with(&RuleSet::new())
    }

    /// `d(d g)` for every generator, reduced modulo `rules`.
    pub fn check_jacobi_with(&self, rules: &RuleSet) -> JacobiReport {
        let entries = (0..self.coframe.independent_generators())
            .map(|i| {
                let dd = self.differential(&self.diffs[i]).expect("same coframe").apply_rules(rules);
                (self.coframe.generator_name(i), dd)
            })
            .collect();
        JacobiReport { entries }
    }

    pub fn apply_rules(&self, rules: &RuleSet) -> Self {
        Self { coframe: self.coframe.clone(), diffs: self.diffs.iter().map(|d| d.apply_rules(rules)).collect() }
    }

    pub fn specialize(&self, a: &Assignment) -> Result<Self> {
        let diffs = self.diffs.iter().map(|d| d.specialize(a)).collect::<Result<_>>()?;
        Ok(Self { coframe: self.coframe.clone(), diffs })
    }

    /// Rewrites the equations (and optionally `f`) in the coframe
    /// `new^i = Σ_j m[i][j] old^j`. Complex coframes take a 3×3 matrix
    /// acting on the (1,0)-generators.
    pub fn transform(&self, m: &Matrix, f: Option<&Form>) -> Result<(Self, Option<Form>)> {
        let full = self.full_transformation(m)?;
        let inv = linalg::inverse(&full).ok_or(Error::SingularTransformation)?;
        let old_in_new: Vec<Form> = (0..RANK).map(|j| one_form(&self.coframe, &inv[j])).collect();
        let mut diffs = Vec::new();
        for row in full.iter().take(self.coframe.independent_generators()) {
            let mut d = Form::zero(&self.coframe);
            for (j, c) in row.iter().enumerate() {
                if !c.is_zero() {
                    d = &d + &self.generator_differential(j).scale(c);
                }
            }
            diffs.push(d.pullback(&old_in_new, &self.coframe));
        }
        let f = match f {
            Some(f) if f.coframe() != &self.coframe => return Err(Error::CoframeMismatch),
            Some(f) => Some(f.pullback(&old_in_new, &self.coframe)),
            None => None,
        };
        Ok((Self { coframe: self.coframe.clone(), diffs }, f))
    }

    fn full_transformation(&self, m: &Matrix) -> Result<Matrix> {
        let n = self.coframe.independent_generators();
        if m.len() != n || m.iter().any(|row| row.len() != n) {
            return Err(Error::InvalidModel(format!("transformation must be {n}x{n}")));
        }
        if self.is_real() {
            return Ok(m.clone());
        }
        let mut full = linalg::zeros(RANK, RANK);
        for i in 0..3 {
            for j in 0..3 {
                full[i][j] = m[i][j].clone();
                full[i + 3][j + 3] = m[i][j].conjugate();
            }
        }
        Ok(full)
    }

    /// Real equations on `real` from complex ones, given each `ω^k` as a
    /// complex combination `map[k]` of the real generators. Also returns
    /// the induced `J` (`Jω = iω` on (1,0)-forms).
    pub fn realify(&self, map: &[Form], rules: &RuleSet) -> Result<(Self, JAction)> {
        if self.is_real() {
            return Err(Error::RealCoframe);
        }
        if map.len() != 3 {
            return Err(Error::SingularMap);
        }
        let real = map[0].coframe().clone();
        if !real.is_real() || map.iter().any(|f| f.coframe() != &real || (!f.is_zero() && f.degree() != Some(1))) {
            return Err(Error::SingularMap);
        }
        // rows: ω^1..ω^3, ω̄^1..ω̄^3 in terms of α^1..α^6
        let mut p = linalg::zeros(RANK, RANK);
        for (k, f) in map.iter().enumerate() {
            for j in 0..RANK {
                let c = f.component(&[j]);
                p[k + 3][j] = c.conjugate();
                p[k][j] = c;
            }
        }
        let pinv = linalg::map(&linalg::inverse(&p).ok_or(Error::SingularMap)?, |c| rules.apply(c));
        let complex_images: Vec<Form> = (0..RANK).map(|l| one_form(&real, &p[l])).collect();
        let mut diffs = Vec::new();
        for row in &pinv {
            let mut d = Form::zero(&self.coframe);
            for (l, c) in row.iter().enumerate() {
                if !c.is_zero() {
                    d = &d + &self.generator_differential(l).scale(c);
                }
            }
            let d = d.pullback(&complex_images, &real).apply_rules(rules);
            if d.terms().any(|(_, c)| !c.is_real()) {
                return Err(Error::SingularMap);
            }
            diffs.push(d);
        }
        let mut diag = linalg::zeros(RANK, RANK);
        for (l, row) in diag.iter_mut().enumerate() {
            row[l] = if l < 3 { Coefficient::i() } else { -Coefficient::i() };
        }
        let jm = linalg::map(&linalg::mul(&linalg::mul(&pinv, &diag), &p), |c| rules.apply(c));
        if jm.iter().flatten().any(|c| !c.is_real()) {
            return Err(Error::SingularMap);
        }
        let j = JAction::new(jm)?;
        Ok((Self { coframe: real, diffs }, j))
    }
}

/// `ω^k = e^{2k−1} + i e^{2k}` on the given real coframe.
pub fn default_realification_map(real: &Arc<Coframe>) -> Vec<Form> {
    (0..3)
        .map(|k| {
            &Form::generator(real, 2 * k) + &Form::term(real, Blade::generator(2 * k + 1), Coefficient::i())
        })
        .collect()
}

fn one_form(coframe: &Arc<Coframe>, coeffs: &[Coefficient]) -> Form {
    let mut f = Form::zero(coframe);
    for (j, c) in coeffs.iter().enumerate() {
        f.add_term(Blade::generator(j), c.clone());
    }
    f
}

pub fn structures_equal(a: &StructureEquations, b: &StructureEquations) -> Result<bool> {
    if a.coframe != b.coframe {
        return Err(Error::CoframeMismatch);
    }
    Ok(a.diffs == b.diffs)
}

impl fmt::Display for StructureEquations {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, d) in self.diffs.iter().enumerate() {
            writeln!(f, "d {} = {d}", self.coframe.generator_name(i))?;
        }
        Ok(())
    }
}

impl fmt::Debug for StructureEquations {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

/// `d²` of every generator; passes when all vanish.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct JacobiReport {
    pub entries: Vec<(String, Form)>,
}

impl JacobiReport {
    pub fn passes(&self) -> bool {
        self.entries.iter().all(|(_, f)| f.is_zero())
    }
}

impl fmt::Display for JacobiReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (name, dd) in &self.entries {
            writeln!(f, "d(d {name}) = {dd}")?;
        }
        write!(f, "jacobi: {}", if self.passes() { "pass" } else { "fail" })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn e(cf: &Arc<Coframe>, idx: &[usize]) -> Form {
        let z: Vec<usize> = idx.iter().map(|i| i - 1).collect();
        Form::monomial(cf, &z, Coefficient::one())
    }

    #[test]
    fn failing_jacobi_reports_offender() {
        let cf = Coframe::standard_real();
        let z = Form::zero(&cf);
        let diffs = vec![z.clone(), z.clone(), e(&cf, &[1, 2]), e(&cf, &[3, 4]), z.clone(), z];
        let s = StructureEquations::new(&cf, diffs).unwrap();
        let rep = s.check_jacobi();
        assert!(!rep.passes());
        assert_eq!(rep.entries[3].1, e(&cf, &[1, 2, 4]));
    }

    #[test]
    fn closed_generators_have_zero_differential() {
        let cf = Coframe::standard_real();
        let z = Form::zero(&cf);
        let diffs = vec![z.clone(), z.clone(), e(&cf, &[1, 5]), z.clone(), z.clone(), z];
        let s = StructureEquations::new(&cf, diffs).unwrap();
        assert!(s.differential(&e(&cf, &[1, 2])).unwrap().is_zero());
        assert_eq!(s.differential(&e(&cf, &[3])).unwrap(), e(&cf, &[1, 5]));
        // bracket sign: de3(e1,e5) = 1 means [e1,e5] = -e3
        let unit = |i: usize| -> Vec<Coefficient> {
            (0..6).map(|k| if k == i { Coefficient::one() } else { Coefficient::zero() }).collect()
        };
        assert_eq!(s.bracket(&unit(0), &unit(4))[2], Coefficient::int(-1));
    }

    #[test]
    fn identity_transformation() {
        let cf = Coframe::standard_real();
        let z = Form::zero(&cf);
        let diffs = vec![z.clone(), z.clone(), z.clone(), e(&cf, &[1, 2]), e(&cf, &[2, 3]), z];
        let s = StructureEquations::new(&cf, diffs).unwrap();
        let f = e(&cf, &[1, 2]);
        let (t, tf) = s.transform(&linalg::identity(6), Some(&f)).unwrap();
        assert_eq!(t, s);
        assert_eq!(tf.unwrap(), f);
        assert_eq!(s.transform(&linalg::zeros(6, 6), None).unwrap_err(), Error::SingularTransformation);
    }

    #[test]
    fn abelian_realification() {
        let cf = Coframe::standard_complex();
        let s = StructureEquations::abelian(&cf);
        let real = Coframe::standard_real();
        let (rs, j) = s.realify(&default_realification_map(&real), &RuleSet::new()).unwrap();
        assert_eq!(rs, StructureEquations::abelian(&real));
        assert_eq!(j, JAction::adapted());
    }
}
