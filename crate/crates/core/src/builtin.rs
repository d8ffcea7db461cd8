//! Built-in models, addressed by name.

use crate::coeffield::Coefficient;
use crate::complexgeom::{Family, HermitianData, Sign};
use crate::error::{Error, Result};
use crate::model::{parse_model, ModelFile};

pub const NAMES: [&str; 7] = ["family1", "family2", "general", "eps0", "eps1", "beta", "abelian"];

const FAMILY1: &str = "\
# Family I: 2F = i(r^2 w1^~w1 + s^2 w2^~w2 + w3^~w3)
params: r s
assume: r != 0
assume: s != 0
coframe complex: w1 w2 w3
d w1 = 0
d w2 = w1^w3 + w1^~w3
d w3 = PM i*(w1^~w2 - w2^~w1)
F = (1/2)*i*(r**2*w1^~w1 + s**2*w2^~w2 + w3^~w3)
";

const GENERAL: &str = "\
# general non-nilpotent complex structure, |E| = 1
params: A_re A_im E_re E_im b
assume: b != 0
rule: E_im**2 -> 1 - E_re**2
coframe complex: w1 w2 w3
d w1 = 0
d w2 = (E_re + i*E_im)*w1^w3 + w1^~w3
d w3 = (A_re + i*A_im)*w1^~w1 + i*b*w1^~w2 - i*b*(E_re - i*E_im)*w2^~w1
";

const NORMAL: &str = "\
coframe complex: w1 w2 w3
d w1 = 0
d w2 = w1^w3 + w1^~w3
d w3 = EPS*i*w1^~w1 PM i*(w1^~w2 - w2^~w1)
";

const BETA: &str = "\
coframe real: b1 b2 b3 b4 b5 b6
d b4 = b1^b3
d b5 = b2^b3
d b6 = b1^b4 + b2^b5
";

const ABELIAN: &str = "coframe real: e1 e2 e3 e4 e5 e6\n";

fn signed(text: &str, sign: Sign) -> String {
    let (pm, _) = match sign {
        Sign::Plus => ("+", "-"),
        Sign::Minus => ("-", "+"),
    };
    text.replace("PM", pm)
}

pub fn builtin(name: &str, sign: Sign) -> Result<ModelFile> {
    let text = match name {
        "family1" => signed(FAMILY1, sign),
        "family2" => return family2(sign),
        "general" => GENERAL.to_string(),
        "eps0" => signed(NORMAL, sign).replace("EPS*", "0*"),
        "eps1" => signed(NORMAL, sign).replace("EPS*", ""),
        "beta" => BETA.to_string(),
        "abelian" => ABELIAN.to_string(),
        _ => return Err(Error::InvalidModel(format!("no built-in model `{name}` (known: {})", NAMES.join(", ")))),
    };
    parse_model(&text)
}

pub fn family(f: Family, sign: Sign) -> Result<ModelFile> {
    builtin(if f == Family::I { "family1" } else { "family2" }, sign)
}

/// Family II in the coframe `σ¹ = ω¹, σ² = ω² + (i/(2p²))ω³,
/// σ³ = iω² − (1/(2q²))ω³`, where `2F = i(r²σ^{11̄} + p²σ^{22̄} + q²σ^{33̄})`.
fn family2(sign: Sign) -> Result<ModelFile> {
    let base = builtin("eps0", sign)?;
    let c = |t: &str| crate::parse::coefficient(t, &["p", "q"]).expect("well-formed");
    let m = vec![
        vec![Coefficient::one(), Coefficient::zero(), Coefficient::zero()],
        vec![Coefficient::zero(), Coefficient::one(), c("i/(2*p**2)")],
        vec![Coefficient::zero(), Coefficient::i(), c("-1/(2*q**2)")],
    ];
    let (equations, _) = base.equations.transform(&m, None)?;
    let sq = |n: &str| Coefficient::var(n).pow(2).expect("positive power");
    let f = HermitianData::diagonal(sq("r"), sq("p"), sq("q")).fundamental_form(equations.coframe())?;
    Ok(ModelFile {
        params: vec!["r".into(), "p".into(), "q".into()],
        assumptions: vec!["r".into(), "p".into(), "q".into()],
        rules: Default::default(),
        equations,
        j: None,
        f: Some(f),
        connection: Vec::new(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn all_builtins_load_and_round_trip() {
        for name in NAMES {
            for sign in [Sign::Plus, Sign::Minus] {
                let m = builtin(name, sign).unwrap();
                assert_eq!(parse_model(&m.to_string()).unwrap(), m, "{name}");
            }
        }
        assert!(builtin("nope", Sign::Plus).is_err());
    }
}
