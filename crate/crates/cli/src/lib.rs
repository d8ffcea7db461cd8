//! The `nilform` command line: argument handling, model loading and the
//! text every subcommand prints.
//!
//! [`run_command`] does all the work and returns the exit status with the
//! output, so tests can call it without spawning a process.

use std::fmt::Write as _;
use std::path::Path;

use clap::{Args, Parser, Subcommand, ValueEnum};

use nilform::anomaly::{solve_anomaly, strominger_report};
use nilform::builtin::{self, NAMES};
use nilform::coeffield::{Assignment, Coefficient, RuleSet, Var, PI2};
use nilform::complexgeom::{check_balanced, check_integrable, classify_complex_structure, Family, SU3Model, Sign};
use nilform::connections::{
    bismut, chern, curvature, instanton_check, instanton_family, levi_civita, pontrjagin_trace, su3_connection_check,
    su3_curvature_check, Connection, CurvatureMatrix,
};
use nilform::exterior::{Form, RANK};
use nilform::model::{parse_model, parse_rules, ModelFile};
use nilform::numeric::{is_degenerate, Sampler, DEFAULT_SAMPLES, DEFAULT_SEED};
use nilform::{reproduce, Error, Result};

pub const PASS: i32 = 0;
pub const FAIL: i32 = 1;
pub const ERROR: i32 = 2;

const MAX_ATTEMPTS: usize = 64;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CommandResult {
    pub status: i32,
    pub text: String,
}

#[derive(Parser)]
#[command(name = "nilform", version, about = "Exact SU(3)-structure computations on six-dimensional nilpotent Lie algebras")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run a pass/fail check on a model
    Check {
        what: CheckKind,
        #[command(flatten)]
        opts: Opts,
    },
    /// Ascending series of the complex structure and nilpotency
    Classify {
        #[command(flatten)]
        opts: Opts,
    },
    /// Print a computed form, or the entries of a connection or curvature
    Compute {
        what: ComputeKind,
        #[command(flatten)]
        opts: Opts,
    },
    /// Solve dT = M (p1(connection) - p1(A)) for M and alpha' = M/(2 pi2)
    Solve {
        what: SolveKind,
        #[command(flatten)]
        opts: Opts,
    },
    /// Bismut holonomy, balance, instanton and anomaly conditions together
    Report {
        what: ReportKind,
        #[command(flatten)]
        opts: Opts,
    },
    /// Run every acceptance criterion over the built-in models
    Reproduce { what: ReproduceKind },
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum CheckKind {
    Jacobi,
    Integrable,
    Balanced,
    Instanton,
    Su3,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum ComputeKind {
    Torsion,
    Connection,
    Curvature,
    P1,
    #[value(name = "dT")]
    DT,
    Lee,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum SolveKind {
    Anomaly,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum ReportKind {
    Strominger,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum ReproduceKind {
    Paper,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum ConnectionArg {
    Chern,
    Bismut,
    LeviCivita,
    /// The model's `sigma` lines, or A_{lambda,mu,tau} without them
    #[value(name = "A")]
    A,
}

#[derive(Args, Clone)]
struct Opts {
    /// Model file, or a built-in name (family1, family2, general, eps0, eps1, beta, abelian)
    model: Option<String>,
    /// Sign of the built-in model
    #[arg(long, value_parser = parse_sign, allow_hyphen_values = true)]
    sign: Option<Sign>,
    /// Built-in family model instead of MODEL
    #[arg(long, value_parser = parse_family)]
    family: Option<Family>,
    /// Fix a parameter, e.g. --set r=1 --set tau=1/3
    #[arg(long = "set", value_name = "NAME=P/Q")]
    set: Vec<String>,
    /// Extra `rule: name**2 -> expr` lines
    #[arg(long, value_name = "FILE")]
    rules: Option<String>,
    #[arg(long, value_enum)]
    connection: Option<ConnectionArg>,
    /// Recompute at random rational points and compare
    #[arg(long)]
    verify_numeric: bool,
}

fn parse_sign(s: &str) -> std::result::Result<Sign, String> {
    match s {
        "+" | "plus" => Ok(Sign::Plus),
        "-" | "minus" => Ok(Sign::Minus),
        _ => Err(format!("expected + or -, found `{s}`")),
    }
}

fn parse_family(s: &str) -> std::result::Result<Family, String> {
    match s {
        "I" | "1" => Ok(Family::I),
        "II" | "2" => Ok(Family::II),
        _ => Err(format!("expected I or II, found `{s}`")),
    }
}

/// Parses `argv` (program name first) and runs the command.
pub fn run_command<I, T>(argv: I) -> CommandResult
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            let status = if e.use_stderr() { ERROR } else { PASS };
            return CommandResult { status, text: e.render().to_string() };
        }
    };
    match execute(cli.command) {
        Ok(r) => r,
        Err(e) => CommandResult { status: ERROR, text: format!("error: {e}\n") },
    }
}

fn execute(command: Command) -> Result<CommandResult> {
    let (task, opts) = match command {
        Command::Reproduce { what: ReproduceKind::Paper } => {
            let ledger = reproduce::run();
            let status = if ledger.passes() { PASS } else { FAIL };
            return Ok(CommandResult { status, text: format!("{ledger}\n") });
        }
        Command::Check { what, opts } => (Task::Check(what), opts),
        Command::Classify { opts } => (Task::Classify, opts),
        Command::Compute { what, opts } => (Task::Compute(what), opts),
        Command::Solve { what: SolveKind::Anomaly, opts } => (Task::Anomaly, opts),
        Command::Report { what: ReportKind::Strominger, opts } => (Task::Strominger, opts),
    };
    let ctx = Context::load(&opts)?;
    let outcome = task.evaluate(&ctx)?;
    let mut text = String::new();
    for line in &outcome.lines {
        writeln!(text, "{line}").unwrap();
    }
    let mut passed = outcome.verdict != Some(false);
    if opts.verify_numeric {
        let (lines, agree) = verify_numeric(task, &ctx, &outcome)?;
        for line in lines {
            writeln!(text, "{line}").unwrap();
        }
        passed &= agree;
    }
    Ok(CommandResult { status: if passed { PASS } else { FAIL }, text })
}

/// A loaded model together with the `--set` values and rules in force.
#[derive(Clone)]
struct Context {
    model: ModelFile,
    rules: RuleSet,
    at: Assignment,
    connection: Option<ConnectionArg>,
}

fn load_model(opts: &Opts) -> Result<ModelFile> {
    let sign = opts.sign.unwrap_or(Sign::Plus);
    match (&opts.model, opts.family) {
        (Some(_), Some(_)) => Err(Error::InvalidModel("give either MODEL or --family, not both".into())),
        (None, Some(f)) => builtin::family(f, sign),
        (None, None) => Err(Error::InvalidModel("no model given".into())),
        (Some(m), None) => {
            let path = Path::new(m);
            if path.is_file() {
                if opts.sign.is_some() {
                    return Err(Error::InvalidModel(format!("--sign selects a built-in model; `{m}` is read as written")));
                }
                let text = std::fs::read_to_string(path).map_err(|e| Error::InvalidModel(format!("{m}: {e}")))?;
                return parse_model(&text);
            }
            let stem = path.file_stem().and_then(|s| s.to_str()).unwrap_or(m);
            if NAMES.contains(&stem) {
                builtin::builtin(stem, sign)
            } else {
                Err(Error::InvalidModel(format!("`{m}` is neither a file nor a built-in model ({})", NAMES.join(", "))))
            }
        }
    }
}

impl Context {
    fn load(opts: &Opts) -> Result<Self> {
        let model = load_model(opts)?;
        let set: Vec<&str> = opts.set.iter().map(String::as_str).collect();
        let at = Assignment::parse_pairs(&set)?;
        let mut rules = model.rules.clone();
        if let Some(path) = &opts.rules {
            let text = std::fs::read_to_string(path).map_err(|e| Error::InvalidModel(format!("{path}: {e}")))?;
            let mut params = model.params.clone();
            params.extend(["lambda", "mu", "tau"].map(String::from));
            for r in parse_rules(&text, &params)?.rules() {
                rules.add(r.var.name(), r.replacement.clone())?;
            }
        }
        Ok(Self { model, rules, at, connection: opts.connection })
    }

    /// The same context with more parameters fixed.
    fn at(&self, a: &Assignment) -> Self {
        let mut ctx = self.clone();
        for (v, q) in a.iter() {
            ctx.at.set(v.name(), q.clone());
        }
        ctx
    }

    fn rules(&self) -> Result<RuleSet> {
        self.rules.specialize(&self.at)
    }

    fn su3(&self) -> Result<SU3Model> {
        Ok(self.model.su3_model()?.specialize(&self.at)?.apply_rules(&self.rules()?))
    }

    fn connection(&self, m: &SU3Model, kind: ConnectionArg) -> Result<Connection> {
        let c = match kind {
            ConnectionArg::Chern => chern(m)?,
            ConnectionArg::Bismut => bismut(m)?,
            ConnectionArg::LeviCivita => levi_civita(&m.equations)?,
            ConnectionArg::A => return self.gauge(m),
        };
        Ok(c.apply_rules(&self.rules()?))
    }

    /// The `A` connection: `sigma` lines of the model, else `A_{λ,μ,τ}`.
    fn gauge(&self, m: &SU3Model) -> Result<Connection> {
        let c = match self.model.custom_connection()? {
            Some(c) => c,
            None => {
                let v = Coefficient::var;
                instanton_family(m.coframe(), &v("lambda"), &v("mu"), &v("tau"))
            }
        };
        if c.sigma[0][0].coframe() != m.coframe() {
            return Err(Error::CoframeMismatch);
        }
        let sigma = c.sigma.iter().map(|row| row.iter().map(|f| f.specialize(&self.at)).collect()).collect::<Result<_>>()?;
        Ok(Connection { sigma, ..c }.apply_rules(&self.rules()?))
    }

    fn curvature(&self, m: &SU3Model, c: &Connection) -> Result<CurvatureMatrix> {
        Ok(curvature(c, &m.equations)?.apply_rules(&self.rules()?))
    }

    /// Parameters a numeric check draws values for.
    fn free_vars(&self, values: &[(String, Form)]) -> Vec<Var> {
        let mut vars = self.model.symbols();
        for (_, f) in values {
            for (_, c) in f.terms() {
                vars.extend(c.vars());
            }
        }
        vars.into_iter().filter(|v| v.name() != PI2 && self.at.get(*v).is_none() && !self.rules.is_rule_var(*v)).collect()
    }
}

/// What a command printed and what a numeric check compares.
struct Outcome {
    lines: Vec<String>,
    verdict: Option<bool>,
    values: Vec<(String, Form)>,
    summary: Option<String>,
}

impl Outcome {
    fn new(verdict: Option<bool>) -> Self {
        Self { lines: Vec::new(), verdict, values: Vec::new(), summary: None }
    }

    fn text(mut self, text: impl ToString) -> Self {
        self.lines.extend(text.to_string().lines().map(String::from));
        self
    }

    fn value(mut self, name: impl Into<String>, f: Form) -> Self {
        self.values.push((name.into(), f));
        self
    }

    fn matrix(mut self, name: &str, m: &[Vec<Form>]) -> Self {
        for i in 0..RANK {
            for j in i + 1..RANK {
                self.values.push((format!("{name} {} {}", i + 1, j + 1), m[i][j].clone()));
            }
        }
        self
    }
}

fn matrix_lines(name: &str, m: &[Vec<Form>]) -> Vec<String> {
    let mut out = Vec::new();
    for i in 0..RANK {
        for j in i + 1..RANK {
            if !m[i][j].is_zero() {
                out.push(format!("{name} {} {} = {}", i + 1, j + 1, m[i][j].display_factored()));
            }
        }
    }
    if out.is_empty() {
        out.push(format!("{name} = 0"));
    }
    out
}

#[derive(Clone, Copy)]
enum Task {
    Check(CheckKind),
    Classify,
    Compute(ComputeKind),
    Anomaly,
    Strominger,
}

impl Task {
    fn evaluate(self, ctx: &Context) -> Result<Outcome> {
        let chosen = |default| ctx.connection.unwrap_or(default);
        match self {
            Task::Check(CheckKind::Jacobi) => {
                let rules = ctx.rules()?;
                let eqs = ctx.model.equations.specialize(&ctx.at)?;
                let rep = eqs.check_jacobi_with(&rules);
                let mut out = Outcome::new(Some(rep.passes())).text(&rep);
                for (name, dd) in &rep.entries {
                    out = out.value(format!("d(d {name})"), dd.clone());
                }
                Ok(out)
            }
            Task::Check(CheckKind::Integrable) => {
                let rep = check_integrable(&ctx.model.equations.specialize(&ctx.at)?)?;
                let mut out = Outcome::new(Some(rep.passes())).text(&rep);
                for (name, part) in &rep.offending {
                    out = out.value(format!("(0,2)-part of d {name}"), part.clone());
                }
                Ok(out)
            }
            Task::Check(CheckKind::Balanced) => {
                let rules = ctx.rules()?;
                let rep = if ctx.model.coframe().is_real() {
                    let m = ctx.su3()?;
                    check_balanced(&m.equations, &m.f, &rules)?
                } else {
                    let f = ctx.model.f.as_ref().ok_or_else(|| Error::InvalidModel("balanced needs an F line".into()))?;
                    check_balanced(&ctx.model.equations.specialize(&ctx.at)?, &f.specialize(&ctx.at)?, &rules)?
                };
                let f_df = rep.f_wedge_df.clone();
                Ok(Outcome::new(Some(rep.passes())).text(&rep).value("F^dF", f_df))
            }
            Task::Check(CheckKind::Instanton) => {
                let m = ctx.su3()?;
                let kind = chosen(ConnectionArg::Chern);
                let omega = ctx.curvature(&m, &ctx.connection(&m, kind)?)?;
                let rep = instanton_check(&omega, &m.j);
                Ok(Outcome::new(Some(rep.passes()))
                    .text(format!("connection: {}", connection_name(kind)))
                    .text(&rep)
                    .matrix("Omega", &omega.omega))
            }
            Task::Check(CheckKind::Su3) => {
                let m = ctx.su3()?;
                let kind = chosen(ConnectionArg::Chern);
                let c = ctx.connection(&m, kind)?;
                let omega = ctx.curvature(&m, &c)?;
                let forms = su3_connection_check(&c);
                let holonomy = su3_curvature_check(&omega);
                let passes = forms.passes() && holonomy.passes();
                Ok(Outcome::new(Some(passes))
                    .text(format!("connection: {}", connection_name(kind)))
                    .text(format!("connection forms in su(3): {}", verdict(forms.passes())))
                    .text(format!("curvature in su(3): {}", verdict(holonomy.passes())))
                    .text(format!("su3: {}", verdict(passes)))
                    .matrix("sigma", &c.sigma)
                    .matrix("Omega", &omega.omega))
            }
            Task::Classify => {
                let (real, j) = ctx.model.real_structure()?;
                let (kind, chain) = classify_complex_structure(&real.specialize(&ctx.at)?, &j)?;
                let mut out = Outcome::new(None).text(&chain).text(format!("complex structure: {kind}"));
                out.summary = Some(format!("{kind} {:?}", chain.dimensions()));
                Ok(out)
            }
            Task::Compute(what) => {
                let m = ctx.su3()?;
                let single = |name: &str, f: Form| Outcome::new(None).text(f.display_factored()).value(name, f);
                match what {
                    ComputeKind::Torsion => Ok(single("T", m.torsion())),
                    ComputeKind::DT => Ok(single("dT", m.dt())),
                    ComputeKind::Lee => Ok(single("theta", m.lee_form())),
                    ComputeKind::P1 => {
                        let omega = ctx.curvature(&m, &ctx.connection(&m, chosen(ConnectionArg::Chern))?)?;
                        Ok(single("p1", pontrjagin_trace(&omega).1.apply_rules(&ctx.rules()?)))
                    }
                    ComputeKind::Connection => {
                        let c = ctx.connection(&m, chosen(ConnectionArg::Chern))?;
                        let mut out = Outcome::new(None);
                        out.lines = matrix_lines("sigma", &c.sigma);
                        Ok(out.matrix("sigma", &c.sigma))
                    }
                    ComputeKind::Curvature => {
                        let omega = ctx.curvature(&m, &ctx.connection(&m, chosen(ConnectionArg::Chern))?)?;
                        let mut out = Outcome::new(None);
                        out.lines = matrix_lines("Omega", &omega.omega);
                        Ok(out.matrix("Omega", &omega.omega))
                    }
                }
            }
            Task::Anomaly => {
                let m = ctx.su3()?;
                let rules = ctx.rules()?;
                let kind = chosen(ConnectionArg::Chern);
                let (_, p1n) = pontrjagin_trace(&ctx.curvature(&m, &ctx.connection(&m, kind)?)?);
                let (_, p1a) = pontrjagin_trace(&ctx.curvature(&m, &ctx.gauge(&m)?)?);
                let out = Outcome::new(None).text(format!("connection: {}", connection_name(kind)));
                match solve_anomaly(&m.dt(), &p1n, &p1a, &rules) {
                    Ok(s) => {
                        let mut out = out.text(&s);
                        out.verdict = Some(s.residual.is_zero());
                        if s.alpha_prime.constant_value().is_some() {
                            let at = s.clone().with_samples(&[Assignment::new()])?;
                            out = out.text(format!("alpha' positive: {}", yes_no(at.positive_at_samples())));
                        }
                        let cf = m.coframe();
                        Ok(out
                            .text(format!("anomaly: {}", verdict(s.residual.is_zero())))
                            .value("M", Form::scalar(cf, s.multiplier.clone()))
                            .value("residual", s.residual))
                    }
                    Err(e @ (Error::NotProportional(_) | Error::ZeroDifference)) => {
                        let mut out = out.text(&e).text("anomaly: fail");
                        out.verdict = Some(false);
                        Ok(out)
                    }
                    Err(e) => Err(e),
                }
            }
            Task::Strominger => {
                let m = ctx.su3()?;
                let a = ctx.gauge(&m)?;
                let rules = ctx.rules()?;
                let free = ctx.free_vars(&[]);
                let mut sampler = Sampler::new(DEFAULT_SEED);
                let samples: Vec<Assignment> = if free.is_empty() {
                    vec![Assignment::new()]
                } else {
                    (0..DEFAULT_SAMPLES).map(|_| sampler.assignment(&free)).collect()
                };
                let rep = strominger_report(&m, &a, &rules, &samples)?;
                let mut out = Outcome::new(Some(rep.passes())).text(&rep);
                out.summary = Some(format!(
                    "{} {} {} {}",
                    rep.bismut_passes(),
                    rep.balanced_passes(),
                    rep.instanton_passes(),
                    rep.anomaly_passes()
                ));
                Ok(out)
            }
        }
    }
}

fn connection_name(kind: ConnectionArg) -> &'static str {
    match kind {
        ConnectionArg::Chern => "chern",
        ConnectionArg::Bismut => "bismut",
        ConnectionArg::LeviCivita => "levi-civita",
        ConnectionArg::A => "A",
    }
}

fn verdict(passed: bool) -> &'static str {
    if passed {
        "pass"
    } else {
        "fail"
    }
}

fn yes_no(b: bool) -> &'static str {
    if b {
        "yes"
    } else {
        "no"
    }
}

/// Recomputes the task at random rational points. Every value must match
/// the symbolic one evaluated there, and a symbolic pass must pass at
/// every point.
fn verify_numeric(task: Task, ctx: &Context, symbolic: &Outcome) -> Result<(Vec<String>, bool)> {
    let vars = ctx.free_vars(&symbolic.values);
    let mut sampler = Sampler::new(DEFAULT_SEED);
    let mut lines = Vec::new();
    let mut points = 0;
    let mut agreeing = 0;
    for _ in 0..MAX_ATTEMPTS {
        if points == DEFAULT_SAMPLES {
            break;
        }
        let a = sampler.assignment(&vars);
        let attempt = (|| {
            let here = ctx.at(&a);
            let rules = here.rules()?;
            let got = task.evaluate(&here)?;
            let mut problems = Vec::new();
            for (name, f) in &symbolic.values {
                let want = f.specialize(&here.at)?.apply_rules(&rules);
                let found = got.values.iter().find(|(n, _)| n == name).map(|(_, g)| g.apply_rules(&rules));
                match found {
                    Some(g) if g == want => {}
                    Some(g) => problems.push(format!("{name} differs by {}", &g - &want)),
                    None => problems.push(format!("{name} missing")),
                }
            }
            if symbolic.verdict == Some(true) && got.verdict != Some(true) {
                problems.push("check fails".into());
            }
            if symbolic.summary.is_some() && got.summary != symbolic.summary {
                problems.push(format!("result differs: {}", got.summary.unwrap_or_default()));
            }
            Ok::<_, Error>(problems)
        })();
        match attempt {
            Ok(problems) => {
                points += 1;
                if problems.is_empty() {
                    agreeing += 1;
                    lines.push(format!("numeric {a}: agree"));
                } else {
                    lines.push(format!("numeric {a}: {}", problems.join("; ")));
                }
            }
            Err(e) if is_degenerate(&e) => {}
            Err(e) => return Err(e),
        }
    }
    let passed = points > 0 && agreeing == points;
    lines.push(format!("numeric cross-check: {} ({agreeing} of {points} points agree)", verdict(passed)));
    Ok((lines, passed))
}
