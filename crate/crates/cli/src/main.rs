use std::fs;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use superspin::clifford::build_spin_rep;
use superspin::coeff::{fmt_rational, parse_rational};
use superspin::confmod::Weights;
use superspin::invariants::{check_invariance, dirac_power, search_invariants_with, InvariantReport, ModuleTag};
use superspin::suites::{run_suite, Suite, SuiteConfig};
use superspin::{Error, Rational, Signature, SuperPolynomial};

/// Exact computations with spinor symbols and conformally invariant
/// operators on flat pseudo-Riemannian space.
#[derive(Parser)]
#[command(name = "superspin", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run a verification suite
    Verify {
        #[arg(long)]
        suite: String,
        /// Random instances per sampled identity
        #[arg(long, default_value_t = 20)]
        samples: usize,
        #[command(flatten)]
        common: Common,
    },
    /// Check a symbol for conformal invariance
    Check {
        /// Expression, or @path to read it from a file
        expr: String,
        #[command(flatten)]
        module: ModuleArgs,
        #[command(flatten)]
        common: Common,
    },
    /// Exact basis of the invariant symbols of a bidegree
    Search {
        /// k,kappa: degree in p and degree in xi
        #[arg(long, value_parser = parse_pair)]
        bidegree: (usize, usize),
        /// Allow coefficients polynomial in x up to this degree
        #[arg(long, default_value_t = 0)]
        max_x: usize,
        #[command(flatten)]
        module: ModuleArgs,
        #[command(flatten)]
        common: Common,
    },
    /// Normal-ordered conformal power of the Dirac operator
    DiracPower {
        #[arg(long, default_value_t = 0)]
        s: usize,
        /// Write the Clifford part in gamma matrices
        #[arg(long)]
        gamma: bool,
        #[command(flatten)]
        common: Common,
    },
    /// Matrices of the spinor representation
    SpinRep {
        /// Emit gamma = sqrt(2) c instead of c
        #[arg(long)]
        gamma: bool,
        #[command(flatten)]
        common: Common,
    },
    /// Parse an expression and print its canonical form
    Parse {
        /// Expression, or @path to read it from a file
        expr: String,
        #[command(flatten)]
        common: Common,
    },
}

#[derive(Args)]
struct Common {
    #[arg(long)]
    dim: Option<usize>,
    /// p,q with p + q = dim; Euclidean by default
    #[arg(long, value_parser = parse_pair)]
    signature: Option<(usize, usize)>,
    #[arg(long, value_enum, default_value_t = Format::Text)]
    format: Format,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Substitute this rational value for h in printed results
    #[arg(long, value_parser = parse_q)]
    specialize_h: Option<Rational>,
}

#[derive(Args)]
struct ModuleArgs {
    /// T (tensorial), S (Hamiltonian) or D (operators)
    #[arg(long)]
    module: String,
    #[arg(long, value_parser = parse_q, allow_hyphen_values = true)]
    delta: Option<Rational>,
    #[arg(long, value_parser = parse_q, allow_hyphen_values = true)]
    lambda: Option<Rational>,
    #[arg(long, value_parser = parse_q, allow_hyphen_values = true)]
    mu: Option<Rational>,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Json,
}

fn parse_pair(s: &str) -> Result<(usize, usize), String> {
    let (a, b) = s.split_once(',').ok_or("expected two comma-separated integers")?;
    let a = a.trim().parse().map_err(|e| format!("{e}"))?;
    let b = b.trim().parse().map_err(|e| format!("{e}"))?;
    Ok((a, b))
}

fn parse_q(s: &str) -> Result<Rational, String> {
    parse_rational(s).map_err(|e| e.to_string())
}

/// Usage and input errors, reported with exit code 2.
struct Failure(String);

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure(e.to_string())
    }
}

impl From<serde_json::Error> for Failure {
    fn from(e: serde_json::Error) -> Self {
        Failure(e.to_string())
    }
}

type Outcome = Result<bool, Failure>;

impl Common {
    fn signature(&self) -> Result<Signature, Failure> {
        let sig = match (self.dim, self.signature) {
            (Some(n), Some((p, q))) if p + q != n => {
                return Err(Failure(format!("signature {p},{q} does not sum to dimension {n}")))
            }
            (_, Some((p, q))) => Signature::new(p, q)?,
            (Some(n), None) => Signature::new(n, 0)?,
            (None, None) => return Err(Failure("--dim or --signature is required".into())),
        };
        Ok(sig)
    }

    fn poly(&self, f: &SuperPolynomial) -> Result<SuperPolynomial, Failure> {
        Ok(match &self.specialize_h {
            Some(v) => f.specialize_h(v)?,
            None => f.clone(),
        })
    }

    fn emit(&self, text: &str, value: &Value) -> Result<(), Failure> {
        match self.format {
            Format::Text => println!("{text}"),
            Format::Json => println!("{}", serde_json::to_string_pretty(value)?),
        }
        Ok(())
    }
}

impl ModuleArgs {
    fn resolve(&self) -> Result<(ModuleTag, Weights), Failure> {
        let tag: ModuleTag = self.module.parse()?;
        let weights = match tag {
            ModuleTag::T | ModuleTag::S => {
                if self.lambda.is_some() || self.mu.is_some() {
                    return Err(Failure(format!("module {tag} takes --delta only")));
                }
                let delta = self.delta.clone().ok_or_else(|| Failure(format!("module {tag} needs --delta")))?;
                Weights::symbol(delta)
            }
            ModuleTag::D => {
                let (l, m) = match (&self.lambda, &self.mu, &self.delta) {
                    (Some(l), Some(m), _) => (l.clone(), m.clone()),
                    (Some(l), None, Some(d)) => (l.clone(), l + d),
                    (None, Some(m), Some(d)) => (m - d, m.clone()),
                    _ => return Err(Failure("module D needs two of --lambda, --mu, --delta".into())),
                };
                let w = Weights::operator(l, m);
                if let Some(d) = &self.delta {
                    if *d != w.delta {
                        return Err(Error::InconsistentWeights(format!(
                            "delta = {} but mu - lambda = {}",
                            fmt_rational(d),
                            fmt_rational(&w.delta)
                        ))
                        .into());
                    }
                }
                w
            }
        };
        Ok((tag, weights))
    }
}

fn read_expr(arg: &str) -> Result<String, Failure> {
    match arg.strip_prefix('@') {
        Some(path) => fs::read_to_string(path)
            .map(|s| s.trim().to_string())
            .map_err(|e| Failure(format!("cannot read {path}: {e}"))),
        None => Ok(arg.to_string()),
    }
}

fn weights_json(w: &Weights) -> Value {
    let mut out = serde_json::Map::new();
    out.insert("delta".into(), fmt_rational(&w.delta).into());
    if let Some(l) = &w.lambda {
        out.insert("lambda".into(), fmt_rational(l).into());
    }
    if let Some(m) = &w.mu {
        out.insert("mu".into(), fmt_rational(m).into());
    }
    Value::Object(out)
}

fn verify(suite: &str, samples: usize, common: &Common) -> Outcome {
    let suite: Suite = suite.parse().map_err(|e: Error| {
        let names: Vec<&str> = Suite::EACH.iter().map(|s| s.name()).chain(["all"]).collect();
        Failure(format!("{e}\nusage: superspin verify --suite <{}> --dim <n>", names.join("|")))
    })?;
    let mut cfg = SuiteConfig::new(common.signature()?, common.seed);
    cfg.samples = samples;
    let report = run_suite(suite, &cfg)?;
    common.emit(&report.to_string(), &report.to_json())?;
    Ok(report.passed())
}

fn check(expr: &str, module: &ModuleArgs, common: &Common) -> Outcome {
    let sig = common.signature()?;
    let (tag, weights) = module.resolve()?;
    let f = SuperPolynomial::parse(&read_expr(expr)?, sig.n())?;
    let report = check_invariance(&f, tag, &weights, sig)?;
    let mut residuals = Vec::new();
    for (name, r) in &report.residuals {
        residuals.push(json!({ "generator": name, "residual": common.poly(r)?.to_json()? }));
    }
    let value = json!({
        "signature": [sig.p, sig.q],
        "candidate": f.to_json()?,
        "module": tag.to_string(),
        "weights": weights_json(&report.weights),
        "invariant": report.is_invariant(),
        "residuals": residuals,
    });
    common.emit(&render_report(&report, common)?, &value)?;
    Ok(report.is_invariant())
}

fn render_report(report: &InvariantReport, common: &Common) -> Result<String, Failure> {
    let mut lines = Vec::new();
    for (name, r) in &report.residuals {
        lines.push(format!("{name}: {}", common.poly(r)?));
    }
    lines.push(if report.is_invariant() { "invariant".into() } else { "not invariant".into() });
    Ok(lines.join("\n"))
}

fn search(bidegree: (usize, usize), max_x: usize, module: &ModuleArgs, common: &Common) -> Outcome {
    let sig = common.signature()?;
    let (tag, weights) = module.resolve()?;
    let res = search_invariants_with(sig, bidegree.0, bidegree.1, tag, &weights, max_x)?;
    let mut text = vec![format!("dimension {}", res.dimension())];
    for b in &res.basis {
        text.push(common.poly(b)?.to_string());
    }
    let mut value = res.to_json()?;
    if common.specialize_h.is_some() {
        let basis: Result<Vec<_>, Failure> = res.basis.iter().map(|b| Ok(common.poly(b)?.to_json()?)).collect();
        value["basis"] = Value::Array(basis?);
    }
    common.emit(&text.join("\n"), &value)?;
    Ok(true)
}

fn dirac(s: usize, gamma: bool, common: &Common) -> Outcome {
    let sig = common.signature()?;
    let d = dirac_power(s, sig)?;
    let op = match &common.specialize_h {
        Some(v) => d.op.specialize_h(v)?,
        None => d.op.clone(),
    };
    let rendered = op.render(gamma);
    let value = json!({
        "signature": [sig.p, sig.q],
        "s": s,
        "weights": { "lambda": fmt_rational(&d.lambda), "mu": fmt_rational(&d.mu) },
        "operator": op.to_json()?,
        "text": rendered,
    });
    let text = format!("lambda = {}, mu = {}\n{rendered}", fmt_rational(&d.lambda), fmt_rational(&d.mu));
    common.emit(&text, &value)?;
    Ok(true)
}

fn spin_rep(gamma: bool, common: &Common) -> Outcome {
    let sig = common.signature()?;
    let rep = build_spin_rep(sig)?;
    let mats = if gamma { rep.gammas() } else { rep.gens.clone() };
    let name = if gamma { "gamma" } else { "c" };
    let json_mats: Result<Vec<_>, _> = mats.iter().map(|m| m.to_json()).collect();
    let value = json!({
        "signature": [sig.p, sig.q],
        "size": rep.size(),
        "normalization": name,
        "matrices": json_mats?,
    });
    let mut text = Vec::new();
    for (i, m) in mats.iter().enumerate() {
        text.push(format!("{name}{}:", i + 1));
        for r in 0..m.rows() {
            let row: Vec<String> = (0..m.cols()).map(|c| m.get(r, c).to_string()).collect();
            text.push(format!("  [{}]", row.join(", ")));
        }
    }
    common.emit(&text.join("\n"), &value)?;
    Ok(true)
}

fn parse(expr: &str, common: &Common) -> Outcome {
    let sig = common.signature()?;
    let f = common.poly(&SuperPolynomial::parse(&read_expr(expr)?, sig.n())?)?;
    common.emit(&f.to_string(), &f.to_json()?)?;
    Ok(true)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let outcome = match &cli.command {
        Command::Verify { suite, samples, common } => verify(suite, *samples, common),
        Command::Check { expr, module, common } => check(expr, module, common),
        Command::Search { bidegree, max_x, module, common } => search(*bidegree, *max_x, module, common),
        Command::DiracPower { s, gamma, common } => dirac(*s, *gamma, common),
        Command::SpinRep { gamma, common } => spin_rep(*gamma, common),
        Command::Parse { expr, common } => parse(expr, common),
    };
    match outcome {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(Failure(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
    }
}
