//! Command-line front end.
//!
//! Settings are merged in the order: built-in defaults, `--config` file
//! (`key = value` lines), the `MZV_HOPF_TOL` environment variable, flags.
//! Exit status is `0` on success, `1` when a verification suite fails and
//! `2` on usage errors.

use std::ffi::OsString;
use std::fmt::Write as _;
use std::io::Write as _;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use num_complex::Complex64;
use serde::Serialize;
use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::hopf::{coproduct, quasi_shuffle, AntipodeValue, Mode, TrivialDiamond};
use crate::mzv::{mzv_value, MzvElem, NumericConfig};
use crate::numeric::regularized::{
    gstar_numeric, hurwitz_reg, mes_star, multitangent_reg, zeta_star_at,
};
use crate::numeric::trunc::{ghat_trunc, hurwitz_trunc, mes_trunc, multitangent_trunc};
use crate::numeric::{parse_complex, Estimate, EvalContext, LimitPolicy};
use crate::qexp::{fourier_expansion, gstar_series, multitangent_reduce};
use crate::regularization::{reg_decompose, rho_apply, zeta_reg, TPoly};
use crate::verify::{run_suite, Report, Suite, VerifyOptions};
use crate::word::{Index, XyWord};

/// Version of every JSON document written by the CLI.
pub const SCHEMA_VERSION: u32 = 1;

pub const EXIT_OK: i32 = 0;
pub const EXIT_VERIFY_FAILED: i32 = 1;
pub const EXIT_USAGE: i32 = 2;

#[derive(Debug, Parser)]
#[command(
    name = "mzv-hopf",
    version,
    about = "Quasi-shuffle Hopf algebras, MZVs and multiple Eisenstein series"
)]
pub struct Cli {
    #[command(flatten)]
    pub global: GlobalArgs,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Text,
    Json,
}

#[derive(Debug, Default, Args)]
pub struct GlobalArgs {
    /// Output format.
    #[arg(long, global = true, value_enum)]
    pub format: Option<Format>,
    /// Write the result to this file instead of stdout.
    #[arg(long, short = 'o', global = true)]
    pub output: Option<PathBuf>,
    /// File with `key = value` settings (tau, N, M, tol, t_value, policy, m_budget, cutoff, format).
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,
    /// Modular variable, e.g. `i` or `0.2+0.8i`.
    #[arg(long, global = true, allow_hyphen_values = true)]
    pub tau: Option<String>,
    /// Inner truncation N.
    #[arg(long = "N", visible_alias = "n", global = true)]
    pub n: Option<usize>,
    /// Outer truncation M (starting value for the adaptive policy).
    #[arg(long = "M", visible_alias = "m", global = true)]
    pub m: Option<usize>,
    /// Absolute tolerance.
    #[arg(long, global = true)]
    pub tol: Option<f64>,
    /// Value of T in regularized MZVs.
    #[arg(long, global = true, allow_hyphen_values = true)]
    pub t_value: Option<String>,
    /// Limit policy in M: `fixed` or `adaptive`.
    #[arg(long, global = true)]
    pub policy: Option<String>,
    /// Largest M tried by the adaptive policy.
    #[arg(long, global = true)]
    pub m_budget: Option<usize>,
    /// Terms summed directly in MZV evaluation before the asymptotic tail.
    #[arg(long, global = true)]
    pub cutoff: Option<usize>,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Quasi-shuffle product of two words (index words, or x/y words in shuffle mode).
    Product {
        #[arg(long, default_value = "stuffle")]
        mode: Mode,
        u: String,
        v: String,
    },
    /// Deconcatenation coproduct.
    Coproduct { w: String },
    /// Antipode.
    Antipode {
        #[arg(long, default_value = "stuffle")]
        mode: Mode,
        w: String,
    },
    /// `w = Σ_j reg_j(w) • z_1^{•j}` as a polynomial in T.
    Reg {
        #[arg(long, default_value = "stuffle")]
        mode: Mode,
        w: String,
    },
    /// Regularized multiple zeta value as a polynomial in T.
    ZetaReg {
        #[arg(long, default_value = "stuffle")]
        mode: Mode,
        w: String,
        /// Also evaluate the coefficients numerically.
        #[arg(long)]
        numeric: bool,
    },
    /// `ρ(ζ^*(w))` next to `ζ^⧢(w)`.
    Rho { w: String },
    /// Multitangent reduction `Ψ(k) = Σ_l c_l Ψ(l)` for `k ∈ H^2`.
    Reduce { w: String },
    /// Fourier expansion of `G(k)` for `k ∈ H^2`.
    Fourier {
        w: String,
        #[arg(long, default_value_t = 50)]
        order: usize,
    },
    /// `ĝ^*(w)` in terms of the `ĝ` symbols and its q-expansion.
    Gstar {
        w: String,
        #[arg(long, default_value_t = 50)]
        order: usize,
    },
    /// Numeric evaluation of one object.
    Eval {
        #[arg(value_enum)]
        object: EvalObject,
        w: String,
        /// Shift x for Hurwitz and multitangent objects (defaults to tau).
        #[arg(long, allow_hyphen_values = true)]
        x: Option<String>,
        /// Order of the q-expansion for `fourier`.
        #[arg(long, default_value_t = 50)]
        order: usize,
    },
    /// Run identity suites.
    Verify {
        /// Suite name, or `all`.
        suite: String,
        #[arg(long)]
        max_weight: Option<u32>,
        #[arg(long, default_value_t = 2024)]
        seed: u64,
        #[arg(long, default_value_t = 50)]
        samples: usize,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum EvalObject {
    Mzv,
    HurwitzTrunc,
    HurwitzReg,
    MultitangentTrunc,
    MultitangentReg,
    MesTrunc,
    GhatTrunc,
    Gstar,
    ZetaStar,
    MesStar,
    Fourier,
}

/// Fully resolved settings for one invocation.
#[derive(Debug, Clone)]
pub struct RunConfig {
    pub format: Format,
    pub output: Option<PathBuf>,
    pub ctx: EvalContext,
    pub cfg: NumericConfig,
}

/// Parses `args` (including the program name), runs the command and writes
/// to stdout/stderr. Returns the exit status.
pub fn main_with_args<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return match e.kind() {
                clap::error::ErrorKind::DisplayHelp | clap::error::ErrorKind::DisplayVersion => {
                    EXIT_OK
                }
                _ => EXIT_USAGE,
            };
        }
    };
    let env_tol = std::env::var("MZV_HOPF_TOL").ok();
    let config = match resolve(&cli.global, env_tol.as_deref()) {
        Ok(c) => c,
        Err(e) => {
            eprintln!("error: {e}");
            return EXIT_USAGE;
        }
    };
    match run(&cli.command, &config) {
        Ok(out) => {
            match emit(&out.text, config.output.as_ref()) {
                Err(e) if e.kind() != std::io::ErrorKind::BrokenPipe => {
                    eprintln!("error: {e}");
                    return EXIT_USAGE;
                }
                _ => {}
            }
            out.status
        }
        Err(e) => {
            eprintln!("error: {e}");
            exit_code(&e)
        }
    }
}

/// Input errors exit with 2, numeric failures with 1.
pub fn exit_code(e: &Error) -> i32 {
    match e {
        Error::NonConvergence(_) | Error::Tolerance { .. } | Error::Invariant(_) => {
            EXIT_VERIFY_FAILED
        }
        Error::Parse(_) | Error::Subspace { .. } | Error::Pole(_) | Error::InvalidArgument(_) => {
            EXIT_USAGE
        }
    }
}

fn emit(text: &str, path: Option<&PathBuf>) -> std::io::Result<()> {
    match path {
        Some(p) => std::fs::write(p, format!("{text}\n")),
        None => {
            let mut out = std::io::stdout().lock();
            writeln!(out, "{text}")
        }
    }
}

/// Merges defaults, config file, `MZV_HOPF_TOL` and flags.
pub fn resolve(g: &GlobalArgs, env_tol: Option<&str>) -> Result<RunConfig> {
    let mut ctx = EvalContext::default();
    let mut cfg = NumericConfig::default();
    let mut format = Format::Text;
    if let Some(path) = &g.config {
        let text = std::fs::read_to_string(path)
            .map_err(|e| Error::InvalidArgument(format!("cannot read {}: {e}", path.display())))?;
        for (lineno, line) in text.lines().enumerate() {
            let line = line.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (key, value) = line.split_once('=').ok_or_else(|| {
                Error::Parse(format!(
                    "{}:{}: expected key = value",
                    path.display(),
                    lineno + 1
                ))
            })?;
            apply_setting(&mut ctx, &mut cfg, &mut format, key.trim(), value.trim())?;
        }
    }
    if let Some(t) = env_tol {
        apply_setting(&mut ctx, &mut cfg, &mut format, "tol", t)?;
    }
    let flags: [(&str, Option<String>); 8] = [
        ("tau", g.tau.clone()),
        ("N", g.n.map(|v| v.to_string())),
        ("M", g.m.map(|v| v.to_string())),
        ("tol", g.tol.map(|v| v.to_string())),
        ("t_value", g.t_value.clone()),
        ("policy", g.policy.clone()),
        ("m_budget", g.m_budget.map(|v| v.to_string())),
        ("cutoff", g.cutoff.map(|v| v.to_string())),
    ];
    for (key, value) in flags {
        if let Some(v) = value {
            apply_setting(&mut ctx, &mut cfg, &mut format, key, &v)?;
        }
    }
    if let Some(f) = g.format {
        format = f;
    }
    ctx.validate()?;
    cfg.validate()?;
    Ok(RunConfig {
        format,
        output: g.output.clone(),
        ctx,
        cfg,
    })
}

fn parse_num<T: std::str::FromStr>(key: &str, value: &str) -> Result<T> {
    value
        .parse()
        .map_err(|_| Error::Parse(format!("bad value {value:?} for {key}")))
}

fn apply_setting(
    ctx: &mut EvalContext,
    cfg: &mut NumericConfig,
    format: &mut Format,
    key: &str,
    value: &str,
) -> Result<()> {
    match key {
        "tau" => ctx.tau = parse_complex(value)?,
        "N" | "n" => ctx.n = parse_num(key, value)?,
        "M" | "m" => ctx.m = parse_num(key, value)?,
        "tol" | "tolerance" => {
            let t: f64 = parse_num(key, value)?;
            ctx.tolerance = t;
            cfg.tolerance = t;
        }
        "t_value" | "t-value" => ctx.t_value = parse_complex(value)?,
        "policy" => ctx.policy = value.parse::<LimitPolicy>()?,
        "m_budget" | "m-budget" => ctx.m_budget = parse_num(key, value)?,
        "cutoff" => cfg.cutoff = parse_num(key, value)?,
        "format" => {
            *format = Format::from_str(value, true)
                .map_err(|_| Error::Parse(format!("unknown format {value:?}")))?
        }
        _ => return Err(Error::Parse(format!("unknown setting {key:?}"))),
    }
    Ok(())
}

/// Rendered output and exit status of one command.
#[derive(Debug, Clone)]
pub struct Outcome {
    pub text: String,
    pub status: i32,
}

impl Outcome {
    fn ok(text: String) -> Self {
        Self {
            text,
            status: EXIT_OK,
        }
    }
}

fn index(s: &str) -> Result<Index> {
    s.parse()
}

fn comma_form(k: &Index) -> String {
    k.entries()
        .iter()
        .map(u32::to_string)
        .collect::<Vec<_>>()
        .join(",")
}

fn is_xy(s: &str) -> bool {
    let t = s.trim();
    !t.is_empty() && t.chars().all(|c| c == 'x' || c == 'y')
}

fn context_json(ctx: &EvalContext, cfg: &NumericConfig) -> Value {
    json!({
        "tau": {"re": ctx.tau.re, "im": ctx.tau.im},
        "N": ctx.n,
        "M": ctx.m,
        "tolerance": ctx.tolerance,
        "t_value": {"re": ctx.t_value.re, "im": ctx.t_value.im},
        "policy": ctx.policy,
        "m_budget": ctx.m_budget,
        "cutoff": cfg.cutoff,
    })
}

fn document(command: &str, body: Value) -> String {
    let mut doc = json!({"schema_version": SCHEMA_VERSION, "command": command});
    if let (Value::Object(d), Value::Object(b)) = (&mut doc, body) {
        d.extend(b);
    }
    serde_json::to_string_pretty(&doc).expect("JSON values serialize")
}

fn to_value<T: Serialize>(v: &T) -> Value {
    serde_json::to_value(v).expect("serializable")
}

/// Runs one command.
pub fn run(command: &Command, rc: &RunConfig) -> Result<Outcome> {
    let json = rc.format == Format::Json;
    match command {
        Command::Product { mode, u, v } => {
            if is_xy(u) && is_xy(v) {
                if *mode != Mode::Shuffle {
                    return Err(Error::InvalidArgument(
                        "x/y words only carry the shuffle product; pass --mode shuffle".into(),
                    ));
                }
                let (a, b): (XyWord, XyWord) = (u.parse()?, v.parse()?);
                let p = quasi_shuffle(&a, &b, &TrivialDiamond);
                return Ok(Outcome::ok(if json {
                    document(
                        "product",
                        json!({"mode": mode, "u": a, "v": b, "result": p}),
                    )
                } else {
                    p.to_string()
                }));
            }
            let (a, b) = (index(u)?, index(v)?);
            let p = mode.product(&a, &b);
            Ok(Outcome::ok(if json {
                document(
                    "product",
                    json!({"mode": mode, "u": a, "v": b, "result": p}),
                )
            } else {
                p.to_string()
            }))
        }
        Command::Coproduct { w } => {
            let pairs: Vec<(String, String)> = if is_xy(w) {
                coproduct(&w.parse::<XyWord>()?)
                    .into_iter()
                    .map(|(a, b)| (a.to_string(), b.to_string()))
                    .collect()
            } else {
                coproduct(&index(w)?)
                    .into_iter()
                    .map(|(a, b)| (a.to_string(), b.to_string()))
                    .collect()
            };
            Ok(Outcome::ok(if json {
                let terms: Vec<Value> = pairs
                    .iter()
                    .map(|(a, b)| json!({"left": a, "right": b}))
                    .collect();
                document("coproduct", json!({"word": w.trim(), "result": terms}))
            } else {
                pairs
                    .iter()
                    .map(|(a, b)| format!("{a} ⊗ {b}"))
                    .collect::<Vec<_>>()
                    .join(" + ")
            }))
        }
        Command::Antipode { mode, w } => {
            let value = if is_xy(w) {
                if *mode != Mode::Shuffle {
                    return Err(Error::InvalidArgument(
                        "x/y words only carry the shuffle antipode; pass --mode shuffle".into(),
                    ));
                }
                AntipodeValue::Xy(crate::hopf::antipode_shuffle(&w.parse::<XyWord>()?))
            } else {
                mode.antipode(&index(w)?)
            };
            Ok(Outcome::ok(if json {
                let result = match &value {
                    AntipodeValue::Index(p) => to_value(p),
                    AntipodeValue::Xy(p) => to_value(p),
                };
                let alphabet = if matches!(value, AntipodeValue::Xy(_)) {
                    "xy"
                } else {
                    "z"
                };
                document(
                    "antipode",
                    json!({"mode": mode, "word": w.trim(), "alphabet": alphabet, "result": result}),
                )
            } else {
                value.to_string()
            }))
        }
        Command::Reg { mode, w } => {
            let k = index(w)?;
            let p = reg_decompose(&k, *mode)?;
            Ok(Outcome::ok(if json {
                document("reg", json!({"mode": mode, "word": k, "result": p}))
            } else {
                p.to_string()
            }))
        }
        Command::ZetaReg { mode, w, numeric } => {
            let k = index(w)?;
            let p = zeta_reg(&k, *mode)?;
            let values = if *numeric {
                Some(
                    p.coeffs()
                        .iter()
                        .map(|c| c.eval(&rc.cfg))
                        .collect::<Result<Vec<_>>>()?,
                )
            } else {
                None
            };
            Ok(Outcome::ok(if json {
                let mut body = json!({"mode": mode, "word": k, "result": p});
                if let Some(v) = &values {
                    body["numeric_coefficients"] = to_value(v);
                    body["context"] = context_json(&rc.ctx, &rc.cfg);
                }
                document("zeta-reg", body)
            } else {
                let mut s = p.to_string();
                if let Some(v) = &values {
                    for (j, e) in v.iter().enumerate() {
                        let _ = write!(s, "\nT^{j}: {e}");
                    }
                }
                s
            }))
        }
        Command::Rho { w } => {
            let k = index(w)?;
            let star = zeta_reg(&k, Mode::Stuffle)?;
            let image = rho_apply(&star);
            let shuffle = zeta_reg(&k, Mode::Shuffle)?;
            let dev = tpoly_dev(&image, &shuffle, &rc.cfg)?;
            Ok(Outcome::ok(if json {
                document(
                    "rho",
                    json!({"word": k, "zeta_star": star, "rho_zeta_star": image,
                           "zeta_shuffle": shuffle, "max_numeric_deviation": dev}),
                )
            } else {
                format!("ζ^*(w)    = {star}\nρ(ζ^*(w)) = {image}\nζ^⧢(w)    = {shuffle}\nmax deviation {dev:e}")
            }))
        }
        Command::Reduce { w } => {
            let k = index(w)?;
            let red = multitangent_reduce(&k, &rc.cfg)?;
            Ok(Outcome::ok(if json {
                let terms: Vec<Value> = red
                    .terms
                    .iter()
                    .map(|(l, c)| json!({"l": l, "coeff": c}))
                    .collect();
                document(
                    "reduce",
                    json!({"word": k, "terms": terms, "psi1": red.psi1}),
                )
            } else {
                red.terms
                    .iter()
                    .map(|(l, c)| {
                        if c.len() > 1 {
                            format!("({c})*Ψ({l})")
                        } else {
                            format!("{c}*Ψ({l})")
                        }
                    })
                    .collect::<Vec<_>>()
                    .join(" + ")
            }))
        }
        Command::Fourier { w, order } => {
            let k = index(w)?;
            let f = fourier_expansion(&k, *order, &rc.cfg)?;
            Ok(Outcome::ok(if json {
                let mut body = to_value(&f);
                body["structured"] = Value::String(f.structured());
                document("fourier", body)
            } else {
                let mut s = format!("G({}) = {}\n", comma_form(&k), f.structured());
                for (n, c) in f.q_coefficients.coeffs().iter().enumerate() {
                    if !c.is_zero() {
                        let _ = writeln!(s, "q^{n}: {c}");
                    }
                }
                s.trim_end().to_string()
            }))
        }
        Command::Gstar { w, order } => {
            let k = index(w)?;
            let (sym, series) = gstar_series(&k, *order, &rc.cfg)?;
            Ok(Outcome::ok(if json {
                document(
                    "gstar",
                    json!({"word": k, "order": order, "symbolic": sym,
                           "q_coefficients": series.json_coefficients()}),
                )
            } else {
                let mut s = format!("ĝ^*({}) = {sym}\n", comma_form(&k));
                for (n, c) in series.coeffs().iter().enumerate() {
                    if !c.is_zero() {
                        let _ = writeln!(s, "q^{n}: {c}");
                    }
                }
                s.trim_end().to_string()
            }))
        }
        Command::Eval {
            object,
            w,
            x,
            order,
        } => {
            let k = index(w)?;
            let x = match x {
                Some(s) => parse_complex(s)?,
                None => rc.ctx.tau,
            };
            let est = eval_object(*object, &k, x, *order, rc)?;
            Ok(Outcome::ok(if json {
                let mut body = to_value(&est);
                body["object"] = to_value(object);
                body["word"] = to_value(&k);
                body["x"] = json!({"re": x.re, "im": x.im});
                body["context"] = context_json(&rc.ctx, &rc.cfg);
                document("eval", body)
            } else {
                est.to_string()
            }))
        }
        Command::Verify {
            suite,
            max_weight,
            seed,
            samples,
        } => {
            let suites: Vec<Suite> = if suite == "all" {
                Suite::ALL.to_vec()
            } else {
                vec![suite.parse()?]
            };
            let opts = VerifyOptions {
                max_weight: *max_weight,
                ctx: rc.ctx.clone(),
                cfg: rc.cfg.clone(),
                seed: *seed,
                samples: *samples,
                ..Default::default()
            };
            let reports: Vec<Report> = suites
                .into_iter()
                .map(|s| run_suite(s, &opts))
                .collect::<Result<_>>()?;
            let passed = reports.iter().all(Report::passed);
            let text = if json {
                document(
                    "verify",
                    json!({"passed": passed, "reports": reports,
                           "context": context_json(&rc.ctx, &rc.cfg)}),
                )
            } else {
                reports
                    .iter()
                    .map(Report::to_string)
                    .collect::<Vec<_>>()
                    .join("\n")
            };
            Ok(Outcome {
                text,
                status: if passed { EXIT_OK } else { EXIT_VERIFY_FAILED },
            })
        }
    }
}

fn tpoly_dev(a: &TPoly<MzvElem>, b: &TPoly<MzvElem>, cfg: &NumericConfig) -> Result<f64> {
    let n = a.coeffs().len().max(b.coeffs().len());
    let mut dev: f64 = 0.0;
    for j in 0..n {
        dev = dev.max((&a.coeff(j) - &b.coeff(j)).eval(cfg)?.value.norm());
    }
    Ok(dev)
}

/// Numeric value of `object` at word `k`.
pub fn eval_object(
    object: EvalObject,
    k: &Index,
    x: Complex64,
    order: usize,
    rc: &RunConfig,
) -> Result<Estimate> {
    let ctx = &rc.ctx;
    let truncated = |v: Complex64| Estimate::new(v, 0.0);
    match object {
        EvalObject::Mzv => mzv_value(k, &rc.cfg),
        EvalObject::HurwitzTrunc => hurwitz_trunc(k, x, ctx.n).map(truncated),
        EvalObject::HurwitzReg => hurwitz_reg(k, x),
        EvalObject::MultitangentTrunc => multitangent_trunc(k, x, ctx.n).map(truncated),
        EvalObject::MultitangentReg => multitangent_reg(k, x),
        EvalObject::MesTrunc => mes_trunc(k, ctx.tau, ctx.m, ctx.n).map(truncated),
        EvalObject::GhatTrunc => ghat_trunc(k, ctx.tau, ctx.m, ctx.n).map(truncated),
        EvalObject::Gstar => gstar_numeric(k, ctx),
        EvalObject::ZetaStar => zeta_star_at(k, ctx.t_value, &rc.cfg),
        EvalObject::MesStar => mes_star(k, ctx),
        EvalObject::Fourier => fourier_expansion(k, order, &rc.cfg)?.eval(ctx.tau, &rc.cfg),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn run_args(args: &[&str]) -> Result<Outcome> {
        let cli = Cli::try_parse_from(std::iter::once("mzv-hopf").chain(args.iter().copied()))
            .map_err(|e| Error::Parse(e.to_string()))?;
        let rc = resolve(&cli.global, None)?;
        run(&cli.command, &rc)
    }

    #[test]
    fn stuffle_product_text() {
        let out = run_args(&["product", "--mode", "stuffle", "2", "3"]).unwrap();
        assert_eq!(out.text, "z2z3 + z3z2 + z5");
    }

    #[test]
    fn xy_shuffle_requires_shuffle_mode() {
        let out = run_args(&["product", "--mode", "shuffle", "xy", "xxy"]).unwrap();
        assert_eq!(out.text, "xyxxy + 3*xxyxy + 6*xxxyy");
        assert!(run_args(&["product", "xy", "xxy"]).is_err());
    }

    #[test]
    fn settings_precedence() {
        let g = GlobalArgs {
            tol: Some(1e-7),
            ..Default::default()
        };
        let rc = resolve(&g, Some("1e-5")).unwrap();
        assert_eq!(rc.cfg.tolerance, 1e-7);
        let rc = resolve(&GlobalArgs::default(), Some("1e-5")).unwrap();
        assert_eq!(rc.ctx.tolerance, 1e-5);
        assert!(resolve(&GlobalArgs::default(), Some("zero")).is_err());
    }

    #[test]
    fn unknown_flags_are_usage_errors() {
        assert_eq!(
            main_with_args(["mzv-hopf", "product", "--frobnicate", "2", "3"]),
            EXIT_USAGE
        );
        assert_eq!(
            main_with_args(["mzv-hopf", "verify", "no-such-suite"]),
            EXIT_USAGE
        );
        assert_eq!(
            exit_code(&Error::NonConvergence("m".into())),
            EXIT_VERIFY_FAILED
        );
        assert_eq!(exit_code(&Error::Pole("x = 0".into())), EXIT_USAGE);
    }

    #[test]
    fn json_carries_schema_version() {
        let out = run_args(&["--format", "json", "fourier", "3,2", "--order", "5"]).unwrap();
        let v: Value = serde_json::from_str(&out.text).unwrap();
        assert_eq!(v["schema_version"], 1);
        assert_eq!(v["middle"][0]["alpha"], 3);
        assert_eq!(v["middle"][1]["alpha"], 2);
    }
}
