use airy_core::cache::Cache;
use airy_core::config::RunConfig;
use airy_core::ff::{build_field, FieldElement};
use airy_core::fiber::{fiber_l_poly, newton_polygon, AiryFamily};
use airy_core::global::lfunction;
use airy_core::monodromy::{scan_single_slope, scholten_zhu_cs, sperber_predicted_np};
use airy_core::report::rationals_to_strings;
use airy_core::selfcheck::run_all;
use airy_core::swan::{count_s, infinity_model, swan_sym_with, sym_rank, trivial_factor_with, SCountKey};
use airy_core::{Error, Result};
use clap::{Args, Parser, Subcommand};
use serde_json::{json, Value};
use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

#[derive(Parser)]
#[command(name = "airy", version, about = "Symmetric-power L-functions of Airy-type exponential sums")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Clone)]
struct Common {
    /// Enumeration budget in field elements.
    #[arg(long, default_value_t = airy_core::ff::DEFAULT_BUDGET)]
    budget: u64,
    /// Surplus coefficients beyond the predicted degree.
    #[arg(long, default_value_t = 1)]
    guard: usize,
    /// Cache directory (AIRY_CACHE takes precedence).
    #[arg(long)]
    cache: Option<PathBuf>,
    /// Also write the JSON result to this file.
    #[arg(long)]
    json_out: Option<PathBuf>,
}

#[derive(Args, Clone)]
struct Family {
    #[arg(long)]
    p: u64,
    #[arg(long, default_value_t = 1)]
    a: usize,
    /// Coefficients c_0,..,c_d; residues when a = 1, element indices otherwise.
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
    f: Vec<i64>,
}

#[derive(Subcommand)]
enum Command {
    /// Fiber L-polynomial, Newton polygon and weight check at one point.
    Fiber {
        #[command(flatten)]
        fam: Family,
        #[arg(long, default_value_t = 1)]
        e: usize,
        /// Element index of t in F_{q^e}.
        #[arg(long)]
        t: u128,
        #[command(flatten)]
        common: Common,
    },
    /// Predicted degree of M_k from the Swan conductor.
    Degree {
        #[command(flatten)]
        fam: Family,
        #[arg(long)]
        k: usize,
        #[command(flatten)]
        common: Common,
    },
    /// Local factor at infinity Q_k.
    TrivialFactor {
        #[command(flatten)]
        fam: Family,
        #[arg(long)]
        k: usize,
        #[command(flatten)]
        common: Common,
    },
    /// M_k from point counts, with all verifications.
    Lfunction {
        #[command(flatten)]
        fam: Family,
        #[arg(long)]
        k: usize,
        #[command(flatten)]
        common: Common,
    },
    /// Newton-polygon scan for finite monodromy.
    ScanMonodromy {
        #[command(flatten)]
        fam: Family,
        #[arg(long, default_value_t = 1)]
        max_e: usize,
        #[command(flatten)]
        common: Common,
    },
    /// Run the acceptance suite.
    Selfcheck {
        #[command(flatten)]
        common: Common,
    },
}

impl Common {
    fn config(&self) -> RunConfig {
        RunConfig {
            max_enumeration: self.budget,
            guard: self.guard,
            cache_path: self.cache.clone(),
            ..RunConfig::default()
        }
    }
}

/// Outcome of a command: the JSON document and whether every enabled
/// verification passed.
struct Output {
    value: Value,
    verified: bool,
}

fn family(f: &Family) -> Result<AiryFamily> {
    if f.f.is_empty() {
        return Err(Error::InvalidInput("--f is required".into()));
    }
    AiryFamily::from_ints(f.p, f.a, &f.f)
}

fn open_cache(cfg: &RunConfig) -> Result<Option<Cache>> {
    cfg.resolved_cache_path().map(Cache::open).transpose()
}

fn cmd_fiber(fam: &AiryFamily, e: usize, t: u128, cfg: &RunConfig) -> Result<Output> {
    let field = build_field(fam.p() as u64, fam.a() * e)?;
    if t >= field.size() {
        return Err(Error::InvalidInput(format!("t = {t} is not an element index of F_q^{e} ({} elements)", field.size())));
    }
    let tt = FieldElement::from_index(&field, t)?;
    let fiber = fiber_l_poly(fam, e, &tt, cfg.max_enumeration)?;
    let np = newton_polygon(&fiber);
    let dev = fiber.weight_deviation();
    let ok = dev <= cfg.weight_tolerance;
    Ok(Output {
        value: json!({
            "fiber": fiber,
            "newton_polygon": np,
            "slopes": rationals_to_strings(&np.slopes()),
            "weight_deviation": dev,
            "weight_ok": ok,
        }),
        verified: ok,
    })
}

fn cmd_degree(fam: &AiryFamily, k: usize) -> Result<Output> {
    let model = infinity_model(fam)?;
    let d = fam.degree();
    let swan = swan_sym_with(fam, &model, k)?;
    let counts: Vec<Value> = model
        .gaps
        .iter()
        .map(|&(j, h)| {
            let set = model.support_from(j);
            json!({"j": j, "h": h, "set": set, "count": count_s(&SCountKey::new(d - 1, k, &set), &model.zeta)})
        })
        .collect();
    Ok(Output {
        value: json!({
            "k": k,
            "predicted_degree": swan as i64 - sym_rank(d, k) as i64,
            "swan": swan,
            "rank": sym_rank(d, k),
            "counts": counts,
            "model": model.summary(),
        }),
        verified: true,
    })
}

fn cmd_trivial_factor(fam: &AiryFamily, k: usize) -> Result<Output> {
    let model = infinity_model(fam)?;
    let tf = trivial_factor_with(fam, &model, k)?;
    Ok(Output {
        value: json!({
            "k": k,
            "lambda": tf.lambda,
            "exponent": tf.exponent,
            "Q": tf.poly.coeffs(),
            "orbit_counts": tf.counts,
        }),
        verified: true,
    })
}

fn cmd_scan(fam: &AiryFamily, max_e: usize, cfg: &RunConfig, cache: Option<&Cache>) -> Result<Output> {
    let verdict = scan_single_slope(fam, max_e, cfg.max_enumeration, cache)?;
    let sperber = sperber_predicted_np(fam.p() as u64, fam.degree()).map(|s| rationals_to_strings(&s));
    let u_test = if fam.a() == 1 {
        let fp = build_field(fam.p() as u64, 1)?;
        let rows = (0..fam.p() as i64)
            .map(|t| scholten_zhu_cs(fam, &FieldElement::from_int(&fp, t), 5).map(|r| json!({"t": t, "result": r})))
            .collect::<Result<Vec<_>>>()?;
        json!({"label": "advisory one-sided test", "fibers": rows})
    } else {
        Value::Null
    };
    Ok(Output {
        value: json!({"verdict": verdict, "sperber_slopes": sperber, "u_operator_test": u_test}),
        verified: true,
    })
}

fn emit(value: &Value, out: Option<&PathBuf>) -> Result<()> {
    let text = serde_json::to_string_pretty(value)?;
    match writeln!(std::io::stdout().lock(), "{text}") {
        Err(e) if e.kind() != std::io::ErrorKind::BrokenPipe => return Err(e.into()),
        _ => {}
    }
    if let Some(path) = out {
        std::fs::write(path, format!("{text}\n"))?;
    }
    Ok(())
}

fn exit_for(err: &Error) -> u8 {
    match err {
        Error::TooLarge { .. }
        | Error::DegreeMismatch { .. }
        | Error::NonDivisible
        | Error::FunctionalEquationFailure(_) => 2,
        _ => 1,
    }
}

fn run(cli: Cli) -> Result<u8> {
    let (common, out) = match cli.command {
        Command::Selfcheck { common } => {
            let cfg = common.config();
            cfg.validate()?;
            let cache = open_cache(&cfg)?;
            let report = run_all(&cfg, cache.as_ref(), |r| eprintln!("{}", r.line()));
            emit(&serde_json::to_value(&report)?, common.json_out.as_ref())?;
            return Ok(report.exit_code() as u8);
        }
        Command::Fiber { fam, e, t, common } => {
            let cfg = common.config();
            let out = cmd_fiber(&family(&fam)?, e, t, &cfg)?;
            (common, out)
        }
        Command::Degree { fam, k, common } => {
            let out = cmd_degree(&family(&fam)?, k)?;
            (common, out)
        }
        Command::TrivialFactor { fam, k, common } => {
            let out = cmd_trivial_factor(&family(&fam)?, k)?;
            (common, out)
        }
        Command::Lfunction { fam, k, common } => {
            let cfg = common.config();
            cfg.validate()?;
            let cache = open_cache(&cfg)?;
            let report = lfunction(&family(&fam)?, k, &cfg, cache.as_ref())?;
            let verified = report.verified;
            (common, Output { value: serde_json::to_value(report)?, verified })
        }
        Command::ScanMonodromy { fam, max_e, common } => {
            let cfg = common.config();
            let cache = open_cache(&cfg)?;
            let out = cmd_scan(&family(&fam)?, max_e, &cfg, cache.as_ref())?;
            (common, out)
        }
    };
    emit(&out.value, common.json_out.as_ref())?;
    Ok(if out.verified { 0 } else { 2 })
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    match run(Cli::parse()) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(exit_for(&e))
        }
    }
}
