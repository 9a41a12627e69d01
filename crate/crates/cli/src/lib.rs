//! Command-line front end. `run` is the whole program minus process exit, so
//! tests can drive it with captured output.

use clap::{Args, Parser, Subcommand};
use serde_json::{json, Value};
use sha2::{Digest, Sha256};
use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::PathBuf;
use twozero_core::codes::{encode_over_q, CheckPolynomial};
use twozero_core::report::CsvSummary;
use twozero_core::sw::{self, fmt_ratio, fmt_small_ratio, SwContext};
use twozero_core::verify::{self, AnalyzeOptions, ScanOptions};
use twozero_core::weights::{self, DEFAULT_BUDGET};
use twozero_core::{
    Budgets, CodeSpec, EnumOptions, Error, FieldTower, ReportRecord, Role, Strategy, TraceLevel, TwoZeroParams,
};

pub const EXIT_OK: i32 = 0;
pub const EXIT_INVARIANT: i32 = 1;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_IO: i32 = 3;

#[derive(Parser, Debug)]
#[command(name = "twozero", version, about = "Exhaustive checks for two-zero cyclic codes")]
struct Cli {
    /// Cap on coordinate evaluations per enumeration (accepts `2^31`).
    #[arg(long, global = true, value_parser = parse_u128, default_value_t = DEFAULT_BUDGET)]
    budget: u128,
    /// Run enumerations even when they exceed the budget.
    #[arg(long, global = true)]
    force: bool,
    /// Enumerate every message instead of one per symmetry class.
    #[arg(long, global = true)]
    exhaustive: bool,
    #[command(subcommand)]
    cmd: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Field tower summary: modulus, order of γ, table checksums.
    Field {
        #[arg(long)]
        p: u32,
        #[arg(long, default_value_t = 1)]
        t: u32,
        #[arg(long, default_value_t = 1)]
        k: u32,
        /// Also print the full tables.
        #[arg(long)]
        dump: bool,
    },
    /// Validate a tuple and print its derived parameters.
    Inspect(TupleArgs),
    /// Check polynomial, cyclotomic cosets and dimensions.
    Build(TupleArgs),
    /// Weight distribution of one code of the family.
    Weights(RoleArgs),
    /// Dual words of weight 1 and 2.
    Dual(RoleArgs),
    /// Power-moment identities (1)–(3) for a code.
    Moments {
        #[command(flatten)]
        role: RoleArgs,
        /// Override the dual weight-1 count.
        #[arg(long)]
        b1: Option<u64>,
        /// Override the dual weight-2 count.
        #[arg(long)]
        b2: Option<u64>,
    },
    /// Schmidt–White conditions for (g, p, s).
    Sw {
        #[arg(long)]
        g: u64,
        #[arg(long)]
        p: u64,
        #[arg(long)]
        s: u64,
        #[arg(long)]
        lambda: Option<u64>,
        #[arg(long)]
        d: Option<u64>,
        #[arg(long)]
        q: Option<u64>,
    },
    /// Analyse every admissible tuple within the budgets.
    Scan {
        #[arg(long)]
        max_q: u64,
        #[arg(long, value_parser = parse_u64)]
        max_msgs: u64,
        #[arg(long, value_parser = parse_u64, default_value_t = u64::MAX)]
        max_n: u64,
        #[arg(long)]
        out: PathBuf,
        #[arg(long)]
        csv: Option<PathBuf>,
        /// Worker threads (0 = all cores).
        #[arg(long, default_value_t = 0)]
        jobs: usize,
    },
}

#[derive(Args, Debug)]
struct TupleArgs {
    #[arg(long)]
    p: u64,
    #[arg(long, default_value_t = 1)]
    t: u32,
    #[arg(long)]
    k: u32,
    #[arg(long)]
    d: u64,
    #[arg(long)]
    e: u64,
    #[arg(long, default_value_t = 1)]
    lambda: u64,
}

#[derive(Args, Debug)]
struct RoleArgs {
    #[command(flatten)]
    tuple: TupleArgs,
    #[arg(long, default_value = "C")]
    role: Role,
}

/// Decimal or `base^exp`.
fn parse_u128(s: &str) -> Result<u128, String> {
    match s.split_once('^') {
        None => s.trim().parse().map_err(|e| format!("{e}")),
        Some((b, e)) => {
            let b: u128 = b.trim().parse().map_err(|e| format!("{e}"))?;
            let e: u32 = e.trim().parse().map_err(|e| format!("{e}"))?;
            b.checked_pow(e).ok_or_else(|| "overflow".to_string())
        }
    }
}

fn parse_u64(s: &str) -> Result<u64, String> {
    parse_u128(s)?.try_into().map_err(|_| "overflow".to_string())
}

/// A failure with the exit code it maps to.
struct Failure {
    code: i32,
    message: String,
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let code = match e {
            Error::Internal(_) | Error::NonIntegerCount { .. } => EXIT_INVARIANT,
            Error::Sink(_) => EXIT_IO,
            _ => EXIT_USAGE,
        };
        let message = match e {
            Error::BudgetExceeded { .. } => format!("{e} (raise --budget or pass --force)"),
            _ => e.to_string(),
        };
        Failure { code, message }
    }
}

impl From<std::io::Error> for Failure {
    fn from(e: std::io::Error) -> Self {
        Failure { code: EXIT_IO, message: e.to_string() }
    }
}

fn io_fail(path: &std::path::Path, e: impl std::fmt::Display) -> Failure {
    Failure { code: EXIT_IO, message: format!("{}: {e}", path.display()) }
}

/// Runs the program on `argv` (including the program name).
pub fn run<I, T>(argv: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let text = e.render().to_string();
            let _ = if e.use_stderr() { err.write_all(text.as_bytes()) } else { out.write_all(text.as_bytes()) };
            return code;
        }
    };
    match dispatch(cli, out, err) {
        Ok(code) => code,
        Err(f) => {
            let _ = writeln!(err, "error: {}", f.message);
            f.code
        }
    }
}

fn emit(out: &mut dyn Write, v: &Value) -> Result<(), Failure> {
    writeln!(out, "{}", serde_json::to_string(v).expect("json values serialize"))?;
    Ok(())
}

fn tuple(a: &TupleArgs) -> Result<TwoZeroParams, Failure> {
    Ok(TwoZeroParams::derive(a.p, a.t, a.k, a.d, a.e, a.lambda)?)
}

fn tower_for(p: &TwoZeroParams) -> Result<FieldTower, Failure> {
    Ok(FieldTower::build(p.p as u32, p.t, p.k, twozero_core::gf::DEFAULT_FIELD_CAP)?)
}

fn sha256_u32(xs: impl Iterator<Item = u32>) -> String {
    let mut h = Sha256::new();
    for x in xs {
        h.update(x.to_le_bytes());
    }
    hex::encode(h.finalize())
}

/// Exact integer as a JSON number when it fits, else as a string.
fn int_value(x: &num_bigint::BigInt) -> Value {
    match i64::try_from(x) {
        Ok(v) => json!(v),
        Err(_) => json!(x.to_string()),
    }
}

fn dispatch(cli: Cli, out: &mut dyn Write, err: &mut dyn Write) -> Result<i32, Failure> {
    let opts = EnumOptions {
        budget: cli.budget,
        force: cli.force,
        strategy: if cli.exhaustive { Strategy::Exhaustive } else { Strategy::Symmetric },
    };
    match cli.cmd {
        Command::Field { p, t, k, dump } => {
            let tw = FieldTower::build(p, t, k, twozero_core::gf::DEFAULT_FIELD_CAP)?;
            let trace_idx = |level| -> Vec<u32> {
                (0..tw.big_order() as u64)
                    .map(|i| tw.level_index(tw.trace(tw.gamma_pow(i), level), level).expect("trace in subfield"))
                    .collect()
            };
            let (tq, tp) = (trace_idx(TraceLevel::Q), trace_idx(TraceLevel::P));
            let gamma_order = tw.mult_order(tw.gamma_pow(1))?;
            let mut v = json!({
                "p": p, "t": t, "k": k, "q": tw.q(), "size": tw.size(),
                "modulus": tw.modulus(),
                "gamma_order": gamma_order,
                "sha256": {
                    "exp": sha256_u32(tw.exp_table().iter().copied()),
                    "zech": sha256_u32(tw.zech_table().iter().copied()),
                    "trace_q": sha256_u32(tq.iter().copied()),
                    "trace_p": sha256_u32(tp.iter().copied()),
                },
            });
            if dump {
                v["tables"] = json!({
                    "exp": tw.exp_table(),
                    "zech": tw.zech_table().iter().map(|&z| (z != u32::MAX).then_some(z)).collect::<Vec<_>>(),
                    "trace_q": tq,
                    "trace_p": tp,
                });
            }
            emit(out, &v)?;
            Ok(EXIT_OK)
        }
        Command::Inspect(a) => {
            let p = tuple(&a)?;
            emit(out, &serde_json::to_value(&p).expect("params serialize"))?;
            Ok(EXIT_OK)
        }
        Command::Build(a) => {
            let p = tuple(&a)?;
            let tw = tower_for(&p)?;
            let h = CheckPolynomial::build(&p, &tw)?;
            let enc = |poly: &[_]| encode_over_q(&tw, poly).expect("minimal polynomials lie over F_q");
            let dim = |role| -> Result<usize, Failure> { Ok(CodeSpec::new(role, &p, &tw)?.dimension()) };
            let v = json!({
                "check_polynomial": enc(&h.h),
                "h_d": enc(&h.h_d),
                "h_D": enc(&h.h_dd),
                "cosets": { "d": h.coset_d, "D": h.coset_dd },
                "degree": h.degree(),
                "expected_degree": h.expected_degree,
                "coprime": h.coprime(),
                "divides_xn_minus_1": h.divides_xn_minus_1,
                "dims": { "C": dim(Role::C)?, "Cd": dim(Role::Cd)?, "CD": dim(Role::CD)? },
            });
            emit(out, &v)?;
            let ok = h.degree_ok() && h.divides_xn_minus_1;
            Ok(if ok { EXIT_OK } else { EXIT_INVARIANT })
        }
        Command::Weights(a) => {
            let p = tuple(&a.tuple)?;
            let tw = tower_for(&p)?;
            let spec = CodeSpec::new(a.role, &p, &tw)?;
            let e = weights::weight_distribution(&spec.code, opts)?;
            emit(out, &serde_json::to_value(&e.dist).expect("distribution serializes"))?;
            Ok(EXIT_OK)
        }
        Command::Dual(a) => {
            let p = tuple(&a.tuple)?;
            let tw = tower_for(&p)?;
            let spec = CodeSpec::new(a.role, &p, &tw)?;
            let d = weights::dual_low_weight(&spec)?;
            emit(out, &serde_json::to_value(&d).expect("dual counts serialize"))?;
            Ok(EXIT_OK)
        }
        Command::Moments { role, b1, b2 } => {
            let p = tuple(&role.tuple)?;
            let tw = tower_for(&p)?;
            let spec = CodeSpec::new(role.role, &p, &tw)?;
            let dist = weights::weight_distribution(&spec.code, opts)?.dist;
            let (b1, b2) = match (b1, b2) {
                (Some(b1), Some(b2)) => (b1, b2),
                _ => {
                    let (brute1, brute2) = weights::brute_low_weight(&spec.code);
                    (b1.unwrap_or(brute1), b2.unwrap_or(brute2))
                }
            };
            let r = weights::power_moment_check(&dist, b1, b2);
            let v = json!({
                "b1": b1,
                "b2": b2,
                "moments": r.moments.iter().map(int_value).collect::<Vec<_>>(),
                "residuals": r.residuals.iter().map(fmt_ratio).collect::<Vec<_>>(),
                "ok": [r.v0_ok, r.v1_ok, r.v2_ok],
            });
            emit(out, &v)?;
            Ok(if r.all_ok() { EXIT_OK } else { EXIT_INVARIANT })
        }
        Command::Sw { g, p, s, lambda, d, q } => {
            let a = sw::analyze(g, p, s)?;
            let candidates: Vec<Value> = match (lambda, d, q) {
                (Some(lambda), Some(d), Some(q)) => {
                    let ctx = SwContext { lambda, d, q, p, s, h: a.theta.h, theta: a.theta.value, g };
                    a.solutions
                        .iter()
                        .map(|&sol| {
                            let c = sw::candidate_weights(&ctx, sol)?;
                            Ok(json!([fmt_ratio(&c.w1), fmt_ratio(&c.w2)]))
                        })
                        .collect::<Result<_, Error>>()?
                }
                (None, None, None) => Vec::new(),
                _ => {
                    return Err(Failure {
                        code: EXIT_USAGE,
                        message: "--lambda, --d and --q go together".into(),
                    })
                }
            };
            let v = json!({
                "theta": fmt_small_ratio(&a.theta.value),
                "h": a.theta.h,
                "solutions": a.solutions,
                "candidates": candidates,
            });
            emit(out, &v)?;
            Ok(EXIT_OK)
        }
        Command::Scan { max_q, max_msgs, max_n, out: path, csv, jobs } => {
            let budgets = Budgets { max_q, max_msgs, max_n };
            let scan_opts = ScanOptions {
                analyze: AnalyzeOptions { enumeration: opts, ..AnalyzeOptions::default() },
                jobs,
            };
            let file = File::create(&path).map_err(|e| io_fail(&path, e))?;
            let mut jsonl = BufWriter::new(file);
            let mut table = match &csv {
                Some(c) => Some(CsvSummary::new(File::create(c).map_err(|e| io_fail(c, e))?).map_err(|e| io_fail(c, e))?),
                None => None,
            };
            let mut last_error: Option<String> = None;
            let summary = verify::scan(
                budgets,
                scan_opts,
                |rec| {
                    let r = ReportRecord::from(rec);
                    let res = jsonl.write_all(r.to_line().as_bytes()).and_then(|()| match table.as_mut() {
                        Some(t) => t.write(&r).map_err(std::io::Error::other),
                        None => Ok(()),
                    });
                    if let Err(e) = &res {
                        last_error = Some(e.to_string());
                    }
                    res
                },
                |skip| {
                    let p = &skip.params;
                    let _ = writeln!(
                        err,
                        "skipped q={} k={} d={} e={} lambda={}: {}",
                        p.q, p.k, p.d, p.e, p.lambda, skip.error
                    );
                },
            )?;
            jsonl.flush().map_err(|e| io_fail(&path, e))?;
            if let (Some(t), Some(c)) = (table, &csv) {
                t.finish().map_err(|e| io_fail(c, e))?;
            }
            emit(out, &serde_json::to_value(summary).expect("summary serializes"))?;
            if let Some(e) = last_error {
                return Err(Failure { code: EXIT_IO, message: format!("{} records not written: {e}", summary.sink_errors) });
            }
            Ok(EXIT_OK)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn counts_accept_powers() {
        assert_eq!(parse_u64("2^24"), Ok(1 << 24));
        assert_eq!(parse_u64("1000000"), Ok(1_000_000));
        assert!(parse_u64("2^64").is_err());
        assert!(parse_u64("x").is_err());
    }
}
