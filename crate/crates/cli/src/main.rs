//! `qal`: command-line front end.

use clap::{Args, Parser, Subcommand, ValueEnum};
use qal_algebra::parse::{format_poly, parse_poly};
use qal_algebra::rational::{fmt_q, parse_rational, to_sci};
use qal_algebra::{MultiPoly, Q};
use qal_core::config::precision_bits;
use qal_core::division::{euclid_divide, hyperbolic_check_2d, DistinguishedPoly, HyperbolicVerdict, Side};
use qal_core::geometry::{d_exponent, expansion_json, puiseux_expand, tau_estimate, PuiseuxOptions};
use qal_core::hilbert::{build_model, divergence_demo};
use qal_core::oracle::{
    decide_borel, decide_closedness, decide_division, decide_flat_inclusion, decide_formal_noetherian,
    facts_from_poly, BorelQuestion, Verdict,
};
use qal_core::sequence::{
    classify, parse_sequence, precede, sequence_json, value_decimal, CarlemanSequence, PrecedeVerdict, SeqValue,
};
use qal_core::theta::theta_derivative_at_zero;
use qal_core::CoreError;
use serde_json::{json, Value};
use std::process::ExitCode;

const SCHEMA: &str = "qal/1";

/// Exit status when `--strict` is set and the answer is unknown or undecided.
const EXIT_UNDECIDED: u8 = 3;

#[derive(Parser)]
#[command(name = "qal", version, about = "Exact computations for Denjoy-Carleman classes")]
struct Cli {
    /// Exit with status 3 when the result is unknown or undecided.
    #[arg(long, global = true)]
    strict: bool,
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Carleman sequences.
    #[command(subcommand)]
    Seq(SeqCmd),
    /// Bang's θ-function.
    #[command(subcommand)]
    Theta(ThetaCmd),
    /// The finite Hilbert model and the divergence trace.
    #[command(subcommand)]
    Borel(BorelCmd),
    /// Euclidean division in one variable.
    Divide {
        #[arg(long)]
        dividend: String,
        #[arg(long)]
        divisor: String,
        #[arg(long, default_value = "y")]
        var: String,
    },
    /// Exact hyperbolicity decision for a distinguished polynomial in x, y.
    Hyperbolic {
        #[arg(long)]
        poly: String,
        #[arg(long, default_value = "y")]
        var: String,
    },
    /// Newton-Puiseux branches at the origin.
    Puiseux {
        #[arg(long)]
        poly: String,
        #[arg(long)]
        trunc: Option<u64>,
    },
    /// The exponents d and τ.
    Exponents {
        #[arg(long)]
        poly: String,
    },
    /// Sampling estimate of τ.
    Tau {
        #[arg(long)]
        poly: String,
        /// Comma-separated shell radii.
        #[arg(long, default_value = "1/8,1/16,1/32,1/64,1/128,1/256")]
        shells: String,
        #[arg(long, default_value_t = 8)]
        samples: usize,
    },
    /// Decide a question from the theorem table.
    Oracle(OracleArgs),
}

#[derive(Subcommand)]
enum SeqCmd {
    /// Classification flags.
    Classify {
        #[arg(long)]
        seq: String,
        #[arg(long, default_value_t = 32)]
        horizon: usize,
    },
    /// Whether each sequence is dominated by the other up to geometric factors.
    Compare {
        #[arg(long)]
        seq: String,
        #[arg(long)]
        other: String,
        #[arg(long, default_value_t = 32)]
        horizon: usize,
    },
}

#[derive(Subcommand)]
enum ThetaCmd {
    /// Certified `|θ^(j)(0)| >= j! M_j` for a range of orders.
    Probe {
        #[arg(long)]
        seq: String,
        /// `a..b` (inclusive), a single order, or a comma list.
        #[arg(long, default_value = "0..12")]
        orders: String,
        #[arg(long, default_value_t = 28)]
        trunc: usize,
        #[arg(long)]
        csv: bool,
    },
}

#[derive(Subcommand)]
enum BorelCmd {
    /// `ω_{j,k}` for `j < k` in the model of degree D.
    Omega {
        #[arg(long)]
        seq: String,
        #[arg(long)]
        degree: usize,
        #[arg(long)]
        k: usize,
        #[arg(long)]
        csv: bool,
    },
    /// Partial sums of `M_{k_q} a^{k_q}` until they pass the threshold.
    Demo {
        #[arg(long)]
        seq: String,
        #[arg(long, default_value = "1/2")]
        a: String,
        /// `a..b` (inclusive), a single index, or a comma list.
        #[arg(long, default_value = "0..39")]
        ks: String,
        #[arg(long, default_value = "1000000")]
        threshold: String,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum Question {
    Division,
    Closedness,
    BorelSurjective,
    BorelInjective,
    FormalNoetherian,
    FlatInclusion,
}

#[derive(Args)]
struct OracleArgs {
    #[arg(long)]
    seq: String,
    #[arg(long)]
    poly: Option<String>,
    #[arg(long, value_enum)]
    question: Question,
    /// Exponent for `flat-inclusion`.
    #[arg(long)]
    s: Option<String>,
    #[arg(long, default_value_t = 32)]
    horizon: usize,
}

/// What a command produced.
struct Output {
    body: String,
    decided: bool,
}

impl Output {
    fn json(command: &str, mut v: Value, decided: bool) -> Output {
        v["schema"] = json!(SCHEMA);
        v["command"] = json!(command);
        Output {
            body: serde_json::to_string_pretty(&v).expect("json") + "\n",
            decided,
        }
    }

    fn csv(rows: Vec<Vec<String>>, decided: bool) -> Output {
        let body = rows.iter().map(|r| r.join(",") + "\n").collect();
        Output { body, decided }
    }
}

type Res<T> = Result<T, CoreError>;

fn rational(flag: &str, s: &str) -> Res<Q> {
    parse_rational(s).ok_or_else(|| CoreError::Syntax {
        offset: 0,
        message: format!("--{flag}: expected an integer, decimal or p/q, got `{s}`"),
    })
}

fn poly(s: &str) -> Res<MultiPoly<Q>> {
    Ok(parse_poly(s)?)
}

fn seq(s: &str) -> Res<CarlemanSequence> {
    parse_sequence(s)
}

/// `a..b` inclusive, a single index, or `i,j,k`.
fn index_list(flag: &str, s: &str) -> Res<Vec<usize>> {
    let bad = || CoreError::Syntax {
        offset: 0,
        message: format!("--{flag}: expected `a..b`, `n` or `i,j,...`, got `{s}`"),
    };
    let num = |t: &str| t.trim().parse::<usize>().map_err(|_| bad());
    if let Some((a, b)) = s.split_once("..") {
        let (a, b) = (num(a)?, num(b)?);
        if a > b {
            return Err(bad());
        }
        return Ok((a..=b).collect());
    }
    s.split(',').map(num).collect()
}

fn value_json(v: &SeqValue) -> Value {
    match v {
        SeqValue::Exact(x) => json!({"exact": fmt_q(x), "decimal": value_decimal(v)}),
        SeqValue::Approx(iv) => json!({"lo": to_sci(iv.lo(), 15), "hi": to_sci(iv.hi(), 15)}),
    }
}

fn run(cmd: Cmd) -> Res<Output> {
    let prec = precision_bits();
    match cmd {
        Cmd::Seq(SeqCmd::Classify { seq: s, horizon }) => {
            let m = seq(&s)?;
            let r = classify(&m, horizon, prec)?;
            let v = json!({"sequence": sequence_json(&m), "report": r});
            Ok(Output::json("seq classify", v, true))
        }
        Cmd::Seq(SeqCmd::Compare { seq: a, other: b, horizon }) => {
            let (m, n) = (seq(&a)?, seq(&b)?);
            let mn = precede(&m, &n, horizon, prec)?;
            let nm = precede(&n, &m, horizon, prec)?;
            let decided = [&mn, &nm].iter().all(|p| matches!(p, PrecedeVerdict::Symbolic { .. }));
            let v = json!({
                "sequence": sequence_json(&m),
                "other": sequence_json(&n),
                "sequence_precedes_other": mn,
                "other_precedes_sequence": nm,
            });
            Ok(Output::json("seq compare", v, decided))
        }
        Cmd::Theta(ThetaCmd::Probe { seq: s, orders, trunc, csv }) => {
            let m = seq(&s)?;
            let orders = index_list("orders", &orders)?;
            let mut rows = Vec::new();
            for j in orders {
                rows.push(theta_derivative_at_zero(&m, j, trunc, prec)?);
            }
            let decided = rows.iter().all(|r| r.certified);
            if csv {
                let mut out = vec![vec!["j", "lower_bound", "magnitude_lo", "magnitude_hi", "result"]
                    .into_iter()
                    .map(String::from)
                    .collect()];
                for r in &rows {
                    let lb = match &r.lower_bound {
                        SeqValue::Exact(x) => to_sci(x, 15),
                        SeqValue::Approx(iv) => to_sci(iv.hi(), 15),
                    };
                    out.push(vec![
                        r.order.to_string(),
                        lb,
                        to_sci(r.magnitude.lo(), 15),
                        to_sci(r.magnitude.hi(), 15),
                        (if r.certified { "pass" } else { "fail" }).to_string(),
                    ]);
                }
                return Ok(Output::csv(out, decided));
            }
            let rows: Vec<Value> = rows
                .iter()
                .map(|r| {
                    json!({
                        "j": r.order,
                        "lower_bound": value_json(&r.lower_bound),
                        "magnitude": {"lo": to_sci(r.magnitude.lo(), 15), "hi": to_sci(r.magnitude.hi(), 15)},
                        "tail": to_sci(&r.tail, 15),
                        "precision": r.precision,
                        "certified": r.certified,
                    })
                })
                .collect();
            let v = json!({"sequence": sequence_json(&m), "trunc": trunc, "rows": rows});
            Ok(Output::json("theta probe", v, decided))
        }
        Cmd::Borel(BorelCmd::Omega { seq: s, degree, k, csv }) => {
            let m = seq(&s)?;
            let h = build_model(&m, degree)?;
            let col = h.omega_column(k)?;
            if csv {
                let mut out = vec![vec!["j".to_string(), "omega".into(), "omega_decimal".into()]];
                for (j, w) in col.iter().enumerate() {
                    out.push(vec![j.to_string(), fmt_q(w), to_sci(w, 15)]);
                }
                return Ok(Output::csv(out, true));
            }
            let rows: Vec<Value> = col
                .iter()
                .enumerate()
                .map(|(j, w)| json!({"j": j, "omega": fmt_q(w), "omega_decimal": to_sci(w, 15)}))
                .collect();
            let v = json!({"sequence": sequence_json(&m), "degree": degree, "k": k, "rows": rows});
            Ok(Output::json("borel omega", v, true))
        }
        Cmd::Borel(BorelCmd::Demo { seq: s, a, ks, threshold }) => {
            let m = seq(&s)?;
            let t = divergence_demo(&m, &rational("a", &a)?, &index_list("ks", &ks)?, &rational("threshold", &threshold)?)?;
            let v = json!({
                "sequence": sequence_json(&m),
                "a": fmt_q(&t.a),
                "threshold": fmt_q(&t.threshold),
                "ks": t.ks,
                "partial_sums": t.partial_sums.iter().map(fmt_q).collect::<Vec<_>>(),
                "crossing": t.crossing,
            });
            Ok(Output::json("borel demo", v, t.crossing.is_some()))
        }
        Cmd::Divide { dividend, divisor, var } => {
            let (p, f) = (poly(&dividend)?, poly(&divisor)?);
            let d = euclid_divide(&p, &f, &var)?;
            let v = json!({
                "dividend": format_poly(&p),
                "divisor": format_poly(&f),
                "var": d.var,
                "quotient": format_poly(&d.quotient),
                "remainder": format_poly(&d.remainder),
                "verified": d.verified,
            });
            Ok(Output::json("divide", v, d.verified))
        }
        Cmd::Hyperbolic { poly: p, var } => {
            let p = poly(&p)?;
            let phi = DistinguishedPoly::from_poly(&p, &var)?;
            let r = hyperbolic_check_2d(&phi, Side::Both)?;
            let decided = r.verdict != HyperbolicVerdict::Undecided;
            let v = json!({"poly": format_poly(&p), "var": var, "report": r});
            Ok(Output::json("hyperbolic", v, decided))
        }
        Cmd::Puiseux { poly: p, trunc } => {
            let p = poly(&p)?;
            let e = puiseux_expand(&p, &PuiseuxOptions { trunc, ..Default::default() })?;
            let v = json!({"input": format_poly(&p), "expansion": expansion_json(&e)?});
            Ok(Output::json("puiseux", v, true))
        }
        Cmd::Exponents { poly: p } => {
            let p = poly(&p)?;
            let r = d_exponent(&p, &PuiseuxOptions::default())?;
            let v = json!({"poly": format_poly(&p), "report": r.to_json()});
            Ok(Output::json("exponents", v, true))
        }
        Cmd::Tau { poly: p, shells, samples } => {
            let p = poly(&p)?;
            let shells = shells.split(',').map(|s| rational("shells", s)).collect::<Res<Vec<_>>>()?;
            let est = tau_estimate(&p, &shells, samples)?;
            let v = json!({"poly": format_poly(&p), "estimate": est});
            Ok(Output::json("tau", v, true))
        }
        Cmd::Oracle(a) => oracle(a, prec),
    }
}

fn oracle(a: OracleArgs, prec: u32) -> Res<Output> {
    let m = seq(&a.seq)?;
    let report = classify(&m, a.horizon, prec)?;
    let need_poly = || -> Res<MultiPoly<Q>> {
        let p = a
            .poly
            .as_deref()
            .ok_or_else(|| CoreError::Domain("this question needs --poly".into()))?;
        poly(p)
    };
    let mut v = json!({"sequence": sequence_json(&m)});
    let decision = match a.question {
        Question::BorelSurjective => decide_borel(&report, BorelQuestion::Surjective)?,
        Question::BorelInjective => decide_borel(&report, BorelQuestion::Injective)?,
        Question::FormalNoetherian => decide_formal_noetherian(&report)?,
        q => {
            let p = need_poly()?;
            let facts = facts_from_poly(&p)?;
            v["poly"] = json!(format_poly(&p));
            v["facts"] = serde_json::to_value(&facts).expect("json");
            match q {
                Question::Division => decide_division(&report, &facts)?,
                Question::Closedness => decide_closedness(&report, &facts)?,
                _ => {
                    let s = a
                        .s
                        .as_deref()
                        .ok_or_else(|| CoreError::Domain("flat-inclusion needs --s".into()))?;
                    decide_flat_inclusion(&report, &facts, &rational("s", s)?)?
                }
            }
        }
    };
    let decided = decision.verdict != Verdict::Unknown;
    v["decision"] = serde_json::to_value(&decision).expect("json");
    Ok(Output::json("oracle", v, decided))
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli.cmd) {
        Ok(out) => {
            print!("{}", out.body);
            if cli.strict && !out.decided {
                ExitCode::from(EXIT_UNDECIDED)
            } else {
                ExitCode::SUCCESS
            }
        }
        Err(e) => {
            let v = json!({
                "schema": SCHEMA,
                "error": {"kind": e.kind(), "code": e.code(), "message": e.to_string()},
            });
            eprintln!("{}", serde_json::to_string_pretty(&v).expect("json"));
            ExitCode::from(e.code() as u8)
        }
    }
}
