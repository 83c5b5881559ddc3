use std::fs;
use std::io::Read;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use serde_json::{json, Map, Value};

use lmo_core::closure::{close_combination, iota_combination, p_wh};
use lmo_core::diagrams::{Canonical, Diagram, DiagramCombination};
use lmo_core::exactnum::{
    b_coefficients, nu_series, parse_rational, rational_to_json, validate_manifold_alexander, LaurentPoly,
    SymmetricLaurent,
};
use lmo_core::knots::{
    alexander_from_seifert, alexander_to_conway, conway_from_pd, conway_to_alexander, knot_by_name, PdCode,
    SeifertMatrix, KNOT_TABLE,
};
use lmo_core::lmo::{forward_report, lmo_invert, theta_coefficient, LmoElement};
use lmo_core::relspace;
use lmo_core::weights::{w_conway, w_eval, w_hbar_grade};
use lmo_core::wheels::{a_prime_from_alexander, alpha_from_alexander, exp_disjoint, AlphaSeries};
use lmo_core::{verify, Error};

/// Exact computations with Jacobi diagrams, wheels and the LMO invariant.
#[derive(Parser)]
#[command(name = "lmo-tool", version)]
struct Cli {
    /// Write the JSON result to this file instead of standard output.
    #[arg(long, global = true)]
    output: Option<PathBuf>,
    /// Pretty-print JSON.
    #[arg(long, global = true)]
    pretty: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Power series identities.
    #[command(subcommand)]
    Series(SeriesCmd),
    /// Knot polynomials.
    #[command(subcommand)]
    Knot(KnotCmd),
    /// Operations on a single diagram or a combination.
    #[command(subcommand)]
    Diagram(DiagramCmd),
    /// Trivalent graphs modulo IHX.
    #[command(subcommand)]
    Space(SpaceCmd),
    /// Wheel series.
    #[command(subcommand)]
    Wheels(WheelsCmd),
    /// The LMO invariant from an Alexander polynomial and back.
    #[command(subcommand)]
    Lmo(LmoCmd),
    /// Run the verification suite.
    Verify {
        #[arg(long, default_value_t = 2024)]
        seed: u64,
        /// Run a single check.
        #[arg(long)]
        only: Option<u32>,
    },
}

#[derive(Subcommand)]
enum SeriesCmd {
    /// Wheel coefficients b_{2m} up to h^max.
    Bcoeffs {
        #[arg(long)]
        max: usize,
    },
    /// The series h / (e^{h/2} - e^{-h/2}).
    Nu {
        #[arg(long)]
        order: usize,
    },
    /// a'_{2m} of an Alexander polynomial.
    Aprime {
        #[command(flatten)]
        alexander: AlexanderArg,
        #[arg(long)]
        max: usize,
    },
}

#[derive(Args)]
#[group(required = true, multiple = false)]
struct AlexanderArg {
    /// Laurent polynomial as JSON, inline or a file path.
    #[arg(long)]
    alexander: Option<String>,
    /// Bundled knot whose Alexander polynomial to use.
    #[arg(long)]
    knot: Option<String>,
}

#[derive(Args)]
#[group(required = true, multiple = false)]
struct KnotInput {
    /// PD code JSON, inline or a file path.
    #[arg(long)]
    pd: Option<String>,
    /// Seifert matrix JSON, inline or a file path.
    #[arg(long)]
    seifert: Option<String>,
    /// Bundled knot name.
    #[arg(long)]
    knot: Option<String>,
}

#[derive(Subcommand)]
enum KnotCmd {
    /// Normalized Alexander polynomial.
    Alexander(KnotInput),
    /// Conway polynomial.
    Conway(KnotInput),
    /// The bundled knot table.
    List,
}

#[derive(Args)]
struct DiagramInput {
    /// Diagram or combination JSON, inline or a file path; `-` reads standard input.
    #[arg(long)]
    input: String,
}

#[derive(Subcommand)]
enum DiagramCmd {
    /// Canonical form and sign.
    Canon(DiagramInput),
    /// Sum over all ways of pairing the legs.
    Close(DiagramInput),
    /// Closure after adding m parallel strands.
    Iota {
        #[command(flatten)]
        input: DiagramInput,
        #[arg(long)]
        m: usize,
    },
    /// Wheel part of an interval-free combination.
    Pwh(DiagramInput),
    /// W weight system as a polynomial in c.
    Weval {
        #[command(flatten)]
        input: DiagramInput,
        /// Evaluate at this value of c.
        #[arg(long)]
        at: Option<String>,
    },
    /// Conway weight per degree.
    Wc {
        #[command(flatten)]
        input: DiagramInput,
        #[arg(long, default_value_t = 8)]
        order: usize,
    },
    /// The wheel with n legs.
    Wheel {
        #[arg(long)]
        n: usize,
    },
}

#[derive(Subcommand)]
enum SpaceCmd {
    /// Ambient size, relation rank and quotient dimension.
    Dim {
        #[arg(long)]
        degree: usize,
    },
}

#[derive(Subcommand)]
enum WheelsCmd {
    /// Wheel coefficients alpha_{2m} of an Alexander polynomial.
    Alpha {
        #[command(flatten)]
        alexander: AlexanderArg,
        #[arg(long)]
        degree: usize,
    },
    /// exp under disjoint union of an alpha series.
    Exp {
        /// Alpha series JSON, inline or a file path.
        #[arg(long)]
        alpha: String,
        #[arg(long)]
        degree: usize,
    },
}

#[derive(Subcommand)]
enum LmoCmd {
    /// Degree-truncated LMO invariant.
    Forward {
        #[command(flatten)]
        alexander: AlexanderArg,
        #[arg(long)]
        degree: usize,
    },
    /// Recover the Alexander polynomial.
    Invert {
        /// Output of `lmo forward`, inline or a file path.
        #[arg(long)]
        input: String,
        #[arg(long)]
        degree: usize,
        #[arg(long)]
        span: usize,
    },
}

/// Failure of a command, split by exit code.
enum Failure {
    Domain(String),
    Malformed(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        if e.is_malformed() {
            Failure::Malformed(e.to_string())
        } else {
            Failure::Domain(e.to_string())
        }
    }
}

type Outcome = Result<(Value, bool), Failure>;

fn read_json(arg: &str) -> Result<Value, Failure> {
    let trimmed = arg.trim_start();
    let text = if trimmed.starts_with('{') || trimmed.starts_with('[') || trimmed.starts_with('"') {
        arg.to_string()
    } else if arg == "-" {
        let mut s = String::new();
        std::io::stdin().read_to_string(&mut s).map_err(|e| Failure::Malformed(format!("stdin: {e}")))?;
        s
    } else {
        fs::read_to_string(arg).map_err(|e| Failure::Malformed(format!("{arg}: {e}")))?
    };
    serde_json::from_str(&text).map_err(|e| Failure::Malformed(format!("invalid JSON: {e}")))
}

fn alexander(arg: &AlexanderArg) -> Result<SymmetricLaurent, Failure> {
    match (&arg.alexander, &arg.knot) {
        (Some(a), _) => Ok(validate_manifold_alexander(&LaurentPoly::from_json(&read_json(a)?)?)?),
        (_, Some(k)) => Ok(conway_to_alexander(&knot_by_name(k)?.expected_conway())?),
        _ => unreachable!("clap enforces one source"),
    }
}

fn knot_alexander(input: &KnotInput) -> Result<SymmetricLaurent, Failure> {
    if let Some(pd) = &input.pd {
        Ok(conway_to_alexander(&conway_from_pd(&PdCode::from_json(&read_json(pd)?)?)?)?)
    } else if let Some(s) = &input.seifert {
        Ok(alexander_from_seifert(&SeifertMatrix::from_json(&read_json(s)?)?)?)
    } else {
        let k = knot_by_name(input.knot.as_deref().expect("clap enforces one source"))?;
        Ok(alexander_from_seifert(&k.seifert_matrix())?)
    }
}

fn combination(input: &DiagramInput) -> Result<DiagramCombination, Failure> {
    Ok(DiagramCombination::from_json(&read_json(&input.input)?)?)
}

fn series_json<'a>(entries: impl Iterator<Item = (&'a usize, &'a lmo_core::exactnum::Rational)>) -> Value {
    Value::Object(entries.map(|(k, v)| (k.to_string(), rational_to_json(v))).collect())
}

fn run(command: Command) -> Outcome {
    let ok = |v: Value| Ok((v, true));
    match command {
        Command::Series(SeriesCmd::Bcoeffs { max }) => ok(series_json(b_coefficients(max).iter())),
        Command::Series(SeriesCmd::Nu { order }) => ok(Value::String(nu_series(order).to_string())),
        Command::Series(SeriesCmd::Aprime { alexander: a, max }) => {
            ok(series_json(a_prime_from_alexander(&alexander(&a)?, max)?.iter()))
        }
        Command::Knot(KnotCmd::Alexander(input)) => ok(knot_alexander(&input)?.to_json()),
        Command::Knot(KnotCmd::Conway(input)) => {
            let c = match &input.pd {
                Some(pd) => conway_from_pd(&PdCode::from_json(&read_json(pd)?)?)?,
                None => alexander_to_conway(&knot_alexander(&input)?),
            };
            ok(json!({ "coeffs": c.to_json(), "text": c.to_string() }))
        }
        Command::Knot(KnotCmd::List) => ok(Value::Array(
            KNOT_TABLE
                .iter()
                .map(|k| {
                    json!({
                        "name": k.name,
                        "pd": k.pd_code().to_json(),
                        "seifert": k.seifert_matrix().to_json(),
                        "conway": k.expected_conway().to_string(),
                    })
                })
                .collect(),
        )),
        Command::Diagram(cmd) => run_diagram(cmd),
        Command::Space(SpaceCmd::Dim { degree }) => {
            let s = relspace::space(degree)?;
            ok(json!({
                "degree": degree,
                "ambient": s.ambient_dim(),
                "rank": s.rank(),
                "quotient_dim": s.quotient_dim(),
            }))
        }
        Command::Wheels(WheelsCmd::Alpha { alexander: a, degree }) => {
            ok(alpha_from_alexander(&alexander(&a)?, degree)?.to_json())
        }
        Command::Wheels(WheelsCmd::Exp { alpha, degree }) => {
            let alpha = AlphaSeries::from_json(&read_json(&alpha)?)?;
            ok(exp_disjoint(&alpha, degree).to_json())
        }
        Command::Lmo(LmoCmd::Forward { alexander: a, degree }) => {
            let a = alexander(&a)?;
            let mut report = forward_report(&a, degree)?;
            if degree >= 1 {
                let z = LmoElement::from_json(&report)?;
                let theta = theta_coefficient(z.part(1));
                report.as_object_mut().expect("object").insert("theta".into(), rational_to_json(&theta));
            }
            ok(report)
        }
        Command::Lmo(LmoCmd::Invert { input, degree, span }) => {
            let z = LmoElement::from_json(&read_json(&input)?)?;
            ok(lmo_invert(&z, degree, span)?.to_json())
        }
        Command::Verify { seed, only } => {
            let reports = match only {
                Some(id) => vec![verify::run_check(id, seed)?],
                None => verify::run_all(seed),
            };
            let passed = reports.iter().all(|r| r.passed);
            for r in &reports {
                eprintln!("{}", r.line());
            }
            Ok((
                json!({
                    "seed": seed,
                    "passed": passed,
                    "checks": reports.iter().map(|r| r.to_json()).collect::<Vec<_>>(),
                }),
                passed,
            ))
        }
    }
}

fn run_diagram(cmd: DiagramCmd) -> Outcome {
    let value = match cmd {
        DiagramCmd::Canon(input) => {
            let d = Diagram::from_json(&read_json(&input.input)?)?;
            match lmo_core::diagrams::canonicalize(&d) {
                Canonical::Zero => json!({ "zero": true }),
                Canonical::Form(c, sign) => json!({
                    "zero": false,
                    "sign": sign,
                    "degree": c.degree(),
                    "legs": c.legs(),
                    "diagram": c.diagram().to_json(),
                }),
            }
        }
        DiagramCmd::Close(input) => close_combination(&combination(&input)?)?.to_json(),
        DiagramCmd::Iota { input, m } => iota_combination(&combination(&input)?, m)?.to_json(),
        DiagramCmd::Pwh(input) => p_wh(&combination(&input)?)?.to_json(),
        DiagramCmd::Weval { input, at } => {
            let w = w_eval(&combination(&input)?)?;
            match at {
                Some(c) => rational_to_json(&w.eval(&parse_rational(&c)?)),
                None => Value::String(w.to_string()),
            }
        }
        DiagramCmd::Wc { input, order } => {
            let x = combination(&input)?;
            let graded = w_hbar_grade(&x, order, w_conway)?;
            let mut out = Map::new();
            for m in x.degrees() {
                if m <= order {
                    out.insert(m.to_string(), rational_to_json(&graded.coeff(m)));
                }
            }
            Value::Object(out)
        }
        DiagramCmd::Wheel { n } => Diagram::wheel(n)?.to_json(),
    };
    Ok((value, true))
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let (value, success) = match run(cli.command) {
        Ok(r) => r,
        Err(Failure::Domain(msg)) => {
            eprintln!("error: {msg}");
            return ExitCode::from(1);
        }
        Err(Failure::Malformed(msg)) => {
            eprintln!("error: {msg}");
            return ExitCode::from(2);
        }
    };
    let text = if cli.pretty {
        serde_json::to_string_pretty(&value)
    } else {
        serde_json::to_string(&value)
    }
    .expect("JSON values serialize");
    match cli.output {
        Some(path) => {
            if let Err(e) = fs::write(&path, text + "\n") {
                eprintln!("error: {}: {e}", path.display());
                return ExitCode::from(2);
            }
        }
        None => println!("{text}"),
    }
    if success {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(1)
    }
}
