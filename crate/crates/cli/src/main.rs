use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;

use apdiv_core::decompose::{degenerate_divisor, DecomposeError};
use apdiv_core::numerics::{a_matrix_numeric, lemma_dis_check, NumericReport, QuadratureParams};
use apdiv_core::{
    a_matrix, ap_modulus_criterion, classify_pair, decompose, gram_sum, parse_divisor, periods,
    verify_certificate, Divisor, Matrix, Scalar,
};
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

#[derive(Parser, Debug)]
#[command(
    name = "apdiv",
    version,
    about = "Almost-periodic divisor criterion, decomposition and numerics"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Print A(d), the Gram symmetry verdict and the criterion verdict.
    Check(Common),
    /// Decompose into degenerate pairs and emit a verified certificate.
    Decompose {
        #[command(flatten)]
        common: Common,
        /// Write the certificate here instead of stdout.
        #[arg(long)]
        output: Option<PathBuf>,
    },
    /// Classify every pair of the divisor.
    Classify(Common),
    /// Print the periods of every pair.
    Periods(Common),
    /// Compare quadrature mean values with the exact A-matrix.
    VerifyNumeric {
        #[command(flatten)]
        common: Common,
        #[command(flatten)]
        quad: Quadrature,
    },
}

#[derive(Args, Debug)]
struct Common {
    /// Divisor file.
    #[arg(long)]
    input: PathBuf,
    #[arg(long, value_enum, default_value_t = Format::Text)]
    format: Format,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Json,
}

#[derive(Args, Debug)]
struct Quadrature {
    #[arg(long)]
    half_width: Option<f64>,
    #[arg(long)]
    nodes: Option<usize>,
    #[arg(long)]
    lattice_radius: Option<f64>,
    #[arg(long)]
    epsilon: Option<f64>,
    #[arg(long)]
    tolerance: Option<f64>,
}

impl Quadrature {
    fn params(&self) -> QuadratureParams {
        let mut p = QuadratureParams::default();
        if let Some(v) = self.half_width {
            p.half_width = v;
        }
        if let Some(v) = self.nodes {
            p.nodes = v;
            p.mean_nodes = v;
        }
        if let Some(v) = self.lattice_radius {
            p.lattice_radius = v;
        }
        if let Some(v) = self.epsilon {
            p.epsilon = v;
        }
        if let Some(v) = self.tolerance {
            p.tolerance = v;
        }
        p
    }
}

/// Exit codes: 0 pass, 1 negative verdict, 2 input error.
struct Outcome {
    text: String,
    json: Value,
    code: u8,
}

struct InputError(String);

impl<E: std::fmt::Display> From<E> for InputError {
    fn from(e: E) -> Self {
        InputError(e.to_string())
    }
}

fn load(path: &PathBuf) -> Result<Divisor, InputError> {
    let text =
        fs::read_to_string(path).map_err(|e| InputError(format!("{}: {e}", path.display())))?;
    Ok(parse_divisor(&text)?)
}

fn matrix_json(a: &Matrix) -> Value {
    a.rows()
        .map(|r| {
            r.iter()
                .map(|s| Value::String(s.to_string()))
                .collect::<Vec<_>>()
        })
        .collect()
}

fn vec_text(v: &[Scalar]) -> String {
    let cells: Vec<String> = v.iter().map(ToString::to_string).collect();
    format!("[{}]", cells.join(", "))
}

fn vec_json(v: &[Scalar]) -> Value {
    v.iter().map(|s| Value::String(s.to_string())).collect()
}

fn floats(v: &[Scalar]) -> Vec<f64> {
    v.iter().map(Scalar::to_f64).collect()
}

fn cmd_check(d: &Divisor) -> Outcome {
    let a = a_matrix(d);
    let gram = gram_sum(d);
    let asym: Vec<(usize, usize)> = gram
        .asymmetric_entries()
        .iter()
        .map(|&(j, k)| (j + 1, k + 1))
        .collect();
    let ok = ap_modulus_criterion(d);
    let mut text = format!("A(d) =\n{}", a.matrix());
    if !text.ends_with('\n') {
        text.push('\n');
    }
    if gram.is_symmetric() {
        text.push_str("Gram sum: symmetric\n");
    } else {
        let cells: Vec<String> = asym.iter().map(|(j, k)| format!("({j}, {k})")).collect();
        text.push_str(&format!(
            "Gram sum: not symmetric at {}\n",
            cells.join(", ")
        ));
    }
    text.push_str(&format!("AP-modulus: {}\n", if ok { "YES" } else { "NO" }));
    Outcome {
        text,
        json: json!({
            "schema": 1,
            "command": "check",
            "m": d.dim(),
            "a_matrix": matrix_json(a.matrix()),
            "gram_symmetric": gram.is_symmetric(),
            "asymmetric_entries": asym,
            "ap_modulus": ok,
        }),
        code: if ok { 0 } else { 1 },
    }
}

fn cmd_decompose(d: &Divisor, output: Option<&PathBuf>) -> Result<Outcome, InputError> {
    let (pairs, cert) = match decompose(d) {
        Ok(r) => r,
        Err(e @ DecomposeError::NotSymmetricGram(_)) => {
            return Ok(Outcome {
                text: format!("decomposition refused: {e}\n"),
                json: json!({"schema": 1, "command": "decompose", "verified": false, "error": e.to_string()}),
                code: 1,
            })
        }
        Err(e) => return Err(e.into()),
    };
    // nothing unverified leaves this function
    let verified = verify_certificate(d, &pairs)? && cert.replay(d).is_ok_and(|p| p == pairs) && {
        let dd = degenerate_divisor(d.field(), d.dim(), &pairs)?;
        a_matrix(&dd).is_zero()
    };
    if !verified {
        return Ok(Outcome {
            text: "certificate failed verification\n".into(),
            json: json!({"schema": 1, "command": "decompose", "verified": false}),
            code: 1,
        });
    }
    let body = cert.serialize(d)?;
    let mut text = String::new();
    match output {
        Some(path) => {
            fs::write(path, &body).map_err(|e| InputError(format!("{}: {e}", path.display())))?;
            text.push_str(&format!("certificate written to {}\n", path.display()));
        }
        None => text.push_str(&body),
    }
    text.push_str(&format!(
        "degenerate pairs: {}\nverified: yes\n",
        pairs.len()
    ));
    let json_pairs: Vec<Value> = pairs
        .iter()
        .map(|p| json!({"gamma": p.gamma.to_string(), "nu": vec_json(&p.nu)}))
        .collect();
    Ok(Outcome {
        text,
        json: json!({
            "schema": 1,
            "command": "decompose",
            "verified": true,
            "pairs": json_pairs,
            "steps": cert.steps.len(),
            "certificate": body,
        }),
        code: 0,
    })
}

fn cmd_classify(d: &Divisor) -> Result<Outcome, InputError> {
    let mut text = String::new();
    let mut rows = Vec::new();
    for (i, p) in d.pairs().iter().enumerate() {
        let c = classify_pair(p.lambda(), p.mu())?;
        let kind = if c.q_dependent {
            "periodic, Q-dependent"
        } else if !c.r_dependent {
            "periodic, R-independent"
        } else {
            "almost-periodic, non-periodic"
        };
        text.push_str(&format!(
            "pair {}: {kind}; q_dependent={} r_dependent={} periodic={} holo_ap_divisor={} ap_modulus={}\n",
            i + 1,
            c.q_dependent,
            c.r_dependent,
            c.periodic,
            c.holo_ap_divisor,
            c.ap_modulus
        ));
        rows.push(json!({
            "pair": i + 1,
            "kind": kind,
            "q_dependent": c.q_dependent,
            "r_dependent": c.r_dependent,
            "periodic": c.periodic,
            "holo_ap_divisor": c.holo_ap_divisor,
            "ap_modulus": c.ap_modulus,
        }));
    }
    Ok(Outcome {
        text,
        json: json!({"schema": 1, "command": "classify", "pairs": rows}),
        code: 0,
    })
}

fn cmd_periods(d: &Divisor) -> Outcome {
    let mut text = String::new();
    let mut rows = Vec::new();
    let mut code = 0;
    for (i, p) in d.pairs().iter().enumerate() {
        match periods(p.lambda(), p.mu()) {
            Ok((p1, p2)) => {
                text.push_str(&format!(
                    "pair {}: P1 = {} ~ {:?}\n        P2 = {} ~ {:?}\n",
                    i + 1,
                    vec_text(&p1),
                    floats(&p1),
                    vec_text(&p2),
                    floats(&p2)
                ));
                rows.push(json!({
                    "pair": i + 1,
                    "p1": vec_json(&p1),
                    "p2": vec_json(&p2),
                    "p1_float": floats(&p1),
                    "p2_float": floats(&p2),
                }));
            }
            Err(e) => {
                code = 1;
                text.push_str(&format!("pair {}: {e}\n", i + 1));
                rows.push(json!({"pair": i + 1, "error": e.to_string()}));
            }
        }
    }
    Outcome {
        text,
        json: json!({"schema": 1, "command": "periods", "pairs": rows}),
        code,
    }
}

fn report_json(r: &NumericReport) -> Value {
    json!({
        "value": r.value,
        "reference": r.reference,
        "abs_error": r.abs_error,
        "rel_error": r.rel_error,
        "error_estimate": r.error_estimate,
        "passed": r.passed(),
    })
}

fn cmd_verify_numeric(d: &Divisor, params: &QuadratureParams) -> Result<Outcome, InputError> {
    let m = d.dim();
    if m < 2 {
        return Err(InputError("verify-numeric needs m >= 2".into()));
    }
    params.validate()?;
    let mut text = String::new();
    let mut pass = true;
    let mut dis = Value::Null;
    if m == 2 {
        let r = lemma_dis_check(&params.default_bump(2), params)?;
        text.push_str(&format!(
            "base-case mean value: {}\n{r}\n",
            verdict(r.passed())
        ));
        pass &= r.passed();
        dis = report_json(&r);
    }
    let mut rows = Vec::new();
    for (i, p) in d.pairs().iter().enumerate() {
        let single = Divisor::from_pairs(d.field().clone(), m, vec![p.clone()])?;
        let exact = a_matrix(&single).matrix().to_f64();
        let numeric = a_matrix_numeric(&floats(p.lambda()), &floats(p.mu()), params)?;
        let mut worst: f64 = 0.0;
        let mut entries = Vec::new();
        for j in 0..m {
            for k in 0..m {
                let err = (numeric[j][k] - exact[j][k]).abs();
                let ok = err <= params.tolerance * exact[j][k].abs().max(1.0);
                pass &= ok;
                worst = worst.max(err);
                entries.push(json!({
                    "j": j + 1,
                    "k": k + 1,
                    "numeric": numeric[j][k],
                    "exact": exact[j][k],
                    "abs_error": err,
                    "passed": ok,
                }));
                text.push_str(&format!(
                    "pair {} a[{},{}]: numeric {:+.6} exact {:+.6} error {:.3e} {}\n",
                    i + 1,
                    j + 1,
                    k + 1,
                    numeric[j][k],
                    exact[j][k],
                    err,
                    verdict(ok)
                ));
            }
        }
        rows.push(json!({"pair": i + 1, "max_abs_error": worst, "entries": entries}));
    }
    text.push_str(&format!("verify-numeric: {}\n", verdict(pass)));
    Ok(Outcome {
        text,
        json: json!({
            "schema": 1,
            "command": "verify-numeric",
            "base_case": dis,
            "pairs": rows,
            "passed": pass,
            "params": {
                "half_width": params.half_width,
                "nodes": params.nodes,
                "mean_nodes": params.mean_nodes,
                "lattice_radius": params.lattice_radius,
                "epsilon": params.epsilon,
                "tolerance": params.tolerance,
            },
        }),
        code: if pass { 0 } else { 1 },
    })
}

fn verdict(ok: bool) -> &'static str {
    if ok {
        "PASS"
    } else {
        "FAIL"
    }
}

fn run(cli: &Cli) -> Result<(Outcome, Format), InputError> {
    Ok(match &cli.command {
        Command::Check(c) => (cmd_check(&load(&c.input)?), c.format),
        Command::Decompose { common, output } => (
            cmd_decompose(&load(&common.input)?, output.as_ref())?,
            common.format,
        ),
        Command::Classify(c) => (cmd_classify(&load(&c.input)?)?, c.format),
        Command::Periods(c) => (cmd_periods(&load(&c.input)?), c.format),
        Command::VerifyNumeric { common, quad } => (
            cmd_verify_numeric(&load(&common.input)?, &quad.params())?,
            common.format,
        ),
    })
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok((out, Format::Text)) => {
            print!("{}", out.text);
            ExitCode::from(out.code)
        }
        Ok((out, Format::Json)) => {
            println!(
                "{}",
                serde_json::to_string_pretty(&out.json).expect("json values serialize")
            );
            ExitCode::from(out.code)
        }
        Err(InputError(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
    }
}
