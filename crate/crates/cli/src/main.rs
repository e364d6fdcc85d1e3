use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use kohn_spectra::operators::{
    apply_boxb, apply_green, apply_laplace_beltrami, apply_sobolev_power, decompose,
    hardy_projection, residual_check,
};
use kohn_spectra::scalar::{format_ratio, parse_exponent};
use kohn_spectra::{json, schatten, sobolev, spectrum, Error, Polynomial};
use serde_json::json;

mod verify;

#[derive(Parser)]
#[command(name = "kohn-spectra", version, about = "Spectra of the Kohn Laplacian and its Green operator on odd-dimensional spheres")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Csv,
}

#[derive(Args)]
struct Common {
    /// Complex dimension; the sphere is S^{2n-1}.
    #[arg(long)]
    n: usize,
    #[arg(long, value_enum)]
    format: Option<Format>,
    /// Write to this file instead of stdout.
    #[arg(long)]
    output: Option<PathBuf>,
}

#[derive(Copy, Clone, Debug, ValueEnum)]
enum Operator {
    Decompose,
    Boxb,
    Green,
    LaplaceBeltrami,
    Hardy,
    SobolevPower,
}

#[derive(Subcommand)]
enum Command {
    /// Distinct eigenvalues of the Kohn Laplacian up to a cutoff.
    Spectrum {
        #[command(flatten)]
        common: Common,
        #[arg(long)]
        cutoff: String,
        /// One row per bidegree instead of per distinct eigenvalue.
        #[arg(long)]
        by_bidegree: bool,
    },
    /// Apply a spectral operator to a polynomial read from JSON.
    Apply {
        #[command(flatten)]
        common: Common,
        #[arg(long)]
        input: PathBuf,
        #[arg(long, value_enum)]
        operator: Operator,
        /// Exponent for `sobolev-power`.
        #[arg(long)]
        t: Option<String>,
    },
    /// Canonical solution `Gf` together with the exact residual.
    GreenSolve {
        #[command(flatten)]
        common: Common,
        #[arg(long)]
        input: PathBuf,
    },
    /// Truncated Schatten sum with tail bounds and convergence verdict.
    Schatten {
        #[command(flatten)]
        common: Common,
        #[arg(long)]
        r: String,
        #[arg(long, default_value_t = 50)]
        cutoff_p: u64,
        #[arg(long, default_value_t = 50)]
        cutoff_q: u64,
        /// Sum in floating point even for integer r.
        #[arg(long)]
        float: bool,
        /// Write (cutoff, partial sum) CSV for P = Q = 1, 2, 4, ... to this path.
        #[arg(long)]
        emit_plot: Option<PathBuf>,
    },
    /// Closed-form approximation of the Schatten norm for one or more r.
    SchattenApprox {
        #[command(flatten)]
        common: Common,
        /// Comma-separated exponents, each greater than n.
        #[arg(long, value_delimiter = ',', num_args = 1..)]
        r: Vec<f64>,
    },
    /// Best constant in the Sobolev gain estimate.
    SobolevConstant {
        #[command(flatten)]
        common: Common,
        #[arg(long)]
        scan_max: Option<u64>,
    },
    /// Sobolev ratio sequence over a range of degrees.
    Ratio {
        #[command(flatten)]
        common: Common,
        #[arg(long)]
        s: String,
        #[arg(long, default_value_t = 1)]
        k_min: u64,
        #[arg(long, default_value_t = 20)]
        k_max: u64,
    },
    /// Run the oracle checks; exits nonzero on any failure.
    Verify {
        #[command(flatten)]
        common: Common,
        #[arg(long, default_value_t = 4)]
        max_degree: u32,
        #[arg(long, default_value_t = 20)]
        samples: u64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
}

#[derive(Debug)]
enum Failure {
    Usage(String),
    Parse(String),
    Io(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::Parse(_) => Failure::Parse(e.to_string()),
            _ => Failure::Usage(e.to_string()),
        }
    }
}

impl Failure {
    fn kind(&self) -> &'static str {
        match self {
            Failure::Usage(_) => "usage",
            Failure::Parse(_) => "parse",
            Failure::Io(_) => "io",
        }
    }

    fn message(&self) -> &str {
        match self {
            Failure::Usage(m) | Failure::Parse(m) | Failure::Io(m) => m,
        }
    }
}

struct Emitted {
    body: String,
    ok: bool,
}

impl Emitted {
    fn json(value: serde_json::Value) -> Self {
        let mut body = serde_json::to_string_pretty(&value).expect("json serializes");
        body.push('\n');
        Self { body, ok: true }
    }

    fn text(body: String) -> Self {
        Self { body, ok: true }
    }
}

fn read_polynomial(path: &Path, n: usize) -> Result<Polynomial, Failure> {
    let text = fs::read_to_string(path)
        .map_err(|e| Failure::Io(format!("cannot read {}: {e}", path.display())))?;
    let f = json::parse_polynomial(&text)?;
    if f.n() != n {
        return Err(Failure::Usage(format!(
            "--n {n} does not match the input polynomial's n = {}",
            f.n()
        )));
    }
    Ok(f)
}

fn json_only(format: Option<Format>, command: &str) -> Result<(), Failure> {
    match format {
        Some(Format::Csv) => Err(Failure::Usage(format!("{command} emits JSON only"))),
        _ => Ok(()),
    }
}

fn check_n(n: usize) -> Result<(), Failure> {
    if n < 2 {
        return Err(Error::InvalidDimension(n).into());
    }
    Ok(())
}

fn csv_row(values: &[String]) -> String {
    let mut line = values.join(",");
    line.push('\n');
    line
}

fn opt_float(v: Option<f64>) -> String {
    v.map(|x| format!("{x:e}")).unwrap_or_else(|| "inf".into())
}

fn run(command: Command) -> Result<(Emitted, Option<PathBuf>), Failure> {
    match command {
        Command::Spectrum { common, cutoff, by_bidegree } => {
            check_n(common.n)?;
            let cutoff = parse_exponent(&cutoff)?;
            let out = match (common.format.unwrap_or(Format::Json), by_bidegree) {
                (Format::Csv, true) => Emitted::text(spectrum::entries_to_csv(
                    &spectrum::spectrum_entries(common.n, &cutoff)?,
                )),
                (Format::Json, true) => {
                    let rows: Vec<_> = spectrum::spectrum_entries(common.n, &cutoff)?
                        .iter()
                        .map(|e| {
                            json!({
                                "p": e.bidegree.p,
                                "q": e.bidegree.q,
                                "eigenvalue": format_ratio(&e.eigenvalue),
                                "multiplicity": e.multiplicity.to_string(),
                            })
                        })
                        .collect();
                    Emitted::json(json!({ "n": common.n, "entries": rows }))
                }
                (Format::Csv, false) => {
                    Emitted::text(spectrum::aggregate_spectrum(common.n, &cutoff)?.to_csv())
                }
                (Format::Json, false) => {
                    Emitted::json(spectrum::aggregate_spectrum(common.n, &cutoff)?.to_json())
                }
            };
            Ok((out, common.output))
        }
        Command::Apply { common, input, operator, t } => {
            check_n(common.n)?;
            json_only(common.format, "apply")?;
            let f = read_polynomial(&input, common.n)?;
            let result = match operator {
                Operator::Decompose => decompose(&f).to_json(),
                Operator::Boxb => apply_boxb(&f).to_json(),
                Operator::Green => apply_green(&f).to_json(),
                Operator::LaplaceBeltrami => apply_laplace_beltrami(&f).to_json(),
                Operator::Hardy => hardy_projection(&f).to_json(),
                Operator::SobolevPower => {
                    let t = t.ok_or_else(|| {
                        Failure::Usage("sobolev-power needs --t".into())
                    })?;
                    apply_sobolev_power(&f, &parse_exponent(&t)?).to_json()
                }
            };
            let name = operator
                .to_possible_value()
                .map(|v| v.get_name().to_owned())
                .unwrap_or_default();
            Ok((Emitted::json(json!({ "operator": name, "result": result })), common.output))
        }
        Command::GreenSolve { common, input } => {
            check_n(common.n)?;
            json_only(common.format, "green-solve")?;
            let f = read_polynomial(&input, common.n)?;
            let solution = apply_green(&f);
            let residual = residual_check(&f);
            let doc = json!({
                "n": common.n,
                "solution": json::polynomial_to_json(&solution.to_polynomial()),
                "components": solution.to_json()["components"].clone(),
                "hardy_part": json::polynomial_to_json(&hardy_projection(&f).to_polynomial()),
                "residual": format_ratio(&residual),
            });
            Ok((Emitted::json(doc), common.output))
        }
        Command::Schatten { common, r, cutoff_p, cutoff_q, float, emit_plot } => {
            check_n(common.n)?;
            let r = parse_exponent(&r)?;
            let report = schatten::schatten_report(common.n, &r, cutoff_p, cutoff_q, float)?;
            if let Some(path) = emit_plot {
                let top = cutoff_p.max(cutoff_q).max(1);
                let cutoffs: Vec<u64> = (0..64)
                    .map(|j| 1u64 << j)
                    .take_while(|&c| c < top)
                    .chain(std::iter::once(top))
                    .collect();
                let csv = schatten::partial_sum_series_csv(common.n, &r, &cutoffs)?;
                write_file(&path, &csv)?;
            }
            let out = match common.format.unwrap_or(Format::Json) {
                Format::Json => Emitted::json(serde_json::to_value(&report).expect("report serializes")),
                Format::Csv => Emitted::text(
                    String::from("n,r,cutoff_p,cutoff_q,partial_sum,partial_sum_float,tail_upper_float,tail_lower_float,verdict,approx_value_float\n")
                        + &csv_row(&[
                            report.n.to_string(),
                            report.r.clone(),
                            report.cutoff_p.to_string(),
                            report.cutoff_q.to_string(),
                            report.partial_sum.clone().unwrap_or_default(),
                            format!("{:e}", report.partial_sum_float),
                            opt_float(report.tail_upper_float),
                            opt_float(report.tail_lower_float),
                            format!("{:?}", report.verdict),
                            report.approx_value_float.map(|v| format!("{v:e}")).unwrap_or_default(),
                        ]),
                ),
            };
            Ok((out, common.output))
        }
        Command::SchattenApprox { common, r } => {
            check_n(common.n)?;
            if r.is_empty() {
                return Err(Failure::Usage("--r needs at least one value".into()));
            }
            let values = r
                .iter()
                .map(|&x| schatten::approx_formula(common.n, x).map(|v| (x, v)))
                .collect::<Result<Vec<_>, _>>()?;
            let out = match common.format.unwrap_or(Format::Json) {
                Format::Json => Emitted::json(json!({
                    "n": common.n,
                    "pole_residue_float": schatten::approx_pole_residue(common.n),
                    "values": values
                        .iter()
                        .map(|(r, v)| json!({ "r_float": r, "approx_value_float": v }))
                        .collect::<Vec<_>>(),
                })),
                Format::Csv => {
                    let mut csv = String::from("r_float,approx_value_float\n");
                    for (r, v) in &values {
                        csv.push_str(&format!("{r},{v:e}\n"));
                    }
                    Emitted::text(csv)
                }
            };
            Ok((out, common.output))
        }
        Command::SobolevConstant { common, scan_max } => {
            check_n(common.n)?;
            let scan = scan_max.unwrap_or_else(|| sobolev::minimum_scan(common.n));
            let report = sobolev::best_constant(common.n, scan)?;
            let out = match common.format.unwrap_or(Format::Json) {
                Format::Json => Emitted::json(report.to_json()),
                Format::Csv => Emitted::text(
                    String::from("n,c_squared,argmax_k,matches_theorem_display,matches_proof_display\n")
                        + &csv_row(&[
                            report.n.to_string(),
                            format_ratio(&report.c_squared),
                            report.argmax_k.to_string(),
                            report.matches_theorem_display.to_string(),
                            report.matches_proof_display.to_string(),
                        ]),
                ),
            };
            Ok((out, common.output))
        }
        Command::Ratio { common, s, k_min, k_max } => {
            check_n(common.n)?;
            let s = parse_exponent(&s)?;
            if k_min < 1 || k_max < k_min {
                return Err(Failure::Usage(format!(
                    "need 1 <= k-min <= k-max, got {k_min}..{k_max}"
                )));
            }
            let points = sobolev::ratio_points(common.n, &s, k_min..=k_max)?;
            let out = match common.format.unwrap_or(Format::Csv) {
                Format::Csv => Emitted::text(sobolev::ratio_points_csv(&points)),
                Format::Json => Emitted::json(json!({
                    "n": common.n,
                    "s": format_ratio(&s),
                    "bounded": sobolev::is_bounded(common.n, &s),
                    "points": points
                        .iter()
                        .map(|p| json!({
                            "k": p.k,
                            "value": p.value.exact().map(format_ratio),
                            "value_float": p.value.to_f64(),
                        }))
                        .collect::<Vec<_>>(),
                })),
            };
            Ok((out, common.output))
        }
        Command::Verify { common, max_degree, samples, seed } => {
            check_n(common.n)?;
            json_only(common.format, "verify")?;
            let report = verify::run(common.n, max_degree, samples, seed)?;
            let ok = report["passed"].as_bool().unwrap_or(false);
            let mut out = Emitted::json(report);
            out.ok = ok;
            Ok((out, common.output))
        }
    }
}

fn write_file(path: &Path, body: &str) -> Result<(), Failure> {
    fs::write(path, body).map_err(|e| Failure::Io(format!("cannot write {}: {e}", path.display())))
}

fn configure_threads() -> Result<(), Failure> {
    let Ok(value) = std::env::var("KOHN_SPECTRA_THREADS") else {
        return Ok(());
    };
    let threads: usize = value
        .trim()
        .parse()
        .map_err(|_| Failure::Usage(format!("KOHN_SPECTRA_THREADS must be a nonnegative integer, got {value:?}")))?;
    rayon::ThreadPoolBuilder::new()
        .num_threads(threads)
        .build_global()
        .map_err(|e| Failure::Usage(e.to_string()))
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = configure_threads().and_then(|_| run(cli.command)).and_then(|(out, path)| {
        match path {
            Some(path) => write_file(&path, &out.body)?,
            None => {
                let mut stdout = std::io::stdout().lock();
                stdout
                    .write_all(out.body.as_bytes())
                    .map_err(|e| Failure::Io(e.to_string()))?;
            }
        }
        Ok(out.ok)
    });
    match result {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(failure) => {
            let doc = json!({ "error": { "kind": failure.kind(), "message": failure.message() } });
            eprintln!("{doc}");
            ExitCode::from(2)
        }
    }
}
