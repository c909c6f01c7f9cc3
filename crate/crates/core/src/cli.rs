//! Command-line front end: `amplitudes`, `sweep`, `verify`, `probe-continuum`.
//!
//! Exit codes: 0 success, 1 verification failure, 2 usage or validation
//! error, 3 resonance, 4 I/O. The optional `THREADS` environment variable
//! sizes the worker pool used by `sweep` and `verify`.

use std::ffi::OsString;
use std::fs::File;
use std::io::Write;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;
use serde_json::value::RawValue;

use crate::error::Error;
use crate::lattice::EnergyAngle;
use crate::potential::{ChainSpec, MultiCenterSpec, TwoCenterSpec};
use crate::scattering::{
    closed_form, continuum_probe, halving_sequence, solve_numeric, ContinuumProbe,
};
use crate::sweep::{
    self, sci, Format, Method, MethodUsed, PhiGrid, Record, SweepConfig, SweepModel,
};
use crate::verify::{self, render_report, CheckReport, Suite, Target, VerifyConfig};

pub const EXIT_OK: i32 = 0;
pub const EXIT_VERIFY: i32 = 1;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_RESONANCE: i32 = 3;
pub const EXIT_IO: i32 = 4;

#[derive(Debug, Parser)]
#[command(
    name = "nhscatter",
    version,
    about = "Lattice scattering by non-Hermitian point interactions"
)]
pub struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Reflection and transmission at a single angle.
    Amplitudes(AmplitudesArgs),
    /// Amplitudes over a parameter grid.
    Sweep(SweepArgs),
    /// Metric, unitarity and closed-vs-numeric suites.
    Verify(VerifyArgs),
    /// Small-spacing trend of the merged scatterer.
    ProbeContinuum(ProbeArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum ModelKind {
    TwoCenter,
    Chain,
    MultiCenter,
}

#[derive(Debug, Args)]
struct ModelArgs {
    #[arg(long, value_enum, default_value = "two-center")]
    model: ModelKind,
    /// Two-center coupling(s), comma separated.
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
    g: Vec<f64>,
    /// Two-center gap(s), comma separated.
    #[arg(long = "N", value_delimiter = ',', allow_hyphen_values = true)]
    gaps: Vec<i64>,
    /// Chain couplings, innermost first.
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
    couplings: Vec<f64>,
    /// Multi-center layout as `site:g` pairs.
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
    centers: Vec<String>,
}

#[derive(Debug, Args)]
struct OutputArgs {
    #[arg(long, default_value = "csv")]
    format: String,
    /// Write here instead of stdout.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Debug, Args)]
struct AmplitudesArgs {
    #[command(flatten)]
    model: ModelArgs,
    #[arg(long)]
    phi: f64,
    #[arg(long, default_value = "numeric")]
    method: String,
    #[command(flatten)]
    output: OutputArgs,
}

#[derive(Debug, Args)]
struct SweepArgs {
    #[command(flatten)]
    model: ModelArgs,
    /// `count:min:max`
    #[arg(long = "phi-grid")]
    phi_grid: Option<String>,
    #[arg(long, default_value = "numeric")]
    method: String,
    #[command(flatten)]
    output: OutputArgs,
}

#[derive(Debug, Args)]
struct VerifyArgs {
    #[arg(long, default_value = "all")]
    suite: String,
    #[arg(long, value_enum)]
    model: Option<ModelKind>,
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
    g: Vec<f64>,
    #[arg(long = "N", value_delimiter = ',', allow_hyphen_values = true)]
    gaps: Vec<i64>,
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
    couplings: Vec<f64>,
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
    centers: Vec<String>,
    #[arg(long = "phi-grid")]
    phi_grid: Option<String>,
    /// Overrides every per-suite tolerance.
    #[arg(long)]
    tolerance: Option<f64>,
    #[arg(long, default_value = "text")]
    format: String,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Debug, Args)]
struct ProbeArgs {
    #[arg(long, allow_negative_numbers = true)]
    g: f64,
    #[arg(long, default_value_t = 1.0)]
    kappa: f64,
    /// Largest spacing.
    #[arg(long, default_value_t = 0.2)]
    h0: f64,
    #[arg(long, default_value_t = 6)]
    halvings: u32,
    #[command(flatten)]
    output: OutputArgs,
}

/// Failure of a command, carrying its exit code.
#[derive(Debug)]
pub struct Failure {
    pub code: i32,
    pub message: String,
}

impl Failure {
    fn usage(message: impl Into<String>) -> Self {
        Failure {
            code: EXIT_USAGE,
            message: message.into(),
        }
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let code = match e {
            Error::Resonance { .. } | Error::ResonantAngle { .. } => EXIT_RESONANCE,
            _ => EXIT_USAGE,
        };
        Failure {
            code,
            message: e.to_string(),
        }
    }
}

type Outcome = std::result::Result<(), Failure>;

fn parse_centers(items: &[String]) -> std::result::Result<MultiCenterSpec, Failure> {
    let bad = |s: &str| Failure::usage(format!("center '{s}' is not site:g"));
    let centers = items
        .iter()
        .map(|s| {
            let (c, g) = s.split_once(':').ok_or_else(|| bad(s))?;
            Ok((
                c.trim().parse().map_err(|_| bad(s))?,
                g.trim().parse().map_err(|_| bad(s))?,
            ))
        })
        .collect::<std::result::Result<Vec<(i64, f64)>, Failure>>()?;
    Ok(MultiCenterSpec::new(centers)?)
}

fn parse<T: std::str::FromStr<Err = Error>>(s: &str) -> std::result::Result<T, Failure> {
    Ok(s.parse()?)
}

fn threads() -> std::result::Result<Option<usize>, Failure> {
    match std::env::var("THREADS") {
        Ok(v) => match v.trim().parse::<usize>() {
            Ok(n) if n > 0 => Ok(Some(n)),
            _ => Err(Failure::usage(format!(
                "THREADS must be a positive integer, got '{v}'"
            ))),
        },
        Err(_) => Ok(None),
    }
}

fn emit(bytes: &[u8], out: Option<&PathBuf>, stdout: &mut dyn Write) -> Outcome {
    let io = |e: std::io::Error, what: String| Failure {
        code: EXIT_IO,
        message: format!("{what}: {e}"),
    };
    match out {
        Some(path) => File::create(path)
            .and_then(|mut f| f.write_all(bytes).and_then(|_| f.flush()))
            .map_err(|e| io(e, format!("cannot write {}", path.display()))),
        None => stdout.write_all(bytes).map_err(|e| io(e, "stdout".into())),
    }
}

fn write_table(records: &[Record], output: &OutputArgs, stdout: &mut dyn Write) -> Outcome {
    let format: Format = parse(&output.format)?;
    let mut buf = Vec::new();
    sweep::write_records(records, format, &mut buf).map_err(|e| Failure {
        code: EXIT_IO,
        message: e.to_string(),
    })?;
    emit(&buf, output.out.as_ref(), stdout)
}

fn single<T: Copy>(values: &[T], flag: &str) -> std::result::Result<T, Failure> {
    match values {
        [v] => Ok(*v),
        [] => Err(Failure::usage(format!("--{flag} is required"))),
        _ => Err(Failure::usage(format!(
            "--{flag} takes a single value here"
        ))),
    }
}

fn amplitudes(args: &AmplitudesArgs, stdout: &mut dyn Write) -> Outcome {
    let method: Method = parse(&args.method)?;
    let phi = EnergyAngle::new(args.phi)?;
    let m = &args.model;
    let records = match m.model {
        ModelKind::TwoCenter => {
            let spec = TwoCenterSpec::new(single(&m.g, "g")?, single(&m.gaps, "N")?)?;
            let rec = |amplitudes, method, discrepancy| Record {
                g: Some(spec.g()),
                gap: Some(spec.gap()),
                amplitudes,
                method,
                resonance: false,
                discrepancy,
            };
            let closed = || {
                closed_form(&spec, phi).map(|(a, _)| a).map_err(|e| {
                    let mut f = Failure::from(e);
                    if f.code == EXIT_RESONANCE {
                        f.message.push_str("\nhint: rerun with --method numeric");
                    }
                    f
                })
            };
            match method {
                Method::Closed => vec![rec(closed()?, MethodUsed::Closed, None)],
                Method::Numeric => vec![rec(
                    solve_numeric(&spec, phi)?.amplitudes,
                    MethodUsed::Numeric,
                    None,
                )],
                Method::Both => {
                    let c = closed()?;
                    let n = solve_numeric(&spec, phi)?.amplitudes;
                    let d = Some(c.discrepancy(&n));
                    vec![
                        rec(c, MethodUsed::Closed, d),
                        rec(n, MethodUsed::Numeric, d),
                    ]
                }
            }
        }
        kind => {
            if method != Method::Numeric {
                return Err(Failure::usage(
                    "closed forms exist only for the two-center model; use --method numeric",
                ));
            }
            let amplitudes = match kind {
                ModelKind::Chain => solve_numeric(&ChainSpec::new(m.couplings.clone())?, phi)?,
                _ => solve_numeric(&parse_centers(&m.centers)?, phi)?,
            }
            .amplitudes;
            vec![Record {
                g: None,
                gap: None,
                amplitudes,
                method: MethodUsed::Numeric,
                resonance: false,
                discrepancy: None,
            }]
        }
    };
    write_table(&records, &args.output, stdout)
}

fn sweep_model(m: &ModelArgs) -> std::result::Result<SweepModel, Failure> {
    Ok(match m.model {
        ModelKind::TwoCenter => SweepModel::TwoCenter {
            couplings: if m.g.is_empty() {
                verify::COUPLINGS.to_vec()
            } else {
                m.g.clone()
            },
            gaps: if m.gaps.is_empty() {
                verify::GAPS.to_vec()
            } else {
                m.gaps.clone()
            },
        },
        ModelKind::Chain => SweepModel::Chain(ChainSpec::new(m.couplings.clone())?),
        ModelKind::MultiCenter => SweepModel::MultiCenter(parse_centers(&m.centers)?),
    })
}

fn run_sweep(args: &SweepArgs, stdout: &mut dyn Write) -> Outcome {
    let config = SweepConfig {
        model: sweep_model(&args.model)?,
        phi: match &args.phi_grid {
            Some(s) => parse(s)?,
            None => PhiGrid::default(),
        },
        method: parse(&args.method)?,
    };
    // Validate the output format before doing any work.
    parse::<Format>(&args.output.format)?;
    let records = sweep::evaluate(&config, threads()?)?;
    write_table(&records, &args.output, stdout)
}

#[derive(Serialize)]
struct JsonCheck<'a> {
    check: &'a str,
    passed: bool,
    max: Box<RawValue>,
    tolerance: Box<RawValue>,
    cases: usize,
    skipped: usize,
    worst: &'a str,
}

fn raw_number(x: f64) -> Box<RawValue> {
    let text = if x.is_finite() { sci(x) } else { "null".into() };
    RawValue::from_string(text).expect("formatted number is valid JSON")
}

fn run_verify(args: &VerifyArgs, stdout: &mut dyn Write) -> Outcome {
    let suite: Suite = parse(&args.suite)?;
    let model_given = !(args.g.is_empty()
        && args.gaps.is_empty()
        && args.couplings.is_empty()
        && args.centers.is_empty());
    let target = match args.model {
        None if !model_given => Target::Default,
        None | Some(ModelKind::TwoCenter) => Target::TwoCenter {
            couplings: if args.g.is_empty() {
                verify::COUPLINGS.to_vec()
            } else {
                args.g.clone()
            },
            gaps: if args.gaps.is_empty() {
                verify::GAPS.to_vec()
            } else {
                args.gaps.clone()
            },
        },
        Some(ModelKind::Chain) => Target::Chain(ChainSpec::new(args.couplings.clone())?),
        Some(ModelKind::MultiCenter) => Target::MultiCenter(parse_centers(&args.centers)?),
    };
    let config = VerifyConfig {
        suite,
        target,
        phi: match &args.phi_grid {
            Some(s) => parse(s)?,
            None => verify::default_phi_grid(),
        },
        tolerance: args.tolerance,
    };
    let json = match args.format.as_str() {
        "text" => false,
        "json" => true,
        other => {
            return Err(Failure::usage(format!(
                "unknown format '{other}' (text, json)"
            )))
        }
    };
    let reports = match threads()? {
        Some(n) => rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build()
            .map_err(|e| Failure::usage(e.to_string()))?
            .install(|| verify::run_verify(&config))?,
        None => verify::run_verify(&config)?,
    };

    let bytes = if json {
        let rows: Vec<JsonCheck> = reports
            .iter()
            .map(|r| JsonCheck {
                check: r.name,
                passed: r.passed(),
                max: raw_number(r.max),
                tolerance: raw_number(r.tolerance),
                cases: r.cases,
                skipped: r.skipped,
                worst: &r.worst,
            })
            .collect();
        let mut v = serde_json::to_vec_pretty(&rows).expect("report serializes");
        v.push(b'\n');
        v
    } else {
        render_report(&reports).into_bytes()
    };
    emit(&bytes, args.out.as_ref(), stdout)?;

    let failed: Vec<&CheckReport> = reports.iter().filter(|r| !r.passed()).collect();
    if failed.is_empty() {
        Ok(())
    } else {
        let lines: Vec<String> = failed
            .iter()
            .map(|r| format!("{} exceeded {:e} at ({})", r.name, r.tolerance, r.worst))
            .collect();
        Err(Failure {
            code: EXIT_VERIFY,
            message: lines.join("\n"),
        })
    }
}

#[derive(Serialize)]
#[allow(non_snake_case)]
struct JsonProbeRow {
    h: Box<RawValue>,
    phi: Box<RawValue>,
    abs_T: Box<RawValue>,
    abs_R: Box<RawValue>,
    abs_psi0: Box<RawValue>,
    discrepancy: Box<RawValue>,
}

#[derive(Serialize)]
struct JsonProbe {
    g: Box<RawValue>,
    kappa: Box<RawValue>,
    rows: Vec<JsonProbeRow>,
    transmission_exponent: Box<RawValue>,
    psi0_exponent: Box<RawValue>,
}

pub const PROBE_HEADER: [&str; 6] = ["h", "phi", "abs_T", "abs_R", "abs_psi0", "discrepancy"];

fn probe_bytes(p: &ContinuumProbe, format: Format) -> std::io::Result<Vec<u8>> {
    let mut buf = Vec::new();
    match format {
        Format::Csv => {
            let mut w = csv::WriterBuilder::new()
                .terminator(csv::Terminator::Any(b'\n'))
                .from_writer(&mut buf);
            w.write_record(PROBE_HEADER)?;
            for r in &p.rows {
                w.write_record(
                    [
                        r.h,
                        r.phi,
                        r.transmission_abs,
                        r.reflection_abs,
                        r.psi0_abs,
                        r.discrepancy,
                    ]
                    .map(sci),
                )?;
            }
            w.flush()?;
            drop(w);
            writeln!(
                buf,
                "# transmission_exponent={}",
                sci(p.transmission_exponent)
            )?;
            writeln!(buf, "# psi0_exponent={}", sci(p.psi0_exponent))?;
        }
        Format::Json => {
            let doc = JsonProbe {
                g: raw_number(p.g),
                kappa: raw_number(p.kappa),
                rows: p
                    .rows
                    .iter()
                    .map(|r| JsonProbeRow {
                        h: raw_number(r.h),
                        phi: raw_number(r.phi),
                        abs_T: raw_number(r.transmission_abs),
                        abs_R: raw_number(r.reflection_abs),
                        abs_psi0: raw_number(r.psi0_abs),
                        discrepancy: raw_number(r.discrepancy),
                    })
                    .collect(),
                transmission_exponent: raw_number(p.transmission_exponent),
                psi0_exponent: raw_number(p.psi0_exponent),
            };
            serde_json::to_writer_pretty(&mut buf, &doc)?;
            buf.push(b'\n');
        }
    }
    Ok(buf)
}

fn probe(args: &ProbeArgs, stdout: &mut dyn Write) -> Outcome {
    if args.g == 0.0 {
        return Err(Failure::usage("free model has no wall limit"));
    }
    let format: Format = parse(&args.output.format)?;
    if !(args.h0.is_finite() && args.h0 > 0.0) || args.halvings == 0 {
        return Err(Failure::usage("need h0 > 0 and at least one halving"));
    }
    let p = continuum_probe(
        args.g,
        args.kappa,
        &halving_sequence(args.h0, args.halvings),
    )?;
    let bytes = probe_bytes(&p, format).map_err(|e| Failure {
        code: EXIT_IO,
        message: e.to_string(),
    })?;
    emit(&bytes, args.output.out.as_ref(), stdout)
}

/// Parses `args` (program name first), runs the command and returns the exit code.
pub fn run<I, T>(args: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = e.exit_code();
            if code == 0 {
                let _ = write!(stdout, "{}", e.render());
                return EXIT_OK;
            }
            let _ = write!(stderr, "{}", e.render());
            return EXIT_USAGE;
        }
    };
    let outcome = match &cli.command {
        Command::Amplitudes(a) => amplitudes(a, stdout),
        Command::Sweep(a) => run_sweep(a, stdout),
        Command::Verify(a) => run_verify(a, stdout),
        Command::ProbeContinuum(a) => probe(a, stdout),
    };
    match outcome {
        Ok(()) => EXIT_OK,
        Err(f) => {
            let _ = writeln!(stderr, "error: {}", f.message);
            f.code
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn call(args: &[&str]) -> (i32, String, String) {
        let mut out = Vec::new();
        let mut err = Vec::new();
        let code = run(
            std::iter::once("nhscatter").chain(args.iter().copied()),
            &mut out,
            &mut err,
        );
        (
            code,
            String::from_utf8(out).unwrap(),
            String::from_utf8(err).unwrap(),
        )
    }

    #[test]
    fn free_amplitudes() {
        let (code, out, _) = call(&[
            "amplitudes",
            "--model",
            "two-center",
            "--g",
            "0",
            "--N",
            "3",
            "--phi",
            "1.0",
        ]);
        assert_eq!(code, 0);
        let row: Vec<&str> = out.lines().nth(1).unwrap().split(',').collect();
        assert!(row[3].parse::<f64>().unwrap().abs() < 1e-13);
        assert!(row[4].parse::<f64>().unwrap().abs() < 1e-13);
        assert!((row[8].parse::<f64>().unwrap() - 1.0).abs() < 1e-13);
    }

    #[test]
    fn both_methods_agree() {
        let (code, out, _) = call(&[
            "amplitudes",
            "--g",
            "0.5",
            "--N",
            "-1",
            "--phi",
            "1.0471975512",
            "--method",
            "both",
        ]);
        assert_eq!(code, 0);
        assert_eq!(out.lines().count(), 3);
        let d: f64 = out
            .lines()
            .nth(1)
            .unwrap()
            .rsplit(',')
            .next()
            .unwrap()
            .parse()
            .unwrap();
        assert!(d < 1e-10);
    }

    #[test]
    fn coupling_out_of_range() {
        let (code, _, err) = call(&["amplitudes", "--g", "1.2", "--N", "0", "--phi", "1.0"]);
        assert_eq!(code, 2);
        assert!(err.contains("out of (-1, 1)"), "{err}");
    }

    #[test]
    fn resonance_exit_code_and_hint() {
        let phi = (std::f64::consts::PI / 2.0).to_string();
        let (code, _, err) = call(&[
            "amplitudes",
            "--g",
            "0.4",
            "--N",
            "1",
            "--phi",
            &phi,
            "--method",
            "closed",
        ]);
        assert_eq!(code, 3);
        assert!(err.contains("--method numeric"));
    }

    #[test]
    fn usage_errors() {
        assert_eq!(call(&["amplitudes", "--phi", "1.0", "--bogus"]).0, 2);
        assert_eq!(call(&["sweep", "--phi-grid", "0:0.1:1.0"]).0, 2);
        assert_eq!(call(&["sweep", "--method", "guess"]).0, 2);
        assert_eq!(call(&["probe-continuum", "--g", "0"]).0, 2);
        assert_eq!(
            call(&[
                "amplitudes",
                "--model",
                "chain",
                "--couplings",
                "0.3",
                "--phi",
                "1",
                "--method",
                "closed"
            ])
            .0,
            2
        );
        assert_eq!(call(&[]).0, 2);
    }

    #[test]
    fn help_is_success() {
        let (code, out, _) = call(&["--help"]);
        assert_eq!(code, 0);
        assert!(out.contains("probe-continuum"));
    }

    #[test]
    fn centers_parse() {
        let m = parse_centers(&["-4:0.2".into(), "4:-0.3".into()]).unwrap();
        assert_eq!(m.centers(), &[(-4, 0.2), (4, -0.3)]);
        assert!(parse_centers(&["4".into()]).is_err());
    }

    #[test]
    fn probe_table() {
        let (code, out, _) = call(&["probe-continuum", "--g", "0.5", "--halvings", "3"]);
        assert_eq!(code, 0);
        assert_eq!(out.lines().next().unwrap(), PROBE_HEADER.join(","));
        assert_eq!(out.lines().filter(|l| l.starts_with('#')).count(), 2);
    }
}
