use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use heat_oscillation::{
    analytic_band_phi, closed_h, eval_phi, kernel_moments, numeric_h, prescribe_average,
    prescribe_data, two_mode_example, u_origin, verify_certificate_with, Envelope, Error,
    KernelFlavor, PrescriptionCertificate, QuadratureSpec, VerifyOptions,
};

/// Environment variable naming the default directory for written files.
const OUT_DIR_VAR: &str = "HEAT_OSC_OUT_DIR";

#[derive(Parser)]
#[command(
    name = "heat-osc",
    version,
    about = "Prescribe and check oscillating radial heat data"
)]
struct Cli {
    #[command(flatten)]
    tolerances: Tolerances,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct Tolerances {
    /// Relative quadrature tolerance.
    #[arg(long, global = true, default_value_t = 1e-11)]
    rel_tol: f64,
    /// Absolute quadrature tolerance.
    #[arg(long, global = true, default_value_t = 1e-13)]
    abs_tol: f64,
}

#[derive(Subcommand)]
enum Command {
    /// Build data for a target and write its certificate.
    Prescribe(PrescribeArgs),
    /// Tabulate u(0,t) and the envelope, or φ and its ball average, as CSV.
    Probe(ProbeArgs),
    /// Measure the bands of a certificate; exit 1 when the chain fails.
    Verify(VerifyArgs),
    /// Recompute the constants of the two-mode example.
    Reproduce,
}

#[derive(Args)]
struct PrescribeArgs {
    /// Ball-average and solution limits: p α β q.
    #[arg(long, num_args = 4, value_names = ["P", "ALPHA", "BETA", "Q"], allow_negative_numbers = true,
          conflicts_with = "data", required_unless_present = "data")]
    average: Option<Vec<f64>>,
    /// Data and solution limits: r α β s.
    #[arg(long, num_args = 4, value_names = ["R", "ALPHA", "BETA", "S"], allow_negative_numbers = true)]
    data: Option<Vec<f64>>,
    /// Space dimension.
    #[arg(long, default_value_t = 1)]
    n: u32,
    /// Certificate path (default: cert.json in the output directory).
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct ProbeArgs {
    /// Certificate file.
    cert: PathBuf,
    #[arg(long, default_value_t = 1.0)]
    t_min: f64,
    #[arg(long, default_value_t = 1e8)]
    t_max: f64,
    /// Tabulate radii instead of times.
    #[arg(long)]
    radius: bool,
    #[arg(long, default_value_t = 1.0)]
    tau_min: f64,
    #[arg(long, default_value_t = 1e6)]
    tau_max: f64,
    /// Number of log-spaced rows.
    #[arg(long, default_value_t = 50)]
    points: usize,
    /// CSV path (default: standard output).
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct VerifyArgs {
    /// Certificate file.
    cert: PathBuf,
    /// Allowed distance of each measured band end from its expected value.
    #[arg(long, default_value_t = 0.02)]
    tol: f64,
    /// Start of the time sweep.
    #[arg(long, default_value_t = 1e6)]
    t_anchor: f64,
    /// Report path (default: report.json in the output directory).
    #[arg(long)]
    out: Option<PathBuf>,
}

/// Why a command failed, mapped to the process exit code.
enum Failure {
    Input(String),
    Numerical(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        if e.is_numerical() {
            Failure::Numerical(e.to_string())
        } else {
            Failure::Input(e.to_string())
        }
    }
}

fn io_failure(path: &Path, e: std::io::Error) -> Failure {
    Failure::Input(format!("{}: {e}", path.display()))
}

/// Twelve significant digits.
fn num(x: f64) -> String {
    format!("{x:.11e}")
}

fn output_path(explicit: Option<PathBuf>, default_name: &str) -> PathBuf {
    explicit.unwrap_or_else(|| {
        std::env::var_os(OUT_DIR_VAR)
            .map(PathBuf::from)
            .unwrap_or_else(|| PathBuf::from("."))
            .join(default_name)
    })
}

fn write_file(path: &Path, text: &str) -> Result<(), Failure> {
    if let Some(dir) = path.parent().filter(|d| !d.as_os_str().is_empty()) {
        fs::create_dir_all(dir).map_err(|e| io_failure(dir, e))?;
    }
    fs::write(path, text).map_err(|e| io_failure(path, e))
}

fn read_cert(path: &Path) -> Result<PrescriptionCertificate, Failure> {
    let text = fs::read_to_string(path).map_err(|e| io_failure(path, e))?;
    Ok(PrescriptionCertificate::from_json(&text)?)
}

fn log_grid(lo: f64, hi: f64, points: usize) -> Result<Vec<f64>, Failure> {
    if !(lo > 0.0 && hi >= lo && hi.is_finite()) || points == 0 {
        return Err(Failure::Input(format!(
            "need 0 < min ≤ max and at least one point, got [{lo}, {hi}] with {points}"
        )));
    }
    if points == 1 {
        return Ok(vec![lo]);
    }
    let step = (hi / lo).ln() / (points - 1) as f64;
    Ok((0..points).map(|i| lo * (step * i as f64).exp()).collect())
}

fn prescribe(args: PrescribeArgs, spec: &QuadratureSpec) -> Result<String, Failure> {
    let cert = match (&args.average, &args.data) {
        (Some(v), None) => prescribe_average(v[0], v[1], v[2], v[3], args.n, spec)?,
        (None, Some(v)) => prescribe_data(v[0], v[1], v[2], v[3], args.n, spec)?,
        _ => {
            return Err(Failure::Input(
                "give exactly one of --average and --data".into(),
            ))
        }
    };
    let path = output_path(args.out, "cert.json");
    write_file(&path, &cert.to_json()?)?;
    let mut out = String::new();
    let _ = writeln!(out, "construction: {:?}", cert.construction);
    if let Some(m) = cert.m_used {
        let _ = writeln!(out, "m: {}", num(m));
    }
    let names = ["r", "p", "alpha", "beta", "q", "s"];
    for (name, v) in names.iter().zip(cert.chain()) {
        let shown = v.map_or_else(|| "free".to_string(), num);
        let _ = writeln!(out, "{name}: {shown}");
    }
    let _ = writeln!(out, "certificate: {}", path.display());
    Ok(out)
}

fn probe(args: ProbeArgs, spec: &QuadratureSpec) -> Result<String, Failure> {
    let cert = read_cert(&args.cert)?;
    let n = cert.target.n;
    let mut csv = String::new();
    if args.radius {
        let closed = closed_h(&cert.data, n);
        csv.push_str("tau,phi,H_numeric,H_closed\n");
        for tau in log_grid(args.tau_min, args.tau_max, args.points)? {
            let phi = eval_phi(&cert.data, tau)?;
            let h = numeric_h(&cert.data, n, tau, 1e-10)?;
            let hc = match &closed {
                Some(e) => num(eval_phi(e, tau)?),
                None => String::new(),
            };
            let _ = writeln!(csv, "{},{},{},{}", num(tau), num(phi), num(h), hc);
        }
    } else {
        // bump-only data have no envelope; leave those columns empty
        let envelope = match Envelope::build(&cert.data, n, spec) {
            Ok(e) => Some(e),
            Err(Error::Unsupported(_)) => None,
            Err(e) => return Err(e.into()),
        };
        csv.push_str("t,log_sqrt4t,u_origin,envelope,abs_gap\n");
        for t in log_grid(args.t_min, args.t_max, args.points)? {
            let u = u_origin(&cert.data, n, t, spec)?;
            let (env, gap) = match &envelope {
                Some(e) => {
                    let v = e.eval(t)?;
                    (num(v), num((u - v).abs()))
                }
                None => (String::new(), String::new()),
            };
            let _ = writeln!(
                csv,
                "{},{},{},{},{}",
                num(t),
                num(0.5 * (4.0 * t).ln()),
                num(u),
                env,
                gap
            );
        }
    }
    match args.out {
        Some(path) => {
            write_file(&path, &csv)?;
            Ok(format!("wrote {}\n", path.display()))
        }
        None => Ok(csv),
    }
}

fn verify(args: VerifyArgs, spec: &QuadratureSpec) -> Result<(String, bool), Failure> {
    let cert = read_cert(&args.cert)?;
    let opts = VerifyOptions {
        t_anchor: args.t_anchor,
        ..VerifyOptions::default()
    };
    let report = verify_certificate_with(&cert, cert.target.n, spec, args.tol, &opts)?;
    let path = output_path(args.out, "report.json");
    write_file(&path, &report.to_json()?)?;
    let band = |b: &heat_oscillation::OscillationBand| {
        format!("[{}, {}]", num(b.lower_est), num(b.upper_est))
    };
    let mut out = String::new();
    let _ = writeln!(
        out,
        "phi band: {} ok={}",
        band(&report.measured_phi_band),
        report.phi_ok
    );
    let _ = writeln!(
        out,
        "H band:   {} ok={}",
        band(&report.measured_h_band),
        report.h_ok
    );
    let _ = writeln!(
        out,
        "u band:   {} ok={}",
        band(&report.measured_u_band),
        report.u_ok
    );
    let _ = writeln!(out, "max principle ok={}", report.max_principle_ok);
    for note in &report.notes {
        let _ = writeln!(out, "note: {note}");
    }
    let _ = writeln!(out, "chain_ok={}", report.chain_ok);
    let _ = writeln!(out, "report: {}", path.display());
    Ok((out, report.chain_ok))
}

fn reproduce(spec: &QuadratureSpec) -> Result<String, Failure> {
    let first = kernel_moments(1, 1.0, KernelFlavor::AverageKernel, spec)?;
    let second = kernel_moments(1, 2.0, KernelFlavor::AverageKernel, spec)?;
    let cert = two_mode_example(spec)?;
    let h = closed_h(&cert.data, 1)
        .ok_or_else(|| Failure::Numerical("no closed ball average".into()))?;
    let (_, h_max) = analytic_band_phi(&h)?;
    let (alpha, beta) = cert.expected_u_band;
    let rows = [
        ("A", first.a_value, 0.8922533173),
        ("B", first.b_value, 0.0309458950),
        ("C", second.a_value, 0.6491736727),
        ("D", second.b_value, 0.0995350909),
        ("max sin x + sin 2x", h_max, 1.7601725930),
        ("alpha", alpha, -1.3692118380),
        ("beta", beta, 1.3280178871),
    ];
    let mut out = format!(
        "{:<20}{:>15}{:>15}{:>12}\n",
        "constant", "computed", "reference", "abs_diff"
    );
    for (name, got, want) in rows {
        let _ = writeln!(
            out,
            "{name:<20}{got:>15.9}{want:>15.9}{:>12.2e}",
            (got - want).abs()
        );
    }
    Ok(out)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let spec =
        QuadratureSpec::default().with_tolerances(cli.tolerances.rel_tol, cli.tolerances.abs_tol);
    let result = spec
        .validate()
        .map_err(Failure::from)
        .and_then(|_| match cli.command {
            Command::Prescribe(a) => prescribe(a, &spec).map(|s| (s, true)),
            Command::Probe(a) => probe(a, &spec).map(|s| (s, true)),
            Command::Verify(a) => verify(a, &spec),
            Command::Reproduce => reproduce(&spec).map(|s| (s, true)),
        });
    match result {
        Ok((text, ok)) => {
            print!("{text}");
            if ok {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            }
        }
        Err(Failure::Input(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
        Err(Failure::Numerical(msg)) => {
            eprintln!("numerical failure: {msg}");
            ExitCode::from(3)
        }
    }
}
