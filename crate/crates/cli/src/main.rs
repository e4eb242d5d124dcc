mod output;

use std::io::Write;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use num_complex::Complex64 as C64;
use rayon::prelude::*;
use serde_json::{json, Map, Value as Json};

use gabor_fock::bargmann::{GaborAtom, HermiteExpansion};
use gabor_fock::checks::{growth_range_on_disk, suite_tasks, SuiteConfig, Task};
use gabor_fock::dual::{min_singular_value, upper_density, GeneratorSpec};
use gabor_fock::fock::PointSet;
use gabor_fock::series::{
    finite_section_reconstruct, random_atoms, random_kernel_combination, seeded_rng, verify_coeff_bound,
    verify_reconstruction_trend, Signal, VerificationReport, VerifyConfig,
};
use gabor_fock::sigma::SigmaEvaluator;

use output::{report_json, Format, Table};

/// Largest truncation radius accepted for lattice sums and sections.
const MAX_RADIUS: f64 = 40.0;
/// Largest radius accepted by the density scan.
const MAX_DENSITY_RADIUS: f64 = 400.0;

#[derive(Parser, Debug)]
#[command(
    name = "gfl",
    version,
    about = "Gabor systems, Fock space and Weierstrass sigma experiments"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,

    /// Verification tolerance; agreement thresholds scale with it.
    #[arg(long, global = true, env = "GFL_TOLERANCE", default_value_t = 1e-8)]
    tolerance: f64,

    /// Truncation radius for lattice sums and finite sections.
    #[arg(long, global = true, default_value_t = 8.0)]
    radius: f64,

    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,

    #[arg(long, global = true, value_enum, default_value_t = FormatArg::Json)]
    format: FormatArg,

    /// Write records to this file instead of standard output.
    #[arg(long, global = true)]
    output: Option<String>,

    /// Worker threads (defaults to the number of CPUs).
    #[arg(long, global = true, env = "GFL_JOBS")]
    jobs: Option<usize>,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Evaluate σ at a point given as "re,im".
    Sigma {
        #[arg(long, allow_hyphen_values = true)]
        z: String,
    },
    /// Run a verification suite.
    Verify {
        #[arg(long)]
        suite: String,
    },
    /// Tabulate a quantity over a list of radii.
    Scan {
        #[arg(long, value_enum)]
        quantity: Quantity,
        /// Comma-separated radii; may be empty.
        #[arg(long, default_value = "2,3,4,5")]
        radii: String,
    },
    /// Least-squares reconstruction from lattice sections.
    ///
    /// SIGNAL is `hermite:N`, `atom:X,Y` or `atoms:K` (K seeded atoms in the
    /// phase-space disk of radius 2).
    Reconstruct {
        signal: String,
        #[arg(long, default_value = "2,3,4,5")]
        radii: String,
    },
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
enum FormatArg {
    Json,
    Csv,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
enum Quantity {
    GramMinsv,
    Density,
    GrowthRatio,
    CoeffBound,
}

impl Quantity {
    fn name(self) -> &'static str {
        match self {
            Quantity::GramMinsv => "gram-minsv",
            Quantity::Density => "density",
            Quantity::GrowthRatio => "growth-ratio",
            Quantity::CoeffBound => "coeff-bound",
        }
    }
}

enum Failure {
    Usage(String),
    Verification,
}

impl From<gabor_fock::error::Error> for Failure {
    fn from(e: gabor_fock::error::Error) -> Self {
        Failure::Usage(e.to_string())
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 2 } else { 0 });
        }
    };
    match run(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Verification) => ExitCode::from(1),
        Err(Failure::Usage(msg)) => {
            eprintln!("gfl: {msg}");
            ExitCode::from(2)
        }
    }
}

fn run(cli: &Cli) -> Result<(), Failure> {
    if !(cli.tolerance.is_finite() && cli.tolerance > 0.0) {
        return Err(Failure::Usage("--tolerance must be positive".into()));
    }
    if !(cli.radius.is_finite() && (2.0..=MAX_RADIUS).contains(&cli.radius)) {
        return Err(Failure::Usage(format!("--radius must lie in [2, {MAX_RADIUS}]")));
    }
    let jobs = match cli.jobs {
        Some(0) => return Err(Failure::Usage("--jobs must be at least 1".into())),
        Some(j) => j,
        None => std::thread::available_parallelism().map(|n| n.get()).unwrap_or(1),
    };
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(jobs)
        .build()
        .map_err(|e| Failure::Usage(e.to_string()))?;
    let format = match cli.format {
        FormatArg::Json => Format::Json,
        FormatArg::Csv => Format::Csv,
    };
    let config = config_json(cli);
    let (table, ok) = pool.install(|| match &cli.command {
        Command::Sigma { z } => cmd_sigma(z, cli, &config),
        Command::Verify { suite } => cmd_verify(suite, cli, &config),
        Command::Scan { quantity, radii } => cmd_scan(*quantity, radii, cli, &config),
        Command::Reconstruct { signal, radii } => cmd_reconstruct(signal, radii, cli, &config),
    })?;
    let text = table.render(format);
    match &cli.output {
        Some(path) => std::fs::write(path, text).map_err(|e| Failure::Usage(format!("{path}: {e}")))?,
        None => {
            let mut out = std::io::stdout().lock();
            let _ = out.write_all(text.as_bytes());
            let _ = out.flush();
        }
    }
    if ok {
        Ok(())
    } else {
        Err(Failure::Verification)
    }
}

fn config_json(cli: &Cli) -> Json {
    let command = match &cli.command {
        Command::Sigma { .. } => "sigma",
        Command::Verify { .. } => "verify",
        Command::Scan { .. } => "scan",
        Command::Reconstruct { .. } => "reconstruct",
    };
    json!({
        "command": command,
        "tolerance": cli.tolerance,
        "radius": cli.radius,
        "seed": cli.seed,
        "format": match cli.format { FormatArg::Json => "json", FormatArg::Csv => "csv" },
        "output": cli.output,
    })
}

fn suite_config(cli: &Cli) -> SuiteConfig {
    SuiteConfig {
        verify: VerifyConfig {
            tolerance: cli.tolerance,
        },
        radius: cli.radius,
        seed: cli.seed,
    }
}

fn parse_point(s: &str) -> Result<C64, Failure> {
    let bad = || Failure::Usage(format!("expected \"re,im\", got {s:?}"));
    let (a, b) = s.split_once(',').ok_or_else(bad)?;
    let re: f64 = a.trim().parse().map_err(|_| bad())?;
    let im: f64 = b.trim().parse().map_err(|_| bad())?;
    if !(re.is_finite() && im.is_finite()) {
        return Err(bad());
    }
    Ok(C64::new(re, im))
}

fn parse_radii(s: &str, max: f64) -> Result<Vec<f64>, Failure> {
    if s.trim().is_empty() {
        return Ok(Vec::new());
    }
    s.split(',')
        .map(|t| {
            let r: f64 = t
                .trim()
                .parse()
                .map_err(|_| Failure::Usage(format!("bad radius {t:?}")))?;
            if r.is_finite() && r > 0.0 && r <= max {
                Ok(r)
            } else {
                Err(Failure::Usage(format!("radius {t} outside (0, {max}]")))
            }
        })
        .collect()
}

fn cmd_sigma(z: &str, _cli: &Cli, config: &Json) -> Result<(Table, bool), Failure> {
    let z = parse_point(z)?;
    if z.norm() > 1e3 {
        return Err(Failure::Usage("|z| must not exceed 1000".into()));
    }
    let s = SigmaEvaluator::new();
    let ln = s.ln_sigma(z);
    let value = s.sigma(z);
    let growth = s.growth_ratio(z);
    let mut rec = Map::new();
    rec.insert("op".into(), json!("sigma"));
    rec.insert("params".into(), json!({ "z": output::complex(z) }));
    rec.insert("value".into(), output::complex(value));
    rec.insert("error_bound".into(), output::number(1e-12 * value.norm()));
    rec.insert("log_modulus".into(), output::number(ln.re));
    rec.insert("log_modulus_error_bound".into(), json!(1e-12));
    rec.insert("growth_ratio".into(), output::number(growth));
    rec.insert("growth_ratio_error_bound".into(), output::number(1e-12 * growth));
    rec.insert("truncation_radius".into(), Json::Null);
    rec.insert("pass".into(), json!(true));
    rec.insert("config".into(), config.clone());
    let mut t = Table::new(&[
        "z_re",
        "z_im",
        "value_re",
        "value_im",
        "log_modulus",
        "growth_ratio",
        "error_bound",
    ]);
    t.push(
        Json::Object(rec),
        vec![z.re, z.im, value.re, value.im, ln.re, growth, 1e-12 * value.norm()],
    );
    Ok((t, true))
}

fn cmd_verify(suite: &str, cli: &Cli, config: &Json) -> Result<(Table, bool), Failure> {
    let tasks = suite_tasks(suite)?;
    let cfg = suite_config(cli);
    let results: Vec<gabor_fock::error::Result<Vec<VerificationReport>>> =
        tasks.par_iter().map(|t: &Task| t.run(&cfg)).collect();
    let mut table = Table::reports();
    let mut ok = true;
    for r in results {
        for rep in r? {
            ok &= rep.pass;
            table.push_report(report_json(&rep, config), &rep);
        }
    }
    Ok((table, ok))
}

fn cmd_scan(q: Quantity, radii: &str, cli: &Cli, config: &Json) -> Result<(Table, bool), Failure> {
    let max = if q == Quantity::Density {
        MAX_DENSITY_RADIUS
    } else {
        MAX_RADIUS
    };
    let radii = parse_radii(radii, max)?;
    let header: &[&str] = match q {
        Quantity::GramMinsv => &[
            "radius",
            "points",
            "min_singular_value",
            "largest_singular_value",
            "error_bound",
        ],
        Quantity::Density => &["radius", "points", "density", "error_bound"],
        Quantity::GrowthRatio => &["radius", "c1", "c2", "ratio", "error_bound"],
        Quantity::CoeffBound => &["radius", "sup", "sup_half_radius", "shell_ratio", "error_bound"],
    };
    let seed = cli.seed;
    let rows: Vec<Result<(Vec<f64>, Json), Failure>> = radii
        .par_iter()
        .map(|&r| -> Result<(Vec<f64>, Json), Failure> {
            Ok(match q {
                Quantity::GramMinsv => {
                    let pts = PointSet::lattice(r, &[(0, 0)]);
                    let s = min_singular_value(&pts)?;
                    let err = 1e-12 * s.largest;
                    (
                        vec![r, pts.len() as f64, s.value, s.largest, err],
                        json!({ "value": output::number(s.value), "points": pts.len(), "largest": output::number(s.largest), "rank_deficient": s.rank_deficient, "error_bound": err }),
                    )
                }
                Quantity::Density => {
                    let pts = PointSet::lattice(r, &[]);
                    let d = upper_density(&pts, &[r])?[0];
                    (
                        vec![r, pts.len() as f64, d, 0.0],
                        json!({ "value": output::number(d), "points": pts.len(), "error_bound": 0.0 }),
                    )
                }
                Quantity::GrowthRatio => {
                    let (lo, hi) = growth_range_on_disk(r, 200);
                    let err = 1e-12 * hi;
                    (
                        vec![r, lo, hi, hi / lo, err],
                        json!({ "value": output::number(hi / lo), "c1": output::number(lo), "c2": output::number(hi), "error_bound": err }),
                    )
                }
                Quantity::CoeffBound => {
                    let s = random_kernel_combination(&mut seeded_rng(seed), 5, 2.0);
                    let rep = verify_coeff_bound(&s, r)?;
                    let m = |k: &str| rep.measurements.get(k).copied().unwrap_or(f64::NAN);
                    let v = match rep.value {
                        gabor_fock::series::Value::Real(v) => v,
                        gabor_fock::series::Value::Complex(c) => c.norm(),
                    };
                    (
                        vec![r, v, m("sup_half_radius"), m("shell_ratio"), rep.error_bound],
                        json!({ "value": output::number(v), "sup_half_radius": output::number(m("sup_half_radius")), "shell_ratio": output::number(m("shell_ratio")), "error_bound": output::number(rep.error_bound) }),
                    )
                }
            })
        })
        .collect();
    let mut table = Table::new(header);
    for (row, r) in rows.into_iter().zip(&radii) {
        let (cells, body) = row?;
        let mut rec = body.as_object().cloned().unwrap_or_default();
        rec.insert("op".into(), json!(format!("scan_{}", q.name().replace('-', "_"))));
        rec.insert("params".into(), json!({ "quantity": q.name(), "radius": r }));
        rec.insert("truncation_radius".into(), json!(r));
        rec.insert("pass".into(), json!(true));
        rec.insert("config".into(), config.clone());
        table.push(Json::Object(rec), cells);
    }
    Ok((table, true))
}

fn parse_signal(s: &str, seed: u64) -> Result<(Signal, bool), Failure> {
    let bad = || Failure::Usage(format!("unknown signal {s:?}; use hermite:N, atom:X,Y or atoms:K"));
    let (kind, arg) = s.split_once(':').ok_or_else(bad)?;
    match kind {
        "hermite" => {
            let n: usize = arg.trim().parse().map_err(|_| bad())?;
            if n > 40 {
                return Err(Failure::Usage("Hermite degree must not exceed 40".into()));
            }
            Ok((Signal::Hermite(HermiteExpansion::basis(n)), true))
        }
        "atom" => {
            let p = parse_point(arg)?;
            if p.norm() > MAX_RADIUS {
                return Err(Failure::Usage("atom location too far from the origin".into()));
            }
            Ok((
                Signal::Atoms(vec![(C64::new(1.0, 0.0), GaborAtom::new(p.re, p.im))]),
                false,
            ))
        }
        "atoms" => {
            let k: usize = arg.trim().parse().map_err(|_| bad())?;
            if k == 0 || k > 100 {
                return Err(Failure::Usage("atom count must lie in [1, 100]".into()));
            }
            Ok((Signal::Atoms(random_atoms(&mut seeded_rng(seed), k, 2.0)), false))
        }
        _ => Err(bad()),
    }
}

fn cmd_reconstruct(signal: &str, radii: &str, cli: &Cli, config: &Json) -> Result<(Table, bool), Failure> {
    let (f, strict) = parse_signal(signal, cli.seed)?;
    let radii = parse_radii(radii, MAX_RADIUS)?;
    let spec = GeneratorSpec::LatticeMinusOrigin;
    let sections: Vec<Result<_, Failure>> = radii
        .par_iter()
        .map(|&r| finite_section_reconstruct(&f, &spec, r).map_err(Failure::from))
        .collect();
    let mut table = Table::new(&[
        "radius",
        "points",
        "residual",
        "error_bound",
        "condition",
        "regularization",
    ]);
    for (rec, &r) in sections.into_iter().zip(&radii) {
        let rec = rec?;
        let body = json!({
            "op": "reconstruct",
            "params": { "signal": signal, "radius": r },
            "value": output::number(rec.residual),
            "error_bound": output::number(rec.residual_error),
            "truncation_radius": r,
            "points": rec.points.len(),
            "condition": output::number(rec.condition),
            "regularization": output::number(rec.regularization),
            "ill_conditioned": rec.ill_conditioned,
            "pass": true,
            "config": config,
        });
        table.push(
            body,
            vec![
                r,
                rec.points.len() as f64,
                rec.residual,
                rec.residual_error,
                rec.condition,
                rec.regularization,
            ],
        );
    }
    let trend = verify_reconstruction_trend(&f, &spec, &radii, strict)?
        .param("signal", gabor_fock::series::Param::Text(signal.into()));
    let ok = trend.pass;
    table.push_summary(report_json(&trend, config));
    Ok((table, ok))
}
