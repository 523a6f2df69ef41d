use bardyn::crofton::Space;
use bardyn::dynamics::{self, DynamicalSystem};
use bardyn::error::Error;
use bardyn::growth::{self, GrowthSeries};
use bardyn::io::{self, ParsedComplex, TomographSpec, ToricModelSpec};
use bardyn::persistence::{barcode_function, beta_max, reduce_filtered_complex};
use bardyn::toric::{ConvexProfile1D, EllipsoidSpec, LatticeBasis};
use bardyn::verify;
use clap::{Parser, Subcommand};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

#[derive(Parser)]
#[command(
    name = "bardyn",
    about = "Barcodes of filtered complexes, entropy estimators, Crofton integrals, toric growth"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
    /// Master seed; all randomized sweeps derive named substreams from it.
    #[arg(long, global = true, default_value_t = 17)]
    seed: u64,
    /// Output directory (default: $BARDYN_OUT or ./out).
    #[arg(long, global = true)]
    out: Option<PathBuf>,
}

#[derive(Subcommand)]
enum Command {
    /// Barcode of a filtered complex (F2 or Novikov-F2 JSON).
    Barcode {
        /// Complex JSON file
        #[arg(long)]
        input: PathBuf,
        /// Epsilons for the b_eps table
        #[arg(long, value_delimiter = ',', default_value = "0.25,0.5,1.0")]
        eps_grid: Vec<f64>,
    },
    /// Topological entropy of a builtin system, or barcode entropy of a
    /// directory of barcode CSVs named by index.
    Entropy {
        /// System spec JSON ({"kind": "doubling", "m": 2}, ...)
        #[arg(long, conflicts_with = "barcodes")]
        system: Option<PathBuf>,
        /// Directory of barcode CSV files named <index>.csv
        #[arg(long)]
        barcodes: Option<PathBuf>,
        #[arg(long, value_delimiter = ',', default_value = "0.0625,0.015625,0.00390625")]
        eps_grid: Vec<f64>,
        #[arg(long, default_value_t = 12)]
        k_max: usize,
        /// Candidate budget for packing estimates
        #[arg(long, default_value_t = 1 << 17)]
        samples: usize,
    },
    /// Monte Carlo Crofton integral of a tomograph against a target curve.
    Crofton {
        /// Tomograph spec JSON
        #[arg(long)]
        tomograph: PathBuf,
        /// Target polyline CSV (x,y per line)
        #[arg(long)]
        target: PathBuf,
        /// Treat the target as a closed curve
        #[arg(long, default_value_t = false)]
        closed: bool,
        #[arg(long, default_value_t = 1_000_000)]
        samples: usize,
    },
    /// Growth series and polynomial bound certificates for toric models.
    Toric {
        /// Model spec JSON ({"kind": "ellipsoid", "a": [...]}, ...)
        #[arg(long)]
        model: PathBuf,
        #[arg(long, default_value_t = 100)]
        k_max: u32,
        #[arg(long, default_value_t = 1000.0)]
        s_max: f64,
    },
    /// Run acceptance criteria ("all" or "fast").
    Verify { suite: String },
}

fn out_dir(cli_out: &Option<PathBuf>) -> PathBuf {
    cli_out
        .clone()
        .or_else(|| std::env::var_os("BARDYN_OUT").map(PathBuf::from))
        .unwrap_or_else(|| PathBuf::from("out"))
}

fn write_out(dir: &Path, name: &str, contents: &str) -> Result<(), Error> {
    std::fs::create_dir_all(dir)?;
    std::fs::write(dir.join(name), contents)?;
    Ok(())
}

fn run() -> Result<u8, Error> {
    let cli = Cli::parse();
    let out = out_dir(&cli.out);
    let seed = cli.seed;
    match cli.command {
        Command::Barcode { input, eps_grid } => {
            let text = std::fs::read_to_string(&input)?;
            match io::parse_complex(&text)? {
                ParsedComplex::F2(c) => {
                    let red = reduce_filtered_complex(&c)?;
                    write_out(&out, "barcode.csv", &io::barcode_to_csv(&red.barcode))?;
                    write_out(
                        &out,
                        "barcode.json",
                        &serde_json::to_string_pretty(&io::barcode_to_json(&red.barcode))?,
                    )?;
                    let mut beps = String::from("eps,count\n");
                    for &eps in &eps_grid {
                        beps.push_str(&format!(
                            "{eps},{}\n",
                            barcode_function(&red.barcode, eps, f64::INFINITY)?
                        ));
                    }
                    write_out(&out, "b_eps.csv", &beps)?;
                    println!(
                        "{} bars, beta_max = {}, outputs in {}",
                        red.barcode.total_multiplicity(),
                        beta_max(&red.barcode),
                        out.display()
                    );
                }
                ParsedComplex::Novikov(c) => {
                    let bc = c.unpinned_barcode()?;
                    write_out(&out, "unpinned.csv", &io::unpinned_to_csv(&bc))?;
                    let mut beps = String::from("eps,count\n");
                    for &eps in &eps_grid {
                        beps.push_str(&format!("{eps},{}\n", bc.b_eps(eps)?));
                    }
                    write_out(&out, "b_eps.csv", &beps)?;
                    println!(
                        "{} finite bars, {} infinite, outputs in {}",
                        bc.lengths.len(),
                        bc.infinite,
                        out.display()
                    );
                }
            }
            Ok(0)
        }
        Command::Entropy { system, barcodes, eps_grid, k_max, samples } => {
            if let Some(dir) = barcodes {
                let mut indexed: Vec<(f64, bardyn::persistence::Barcode)> = Vec::new();
                for entry in std::fs::read_dir(&dir)? {
                    let path = entry?.path();
                    if path.extension().and_then(|e| e.to_str()) != Some("csv") {
                        continue;
                    }
                    let stem = path.file_stem().and_then(|s| s.to_str()).unwrap_or_default();
                    let Ok(index) = stem.parse::<f64>() else {
                        return Err(Error::Input(format!(
                            "barcode file `{}` is not named by a numeric index",
                            path.display()
                        )));
                    };
                    indexed.push((index, io::barcode_from_csv(&std::fs::read_to_string(&path)?)?));
                }
                indexed.sort_by(|a, b| a.0.partial_cmp(&b.0).unwrap());
                if indexed.len() < 4 {
                    return Err(Error::Input("need at least 4 indexed barcode files".into()));
                }
                let index: Vec<f64> = indexed.iter().map(|p| p.0).collect();
                let report = growth::barcode_entropy_from_counts(&index, &eps_grid, |eps| {
                    indexed
                        .iter()
                        .map(|(_, b)| barcode_function(b, eps, f64::INFINITY).unwrap() as f64)
                        .collect()
                })?;
                write_out(&out, "barcode_entropy.json", &serde_json::to_string_pretty(&report)?)?;
                println!(
                    "barcode entropy estimate {} (outputs in {})",
                    report.value,
                    out.display()
                );
                return Ok(0);
            }
            let spec =
                system.ok_or_else(|| Error::Input("entropy needs --system or --barcodes".into()))?;
            let sys: DynamicalSystem = serde_json::from_str(&std::fs::read_to_string(&spec)?)?;
            let est = dynamics::htop_estimate(&sys, &eps_grid, (1, k_max), samples, seed)?;
            write_out(&out, "entropy.json", &serde_json::to_string_pretty(&est)?)?;
            let mut rates = String::from("eps,rate\n");
            for (eps, fit) in &est.per_eps_rates {
                rates.push_str(&format!("{eps},{}\n", fit.rate));
            }
            write_out(&out, "eps_rate.csv", &rates)?;
            for (i, (_, series)) in est.counts.iter().enumerate() {
                write_out(&out, &format!("counts_eps{i}.csv"), &io::growth_to_csv("k", series))?;
            }
            println!("h_top estimate {} (outputs in {})", est.value, out.display());
            Ok(0)
        }
        Command::Crofton { tomograph, target, closed, samples } => {
            let spec: TomographSpec = serde_json::from_str(&std::fs::read_to_string(&tomograph)?)?;
            let t = spec.build()?;
            let space = match &spec {
                TomographSpec::Lines { .. } => Space::Plane,
                TomographSpec::Translation { .. } => Space::Torus,
                TomographSpec::CylinderGraph { .. } => Space::Cylinder,
            };
            let target = io::polyline_from_csv(space, &std::fs::read_to_string(&target)?, closed)?;
            let report = bardyn::crofton::crofton_mc(&t, &target, samples, seed)?;
            write_out(&out, "crofton.json", &serde_json::to_string_pretty(&report)?)?;
            println!(
                "integral {} +- {}, constant {}, volume {}, inequality {}",
                report.integral,
                report.stderr,
                report.constant,
                report.volume,
                if report.inequality_pass { "pass" } else { "FAIL" }
            );
            Ok(if report.inequality_pass && report.formula_pass { 0 } else { 2 })
        }
        Command::Toric { model, k_max, s_max } => {
            let spec: ToricModelSpec = serde_json::from_str(&std::fs::read_to_string(&model)?)?;
            let (series, name, degree) = match spec {
                ToricModelSpec::Ellipsoid { a } => {
                    let e = EllipsoidSpec::new(a)?;
                    let ss: Vec<f64> = (1..=60).map(|i| s_max * i as f64 / 60.0).collect();
                    let counts: Vec<f64> =
                        ss.iter().map(|&s| e.generator_count(s) as f64).collect();
                    (GrowthSeries::new(ss, counts)?, "s", 1)
                }
                ToricModelSpec::PowerProfile { coef, exponent } => {
                    let p = ConvexProfile1D::power(coef, exponent, (0.0, 1.0))?;
                    let ks: Vec<f64> = (1..=k_max).map(|k| k as f64).collect();
                    let counts: Vec<f64> = (1..=k_max)
                        .map(|k| p.fixed_point_bound(k).map(|v| v as f64))
                        .collect::<Result<_, _>>()?;
                    (GrowthSeries::new(ks, counts)?, "k", 1)
                }
                ToricModelSpec::FlatTorus { v1, v2 } => {
                    let basis = LatticeBasis::new(v1, v2)?;
                    let ss: Vec<f64> = (1..=60).map(|i| s_max * i as f64 / 60.0).collect();
                    let counts: Vec<f64> = ss
                        .iter()
                        .map(|&s| {
                            let b = bardyn::toric::flat_torus_loop_barcode(&basis, s)?;
                            Ok(barcode_function(&b, 1.0, s)? as f64)
                        })
                        .collect::<Result<_, Error>>()?;
                    (GrowthSeries::new(ss, counts)?, "s", 1)
                }
                ToricModelSpec::Series { path, degree } => {
                    let series = io::growth_from_csv(&std::fs::read_to_string(&path)?)?;
                    (series, "k", degree)
                }
            };
            write_out(&out, "growth.csv", &io::growth_to_csv(name, &series))?;
            let cert = growth::certify_poly_bound(&series, degree)?;
            let fit = growth::poly_degree_fit(&series)?;
            write_out(
                &out,
                "certificate.json",
                &serde_json::to_string_pretty(&serde_json::json!({
                    "certificate": cert,
                    "degree_fit": fit,
                }))?,
            )?;
            println!(
                "degree fit {:.4}; certificate degree {} {}",
                fit.rate,
                cert.degree,
                if cert.pass { "pass" } else { "FAIL" }
            );
            Ok(if cert.pass { 0 } else { 2 })
        }
        Command::Verify { suite } => {
            let ids = verify::criterion_ids(&suite)
                .ok_or_else(|| Error::Input(format!("unknown suite `{suite}`")))?;
            let mut outcomes = Vec::new();
            for id in ids {
                let start = std::time::Instant::now();
                let outcome = verify::run_criterion(id, seed);
                let secs = start.elapsed().as_secs_f64();
                println!(
                    "{} criterion {:>2} {:<32} ({:.2}s) {}",
                    if outcome.pass { "PASS" } else { "FAIL" },
                    outcome.id,
                    outcome.name,
                    secs,
                    outcome.details
                );
                for (name, bytes) in &outcome.artifacts {
                    write_out(&out, name, bytes)?;
                }
                outcomes.push(outcome);
            }
            write_out(&out, "summary.json", &verify::summary_json(&outcomes))?;
            let all = outcomes.iter().all(|o| o.pass);
            println!(
                "{}: {}/{} criteria passed (outputs in {})",
                if all { "PASS" } else { "FAIL" },
                outcomes.iter().filter(|o| o.pass).count(),
                outcomes.len(),
                out.display()
            );
            Ok(if all { 0 } else { 2 })
        }
    }
}

fn main() -> ExitCode {
    match run() {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(1)
        }
    }
}
