use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{Context, Result};
use clap::{Parser, Subcommand, ValueEnum};
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};

use mrplate::bench::{run_benchmark, BenchCase, BenchOptions, BenchRow, Status};
use mrplate::element::{element_load_uniform, element_stiffness, MRElement, PlateMaterial};
use mrplate::geometry::{canonicalize_triangle, grid_nodes, node_position};
use mrplate::shapefn::basis_eval;
use mrplate::Point;
use mrplate_cli::{equivalence_line, solve_config, verify_config, ProblemConfig, SolveOptions};

/// Exit code when a run completes but a check fails.
const CHECK_FAILED: u8 = 2;

#[derive(Parser)]
#[command(name = "mrplate", version, about = "Multiresolution triangular plate-bending solver")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Csv,
    Json,
}

#[derive(Subcommand)]
enum Command {
    /// Solve a JSON problem config.
    Solve {
        config: PathBuf,
        /// Write the JSON report here (the table still goes to stdout).
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long)]
        quadrature_degree: Option<usize>,
        /// Treat every simple support as hard.
        #[arg(long)]
        hard_ss: bool,
        /// Also compare against the conventional element model.
        #[arg(long)]
        check_equivalence: bool,
    },
    /// Run a reference benchmark: square, skew60 or circular.
    Bench {
        case: BenchCase,
        /// Comma-separated scales; defaults to the tabulated levels.
        #[arg(long, value_delimiter = ',')]
        m: Vec<usize>,
        #[arg(long, value_enum, default_value = "csv")]
        format: Format,
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long)]
        hard_ss: bool,
        #[arg(long)]
        quadrature_degree: Option<usize>,
        #[arg(long)]
        check_equivalence: bool,
    },
    /// Compare a config against its conventional-element twin.
    Verify {
        config: PathBuf,
        /// Add this value to one stiffness entry of the twin (negative control).
        #[arg(long, hide = true)]
        perturb_k: Option<f64>,
    },
    /// Randomized element property checks.
    Dev {
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 20)]
        cases: usize,
    },
}

fn write_or_print(out: Option<&PathBuf>, text: &str) -> Result<()> {
    match out {
        Some(path) => std::fs::write(path, text).with_context(|| format!("cannot write {}", path.display())),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn bench_text(rows: &[BenchRow], format: Format) -> Result<String> {
    Ok(match format {
        Format::Csv => {
            let mut s = String::from(BenchRow::CSV_HEADER);
            s.push('\n');
            for r in rows {
                s.push_str(&r.to_csv());
                s.push('\n');
            }
            s
        }
        Format::Json => serde_json::to_string_pretty(rows)? + "\n",
    })
}

fn dev_properties(seed: u64, cases: usize) -> Result<bool> {
    let mut rng = StdRng::seed_from_u64(seed);
    let material = PlateMaterial::unit_rigidity(0.3)?;
    let mut failures = 0;
    for case in 0..cases {
        let mut v = || Point::new(rng.random_range(-2.0..2.0), rng.random_range(-2.0..2.0));
        let (p0, p1, p2) = (v(), v(), v());
        let Ok(frame) = canonicalize_triangle(p0, p1, p2) else {
            continue;
        };
        let m = 1 + case % 4;
        let mut errs = Vec::new();
        let nodes = grid_nodes(m);
        let mut worst: f64 = 0.0;
        for &i in &nodes {
            for &j in &nodes {
                let b = basis_eval(&frame, m, i, node_position(&frame, m, j)?)?;
                let d = if i == j { 1.0 } else { 0.0 };
                worst = worst.max((b.w_fn.value - d).abs()).max(b.thx_fn.value.abs()).max(b.thy_fn.value.abs());
            }
        }
        if worst > 1e-10 {
            errs.push(format!("kronecker {worst:.2e}"));
        }
        let elem = MRElement::new(frame, m, material)?;
        let k = element_stiffness(&elem)?;
        if k.asymmetry() > 1e-10 * k.max_abs() {
            errs.push("stiffness asymmetric".into());
        }
        let f = element_load_uniform(&elem, 1.0)?;
        let total: f64 = f.iter().step_by(3).sum();
        if (total - frame.area()).abs() > 1e-10 * frame.area() {
            errs.push(format!("load total {total} vs area {}", frame.area()));
        }
        let status = if errs.is_empty() { "PASS".to_string() } else { format!("FAIL {}", errs.join("; ")) };
        println!("case {case} m={m} area={:.4}: {status}", frame.area());
        failures += usize::from(!errs.is_empty());
    }
    println!("dev properties seed={seed}: {failures} failing cases");
    Ok(failures == 0)
}

fn run(cli: Cli) -> Result<bool> {
    match cli.command {
        Command::Solve { config, out, quadrature_degree, hard_ss, check_equivalence } => {
            let cfg = ProblemConfig::load(&config)?;
            let report = solve_config(&cfg, SolveOptions { hard_ss, quadrature_degree, check_equivalence })?;
            print!("{}", report.to_table());
            if let Some(path) = out {
                let json = serde_json::to_string_pretty(&report)? + "\n";
                std::fs::write(&path, json).with_context(|| format!("cannot write {}", path.display()))?;
            }
            Ok(report.equivalence.as_ref().is_none_or(|e| e.pass))
        }
        Command::Bench { case, m, format, out, hard_ss, quadrature_degree, check_equivalence } => {
            let m_list = if m.is_empty() { case.reference_levels().to_vec() } else { m };
            let rows = run_benchmark(case, &m_list, BenchOptions { hard_ss, quadrature_degree, check_equivalence })?;
            write_or_print(out.as_ref(), &bench_text(&rows, format)?)?;
            Ok(rows.iter().all(|r| r.status != Status::Fail))
        }
        Command::Verify { config, perturb_k } => {
            let cfg = ProblemConfig::load(&config)?;
            let report = verify_config(&cfg, perturb_k)?;
            println!("{}", equivalence_line(&report));
            Ok(report.pass)
        }
        Command::Dev { seed, cases } => dev_properties(seed, cases),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { ExitCode::FAILURE } else { ExitCode::SUCCESS };
        }
    };
    match run(cli) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(CHECK_FAILED),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::FAILURE
        }
    }
}
