//! `passive-xi` command-line front end.

use clap::{Parser, Subcommand, ValueEnum};
use passive_xi::baselines::{compute_xi_bisection, compute_xi_mp, oracle_xi, OracleOptions};
use passive_xi::generate::{oracle_suite, random_passive_system, RandomSpec};
use passive_xi::io::{parse_system, system_to_json, Report};
use passive_xi::xi::{compute_xi, Algorithm, IntervalRule, XiOptions};
use passive_xi::{Domain, Error, System64, Tolerances64};
use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Instant;

const EXIT_IO: u8 = 1;
const EXIT_SOLVER: u8 = 2;
const EXIT_RANDOM: u8 = 3;
const EXIT_USAGE: u8 = 64;

#[derive(Parser)]
#[command(name = "passive-xi", version, about = "Extremal passivity parameter of state-space models")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum AlgorithmArg {
    Hec,
    Mp,
    Bisection,
    Oracle,
}

impl From<AlgorithmArg> for Algorithm {
    fn from(a: AlgorithmArg) -> Self {
        match a {
            AlgorithmArg::Hec => Algorithm::Hec,
            AlgorithmArg::Mp => Algorithm::Mp,
            AlgorithmArg::Bisection => Algorithm::Bisection,
            AlgorithmArg::Oracle => Algorithm::Oracle,
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum RuleArg {
    MostNegative,
    Widest,
    Leftmost,
}

impl From<RuleArg> for IntervalRule {
    fn from(r: RuleArg) -> Self {
        match r {
            RuleArg::MostNegative => IntervalRule::MostNegative,
            RuleArg::Widest => IntervalRule::Widest,
            RuleArg::Leftmost => IntervalRule::Leftmost,
        }
    }
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum ReportArg {
    Json,
    Text,
}

#[derive(Clone, Copy, ValueEnum)]
enum DomainArg {
    Continuous,
    Discrete,
}

#[derive(Clone, Copy, ValueEnum)]
enum SuiteArg {
    Oracle,
}

#[derive(Subcommand)]
enum Command {
    /// Compute Ξ for one system file.
    Compute {
        #[arg(long)]
        input: PathBuf,
        #[arg(long, value_enum, default_value = "hec")]
        algorithm: AlgorithmArg,
        #[arg(long, default_value_t = 1e-14)]
        tol: f64,
        #[arg(long, default_value_t = 0.0, allow_negative_numbers = true)]
        omega0: f64,
        #[arg(long, value_enum, default_value = "json")]
        report: ReportArg,
        #[arg(long, value_enum, default_value = "most-negative")]
        interval_rule: RuleArg,
    },
    /// Print a random strictly passive system file.
    Random {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        m: usize,
        #[arg(long, value_enum)]
        domain: DomainArg,
        #[arg(long, default_value_t = 1)]
        seed: u64,
        #[arg(long, default_value_t = 0.1)]
        margin: f64,
        /// Real instead of complex matrices.
        #[arg(long)]
        real: bool,
    },
    /// Run several algorithms on a list of systems or on the oracle suite.
    Bench {
        #[arg(long, num_args = 0..)]
        input: Vec<PathBuf>,
        #[arg(long, value_enum)]
        suite: Option<SuiteArg>,
        #[arg(long, value_enum, value_delimiter = ',', default_value = "hec,mp,bisection")]
        algorithms: Vec<AlgorithmArg>,
        /// Compare against the oracle (always on for the oracle suite).
        #[arg(long)]
        oracle: bool,
        #[arg(long, default_value_t = 1e-14)]
        tol: f64,
        #[arg(long, value_enum, default_value = "text")]
        report: ReportArg,
    },
}

fn run_algorithm(sys: &System64, alg: Algorithm, opts: &XiOptions<f64>) -> Report {
    let started = Instant::now();
    let tau = opts.tol.tau;
    let out = match alg {
        Algorithm::Hec => compute_xi(sys, opts),
        Algorithm::Mp => compute_xi_mp(sys, &opts.tol),
        Algorithm::Bisection => compute_xi_bisection(sys, &opts.tol),
        Algorithm::Oracle => {
            return match oracle_xi(sys, &OracleOptions::default()) {
                Ok(xi) => Report::value_only("oracle", xi, tau, started.elapsed().as_secs_f64()),
                Err(e) => Report::failure("oracle", &e, tau, started.elapsed().as_secs_f64()),
            };
        }
    };
    match out {
        Ok(r) => Report::from_result(&r),
        Err(e) => Report::failure(alg.as_str(), &e, tau, started.elapsed().as_secs_f64()),
    }
}

fn load(path: &PathBuf) -> Result<System64, String> {
    let text = std::fs::read_to_string(path).map_err(|e| format!("{}: {e}", path.display()))?;
    parse_system(&text).map_err(|e| format!("{}: {e}", path.display()))
}

fn tolerances(tol: f64) -> Result<Tolerances64, Error> {
    Tolerances64::with_tau(tol)
}

fn cmd_compute(
    input: PathBuf,
    algorithm: AlgorithmArg,
    tol: f64,
    omega0: f64,
    report: ReportArg,
    rule: RuleArg,
) -> ExitCode {
    let tol = match tolerances(tol) {
        Ok(t) => t,
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::from(EXIT_USAGE);
        }
    };
    let sys = match load(&input) {
        Ok(s) => s,
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::from(EXIT_IO);
        }
    };
    let opts = XiOptions {
        tol,
        omega0,
        interval_rule: rule.into(),
        ..XiOptions::default()
    };
    let rep = run_algorithm(&sys, algorithm.into(), &opts);
    match report {
        ReportArg::Json => println!("{}", rep.to_json()),
        ReportArg::Text => {
            println!("{}", Report::TEXT_HEADER);
            println!("{}", rep.text_row());
        }
    }
    if rep.error.is_some() {
        ExitCode::from(EXIT_SOLVER)
    } else {
        ExitCode::SUCCESS
    }
}

fn cmd_random(n: usize, m: usize, domain: DomainArg, seed: u64, margin: f64, real: bool) -> ExitCode {
    let domain = match domain {
        DomainArg::Continuous => Domain::Continuous,
        DomainArg::Discrete => Domain::Discrete,
    };
    let spec = RandomSpec {
        n,
        m,
        domain,
        seed,
        margin,
        real,
    };
    match random_passive_system::<f64>(&spec) {
        Ok(sys) => {
            println!("{}", system_to_json(&sys));
            ExitCode::SUCCESS
        }
        Err(e @ Error::InvalidParameter(_)) => {
            eprintln!("error: {e}");
            ExitCode::from(EXIT_USAGE)
        }
        Err(e) => {
            eprintln!("error: generation failed: {e}");
            ExitCode::from(EXIT_RANDOM)
        }
    }
}

#[derive(serde::Serialize)]
struct BenchRow {
    system: String,
    report: Report,
}

fn cmd_bench(
    inputs: Vec<PathBuf>,
    suite: Option<SuiteArg>,
    algorithms: Vec<AlgorithmArg>,
    with_oracle: bool,
    tol: f64,
    report: ReportArg,
) -> ExitCode {
    let tol = match tolerances(tol) {
        Ok(t) => t,
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::from(EXIT_USAGE);
        }
    };
    let mut systems: Vec<(String, System64)> = Vec::new();
    for path in &inputs {
        match load(path) {
            Ok(s) => systems.push((path.display().to_string(), s)),
            Err(e) => {
                eprintln!("error: {e}");
                return ExitCode::from(EXIT_IO);
            }
        }
    }
    let with_oracle = with_oracle || suite.is_some();
    if suite.is_some() {
        match oracle_suite::<f64>(2) {
            Ok(entries) => systems.extend(entries.into_iter().map(|e| (e.label, e.system))),
            Err(e) => {
                eprintln!("error: suite generation failed: {e}");
                return ExitCode::from(EXIT_SOLVER);
            }
        }
    }
    let opts = XiOptions {
        tol,
        ..XiOptions::default()
    };
    let mut rows = Vec::new();
    for (name, sys) in &systems {
        let reference = if with_oracle {
            oracle_xi(sys, &OracleOptions::default()).ok()
        } else {
            None
        };
        for &alg in &algorithms {
            let mut rep = run_algorithm(sys, alg.into(), &opts);
            if let (Some(x_ref), Some(x)) = (reference, rep.xi_estimate) {
                rep.oracle_agreement = Some((x - x_ref).abs() / x_ref.abs().max(1e-6));
            }
            rows.push(BenchRow {
                system: name.clone(),
                report: rep,
            });
        }
    }
    match report {
        ReportArg::Json => println!("{}", serde_json::to_string_pretty(&rows).expect("plain data serializes")),
        ReportArg::Text => {
            println!("system | {} | oracle agreement", Report::TEXT_HEADER);
            for r in &rows {
                let agree = r.report.oracle_agreement.map_or("-".to_string(), |a| format!("{a:.1e}"));
                println!("{} | {} | {agree}", r.system, r.report.text_row());
            }
        }
    }
    ExitCode::SUCCESS
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match cli.command {
        Command::Compute {
            input,
            algorithm,
            tol,
            omega0,
            report,
            interval_rule,
        } => cmd_compute(input, algorithm, tol, omega0, report, interval_rule),
        Command::Random {
            n,
            m,
            domain,
            seed,
            margin,
            real,
        } => cmd_random(n, m, domain, seed, margin, real),
        Command::Bench {
            input,
            suite,
            algorithms,
            oracle,
            tol,
            report,
        } => cmd_bench(input, suite, algorithms, oracle, tol, report),
    }
}
