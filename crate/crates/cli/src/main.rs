use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use mmult7::catalog::ComponentId;
use mmult7::formats::{parse_jets, parse_tensor, parse_terms};
use mmult7::numeric::{als, border_rank_probe, AlsConfig, FloatTensor};
use mmult7::report::{component_bundle, verify_paper, VerifyOptions};
use mmult7::segre::{plane_contains, wedge_taylor_first_term};
use mmult7::tensor::{multilinear_rank, tensor_from_terms, Tensor3};

#[derive(Parser)]
#[command(name = "mmult7", version, about = "Exact and numerical checks around the border rank of 2×2 matrix multiplication")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run every exact check and randomized search, print a summary and write a report.
    VerifyPaper {
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Random instances per catalog component and reduction case.
        #[arg(long, default_value_t = 20)]
        seeds: usize,
        /// JSON report path.
        #[arg(long)]
        out: Option<PathBuf>,
        /// Directory for witness files (strassen terms, curve jets).
        #[arg(long)]
        witness_dir: Option<PathBuf>,
        /// Term file checked against MMult₂ in place of the built-in Strassen terms.
        #[arg(long)]
        strassen: Option<PathBuf>,
        /// Smaller randomized searches (10³ candidates, 10⁴ quadruples).
        #[arg(long)]
        quick: bool,
    },
    /// Sample a component: spec, normal form and witness curves as JSON.
    Component {
        id: String,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value = "4,4,4", value_parser = parse_dims)]
        dims: (usize, usize, usize),
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Multilinear rank of a tensor file (or a term file with --dims).
    Ranks {
        file: PathBuf,
        #[arg(long, value_parser = parse_dims)]
        dims: Option<(usize, usize, usize)>,
    },
    /// Vanishing order and limit plane of a curves file.
    Limit {
        file: PathBuf,
        /// Tensor file to test for membership in the limit plane.
        #[arg(long)]
        target: Option<PathBuf>,
    },
    /// Rank-r ALS approximation of a tensor file.
    Als {
        file: PathBuf,
        #[arg(long)]
        rank: usize,
        #[arg(long, default_value_t = 20)]
        restarts: usize,
        #[arg(long)]
        cap: Option<f64>,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 2000)]
        sweeps: usize,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// ALS under a ladder of term-norm caps.
    Probe {
        file: PathBuf,
        #[arg(long)]
        rank: usize,
        #[arg(long, default_value_t = 10)]
        restarts: usize,
        /// Repeatable; defaults to 10,100,1000,10000.
        #[arg(long = "cap")]
        caps: Vec<f64>,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 2000)]
        sweeps: usize,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

fn parse_dims(s: &str) -> Result<(usize, usize, usize), String> {
    let v: Vec<usize> = s
        .split(',')
        .map(|x| x.trim().parse::<usize>().map_err(|e| format!("bad dimension {x:?}: {e}")))
        .collect::<Result<_, _>>()?;
    match v[..] {
        [a, b, c] if a > 0 && b > 0 && c > 0 => Ok((a, b, c)),
        _ => Err("expected three positive dimensions dA,dB,dC".into()),
    }
}

/// Failure classes mapped onto exit codes 1 and 2.
enum Failure {
    Exact(String),
    Usage(String),
}

impl<E: std::fmt::Display> From<E> for Failure {
    fn from(e: E) -> Self {
        Failure::Usage(e.to_string())
    }
}

fn read(path: &Path) -> Result<String, Failure> {
    fs::read_to_string(path).map_err(|e| Failure::Usage(format!("{}: {e}", path.display())))
}

fn emit(out: &Option<PathBuf>, body: &str) -> Result<(), Failure> {
    match out {
        Some(p) => fs::write(p, body).map_err(|e| Failure::Usage(format!("{}: {e}", p.display()))),
        None => {
            println!("{body}");
            Ok(())
        }
    }
}

fn load_tensor(path: &Path, dims: Option<(usize, usize, usize)>) -> Result<Tensor3, Failure> {
    let text = read(path)?;
    let err = |e: mmult7::Error| Failure::Usage(format!("{}: {e}", path.display()));
    if text.contains("\"terms\"") {
        let terms = parse_terms(&text).map_err(err)?;
        let dims = match (dims, terms.first()) {
            (Some(d), _) => d,
            (None, Some(t)) => t.dims(),
            (None, None) => return Err(Failure::Usage("empty term list needs --dims".into())),
        };
        tensor_from_terms(&terms, dims).map_err(err)
    } else {
        parse_tensor(&text).map_err(err)
    }
}

fn run(cli: Cli) -> Result<(), Failure> {
    match cli.command {
        Command::VerifyPaper { seed, seeds, out, witness_dir, strassen, quick } => {
            let strassen_override = match strassen {
                Some(p) => Some(parse_terms(&read(&p)?).map_err(|e| Failure::Usage(format!("{}: {e}", p.display())))?),
                None => None,
            };
            let mut opts = VerifyOptions { seed, seeds, witness_dir, strassen_override, ..VerifyOptions::default() };
            if quick {
                opts.six_term_trials = 1_000;
                opts.degenerate_quadruples = 10_000;
            }
            let report = verify_paper(&opts)?;
            print!("{}", report.summary());
            if let Some(p) = out {
                fs::write(&p, report.to_json()).map_err(|e| Failure::Usage(format!("{}: {e}", p.display())))?;
            }
            if report.all_exact_pass() {
                Ok(())
            } else {
                Err(Failure::Exact("exact checks failed".into()))
            }
        }
        Command::Component { id, seed, dims, out } => {
            let id: ComponentId = id.parse()?;
            let bundle = component_bundle(id, seed, dims)?;
            emit(&out, &serde_json::to_string_pretty(&bundle)?)
        }
        Command::Ranks { file, dims } => {
            let t = load_tensor(&file, dims)?;
            let (a, b, c) = multilinear_rank(&t);
            println!("({a},{b},{c})");
            Ok(())
        }
        Command::Limit { file, target } => {
            let curves = parse_jets(&read(&file)?).map_err(|e| Failure::Usage(format!("{}: {e}", file.display())))?;
            let lim = wedge_taylor_first_term(&curves)?;
            println!("vanishing order {}", lim.vanishing_order);
            println!("plane dimension {}", lim.plane_basis.len());
            println!("degenerate {}", lim.degenerate);
            if let Some(t) = target {
                let x = load_tensor(&t, None)?;
                let inside = plane_contains(&lim, &x);
                println!("contains target {inside}");
                if !inside {
                    return Err(Failure::Exact("target not in the limit plane".into()));
                }
            }
            Ok(())
        }
        Command::Als { file, rank, restarts, cap, seed, sweeps, out } => {
            let t = FloatTensor::from_exact(&load_tensor(&file, None)?);
            let cfg = AlsConfig { rank, restarts, cap, seed, max_sweeps: sweeps, ..AlsConfig::new(rank) };
            let (_, report) = als(&t, &cfg)?;
            println!("best residual {:.6e} (seed {})", report.best_residual, report.best_seed);
            if out.is_some() {
                emit(&out, &serde_json::to_string_pretty(&report)?)?;
            }
            Ok(())
        }
        Command::Probe { file, rank, restarts, caps, seed, sweeps, out } => {
            let t = FloatTensor::from_exact(&load_tensor(&file, None)?);
            let caps = if caps.is_empty() { vec![10.0, 100.0, 1000.0, 10000.0] } else { caps };
            let cfg = AlsConfig { rank, restarts, seed, max_sweeps: sweeps, ..AlsConfig::new(rank) };
            let reports = border_rank_probe(&t, &cfg, &caps)?;
            for r in &reports {
                println!(
                    "cap {:>10.3e}  residual {:.6e}  max term norm {:.3e}",
                    r.cap.unwrap_or(f64::INFINITY),
                    r.best_residual,
                    r.max_term_norm
                );
            }
            if out.is_some() {
                emit(&out, &serde_json::to_string_pretty(&reports)?)?;
            }
            Ok(())
        }
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Exact(m)) => {
            eprintln!("{m}");
            ExitCode::from(1)
        }
        Err(Failure::Usage(m)) => {
            eprintln!("error: {m}");
            ExitCode::from(2)
        }
    }
}
