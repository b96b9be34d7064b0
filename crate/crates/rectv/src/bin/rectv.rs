//! Command-line front end. Exit status: 0 success, 2 invalid input, 3 failed
//! internal check.

use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use rectv::flow::{extinction_bound, flow_evolve, solution_at};
use rectv::io::{event_log, parse_pgm, read_pcr, write_pcr, write_pgm};
use rectv::oracle::{compare, graph_tv_solve, GraphTvProblem};
use rectv::rational::{fmt_rational, parse_rational};
use rectv::rof::{solve_rof, verify_certificate};
use rectv::{Error, Mode, PcrFunction, Rational, Result};

#[derive(Parser)]
#[command(name = "rectv", version, about = "Exact anisotropic TV denoising and TV flow for piecewise constant data")]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Args)]
struct Input {
    /// PCR JSON document or PGM image (P2/P5)
    #[arg(long = "in")]
    input: PathBuf,
    /// Overrides the mode stored in a PCR document (PGM input defaults to bounded)
    #[arg(long)]
    mode: Option<Mode>,
    /// Quantise PGM samples to this many uniform levels
    #[arg(long)]
    levels: Option<u32>,
}

#[derive(Subcommand)]
enum Cmd {
    /// Exact minimiser of the ROF energy
    Minimize {
        #[arg(long, value_parser = rat, allow_negative_numbers = true)]
        lambda: Rational,
        #[command(flatten)]
        input: Input,
        #[arg(long)]
        out: PathBuf,
        /// Re-check the construction and print the report
        #[arg(long)]
        certificate: bool,
    },
    /// Evolve the TV flow and write its event log
    Flow {
        /// Final time, `inf` runs to extinction
        #[arg(long, value_parser = horizon, default_value = "inf")]
        t_end: Horizon,
        #[command(flatten)]
        input: Input,
        #[arg(long)]
        events: PathBuf,
        /// Comma separated times at which to render PGM frames
        #[arg(long, value_delimiter = ',', value_parser = rat)]
        frames: Vec<Rational>,
        /// Frame files are `<prefix><k>.pgm`; defaults to the events path stem
        #[arg(long)]
        frame_prefix: Option<String>,
        /// Pixels per unit length in rendered frames
        #[arg(long, default_value_t = 16)]
        scale: u32,
    },
    /// Print the event log to stdout
    Events {
        #[arg(long, value_parser = horizon, default_value = "inf")]
        t_end: Horizon,
        #[command(flatten)]
        input: Input,
    },
    /// Compare the exact minimiser with the floating-point oracle
    OracleCheck {
        #[arg(long, value_parser = rat, allow_negative_numbers = true)]
        lambda: Rational,
        /// Oracle duality gap tolerance
        #[arg(long, default_value_t = 1e-9)]
        tol: f64,
        /// Allowed max deviation between the two solutions
        #[arg(long, default_value_t = 1e-6)]
        max_dev: f64,
        #[command(flatten)]
        input: Input,
    },
    /// Upper bound on the extinction time of the flow
    Bound {
        #[command(flatten)]
        input: Input,
        /// Also evolve the flow and report the actual extinction time
        #[arg(long)]
        check: bool,
    },
}

fn rat(s: &str) -> std::result::Result<Rational, String> {
    parse_rational(s).map_err(|e| e.to_string())
}

/// `None` means no final time.
#[derive(Clone)]
struct Horizon(Option<Rational>);

fn horizon(s: &str) -> std::result::Result<Horizon, String> {
    if s == "inf" {
        Ok(Horizon(None))
    } else {
        rat(s).map(|t| Horizon(Some(t)))
    }
}

fn load(input: &Input) -> Result<(PcrFunction, Mode)> {
    let bytes = std::fs::read(&input.input)?;
    let (u, stored) = if bytes.starts_with(b"P2") || bytes.starts_with(b"P5") {
        // rasters carry one line per pixel; keep only the lines with jumps
        (parse_pgm(&bytes, input.levels)?.coarsen(), Mode::Bounded)
    } else {
        if input.levels.is_some() {
            return Err(Error::invalid("--levels applies to PGM input only"));
        }
        read_pcr(&input.input)?
    };
    let mode = input.mode.unwrap_or(stored);
    if mode == Mode::Plane && u.has_negative() {
        return Err(Error::invalid("plane mode needs nonnegative data"));
    }
    Ok((u, mode))
}

fn frame_path(prefix: &Option<String>, events: &Path, k: usize) -> PathBuf {
    let p = match prefix {
        Some(p) => p.clone(),
        None => {
            let stem = events.with_extension("");
            format!("{}_frame", stem.display())
        }
    };
    PathBuf::from(format!("{p}{k}.pgm"))
}

fn run(cli: Cli) -> Result<()> {
    match cli.cmd {
        Cmd::Minimize { lambda, input, out, certificate } => {
            let (u0, mode) = load(&input)?;
            let sol = solve_rof(&u0, &lambda, mode)?;
            std::fs::write(&out, write_pcr(&sol.u, mode))?;
            if certificate {
                let rep = verify_certificate(&sol, &u0);
                for c in &rep.checks {
                    println!("{} {} {}", if c.passed { "pass" } else { "FAIL" }, c.name, c.detail);
                }
                if !rep.passed() {
                    return Err(Error::internal("certificate check failed"));
                }
            }
            Ok(())
        }
        Cmd::Flow { t_end, input, events, frames, frame_prefix, scale } => {
            let (u0, mode) = load(&input)?;
            let tl = flow_evolve(&u0, mode, t_end.0.as_ref())?;
            std::fs::write(&events, event_log(&tl).to_json())?;
            for (k, t) in frames.iter().enumerate() {
                let path = frame_path(&frame_prefix, &events, k);
                write_pgm(&solution_at(&tl, t)?, &path, scale)?;
                println!("frame t={} {}", fmt_rational(t), path.display());
            }
            Ok(())
        }
        Cmd::Events { t_end, input } => {
            let (u0, mode) = load(&input)?;
            let tl = flow_evolve(&u0, mode, t_end.0.as_ref())?;
            print!("{}", event_log(&tl).to_json());
            Ok(())
        }
        Cmd::OracleCheck { lambda, tol, max_dev, input } => {
            let (u0, mode) = load(&input)?;
            let sol = solve_rof(&u0, &lambda, mode)?;
            let approx = graph_tv_solve(&GraphTvProblem::new(&u0, &lambda, mode)?, tol)?;
            let c = compare(&sol, &approx, max_dev)?;
            println!(
                "max_deviation {:e} gap {:e} iterations {} {}",
                c.max_deviation,
                approx.gap,
                approx.iterations,
                if c.passed { "pass" } else { "FAIL" }
            );
            if !c.passed {
                return Err(Error::internal("exact and oracle solutions disagree"));
            }
            Ok(())
        }
        Cmd::Bound { input, check } => {
            let (u0, mode) = load(&input)?;
            let b = extinction_bound(&u0, mode)?;
            println!("bound {}", fmt_rational(&b));
            if check {
                let tl = flow_evolve(&u0, mode, None)?;
                let t = tl.extinction.expect("ran to extinction");
                println!("extinction {}", fmt_rational(&t));
                if t > b {
                    return Err(Error::internal("extinction time exceeds the bound"));
                }
            }
            Ok(())
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
