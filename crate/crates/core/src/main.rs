use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use suq2::dirac::Branch;
use suq2::report::{self, RunConfig, EXIT_CONFIG, EXIT_NUMERIC};
use suq2::Error;

#[derive(Parser)]
#[command(name = "suq2", version, about = "Equivariant Dirac operators on quantum SU(2) at finite truncation")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Check relations, adjoints, the ββ* oracle and equivariance.
    Verify(Opts),
    /// Growth, sign structure, spectral dimension and commutator norms.
    Analyze(Opts),
    /// Index pairings, sector tables, compactness and the fundamental unitary.
    Pair(Opts),
    /// Write an operator matrix as text.
    Export {
        /// alpha, alpha*, beta, beta*, A0, A1, A1*, identity, gamma or dirac
        what: String,
        #[command(flatten)]
        opts: Opts,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum BranchArg {
    Quantum,
    Classical,
}

#[derive(Args)]
struct Opts {
    /// Deformation parameter; defaults to 0.5, or 1 on the classical branch.
    #[arg(long)]
    q: Option<f64>,
    #[arg(long, value_enum, default_value = "quantum")]
    branch: BranchArg,
    #[arg(long = "n2max", default_value_t = 20)]
    n2max: i64,
    #[arg(long, default_value_t = 2)]
    band: i64,
    /// Exponent of γ_r, or "auto".
    #[arg(long, default_value = "auto")]
    r: String,
    /// generic, staircase or signset:k1,k2,...
    #[arg(long, default_value = "generic")]
    family: String,
    /// Rows k of the sign projection, comma separated (may be empty).
    #[arg(long = "F", default_value = "0", allow_hyphen_values = true)]
    rows: String,
    #[arg(long, default_value_t = 1e-6)]
    tol: f64,
    #[arg(long, default_value = "24,32,40")]
    sizes: String,
    /// Output directory for reports, or file path for export.
    #[arg(long)]
    out: Option<PathBuf>,
}

fn int_list(s: &str, what: &str) -> Result<Vec<i64>, Error> {
    s.split(',')
        .map(str::trim)
        .filter(|t| !t.is_empty())
        .map(|t| t.parse::<i64>().map_err(|e| Error::Parameter(format!("bad {what} entry '{t}': {e}"))))
        .collect()
}

impl Opts {
    fn config(&self, min_n2: i64) -> Result<RunConfig, Error> {
        let branch = match self.branch {
            BranchArg::Quantum => Branch::Quantum,
            BranchArg::Classical => Branch::Classical,
        };
        let q = self.q.unwrap_or(if branch == Branch::Classical { 1.0 } else { 0.5 });
        let r = match self.r.as_str() {
            "auto" => None,
            v => Some(v.parse::<u32>().map_err(|e| Error::Parameter(format!("bad r '{v}': {e}")))?),
        };
        let config = RunConfig {
            q,
            branch,
            n2_max: self.n2max,
            band: self.band,
            r,
            family: self.family.clone(),
            rows: int_list(&self.rows, "F")?,
            tol: self.tol,
            sizes: int_list(&self.sizes, "sizes")?,
            out_dir: self.out.clone().unwrap_or_else(|| RunConfig::default().out_dir),
        };
        config.validate_with_min_size(min_n2)?;
        Ok(config)
    }
}

fn run(cli: Cli) -> Result<i32, (i32, Error)> {
    let cfg_err = |e| (EXIT_CONFIG, e);
    let num_err = |e| (EXIT_NUMERIC, e);
    let (report, config) = match &cli.command {
        Command::Export { what, opts } => {
            let mut config = opts.config(0).map_err(cfg_err)?;
            if opts.out.is_none() {
                config.out_dir = PathBuf::from(format!("{what}.txt"));
            }
            let op = report::build_named(what, &config).map_err(cfg_err)?;
            report::export_matrix(&op, &config.out_dir).map_err(num_err)?;
            println!("wrote {} ({} x {}, {} entries)", config.out_dir.display(), op.rows(), op.ncols(), op.nnz());
            return Ok(0);
        }
        Command::Verify(o) => {
            let c = o.config(4).map_err(cfg_err)?;
            (report::cmd_verify(&c), c)
        }
        Command::Analyze(o) => {
            let c = o.config(4).map_err(cfg_err)?;
            (report::cmd_analyze(&c), c)
        }
        Command::Pair(o) => {
            let c = o.config(4).map_err(cfg_err)?;
            (report::cmd_pair(&c), c)
        }
    };
    let report = report.map_err(|e| match e {
        Error::Parameter(_) | Error::UnsupportedBranch { .. } | Error::TruncationTooSmall { .. } => (EXIT_CONFIG, e),
        e => (EXIT_NUMERIC, e),
    })?;
    for path in report.write(&config.out_dir).map_err(num_err)? {
        println!("wrote {}", path.display());
    }
    for note in &report.notes {
        println!("note: {note}");
    }
    match &report.failure {
        Some(f) => println!("{}: FAILED ({f})", report.command),
        None => println!("{}: ok", report.command),
    }
    Ok(report.exit_code)
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(code) => ExitCode::from(code as u8),
        Err((code, e)) => {
            eprintln!("error: {e}");
            ExitCode::from(code as u8)
        }
    }
}
