use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use latcount::input::{parse_list, parse_matrix, parse_polytope};
use latcount::{CliError, CliResult, Command, PolytopeSpec, RunConfig};
use latcount_core::enumerate::DEFAULT_BUDGET;
use latcount_core::polytope::{CrossPolytope, HPolytope, OrthantSimplex};

/// Lattice-point counts of dilated polytopes with quadratic irrational data.
#[derive(Parser)]
#[command(name = "latcount", version)]
struct Cli {
    #[command(subcommand)]
    command: Sub,
}

#[derive(Subcommand)]
enum Sub {
    /// Exact and decimal coefficients of p(t) and q(t).
    Coeffs(Common),
    /// Closed, interior and boundary counts of one dilation.
    Count(Common),
    /// Exact counts against the polynomial approximation over a range of t (CSV).
    CompareSweep(Common),
    /// Interior counts against the reciprocal polynomial over a range of t.
    Reciprocity(Common),
    /// Quasipolynomials of a rational simplex under vector dilation.
    BeckRecon(Common),
    /// The orthant simplices of a cross-polytope.
    Decompose(Common),
}

#[derive(Args)]
struct Common {
    /// Polytope spec as a JSON file.
    #[arg(long, conflicts_with_all = ["cross", "simplex", "hrep"])]
    polytope: Option<PathBuf>,
    /// Cross-polytope Σ|x_i|/a_i ≤ 1 given by --axes.
    #[arg(long, conflicts_with_all = ["simplex", "hrep"])]
    cross: bool,
    /// Simplex: by --axes (and --signs), or by --matrix and --rhs.
    #[arg(long, conflicts_with = "hrep")]
    simplex: bool,
    /// General polytope Ax ≤ b given by --matrix and --rhs.
    #[arg(long)]
    hrep: bool,
    /// Comma-separated axis lengths, e.g. "sqrt(2),1+sqrt(2)".
    #[arg(long, allow_hyphen_values = true)]
    axes: Option<String>,
    /// Comma-separated orthant signs (+1/-1) for --simplex --axes.
    #[arg(long, allow_hyphen_values = true)]
    signs: Option<String>,
    /// Rows separated by ';', entries by ',', e.g. "1,1;-1,0;0,-1".
    #[arg(long, allow_hyphen_values = true)]
    matrix: Option<String>,
    /// Comma-separated right-hand side.
    #[arg(long, allow_hyphen_values = true)]
    rhs: Option<String>,
    /// Radicand D; "sqrtD" in --axes, --matrix and --rhs stands for sqrt(D).
    #[arg(long = "D", value_name = "D")]
    d: Option<u64>,
    /// Scalar dilation factor.
    #[arg(long, allow_hyphen_values = true)]
    t: Option<i64>,
    #[arg(long)]
    t_min: Option<i64>,
    #[arg(long)]
    t_max: Option<i64>,
    /// Comma-separated vector dilation, one entry per constraint.
    #[arg(long, allow_hyphen_values = true)]
    t_vector: Option<String>,
    /// Output file; stdout when absent.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Significant digits of decimal renderings.
    #[arg(long, default_value_t = 15)]
    digits: usize,
    /// Worker threads.
    #[arg(long)]
    jobs: Option<usize>,
    /// Cap on scanned lattice points.
    #[arg(long, env = "LATCOUNT_BUDGET", default_value_t = DEFAULT_BUDGET)]
    budget: u64,
    /// decompose: keep every piece closed rather than half-open.
    #[arg(long)]
    closed: bool,
    /// beck-recon: check reciprocity on [-radius, radius] in every variable.
    #[arg(long, default_value_t = 5)]
    radius: i64,
}

fn ints(text: &str, what: &str) -> CliResult<Vec<i64>> {
    text.split(',')
        .map(|s| {
            s.trim()
                .parse()
                .map_err(|_| CliError::Config(format!("{what}: {s:?} is not an integer")))
        })
        .collect()
}

fn polytope(c: &Common) -> CliResult<PolytopeSpec> {
    if let Some(path) = &c.polytope {
        if c.axes.is_some() || c.matrix.is_some() || c.rhs.is_some() || c.signs.is_some() {
            return Err(CliError::Config(
                "--polytope cannot be combined with inline polytope flags".into(),
            ));
        }
        let text = std::fs::read_to_string(path).map_err(|e| CliError::io(path, e))?;
        return parse_polytope(&text);
    }
    let axes = c.axes.as_deref().map(|a| parse_list(a, c.d)).transpose()?;
    let matrix = c
        .matrix
        .as_deref()
        .map(|m| parse_matrix(m, c.d))
        .transpose()?;
    let rhs = c.rhs.as_deref().map(|b| parse_list(b, c.d)).transpose()?;
    let bad = |e: latcount_core::Error| CliError::Config(e.to_string());
    match (c.cross, c.simplex, c.hrep, axes, matrix, rhs) {
        (true, _, _, Some(axes), None, None) => Ok(PolytopeSpec::Cross(CrossPolytope::new(axes).map_err(bad)?)),
        (_, true, _, Some(axes), None, None) => {
            let d = axes.len();
            let signs = match &c.signs {
                Some(s) => ints(s, "--signs")?.into_iter().map(|v| v as i8).collect(),
                None => vec![1; d],
            };
            Ok(PolytopeSpec::Orthant(OrthantSimplex::new(axes, signs, vec![false; d]).map_err(bad)?))
        }
        (_, true, _, None, Some(a), Some(b)) => {
            let p = HPolytope::new(a, b).map_err(bad)?;
            if p.num_constraints() != p.dim() + 1 {
                return Err(CliError::Config(format!(
                    "a simplex in dimension {} needs {} rows, got {}",
                    p.dim(),
                    p.dim() + 1,
                    p.num_constraints()
                )));
            }
            Ok(PolytopeSpec::Simplex(p))
        }
        (_, _, true, None, Some(a), Some(b)) => Ok(PolytopeSpec::HRep(HPolytope::new(a, b).map_err(bad)?)),
        (false, false, false, ..) => {
            Err(CliError::Config("choose a polytope: --polytope FILE, --cross, --simplex or --hrep".into()))
        }
        _ => Err(CliError::Config(
            "--cross takes --axes; --simplex takes --axes or --matrix with --rhs; --hrep takes --matrix with --rhs"
                .into(),
        )),
    }
}

fn config(command: Command, c: Common) -> CliResult<RunConfig> {
    let t_range = match (c.t_min, c.t_max) {
        (Some(lo), Some(hi)) => Some((lo, hi)),
        (None, None) => None,
        _ => return Err(CliError::Config("--t-min and --t-max go together".into())),
    };
    Ok(RunConfig {
        command,
        polytope: polytope(&c)?,
        t: c.t,
        t_range,
        t_vector: c
            .t_vector
            .as_deref()
            .map(|s| ints(s, "--t-vector"))
            .transpose()?,
        out: c.out,
        digits: c.digits,
        jobs: c.jobs,
        budget: c.budget,
        closed_pieces: c.closed,
        radius: c.radius,
    })
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let (command, common) = match cli.command {
        Sub::Coeffs(c) => (Command::Coeffs, c),
        Sub::Count(c) => (Command::Count, c),
        Sub::CompareSweep(c) => (Command::CompareSweep, c),
        Sub::Reciprocity(c) => (Command::Reciprocity, c),
        Sub::BeckRecon(c) => (Command::BeckRecon, c),
        Sub::Decompose(c) => (Command::Decompose, c),
    };
    let result =
        config(command, common).and_then(|cfg| latcount::run(&cfg, &mut std::io::stdout().lock()));
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("latcount: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
