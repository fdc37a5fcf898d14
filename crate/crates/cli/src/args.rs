use std::f64::consts::FRAC_PI_2;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use tpgr::analysis::Axis;
use tpgr::catalog::random::DEFAULT_SEED;

#[derive(Debug, Parser)]
#[command(name = "tpgr", version, about = "Curvature checks for exact vacuum metrics")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

/// Flags shared by every command.
#[derive(Debug, Clone, Args)]
pub struct Common {
    /// Catalog name (theorem2, theorem1, minkowski, schwarzschild, ansatz) or a metric file.
    #[arg(long, visible_alias = "name", default_value = "theorem2")]
    pub metric: String,
    /// Schwarzschild mass.
    #[arg(long = "M", allow_hyphen_values = true)]
    pub mass: Option<f64>,
    #[arg(long, allow_hyphen_values = true)]
    pub f: Option<String>,
    #[arg(long, allow_hyphen_values = true)]
    pub c: Option<String>,
    #[arg(long, allow_hyphen_values = true)]
    pub q: Option<String>,
    #[arg(long = "H0", allow_hyphen_values = true)]
    pub h0: Option<String>,
    #[arg(long = "H1", allow_hyphen_values = true)]
    pub h1: Option<String>,
    #[arg(long, allow_hyphen_values = true)]
    pub u: Option<String>,
    #[arg(long, allow_hyphen_values = true)]
    pub v: Option<String>,
    #[arg(long, allow_hyphen_values = true)]
    pub a: Option<String>,
    #[arg(long, allow_hyphen_values = true)]
    pub b: Option<String>,
    /// Draw the theorem1 or ansatz functions at random from `--seed`.
    #[arg(long)]
    pub random: bool,
    /// Output file: CSV for nullcurves and scan, the JSON report otherwise.
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Print the JSON report instead of a table.
    #[arg(long)]
    pub json: bool,
    #[arg(long, default_value_t = DEFAULT_SEED)]
    pub seed: u64,
    #[arg(long)]
    pub atol: Option<f64>,
    #[arg(long)]
    pub rtol: Option<f64>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum BranchArg {
    Plus,
    Minus,
    Both,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Ricci-flatness, tensor symmetries and signature over a (t, r) grid.
    Verify {
        #[command(flatten)]
        common: Common,
        #[arg(long, default_value = "-1.2:4.4:40", allow_hyphen_values = true)]
        t: Axis,
        #[arg(long, default_value = "0.05:20:40log", allow_hyphen_values = true)]
        r: Axis,
        #[arg(long, default_value_t = 1.0, allow_hyphen_values = true)]
        theta: f64,
        #[arg(long, default_value_t = 0.3, allow_hyphen_values = true)]
        phi: f64,
        /// Extra random points drawn from `--seed`.
        #[arg(long, default_value_t = 0)]
        samples: usize,
    },
    /// Riemann, Ricci and Kretschmann values at one point.
    Curvature {
        #[command(flatten)]
        common: Common,
        /// Coordinates such as `t=0,r=1`; the rest default to t=0, r=1, theta=pi/2, phi=0.
        #[arg(long, allow_hyphen_values = true)]
        at: Option<String>,
    },
    /// Radial null curves as CSV.
    Nullcurves {
        #[command(flatten)]
        common: Common,
        #[arg(long, value_delimiter = ',', default_value = "0.5", allow_hyphen_values = true)]
        t0: Vec<f64>,
        #[arg(long, value_delimiter = ',', default_value = "1")]
        r0: Vec<f64>,
        #[arg(long, value_enum, default_value_t = BranchArg::Both)]
        branch: BranchArg,
        #[arg(long, default_value_t = 50.0)]
        r_end: f64,
        #[arg(long, default_value_t = 0.01)]
        step: f64,
        #[arg(long, default_value_t = FRAC_PI_2)]
        theta: f64,
    },
    /// Kretschmann, determinant and metric size over a grid, with power-law fits.
    Scan {
        #[command(flatten)]
        common: Common,
        #[arg(long, default_value = "0:0:1", allow_hyphen_values = true)]
        t: Axis,
        #[arg(long, default_value = "1e-4:1e-1:31log")]
        r: Axis,
        #[arg(long, default_value_t = 1.0)]
        theta: f64,
        #[arg(long, default_value_t = 0.0, allow_hyphen_values = true)]
        phi: f64,
    },
    /// The (r, theta) block at fixed t.
    Slice {
        #[command(flatten)]
        common: Common,
        #[arg(long, allow_hyphen_values = true)]
        t0: f64,
        #[arg(long, value_delimiter = ',', default_value = "1")]
        r: Vec<f64>,
        #[arg(long, default_value_t = 1.0)]
        theta: f64,
    },
    /// Killing-equation residual of a vector field.
    Killing {
        #[command(flatten)]
        common: Common,
        /// Four comma-separated component expressions.
        #[arg(long, allow_hyphen_values = true)]
        xi: String,
        #[arg(long, allow_hyphen_values = true)]
        at: Option<String>,
    },
    /// Print or save a catalog metric as a metric file.
    Catalog {
        #[command(flatten)]
        common: Common,
        #[arg(long)]
        emit: Option<PathBuf>,
    },
}

impl Command {
    pub fn common(&self) -> &Common {
        match self {
            Command::Verify { common, .. }
            | Command::Curvature { common, .. }
            | Command::Nullcurves { common, .. }
            | Command::Scan { common, .. }
            | Command::Slice { common, .. }
            | Command::Killing { common, .. }
            | Command::Catalog { common, .. } => common,
        }
    }

    pub fn name(&self) -> &'static str {
        match self {
            Command::Verify { .. } => "verify",
            Command::Curvature { .. } => "curvature",
            Command::Nullcurves { .. } => "nullcurves",
            Command::Scan { .. } => "scan",
            Command::Slice { .. } => "slice",
            Command::Killing { .. } => "killing",
            Command::Catalog { .. } => "catalog",
        }
    }
}
