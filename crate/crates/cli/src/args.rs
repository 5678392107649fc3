use std::path::{Path, PathBuf};

use anyhow::{bail, Context};
use clap::{Args, Parser, Subcommand};
use serde::Deserialize;

use su11::{DetectionKind, InputKind, InputSpec, InterferometerConfig};

/// Environment variable naming the default output directory.
pub const OUT_DIR_ENV: &str = "SU11_OUT_DIR";
pub const DEFAULT_OUT_DIR: &str = "su11-out";

#[derive(Debug, Parser)]
#[command(name = "su11", version, about = "Lossy SU(1,1) interferometer: sensitivities, sweeps, figure data and checks")]
pub struct Cli {
    /// TOML file with parameter defaults; command-line flags override it.
    #[arg(long, global = true, value_name = "FILE")]
    pub config: Option<PathBuf>,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Mean and variance of the detection signal at phi.
    Signal(Common),
    /// Phase sensitivity at phi, or the optimum with --optimal.
    Sensitivity {
        #[command(flatten)]
        common: Common,
        /// Search the best operating phase instead of using --phi.
        #[arg(long)]
        optimal: bool,
    },
    /// Sweep phi, the loss or N_tot and write a CSV table.
    Sweep {
        #[command(flatten)]
        common: Common,
        /// phi | loss | n_tot-via-g | n_tot-via-alpha
        #[arg(long, short = 'v')]
        variable: su11::analysis::SweepVariable,
        #[arg(long, allow_hyphen_values = true)]
        start: f64,
        #[arg(long, allow_hyphen_values = true)]
        stop: f64,
        #[arg(long)]
        step: f64,
    },
    /// Equal loss at which the optimal sensitivity reaches the shot-noise limit.
    CriticalLoss(Common),
    /// Parity, homodyne and intensity detection side by side with the closed forms.
    Compare(Common),
    /// Write the data series behind a figure (3-8, or "all").
    Fig {
        #[command(flatten)]
        common: Common,
        #[arg(value_name = "N")]
        figure: String,
    },
    /// Run the verification suites and write a report.
    Verify {
        #[command(flatten)]
        common: Common,
        /// Full grids instead of a 10% subsample.
        #[arg(long)]
        full: bool,
        #[arg(long, hide = true, value_name = "TERM")]
        inject_fault: Option<su11::analysis::Fault>,
    },
}

/// Parameters shared by every subcommand. Unset values fall back to the
/// config file, then to the built-in defaults.
#[derive(Debug, Clone, Default, Args)]
pub struct Common {
    /// OPA strength of both amplifiers.
    #[arg(long)]
    pub g: Option<f64>,
    /// Coherent amplitude |alpha_0|.
    #[arg(long)]
    pub alpha: Option<f64>,
    #[arg(long, allow_hyphen_values = true)]
    pub theta_alpha: Option<f64>,
    /// Squeezing parameter of the second input.
    #[arg(long)]
    pub r: Option<f64>,
    #[arg(long, allow_hyphen_values = true)]
    pub phi: Option<f64>,
    /// Loss on the phase-sensing arm.
    #[arg(long)]
    pub l1: Option<f64>,
    /// Loss on the free arm.
    #[arg(long)]
    pub l2: Option<f64>,
    /// Shorthand for equal --l1 and --l2.
    #[arg(long, conflicts_with_all = ["l1", "l2"])]
    pub loss: Option<f64>,
    /// vacuum | coherent | coherent-squeezed | two-coherent
    #[arg(long)]
    pub input: Option<String>,
    /// parity | homodyne | homodyne-optimal | intensity (comma separated).
    #[arg(long, value_delimiter = ',')]
    pub detection: Vec<String>,
    /// Output file (sweep; "-" for stdout) or directory (fig, verify).
    #[arg(long)]
    pub out: Option<PathBuf>,
}

/// Config file layout; every key is optional.
#[derive(Debug, Clone, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FileConfig {
    pub g: Option<f64>,
    pub alpha: Option<f64>,
    pub theta_alpha: Option<f64>,
    pub r: Option<f64>,
    pub phi: Option<f64>,
    pub l1: Option<f64>,
    pub l2: Option<f64>,
    pub loss: Option<f64>,
    pub input: Option<String>,
    pub detection: Option<Vec<String>>,
    pub out: Option<PathBuf>,
}

impl FileConfig {
    pub fn load(path: &Path) -> anyhow::Result<Self> {
        let text = std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
        toml::from_str(&text).with_context(|| format!("parsing {}", path.display()))
    }
}

/// Fully resolved parameters.
#[derive(Debug, Clone, PartialEq)]
pub struct Resolved {
    pub spec: InputSpec,
    pub config: InterferometerConfig,
    pub phi: f64,
    pub detections: Vec<DetectionKind>,
    pub out: Option<PathBuf>,
    pub out_dir: PathBuf,
}

impl Common {
    pub fn resolve(&self, file: &FileConfig) -> anyhow::Result<Resolved> {
        let g = self.g.or(file.g).unwrap_or(1.0);
        let alpha = self.alpha.or(file.alpha).unwrap_or(2.0);
        let theta_alpha = self.theta_alpha.or(file.theta_alpha).unwrap_or(0.0);
        let r = self.r.or(file.r).unwrap_or(0.0);
        let phi = self.phi.or(file.phi).unwrap_or(0.0);

        // A loss given on the command line replaces everything from the file.
        let (l1, l2) = if let Some(l) = self.loss {
            (l, l)
        } else if self.l1.is_some() || self.l2.is_some() {
            (self.l1.or(file.l1).unwrap_or(0.0), self.l2.or(file.l2).unwrap_or(0.0))
        } else if let Some(l) = file.loss {
            if file.l1.is_some() || file.l2.is_some() {
                bail!("config file sets both `loss` and `l1`/`l2`");
            }
            (l, l)
        } else {
            (file.l1.unwrap_or(0.0), file.l2.unwrap_or(0.0))
        };

        let input = self.input.clone().or_else(|| file.input.clone()).unwrap_or_else(|| {
            if r > 0.0 { "coherent-squeezed" } else { "coherent" }.to_string()
        });
        let kind: InputKind = input.parse()?;
        let spec = InputSpec::from_parameters(kind, alpha, theta_alpha, r);
        spec.validate()?;
        if kind == InputKind::Coherent && r != 0.0 {
            bail!("--r needs --input coherent-squeezed");
        }
        let config = InterferometerConfig::balanced(g).with_losses(l1, l2);
        config.validate()?;

        let names = if !self.detection.is_empty() {
            self.detection.clone()
        } else {
            file.detection.clone().unwrap_or_else(|| vec!["parity".into()])
        };
        let detections = names.iter().map(|n| n.trim().parse::<DetectionKind>()).collect::<Result<Vec<_>, _>>()?;
        if detections.is_empty() {
            bail!("at least one detection is required");
        }

        let out = self.out.clone().or_else(|| file.out.clone());
        let out_dir = out
            .clone()
            .or_else(|| std::env::var_os(OUT_DIR_ENV).map(PathBuf::from))
            .unwrap_or_else(|| PathBuf::from(DEFAULT_OUT_DIR));
        Ok(Resolved { spec, config, phi, detections, out, out_dir })
    }
}
