//! Command-line front end.

use std::ffi::OsString;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::criteria::{evaluate_all, parse_criteria, CriteriaConfig, CriterionVerdict, DEFAULT_MARGIN};
use crate::error::{EntError, Result};
use crate::io::{emit, moments_to_csv, state_from_json_with, to_pretty, verdicts_to_csv, witness_to_json, write_or_print};
use crate::matkit::RankTol;
use crate::moments::{moments, MomentKind};
use crate::statebank::{make_state_with, random, validate, DensityMatrix, MakeOptions, Params};
use crate::sweep::{run_sweep, Grid, Probe, SweepSpec};
use crate::tables::{check, TABLE_IDS};
use crate::witness::{build_witness, witness_expectation, WitnessFamily};

#[derive(Debug, Parser)]
#[command(name = "entkit", version, about = "Entanglement detection on catalog and user-supplied density matrices")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Run separability criteria on one state and print a JSON verdict bundle.
    Detect {
        #[command(flatten)]
        state: StateArgs,
        #[command(flatten)]
        tuning: Tuning,
        /// Comma-separated criterion ids, or `all`.
        #[arg(long, default_value = "all")]
        criteria: String,
        /// Emit CSV rows instead of JSON.
        #[arg(long)]
        csv: bool,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Sweep family parameters, write CSV rows and report detection boundaries.
    Sweep {
        /// Catalog family id.
        #[arg(long)]
        state: String,
        /// Fixed parameters, e.g. `s=0.5`.
        #[arg(long, default_value = "")]
        params: String,
        /// `name=start:stop:steps` or `name=v1,v2,...`; repeat for a product grid.
        #[arg(long, required = true)]
        grid: Vec<String>,
        /// Criterion ids and witness probes (`det`, `wo`, `wn:N`, `choi:A:B`).
        #[arg(long, default_value = "ppt,ccnr")]
        criteria: String,
        #[command(flatten)]
        tuning: Tuning,
        /// Skip range checks and run criteria outside their stated scope.
        #[arg(long)]
        unchecked: bool,
        /// CSV destination; the boundary report then goes to stdout.
        #[arg(long)]
        out: Option<PathBuf>,
        /// Plot data destination (whitespace-separated columns).
        #[arg(long)]
        plot: Option<PathBuf>,
    },
    /// Regenerate a reference table and diff it against the embedded fixture.
    Table {
        /// Table id, or `all`.
        id: String,
        /// CSV destination for the regenerated table.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Build a witness on a target state and export it as JSON.
    Witness {
        #[command(flatten)]
        state: StateArgs,
        /// One of choi, det, wo, wn.
        #[arg(long, default_value = "wn")]
        family: String,
        #[arg(long, default_value_t = 1)]
        n: u32,
        #[arg(long, default_value_t = 1.0)]
        alpha: f64,
        #[arg(long, default_value_t = 1.0)]
        beta: f64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Dump moment vectors as `kind,k,value` CSV.
    Moments {
        #[command(flatten)]
        state: StateArgs,
        /// Comma-separated kinds (pt, realign, gram, zhang) or `all`.
        #[arg(long, default_value = "all")]
        kind: String,
        #[arg(long, default_value_t = 4)]
        k: usize,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Check Hermiticity, trace and positivity of a state.
    Validate {
        #[command(flatten)]
        state: StateArgs,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Debug, Args)]
pub struct StateArgs {
    /// Catalog family id, or `random:DxD` / `random-separable:DxD`.
    #[arg(long, conflicts_with = "file")]
    pub state: Option<String>,
    /// State JSON file.
    #[arg(long)]
    pub file: Option<PathBuf>,
    /// Family parameters, e.g. `f=0.4` or `q=q0`.
    #[arg(long, default_value = "")]
    pub params: String,
    /// Seed for random states.
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Skip range and physicality checks; criteria also run outside their stated scope.
    #[arg(long)]
    pub unchecked: bool,
}

#[derive(Debug, Args)]
pub struct Tuning {
    /// Relative singular-value cutoff for ranks.
    #[arg(long, env = "ENTKIT_DEFAULT_TOL")]
    pub tol_rank: Option<f64>,
    /// Decision margin around each threshold.
    #[arg(long, default_value_t = DEFAULT_MARGIN)]
    pub margin: f64,
}

impl Tuning {
    fn config(&self) -> Result<CriteriaConfig> {
        if !(self.margin.is_finite() && self.margin >= 0.0) {
            return Err(EntError::Input(format!("margin must be nonnegative, got {}", self.margin)));
        }
        let rank_tol = match self.tol_rank {
            Some(t) if t.is_finite() && t >= 0.0 => RankTol::Relative(t),
            Some(t) => return Err(EntError::Input(format!("rank tolerance must be nonnegative, got {t}"))),
            None => RankTol::default(),
        };
        Ok(CriteriaConfig { margin: self.margin, rank_tol, ..CriteriaConfig::default() })
    }
}

fn parse_dims(s: &str) -> Result<Vec<usize>> {
    s.split('x')
        .map(|t| t.trim().parse::<usize>().map_err(|_| EntError::Input(format!("bad dims '{s}'"))))
        .collect()
}

pub fn resolve_state(a: &StateArgs) -> Result<DensityMatrix> {
    if let Some(path) = &a.file {
        let s = std::fs::read_to_string(path).map_err(|e| EntError::Input(format!("{}: {e}", path.display())))?;
        return state_from_json_with(&s, a.unchecked);
    }
    let id = a.state.as_deref().ok_or_else(|| EntError::Input("one of --state or --file is required".into()))?;
    let mut rng = ChaCha8Rng::seed_from_u64(a.seed);
    if let Some(d) = id.strip_prefix("random:") {
        return Ok(random::state(&parse_dims(d)?, &mut rng).relabel(format!("random({d},seed={})", a.seed)));
    }
    if let Some(d) = id.strip_prefix("random-separable:") {
        let s = random::separable(&parse_dims(d)?, 4, &mut rng);
        return Ok(s.relabel(format!("random-separable({d},seed={})", a.seed)));
    }
    make_state_with(id, &Params::parse(&a.params)?, MakeOptions { unchecked: a.unchecked })
}

#[derive(Debug, Serialize)]
struct VerdictBundle<'a> {
    state: &'a str,
    dims: &'a [usize],
    verdicts: &'a [CriterionVerdict],
}

fn parse_axis(s: &str) -> Result<(String, Grid)> {
    let (name, g) = s.split_once('=').ok_or_else(|| EntError::Input(format!("grid '{s}' is not name=spec")))?;
    Ok((name.trim().to_string(), Grid::parse(g)?))
}

/// Runs a parsed command and returns the process exit code.
pub fn run(cli: Cli) -> Result<i32> {
    match cli.command {
        Command::Detect { state, tuning, criteria, csv, out } => {
            let rho = resolve_state(&state)?;
            let mut cfg = tuning.config()?;
            cfg.unchecked = state.unchecked;
            let vs = evaluate_all(&parse_criteria(&criteria)?, &rho, &cfg);
            let text = if csv {
                verdicts_to_csv(&rho.label, &vs)?
            } else {
                to_pretty(&VerdictBundle { state: &rho.label, dims: rho.dims.dims(), verdicts: &vs })?
            };
            write_or_print(out.as_deref(), &text)?;
            Ok(0)
        }
        Command::Sweep { state, params, grid, criteria, tuning, unchecked, out, plot } => {
            let spec = SweepSpec {
                family: state,
                axes: grid.iter().map(|g| parse_axis(g)).collect::<Result<Vec<_>>>()?,
                base: Params::parse(&params)?,
                probes: Probe::parse_list(&criteria)?,
                config: CriteriaConfig { unchecked, ..tuning.config()? },
                unchecked,
            };
            let res = run_sweep(&spec)?;
            let report = res.boundaries_to_csv()?;
            match &out {
                Some(p) => {
                    write_or_print(Some(p), &res.to_csv()?)?;
                    emit(&report)?;
                }
                None => {
                    emit(&res.to_csv()?)?;
                    eprint!("{report}");
                }
            }
            if let Some(p) = plot {
                write_or_print(Some(&p), &res.plot_data())?;
            }
            Ok(0)
        }
        Command::Table { id, out } => {
            let ids: Vec<&str> = if id == "all" { TABLE_IDS.to_vec() } else { vec![id.as_str()] };
            let mut failed = Vec::new();
            let mut artifacts = String::new();
            for id in ids {
                let (art, diff) = check(id)?;
                for e in &diff.entries {
                    emit(&format!(
                        "{} {} {}: expected {} computed {} (tol {:e}) {}\n",
                        id,
                        e.row,
                        e.column,
                        e.expected.map(|v| v.to_string()).unwrap_or_else(|| "none".into()),
                        e.computed.map(|v| v.to_string()).unwrap_or_else(|| "none".into()),
                        e.tolerance,
                        if e.ok { "ok" } else { "MISMATCH" }
                    ))?;
                }
                if !diff.passed() {
                    failed.push(id);
                }
                artifacts.push_str(&art.to_csv()?);
            }
            if let Some(p) = out {
                write_or_print(Some(&p), &artifacts)?;
            }
            if failed.is_empty() {
                Ok(0)
            } else {
                Err(EntError::Fixture(format!("drift in {}", failed.join(", "))))
            }
        }
        Command::Witness { state, family, n, alpha, beta, out } => {
            let rho = resolve_state(&state)?;
            let w = build_witness(WitnessFamily::parse(&family)?, &rho, alpha, beta, n)?;
            eprintln!("Tr[W rho] = {}", witness_expectation(&w, &rho)?);
            write_or_print(out.as_deref(), &witness_to_json(&w)?)?;
            Ok(0)
        }
        Command::Moments { state, kind, k, out } => {
            let rho = resolve_state(&state)?;
            let kinds = if kind.trim() == "all" {
                MomentKind::ALL.to_vec()
            } else {
                kind.split(',').map(MomentKind::parse).collect::<Result<Vec<_>>>()?
            };
            let mut vs = Vec::new();
            for kd in kinds {
                match moments(&rho, kd, k) {
                    Ok(v) => vs.push(v),
                    Err(EntError::Dim(m)) => eprintln!("skipping {}: {m}", kd.name()),
                    Err(e) => return Err(e),
                }
            }
            write_or_print(out.as_deref(), &moments_to_csv(&vs)?)?;
            Ok(0)
        }
        Command::Validate { state, out } => {
            let rho = resolve_state(&StateArgs { unchecked: true, ..state })?;
            let report = validate(&rho);
            write_or_print(out.as_deref(), &to_pretty(&report)?)?;
            if report.passed() {
                Ok(0)
            } else {
                Err(EntError::Domain(format!("{} fails: {}", rho.label, report.failures().join(", "))))
            }
        }
    }
}

/// Parses arguments, runs, and maps errors to exit codes.
pub fn main_with<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return code;
        }
    };
    match run(cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            e.exit_code()
        }
    }
}
