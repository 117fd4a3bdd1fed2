//! The `hyprd` command line: deterministic CSV and JSON reports.

use std::collections::BTreeMap;
use std::fs;
use std::io::{self, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use serde::Serialize;

use crate::boundary::{cell_ahlfors_constant, horo_partition};
use crate::cocycle::{integrability_threshold, properness_curve, Integrability};
use crate::config::{canonical_json, num, parse_s_grid, Config, Csv, FSpec};
use crate::error::Error;
use crate::group::Word;
use crate::rd::rd_rows;
use crate::reps::{operator_norm_lower, spherical_table};
use crate::stepfun::{sampling_report, vitali_cover};
use crate::verify::run_suite;

#[derive(Debug, Parser)]
#[command(name = "hyprd", version, about = "Rapid-decay and boundary-representation reports for free groups")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Args)]
pub struct Common {
    /// Rank of the free group.
    #[arg(long, env = "HYPRD_K", default_value_t = 2)]
    pub k: usize,
    /// Visual parameter.
    #[arg(long, env = "HYPRD_EPSILON", default_value_t = 1.0)]
    pub epsilon: f64,
    /// Shell width.
    #[arg(long = "R", env = "HYPRD_SHELL", default_value_t = 1.0)]
    pub big_r: f64,
    /// Shadow radius.
    #[arg(long = "r", env = "HYPRD_RADIUS", default_value_t = 0.5)]
    pub r: f64,
    #[arg(long, env = "HYPRD_SEED", default_value_t = 42)]
    pub seed: u64,
    #[arg(long, env = "HYPRD_TOL", default_value_t = 1e-9)]
    pub tol: f64,
    #[arg(long = "n-max", env = "HYPRD_N_MAX", default_value_t = 5)]
    pub n_max: usize,
    /// Discretization depth; defaults to `n-max + 2`.
    #[arg(long = "N", env = "HYPRD_DEPTH")]
    pub big_n: Option<usize>,
    /// `a:b:step` or a comma-separated list.
    #[arg(long = "s-grid", env = "HYPRD_S_GRID", default_value = "0:1:0.25")]
    pub s_grid: String,
    /// Directory for report files; reports go to stdout when absent.
    #[arg(long, env = "HYPRD_OUT")]
    pub out: Option<PathBuf>,
}

impl Common {
    pub fn config(&self) -> Result<Config, Error> {
        let cfg = Config {
            k: self.k,
            epsilon: self.epsilon,
            big_r: self.big_r,
            r: self.r,
            seed: self.seed,
            tol: self.tol,
            n_max: self.n_max,
            big_n: self.big_n.unwrap_or(self.n_max + 2),
            s_grid: parse_s_grid(&self.s_grid)?,
        };
        cfg.validate()?;
        Ok(cfg)
    }
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// φ_s(n) against its decay envelope.
    Spherical(Common),
    /// Sampled spectral inequality on spheres.
    Rd {
        #[command(flatten)]
        common: Common,
        #[arg(long, default_value_t = 100)]
        trials: usize,
    },
    /// Horospherical cell measures with their two-sided bounds.
    Partition {
        #[command(flatten)]
        common: Common,
        /// A single word; all words of length 2..=n-max otherwise.
        #[arg(long)]
        gamma: Option<String>,
    },
    /// Sampling report over γ ∈ S_n at depth N.
    Counting {
        #[command(flatten)]
        common: Common,
        /// Sphere index; defaults to n-max.
        #[arg(long)]
        n: Option<usize>,
    },
    /// Cocycle norms along the properness curves.
    Cocycle(Common),
    /// Lower estimates of ‖π_s(f)‖ for N = 1..=N.
    Norm {
        #[command(flatten)]
        common: Common,
        #[arg(long, default_value_t = 0.5)]
        s: f64,
        /// delta:<word> | sphere:<n> | uniform-sphere:<n> | phi:<s>:<n>
        #[arg(long = "f", default_value = "sphere:1")]
        f_spec: String,
    },
    /// Run the invariant suite.
    Verify(Common),
}

#[derive(Debug)]
enum Failure {
    Config(Error),
    Io(io::Error),
    Suite,
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Config(e)
    }
}

impl From<io::Error> for Failure {
    fn from(e: io::Error) -> Self {
        Failure::Io(e)
    }
}

/// Named outputs of one command.
struct Reports(Vec<(String, String)>);

impl Reports {
    fn emit(&self, out: Option<&Path>) -> io::Result<()> {
        match out {
            Some(dir) => {
                fs::create_dir_all(dir)?;
                for (name, body) in &self.0 {
                    fs::write(dir.join(name), body)?;
                }
            }
            None => {
                let mut stdout = io::stdout().lock();
                if let Some((_, body)) = self.0.first() {
                    stdout.write_all(body.as_bytes())?;
                }
            }
        }
        Ok(())
    }
}

fn spherical(cfg: &Config) -> Result<Reports, Failure> {
    let model = cfg.model()?;
    let mut csv = Csv::new(&["n", "s", "phi", "envelope", "ratio"]);
    let rows = spherical_table(&model, &cfg.s_grid, cfg.n_max, cfg.big_r);
    for r in &rows {
        csv.push(vec![r.n.to_string(), num(r.s), num(r.phi), num(r.envelope), num(r.ratio)]);
    }
    let lo = rows.iter().map(|r| r.ratio).fold(f64::INFINITY, f64::min);
    let hi = rows.iter().map(|r| r.ratio).fold(0.0, f64::max);
    eprintln!("ratio range [{lo}, {hi}] over {} rows", rows.len());
    Ok(Reports(vec![("spherical.csv".into(), csv.render(cfg))]))
}

#[derive(Serialize)]
struct RdSummary {
    #[serde(rename = "C")]
    c: f64,
    max_ratio_by_n: Vec<f64>,
    trials: usize,
    config: Config,
}

fn rd(cfg: &Config, trials: usize) -> Result<Reports, Failure> {
    let model = cfg.model()?;
    let mut csv = Csv::new(&["n", "s", "trials", "max_ratio", "seed"]);
    let mut by_n = Vec::new();
    for n in 1..=cfg.n_max {
        let rows = rd_rows(&model, &cfg.s_grid, n, n + 1, trials, cfg.seed)?;
        by_n.push(rows.iter().map(|r| r.max_ratio).fold(0.0, f64::max));
        for r in rows {
            csv.push(vec![
                r.n.to_string(),
                num(r.s),
                r.trials.to_string(),
                num(r.max_ratio),
                r.seed.to_string(),
            ]);
        }
    }
    let c = by_n.iter().cloned().fold(0.0, f64::max);
    eprintln!("fitted C = {c}");
    let summary = RdSummary {
        c,
        max_ratio_by_n: by_n,
        trials,
        config: cfg.clone(),
    };
    Ok(Reports(vec![
        ("rd.csv".into(), csv.render(cfg)),
        ("rd_summary.json".into(), canonical_json(&summary) + "\n"),
    ]))
}

fn partition(cfg: &Config, gamma: Option<&str>) -> Result<Reports, Failure> {
    let mu = cfg.measure()?;
    let model = mu.model;
    let words: Vec<Word> = match gamma {
        Some(g) => vec![model.parse(g)?],
        None => {
            let lo = (2.0 * cfg.big_r).ceil() as usize;
            (lo..=cfg.n_max)
                .flat_map(|l| (0..model.sphere_size(l)).map(move |i| model.word_at(l, i)))
                .collect()
        }
    };
    let parts = words
        .iter()
        .map(|g| horo_partition(&model, g, cfg.big_r))
        .collect::<Result<Vec<_>, _>>()?;
    let c = parts.iter().map(|p| cell_ahlfors_constant(&mu, p)).fold(1.0, f64::max);
    let mut csv = Csv::new(&["gamma", "k", "measure", "lower", "upper"]);
    for p in &parts {
        for (i, cell) in p.cells.iter().enumerate() {
            let k = i + 1;
            let scale = (-mu.alpha() * k as f64 * cfg.big_r).exp();
            csv.push(vec![
                p.gamma.to_string(),
                k.to_string(),
                num(mu.measure(cell)),
                num(scale / c),
                num(scale * c),
            ]);
        }
    }
    eprintln!("cell measure constant C = {c}");
    Ok(Reports(vec![("partition.csv".into(), csv.render(cfg))]))
}

fn counting(cfg: &Config, n: Option<usize>) -> Result<Reports, Failure> {
    let mu = cfg.measure()?;
    let n = n.unwrap_or(cfg.n_max);
    let cover = vitali_cover(&mu, cfg.big_n, cfg.big_r, cfg.r)?;
    let rep = sampling_report(&mu, &cover, n)?;
    let mut csv = Csv::new(&["gamma", "k", "diamU", "boundU", "diamV", "boundV", "m_count"]);
    for r in &rep.rows {
        csv.push(vec![
            r.gamma.clone(),
            r.k.to_string(),
            num(r.diam_u),
            num(r.bound_u),
            num(r.diam_v),
            num(r.bound_v),
            r.m_count.to_string(),
        ]);
    }
    let mut summary = BTreeMap::new();
    summary.insert("m", rep.m as f64);
    summary.insert("n_mult", rep.n_mult as f64);
    summary.insert("n_mult_at_half", rep.n_mult_mid as f64);
    summary.insert("counting_constant", rep.counting_constant);
    summary.insert("diameter_ratio", rep.diameter_ratio);
    summary.insert("cells", cover.len() as f64);
    eprintln!("m = {}, n_mult = {}, C = {}", rep.m, rep.n_mult, rep.counting_constant);
    Ok(Reports(vec![
        ("counting.csv".into(), csv.render(cfg)),
        ("counting_summary.json".into(), canonical_json(&summary) + "\n"),
    ]))
}

#[derive(Serialize)]
struct CocycleFlags {
    s: f64,
    integrability: Integrability,
    above_threshold: bool,
}

fn cocycle(cfg: &Config) -> Result<Reports, Failure> {
    let model = cfg.model()?;
    let mut csv = Csv::new(&["n", "s", "b_norm", "slope_estimate"]);
    let mut flags = Vec::new();
    for &s in &cfg.s_grid {
        let (rows, above) = properness_curve(&model, s, cfg.n_max, cfg.epsilon)?;
        for r in rows {
            let slope = r.slope_estimate.map(num).unwrap_or_default();
            csv.push(vec![r.n.to_string(), num(r.s), num(r.b_norm), slope]);
        }
        flags.push(CocycleFlags {
            s,
            integrability: integrability_threshold(&model, s, cfg.epsilon, cfg.n_max.min(14))?,
            above_threshold: above,
        });
    }
    Ok(Reports(vec![
        ("cocycle.csv".into(), csv.render(cfg)),
        ("cocycle_flags.json".into(), canonical_json(&flags) + "\n"),
    ]))
}

#[derive(Serialize)]
struct NormReport {
    s: f64,
    f_spec: String,
    #[serde(rename = "N_sequence")]
    n_sequence: Vec<usize>,
    norm_lower_sequence: Vec<f64>,
    residuals: Vec<f64>,
    config: Config,
}

fn norm(cfg: &Config, s: f64, f_spec: &str) -> Result<Reports, Failure> {
    let model = cfg.model()?;
    let spec: FSpec = f_spec.parse()?;
    let f = spec.build(&model)?;
    let mut report = NormReport {
        s,
        f_spec: spec.to_string(),
        n_sequence: Vec::new(),
        norm_lower_sequence: Vec::new(),
        residuals: Vec::new(),
        config: cfg.clone(),
    };
    for n in 1..=cfg.big_n {
        let est = operator_norm_lower(&model, s, &f, n, cfg.tol)?;
        report.n_sequence.push(n);
        report.norm_lower_sequence.push(est.value);
        report.residuals.push(est.residual);
    }
    Ok(Reports(vec![("norm.json".into(), canonical_json(&report) + "\n")]))
}

fn verify(cfg: &Config, out: Option<&Path>) -> Result<(), Failure> {
    let suite = run_suite(cfg)?;
    for c in &suite.checks {
        let tag = if c.pass { "pass" } else { "FAIL" };
        let gate = if c.gating { "" } else { " (non-gating)" };
        eprintln!("{tag} {}{gate}", c.name);
    }
    Reports(vec![("verify.json".into(), canonical_json(&suite) + "\n")]).emit(out)?;
    if suite.pass {
        Ok(())
    } else {
        Err(Failure::Suite)
    }
}

fn dispatch(cli: Cli) -> Result<(), Failure> {
    let (common, reports) = match &cli.command {
        Command::Verify(common) => return verify(&common.config()?, common.out.as_deref()),
        Command::Spherical(common) => (common, spherical(&common.config()?)?),
        Command::Rd { common, trials } => {
            if *trials == 0 {
                return Err(Error::InvalidParameter("trials must be at least 1".into()).into());
            }
            (common, rd(&common.config()?, *trials)?)
        }
        Command::Partition { common, gamma } => (common, partition(&common.config()?, gamma.as_deref())?),
        Command::Counting { common, n } => (common, counting(&common.config()?, *n)?),
        Command::Cocycle(common) => (common, cocycle(&common.config()?)?),
        Command::Norm { common, s, f_spec } => (common, norm(&common.config()?, *s, f_spec)?),
    };
    reports.emit(common.out.as_deref())?;
    Ok(())
}

/// Parse arguments, run, and map the outcome to an exit code: 0 success, 1 suite failure, 2 invalid configuration.
pub fn main() -> ExitCode {
    let cli = Cli::parse();
    match dispatch(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Suite) => ExitCode::from(1),
        Err(Failure::Config(e)) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
        Err(Failure::Io(e)) => {
            eprintln!("error: {e}");
            ExitCode::from(1)
        }
    }
}
