//! Subcommand drivers. Each returns rendered output and a pass flag.

use std::fs;
use std::path::{Path, PathBuf};

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};

use crate::cache::{Cache, Lookup};
use crate::parser::{parse_expr, parse_wedge};
use crate::record::MatrixRecord;
use nakajima::bv_ring::{Mode, SurfaceModel};
use nakajima::lie_wedge::WedgeAmbient;
use nakajima::operator::Instantiator;
use nakajima::verify::{self, Report};

#[derive(Parser, Debug)]
#[command(
    name = "nakajima",
    version,
    about = "Exact Nakajima operator calculus on Hilb^n(K3)"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Args, Debug, Clone)]
pub struct Common {
    /// Surface model as JSON (`rank`, `gram`, `points`, `mode`, `labels`);
    /// defaults to Gram matrix (2) with no point symbols.
    #[arg(long)]
    pub model: Option<PathBuf>,
    /// Number of points.
    #[arg(long, default_value_t = 2)]
    pub n: u32,
    /// Overrides the model's mode.
    #[arg(long, value_enum)]
    pub mode: Option<ModeArg>,
    /// Write output here instead of stdout.
    #[arg(long)]
    pub out: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t = Format::Table)]
    pub format: Format,
}

#[derive(ValueEnum, Debug, Clone, Copy, PartialEq, Eq)]
pub enum ModeArg {
    Chow,
    Cohomology,
}

#[derive(ValueEnum, Debug, Clone, Copy, PartialEq, Eq)]
pub enum Format {
    Table,
    Json,
    Csv,
}

#[derive(ValueEnum, Debug, Clone, Copy, PartialEq, Eq)]
pub enum Suite {
    Relations,
    Grading,
    Heisenberg,
    Lemma,
    TBracket,
    Rho,
    Widening,
    Confluence,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Matrix of an operator expression on A*(Hilb^n).
    Matrix {
        expr: String,
        #[command(flatten)]
        common: Common,
        #[arg(long)]
        cache_dir: Option<PathBuf>,
    },
    /// Run a verification suite.
    Verify {
        #[arg(value_enum)]
        suite: Suite,
        #[command(flatten)]
        common: Common,
        /// Seed for randomized suites.
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Number of random instances (suite default if omitted).
        #[arg(long)]
        samples: Option<usize>,
    },
    /// Chow vs cohomology ranks of the divisor-generated subring.
    Rank {
        #[command(flatten)]
        common: Common,
    },
    /// Spectrum of h on zero cycles.
    Spectrum {
        #[command(flatten)]
        common: Common,
    },
    /// Dimension of the Lie algebra generated by e_a and ft_a.
    Closure {
        #[command(flatten)]
        common: Common,
        #[arg(long, default_value_t = 8)]
        depth: u32,
    },
    /// The operator rho(x) of a wedge element such as "e^v1 + 2*delta^f".
    Wedge {
        element: String,
        #[command(flatten)]
        common: Common,
    },
}

pub struct Outcome {
    pub text: String,
    pub ok: bool,
}

pub fn load_model(path: Option<&Path>, mode: Option<ModeArg>) -> Result<SurfaceModel> {
    let model = match path {
        Some(p) => {
            let text = fs::read_to_string(p).with_context(|| format!("reading {}", p.display()))?;
            SurfaceModel::from_json(&text)
                .with_context(|| format!("invalid model {}", p.display()))?
        }
        None => SurfaceModel::diagonal(&[2], Mode::Chow),
    };
    Ok(match mode {
        Some(ModeArg::Chow) => model.with_mode(Mode::Chow),
        Some(ModeArg::Cohomology) => model.with_mode(Mode::Cohomology),
        None => model,
    })
}

/// Whether a matrix came from the cache.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CacheStatus {
    Disabled,
    Hit,
    Miss,
    Recomputed,
}

pub fn matrix_record(
    model: &SurfaceModel,
    text: &str,
    n: u32,
    cache: Option<&Cache>,
) -> Result<(MatrixRecord, CacheStatus)> {
    let expr = parse_expr(model, text)?;
    let canonical = expr.print(model);
    let key = Cache::key(model, &canonical, n);
    let mut status = CacheStatus::Disabled;
    if let Some(c) = cache {
        match c.load(&key) {
            Lookup::Hit(r) => return Ok((r, CacheStatus::Hit)),
            Lookup::Miss => status = CacheStatus::Miss,
            Lookup::Corrupt => status = CacheStatus::Recomputed,
        }
    }
    let inst = Instantiator::new(model.clone());
    let op = inst.instantiate(&expr, n)?;
    let record = MatrixRecord::new(model, canonical, n, &op);
    if let Some(c) = cache {
        c.store(&key, &record).context("writing cache entry")?;
    }
    Ok((record, status))
}

fn render_report(r: &Report, format: Format) -> Outcome {
    let text = match format {
        Format::Json => r.to_json() + "\n",
        Format::Table => r.to_table(),
        Format::Csv => {
            let mut s = String::from("check,status\n");
            for c in &r.checks {
                s.push_str(&format!(
                    "\"{}\",{}\n",
                    c.name.replace('"', "'"),
                    if c.pass { "PASS" } else { "FAIL" }
                ));
            }
            s
        }
    };
    Outcome {
        text,
        ok: r.all_passed(),
    }
}

pub fn run(cli: &Cli) -> Result<Outcome> {
    match &cli.command {
        Command::Matrix {
            expr,
            common,
            cache_dir,
        } => {
            let model = load_model(common.model.as_deref(), common.mode)?;
            let cache = cache_dir
                .as_ref()
                .map(Cache::open)
                .transpose()
                .context("opening cache")?;
            let (record, status) = matrix_record(&model, expr, common.n, cache.as_ref())?;
            if status == CacheStatus::Recomputed {
                eprintln!(
                    "warning: corrupt cache entry for {:?}, recomputed",
                    record.expr
                );
            }
            let text = match common.format {
                Format::Json => record.to_json() + "\n",
                Format::Csv => record.to_csv(),
                Format::Table => record.to_table(),
            };
            Ok(Outcome { text, ok: true })
        }
        Command::Verify {
            suite,
            common,
            seed,
            samples,
        } => {
            let model = load_model(common.model.as_deref(), common.mode)?;
            let n = common.n;
            let report = match suite {
                Suite::Relations => verify::relation_suite(&model, n),
                Suite::Grading => verify::grading_suite(&model, n),
                Suite::Heisenberg => verify::heisenberg_suite(&model, n),
                Suite::Lemma => verify::lemma_suite(&model, samples.unwrap_or(50), *seed, n),
                Suite::TBracket => {
                    verify::t_bracket_suite(&model, &[n], samples.unwrap_or(25), *seed)
                }
                Suite::Rho => verify::rho_suite(&model, n, samples.unwrap_or(20), *seed),
                Suite::Widening => verify::widening_suite(&model, n, 2),
                Suite::Confluence => {
                    verify::confluence_suite(&model, samples.unwrap_or(500), *seed)
                }
            };
            Ok(render_report(&report, common.format))
        }
        Command::Rank { common } => {
            let model = load_model(common.model.as_deref(), common.mode)?;
            Ok(render_report(
                &verify::injectivity_rank(&model, common.n)?,
                common.format,
            ))
        }
        Command::Spectrum { common } => {
            let mut model = load_model(common.model.as_deref(), common.mode)?;
            if common.model.is_none() {
                model = model.with_points(common.n as usize);
            } else if model.points() < common.n as usize {
                bail!(
                    "the model needs at least {} point symbols for zero cycles",
                    common.n
                );
            }
            Ok(render_report(
                &verify::zero_cycle_spectrum(&model, common.n)?,
                common.format,
            ))
        }
        Command::Closure { common, depth } => {
            let model = load_model(common.model.as_deref(), common.mode)?;
            Ok(render_report(
                &verify::lie_closure_dimension(&model, common.n, *depth)?,
                common.format,
            ))
        }
        Command::Wedge { element, common } => {
            let model = load_model(common.model.as_deref(), common.mode)?;
            let amb = WedgeAmbient::new(&model, common.n);
            let x = parse_wedge(&amb, &model, element)?;
            let expr = x.rho().print(&model);
            let (record, _) = matrix_record(&model, &expr, common.n, None)?;
            let text = match common.format {
                Format::Json => record.to_json() + "\n",
                Format::Csv => record.to_csv(),
                Format::Table => format!("rho({}) = {expr}\n{}", x.display(), record.to_table()),
            };
            Ok(Outcome { text, ok: true })
        }
    }
}

/// Writes to `--out` when given, else stdout.
pub fn emit(cli: &Cli, text: &str) -> Result<()> {
    let out = match &cli.command {
        Command::Matrix { common, .. }
        | Command::Verify { common, .. }
        | Command::Rank { common }
        | Command::Spectrum { common }
        | Command::Closure { common, .. }
        | Command::Wedge { common, .. } => common.out.as_ref(),
    };
    match out {
        Some(p) => fs::write(p, text).with_context(|| format!("writing {}", p.display())),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}
