use std::fs;
use std::io::Write as _;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{Context, Result};
use clap::{Args, Parser, Subcommand};
use towerplan::config::{Overrides, PlanConfig, Settings};
use towerplan::pipeline::{analyze, build_grids, load_inputs, plan};
use towerplan::raster::read_raster;
use towerplan::render::render_svg;
use towerplan::report::{classify_doc, mine_doc_from_analysis, plan_report, to_json, PlanReport};

/// Exit status when `--fail-on-uncovered` finds a cell short of full
/// coverage.
const EXIT_UNCOVERED: u8 = 2;

#[derive(Parser)]
#[command(
    name = "towerplan",
    version,
    about = "Plan antenna sites over a gridded elevation model"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run the whole pipeline and write the placement report.
    Plan {
        #[command(flatten)]
        common: Common,
        /// Exit with status 2 if any cell is not fully covered.
        #[arg(long)]
        fail_on_uncovered: bool,
    },
    /// Mine association rules per square and print them.
    Mine {
        #[command(flatten)]
        common: Common,
    },
    /// Print the first/second priority map of every cell.
    Classify {
        #[command(flatten)]
        common: Common,
    },
    /// Draw the plan as SVG.
    Render {
        #[command(flatten)]
        common: Common,
        /// Draw this existing report instead of planning again.
        #[arg(long)]
        report: Option<PathBuf>,
    },
}

#[derive(Args)]
struct Common {
    /// JSON config file; relative paths inside it are resolved against its
    /// directory.
    #[arg(long)]
    config: Option<PathBuf>,
    /// ESRI ASCII elevation grid.
    #[arg(long)]
    raster: Option<String>,
    /// JSON object inventory.
    #[arg(long)]
    objects: Option<String>,
    /// Where to write the JSON output (default: stdout).
    #[arg(long)]
    out: Option<String>,
    /// Where to write the SVG drawing.
    #[arg(long)]
    svg: Option<String>,
    #[arg(long)]
    minsup: Option<f64>,
    #[arg(long)]
    minconf: Option<f64>,
    /// Goodness a single square must reach before two border squares are
    /// used instead.
    #[arg(long)]
    threshold: Option<u32>,
    /// Cell side in meters.
    #[arg(long)]
    cell_side: Option<f64>,
    /// Antenna coverage radius in meters.
    #[arg(long)]
    radius: Option<f64>,
    /// Square side in meters, instead of deriving it from the radius.
    #[arg(long)]
    square_side: Option<f64>,
    /// Worker threads for per-cell processing.
    #[arg(long, env = "TOWERPLAN_JOBS")]
    jobs: Option<usize>,
}

impl Common {
    fn settings(&self) -> Result<Settings> {
        let mut cfg = match &self.config {
            Some(path) => PlanConfig::load(path)?,
            None => PlanConfig::default(),
        };
        let settings = cfg.apply(&Overrides {
            raster: self.raster.clone(),
            objects: self.objects.clone(),
            cell_side_m: self.cell_side,
            antenna_radius_m: self.radius,
            square_side_m: self.square_side,
            minsup: self.minsup,
            minconf: self.minconf,
            threshold: self.threshold,
            out: self.out.clone(),
            svg: self.svg.clone(),
        })?;
        if self.jobs == Some(0) {
            anyhow::bail!("--jobs must be at least 1");
        }
        Ok(settings)
    }
}

fn write_output(path: Option<&Path>, text: &str) -> Result<()> {
    match path {
        Some(p) => fs::write(p, text).with_context(|| format!("cannot write {}", p.display())),
        None => {
            let mut stdout = std::io::stdout().lock();
            stdout.write_all(text.as_bytes())?;
            stdout.flush()?;
            Ok(())
        }
    }
}

fn planned_report(common: &Common, settings: &Settings) -> Result<PlanReport> {
    let inputs = load_inputs(settings)?;
    let result = plan(settings, &inputs, common.jobs)?;
    Ok(plan_report(settings, &inputs.raster, &result))
}

fn run(cli: Cli) -> Result<ExitCode> {
    match cli.command {
        Command::Plan {
            common,
            fail_on_uncovered,
        } => {
            let settings = common.settings()?;
            let report = planned_report(&common, &settings)?;
            write_output(settings.out.as_deref(), &to_json(&report))?;
            if let Some(svg) = &settings.svg {
                write_output(Some(svg), &render_svg(&report))?;
            }
            if fail_on_uncovered && !report.coverage.full {
                for c in report.coverage.cells.iter().filter(|c| !c.full) {
                    eprintln!(
                        "cell ({}, {}): {} of {} squares covered",
                        c.cell[0], c.cell[1], c.covered, c.total
                    );
                }
                return Ok(ExitCode::from(EXIT_UNCOVERED));
            }
        }
        Command::Mine { common } => {
            let settings = common.settings()?;
            let inputs = load_inputs(&settings)?;
            let analysis = analyze(&settings, &inputs, common.jobs.or(settings.jobs))?;
            write_output(
                settings.out.as_deref(),
                &to_json(&mine_doc_from_analysis(&settings, &analysis)),
            )?;
        }
        Command::Classify { common } => {
            let settings = common.settings()?;
            let raster = read_raster(&settings.raster)
                .with_context(|| format!("raster stage, {}", settings.raster.display()))?;
            let grids = build_grids(&settings, &raster)?;
            write_output(settings.out.as_deref(), &to_json(&classify_doc(&grids)))?;
        }
        Command::Render { common, report } => {
            let flag_target = common
                .svg
                .as_deref()
                .or(common.out.as_deref())
                .map(PathBuf::from);
            let (report, target): (PlanReport, Option<PathBuf>) = match report {
                Some(path) => {
                    let text = fs::read_to_string(&path)
                        .with_context(|| format!("cannot read {}", path.display()))?;
                    let report = serde_json::from_str(&text)
                        .with_context(|| format!("invalid report {}", path.display()))?;
                    (report, flag_target)
                }
                None => {
                    let settings = common.settings()?;
                    let target = settings.svg.clone().or(flag_target);
                    (planned_report(&common, &settings)?, target)
                }
            };
            write_output(target.as_deref(), &render_svg(&report))?;
        }
    }
    Ok(ExitCode::SUCCESS)
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    match run(Cli::parse()) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::FAILURE
        }
    }
}
