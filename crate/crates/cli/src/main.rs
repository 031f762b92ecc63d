//! Command-line front end: direct images, E1 pages, duality checks, BGG
//! complexes, region sweeps and scenario runs, in byte-stable text or JSON.

use anyhow::{anyhow, bail, Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};
use flagcalc::{
    assemble_e1, assemble_e1_bgg, bgg_complex, check_bgg_duality, check_duality, direct_image,
    CartanData, CycleStabilizer, FibrationSpec, ParabolicMarking, Weight, WeylWord,
};
use rand::{Rng, SeedableRng};
use serde::Serialize;
use std::process::ExitCode;

use flagcalc_cli::label::{parse_bundle, parse_label};
use flagcalc_cli::report::{
    BbwReport, BggComplexReport, DualityReportOut, FibrationInfo, PageReport, RandomDualityReport,
};
use flagcalc_cli::scenario;
use flagcalc_cli::sweep::{default_ranges, parse_ranges, run_sweep, Criterion};

#[derive(Clone, Copy, PartialEq, Eq, Debug, ValueEnum)]
enum Format {
    Text,
    Json,
}

#[derive(Parser)]
#[command(
    name = "flagcalc",
    version,
    about = "Exact direct-image and spectral-page calculus for homogeneous bundles on flag manifolds"
)]
struct Cli {
    /// Output format.
    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    format: Format,
    /// Seed for randomized property runs.
    #[arg(long, global = true, default_value_t = 2020)]
    seed: u64,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Clone)]
struct FibrationArgs {
    /// Bundled fibration name (twistor-pp or grassmann-pm).
    #[arg(long, default_value = "twistor-pp")]
    fibration: String,
    /// Cartan type for a custom fibration (for instance A3).
    #[arg(long)]
    cartan: Option<String>,
    /// Domain-side marking mask for a custom fibration.
    #[arg(long)]
    q_marking: Option<String>,
    /// Cycle-space marking mask for a custom fibration.
    #[arg(long)]
    m_marking: Option<String>,
    /// Transport word as comma-separated 1-based node indices.
    #[arg(long)]
    transport: Option<String>,
    /// Cycle stabilizer for a custom fibration: parabolic or levi.
    #[arg(long)]
    stabilizer: Option<String>,
    /// Mark a custom fibration as Hermitian-holomorphic.
    #[arg(long)]
    hermitian: bool,
}

impl FibrationArgs {
    fn resolve(&self) -> Result<FibrationSpec> {
        if self.cartan.is_none() && self.q_marking.is_none() && self.m_marking.is_none() {
            return FibrationSpec::by_name(&self.fibration)
                .ok_or_else(|| anyhow!("unknown bundled fibration {:?}", self.fibration));
        }
        let cartan = CartanData::parse(
            self.cartan
                .as_deref()
                .ok_or_else(|| anyhow!("custom fibrations need --cartan"))?,
        )
        .map_err(|e| anyhow!("{e}"))?;
        let q = ParabolicMarking::from_mask(
            cartan.clone(),
            self.q_marking
                .as_deref()
                .ok_or_else(|| anyhow!("custom fibrations need --q-marking"))?,
        )
        .map_err(|e| anyhow!("{e}"))?;
        let m = ParabolicMarking::from_mask(
            cartan.clone(),
            self.m_marking
                .as_deref()
                .ok_or_else(|| anyhow!("custom fibrations need --m-marking"))?,
        )
        .map_err(|e| anyhow!("{e}"))?;
        let transport = match &self.transport {
            None => None,
            Some(text) => {
                let word: Vec<usize> = text
                    .split(',')
                    .map(|part| -> Result<usize> {
                        let i: usize = part.trim().parse().context("bad transport index")?;
                        if i == 0 || i > cartan.rank() {
                            bail!("transport node {i} out of range 1..={}", cartan.rank());
                        }
                        Ok(i - 1)
                    })
                    .collect::<Result<_>>()?;
                Some(WeylWord(word))
            }
        };
        let stabilizer = match self.stabilizer.as_deref() {
            None | Some("parabolic") => CycleStabilizer::Parabolic,
            Some("levi") => CycleStabilizer::Levi,
            Some(other) => bail!("stabilizer must be parabolic or levi, got {other:?}"),
        };
        FibrationSpec::new("custom", q, m, transport, stabilizer, self.hermitian)
            .map_err(|e| anyhow!("{e}"))
    }
}

#[derive(Subcommand)]
enum Command {
    /// Direct image of one bundle along a fibration of nested markings.
    Bbw {
        /// Bundle on the total marking, as a full label like A3[xx.]{3,0,2}.
        label: String,
        /// Base marking mask, for instance .x.
        #[arg(long)]
        base: String,
    },
    /// Assemble and classify an E1 page.
    E1 {
        /// Bundle on the domain marking: coordinates a,b,c or a full label.
        bundle: String,
        #[command(flatten)]
        fibration: FibrationArgs,
        /// Use the BGG-based page instead of the de Rham one.
        #[arg(long)]
        bgg: bool,
        /// Drop flagged absorption pairs before classifying.
        #[arg(long)]
        discount_flags: bool,
    },
    /// Check the duality isomorphism cell by cell.
    Duality {
        /// Bundle on the domain marking; omit when using --random.
        bundle: Option<String>,
        #[command(flatten)]
        fibration: FibrationArgs,
        /// Check the improved duality on BGG pages.
        #[arg(long)]
        bgg: bool,
        /// Check this many seeded random labels instead of one bundle.
        #[arg(long)]
        random: Option<usize>,
    },
    /// Terms of the BGG complex along the contractible leg.
    BggComplex {
        /// Bundle on the domain marking.
        bundle: String,
        #[command(flatten)]
        fibration: FibrationArgs,
    },
    /// Compare predicted and computed concentration over a coordinate grid.
    Sweep {
        #[command(flatten)]
        fibration: FibrationArgs,
        #[arg(long, value_enum)]
        criterion: Criterion,
        /// Inclusive ranges lo..hi, one per node or a single one for all.
        #[arg(long)]
        range: Option<String>,
    },
    /// Run a bundled or file-based scenario.
    Scenario {
        /// Bundled name (twistor-pp, grassmann-pm) or a JSON file path.
        scenario: String,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(check_failed) => {
            if check_failed {
                ExitCode::from(1)
            } else {
                ExitCode::SUCCESS
            }
        }
        Err(err) => {
            eprintln!("error: {err:#}");
            ExitCode::from(2)
        }
    }
}

/// Returns whether a verification-style check failed.
fn run(cli: &Cli) -> Result<bool> {
    match &cli.command {
        Command::Bbw { label, base } => {
            let spec = parse_label(label)?;
            let base = ParabolicMarking::from_mask(spec.marking.cartan().clone(), base)
                .map_err(|e| anyhow!("{e}"))?;
            let image =
                direct_image(&spec.marking, &base, &spec.weight).map_err(|e| anyhow!("{e}"))?;
            let out = BbwReport::new(&spec.marking, &base, &spec.weight, &image);
            emit(cli, "bbw", &out.render_text(), &out)?;
            Ok(false)
        }
        Command::E1 {
            bundle,
            fibration,
            bgg,
            discount_flags,
        } => {
            let fib = fibration.resolve()?;
            let weight = parse_bundle(bundle, fib.q_marking())?;
            let page = if *bgg {
                assemble_e1_bgg(&fib, &weight).map_err(|e| anyhow!("{e}"))?
            } else {
                assemble_e1(&fib, &weight).map_err(|e| anyhow!("{e}"))?
            };
            let page = if *discount_flags {
                page.discounted()
            } else {
                page
            };
            let out = PageReport::new(&fib, &weight, &page, *discount_flags);
            emit(cli, "e1", &out.render_text(), &out)?;
            Ok(false)
        }
        Command::Duality {
            bundle,
            fibration,
            bgg,
            random,
        } => {
            let fib = fibration.resolve()?;
            let kind = if *bgg { "bgg" } else { "de-rham" };
            let check = |weight: &Weight| -> Result<flagcalc::DualityReport> {
                if *bgg {
                    check_bgg_duality(&fib, weight).map_err(|e| anyhow!("{e}"))
                } else {
                    check_duality(&fib, weight).map_err(|e| anyhow!("{e}"))
                }
            };
            match (bundle, random) {
                (Some(bundle), None) => {
                    let weight = parse_bundle(bundle, fib.q_marking())?;
                    let report = check(&weight)?;
                    let out = DualityReportOut::new(&fib, &weight, kind, &report);
                    emit(cli, "duality", &out.render_text(), &out)?;
                    Ok(!out.pass)
                }
                (None, Some(count)) => {
                    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(cli.seed);
                    let mut failures = Vec::new();
                    for _ in 0..*count {
                        let weight = random_label(&fib, &mut rng);
                        if !check(&weight)?.pass {
                            failures.push(weight.coords().to_vec());
                        }
                    }
                    let out = RandomDualityReport {
                        fibration: FibrationInfo::new(&fib),
                        kind: kind.to_string(),
                        seed: cli.seed,
                        count: *count,
                        pass: failures.is_empty(),
                        failures,
                    };
                    emit(cli, "duality", &out.render_text(), &out)?;
                    Ok(!out.pass)
                }
                _ => bail!("pass exactly one of a bundle or --random <count>"),
            }
        }
        Command::BggComplex { bundle, fibration } => {
            let fib = fibration.resolve()?;
            let weight = parse_bundle(bundle, fib.q_marking())?;
            let complex = bgg_complex(&fib, &weight).map_err(|e| anyhow!("{e}"))?;
            let out = BggComplexReport::new(&fib, &weight, &complex);
            emit(cli, "bgg-complex", &out.render_text(), &out)?;
            Ok(false)
        }
        Command::Sweep {
            fibration,
            criterion,
            range,
        } => {
            let fib = fibration.resolve()?;
            let ranges = match range {
                Some(text) => parse_ranges(text, fib.cartan().rank())?,
                None => default_ranges(*criterion, fib.cartan().rank()),
            };
            let out = run_sweep(&fib, *criterion, &ranges)?;
            emit(cli, "sweep", &out.render_text(), &out)?;
            Ok(out.mismatches > 0 && !out.advisory)
        }
        Command::Scenario { scenario } => {
            let config = scenario::ScenarioConfig::resolve(scenario)?;
            let out = scenario::run_scenario(&config)?;
            emit(cli, "scenario", &out.render_text(), &out)?;
            Ok(!out.all_duality_pass)
        }
    }
}

fn random_label(fib: &FibrationSpec, rng: &mut rand_chacha::ChaCha8Rng) -> Weight {
    Weight::new(
        (0..fib.cartan().rank())
            .map(|i| {
                if fib.q_marking().is_crossed(i) {
                    rng.gen_range(-5..=5)
                } else {
                    rng.gen_range(0..=4)
                }
            })
            .collect(),
    )
}

/// Print the report to stdout; when FLAGCALC_OUTPUT_DIR is set, also write it
/// there as `<stem>.txt` or `<stem>.json`.
fn emit<T: Serialize>(cli: &Cli, stem: &str, text: &str, value: &T) -> Result<()> {
    let rendered = match cli.format {
        Format::Text => text.to_string(),
        Format::Json => {
            let mut json = serde_json::to_string_pretty(value)?;
            json.push('\n');
            json
        }
    };
    print!("{rendered}");
    if let Ok(dir) = std::env::var("FLAGCALC_OUTPUT_DIR") {
        let ext = match cli.format {
            Format::Text => "txt",
            Format::Json => "json",
        };
        let path = std::path::Path::new(&dir).join(format!("{stem}.{ext}"));
        std::fs::write(&path, rendered.as_bytes())
            .with_context(|| format!("cannot write {}", path.display()))?;
    }
    Ok(())
}
