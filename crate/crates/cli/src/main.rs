use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use wrpg_core::bounds::estimate_vol_cn;
use wrpg_core::lab::{
    bound_inputs_for, bound_table, bounds_csv, combined_csv, mode_bound_csv, summary_csv, sweep_rho, trials_csv,
    verify_combined, verify_mode_bound, Budget, Timing,
};
use wrpg_core::rpg::{plan, validate_mode_path};
use wrpg_core::world::{
    build_checkers, build_pass_under, build_stepping_stones, load_scenario, save_scenario, CheckersParams, PassUnderParams,
    Scenario, SteppingStonesParams,
};

/// Footstep planner for a biped on flat ground with 3D obstacles.
#[derive(Parser)]
#[command(name = "wrpg", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Clone, Copy)]
struct BudgetArgs {
    /// Cumulative exploration samples after the last round.
    #[arg(long, default_value_t = 2000)]
    np: usize,
    /// Cumulative placements per side after the last round.
    #[arg(long, default_value_t = 2000)]
    nsigma: usize,
    #[arg(long, default_value_t = 4)]
    rounds: u32,
}

impl BudgetArgs {
    fn budget(&self) -> Budget {
        Budget {
            n_p: self.np,
            n_sigma: self.nsigma,
            max_rounds: self.rounds,
        }
    }
}

#[derive(Subcommand)]
enum Command {
    /// Plan once and print the mode sequence.
    Plan {
        #[arg(long)]
        scenario: PathBuf,
        /// Sampling radius in meters.
        #[arg(long)]
        rho: f64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[command(flatten)]
        budget: BudgetArgs,
    },
    /// Repeat trials over several sampling radii.
    Sweep {
        #[arg(long)]
        scenario: PathBuf,
        /// Radii as multiples of the maximum step.
        #[arg(long, value_delimiter = ',', default_value = "0.5,1,2,4,8")]
        rho_list: Vec<f64>,
        #[arg(long, default_value_t = 200)]
        trials: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Summary CSV path.
        #[arg(long)]
        out: PathBuf,
        /// Optional per-trial CSV path.
        #[arg(long)]
        trials_out: Option<PathBuf>,
        /// Leave wall-clock columns empty for reproducible files.
        #[arg(long)]
        no_timing: bool,
        #[command(flatten)]
        budget: BudgetArgs,
    },
    /// Tabulate the failure bounds from a scenario's ground-truth cylinders.
    Bounds {
        #[arg(long)]
        scenario: PathBuf,
        #[arg(long, value_delimiter = ',', default_value = "1000,10000,100000,1000000")]
        np_list: Vec<u64>,
        #[arg(long, value_delimiter = ',', default_value = "100,1000,10000")]
        nsigma_list: Vec<u64>,
        /// Sampling radius as a multiple of the maximum step.
        #[arg(long, default_value_t = 2.0)]
        rho_over_rmax: f64,
        /// Draws for the C_N volume estimate.
        #[arg(long, default_value_t = 200_000)]
        volume_draws: u64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Check the bounds against simulation.
    Verify {
        #[command(subcommand)]
        which: Verify,
    },
    /// Scenario files.
    Scenario {
        #[command(subcommand)]
        action: ScenarioAction,
    },
}

#[derive(Subcommand)]
enum Verify {
    /// Empirical failure of the placement sampler against the mode bound.
    ModeBound {
        #[arg(long)]
        scenario: PathBuf,
        #[arg(long, value_delimiter = ',', default_value = "10,50,100,200")]
        nsigma_list: Vec<u64>,
        #[arg(long, default_value_t = 2000)]
        trials: usize,
        #[arg(long, default_value_t = 0.5)]
        rho_over_rmax: f64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Two-stage Bernoulli processes against the union bound.
    Combined {
        #[arg(long, default_value_t = 10_000)]
        trials: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Subcommand)]
enum ScenarioAction {
    /// Generate one of the benchmark worlds.
    Build {
        #[command(subcommand)]
        kind: BuildKind,
    },
}

#[derive(Subcommand)]
enum BuildKind {
    SteppingStones {
        #[arg(long, default_value_t = SteppingStonesParams::default().gap_width)]
        gap: f64,
        #[arg(long, default_value_t = SteppingStonesParams::default().stone_radius)]
        stone_radius: f64,
        #[arg(long, default_value_t = SteppingStonesParams::default().stone_count)]
        stones: usize,
        #[arg(long, default_value_t = 0.0)]
        jitter: f64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        out: PathBuf,
    },
    Checkers {
        #[arg(long, default_value_t = CheckersParams::default().cell_size)]
        cell: f64,
        #[arg(long, default_value_t = CheckersParams::default().rows)]
        rows: usize,
        #[arg(long, default_value_t = CheckersParams::default().cols)]
        cols: usize,
        #[arg(long)]
        out: PathBuf,
    },
    PassUnder {
        #[arg(long, value_delimiter = ',', default_value = "1.1,1.1,1.1")]
        bar_heights: Vec<f64>,
        #[arg(long, default_value_t = 0.1)]
        thickness: f64,
        #[arg(long, default_value_t = 1.0)]
        spacing: f64,
        #[arg(long)]
        out: PathBuf,
    },
}

fn read_scenario(path: &Path) -> Result<Scenario> {
    let text = std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    let mut s = load_scenario(&text).with_context(|| format!("loading {}", path.display()))?;
    if s.name.is_empty() {
        s.name = path.file_stem().map(|n| n.to_string_lossy().into_owned()).unwrap_or_default();
    }
    Ok(s)
}

fn emit(out: &Option<PathBuf>, text: &str) -> Result<()> {
    match out {
        Some(p) => std::fs::write(p, text).with_context(|| format!("writing {}", p.display())),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

/// Returns `true` when a bound violation was found.
fn run(cli: Cli) -> Result<bool> {
    match cli.command {
        Command::Plan {
            scenario,
            rho,
            seed,
            budget,
        } => {
            let s = read_scenario(&scenario)?;
            let params = budget.budget().params(rho);
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let r = plan(&s.env, &s.robot, &s.query, &params, &mut rng)?;
            println!("status: {:?}", r.status);
            println!(
                "samples: N_P = {}, N_sigma = {} per side, rounds = {}",
                r.counters.n_p_used, r.counters.n_sigma_used, r.counters.rounds
            );
            println!("wall time: {:.1} ms", r.wall_ms);
            if let Some(path) = &r.mode_path {
                validate_mode_path(&s.env, &s.robot, &s.query, path).map_err(anyhow::Error::msg)?;
                println!("modes: {}", path.len());
                for m in path {
                    println!("  {}", describe_mode(m));
                }
            }
            Ok(false)
        }
        Command::Sweep {
            scenario,
            rho_list,
            trials,
            seed,
            out,
            trials_out,
            no_timing,
            budget,
        } => {
            let s = read_scenario(&scenario)?;
            let sweep = sweep_rho(&s, &rho_list, budget.budget(), trials, seed)?;
            let timing = if no_timing { Timing::Omit } else { Timing::Include };
            std::fs::write(&out, summary_csv(&sweep.rows, timing))?;
            if let Some(t) = trials_out {
                std::fs::write(&t, trials_csv(&sweep.records, timing))?;
            }
            for r in &sweep.rows {
                println!(
                    "rho/Rmax = {:<5} success {:.3}  median samples {:.1}  normalized {:.3}",
                    r.rho_over_rmax, r.success_rate, r.median_samples, r.normalized_median
                );
            }
            match sweep.spearman {
                Some(v) => println!("spearman(rho, median samples) = {v:.3}"),
                None => println!("spearman(rho, median samples) undefined"),
            }
            Ok(false)
        }
        Command::Bounds {
            scenario,
            np_list,
            nsigma_list,
            rho_over_rmax,
            volume_draws,
            seed,
            out,
        } => {
            let s = read_scenario(&scenario)?;
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let vol = estimate_vol_cn(&s.env, &s.robot, &s.env.explore_bounds, volume_draws, &mut rng);
            if vol.accepted == 0 {
                bail!("no draw satisfied the necessary condition; C_N volume unknown");
            }
            let base = bound_inputs_for(&s, rho_over_rmax * s.max_step(), vol.volume, 0, 0)?;
            let rows = bound_table(&base, &np_list, &nsigma_list)?;
            emit(&out, &bounds_csv(&rows))?;
            Ok(false)
        }
        Command::Verify { which } => match which {
            Verify::ModeBound {
                scenario,
                nsigma_list,
                trials,
                rho_over_rmax,
                seed,
                out,
            } => {
                let s = read_scenario(&scenario)?;
                let rows = verify_mode_bound(&s, rho_over_rmax * s.max_step(), &nsigma_list, trials, seed)?;
                emit(&out, &mode_bound_csv(&rows))?;
                Ok(rows.iter().any(|r| r.violation))
            }
            Verify::Combined { trials, seed, out } => {
                let levels = [0.1, 0.3, 0.5, 0.7, 0.9];
                let grid: Vec<(f64, f64)> = levels.iter().flat_map(|&a| levels.iter().map(move |&b| (a, b))).collect();
                let rows = verify_combined(&grid, trials, seed)?;
                emit(&out, &combined_csv(&rows))?;
                Ok(rows.iter().any(|r| r.violation))
            }
        },
        Command::Scenario {
            action: ScenarioAction::Build { kind },
        } => {
            let (s, out) = match kind {
                BuildKind::SteppingStones {
                    gap,
                    stone_radius,
                    stones,
                    jitter,
                    seed,
                    out,
                } => (
                    build_stepping_stones(&SteppingStonesParams {
                        gap_width: gap,
                        stone_radius,
                        stone_count: stones,
                        jitter,
                        seed,
                        ..SteppingStonesParams::default()
                    })?,
                    out,
                ),
                BuildKind::Checkers { cell, rows, cols, out } => (
                    build_checkers(&CheckersParams {
                        cell_size: cell,
                        rows,
                        cols,
                        ..CheckersParams::default()
                    })?,
                    out,
                ),
                BuildKind::PassUnder {
                    bar_heights,
                    thickness,
                    spacing,
                    out,
                } => (
                    build_pass_under(&PassUnderParams {
                        bar_heights,
                        bar_thickness: thickness,
                        spacing,
                        ..PassUnderParams::default()
                    })?,
                    out,
                ),
            };
            std::fs::write(&out, save_scenario(&s)).with_context(|| format!("writing {}", out.display()))?;
            Ok(false)
        }
    }
}

fn describe_mode(m: &wrpg_core::biped::Mode) -> String {
    use wrpg_core::biped::Mode;
    match m {
        Mode::SingleSupport { side, pose } => format!("single {side:?} [{:.4}, {:.4}, {:.4}]", pose.x, pose.y, pose.yaw),
        Mode::DoubleSupport { left, right } => format!(
            "double L [{:.4}, {:.4}, {:.4}] R [{:.4}, {:.4}, {:.4}]",
            left.x, left.y, left.yaw, right.x, right.y, right.yaw
        ),
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(false) => ExitCode::SUCCESS,
        Ok(true) => {
            eprintln!("bound violation detected");
            ExitCode::from(2)
        }
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(1)
        }
    }
}
