//! `rankone`: run the verification experiments and emit CSV/JSON reports.
//!
//! Exit status: 0 when every criterion holds, 2 when a criterion fails,
//! 1 on usage or configuration errors.

mod config;

use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{anyhow, bail, Context, Result};
use clap::{Parser, Subcommand};
use rankone::experiments::{
    cowling_operator_scan, gate_growth, growth_busemann, growth_visual, integrability_scan,
    lp_isometry_check, lr_properness, norm_equivalence_check, set_spectrum_cache,
    uniform_boundedness_sample, verify_cocycle, verify_group, witness_defaults, witness_sequence,
    BusemannBackend, ChartGrid, CocycleReport,
};
use rankone::{FieldTag, GroupParams};

use config::{sizes, NumList, Settings};

#[derive(Parser, Debug)]
#[command(
    name = "rankone",
    version,
    about = "Proper cocycles and Sobolev analysis on rank-one groups"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Group axioms, then the cocycle identities
    VerifyGroup(RunArgs),
    /// Cocycle identities and equivariance
    VerifyCocycle(RunArgs),
    /// Growth of the visual or Busemann cocycle norm along a(t)·0
    Growth(RunArgs),
    /// ev₀ against the critical Sobolev norm on a witness family
    Witness(RunArgs),
    /// Quadrature of 𝒩^(s−r) near the origin of V
    Integrability(RunArgs),
    /// Sampled operator norms of the action on W₀ against the cocycle norm
    UniformBounded(RunArgs),
    /// Lʳ norm of the Busemann differential and annulus integrals
    LrProperness(RunArgs),
    /// Compact against chart W₀ norms on a bump family
    NormEquivalence(RunArgs),
    /// Compact against noncompact Lᵖ integrals of induced functions
    LpIsometry(RunArgs),
    /// Singular values of the discretized Cowling composition
    CowlingScan(RunArgs),
    /// Experiments and the statements they check
    List,
}

#[derive(clap::Args, Debug)]
struct RunArgs {
    #[command(flatten)]
    settings: Settings,
    /// JSON config document; flags override its fields
    #[arg(long)]
    config: Option<PathBuf>,
    /// Print the JSON report instead of the summary
    #[arg(long)]
    json: bool,
}

const EXPERIMENTS: &[(&str, &str)] = &[
    (
        "cowling-scan",
        "Δ^(r/4) ∘ (∗𝒩^(−r/2)) extends to a bounded operator on L²(V)",
    ),
    (
        "growth --experiment busemann",
        "Lemma: ‖γ_{x,y}‖_{W₀} → +∞ as d(x, y) → +∞",
    ),
    (
        "growth --experiment visual",
        "Lemma: ‖c(x, y)‖_{W₀*} → +∞ as d(x, y) → +∞",
    ),
    (
        "integrability",
        "Lemma: 𝒩^(ξ−r) is locally integrable on V for Re ξ > 0 and not at the origin for Re ξ ≤ 0",
    ),
    ("list", "this table"),
    (
        "lp-isometry",
        "Proposition: ∫_K |f|^p dμ_K = C_G ∫_V |f|^p dμ_V with 1/p = Re λ/2r + 1/2",
    ),
    (
        "lr-properness",
        "Proposition: ‖d_E γ_{x,y}‖_{L^r} → +∞",
    ),
    (
        "norm-equivalence",
        "Theorem: the compact and noncompact norms on smooth vectors are equivalent",
    ),
    (
        "uniform-bounded",
        "Corollary: the G-action on W₀ is uniformly bounded",
    ),
    (
        "verify-cocycle",
        "γ and c satisfy the cocycle identity and are G-equivariant",
    ),
    (
        "verify-group",
        "matrix model of G: q is preserved, w₀ v(x, y) w₀ = n(x, y), group law of V",
    ),
    ("witness", "Lemma: ev₀ is not bounded on ℋ^(r/2)(V)"),
];

fn list_table() -> String {
    let width = EXPERIMENTS
        .iter()
        .map(|(n, _)| n.chars().count())
        .max()
        .unwrap_or(0);
    EXPERIMENTS
        .iter()
        .map(|(name, statement)| format!("{name:<width$}  {statement}\n"))
        .collect()
}

fn params(cfg: &mut Settings) -> Result<GroupParams> {
    let group = cfg.group.get_or_insert_with(|| "so".into()).to_lowercase();
    let field = match group.as_str() {
        "so" => FieldTag::Real,
        "su" => FieldTag::Complex,
        "sp" => FieldTag::Quaternion,
        other => bail!("--group: unknown group `{other}` (expected so, su or sp)"),
    };
    let n = *cfg.n.get_or_insert(2);
    Ok(GroupParams::new(field, n)?)
}

fn list_or(slot: &mut Option<NumList>, default: Vec<f64>) -> Vec<f64> {
    slot.get_or_insert(NumList(default)).0.clone()
}

/// `(L, m)` from the settings, or the per-group default.
fn chart_grid(cfg: &mut Settings, p: &GroupParams, default: ChartGrid) -> Result<ChartGrid> {
    let l = list_or(&mut cfg.grid_l, default.half_widths.clone());
    let m = *cfg.grid_m.get_or_insert(default.m);
    let half_widths = match l.len() {
        1 => vec![l[0]; p.heis_dim()],
        k if k == p.heis_dim() => l,
        k => bail!(
            "--grid-L: expected 1 or {} half widths, got {k}",
            p.heis_dim()
        ),
    };
    if half_widths.iter().any(|h| *h <= 0.0) {
        bail!("--grid-L: half widths must be positive");
    }
    Ok(ChartGrid { half_widths, m })
}

fn su_chart() -> ChartGrid {
    ChartGrid {
        half_widths: vec![0.9, 0.9, 0.81],
        m: 59,
    }
}

fn half_steps(lo: f64, hi: f64) -> Vec<f64> {
    let n = ((hi - lo) / 0.5).round() as usize;
    (0..=n).map(|i| lo + 0.5 * i as f64).collect()
}

fn run_command(command: &Command, cfg: &mut Settings) -> Result<Vec<CocycleReport>> {
    let p = params(cfg)?;
    let seed = *cfg.seed.get_or_insert(1);
    let r = p.r() as f64;
    if matches!(
        command,
        Command::Growth(_)
            | Command::Witness(_)
            | Command::LrProperness(_)
            | Command::LpIsometry(_)
            | Command::UniformBounded(_)
    ) {
        gate_growth(&p, command_name(command))?;
    }
    let reports = match command {
        Command::VerifyGroup(_) => {
            let samples = *cfg.samples.get_or_insert(200);
            vec![
                verify_group(&p, samples, seed)?,
                verify_cocycle(&p, samples, seed)?,
            ]
        }
        Command::VerifyCocycle(_) => {
            vec![verify_cocycle(&p, *cfg.samples.get_or_insert(200), seed)?]
        }
        Command::Growth(_) => {
            let kind = cfg
                .experiment
                .get_or_insert_with(|| "visual".into())
                .clone();
            match kind.as_str() {
                "visual" => vec![growth_visual(&p, &list_or(&mut cfg.t, half_steps(0.5, 8.0)))?],
                "busemann" => {
                    let default_backend = if p.field == FieldTag::Real { "spectral" } else { "chart" };
                    let backend = cfg.backend.get_or_insert_with(|| default_backend.into()).clone();
                    match backend.as_str() {
                        "spectral" => {
                            vec![growth_busemann(&p, &list_or(&mut cfg.t, half_steps(0.0, 8.0)), &BusemannBackend::Spectral)?]
                        }
                        "chart" => {
                            let ts = list_or(&mut cfg.t, (0..=6).map(f64::from).collect());
                            let grid = chart_grid(cfg, &p, su_chart())?;
                            vec![growth_busemann(&p, &ts, &BusemannBackend::Chart(grid))?]
                        }
                        other => bail!("--backend: unknown backend `{other}` (expected spectral or chart)"),
                    }
                }
                other => bail!("--experiment: unknown growth experiment `{other}` (expected visual or busemann)"),
            }
        }
        Command::Witness(_) => {
            let (ks, k0, grid) = witness_defaults(&p)?;
            let ks = list_or(&mut cfg.k, ks);
            let k0 = *cfg.log_radius.get_or_insert(k0);
            let grid = chart_grid(cfg, &p, grid)?;
            vec![witness_sequence(&p, &ks, k0, &grid)?]
        }
        Command::Integrability(_) => {
            let s_default: Vec<f64> = [0.0, 0.5, 1.0, 2.0]
                .into_iter()
                .filter(|s| *s <= r)
                .collect();
            let s = list_or(&mut cfg.s, s_default);
            let cutoffs = list_or(&mut cfg.cutoffs, vec![1e-2, 1e-3, 1e-4, 1e-6, 1e-8]);
            vec![integrability_scan(&p, &s, &cutoffs, seed)?]
        }
        Command::UniformBounded(_) => {
            let ts = list_or(&mut cfg.t, (0..=6).map(f64::from).collect());
            let n_phi = *cfg.samples.get_or_insert(16);
            let n_k = *cfg.k_samples.get_or_insert(8);
            vec![uniform_boundedness_sample(&p, &ts, n_phi, n_k, seed)?]
        }
        Command::LrProperness(_) => {
            let sphere = p.field == FieldTag::Real;
            let ts = list_or(
                &mut cfg.t,
                (1..=if sphere { 8 } else { 6 }).map(f64::from).collect(),
            );
            let cutoffs = list_or(&mut cfg.cutoffs, vec![1e-2, 1e-3, 1e-4]);
            let default = if sphere {
                ChartGrid::isotropic(&p, 1.0, 3)
            } else {
                su_chart()
            };
            let grid = chart_grid(cfg, &p, default)?;
            vec![lr_properness(&p, &ts, &cutoffs, &grid)?]
        }
        Command::NormEquivalence(_) => {
            let bumps = *cfg.samples.get_or_insert(20);
            let grid = chart_grid(
                cfg,
                &p,
                ChartGrid {
                    half_widths: vec![4.0],
                    m: 513,
                },
            )?;
            vec![norm_equivalence_check(&p, bumps, &grid)?]
        }
        Command::LpIsometry(_) => {
            let n_h = *cfg.samples.get_or_insert(10);
            let lambda = *cfg.lambda.get_or_insert(0.0);
            vec![lp_isometry_check(&p, n_h, lambda, seed)?]
        }
        Command::CowlingScan(_) => {
            let xi = list_or(&mut cfg.xi, vec![r / 2.0, r]);
            let ms = sizes(cfg.m_list.get_or_insert(NumList(vec![101.0, 201.0, 401.0])))?;
            let l = list_or(&mut cfg.grid_l, vec![2.0]);
            if l.len() != 1 {
                bail!("--grid-L: cowling-scan takes a single half width");
            }
            vec![cowling_operator_scan(&p, &xi, &ms, l[0])?]
        }
        Command::List => unreachable!("handled before dispatch"),
    };
    Ok(reports)
}

fn emit(reports: &[CocycleReport], command: &str, cfg: &Settings, json: bool) -> Result<()> {
    let echo = serde_json::to_value(cfg)?;
    let values = reports
        .iter()
        .map(|r| {
            let mut v = r.to_json(Some(&echo))?;
            v["command"] = command.into();
            Ok(v)
        })
        .collect::<Result<Vec<_>>>()?;
    if let Some(dir) = &cfg.out {
        std::fs::create_dir_all(dir).with_context(|| format!("cannot create {}", dir.display()))?;
        for (r, v) in reports.iter().zip(&values) {
            let base = dir.join(&r.experiment);
            r.write_csv(&base.with_extension("csv"))?;
            std::fs::write(
                base.with_extension("json"),
                serde_json::to_string_pretty(v)?,
            )?;
        }
    }
    let text = if json {
        let doc = if values.len() == 1 {
            values[0].clone()
        } else {
            serde_json::Value::Array(values)
        };
        serde_json::to_string_pretty(&doc)? + "\n"
    } else {
        reports.iter().map(CocycleReport::summary).collect()
    };
    write_stdout(&text)
}

/// Writes to stdout; a closed pipe is not an error.
fn write_stdout(text: &str) -> Result<()> {
    use std::io::Write;
    match std::io::stdout().lock().write_all(text.as_bytes()) {
        Err(e) if e.kind() == std::io::ErrorKind::BrokenPipe => Ok(()),
        other => Ok(other?),
    }
}

fn command_name(c: &Command) -> &'static str {
    match c {
        Command::VerifyGroup(_) => "verify-group",
        Command::VerifyCocycle(_) => "verify-cocycle",
        Command::Growth(_) => "growth",
        Command::Witness(_) => "witness",
        Command::Integrability(_) => "integrability",
        Command::UniformBounded(_) => "uniform-bounded",
        Command::LrProperness(_) => "lr-properness",
        Command::NormEquivalence(_) => "norm-equivalence",
        Command::LpIsometry(_) => "lp-isometry",
        Command::CowlingScan(_) => "cowling-scan",
        Command::List => "list",
    }
}

fn cache_dir(flag: Option<&Path>, file: Option<&Path>) -> Option<PathBuf> {
    flag.map(Path::to_path_buf)
        .or_else(|| std::env::var_os("CACHE_DIR").map(PathBuf::from))
        .or_else(|| file.map(Path::to_path_buf))
}

/// Ok(true) when every criterion passed.
fn run(cli: &Cli) -> Result<bool> {
    let args = match &cli.command {
        Command::List => {
            write_stdout(&list_table())?;
            return Ok(true);
        }
        Command::VerifyGroup(a)
        | Command::VerifyCocycle(a)
        | Command::Growth(a)
        | Command::Witness(a)
        | Command::Integrability(a)
        | Command::UniformBounded(a)
        | Command::LrProperness(a)
        | Command::NormEquivalence(a)
        | Command::LpIsometry(a)
        | Command::CowlingScan(a) => a,
    };
    let file = match &args.config {
        Some(path) => Settings::load(path)?,
        None => Settings::default(),
    };
    let mut cfg = file.clone().overlay(&args.settings);
    cfg.cache = cache_dir(args.settings.cache.as_deref(), file.cache.as_deref());
    if let Some(dir) = &cfg.cache {
        std::fs::create_dir_all(dir)
            .with_context(|| format!("cannot create cache directory {}", dir.display()))?;
    }
    set_spectrum_cache(cfg.cache.clone());
    let name = command_name(&cli.command);
    let reports = run_command(&cli.command, &mut cfg).map_err(|e| anyhow!("{name}: {e:#}"))?;
    emit(&reports, name, &cfg, args.json)?;
    Ok(reports.iter().all(CocycleReport::passed))
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(&cli) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(2),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(1)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn list_is_sorted() {
        let names: Vec<&str> = EXPERIMENTS.iter().map(|(n, _)| *n).collect();
        let mut sorted = names.clone();
        sorted.sort();
        assert_eq!(names, sorted);
    }

    #[test]
    fn cli_parses() {
        use clap::CommandFactory;
        Cli::command().debug_assert();
    }
}
