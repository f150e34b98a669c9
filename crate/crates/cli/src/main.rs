//! `casimir`: sphere-sphere Casimir forces beyond PFA from the command line.

use std::fs::File;
use std::io::BufWriter;
use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use casimir_core::assembly::{deviation, ModelSpec, Prescription};
use casimir_core::bispherical::{pc_classical, tm_classical, ClassicalResult};
use casimir_core::de_positive::{kappa_compute, tables_csv};
use casimir_core::lifshitz::{free_energy_pp, gee_pp, pressure_pp, LifshitzOptions, ModeFilter};
use casimir_core::plasma::{plasma_classical_total, write_log_dets, PlasmaFrequencies, TePlasma};
use casimir_core::sweep::{render, run_sweep, Record, SweepConfig, SweepPoint};
use casimir_core::units::{
    force_to_newton, gradient_to_newton_per_metre, EV_PER_UM2_IN_J_PER_M2, EV_PER_UM3_IN_PA,
};
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Map, Value};

#[derive(Parser)]
#[command(
    name = "casimir",
    version,
    about = "Finite-temperature Casimir force between two spheres beyond PFA"
)]
struct Cli {
    /// Log progress and fallbacks (repeat for more detail).
    #[arg(short, long, action = clap::ArgAction::Count, global = true)]
    verbose: u8,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Plane-parallel free energy, pressure and DE coefficients.
    Pp(PpArgs),
    /// Zero-frequency (classical) term only.
    Classical {
        #[command(flatten)]
        model: ModelArgs,
        /// Write per-m log-determinants of the plasma TE term (little-endian u64 m, u64 dim, f64 value).
        #[arg(long)]
        dump: Option<PathBuf>,
    },
    /// Force, gradient and deviations from PFA at one gap.
    Deviation(ModelArgs),
    /// Sweep of separations driven by a JSON config.
    Sweep(ModelArgs),
    /// Embedded derivative-expansion tables as CSV.
    Tables,
}

#[derive(Clone, Copy, ValueEnum)]
enum PrescriptionArg {
    Drude,
    Plasma,
    Pc,
}

impl PrescriptionArg {
    fn key(self) -> &'static str {
        match self {
            PrescriptionArg::Drude => "drude",
            PrescriptionArg::Plasma => "plasma",
            PrescriptionArg::Pc => "perfect_conductor",
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum BoundaryArg {
    Grounded,
    Isolated,
}

#[derive(Clone, Copy, ValueEnum)]
enum FormatArg {
    Csv,
    Json,
}

#[derive(Args)]
struct PpArgs {
    /// Gap (µm).
    #[arg(long)]
    gap: f64,
    #[arg(long, default_value_t = 300.0)]
    temperature: f64,
    #[arg(long, value_enum, default_value = "drude")]
    prescription: PrescriptionArg,
    /// ħω_p (eV).
    #[arg(long, default_value_t = 9.0)]
    omega_p: f64,
    /// ħγ (eV), Drude only.
    #[arg(long, default_value_t = 0.035)]
    gamma: f64,
}

/// Flags that override the keys of a JSON config.
#[derive(Args)]
struct ModelArgs {
    /// JSON configuration file.
    #[arg(long)]
    config: Option<PathBuf>,
    /// Radius of sphere 1 (µm).
    #[arg(long)]
    r1: Option<f64>,
    /// Radius of sphere 2 (µm).
    #[arg(long, conflicts_with = "plate")]
    r2: Option<f64>,
    /// Replace sphere 2 by a plane.
    #[arg(long)]
    plate: bool,
    /// Gap(s) in µm; replaces any sweep range.
    #[arg(long, num_args = 1.., value_delimiter = ',')]
    gap: Option<Vec<f64>>,
    /// Sweep range `start:stop:points[:log]` (µm).
    #[arg(long, conflicts_with = "gap")]
    sweep: Option<String>,
    #[arg(long)]
    temperature: Option<f64>,
    #[arg(long, value_enum)]
    prescription: Option<PrescriptionArg>,
    #[arg(long, value_enum)]
    boundary: Option<BoundaryArg>,
    /// ħω_p (eV), one value or two comma-separated values per sphere.
    #[arg(long, num_args = 1..=2, value_delimiter = ',')]
    omega_p: Option<Vec<f64>>,
    /// ħγ (eV).
    #[arg(long)]
    gamma: Option<f64>,
    /// `table` or `computed`.
    #[arg(long)]
    kappa_source: Option<String>,
    /// `auto`, `exact` or `pc_substitute`.
    #[arg(long)]
    plasma_classical: Option<String>,
    /// `auto`, `off` or blocks as `P1xP2`.
    #[arg(long)]
    decimation: Option<String>,
    /// Strip half-width in units of Δ₂; 0 keeps the full matrix.
    #[arg(long)]
    strip_width: Option<f64>,
    /// Bispherical multipole cutoff.
    #[arg(long)]
    l_max: Option<usize>,
    #[arg(long)]
    rel_tol: Option<f64>,
    #[arg(long, value_enum)]
    format: Option<FormatArg>,
    /// Output file (standard output otherwise).
    #[arg(long)]
    output: Option<PathBuf>,
}

fn object<'a>(root: &'a mut Map<String, Value>, key: &str) -> &'a mut Map<String, Value> {
    let v = root.entry(key).or_insert_with(|| json!({}));
    if !v.is_object() {
        *v = json!({});
    }
    v.as_object_mut().expect("object")
}

fn parse_sweep(s: &str) -> Result<Value> {
    let parts: Vec<&str> = s.split(':').collect();
    if !(3..=4).contains(&parts.len()) || (parts.len() == 4 && parts[3] != "log") {
        bail!("--sweep expects start:stop:points[:log], got {s:?}");
    }
    Ok(json!({
        "start_um": parts[0].parse::<f64>()?,
        "stop_um": parts[1].parse::<f64>()?,
        "points": parts[2].parse::<usize>()?,
        "log": parts.len() == 4,
    }))
}

fn parse_decimation(s: &str) -> Result<Value> {
    match s {
        "auto" | "off" => Ok(json!(s)),
        _ => {
            let (a, b) = s
                .split_once(['x', 'X'])
                .with_context(|| format!("--decimation expects auto, off or P1xP2, got {s:?}"))?;
            Ok(json!({"p1": a.parse::<usize>()?, "p2": b.parse::<usize>()?}))
        }
    }
}

impl ModelArgs {
    /// Config file (if any) with every given flag written over it.
    fn resolve(&self) -> Result<SweepConfig> {
        let mut root = match &self.config {
            Some(p) => {
                let text = std::fs::read_to_string(p)
                    .with_context(|| format!("reading {}", p.display()))?;
                serde_json::from_str(&text).with_context(|| format!("parsing {}", p.display()))?
            }
            None => json!({}),
        };
        let Some(map) = root.as_object_mut() else {
            bail!("the configuration must be a JSON object");
        };
        let mut set = |k: &str, v: Value| {
            map.insert(k.to_string(), v);
        };
        if let Some(v) = self.r1 {
            set("R1_um", json!(v));
        }
        if let Some(v) = self.r2 {
            set("R2_um", json!(v));
        }
        if self.plate {
            set("R2_um", Value::Null);
        }
        if let Some(v) = self.temperature {
            set("temperature_K", json!(v));
        }
        if let Some(v) = self.prescription {
            set("prescription", json!(v.key()));
        }
        if let Some(v) = self.boundary {
            set(
                "boundary",
                json!(match v {
                    BoundaryArg::Grounded => "grounded",
                    BoundaryArg::Isolated => "isolated",
                }),
            );
        }
        if let Some(v) = &self.omega_p {
            set(
                "omega_p_eV",
                if v.len() == 1 { json!(v[0]) } else { json!(v) },
            );
        }
        if let Some(v) = self.gamma {
            set("gamma_eV", json!(v));
        }
        if let Some(v) = &self.kappa_source {
            set("kappa_source", json!(v));
        }
        if let Some(v) = &self.plasma_classical {
            set("plasma_classical", json!(v));
        }
        if let Some(v) = &self.decimation {
            set("decimation", parse_decimation(v)?);
        }
        if let Some(v) = &self.gap {
            map.remove("sweep");
            map.insert(
                "gap_um".into(),
                if v.len() == 1 { json!(v[0]) } else { json!(v) },
            );
        }
        if let Some(s) = &self.sweep {
            map.remove("gap_um");
            map.insert("sweep".into(), parse_sweep(s)?);
        }
        if let Some(v) = self.strip_width {
            object(map, "truncation").insert("strip_width".into(), json!(v));
        }
        if let Some(v) = self.l_max {
            object(map, "truncation").insert("l_max".into(), json!(v));
        }
        if let Some(v) = self.rel_tol {
            object(map, "tolerances").insert("rel_tol".into(), json!(v));
        }
        if let Some(v) = self.format {
            object(map, "output").insert(
                "format".into(),
                json!(match v {
                    FormatArg::Csv => "csv",
                    FormatArg::Json => "json",
                }),
            );
        }
        if let Some(v) = &self.output {
            object(map, "output").insert("path".into(), json!(v));
        }
        serde_json::from_value(root).context("invalid configuration")
    }
}

fn single_gap(cfg: &SweepConfig) -> Result<f64> {
    match cfg.gaps()?.as_slice() {
        [a] => Ok(*a),
        g => bail!("this command needs exactly one gap, got {}", g.len()),
    }
}

fn emit(text: &str, path: Option<&PathBuf>) -> Result<()> {
    match path {
        Some(p) => std::fs::write(p, text).with_context(|| format!("writing {}", p.display())),
        None => {
            println!("{}", text.trim_end());
            Ok(())
        }
    }
}

fn classical_json(c: &ClassicalResult) -> Value {
    json!({
        "energy_eV": c.energy,
        "force_N": force_to_newton(c.force),
        "gradient_N_per_m": gradient_to_newton_per_metre(c.gradient),
        "l_max": c.l_max,
        "m_max": c.m_max,
        "converged": c.converged,
    })
}

fn model_for_pp(a: &PpArgs) -> ModelSpec {
    let prescription = match a.prescription {
        PrescriptionArg::Drude => Prescription::Drude,
        PrescriptionArg::Plasma => Prescription::Plasma,
        PrescriptionArg::Pc => Prescription::PerfectConductor,
    };
    ModelSpec {
        omega_p: PlasmaFrequencies::equal(a.omega_p),
        gamma_ev: a.gamma,
        temperature_k: a.temperature,
        ..ModelSpec::gold(prescription, casimir_core::bispherical::Boundary::Grounded)
    }
}

fn run_pp(a: &PpArgs) -> Result<()> {
    let model = model_for_pp(a);
    let (m1, m2) = model.permittivities()?;
    let o = LifshitzOptions::default();
    let t = a.temperature;
    let mut parts = Map::new();
    for (name, f) in [
        ("n0", ModeFilter::ZERO),
        ("npos", ModeFilter::POSITIVE),
        ("all", ModeFilter::ALL),
    ] {
        let e = free_energy_pp(a.gap, t, &m1, &m2, f, &o)?.value;
        let p = pressure_pp(a.gap, t, &m1, &m2, f, &o)?.value;
        parts.insert(
            name.into(),
            json!({
                "free_energy_eV_per_um2": e,
                "free_energy_J_per_m2": e * EV_PER_UM2_IN_J_PER_M2,
                "pressure_Pa": p * EV_PER_UM3_IN_PA,
            }),
        );
    }
    let g = gee_pp(a.gap, t, &m1, &m2, &o)?.value;
    let (kappa, kappa_tilde) = kappa_compute(a.gap, t, &m1, &m2, &o)?;
    let out = json!({
        "gap_um": a.gap,
        "temperature_K": t,
        "modes": parts,
        "gee_npos_eV_per_um": g,
        "kappa": kappa,
        "kappa_tilde": kappa_tilde,
    });
    emit(&serde_json::to_string_pretty(&out)?, None)
}

fn run_classical(args: &ModelArgs, dump: Option<&PathBuf>) -> Result<()> {
    let cfg = args.resolve()?;
    let a = single_gap(&cfg)?;
    let geom = cfg.geometry(a)?;
    let model = cfg.model();
    model.validate()?;
    let o = cfg.options();
    let t = model.temperature_k;
    let (total, tm, te) = match model.prescription {
        Prescription::Drude => {
            let tm = tm_classical(&geom, t, model.boundary, &o.bispherical)?;
            (tm, tm, None)
        }
        Prescription::PerfectConductor => {
            let r = pc_classical(&geom, t, model.boundary, &o.bispherical)?;
            (r.total, r.tm, Some(r.te))
        }
        Prescription::Plasma => {
            let r = plasma_classical_total(
                &geom,
                t,
                model.omega_p,
                model.boundary,
                &o.plasma,
                &o.bispherical,
            )?;
            (r.total, r.tm, Some(r.te))
        }
    };
    if let Some(path) = dump {
        if model.prescription != Prescription::Plasma {
            bail!("--dump applies to the plasma prescription only");
        }
        let terms = TePlasma::new(&geom, model.omega_p, &o.plasma)?.log_dets(a)?;
        write_log_dets(BufWriter::new(File::create(path)?), &terms)?;
    }
    let out = json!({
        "gap_um": a,
        "total": classical_json(&total),
        "tm": classical_json(&tm),
        "te": te.as_ref().map(classical_json),
    });
    emit(
        &serde_json::to_string_pretty(&out)?,
        cfg.output.path.as_ref(),
    )
}

fn run_deviation(args: &ModelArgs) -> Result<()> {
    let cfg = args.resolve()?;
    let a = single_gap(&cfg)?;
    let r = deviation(&cfg.geometry(a)?, &cfg.model(), &cfg.options())?;
    let si = Record::from(&SweepPoint {
        a_um: a,
        outcome: Ok(r),
    });
    let out = json!({ "result": r, "si": si });
    emit(
        &serde_json::to_string_pretty(&out)?,
        cfg.output.path.as_ref(),
    )
}

/// Returns whether every point succeeded.
fn run_sweep_cmd(args: &ModelArgs) -> Result<bool> {
    let cfg = args.resolve()?;
    let points = run_sweep(&cfg)?;
    emit(
        &render(&points, cfg.output.format)?,
        cfg.output.path.as_ref(),
    )?;
    let failed = points.iter().filter(|p| p.outcome.is_err()).count();
    if failed > 0 {
        log::error!("{failed} of {} points failed", points.len());
    }
    Ok(failed == 0)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let level = match cli.verbose {
        0 => "warn",
        1 => "info",
        _ => "debug",
    };
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or(level)).init();
    let result = match &cli.command {
        Command::Pp(a) => run_pp(a).map(|_| true),
        Command::Classical { model, dump } => run_classical(model, dump.as_ref()).map(|_| true),
        Command::Deviation(a) => run_deviation(a).map(|_| true),
        Command::Sweep(a) => run_sweep_cmd(a),
        Command::Tables => emit(&tables_csv(), None).map(|_| true),
    };
    match result {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(2),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::FAILURE
        }
    }
}
