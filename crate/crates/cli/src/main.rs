//! `ceo`: simulate, classify and scan complexified exotic oscillator orbits,
//! regenerate the reference figures, and check the constraint algebra.
//!
//! Exit codes: 2 bad flags, 3 initial-condition failure, 4 integration or
//! classification failure, 5 algebra check failure.

mod figures;
mod output;
mod svg;

use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{anyhow, Context};
use ceo_core::analysis::{self, Classification, ClassifyConfig, ScanConfig, TransitionKind};
use ceo_core::brackets::{self, AlgebraConfig, Observable};
use ceo_core::initcond::{self, Component, EnergySign, Family, IcRequest, InitialCondition};
use ceo_core::{integrate_1d, IntegrationError, IntegratorConfig, Params, State1D, Trajectory};
use clap::error::ErrorKind;
use clap::{Args, CommandFactory, Parser, Subcommand, ValueEnum};
use rayon::prelude::*;
use serde::Serialize;

use crate::output::Manifest;

#[derive(Parser, Debug)]
#[command(
    name = "ceo",
    version,
    about = "Complexified exotic oscillator toolkit"
)]
struct Cli {
    /// Seed for randomized checks; recorded in every manifest.
    #[arg(long, env = "CEO_SEED", default_value_t = 20240101, global = true)]
    seed: u64,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Integrate one orbit and write `t,x,p,y,q,H,G` CSV plus a manifest.
    #[command(allow_negative_numbers = true)]
    Simulate {
        #[command(flatten)]
        model: ModelArgs,
        #[command(flatten)]
        integ: IntegratorArgs,
        #[command(flatten)]
        out: OutputArgs,
    },
    /// Integrate one orbit and report closure and PT-symmetry.
    #[command(allow_negative_numbers = true)]
    Classify {
        #[command(flatten)]
        model: ModelArgs,
        #[command(flatten)]
        integ: IntegratorArgs,
        #[command(flatten)]
        thresholds: ThresholdArgs,
    },
    /// Scan b at fixed c and bracket changes of orbit character.
    #[command(allow_negative_numbers = true)]
    Sweep {
        #[arg(long)]
        c: f64,
        #[arg(long = "b-min")]
        b_min: f64,
        #[arg(long = "b-max")]
        b_max: f64,
        /// Number of evenly spaced samples (at least 3).
        #[arg(long, value_parser = clap::value_parser!(u32).range(3..))]
        n: u32,
        #[arg(long, value_enum, ignore_case = true, default_value = "B")]
        family: FamilyArg,
        #[arg(long, default_value_t = 1.0)]
        a: f64,
        #[arg(long = "E", default_value_t = 0.5)]
        energy: f64,
        /// Bisection stops below this bracket width.
        #[arg(long, default_value_t = 1e-4)]
        width: f64,
        /// Worker threads (0: one per core).
        #[arg(long, default_value_t = 0)]
        jobs: usize,
        #[command(flatten)]
        integ: IntegratorArgs,
        #[command(flatten)]
        thresholds: ThresholdArgs,
        #[command(flatten)]
        out: OutputArgs,
    },
    /// Regenerate a figure as SVG plus one CSV per curve.
    Figure {
        #[arg(value_parser = clap::builder::PossibleValuesParser::new(figures::ids()))]
        id: String,
        #[command(flatten)]
        integ: IntegratorArgs,
        #[command(flatten)]
        out: OutputArgs,
    },
    /// Check {G,H} = 0, {L_i,H} = 0 and {L_i,L_j} = ε_ijk L_k at random states.
    #[command(allow_negative_numbers = true)]
    Verify {
        #[arg(long, default_value_t = 1000)]
        trials: usize,
        #[arg(long, default_value_t = 3)]
        dim: usize,
        #[arg(long, default_value_t = 1.0)]
        a: f64,
        #[arg(long, default_value_t = 0.8)]
        b: f64,
        /// Finite-difference gradients throughout (tolerance 1e-7).
        #[arg(long)]
        fd: bool,
        /// Swap in a Hamiltonian with a flipped sign (self-test of the checker).
        #[arg(long, hide = true)]
        inject_fault: bool,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum FamilyArg {
    #[value(name = "A")]
    A,
    #[value(name = "B")]
    B,
    #[value(name = "custom")]
    Custom,
}

impl From<FamilyArg> for Family {
    fn from(f: FamilyArg) -> Self {
        match f {
            FamilyArg::A => Family::A,
            FamilyArg::B => Family::B,
            FamilyArg::Custom => Family::Custom,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum ComponentArg {
    X,
    P,
    Y,
    Q,
}

impl From<ComponentArg> for Component {
    fn from(c: ComponentArg) -> Self {
        match c {
            ComponentArg::X => Component::X,
            ComponentArg::P => Component::P,
            ComponentArg::Y => Component::Y,
            ComponentArg::Q => Component::Q,
        }
    }
}

#[derive(Args, Debug, Clone)]
struct ModelArgs {
    #[arg(long, default_value_t = 1.0)]
    a: f64,
    #[arg(long, default_value_t = 0.0)]
    b: f64,
    /// Energy; families A and B need E = ±0.5.
    #[arg(long = "E", default_value_t = 0.5)]
    energy: f64,
    #[arg(long, value_enum, ignore_case = true, default_value = "A")]
    family: FamilyArg,
    /// Free constant of families A and B.
    #[arg(long)]
    c: Option<f64>,
    /// Initial state `x,p,y,q` for the custom family.
    #[arg(
        long,
        value_delimiter = ',',
        value_name = "X,P,Y,Q",
        allow_hyphen_values = true
    )]
    state: Option<Vec<f64>>,
    /// Components the solver may move to reach H = E, G = 0 (one or two).
    #[arg(long, value_enum, value_delimiter = ',', ignore_case = true)]
    solve: Vec<ComponentArg>,
}

#[derive(Args, Debug, Clone)]
struct IntegratorArgs {
    /// End time (default 20 for simulate/figure, 100 for classify/sweep).
    #[arg(long = "t-end")]
    t_end: Option<f64>,
    #[arg(long = "rel-tol", default_value_t = 1e-10)]
    rel_tol: f64,
    #[arg(long = "abs-tol", default_value_t = 1e-12)]
    abs_tol: f64,
    #[arg(long = "max-step", default_value_t = 0.1)]
    max_step: f64,
    /// Output sample spacing.
    #[arg(long, default_value_t = 0.01)]
    dt: f64,
    /// Components beyond this magnitude count as a blow-up.
    #[arg(long = "escape-bound", default_value_t = 1e8)]
    escape_bound: f64,
}

impl IntegratorArgs {
    fn config(&self, default_t_end: f64) -> IntegratorConfig {
        IntegratorConfig {
            rel_tol: self.rel_tol,
            abs_tol: self.abs_tol,
            max_step: self.max_step,
            t_end: self.t_end.unwrap_or(default_t_end),
            sample_interval: self.dt,
            escape_bound: self.escape_bound,
            ..IntegratorConfig::default()
        }
    }
}

#[derive(Args, Debug, Clone)]
struct ThresholdArgs {
    #[arg(long = "closure-tol", default_value_t = 1e-6)]
    closure_tol: f64,
    #[arg(long = "pt-tol", default_value_t = 0.02)]
    pt_tol: f64,
    #[arg(long = "spiral-tol", default_value_t = 0.02)]
    spiral_tol: f64,
}

impl ThresholdArgs {
    fn config(&self) -> ClassifyConfig {
        ClassifyConfig {
            closure_tol: self.closure_tol,
            pt_tol: self.pt_tol,
            spiral_tol: self.spiral_tol,
            ..ClassifyConfig::default()
        }
    }
}

#[derive(Args, Debug, Clone)]
struct OutputArgs {
    #[arg(long = "out-dir", default_value = ".")]
    out_dir: PathBuf,
    /// File stem for the outputs.
    #[arg(long)]
    name: Option<String>,
}

impl OutputArgs {
    fn prepare(&self, default_name: &str) -> Result<(PathBuf, String), Failure> {
        fs::create_dir_all(&self.out_dir)
            .with_context(|| format!("creating {}", self.out_dir.display()))
            .map_err(Failure::io)?;
        Ok((
            self.out_dir.clone(),
            self.name
                .clone()
                .unwrap_or_else(|| default_name.to_string()),
        ))
    }
}

#[derive(Debug)]
struct Failure {
    code: u8,
    error: anyhow::Error,
}

impl Failure {
    fn ic(e: impl Into<anyhow::Error>) -> Self {
        Self {
            code: 3,
            error: e.into(),
        }
    }
    fn run(e: impl Into<anyhow::Error>) -> Self {
        Self {
            code: 4,
            error: e.into(),
        }
    }
    fn io(e: anyhow::Error) -> Self {
        Self { code: 1, error: e }
    }
}

fn usage_error(subcommand: &str, msg: &str) -> ! {
    let mut cmd = Cli::command();
    cmd.build();
    let sub = cmd
        .find_subcommand_mut(subcommand)
        .expect("known subcommand");
    sub.error(ErrorKind::MissingRequiredArgument, msg).exit()
}

fn record_params(m: &mut Manifest, params: Params, energy: f64) {
    m.set("a", params.a);
    m.set("b", params.b);
    m.set("E", energy);
}

fn record_integrator(m: &mut Manifest, cfg: &IntegratorConfig) {
    m.set("rel_tol", format!("{:e}", cfg.rel_tol));
    m.set("abs_tol", format!("{:e}", cfg.abs_tol));
    m.set("max_step", cfg.max_step);
    m.set("t_end", cfg.t_end);
    m.set("sample_interval", cfg.sample_interval);
    m.set("escape_bound", format!("{:e}", cfg.escape_bound));
}

fn record_ic(m: &mut Manifest, ic: &InitialCondition) {
    let s = ic.state;
    m.set(
        "state0",
        format!("{:.16e},{:.16e},{:.16e},{:.16e}", s.x, s.p, s.y, s.q),
    );
    m.set_f64("ic_h_residual", ic.h_residual);
    m.set_f64("ic_g_residual", ic.g_residual);
}

fn record_drift(m: &mut Manifest, traj: &Trajectory) {
    m.set("samples", traj.len());
    m.set_f64("max_h_drift", traj.max_h_drift);
    m.set_f64("max_g_drift", traj.max_g_drift);
}

/// Builds the initial condition described by the model flags.
fn build_ic(command: &str, model: &ModelArgs) -> Result<(Params, InitialCondition), Failure> {
    let params = Params::new(model.a, model.b);
    let family = Family::from(model.family);
    let base = match family {
        Family::A | Family::B => {
            let Some(c) = model.c else {
                usage_error(command, "--c is required for family A and B");
            };
            let sign = EnergySign::from_energy(model.energy).ok_or_else(|| {
                Failure::ic(anyhow!(
                    "families A and B need E = 0.5 or E = -0.5, got {}",
                    model.energy
                ))
            })?;
            let ic = if family == Family::A {
                initcond::ic_family_a(c, params, sign)
            } else {
                initcond::ic_family_b(c, params, sign)
            };
            ic.map_err(Failure::ic)?
        }
        Family::Custom => {
            let Some(v) = model.state.as_ref().filter(|v| v.len() == 4) else {
                usage_error(
                    command,
                    "--state x,p,y,q (four values) is required for the custom family",
                );
            };
            InitialCondition::audit(params, State1D::from_slice(v), model.energy)
        }
    };
    if model.solve.is_empty() {
        return Ok((params, base));
    }
    let free = model.solve.iter().map(|&c| c.into()).collect();
    let req = IcRequest::new(params, model.energy, base.state, free);
    let solved = initcond::ic_solve(&req).map_err(Failure::ic)?;
    Ok((params, solved.ic))
}

fn record_model(m: &mut Manifest, model: &ModelArgs, params: Params) {
    record_params(m, params, model.energy);
    m.set("family", format!("{:?}", Family::from(model.family)));
    m.set("c", model.c.map_or_else(String::new, |c| c.to_string()));
    m.set(
        "solve",
        model
            .solve
            .iter()
            .map(|c| format!("{c:?}").to_lowercase())
            .collect::<Vec<_>>()
            .join(","),
    );
}

fn cmd_simulate(
    seed: u64,
    model: &ModelArgs,
    integ: &IntegratorArgs,
    out: &OutputArgs,
) -> Result<(), Failure> {
    let (params, ic) = build_ic("simulate", model)?;
    let cfg = integ.config(20.0);
    let (dir, name) = out.prepare("simulate")?;
    let mut m = Manifest::new("simulate");
    record_model(&mut m, model, params);
    record_integrator(&mut m, &cfg);
    m.set("seed", seed);
    record_ic(&mut m, &ic);

    let csv_name = format!("{name}.csv");
    let manifest_name = format!("{name}.manifest");
    match integrate_1d(params, ic.state, &cfg) {
        Ok(traj) => {
            output::write_output(
                &dir,
                &csv_name,
                &output::trajectory_csv(params, &traj),
                &mut m,
            )
            .map_err(Failure::io)?;
            record_drift(&mut m, &traj);
            m.set("status", "ok");
            output::write_manifest(&dir, &manifest_name, &m).map_err(Failure::io)?;
            println!("wrote {}", dir.join(&csv_name).display());
            Ok(())
        }
        Err(e) => {
            if let Some(partial) = e.partial() {
                output::write_output(
                    &dir,
                    &csv_name,
                    &output::trajectory_csv(params, partial),
                    &mut m,
                )
                .map_err(Failure::io)?;
                record_drift(&mut m, partial);
            }
            m.set("status", "failed");
            m.set("error", &e);
            output::write_manifest(&dir, &manifest_name, &m).map_err(Failure::io)?;
            Err(Failure::run(e))
        }
    }
}

#[derive(Serialize)]
struct ClassifyRecord<'a> {
    a: f64,
    b: f64,
    energy: f64,
    family: Family,
    c: Option<f64>,
    t_end: f64,
    #[serde(flatten)]
    classification: &'a Classification,
    note: Option<&'static str>,
}

fn classification_line(cl: &Classification) -> String {
    let period = cl
        .period
        .map_or_else(|| "-".to_string(), |p| format!("{p:.4}"));
    format!(
        "closed={} period≈{period} pt={} closure_residual={:.3e} symmetry_residual={:.3e} spiral={} escaped={} fixed_point={}",
        cl.closed,
        cl.pt_symmetric,
        cl.closure_residual,
        cl.symmetry_residual,
        cl.flags.spiral,
        cl.flags.escaped,
        cl.flags.fixed_point
    )
}

fn cmd_classify(
    model: &ModelArgs,
    integ: &IntegratorArgs,
    thresholds: &ThresholdArgs,
) -> Result<(), Failure> {
    let (params, ic) = build_ic("classify", model)?;
    let cfg = integ.config(100.0);
    let outcome = integrate_1d(params, ic.state, &cfg);
    let cl = analysis::classify_outcome(&outcome, &thresholds.config())
        .map_err(|e| Failure::run(anyhow!(e)))?;
    println!("{}", classification_line(&cl));
    let record = ClassifyRecord {
        a: params.a,
        b: params.b,
        energy: model.energy,
        family: model.family.into(),
        c: model.c,
        t_end: cfg.t_end,
        classification: &cl,
        note: cl.note(),
    };
    println!("{}", serde_json::to_string(&record).map_err(Failure::run)?);
    Ok(())
}

fn opt_bool(v: Option<bool>) -> String {
    v.map_or_else(String::new, |b| b.to_string())
}

const SWEEP_HEADER: &str =
    "kind,b,closed,pt_symmetric,closure_residual,symmetry_residual,spiral,escaped,fixed_point,b_lo,b_hi,transition,error";

fn sweep_csv(scan: &analysis::ScanResult) -> String {
    let mut out = format!("{SWEEP_HEADER}\n");
    for s in &scan.samples {
        match &s.outcome {
            Ok(c) => out.push_str(&format!(
                "sample,{:.16e},{},{},{:.16e},{:.16e},{},{},{},,,,\n",
                s.value,
                c.closed,
                c.pt_symmetric,
                c.closure_residual,
                c.symmetry_residual,
                c.flags.spiral,
                c.flags.escaped,
                c.flags.fixed_point
            )),
            Err(e) => out.push_str(&format!(
                "sample,{:.16e},,,,,,,,,,,\"{}\"\n",
                s.value,
                e.replace('"', "'")
            )),
        }
    }
    for t in &scan.transitions {
        let kind = match t.kind {
            TransitionKind::PtSymmetry => "pt_symmetric",
            TransitionKind::Closure => "closed",
        };
        let (closed, pt) = match t.kind {
            TransitionKind::PtSymmetry => (None, Some(t.value_at_lo)),
            TransitionKind::Closure => (Some(t.value_at_lo), None),
        };
        out.push_str(&format!(
            "transition,{:.16e},{},{},,,,,,{:.16e},{:.16e},{kind}:{}->{},\n",
            0.5 * (t.lo + t.hi),
            opt_bool(closed),
            opt_bool(pt),
            t.lo,
            t.hi,
            t.value_at_lo,
            t.value_at_hi
        ));
    }
    out
}

#[allow(clippy::too_many_arguments)]
fn cmd_sweep(
    seed: u64,
    c: f64,
    b_min: f64,
    b_max: f64,
    n: usize,
    family: FamilyArg,
    a: f64,
    energy: f64,
    width: f64,
    jobs: usize,
    integ: &IntegratorArgs,
    thresholds: &ThresholdArgs,
    out: &OutputArgs,
) -> Result<(), Failure> {
    let family = Family::from(family);
    if family == Family::Custom {
        usage_error("sweep", "sweeps need family A or B");
    }
    let sign = EnergySign::from_energy(energy).ok_or_else(|| {
        Failure::ic(anyhow!(
            "families A and B need E = 0.5 or E = -0.5, got {energy}"
        ))
    })?;
    let mut cfg = ScanConfig::new(family, c);
    cfg.a = a;
    cfg.sign = sign;
    cfg.integrator = integ.config(100.0);
    cfg.classify = thresholds.config();
    cfg.bracket_width = width;

    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(jobs)
        .build()
        .map_err(|e| Failure::run(anyhow!(e)))?;
    let scan = pool
        .install(|| analysis::ep_scan(c, b_min, b_max, n, &cfg))
        .map_err(|e| Failure::run(anyhow!(e)))?;

    let (dir, name) = out.prepare("sweep")?;
    let mut m = Manifest::new("sweep");
    m.set("a", a);
    m.set("b", format!("{b_min}..{b_max}"));
    m.set("E", energy);
    m.set("family", format!("{family:?}"));
    m.set("c", c);
    m.set("n", n);
    m.set("bracket_width", width);
    record_integrator(&mut m, &cfg.integrator);
    m.set("closure_tol", cfg.classify.closure_tol);
    m.set("pt_tol", cfg.classify.pt_tol);
    m.set("seed", seed);

    output::write_output(&dir, &format!("{name}.csv"), &sweep_csv(&scan), &mut m)
        .map_err(Failure::io)?;
    let residuals: Vec<[f64; 2]> = scan
        .samples
        .iter()
        .filter_map(|s| {
            s.outcome
                .as_ref()
                .ok()
                .map(|c| [s.value, c.symmetry_residual.min(1.0)])
        })
        .collect();
    let plot = svg::Plot {
        title: &format!("PT residual vs b (c = {c}, family {family:?})"),
        x_label: "b",
        y_label: "PT residual",
        equal_aspect: false,
        series: vec![
            svg::Series {
                label: "symmetry residual".into(),
                points: residuals,
            },
            svg::Series {
                label: "threshold".into(),
                points: vec![[b_min, cfg.classify.pt_tol], [b_max, cfg.classify.pt_tol]],
            },
        ],
    };
    output::write_output(&dir, &format!("{name}.svg"), &svg::render(&plot), &mut m)
        .map_err(Failure::io)?;

    let ok = scan.samples.iter().filter(|s| s.outcome.is_ok()).count();
    m.set("successful_samples", ok);
    m.set("transitions", scan.transitions.len());
    m.set("status", if ok > 0 { "ok" } else { "failed" });
    output::write_manifest(&dir, &format!("{name}.manifest"), &m).map_err(Failure::io)?;

    for t in &scan.transitions {
        println!("transition {:?} in [{:.6}, {:.6}]", t.kind, t.lo, t.hi);
    }
    println!(
        "{ok}/{n} samples classified, {} transition(s)",
        scan.transitions.len()
    );
    if ok == 0 {
        return Err(Failure::run(anyhow!("no sample could be classified")));
    }
    Ok(())
}

fn cmd_figure(
    seed: u64,
    id: &str,
    integ: &IntegratorArgs,
    out: &OutputArgs,
) -> Result<(), Failure> {
    let fig = figures::find(id).expect("validated by clap");
    let stem = format!("fig{}", id.replace('.', "_"));
    let (dir, name) = out.prepare(&stem)?;
    let mut m = Manifest::new("figure");
    m.set("figure", id);
    m.set("a", 1.0);
    m.set("E", 0.5);
    m.set("seed", seed);

    let (series, x_label, y_label) = match fig.source {
        figures::Source::Portrait { bs } => {
            m.set(
                "b",
                bs.iter()
                    .map(|b| b.to_string())
                    .collect::<Vec<_>>()
                    .join(";"),
            );
            let mut series = Vec::new();
            for (k, &b) in bs.iter().enumerate() {
                let curve = initcond::portrait_curve(Params::unit_stiffness(b), 0.5, 2001)
                    .map_err(Failure::ic)?;
                output::write_output(
                    &dir,
                    &format!("{name}_{k}.csv"),
                    &output::xy_csv("x,p", &curve),
                    &mut m,
                )
                .map_err(Failure::io)?;
                series.push(svg::Series {
                    label: format!("b = {b}"),
                    points: curve,
                });
            }
            (series, "x", "p")
        }
        figures::Source::Orbits { family, b, cs } => {
            let cfg = integ.config(20.0);
            let params = Params::unit_stiffness(b);
            m.set("b", b);
            m.set("family", format!("{family:?}"));
            m.set(
                "c",
                cs.iter()
                    .map(|c| c.to_string())
                    .collect::<Vec<_>>()
                    .join(";"),
            );
            record_integrator(&mut m, &cfg);
            let runs: Vec<Result<Trajectory, Failure>> = cs
                .par_iter()
                .map(|&c| {
                    let ic = match family {
                        Family::A => initcond::ic_family_a(c, params, EnergySign::Positive),
                        _ => initcond::ic_family_b(c, params, EnergySign::Positive),
                    }
                    .map_err(Failure::ic)?;
                    integrate_1d(params, ic.state, &cfg)
                        .map_err(|e: IntegrationError| Failure::run(e))
                })
                .collect();
            let mut series = Vec::new();
            let (mut dh, mut dg) = (0.0_f64, 0.0_f64);
            for (k, (run, &c)) in runs.into_iter().zip(cs).enumerate() {
                let traj = run?;
                output::write_output(
                    &dir,
                    &format!("{name}_{k}.csv"),
                    &output::trajectory_csv(params, &traj),
                    &mut m,
                )
                .map_err(Failure::io)?;
                dh = dh.max(traj.max_h_drift);
                dg = dg.max(traj.max_g_drift);
                series.push(svg::Series {
                    label: format!("c = {c}"),
                    points: traj.xy(),
                });
            }
            m.set_f64("max_h_drift", dh);
            m.set_f64("max_g_drift", dg);
            (series, "x", "y")
        }
    };
    let plot = svg::Plot {
        title: &format!("Figure {id}: {}", fig.title),
        x_label,
        y_label,
        equal_aspect: true,
        series,
    };
    let svg_name = format!("{name}.svg");
    output::write_output(&dir, &svg_name, &svg::render(&plot), &mut m).map_err(Failure::io)?;
    m.set("status", "ok");
    output::write_manifest(&dir, &format!("{name}.manifest"), &m).map_err(Failure::io)?;
    println!("wrote {}", dir.join(svg_name).display());
    Ok(())
}

fn cmd_verify(
    seed: u64,
    trials: usize,
    dim: usize,
    a: f64,
    b: f64,
    fd: bool,
    inject_fault: bool,
) -> Result<(), Failure> {
    if trials == 0 || dim == 0 {
        Cli::command()
            .error(
                ErrorKind::ValueValidation,
                "--trials and --dim must be positive",
            )
            .exit();
    }
    let params = Params::new(a, b);
    let mut cfg = AlgebraConfig::new(dim, trials, seed);
    if fd {
        cfg.analytic = false;
        cfg.tol = 1e-7;
    }
    let h = if inject_fault {
        Observable::faulty_hamiltonian(params)
    } else {
        Observable::hamiltonian(params)
    };
    let report = brackets::verify_algebra_with(params, &h, &cfg);
    print!("{report}");
    if report.all_pass() {
        println!("all brackets within tolerance");
        Ok(())
    } else {
        Err(Failure {
            code: 5,
            error: anyhow!("constraint algebra check failed"),
        })
    }
}

fn run(cli: Cli) -> Result<(), Failure> {
    let seed = cli.seed;
    match cli.command {
        Command::Simulate { model, integ, out } => cmd_simulate(seed, &model, &integ, &out),
        Command::Classify {
            model,
            integ,
            thresholds,
        } => cmd_classify(&model, &integ, &thresholds),
        Command::Sweep {
            c,
            b_min,
            b_max,
            n,
            family,
            a,
            energy,
            width,
            jobs,
            integ,
            thresholds,
            out,
        } => cmd_sweep(
            seed,
            c,
            b_min,
            b_max,
            n as usize,
            family,
            a,
            energy,
            width,
            jobs,
            &integ,
            &thresholds,
            &out,
        ),
        Command::Figure { id, integ, out } => cmd_figure(seed, &id, &integ, &out),
        Command::Verify {
            trials,
            dim,
            a,
            b,
            fd,
            inject_fault,
        } => cmd_verify(seed, trials, dim, a, b, fd, inject_fault),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            eprintln!("error: {:#}", f.error);
            ExitCode::from(f.code)
        }
    }
}
