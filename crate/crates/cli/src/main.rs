//! `ramp`: plan, check and inspect weakly monotone multi-robot motion.
//!
//! Exit status: 0 on success, 1 when an instance is infeasible or a check
//! finds a violation, 2 on usage errors (bad flags, unreadable input).

use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{anyhow, Context};
use clap::{Parser, Subcommand, ValueEnum};
use serde_json::json;

use ramp_core::freespace::{FreeSpace, DEFAULT_INFLATE_TOL};
use ramp_core::hardness::{self, CnfFormula, GapMode};
use ramp_core::instance::InstanceFile;
use ramp_core::order::{self, Method};
use ramp_core::plan::{self, PlanFile, PlanOptions, DEFAULT_TRACE_TOL};
use ramp_core::render::{render_svg, RenderOptions};
use ramp_core::verify;
use ramp_core::{Error, Instance};

#[derive(Parser)]
#[command(name = "ramp", version, about = "Weakly monotone motion planning for unit-disc robots with revolving areas")]
struct Cli {
    /// Worker threads for parallel stages (default: all cores).
    #[arg(long, global = true)]
    jobs: Option<usize>,
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Clone, Copy, ValueEnum)]
enum OrderMethod {
    Exact,
    Greedy,
    Local,
}

#[derive(Subcommand)]
enum Cmd {
    /// Check an instance file and print the validation report.
    Validate { instance: PathBuf },
    /// Compute a plan and write it as JSON.
    Plan {
        instance: PathBuf,
        /// given | arbitrary | greedy | local | exact, or a JSON file holding the order.
        #[arg(long, default_value = "arbitrary")]
        order: String,
        #[arg(long, default_value_t = DEFAULT_INFLATE_TOL)]
        inflate_tol: f64,
        #[arg(long, default_value_t = DEFAULT_TRACE_TOL)]
        trace_tol: f64,
        /// Keep the first shortest path found even if an equally short one avoids resting robots.
        #[arg(long)]
        no_prefer_clear: bool,
        #[arg(long)]
        out: PathBuf,
    },
    /// Verify a plan against its instance by sampling.
    Check {
        instance: PathBuf,
        plan: PathBuf,
        #[arg(long, default_value_t = 1e-3)]
        step: f64,
    },
    /// Optimise the execution order.
    Order {
        instance: PathBuf,
        #[arg(long, value_enum, default_value = "local")]
        method: OrderMethod,
        #[arg(long, default_value_t = DEFAULT_INFLATE_TOL)]
        inflate_tol: f64,
        #[arg(long, default_value_t = DEFAULT_TRACE_TOL)]
        trace_tol: f64,
    },
    /// Build a gadget instance from a DIMACS 3-CNF file.
    GenHardness {
        #[arg(long)]
        cnf: PathBuf,
        /// One pivot robot per clause instead of a single one.
        #[arg(long)]
        gap: bool,
        #[arg(long)]
        out: PathBuf,
        #[arg(long)]
        meta: Option<PathBuf>,
        /// Satisfying assignment as DIMACS literals, e.g. "1 -2 3".
        #[arg(long, requires = "witness", allow_hyphen_values = true)]
        assignment: Option<String>,
        /// Where to write the witness order for `--assignment`.
        #[arg(long, requires = "assignment")]
        witness: Option<PathBuf>,
    },
    /// Draw an instance and optionally a plan as SVG.
    Render {
        instance: PathBuf,
        plan: Option<PathBuf>,
        #[arg(long)]
        svg: PathBuf,
        #[arg(long, requires = "plan")]
        animate: bool,
        #[arg(long, default_value_t = 24)]
        fps: u32,
    },
}

/// Outcome of a command that ran to completion.
enum Verdict {
    Ok,
    Violation,
}

fn read(path: &Path) -> anyhow::Result<String> {
    fs::read_to_string(path).with_context(|| format!("cannot read {}", path.display()))
}

fn write(path: &Path, contents: &str) -> anyhow::Result<()> {
    fs::write(path, contents).with_context(|| format!("cannot write {}", path.display()))
}

fn load_instance(path: &Path) -> anyhow::Result<(Instance, Vec<usize>)> {
    let file: InstanceFile = serde_json::from_str(&read(path)?).with_context(|| format!("parsing {}", path.display()))?;
    let given = file.robots.iter().map(|r| r.id).collect();
    Ok((file.into_instance()?, given))
}

fn print(v: &impl serde::Serialize) {
    use std::io::Write;
    // a closed pipe downstream is not our failure
    let _ = writeln!(std::io::stdout().lock(), "{}", serde_json::to_string_pretty(v).expect("reports serialize"));
}

fn require_valid(inst: &Instance) -> anyhow::Result<()> {
    let report = inst.validate();
    if report.valid {
        return Ok(());
    }
    Err(Error::InvalidInstance(serde_json::to_string(&report.violations)?).into())
}

fn plain_paths(inst: &Instance, fs: &FreeSpace) -> anyhow::Result<Vec<ramp_core::geom::PiecewiseCurve>> {
    use rayon::prelude::*;
    Ok((0..inst.n()).into_par_iter().map(|i| plan::robot_path(fs, inst, i, None)).collect::<Result<_, _>>()?)
}

fn solve_order(inst: &Instance, fs: &FreeSpace, method: OrderMethod, tol: f64) -> anyhow::Result<order::OrderingResult> {
    let w = order::pair_weights(inst, &plain_paths(inst, fs)?, tol)?;
    Ok(match method {
        OrderMethod::Exact => order::order_exact(&w)?,
        OrderMethod::Greedy => order::order_heuristic(&w, Method::Greedy),
        OrderMethod::Local => order::order_heuristic(&w, Method::LocalSearch),
    })
}

fn parse_order_file(path: &Path) -> anyhow::Result<Vec<usize>> {
    let v: serde_json::Value = serde_json::from_str(&read(path)?)?;
    let arr = v.get("ordering").unwrap_or(&v);
    serde_json::from_value(arr.clone()).map_err(|_| anyhow!("{} must hold an array of robot ids", path.display()))
}

fn run(cli: Cli) -> anyhow::Result<Verdict> {
    match cli.cmd {
        Cmd::Validate { instance } => {
            let (inst, _) = load_instance(&instance)?;
            let report = inst.validate();
            print(&report);
            Ok(if report.valid { Verdict::Ok } else { Verdict::Violation })
        }
        Cmd::Plan { instance, order, inflate_tol, trace_tol, no_prefer_clear, out } => {
            let (inst, given) = load_instance(&instance)?;
            require_valid(&inst)?;
            let fs = FreeSpace::with_tolerance(&inst.workspace, inflate_tol);
            if inst.robots.iter().any(|r| !fs.connected(r.start, r.final_pos)) {
                return Err(Error::Infeasible.into());
            }
            let sigma = match order.as_str() {
                "given" => given,
                "arbitrary" => (0..inst.n()).collect(),
                "greedy" => solve_order(&inst, &fs, OrderMethod::Greedy, trace_tol)?.sigma,
                "local" => solve_order(&inst, &fs, OrderMethod::Local, trace_tol)?.sigma,
                "exact" => solve_order(&inst, &fs, OrderMethod::Exact, trace_tol)?.sigma,
                file => parse_order_file(Path::new(file))?,
            };
            let opts = PlanOptions { trace_tol, prefer_clear: !no_prefer_clear };
            let ens = plan::assemble(&inst, &fs, &sigma, &opts)?;
            write(&out, &ens.to_file().to_json())?;
            let report = verify::cost_report(&ens);
            print(&json!({
                "ordering": ens.ordering,
                "cost_gamma": report.cost_gamma,
                "cost_gamma_bar": report.cost_gamma_bar,
                "cost_pi": report.cost_pi,
                "marginal_cost": ens.marginal_cost(),
                "ratio_pi": report.ratio_pi,
            }));
            Ok(Verdict::Ok)
        }
        Cmd::Check { instance, plan, step } => {
            let (inst, _) = load_instance(&instance)?;
            let plan = PlanFile::from_json(&read(&plan)?)?;
            if plan.robots.len() != inst.n() {
                return Err(Error::BadPlan(format!("plan has {} robots, instance {}", plan.robots.len(), inst.n())).into());
            }
            let clearance = verify::check_ensemble(&inst, &plan.robots, step)?;
            let monotone = verify::check_weak_monotone(&inst, &plan.ordering, &plan.robots);
            let ok = clearance.ok() && monotone.is_empty();
            print(&json!({ "ok": ok, "clearance": clearance, "weak_monotone_violations": monotone }));
            Ok(if ok { Verdict::Ok } else { Verdict::Violation })
        }
        Cmd::Order { instance, method, inflate_tol, trace_tol } => {
            let (inst, _) = load_instance(&instance)?;
            require_valid(&inst)?;
            let fs = FreeSpace::with_tolerance(&inst.workspace, inflate_tol);
            let r = solve_order(&inst, &fs, method, trace_tol)?;
            print(&json!({
                "ordering": r.sigma,
                "delta_cost": r.delta_cost,
                "method": r.method,
                "certified_optimal": r.certified_optimal,
            }));
            Ok(Verdict::Ok)
        }
        Cmd::GenHardness { cnf, gap, out, meta, assignment, witness } => {
            let q = CnfFormula::parse_dimacs(&read(&cnf)?)?;
            let mode = if gap { GapMode::MPivots } else { GapMode::SinglePivot };
            let (inst, m) = hardness::generate(&q, mode)?;
            write(&out, &inst.to_json())?;
            if let Some(path) = meta {
                write(&path, &m.to_json())?;
            }
            if let (Some(a), Some(path)) = (assignment, witness) {
                let mut values = vec![false; q.num_vars];
                for tok in a.split([' ', ',']).filter(|t| !t.is_empty()) {
                    let l: i32 = tok.parse().map_err(|_| anyhow!("bad assignment literal '{tok}'"))?;
                    let v = l.unsigned_abs() as usize;
                    if v == 0 || v > q.num_vars {
                        return Err(anyhow!("assignment literal {l} outside 1..={}", q.num_vars));
                    }
                    values[v - 1] = l > 0;
                }
                let sigma = hardness::assignment_ordering(&m, &values)?;
                let labels: Vec<&str> = sigma.iter().map(|&i| m.label(i)).collect();
                write(&path, &serde_json::to_string_pretty(&json!({ "ordering": sigma, "labels": labels }))?)?;
            }
            print(&json!({ "robots": inst.n(), "gadgets": m.gadgets.len(), "d": m.d }));
            Ok(Verdict::Ok)
        }
        Cmd::Render { instance, plan, svg, animate, fps } => {
            let (inst, _) = load_instance(&instance)?;
            let plan = plan.map(|p| read(&p).and_then(|s| Ok(PlanFile::from_json(&s)?))).transpose()?;
            let paths = plan.as_ref().map(|p| p.robots.as_slice());
            write(&svg, &render_svg(&inst, paths, &RenderOptions { animate, fps })?)?;
            Ok(Verdict::Ok)
        }
    }
}

/// Errors in the caller's input are usage errors; the rest mean the
/// instance or plan itself is at fault.
fn is_usage(e: &anyhow::Error) -> bool {
    if e.downcast_ref::<std::io::Error>().is_some() || e.downcast_ref::<serde_json::Error>().is_some() {
        return true;
    }
    match e.downcast_ref::<Error>() {
        Some(Error::Json(_) | Error::BadCnf(_) | Error::BadPlan(_) | Error::BadRender(_)) => true,
        Some(Error::TooLarge { .. } | Error::UnsatAssignment(_) | Error::BadWorkspace(_)) => true,
        Some(_) => false,
        None => true,
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Some(k) = cli.jobs {
        if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(k).build_global() {
            eprintln!("error: {e}");
            return ExitCode::from(2);
        }
    }
    match run(cli) {
        Ok(Verdict::Ok) => ExitCode::SUCCESS,
        Ok(Verdict::Violation) => ExitCode::from(1),
        Err(e) => {
            let msg = match e.downcast_ref::<Error>() {
                Some(Error::Infeasible) => "no feasible motion plan exists".to_string(),
                _ => format!("{e:#}"),
            };
            eprintln!("error: {msg}");
            ExitCode::from(if is_usage(&e) { 2 } else { 1 })
        }
    }
}
