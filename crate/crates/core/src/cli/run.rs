use std::f64::consts::TAU;
use std::fs;
use std::path::{Path, PathBuf};

use serde::Serialize;
use serde_json::json;

use super::{Command, CorrugationNumbers, RunConfig};
use crate::corrugation::{run_pipeline, NPolicy, StageReport};
use crate::defect::{Decomposition, LinearFormZ};
use crate::error::{Error, Result};
use crate::export::{export_hull_obj, export_immersion_obj};
use crate::metric_grid::{Immersion, MetricField, PeriodicGrid, ScalarField};
use crate::moduli::{conformal_search, torus_modulus_detailed, SearchConfig, UHPoint};
use crate::rigidity::rigidity_report;

/// Distance to the target modulus the `search` command must reach.
pub const SEARCH_THRESHOLD: f64 = 1e-2;
/// Largest relator defect the `rigidity` command accepts.
pub const RELATOR_THRESHOLD: f64 = 1e-8;
/// Word length cap for the uniform level bound in the `rigidity` command.
const UNIFORM_WORD_LEN: usize = 5;

/// Result of a completed command.
#[derive(Clone, Debug)]
pub struct RunSummary {
    pub command: Command,
    /// All acceptance thresholds of the command were met.
    pub passed: bool,
    /// Files written, in `output_dir`.
    pub artifacts: Vec<PathBuf>,
    /// One line for standard output.
    pub message: String,
}

impl RunSummary {
    pub fn exit_code(&self) -> i32 {
        if self.passed {
            0
        } else {
            2
        }
    }
}

/// Runs one command and moves its artifacts into `cfg.output_dir`.
///
/// Artifacts are staged first, so a module error leaves only `error.json`
/// behind (earlier artifacts of the same command are removed).
pub fn run_command(cfg: &RunConfig) -> Result<RunSummary> {
    let out = &cfg.output_dir;
    fs::create_dir_all(out).map_err(|e| Error::io(out, e))?;
    let staging = out.join(".staging");
    if staging.exists() {
        fs::remove_dir_all(&staging).map_err(|e| Error::io(&staging, e))?;
    }
    fs::create_dir(&staging).map_err(|e| Error::io(&staging, e))?;

    let result = match cfg.command {
        Command::Corrugate => corrugate(cfg, &staging),
        Command::Search => search(cfg, &staging),
        Command::Rigidity => rigidity(cfg, &staging),
        Command::Modulus => modulus(cfg, &staging),
    };
    clear_previous(out)?;
    let outcome = match result {
        Ok(mut summary) => {
            let mut names: Vec<PathBuf> = Vec::new();
            for staged in &summary.artifacts {
                let name = staged.file_name().expect("staged artifacts are files");
                let dest = out.join(name);
                fs::rename(staged, &dest).map_err(|e| Error::io(&dest, e))?;
                names.push(dest);
            }
            summary.artifacts = names;
            Ok(summary)
        }
        Err(err) => {
            write_error_report(cfg, &err)?;
            Err(err)
        }
    };
    fs::remove_dir_all(&staging).map_err(|e| Error::io(&staging, e))?;
    outcome
}

/// Removes artifacts a previous run may have left in `out`.
fn clear_previous(out: &Path) -> Result<()> {
    let entries = fs::read_dir(out).map_err(|e| Error::io(out, e))?;
    for entry in entries {
        let entry = entry.map_err(|e| Error::io(out, e))?;
        let name = entry.file_name().to_string_lossy().into_owned();
        let ours = matches!(
            name.as_str(),
            "errors.csv" | "trace.csv" | "final.obj" | "report.json" | "rigidity.json" | "hull.obj" | "modulus.txt" | "error.json"
        ) || (name.starts_with("mesh_N") && name.ends_with(".obj"));
        if ours {
            let path = entry.path();
            fs::remove_file(&path).map_err(|e| Error::io(&path, e))?;
        }
    }
    Ok(())
}

/// Writes `error.json` into the output directory.
pub fn write_error_report(cfg: &RunConfig, err: &Error) -> Result<()> {
    let trace = match err {
        Error::SearchFailed { trace } => Some(trace.rows.clone()),
        _ => None,
    };
    let body = json!({
        "kind": err.kind(),
        "message": err.to_string(),
        "config": cfg,
        "trace": trace,
    });
    fs::create_dir_all(&cfg.output_dir).map_err(|e| Error::io(&cfg.output_dir, e))?;
    write_json(&cfg.output_dir.join("error.json"), &body)
}

fn write_json(path: &Path, value: &impl Serialize) -> Result<()> {
    let mut text = serde_json::to_string_pretty(value).expect("reports serialize");
    text.push('\n');
    fs::write(path, text).map_err(|e| Error::io(path, e))
}

fn write_text(path: &Path, text: &str) -> Result<()> {
    fs::write(path, text).map_err(|e| Error::io(path, e))
}

/// Amplitude used by `corrugate`: `3/4` on the line `y = 0`, dipping to
/// `1/2` halfway across.
pub fn corrugate_eta(grid: PeriodicGrid) -> ScalarField {
    ScalarField::from_fn(grid, |_, y| 0.75 - 0.125 * (1.0 - (TAU * y).cos()))
}

fn corrugate(cfg: &RunConfig, dir: &Path) -> Result<RunSummary> {
    let grid = PeriodicGrid::new(cfg.grid_n)?;
    let plane = Immersion::plane(grid, 2);
    let decomposition = Decomposition { terms: vec![(LinearFormZ::DX, corrugate_eta(grid))] };
    let policies: Vec<NPolicy> = match &cfg.n_policy {
        CorrugationNumbers::Auto => vec![NPolicy::auto(cfg.epsilon)],
        CorrugationNumbers::List(ns) => ns.iter().map(|&n| NPolicy::Fixed(vec![n])).collect(),
    };
    let mut rows: Vec<StageReport> = Vec::with_capacity(policies.len());
    let mut artifacts = Vec::new();
    for policy in &policies {
        let result = run_pipeline(&plane, &decomposition, policy)?;
        let stage = result.stages.into_iter().next().expect("one active term");
        let path = dir.join(format!("mesh_N{}.obj", stage.n_corr));
        export_immersion_obj(&result.immersion, &path)?;
        artifacts.push(path);
        rows.push(stage);
    }

    let mut csv = String::from("n_corr,c0_error,min_eigenvalue,max_alpha,max_displacement\n");
    for r in &rows {
        csv.push_str(&format!(
            "{},{:.16e},{:.16e},{:.16e},{:.16e}\n",
            r.n_corr, r.c0_error, r.min_eigenvalue, r.max_alpha, r.max_displacement
        ));
    }
    let csv_path = dir.join("errors.csv");
    write_text(&csv_path, &csv)?;
    artifacts.push(csv_path);

    let spacelike = rows.iter().all(|r| r.min_eigenvalue > 0.0);
    let decreasing = rows.windows(2).all(|w| w[1].c0_error < w[0].c0_error);
    let within_budget = match cfg.n_policy {
        CorrugationNumbers::Auto => rows.iter().all(|r| r.c0_error <= cfg.epsilon),
        CorrugationNumbers::List(_) => true,
    };
    let passed = spacelike && decreasing && within_budget;
    let errors: Vec<String> = rows.iter().map(|r| format!("N={} error={:.3e}", r.n_corr, r.c0_error)).collect();
    Ok(RunSummary {
        command: Command::Corrugate,
        passed,
        artifacts,
        message: format!("corrugate: {} ({})", errors.join(", "), verdict(passed)),
    })
}

fn search(cfg: &RunConfig, dir: &Path) -> Result<RunSummary> {
    let plane = Immersion::plane(PeriodicGrid::new(cfg.grid_n)?, 6);
    let search_cfg = SearchConfig {
        rho: cfg.rho,
        epsilon: cfg.epsilon,
        n_corr: match &cfg.n_policy {
            CorrugationNumbers::Auto => None,
            CorrugationNumbers::List(ns) => Some(ns.clone()),
        },
        seed: cfg.seed,
        ..SearchConfig::default()
    };
    let out = conformal_search(&plane, cfg.w0, &search_cfg)?;

    let trace_path = dir.join("trace.csv");
    write_text(&trace_path, &out.trace.to_csv())?;
    let obj_path = dir.join("final.obj");
    export_immersion_obj(&out.immersion, &obj_path)?;

    let best = out.trace.rows.iter().map(|r| r.hyp_dist).fold(f64::INFINITY, f64::min);
    let passed = best <= SEARCH_THRESHOLD && out.evaluations() <= search_cfg.max_evaluations;
    let report = json!({
        "config": cfg,
        "passed": passed,
        "w_star": out.w_star,
        "g_star": out.g_star,
        "hyp_distance": best,
        "evaluations": out.evaluations(),
        "calibration_runs": out.calibration_runs,
        "delta": out.delta,
        "n_corr": out.n_corr,
        "warnings": out.warnings,
        "trace": out.trace.rows,
    });
    let report_path = dir.join("report.json");
    write_json(&report_path, &report)?;
    Ok(RunSummary {
        command: Command::Search,
        passed,
        artifacts: vec![trace_path, obj_path, report_path],
        message: format!(
            "search: w* = {} G(w*) = {} distance {:.3e} after {} evaluations ({})",
            out.w_star,
            out.g_star,
            best,
            out.evaluations(),
            verdict(passed)
        ),
    })
}

fn rigidity(cfg: &RunConfig, dir: &Path) -> Result<RunSummary> {
    let run = rigidity_report(cfg.word_len, Some(cfg.word_len.min(UNIFORM_WORD_LEN)))?;
    let r = &run.report;
    let passed = r.alpha > 1.0 && r.relator_defect <= RELATOR_THRESHOLD;
    let json_path = dir.join("rigidity.json");
    write_json(&json_path, &json!({ "config": cfg, "passed": passed, "report": r }))?;
    let obj_path = dir.join("hull.obj");
    export_hull_obj(&run.hull, &obj_path)?;
    Ok(RunSummary {
        command: Command::Rigidity,
        passed,
        artifacts: vec![json_path, obj_path],
        message: format!(
            "rigidity: alpha = {:.12} C = {:.12} c = {:.12} C' = {:.12} ({})",
            r.alpha,
            r.big_c,
            r.small_c,
            r.c_prime,
            verdict(passed)
        ),
    })
}

fn modulus(cfg: &RunConfig, dir: &Path) -> Result<RunSummary> {
    let g = MetricField::constant(PeriodicGrid::new(cfg.grid_n)?, cfg.metric);
    let sol = torus_modulus_detailed(&g)?;
    let line = format_modulus(sol.w);
    let path = dir.join("modulus.txt");
    write_text(&path, &format!("{line}\n"))?;
    Ok(RunSummary { command: Command::Modulus, passed: true, artifacts: vec![path], message: line })
}

/// Modulus rounded to six decimals, e.g. `2i` or `0.5+0.866025i`.
pub fn format_modulus(w: UHPoint) -> String {
    let round = |x: f64| {
        let r = (x * 1e6).round() / 1e6;
        if r == 0.0 {
            0.0
        } else {
            r
        }
    };
    match UHPoint::new(round(w.re()), round(w.im())) {
        Ok(p) => p.to_string(),
        Err(_) => w.to_string(),
    }
}

fn verdict(passed: bool) -> &'static str {
    if passed {
        "PASS"
    } else {
        "thresholds not met"
    }
}
