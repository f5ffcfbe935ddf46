//! Command-line front end: parse a PD code, run build/solve/compute pipelines,
//! emit JSON reports.
//!
//! Exit codes: 0 success, 1 verification failure, 2 usage/configuration error.
//! Errors are reported as structured JSON on stderr.

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use octa_ptolemy::builtin::Builtin;
use octa_ptolemy::diagram::{parse_pd, Diagram};
use octa_ptolemy::gluing::{build_t4_system, build_t5_system, Assignment, GluingSystem, Mode};
use octa_ptolemy::invariants::invariant_report;
use octa_ptolemy::ptolemy::{ptolemy_consistency_check, scaling_parameters};
use octa_ptolemy::report::{
    assignment_json, invariant_report_json, parse_assignment, solution_set_json, JsonValue,
};
use octa_ptolemy::solver::{search_solutions, SolverConfig};

#[derive(Parser)]
#[command(
    name = "octa-ptolemy",
    about = "Gluing equations, Ptolemy data and holonomy invariants of knot diagrams",
    version
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Clone)]
struct InputArgs {
    /// PD code, inline (`X[i,j,k,l];...`) or a path to a file containing one
    #[arg(long)]
    pd: Option<String>,
    /// Built-in example: fig8 | trefoil-kink
    #[arg(long, conflicts_with = "pd")]
    builtin: Option<Builtin>,
    /// Variable mode: z (segments, T4) or w (regions, T5)
    #[arg(long)]
    mode: Mode,
    /// Under-pass enumeration starts at this crossing (0-based index)
    #[arg(long)]
    base_crossing: Option<usize>,
}

#[derive(Args, Clone)]
struct SolverArgs {
    /// RNG seed for the random restarts
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Number of random restarts
    #[arg(long, default_value_t = 100)]
    restarts: usize,
    /// Residual tolerance
    #[arg(long, default_value_t = 1e-11)]
    tol: f64,
}

#[derive(Args, Clone)]
struct OutArgs {
    /// Write the JSON report here instead of stdout
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Subcommand)]
enum Command {
    /// Search for solutions of the gluing system and emit a solution set
    Solve {
        #[command(flatten)]
        input: InputArgs,
        #[command(flatten)]
        solver: SolverArgs,
        #[command(flatten)]
        out: OutArgs,
    },
    /// Compute invariant reports from a provided or solved assignment
    Invariants {
        #[command(flatten)]
        input: InputArgs,
        /// Path to an assignment JSON ({"mode":...,"values":{...}})
        #[arg(long)]
        solution: Option<PathBuf>,
        #[command(flatten)]
        solver: SolverArgs,
        #[command(flatten)]
        out: OutArgs,
    },
    /// Verify a provided assignment: residuals, non-degeneracy, sigma product
    Check {
        #[command(flatten)]
        input: InputArgs,
        /// Path to an assignment JSON; defaults to the builtin solution
        #[arg(long)]
        solution: Option<PathBuf>,
        #[command(flatten)]
        out: OutArgs,
    },
}

#[derive(Debug)]
enum CliError {
    Usage(String),
    Verification(String),
}

impl CliError {
    fn code(&self) -> u8 {
        match self {
            CliError::Usage(_) => 2,
            CliError::Verification(_) => 1,
        }
    }
    fn kind(&self) -> &'static str {
        match self {
            CliError::Usage(_) => "usage",
            CliError::Verification(_) => "verification",
        }
    }
    fn message(&self) -> &str {
        match self {
            CliError::Usage(m) | CliError::Verification(m) => m,
        }
    }
}

fn usage<E: std::fmt::Display>(e: E) -> CliError {
    CliError::Usage(e.to_string())
}

fn load_diagram(input: &InputArgs) -> Result<Diagram, CliError> {
    let pd_text = if let Some(b) = input.builtin {
        b.pd().to_string()
    } else if let Some(pd) = &input.pd {
        let path = PathBuf::from(pd);
        if path.is_file() {
            std::fs::read_to_string(&path).map_err(usage)?
        } else {
            pd.clone()
        }
    } else {
        return Err(CliError::Usage(
            "one of --pd or --builtin is required".into(),
        ));
    };
    let d = parse_pd(pd_text.trim()).map_err(usage)?;
    match input.base_crossing {
        Some(b) => d.with_base_crossing(b).map_err(usage),
        None => Ok(d),
    }
}

fn build_system(d: &Diagram, mode: Mode) -> Result<GluingSystem, CliError> {
    match mode {
        Mode::Z => build_t4_system(d).map_err(usage),
        Mode::W => build_t5_system(d).map_err(usage),
    }
}

fn load_solution(
    input: &InputArgs,
    solution: &Option<PathBuf>,
) -> Result<Option<Assignment>, CliError> {
    if let Some(path) = solution {
        let text = std::fs::read_to_string(path).map_err(usage)?;
        let a = parse_assignment(&text).map_err(usage)?;
        if a.mode != input.mode {
            return Err(CliError::Usage(format!(
                "solution file is {}-mode but --mode {} was requested",
                a.mode, input.mode
            )));
        }
        return Ok(Some(a));
    }
    if let Some(b) = input.builtin {
        return Ok(b.solution(input.mode));
    }
    Ok(None)
}

fn emit(out: &OutArgs, value: &JsonValue) -> Result<(), CliError> {
    let mut text = value.to_string();
    text.push('\n');
    match &out.out {
        Some(path) => std::fs::write(path, text).map_err(usage),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn cmd_solve(input: InputArgs, solver: SolverArgs, out: OutArgs) -> Result<(), CliError> {
    let d = load_diagram(&input)?;
    let sys = build_system(&d, input.mode)?;
    let cfg = SolverConfig {
        seed: solver.seed,
        restarts: solver.restarts,
        tol_residual: solver.tol,
        ..SolverConfig::default()
    };
    let set = search_solutions(&sys, &cfg).map_err(usage)?;
    emit(&out, &solution_set_json(&set))
}

fn report_for(d: &Diagram, sys: &GluingSystem, a: &Assignment) -> Result<JsonValue, CliError> {
    let resid = sys
        .max_residual(a)
        .map_err(|e| CliError::Verification(e.to_string()))?;
    let rep = invariant_report(d, a, resid).map_err(|e| CliError::Verification(e.to_string()))?;
    Ok(invariant_report_json(&rep))
}

fn cmd_invariants(
    input: InputArgs,
    solution: Option<PathBuf>,
    solver: SolverArgs,
    out: OutArgs,
) -> Result<(), CliError> {
    let d = load_diagram(&input)?;
    let sys = build_system(&d, input.mode)?;
    if let Some(a) = load_solution(&input, &solution)? {
        let rep = report_for(&d, &sys, &a)?;
        return emit(&out, &rep);
    }
    // solver-driven: one report per found solution
    let cfg = SolverConfig {
        seed: solver.seed,
        restarts: solver.restarts,
        tol_residual: solver.tol,
        ..SolverConfig::default()
    };
    let set = search_solutions(&sys, &cfg).map_err(usage)?;
    let mut reports = Vec::new();
    for rec in &set.solutions {
        if let Ok(rep) = report_for(&d, &sys, &rec.assignment) {
            reports.push(rep);
        }
    }
    emit(&out, &JsonValue::Arr(reports))
}

fn cmd_check(input: InputArgs, solution: Option<PathBuf>, out: OutArgs) -> Result<(), CliError> {
    let d = load_diagram(&input)?;
    let sys = build_system(&d, input.mode)?;
    let a = load_solution(&input, &solution)?
        .ok_or_else(|| CliError::Usage("check needs --solution (or a builtin with one)".into()))?;
    let resid = sys
        .max_residual(&a)
        .map_err(|e| CliError::Verification(e.to_string()))?;
    let sp = scaling_parameters(&d, &a).map_err(|e| CliError::Verification(e.to_string()))?;
    let consistency = ptolemy_consistency_check(&d, &a, &sp)
        .map_err(|e| CliError::Verification(e.to_string()))?;
    let tables: Vec<_> = (0..d.n())
        .map(|ci| octa_ptolemy::ptolemy::short_edge_table(&d, ci, &a, &sp))
        .collect();
    let graph = match a.mode {
        Mode::Z => Some(
            octa_ptolemy::ptolemy::graph_parameters(&d, &a)
                .map_err(|e| CliError::Verification(e.to_string()))?,
        ),
        Mode::W => None,
    };
    let ok = resid < 1e-9 && consistency.is_ok();
    let report = JsonValue::Obj(vec![
        ("pd".into(), JsonValue::Str(d.to_pd_string())),
        ("mode".into(), JsonValue::Str(a.mode.to_string())),
        ("assignment".into(), assignment_json(&a)),
        ("maxResidual".into(), JsonValue::Num(resid)),
        (
            "sigmaProduct".into(),
            JsonValue::complex(consistency.sigma_product),
        ),
        (
            "obstruction".into(),
            JsonValue::Int(consistency.obstruction_sign as i64),
        ),
        (
            "consistencyFailures".into(),
            JsonValue::Arr(
                consistency
                    .failures
                    .iter()
                    .map(|f| JsonValue::Str(f.clone()))
                    .collect(),
            ),
        ),
        (
            "ptolemy".into(),
            octa_ptolemy::report::ptolemy_json(&d, &a, &sp, &tables, graph.as_ref()),
        ),
        (
            "ok".into(),
            JsonValue::Str(if ok { "true".into() } else { "false".into() }),
        ),
    ]);
    emit(&out, &report)?;
    if ok {
        Ok(())
    } else {
        Err(CliError::Verification(format!(
            "verification failed (max residual {resid:.3e})"
        )))
    }
}

fn configure_threads() {
    if let Ok(v) = std::env::var("OCTA_PTOLEMY_THREADS") {
        if let Ok(n) = v.parse::<usize>() {
            let _ = rayon::ThreadPoolBuilder::new()
                .num_threads(n.max(1))
                .build_global();
        }
    }
}

fn main() -> ExitCode {
    configure_threads();
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Solve { input, solver, out } => cmd_solve(input, solver, out),
        Command::Invariants {
            input,
            solution,
            solver,
            out,
        } => cmd_invariants(input, solution, solver, out),
        Command::Check {
            input,
            solution,
            out,
        } => cmd_check(input, solution, out),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            let err = JsonValue::Obj(vec![
                ("error".into(), JsonValue::Str(e.message().to_string())),
                ("kind".into(), JsonValue::Str(e.kind().to_string())),
            ]);
            eprintln!("{}", err);
            ExitCode::from(e.code())
        }
    }
}
