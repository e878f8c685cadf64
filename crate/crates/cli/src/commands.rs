//! The four subcommands. Each returns a process exit code: 0 ok, 1
//! verification failed, 2 invalid input, 3 non-convergence.

use std::fmt::Write as _;
use std::path::PathBuf;

use clap::Args;

use hexflow_core::energies::{evaluate, FunctionalKind};
use hexflow_core::hexflow::{lemma_report, run_flow, Trajectory};
use hexflow_core::par;
use hexflow_core::rng::mix_seed;
use hexflow_core::tiling::{
    regular_hexagon, sample_random, sample_random_parallelogram, verify_tiling,
};
use hexflow_core::HexCell;

use crate::input::{load_cell, load_cell_lenient, parse_functional};
use crate::report::{HistoryRow, VerifyReport};
use crate::textfmt::g17;
use crate::{svg, EXIT_INVALID_INPUT, EXIT_NON_CONVERGENCE, EXIT_OK, EXIT_VERIFICATION_FAILED};

#[derive(Args)]
pub struct SymmetrizeArgs {
    /// Polygon JSON file (`{"vertices": [[x, y], ...]}`).
    #[arg(long)]
    input: Option<PathBuf>,
    /// Built-in cell: `regular` | `random:<seed>` | `parallelogram:<8 coords>`.
    #[arg(long)]
    kind: Option<String>,
    /// Stop when the regularity defect drops below this.
    #[arg(long, default_value_t = 1e-8)]
    tol: f64,
    #[arg(long, default_value_t = 500)]
    max_iter: usize,
    /// Trajectory CSV output path.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Overlay SVG output path.
    #[arg(long)]
    svg: Option<PathBuf>,
}

pub fn symmetrize(args: &SymmetrizeArgs) -> i32 {
    let cell = match load_cell(args.input.as_deref(), args.kind.as_deref()) {
        Ok(c) => c,
        Err(e) => {
            eprintln!("error: {e}");
            return EXIT_INVALID_INPUT;
        }
    };
    if !args.tol.is_finite() || args.tol <= 0.0 || args.max_iter == 0 {
        eprintln!("error: tol must be positive and max-iter at least 1");
        return EXIT_INVALID_INPUT;
    }
    let traj = match run_flow(&cell, args.tol, args.max_iter) {
        Ok(t) => t,
        Err(e) => {
            eprintln!("error: {e}");
            return EXIT_INVALID_INPUT;
        }
    };
    if let Some(path) = &args.out {
        if let Err(e) = std::fs::write(path, trajectory_csv(&traj)) {
            eprintln!("error: {}: {e}", path.display());
            return EXIT_INVALID_INPUT;
        }
    }
    if let Some(path) = &args.svg {
        if let Err(e) = std::fs::write(path, svg::flow_overlay(&cell, &traj)) {
            eprintln!("error: {}: {e}", path.display());
            return EXIT_INVALID_INPUT;
        }
    }
    let last = traj.states.last().unwrap();
    println!(
        "steps={} converged={} defect={} aligned_dH={} area={}",
        traj.iterations,
        traj.converged,
        g17(last.regularity_defect),
        g17(last.aligned_dh),
        g17(last.area()),
    );
    if traj.converged {
        EXIT_OK
    } else {
        EXIT_NON_CONVERGENCE
    }
}

fn trajectory_csv(traj: &Trajectory) -> String {
    let mut out = String::from("n,a,b,c,d,area,perimeter,defect,aligned_dH\n");
    for s in &traj.states {
        let _ = writeln!(
            out,
            "{},{},{},{},{},{},{},{},{}",
            s.n,
            g17(s.a),
            g17(s.b),
            g17(s.c()),
            g17(s.d()),
            g17(s.area()),
            g17(s.perimeter()),
            g17(s.regularity_defect),
            g17(s.aligned_dh),
        );
    }
    out
}

#[derive(Args)]
pub struct VerifyLemmaArgs {
    /// Number of random flows (half hexagon starts, half parallelograms).
    #[arg(long, default_value_t = 100)]
    seeds: u64,
    /// Master seed; sample i uses the documented splitmix fan-out.
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, default_value_t = 1e-8)]
    tol: f64,
    #[arg(long, default_value_t = 500)]
    max_iter: usize,
    /// JSON report output path.
    #[arg(long)]
    report: Option<PathBuf>,
    /// Inject a fault to exercise the failure path (value: inflate-b).
    #[arg(long)]
    fault: Option<String>,
}

pub fn verify_lemma(args: &VerifyLemmaArgs) -> i32 {
    if args.seeds == 0 {
        eprintln!("error: --seeds must be positive");
        return EXIT_INVALID_INPUT;
    }
    if !args.tol.is_finite() || args.tol <= 0.0 || args.max_iter == 0 {
        eprintln!("error: tol must be positive and max-iter at least 1");
        return EXIT_INVALID_INPUT;
    }
    match args.fault.as_deref() {
        None | Some("inflate-b") => {}
        Some(other) => {
            eprintln!("error: unknown fault `{other}`");
            return EXIT_INVALID_INPUT;
        }
    }

    struct FlowOutcome {
        converged: bool,
        pass: bool,
        slack_i: f64,
        slack_ii: f64,
        slack_iii: f64,
        slack_c: f64,
        area_drift: f64,
        symmetry_defect: f64,
        first_below_1e6: Option<usize>,
        final_aligned_dh: f64,
        limit_floor: bool,
        history: Option<Vec<HistoryRow>>,
    }

    let want_history = args.seeds == 1;
    let fault = args.fault.clone();
    let outcomes: Vec<Result<FlowOutcome, String>> = par::map_indexed(args.seeds as usize, |i| {
        let sample_seed = mix_seed(args.seed, i as u64);
        let cell = if i % 2 == 0 {
            sample_random(sample_seed)
        } else {
            sample_random_parallelogram(sample_seed)
        }
        .map_err(|e| e.to_string())?;
        let mut traj = run_flow(&cell, args.tol, args.max_iter).map_err(|e| e.to_string())?;
        if i == 0 {
            if let Some("inflate-b") = fault.as_deref() {
                let mid = traj.states.len() / 2;
                traj.states[mid].b *= 1.01;
            }
        }
        let report = lemma_report(&traj);
        let first_below_1e6 = traj
            .states
            .iter()
            .find(|s| s.regularity_defect < 1e-6)
            .map(|s| s.n);
        let history = want_history.then(|| {
            traj.states
                .iter()
                .map(|s| HistoryRow {
                    n: s.n,
                    a: s.a,
                    b: s.b,
                    c: s.c(),
                    d: s.d(),
                    area: s.area(),
                    defect: s.regularity_defect,
                    aligned_dh: s.aligned_dh,
                })
                .collect()
        });
        Ok(FlowOutcome {
            converged: traj.converged,
            pass: report.pass,
            slack_i: report.worst_slack_i,
            slack_ii: report.worst_slack_ii,
            slack_iii: report.worst_slack_iii,
            slack_c: report.worst_slack_c,
            area_drift: report.worst_area_drift,
            symmetry_defect: report.worst_symmetry_defect,
            first_below_1e6,
            final_aligned_dh: traj.states.last().unwrap().aligned_dh,
            limit_floor: report.limit_floor_1e2 && report.limit_floor_1e4,
            history,
        })
    });

    let mut report = VerifyReport {
        seeds: args.seeds,
        seed: args.seed,
        tol: args.tol,
        max_iter: args.max_iter,
        violations: 0,
        all_converged: true,
        worst_slack_i: f64::INFINITY,
        worst_slack_ii: f64::INFINITY,
        worst_slack_iii: f64::INFINITY,
        worst_slack_c: f64::INFINITY,
        worst_area_drift: 0.0,
        worst_symmetry_defect: 0.0,
        max_iterations_to_defect_1e6: 0,
        max_final_aligned_dh: 0.0,
        limit_floor_checks_pass: true,
        fault: args.fault.clone(),
        history: None,
    };
    for (i, outcome) in outcomes.into_iter().enumerate() {
        let o = match outcome {
            Ok(o) => o,
            Err(e) => {
                eprintln!("error: flow {i}: {e}");
                return EXIT_INVALID_INPUT;
            }
        };
        if !o.pass {
            report.violations += 1;
        }
        report.all_converged &= o.converged;
        report.worst_slack_i = report.worst_slack_i.min(o.slack_i);
        report.worst_slack_ii = report.worst_slack_ii.min(o.slack_ii);
        report.worst_slack_iii = report.worst_slack_iii.min(o.slack_iii);
        report.worst_slack_c = report.worst_slack_c.min(o.slack_c);
        report.worst_area_drift = report.worst_area_drift.max(o.area_drift);
        report.worst_symmetry_defect = report.worst_symmetry_defect.max(o.symmetry_defect);
        match o.first_below_1e6 {
            Some(n) => {
                report.max_iterations_to_defect_1e6 = report.max_iterations_to_defect_1e6.max(n)
            }
            None => {
                report.all_converged = false;
                report.violations += 1;
            }
        }
        report.max_final_aligned_dh = report.max_final_aligned_dh.max(o.final_aligned_dh);
        report.limit_floor_checks_pass &= o.limit_floor;
        if o.history.is_some() {
            report.history = o.history;
        }
    }

    let json = serde_json::to_string_pretty(&report).expect("report serializes");
    if let Some(path) = &args.report {
        if let Err(e) = std::fs::write(path, &json) {
            eprintln!("error: {}: {e}", path.display());
            return EXIT_INVALID_INPUT;
        }
    } else {
        println!("{json}");
    }
    println!(
        "flows={} violations={} all_converged={} worst_slack_i={}",
        args.seeds,
        report.violations,
        report.all_converged,
        g17(report.worst_slack_i)
    );
    if report.violations == 0 && report.all_converged {
        EXIT_OK
    } else {
        EXIT_VERIFICATION_FAILED
    }
}

#[derive(Args)]
pub struct ScanArgs {
    /// Functional, e.g. `perimeter`, `cheeger`, `lambda1[:h]`, `logcap[:m]`,
    /// `riesz:exp:1`, `nonlocal-perimeter:exp:1`.
    #[arg(long)]
    functional: String,
    #[arg(long, default_value_t = 100)]
    samples: u64,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// CSV output path (`seed,value,error_estimate`).
    #[arg(long)]
    out: Option<PathBuf>,
}

/// Per-functional comparison margin, covering the reference evaluation's own
/// bias on top of each sample's error estimate.
fn scan_margin(kind: &FunctionalKind, reference: f64) -> f64 {
    match kind {
        FunctionalKind::Perimeter => 1e-12,
        FunctionalKind::Cheeger => 1e-9,
        FunctionalKind::DirichletLambda1 => 5e-3 * reference.abs(),
        FunctionalKind::LogCapacity => 2e-3 * reference.abs(),
        FunctionalKind::RieszEnergy(_) | FunctionalKind::NonlocalPerimeter(_) => {
            1e-3 * reference.abs()
        }
    }
}

pub fn scan(args: &ScanArgs) -> i32 {
    let spec = match parse_functional(&args.functional) {
        Ok(s) => s,
        Err(e) => {
            eprintln!("error: {e}");
            return EXIT_INVALID_INPUT;
        }
    };
    let star = regular_hexagon(1.0).expect("unit area");
    let reference = match evaluate(star.poly(), &spec) {
        Ok(r) => r,
        Err(e) => {
            eprintln!("error: evaluating reference cell: {e}");
            return EXIT_INVALID_INPUT;
        }
    };
    println!(
        "functional={} reference_value={} reference_error={}",
        spec.kind.label(),
        g17(reference.value),
        g17(reference.error_estimate)
    );

    let results: Vec<Result<(u64, f64, f64), String>> =
        par::map_indexed(args.samples as usize, |i| {
            let sample_seed = mix_seed(args.seed, i as u64);
            let cell = sample_random(sample_seed).map_err(|e| e.to_string())?;
            let res = evaluate(cell.poly(), &spec).map_err(|e| e.to_string())?;
            Ok((sample_seed, res.value, res.error_estimate))
        });

    let mut csv = String::from("seed,value,error_estimate\n");
    let mut all_pass = true;
    let margin = scan_margin(&spec.kind, reference.value) + reference.error_estimate;
    let mut worst_gap = f64::INFINITY;
    for (i, r) in results.into_iter().enumerate() {
        let (sample_seed, value, error) = match r {
            Ok(t) => t,
            Err(e) => {
                eprintln!("error: sample {i}: {e}");
                return EXIT_INVALID_INPUT;
            }
        };
        let _ = writeln!(csv, "{},{},{}", sample_seed, g17(value), g17(error));
        let gap = value + error + margin - reference.value;
        worst_gap = worst_gap.min(gap);
        if gap < 0.0 {
            all_pass = false;
            eprintln!(
                "optimality violated at sample {i}: value={} error={} reference={}",
                g17(value),
                g17(error),
                g17(reference.value)
            );
        }
    }
    if let Some(path) = &args.out {
        if let Err(e) = std::fs::write(path, &csv) {
            eprintln!("error: {}: {e}", path.display());
            return EXIT_INVALID_INPUT;
        }
    } else {
        print!("{csv}");
    }
    println!(
        "samples={} pass={} worst_gap={}",
        args.samples,
        all_pass,
        g17(worst_gap)
    );
    if all_pass {
        EXIT_OK
    } else {
        EXIT_VERIFICATION_FAILED
    }
}

#[derive(Args)]
pub struct TileArgs {
    /// Polygon JSON file.
    #[arg(long)]
    input: Option<PathBuf>,
    /// Built-in cell: `regular` | `random:<seed>` | `parallelogram:<8 coords>`.
    #[arg(long)]
    kind: Option<String>,
    /// Rings of lattice translates to draw/check.
    #[arg(long, default_value_t = 2)]
    rings: u32,
    /// Tiling SVG output path.
    #[arg(long)]
    svg: Option<PathBuf>,
    /// Run the tiling witness and fail on any overlap or coverage gap.
    #[arg(long)]
    check: bool,
}

pub fn tile(args: &TileArgs) -> i32 {
    let cell: HexCell = match load_cell_lenient(args.input.as_deref(), args.kind.as_deref()) {
        Ok((cell, strict)) => {
            if !strict {
                eprintln!("warning: input is not a centrally symmetric tile; checking it anyway");
            }
            cell
        }
        Err(e) => {
            eprintln!("error: {e}");
            return EXIT_INVALID_INPUT;
        }
    };
    if args.rings == 0 {
        eprintln!("error: --rings must be at least 1");
        return EXIT_INVALID_INPUT;
    }
    if let Some(path) = &args.svg {
        let rendered = match svg::tiling(&cell, args.rings) {
            Ok(s) => s,
            Err(e) => {
                eprintln!("error: {e}");
                return EXIT_INVALID_INPUT;
            }
        };
        if let Err(e) = std::fs::write(path, rendered) {
            eprintln!("error: {}: {e}", path.display());
            return EXIT_INVALID_INPUT;
        }
    }
    if args.check {
        let report = match verify_tiling(&cell, args.rings) {
            Ok(r) => r,
            Err(e) => {
                eprintln!("error: {e}");
                return EXIT_INVALID_INPUT;
            }
        };
        println!(
            "{}",
            serde_json::to_string(&report).expect("report serializes")
        );
        return if report.pass {
            EXIT_OK
        } else {
            EXIT_VERIFICATION_FAILED
        };
    }
    EXIT_OK
}
