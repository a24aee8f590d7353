//! Command-line surface wiring the analysis modules into reproducible runs
//! with file-based input and output.
//!
//! Exit codes: 0 = success / property holds, 1 = analyzed and the property
//! fails, 2 = usage or input error. Scripts can branch on the math outcome.

use std::ffi::OsString;
use std::fs;
use std::path::PathBuf;

use clap::{Parser, Subcommand};

use crate::cp_analysis::{
    choi_matrix, is_completely_positive, kossakowski_cp_test, kraus_decomposition,
    kossakowski_sum_condition, breakdown_witness, perturbation_cp_interval,
};
use crate::documents::{
    self, CounterexampleDocument, CpCertificateDocument, GeneratorDocument, KrausDocument,
    SumConditionDocument, BreakdownWitnessData, PerturbationDocument, PerturbationReportDocument,
    PositivityDocument, DOCUMENT_VERSION,
};
use crate::dynamics::{evolution_map, DEFAULT_TIME_GRID};
use crate::generators::{GeneratorSpec, KossakowskiMatrix, SuperoperatorMatrix};
use crate::numerics::{self, hermitian_eigensystem, max_abs, projector};
use crate::positivity::{
    counterexample_eigenvalues, scan_z_minimum, tensor_positivity_search, verify_counterexample,
    CounterexampleGrid, SchmidtState, SearchVerdict, DEFAULT_BUDGET,
};
use crate::presets;
use crate::{Error, Result};

pub const EXIT_OK: i32 = 0;
pub const EXIT_FAILS: i32 = 1;
pub const EXIT_INPUT_ERROR: i32 = 2;

/// Environment variable naming the default directory for generated files.
pub const OUTPUT_DIR_ENV: &str = "GKSL_OUTPUT_DIR";

#[derive(Parser, Debug)]
#[command(
    name = "gksl",
    version,
    about = "GKSL semigroups from Kossakowski matrices: positivity and complete-positivity analysis"
)]
struct Cli {
    /// Seed for all sampling searches; identical inputs and seed give
    /// byte-identical outputs.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,

    /// Verdict tolerance for CP and positivity tests.
    #[arg(long, global = true, default_value_t = 1e-9)]
    tolerance: f64,

    /// Comma-separated time grid, e.g. "0,0.1,1,10".
    #[arg(long, global = true)]
    grid: Option<String>,

    /// Pure-state samples per time point.
    #[arg(long, global = true, default_value_t = DEFAULT_BUDGET)]
    budget: usize,

    /// Output file; for `counterexample` an output directory. Defaults to
    /// stdout (files fall back to $GKSL_OUTPUT_DIR, then the working
    /// directory).
    #[arg(long, global = true)]
    output: Option<PathBuf>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Test complete positivity of a generator document via both the
    /// Kossakowski spectrum and the Choi spectrum of the exponentiated map.
    CheckCp {
        /// Generator document path or a paper:* preset id.
        generator: String,
    },
    /// Search the factorized map of two generators for positivity
    /// violations over the time grid.
    TensorPositivity {
        generator1: String,
        generator2: String,
    },
    /// Verify the closed-form factorized counterexample over a parameter
    /// grid and emit z±(t) curve files.
    Counterexample {
        /// Damping rate of the elementary evolutions.
        #[arg(long, default_value_t = 4.0)]
        rate: f64,
        /// Comma-separated Schmidt weights.
        #[arg(long)]
        mu_grid: Option<String>,
        /// Comma-separated alpha angles (radians).
        #[arg(long)]
        alpha_grid: Option<String>,
        /// Comma-separated varphi angles (radians).
        #[arg(long)]
        varphi_grid: Option<String>,
    },
    /// Evaluate the necessary condition C1 + C2 >= 0; emits the constructive
    /// witness when the condition fails.
    Lemma1 {
        generator1: String,
        generator2: String,
    },
    /// Largest ε0 with C + εΓ positive semidefinite on [0, ε0], plus a CP
    /// check on a sampled ε grid inside the interval.
    Perturb {
        generator: String,
        perturbation: String,
        #[arg(long, default_value_t = 10.0)]
        eps_max: f64,
    },
    /// Kraus decomposition of the evolved map exp(Lt).
    Kraus {
        generator: String,
        #[arg(long, default_value_t = 1.0)]
        time: f64,
    },
    /// Run a named experiment preset or materialize a document preset.
    Preset { name: String },
}

struct Outcome {
    code: i32,
    stdout: Option<String>,
    files: Vec<(PathBuf, String)>,
}

pub fn run<I, S>(args: I) -> i32
where
    I: IntoIterator<Item = S>,
    S: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.exit_code() == 0 {
                EXIT_OK
            } else {
                EXIT_INPUT_ERROR
            };
            let _ = e.print();
            return code;
        }
    };
    match dispatch(&cli) {
        Ok(outcome) => {
            for (path, contents) in &outcome.files {
                if let Some(parent) = path.parent() {
                    if !parent.as_os_str().is_empty() {
                        if let Err(e) = fs::create_dir_all(parent) {
                            eprintln!("gksl: cannot create {}: {e}", parent.display());
                            return EXIT_INPUT_ERROR;
                        }
                    }
                }
                if let Err(e) = documents::write_atomic(path, contents) {
                    eprintln!("gksl: cannot write {}: {e}", path.display());
                    return EXIT_INPUT_ERROR;
                }
            }
            if let Some(text) = &outcome.stdout {
                print!("{text}");
            }
            outcome.code
        }
        Err(e) => {
            eprintln!("gksl: {e}");
            EXIT_INPUT_ERROR
        }
    }
}

fn dispatch(cli: &Cli) -> Result<Outcome> {
    match &cli.command {
        Command::CheckCp { generator } => cmd_check_cp(cli, generator),
        Command::TensorPositivity {
            generator1,
            generator2,
        } => cmd_tensor_positivity(cli, generator1, generator2),
        Command::Counterexample {
            rate,
            mu_grid,
            alpha_grid,
            varphi_grid,
        } => cmd_counterexample(cli, *rate, mu_grid, alpha_grid, varphi_grid),
        Command::Lemma1 {
            generator1,
            generator2,
        } => cmd_lemma1(cli, generator1, generator2),
        Command::Perturb {
            generator,
            perturbation,
            eps_max,
        } => cmd_perturb(cli, generator, perturbation, *eps_max),
        Command::Kraus { generator, time } => cmd_kraus(cli, generator, *time),
        Command::Preset { name } => cmd_preset(cli, name),
    }
}

fn parse_list(text: &str, what: &str) -> Result<Vec<f64>> {
    let mut out = Vec::new();
    for piece in text.split(',') {
        let piece = piece.trim();
        if piece.is_empty() {
            continue;
        }
        let value: f64 = piece.parse().map_err(|_| {
            Error::InvalidArgument(format!("invalid {what} entry {piece:?}"))
        })?;
        if !value.is_finite() {
            return Err(Error::InvalidArgument(format!(
                "{what} entries must be finite, got {value}"
            )));
        }
        out.push(value);
    }
    if out.is_empty() {
        return Err(Error::InvalidArgument(format!("{what} list is empty")));
    }
    Ok(out)
}

fn time_grid(cli: &Cli) -> Result<Vec<f64>> {
    match &cli.grid {
        Some(text) => {
            let grid = parse_list(text, "time grid")?;
            if grid.iter().any(|&t| t < 0.0) {
                return Err(Error::InvalidArgument(
                    "time grid entries must be >= 0".into(),
                ));
            }
            Ok(grid)
        }
        None => Ok(DEFAULT_TIME_GRID.to_vec()),
    }
}

fn load_generator(arg: &str) -> Result<GeneratorSpec> {
    let text = presets::resolve_document_text(arg)?;
    let doc: GeneratorDocument = documents::parse(&text)?;
    doc.to_spec()
}

fn emit(cli: &Cli, code: i32, report: String) -> Outcome {
    match &cli.output {
        Some(path) => Outcome {
            code,
            stdout: None,
            files: vec![(path.clone(), report)],
        },
        None => Outcome {
            code,
            stdout: Some(report),
            files: Vec::new(),
        },
    }
}

fn cmd_check_cp(cli: &Cli, generator: &str) -> Result<Outcome> {
    let spec = load_generator(generator)?;
    let koss = kossakowski_cp_test(spec.kossakowski(), cli.tolerance);
    let choi_times: Vec<f64> = match &cli.grid {
        Some(text) => parse_list(text, "time grid")?
            .into_iter()
            .filter(|&t| t > 0.0)
            .collect(),
        None => vec![0.1, 1.0],
    };
    let l = spec.superoperator();
    let mut min_choi = f64::INFINITY;
    let mut choi_cp = true;
    for &t in &choi_times {
        let map = evolution_map(&l, t)?;
        let verdict = is_completely_positive(&map, cli.tolerance)?;
        min_choi = min_choi.min(verdict.min_choi_eigenvalue.unwrap_or(f64::INFINITY));
        choi_cp &= verdict.is_cp;
    }
    if !choi_times.is_empty() && choi_cp != koss.is_cp {
        return Err(Error::InvalidArgument(format!(
            "analysis routes disagree: Kossakowski min {:.3e}, Choi min {:.3e}",
            koss.min_kossakowski_eigenvalue.unwrap_or(f64::NAN),
            min_choi
        )));
    }
    let witness = if koss.is_cp {
        None
    } else {
        let eig = hermitian_eigensystem(spec.kossakowski().matrix())?;
        Some(documents::vector_to_data(&eig.eigenvectors.column(0).into_owned()))
    };
    let doc = CpCertificateDocument {
        version: DOCUMENT_VERSION,
        kind: "cp-certificate".into(),
        verdict: if koss.is_cp { "cp" } else { "not-cp" }.into(),
        min_choi_eigenvalue: if choi_times.is_empty() {
            None
        } else {
            Some(min_choi)
        },
        min_kossakowski_eigenvalue: koss.min_kossakowski_eigenvalue,
        tolerance: cli.tolerance,
        seed: cli.seed,
        choi_times,
        witness,
    };
    let code = if koss.is_cp { EXIT_OK } else { EXIT_FAILS };
    Ok(emit(cli, code, documents::to_json(&doc)))
}

fn cmd_tensor_positivity(cli: &Cli, generator1: &str, generator2: &str) -> Result<Outcome> {
    let g1 = load_generator(generator1)?;
    let g2 = load_generator(generator2)?;
    if g1.n() != g2.n() {
        return Err(Error::DimensionMismatch {
            expected: g1.n(),
            actual: g2.n(),
        });
    }
    let grid = time_grid(cli)?;
    let report = tensor_positivity_search(&g1, &g2, &grid, cli.budget, cli.seed)?;
    let code = match report.verdict {
        SearchVerdict::PositiveWithinBudget => EXIT_OK,
        SearchVerdict::ViolationFound => EXIT_FAILS,
    };
    let doc = PositivityDocument {
        version: DOCUMENT_VERSION,
        kind: "positivity-report".into(),
        verdict: report.verdict.as_str().into(),
        min_eigenvalue_found: report.min_eigenvalue_found,
        witness_state: documents::vector_to_data(&report.witness_state),
        witness_time: report.witness_time,
        samples_used: report.samples_used,
        refinement_steps: report.refinement_steps,
        seed: report.seed,
        budget: cli.budget,
        grid,
        note: report.note.clone().or_else(|| {
            (report.verdict == SearchVerdict::PositiveWithinBudget).then(|| {
                "no violation found within budget; sampling cannot certify positivity".into()
            })
        }),
    };
    Ok(emit(cli, code, documents::to_json(&doc)))
}

fn output_dir(cli: &Cli) -> PathBuf {
    if let Some(path) = &cli.output {
        path.clone()
    } else if let Ok(dir) = std::env::var(OUTPUT_DIR_ENV) {
        PathBuf::from(dir)
    } else {
        PathBuf::from(".")
    }
}

fn cmd_counterexample(
    cli: &Cli,
    rate: f64,
    mu_grid: &Option<String>,
    alpha_grid: &Option<String>,
    varphi_grid: &Option<String>,
) -> Result<Outcome> {
    if rate <= 0.0 || rate.is_nan() {
        return Err(Error::InvalidArgument(format!(
            "rate must be positive, got {rate}"
        )));
    }
    let mut grid = CounterexampleGrid {
        times: time_grid(cli)?,
        ..CounterexampleGrid::default()
    };
    if let Some(text) = mu_grid {
        grid.mu = parse_list(text, "mu grid")?;
    }
    if let Some(text) = alpha_grid {
        grid.alpha = parse_list(text, "alpha grid")?;
    }
    if let Some(text) = varphi_grid {
        grid.varphi = parse_list(text, "varphi grid")?;
    }
    let report = verify_counterexample(&grid, rate)?;
    let refined_z_minimum = scan_z_minimum(rate, 22);
    let closed_form_ok = report.max_closed_form_residual <= 1e-9;
    let eigenvalue_match_ok = report.max_eigenvalue_mismatch <= 1e-9;
    let z_nonnegative_ok = report.min_z_eigenvalue >= -1e-12 && refined_z_minimum >= -1e-12;
    let state_positive_ok = report.min_state_eigenvalue >= -1e-10;
    let passed = report.passed && z_nonnegative_ok;
    let doc = CounterexampleDocument {
        version: DOCUMENT_VERSION,
        kind: "counterexample-report".into(),
        rate,
        mu_grid: grid.mu.clone(),
        alpha_grid: grid.alpha.clone(),
        varphi_grid: grid.varphi.clone(),
        time_grid: grid.times.clone(),
        points_checked: report.points_checked,
        max_closed_form_residual: report.max_closed_form_residual,
        max_eigenvalue_mismatch: report.max_eigenvalue_mismatch,
        min_z_eigenvalue: report.min_z_eigenvalue,
        min_state_eigenvalue: report.min_state_eigenvalue,
        refined_z_minimum,
        closed_form_ok,
        eigenvalue_match_ok,
        z_nonnegative_ok,
        state_positive_ok,
        passed,
        failures: report.failures.clone(),
    };
    let dir = output_dir(cli);
    let mut files = vec![(
        dir.join("counterexample_report.json"),
        documents::to_json(&doc),
    )];
    files.extend(curve_files(&dir, &grid, rate)?);
    Ok(Outcome {
        code: if passed { EXIT_OK } else { EXIT_FAILS },
        stdout: cli.output.is_none().then(|| documents::to_json(&doc)),
        files,
    })
}

/// One delimiter-separated curve file per (μ, α, φ) grid point with columns
/// t, z_plus, z_minus, min_eig_numeric.
fn curve_files(
    dir: &std::path::Path,
    grid: &CounterexampleGrid,
    rate: f64,
) -> Result<Vec<(PathBuf, String)>> {
    let (g1, g2) = crate::positivity::elementary_pair(rate);
    let l = crate::generators::tensor_sum_generator(&g1, &g2)?;
    let maps: Vec<(f64, SuperoperatorMatrix)> = grid
        .times
        .iter()
        .map(|&t| Ok((t, evolution_map(&l, t)?)))
        .collect::<Result<_>>()?;
    let mut files = Vec::new();
    for &mu in &grid.mu {
        for &alpha in &grid.alpha {
            for &varphi in &grid.varphi {
                let state = SchmidtState::from_angles(mu, alpha, varphi)?;
                let rho0 = projector(&state.state_vector());
                let mut text = String::from("t,z_plus,z_minus,min_eig_numeric\n");
                for (t, map) in &maps {
                    let (zp, zm) = counterexample_eigenvalues(mu, alpha, *t, rate)?;
                    let evolved = map.apply(&rho0)?;
                    let sym = (&evolved + evolved.adjoint()).scale(0.5);
                    let min = numerics::min_eigenvalue(&sym)?;
                    text.push_str(&format!("{t},{zp},{zm},{min}\n"));
                }
                let name = format!("curve_mu{mu:.4}_alpha{alpha:.4}_phi{varphi:.4}.csv");
                files.push((dir.join(name), text));
            }
        }
    }
    Ok(files)
}

fn cmd_lemma1(cli: &Cli, generator1: &str, generator2: &str) -> Result<Outcome> {
    let g1 = load_generator(generator1)?;
    let g2 = load_generator(generator2)?;
    let verdict = kossakowski_sum_condition(g1.kossakowski(), g2.kossakowski(), cli.tolerance)?;
    let witness = if verdict.holds {
        None
    } else {
        let w = breakdown_witness(&g1, &g2, cli.seed)?;
        let short_time = 1e-3;
        let short_time_value = w.short_time_check(&g1, &g2, short_time)?;
        Some(BreakdownWitnessData {
            xi: documents::vector_to_data(&w.xi),
            phi: documents::matrix_to_data(&w.phi),
            psi: documents::matrix_to_data(&w.psi),
            l_value: w.l_value,
            quadratic_form: w.quadratic_form,
            short_time,
            short_time_value,
            seed: w.seed,
        })
    };
    let doc = SumConditionDocument {
        version: DOCUMENT_VERSION,
        kind: "lemma1-report".into(),
        holds: verdict.holds,
        min_eigenvalue: verdict.min_eigenvalue,
        tolerance: cli.tolerance,
        witness,
    };
    let code = if verdict.holds { EXIT_OK } else { EXIT_FAILS };
    Ok(emit(cli, code, documents::to_json(&doc)))
}

fn cmd_perturb(cli: &Cli, generator: &str, perturbation: &str, eps_max: f64) -> Result<Outcome> {
    let spec = load_generator(generator)?;
    let text = presets::resolve_document_text(perturbation)?;
    let pdoc: PerturbationDocument = documents::parse(&text)?;
    let gamma = pdoc.to_matrix()?;
    let base_min_eigenvalue = spec.kossakowski().min_eigenvalue();
    let epsilon_0 = perturbation_cp_interval(spec.kossakowski(), &gamma, eps_max).map_err(
        |e| match e {
            Error::NotCompletelyPositive { min_eigenvalue } => Error::InvalidArgument(format!(
                "precondition: the unperturbed coefficient matrix must be positive \
                 semidefinite, but its minimum eigenvalue is {min_eigenvalue:.6e}"
            )),
            other => other,
        },
    )?;
    // Confirm complete positivity across the interval on a sampled grid.
    let grid_points: Vec<f64> = (0..=10).map(|i| epsilon_0 * i as f64 / 10.0).collect();
    let mut grid_all_cp = true;
    for &eps in &grid_points {
        let c_eps = KossakowskiMatrix::new(spec.kossakowski().matrix() + gamma.scale(eps))?;
        grid_all_cp &= kossakowski_cp_test(&c_eps, cli.tolerance).is_cp;
    }
    let doc = PerturbationReportDocument {
        version: DOCUMENT_VERSION,
        kind: "perturbation-report".into(),
        eps_max,
        epsilon_0,
        tolerance: cli.tolerance,
        base_min_eigenvalue,
        grid_points,
        grid_all_cp,
    };
    let code = if grid_all_cp { EXIT_OK } else { EXIT_FAILS };
    Ok(emit(cli, code, documents::to_json(&doc)))
}

fn cmd_kraus(cli: &Cli, generator: &str, time: f64) -> Result<Outcome> {
    let spec = load_generator(generator)?;
    let map = evolution_map(&spec.superoperator(), time)?;
    let choi = choi_matrix(&map);
    let kraus = match kraus_decomposition(&choi, cli.tolerance) {
        Ok(k) => k,
        Err(Error::NotCompletelyPositive { min_eigenvalue }) => {
            eprintln!(
                "gksl: map at t = {time} is not completely positive \
                 (min Choi eigenvalue {min_eigenvalue:.6e}); no Kraus form exists"
            );
            return Ok(Outcome {
                code: EXIT_FAILS,
                stdout: None,
                files: Vec::new(),
            });
        }
        Err(other) => return Err(other),
    };
    let rebuilt = kraus.to_superoperator();
    let doc = KrausDocument {
        version: DOCUMENT_VERSION,
        kind: "kraus-set".into(),
        n: spec.n(),
        time,
        operators: kraus.operators().iter().map(documents::matrix_to_data).collect(),
        weights: kraus.weights().to_vec(),
        completeness_residual: kraus.completeness_residual(),
        reconstruction_residual: max_abs(&(rebuilt.matrix() - map.matrix())),
    };
    Ok(emit(cli, EXIT_OK, documents::to_json(&doc)))
}

fn cmd_preset(cli: &Cli, name: &str) -> Result<Outcome> {
    if let Some(text) = presets::document(name) {
        return Ok(emit(cli, EXIT_OK, text));
    }
    let expanded = presets::experiment(name).ok_or_else(|| {
        Error::InvalidArgument(format!(
            "unknown preset {name:?}; documents: {:?}, experiments: {:?}",
            presets::DOCUMENT_PRESETS,
            presets::EXPERIMENT_PRESETS
        ))
    })?;
    let mut args: Vec<String> = vec!["gksl".into()];
    args.extend(expanded);
    args.push("--seed".into());
    args.push(cli.seed.to_string());
    args.push("--tolerance".into());
    args.push(cli.tolerance.to_string());
    args.push("--budget".into());
    args.push(cli.budget.to_string());
    if let Some(grid) = &cli.grid {
        args.push("--grid".into());
        args.push(grid.clone());
    }
    if let Some(output) = &cli.output {
        args.push("--output".into());
        args.push(output.display().to_string());
    }
    let nested = Cli::try_parse_from(&args)
        .map_err(|e| Error::InvalidArgument(format!("preset expansion failed: {e}")))?;
    dispatch(&nested)
}
