//! Command-line front end for the qcorr library: loads states from JSON,
//! dispatches to the library quantifiers, and emits JSON/CSV reports. All
//! numbers come from library calls; this binary only does plumbing.

use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::Context;
use clap::error::ErrorKind;
use clap::{CommandFactory, Parser, Subcommand, ValueEnum};
use serde::{Deserialize, Serialize};

use qcorr::basis::LocalBasisPair;
use qcorr::coherence::{measure_by_id, CoherenceMeasure, MEASURE_IDS};
use qcorr::correlated::{c_min, correlated_coherence, CminOptions};
use qcorr::ensemble::Ensemble;
use qcorr::io;
use qcorr::linalg::{c64, CMatrix};
use qcorr::ops::party_marginal;
use qcorr::quantifiers::{
    classify, d_c_upper_bound, e_upper_bound, BoundReport, ExtensionSearchOptions,
};
use qcorr::sample::{
    ginibre_mixed_full, haar_ket, random_product_basis, random_separable, rng_from_seed,
};
use qcorr::state::{DensityMatrix, Party};
use qcorr::testbench::{render_csv, render_table, run_suite, PropertySuiteReport, SUITE_IDS};
use qcorr::QcorrError;

#[derive(Parser)]
#[command(
    name = "qcorr",
    version,
    about = "Coherence-based quantifiers of quantum correlations on small bipartite systems"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,

    /// Coherence measure id: l1 | relent.
    #[arg(long, global = true, default_value = "l1")]
    measure: String,

    /// Seed for randomized searches and samplers.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,

    /// Write the report to this file instead of stdout.
    #[arg(long, global = true, value_name = "FILE")]
    out: Option<PathBuf>,

    /// Output format. csv applies to validate summary tables only.
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    format: Format,
}

#[derive(ValueEnum, Clone, Copy, PartialEq)]
enum Format {
    Json,
    Csv,
}

#[derive(Subcommand)]
enum Command {
    /// Coherence of a bipartite state plus both marginal coherences.
    Coherence {
        /// State JSON file ("matrix" for density matrices, "vector" for kets).
        state: PathBuf,
        /// Product-basis JSON file; defaults to the computational basis.
        #[arg(long, value_name = "FILE")]
        basis: Option<PathBuf>,
    },
    /// Correlated coherence C(AB) - C(A) - C(B) in a product basis.
    Corrcoh {
        state: PathBuf,
        /// Product-basis JSON file; defaults to the computational basis.
        #[arg(long, value_name = "FILE")]
        basis: Option<PathBuf>,
    },
    /// Minimum correlated coherence over admissible local bases.
    Cmin {
        state: PathBuf,
        /// Relative eigenvalue-gap threshold for degeneracy clustering.
        #[arg(long, default_value_t = qcorr::tol::EPS_DEG_DEFAULT)]
        eps_deg: f64,
        /// Optimizer starts when degenerate clusters exist.
        #[arg(long, default_value_t = 16)]
        restarts: usize,
        /// Simplex iteration budget per start.
        #[arg(long, default_value_t = 800)]
        max_iters: usize,
        /// Optimizer stall tolerance.
        #[arg(long, default_value_t = qcorr::tol::OPT_TOL_DEFAULT)]
        tol: f64,
    },
    /// Entanglement quantifier via symmetric extensions (exact on pure states
    /// and supplied decompositions, upper bound otherwise).
    Entanglement {
        state: PathBuf,
        /// Separable decomposition (ensemble JSON); certifies the value exactly.
        #[arg(long, value_name = "FILE")]
        decomposition: Option<PathBuf>,
        /// Largest flag-ancilla dimension searched.
        #[arg(long, default_value_t = 4)]
        max_ancilla_dim: usize,
        #[arg(long, default_value_t = 16)]
        restarts: usize,
        #[arg(long, default_value_t = 800)]
        max_iters: usize,
        #[arg(long, default_value_t = qcorr::tol::OPT_TOL_DEFAULT)]
        tol: f64,
        #[arg(long, default_value_t = qcorr::tol::EPS_DEG_DEFAULT)]
        eps_deg: f64,
    },
    /// Discord-like quantifier via Bob-side extensions.
    Discord {
        state: PathBuf,
        /// Classical-quantum decomposition (ensemble JSON); certifies exactly.
        #[arg(long, value_name = "FILE")]
        decomposition: Option<PathBuf>,
        #[arg(long, default_value_t = 4)]
        max_ancilla_dim: usize,
        #[arg(long, default_value_t = 16)]
        restarts: usize,
        #[arg(long, default_value_t = 800)]
        max_iters: usize,
        #[arg(long, default_value_t = qcorr::tol::OPT_TOL_DEFAULT)]
        tol: f64,
        #[arg(long, default_value_t = qcorr::tol::EPS_DEG_DEFAULT)]
        eps_deg: f64,
    },
    /// Structural label (CC, CQ, or neither) with replayable witnesses.
    Classify {
        state: PathBuf,
        /// Residual tolerance for the structure tests.
        #[arg(long, default_value_t = 1e-8)]
        tol: f64,
    },
    /// Run verification suites; exit status is nonzero iff any suite fails.
    Validate {
        /// Comma-separated suite ids; defaults to all of them.
        #[arg(long, value_delimiter = ',')]
        suites: Vec<String>,
        /// Trials per suite.
        #[arg(long, default_value_t = 20)]
        n: u64,
    },
    /// Emit a seeded random state, basis, or ensemble as JSON.
    Sample {
        #[arg(long, value_enum)]
        kind: SampleKind,
        /// Comma-separated factor dimensions.
        #[arg(long, value_delimiter = ',', default_values_t = [2usize, 2])]
        dims: Vec<usize>,
        /// Member count for random_separable.
        #[arg(long, default_value_t = 4)]
        members: usize,
    },
}

#[derive(ValueEnum, Clone, Copy)]
enum SampleKind {
    #[value(name = "haar_ket")]
    HaarKet,
    #[value(name = "ginibre_mixed")]
    GinibreMixed,
    #[value(name = "random_product_basis")]
    RandomProductBasis,
    #[value(name = "random_separable")]
    RandomSeparable,
}

type Rows = Vec<Vec<[f64; 2]>>;

fn matrix_rows(m: &CMatrix) -> Rows {
    (0..m.nrows())
        .map(|i| (0..m.ncols()).map(|j| [m[(i, j)].re, m[(i, j)].im]).collect())
        .collect()
}

fn rows_matrix(rows: &Rows) -> anyhow::Result<CMatrix> {
    let n = rows.len();
    let cols = rows.first().map_or(0, Vec::len);
    if n == 0 || rows.iter().any(|r| r.len() != cols) {
        anyhow::bail!("basis matrix rows are empty or ragged");
    }
    let mut m = CMatrix::zeros(n, cols);
    for (i, row) in rows.iter().enumerate() {
        for (j, &[re, im]) in row.iter().enumerate() {
            m[(i, j)] = c64(re, im);
        }
    }
    Ok(m)
}

/// On-disk product-basis format, mirroring the state schema's complex entries.
#[derive(Serialize, Deserialize)]
struct BasisJson {
    dims: [usize; 2],
    basis_a: Rows,
    basis_b: Rows,
}

#[derive(Serialize)]
struct CoherenceOut {
    #[serde(rename = "C")]
    c: f64,
    #[serde(rename = "C_A")]
    c_a: f64,
    #[serde(rename = "C_B")]
    c_b: f64,
}

#[derive(Serialize)]
struct CorrcohOut {
    measure: String,
    value: f64,
}

#[derive(Serialize)]
struct CminOut {
    measure: String,
    value: f64,
    restarts_used: usize,
    converged: bool,
    free_parameters: usize,
    basis_a: Rows,
    basis_b: Rows,
}

/// Wire form of a BoundReport; the field set is fixed.
#[derive(Serialize)]
struct BoundOut {
    value: f64,
    kind: &'static str,
    ancilla_dims: [usize; 2],
    restarts: usize,
    seed: u64,
}

impl BoundOut {
    fn from_report(report: &BoundReport) -> Self {
        Self {
            value: report.value,
            kind: report.kind.as_str(),
            ancilla_dims: [report.ancilla_dims.0, report.ancilla_dims.1],
            restarts: report.diagnostics.restarts,
            seed: report.diagnostics.seed,
        }
    }
}

#[derive(Serialize)]
struct ClassifyOut {
    class: &'static str,
    cc: CcOut,
    cq: CqOut,
}

#[derive(Serialize)]
struct CcOut {
    is_cc: bool,
    c_min_value: f64,
    converged: bool,
    basis_a: Rows,
    basis_b: Rows,
}

#[derive(Serialize)]
struct CqOut {
    is_cq: bool,
    residual: f64,
    converged: bool,
    restarts_used: usize,
    witness_basis: Rows,
}

fn usage_error(msg: &str) -> ! {
    Cli::command().error(ErrorKind::InvalidValue, msg).exit()
}

fn read_text(path: &Path) -> anyhow::Result<String> {
    fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))
}

fn load_state(path: &Path) -> anyhow::Result<DensityMatrix> {
    Ok(io::bipartite_state_from_json(&read_text(path)?)?)
}

fn load_ensemble(path: &Path) -> anyhow::Result<Ensemble> {
    Ok(io::ensemble_from_json(&read_text(path)?)?)
}

fn bipartite_dims(rho: &DensityMatrix) -> anyhow::Result<(usize, usize)> {
    if rho.n_factors() != 2 {
        return Err(QcorrError::NotBipartite {
            factors: rho.n_factors(),
        }
        .into());
    }
    Ok((rho.dims()[0], rho.dims()[1]))
}

fn load_pair(basis: Option<&PathBuf>, rho: &DensityMatrix) -> anyhow::Result<LocalBasisPair> {
    match basis {
        None => {
            let (da, db) = bipartite_dims(rho)?;
            Ok(LocalBasisPair::computational(da, db))
        }
        Some(path) => {
            let parsed: BasisJson =
                serde_json::from_str(&read_text(path)?).map_err(QcorrError::from)?;
            Ok(LocalBasisPair::new(
                rows_matrix(&parsed.basis_a)?,
                rows_matrix(&parsed.basis_b)?,
            )?)
        }
    }
}

fn json<T: Serialize>(value: &T) -> anyhow::Result<String> {
    Ok(serde_json::to_string_pretty(value)?)
}

struct Output {
    payload: String,
    failed: bool,
}

fn ok(payload: String) -> anyhow::Result<Output> {
    Ok(Output {
        payload,
        failed: false,
    })
}

fn run(cli: &Cli, measure: &dyn CoherenceMeasure) -> anyhow::Result<Output> {
    match &cli.command {
        Command::Coherence { state, basis } => {
            let rho = load_state(state)?;
            let pair = load_pair(basis.as_ref(), &rho)?;
            let c = measure.evaluate_in_pair(&rho, &pair)?;
            let c_a = measure.evaluate(&party_marginal(&rho, Party::Alice)?, pair.basis_a())?;
            let c_b = measure.evaluate(&party_marginal(&rho, Party::Bob)?, pair.basis_b())?;
            ok(json(&CoherenceOut { c, c_a, c_b })?)
        }
        Command::Corrcoh { state, basis } => {
            let rho = load_state(state)?;
            let pair = load_pair(basis.as_ref(), &rho)?;
            let value = correlated_coherence(measure, &rho, &pair)?;
            ok(json(&CorrcohOut {
                measure: measure.id().to_string(),
                value,
            })?)
        }
        Command::Cmin {
            state,
            eps_deg,
            restarts,
            max_iters,
            tol,
        } => {
            let rho = load_state(state)?;
            let opts = CminOptions {
                eps_deg: *eps_deg,
                restarts: *restarts,
                max_iters: *max_iters,
                tol: *tol,
                seed: cli.seed,
            };
            let result = c_min(measure, &rho, &opts)?;
            ok(json(&CminOut {
                measure: measure.id().to_string(),
                value: result.value,
                restarts_used: result.restarts_used,
                converged: result.converged,
                free_parameters: result.free_parameters,
                basis_a: matrix_rows(result.argmin_basis.basis_a()),
                basis_b: matrix_rows(result.argmin_basis.basis_b()),
            })?)
        }
        Command::Entanglement {
            state,
            decomposition,
            max_ancilla_dim,
            restarts,
            max_iters,
            tol,
            eps_deg,
        } => {
            let rho = load_state(state)?;
            let dec = decomposition.as_ref().map(|p| load_ensemble(p)).transpose()?;
            let opts = ExtensionSearchOptions {
                max_ancilla_dim: *max_ancilla_dim,
                restarts: *restarts,
                max_iters: *max_iters,
                tol: *tol,
                eps_deg: *eps_deg,
                seed: cli.seed,
                ..ExtensionSearchOptions::default()
            };
            let report = e_upper_bound(measure, &rho, &opts, dec.as_ref())?;
            ok(json(&BoundOut::from_report(&report))?)
        }
        Command::Discord {
            state,
            decomposition,
            max_ancilla_dim,
            restarts,
            max_iters,
            tol,
            eps_deg,
        } => {
            let rho = load_state(state)?;
            let dec = decomposition.as_ref().map(|p| load_ensemble(p)).transpose()?;
            let opts = ExtensionSearchOptions {
                max_ancilla_dim: *max_ancilla_dim,
                restarts: *restarts,
                max_iters: *max_iters,
                tol: *tol,
                eps_deg: *eps_deg,
                seed: cli.seed,
                ..ExtensionSearchOptions::default()
            };
            let report = d_c_upper_bound(measure, &rho, &opts, dec.as_ref())?;
            ok(json(&BoundOut::from_report(&report))?)
        }
        Command::Classify { state, tol } => {
            let rho = load_state(state)?;
            let (class, cc, cq) = classify(&rho, *tol)?;
            ok(json(&ClassifyOut {
                class: class.as_str(),
                cc: CcOut {
                    is_cc: cc.is_cc,
                    c_min_value: cc.c_min_value,
                    converged: cc.converged,
                    basis_a: matrix_rows(cc.witness.basis_a()),
                    basis_b: matrix_rows(cc.witness.basis_b()),
                },
                cq: CqOut {
                    is_cq: cq.is_cq,
                    residual: cq.residual,
                    converged: cq.converged,
                    restarts_used: cq.restarts_used,
                    witness_basis: matrix_rows(&cq.witness_basis),
                },
            })?)
        }
        Command::Validate { suites, n } => {
            let ids: Vec<&str> = if suites.is_empty() {
                SUITE_IDS.to_vec()
            } else {
                suites.iter().map(String::as_str).collect()
            };
            for id in &ids {
                if !SUITE_IDS.contains(id) {
                    usage_error(&format!(
                        "unknown suite id '{id}' (expected one of: {})",
                        SUITE_IDS.join(", ")
                    ));
                }
            }
            let mut reports: Vec<PropertySuiteReport> = Vec::new();
            for id in &ids {
                reports.push(run_suite(id, measure, *n, cli.seed)?);
            }
            eprint!("{}", render_table(&reports));
            let payload = match cli.format {
                Format::Json => json(&reports)?,
                Format::Csv => render_csv(&reports),
            };
            Ok(Output {
                payload,
                failed: reports.iter().any(|r| !r.passed()),
            })
        }
        Command::Sample {
            kind,
            dims,
            members,
        } => {
            let mut rng = rng_from_seed(cli.seed);
            let payload = match kind {
                SampleKind::HaarKet => io::ket_to_json(&haar_ket(dims, &mut rng)),
                SampleKind::GinibreMixed => {
                    io::state_to_json(&ginibre_mixed_full(dims, &mut rng)?)
                }
                SampleKind::RandomProductBasis => {
                    let [da, db] = two_dims(dims);
                    let pair = random_product_basis(da, db, &mut rng);
                    json(&BasisJson {
                        dims: [da, db],
                        basis_a: matrix_rows(pair.basis_a()),
                        basis_b: matrix_rows(pair.basis_b()),
                    })?
                }
                SampleKind::RandomSeparable => {
                    let [da, db] = two_dims(dims);
                    io::ensemble_to_json(&random_separable(da, db, *members, &mut rng)?)
                }
            };
            ok(payload)
        }
    }
}

fn two_dims(dims: &[usize]) -> [usize; 2] {
    match dims {
        &[da, db] => [da, db],
        _ => usage_error(&format!(
            "--dims must name exactly two factors, got {}",
            dims.len()
        )),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if !MEASURE_IDS.contains(&cli.measure.as_str()) {
        usage_error(&format!(
            "unknown coherence measure id '{}' (expected one of: {})",
            cli.measure,
            MEASURE_IDS.join(", ")
        ));
    }
    if cli.format == Format::Csv && !matches!(cli.command, Command::Validate { .. }) {
        usage_error("csv output is only available for validate summary tables");
    }
    let measure = measure_by_id(&cli.measure).expect("id checked above");

    match run(&cli, measure) {
        Ok(output) => {
            let mut payload = output.payload;
            if !payload.ends_with('\n') {
                payload.push('\n');
            }
            if let Some(path) = &cli.out {
                if let Err(e) = fs::write(path, &payload)
                    .with_context(|| format!("writing {}", path.display()))
                {
                    eprintln!("error: {e:#}");
                    return ExitCode::from(1);
                }
            } else {
                print!("{payload}");
            }
            if output.failed {
                ExitCode::from(1)
            } else {
                ExitCode::SUCCESS
            }
        }
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(1)
        }
    }
}
