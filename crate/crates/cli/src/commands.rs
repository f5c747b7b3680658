use std::fs;
use std::path::Path;

use num_rational::Ratio;
use serde::Serialize;
use trotter_core::combinatorics::{self, LargeDeviation, ProportionBound};
use trotter_core::experiments::{almost_sure_run, concentration_experiment, generate_point_cloud};
use trotter_core::linalg::MatrixJson;
use trotter_core::metrics::{self, MetricValue};
use trotter_core::products::{appendix_closed_form, bound_sweep, check_lie_trotter, BoundCheck};
use trotter_core::words::{self, Word};
use trotter_core::{fixtures, FactorCache, MatrixTuple, Mode, NormKind};

use crate::args::*;
use crate::output::{cloud_csv, report_json};
use crate::CliError;

fn read_matrix(path: &Path) -> Result<trotter_core::ComplexMatrix, CliError> {
    let text = fs::read_to_string(path)
        .map_err(|e| CliError::Input(format!("cannot read matrix file {}: {e}", path.display())))?;
    Ok(MatrixJson::parse(&text)?)
}

pub fn load_matrices(args: &MatrixArgs) -> Result<MatrixTuple, CliError> {
    if !args.matrices.is_empty() {
        let ms = args
            .matrices
            .iter()
            .map(|p| read_matrix(p))
            .collect::<Result<Vec<_>, _>>()?;
        return Ok(MatrixTuple::new(ms)?);
    }
    match (&args.a, &args.b) {
        (Some(a), Some(b)) => Ok(MatrixTuple::pair(read_matrix(a)?, read_matrix(b)?)?),
        (None, None) => Ok(match args.preset {
            Preset::E12E21 => fixtures::e12_e21(),
            Preset::E12E11 => fixtures::e12_e11(),
            Preset::CommutingDiagonal => fixtures::commuting_diagonal(),
            Preset::CommutingPolynomial => fixtures::commuting_polynomial(),
            Preset::QuasiCommuting => fixtures::quasi_commuting(),
            Preset::CommutatorProportional => fixtures::commutator_proportional(),
        }),
        _ => Err(CliError::Input("--a and --b must be given together".into())),
    }
}

fn mode_of(s: &SelectionArgs) -> Mode {
    match s.mode {
        ModeArg::Exhaustive => Mode::Exhaustive,
        ModeArg::Sample => Mode::Sample {
            count: s.count,
            seed: s.seed,
        },
    }
}

#[derive(Serialize)]
struct MetricsReport {
    word1: String,
    word2: String,
    n: usize,
    alphabet: usize,
    dsw: u64,
    rho1: MetricValue,
    rho_inf: MetricValue,
}

#[derive(Serialize)]
struct StirlingReport {
    n: u64,
    p: f64,
    proportion: f64,
    /// `2e^{-p²}`.
    limit: f64,
}

#[derive(Serialize)]
struct LargeDeviationReport {
    n: u64,
    eps: f64,
    #[serde(flatten)]
    values: LargeDeviation,
    quotient: f64,
    refined_quotient: f64,
}

#[derive(Serialize)]
struct AppendixReport {
    n: usize,
    words: usize,
    max_error: f64,
    worst_word: String,
    tolerance: f64,
    holds: bool,
}

/// Runs one non-serving subcommand and returns the text to emit.
pub fn execute(cmd: &Command) -> Result<String, CliError> {
    match cmd {
        Command::Enumerate(a) => {
            let ws: Vec<String> = words::enumerate_words(a.n, a.alphabet)?
                .map(|w| w.to_string())
                .collect();
            Ok(match a.format {
                None => ws.iter().map(|w| format!("{w}\n")).collect(),
                Some(Format::Json) => report_json(&ws),
                Some(Format::Csv) => std::iter::once("word\n".to_string())
                    .chain(ws.iter().map(|w| format!("{w}\n")))
                    .collect(),
            })
        }
        Command::Metrics(a) => {
            let w: Word = a.word1.parse()?;
            let v = Word::parse_with_alphabet(&a.word2, w.alphabet())?;
            let r = MetricsReport {
                word1: w.to_string(),
                word2: v.to_string(),
                n: w.n(),
                alphabet: w.alphabet(),
                dsw: metrics::swap_distance(&w, &v)?,
                rho1: metrics::rho1(&w, &v)?,
                rho_inf: metrics::rho_inf(&w, &v)?,
            };
            Ok(match a.format {
                None => format!("dsw={}\nrho1={}\nrho_inf={}\n", r.dsw, r.rho1, r.rho_inf),
                Some(Format::Json) => report_json(&r),
                Some(Format::Csv) => format!(
                    "word1,word2,dsw,rho1,rho_inf\n{},{},{},{},{}\n",
                    r.word1, r.word2, r.dsw, r.rho1, r.rho_inf
                ),
            })
        }
        Command::Bounds(a) => {
            if let Some(p) = a.p {
                let r = StirlingReport {
                    n: a.n,
                    p,
                    proportion: combinatorics::stirling_proportion(a.n, p)?,
                    limit: 2.0 * (-p * p).exp(),
                };
                return Ok(report_json(&r));
            }
            if let Some(eps) = a.eps {
                let values = combinatorics::large_deviation_ratio(a.n, eps)?;
                let r = LargeDeviationReport {
                    n: a.n,
                    eps,
                    values,
                    quotient: values.quotient(),
                    refined_quotient: values.refined_quotient(),
                };
                return Ok(report_json(&r));
            }
            if a.n == 0 {
                return Err(CliError::Input("--n must be at least 1".into()));
            }
            let ms: Vec<u64> = match a.m {
                Some(m) => vec![m],
                None => (1..=a.n).collect(),
            };
            let reports = ms
                .iter()
                .map(|&m| {
                    combinatorics::count_words_far(a.n as usize, Ratio::new(m, a.n), a.alphabet)
                })
                .collect::<Result<Vec<ProportionBound>, _>>()?;
            Ok(report_json(&reports))
        }
        Command::Trotter(a) => {
            let t = load_matrices(&a.matrices)?;
            let (x, y) = two(&t)?;
            let checks =
                a.n.iter()
                    .map(|&n| check_lie_trotter(x, y, n))
                    .collect::<Result<Vec<BoundCheck>, _>>()?;
            Ok(report_json(&checks))
        }
        Command::BoundSweep(a) => {
            let t = load_matrices(&a.matrices)?;
            Ok(report_json(&bound_sweep(
                &t,
                a.max_n,
                a.words_per_n,
                a.seed,
            )?))
        }
        Command::Concentrate(a) => {
            let t = load_matrices(&a.matrices)?;
            let r =
                concentration_experiment(&t, a.selection.n, mode_of(&a.selection), a.threshold)?;
            Ok(report_json(&r))
        }
        Command::Cloud(a) => {
            let t = load_matrices(&a.matrices)?;
            let cloud = generate_point_cloud(&t, a.selection.n, mode_of(&a.selection))?;
            Ok(match a.format {
                Format::Json => report_json(&cloud),
                Format::Csv => cloud_csv(&cloud),
            })
        }
        Command::AsRun(a) => {
            let t = load_matrices(&a.matrices)?;
            Ok(report_json(&almost_sure_run(&t, &a.n, a.seed)?))
        }
        Command::AppendixCheck(a) => {
            let t = fixtures::e12_e11();
            let cache = FactorCache::new(&t, a.n)?;
            let mut r = AppendixReport {
                n: a.n,
                words: 0,
                max_error: 0.0,
                worst_word: String::new(),
                tolerance: a.tolerance,
                holds: true,
            };
            for w in words::enumerate_words(a.n, 2)? {
                let err =
                    appendix_closed_form(&w)?.distance(&cache.product(&w)?, NormKind::Frobenius);
                if err > r.max_error || r.words == 0 {
                    r.max_error = err;
                    r.worst_word = w.to_string();
                }
                r.words += 1;
            }
            r.holds = r.max_error <= a.tolerance;
            Ok(report_json(&r))
        }
        Command::Serve(_) => unreachable!("serve is dispatched before execute"),
    }
}

fn two(
    t: &MatrixTuple,
) -> Result<(&trotter_core::ComplexMatrix, &trotter_core::ComplexMatrix), CliError> {
    match t.matrices() {
        [a, b] => Ok((a, b)),
        _ => Err(CliError::Input(format!(
            "this command needs exactly two matrices, got {}",
            t.len()
        ))),
    }
}
