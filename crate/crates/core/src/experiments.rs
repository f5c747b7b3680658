//! Concentration of `F(w)` around `e^{A_1 + … + A_N}`: exhaustive and Monte
//! Carlo proportion reports, single-sequence almost-sure runs, and point
//! clouds of all products for visualization.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{ComplexMatrix, MatrixJson, NormKind};
use crate::products::{FactorCache, MatrixTuple, PairConstants, BOUND_NORM};
use crate::words::{self, Word, WordSampler};

/// Norm for reported distances `‖F(w) − e^{ΣA}‖`.
pub const DISTANCE_NORM: NormKind = NormKind::Frobenius;

/// Fixed quantiles in distance summaries.
pub const QUANTILES: [f64; 3] = [0.5, 0.9, 0.99];

const CHUNK: u128 = 2048;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum Mode {
    Exhaustive,
    Sample { count: usize, seed: u64 },
}

impl Mode {
    fn seed(&self) -> u64 {
        match self {
            Mode::Exhaustive => 0,
            Mode::Sample { seed, .. } => *seed,
        }
    }
}

/// Words of `W_n^(N)` selected by `mode`: all of them in lexicographic order,
/// or `count` uniform draws (repeats allowed) in draw order.
fn selected_words(n: usize, alphabet: usize, mode: Mode) -> Result<Vec<Word>> {
    match mode {
        Mode::Exhaustive => {
            let total = words::enumerate_words(n, alphabet)?.remaining();
            let chunks: Vec<u128> = (0..total.div_ceil(CHUNK)).collect();
            let parts = chunks
                .into_par_iter()
                .map(|c| {
                    words::enumerate_range(n, alphabet, c * CHUNK, (c + 1) * CHUNK)
                        .map(|it| it.collect::<Vec<_>>())
                })
                .collect::<Result<Vec<_>>>()?;
            Ok(parts.into_iter().flatten().collect())
        }
        Mode::Sample { count, seed } => {
            if count == 0 {
                return Err(Error::Range("sample count must be at least 1".into()));
            }
            let mut sampler = WordSampler::new(n, alphabet, seed)?;
            Ok((0..count).map(|_| sampler.next_word()).collect())
        }
    }
}

fn products_of(words: &[Word], cache: &FactorCache) -> Result<Vec<ComplexMatrix>> {
    words.par_iter().map(|w| cache.product(w)).collect()
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Quantile {
    pub q: f64,
    pub value: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DistanceSummary {
    pub min: f64,
    pub max: f64,
    pub mean: f64,
    pub quantiles: Vec<Quantile>,
}

impl DistanceSummary {
    /// Nearest-rank quantiles over the sorted sample.
    pub fn of(distances: &[f64]) -> Self {
        let mut sorted = distances.to_vec();
        sorted.sort_by(f64::total_cmp);
        let len = sorted.len();
        let quantiles = QUANTILES
            .iter()
            .map(|&q| {
                let rank = ((q * len as f64).ceil() as usize).clamp(1, len);
                Quantile {
                    q,
                    value: sorted[rank - 1],
                }
            })
            .collect();
        DistanceSummary {
            min: sorted[0],
            max: sorted[len - 1],
            mean: distances.iter().sum::<f64>() / len as f64,
            quantiles,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct NormMetadata {
    pub distance: NormKind,
    pub constant: NormKind,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ConcentrationReport {
    pub n: usize,
    pub alphabet: usize,
    pub dim: usize,
    pub mode: Mode,
    pub seed: u64,
    pub threshold: f64,
    pub total: usize,
    pub within: usize,
    pub proportion_within: f64,
    /// `1/(4‖[A,B]‖e^{‖A‖+‖B‖})²`; absent for commuting pairs and `N ≥ 3`.
    pub c_constant: Option<f64>,
    /// `1 − 2/n^c`, or 1 for a commuting pair; absent for `N ≥ 3`.
    pub proportion_bound: Option<f64>,
    pub distances_summary: DistanceSummary,
    pub norms: NormMetadata,
    pub matrices: Vec<MatrixJson>,
    #[serde(skip)]
    pub distances: Vec<f64>,
}

/// `√(ln n / n)`.
pub fn default_threshold(n: usize) -> f64 {
    let n = n as f64;
    (n.ln() / n).sqrt()
}

/// The concentration constant `c` for a non-commuting pair.
pub fn concentration_constant(t: &MatrixTuple) -> Result<Option<f64>> {
    if t.len() != 2 {
        return Ok(None);
    }
    let k = PairConstants::of(t)?;
    if k.commutator == 0.0 {
        return Ok(None);
    }
    Ok(Some(1.0 / (4.0 * k.commutator * k.growth).powi(2)))
}

pub fn concentration_experiment(
    t: &MatrixTuple,
    n: usize,
    mode: Mode,
    threshold_override: Option<f64>,
) -> Result<ConcentrationReport> {
    let threshold = threshold_override.unwrap_or_else(|| default_threshold(n));
    if !(threshold >= 0.0 && threshold.is_finite()) {
        return Err(Error::Domain(format!(
            "threshold {threshold} must be finite and non-negative"
        )));
    }
    let words = selected_words(n, t.len(), mode)?;
    let cache = FactorCache::new(t, n)?;
    let target = t.exp_sum()?;
    let distances: Vec<f64> = products_of(&words, &cache)?
        .iter()
        .map(|f| f.distance(&target, DISTANCE_NORM))
        .collect();
    if let Some(d) = distances.iter().find(|d| !d.is_finite()) {
        return Err(Error::Numerical(format!("non-finite distance {d}")));
    }
    let within = distances.iter().filter(|&&d| d < threshold).count();
    let c_constant = concentration_constant(t)?;
    let proportion_bound = match (t.len(), c_constant) {
        (2, Some(c)) => Some(1.0 - 2.0 / (n as f64).powf(c)),
        (2, None) => Some(1.0),
        _ => None,
    };
    Ok(ConcentrationReport {
        n,
        alphabet: t.len(),
        dim: t.dim(),
        mode,
        seed: mode.seed(),
        threshold,
        total: distances.len(),
        within,
        proportion_within: within as f64 / distances.len() as f64,
        c_constant,
        proportion_bound,
        distances_summary: DistanceSummary::of(&distances),
        norms: NormMetadata {
            distance: DISTANCE_NORM,
            constant: BOUND_NORM,
        },
        matrices: t.matrices().iter().map(MatrixJson::from_matrix).collect(),
        distances,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct AlmostSureRun {
    pub seed: u64,
    pub n_values: Vec<usize>,
    pub words: Vec<String>,
    /// `‖F(w_n) − e^{ΣA}‖` in the bound norm.
    pub errors: Vec<f64>,
    /// `4√(c ln n / n)‖[A,B]‖e^{‖A‖+‖B‖}`; absent for `N ≥ 3`.
    pub bound_curve: Option<Vec<f64>>,
    /// First `n` from which every later error is within the bound curve.
    pub n0: Option<usize>,
    pub norm: NormKind,
}

/// Draws one uniform word per `n` from a single seeded stream and records
/// how far its product is from `e^{ΣA}`.
pub fn almost_sure_run(t: &MatrixTuple, n_values: &[usize], seed: u64) -> Result<AlmostSureRun> {
    if n_values.is_empty() || n_values.windows(2).any(|p| p[0] >= p[1]) || n_values[0] == 0 {
        return Err(Error::Range(
            "n values must be positive and strictly increasing".into(),
        ));
    }
    let target = t.exp_sum()?;
    let mut words_out = Vec::with_capacity(n_values.len());
    let mut errors = Vec::with_capacity(n_values.len());
    for (i, &n) in n_values.iter().enumerate() {
        let w = WordSampler::new(n, t.len(), seed.wrapping_add(i as u64))?.next_word();
        let f = FactorCache::new(t, n)?.product(&w)?;
        errors.push(f.distance(&target, BOUND_NORM));
        words_out.push(w.to_string());
    }
    let bound_curve = if t.len() == 2 {
        let k = PairConstants::of(t)?;
        let c = concentration_constant(t)?.unwrap_or(0.0);
        Some(
            n_values
                .iter()
                .map(|&n| {
                    let n = n as f64;
                    4.0 * (c * n.ln() / n).sqrt() * k.commutator * k.growth
                })
                .collect::<Vec<_>>(),
        )
    } else {
        None
    };
    let n0 = bound_curve.as_ref().and_then(|curve| {
        let tol = 1e-12;
        let first_ok = (0..errors.len())
            .rev()
            .take_while(|&i| errors[i] <= curve[i] + tol)
            .last()?;
        Some(n_values[first_ok])
    });
    Ok(AlmostSureRun {
        seed,
        n_values: n_values.to_vec(),
        words: words_out,
        errors,
        bound_curve,
        n0,
        norm: BOUND_NORM,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CloudPoint {
    pub word: String,
    /// Row-major real parts.
    pub re: Vec<f64>,
    /// Row-major imaginary parts.
    pub im: Vec<f64>,
}

impl CloudPoint {
    fn new(word: String, m: &ComplexMatrix) -> Self {
        CloudPoint {
            word,
            re: m.entries().iter().map(|z| z.re).collect(),
            im: m.entries().iter().map(|z| z.im).collect(),
        }
    }

    pub fn to_matrix(&self) -> ComplexMatrix {
        let d = (self.re.len() as f64).sqrt() as usize;
        let data = self
            .re
            .iter()
            .zip(&self.im)
            .map(|(&r, &i)| num_complex::Complex64::new(r, i))
            .collect();
        ComplexMatrix::from_vec(d, data).expect("square by construction")
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Marker {
    pub name: String,
    pub re: Vec<f64>,
    pub im: Vec<f64>,
}

/// Names of the special products every cloud carries: `e^{ΣA}`, the product
/// of the full exponentials in index order, the same in reverse order, and
/// `F` of the standard word.
pub const MARKER_NAMES: [&str; 4] = ["exp_sum", "exp_a_exp_b", "exp_b_exp_a", "standard_word"];

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PointCloud {
    pub n: usize,
    pub alphabet: usize,
    pub dim: usize,
    pub mode: Mode,
    pub seed: u64,
    pub count: usize,
    pub exact: bool,
    pub points: Vec<CloudPoint>,
    pub markers: Vec<Marker>,
    pub matrices: Vec<MatrixJson>,
}

impl PointCloud {
    pub fn marker(&self, name: &str) -> Option<&Marker> {
        self.markers.iter().find(|m| m.name == name)
    }
}

pub fn generate_point_cloud(t: &MatrixTuple, n: usize, mode: Mode) -> Result<PointCloud> {
    let mut words = selected_words(n, t.len(), mode)?;
    if matches!(mode, Mode::Sample { .. }) {
        words.sort();
    }
    let cache = FactorCache::new(t, n)?;
    let products = products_of(&words, &cache)?;
    let points: Vec<CloudPoint> = words
        .iter()
        .zip(&products)
        .map(|(w, f)| CloudPoint::new(w.to_string(), f))
        .collect();

    let exps = t
        .matrices()
        .iter()
        .map(crate::linalg::expm)
        .collect::<Result<Vec<_>>>()?;
    let forward = exps.iter().skip(1).fold(exps[0].clone(), |acc, e| &acc * e);
    let backward = exps
        .iter()
        .rev()
        .skip(1)
        .fold(exps[exps.len() - 1].clone(), |acc, e| &acc * e);
    let standard = cache.product(&words::standard_word(n, t.len())?)?;
    let marker = |name: &str, m: &ComplexMatrix| {
        let p = CloudPoint::new(String::new(), m);
        Marker {
            name: name.to_string(),
            re: p.re,
            im: p.im,
        }
    };
    let markers = vec![
        marker(MARKER_NAMES[0], &t.exp_sum()?),
        marker(MARKER_NAMES[1], &forward),
        marker(MARKER_NAMES[2], &backward),
        marker(MARKER_NAMES[3], &standard),
    ];
    Ok(PointCloud {
        n,
        alphabet: t.len(),
        dim: t.dim(),
        mode,
        seed: mode.seed(),
        count: points.len(),
        exact: mode == Mode::Exhaustive,
        points,
        markers,
        matrices: t.matrices().iter().map(MatrixJson::from_matrix).collect(),
    })
}

/// Spread of a cloud along its principal axis versus everything else.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct PcaSummary {
    /// Root of the total variance.
    pub extent: f64,
    /// Root of the variance not explained by the first principal component.
    pub residual: f64,
}

/// Principal-component diagnostic over the real embedding of the points,
/// using power iteration for the leading eigenvalue of the covariance.
pub fn principal_residual(cloud: &PointCloud) -> PcaSummary {
    let rows: Vec<Vec<f64>> = cloud
        .points
        .iter()
        .map(|p| p.re.iter().chain(&p.im).copied().collect())
        .collect();
    let dims = rows[0].len();
    let count = rows.len() as f64;
    let mean: Vec<f64> = (0..dims)
        .map(|k| rows.iter().map(|r| r[k]).sum::<f64>() / count)
        .collect();
    let mut cov = vec![vec![0.0; dims]; dims];
    for r in &rows {
        for i in 0..dims {
            for j in 0..dims {
                cov[i][j] += (r[i] - mean[i]) * (r[j] - mean[j]) / count;
            }
        }
    }
    let total: f64 = (0..dims).map(|i| cov[i][i]).sum();
    let mut v = vec![1.0; dims];
    let mut lambda = 0.0;
    for _ in 0..500 {
        let next: Vec<f64> = (0..dims)
            .map(|i| (0..dims).map(|j| cov[i][j] * v[j]).sum())
            .collect();
        let norm = next.iter().map(|x| x * x).sum::<f64>().sqrt();
        if norm == 0.0 {
            break;
        }
        lambda = norm;
        v = next.into_iter().map(|x| x / norm).collect();
    }
    PcaSummary {
        extent: total.sqrt(),
        residual: (total - lambda).max(0.0).sqrt(),
    }
}
