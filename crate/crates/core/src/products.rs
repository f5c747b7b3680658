//! The product map `F(w) = Π_i e^{A_{w[i]}/n}` and the matrix inequalities
//! that bound how `F` moves under swaps.
//!
//! Every bound check measures norms with the induced 1-norm, which is
//! sub-multiplicative and gives `‖I‖ = 1`. Distances reported elsewhere use
//! the Frobenius norm.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::linalg::{commutator, expm, ComplexMatrix, NormKind};
use crate::metrics;
use crate::words::{self, StepFunction, Word, WordSampler};

/// Norm used by every bound check.
pub const BOUND_NORM: NormKind = NormKind::One;

/// Relative roundoff allowance added to the right-hand side of a bound check.
pub const BOUND_ROUNDOFF: f64 = 1e-12;

/// Relative size below which a computed commutator counts as zero.
pub const COMMUTATOR_ROUNDOFF: f64 = 1e-14;

/// An ordered list of `N ≥ 2` square matrices of one dimension.
#[derive(Debug, Clone, PartialEq)]
pub struct MatrixTuple {
    matrices: Vec<ComplexMatrix>,
}

impl MatrixTuple {
    pub fn new(matrices: Vec<ComplexMatrix>) -> Result<Self> {
        if matrices.len() < 2 {
            return Err(Error::UnsupportedAlphabet {
                found: matrices.len(),
                context: "a matrix tuple needs at least two matrices",
            });
        }
        let d = matrices[0].dim();
        if let Some(m) = matrices.iter().find(|m| m.dim() != d) {
            return Err(Error::shape(format!(
                "matrices must share a dimension: {d} vs {}",
                m.dim()
            )));
        }
        for m in &matrices {
            m.check_finite()?;
        }
        Ok(MatrixTuple { matrices })
    }

    pub fn pair(a: ComplexMatrix, b: ComplexMatrix) -> Result<Self> {
        Self::new(vec![a, b])
    }

    pub fn matrices(&self) -> &[ComplexMatrix] {
        &self.matrices
    }

    pub fn len(&self) -> usize {
        self.matrices.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn dim(&self) -> usize {
        self.matrices[0].dim()
    }

    pub fn sum(&self) -> ComplexMatrix {
        self.matrices
            .iter()
            .skip(1)
            .fold(self.matrices[0].clone(), |acc, m| &acc + m)
    }

    /// `e^{A_1 + … + A_N}`.
    pub fn exp_sum(&self) -> Result<ComplexMatrix> {
        expm(&self.sum())
    }

    fn as_pair(&self) -> Result<(&ComplexMatrix, &ComplexMatrix)> {
        match self.matrices.as_slice() {
            [a, b] => Ok((a, b)),
            _ => Err(Error::UnsupportedAlphabet {
                found: self.len(),
                context: "this operation needs exactly two matrices",
            }),
        }
    }

    /// `e^{Σ_k ‖A_k‖}` in the bound norm.
    pub fn exp_norm_sum(&self) -> f64 {
        self.matrices
            .iter()
            .map(|m| m.norm(BOUND_NORM))
            .sum::<f64>()
            .exp()
    }

    /// `‖AB − BA‖` in the bound norm (two matrices only), reported as zero
    /// when it is at roundoff level relative to `‖A‖‖B‖`.
    pub fn commutator_norm(&self) -> Result<f64> {
        let (a, b) = self.as_pair()?;
        let norm = commutator(a, b)?.norm(BOUND_NORM);
        let scale = a.norm(BOUND_NORM) * b.norm(BOUND_NORM);
        Ok(if norm <= COMMUTATOR_ROUNDOFF * scale {
            0.0
        } else {
            norm
        })
    }

    pub fn commutes(&self) -> Result<bool> {
        Ok(self.commutator_norm()? == 0.0)
    }
}

/// The factors `e^{A_k/n}` for one `(tuple, n)`, computed once and shared.
#[derive(Debug, Clone)]
pub struct FactorCache {
    n: usize,
    dim: usize,
    factors: Vec<ComplexMatrix>,
}

impl FactorCache {
    pub fn new(t: &MatrixTuple, n: usize) -> Result<Self> {
        if n == 0 {
            return Err(Error::Range("n must be positive".into()));
        }
        let factors = t
            .matrices
            .iter()
            .map(|m| expm(&m.scale_real(1.0 / n as f64)))
            .collect::<Result<Vec<_>>>()?;
        Ok(FactorCache {
            n,
            dim: t.dim(),
            factors,
        })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn factor(&self, letter: usize) -> &ComplexMatrix {
        &self.factors[letter]
    }

    fn check(&self, w: &Word) -> Result<()> {
        if w.alphabet() != self.factors.len() {
            return Err(Error::UnsupportedAlphabet {
                found: w.alphabet(),
                context: "word alphabet must match the number of matrices",
            });
        }
        if w.n() != self.n {
            return Err(Error::shape(format!(
                "word has n = {} but factors were built for n = {}",
                w.n(),
                self.n
            )));
        }
        Ok(())
    }

    /// `F(w)`, multiplied left to right starting from the first factor.
    pub fn product(&self, w: &Word) -> Result<ComplexMatrix> {
        self.check(w)?;
        Ok(self.product_unchecked(w.letters()))
    }

    fn product_unchecked(&self, letters: &[u8]) -> ComplexMatrix {
        let mut acc = self.factors[letters[0] as usize].clone();
        for &l in &letters[1..] {
            acc = &acc * &self.factors[l as usize];
        }
        acc
    }

    pub fn prefix_products(&self, w: &Word) -> Result<Vec<ComplexMatrix>> {
        self.check(w)?;
        let mut out: Vec<ComplexMatrix> = Vec::with_capacity(w.len());
        for &l in w.letters() {
            let next = match out.last() {
                Some(acc) => acc * &self.factors[l as usize],
                None => self.factors[l as usize].clone(),
            };
            out.push(next);
        }
        Ok(out)
    }

    pub fn dim(&self) -> usize {
        self.dim
    }
}

pub fn product_f(w: &Word, t: &MatrixTuple) -> Result<ComplexMatrix> {
    FactorCache::new(t, w.n())?.product(w)
}

pub fn prefix_products(w: &Word, t: &MatrixTuple) -> Result<Vec<ComplexMatrix>> {
    FactorCache::new(t, w.n())?.prefix_products(w)
}

/// `(e^{A/n} e^{B/n})^n`, by repeated squaring when `n` is a power of two.
pub fn lie_trotter(a: &ComplexMatrix, b: &ComplexMatrix, n: usize) -> Result<ComplexMatrix> {
    if n == 0 {
        return Err(Error::Range("n must be positive".into()));
    }
    let scale = 1.0 / n as f64;
    let step = expm(&a.scale_real(scale))?.matmul(&expm(&b.scale_real(scale))?)?;
    if n.is_power_of_two() {
        let mut acc = step;
        for _ in 0..n.trailing_zeros() {
            acc = &acc * &acc;
        }
        Ok(acc)
    } else {
        let mut acc = step.clone();
        for _ in 1..n {
            acc = &acc * &step;
        }
        Ok(acc)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BoundContext {
    pub n: usize,
    pub words: Vec<String>,
}

/// One instance of a matrix inequality `lhs ≤ rhs`.
///
/// `holds` is `lhs ≤ rhs + tolerance`; the tolerance only absorbs floating
/// point roundoff in `lhs`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BoundCheck {
    pub name: String,
    pub lhs: f64,
    pub rhs: f64,
    pub tolerance: f64,
    pub holds: bool,
    pub context: BoundContext,
}

impl BoundCheck {
    pub fn new(name: &str, lhs: f64, rhs: f64, tolerance: f64, context: BoundContext) -> Self {
        BoundCheck {
            name: name.to_string(),
            lhs,
            rhs,
            tolerance,
            holds: lhs <= rhs + tolerance,
            context,
        }
    }
}

/// Norm constants shared by the two-matrix bounds.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PairConstants {
    /// `‖AB − BA‖`.
    pub commutator: f64,
    /// `e^{‖A‖ + ‖B‖}`.
    pub growth: f64,
}

impl PairConstants {
    pub fn of(t: &MatrixTuple) -> Result<Self> {
        Ok(PairConstants {
            commutator: t.commutator_norm()?,
            growth: t.exp_norm_sum(),
        })
    }

    /// Lipschitz constant `2‖AB − BA‖e^{‖A‖+‖B‖}` of `F` with respect to `ρ₁`.
    pub fn lipschitz(&self) -> f64 {
        2.0 * self.commutator * self.growth
    }

    pub fn tolerance(&self) -> f64 {
        BOUND_ROUNDOFF * self.growth.max(1.0)
    }
}

/// `‖F(w)‖ ≤ e^{Σ‖A_k‖}`.
pub fn check_uniform_bound(w: &Word, t: &MatrixTuple) -> Result<BoundCheck> {
    let f = product_f(w, t)?;
    let growth = t.exp_norm_sum();
    Ok(BoundCheck::new(
        "uniform-product",
        f.norm(BOUND_NORM),
        growth,
        BOUND_ROUNDOFF * growth,
        BoundContext {
            n: w.n(),
            words: vec![w.to_string()],
        },
    ))
}

/// The two short-step estimates
/// `‖e^{A/n}e^{B/n} − e^{(A+B)/n}‖ ≤ ‖[A,B]‖/n²` and
/// `‖e^{A/n}e^{B/n} − e^{B/n}e^{A/n}‖ ≤ 2‖[A,B]‖/n²`.
pub fn check_short_step(
    a: &ComplexMatrix,
    b: &ComplexMatrix,
    n: usize,
) -> Result<(BoundCheck, BoundCheck)> {
    if n == 0 {
        return Err(Error::Range("n must be positive".into()));
    }
    let s = 1.0 / n as f64;
    let ea = expm(&a.scale_real(s))?;
    let eb = expm(&b.scale_real(s))?;
    let eab = expm(&(a + b).scale_real(s))?;
    let ab = ea.matmul(&eb)?;
    let ba = eb.matmul(&ea)?;
    let comm = commutator(a, b)?.norm(BOUND_NORM);
    let ctx = || BoundContext { n, words: vec![] };
    let tol = BOUND_ROUNDOFF;
    Ok((
        BoundCheck::new(
            "short-step-product",
            ab.distance(&eab, BOUND_NORM),
            comm * s * s,
            tol,
            ctx(),
        ),
        BoundCheck::new(
            "short-step-commutator",
            ab.distance(&ba, BOUND_NORM),
            2.0 * comm * s * s,
            tol,
            ctx(),
        ),
    ))
}

fn one_swap_position(w: &Word, i: usize) -> Result<Word> {
    if w.alphabet() != 2 {
        return Err(Error::UnsupportedAlphabet {
            found: w.alphabet(),
            context: "one-swap bound is stated for two letters",
        });
    }
    if i + 1 >= w.len() {
        return Err(Error::Range(format!("swap position {i} out of range")));
    }
    if w.letters()[i] == w.letters()[i + 1] {
        return Err(Error::InvalidWord(format!(
            "positions {i} and {} hold the same letter",
            i + 1
        )));
    }
    w.swapped(i)
}

/// `‖F(w) − F(w')‖ ≤ (2/n²)‖[A,B]‖e^{‖A‖+‖B‖}` where `w'` swaps positions
/// `i` and `i + 1` (0-based) of `w`.
pub fn check_one_swap(w: &Word, i: usize, t: &MatrixTuple) -> Result<BoundCheck> {
    let cache = FactorCache::new(t, w.n())?;
    check_one_swap_cached(&cache, &PairConstants::of(t)?, w, i)
}

pub fn check_one_swap_cached(
    cache: &FactorCache,
    k: &PairConstants,
    w: &Word,
    i: usize,
) -> Result<BoundCheck> {
    let swapped = one_swap_position(w, i)?;
    let n = w.n() as f64;
    Ok(BoundCheck::new(
        "one-swap",
        cache
            .product(w)?
            .distance(&cache.product(&swapped)?, BOUND_NORM),
        2.0 / (n * n) * k.commutator * k.growth,
        k.tolerance(),
        BoundContext {
            n: w.n(),
            words: vec![w.to_string(), swapped.to_string()],
        },
    ))
}

/// `‖F(w) − F(v)‖ ≤ ρ₁(w, v)·2‖[A,B]‖e^{‖A‖+‖B‖}`.
pub fn check_lipschitz(w: &Word, v: &Word, t: &MatrixTuple) -> Result<BoundCheck> {
    let cache = FactorCache::new(t, w.n())?;
    let fw = cache.product(w)?;
    let fv = cache.product(v)?;
    check_lipschitz_products(&PairConstants::of(t)?, w, &fw, v, &fv)
}

/// Lipschitz check from precomputed products.
pub fn check_lipschitz_products(
    k: &PairConstants,
    w: &Word,
    fw: &ComplexMatrix,
    v: &Word,
    fv: &ComplexMatrix,
) -> Result<BoundCheck> {
    if w.alphabet() != 2 {
        return Err(Error::UnsupportedAlphabet {
            found: w.alphabet(),
            context: "the Lipschitz bound is stated for two letters",
        });
    }
    let rho = metrics::rho1(w, v)?.to_f64();
    Ok(BoundCheck::new(
        "lipschitz",
        fw.distance(fv, BOUND_NORM),
        rho * k.lipschitz(),
        k.tolerance(),
        BoundContext {
            n: w.n(),
            words: vec![w.to_string(), v.to_string()],
        },
    ))
}

/// `‖(e^{A/n}e^{B/n})^n − e^{A+B}‖ ≤ (1/n)‖[A,B]‖e^{‖A‖+‖B‖}`.
pub fn check_lie_trotter(a: &ComplexMatrix, b: &ComplexMatrix, n: usize) -> Result<BoundCheck> {
    let t = MatrixTuple::pair(a.clone(), b.clone())?;
    let k = PairConstants::of(&t)?;
    let approx = lie_trotter(a, b, n)?;
    Ok(BoundCheck::new(
        "lie-trotter",
        approx.distance(&t.exp_sum()?, BOUND_NORM),
        k.commutator * k.growth / n as f64,
        k.tolerance(),
        BoundContext { n, words: vec![] },
    ))
}

/// `F(w)` for `A = E₁₂`, `B = E₁₁` without any matrix products:
/// `[[e, (1/n)Σ_i e^{h_i/n}], [0, 1]]`.
pub fn appendix_closed_form(w: &Word) -> Result<ComplexMatrix> {
    let heights = words::step_function(w)?;
    let n = w.n() as f64;
    let sum: f64 = heights
        .heights()
        .iter()
        .map(|&h| (f64::from(h) / n).exp())
        .sum();
    ComplexMatrix::from_real_rows(&[vec![std::f64::consts::E, sum / n], vec![0.0, 1.0]])
}

/// Closed form of the `j`-th prefix product (1-based) for `A = E₁₂`, `B = E₁₁`:
/// `[[e^{w_B[j]/n}, (1/n)Σ_{i ≤ w_A[j]} e^{h_i/n}], [0, 1]]`.
pub fn appendix_prefix_closed_form(w: &Word, j: usize) -> Result<ComplexMatrix> {
    let heights = words::step_function(w)?;
    let pc = words::prefix_counts(w);
    let n = w.n() as f64;
    let a_count = pc.get(0, j) as usize;
    let b_count = f64::from(pc.get(1, j));
    let sum: f64 = heights.heights()[..a_count]
        .iter()
        .map(|&h| (f64::from(h) / n).exp())
        .sum();
    ComplexMatrix::from_real_rows(&[vec![(b_count / n).exp(), sum / n], vec![0.0, 1.0]])
}

/// `F` of the word encoded by a step function.
pub fn product_of_step_function(l: &StepFunction, t: &MatrixTuple) -> Result<ComplexMatrix> {
    t.as_pair()?;
    product_f(&l.to_word(), t)
}

/// `F(L)` for an increasing `L: [0,1] → [0,1]`, approximated on `m` steps.
pub fn product_of_increasing_fn(
    l: impl Fn(f64) -> f64,
    t: &MatrixTuple,
    m: usize,
) -> Result<ComplexMatrix> {
    product_of_step_function(&StepFunction::quantize(l, m)?, t)
}

/// Smallest `n₀ ≤ max_n` such that `holds(n)` for every `n` in `n₀..=max_n`.
pub fn sweep_threshold(
    max_n: usize,
    mut holds: impl FnMut(usize) -> Result<bool>,
) -> Result<Option<usize>> {
    let mut n0 = None;
    for n in (1..=max_n).rev() {
        if holds(n)? {
            n0 = Some(n);
        } else {
            break;
        }
    }
    Ok(n0)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SweepEntry {
    pub name: String,
    pub max_n: usize,
    /// `None` when the inequality fails at `max_n` itself.
    pub n0: Option<usize>,
}

/// Sweeps `n = 1..=max_n` for each "large n" inequality of a matrix pair.
/// The one-swap bound is tested on every admissible swap of
/// `words_per_n` uniformly sampled words.
pub fn bound_sweep(
    t: &MatrixTuple,
    max_n: usize,
    words_per_n: usize,
    seed: u64,
) -> Result<Vec<SweepEntry>> {
    let (a, b) = t.as_pair()?;
    let k = PairConstants::of(t)?;
    let entry = |name: &str, n0| SweepEntry {
        name: name.into(),
        max_n,
        n0,
    };
    let mut out = vec![
        entry(
            "short-step-product",
            sweep_threshold(max_n, |n| Ok(check_short_step(a, b, n)?.0.holds))?,
        ),
        entry(
            "short-step-commutator",
            sweep_threshold(max_n, |n| Ok(check_short_step(a, b, n)?.1.holds))?,
        ),
        entry(
            "lie-trotter",
            sweep_threshold(max_n, |n| Ok(check_lie_trotter(a, b, n)?.holds))?,
        ),
    ];
    let one_swap = sweep_threshold(max_n, |n| {
        let cache = FactorCache::new(t, n)?;
        let mut sampler = WordSampler::new(n, 2, seed ^ n as u64)?;
        for _ in 0..words_per_n {
            let w = sampler.next_word();
            for i in 0..w.len() - 1 {
                if w.letters()[i] != w.letters()[i + 1]
                    && !check_one_swap_cached(&cache, &k, &w, i)?.holds
                {
                    return Ok(false);
                }
            }
        }
        Ok(true)
    })?;
    out.push(entry("one-swap", one_swap));
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;
    use crate::words::{enumerate_words, sorted_word, standard_word};
    use num_complex::Complex64;

    fn close(a: &ComplexMatrix, b: &ComplexMatrix, tol: f64) -> bool {
        a.distance(b, NormKind::Frobenius) <= tol
    }

    fn w(s: &str) -> Word {
        Word::parse(s).unwrap()
    }

    #[test]
    fn sorted_word_gives_exp_a_exp_b() {
        let t = fixtures::e12_e21();
        let [a, b] = t.matrices() else { unreachable!() };
        let expected = expm(a).unwrap().matmul(&expm(b).unwrap()).unwrap();
        let f = product_f(&sorted_word(7, 2).unwrap(), &t).unwrap();
        assert!(close(&f, &expected, 1e-10));
    }

    #[test]
    fn commuting_pair_collapses_to_exp_sum() {
        for t in [
            fixtures::commuting_diagonal(),
            fixtures::commuting_polynomial(),
        ] {
            let target = t.exp_sum().unwrap();
            for word in enumerate_words(2, 2).unwrap() {
                assert!(close(&product_f(&word, &t).unwrap(), &target, 1e-10));
            }
        }
    }

    #[test]
    fn two_factor_example() {
        let f = product_f(&w("AB"), &fixtures::e12_e11()).unwrap();
        let e = std::f64::consts::E;
        let expected = ComplexMatrix::from_real_rows(&[vec![e, 1.0], vec![0.0, 1.0]]).unwrap();
        assert!(close(&f, &expected, 1e-14));
    }

    #[test]
    fn prefix_products_end_in_product() {
        let t = fixtures::e12_e21();
        let word = w("ABBAAB");
        let prefixes = prefix_products(&word, &t).unwrap();
        assert_eq!(prefixes.len(), 6);
        let cache = FactorCache::new(&t, 3).unwrap();
        assert_eq!(prefixes[0], *cache.factor(0));
        assert_eq!(prefixes.last().unwrap(), &product_f(&word, &t).unwrap());
    }

    #[test]
    fn prefixes_follow_closed_form() {
        let t = fixtures::e12_e11();
        for word in enumerate_words(4, 2).unwrap() {
            for (j, p) in prefix_products(&word, &t).unwrap().iter().enumerate() {
                let cf = appendix_prefix_closed_form(&word, j + 1).unwrap();
                assert!(close(p, &cf, 1e-12), "{word} j={}", j + 1);
            }
        }
    }

    #[test]
    fn closed_form_examples() {
        let e = std::f64::consts::E;
        let m = |x: f64| ComplexMatrix::from_real_rows(&[vec![e, x], vec![0.0, 1.0]]).unwrap();
        assert!(close(
            &appendix_closed_form(&w("AB")).unwrap(),
            &m(1.0),
            1e-15
        ));
        assert!(close(
            &appendix_closed_form(&w("BA")).unwrap(),
            &m(e),
            1e-15
        ));
        assert!(close(
            &appendix_closed_form(&w("AABB")).unwrap(),
            &m(1.0),
            1e-15
        ));
        let t = fixtures::e12_e11();
        assert!(close(&product_f(&w("BA"), &t).unwrap(), &m(e), 1e-14));
        assert!(appendix_closed_form(&w("ABC")).is_err());
    }

    #[test]
    fn alphabet_mismatch_is_rejected() {
        let err = product_f(&w("ABC"), &fixtures::e12_e21()).unwrap_err();
        assert!(matches!(err, Error::UnsupportedAlphabet { found: 3, .. }));
        let cache = FactorCache::new(&fixtures::e12_e21(), 3).unwrap();
        assert!(matches!(cache.product(&w("AB")), Err(Error::Shape(_))));
    }

    #[test]
    fn lie_trotter_matches_standard_word() {
        let t = fixtures::e12_e21();
        let [a, b] = t.matrices() else { unreachable!() };
        for n in [1, 2, 3, 5, 8, 64, 100, 1024] {
            let lt = lie_trotter(a, b, n).unwrap();
            let f = product_f(&standard_word(n, 2).unwrap(), &t).unwrap();
            assert!(close(&lt, &f, 1e-12), "n={n}");
        }
    }

    #[test]
    fn lie_trotter_target_is_hyperbolic_rotation() {
        let t = fixtures::e12_e21();
        let (c, s) = (1f64.cosh(), 1f64.sinh());
        let expected = ComplexMatrix::from_real_rows(&[vec![c, s], vec![s, c]]).unwrap();
        assert!(close(&t.exp_sum().unwrap(), &expected, 1e-14));
        let check = check_lie_trotter(&t.matrices()[0], &t.matrices()[1], 1024).unwrap();
        assert!(check.holds, "{check:?}");
    }

    #[test]
    fn uniform_bound_on_zero_matrices_is_tight() {
        let t = MatrixTuple::pair(ComplexMatrix::zeros(3), ComplexMatrix::zeros(3)).unwrap();
        let c = check_uniform_bound(&w("ABAB"), &t).unwrap();
        assert_eq!(c.lhs, 1.0);
        assert_eq!(c.rhs, 1.0);
        assert!(c.holds);
    }

    #[test]
    fn uniform_bound_exhaustive_e12_e11() {
        let t = fixtures::e12_e11();
        for word in enumerate_words(3, 2).unwrap() {
            assert!(check_uniform_bound(&word, &t).unwrap().holds);
        }
    }

    #[test]
    fn short_step_commuting_pair() {
        let t = fixtures::commuting_diagonal();
        let (x, y) = check_short_step(&t.matrices()[0], &t.matrices()[1], 3).unwrap();
        assert!(x.lhs < 1e-15 && x.holds);
        assert!(y.lhs < 1e-15 && y.holds);
    }

    #[test]
    fn one_swap_involution_and_errors() {
        let t = fixtures::e12_e21();
        let word = w("AABABB");
        let once = word.swapped(1).unwrap();
        let back = once.swapped(1).unwrap();
        assert_eq!(back, word);
        assert_eq!(product_f(&back, &t).unwrap(), product_f(&word, &t).unwrap());
        assert!(check_one_swap(&word, 1, &t).unwrap().holds);
        assert!(matches!(
            check_one_swap(&word, 0, &t),
            Err(Error::InvalidWord(_))
        ));
        assert!(matches!(check_one_swap(&word, 5, &t), Err(Error::Range(_))));
    }

    #[test]
    fn lipschitz_identity_and_commuting() {
        let t = fixtures::e12_e21();
        let word = w("ABBABA");
        let c = check_lipschitz(&word, &word, &t).unwrap();
        assert_eq!((c.lhs, c.rhs, c.holds), (0.0, 0.0, true));
        let t = fixtures::commuting_diagonal();
        let c = check_lipschitz(&w("AABB"), &w("BBAA"), &t).unwrap();
        assert!(c.holds && c.rhs == 0.0, "{c:?}");
    }

    #[test]
    fn step_function_products() {
        let t = fixtures::e12_e21();
        let [a, b] = t.matrices() else { unreachable!() };
        let zero = product_of_increasing_fn(|_| 0.0, &t, 32).unwrap();
        let expected = expm(a).unwrap().matmul(&expm(b).unwrap()).unwrap();
        assert!(close(&zero, &expected, 1e-10));
        let diag = product_of_increasing_fn(|x| x, &t, 64).unwrap();
        assert!(close(&diag, &lie_trotter(a, b, 64).unwrap(), 1e-12));
        assert!(product_of_increasing_fn(|x| 1.0 - x, &t, 8).is_err());
    }

    #[test]
    fn riemann_sum_limit() {
        let f = product_of_increasing_fn(|x| x, &fixtures::e12_e11(), 1 << 12).unwrap();
        let integral = std::f64::consts::E - 1.0;
        assert!((f.get(0, 1) - Complex64::new(integral, 0.0)).norm() < 1e-3);
    }

    #[test]
    fn sweep_threshold_finds_tail_start() {
        let n0 = sweep_threshold(10, |n| Ok(n >= 4 || n == 2)).unwrap();
        assert_eq!(n0, Some(4));
        assert_eq!(sweep_threshold(10, |n| Ok(n < 10)).unwrap(), None);
    }

    #[test]
    fn tuple_validation() {
        assert!(MatrixTuple::new(vec![ComplexMatrix::zeros(2)]).is_err());
        let err = MatrixTuple::pair(ComplexMatrix::zeros(2), ComplexMatrix::zeros(3)).unwrap_err();
        assert!(matches!(err, Error::Shape(_)));
    }
}
