//! Dense square complex matrices: products, norms, commutators, LU
//! determinants and a scaling-and-squaring Padé exponential.

use std::ops::{Add, Mul, Sub};

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

const ZERO: Complex64 = Complex64::new(0.0, 0.0);
const ONE: Complex64 = Complex64::new(1.0, 0.0);

/// Norm bound the scaled argument of the Padé approximant must satisfy.
pub const EXPM_THETA: f64 = 0.5;

/// Coefficients `b_k` of the degree-13 diagonal Padé approximant to `e^x`.
const PADE13: [f64; 14] = [
    64_764_752_532_480_000.0,
    32_382_376_266_240_000.0,
    7_771_770_303_897_600.0,
    1_187_353_796_428_800.0,
    129_060_195_264_000.0,
    10_559_470_521_600.0,
    670_442_572_800.0,
    33_522_128_640.0,
    1_323_241_920.0,
    40_840_800.0,
    960_960.0,
    16_380.0,
    182.0,
    1.0,
];

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum NormKind {
    Frobenius,
    /// Induced 1-norm: maximum absolute column sum.
    One,
    /// Induced ∞-norm: maximum absolute row sum.
    Inf,
}

/// Square complex matrix stored row-major.
#[derive(Debug, Clone, PartialEq)]
pub struct ComplexMatrix {
    dim: usize,
    data: Vec<Complex64>,
}

impl ComplexMatrix {
    /// Builds a `dim × dim` matrix from row-major entries, rejecting
    /// non-finite values.
    pub fn from_vec(dim: usize, data: Vec<Complex64>) -> Result<Self> {
        if dim == 0 {
            return Err(Error::shape("matrix dimension must be positive"));
        }
        if data.len() != dim * dim {
            return Err(Error::shape(format!(
                "{} entries cannot form a {dim}×{dim} matrix",
                data.len()
            )));
        }
        let m = ComplexMatrix { dim, data };
        m.check_finite()?;
        Ok(m)
    }

    pub fn from_real_rows(rows: &[Vec<f64>]) -> Result<Self> {
        let dim = rows.len();
        if rows.iter().any(|r| r.len() != dim) {
            return Err(Error::shape(
                "rows must all have length equal to the row count",
            ));
        }
        let data = rows
            .iter()
            .flatten()
            .map(|&x| Complex64::new(x, 0.0))
            .collect();
        ComplexMatrix::from_vec(dim, data)
    }

    pub fn zeros(dim: usize) -> Self {
        ComplexMatrix {
            dim,
            data: vec![ZERO; dim * dim],
        }
    }

    pub fn identity(dim: usize) -> Self {
        let mut m = Self::zeros(dim);
        for i in 0..dim {
            m.data[i * dim + i] = ONE;
        }
        m
    }

    /// Matrix unit `E_{ij}` with 1-based indices.
    pub fn unit(dim: usize, i: usize, j: usize) -> Self {
        let mut m = Self::zeros(dim);
        m.data[(i - 1) * dim + (j - 1)] = ONE;
        m
    }

    pub fn diag(values: &[Complex64]) -> Self {
        let mut m = Self::zeros(values.len());
        for (i, &v) in values.iter().enumerate() {
            m.data[i * values.len() + i] = v;
        }
        m
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn get(&self, row: usize, col: usize) -> Complex64 {
        self.data[row * self.dim + col]
    }

    pub fn set(&mut self, row: usize, col: usize, value: Complex64) {
        self.data[row * self.dim + col] = value;
    }

    /// Row-major entries.
    pub fn entries(&self) -> &[Complex64] {
        &self.data
    }

    pub fn check_finite(&self) -> Result<()> {
        match self
            .data
            .iter()
            .position(|z| !z.re.is_finite() || !z.im.is_finite())
        {
            Some(p) => Err(Error::NonFinite {
                row: p / self.dim,
                col: p % self.dim,
            }),
            None => Ok(()),
        }
    }

    fn check_dims(&self, other: &ComplexMatrix) -> Result<()> {
        if self.dim != other.dim {
            return Err(Error::shape(format!(
                "dimension {} does not match {}",
                self.dim, other.dim
            )));
        }
        Ok(())
    }

    pub fn matmul(&self, other: &ComplexMatrix) -> Result<ComplexMatrix> {
        self.check_dims(other)?;
        Ok(self.mul_unchecked(other))
    }

    fn mul_unchecked(&self, other: &ComplexMatrix) -> ComplexMatrix {
        let d = self.dim;
        let mut out = vec![ZERO; d * d];
        for i in 0..d {
            for k in 0..d {
                let a = self.data[i * d + k];
                if a == ZERO {
                    continue;
                }
                let row = &other.data[k * d..(k + 1) * d];
                for (o, &b) in out[i * d..(i + 1) * d].iter_mut().zip(row) {
                    *o += a * b;
                }
            }
        }
        ComplexMatrix { dim: d, data: out }
    }

    fn zip_with(
        &self,
        other: &ComplexMatrix,
        f: impl Fn(Complex64, Complex64) -> Complex64,
    ) -> ComplexMatrix {
        assert_eq!(self.dim, other.dim, "dimension mismatch");
        let data = self
            .data
            .iter()
            .zip(&other.data)
            .map(|(&a, &b)| f(a, b))
            .collect();
        ComplexMatrix {
            dim: self.dim,
            data,
        }
    }

    pub fn scale(&self, s: Complex64) -> ComplexMatrix {
        ComplexMatrix {
            dim: self.dim,
            data: self.data.iter().map(|&z| z * s).collect(),
        }
    }

    pub fn scale_real(&self, s: f64) -> ComplexMatrix {
        self.scale(Complex64::new(s, 0.0))
    }

    pub fn norm(&self, kind: NormKind) -> f64 {
        let d = self.dim;
        match kind {
            NormKind::Frobenius => self.data.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt(),
            NormKind::One => (0..d)
                .map(|j| (0..d).map(|i| self.data[i * d + j].norm()).sum::<f64>())
                .fold(0.0, f64::max),
            NormKind::Inf => (0..d)
                .map(|i| {
                    self.data[i * d..(i + 1) * d]
                        .iter()
                        .map(|z| z.norm())
                        .sum::<f64>()
                })
                .fold(0.0, f64::max),
        }
    }

    pub fn trace(&self) -> Complex64 {
        (0..self.dim).map(|i| self.data[i * self.dim + i]).sum()
    }

    /// `‖self − other‖` in the given norm.
    pub fn distance(&self, other: &ComplexMatrix, kind: NormKind) -> f64 {
        (self - other).norm(kind)
    }

    /// Determinant by LU factorization with partial pivoting.
    pub fn determinant(&self) -> Complex64 {
        match Lu::factor(self.clone()) {
            Some(lu) => lu.determinant(),
            None => ZERO,
        }
    }

    /// Solves `self · X = rhs`.
    pub fn solve(&self, rhs: &ComplexMatrix) -> Result<ComplexMatrix> {
        self.check_dims(rhs)?;
        let lu = Lu::factor(self.clone())
            .ok_or_else(|| Error::Numerical("singular matrix in linear solve".into()))?;
        Ok(lu.solve(rhs))
    }

    pub fn powi(&self, mut k: u64) -> ComplexMatrix {
        let mut base = self.clone();
        let mut acc = ComplexMatrix::identity(self.dim);
        while k > 0 {
            if k & 1 == 1 {
                acc = acc.mul_unchecked(&base);
            }
            k >>= 1;
            if k > 0 {
                base = base.mul_unchecked(&base);
            }
        }
        acc
    }
}

impl Add for &ComplexMatrix {
    type Output = ComplexMatrix;
    fn add(self, rhs: &ComplexMatrix) -> ComplexMatrix {
        self.zip_with(rhs, |a, b| a + b)
    }
}

impl Sub for &ComplexMatrix {
    type Output = ComplexMatrix;
    fn sub(self, rhs: &ComplexMatrix) -> ComplexMatrix {
        self.zip_with(rhs, |a, b| a - b)
    }
}

/// Panics on dimension mismatch; use [`ComplexMatrix::matmul`] for a checked product.
impl Mul for &ComplexMatrix {
    type Output = ComplexMatrix;
    fn mul(self, rhs: &ComplexMatrix) -> ComplexMatrix {
        assert_eq!(self.dim, rhs.dim, "dimension mismatch");
        self.mul_unchecked(rhs)
    }
}

struct Lu {
    lu: ComplexMatrix,
    perm: Vec<usize>,
    swaps: usize,
}

impl Lu {
    fn factor(mut m: ComplexMatrix) -> Option<Lu> {
        let d = m.dim;
        let mut perm: Vec<usize> = (0..d).collect();
        let mut swaps = 0;
        for k in 0..d {
            let p = (k..d)
                .max_by(|&a, &b| m.get(a, k).norm().total_cmp(&m.get(b, k).norm()))
                .expect("non-empty range");
            if m.get(p, k) == ZERO {
                return None;
            }
            if p != k {
                for j in 0..d {
                    m.data.swap(k * d + j, p * d + j);
                }
                perm.swap(k, p);
                swaps += 1;
            }
            let pivot = m.get(k, k);
            for i in k + 1..d {
                let f = m.get(i, k) / pivot;
                m.set(i, k, f);
                for j in k + 1..d {
                    let v = m.get(i, j) - f * m.get(k, j);
                    m.set(i, j, v);
                }
            }
        }
        Some(Lu { lu: m, perm, swaps })
    }

    fn determinant(&self) -> Complex64 {
        let d = self.lu.dim;
        let prod: Complex64 = (0..d).map(|i| self.lu.get(i, i)).product();
        if self.swaps % 2 == 1 {
            -prod
        } else {
            prod
        }
    }

    fn solve(&self, rhs: &ComplexMatrix) -> ComplexMatrix {
        let d = self.lu.dim;
        let mut x = ComplexMatrix::zeros(d);
        for col in 0..d {
            let mut y: Vec<Complex64> = (0..d).map(|i| rhs.get(self.perm[i], col)).collect();
            for i in 0..d {
                for k in 0..i {
                    y[i] = y[i] - self.lu.get(i, k) * y[k];
                }
            }
            for i in (0..d).rev() {
                for k in i + 1..d {
                    y[i] = y[i] - self.lu.get(i, k) * y[k];
                }
                y[i] /= self.lu.get(i, i);
            }
            for (i, v) in y.into_iter().enumerate() {
                x.set(i, col, v);
            }
        }
        x
    }
}

/// `AB − BA`.
pub fn commutator(a: &ComplexMatrix, b: &ComplexMatrix) -> Result<ComplexMatrix> {
    Ok(&a.matmul(b)? - &b.matmul(a)?)
}

/// Matrix exponential by scaling and squaring with a degree-13 Padé
/// approximant. The scaling exponent is the smallest `s ≥ 0` with
/// `‖X‖₁ / 2^s ≤ 0.5`.
pub fn expm(x: &ComplexMatrix) -> Result<ComplexMatrix> {
    x.check_finite()?;
    let norm = x.norm(NormKind::One);
    let mut s = 0i32;
    while norm / 2f64.powi(s) > EXPM_THETA {
        s += 1;
    }
    let scaled = x.scale_real(2f64.powi(-s));
    let mut result = pade13(&scaled)?;
    for _ in 0..s {
        result = result.mul_unchecked(&result);
    }
    result
        .check_finite()
        .map_err(|_| Error::Numerical("matrix exponential overflowed".into()))?;
    Ok(result)
}

fn pade13(a: &ComplexMatrix) -> Result<ComplexMatrix> {
    let d = a.dim;
    let id = ComplexMatrix::identity(d);
    let a2 = a.mul_unchecked(a);
    let a4 = a2.mul_unchecked(&a2);
    let a6 = a2.mul_unchecked(&a4);
    let b = |k: usize| Complex64::new(PADE13[k], 0.0);
    let combo = |terms: &[(&ComplexMatrix, usize)]| {
        terms.iter().fold(ComplexMatrix::zeros(d), |acc, (m, k)| {
            &acc + &m.scale(b(*k))
        })
    };
    let u_inner = &a6.mul_unchecked(&combo(&[(&a6, 13), (&a4, 11), (&a2, 9)]))
        + &combo(&[(&a6, 7), (&a4, 5), (&a2, 3), (&id, 1)]);
    let u = a.mul_unchecked(&u_inner);
    let v = &a6.mul_unchecked(&combo(&[(&a6, 12), (&a4, 10), (&a2, 8)]))
        + &combo(&[(&a6, 6), (&a4, 4), (&a2, 2), (&id, 0)]);
    (&v - &u).solve(&(&v + &u))
}

/// Truncated power series `Σ_{k ≤ terms} X^k / k!`.
pub fn expm_series_oracle(x: &ComplexMatrix, terms: usize) -> ComplexMatrix {
    let mut term = ComplexMatrix::identity(x.dim);
    let mut sum = term.clone();
    for k in 1..=terms {
        term = term.mul_unchecked(x).scale_real(1.0 / k as f64);
        sum = &sum + &term;
    }
    sum
}

/// Bound `‖X‖^{k+1}/(k+1)!·e^{‖X‖}` on the tail left out by
/// [`expm_series_oracle`] with `k` terms, in any sub-multiplicative norm.
pub fn series_tail_bound(x: &ComplexMatrix, terms: usize, kind: NormKind) -> f64 {
    let r = x.norm(kind);
    let mut t = 1.0;
    for k in 1..=terms + 1 {
        t *= r / k as f64;
    }
    t * r.exp()
}

/// Wire form `{"d": 2, "re": [[..], ..], "im": [[..], ..]}`; a missing `im`
/// means a real matrix.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MatrixJson {
    pub d: usize,
    pub re: Vec<Vec<f64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub im: Option<Vec<Vec<f64>>>,
}

impl MatrixJson {
    pub fn to_matrix(&self) -> Result<ComplexMatrix> {
        let d = self.d;
        let check = |rows: &Vec<Vec<f64>>, part: &str| -> Result<()> {
            if rows.len() != d || rows.iter().any(|r| r.len() != d) {
                return Err(Error::shape(format!(
                    "\"{part}\" must be {d}×{d}, got {} rows of lengths {:?}",
                    rows.len(),
                    rows.iter().map(Vec::len).collect::<Vec<_>>()
                )));
            }
            Ok(())
        };
        check(&self.re, "re")?;
        if let Some(im) = &self.im {
            check(im, "im")?;
        }
        let data = (0..d * d)
            .map(|p| {
                let (i, j) = (p / d, p % d);
                let im = self.im.as_ref().map_or(0.0, |m| m[i][j]);
                Complex64::new(self.re[i][j], im)
            })
            .collect();
        ComplexMatrix::from_vec(d, data)
    }

    /// Imaginary part is omitted when it is identically zero.
    pub fn from_matrix(m: &ComplexMatrix) -> Self {
        let d = m.dim();
        let rows = |f: fn(Complex64) -> f64| -> Vec<Vec<f64>> {
            (0..d)
                .map(|i| (0..d).map(|j| f(m.get(i, j))).collect())
                .collect()
        };
        let im = rows(|z| z.im);
        let real = im.iter().flatten().all(|&v| v == 0.0);
        MatrixJson {
            d,
            re: rows(|z| z.re),
            im: if real { None } else { Some(im) },
        }
    }

    pub fn parse(text: &str) -> Result<ComplexMatrix> {
        let json: MatrixJson = serde_json::from_str(text)
            .map_err(|e| Error::shape(format!("malformed matrix JSON: {e}")))?;
        json.to_matrix()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64) -> Complex64 {
        Complex64::new(re, 0.0)
    }

    fn close(a: &ComplexMatrix, b: &ComplexMatrix, tol: f64) -> bool {
        a.distance(b, NormKind::Frobenius) <= tol
    }

    #[test]
    fn unit_matrix_algebra() {
        let e11 = ComplexMatrix::unit(2, 1, 1);
        let e12 = ComplexMatrix::unit(2, 1, 2);
        let e21 = ComplexMatrix::unit(2, 2, 1);
        let e22 = ComplexMatrix::unit(2, 2, 2);
        assert_eq!(e12.matmul(&e11).unwrap(), ComplexMatrix::zeros(2));
        assert_eq!(e11.matmul(&e12).unwrap(), e12);
        assert_eq!(e12.matmul(&ComplexMatrix::identity(2)).unwrap(), e12);
        assert_eq!(commutator(&e12, &e21).unwrap(), &e11 - &e22);
        let d1 = ComplexMatrix::diag(&[c(1.0), c(2.0)]);
        let d2 = ComplexMatrix::diag(&[c(-3.0), c(0.5)]);
        assert_eq!(commutator(&d1, &d2).unwrap(), ComplexMatrix::zeros(2));
    }

    #[test]
    fn matmul_rejects_mismatched_dims() {
        let err = ComplexMatrix::identity(2)
            .matmul(&ComplexMatrix::identity(3))
            .unwrap_err();
        assert!(matches!(err, Error::Shape(_)));
    }

    #[test]
    fn norms() {
        assert!((ComplexMatrix::identity(3).norm(NormKind::Frobenius) - 3f64.sqrt()).abs() < 1e-15);
        assert_eq!(ComplexMatrix::unit(2, 1, 2).norm(NormKind::Frobenius), 1.0);
        let m = ComplexMatrix::from_real_rows(&[vec![1.0, -2.0], vec![3.0, 4.0]]).unwrap();
        assert_eq!(m.norm(NormKind::One), 6.0);
        assert_eq!(m.norm(NormKind::Inf), 7.0);
    }

    #[test]
    fn expm_closed_forms() {
        assert!(close(
            &expm(&ComplexMatrix::zeros(3)).unwrap(),
            &ComplexMatrix::identity(3),
            1e-14
        ));
        let e12 = ComplexMatrix::unit(2, 1, 2);
        let expected = &ComplexMatrix::identity(2) + &e12;
        assert!(close(&expm(&e12).unwrap(), &expected, 1e-14));
        let d = ComplexMatrix::diag(&[c(1.5), c(-0.7)]);
        let expected = ComplexMatrix::diag(&[c(1.5f64.exp()), c((-0.7f64).exp())]);
        assert!(close(&expm(&d).unwrap(), &expected, 1e-14));
    }

    #[test]
    fn expm_of_rotation_generator() {
        // exp([[0, -t], [t, 0]]) is a rotation by t
        let t = 3.0;
        let g = ComplexMatrix::from_real_rows(&[vec![0.0, -t], vec![t, 0.0]]).unwrap();
        let r = ComplexMatrix::from_real_rows(&[vec![t.cos(), -t.sin()], vec![t.sin(), t.cos()]])
            .unwrap();
        assert!(close(&expm(&g).unwrap(), &r, 1e-13));
    }

    #[test]
    fn expm_rejects_non_finite() {
        let mut m = ComplexMatrix::zeros(2);
        m.set(1, 0, Complex64::new(f64::NAN, 0.0));
        assert_eq!(expm(&m).unwrap_err(), Error::NonFinite { row: 1, col: 0 });
    }

    #[test]
    fn series_oracle_basics() {
        assert_eq!(
            expm_series_oracle(&ComplexMatrix::zeros(2), 5),
            ComplexMatrix::identity(2)
        );
        let e12 = ComplexMatrix::unit(2, 1, 2);
        assert_eq!(
            expm_series_oracle(&e12, 2),
            &ComplexMatrix::identity(2) + &e12
        );
        let x = ComplexMatrix::from_real_rows(&[vec![0.5, 0.0], vec![0.0, 0.5]]).unwrap();
        assert!(series_tail_bound(&x, 30, NormKind::One) < 1e-30);
    }

    #[test]
    fn determinants() {
        assert_eq!(ComplexMatrix::identity(4).determinant(), ONE);
        assert_eq!(ComplexMatrix::unit(2, 1, 2).determinant(), ZERO);
        let m = ComplexMatrix::from_real_rows(&[
            vec![0.0, 2.0, 1.0],
            vec![1.0, 0.0, 0.0],
            vec![3.0, 1.0, 4.0],
        ])
        .unwrap();
        // cofactor expansion along the second row: −1·(2·4 − 1·1)
        assert!((m.determinant() - c(-7.0)).norm() < 1e-14);
    }

    #[test]
    fn matrix_json_round_trip_and_validation() {
        let m = MatrixJson::parse(r#"{"d":2,"re":[[1,2],[3,4]]}"#).unwrap();
        assert_eq!(m.get(1, 0), c(3.0));
        let m2 = MatrixJson::parse(r#"{"d":2,"re":[[1,2],[3,4]],"im":[[0,1],[0,0]]}"#).unwrap();
        assert_eq!(m2.get(0, 1), Complex64::new(2.0, 1.0));
        assert_eq!(MatrixJson::from_matrix(&m2).to_matrix().unwrap(), m2);
        assert!(MatrixJson::from_matrix(&m).im.is_none());
        let bad = MatrixJson::parse(r#"{"d":3,"re":[[1,2],[3,4],[5,6]]}"#).unwrap_err();
        assert!(matches!(bad, Error::Shape(_)));
        assert!(MatrixJson::parse("not json").is_err());
    }
}
