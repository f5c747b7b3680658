//! Named matrix pairs used by tests, benches, the CLI defaults and the service presets.

use num_complex::Complex64;

use crate::linalg::ComplexMatrix;
use crate::products::MatrixTuple;

fn pair(a: ComplexMatrix, b: ComplexMatrix) -> MatrixTuple {
    MatrixTuple::new(vec![a, b]).expect("fixture matrices share a dimension")
}

/// `A = E₁₂`, `B = E₁₁`: products have a closed form in the heights of the word.
pub fn e12_e11() -> MatrixTuple {
    pair(ComplexMatrix::unit(2, 1, 2), ComplexMatrix::unit(2, 1, 1))
}

/// `A = E₁₂`, `B = E₂₁`: `e^{A+B} = [[cosh 1, sinh 1], [sinh 1, cosh 1]]`.
pub fn e12_e21() -> MatrixTuple {
    pair(ComplexMatrix::unit(2, 1, 2), ComplexMatrix::unit(2, 2, 1))
}

/// Two commuting diagonal matrices.
pub fn commuting_diagonal() -> MatrixTuple {
    let c = |x: f64| Complex64::new(x, 0.0);
    pair(
        ComplexMatrix::diag(&[c(0.5), c(-1.0)]),
        ComplexMatrix::diag(&[c(-0.25), c(0.75)]),
    )
}

/// A commuting non-diagonal pair: `B` is a polynomial in `A`.
pub fn commuting_polynomial() -> MatrixTuple {
    let a = ComplexMatrix::from_real_rows(&[vec![0.3, 1.0], vec![-0.4, 0.1]]).unwrap();
    let b = &(&a * &a).scale_real(0.5) + &a.scale_real(-1.0);
    pair(a, b)
}

/// Heisenberg pair `E₁₂, E₂₃`: the commutator `E₁₃` commutes with both.
pub fn quasi_commuting() -> MatrixTuple {
    pair(ComplexMatrix::unit(3, 1, 2), ComplexMatrix::unit(3, 2, 3))
}

/// `A = E₁₁`, `B = E₁₂` with `[A, B] = B`.
pub fn commutator_proportional() -> MatrixTuple {
    pair(ComplexMatrix::unit(2, 1, 1), ComplexMatrix::unit(2, 1, 2))
}

/// `A = [[x, 1], [0, x]]`, `B = diag(a, b)` with `a ≠ b`.
pub fn jordan_diagonal(x: f64, a: f64, b: f64) -> MatrixTuple {
    pair(
        ComplexMatrix::from_real_rows(&[vec![x, 1.0], vec![0.0, x]]).unwrap(),
        ComplexMatrix::from_real_rows(&[vec![a, 0.0], vec![0.0, b]]).unwrap(),
    )
}

/// Three zero matrices.
pub fn zero_triple(dim: usize) -> MatrixTuple {
    MatrixTuple::new(vec![ComplexMatrix::zeros(dim); 3]).unwrap()
}
