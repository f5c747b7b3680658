//! Products of matrix exponentials taken over all orderings of a word.
//!
//! For matrices `A_1, …, A_N` and a word `w` containing each letter exactly
//! `n` times, the product `F(w) = e^{A_{w[1]}/n} ⋯ e^{A_{w[Nn]}/n}` is a
//! perturbation of the Lie-Trotter approximant. This crate provides:
//!
//! - [`words`]: enumeration, sampling and lattice-path views of words;
//! - [`metrics`]: swap distance, the area and sup path metrics, and the span;
//! - [`combinatorics`]: exact binomial/multinomial counts and reflection bounds;
//! - [`linalg`]: a small dense complex matrix type with a Padé exponential;
//! - [`products`]: the product map and checkable matrix inequalities;
//! - [`experiments`]: concentration reports, almost-sure runs, point clouds.

pub mod combinatorics;
pub mod error;
pub mod experiments;
pub mod fixtures;
pub mod linalg;
pub mod metrics;
pub mod products;
pub mod words;

pub use combinatorics::{BigCount, ProportionBound};
pub use error::{Error, Result};
pub use experiments::{AlmostSureRun, ConcentrationReport, Mode, PointCloud};
pub use linalg::{ComplexMatrix, MatrixJson, NormKind};
pub use metrics::MetricValue;
pub use products::{BoundCheck, FactorCache, MatrixTuple};
pub use words::{PrefixCounts, StepFunction, Word};
