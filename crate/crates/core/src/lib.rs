//! Lattice-design regression.
//!
//! Sums of products of measures (`V(a, b) = Σ a·b`) are arranged as a
//! lattice over unity and the data columns. Products of vertices (joins)
//! give the variance, covariance, internal covariance and base variance
//! determinants, and Cramer's rule over those determinants fits every
//! rotation of a linear model, including implicit models with unity as the
//! response (`1 = α₁x + α₂y`).
//!
//! Everything numeric is generic over [`Scalar`], implemented for `f32`,
//! `f64` and exact [`BigRational`]. The aliases below name the common
//! instantiations.
//!
//! ```
//! use latreg::{fit, Dataset64, Direction, ModelSpec};
//!
//! let data = Dataset64::from_f64(&[("x", &[1.0, 2.0, 3.0]), ("y", &[2.0, 3.0, 5.0])])?;
//! let spec = ModelSpec::new(Direction::unity(), vec!["x".into(), "y".into()])?;
//! let result = fit(&data, &spec)?;
//! assert!((result.coefficients[0] + 2.0 / 3.0).abs() < 1e-12);
//! # Ok::<(), latreg::Error>(())
//! ```

pub mod dataio;
pub mod dataset;
pub mod error;
pub mod estimators;
pub mod formula;
pub mod lattice;
pub mod means;
pub mod scalar;
pub mod simulate;

pub use num_rational::BigRational;

pub use dataset::{Dataset, Direction};
pub use error::{Error, Result};
pub use estimators::{
    fit, fit_all_rotations, residual_report, Condition, FitResult, ModelSpec, ResidualReport,
};
pub use lattice::{det3, DeterminantKind, Lattice};
pub use means::{
    mean_operator, randomly_weighted_mean, self_weighting_mean, standard_mean, MeanRequest,
};
pub use scalar::Scalar;

pub type Dataset64 = Dataset<f64>;
pub type Dataset32 = Dataset<f32>;
pub type ExactDataset = Dataset<BigRational>;

pub type Lattice64 = Lattice<f64>;
pub type Lattice32 = Lattice<f32>;
pub type ExactLattice = Lattice<BigRational>;

pub type FitResult64 = FitResult<f64>;
pub type FitResult32 = FitResult<f32>;
pub type ExactFitResult = FitResult<BigRational>;
