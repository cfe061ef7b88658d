//! The mean operator `μ̂_d = Σ a·b·d / Σ a·b` and its named special cases.
//!
//! Starting from vertex `(1, 1)` it gives the standard mean, from `(1, x)`
//! towards `x` the self-weighting mean `Σx²/Σx`, and from `(1, w)` towards
//! `x` the mean of `x` weighted by another measure `w`.

use crate::dataset::{Dataset, Direction};
use crate::error::{Error, Result};
use crate::scalar::Scalar;

/// Starting vertex (the weights `a·b`) and the direction to estimate.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MeanRequest {
    pub vertex: (Direction, Direction),
    pub target: Direction,
}

impl MeanRequest {
    pub fn new(a: Direction, b: Direction, target: Direction) -> Self {
        MeanRequest {
            vertex: (a, b),
            target,
        }
    }
}

/// `Σ aᵢbᵢdᵢ / Σ aᵢbᵢ`.
///
/// Fails with [`Error::ZeroWeight`] when `|Σab| ≤ 1e-12 · Σ|ab|`.
pub fn mean_operator<T: Scalar>(data: &Dataset<T>, req: &MeanRequest) -> Result<T> {
    let weight_dir = req.vertex.0.times(&req.vertex.1);
    let weights = data.evaluate(&weight_dir)?;
    let target = data.evaluate(&req.target)?;

    let denominator = T::sum(weights.iter().cloned());
    let magnitude = T::sum(weights.iter().map(T::abs));
    if denominator.abs() <= T::tolerance(1e-12) * magnitude {
        return Err(Error::ZeroWeight {
            sum: denominator.as_f64(),
        });
    }
    let numerator = T::sum(weights.into_iter().zip(target).map(|(w, d)| w * d));
    Ok(numerator / denominator)
}

/// `Σx / n`.
pub fn standard_mean<T: Scalar>(data: &Dataset<T>, column: &str) -> Result<T> {
    data.column(column)?;
    mean_operator(
        data,
        &MeanRequest::new(Direction::unity(), Direction::unity(), Direction::column(column)),
    )
}

/// `Σx² / Σx`, the reciprocal of the least-squares fit of `1 = αx`.
pub fn self_weighting_mean<T: Scalar>(data: &Dataset<T>, column: &str) -> Result<T> {
    data.column(column)?;
    mean_operator(
        data,
        &MeanRequest::new(
            Direction::unity(),
            Direction::column(column),
            Direction::column(column),
        ),
    )
}

/// `Σxw / Σw`: `column` averaged with the measures of `weights` as weights.
pub fn randomly_weighted_mean<T: Scalar>(
    data: &Dataset<T>,
    column: &str,
    weights: &str,
) -> Result<T> {
    data.column(column)?;
    data.column(weights)?;
    mean_operator(
        data,
        &MeanRequest::new(
            Direction::unity(),
            Direction::column(weights),
            Direction::column(column),
        ),
    )
}
