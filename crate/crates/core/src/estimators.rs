//! Cramer's-rule fitting of `d = α₁a + α₂b + α₃c` for any choice of
//! response direction, including unity (non-response models).
//!
//! The normal equations have Gram matrix `G[i][j] = V(regᵢ, regⱼ)` and right
//! side `r[i] = V(regᵢ, d)`. Each coefficient is `|Gᵢ| / |G|` where `Gᵢ` has
//! column `i` replaced by `r`; those determinants are evaluated directly as
//! lattice determinants.

use std::fmt;

use crate::dataset::{Dataset, Direction};
use crate::error::{Error, Result};
use crate::lattice::Lattice;
use crate::scalar::Scalar;

/// Relative singularity threshold on `|det G|` against the product of the
/// Gram row norms.
pub const SINGULAR_THRESHOLD: f64 = 1e-9;

// Normal-equation residual a near-singular solve must meet to be kept.
const CONSISTENCY_TOLERANCE: f64 = 1e-8;

/// A response direction and one to three regressor directions.
///
/// Unity as the response makes this a non-response model. Unity as a
/// regressor is an intercept; it is never added implicitly.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ModelSpec {
    response: Direction,
    regressors: Vec<Direction>,
}

impl ModelSpec {
    pub fn new(response: Direction, regressors: Vec<Direction>) -> Result<Self> {
        if !(1..=3).contains(&regressors.len()) {
            return Err(Error::Precondition(format!(
                "a model takes 1 to 3 regressors, got {}",
                regressors.len()
            )));
        }
        if regressors.contains(&response) {
            return Err(Error::Precondition(format!(
                "response {response} also appears as a regressor"
            )));
        }
        for (i, r) in regressors.iter().enumerate() {
            if regressors[..i].contains(r) {
                return Err(Error::Precondition(format!("regressor {r} repeated")));
            }
        }
        Ok(ModelSpec {
            response,
            regressors,
        })
    }

    pub fn response(&self) -> &Direction {
        &self.response
    }

    pub fn regressors(&self) -> &[Direction] {
        &self.regressors
    }

    pub fn is_non_response(&self) -> bool {
        self.response.is_unity()
    }
}

impl fmt::Display for ModelSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} = ", self.response)?;
        for (i, r) in self.regressors.iter().enumerate() {
            if i > 0 {
                f.write_str(" + ")?;
            }
            write!(f, "{r}")?;
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Condition {
    WellPosed,
    NearSingular,
}

impl Condition {
    pub fn as_str(self) -> &'static str {
        match self {
            Condition::WellPosed => "well-posed",
            Condition::NearSingular => "near-singular",
        }
    }
}

/// Outcome of one Cramer's-rule fit.
///
/// `coefficients[i] = numerators[i] / denominator`. With two regressors the
/// denominator and numerators are the familiar 2x2 measures: for
/// `y = β₀ + β₁x` they are `Δ_11xx` and `(Δ_1yxx, Δ_11xy)`, for
/// `1 = α₁x + α₂y` they are `Δ_xxyy` and `(Δ_1xyy, Δ_1yxx)`. The slope
/// numerator is `Δ_11xy`, which is `−Δ_1yx1`; using `Δ_1yx1` itself would
/// flip the sign of the ordinary least squares slope.
#[derive(Debug, Clone, PartialEq)]
pub struct FitResult<T> {
    pub spec: ModelSpec,
    pub coefficients: Vec<T>,
    pub denominator: T,
    pub numerators: Vec<T>,
    pub sse: T,
    pub residuals: Vec<T>,
    pub condition: Condition,
}

/// Fits `spec` on `data` by Cramer's rule.
pub fn fit<T: Scalar>(data: &Dataset<T>, spec: &ModelSpec) -> Result<FitResult<T>> {
    let mut dirs = vec![Direction::unity(), spec.response.clone()];
    dirs.extend(spec.regressors.iter().cloned());
    let lattice = Lattice::build(data, &dirs)?;
    fit_with_lattice(&lattice, data, spec)
}

/// Same as [`fit`] with a prebuilt lattice that caches every direction of
/// `spec`.
pub fn fit_with_lattice<T: Scalar>(
    lattice: &Lattice<T>,
    data: &Dataset<T>,
    spec: &ModelSpec,
) -> Result<FitResult<T>> {
    let regs = &spec.regressors;
    let d = &spec.response;
    let k = regs.len();

    let gram = regs
        .iter()
        .map(|a| regs.iter().map(|b| lattice.vertex(a, b)).collect())
        .collect::<Result<Vec<Vec<T>>>>()?;
    let rhs = regs
        .iter()
        .map(|a| lattice.vertex(a, d))
        .collect::<Result<Vec<T>>>()?;

    let (denominator, numerators) = match k {
        1 => (gram[0][0].clone(), vec![rhs[0].clone()]),
        2 => {
            let (a, b) = (&regs[0], &regs[1]);
            (
                lattice.det2(a, a, b, b)?,
                vec![lattice.det2(a, d, b, b)?, lattice.det2(a, a, b, d)?],
            )
        }
        3 => {
            let (a, b, c) = (&regs[0], &regs[1], &regs[2]);
            (
                lattice.det3_general([a, b, c], [a, b, c])?,
                vec![
                    lattice.det3_general([a, b, c], [d, b, c])?,
                    lattice.det3_general([a, b, c], [a, d, c])?,
                    lattice.det3_general([a, b, c], [a, b, d])?,
                ],
            )
        }
        _ => unreachable!("ModelSpec holds 1 to 3 regressors"),
    };

    let singular = || Error::Singular {
        determinant: denominator.as_f64(),
    };
    if denominator.is_zero() {
        return Err(singular());
    }

    // det² ≤ τ² ∏ ‖row‖² avoids square roots, so exact scalars work too.
    let row_norms = gram
        .iter()
        .map(|row| T::sum(row.iter().map(|g| g.clone() * g.clone())));
    let norm_product = row_norms.fold(T::one(), |acc, v| acc * v);
    let tau = T::tolerance(SINGULAR_THRESHOLD);
    let near_singular = denominator.clone() * denominator.clone() <= tau.clone() * tau * norm_product;

    let coefficients: Vec<T> = numerators
        .iter()
        .map(|num| num.clone() / denominator.clone())
        .collect();

    let condition = if near_singular {
        if !normal_equations_consistent(&gram, &rhs, &coefficients) {
            return Err(singular());
        }
        Condition::NearSingular
    } else {
        Condition::WellPosed
    };

    let residuals = residuals(data, spec, &coefficients)?;
    let sse = T::sum(residuals.iter().map(|r| r.clone() * r.clone()));
    Ok(FitResult {
        spec: spec.clone(),
        coefficients,
        denominator,
        numerators,
        sse,
        residuals,
        condition,
    })
}

fn normal_equations_consistent<T: Scalar>(gram: &[Vec<T>], rhs: &[T], coef: &[T]) -> bool {
    let tol = T::tolerance(CONSISTENCY_TOLERANCE);
    gram.iter().zip(rhs).all(|(row, r)| {
        let terms: Vec<T> = row.iter().zip(coef).map(|(g, c)| g.clone() * c.clone()).collect();
        let scale = T::sum(terms.iter().map(T::abs)) + r.abs();
        let lhs = T::sum(terms);
        (lhs - r.clone()).abs() <= tol.clone() * scale
    })
}

fn residuals<T: Scalar>(data: &Dataset<T>, spec: &ModelSpec, coef: &[T]) -> Result<Vec<T>> {
    let response = data.evaluate(&spec.response)?;
    let regs = spec
        .regressors
        .iter()
        .map(|r| data.evaluate(r))
        .collect::<Result<Vec<_>>>()?;
    Ok(response
        .into_iter()
        .enumerate()
        .map(|(i, obs)| {
            let predicted = T::sum(regs.iter().zip(coef).map(|(col, c)| c.clone() * col[i].clone()));
            obs - predicted
        })
        .collect())
}

/// One rotation: a direction moved into the response position.
#[derive(Debug, Clone, PartialEq)]
pub struct Rotation<T> {
    pub response: Direction,
    pub regressors: Vec<Direction>,
    pub outcome: Result<FitResult<T>>,
}

/// Fits every rotation of `dirs` (unity plus two or three columns).
///
/// Rotations come out with the non-unity directions in the order given and
/// the unity (non-response) rotation last. Regressors keep unity first and
/// then the remaining directions in the order given. A rotation that fails
/// carries its error in [`Rotation::outcome`].
pub fn fit_all_rotations<T: Scalar>(
    data: &Dataset<T>,
    dirs: &[Direction],
) -> Result<Vec<Rotation<T>>> {
    if !(3..=4).contains(&dirs.len()) {
        return Err(Error::Precondition(format!(
            "rotations need 3 or 4 directions, got {}",
            dirs.len()
        )));
    }
    for (i, d) in dirs.iter().enumerate() {
        if dirs[..i].contains(d) {
            return Err(Error::Precondition(format!("direction {d} repeated")));
        }
    }
    if !dirs.iter().any(Direction::is_unity) {
        return Err(Error::Precondition(
            "rotations need unity among the directions".into(),
        ));
    }
    let lattice = Lattice::build(data, dirs)?;

    let columns: Vec<&Direction> = dirs.iter().filter(|d| !d.is_unity()).collect();
    let unity = Direction::unity();
    let order = columns.iter().copied().chain(std::iter::once(&unity));

    Ok(order
        .map(|response| {
            let mut regressors: Vec<Direction> = Vec::with_capacity(dirs.len() - 1);
            if !response.is_unity() {
                regressors.push(unity.clone());
            }
            regressors.extend(columns.iter().filter(|c| **c != response).map(|c| (*c).clone()));
            let outcome = ModelSpec::new(response.clone(), regressors.clone())
                .and_then(|spec| fit_with_lattice(&lattice, data, &spec));
            Rotation {
                response: response.clone(),
                regressors,
                outcome,
            }
        })
        .collect())
}

/// Per-row residuals and error totals for a fit.
#[derive(Debug, Clone, PartialEq)]
pub struct ResidualReport<T> {
    pub response: Direction,
    pub residuals: Vec<T>,
    pub sse: T,
    /// `Σ(1 − Σαⱼ·regⱼ)²`, present only for non-response fits.
    pub system_error: Option<T>,
}

/// Recomputes residuals of `fit` against `data`.
pub fn residual_report<T: Scalar>(fit: &FitResult<T>, data: &Dataset<T>) -> Result<ResidualReport<T>> {
    let residuals = residuals(data, &fit.spec, &fit.coefficients)?;
    let sse = T::sum(residuals.iter().map(|r| r.clone() * r.clone()));
    let system_error = fit.spec.is_non_response().then(|| sse.clone());
    Ok(ResidualReport {
        response: fit.spec.response.clone(),
        residuals,
        sse,
        system_error,
    })
}
