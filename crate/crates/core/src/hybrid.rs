//! Convergence-point estimation and Gaussian sampling around it.
//!
//! Two estimators are provided. The least-squares estimator finds the point
//! closest (in summed squared orthogonal distance) to the lines traced by
//! parent-to-offspring moves. The averaging estimator takes the mean decision
//! vector of the current non-dominated set, and is the one the optimizer uses
//! by default.

use rand::Rng;
use rand_distr::{Distribution, StandardNormal};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{solve, symmetric_eigenvalues};
use crate::scalar::Scalar;

/// Ratio of extreme singular values below which the normal matrix is treated as singular.
pub const SINGULAR_RATIO: f64 = 1e-10;
/// Ratio below which a solvable system is still flagged as ill-conditioned.
pub const ILL_CONDITIONED_RATIO: f64 = 1e-6;

/// A move from a worse parent `p` to a better offspring `o`.
#[derive(Debug, Clone, PartialEq)]
pub struct MovePair<T> {
    pub p: Vec<T>,
    pub o: Vec<T>,
    pub d: Vec<T>,
    pub d0: Vec<T>,
}

impl<T: Scalar> MovePair<T> {
    pub fn new(parent: Vec<T>, offspring: Vec<T>) -> Result<Self> {
        if parent.len() != offspring.len() {
            return Err(Error::DimensionMismatch {
                expected: parent.len(),
                actual: offspring.len(),
            });
        }
        let d: Vec<T> = offspring.iter().zip(&parent).map(|(&o, &p)| o - p).collect();
        let norm = d.iter().map(|&v| v * v).sum::<T>().sqrt();
        if norm.partial_cmp(&T::lit(1e-12)) != Some(std::cmp::Ordering::Greater) {
            return Err(Error::InvalidArgument("parent and offspring coincide".into()));
        }
        let d0 = d.iter().map(|&v| v / norm).collect();
        Ok(Self {
            p: parent,
            o: offspring,
            d,
            d0,
        })
    }

    /// From a parent and a direction instead of an offspring.
    pub fn from_direction(parent: Vec<T>, direction: &[T]) -> Result<Self> {
        let o = parent.iter().zip(direction).map(|(&p, &d)| p + d).collect();
        Self::new(parent, o)
    }

    /// Squared orthogonal distance from `x` to the line through `p` along `d`.
    pub fn squared_distance(&self, x: &[T]) -> T {
        let diff: Vec<T> = self.p.iter().zip(x).map(|(&p, &xi)| p - xi).collect();
        let along: T = diff.iter().zip(&self.d0).map(|(&a, &b)| a * b).sum();
        diff.iter().map(|&v| v * v).sum::<T>() - along * along
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Estimator {
    #[serde(alias = "average")]
    PfAverage,
    #[serde(alias = "least-squares")]
    LeastSquares,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ConvergenceEstimate<T> {
    pub point: Vec<T>,
    pub method: Estimator,
    /// Set when the normal matrix is solvable but poorly conditioned.
    pub condition_flag: bool,
}

/// Sum of squared orthogonal distances from `x` to every move line.
pub fn line_objective<T: Scalar>(pairs: &[MovePair<T>], x: &[T]) -> T {
    pairs.iter().map(|p| p.squared_distance(x)).sum()
}

/// Least-squares intersection of the move lines: solves `[sum (I - d0 d0^T)] X = sum (I - d0 d0^T) p`.
pub fn estimate_point_least_squares<T: Scalar>(pairs: &[MovePair<T>]) -> Result<ConvergenceEstimate<T>> {
    if pairs.len() < 2 {
        return Err(Error::InvalidArgument(format!(
            "least-squares estimate needs at least 2 move pairs, got {}",
            pairs.len()
        )));
    }
    let n = pairs[0].p.len();
    if n < 2 {
        return Err(Error::InvalidArgument("least-squares estimate needs dimension >= 2".into()));
    }
    if let Some(bad) = pairs.iter().find(|p| p.p.len() != n) {
        return Err(Error::DimensionMismatch {
            expected: n,
            actual: bad.p.len(),
        });
    }
    let mut a = vec![vec![T::zero(); n]; n];
    let mut b = vec![T::zero(); n];
    for pair in pairs {
        let d0 = &pair.d0;
        let proj: T = d0.iter().zip(&pair.p).map(|(&u, &v)| u * v).sum();
        for i in 0..n {
            for j in 0..n {
                let ident = if i == j { T::one() } else { T::zero() };
                a[i][j] = a[i][j] + ident - d0[i] * d0[j];
            }
            b[i] = b[i] + pair.p[i] - d0[i] * proj;
        }
    }
    // a is symmetric positive semi-definite, so its singular values are its eigenvalues
    let eig = symmetric_eigenvalues(&a);
    let largest = eig.iter().fold(T::zero(), |m, &v| m.max(v.abs()));
    let smallest = eig.iter().fold(T::infinity(), |m, &v| m.min(v.abs()));
    let ratio = if largest > T::zero() { smallest / largest } else { T::zero() };
    if ratio < T::lit(SINGULAR_RATIO) {
        return Err(Error::Singular {
            ratio: ratio.to_f64_lossy(),
        });
    }
    let point = solve(&a, &b).ok_or(Error::Singular {
        ratio: ratio.to_f64_lossy(),
    })?;
    Ok(ConvergenceEstimate {
        point,
        method: Estimator::LeastSquares,
        condition_flag: ratio < T::lit(ILL_CONDITIONED_RATIO),
    })
}

/// Componentwise mean of the given decision vectors.
pub fn estimate_point_average<T: Scalar>(front: &[Vec<T>]) -> Result<ConvergenceEstimate<T>> {
    let first = front.first().ok_or(Error::Empty("front"))?;
    let n = first.len();
    if let Some(bad) = front.iter().find(|x| x.len() != n) {
        return Err(Error::DimensionMismatch {
            expected: n,
            actual: bad.len(),
        });
    }
    let count = T::from_count(front.len());
    // summing in sorted order makes the mean independent of member order
    let mean: Vec<T> = (0..n)
        .map(|i| {
            let mut col: Vec<T> = front.iter().map(|x| x[i]).collect();
            col.sort_by(|a, b| a.partial_cmp(b).unwrap_or(std::cmp::Ordering::Equal));
            col.into_iter().sum::<T>() / count
        })
        .collect();
    Ok(ConvergenceEstimate {
        point: mean,
        method: Estimator::PfAverage,
        condition_flag: false,
    })
}

/// Draws `count` points from an axis-aligned Gaussian around `center`, clipped to the box.
pub fn gaussian_samples<T: Scalar, R: Rng + ?Sized>(
    center: &[T],
    count: usize,
    sigma: &[T],
    lower: &[T],
    upper: &[T],
    rng: &mut R,
) -> Vec<Vec<T>> {
    (0..count)
        .map(|_| {
            center
                .iter()
                .enumerate()
                .map(|(i, &c)| {
                    let z: f64 = StandardNormal.sample(rng);
                    (c + sigma[i] * T::lit(z)).max(lower[i]).min(upper[i])
                })
                .collect()
        })
        .collect()
}

/// Estimates the convergence point of `front` by averaging and samples around it.
pub fn egs<T: Scalar, R: Rng + ?Sized>(
    front: &[Vec<T>],
    count: usize,
    sigma: &[T],
    lower: &[T],
    upper: &[T],
    rng: &mut R,
) -> Result<Vec<Vec<T>>> {
    let center = estimate_point_average(front)?.point;
    Ok(gaussian_samples(&center, count, sigma, lower, upper, rng))
}
