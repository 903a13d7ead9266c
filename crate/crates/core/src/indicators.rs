//! Hypervolume and inverted generational distance.

use std::cmp::Ordering;

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::rng::stream_rng;
use crate::scalar::Scalar;

pub const DEFAULT_MC_SAMPLES: usize = 1_000_000;
pub const DEFAULT_MC_SEED: u64 = 2024;

/// A hypervolume value; `stderr` and `samples` are set for Monte-Carlo estimates.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct HvEstimate {
    pub value: f64,
    pub stderr: Option<f64>,
    pub samples: Option<usize>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct IndicatorResult {
    pub hv: f64,
    pub hv_stderr: Option<f64>,
    pub igd: f64,
    pub reference_point: Vec<f64>,
    pub reference_set_size: usize,
}

fn check_dims<T>(points: &[Vec<T>], m: usize) -> Result<()> {
    match points.iter().find(|p| p.len() != m) {
        Some(p) => Err(Error::DimensionMismatch {
            expected: m,
            actual: p.len(),
        }),
        None => Ok(()),
    }
}

/// Points strictly better than `r` in every objective, as `f64`.
fn inside<T: Scalar>(points: &[Vec<T>], r: &[T]) -> Vec<Vec<f64>> {
    points
        .iter()
        .filter(|p| p.iter().zip(r).all(|(a, b)| a < b))
        .map(|p| p.iter().map(|v| v.to_f64_lossy()).collect())
        .collect()
}

fn hv2(points: &mut [Vec<f64>], r: &[f64]) -> f64 {
    points.sort_by(|a, b| a[0].partial_cmp(&b[0]).unwrap_or(Ordering::Equal).then(a[1].partial_cmp(&b[1]).unwrap_or(Ordering::Equal)));
    let mut area = 0.0;
    let mut floor = r[1];
    for p in points.iter() {
        if p[1] < floor {
            area += (r[0] - p[0]) * (floor - p[1]);
            floor = p[1];
        }
    }
    area
}

fn hv3(points: &mut [Vec<f64>], r: &[f64]) -> f64 {
    points.sort_by(|a, b| a[2].partial_cmp(&b[2]).unwrap_or(Ordering::Equal));
    let mut volume = 0.0;
    let mut slice: Vec<Vec<f64>> = Vec::with_capacity(points.len());
    for (i, p) in points.iter().enumerate() {
        slice.push(vec![p[0], p[1]]);
        let top = points.get(i + 1).map_or(r[2], |q| q[2]);
        if top > p[2] {
            volume += hv2(&mut slice, r) * (top - p[2]);
        }
    }
    volume
}

/// Exact hypervolume for up to three objectives.
pub fn hypervolume_exact<T: Scalar>(points: &[Vec<T>], r: &[T]) -> Result<f64> {
    let m = r.len();
    check_dims(points, m)?;
    let mut pts = inside(points, r);
    let rf: Vec<f64> = r.iter().map(|v| v.to_f64_lossy()).collect();
    if pts.is_empty() {
        return Ok(0.0);
    }
    match m {
        1 => Ok(pts.iter().map(|p| rf[0] - p[0]).fold(0.0, f64::max)),
        2 => Ok(hv2(&mut pts, &rf)),
        3 => Ok(hv3(&mut pts, &rf)),
        _ => Err(Error::InvalidArgument(format!(
            "exact hypervolume supports at most 3 objectives, got {m}"
        ))),
    }
}

/// Monte-Carlo hypervolume over the box spanned by the ideal point and `r`.
pub fn hypervolume_monte_carlo<T: Scalar>(points: &[Vec<T>], r: &[T], samples: usize, seed: u64) -> Result<HvEstimate> {
    let m = r.len();
    check_dims(points, m)?;
    if samples == 0 {
        return Err(Error::InvalidArgument("Monte-Carlo sample count must be positive".into()));
    }
    let pts = inside(points, r);
    if pts.is_empty() {
        return Ok(HvEstimate {
            value: 0.0,
            stderr: Some(0.0),
            samples: Some(samples),
        });
    }
    let rf: Vec<f64> = r.iter().map(|v| v.to_f64_lossy()).collect();
    let ideal: Vec<f64> = (0..m).map(|k| pts.iter().map(|p| p[k]).fold(f64::INFINITY, f64::min)).collect();
    let volume: f64 = (0..m).map(|k| rf[k] - ideal[k]).product();
    let mut rng = stream_rng(seed, 0);
    let mut z = vec![0.0; m];
    let mut hits = 0usize;
    for _ in 0..samples {
        for k in 0..m {
            z[k] = ideal[k] + rng.random::<f64>() * (rf[k] - ideal[k]);
        }
        if pts.iter().any(|p| p.iter().zip(&z).all(|(a, b)| a <= b)) {
            hits += 1;
        }
    }
    let frac = hits as f64 / samples as f64;
    Ok(HvEstimate {
        value: volume * frac,
        stderr: Some(volume * (frac * (1.0 - frac) / samples as f64).sqrt()),
        samples: Some(samples),
    })
}

/// Hypervolume: exact up to three objectives, Monte-Carlo with the default sample count and seed above.
pub fn hypervolume<T: Scalar>(points: &[Vec<T>], r: &[T]) -> Result<HvEstimate> {
    if r.len() <= 3 {
        Ok(HvEstimate {
            value: hypervolume_exact(points, r)?,
            stderr: None,
            samples: None,
        })
    } else {
        hypervolume_monte_carlo(points, r, DEFAULT_MC_SAMPLES, DEFAULT_MC_SEED)
    }
}

/// Mean distance from each reference point to its nearest point of `a`.
pub fn igd<T: Scalar>(a: &[Vec<T>], reference: &[Vec<T>]) -> Result<T> {
    let first = a.first().ok_or(Error::Empty("approximation set"))?;
    if reference.is_empty() {
        return Err(Error::Empty("reference set"));
    }
    let m = first.len();
    check_dims(a, m)?;
    check_dims(reference, m)?;
    let total: T = reference
        .iter()
        .map(|r| {
            a.iter()
                .map(|p| p.iter().zip(r).map(|(&x, &y)| (x - y) * (x - y)).sum::<T>())
                .fold(T::infinity(), T::min)
                .sqrt()
        })
        .sum();
    Ok(total / T::from_count(reference.len()))
}

/// Componentwise maximum over every set, scaled by 1.1 (or shifted by 0.1 where the maximum is not positive).
pub fn default_reference_point<T: Scalar>(sets: &[Vec<Vec<T>>]) -> Result<Vec<T>> {
    let mut iter = sets.iter().flatten();
    let first = iter.next().ok_or(Error::Empty("objective sets"))?;
    let mut max = first.clone();
    for p in iter {
        if p.len() != max.len() {
            return Err(Error::DimensionMismatch {
                expected: max.len(),
                actual: p.len(),
            });
        }
        for (m, &v) in max.iter_mut().zip(p) {
            *m = m.max(v);
        }
    }
    Ok(max
        .into_iter()
        .map(|v| if v > T::zero() { v * T::lit(1.1) } else { v + T::lit(0.1) })
        .collect())
}

/// Both indicators against a shared reference point and reference set.
pub fn evaluate_indicators<T: Scalar>(a: &[Vec<T>], r: &[T], reference: &[Vec<T>]) -> Result<IndicatorResult> {
    let hv = hypervolume(a, r)?;
    Ok(IndicatorResult {
        hv: hv.value,
        hv_stderr: hv.stderr,
        igd: igd(a, reference)?.to_f64_lossy(),
        reference_point: r.iter().map(|v| v.to_f64_lossy()).collect(),
        reference_set_size: reference.len(),
    })
}
