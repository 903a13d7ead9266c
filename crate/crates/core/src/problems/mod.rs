//! Scalable multi-objective benchmark problems.
//!
//! Every problem is addressable by name through [`make_problem`]. Evaluators are
//! pure; budget accounting is the caller's job (see [`crate::budget`]).

mod dtlz;
mod uf;
mod wfg;
mod zdt;

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::nsga2::nondominated_indices;
use crate::scalar::Scalar;

pub use dtlz::{dtlz1, dtlz2, dtlz3, dtlz4, dtlz5, dtlz6, dtlz7};
pub use uf::{uf1, uf2};
pub use wfg::wfg;
pub use zdt::{zdt1, zdt2, zdt3, zdt4, zdt6};

/// A box-constrained vector-valued objective function.
pub trait Objective<T: Scalar>: Sync {
    fn dim(&self) -> usize;
    fn num_objectives(&self) -> usize;
    fn lower(&self) -> &[T];
    fn upper(&self) -> &[T];
    /// Evaluates all objectives at `x` (minimization convention).
    fn evaluate(&self, x: &[T]) -> Result<Vec<T>>;

    fn name(&self) -> &str {
        "custom"
    }
}

/// Separability label attached to each benchmark, used only for reporting.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Separability {
    Separable,
    PartiallySeparable,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum ProblemKind {
    Zdt1,
    Zdt2,
    Zdt3,
    Zdt4,
    Zdt6,
    Dtlz1,
    Dtlz2,
    Dtlz3,
    Dtlz4,
    Dtlz5,
    Dtlz6,
    Dtlz7,
    Uf1,
    Uf2,
    Wfg1,
    Wfg2,
    Wfg3,
    Wfg4,
    Wfg5,
    Wfg7,
}

impl ProblemKind {
    pub const ALL: [ProblemKind; 20] = [
        ProblemKind::Zdt1,
        ProblemKind::Zdt2,
        ProblemKind::Zdt3,
        ProblemKind::Zdt4,
        ProblemKind::Zdt6,
        ProblemKind::Dtlz1,
        ProblemKind::Dtlz2,
        ProblemKind::Dtlz3,
        ProblemKind::Dtlz4,
        ProblemKind::Dtlz5,
        ProblemKind::Dtlz6,
        ProblemKind::Dtlz7,
        ProblemKind::Uf1,
        ProblemKind::Uf2,
        ProblemKind::Wfg1,
        ProblemKind::Wfg2,
        ProblemKind::Wfg3,
        ProblemKind::Wfg4,
        ProblemKind::Wfg5,
        ProblemKind::Wfg7,
    ];

    pub fn as_str(self) -> &'static str {
        use ProblemKind::*;
        match self {
            Zdt1 => "ZDT1",
            Zdt2 => "ZDT2",
            Zdt3 => "ZDT3",
            Zdt4 => "ZDT4",
            Zdt6 => "ZDT6",
            Dtlz1 => "DTLZ1",
            Dtlz2 => "DTLZ2",
            Dtlz3 => "DTLZ3",
            Dtlz4 => "DTLZ4",
            Dtlz5 => "DTLZ5",
            Dtlz6 => "DTLZ6",
            Dtlz7 => "DTLZ7",
            Uf1 => "UF1",
            Uf2 => "UF2",
            Wfg1 => "WFG1",
            Wfg2 => "WFG2",
            Wfg3 => "WFG3",
            Wfg4 => "WFG4",
            Wfg5 => "WFG5",
            Wfg7 => "WFG7",
        }
    }

    fn is_zdt(self) -> bool {
        matches!(
            self,
            ProblemKind::Zdt1 | ProblemKind::Zdt2 | ProblemKind::Zdt3 | ProblemKind::Zdt4 | ProblemKind::Zdt6
        )
    }

    fn is_dtlz(self) -> bool {
        matches!(
            self,
            ProblemKind::Dtlz1
                | ProblemKind::Dtlz2
                | ProblemKind::Dtlz3
                | ProblemKind::Dtlz4
                | ProblemKind::Dtlz5
                | ProblemKind::Dtlz6
                | ProblemKind::Dtlz7
        )
    }

    fn is_uf(self) -> bool {
        matches!(self, ProblemKind::Uf1 | ProblemKind::Uf2)
    }

    fn wfg_variant(self) -> Option<u8> {
        match self {
            ProblemKind::Wfg1 => Some(1),
            ProblemKind::Wfg2 => Some(2),
            ProblemKind::Wfg3 => Some(3),
            ProblemKind::Wfg4 => Some(4),
            ProblemKind::Wfg5 => Some(5),
            ProblemKind::Wfg7 => Some(7),
            _ => None,
        }
    }

    /// Default objective count: 2 for ZDT/UF/WFG, 3 for DTLZ.
    pub fn default_objectives(self) -> usize {
        if self.is_dtlz() { 3 } else { 2 }
    }

    pub fn separability(self) -> Separability {
        match self {
            ProblemKind::Wfg2 | ProblemKind::Wfg3 => Separability::PartiallySeparable,
            _ => Separability::Separable,
        }
    }

    fn known_names() -> String {
        Self::ALL.iter().map(|k| k.as_str()).collect::<Vec<_>>().join(", ")
    }
}

impl fmt::Display for ProblemKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for ProblemKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let upper = s.trim().to_ascii_uppercase();
        Self::ALL
            .iter()
            .copied()
            .find(|k| k.as_str() == upper)
            .ok_or_else(|| Error::UnknownProblem(s.to_string(), Self::known_names()))
    }
}

/// A fully specified benchmark instance.
#[derive(Debug, Clone, PartialEq)]
pub struct Problem<T> {
    kind: ProblemKind,
    dim: usize,
    objectives: usize,
    lower: Vec<T>,
    upper: Vec<T>,
    /// Number of WFG position parameters (`2 (M - 1)`); unused elsewhere.
    wfg_k: usize,
}

/// Builds a named benchmark with `dim` variables and `objectives` objectives.
pub fn make_problem<T: Scalar>(name: &str, dim: usize, objectives: usize) -> Result<Problem<T>> {
    let kind: ProblemKind = name.parse()?;
    Problem::new(kind, dim, objectives)
}

impl<T: Scalar> Problem<T> {
    pub fn new(kind: ProblemKind, dim: usize, objectives: usize) -> Result<Self> {
        let infeasible = |reason: String| Error::InfeasibleProblem {
            problem: kind.to_string(),
            reason,
        };
        if (kind.is_zdt() || kind.is_uf()) && objectives != 2 {
            return Err(infeasible(format!("{kind} is bi-objective, got M = {objectives}")));
        }
        if objectives < 2 {
            return Err(infeasible(format!("need at least 2 objectives, got {objectives}")));
        }
        let min_dim = if kind.is_zdt() {
            2
        } else if kind.is_uf() {
            3
        } else {
            objectives + 1
        };
        if dim < min_dim {
            return Err(infeasible(format!("D = {dim} below minimum {min_dim}")));
        }
        let mut wfg_k = 0;
        if let Some(variant) = kind.wfg_variant() {
            wfg_k = 2 * (objectives - 1);
            let l = dim - wfg_k;
            if matches!(variant, 2 | 3) && !l.is_multiple_of(2) {
                return Err(infeasible(format!(
                    "distance parameter count l = D - k = {l} must be even"
                )));
            }
        }

        let (lower, upper) = match kind {
            ProblemKind::Zdt4 => {
                let mut lo = vec![T::lit(-5.0); dim];
                let mut hi = vec![T::lit(5.0); dim];
                lo[0] = T::zero();
                hi[0] = T::one();
                (lo, hi)
            }
            ProblemKind::Uf1 | ProblemKind::Uf2 => {
                let mut lo = vec![-T::one(); dim];
                lo[0] = T::zero();
                (lo, vec![T::one(); dim])
            }
            k if k.wfg_variant().is_some() => (
                vec![T::zero(); dim],
                (0..dim).map(|i| T::from_count(2 * (i + 1))).collect(),
            ),
            _ => (vec![T::zero(); dim], vec![T::one(); dim]),
        };
        Ok(Self {
            kind,
            dim,
            objectives,
            lower,
            upper,
            wfg_k,
        })
    }

    pub fn kind(&self) -> ProblemKind {
        self.kind
    }

    pub fn separability(&self) -> Separability {
        self.kind.separability()
    }

    pub fn pf_sampler_available(&self) -> bool {
        true
    }

    /// Number of DTLZ distance variables, `D - M + 1`.
    pub fn dtlz_k(&self) -> usize {
        self.dim + 1 - self.objectives
    }

    /// Number of WFG position parameters.
    pub fn wfg_k(&self) -> usize {
        self.wfg_k
    }

    /// Samples `n` points of the analytic Pareto front on a uniform parameter grid.
    pub fn sample_true_pf(&self, n: usize) -> Result<Vec<Vec<T>>> {
        if n < 2 {
            return Err(Error::InvalidArgument(format!("front sample size must be >= 2, got {n}")));
        }
        let m = self.objectives;
        let grid1 = |n: usize| -> Vec<T> {
            (0..n).map(|i| T::from_count(i) / T::from_count(n - 1)).collect()
        };
        use ProblemKind::*;
        let points = match self.kind {
            Zdt1 | Zdt4 | Uf1 | Uf2 => grid1(n)
                .into_iter()
                .map(|t| vec![t * t, T::one() - t])
                .collect(),
            Zdt2 => grid1(n).into_iter().map(|t| vec![t, T::one() - t * t]).collect(),
            Zdt6 => {
                let lo = T::lit(zdt::ZDT6_F1_MIN);
                grid1(n)
                    .into_iter()
                    .map(|t| {
                        let f1 = lo + t * (T::one() - lo);
                        vec![f1, T::one() - f1 * f1]
                    })
                    .collect()
            }
            Zdt3 => filtered_front(n, |oversample| {
                grid1(oversample * n)
                    .into_iter()
                    .map(|f1| {
                        let f2 = T::one() - f1.sqrt() - f1 * (T::lit(10.0) * T::pi() * f1).sin();
                        vec![f1, f2]
                    })
                    .collect()
            }),
            Dtlz1 => grid_front(n, m - 1, |p| dtlz::simplex_from_params(p, T::lit(0.5))),
            Dtlz2 | Dtlz3 | Dtlz4 => grid_front(n, m - 1, |p| {
                let half_pi = T::pi() / T::lit(2.0);
                let theta: Vec<T> = p.iter().map(|&v| v * half_pi).collect();
                dtlz::sphere_from_angles(&theta, T::one())
            }),
            Dtlz5 | Dtlz6 => {
                let quarter_pi = T::pi() / T::lit(4.0);
                grid1(n)
                    .into_iter()
                    .map(|t| {
                        let mut theta = vec![quarter_pi; m - 1];
                        theta[0] = t * T::pi() / T::lit(2.0);
                        dtlz::sphere_from_angles(&theta, T::one())
                    })
                    .collect()
            }
            Dtlz7 => filtered_front(n, |oversample| {
                grid_points(oversample * n, m - 1)
                    .into_iter()
                    .map(|mut f| {
                        let last = dtlz::dtlz7_last(&f, T::zero());
                        f.push(last);
                        f
                    })
                    .collect()
            }),
            Wfg1 | Wfg2 | Wfg3 | Wfg4 | Wfg5 | Wfg7 => {
                let variant = self.kind.wfg_variant().expect("wfg kind");
                filtered_front(n, |oversample| {
                    grid_points(oversample * n, m - 1)
                        .into_iter()
                        .map(|x| wfg::front_point(variant, &x))
                        .collect()
                })
            }
        };
        Ok(points)
    }
}

/// Uniform grid over `[0, 1]^dims` with at least `n` points, thinned to exactly `n`.
fn grid_points<T: Scalar>(n: usize, dims: usize) -> Vec<Vec<T>> {
    let side = if dims == 1 {
        n
    } else {
        let mut s = (n as f64).powf(1.0 / dims as f64).ceil() as usize;
        while s.pow(dims as u32) < n {
            s += 1;
        }
        s.max(2)
    };
    let total = side.pow(dims as u32);
    let all: Vec<Vec<T>> = (0..total)
        .map(|mut idx| {
            let mut p = vec![T::zero(); dims];
            for slot in p.iter_mut().rev() {
                *slot = T::from_count(idx % side) / T::from_count(side - 1);
                idx /= side;
            }
            p
        })
        .collect();
    pick_evenly(all, n)
}

fn grid_front<T: Scalar>(n: usize, dims: usize, map: impl Fn(&[T]) -> Vec<T>) -> Vec<Vec<T>> {
    grid_points(n, dims).iter().map(|p| map(p)).collect()
}

/// Oversamples a front description, drops dominated points, and keeps `n` evenly spaced survivors.
fn filtered_front<T: Scalar>(n: usize, sample: impl Fn(usize) -> Vec<Vec<T>>) -> Vec<Vec<T>> {
    let mut oversample = 8;
    loop {
        let pts = sample(oversample);
        let keep = nondominated_indices(&pts);
        if keep.len() >= n || oversample >= 1024 {
            let front: Vec<Vec<T>> = keep.into_iter().map(|i| pts[i].clone()).collect();
            return pick_evenly(front, n);
        }
        oversample *= 4;
    }
}

fn pick_evenly<V: Clone>(items: Vec<V>, n: usize) -> Vec<V> {
    let len = items.len();
    if len <= n {
        return items;
    }
    (0..n)
        .map(|i| items[(i * (len - 1) + (n - 1) / 2) / (n - 1)].clone())
        .collect()
}

impl<T: Scalar> Objective<T> for Problem<T> {
    fn dim(&self) -> usize {
        self.dim
    }

    fn num_objectives(&self) -> usize {
        self.objectives
    }

    fn lower(&self) -> &[T] {
        &self.lower
    }

    fn upper(&self) -> &[T] {
        &self.upper
    }

    fn name(&self) -> &str {
        self.kind.as_str()
    }

    fn evaluate(&self, x: &[T]) -> Result<Vec<T>> {
        if x.len() != self.dim {
            return Err(Error::DimensionMismatch {
                expected: self.dim,
                actual: x.len(),
            });
        }
        let m = self.objectives;
        use ProblemKind::*;
        Ok(match self.kind {
            Zdt1 => zdt1(x),
            Zdt2 => zdt2(x),
            Zdt3 => zdt3(x),
            Zdt4 => zdt4(x),
            Zdt6 => zdt6(x),
            Dtlz1 => dtlz1(x, m),
            Dtlz2 => dtlz2(x, m),
            Dtlz3 => dtlz3(x, m),
            Dtlz4 => dtlz4(x, m),
            Dtlz5 => dtlz5(x, m),
            Dtlz6 => dtlz6(x, m),
            Dtlz7 => dtlz7(x, m),
            Uf1 => uf1(x),
            Uf2 => uf2(x),
            kind => wfg(kind.wfg_variant().expect("wfg kind"), x, self.wfg_k, m),
        })
    }
}

/// An objective defined by a closure over box bounds.
pub struct FnObjective<T, F> {
    lower: Vec<T>,
    upper: Vec<T>,
    objectives: usize,
    f: F,
}

impl<T: Scalar, F> FnObjective<T, F>
where
    F: Fn(&[T]) -> Vec<T> + Sync,
{
    pub fn new(lower: Vec<T>, upper: Vec<T>, objectives: usize, f: F) -> Self {
        assert_eq!(lower.len(), upper.len(), "bounds length mismatch");
        Self {
            lower,
            upper,
            objectives,
            f,
        }
    }

    pub fn uniform(dim: usize, lo: T, hi: T, objectives: usize, f: F) -> Self {
        Self::new(vec![lo; dim], vec![hi; dim], objectives, f)
    }
}

impl<T: Scalar, F> Objective<T> for FnObjective<T, F>
where
    F: Fn(&[T]) -> Vec<T> + Sync,
{
    fn dim(&self) -> usize {
        self.lower.len()
    }

    fn num_objectives(&self) -> usize {
        self.objectives
    }

    fn lower(&self) -> &[T] {
        &self.lower
    }

    fn upper(&self) -> &[T] {
        &self.upper
    }

    fn evaluate(&self, x: &[T]) -> Result<Vec<T>> {
        if x.len() != self.lower.len() {
            return Err(Error::DimensionMismatch {
                expected: self.lower.len(),
                actual: x.len(),
            });
        }
        Ok((self.f)(x))
    }
}
