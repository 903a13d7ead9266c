//! DTLZ scalable suite. `m` objectives, the last `k = x.len() - m + 1` variables are distance variables.

use crate::scalar::Scalar;

fn g_rastrigin<T: Scalar>(xm: &[T]) -> T {
    let half = T::lit(0.5);
    let k = T::from_count(xm.len());
    T::lit(100.0)
        * (k + xm
            .iter()
            .map(|&v| (v - half).powi(2) - (T::lit(20.0) * T::pi() * (v - half)).cos())
            .sum::<T>())
}

fn g_sphere<T: Scalar>(xm: &[T]) -> T {
    let half = T::lit(0.5);
    xm.iter().map(|&v| (v - half).powi(2)).sum()
}

/// Objectives on the unit sphere scaled by `radius`, from `m - 1` angles in `[0, pi/2]`.
pub(crate) fn sphere_from_angles<T: Scalar>(theta: &[T], radius: T) -> Vec<T> {
    let m = theta.len() + 1;
    (0..m)
        .map(|i| {
            let mut v = radius;
            for t in &theta[..m - 1 - i] {
                v = v * t.cos();
            }
            if i > 0 {
                v = v * theta[m - 1 - i].sin();
            }
            v
        })
        .collect()
}

/// Linear (simplex) front objectives from `m - 1` position parameters, scaled by `scale`.
pub(crate) fn simplex_from_params<T: Scalar>(p: &[T], scale: T) -> Vec<T> {
    let m = p.len() + 1;
    (0..m)
        .map(|i| {
            let mut v = scale;
            for &pj in &p[..m - 1 - i] {
                v = v * pj;
            }
            if i > 0 {
                v = v * (T::one() - p[m - 1 - i]);
            }
            v
        })
        .collect()
}

fn angles<T: Scalar>(pos: &[T], alpha: T) -> Vec<T> {
    let half_pi = T::pi() / T::lit(2.0);
    pos.iter().map(|&v| v.powf(alpha) * half_pi).collect()
}

pub fn dtlz1<T: Scalar>(x: &[T], m: usize) -> Vec<T> {
    let g = g_rastrigin(&x[m - 1..]);
    simplex_from_params(&x[..m - 1], T::lit(0.5) * (T::one() + g))
}

pub fn dtlz2<T: Scalar>(x: &[T], m: usize) -> Vec<T> {
    let g = g_sphere(&x[m - 1..]);
    sphere_from_angles(&angles(&x[..m - 1], T::one()), T::one() + g)
}

pub fn dtlz3<T: Scalar>(x: &[T], m: usize) -> Vec<T> {
    let g = g_rastrigin(&x[m - 1..]);
    sphere_from_angles(&angles(&x[..m - 1], T::one()), T::one() + g)
}

pub fn dtlz4<T: Scalar>(x: &[T], m: usize) -> Vec<T> {
    let g = g_sphere(&x[m - 1..]);
    sphere_from_angles(&angles(&x[..m - 1], T::lit(100.0)), T::one() + g)
}

fn degenerate_angles<T: Scalar>(pos: &[T], g: T) -> Vec<T> {
    let half_pi = T::pi() / T::lit(2.0);
    let two = T::lit(2.0);
    pos.iter()
        .enumerate()
        .map(|(i, &v)| {
            if i == 0 {
                v * half_pi
            } else {
                T::pi() / (T::lit(4.0) * (T::one() + g)) * (T::one() + two * g * v)
            }
        })
        .collect()
}

pub fn dtlz5<T: Scalar>(x: &[T], m: usize) -> Vec<T> {
    let g = g_sphere(&x[m - 1..]);
    sphere_from_angles(&degenerate_angles(&x[..m - 1], g), T::one() + g)
}

pub fn dtlz6<T: Scalar>(x: &[T], m: usize) -> Vec<T> {
    let g: T = x[m - 1..].iter().map(|&v| v.powf(T::lit(0.1))).sum();
    sphere_from_angles(&degenerate_angles(&x[..m - 1], g), T::one() + g)
}

/// Last objective of DTLZ7 given the first `m - 1` objectives and `g`.
pub(crate) fn dtlz7_last<T: Scalar>(f: &[T], g: T) -> T {
    let m = f.len() + 1;
    let h = T::from_count(m)
        - f.iter()
            .map(|&fi| fi / (T::one() + g) * (T::one() + (T::lit(3.0) * T::pi() * fi).sin()))
            .sum::<T>();
    (T::one() + g) * h
}

pub fn dtlz7<T: Scalar>(x: &[T], m: usize) -> Vec<T> {
    let tail = &x[m - 1..];
    let g = T::one() + T::lit(9.0) / T::from_count(tail.len()) * tail.iter().copied().sum::<T>();
    let mut f: Vec<T> = x[..m - 1].to_vec();
    let last = dtlz7_last(&f, g);
    f.push(last);
    f
}
