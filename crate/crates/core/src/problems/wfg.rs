//! WFG toolkit members WFG1-5 and WFG7.
//!
//! Decision variables live in `z_i in [0, 2i]` (1-based). `k` is the number of
//! position-related parameters, the remaining `l = n - k` are distance-related.

use crate::scalar::Scalar;

fn correct_to_01<T: Scalar>(a: T) -> T {
    a.max(T::zero()).min(T::one())
}

fn b_poly<T: Scalar>(y: T, alpha: T) -> T {
    correct_to_01(y.powf(alpha))
}

fn b_flat<T: Scalar>(y: T, a: T, b: T, c: T) -> T {
    let one = T::one();
    let zero = T::zero();
    let t1 = zero.min((y - b).floor()) * a * (b - y) / b;
    let t2 = zero.min((c - y).floor()) * (one - a) * (y - c) / (one - c);
    correct_to_01(a + t1 - t2)
}

fn b_param<T: Scalar>(y: T, u: T, a: T, b: T, c: T) -> T {
    let two = T::lit(2.0);
    let v = a - (T::one() - two * u) * ((T::lit(0.5) - u).floor() + a).abs();
    correct_to_01(y.powf(b + (c - b) * v))
}

fn s_linear<T: Scalar>(y: T, a: T) -> T {
    correct_to_01((y - a).abs() / ((a - y).floor() + a).abs())
}

fn s_decept<T: Scalar>(y: T, a: T, b: T, c: T) -> T {
    let one = T::one();
    let t1 = (y - a + b).floor() * (one - c + (a - b) / b) / (a - b);
    let t2 = (a + b - y).floor() * (one - c + (one - a - b) / b) / (one - a - b);
    correct_to_01(one + ((y - a).abs() - b) * (t1 + t2 + one / b))
}

fn s_multi<T: Scalar>(y: T, a: T, b: T, c: T) -> T {
    let two = T::lit(2.0);
    let t1 = (y - c).abs() / (two * ((c - y).floor() + c));
    let t2 = (T::lit(4.0) * a + two) * T::pi() * (T::lit(0.5) - t1);
    correct_to_01((T::one() + t2.cos() + T::lit(4.0) * b * t1 * t1) / (b + two))
}

fn r_sum<T: Scalar>(y: &[T], w: &[T]) -> T {
    let num: T = y.iter().zip(w).map(|(&a, &b)| a * b).sum();
    let den: T = w.iter().copied().sum();
    correct_to_01(num / den)
}

fn r_sum_equal<T: Scalar>(y: &[T]) -> T {
    correct_to_01(y.iter().copied().sum::<T>() / T::from_count(y.len()))
}

fn r_nonsep<T: Scalar>(y: &[T], a: usize) -> T {
    let n = y.len();
    let mut num = T::zero();
    for j in 0..n {
        num = num + y[j];
        for k in 0..a.saturating_sub(1) {
            num = num + (y[j] - y[(j + 1 + k) % n]).abs();
        }
    }
    let half_ceil = a.div_ceil(2);
    let den = T::from_count(n) / T::from_count(a)
        * T::from_count(half_ceil)
        * T::from_count(1 + 2 * a - 2 * half_ceil);
    correct_to_01(num / den)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub(crate) enum Shape {
    Linear,
    Convex,
    Concave,
    Mixed,
    Disc,
}

/// Shape function `h_m` (1-based `m`) over the `M - 1` shape parameters.
pub(crate) fn shape<T: Scalar>(kind: Shape, x: &[T], m: usize) -> T {
    let big_m = x.len() + 1;
    let half_pi = T::pi() / T::lit(2.0);
    let one = T::one();
    match kind {
        Shape::Linear | Shape::Convex | Shape::Concave => {
            let mut r = one;
            for &xi in &x[..big_m - m] {
                r = r * match kind {
                    Shape::Linear => xi,
                    Shape::Convex => one - (xi * half_pi).cos(),
                    _ => (xi * half_pi).sin(),
                };
            }
            if m != 1 {
                let xi = x[big_m - m];
                r = r * match kind {
                    Shape::Linear => one - xi,
                    Shape::Convex => one - (xi * half_pi).sin(),
                    _ => (xi * half_pi).cos(),
                };
            }
            r
        }
        Shape::Mixed => {
            let a = T::lit(5.0);
            let two_a_pi = T::lit(2.0) * a * T::pi();
            one - x[0] - (two_a_pi * x[0] + half_pi).cos() / two_a_pi
        }
        Shape::Disc => {
            let a = T::lit(5.0);
            one - x[0] * (a * x[0] * T::pi()).cos().powi(2)
        }
    }
}

/// Shape kind for objective `m` (1-based) of the given variant.
pub(crate) fn shape_for(variant: u8, m: usize, big_m: usize) -> Shape {
    match variant {
        1 if m == big_m => Shape::Mixed,
        1 => Shape::Convex,
        2 if m == big_m => Shape::Disc,
        2 => Shape::Convex,
        3 => Shape::Linear,
        _ => Shape::Concave,
    }
}

/// Objectives from the reduced vector `t` (`M` entries).
fn finish<T: Scalar>(variant: u8, t: &[T]) -> Vec<T> {
    let big_m = t.len();
    let t_m = t[big_m - 1];
    let half = T::lit(0.5);
    let x: Vec<T> = (0..big_m - 1)
        .map(|i| {
            let a = if variant == 3 && i > 0 { T::zero() } else { T::one() };
            t_m.max(a) * (t[i] - half) + half
        })
        .collect();
    (1..=big_m)
        .map(|m| t_m + T::from_count(2 * m) * shape(shape_for(variant, m, big_m), &x, m))
        .collect()
}

fn position_groups<T: Scalar>(y: &[T], k: usize, big_m: usize, weighted: bool) -> Vec<T> {
    let per = k / (big_m - 1);
    (0..big_m - 1)
        .map(|i| {
            let range = i * per..(i + 1) * per;
            if weighted {
                let w: Vec<T> = range.clone().map(|j| T::from_count(2 * (j + 1))).collect();
                r_sum(&y[range], &w)
            } else {
                r_sum_equal(&y[range])
            }
        })
        .collect()
}

/// Evaluates WFG`variant` (1, 2, 3, 4, 5 or 7) with `k` position parameters and `big_m` objectives.
pub fn wfg<T: Scalar>(variant: u8, z: &[T], k: usize, big_m: usize) -> Vec<T> {
    let n = z.len();
    let mut y: Vec<T> = z
        .iter()
        .enumerate()
        .map(|(i, &zi)| zi / T::from_count(2 * (i + 1)))
        .collect();
    let a035 = T::lit(0.35);
    let t = match variant {
        1 => {
            for v in &mut y[k..] {
                *v = s_linear(*v, a035);
            }
            for v in &mut y[k..] {
                *v = b_flat(*v, T::lit(0.8), T::lit(0.75), T::lit(0.85));
            }
            for v in &mut y {
                *v = b_poly(*v, T::lit(0.02));
            }
            let mut t = position_groups(&y, k, big_m, true);
            let w: Vec<T> = (k..n).map(|j| T::from_count(2 * (j + 1))).collect();
            t.push(r_sum(&y[k..], &w));
            t
        }
        2 | 3 => {
            for v in &mut y[k..] {
                *v = s_linear(*v, a035);
            }
            let l = n - k;
            let mut reduced: Vec<T> = y[..k].to_vec();
            for j in 0..l / 2 {
                reduced.push(r_nonsep(&y[k + 2 * j..k + 2 * j + 2], 2));
            }
            let mut t = position_groups(&reduced, k, big_m, false);
            t.push(r_sum_equal(&reduced[k..]));
            t
        }
        4 | 5 => {
            for v in &mut y {
                *v = if variant == 4 {
                    s_multi(*v, T::lit(30.0), T::lit(10.0), a035)
                } else {
                    s_decept(*v, a035, T::lit(0.001), T::lit(0.05))
                };
            }
            let mut t = position_groups(&y, k, big_m, false);
            t.push(r_sum_equal(&y[k..]));
            t
        }
        7 => {
            let orig = y.clone();
            for i in 0..k {
                let u = r_sum_equal(&orig[i + 1..]);
                y[i] = b_param(orig[i], u, T::lit(0.98 / 49.98), T::lit(0.02), T::lit(50.0));
            }
            for v in &mut y[k..] {
                *v = s_linear(*v, a035);
            }
            let mut t = position_groups(&y, k, big_m, false);
            t.push(r_sum_equal(&y[k..]));
            t
        }
        _ => unreachable!("unsupported WFG variant {variant}"),
    };
    finish(variant, &t)
}

/// Front point for shape parameters `x` (length `M - 1`) with zero distance.
pub(crate) fn front_point<T: Scalar>(variant: u8, x: &[T]) -> Vec<T> {
    let big_m = x.len() + 1;
    let x: Vec<T> = x
        .iter()
        .enumerate()
        .map(|(i, &v)| if variant == 3 && i > 0 { T::lit(0.5) } else { v })
        .collect();
    (1..=big_m)
        .map(|m| T::from_count(2 * m) * shape(shape_for(variant, m, big_m), &x, m))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn optimal(k: usize, n: usize, pos: f64) -> Vec<f64> {
        (0..n)
            .map(|i| {
                let ub = 2.0 * (i + 1) as f64;
                if i < k { pos * ub } else { 0.35 * ub }
            })
            .collect()
    }

    #[test]
    fn optimal_distance_lands_on_front() {
        // with distance parameters at 0.35 the last reduced parameter is zero
        for variant in [1u8, 2, 3, 4, 5, 7] {
            let (k, n) = (2, 12);
            let z = optimal(k, n, 0.4);
            let f = wfg(variant, &z, k, 2);
            assert!(f.iter().all(|v| v.is_finite()));
            let sum_sq = (f[0] / 2.0).powi(2) + (f[1] / 4.0).powi(2);
            if matches!(variant, 4 | 5 | 7) {
                // concave front is a quarter ellipse
                assert!((sum_sq - 1.0).abs() < 1e-9, "WFG{variant}: {f:?}");
            }
            if variant == 3 {
                assert!((f[0] / 2.0 + f[1] / 4.0 - 1.0).abs() < 1e-9, "WFG3: {f:?}");
            }
        }
    }

    #[test]
    fn r_nonsep_reduces_to_mean_and_keeps_zero() {
        assert!((r_nonsep(&[0.2_f64, 0.4], 1) - 0.3).abs() < 1e-15);
        assert_eq!(r_nonsep(&[0.0_f64, 0.0], 2), 0.0);
        // two equal values with A = 2: 2y / 3
        assert!((r_nonsep(&[0.3_f64, 0.3], 2) - 0.2).abs() < 1e-15);
    }

    #[test]
    fn transformations_map_unit_interval() {
        for i in 0..=100 {
            let y = i as f64 / 100.0;
            for v in [
                s_linear(y, 0.35),
                b_flat(y, 0.8, 0.75, 0.85),
                b_poly(y, 0.02),
                s_multi(y, 30.0, 10.0, 0.35),
                s_decept(y, 0.35, 0.001, 0.05),
                b_param(y, 0.5, 0.98 / 49.98, 0.02, 50.0),
            ] {
                assert!((0.0..=1.0).contains(&v));
            }
        }
        assert!(s_multi(0.35_f64, 30.0, 10.0, 0.35).abs() < 1e-12);
        assert!(s_decept(0.35_f64, 0.35, 0.001, 0.05).abs() < 1e-12);
    }
}
