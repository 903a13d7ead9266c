//! Real-coded variation: simulated binary crossover and polynomial mutation.

use rand::Rng;

use crate::rng::unit;
use crate::scalar::Scalar;

/// Bounded SBX on the coordinates listed in `active`; other coordinates are untouched.
pub fn sbx<T: Scalar, R: Rng + ?Sized>(
    p1: &[T],
    p2: &[T],
    active: &[usize],
    lower: &[T],
    upper: &[T],
    eta: T,
    rng: &mut R,
) -> (Vec<T>, Vec<T>) {
    let mut c1 = p1.to_vec();
    let mut c2 = p2.to_vec();
    let one = T::one();
    let two = T::lit(2.0);
    let half = T::lit(0.5);
    let exponent = one / (eta + one);
    let spread = |beta: T, u: T| -> T {
        let alpha = two - beta.powf(-(eta + one));
        if u <= one / alpha {
            (u * alpha).powf(exponent)
        } else {
            (one / (two - u * alpha)).powf(exponent)
        }
    };
    for &i in active {
        if rng.random::<f64>() > 0.5 {
            continue;
        }
        let (a, b) = (p1[i], p2[i]);
        if (a - b).abs() <= T::lit(1e-14) {
            continue;
        }
        let (y1, y2) = if a < b { (a, b) } else { (b, a) };
        let (yl, yu) = (lower[i], upper[i]);
        let u: T = unit(rng);
        let betaq = spread(one + two * (y1 - yl) / (y2 - y1), u);
        let mut v1 = half * ((y1 + y2) - betaq * (y2 - y1));
        let betaq = spread(one + two * (yu - y2) / (y2 - y1), u);
        let mut v2 = half * ((y1 + y2) + betaq * (y2 - y1));
        v1 = v1.max(yl).min(yu);
        v2 = v2.max(yl).min(yu);
        if rng.random::<f64>() <= 0.5 {
            std::mem::swap(&mut v1, &mut v2);
        }
        c1[i] = v1;
        c2[i] = v2;
    }
    (c1, c2)
}

/// Bounded polynomial mutation; each active coordinate mutates with probability `per_var`.
pub fn polynomial_mutation<T: Scalar, R: Rng + ?Sized>(
    x: &mut [T],
    active: &[usize],
    lower: &[T],
    upper: &[T],
    eta: T,
    per_var: f64,
    rng: &mut R,
) {
    let one = T::one();
    let two = T::lit(2.0);
    let half = T::lit(0.5);
    let pow = one / (eta + one);
    for &i in active {
        if rng.random::<f64>() >= per_var {
            continue;
        }
        let (yl, yu) = (lower[i], upper[i]);
        let range = yu - yl;
        if range <= T::zero() {
            continue;
        }
        let y = x[i];
        let d1 = (y - yl) / range;
        let d2 = (yu - y) / range;
        let r: T = unit(rng);
        let dq = if r <= half {
            let xy = one - d1;
            let val = two * r + (one - two * r) * xy.powf(eta + one);
            val.powf(pow) - one
        } else {
            let xy = one - d2;
            let val = two * (one - r) + two * (r - half) * xy.powf(eta + one);
            one - val.powf(pow)
        };
        x[i] = (y + dq * range).max(yl).min(yu);
    }
}

/// Clamps every coordinate into its box.
pub fn clip<T: Scalar>(x: &mut [T], lower: &[T], upper: &[T]) {
    for ((v, &lo), &hi) in x.iter_mut().zip(lower).zip(upper) {
        *v = v.max(lo).min(hi);
    }
}
