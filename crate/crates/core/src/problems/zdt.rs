//! ZDT bi-objective suite (real-coded members).

use crate::scalar::Scalar;

fn tail_mean<T: Scalar>(x: &[T]) -> T {
    let n = x.len();
    x[1..].iter().copied().sum::<T>() / T::from_count(n - 1)
}

pub fn zdt1<T: Scalar>(x: &[T]) -> Vec<T> {
    let f1 = x[0];
    let g = T::one() + T::lit(9.0) * tail_mean(x);
    vec![f1, g * (T::one() - (f1 / g).sqrt())]
}

pub fn zdt2<T: Scalar>(x: &[T]) -> Vec<T> {
    let f1 = x[0];
    let g = T::one() + T::lit(9.0) * tail_mean(x);
    vec![f1, g * (T::one() - (f1 / g).powi(2))]
}

pub fn zdt3<T: Scalar>(x: &[T]) -> Vec<T> {
    let f1 = x[0];
    let g = T::one() + T::lit(9.0) * tail_mean(x);
    let h = T::one() - (f1 / g).sqrt() - (f1 / g) * (T::lit(10.0) * T::pi() * f1).sin();
    vec![f1, g * h]
}

pub fn zdt4<T: Scalar>(x: &[T]) -> Vec<T> {
    let n = x.len();
    let f1 = x[0];
    let four_pi = T::lit(4.0) * T::pi();
    let ten = T::lit(10.0);
    let g = T::one()
        + ten * T::from_count(n - 1)
        + x[1..]
            .iter()
            .map(|&xi| xi * xi - ten * (four_pi * xi).cos())
            .sum::<T>();
    vec![f1, g * (T::one() - (f1 / g).sqrt())]
}

pub fn zdt6<T: Scalar>(x: &[T]) -> Vec<T> {
    let f1 = T::one() - (T::lit(-4.0) * x[0]).exp() * (T::lit(6.0) * T::pi() * x[0]).sin().powi(6);
    let g = T::one() + T::lit(9.0) * tail_mean(x).powf(T::lit(0.25));
    vec![f1, g * (T::one() - (f1 / g).powi(2))]
}

/// Smallest `f1` reachable by ZDT6.
pub const ZDT6_F1_MIN: f64 = 0.280_775_319_1;
