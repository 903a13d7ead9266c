//! UF1 and UF2 from the CEC 2009 unconstrained suite.

use crate::scalar::Scalar;

fn split_sums<T: Scalar>(x: &[T], term: impl Fn(usize, T) -> T) -> (T, T) {
    let n = x.len();
    let (mut odd, mut even) = (T::zero(), T::zero());
    let (mut n_odd, mut n_even) = (0usize, 0usize);
    // 1-based j in 2..=n
    for j in 2..=n {
        let y = term(j, x[j - 1]);
        if j % 2 == 1 {
            odd = odd + y * y;
            n_odd += 1;
        } else {
            even = even + y * y;
            n_even += 1;
        }
    }
    let two = T::lit(2.0);
    (
        two * odd / T::from_count(n_odd.max(1)),
        two * even / T::from_count(n_even.max(1)),
    )
}

pub fn uf1<T: Scalar>(x: &[T]) -> Vec<T> {
    let n = T::from_count(x.len());
    let x1 = x[0];
    let six_pi = T::lit(6.0) * T::pi();
    let (s1, s2) = split_sums(x, |j, xj| {
        xj - (six_pi * x1 + T::from_count(j) * T::pi() / n).sin()
    });
    vec![x1 + s1, T::one() - x1.sqrt() + s2]
}

pub fn uf2<T: Scalar>(x: &[T]) -> Vec<T> {
    let n = T::from_count(x.len());
    let x1 = x[0];
    let pi = T::pi();
    let (s1, s2) = split_sums(x, |j, xj| {
        let jf = T::from_count(j);
        let amp = T::lit(0.3) * x1 * x1 * (T::lit(24.0) * pi * x1 + T::lit(4.0) * jf * pi / n).cos()
            + T::lit(0.6) * x1;
        let phase = T::lit(6.0) * pi * x1 + jf * pi / n;
        if j % 2 == 1 {
            xj - amp * phase.cos()
        } else {
            xj - amp * phase.sin()
        }
    });
    vec![x1 + s1, T::one() - x1.sqrt() + s2]
}
