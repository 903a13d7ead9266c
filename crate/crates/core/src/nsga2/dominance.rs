use crate::error::{Error, Result};

/// Outcome of comparing two objective vectors under minimization.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
#[repr(i8)]
pub enum Dominance {
    /// The first vector dominates the second.
    Dominates = -1,
    /// Neither dominates (this includes equal vectors).
    Incomparable = 0,
    /// The second vector dominates the first.
    DominatedBy = 1,
}

impl Dominance {
    pub fn as_i8(self) -> i8 {
        self as i8
    }

    pub fn reverse(self) -> Self {
        match self {
            Dominance::Dominates => Dominance::DominatedBy,
            Dominance::DominatedBy => Dominance::Dominates,
            Dominance::Incomparable => Dominance::Incomparable,
        }
    }
}

/// Compares `a` against `b`; both must have the same length.
pub fn dominate<T: PartialOrd>(a: &[T], b: &[T]) -> Result<Dominance> {
    if a.len() != b.len() {
        return Err(Error::DimensionMismatch {
            expected: a.len(),
            actual: b.len(),
        });
    }
    Ok(compare(a, b))
}

/// Counts the objectives where each side is no worse than the other.
#[inline]
pub(crate) fn compare<T: PartialOrd>(a: &[T], b: &[T]) -> Dominance {
    debug_assert_eq!(a.len(), b.len());
    let m = a.len();
    let mut a_no_worse = 0;
    let mut b_no_worse = 0;
    for (x, y) in a.iter().zip(b) {
        if x >= y {
            b_no_worse += 1;
        }
        if y >= x {
            a_no_worse += 1;
        }
    }
    if a_no_worse == m && b_no_worse != m {
        Dominance::Dominates
    } else if a_no_worse != m && b_no_worse == m {
        Dominance::DominatedBy
    } else {
        Dominance::Incomparable
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn examples() {
        assert_eq!(dominate(&[1.0, 1.0], &[2.0, 2.0]).unwrap().as_i8(), -1);
        assert_eq!(dominate(&[1.0, 3.0], &[3.0, 1.0]).unwrap().as_i8(), 0);
        assert_eq!(dominate(&[2.0, 2.0], &[2.0, 2.0]).unwrap().as_i8(), 0);
        assert_eq!(dominate(&[2.0, 2.0], &[1.0, 2.0]).unwrap().as_i8(), 1);
        assert!(dominate(&[1.0], &[1.0, 2.0]).is_err());
    }
}
