//! Welford running moments with the pairwise (Chan et al.) merge.

use crate::scalar::Real;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RunningStats<T> {
    count: u64,
    mean: T,
    m2: T,
}

impl<T: Real> Default for RunningStats<T> {
    fn default() -> Self {
        Self::new()
    }
}

impl<T: Real> RunningStats<T> {
    pub fn new() -> Self {
        Self {
            count: 0,
            mean: T::zero(),
            m2: T::zero(),
        }
    }

    #[inline]
    pub fn push(&mut self, x: T) {
        self.count += 1;
        let delta = x - self.mean;
        self.mean = self.mean + delta / T::c(self.count as f64);
        self.m2 = self.m2 + delta * (x - self.mean);
    }

    /// Combines two partial accumulators. Not commutative in floating point;
    /// callers fix the merge order.
    pub fn merge(&self, other: &Self) -> Self {
        if other.count == 0 {
            return *self;
        }
        if self.count == 0 {
            return *other;
        }
        let count = self.count + other.count;
        let (na, nb, n) = (
            T::c(self.count as f64),
            T::c(other.count as f64),
            T::c(count as f64),
        );
        let delta = other.mean - self.mean;
        Self {
            count,
            mean: self.mean + delta * nb / n,
            m2: self.m2 + other.m2 + delta * delta * na * nb / n,
        }
    }

    pub fn count(&self) -> u64 {
        self.count
    }

    pub fn mean(&self) -> T {
        self.mean
    }

    /// Unbiased sample variance; zero below two samples.
    pub fn variance(&self) -> T {
        if self.count < 2 {
            T::zero()
        } else {
            self.m2 / T::c((self.count - 1) as f64)
        }
    }

    pub fn std_error(&self) -> T {
        if self.count == 0 {
            return T::zero();
        }
        (self.variance() / T::c(self.count as f64)).sqrt()
    }
}

impl<T: Real> Extend<T> for RunningStats<T> {
    fn extend<I: IntoIterator<Item = T>>(&mut self, iter: I) {
        for x in iter {
            self.push(x);
        }
    }
}

impl<T: Real> FromIterator<T> for RunningStats<T> {
    fn from_iter<I: IntoIterator<Item = T>>(iter: I) -> Self {
        let mut s = Self::new();
        s.extend(iter);
        s
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn two_pass(xs: &[f64]) -> (f64, f64) {
        let n = xs.len() as f64;
        let mean = xs.iter().sum::<f64>() / n;
        let var = xs.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / (n - 1.0);
        (mean, var)
    }

    #[test]
    fn matches_two_pass() {
        let xs = [2.0, 4.0, 4.0, 4.0, 5.0, 5.0, 7.0, 9.0];
        let s: RunningStats<f64> = xs.iter().copied().collect();
        let (m, v) = two_pass(&xs);
        assert_eq!(s.count(), 8);
        assert!((s.mean() - m).abs() < 1e-15);
        assert!((s.variance() - v).abs() < 1e-14);
        assert!((s.std_error() - (v / 8.0).sqrt()).abs() < 1e-15);
    }

    #[test]
    fn empty_and_single() {
        let mut s = RunningStats::<f64>::new();
        assert_eq!(s.variance(), 0.0);
        assert_eq!(s.std_error(), 0.0);
        s.push(3.0);
        assert_eq!(s.mean(), 3.0);
        assert_eq!(s.variance(), 0.0);
        assert_eq!(s.merge(&RunningStats::new()), s);
        assert_eq!(RunningStats::new().merge(&s), s);
    }

    proptest! {
        #[test]
        fn merge_equals_single_stream(
            xs in prop::collection::vec(-1e3f64..1e3, 2..200),
            split in 0usize..200,
        ) {
            let k = split.min(xs.len());
            let a: RunningStats<f64> = xs[..k].iter().copied().collect();
            let b: RunningStats<f64> = xs[k..].iter().copied().collect();
            let merged = a.merge(&b);
            let whole: RunningStats<f64> = xs.iter().copied().collect();
            prop_assert_eq!(merged.count(), whole.count());
            prop_assert!((merged.mean() - whole.mean()).abs() <= 1e-9 * (1.0 + whole.mean().abs()));
            prop_assert!((merged.variance() - whole.variance()).abs() <= 1e-8 * (1.0 + whole.variance()));
        }
    }
}
