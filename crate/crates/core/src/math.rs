//! Scalar helpers shared by every module.

/// `eta(x) = -x ln x`, with `eta(0) = 0`.
#[inline]
pub fn eta(x: f64) -> f64 {
    if x <= 0.0 {
        0.0
    } else {
        -x * libm::log(x)
    }
}

/// Binary entropy `eta(p) + eta(1 - p)` in nats.
#[inline]
pub fn binary_entropy(p: f64) -> f64 {
    eta(p) + eta(1.0 - p)
}

/// Entropy of the thermal state of a single bosonic mode with mean occupation `e`:
/// `g(e) = (e + 1) ln(e + 1) - e ln e`.
pub fn oscillator_entropy(e: f64) -> f64 {
    if e <= 0.0 {
        return 0.0;
    }
    (e + 1.0) * libm::log1p(e) - e * libm::log(e)
}

#[inline]
pub(crate) fn ln(x: f64) -> f64 {
    libm::log(x)
}

#[inline]
pub(crate) fn exp(x: f64) -> f64 {
    libm::exp(x)
}

/// Compensated summation, used wherever long probability sums must stay normalised.
#[derive(Debug, Default, Clone, Copy)]
pub(crate) struct Neumaier {
    sum: f64,
    carry: f64,
}

impl Neumaier {
    pub(crate) fn add(&mut self, x: f64) {
        let t = self.sum + x;
        if libm::fabs(self.sum) >= libm::fabs(x) {
            self.carry += (self.sum - t) + x;
        } else {
            self.carry += (x - t) + self.sum;
        }
        self.sum = t;
    }

    pub(crate) fn value(&self) -> f64 {
        self.sum + self.carry
    }
}

pub(crate) fn sum<I: IntoIterator<Item = f64>>(items: I) -> f64 {
    let mut acc = Neumaier::default();
    for x in items {
        acc.add(x);
    }
    acc.value()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn eta_conventions() {
        assert_eq!(eta(0.0), 0.0);
        assert_eq!(eta(1.0), 0.0);
        assert!((eta(0.5) - 0.5 * core::f64::consts::LN_2).abs() < 1e-16);
    }

    #[test]
    fn oscillator_entropy_at_one_is_two_ln_two() {
        assert!((oscillator_entropy(1.0) - 2.0 * core::f64::consts::LN_2).abs() < 1e-15);
    }

    #[test]
    fn compensated_sum_recovers_small_terms() {
        let v = [1.0, 1e-17, 1e-17, -1.0];
        assert!((sum(v) - 2e-17).abs() < 1e-30);
    }
}
