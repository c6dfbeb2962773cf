//! Probability spectra of mixed states.
//!
//! A [`Spectrum`] holds the nonincreasing eigenvalues `p_1 >= p_2 >= ... > 0` of a
//! state together with the tail quantities used throughout the crate:
//!
//! - tail mass `d_k = sum_{i>k} p_i`
//! - tail entropy `s_k = sum_{i>k} eta(p_i)`
//!
//! Indices are 1-based to match the usual notation, so `eigenvalue(1)` is the
//! largest eigenvalue and `tail_sums(0)` returns `(1, S(rho))`.
//!
//! Finite spectra keep precomputed suffix sums. The geometric family (thermal
//! state of an oscillator) has closed forms for everything and so supports
//! infinite rank exactly. [`SpectrumModel::TruncatedNumeric`] covers numerically
//! obtained infinite-rank spectra whose unlisted tail is certified negligible.

use alloc::vec::Vec;

use crate::math::{self, eta, ln, Neumaier};
use crate::{Error, Result};

/// Normalisation tolerance applied to explicit and truncated eigenvalue lists.
pub const NORMALIZATION_TOLERANCE: f64 = 1e-12;

/// Default certificate tolerance for the unlisted tail of a truncated spectrum.
pub const DEFAULT_TAIL_TOLERANCE: f64 = 1e-12;

/// How a spectrum is specified.
#[derive(Debug, Clone, PartialEq)]
pub enum SpectrumModel {
    /// Finite list of eigenvalues, nonincreasing, summing to one.
    Explicit(Vec<f64>),
    /// `p_i = 1/n`.
    Uniform(usize),
    /// `p_i = 2(n - i + 1) / (n(n + 1))`.
    Linear(usize),
    /// `p_i = (1 - q) q^{i-1}`, infinite rank.
    Geometric { q: f64 },
    /// Leading eigenvalues of an infinite-rank state. The unlisted tail must be
    /// certified below `tail_tolerance` in both mass and entropy.
    TruncatedNumeric { p: Vec<f64>, tail_tolerance: f64 },
}

impl SpectrumModel {
    /// Thermal state of an oscillator with mean occupation `mean`, i.e.
    /// `q = mean / (mean + 1)`.
    pub fn thermal(mean: f64) -> Self {
        SpectrumModel::Geometric {
            q: mean / (mean + 1.0),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Rank {
    Finite(usize),
    Infinite,
}

impl Rank {
    pub fn finite(self) -> Option<usize> {
        match self {
            Rank::Finite(n) => Some(n),
            Rank::Infinite => None,
        }
    }
}

/// Tail mass `d_k` and tail entropy `s_k` at index `k`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TailSums {
    pub k: usize,
    pub mass: f64,
    pub entropy: f64,
}

#[derive(Debug, Clone, Copy, PartialEq)]
enum Family {
    Explicit,
    Uniform,
    Linear,
}

#[derive(Debug, Clone)]
enum Repr {
    Finite {
        family: Family,
        p: Vec<f64>,
        // index k holds the sum over i > k, k = 0..=n
        tail_mass: Vec<f64>,
        tail_entropy: Vec<f64>,
    },
    Geometric {
        q: f64,
        ln_q: f64,
        ln_one_minus_q: f64,
    },
    Truncated {
        p: Vec<f64>,
        tail_mass: Vec<f64>,
        tail_entropy: Vec<f64>,
        tolerance: f64,
    },
}

/// Spectrum of a mixed state with finite entropy. Immutable once built.
#[derive(Debug, Clone)]
pub struct Spectrum {
    repr: Repr,
    entropy: f64,
}

impl Spectrum {
    pub fn new(model: SpectrumModel) -> Result<Self> {
        match model {
            SpectrumModel::Explicit(p) => Self::explicit(p),
            SpectrumModel::Uniform(n) => Self::uniform(n),
            SpectrumModel::Linear(n) => Self::linear(n),
            SpectrumModel::Geometric { q } => Self::geometric(q),
            SpectrumModel::TruncatedNumeric { p, tail_tolerance } => {
                Self::truncated(p, tail_tolerance)
            }
        }
    }

    pub fn explicit(p: Vec<f64>) -> Result<Self> {
        let p = validated_list(p)?;
        let total = math::sum(p.iter().copied());
        if (total - 1.0).abs() > NORMALIZATION_TOLERANCE {
            return Err(Error::NonNormalized {
                sum: total,
                tolerance: NORMALIZATION_TOLERANCE,
            });
        }
        let p: Vec<f64> = p.into_iter().map(|x| x / total).collect();
        Self::finite_from(Family::Explicit, p)
    }

    pub fn uniform(n: usize) -> Result<Self> {
        if n < 2 {
            return Err(Error::NotMixed);
        }
        let p = alloc::vec![1.0 / n as f64; n];
        Self::finite_from(Family::Uniform, p)
    }

    pub fn linear(n: usize) -> Result<Self> {
        if n < 2 {
            return Err(Error::NotMixed);
        }
        let norm = (n * (n + 1)) as f64;
        let p = (1..=n).map(|i| 2.0 * (n - i + 1) as f64 / norm).collect();
        Self::finite_from(Family::Linear, p)
    }

    pub fn geometric(q: f64) -> Result<Self> {
        if !(q > 0.0 && q < 1.0) {
            return Err(Error::InvalidParameter(
                "geometric ratio q must lie in (0, 1)",
            ));
        }
        let ln_q = ln(q);
        let ln_one_minus_q = libm::log1p(-q);
        let entropy = -ln_one_minus_q - q * ln_q / (1.0 - q);
        Ok(Spectrum {
            repr: Repr::Geometric {
                q,
                ln_q,
                ln_one_minus_q,
            },
            entropy,
        })
    }

    /// Thermal state with mean occupation `mean > 0`; its entropy is `g(mean)`.
    pub fn thermal(mean: f64) -> Result<Self> {
        if !(mean > 0.0 && mean.is_finite()) {
            return Err(Error::InvalidParameter("mean occupation must be positive"));
        }
        Self::geometric(mean / (mean + 1.0))
    }

    pub fn truncated(p: Vec<f64>, tolerance: f64) -> Result<Self> {
        if !(tolerance > 0.0) {
            return Err(Error::InvalidParameter("tail tolerance must be positive"));
        }
        let p = validated_list(p)?;
        if p.len() < 2 {
            return Err(Error::InfiniteEntropy { tolerance });
        }
        let total = math::sum(p.iter().copied());
        let residual = 1.0 - total;
        if residual < -NORMALIZATION_TOLERANCE || residual > tolerance.max(NORMALIZATION_TOLERANCE)
        {
            return Err(Error::NonNormalized {
                sum: total,
                tolerance: tolerance.max(NORMALIZATION_TOLERANCE),
            });
        }
        // Certify the unlisted tail by continuing the last observed ratio geometrically.
        let last = p[p.len() - 1];
        let ratio = last / p[p.len() - 2];
        if !(ratio < 1.0) {
            return Err(Error::InfiniteEntropy { tolerance });
        }
        let geometric_sum = ratio / (1.0 - ratio);
        let tail_mass_bound = last * geometric_sum;
        let tail_entropy_bound = -last * ln(last) * geometric_sum
            - last * ln(ratio) * ratio / ((1.0 - ratio) * (1.0 - ratio));
        if tail_mass_bound > tolerance || tail_entropy_bound > tolerance {
            return Err(Error::InfiniteEntropy { tolerance });
        }
        let p: Vec<f64> = p.into_iter().map(|x| x / total).collect();
        let (tail_mass, tail_entropy) = suffix_sums(&p);
        let entropy = tail_entropy[0];
        if p[0] >= 1.0 {
            return Err(Error::NotMixed);
        }
        Ok(Spectrum {
            repr: Repr::Truncated {
                p,
                tail_mass,
                tail_entropy,
                tolerance,
            },
            entropy,
        })
    }

    fn finite_from(family: Family, p: Vec<f64>) -> Result<Self> {
        if p.len() < 2 || p[0] >= 1.0 {
            return Err(Error::NotMixed);
        }
        let (tail_mass, tail_entropy) = suffix_sums(&p);
        let entropy = match family {
            Family::Uniform => ln(p.len() as f64),
            _ => tail_entropy[0],
        };
        Ok(Spectrum {
            repr: Repr::Finite {
                family,
                p,
                tail_mass,
                tail_entropy,
            },
            entropy,
        })
    }

    pub fn rank(&self) -> Rank {
        match &self.repr {
            Repr::Finite { p, .. } => Rank::Finite(p.len()),
            Repr::Geometric { .. } | Repr::Truncated { .. } => Rank::Infinite,
        }
    }

    /// Von Neumann entropy `S(rho)` in nats.
    pub fn entropy(&self) -> f64 {
        self.entropy
    }

    /// The listed eigenvalues, if the spectrum is backed by a list.
    pub fn listed(&self) -> Option<&[f64]> {
        match &self.repr {
            Repr::Finite { p, .. } | Repr::Truncated { p, .. } => Some(p),
            Repr::Geometric { .. } => None,
        }
    }

    /// Geometric ratio `q` for the thermal family.
    pub fn geometric_ratio(&self) -> Option<f64> {
        match self.repr {
            Repr::Geometric { q, .. } => Some(q),
            _ => None,
        }
    }

    /// Tail tolerance of a truncated spectrum.
    pub fn tail_tolerance(&self) -> Option<f64> {
        match self.repr {
            Repr::Truncated { tolerance, .. } => Some(tolerance),
            _ => None,
        }
    }

    /// `p_i`, 1-based.
    pub fn eigenvalue(&self, i: usize) -> Result<f64> {
        if i == 0 {
            return Err(Error::InvalidParameter("eigenvalue index is 1-based"));
        }
        match &self.repr {
            Repr::Finite { p, .. } => p.get(i - 1).copied().ok_or(Error::IndexBeyondRank {
                index: i,
                rank: p.len(),
            }),
            Repr::Geometric { q, ln_q, .. } => Ok((1.0 - q) * math::exp((i - 1) as f64 * ln_q)),
            Repr::Truncated { p, .. } => p.get(i - 1).copied().ok_or(Error::BeyondResolution {
                index: i,
                listed: p.len(),
            }),
        }
    }

    /// `ln p_i`, evaluated without forming `p_i` where a closed form exists.
    pub fn ln_eigenvalue(&self, i: usize) -> Result<f64> {
        match self.repr {
            Repr::Geometric {
                ln_q,
                ln_one_minus_q,
                ..
            } if i >= 1 => Ok(ln_one_minus_q + (i - 1) as f64 * ln_q),
            _ => self.eigenvalue(i).map(ln),
        }
    }

    /// Tail mass `d_k` and tail entropy `s_k`. Zero for `k >= n` on finite spectra
    /// and beyond the listed eigenvalues of a truncated spectrum.
    pub fn tail_sums(&self, k: usize) -> TailSums {
        let (mass, entropy) = match &self.repr {
            Repr::Finite {
                family,
                p,
                tail_mass,
                tail_entropy,
            } => {
                let n = p.len();
                if k >= n {
                    (0.0, 0.0)
                } else {
                    match family {
                        Family::Uniform => {
                            let d = (n - k) as f64 / n as f64;
                            (d, d * self.entropy)
                        }
                        Family::Linear => {
                            let r = (n - k) as f64;
                            (r * (r + 1.0) / (n * (n + 1)) as f64, tail_entropy[k])
                        }
                        Family::Explicit => (tail_mass[k], tail_entropy[k]),
                    }
                }
            }
            Repr::Geometric { ln_q, .. } => {
                let d = math::exp(k as f64 * ln_q);
                (d, d * (self.entropy - k as f64 * ln_q))
            }
            Repr::Truncated {
                p,
                tail_mass,
                tail_entropy,
                ..
            } => {
                if k >= p.len() {
                    (0.0, 0.0)
                } else {
                    (tail_mass[k], tail_entropy[k])
                }
            }
        };
        TailSums { k, mass, entropy }
    }

    /// Power sums over the tail, `(sum_{i>n} p_i^t, sum_{i>n} (-ln p_i) p_i^t)`.
    ///
    /// Closed form for the geometric family; direct summation over the listed
    /// eigenvalues otherwise.
    pub fn power_tail(&self, t: f64, n: usize) -> (f64, f64) {
        match self.repr {
            Repr::Geometric {
                ln_q,
                ln_one_minus_q,
                ..
            } => {
                // p_{n+1+j}^t = (1-q)^t u^{n+j}, u = q^t
                let u = math::exp(t * ln_q);
                let one_minus_u = -libm::expm1(t * ln_q);
                let head = math::exp(t * ln_one_minus_q + n as f64 * t * ln_q);
                let power = head / one_minus_u;
                let weighted_index =
                    head * (n as f64 / one_minus_u + u / (one_minus_u * one_minus_u));
                let log_weighted = -ln_one_minus_q * power - ln_q * weighted_index;
                (power, log_weighted)
            }
            Repr::Finite { ref p, .. } | Repr::Truncated { ref p, .. } => {
                let mut power = Neumaier::default();
                let mut log_weighted = Neumaier::default();
                for &x in p.iter().skip(n) {
                    let lx = ln(x);
                    let w = math::exp(t * lx);
                    power.add(w);
                    log_weighted.add(-lx * w);
                }
                (power.value(), log_weighted.value())
            }
        }
    }

    /// Whether `Tr rho^beta < inf` for every `beta > 0`, the condition under which
    /// the optimal Hamiltonian has a finite partition function at every inverse temperature.
    pub fn satisfies_gibbs_condition(&self) -> bool {
        // Finite lists trivially; the geometric family and certified truncations
        // decay geometrically.
        true
    }
}

fn validated_list(mut p: Vec<f64>) -> Result<Vec<f64>> {
    if p.iter().any(|x| !x.is_finite() || *x < 0.0) {
        return Err(Error::InvalidSpectrum(
            "eigenvalues must be finite and nonnegative",
        ));
    }
    if p.windows(2).any(|w| w[1] > w[0]) {
        return Err(Error::InvalidSpectrum("eigenvalues must be nonincreasing"));
    }
    // zeros lie outside the support
    while p.last() == Some(&0.0) {
        p.pop();
    }
    if p.is_empty() {
        return Err(Error::NotMixed);
    }
    Ok(p)
}

fn suffix_sums(p: &[f64]) -> (Vec<f64>, Vec<f64>) {
    let n = p.len();
    let mut tail_mass = alloc::vec![0.0; n + 1];
    let mut tail_entropy = alloc::vec![0.0; n + 1];
    let mut mass = Neumaier::default();
    let mut entropy = Neumaier::default();
    for k in (0..n).rev() {
        mass.add(p[k]);
        entropy.add(eta(p[k]));
        tail_mass[k] = mass.value();
        tail_entropy[k] = entropy.value();
    }
    (tail_mass, tail_entropy)
}

#[cfg(test)]
mod tests {
    use super::*;
    use core::f64::consts::LN_2;

    fn close(a: f64, b: f64, tol: f64) -> bool {
        (a - b).abs() <= tol
    }

    #[test]
    fn uniform_entropy_is_ln_n() {
        let s = Spectrum::uniform(10).unwrap();
        assert!(close(s.entropy(), libm::log(10.0), 1e-15));
        assert_eq!(s.eigenvalue(3).unwrap(), 0.1);
    }

    #[test]
    fn thermal_entropy_at_unit_mean() {
        let s = Spectrum::geometric(0.5).unwrap();
        assert!(close(s.entropy(), 2.0 * LN_2, 1e-15));
        let t = Spectrum::thermal(1.0).unwrap();
        assert!(close(t.entropy(), 1.386294361, 1e-9));
    }

    #[test]
    fn non_normalized_list_is_rejected() {
        assert!(matches!(
            Spectrum::explicit(alloc::vec![0.6, 0.5]),
            Err(Error::NonNormalized { .. })
        ));
    }

    #[test]
    fn pure_and_rank_one_states_are_not_mixed() {
        assert_eq!(
            Spectrum::explicit(alloc::vec![1.0]).unwrap_err(),
            Error::NotMixed
        );
        assert_eq!(
            Spectrum::explicit(alloc::vec![1.0, 0.0]).unwrap_err(),
            Error::NotMixed
        );
        assert_eq!(Spectrum::uniform(1).unwrap_err(), Error::NotMixed);
    }

    #[test]
    fn increasing_list_is_rejected() {
        assert!(matches!(
            Spectrum::explicit(alloc::vec![0.4, 0.6]),
            Err(Error::InvalidSpectrum(_))
        ));
    }

    #[test]
    fn near_normalized_list_is_renormalized() {
        let s = Spectrum::explicit(alloc::vec![0.5 + 4e-13, 0.5]).unwrap();
        let p = s.listed().unwrap();
        assert!(close(p[0] + p[1], 1.0, 4e-16));
        assert!(p[0] >= p[1]);
    }

    #[test]
    fn uniform_tail_sums() {
        let s = Spectrum::uniform(10).unwrap();
        let t = s.tail_sums(3);
        assert!(close(t.mass, 0.7, 1e-15));
        assert!(close(t.entropy, 0.7 * libm::log(10.0), 1e-15));
        let end = s.tail_sums(10);
        assert_eq!((end.mass, end.entropy), (0.0, 0.0));
    }

    #[test]
    fn geometric_tail_sums() {
        let s = Spectrum::geometric(0.5).unwrap();
        let t = s.tail_sums(2);
        assert!(close(t.mass, 0.25, 1e-16));
        assert!(close(t.entropy, LN_2, 1e-15));
    }

    #[test]
    fn eigenvalue_examples() {
        let lin = Spectrum::linear(10).unwrap();
        assert!(close(lin.eigenvalue(1).unwrap(), 20.0 / 110.0, 1e-16));
        let geo = Spectrum::geometric(0.5).unwrap();
        assert!(close(geo.eigenvalue(3).unwrap(), 0.125, 1e-16));
        let uni = Spectrum::uniform(4).unwrap();
        assert_eq!(
            uni.eigenvalue(5).unwrap_err(),
            Error::IndexBeyondRank { index: 5, rank: 4 }
        );
    }

    #[test]
    fn linear_closed_form_tail_mass_matches_suffix() {
        let s = Spectrum::linear(10).unwrap();
        let p = s.listed().unwrap();
        for k in 0..10 {
            let direct: f64 = p[k..].iter().sum();
            assert!(close(s.tail_sums(k).mass, direct, 1e-15));
        }
    }

    #[test]
    fn geometric_power_tail_matches_direct_sum() {
        let s = Spectrum::geometric(0.3).unwrap();
        for &t in &[0.5, 1.0, 2.5] {
            for n in [0usize, 1, 4] {
                let (pw, lw) = s.power_tail(t, n);
                let mut dp = 0.0;
                let mut dl = 0.0;
                for i in (n + 1)..400 {
                    let p = s.eigenvalue(i).unwrap();
                    dp += libm::pow(p, t);
                    dl += -libm::log(p) * libm::pow(p, t);
                }
                assert!(close(pw, dp, 1e-13), "t={t} n={n}");
                assert!(close(lw, dl, 1e-12), "t={t} n={n}");
            }
        }
    }

    #[test]
    fn truncated_requires_certified_tail() {
        let q: f64 = 0.1;
        let p: Vec<f64> = (0..20)
            .map(|i| (1.0 - q) * libm::pow(q, i as f64))
            .collect();
        let s = Spectrum::truncated(p.clone(), 1e-12).unwrap();
        assert_eq!(s.rank(), Rank::Infinite);
        assert!(close(
            s.entropy(),
            Spectrum::geometric(q).unwrap().entropy(),
            1e-13
        ));
        assert!(matches!(
            s.eigenvalue(21),
            Err(Error::BeyondResolution {
                index: 21,
                listed: 20
            })
        ));

        let short: Vec<f64> = p[..6].to_vec();
        assert!(matches!(
            Spectrum::truncated(short, 1e-9),
            Err(Error::NonNormalized { .. })
        ));
        let flat = alloc::vec![0.25; 4];
        assert!(matches!(
            Spectrum::truncated(flat, 1e-12),
            Err(Error::InfiniteEntropy { .. })
        ));
    }
}
