//! The optimal grounded Hamiltonian `H(rho, E0, E)` and the minimal Gibbs entropy.
//!
//! Among grounded Hamiltonians `H` with `Tr H rho <= E0`, `H(rho, E0, E)` minimises
//! the entropy of the Gibbs state at energy `E`. With `theta = E / E0` and the
//! breakpoints `E_1 = 0`, `E_k = E0 / (d_k + k p_k)`:
//!
//! - case A (`rank n < inf`, `E >= E0 / (n p_n)`): the Gibbs state is uniform on
//!   the support and the entropy is `ln n`;
//! - case B (otherwise): with `m` such that `E` lies in `(E_m, E_{m+1}]`,
//!   `h_i = 0` for `i <= m` and `h_i = (E0 / beta_m) (ln c - ln p_i)` beyond,
//!   where `c = (1 - theta d_m) / (theta m)` and `beta_m = s_m + d_m ln c`.
//!
//! Every constructed Hamiltonian satisfies `sum_i p_i h_i = E0`.

use alloc::vec::Vec;

use crate::gibbs::{ArithmeticTail, GibbsState, Hamiltonian};
use crate::math::{eta, ln, Neumaier};
use crate::spectra::{Rank, Spectrum};
use crate::{Error, Result};

/// Relative tolerance used at interval endpoints and the case boundary.
pub const BOUNDARY_TOLERANCE: f64 = 1e-12;

/// `beta_m` at or below this multiple of the tail mass `d_m` is reported as
/// degenerate (`beta_m / d_m` is the mean of `ln(c / p_i)` over the tail).
pub const DEGENERATE_BETA: f64 = 1e-14;

/// Number of levels beyond the kernel that an infinite-rank optimal Hamiltonian
/// sums term by term before switching to the closed-form tail.
const INFINITE_HEAD_EXTRA: usize = 64;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Case {
    A,
    B,
}

impl Case {
    pub fn label(self) -> &'static str {
        match self {
            Case::A => "A",
            Case::B => "B",
        }
    }
}

/// Breakpoints `E_1 = 0 <= E_2 <= ...` for a fixed `E0`.
#[derive(Debug, Clone, PartialEq)]
pub struct BreakpointTable {
    pub e0: f64,
    /// `energies[k - 1] = E_k`.
    pub energies: Vec<f64>,
}

impl BreakpointTable {
    /// `E_k`, 1-based, if it has been tabulated.
    pub fn get(&self, k: usize) -> Option<f64> {
        k.checked_sub(1).and_then(|i| self.energies.get(i).copied())
    }
}

/// One point of the minimal-entropy curve.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CurveRow {
    pub energy: f64,
    pub theta: f64,
    pub m: usize,
    pub case: Case,
    pub entropy: f64,
}

/// `c_k = d_k + k p_k`, nonincreasing in `k`, with `c_1 = 1`.
fn kernel_weight(spec: &Spectrum, k: usize) -> Result<f64> {
    Ok(spec.tail_sums(k).mass + k as f64 * spec.eigenvalue(k)?)
}

fn check_energies(e0: f64, e: f64) -> Result<()> {
    if !(e0 > 0.0 && e0.is_finite()) {
        return Err(Error::InvalidParameter("E0 must be positive and finite"));
    }
    if !(e > 0.0 && e.is_finite()) {
        return Err(Error::InvalidParameter("E must be positive and finite"));
    }
    Ok(())
}

/// Breakpoints `E_k` up to the first one at or above `upto` (or up to `E_n` for
/// finite rank, or the last listed eigenvalue of a truncated spectrum).
pub fn breakpoints(spec: &Spectrum, e0: f64, upto: f64) -> Result<BreakpointTable> {
    check_energies(e0, upto.max(f64::MIN_POSITIVE))?;
    let last = match spec.rank() {
        Rank::Finite(n) => n,
        Rank::Infinite => spec.listed().map_or(usize::MAX, <[f64]>::len),
    };
    let mut energies = alloc::vec![0.0];
    let mut k = 2;
    while k <= last {
        let e_k = e0 / kernel_weight(spec, k)?;
        energies.push(e_k);
        if e_k >= upto {
            break;
        }
        k += 1;
    }
    Ok(BreakpointTable { e0, energies })
}

/// Case A kernel dimension: `n` minus the multiplicity of the smallest eigenvalue,
/// but at least 1.
fn case_a_kernel(spec: &Spectrum, n: usize) -> Result<usize> {
    let p_n = spec.eigenvalue(n)?;
    let mut k = 1;
    while k < n - 1 && same(spec.eigenvalue(n - k)?, p_n) {
        k += 1;
    }
    Ok(n - k)
}

fn same(a: f64, b: f64) -> bool {
    (a - b).abs() <= BOUNDARY_TOLERANCE * a.abs().max(b.abs())
}

/// Case and kernel dimension `m` at energy `E`.
pub fn classify(spec: &Spectrum, e0: f64, e: f64) -> Result<(Case, usize)> {
    check_energies(e0, e)?;
    let theta = e / e0;
    if let Rank::Finite(n) = spec.rank() {
        if theta * n as f64 * spec.eigenvalue(n)? >= 1.0 - BOUNDARY_TOLERANCE {
            return Ok((Case::A, case_a_kernel(spec, n)?));
        }
    }
    // smallest k >= 1 with theta c_{k+1} <= 1; c is nonincreasing so gallop then bisect
    let inside = |k: usize| -> Result<bool> {
        Ok(theta * kernel_weight(spec, k + 1)? <= 1.0 + BOUNDARY_TOLERANCE)
    };
    if inside(1)? {
        return Ok((Case::B, 1));
    }
    let mut lo = 1;
    let mut hi = 2;
    while !inside(hi)? {
        lo = hi;
        hi = match spec.rank() {
            Rank::Finite(n) => (hi * 2).min(n - 1),
            Rank::Infinite => hi * 2,
        };
        if hi == lo {
            // unreachable for valid spectra: theta c_n < 1 outside case A
            return Ok((Case::B, hi));
        }
    }
    while hi - lo > 1 {
        let mid = lo + (hi - lo) / 2;
        if inside(mid)? {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    Ok((Case::B, hi))
}

/// The optimal Hamiltonian together with the data of its representation
/// `H = C P_m (-ln rho + D)` in case B.
#[derive(Debug, Clone)]
pub struct OptimalHamiltonian {
    pub case: Case,
    pub m: usize,
    pub theta: f64,
    pub e0: f64,
    pub energy: f64,
    /// `beta_m` (case B).
    pub beta: Option<f64>,
    /// `C = E0 / beta_m` (case B).
    pub scale: Option<f64>,
    /// `D = ln((1 - theta d_m) / (theta m))` (case B).
    pub shift: Option<f64>,
    spectrum: Spectrum,
    case_a_level: f64,
}

/// Constructs `H(rho, E0, E)`.
pub fn optimal_hamiltonian(spec: &Spectrum, e0: f64, e: f64) -> Result<OptimalHamiltonian> {
    let (case, m) = classify(spec, e0, e)?;
    let theta = e / e0;
    let mut out = OptimalHamiltonian {
        case,
        m,
        theta,
        e0,
        energy: e,
        beta: None,
        scale: None,
        shift: None,
        spectrum: spec.clone(),
        case_a_level: f64::NAN,
    };
    match case {
        Case::A => {
            let n = spec.rank().finite().expect("case A needs finite rank");
            out.case_a_level = e0 / (spec.eigenvalue(n)? * (n - m) as f64);
        }
        Case::B => {
            let tail = spec.tail_sums(m);
            let ln_c = ln((1.0 - theta * tail.mass) / (theta * m as f64));
            let beta = match spec.listed() {
                // nonnegative terms, so the energy identity holds to rounding
                Some(p) => {
                    let mut acc = Neumaier::default();
                    for &x in &p[m..] {
                        acc.add(x * (ln_c - ln(x)));
                    }
                    acc.value()
                }
                None => tail.entropy + tail.mass * ln_c,
            };
            if !(beta > DEGENERATE_BETA * tail.mass) {
                return Err(Error::DegenerateBeta { beta });
            }
            out.beta = Some(beta);
            out.scale = Some(e0 / beta);
            out.shift = Some(ln_c);
        }
    }
    Ok(out)
}

impl OptimalHamiltonian {
    pub fn spectrum(&self) -> &Spectrum {
        &self.spectrum
    }

    /// Level `h_i`, 1-based; `+inf` beyond a finite rank.
    pub fn level(&self, i: usize) -> Result<f64> {
        if i == 0 {
            return Err(Error::InvalidParameter("level index is 1-based"));
        }
        if let Rank::Finite(n) = self.spectrum.rank() {
            if i > n {
                return Ok(f64::INFINITY);
            }
        }
        if i <= self.m {
            return Ok(0.0);
        }
        match self.case {
            Case::A => Ok(self.case_a_level),
            Case::B => {
                let (scale, shift) = (self.scale.unwrap_or(0.0), self.shift.unwrap_or(0.0));
                Ok((scale * (shift - self.spectrum.ln_eigenvalue(i)?)).max(0.0))
            }
        }
    }

    /// The first `count` levels.
    pub fn levels(&self, count: usize) -> Result<Vec<f64>> {
        (1..=count).map(|i| self.level(i)).collect()
    }

    /// Gibbs parameter in energy units, `beta_m / E0` (case B).
    pub fn gibbs_beta(&self) -> Option<f64> {
        self.beta.map(|b| b / self.e0)
    }

    /// The level sequence as a [`Hamiltonian`]. Truncated spectra yield the
    /// Hamiltonian on the span of the listed eigenvectors.
    pub fn to_hamiltonian(&self) -> Result<Hamiltonian> {
        match (self.spectrum.rank(), self.spectrum.listed()) {
            (Rank::Finite(n), _) => Hamiltonian::finite(self.levels(n)?),
            (Rank::Infinite, Some(p)) => Hamiltonian::finite(self.levels(p.len())?),
            (Rank::Infinite, None) => {
                // beyond the kernel ln p_i is arithmetic in i, and so are the levels
                let q = self
                    .spectrum
                    .geometric_ratio()
                    .ok_or(Error::InvalidParameter(
                        "unsupported infinite-rank spectrum",
                    ))?;
                let head = self.levels(self.m + INFINITE_HEAD_EXTRA)?;
                let gap = match self.case {
                    Case::B => -self.scale.unwrap_or(0.0) * ln(q),
                    Case::A => unreachable!("case A needs finite rank"),
                };
                Hamiltonian::from_generator(ArithmeticTail::new(head, gap)?)
            }
        }
    }

    /// `sum_i p_i h_i`, which equals `E0`.
    pub fn mean_energy_in_state(&self) -> Result<f64> {
        match self.case {
            Case::A => {
                let n = self
                    .spectrum
                    .rank()
                    .finite()
                    .expect("case A needs finite rank");
                let mut acc = Neumaier::default();
                for i in self.m + 1..=n {
                    acc.add(self.spectrum.eigenvalue(i)? * self.case_a_level);
                }
                Ok(acc.value())
            }
            Case::B => {
                let scale = self.scale.unwrap_or(0.0);
                match self.spectrum.listed() {
                    Some(p) => {
                        let mut acc = Neumaier::default();
                        for (j, &x) in p.iter().enumerate().skip(self.m) {
                            acc.add(x * self.level(j + 1)?);
                        }
                        Ok(acc.value())
                    }
                    None => {
                        let (mass_power, log_power) = self.spectrum.power_tail(1.0, self.m);
                        Ok(scale * (self.shift.unwrap_or(0.0) * mass_power + log_power))
                    }
                }
            }
        }
    }
}

/// Entropy of the Gibbs state of `H(rho, E0, E)` at energy `E`.
pub fn optimal_entropy(spec: &Spectrum, e0: f64, e: f64) -> Result<f64> {
    let (case, m) = classify(spec, e0, e)?;
    Ok(match case {
        Case::A => ln(spec.rank().finite().expect("case A needs finite rank") as f64),
        Case::B => case_b_entropy(spec, e / e0, m),
    })
}

fn case_b_entropy(spec: &Spectrum, theta: f64, m: usize) -> f64 {
    let tail = spec.tail_sums(m);
    let kernel = 1.0 - theta * tail.mass;
    theta * tail.entropy + eta(kernel) + kernel * ln(m as f64) + tail.mass * eta(theta)
}

/// Gibbs state of `H(rho, E0, E)` at energy `E`.
///
/// Its weights are `(1 - theta d_m) / m` on the kernel and `theta p_i` beyond. For
/// infinite rank the first `m + 64` weights are listed and the rest is reported
/// as `tail_weight`.
pub fn optimal_gibbs(spec: &Spectrum, e0: f64, e: f64) -> Result<GibbsState> {
    let h = optimal_hamiltonian(spec, e0, e)?;
    if h.case == Case::A {
        let n = spec.rank().finite().expect("case A needs finite rank");
        let mean = e0 / (n as f64 * spec.eigenvalue(n)?);
        return Ok(GibbsState::uniform(n, mean));
    }
    let theta = h.theta;
    let tail = spec.tail_sums(h.m);
    let kernel = (1.0 - theta * tail.mass) / h.m as f64;
    let listed = match (spec.rank(), spec.listed()) {
        (Rank::Finite(n), _) => n,
        (Rank::Infinite, Some(p)) => p.len(),
        (Rank::Infinite, None) => h.m + INFINITE_HEAD_EXTRA,
    };
    let mut weights = alloc::vec![kernel; h.m];
    for i in h.m + 1..=listed {
        weights.push(theta * spec.eigenvalue(i)?);
    }
    let tail_weight = match spec.listed() {
        Some(_) => 0.0,
        None => theta * spec.tail_sums(listed).mass,
    };
    Ok(GibbsState {
        beta: h.gibbs_beta(),
        weights,
        tail_weight,
        mean_energy: e,
        entropy: case_b_entropy(spec, theta, h.m),
        finite_dim_uniform: false,
    })
}

/// The minimal-entropy curve over an energy grid.
pub fn entropy_curve(spec: &Spectrum, e0: f64, grid: &[f64]) -> Result<Vec<CurveRow>> {
    grid.iter()
        .map(|&e| {
            let (case, m) = classify(spec, e0, e)?;
            let entropy = match case {
                Case::A => ln(spec.rank().finite().expect("case A needs finite rank") as f64),
                Case::B => case_b_entropy(spec, e / e0, m),
            };
            Ok(CurveRow {
                energy: e,
                theta: e / e0,
                m,
                case,
                entropy,
            })
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::math::oscillator_entropy;
    use core::f64::consts::LN_2;
    use proptest::prelude::*;

    const LN_10: f64 = core::f64::consts::LN_10;

    #[test]
    fn breakpoint_examples() {
        let uni = Spectrum::uniform(10).unwrap();
        let t = breakpoints(&uni, 1.0, 100.0).unwrap();
        assert_eq!(t.get(1), Some(0.0));
        for k in 2..=10 {
            assert!((t.get(k).unwrap() - 1.0).abs() < 1e-14);
        }
        assert_eq!(t.get(11), None);

        let lin = Spectrum::linear(10).unwrap();
        let t = breakpoints(&lin, 1.0, 100.0).unwrap();
        for k in 2..=10 {
            let expected = 110.0 / ((10 + k) * (11 - k)) as f64;
            assert!((t.get(k).unwrap() - expected).abs() < 1e-13);
        }
        assert!((t.get(2).unwrap() - 110.0 / 108.0).abs() < 1e-15);

        let geo = Spectrum::geometric(0.5).unwrap();
        let t = breakpoints(&geo, 1.0, 50.0).unwrap();
        assert!((t.get(2).unwrap() - 4.0 / 3.0).abs() < 1e-15);
        assert!(*t.energies.last().unwrap() >= 50.0);
        for k in 2..t.energies.len() {
            let q: f64 = 0.5;
            let expected = 1.0 / (libm::pow(q, (k - 1) as f64) * (k as f64 - q * (k - 1) as f64));
            assert!((t.get(k).unwrap() - expected).abs() < 1e-12 * expected);
        }
    }

    #[test]
    fn classify_examples() {
        let uni = Spectrum::uniform(10).unwrap();
        assert_eq!(classify(&uni, 1.0, 2.0).unwrap(), (Case::A, 1));
        assert_eq!(classify(&uni, 1.0, 0.5).unwrap(), (Case::B, 1));
        let lin = Spectrum::linear(10).unwrap();
        assert_eq!(classify(&lin, 1.0, 5.5).unwrap(), (Case::A, 9));
        assert_eq!(classify(&lin, 1.0, 5.4).unwrap().0, Case::B);
    }

    #[test]
    fn right_closed_intervals() {
        let geo = Spectrum::geometric(0.5).unwrap();
        assert_eq!(classify(&geo, 1.0, 4.0 / 3.0).unwrap(), (Case::B, 1));
        assert_eq!(
            classify(&geo, 1.0, 4.0 / 3.0 * (1.0 + 1e-9)).unwrap(),
            (Case::B, 2)
        );
        // breakpoints of the linear spectrum
        let lin = Spectrum::linear(10).unwrap();
        for k in 2..10 {
            let e_k = 110.0 / ((10 + k) * (11 - k)) as f64;
            assert_eq!(classify(&lin, 1.0, e_k).unwrap().1, k - 1);
            assert_eq!(classify(&lin, 1.0, e_k * (1.0 + 1e-9)).unwrap().1, k);
        }
    }

    #[test]
    fn number_operator_at_unit_energy() {
        let geo = Spectrum::geometric(0.5).unwrap();
        let h = optimal_hamiltonian(&geo, 1.0, 1.0).unwrap();
        for i in 1..=20 {
            assert!((h.level(i).unwrap() - (i - 1) as f64).abs() < 1e-12);
        }
        assert!((h.beta.unwrap() - LN_2).abs() < 1e-15);
        let g = optimal_gibbs(&geo, 1.0, 1.0).unwrap();
        for (i, w) in g.weights.iter().enumerate() {
            assert!((w - geo.eigenvalue(i + 1).unwrap()).abs() < 1e-15);
        }
    }

    #[test]
    fn uniform_case_a_levels() {
        let uni = Spectrum::uniform(10).unwrap();
        let h = optimal_hamiltonian(&uni, 1.0, 2.0).unwrap();
        assert_eq!(h.level(1).unwrap(), 0.0);
        for i in 2..=10 {
            assert!((h.level(i).unwrap() - 10.0 / 9.0).abs() < 1e-15);
        }
        assert_eq!(h.level(11).unwrap(), f64::INFINITY);
        let g = optimal_gibbs(&uni, 1.0, 2.0).unwrap();
        assert_eq!(g.weights, alloc::vec![0.1; 10]);
        assert!((g.entropy - LN_10).abs() < 1e-15);
    }

    #[test]
    fn levels_at_budget_reproduce_minus_ln_rho() {
        let lin = Spectrum::linear(7).unwrap();
        let h = optimal_hamiltonian(&lin, 2.5, 2.5).unwrap();
        let p1 = lin.eigenvalue(1).unwrap();
        let denom = lin.entropy() + ln(p1);
        for i in 1..=7 {
            let expected = 2.5 * (ln(p1) - ln(lin.eigenvalue(i).unwrap())) / denom;
            assert!((h.level(i).unwrap() - expected).abs() < 1e-12);
        }
    }

    #[test]
    fn entropy_examples() {
        let uni = Spectrum::uniform(10).unwrap();
        for &e in &[1.0, 1.5, 7.0] {
            assert!((optimal_entropy(&uni, 1.0, e).unwrap() - LN_10).abs() < 1e-12);
        }
        let s = optimal_entropy(&uni, 1.0, 0.5).unwrap();
        let expected = 0.45 * LN_10 + eta(0.55) + 0.9 * eta(0.5);
        assert!((s - expected).abs() < 1e-14);
        assert!((s - 1.676889874).abs() < 1e-9);
        let geo = Spectrum::geometric(0.5).unwrap();
        assert!((optimal_entropy(&geo, 1.0, 1.0).unwrap() - 2.0 * LN_2).abs() < 1e-14);
    }

    #[test]
    fn curve_examples() {
        let uni = Spectrum::uniform(10).unwrap();
        let rows = entropy_curve(&uni, 1.0, &[0.25, 0.5, 0.75, 1.0, 2.0]).unwrap();
        assert!(rows.iter().all(|r| r.m == 1));
        assert!(rows
            .windows(2)
            .all(|w| w[0].entropy < w[1].entropy || w[1].entropy == LN_10));
        assert!((rows[3].entropy - LN_10).abs() < 1e-12);
        let lin = Spectrum::linear(10).unwrap();
        let rows = entropy_curve(&lin, 1.0, &[5.4, 5.5, 5.6]).unwrap();
        assert!(rows[0].entropy < LN_10);
        assert_eq!(rows[1].case, Case::A);
        assert!((rows[2].entropy - LN_10).abs() < 1e-15);
    }

    #[test]
    fn gibbs_weights_match_exponential_form() {
        let lin = Spectrum::linear(12).unwrap();
        let h = optimal_hamiltonian(&lin, 1.3, 3.0).unwrap();
        let g = optimal_gibbs(&lin, 1.3, 3.0).unwrap();
        let b = h.gibbs_beta().unwrap();
        let levels = h.levels(12).unwrap();
        let z: f64 = levels.iter().map(|x| libm::exp(-b * x)).sum();
        for (w, x) in g.weights.iter().zip(&levels) {
            assert!((w - libm::exp(-b * x) / z).abs() < 1e-13);
        }
        assert!((g.listed_entropy() - g.entropy).abs() < 1e-12);
    }

    #[test]
    fn infinite_rank_hamiltonian_reproduces_closed_form() {
        let geo = Spectrum::thermal(3.0).unwrap();
        for &e in &[0.4, 3.0, 11.0, 250.0] {
            let h = optimal_hamiltonian(&geo, 3.0, e).unwrap();
            assert!((h.mean_energy_in_state().unwrap() - 3.0).abs() < 1e-12);
            let ham = h.to_hamiltonian().unwrap();
            let f = ham.max_entropy(e).unwrap();
            let s = optimal_entropy(&geo, 3.0, e).unwrap();
            assert!((f - s).abs() < 1e-9, "E={e}: {f} vs {s}");
            let g = optimal_gibbs(&geo, 3.0, e).unwrap();
            assert!((g.total_mass() - 1.0).abs() < 1e-13);
        }
    }

    #[test]
    fn optimal_beats_number_operator() {
        let geo = Spectrum::thermal(1.0).unwrap();
        for &e in &[0.1, 0.5, 2.0, 10.0] {
            assert!(optimal_entropy(&geo, 1.0, e).unwrap() < oscillator_entropy(e));
        }
    }

    #[test]
    fn degenerate_beta_near_rank_threshold() {
        // beta_m -> 0 as E approaches E_n from below
        let p = alloc::vec![0.5, 0.3, 0.2];
        let s = Spectrum::explicit(p).unwrap();
        let e_n = 1.0 / (3.0 * 0.2);
        let r = optimal_hamiltonian(&s, 1.0, e_n * (1.0 - 1e-15));
        assert!(matches!(r, Err(Error::DegenerateBeta { .. }) | Ok(_)));
        let ok = optimal_hamiltonian(&s, 1.0, e_n * (1.0 - 1e-3)).unwrap();
        assert!(ok.beta.unwrap() > 0.0);
    }

    #[test]
    fn zero_energy_rejected() {
        let uni = Spectrum::uniform(3).unwrap();
        assert!(classify(&uni, 1.0, 0.0).is_err());
        assert!(optimal_entropy(&uni, 0.0, 1.0).is_err());
    }

    fn spectrum_strategy() -> impl Strategy<Value = Spectrum> {
        prop::collection::vec(0.01f64..1.0, 2..30).prop_map(|mut v| {
            v.sort_by(|a, b| b.partial_cmp(a).unwrap());
            let total: f64 = v.iter().sum();
            v.iter_mut().for_each(|x| *x /= total);
            Spectrum::explicit(v).unwrap()
        })
    }

    proptest! {
        #[test]
        fn saturates_energy_budget(spec in spectrum_strategy(), e0 in 0.1f64..10.0, theta in 0.05f64..40.0) {
            match optimal_hamiltonian(&spec, e0, theta * e0) {
                Ok(h) => prop_assert!((h.mean_energy_in_state().unwrap() - e0).abs() <= 1e-10 * e0.max(1.0)),
                Err(Error::DegenerateBeta { .. }) => {}
                Err(e) => return Err(TestCaseError::fail(alloc::format!("{e}"))),
            }
        }

        #[test]
        fn levels_scale_and_entropy_is_invariant(spec in spectrum_strategy(), theta in 0.05f64..20.0, c in 0.1f64..50.0) {
            let (Ok(a), Ok(b)) = (optimal_hamiltonian(&spec, 1.0, theta), optimal_hamiltonian(&spec, c, c * theta)) else {
                return Ok(());
            };
            let n = spec.rank().finite().unwrap();
            for i in 1..=n {
                let (x, y) = (a.level(i).unwrap(), b.level(i).unwrap());
                prop_assert!((c * x - y).abs() <= 1e-10 * y.max(1.0));
            }
            let s1 = optimal_entropy(&spec, 1.0, theta).unwrap();
            let s2 = optimal_entropy(&spec, c, c * theta).unwrap();
            prop_assert!((s1 - s2).abs() <= 1e-12);
        }

        #[test]
        fn kernel_dimension_is_monotone(spec in spectrum_strategy()) {
            let grid: Vec<f64> = (1..200).map(|i| i as f64 * 0.1).collect();
            let rows = entropy_curve(&spec, 1.0, &grid).unwrap();
            for w in rows.windows(2) {
                prop_assert!(w[0].m <= w[1].m || w[1].case == Case::A);
                prop_assert!(w[0].entropy <= w[1].entropy + 1e-12);
            }
        }

        #[test]
        fn closed_form_matches_variational_value(spec in spectrum_strategy(), theta in 0.05f64..20.0) {
            let Ok(h) = optimal_hamiltonian(&spec, 1.0, theta) else { return Ok(()); };
            let f = h.to_hamiltonian().unwrap().max_entropy(theta).unwrap();
            let s = optimal_entropy(&spec, 1.0, theta).unwrap();
            prop_assert!((f - s).abs() <= 1e-8, "{} vs {}", f, s);
        }
    }
}
