//! Gibbs states of grounded Hamiltonians given by their eigenvalues.
//!
//! A [`Hamiltonian`] is a nondecreasing level sequence `0 = h_1 <= h_2 <= ...`.
//! It either lives on a finite-dimensional domain (an explicit list, with all
//! further levels equal to `+inf`) or on an infinite one, in which case the
//! levels come from a [`LevelGenerator`] that can sum its own tail.
//!
//! For `E` below `h_*(H)` the Gibbs state is `exp(-beta H) / Z(beta)` with `beta`
//! solving `<H>_beta = E`; on a finite domain with `E >= h_*(H)` it is the uniform
//! state. The maximal entropy `F_H(E)` is the value of the convex program
//! `inf_b (E b + ln Z(b))`.

use alloc::sync::Arc;
use alloc::vec::Vec;
use core::fmt;

use crate::math::{self, eta, exp, ln, Neumaier};
use crate::roots::decreasing_root;
use crate::{Error, Result};

/// Relative residual targeted by the Gibbs solver.
pub const SOLVER_TOLERANCE: f64 = 1e-12;

/// Largest residual `|<H>_beta - E| / max(1, E)` accepted from the solver.
pub const RESIDUAL_LIMIT: f64 = 1e-10;

/// Absolute resolution of the convergence abscissa when it is located by bisection.
pub const ABSCISSA_RESOLUTION: f64 = 1e-9;

/// Tail of a level series beyond the explicitly summed head.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Tail {
    /// `sum_{i>head} exp(-b h_i)` and `sum_{i>head} h_i exp(-b h_i)`.
    Sum { partition: f64, energy: f64 },
    /// The series diverges at this `b`.
    Divergent,
}

/// Source of the levels of an infinite-dimensional Hamiltonian.
///
/// Implementors must provide the tail sums in closed form or with a certified
/// error, never by silent truncation of a possibly divergent series.
pub trait LevelGenerator: Send + Sync {
    /// Level `h_i`, 1-based.
    fn level(&self, i: usize) -> f64;

    /// Number of leading levels that are summed term by term.
    fn head_len(&self) -> usize;

    /// Tail sums over `i > head_len()` at inverse temperature `b > 0`.
    fn tail(&self, b: f64) -> Result<Tail>;

    /// Exact convergence abscissa `g(H)`, when known.
    fn abscissa(&self) -> Option<f64> {
        None
    }
}

/// Levels `head[0], ..., head[L-1]` continued arithmetically with spacing `gap`.
///
/// With `head = [0]` this is a harmonic oscillator `h_i = gap (i - 1)`.
#[derive(Debug, Clone, PartialEq)]
pub struct ArithmeticTail {
    head: Vec<f64>,
    gap: f64,
}

impl ArithmeticTail {
    pub fn new(head: Vec<f64>, gap: f64) -> Result<Self> {
        validate_finite_levels(&head)?;
        if !(gap > 0.0 && gap.is_finite()) {
            return Err(Error::InvalidLevels(
                "arithmetic continuation needs a positive gap",
            ));
        }
        Ok(ArithmeticTail { head, gap })
    }

    pub fn head(&self) -> &[f64] {
        &self.head
    }

    pub fn gap(&self) -> f64 {
        self.gap
    }
}

impl LevelGenerator for ArithmeticTail {
    fn level(&self, i: usize) -> f64 {
        let len = self.head.len();
        if i <= len {
            self.head[i - 1]
        } else {
            self.head[len - 1] + self.gap * (i - len) as f64
        }
    }

    fn head_len(&self) -> usize {
        self.head.len()
    }

    fn tail(&self, b: f64) -> Result<Tail> {
        let last = self.head[self.head.len() - 1];
        let r = exp(-b * self.gap);
        let one_minus_r = -libm::expm1(-b * self.gap);
        let base = exp(-b * last);
        let geometric = r / one_minus_r;
        Ok(Tail::Sum {
            partition: base * geometric,
            energy: base * (last * geometric + self.gap * r / (one_minus_r * one_minus_r)),
        })
    }

    fn abscissa(&self) -> Option<f64> {
        Some(0.0)
    }
}

/// Levels `h_i = scale * ln i`; the partition function converges iff `b > 1/scale`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LogarithmicLevels {
    scale: f64,
}

impl LogarithmicLevels {
    const HEAD: usize = 1000;

    pub fn new(scale: f64) -> Result<Self> {
        if !(scale > 0.0 && scale.is_finite()) {
            return Err(Error::InvalidLevels(
                "logarithmic levels need a positive scale",
            ));
        }
        Ok(LogarithmicLevels { scale })
    }
}

impl LevelGenerator for LogarithmicLevels {
    fn level(&self, i: usize) -> f64 {
        self.scale * ln(i as f64)
    }

    fn head_len(&self) -> usize {
        Self::HEAD
    }

    fn tail(&self, b: f64) -> Result<Tail> {
        let t = b * self.scale;
        if t <= 1.0 {
            return Ok(Tail::Divergent);
        }
        // Euler-Maclaurin for sum_{i>N} of x^-t and ln(x) x^-t.
        let n = Self::HEAD as f64;
        let ln_n = ln(n);
        let s = t - 1.0;
        let f = exp(-t * ln_n);
        let d1 = -t * f / n;
        let d3 = -t * (t + 1.0) * (t + 2.0) * f / (n * n * n);
        let partition = n * f / s - 0.5 * f - d1 / 12.0 + d3 / 720.0;

        let g = ln_n * f;
        let g1 = f / n * (1.0 - t * ln_n);
        let g3 = f / (n * n * n)
            * ((t + 2.0) * (2.0 * t + 1.0) + t * (t + 1.0) - (t + 2.0) * t * (t + 1.0) * ln_n);
        let log_sum = n * f * (ln_n / s + 1.0 / (s * s)) - 0.5 * g - g1 / 12.0 + g3 / 720.0;
        Ok(Tail::Sum {
            partition,
            energy: self.scale * log_sum,
        })
    }

    fn abscissa(&self) -> Option<f64> {
        Some(1.0 / self.scale)
    }
}

struct Scaled {
    inner: Arc<dyn LevelGenerator>,
    factor: f64,
}

impl LevelGenerator for Scaled {
    fn level(&self, i: usize) -> f64 {
        self.factor * self.inner.level(i)
    }

    fn head_len(&self) -> usize {
        self.inner.head_len()
    }

    fn tail(&self, b: f64) -> Result<Tail> {
        Ok(match self.inner.tail(b * self.factor)? {
            Tail::Sum { partition, energy } => Tail::Sum {
                partition,
                energy: energy * self.factor,
            },
            Tail::Divergent => Tail::Divergent,
        })
    }

    fn abscissa(&self) -> Option<f64> {
        self.inner.abscissa().map(|g| g / self.factor)
    }
}

#[derive(Clone)]
enum Domain {
    Finite(Vec<f64>),
    Infinite(Arc<dyn LevelGenerator>),
}

/// Grounded Hamiltonian described by its eigenvalues.
#[derive(Clone)]
pub struct Hamiltonian {
    domain: Domain,
}

impl fmt::Debug for Hamiltonian {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.domain {
            Domain::Finite(levels) => f.debug_tuple("Hamiltonian::Finite").field(levels).finish(),
            Domain::Infinite(g) => {
                let head: Vec<f64> = (1..=g.head_len().min(8)).map(|i| g.level(i)).collect();
                f.debug_struct("Hamiltonian::Infinite")
                    .field("head", &head)
                    .finish()
            }
        }
    }
}

#[derive(Debug, Clone, Copy)]
struct Moments {
    partition: f64,
    energy: f64,
    tail_partition: f64,
}

impl Hamiltonian {
    /// Hamiltonian on a finite domain spanned by the listed levels. Trailing `+inf`
    /// entries are accepted and dropped.
    pub fn finite(mut levels: Vec<f64>) -> Result<Self> {
        while levels.last().is_some_and(|h| *h == f64::INFINITY) {
            levels.pop();
        }
        validate_finite_levels(&levels)?;
        Ok(Hamiltonian {
            domain: Domain::Finite(levels),
        })
    }

    /// Hamiltonian on an infinite domain with generator-backed levels.
    pub fn from_generator<G: LevelGenerator + 'static>(generator: G) -> Result<Self> {
        Self::from_shared(Arc::new(generator))
    }

    pub fn from_shared(generator: Arc<dyn LevelGenerator>) -> Result<Self> {
        let probe: Vec<f64> = (1..=generator.head_len() + 2)
            .map(|i| generator.level(i))
            .collect();
        validate_finite_levels(&probe)?;
        Ok(Hamiltonian {
            domain: Domain::Infinite(generator),
        })
    }

    /// `h_i = omega (i - 1)`.
    pub fn oscillator(omega: f64) -> Result<Self> {
        Self::from_generator(ArithmeticTail::new(alloc::vec![0.0], omega)?)
    }

    /// `h_i = scale ln i`.
    pub fn logarithmic(scale: f64) -> Result<Self> {
        Self::from_generator(LogarithmicLevels::new(scale)?)
    }

    /// Dimension of the domain, `None` when infinite.
    pub fn domain_dim(&self) -> Option<usize> {
        match &self.domain {
            Domain::Finite(levels) => Some(levels.len()),
            Domain::Infinite(_) => None,
        }
    }

    /// Level `h_i` (1-based); `+inf` beyond a finite domain.
    pub fn level(&self, i: usize) -> f64 {
        match &self.domain {
            Domain::Finite(levels) => levels.get(i - 1).copied().unwrap_or(f64::INFINITY),
            Domain::Infinite(g) => g.level(i),
        }
    }

    /// Levels summed term by term: the whole list on a finite domain, the
    /// generator head on an infinite one.
    pub fn head_levels(&self) -> Vec<f64> {
        match &self.domain {
            Domain::Finite(levels) => levels.clone(),
            Domain::Infinite(g) => (1..=g.head_len()).map(|i| g.level(i)).collect(),
        }
    }

    /// `c H` for `c > 0`.
    pub fn scaled(&self, factor: f64) -> Result<Self> {
        if !(factor > 0.0 && factor.is_finite()) {
            return Err(Error::InvalidParameter("scale factor must be positive"));
        }
        Ok(Hamiltonian {
            domain: match &self.domain {
                Domain::Finite(levels) => {
                    Domain::Finite(levels.iter().map(|h| h * factor).collect())
                }
                Domain::Infinite(g) => Domain::Infinite(Arc::new(Scaled {
                    inner: g.clone(),
                    factor,
                })),
            },
        })
    }

    fn moments(&self, b: f64) -> Result<Option<Moments>> {
        if !(b > 0.0) {
            return Err(Error::InvalidParameter(
                "inverse temperature must be positive",
            ));
        }
        let (head, tail) = match &self.domain {
            Domain::Finite(levels) => (levels.as_slice(), None),
            Domain::Infinite(g) => match g.tail(b)? {
                Tail::Divergent => return Ok(None),
                Tail::Sum { partition, energy } => {
                    if !(partition.is_finite() && energy.is_finite()) {
                        return Err(Error::NoConvergenceCertificate { b });
                    }
                    (&[][..], Some((g.clone(), partition, energy)))
                }
            },
        };
        let mut z = Neumaier::default();
        let mut e = Neumaier::default();
        let mut add = |h: f64| {
            let w = exp(-b * h);
            z.add(w);
            e.add(h * w);
        };
        head.iter().for_each(|&h| add(h));
        let mut tail_partition = 0.0;
        if let Some((g, partition, energy)) = tail {
            (1..=g.head_len()).for_each(|i| add(g.level(i)));
            z.add(partition);
            e.add(energy);
            tail_partition = partition;
        }
        Ok(Some(Moments {
            partition: z.value(),
            energy: e.value(),
            tail_partition,
        }))
    }

    /// `Z(b) = sum_i exp(-b h_i)`; `+inf` where the series diverges.
    pub fn partition_function(&self, b: f64) -> Result<f64> {
        Ok(self.moments(b)?.map_or(f64::INFINITY, |m| m.partition))
    }

    /// `<H>_b = sum_i h_i exp(-b h_i) / Z(b)`; `+inf` where `Z(b)` diverges.
    pub fn mean_energy(&self, b: f64) -> Result<f64> {
        Ok(self
            .moments(b)?
            .map_or(f64::INFINITY, |m| m.energy / m.partition))
    }

    /// Convergence abscissa `g(H) = inf { b > 0 : Z(b) < inf }`.
    pub fn convergence_abscissa(&self) -> Result<f64> {
        let g = match &self.domain {
            Domain::Finite(_) => return Ok(0.0),
            Domain::Infinite(g) => g,
        };
        if let Some(a) = g.abscissa() {
            return Ok(a);
        }
        let converges = |b: f64| -> Result<bool> { Ok(self.moments(b)?.is_some()) };
        let mut hi = 1.0;
        let mut steps = 0;
        while !converges(hi)? {
            hi *= 2.0;
            steps += 1;
            if steps > 1100 {
                return Err(Error::NoConvergenceCertificate { b: hi });
            }
        }
        let mut lo = hi * 0.5;
        while converges(lo)? {
            hi = lo;
            lo *= 0.5;
            if lo < f64::MIN_POSITIVE {
                return Ok(0.0);
            }
        }
        while hi - lo > ABSCISSA_RESOLUTION {
            let mid = 0.5 * (lo + hi);
            if converges(mid)? {
                hi = mid;
            } else {
                lo = mid;
            }
        }
        Ok(hi)
    }

    /// `h_*(H)`: the mean of the levels on a finite domain, `<H>_{g(H)}` on an
    /// infinite one (or `+inf` when `Z(g(H))` diverges).
    pub fn h_star(&self) -> Result<f64> {
        match &self.domain {
            Domain::Finite(levels) => Ok(math::sum(levels.iter().copied()) / levels.len() as f64),
            Domain::Infinite(_) => {
                let g = self.convergence_abscissa()?;
                if g <= 0.0 {
                    return Ok(f64::INFINITY);
                }
                self.mean_energy(g)
            }
        }
    }

    /// State proportional to `exp(-b H)`.
    pub fn gibbs_at(&self, b: f64) -> Result<GibbsState> {
        let m = self
            .moments(b)?
            .ok_or(Error::NoConvergenceCertificate { b })?;
        let ln_z = ln(m.partition);
        let weights: Vec<f64> = self
            .head_levels()
            .into_iter()
            .map(|h| exp(-b * h) / m.partition)
            .collect();
        let mean_energy = m.energy / m.partition;
        Ok(GibbsState {
            beta: Some(b),
            weights,
            tail_weight: m.tail_partition / m.partition,
            mean_energy,
            entropy: b * mean_energy + ln_z,
            finite_dim_uniform: false,
        })
    }

    /// Gibbs state `gamma_H(E)`.
    pub fn solve_gibbs(&self, energy: f64) -> Result<GibbsState> {
        if !(energy > 0.0 && energy.is_finite()) {
            return Err(Error::InvalidParameter(
                "energy must be positive and finite",
            ));
        }
        let h_star = self.h_star()?;
        if let Domain::Finite(levels) = &self.domain {
            if energy >= h_star {
                return Ok(GibbsState::uniform(levels.len(), h_star));
            }
        } else if energy > h_star {
            return Err(Error::NoGibbsState { energy, h_star });
        } else if energy == h_star {
            return self.gibbs_at(self.convergence_abscissa()?);
        }
        let beta = self.solve_beta(energy)?;
        self.gibbs_at(beta)
    }

    fn solve_beta(&self, energy: f64) -> Result<f64> {
        let scale = energy.max(1.0);
        let root = decreasing_root(
            |b| Ok(self.mean_energy(b)? - energy),
            SOLVER_TOLERANCE * scale,
        )?;
        if !(root.residual.abs() <= RESIDUAL_LIMIT * scale) {
            return Err(Error::NoConvergenceCertificate { b: root.x });
        }
        Ok(root.x)
    }

    /// Maximal entropy `F_H(E)` over states with mean energy at most `E`.
    pub fn max_entropy(&self, energy: f64) -> Result<f64> {
        if !(energy > 0.0 && energy.is_finite()) {
            return Err(Error::InvalidParameter(
                "energy must be positive and finite",
            ));
        }
        let h_star = self.h_star()?;
        match &self.domain {
            Domain::Finite(levels) if energy >= h_star => Ok(ln(levels.len() as f64)),
            Domain::Infinite(_) if energy >= h_star => {
                // linear branch above h_*: the infimum sits at the abscissa
                let g = self.convergence_abscissa()?;
                Ok(g * energy + ln(self.partition_function(g)?))
            }
            _ => {
                let beta = self.solve_beta(energy)?;
                Ok(beta * energy + ln(self.partition_function(beta)?))
            }
        }
    }

    /// `E b + ln Z(b)`, the convex function minimised by [`Hamiltonian::max_entropy`].
    pub fn dual_objective(&self, energy: f64, b: f64) -> Result<f64> {
        Ok(energy * b + ln(self.partition_function(b)?))
    }
}

/// Gibbs state of a [`Hamiltonian`].
#[derive(Debug, Clone, PartialEq)]
pub struct GibbsState {
    /// Inverse temperature; `None` for the uniform state on a finite domain.
    pub beta: Option<f64>,
    /// Occupation probabilities of the leading levels.
    pub weights: Vec<f64>,
    /// Probability carried by levels beyond `weights` (zero on finite domains).
    pub tail_weight: f64,
    pub mean_energy: f64,
    /// Von Neumann entropy in nats.
    pub entropy: f64,
    /// Set when the state is uniform because `E >= h_*(H)` on a finite domain.
    pub finite_dim_uniform: bool,
}

impl GibbsState {
    pub fn uniform(dim: usize, mean_energy: f64) -> Self {
        GibbsState {
            beta: None,
            weights: alloc::vec![1.0 / dim as f64; dim],
            tail_weight: 0.0,
            mean_energy,
            entropy: ln(dim as f64),
            finite_dim_uniform: true,
        }
    }

    /// `-sum w_i ln w_i` over the listed weights.
    pub fn listed_entropy(&self) -> f64 {
        math::sum(self.weights.iter().map(|&w| eta(w)))
    }

    pub fn total_mass(&self) -> f64 {
        math::sum(self.weights.iter().copied()) + self.tail_weight
    }

    /// Total-variation distance to a probability vector, counting unlisted mass on either side.
    pub fn total_variation(&self, other: &[f64]) -> f64 {
        let len = self.weights.len().max(other.len());
        let mut acc = Neumaier::default();
        for i in 0..len {
            let a = self.weights.get(i).copied().unwrap_or(0.0);
            let b = other.get(i).copied().unwrap_or(0.0);
            acc.add((a - b).abs());
        }
        0.5 * (acc.value() + self.tail_weight)
    }
}

fn validate_finite_levels(levels: &[f64]) -> Result<()> {
    match levels.first() {
        None => return Err(Error::InvalidLevels("at least one level is required")),
        Some(&h) if h != 0.0 => return Err(Error::InvalidLevels("ground level must be 0")),
        _ => {}
    }
    if levels.iter().any(|h| !h.is_finite() || *h < 0.0) {
        return Err(Error::InvalidLevels(
            "levels must be finite and nonnegative",
        ));
    }
    if levels.windows(2).any(|w| w[1] < w[0]) {
        return Err(Error::InvalidLevels("levels must be nondecreasing"));
    }
    Ok(())
}
