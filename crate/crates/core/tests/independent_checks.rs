//! Reference values computed here from first principles (direct sums, golden-section
//! minimisation of the dual) and compared with the library.

use std::f64::consts::LN_2;

use optham::bounds::{binary_entropy_envelope, lsb_main_term};
use optham::gibbs::Hamiltonian;
use optham::optimal::{breakpoints, entropy_curve, optimal_entropy, optimal_hamiltonian};
use optham::{Case, Spectrum};

fn eta(x: f64) -> f64 {
    if x <= 0.0 {
        0.0
    } else {
        -x * x.ln()
    }
}

/// `min_b E b + ln sum exp(-b h_i)` over `b` in `(0, hi]` by golden section, with
/// the `b -> 0` limit `ln n` included.
fn dual_by_golden_section(levels: &[f64], e: f64) -> f64 {
    let f = |b: f64| e * b + levels.iter().map(|h| (-b * h).exp()).sum::<f64>().ln();
    let (mut lo, mut hi) = (0.0f64, 200.0f64);
    let r = (5f64.sqrt() - 1.0) / 2.0;
    for _ in 0..300 {
        let x1 = hi - r * (hi - lo);
        let x2 = lo + r * (hi - lo);
        if f(x1) <= f(x2) {
            hi = x2;
        } else {
            lo = x1;
        }
    }
    f(0.5 * (lo + hi)).min((levels.len() as f64).ln())
}

#[test]
fn uniform_half_energy_entropy_from_direct_dual() {
    // case B with m = 1: levels 0 and C (ln c - ln 0.1) with c = (1 - 0.45) / 0.5
    let theta: f64 = 0.5;
    let d1 = 0.9;
    let ln_c = ((1.0 - theta * d1) / theta).ln();
    let beta = d1 * 10f64.ln() + d1 * ln_c;
    let mut levels = vec![0.0];
    levels.extend(std::iter::repeat((ln_c - 0.1f64.ln()) / beta).take(9));
    let reference = dual_by_golden_section(&levels, theta);
    let spec = Spectrum::uniform(10).unwrap();
    let closed = optimal_entropy(&spec, 1.0, theta).unwrap();
    assert!((reference - 1.676889874).abs() < 1e-9, "{reference}");
    assert!((closed - reference).abs() < 1e-9);
}

#[test]
fn linear_and_geometric_breakpoints_from_direct_sums() {
    let p: Vec<f64> = (1..=10).map(|i| 2.0 * (11 - i) as f64 / 110.0).collect();
    let d2: f64 = p[2..].iter().sum();
    let direct = 1.0 / (d2 + 2.0 * p[1]);
    let table = breakpoints(&Spectrum::linear(10).unwrap(), 1.0, 10.0).unwrap();
    assert!((table.get(2).unwrap() - direct).abs() < 1e-14);
    assert!((direct - 1.018519).abs() < 1e-6);

    let q: f64 = 0.5;
    let g: Vec<f64> = (0..400).map(|i| (1.0 - q) * q.powi(i)).collect();
    let d2: f64 = g[2..].iter().sum();
    let direct = 1.0 / (d2 + 2.0 * g[1]);
    let table = breakpoints(&Spectrum::geometric(q).unwrap(), 1.0, 2.0).unwrap();
    assert!((table.get(2).unwrap() - direct).abs() < 1e-14);
}

#[test]
fn geometric_tail_sums_match_partial_sums() {
    for q in [0.1, 0.5, 0.9] {
        let spec = Spectrum::geometric(q).unwrap();
        let p: Vec<f64> = (0..2000).map(|i| (1.0 - q) * q.powi(i)).collect();
        for k in 0..=50 {
            let d: f64 = p[k..].iter().rev().sum();
            let s: f64 = p[k..].iter().rev().map(|&x| eta(x)).sum();
            let t = spec.tail_sums(k);
            assert!((t.mass - d).abs() < 1e-12, "q={q} k={k}");
            assert!((t.entropy - s).abs() < 1e-12, "q={q} k={k}");
        }
        let mean = q / (1.0 - q);
        let g = (mean + 1.0) * (mean + 1.0).ln() - mean * mean.ln();
        assert!((spec.entropy() - g).abs() < 1e-13);
    }
}

#[test]
fn tail_sums_telescope() {
    for spec in [
        Spectrum::linear(17).unwrap(),
        Spectrum::uniform(5).unwrap(),
        Spectrum::explicit(vec![0.5, 0.2, 0.2, 0.1]).unwrap(),
        Spectrum::geometric(0.3).unwrap(),
    ] {
        for k in 0..15 {
            let (a, b) = (spec.tail_sums(k), spec.tail_sums(k + 1));
            let p = spec.eigenvalue(k + 1).unwrap_or(0.0);
            assert!((a.mass - b.mass - p).abs() < 1e-15);
            assert!((a.entropy - b.entropy - eta(p)).abs() < 1e-14);
        }
        let p1 = spec.eigenvalue(1).unwrap();
        assert!((spec.tail_sums(1).mass + p1 - 1.0).abs() < 1e-12);
    }
}

#[test]
fn kernel_steps_exactly_past_first_geometric_breakpoint() {
    let spec = Spectrum::geometric(0.5).unwrap();
    let grid = [1.2, 4.0 / 3.0, 4.0 / 3.0 + 1e-9, 1.4];
    let rows = entropy_curve(&spec, 1.0, &grid).unwrap();
    let ms: Vec<usize> = rows.iter().map(|r| r.m).collect();
    assert_eq!(ms, vec![1, 1, 2, 2]);
    assert!(rows.iter().all(|r| r.case == Case::B));
}

#[test]
fn main_term_matches_variational_value_on_constructed_levels() {
    let spec = Spectrum::geometric(0.5).unwrap();
    let main = lsb_main_term(&spec, 0.5).unwrap();
    let h = optimal_hamiltonian(&spec, 1.0, 2.0).unwrap();
    let levels = h.levels(400).unwrap();
    let reference = dual_by_golden_section(&levels, 2.0);
    assert!((main - reference).abs() < 1e-9, "{main} vs {reference}");
    assert!((main - optimal_entropy(&spec, 1.0, 2.0).unwrap()).abs() < 1e-15);
}

#[test]
fn envelope_reference_value() {
    let v = binary_entropy_envelope(0.25).unwrap();
    assert!((v - (eta(0.25) + eta(0.75))).abs() < 1e-16);
    assert!((v - 0.562335).abs() < 1e-6);
}

#[test]
fn mean_energy_is_strictly_decreasing() {
    let hams = [
        Hamiltonian::finite(vec![0.0, 0.3, 1.0, 1.0, 2.5]).unwrap(),
        Hamiltonian::oscillator(0.7).unwrap(),
        Hamiltonian::logarithmic(0.4).unwrap(),
    ];
    for h in &hams {
        let g = h.convergence_abscissa().unwrap();
        let mut b = g + 0.05;
        let mut prev = h.mean_energy(b).unwrap();
        while b < 30.0 {
            b *= 1.07;
            let next = h.mean_energy(b).unwrap();
            assert!(next < prev, "{h:?} at b = {b}");
            prev = next;
        }
    }
}

#[test]
fn gibbs_entropy_equals_maximal_entropy() {
    let h = Hamiltonian::finite(vec![0.0, 0.3, 1.0, 1.0, 2.5]).unwrap();
    for e in [0.05, 0.4, 0.8, 0.95, 3.0] {
        let g = h.solve_gibbs(e).unwrap();
        assert!((g.entropy - h.max_entropy(e).unwrap()).abs() < 1e-10);
        assert!((g.listed_entropy() - g.entropy).abs() < 1e-10);
        let direct = dual_by_golden_section(&[0.0, 0.3, 1.0, 1.0, 2.5], e);
        assert!((g.entropy - direct).abs() < 1e-9);
    }
    let osc = Hamiltonian::oscillator(1.0).unwrap();
    let g = osc.solve_gibbs(1.0).unwrap();
    assert!((g.beta.unwrap() - LN_2).abs() < 1e-10);
}

#[test]
fn truncated_spectrum_tracks_its_analytic_counterpart() {
    let q: f64 = 0.3;
    let p: Vec<f64> = (0..40).map(|i| (1.0 - q) * q.powi(i)).collect();
    let truncated = Spectrum::truncated(p, 1e-12).unwrap();
    let exact = Spectrum::geometric(q).unwrap();
    for e in [0.2, 1.0, 3.0] {
        let a = optimal_entropy(&truncated, 1.0, e).unwrap();
        let b = optimal_entropy(&exact, 1.0, e).unwrap();
        assert!((a - b).abs() < 1e-9, "E={e}: {a} vs {b}");
    }
}
