use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::Path;

use optham::bounds::{binary_entropy_envelope, lsb_main_term};
use optham::optimal::{entropy_curve, optimal_entropy, optimal_hamiltonian};
use optham::oracle::{standard_suite, LemmaReport};
use optham::Rank;
use serde::Serialize;

use crate::args::{Command, CurveArgs, GibbsArgs, LsbArgs, OptimalArgs, Units, VerifyArgs};
use crate::error::{CliError, Result};
use crate::formats::{find_preset, load_hamiltonian, load_spectrum};

pub fn run(command: Command) -> Result<()> {
    match command {
        Command::Optimal(a) => optimal(a),
        Command::Curve(a) => curve(a),
        Command::Gibbs(a) => gibbs(a),
        Command::Lsb(a) => lsb(a),
        Command::Verify(a) => verify(a),
    }
}

fn sink(path: Option<&Path>) -> Result<Box<dyn Write>> {
    Ok(match path {
        Some(p) => Box::new(BufWriter::new(File::create(p).map_err(|source| {
            CliError::Io {
                path: p.to_owned(),
                source,
            }
        })?)),
        None => Box::new(BufWriter::new(io::stdout().lock())),
    })
}

fn io_err(path: Option<&Path>) -> impl Fn(io::Error) -> CliError + '_ {
    move |source| CliError::Io {
        path: path
            .map(Path::to_owned)
            .unwrap_or_else(|| "<stdout>".into()),
        source,
    }
}

fn opt(v: Option<f64>) -> String {
    v.map_or_else(|| "none".into(), |x| x.to_string())
}

fn optimal(a: OptimalArgs) -> Result<()> {
    let spec = load_spectrum(&a.spectrum)?;
    let h = optimal_hamiltonian(&spec, a.e0, a.e)?;
    let s = optimal_entropy(&spec, a.e0, a.e)?;
    let count = match spec.rank() {
        Rank::Finite(n) => a.levels.min(n),
        Rank::Infinite => a.levels,
    };
    let count = spec.listed().map_or(count, |p| count.min(p.len()));
    let levels: Vec<String> = h.levels(count)?.iter().map(f64::to_string).collect();

    let path = a.common.output.as_deref();
    let mut out = sink(path)?;
    let text = format!(
        "case: {}\nm: {}\nE0: {}\nE: {}\ntheta: {}\nbeta_m: {}\ngibbs_beta: {}\nC: {}\nD: {}\nlevels: {}\nS_opt: {}\nunits: {}\n",
        h.case.label(),
        h.m,
        h.e0,
        h.energy,
        h.theta,
        opt(h.beta),
        opt(h.gibbs_beta()),
        opt(h.scale),
        opt(h.shift),
        levels.join(","),
        a.common.units.convert(s),
        units_name(a.common.units),
    );
    out.write_all(text.as_bytes())
        .and_then(|_| out.flush())
        .map_err(io_err(path))
}

/// Entropy of the oscillator Gibbs state with mean occupation `e`.
fn oscillator_entropy(e: f64) -> f64 {
    if e <= 0.0 {
        0.0
    } else {
        (e + 1.0) * (e + 1.0).ln() - e * e.ln()
    }
}

fn curve(a: CurveArgs) -> Result<()> {
    let spec = load_spectrum(&a.spectrum)?;
    let rows = entropy_curve(&spec, a.e0, &a.grid.values())?;
    let units = a.common.units;

    let path = a.common.output.as_deref();
    let mut w = csv::Writer::from_writer(sink(path)?);
    let mut header = vec!["E", "theta", "m", "case", "S_opt"];
    if a.reference {
        header.push("S_ref");
    }
    w.write_record(&header)?;
    for r in rows {
        let mut record = vec![
            r.energy.to_string(),
            r.theta.to_string(),
            r.m.to_string(),
            r.case.label().to_string(),
            units.convert(r.entropy).to_string(),
        ];
        if a.reference {
            record.push(units.convert(oscillator_entropy(r.energy)).to_string());
        }
        w.write_record(&record)?;
    }
    w.flush().map_err(io_err(path))
}

fn gibbs(a: GibbsArgs) -> Result<()> {
    let h = load_hamiltonian(&a.hamiltonian)?;
    let state = h.solve_gibbs(a.e)?;
    let units = a.common.units;
    let weights: Vec<String> = state
        .weights
        .iter()
        .take(a.weights)
        .map(f64::to_string)
        .collect();

    let path = a.common.output.as_deref();
    let mut out = sink(path)?;
    let text = format!(
        "E: {}\nbeta: {}\nmean_energy: {}\nresidual: {:e}\nentropy: {}\nweights: {}\ntail_weight: {}\nunits: {}\n",
        a.e,
        opt(state.beta),
        state.mean_energy,
        (state.mean_energy - a.e).abs(),
        units.convert(state.entropy),
        weights.join(","),
        state.tail_weight,
        units_name(units),
    );
    out.write_all(text.as_bytes())
        .and_then(|_| out.flush())
        .map_err(io_err(path))
}

fn lsb(a: LsbArgs) -> Result<()> {
    let preset = find_preset(&a.characteristic)?;
    let spec = load_spectrum(&a.spectrum)?;
    let main = lsb_main_term(&spec, a.eps)?;
    let envelope = binary_entropy_envelope(a.eps)?;
    let bound = preset.c * a.eps * main + preset.d * envelope;
    let units = a.common.units;

    let path = a.common.output.as_deref();
    let mut out = sink(path)?;
    let text = format!(
        "characteristic: {}\nC: {}\nD: {}\nmetric: {}\neps: {}\nmain_term: {}\nenvelope: {}\nbound: {}\ngibbs_condition: {}\nunits: {}\n",
        preset.name,
        preset.c,
        preset.d,
        preset.metric,
        a.eps,
        units.convert(main),
        units.convert(envelope),
        units.convert(bound),
        spec.satisfies_gibbs_condition(),
        units_name(units),
    );
    out.write_all(text.as_bytes())
        .and_then(|_| out.flush())
        .map_err(io_err(path))
}

#[derive(Serialize)]
struct ReportRow<'a> {
    claim: &'a str,
    trials: usize,
    worst_violation: f64,
    tolerance: f64,
    pass: bool,
    note: &'a str,
}

impl<'a> From<&'a LemmaReport> for ReportRow<'a> {
    fn from(r: &'a LemmaReport) -> Self {
        ReportRow {
            claim: &r.claim,
            trials: r.trials,
            worst_violation: r.worst_violation,
            tolerance: r.tolerance,
            pass: r.pass,
            note: &r.note,
        }
    }
}

fn verify(a: VerifyArgs) -> Result<()> {
    let reports = standard_suite(a.seed);
    let rows: Vec<ReportRow> = reports.iter().map(ReportRow::from).collect();

    let path = a.output.as_deref();
    let mut out = sink(path)?;
    serde_json::to_writer_pretty(&mut out, &rows)?;
    writeln!(out)
        .and_then(|_| out.flush())
        .map_err(io_err(path))?;

    let failed = reports.iter().filter(|r| !r.pass).count();
    if failed > 0 {
        return Err(CliError::VerificationFailed {
            failed,
            total: reports.len(),
        });
    }
    Ok(())
}

fn units_name(u: Units) -> &'static str {
    match u {
        Units::Nats => "nats",
        Units::Bits => "bits",
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn oscillator_entropy_values() {
        assert_eq!(oscillator_entropy(0.0), 0.0);
        assert!((oscillator_entropy(1.0) - 2.0 * std::f64::consts::LN_2).abs() < 1e-15);
    }
}
