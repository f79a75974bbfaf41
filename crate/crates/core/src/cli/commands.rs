use serde_json::{json, Map, Value};

use super::record::{cell, complex, complex_text, real, reals, Report, RunRecord, Table};
use super::{Cli, Command, MapKind, SplitterArgs, StateSpec};
use crate::entanglement::{monogamy_bound, schmidt_entropy, squeezing, BoundReport};
use crate::mixing::mapfile::{parse_map, write_map};
use crate::mixing::{characterize_with_tolerance, induced_map, is_nontrivial, Diagnostic, MixingMap};
use crate::protocol::{min_two_step_bound, run_ensemble, two_step_bound, ProtocolConfig};
use crate::splitting::{
    ideal_mode_split, mode_schmidt_coeffs, multimode_split, particle_schmidt, spectrum_deviation,
    FockState, NetworkColumn, SectoredState, SplitterParams,
};
use crate::states::{to_first_quantization_capped, TwoModeState};
use crate::{Error, Result, DEFAULT_MAX_FIRST_QUANTIZATION};

pub(super) fn report(cli: &Cli) -> Result<Report> {
    let mut record = RunRecord::new(command_name(&cli.command), cli.seed);
    record.param("tolerance", real(cli.tolerance));
    let mut report = Report {
        record,
        tables: Vec::new(),
        warnings: Vec::new(),
    };
    match &cli.command {
        Command::Split {
            state,
            splitter,
            sectors,
        } => split(&mut report, state, splitter, sectors)?,
        Command::Schmidt { state, nx } => schmidt(&mut report, state, *nx, cli.tolerance)?,
        Command::Extract {
            state,
            target,
            splitter,
            trials,
            max_iters,
        } => extract(&mut report, state, *target, splitter, *trials, *max_iters, cli.seed)?,
        Command::VerifyMixing { map } => {
            let text = std::fs::read_to_string(map)
                .map_err(|e| Error::Io(format!("{}: {e}", map.display())))?;
            let parsed = parse_map(&text).map_err(|e| match e {
                Error::Parse { location, message } => Error::Parse {
                    location: format!("{}, {location}", map.display()),
                    message,
                },
                other => other,
            })?;
            report.record.param("map", map.display().to_string());
            verify_mixing(&mut report, &parsed, cli.tolerance);
        }
        Command::Bounds { state, split } => bounds(&mut report, state, *split, cli.tolerance)?,
        Command::Squeeze { state } => squeeze(&mut report, state)?,
        Command::MultimodeSplit {
            state,
            alphas,
            modes,
            sectors,
        } => multimode(&mut report, state, alphas, *modes, sectors)?,
        Command::MapExport { .. } => unreachable!("handled before report assembly"),
    }
    Ok(report)
}

fn command_name(c: &Command) -> &'static str {
    match c {
        Command::Split { .. } => "split",
        Command::Schmidt { .. } => "schmidt",
        Command::Extract { .. } => "extract",
        Command::VerifyMixing { .. } => "verify-mixing",
        Command::Bounds { .. } => "bounds",
        Command::Squeeze { .. } => "squeeze",
        Command::MultimodeSplit { .. } => "multimode-split",
        Command::MapExport { .. } => "map-export",
    }
}

fn splitter_params(report: &mut Report, args: &SplitterArgs) -> Result<SplitterParams> {
    let p = args.params()?;
    report.record.param("r", complex(p.r()));
    report.record.param("t", complex(p.t()));
    Ok(p)
}

fn state_param(report: &mut Report, spec: &StateSpec) -> Result<TwoModeState> {
    report.record.param("state", spec.to_string());
    spec.to_state()
}

/// Non-zero amplitudes as `{downs, amplitude}` entries.
fn fock_entries(state: &FockState) -> Value {
    Value::Array(
        state
            .basis()
            .into_iter()
            .filter_map(|downs| {
                let z = state.amplitude(&downs);
                (z.norm() > 0.0).then(|| json!({"downs": downs, "amplitude": complex(z)}))
            })
            .collect(),
    )
}

fn join_cells(xs: &[f64]) -> String {
    xs.iter().map(|&x| cell(x)).collect::<Vec<_>>().join(";")
}

fn sector_entries(
    ss: &SectoredState,
    filter: &[Vec<usize>],
    with_schmidt: bool,
    table: &mut Table,
) -> Result<Vec<Value>> {
    let keys: Vec<Vec<usize>> = if filter.is_empty() {
        ss.sectors().keys().cloned().collect()
    } else {
        filter.to_vec()
    };
    let mut out = Vec::new();
    for key in keys {
        if key.len() != ss.num_modes() || key.iter().sum::<usize>() != ss.total_particles() {
            return Err(Error::domain(format!(
                "sector {key:?} is not a split of {} particles over {} modes",
                ss.total_particles(),
                ss.num_modes()
            )));
        }
        let label = key.iter().map(|k| k.to_string()).collect::<Vec<_>>().join(",");
        let Some(sector) = ss.sector(&key) else {
            out.push(json!({"sector": key, "weight": "0,0", "probability": 0, "state": null}));
            let mut row = vec![label, "0,0".into(), "0".into()];
            if with_schmidt {
                row.extend(["".into(), "0".into()]);
            }
            table.push(row);
            continue;
        };
        let mut entry = Map::new();
        entry.insert("sector".into(), json!(key));
        entry.insert("weight".into(), complex(sector.weight));
        entry.insert("probability".into(), real(sector.probability()));
        entry.insert("state".into(), fock_entries(&sector.state));
        let mut row = vec![label, complex_text(sector.weight), cell(sector.probability())];
        if with_schmidt {
            let sd = sector.state.schmidt()?;
            let entropy = schmidt_entropy(&sd);
            entry.insert("schmidt_coefficients".into(), reals(sd.coefficients()));
            entry.insert("entropy_bits".into(), real(entropy));
            row.extend([join_cells(sd.coefficients()), cell(entropy)]);
        }
        table.push(row);
        out.push(Value::Object(entry));
    }
    Ok(out)
}

fn split(
    report: &mut Report,
    spec: &StateSpec,
    splitter: &SplitterArgs,
    sectors: &[(usize, usize)],
) -> Result<()> {
    let s = state_param(report, spec)?;
    let p = splitter_params(report, splitter)?;
    let filter: Vec<Vec<usize>> = sectors.iter().map(|&(a, b)| vec![a, b]).collect();
    report.record.param("sectors", json!(filter));
    let ss = crate::splitting::beamsplit(&s, &p);
    let mut table = Table::new(
        "sectors",
        &["sector", "weight", "probability", "schmidt_coefficients", "entropy_bits"],
    );
    let entries = sector_entries(&ss, &filter, true, &mut table)?;
    report.record.results = json!({
        "total_particles": s.total_particles(),
        "total_probability": real(ss.total_probability()),
        "sectors": entries,
    });
    report.tables.push(table);
    Ok(())
}

fn schmidt(report: &mut Report, spec: &StateSpec, n_x: usize, tol: f64) -> Result<()> {
    let s = state_param(report, spec)?;
    report.record.param("nx", n_x);
    let total = s.total_particles();
    if n_x == 0 || n_x >= total {
        return Err(Error::domain(format!(
            "partition N_X = {n_x} must lie in 1..={}",
            total.saturating_sub(1)
        )));
    }
    let n_y = total - n_x;
    let (method, mode) = match s.as_fock() {
        Some(n) => ("closed-form", mode_schmidt_coeffs(n, total, n_x, n_y)?),
        None => ("mode-svd", ideal_mode_split(&s, n_x, n_y)?.schmidt()?),
    };
    let mut results = Map::new();
    results.insert("partition".into(), json!([n_x, n_y]));
    results.insert("mode_method".into(), json!(method));
    results.insert("mode_spectrum".into(), reals(mode.coefficients()));
    results.insert("entropy_bits".into(), real(schmidt_entropy(&mode)));
    let particle = match to_first_quantization_capped(&s, DEFAULT_MAX_FIRST_QUANTIZATION) {
        Ok(ps) => Some(particle_schmidt(&ps, n_x)?),
        Err(Error::Resource(msg)) => {
            report.warnings.push(format!("first-quantization spectrum skipped: {msg}"));
            None
        }
        Err(e) => return Err(e),
    };
    let mut table = Table::new("spectrum", &["index", "mode", "first_quantization"]);
    let width = mode
        .coefficients()
        .len()
        .max(particle.as_ref().map_or(0, |p| p.coefficients().len()));
    for i in 0..width {
        let at = |v: &[f64]| v.get(i).map_or(String::new(), |&x| cell(x));
        table.push(vec![
            i.to_string(),
            at(mode.coefficients()),
            particle.as_ref().map_or(String::new(), |p| at(p.coefficients())),
        ]);
    }
    match &particle {
        Some(p) => {
            let dev = spectrum_deviation(mode.coefficients(), p.coefficients());
            results.insert("first_quantization_spectrum".into(), reals(p.coefficients()));
            results.insert("max_deviation".into(), real(dev));
            results.insert("agree".into(), json!(dev <= tol));
        }
        None => {
            results.insert("first_quantization_spectrum".into(), Value::Null);
        }
    }
    report.record.results = Value::Object(results);
    report.tables.push(table);
    Ok(())
}

#[allow(clippy::too_many_arguments)]
fn extract(
    report: &mut Report,
    spec: &StateSpec,
    target: (usize, usize),
    splitter: &SplitterArgs,
    trials: u64,
    max_iters: usize,
    seed: u64,
) -> Result<()> {
    let s = state_param(report, spec)?;
    let p = splitter_params(report, splitter)?;
    report.record.param("target", json!([target.0, target.1]));
    report.record.param("trials", trials);
    report.record.param("max_iters", max_iters);
    let cfg = ProtocolConfig::new(target, p, seed).with_max_iterations(max_iters);
    let stats = run_ensemble(&s, &cfg, trials)?;
    let total = s.total_particles();
    let bounds: Vec<Value> = (0..=total)
        .map(|n_a| {
            two_step_bound(n_a, total - n_a, target.0, target.1, &p)
                .map(|b| json!({"from": [n_a, total - n_a], "bound": real(b)}))
        })
        .collect::<Result<_>>()?;
    let sample = stats.sample.as_ref().map(|r| {
        json!({
            "trial": stats.sample_trial,
            "iterations_used": r.iterations_used,
            "trajectory": r.trajectory.iter().map(|&(a, b)| json!([a, b])).collect::<Vec<_>>(),
            "mirrored": r.mirrored,
            "fidelity": real(r.fidelity_with_target),
            "output_state": r.output_state.as_ref().map(fock_entries),
        })
    });
    if stats.successes == 0 {
        report
            .warnings
            .push(format!("no trial reached {target:?} within {max_iters} iterations"));
    }
    report.record.results = json!({
        "trials": trials,
        "successes": stats.successes,
        "failure_fraction": real(stats.failure_fraction),
        "first_iteration_acceptance": real(stats.acceptance_rate.get(1).copied().unwrap_or(0.0)),
        "mean_iterations": real(stats.mean_iterations),
        "mean_fidelity": real(stats.mean_fidelity),
        "min_fidelity": real(stats.min_fidelity),
        "acceptance_counts": stats.acceptance_counts,
        "two_step_bounds": bounds,
        "min_two_step_bound": real(min_two_step_bound(total, target, &p)?),
        "sample": sample,
    });
    let mut table = Table::new("acceptance", &["iteration", "accepted", "acceptance_rate", "survival"]);
    for (k, (&count, (&rate, &surv))) in stats
        .acceptance_counts
        .iter()
        .zip(stats.acceptance_rate.iter().zip(&stats.survival))
        .enumerate()
    {
        table.push(vec![k.to_string(), count.to_string(), cell(rate), cell(surv)]);
    }
    report.tables.push(table);
    Ok(())
}

fn diagnostic_value(d: &Diagnostic) -> Value {
    let (kind, block, row, col) = match d {
        Diagnostic::Commutator { pair, row, col, .. } => ("commutator", pair, *row, *col),
        Diagnostic::NotIdentity { pair, row, col, .. } => ("not-identity", pair, *row, *col),
        Diagnostic::Recurrence { pair, m, n, .. } => ("recurrence", pair, *m, *n),
        Diagnostic::RootStructure { pair, m, n, .. } => ("root-structure", pair, *m, *n),
    };
    json!({
        "kind": kind,
        "block": block.to_string(),
        "row": row,
        "col": col,
        "message": d.to_string(),
    })
}

fn verify_mixing(report: &mut Report, map: &MixingMap, tol: f64) {
    let mut table = Table::new("coefficients", &["block", "c", "magnitude"]);
    let mut results = Map::new();
    results.insert("particles".into(), json!(map.total_particles()));
    results.insert("blocks".into(), json!(map.blocks().len()));
    match characterize_with_tolerance(map, tol) {
        Ok(coeffs) => {
            let entries: Vec<Value> = coeffs
                .iter()
                .map(|(pair, &c)| {
                    table.push(vec![pair.to_string(), complex_text(c), cell(c.norm())]);
                    json!({"block": pair.to_string(), "c": complex(c)})
                })
                .collect();
            results.insert("passed".into(), json!(true));
            results.insert("nontrivial".into(), json!(is_nontrivial(&coeffs)));
            results.insert("coefficients".into(), Value::Array(entries));
            results.insert("violation".into(), Value::Null);
        }
        Err(d) => {
            results.insert("passed".into(), json!(false));
            results.insert("coefficients".into(), Value::Null);
            results.insert("violation".into(), diagnostic_value(&d));
        }
    }
    report.record.results = Value::Object(results);
    report.tables.push(table);
}

fn balanced(total: usize) -> (usize, usize) {
    (total.div_ceil(2), total / 2)
}

fn bound_value(b: &BoundReport, tol: f64) -> Value {
    json!({
        "split": [b.split.0, b.split.1],
        "tangle": real(b.tangle_value),
        "concurrence": real(b.concurrence),
        "monogamy_bound": real(b.monogamy_bound),
        "monogamy_satisfied": b.tangle_value >= b.monogamy_bound - tol,
        "xi_squared": b.xi_squared.map(real),
        "concurrence_from_squeezing": b.concurrence_from_squeezing.map(real),
        "squeezing_bound": b.squeezing_bound.map(real),
        "squeezing_satisfied": b.squeezing_bound.map(|s| b.tangle_value >= s - tol),
    })
}

const BOUND_COLUMNS: [&str; 9] = [
    "theta",
    "xi_squared",
    "tangle",
    "concurrence",
    "concurrence_from_squeezing",
    "monogamy_bound",
    "squeezing_bound",
    "monogamy_satisfied",
    "squeezing_satisfied",
];

fn bound_row(theta: Option<f64>, b: &BoundReport, tol: f64) -> Vec<String> {
    let opt = |x: Option<f64>| x.map_or(String::new(), cell);
    vec![
        opt(theta),
        opt(b.xi_squared),
        cell(b.tangle_value),
        cell(b.concurrence),
        opt(b.concurrence_from_squeezing),
        cell(b.monogamy_bound),
        opt(b.squeezing_bound),
        (b.tangle_value >= b.monogamy_bound - tol).to_string(),
        b.squeezing_bound
            .map_or(String::new(), |s| (b.tangle_value >= s - tol).to_string()),
    ]
}

fn bounds(report: &mut Report, spec: &StateSpec, split: Option<(usize, usize)>, tol: f64) -> Result<()> {
    report.record.param("state", spec.to_string());
    let total = spec.total_particles();
    let (n_c, n_d) = split.unwrap_or(balanced(total));
    report.record.param("split", json!([n_c, n_d]));
    let mut table = Table::new("bounds", &BOUND_COLUMNS);
    if spec.is_sweep() {
        let mut points = Vec::new();
        for theta in spec.angles() {
            let s = StateSpec::Oat { total, theta }.to_state()?;
            let b = monogamy_bound(&s, n_c, n_d)?;
            if b.xi_squared.is_none() {
                report.warnings.push(format!("theta = {theta}: mean spin vanishes; xi^2 omitted"));
            }
            table.push(bound_row(Some(theta), &b, tol));
            let mut v = bound_value(&b, tol);
            v["theta"] = real(theta);
            points.push(v);
        }
        report.record.results = json!({ "sweep": points });
    } else {
        let s = spec.to_state()?;
        let b = monogamy_bound(&s, n_c, n_d)?;
        if b.xi_squared.is_none() {
            report
                .warnings
                .push("mean spin vanishes; xi^2 and the squeezing bound are omitted".into());
        }
        let theta = match spec {
            StateSpec::Oat { theta, .. } => Some(*theta),
            _ => None,
        };
        table.push(bound_row(theta, &b, tol));
        report.record.results = bound_value(&b, tol);
    }
    report.tables.push(table);
    Ok(())
}

fn squeeze(report: &mut Report, spec: &StateSpec) -> Result<()> {
    let s = state_param(report, spec)?;
    let r = squeezing(&s)?;
    report.record.results = json!({
        "xi_squared": real(r.xi_squared),
        "squeezed": r.xi_squared < 1.0,
        "mean_spin_direction": reals(&r.mean_spin_direction),
        "mean_spin_length": real(r.mean_spin_length),
        "min_orthogonal_variance": real(r.min_orthogonal_variance),
    });
    let mut table = Table::new(
        "squeezing",
        &["xi_squared", "mean_spin_length", "min_orthogonal_variance"],
    );
    table.push(vec![
        cell(r.xi_squared),
        cell(r.mean_spin_length),
        cell(r.min_orthogonal_variance),
    ]);
    report.tables.push(table);
    Ok(())
}

fn multimode(
    report: &mut Report,
    spec: &StateSpec,
    alphas: &[num_complex::Complex64],
    modes: usize,
    sectors: &[Vec<usize>],
) -> Result<()> {
    let s = state_param(report, spec)?;
    let column = if alphas.is_empty() {
        if modes == 0 {
            return Err(Error::domain("network needs at least one output mode"));
        }
        NetworkColumn::uniform(modes)
    } else {
        NetworkColumn::new(alphas.to_vec())?
    };
    report.record.param(
        "alphas",
        Value::Array(column.alphas().iter().map(|&z| complex(z)).collect()),
    );
    report.record.param("sectors", json!(sectors));
    let ss = multimode_split(&s, &column);
    let mut table = Table::new("sectors", &["sector", "weight", "probability"]);
    let entries = sector_entries(&ss, sectors, false, &mut table)?;
    report.record.results = json!({
        "total_particles": s.total_particles(),
        "modes": column.num_modes(),
        "total_probability": real(ss.total_probability()),
        "sectors": entries,
    });
    report.tables.push(table);
    Ok(())
}

pub(super) fn map_export(kind: MapKind, particles: usize, splitter: &SplitterArgs) -> Result<String> {
    let map = match kind {
        MapKind::Beamsplitter => induced_map(&splitter.params()?, particles),
        MapKind::Identity => MixingMap::identity(particles),
    };
    Ok(write_map(&map))
}
