use std::fs;

use qpulse_core::dynamics::norm_ledger_unchecked;
use qpulse_core::numerics::roots::golden_section_max;
use qpulse_core::{
    amplitudes_closed_form, default_grid, min_time, power_optimal, trace_closed_form, uniform_grid,
    Params, Pulse,
};
use rayon::prelude::*;
use serde_json::json;

use crate::config::{build_pulse, Axis, Command, RunConfig, Shape};
use crate::error::CliError;
use crate::output::{json_float, Table};

/// Validates, computes and writes the result to the configured destination.
pub fn execute(config: &RunConfig) -> Result<Table, CliError> {
    let table = run(config)?;
    let text = table.render(config.output.format);
    match &config.output.path {
        Some(path) => fs::write(path, text)?,
        None => print!("{text}"),
    }
    Ok(table)
}

/// Runs the configured command and returns its table without writing it.
pub fn run(config: &RunConfig) -> Result<Table, CliError> {
    config.validate()?;
    match config.command {
        Command::Dynamics => dynamics(config),
        Command::CompareShapes => compare_shapes(config),
        Command::OptimalPulse => optimal_shapes(config),
        Command::MinTime => min_time_report(config),
        Command::Power => power_report(config),
        Command::Sweep => sweep(config),
    }
}

fn time_grid(config: &RunConfig, params: &Params, spec: &Pulse) -> Vec<f64> {
    match (config.grid.start, config.grid.end) {
        (Some(a), Some(b)) => uniform_grid(a, b, config.grid.points),
        _ => default_grid(params, spec, config.grid.points),
    }
}

fn dynamics(config: &RunConfig) -> Result<Table, CliError> {
    let params = config.system_params()?;
    let spec = config.pulse_spec(&params)?;
    let times = time_grid(config, &params, &spec);
    let trace = trace_closed_form(&params, &spec, &times)?;
    let tol = config.tolerances;
    let ledger: Vec<f64> = if spec.is_pointwise() {
        times
            .par_iter()
            .map(|&t| {
                norm_ledger_unchecked(&params, &spec, t, tol.quadrature)
                    .and_then(|l| l.check(tol.ledger))
                    .map(|l| l.total)
            })
            .collect::<Result<_, _>>()?
    } else {
        vec![f64::NAN; times.len()]
    };

    let mut table = Table::new(
        "dynamics",
        &[
            "t (1/Gamma)",
            "re_alpha0 (1)",
            "im_alpha0 (1)",
            "re_alpha1 (1)",
            "im_alpha1 (1)",
            "p_battery (1)",
            "energy (hbar*Gamma)",
            "ergotropy (hbar*Gamma)",
            "ledger_total (1)",
        ],
    );
    for k in 0..times.len() {
        let (a0, a1) = (trace.alpha0[k], trace.alpha1[k]);
        table.push(vec![
            times[k],
            a0.re,
            a0.im,
            a1.re,
            a1.im,
            a1.norm_sqr(),
            trace.energy[k],
            trace.ergotropy[k],
            ledger[k],
        ]);
    }
    describe(&mut table, &params);
    table.meta("pulse", spec.name());
    Ok(table)
}

fn compare_shapes(config: &RunConfig) -> Result<Table, CliError> {
    let params = config.system_params()?;
    let t_sigma = config.pulse.width;
    let shapes = [
        build_pulse(Shape::Square, t_sigma * 12f64.sqrt(), 0.0, &params)?,
        build_pulse(Shape::DecayExp, t_sigma, 0.0, &params)?,
        build_pulse(Shape::Gaussian, t_sigma, 0.0, &params)?,
        build_pulse(Shape::Optimal, 0.0, config.pulse.truncation, &params)?,
    ];
    let times = match (config.grid.start, config.grid.end) {
        (Some(a), Some(b)) => uniform_grid(a, b, config.grid.points),
        _ => {
            let gamma = params.gamma();
            let lo = shapes
                .iter()
                .map(|s| s.nominal_window().0)
                .fold(f64::INFINITY, f64::min);
            let hi = shapes
                .iter()
                .map(|s| s.nominal_window().1)
                .fold(f64::NEG_INFINITY, f64::max);
            uniform_grid(lo - 1.0 / gamma, hi + 30.0 / gamma, config.grid.points)
        }
    };
    let traces = shapes
        .iter()
        .map(|s| trace_closed_form(&params, s, &times))
        .collect::<Result<Vec<_>, _>>()?;

    let names = ["square", "decay_exp", "gaussian", "optimal"];
    let mut columns = vec!["t (1/Gamma)".to_string()];
    columns.extend(names.iter().map(|n| format!("xi_{n} (Gamma^1/2)")));
    columns.extend(names.iter().map(|n| format!("p_{n} (1)")));
    let mut table = Table::new("compare-shapes", &[]);
    table.columns = columns;
    for (k, &t) in times.iter().enumerate() {
        let mut row = vec![t];
        for s in &shapes {
            row.push(s.value(t)?.re);
        }
        row.extend(traces.iter().map(|tr| tr.alpha1[k].norm_sqr()));
        table.push(row);
    }
    describe(&mut table, &params);
    let widths = shapes
        .iter()
        .map(|s| s.width().map(|w| json_float(w.t_sigma)))
        .collect::<Result<Vec<_>, _>>()?;
    table.meta(
        "t_sigma",
        json!(names
            .iter()
            .zip(widths)
            .map(|(n, w)| (n.to_string(), w))
            .collect::<serde_json::Map<_, _>>()),
    );
    Ok(table)
}

fn optimal_shapes(config: &RunConfig) -> Result<Table, CliError> {
    let base = config.system_params()?;
    let couplings = match config.sweep_axes.first() {
        Some(axis) => axis.grid(),
        None => vec![base.coupling()],
    };
    let mut table = Table::new(
        "optimal-pulse",
        &[
            "f (Gamma)",
            "t (1/Gamma)",
            "xi_opt (Gamma^1/2)",
            "p_battery (1)",
        ],
    );
    for f in couplings {
        let params = base.with_coupling(f)?;
        let spec = build_pulse(Shape::Optimal, 0.0, config.pulse.truncation, &params)?;
        let times = time_grid(config, &params, &spec);
        let trace = trace_closed_form(&params, &spec, &times)?;
        for (k, &t) in times.iter().enumerate() {
            table.push(vec![f, t, spec.value(t)?.re, trace.alpha1[k].norm_sqr()]);
        }
    }
    describe(&mut table, &base);
    table.meta("truncation", json_float(config.pulse.truncation));
    Ok(table)
}

fn min_time_report(config: &RunConfig) -> Result<Table, CliError> {
    let params = config.system_params()?;
    let p_th = config.threshold.unwrap_or_default();
    let r = min_time(&params, p_th)?;
    let mut table = Table::new(
        "min-time",
        &[
            "p_threshold (1)",
            "t_min (1/Gamma)",
            "residual (1)",
            "iterations (1)",
            "asymptotic_estimate (1/Gamma)",
            "closed_form_t_min (1/Gamma)",
        ],
    );
    table.push(vec![
        r.p_threshold,
        r.t_min,
        r.solver.residual,
        r.solver.iterations as f64,
        r.asymptotic_estimate,
        r.closed_form_t_min.unwrap_or(f64::NAN),
    ]);
    describe(&mut table, &params);
    Ok(table)
}

fn power_report(config: &RunConfig) -> Result<Table, CliError> {
    let params = config.system_params()?;
    let r = power_optimal(&params)?;
    let mut table = Table::new(
        "power",
        &[
            "t_star (1/Gamma)",
            "x_star (1)",
            "p_at_star (1)",
            "power (Gamma)",
            "stationarity_residual (1)",
            "candidates (1)",
        ],
    );
    table.push(vec![
        r.t_star,
        r.x_star,
        r.p_at_star,
        r.power,
        r.stationarity_residual,
        r.candidates.len() as f64,
    ]);
    describe(&mut table, &params);
    table.meta("x_star", json_float(r.x_star));
    table.meta(
        "candidates",
        r.candidates
            .iter()
            .map(|c| json!({ "t": json_float(c.t), "power": json_float(c.power) }))
            .collect::<Vec<_>>(),
    );
    Ok(table)
}

/// Largest |α₁|² over the grid, refined between neighbouring samples.
pub fn peak_charge(params: &Params, spec: &Pulse, times: &[f64]) -> Result<(f64, f64), CliError> {
    let trace = trace_closed_form(params, spec, times)?;
    let (t0, p0) = trace.peak_battery().unwrap_or((0.0, 0.0));
    let step = times.get(1).map_or(0.0, |t1| t1 - times[0]);
    if step <= 0.0 {
        return Ok((t0, p0));
    }
    let (t, p) = golden_section_max(
        |t| {
            amplitudes_closed_form(params, spec, t)
                .map_or(f64::NEG_INFINITY, |a| a.alpha1.norm_sqr())
        },
        t0 - step,
        t0 + step,
        1e-10,
    );
    Ok(if p > p0 { (t, p) } else { (t0, p0) })
}

fn sweep(config: &RunConfig) -> Result<Table, CliError> {
    let axes = &config.sweep_axes;
    let grids: Vec<Vec<f64>> = axes.iter().map(|a| a.grid()).collect();
    let mut cells: Vec<Vec<f64>> = grids[0].iter().map(|x| vec![*x]).collect();
    if let Some(inner) = grids.get(1) {
        cells = cells
            .into_iter()
            .flat_map(|c| inner.iter().map(move |y| vec![c[0], *y]))
            .collect();
    }

    let results = cells
        .par_iter()
        .map(|values| {
            let mut cfg = config.clone();
            for (axis, v) in axes.iter().zip(values) {
                match axis.axis {
                    Axis::CouplingOverGammaPulse => cfg.params.coupling_ratio = *v,
                    Axis::GammaEnvOverGammaPulse => cfg.params.gamma_env_ratio = *v,
                    Axis::GammaTProduct => match cfg.pulse.shape {
                        Shape::Optimal => cfg.pulse.truncation = *v,
                        _ => cfg.pulse.width = *v,
                    },
                }
            }
            let params = cfg.system_params()?;
            let spec = cfg.pulse_spec(&params)?;
            let (t, p) = peak_charge(&params, &spec, &time_grid(&cfg, &params, &spec))?;
            Ok((params.f_ep(), p, t))
        })
        .collect::<Result<Vec<_>, CliError>>()?;

    let mut columns: Vec<&str> = axes.iter().map(|a| a.axis.column()).collect();
    columns.extend(["f_ep (Gamma)", "max_p_battery (1)", "t_at_max (1/Gamma)"]);
    let mut table = Table::new("sweep", &columns);
    let mut markers: Vec<f64> = Vec::new();
    for (values, (f_ep, p, t)) in cells.iter().zip(results) {
        let mut row = values.clone();
        row.extend([f_ep, p, t]);
        table.push(row);
        if !markers.contains(&f_ep) {
            markers.push(f_ep);
        }
    }
    describe(&mut table, &config.system_params()?);
    table.meta("pulse", json!(config.pulse.shape));
    table.meta(
        "axes",
        axes.iter().map(|a| a.axis.to_string()).collect::<Vec<_>>(),
    );
    table.meta(
        "ep_markers",
        markers.into_iter().map(json_float).collect::<Vec<_>>(),
    );
    Ok(table)
}

fn describe(table: &mut Table, params: &Params) {
    table.meta("gamma_env_ratio", json_float(params.gamma_env()));
    table.meta("coupling_ratio", json_float(params.coupling()));
    table.meta("f_ep", json_float(params.f_ep()));
    table.meta("bound", json_float(params.charging_bound()));
    table.meta("regime", params.regime().label());
}
