//! Acceptance gate. Each test prints one `PASS`/`FAIL` line with its measured
//! figures before asserting, so `cargo test -- --nocapture` gives a summary.

use std::time::{Duration, Instant};

use num_complex::Complex;
use qpulse_core::dynamics::amplitudes_convolution;
use qpulse_core::greens::green_sq_integral;
use qpulse_core::numerics::roots::golden_section_max;
use qpulse_core::optimal::min_time_ep_closed;
use qpulse_core::{
    amplitude_ode_oracle, amplitudes_closed_form, default_grid, min_time, norm_ledger,
    optimal_pulse, p_of_duration, p_of_duration_quadrature, power_optimal, trace_closed_form,
    uniform_grid, Kernel, Params, Pulse, Regime, SampledPulse,
};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

const ENV_RATIOS: [f64; 3] = [0.0, 0.5, 1.0];

fn params(env: f64, f_over_ep: f64) -> Params {
    Params::new(1.0, env, f_over_ep * (1.0 + env) / 4.0, 1.0).unwrap()
}

fn verdict(id: u8, title: &str, ok: bool, elapsed: Duration, limit_s: f64, detail: String) {
    let in_time = elapsed.as_secs_f64() < limit_s;
    let tag = if ok && in_time { "PASS" } else { "FAIL" };
    println!(
        "criterion {id} {title:<28} {tag}  {detail}  [{:.3} s / {limit_s} s]",
        elapsed.as_secs_f64()
    );
    assert!(ok, "criterion {id} failed: {detail}");
    assert!(in_time, "criterion {id} over time budget");
}

#[test]
fn c1_saturation_bound() {
    let clock = Instant::now();
    let mut worst: f64 = 0.0;
    for env in ENV_RATIOS {
        for ratio in [0.3, 1.0, 3.0] {
            let q = params(env, ratio);
            let norm = q.coupling().powi(2)
                * q.gamma_pulse()
                * green_sq_integral(&q, f64::INFINITY).unwrap();
            worst = worst.max((norm - q.charging_bound()).abs());
        }
    }
    verdict(
        1,
        "saturation bound",
        worst <= 1e-6,
        clock.elapsed(),
        1.0,
        format!("max err {worst:.2e}"),
    );
}

#[test]
fn c2_optimal_pulse_saturation() {
    let clock = Instant::now();
    let mut worst: f64 = 0.0;
    for env in ENV_RATIOS {
        for ratio in [1.0, 3.0] {
            let q = params(env, ratio);
            let spec = optimal_pulse(&q, 40.0 / q.gamma()).unwrap();
            let p = amplitudes_convolution(&q, &spec, 0.0)
                .unwrap()
                .alpha1
                .norm_sqr();
            worst = worst.max((p - q.charging_bound()).abs());
        }
    }
    verdict(
        2,
        "optimal pulse saturation",
        worst <= 1e-4,
        clock.elapsed(),
        5.0,
        format!("max err {worst:.2e}"),
    );
}

#[test]
fn c3_power_constants_at_ep() {
    let clock = Instant::now();
    let mut lines = Vec::new();
    let mut ok = true;
    for env in ENV_RATIOS {
        let q = params(env, 1.0);
        let r = power_optimal(&q).unwrap();
        let bound = q.charging_bound();
        let ratio = r.p_at_star / bound;
        let scaled = r.power / q.gamma();
        let x_ok = (r.x_star - 3.389).abs() <= 1e-3;
        let ratio_ok = (ratio - 0.657).abs() <= 1e-3;
        let power_ok = (scaled - 0.194 * bound).abs() <= 1e-3;
        ok &= x_ok && ratio_ok && power_ok;
        lines.push(format!(
            "x*={:.6}{} p/b={:.6}{} P*/γ={:.6}{}",
            r.x_star,
            if x_ok { "" } else { "(!)" },
            ratio,
            if ratio_ok { "" } else { "(!)" },
            scaled,
            if power_ok { "" } else { "(!)" },
        ));
    }
    verdict(
        3,
        "power constants at EP",
        ok,
        clock.elapsed(),
        1.0,
        lines.join("; "),
    );
}

#[test]
fn c4_min_time_consistency() {
    let clock = Instant::now();
    let (mut rel, mut res): (f64, f64) = (0.0, 0.0);
    for env in ENV_RATIOS {
        let q = params(env, 1.0);
        let bound = q.charging_bound();
        for p_th in [0.1, 0.5, 0.9 * bound] {
            if p_th >= bound {
                continue;
            }
            let r = min_time(&q, p_th).unwrap();
            let closed = min_time_ep_closed(p_th / bound).unwrap() / q.gamma();
            rel = rel.max(((r.t_min - closed) / closed).abs());
            res = res.max((p_of_duration_quadrature(&q, r.t_min).unwrap() - p_th).abs());
        }
    }
    let ok = rel <= 1e-8 && res <= 1e-10;
    verdict(
        4,
        "min-time consistency",
        ok,
        clock.elapsed(),
        2.0,
        format!("rel {rel:.2e}, residual {res:.2e}"),
    );
}

#[test]
fn c5_oracle_equivalence() {
    let clock = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(2024);
    let mut worst: f64 = 0.0;
    let mut scenarios = 0;
    for regime in [
        Regime::Underdamped,
        Regime::ExceptionalPoint,
        Regime::Overdamped,
    ] {
        for _ in 0..3 {
            let env = rng.gen_range(0.0..1.0);
            let ratio = match regime {
                Regime::Underdamped => rng.gen_range(1.5..4.0),
                Regime::ExceptionalPoint => 1.0,
                Regime::Overdamped => rng.gen_range(0.2..0.7),
            };
            let q = params(env, ratio);
            assert_eq!(q.regime(), regime);
            let width = rng.gen_range(0.3..4.0);
            for spec in [
                Pulse::square(width).unwrap(),
                Pulse::decay_exp(width).unwrap(),
                Pulse::gaussian(width).unwrap(),
            ] {
                let (start, _) = spec.nominal_window();
                let grid = uniform_grid(start, start + 30.0 / q.gamma(), 300);
                let cf = trace_closed_form(&q, &spec, &grid).unwrap();
                let ode = amplitude_ode_oracle(&q, &spec, &grid).unwrap();
                for (a, b) in cf.alpha1.iter().zip(&ode.alpha1) {
                    worst = worst.max((a - b).norm());
                }
                scenarios += 1;
            }
        }
    }
    assert_eq!(scenarios, 27);
    verdict(
        5,
        "oracle equivalence",
        worst <= 1e-6,
        clock.elapsed(),
        30.0,
        format!("max |Δα₁| {worst:.2e}"),
    );
}

#[test]
fn c6_norm_conservation() {
    let clock = Instant::now();
    let mut worst: f64 = 0.0;
    for ratio in [3.0, 1.0, 0.4] {
        let q = params(0.5, ratio);
        for spec in [
            Pulse::square(2.0).unwrap(),
            Pulse::decay_exp(1.0).unwrap(),
            Pulse::gaussian(1.5).unwrap(),
        ] {
            for t in default_grid(&q, &spec, 20) {
                let ledger = norm_ledger(&q, &spec, t).unwrap();
                worst = worst.max((ledger.total - 1.0).abs());
            }
        }
    }
    verdict(
        6,
        "norm conservation",
        worst <= 1e-5,
        clock.elapsed(),
        30.0,
        format!("max |total − 1| {worst:.2e}"),
    );
}

#[test]
fn c7_matched_filter_optimality() {
    let clock = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let mut excess = f64::NEG_INFINITY;
    for ratio in [3.0, 1.0, 0.4] {
        let q = params(0.5, ratio);
        for x in [2.0, 5.0, 10.0] {
            let duration = x / q.gamma();
            let limit = p_of_duration(&q, duration).unwrap();
            for _ in 0..10 {
                let nodes = rng.gen_range(2..24);
                let times: Vec<f64> = (0..nodes)
                    .map(|k| -duration + duration * k as f64 / (nodes - 1) as f64)
                    .collect();
                let values: Vec<Complex<f64>> = (0..nodes)
                    .map(|_| Complex::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)))
                    .collect();
                let pulse = Pulse::Sampled(SampledPulse::new(times, values).unwrap());
                let got = amplitudes_convolution(&q, &pulse, 0.0)
                    .unwrap()
                    .alpha1
                    .norm_sqr();
                excess = excess.max(got - limit);
            }
        }
    }
    verdict(
        7,
        "matched-filter optimality",
        excess <= 1e-8,
        clock.elapsed(),
        20.0,
        format!("max excess {excess:.2e}"),
    );
}

fn gaussian_peak(q: &Params, width: f64) -> (f64, f64) {
    let spec = Pulse::gaussian(width).unwrap();
    let trace = trace_closed_form(q, &spec, &default_grid(q, &spec, 400)).unwrap();
    let (t0, _) = trace.peak_battery().unwrap();
    let step = trace.times[1] - trace.times[0];
    let max_erg = trace.ergotropy.iter().cloned().fold(0.0, f64::max);
    let (_, peak) = golden_section_max(
        |t| {
            amplitudes_closed_form(q, &spec, t)
                .unwrap()
                .alpha1
                .norm_sqr()
        },
        t0 - step,
        t0 + step,
        1e-9,
    );
    (peak, max_erg)
}

#[test]
fn c8_gaussian_sweep_landmark() {
    let clock = Instant::now();
    let widths: Vec<f64> = (0..=110).map(|k| 0.5 + 0.05 * k as f64).collect();

    let lossless = params(0.0, 1.0);
    let (best_width, best_peak) = widths
        .iter()
        .map(|w| (*w, gaussian_peak(&lossless, *w).0))
        .fold(
            (0.0, f64::NEG_INFINITY),
            |a, b| if b.1 > a.1 { b } else { a },
        );

    let lossy = params(1.0, 1.0);
    let (max_peak, max_erg) = widths
        .iter()
        .map(|w| gaussian_peak(&lossy, *w))
        .fold((0.0, 0.0), |a: (f64, f64), b| (a.0.max(b.0), a.1.max(b.1)));

    let ok = (2.5..=3.5).contains(&best_width) && max_erg == 0.0 && max_peak < 0.5;
    verdict(
        8,
        "gaussian sweep landmark",
        ok,
        clock.elapsed(),
        60.0,
        format!("ΓT*={best_width:.2} (peak {best_peak:.4}); lossy max peak {max_peak:.4}, max ergotropy {max_erg}"),
    );
}

#[test]
fn c9_regime_continuity() {
    let clock = Instant::now();
    let (mut dg, mut dp): (f64, f64) = (0.0, 0.0);
    for env in ENV_RATIOS {
        let ep = params(env, 1.0);
        let ep_kernel = Kernel::new(&ep);
        let gamma = ep.gamma();
        for shift in [1.0 - 1e-5, 1.0 + 1e-5] {
            let near = params(env, shift);
            assert_ne!(near.regime(), Regime::ExceptionalPoint);
            let kernel = Kernel::new(&near);
            for x in uniform_grid(0.0, 20.0, 401) {
                let t = x / gamma;
                dg = dg.max((kernel.g(t) - ep_kernel.g(t)).abs());
                dp = dp
                    .max((p_of_duration(&near, t).unwrap() - p_of_duration(&ep, t).unwrap()).abs());
            }
        }
    }
    let ok = dg <= 1e-4 && dp <= 1e-4;
    verdict(
        9,
        "regime continuity",
        ok,
        clock.elapsed(),
        2.0,
        format!("max |ΔG| {dg:.2e}, max |Δp| {dp:.2e}"),
    );
}
