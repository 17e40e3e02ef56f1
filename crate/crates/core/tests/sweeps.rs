// SPDX-License-Identifier: Apache-2.0

mod common;

use rand::Rng;

use qsolar::io::emit::sweep_csv;
use qsolar::models::*;
use qsolar::qdyn::steady_state;
use qsolar::sweep::*;
use qsolar::thermo::{second_law_verdict, sink_model_report, ThermoReport, Verdict};

fn fixed(temp_ratio: f64) -> SweepFixed {
    SweepFixed {
        omega_abs: 1.0,
        omega_ratio: 0.5,
        temp_ratio,
        t_abs: 2.0,
        gamma: 0.001,
        gamma_h: None,
        gamma_c: None,
        gamma_x: None,
        gamma_return: None,
    }
}

fn spec(model: SweepModel, lo: f64, hi: f64, n: usize, temp_ratio: f64) -> SweepSpec {
    SweepSpec {
        model,
        axis: SweepAxis::OmegaRatio,
        grid: linspace(lo, hi, n).unwrap(),
        fixed: fixed(temp_ratio),
    }
}

/// Root of `(2 − x)/(2 + x) = c` by plain bisection.
fn decay_boundary(c: f64) -> f64 {
    let (mut a, mut b) = (0.0, 2.0);
    for _ in 0..200 {
        let m = 0.5 * (a + b);
        if (2.0 - m) / (2.0 + m) > c {
            a = m;
        } else {
            b = m;
        }
    }
    0.5 * (a + b)
}

#[test]
fn toy_decay_onset() {
    let t = run_sweep(&spec(SweepModel::ToyDecay, 0.02, 1.98, 99, 0.05)).unwrap();
    assert_eq!(t.violations.len(), 1);
    let (lo, hi) = t.violations[0];
    assert!((lo - decay_boundary(0.05)).abs() < 1e-4, "{lo}");
    assert!((lo - 2.0 * 0.95 / 1.05).abs() < 1e-6);
    assert_eq!(hi, 1.98);
    // brute-force scan of the steady-state inequality
    let first_bad = t
        .rows
        .iter()
        .find(|r| -r.report.j_loss / r.report.j_abs < 0.05)
        .unwrap()
        .axis;
    assert!(first_bad >= lo && first_bad - lo < 0.02 + 1e-12);
}

#[test]
fn dorfman_onset() {
    let t = run_sweep(&spec(SweepModel::Dorfman, 0.01, 0.99, 99, 0.05)).unwrap();
    assert_eq!(t.violations.len(), 1);
    assert!((t.violations[0].0 - 0.95).abs() < 1e-6, "{:?}", t.violations);
    let t = run_sweep(&spec(SweepModel::Creatore, 0.01, 0.99, 99, 0.05)).unwrap();
    assert!((t.violations[0].0 - 0.95).abs() < 1e-6, "{:?}", t.violations);
}

#[test]
fn toy_ham_never_violates() {
    for tr in [0.02, 0.05, 0.3, 0.7, 1.0] {
        let t = run_sweep(&spec(SweepModel::ToyHam, 0.021, 1.979, 120, tr)).unwrap();
        assert!(t.violations.is_empty(), "tr {tr}: {:?}", t.violations);
    }
    let s = SweepSpec {
        model: SweepModel::ToyHam,
        axis: SweepAxis::TempRatio,
        grid: linspace(0.011, 1.0, 90).unwrap(),
        fixed: fixed(0.0),
    };
    assert!(run_sweep(&s).unwrap().violations.is_empty());
}

#[test]
fn temp_axis_decay_violation_below_gap_ratio() {
    // ω_rc/ω_abs = 0.5 → gap ratio 0.6; the decay scheme violates for T_loss/T_abs > 0.6
    let s = SweepSpec {
        model: SweepModel::ToyDecay,
        axis: SweepAxis::TempRatio,
        grid: linspace(0.05, 1.0, 20).unwrap(),
        fixed: fixed(0.0),
    };
    let t = run_sweep(&s).unwrap();
    assert_eq!(t.violations.len(), 1);
    assert!((t.violations[0].0 - 0.6).abs() < 1e-6);
    assert_eq!(t.violations[0].1, 1.0);
}

#[test]
fn interval_endpoints_inside_grid() {
    let t = run_sweep(&spec(SweepModel::ToyDecay, 0.5, 1.95, 30, 0.1)).unwrap();
    for &(lo, hi) in &t.violations {
        assert!(lo >= 0.5 && hi <= 1.95 && lo <= hi);
    }
}

fn numeric_report(s: &SweepSpec, x: f64) -> ThermoReport {
    let f = &s.fixed;
    let omega_rc = x * f.omega_abs;
    let t_loss = f.temp_ratio * f.t_abs;
    match s.model {
        SweepModel::ToyDecay => {
            let p = ToyParams::new(f.omega_abs, omega_rc, f.gamma, f.t_abs, t_loss).unwrap();
            let g = toy_decay_generator(&p).unwrap();
            sink_model_report(&g, &steady_state(&g).unwrap(), f.t_abs, t_loss).unwrap()
        }
        SweepModel::ToyHam => {
            let p = ToyParams::new(f.omega_abs, omega_rc, f.gamma, f.t_abs, t_loss).unwrap();
            let m = toy_ham_generator(&p, 12, SpectrumModel::Flat).unwrap().marginal(5).unwrap();
            ThermoReport::steady(m.j_abs, m.j_loss, -m.j_abs - m.j_loss, 0.0, f.t_abs, t_loss)
        }
        SweepModel::Dorfman => {
            let p = DonorAcceptorParams::from_gaps(f.omega_abs, omega_rc, f.gamma, f.gamma, f.gamma, f.gamma, f.t_abs, t_loss).unwrap();
            let g = dorfman_generator(&p).unwrap();
            sink_model_report(&g, &steady_state(&g).unwrap(), f.t_abs, t_loss).unwrap()
        }
        SweepModel::Creatore => {
            let p = PhotocellParams::from_gaps(f.omega_abs, omega_rc, f.gamma, f.gamma, f.gamma, f.gamma, f.gamma, f.t_abs, t_loss).unwrap();
            let g = creatore_generator(&p).unwrap();
            sink_model_report(&g, &steady_state(&g).unwrap(), f.t_abs, t_loss).unwrap()
        }
    }
}

#[test]
fn swept_verdicts_match_numeric_generators() {
    let mut r = common::rng(21);
    let cases = [
        (SweepModel::ToyDecay, 1.98, 0.3),
        // the dressed ladder needs Ω_n < ω_abs − ω_rc/2 up to the truncation
        (SweepModel::ToyHam, 1.5, 0.3),
        (SweepModel::Dorfman, 0.99, 0.1),
        (SweepModel::Creatore, 0.99, 0.1),
    ];
    for (model, hi, tr) in cases {
        let mut s = spec(model, 0.035, hi, 60, tr);
        s.fixed.gamma = 0.0015;
        let table = run_sweep(&s).unwrap();
        for _ in 0..25 {
            let row = table.rows[r.random_range(0..table.rows.len())];
            let num = numeric_report(&s, row.axis);
            let scale = row.report.j_abs.abs();
            assert!((num.j_abs - row.report.j_abs).abs() < 1e-7 * scale, "{model} {}", row.axis);
            assert!((num.j_loss - row.report.j_loss).abs() < 1e-7 * scale, "{model} {}", row.axis);
            let v = second_law_verdict(num.j_abs, num.j_loss, s.fixed.t_abs, tr * s.fixed.t_abs);
            assert_eq!(v, row.report.verdict, "{model} {}", row.axis);
        }
    }
}

#[test]
fn power_comparison_signs_and_zero() {
    let p = ToyParams::new(1.0, 0.6, 0.002, 1.5, 1.5).unwrap();
    let rows = power_comparison(&p, &linspace(0.01, 1.0, 100).unwrap()).unwrap();
    assert!(rows.iter().all(|r| r.p_dec < 0.0));
    let last = rows.last().unwrap();
    assert!(last.p_ham > 0.0);
    assert!(rows[0].p_ham < 0.0);
    let changes = rows.windows(2).filter(|w| (w[0].p_ham > 0.0) != (w[1].p_ham > 0.0)).count();
    assert_eq!(changes, 1);
    let z = ham_power_zero(&p, 0.01, 1.0, 1e-10).unwrap();
    assert!((z - (2.0 - 0.6) / (2.0 + 0.6)).abs() < 1e-6, "{z}");
    assert!(ham_power_zero(&p, 0.8, 1.0, 1e-10).is_err());
}

#[test]
fn output_is_deterministic() {
    let s = spec(SweepModel::ToyDecay, 0.02, 1.98, 99, 0.05);
    let a = sweep_csv(&run_sweep(&s).unwrap());
    let b = sweep_csv(&run_sweep(&s).unwrap());
    assert_eq!(a, b);
    assert!(a.ends_with("# violation: 1.80952381134e0..1.98000000000e0\n"), "{a}");
    assert!(a.starts_with("axis,j_abs,j_loss,power,ratio,sigma,verdict\n"));
}

#[test]
fn undefined_verdict_at_exact_ham_boundary() {
    // at T_loss/T_abs equal to the gap ratio the net flux vanishes
    let p = ToyParams::new(1.0, 0.5, 0.001, 2.0, 1.2).unwrap();
    let r = toy_ham_report(&p).unwrap();
    assert!(r.j_abs.abs() < 1e-18);
    assert_ne!(r.verdict, Verdict::Violation);
}
