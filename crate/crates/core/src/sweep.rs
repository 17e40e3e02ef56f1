// SPDX-License-Identifier: Apache-2.0

//! One-dimensional parameter scans over the closed-form models, with
//! location of second-law violation intervals.

use std::fmt;
use std::str::FromStr;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::models::{
    creatore_currents, dorfman_currents, toy_decay_report, toy_ham_report, DonorAcceptorParams,
    PhotocellParams, ToyParams,
};
use crate::thermo::{check_positive, ThermoReport, Verdict};

/// Width below which interval endpoints stop being refined.
pub const BISECTION_TOL: f64 = 1e-7;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SweepModel {
    ToyDecay,
    ToyHam,
    Dorfman,
    Creatore,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SweepAxis {
    /// `ω_rc/ω_abs`
    OmegaRatio,
    /// `T_loss/T_abs`
    TempRatio,
    Time,
}

macro_rules! str_enum {
    ($t:ty { $($v:ident => $s:literal),* $(,)? }) => {
        impl $t {
            pub fn as_str(&self) -> &'static str {
                match self { $(Self::$v => $s),* }
            }
        }
        impl fmt::Display for $t {
            fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
                f.write_str(self.as_str())
            }
        }
        impl FromStr for $t {
            type Err = Error;
            fn from_str(s: &str) -> Result<Self> {
                match s {
                    $($s => Ok(Self::$v),)*
                    _ => Err(Error::invalid(stringify!($t), format!("one of {}", [$($s),*].join(", ")))),
                }
            }
        }
    };
}

str_enum!(SweepModel { ToyDecay => "toy_decay", ToyHam => "toy_ham", Dorfman => "dorfman", Creatore => "creatore" });
str_enum!(SweepAxis { OmegaRatio => "omega_ratio", TempRatio => "temp_ratio", Time => "time" });

/// Parameters held fixed along the sweep. The value for the swept axis is
/// ignored. Unset bath rates fall back to `gamma`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SweepFixed {
    pub omega_abs: f64,
    pub omega_ratio: f64,
    pub temp_ratio: f64,
    pub t_abs: f64,
    pub gamma: f64,
    pub gamma_h: Option<f64>,
    pub gamma_c: Option<f64>,
    pub gamma_x: Option<f64>,
    pub gamma_return: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepSpec {
    pub model: SweepModel,
    pub axis: SweepAxis,
    pub grid: Vec<f64>,
    pub fixed: SweepFixed,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SweepRow {
    pub axis: f64,
    pub report: ThermoReport,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepTable {
    pub spec: SweepSpec,
    pub rows: Vec<SweepRow>,
    pub violations: Vec<(f64, f64)>,
}

/// Evenly spaced grid including both ends.
pub fn linspace(lo: f64, hi: f64, n: usize) -> Result<Vec<f64>> {
    if n < 2 {
        return Err(Error::invalid("n_points", ">= 2"));
    }
    if !(lo < hi) {
        return Err(Error::invalid("grid", "lo < hi"));
    }
    let step = (hi - lo) / (n - 1) as f64;
    Ok((0..n).map(|i| if i + 1 == n { hi } else { lo + step * i as f64 }).collect())
}

impl SweepSpec {
    pub fn validate(&self) -> Result<()> {
        if self.axis == SweepAxis::Time {
            return Err(Error::invalid("axis", "omega_ratio or temp_ratio (time is only available for fmo-trace)"));
        }
        if self.grid.is_empty() {
            return Err(Error::invalid("grid", "nonempty"));
        }
        if self.grid.iter().any(|x| !x.is_finite()) || self.grid.windows(2).any(|w| !(w[0] < w[1])) {
            return Err(Error::invalid("grid", "strictly ascending"));
        }
        let f = &self.fixed;
        check_positive("omega_abs", f.omega_abs)?;
        check_positive("t_abs", f.t_abs)?;
        check_positive("gamma", f.gamma)?;
        for &x in &self.grid {
            self.evaluate(x)?;
        }
        Ok(())
    }

    /// `(ω_rc, T_loss)` at axis value `x`.
    fn point(&self, x: f64) -> (f64, f64) {
        let f = &self.fixed;
        match self.axis {
            SweepAxis::OmegaRatio => (x * f.omega_abs, f.temp_ratio * f.t_abs),
            _ => (f.omega_ratio * f.omega_abs, x * f.t_abs),
        }
    }

    fn toy_params(&self, x: f64) -> Result<ToyParams> {
        let f = &self.fixed;
        let (omega_rc, t_loss) = self.point(x);
        let p = ToyParams::new(f.omega_abs, omega_rc, f.gamma, f.t_abs, t_loss)?;
        match (f.gamma_h, f.gamma_c) {
            (None, None) => Ok(p),
            (h, c) => p.with_bath_rates(h.unwrap_or(f.gamma), c.unwrap_or(f.gamma)),
        }
    }

    /// Closed-form report at axis value `x`.
    pub fn evaluate(&self, x: f64) -> Result<ThermoReport> {
        let f = &self.fixed;
        let (omega_rc, t_loss) = self.point(x);
        let gh = f.gamma_h.unwrap_or(f.gamma);
        let gc = f.gamma_c.unwrap_or(f.gamma);
        let g_ret = f.gamma_return.unwrap_or(f.gamma);
        match self.model {
            SweepModel::ToyDecay => toy_decay_report(&self.toy_params(x)?),
            SweepModel::ToyHam => toy_ham_report(&self.toy_params(x)?),
            SweepModel::Dorfman => {
                let p = DonorAcceptorParams::from_gaps(f.omega_abs, omega_rc, gh, gc, f.gamma, g_ret, f.t_abs, t_loss)?;
                dorfman_currents(&p)
            }
            SweepModel::Creatore => {
                let gx = f.gamma_x.unwrap_or(f.gamma);
                let p = PhotocellParams::from_gaps(f.omega_abs, omega_rc, gh, gx, gc, f.gamma, g_ret, f.t_abs, t_loss)?;
                creatore_currents(&p)
            }
        }
    }

    fn violates(&self, x: f64) -> Result<bool> {
        Ok(self.evaluate(x)?.verdict == Verdict::Violation)
    }
}

/// Bisects the verdict change between `a` (where `violates == at_a`) and `b`.
fn refine(spec: &SweepSpec, mut a: f64, mut b: f64, at_a: bool) -> Result<f64> {
    while (b - a).abs() > BISECTION_TOL {
        let mid = 0.5 * (a + b);
        if spec.violates(mid)? == at_a {
            a = mid;
        } else {
            b = mid;
        }
    }
    Ok(0.5 * (a + b))
}

/// Evaluates every grid point (in parallel, results kept in grid order) and
/// collects the maximal runs of violating points. Interior run boundaries are
/// refined by bisection; runs touching the grid ends stop at the end point.
pub fn run_sweep(spec: &SweepSpec) -> Result<SweepTable> {
    spec.validate()?;
    let reports: Vec<ThermoReport> = spec
        .grid
        .par_iter()
        .map(|&x| spec.evaluate(x))
        .collect::<Result<_>>()?;
    let bad: Vec<bool> = reports.iter().map(|r| r.verdict == Verdict::Violation).collect();
    let g = &spec.grid;
    let mut violations = Vec::new();
    let mut i = 0;
    while i < g.len() {
        if !bad[i] {
            i += 1;
            continue;
        }
        let start = i;
        while i + 1 < g.len() && bad[i + 1] {
            i += 1;
        }
        let lo = if start == 0 { g[0] } else { refine(spec, g[start - 1], g[start], false)? };
        let hi = if i + 1 == g.len() { g[i] } else { refine(spec, g[i], g[i + 1], true)? };
        violations.push((lo, hi));
        i += 1;
    }
    let rows = g
        .iter()
        .zip(reports)
        .map(|(&axis, report)| SweepRow { axis, report })
        .collect();
    Ok(SweepTable {
        spec: spec.clone(),
        rows,
        violations,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PowerRow {
    /// `T_loss/T_abs`
    pub ratio: f64,
    pub p_dec: f64,
    pub p_ham: f64,
}

fn toy_at(p: &ToyParams, ratio: f64) -> Result<ToyParams> {
    let mut q = *p;
    q.t_loss = ratio * p.t_abs;
    q.validate_weak_coupling()?;
    Ok(q)
}

/// Power of both transfer schemes along `T_loss/T_abs`; `p.t_loss` is ignored.
pub fn power_comparison(p: &ToyParams, temp_ratio_grid: &[f64]) -> Result<Vec<PowerRow>> {
    temp_ratio_grid
        .iter()
        .map(|&ratio| {
            let q = toy_at(p, ratio)?;
            Ok(PowerRow {
                ratio,
                p_dec: toy_decay_report(&q)?.power,
                p_ham: toy_ham_report(&q)?.power,
            })
        })
        .collect()
}

/// Temperature ratio in `[lo, hi]` where the Hamiltonian-scheme power
/// changes sign, by bisection to `tol`.
pub fn ham_power_zero(p: &ToyParams, lo: f64, hi: f64, tol: f64) -> Result<f64> {
    let sign = |r: f64| -> Result<f64> { Ok(toy_ham_report(&toy_at(p, r)?)?.power.signum()) };
    let (mut a, mut b) = (lo, hi);
    let sa = sign(a)?;
    if sa == sign(b)? || sa == 0.0 {
        return Err(Error::invalid("temperature ratio bracket", "one that straddles the power sign change"));
    }
    while b - a > tol {
        let mid = 0.5 * (a + b);
        let s = sign(mid)?;
        if s == 0.0 {
            return Ok(mid);
        }
        if s == sa {
            a = mid;
        } else {
            b = mid;
        }
    }
    Ok(0.5 * (a + b))
}
