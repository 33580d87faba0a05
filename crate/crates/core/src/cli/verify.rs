//! Numerical oracle: integrated precession against the closed form.

use std::fmt;
use std::io::Write;
use std::str::FromStr;

use rayon::prelude::*;
use serde::Serialize;

use crate::analytic::perihelion_shift;
use crate::error::{Error, Result};
use crate::integrator::{measure_precession, MIN_ECCENTRICITY};
use crate::model::{NCParams, OrbitElements};

/// Which deformation carries the target shift of a case.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum CaseKind {
    Theta,
    Eta,
    /// Both deformations active with opposing signs; the θ part carries
    /// 5/4 of the target and the η part removes 1/4 of it.
    Mixed,
}

impl FromStr for CaseKind {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "theta" => Ok(CaseKind::Theta),
            "eta" => Ok(CaseKind::Eta),
            "mixed" => Ok(CaseKind::Mixed),
            other => Err(Error::invalid(
                "verify_kinds",
                format!("`{other}` is not theta, eta or mixed"),
            )),
        }
    }
}

impl fmt::Display for CaseKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            CaseKind::Theta => "theta",
            CaseKind::Eta => "eta",
            CaseKind::Mixed => "mixed",
        })
    }
}

impl CaseKind {
    fn shares(self) -> (f64, f64) {
        match self {
            CaseKind::Theta => (1.0, 0.0),
            CaseKind::Eta => (0.0, 1.0),
            CaseKind::Mixed => (1.25, 0.25),
        }
    }

    /// Parameters whose analytic shift has magnitude 2π·ε in units a = k = m = 1.
    /// θ-only cases advance, η-only cases regress, mixed cases advance.
    pub fn params(self, e: f64, eps: f64) -> Result<NCParams> {
        let el = OrbitElements::new(1.0, e, 1.0, 1.0)?;
        let target = 2.0 * std::f64::consts::PI * eps;
        let per_theta = perihelion_shift(&el, &NCParams::new(1.0, 0.0, 1.0)?)?;
        let per_eta = -perihelion_shift(&el, &NCParams::new(0.0, 1.0, 1.0)?)?;
        let (ts, es) = self.shares();
        NCParams::new(ts * target / per_theta, es * target / per_eta, 1.0)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct VerifyGrid {
    pub e: Vec<f64>,
    pub eps: Vec<f64>,
    pub kinds: Vec<CaseKind>,
    pub n_orbits: usize,
}

impl Default for VerifyGrid {
    fn default() -> Self {
        VerifyGrid {
            e: vec![0.1, 0.2056, 0.5],
            eps: vec![1e-6, 1e-5, 1e-4, 1e-3],
            kinds: vec![CaseKind::Theta, CaseKind::Eta, CaseKind::Mixed],
            n_orbits: 40,
        }
    }
}

impl VerifyGrid {
    pub fn validate(&self) -> Result<()> {
        if self.e.is_empty() || self.eps.is_empty() || self.kinds.is_empty() {
            return Err(Error::invalid("verify_e", "verification grid is empty"));
        }
        for &e in &self.e {
            if !(0.0..1.0).contains(&e) {
                return Err(Error::invalid("verify_e", format!("{e} is not in [0, 1)")));
            }
        }
        for &eps in &self.eps {
            if !(eps > 0.0 && eps < 0.01) {
                return Err(Error::invalid("verify_eps", format!("{eps} is not in (0, 0.01)")));
            }
        }
        if self.n_orbits < 2 {
            return Err(Error::invalid("verify_n_orbits", "needs at least 2 revolutions"));
        }
        Ok(())
    }

    /// Cases in row-major order: e, then ε, then kind.
    pub fn cases(&self) -> Vec<(f64, f64, CaseKind)> {
        let mut out = Vec::new();
        for &e in &self.e {
            for &eps in &self.eps {
                for &kind in &self.kinds {
                    out.push((e, eps, kind));
                }
            }
        }
        out
    }
}

/// Allowed relative discrepancy for a case of magnitude ε.
pub fn budget(eps: f64) -> f64 {
    0.01 + 10.0 * eps
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Pass,
    Fail,
    Skipped,
}

impl fmt::Display for Status {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Status::Pass => "pass",
            Status::Fail => "fail",
            Status::Skipped => "skipped",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct VerifyRow {
    pub e: f64,
    pub eps: f64,
    pub kind: CaseKind,
    pub theta_sq: f64,
    pub eta_sq: f64,
    pub analytic: f64,
    pub measured: Option<f64>,
    pub rel_discrepancy: Option<f64>,
    pub budget: f64,
    pub status: Status,
    pub note: String,
}

/// Signature of the closed form under test; injectable so the harness itself can be tested.
pub type AnalyticFn = fn(&OrbitElements, &NCParams) -> Result<f64>;

fn run_case(e: f64, eps: f64, kind: CaseKind, n_orbits: usize, tol: f64, analytic: AnalyticFn) -> VerifyRow {
    let mut row = VerifyRow {
        e,
        eps,
        kind,
        theta_sq: f64::NAN,
        eta_sq: f64::NAN,
        analytic: f64::NAN,
        measured: None,
        rel_discrepancy: None,
        budget: budget(eps),
        status: Status::Fail,
        note: String::new(),
    };
    if e <= MIN_ECCENTRICITY {
        row.status = Status::Skipped;
        row.note = format!("e = {e} has no well-defined perihelion");
        return row;
    }
    let outcome = (|| -> Result<(f64, f64)> {
        let nc = kind.params(e, eps)?;
        row.theta_sq = nc.theta_sq;
        row.eta_sq = nc.eta_sq;
        let el = OrbitElements::new(1.0, e, 1.0, 1.0)?;
        let an = analytic(&el, &nc)?;
        row.analytic = an;
        let meas = measure_precession(&el, &nc, n_orbits, tol)?;
        Ok((an, meas.shift_per_rev))
    })();
    match outcome {
        Ok((an, meas)) => {
            let rel = (meas - an).abs() / an.abs();
            row.measured = Some(meas);
            row.rel_discrepancy = Some(rel);
            row.status = if rel <= row.budget { Status::Pass } else { Status::Fail };
        }
        Err(err) => row.note = err.to_string(),
    }
    row
}

/// Runs every case of the grid in parallel; rows come back in grid order.
pub fn run_grid(grid: &VerifyGrid, tol: f64, analytic: AnalyticFn) -> Vec<VerifyRow> {
    grid.cases()
        .into_par_iter()
        .map(|(e, eps, kind)| run_case(e, eps, kind, grid.n_orbits, tol, analytic))
        .collect()
}

pub fn all_passed(rows: &[VerifyRow]) -> bool {
    rows.iter().all(|r| r.status != Status::Fail)
}

fn opt(v: Option<f64>) -> String {
    v.map(|x| format!("{x:e}")).unwrap_or_default()
}

pub fn write_csv<W: Write>(rows: &[VerifyRow], mut out: W) -> std::io::Result<()> {
    writeln!(
        out,
        "e,eps,kind,theta_sq,eta_sq,analytic,measured,rel_discrepancy,budget,status,note"
    )?;
    for r in rows {
        writeln!(
            out,
            "{},{:e},{},{:e},{:e},{:e},{},{},{:e},{},{}",
            r.e,
            r.eps,
            r.kind,
            r.theta_sq,
            r.eta_sq,
            r.analytic,
            opt(r.measured),
            opt(r.rel_discrepancy),
            r.budget,
            r.status,
            r.note.replace(',', ";")
        )?;
    }
    Ok(())
}

pub fn summary_table(rows: &[VerifyRow]) -> String {
    let mut s = format!(
        "{:>7} {:>8} {:>6} {:>14} {:>14} {:>10} {:>9} {}\n",
        "e", "eps", "kind", "analytic", "measured", "rel.err", "budget", "status"
    );
    for r in rows {
        s += &format!(
            "{:>7} {:>8.0e} {:>6} {:>14.6e} {:>14} {:>10} {:>9.3e} {}\n",
            r.e,
            r.eps,
            r.kind,
            r.analytic,
            r.measured.map(|m| format!("{m:.6e}")).unwrap_or_else(|| "-".into()),
            r.rel_discrepancy
                .map(|m| format!("{m:.3e}"))
                .unwrap_or_else(|| "-".into()),
            r.budget,
            r.status
        );
    }
    let failed = rows.iter().filter(|r| r.status == Status::Fail).count();
    let skipped = rows.iter().filter(|r| r.status == Status::Skipped).count();
    s += &format!("{} cases, {} failed, {} skipped\n", rows.len(), failed, skipped);
    s
}
