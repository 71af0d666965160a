use coherence_core::detection::{counting_rate_terms, enumerate_contributions, select_ordering};
use coherence_core::fock::FockOracle;
use coherence_core::gaussian::{g3_x_spec, g3_y_spec, pair_covariance, unnormalized_g3};
use coherence_core::{normalized_g3, G3Kind, G3Weights};
use rayon::prelude::*;

use crate::config::RunConfig;
use crate::error::CliError;
use crate::format::{csv, sci};

/// Command output plus an optional failure to report after it is written.
pub struct Report {
    pub body: String,
    pub alarm: Option<CliError>,
}

impl From<String> for Report {
    fn from(body: String) -> Self {
        Self { body, alarm: None }
    }
}

pub fn eig(cfg: &RunConfig) -> Result<Report, CliError> {
    let sys = cfg.system()?;
    let rows = sys
        .spectrum()
        .lambdas()
        .iter()
        .enumerate()
        .map(|(i, l)| vec![i.to_string(), sci(l.re), sci(l.im)]);
    Ok(csv("index,re,im", rows).into())
}

pub fn covariance(cfg: &RunConfig, tau: f64) -> Result<Report, CliError> {
    if !(tau.is_finite() && tau >= 0.0) {
        return Err(CliError::Usage(format!(
            "--tau must be finite and nonnegative, got {tau}"
        )));
    }
    let sys = cfg.system()?;
    let c = pair_covariance(&sys, tau, 0.0);
    let mut rows = Vec::new();
    for i in 0..c.rows() {
        for j in 0..c.cols() {
            rows.push(vec![i.to_string(), j.to_string(), sci(c[(i, j)].re), sci(c[(i, j)].im)]);
        }
    }
    Ok(csv("row,col,re,im", rows).into())
}

pub fn g3(cfg: &RunConfig, kind: G3Kind) -> Result<Report, CliError> {
    let sys = cfg.system()?;
    let weights = G3Weights::default_for(&sys)?;
    let mut points = Vec::new();
    for &t1 in &cfg.grid.tau1.values() {
        for &t2 in &cfg.grid.tau2.values() {
            points.push((t1, t2));
        }
    }
    let values: Vec<_> = points
        .par_iter()
        .map(|&(t1, t2)| normalized_g3(kind, &sys, &weights, t1, t2))
        .collect();
    let mut rows = Vec::with_capacity(points.len());
    for (&(t1, t2), v) in points.iter().zip(values) {
        rows.push((t1, t2, v?));
    }
    rows.sort_by(|a, b| a.0.total_cmp(&b.0).then(a.1.total_cmp(&b.1)));
    Ok(csv(
        "tau1,tau2,g3",
        rows.into_iter().map(|(t1, t2, v)| vec![sci(t1), sci(t2), sci(v)]),
    )
    .into())
}

pub fn gating(cfg: &RunConfig) -> Result<Report, CliError> {
    let plan = cfg.plan()?;
    let ordering = select_ordering(&plan)?;
    let terms = enumerate_contributions(&plan, cfg.distinguishable)?;
    let mut out = format!("ordering: {ordering}\ncontributions: {}\n", terms.len());
    for t in &terms {
        let mark = if t.survives_counting_rate { "rate" } else { "----" };
        out.push_str(&format!("  [{mark}] {t}\n"));
    }
    let survivors: Vec<String> = counting_rate_terms(&plan, cfg.distinguishable)?
        .iter()
        .map(|t| t.class.to_string())
        .collect();
    out.push_str(&format!("counting rate: {}\n", survivors.join(" ")));
    Ok(out.into())
}

pub fn terms(cfg: &RunConfig) -> Result<Report, CliError> {
    let plan = cfg.plan()?;
    let mut rows = Vec::new();
    for t in enumerate_contributions(&plan, cfg.distinguishable)? {
        rows.push(vec![
            t.class.to_string(),
            t.sign.to_string(),
            t.prefactor.to_string(),
            sci(t.coefficient(&cfg.efficiencies)?),
            t.survives_counting_rate.to_string(),
        ]);
    }
    Ok(csv("class,sign,prefactor,coefficient,counting_rate", rows).into())
}

pub fn oracle_check(cfg: &RunConfig, kind: G3Kind) -> Result<Report, CliError> {
    let sys = cfg.system()?;
    let weights = G3Weights::default_for(&sys)?;
    let section = &cfg.oracle;
    if section.points.is_empty() {
        return Err(CliError::Config("oracle.points is empty".into()));
    }
    if !(section.max_relative_error > 0.0) {
        return Err(CliError::Config("oracle.max_relative_error must be positive".into()));
    }
    let oracle = FockOracle::new(&sys, &section.fock_config())?;
    let results: Vec<_> = section
        .points
        .par_iter()
        .map(|&(tau1, tau2)| -> Result<_, CliError> {
            let engine = unnormalized_g3(kind, &sys, &weights, tau1, tau2)?;
            let spec = match kind {
                G3Kind::X => g3_x_spec(&weights.r1, &weights.r2, &weights.r3, 0.0, tau2, tau1),
                G3Kind::Y => g3_y_spec(&weights.r1, &weights.r2, &weights.r3, 0.0, tau2, tau1),
            };
            let fock = oracle.multitime_correlation(&spec)?;
            Ok((tau1, tau2, engine.re, fock.re))
        })
        .collect();

    let mut rows = Vec::new();
    let mut breaches = Vec::new();
    for r in results {
        let (tau1, tau2, engine, fock) = r?;
        let scale = engine.abs().max(fock.abs());
        let rel = if scale > 0.0 {
            (engine - fock).abs() / fock.abs().max(f64::MIN_POSITIVE)
        } else {
            0.0
        };
        let ok = rel <= section.max_relative_error;
        if !ok {
            breaches.push(format!("({tau1}, {tau2}) deviates by {rel:.3e}"));
        }
        rows.push(vec![
            sci(tau1),
            sci(tau2),
            sci(engine),
            sci(fock),
            sci(rel),
            ok.to_string(),
        ]);
    }
    let alarm = (!breaches.is_empty()).then(|| {
        CliError::OracleTolerance(format!(
            "{} of {} points exceed relative tolerance {}: {}",
            breaches.len(),
            rows.len(),
            section.max_relative_error,
            breaches.join("; ")
        ))
    });
    Ok(Report {
        body: csv("tau1,tau2,engine,oracle,rel_error,within_tolerance", rows),
        alarm,
    })
}
