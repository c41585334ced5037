use stormrisk::covariate::{kde, Coefficients, CovariateDensity};
use stormrisk::io;
use stormrisk::risk::{
    default_t_star_grid, log_grid, risk_curve_cov, risk_measure_cov, risk_measure_re, BandOptions, RiskQuery,
    RiskStatus,
};
use stormrisk::{Error, Result};

use crate::artifact::{self, FitArtifact};
use crate::config::parse_list;
use crate::{Ctx, RiskArgs};

/// `a,b,c` or `lo:hi:n` for `n` log-spaced values.
pub fn parse_grid(raw: &str) -> Result<Vec<f64>> {
    let parts: Vec<&str> = raw.split(':').collect();
    match parts.len() {
        1 => parse_list("Tstar-grid", raw),
        3 => {
            let bad = || Error::InvalidInput(format!("`{raw}` is not a `lo:hi:n` grid"));
            let lo: f64 = parts[0].trim().parse().map_err(|_| bad())?;
            let hi: f64 = parts[1].trim().parse().map_err(|_| bad())?;
            let n: usize = parts[2].trim().parse().map_err(|_| bad())?;
            if !(lo > 0.0 && hi > lo && n >= 2) {
                return Err(bad());
            }
            Ok(log_grid(lo, hi, n))
        }
        _ => Err(Error::InvalidInput(format!("`{raw}` is neither a list nor a `lo:hi:n` grid"))),
    }
}

pub fn run(a: &RiskArgs, ctx: &mut Ctx) -> Result<u8> {
    let fit_path = ctx.r.require_path("fit", a.fit.clone())?;
    let t = ctx.r.require("t", a.t)?;
    let period = ctx.r.require("T", a.period)?;
    let grid = match ctx.r.opt("Tstar-grid", a.t_star_grid.clone())? {
        Some(raw) => parse_grid(&raw)?,
        None => {
            ctx.r.record("Tstar-grid", "1.5:1000:50");
            default_t_star_grid()
        }
    };
    let bands = BandOptions {
        draws: ctx.r.get("bands", a.bands, BandOptions::default().draws)?,
        seed: ctx.seed,
        ..Default::default()
    };
    let site = ctx.r.opt("site", a.site.clone())?;
    let query = RiskQuery::new(t, period, grid)?;
    let curve = match artifact::read(&fit_path)? {
        FitArtifact::Stationary(s) => {
            risk_curve_cov(&query, &Coefficients::stationary(&s.estimate), &CovariateDensity::point_mass(0.0))?
        }
        FitArtifact::Covariate(c) => {
            let h = kde(&c.covariates)?;
            let fit = c.fit()?;
            if bands.draws > 0 && fit.covariance.is_none() {
                ctx.warn("the fit has no covariance; bands are omitted");
            }
            risk_measure_cov(&query, &fit, &h, &bands)?
        }
        FitArtifact::RandomEffects(b) | FitArtifact::Regional(b) => {
            let d = b.site_index(site.as_deref())?;
            let post = b.load_posterior(&fit_path)?;
            risk_measure_re(&query, &post, d, &bands)?
        }
    };
    io::write_risk_curve_file(&ctx.output("risk_curve.csv")?, &curve)?;
    let undefined = curve.points.iter().filter(|p| p.status == RiskStatus::Undefined).count();
    if undefined == curve.points.len() {
        ctx.manifest.error = Some("the risk ratio is undefined at every T*".into());
        return Ok(3);
    }
    if undefined > 0 {
        ctx.warn(format!("the risk ratio is undefined at {undefined} T* values"));
    }
    Ok(0)
}
