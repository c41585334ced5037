use std::path::{Path, PathBuf};

use stormrisk::covariate::{fit_covariate, Coefficients, CovariateBlock, CovariateData, PerBlockData, COEFFICIENT_NAMES};
use stormrisk::declustering::{BlockRule, EventSet};
use stormrisk::evt::{fit_stationary, NhppParams, ThresholdedData};
use stormrisk::io::{self, SiteRow};
use stormrisk::numerics::stats;
use stormrisk::random_effects::{fit_bayes, initial_model, EffectDims, McmcConfig, Priors, RegionalData};
use stormrisk::{Error, Result};

use crate::artifact::{self, matrix_rows, stem, BayesArtifact, CovariateArtifact, FitArtifact, StationaryArtifact};
use crate::config::parse_list;
use crate::{Ctx, FitArgs};

pub fn parse_effects(raw: &str) -> Result<EffectDims> {
    let names: Vec<String> = parse_list("effects", raw)?;
    let mut dims = EffectDims { mu: false, sigma: false, xi: false };
    for n in &names {
        match n.as_str() {
            "mu" => dims.mu = true,
            "sigma" => dims.sigma = true,
            "xi" => dims.xi = true,
            other => {
                return Err(Error::InvalidInput(format!(
                    "unknown effect `{other}` (expected mu, sigma or xi)"
                )))
            }
        }
    }
    if dims.count() == 0 {
        return Err(Error::InvalidInput("at least one parameter needs random effects".into()));
    }
    Ok(dims)
}

fn parse_free(raw: &str) -> Result<[bool; 6]> {
    let names: Vec<String> = parse_list("free", raw)?;
    let mut free = [false; 6];
    for n in &names {
        let i = COEFFICIENT_NAMES.iter().position(|c| c == n).ok_or_else(|| {
            Error::InvalidInput(format!("unknown coefficient `{n}` (expected one of {})", COEFFICIENT_NAMES.join(",")))
        })?;
        free[i] = true;
    }
    Ok(free)
}

/// The site-table row for an events file: by explicit name, by file stem, or
/// the only row.
fn site_for(rows: &[SiteRow], name: Option<&str>, events: &Path) -> Result<SiteRow> {
    let wanted = name.map(str::to_string).unwrap_or_else(|| stem(events));
    if let Some(r) = rows.iter().find(|r| r.site == wanted) {
        return Ok(r.clone());
    }
    if name.is_none() && rows.len() == 1 {
        return Ok(rows[0].clone());
    }
    Err(Error::InvalidInput(format!("site `{wanted}` is not in the site table")))
}

fn load_events(path: &Path, row: &SiteRow) -> Result<EventSet> {
    io::read_events_file(path, row.threshold, 1, row.blocks())
}

/// Rough starting point: scale from the spread of exceedances, location so the
/// threshold is crossed at the observed rate.
fn stationary_start(es: &EventSet) -> NhppParams {
    let mags = es.magnitudes();
    let sd = if mags.len() > 1 { stats::std_dev(&mags) } else { 1.0 };
    let sd = if sd > 0.0 { sd } else { 1.0 };
    let rate = (mags.len().max(1) as f64) / es.n_blocks() as f64;
    NhppParams {
        mu: es.threshold() + sd * rate.ln(),
        sigma: sd,
        xi: 0.05,
    }
}

pub fn run(a: &FitArgs, ctx: &mut Ctx) -> Result<u8> {
    let model = ctx.r.require("model", a.model.clone())?;
    let events: Vec<PathBuf> = if a.events.is_empty() {
        match ctx.r.opt::<String>("events", None)? {
            Some(raw) => parse_list::<String>("events", &raw)?.into_iter().map(PathBuf::from).collect(),
            None => Vec::new(),
        }
    } else {
        let joined = a.events.iter().map(|p| p.display().to_string()).collect::<Vec<_>>().join(",");
        ctx.r.record("events", joined);
        a.events.clone()
    };
    if events.is_empty() {
        return Err(Error::InvalidInput("`--events` is required".into()));
    }
    let sites = io::read_sites_file(&ctx.r.require_path("sites", a.sites.clone())?)?;
    let site = ctx.r.opt("site", a.site.clone())?;
    if model != "regional" && events.len() != 1 {
        return Err(Error::InvalidInput(format!("a {model} fit takes exactly one events file")));
    }
    match model.as_str() {
        "stationary" => stationary(ctx, &events[0], &site_for(&sites, site.as_deref(), &events[0])?),
        "covariate" => covariate(a, ctx, &events[0], &site_for(&sites, site.as_deref(), &events[0])?),
        "random-effects" => {
            let row = site_for(&sites, site.as_deref(), &events[0])?;
            bayes(a, ctx, vec![row], &events, false)
        }
        "regional" => {
            let rows = if events.len() == sites.len() && events.iter().any(|e| !sites.iter().any(|r| r.site == stem(e))) {
                sites.clone()
            } else {
                events
                    .iter()
                    .map(|e| site_for(&sites, None, e))
                    .collect::<Result<Vec<_>>>()?
            };
            bayes(a, ctx, rows, &events, true)
        }
        other => Err(Error::InvalidInput(format!(
            "unknown model `{other}` (expected stationary, covariate, random-effects or regional)"
        ))),
    }
}

fn stationary(ctx: &mut Ctx, events: &Path, row: &SiteRow) -> Result<u8> {
    let es = load_events(events, row)?;
    let data = ThresholdedData::new(es.magnitudes(), row.threshold, es.n_blocks() as f64)?;
    let fit = fit_stationary(&data, &stationary_start(&es))?;
    let mut code = 0;
    if fit.has_degenerate_hessian() {
        ctx.warn("the observed information is not positive definite; no covariance");
        code = 4;
    }
    let art = FitArtifact::Stationary(StationaryArtifact {
        site: row.site.clone(),
        threshold: row.threshold,
        block_labels: es.blocks().to_vec(),
        estimate: fit.estimate,
        covariance: fit.covariance.as_ref().map(matrix_rows),
        nll: fit.nll,
    });
    artifact::write(&ctx.output("fit.json")?, &art)?;
    Ok(code)
}

fn covariate(a: &FitArgs, ctx: &mut Ctx, events: &Path, row: &SiteRow) -> Result<u8> {
    let es = load_events(events, row)?;
    let cov_path = ctx.r.require_path("covariates", a.covariates.clone())?;
    let rule: BlockRule = ctx.r.get("block-rule", a.block_rule.clone(), "water-year".into())?.parse()?;
    let free = parse_free(&ctx.r.get("free", a.free.clone(), "mu0,mu1,sigma0,xi0".into())?)?;
    let s = io::read_covariates_file(&cov_path, rule)
        .map_err(|e| Error::InvalidInput(format!("{}: {e}", cov_path.display())))?;
    let mut blocks = Vec::new();
    for (label, mags) in es.by_block() {
        let covariate = *s
            .get(&label)
            .ok_or_else(|| Error::InvalidInput(format!("no covariate for block {label}")))?;
        blocks.push(CovariateBlock {
            covariate,
            weight: 1.0,
            magnitudes: mags,
        });
    }
    let covariates: Vec<f64> = blocks.iter().map(|b| b.covariate).collect();
    let data = CovariateData::PerBlock(PerBlockData {
        blocks,
        threshold: row.threshold,
    });
    let init = Coefficients::stationary(&stationary_start(&es));
    let fit = fit_covariate(&data, &init, free)?;
    let mut code = 0;
    if fit.covariance.is_none() {
        ctx.warn("the observed information is not positive definite; no covariance");
        code = 4;
    }
    let art = FitArtifact::Covariate(CovariateArtifact {
        site: row.site.clone(),
        threshold: row.threshold,
        block_labels: es.blocks().to_vec(),
        covariates,
        coefficients: fit.coefficients,
        free,
        covariance: fit.covariance.as_ref().map(matrix_rows),
        nll: fit.nll,
    });
    artifact::write(&ctx.output("fit.json")?, &art)?;
    Ok(code)
}

fn bayes(a: &FitArgs, ctx: &mut Ctx, rows: Vec<SiteRow>, events: &[PathBuf], regional: bool) -> Result<u8> {
    let dims = parse_effects(&ctx.r.get("effects", a.effects.clone(), "mu,sigma,xi".into())?)?;
    let defaults = McmcConfig::default();
    let mcmc = McmcConfig {
        iterations: ctx.r.get("iterations", a.iterations, defaults.iterations)?,
        burn_in: ctx.r.get("burn-in", a.burn_in, defaults.burn_in)?,
        thin: ctx.r.get("thin", a.thin, defaults.thin)?,
        seed: ctx.seed,
        target_acceptance: ctx.r.get("target-acceptance", a.target_acceptance, defaults.target_acceptance)?,
    };
    let sets = rows
        .iter()
        .zip(events)
        .map(|(row, e)| load_events(e, row))
        .collect::<Result<Vec<_>>>()?;
    let data = RegionalData::from_event_sets(&sets);
    let init = initial_model(&data, dims)?;
    let priors = Priors::for_data(&data);
    let post = fit_bayes(&data, &init, &priors, &mcmc)?;
    let mut code = 0;
    let stuck = post.stuck_components();
    if !stuck.is_empty() {
        let list = stuck.join(", ");
        ctx.warn(format!("chain stuck: acceptance below 1% for {list}"));
        code = 4;
    }
    io::write_posterior_file(&ctx.output("posterior.csv")?, &post)?;
    let body = BayesArtifact {
        sites: rows.iter().map(|r| r.site.clone()).collect(),
        thresholds: rows.iter().map(|r| r.threshold).collect(),
        block_labels: post.block_labels.clone(),
        dims,
        priors,
        mcmc,
        acceptance: post.acceptance.clone(),
        draws: post.draws.len(),
        posterior: "posterior.csv".into(),
    };
    let art = if regional {
        FitArtifact::Regional(body)
    } else {
        FitArtifact::RandomEffects(body)
    };
    artifact::write(&ctx.output("fit.json")?, &art)?;
    Ok(code)
}
