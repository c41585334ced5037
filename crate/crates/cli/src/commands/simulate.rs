use std::path::PathBuf;

use stormrisk::covariate::Coefficients;
use stormrisk::evt::NhppParams;
use stormrisk::io::{self, SiteRow};
use stormrisk::random_effects::{EffectLaw, RandomEffectsModel, RegionalModel};
use stormrisk::simulation::{simulate_design, ModelSpec, SimDesign, ThresholdRule, REFERENCE_BETA, REFERENCE_SIGMA};
use stormrisk::{Error, Result};

use super::fit::parse_effects;
use crate::{Ctx, SimulateArgs};

fn design(a: &SimulateArgs, ctx: &mut Ctx) -> Result<SimDesign> {
    let model = ctx.r.get("model", a.model.clone(), "covariate".into())?;
    let sigma = ctx.r.get("sigma", a.sigma, REFERENCE_SIGMA)?;
    if !(sigma > 0.0) {
        return Err(Error::InvalidInput("--sigma must be positive".into()));
    }
    let c = Coefficients {
        mu0: ctx.r.get("mu0", a.mu0, 0.0)?,
        mu1: ctx.r.get("mu1", a.mu1, REFERENCE_BETA)?,
        sigma0: sigma.ln(),
        sigma1: ctx.r.get("sigma1", a.sigma1, 0.0)?,
        xi0: ctx.r.get("xi0", a.xi0, 0.2)?,
        xi1: ctx.r.get("xi1", a.xi1, 0.0)?,
    };
    let spec = match model.as_str() {
        "stationary" => ModelSpec::Stationary(NhppParams::new(c.mu0, sigma, c.xi0)?),
        "covariate" => ModelSpec::Covariate(c),
        "random-effects" | "regional" => {
            let dims = parse_effects(&ctx.r.get("effects", a.effects.clone(), "mu,sigma,xi".into())?)?;
            let k = dims.count();
            let rho: Vec<f64> = ctx.r.list("rho", a.rho.clone(), "")?;
            let rho = if rho.is_empty() { vec![0.0; k * (k - 1) / 2] } else { rho };
            if rho.len() != k * (k - 1) / 2 {
                return Err(Error::InvalidInput(format!(
                    "--rho needs {} correlations for {k} effects",
                    k * (k - 1) / 2
                )));
            }
            let law = EffectLaw::from_pairs(k, &rho)?;
            let mut c = c;
            // slopes of parameters without effects play no role
            for (on, slope) in [(dims.mu, &mut c.mu1), (dims.sigma, &mut c.sigma1), (dims.xi, &mut c.xi1)] {
                if !on {
                    *slope = 0.0;
                }
            }
            let single = RandomEffectsModel::new(c, dims, law)?;
            if model == "regional" {
                let n = ctx.r.get("sites", a.sites, 3)?;
                let offsets: Vec<f64> = ctx.r.list("site-offsets", a.site_offsets.clone(), "")?;
                let offsets = if offsets.is_empty() { vec![0.0; n] } else { offsets };
                if n == 0 || offsets.len() != n {
                    return Err(Error::InvalidInput(format!("--site-offsets needs {n} values")));
                }
                let mut m = RegionalModel::from_single(&single);
                m.intercepts = offsets.iter().map(|o| [c.mu0 + o, c.sigma0, c.xi0]).collect();
                ModelSpec::Regional(m)
            } else {
                ModelSpec::RandomEffects(single)
            }
        }
        other => {
            return Err(Error::InvalidInput(format!(
                "unknown model `{other}` (expected stationary, covariate, random-effects or regional)"
            )))
        }
    };
    let threshold = match ctx.r.opt("threshold", a.threshold)? {
        Some(u) => ThresholdRule::Fixed(u),
        None => ThresholdRule::CentralRate(ctx.r.get("rate", a.rate, 0.5)?),
    };
    let d = SimDesign {
        model: spec,
        n_blocks: ctx.r.get("blocks", a.blocks, 30)?,
        threshold,
        seed: ctx.seed,
        replicates: ctx.r.get("replicates", a.replicates, 1)?,
        first_block: ctx.r.get("first-block", a.first_block, 1)?,
    };
    if d.replicates == 0 {
        return Err(Error::InvalidInput("--replicates must be positive".into()));
    }
    d.validate()?;
    Ok(d)
}

pub fn run(a: &SimulateArgs, ctx: &mut Ctx) -> Result<u8> {
    let d = design(a, ctx)?;
    let reps = simulate_design(&d)?;
    let labels = d.block_labels();
    let mut empty = 0;
    for rep in &reps {
        // one replicate goes straight into the output directory
        let dir = if d.replicates == 1 { PathBuf::new() } else { PathBuf::from(format!("rep_{:03}", rep.index + 1)) };
        let name = |f: &str| dir.join(f).display().to_string();
        let mut rows = Vec::new();
        for (s, site) in rep.sites.iter().enumerate() {
            let site_name = format!("site{}", s + 1);
            empty += site.events.is_empty() as usize;
            io::write_events_file(&ctx.output(&name(&format!("{site_name}.csv")))?, &site.events)?;
            io::write_block_maxima_file(&ctx.output(&name(&format!("{site_name}_maxima.csv")))?, &labels, &site.block_maxima)?;
            rows.push(SiteRow {
                site: site_name,
                threshold: site.threshold,
                first_year: labels[0],
                last_year: *labels.last().unwrap(),
            });
        }
        io::write_sites_file(&ctx.output(&name("sites.csv"))?, &rows)?;
        if let Some(s) = &rep.covariates {
            io::write_covariates_file(&ctx.output(&name("covariates.csv"))?, &labels, s)?;
        }
        if let Some(r) = &rep.effects {
            let names: Vec<&str> = match &d.model {
                ModelSpec::RandomEffects(m) => effect_names(m.dims),
                ModelSpec::Regional(m) => effect_names(m.dims),
                _ => Vec::new(),
            };
            io::write_effects_file(&ctx.output(&name("effects.csv"))?, &labels, &names, r)?;
        }
    }
    if empty > 0 {
        ctx.warn(format!("{empty} simulated site records have no exceedances"));
    }
    Ok(0)
}

fn effect_names(dims: stormrisk::random_effects::EffectDims) -> Vec<&'static str> {
    const N: [&str; 3] = ["r_mu", "r_sigma", "r_xi"];
    dims.indices().into_iter().map(|i| N[i]).collect()
}
