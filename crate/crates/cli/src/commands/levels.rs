use stormrisk::covariate::{kde, return_level_covariate};
use stormrisk::evt::{fit_block_maxima, return_level_stationary, NhppParams};
use stormrisk::io;
use stormrisk::random_effects::{block_return_level, marginal_return_level, DEFAULT_HERMITE_NODES};
use stormrisk::{Error, Result};

use crate::artifact::{self, FitArtifact};
use crate::{Ctx, ReturnLevelArgs};

pub const DEFAULT_PERIODS: &str = "2,5,10,20,50,100,200,500,1000";

pub fn run(a: &ReturnLevelArgs, ctx: &mut Ctx) -> Result<u8> {
    let fit_path = ctx.r.require_path("fit", a.fit.clone())?;
    let periods: Vec<f64> = ctx.r.list("T", a.periods.clone(), DEFAULT_PERIODS)?;
    if periods.is_empty() || periods.iter().any(|t| !(*t > 1.0)) {
        return Err(Error::InvalidInput("every return period must exceed 1".into()));
    }
    let mode = ctx.r.get("mode", a.mode.clone(), "marginal".into())?;
    if mode != "marginal" && mode != "block" {
        return Err(Error::InvalidInput(format!("unknown mode `{mode}` (expected block or marginal)")));
    }
    let block_mode = mode == "block";
    let iid = match ctx.r.path("compare-iid-gev", a.compare_iid_gev.clone())? {
        Some(p) => {
            let maxima: Vec<f64> = io::read_block_maxima_file(&p)?.into_iter().map(|m| m.1).collect();
            let fit = fit_block_maxima(&maxima)?;
            Some(fit.estimate)
        }
        None => None,
    };
    let site = ctx.r.opt("site", a.site.clone())?;
    let art = artifact::read(&fit_path)?;

    // (block label, level per period); `None` labels the marginal level
    let mut rows: Vec<(Option<i64>, Vec<f64>)> = Vec::new();
    let levels = |f: &dyn Fn(f64) -> Result<f64>| periods.iter().map(|&t| f(t)).collect::<Result<Vec<_>>>();
    match &art {
        FitArtifact::Stationary(s) => {
            let z = levels(&|t| Ok(return_level_stationary(t, &s.estimate)))?;
            if block_mode {
                rows.extend(s.block_labels.iter().map(|b| (Some(*b), z.clone())));
            } else {
                rows.push((None, z));
            }
        }
        FitArtifact::Covariate(c) => {
            if block_mode {
                for (b, s) in c.block_labels.iter().zip(&c.covariates) {
                    let p = c.coefficients.at(*s);
                    rows.push((Some(*b), levels(&|t| Ok(return_level_stationary(t, &p)))?));
                }
            } else {
                let h = kde(&c.covariates)?;
                rows.push((None, levels(&|t| return_level_covariate(t, &c.coefficients, &h))?));
            }
        }
        FitArtifact::RandomEffects(b) | FitArtifact::Regional(b) => {
            let d = b.site_index(site.as_deref())?;
            let post = b.load_posterior(&fit_path)?.canonical();
            let model = post.mean_model().site(d);
            if block_mode {
                for (label, r) in post.block_labels.iter().zip(post.effect_means()) {
                    rows.push((Some(*label), levels(&|t| block_return_level(t, &model, &r))?));
                }
            } else {
                rows.push((None, levels(&|t| marginal_return_level(t, &model, DEFAULT_HERMITE_NODES))?));
            }
        }
    }

    let path = ctx.output("return_levels.csv")?;
    write(&path, &periods, &rows, block_mode, iid.as_ref())?;
    Ok(0)
}

fn write(
    path: &std::path::Path,
    periods: &[f64],
    rows: &[(Option<i64>, Vec<f64>)],
    block_mode: bool,
    iid: Option<&NhppParams>,
) -> Result<()> {
    let mut w = csv::Writer::from_path(path)?;
    let mut header = vec!["T"];
    if block_mode {
        header.push("block");
    }
    header.push("z_T");
    if iid.is_some() {
        header.push("z_T_iid_gev");
    }
    w.write_record(&header)?;
    for (k, t) in periods.iter().enumerate() {
        for (label, z) in rows {
            let mut rec = vec![t.to_string()];
            if let Some(b) = label {
                rec.push(b.to_string());
            }
            rec.push(z[k].to_string());
            if let Some(p) = iid {
                rec.push(return_level_stationary(*t, p).to_string());
            }
            w.write_record(&rec)?;
        }
    }
    w.flush()?;
    Ok(())
}
