use stormrisk::declustering::{decluster, interarrival_pp, quantile_threshold, BandConfig, BlockRule};
use stormrisk::io::{self, SiteRow};
use stormrisk::{Error, Result};

use crate::artifact::stem;
use crate::{Ctx, DeclusterArgs};

pub fn run(a: &DeclusterArgs, ctx: &mut Ctx) -> Result<u8> {
    let input = ctx.r.require_path("input", a.input.clone())?;
    // a threshold mode given on the command line overrides either mode in the file
    let flagged = a.threshold.is_some() || a.threshold_quantile.is_some();
    let (u_set, q_set) = if flagged {
        (a.threshold, a.threshold_quantile)
    } else {
        (ctx.r.opt("threshold", None)?, ctx.r.opt("threshold-quantile", None)?)
    };
    if u_set.is_some() && q_set.is_some() {
        return Err(Error::InvalidInput(
            "give either a threshold or a threshold quantile, not both".into(),
        ));
    }
    let w = ctx.r.get("run-length", a.run_length, 7)?;
    let rule: BlockRule = ctx.r.get("block-rule", a.block_rule.clone(), "water-year".into())?.parse()?;
    let site = ctx.r.get("site", a.site.clone(), stem(&input))?;
    let resamples = ctx.r.get("pp-resamples", a.pp_resamples, 1000)?;

    let ts = io::read_series_file(&input, rule)
        .map_err(|e| Error::InvalidInput(format!("{}: {e}", input.display())))?;
    let u = match u_set {
        Some(u) => u,
        None => {
            let q = q_set.unwrap_or(0.97);
            ctx.r.record("threshold-quantile", q);
            quantile_threshold(&ts, q)?
        }
    };
    ctx.r.record("threshold", u);
    let es = decluster(&ts, u, w)?;
    if es.is_empty() {
        eprintln!("no values exceed the threshold {u}; nothing written");
        ctx.manifest.error = Some(format!("no events above threshold {u}"));
        return Ok(3);
    }
    io::write_events_file(&ctx.output("events.csv")?, &es)?;
    let blocks = es.blocks();
    let row = SiteRow {
        site,
        threshold: u,
        first_year: blocks[0],
        last_year: *blocks.last().unwrap(),
    };
    io::write_sites_file(&ctx.output("sites.csv")?, &[row])?;
    let band = BandConfig {
        resamples,
        seed: ctx.seed,
        ..Default::default()
    };
    let pp = if es.len() >= 2 {
        interarrival_pp(&es, &band)?
    } else {
        ctx.warn("fewer than two events: the inter-arrival table is empty");
        Vec::new()
    };
    io::write_pp_file(&ctx.output("interarrival_pp.csv")?, &pp)?;
    eprintln!("{} events above {u} in {} blocks", es.len(), es.n_blocks());
    Ok(0)
}
