//! Sweeps: BER vs Eb/N0, required Eb/N0 vs spectrum efficiency, and the
//! sidelobe study. Points run in parallel; results always come back in
//! config order.

use super::config::{Scheme, SimConfig};
use super::link::{build_partition, BerRecord, Link};
use crate::error::invalid;
use crate::spectrum::{self, BandScenario};
use crate::{coding, Result};
use rayon::prelude::*;
use serde::Serialize;
use std::io::Write;

/// Spectrum efficiency in bits/s/Hz, `L * (W/N) * log2(M) / (gamma * W)`.
/// `L = 1` gives the efficiency of the traditional single-stream system.
pub fn spectrum_efficiency(n_bins: usize, m_order: usize, n_clusters: usize, scenario: &BandScenario) -> Result<f64> {
    scenario.validate()?;
    let gamma = scenario.unoccupied_ratio();
    if !(gamma > 0.0) {
        return Err(invalid("unoccupied bandwidth ratio is zero"));
    }
    if n_bins == 0 || n_clusters == 0 {
        return Err(invalid("N and L must be positive"));
    }
    let bits = coding::bits_per_symbol(m_order)? as f64;
    let df = scenario.bin_spacing_hz(n_bins);
    Ok(n_clusters as f64 * df * bits / (gamma * scenario.bandwidth_hz))
}

fn points(cfg: &SimConfig) -> Vec<(Scheme, usize)> {
    cfg.schemes
        .iter()
        .flat_map(|&s| cfg.clusters.iter().map(move |&l| (s, l)))
        .collect()
}

/// Runs the BER sweep over `schemes x clusters x ebn0_grid_db`.
pub fn run_ber_sweep(cfg: &SimConfig) -> Result<Vec<BerRecord>> {
    run_ber_sweep_with(cfg, |_| {})
}

/// [`run_ber_sweep`] calling `on_record` as each point completes (in
/// completion order). The returned vector is in config order.
pub fn run_ber_sweep_with<F>(cfg: &SimConfig, on_record: F) -> Result<Vec<BerRecord>>
where
    F: Fn(&BerRecord) + Sync,
{
    cfg.validate()?;
    let links = points(cfg)
        .into_iter()
        .map(|(s, l)| Link::new(cfg, s, l))
        .collect::<Result<Vec<_>>>()?;
    let jobs: Vec<(&Link, f64)> = links
        .iter()
        .flat_map(|link| cfg.ebn0_grid_db.iter().map(move |&e| (link, e)))
        .collect();
    jobs.par_iter()
        .map(|(link, ebn0)| {
            let rec = link.simulate(*ebn0, &cfg.stop, None)?;
            on_record(&rec);
            Ok(rec)
        })
        .collect()
}

/// Required Eb/N0 for one `(scheme, L)` pair.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct EfficiencyRecord {
    pub scheme: Scheme,
    pub n_bins: usize,
    pub n_clusters: usize,
    pub eta_bits_per_s_per_hz: f64,
    pub target_ber: f64,
    /// Smallest Eb/N0 (to within the search tolerance) meeting the target;
    /// `None` when the target is not reached inside the search range.
    pub required_ebn0_db: Option<f64>,
    pub reached: bool,
}

/// Bisection for the Eb/N0 where `link`'s BER first drops to `target`.
///
/// Each evaluation stops at the configured error count or after
/// `4 * min_bit_errors / target` bits, whichever comes first; if the BER were
/// at the target the budget would hold about four times the required errors.
pub fn required_ebn0(link: &Link, cfg: &SimConfig) -> Result<Option<f64>> {
    let s = &cfg.search;
    let budget = ((4 * cfg.stop.min_bit_errors.max(1)) as f64 / s.target_ber).ceil() as u64;
    let meets = |ebn0: f64| -> Result<bool> {
        let r = link.simulate(ebn0, &cfg.stop, Some(budget))?;
        Ok(r.ber <= s.target_ber)
    };
    if !meets(s.hi_db)? {
        return Ok(None);
    }
    if meets(s.lo_db)? {
        return Ok(Some(s.lo_db));
    }
    let (mut lo, mut hi) = (s.lo_db, s.hi_db);
    while hi - lo > s.tolerance_db {
        let mid = 0.5 * (lo + hi);
        if meets(mid)? {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    Ok(Some(hi))
}

/// Required Eb/N0 at the target BER for every `(scheme, L)` of `cfg`,
/// paired with its spectrum efficiency.
pub fn run_efficiency_study(cfg: &SimConfig) -> Result<Vec<EfficiencyRecord>> {
    cfg.validate()?;
    points(cfg)
        .par_iter()
        .map(|&(scheme, l)| {
            let link = Link::new(cfg, scheme, l)?;
            let req = required_ebn0(&link, cfg)?;
            Ok(EfficiencyRecord {
                scheme,
                n_bins: cfg.n_bins,
                n_clusters: l,
                eta_bits_per_s_per_hz: spectrum_efficiency(cfg.n_bins, cfg.m_order(), l, &cfg.scenario)?,
                target_ber: cfg.search.target_ber,
                required_ebn0_db: req,
                reached: req.is_some(),
            })
        })
        .collect()
}

/// Largest sidelobes of both schemes for one `L`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SidelobeRecord {
    pub n_bins: usize,
    pub n_clusters: usize,
    pub trials: usize,
    /// Continuous allocation, largest real sidelobe.
    pub beta_continuous: f64,
    pub beta_continuous_magnitude: f64,
    /// Best random partition out of `trials`, largest real sidelobe.
    pub beta_min_random: f64,
    pub beta_min_random_magnitude: f64,
    pub best_trial: usize,
}

/// Sidelobe study over `cfg.clusters` with `cfg.beta_trials` random draws.
pub fn run_sidelobe_study(cfg: &SimConfig) -> Result<Vec<SidelobeRecord>> {
    cfg.validate()?;
    let avail = cfg.availability()?;
    cfg.clusters
        .iter()
        .map(|&l| {
            let cont = spectrum::partition_continuous(&avail, l)?;
            let (bc, bcm) = spectrum::largest_sidelobes(&cont);
            let search = spectrum::estimate_beta_min(&avail, l, cfg.beta_trials, crate::seed::derive(cfg.seed, &[l as u64]))?;
            let (_, brm) = spectrum::largest_sidelobes(&search.best);
            Ok(SidelobeRecord {
                n_bins: cfg.n_bins,
                n_clusters: l,
                trials: cfg.beta_trials,
                beta_continuous: bc,
                beta_continuous_magnitude: bcm,
                beta_min_random: search.beta_min,
                beta_min_random_magnitude: brm,
                best_trial: search.best_trial,
            })
        })
        .collect()
}

#[derive(Serialize)]
struct EfficiencyRow<'a> {
    scheme: Scheme,
    n_bins: usize,
    n_clusters: usize,
    eta_bits_per_s_per_hz: f64,
    target_ber: f64,
    required_ebn0_db: &'a str,
}

/// Writes records as CSV with a header row.
pub fn write_csv<T: Serialize, W: Write>(records: &[T], out: W) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    for r in records {
        w.serialize(r)?;
    }
    w.flush()?;
    Ok(())
}

/// Efficiency CSV; unreached targets are written as `not reached`.
pub fn write_efficiency_csv<W: Write>(records: &[EfficiencyRecord], out: W) -> Result<()> {
    let texts: Vec<String> = records
        .iter()
        .map(|r| r.required_ebn0_db.map_or_else(|| "not reached".to_string(), |v| v.to_string()))
        .collect();
    let rows: Vec<EfficiencyRow> = records
        .iter()
        .zip(&texts)
        .map(|(r, t)| EfficiencyRow {
            scheme: r.scheme,
            n_bins: r.n_bins,
            n_clusters: r.n_clusters,
            eta_bits_per_s_per_hz: r.eta_bits_per_s_per_hz,
            target_ber: r.target_ber,
            required_ebn0_db: t,
        })
        .collect();
    write_csv(&rows, out)
}

/// Partition used by the configured scheme, for export.
pub fn design_partition(cfg: &SimConfig, scheme: Scheme, n_clusters: usize) -> Result<spectrum::ClusterPartition> {
    cfg.validate()?;
    build_partition(cfg, &cfg.availability()?, scheme, n_clusters)
}
