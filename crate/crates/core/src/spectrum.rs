//! Spectrum availability, cluster partitions and autocorrelation sidelobes.
//!
//! A band of width `W` is split into `N` bins of spacing `W/N`. Bin `k` is
//! centered at `(k + 0.5) * W / N` and is unoccupied (a spectrum hole) when
//! that center does not fall inside any occupied range. The unoccupied bins
//! are divided into `L` equal-size disjoint clusters, either as consecutive
//! blocks ([`partition_continuous`]) or from a seeded random permutation
//! ([`partition_random`]).

use crate::error::invalid;
use crate::{dsp, seed, Complex, Error, Result};
use num_bigint::BigUint;
use rand::seq::SliceRandom;
use rand::Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use std::f64::consts::PI;
use std::fmt::Write as _;

/// Default number of Monte-Carlo trials for the `beta_min` search.
pub const DEFAULT_BETA_TRIALS: usize = 10_000;

/// Upper bound on redraws when [`partition_random`] rejects partitions with
/// periodic clusters.
pub const MAX_PARTITION_REDRAWS: usize = 1_000_000;

/// Occupancy picture of a band: total width and occupied frequency ranges.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BandScenario {
    pub bandwidth_hz: f64,
    /// Half-open `[start, end)` ranges in Hz. May overlap.
    pub occupied_ranges_hz: Vec<(f64, f64)>,
}

impl BandScenario {
    /// 10 MHz band with licensed users at 2.5-3.75 MHz and 6.25-7.5 MHz
    /// (three quarters of the band unoccupied).
    pub fn reference() -> Self {
        Self {
            bandwidth_hz: 10e6,
            occupied_ranges_hz: vec![(2.5e6, 3.75e6), (6.25e6, 7.5e6)],
        }
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.bandwidth_hz.is_finite() && self.bandwidth_hz > 0.0) {
            return Err(invalid("bandwidth must be positive"));
        }
        for &(a, b) in &self.occupied_ranges_hz {
            if !(a.is_finite() && b.is_finite()) || a < 0.0 || b > self.bandwidth_hz || a >= b {
                return Err(invalid(format!(
                    "occupied range [{a}, {b}) is not inside [0, {})",
                    self.bandwidth_hz
                )));
            }
        }
        Ok(())
    }

    /// Occupied ranges merged into sorted disjoint intervals.
    pub fn merged_ranges(&self) -> Vec<(f64, f64)> {
        let mut ranges = self.occupied_ranges_hz.clone();
        ranges.sort_by(|x, y| x.0.total_cmp(&y.0));
        let mut merged: Vec<(f64, f64)> = Vec::with_capacity(ranges.len());
        for (a, b) in ranges {
            match merged.last_mut() {
                Some(last) if a <= last.1 => last.1 = last.1.max(b),
                _ => merged.push((a, b)),
            }
        }
        merged
    }

    /// The unoccupied bandwidth ratio `gamma = (W - occupied width) / W`.
    pub fn unoccupied_ratio(&self) -> f64 {
        let occupied: f64 = self.merged_ranges().iter().map(|(a, b)| b - a).sum();
        (self.bandwidth_hz - occupied) / self.bandwidth_hz
    }

    /// Bin spacing `W / N`.
    pub fn bin_spacing_hz(&self, n_bins: usize) -> f64 {
        self.bandwidth_hz / n_bins as f64
    }

    fn is_occupied(&self, f: f64) -> bool {
        self.occupied_ranges_hz.iter().any(|&(a, b)| f >= a && f < b)
    }
}

/// Binary availability mask `A` over `N` bins and the unoccupied set.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AvailabilityVector {
    mask: Vec<bool>,
    unoccupied: Vec<usize>,
}

impl AvailabilityVector {
    /// Builds the vector from a mask (`true` = unoccupied).
    pub fn from_mask(mask: Vec<bool>) -> Result<Self> {
        let unoccupied: Vec<usize> = mask
            .iter()
            .enumerate()
            .filter_map(|(k, &free)| free.then_some(k))
            .collect();
        if unoccupied.is_empty() {
            return Err(Error::NoSpectrumHoles);
        }
        Ok(Self { mask, unoccupied })
    }

    /// Builds the vector from the list of unoccupied bins.
    pub fn from_unoccupied(n_bins: usize, unoccupied: &[usize]) -> Result<Self> {
        let mut mask = vec![false; n_bins];
        for &k in unoccupied {
            if k >= n_bins {
                return Err(Error::BinOutOfRange { index: k, n_bins });
            }
            mask[k] = true;
        }
        Self::from_mask(mask)
    }

    /// Every bin unoccupied.
    pub fn all_free(n_bins: usize) -> Result<Self> {
        Self::from_mask(vec![true; n_bins])
    }

    pub fn n_bins(&self) -> usize {
        self.mask.len()
    }

    pub fn mask(&self) -> &[bool] {
        &self.mask
    }

    /// Ascending unoccupied bin indices.
    pub fn unoccupied(&self) -> &[usize] {
        &self.unoccupied
    }

    pub fn n_unoccupied(&self) -> usize {
        self.unoccupied.len()
    }

    pub fn is_unoccupied(&self, k: usize) -> bool {
        self.mask.get(k).copied().unwrap_or(false)
    }

    /// Bin-level unoccupied ratio `N_C / N`.
    pub fn bin_ratio(&self) -> f64 {
        self.n_unoccupied() as f64 / self.n_bins() as f64
    }
}

/// Discretizes `scenario` onto `n_bins` bins.
pub fn build_availability(scenario: &BandScenario, n_bins: usize) -> Result<AvailabilityVector> {
    if n_bins < 2 {
        return Err(invalid("at least two spectrum bins are required"));
    }
    scenario.validate()?;
    let df = scenario.bin_spacing_hz(n_bins);
    let mask = (0..n_bins)
        .map(|k| !scenario.is_occupied((k as f64 + 0.5) * df))
        .collect();
    AvailabilityVector::from_mask(mask)
}

/// `L` disjoint, equal-size clusters of unoccupied bins.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ClusterPartition {
    clusters: Vec<Vec<usize>>,
    n_bins: usize,
}

impl ClusterPartition {
    /// Validates and builds a partition. Clusters are sorted ascending.
    ///
    /// Checks range, pairwise disjointness and equal cluster sizes; use
    /// [`ClusterPartition::covers`] to check the union against an
    /// availability vector.
    pub fn new(n_bins: usize, mut clusters: Vec<Vec<usize>>) -> Result<Self> {
        if clusters.is_empty() {
            return Err(invalid("partition needs at least one cluster"));
        }
        let size = clusters[0].len();
        let mut seen = vec![false; n_bins];
        for cluster in &mut clusters {
            if cluster.is_empty() {
                return Err(Error::EmptyCluster);
            }
            if cluster.len() != size {
                return Err(invalid("clusters must have equal sizes"));
            }
            cluster.sort_unstable();
            for &k in cluster.iter() {
                if k >= n_bins {
                    return Err(Error::BinOutOfRange { index: k, n_bins });
                }
                if seen[k] {
                    return Err(invalid(format!("bin {k} appears in more than one cluster")));
                }
                seen[k] = true;
            }
        }
        Ok(Self { clusters, n_bins })
    }

    /// Builds a partition and checks that it covers exactly the unoccupied set.
    pub fn for_availability(avail: &AvailabilityVector, clusters: Vec<Vec<usize>>) -> Result<Self> {
        let p = Self::new(avail.n_bins(), clusters)?;
        if !p.covers(avail) {
            return Err(invalid("clusters do not cover the unoccupied bins exactly"));
        }
        Ok(p)
    }

    pub fn clusters(&self) -> &[Vec<usize>] {
        &self.clusters
    }

    pub fn cluster(&self, l: usize) -> &[usize] {
        &self.clusters[l]
    }

    pub fn n_clusters(&self) -> usize {
        self.clusters.len()
    }

    pub fn cluster_size(&self) -> usize {
        self.clusters[0].len()
    }

    pub fn n_bins(&self) -> usize {
        self.n_bins
    }

    /// Total number of bins in use, `N_C`.
    pub fn n_unoccupied(&self) -> usize {
        self.n_clusters() * self.cluster_size()
    }

    /// True when the union of the clusters equals the unoccupied set.
    pub fn covers(&self, avail: &AvailabilityVector) -> bool {
        if avail.n_bins() != self.n_bins {
            return false;
        }
        let mut all: Vec<usize> = self.clusters.iter().flatten().copied().collect();
        all.sort_unstable();
        all == avail.unoccupied()
    }

    /// Per-bin cluster label, `None` for bins outside every cluster.
    pub fn labels(&self) -> Vec<Option<usize>> {
        let mut labels = vec![None; self.n_bins];
        for (l, cluster) in self.clusters.iter().enumerate() {
            for &k in cluster {
                labels[k] = Some(l);
            }
        }
        labels
    }

    /// Indices of clusters whose FMW is periodic (see [`is_periodic_cluster`]).
    pub fn periodic_clusters(&self) -> Vec<usize> {
        (0..self.n_clusters())
            .filter(|&l| is_periodic_cluster(&self.clusters[l], self.n_bins))
            .collect()
    }

    /// One line per cluster, ascending indices separated by single spaces.
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        for cluster in &self.clusters {
            let line: Vec<String> = cluster.iter().map(|k| k.to_string()).collect();
            let _ = writeln!(out, "{}", line.join(" "));
        }
        out
    }

    /// Parses the format written by [`ClusterPartition::to_text`]. Blank lines
    /// are skipped.
    pub fn from_text(n_bins: usize, text: &str) -> Result<Self> {
        let mut clusters = Vec::new();
        for (i, line) in text.lines().enumerate() {
            if line.trim().is_empty() {
                continue;
            }
            let cluster = line
                .split_whitespace()
                .map(|tok| {
                    tok.parse::<usize>().map_err(|e| Error::Parse {
                        line: i + 1,
                        message: format!("{tok:?}: {e}"),
                    })
                })
                .collect::<Result<Vec<_>>>()?;
            clusters.push(cluster);
        }
        Self::new(n_bins, clusters)
    }
}

fn gcd(mut a: usize, mut b: usize) -> usize {
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}

/// True when every bin index in `cluster` shares a common factor with `n_bins`.
///
/// The cluster's FMW then repeats with period `N / g` (`g` the common
/// factor), so the cyclic shifts `tau` and `tau + N/g` produce the same
/// waveform and a CCSK receiver cannot tell those symbols apart.
pub fn is_periodic_cluster(cluster: &[usize], n_bins: usize) -> bool {
    let mut g = n_bins;
    for &p in cluster {
        g = gcd(g, p);
        if g == 1 {
            return false;
        }
    }
    true
}

fn check_divides(avail: &AvailabilityVector, n_clusters: usize) -> Result<usize> {
    let n_c = avail.n_unoccupied();
    if n_clusters == 0 || !n_c.is_multiple_of(n_clusters) {
        return Err(Error::ClusterSizeMismatch {
            n_unoccupied: n_c,
            n_clusters,
        });
    }
    Ok(n_c / n_clusters)
}

/// Continuous allocation: cluster `l` is the `l`-th block of `N_C / L`
/// consecutive unoccupied bins.
pub fn partition_continuous(avail: &AvailabilityVector, n_clusters: usize) -> Result<ClusterPartition> {
    let size = check_divides(avail, n_clusters)?;
    let clusters = avail.unoccupied().chunks(size).map(<[usize]>::to_vec).collect();
    ClusterPartition::for_availability(avail, clusters)
}

/// Random allocation: a seeded uniform permutation of the unoccupied bins
/// split into `L` equal blocks, conditioned on no cluster being periodic
/// (see [`is_periodic_cluster`]).
///
/// The result is uniform over partitions whose clusters all admit
/// unambiguous CCSK detection. Single-bin clusters are exempt because they
/// can never carry a shift. The same `(avail, n_clusters, seed)` always gives
/// the same partition. Use [`RandomPartitioner`] to draw many partitions of
/// the same shape.
pub fn partition_random(avail: &AvailabilityVector, n_clusters: usize, seed: u64) -> Result<ClusterPartition> {
    RandomPartitioner::new(avail, n_clusters)?.draw(seed)
}

fn prime_power_base(n: usize) -> Option<usize> {
    let q = (2..=n).find(|d| n.is_multiple_of(*d))?;
    let mut m = n;
    while m.is_multiple_of(q) {
        m /= q;
    }
    (m == 1).then_some(q)
}

/// Sampler behind [`partition_random`] for one `(availability, L)` shape.
///
/// When `N` is a prime power `q^m`, a cluster is periodic exactly when all
/// of its bins are multiples of `q`. The sampler then draws how many
/// multiples of `q` each cluster receives from the exact conditional
/// distribution (weights `prod_l C(size, e_l)`, every `e_l < size`) and deals
/// independently shuffled multiples and non-multiples into the clusters.
/// Every aperiodic ordered partition is equally likely. For other `N` it
/// falls back to rejection with early abort.
#[derive(Debug, Clone)]
pub struct RandomPartitioner {
    n_bins: usize,
    n_clusters: usize,
    size: usize,
    bins: Vec<usize>,
    mode: SamplerMode,
}

#[derive(Debug, Clone)]
enum SamplerMode {
    Plain,
    Counted {
        multiples: Vec<usize>,
        others: Vec<usize>,
        // log_fill[l][r]: log total weight of filling clusters l.. with r multiples.
        log_fill: Vec<Vec<f64>>,
        log_binom: Vec<f64>,
    },
    Rejection,
}

fn log_sum_exp(a: f64, b: f64) -> f64 {
    if a == f64::NEG_INFINITY {
        return b;
    }
    if b == f64::NEG_INFINITY {
        return a;
    }
    let m = a.max(b);
    m + ((a - m).exp() + (b - m).exp()).ln()
}

impl RandomPartitioner {
    pub fn new(avail: &AvailabilityVector, n_clusters: usize) -> Result<Self> {
        let size = check_divides(avail, n_clusters)?;
        let n_bins = avail.n_bins();
        let bins = avail.unoccupied().to_vec();
        let mode = if size == 1 {
            SamplerMode::Plain
        } else if let Some(q) = prime_power_base(n_bins) {
            let (multiples, others): (Vec<usize>, Vec<usize>) = bins.iter().partition(|&&k| k % q == 0);
            let ln_fact: Vec<f64> = std::iter::once(0.0)
                .chain((1..=size).scan(0.0, |acc, k| {
                    *acc += (k as f64).ln();
                    Some(*acc)
                }))
                .collect();
            let log_binom: Vec<f64> = (0..=size).map(|e| ln_fact[size] - ln_fact[e] - ln_fact[size - e]).collect();
            let d = multiples.len();
            let mut log_fill = vec![vec![f64::NEG_INFINITY; d + 1]; n_clusters + 1];
            log_fill[n_clusters][0] = 0.0;
            for l in (0..n_clusters).rev() {
                for r in 0..=d {
                    let mut acc = f64::NEG_INFINITY;
                    for e in 0..size.min(r + 1) {
                        acc = log_sum_exp(acc, log_binom[e] + log_fill[l + 1][r - e]);
                    }
                    log_fill[l][r] = acc;
                }
            }
            if log_fill[0][d] == f64::NEG_INFINITY {
                return Err(invalid(format!(
                    "every partition into {n_clusters} clusters has a periodic cluster"
                )));
            }
            SamplerMode::Counted {
                multiples,
                others,
                log_fill,
                log_binom,
            }
        } else {
            SamplerMode::Rejection
        };
        Ok(Self {
            n_bins,
            n_clusters,
            size,
            bins,
            mode,
        })
    }

    /// Draws the partition for `seed`.
    pub fn draw(&self, seed: u64) -> Result<ClusterPartition> {
        let mut rng = seed::rng(seed);
        let size = self.size;
        match &self.mode {
            SamplerMode::Plain => {
                let mut bins = self.bins.clone();
                bins.shuffle(&mut rng);
                ClusterPartition::new(self.n_bins, bins.chunks(size).map(<[usize]>::to_vec).collect())
            }
            SamplerMode::Counted {
                multiples,
                others,
                log_fill,
                log_binom,
            } => {
                let mut counts = Vec::with_capacity(self.n_clusters);
                let mut r = multiples.len();
                for l in 0..self.n_clusters {
                    let u: f64 = rng.random();
                    let mut cum = 0.0;
                    let upper = size.min(r + 1);
                    let mut pick = upper - 1;
                    for e in 0..upper {
                        cum += (log_binom[e] + log_fill[l + 1][r - e] - log_fill[l][r]).exp();
                        if u < cum && log_fill[l + 1][r - e] > f64::NEG_INFINITY {
                            pick = e;
                            break;
                        }
                    }
                    // Rounding can leave `cum` a hair below 1; fall back to the
                    // largest feasible count.
                    while log_fill[l + 1][r - pick] == f64::NEG_INFINITY {
                        pick -= 1;
                    }
                    counts.push(pick);
                    r -= pick;
                }
                let mut m = multiples.clone();
                let mut o = others.clone();
                m.shuffle(&mut rng);
                o.shuffle(&mut rng);
                let (mut mi, mut oi) = (m.into_iter(), o.into_iter());
                let clusters = counts
                    .iter()
                    .map(|&e| mi.by_ref().take(e).chain(oi.by_ref().take(size - e)).collect())
                    .collect();
                ClusterPartition::new(self.n_bins, clusters)
            }
            SamplerMode::Rejection => {
                let mut bins = self.bins.clone();
                let n = bins.len();
                'draw: for _ in 0..MAX_PARTITION_REDRAWS {
                    // Fisher-Yates, abandoning the draw as soon as a completed
                    // cluster is periodic.
                    for i in 0..n {
                        let j = rng.random_range(i..n);
                        bins.swap(i, j);
                        if (i + 1) % size == 0 && is_periodic_cluster(&bins[i + 1 - size..=i], self.n_bins) {
                            continue 'draw;
                        }
                    }
                    return ClusterPartition::new(self.n_bins, bins.chunks(size).map(<[usize]>::to_vec).collect());
                }
                Err(invalid(format!(
                    "no partition into {} clusters without periodic clusters found in {MAX_PARTITION_REDRAWS} draws",
                    self.n_clusters
                )))
            }
        }
    }
}

/// Normalized autocorrelation sidelobes of one cluster's FMW,
/// `R_tau = (1/|cluster|) sum_{p in cluster} e^{j 2 pi p tau / N}` for
/// `tau = 1..N-1` (the mainlobe `R_0 = 1` is excluded).
pub fn normalized_sidelobes(cluster: &[usize], n_bins: usize) -> Result<Vec<Complex>> {
    let mut buf = vec![Complex::new(0.0, 0.0); n_bins];
    fill_sidelobes(cluster, &mut buf)?;
    buf.remove(0);
    Ok(buf)
}

// Writes R_tau for tau = 0..N-1 into `buf` (len N).
fn fill_sidelobes(cluster: &[usize], buf: &mut [Complex]) -> Result<()> {
    let n = buf.len();
    if cluster.is_empty() {
        return Err(Error::EmptyCluster);
    }
    buf.iter_mut().for_each(|x| *x = Complex::new(0.0, 0.0));
    for &p in cluster {
        if p >= n {
            return Err(Error::BinOutOfRange { index: p, n_bins: n });
        }
        buf[p] = Complex::new(1.0, 0.0);
    }
    dsp::idft_in_place(buf);
    let scale = n as f64 / cluster.len() as f64;
    buf.iter_mut().for_each(|x| *x *= scale);
    Ok(())
}

/// Sidelobes of every cluster plus the largest values.
#[derive(Debug, Clone)]
pub struct SidelobeReport {
    /// `per_cluster[l][tau - 1]` for `tau = 1..N-1`.
    pub per_cluster: Vec<Vec<Complex>>,
    /// Largest real part over clusters and nonzero delays (ranking metric).
    pub beta: f64,
    /// Largest magnitude over clusters and nonzero delays.
    pub beta_magnitude: f64,
    /// `(cluster, tau)` where `beta` is attained.
    pub beta_at: (usize, usize),
}

pub fn sidelobe_report(partition: &ClusterPartition) -> SidelobeReport {
    let mut per_cluster = Vec::with_capacity(partition.n_clusters());
    let mut beta = f64::NEG_INFINITY;
    let mut beta_magnitude = 0.0f64;
    let mut beta_at = (0, 0);
    for (l, cluster) in partition.clusters().iter().enumerate() {
        let lobes = normalized_sidelobes(cluster, partition.n_bins()).expect("validated partition");
        for (i, r) in lobes.iter().enumerate() {
            if r.re > beta {
                beta = r.re;
                beta_at = (l, i + 1);
            }
            beta_magnitude = beta_magnitude.max(r.norm());
        }
        per_cluster.push(lobes);
    }
    if partition.n_bins() < 2 {
        beta = 0.0;
    }
    SidelobeReport {
        per_cluster,
        beta,
        beta_magnitude,
        beta_at,
    }
}

/// Largest sidelobe `beta = max_{l, tau != 0} Re{R_tau^l}` and the largest
/// magnitude `max |R_tau^l|`, returned as `(beta, magnitude)`.
pub fn largest_sidelobes(partition: &ClusterPartition) -> (f64, f64) {
    let n = partition.n_bins();
    let mut buf = vec![Complex::new(0.0, 0.0); n];
    let mut beta = f64::NEG_INFINITY;
    let mut mag = 0.0f64;
    for cluster in partition.clusters() {
        fill_sidelobes(cluster, &mut buf).expect("validated partition");
        for r in &buf[1..] {
            beta = beta.max(r.re);
            mag = mag.max(r.norm());
        }
    }
    (beta, mag)
}

/// The ranking metric `beta` (largest real sidelobe).
pub fn largest_sidelobe(partition: &ClusterPartition) -> f64 {
    largest_sidelobes(partition).0
}

/// Outcome of the Monte-Carlo `beta_min` search.
#[derive(Debug, Clone)]
pub struct BetaSearch {
    pub beta_min: f64,
    pub best: ClusterPartition,
    /// Trial index that produced `best`.
    pub best_trial: usize,
}

/// Seed used by trial `i` of [`estimate_beta_min`].
pub fn trial_seed(seed: u64, trial: usize) -> u64 {
    seed::derive(seed, &[trial as u64])
}

/// Approximates `beta_min` by drawing `trials` random partitions.
///
/// Trial `i` uses [`trial_seed`]`(seed, i)`, so the result is identical for
/// serial and parallel execution. Among equal `beta` values the lowest trial
/// index wins.
pub fn estimate_beta_min(
    avail: &AvailabilityVector,
    n_clusters: usize,
    trials: usize,
    seed: u64,
) -> Result<BetaSearch> {
    if trials == 0 {
        return Err(invalid("at least one trial is required"));
    }
    let sampler = RandomPartitioner::new(avail, n_clusters)?;
    let (beta_min, best_trial) = (0..trials)
        .into_par_iter()
        .map(|i| sampler.draw(trial_seed(seed, i)).map(|p| (largest_sidelobe(&p), i)))
        .try_reduce(
            || (f64::INFINITY, usize::MAX),
            |a, b| Ok(if b.0 < a.0 || (b.0 == a.0 && b.1 < a.1) { b } else { a }),
        )?;
    let best = sampler.draw(trial_seed(seed, best_trial))?;
    Ok(BetaSearch {
        beta_min,
        best,
        best_trial,
    })
}

/// Number of ordered partitions of `N_C` bins into `L` equal clusters.
#[derive(Debug, Clone, PartialEq)]
pub struct SearchSpaceSize {
    /// `N_C! / ((N_C/L)!)^L`.
    pub exact: BigUint,
    /// `log10` of `exact`.
    pub exact_log10: f64,
    /// Stirling estimate `(2 pi N_C)^((1-L)/2) * L^(N_C + L/2)` (may be `inf`).
    pub stirling: f64,
    /// `log10` of the Stirling estimate, finite for any size.
    pub stirling_log10: f64,
}

/// Size of the exhaustive search space for `beta_min`.
pub fn search_space_size(n_unoccupied: usize, n_clusters: usize) -> Result<SearchSpaceSize> {
    if n_unoccupied == 0 || n_clusters == 0 || !n_unoccupied.is_multiple_of(n_clusters) {
        return Err(Error::ClusterSizeMismatch {
            n_unoccupied,
            n_clusters,
        });
    }
    let size = n_unoccupied / n_clusters;
    // prod_{l=0}^{L-1} C(N_C (L - l) / L, N_C / L)
    let mut exact = BigUint::from(1u32);
    for l in 0..n_clusters {
        exact *= binomial(size * (n_clusters - l), size);
    }
    let nc = n_unoccupied as f64;
    let lf = n_clusters as f64;
    let stirling_log10 = (1.0 - lf) / 2.0 * (2.0 * PI * nc).log10() + (nc + lf / 2.0) * lf.log10();
    let digits = exact.to_string();
    let head = &digits[..digits.len().min(17)];
    let exact_log10 = head.parse::<f64>().expect("decimal digits").log10() + (digits.len() - head.len()) as f64;
    Ok(SearchSpaceSize {
        exact,
        exact_log10,
        stirling: 10f64.powf(stirling_log10),
        stirling_log10,
    })
}

fn binomial(n: usize, k: usize) -> BigUint {
    let k = k.min(n - k);
    let mut acc = BigUint::from(1u32);
    for i in 0..k {
        acc *= BigUint::from(n - i);
        acc /= BigUint::from(i + 1);
    }
    acc
}
