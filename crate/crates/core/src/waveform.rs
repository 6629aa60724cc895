//! Phase vectors, FMW synthesis and multi-cluster CCSK modulation.
//!
//! Transform convention follows [`crate::idft`]: the inverse DFT carries
//! `1/N`. With `lambda = sqrt(N / N_C)` every frame built from a partition
//! that covers all `N_C` unoccupied bins has energy exactly 1.

use crate::channel::WaveformFrame;
use crate::spectrum::ClusterPartition;
use crate::{dsp, seed, Complex, Error, Result};
use rand::Rng;
use std::f64::consts::PI;
use std::io::Write;

/// Energy normalization factor `sqrt(N / N_C)`.
pub fn energy_normalization(n_bins: usize, n_unoccupied: usize) -> f64 {
    (n_bins as f64 / n_unoccupied as f64).sqrt()
}

/// Source of the phase angles `m_k` of a phase vector.
pub trait PhaseSource {
    /// Returns `n_bins` angles in radians.
    fn angles(&self, n_bins: usize) -> Vec<f64>;
}

/// Independent angles uniform over `[0, 2 pi)` from a seeded generator.
#[derive(Debug, Clone, Copy)]
pub struct UniformPhases {
    pub seed: u64,
}

impl PhaseSource for UniformPhases {
    fn angles(&self, n_bins: usize) -> Vec<f64> {
        let mut rng = seed::rng(self.seed);
        (0..n_bins).map(|_| rng.random_range(0.0..2.0 * PI)).collect()
    }
}

/// User-specific unit-magnitude phases `P_k = e^{j m_k}`.
#[derive(Debug, Clone, PartialEq)]
pub struct PhaseVector {
    phases: Vec<Complex>,
    seed: u64,
}

impl PhaseVector {
    pub fn from_source(source: &impl PhaseSource, n_bins: usize, seed: u64) -> Self {
        let phases = source
            .angles(n_bins)
            .into_iter()
            .map(|m| Complex::from_polar(1.0, m))
            .collect();
        Self { phases, seed }
    }

    /// All phases zero (`P_k = 1`).
    pub fn flat(n_bins: usize) -> Self {
        Self {
            phases: vec![Complex::new(1.0, 0.0); n_bins],
            seed: 0,
        }
    }

    pub fn phases(&self) -> &[Complex] {
        &self.phases
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    pub fn len(&self) -> usize {
        self.phases.len()
    }

    pub fn is_empty(&self) -> bool {
        self.phases.is_empty()
    }
}

/// Seeded phase vector with uniform continuous phases.
pub fn generate_phase_vector(seed: u64, n_bins: usize) -> Result<PhaseVector> {
    if n_bins < 2 {
        return Err(Error::InvalidArgument("at least two bins are required".into()));
    }
    Ok(PhaseVector::from_source(&UniformPhases { seed }, n_bins, seed))
}

/// Fundamental modulation waveform of one cluster.
#[derive(Debug, Clone)]
pub struct Fmw {
    pub time_samples: Vec<Complex>,
    pub cluster: Vec<usize>,
    pub lambda: f64,
}

impl Fmw {
    /// Writes one `real imaginary` pair per line.
    pub fn write_dump<W: Write>(&self, mut w: W) -> std::io::Result<()> {
        for x in &self.time_samples {
            writeln!(w, "{:e} {:e}", x.re, x.im)?;
        }
        Ok(())
    }

    /// Parses the format written by [`Fmw::write_dump`] back into samples.
    pub fn parse_dump(text: &str) -> Result<Vec<Complex>> {
        text.lines()
            .enumerate()
            .filter(|(_, l)| !l.trim().is_empty())
            .map(|(i, line)| {
                let parse_err = |message: String| Error::Parse { line: i + 1, message };
                let mut it = line.split_whitespace();
                let mut next = || -> Result<f64> {
                    it.next()
                        .ok_or_else(|| parse_err("expected two columns".into()))?
                        .parse::<f64>()
                        .map_err(|e| parse_err(e.to_string()))
                };
                Ok(Complex::new(next()?, next()?))
            })
            .collect()
    }
}

/// `b = lambda * IDFT{A^l . P}` for one cluster.
///
/// `lambda` is shared by every cluster of a frame and is normally
/// [`energy_normalization`]`(N, N_C)` with `N_C` the total unoccupied count.
pub fn synthesize_fmw(cluster: &[usize], phase: &PhaseVector, n_bins: usize, lambda: f64) -> Result<Fmw> {
    if cluster.is_empty() {
        return Err(Error::EmptyCluster);
    }
    if phase.len() != n_bins {
        return Err(Error::LengthMismatch {
            expected: n_bins,
            actual: phase.len(),
        });
    }
    let mut spectrum = vec![Complex::new(0.0, 0.0); n_bins];
    for &k in cluster {
        if k >= n_bins {
            return Err(Error::BinOutOfRange { index: k, n_bins });
        }
        spectrum[k] = phase.phases()[k] * lambda;
    }
    dsp::idft_in_place(&mut spectrum);
    Ok(Fmw {
        time_samples: spectrum,
        cluster: cluster.to_vec(),
        lambda,
    })
}

/// One CCSK symbol per cluster.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SymbolVector {
    symbols: Vec<usize>,
    m_order: usize,
}

impl SymbolVector {
    pub fn new(symbols: Vec<usize>, m_order: usize) -> Result<Self> {
        if m_order < 2 {
            return Err(Error::InvalidArgument("CCSK order must be at least 2".into()));
        }
        if let Some(&s) = symbols.iter().find(|&&s| s >= m_order) {
            return Err(Error::SymbolOutOfRange { symbol: s, m_order });
        }
        Ok(Self { symbols, m_order })
    }

    pub fn symbols(&self) -> &[usize] {
        &self.symbols
    }

    pub fn m_order(&self) -> usize {
        self.m_order
    }

    pub fn len(&self) -> usize {
        self.symbols.len()
    }

    pub fn is_empty(&self) -> bool {
        self.symbols.is_empty()
    }
}

/// Multi-cluster CCSK modulator.
///
/// Precomputes `lambda * P_k` per bin and a twiddle table so that each frame
/// costs one inverse transform.
#[derive(Debug, Clone)]
pub struct Modulator {
    n_bins: usize,
    m_order: usize,
    lambda: f64,
    clusters: Vec<Vec<usize>>,
    weighted_phase: Vec<Complex>,
    twiddle: Vec<Complex>,
}

impl Modulator {
    pub fn new(partition: &ClusterPartition, phase: &PhaseVector, m_order: usize) -> Result<Self> {
        let n = partition.n_bins();
        if m_order < 2 || !n.is_multiple_of(m_order) {
            return Err(Error::InvalidArgument(format!(
                "CCSK order {m_order} must be at least 2 and divide {n} bins"
            )));
        }
        if phase.len() != n {
            return Err(Error::LengthMismatch {
                expected: n,
                actual: phase.len(),
            });
        }
        let lambda = energy_normalization(n, partition.n_unoccupied());
        Ok(Self {
            n_bins: n,
            m_order,
            lambda,
            clusters: partition.clusters().to_vec(),
            weighted_phase: phase.phases().iter().map(|p| p * lambda).collect(),
            twiddle: (0..n)
                .map(|i| Complex::from_polar(1.0, -2.0 * PI * i as f64 / n as f64))
                .collect(),
        })
    }

    pub fn n_bins(&self) -> usize {
        self.n_bins
    }

    pub fn m_order(&self) -> usize {
        self.m_order
    }

    pub fn lambda(&self) -> f64 {
        self.lambda
    }

    pub fn n_clusters(&self) -> usize {
        self.clusters.len()
    }

    /// Frequency-domain frame `X_k = lambda P_k e^{-j 2 pi S^l k / M}` on the
    /// bins of cluster `l`, zero elsewhere.
    pub fn spectrum(&self, symbols: &[usize]) -> Result<Vec<Complex>> {
        if symbols.len() != self.clusters.len() {
            return Err(Error::LengthMismatch {
                expected: self.clusters.len(),
                actual: symbols.len(),
            });
        }
        let shift_unit = self.n_bins / self.m_order;
        let mut x = vec![Complex::new(0.0, 0.0); self.n_bins];
        for (cluster, &s) in self.clusters.iter().zip(symbols) {
            if s >= self.m_order {
                return Err(Error::SymbolOutOfRange {
                    symbol: s,
                    m_order: self.m_order,
                });
            }
            // e^{-j 2 pi S k / M} = twiddle[(S N/M) k mod N]
            let shift = s * shift_unit;
            for &k in cluster {
                x[k] = self.weighted_phase[k] * self.twiddle[(shift * k) % self.n_bins];
            }
        }
        Ok(x)
    }

    /// Time-domain frame (no cyclic prefix).
    pub fn modulate(&self, symbols: &[usize]) -> Result<WaveformFrame> {
        let mut x = self.spectrum(symbols)?;
        dsp::idft_in_place(&mut x);
        Ok(WaveformFrame::new(x))
    }
}

/// Modulates one frame: each cluster's FMW cyclically shifted by
/// `S^l * N / M` samples, all clusters summed, built with a single inverse
/// transform.
pub fn modulate(partition: &ClusterPartition, phase: &PhaseVector, symbols: &SymbolVector) -> Result<WaveformFrame> {
    Modulator::new(partition, phase, symbols.m_order())?.modulate(symbols.symbols())
}
