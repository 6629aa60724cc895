//! CCSK demodulation.
//!
//! Each cluster's symbol is recovered by correlating the received body with
//! the cluster's reference FMW in the frequency domain,
//! `y = IDFT{ DFT{r} . conj(A^l . P) }`, and picking the candidate delay with
//! the largest real part.

use crate::spectrum::ClusterPartition;
use crate::waveform::{PhaseVector, SymbolVector};
use crate::{dsp, Complex, Error, Result};

/// Correlator outputs for every cluster of one frame.
#[derive(Debug, Clone)]
pub struct CorrelationOutput {
    /// `values[l][tau]`, `tau = 0..N-1`.
    pub values: Vec<Vec<Complex>>,
    pub detected_symbols: Vec<usize>,
}

fn check_lengths(len: usize, phase: &PhaseVector) -> Result<()> {
    if phase.len() != len {
        return Err(Error::LengthMismatch {
            expected: phase.len(),
            actual: len,
        });
    }
    Ok(())
}

/// Correlates a frequency-domain frame (unscaled DFT of the body) against
/// the reference of `cluster`.
pub fn correlate_spectrum(received_freq: &[Complex], cluster: &[usize], phase: &PhaseVector) -> Result<Vec<Complex>> {
    let n = received_freq.len();
    check_lengths(n, phase)?;
    let mut y = vec![Complex::new(0.0, 0.0); n];
    for &k in cluster {
        if k >= n {
            return Err(Error::BinOutOfRange { index: k, n_bins: n });
        }
        y[k] = received_freq[k] * phase.phases()[k].conj();
    }
    dsp::idft_in_place(&mut y);
    Ok(y)
}

/// Correlates a received body (no prefix) against the reference of `cluster`.
pub fn correlate(received_body: &[Complex], cluster: &[usize], phase: &PhaseVector) -> Result<Vec<Complex>> {
    correlate_spectrum(&dsp::dft(received_body), cluster, phase)
}

/// Index `S` of the largest `Re{y_tau}` over the candidate delays
/// `tau = S * N / M`. Ties go to the smallest `S`.
pub fn detect(correlation: &[Complex], m_order: usize) -> Result<usize> {
    let n = correlation.len();
    if m_order == 0 || !n.is_multiple_of(m_order) {
        return Err(Error::InvalidArgument(format!(
            "CCSK order {m_order} does not divide {n}"
        )));
    }
    Ok(argmax_real(correlation, n / m_order))
}

fn argmax_real(y: &[Complex], step: usize) -> usize {
    let mut best = 0;
    let mut best_val = f64::NEG_INFINITY;
    for (s, v) in y.iter().step_by(step).enumerate() {
        if v.re > best_val {
            best_val = v.re;
            best = s;
        }
    }
    best
}

/// Correlate-and-detect for every cluster of `partition`.
pub fn demodulate_frame(
    received_body: &[Complex],
    partition: &ClusterPartition,
    phase: &PhaseVector,
    m_order: usize,
) -> Result<SymbolVector> {
    let demod = Demodulator::new(partition, phase, m_order)?;
    let symbols = demod.demodulate(received_body)?;
    SymbolVector::new(symbols, m_order)
}

/// Reusable per-link demodulator.
#[derive(Debug, Clone)]
pub struct Demodulator {
    n_bins: usize,
    m_order: usize,
    clusters: Vec<Vec<usize>>,
    conj_phase: Vec<Complex>,
}

impl Demodulator {
    pub fn new(partition: &ClusterPartition, phase: &PhaseVector, m_order: usize) -> Result<Self> {
        let n = partition.n_bins();
        if m_order < 2 || !n.is_multiple_of(m_order) {
            return Err(Error::InvalidArgument(format!(
                "CCSK order {m_order} must be at least 2 and divide {n} bins"
            )));
        }
        check_lengths(n, phase)?;
        Ok(Self {
            n_bins: n,
            m_order,
            clusters: partition.clusters().to_vec(),
            conj_phase: phase.phases().iter().map(|p| p.conj()).collect(),
        })
    }

    pub fn n_bins(&self) -> usize {
        self.n_bins
    }

    /// Detected symbols from a received body.
    pub fn demodulate(&self, received_body: &[Complex]) -> Result<Vec<usize>> {
        if received_body.len() != self.n_bins {
            return Err(Error::LengthMismatch {
                expected: self.n_bins,
                actual: received_body.len(),
            });
        }
        Ok(self.demodulate_spectrum(&dsp::dft(received_body)))
    }

    /// Detected symbols from the DFT of a received (possibly equalized) body.
    pub fn demodulate_spectrum(&self, received_freq: &[Complex]) -> Vec<usize> {
        let mut y = vec![Complex::new(0.0, 0.0); self.n_bins];
        let step = self.n_bins / self.m_order;
        self.clusters
            .iter()
            .map(|cluster| {
                self.correlate_into(received_freq, cluster, &mut y);
                argmax_real(&y, step)
            })
            .collect()
    }

    /// Full correlator outputs plus decisions.
    pub fn correlate_all(&self, received_body: &[Complex]) -> Result<CorrelationOutput> {
        if received_body.len() != self.n_bins {
            return Err(Error::LengthMismatch {
                expected: self.n_bins,
                actual: received_body.len(),
            });
        }
        let freq = dsp::dft(received_body);
        let step = self.n_bins / self.m_order;
        let mut values = Vec::with_capacity(self.clusters.len());
        let mut detected_symbols = Vec::with_capacity(self.clusters.len());
        for cluster in &self.clusters {
            let mut y = vec![Complex::new(0.0, 0.0); self.n_bins];
            self.correlate_into(&freq, cluster, &mut y);
            detected_symbols.push(argmax_real(&y, step));
            values.push(y);
        }
        Ok(CorrelationOutput {
            values,
            detected_symbols,
        })
    }

    fn correlate_into(&self, freq: &[Complex], cluster: &[usize], y: &mut [Complex]) {
        y.iter_mut().for_each(|v| *v = Complex::new(0.0, 0.0));
        for &k in cluster {
            y[k] = freq[k] * self.conj_phase[k];
        }
        dsp::idft_in_place(y);
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::spectrum::{build_availability, partition_continuous, partition_random, BandScenario};
    use crate::waveform::{energy_normalization, generate_phase_vector, synthesize_fmw, Modulator};

    #[test]
    fn mainlobe_is_strict_maximum() {
        let a = build_availability(&BandScenario::reference(), 256).unwrap();
        let part = partition_random(&a, 4, 2).unwrap();
        let p = generate_phase_vector(6, 256).unwrap();
        let lambda = energy_normalization(256, a.n_unoccupied());
        let b = synthesize_fmw(part.cluster(1), &p, 256, lambda).unwrap();
        let y = correlate(&b.time_samples, part.cluster(1), &p).unwrap();
        assert!(y[1..].iter().all(|v| v.re < y[0].re));
        // Peak equals lambda * |cluster| / N.
        assert!((y[0].re - lambda * 48.0 / 256.0).abs() < 1e-12);
        let other = correlate(&b.time_samples, part.cluster(2), &p).unwrap();
        assert!(other.iter().all(|v| v.norm() < 1e-15));
    }

    #[test]
    fn detect_candidates_and_ties() {
        assert_eq!(detect(&vec![Complex::new(0.0, 0.0); 16], 16).unwrap(), 0);
        let mut y = vec![Complex::new(0.0, 0.0); 16];
        y[3] = Complex::new(5.0, 0.0);
        y[8] = Complex::new(1.0, 9.0);
        y[12] = Complex::new(2.0, 0.0);
        assert_eq!(detect(&y, 16).unwrap(), 3);
        // M = 4 only looks at tau = 0, 4, 8, 12.
        assert_eq!(detect(&y, 4).unwrap(), 3);
        y[4] = Complex::new(2.0, 0.0);
        assert_eq!(detect(&y, 4).unwrap(), 1);
        assert!(detect(&y, 5).is_err());
    }

    #[test]
    fn loopback_single_cluster() {
        let a = build_availability(&BandScenario::reference(), 256).unwrap();
        let part = partition_continuous(&a, 1).unwrap();
        let p = generate_phase_vector(1, 256).unwrap();
        let x = Modulator::new(&part, &p, 256).unwrap().modulate(&[5]).unwrap();
        let s = demodulate_frame(&x.samples, &part, &p, 256).unwrap();
        assert_eq!(s.symbols(), &[5]);
    }

    #[test]
    fn correlation_outputs_match_decisions() {
        let a = build_availability(&BandScenario::reference(), 64).unwrap();
        let part = partition_random(&a, 2, 8).unwrap();
        let p = generate_phase_vector(2, 64).unwrap();
        let x = Modulator::new(&part, &p, 64).unwrap().modulate(&[9, 40]).unwrap();
        let d = Demodulator::new(&part, &p, 64).unwrap();
        let out = d.correlate_all(&x.samples).unwrap();
        assert_eq!(out.detected_symbols, vec![9, 40]);
        assert_eq!(out.values.len(), 2);
        assert!(d.demodulate(&x.samples[..10]).is_err());
    }
}
