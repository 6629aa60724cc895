//! One simulated TDCS link and its Monte-Carlo BER estimator.

use super::config::{ChannelKind, Scheme, SimConfig, StopRule};
use crate::channel::{self, ChannelProfile, ChannelRealization};
use crate::coding::{self, ConvolutionalCode, Interleaver};
use crate::spectrum::{self, AvailabilityVector, ClusterPartition};
use crate::waveform::{self, Modulator, PhaseVector};
use crate::{dsp, seed, Complex, Result};
use rand::Rng;
use serde::Serialize;

const TAG_PHASE: u64 = 0x5048;
const TAG_PARTITION: u64 = 0x5041;
const TAG_FRAMES: u64 = 0x4652;

/// One sweep point.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BerRecord {
    pub scheme: Scheme,
    pub n_bins: usize,
    pub n_clusters: usize,
    pub ebn0_db: f64,
    pub frames: u64,
    pub bits: u64,
    pub bit_errors: u64,
    pub symbols: u64,
    pub symbol_errors: u64,
    pub ber: f64,
    pub ser: f64,
}

#[derive(Debug, Clone)]
struct Coded {
    code: ConvolutionalCode,
    interleaver: Interleaver,
    frames_per_block: usize,
    info_bits_per_block: usize,
}

#[derive(Debug, Clone)]
struct Multipath {
    profile: ChannelProfile,
    sample_rate_hz: f64,
}

/// A fully assembled link: partition, phases, modulator, demodulator and
/// optional coding / multipath stages.
#[derive(Debug, Clone)]
pub struct Link {
    scheme: Scheme,
    partition: ClusterPartition,
    phase: PhaseVector,
    modulator: Modulator,
    demodulator: crate::receiver::Demodulator,
    bits_per_symbol: usize,
    coded: Option<Coded>,
    multipath: Option<Multipath>,
    seed: u64,
}

/// Partition used by `scheme` for `n_clusters` under `cfg`.
pub fn build_partition(
    cfg: &SimConfig,
    avail: &AvailabilityVector,
    scheme: Scheme,
    n_clusters: usize,
) -> Result<ClusterPartition> {
    match scheme {
        Scheme::Continuous => spectrum::partition_continuous(avail, n_clusters),
        Scheme::Random => {
            let s = seed::derive(cfg.seed, &[TAG_PARTITION, n_clusters as u64]);
            if cfg.random_partition_trials > 0 {
                Ok(spectrum::estimate_beta_min(avail, n_clusters, cfg.random_partition_trials, s)?.best)
            } else {
                spectrum::partition_random(avail, n_clusters, s)
            }
        }
    }
}

/// The user phase vector for `cfg`.
pub fn build_phase(cfg: &SimConfig) -> Result<PhaseVector> {
    waveform::generate_phase_vector(seed::derive(cfg.seed, &[TAG_PHASE]), cfg.n_bins)
}

impl Link {
    /// Assembles the link for one `(scheme, L)` pair of `cfg`.
    pub fn new(cfg: &SimConfig, scheme: Scheme, n_clusters: usize) -> Result<Self> {
        cfg.validate()?;
        let avail = cfg.availability()?;
        let partition = build_partition(cfg, &avail, scheme, n_clusters)?;
        let phase = build_phase(cfg)?;
        Self::from_parts(cfg, scheme, partition, phase)
    }

    /// Assembles a link around an explicit partition and phase vector.
    pub fn from_parts(cfg: &SimConfig, scheme: Scheme, partition: ClusterPartition, phase: PhaseVector) -> Result<Self> {
        let m = cfg.m_order();
        let modulator = Modulator::new(&partition, &phase, m)?;
        let demodulator = crate::receiver::Demodulator::new(&partition, &phase, m)?;
        let bits_per_symbol = coding::bits_per_symbol(m)?;
        let bits_per_frame = partition.n_clusters() * bits_per_symbol;
        let coded = if cfg.coding {
            let code = ConvolutionalCode::from_config(&cfg.code)?;
            let tail = code.constraint_length() as usize - 1;
            let mut frames = cfg.min_coded_block_bits.div_ceil(bits_per_frame).max(1);
            while frames * bits_per_frame < 2 * (tail + 1) || !(frames * bits_per_frame).is_multiple_of(2) {
                frames += 1;
            }
            let coded_len = frames * bits_per_frame;
            Some(Coded {
                interleaver: Interleaver::new(coded_len, cfg.code.interleaver_seed),
                info_bits_per_block: coded_len / 2 - tail,
                frames_per_block: frames,
                code,
            })
        } else {
            None
        };
        let multipath = match cfg.channel {
            ChannelKind::Awgn => None,
            ChannelKind::Multipath => Some(Multipath {
                profile: cfg.channel_profile()?,
                sample_rate_hz: cfg.scenario.bandwidth_hz,
            }),
        };
        Ok(Self {
            scheme,
            seed: seed::derive(
                cfg.seed,
                &[TAG_FRAMES, scheme.tag(), cfg.n_bins as u64, partition.n_clusters() as u64],
            ),
            partition,
            phase,
            modulator,
            demodulator,
            bits_per_symbol,
            coded,
            multipath,
        })
    }

    pub fn partition(&self) -> &ClusterPartition {
        &self.partition
    }

    pub fn phase(&self) -> &PhaseVector {
        &self.phase
    }

    pub fn scheme(&self) -> Scheme {
        self.scheme
    }

    pub fn n_bins(&self) -> usize {
        self.partition.n_bins()
    }

    pub fn n_clusters(&self) -> usize {
        self.partition.n_clusters()
    }

    /// CCSK (channel) bits carried by one frame, `L log2 M`.
    pub fn channel_bits_per_frame(&self) -> usize {
        self.n_clusters() * self.bits_per_symbol
    }

    /// Information bits per frame after removing code redundancy and tail.
    pub fn info_bits_per_frame(&self) -> f64 {
        match &self.coded {
            Some(c) => c.info_bits_per_block as f64 / c.frames_per_block as f64,
            None => self.channel_bits_per_frame() as f64,
        }
    }

    /// Per-sample noise variance at `ebn0_db` (unit-energy frame body).
    pub fn noise_variance(&self, ebn0_db: f64) -> Result<f64> {
        channel::ebn0_to_noise_variance(ebn0_db, self.info_bits_per_frame(), 1.0, self.n_bins())
    }

    /// Sends one frame of symbols through the channel and returns the
    /// detected symbols.
    fn transmit<R: Rng>(&self, symbols: &[usize], noise_variance: f64, rng: &mut R) -> Result<Vec<usize>> {
        let frame = self.modulator.modulate(symbols)?;
        match &self.multipath {
            None => {
                let mut samples = frame.samples;
                channel::add_awgn_in_place(&mut samples, noise_variance, rng);
                Ok(self.demodulator.demodulate(&samples)?)
            }
            Some(mp) => {
                let n = self.n_bins();
                let real: ChannelRealization =
                    channel::draw_realization_with(&mp.profile, mp.sample_rate_hz, n, rng)?;
                let tx = channel::add_cp(&frame)?;
                let mut rx = channel::apply_multipath(&tx, &real)?;
                channel::add_awgn_in_place(&mut rx.samples, noise_variance, rng);
                let mut freq: Vec<Complex> = rx.body().to_vec();
                dsp::dft_in_place(&mut freq);
                let signal_per_bin = self.modulator.lambda().powi(2);
                let eq = channel::mmse_equalize(&freq, &real.freq_response, n as f64 * noise_variance, signal_per_bin)?;
                Ok(self.demodulator.demodulate_spectrum(&eq))
            }
        }
    }

    /// Simulates frames at `ebn0_db` until `stop` is met or `max_bits`
    /// information bits have been sent.
    ///
    /// Frame `f` draws its bits, fading and noise from a stream that depends
    /// only on the link and `f`, not on `ebn0_db`, so points of a sweep share
    /// their random inputs.
    pub fn simulate(&self, ebn0_db: f64, stop: &StopRule, max_bits: Option<u64>) -> Result<BerRecord> {
        let noise_variance = self.noise_variance(ebn0_db)?;
        let mut rec = BerRecord {
            scheme: self.scheme,
            n_bins: self.n_bins(),
            n_clusters: self.n_clusters(),
            ebn0_db,
            frames: 0,
            bits: 0,
            bit_errors: 0,
            symbols: 0,
            symbol_errors: 0,
            ber: 0.0,
            ser: 0.0,
        };
        let max_bits = max_bits.unwrap_or(u64::MAX);
        let l = self.n_clusters();
        let m = self.modulator.m_order();
        let mut unit = 0u64;
        while rec.bit_errors < stop.min_bit_errors && rec.frames < stop.max_frames && rec.bits < max_bits {
            let mut rng = seed::sub_rng(self.seed, &[unit]);
            unit += 1;
            match &self.coded {
                None => {
                    let bits: Vec<u8> = (0..self.channel_bits_per_frame())
                        .map(|_| rng.random_range(0..2u8))
                        .collect();
                    let tx = &coding::map_bits_to_symbols(&bits, l, m)?[0];
                    let rx = self.transmit(tx, noise_variance, &mut rng)?;
                    let rx_bits = coding::map_symbols_to_bits(std::slice::from_ref(&rx), l, m)?;
                    rec.frames += 1;
                    rec.bits += bits.len() as u64;
                    rec.bit_errors += count_diff(&bits, &rx_bits);
                    rec.symbols += l as u64;
                    rec.symbol_errors += tx.iter().zip(&rx).filter(|(a, b)| a != b).count() as u64;
                }
                Some(c) => {
                    let info: Vec<u8> = (0..c.info_bits_per_block).map(|_| rng.random_range(0..2u8)).collect();
                    let coded = c.interleaver.interleave(&c.code.encode(&info))?;
                    let tx_frames = coding::map_bits_to_symbols(&coded, l, m)?;
                    let mut rx_frames = Vec::with_capacity(tx_frames.len());
                    for tx in &tx_frames {
                        let rx = self.transmit(tx, noise_variance, &mut rng)?;
                        rec.symbols += l as u64;
                        rec.symbol_errors += tx.iter().zip(&rx).filter(|(a, b)| a != b).count() as u64;
                        rx_frames.push(rx);
                    }
                    let rx_coded = coding::map_symbols_to_bits(&rx_frames, l, m)?;
                    let decoded = c.code.viterbi_decode(&c.interleaver.deinterleave(&rx_coded)?)?;
                    rec.frames += tx_frames.len() as u64;
                    rec.bits += info.len() as u64;
                    rec.bit_errors += count_diff(&info, &decoded);
                }
            }
        }
        rec.ber = rec.bit_errors as f64 / rec.bits.max(1) as f64;
        rec.ser = rec.symbol_errors as f64 / rec.symbols.max(1) as f64;
        Ok(rec)
    }
}

fn count_diff(a: &[u8], b: &[u8]) -> u64 {
    a.iter().zip(b).filter(|(x, y)| x != y).count() as u64
}
