//! Channel models: AWGN, cyclic prefix, block-fading multipath and the
//! one-tap MMSE equalizer.

use crate::error::invalid;
use crate::{dsp, seed, Complex, Error, Result};
use rand::Rng;
use rand_distr::{Distribution, StandardNormal};
use std::fmt::Write as _;

/// Complex baseband samples of one TDCS frame.
#[derive(Debug, Clone, PartialEq)]
pub struct WaveformFrame {
    pub samples: Vec<Complex>,
    pub has_cp: bool,
    pub n_bins: usize,
}

impl WaveformFrame {
    /// Frame body without a cyclic prefix.
    pub fn new(samples: Vec<Complex>) -> Self {
        let n_bins = samples.len();
        Self {
            samples,
            has_cp: false,
            n_bins,
        }
    }

    pub fn cp_len(&self) -> usize {
        if self.has_cp {
            self.n_bins / 4
        } else {
            0
        }
    }

    /// Samples after the prefix.
    pub fn body(&self) -> &[Complex] {
        &self.samples[self.cp_len()..]
    }

    pub fn energy(&self) -> f64 {
        self.samples.iter().map(|x| x.norm_sqr()).sum()
    }
}

/// Adds circularly-symmetric complex Gaussian noise of variance
/// `noise_variance` per complex sample (half per dimension) in place.
pub fn add_awgn_in_place<R: Rng + ?Sized>(samples: &mut [Complex], noise_variance: f64, rng: &mut R) {
    if noise_variance == 0.0 {
        return;
    }
    let sigma = (noise_variance / 2.0).sqrt();
    for x in samples.iter_mut() {
        let re: f64 = StandardNormal.sample(rng);
        let im: f64 = StandardNormal.sample(rng);
        *x += Complex::new(re, im) * sigma;
    }
}

/// Returns `frame` plus seeded AWGN of variance `noise_variance` per sample.
pub fn add_awgn(frame: &WaveformFrame, noise_variance: f64, seed: u64) -> Result<WaveformFrame> {
    if !(noise_variance >= 0.0) {
        return Err(invalid("noise variance must be non-negative"));
    }
    let mut out = frame.clone();
    add_awgn_in_place(&mut out.samples, noise_variance, &mut seed::rng(seed));
    Ok(out)
}

/// Per-sample noise variance for a given `Eb/N0`:
/// `sigma^2 = frame_energy / (info_bits_per_frame * 10^(ebn0_db / 10))`.
///
/// `frame_energy` is the energy of the frame body the bits ride on and
/// `info_bits_per_frame` counts information bits (after removing code
/// redundancy). Noise of this variance is injected on every transmitted
/// sample, prefix included. `frame_length_samples` is only validated.
pub fn ebn0_to_noise_variance(
    ebn0_db: f64,
    info_bits_per_frame: f64,
    frame_energy: f64,
    frame_length_samples: usize,
) -> Result<f64> {
    if !(info_bits_per_frame > 0.0) {
        return Err(invalid("information bits per frame must be positive"));
    }
    if frame_length_samples == 0 {
        return Err(invalid("frame length must be positive"));
    }
    if ebn0_db == f64::INFINITY {
        return Ok(0.0);
    }
    let eb = frame_energy / info_bits_per_frame;
    Ok(eb / 10f64.powf(ebn0_db / 10.0))
}

/// Prepends the last `N/4` body samples.
pub fn add_cp(frame: &WaveformFrame) -> Result<WaveformFrame> {
    if frame.has_cp {
        return Err(invalid("frame already has a cyclic prefix"));
    }
    let n = frame.samples.len();
    if !n.is_multiple_of(4) {
        return Err(invalid(format!("frame length {n} is not divisible by 4")));
    }
    let mut samples = Vec::with_capacity(n + n / 4);
    samples.extend_from_slice(&frame.samples[n - n / 4..]);
    samples.extend_from_slice(&frame.samples);
    Ok(WaveformFrame {
        samples,
        has_cp: true,
        n_bins: n,
    })
}

/// Drops the prefix added by [`add_cp`].
pub fn remove_cp(frame: &WaveformFrame) -> Result<WaveformFrame> {
    if !frame.has_cp {
        return Err(Error::MissingCp);
    }
    Ok(WaveformFrame::new(frame.body().to_vec()))
}

/// Power-delay profile of a tapped-delay-line channel.
#[derive(Debug, Clone, PartialEq)]
pub struct ChannelProfile {
    pub name: String,
    pub tap_delays_us: Vec<f64>,
    pub tap_powers_db: Vec<f64>,
}

impl ChannelProfile {
    /// COST 207 rural area, six taps, all Rayleigh.
    pub fn cost207_rax6() -> Self {
        Self {
            name: "COST207-RAx6".into(),
            tap_delays_us: vec![0.0, 0.1, 0.2, 0.3, 0.4, 0.5],
            tap_powers_db: vec![0.0, -4.0, -8.0, -12.0, -16.0, -20.0],
        }
    }

    /// Single unit tap at zero delay.
    pub fn flat() -> Self {
        Self {
            name: "flat".into(),
            tap_delays_us: vec![0.0],
            tap_powers_db: vec![0.0],
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.tap_delays_us.is_empty() || self.tap_delays_us.len() != self.tap_powers_db.len() {
            return Err(invalid("profile needs matching, non-empty delay and power lists"));
        }
        if self.tap_delays_us.iter().any(|d| !(d.is_finite() && *d >= 0.0)) {
            return Err(invalid("tap delays must be finite and non-negative"));
        }
        if self.tap_powers_db.iter().any(|p| !p.is_finite()) {
            return Err(invalid("tap powers must be finite"));
        }
        Ok(())
    }

    /// Linear tap powers scaled to sum to 1.
    pub fn normalized_powers(&self) -> Vec<f64> {
        let lin: Vec<f64> = self.tap_powers_db.iter().map(|p| 10f64.powf(p / 10.0)).collect();
        let total: f64 = lin.iter().sum();
        lin.into_iter().map(|p| p / total).collect()
    }

    /// Tap delays in samples, rounded to the nearest sample.
    pub fn delays_samples(&self, sample_rate_hz: f64) -> Vec<usize> {
        self.tap_delays_us
            .iter()
            .map(|d| (d * 1e-6 * sample_rate_hz).round() as usize)
            .collect()
    }

    /// Parses the profile text format: the first non-empty line is the name,
    /// then one `delay_us power_db` pair per line. `#` starts a comment.
    pub fn parse(text: &str) -> Result<Self> {
        let mut name = None;
        let mut delays = Vec::new();
        let mut powers = Vec::new();
        for (i, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            if name.is_none() {
                name = Some(line.to_string());
                continue;
            }
            let err = |message: String| Error::Parse { line: i + 1, message };
            let cols: Vec<&str> = line.split_whitespace().collect();
            if cols.len() != 2 {
                return Err(err(format!("expected `delay_us power_db`, got {line:?}")));
            }
            delays.push(cols[0].parse::<f64>().map_err(|e| err(e.to_string()))?);
            powers.push(cols[1].parse::<f64>().map_err(|e| err(e.to_string()))?);
        }
        let profile = Self {
            name: name.ok_or_else(|| Error::Parse {
                line: 1,
                message: "missing profile name".into(),
            })?,
            tap_delays_us: delays,
            tap_powers_db: powers,
        };
        profile.validate()?;
        Ok(profile)
    }

    pub fn to_text(&self) -> String {
        let mut out = format!("{}\n", self.name);
        for (d, p) in self.tap_delays_us.iter().zip(&self.tap_powers_db) {
            let _ = writeln!(out, "{d} {p}");
        }
        out
    }
}

/// One block-fading draw: sample-spaced taps and their `N`-point response.
#[derive(Debug, Clone, PartialEq)]
pub struct ChannelRealization {
    pub taps: Vec<Complex>,
    pub freq_response: Vec<Complex>,
}

impl ChannelRealization {
    /// Builds a realization from sample-spaced taps, `H = DFT(taps padded to N)`.
    pub fn from_taps(taps: Vec<Complex>, n_bins: usize) -> Result<Self> {
        if taps.is_empty() || taps.len() > n_bins {
            return Err(invalid(format!("{} taps do not fit {n_bins} bins", taps.len())));
        }
        let mut padded = taps.clone();
        padded.resize(n_bins, Complex::new(0.0, 0.0));
        dsp::dft_in_place(&mut padded);
        Ok(Self {
            taps,
            freq_response: padded,
        })
    }

    /// Channel memory in samples (delay of the last tap).
    pub fn memory(&self) -> usize {
        self.taps.len() - 1
    }
}

/// Sample-spaced tap positions and per-position powers for `profile` at
/// `sample_rate_hz`. Taps rounding to the same sample share that position.
fn tap_layout(profile: &ChannelProfile, sample_rate_hz: f64) -> (usize, Vec<(usize, f64)>) {
    let delays = profile.delays_samples(sample_rate_hz);
    let powers = profile.normalized_powers();
    let len = delays.iter().max().copied().unwrap_or(0) + 1;
    (len, delays.into_iter().zip(powers).collect())
}

/// Draws one realization: each profile tap is an independent zero-mean
/// complex Gaussian whose variance is its normalized linear power.
pub fn draw_realization(
    profile: &ChannelProfile,
    sample_rate_hz: f64,
    n_bins: usize,
    seed: u64,
) -> Result<ChannelRealization> {
    draw_realization_with(profile, sample_rate_hz, n_bins, &mut seed::rng(seed))
}

/// [`draw_realization`] with a caller-supplied generator.
pub fn draw_realization_with<R: Rng + ?Sized>(
    profile: &ChannelProfile,
    sample_rate_hz: f64,
    n_bins: usize,
    rng: &mut R,
) -> Result<ChannelRealization> {
    profile.validate()?;
    let (len, layout) = tap_layout(profile, sample_rate_hz);
    let cp_len = n_bins / 4;
    if len > cp_len.max(1) {
        return Err(Error::CpTooShort {
            memory: len - 1,
            cp_len,
        });
    }
    let mut taps = vec![Complex::new(0.0, 0.0); len];
    for (d, p) in layout {
        let re: f64 = StandardNormal.sample(rng);
        let im: f64 = StandardNormal.sample(rng);
        taps[d] += Complex::new(re, im) * (p / 2.0).sqrt();
    }
    ChannelRealization::from_taps(taps, n_bins)
}

/// Linear convolution of a CP-extended frame with the taps, truncated to the
/// frame length. Samples before the frame are taken as zero.
pub fn apply_multipath(frame: &WaveformFrame, realization: &ChannelRealization) -> Result<WaveformFrame> {
    if !frame.has_cp {
        return Err(Error::MissingCp);
    }
    if realization.memory() > frame.cp_len() {
        return Err(Error::CpTooShort {
            memory: realization.memory(),
            cp_len: frame.cp_len(),
        });
    }
    let x = &frame.samples;
    let samples = (0..x.len())
        .map(|n| {
            realization
                .taps
                .iter()
                .enumerate()
                .take(n + 1)
                .map(|(d, h)| h * x[n - d])
                .sum()
        })
        .collect();
    Ok(WaveformFrame {
        samples,
        has_cp: true,
        n_bins: frame.n_bins,
    })
}

/// One-tap MMSE equalizer: `Y_k conj(H_k) / (|H_k|^2 + noise / signal)`.
///
/// `noise_per_bin` and `signal_power_per_bin` must be expressed in the same
/// transform scale as `received_freq`. With the unscaled forward DFT and a
/// unit-energy frame these are `N sigma^2` and `lambda^2 = N / N_C`.
pub fn mmse_equalize(
    received_freq: &[Complex],
    freq_response: &[Complex],
    noise_per_bin: f64,
    signal_power_per_bin: f64,
) -> Result<Vec<Complex>> {
    if received_freq.len() != freq_response.len() {
        return Err(Error::LengthMismatch {
            expected: freq_response.len(),
            actual: received_freq.len(),
        });
    }
    if !(signal_power_per_bin > 0.0) || !(noise_per_bin >= 0.0) {
        return Err(invalid("signal power must be positive and noise non-negative"));
    }
    let reg = noise_per_bin / signal_power_per_bin;
    Ok(received_freq
        .iter()
        .zip(freq_response)
        .map(|(y, h)| {
            let den = h.norm_sqr() + reg;
            if den > 0.0 {
                y * h.conj() / den
            } else {
                Complex::new(0.0, 0.0)
            }
        })
        .collect())
}
