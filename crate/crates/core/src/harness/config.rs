//! Simulation configuration.
//!
//! Configs are TOML files. Every field has a default, so an empty file is a
//! valid config describing the reference band (10 MHz, occupied ranges
//! 2.5-3.75 MHz and 6.25-7.5 MHz), `N = 256`, `M = N`, uncoded AWGN.
//!
//! ```toml
//! n_bins = 1024
//! clusters = [1, 8, 64]
//! schemes = ["random"]
//! ebn0_grid_db = [2.0, 3.0, 4.0, 5.0]
//!
//! [stop]
//! min_bit_errors = 200
//! max_frames = 200000
//! ```

use crate::channel::ChannelProfile;
use crate::coding::{bits_per_symbol, CodeConfig, ConvolutionalCode};
use crate::error::invalid;
use crate::spectrum::{build_availability, AvailabilityVector, BandScenario, DEFAULT_BETA_TRIALS};
use crate::{Error, Result};
use serde::{Deserialize, Serialize};
use std::fmt;
use std::path::Path;
use std::str::FromStr;

/// Spectrum bin allocation scheme.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Scheme {
    Continuous,
    Random,
}

impl Scheme {
    pub fn as_str(self) -> &'static str {
        match self {
            Scheme::Continuous => "continuous",
            Scheme::Random => "random",
        }
    }

    pub(crate) fn tag(self) -> u64 {
        match self {
            Scheme::Continuous => 1,
            Scheme::Random => 2,
        }
    }
}

impl fmt::Display for Scheme {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Scheme {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "continuous" => Ok(Scheme::Continuous),
            "random" => Ok(Scheme::Random),
            _ => Err(invalid(format!("unknown scheme {s:?}"))),
        }
    }
}

/// Propagation channel.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ChannelKind {
    Awgn,
    /// Block-fading multipath with a quarter-length cyclic prefix and
    /// MMSE equalization (perfect channel knowledge).
    Multipath,
}

/// Monte-Carlo stop rule for one sweep point.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct StopRule {
    pub min_bit_errors: u64,
    pub max_frames: u64,
}

impl Default for StopRule {
    fn default() -> Self {
        Self {
            min_bit_errors: 200,
            max_frames: 1_000_000,
        }
    }
}

/// Settings of the required-Eb/N0 search used by the efficiency study.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct SearchConfig {
    pub target_ber: f64,
    pub lo_db: f64,
    pub hi_db: f64,
    /// Bisection stops when the bracket is narrower than this.
    pub tolerance_db: f64,
}

impl Default for SearchConfig {
    fn default() -> Self {
        Self {
            target_ber: 1e-3,
            lo_db: -2.0,
            hi_db: 30.0,
            tolerance_db: 0.05,
        }
    }
}

/// Everything a sweep needs.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct SimConfig {
    pub scenario: BandScenario,
    pub n_bins: usize,
    /// CCSK order; `None` means `M = N`.
    pub m_order: Option<usize>,
    pub clusters: Vec<usize>,
    pub schemes: Vec<Scheme>,
    pub seed: u64,
    pub ebn0_grid_db: Vec<f64>,
    pub channel: ChannelKind,
    /// Channel profile file; the COST 207 RAx6 profile when absent.
    pub channel_profile: Option<String>,
    pub coding: bool,
    pub code: CodeConfig,
    /// Minimum coded block length (bits) when coding is on. A block spans
    /// whole frames and is filled exactly.
    pub min_coded_block_bits: usize,
    pub stop: StopRule,
    pub search: SearchConfig,
    /// Trials for the sidelobe study.
    pub beta_trials: usize,
    /// When nonzero, the random scheme uses the lowest-sidelobe partition out
    /// of this many draws instead of a single draw.
    pub random_partition_trials: usize,
}

impl Default for SimConfig {
    fn default() -> Self {
        Self {
            scenario: BandScenario::reference(),
            n_bins: 256,
            m_order: None,
            clusters: vec![1, 2, 4, 8, 16, 32, 64],
            schemes: vec![Scheme::Continuous, Scheme::Random],
            seed: 1,
            ebn0_grid_db: (0..=12).map(f64::from).collect(),
            channel: ChannelKind::Awgn,
            channel_profile: None,
            coding: false,
            code: CodeConfig::default(),
            min_coded_block_bits: 4096,
            stop: StopRule::default(),
            search: SearchConfig::default(),
            beta_trials: DEFAULT_BETA_TRIALS,
            random_partition_trials: 0,
        }
    }
}

impl SimConfig {
    pub fn from_toml(text: &str) -> Result<Self> {
        let cfg: Self = toml::from_str(text)?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self> {
        Self::from_toml(&std::fs::read_to_string(path)?)
    }

    pub fn to_toml(&self) -> String {
        toml::to_string_pretty(self).expect("config serializes")
    }

    pub fn m_order(&self) -> usize {
        self.m_order.unwrap_or(self.n_bins)
    }

    pub fn availability(&self) -> Result<AvailabilityVector> {
        build_availability(&self.scenario, self.n_bins)
    }

    pub fn channel_profile(&self) -> Result<ChannelProfile> {
        match &self.channel_profile {
            Some(path) => ChannelProfile::parse(&std::fs::read_to_string(path)?),
            None => Ok(ChannelProfile::cost207_rax6()),
        }
    }

    /// Checks every constraint before any simulation runs.
    pub fn validate(&self) -> Result<()> {
        let avail = self.availability()?;
        let m = self.m_order();
        if m < 2 || !self.n_bins.is_multiple_of(m) {
            return Err(invalid(format!("CCSK order {m} must divide N = {}", self.n_bins)));
        }
        bits_per_symbol(m)?;
        if self.clusters.is_empty() || self.schemes.is_empty() {
            return Err(invalid("at least one cluster count and one scheme are required"));
        }
        for &l in &self.clusters {
            if l == 0 || avail.n_unoccupied() % l != 0 {
                return Err(Error::ClusterSizeMismatch {
                    n_unoccupied: avail.n_unoccupied(),
                    n_clusters: l,
                });
            }
        }
        if self.ebn0_grid_db.iter().any(|x| x.is_nan()) {
            return Err(invalid("Eb/N0 grid contains NaN"));
        }
        if self.stop.max_frames == 0 {
            return Err(invalid("max_frames must be positive"));
        }
        let s = &self.search;
        if !(s.target_ber > 0.0 && s.target_ber < 0.5) || !(s.lo_db < s.hi_db) || !(s.tolerance_db > 0.0) {
            return Err(invalid("search needs 0 < target_ber < 0.5, lo_db < hi_db, tolerance_db > 0"));
        }
        if self.coding {
            ConvolutionalCode::from_config(&self.code)?;
        }
        if self.channel == ChannelKind::Multipath {
            if !self.n_bins.is_multiple_of(4) {
                return Err(invalid("multipath runs need N divisible by 4 for the prefix"));
            }
            let profile = self.channel_profile()?;
            profile.validate()?;
            let memory = profile
                .delays_samples(self.scenario.bandwidth_hz)
                .into_iter()
                .max()
                .unwrap_or(0);
            if memory >= self.n_bins / 4 {
                return Err(Error::CpTooShort {
                    memory,
                    cp_len: self.n_bins / 4,
                });
            }
        }
        Ok(())
    }
}
