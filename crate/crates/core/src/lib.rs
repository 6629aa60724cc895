//! Cluster-based transform domain communication system (TDCS).
//!
//! The unoccupied spectrum bins of a band are split into `L` disjoint
//! clusters. Each cluster synthesizes its own fundamental modulation waveform
//! (FMW) and carries an independent cyclic code shift keying (CCSK) symbol,
//! so one frame carries `L * log2(M)` bits while a single inverse transform
//! generates the whole frame.
//!
//! Modules:
//!
//! * [`spectrum`]: availability vectors, cluster partitions and sidelobe analysis.
//! * [`waveform`]: phase vectors, FMW synthesis and multi-cluster modulation.
//! * [`channel`]: AWGN, cyclic prefix, block-fading multipath and MMSE equalization.
//! * [`receiver`]: frequency-domain correlation and real-part CCSK detection.
//! * [`coding`]: rate-1/2 convolutional code, interleaver, bit/symbol mapping.
//! * [`harness`]: configuration, BER/efficiency/sidelobe sweeps and CSV output.

// Negated float comparisons reject NaN along with out-of-range values.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod channel;
pub mod coding;
mod dsp;
mod error;
pub mod harness;
pub mod receiver;
pub mod seed;
pub mod spectrum;
pub mod waveform;

pub use error::{Error, Result};

/// Complex sample type used throughout the crate.
pub type Complex = num_complex::Complex<f64>;

pub use dsp::{dft, idft};
