//! Channel coding for the multipath experiments: a terminated rate-1/2
//! convolutional code with hard-decision Viterbi decoding, a seeded random
//! interleaver and the bit/CCSK-symbol mapping.
//!
//! Bits are `u8` values 0 or 1.

use crate::error::invalid;
use crate::{seed, Error, Result};
use rand::seq::SliceRandom;
use serde::{Deserialize, Serialize};

/// Convolutional code and interleaver settings.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(default)]
pub struct CodeConfig {
    pub constraint_length: u32,
    /// Generator polynomials; the most significant bit taps the current input.
    /// Usually written in octal, e.g. `[0o171, 0o133]`.
    pub generators: [u32; 2],
    pub interleaver_seed: u64,
}

impl Default for CodeConfig {
    fn default() -> Self {
        Self {
            constraint_length: 7,
            generators: [0o171, 0o133],
            interleaver_seed: 0x1EAF,
        }
    }
}

/// Terminated rate-1/2 feed-forward convolutional code.
#[derive(Debug, Clone)]
pub struct ConvolutionalCode {
    k: u32,
    generators: [u32; 2],
    // outputs[reg] = two coded bits for the K-bit register value `reg`.
    outputs: Vec<[u8; 2]>,
}

fn parity(x: u32) -> u8 {
    (x.count_ones() & 1) as u8
}

impl ConvolutionalCode {
    pub fn new(constraint_length: u32, generators: [u32; 2]) -> Result<Self> {
        if !(2..=16).contains(&constraint_length) {
            return Err(invalid("constraint length must be in 2..=16"));
        }
        for g in generators {
            if g == 0 || g >> constraint_length != 0 {
                return Err(invalid(format!(
                    "generator {g:o} must be nonzero with degree below {constraint_length}"
                )));
            }
        }
        let outputs = (0..1u32 << constraint_length)
            .map(|reg| [parity(reg & generators[0]), parity(reg & generators[1])])
            .collect();
        Ok(Self {
            k: constraint_length,
            generators,
            outputs,
        })
    }

    pub fn from_config(cfg: &CodeConfig) -> Result<Self> {
        Self::new(cfg.constraint_length, cfg.generators)
    }

    pub fn constraint_length(&self) -> u32 {
        self.k
    }

    pub fn generators(&self) -> [u32; 2] {
        self.generators
    }

    /// Coded length for `n` information bits: `2 (n + K - 1)`.
    pub fn coded_len(&self, n: usize) -> usize {
        2 * (n + self.k as usize - 1)
    }

    fn n_states(&self) -> usize {
        1 << (self.k - 1)
    }

    /// Encodes `bits` followed by `K - 1` zero tail bits.
    pub fn encode(&self, bits: &[u8]) -> Vec<u8> {
        let mut out = Vec::with_capacity(self.coded_len(bits.len()));
        let mut state = 0u32;
        let tail = std::iter::repeat_n(0u8, self.k as usize - 1);
        for b in bits.iter().copied().chain(tail) {
            let reg = ((b as u32 & 1) << (self.k - 1)) | state;
            out.extend_from_slice(&self.outputs[reg as usize]);
            state = reg >> 1;
        }
        out
    }

    /// Hard-decision maximum-likelihood decoding of a terminated stream.
    pub fn viterbi_decode(&self, coded: &[u8]) -> Result<Vec<u8>> {
        let tail = self.k as usize - 1;
        if !coded.len().is_multiple_of(2) || coded.len() < 2 * tail {
            return Err(invalid(format!(
                "coded length {} is not a terminated rate-1/2 stream",
                coded.len()
            )));
        }
        let steps = coded.len() / 2;
        let n_states = self.n_states();
        let top = self.k - 2;
        const UNREACHED: u32 = u32::MAX / 2;
        let mut metric = vec![UNREACHED; n_states];
        metric[0] = 0;
        let mut next = vec![0u32; n_states];
        // choice[t * n_states + s]: low bit of the predecessor of state s at step t.
        let mut choice = vec![0u8; steps * n_states];
        for t in 0..steps {
            let r0 = coded[2 * t];
            let r1 = coded[2 * t + 1];
            for ns in 0..n_states {
                let b = (ns >> top) as u32;
                let mut best = u32::MAX;
                let mut best_x = 0u8;
                for x in 0..2usize {
                    let s = ((ns << 1) & (n_states - 1)) | x;
                    let reg = (b << (self.k - 1)) | s as u32;
                    let out = self.outputs[reg as usize];
                    let m = metric[s] + (out[0] ^ r0) as u32 + (out[1] ^ r1) as u32;
                    if m < best {
                        best = m;
                        best_x = x as u8;
                    }
                }
                next[ns] = best;
                choice[t * n_states + ns] = best_x;
            }
            std::mem::swap(&mut metric, &mut next);
        }
        let mut decoded = vec![0u8; steps];
        let mut state = 0usize;
        for t in (0..steps).rev() {
            decoded[t] = (state >> top) as u8;
            state = ((state << 1) & (n_states - 1)) | choice[t * n_states + state] as usize;
        }
        decoded.truncate(steps - tail);
        Ok(decoded)
    }
}

/// Seeded uniform permutation of a fixed length.
#[derive(Debug, Clone)]
pub struct Interleaver {
    perm: Vec<usize>,
}

impl Interleaver {
    pub fn new(len: usize, seed: u64) -> Self {
        let mut perm: Vec<usize> = (0..len).collect();
        perm.shuffle(&mut seed::rng(seed));
        Self { perm }
    }

    pub fn len(&self) -> usize {
        self.perm.len()
    }

    pub fn is_empty(&self) -> bool {
        self.perm.is_empty()
    }

    fn check<T>(&self, data: &[T]) -> Result<()> {
        if data.len() != self.perm.len() {
            return Err(Error::LengthMismatch {
                expected: self.perm.len(),
                actual: data.len(),
            });
        }
        Ok(())
    }

    /// `out[i] = data[perm[i]]`.
    pub fn interleave<T: Copy>(&self, data: &[T]) -> Result<Vec<T>> {
        self.check(data)?;
        Ok(self.perm.iter().map(|&j| data[j]).collect())
    }

    pub fn deinterleave<T: Copy + Default>(&self, data: &[T]) -> Result<Vec<T>> {
        self.check(data)?;
        let mut out = vec![T::default(); data.len()];
        for (i, &j) in self.perm.iter().enumerate() {
            out[j] = data[i];
        }
        Ok(out)
    }
}

pub fn interleave(bits: &[u8], seed: u64) -> Vec<u8> {
    Interleaver::new(bits.len(), seed)
        .interleave(bits)
        .expect("length matches")
}

pub fn deinterleave(bits: &[u8], seed: u64) -> Vec<u8> {
    Interleaver::new(bits.len(), seed)
        .deinterleave(bits)
        .expect("length matches")
}

/// `log2(M)` for a power-of-two CCSK order.
pub fn bits_per_symbol(m_order: usize) -> Result<usize> {
    if m_order < 2 || !m_order.is_power_of_two() {
        return Err(invalid(format!("CCSK order {m_order} is not a power of two >= 2")));
    }
    Ok(m_order.trailing_zeros() as usize)
}

/// Splits `bits` into frames of `L` symbols, each symbol built from
/// `log2(M)` bits, most significant bit first.
pub fn map_bits_to_symbols(bits: &[u8], n_clusters: usize, m_order: usize) -> Result<Vec<Vec<usize>>> {
    let k = bits_per_symbol(m_order)?;
    let per_frame = n_clusters * k;
    if per_frame == 0 || !bits.len().is_multiple_of(per_frame) {
        return Err(invalid(format!(
            "{} bits is not a multiple of {per_frame} bits per frame",
            bits.len()
        )));
    }
    Ok(bits
        .chunks(per_frame)
        .map(|frame| {
            frame
                .chunks(k)
                .map(|sym| sym.iter().fold(0usize, |acc, &b| (acc << 1) | (b & 1) as usize))
                .collect()
        })
        .collect())
}

/// Inverse of [`map_bits_to_symbols`].
pub fn map_symbols_to_bits(frames: &[Vec<usize>], n_clusters: usize, m_order: usize) -> Result<Vec<u8>> {
    let k = bits_per_symbol(m_order)?;
    let mut out = Vec::with_capacity(frames.len() * n_clusters * k);
    for frame in frames {
        if frame.len() != n_clusters {
            return Err(Error::LengthMismatch {
                expected: n_clusters,
                actual: frame.len(),
            });
        }
        for &s in frame {
            if s >= m_order {
                return Err(Error::SymbolOutOfRange { symbol: s, m_order });
            }
            out.extend((0..k).rev().map(|i| ((s >> i) & 1) as u8));
        }
    }
    Ok(out)
}
