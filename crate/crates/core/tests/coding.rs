//! Convolutional code, interleaver and bit mapping.

use proptest::prelude::*;
use rand::Rng;
use tdcs::coding::{
    bits_per_symbol, deinterleave, interleave, map_bits_to_symbols, map_symbols_to_bits, CodeConfig,
    ConvolutionalCode, Interleaver,
};
use tdcs::seed;

fn standard_code() -> ConvolutionalCode {
    ConvolutionalCode::from_config(&CodeConfig::default()).unwrap()
}

// Textbook encoder: output j at time i is the parity of generator taps
// applied to u[i], u[i-1], ..., u[i-6], with the top tap on the newest bit.
fn reference_encode(bits: &[u8], generators: [u32; 2]) -> Vec<u8> {
    let k = 7;
    let mut padded = bits.to_vec();
    padded.extend(std::iter::repeat_n(0, k - 1));
    let mut out = Vec::with_capacity(2 * padded.len());
    for i in 0..padded.len() {
        for g in generators {
            let mut parity = 0;
            for j in 0..k {
                if i >= j && (g >> (k - 1 - j)) & 1 == 1 {
                    parity ^= padded[i - j];
                }
            }
            out.push(parity);
        }
    }
    out
}

fn random_bits(len: usize, s: u64) -> Vec<u8> {
    let mut rng = seed::rng(s);
    (0..len).map(|_| rng.random_range(0..2u8)).collect()
}

#[test]
fn encoder_matches_textbook_convolution() {
    let code = standard_code();
    assert_eq!(code.generators(), [0o171, 0o133]);
    for s in 0..20 {
        let bits = random_bits(100, s);
        assert_eq!(code.encode(&bits), reference_encode(&bits, [0o171, 0o133]));
    }
}

#[test]
fn impulse_weight_is_free_distance() {
    let code = standard_code();
    let weight: u32 = code.encode(&[1]).iter().map(|&b| u32::from(b)).sum();
    assert_eq!(weight, 10);
}

#[test]
fn every_single_error_is_corrected() {
    let code = standard_code();
    for s in 0..8 {
        let msg = random_bits(64, s);
        let coded = code.encode(&msg);
        assert_eq!(coded.len(), 2 * (64 + 6));
        for i in 0..coded.len() {
            let mut rx = coded.clone();
            rx[i] ^= 1;
            assert_eq!(code.viterbi_decode(&rx).unwrap(), msg, "message {s}, flip {i}");
        }
    }
}

#[test]
fn widely_spaced_errors_are_corrected() {
    let code = standard_code();
    let msg = random_bits(64, 99);
    let coded = code.encode(&msg);
    for first in 0..20 {
        let mut rx = coded.clone();
        for i in (first..coded.len()).step_by(40) {
            rx[i] ^= 1;
        }
        assert_eq!(code.viterbi_decode(&rx).unwrap(), msg);
    }
}

#[test]
fn zeros_decode_to_zeros() {
    let code = standard_code();
    assert_eq!(code.viterbi_decode(&[0; 140]).unwrap(), vec![0; 64]);
    assert!(code.viterbi_decode(&[0; 13]).is_err());
}

#[test]
fn mapping_examples() {
    assert_eq!(map_bits_to_symbols(&[0, 0, 0, 0, 0, 1, 0, 1], 1, 256).unwrap(), vec![vec![5]]);
    assert_eq!(bits_per_symbol(256).unwrap() * 8, 64);
    assert!(bits_per_symbol(100).is_err());
}

proptest! {
    #[test]
    fn encode_decode_roundtrip(bits in prop::collection::vec(0u8..2, 1..300)) {
        let code = standard_code();
        prop_assert_eq!(code.viterbi_decode(&code.encode(&bits)).unwrap(), bits);
    }

    #[test]
    fn interleaver_roundtrip(bits in prop::collection::vec(0u8..2, 0..500), s in any::<u64>()) {
        prop_assert_eq!(deinterleave(&interleave(&bits, s), s), bits.clone());
        let il = Interleaver::new(bits.len(), s);
        prop_assert_eq!(il.deinterleave(&il.interleave(&bits).unwrap()).unwrap(), bits);
    }

    #[test]
    fn bit_mapping_roundtrip(frames in 1usize..5, l_pow in 0u32..4, m_pow in 1u32..9, s in any::<u64>()) {
        let l = 1usize << l_pow;
        let m = 1usize << m_pow;
        let bits = random_bits(frames * l * m_pow as usize, s);
        let symbols = map_bits_to_symbols(&bits, l, m).unwrap();
        prop_assert_eq!(symbols.len(), frames);
        prop_assert!(symbols.iter().flatten().all(|&x| x < m));
        prop_assert_eq!(map_symbols_to_bits(&symbols, l, m).unwrap(), bits);
    }
}
