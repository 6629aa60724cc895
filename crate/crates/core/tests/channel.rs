//! Channel checks against direct convolution and sample statistics.

use rand::Rng;
use tdcs::channel::{
    add_awgn, add_cp, apply_multipath, draw_realization, ebn0_to_noise_variance, mmse_equalize, remove_cp,
    ChannelProfile, ChannelRealization, WaveformFrame,
};
use tdcs::{dft, seed, Complex, Error};

fn random_frame(n: usize, s: u64) -> WaveformFrame {
    let mut rng = seed::rng(s);
    WaveformFrame::new(
        (0..n)
            .map(|_| Complex::new(rng.random::<f64>() - 0.5, rng.random::<f64>() - 0.5))
            .collect(),
    )
}

fn random_taps(len: usize, s: u64) -> Vec<Complex> {
    let mut rng = seed::rng(s);
    (0..len)
        .map(|_| Complex::new(rng.random::<f64>() - 0.5, rng.random::<f64>() - 0.5))
        .collect()
}

#[test]
fn prefix_makes_channel_circular() {
    for (n, memory) in [(16, 3), (64, 16), (256, 5), (256, 64)] {
        let frame = random_frame(n, n as u64 + memory as u64);
        let real = ChannelRealization::from_taps(random_taps(memory + 1, 7), n).unwrap();
        let rx = apply_multipath(&add_cp(&frame).unwrap(), &real).unwrap();
        let r = dft(remove_cp(&rx).unwrap().body());
        let x = dft(&frame.samples);
        for k in 0..n {
            assert!((r[k] - real.freq_response[k] * x[k]).norm() < 1e-9, "N = {n}, bin {k}");
        }
    }
}

#[test]
fn noise_adds_linearly_after_prefix_removal() {
    let n = 64;
    let frame = random_frame(n, 1);
    let real = ChannelRealization::from_taps(random_taps(6, 2), n).unwrap();
    let clean = apply_multipath(&add_cp(&frame).unwrap(), &real).unwrap();
    let noisy = add_awgn(&clean, 0.3, 5).unwrap();
    let w: Vec<Complex> = noisy.body().iter().zip(clean.body()).map(|(a, b)| a - b).collect();
    let r = dft(noisy.body());
    let x = dft(&frame.samples);
    let wk = dft(&w);
    for k in 0..n {
        assert!((r[k] - (real.freq_response[k] * x[k] + wk[k])).norm() < 1e-9);
    }
}

#[test]
fn two_tap_channel_matches_direct_convolution() {
    let n = 32;
    let frame = add_cp(&random_frame(n, 3)).unwrap();
    let (h0, h2) = (Complex::new(0.8, -0.1), Complex::new(-0.3, 0.4));
    let real = ChannelRealization::from_taps(vec![h0, Complex::new(0.0, 0.0), h2], n).unwrap();
    let out = apply_multipath(&frame, &real).unwrap();
    let x = &frame.samples;
    for i in 0..x.len() {
        let expected = h0 * x[i] + if i >= 2 { h2 * x[i - 2] } else { Complex::new(0.0, 0.0) };
        assert!((out.samples[i] - expected).norm() < 1e-15);
    }
}

#[test]
fn prefix_copies_tail() {
    let frame = random_frame(64, 4);
    let with = add_cp(&frame).unwrap();
    assert_eq!(with.samples.len(), 80);
    assert_eq!(&with.samples[..16], &frame.samples[48..]);
    assert_eq!(with.body(), frame.samples.as_slice());
    assert!(matches!(apply_multipath(&frame, &ChannelRealization::from_taps(vec![Complex::new(1.0, 0.0)], 64).unwrap()), Err(Error::MissingCp)));
}

#[test]
fn noise_variance_is_calibrated() {
    let n = 1_000_000;
    let var = 0.37;
    let zero = WaveformFrame::new(vec![Complex::new(0.0, 0.0); n]);
    let a = add_awgn(&zero, var, 11).unwrap().samples;
    let b = add_awgn(&zero, var, 12).unwrap().samples;

    let power = a.iter().map(|w| w.norm_sqr()).sum::<f64>() / n as f64;
    assert!((power / var - 1.0).abs() < 0.01, "power {power}");
    let re = a.iter().map(|w| w.re * w.re).sum::<f64>() / n as f64;
    assert!((re / (var / 2.0) - 1.0).abs() < 0.01, "real power {re}");

    let cross: Complex = a.iter().zip(&b).map(|(x, y)| x * y.conj()).sum::<Complex>() / n as f64;
    assert!(cross.norm() / var < 3.0 / (n as f64).sqrt(), "cross {cross}");

    assert_eq!(a, add_awgn(&zero, var, 11).unwrap().samples);
    let frame = random_frame(32, 9);
    assert_eq!(add_awgn(&frame, 0.0, 1).unwrap().samples, frame.samples);
}

#[test]
fn noise_variance_formula() {
    assert!((ebn0_to_noise_variance(0.0, 8.0, 1.0, 256).unwrap() - 0.125).abs() < 1e-15);
    assert!((ebn0_to_noise_variance(10.0, 4.0, 2.0, 256).unwrap() - 0.05).abs() < 1e-15);
    assert_eq!(ebn0_to_noise_variance(f64::INFINITY, 8.0, 1.0, 256).unwrap(), 0.0);
    assert!(ebn0_to_noise_variance(3.0, 0.0, 1.0, 256).is_err());
}

#[test]
fn fading_power_is_normalized() {
    let profile = ChannelProfile::cost207_rax6();
    assert_eq!(profile.delays_samples(10e6), vec![0, 1, 2, 3, 4, 5]);
    let draws = 10_000;
    let mut total = 0.0;
    let mut per_tap = [0.0; 6];
    for i in 0..draws {
        let r = draw_realization(&profile, 10e6, 256, i).unwrap();
        assert!(r.memory() <= 5);
        for (acc, t) in per_tap.iter_mut().zip(&r.taps) {
            *acc += t.norm_sqr();
        }
        total += r.taps.iter().map(|t| t.norm_sqr()).sum::<f64>();
    }
    let mean = total / draws as f64;
    assert!((mean - 1.0).abs() < 0.02, "mean tap energy {mean}");
    for (acc, p) in per_tap.iter().zip(profile.normalized_powers()) {
        let measured = acc / draws as f64;
        assert!((measured / p - 1.0).abs() < 0.1, "tap power {measured} vs {p}");
    }
    let again = draw_realization(&profile, 10e6, 256, 3).unwrap();
    assert_eq!(again.taps, draw_realization(&profile, 10e6, 256, 3).unwrap().taps);
}

#[test]
fn short_prefix_rejected() {
    let profile = ChannelProfile::cost207_rax6();
    assert!(matches!(draw_realization(&profile, 10e6, 16, 1), Err(Error::CpTooShort { .. })));
}

#[test]
fn profile_text_roundtrip() {
    let profile = ChannelProfile::cost207_rax6();
    let parsed = ChannelProfile::parse(&profile.to_text()).unwrap();
    assert_eq!(parsed, profile);
    let custom = ChannelProfile::parse("two-ray\n# comment\n0 0\n0.3 -3\n").unwrap();
    assert_eq!(custom.delays_samples(10e6), vec![0, 3]);
    assert!(ChannelProfile::parse("bad\n0 x\n").is_err());
}

#[test]
fn equalizer_limits() {
    let y: Vec<Complex> = (0..8).map(|k| Complex::new(k as f64, 1.0)).collect();
    let flat = vec![Complex::new(1.0, 0.0); 8];
    assert_eq!(mmse_equalize(&y, &flat, 0.0, 1.0).unwrap(), y);
    let two = vec![Complex::new(2.0, 0.0); 8];
    for (a, b) in mmse_equalize(&y, &two, 0.0, 1.0).unwrap().iter().zip(&y) {
        assert!((a - b / 2.0).norm() < 1e-15);
    }
    let null = vec![Complex::new(0.0, 0.0); 8];
    assert!(mmse_equalize(&y, &null, 0.1, 1.0).unwrap().iter().all(|v| v.norm() == 0.0));
}
