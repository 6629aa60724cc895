//! Acceptance suite. Prints one PASS/FAIL line per criterion followed by the
//! measured values, and exits non-zero if any criterion fails.
//!
//! Run with `cargo test -p tdcs-core --test acceptance` (add `--release` for
//! a faster run).

use rand::Rng;
use std::time::Instant;
use tdcs::channel::{add_awgn, add_cp, apply_multipath, ChannelRealization, WaveformFrame};
use tdcs::coding::{CodeConfig, ConvolutionalCode};
use tdcs::harness::{
    required_ebn0, run_efficiency_study, run_sidelobe_study, spectrum_efficiency, ChannelKind, EfficiencyRecord,
    Link, Scheme, SimConfig, StopRule,
};
use tdcs::receiver::correlate;
use tdcs::spectrum::{
    build_availability, estimate_beta_min, largest_sidelobe, AvailabilityVector, BandScenario, ClusterPartition,
};
use tdcs::waveform::{generate_phase_vector, Modulator};
use tdcs::{dft, idft, seed, Complex};

const ETA_TOL: f64 = 0.001;
const LOOPBACK_FRAMES: u64 = 1_000;
const SIDELOBE_TRIALS: usize = 10_000;
const DESK_TARGET_BER: f64 = 1e-3;
const LONG_RUN_TARGET_BER: f64 = 1e-4;
const L2_VS_L1_TOL_DB: f64 = 0.5;
const L8_MIN_GAIN_DB: f64 = 3.0;
const LONG_RUN_TOL_DB: f64 = 0.5;
const LONG_RUN_L8_DB: f64 = 4.1;
const LONG_RUN_L64_DB: f64 = 6.1;
const ENERGY_TOL: f64 = 1e-9;
const CORRELATION_TOL: f64 = 1e-9;
const CIRCULARITY_TOL: f64 = 1e-9;
const NOISE_TOL: f64 = 0.01;
const ALL_L: [usize; 7] = [1, 2, 4, 8, 16, 32, 64];

type Criterion = (&'static str, fn() -> Outcome);

struct Outcome {
    pass: bool,
    details: Vec<String>,
}

impl Outcome {
    fn new() -> Self {
        Self {
            pass: true,
            details: Vec::new(),
        }
    }

    fn check(&mut self, ok: bool, detail: String) {
        self.pass &= ok;
        self.details.push(format!("{} {detail}", if ok { "ok  " } else { "FAIL" }));
    }
}

fn required(records: &[EfficiencyRecord], scheme: Scheme, l: usize) -> Option<f64> {
    records
        .iter()
        .find(|r| r.scheme == scheme && r.n_clusters == l)
        .and_then(|r| r.required_ebn0_db)
}

fn show(req: Option<f64>) -> String {
    req.map_or_else(|| "not reached".to_string(), |v| format!("{v:.3} dB"))
}

fn spectrum_efficiency_values() -> Outcome {
    let mut out = Outcome::new();
    let s = BandScenario::reference();
    for (l, quoted) in [(8, 0.104), (64, 0.833)] {
        let eta = spectrum_efficiency(1024, 1024, l, &s).unwrap();
        out.check(
            (eta - quoted).abs() <= ETA_TOL,
            format!("N=1024 L={l}: eta {eta:.6} vs {quoted} (tol {ETA_TOL})"),
        );
    }
    out
}

fn noiseless_loopback() -> Outcome {
    let mut out = Outcome::new();
    let stop = StopRule {
        min_bit_errors: 1,
        max_frames: LOOPBACK_FRAMES,
    };
    for n in [256, 1024] {
        let cfg = SimConfig {
            n_bins: n,
            clusters: ALL_L.to_vec(),
            ..SimConfig::default()
        };
        for scheme in [Scheme::Continuous, Scheme::Random] {
            let mut failures = Vec::new();
            for l in ALL_L {
                let rec = Link::new(&cfg, scheme, l)
                    .unwrap()
                    .simulate(f64::INFINITY, &stop, None)
                    .unwrap();
                if rec.symbol_errors != 0 || rec.frames != LOOPBACK_FRAMES {
                    failures.push(format!("L={l} ({} symbol errors in {} frames)", rec.symbol_errors, rec.frames));
                }
            }
            out.check(
                failures.is_empty(),
                format!("N={n} {scheme}: {LOOPBACK_FRAMES} frames per L, failures {failures:?}"),
            );
        }
    }
    out
}

fn sidelobe_study() -> Outcome {
    let mut out = Outcome::new();
    for n in [256, 1024] {
        let cfg = SimConfig {
            n_bins: n,
            clusters: ALL_L.to_vec(),
            beta_trials: SIDELOBE_TRIALS,
            ..SimConfig::default()
        };
        let rows = run_sidelobe_study(&cfg).unwrap();
        for r in &rows {
            out.details.push(format!(
                "     N={n} L={}: continuous {:.4}, random {:.4}",
                r.n_clusters, r.beta_continuous, r.beta_min_random
            ));
        }
        let below = rows
            .iter()
            .filter(|r| r.n_clusters >= 2)
            .all(|r| r.beta_min_random < r.beta_continuous);
        out.check(below, format!("N={n}: random below continuous for every L >= 2"));
        let monotone = rows.windows(2).all(|w| w[1].beta_min_random >= w[0].beta_min_random);
        out.check(monotone, format!("N={n}: random beta_min non-decreasing in L"));
    }
    out
}

fn brute_force_oracle() -> Outcome {
    let mut out = Outcome::new();
    let free = [1usize, 2, 3, 5, 8, 11, 12, 14];
    let avail = AvailabilityVector::from_unoccupied(16, &free).unwrap();
    let mut oracle = f64::INFINITY;
    let mut count = 0;
    for mask in 0u32..1 << free.len() {
        if mask.count_ones() != 4 {
            continue;
        }
        let (a, b): (Vec<usize>, Vec<usize>) = (0..free.len()).partition(|&i| mask >> i & 1 == 1);
        let clusters = vec![a.iter().map(|&i| free[i]).collect(), b.iter().map(|&i| free[i]).collect()];
        oracle = oracle.min(largest_sidelobe(&ClusterPartition::new(16, clusters).unwrap()));
        count += 1;
    }
    let search = estimate_beta_min(&avail, 2, 2000, 9).unwrap();
    out.check(count == 70, format!("{count} partitions enumerated"));
    out.check(
        search.beta_min == oracle,
        format!("exhaustive {oracle:.12} vs search {:.12}", search.beta_min),
    );
    out
}

fn awgn_ordering() -> Outcome {
    let mut out = Outcome::new();
    let cfg = SimConfig {
        clusters: vec![1, 2, 8],
        ..SimConfig::default()
    };
    assert_eq!(cfg.search.target_ber, DESK_TARGET_BER);
    assert_eq!(cfg.stop.min_bit_errors, 200);
    let recs = run_efficiency_study(&cfg).unwrap();
    let traditional = required(&recs, Scheme::Continuous, 1);
    let random2 = required(&recs, Scheme::Random, 2);
    out.check(
        matches!((traditional, random2), (Some(t), Some(r)) if (r - t).abs() <= L2_VS_L1_TOL_DB),
        format!(
            "N=256: L=2 random {} vs L=1 traditional {} (tol {L2_VS_L1_TOL_DB} dB)",
            show(random2),
            show(traditional)
        ),
    );
    let random8 = required(&recs, Scheme::Random, 8);
    let continuous8 = required(&recs, Scheme::Continuous, 8);
    // An unreached continuous target lies above the search range.
    let gap = random8.map(|r| continuous8.unwrap_or(cfg.search.hi_db) - r);
    out.check(
        gap.is_some_and(|g| g >= L8_MIN_GAIN_DB),
        format!(
            "N=256 L=8: continuous {} vs random {} (need gap >= {L8_MIN_GAIN_DB} dB)",
            show(continuous8),
            show(random8)
        ),
    );
    out
}

fn long_run_points() -> Outcome {
    let mut out = Outcome::new();
    let mut cfg = SimConfig {
        n_bins: 1024,
        clusters: vec![8, 64],
        schemes: vec![Scheme::Random],
        ..SimConfig::default()
    };
    cfg.search.target_ber = LONG_RUN_TARGET_BER;
    for (l, quoted) in [(8, LONG_RUN_L8_DB), (64, LONG_RUN_L64_DB)] {
        let req = required_ebn0(&Link::new(&cfg, Scheme::Random, l).unwrap(), &cfg).unwrap();
        out.check(
            req.is_some_and(|v| (v - quoted).abs() <= LONG_RUN_TOL_DB),
            format!("N=1024 L={l} random at BER {LONG_RUN_TARGET_BER}: {} vs {quoted} dB (tol {LONG_RUN_TOL_DB})", show(req)),
        );
    }
    out
}

fn multipath_ordering() -> Outcome {
    let mut out = Outcome::new();
    let cfg = SimConfig {
        clusters: vec![2, 4, 8],
        channel: ChannelKind::Multipath,
        coding: true,
        ..SimConfig::default()
    };
    let recs = run_efficiency_study(&cfg).unwrap();
    let c2 = required(&recs, Scheme::Continuous, 2);
    let r2 = required(&recs, Scheme::Random, 2);
    out.check(
        r2.is_some_and(|r| r < c2.unwrap_or(f64::INFINITY)),
        format!("L=2: random {} vs continuous {}", show(r2), show(c2)),
    );
    let (r4, r8) = (required(&recs, Scheme::Random, 4), required(&recs, Scheme::Random, 8));
    let steep = match (r2, r4, r8) {
        (Some(a), Some(b), Some(c)) => c - b > b - a,
        _ => false,
    };
    out.check(
        steep,
        format!("random L=2/4/8: {} / {} / {} (need step 4->8 > step 2->4)", show(r2), show(r4), show(r8)),
    );
    out
}

fn numerical_invariants() -> Outcome {
    let mut out = Outcome::new();
    let avail = build_availability(&BandScenario::reference(), 256).unwrap();
    let phase = generate_phase_vector(17, 256).unwrap();
    let mut rng = seed::rng(2024);

    let mut worst_energy: f64 = 0.0;
    for l in ALL_L {
        let part = tdcs::spectrum::partition_random(&avail, l, l as u64).unwrap();
        let m = Modulator::new(&part, &phase, 256).unwrap();
        for _ in 0..20 {
            let symbols: Vec<usize> = (0..l).map(|_| rng.random_range(0..256)).collect();
            worst_energy = worst_energy.max((m.modulate(&symbols).unwrap().energy() - 1.0).abs());
        }
    }
    out.check(worst_energy <= ENERGY_TOL, format!("frame energy error {worst_energy:.2e} (tol {ENERGY_TOL:e})"));

    let mut worst_corr: f64 = 0.0;
    for n in [4usize, 16, 64] {
        let ph = generate_phase_vector(n as u64, n).unwrap();
        for _ in 0..10 {
            let cluster: Vec<usize> = (0..n).filter(|_| rng.random::<f64>() < 0.5).chain([n - 1]).collect();
            let r: Vec<Complex> = (0..n).map(|_| Complex::new(rng.random(), rng.random())).collect();
            let mut spec = vec![Complex::new(0.0, 0.0); n];
            for &k in &cluster {
                spec[k] = ph.phases()[k];
            }
            let b = idft(&spec);
            let fast = correlate(&r, &cluster, &ph).unwrap();
            for (tau, f) in fast.iter().enumerate() {
                let direct: Complex = (0..n).map(|m| r[(m + tau) % n] * b[m].conj()).sum();
                worst_corr = worst_corr.max((f - direct).norm());
            }
        }
    }
    out.check(
        worst_corr <= CORRELATION_TOL,
        format!("transform vs direct correlation {worst_corr:.2e} (tol {CORRELATION_TOL:e})"),
    );

    let mut worst_circ: f64 = 0.0;
    for memory in [0usize, 5, 64] {
        let x: Vec<Complex> = (0..256).map(|_| Complex::new(rng.random(), rng.random())).collect();
        let taps: Vec<Complex> = (0..=memory).map(|_| Complex::new(rng.random(), rng.random())).collect();
        let real = ChannelRealization::from_taps(taps, 256).unwrap();
        let rx = apply_multipath(&add_cp(&WaveformFrame::new(x.clone())).unwrap(), &real).unwrap();
        let (r, xk) = (dft(rx.body()), dft(&x));
        for k in 0..256 {
            worst_circ = worst_circ.max((r[k] - real.freq_response[k] * xk[k]).norm());
        }
    }
    out.check(
        worst_circ <= CIRCULARITY_TOL,
        format!("prefix circularity {worst_circ:.2e} (tol {CIRCULARITY_TOL:e})"),
    );

    let n = 1_000_000;
    let var = 0.25;
    let noise = add_awgn(&WaveformFrame::new(vec![Complex::new(0.0, 0.0); n]), var, 3).unwrap();
    let measured = noise.samples.iter().map(|w| w.norm_sqr()).sum::<f64>() / n as f64;
    out.check(
        (measured / var - 1.0).abs() <= NOISE_TOL,
        format!("noise variance {measured:.5} for {var} over {n} samples (tol {NOISE_TOL})"),
    );

    let code = ConvolutionalCode::from_config(&CodeConfig::default()).unwrap();
    let mut code_ok = true;
    for s in 0..4 {
        let mut rng = seed::rng(s);
        let msg: Vec<u8> = (0..64).map(|_| rng.random_range(0..2u8)).collect();
        let coded = code.encode(&msg);
        code_ok &= code.viterbi_decode(&coded).unwrap() == msg;
        for i in 0..coded.len() {
            let mut rx = coded.clone();
            rx[i] ^= 1;
            code_ok &= code.viterbi_decode(&rx).unwrap() == msg;
        }
    }
    out.check(code_ok, "64-bit roundtrip and every single-bit error corrected".to_string());
    out
}

fn main() {
    let criteria: [Criterion; 8] = [
        ("spectrum efficiency", spectrum_efficiency_values),
        ("noiseless loopback", noiseless_loopback),
        ("sidelobe study", sidelobe_study),
        ("brute-force partition oracle", brute_force_oracle),
        ("AWGN ordering", awgn_ordering),
        ("long-run AWGN reference points", long_run_points),
        ("multipath ordering", multipath_ordering),
        ("numerical invariants", numerical_invariants),
    ];
    let mut failed = 0;
    for (name, run) in criteria {
        let start = Instant::now();
        let outcome = run();
        let secs = start.elapsed().as_secs_f64();
        println!("{} {name} ({secs:.1} s)", if outcome.pass { "PASS" } else { "FAIL" });
        for d in &outcome.details {
            println!("    {d}");
        }
        failed += usize::from(!outcome.pass);
    }
    println!("acceptance: {} passed, {failed} failed", criteria.len() - failed);
    if failed > 0 {
        std::process::exit(1);
    }
}
