use anyhow::{Context, Result};
use clap::{Args, Parser, Subcommand};
use std::fs::{self, File};
use std::io::{self, Write};
use std::path::{Path, PathBuf};
use tdcs::harness::{self, ChannelKind, Scheme, SimConfig};
use tdcs::spectrum;
use tdcs::waveform::{energy_normalization, synthesize_fmw};

/// Cluster-based TDCS simulations.
#[derive(Debug, Parser)]
#[command(name = "tdcs", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// BER vs Eb/N0 sweep
    Ber(Common),
    /// Required Eb/N0 at the target BER vs spectrum efficiency
    Efficiency(Common),
    /// Largest autocorrelation sidelobes, continuous vs best random partition
    Sidelobes(Common),
    /// Export a partition and its per-cluster FMWs
    Design(Common),
    /// Print spectrum efficiency and search space sizes
    Info(Common),
}

#[derive(Debug, Args)]
struct Common {
    /// TOML config file; defaults describe the reference 10 MHz scenario
    #[arg(long, short)]
    config: Option<PathBuf>,
    /// Output directory (stdout when absent)
    #[arg(long, short)]
    out: Option<PathBuf>,
    #[arg(long)]
    n_bins: Option<usize>,
    #[arg(long)]
    m_order: Option<usize>,
    /// Comma-separated cluster counts
    #[arg(long, value_delimiter = ',')]
    clusters: Option<Vec<usize>>,
    /// Comma-separated schemes (continuous, random)
    #[arg(long, value_delimiter = ',')]
    schemes: Option<Vec<String>>,
    #[arg(long)]
    seed: Option<u64>,
    /// Comma-separated Eb/N0 grid in dB
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
    ebn0: Option<Vec<f64>>,
    /// Use the multipath channel (prefix + MMSE equalizer)
    #[arg(long)]
    multipath: bool,
    /// Channel profile file (implies --multipath)
    #[arg(long)]
    profile: Option<PathBuf>,
    /// Enable the rate-1/2 convolutional code
    #[arg(long)]
    coded: bool,
    #[arg(long)]
    target_ber: Option<f64>,
    #[arg(long)]
    min_bit_errors: Option<u64>,
    #[arg(long)]
    max_frames: Option<u64>,
    /// Monte-Carlo trials for the sidelobe study
    #[arg(long)]
    trials: Option<usize>,
}

impl Common {
    fn config(&self) -> Result<SimConfig> {
        let mut cfg = match &self.config {
            Some(p) => SimConfig::load(p).with_context(|| format!("loading {}", p.display()))?,
            None => SimConfig::default(),
        };
        if let Some(n) = self.n_bins {
            cfg.n_bins = n;
        }
        if self.m_order.is_some() {
            cfg.m_order = self.m_order;
        }
        if let Some(c) = &self.clusters {
            cfg.clusters = c.clone();
        }
        if let Some(s) = &self.schemes {
            cfg.schemes = s.iter().map(|x| x.parse()).collect::<Result<Vec<Scheme>, _>>()?;
        }
        if let Some(s) = self.seed {
            cfg.seed = s;
        }
        if let Some(e) = &self.ebn0 {
            cfg.ebn0_grid_db = e.clone();
        }
        if self.multipath || self.profile.is_some() {
            cfg.channel = ChannelKind::Multipath;
        }
        if let Some(p) = &self.profile {
            cfg.channel_profile = Some(p.display().to_string());
        }
        if self.coded {
            cfg.coding = true;
        }
        if let Some(t) = self.target_ber {
            cfg.search.target_ber = t;
        }
        if let Some(m) = self.min_bit_errors {
            cfg.stop.min_bit_errors = m;
        }
        if let Some(m) = self.max_frames {
            cfg.stop.max_frames = m;
        }
        if let Some(t) = self.trials {
            cfg.beta_trials = t;
        }
        cfg.validate()?;
        Ok(cfg)
    }

    fn sink(&self, name: &str) -> Result<Box<dyn Write>> {
        match &self.out {
            Some(dir) => {
                fs::create_dir_all(dir)?;
                let path = dir.join(name);
                Ok(Box::new(File::create(&path).with_context(|| format!("creating {}", path.display()))?))
            }
            None => Ok(Box::new(io::stdout().lock())),
        }
    }

    fn write_manifest(&self, cfg: &SimConfig, command: &str) -> Result<()> {
        if let Some(dir) = &self.out {
            fs::create_dir_all(dir)?;
            fs::write(dir.join(format!("{command}.manifest.toml")), harness::manifest(cfg, command))?;
        }
        Ok(())
    }
}

fn main() -> Result<()> {
    let cli = Cli::parse();
    match cli.command {
        Command::Ber(c) => {
            let cfg = c.config()?;
            let records = harness::run_ber_sweep_with(&cfg, |r| {
                eprintln!(
                    "{} L={} Eb/N0={} dB: {} errors / {} bits, BER {:.3e}",
                    r.scheme, r.n_clusters, r.ebn0_db, r.bit_errors, r.bits, r.ber
                )
            })?;
            harness::write_csv(&records, c.sink("ber.csv")?)?;
            c.write_manifest(&cfg, "ber")?;
        }
        Command::Efficiency(c) => {
            let cfg = c.config()?;
            let records = harness::run_efficiency_study(&cfg)?;
            harness::write_efficiency_csv(&records, c.sink("efficiency.csv")?)?;
            c.write_manifest(&cfg, "efficiency")?;
        }
        Command::Sidelobes(c) => {
            let cfg = c.config()?;
            let records = harness::run_sidelobe_study(&cfg)?;
            harness::write_csv(&records, c.sink("sidelobes.csv")?)?;
            c.write_manifest(&cfg, "sidelobes")?;
        }
        Command::Design(c) => design(&c)?,
        Command::Info(c) => info(&c.config()?)?,
    }
    Ok(())
}

fn design(c: &Common) -> Result<()> {
    let cfg = c.config()?;
    let dir = c.out.as_deref().unwrap_or(Path::new("."));
    fs::create_dir_all(dir)?;
    let phase = harness::build_phase(&cfg)?;
    let avail = cfg.availability()?;
    let lambda = energy_normalization(cfg.n_bins, avail.n_unoccupied());
    for &scheme in &cfg.schemes {
        for &l in &cfg.clusters {
            let part = harness::design_partition(&cfg, scheme, l)?;
            let stem = format!("{scheme}_N{}_L{l}", cfg.n_bins);
            fs::write(dir.join(format!("{stem}.partition.txt")), part.to_text())?;
            for (i, cluster) in part.clusters().iter().enumerate() {
                let fmw = synthesize_fmw(cluster, &phase, cfg.n_bins, lambda)?;
                fmw.write_dump(File::create(dir.join(format!("{stem}_c{i}.fmw.txt")))?)?;
            }
            let (beta, mag) = spectrum::largest_sidelobes(&part);
            println!("{stem}: beta {beta:.4} (|R| max {mag:.4})");
        }
    }
    c.write_manifest(&cfg, "design")?;
    Ok(())
}

fn info(cfg: &SimConfig) -> Result<()> {
    let avail = cfg.availability()?;
    let m = cfg.m_order();
    println!(
        "W = {} Hz, N = {}, M = {m}, bin spacing {} Hz, gamma = {}, N_C = {}",
        cfg.scenario.bandwidth_hz,
        cfg.n_bins,
        cfg.scenario.bin_spacing_hz(cfg.n_bins),
        cfg.scenario.unoccupied_ratio(),
        avail.n_unoccupied()
    );
    println!("L,eta_bits_per_s_per_hz,search_space_exact_digits,search_space_log10,stirling_log10");
    for &l in &cfg.clusters {
        let eta = harness::spectrum_efficiency(cfg.n_bins, m, l, &cfg.scenario)?;
        let size = spectrum::search_space_size(avail.n_unoccupied(), l)?;
        println!(
            "{l},{eta:.6},{},{:.3},{:.3}",
            size.exact.to_string().len(),
            size.exact_log10,
            size.stirling_log10
        );
    }
    Ok(())
}
