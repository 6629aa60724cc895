//! Batch experiments: configuration, link simulation and sweeps.

mod config;
mod link;
mod sweep;

pub use config::{ChannelKind, Scheme, SearchConfig, SimConfig, StopRule};
pub use link::{build_partition, build_phase, BerRecord, Link};
pub use sweep::{
    design_partition, required_ebn0, run_ber_sweep, run_ber_sweep_with, run_efficiency_study, run_sidelobe_study,
    spectrum_efficiency, write_csv, write_efficiency_csv, EfficiencyRecord, SidelobeRecord,
};

/// Run manifest: the full effective config followed by the phase seed and
/// the derived seeds, as TOML.
pub fn manifest(cfg: &SimConfig, command: &str) -> String {
    let phase = build_phase(cfg).map(|p| p.seed()).unwrap_or_default();
    format!(
        "# {command}\n{}\n[derived]\nphase_seed = {phase}\n",
        cfg.to_toml()
    )
}
