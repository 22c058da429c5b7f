//! Experiment configuration: one TOML file drives an end-to-end run.
//!
//! Every field has a default reproducing the reference setup: a 50-node
//! 1500x1500 m network, 3 radios per node, 250 m range, 4 orthogonal
//! channels, interference ratio 2, the six-scheme suite, and test cases of
//! 8/12/16/20/24 concurrent flows. A config file only needs the fields it
//! overrides; CLI flags override config keys in turn.

use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::assignment::Scheme;
use crate::evaluation::EpsPolicy;
use crate::netsim::SimParams;
use crate::topology::GenTargets;
use crate::{Error, Result};

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct TopologyConfig {
    /// Load this topology file instead of generating one.
    pub file: Option<PathBuf>,
    pub nodes: usize,
    pub density_target: f64,
    pub density_tol: f64,
    pub cc_target: f64,
    pub cc_tol: f64,
    pub area: (f64, f64),
    pub tx_range: f64,
    pub radios_per_node: u8,
}

impl Default for TopologyConfig {
    fn default() -> Self {
        let t = GenTargets::default();
        TopologyConfig {
            file: None,
            nodes: t.node_count,
            density_target: t.density_target,
            density_tol: t.density_tol,
            cc_target: t.cc_target,
            cc_tol: t.cc_tol,
            area: t.area,
            tx_range: t.tx_range,
            radios_per_node: t.radios_per_node,
        }
    }
}

impl TopologyConfig {
    pub fn targets(&self, seed: u64) -> GenTargets {
        GenTargets {
            node_count: self.nodes,
            density_target: self.density_target,
            density_tol: self.density_tol,
            cc_target: self.cc_target,
            cc_tol: self.cc_tol,
            seed,
            area: self.area,
            tx_range: self.tx_range,
            radios_per_node: self.radios_per_node,
        }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct SimConfig {
    pub phy_rate_mbps: f64,
    /// Slot duration override in microseconds; by default one full MAC
    /// exchange per MSS at the PHY rate.
    pub slot_us: Option<f64>,
    pub mss_bytes: u32,
    pub datafile_bytes: u64,
    pub tcp_window: u32,
    pub udp_packet_bytes: u32,
    pub udp_interval_ms: f64,
    pub horizon_s: f64,
    pub udp_tx_prob: f64,
}

impl Default for SimConfig {
    fn default() -> Self {
        let p = SimParams::default();
        SimConfig {
            phy_rate_mbps: p.phy_rate_mbps,
            slot_us: None,
            mss_bytes: p.mss_bytes,
            datafile_bytes: p.datafile_bytes,
            tcp_window: p.tcp_window,
            udp_packet_bytes: p.udp_packet_bytes,
            udp_interval_ms: p.udp_interval_ms,
            horizon_s: p.horizon_s,
            udp_tx_prob: p.udp_tx_prob,
        }
    }
}

impl SimConfig {
    pub fn params(&self, seed: u64) -> SimParams {
        SimParams {
            phy_rate_mbps: self.phy_rate_mbps,
            slot_us: self.slot_us.unwrap_or_else(|| {
                crate::netsim::SLOT_OVERHEAD_FACTOR
                    * crate::netsim::mss_airtime_us(self.phy_rate_mbps, self.mss_bytes)
            }),
            mss_bytes: self.mss_bytes,
            datafile_bytes: self.datafile_bytes,
            tcp_window: self.tcp_window,
            udp_packet_bytes: self.udp_packet_bytes,
            udp_interval_ms: self.udp_interval_ms,
            horizon_s: self.horizon_s,
            udp_tx_prob: self.udp_tx_prob,
            seed,
        }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ExperimentConfig {
    pub seed: u64,
    pub channel_count: u8,
    pub ir_tr_ratio: u32,
    pub schemes: Vec<Scheme>,
    pub flow_cases: Vec<usize>,
    pub out_dir: PathBuf,
    pub topology: TopologyConfig,
    pub sim: SimConfig,
    pub evaluation: EpsPolicy,
}

impl Default for ExperimentConfig {
    fn default() -> Self {
        ExperimentConfig {
            seed: 42,
            channel_count: 4,
            ir_tr_ratio: 2,
            schemes: Scheme::SUITE.to_vec(),
            flow_cases: vec![8, 12, 16, 20, 24],
            out_dir: PathBuf::from("out"),
            topology: TopologyConfig::default(),
            sim: SimConfig::default(),
            evaluation: EpsPolicy::default(),
        }
    }
}

impl ExperimentConfig {
    pub fn validate(&self) -> Result<()> {
        if self.channel_count == 0 {
            return Err(Error::Config("channel_count must be >= 1".into()));
        }
        if self.ir_tr_ratio == 0 {
            return Err(Error::Config("ir_tr_ratio must be >= 1".into()));
        }
        if self.schemes.is_empty() {
            return Err(Error::Config("schemes must not be empty".into()));
        }
        let mut seen = std::collections::BTreeSet::new();
        for s in &self.schemes {
            if !seen.insert(s) {
                return Err(Error::Config(format!("scheme {s} listed twice")));
            }
        }
        if self.flow_cases.is_empty() {
            return Err(Error::Config("flow_cases must not be empty".into()));
        }
        self.sim.params(0).validate()?;
        Ok(())
    }

    pub fn load(path: &Path) -> Result<ExperimentConfig> {
        let text = std::fs::read_to_string(path)?;
        Self::load_str(&text, &path.display().to_string())
    }

    pub fn load_str(text: &str, file: &str) -> Result<ExperimentConfig> {
        let cfg: ExperimentConfig = toml::from_str(text).map_err(|e| Error::Parse {
            file: file.to_string(),
            line: e
                .span()
                .map(|s| text[..s.start].lines().count().max(1))
                .unwrap_or(0),
            msg: e.message().to_string(),
        })?;
        cfg.validate()?;
        Ok(cfg)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn defaults_reproduce_reference_setup() {
        let cfg = ExperimentConfig::default();
        assert_eq!(cfg.topology.nodes, 50);
        assert_eq!(cfg.topology.area, (1500.0, 1500.0));
        assert_eq!(cfg.topology.tx_range, 250.0);
        assert_eq!(cfg.topology.radios_per_node, 3);
        assert_eq!(cfg.channel_count, 4);
        assert_eq!(cfg.flow_cases, vec![8, 12, 16, 20, 24]);
        assert_eq!(cfg.schemes.len(), 6);
        assert_eq!(cfg.sim.phy_rate_mbps, 54.0);
        assert_eq!(cfg.sim.mss_bytes, 1024);
        assert_eq!(cfg.sim.udp_packet_bytes, 512);
        assert_eq!(cfg.sim.horizon_s, 20.0);
        cfg.validate().unwrap();
    }

    #[test]
    fn partial_config_parses_with_defaults() {
        let cfg: ExperimentConfig = toml::from_str(
            r#"
            seed = 7
            schemes = ["SINGLE", "SPREAD"]

            [topology]
            nodes = 20
            "#,
        )
        .unwrap();
        assert_eq!(cfg.seed, 7);
        assert_eq!(cfg.schemes, vec![Scheme::Single, Scheme::Spread]);
        assert_eq!(cfg.topology.nodes, 20);
        assert_eq!(cfg.channel_count, 4);
    }

    #[test]
    fn unknown_keys_are_rejected() {
        let r: std::result::Result<ExperimentConfig, _> = toml::from_str("sed = 7");
        assert!(r.is_err());
    }

    #[test]
    fn full_schema_parses() {
        let cfg = ExperimentConfig::load_str(
            r#"
            seed = 42
            channel_count = 4
            ir_tr_ratio = 2
            schemes = ["BFS", "MIS", "EC", "LP", "EIZM", "OIS"]
            flow_cases = [8, 12, 16, 20, 24]
            out_dir = "out"

            [topology]
            nodes = 50
            density_target = 0.083
            density_tol = 0.005
            cc_target = 0.37
            cc_tol = 0.05
            area = [1500.0, 1500.0]
            tx_range = 250.0
            radios_per_node = 3

            [sim]
            phy_rate_mbps = 54.0
            slot_us = 455.1
            mss_bytes = 1024
            datafile_bytes = 1048576
            tcp_window = 16
            udp_packet_bytes = 512
            udp_interval_ms = 50.0
            horizon_s = 20.0
            udp_tx_prob = 0.5

            [evaluation]
            cppm_eps = 0.0
            npm_rel_eps = 0.005
            "#,
            "inline",
        )
        .unwrap();
        assert_eq!(cfg.sim.slot_us, Some(455.1));
        assert_eq!(cfg.topology.area, (1500.0, 1500.0));
        cfg.validate().unwrap();
    }

    #[test]
    fn duplicate_schemes_are_rejected() {
        let cfg = ExperimentConfig {
            schemes: vec![Scheme::Lp, Scheme::Lp],
            ..ExperimentConfig::default()
        };
        assert!(cfg.validate().is_err());
    }

    #[test]
    fn partial_evaluation_section_parses() {
        let cfg: ExperimentConfig = toml::from_str("[evaluation]\ncppm_eps = 0.1\n").unwrap();
        assert_eq!(cfg.evaluation.cppm_eps, 0.1);
        assert_eq!(cfg.evaluation.npm_rel_eps, 0.005);
    }
}
