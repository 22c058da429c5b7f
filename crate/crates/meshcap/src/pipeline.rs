//! End-to-end experiment orchestration: topology, conflict graph, the CA
//! suite, prediction metrics, the simulation grid and the final report.
//!
//! Output layout under the configured directory:
//!
//! ```text
//! topology/topology.toml     the network (generated or copied source)
//! topology/summary.txt       global metrics and target validation
//! assignments/<scheme>.ca    one assignment file per scheme
//! results/results.csv        per (scheme, mode, test case) measurements
//! report/metrics.csv         per-scheme TID / CDAL_cost / CXLS_wt
//! report/pe_grid.csv         prediction errors, NPM rows x CPPM columns
//! report/doc_grid.csv        degree of confidence, same shape
//! report/corr_<cppm>_<npm>.csv  correlation series per cell
//! ```
//!
//! Traffic scenarios are built once per test case over the pristine
//! topology (every link alive) and reused for every scheme and both
//! transport modes, so schemes are compared on identical traffic. TCP runs
//! supply Throughput and DFC; UDP runs supply PDR and EED.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::path::PathBuf;

use crate::assignment::{
    assignment_to_string, resolve_link_channels_lenient, run_ca_scheme, ChannelAssignment,
    ChannelId, LinkChannelMap, Scheme,
};
use crate::conflict::{build_emmcg, total_interference_degree, ConflictGraph};
use crate::config::ExperimentConfig;
use crate::evaluation::{build_report, Cppm, EvaluationReport, Npm, SchemeMetrics};
use crate::metrics::{cdal_cost, cxls_wt};
use crate::netsim::{
    aggregate_npms, build_scenario, simulate, NpmSummary, SimResult, TrafficScenario,
    TransportMode,
};
use crate::topology::{
    generate_rwmn, global_metrics, read_topology, topology_to_string, validate_topology,
    MeshTopology,
};
use crate::{subseed, Error, Result};

/// One simulation grid row.
#[derive(Debug, Clone, PartialEq)]
pub struct ResultRow {
    pub scheme: String,
    pub mode: TransportMode,
    pub test_case: usize,
    pub seed: u64,
    pub result: SimResult,
}

/// Everything a pipeline run produced.
#[derive(Debug)]
pub struct PipelineOutcome {
    pub out_dir: PathBuf,
    pub topology: MeshTopology,
    pub metrics: BTreeMap<String, SchemeMetrics>,
    pub npm_summaries: BTreeMap<String, NpmSummary>,
    pub rows: Vec<ResultRow>,
    pub report: EvaluationReport,
}

/// Load the configured topology file, or generate one from the targets.
pub fn obtain_topology(cfg: &ExperimentConfig) -> Result<MeshTopology> {
    match &cfg.topology.file {
        Some(path) => read_topology(path),
        None => generate_rwmn(&cfg.topology.targets(subseed(cfg.seed, "topology"))),
    }
}

/// Every-link-alive channel view used to build CA-independent scenarios.
fn pristine_lcm(topo: &MeshTopology) -> LinkChannelMap {
    LinkChannelMap::from_pairs(topo.links.iter().map(|l| (l.id, ChannelId(0))))
}

/// Run one scheme and compute its prediction metrics.
pub fn scheme_metrics(
    topo: &MeshTopology,
    cg: &ConflictGraph,
    ca: &ChannelAssignment,
    ir_tr_ratio: u32,
    channel_count: u8,
) -> Result<(SchemeMetrics, LinkChannelMap)> {
    let (lcm, _broken) = resolve_link_channels_lenient(topo, ca);
    let tid = total_interference_degree(cg, &lcm) as u64;
    let cdal = cdal_cost(&lcm, channel_count)?;
    let cxls = cxls_wt(topo, &lcm, cg, ir_tr_ratio as usize)?;
    Ok((
        SchemeMetrics {
            tid,
            cdal_cost: cdal,
            cxls_wt: cxls,
        },
        lcm,
    ))
}

fn results_csv(rows: &[ResultRow]) -> String {
    let mut out =
        String::from("scheme,mode,test_case,throughput_mbps,dfc,pdr_pct,eed_us,seed\n");
    for row in rows {
        writeln!(
            out,
            "{},{},{},{},{},{},{},{}",
            row.scheme,
            row.mode,
            row.test_case,
            row.result.throughput_mbps,
            row.result.dfc,
            row.result.pdr_pct,
            row.result.eed_us,
            row.seed
        )
        .unwrap();
    }
    out
}

fn metrics_csv(metrics: &BTreeMap<String, SchemeMetrics>) -> String {
    let mut out = String::from("scheme,tid,cdal_cost,cxls_wt\n");
    for (scheme, m) in metrics {
        writeln!(out, "{scheme},{},{},{}", m.tid, m.cdal_cost, m.cxls_wt).unwrap();
    }
    out
}

/// Run the full evaluation pipeline and write all artifacts.
pub fn run_evaluation(cfg: &ExperimentConfig) -> Result<PipelineOutcome> {
    cfg.validate()?;
    let out = &cfg.out_dir;
    for sub in ["topology", "assignments", "results", "report"] {
        std::fs::create_dir_all(out.join(sub))?;
    }

    let topo = obtain_topology(cfg)?;
    std::fs::write(out.join("topology/topology.toml"), topology_to_string(&topo))?;
    let summary = {
        let m = global_metrics(&topo);
        let v = validate_topology(&topo, &cfg.topology.targets(0));
        format!(
            "nodes {}\nlinks {}\ndensity {:.4}\nclustering_coefficient {:.4}\n\
             geo_diameter_m {:.2}\nmin_eccentricity_m {:.2}\nhop_diameter {}\n\n{v}\n",
            topo.node_count(),
            topo.link_count(),
            m.density,
            m.clustering_coefficient,
            m.geo_diameter,
            m.min_eccentricity,
            m.hop_diameter
        )
    };
    std::fs::write(out.join("topology/summary.txt"), summary)?;

    let cg = build_emmcg(&topo, cfg.ir_tr_ratio);

    // CA-independent scenarios: one per test case, reused across schemes
    let pristine = pristine_lcm(&topo);
    let mut scenarios: Vec<(usize, TrafficScenario)> = Vec::new();
    for &n_flows in &cfg.flow_cases {
        let seed = subseed(cfg.seed, &format!("scenario/{n_flows}"));
        let scenario =
            build_scenario(&topo, &pristine, n_flows, seed)?.with_payload(cfg.sim.datafile_bytes);
        scenarios.push((n_flows, scenario));
    }

    let mut metrics = BTreeMap::new();
    let mut npm_summaries = BTreeMap::new();
    let mut rows = Vec::new();

    for &scheme in &cfg.schemes {
        let ca_seed = subseed(cfg.seed, &format!("ca/{scheme}"));
        let ca = run_ca_scheme(scheme, &topo, &cg, cfg.channel_count, ca_seed)?;
        std::fs::write(
            out.join(format!("assignments/{scheme}.ca")),
            assignment_to_string(&topo, &ca),
        )?;
        let (m, lcm) = scheme_metrics(&topo, &cg, &ca, cfg.ir_tr_ratio, cfg.channel_count)?;
        metrics.insert(scheme.name().to_string(), m);

        let mut tcp_results = Vec::new();
        let mut udp_results = Vec::new();
        for (n_flows, scenario) in &scenarios {
            for mode in [TransportMode::Tcp, TransportMode::Udp] {
                let run_seed = subseed(cfg.seed, &format!("sim/{scheme}/{mode}/{n_flows}"));
                let params = cfg.sim.params(run_seed);
                let result = simulate(&topo, &lcm, &cg, &scenario.with_mode(mode), &params);
                rows.push(ResultRow {
                    scheme: scheme.name().to_string(),
                    mode,
                    test_case: *n_flows,
                    seed: run_seed,
                    result: result.clone(),
                });
                match mode {
                    TransportMode::Tcp => tcp_results.push(result),
                    TransportMode::Udp => udp_results.push(result),
                }
            }
        }
        let tcp = aggregate_npms(&tcp_results)?;
        let udp = aggregate_npms(&udp_results)?;
        npm_summaries.insert(
            scheme.name().to_string(),
            NpmSummary {
                throughput_mbps: tcp.throughput_mbps,
                dfc: tcp.dfc,
                pdr_pct: udp.pdr_pct,
                eed_us: udp.eed_us,
            },
        );
    }

    std::fs::write(out.join("results/results.csv"), results_csv(&rows))?;
    std::fs::write(out.join("report/metrics.csv"), metrics_csv(&metrics))?;

    let report = build_report(&metrics, &npm_summaries, &cfg.evaluation)?;
    std::fs::write(out.join("report/pe_grid.csv"), report.pe_grid_csv())?;
    std::fs::write(out.join("report/doc_grid.csv"), report.doc_grid_csv())?;
    for cppm in Cppm::ALL {
        for npm in Npm::ALL {
            let name = format!(
                "report/corr_{}_{}.csv",
                cppm.name().to_lowercase(),
                npm.name().to_lowercase()
            );
            std::fs::write(out.join(name), report.series_csv(cppm, npm))?;
        }
    }

    Ok(PipelineOutcome {
        out_dir: out.clone(),
        topology: topo,
        metrics,
        npm_summaries,
        rows,
        report,
    })
}

/// Generate (or load) the topology and write the topology artifacts only.
pub fn run_generate(cfg: &ExperimentConfig) -> Result<(MeshTopology, String)> {
    let topo = obtain_topology(cfg)?;
    let dir = cfg.out_dir.join("topology");
    std::fs::create_dir_all(&dir)?;
    std::fs::write(dir.join("topology.toml"), topology_to_string(&topo))?;
    let m = global_metrics(&topo);
    let v = validate_topology(&topo, &cfg.topology.targets(0));
    let summary = format!(
        "nodes {}\nlinks {}\ndensity {:.4}\nclustering_coefficient {:.4}\n\
         geo_diameter_m {:.2}\nmin_eccentricity_m {:.2}\nhop_diameter {}\n\n{v}\n",
        topo.node_count(),
        topo.link_count(),
        m.density,
        m.clustering_coefficient,
        m.geo_diameter,
        m.min_eccentricity,
        m.hop_diameter
    );
    std::fs::write(dir.join("summary.txt"), &summary)?;
    Ok((topo, summary))
}

/// Parse a scheme list like `"BFS,MIS,EC"`.
pub fn parse_scheme_list(s: &str) -> Result<Vec<Scheme>> {
    s.split(',')
        .map(|p| p.trim().parse::<Scheme>())
        .collect::<Result<Vec<_>>>()
        .and_then(|v| {
            if v.is_empty() {
                Err(Error::Config("empty scheme list".into()))
            } else {
                Ok(v)
            }
        })
}
