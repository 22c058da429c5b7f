//! `meshcap` command line interface.
//!
//! Subcommands mirror the pipeline stages: `generate` a topology,
//! `assign` channels with one scheme, print interference `metrics` for an
//! assignment, `simulate` one traffic scenario, or `evaluate` the whole
//! grid. Exit codes: 0 success, 1 usage, 2 infeasible targets, 3 runtime
//! failure.

use std::path::PathBuf;
use std::process::ExitCode;

use clap::error::ErrorKind;
use clap::{Args, Parser, Subcommand};

use meshcap::assignment::{
    read_assignment, resolve_link_channels, run_ca_scheme, write_assignment,
    check_topology_preservation, Scheme,
};
use meshcap::config::ExperimentConfig;
use meshcap::conflict::{build_emmcg, total_interference_degree};
use meshcap::metrics::{cdal_cost, cxls_wt};
use meshcap::netsim::{build_scenario, simulate, TransportMode};
use meshcap::pipeline::{obtain_topology, parse_scheme_list, run_evaluation, run_generate};
use meshcap::topology::read_topology;
use meshcap::{subseed, Error};

#[derive(Parser)]
#[command(
    name = "meshcap",
    version,
    about = "Channel assignment evaluation toolkit for wireless mesh networks"
)]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Args, Clone, Default)]
struct Common {
    /// Experiment config file (TOML); defaults reproduce the reference setup
    #[arg(long)]
    config: Option<PathBuf>,
    /// Master seed override
    #[arg(long)]
    seed: Option<u64>,
    /// Output directory override
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Subcommand)]
enum Cmd {
    /// Generate a topology meeting the configured global parameter targets
    Generate {
        #[command(flatten)]
        common: Common,
        /// Node count override
        #[arg(long)]
        nodes: Option<usize>,
        /// Density target override
        #[arg(long)]
        density: Option<f64>,
        #[arg(long)]
        density_tol: Option<f64>,
        /// Clustering coefficient target override
        #[arg(long)]
        cc: Option<f64>,
        #[arg(long)]
        cc_tol: Option<f64>,
    },
    /// Run one channel assignment scheme and write the assignment file
    Assign {
        #[command(flatten)]
        common: Common,
        /// Scheme name (BFS, MIS, EC, LP, EIZM, OIS, SINGLE, SPREAD)
        #[arg(long)]
        scheme: String,
        /// Topology file (defaults to generating from config)
        #[arg(long)]
        topology: Option<PathBuf>,
    },
    /// Print TID, CDAL_cost and CXLS_wt for a topology + assignment
    Metrics {
        #[arg(long)]
        topology: PathBuf,
        #[arg(long)]
        ca: PathBuf,
        /// Interference-to-transmission range ratio X
        #[arg(long, default_value_t = 2)]
        ratio: u32,
    },
    /// Simulate one traffic scenario against an assignment
    Simulate {
        #[command(flatten)]
        common: Common,
        #[arg(long)]
        topology: PathBuf,
        #[arg(long)]
        ca: PathBuf,
        /// Concurrent multi-hop flows
        #[arg(long)]
        flows: usize,
        /// Transport mode: tcp or udp
        #[arg(long)]
        mode: String,
    },
    /// Run the full pipeline and print the degree-of-confidence grid
    Evaluate {
        #[command(flatten)]
        common: Common,
        /// Comma-separated scheme list override
        #[arg(long)]
        schemes: Option<String>,
    },
}

fn load_config(common: &Common) -> Result<ExperimentConfig, Error> {
    let mut cfg = match &common.config {
        Some(path) => ExperimentConfig::load(path)?,
        None => ExperimentConfig::default(),
    };
    if let Some(seed) = common.seed {
        cfg.seed = seed;
    }
    if let Some(out) = &common.out {
        cfg.out_dir = out.clone();
    }
    Ok(cfg)
}

fn run(cmd: Cmd) -> Result<(), Error> {
    match cmd {
        Cmd::Generate {
            common,
            nodes,
            density,
            density_tol,
            cc,
            cc_tol,
        } => {
            let mut cfg = load_config(&common)?;
            if let Some(n) = nodes {
                cfg.topology.nodes = n;
            }
            if let Some(d) = density {
                cfg.topology.density_target = d;
            }
            if let Some(t) = density_tol {
                cfg.topology.density_tol = t;
            }
            if let Some(c) = cc {
                cfg.topology.cc_target = c;
            }
            if let Some(t) = cc_tol {
                cfg.topology.cc_tol = t;
            }
            let (_, summary) = run_generate(&cfg)?;
            println!("{summary}");
            println!(
                "wrote {}",
                cfg.out_dir.join("topology/topology.toml").display()
            );
            Ok(())
        }
        Cmd::Assign {
            common,
            scheme,
            topology,
        } => {
            let cfg = load_config(&common)?;
            let scheme: Scheme = scheme.parse()?;
            let topo = match topology {
                Some(path) => read_topology(&path)?,
                None => obtain_topology(&cfg)?,
            };
            let cg = build_emmcg(&topo, cfg.ir_tr_ratio);
            let ca = run_ca_scheme(
                scheme,
                &topo,
                &cg,
                cfg.channel_count,
                subseed(cfg.seed, &format!("ca/{scheme}")),
            )?;
            let dir = cfg.out_dir.join("assignments");
            std::fs::create_dir_all(&dir)?;
            let path = dir.join(format!("{scheme}.ca"));
            write_assignment(&path, &topo, &ca)?;
            let preservation = check_topology_preservation(&topo, &ca);
            println!(
                "wrote {} ({} links, {} broken)",
                path.display(),
                topo.link_count(),
                preservation.broken.len()
            );
            Ok(())
        }
        Cmd::Metrics { topology, ca, ratio } => {
            let topo = read_topology(&topology)?;
            let ca = read_assignment(&ca)?;
            let cg = build_emmcg(&topo, ratio);
            let lcm = resolve_link_channels(&topo, &ca)?;
            let tid = total_interference_degree(&cg, &lcm);
            let cdal = cdal_cost(&lcm, ca.channel_count)?;
            let cxls = cxls_wt(&topo, &lcm, &cg, ratio as usize)?;
            println!("TID CDAL_cost CXLS_wt");
            println!("{tid} {cdal} {cxls}");
            Ok(())
        }
        Cmd::Simulate {
            common,
            topology,
            ca,
            flows,
            mode,
        } => {
            let cfg = load_config(&common)?;
            let mode = match mode.to_ascii_lowercase().as_str() {
                "tcp" => TransportMode::Tcp,
                "udp" => TransportMode::Udp,
                other => return Err(Error::Config(format!("unknown mode: {other}"))),
            };
            let topo = read_topology(&topology)?;
            let ca = read_assignment(&ca)?;
            let cg = build_emmcg(&topo, cfg.ir_tr_ratio);
            let lcm = resolve_link_channels(&topo, &ca)?;
            let scenario = build_scenario(
                &topo,
                &lcm,
                flows,
                subseed(cfg.seed, &format!("scenario/{flows}")),
            )?
            .with_payload(cfg.sim.datafile_bytes)
            .with_mode(mode);
            let run_seed = subseed(cfg.seed, &format!("sim/{}/{mode}/{flows}", ca.scheme));
            let params = cfg.sim.params(run_seed);
            let r = simulate(&topo, &lcm, &cg, &scenario, &params);
            println!("scheme,mode,test_case,throughput_mbps,dfc,pdr_pct,eed_us,seed");
            println!(
                "{},{mode},{flows},{},{},{},{},{run_seed}",
                ca.scheme, r.throughput_mbps, r.dfc, r.pdr_pct, r.eed_us
            );
            Ok(())
        }
        Cmd::Evaluate { common, schemes } => {
            let mut cfg = load_config(&common)?;
            if let Some(list) = schemes {
                cfg.schemes = parse_scheme_list(&list)?;
            }
            let outcome = run_evaluation(&cfg)?;
            print!("{}", outcome.report.doc_grid_string());
            println!("\nartifacts in {}", outcome.out_dir.display());
            Ok(())
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => 0,
                _ => 1,
            };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(cli.cmd) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
