//! Slotted contention simulator.
//!
//! Replaces a full 802.11 stack with a protocol-model contention loop that
//! responds to the same interference structure the prediction metrics see:
//! per slot, links with queued packets contend; in TCP mode a seeded-random
//! maximal independent set of contenders (w.r.t. live, same-channel
//! conflicts) transmits collision-free, modeling RTS/CTS collision
//! avoidance; in UDP mode every contender transmits independently with
//! `udp_tx_prob` and any two conflicting simultaneous transmissions all
//! fail. Collided packets are retransmitted for TCP flows and lost for UDP
//! flows.
//!
//! Routing is static min-hop over alive links, computed once per run.
//! TCP flows deliver a datafile with a fixed sliding window of MSS
//! segments, each acknowledged over the reverse path, so a bulk transfer
//! keeps its path saturated and aggregate throughput is bound by what the
//! contention structure can carry. UDP flows stream fixed-size packets at
//! a fixed interval. UDP runs keep draining in-flight packets after the
//! offer window closes (bounded at twice the horizon) so that the delivery
//! ratio reflects losses rather than truncation.

use std::collections::VecDeque;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::assignment::LinkChannelMap;
use crate::conflict::ConflictGraph;
use crate::topology::{LinkId, MeshTopology, NodeId};
use crate::{Error, Result};

/// Transport flavor of a flow.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum TransportMode {
    Tcp,
    Udp,
}

impl std::fmt::Display for TransportMode {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            TransportMode::Tcp => write!(f, "TCP"),
            TransportMode::Udp => write!(f, "UDP"),
        }
    }
}

/// One multi-hop traffic flow.
#[derive(Debug, Clone, PartialEq)]
pub struct Flow {
    pub src: NodeId,
    pub dst: NodeId,
    pub mode: TransportMode,
    /// Datafile size for TCP flows; UDP flows stream for the whole horizon.
    pub payload_bytes: u64,
    /// Min-hop distance at scenario build time (3..=11 by construction).
    pub hops: u32,
}

/// A named set of concurrent flows.
#[derive(Debug, Clone, PartialEq)]
pub struct TrafficScenario {
    pub label: String,
    pub flows: Vec<Flow>,
}

impl TrafficScenario {
    /// The same endpoints with every flow switched to `mode`, so TCP and
    /// UDP runs measure identical traffic patterns.
    pub fn with_mode(&self, mode: TransportMode) -> TrafficScenario {
        let mut s = self.clone();
        for f in &mut s.flows {
            f.mode = mode;
        }
        s
    }

    /// The same endpoints with every flow's datafile set to `bytes`.
    pub fn with_payload(&self, bytes: u64) -> TrafficScenario {
        let mut s = self.clone();
        for f in &mut s.flows {
            f.payload_bytes = bytes;
        }
        s
    }
}

/// Simulator parameters.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SimParams {
    pub phy_rate_mbps: f64,
    /// Slot duration in microseconds: the airtime charged per link
    /// transmission, including MAC overhead.
    pub slot_us: f64,
    pub mss_bytes: u32,
    pub datafile_bytes: u64,
    /// Segments a TCP sender keeps in flight. Sized past the hop bound so
    /// a bulk transfer saturates its path.
    pub tcp_window: u32,
    pub udp_packet_bytes: u32,
    pub udp_interval_ms: f64,
    pub horizon_s: f64,
    pub udp_tx_prob: f64,
    pub seed: u64,
}

/// One MSS of airtime at the PHY rate, without MAC overhead.
pub fn mss_airtime_us(phy_rate_mbps: f64, mss_bytes: u32) -> f64 {
    mss_bytes as f64 * 8.0 / phy_rate_mbps
}

/// Default slot: one full medium acquisition and MSS exchange. The DCF
/// framing (RTS/CTS/ACK, interframe spaces, preambles, mean backoff) costs
/// roughly two more MSS airtimes at 54 Mbps, so the slot is 3x the raw
/// segment airtime (~455 us).
pub const SLOT_OVERHEAD_FACTOR: f64 = 3.0;

impl Default for SimParams {
    fn default() -> Self {
        SimParams {
            phy_rate_mbps: 54.0,
            slot_us: SLOT_OVERHEAD_FACTOR * mss_airtime_us(54.0, 1024),
            mss_bytes: 1024,
            datafile_bytes: 1 << 20,
            tcp_window: 16,
            udp_packet_bytes: 512,
            udp_interval_ms: 50.0,
            // Marginal operating point: the light test cases deliver every
            // datafile, the heavy ones saturate, so the TCP metrics track
            // what the contention structure can carry.
            horizon_s: 20.0,
            udp_tx_prob: 0.5,
            seed: 1,
        }
    }
}

impl SimParams {
    pub fn validate(&self) -> Result<()> {
        let positive = [
            ("phy_rate_mbps", self.phy_rate_mbps),
            ("slot_us", self.slot_us),
            ("udp_interval_ms", self.udp_interval_ms),
            ("horizon_s", self.horizon_s),
        ];
        for (name, v) in positive {
            if !v.is_finite() || v <= 0.0 {
                return Err(Error::Config(format!("{name} must be positive, got {v}")));
            }
        }
        if self.mss_bytes == 0 || self.udp_packet_bytes == 0 {
            return Err(Error::Config("packet sizes must be positive".into()));
        }
        if self.tcp_window == 0 {
            return Err(Error::Config("tcp_window must be >= 1".into()));
        }
        if !(self.udp_tx_prob > 0.0 && self.udp_tx_prob <= 1.0) {
            return Err(Error::Config(format!(
                "udp_tx_prob must be in (0, 1], got {}",
                self.udp_tx_prob
            )));
        }
        Ok(())
    }
}

/// Measured network performance of one run.
#[derive(Debug, Clone, PartialEq)]
pub struct SimResult {
    /// Aggregate data bits delivered within the horizon / horizon.
    pub throughput_mbps: f64,
    /// Flows with no usable path or an incomplete datafile at the horizon.
    pub dfc: u32,
    /// Delivered / offered data packets, percent.
    pub pdr_pct: f64,
    /// Mean end-to-end delay of delivered data packets, microseconds
    /// (0 when nothing was delivered).
    pub eed_us: f64,
    pub offered_packets: u64,
    pub sent_packets: u64,
    pub delivered_packets: u64,
    pub delivered_bits: u64,
}

/// Mean of each performance metric across test cases.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NpmSummary {
    pub throughput_mbps: f64,
    pub dfc: f64,
    pub pdr_pct: f64,
    pub eed_us: f64,
}

/// Average the four metrics over a set of results.
pub fn aggregate_npms(results: &[SimResult]) -> Result<NpmSummary> {
    if results.is_empty() {
        return Err(Error::Evaluation("aggregate over an empty result set".into()));
    }
    let n = results.len() as f64;
    Ok(NpmSummary {
        throughput_mbps: results.iter().map(|r| r.throughput_mbps).sum::<f64>() / n,
        dfc: results.iter().map(|r| r.dfc as f64).sum::<f64>() / n,
        pdr_pct: results.iter().map(|r| r.pdr_pct).sum::<f64>() / n,
        eed_us: results.iter().map(|r| r.eed_us).sum::<f64>() / n,
    })
}

// ---------------------------------------------------------------------------
// Scenario construction
// ---------------------------------------------------------------------------

const MIN_HOPS: u32 = 3;
const MAX_HOPS: u32 = 11;

/// Pick `n_flows` seeded-random source/destination pairs separated by 3 to
/// 11 hops over the alive links. Deterministic per seed; errors when fewer
/// eligible pairs exist.
pub fn build_scenario(
    topo: &MeshTopology,
    lcm: &LinkChannelMap,
    n_flows: usize,
    seed: u64,
) -> Result<TrafficScenario> {
    let adj = alive_adjacency(topo, lcm);
    let mut eligible: Vec<(NodeId, NodeId, u32)> = Vec::new();
    for src in 0..topo.node_count() {
        let dist = bfs_hops(&adj, src);
        for (dst, d) in dist.iter().enumerate() {
            if let Some(d) = d {
                if (MIN_HOPS..=MAX_HOPS).contains(d) {
                    eligible.push((NodeId(src as u32), NodeId(dst as u32), *d));
                }
            }
        }
    }
    if eligible.len() < n_flows {
        return Err(Error::NoEligiblePairs(format!(
            "{} pairs at {MIN_HOPS}..{MAX_HOPS} hops, {n_flows} flows requested",
            eligible.len()
        )));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut idx: Vec<usize> = (0..eligible.len()).collect();
    for i in 0..n_flows {
        let j = rng.gen_range(i..idx.len());
        idx.swap(i, j);
    }
    let flows = idx[..n_flows]
        .iter()
        .map(|&i| {
            let (src, dst, hops) = eligible[i];
            Flow {
                src,
                dst,
                mode: TransportMode::Tcp,
                payload_bytes: 1 << 20,
                hops,
            }
        })
        .collect();
    Ok(TrafficScenario {
        label: format!("flows{n_flows}"),
        flows,
    })
}

fn alive_adjacency(topo: &MeshTopology, lcm: &LinkChannelMap) -> Vec<Vec<(u32, u32)>> {
    // (neighbor node, link idx) per node, over channel-resolved links only
    let mut adj = vec![Vec::new(); topo.node_count()];
    for link in lcm.links() {
        let l = &topo.links[link.0 as usize];
        adj[l.a.0 as usize].push((l.b.0, link.0));
        adj[l.b.0 as usize].push((l.a.0, link.0));
    }
    for row in &mut adj {
        row.sort_unstable();
    }
    adj
}

fn bfs_hops(adj: &[Vec<(u32, u32)>], src: usize) -> Vec<Option<u32>> {
    let mut dist = vec![None; adj.len()];
    dist[src] = Some(0);
    let mut queue = VecDeque::from([src]);
    while let Some(u) = queue.pop_front() {
        let du = dist[u].unwrap();
        for &(v, _) in &adj[u] {
            if dist[v as usize].is_none() {
                dist[v as usize] = Some(du + 1);
                queue.push_back(v as usize);
            }
        }
    }
    dist
}

/// Min-hop path from src to dst as link indices; parent choice prefers the
/// smallest node id so routes are deterministic.
fn route(adj: &[Vec<(u32, u32)>], src: NodeId, dst: NodeId) -> Option<Vec<u16>> {
    let n = adj.len();
    let mut parent: Vec<Option<(u32, u32)>> = vec![None; n]; // (node, link)
    let mut dist = vec![u32::MAX; n];
    dist[src.0 as usize] = 0;
    let mut queue = VecDeque::from([src.0 as usize]);
    while let Some(u) = queue.pop_front() {
        for &(v, link) in &adj[u] {
            if dist[v as usize] == u32::MAX {
                dist[v as usize] = dist[u] + 1;
                parent[v as usize] = Some((u as u32, link));
                queue.push_back(v as usize);
            }
        }
    }
    if dist[dst.0 as usize] == u32::MAX {
        return None;
    }
    let mut path = Vec::new();
    let mut cur = dst.0 as usize;
    while cur != src.0 as usize {
        let (p, link) = parent[cur].unwrap();
        path.push(link as u16);
        cur = p as usize;
    }
    path.reverse();
    Some(path)
}

// ---------------------------------------------------------------------------
// Simulation engine
// ---------------------------------------------------------------------------

#[derive(Debug, Clone, Copy)]
struct Packet {
    flow: u32,
    seq: u32,
    is_ack: bool,
    created_slot: u64,
    /// Position along the flow path (forward for data, reverse for ACKs).
    hop: u16,
}

struct FlowState {
    mode: TransportMode,
    path: Option<Vec<u16>>,
    total_segs: u32,
    /// Next TCP segment not yet released into the network.
    next_seq: u32,
    delivered_segs_at_horizon: u32,
    offered: u64,
    sent: u64,
    delivered: u64,
    next_udp_seq: u32,
}

struct ConflictBits {
    words: usize,
    rows: Vec<u64>,
}

impl ConflictBits {
    fn intersects(&self, link: usize, set: &[u64]) -> bool {
        let row = &self.rows[link * self.words..(link + 1) * self.words];
        row.iter().zip(set).any(|(a, b)| a & b != 0)
    }
}

/// Run one scenario against one channel assignment.
///
/// Flows whose path is missing over the alive links count toward DFC from
/// the start. The run is deterministic for fixed inputs and seed.
pub fn simulate(
    topo: &MeshTopology,
    lcm: &LinkChannelMap,
    cg: &ConflictGraph,
    scenario: &TrafficScenario,
    params: &SimParams,
) -> SimResult {
    let n_links = topo.link_count();
    let words = n_links.div_ceil(64);
    let channel: Vec<Option<u8>> = (0..n_links)
        .map(|i| lcm.channel(LinkId(i as u32)).map(|c| c.0))
        .collect();

    // live conflicts: conflict-graph adjacency filtered to equal channels
    let mut conflicts = ConflictBits {
        words,
        rows: vec![0u64; n_links * words],
    };
    for (a, b, _) in cg.edges() {
        let (ai, bi) = (a.0 as usize, b.0 as usize);
        if let (Some(ca), Some(cb)) = (channel[ai], channel[bi]) {
            if ca == cb {
                conflicts.rows[ai * words + bi / 64] |= 1 << (bi % 64);
                conflicts.rows[bi * words + ai / 64] |= 1 << (ai % 64);
            }
        }
    }

    let adj = alive_adjacency(topo, lcm);
    let slot_us = params.slot_us;
    let horizon_slots = (params.horizon_s * 1e6 / slot_us).floor() as u64;
    let drain_cap = horizon_slots * 2;
    let udp_interval_us = params.udp_interval_ms * 1000.0;

    let mut flows: Vec<FlowState> = scenario
        .flows
        .iter()
        .map(|f| {
            let path = if f.src == f.dst {
                None
            } else {
                route(&adj, f.src, f.dst)
            };
            let total_segs = match f.mode {
                TransportMode::Tcp => f.payload_bytes.div_ceil(params.mss_bytes as u64) as u32,
                TransportMode::Udp => 0,
            };
            FlowState {
                mode: f.mode,
                path,
                total_segs,
                next_seq: 0,
                delivered_segs_at_horizon: 0,
                offered: 0,
                sent: 0,
                delivered: 0,
                next_udp_seq: 0,
            }
        })
        .collect();

    let random_access = scenario.flows.iter().any(|f| f.mode == TransportMode::Udp);
    let mut rng = ChaCha8Rng::seed_from_u64(params.seed);
    let mut queues: Vec<VecDeque<Packet>> = vec![VecDeque::new(); n_links];
    let mut arrivals: Vec<(u16, Packet)> = Vec::new();
    let mut delivered_bits_horizon: u64 = 0;
    let mut delay_sum_us: f64 = 0.0;
    let mut delivered_total: u64 = 0;

    // release the initial TCP window of every routed flow
    for (fi, f) in flows.iter_mut().enumerate() {
        if f.mode == TransportMode::Tcp {
            if let Some(path) = &f.path {
                let burst = params.tcp_window.min(f.total_segs);
                for seq in 0..burst {
                    f.offered += 1;
                    f.sent += 1;
                    queues[path[0] as usize].push_back(Packet {
                        flow: fi as u32,
                        seq,
                        is_ack: false,
                        created_slot: 0,
                        hop: 0,
                    });
                }
                f.next_seq = burst;
            }
        }
    }

    let mut active: Vec<u16> = Vec::with_capacity(n_links);
    let mut tx_set: Vec<u64> = vec![0; words];
    let mut transmitters: Vec<u16> = Vec::new();
    let mut slot: u64 = 0;

    loop {
        let offering = slot < horizon_slots;
        if !offering {
            // past the horizon only UDP runs drain, and only while busy
            let busy = queues.iter().any(|q| !q.is_empty());
            if !random_access || !busy || slot >= drain_cap {
                break;
            }
        }

        // inject due UDP packets
        if offering {
            for (fi, f) in flows.iter_mut().enumerate() {
                if f.mode != TransportMode::Udp {
                    continue;
                }
                loop {
                    let due =
                        ((f.next_udp_seq as f64 * udp_interval_us) / slot_us).ceil() as u64;
                    if due > slot {
                        break;
                    }
                    f.offered += 1;
                    if let Some(path) = &f.path {
                        f.sent += 1;
                        queues[path[0] as usize].push_back(Packet {
                            flow: fi as u32,
                            seq: f.next_udp_seq,
                            is_ack: false,
                            created_slot: slot,
                            hop: 0,
                        });
                    }
                    f.next_udp_seq += 1;
                }
            }
        }

        active.clear();
        for (l, q) in queues.iter().enumerate() {
            if !q.is_empty() {
                active.push(l as u16);
            }
        }
        if active.is_empty() {
            slot += 1;
            continue;
        }

        // decide who transmits
        transmitters.clear();
        tx_set.iter_mut().for_each(|w| *w = 0);
        if random_access {
            for &l in &active {
                if rng.gen::<f64>() < params.udp_tx_prob {
                    transmitters.push(l);
                    tx_set[l as usize / 64] |= 1 << (l % 64);
                }
            }
        } else {
            // seeded-random maximal independent set of contenders
            for i in (1..active.len()).rev() {
                let j = rng.gen_range(0..=i);
                active.swap(i, j);
            }
            for &l in &active {
                if !conflicts.intersects(l as usize, &tx_set) {
                    transmitters.push(l);
                    tx_set[l as usize / 64] |= 1 << (l % 64);
                }
            }
            transmitters.sort_unstable();
        }

        // resolve transmissions
        for &l in &transmitters {
            let li = l as usize;
            let collided = random_access && conflicts.intersects(li, &tx_set);
            let pkt = queues[li].pop_front().expect("transmitter has a packet");
            if collided {
                match flows[pkt.flow as usize].mode {
                    TransportMode::Tcp => queues[li].push_front(pkt), // retransmit
                    TransportMode::Udp => {}                          // lost
                }
                continue;
            }
            let f = &mut flows[pkt.flow as usize];
            let path = f.path.as_ref().expect("queued packet implies a path");
            let last_hop = pkt.hop as usize == path.len() - 1;
            if pkt.is_ack {
                if last_hop {
                    // acknowledgment home: the window slides one segment
                    // (no new releases once the offer window has closed)
                    if offering && f.next_seq < f.total_segs {
                        let seq = f.next_seq;
                        f.next_seq += 1;
                        f.offered += 1;
                        f.sent += 1;
                        arrivals.push((
                            path[0],
                            Packet {
                                flow: pkt.flow,
                                seq,
                                is_ack: false,
                                created_slot: slot + 1,
                                hop: 0,
                            },
                        ));
                    }
                } else {
                    let next_link = path[path.len() - 2 - pkt.hop as usize];
                    arrivals.push((next_link, Packet { hop: pkt.hop + 1, ..pkt }));
                }
            } else if last_hop {
                // data delivered
                f.delivered += 1;
                delivered_total += 1;
                delay_sum_us += (slot - pkt.created_slot + 1) as f64 * slot_us;
                if slot < horizon_slots {
                    f.delivered_segs_at_horizon += 1;
                    let bits = match f.mode {
                        TransportMode::Tcp => {
                            let flow_cfg = &scenario.flows[pkt.flow as usize];
                            let sent_before = pkt.seq as u64 * params.mss_bytes as u64;
                            (flow_cfg.payload_bytes - sent_before).min(params.mss_bytes as u64) * 8
                        }
                        TransportMode::Udp => params.udp_packet_bytes as u64 * 8,
                    };
                    delivered_bits_horizon += bits;
                }
                if f.mode == TransportMode::Tcp {
                    let ack_first = path[path.len() - 1];
                    arrivals.push((
                        ack_first,
                        Packet {
                            flow: pkt.flow,
                            seq: pkt.seq,
                            is_ack: true,
                            created_slot: slot + 1,
                            hop: 0,
                        },
                    ));
                }
            } else {
                let next_link = path[pkt.hop as usize + 1];
                arrivals.push((next_link, Packet { hop: pkt.hop + 1, ..pkt }));
            }
        }
        for (link, pkt) in arrivals.drain(..) {
            queues[link as usize].push_back(pkt);
        }
        slot += 1;
    }

    // offered packets of unrouted UDP flows: what the application would
    // have generated during the horizon
    for f in flows.iter_mut() {
        if f.mode == TransportMode::Udp && f.path.is_none() {
            let mut k = 0u64;
            while ((k as f64 * udp_interval_us) / slot_us).ceil() < horizon_slots as f64 {
                k += 1;
            }
            f.offered = k;
        }
    }

    let mut dfc = 0u32;
    for f in &flows {
        let disrupted = match (&f.path, f.mode) {
            (None, _) => true,
            (Some(_), TransportMode::Tcp) => f.delivered_segs_at_horizon < f.total_segs,
            (Some(_), TransportMode::Udp) => f.delivered < f.offered,
        };
        if disrupted {
            dfc += 1;
        }
    }

    let offered_total: u64 = flows.iter().map(|f| f.offered).sum();
    let sent_total: u64 = flows.iter().map(|f| f.sent).sum();
    let pdr_pct = if offered_total == 0 {
        100.0
    } else {
        delivered_total as f64 / offered_total as f64 * 100.0
    };
    SimResult {
        throughput_mbps: delivered_bits_horizon as f64 / params.horizon_s / 1e6,
        dfc,
        pdr_pct,
        eed_us: if delivered_total == 0 {
            0.0
        } else {
            delay_sum_us / delivered_total as f64
        },
        offered_packets: offered_total,
        sent_packets: sent_total,
        delivered_packets: delivered_total,
        delivered_bits: delivered_bits_horizon,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::assignment::ChannelId;
    use crate::conflict::build_emmcg;
    use crate::topology::{Link, Node};

    fn topo(nodes: &[(f64, f64)], links: &[(u32, u32)]) -> MeshTopology {
        MeshTopology {
            nodes: nodes
                .iter()
                .enumerate()
                .map(|(i, &(x, y))| Node {
                    id: NodeId(i as u32),
                    x,
                    y,
                })
                .collect(),
            links: links
                .iter()
                .enumerate()
                .map(|(i, &(a, b))| Link {
                    id: LinkId(i as u32),
                    a: NodeId(a),
                    b: NodeId(b),
                })
                .collect(),
            radios_per_node: 3,
            tx_range: 250.0,
            area: (4000.0, 4000.0),
        }
    }

    fn lcm_of(channels: &[u8]) -> LinkChannelMap {
        LinkChannelMap::from_pairs(
            channels
                .iter()
                .enumerate()
                .map(|(i, &c)| (LinkId(i as u32), ChannelId(c))),
        )
    }

    /// 4-node chain with 250 m spacing: 3 hops from node 0 to node 3.
    fn chain4() -> MeshTopology {
        let nodes: Vec<(f64, f64)> = (0..4).map(|i| (i as f64 * 250.0, 0.0)).collect();
        topo(&nodes, &[(0, 1), (1, 2), (2, 3)])
    }

    fn one_flow(t: &MeshTopology, mode: TransportMode, payload: u64) -> TrafficScenario {
        TrafficScenario {
            label: "test".into(),
            flows: vec![Flow {
                src: NodeId(0),
                dst: NodeId((t.node_count() - 1) as u32),
                mode,
                payload_bytes: payload,
                hops: 3,
            }],
        }
    }

    #[test]
    fn lone_tcp_flow_completes_cleanly() {
        let t = chain4();
        let cg = build_emmcg(&t, 2);
        // distinct channels: no live conflicts anywhere
        let lcm = lcm_of(&[0, 1, 2]);
        let params = SimParams {
            horizon_s: 20.0,
            ..SimParams::default()
        };
        let r = simulate(&t, &lcm, &cg, &one_flow(&t, TransportMode::Tcp, 1 << 20), &params);
        assert_eq!(r.dfc, 0);
        assert_eq!(r.pdr_pct, 100.0);
        assert_eq!(r.delivered_bits, (1u64 << 20) * 8);
        assert!(r.throughput_mbps > 0.0);
        // stop-and-wait over 3 hops + 3 ack hops per segment
        assert!(r.eed_us >= 3.0 * params.slot_us - 1e-6);
    }

    #[test]
    fn saturated_conflicting_udp_links_lose_everything() {
        // two 1-hop flows on mutually conflicting same-channel links
        let t = topo(
            &[(0.0, 0.0), (200.0, 0.0), (0.0, 100.0), (200.0, 100.0)],
            &[(0, 1), (2, 3)],
        );
        let cg = build_emmcg(&t, 2);
        assert!(cg.are_adjacent(LinkId(0), LinkId(1)));
        let lcm = lcm_of(&[0, 0]);
        let scenario = TrafficScenario {
            label: "sat".into(),
            flows: vec![
                Flow {
                    src: NodeId(0),
                    dst: NodeId(1),
                    mode: TransportMode::Udp,
                    payload_bytes: 0,
                    hops: 1,
                },
                Flow {
                    src: NodeId(2),
                    dst: NodeId(3),
                    mode: TransportMode::Udp,
                    payload_bytes: 0,
                    hops: 1,
                },
            ],
        };
        let params = SimParams {
            udp_tx_prob: 1.0,
            horizon_s: 10.0,
            ..SimParams::default()
        };
        let r = simulate(&t, &lcm, &cg, &scenario, &params);
        assert_eq!(r.pdr_pct, 0.0);
        assert_eq!(r.delivered_packets, 0);
        assert_eq!(r.dfc, 2);
    }

    #[test]
    fn non_conflicting_udp_delivers_all() {
        let t = chain4();
        let cg = build_emmcg(&t, 2);
        let lcm = lcm_of(&[0, 1, 2]);
        let params = SimParams {
            udp_tx_prob: 1.0,
            horizon_s: 10.0,
            ..SimParams::default()
        };
        let r = simulate(&t, &lcm, &cg, &one_flow(&t, TransportMode::Udp, 0), &params);
        assert_eq!(r.pdr_pct, 100.0, "zero-interference ceiling");
        assert!(r.offered_packets > 0);
        assert_eq!(r.delivered_packets, r.offered_packets);
    }

    #[test]
    fn pathless_flow_counts_as_disrupted() {
        let t = chain4();
        let cg = build_emmcg(&t, 2);
        // middle link unresolved: node 0 cannot reach node 3
        let lcm = LinkChannelMap::from_pairs([
            (LinkId(0), ChannelId(0)),
            (LinkId(2), ChannelId(1)),
        ]);
        let params = SimParams {
            horizon_s: 2.0,
            ..SimParams::default()
        };
        let r = simulate(&t, &lcm, &cg, &one_flow(&t, TransportMode::Tcp, 1 << 20), &params);
        assert_eq!(r.dfc, 1);
        assert_eq!(r.delivered_packets, 0);
        assert_eq!(r.throughput_mbps, 0.0);
    }

    #[test]
    fn simulation_is_deterministic() {
        let t = chain4();
        let cg = build_emmcg(&t, 2);
        let lcm = lcm_of(&[0, 0, 0]);
        let params = SimParams {
            horizon_s: 5.0,
            seed: 9,
            ..SimParams::default()
        };
        let scenario = one_flow(&t, TransportMode::Udp, 0);
        let a = simulate(&t, &lcm, &cg, &scenario, &params);
        let b = simulate(&t, &lcm, &cg, &scenario, &params);
        assert_eq!(a, b);
    }

    #[test]
    fn conservation_holds() {
        let t = chain4();
        let cg = build_emmcg(&t, 2);
        let lcm = lcm_of(&[0, 0, 0]);
        for seed in 0..5 {
            let params = SimParams {
                horizon_s: 5.0,
                seed,
                ..SimParams::default()
            };
            let r = simulate(&t, &lcm, &cg, &one_flow(&t, TransportMode::Udp, 0), &params);
            assert!(r.delivered_packets <= r.sent_packets);
            assert!(r.sent_packets <= r.offered_packets);
            assert!(r.pdr_pct >= 0.0 && r.pdr_pct <= 100.0);
        }
    }

    #[test]
    fn scenario_respects_hop_bounds_and_determinism() {
        let nodes: Vec<(f64, f64)> = (0..14).map(|i| (i as f64 * 240.0, 0.0)).collect();
        let links: Vec<(u32, u32)> = (0..13).map(|i| (i, i + 1)).collect();
        let t = topo(&nodes, &links);
        let lcm = lcm_of(&[0; 13]);
        let a = build_scenario(&t, &lcm, 6, 3).unwrap();
        let b = build_scenario(&t, &lcm, 6, 3).unwrap();
        assert_eq!(a, b);
        for f in &a.flows {
            assert!((3..=11).contains(&f.hops));
        }
    }

    #[test]
    fn scenario_errors_when_no_pairs() {
        let t = topo(&[(0.0, 0.0), (200.0, 0.0)], &[(0, 1)]);
        let lcm = lcm_of(&[0]);
        let err = build_scenario(&t, &lcm, 1, 0).unwrap_err();
        assert!(matches!(err, Error::NoEligiblePairs(_)));
    }

    #[test]
    fn aggregate_means_the_metrics() {
        let r = |tput: f64| SimResult {
            throughput_mbps: tput,
            dfc: 1,
            pdr_pct: 50.0,
            eed_us: 100.0,
            offered_packets: 0,
            sent_packets: 0,
            delivered_packets: 0,
            delivered_bits: 0,
        };
        let s = aggregate_npms(&[r(10.0), r(20.0)]).unwrap();
        assert_eq!(s.throughput_mbps, 15.0);
        assert_eq!(s.dfc, 1.0);
        assert!(aggregate_npms(&[]).is_err());
        let one = aggregate_npms(&[r(7.0)]).unwrap();
        assert_eq!(one.throughput_mbps, 7.0);
    }
}
