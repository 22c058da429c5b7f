//! Shared helpers for the integration suites: seeded random instances and
//! first-principles oracles kept independent of the library's data
//! structures.
//!
//! Each integration binary uses its own subset of these.
#![allow(dead_code)]

use std::collections::BTreeSet;

use rand::Rng;
use rand_chacha::ChaCha8Rng;

use meshcap::assignment::{ChannelId, LinkChannelMap};
use meshcap::topology::{Link, LinkId, MeshTopology, Node, NodeId};

/// Random topology with 4..=8 nodes and at most `max_links` links
/// (possibly disconnected; the metrics do not require connectivity).
pub fn random_topology(rng: &mut ChaCha8Rng, max_links: usize) -> MeshTopology {
    let n = rng.gen_range(4..=8);
    let nodes: Vec<Node> = (0..n)
        .map(|i| Node {
            id: NodeId(i),
            x: rng.gen_range(0.0..800.0),
            y: rng.gen_range(0.0..800.0),
        })
        .collect();
    let mut pairs: Vec<(u32, u32)> = (0..n)
        .flat_map(|a| ((a + 1)..n).map(move |b| (a, b)))
        .collect();
    for i in (1..pairs.len()).rev() {
        let j = rng.gen_range(0..=i);
        pairs.swap(i, j);
    }
    let count = rng.gen_range(1..=max_links.min(pairs.len()));
    let mut chosen: Vec<(u32, u32)> = pairs.into_iter().take(count).collect();
    chosen.sort();
    MeshTopology {
        nodes,
        links: chosen
            .into_iter()
            .enumerate()
            .map(|(i, (a, b))| Link {
                id: LinkId(i as u32),
                a: NodeId(a),
                b: NodeId(b),
            })
            .collect(),
        radios_per_node: 3,
        tx_range: 250.0,
        area: (800.0, 800.0),
    }
}

pub fn random_lcm(rng: &mut ChaCha8Rng, topo: &MeshTopology, channels: u8) -> LinkChannelMap {
    LinkChannelMap::from_pairs(
        topo.links
            .iter()
            .map(|l| (l.id, ChannelId(rng.gen_range(0..channels)))),
    )
}

/// Oracle: two links conflict iff they are distinct and any endpoint of one
/// is within `ratio * tx_range` of any endpoint of the other.
pub fn brute_force_conflicts(topo: &MeshTopology, ratio: u32) -> BTreeSet<(u32, u32)> {
    let i_r = ratio as f64 * topo.tx_range;
    let mut edges = BTreeSet::new();
    for i in 0..topo.links.len() {
        for j in (i + 1)..topo.links.len() {
            let (li, lj) = (&topo.links[i], &topo.links[j]);
            let conflict = [li.a, li.b]
                .iter()
                .any(|&p| [lj.a, lj.b].iter().any(|&q| topo.distance(p, q) <= i_r));
            if conflict {
                edges.insert((i as u32, j as u32));
            }
        }
    }
    edges
}

fn shares_node(topo: &MeshTopology, a: u32, b: u32) -> bool {
    let (la, lb) = (&topo.links[a as usize], &topo.links[b as usize]);
    la.a == lb.a || la.a == lb.b || la.b == lb.a || la.b == lb.b
}

fn set_connected(topo: &MeshTopology, set: &[u32]) -> bool {
    let mut seen = vec![false; set.len()];
    seen[0] = true;
    let mut frontier = vec![0usize];
    while let Some(i) = frontier.pop() {
        for j in 0..set.len() {
            if !seen[j] && shares_node(topo, set[i], set[j]) {
                seen[j] = true;
                frontier.push(j);
            }
        }
    }
    seen.into_iter().all(|s| s)
}

/// Oracle: all size-x link subsets connected via shared nodes, by
/// exhaustive subset enumeration.
pub fn brute_force_x_sets(
    topo: &MeshTopology,
    lcm: &LinkChannelMap,
    x: usize,
) -> BTreeSet<Vec<u32>> {
    fn rec(
        topo: &MeshTopology,
        links: &[u32],
        x: usize,
        start: usize,
        subset: &mut Vec<u32>,
        out: &mut BTreeSet<Vec<u32>>,
    ) {
        if subset.len() == x {
            if set_connected(topo, subset) {
                out.insert(subset.clone());
            }
            return;
        }
        for i in start..links.len() {
            subset.push(links[i]);
            rec(topo, links, x, i + 1, subset, out);
            subset.pop();
        }
    }
    let links: Vec<u32> = lcm.links().map(|l| l.0).collect();
    let mut out = BTreeSet::new();
    if !links.is_empty() && x >= 1 {
        rec(topo, &links, x, 0, &mut Vec::new(), &mut out);
    }
    out
}

/// Spearman rank correlation with average ranks for ties.
pub fn spearman(xs: &[f64], ys: &[f64]) -> f64 {
    assert_eq!(xs.len(), ys.len());
    let rx = ranks(xs);
    let ry = ranks(ys);
    let n = xs.len() as f64;
    let mean = (n + 1.0) / 2.0;
    let mut num = 0.0;
    let mut dx = 0.0;
    let mut dy = 0.0;
    for i in 0..xs.len() {
        num += (rx[i] - mean) * (ry[i] - mean);
        dx += (rx[i] - mean).powi(2);
        dy += (ry[i] - mean).powi(2);
    }
    if dx == 0.0 || dy == 0.0 {
        0.0
    } else {
        num / (dx * dy).sqrt()
    }
}

fn ranks(xs: &[f64]) -> Vec<f64> {
    let mut idx: Vec<usize> = (0..xs.len()).collect();
    idx.sort_by(|&a, &b| xs[a].partial_cmp(&xs[b]).unwrap());
    let mut out = vec![0.0; xs.len()];
    let mut i = 0;
    while i < idx.len() {
        let mut j = i;
        while j + 1 < idx.len() && xs[idx[j + 1]] == xs[idx[i]] {
            j += 1;
        }
        let avg = (i + j) as f64 / 2.0 + 1.0;
        for k in i..=j {
            out[idx[k]] = avg;
        }
        i = j + 1;
    }
    out
}
