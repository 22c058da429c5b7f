//! Channel assignment performance prediction metrics beyond TID:
//! CDAL_cost (channel distribution across links) and CXLS_wt (cumulative
//! X-link-set weight).
//!
//! Both are oriented "higher = more interference = worse", like TID.

use crate::assignment::LinkChannelMap;
use crate::conflict::ConflictGraph;
use crate::topology::{LinkId, MeshTopology};
use crate::{Error, Result};

/// Number of links assigned to each channel.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ChannelLoadVector {
    pub counts: Vec<u32>,
}

/// Count resolved links per channel; the vector always has
/// `channel_count` entries, including zero-load channels.
pub fn channel_load_vector(lcm: &LinkChannelMap, channel_count: u8) -> ChannelLoadVector {
    let mut counts = vec![0u32; channel_count as usize];
    for (_, c) in lcm.iter() {
        if (c.0 as usize) < counts.len() {
            counts[c.0 as usize] += 1;
        }
    }
    ChannelLoadVector { counts }
}

/// Population standard deviation of the channel load vector: zero exactly
/// for perfectly even channel utilization, growing as the distribution
/// skews.
pub fn cdal_cost(lcm: &LinkChannelMap, channel_count: u8) -> Result<f64> {
    if lcm.is_empty() {
        return Err(Error::Metric("CDAL_cost of an empty link map".into()));
    }
    if channel_count == 0 {
        return Err(Error::Metric("CDAL_cost needs at least one channel".into()));
    }
    let loads = channel_load_vector(lcm, channel_count).counts;
    let mean = loads.iter().sum::<u32>() as f64 / loads.len() as f64;
    let var = loads
        .iter()
        .map(|&c| (c as f64 - mean).powi(2))
        .sum::<f64>()
        / loads.len() as f64;
    Ok(var.sqrt())
}

/// A connected set of exactly X links (connected over shared nodes).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct XLinkSet {
    pub links: Vec<LinkId>,
}

/// Enumerate every connected link-set of size exactly `x` over the alive
/// (channel-resolved) links, each set exactly once. For `x = 1` this is
/// one set per link.
pub fn enumerate_x_link_sets(topo: &MeshTopology, lcm: &LinkChannelMap, x: usize) -> Vec<XLinkSet> {
    if x == 0 {
        return Vec::new();
    }
    let alive: Vec<LinkId> = lcm.links().collect();

    // line-graph adjacency: alive links sharing a topology node
    let mut adj: Vec<Vec<usize>> = vec![Vec::new(); alive.len()];
    let mut node_links: Vec<Vec<usize>> = vec![Vec::new(); topo.node_count()];
    for (i, &l) in alive.iter().enumerate() {
        let link = &topo.links[l.0 as usize];
        node_links[link.a.0 as usize].push(i);
        node_links[link.b.0 as usize].push(i);
    }
    for members in &node_links {
        for (p, &i) in members.iter().enumerate() {
            for &j in &members[p + 1..] {
                adj[i].push(j);
                adj[j].push(i);
            }
        }
    }
    for row in &mut adj {
        row.sort_unstable();
        row.dedup();
    }

    // ESU-style enumeration of connected induced subgraphs of the line graph
    let mut out = Vec::new();
    let mut sub = Vec::new();
    for v in 0..alive.len() {
        sub.push(v);
        let ext: Vec<usize> = adj[v].iter().copied().filter(|&u| u > v).collect();
        let mut blocked = vec![false; alive.len()];
        blocked[v] = true;
        for &u in &adj[v] {
            blocked[u] = true;
        }
        extend(&adj, x, v, &mut sub, ext, &mut blocked, &mut out);
        sub.pop();
    }

    out.into_iter()
        .map(|set| XLinkSet {
            links: {
                let mut ids: Vec<LinkId> = set.into_iter().map(|i| alive[i]).collect();
                ids.sort();
                ids
            },
        })
        .collect()
}

/// `blocked` marks vertices already in the subgraph or adjacent to it;
/// only exclusive neighbors of the newly added vertex enter the extension.
fn extend(
    adj: &[Vec<usize>],
    x: usize,
    root: usize,
    sub: &mut Vec<usize>,
    mut ext: Vec<usize>,
    blocked: &mut [bool],
    out: &mut Vec<Vec<usize>>,
) {
    if sub.len() == x {
        out.push(sub.clone());
        return;
    }
    while let Some(w) = ext.pop() {
        let mut ext2 = ext.clone();
        let mut newly_blocked = Vec::new();
        for &u in &adj[w] {
            if u > root && !blocked[u] {
                ext2.push(u);
                blocked[u] = true;
                newly_blocked.push(u);
            }
        }
        sub.push(w);
        extend(adj, x, root, sub, ext2, blocked, out);
        sub.pop();
        for u in newly_blocked {
            blocked[u] = false;
        }
    }
}

/// Cumulative X-link-set weight: the sum over every connected set of X
/// links of the number of link pairs inside the set that are both conflict
/// graph adjacent and on the same channel.
///
/// `x` must equal the ratio the conflict graph was built with, since the
/// set size models the interference impact radius.
pub fn cxls_wt(
    topo: &MeshTopology,
    lcm: &LinkChannelMap,
    cg: &ConflictGraph,
    x: usize,
) -> Result<u64> {
    if x != cg.ir_tr_ratio as usize {
        return Err(Error::Metric(format!(
            "x-link-set size {x} does not match the conflict graph ratio {}",
            cg.ir_tr_ratio
        )));
    }
    let sets = enumerate_x_link_sets(topo, lcm, x);
    let mut total = 0u64;
    for set in &sets {
        for (i, &a) in set.links.iter().enumerate() {
            for &b in &set.links[i + 1..] {
                if cg.are_adjacent(a, b) && lcm.channel(a) == lcm.channel(b) {
                    total += 1;
                }
            }
        }
    }
    Ok(total)
}
