//! Multi-radio multi-channel conflict graph (EMMCG) and interference
//! degree queries.
//!
//! One vertex per radio link (a topology link bound to one radio at each
//! endpoint). Two radio links are in conflict range when any endpoint of
//! one lies within `ir_tr_ratio * tx_range` meters of any endpoint of the
//! other; links bound to two different radios of a shared node additionally
//! carry a radio co-location mark. Edges are structural: whether a conflict
//! is *live* depends on the channels, which is what the interference degree
//! queries take as input.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use crate::assignment::LinkChannelMap;
use crate::topology::{LinkId, MeshTopology, NodeId, RadioId};
use crate::{Error, Result};

/// A topology link bound to a concrete radio at each endpoint.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct RadioLink {
    pub link: LinkId,
    pub a: (NodeId, RadioId),
    pub b: (NodeId, RadioId),
}

impl RadioLink {
    /// The radio this link uses at `node`, if `node` is an endpoint.
    pub fn radio_at(&self, node: NodeId) -> Option<RadioId> {
        if self.a.0 == node {
            Some(self.a.1)
        } else if self.b.0 == node {
            Some(self.b.1)
        } else {
            None
        }
    }

    fn shared_node(&self, other: &RadioLink) -> Option<NodeId> {
        [self.a.0, self.b.0]
            .into_iter()
            .find(|&n| other.a.0 == n || other.b.0 == n)
    }
}

/// Why two radio links may conflict. Co-located pairs always also satisfy
/// the range predicate (they share a node), so `colocation` refines rather
/// than replaces `range`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct EdgeKind {
    pub range: bool,
    pub colocation: bool,
}

impl std::fmt::Display for EdgeKind {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match (self.range, self.colocation) {
            (true, true) => write!(f, "range+coloc"),
            (true, false) => write!(f, "range"),
            (false, true) => write!(f, "coloc"),
            (false, false) => write!(f, "none"),
        }
    }
}

/// The conflict graph over radio links.
#[derive(Debug, Clone)]
pub struct ConflictGraph {
    pub vertices: Vec<RadioLink>,
    /// Interference-to-transmission range ratio X; interference range is
    /// `X * tx_range`.
    pub ir_tr_ratio: u32,
    adj: Vec<Vec<u32>>,
    kinds: BTreeMap<(u32, u32), EdgeKind>,
}

/// Build the conflict graph for a topology.
///
/// Radio bindings are canonical: at each node, incident links take radios
/// round-robin in ascending link-id order. Adjacency itself is independent
/// of the binding (links sharing a node are always within range of each
/// other); the binding determines only which edges carry the co-location
/// mark, which the co-location aware schemes weight more heavily.
pub fn build_emmcg(topo: &MeshTopology, ir_tr_ratio: u32) -> ConflictGraph {
    assert!(ir_tr_ratio >= 1, "ir_tr_ratio must be a positive integer");
    let radios = topo.radios_per_node.max(1);
    let mut next_radio = vec![0u8; topo.node_count()];
    let mut vertices = Vec::with_capacity(topo.link_count());
    for link in &topo.links {
        let ra = next_radio[link.a.0 as usize];
        next_radio[link.a.0 as usize] = (ra + 1) % radios;
        let rb = next_radio[link.b.0 as usize];
        next_radio[link.b.0 as usize] = (rb + 1) % radios;
        vertices.push(RadioLink {
            link: link.id,
            a: (link.a, RadioId(ra)),
            b: (link.b, RadioId(rb)),
        });
    }

    let i_r = ir_tr_ratio as f64 * topo.tx_range;
    let mut adj = vec![Vec::new(); vertices.len()];
    let mut kinds = BTreeMap::new();
    for i in 0..vertices.len() {
        for j in (i + 1)..vertices.len() {
            let (vi, vj) = (&vertices[i], &vertices[j]);
            let mut min_d = f64::INFINITY;
            for p in [vi.a.0, vi.b.0] {
                for q in [vj.a.0, vj.b.0] {
                    min_d = min_d.min(topo.distance(p, q));
                }
            }
            let range = min_d <= i_r;
            let colocation = match vi.shared_node(vj) {
                Some(n) => vi.radio_at(n) != vj.radio_at(n),
                None => false,
            };
            if range || colocation {
                adj[i].push(j as u32);
                adj[j].push(i as u32);
                kinds.insert((i as u32, j as u32), EdgeKind { range, colocation });
            }
        }
    }
    ConflictGraph {
        vertices,
        ir_tr_ratio,
        adj,
        kinds,
    }
}

impl ConflictGraph {
    pub fn vertex_count(&self) -> usize {
        self.vertices.len()
    }

    pub fn edge_count(&self) -> usize {
        self.kinds.len()
    }

    /// Neighbor link indices of a vertex (indices equal link ids).
    pub fn neighbors(&self, link: LinkId) -> Result<&[u32]> {
        self.adj
            .get(link.0 as usize)
            .map(|v| v.as_slice())
            .ok_or(Error::LinkNotInGraph(link))
    }

    pub fn are_adjacent(&self, a: LinkId, b: LinkId) -> bool {
        let key = (a.0.min(b.0), a.0.max(b.0));
        a != b && self.kinds.contains_key(&key)
    }

    pub fn edge_kind(&self, a: LinkId, b: LinkId) -> Option<EdgeKind> {
        self.kinds.get(&(a.0.min(b.0), a.0.max(b.0))).copied()
    }

    /// All edges as `(low, high, kind)` in canonical order.
    pub fn edges(&self) -> impl Iterator<Item = (LinkId, LinkId, EdgeKind)> + '_ {
        self.kinds
            .iter()
            .map(|(&(a, b), &k)| (LinkId(a), LinkId(b), k))
    }

    /// Canonically sorted edge-list dump, one `linkA linkB kind` per line.
    pub fn dump_edges(&self) -> String {
        let mut out = String::new();
        for (a, b, kind) in self.edges() {
            writeln!(out, "{a} {b} {kind}").unwrap();
        }
        out
    }
}

/// Number of live conflicts for one link: conflict-graph neighbors that are
/// assigned the same channel. Neighbors without a resolved channel do not
/// conflict (a link that cannot transmit interferes with nothing).
pub fn interference_degree(
    cg: &ConflictGraph,
    lcm: &LinkChannelMap,
    link: LinkId,
) -> Result<usize> {
    let channel = lcm.channel(link);
    let neighbors = cg.neighbors(link)?;
    let Some(channel) = channel else {
        return Ok(0);
    };
    Ok(neighbors
        .iter()
        .filter(|&&n| lcm.channel(LinkId(n)) == Some(channel))
        .count())
}

/// Total interference degree: the number of unordered conflicting link
/// pairs that share a channel. Equals half the sum of per-link
/// interference degrees, and equals the conflict-graph edge count under a
/// single-channel assignment.
pub fn total_interference_degree(cg: &ConflictGraph, lcm: &LinkChannelMap) -> usize {
    cg.kinds
        .keys()
        .filter(|&&(a, b)| {
            match (lcm.channel(LinkId(a)), lcm.channel(LinkId(b))) {
                (Some(ca), Some(cb)) => ca == cb,
                _ => false,
            }
        })
        .count()
}
