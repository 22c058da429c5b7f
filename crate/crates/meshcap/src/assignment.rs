//! Channel assignment: scheme suite, link-channel resolution, topology
//! preservation, and the assignment file format.
//!
//! Every scheme produces a total radio -> channel map plus a per-link radio
//! binding. A link is *alive* when its two bound radios share a channel;
//! otherwise it is broken and cannot carry traffic. All schemes are
//! deterministic for a fixed seed.

use std::collections::{BTreeMap, VecDeque};
use std::fmt;
use std::str::FromStr;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::conflict::ConflictGraph;
use crate::topology::{LinkId, MeshTopology, NodeId, RadioId};
use crate::{Error, Result};

/// Orthogonal channel index in `[0, channel_count)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct ChannelId(pub u8);

impl fmt::Display for ChannelId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

/// Channel of each alive link: the common channel of its two bound radios.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct LinkChannelMap {
    map: BTreeMap<LinkId, ChannelId>,
}

impl LinkChannelMap {
    pub fn from_pairs(pairs: impl IntoIterator<Item = (LinkId, ChannelId)>) -> Self {
        LinkChannelMap {
            map: pairs.into_iter().collect(),
        }
    }

    pub fn channel(&self, link: LinkId) -> Option<ChannelId> {
        self.map.get(&link).copied()
    }

    pub fn len(&self) -> usize {
        self.map.len()
    }

    pub fn is_empty(&self) -> bool {
        self.map.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = (LinkId, ChannelId)> + '_ {
        self.map.iter().map(|(&l, &c)| (l, c))
    }

    pub fn links(&self) -> impl Iterator<Item = LinkId> + '_ {
        self.map.keys().copied()
    }
}

// ---------------------------------------------------------------------------
// Schemes
// ---------------------------------------------------------------------------

/// The channel assignment scheme suite. `Single` and `Spread` are
/// degenerate baselines used for testing and as worst/simple anchors.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Scheme {
    Bfs,
    Mis,
    Ec,
    Lp,
    Eizm,
    Ois,
    Single,
    Spread,
}

impl Scheme {
    pub const ALL: [Scheme; 8] = [
        Scheme::Bfs,
        Scheme::Mis,
        Scheme::Ec,
        Scheme::Lp,
        Scheme::Eizm,
        Scheme::Ois,
        Scheme::Single,
        Scheme::Spread,
    ];

    /// The six-scheme evaluation suite (without the degenerate baselines).
    pub const SUITE: [Scheme; 6] = [
        Scheme::Bfs,
        Scheme::Mis,
        Scheme::Ec,
        Scheme::Lp,
        Scheme::Eizm,
        Scheme::Ois,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Scheme::Bfs => "BFS",
            Scheme::Mis => "MIS",
            Scheme::Ec => "EC",
            Scheme::Lp => "LP",
            Scheme::Eizm => "EIZM",
            Scheme::Ois => "OIS",
            Scheme::Single => "SINGLE",
            Scheme::Spread => "SPREAD",
        }
    }

    /// Co-location aware schemes weight radio co-location conflicts double
    /// in their greedy objectives.
    fn colocation_weight(self) -> u32 {
        match self {
            Scheme::Eizm | Scheme::Ois => 2,
            _ => 1,
        }
    }
}

impl fmt::Display for Scheme {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Scheme {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_uppercase().as_str() {
            "BFS" => Ok(Scheme::Bfs),
            "MIS" => Ok(Scheme::Mis),
            "EC" => Ok(Scheme::Ec),
            "LP" => Ok(Scheme::Lp),
            "EIZM" => Ok(Scheme::Eizm),
            "OIS" => Ok(Scheme::Ois),
            "SINGLE" => Ok(Scheme::Single),
            "SPREAD" => Ok(Scheme::Spread),
            _ => Err(Error::UnknownScheme(s.to_string())),
        }
    }
}

impl Serialize for Scheme {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(self.name())
    }
}

impl<'de> Deserialize<'de> for Scheme {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

/// A total assignment of channels to radios plus the link -> radio-pair
/// bindings chosen at assignment time.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ChannelAssignment {
    pub scheme: String,
    pub channel_count: u8,
    pub radio_channels: BTreeMap<(NodeId, RadioId), ChannelId>,
    /// Radio bound at the link's lower endpoint `a` and at `b`. Links
    /// without an entry ended up with no common channel (broken).
    pub link_bindings: BTreeMap<LinkId, (RadioId, RadioId)>,
}

// ---------------------------------------------------------------------------
// Shared greedy machinery
// ---------------------------------------------------------------------------

/// Incremental link-channel state: per-node distinct-channel budgets
/// (a node can host at most `radios_per_node` distinct channels among its
/// incident links) and conflict scoring against the conflict graph.
struct Channeler<'a> {
    topo: &'a MeshTopology,
    cg: &'a ConflictGraph,
    channel_count: u8,
    coloc_weight: u32,
    link_channel: Vec<Option<u8>>,
    /// Per node: channel -> count of incident links on it.
    node_refs: Vec<BTreeMap<u8, u32>>,
    /// Per node: channels in first-use order (drives radio numbering).
    node_order: Vec<Vec<u8>>,
}

impl<'a> Channeler<'a> {
    fn new(topo: &'a MeshTopology, cg: &'a ConflictGraph, channel_count: u8, coloc_weight: u32) -> Self {
        Channeler {
            topo,
            cg,
            channel_count,
            coloc_weight,
            link_channel: vec![None; topo.link_count()],
            node_refs: vec![BTreeMap::new(); topo.node_count()],
            node_order: vec![Vec::new(); topo.node_count()],
        }
    }

    fn budget_ok(&self, node: NodeId, c: u8) -> bool {
        let refs = &self.node_refs[node.0 as usize];
        refs.contains_key(&c) || refs.len() < self.topo.radios_per_node as usize
    }

    /// Can `link` take channel `c` without overflowing either endpoint's
    /// radio budget?
    fn feasible(&self, link: usize, c: u8) -> bool {
        let l = &self.topo.links[link];
        self.budget_ok(l.a, c) && self.budget_ok(l.b, c)
    }

    /// Like `feasible`, for re-channeling an already assigned link.
    fn move_feasible(&self, link: usize, c: u8) -> bool {
        let old = match self.link_channel[link] {
            Some(old) => old,
            None => return self.feasible(link, c),
        };
        if c == old {
            return true;
        }
        let l = &self.topo.links[link];
        for node in [l.a, l.b] {
            let refs = &self.node_refs[node.0 as usize];
            let frees_slot = refs.get(&old) == Some(&1);
            let distinct_after = refs.len() - usize::from(frees_slot);
            if !refs.contains_key(&c) && distinct_after >= self.topo.radios_per_node as usize {
                return false;
            }
        }
        true
    }

    fn edge_weight(&self, a: usize, b: usize) -> u32 {
        if self.coloc_weight > 1 {
            match self.cg.edge_kind(LinkId(a as u32), LinkId(b as u32)) {
                Some(kind) if kind.colocation => self.coloc_weight,
                _ => 1,
            }
        } else {
            1
        }
    }

    /// Weighted count of conflict-graph neighbors of `link` currently on
    /// channel `c`.
    fn conflict_score(&self, link: usize, c: u8) -> u32 {
        self.cg
            .neighbors(LinkId(link as u32))
            .map(|ns| {
                ns.iter()
                    .filter(|&&n| self.link_channel[n as usize] == Some(c))
                    .map(|&n| self.edge_weight(link, n as usize))
                    .sum()
            })
            .unwrap_or(0)
    }

    fn add_ref(&mut self, node: NodeId, c: u8) {
        let refs = &mut self.node_refs[node.0 as usize];
        let count = refs.entry(c).or_insert(0);
        *count += 1;
        if *count == 1 {
            self.node_order[node.0 as usize].push(c);
        }
    }

    fn drop_ref(&mut self, node: NodeId, c: u8) {
        let refs = &mut self.node_refs[node.0 as usize];
        let count = refs.get_mut(&c).expect("channel ref underflow");
        *count -= 1;
        if *count == 0 {
            refs.remove(&c);
            self.node_order[node.0 as usize].retain(|&x| x != c);
        }
    }

    /// Assign without a budget check (used by edge coloring, whose binding
    /// overflow is resolved at finalize time as broken links).
    fn assign(&mut self, link: usize, c: u8) {
        debug_assert!(self.link_channel[link].is_none());
        self.link_channel[link] = Some(c);
        let l = self.topo.links[link];
        self.add_ref(l.a, c);
        self.add_ref(l.b, c);
    }

    fn rechannel(&mut self, link: usize, c: u8) {
        let old = self.link_channel[link].expect("rechannel of unassigned link");
        if old == c {
            return;
        }
        let l = self.topo.links[link];
        self.drop_ref(l.a, old);
        self.drop_ref(l.b, old);
        self.link_channel[link] = Some(c);
        self.add_ref(l.a, c);
        self.add_ref(l.b, c);
    }

    /// Channels `0..channel_count` feasible for `link`, in ascending order.
    fn feasible_channels(&self, link: usize) -> Vec<u8> {
        (0..self.channel_count).filter(|&c| self.feasible(link, c)).collect()
    }

    /// Derive radio channels and link bindings from the link channels.
    /// At each node, distinct channels map to radios in first-use order;
    /// channels beyond the radio budget leave their links unbound (broken).
    fn finalize(self, scheme: &str) -> ChannelAssignment {
        let radios = self.topo.radios_per_node;
        let mut radio_channels = BTreeMap::new();
        let mut node_radio_of_channel: Vec<BTreeMap<u8, RadioId>> =
            vec![BTreeMap::new(); self.topo.node_count()];
        for (n, order) in self.node_order.iter().enumerate() {
            let node = NodeId(n as u32);
            let fill = order.first().copied().unwrap_or(0);
            for r in 0..radios {
                let c = order.get(r as usize).copied().unwrap_or(fill);
                radio_channels.insert((node, RadioId(r)), ChannelId(c));
                if (r as usize) < order.len() {
                    node_radio_of_channel[n].insert(c, RadioId(r));
                }
            }
        }
        let mut link_bindings = BTreeMap::new();
        for (i, link) in self.topo.links.iter().enumerate() {
            if let Some(c) = self.link_channel[i] {
                let ra = node_radio_of_channel[link.a.0 as usize].get(&c);
                let rb = node_radio_of_channel[link.b.0 as usize].get(&c);
                if let (Some(&ra), Some(&rb)) = (ra, rb) {
                    link_bindings.insert(link.id, (ra, rb));
                }
            }
        }
        ChannelAssignment {
            scheme: scheme.to_string(),
            channel_count: self.channel_count,
            radio_channels,
            link_bindings,
        }
    }
}

// ---------------------------------------------------------------------------
// Scheme implementations
// ---------------------------------------------------------------------------

/// Run a channel assignment scheme.
pub fn run_ca_scheme(
    scheme: Scheme,
    topo: &MeshTopology,
    cg: &ConflictGraph,
    channel_count: u8,
    seed: u64,
) -> Result<ChannelAssignment> {
    if channel_count == 0 {
        return Err(Error::Config("channel_count must be >= 1".into()));
    }
    let mut ch = Channeler::new(topo, cg, channel_count, scheme.colocation_weight());
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    match scheme {
        Scheme::Single => {
            for i in 0..topo.link_count() {
                ch.assign(i, 0);
            }
        }
        Scheme::Spread => spread(&mut ch),
        Scheme::Bfs => bfs(&mut ch, &mut rng),
        Scheme::Ec => edge_coloring(&mut ch),
        Scheme::Mis | Scheme::Ois => independent_sets(&mut ch),
        Scheme::Lp | Scheme::Eizm => local_minimization(&mut ch),
    }
    Ok(ch.finalize(scheme.name()))
}

/// Greedy conflict spreading in link-id order; ties go to the lighter
/// loaded, then lower channel.
fn spread(ch: &mut Channeler) {
    let mut load = vec![0u32; ch.channel_count as usize];
    for link in 0..ch.topo.link_count() {
        let pick = ch
            .feasible_channels(link)
            .into_iter()
            .min_by_key(|&c| (ch.conflict_score(link, c), load[c as usize], c));
        if let Some(c) = pick {
            ch.assign(link, c);
            load[c as usize] += 1;
        }
    }
}

/// Breadth-first traversal from a seeded root; each visited node channels
/// its unassigned incident links with the myopically least conflicting
/// feasible channel (ties to the lowest channel id).
fn bfs(ch: &mut Channeler, rng: &mut ChaCha8Rng) {
    let n = ch.topo.node_count();
    let adj = ch.topo.adjacency();
    let root = rng.gen_range(0..n);
    let mut seen = vec![false; n];
    let mut queue = VecDeque::new();
    for start in 0..n {
        // visit every component; the seeded root goes first
        let s = (root + start) % n;
        if seen[s] {
            continue;
        }
        seen[s] = true;
        queue.push_back(s);
        while let Some(u) = queue.pop_front() {
            let mut incident: Vec<(NodeId, LinkId)> = adj[u].clone();
            incident.sort_by_key(|&(_, l)| l);
            for (v, link) in incident {
                let li = link.0 as usize;
                if ch.link_channel[li].is_none() {
                    let pick = ch
                        .feasible_channels(li)
                        .into_iter()
                        .min_by_key(|&c| (ch.conflict_score(li, c), c));
                    if let Some(c) = pick {
                        ch.assign(li, c);
                    }
                }
                let vi = v.0 as usize;
                if !seen[vi] {
                    seen[vi] = true;
                    queue.push_back(vi);
                }
            }
        }
    }
}

/// Greedy proper edge coloring of the topology in link-id order (smallest
/// color unused at both endpoints, growing palette), channel = color mod
/// channel_count. Nodes whose incident links end up on more distinct
/// channels than they have radios lose the excess links at binding time.
fn edge_coloring(ch: &mut Channeler) {
    let mut node_colors: Vec<std::collections::BTreeSet<u32>> =
        vec![Default::default(); ch.topo.node_count()];
    for (i, link) in ch.topo.links.iter().enumerate() {
        let used_a = &node_colors[link.a.0 as usize];
        let used_b = &node_colors[link.b.0 as usize];
        let mut color = 0u32;
        while used_a.contains(&color) || used_b.contains(&color) {
            color += 1;
        }
        node_colors[link.a.0 as usize].insert(color);
        node_colors[link.b.0 as usize].insert(color);
        ch.assign(i, (color % ch.channel_count as u32) as u8);
    }
}

/// Layered greedy maximal independent sets over the conflict graph
/// (min weighted residual degree first, ties by vertex id); layer k takes
/// channel `k mod channel_count`, falling back to the least conflicting
/// feasible channel when the budget forbids the layer channel.
fn independent_sets(ch: &mut Channeler) {
    let v = ch.cg.vertex_count();
    let mut unassigned: Vec<bool> = vec![true; v];
    let mut remaining = v;
    let mut layers: Vec<Vec<usize>> = Vec::new();
    while remaining > 0 {
        let mut avail: Vec<bool> = unassigned.clone();
        let mut wdeg = vec![0u32; v];
        for i in 0..v {
            if avail[i] {
                for &n in ch.cg.neighbors(LinkId(i as u32)).unwrap() {
                    if avail[n as usize] {
                        wdeg[i] += ch.edge_weight(i, n as usize);
                    }
                }
            }
        }
        let mut layer = Vec::new();
        loop {
            let pick = (0..v)
                .filter(|&i| avail[i])
                .min_by_key(|&i| (wdeg[i], i));
            let Some(pick) = pick else { break };
            layer.push(pick);
            avail[pick] = false;
            for &n in ch.cg.neighbors(LinkId(pick as u32)).unwrap() {
                let ni = n as usize;
                if avail[ni] {
                    avail[ni] = false;
                    // removing a vertex lowers its neighbors' residual degrees
                    for &m in ch.cg.neighbors(LinkId(n)).unwrap() {
                        let w = ch.edge_weight(ni, m as usize);
                        wdeg[m as usize] = wdeg[m as usize].saturating_sub(w);
                    }
                }
            }
        }
        for &i in &layer {
            unassigned[i] = false;
        }
        remaining -= layer.len();
        layers.push(layer);
    }

    for (k, layer) in layers.iter().enumerate() {
        let preferred = (k % ch.channel_count as usize) as u8;
        for &link in layer {
            let c = if ch.feasible(link, preferred) {
                Some(preferred)
            } else {
                ch.feasible_channels(link)
                    .into_iter()
                    .min_by_key(|&c| (ch.conflict_score(link, c), c))
            };
            if let Some(c) = c {
                ch.assign(link, c);
            }
        }
    }
}

/// Start from the single-channel assignment (all links alive) and greedily
/// re-channel one link at a time to reduce weighted same-channel conflicts,
/// never taking a move that would break any link's common-channel property.
fn local_minimization(ch: &mut Channeler) {
    for i in 0..ch.topo.link_count() {
        ch.assign(i, 0);
    }
    let max_passes = 64;
    for _ in 0..max_passes {
        let mut improved = false;
        for link in 0..ch.topo.link_count() {
            let cur = ch.link_channel[link].unwrap();
            let mut best = (ch.conflict_score(link, cur), cur);
            for c in 0..ch.channel_count {
                if c != cur && ch.move_feasible(link, c) {
                    let s = ch.conflict_score(link, c);
                    if s < best.0 {
                        best = (s, c);
                    }
                }
            }
            if best.1 != cur {
                ch.rechannel(link, best.1);
                improved = true;
            }
        }
        if !improved {
            break;
        }
    }
}

// ---------------------------------------------------------------------------
// Resolution and preservation
// ---------------------------------------------------------------------------

fn resolve_one(topo: &MeshTopology, ca: &ChannelAssignment, link: &crate::topology::Link) -> Option<ChannelId> {
    if let Some(&(ra, rb)) = ca.link_bindings.get(&link.id) {
        let ca_ch = ca.radio_channels.get(&(link.a, ra));
        let cb_ch = ca.radio_channels.get(&(link.b, rb));
        if let (Some(&x), Some(&y)) = (ca_ch, cb_ch) {
            if x == y {
                return Some(x);
            }
        }
    }
    // no (valid) binding stored: pick the lowest radio pair sharing a channel
    for ra in 0..topo.radios_per_node {
        for rb in 0..topo.radios_per_node {
            let x = ca.radio_channels.get(&(link.a, RadioId(ra)));
            let y = ca.radio_channels.get(&(link.b, RadioId(rb)));
            if let (Some(&x), Some(&y)) = (x, y) {
                if x == y {
                    return Some(x);
                }
            }
        }
    }
    None
}

/// Resolve the channel of every topology link. Errors with the full list
/// of broken links if any endpoint pair shares no channel.
pub fn resolve_link_channels(topo: &MeshTopology, ca: &ChannelAssignment) -> Result<LinkChannelMap> {
    let (lcm, broken) = resolve_link_channels_lenient(topo, ca);
    if broken.is_empty() {
        Ok(lcm)
    } else {
        Err(Error::BrokenLinks(broken))
    }
}

/// Resolve what can be resolved; broken links are returned separately.
pub fn resolve_link_channels_lenient(
    topo: &MeshTopology,
    ca: &ChannelAssignment,
) -> (LinkChannelMap, Vec<LinkId>) {
    let mut map = BTreeMap::new();
    let mut broken = Vec::new();
    for link in &topo.links {
        match resolve_one(topo, ca, link) {
            Some(c) => {
                map.insert(link.id, c);
            }
            None => broken.push(link.id),
        }
    }
    (LinkChannelMap { map }, broken)
}

/// Which links an assignment breaks.
#[derive(Debug, Clone)]
pub struct PreservationReport {
    pub broken: Vec<LinkId>,
}

impl PreservationReport {
    pub fn preserved(&self) -> bool {
        self.broken.is_empty()
    }
}

/// List the links whose endpoints share no common channel under `ca`.
pub fn check_topology_preservation(topo: &MeshTopology, ca: &ChannelAssignment) -> PreservationReport {
    let (_, broken) = resolve_link_channels_lenient(topo, ca);
    PreservationReport { broken }
}

// ---------------------------------------------------------------------------
// File format
// ---------------------------------------------------------------------------

/// Serialize an assignment: `# scheme` / `# channels` headers, then
/// `node radio channel` rows and `link radioA radioB channel` rows, all
/// canonically sorted.
pub fn assignment_to_string(topo: &MeshTopology, ca: &ChannelAssignment) -> String {
    use std::fmt::Write;
    let mut out = String::new();
    writeln!(out, "# scheme {}", ca.scheme).unwrap();
    writeln!(out, "# channels {}", ca.channel_count).unwrap();
    for (&(node, radio), &channel) in &ca.radio_channels {
        writeln!(out, "{node} {} {channel}", radio.0).unwrap();
    }
    let (lcm, _) = resolve_link_channels_lenient(topo, ca);
    for (&link, &(ra, rb)) in &ca.link_bindings {
        let c = lcm.channel(link).expect("bound link resolves");
        writeln!(out, "{link} {} {} {c}", ra.0, rb.0).unwrap();
    }
    out
}

/// Parse an assignment file. Rows with three integers are radio channels,
/// rows with four are link bindings; `# scheme` and `# channels` headers
/// carry the metadata.
pub fn assignment_from_str(text: &str, file: &str) -> Result<ChannelAssignment> {
    let err = |line: usize, msg: String| Error::Parse {
        file: file.to_string(),
        line,
        msg,
    };
    let mut scheme = String::from("UNKNOWN");
    let mut channel_count: Option<u8> = None;
    let mut radio_channels = BTreeMap::new();
    let mut link_bindings = BTreeMap::new();
    let mut link_channels: BTreeMap<LinkId, ChannelId> = BTreeMap::new();

    for (idx, raw) in text.lines().enumerate() {
        let lineno = idx + 1;
        let line = raw.trim();
        if line.is_empty() {
            continue;
        }
        if let Some(rest) = line.strip_prefix('#') {
            let rest = rest.trim();
            if let Some(s) = rest.strip_prefix("scheme ") {
                scheme = s.trim().to_string();
            } else if let Some(c) = rest.strip_prefix("channels ") {
                channel_count = Some(
                    c.trim()
                        .parse()
                        .map_err(|e| err(lineno, format!("bad channel count: {e}")))?,
                );
            }
            continue;
        }
        let fields: Vec<u32> = line
            .split_whitespace()
            .map(|f| f.parse::<u32>())
            .collect::<std::result::Result<_, _>>()
            .map_err(|e| err(lineno, format!("expected integer fields: {e}")))?;
        match fields.as_slice() {
            [node, radio, channel] => {
                radio_channels.insert(
                    (NodeId(*node), RadioId(*radio as u8)),
                    ChannelId(*channel as u8),
                );
            }
            [link, ra, rb, channel] => {
                link_bindings.insert(LinkId(*link), (RadioId(*ra as u8), RadioId(*rb as u8)));
                link_channels.insert(LinkId(*link), ChannelId(*channel as u8));
            }
            _ => return Err(err(lineno, format!("expected 3 or 4 fields, got {}", fields.len()))),
        }
    }

    let channel_count = channel_count.ok_or_else(|| {
        err(0, "missing `# channels <n>` header".into())
    })?;
    for (idx, raw) in text.lines().enumerate() {
        // second pass for range validation so the offending line is reported
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let fields: Vec<u32> = line
            .split_whitespace()
            .filter_map(|f| f.parse().ok())
            .collect();
        if let Some(&channel) = fields.last() {
            if channel >= channel_count as u32 {
                return Err(err(
                    idx + 1,
                    format!("channel {channel} out of range (channel_count {channel_count})"),
                ));
            }
        }
    }

    Ok(ChannelAssignment {
        scheme,
        channel_count,
        radio_channels,
        link_bindings,
    })
}

pub fn write_assignment(path: &std::path::Path, topo: &MeshTopology, ca: &ChannelAssignment) -> Result<()> {
    std::fs::write(path, assignment_to_string(topo, ca))?;
    Ok(())
}

pub fn read_assignment(path: &std::path::Path) -> Result<ChannelAssignment> {
    let text = std::fs::read_to_string(path)?;
    assignment_from_str(&text, &path.display().to_string())
}

// ---------------------------------------------------------------------------

#[cfg(test)]
mod tests {
    use super::*;
    use crate::conflict::{build_emmcg, total_interference_degree};
    use crate::topology::{GenTargets, Link, Node};

    fn topo(nodes: &[(f64, f64)], links: &[(u32, u32)], radios: u8) -> MeshTopology {
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
            radios_per_node: radios,
            tx_range: 250.0,
            area: (1500.0, 1500.0),
        }
    }

    fn star3() -> MeshTopology {
        topo(
            &[(0.0, 0.0), (200.0, 0.0), (0.0, 200.0), (-200.0, 0.0)],
            &[(0, 1), (0, 2), (0, 3)],
            3,
        )
    }

    #[test]
    fn single_assigns_channel_zero_everywhere() {
        let t = star3();
        let cg = build_emmcg(&t, 2);
        let ca = run_ca_scheme(Scheme::Single, &t, &cg, 4, 1).unwrap();
        assert!(ca.radio_channels.values().all(|&c| c == ChannelId(0)));
        let lcm = resolve_link_channels(&t, &ca).unwrap();
        assert!(lcm.iter().all(|(_, c)| c == ChannelId(0)));
        assert_eq!(total_interference_degree(&cg, &lcm), cg.edge_count());
    }

    #[test]
    fn edge_coloring_gives_star_links_distinct_channels() {
        let t = star3();
        let cg = build_emmcg(&t, 2);
        let ca = run_ca_scheme(Scheme::Ec, &t, &cg, 4, 1).unwrap();
        let lcm = resolve_link_channels(&t, &ca).unwrap();
        let channels: std::collections::BTreeSet<_> =
            lcm.iter().map(|(_, c)| c).collect();
        assert_eq!(channels.len(), 3, "degree-3 hub needs 3 distinct channels");
    }

    #[test]
    fn schemes_are_deterministic_per_seed() {
        let targets = GenTargets {
            node_count: 16,
            density_target: 0.2,
            density_tol: 0.03,
            cc_target: 0.4,
            cc_tol: 0.2,
            seed: 5,
            ..GenTargets::default()
        };
        let t = crate::topology::generate_rwmn(&targets).unwrap();
        let cg = build_emmcg(&t, 2);
        for scheme in Scheme::ALL {
            let a = run_ca_scheme(scheme, &t, &cg, 4, 77).unwrap();
            let b = run_ca_scheme(scheme, &t, &cg, 4, 77).unwrap();
            assert_eq!(a, b, "{scheme} must be deterministic");
            assert_eq!(
                a.radio_channels.len(),
                t.node_count() * t.radios_per_node as usize,
                "{scheme} must assign every radio"
            );
            assert!(a.radio_channels.values().all(|c| c.0 < 4));
        }
    }

    #[test]
    fn broken_link_detected_and_listed() {
        let t = topo(&[(0.0, 0.0), (200.0, 0.0)], &[(0, 1)], 1);
        let ca = ChannelAssignment {
            scheme: "HAND".into(),
            channel_count: 4,
            radio_channels: BTreeMap::from([
                ((NodeId(0), RadioId(0)), ChannelId(1)),
                ((NodeId(1), RadioId(0)), ChannelId(2)),
            ]),
            link_bindings: BTreeMap::new(),
        };
        let err = resolve_link_channels(&t, &ca).unwrap_err();
        match err {
            Error::BrokenLinks(links) => assert_eq!(links, vec![LinkId(0)]),
            other => panic!("unexpected error {other}"),
        }
        let report = check_topology_preservation(&t, &ca);
        assert!(!report.preserved());
        assert_eq!(report.broken.len(), 1);
    }

    #[test]
    fn single_preserves_topology() {
        let t = star3();
        let cg = build_emmcg(&t, 2);
        let ca = run_ca_scheme(Scheme::Single, &t, &cg, 4, 1).unwrap();
        assert!(check_topology_preservation(&t, &ca).preserved());
    }

    #[test]
    fn lp_preserves_topology() {
        let targets = GenTargets {
            node_count: 20,
            density_target: 0.18,
            density_tol: 0.03,
            cc_target: 0.4,
            cc_tol: 0.2,
            seed: 11,
            ..GenTargets::default()
        };
        let t = crate::topology::generate_rwmn(&targets).unwrap();
        let cg = build_emmcg(&t, 2);
        for scheme in [Scheme::Lp, Scheme::Eizm] {
            let ca = run_ca_scheme(scheme, &t, &cg, 4, 3).unwrap();
            assert!(
                check_topology_preservation(&t, &ca).preserved(),
                "{scheme} must preserve all links"
            );
        }
    }

    #[test]
    fn ec_preserves_when_radios_cover_channels() {
        let targets = GenTargets {
            node_count: 14,
            density_target: 0.25,
            density_tol: 0.04,
            cc_target: 0.4,
            cc_tol: 0.2,
            seed: 9,
            radios_per_node: 4,
            ..GenTargets::default()
        };
        let t = crate::topology::generate_rwmn(&targets).unwrap();
        let cg = build_emmcg(&t, 2);
        let ca = run_ca_scheme(Scheme::Ec, &t, &cg, 4, 1).unwrap();
        assert!(check_topology_preservation(&t, &ca).preserved());
    }

    #[test]
    fn spread_never_exceeds_single_tid() {
        let targets = GenTargets {
            node_count: 18,
            density_target: 0.2,
            density_tol: 0.03,
            cc_target: 0.4,
            cc_tol: 0.2,
            seed: 21,
            ..GenTargets::default()
        };
        let t = crate::topology::generate_rwmn(&targets).unwrap();
        let cg = build_emmcg(&t, 2);
        let single = run_ca_scheme(Scheme::Single, &t, &cg, 4, 1).unwrap();
        let spread = run_ca_scheme(Scheme::Spread, &t, &cg, 4, 1).unwrap();
        let (lcm_single, _) = resolve_link_channels_lenient(&t, &single);
        let (lcm_spread, _) = resolve_link_channels_lenient(&t, &spread);
        assert!(
            total_interference_degree(&cg, &lcm_spread)
                <= total_interference_degree(&cg, &lcm_single)
        );
    }

    #[test]
    fn unknown_scheme_label_errors() {
        let err = "FANCY".parse::<Scheme>().unwrap_err();
        assert!(matches!(err, Error::UnknownScheme(_)));
    }

    #[test]
    fn assignment_file_round_trips() {
        let t = star3();
        let cg = build_emmcg(&t, 2);
        let ca = run_ca_scheme(Scheme::Spread, &t, &cg, 4, 13).unwrap();
        let text = assignment_to_string(&t, &ca);
        let parsed = assignment_from_str(&text, "mem").unwrap();
        assert_eq!(parsed, ca);
        assert_eq!(assignment_to_string(&t, &parsed), text);
    }

    #[test]
    fn out_of_range_channel_reports_line() {
        let text = "# scheme X\n# channels 4\n0 0 0\n0 1 9\n";
        let err = assignment_from_str(text, "mem").unwrap_err();
        match err {
            Error::Parse { line, msg, .. } => {
                assert_eq!(line, 4);
                assert!(msg.contains("out of range"));
            }
            other => panic!("unexpected {other}"),
        }
    }
}
