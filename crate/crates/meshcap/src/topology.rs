//! Mesh topology: generation, measurement, validation, file format.
//!
//! Topologies are generated to match target global graph parameters
//! (density and clustering coefficient) while keeping every link within
//! radio range and the graph connected. Placement uses a deterministic
//! schedule of clustered layouts; a seeded local search then picks the
//! link subset that lands inside the target windows.

use std::collections::VecDeque;
use std::fmt;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::{Error, Result};

// ---------------------------------------------------------------------------
// Identifiers and core types
// ---------------------------------------------------------------------------

/// Dense node identifier; equals the node's index in `MeshTopology::nodes`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct NodeId(pub u32);

/// Radio index within a node, `0..radios_per_node`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct RadioId(pub u8);

/// Dense link identifier; equals the link's index in `MeshTopology::links`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct LinkId(pub u32);

impl fmt::Display for NodeId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

impl fmt::Display for LinkId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

/// A mesh router with a fixed position (meters).
#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
pub struct Node {
    pub id: NodeId,
    pub x: f64,
    pub y: f64,
}

/// An undirected wireless link between two distinct nodes.
#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
pub struct Link {
    pub id: LinkId,
    pub a: NodeId,
    pub b: NodeId,
}

/// The physical network: node positions, radio counts and wireless links.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct MeshTopology {
    pub nodes: Vec<Node>,
    pub links: Vec<Link>,
    pub radios_per_node: u8,
    /// Isotropic transmission range in meters.
    pub tx_range: f64,
    /// Simulated environment extent in meters.
    pub area: (f64, f64),
}

impl MeshTopology {
    pub fn node_count(&self) -> usize {
        self.nodes.len()
    }

    pub fn link_count(&self) -> usize {
        self.links.len()
    }

    pub fn position(&self, n: NodeId) -> (f64, f64) {
        let node = &self.nodes[n.0 as usize];
        (node.x, node.y)
    }

    pub fn distance(&self, a: NodeId, b: NodeId) -> f64 {
        let (ax, ay) = self.position(a);
        let (bx, by) = self.position(b);
        ((ax - bx).powi(2) + (ay - by).powi(2)).sqrt()
    }

    /// Per-node incident links: `adjacency()[n]` lists `(neighbor, link)`
    /// pairs in ascending link-id order.
    pub fn adjacency(&self) -> Vec<Vec<(NodeId, LinkId)>> {
        let mut adj = vec![Vec::new(); self.node_count()];
        for link in &self.links {
            adj[link.a.0 as usize].push((link.b, link.id));
            adj[link.b.0 as usize].push((link.a, link.id));
        }
        adj
    }

    /// Hop distance from `src` to every node over the given adjacency;
    /// `None` for unreachable nodes.
    pub fn hop_distances(&self, src: NodeId, adj: &[Vec<(NodeId, LinkId)>]) -> Vec<Option<u32>> {
        let mut dist = vec![None; self.node_count()];
        dist[src.0 as usize] = Some(0);
        let mut queue = VecDeque::from([src]);
        while let Some(u) = queue.pop_front() {
            let du = dist[u.0 as usize].unwrap();
            for &(v, _) in &adj[u.0 as usize] {
                if dist[v.0 as usize].is_none() {
                    dist[v.0 as usize] = Some(du + 1);
                    queue.push_back(v);
                }
            }
        }
        dist
    }

    pub fn is_connected(&self) -> bool {
        if self.nodes.is_empty() {
            return true;
        }
        let adj = self.adjacency();
        self.hop_distances(NodeId(0), &adj)
            .iter()
            .all(|d| d.is_some())
    }

    /// Check the structural invariants: dense ids, no self or duplicate
    /// links, every link within `tx_range`, graph connected.
    pub fn validate(&self) -> Result<()> {
        for (i, node) in self.nodes.iter().enumerate() {
            if node.id.0 as usize != i {
                return Err(Error::InvalidTopology(format!(
                    "node id {} at index {i}: ids must be dense and ordered",
                    node.id
                )));
            }
        }
        let mut seen = std::collections::HashSet::new();
        for (i, link) in self.links.iter().enumerate() {
            if link.id.0 as usize != i {
                return Err(Error::InvalidTopology(format!(
                    "link id {} at index {i}: ids must be dense and ordered",
                    link.id
                )));
            }
            if link.a == link.b {
                return Err(Error::InvalidTopology(format!("link {} is a self-link", link.id)));
            }
            if link.a.0 as usize >= self.nodes.len() || link.b.0 as usize >= self.nodes.len() {
                return Err(Error::InvalidTopology(format!(
                    "link {} references a missing node",
                    link.id
                )));
            }
            let key = (link.a.min(link.b), link.a.max(link.b));
            if !seen.insert(key) {
                return Err(Error::InvalidTopology(format!("duplicate link {}", link.id)));
            }
            let d = self.distance(link.a, link.b);
            if d > self.tx_range + 1e-9 {
                return Err(Error::InvalidTopology(format!(
                    "link {} spans {d:.3} m, beyond tx_range {:.3} m",
                    link.id, self.tx_range
                )));
            }
        }
        if !self.is_connected() {
            return Err(Error::InvalidTopology("not connected".into()));
        }
        Ok(())
    }
}

// ---------------------------------------------------------------------------
// Global graph metrics
// ---------------------------------------------------------------------------

/// Graph-level measures of a topology.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GlobalMetrics {
    /// `links / C(n, 2)`.
    pub density: f64,
    /// Global transitivity: `3 * triangles / connected triplets`.
    pub clustering_coefficient: f64,
    /// Maximal Euclidean distance between any two nodes (meters).
    pub geo_diameter: f64,
    /// Minimal over nodes of the maximal Euclidean distance to any other
    /// node (meters).
    pub min_eccentricity: f64,
    /// Maximal shortest-path hop count between connected node pairs.
    pub hop_diameter: u32,
}

/// Measure the global graph parameters of a topology.
pub fn global_metrics(topo: &MeshTopology) -> GlobalMetrics {
    let n = topo.node_count();
    let c2 = n.saturating_mul(n.saturating_sub(1)) / 2;
    let density = if c2 == 0 {
        0.0
    } else {
        topo.link_count() as f64 / c2 as f64
    };

    let mut neighbor_sets: Vec<std::collections::BTreeSet<u32>> = vec![Default::default(); n];
    for link in &topo.links {
        neighbor_sets[link.a.0 as usize].insert(link.b.0);
        neighbor_sets[link.b.0 as usize].insert(link.a.0);
    }
    let mut triangles: u64 = 0;
    let mut triplets: u64 = 0;
    for u in 0..n {
        let d = neighbor_sets[u].len() as u64;
        triplets += d * d.saturating_sub(1) / 2;
        for &v in &neighbor_sets[u] {
            if (v as usize) > u {
                triangles += neighbor_sets[u].intersection(&neighbor_sets[v as usize]).count() as u64;
            }
        }
    }
    // each triangle is counted once per edge with a < b, i.e. 3 times
    let clustering_coefficient = if triplets == 0 {
        0.0
    } else {
        triangles as f64 / triplets as f64
    };

    let mut geo_diameter: f64 = 0.0;
    let mut min_eccentricity = f64::INFINITY;
    for i in 0..n {
        let mut ecc: f64 = 0.0;
        for j in 0..n {
            if i != j {
                ecc = ecc.max(topo.distance(NodeId(i as u32), NodeId(j as u32)));
            }
        }
        geo_diameter = geo_diameter.max(ecc);
        min_eccentricity = min_eccentricity.min(ecc);
    }
    if n < 2 {
        geo_diameter = 0.0;
        min_eccentricity = 0.0;
    }

    let adj = topo.adjacency();
    let mut hop_diameter = 0u32;
    for i in 0..n {
        for d in topo.hop_distances(NodeId(i as u32), &adj).iter().flatten() {
            hop_diameter = hop_diameter.max(*d);
        }
    }

    GlobalMetrics {
        density,
        clustering_coefficient,
        geo_diameter,
        min_eccentricity,
        hop_diameter,
    }
}

// ---------------------------------------------------------------------------
// Generation
// ---------------------------------------------------------------------------

/// Targets for topology generation.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct GenTargets {
    pub node_count: usize,
    pub density_target: f64,
    pub density_tol: f64,
    pub cc_target: f64,
    pub cc_tol: f64,
    pub seed: u64,
    pub area: (f64, f64),
    pub tx_range: f64,
    pub radios_per_node: u8,
}

impl Default for GenTargets {
    fn default() -> Self {
        GenTargets {
            node_count: 50,
            density_target: 0.083,
            density_tol: 0.005,
            cc_target: 0.37,
            cc_tol: 0.05,
            seed: 42,
            area: (1500.0, 1500.0),
            tx_range: 250.0,
            radios_per_node: 3,
        }
    }
}

const MAX_PLACEMENTS: usize = 50;
const SEARCH_STEPS: usize = 10_000;
const PROPOSALS_PER_STEP: usize = 8;

// Placement schedule: cluster counts and spreads cycled per attempt. The
// values are relative to a 50-node layout and scale with node count.
const K_TABLE: [usize; 7] = [9, 8, 10, 7, 11, 12, 6];
const SIGMA_TABLE: [f64; 5] = [140.0, 120.0, 160.0, 100.0, 180.0];

/// Generate a random mesh topology meeting the targets.
///
/// Deterministic for a fixed seed. Fails with a diagnostic when the targets
/// are unreachable (density below the spanning-tree minimum) or when the
/// bounded search budget (50 placements x 10k steps) is exhausted.
pub fn generate_rwmn(targets: &GenTargets) -> Result<MeshTopology> {
    let n = targets.node_count;
    if n < 4 {
        return Err(Error::Unreachable(format!("node_count {n} < 4")));
    }
    if !(0.0..=1.0).contains(&targets.density_target) || !(0.0..=1.0).contains(&targets.cc_target) {
        return Err(Error::Unreachable("targets must lie in [0, 1]".into()));
    }
    let c2 = n * (n - 1) / 2;
    let l_target = (targets.density_target * c2 as f64).round() as usize;
    if l_target < n - 1 {
        return Err(Error::Unreachable(format!(
            "density below connectivity minimum: target {} implies {} links, \
             a spanning tree needs {}",
            targets.density_target,
            l_target,
            n - 1
        )));
    }

    let mut rng = ChaCha8Rng::seed_from_u64(targets.seed);
    let mut shrink = 1.0f64;
    // candidate slack needed before a search attempt is worthwhile
    let required = l_target + 6.min(c2 - l_target);
    let mut best_seen: Option<(f64, f64)> = None;

    for attempt in 0..MAX_PLACEMENTS {
        let clusters = (K_TABLE[attempt % K_TABLE.len()] * n).div_ceil(50).max(1);
        let sigma = SIGMA_TABLE[attempt % SIGMA_TABLE.len()];
        let positions = place_clustered(&mut rng, n, targets.area, shrink, clusters, sigma);
        let candidates = candidate_links(&positions, targets.tx_range);
        if candidates.len() < required {
            shrink = (shrink * 0.85).max(0.02);
            continue;
        }
        if let Some(links) =
            subset_search(&mut rng, n, &candidates, l_target, targets, &mut best_seen)
        {
            let nodes = positions
                .iter()
                .enumerate()
                .map(|(i, &(x, y))| Node {
                    id: NodeId(i as u32),
                    x,
                    y,
                })
                .collect();
            let mut sorted = links;
            sorted.sort();
            let links = sorted
                .into_iter()
                .enumerate()
                .map(|(i, (a, b))| Link {
                    id: LinkId(i as u32),
                    a: NodeId(a as u32),
                    b: NodeId(b as u32),
                })
                .collect();
            let topo = MeshTopology {
                nodes,
                links,
                radios_per_node: targets.radios_per_node,
                tx_range: targets.tx_range,
                area: targets.area,
            };
            topo.validate()?;
            return Ok(topo);
        }
    }

    let seen = best_seen
        .map(|(d, cc)| format!("closest state reached density {d:.4}, cc {cc:.4}"))
        .unwrap_or_else(|| "no placement produced a connected candidate graph".into());
    Err(Error::Unreachable(format!(
        "search budget exhausted ({MAX_PLACEMENTS} placements x {SEARCH_STEPS} steps) for \
         density {}±{} and cc {}±{}; {seen}",
        targets.density_target, targets.density_tol, targets.cc_target, targets.cc_tol
    )))
}

/// Positions snapped to millimeters so the file format round-trips exactly.
fn snap(v: f64) -> f64 {
    (v * 1000.0).round() / 1000.0
}

fn place_clustered(
    rng: &mut ChaCha8Rng,
    n: usize,
    area: (f64, f64),
    shrink: f64,
    clusters: usize,
    sigma: f64,
) -> Vec<(f64, f64)> {
    let side = (area.0 * shrink, area.1 * shrink);
    let off = ((area.0 - side.0) / 2.0, (area.1 - side.1) / 2.0);
    let centers: Vec<(f64, f64)> = (0..clusters)
        .map(|_| {
            (
                off.0 + rng.gen::<f64>() * side.0,
                off.1 + rng.gen::<f64>() * side.1,
            )
        })
        .collect();
    (0..n)
        .map(|i| {
            let (cx, cy) = centers[i % clusters];
            let x = (cx + gaussian(rng) * sigma).clamp(off.0, off.0 + side.0);
            let y = (cy + gaussian(rng) * sigma).clamp(off.1, off.1 + side.1);
            (snap(x), snap(y))
        })
        .collect()
}

/// Box-Muller standard normal (avoids distribution-crate version churn).
fn gaussian(rng: &mut ChaCha8Rng) -> f64 {
    let u1: f64 = rng.gen_range(f64::MIN_POSITIVE..1.0);
    let u2: f64 = rng.gen::<f64>();
    (-2.0 * u1.ln()).sqrt() * (std::f64::consts::TAU * u2).cos()
}

fn candidate_links(positions: &[(f64, f64)], tx_range: f64) -> Vec<(usize, usize)> {
    let mut cand = Vec::new();
    for i in 0..positions.len() {
        for j in (i + 1)..positions.len() {
            let dx = positions[i].0 - positions[j].0;
            let dy = positions[i].1 - positions[j].1;
            if (dx * dx + dy * dy).sqrt() <= tx_range {
                cand.push((i, j));
            }
        }
    }
    cand
}

/// Incrementally maintained graph state for the subset search.
struct SearchState {
    n: usize,
    words: usize,
    adj: Vec<u64>, // n rows of `words` words
    deg: Vec<u32>,
    triangles: i64,
    triplets: i64,
    link_count: usize,
}

impl SearchState {
    fn new(n: usize) -> Self {
        let words = n.div_ceil(64);
        SearchState {
            n,
            words,
            adj: vec![0; n * words],
            deg: vec![0; n],
            triangles: 0,
            triplets: 0,
            link_count: 0,
        }
    }

    fn row(&self, u: usize) -> &[u64] {
        &self.adj[u * self.words..(u + 1) * self.words]
    }

    fn has(&self, u: usize, v: usize) -> bool {
        self.adj[u * self.words + v / 64] >> (v % 64) & 1 == 1
    }

    fn common_neighbors(&self, u: usize, v: usize) -> u32 {
        let (ru, rv) = (u * self.words, v * self.words);
        (0..self.words)
            .map(|w| (self.adj[ru + w] & self.adj[rv + w]).count_ones())
            .sum()
    }

    fn add(&mut self, u: usize, v: usize) {
        debug_assert!(!self.has(u, v));
        self.triangles += self.common_neighbors(u, v) as i64;
        self.triplets += self.deg[u] as i64 + self.deg[v] as i64;
        self.adj[u * self.words + v / 64] |= 1 << (v % 64);
        self.adj[v * self.words + u / 64] |= 1 << (u % 64);
        self.deg[u] += 1;
        self.deg[v] += 1;
        self.link_count += 1;
    }

    fn remove(&mut self, u: usize, v: usize) {
        debug_assert!(self.has(u, v));
        self.adj[u * self.words + v / 64] &= !(1 << (v % 64));
        self.adj[v * self.words + u / 64] &= !(1 << (u % 64));
        self.deg[u] -= 1;
        self.deg[v] -= 1;
        self.triangles -= self.common_neighbors(u, v) as i64;
        self.triplets -= self.deg[u] as i64 + self.deg[v] as i64;
        self.link_count -= 1;
    }

    fn transitivity(&self) -> f64 {
        if self.triplets == 0 {
            0.0
        } else {
            3.0 * self.triangles as f64 / self.triplets as f64
        }
    }

    fn density(&self, c2: usize) -> f64 {
        self.link_count as f64 / c2 as f64
    }

    fn connected(&self) -> bool {
        let mut seen = vec![false; self.n];
        let mut stack = vec![0usize];
        seen[0] = true;
        let mut count = 1;
        while let Some(u) = stack.pop() {
            let row = self.row(u);
            for (w, &bits) in row.iter().enumerate() {
                let mut bits = bits;
                while bits != 0 {
                    let v = w * 64 + bits.trailing_zeros() as usize;
                    bits &= bits - 1;
                    if !seen[v] {
                        seen[v] = true;
                        count += 1;
                        stack.push(v);
                    }
                }
            }
        }
        count == self.n
    }
}

/// Distance-to-target objective; 0 exactly when both windows are met.
fn objective(density: f64, cc: f64, t: &GenTargets) -> f64 {
    let fd = ((density - t.density_target).abs() - t.density_tol).max(0.0) / t.density_tol.max(1e-9);
    let fc = ((cc - t.cc_target).abs() - t.cc_tol).max(0.0) / t.cc_tol.max(1e-9);
    fd + fc
}

/// Hill-climb over connected candidate-edge subsets. Returns the chosen
/// links on success.
fn subset_search(
    rng: &mut ChaCha8Rng,
    n: usize,
    candidates: &[(usize, usize)],
    l_target: usize,
    targets: &GenTargets,
    best_seen: &mut Option<(f64, f64)>,
) -> Option<Vec<(usize, usize)>> {
    let c2 = n * (n - 1) / 2;
    let mut state = SearchState::new(n);
    let mut cand_adj: Vec<Vec<usize>> = vec![Vec::new(); n];
    for &(u, v) in candidates {
        cand_adj[u].push(v);
        cand_adj[v].push(u);
    }

    // BFS spanning tree over the candidate graph; bail if disconnected.
    let mut chosen = vec![false; candidates.len()];
    let index: std::collections::HashMap<(usize, usize), usize> = candidates
        .iter()
        .enumerate()
        .map(|(i, &e)| (e, i))
        .collect();
    let mut seen = vec![false; n];
    seen[0] = true;
    let mut reached = 1;
    let mut queue = VecDeque::from([0usize]);
    while let Some(u) = queue.pop_front() {
        for &v in &cand_adj[u] {
            if !seen[v] {
                seen[v] = true;
                reached += 1;
                let e = (u.min(v), u.max(v));
                chosen[index[&e]] = true;
                state.add(e.0, e.1);
                queue.push_back(v);
            }
        }
    }
    if reached < n {
        return None;
    }

    // Fill with random candidates up to the target link count.
    let mut free: Vec<usize> = (0..candidates.len()).filter(|&i| !chosen[i]).collect();
    while state.link_count < l_target && !free.is_empty() {
        let pick = rng.gen_range(0..free.len());
        let i = free.swap_remove(pick);
        chosen[i] = true;
        state.add(candidates[i].0, candidates[i].1);
    }

    let mut f = objective(state.density(c2), state.transitivity(), targets);
    let update_best = |state: &SearchState, best: &mut Option<(f64, f64)>| {
        let d = state.density(c2);
        let cc = state.transitivity();
        let is_better = match best {
            Some((bd, bcc)) => objective(d, cc, targets) < objective(*bd, *bcc, targets),
            None => true,
        };
        if is_better {
            *best = Some((d, cc));
        }
    };
    update_best(&state, best_seen);

    for _ in 0..SEARCH_STEPS {
        if f == 0.0 && state.connected() {
            update_best(&state, best_seen);
            return Some(
                candidates
                    .iter()
                    .enumerate()
                    .filter(|(i, _)| chosen[*i])
                    .map(|(_, &e)| e)
                    .collect(),
            );
        }

        // Evaluate a handful of random moves; keep the best non-worsening one.
        let mut best_move: Option<(f64, Option<usize>, Option<usize>)> = None; // (f, out, in)
        for _ in 0..PROPOSALS_PER_STEP {
            let roll: f64 = rng.gen();
            let (e_out, e_in) = if roll < 0.5 {
                (pick_index(rng, &chosen, true), pick_index(rng, &chosen, false))
            } else if roll < 0.75 {
                (None, pick_index(rng, &chosen, false))
            } else {
                (pick_index(rng, &chosen, true), None)
            };
            if e_out.is_none() && e_in.is_none() {
                continue;
            }
            if let Some(i) = e_out {
                let (u, v) = candidates[i];
                state.remove(u, v);
                if !state.connected() {
                    state.add(u, v);
                    continue;
                }
            }
            if let Some(i) = e_in {
                let (u, v) = candidates[i];
                state.add(u, v);
            }
            let f2 = objective(state.density(c2), state.transitivity(), targets);
            if best_move.is_none_or(|(bf, _, _)| f2 < bf) {
                best_move = Some((f2, e_out, e_in));
            }
            if let Some(i) = e_in {
                let (u, v) = candidates[i];
                state.remove(u, v);
            }
            if let Some(i) = e_out {
                let (u, v) = candidates[i];
                state.add(u, v);
            }
        }

        if let Some((f2, e_out, e_in)) = best_move {
            if f2 <= f + 1e-12 {
                if let Some(i) = e_out {
                    chosen[i] = false;
                    state.remove(candidates[i].0, candidates[i].1);
                }
                if let Some(i) = e_in {
                    chosen[i] = true;
                    state.add(candidates[i].0, candidates[i].1);
                }
                f = f2;
                update_best(&state, best_seen);
            }
        }
    }
    None
}

/// Pick a random candidate index with the given chosen-ness, or `None`
/// if sampling keeps missing (the pool may be empty).
fn pick_index(rng: &mut ChaCha8Rng, chosen: &[bool], want_chosen: bool) -> Option<usize> {
    for _ in 0..32 {
        let i = rng.gen_range(0..chosen.len());
        if chosen[i] == want_chosen {
            return Some(i);
        }
    }
    None
}

// ---------------------------------------------------------------------------
// Validation report
// ---------------------------------------------------------------------------

#[derive(Debug, Clone)]
pub struct ValidationCheck {
    pub name: String,
    pub target: String,
    pub measured: String,
    pub pass: bool,
}

#[derive(Debug, Clone)]
pub struct ValidationReport {
    pub checks: Vec<ValidationCheck>,
    pub pass: bool,
}

impl fmt::Display for ValidationReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for c in &self.checks {
            writeln!(
                f,
                "{:<24} target={:<16} measured={:<16} {}",
                c.name,
                c.target,
                c.measured,
                if c.pass { "pass" } else { "FAIL" }
            )?;
        }
        write!(f, "overall: {}", if self.pass { "pass" } else { "FAIL" })
    }
}

/// Compare a topology against generation targets.
pub fn validate_topology(topo: &MeshTopology, targets: &GenTargets) -> ValidationReport {
    let m = global_metrics(topo);
    let connected = topo.is_connected();
    let in_range = topo
        .links
        .iter()
        .all(|l| topo.distance(l.a, l.b) <= topo.tx_range + 1e-9);
    let checks = vec![
        ValidationCheck {
            name: "connected".into(),
            target: "true".into(),
            measured: connected.to_string(),
            pass: connected,
        },
        ValidationCheck {
            name: "links_within_range".into(),
            target: format!("<= {:.1} m", topo.tx_range),
            measured: in_range.to_string(),
            pass: in_range,
        },
        ValidationCheck {
            name: "density".into(),
            target: format!("{}±{}", targets.density_target, targets.density_tol),
            measured: format!("{:.4}", m.density),
            pass: (m.density - targets.density_target).abs() <= targets.density_tol + 1e-12,
        },
        ValidationCheck {
            name: "clustering_coefficient".into(),
            target: format!("{}±{}", targets.cc_target, targets.cc_tol),
            measured: format!("{:.4}", m.clustering_coefficient),
            pass: (m.clustering_coefficient - targets.cc_target).abs() <= targets.cc_tol + 1e-12,
        },
    ];
    let pass = checks.iter().all(|c| c.pass);
    ValidationReport { checks, pass }
}

// ---------------------------------------------------------------------------
// File format
// ---------------------------------------------------------------------------

/// Serialize a topology in canonical key order (diffable, reparse-stable).
pub fn topology_to_string(topo: &MeshTopology) -> String {
    use std::fmt::Write;
    let mut out = String::new();
    writeln!(out, "radios_per_node = {}", topo.radios_per_node).unwrap();
    writeln!(out, "tx_range = {:.3}", topo.tx_range).unwrap();
    writeln!(out, "area = [{:.3}, {:.3}]", topo.area.0, topo.area.1).unwrap();
    for node in &topo.nodes {
        writeln!(out, "\n[[nodes]]").unwrap();
        writeln!(out, "id = {}", node.id).unwrap();
        writeln!(out, "x = {:.3}", node.x).unwrap();
        writeln!(out, "y = {:.3}", node.y).unwrap();
    }
    for link in &topo.links {
        writeln!(out, "\n[[links]]").unwrap();
        writeln!(out, "id = {}", link.id).unwrap();
        writeln!(out, "a = {}", link.a).unwrap();
        writeln!(out, "b = {}", link.b).unwrap();
    }
    out
}

/// Parse a topology file and check its invariants.
pub fn topology_from_str(text: &str, file: &str) -> Result<MeshTopology> {
    let topo: MeshTopology = toml::from_str(text).map_err(|e| Error::Parse {
        file: file.to_string(),
        line: e.span().map(|s| text[..s.start].lines().count()).unwrap_or(0),
        msg: e.message().to_string(),
    })?;
    topo.validate()?;
    Ok(topo)
}

pub fn write_topology(path: &std::path::Path, topo: &MeshTopology) -> Result<()> {
    std::fs::write(path, topology_to_string(topo))?;
    Ok(())
}

pub fn read_topology(path: &std::path::Path) -> Result<MeshTopology> {
    let text = std::fs::read_to_string(path)?;
    topology_from_str(&text, &path.display().to_string())
}

// ---------------------------------------------------------------------------

#[cfg(test)]
mod tests {
    use super::*;

    fn tiny(nodes: &[(f64, f64)], links: &[(u32, u32)]) -> MeshTopology {
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
            area: (1500.0, 1500.0),
        }
    }

    #[test]
    fn triangle_has_cc_one() {
        let topo = tiny(
            &[(0.0, 0.0), (200.0, 0.0), (100.0, 150.0)],
            &[(0, 1), (1, 2), (0, 2)],
        );
        let m = global_metrics(&topo);
        assert_eq!(m.clustering_coefficient, 1.0);
        assert_eq!(m.density, 1.0);
        assert_eq!(m.hop_diameter, 1);
    }

    #[test]
    fn path_has_cc_zero() {
        let topo = tiny(
            &[(0.0, 0.0), (200.0, 0.0), (400.0, 0.0)],
            &[(0, 1), (1, 2)],
        );
        let m = global_metrics(&topo);
        assert_eq!(m.clustering_coefficient, 0.0);
        assert_eq!(m.geo_diameter, 400.0);
        assert_eq!(m.min_eccentricity, 200.0);
        assert_eq!(m.hop_diameter, 2);
    }

    #[test]
    fn density_matches_brute_force() {
        let topo = tiny(
            &[(0.0, 0.0), (200.0, 0.0), (400.0, 0.0), (200.0, 200.0)],
            &[(0, 1), (1, 2), (1, 3)],
        );
        let m = global_metrics(&topo);
        assert!((m.density - 3.0 / 6.0).abs() < 1e-12);
    }

    #[test]
    fn generate_k4_with_density_one() {
        let targets = GenTargets {
            node_count: 4,
            density_target: 1.0,
            density_tol: 0.0,
            cc_target: 1.0,
            cc_tol: 0.0,
            seed: 7,
            ..GenTargets::default()
        };
        let topo = generate_rwmn(&targets).expect("K4 generation");
        assert_eq!(topo.link_count(), 6);
        let m = global_metrics(&topo);
        assert_eq!(m.density, 1.0);
        assert_eq!(m.clustering_coefficient, 1.0);
        assert!(validate_topology(&topo, &targets).pass, "exact targets hold");
    }

    #[test]
    fn generate_rejects_subconnectivity_density() {
        let targets = GenTargets {
            node_count: 10,
            density_target: 0.05,
            density_tol: 0.005,
            ..GenTargets::default()
        };
        let err = generate_rwmn(&targets).unwrap_err();
        let msg = err.to_string();
        assert!(msg.contains("unreachable"), "got: {msg}");
        assert!(msg.contains("connectivity minimum"), "got: {msg}");
    }

    #[test]
    fn generate_default_meets_table_targets() {
        let targets = GenTargets::default();
        let topo = generate_rwmn(&targets).expect("default generation");
        assert_eq!(topo.node_count(), 50);
        let m = global_metrics(&topo);
        assert!((m.density - 0.083).abs() <= 0.005, "density {}", m.density);
        assert!(
            (m.clustering_coefficient - 0.37).abs() <= 0.05,
            "cc {}",
            m.clustering_coefficient
        );
        assert!(topo.is_connected());
        let max_span = (topo.area.0.powi(2) + topo.area.1.powi(2)).sqrt();
        assert!(m.geo_diameter <= max_span);
        let report = validate_topology(&topo, &targets);
        assert!(report.pass, "{report}");
    }

    #[test]
    fn generate_is_deterministic() {
        let targets = GenTargets::default();
        let a = generate_rwmn(&targets).unwrap();
        let b = generate_rwmn(&targets).unwrap();
        assert_eq!(topology_to_string(&a), topology_to_string(&b));
    }

    #[test]
    fn validation_flags_disconnected() {
        let topo = tiny(
            &[(0.0, 0.0), (100.0, 0.0), (800.0, 0.0), (900.0, 0.0)],
            &[(0, 1), (2, 3)],
        );
        let report = validate_topology(&topo, &GenTargets::default());
        assert!(!report.pass);
        assert!(report.checks.iter().any(|c| c.name == "connected" && !c.pass));
    }

    #[test]
    fn file_round_trip() {
        let targets = GenTargets {
            node_count: 12,
            density_target: 0.25,
            density_tol: 0.03,
            cc_target: 0.4,
            cc_tol: 0.15,
            seed: 3,
            ..GenTargets::default()
        };
        let topo = generate_rwmn(&targets).unwrap();
        let text = topology_to_string(&topo);
        let parsed = topology_from_str(&text, "mem").unwrap();
        assert_eq!(topology_to_string(&parsed), text);
    }
}
