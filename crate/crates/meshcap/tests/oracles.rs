//! Brute-force oracle equivalence on seeded random instances: conflict
//! edges, interference degrees, X-link-set enumeration, CXLS weight and
//! the clustering coefficient are each recomputed from first principles
//! and compared exactly.

mod common;

use std::collections::BTreeSet;

use common::{brute_force_conflicts, brute_force_x_sets, random_lcm, random_topology};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use meshcap::conflict::{build_emmcg, interference_degree, total_interference_degree};
use meshcap::metrics::{cxls_wt, enumerate_x_link_sets};
use meshcap::topology::{global_metrics, LinkId};

#[test]
fn conflict_graph_matches_brute_force() {
    let mut rng = ChaCha8Rng::seed_from_u64(101);
    for case in 0..100 {
        // up to the full 28-link graph on 8 nodes
        let topo = random_topology(&mut rng, 28);
        let ratio = rng.gen_range(1..=3);
        let cg = build_emmcg(&topo, ratio);
        let expected = brute_force_conflicts(&topo, ratio);
        let got: BTreeSet<(u32, u32)> = cg.edges().map(|(a, b, _)| (a.0, b.0)).collect();
        assert_eq!(got, expected, "case {case}");
    }
}

#[test]
fn interference_degrees_match_brute_force() {
    let mut rng = ChaCha8Rng::seed_from_u64(202);
    for case in 0..100 {
        let topo = random_topology(&mut rng, 10);
        let cg = build_emmcg(&topo, 2);
        let lcm = random_lcm(&mut rng, &topo, 4);
        let conflicts = brute_force_conflicts(&topo, 2);

        let mut tid_oracle = 0usize;
        for &(a, b) in &conflicts {
            if lcm.channel(LinkId(a)) == lcm.channel(LinkId(b)) {
                tid_oracle += 1;
            }
        }
        assert_eq!(
            total_interference_degree(&cg, &lcm),
            tid_oracle,
            "TID case {case}"
        );

        let mut degree_sum = 0usize;
        for link in topo.links.iter().map(|l| l.id) {
            let id_oracle = conflicts
                .iter()
                .filter(|&&(a, b)| {
                    (LinkId(a) == link || LinkId(b) == link)
                        && lcm.channel(LinkId(a)) == lcm.channel(LinkId(b))
                })
                .count();
            let got = interference_degree(&cg, &lcm, link).unwrap();
            assert_eq!(got, id_oracle, "ID of {link} case {case}");
            degree_sum += got;
        }
        assert_eq!(degree_sum, 2 * tid_oracle, "handshake identity case {case}");
    }
}

#[test]
fn x_link_sets_match_brute_force() {
    let mut rng = ChaCha8Rng::seed_from_u64(303);
    for case in 0..100 {
        let topo = random_topology(&mut rng, 10);
        let lcm = random_lcm(&mut rng, &topo, 4);
        let x = rng.gen_range(1..=3);
        let got: BTreeSet<Vec<u32>> = enumerate_x_link_sets(&topo, &lcm, x)
            .into_iter()
            .map(|s| s.links.iter().map(|l| l.0).collect())
            .collect();
        let expected = brute_force_x_sets(&topo, &lcm, x);
        assert_eq!(got, expected, "x={x} case {case}");
    }
}

#[test]
fn cxls_matches_brute_force() {
    let mut rng = ChaCha8Rng::seed_from_u64(404);
    for case in 0..100 {
        let topo = random_topology(&mut rng, 10);
        let lcm = random_lcm(&mut rng, &topo, 4);
        let x = rng.gen_range(1..=3);
        let cg = build_emmcg(&topo, x as u32);
        let conflicts = brute_force_conflicts(&topo, x as u32);
        let mut oracle = 0u64;
        for set in brute_force_x_sets(&topo, &lcm, x) {
            for i in 0..set.len() {
                for j in (i + 1)..set.len() {
                    let key = (set[i].min(set[j]), set[i].max(set[j]));
                    if conflicts.contains(&key)
                        && lcm.channel(LinkId(set[i])) == lcm.channel(LinkId(set[j]))
                    {
                        oracle += 1;
                    }
                }
            }
        }
        assert_eq!(cxls_wt(&topo, &lcm, &cg, x).unwrap(), oracle, "case {case}");
    }
}

#[test]
fn clustering_coefficient_matches_triplet_oracle() {
    let mut rng = ChaCha8Rng::seed_from_u64(505);
    for case in 0..60 {
        let topo = random_topology(&mut rng, 14);
        let n = topo.node_count();
        let mut adj = vec![vec![false; n]; n];
        for l in &topo.links {
            adj[l.a.0 as usize][l.b.0 as usize] = true;
            adj[l.b.0 as usize][l.a.0 as usize] = true;
        }
        // exhaustive triplet scan: center c with neighbor pair (a, b)
        let mut closed = 0u64;
        let mut connected = 0u64;
        for c in 0..n {
            for a in 0..n {
                for b in (a + 1)..n {
                    if a != c && b != c && adj[c][a] && adj[c][b] {
                        connected += 1;
                        if adj[a][b] {
                            closed += 1;
                        }
                    }
                }
            }
        }
        let expected = if connected == 0 {
            0.0
        } else {
            closed as f64 / connected as f64
        };
        let m = global_metrics(&topo);
        assert!(
            (m.clustering_coefficient - expected).abs() < 1e-12,
            "case {case}: got {}, oracle {expected}",
            m.clustering_coefficient
        );

        let c2 = (n * (n - 1) / 2) as f64;
        assert!(
            (m.density - topo.links.len() as f64 / c2).abs() < 1e-12,
            "density case {case}"
        );
    }
}
