//! Undirected weighted oscillator networks with power set points.
//!
//! The adjacency entry `K_ij` is the coupling capacity between nodes `i` and
//! `j` in s^-2 (phases are dimensionless, time is in seconds). `power[i]` is
//! the desired injection `P_i^d` in s^-2, positive for producers and negative
//! for consumers. All analysis operations require a connected graph and a
//! balanced power vector.

use ndarray::{Array1, Array2};
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use std::path::Path;

use crate::error::{Error, Result};

/// Relative/absolute tolerance for the power balance check.
pub const BALANCE_TOL: f64 = 1e-12;

/// Undirected weighted network with per-node power set points.
#[derive(Debug, Clone, PartialEq)]
pub struct Network {
    n: usize,
    adjacency: Array2<f64>,
    power: Array1<f64>,
    labels: Option<Vec<String>>,
}

impl Network {
    /// Build a network from a symmetric adjacency matrix and power vector,
    /// validating all structural invariants (symmetry, zero diagonal,
    /// non-negative weights).
    pub fn new(adjacency: Array2<f64>, power: Array1<f64>) -> Result<Self> {
        let n = power.len();
        if n < 2 {
            return Err(Error::InvalidNetwork(format!("need at least 2 nodes, got {n}")));
        }
        if adjacency.nrows() != n || adjacency.ncols() != n {
            return Err(Error::InvalidNetwork(format!(
                "adjacency is {}x{}, expected {n}x{n}",
                adjacency.nrows(),
                adjacency.ncols()
            )));
        }
        for i in 0..n {
            if adjacency[[i, i]] != 0.0 {
                return Err(Error::SelfLoop { node: i, weight: adjacency[[i, i]] });
            }
            for j in (i + 1)..n {
                let (a, b) = (adjacency[[i, j]], adjacency[[j, i]]);
                if !a.is_finite() || !b.is_finite() {
                    return Err(Error::NonFinite { i, j });
                }
                if a != b {
                    return Err(Error::AsymmetricAdjacency { i, j, a_ij: a, a_ji: b });
                }
                if a < 0.0 {
                    return Err(Error::NegativeWeight { i, j, weight: a });
                }
            }
        }
        if power.iter().any(|p| !p.is_finite()) {
            return Err(Error::InvalidNetwork("non-finite power entry".into()));
        }
        Ok(Network { n, adjacency, power, labels: None })
    }

    /// Attach per-node labels (must match the node count).
    pub fn with_labels(mut self, labels: Vec<String>) -> Result<Self> {
        if labels.len() != self.n {
            return Err(Error::InvalidNetwork(format!(
                "{} labels for {} nodes",
                labels.len(),
                self.n
            )));
        }
        self.labels = Some(labels);
        Ok(self)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn adjacency(&self) -> &Array2<f64> {
        &self.adjacency
    }

    pub fn power(&self) -> &Array1<f64> {
        &self.power
    }

    pub fn labels(&self) -> Option<&[String]> {
        self.labels.as_deref()
    }

    /// Edges (i, j, K_ij) with i < j and K_ij > 0.
    pub fn edges(&self) -> Vec<(usize, usize, f64)> {
        let mut out = Vec::new();
        for i in 0..self.n {
            for j in (i + 1)..self.n {
                let w = self.adjacency[[i, j]];
                if w > 0.0 {
                    out.push((i, j, w));
                }
            }
        }
        out
    }

    pub fn edge_count(&self) -> usize {
        self.edges().len()
    }

    /// Breadth-first connectivity over edges with K_ij > 0.
    pub fn is_connected(&self) -> bool {
        let mut seen = vec![false; self.n];
        let mut queue = std::collections::VecDeque::new();
        seen[0] = true;
        queue.push_back(0);
        let mut count = 1;
        while let Some(i) = queue.pop_front() {
            for j in 0..self.n {
                if !seen[j] && self.adjacency[[i, j]] > 0.0 {
                    seen[j] = true;
                    count += 1;
                    queue.push_back(j);
                }
            }
        }
        count == self.n
    }

    /// Signed power imbalance sum(P_i).
    pub fn power_imbalance(&self) -> f64 {
        self.power.sum()
    }

    /// Check sum(P_i) = 0 within `BALANCE_TOL` (relative to max |P_i|, with an
    /// absolute floor). A fixed point in the co-rotating frame requires this.
    pub fn check_power_balance(&self) -> Result<()> {
        let sum = self.power_imbalance();
        let max_p = self.power.iter().fold(0.0f64, |m, p| m.max(p.abs()));
        let tol = BALANCE_TOL * max_p.max(1.0);
        if sum.abs() > tol {
            return Err(Error::PowerImbalance { sum, tol });
        }
        Ok(())
    }
}

/// Star network: node 0 is a producer with power `leaves * p0`, each leaf
/// carries `-p0` and connects to the centre with capacity `k0`.
pub fn build_star(leaves: usize, p0: f64, k0: f64) -> Result<Network> {
    if leaves < 1 {
        return Err(Error::InvalidArgument {
            name: "leaves",
            value: leaves as f64,
            constraint: "must be >= 1",
        });
    }
    if !(k0 > 0.0) {
        return Err(Error::NonPositiveParameter { name: "k0", value: k0 });
    }
    let n = leaves + 1;
    let mut adjacency = Array2::zeros((n, n));
    let mut power = Array1::zeros(n);
    power[0] = leaves as f64 * p0;
    for leaf in 1..n {
        adjacency[[0, leaf]] = k0;
        adjacency[[leaf, 0]] = k0;
        power[leaf] = -p0;
    }
    Network::new(adjacency, power)
}

/// Watts-Strogatz small-world network with alternating producer/consumer
/// placement on the original ring.
///
/// Starts from a ring lattice where every node connects to its `k` nearest
/// neighbours, then visits each lattice edge (by offset, then by node) and
/// rewires it with probability `p`: the far endpoint is detached and redrawn
/// uniformly until the new edge is neither a self-loop nor a duplicate. All
/// edges keep capacity `k0`; powers alternate `+p0`/`-p0` with the ring index.
/// The edge count is exactly `n * k / 2` and the output is a pure function of
/// the arguments including `seed`. The result may be disconnected for large
/// `p`; callers that need connectivity must check and resample.
pub fn build_watts_strogatz(
    n: usize,
    k: usize,
    p: f64,
    p0: f64,
    k0: f64,
    seed: u64,
) -> Result<Network> {
    if n < 2 || n % 2 != 0 {
        return Err(Error::InvalidArgument {
            name: "n",
            value: n as f64,
            constraint: "must be even and >= 2 for alternating placement",
        });
    }
    if k % 2 != 0 || k < 2 {
        return Err(Error::InvalidArgument {
            name: "k",
            value: k as f64,
            constraint: "must be even and >= 2",
        });
    }
    if k >= n {
        return Err(Error::InvalidArgument {
            name: "k",
            value: k as f64,
            constraint: "must be < n",
        });
    }
    if !(0.0..=1.0).contains(&p) {
        return Err(Error::InvalidArgument {
            name: "p",
            value: p,
            constraint: "must lie in [0, 1]",
        });
    }
    if !(k0 > 0.0) {
        return Err(Error::NonPositiveParameter { name: "k0", value: k0 });
    }

    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut adjacency = Array2::<f64>::zeros((n, n));
    // Ring lattice: offsets 1..=k/2 on both sides.
    for i in 0..n {
        for offset in 1..=(k / 2) {
            let j = (i + offset) % n;
            adjacency[[i, j]] = k0;
            adjacency[[j, i]] = k0;
        }
    }
    // Rewire lattice edges in canonical order: offset loop outside, node loop
    // inside, matching the original construction.
    for offset in 1..=(k / 2) {
        for i in 0..n {
            let j = (i + offset) % n;
            if rng.gen::<f64>() >= p {
                continue;
            }
            // Skip if node i already touches every other node.
            let degree_i = (0..n).filter(|&v| adjacency[[i, v]] > 0.0).count();
            if degree_i >= n - 1 {
                continue;
            }
            loop {
                let m = rng.gen_range(0..n);
                if m == i || adjacency[[i, m]] > 0.0 {
                    continue;
                }
                adjacency[[i, j]] = 0.0;
                adjacency[[j, i]] = 0.0;
                adjacency[[i, m]] = k0;
                adjacency[[m, i]] = k0;
                break;
            }
        }
    }

    let mut power = Array1::zeros(n);
    for i in 0..n {
        power[i] = if i % 2 == 0 { p0 } else { -p0 };
    }
    Network::new(adjacency, power)
}

#[derive(Debug, Serialize, Deserialize)]
struct NodeEntry {
    id: usize,
    power: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    label: Option<String>,
}

#[derive(Debug, Serialize, Deserialize)]
struct EdgeEntry {
    a: usize,
    b: usize,
    weight: f64,
}

#[derive(Debug, Serialize, Deserialize)]
struct NetworkFile {
    nodes: Vec<NodeEntry>,
    edges: Vec<EdgeEntry>,
}

/// Read a network from the JSON schema
/// `{ "nodes": [{"id", "power"}...], "edges": [{"a", "b", "weight"}...] }`.
pub fn read_network<P: AsRef<Path>>(path: P) -> Result<Network> {
    let text = std::fs::read_to_string(path)?;
    parse_network(&text)
}

/// Parse the network JSON schema from a string.
pub fn parse_network(text: &str) -> Result<Network> {
    let file: NetworkFile = serde_json::from_str(text)?;
    let n = file.nodes.len();
    if n < 2 {
        return Err(Error::InvalidNetwork(format!("need at least 2 nodes, got {n}")));
    }
    let mut power = Array1::zeros(n);
    let mut seen = vec![false; n];
    let mut labels = vec![String::new(); n];
    let mut any_label = false;
    for node in &file.nodes {
        if node.id >= n {
            return Err(Error::InvalidNetwork(format!(
                "node id {} out of range 0..{}",
                node.id,
                n - 1
            )));
        }
        if seen[node.id] {
            return Err(Error::InvalidNetwork(format!("duplicate node id {}", node.id)));
        }
        seen[node.id] = true;
        power[node.id] = node.power;
        if let Some(label) = &node.label {
            labels[node.id] = label.clone();
            any_label = true;
        }
    }
    let mut adjacency = Array2::<f64>::zeros((n, n));
    let mut assigned = std::collections::HashMap::new();
    for edge in &file.edges {
        if edge.a >= n || edge.b >= n {
            return Err(Error::InvalidNetwork(format!(
                "edge ({},{}) references a missing node",
                edge.a, edge.b
            )));
        }
        if edge.a == edge.b {
            return Err(Error::SelfLoop { node: edge.a, weight: edge.weight });
        }
        if edge.weight < 0.0 {
            return Err(Error::NegativeWeight { i: edge.a, j: edge.b, weight: edge.weight });
        }
        let key = (edge.a.min(edge.b), edge.a.max(edge.b));
        if let Some(&prev) = assigned.get(&key) {
            if prev != edge.weight {
                return Err(Error::AsymmetricAdjacency {
                    i: key.0,
                    j: key.1,
                    a_ij: prev,
                    a_ji: edge.weight,
                });
            }
            return Err(Error::InvalidNetwork(format!(
                "duplicate edge ({},{})",
                key.0, key.1
            )));
        }
        assigned.insert(key, edge.weight);
        adjacency[[edge.a, edge.b]] = edge.weight;
        adjacency[[edge.b, edge.a]] = edge.weight;
    }
    let network = Network::new(adjacency, power)?;
    if any_label {
        network.with_labels(labels)
    } else {
        Ok(network)
    }
}

/// Write a network to the JSON schema used by [`read_network`]. Each
/// undirected edge appears once with `a < b`.
pub fn write_network<P: AsRef<Path>>(network: &Network, path: P) -> Result<()> {
    let text = network_to_json(network)?;
    std::fs::write(path, text)?;
    Ok(())
}

/// Serialize a network to the JSON schema as a string.
pub fn network_to_json(network: &Network) -> Result<String> {
    let nodes = (0..network.n())
        .map(|id| NodeEntry {
            id,
            power: network.power()[id],
            label: network.labels().map(|l| l[id].clone()),
        })
        .collect();
    let edges = network
        .edges()
        .into_iter()
        .map(|(a, b, weight)| EdgeEntry { a, b, weight })
        .collect();
    let file = NetworkFile { nodes, edges };
    Ok(serde_json::to_string_pretty(&file)?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn star_matches_hand_construction() {
        let net = build_star(3, 1.0, 8.0).unwrap();
        assert_eq!(net.n(), 4);
        assert_eq!(net.power()[0], 3.0);
        for leaf in 1..4 {
            assert_eq!(net.power()[leaf], -1.0);
            assert_eq!(net.adjacency()[[0, leaf]], 8.0);
        }
        // Row sums (24, 8, 8, 8).
        let sums: Vec<f64> = (0..4).map(|i| net.adjacency().row(i).sum()).collect();
        assert_eq!(sums, vec![24.0, 8.0, 8.0, 8.0]);
        assert_eq!(net.power_imbalance(), 0.0);
        assert!(net.is_connected());
    }

    #[test]
    fn smallest_star_is_a_dipole() {
        let net = build_star(1, 1.0, 1.0).unwrap();
        assert_eq!(net.n(), 2);
        assert_eq!(net.power().to_vec(), vec![1.0, -1.0]);
    }

    #[test]
    fn star_rejects_nonpositive_coupling() {
        assert!(matches!(
            build_star(3, 1.0, 0.0),
            Err(Error::NonPositiveParameter { name: "k0", .. })
        ));
        assert!(build_star(0, 1.0, 1.0).is_err());
    }

    #[test]
    fn watts_strogatz_paper_size() {
        let net = build_watts_strogatz(100, 4, 0.5, 1.0, 8.0, 42).unwrap();
        assert_eq!(net.n(), 100);
        assert_eq!(net.edge_count(), 200);
        let producers = net.power().iter().filter(|&&p| p > 0.0).count();
        assert_eq!(producers, 50);
        assert_eq!(net.power_imbalance(), 0.0);
    }

    #[test]
    fn watts_strogatz_p_zero_is_ring_lattice() {
        let a = build_watts_strogatz(6, 2, 0.0, 1.0, 1.0, 0).unwrap();
        let b = build_watts_strogatz(6, 2, 0.0, 1.0, 1.0, 99).unwrap();
        assert_eq!(a.adjacency(), b.adjacency());
        for i in 0..6 {
            let degree = (0..6).filter(|&j| a.adjacency()[[i, j]] > 0.0).count();
            assert_eq!(degree, 2);
            assert!(a.adjacency()[[i, (i + 1) % 6]] > 0.0);
        }
    }

    #[test]
    fn watts_strogatz_deterministic_for_seed() {
        let a = build_watts_strogatz(20, 4, 1.0, 1.0, 8.0, 7).unwrap();
        let b = build_watts_strogatz(20, 4, 1.0, 1.0, 8.0, 7).unwrap();
        assert_eq!(a.adjacency(), b.adjacency());
        assert_eq!(a.edge_count(), 40);
    }

    #[test]
    fn watts_strogatz_rejects_bad_arguments() {
        assert!(build_watts_strogatz(7, 2, 0.5, 1.0, 1.0, 0).is_err()); // odd n
        assert!(build_watts_strogatz(8, 3, 0.5, 1.0, 1.0, 0).is_err()); // odd k
        assert!(build_watts_strogatz(8, 8, 0.5, 1.0, 1.0, 0).is_err()); // k >= n
        assert!(build_watts_strogatz(8, 2, 1.5, 1.0, 1.0, 0).is_err()); // p > 1
    }

    #[test]
    fn round_trip_preserves_network() {
        let net = build_star(3, 1.0, 8.0).unwrap();
        let text = network_to_json(&net).unwrap();
        let back = parse_network(&text).unwrap();
        assert_eq!(net, back);
    }

    #[test]
    fn file_round_trip() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("net.json");
        let net = build_watts_strogatz(10, 4, 0.3, 1.0, 8.0, 3).unwrap();
        write_network(&net, &path).unwrap();
        let back = read_network(&path).unwrap();
        assert_eq!(net, back);
    }

    #[test]
    fn asymmetric_duplicate_edge_is_reported_with_pair() {
        let text = r#"{
            "nodes": [{"id": 0, "power": 1.0}, {"id": 1, "power": 0.0}, {"id": 2, "power": -1.0}],
            "edges": [{"a": 1, "b": 2, "weight": 3.0}, {"a": 2, "b": 1, "weight": 4.0}]
        }"#;
        match parse_network(text) {
            Err(Error::AsymmetricAdjacency { i: 1, j: 2, .. }) => {}
            other => panic!("expected asymmetry error naming (1,2), got {other:?}"),
        }
    }

    #[test]
    fn self_loop_is_rejected() {
        let text = r#"{
            "nodes": [{"id": 0, "power": 1.0}, {"id": 1, "power": -1.0}],
            "edges": [{"a": 0, "b": 0, "weight": 3.0}]
        }"#;
        assert!(matches!(parse_network(text), Err(Error::SelfLoop { node: 0, .. })));
    }

    #[test]
    fn negative_weight_is_rejected() {
        let text = r#"{
            "nodes": [{"id": 0, "power": 1.0}, {"id": 1, "power": -1.0}],
            "edges": [{"a": 0, "b": 1, "weight": -3.0}]
        }"#;
        assert!(matches!(parse_network(text), Err(Error::NegativeWeight { .. })));
    }

    #[test]
    fn malformed_file_is_rejected() {
        assert!(matches!(parse_network("not json at all"), Err(Error::Malformed(_))));
    }

    #[test]
    fn labels_survive_round_trip() {
        let net = build_star(1, 1.0, 1.0)
            .unwrap()
            .with_labels(vec!["producer".into(), "consumer".into()])
            .unwrap();
        let back = parse_network(&network_to_json(&net).unwrap()).unwrap();
        assert_eq!(back.labels().unwrap()[0], "producer");
    }

    proptest! {
        #[test]
        fn watts_strogatz_edge_count_invariant(
            n in (2usize..20).prop_map(|x| 2 * x + 4),
            half_k in 1usize..4,
            p in 0.0f64..=1.0,
            seed in 0u64..1000,
        ) {
            let k = 2 * half_k;
            prop_assume!(k < n);
            let net = build_watts_strogatz(n, k, p, 1.0, 8.0, seed).unwrap();
            prop_assert_eq!(net.edge_count(), n * k / 2);
            // Generator invariants: symmetry and balance hold by construction.
            prop_assert!(net.power_imbalance().abs() < 1e-12);
            let net2 = build_watts_strogatz(n, k, p, 1.0, 8.0, seed).unwrap();
            prop_assert_eq!(net.adjacency(), net2.adjacency());
        }
    }
}
