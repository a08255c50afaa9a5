use crate::geometry::{Deployment, Scenario};
use crate::scalar::Scalar;

/// Energy to send one packet over `dist` meters: `E_elec L + E_amp L d^2`.
pub fn transmit_energy<T: Scalar>(dist: T, scenario: &Scenario<T>) -> T {
    let bits = T::of(f64::from(scenario.energy.packet_bits));
    scenario.energy.e_elec * bits + scenario.energy.e_amp * bits * dist * dist
}

/// Euclidean minimum spanning tree rooted at the node nearest the region
/// center, which stands in for the sink.
#[derive(Debug, Clone, PartialEq)]
pub struct RoutingTree {
    pub root: Option<usize>,
    /// `parent[i]` is the next hop of node `i` toward the root.
    pub parent: Vec<Option<usize>>,
    /// Tree edges `(i, j)` with `i < j`, sorted.
    pub edges: Vec<(usize, usize)>,
}

impl RoutingTree {
    /// Prim's algorithm on the complete graph, O(n^2).
    pub fn build<T: Scalar>(deployment: &Deployment<T>, scenario: &Scenario<T>) -> Self {
        let nodes = &deployment.nodes;
        let n = nodes.len();
        if n == 0 {
            return Self { root: None, parent: Vec::new(), edges: Vec::new() };
        }
        let center = scenario.region.center();
        let root = (0..n)
            .min_by(|&a, &b| {
                nodes[a].distance_sq(&center).partial_cmp(&nodes[b].distance_sq(&center)).expect("finite coordinates")
            })
            .expect("non-empty");

        // nodes outside the tree; each round relaxes them against the newest
        // tree node and picks the closest in the same pass
        let mut outside: Vec<usize> = (0..n).filter(|&v| v != root).collect();
        let mut best = vec![T::infinity(); n];
        let mut link = vec![root; n];
        let mut parent = vec![None; n];
        let mut edges = Vec::with_capacity(n - 1);
        let mut u = root;
        while !outside.is_empty() {
            let mut pick = 0;
            for (k, &v) in outside.iter().enumerate() {
                let d = nodes[u].distance_sq(&nodes[v]);
                if d < best[v] {
                    best[v] = d;
                    link[v] = u;
                }
                if best[v] < best[outside[pick]] {
                    pick = k;
                }
            }
            let next = outside.swap_remove(pick);
            parent[next] = Some(link[next]);
            edges.push((next.min(link[next]), next.max(link[next])));
            u = next;
        }
        edges.sort_unstable();
        Self { root: Some(root), parent, edges }
    }

    /// Sum of per-edge transmit energy, accumulated in sorted edge order.
    pub fn energy<T: Scalar>(&self, deployment: &Deployment<T>, scenario: &Scenario<T>) -> T {
        edge_energy_sum(&self.edges, deployment, scenario)
    }

    /// Largest transmit energy over the tree edges incident to each node.
    pub fn per_node_energy<T: Scalar>(&self, deployment: &Deployment<T>, scenario: &Scenario<T>) -> Vec<T> {
        let mut out = vec![T::zero(); self.parent.len()];
        for &(i, j) in &self.edges {
            let e = transmit_energy(deployment.nodes[i].distance(&deployment.nodes[j]), scenario);
            out[i] = out[i].max(e);
            out[j] = out[j].max(e);
        }
        out
    }
}

/// Sums `transmit_energy` over `edges` in the given order.
pub fn edge_energy_sum<T: Scalar>(edges: &[(usize, usize)], deployment: &Deployment<T>, scenario: &Scenario<T>) -> T {
    edges.iter().fold(T::zero(), |acc, &(i, j)| {
        acc + transmit_energy(deployment.nodes[i].distance(&deployment.nodes[j]), scenario)
    })
}

/// Total transmit energy over the minimum spanning tree; zero for `n <= 1`.
///
/// The tree spans every node even when some edges exceed `rc`.
pub fn total_energy<T: Scalar>(deployment: &Deployment<T>, scenario: &Scenario<T>) -> T {
    if deployment.len() <= 1 {
        return T::zero();
    }
    RoutingTree::build(deployment, scenario).energy(deployment, scenario)
}
