use crate::geometry::{Deployment, Scenario};
use crate::scalar::Scalar;

/// Disjoint-set forest with union by size and path halving.
#[derive(Debug, Clone)]
pub struct UnionFind {
    parent: Vec<usize>,
    size: Vec<usize>,
}

impl UnionFind {
    pub fn new(n: usize) -> Self {
        Self { parent: (0..n).collect(), size: vec![1; n] }
    }

    pub fn find(&mut self, mut x: usize) -> usize {
        while self.parent[x] != x {
            self.parent[x] = self.parent[self.parent[x]];
            x = self.parent[x];
        }
        x
    }

    /// Returns `true` if `a` and `b` were in different sets.
    pub fn union(&mut self, a: usize, b: usize) -> bool {
        let (mut ra, mut rb) = (self.find(a), self.find(b));
        if ra == rb {
            return false;
        }
        if self.size[ra] < self.size[rb] {
            std::mem::swap(&mut ra, &mut rb);
        }
        self.parent[rb] = ra;
        self.size[ra] += self.size[rb];
        true
    }

    pub fn component_size(&mut self, x: usize) -> usize {
        let r = self.find(x);
        self.size[r]
    }

    pub fn largest_component(&mut self) -> usize {
        (0..self.parent.len()).map(|i| self.component_size(i)).max().unwrap_or(0)
    }
}

/// Largest-component ratio of the `rc` disk graph and the all-connected flag.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Connectivity<T> {
    pub ratio: T,
    pub is_connected: bool,
}

/// Builds the undirected graph with an edge wherever two nodes are within `rc`
/// (inclusive) and measures its largest connected component.
pub fn connectivity<T: Scalar>(deployment: &Deployment<T>, scenario: &Scenario<T>) -> Connectivity<T> {
    let n = deployment.len();
    match n {
        0 => return Connectivity { ratio: T::zero(), is_connected: false },
        1 => return Connectivity { ratio: T::one(), is_connected: true },
        _ => {}
    }
    let nodes = &deployment.nodes;
    let mut uf = UnionFind::new(n);
    let rc2 = scenario.rc * scenario.rc;
    let mut merges = 0;
    for i in 0..n {
        for j in (i + 1)..n {
            if nodes[i].distance_sq(&nodes[j]) <= rc2 && uf.union(i, j) {
                merges += 1;
            }
        }
    }
    if merges == n - 1 {
        return Connectivity { ratio: T::one(), is_connected: true };
    }
    let largest = uf.largest_component();
    Connectivity { ratio: T::of_usize(largest) / T::of_usize(n), is_connected: largest == n }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::{random_deployment, Point, Region};
    use proptest::prelude::*;
    use std::collections::VecDeque;

    fn scenario(rc: f64) -> Scenario<f64> {
        Scenario::builder(Region::square(100.0).unwrap(), 10.0).rc(rc).allow_short_rc(true).build().unwrap()
    }

    /// Breadth-first search over an explicit adjacency matrix.
    fn bfs_largest(d: &Deployment<f64>, rc: f64) -> usize {
        let n = d.len();
        let adj: Vec<Vec<bool>> =
            (0..n).map(|i| (0..n).map(|j| i != j && d.nodes[i].distance(&d.nodes[j]) <= rc).collect()).collect();
        for i in 0..n {
            for j in 0..n {
                assert_eq!(adj[i][j], adj[j][i]);
            }
        }
        let mut seen = vec![false; n];
        let mut best = 0;
        for s in 0..n {
            if seen[s] {
                continue;
            }
            seen[s] = true;
            let mut q = VecDeque::from([s]);
            let mut size = 0;
            while let Some(u) = q.pop_front() {
                size += 1;
                for v in 0..n {
                    if adj[u][v] && !seen[v] {
                        seen[v] = true;
                        q.push_back(v);
                    }
                }
            }
            best = best.max(size);
        }
        best
    }

    #[test]
    fn edge_at_exactly_rc_counts() {
        let d = Deployment::new(vec![Point::new(0.0, 0.0), Point::new(40.0, 0.0)]);
        let c = connectivity(&d, &scenario(40.0));
        assert_eq!(c, Connectivity { ratio: 1.0, is_connected: true });
    }

    #[test]
    fn isolated_node() {
        let d = Deployment::new(vec![Point::new(0.0, 0.0), Point::new(0.0, 30.0), Point::new(0.0, 90.0)]);
        let c = connectivity(&d, &scenario(40.0));
        assert!((c.ratio - 2.0 / 3.0).abs() < 1e-15);
        assert!(!c.is_connected);
    }

    #[test]
    fn degenerate_sizes() {
        let s = scenario(40.0);
        assert_eq!(connectivity(&Deployment::default(), &s), Connectivity { ratio: 0.0, is_connected: false });
        let one = Deployment::new(vec![Point::new(3.0, 3.0)]);
        assert_eq!(connectivity(&one, &s), Connectivity { ratio: 1.0, is_connected: true });
    }

    #[test]
    fn union_find_basics() {
        let mut uf = UnionFind::new(5);
        assert!(uf.union(0, 1));
        assert!(!uf.union(1, 0));
        assert!(uf.union(3, 4));
        assert_eq!(uf.component_size(4), 2);
        assert_eq!(uf.largest_component(), 2);
        assert!(uf.union(1, 4));
        assert_eq!(uf.largest_component(), 4);
    }

    proptest! {
        #[test]
        fn matches_bfs_oracle(seed in 0u64..10_000, rc in 1.0..60.0f64) {
            let s = scenario(rc);
            let d = random_deployment(50, &s.region, seed);
            let c = connectivity(&d, &s);
            let largest = bfs_largest(&d, rc);
            prop_assert_eq!(c.ratio, largest as f64 / 50.0);
            prop_assert_eq!(c.is_connected, largest == 50);
        }

        #[test]
        fn monotone_in_rc(seed in 0u64..10_000, rc in 1.0..60.0f64, extra in 0.0..30.0f64) {
            let d = random_deployment(30, &Region::square(100.0).unwrap(), seed);
            let a = connectivity(&d, &scenario(rc)).ratio;
            let b = connectivity(&d, &scenario(rc + extra)).ratio;
            prop_assert!(b >= a);
        }
    }
}
