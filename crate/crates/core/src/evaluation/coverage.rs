use serde::{Deserialize, Serialize};

use rand::seq::SliceRandom;
use rand::Rng;

use crate::geometry::{seeded_rng, Deployment, Point, Region, Scenario};
use crate::scalar::Scalar;

/// Default number of Monte Carlo samples used during search.
pub const SEARCH_SAMPLES: usize = 500;

/// How sample points are spread over the region.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Sampling {
    /// Independent uniform points.
    #[default]
    Uniform,
    /// One uniform point in each cell of a near-square grid (jittered grid);
    /// every point is still uniform over the region marginally.
    Stratified,
}

/// Frozen set of uniform sample points over a region.
///
/// A sampler is drawn once and reused for every fitness call of a run so
/// that fitness is a deterministic function of the deployment.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CoverageSampler<T> {
    points: Vec<Point<T>>,
    seed: u64,
}

impl<T: Scalar> CoverageSampler<T> {
    /// Draws `k` points (at least one) uniformly over `region`.
    pub fn new(region: &Region<T>, k: usize, seed: u64) -> Self {
        let mut rng = seeded_rng(seed);
        let points = (0..k.max(1)).map(|_| region.sample(&mut rng)).collect();
        Self { points, seed }
    }

    /// Jittered-grid sampler with exactly `k` points (at least one).
    pub fn stratified(region: &Region<T>, k: usize, seed: u64) -> Self {
        let k = k.max(1);
        let mut rng = seeded_rng(seed);
        let aspect = (region.width() / region.height()).as_f64();
        let cols = ((k as f64 * aspect).sqrt().round() as usize).clamp(1, k);
        let rows = k.div_ceil(cols);
        let mut cells: Vec<(usize, usize)> = (0..rows).flat_map(|r| (0..cols).map(move |c| (r, c))).collect();
        cells.shuffle(&mut rng);
        cells.truncate(k);
        cells.sort_unstable();
        let (cw, ch) = (region.width() / T::of_usize(cols), region.height() / T::of_usize(rows));
        let points = cells
            .into_iter()
            .map(|(r, c)| {
                let x = (T::of_usize(c) + rng.gen_range(T::zero()..T::one())) * cw;
                let y = (T::of_usize(r) + rng.gen_range(T::zero()..T::one())) * ch;
                Point::new(x, y)
            })
            .collect();
        Self { points, seed }
    }

    pub fn with_scheme(region: &Region<T>, k: usize, seed: u64, scheme: Sampling) -> Self {
        match scheme {
            Sampling::Uniform => Self::new(region, k, seed),
            Sampling::Stratified => Self::stratified(region, k, seed),
        }
    }

    /// Sampler over caller-supplied points, e.g. a regular lattice.
    pub fn from_points(points: Vec<Point<T>>) -> Self {
        assert!(!points.is_empty(), "sampler needs at least one point");
        Self { points, seed: 0 }
    }

    pub fn points(&self) -> &[Point<T>] {
        &self.points
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }
}

/// Fraction of sample points within `rs` of at least one node.
pub fn coverage<T: Scalar>(deployment: &Deployment<T>, scenario: &Scenario<T>, sampler: &CoverageSampler<T>) -> T {
    if deployment.is_empty() {
        return T::zero();
    }
    let covered = if deployment.len() <= 8 {
        let rs2 = scenario.rs * scenario.rs;
        sampler.points().iter().filter(|p| deployment.iter().any(|n| n.distance_sq(p) <= rs2)).count()
    } else {
        let grid = NodeGrid::new(deployment, &scenario.region, scenario.rs);
        sampler.points().iter().filter(|p| grid.covers(p)).count()
    };
    T::of_usize(covered) / T::of_usize(sampler.len())
}

/// Buckets nodes into square cells of side `rs` so a sample only needs to be
/// checked against the 3x3 block of cells around it.
struct NodeGrid<'a, T> {
    nodes: &'a [Point<T>],
    cell: T,
    cols: usize,
    rows: usize,
    /// Node indices grouped by cell, `start[c]..start[c + 1]`.
    start: Vec<usize>,
    order: Vec<usize>,
    rs2: T,
}

impl<'a, T: Scalar> NodeGrid<'a, T> {
    fn new(deployment: &'a Deployment<T>, region: &Region<T>, rs: T) -> Self {
        let cols = ((region.width() / rs).ceil().as_f64() as usize).max(1);
        let rows = ((region.height() / rs).ceil().as_f64() as usize).max(1);
        let mut grid = Self {
            nodes: &deployment.nodes,
            cell: rs,
            cols,
            rows,
            start: vec![0; cols * rows + 1],
            order: Vec::new(),
            rs2: rs * rs,
        };
        let cells: Vec<usize> = deployment.iter().map(|p| grid.cell_of(p)).collect();
        for &c in &cells {
            grid.start[c + 1] += 1;
        }
        for c in 0..cols * rows {
            grid.start[c + 1] += grid.start[c];
        }
        let mut fill = grid.start.clone();
        grid.order = vec![0; cells.len()];
        for (i, &c) in cells.iter().enumerate() {
            grid.order[fill[c]] = i;
            fill[c] += 1;
        }
        grid
    }

    fn index(&self, v: T, n: usize) -> usize {
        let i = (v / self.cell).floor().as_f64();
        if i <= 0.0 {
            0
        } else {
            (i as usize).min(n - 1)
        }
    }

    fn cell_of(&self, p: &Point<T>) -> usize {
        self.index(p.y, self.rows) * self.cols + self.index(p.x, self.cols)
    }

    fn covers(&self, p: &Point<T>) -> bool {
        let (cx, cy) = (self.index(p.x, self.cols), self.index(p.y, self.rows));
        for y in cy.saturating_sub(1)..=(cy + 1).min(self.rows - 1) {
            for x in cx.saturating_sub(1)..=(cx + 1).min(self.cols - 1) {
                let c = y * self.cols + x;
                if self.order[self.start[c]..self.start[c + 1]]
                    .iter()
                    .any(|&i| self.nodes[i].distance_sq(p) <= self.rs2)
                {
                    return true;
                }
            }
        }
        false
    }
}
