//! Spatial primitives: points, the rectangular region, scenarios and deployments.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::scalar::Scalar;

#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct Point<T> {
    pub x: T,
    pub y: T,
}

impl<T: Scalar> Point<T> {
    pub fn new(x: T, y: T) -> Self {
        Self { x, y }
    }

    pub fn is_finite(&self) -> bool {
        self.x.is_finite() && self.y.is_finite()
    }

    #[inline]
    pub fn distance_sq(&self, other: &Self) -> T {
        let dx = self.x - other.x;
        let dy = self.y - other.y;
        dx * dx + dy * dy
    }

    #[inline]
    pub fn distance(&self, other: &Self) -> T {
        distance(*self, *other)
    }
}

/// Euclidean distance between two points.
#[inline]
pub fn distance<T: Scalar>(a: Point<T>, b: Point<T>) -> T {
    (a.x - b.x).hypot(a.y - b.y)
}

/// Origin-anchored rectangle `[0, width] x [0, height]`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Region<T> {
    width: T,
    height: T,
}

impl<T: Scalar> Region<T> {
    pub fn new(width: T, height: T) -> Result<Self> {
        if !(width.is_finite() && height.is_finite() && width > T::zero() && height > T::zero()) {
            return Err(Error::InvalidRegion { width: width.as_f64(), height: height.as_f64() });
        }
        Ok(Self { width, height })
    }

    pub fn square(side: T) -> Result<Self> {
        Self::new(side, side)
    }

    pub fn width(&self) -> T {
        self.width
    }

    pub fn height(&self) -> T {
        self.height
    }

    pub fn area(&self) -> T {
        self.width * self.height
    }

    pub fn center(&self) -> Point<T> {
        let half = T::of(0.5);
        Point::new(self.width * half, self.height * half)
    }

    pub fn min_side(&self) -> T {
        self.width.min(self.height)
    }

    pub fn diagonal(&self) -> T {
        self.width.hypot(self.height)
    }

    pub fn contains(&self, p: &Point<T>) -> bool {
        p.x >= T::zero() && p.x <= self.width && p.y >= T::zero() && p.y <= self.height
    }

    pub fn clamp(&self, p: Point<T>) -> Point<T> {
        clamp_to_region(p, self)
    }

    /// Uniform point over the region.
    pub fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> Point<T> {
        Point::new(rng.gen_range(T::zero()..=self.width), rng.gen_range(T::zero()..=self.height))
    }
}

/// Hard-clamps a point into the region.
pub fn clamp_to_region<T: Scalar>(p: Point<T>, region: &Region<T>) -> Point<T> {
    Point::new(p.x.max(T::zero()).min(region.width), p.y.max(T::zero()).min(region.height))
}

/// First-order radio model constants.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EnergyModel<T> {
    /// Electronics energy, J/bit.
    pub e_elec: T,
    /// Amplifier energy, J/bit/m^2.
    pub e_amp: T,
    /// Packet size in bits.
    pub packet_bits: u32,
}

impl<T: Scalar> Default for EnergyModel<T> {
    fn default() -> Self {
        Self { e_elec: T::of(50e-9), e_amp: T::of(100e-12), packet_bits: 4000 }
    }
}

pub const DEFAULT_COVERAGE_TARGET: f64 = 0.95;

/// Everything that describes the deployment problem except the node count.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Scenario<T> {
    pub region: Region<T>,
    pub rs: T,
    pub rc: T,
    pub energy: EnergyModel<T>,
    pub coverage_target: T,
    /// Per-node energy cap, joules. `+inf` disables the check.
    pub e_max: T,
}

impl<T: Scalar> Scenario<T> {
    /// Scenario with default energy constants, 95% target and `rc = 2 rs`.
    pub fn new(region: Region<T>, rs: T) -> Result<Self> {
        Self::builder(region, rs).build()
    }

    pub fn builder(region: Region<T>, rs: T) -> ScenarioBuilder<T> {
        ScenarioBuilder {
            region,
            rs,
            rc: None,
            energy: EnergyModel::default(),
            coverage_target: T::of(DEFAULT_COVERAGE_TARGET),
            e_max: T::infinity(),
            allow_short_rc: false,
        }
    }
}

#[derive(Debug, Clone)]
pub struct ScenarioBuilder<T> {
    region: Region<T>,
    rs: T,
    rc: Option<T>,
    energy: EnergyModel<T>,
    coverage_target: T,
    e_max: T,
    allow_short_rc: bool,
}

impl<T: Scalar> ScenarioBuilder<T> {
    pub fn rc(mut self, rc: T) -> Self {
        self.rc = Some(rc);
        self
    }

    pub fn energy(mut self, energy: EnergyModel<T>) -> Self {
        self.energy = energy;
        self
    }

    pub fn coverage_target(mut self, target: T) -> Self {
        self.coverage_target = target;
        self
    }

    pub fn e_max(mut self, e_max: T) -> Self {
        self.e_max = e_max;
        self
    }

    /// Accept `rc < 2 rs`.
    pub fn allow_short_rc(mut self, allow: bool) -> Self {
        self.allow_short_rc = allow;
        self
    }

    pub fn build(self) -> Result<Scenario<T>> {
        let rs = self.rs;
        let rc = self.rc.unwrap_or(rs + rs);
        if !(rs.is_finite() && rs > T::zero()) {
            return Err(Error::InvalidScenario(format!("sensing radius must be > 0, got {rs}")));
        }
        if !(rc.is_finite() && rc > T::zero()) {
            return Err(Error::InvalidScenario(format!("communication radius must be > 0, got {rc}")));
        }
        if rc < rs + rs && !self.allow_short_rc {
            return Err(Error::InvalidScenario(format!(
                "communication radius {rc} is below twice the sensing radius {rs}"
            )));
        }
        let t = self.coverage_target;
        if !(t > T::zero() && t <= T::one()) {
            return Err(Error::InvalidScenario(format!("coverage target must lie in (0, 1], got {t}")));
        }
        let e = self.energy;
        if !(e.e_elec >= T::zero() && e.e_amp >= T::zero() && e.packet_bits > 0) {
            return Err(Error::InvalidScenario("energy constants must be non-negative and packet size > 0".into()));
        }
        if self.e_max.is_nan() || self.e_max < T::zero() {
            return Err(Error::InvalidScenario("e_max must be non-negative".into()));
        }
        Ok(Scenario { region: self.region, rs, rc, energy: e, coverage_target: t, e_max: self.e_max })
    }
}

/// Ordered node coordinates; index is node identity within one run.
#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
pub struct Deployment<T> {
    pub nodes: Vec<Point<T>>,
}

impl<T: Scalar> Deployment<T> {
    pub fn new(nodes: Vec<Point<T>>) -> Self {
        Self { nodes }
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    pub fn iter(&self) -> std::slice::Iter<'_, Point<T>> {
        self.nodes.iter()
    }

    pub fn clamp_into(&mut self, region: &Region<T>) {
        for p in &mut self.nodes {
            *p = clamp_to_region(*p, region);
        }
    }

    pub fn all_inside(&self, region: &Region<T>) -> bool {
        self.nodes.iter().all(|p| region.contains(p))
    }

    /// Uniform random placement drawing from the supplied generator.
    pub fn random_with<R: Rng + ?Sized>(n: usize, region: &Region<T>, rng: &mut R) -> Self {
        Self::new((0..n).map(|_| region.sample(rng)).collect())
    }
}

impl<T> FromIterator<Point<T>> for Deployment<T> {
    fn from_iter<I: IntoIterator<Item = Point<T>>>(iter: I) -> Self {
        Self { nodes: iter.into_iter().collect() }
    }
}

/// Seeded generator used everywhere a run needs randomness.
pub fn seeded_rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// `n` nodes uniform over the region; identical seeds give identical output.
pub fn random_deployment<T: Scalar>(n: usize, region: &Region<T>, seed: u64) -> Deployment<T> {
    Deployment::random_with(n, region, &mut seeded_rng(seed))
}
