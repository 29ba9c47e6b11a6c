//! The stochastic network model: a Poisson point process of nodes over a
//! rectangle, independent links with a pair-dependent probability, and link
//! capacities drawn from a capacity law.

use std::f64::consts::PI;
use std::fmt;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::geometry::{Point, Rectangle, GEOM_TOL};
use crate::kernel::{DistanceTable, KERNEL_KNOTS};

/// Panels used for the capacity first-moment quadrature.
pub const CAPACITY_PANELS: usize = 256;

/// Default cap on the expected node count of a sampled network.
pub const DEFAULT_NODE_BUDGET: f64 = 1e6;

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Hotspot {
    pub center: Point,
    /// Expected number of nodes contributed over the whole plane.
    pub mass: f64,
    pub sigma: f64,
}

impl Hotspot {
    pub fn new(center: Point, mass: f64, sigma: f64) -> Self {
        Self {
            center,
            mass,
            sigma,
        }
    }

    pub fn peak(&self) -> f64 {
        self.mass / (2.0 * PI * self.sigma * self.sigma)
    }

    #[inline]
    pub fn density(&self, u: Point) -> f64 {
        let s2 = self.sigma * self.sigma;
        self.peak() * (-u.dist_sq(self.center) / (2.0 * s2)).exp()
    }
}

/// Piecewise-constant field on a regular grid of square cells. Row 0 is the
/// northernmost (largest y) row, as in GIS ASCII grids.
#[derive(Clone, Debug, PartialEq)]
pub struct RasterField {
    n_rows: usize,
    n_cols: usize,
    cell_size: f64,
    origin: Point,
    values: Vec<f64>,
}

impl RasterField {
    /// `origin` is the lower-left corner; `values` are row-major, top row first.
    pub fn new(
        n_rows: usize,
        n_cols: usize,
        cell_size: f64,
        origin: Point,
        values: Vec<f64>,
    ) -> Result<Self> {
        if n_rows == 0 || n_cols == 0 {
            return Err(Error::InvalidModel("raster has no cells".into()));
        }
        if !(cell_size.is_finite() && cell_size > 0.0) || !origin.is_finite() {
            return Err(Error::InvalidModel(format!(
                "raster cell size {cell_size} or origin is invalid"
            )));
        }
        if values.len() != n_rows * n_cols {
            return Err(Error::InvalidModel(format!(
                "raster expects {} values, got {}",
                n_rows * n_cols,
                values.len()
            )));
        }
        for (i, &v) in values.iter().enumerate() {
            if !v.is_finite() || v < 0.0 {
                return Err(Error::NegativeIntensity {
                    row: i / n_cols,
                    col: i % n_cols,
                    value: v,
                });
            }
        }
        Ok(Self {
            n_rows,
            n_cols,
            cell_size,
            origin,
            values,
        })
    }

    pub fn n_rows(&self) -> usize {
        self.n_rows
    }

    pub fn n_cols(&self) -> usize {
        self.n_cols
    }

    pub fn cell_size(&self) -> f64 {
        self.cell_size
    }

    pub fn origin(&self) -> Point {
        self.origin
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn get(&self, row: usize, col: usize) -> f64 {
        self.values[row * self.n_cols + col]
    }

    pub fn extent(&self) -> Rectangle {
        Rectangle {
            x_min: self.origin.x,
            x_max: self.origin.x + self.n_cols as f64 * self.cell_size,
            y_min: self.origin.y,
            y_max: self.origin.y + self.n_rows as f64 * self.cell_size,
        }
    }

    /// Footprint of cell `(row, col)`.
    pub fn cell_rect(&self, row: usize, col: usize) -> Rectangle {
        let x_min = self.origin.x + col as f64 * self.cell_size;
        let y_min = self.origin.y + (self.n_rows - 1 - row) as f64 * self.cell_size;
        Rectangle {
            x_min,
            x_max: x_min + self.cell_size,
            y_min,
            y_max: y_min + self.cell_size,
        }
    }

    /// Cell containing `u`; points on the far edges map to the last cell.
    pub fn cell_of(&self, u: Point) -> Option<(usize, usize)> {
        if !self.extent().contains(u) {
            return None;
        }
        let col = ((u.x - self.origin.x) / self.cell_size).floor();
        let from_bottom = ((u.y - self.origin.y) / self.cell_size).floor();
        let col = (col.max(0.0) as usize).min(self.n_cols - 1);
        let from_bottom = (from_bottom.max(0.0) as usize).min(self.n_rows - 1);
        Some((self.n_rows - 1 - from_bottom, col))
    }

    pub fn value_at(&self, u: Point) -> Option<f64> {
        self.cell_of(u).map(|(r, c)| self.get(r, c))
    }

    pub fn max_value(&self) -> f64 {
        self.values.iter().copied().fold(0.0, f64::max)
    }

    /// Largest difference between edge-adjacent cells divided by the cell size.
    pub fn max_slope(&self) -> f64 {
        let mut slope: f64 = 0.0;
        for r in 0..self.n_rows {
            for c in 0..self.n_cols {
                let v = self.get(r, c);
                if c + 1 < self.n_cols {
                    slope = slope.max((self.get(r, c + 1) - v).abs());
                }
                if r + 1 < self.n_rows {
                    slope = slope.max((self.get(r + 1, c) - v).abs());
                }
            }
        }
        slope / self.cell_size
    }

    /// Integral over the whole raster, `cell_size^2 * sum(values)`.
    pub fn total_mass(&self) -> f64 {
        self.cell_size * self.cell_size * self.values.iter().sum::<f64>()
    }

    /// Integral over the part of the raster inside `rec`.
    pub fn mass_within(&self, rec: &Rectangle) -> f64 {
        let mut mass = 0.0;
        for r in 0..self.n_rows {
            for c in 0..self.n_cols {
                if let Some(clip) = self.cell_rect(r, c).intersection(rec) {
                    mass += self.get(r, c) * clip.area();
                }
            }
        }
        mass
    }
}

/// Node intensity `f(u)`: mean number of nodes per unit area near `u`.
#[derive(Clone, Debug, PartialEq)]
pub enum IntensityField {
    Homogeneous(f64),
    /// Constant background plus isotropic Gaussian bumps.
    GaussianMixture {
        background: f64,
        hotspots: Vec<Hotspot>,
    },
    Raster(RasterField),
}

impl IntensityField {
    pub fn gaussian_mixture(background: f64, hotspots: Vec<Hotspot>) -> Self {
        IntensityField::GaussianMixture {
            background,
            hotspots,
        }
    }

    fn validate(&self, rec: &Rectangle) -> Result<()> {
        match self {
            IntensityField::Homogeneous(rate) => {
                if !(rate.is_finite() && *rate >= 0.0) {
                    return Err(Error::InvalidModel(format!("intensity rate {rate}")));
                }
            }
            IntensityField::GaussianMixture {
                background,
                hotspots,
            } => {
                if !(background.is_finite() && *background >= 0.0) {
                    return Err(Error::InvalidModel(format!("background {background}")));
                }
                for h in hotspots {
                    let ok = h.center.is_finite()
                        && h.mass.is_finite()
                        && h.mass >= 0.0
                        && h.sigma.is_finite()
                        && h.sigma > 0.0;
                    if !ok {
                        return Err(Error::InvalidModel(format!("bad hotspot {h:?}")));
                    }
                }
            }
            IntensityField::Raster(raster) => {
                if !raster.extent().contains_rect(rec) {
                    return Err(Error::InvalidModel(
                        "raster does not cover the model rectangle".into(),
                    ));
                }
            }
        }
        Ok(())
    }

    /// Field value without a domain check; rasters clamp to the nearest cell.
    #[inline]
    pub fn value(&self, u: Point) -> f64 {
        match self {
            IntensityField::Homogeneous(rate) => *rate,
            IntensityField::GaussianMixture {
                background,
                hotspots,
            } => background + hotspots.iter().map(|h| h.density(u)).sum::<f64>(),
            IntensityField::Raster(raster) => {
                let col = ((u.x - raster.origin.x) / raster.cell_size).floor().max(0.0) as usize;
                let from_bottom =
                    ((u.y - raster.origin.y) / raster.cell_size).floor().max(0.0) as usize;
                let col = col.min(raster.n_cols - 1);
                let row = raster.n_rows - 1 - from_bottom.min(raster.n_rows - 1);
                raster.get(row, col)
            }
        }
    }

    /// Upper bound of the field.
    pub fn max_value(&self) -> f64 {
        match self {
            IntensityField::Homogeneous(rate) => *rate,
            IntensityField::GaussianMixture {
                background,
                hotspots,
            } => background + hotspots.iter().map(Hotspot::peak).sum::<f64>(),
            IntensityField::Raster(raster) => raster.max_value(),
        }
    }

    /// Upper bound of the gradient norm.
    pub fn max_slope(&self) -> f64 {
        match self {
            IntensityField::Homogeneous(_) => 0.0,
            IntensityField::GaussianMixture { hotspots, .. } => hotspots
                .iter()
                .map(|h| h.peak() * (-0.5f64).exp() / h.sigma)
                .sum(),
            IntensityField::Raster(raster) => raster.max_slope(),
        }
    }

    /// Expected node count inside `rec`. Exact for homogeneous and raster
    /// fields; an upper bound (full hotspot masses) for mixtures.
    pub fn mass_bound(&self, rec: &Rectangle) -> f64 {
        match self {
            IntensityField::Homogeneous(rate) => rate * rec.area(),
            IntensityField::GaussianMixture {
                background,
                hotspots,
            } => background * rec.area() + hotspots.iter().map(|h| h.mass).sum::<f64>(),
            IntensityField::Raster(raster) => raster.mass_within(rec),
        }
    }
}

/// Probability `y(u, v)` that a link exists between nodes at `u` and `v`.
#[derive(Clone)]
pub enum LinkProbability {
    /// `min(1, scale / max(dist, floor))`.
    InverseDistance { scale: f64, floor: f64 },
    Constant(f64),
    /// Arbitrary symmetric probability; evaluated directly.
    Custom(Arc<dyn Fn(Point, Point) -> f64 + Send + Sync>),
}

impl fmt::Debug for LinkProbability {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            LinkProbability::InverseDistance { scale, floor } => f
                .debug_struct("InverseDistance")
                .field("scale", scale)
                .field("floor", floor)
                .finish(),
            LinkProbability::Constant(p) => f.debug_tuple("Constant").field(p).finish(),
            LinkProbability::Custom(_) => f.write_str("Custom(..)"),
        }
    }
}

impl LinkProbability {
    pub fn inverse_distance() -> Self {
        LinkProbability::InverseDistance {
            scale: 1.0,
            floor: 0.0,
        }
    }

    pub fn custom(y: impl Fn(Point, Point) -> f64 + Send + Sync + 'static) -> Self {
        LinkProbability::Custom(Arc::new(y))
    }

    fn validate(&self) -> Result<()> {
        match self {
            LinkProbability::InverseDistance { scale, floor } => {
                if !(scale.is_finite() && *scale > 0.0 && floor.is_finite() && *floor >= 0.0) {
                    return Err(Error::InvalidModel(format!(
                        "inverse-distance scale {scale}, floor {floor}"
                    )));
                }
            }
            LinkProbability::Constant(p) => {
                if !(0.0..=1.0).contains(p) {
                    return Err(Error::InvalidModel(format!("link probability {p}")));
                }
            }
            LinkProbability::Custom(_) => {}
        }
        Ok(())
    }

    /// Probability as a function of distance, for the distance-only kinds.
    #[inline]
    pub fn at_distance(&self, d: f64) -> Option<f64> {
        match self {
            LinkProbability::InverseDistance { scale, floor } => {
                Some((scale / d.max(*floor).max(GEOM_TOL)).min(1.0))
            }
            LinkProbability::Constant(p) => Some(*p),
            LinkProbability::Custom(_) => None,
        }
    }

    #[inline]
    pub fn value(&self, u: Point, v: Point) -> f64 {
        match self {
            LinkProbability::Custom(y) => y(u, v).clamp(0.0, 1.0),
            other => other.at_distance(u.dist(v)).unwrap_or(0.0),
        }
    }

    /// Upper bound of `|dy/d(dist)|`, where known.
    fn max_slope(&self) -> f64 {
        match self {
            LinkProbability::InverseDistance { scale, floor } => {
                // y = scale / d on d >= max(scale, floor), flat before
                let knee = scale.max(*floor).max(GEOM_TOL);
                scale / (knee * knee)
            }
            LinkProbability::Constant(_) => 0.0,
            LinkProbability::Custom(_) => 1.0,
        }
    }
}

/// Distribution of a link's capacity given the distance between its ends.
#[derive(Clone)]
pub enum CapacityLaw {
    Constant(f64),
    /// Distance-independent piecewise-constant density over equal-width
    /// bins of `[0, max_capacity]`; `probabilities` sum to one.
    Histogram {
        max_capacity: f64,
        probabilities: Vec<f64>,
    },
    /// Density `h(c, dist)` on `[0, max_capacity]`.
    Custom {
        density: Arc<dyn Fn(f64, f64) -> f64 + Send + Sync>,
        max_capacity: f64,
    },
}

impl fmt::Debug for CapacityLaw {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CapacityLaw::Constant(c) => f.debug_tuple("Constant").field(c).finish(),
            CapacityLaw::Histogram {
                max_capacity,
                probabilities,
            } => f
                .debug_struct("Histogram")
                .field("max_capacity", max_capacity)
                .field("probabilities", probabilities)
                .finish(),
            CapacityLaw::Custom { max_capacity, .. } => f
                .debug_struct("Custom")
                .field("max_capacity", max_capacity)
                .finish_non_exhaustive(),
        }
    }
}

impl CapacityLaw {
    pub fn custom(
        max_capacity: f64,
        density: impl Fn(f64, f64) -> f64 + Send + Sync + 'static,
    ) -> Self {
        CapacityLaw::Custom {
            density: Arc::new(density),
            max_capacity,
        }
    }

    /// Histogram law over equal-width bins of `[0, max_capacity]`; `weights`
    /// are normalized to sum to one.
    pub fn histogram(max_capacity: f64, weights: &[f64]) -> Result<Self> {
        let total: f64 = weights.iter().sum();
        if weights.is_empty() || weights.iter().any(|w| !(w.is_finite() && *w >= 0.0)) || total <= 0.0
        {
            return Err(Error::InvalidModel("capacity histogram weights".into()));
        }
        Ok(CapacityLaw::Histogram {
            max_capacity,
            probabilities: weights.iter().map(|w| w / total).collect(),
        })
    }

    pub fn max_capacity(&self) -> f64 {
        match self {
            CapacityLaw::Constant(c) => *c,
            CapacityLaw::Histogram { max_capacity, .. } | CapacityLaw::Custom { max_capacity, .. } => {
                *max_capacity
            }
        }
    }

    fn validate(&self, max_dist: f64) -> Result<()> {
        match self {
            CapacityLaw::Constant(c) => {
                if !(c.is_finite() && *c > 0.0) {
                    return Err(Error::InvalidModel(format!("capacity {c}")));
                }
            }
            CapacityLaw::Histogram { max_capacity, .. } => {
                if !(max_capacity.is_finite() && *max_capacity > 0.0) {
                    return Err(Error::InvalidModel(format!("max capacity {max_capacity}")));
                }
            }
            CapacityLaw::Custom {
                density,
                max_capacity,
            } => {
                if !(max_capacity.is_finite() && *max_capacity > 0.0) {
                    return Err(Error::InvalidModel(format!("max capacity {max_capacity}")));
                }
                for k in 0..=8 {
                    let d = max_dist * k as f64 / 8.0;
                    let (mass, _) = self.midpoint_moments(d);
                    if (mass - 1.0).abs() > 1e-6 {
                        return Err(Error::InvalidModel(format!(
                            "capacity density integrates to {mass} at distance {d}"
                        )));
                    }
                    let probe = density(0.5 * max_capacity, d);
                    if !probe.is_finite() || probe < 0.0 {
                        return Err(Error::InvalidModel("capacity density is negative".into()));
                    }
                }
            }
        }
        Ok(())
    }

    /// Zeroth and first moment of `h(., dist)`; custom densities use the
    /// midpoint rule.
    fn midpoint_moments(&self, dist: f64) -> (f64, f64) {
        match self {
            CapacityLaw::Constant(c) => (1.0, *c),
            CapacityLaw::Histogram {
                max_capacity,
                probabilities,
            } => {
                let width = max_capacity / probabilities.len() as f64;
                let moment = probabilities
                    .iter()
                    .enumerate()
                    .map(|(k, p)| p * (k as f64 + 0.5) * width)
                    .sum();
                (1.0, moment)
            }
            CapacityLaw::Custom {
                density,
                max_capacity,
            } => {
                let width = max_capacity / CAPACITY_PANELS as f64;
                let mut mass = 0.0;
                let mut moment = 0.0;
                for k in 0..CAPACITY_PANELS {
                    let c = (k as f64 + 0.5) * width;
                    let h = density(c, dist).max(0.0);
                    mass += h * width;
                    moment += h * c * width;
                }
                (mass, moment)
            }
        }
    }

    /// Expected capacity `int_0^max h(c, dist) c dc` of a link of length `dist`.
    pub fn first_moment(&self, dist: f64) -> f64 {
        let (mass, moment) = self.midpoint_moments(dist);
        if mass > 0.0 {
            (moment / mass).clamp(0.0, self.max_capacity())
        } else {
            0.0
        }
    }

    /// Inverse-CDF draw of a capacity for a link of length `dist`.
    pub fn sample(&self, dist: f64, uniform: f64) -> f64 {
        match self {
            CapacityLaw::Constant(c) => *c,
            CapacityLaw::Histogram {
                max_capacity,
                probabilities,
            } => {
                let width = max_capacity / probabilities.len() as f64;
                let mut acc = 0.0;
                for (k, &p) in probabilities.iter().enumerate() {
                    if acc + p >= uniform && p > 0.0 {
                        let frac = ((uniform - acc) / p).clamp(0.0, 1.0);
                        return (k as f64 + frac) * width;
                    }
                    acc += p;
                }
                *max_capacity
            }
            CapacityLaw::Custom {
                density,
                max_capacity,
            } => {
                let width = max_capacity / CAPACITY_PANELS as f64;
                let masses: Vec<f64> = (0..CAPACITY_PANELS)
                    .map(|k| density((k as f64 + 0.5) * width, dist).max(0.0) * width)
                    .collect();
                let total: f64 = masses.iter().sum();
                let target = uniform * total;
                let mut acc = 0.0;
                for (k, m) in masses.iter().enumerate() {
                    if acc + m >= target && *m > 0.0 {
                        let frac = ((target - acc) / m).clamp(0.0, 1.0);
                        return (k as f64 + frac) * width;
                    }
                    acc += m;
                }
                *max_capacity
            }
        }
    }
}

/// Expected-capacity kernel `g(u, v)` in the form the integrator consumes.
#[derive(Clone, Debug)]
pub enum Kernel {
    /// Closed form in the distance.
    Distance {
        link: LinkProbability,
        moment: f64,
    },
    /// Distance-only link probability with a tabulated first moment.
    Tabulated {
        link: LinkProbability,
        moments: DistanceTable,
    },
    /// Custom link probability; the first moment may still be tabulated.
    General {
        link: LinkProbability,
        moments: DistanceTable,
    },
}

impl Kernel {
    #[inline]
    pub fn eval(&self, u: Point, v: Point) -> f64 {
        match self {
            Kernel::Distance { link, moment } => {
                link.at_distance(u.dist(v)).unwrap_or(0.0) * moment
            }
            Kernel::Tabulated { link, moments } => {
                let d = u.dist(v);
                link.at_distance(d).unwrap_or(0.0) * moments.eval(d)
            }
            Kernel::General { link, moments } => link.value(u, v) * moments.eval(u.dist(v)),
        }
    }

    /// Kernel as a function of distance alone, when that is its form.
    #[inline]
    pub fn at_distance(&self, d: f64) -> Option<f64> {
        match self {
            Kernel::Distance { link, moment } => link.at_distance(d).map(|y| y * moment),
            Kernel::Tabulated { link, moments } => {
                link.at_distance(d).map(|y| y * moments.eval(d))
            }
            Kernel::General { .. } => None,
        }
    }
}

/// `N = (PPP(f), y, h, Rec)` together with the bounds that size the
/// integration grid.
#[derive(Clone, Debug)]
pub struct StochasticNetworkModel {
    rec: Rectangle,
    intensity: IntensityField,
    link: LinkProbability,
    capacity: CapacityLaw,
    kernel: Kernel,
    /// Bound on the variation rate of `f f g`.
    variation_bound: f64,
    /// Bound on the maxima of `f`, `g` and `f f g`.
    max_bound: f64,
    node_budget: f64,
}

impl StochasticNetworkModel {
    pub fn new(
        rec: Rectangle,
        intensity: IntensityField,
        link: LinkProbability,
        capacity: CapacityLaw,
    ) -> Result<Self> {
        intensity.validate(&rec)?;
        link.validate()?;
        capacity.validate(rec.diagonal())?;
        let kernel = build_kernel(&rec, &link, &capacity);
        let mut model = Self {
            rec,
            intensity,
            link,
            capacity,
            kernel,
            variation_bound: 0.0,
            max_bound: 0.0,
            node_budget: DEFAULT_NODE_BUDGET,
        };
        let (m, t) = model.default_bounds();
        model.variation_bound = m;
        model.max_bound = t;
        Ok(model)
    }

    /// Overrides the derived bounds. `max_bound` may not undercut a raster's
    /// observed maximum.
    pub fn with_bounds(mut self, variation_bound: Option<f64>, max_bound: Option<f64>) -> Result<Self> {
        if let Some(m) = variation_bound {
            if !(m.is_finite() && m >= 0.0) {
                return Err(Error::InvalidModel(format!("variation bound {m}")));
            }
            self.variation_bound = m;
        }
        if let Some(t) = max_bound {
            if !(t.is_finite() && t >= 0.0) {
                return Err(Error::InvalidModel(format!("max bound {t}")));
            }
            if let IntensityField::Raster(r) = &self.intensity {
                if t < r.max_value() {
                    return Err(Error::InvalidModel(format!(
                        "max bound {t} is below the raster maximum {}",
                        r.max_value()
                    )));
                }
            }
            self.max_bound = t;
        }
        Ok(self)
    }

    pub fn with_node_budget(mut self, budget: f64) -> Self {
        self.node_budget = budget;
        self
    }

    pub fn rec(&self) -> &Rectangle {
        &self.rec
    }

    pub fn intensity(&self) -> &IntensityField {
        &self.intensity
    }

    pub fn link(&self) -> &LinkProbability {
        &self.link
    }

    pub fn capacity(&self) -> &CapacityLaw {
        &self.capacity
    }

    pub fn kernel(&self) -> &Kernel {
        &self.kernel
    }

    pub fn variation_bound(&self) -> f64 {
        self.variation_bound
    }

    pub fn max_bound(&self) -> f64 {
        self.max_bound
    }

    pub fn node_budget(&self) -> f64 {
        self.node_budget
    }

    pub fn intensity_at(&self, u: Point) -> Result<f64> {
        if !self.rec.contains(u) {
            return Err(Error::OutOfDomain { x: u.x, y: u.y });
        }
        Ok(self.intensity.value(u))
    }

    /// `g(u, v) = y(u, v) * E[capacity | dist(u, v)]`, evaluated directly.
    pub fn expected_capacity_kernel(&self, u: Point, v: Point) -> Result<f64> {
        for p in [u, v] {
            if !self.rec.contains(p) {
                return Err(Error::OutOfDomain { x: p.x, y: p.y });
            }
        }
        let d = u.dist(v);
        Ok(self.link.value(u, v) * self.capacity.first_moment(d))
    }

    /// Largest possible value of `g`.
    pub fn kernel_bound(&self) -> f64 {
        let y_max = match &self.link {
            LinkProbability::Constant(p) => *p,
            _ => 1.0,
        };
        y_max * self.capacity.max_capacity()
    }

    /// Upper bound of the TEC of any cut: half the squared node mass times
    /// the kernel bound.
    pub fn tec_bound(&self) -> f64 {
        let mass = self.intensity.mass_bound(&self.rec);
        0.5 * mass * mass * self.kernel_bound()
    }

    fn default_bounds(&self) -> (f64, f64) {
        let f_max = self.intensity.max_value();
        let f_slope = self.intensity.max_slope();
        let g_max = self.kernel_bound();
        let g_slope = self.link.max_slope() * self.capacity.max_capacity();
        let t = f_max.max(g_max).max(f_max * f_max * g_max);
        let m = 2.0 * f_max * f_slope * g_max + f_max * f_max * g_slope;
        (m, t)
    }
}

fn build_kernel(rec: &Rectangle, link: &LinkProbability, capacity: &CapacityLaw) -> Kernel {
    match (link, capacity) {
        (LinkProbability::Custom(_), _) => Kernel::General {
            link: link.clone(),
            moments: moment_table(rec, capacity),
        },
        (_, CapacityLaw::Constant(_) | CapacityLaw::Histogram { .. }) => Kernel::Distance {
            link: link.clone(),
            moment: capacity.first_moment(0.0),
        },
        (_, CapacityLaw::Custom { .. }) => Kernel::Tabulated {
            link: link.clone(),
            moments: moment_table(rec, capacity),
        },
    }
}

fn moment_table(rec: &Rectangle, capacity: &CapacityLaw) -> DistanceTable {
    DistanceTable::build(rec.diagonal(), KERNEL_KNOTS, |d| capacity.first_moment(d))
}
