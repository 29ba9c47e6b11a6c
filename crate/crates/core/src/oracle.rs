//! Monte-Carlo ground truth: draw concrete networks from the model, cut them
//! with exact geometry and average the destroyed capacity.
//!
//! Sample `i` of a run seeded with `s` draws from ChaCha8 stream `i` of key
//! `s`, so every sample is reproducible on its own and the run is identical
//! under any thread count.

use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Normal, Poisson};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geometry::{classify_link, CircularCut, LinkClass, Point, Rectangle};
use crate::model::{IntensityField, StochasticNetworkModel};

/// Pairs whose link probability falls below this are never linked.
pub const LINK_PROBABILITY_FLOOR: f64 = 1e-9;

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Link {
    pub a: usize,
    pub b: usize,
    pub capacity: f64,
}

/// One realization of the stochastic network.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ConcreteNetwork {
    pub nodes: Vec<Point>,
    pub links: Vec<Link>,
    pub seed: u64,
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct ClassCounts {
    pub alpha: usize,
    pub beta: usize,
    pub gamma: usize,
    pub untouched: usize,
}

impl ClassCounts {
    pub fn total(&self) -> usize {
        self.alpha + self.beta + self.gamma + self.untouched
    }
}

/// Destroyed capacity of one sampled network, split by link class.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct SampleRecord {
    pub index: u64,
    pub nodes: usize,
    pub links: usize,
    pub alpha: f64,
    pub beta: f64,
    pub gamma: f64,
}

impl SampleRecord {
    pub fn total(&self) -> f64 {
        self.alpha + self.beta + self.gamma
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct PerClass {
    pub alpha: f64,
    pub beta: f64,
    pub gamma: f64,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct McEstimate {
    /// Sum of the per-class means.
    pub mean: f64,
    pub std_error: f64,
    pub n_samples: usize,
    pub per_type_means: PerClass,
    pub per_type_std_errors: PerClass,
}

fn mean_and_std_error(values: impl Iterator<Item = f64> + Clone, n: usize) -> (f64, f64) {
    let nf = n as f64;
    let mean = values.clone().sum::<f64>() / nf;
    let ss: f64 = values.map(|v| (v - mean) * (v - mean)).sum();
    let var = if n > 1 { ss / (nf - 1.0) } else { 0.0 };
    (mean, (var / nf).sqrt())
}

impl McEstimate {
    pub fn from_records(records: &[SampleRecord]) -> Self {
        let n = records.len();
        let (alpha, se_a) = mean_and_std_error(records.iter().map(|r| r.alpha), n);
        let (beta, se_b) = mean_and_std_error(records.iter().map(|r| r.beta), n);
        let (gamma, se_g) = mean_and_std_error(records.iter().map(|r| r.gamma), n);
        let (_, std_error) = mean_and_std_error(records.iter().map(SampleRecord::total), n);
        Self {
            mean: alpha + beta + gamma,
            std_error,
            n_samples: n,
            per_type_means: PerClass { alpha, beta, gamma },
            per_type_std_errors: PerClass {
                alpha: se_a,
                beta: se_b,
                gamma: se_g,
            },
        }
    }
}

fn stream_rng(seed: u64, stream: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(stream);
    rng
}

fn poisson_count(rng: &mut ChaCha8Rng, mean: f64) -> usize {
    if mean <= 0.0 {
        return 0;
    }
    match Poisson::new(mean) {
        Ok(p) => p.sample(rng) as usize,
        Err(_) => 0,
    }
}

fn uniform_in(rng: &mut ChaCha8Rng, rec: &Rectangle) -> Point {
    Point::new(
        rng.gen_range(rec.x_min..rec.x_max),
        rng.gen_range(rec.y_min..rec.y_max),
    )
}

fn sample_nodes(model: &StochasticNetworkModel, rng: &mut ChaCha8Rng) -> Vec<Point> {
    let rec = model.rec();
    let mut nodes = Vec::new();
    match model.intensity() {
        IntensityField::Homogeneous(rate) => {
            let n = poisson_count(rng, rate * rec.area());
            nodes.extend((0..n).map(|_| uniform_in(rng, rec)));
        }
        IntensityField::GaussianMixture {
            background,
            hotspots,
        } => {
            let n = poisson_count(rng, background * rec.area());
            nodes.extend((0..n).map(|_| uniform_in(rng, rec)));
            // the restriction of each planar Gaussian process to `rec`
            for h in hotspots {
                let n = poisson_count(rng, h.mass);
                let normal = Normal::new(0.0, h.sigma).expect("validated sigma");
                for _ in 0..n {
                    let p = Point::new(
                        h.center.x + normal.sample(rng),
                        h.center.y + normal.sample(rng),
                    );
                    if rec.contains(p) {
                        nodes.push(p);
                    }
                }
            }
        }
        IntensityField::Raster(raster) => {
            for row in 0..raster.n_rows() {
                for col in 0..raster.n_cols() {
                    let value = raster.get(row, col);
                    if value == 0.0 {
                        continue;
                    }
                    if let Some(cell) = raster.cell_rect(row, col).intersection(rec) {
                        let n = poisson_count(rng, value * cell.area());
                        nodes.extend((0..n).map(|_| uniform_in(rng, &cell)));
                    }
                }
            }
        }
    }
    nodes
}

fn sample_with_rng(model: &StochasticNetworkModel, rng: &mut ChaCha8Rng, seed: u64) -> ConcreteNetwork {
    let nodes = sample_nodes(model, rng);
    let mut links = Vec::new();
    let link = model.link();
    let capacity = model.capacity();
    for a in 0..nodes.len() {
        for b in (a + 1)..nodes.len() {
            let p = link.value(nodes[a], nodes[b]);
            if p < LINK_PROBABILITY_FLOOR {
                continue;
            }
            if rng.gen::<f64>() < p {
                let c = capacity.sample(nodes[a].dist(nodes[b]), rng.gen::<f64>());
                links.push(Link { a, b, capacity: c });
            }
        }
    }
    ConcreteNetwork { nodes, links, seed }
}

fn check_node_budget(model: &StochasticNetworkModel) -> Result<()> {
    let expected = model.intensity().mass_bound(model.rec());
    if expected > model.node_budget() {
        return Err(Error::ExpectedCountOverflow {
            expected,
            budget: model.node_budget(),
        });
    }
    Ok(())
}

impl StochasticNetworkModel {
    /// Draws one network: Poisson nodes over the rectangle, independent links,
    /// capacities from the capacity law.
    pub fn sample_network(&self, seed: u64) -> Result<ConcreteNetwork> {
        check_node_budget(self)?;
        Ok(sample_with_rng(self, &mut stream_rng(seed, 0), seed))
    }
}

pub fn sample_network(model: &StochasticNetworkModel, seed: u64) -> Result<ConcreteNetwork> {
    model.sample_network(seed)
}

pub fn pair_class_counts(net: &ConcreteNetwork, cut: &CircularCut) -> ClassCounts {
    let mut counts = ClassCounts::default();
    for l in &net.links {
        match classify_link(net.nodes[l.a], net.nodes[l.b], cut) {
            LinkClass::Alpha => counts.alpha += 1,
            LinkClass::Beta => counts.beta += 1,
            LinkClass::Gamma => counts.gamma += 1,
            LinkClass::Untouched => counts.untouched += 1,
        }
    }
    counts
}

/// Destroyed capacity of `net` under `cut`, by class.
pub fn destroyed_capacity(net: &ConcreteNetwork, cut: &CircularCut) -> PerClass {
    let mut out = PerClass {
        alpha: 0.0,
        beta: 0.0,
        gamma: 0.0,
    };
    for l in &net.links {
        match classify_link(net.nodes[l.a], net.nodes[l.b], cut) {
            LinkClass::Alpha => out.alpha += l.capacity,
            LinkClass::Beta => out.beta += l.capacity,
            LinkClass::Gamma => out.gamma += l.capacity,
            LinkClass::Untouched => {}
        }
    }
    out
}

/// Per-sample records for samples `0..n_samples` of the run seeded `seed`.
pub fn sample_records(
    model: &StochasticNetworkModel,
    cut: &CircularCut,
    n_samples: usize,
    seed: u64,
) -> Result<Vec<SampleRecord>> {
    check_node_budget(model)?;
    Ok((0..n_samples as u64)
        .into_par_iter()
        .map(|index| {
            let mut rng = stream_rng(seed, index);
            let net = sample_with_rng(model, &mut rng, seed);
            let d = destroyed_capacity(&net, cut);
            SampleRecord {
                index,
                nodes: net.nodes.len(),
                links: net.links.len(),
                alpha: d.alpha,
                beta: d.beta,
                gamma: d.gamma,
            }
        })
        .collect())
}

/// Empirical TEC of `cut` over `n_samples` independent networks.
pub fn empirical_tec(
    model: &StochasticNetworkModel,
    cut: &CircularCut,
    n_samples: usize,
    seed: u64,
) -> Result<McEstimate> {
    if n_samples < 2 {
        return Err(Error::InvalidModel(format!(
            "need at least two samples, got {n_samples}"
        )));
    }
    Ok(McEstimate::from_records(&sample_records(model, cut, n_samples, seed)?))
}
