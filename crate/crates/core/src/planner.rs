//! Sweeps over cut centers: sensitivity maps, the approximate worst cut, and
//! the expected damage of a randomly placed cut.
//!
//! Centers are sampled on a grid over the admissible region `Rec_r` (disks
//! must fit inside the rectangle). The per-cut evaluations all share one
//! integration grid, the one chosen for half the accuracy budget; the center
//! grid uses the same constant.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geometry::{CircularCut, Point, Rectangle};
use crate::grid::{AccuracyBudget, IntegrationGrid};
use crate::integrator::DamageEvaluator;
use crate::model::{IntensityField, StochasticNetworkModel};

/// Tolerance on the total mass of an attack density.
pub const DENSITY_NORMALIZATION_TOL: f64 = 1e-6;

/// TEC of a cut of fixed radius at every center of a grid over `Rec_r`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SensitivityMap {
    pub rec_r: Rectangle,
    pub radius: f64,
    pub delta: f64,
    pub budget: AccuracyBudget,
    centers: IntegrationGrid,
    /// Row-major, row 0 lowest, matching `centers`.
    values: Vec<f64>,
    pub argmax: Point,
    pub argmax_value: f64,
    /// `(row, col)` of the maximum.
    pub argmax_index: (usize, usize),
}

impl SensitivityMap {
    pub fn new(
        centers: IntegrationGrid,
        values: Vec<f64>,
        radius: f64,
        budget: AccuracyBudget,
    ) -> Result<Self> {
        if values.is_empty() || values.len() != centers.len() {
            return Err(Error::InvalidModel(format!(
                "map has {} values for {} centers",
                values.len(),
                centers.len()
            )));
        }
        // first maximum in row-major order wins ties
        let mut best = 0;
        for (i, &v) in values.iter().enumerate() {
            if v > values[best] {
                best = i;
            }
        }
        Ok(Self {
            rec_r: *centers.rec(),
            radius,
            delta: centers.delta(),
            budget,
            argmax: centers.point(best),
            argmax_value: values[best],
            argmax_index: centers.row_col(best),
            centers,
            values,
        })
    }

    pub fn centers(&self) -> &IntegrationGrid {
        &self.centers
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn n_rows(&self) -> usize {
        self.centers.n_rows()
    }

    pub fn n_cols(&self) -> usize {
        self.centers.n_cols()
    }

    pub fn value(&self, row: usize, col: usize) -> f64 {
        self.values[self.centers.index(row, col)]
    }

    pub fn min_value(&self) -> f64 {
        self.values.iter().copied().fold(f64::INFINITY, f64::min)
    }

    pub fn mean_value(&self) -> f64 {
        self.values.iter().sum::<f64>() / self.values.len() as f64
    }

    /// Area-weighted mean over the admissible region.
    pub fn area_weighted_mean(&self) -> f64 {
        self.weighted_sum() / self.rec_r.area()
    }

    fn weighted_sum(&self) -> f64 {
        self.values
            .iter()
            .zip(self.centers.areas())
            .map(|(v, a)| v * a)
            .sum()
    }
}

fn admissible_region(model: &StochasticNetworkModel, radius: f64) -> Result<Rectangle> {
    if !(radius.is_finite() && radius > 0.0) {
        return Err(Error::InvalidRadius(radius));
    }
    model
        .rec()
        .inset(radius)
        .ok_or(Error::DegenerateRec { radius })
}

/// Sensitivity map on the evaluator's grid: one cut of `radius` at every
/// center of the same-constant grid over `Rec_r`.
pub fn sweep(evaluator: &DamageEvaluator<'_>, radius: f64) -> Result<SensitivityMap> {
    let rec_r = admissible_region(evaluator.model(), radius)?;
    let centers = IntegrationGrid::new(rec_r, evaluator.grid().delta())?;
    let points: Vec<Point> = centers.points().collect();
    let values = evaluator.totals_at(&points, radius)?;
    SensitivityMap::new(centers, values, radius, *evaluator.budget())
}

/// Sensitivity map whose maximum is within `eps` of the worst cut: every
/// evaluation and the center spacing get half the budget each.
pub fn fsl(
    model: &StochasticNetworkModel,
    radius: f64,
    budget: &AccuracyBudget,
) -> Result<SensitivityMap> {
    admissible_region(model, radius)?;
    let evaluator = DamageEvaluator::for_budget(model, radius, &budget.halved())?;
    sweep(&evaluator, radius)
}

pub fn worst_cut(map: &SensitivityMap) -> Result<(CircularCut, f64)> {
    Ok((CircularCut::new(map.argmax, map.radius)?, map.argmax_value))
}

/// Denominator of the uniform random-cut average.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub enum RcceNormalization {
    /// Mean over the admissible centers `Rec_r`.
    #[default]
    AdmissibleRegion,
    /// Grid sum divided by the full rectangle's area.
    FullRectangle,
}

/// Location law of a random cut.
#[derive(Clone, Debug, PartialEq)]
pub enum AttackDistribution {
    Uniform(RcceNormalization),
    Density {
        psi: IntensityField,
        /// Bound on the gradient of `psi`; tightens the grid constant.
        variation_bound: f64,
        /// Rescale `psi` to unit mass on the center grid instead of
        /// rejecting it.
        renormalize: bool,
    },
}

impl AttackDistribution {
    pub fn uniform() -> Self {
        AttackDistribution::Uniform(RcceNormalization::AdmissibleRegion)
    }

    pub fn density(psi: IntensityField, variation_bound: f64) -> Self {
        AttackDistribution::Density {
            psi,
            variation_bound,
            renormalize: false,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct RcceResult {
    pub expected_damage: f64,
    pub delta: f64,
    pub n_centers: usize,
    /// Mass of the attack density on the center grid before any rescaling.
    pub density_mass: f64,
}

/// Expected TEC of a cut of `radius` placed at random according to `dist`.
pub fn rcce(
    model: &StochasticNetworkModel,
    radius: f64,
    budget: &AccuracyBudget,
    dist: &AttackDistribution,
) -> Result<f64> {
    rcce_detailed(model, radius, budget, dist).map(|r| r.expected_damage)
}

pub fn rcce_detailed(
    model: &StochasticNetworkModel,
    radius: f64,
    budget: &AccuracyBudget,
    dist: &AttackDistribution,
) -> Result<RcceResult> {
    let rec_r = admissible_region(model, radius)?;
    let mut half = budget.halved();
    if let AttackDistribution::Density {
        psi,
        variation_bound,
        ..
    } = dist
    {
        if let IntensityField::Raster(r) = psi {
            if !r.extent().contains_rect(&rec_r) {
                return Err(Error::InvalidModel(
                    "attack density does not cover the admissible region".into(),
                ));
            }
        }
        let scale = variation_bound * rec_r.area() * model.tec_bound();
        if budget.delta_override.is_none() && scale > 0.0 {
            half = half.with_delta_cap(budget.additive_eps / (2.0 * scale));
        }
    }
    let evaluator = DamageEvaluator::for_budget(model, radius, &half)?;
    let map = sweep(&evaluator, radius)?;
    let centers = map.centers();
    let (expected_damage, density_mass) = match dist {
        AttackDistribution::Uniform(norm) => {
            let denom = match norm {
                RcceNormalization::AdmissibleRegion => rec_r.area(),
                RcceNormalization::FullRectangle => model.rec().area(),
            };
            (map.weighted_sum() / denom, 1.0)
        }
        AttackDistribution::Density {
            psi, renormalize, ..
        } => {
            let weights: Vec<f64> = centers
                .points()
                .zip(centers.areas())
                .map(|(p, a)| psi.value(p) * a)
                .collect();
            let mass: f64 = weights.iter().sum();
            if !*renormalize && (mass - 1.0).abs() > DENSITY_NORMALIZATION_TOL {
                return Err(Error::UnnormalizedDensity { mass });
            }
            if !(mass > 0.0) {
                return Err(Error::UnnormalizedDensity { mass });
            }
            let sum: f64 = weights.iter().zip(map.values()).map(|(w, v)| w * v).sum();
            (sum / mass, mass)
        }
    };
    Ok(RcceResult {
        expected_damage,
        delta: map.delta,
        n_centers: centers.len(),
        density_mass,
    })
}
