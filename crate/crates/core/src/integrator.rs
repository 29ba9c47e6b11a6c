//! Expected damage of a cut at a fixed location.
//!
//! Intersected links split into three disjoint classes: both ends inside the
//! disk (alpha), one end inside (beta), and both ends outside with the segment
//! crossing the disk (gamma). Their expected capacities are
//!
//! ```text
//! alpha = 1/2 ∫_D ∫_D f(u) f(v) g(u,v)
//! beta  =     ∫_{Rec-D} ∫_D f(u) f(v) g(u,v)
//! gamma = 1/2 ∫_{Rec-D} f(u) ∫_{K_u} f(v) g(u,v)
//! ```
//!
//! where `K_u` is the shadow the disk casts from `u`. All three are evaluated
//! with the midpoint rule on one grid; a square belongs to the disk iff its
//! sample point does.
//!
//! Per-source partial sums are always reduced in index order, so results do
//! not depend on the number of worker threads.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geometry::{CircularCut, Point, ShadowRegion};
use crate::grid::{compute_grid, AccuracyBudget, IntegrationGrid};
use crate::model::{Kernel, StochasticNetworkModel};

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct DamageBreakdown {
    pub alpha: f64,
    pub beta: f64,
    pub gamma: f64,
    /// `alpha + beta + gamma`.
    pub total: f64,
    pub budget: AccuracyBudget,
    pub delta: f64,
    pub cut: CircularCut,
}

/// Grid-bound evaluator. Building it samples `f` once; each
/// [`DamageEvaluator::evaluate`] call only reclassifies squares against the
/// new disk, so many cuts of any radius above `2 * delta` can share it.
#[derive(Clone, Debug)]
pub struct DamageEvaluator<'m> {
    model: &'m StochasticNetworkModel,
    grid: IntegrationGrid,
    budget: AccuracyBudget,
    points: Vec<Point>,
    /// `f(p) * area(p)` per sample point.
    weights: Vec<f64>,
    parallel: bool,
}

impl<'m> DamageEvaluator<'m> {
    pub fn new(model: &'m StochasticNetworkModel, grid: IntegrationGrid, budget: AccuracyBudget) -> Self {
        let points: Vec<Point> = grid.points().collect();
        let weights = points
            .iter()
            .zip(grid.areas())
            .map(|(&p, a)| model.intensity().value(p) * a)
            .collect();
        Self {
            model,
            grid,
            budget,
            points,
            weights,
            parallel: true,
        }
    }

    /// Evaluator on the grid `compute_grid` picks for `radius` and `budget`.
    pub fn for_budget(
        model: &'m StochasticNetworkModel,
        radius: f64,
        budget: &AccuracyBudget,
    ) -> Result<Self> {
        let grid = compute_grid(model.rec(), radius, budget, model)?;
        Ok(Self::new(model, grid, *budget))
    }

    /// Toggles the parallel loop over source points.
    pub fn with_parallel(mut self, parallel: bool) -> Self {
        self.parallel = parallel;
        self
    }

    pub fn grid(&self) -> &IntegrationGrid {
        &self.grid
    }

    pub fn model(&self) -> &StochasticNetworkModel {
        self.model
    }

    pub fn budget(&self) -> &AccuracyBudget {
        &self.budget
    }

    fn check_cut(&self, cut: &CircularCut) -> Result<()> {
        cut.ensure_within(self.model.rec())?;
        if self.grid.delta() >= cut.radius / 2.0 {
            return Err(Error::GridTooCoarse {
                delta: self.grid.delta(),
                radius: cut.radius,
            });
        }
        Ok(())
    }

    pub fn evaluate(&self, cut: &CircularCut) -> Result<DamageBreakdown> {
        self.check_cut(cut)?;
        let kernel = self.model.kernel();
        let inside_mask: Vec<bool> = self.points.iter().map(|&p| cut.contains(p)).collect();
        let inside: Vec<usize> = (0..self.points.len())
            .filter(|&i| inside_mask[i] && self.weights[i] > 0.0)
            .collect();
        let outside: Vec<usize> = (0..self.points.len())
            .filter(|&i| !inside_mask[i] && self.weights[i] > 0.0)
            .collect();

        let alpha_term = |&i: &usize| -> f64 {
            let u = self.points[i];
            self.weights[i] * self.sum_over(kernel, u, &inside)
        };
        let outer_term = |&i: &usize| -> (f64, f64) {
            let u = self.points[i];
            let w = self.weights[i];
            let beta = self.sum_over(kernel, u, &inside);
            let gamma = self.shadow_sum(kernel, u, cut, &inside_mask);
            (w * beta, w * gamma)
        };

        let (alpha_parts, outer_parts): (Vec<f64>, Vec<(f64, f64)>) = if self.parallel {
            (
                inside.par_iter().map(alpha_term).collect(),
                outside.par_iter().map(outer_term).collect(),
            )
        } else {
            (
                inside.iter().map(alpha_term).collect(),
                outside.iter().map(outer_term).collect(),
            )
        };

        let alpha = 0.5 * alpha_parts.iter().sum::<f64>();
        let beta = outer_parts.iter().map(|p| p.0).sum::<f64>();
        let gamma = 0.5 * outer_parts.iter().map(|p| p.1).sum::<f64>();
        Ok(DamageBreakdown {
            alpha,
            beta,
            gamma,
            total: alpha + beta + gamma,
            budget: self.budget,
            delta: self.grid.delta(),
            cut: *cut,
        })
    }

    /// TEC totals for cuts of `radius` centered at each of `centers`,
    /// evaluated in parallel across centers.
    pub fn totals_at(&self, centers: &[Point], radius: f64) -> Result<Vec<f64>> {
        let serial = self.clone().with_parallel(false);
        centers
            .par_iter()
            .map(|&c| {
                let cut = CircularCut::new(c, radius)?;
                serial.evaluate(&cut).map(|b| b.total)
            })
            .collect()
    }

    /// `∫_{K_u} f(v) g(u, v) dv` on this grid.
    pub fn gamma_from(&self, u: Point, cut: &CircularCut) -> Result<f64> {
        if cut.contains(u) {
            return Err(Error::SourceInsideDisk { x: u.x, y: u.y });
        }
        let inside_mask: Vec<bool> = self.points.iter().map(|&p| cut.contains(p)).collect();
        Ok(self.shadow_sum(self.model.kernel(), u, cut, &inside_mask))
    }

    #[inline]
    fn sum_over(&self, kernel: &Kernel, u: Point, targets: &[usize]) -> f64 {
        targets
            .iter()
            .map(|&j| self.weights[j] * kernel.eval(u, self.points[j]))
            .sum()
    }

    /// Sum of `w(v) g(u, v)` over sample points in the shadow of the disk
    /// from `u`. Rows are scanned only across the tangent cone.
    fn shadow_sum(&self, kernel: &Kernel, u: Point, cut: &CircularCut, inside: &[bool]) -> f64 {
        let shadow = match ShadowRegion::new(u, *cut, *self.model.rec()) {
            Ok(s) => s,
            Err(_) => return 0.0,
        };
        let n_cols = self.grid.n_cols();
        let mut sum = 0.0;
        for (row, &y) in self.grid.row_centers().iter().enumerate() {
            let Some((x_lo, x_hi)) = shadow.cone_x_range(y) else {
                continue;
            };
            let Some(cols) = self.grid.columns_covering(x_lo, x_hi) else {
                continue;
            };
            let base = row * n_cols;
            for idx in (base + cols.start)..(base + cols.end) {
                let w = self.weights[idx];
                if w == 0.0 || inside[idx] {
                    continue;
                }
                let v = self.points[idx];
                if shadow.contains_outside(v) {
                    sum += w * kernel.eval(u, v);
                }
            }
        }
        sum
    }
}

/// Expected capacity destroyed by `cut`, on the grid chosen for `budget`.
pub fn edcc(
    model: &StochasticNetworkModel,
    cut: &CircularCut,
    budget: &AccuracyBudget,
) -> Result<DamageBreakdown> {
    DamageEvaluator::for_budget(model, cut.radius, budget)?.evaluate(cut)
}

/// Midpoint value of `∫_{K_u} f(v) g(u, v) dv` for a source `u` outside the
/// disk.
pub fn evaluate_gamma(
    model: &StochasticNetworkModel,
    u: Point,
    cut: &CircularCut,
    grid: &IntegrationGrid,
) -> Result<f64> {
    DamageEvaluator::new(model, grid.clone(), AccuracyBudget::additive(1.0)).gamma_from(u, cut)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::Rectangle;
    use crate::model::{CapacityLaw, IntensityField, LinkProbability};

    fn homogeneous(rate: f64, size: f64) -> StochasticNetworkModel {
        StochasticNetworkModel::new(
            Rectangle::new(0.0, size, 0.0, size).unwrap(),
            IntensityField::Homogeneous(rate),
            LinkProbability::Constant(1.0),
            CapacityLaw::Constant(1.0),
        )
        .unwrap()
    }

    #[test]
    fn empty_network_has_no_damage() {
        let model = homogeneous(0.0, 6.0);
        let cut = CircularCut::new(Point::new(3.0, 3.0), 1.0).unwrap();
        let b = edcc(&model, &cut, &AccuracyBudget::additive(1.0).with_delta(0.2)).unwrap();
        assert_eq!((b.alpha, b.beta, b.gamma, b.total), (0.0, 0.0, 0.0, 0.0));
    }

    #[test]
    fn alpha_is_half_squared_disk_mass_for_flat_kernel() {
        let model = homogeneous(1.0, 6.0);
        let cut = CircularCut::new(Point::new(3.0, 3.0), 1.0).unwrap();
        let b = edcc(&model, &cut, &AccuracyBudget::additive(1.0).with_delta(0.1)).unwrap();
        let grid = IntegrationGrid::new(*model.rec(), 0.1).unwrap();
        let disk_area: f64 = grid
            .points()
            .zip(grid.areas())
            .filter(|(p, _)| cut.contains(*p))
            .map(|(_, a)| a)
            .sum();
        assert!((b.alpha - 0.5 * disk_area * disk_area).abs() < 1e-9 * b.alpha);
        assert_eq!(b.total, b.alpha + b.beta + b.gamma);
    }

    #[test]
    fn rejects_misplaced_cuts() {
        let model = homogeneous(1.0, 6.0);
        let budget = AccuracyBudget::additive(1.0).with_delta(0.2);
        let cut = CircularCut::new(Point::new(0.5, 3.0), 1.0).unwrap();
        assert!(matches!(
            edcc(&model, &cut, &budget),
            Err(Error::CutOutsideRegion { .. })
        ));
        let eval = DamageEvaluator::for_budget(&model, 1.0, &budget).unwrap();
        let small = CircularCut::new(Point::new(3.0, 3.0), 0.3).unwrap();
        assert!(matches!(
            eval.evaluate(&small),
            Err(Error::GridTooCoarse { .. })
        ));
    }

    #[test]
    fn gamma_source_inside_fails() {
        let model = homogeneous(1.0, 6.0);
        let grid = IntegrationGrid::new(*model.rec(), 0.2).unwrap();
        let cut = CircularCut::new(Point::new(3.0, 3.0), 1.0).unwrap();
        assert!(matches!(
            evaluate_gamma(&model, Point::new(3.2, 3.0), &cut, &grid),
            Err(Error::SourceInsideDisk { .. })
        ));
    }

    #[test]
    fn serial_and_parallel_agree_bitwise() {
        let model = homogeneous(1.5, 5.0);
        let cut = CircularCut::new(Point::new(2.3, 2.9), 1.1).unwrap();
        let budget = AccuracyBudget::additive(1.0).with_delta(0.15);
        let par = DamageEvaluator::for_budget(&model, 1.1, &budget).unwrap();
        let ser = par.clone().with_parallel(false);
        assert_eq!(par.evaluate(&cut).unwrap(), ser.evaluate(&cut).unwrap());
    }
}
