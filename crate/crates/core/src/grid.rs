//! Integration grids: selection of the grid constant from an accuracy budget,
//! midpoint sample points, and square-versus-disk classification.

use std::ops::Range;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geometry::{CircularCut, Point, Rectangle, GEOM_TOL};
use crate::model::StochasticNetworkModel;

/// Default maximum number of sample points in one grid.
pub const DEFAULT_POINT_BUDGET: usize = 10_000_000;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum BudgetMode {
    /// `|C~ - C| <= eps` with `eps = c0 sqrt(delta)`.
    Additive,
    /// `(1 - e)C - eps <= C~ <= (1 + e)C + eps` with both terms `O(sqrt(delta))`.
    Combined,
}

/// Accuracy request that determines the grid constant.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct AccuracyBudget {
    pub additive_eps: f64,
    /// Zero in additive mode.
    pub multiplicative_eps: f64,
    /// Calibration constant of `eps = c0 sqrt(delta)`. Derived from the model
    /// when absent.
    pub c0: Option<f64>,
    /// Leading constant of the derived error bounds.
    pub bound_const: f64,
    pub mode: BudgetMode,
    /// Upper limit on the grid constant, applied after the budget inversion.
    pub delta_cap: Option<f64>,
    /// Fixed grid constant; the budget is then only reported, not inverted.
    pub delta_override: Option<f64>,
    pub point_budget: usize,
}

impl AccuracyBudget {
    pub fn additive(eps: f64) -> Self {
        Self {
            additive_eps: eps,
            multiplicative_eps: 0.0,
            c0: None,
            bound_const: 1.0,
            mode: BudgetMode::Additive,
            delta_cap: None,
            delta_override: None,
            point_budget: DEFAULT_POINT_BUDGET,
        }
    }

    pub fn combined(additive_eps: f64, multiplicative_eps: f64) -> Self {
        Self {
            multiplicative_eps,
            mode: BudgetMode::Combined,
            ..Self::additive(additive_eps)
        }
    }

    pub fn with_c0(mut self, c0: f64) -> Self {
        self.c0 = Some(c0);
        self
    }

    pub fn with_delta(mut self, delta: f64) -> Self {
        self.delta_override = Some(delta);
        self
    }

    pub fn with_delta_cap(mut self, cap: f64) -> Self {
        self.delta_cap = Some(self.delta_cap.map_or(cap, |c| c.min(cap)));
        self
    }

    pub fn with_point_budget(mut self, points: usize) -> Self {
        self.point_budget = points;
        self
    }

    /// Both error terms halved; overrides and caps carry over.
    pub fn halved(&self) -> Self {
        Self {
            additive_eps: self.additive_eps / 2.0,
            multiplicative_eps: self.multiplicative_eps / 2.0,
            ..*self
        }
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.additive_eps.is_finite() && self.additive_eps > 0.0) {
            return Err(Error::InfeasibleBudget(format!(
                "additive epsilon must be positive, got {}",
                self.additive_eps
            )));
        }
        if self.mode == BudgetMode::Combined
            && !(self.multiplicative_eps.is_finite() && self.multiplicative_eps > 0.0)
        {
            return Err(Error::InfeasibleBudget(format!(
                "multiplicative epsilon must be positive in combined mode, got {}",
                self.multiplicative_eps
            )));
        }
        if let Some(c0) = self.c0 {
            if !(c0.is_finite() && c0 > 0.0) {
                return Err(Error::InfeasibleBudget(format!("c0 must be positive, got {c0}")));
            }
        }
        if !(self.bound_const.is_finite() && self.bound_const > 0.0) {
            return Err(Error::InfeasibleBudget("bound constant must be positive".into()));
        }
        if let Some(d) = self.delta_override.or(self.delta_cap) {
            if !(d.is_finite() && d > 0.0) {
                return Err(Error::InfeasibleBudget(format!("grid constant {d}")));
            }
        }
        Ok(())
    }

    /// `c0` in effect: the override, or `const * D^2 * |Rec| * T / sqrt(r)`.
    pub fn resolved_c0(&self, rec: &Rectangle, radius: f64, model: &StochasticNetworkModel) -> f64 {
        self.c0.unwrap_or_else(|| {
            let diag = rec.diagonal();
            self.bound_const * diag * diag * rec.area() * model.max_bound() / radius.sqrt()
        })
    }

    /// Constants `(c1, c2)` of the combined bound
    /// `eps = c1 sqrt(delta)`, `e = c2 sqrt(delta)`.
    pub fn combined_constants(
        &self,
        rec: &Rectangle,
        radius: f64,
        model: &StochasticNetworkModel,
    ) -> (f64, f64) {
        let diag = rec.diagonal();
        let a = self.bound_const * diag * diag / radius.sqrt();
        let c1 = a * model.variation_bound() * radius * diag * rec.area();
        let c2 = a * rec.area() / (2.0 * radius);
        (c1, c2)
    }

    /// Error terms guaranteed at grid constant `delta`:
    /// `(additive, multiplicative)`.
    pub fn implied_eps(
        &self,
        delta: f64,
        rec: &Rectangle,
        radius: f64,
        model: &StochasticNetworkModel,
    ) -> (f64, f64) {
        match self.mode {
            BudgetMode::Additive => (self.resolved_c0(rec, radius, model) * delta.sqrt(), 0.0),
            BudgetMode::Combined => {
                let (c1, c2) = self.combined_constants(rec, radius, model);
                (c1 * delta.sqrt(), c2 * delta.sqrt())
            }
        }
    }

    /// Grid constant for cuts of `radius` over `rec`. Always below `radius / 2`.
    pub fn select_delta(
        &self,
        rec: &Rectangle,
        radius: f64,
        model: &StochasticNetworkModel,
    ) -> Result<f64> {
        self.validate()?;
        let cap = radius / 2.0 - GEOM_TOL;
        if let Some(delta) = self.delta_override {
            if delta >= radius / 2.0 {
                return Err(Error::GridTooCoarse { delta, radius });
            }
            return Ok(delta);
        }
        let from_budget = match self.mode {
            BudgetMode::Additive => {
                let c0 = self.resolved_c0(rec, radius, model);
                (self.additive_eps / c0).powi(2)
            }
            BudgetMode::Combined => {
                let (c1, c2) = self.combined_constants(rec, radius, model);
                let additive = if c1 > 0.0 {
                    (self.additive_eps / c1).powi(2)
                } else {
                    f64::INFINITY
                };
                additive.min((self.multiplicative_eps / c2).powi(2))
            }
        };
        let delta = from_budget
            .min(cap)
            .min(self.delta_cap.unwrap_or(f64::INFINITY));
        if !(delta > 0.0) {
            return Err(Error::InfeasibleBudget(format!(
                "budget yields a non-positive grid constant {delta}"
            )));
        }
        Ok(delta)
    }
}

/// Grid constant `delta` for cuts of radius `radius` and the integration grid
/// over the whole rectangle.
pub fn compute_grid(
    rec: &Rectangle,
    radius: f64,
    budget: &AccuracyBudget,
    model: &StochasticNetworkModel,
) -> Result<IntegrationGrid> {
    if !(radius.is_finite() && radius > 0.0) {
        return Err(Error::InvalidRadius(radius));
    }
    if rec.inset(radius).is_none() {
        return Err(Error::DegenerateRec { radius });
    }
    let delta = budget.select_delta(rec, radius, model)?;
    let points = grid_dimension(rec.width(), delta) as f64 * grid_dimension(rec.height(), delta) as f64;
    if points > budget.point_budget as f64 {
        return Err(Error::InfeasibleBudget(format!(
            "grid constant {delta:e} needs {points:e} points, budget is {}",
            budget.point_budget
        )));
    }
    IntegrationGrid::new(*rec, delta)
}

fn grid_dimension(length: f64, delta: f64) -> usize {
    let n = (length / delta - 1e-9).ceil();
    if n.is_finite() && n >= 1.0 {
        n as usize
    } else {
        1
    }
}

/// Square lattice of side `delta` anchored at the lower-left corner of `rec`.
/// The last column and row are clipped to `rec`; their sample points are the
/// centroids of the clipped squares.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct IntegrationGrid {
    rec: Rectangle,
    delta: f64,
    xs: Vec<f64>,
    ys: Vec<f64>,
    widths: Vec<f64>,
    heights: Vec<f64>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum SquareClass {
    Inside,
    Outside,
    Boundary,
}

fn axis(min: f64, max: f64, delta: f64) -> (Vec<f64>, Vec<f64>) {
    let n = grid_dimension(max - min, delta);
    let mut centers = Vec::with_capacity(n);
    let mut sizes = Vec::with_capacity(n);
    for i in 0..n {
        let lo = min + i as f64 * delta;
        let hi = if i + 1 == n { max } else { min + (i + 1) as f64 * delta };
        centers.push(0.5 * (lo + hi));
        sizes.push(hi - lo);
    }
    (centers, sizes)
}

impl IntegrationGrid {
    pub fn new(rec: Rectangle, delta: f64) -> Result<Self> {
        if !(delta.is_finite() && delta > 0.0) {
            return Err(Error::InfeasibleBudget(format!("grid constant {delta}")));
        }
        let (xs, widths) = axis(rec.x_min, rec.x_max, delta);
        let (ys, heights) = axis(rec.y_min, rec.y_max, delta);
        Ok(Self {
            rec,
            delta,
            xs,
            ys,
            widths,
            heights,
        })
    }

    pub fn rec(&self) -> &Rectangle {
        &self.rec
    }

    pub fn delta(&self) -> f64 {
        self.delta
    }

    pub fn n_cols(&self) -> usize {
        self.xs.len()
    }

    pub fn n_rows(&self) -> usize {
        self.ys.len()
    }

    pub fn len(&self) -> usize {
        self.xs.len() * self.ys.len()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// Sample x coordinates by column.
    pub fn column_centers(&self) -> &[f64] {
        &self.xs
    }

    /// Sample y coordinates by row; row 0 is the lowest.
    pub fn row_centers(&self) -> &[f64] {
        &self.ys
    }

    #[inline]
    pub fn index(&self, row: usize, col: usize) -> usize {
        row * self.xs.len() + col
    }

    #[inline]
    pub fn row_col(&self, index: usize) -> (usize, usize) {
        (index / self.xs.len(), index % self.xs.len())
    }

    #[inline]
    pub fn point(&self, index: usize) -> Point {
        let (r, c) = self.row_col(index);
        Point::new(self.xs[c], self.ys[r])
    }

    #[inline]
    pub fn area(&self, index: usize) -> f64 {
        let (r, c) = self.row_col(index);
        self.widths[c] * self.heights[r]
    }

    /// Sample points in row-major order.
    pub fn points(&self) -> impl ExactSizeIterator<Item = Point> + '_ {
        (0..self.len()).map(move |i| self.point(i))
    }

    pub fn areas(&self) -> impl ExactSizeIterator<Item = f64> + '_ {
        (0..self.len()).map(move |i| self.area(i))
    }

    pub fn square(&self, row: usize, col: usize) -> Rectangle {
        let x_min = self.rec.x_min + col as f64 * self.delta;
        let y_min = self.rec.y_min + row as f64 * self.delta;
        Rectangle {
            x_min,
            x_max: x_min + self.widths[col],
            y_min,
            y_max: y_min + self.heights[row],
        }
    }

    /// Splits the index range into at most `parts` contiguous chunks.
    pub fn partition(&self, parts: usize) -> Vec<Range<usize>> {
        let n = self.len();
        let parts = parts.clamp(1, n.max(1));
        let chunk = n.div_ceil(parts);
        (0..n).step_by(chunk.max(1)).map(|s| s..(s + chunk).min(n)).collect()
    }

    /// Columns whose sample x may fall in `[x_lo, x_hi]`, widened by one
    /// column on each side.
    pub fn columns_covering(&self, x_lo: f64, x_hi: f64) -> Option<Range<usize>> {
        let n = self.xs.len() as f64;
        let lo = ((x_lo - self.rec.x_min) / self.delta - 1.0).floor().clamp(0.0, n);
        let hi = ((x_hi - self.rec.x_min) / self.delta + 1.0).floor().clamp(-1.0, n - 1.0);
        if hi < lo {
            return None;
        }
        Some(lo as usize..hi as usize + 1)
    }

    /// Position of a square relative to the disk, by its (clipped) corners.
    pub fn classify_square(&self, row: usize, col: usize, cut: &CircularCut) -> SquareClass {
        let sq = self.square(row, col);
        if sq.corners().iter().all(|&c| cut.contains(c)) {
            return SquareClass::Inside;
        }
        let nearest = Point::new(
            cut.center.x.clamp(sq.x_min, sq.x_max),
            cut.center.y.clamp(sq.y_min, sq.y_max),
        );
        if nearest.dist(cut.center) > cut.radius + GEOM_TOL {
            SquareClass::Outside
        } else {
            SquareClass::Boundary
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::{CapacityLaw, IntensityField, LinkProbability};

    fn model(rec: Rectangle) -> StochasticNetworkModel {
        StochasticNetworkModel::new(
            rec,
            IntensityField::Homogeneous(1.0),
            LinkProbability::Constant(1.0),
            CapacityLaw::Constant(1.0),
        )
        .unwrap()
    }

    #[test]
    fn unit_square_tiling() {
        let rec = Rectangle::new(0.0, 1.0, 0.0, 1.0).unwrap();
        let grid = IntegrationGrid::new(rec, 0.25).unwrap();
        assert_eq!((grid.n_cols(), grid.n_rows()), (4, 4));
        assert_eq!(grid.len(), 16);
        assert_eq!(grid.point(0), Point::new(0.125, 0.125));
        assert_eq!(grid.point(15), Point::new(0.875, 0.875));
        assert_eq!(grid.areas().sum::<f64>(), 1.0);
    }

    #[test]
    fn clipped_edges_keep_total_area() {
        let rec = Rectangle::new(0.0, 1.0, 0.0, 0.7).unwrap();
        let grid = IntegrationGrid::new(rec, 0.3).unwrap();
        assert_eq!((grid.n_cols(), grid.n_rows()), (4, 3));
        let last = grid.point(grid.len() - 1);
        assert!((last.x - 0.95).abs() < 1e-12);
        assert!((last.y - 0.65).abs() < 1e-12);
        assert!((grid.areas().sum::<f64>() - 0.7).abs() < 1e-12);
    }

    #[test]
    fn delta_from_budget() {
        let rec = Rectangle::new(0.0, 10.0, 0.0, 10.0).unwrap();
        let m = model(rec);
        let budget = AccuracyBudget::additive(0.2).with_c0(1.0);
        let grid = compute_grid(&rec, 1.0, &budget, &m).unwrap();
        assert!((grid.delta() - 0.04).abs() < 1e-15);

        let huge = AccuracyBudget::additive(1e9).with_c0(1.0);
        let grid = compute_grid(&rec, 1.0, &huge, &m).unwrap();
        assert_eq!(grid.delta(), 0.5 - GEOM_TOL);
    }

    #[test]
    fn default_c0_is_infeasible_at_desk_scale() {
        let rec = Rectangle::new(0.0, 10.0, 0.0, 10.0).unwrap();
        let m = model(rec);
        let res = compute_grid(&rec, 1.0, &AccuracyBudget::additive(0.1), &m);
        assert!(matches!(res, Err(Error::InfeasibleBudget(_))));
    }

    #[test]
    fn degenerate_and_coarse() {
        let rec = Rectangle::new(0.0, 2.0, 0.0, 10.0).unwrap();
        let m = model(rec);
        let budget = AccuracyBudget::additive(1.0).with_delta(0.1);
        assert!(matches!(
            compute_grid(&rec, 1.0, &budget, &m),
            Err(Error::DegenerateRec { .. })
        ));
        let rec = Rectangle::new(0.0, 10.0, 0.0, 10.0).unwrap();
        let budget = AccuracyBudget::additive(1.0).with_delta(0.5);
        assert!(matches!(
            compute_grid(&rec, 1.0, &budget, &m),
            Err(Error::GridTooCoarse { .. })
        ));
    }

    #[test]
    fn combined_mode_uses_both_constants() {
        let rec = Rectangle::new(0.0, 4.0, 0.0, 4.0).unwrap();
        let m = model(rec).with_bounds(Some(2.0), None).unwrap();
        let b = AccuracyBudget::combined(1.0, 0.5).with_point_budget(usize::MAX);
        let (c1, c2) = b.combined_constants(&rec, 1.0, &m);
        let delta = b.select_delta(&rec, 1.0, &m).unwrap();
        let expected = (1.0 / c1).powi(2).min((0.5 / c2).powi(2));
        assert!((delta - expected).abs() <= 1e-15 * expected);
        let (eps, mult) = b.implied_eps(delta, &rec, 1.0, &m);
        assert!(eps <= 1.0 + 1e-12 && mult <= 0.5 + 1e-12);
        assert!(AccuracyBudget::combined(1.0, 0.0).validate().is_err());
    }

    #[test]
    fn square_classification() {
        let rec = Rectangle::new(0.0, 10.0, 0.0, 10.0).unwrap();
        let grid = IntegrationGrid::new(rec, 0.4).unwrap();
        let cut = CircularCut::new(Point::new(5.0, 5.0), 1.0).unwrap();
        assert_eq!(grid.classify_square(0, 0, &cut), SquareClass::Outside);
        // square [4.8, 5.2]^2 holds the center
        assert_eq!(grid.classify_square(12, 12, &cut), SquareClass::Inside);
        // square [5.6, 6.0] x [4.8, 5.2] crosses the circle
        assert_eq!(grid.classify_square(12, 14, &cut), SquareClass::Boundary);
    }

    #[test]
    fn partition_covers_all_indices() {
        let rec = Rectangle::new(0.0, 1.0, 0.0, 1.0).unwrap();
        let grid = IntegrationGrid::new(rec, 0.1).unwrap();
        let parts = grid.partition(7);
        assert!(parts.len() <= 7);
        assert_eq!(parts.first().unwrap().start, 0);
        assert_eq!(parts.last().unwrap().end, 100);
        for w in parts.windows(2) {
            assert_eq!(w[0].end, w[1].start);
        }
    }

    #[test]
    fn column_cover_is_conservative() {
        let rec = Rectangle::new(0.0, 1.0, 0.0, 1.0).unwrap();
        let grid = IntegrationGrid::new(rec, 0.1).unwrap();
        let r = grid.columns_covering(0.33, 0.57).unwrap();
        for (i, &x) in grid.column_centers().iter().enumerate() {
            if (0.33..=0.57).contains(&x) {
                assert!(r.contains(&i));
            }
        }
        assert!(grid.columns_covering(2.0, 3.0).is_none());
        assert_eq!(
            grid.columns_covering(f64::NEG_INFINITY, f64::INFINITY),
            Some(0..10)
        );
    }
}
