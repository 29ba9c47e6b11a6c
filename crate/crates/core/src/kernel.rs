//! Tabulation of distance-only functions on a uniform knot grid.

/// Knot count used for kernel tables.
pub const KERNEL_KNOTS: usize = 4096;

/// Piecewise-linear interpolant of a function on `[0, max_distance]`.
#[derive(Clone, Debug, PartialEq)]
pub struct DistanceTable {
    step: f64,
    values: Vec<f64>,
}

impl DistanceTable {
    pub fn build(max_distance: f64, knots: usize, f: impl Fn(f64) -> f64) -> Self {
        let knots = knots.max(2);
        let step = max_distance / (knots - 1) as f64;
        let values = (0..knots).map(|k| f(k as f64 * step)).collect();
        Self { step, values }
    }

    pub fn max_distance(&self) -> f64 {
        self.step * (self.values.len() - 1) as f64
    }

    /// Interpolated value; clamps outside the tabulated range.
    #[inline]
    pub fn eval(&self, d: f64) -> f64 {
        let last = self.values.len() - 1;
        let s = d / self.step;
        if !(s > 0.0) {
            return self.values[0];
        }
        let i = s.floor() as usize;
        if i >= last {
            return self.values[last];
        }
        let t = s - i as f64;
        self.values[i] * (1.0 - t) + self.values[i + 1] * t
    }
}
