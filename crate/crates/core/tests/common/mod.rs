//! Synthetic population-like density over a 236 x 104 continental extent.
#![allow(dead_code)]

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use tecmap_core::{Point, RasterField};

pub const EXTENT_X: f64 = 236.0;
pub const EXTENT_Y: f64 = 104.0;

/// Dense chain of cities along the north-east edge.
pub const CORRIDOR: [(f64, f64, f64, f64); 5] = [
    (206.0, 70.0, 900.0, 2.2),
    (199.0, 65.0, 350.0, 1.8),
    (193.0, 60.0, 250.0, 1.6),
    (213.0, 76.0, 280.0, 1.8),
    (202.0, 67.5, 200.0, 1.5),
];

const CITIES: [(f64, f64, f64, f64); 8] = [
    (22.0, 38.0, 500.0, 3.0),
    (150.0, 74.0, 450.0, 2.2),
    (118.0, 18.0, 250.0, 2.5),
    (9.0, 62.0, 280.0, 1.6),
    (172.0, 40.0, 120.0, 2.0),
    (60.0, 30.0, 90.0, 2.0),
    (135.0, 50.0, 80.0, 2.0),
    (16.0, 92.0, 110.0, 1.6),
];

pub struct Population {
    bumps: Vec<(f64, f64, f64, f64)>,
}

impl Population {
    pub fn new(seed: u64) -> Self {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut bumps: Vec<_> = CORRIDOR.iter().chain(CITIES.iter()).copied().collect();
        for _ in 0..60 {
            bumps.push((
                rng.gen_range(5.0..EXTENT_X - 5.0),
                rng.gen_range(5.0..EXTENT_Y - 5.0),
                rng.gen_range(5.0..40.0),
                rng.gen_range(0.8..2.0),
            ));
        }
        Self { bumps }
    }

    /// People per unit area at `(x, y)`.
    pub fn density(&self, x: f64, y: f64) -> f64 {
        // denser east, sparse interior
        let east = 2.0 + 6.0 * (x / EXTENT_X).powi(2);
        let mut v = east;
        for &(cx, cy, peak, s) in &self.bumps {
            let d2 = (x - cx).powi(2) + (y - cy).powi(2);
            if d2 < 64.0 * s * s {
                v += peak * (-d2 / (2.0 * s * s)).exp();
            }
        }
        v
    }

    /// Raster sampled at cell centers, `n_rows x n_cols` over the extent.
    pub fn raster(&self, n_rows: usize, n_cols: usize) -> RasterField {
        let cell = EXTENT_X / n_cols as f64;
        assert!((cell * n_rows as f64 - EXTENT_Y).abs() < 1e-9);
        let mut values = Vec::with_capacity(n_rows * n_cols);
        for row in 0..n_rows {
            let y = EXTENT_Y - (row as f64 + 0.5) * cell;
            for col in 0..n_cols {
                values.push(self.density((col as f64 + 0.5) * cell, y));
            }
        }
        RasterField::new(n_rows, n_cols, cell, Point::new(0.0, 0.0), values).unwrap()
    }
}

/// `q`-quantile of `values` (nearest rank).
pub fn quantile(values: &[f64], q: f64) -> f64 {
    let mut v = values.to_vec();
    v.sort_by(f64::total_cmp);
    let idx = ((q * v.len() as f64).ceil() as usize).clamp(1, v.len()) - 1;
    v[idx]
}
