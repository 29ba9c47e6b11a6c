use proptest::prelude::*;
use tecmap_core::{
    CapacityLaw, Hotspot, IntensityField, LinkProbability, Point, RasterField, Rectangle,
    StochasticNetworkModel,
};

fn rec() -> Rectangle {
    Rectangle::new(0.0, 8.0, 0.0, 5.0).unwrap()
}

fn models() -> Vec<StochasticNetworkModel> {
    let mixture = IntensityField::gaussian_mixture(
        0.2,
        vec![Hotspot::new(Point::new(2.0, 2.0), 12.0, 0.7)],
    );
    let capacity_by_length = CapacityLaw::custom(3.0, |c, d| {
        let w = (d / 10.0).min(1.0);
        (1.0 - w) / 3.0 + w * 2.0 * c / 9.0
    });
    vec![
        StochasticNetworkModel::new(
            rec(),
            IntensityField::Homogeneous(1.0),
            LinkProbability::inverse_distance(),
            CapacityLaw::Constant(2.0),
        )
        .unwrap(),
        StochasticNetworkModel::new(
            rec(),
            mixture,
            LinkProbability::InverseDistance {
                scale: 0.5,
                floor: 0.1,
            },
            CapacityLaw::histogram(4.0, &[1.0, 2.0, 1.0]).unwrap(),
        )
        .unwrap(),
        StochasticNetworkModel::new(
            rec(),
            IntensityField::Homogeneous(1.0),
            LinkProbability::custom(|u, v| (-(u.dist(v))).exp()),
            capacity_by_length,
        )
        .unwrap(),
    ]
}

fn inside() -> impl Strategy<Value = Point> {
    (0.0..8.0f64, 0.0..5.0f64).prop_map(|(x, y)| Point::new(x, y))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(500))]

    #[test]
    fn kernel_is_symmetric_and_bounded(u in inside(), v in inside()) {
        for m in models() {
            let g = m.expected_capacity_kernel(u, v).unwrap();
            let h = m.expected_capacity_kernel(v, u).unwrap();
            prop_assert_eq!(g, h);
            let y = m.link().value(u, v);
            let c_max = m.capacity().max_capacity();
            prop_assert!(g >= 0.0);
            prop_assert!(g <= y * c_max * (1.0 + 1e-12));
            prop_assert!(y * c_max <= c_max);
            prop_assert!(g <= m.kernel_bound() * (1.0 + 1e-12));
            // the cached kernel used by the integrator agrees with the direct one
            let cached = m.kernel().eval(u, v);
            prop_assert!((cached - g).abs() <= 1e-4 * g.max(1e-12));
        }
    }

    #[test]
    fn raster_total_is_cell_sum(
        values in prop::collection::vec(0.0..50.0f64, 12),
        cell in 0.1..5.0f64,
    ) {
        let r = RasterField::new(3, 4, cell, Point::new(-1.0, 2.0), values.clone()).unwrap();
        let expected = cell * cell * values.iter().sum::<f64>();
        prop_assert_eq!(r.total_mass(), expected);
        let field = IntensityField::Raster(r.clone());
        let rel = (field.mass_bound(&r.extent()) - expected).abs() / expected.max(1e-300);
        prop_assert!(rel < 1e-12);
    }
}

#[test]
fn homogeneous_counts_have_poisson_mean() {
    let lambda = 3.0;
    let model = StochasticNetworkModel::new(
        Rectangle::new(0.0, 2.0, 0.0, 1.5).unwrap(),
        IntensityField::Homogeneous(lambda),
        LinkProbability::Constant(0.0),
        CapacityLaw::Constant(1.0),
    )
    .unwrap();
    let n = 10_000;
    let area = 3.0;
    let mut counts = Vec::with_capacity(n);
    let mut left = Vec::with_capacity(n);
    let mut right = Vec::with_capacity(n);
    for seed in 0..n as u64 {
        let net = model.sample_network(seed).unwrap();
        counts.push(net.nodes.len() as f64);
        left.push(net.nodes.iter().filter(|p| p.x < 1.0).count() as f64);
        right.push(net.nodes.iter().filter(|p| p.x >= 1.0).count() as f64);
    }
    let mean = counts.iter().sum::<f64>() / n as f64;
    let tol = 4.0 * (lambda * area / n as f64).sqrt();
    assert!((mean - lambda * area).abs() <= tol, "mean {mean}");

    let var = counts.iter().map(|c| (c - mean).powi(2)).sum::<f64>() / (n - 1) as f64;
    assert!((var / mean - 1.0).abs() < 0.1, "dispersion {}", var / mean);

    let corr = correlation(&left, &right);
    assert!(corr.abs() < 0.05, "correlation {corr}");
}

fn correlation(a: &[f64], b: &[f64]) -> f64 {
    let n = a.len() as f64;
    let ma = a.iter().sum::<f64>() / n;
    let mb = b.iter().sum::<f64>() / n;
    let cov: f64 = a.iter().zip(b).map(|(x, y)| (x - ma) * (y - mb)).sum();
    let va: f64 = a.iter().map(|x| (x - ma).powi(2)).sum();
    let vb: f64 = b.iter().map(|y| (y - mb).powi(2)).sum();
    cov / (va * vb).sqrt()
}

#[test]
fn raster_cells_sampled_at_their_rate() {
    // one empty column and one column twice as dense as the other
    let raster = RasterField::new(1, 3, 1.0, Point::new(0.0, 0.0), vec![0.0, 2.0, 4.0]).unwrap();
    let model = StochasticNetworkModel::new(
        raster.extent(),
        IntensityField::Raster(raster),
        LinkProbability::Constant(0.0),
        CapacityLaw::Constant(1.0),
    )
    .unwrap();
    let n = 4000;
    let mut per_cell = [0usize; 3];
    for seed in 0..n {
        for p in model.sample_network(seed).unwrap().nodes {
            per_cell[(p.x.floor() as usize).min(2)] += 1;
        }
    }
    assert_eq!(per_cell[0], 0);
    let m1 = per_cell[1] as f64 / n as f64;
    let m2 = per_cell[2] as f64 / n as f64;
    assert!((m1 - 2.0).abs() < 4.0 * (2.0 / n as f64).sqrt(), "{m1}");
    assert!((m2 - 4.0).abs() < 4.0 * (4.0 / n as f64).sqrt(), "{m2}");
}
