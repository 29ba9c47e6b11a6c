use std::f64::consts::PI;

use tecmap_core::oracle::{destroyed_capacity, sample_records, Link};
use tecmap_core::{
    empirical_tec, pair_class_counts, CapacityLaw, CircularCut, ConcreteNetwork, Hotspot,
    IntensityField, LinkProbability, Point, Rectangle, StochasticNetworkModel,
};

fn flat_model() -> StochasticNetworkModel {
    StochasticNetworkModel::new(
        Rectangle::new(0.0, 6.0, 0.0, 6.0).unwrap(),
        IntensityField::Homogeneous(1.0),
        LinkProbability::Constant(1.0),
        CapacityLaw::Constant(1.0),
    )
    .unwrap()
}

fn center_cut() -> CircularCut {
    CircularCut::new(Point::new(3.0, 3.0), 1.0).unwrap()
}

#[test]
fn same_seed_same_estimate() {
    let model = StochasticNetworkModel::new(
        Rectangle::new(0.0, 5.0, 0.0, 5.0).unwrap(),
        IntensityField::gaussian_mixture(0.5, vec![Hotspot::new(Point::new(2.0, 3.0), 8.0, 0.6)]),
        LinkProbability::inverse_distance(),
        CapacityLaw::histogram(3.0, &[1.0, 2.0, 3.0]).unwrap(),
    )
    .unwrap();
    let cut = CircularCut::new(Point::new(2.5, 2.5), 1.0).unwrap();
    let a = empirical_tec(&model, &cut, 500, 42).unwrap();
    let b = empirical_tec(&model, &cut, 500, 42).unwrap();
    assert_eq!(a, b);
    assert_eq!(a.mean.to_bits(), b.mean.to_bits());
    let c = empirical_tec(&model, &cut, 500, 43).unwrap();
    assert_ne!(a.mean, c.mean);

    // a single-threaded pool reproduces the same records
    let serial = rayon::ThreadPoolBuilder::new()
        .num_threads(1)
        .build()
        .unwrap()
        .install(|| sample_records(&model, &cut, 500, 42).unwrap());
    assert_eq!(serial, sample_records(&model, &cut, 500, 42).unwrap());
}

#[test]
fn classes_partition_the_links() {
    let model = flat_model();
    for seed in 0..50 {
        let net = model.sample_network(seed).unwrap();
        let counts = pair_class_counts(&net, &center_cut());
        assert_eq!(counts.total(), net.links.len());
    }
}

#[test]
fn standard_error_shrinks_as_inverse_root_n() {
    let model = flat_model();
    let cut = center_cut();
    let ns = [100usize, 1_000, 10_000];
    let xs: Vec<f64> = ns.iter().map(|&n| (n as f64).ln()).collect();
    let ys: Vec<f64> = ns
        .iter()
        .map(|&n| empirical_tec(&model, &cut, n, 9).unwrap().std_error.ln())
        .collect();
    let n = xs.len() as f64;
    let mx = xs.iter().sum::<f64>() / n;
    let my = ys.iter().sum::<f64>() / n;
    let slope = xs.iter().zip(&ys).map(|(x, y)| (x - mx) * (y - my)).sum::<f64>()
        / xs.iter().map(|x| (x - mx).powi(2)).sum::<f64>();
    assert!((slope + 0.5).abs() <= 0.1, "slope {slope}");
}

#[test]
fn alpha_mean_matches_closed_form() {
    // N ~ Poisson(pi) nodes in the disk, all pairs linked: E[N(N-1)/2] = pi^2/2
    let est = empirical_tec(&flat_model(), &center_cut(), 10_000, 1).unwrap();
    let expected = PI * PI / 2.0;
    let dev = (est.per_type_means.alpha - expected).abs();
    assert!(dev <= 3.0 * est.per_type_std_errors.alpha, "{est:?}");
}

#[test]
fn hand_built_network_classes() {
    let cut = CircularCut::new(Point::new(0.0, 0.0), 1.0).unwrap();
    let p = Point::new;
    let nodes = vec![
        p(0.2, 0.1),   // 0 inside
        p(-0.5, 0.3),  // 1 inside
        p(0.0, -0.7),  // 2 inside
        p(1.0, 0.0),   // 3 on the circle, inside
        p(3.0, 0.5),   // 4
        p(-3.0, 0.5),  // 5
        p(-2.0, -3.0), // 6
        p(2.0, 2.0),   // 7
        p(-2.0, 1.0),  // 8, segment to 4 tangent to the circle at (0, 1)
        p(2.0, 1.0),   // 9
        p(0.0, 3.0),   // 10
    ];
    let link = |a, b| Link {
        a,
        b,
        capacity: 1.0 + a as f64,
    };
    let links = vec![
        link(0, 1), // alpha
        link(1, 2), // alpha
        link(0, 3), // alpha
        link(0, 4), // beta
        link(2, 6), // beta
        link(3, 7), // beta
        link(1, 5), // beta
        link(4, 5), // gamma
        link(8, 9), // gamma (tangent)
        link(7, 10), // untouched
        link(6, 4), // untouched
    ];
    let net = ConcreteNetwork {
        nodes,
        links,
        seed: 0,
    };
    let counts = pair_class_counts(&net, &cut);
    assert_eq!(
        (counts.alpha, counts.beta, counts.gamma, counts.untouched),
        (3, 4, 2, 2)
    );
    let d = destroyed_capacity(&net, &cut);
    assert_eq!(d.alpha, 1.0 + 2.0 + 1.0);
    assert_eq!(d.beta, 1.0 + 3.0 + 4.0 + 2.0);
    assert_eq!(d.gamma, 5.0 + 9.0);
}
