//! Vulnerability of stochastic spatial networks to circular geographic cuts.
//!
//! Nodes follow a Poisson point process with intensity `f`, each node pair is
//! linked independently with probability `y(u, v)`, and link capacities follow
//! a capacity law. A cut is a closed disk; it destroys every link touching it.
//! The crate evaluates the total expected destroyed capacity (TEC) of a cut by
//! midpoint integration on a square grid ([`integrator`]), sweeps cut centers
//! to build sensitivity maps and expected damage under random cuts
//! ([`planner`]), and checks both against Monte-Carlo sampling of concrete
//! networks ([`oracle`]).

pub mod error;
pub mod geometry;
pub mod grid;
pub mod integrator;
pub mod io;
pub mod kernel;
pub mod model;
pub mod oracle;
pub mod planner;

pub use error::{Error, Result};
pub use geometry::{
    classify_link, segment_intersects_disk, tangent_points, CircularCut, LinkClass, Point,
    Rectangle, ShadowRegion, GEOM_TOL,
};
pub use grid::{compute_grid, AccuracyBudget, BudgetMode, IntegrationGrid, SquareClass};
pub use integrator::{edcc, evaluate_gamma, DamageBreakdown, DamageEvaluator};
pub use model::{
    CapacityLaw, Hotspot, IntensityField, LinkProbability, RasterField, StochasticNetworkModel,
};
pub use oracle::{empirical_tec, pair_class_counts, ConcreteNetwork, McEstimate};
pub use planner::{fsl, rcce, worst_cut, AttackDistribution, RcceNormalization, SensitivityMap};
