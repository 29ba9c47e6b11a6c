use std::path::PathBuf;

use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid rectangle: [{x_min}, {x_max}] x [{y_min}, {y_max}]")]
    InvalidRectangle {
        x_min: f64,
        x_max: f64,
        y_min: f64,
        y_max: f64,
    },
    #[error("invalid cut radius {0}")]
    InvalidRadius(f64),
    #[error("source point ({x}, {y}) lies inside the closed disk")]
    SourceInsideDisk { x: f64, y: f64 },
    #[error("point ({x}, {y}) lies inside the closed disk")]
    PointInsideDisk { x: f64, y: f64 },
    #[error("point ({x}, {y}) is outside the model rectangle")]
    OutOfDomain { x: f64, y: f64 },
    #[error("cut centered at ({x}, {y}) with radius {radius} does not fit inside the rectangle")]
    CutOutsideRegion { x: f64, y: f64, radius: f64 },
    #[error("admissible center region is empty for radius {radius}")]
    DegenerateRec { radius: f64 },
    #[error("infeasible accuracy budget: {0}")]
    InfeasibleBudget(String),
    #[error("grid constant {delta} must be smaller than half the cut radius {radius}")]
    GridTooCoarse { delta: f64, radius: f64 },
    #[error("expected node count {expected} exceeds the node budget {budget}")]
    ExpectedCountOverflow { expected: f64, budget: f64 },
    #[error("attack density integrates to {mass}, expected 1")]
    UnnormalizedDensity { mass: f64 },
    #[error("invalid model: {0}")]
    InvalidModel(String),
    #[error("{path}:{line}:{column}: {message}")]
    Parse {
        path: PathBuf,
        line: usize,
        column: usize,
        message: String,
    },
    #[error("negative intensity {value} at row {row}, column {col}")]
    NegativeIntensity { row: usize, col: usize, value: f64 },
    #[error("raster {path} is missing values: expected {expected}, found {found}")]
    MissingValues {
        path: PathBuf,
        expected: usize,
        found: usize,
    },
    #[error("invalid configuration: {0}")]
    Config(String),
    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
}

impl Error {
    pub(crate) fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }
}
