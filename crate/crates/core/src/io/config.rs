//! Model configuration files.
//!
//! Flat TOML: a handful of sections holding scalars or flat arrays.
//!
//! ```toml
//! [rec]                      # optional for raster intensities
//! x_min = 0.0
//! x_max = 10.0
//! y_min = 0.0
//! y_max = 10.0
//!
//! [intensity]
//! kind = "gaussian_mixture"  # "homogeneous" | "gaussian_mixture" | "raster"
//! background = 0.1
//! hotspot_x = [3.0, 7.0]
//! hotspot_y = [5.0, 5.0]
//! hotspot_mass = [30.0, 10.0]
//! hotspot_sigma = [0.5, 0.5]
//!
//! [link]
//! kind = "inverse_distance"  # or "constant" with `probability`
//! scale = 1.0
//! floor = 0.0
//!
//! [capacity]
//! kind = "constant"          # or "histogram" with `max` and `weights`
//! value = 1.0
//!
//! [bounds]                   # optional overrides of M and T
//! variation = 2.0
//! maximum = 4.0
//! ```
//!
//! Raster intensities take `path` (relative to the config file) and an
//! optional `downsample` block size.

use std::path::{Path, PathBuf};

use serde::Deserialize;

use crate::error::{Error, Result};
use crate::geometry::{Point, Rectangle};
use crate::io::raster::{downsample, load_raster};
use crate::model::{
    CapacityLaw, Hotspot, IntensityField, LinkProbability, StochasticNetworkModel,
};

#[derive(Clone, Debug, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RecSection {
    pub x_min: f64,
    pub x_max: f64,
    pub y_min: f64,
    pub y_max: f64,
}

#[derive(Clone, Debug, PartialEq, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum IntensitySection {
    Homogeneous {
        rate: f64,
    },
    GaussianMixture {
        #[serde(default)]
        background: f64,
        #[serde(default)]
        hotspot_x: Vec<f64>,
        #[serde(default)]
        hotspot_y: Vec<f64>,
        #[serde(default)]
        hotspot_mass: Vec<f64>,
        #[serde(default)]
        hotspot_sigma: Vec<f64>,
    },
    Raster {
        path: PathBuf,
        #[serde(default)]
        downsample: Option<usize>,
    },
}

#[derive(Clone, Debug, PartialEq, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum LinkSection {
    InverseDistance {
        #[serde(default = "one")]
        scale: f64,
        #[serde(default)]
        floor: f64,
    },
    Constant {
        probability: f64,
    },
}

#[derive(Clone, Debug, PartialEq, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum CapacitySection {
    Constant {
        #[serde(default = "one")]
        value: f64,
    },
    Histogram {
        max: f64,
        weights: Vec<f64>,
    },
}

#[derive(Clone, Debug, Default, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BoundsSection {
    pub variation: Option<f64>,
    pub maximum: Option<f64>,
}

#[derive(Clone, Debug, Default, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SamplingSection {
    pub node_budget: Option<f64>,
}

fn one() -> f64 {
    1.0
}

#[derive(Clone, Debug, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ModelConfig {
    pub rec: Option<RecSection>,
    pub intensity: IntensitySection,
    pub link: LinkSection,
    pub capacity: CapacitySection,
    #[serde(default)]
    pub bounds: BoundsSection,
    #[serde(default)]
    pub sampling: SamplingSection,
    /// Directory relative paths resolve against.
    #[serde(skip)]
    pub base_dir: PathBuf,
}

fn line_col(text: &str, offset: usize) -> (usize, usize) {
    let before = &text[..offset.min(text.len())];
    let line = before.matches('\n').count() + 1;
    let col = before.len() - before.rfind('\n').map_or(0, |i| i + 1) + 1;
    (line, col)
}

impl ModelConfig {
    pub fn from_path(path: impl AsRef<Path>) -> Result<Self> {
        let path = path.as_ref();
        let text = std::fs::read_to_string(path).map_err(|e| {
            if e.kind() == std::io::ErrorKind::NotFound {
                Error::Config(format!("config file {} not found", path.display()))
            } else {
                Error::io(path, e)
            }
        })?;
        let base = path.parent().map(Path::to_path_buf).unwrap_or_default();
        Self::parse(&text, path, base)
    }

    /// Parses `text`; `origin` only labels errors.
    pub fn parse(text: &str, origin: &Path, base_dir: PathBuf) -> Result<Self> {
        let mut cfg: ModelConfig = toml::from_str(text).map_err(|e| {
            let (line, column) = e.span().map_or((0, 0), |s| line_col(text, s.start));
            Error::Parse {
                path: origin.to_path_buf(),
                line,
                column,
                message: e.message().to_string(),
            }
        })?;
        cfg.base_dir = base_dir;
        cfg.validate()?;
        Ok(cfg)
    }

    fn raster_path(&self) -> Option<PathBuf> {
        match &self.intensity {
            IntensitySection::Raster { path, .. } => Some(self.base_dir.join(path)),
            _ => None,
        }
    }

    fn validate(&self) -> Result<()> {
        if let Some(path) = self.raster_path() {
            if !path.is_file() {
                return Err(Error::Config(format!(
                    "raster file {} does not exist",
                    path.display()
                )));
            }
        } else if self.rec.is_none() {
            return Err(Error::Config(
                "[rec] is required unless the intensity is a raster".into(),
            ));
        }
        if let IntensitySection::Raster {
            downsample: Some(0),
            ..
        } = self.intensity
        {
            return Err(Error::Config("downsample block must be at least 1".into()));
        }
        if let IntensitySection::GaussianMixture {
            hotspot_x,
            hotspot_y,
            hotspot_mass,
            hotspot_sigma,
            ..
        } = &self.intensity
        {
            let n = hotspot_x.len();
            if hotspot_y.len() != n || hotspot_mass.len() != n || hotspot_sigma.len() != n {
                return Err(Error::Config(
                    "hotspot_x, hotspot_y, hotspot_mass and hotspot_sigma must have equal length"
                        .into(),
                ));
            }
        }
        Ok(())
    }

    pub fn intensity_field(&self) -> Result<IntensityField> {
        Ok(match &self.intensity {
            IntensitySection::Homogeneous { rate } => IntensityField::Homogeneous(*rate),
            IntensitySection::GaussianMixture {
                background,
                hotspot_x,
                hotspot_y,
                hotspot_mass,
                hotspot_sigma,
            } => IntensityField::gaussian_mixture(
                *background,
                (0..hotspot_x.len())
                    .map(|i| {
                        Hotspot::new(
                            Point::new(hotspot_x[i], hotspot_y[i]),
                            hotspot_mass[i],
                            hotspot_sigma[i],
                        )
                    })
                    .collect(),
            ),
            IntensitySection::Raster { downsample: block, .. } => {
                let path = self.raster_path().expect("raster intensity");
                let field = load_raster(&path)?;
                match block {
                    Some(b) if *b > 1 => downsample(&field, *b)?,
                    _ => field,
                }
            }
        })
    }

    pub fn build_model(&self) -> Result<StochasticNetworkModel> {
        let intensity = self.intensity_field()?;
        let rec = match (&self.rec, &intensity) {
            (Some(r), _) => Rectangle::new(r.x_min, r.x_max, r.y_min, r.y_max)?,
            (None, IntensityField::Raster(raster)) => raster.extent(),
            (None, _) => unreachable!("validated"),
        };
        let link = match self.link {
            LinkSection::InverseDistance { scale, floor } => {
                LinkProbability::InverseDistance { scale, floor }
            }
            LinkSection::Constant { probability } => LinkProbability::Constant(probability),
        };
        let capacity = match &self.capacity {
            CapacitySection::Constant { value } => CapacityLaw::Constant(*value),
            CapacitySection::Histogram { max, weights } => CapacityLaw::histogram(*max, weights)?,
        };
        let mut model = StochasticNetworkModel::new(rec, intensity, link, capacity)?
            .with_bounds(self.bounds.variation, self.bounds.maximum)?;
        if let Some(budget) = self.sampling.node_budget {
            model = model.with_node_budget(budget);
        }
        Ok(model)
    }
}
