//! File formats: model configs, density rasters, and result exports.

pub mod config;
pub mod export;
pub mod raster;

pub use config::ModelConfig;
pub use export::{export_map, import_map, write_sample_records, MapData, MapFormat};
pub use raster::{
    downsample, downsample_raster, load_raster, read_ascii_grid, write_ascii_grid, RasterFile,
    RasterHeader,
};
