//! Sensitivity-map and Monte-Carlo sample files.

use std::path::Path;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geometry::Point;
use crate::io::raster::{read_ascii_grid, write_grid_with, RasterFile, RasterHeader};
use crate::oracle::SampleRecord;
use crate::planner::SensitivityMap;

pub const NODATA: f64 = -9999.0;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum MapFormat {
    /// `x,y,tec` per center, rows bottom first.
    Csv,
    /// GIS ASCII grid over `Rec_r`, top row first.
    Ascii,
}

impl FromStr for MapFormat {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "csv" => Ok(Self::Csv),
            "ascii" | "asc" => Ok(Self::Ascii),
            other => Err(Error::Config(format!("unknown map format `{other}`"))),
        }
    }
}

/// Map values read back from disk; `points[i]` carries `values[i]`.
#[derive(Clone, Debug, PartialEq)]
pub struct MapData {
    pub points: Vec<Point>,
    pub values: Vec<f64>,
    pub n_rows: Option<usize>,
    pub n_cols: Option<usize>,
}

fn csv_error(path: &Path, e: csv::Error) -> Error {
    let line = e.position().map_or(0, |p| p.line() as usize);
    match e.into_kind() {
        csv::ErrorKind::Io(io) => Error::io(path, io),
        kind => Error::Parse {
            path: path.to_path_buf(),
            line,
            column: 0,
            message: format!("{kind:?}"),
        },
    }
}

pub fn export_map(map: &SensitivityMap, path: impl AsRef<Path>, format: MapFormat) -> Result<()> {
    let path = path.as_ref();
    match format {
        MapFormat::Csv => {
            let mut w = csv::Writer::from_path(path).map_err(|e| csv_error(path, e))?;
            w.write_record(["x", "y", "tec"])
                .map_err(|e| csv_error(path, e))?;
            for (i, &v) in map.values().iter().enumerate() {
                let p = map.centers().point(i);
                w.write_record([
                    format!("{:.16e}", p.x),
                    format!("{:.16e}", p.y),
                    format!("{v:.16e}"),
                ])
                .map_err(|e| csv_error(path, e))?;
            }
            w.flush().map_err(|e| Error::io(path, e))
        }
        MapFormat::Ascii => {
            let centers = map.centers();
            let rec = centers.rec();
            let exact = (centers.n_cols() as f64 * map.delta - rec.width()).abs() <= 1e-9 * rec.width()
                && (centers.n_rows() as f64 * map.delta - rec.height()).abs() <= 1e-9 * rec.height();
            if !exact {
                log::warn!(
                    "grid step does not divide the admissible region; ascii cell centers of the last row and column are approximate"
                );
            }
            let (n_rows, n_cols) = (map.n_rows(), map.n_cols());
            let mut values = Vec::with_capacity(n_rows * n_cols);
            for row in (0..n_rows).rev() {
                values.extend((0..n_cols).map(|col| map.value(row, col)));
            }
            let raster = RasterFile {
                header: RasterHeader {
                    n_cols,
                    n_rows,
                    xll_corner: rec.x_min,
                    yll_corner: rec.y_min,
                    cell_size: map.delta,
                    no_data: Some(NODATA),
                },
                values,
            };
            write_grid_with(path, &raster, |w, v| {
                use std::io::Write;
                write!(w, "{v:.16e}")
            })
        }
    }
}

pub fn import_map(path: impl AsRef<Path>, format: MapFormat) -> Result<MapData> {
    let path = path.as_ref();
    match format {
        MapFormat::Csv => {
            #[derive(Deserialize)]
            struct Row {
                x: f64,
                y: f64,
                tec: f64,
            }
            let mut r = csv::Reader::from_path(path).map_err(|e| csv_error(path, e))?;
            let mut points = Vec::new();
            let mut values = Vec::new();
            for row in r.deserialize() {
                let row: Row = row.map_err(|e| csv_error(path, e))?;
                points.push(Point::new(row.x, row.y));
                values.push(row.tec);
            }
            Ok(MapData {
                points,
                values,
                n_rows: None,
                n_cols: None,
            })
        }
        MapFormat::Ascii => {
            let file = read_ascii_grid(path)?;
            let h = file.header;
            let mut points = Vec::with_capacity(file.values.len());
            let mut values = Vec::with_capacity(file.values.len());
            for row in 0..h.n_rows {
                let src = h.n_rows - 1 - row;
                for col in 0..h.n_cols {
                    points.push(Point::new(
                        h.xll_corner + (col as f64 + 0.5) * h.cell_size,
                        h.yll_corner + (row as f64 + 0.5) * h.cell_size,
                    ));
                    let v = file.values[src * h.n_cols + col];
                    values.push(if h.no_data == Some(v) { f64::NAN } else { v });
                }
            }
            Ok(MapData {
                points,
                values,
                n_rows: Some(h.n_rows),
                n_cols: Some(h.n_cols),
            })
        }
    }
}

/// Writes one line per Monte-Carlo sample:
/// `index,nodes,links,alpha,beta,gamma,total`.
pub fn write_sample_records(path: impl AsRef<Path>, records: &[SampleRecord]) -> Result<()> {
    let path = path.as_ref();
    let mut w = csv::Writer::from_path(path).map_err(|e| csv_error(path, e))?;
    w.write_record(["index", "nodes", "links", "alpha", "beta", "gamma", "total"])
        .map_err(|e| csv_error(path, e))?;
    for r in records {
        w.write_record([
            r.index.to_string(),
            r.nodes.to_string(),
            r.links.to_string(),
            format!("{:.16e}", r.alpha),
            format!("{:.16e}", r.beta),
            format!("{:.16e}", r.gamma),
            format!("{:.16e}", r.total()),
        ])
        .map_err(|e| csv_error(path, e))?;
    }
    w.flush().map_err(|e| Error::io(path, e))
}
