//! GIS ASCII grids: a six-line header followed by row-major values, top row
//! first.
//!
//! ```text
//! ncols         4
//! nrows         2
//! xllcorner     0.0
//! yllcorner     0.0
//! cellsize      1.0
//! NODATA_value  -9999
//! 1 2 3 4
//! 5 6 7 8
//! ```
//!
//! `xllcenter`/`yllcenter` are accepted in place of the corner keys and the
//! NODATA line is optional.

use std::fs::File;
use std::io::{BufRead, BufReader, BufWriter, Write};
use std::path::{Path, PathBuf};

use crate::error::{Error, Result};
use crate::geometry::Point;
use crate::model::{IntensityField, RasterField};

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct RasterHeader {
    pub n_cols: usize,
    pub n_rows: usize,
    /// Lower-left corner of the grid.
    pub xll_corner: f64,
    pub yll_corner: f64,
    pub cell_size: f64,
    pub no_data: Option<f64>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct RasterFile {
    pub header: RasterHeader,
    /// Row-major, top row first. NODATA cells keep the sentinel.
    pub values: Vec<f64>,
}

fn parse_error(path: &Path, line: usize, column: usize, message: impl Into<String>) -> Error {
    Error::Parse {
        path: path.to_path_buf(),
        line,
        column,
        message: message.into(),
    }
}

/// Tokens of a line with their 1-based columns.
fn tokens(line: &str) -> impl Iterator<Item = (usize, &str)> {
    let base = line.as_ptr() as usize;
    line.split_ascii_whitespace()
        .map(move |t| (t.as_ptr() as usize - base + 1, t))
}

pub fn read_ascii_grid(path: impl AsRef<Path>) -> Result<RasterFile> {
    let path = path.as_ref();
    let file = File::open(path).map_err(|e| Error::io(path, e))?;
    let mut lines = BufReader::with_capacity(1 << 20, file).lines();
    let mut line_no = 0;

    let mut n_cols = None;
    let mut n_rows = None;
    let mut xll = None;
    let mut yll = None;
    let mut x_center = false;
    let mut y_center = false;
    let mut cell_size = None;
    let mut no_data = None;
    let mut pending: Option<String> = None;

    // header lines start with a key; the first numeric line ends the header
    for line in lines.by_ref() {
        line_no += 1;
        let line = line.map_err(|e| Error::io(path, e))?;
        let is_data = match tokens(&line).next() {
            None => continue,
            Some((_, first)) => first.parse::<f64>().is_ok(),
        };
        if is_data {
            pending = Some(line);
            break;
        }
        let mut toks = tokens(&line);
        let (_, key) = toks.next().expect("non-empty line");
        let Some((col, value)) = toks.next() else {
            return Err(parse_error(path, line_no, line.len() + 1, format!("missing value for {key}")));
        };
        let number: f64 = value
            .parse()
            .map_err(|_| parse_error(path, line_no, col, format!("invalid number {value:?}")))?;
        let as_count = |v: f64| -> Result<usize> {
            if v >= 1.0 && v.fract() == 0.0 {
                Ok(v as usize)
            } else {
                Err(parse_error(path, line_no, col, format!("{key} must be a positive integer")))
            }
        };
        match key.to_ascii_lowercase().as_str() {
            "ncols" => n_cols = Some(as_count(number)?),
            "nrows" => n_rows = Some(as_count(number)?),
            "xllcorner" => xll = Some(number),
            "yllcorner" => yll = Some(number),
            "xllcenter" => {
                xll = Some(number);
                x_center = true;
            }
            "yllcenter" => {
                yll = Some(number);
                y_center = true;
            }
            "cellsize" => {
                if !(number > 0.0) {
                    return Err(parse_error(path, line_no, col, "cellsize must be positive"));
                }
                cell_size = Some(number);
            }
            "nodata_value" => no_data = Some(number),
            _ => return Err(parse_error(path, line_no, 1, format!("unknown header key {key:?}"))),
        }
    }

    let missing = |name: &str| parse_error(path, line_no, 1, format!("header is missing {name}"));
    let n_cols = n_cols.ok_or_else(|| missing("ncols"))?;
    let n_rows = n_rows.ok_or_else(|| missing("nrows"))?;
    let cell_size = cell_size.ok_or_else(|| missing("cellsize"))?;
    let mut xll_corner = xll.ok_or_else(|| missing("xllcorner"))?;
    let mut yll_corner = yll.ok_or_else(|| missing("yllcorner"))?;
    if x_center {
        xll_corner -= 0.5 * cell_size;
    }
    if y_center {
        yll_corner -= 0.5 * cell_size;
    }

    let expected = n_cols * n_rows;
    let mut values = Vec::with_capacity(expected);
    let mut push_line = |line: &str, line_no: usize| -> Result<()> {
        for (col, tok) in tokens(line) {
            let v: f64 = tok
                .parse()
                .map_err(|_| parse_error(path, line_no, col, format!("invalid number {tok:?}")))?;
            if values.len() == expected {
                return Err(parse_error(path, line_no, col, "more values than ncols * nrows"));
            }
            values.push(v);
        }
        Ok(())
    };
    if let Some(first) = pending {
        push_line(&first, line_no)?;
    }
    for line in lines {
        line_no += 1;
        let line = line.map_err(|e| Error::io(path, e))?;
        push_line(&line, line_no)?;
    }
    if values.len() != expected {
        return Err(Error::MissingValues {
            path: path.to_path_buf(),
            expected,
            found: values.len(),
        });
    }
    Ok(RasterFile {
        header: RasterHeader {
            n_cols,
            n_rows,
            xll_corner,
            yll_corner,
            cell_size,
            no_data,
        },
        values,
    })
}

/// Writes a grid. Values use the shortest representation that parses back to
/// the same `f64`.
pub fn write_ascii_grid(path: impl AsRef<Path>, raster: &RasterFile) -> Result<()> {
    write_grid_with(path.as_ref(), raster, |w, v| write!(w, "{v}"))
}

pub(crate) fn write_grid_with(
    path: &Path,
    raster: &RasterFile,
    mut fmt: impl FnMut(&mut BufWriter<File>, f64) -> std::io::Result<()>,
) -> Result<()> {
    let h = &raster.header;
    let io = |e| Error::io(path, e);
    let file = File::create(path).map_err(io)?;
    let mut w = BufWriter::with_capacity(1 << 20, file);
    writeln!(w, "ncols {}", h.n_cols).map_err(io)?;
    writeln!(w, "nrows {}", h.n_rows).map_err(io)?;
    writeln!(w, "xllcorner {:e}", h.xll_corner).map_err(io)?;
    writeln!(w, "yllcorner {:e}", h.yll_corner).map_err(io)?;
    writeln!(w, "cellsize {:e}", h.cell_size).map_err(io)?;
    if let Some(nd) = h.no_data {
        writeln!(w, "NODATA_value {nd}").map_err(io)?;
    }
    for row in raster.values.chunks(h.n_cols.max(1)) {
        for (i, &v) in row.iter().enumerate() {
            if i > 0 {
                w.write_all(b" ").map_err(io)?;
            }
            fmt(&mut w, v).map_err(io)?;
        }
        w.write_all(b"\n").map_err(io)?;
    }
    w.flush().map_err(io)
}

impl RasterFile {
    /// Intensity field with NODATA cells set to zero.
    pub fn into_field(self, path: &Path) -> Result<RasterField> {
        let h = self.header;
        let mut no_data_cells = 0usize;
        let mut values = self.values;
        for (i, v) in values.iter_mut().enumerate() {
            if h.no_data == Some(*v) {
                *v = 0.0;
                no_data_cells += 1;
            } else if *v < 0.0 || !v.is_finite() {
                return Err(Error::NegativeIntensity {
                    row: i / h.n_cols,
                    col: i % h.n_cols,
                    value: *v,
                });
            }
        }
        if no_data_cells > 0 {
            log::warn!(
                "{}: {no_data_cells} NODATA cells loaded as zero intensity",
                path.display()
            );
        }
        RasterField::new(
            h.n_rows,
            h.n_cols,
            h.cell_size,
            Point::new(h.xll_corner, h.yll_corner),
            values,
        )
    }

    pub fn from_field(field: &RasterField) -> Self {
        Self {
            header: RasterHeader {
                n_cols: field.n_cols(),
                n_rows: field.n_rows(),
                xll_corner: field.origin().x,
                yll_corner: field.origin().y,
                cell_size: field.cell_size(),
                no_data: None,
            },
            values: field.values().to_vec(),
        }
    }
}

/// Reads a density raster as an intensity field.
pub fn load_raster(path: impl AsRef<Path>) -> Result<IntensityField> {
    let path: PathBuf = path.as_ref().to_path_buf();
    let file = read_ascii_grid(&path)?;
    Ok(IntensityField::Raster(file.into_field(&path)?))
}

/// Block-mean coarsening of a raster; partial blocks on the bottom and right
/// edges average the cells they hold. The top-left corner stays fixed.
pub fn downsample_raster(field: &RasterField, block: usize) -> Result<RasterField> {
    if block == 0 {
        return Err(Error::Config("downsample block must be at least 1".into()));
    }
    if block == 1 {
        return Ok(field.clone());
    }
    let out_rows = field.n_rows().div_ceil(block);
    let out_cols = field.n_cols().div_ceil(block);
    let mut sums = vec![0.0; out_rows * out_cols];
    let mut counts = vec![0usize; out_rows * out_cols];
    let values = field.values();
    for r in 0..field.n_rows() {
        let row = &values[r * field.n_cols()..(r + 1) * field.n_cols()];
        let base = (r / block) * out_cols;
        for (c, &v) in row.iter().enumerate() {
            sums[base + c / block] += v;
            counts[base + c / block] += 1;
        }
    }
    let means = sums.iter().zip(&counts).map(|(s, &n)| s / n as f64).collect();
    let cell = field.cell_size() * block as f64;
    let top = field.origin().y + field.n_rows() as f64 * field.cell_size();
    let origin = Point::new(field.origin().x, top - out_rows as f64 * cell);
    RasterField::new(out_rows, out_cols, cell, origin, means)
}

/// Downsamples raster fields; analytic fields are returned unchanged.
pub fn downsample(field: &IntensityField, block: usize) -> Result<IntensityField> {
    match field {
        IntensityField::Raster(r) => Ok(IntensityField::Raster(downsample_raster(r, block)?)),
        other => {
            if block == 0 {
                return Err(Error::Config("downsample block must be at least 1".into()));
            }
            Ok(other.clone())
        }
    }
}
