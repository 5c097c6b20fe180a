//! Signal CSV interchange: a header `x,value` followed by one row per
//! sample. Extra columns are allowed and ignored by the plain reader, so the
//! transform outputs (which append `h_value,...`) can be read back.

use std::io::{Read, Write};

use crate::error::{Error, Result};
use crate::grid::{Grid, Signal};

/// Relative tolerance on the spacing between consecutive positions.
pub const SPACING_TOL: f64 = 1e-9;

fn csv_error(line: u64, column: usize, message: impl Into<String>) -> Error {
    Error::Csv {
        line,
        column,
        message: message.into(),
    }
}

/// Reads the `x` and `value` columns.
pub fn read_signal_csv<R: Read>(reader: R) -> Result<Signal> {
    read_signal_column(reader, "value")
}

/// Reads `x` together with the named value column.
pub fn read_signal_column<R: Read>(reader: R, column: &str) -> Result<Signal> {
    let mut rdr = csv::ReaderBuilder::new()
        .has_headers(true)
        .trim(csv::Trim::All)
        .from_reader(reader);
    let headers = rdr
        .headers()
        .map_err(|e| csv_error(1, 1, e.to_string()))?
        .clone();
    if headers.get(0) != Some("x") || headers.get(1) != Some("value") {
        return Err(csv_error(
            1,
            1,
            format!("expected header starting with `x,value`, got `{}`", headers.iter().collect::<Vec<_>>().join(",")),
        ));
    }
    let col = headers
        .iter()
        .position(|h| h == column)
        .ok_or_else(|| csv_error(1, 1, format!("no column named `{column}`")))?;

    let mut xs = Vec::new();
    let mut values = Vec::new();
    for record in rdr.records() {
        let record = record.map_err(|e| {
            let line = e.position().map(|p| p.line()).unwrap_or(0);
            csv_error(line, 1, e.to_string())
        })?;
        let line = record.position().map(|p| p.line()).unwrap_or(0);
        let parse = |idx: usize| -> Result<f64> {
            let field = record
                .get(idx)
                .ok_or_else(|| csv_error(line, idx + 1, "missing field"))?;
            let v: f64 = field
                .parse()
                .map_err(|_| csv_error(line, idx + 1, format!("not a number: `{field}`")))?;
            if !v.is_finite() {
                return Err(csv_error(line, idx + 1, format!("non-finite value `{field}`")));
            }
            Ok(v)
        };
        let x = parse(0)?;
        if let Some(&prev) = xs.last() {
            if x <= prev {
                return Err(csv_error(line, 1, "x must be strictly increasing"));
            }
        }
        xs.push(x);
        values.push(parse(col)?);
    }
    let grid = grid_from_positions(&xs)?;
    Signal::new(grid, values)
}

/// Recovers the uniform grid behind a list of sample positions.
///
/// Positions must be uniformly spaced to relative tolerance
/// [`SPACING_TOL`]. When the positions were produced by a [`Grid`], the
/// recovered grid reproduces them bit for bit.
pub fn grid_from_positions(xs: &[f64]) -> Result<Grid> {
    if xs.len() < 2 {
        return Err(csv_error(1, 1, format!("need at least 2 rows, got {}", xs.len())));
    }
    let n = xs.len();
    let origin = xs[0];
    let estimate = (xs[n - 1] - origin) / (n - 1) as f64;
    for (j, w) in xs.windows(2).enumerate() {
        let step = w[1] - w[0];
        if (step - estimate).abs() > SPACING_TOL * estimate {
            // Header is line 1, first data row line 2.
            return Err(csv_error(
                j as u64 + 3,
                1,
                format!("non-uniform spacing: step {step} vs mean spacing {estimate}"),
            ));
        }
    }
    // Search a few ulps around the estimate for the spacing that regenerates
    // every position exactly.
    let mut candidate = estimate;
    for _ in 0..8 {
        candidate = candidate.next_down();
    }
    for _ in 0..17 {
        let reproduces = xs
            .iter()
            .enumerate()
            .all(|(j, &x)| origin + j as f64 * candidate == x);
        if reproduces {
            return Grid::new(origin, candidate, n);
        }
        candidate = candidate.next_up();
    }
    Grid::new(origin, estimate, n)
}

pub fn write_signal_csv<W: Write>(writer: W, f: &Signal) -> Result<()> {
    write_columns(writer, f.grid(), &[("value", f.values())])
}

/// Writes `x` followed by the given named columns.
pub fn write_columns<W: Write>(mut writer: W, grid: &Grid, columns: &[(&str, &[f64])]) -> Result<()> {
    let mut header = String::from("x");
    for (name, values) in columns {
        if values.len() != grid.count() {
            return Err(Error::Domain(format!(
                "column `{name}` has {} entries for {} samples",
                values.len(),
                grid.count()
            )));
        }
        header.push(',');
        header.push_str(name);
    }
    writeln!(writer, "{header}")?;
    let mut line = String::new();
    for (j, x) in grid.positions().enumerate() {
        line.clear();
        line.push_str(&format!("{x}"));
        for (_, values) in columns {
            line.push_str(&format!(",{}", values[j]));
        }
        writeln!(writer, "{line}")?;
    }
    Ok(())
}
