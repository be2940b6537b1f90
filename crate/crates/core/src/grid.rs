//! Tensor discretization of `U x [0,1]` and sampled grid functions.

use std::io::{BufRead, Write};

use crate::domain::SpaceDomain;
use crate::error::{Error, Result};

/// Uniform space-time grid over `[a,b] x [0,1]`, endpoints included.
#[derive(Debug, Clone, PartialEq)]
pub struct SpaceTimeGrid {
    xs: Vec<f64>,
    ts: Vec<f64>,
    hx: f64,
    ht: f64,
}

impl SpaceTimeGrid {
    pub fn new(dom: &SpaceDomain, nx: usize, nt: usize) -> Result<Self> {
        let (a, b) = dom.as_interval()?;
        Self::over_interval(a, b, nx, nt)
    }

    pub fn over_interval(a: f64, b: f64, nx: usize, nt: usize) -> Result<Self> {
        if nx < 3 || nt < 3 {
            return Err(Error::InvalidGrid(format!(
                "grid needs nx, nt >= 3, got {}x{}",
                nx, nt
            )));
        }
        if !(a.is_finite() && b.is_finite() && a < b) {
            return Err(Error::InvalidGrid(format!("bad interval ({}, {})", a, b)));
        }
        let xs = linspace(a, b, nx);
        let ts = linspace(0.0, 1.0, nt);
        Ok(SpaceTimeGrid {
            hx: (b - a) / (nx - 1) as f64,
            ht: 1.0 / (nt - 1) as f64,
            xs,
            ts,
        })
    }

    pub fn nx(&self) -> usize {
        self.xs.len()
    }

    pub fn nt(&self) -> usize {
        self.ts.len()
    }

    pub fn hx(&self) -> f64 {
        self.hx
    }

    pub fn ht(&self) -> f64 {
        self.ht
    }

    pub fn x(&self, i: usize) -> f64 {
        self.xs[i]
    }

    pub fn t(&self, j: usize) -> f64 {
        self.ts[j]
    }

    pub fn xs(&self) -> &[f64] {
        &self.xs
    }

    pub fn ts(&self) -> &[f64] {
        &self.ts
    }

    pub fn x_range(&self) -> (f64, f64) {
        (self.xs[0], *self.xs.last().unwrap())
    }

    /// Row-major index, t varying slowest.
    pub fn idx(&self, i: usize, j: usize) -> usize {
        j * self.nx() + i
    }

    pub fn len(&self) -> usize {
        self.nx() * self.nt()
    }

    pub fn is_empty(&self) -> bool {
        false
    }
}

fn linspace(a: f64, b: f64, n: usize) -> Vec<f64> {
    let mut v: Vec<f64> = (0..n)
        .map(|i| a + (b - a) * (i as f64) / ((n - 1) as f64))
        .collect();
    v[0] = a;
    v[n - 1] = b;
    v
}

/// Where a grid function came from.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Provenance {
    Envelope,
    Foliation,
    Oracle,
    File,
}

impl Provenance {
    pub fn as_str(self) -> &'static str {
        match self {
            Provenance::Envelope => "envelope",
            Provenance::Foliation => "foliation",
            Provenance::Oracle => "oracle",
            Provenance::File => "file",
        }
    }
}

/// Sampled values of `u(x_i, t_j)` over a [`SpaceTimeGrid`].
#[derive(Debug, Clone, PartialEq)]
pub struct GridField {
    grid: SpaceTimeGrid,
    values: Vec<f64>,
    provenance: Provenance,
}

impl GridField {
    pub fn new(grid: SpaceTimeGrid, values: Vec<f64>, provenance: Provenance) -> Result<Self> {
        if values.len() != grid.len() {
            return Err(Error::InvalidGrid(format!(
                "value array length {} does not match grid {}x{}",
                values.len(),
                grid.nx(),
                grid.nt()
            )));
        }
        if let Some(k) = values.iter().position(|v| !v.is_finite()) {
            return Err(Error::InvalidGrid(format!(
                "non-finite value at flat index {}",
                k
            )));
        }
        Ok(GridField {
            grid,
            values,
            provenance,
        })
    }

    /// Sample a closed-form function over the grid.
    pub fn sample(
        grid: SpaceTimeGrid,
        provenance: Provenance,
        f: impl Fn(f64, f64) -> f64,
    ) -> Result<Self> {
        let mut values = Vec::with_capacity(grid.len());
        for j in 0..grid.nt() {
            for i in 0..grid.nx() {
                values.push(f(grid.x(i), grid.t(j)));
            }
        }
        GridField::new(grid, values, provenance)
    }

    pub fn grid(&self) -> &SpaceTimeGrid {
        &self.grid
    }

    pub fn provenance(&self) -> Provenance {
        self.provenance
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn value(&self, i: usize, j: usize) -> f64 {
        self.values[self.grid.idx(i, j)]
    }

    /// Write the `x,t,u` CSV, rows ordered by t then x, 17 significant digits
    /// so values round-trip exactly. `regions` appends a fourth column.
    pub fn write_csv(&self, w: &mut impl Write, regions: Option<&[u8]>) -> Result<()> {
        if let Some(r) = regions {
            assert_eq!(r.len(), self.values.len());
            writeln!(w, "x,t,u,region")?;
        } else {
            writeln!(w, "x,t,u")?;
        }
        for j in 0..self.grid.nt() {
            for i in 0..self.grid.nx() {
                let k = self.grid.idx(i, j);
                match regions {
                    Some(r) => writeln!(
                        w,
                        "{:.16e},{:.16e},{:.16e},{}",
                        self.grid.x(i),
                        self.grid.t(j),
                        self.values[k],
                        r[k]
                    )?,
                    None => writeln!(
                        w,
                        "{:.16e},{:.16e},{:.16e}",
                        self.grid.x(i),
                        self.grid.t(j),
                        self.values[k]
                    )?,
                }
            }
        }
        Ok(())
    }

    pub fn write_csv_path(&self, path: &std::path::Path, regions: Option<&[u8]>) -> Result<()> {
        let mut f = std::io::BufWriter::new(std::fs::File::create(path)?);
        self.write_csv(&mut f, regions)
    }

    /// Read a CSV in the canonical node order; a trailing region column is
    /// tolerated and ignored.
    pub fn read_csv(r: impl BufRead) -> Result<Self> {
        let mut rows: Vec<(f64, f64, f64)> = Vec::new();
        for (lineno, line) in r.lines().enumerate() {
            let line = line?;
            let line_number = lineno + 1;
            let trimmed = line.trim();
            if trimmed.is_empty() {
                continue;
            }
            if lineno == 0 {
                if !trimmed.starts_with("x,t,u") {
                    return Err(Error::CsvFormat {
                        line: 1,
                        message: format!("expected header `x,t,u`, got `{}`", trimmed),
                    });
                }
                continue;
            }
            let mut parts = trimmed.split(',');
            let mut next_f64 = |name: &str| -> Result<f64> {
                parts
                    .next()
                    .ok_or_else(|| Error::CsvFormat {
                        line: line_number,
                        message: format!("missing column `{}`", name),
                    })?
                    .trim()
                    .parse::<f64>()
                    .map_err(|e| Error::CsvFormat {
                        line: line_number,
                        message: format!("bad `{}` value: {}", name, e),
                    })
            };
            let x = next_f64("x")?;
            let t = next_f64("t")?;
            let u = next_f64("u")?;
            if !u.is_finite() {
                return Err(Error::CsvFormat {
                    line: line_number,
                    message: "non-finite value".into(),
                });
            }
            rows.push((x, t, u));
        }
        Self::from_rows(&rows)
    }

    pub fn read_csv_path(path: &std::path::Path) -> Result<Self> {
        let f = std::io::BufReader::new(std::fs::File::open(path)?);
        Self::read_csv(f)
    }

    fn from_rows(rows: &[(f64, f64, f64)]) -> Result<Self> {
        if rows.is_empty() {
            return Err(Error::CsvFormat {
                line: 1,
                message: "no data rows".into(),
            });
        }
        // nx = length of the first constant-t block
        let t0 = rows[0].1;
        let nx = rows
            .iter()
            .position(|r| r.1 != t0)
            .unwrap_or(rows.len());
        if nx < 3 || rows.len() % nx != 0 {
            return Err(Error::CsvFormat {
                line: nx + 1,
                message: format!("row count {} not a multiple of nx {}", rows.len(), nx),
            });
        }
        let nt = rows.len() / nx;
        if nt < 3 {
            return Err(Error::CsvFormat {
                line: rows.len(),
                message: format!("need at least 3 time levels, found {}", nt),
            });
        }
        let a = rows[0].0;
        let b = rows[nx - 1].0;
        let grid = SpaceTimeGrid::over_interval(a, b, nx, nt).map_err(|e| Error::CsvFormat {
            line: 1,
            message: e.to_string(),
        })?;
        let tol_x = grid.hx() * 1e-6;
        let tol_t = grid.ht() * 1e-6;
        let mut values = Vec::with_capacity(rows.len());
        for (k, &(x, t, u)) in rows.iter().enumerate() {
            let i = k % nx;
            let j = k / nx;
            if (x - grid.x(i)).abs() > tol_x || (t - grid.t(j)).abs() > tol_t {
                return Err(Error::CsvFormat {
                    line: k + 2,
                    message: format!(
                        "node ({}, {}) out of order or non-uniform (expected ({}, {}))",
                        x,
                        t,
                        grid.x(i),
                        grid.t(j)
                    ),
                });
            }
            values.push(u);
        }
        GridField::new(grid, values, Provenance::File)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn grid(nx: usize, nt: usize) -> SpaceTimeGrid {
        SpaceTimeGrid::over_interval(-1.0, 1.0, nx, nt).unwrap()
    }

    #[test]
    fn grid_shape_and_endpoints() {
        let g = grid(5, 3);
        assert_eq!(g.x(0), -1.0);
        assert_eq!(g.x(4), 1.0);
        assert_eq!(g.t(0), 0.0);
        assert_eq!(g.t(2), 1.0);
        assert!((g.hx() - 0.5).abs() < 1e-15);
    }

    #[test]
    fn grid_rejects_tiny() {
        assert!(SpaceTimeGrid::over_interval(-1.0, 1.0, 2, 3).is_err());
        assert!(SpaceTimeGrid::over_interval(-1.0, 1.0, 3, 2).is_err());
    }

    #[test]
    fn field_rejects_wrong_length_and_nan() {
        let g = grid(3, 3);
        assert!(GridField::new(g.clone(), vec![0.0; 8], Provenance::Oracle).is_err());
        let mut vals = vec![0.0; 9];
        vals[4] = f64::NAN;
        assert!(GridField::new(g, vals, Provenance::Oracle).is_err());
    }

    #[test]
    fn csv_round_trip_is_exact() {
        let g = grid(5, 4);
        let field = GridField::sample(g, Provenance::Oracle, |x, t| x * x - 1.0 + 0.37 * t).unwrap();
        let mut buf = Vec::new();
        field.write_csv(&mut buf, None).unwrap();
        let back = GridField::read_csv(std::io::Cursor::new(buf)).unwrap();
        assert_eq!(back.values(), field.values());
        assert_eq!(back.grid().nx(), 5);
        assert_eq!(back.grid().nt(), 4);
    }

    #[test]
    fn csv_reports_bad_line() {
        let data = "x,t,u\n0,0,1\nbroken,0,1\n";
        match GridField::read_csv(std::io::Cursor::new(data)) {
            Err(Error::CsvFormat { line, .. }) => assert_eq!(line, 3),
            other => panic!("expected csv error, got {:?}", other),
        }
    }

    #[test]
    fn csv_region_column_survives_round_trip() {
        let g = grid(3, 3);
        let field = GridField::sample(g, Provenance::Oracle, |x, _| x).unwrap();
        let regions = vec![1u8; 9];
        let mut buf = Vec::new();
        field.write_csv(&mut buf, Some(&regions)).unwrap();
        let text = String::from_utf8(buf.clone()).unwrap();
        assert!(text.starts_with("x,t,u,region"));
        let back = GridField::read_csv(std::io::Cursor::new(buf)).unwrap();
        assert_eq!(back.values(), field.values());
    }
}
