use std::fs::{self, File};
use std::io::{BufWriter, Write};
use std::path::{Path, PathBuf};

use crate::error::{Error, Result};
use crate::model::{Grid1D, Grid2D};

use super::table::fmt_value;

fn write_text(path: &Path, body: impl FnOnce(&mut BufWriter<File>) -> std::io::Result<()>) -> Result<()> {
    if let Some(dir) = path.parent() {
        fs::create_dir_all(dir).map_err(|e| Error::io(dir, e))?;
    }
    let file = File::create(path).map_err(|e| Error::io(path, e))?;
    let mut w = BufWriter::new(file);
    body(&mut w).and_then(|_| w.flush()).map_err(|e| Error::io(path, e))
}

fn check_len(n: usize, values: &[f64]) -> Result<()> {
    if values.len() != n {
        return Err(Error::InvalidGrid(format!(
            "field has {} values for {n} nodes",
            values.len()
        )));
    }
    Ok(())
}

/// `x,value` rows in node order.
pub fn write_profile_1d(path: &Path, grid: &Grid1D, values: &[f64]) -> Result<()> {
    check_len(grid.len(), values)?;
    write_text(path, |w| {
        writeln!(w, "x,value")?;
        for (i, v) in values.iter().enumerate() {
            writeln!(w, "{},{}", fmt_value(grid.x(i)), fmt_value(*v))?;
        }
        Ok(())
    })
}

/// `x,y,value` rows, `x` varying fastest.
pub fn write_profile_2d(path: &Path, grid: &Grid2D, values: &[f64]) -> Result<()> {
    check_len(grid.len(), values)?;
    write_text(path, |w| {
        writeln!(w, "x,y,value")?;
        for j in 0..grid.ny() {
            for i in 0..grid.nx() {
                let v = values[grid.index(i, j)];
                writeln!(w, "{},{},{}", fmt_value(grid.x(i)), fmt_value(grid.y(j)), fmt_value(v))?;
            }
        }
        Ok(())
    })
}

pub fn write_string(path: &Path, text: &str) -> Result<()> {
    write_text(path, |w| w.write_all(text.as_bytes()))
}

/// Numbered series of profiles in one directory: `<prefix>_000000.csv`, ...
#[derive(Debug, Clone)]
pub struct SnapshotSeries {
    dir: PathBuf,
    prefix: String,
    next: usize,
}

impl SnapshotSeries {
    pub fn new(dir: impl Into<PathBuf>, prefix: &str) -> Self {
        SnapshotSeries {
            dir: dir.into(),
            prefix: prefix.to_string(),
            next: 0,
        }
    }

    pub fn written(&self) -> usize {
        self.next
    }

    fn next_path(&mut self) -> PathBuf {
        let p = self.dir.join(format!("{}_{:06}.csv", self.prefix, self.next));
        self.next += 1;
        p
    }

    pub fn push_1d(&mut self, grid: &Grid1D, values: &[f64]) -> Result<()> {
        let p = self.next_path();
        write_profile_1d(&p, grid, values)
    }

    pub fn push_2d(&mut self, grid: &Grid2D, values: &[f64]) -> Result<()> {
        let p = self.next_path();
        write_profile_2d(&p, grid, values)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_1d_profile() {
        let dir = tempfile::tempdir().unwrap();
        let p = dir.path().join("a/b.csv");
        let g = Grid1D::new(1.0, 3).unwrap();
        write_profile_1d(&p, &g, &[0.0, 0.5, 0.0]).unwrap();
        let text = fs::read_to_string(&p).unwrap();
        let lines: Vec<&str> = text.lines().collect();
        assert_eq!(lines.len(), 4);
        assert_eq!(lines[0], "x,value");
        assert_eq!(lines[2], "5.0000000000000000e-1,5.0000000000000000e-1");
        let back: f64 = lines[2].split(',').nth(1).unwrap().parse().unwrap();
        assert_eq!(back, 0.5);
    }

    #[test]
    fn plane_profile_is_row_major() {
        let dir = tempfile::tempdir().unwrap();
        let p = dir.path().join("f.csv");
        let g = Grid2D::square(1.0, 4).unwrap();
        let vals: Vec<f64> = (0..16).map(|k| k as f64).collect();
        write_profile_2d(&p, &g, &vals).unwrap();
        let text = fs::read_to_string(&p).unwrap();
        let rows: Vec<Vec<f64>> = text
            .lines()
            .skip(1)
            .map(|l| l.split(',').map(|s| s.parse().unwrap()).collect())
            .collect();
        assert_eq!(rows.len(), 16);
        for (k, r) in rows.iter().enumerate() {
            assert_eq!(r[2], k as f64);
            assert_eq!(r[0], g.x(k % 4));
            assert_eq!(r[1], g.y(k / 4));
        }
    }

    #[test]
    fn length_mismatch_and_io_errors() {
        let dir = tempfile::tempdir().unwrap();
        let g = Grid1D::new(1.0, 3).unwrap();
        assert!(write_profile_1d(&dir.path().join("x.csv"), &g, &[1.0]).is_err());
        let blocker = dir.path().join("file");
        fs::write(&blocker, "").unwrap();
        match write_profile_1d(&blocker.join("x.csv"), &g, &[0.0; 3]) {
            Err(Error::Io { path, .. }) => assert!(path.starts_with(&blocker)),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn snapshot_series_is_zero_padded() {
        let dir = tempfile::tempdir().unwrap();
        let g = Grid1D::new(1.0, 3).unwrap();
        let mut s = SnapshotSeries::new(dir.path(), "u");
        for _ in 0..12 {
            s.push_1d(&g, &[0.0; 3]).unwrap();
        }
        let mut names: Vec<String> = fs::read_dir(dir.path())
            .unwrap()
            .map(|e| e.unwrap().file_name().into_string().unwrap())
            .collect();
        names.sort();
        assert_eq!(names.len(), 12);
        assert_eq!(names[0], "u_000000.csv");
        assert_eq!(names[11], "u_000011.csv");
    }
}
