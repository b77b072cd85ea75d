//! Dense two-dimensional sample grids and their CSV form.

use std::io::{self, Write};

use serde::{Deserialize, Serialize};

use crate::scalar::Real;

/// Uniform sampling of one axis, inclusive of both ends.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct AxisSpec<T> {
    pub min: T,
    pub max: T,
    pub points: usize,
}

impl<T: Real> AxisSpec<T> {
    pub fn new(min: T, max: T, points: usize) -> Self {
        Self { min, max, points }
    }

    pub fn values(&self) -> Vec<T> {
        match self.points {
            0 => Vec::new(),
            1 => vec![self.min],
            n => {
                let step = (self.max - self.min) / T::from_count(n - 1);
                (0..n).map(|i| self.min + step * T::from_count(i)).collect()
            }
        }
    }

    /// Reflection `[-max, -min]` of this axis.
    pub fn mirrored(&self) -> Self {
        Self { min: -self.max, max: -self.min, points: self.points }
    }
}

/// Row-major samples `value(u_i, v_j)`; `None` marks masked points.
#[derive(Debug, Clone, PartialEq)]
pub struct Grid2<T> {
    pub u_label: String,
    pub v_label: String,
    pub value_label: String,
    pub u: Vec<T>,
    pub v: Vec<T>,
    pub values: Vec<Option<T>>,
}

impl<T: Real> Grid2<T> {
    pub fn get(&self, i: usize, j: usize) -> Option<T> {
        self.values[i * self.v.len() + j]
    }

    /// Largest unmasked sample and its `(i, j)` index.
    pub fn argmax(&self) -> Option<((usize, usize), T)> {
        self.extremum(|a, b| a > b)
    }

    pub fn argmin(&self) -> Option<((usize, usize), T)> {
        self.extremum(|a, b| a < b)
    }

    fn extremum(&self, better: impl Fn(T, T) -> bool) -> Option<((usize, usize), T)> {
        let nv = self.v.len();
        let mut best: Option<((usize, usize), T)> = None;
        for (k, value) in self.values.iter().enumerate() {
            if let Some(x) = *value {
                if best.is_none_or(|(_, b)| better(x, b)) {
                    best = Some(((k / nv, k % nv), x));
                }
            }
        }
        best
    }

    /// Writes `# <header>` lines, the column declaration, then one
    /// `u,v,value` row per sample. Masked samples are written as `nan`.
    pub fn write_csv<W: Write>(&self, mut out: W, header: &[String]) -> io::Result<()> {
        for line in header {
            writeln!(out, "# {line}")?;
        }
        writeln!(out, "# columns: {}, {}, {}", self.u_label, self.v_label, self.value_label)?;
        let nv = self.v.len();
        for (i, u) in self.u.iter().enumerate() {
            for (j, v) in self.v.iter().enumerate() {
                match self.values[i * nv + j] {
                    Some(x) => writeln!(out, "{},{},{}", fmt_num(*u), fmt_num(*v), fmt_num(x))?,
                    None => writeln!(out, "{},{},nan", fmt_num(*u), fmt_num(*v))?,
                }
            }
        }
        Ok(())
    }
}

/// Samples along a single coordinate.
#[derive(Debug, Clone, PartialEq)]
pub struct Cut1<T> {
    pub x_label: String,
    pub value_label: String,
    pub x: Vec<T>,
    pub values: Vec<Option<T>>,
}

impl<T: Real> Cut1<T> {
    pub fn write_csv<W: Write>(&self, mut out: W, header: &[String]) -> io::Result<()> {
        for line in header {
            writeln!(out, "# {line}")?;
        }
        writeln!(out, "# columns: {}, {}", self.x_label, self.value_label)?;
        for (x, value) in self.x.iter().zip(&self.values) {
            match value {
                Some(v) => writeln!(out, "{},{}", fmt_num(*x), fmt_num(*v))?,
                None => writeln!(out, "{},nan", fmt_num(*x))?,
            }
        }
        Ok(())
    }

    pub fn argmin(&self) -> Option<(usize, T)> {
        let mut best: Option<(usize, T)> = None;
        for (k, value) in self.values.iter().enumerate() {
            if let Some(x) = *value {
                if best.is_none_or(|(_, b)| x < b) {
                    best = Some((k, x));
                }
            }
        }
        best
    }
}

/// Shortest round-trip decimal form, stable across runs.
pub fn fmt_num<T: Real>(x: T) -> String {
    let v = x.as_f64();
    if v.is_nan() {
        "nan".to_string()
    } else {
        format!("{v:e}")
    }
}
