//! Preference kernels `f(D)` weighting candidate vertices by distance.

use serde::{Deserialize, Serialize};

use crate::error::{GpmError, Result};

/// Piecewise-linear kernel given by `(distance, weight)` nodes.
///
/// Distances are strictly increasing from 0 and `f(0) = 1`. Beyond the last
/// node the last weight is held.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct KernelTable {
    points: Vec<(f64, f64)>,
}

impl KernelTable {
    pub fn new(points: Vec<(f64, f64)>) -> Result<Self> {
        let bad = |msg: String| Err(GpmError::InvalidKernel(msg));
        if points.is_empty() {
            return bad("kernel table is empty".into());
        }
        if points[0].0 != 0.0 {
            return bad(format!("first distance must be 0, got {}", points[0].0));
        }
        if points[0].1 != 1.0 {
            return bad(format!("kernel must satisfy f(0) = 1, got {}", points[0].1));
        }
        for (i, &(x, w)) in points.iter().enumerate() {
            if !x.is_finite() || !w.is_finite() {
                return bad(format!("row {}: non-finite value", i + 1));
            }
            if w < 0.0 {
                return bad(format!("row {}: negative weight {w}", i + 1));
            }
            if i > 0 && x <= points[i - 1].0 {
                return bad(format!("row {}: distances must be strictly increasing", i + 1));
            }
        }
        Ok(Self { points })
    }

    /// Parses two whitespace- or comma-separated columns `distance weight`.
    /// Blank lines and `#` comments are skipped.
    pub fn parse(text: &str) -> Result<Self> {
        let mut points = Vec::new();
        for (lineno, line) in text.lines().enumerate() {
            let line = line.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let fields: Vec<&str> =
                line.split(|c: char| c == ',' || c.is_whitespace()).filter(|s| !s.is_empty()).collect();
            if fields.len() != 2 {
                return Err(GpmError::Format {
                    line: lineno + 1,
                    message: format!("expected 2 columns, found {}", fields.len()),
                });
            }
            let parse = |s: &str| {
                s.parse::<f64>().map_err(|e| GpmError::Format { line: lineno + 1, message: format!("{s:?}: {e}") })
            };
            points.push((parse(fields[0])?, parse(fields[1])?));
        }
        Self::new(points)
    }

    pub fn points(&self) -> &[(f64, f64)] {
        &self.points
    }

    pub fn eval(&self, x: f64) -> f64 {
        let pts = &self.points;
        let idx = pts.partition_point(|&(d, _)| d <= x);
        if idx == 0 {
            return pts[0].1;
        }
        if idx == pts.len() {
            return pts[pts.len() - 1].1;
        }
        let (x0, y0) = pts[idx - 1];
        let (x1, y1) = pts[idx];
        y0 + (y1 - y0) * (x - x0) / (x1 - x0)
    }

    pub fn max_weight(&self) -> f64 {
        self.points.iter().map(|p| p.1).fold(0.0, f64::max)
    }
}

/// Distance kernel used by the attachment law.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum PreferenceKernel {
    /// `1{D <= radius}`.
    Indicator {
        radius: f64,
    },
    Table(KernelTable),
}

impl PreferenceKernel {
    pub fn eval(&self, dist: f64) -> f64 {
        match self {
            Self::Indicator { radius } => {
                if dist <= *radius {
                    1.0
                } else {
                    0.0
                }
            }
            Self::Table(t) => t.eval(dist),
        }
    }

    pub fn max_weight(&self) -> f64 {
        match self {
            Self::Indicator { .. } => 1.0,
            Self::Table(t) => t.max_weight(),
        }
    }

    pub fn validate(&self) -> Result<()> {
        match self {
            Self::Indicator { radius } if !(*radius >= 0.0) => {
                Err(GpmError::InvalidKernel(format!("negative radius {radius}")))
            }
            Self::Indicator { .. } => Ok(()),
            Self::Table(t) => {
                if t.eval(0.0) != 1.0 {
                    return Err(GpmError::InvalidKernel("kernel must satisfy f(0) = 1".into()));
                }
                Ok(())
            }
        }
    }
}
