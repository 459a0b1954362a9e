//! Piecewise-linear growth functions with an optional logarithmic tail.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

const EPS: f64 = 1e-9;

/// `F` through `control_points` (linear in between). With `log_tail_from =
/// Some(x0)`, `F(x) = ln x + F(x0) - ln x0` for `x >= x0`, where `x0` must be
/// the last control abscissa; otherwise the last segment is extended.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GrowthFunction {
    pub control_points: Vec<[f64; 2]>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub log_tail_from: Option<f64>,
}

impl GrowthFunction {
    pub fn new(control_points: Vec<[f64; 2]>, log_tail_from: Option<f64>) -> Result<Self> {
        let f = GrowthFunction { control_points, log_tail_from };
        f.validate()?;
        Ok(f)
    }

    /// Through (0,0), (1,2), (2,3), (5,5) with a natural-log tail from 5.
    /// With k = 2 it admits no cycle shorter than five.
    pub fn girth_five() -> Self {
        GrowthFunction {
            control_points: vec![[0.0, 0.0], [1.0, 2.0], [2.0, 3.0], [5.0, 5.0]],
            log_tail_from: Some(5.0),
        }
    }

    /// Built-in functions by name.
    pub fn preset(name: &str) -> Option<Self> {
        match name {
            "girth5" | "example321" => Some(Self::girth_five()),
            _ => None,
        }
    }

    pub fn validate(&self) -> Result<()> {
        let pts = &self.control_points;
        if pts.len() < 2 {
            return Err(Error::domain("growth function needs at least two control points"));
        }
        if pts[0] != [0.0, 0.0] {
            return Err(Error::domain("growth function must start at (0, 0)"));
        }
        for w in pts.windows(2) {
            if !(w[1][0] > w[0][0] && w[1][1] > w[0][1]) {
                return Err(Error::domain("control points must be strictly increasing in both coordinates"));
            }
        }
        if pts.iter().flatten().any(|v| !v.is_finite()) {
            return Err(Error::domain("control points must be finite"));
        }
        if let Some(x0) = self.log_tail_from {
            if (x0 - pts[pts.len() - 1][0]).abs() > EPS || x0 <= 0.0 {
                return Err(Error::domain("log_tail_from must be the last (positive) control abscissa"));
            }
        }
        Ok(())
    }

    fn last(&self) -> [f64; 2] {
        self.control_points[self.control_points.len() - 1]
    }

    pub fn eval(&self, x: f64) -> f64 {
        let pts = &self.control_points;
        if x <= 0.0 {
            return 0.0;
        }
        for w in pts.windows(2) {
            let ([x0, y0], [x1, y1]) = (w[0], w[1]);
            if x <= x1 {
                return y0 + (y1 - y0) * (x - x0) / (x1 - x0);
            }
        }
        let [xl, yl] = self.last();
        match self.log_tail_from {
            Some(_) => x.ln() + yl - xl.ln(),
            None => {
                let [xp, yp] = pts[pts.len() - 2];
                yl + (yl - yp) / (xl - xp) * (x - xl)
            }
        }
    }

    /// Right derivative at `x`.
    pub fn right_slope(&self, x: f64) -> f64 {
        let pts = &self.control_points;
        for w in pts.windows(2) {
            let ([x0, y0], [x1, y1]) = (w[0], w[1]);
            if x < x1 && x >= x0 {
                return (y1 - y0) / (x1 - x0);
            }
        }
        match self.log_tail_from {
            Some(_) => 1.0 / x,
            None => {
                let [xp, yp] = pts[pts.len() - 2];
                let [xl, yl] = self.last();
                (yl - yp) / (xl - xp)
            }
        }
    }

    /// Right slopes never increase (segment slopes, then the tail).
    pub fn is_concave(&self) -> bool {
        let slopes: Vec<f64> = self
            .control_points
            .windows(2)
            .map(|w| (w[1][1] - w[0][1]) / (w[1][0] - w[0][0]))
            .collect();
        let segments_ok = slopes.windows(2).all(|s| s[1] <= s[0] + EPS);
        let tail_ok = match self.log_tail_from {
            Some(x0) => 1.0 / x0 <= slopes[slopes.len() - 1] + EPS,
            None => true,
        };
        segments_ok && tail_ok
    }

    /// Least `x >= 0` with `F(x) >= y`.
    pub fn inverse(&self, y: f64) -> f64 {
        if y <= 0.0 {
            return 0.0;
        }
        for w in self.control_points.windows(2) {
            let ([x0, y0], [x1, y1]) = (w[0], w[1]);
            if y <= y1 {
                return x0 + (y - y0) * (x1 - x0) / (y1 - y0);
            }
        }
        let [xl, yl] = self.last();
        match self.log_tail_from {
            Some(_) => (y - yl + xl.ln()).exp(),
            None => {
                let [xp, yp] = self.control_points[self.control_points.len() - 2];
                xl + (y - yl) * (xl - xp) / (yl - yp)
            }
        }
    }

    /// Whether `F(n) <= y` up to rounding, i.e. `n <= F^{-1}(y)`.
    pub fn within_inverse(&self, n: usize, y: f64) -> bool {
        self.eval(n as f64) <= y + EPS
    }

    /// Whether a subset of size `n` with predimension `d` satisfies `d >= F(n)`.
    pub fn admits(&self, n: usize, d: i64) -> bool {
        d as f64 + EPS >= self.eval(n as f64)
    }
}

/// Sampled shape checks for a growth function.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GrowthReport {
    /// `F` strictly increases along the grid.
    pub monotone: bool,
    /// Right slopes never increase along the grid.
    pub slopes_non_increasing: bool,
    /// Slopes of the linear pieces, in order.
    pub segment_slopes: Vec<f64>,
    /// Grid points where the right slope exceeds `1/x`.
    pub flagged: Vec<f64>,
}

/// Samples `F` at `grid, 2·grid, ...` up to twice the last control abscissa
/// (and at least up to 10).
pub fn growth_check(f: &GrowthFunction, grid: f64) -> Result<GrowthReport> {
    if !(grid > 0.0 && grid.is_finite()) {
        return Err(Error::domain("grid spacing must be positive"));
    }
    f.validate()?;
    let upto = (2.0 * f.last()[0]).max(10.0);
    let steps = (upto / grid).floor() as usize;
    let xs: Vec<f64> = (1..=steps).map(|i| i as f64 * grid).collect();
    let monotone = xs.windows(2).all(|w| f.eval(w[1]) > f.eval(w[0]));
    let slopes: Vec<f64> = xs.iter().map(|&x| f.right_slope(x)).collect();
    let slopes_non_increasing = slopes.windows(2).all(|s| s[1] <= s[0] + EPS);
    let flagged = xs
        .iter()
        .zip(&slopes)
        .filter(|&(&x, &s)| s > 1.0 / x + EPS)
        .map(|(&x, _)| x)
        .collect();
    let segment_slopes = f
        .control_points
        .windows(2)
        .map(|w| (w[1][1] - w[0][1]) / (w[1][0] - w[0][0]))
        .collect();
    Ok(GrowthReport { monotone, slopes_non_increasing, segment_slopes, flagged })
}
