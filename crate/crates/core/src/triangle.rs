//! Level curves of `U` in the three-outcome (Marschak-Machina) triangle.
//!
//! Points are placed in the plane with the probability of the worst outcome
//! on the horizontal axis and the probability of the best outcome on the
//! vertical axis.

use alloc::vec::Vec;

use thiserror::Error;

use crate::engine::{EngineError, RepresentationContext};
use crate::search::{locate_level, SearchFailure, Side};
use crate::simplex::{degenerate, mix, Lottery};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum TriangleError {
    #[error("WrongDimension: the triangle needs exactly 3 outcomes, got {0}")]
    WrongDimension(usize),
    #[error("NonDegenerateExtremes: x* and x_* must be simplex vertices")]
    NonDegenerateExtremes,
    #[error("level {0} outside [0, 1]")]
    LevelOutOfRange(f64),
    #[error(transparent)]
    Engine(#[from] EngineError),
}

impl TriangleError {
    pub fn name(&self) -> &'static str {
        match self {
            TriangleError::WrongDimension(_) => "WrongDimension",
            TriangleError::NonDegenerateExtremes => "NonDegenerateExtremes",
            TriangleError::LevelOutOfRange(_) => "LevelOutOfRange",
            TriangleError::Engine(e) => e.name(),
        }
    }
}

/// Outcome indices ordered worst, middle, best.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize))]
pub struct TriangleAxes {
    pub worst: usize,
    pub middle: usize,
    pub best: usize,
}

impl TriangleAxes {
    pub fn of(ctx: &RepresentationContext) -> Result<Self, TriangleError> {
        if ctx.outcomes() != 3 {
            return Err(TriangleError::WrongDimension(ctx.outcomes()));
        }
        let best = ctx.x_star().degenerate_index().ok_or(TriangleError::NonDegenerateExtremes)?;
        let worst = ctx.x_low().degenerate_index().ok_or(TriangleError::NonDegenerateExtremes)?;
        Ok(Self { worst, middle: 3 - best - worst, best })
    }

    /// `(p_worst, p_best)`.
    pub fn project(&self, x: &Lottery) -> (f64, f64) {
        (x[self.worst], x[self.best])
    }
}

#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize))]
pub struct LevelCurve {
    pub level: f64,
    pub points: Vec<Lottery>,
    /// Largest distance of a projected point from the best-fit line.
    pub collinearity_residual: f64,
}

/// Traces `{x : x ~ m_level}` on `slices` horizontal slices of constant
/// middle-outcome probability `c = k / slices`, `k = 0..slices`.
///
/// On each slice `x(s) = c d_mid + (1 - c) m_s` the ranking is monotone in `s`,
/// and the crossing is located by bisection where the slice ends straddle
/// the level.
pub fn level_curve(ctx: &RepresentationContext, level: f64, slices: usize) -> Result<LevelCurve, TriangleError> {
    if !(0.0..=1.0).contains(&level) {
        return Err(TriangleError::LevelOutOfRange(level));
    }
    let axes = TriangleAxes::of(ctx)?;
    let model = ctx.model();
    let target = ctx.chord(level)?;
    let mid = degenerate(axes.middle, 3).map_err(EngineError::from)?;
    let mut points = Vec::new();
    for k in 0..slices.max(1) {
        let c = k as f64 / slices.max(1) as f64;
        let low = mix(c, &mid, ctx.x_low()).map_err(EngineError::from)?;
        let high = mix(c, &mid, ctx.x_star()).map_err(EngineError::from)?;
        let found = locate_level(0.0, 1.0, ctx.tol_t(), ctx.max_iter(), |s| -> Result<Side, EngineError> {
            let x = mix(s, &high, &low)?;
            Ok(Side::of(model.compare(&x, &target)?))
        });
        match found {
            Ok(s) => points.push(mix(s, &high, &low).map_err(EngineError::from)?),
            Err(SearchFailure::NotBracketed { .. }) => continue,
            Err(SearchFailure::Probe(e)) => return Err(e.into()),
            Err(SearchFailure::IterationLimit) => return Err(EngineError::IterationLimit(ctx.max_iter()).into()),
            Err(SearchFailure::NotMonotone { at }) => return Err(EngineError::NonMonotoneChord { at }.into()),
        }
    }
    let projected: Vec<(f64, f64)> = points.iter().map(|p| axes.project(p)).collect();
    Ok(LevelCurve { level, collinearity_residual: collinearity_residual(&projected), points })
}

/// Total-least-squares line through `points`; returns the largest
/// perpendicular distance to it.
pub fn collinearity_residual(points: &[(f64, f64)]) -> f64 {
    if points.len() < 3 {
        return 0.0;
    }
    let n = points.len() as f64;
    let (mx, my) = points.iter().fold((0.0, 0.0), |(a, b), (x, y)| (a + x / n, b + y / n));
    let (mut sxx, mut sxy, mut syy) = (0.0, 0.0, 0.0);
    for (x, y) in points {
        let (dx, dy) = (x - mx, y - my);
        sxx += dx * dx;
        sxy += dx * dy;
        syy += dy * dy;
    }
    // normal = eigenvector of the smaller eigenvalue of the scatter matrix
    let theta = 0.5 * libm::atan2(2.0 * sxy, sxx - syy);
    let (nx, ny) = (-libm::sin(theta), libm::cos(theta));
    points.iter().map(|(x, y)| ((x - mx) * nx + (y - my) * ny).abs()).fold(0.0, f64::max)
}

/// Fits `y = a + b x` by least squares to projected curve points.
pub fn fit_line(points: &[(f64, f64)]) -> Option<(f64, f64)> {
    let n = points.len() as f64;
    let (mx, my) = points.iter().fold((0.0, 0.0), |(a, b), (x, y)| (a + x / n, b + y / n));
    let sxx: f64 = points.iter().map(|(x, _)| (x - mx) * (x - mx)).sum();
    if points.len() < 2 || sxx < 1e-15 {
        return None;
    }
    let sxy: f64 = points.iter().map(|(x, y)| (x - mx) * (y - my)).sum();
    let b = sxy / sxx;
    Some((my - b * mx, b))
}
