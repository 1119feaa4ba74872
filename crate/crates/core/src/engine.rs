//! The constructive representation: extremes, the chord `m_t`, the utility
//! `U`, the mixing weight `mu`, the local utility `v_t` and `u(x, t)`.
//!
//! Everything is relative to a [`RepresentationContext`], which fixes a best
//! element `x*` and a worst element `x_*`. `U(x)` is the position on the
//! chord `m_t = t x* + (1 - t) x_*` that `x` is indifferent to. For a level
//! `t` in `(0, 1)`, `mu(x, t)` is the weight with
//! `m_t ~ mu x + (1 - mu) xi_t(x)`, where `xi_t(x)` is `x_*` when `x` is
//! weakly above `m_t` and `x*` otherwise. The local utility is then
//!
//! ```text
//! v_t(x) = t / mu                 if x >= m_t
//!        = 1 - (1 - t) / mu       otherwise
//! ```

use alloc::vec::Vec;

use thiserror::Error;

use crate::preference::{ModelError, Ordering, PreferenceModel};
use crate::search::{locate_level, SearchFailure, Side};
use crate::simplex::{degenerate, mix, Lottery, SimplexError};

pub const DEFAULT_TOL_T: f64 = 1e-10;
pub const DEFAULT_MAX_ITER: usize = 200;
/// Smallest admissible mixing weight.
pub const MU_FLOOR: f64 = 1e-12;
/// Points of the coarse scan used by [`RepresentationContext::fixed_point_of_u`].
const FIXED_POINT_SCAN: usize = 64;
/// `|u(x, t) - t|` at or below this counts as a zero of the fixed-point gap.
pub const FIXED_POINT_BAND: f64 = 1e-12;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum EngineError {
    #[error("DegeneratePreference: no strict pair among the simplex vertices")]
    DegeneratePreference,
    #[error("InvalidExtremes: x* is not strictly preferred to x_*")]
    InvalidExtremes,
    #[error("ParameterOutOfRange: {name} = {value}")]
    ParameterOutOfRange { name: &'static str, value: f64 },
    #[error("NonMonotoneChord: inconsistent comparisons along the chord near t = {at}")]
    NonMonotoneChord { at: f64 },
    #[error("NoCrossing: no indifference crossing on the segment toward xi at level t = {t}")]
    NoCrossing { t: f64 },
    #[error("IterationLimit: bisection exceeded {0} iterations")]
    IterationLimit(usize),
    #[error("MultipleFixedPoints: u(x, .) - t has {roots} roots on the scan grid")]
    MultipleFixedPoints { roots: usize },
    #[error("Model: {0}")]
    Model(#[from] ModelError),
    #[error("Simplex: {0}")]
    Simplex(#[from] SimplexError),
}

impl EngineError {
    /// Stable identifier of the error variant.
    pub fn name(&self) -> &'static str {
        match self {
            EngineError::DegeneratePreference => "DegeneratePreference",
            EngineError::InvalidExtremes => "InvalidExtremes",
            EngineError::ParameterOutOfRange { .. } => "ParameterOutOfRange",
            EngineError::NonMonotoneChord { .. } => "NonMonotoneChord",
            EngineError::NoCrossing { .. } => "NoCrossing",
            EngineError::IterationLimit(_) => "IterationLimit",
            EngineError::MultipleFixedPoints { .. } => "MultipleFixedPoints",
            EngineError::Model(_) => "ModelError",
            EngineError::Simplex(_) => "SimplexError",
        }
    }
}

/// Which extreme `xi_t(x)` the mixing weight pairs `x` with.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize))]
pub enum XiBranch {
    /// `x` is weakly above `m_t`; `xi_t(x) = x_*`.
    UsedWorst,
    /// `x` is strictly below `m_t`; `xi_t(x) = x*`.
    UsedBest,
}

impl XiBranch {
    /// The local utility recovered from `(t, mu)` on this branch.
    pub fn local_value(self, t: f64, mu: f64) -> f64 {
        match self {
            XiBranch::UsedWorst => t / mu,
            XiBranch::UsedBest => 1.0 - (1.0 - t) / mu,
        }
    }
}

/// One evaluation of the local utility.
#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize))]
pub struct LocalUtilitySample {
    pub x: Lottery,
    pub t: f64,
    pub mu: f64,
    pub xi_branch: XiBranch,
    pub v: f64,
}

/// Degenerate lotteries maximizing and minimizing preference among the `n`
/// vertices of the simplex.
///
/// Under betweenness preferences are quasi-concave and quasi-convex, so
/// vertex extremes are global extremes.
pub fn find_extremes(model: &PreferenceModel, n: usize) -> Result<(Lottery, Lottery), EngineError> {
    let vertices: Vec<Lottery> = (0..n).map(|i| degenerate(i, n)).collect::<Result<_, _>>()?;
    let mut best = 0;
    let mut worst = 0;
    for i in 1..n {
        if model.compare(&vertices[i], &vertices[best])? == Ordering::StrictlyPrefers {
            best = i;
        }
        if model.compare(&vertices[i], &vertices[worst])? == Ordering::StrictlyDispreferred {
            worst = i;
        }
    }
    if best == worst || model.compare(&vertices[best], &vertices[worst])? != Ordering::StrictlyPrefers {
        return Err(EngineError::DegeneratePreference);
    }
    Ok((vertices[best].clone(), vertices[worst].clone()))
}

/// The frame `{x*, x_*, t -> m_t}` of the construction, plus solver settings.
#[derive(Debug, Clone)]
pub struct RepresentationContext {
    model: PreferenceModel,
    x_star: Lottery,
    x_low: Lottery,
    tol_t: f64,
    max_iter: usize,
}

impl RepresentationContext {
    /// Builds the context with extremes found among the vertices of the
    /// `n`-outcome simplex.
    pub fn new(model: PreferenceModel, n: usize) -> Result<Self, EngineError> {
        let (x_star, x_low) = find_extremes(&model, n)?;
        Ok(Self { model, x_star, x_low, tol_t: DEFAULT_TOL_T, max_iter: DEFAULT_MAX_ITER })
    }

    /// Builds the context from the model's declared outcome count.
    pub fn for_model(model: PreferenceModel) -> Result<Self, EngineError> {
        let n = model.outcomes().ok_or(EngineError::Model(ModelError::NoOutcomes))?;
        Self::new(model, n)
    }

    /// Builds the context with caller-supplied extremes.
    pub fn with_extremes(model: PreferenceModel, x_star: Lottery, x_low: Lottery) -> Result<Self, EngineError> {
        if model.compare(&x_star, &x_low)? != Ordering::StrictlyPrefers {
            return Err(EngineError::InvalidExtremes);
        }
        Ok(Self { model, x_star, x_low, tol_t: DEFAULT_TOL_T, max_iter: DEFAULT_MAX_ITER })
    }

    pub fn with_tolerance(mut self, tol_t: f64, max_iter: usize) -> Result<Self, EngineError> {
        if !(tol_t > 0.0 && tol_t < 1.0) {
            return Err(EngineError::ParameterOutOfRange { name: "tol_t", value: tol_t });
        }
        self.tol_t = tol_t;
        self.max_iter = max_iter;
        Ok(self)
    }

    pub fn model(&self) -> &PreferenceModel {
        &self.model
    }

    pub fn x_star(&self) -> &Lottery {
        &self.x_star
    }

    pub fn x_low(&self) -> &Lottery {
        &self.x_low
    }

    pub fn tol_t(&self) -> f64 {
        self.tol_t
    }

    pub fn max_iter(&self) -> usize {
        self.max_iter
    }

    pub fn outcomes(&self) -> usize {
        self.x_star.len()
    }

    /// The chord point `m_t = t x* + (1 - t) x_*`.
    pub fn chord(&self, t: f64) -> Result<Lottery, EngineError> {
        if !(0.0..=1.0).contains(&t) {
            return Err(EngineError::ParameterOutOfRange { name: "t", value: t });
        }
        Ok(mix(t, &self.x_star, &self.x_low)?)
    }

    fn search_error(&self, failure: SearchFailure<EngineError>, on_chord: Option<f64>) -> EngineError {
        match failure {
            SearchFailure::Probe(e) => e,
            SearchFailure::IterationLimit => EngineError::IterationLimit(self.max_iter),
            SearchFailure::NotMonotone { at } => match on_chord {
                None => EngineError::NonMonotoneChord { at },
                Some(t) => EngineError::NoCrossing { t },
            },
            SearchFailure::NotBracketed { .. } => match on_chord {
                None => EngineError::NonMonotoneChord { at: f64::NAN },
                Some(t) => EngineError::NoCrossing { t },
            },
        }
    }

    /// `U(x)`: the `t` with `x ~ m_t`, by bisection along the chord.
    pub fn solve_u(&self, x: &Lottery) -> Result<f64, EngineError> {
        locate_level(0.0, 1.0, self.tol_t, self.max_iter, |t| {
            let m = self.chord(t)?;
            Ok(Side::of(self.model.compare(&m, x)?))
        })
        .map_err(|f| self.search_error(f, None))
    }

    /// `xi_t(x)` and the branch it corresponds to.
    pub fn xi(&self, x: &Lottery, t: f64) -> Result<(XiBranch, &Lottery), EngineError> {
        let m = self.chord(t)?;
        Ok(if self.model.compare(x, &m)?.is_weakly_preferred() {
            (XiBranch::UsedWorst, &self.x_low)
        } else {
            (XiBranch::UsedBest, &self.x_star)
        })
    }

    /// `mu(x, t)` with `m_t ~ mu x + (1 - mu) xi_t(x)`, for `t` in `(0, 1)`.
    pub fn solve_mu(&self, x: &Lottery, t: f64) -> Result<(f64, XiBranch), EngineError> {
        if !(t > 0.0 && t < 1.0) {
            return Err(EngineError::ParameterOutOfRange { name: "t", value: t });
        }
        let m = self.chord(t)?;
        let (branch, xi) = self.xi(x, t)?;
        // orient the predicate so that lam = 0 (at xi) reads Below
        let mu = locate_level(0.0, 1.0, self.tol_t, self.max_iter, |lam| {
            let z = mix(lam, x, xi)?;
            let ord = match branch {
                XiBranch::UsedWorst => self.model.compare(&z, &m)?,
                XiBranch::UsedBest => self.model.compare(&m, &z)?,
            };
            Ok(Side::of(ord))
        })
        .map_err(|f| self.search_error(f, Some(t)))?;
        if mu < MU_FLOOR {
            return Err(EngineError::NoCrossing { t });
        }
        Ok((mu.min(1.0), branch))
    }

    /// The local utility `v_t(x)` with the quantities it was computed from.
    pub fn local_utility(&self, x: &Lottery, t: f64) -> Result<LocalUtilitySample, EngineError> {
        let (mu, xi_branch) = self.solve_mu(x, t)?;
        Ok(LocalUtilitySample { x: x.clone(), t, mu, xi_branch, v: xi_branch.local_value(t, mu) })
    }

    /// `u(x, t)`: indicator values at `t = 0, 1`, the local utility inside.
    pub fn eval_u(&self, x: &Lottery, t: f64) -> Result<f64, EngineError> {
        if t == 0.0 {
            let worst = self.model.compare(x, &self.x_low)? == Ordering::Indifferent;
            return Ok(if worst { 0.0 } else { 1.0 });
        }
        if t == 1.0 {
            let best = self.model.compare(x, &self.x_star)? == Ordering::Indifferent;
            return Ok(if best { 1.0 } else { 0.0 });
        }
        if !(t > 0.0 && t < 1.0) {
            return Err(EngineError::ParameterOutOfRange { name: "t", value: t });
        }
        Ok(self.local_utility(x, t)?.v)
    }

    /// The fixed point `t = u(x, t)`, located independently of [`Self::solve_u`].
    ///
    /// A coarse scan counts the roots of `u(x, t) - t`; a unique root is then
    /// refined by bisection on the sign of the gap.
    pub fn fixed_point_of_u(&self, x: &Lottery) -> Result<f64, EngineError> {
        let ts: Vec<f64> = (0..=FIXED_POINT_SCAN).map(|k| k as f64 / FIXED_POINT_SCAN as f64).collect();
        let gaps: Vec<f64> = ts.iter().map(|&t| Ok(self.eval_u(x, t)? - t)).collect::<Result<_, EngineError>>()?;
        let roots = count_roots(&gaps, FIXED_POINT_BAND);
        if roots != 1 {
            return Err(EngineError::MultipleFixedPoints { roots });
        }
        if gaps[0].abs() <= FIXED_POINT_BAND {
            return Ok(0.0);
        }
        if gaps[FIXED_POINT_SCAN].abs() <= FIXED_POINT_BAND {
            return Ok(1.0);
        }
        let hi = gaps.iter().position(|&g| g < -FIXED_POINT_BAND).unwrap_or(FIXED_POINT_SCAN);
        let lo = gaps[..hi].iter().rposition(|&g| g > FIXED_POINT_BAND).unwrap_or(0);
        locate_level(ts[lo], ts[hi], self.tol_t, self.max_iter, |t| {
            let gap = self.eval_u(x, t)? - t;
            Ok(if gap.abs() <= FIXED_POINT_BAND {
                Side::Level
            } else if gap > 0.0 {
                Side::Below
            } else {
                Side::Above
            })
        })
        .map_err(|f| self.search_error(f, None))
    }

    /// Increments of `u(x, .)` on a uniform grid of `(0, 1)` with `steps`
    /// intervals, and the values next to the endpoints.
    pub fn continuity_profile(&self, x: &Lottery, steps: usize) -> Result<ContinuityProfile, EngineError> {
        let steps = steps.max(2);
        let dt = 1.0 / steps as f64;
        let values: Vec<f64> = (1..steps).map(|k| self.eval_u(x, k as f64 * dt)).collect::<Result<_, _>>()?;
        let max_increment = values.windows(2).map(|w| (w[1] - w[0]).abs()).fold(0.0, f64::max);
        Ok(ContinuityProfile {
            dt,
            max_increment,
            modulus: max_increment / dt,
            near_zero: values[0],
            near_one: values[values.len() - 1],
            at_zero: self.eval_u(x, 0.0)?,
            at_one: self.eval_u(x, 1.0)?,
        })
    }
}

/// Finite-resolution continuity data for `t -> u(x, t)`.
///
/// `near_zero` and `near_one` estimate the one-sided limits at the ends of
/// `(0, 1)`; they need not match the indicator values `at_zero`, `at_one`.
#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize))]
pub struct ContinuityProfile {
    pub dt: f64,
    pub max_increment: f64,
    /// `max_increment / dt`, the instance's observed modulus.
    pub modulus: f64,
    pub near_zero: f64,
    pub near_one: f64,
    pub at_zero: f64,
    pub at_one: f64,
}

/// Number of roots of a sampled function: each run of near-zero samples
/// counts once, as does each sign change between adjacent nonzero samples.
pub fn count_roots(values: &[f64], band: f64) -> usize {
    let sign = |v: f64| {
        if v.abs() <= band {
            0
        } else if v > 0.0 {
            1
        } else {
            -1
        }
    };
    let mut roots = 0;
    let mut prev: Option<i32> = None;
    for &v in values {
        let s = sign(v);
        match (prev, s) {
            (Some(0), 0) => {}
            (_, 0) => roots += 1,
            (Some(p), s) if p != 0 && p != s => roots += 1,
            _ => {}
        }
        prev = Some(s);
    }
    roots
}
