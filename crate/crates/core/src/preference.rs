//! Preference relations on lotteries.
//!
//! Value-based families are evaluated forward through a value function on
//! `[0, 1]` and compared with a single indifference tolerance `eps_pref`.
//! Black-box oracles answer comparisons directly.

use alloc::string::String;
use alloc::sync::Arc;
use alloc::vec::Vec;
use core::fmt;

use thiserror::Error;

use crate::simplex::{Lottery, SimplexError};

/// Default indifference tolerance on the value scale.
pub const DEFAULT_EPS_PREF: f64 = 1e-9;

/// Stopping threshold for the implicit-kernel fixed-point iteration.
const KERNEL_STEP_TOLERANCE: f64 = 1e-13;
const KERNEL_MAX_ITER: usize = 100_000;

/// Outcome of comparing `x` against `y`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
#[cfg_attr(feature = "serde", derive(serde::Serialize))]
pub enum Ordering {
    StrictlyPrefers,
    Indifferent,
    StrictlyDispreferred,
}

impl Ordering {
    /// The ordering of `y` against `x`.
    pub fn reverse(self) -> Self {
        match self {
            Ordering::StrictlyPrefers => Ordering::StrictlyDispreferred,
            Ordering::Indifferent => Ordering::Indifferent,
            Ordering::StrictlyDispreferred => Ordering::StrictlyPrefers,
        }
    }

    /// `x` is weakly preferred to `y`.
    pub fn is_weakly_preferred(self) -> bool {
        self != Ordering::StrictlyDispreferred
    }

    pub fn is_strict(self) -> bool {
        self != Ordering::Indifferent
    }

    fn from_gap(gap: f64, band: f64) -> Self {
        if gap.abs() <= band {
            Ordering::Indifferent
        } else if gap > 0.0 {
            Ordering::StrictlyPrefers
        } else {
            Ordering::StrictlyDispreferred
        }
    }
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum ModelError {
    #[error("model needs at least one outcome")]
    NoOutcomes,
    #[error("utility {value} at outcome {index} outside [0, 1]")]
    UtilityOutOfRange { index: usize, value: f64 },
    #[error("non-constant utilities must attain 0 and 1")]
    NotNormalized,
    #[error("weight {value} at outcome {index} must be positive")]
    NonPositiveWeight { index: usize, value: f64 },
    #[error("disappointment parameter beta = {0} must exceed -1")]
    BetaOutOfRange(f64),
    #[error("expected {expected} entries, got {got}")]
    LengthMismatch { expected: usize, got: usize },
    #[error("kernel: {0}")]
    InvalidKernel(String),
    #[error("kernel Lipschitz constant {0} is not below 1")]
    NotContraction(f64),
    #[error("indifference tolerance {0} must be finite and nonnegative")]
    InvalidTolerance(f64),
    #[error("lottery has {got} outcomes, model has {expected}")]
    DimensionMismatch { expected: usize, got: usize },
    #[error("value is undefined for black-box oracles")]
    NoValueFunction,
    #[error("fixed-point iteration did not converge after {0} iterations")]
    NonConvergence(usize),
    #[error("oracle failure: {0}")]
    Oracle(String),
    #[error(transparent)]
    Simplex(#[from] SimplexError),
}

/// Comparison function behind a black-box oracle.
pub type CompareFn = dyn Fn(&Lottery, &Lottery) -> Result<Ordering, String> + Send + Sync;

/// A preference presented only through pairwise comparisons.
///
/// The oracle is assumed complete, transitive, continuous and to satisfy
/// betweenness; [`crate::axioms`] can audit these assumptions on samples.
#[derive(Clone)]
pub struct Oracle {
    name: String,
    outcomes: Option<usize>,
    concurrent_safe: bool,
    compare: Arc<CompareFn>,
}

impl Oracle {
    pub fn new<F>(name: impl Into<String>, compare: F) -> Self
    where
        F: Fn(&Lottery, &Lottery) -> Result<Ordering, String> + Send + Sync + 'static,
    {
        Self { name: name.into(), outcomes: None, concurrent_safe: false, compare: Arc::new(compare) }
    }

    /// Declares the number of outcomes the oracle is defined on.
    pub fn with_outcomes(mut self, n: usize) -> Self {
        self.outcomes = Some(n);
        self
    }

    /// Declares that the comparison function may be called concurrently.
    pub fn concurrent_safe(mut self, safe: bool) -> Self {
        self.concurrent_safe = safe;
        self
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn is_concurrent_safe(&self) -> bool {
        self.concurrent_safe
    }

    pub fn outcomes(&self) -> Option<usize> {
        self.outcomes
    }
}

impl fmt::Debug for Oracle {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Oracle")
            .field("name", &self.name)
            .field("outcomes", &self.outcomes)
            .field("concurrent_safe", &self.concurrent_safe)
            .finish_non_exhaustive()
    }
}

/// Tabulated kernel `phi(i, t)`, linearly interpolated in `t`.
#[derive(Debug, Clone, PartialEq)]
pub struct Kernel {
    nodes: Vec<f64>,
    /// `values[i][k] = phi(i, nodes[k])`.
    values: Vec<Vec<f64>>,
    lipschitz: f64,
}

impl Kernel {
    /// `nodes` must increase strictly from 0 to 1; `values` holds one row per
    /// outcome with one entry per node, all in `[0, 1]`. The interpolant must
    /// be a contraction in `t`.
    pub fn new(nodes: Vec<f64>, values: Vec<Vec<f64>>) -> Result<Self, ModelError> {
        if nodes.len() < 2 {
            return Err(ModelError::InvalidKernel("need at least two t-nodes".into()));
        }
        if nodes[0] != 0.0 || *nodes.last().unwrap() != 1.0 {
            return Err(ModelError::InvalidKernel("t-nodes must start at 0 and end at 1".into()));
        }
        if nodes.windows(2).any(|w| w[1].partial_cmp(&w[0]) != Some(core::cmp::Ordering::Greater)) {
            return Err(ModelError::InvalidKernel("t-nodes must be strictly increasing".into()));
        }
        if values.is_empty() {
            return Err(ModelError::NoOutcomes);
        }
        let mut lipschitz: f64 = 0.0;
        for (index, row) in values.iter().enumerate() {
            if row.len() != nodes.len() {
                return Err(ModelError::LengthMismatch { expected: nodes.len(), got: row.len() });
            }
            if let Some(&value) = row.iter().find(|v| !(0.0..=1.0).contains(*v)) {
                return Err(ModelError::UtilityOutOfRange { index, value });
            }
            for k in 1..nodes.len() {
                let slope = (row[k] - row[k - 1]).abs() / (nodes[k] - nodes[k - 1]);
                lipschitz = lipschitz.max(slope);
            }
        }
        if lipschitz >= 1.0 {
            return Err(ModelError::NotContraction(lipschitz));
        }
        Ok(Self { nodes, values, lipschitz })
    }

    /// Samples `phi` on `nodes` uniformly spaced points of `[0, 1]`.
    pub fn tabulate(outcomes: usize, nodes: usize, phi: impl Fn(usize, f64) -> f64) -> Result<Self, ModelError> {
        let ts: Vec<f64> = (0..nodes).map(|k| k as f64 / (nodes - 1) as f64).collect();
        let values = (0..outcomes).map(|i| ts.iter().map(|&t| phi(i, t)).collect()).collect();
        Self::new(ts, values)
    }

    pub fn outcomes(&self) -> usize {
        self.values.len()
    }

    pub fn nodes(&self) -> &[f64] {
        &self.nodes
    }

    pub fn values(&self) -> &[Vec<f64>] {
        &self.values
    }

    pub fn lipschitz(&self) -> f64 {
        self.lipschitz
    }

    /// `phi(outcome, t)` for `t` in `[0, 1]` (clamped).
    pub fn phi(&self, outcome: usize, t: f64) -> f64 {
        let t = t.clamp(0.0, 1.0);
        let row = &self.values[outcome];
        let k = match self.nodes.iter().position(|&s| s >= t) {
            Some(0) => return row[0],
            Some(k) => k,
            None => return row[row.len() - 1],
        };
        let (t0, t1) = (self.nodes[k - 1], self.nodes[k]);
        let w = (t - t0) / (t1 - t0);
        row[k - 1] + w * (row[k] - row[k - 1])
    }

    /// `sum_i x_i phi(i, t)`.
    pub fn mean(&self, x: &Lottery, t: f64) -> f64 {
        (0..self.outcomes()).map(|i| x[i] * self.phi(i, t)).sum()
    }

    /// The unique `t` with `t = sum_i x_i phi(i, t)`, by fixed-point iteration.
    pub fn fixed_point(&self, x: &Lottery) -> Result<f64, ModelError> {
        let mut t = 0.5;
        for _ in 0..KERNEL_MAX_ITER {
            let next = self.mean(x, t);
            if (next - t).abs() <= KERNEL_STEP_TOLERANCE {
                return Ok(next);
            }
            t = next;
        }
        Err(ModelError::NonConvergence(KERNEL_MAX_ITER))
    }
}

#[derive(Debug, Clone)]
pub enum ModelKind {
    ExpectedUtility { utilities: Vec<f64> },
    WeightedUtility { utilities: Vec<f64>, weights: Vec<f64> },
    DisappointmentAversion { utilities: Vec<f64>, beta: f64 },
    ImplicitKernel(Kernel),
    BlackBoxOracle(Oracle),
}

/// A preference relation with an indifference tolerance.
#[derive(Debug, Clone)]
pub struct PreferenceModel {
    kind: ModelKind,
    eps_pref: f64,
}

fn check_utilities(utilities: &[f64]) -> Result<(), ModelError> {
    if utilities.is_empty() {
        return Err(ModelError::NoOutcomes);
    }
    if let Some((index, &value)) = utilities.iter().enumerate().find(|(_, v)| !(0.0..=1.0).contains(*v)) {
        return Err(ModelError::UtilityOutOfRange { index, value });
    }
    let lo = utilities.iter().copied().fold(f64::INFINITY, f64::min);
    let hi = utilities.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    // constant utilities describe a degenerate relation and are kept as-is
    if lo != hi && (lo != 0.0 || hi != 1.0) {
        return Err(ModelError::NotNormalized);
    }
    Ok(())
}

impl PreferenceModel {
    pub fn expected_utility(utilities: Vec<f64>) -> Result<Self, ModelError> {
        check_utilities(&utilities)?;
        Ok(Self::from_kind(ModelKind::ExpectedUtility { utilities }))
    }

    pub fn weighted_utility(utilities: Vec<f64>, weights: Vec<f64>) -> Result<Self, ModelError> {
        check_utilities(&utilities)?;
        if weights.len() != utilities.len() {
            return Err(ModelError::LengthMismatch { expected: utilities.len(), got: weights.len() });
        }
        if let Some((index, &value)) = weights.iter().enumerate().find(|(_, w)| !(**w > 0.0 && w.is_finite())) {
            return Err(ModelError::NonPositiveWeight { index, value });
        }
        Ok(Self::from_kind(ModelKind::WeightedUtility { utilities, weights }))
    }

    pub fn disappointment_aversion(utilities: Vec<f64>, beta: f64) -> Result<Self, ModelError> {
        check_utilities(&utilities)?;
        if !(beta > -1.0 && beta.is_finite()) {
            return Err(ModelError::BetaOutOfRange(beta));
        }
        Ok(Self::from_kind(ModelKind::DisappointmentAversion { utilities, beta }))
    }

    pub fn implicit_kernel(kernel: Kernel) -> Self {
        Self::from_kind(ModelKind::ImplicitKernel(kernel))
    }

    pub fn oracle(oracle: Oracle) -> Self {
        Self::from_kind(ModelKind::BlackBoxOracle(oracle))
    }

    fn from_kind(kind: ModelKind) -> Self {
        Self { kind, eps_pref: DEFAULT_EPS_PREF }
    }

    pub fn with_eps_pref(mut self, eps_pref: f64) -> Result<Self, ModelError> {
        if !(eps_pref >= 0.0 && eps_pref.is_finite()) {
            return Err(ModelError::InvalidTolerance(eps_pref));
        }
        self.eps_pref = eps_pref;
        Ok(self)
    }

    pub fn kind(&self) -> &ModelKind {
        &self.kind
    }

    pub fn eps_pref(&self) -> f64 {
        self.eps_pref
    }

    /// Short family name.
    pub fn family(&self) -> &str {
        match &self.kind {
            ModelKind::ExpectedUtility { .. } => "expected_utility",
            ModelKind::WeightedUtility { .. } => "weighted_utility",
            ModelKind::DisappointmentAversion { .. } => "disappointment_aversion",
            ModelKind::ImplicitKernel(_) => "implicit_kernel",
            ModelKind::BlackBoxOracle(o) => o.name(),
        }
    }

    /// Number of outcomes, when the model declares it.
    pub fn outcomes(&self) -> Option<usize> {
        match &self.kind {
            ModelKind::ExpectedUtility { utilities }
            | ModelKind::WeightedUtility { utilities, .. }
            | ModelKind::DisappointmentAversion { utilities, .. } => Some(utilities.len()),
            ModelKind::ImplicitKernel(k) => Some(k.outcomes()),
            ModelKind::BlackBoxOracle(o) => o.outcomes(),
        }
    }

    pub fn is_value_based(&self) -> bool {
        !matches!(self.kind, ModelKind::BlackBoxOracle(_))
    }

    /// Whether the relation may be evaluated from several threads at once.
    pub fn is_concurrent_safe(&self) -> bool {
        match &self.kind {
            ModelKind::BlackBoxOracle(o) => o.is_concurrent_safe(),
            _ => true,
        }
    }

    fn check_dim(&self, x: &Lottery) -> Result<(), ModelError> {
        match self.outcomes() {
            Some(expected) if expected != x.len() => Err(ModelError::DimensionMismatch { expected, got: x.len() }),
            _ => Ok(()),
        }
    }

    /// The value of `x` on `[0, 1]` for value-based families.
    pub fn value(&self, x: &Lottery) -> Result<f64, ModelError> {
        self.check_dim(x)?;
        match &self.kind {
            ModelKind::ExpectedUtility { utilities } => Ok(x.dot(utilities)),
            ModelKind::WeightedUtility { utilities, weights } => {
                let mut num = 0.0;
                let mut den = 0.0;
                for i in 0..x.len() {
                    num += x[i] * weights[i] * utilities[i];
                    den += x[i] * weights[i];
                }
                Ok(num / den)
            }
            ModelKind::DisappointmentAversion { utilities, beta } => Ok(disappointment_value(x, utilities, *beta)),
            ModelKind::ImplicitKernel(kernel) => kernel.fixed_point(x),
            ModelKind::BlackBoxOracle(_) => Err(ModelError::NoValueFunction),
        }
    }

    /// Compares `x` against `y`.
    pub fn compare(&self, x: &Lottery, y: &Lottery) -> Result<Ordering, ModelError> {
        self.compare_banded(x, y, 1.0)
    }

    /// Comparison with the indifference band widened to `band * eps_pref`.
    ///
    /// Oracles ignore the band.
    pub fn compare_banded(&self, x: &Lottery, y: &Lottery, band: f64) -> Result<Ordering, ModelError> {
        if x.len() != y.len() {
            return Err(SimplexError::DimensionMismatch { left: x.len(), right: y.len() }.into());
        }
        match &self.kind {
            ModelKind::BlackBoxOracle(oracle) => {
                self.check_dim(x)?;
                (oracle.compare)(x, y).map_err(ModelError::Oracle)
            }
            _ => {
                let gap = self.value(x)? - self.value(y)?;
                Ok(Ordering::from_gap(gap, band * self.eps_pref))
            }
        }
    }
}

/// Residual of the disappointment-aversion equation at `v`:
/// `v - E[u] + beta * sum_{u_i <= v} x_i (v - u_i)`.
///
/// Continuous and strictly increasing in `v` for `beta > -1`.
fn disappointment_residual(x: &Lottery, utilities: &[f64], beta: f64, v: f64) -> f64 {
    let mut mean = 0.0;
    let mut shortfall = 0.0;
    for (p, &u) in x.probs().iter().zip(utilities) {
        mean += p * u;
        if u <= v {
            shortfall += p * (v - u);
        }
    }
    v - mean + beta * shortfall
}

/// Solves `V = (E[u] + beta * sum_{u_i <= V} x_i u_i) / (1 + beta * sum_{u_i <= V} x_i)`.
///
/// The residual is piecewise linear with kinks at the outcome utilities, so
/// the search brackets the root between consecutive kinks and then solves the
/// linear piece exactly.
fn disappointment_value(x: &Lottery, utilities: &[f64], beta: f64) -> f64 {
    let mut kinks: Vec<f64> = utilities.to_vec();
    kinks.push(0.0);
    kinks.push(1.0);
    kinks.sort_by(f64::total_cmp);
    kinks.dedup();
    let residual = |v| disappointment_residual(x, utilities, beta, v);
    // invariant: residual(kinks[lo]) < 0 <= residual(kinks[hi])
    let (mut lo, mut hi) = (0, kinks.len() - 1);
    if residual(kinks[lo]) >= 0.0 {
        return kinks[lo];
    }
    while hi - lo > 1 {
        let mid = (lo + hi) / 2;
        if residual(kinks[mid]) < 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    let (a, b) = (kinks[lo], kinks[hi]);
    let (ra, rb) = (residual(a), residual(b));
    if rb == 0.0 {
        return b;
    }
    (a - ra * (b - a) / (rb - ra)).clamp(a, b)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::simplex::{grid, mix};
    use alloc::vec;

    fn lot(p: &[f64]) -> Lottery {
        Lottery::from_slice(p).unwrap()
    }

    /// Dense scan for the self-consistent disappointment value.
    fn da_grid_oracle(x: &Lottery, u: &[f64], beta: f64) -> f64 {
        let steps = 1_000_000;
        let mut best = (f64::INFINITY, 0.0);
        for k in 0..=steps {
            let v = k as f64 / steps as f64;
            let (mut num, mut den) = (0.0, 1.0);
            for i in 0..x.len() {
                num += x[i] * u[i];
                if u[i] <= v {
                    num += beta * x[i] * u[i];
                    den += beta * x[i];
                }
            }
            let gap = (v - num / den).abs();
            if gap < best.0 {
                best = (gap, v);
            }
        }
        best.1
    }

    #[test]
    fn expected_utility_value() {
        let m = PreferenceModel::expected_utility(vec![0.0, 1.0]).unwrap();
        assert!((m.value(&lot(&[0.3, 0.7])).unwrap() - 0.7).abs() < 1e-15);
        assert_eq!(m.compare(&lot(&[1.0, 0.0]), &lot(&[0.0, 1.0])).unwrap(), Ordering::StrictlyDispreferred);
        let x = lot(&[0.4, 0.6]);
        assert_eq!(m.compare(&x, &x).unwrap(), Ordering::Indifferent);
    }

    #[test]
    fn disappointment_reduces_to_expected_utility() {
        let m = PreferenceModel::disappointment_aversion(vec![0.0, 1.0], 0.0).unwrap();
        assert!((m.value(&lot(&[0.5, 0.5])).unwrap() - 0.5).abs() < 1e-15);

        let u = vec![0.0, 0.3, 1.0];
        let da = PreferenceModel::disappointment_aversion(u.clone(), 0.0).unwrap();
        let eu = PreferenceModel::expected_utility(u).unwrap();
        for x in grid(3, 10).unwrap() {
            assert!((da.value(&x).unwrap() - eu.value(&x).unwrap()).abs() <= 1e-12);
        }
    }

    #[test]
    fn disappointment_matches_dense_grid_oracle() {
        let x = lot(&[0.5, 0.5]);
        let oracle = da_grid_oracle(&x, &[0.0, 1.0], 1.0);
        // frozen from the oracle: the self-consistent value is 1/3
        assert!((oracle - 0.333333).abs() <= 1e-6);
        let m = PreferenceModel::disappointment_aversion(vec![0.0, 1.0], 1.0).unwrap();
        assert!((m.value(&x).unwrap() - 1.0 / 3.0).abs() <= 1e-12);

        let u = [0.0, 0.5, 1.0];
        let m = PreferenceModel::disappointment_aversion(u.to_vec(), 2.0).unwrap();
        for x in [lot(&[0.2, 0.3, 0.5]), lot(&[0.0, 1.0, 0.0]), lot(&[0.6, 0.1, 0.3])] {
            let v = m.value(&x).unwrap();
            assert!((v - da_grid_oracle(&x, &u, 2.0)).abs() <= 2e-6, "{x:?}");
        }
    }

    #[test]
    fn disappointment_kink_solutions() {
        // V lands exactly on the middle utility
        let m = PreferenceModel::disappointment_aversion(vec![0.0, 0.5, 1.0], 1.0).unwrap();
        let v = m.value(&lot(&[0.0, 1.0, 0.0])).unwrap();
        assert_eq!(v, 0.5);
        let m = PreferenceModel::disappointment_aversion(vec![0.0, 1.0], -0.5).unwrap();
        // elation-seeking: V = 0.5 / (1 - 0.25) = 2/3
        assert!((m.value(&lot(&[0.5, 0.5])).unwrap() - 2.0 / 3.0).abs() < 1e-14);
    }

    #[test]
    fn weighted_utility_comparison_by_direct_formula() {
        let m = PreferenceModel::weighted_utility(vec![0.0, 1.0], vec![1.0, 2.0]).unwrap();
        // direct evaluation: (0.5*2)/(0.5+1) = 2/3 vs (0.4*2)/(0.6+0.8) = 4/7
        let x = lot(&[0.5, 0.5]);
        let y = lot(&[0.6, 0.4]);
        let vx = (0.5 * 2.0) / (0.5 * 1.0 + 0.5 * 2.0);
        let vy = (0.4 * 2.0) / (0.6 * 1.0 + 0.4 * 2.0);
        assert!(vx > vy);
        assert!((m.value(&x).unwrap() - vx).abs() < 1e-15);
        assert_eq!(m.compare(&x, &y).unwrap(), Ordering::StrictlyPrefers);
    }

    fn kernel_fixture() -> Kernel {
        Kernel::tabulate(3, 11, |i, t| match i {
            0 => 0.0,
            1 => 0.35 + 0.4 * t,
            _ => 1.0,
        })
        .unwrap()
    }

    #[test]
    fn kernel_fixed_point_residual() {
        let k = kernel_fixture();
        assert!(k.lipschitz() < 1.0);
        let m = PreferenceModel::implicit_kernel(k.clone());
        for x in grid(3, 8).unwrap() {
            let t = m.value(&x).unwrap();
            assert!((t - k.mean(&x, t)).abs() <= 1e-10);
        }
        // degenerate at the middle outcome: t = 0.35 + 0.4 t
        let t = m.value(&lot(&[0.0, 1.0, 0.0])).unwrap();
        assert!((t - 0.35 / 0.6).abs() < 1e-11);
    }

    #[test]
    fn kernel_validation() {
        assert!(matches!(
            Kernel::tabulate(2, 5, |i, t| if i == 0 { 0.0 } else { t }),
            Err(ModelError::NotContraction(_))
        ));
        assert!(Kernel::new(vec![0.0, 0.5], vec![vec![0.0, 0.0]]).is_err());
        assert!(Kernel::new(vec![0.0, 1.0], vec![vec![0.0, 1.2]]).is_err());
        assert!(Kernel::new(vec![0.0, 1.0], vec![vec![0.0]]).is_err());
    }

    #[test]
    fn constructor_validation() {
        assert!(matches!(PreferenceModel::expected_utility(vec![0.0, 1.5]), Err(ModelError::UtilityOutOfRange { .. })));
        assert!(matches!(PreferenceModel::expected_utility(vec![0.2, 0.9]), Err(ModelError::NotNormalized)));
        assert!(PreferenceModel::expected_utility(vec![0.3, 0.3]).is_ok());
        assert!(matches!(
            PreferenceModel::weighted_utility(vec![0.0, 1.0], vec![1.0, 0.0]),
            Err(ModelError::NonPositiveWeight { .. })
        ));
        assert!(matches!(
            PreferenceModel::disappointment_aversion(vec![0.0, 1.0], -1.0),
            Err(ModelError::BetaOutOfRange(_))
        ));
        let m = PreferenceModel::expected_utility(vec![0.0, 1.0]).unwrap();
        assert!(matches!(
            m.compare(&lot(&[1.0, 0.0, 0.0]), &lot(&[0.0, 1.0, 0.0])),
            Err(ModelError::DimensionMismatch { expected: 2, got: 3 })
        ));
        assert!(matches!(m.compare(&lot(&[1.0, 0.0]), &lot(&[0.0, 0.0, 1.0])), Err(ModelError::Simplex(_))));
        assert!(m.clone().with_eps_pref(-1.0).is_err());
    }

    #[test]
    fn oracle_delegates_and_propagates_failures() {
        let o = Oracle::new("first", |x: &Lottery, y: &Lottery| {
            if x[0] > 0.9 {
                return Err("refused".into());
            }
            Ok(Ordering::from_gap(x[0] - y[0], 0.0))
        });
        let m = PreferenceModel::oracle(o);
        assert!(!m.is_value_based());
        assert_eq!(m.compare(&lot(&[0.5, 0.5]), &lot(&[0.2, 0.8])).unwrap(), Ordering::StrictlyPrefers);
        assert!(matches!(m.compare(&lot(&[1.0, 0.0]), &lot(&[0.2, 0.8])), Err(ModelError::Oracle(_))));
        assert!(matches!(m.value(&lot(&[0.5, 0.5])), Err(ModelError::NoValueFunction)));
    }

    fn families() -> Vec<PreferenceModel> {
        let u = vec![0.0, 0.4, 1.0];
        vec![
            PreferenceModel::expected_utility(u.clone()).unwrap(),
            PreferenceModel::weighted_utility(u.clone(), vec![1.0, 1.5, 2.5]).unwrap(),
            PreferenceModel::disappointment_aversion(u.clone(), 0.5).unwrap(),
            PreferenceModel::disappointment_aversion(u, 2.0).unwrap(),
            PreferenceModel::implicit_kernel(kernel_fixture()),
        ]
    }

    #[test]
    fn compare_is_converse_and_transitive_on_grid() {
        let g = grid(3, 4).unwrap();
        for m in families() {
            let ord: Vec<Vec<Ordering>> =
                g.iter().map(|x| g.iter().map(|y| m.compare(x, y).unwrap()).collect()).collect();
            for i in 0..g.len() {
                for j in 0..g.len() {
                    assert_eq!(ord[i][j], ord[j][i].reverse());
                    for k in 0..g.len() {
                        if ord[i][j].is_weakly_preferred() && ord[j][k].is_weakly_preferred() {
                            assert!(ord[i][k].is_weakly_preferred(), "{}", m.family());
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn families_satisfy_betweenness_on_grid() {
        let g = grid(3, 5).unwrap();
        for m in families() {
            for x in &g {
                for y in &g {
                    if m.compare(x, y).unwrap() != Ordering::StrictlyPrefers {
                        continue;
                    }
                    let (vx, vy) = (m.value(x).unwrap(), m.value(y).unwrap());
                    for k in 1..10 {
                        let z = mix(k as f64 / 10.0, x, y).unwrap();
                        let vz = m.value(&z).unwrap();
                        assert!(vz < vx + m.eps_pref() && vz > vy - m.eps_pref(), "{}", m.family());
                    }
                }
            }
        }
    }
}
