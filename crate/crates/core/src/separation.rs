//! Separating affine functionals for the contour sets of a chord level.
//!
//! For a level `t` and a polytope `P` containing both extremes, the upper
//! set `{x in P : x >= m_t}` and the lower set `{x in P : m_t >= x}` are
//! separated by an affine functional normalized to 1 at `x*` and 0 at `x_*`.
//! Here both contour sets are represented by finitely many labelled samples
//! and the functional is found by linear programming. Every verdict holds
//! for the supplied samples only.

use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;

use thiserror::Error;

use crate::engine::{EngineError, RepresentationContext};
use crate::lp::{LinearProgram, LpError, Relation};
use crate::preference::{ModelError, Ordering};
use crate::search::{locate_level, SearchFailure, Side};
use crate::simplex::{mix, Lottery, Polytope, SimplexError};

/// Width of the equality band for samples indifferent to `m_t`.
pub const EQUALITY_BAND: f64 = 1e-7;
/// Tolerance on the normalization `v(x*) = 1`, `v(x_*) = 0`.
pub const NORMALIZATION_TOL: f64 = 1e-9;
/// Agreement required between the local utility and separator values.
pub const CONSISTENCY_TOL: f64 = 1e-6;
/// Distance from the affine hull tolerated for samples and members.
const HULL_TOL: f64 = 1e-9;
/// Barycentric resolution used when sampling a polytope.
pub const DEFAULT_SAMPLE_RESOLUTION: usize = 4;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum SeparationError {
    #[error("Infeasible: no affine functional separates the sampled contour sets at t = {t}")]
    Infeasible { t: f64 },
    #[error("MembershipViolation: lottery is not in the hull of polytope {polytope}")]
    MembershipViolation { polytope: usize },
    #[error("MissingExtremes: polytope does not list both x* and x_* as generators")]
    MissingExtremes,
    #[error("SampleOutsideHull: sample {index} is off the affine hull of the polytope")]
    SampleOutsideHull { index: usize },
    #[error("level t = {0} outside (0, 1)")]
    LevelOutOfRange(f64),
    #[error("LpFailure: {0}")]
    Lp(LpError),
    #[error(transparent)]
    Engine(#[from] EngineError),
}

impl SeparationError {
    pub fn name(&self) -> &'static str {
        match self {
            SeparationError::Infeasible { .. } => "Infeasible",
            SeparationError::MembershipViolation { .. } => "MembershipViolation",
            SeparationError::MissingExtremes => "MissingExtremes",
            SeparationError::SampleOutsideHull { .. } => "SampleOutsideHull",
            SeparationError::LevelOutOfRange(_) => "LevelOutOfRange",
            SeparationError::Lp(_) => "LpFailure",
            SeparationError::Engine(e) => e.name(),
        }
    }
}

impl From<ModelError> for SeparationError {
    fn from(e: ModelError) -> Self {
        SeparationError::Engine(e.into())
    }
}

impl From<SimplexError> for SeparationError {
    fn from(e: SimplexError) -> Self {
        SeparationError::Engine(e.into())
    }
}

/// `x -> sum_i coeffs[i] * x[i]`, affine on the simplex.
#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize))]
pub struct AffineFunctional {
    pub coeffs: Vec<f64>,
}

impl AffineFunctional {
    pub fn value(&self, x: &Lottery) -> f64 {
        x.dot(&self.coeffs)
    }

    /// `v(x*) = 1` and `v(x_*) = 0` within [`NORMALIZATION_TOL`].
    pub fn is_normalized(&self, ctx: &RepresentationContext) -> bool {
        (self.value(ctx.x_star()) - 1.0).abs() <= NORMALIZATION_TOL
            && self.value(ctx.x_low()).abs() <= NORMALIZATION_TOL
    }
}

/// Orthonormal basis of the directions of an affine hull, anchored at `origin`.
struct AffineFrame {
    origin: Vec<f64>,
    basis: Vec<Vec<f64>>,
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

impl AffineFrame {
    fn new(origin: &Lottery, points: &[Lottery]) -> Self {
        let mut basis: Vec<Vec<f64>> = Vec::new();
        for p in points {
            let mut d: Vec<f64> = p.probs().iter().zip(origin.probs()).map(|(a, b)| a - b).collect();
            // two passes of Gram-Schmidt for stability
            for _ in 0..2 {
                for e in &basis {
                    let c = dot(&d, e);
                    for (di, ei) in d.iter_mut().zip(e) {
                        *di -= c * ei;
                    }
                }
            }
            let norm = libm::sqrt(dot(&d, &d));
            if norm > 1e-10 {
                basis.push(d.iter().map(|v| v / norm).collect());
            }
        }
        Self { origin: origin.probs().to_vec(), basis }
    }

    fn dim(&self) -> usize {
        self.basis.len()
    }

    fn coords(&self, x: &Lottery) -> Vec<f64> {
        let d: Vec<f64> = x.probs().iter().zip(&self.origin).map(|(a, b)| a - b).collect();
        self.basis.iter().map(|e| dot(&d, e)).collect()
    }

    /// Distance from `x` to the affine hull.
    fn residual(&self, x: &Lottery) -> f64 {
        let mut d: Vec<f64> = x.probs().iter().zip(&self.origin).map(|(a, b)| a - b).collect();
        for e in &self.basis {
            let c = dot(&d, e);
            for (di, ei) in d.iter_mut().zip(e) {
                *di -= c * ei;
            }
        }
        libm::sqrt(dot(&d, &d))
    }

    /// Minimum-norm coefficients of the functional `x -> a . coords(x)`
    /// extended off the hull so that it vanishes at the origin.
    fn coefficients(&self, a: &[f64]) -> Vec<f64> {
        let n = self.origin.len();
        let mut c = vec![0.0; n];
        for (ai, e) in a.iter().zip(&self.basis) {
            for (ci, ei) in c.iter_mut().zip(e) {
                *ci += ai * ei;
            }
        }
        // w: component of the origin orthogonal to the hull directions
        let mut w = self.origin.clone();
        for e in &self.basis {
            let k = dot(&self.origin, e);
            for (wi, ei) in w.iter_mut().zip(e) {
                *wi -= k * ei;
            }
        }
        let scale = dot(&c, &self.origin) / dot(&w, &w);
        for (ci, wi) in c.iter_mut().zip(&w) {
            *ci -= scale * wi;
        }
        c
    }
}

fn check_level(t: f64) -> Result<(), SeparationError> {
    if t > 0.0 && t < 1.0 {
        Ok(())
    } else {
        Err(SeparationError::LevelOutOfRange(t))
    }
}

/// Samples of `P` for the separation program at level `t`: a barycentric
/// grid of the generators plus, for every pair of generators strictly on
/// opposite sides of `m_t`, the indifference crossing on their segment.
pub fn polytope_samples(
    ctx: &RepresentationContext,
    t: f64,
    polytope: &Polytope,
    resolution: usize,
) -> Result<Vec<Lottery>, SeparationError> {
    check_level(t)?;
    let model = ctx.model();
    let m = ctx.chord(t)?;
    let mut out = polytope.grid(resolution)?;
    let vs = polytope.vertices();
    let sides: Vec<Ordering> = vs.iter().map(|v| model.compare(v, &m)).collect::<Result<_, _>>()?;
    for i in 0..vs.len() {
        for j in 0..vs.len() {
            if sides[i] != Ordering::StrictlyPrefers || sides[j] != Ordering::StrictlyDispreferred {
                continue;
            }
            // lam = 0 at the lower generator
            let lam = locate_level(0.0, 1.0, ctx.tol_t(), ctx.max_iter(), |lam| -> Result<Side, SeparationError> {
                let z = mix(lam, &vs[i], &vs[j])?;
                Ok(Side::of(model.compare(&z, &m)?))
            })
            .map_err(|f| match f {
                SearchFailure::Probe(e) => e,
                SearchFailure::IterationLimit => EngineError::IterationLimit(ctx.max_iter()).into(),
                _ => SeparationError::from(EngineError::NoCrossing { t }),
            })?;
            out.push(mix(lam, &vs[i], &vs[j])?);
        }
    }
    Ok(out)
}

/// Finds a normalized affine functional `v` with `v >= t` on samples weakly
/// above `m_t` and `v <= t` on samples weakly below it; samples indifferent
/// to `m_t` are held within [`EQUALITY_BAND`] of `t`.
///
/// Among feasible functionals the program minimizes the total deviation of
/// the indifferent samples from `t`. Off the affine hull of `P` the
/// coefficients are fixed by taking the minimum-norm extension.
pub fn separate(
    ctx: &RepresentationContext,
    t: f64,
    polytope: &Polytope,
    samples: &[Lottery],
) -> Result<AffineFunctional, SeparationError> {
    check_level(t)?;
    if !polytope.contains_vertex(ctx.x_star()) || !polytope.contains_vertex(ctx.x_low()) {
        return Err(SeparationError::MissingExtremes);
    }
    let frame = AffineFrame::new(ctx.x_low(), polytope.vertices());
    if let Some(index) = samples.iter().position(|s| frame.residual(s) > HULL_TOL) {
        return Err(SeparationError::SampleOutsideHull { index });
    }
    let m = ctx.chord(t)?;
    let mut upper = Vec::new();
    let mut lower = Vec::new();
    let mut level = Vec::new();
    for s in samples {
        let z = frame.coords(s);
        match ctx.model().compare(s, &m)? {
            Ordering::StrictlyPrefers => upper.push(z),
            Ordering::StrictlyDispreferred => lower.push(z),
            Ordering::Indifferent => level.push(z),
        }
    }

    // variables: a (free, dim k), then one deviation per level sample
    let k = frame.dim();
    let vars = k + level.len();
    let row = |z: &[f64], dev: Option<(usize, f64)>| {
        let mut r = vec![0.0; vars];
        r[..k].copy_from_slice(z);
        if let Some((i, c)) = dev {
            r[k + i] = c;
        }
        r
    };
    let mut lp = LinearProgram::new(vars);
    for j in 0..k {
        lp.set_free(j);
    }
    lp.add(row(&frame.coords(ctx.x_star()), None), Relation::Eq, 1.0);
    for z in &upper {
        lp.add(row(z, None), Relation::Ge, t);
    }
    for z in &lower {
        lp.add(row(z, None), Relation::Le, t);
    }
    for (i, z) in level.iter().enumerate() {
        lp.add(row(z, Some((i, -1.0))), Relation::Le, t);
        lp.add(row(z, Some((i, 1.0))), Relation::Ge, t);
        let mut cap = vec![0.0; vars];
        cap[k + i] = 1.0;
        lp.add(cap, Relation::Le, EQUALITY_BAND);
    }
    let mut objective = vec![0.0; vars];
    for c in &mut objective[k..] {
        *c = 1.0;
    }
    lp.minimize(objective);
    let solution = lp.solve().map_err(|e| match e {
        LpError::Infeasible => SeparationError::Infeasible { t },
        other => SeparationError::Lp(other),
    })?;
    Ok(AffineFunctional { coeffs: frame.coefficients(&solution.x[..k]) })
}

/// A sample where the functional disagrees with the observed ranking.
#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize))]
pub struct SeparationViolation {
    pub sample: Lottery,
    pub observed: Ordering,
    pub value: f64,
}

#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize))]
pub struct SeparationReport {
    pub t: f64,
    pub passed: bool,
    pub normalized: bool,
    /// `|v(m_t) - t|`.
    pub chord_residual: f64,
    pub samples_checked: usize,
    pub violations: Vec<SeparationViolation>,
    pub note: String,
}

/// Checks, sample by sample, that `x >= m_t` iff `v(x) >= v(m_t)` and
/// `x > m_t` iff `v(x) > v(m_t)`, with gaps inside [`EQUALITY_BAND`] read as
/// ties. Also checks the normalization and `v(m_t) = t`.
pub fn verify_separation(
    ctx: &RepresentationContext,
    t: f64,
    v: &AffineFunctional,
    samples: &[Lottery],
) -> Result<SeparationReport, SeparationError> {
    check_level(t)?;
    let m = ctx.chord(t)?;
    let vm = v.value(&m);
    let chord_residual = (vm - t).abs();
    let normalized = v.is_normalized(ctx);
    let mut violations = Vec::new();
    for s in samples {
        let observed = ctx.model().compare(s, &m)?;
        let value = v.value(s);
        let gap = value - vm;
        let weak = gap >= -EQUALITY_BAND;
        let strict = gap > EQUALITY_BAND;
        if weak != observed.is_weakly_preferred() || strict != (observed == Ordering::StrictlyPrefers) {
            violations.push(SeparationViolation { sample: s.clone(), observed, value });
        }
    }
    Ok(SeparationReport {
        t,
        passed: violations.is_empty() && normalized && chord_residual <= EQUALITY_BAND,
        normalized,
        chord_residual,
        samples_checked: samples.len(),
        violations,
        note: "separation certified on the supplied samples only".into(),
    })
}

/// Whether `x` is a convex combination of the generators of `P`.
pub fn hull_contains(polytope: &Polytope, x: &Lottery) -> Result<bool, SeparationError> {
    let vs = polytope.vertices();
    let n = x.len();
    if polytope.dim() != n {
        return Ok(false);
    }
    // weights >= 0 summing to 1 with |sum_j w_j v_j - x| <= slack, minimize slack
    let k = vs.len();
    let vars = k + 1;
    let mut lp = LinearProgram::new(vars);
    let mut ones = vec![1.0; vars];
    ones[k] = 0.0;
    lp.add(ones, Relation::Eq, 1.0);
    for i in 0..n {
        let mut r: Vec<f64> = vs.iter().map(|v| v[i]).collect();
        r.push(-1.0);
        lp.add(r.clone(), Relation::Le, x[i]);
        r[k] = 1.0;
        lp.add(r, Relation::Ge, x[i]);
    }
    let mut objective = vec![0.0; vars];
    objective[k] = 1.0;
    lp.minimize(objective);
    let solution = lp.solve().map_err(SeparationError::Lp)?;
    Ok(solution.objective <= HULL_TOL)
}

#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize))]
pub struct ConsistencyReport {
    pub x: Lottery,
    pub t: f64,
    /// The local utility from the mixing weight.
    pub engine_value: f64,
    /// Separator value at `x`, one per polytope.
    pub separator_values: Vec<f64>,
    pub max_discrepancy: f64,
    pub passed: bool,
}

/// Compares the local utility `v_t(x)` with the separator value at `x` on
/// each polytope; every polytope must contain `x*`, `x_*` and `x`.
pub fn cross_polytope_consistency(
    ctx: &RepresentationContext,
    x: &Lottery,
    t: f64,
    polytopes: &[Polytope],
) -> Result<ConsistencyReport, SeparationError> {
    cross_polytope_consistency_with(ctx, x, t, polytopes, DEFAULT_SAMPLE_RESOLUTION)
}

pub fn cross_polytope_consistency_with(
    ctx: &RepresentationContext,
    x: &Lottery,
    t: f64,
    polytopes: &[Polytope],
    resolution: usize,
) -> Result<ConsistencyReport, SeparationError> {
    check_level(t)?;
    let engine_value = ctx.local_utility(x, t)?.v;
    let mut separator_values = Vec::with_capacity(polytopes.len());
    for (i, p) in polytopes.iter().enumerate() {
        if !hull_contains(p, x)? {
            return Err(SeparationError::MembershipViolation { polytope: i });
        }
        let samples = polytope_samples(ctx, t, p, resolution)?;
        separator_values.push(separate(ctx, t, p, &samples)?.value(x));
    }
    let max_discrepancy = separator_values.iter().map(|v| (v - engine_value).abs()).fold(0.0, f64::max);
    Ok(ConsistencyReport {
        x: x.clone(),
        t,
        engine_value,
        separator_values,
        max_discrepancy,
        passed: max_discrepancy <= CONSISTENCY_TOL,
    })
}

/// `C(x) = conv{x*, x_*, x}`.
pub fn local_polytope(ctx: &RepresentationContext, x: &Lottery) -> Polytope {
    Polytope::new(vec![ctx.x_star().clone(), ctx.x_low().clone(), x.clone()])
        .expect("three lotteries of equal dimension")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::preference::{Oracle, PreferenceModel};
    use crate::simplex::{degenerate, grid};

    fn lot(p: &[f64]) -> Lottery {
        Lottery::from_slice(p).unwrap()
    }

    fn eu2() -> RepresentationContext {
        RepresentationContext::new(PreferenceModel::expected_utility(vec![0.0, 1.0]).unwrap(), 2).unwrap()
    }

    fn da3() -> RepresentationContext {
        RepresentationContext::new(PreferenceModel::disappointment_aversion(vec![0.0, 0.4, 1.0], 1.0).unwrap(), 3)
            .unwrap()
    }

    fn chord(ctx: &RepresentationContext) -> Polytope {
        Polytope::new(vec![ctx.x_star().clone(), ctx.x_low().clone()]).unwrap()
    }

    #[test]
    fn expected_utility_two_outcomes() {
        let ctx = eu2();
        let p = chord(&ctx);
        let samples = grid(2, 10).unwrap();
        let v = separate(&ctx, 0.5, &p, &samples).unwrap();
        assert!(v.coeffs[0].abs() < 1e-7 && (v.coeffs[1] - 1.0).abs() < 1e-7, "{v:?}");
        assert!(verify_separation(&ctx, 0.5, &v, &samples).unwrap().passed);
    }

    #[test]
    fn chord_polytope_reproduces_chord_positions() {
        let ctx = da3();
        let p = chord(&ctx);
        for t in [0.1, 0.5, 0.9] {
            let samples = polytope_samples(&ctx, t, &p, 8).unwrap();
            let v = separate(&ctx, t, &p, &samples).unwrap();
            for k in 0..=10 {
                let s = k as f64 / 10.0;
                assert!((v.value(&ctx.chord(s).unwrap()) - s).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn verify_on_own_samples_and_chord_identity() {
        let ctx = da3();
        let x = lot(&[0.2, 0.5, 0.3]);
        let p = local_polytope(&ctx, &x);
        for k in 1..10 {
            let t = k as f64 / 10.0;
            let samples = polytope_samples(&ctx, t, &p, 4).unwrap();
            let v = separate(&ctx, t, &p, &samples).unwrap();
            assert!(v.is_normalized(&ctx));
            let r = verify_separation(&ctx, t, &v, &samples).unwrap();
            assert!(r.passed, "{r:?}");
            assert!(r.chord_residual <= 1e-9);
        }
    }

    /// Scans grid points for the ones a perturbed functional misranks.
    #[test]
    fn perturbed_functional_is_caught() {
        let m = PreferenceModel::expected_utility(vec![0.0, 0.4, 1.0]).unwrap();
        let ctx = RepresentationContext::new(m.clone(), 3).unwrap();
        let v = AffineFunctional { coeffs: vec![0.0, 0.5, 1.0] };
        let samples = grid(3, 10).unwrap();
        let t = 0.45;
        let expected: Vec<&Lottery> = samples
            .iter()
            .filter(|s| {
                let truth = m.value(s).unwrap() - t;
                let claimed = v.value(s) - t;
                (truth >= -1e-9) != (claimed >= -EQUALITY_BAND) || (truth > 1e-9) != (claimed > EQUALITY_BAND)
            })
            .collect();
        assert!(!expected.is_empty());
        let r = verify_separation(&ctx, t, &v, &samples).unwrap();
        assert!(!r.passed);
        assert_eq!(r.violations.len(), expected.len());
    }

    #[test]
    fn curved_contours_are_infeasible() {
        let f = |l: &Lottery| 0.5 * l[1] + l[2] + 2.0 * l[0] * l[2];
        let oracle = Oracle::new("quadratic", move |x: &Lottery, y: &Lottery| {
            let d = f(x) - f(y);
            Ok(if d.abs() <= 1e-12 {
                Ordering::Indifferent
            } else if d > 0.0 {
                Ordering::StrictlyPrefers
            } else {
                Ordering::StrictlyDispreferred
            })
        })
        .with_outcomes(3);
        let ctx = RepresentationContext::new(PreferenceModel::oracle(oracle), 3).unwrap();
        let simplex = Polytope::new((0..3).map(|i| degenerate(i, 3).unwrap()).collect()).unwrap();
        // brute force: find a level whose sampled contours admit no separator
        let mut infeasible = None;
        for k in 1..20 {
            let t = k as f64 / 20.0;
            let samples = polytope_samples(&ctx, t, &simplex, 6).unwrap();
            if let Err(SeparationError::Infeasible { .. }) = separate(&ctx, t, &simplex, &samples) {
                infeasible = Some(t);
                break;
            }
        }
        assert!(infeasible.is_some());
    }

    #[test]
    fn removing_samples_keeps_feasibility() {
        let ctx = da3();
        let x = lot(&[0.3, 0.3, 0.4]);
        let p =
            Polytope::new(vec![ctx.x_star().clone(), ctx.x_low().clone(), x.clone(), lot(&[0.5, 0.5, 0.0])]).unwrap();
        let samples = polytope_samples(&ctx, 0.5, &p, 4).unwrap();
        for drop in [1usize, 2, 3, 5] {
            let kept: Vec<Lottery> = samples.iter().step_by(drop).cloned().collect();
            assert!(separate(&ctx, 0.5, &p, &kept).is_ok());
        }
    }

    #[test]
    fn cross_polytope_examples() {
        let ctx = da3();
        let x = lot(&[0.2, 0.5, 0.3]);
        let polys = vec![
            local_polytope(&ctx, &x),
            Polytope::new(vec![ctx.x_star().clone(), ctx.x_low().clone(), x.clone(), lot(&[0.6, 0.4, 0.0])]).unwrap(),
            Polytope::new(vec![ctx.x_star().clone(), ctx.x_low().clone(), x.clone(), lot(&[0.0, 0.9, 0.1])]).unwrap(),
        ];
        for t in [0.2, 0.5, 0.8] {
            let r = cross_polytope_consistency(&ctx, &x, t, &polys).unwrap();
            assert!(r.passed, "{r:?}");
        }
        // chord points: v_t(m_s) = s under every polytope
        let m = ctx.chord(0.3).unwrap();
        let r = cross_polytope_consistency(&ctx, &m, 0.6, &[local_polytope(&ctx, &m), polys[1].clone()]).unwrap();
        assert!((r.engine_value - 0.3).abs() < 1e-8 && r.passed);
        let r = cross_polytope_consistency(&ctx, ctx.x_star(), 0.4, &[local_polytope(&ctx, ctx.x_star())]).unwrap();
        assert!((r.separator_values[0] - 1.0).abs() < 1e-9);
    }

    #[test]
    fn membership_and_extremes_are_enforced() {
        let ctx = da3();
        let x = lot(&[0.2, 0.5, 0.3]);
        let p = chord(&ctx);
        assert!(!hull_contains(&p, &x).unwrap());
        assert!(hull_contains(&local_polytope(&ctx, &x), &lot(&[0.1, 0.25, 0.65])).unwrap());
        assert_eq!(
            cross_polytope_consistency(&ctx, &x, 0.5, &[p]).unwrap_err(),
            SeparationError::MembershipViolation { polytope: 0 }
        );
        let no_best = Polytope::new(vec![ctx.x_low().clone(), x.clone()]).unwrap();
        assert_eq!(separate(&ctx, 0.5, &no_best, &[]).unwrap_err(), SeparationError::MissingExtremes);
        assert!(matches!(
            separate(&ctx, 0.5, &chord(&ctx), &[x]),
            Err(SeparationError::SampleOutsideHull { index: 0 })
        ));
    }

    #[test]
    fn redundant_generators_on_full_simplex() {
        let m = PreferenceModel::weighted_utility(vec![0.0, 0.4, 1.0], vec![1.0, 1.5, 2.5]).unwrap();
        let ctx = RepresentationContext::new(m, 3).unwrap();
        let x = lot(&[0.0, 0.5, 0.5]);
        let mut vs: Vec<Lottery> = (0..3).map(|i| degenerate(i, 3).unwrap()).collect();
        vs.push(x.clone());
        let p = Polytope::new(vs).unwrap();
        let samples = polytope_samples(&ctx, 0.8, &p, 4).unwrap();
        let v = separate(&ctx, 0.8, &p, &samples).unwrap();
        assert!(verify_separation(&ctx, 0.8, &v, &samples).unwrap().passed);
        let engine = ctx.local_utility(&x, 0.8).unwrap().v;
        assert!((v.value(&x) - engine).abs() < 1e-6);
    }
}
