//! Lotteries on the simplex over `n` outcomes.

use alloc::vec::Vec;
use core::cmp;
use core::ops::Index;

use thiserror::Error;

/// Tolerance on the total mass of a lottery.
pub const SUM_TOLERANCE: f64 = 1e-12;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum SimplexError {
    #[error("lottery has no outcomes")]
    Empty,
    #[error("probability {value} at outcome {index} is negative or not finite")]
    InvalidProbability { index: usize, value: f64 },
    #[error("probabilities sum to {sum}, expected 1")]
    NotNormalized { sum: f64 },
    #[error("mixing weight {0} outside [0, 1]")]
    WeightOutOfRange(f64),
    #[error("outcome index {index} out of range for {n} outcomes")]
    IndexOutOfRange { index: usize, n: usize },
    #[error("dimension mismatch: {left} vs {right} outcomes")]
    DimensionMismatch { left: usize, right: usize },
    #[error("grid resolution must be at least 1")]
    ZeroResolution,
    #[error("polytope needs at least one vertex")]
    EmptyPolytope,
}

/// A probability vector over a finite outcome set.
#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize))]
#[cfg_attr(feature = "serde", serde(transparent))]
pub struct Lottery {
    probs: Vec<f64>,
}

impl Lottery {
    pub fn new(probs: Vec<f64>) -> Result<Self, SimplexError> {
        if probs.is_empty() {
            return Err(SimplexError::Empty);
        }
        for (index, &value) in probs.iter().enumerate() {
            if !value.is_finite() || value < 0.0 {
                return Err(SimplexError::InvalidProbability { index, value });
            }
        }
        let sum: f64 = probs.iter().sum();
        if (sum - 1.0).abs() > SUM_TOLERANCE {
            return Err(SimplexError::NotNormalized { sum });
        }
        Ok(Self { probs })
    }

    pub fn from_slice(probs: &[f64]) -> Result<Self, SimplexError> {
        Self::new(probs.to_vec())
    }

    pub fn probs(&self) -> &[f64] {
        &self.probs
    }

    /// Number of outcomes.
    pub fn len(&self) -> usize {
        self.probs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.probs.is_empty()
    }

    pub fn into_vec(self) -> Vec<f64> {
        self.probs
    }

    /// `sum_i probs[i] * weights[i]`.
    pub fn dot(&self, weights: &[f64]) -> f64 {
        self.probs.iter().zip(weights).map(|(p, w)| p * w).sum()
    }

    /// Index of the single outcome carrying all the mass, if any.
    pub fn degenerate_index(&self) -> Option<usize> {
        self.probs.iter().position(|&p| p == 1.0)
    }

    /// Lexicographic total order on the components.
    pub fn lex_cmp(&self, other: &Self) -> cmp::Ordering {
        for (a, b) in self.probs.iter().zip(&other.probs) {
            match a.total_cmp(b) {
                cmp::Ordering::Equal => continue,
                ord => return ord,
            }
        }
        self.probs.len().cmp(&other.probs.len())
    }

    /// Componentwise distance in the max norm.
    pub fn max_distance(&self, other: &Self) -> f64 {
        self.probs.iter().zip(&other.probs).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max)
    }
}

impl Index<usize> for Lottery {
    type Output = f64;

    fn index(&self, index: usize) -> &f64 {
        &self.probs[index]
    }
}

impl AsRef<[f64]> for Lottery {
    fn as_ref(&self) -> &[f64] {
        &self.probs
    }
}

/// `lam * x + (1 - lam) * y`.
///
/// Computed as `y + lam * (x - y)`, so `mix(lam, x, x)` returns `x` bit for bit
/// and the endpoints `lam = 0, 1` are returned unchanged.
pub fn mix(lam: f64, x: &Lottery, y: &Lottery) -> Result<Lottery, SimplexError> {
    if !(0.0..=1.0).contains(&lam) {
        return Err(SimplexError::WeightOutOfRange(lam));
    }
    if x.len() != y.len() {
        return Err(SimplexError::DimensionMismatch { left: x.len(), right: y.len() });
    }
    if lam == 1.0 {
        return Ok(x.clone());
    }
    if lam == 0.0 {
        return Ok(y.clone());
    }
    let mut probs: Vec<f64> = x.probs.iter().zip(&y.probs).map(|(a, b)| b + lam * (a - b)).collect();
    let sum: f64 = probs.iter().sum();
    if (sum - 1.0).abs() > SUM_TOLERANCE {
        for p in &mut probs {
            *p /= sum;
        }
    }
    Ok(Lottery { probs })
}

/// Unit mass on outcome `i` of `n`.
pub fn degenerate(i: usize, n: usize) -> Result<Lottery, SimplexError> {
    if i >= n {
        return Err(SimplexError::IndexOutOfRange { index: i, n });
    }
    let mut probs = alloc::vec![0.0; n];
    probs[i] = 1.0;
    Ok(Lottery { probs })
}

/// All lotteries whose components are multiples of `1 / resolution`, in
/// ascending lexicographic order.
pub fn grid(n: usize, resolution: usize) -> Result<Vec<Lottery>, SimplexError> {
    if n == 0 {
        return Err(SimplexError::Empty);
    }
    if resolution == 0 {
        return Err(SimplexError::ZeroResolution);
    }
    let mut out = Vec::new();
    let mut counts = alloc::vec![0usize; n];
    compositions(&mut counts, 0, resolution, &mut |c| {
        let probs = c.iter().map(|&k| k as f64 / resolution as f64).collect();
        out.push(Lottery { probs });
    });
    Ok(out)
}

fn compositions(counts: &mut [usize], pos: usize, remaining: usize, emit: &mut impl FnMut(&[usize])) {
    if pos + 1 == counts.len() {
        counts[pos] = remaining;
        emit(counts);
        return;
    }
    for k in 0..=remaining {
        counts[pos] = k;
        compositions(counts, pos + 1, remaining - k, emit);
    }
}

/// The segment between two lotteries.
#[derive(Debug, Clone, PartialEq)]
pub struct Segment {
    pub a: Lottery,
    pub b: Lottery,
}

impl Segment {
    pub fn new(a: Lottery, b: Lottery) -> Result<Self, SimplexError> {
        if a.len() != b.len() {
            return Err(SimplexError::DimensionMismatch { left: a.len(), right: b.len() });
        }
        Ok(Self { a, b })
    }

    /// The point `lam * a + (1 - lam) * b`.
    pub fn point(&self, lam: f64) -> Result<Lottery, SimplexError> {
        mix(lam, &self.a, &self.b)
    }
}

/// A polytope stored by its generators.
#[derive(Debug, Clone, PartialEq)]
pub struct Polytope {
    vertices: Vec<Lottery>,
}

impl Polytope {
    pub fn new(vertices: Vec<Lottery>) -> Result<Self, SimplexError> {
        let first = vertices.first().ok_or(SimplexError::EmptyPolytope)?;
        let n = first.len();
        if let Some(bad) = vertices.iter().find(|v| v.len() != n) {
            return Err(SimplexError::DimensionMismatch { left: n, right: bad.len() });
        }
        Ok(Self { vertices })
    }

    pub fn vertices(&self) -> &[Lottery] {
        &self.vertices
    }

    pub fn dim(&self) -> usize {
        self.vertices[0].len()
    }

    pub fn contains_vertex(&self, x: &Lottery) -> bool {
        self.vertices.iter().any(|v| v == x)
    }

    /// True when some generator is listed more than once.
    pub fn has_duplicates(&self) -> bool {
        self.vertices.iter().enumerate().any(|(i, v)| self.vertices[i + 1..].contains(v))
    }

    /// The convex combination `sum_j weights[j] * vertices[j]`.
    pub fn combination(&self, weights: &[f64]) -> Result<Lottery, SimplexError> {
        let mut probs = alloc::vec![0.0; self.dim()];
        for (w, v) in weights.iter().zip(&self.vertices) {
            for (p, q) in probs.iter_mut().zip(v.probs()) {
                *p += w * q;
            }
        }
        Lottery::new(probs)
    }

    /// Barycentric grid over the generators at the given resolution.
    pub fn grid(&self, resolution: usize) -> Result<Vec<Lottery>, SimplexError> {
        let weights = grid(self.vertices.len(), resolution)?;
        weights.iter().map(|w| self.combination(w.probs())).collect()
    }
}
