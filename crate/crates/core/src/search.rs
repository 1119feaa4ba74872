//! Bisection for the level crossing of a monotone three-valued predicate.

use crate::preference::Ordering;

/// Where a probe point sits relative to the target level.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub(crate) enum Side {
    Below,
    Level,
    Above,
}

impl Side {
    /// Side of the probe `p` when the predicate compares `p` against the
    /// target: `p` better than the target lies above it.
    pub(crate) fn of(ordering: Ordering) -> Self {
        match ordering {
            Ordering::StrictlyPrefers => Side::Above,
            Ordering::Indifferent => Side::Level,
            Ordering::StrictlyDispreferred => Side::Below,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub(crate) enum SearchFailure<E> {
    /// Endpoint sides do not straddle the level.
    NotBracketed {
        lo: Side,
        hi: Side,
    },
    /// A probe contradicted monotonicity of the predicate.
    NotMonotone {
        at: f64,
    },
    IterationLimit,
    Probe(E),
}

/// Finds the level crossing of a predicate that is `Below` left of it and
/// `Above` right of it on `[lo, hi]`.
///
/// An endpoint that already sits on the level is returned as is. When an
/// interior probe lands in the indifference band, both edges of the band are
/// located and its centre is returned, so the answer does not depend on
/// where the first probe happened to fall inside the band.
pub(crate) fn locate_level<E>(
    lo: f64,
    hi: f64,
    tol: f64,
    max_iter: usize,
    mut side: impl FnMut(f64) -> Result<Side, E>,
) -> Result<f64, SearchFailure<E>> {
    let mut probe = |s: f64| side(s).map_err(SearchFailure::Probe);
    let lo_side = probe(lo)?;
    if lo_side == Side::Level {
        return Ok(lo);
    }
    let hi_side = probe(hi)?;
    if hi_side == Side::Level {
        return Ok(hi);
    }
    if lo_side != Side::Below || hi_side != Side::Above {
        return Err(SearchFailure::NotBracketed { lo: lo_side, hi: hi_side });
    }
    let (mut a, mut b) = (lo, hi);
    let mut iter = 0;
    while b - a > tol {
        iter += 1;
        if iter > max_iter {
            return Err(SearchFailure::IterationLimit);
        }
        let mid = 0.5 * (a + b);
        match probe(mid)? {
            Side::Below => a = mid,
            Side::Above => b = mid,
            Side::Level => {
                let lower = band_edge(a, mid, Side::Below, tol, max_iter, &mut probe)?;
                let upper = band_edge(mid, b, Side::Level, tol, max_iter, &mut probe)?;
                return Ok(0.5 * (lower + upper));
            }
        }
    }
    Ok(0.5 * (a + b))
}

/// Bisects `[a, b]` for the boundary between `left` (holding at `a`) and the
/// next side up (holding at `b`).
fn band_edge<E>(
    mut a: f64,
    mut b: f64,
    left: Side,
    tol: f64,
    max_iter: usize,
    probe: &mut impl FnMut(f64) -> Result<Side, SearchFailure<E>>,
) -> Result<f64, SearchFailure<E>> {
    let right = match left {
        Side::Below => Side::Level,
        _ => Side::Above,
    };
    let mut iter = 0;
    while b - a > tol {
        iter += 1;
        if iter > max_iter {
            return Err(SearchFailure::IterationLimit);
        }
        let mid = 0.5 * (a + b);
        let s = probe(mid)?;
        if s == left {
            a = mid;
        } else if s == right {
            b = mid;
        } else {
            return Err(SearchFailure::NotMonotone { at: mid });
        }
    }
    Ok(0.5 * (a + b))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn banded(target: f64, band: f64) -> impl FnMut(f64) -> Result<Side, ()> {
        move |s| {
            Ok(if (s - target).abs() <= band {
                Side::Level
            } else if s < target {
                Side::Below
            } else {
                Side::Above
            })
        }
    }

    #[test]
    fn finds_band_centre() {
        let r = locate_level(0.0, 1.0, 1e-12, 200, banded(0.3, 1e-9)).unwrap();
        assert!((r - 0.3).abs() < 1e-11);
        // a wide band is still centred
        let r = locate_level(0.0, 1.0, 1e-12, 200, banded(0.7, 1e-3)).unwrap();
        assert!((r - 0.7).abs() < 1e-11);
    }

    #[test]
    fn endpoint_on_level_returns_immediately() {
        assert_eq!(locate_level(0.0, 1.0, 1e-10, 200, banded(0.0, 1e-9)).unwrap(), 0.0);
        assert_eq!(locate_level(0.0, 1.0, 1e-10, 200, banded(1.0, 1e-9)).unwrap(), 1.0);
    }

    #[test]
    fn reports_missing_bracket() {
        let r = locate_level(0.0, 1.0, 1e-10, 200, banded(2.0, 1e-9));
        assert_eq!(r, Err(SearchFailure::NotBracketed { lo: Side::Below, hi: Side::Below }));
    }

    #[test]
    fn reports_non_monotone_band() {
        // Level at 0.5, but the band's lower neighbourhood reads Above.
        let pred = |s: f64| -> Result<Side, ()> {
            Ok(if s == 0.0 {
                Side::Below
            } else if (s - 0.5).abs() < 1e-12 {
                Side::Level
            } else {
                Side::Above
            })
        };
        assert!(matches!(locate_level(0.0, 1.0, 1e-10, 200, pred), Err(SearchFailure::NotMonotone { .. })));
    }

    #[test]
    fn iteration_cap() {
        assert_eq!(locate_level(0.0, 1.0, 1e-10, 5, banded(0.3, 0.0)), Err(SearchFailure::IterationLimit));
    }
}
