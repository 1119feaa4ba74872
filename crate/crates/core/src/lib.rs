//! Constructive implicit mixture-linear representations of betweenness
//! preferences on the probability simplex over a finite outcome set.
//!
//! The crate is `no_std` (it needs `alloc`). Modules, bottom-up:
//!
//! - [`simplex`]: lotteries, mixing, polytopes given by generators, grids.
//! - [`preference`]: the preference relations (built-in value families and
//!   black-box oracles) that act as ground truth.
//! - [`engine`]: best/worst extremes, the chord `m_t`, the bisections for the
//!   utility `U` and the mixing weight `mu`, the local utility `v_t` and the
//!   two-argument function `u(x, t)`.
//! - [`axioms`]: sampled checkers for rationality, nondegeneracy, continuity,
//!   betweenness and mixing neutrality, with replayable witnesses.
//! - [`separation`]: the separating affine functional on a polytope, found by
//!   linear programming, and its cross-polytope consistency.
//! - [`triangle`]: level curves of `U` in the three-outcome triangle.
//!
//! ```
//! use betweenness::{Lottery, PreferenceModel, RepresentationContext};
//!
//! let model = PreferenceModel::disappointment_aversion(vec![0.0, 0.4, 1.0], 1.0).unwrap();
//! let ctx = RepresentationContext::new(model, 3).unwrap();
//! let x = Lottery::new(vec![0.2, 0.5, 0.3]).unwrap();
//! let u = ctx.solve_u(&x).unwrap();
//! assert!((ctx.eval_u(&x, u).unwrap() - u).abs() < 1e-8);
//! ```
#![no_std]

extern crate alloc;
#[cfg(test)]
extern crate std;

pub mod axioms;
pub mod engine;
pub mod lp;
pub mod preference;
mod search;
pub mod separation;
pub mod simplex;
pub mod triangle;

pub use engine::{find_extremes, EngineError, LocalUtilitySample, RepresentationContext, XiBranch};
pub use preference::{Kernel, ModelError, ModelKind, Oracle, Ordering, PreferenceModel};
pub use simplex::{degenerate, grid, mix, Lottery, Polytope, Segment, SimplexError};
