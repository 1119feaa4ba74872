//! Sampled checks of the preference axioms with replayable counterexamples.
//!
//! Every verdict is relative to the supplied samples and λ values. Where a
//! violation needs a strict judgment next to a weak one, the strict side is
//! tested with the indifference band widened to `tie_band * eps_pref`, so
//! ties that sit on the edge of the tolerance are not reported.

use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::preference::{Ordering, PreferenceModel};
use crate::simplex::{mix, Lottery};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize))]
pub enum Axiom {
    Rationality,
    Nondegeneracy,
    Continuity,
    Betweenness,
    MixingNeutrality,
}

/// One comparison as it was observed: `ordering` is `None` when the model
/// failed to answer.
#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize))]
pub struct Observation {
    pub left: Lottery,
    pub right: Lottery,
    /// Indifference band, in multiples of `eps_pref`.
    pub band: f64,
    pub ordering: Option<Ordering>,
}

impl Observation {
    fn record(model: &PreferenceModel, left: &Lottery, right: &Lottery, band: f64) -> Self {
        Self { left: left.clone(), right: right.clone(), band, ordering: model.compare_banded(left, right, band).ok() }
    }

    /// Whether the model still answers this comparison the same way.
    pub fn replays(&self, model: &PreferenceModel) -> bool {
        model.compare_banded(&self.left, &self.right, self.band).ok() == self.ordering
    }
}

/// A counterexample: a set of observations that together violate an axiom.
#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize))]
pub struct Witness {
    pub description: String,
    pub lambda: Option<f64>,
    pub observations: Vec<Observation>,
}

impl Witness {
    pub fn replay(&self, model: &PreferenceModel) -> bool {
        self.observations.iter().all(|o| o.replays(model))
    }
}

#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize))]
pub struct AxiomReport {
    pub axiom: Axiom,
    pub passed: bool,
    /// Stored counterexamples, capped at [`LabConfig::max_witnesses`].
    pub witnesses: Vec<Witness>,
    /// Total number of violations found.
    pub violations: usize,
    pub samples_checked: usize,
    pub seed: Option<u64>,
    pub note: Option<String>,
}

impl AxiomReport {
    fn new(axiom: Axiom) -> Self {
        Self { axiom, passed: true, witnesses: Vec::new(), violations: 0, samples_checked: 0, seed: None, note: None }
    }

    fn violation(&mut self, cap: usize, witness: Witness) {
        self.passed = false;
        self.violations += 1;
        if self.witnesses.len() < cap {
            self.witnesses.push(witness);
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct LabConfig {
    /// Transitivity is checked on every ordered triple up to this many, and on
    /// a seeded random subsample of this size beyond it.
    pub triple_cap: usize,
    pub seed: u64,
    /// Length of the sequences `x_k -> x` used by the continuity check.
    pub continuity_steps: usize,
    pub max_witnesses: usize,
    pub tie_band: f64,
}

impl Default for LabConfig {
    fn default() -> Self {
        Self { triple_cap: 20_000, seed: 0, continuity_steps: 24, max_witnesses: 16, tie_band: 2.0 }
    }
}

/// `{0.1, 0.2, ..., 0.9}`.
pub fn default_lambdas() -> Vec<f64> {
    (1..10).map(|k| k as f64 / 10.0).collect()
}

pub struct AxiomLab<'a> {
    model: &'a PreferenceModel,
    config: LabConfig,
}

impl<'a> AxiomLab<'a> {
    pub fn new(model: &'a PreferenceModel) -> Self {
        Self { model, config: LabConfig::default() }
    }

    pub fn with_config(model: &'a PreferenceModel, config: LabConfig) -> Self {
        Self { model, config }
    }

    pub fn config(&self) -> &LabConfig {
        &self.config
    }

    fn observe(&self, a: &Lottery, b: &Lottery, band: f64) -> Observation {
        Observation::record(self.model, a, b, band)
    }

    fn matrix(&self, samples: &[Lottery]) -> Vec<Vec<Option<Ordering>>> {
        samples.iter().map(|x| samples.iter().map(|y| self.model.compare(x, y).ok()).collect()).collect()
    }

    /// Completeness, converse consistency and transitivity.
    pub fn rationality(&self, samples: &[Lottery]) -> AxiomReport {
        let cap = self.config.max_witnesses;
        let mut report = AxiomReport::new(Axiom::Rationality);
        let n = samples.len();
        if n < 3 {
            report.passed = false;
            report.note = Some("needs at least 3 samples".into());
            return report;
        }
        let ord = self.matrix(samples);
        for i in 0..n {
            for j in i..n {
                report.samples_checked += 1;
                match (ord[i][j], ord[j][i]) {
                    (Some(a), Some(b)) if a == b.reverse() => {}
                    (Some(_), Some(_)) => report.violation(
                        cap,
                        Witness {
                            description: "comparisons are not converse".into(),
                            lambda: None,
                            observations: alloc::vec![
                                self.observe(&samples[i], &samples[j], 1.0),
                                self.observe(&samples[j], &samples[i], 1.0),
                            ],
                        },
                    ),
                    _ => report.violation(
                        cap,
                        Witness {
                            description: "comparison failed".into(),
                            lambda: None,
                            observations: alloc::vec![self.observe(&samples[i], &samples[j], 1.0)],
                        },
                    ),
                }
            }
        }

        let total = n.saturating_mul(n).saturating_mul(n);
        let triples: Vec<(usize, usize, usize)> = if total <= self.config.triple_cap {
            (0..total).map(|c| (c / (n * n), (c / n) % n, c % n)).collect()
        } else {
            report.seed = Some(self.config.seed);
            let mut rng = ChaCha8Rng::seed_from_u64(self.config.seed);
            (0..self.config.triple_cap)
                .map(|_| (rng.gen_range(0..n), rng.gen_range(0..n), rng.gen_range(0..n)))
                .collect()
        };
        for (i, j, k) in triples {
            report.samples_checked += 1;
            let (Some(a), Some(b)) = (ord[i][j], ord[j][k]) else {
                continue;
            };
            if !(a.is_weakly_preferred() && b.is_weakly_preferred()) {
                continue;
            }
            let reversed = self.model.compare_banded(&samples[k], &samples[i], self.config.tie_band);
            if reversed == Ok(Ordering::StrictlyPrefers) {
                report.violation(
                    cap,
                    Witness {
                        description: "intransitive triple: x >= y, y >= z, z > x".into(),
                        lambda: None,
                        observations: alloc::vec![
                            self.observe(&samples[i], &samples[j], 1.0),
                            self.observe(&samples[j], &samples[k], 1.0),
                            self.observe(&samples[k], &samples[i], self.config.tie_band),
                        ],
                    },
                );
            }
        }
        report
    }

    /// Some sampled pair is strictly ranked.
    pub fn nondegeneracy(&self, samples: &[Lottery]) -> AxiomReport {
        let mut report = AxiomReport::new(Axiom::Nondegeneracy);
        if samples.is_empty() {
            report.passed = false;
            report.note = Some("no samples".into());
            return report;
        }
        for (i, x) in samples.iter().enumerate() {
            for y in &samples[i + 1..] {
                report.samples_checked += 1;
                if matches!(self.model.compare(x, y), Ok(o) if o.is_strict()) {
                    return report;
                }
            }
        }
        let observations =
            samples.iter().skip(1).take(self.config.max_witnesses).map(|y| self.observe(&samples[0], y, 1.0)).collect();
        report.passed = false;
        report.violations = 1;
        report.witnesses.push(Witness {
            description: "no strict pair among the samples".into(),
            lambda: None,
            observations,
        });
        report
    }

    /// Closedness of contour sets along sequences `x_k -> x` drawn toward
    /// each sample from every other sample.
    ///
    /// Only consistency at the tested resolution can be established.
    pub fn continuity(&self, samples: &[Lottery]) -> AxiomReport {
        let cap = self.config.max_witnesses;
        let mut report = AxiomReport::new(Axiom::Continuity);
        let steps = self.config.continuity_steps.max(2);
        let tail_start = steps / 2;
        report.note = Some(format!(
            "consistent at tested resolution means: sequences x_k = 2^-k w + (1 - 2^-k) x, k in {tail_start}..={steps}"
        ));
        if samples.is_empty() {
            report.passed = false;
            return report;
        }
        for x in samples {
            for w in samples {
                if w == x {
                    continue;
                }
                let tail: Vec<Lottery> =
                    (tail_start..=steps).filter_map(|k| mix(libm::ldexp(1.0, -(k as i32)), w, x).ok()).collect();
                for y in samples {
                    report.samples_checked += 1;
                    let ords: Vec<Option<Ordering>> = tail.iter().map(|xk| self.model.compare(xk, y).ok()).collect();
                    let Some(Some(first)) = ords.first().copied() else {
                        continue;
                    };
                    if !first.is_strict() || ords.iter().any(|o| *o != Some(first)) {
                        continue;
                    }
                    let limit = self.model.compare_banded(x, y, self.config.tie_band);
                    if limit == Ok(first.reverse()) {
                        report.violation(
                            cap,
                            Witness {
                                description: "strict ranking along the sequence reverses at its limit".into(),
                                lambda: None,
                                observations: alloc::vec![
                                    self.observe(&tail[0], y, 1.0),
                                    self.observe(&tail[tail.len() - 1], y, 1.0),
                                    self.observe(x, y, self.config.tie_band),
                                ],
                            },
                        );
                    }
                }
            }
        }
        report
    }

    /// For every sampled strict pair `x > y` and each λ, `x > λx + (1-λ)y > y`.
    ///
    /// Pairs whose gap lies within the tie band are skipped.
    pub fn betweenness(&self, samples: &[Lottery], lambdas: &[f64]) -> AxiomReport {
        let cap = self.config.max_witnesses;
        let mut report = AxiomReport::new(Axiom::Betweenness);
        if let Some(bad) = lambdas.iter().find(|l| !(**l > 0.0 && **l < 1.0)) {
            report.passed = false;
            report.note = Some(format!("lambda {bad} outside (0, 1)"));
            return report;
        }
        for x in samples {
            for y in samples {
                if self.model.compare_banded(x, y, self.config.tie_band) != Ok(Ordering::StrictlyPrefers) {
                    continue;
                }
                for &lam in lambdas {
                    report.samples_checked += 1;
                    let Ok(z) = mix(lam, x, y) else { continue };
                    let upper = self.model.compare(x, &z).ok();
                    let lower = self.model.compare(&z, y).ok();
                    if upper != Some(Ordering::StrictlyPrefers) || lower != Some(Ordering::StrictlyPrefers) {
                        report.violation(
                            cap,
                            Witness {
                                description: "mixture of a strict pair is not strictly between".into(),
                                lambda: Some(lam),
                                observations: alloc::vec![
                                    self.observe(x, y, self.config.tie_band),
                                    self.observe(x, &z, 1.0),
                                    self.observe(&z, y, 1.0),
                                ],
                            },
                        );
                    }
                }
            }
        }
        report
    }

    /// For every sampled indifferent pair and each λ, the mixture is
    /// indifferent to both ends within the tie band.
    pub fn mixing_neutrality(&self, samples: &[Lottery], lambdas: &[f64]) -> AxiomReport {
        let cap = self.config.max_witnesses;
        let mut report = AxiomReport::new(Axiom::MixingNeutrality);
        if let Some(bad) = lambdas.iter().find(|l| !(**l > 0.0 && **l < 1.0)) {
            report.passed = false;
            report.note = Some(format!("lambda {bad} outside (0, 1)"));
            return report;
        }
        let ord = self.matrix(samples);
        let any_strict = ord.iter().flatten().any(|o| matches!(o, Some(o) if o.is_strict()));
        if !any_strict {
            report.note = Some("skipped: every sampled pair is indifferent, the property is vacuous".into());
            return report;
        }
        let band = self.config.tie_band;
        for i in 0..samples.len() {
            for j in i..samples.len() {
                if ord[i][j] != Some(Ordering::Indifferent) {
                    continue;
                }
                let (x, y) = (&samples[i], &samples[j]);
                for &lam in lambdas {
                    report.samples_checked += 1;
                    let Ok(z) = mix(lam, x, y) else { continue };
                    let to_x = self.model.compare_banded(&z, x, band).ok();
                    let to_y = self.model.compare_banded(&z, y, band).ok();
                    if to_x != Some(Ordering::Indifferent) || to_y != Some(Ordering::Indifferent) {
                        report.violation(
                            cap,
                            Witness {
                                description: "mixture of an indifferent pair is not indifferent".into(),
                                lambda: Some(lam),
                                observations: alloc::vec![
                                    self.observe(x, y, 1.0),
                                    self.observe(&z, x, band),
                                    self.observe(&z, y, band),
                                ],
                            },
                        );
                    }
                }
            }
        }
        report
    }

    /// All five reports, in the order rationality, nondegeneracy, continuity,
    /// betweenness, mixing neutrality.
    pub fn check_all(&self, samples: &[Lottery], lambdas: &[f64]) -> Vec<AxiomReport> {
        alloc::vec![
            self.rationality(samples),
            self.nondegeneracy(samples),
            self.continuity(samples),
            self.betweenness(samples, lambdas),
            self.mixing_neutrality(samples, lambdas),
        ]
    }
}

pub fn check_rationality(model: &PreferenceModel, samples: &[Lottery]) -> AxiomReport {
    AxiomLab::new(model).rationality(samples)
}

pub fn check_nondegeneracy(model: &PreferenceModel, samples: &[Lottery]) -> AxiomReport {
    AxiomLab::new(model).nondegeneracy(samples)
}

pub fn check_continuity(model: &PreferenceModel, samples: &[Lottery]) -> AxiomReport {
    AxiomLab::new(model).continuity(samples)
}

pub fn check_betweenness(model: &PreferenceModel, samples: &[Lottery], lambdas: &[f64]) -> AxiomReport {
    AxiomLab::new(model).betweenness(samples, lambdas)
}

pub fn check_mixing_neutrality(model: &PreferenceModel, samples: &[Lottery], lambdas: &[f64]) -> AxiomReport {
    AxiomLab::new(model).mixing_neutrality(samples, lambdas)
}
