//! JSON model specifications.

use std::fs;
use std::path::Path;

use betweenness::preference::{Kernel, Oracle, Ordering, PreferenceModel, DEFAULT_EPS_PREF};
use betweenness::Lottery;
use serde::Deserialize;

use crate::CliError;

/// A preference model as read from disk. See `docs/model-spec.md`.
#[derive(Debug, Clone, PartialEq, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum ModelSpec {
    ExpectedUtility {
        u: Vec<f64>,
        #[serde(default)]
        eps_pref: Option<f64>,
    },
    WeightedUtility {
        u: Vec<f64>,
        w: Vec<f64>,
        #[serde(default)]
        eps_pref: Option<f64>,
    },
    DisappointmentAversion {
        u: Vec<f64>,
        beta: f64,
        #[serde(default)]
        eps_pref: Option<f64>,
    },
    ImplicitKernel {
        kernel: KernelSpec,
        #[serde(default)]
        eps_pref: Option<f64>,
    },
    /// Finite comparison table, for planting violations.
    OracleTable {
        lotteries: Vec<Vec<f64>>,
        #[serde(default)]
        prefers: Vec<[usize; 2]>,
        #[serde(default)]
        indifferent: Vec<[usize; 2]>,
    },
    /// `E[u] + p' Q p`; generally violates betweenness.
    Quadratic {
        u: Vec<f64>,
        q: Vec<Vec<f64>>,
        #[serde(default)]
        eps_pref: Option<f64>,
    },
}

#[derive(Debug, Clone, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct KernelSpec {
    /// Increasing t-nodes from 0 to 1.
    pub t: Vec<f64>,
    /// One row per outcome, one value per node.
    pub phi: Vec<Vec<f64>>,
}

/// A loaded model plus the lotteries it is restricted to, if any.
#[derive(Debug, Clone)]
pub struct LoadedModel {
    pub model: PreferenceModel,
    pub outcomes: usize,
    /// For table oracles: the only lotteries the relation is defined on.
    pub support: Option<Vec<Lottery>>,
}

pub fn load(path: &Path) -> Result<LoadedModel, CliError> {
    let text = fs::read_to_string(path).map_err(|e| CliError::Input(format!("{}: {e}", path.display())))?;
    let spec: ModelSpec =
        serde_json::from_str(&text).map_err(|e| CliError::Input(format!("{}: {e}", path.display())))?;
    spec.build()
}

fn input<E: std::fmt::Display>(e: E) -> CliError {
    CliError::Input(e.to_string())
}

fn with_eps(model: PreferenceModel, eps: Option<f64>) -> Result<PreferenceModel, CliError> {
    model.with_eps_pref(eps.unwrap_or(DEFAULT_EPS_PREF)).map_err(input)
}

fn ordering_of(gap: f64, band: f64) -> Ordering {
    if gap.abs() <= band {
        Ordering::Indifferent
    } else if gap > 0.0 {
        Ordering::StrictlyPrefers
    } else {
        Ordering::StrictlyDispreferred
    }
}

impl ModelSpec {
    pub fn build(self) -> Result<LoadedModel, CliError> {
        let plain = |model: PreferenceModel, outcomes| LoadedModel { model, outcomes, support: None };
        match self {
            ModelSpec::ExpectedUtility { u, eps_pref } => {
                let n = u.len();
                Ok(plain(with_eps(PreferenceModel::expected_utility(u).map_err(input)?, eps_pref)?, n))
            }
            ModelSpec::WeightedUtility { u, w, eps_pref } => {
                let n = u.len();
                Ok(plain(with_eps(PreferenceModel::weighted_utility(u, w).map_err(input)?, eps_pref)?, n))
            }
            ModelSpec::DisappointmentAversion { u, beta, eps_pref } => {
                let n = u.len();
                let m = PreferenceModel::disappointment_aversion(u, beta).map_err(input)?;
                Ok(plain(with_eps(m, eps_pref)?, n))
            }
            ModelSpec::ImplicitKernel { kernel, eps_pref } => {
                let k = Kernel::new(kernel.t, kernel.phi).map_err(input)?;
                let n = k.outcomes();
                Ok(plain(with_eps(PreferenceModel::implicit_kernel(k), eps_pref)?, n))
            }
            ModelSpec::OracleTable { lotteries, prefers, indifferent } => table_oracle(lotteries, prefers, indifferent),
            ModelSpec::Quadratic { u, q, eps_pref } => {
                let n = u.len();
                if n == 0 {
                    return Err(CliError::Input("quadratic model needs outcomes".into()));
                }
                if q.len() != n || q.iter().any(|r| r.len() != n) {
                    return Err(CliError::Input(format!("q must be {n} x {n}")));
                }
                let eps = eps_pref.unwrap_or(DEFAULT_EPS_PREF);
                let value = move |x: &Lottery| {
                    let mut v = x.dot(&u);
                    for i in 0..n {
                        for j in 0..n {
                            v += x[i] * q[i][j] * x[j];
                        }
                    }
                    v
                };
                let oracle =
                    Oracle::new("quadratic", move |x: &Lottery, y: &Lottery| Ok(ordering_of(value(x) - value(y), eps)))
                        .with_outcomes(n)
                        .concurrent_safe(true);
                Ok(plain(PreferenceModel::oracle(oracle), n))
            }
        }
    }
}

fn table_oracle(
    lotteries: Vec<Vec<f64>>,
    prefers: Vec<[usize; 2]>,
    indifferent: Vec<[usize; 2]>,
) -> Result<LoadedModel, CliError> {
    let support: Vec<Lottery> = lotteries.into_iter().map(Lottery::new).collect::<Result<_, _>>().map_err(input)?;
    let n = support.first().map(Lottery::len).ok_or_else(|| CliError::Input("empty oracle table".into()))?;
    if support.iter().any(|l| l.len() != n) {
        return Err(CliError::Input("oracle table lotteries differ in length".into()));
    }
    let k = support.len();
    if let Some(bad) = prefers.iter().chain(&indifferent).find(|p| p[0] >= k || p[1] >= k) {
        return Err(CliError::Input(format!("oracle table pair {bad:?} out of range")));
    }
    let table = support.clone();
    let lookup = move |x: &Lottery| table.iter().position(|l| l.max_distance(x) <= 1e-12);
    let oracle = Oracle::new("oracle_table", move |x: &Lottery, y: &Lottery| {
        let (Some(i), Some(j)) = (lookup(x), lookup(y)) else {
            return Err("lottery not in the comparison table".to_string());
        };
        if i == j {
            return Ok(Ordering::Indifferent);
        }
        if prefers.contains(&[i, j]) {
            Ok(Ordering::StrictlyPrefers)
        } else if prefers.contains(&[j, i]) {
            Ok(Ordering::StrictlyDispreferred)
        } else if indifferent.contains(&[i, j]) || indifferent.contains(&[j, i]) {
            Ok(Ordering::Indifferent)
        } else {
            Err(format!("pair ({i}, {j}) not tabulated"))
        }
    })
    .with_outcomes(n)
    .concurrent_safe(true);
    Ok(LoadedModel { model: PreferenceModel::oracle(oracle), outcomes: n, support: Some(support) })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn parse(s: &str) -> Result<LoadedModel, CliError> {
        serde_json::from_str::<ModelSpec>(s).map_err(input)?.build()
    }

    #[test]
    fn parses_every_kind() {
        let m = parse(r#"{"kind":"expected_utility","u":[0,0.4,1]}"#).unwrap();
        assert_eq!(m.outcomes, 3);
        assert_eq!(m.model.eps_pref(), DEFAULT_EPS_PREF);
        parse(r#"{"kind":"weighted_utility","u":[0,1],"w":[1,2],"eps_pref":1e-10}"#).unwrap();
        parse(r#"{"kind":"disappointment_aversion","u":[0,0.5,1],"beta":2}"#).unwrap();
        let k = parse(r#"{"kind":"implicit_kernel","kernel":{"t":[0,1],"phi":[[0,0],[0.3,0.6],[1,1]]}}"#).unwrap();
        assert_eq!(k.model.family(), "implicit_kernel");
        let q = parse(r#"{"kind":"quadratic","u":[0,0.5,1],"q":[[0,0,1],[0,0,0],[1,0,0]]}"#).unwrap();
        assert!(!q.model.is_value_based());
    }

    #[test]
    fn table_oracle_answers_from_table() {
        let m = parse(r#"{"kind":"oracle_table","lotteries":[[1,0,0],[0,1,0],[0,0,1]],"prefers":[[0,1],[1,2],[2,0]]}"#)
            .unwrap();
        let s = m.support.as_ref().unwrap();
        assert_eq!(m.model.compare(&s[0], &s[1]).unwrap(), Ordering::StrictlyPrefers);
        assert_eq!(m.model.compare(&s[0], &s[2]).unwrap(), Ordering::StrictlyDispreferred);
        let off = Lottery::new(vec![0.5, 0.5, 0.0]).unwrap();
        assert!(m.model.compare(&off, &s[0]).is_err());
    }

    #[test]
    fn rejects_bad_specs() {
        for bad in [
            r#"{"kind":"expected_utility","u":[0,2]}"#,
            r#"{"kind":"expected_utility","u":[0,1],"extra":1}"#,
            r#"{"kind":"nope"}"#,
            r#"{"kind":"weighted_utility","u":[0,1],"w":[1]}"#,
            r#"{"kind":"implicit_kernel","kernel":{"t":[0,1],"phi":[[0,1]]}}"#,
            r#"{"kind":"oracle_table","lotteries":[[1,0]],"prefers":[[0,3]]}"#,
            r#"{"kind":"quadratic","u":[0,1],"q":[[0]]}"#,
        ] {
            assert!(matches!(parse(bad), Err(CliError::Input(_))), "{bad}");
        }
    }
}
