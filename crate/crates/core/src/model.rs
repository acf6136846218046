//! Domain types for the groundwater market and the JSON scenario schema.
//!
//! A [`MarketScenario`] is the validated root object: a set of agents (each
//! producing one or more goods under power-law revenue and linear cost), a
//! discrete recharge model, the initial water table and a horizon. Every
//! other module takes a scenario by reference; nothing here is mutated after
//! construction.

use std::path::Path;

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::error::{Error, Result};

const SUM_TOLERANCE: f64 = 1e-9;

/// Economics of one good for one agent: revenue `f * phi^alpha`, cost `q * phi`,
/// water use `a * phi`, production bounds `[n, N]`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GoodSpec {
    pub alpha: f64,
    pub f: f64,
    pub q: f64,
    pub a: f64,
    #[serde(default)]
    pub n: f64,
    /// Upper production bound; `f64::INFINITY` when unbounded (omitted in JSON).
    #[serde(
        rename = "N",
        default = "unbounded",
        skip_serializing_if = "is_unbounded"
    )]
    pub upper: f64,
}

fn unbounded() -> f64 {
    f64::INFINITY
}

fn is_unbounded(x: &f64) -> bool {
    x.is_infinite()
}

impl GoodSpec {
    pub fn new(alpha: f64, f: f64, q: f64, a: f64, n: f64, upper: f64) -> Self {
        GoodSpec {
            alpha,
            f,
            q,
            a,
            n,
            upper,
        }
    }

    /// Scale constant of the unconstrained optimum: `(a / (alpha f))^(1/(alpha-1))`.
    pub fn d(&self) -> f64 {
        (self.a / (self.alpha * self.f)).powf(1.0 / (self.alpha - 1.0))
    }

    /// Cost per unit of water, `q / a`.
    pub fn e(&self) -> f64 {
        self.q / self.a
    }

    pub fn is_bounded(&self) -> bool {
        self.upper.is_finite()
    }

    /// Net production profit `f phi^alpha - q phi`.
    pub fn profit(&self, phi: f64) -> f64 {
        self.f * phi.powf(self.alpha) - self.q * phi
    }

    fn validate(&self, ctx: &str) -> Result<()> {
        let bad = |what: &str| Err(Error::Validation(format!("{ctx}: {what}")));
        if !(self.alpha > 0.0 && self.alpha < 1.0) {
            return bad("alpha must lie in (0, 1)");
        }
        if !(self.f >= 0.0 && self.f.is_finite()) {
            return bad("f must be finite and >= 0");
        }
        if !(self.q >= 0.0 && self.q.is_finite()) {
            return bad("q must be finite and >= 0");
        }
        if !(self.a > 0.0 && self.a.is_finite()) {
            return bad("a must be finite and > 0");
        }
        if !(self.n >= 0.0 && self.n.is_finite()) {
            return bad("n must be finite and >= 0");
        }
        if self.upper.is_nan() || self.n > self.upper {
            return bad("need n <= N");
        }
        Ok(())
    }
}

/// A farmer: the goods she can produce and her share of recharge.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AgentSpec {
    pub name: String,
    pub theta: f64,
    pub goods: Vec<GoodSpec>,
}

impl AgentSpec {
    /// Minimal water need `sum_k a^k n^k`.
    pub fn c_lo(&self) -> f64 {
        self.goods.iter().map(|g| g.a * g.n).sum()
    }

    /// Maximal useful water `sum_k a^k N^k` (infinite if any good is unbounded).
    pub fn c_hi(&self) -> f64 {
        self.goods.iter().map(|g| g.a * g.upper).sum()
    }

    /// Infimum of prices at which the agent's demand is finite and well defined.
    ///
    /// Unbounded goods need `v + e > 0`; bounded goods saturate at `N` below
    /// `-e`, so an all-bounded agent has demand defined on the whole line.
    pub fn price_floor(&self) -> f64 {
        self.goods
            .iter()
            .filter(|g| !g.is_bounded())
            .map(|g| -g.e())
            .fold(f64::NEG_INFINITY, f64::max)
    }

    /// Price at or below which every good is at its upper bound.
    pub(crate) fn saturation_price(&self) -> f64 {
        self.goods
            .iter()
            .map(|g| -g.e())
            .fold(f64::INFINITY, f64::min)
    }
}

/// One discrete recharge outcome.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RechargeState {
    pub r: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub label: Option<String>,
}

#[derive(Debug, Clone, PartialEq)]
pub enum RechargeMode {
    Iid {
        probs: Vec<f64>,
    },
    Markov {
        transition: Vec<Vec<f64>>,
        initial_state: usize,
    },
}

/// Discrete recharge process, either i.i.d. across periods or a Markov chain.
#[derive(Debug, Clone, PartialEq)]
pub struct RechargeModel {
    pub states: Vec<RechargeState>,
    pub mode: RechargeMode,
}

impl RechargeModel {
    pub fn iid(states: Vec<(f64, f64)>) -> Result<Self> {
        let (rs, ps): (Vec<_>, Vec<_>) = states.into_iter().unzip();
        Self::build(
            rs.into_iter()
                .map(|r| RechargeState { r, label: None })
                .collect(),
            RechargeMode::Iid { probs: ps },
        )
    }

    pub fn markov(rs: Vec<f64>, transition: Vec<Vec<f64>>, initial_state: usize) -> Result<Self> {
        Self::build(
            rs.into_iter()
                .map(|r| RechargeState { r, label: None })
                .collect(),
            RechargeMode::Markov {
                transition,
                initial_state,
            },
        )
    }

    fn build(states: Vec<RechargeState>, mode: RechargeMode) -> Result<Self> {
        if states.is_empty() {
            return Err(Error::Validation(
                "recharge needs at least one state".into(),
            ));
        }
        for (m, s) in states.iter().enumerate() {
            if !(s.r >= 0.0 && s.r.is_finite()) {
                return Err(Error::Validation(format!(
                    "recharge state {m}: r must be finite and >= 0"
                )));
            }
        }
        let m = states.len();
        let mode = match mode {
            RechargeMode::Iid { probs } => {
                if probs.len() != m {
                    return Err(Error::Validation(
                        "recharge: one probability per state required".into(),
                    ));
                }
                RechargeMode::Iid {
                    probs: normalize_weights(&probs, "recharge probabilities")?,
                }
            }
            RechargeMode::Markov {
                transition,
                initial_state,
            } => {
                if transition.len() != m {
                    return Err(Error::Validation(format!(
                        "recharge: transition matrix needs {m} rows"
                    )));
                }
                if initial_state >= m {
                    return Err(Error::Validation(format!(
                        "recharge: initial_state {initial_state} out of range"
                    )));
                }
                let transition = transition
                    .iter()
                    .enumerate()
                    .map(|(i, row)| {
                        if row.len() != m {
                            return Err(Error::Validation(format!(
                                "recharge: transition row {i} needs {m} entries"
                            )));
                        }
                        normalize_weights(row, &format!("transition row {i}"))
                    })
                    .collect::<Result<Vec<_>>>()?;
                RechargeMode::Markov {
                    transition,
                    initial_state,
                }
            }
        };
        Ok(RechargeModel { states, mode })
    }

    pub fn len(&self) -> usize {
        self.states.len()
    }

    pub fn is_empty(&self) -> bool {
        self.states.is_empty()
    }

    pub fn amounts(&self) -> Vec<f64> {
        self.states.iter().map(|s| s.r).collect()
    }

    /// Next-period state weights given the current state.
    ///
    /// i.i.d. mode ignores `current`; Markov mode uses the transition row of
    /// `current`, defaulting to the declared initial state.
    pub fn next_weights(&self, current: Option<usize>) -> &[f64] {
        match &self.mode {
            RechargeMode::Iid { probs } => probs,
            RechargeMode::Markov {
                transition,
                initial_state,
            } => &transition[current.unwrap_or(*initial_state)],
        }
    }

    pub fn initial_state(&self) -> Option<usize> {
        match self.mode {
            RechargeMode::Iid { .. } => None,
            RechargeMode::Markov { initial_state, .. } => Some(initial_state),
        }
    }
}

/// Validates that weights are non-negative and sum to one within 1e-9, then
/// rescales them so that their left-to-right sum is exactly 1.0.
pub(crate) fn normalize_weights(w: &[f64], what: &str) -> Result<Vec<f64>> {
    if w.iter().any(|p| !(p.is_finite() && *p >= 0.0)) {
        return Err(Error::Validation(format!(
            "{what}: entries must be finite and >= 0"
        )));
    }
    let s: f64 = w.iter().sum();
    if (s - 1.0).abs() > SUM_TOLERANCE {
        return Err(Error::Validation(format!("{what}: sum {s} != 1")));
    }
    if s == 1.0 {
        return Ok(w.to_vec());
    }
    let mut out: Vec<f64> = w.iter().map(|p| p / s).collect();
    let big = out
        .iter()
        .enumerate()
        .max_by(|a, b| a.1.total_cmp(b.1))
        .map(|(i, _)| i)
        .unwrap_or(0);
    for _ in 0..8 {
        let s: f64 = out.iter().sum();
        if s == 1.0 {
            break;
        }
        out[big] += 1.0 - s;
    }
    Ok(out)
}

/// Per-agent available water, all entries non-negative.
#[derive(Debug, Clone, PartialEq)]
pub struct Allocation(Vec<f64>);

impl Allocation {
    pub fn new(w: Vec<f64>) -> Result<Self> {
        if w.iter().any(|x| !(x.is_finite() && *x >= 0.0)) {
            return Err(Error::Validation(
                "allocation entries must be finite and >= 0".into(),
            ));
        }
        Ok(Allocation(w))
    }

    pub fn total(&self) -> f64 {
        self.0.iter().sum()
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }
}

impl std::ops::Index<usize> for Allocation {
    type Output = f64;
    fn index(&self, i: usize) -> &f64 {
        &self.0[i]
    }
}

/// The validated root object: agents, recharge process, initial water table
/// and horizon.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "ScenarioDoc", into = "ScenarioDoc")]
pub struct MarketScenario {
    pub agents: Vec<AgentSpec>,
    pub recharge: RechargeModel,
    pub initial_water_table: f64,
    pub horizon: usize,
}

impl MarketScenario {
    pub fn new(
        agents: Vec<AgentSpec>,
        recharge: RechargeModel,
        initial_water_table: f64,
        horizon: usize,
    ) -> Result<Self> {
        let s = MarketScenario {
            agents,
            recharge,
            initial_water_table,
            horizon,
        };
        s.validate()?;
        Ok(s)
    }

    fn validate(&self) -> Result<()> {
        if self.agents.is_empty() {
            return Err(Error::Validation("at least one agent required".into()));
        }
        if self.horizon < 1 {
            return Err(Error::Validation("horizon must be >= 1".into()));
        }
        if !(self.initial_water_table >= 0.0 && self.initial_water_table.is_finite()) {
            return Err(Error::Validation(
                "initial_water_table must be finite and >= 0".into(),
            ));
        }
        for (j, ag) in self.agents.iter().enumerate() {
            let ctx = format!("agent {j} ({})", ag.name);
            if ag.goods.is_empty() {
                return Err(Error::Validation(format!("{ctx}: needs at least one good")));
            }
            if !(ag.theta > 0.0 && ag.theta <= 1.0) {
                return Err(Error::Validation(format!(
                    "{ctx}: theta must lie in (0, 1]"
                )));
            }
            for (k, g) in ag.goods.iter().enumerate() {
                g.validate(&format!("{ctx} good {k}"))?;
            }
        }
        let theta_sum: f64 = self.agents.iter().map(|a| a.theta).sum();
        if (theta_sum - 1.0).abs() > SUM_TOLERANCE {
            return Err(Error::Validation(format!("theta sum {theta_sum} != 1")));
        }
        Ok(())
    }

    pub fn num_agents(&self) -> usize {
        self.agents.len()
    }

    pub fn thetas(&self) -> Vec<f64> {
        self.agents.iter().map(|a| a.theta).collect()
    }

    /// `W_j(0) = theta_j H(0)`.
    pub fn initial_allocation(&self) -> Allocation {
        Allocation(self.share(self.initial_water_table))
    }

    /// Splits a recharge amount by the agents' shares.
    pub fn share(&self, r: f64) -> Vec<f64> {
        self.agents.iter().map(|a| a.theta * r).collect()
    }

    pub fn total_c_lo(&self) -> f64 {
        self.agents.iter().map(AgentSpec::c_lo).sum()
    }

    pub fn total_c_hi(&self) -> f64 {
        self.agents.iter().map(AgentSpec::c_hi).sum()
    }

    /// Infimum of the common price domain across agents.
    pub fn price_floor(&self) -> f64 {
        self.agents
            .iter()
            .map(AgentSpec::price_floor)
            .fold(f64::NEG_INFINITY, f64::max)
    }

    /// True when all agents share the same water intensity for each good index.
    pub fn common_water_intensity(&self) -> bool {
        let first = &self.agents[0].goods;
        self.agents.iter().all(|ag| {
            ag.goods.len() == first.len() && ag.goods.iter().zip(first).all(|(g, h)| g.a == h.a)
        })
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("scenario serializes")
    }

    /// Hex SHA-256 of the canonical (compact) JSON form.
    pub fn digest(&self) -> String {
        let canon = serde_json::to_vec(self).expect("scenario serializes");
        Sha256::digest(&canon)
            .iter()
            .map(|b| format!("{b:02x}"))
            .collect()
    }
}

/// On-disk form of a scenario.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ScenarioDoc {
    pub horizon: usize,
    pub initial_water_table: f64,
    pub agents: Vec<AgentSpec>,
    pub recharge: RechargeDoc,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(tag = "mode", rename_all = "lowercase", deny_unknown_fields)]
pub enum RechargeDoc {
    Iid {
        states: Vec<IidStateDoc>,
    },
    Markov {
        states: Vec<RechargeState>,
        transition: Vec<Vec<f64>>,
        initial_state: usize,
    },
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct IidStateDoc {
    pub r: f64,
    pub prob: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub label: Option<String>,
}

impl TryFrom<ScenarioDoc> for MarketScenario {
    type Error = Error;

    fn try_from(doc: ScenarioDoc) -> Result<Self> {
        let recharge = match doc.recharge {
            RechargeDoc::Iid { states } => {
                let probs = states.iter().map(|s| s.prob).collect();
                RechargeModel::build(
                    states
                        .into_iter()
                        .map(|s| RechargeState {
                            r: s.r,
                            label: s.label,
                        })
                        .collect(),
                    RechargeMode::Iid { probs },
                )?
            }
            RechargeDoc::Markov {
                states,
                transition,
                initial_state,
            } => RechargeModel::build(
                states,
                RechargeMode::Markov {
                    transition,
                    initial_state,
                },
            )?,
        };
        MarketScenario::new(doc.agents, recharge, doc.initial_water_table, doc.horizon)
    }
}

impl From<MarketScenario> for ScenarioDoc {
    fn from(s: MarketScenario) -> Self {
        let recharge = match s.recharge.mode {
            RechargeMode::Iid { probs } => RechargeDoc::Iid {
                states: s
                    .recharge
                    .states
                    .into_iter()
                    .zip(probs)
                    .map(|(st, prob)| IidStateDoc {
                        r: st.r,
                        prob,
                        label: st.label,
                    })
                    .collect(),
            },
            RechargeMode::Markov {
                transition,
                initial_state,
            } => RechargeDoc::Markov {
                states: s.recharge.states,
                transition,
                initial_state,
            },
        };
        ScenarioDoc {
            horizon: s.horizon,
            initial_water_table: s.initial_water_table,
            agents: s.agents,
            recharge,
        }
    }
}

/// Parses and validates a scenario document.
pub fn parse_scenario(text: &str) -> Result<MarketScenario> {
    let de = &mut serde_json::Deserializer::from_str(text);
    let doc: ScenarioDoc = serde_path_to_error::deserialize(de).map_err(|e| {
        let path = e.path().to_string();
        let inner = e.into_inner();
        let full = inner.to_string();
        let message = match full.rsplit_once(" at line ") {
            Some((msg, _)) if inner.line() > 0 => msg.to_string(),
            _ => full,
        };
        Error::Parse {
            path,
            line: inner.line(),
            column: inner.column(),
            message,
        }
    })?;
    MarketScenario::try_from(doc)
}

/// Reads, parses and validates a scenario file.
pub fn load_scenario(path: impl AsRef<Path>) -> Result<MarketScenario> {
    let text = std::fs::read_to_string(path)?;
    parse_scenario(&text)
}

/// Whether lower production bounds can be met from recharge shares alone.
#[derive(Debug, Clone, Serialize)]
pub struct StateFeasibility {
    pub label: String,
    pub water: f64,
    /// Per agent: `c_lo_j <= theta_j * water`.
    pub strong: Vec<bool>,
    /// `sum_j c_lo_j <= water`.
    pub weak: bool,
}

impl StateFeasibility {
    pub fn strong_holds(&self) -> bool {
        self.strong.iter().all(|&b| b)
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct FeasibilityReport {
    pub c_lo: Vec<f64>,
    pub c_hi: Vec<f64>,
    pub initial: StateFeasibility,
    pub states: Vec<StateFeasibility>,
    pub common_water_intensity: bool,
    pub warnings: Vec<String>,
}

/// Checks, for the initial water table and each recharge state, whether
/// every agent's minimal water need is covered by her share.
pub fn validate_feasibility(scenario: &MarketScenario) -> FeasibilityReport {
    let c_lo: Vec<f64> = scenario.agents.iter().map(AgentSpec::c_lo).collect();
    let c_hi: Vec<f64> = scenario.agents.iter().map(AgentSpec::c_hi).collect();
    let total_lo: f64 = c_lo.iter().sum();
    let check = |label: String, water: f64| StateFeasibility {
        strong: scenario
            .agents
            .iter()
            .zip(&c_lo)
            .map(|(ag, lo)| *lo <= ag.theta * water)
            .collect(),
        weak: total_lo <= water,
        label,
        water,
    };
    let initial = check("t0".into(), scenario.initial_water_table);
    let states: Vec<_> = scenario
        .recharge
        .states
        .iter()
        .enumerate()
        .map(|(m, s)| {
            let label = s
                .label
                .clone()
                .unwrap_or_else(|| format!("omega_{}", m + 1));
            check(label, s.r)
        })
        .collect();

    let mut warnings = Vec::new();
    for st in std::iter::once(&initial).chain(&states) {
        if !st.weak {
            warnings.push(format!(
                "{}: total lower bound {total_lo} exceeds available water {}",
                st.label, st.water
            ));
        } else if !st.strong_holds() {
            let who: Vec<_> = st
                .strong
                .iter()
                .enumerate()
                .filter(|(_, ok)| !**ok)
                .map(|(j, _)| scenario.agents[j].name.as_str())
                .collect();
            warnings.push(format!(
                "{}: lower production bounds may be unmeetable without trade for {}",
                st.label,
                who.join(", ")
            ));
        }
    }
    let common = scenario.common_water_intensity();
    if !common {
        warnings.push(
            "agents disagree on water intensity a^k; planner equivalence not guaranteed".into(),
        );
    }
    FeasibilityReport {
        c_lo,
        c_hi,
        initial,
        states,
        common_water_intensity: common,
        warnings,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const TABLE1: &str = crate::fixtures::TABLE1_JSON;

    #[test]
    fn loads_table1() {
        let s = parse_scenario(TABLE1).unwrap();
        assert_eq!(s.num_agents(), 2);
        assert!(s.agents.iter().all(|a| a.goods.len() == 2));
        assert_eq!(s.thetas(), vec![0.6, 0.4]);
        assert_eq!(s.recharge.amounts(), vec![50.0, 75.0, 95.0]);
        assert_eq!(s.initial_water_table, 90.0);
        let p = s.recharge.next_weights(None);
        assert_eq!(p.iter().sum::<f64>(), 1.0);
        assert!((p[0] - 1.0 / 9.0).abs() < 1e-9);
    }

    #[test]
    fn derived_constants() {
        let s = parse_scenario(TABLE1).unwrap();
        let g = &s.agents[0].goods[0];
        assert!((g.d() - 759.69).abs() < 0.01, "{}", g.d());
        assert_eq!(g.e(), 2.0);
    }

    #[test]
    fn theta_sum_rejected() {
        let bad = TABLE1.replace("\"theta\": 0.4", "\"theta\": 0.5");
        let err = parse_scenario(&bad).unwrap_err();
        assert!(err.to_string().contains("theta sum"), "{err}");
    }

    #[test]
    fn degenerate_single_agent() {
        let txt = r#"{"horizon":1,"initial_water_table":0.0,
            "agents":[{"name":"solo","theta":1.0,
              "goods":[{"alpha":0.5,"f":1.0,"q":0.0,"a":1.0,"n":0.0,"N":0.0}]}],
            "recharge":{"mode":"iid","states":[{"r":0.0,"prob":1.0}]}}"#;
        let s = parse_scenario(txt).unwrap();
        assert_eq!(s.agents[0].c_lo(), 0.0);
        assert_eq!(s.agents[0].c_hi(), 0.0);
    }

    #[test]
    fn parse_error_has_location() {
        let txt = r#"{"horizon":1,"initial_water_table":1.0,
            "agents":[{"name":"x","theta":1.0,"goods":[{"alpha":"high"}]}]}"#;
        match parse_scenario(txt).unwrap_err() {
            Error::Parse { path, line, .. } => {
                assert!(path.contains("alpha"), "{path}");
                assert_eq!(line, 2);
            }
            e => panic!("unexpected {e}"),
        }
    }

    #[test]
    fn omitted_upper_bound_is_unbounded() {
        let txt = r#"{"horizon":1,"initial_water_table":1.0,
            "agents":[{"name":"x","theta":1.0,"goods":[{"alpha":0.5,"f":2.0,"q":0.0,"a":1.0}]}],
            "recharge":{"mode":"iid","states":[{"r":1.0,"prob":1.0}]}}"#;
        let s = parse_scenario(txt).unwrap();
        assert!(s.agents[0].goods[0].upper.is_infinite());
        assert!(!s.to_json().contains("\"N\""));
    }

    #[test]
    fn markov_mode_parses() {
        let txt = r#"{"horizon":3,"initial_water_table":10.0,
            "agents":[{"name":"x","theta":1.0,"goods":[{"alpha":0.5,"f":2.0,"q":0.0,"a":1.0}]}],
            "recharge":{"mode":"markov","states":[{"r":1.0,"label":"dry"},{"r":5.0}],
              "transition":[[0.7,0.3],[0.2,0.8]],"initial_state":1}}"#;
        let s = parse_scenario(txt).unwrap();
        assert_eq!(s.recharge.initial_state(), Some(1));
        assert_eq!(s.recharge.next_weights(None), &[0.2, 0.8]);
        assert_eq!(s.recharge.next_weights(Some(0)), &[0.7, 0.3]);
        let back = parse_scenario(&s.to_json()).unwrap();
        assert_eq!(back, s);
    }

    #[test]
    fn bad_probabilities_rejected() {
        let r = RechargeModel::iid(vec![(1.0, 0.5), (2.0, 0.6)]);
        assert!(matches!(r, Err(Error::Validation(_))));
        let r = RechargeModel::iid(vec![(-1.0, 1.0)]);
        assert!(r.is_err());
    }

    #[test]
    fn feasibility_table1() {
        let s = parse_scenario(TABLE1).unwrap();
        let rep = validate_feasibility(&s);
        assert_eq!(rep.c_lo, vec![15.0, 15.0]);
        let r50 = &rep.states[0];
        assert_eq!(r50.water, 50.0);
        assert!(r50.strong_holds() && r50.weak);
        assert!(rep.common_water_intensity);
        assert!(rep.warnings.is_empty());
    }

    #[test]
    fn feasibility_forced_violation() {
        let g1 = GoodSpec::new(0.5, 1.0, 0.0, 1.0, 100.0, 200.0);
        let g2 = GoodSpec::new(0.5, 1.0, 0.0, 2.0, 0.0, 10.0);
        let other = GoodSpec::new(0.5, 1.0, 0.0, 1.0, 0.0, 10.0);
        let agents = vec![
            AgentSpec {
                name: "a".into(),
                theta: 0.5,
                goods: vec![g1, g2],
            },
            AgentSpec {
                name: "b".into(),
                theta: 0.5,
                goods: vec![other],
            },
        ];
        let s = MarketScenario::new(
            agents,
            RechargeModel::iid(vec![(50.0, 1.0)]).unwrap(),
            50.0,
            1,
        )
        .unwrap();
        let rep = validate_feasibility(&s);
        assert!(!rep.states[0].strong[0]);
        assert!(rep.states[0].strong[1]);
        assert!(!rep.states[0].weak);
        assert!(!rep.warnings.is_empty());
    }

    #[test]
    fn feasibility_zero_lower_bounds() {
        let g = GoodSpec::new(0.5, 1.0, 1.0, 1.0, 0.0, 10.0);
        let agents = vec![AgentSpec {
            name: "a".into(),
            theta: 1.0,
            goods: vec![g],
        }];
        let s = MarketScenario::new(
            agents,
            RechargeModel::iid(vec![(0.0, 1.0)]).unwrap(),
            0.0,
            1,
        )
        .unwrap();
        let rep = validate_feasibility(&s);
        assert!(rep.initial.strong_holds() && rep.initial.weak);
        assert!(rep.states[0].strong_holds() && rep.states[0].weak);
    }

    #[test]
    fn normalization_is_idempotent() {
        let w = normalize_weights(&[0.1111111111, 0.4444444444, 0.4444444445], "p").unwrap();
        assert_eq!(w.iter().sum::<f64>(), 1.0);
        assert_eq!(normalize_weights(&w, "p").unwrap(), w);
    }
}
