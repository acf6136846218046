//! Recharge sampling and multi-period rollouts under a banking policy.
//!
//! Each period the agents bank `b(t)` from their water `W(t)`, the rest is
//! cleared at the Pareto price, and the next period starts from
//! `W_j(t+1) = W_j(t) + theta_j R(t+1) - C_j(t) - psi_j(t)`.
//!
//! Randomness comes from ChaCha8 seeded with a 64-bit seed; path `i` of a
//! batch uses stream `i`, so paths are reproducible independently of the
//! number of worker threads.

use std::io::Write;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::market::clear;
use crate::model::{MarketScenario, RechargeMode, RechargeModel};

fn draw(weights: &[f64], u: f64) -> usize {
    let mut acc = 0.0;
    for (m, w) in weights.iter().enumerate() {
        acc += w;
        if u < acc {
            return m;
        }
    }
    weights.len() - 1
}

/// Draws `len` successive recharge states (indices into `model.states`).
pub fn sample_recharge(model: &RechargeModel, len: usize, seed: u64) -> Vec<usize> {
    sample_recharge_stream(model, len, seed, 0)
}

/// As [`sample_recharge`], on an independent ChaCha stream.
pub fn sample_recharge_stream(
    model: &RechargeModel,
    len: usize,
    seed: u64,
    stream: u64,
) -> Vec<usize> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(stream);
    let mut current = model.initial_state();
    let mut out = Vec::with_capacity(len);
    for _ in 0..len {
        let u: f64 = rng.random();
        let next = match &model.mode {
            RechargeMode::Iid { probs } => draw(probs, u),
            RechargeMode::Markov { transition, .. } => {
                draw(&transition[current.expect("markov has a state")], u)
            }
        };
        current = Some(next);
        out.push(next);
    }
    out
}

/// Decides how much each agent banks in a period.
pub trait BankingPolicy: Sync {
    fn bank(&self, t: usize, last_period: bool, water: &[f64], state: Option<usize>) -> Vec<f64>;
}

/// Built-in policies.
#[derive(Debug, Clone, PartialEq)]
pub enum Policy {
    /// Never bank; every period is a stand-alone market.
    Myopic,
    /// Bank the same vector every period except the last.
    Fixed(Vec<f64>),
}

impl BankingPolicy for Policy {
    fn bank(&self, _t: usize, last_period: bool, water: &[f64], _state: Option<usize>) -> Vec<f64> {
        match self {
            Policy::Fixed(b) if !last_period => b.clone(),
            _ => vec![0.0; water.len()],
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PeriodRecord {
    pub t: usize,
    /// Recharge state that arrived at the start of `t` (none at `t = 0` in i.i.d. mode).
    pub state: Option<usize>,
    pub recharge: Option<f64>,
    pub water_table: f64,
    pub water: Vec<f64>,
    pub price: f64,
    pub consumption: Vec<f64>,
    pub trades: Vec<f64>,
    pub banked: Vec<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Trajectory {
    pub seed: Option<u64>,
    pub periods: Vec<PeriodRecord>,
    /// Set when the water table went negative at some point.
    pub depleted: bool,
    /// Present when the rollout stopped early, e.g. "market infeasible at t=3: ...".
    pub terminated: Option<String>,
}

/// Rolls the market forward along a given recharge path.
///
/// `path[i]` is the state arriving at the start of period `i + 1`; the
/// trajectory covers `path.len() + 1` periods.
pub fn rollout(
    scenario: &MarketScenario,
    policy: &dyn BankingPolicy,
    path: &[usize],
) -> Trajectory {
    let periods = path.len() + 1;
    let mut water = scenario.initial_allocation().as_slice().to_vec();
    let mut table = scenario.initial_water_table;
    let mut state = scenario.recharge.initial_state();
    let mut recharge = None;
    let mut traj = Trajectory {
        seed: None,
        periods: Vec::with_capacity(periods),
        depleted: table < 0.0,
        terminated: None,
    };
    for t in 0..periods {
        let banked = policy.bank(t, t + 1 == periods, &water, state);
        let available: f64 = water.iter().sum();
        if banked.len() != water.len()
            || banked.iter().any(|b| !(*b >= 0.0))
            || banked.iter().sum::<f64>() > available
        {
            traj.terminated = Some(format!("invalid banking at t={t}: {banked:?}"));
            break;
        }
        let net: Vec<f64> = water.iter().zip(&banked).map(|(w, b)| w - b).collect();
        let eq = match clear(scenario, &net) {
            Ok(eq) => eq,
            Err(e) => {
                traj.terminated = Some(format!("market infeasible at t={t}: {e}"));
                break;
            }
        };
        traj.periods.push(PeriodRecord {
            t,
            state,
            recharge,
            water_table: table,
            water: water.clone(),
            price: eq.price,
            consumption: eq.consumption.clone(),
            trades: eq.trades.clone(),
            banked,
        });
        if t + 1 == periods {
            break;
        }
        let next = path[t];
        let r = scenario.recharge.states[next].r;
        for (j, ag) in scenario.agents.iter().enumerate() {
            water[j] += ag.theta * r - eq.consumption[j] - eq.trades[j];
        }
        table += r - eq.consumption.iter().sum::<f64>();
        if table < 0.0 {
            traj.depleted = true;
        }
        state = Some(next);
        recharge = Some(r);
    }
    traj
}

/// Samples a recharge path from `seed` and rolls it out for `periods` periods.
pub fn rollout_sampled(
    scenario: &MarketScenario,
    policy: &dyn BankingPolicy,
    periods: usize,
    seed: u64,
    stream: u64,
) -> Trajectory {
    let path = sample_recharge_stream(&scenario.recharge, periods.saturating_sub(1), seed, stream);
    let mut traj = rollout(scenario, policy, &path);
    traj.seed = Some(seed);
    traj
}

/// Runs `paths` independent rollouts in parallel; path `i` uses stream `i`.
pub fn simulate(
    scenario: &MarketScenario,
    policy: &dyn BankingPolicy,
    periods: usize,
    paths: usize,
    seed: u64,
) -> Vec<Trajectory> {
    (0..paths as u64)
        .into_par_iter()
        .map(|i| rollout_sampled(scenario, policy, periods, seed, i))
        .collect()
}

/// Mean price per period over trajectories that reached that period.
pub fn mean_prices(trajectories: &[Trajectory], periods: usize) -> Vec<Option<f64>> {
    (0..periods)
        .map(|t| {
            let prices: Vec<f64> = trajectories
                .iter()
                .filter_map(|tr| tr.periods.get(t).map(|p| p.price))
                .collect();
            (!prices.is_empty()).then(|| prices.iter().sum::<f64>() / prices.len() as f64)
        })
        .collect()
}

/// Writes `t,state,r,H,W_1..W_J,p,C_1..C_J,psi_1..psi_J,b_1..b_J`.
pub fn write_trajectory_csv<W: Write>(
    scenario: &MarketScenario,
    traj: &Trajectory,
    mut out: W,
) -> std::io::Result<()> {
    let j_count = scenario.num_agents();
    let cols = |name: &'static str| (1..=j_count).map(move |j| format!("{name}_{j}"));
    let mut header: Vec<String> = vec!["t".into(), "state".into(), "r".into(), "H".into()];
    header.extend(cols("W"));
    header.push("p".into());
    header.extend(cols("C"));
    header.extend(cols("psi"));
    header.extend(cols("b"));
    writeln!(out, "{}", header.join(","))?;
    let fmt = |xs: &[f64]| {
        xs.iter()
            .map(|x| format!("{x:.6}"))
            .collect::<Vec<_>>()
            .join(",")
    };
    for p in &traj.periods {
        let state = p.state.map(|s| (s + 1).to_string()).unwrap_or_default();
        let r = p.recharge.map(|r| format!("{r:.6}")).unwrap_or_default();
        writeln!(
            out,
            "{},{},{},{:.6},{},{:.6},{},{},{}",
            p.t,
            state,
            r,
            p.water_table,
            fmt(&p.water),
            p.price,
            fmt(&p.consumption),
            fmt(&p.trades),
            fmt(&p.banked)
        )?;
    }
    Ok(())
}
