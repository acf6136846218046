//! Brute-force reference solvers and random scenario generators shared by
//! the integration tests. None of these call the library's solvers.

#![allow(dead_code)]

use groundwater_market::{AgentSpec, GoodSpec, MarketScenario, RechargeModel};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub fn table1_path() -> String {
    concat!(env!("CARGO_MANIFEST_DIR"), "/scenarios/table1.json").to_string()
}

/// Feasible range of the first good's quantity when two goods share budget `c`.
fn line_bounds(agent: &AgentSpec, c: f64) -> (f64, f64) {
    let (g1, g2) = (&agent.goods[0], &agent.goods[1]);
    let lo = g1.n.max((c - g2.a * g2.upper) / g1.a);
    let hi = g1.upper.min((c - g2.a * g2.n) / g1.a);
    (lo, hi)
}

fn line_profit(agent: &AgentSpec, c: f64, x: f64) -> f64 {
    let (g1, g2) = (&agent.goods[0], &agent.goods[1]);
    g1.profit(x) + g2.profit((c - g1.a * x) / g2.a)
}

/// Indirect profit of a two-good agent by exhaustive search along the budget line.
pub fn g_grid(agent: &AgentSpec, c: f64, step: f64) -> f64 {
    assert_eq!(agent.goods.len(), 2);
    let (lo, hi) = line_bounds(agent, c);
    assert!(lo <= hi + 1e-12, "budget {c} infeasible");
    let n = ((hi - lo) / step).ceil() as usize;
    (0..=n)
        .map(|i| line_profit(agent, c, (lo + step * i as f64).min(hi)))
        .fold(f64::NEG_INFINITY, f64::max)
}

/// Ternary search for the maximum of a concave function.
pub fn ternary_max(f: impl Fn(f64) -> f64, mut lo: f64, mut hi: f64) -> (f64, f64) {
    for _ in 0..200 {
        let m1 = lo + (hi - lo) / 3.0;
        let m2 = hi - (hi - lo) / 3.0;
        if f(m1) < f(m2) {
            lo = m1;
        } else {
            hi = m2;
        }
    }
    let x = 0.5 * (lo + hi);
    (x, f(x))
}

/// Indirect profit of a two-good agent; the line objective is concave.
pub fn g_ternary(agent: &AgentSpec, c: f64) -> f64 {
    let (lo, hi) = line_bounds(agent, c);
    ternary_max(|x| line_profit(agent, c, x), lo, hi).1
}

/// Planner welfare `max sum_j G_j(C_j)` subject to `C_1 + C_2 = total`.
pub fn planner_welfare(scenario: &MarketScenario, total: f64) -> f64 {
    let (a, b) = (&scenario.agents[0], &scenario.agents[1]);
    let lo = a.c_lo().max(total - b.c_hi());
    let hi = a.c_hi().min(total - b.c_lo());
    ternary_max(|c1| g_ternary(a, c1) + g_ternary(b, total - c1), lo, hi).1
}

fn jitter(rng: &mut ChaCha8Rng, x: f64, rel: f64) -> f64 {
    x * rng.random_range(1.0 - rel..1.0 + rel)
}

/// Prices between which a good is strictly inside its bounds.
fn interior_prices(g: &GoodSpec) -> (f64, f64) {
    let d = (g.a / (g.alpha * g.f)).powf(1.0 / (g.alpha - 1.0));
    let at = |x: f64| (x / d).powf(g.alpha - 1.0) - g.q / g.a;
    (at(g.upper), if g.n > 0.0 { at(g.n) } else { f64::INFINITY })
}

/// True when aggregate demand has no flat stretch strictly between its
/// extremes, i.e. the goods' interior price ranges overlap into one interval.
pub fn strictly_decreasing_demand(s: &MarketScenario) -> bool {
    let mut ranges: Vec<(f64, f64)> = s
        .agents
        .iter()
        .flat_map(|a| &a.goods)
        .map(interior_prices)
        .collect();
    ranges.sort_by(|a, b| a.0.total_cmp(&b.0));
    let mut reach = ranges[0].1;
    for (lo, hi) in &ranges[1..] {
        if *lo >= reach {
            return false;
        }
        reach = reach.max(*hi);
    }
    true
}

/// A small random perturbation of the two-farmer fixture: coefficients move
/// by at most 7%.
pub fn random_scenario(seed: u64) -> MarketScenario {
    perturbed_scenario(seed, 1.0 / 3.0)
}

/// Perturbation of the fixture with relative spread `scale` times (3% for
/// exponents, 15% for f and q, 20% for lower bounds, 10% elsewhere). Draws
/// whose aggregate demand has a flat stretch, where the clearing price
/// jumps, are rejected.
pub fn perturbed_scenario(seed: u64, scale: f64) -> MarketScenario {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    loop {
        let s = perturbed_fixture(&mut rng, scale);
        if strictly_decreasing_demand(&s) {
            return s;
        }
    }
}

fn perturbed_fixture(rng: &mut ChaCha8Rng, scale: f64) -> MarketScenario {
    let base = groundwater_market::fixtures::table1();
    let theta = jitter(rng, base.agents[0].theta, 0.1 * scale);
    let agents = base
        .agents
        .iter()
        .zip([theta, 1.0 - theta])
        .map(|(ag, theta)| AgentSpec {
            name: ag.name.clone(),
            theta,
            goods: ag
                .goods
                .iter()
                .map(|g| {
                    GoodSpec::new(
                        jitter(rng, g.alpha, 0.03 * scale),
                        jitter(rng, g.f, 0.15 * scale),
                        jitter(rng, g.q, 0.15 * scale),
                        g.a,
                        jitter(rng, g.n, 0.2 * scale),
                        jitter(rng, g.upper, 0.1 * scale),
                    )
                })
                .collect(),
        })
        .collect();
    let states = base
        .recharge
        .states
        .iter()
        .map(|st| (jitter(rng, st.r, 0.1 * scale), 1.0))
        .collect::<Vec<_>>();
    let probs = [1.0 / 9.0, 4.0 / 9.0, 4.0 / 9.0];
    let recharge = RechargeModel::iid(
        states
            .iter()
            .zip(probs)
            .map(|((r, _), p)| (*r, p))
            .collect(),
    )
    .unwrap();
    let h0 = jitter(rng, base.initial_water_table, 0.1 * scale);
    MarketScenario::new(agents, recharge, h0, 2).unwrap()
}

pub fn three_agent_scenario() -> MarketScenario {
    let base = groundwater_market::fixtures::table1();
    let f2 = |name: &str| AgentSpec {
        name: name.into(),
        theta: 0.25,
        ..base.agents[1].clone()
    };
    MarketScenario::new(
        vec![
            AgentSpec {
                theta: 0.5,
                ..base.agents[0].clone()
            },
            f2("farmer2a"),
            f2("farmer2b"),
        ],
        base.recharge.clone(),
        base.initial_water_table,
        2,
    )
    .unwrap()
}

/// Agent `j`'s total payoff from a banking profile, from scratch: clear each
/// market with an independent bisection on aggregate demand and the ternary
/// indirect profit.
pub fn reference_payoff(
    scenario: &MarketScenario,
    j: usize,
    banked: &[f64],
    weights: &[f64],
) -> f64 {
    let w0: Vec<f64> = scenario
        .agents
        .iter()
        .zip(banked)
        .map(|(a, b)| a.theta * scenario.initial_water_table - b)
        .collect();
    let mut total = reference_value(scenario, j, &w0);
    for (st, q) in scenario.recharge.states.iter().zip(weights) {
        let w: Vec<f64> = scenario
            .agents
            .iter()
            .zip(banked)
            .map(|(a, b)| a.theta * st.r + b)
            .collect();
        total += q * reference_value(scenario, j, &w);
    }
    total
}

fn clip_quantity(g: &GoodSpec, v: f64) -> f64 {
    let s = v + g.q / g.a;
    let raw = if s > 0.0 {
        (g.a / (g.alpha * g.f)).powf(1.0 / (g.alpha - 1.0)) * s.powf(1.0 / (g.alpha - 1.0))
    } else {
        f64::INFINITY
    };
    raw.clamp(g.n, g.upper)
}

pub fn reference_demand(agent: &AgentSpec, v: f64) -> f64 {
    agent.goods.iter().map(|g| g.a * clip_quantity(g, v)).sum()
}

/// Clearing price by plain bisection on `[-min e + tiny, 100]`.
pub fn reference_price(scenario: &MarketScenario, total: f64) -> f64 {
    let floor = scenario
        .agents
        .iter()
        .flat_map(|a| &a.goods)
        .map(|g| -g.q / g.a)
        .fold(f64::NEG_INFINITY, f64::max);
    let agg = |v: f64| {
        scenario
            .agents
            .iter()
            .map(|a| reference_demand(a, v))
            .sum::<f64>()
    };
    let (mut lo, mut hi) = (floor + 1e-9, 100.0);
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if agg(mid) > total {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    hi
}

/// One-period payoff `G_j(C_j) + p (w_j - C_j)` for two-good agents.
pub fn reference_value(scenario: &MarketScenario, j: usize, w: &[f64]) -> f64 {
    let total: f64 = w.iter().sum();
    let p = reference_price(scenario, total);
    let ag = &scenario.agents[j];
    let c = reference_demand(ag, p);
    g_ternary(ag, c) + p * (w[j] - c)
}
