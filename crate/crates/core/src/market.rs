//! One-period market: aggregate demand, the Pareto clearing price, trading
//! bounds, payoffs, and the no-trade / rationed Nash equilibria that exist at
//! arbitrary announced prices.

use std::io::Write;

use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, InfeasibleSide, Result};
use crate::model::{Allocation, MarketScenario};
use crate::production::{
    clamped_profit, demand, inverse_demand, max_profit_g, quantity, ProductionPlan,
};
use crate::scalar::{bisect_decreasing, expand_upper};

/// Outcome of a one-period market cleared at the Pareto price.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct OnePeriodEquilibrium {
    /// Water each agent brings to the market (may be negative when an agent
    /// has committed to bank more than she holds and must buy the difference).
    pub allocation: Vec<f64>,
    pub price: f64,
    pub consumption: Vec<f64>,
    /// Water sold (positive) or bought (negative).
    pub trades: Vec<f64>,
    pub plans: Vec<ProductionPlan>,
    /// `G_j(C_j) + psi_j * price`.
    pub payoffs: Vec<f64>,
}

impl OnePeriodEquilibrium {
    pub fn total_water(&self) -> f64 {
        self.allocation.iter().sum()
    }

    /// Total water sold, `sum_j max(psi_j, 0)`.
    pub fn trade_volume(&self) -> f64 {
        self.trades.iter().filter(|t| **t > 0.0).sum()
    }
}

/// Desired aggregate water use at price `v`.
pub fn aggregate_consumption(scenario: &MarketScenario, v: f64) -> Result<f64> {
    let floor = scenario.price_floor();
    if v.is_nan() || v <= floor {
        return Err(Error::Domain {
            value: v,
            lower_bound: floor,
        });
    }
    Ok(aggregate(scenario, v))
}

pub(crate) fn aggregate(scenario: &MarketScenario, v: f64) -> f64 {
    scenario.agents.iter().map(|ag| demand(ag, v)).sum()
}

fn demand_lower_bracket(scenario: &MarketScenario) -> f64 {
    let all_bounded = scenario
        .agents
        .iter()
        .all(|ag| ag.goods.iter().all(|g| g.is_bounded()));
    if all_bounded {
        scenario
            .agents
            .iter()
            .map(|ag| ag.saturation_price())
            .fold(f64::INFINITY, f64::min)
    } else {
        scenario.price_floor()
    }
}

/// Checks `sum c_lo < total < sum c_hi`.
pub fn check_total_water(scenario: &MarketScenario, total: f64) -> Result<()> {
    let lo = scenario.total_c_lo();
    let hi = scenario.total_c_hi();
    if !(total > lo) {
        return Err(Error::Infeasible {
            total,
            side: InfeasibleSide::BelowLower(lo),
        });
    }
    if !(total < hi) {
        return Err(Error::Infeasible {
            total,
            side: InfeasibleSide::AboveUpper(hi),
        });
    }
    Ok(())
}

/// Market-clearing price `inf { v : aggregate demand(v) <= total }`.
///
/// Depends only on the total water, never on how it is split.
pub fn pareto_price(scenario: &MarketScenario, total: f64) -> Result<f64> {
    check_total_water(scenario, total)?;
    let f = |v: f64| aggregate(scenario, v);
    let lo = demand_lower_bracket(scenario);
    let hi = expand_upper(f, total, (lo + 1.0).max(1.0)).ok_or(Error::Infeasible {
        total,
        side: InfeasibleSide::BelowLower(scenario.total_c_lo()),
    })?;
    Ok(bisect_decreasing(f, total, lo, hi))
}

/// Clears the market for arbitrary real net allocations.
pub(crate) fn clear(scenario: &MarketScenario, net: &[f64]) -> Result<OnePeriodEquilibrium> {
    let j_count = scenario.num_agents();
    assert_eq!(
        net.len(),
        j_count,
        "allocation length must match agent count"
    );
    let total: f64 = net.iter().sum();
    let price = pareto_price(scenario, total)?;

    let mut consumption = Vec::with_capacity(j_count);
    let mut trades = Vec::with_capacity(j_count);
    let mut plans = Vec::with_capacity(j_count);
    let mut running = 0.0;
    for (j, ag) in scenario.agents.iter().enumerate() {
        if j + 1 < j_count {
            let phi: Vec<f64> = ag.goods.iter().map(|g| quantity(g, price)).collect();
            let plan = ProductionPlan::from_quantities(ag, phi);
            let psi = net[j] - plan.consumption;
            running += psi;
            consumption.push(plan.consumption);
            trades.push(psi);
            plans.push(plan);
        } else {
            // The last agent absorbs the rounding residual so that the
            // left-to-right sum of trades is exactly zero.
            let psi = -running;
            let c = net[j] - psi;
            let plan = max_profit_g(ag, c.clamp(ag.c_lo(), ag.c_hi()))?.plan;
            consumption.push(c);
            trades.push(psi);
            plans.push(plan);
        }
    }
    let payoffs = plans
        .iter()
        .zip(&trades)
        .map(|(plan, psi)| plan.profit + psi * price)
        .collect();
    Ok(OnePeriodEquilibrium {
        allocation: net.to_vec(),
        price,
        consumption,
        trades,
        plans,
        payoffs,
    })
}

/// Pareto-optimal one-period equilibrium for allocation `w`.
pub fn solve_one_period(scenario: &MarketScenario, w: &Allocation) -> Result<OnePeriodEquilibrium> {
    check_len(scenario, w)?;
    clear(scenario, w.as_slice())
}

fn check_len(scenario: &MarketScenario, w: &Allocation) -> Result<()> {
    if w.len() != scenario.num_agents() {
        return Err(Error::Validation(format!(
            "allocation has {} entries for {} agents",
            w.len(),
            scenario.num_agents()
        )));
    }
    Ok(())
}

/// Range of prices at which some agent buys and some agent sells.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PriceBand {
    pub p_lo: f64,
    pub p_hi: f64,
    /// Price at which each agent's desired use equals her allocation;
    /// `+inf` when the allocation is at or below `c_lo`, `-inf` when at or
    /// above `c_hi`.
    pub indifference: Vec<f64>,
}

impl PriceBand {
    /// Whether an agent is strictly on each side of the market at `p`.
    pub fn trades_at(&self, p: f64) -> bool {
        p > self.p_lo && p < self.p_hi
    }
}

/// Indifference prices and the resulting trading band for allocation `w`.
pub fn trading_band(scenario: &MarketScenario, w: &Allocation) -> Result<PriceBand> {
    check_len(scenario, w)?;
    let indifference = scenario
        .agents
        .iter()
        .zip(w.as_slice())
        .map(|(ag, &wj)| {
            if wj <= ag.c_lo() {
                Ok(f64::INFINITY)
            } else if wj >= ag.c_hi() {
                Ok(f64::NEG_INFINITY)
            } else {
                inverse_demand(ag, wj)
            }
        })
        .collect::<Result<Vec<f64>>>()?;
    let p_lo = indifference.iter().copied().fold(f64::INFINITY, f64::min);
    let p_hi = indifference
        .iter()
        .copied()
        .fold(f64::NEG_INFINITY, f64::max);
    Ok(PriceBand {
        p_lo,
        p_hi,
        indifference,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Role {
    Buyer,
    Seller,
    Neutral,
}

/// A Nash equilibrium of the one-period game at a fixed announced price.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct NashAtPrice {
    pub price: f64,
    /// Unconstrained desired use at `price`.
    pub desired: Vec<f64>,
    pub roles: Vec<Role>,
    pub trades: Vec<f64>,
    pub consumption: Vec<f64>,
    pub payoffs: Vec<f64>,
    /// `c_lo_j <= w_j` for every agent.
    pub hypothesis_holds: bool,
    pub warnings: Vec<String>,
}

impl NashAtPrice {
    pub fn is_no_trade(&self) -> bool {
        self.trades.iter().all(|&t| t == 0.0)
    }
}

/// Constructs a Nash equilibrium at announced price `p`.
///
/// If everyone wants to buy, or everyone wants to sell, nobody trades.
/// Otherwise the tradable volume is the smaller of total surplus and total
/// deficit, shared pro rata by desired volume on each side.
pub fn ne_at_price(scenario: &MarketScenario, w: &Allocation, p: f64) -> Result<NashAtPrice> {
    check_len(scenario, w)?;
    let floor = scenario.price_floor();
    if p.is_nan() || p <= floor {
        return Err(Error::Domain {
            value: p,
            lower_bound: floor,
        });
    }
    let agents = &scenario.agents;
    let wv = w.as_slice();
    let desired: Vec<f64> = agents.iter().map(|ag| demand(ag, p)).collect();
    let roles: Vec<Role> = desired
        .iter()
        .zip(wv)
        .map(|(&c, &wj)| {
            if c < wj {
                Role::Seller
            } else if c > wj {
                Role::Buyer
            } else {
                Role::Neutral
            }
        })
        .collect();

    let mut warnings = Vec::new();
    let mut hypothesis_holds = true;
    for (j, ag) in agents.iter().enumerate() {
        if ag.c_lo() > wv[j] {
            hypothesis_holds = false;
            warnings.push(format!(
                "{}: allocation {} below minimal need {}",
                ag.name,
                wv[j],
                ag.c_lo()
            ));
        }
    }

    let surplus: f64 = (0..wv.len())
        .filter(|&j| roles[j] == Role::Seller)
        .map(|j| wv[j] - desired[j])
        .sum();
    let deficit: f64 = (0..wv.len())
        .filter(|&j| roles[j] == Role::Buyer)
        .map(|j| desired[j] - wv[j])
        .sum();

    let mut trades = vec![0.0; wv.len()];
    if surplus > 0.0 && deficit > 0.0 {
        let volume = surplus.min(deficit);
        for j in 0..wv.len() {
            trades[j] = match roles[j] {
                Role::Seller => volume * (wv[j] - desired[j]) / surplus,
                Role::Buyer => -volume * (desired[j] - wv[j]) / deficit,
                Role::Neutral => 0.0,
            };
        }
        if let Some(last) = (0..wv.len()).rev().find(|&j| roles[j] != Role::Neutral) {
            let before: f64 = trades[..last].iter().sum();
            trades[last] = -before;
        }
    }

    let consumption: Vec<f64> = agents
        .iter()
        .enumerate()
        .map(|(j, ag)| (wv[j] - trades[j]).min(ag.c_hi()))
        .collect();
    for (j, ag) in agents.iter().enumerate() {
        if consumption[j] < ag.c_lo() {
            warnings.push(format!("{}: lower production bounds not met", ag.name));
        }
    }
    let payoffs = agents
        .iter()
        .enumerate()
        .map(|(j, ag)| clamped_profit(ag, consumption[j]) + trades[j] * p)
        .collect();
    Ok(NashAtPrice {
        price: p,
        desired,
        roles,
        trades,
        consumption,
        payoffs,
        hypothesis_holds,
        warnings,
    })
}

/// One row of the demand-curve table.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CurveRow {
    pub price: f64,
    pub consumption: Vec<f64>,
    pub aggregate: f64,
    pub phi: Vec<Vec<f64>>,
}

/// Demand curves on `steps` equally spaced prices in `[pmin, pmax]`.
pub fn demand_curves(
    scenario: &MarketScenario,
    pmin: f64,
    pmax: f64,
    steps: usize,
) -> Result<Vec<CurveRow>> {
    if !(pmin < pmax) || steps < 2 {
        return Err(Error::Validation(
            "curves need pmin < pmax and at least 2 steps".into(),
        ));
    }
    let floor = scenario.price_floor();
    if pmin <= floor {
        return Err(Error::Domain {
            value: pmin,
            lower_bound: floor,
        });
    }
    let step = (pmax - pmin) / (steps - 1) as f64;
    Ok((0..steps)
        .into_par_iter()
        .map(|i| {
            let price = if i == steps - 1 {
                pmax
            } else {
                pmin + step * i as f64
            };
            let phi: Vec<Vec<f64>> = scenario
                .agents
                .iter()
                .map(|ag| ag.goods.iter().map(|g| quantity(g, price)).collect())
                .collect();
            let consumption: Vec<f64> = scenario
                .agents
                .iter()
                .zip(&phi)
                .map(|(ag, q)| ag.goods.iter().zip(q).map(|(g, x)| g.a * x).sum())
                .collect();
            CurveRow {
                price,
                aggregate: consumption.iter().sum(),
                consumption,
                phi,
            }
        })
        .collect())
}

/// Writes curve rows as CSV with header `p,C_1..C_J,aggregate,phi_j_k...`.
pub fn write_curves_csv<W: Write>(
    scenario: &MarketScenario,
    rows: &[CurveRow],
    mut out: W,
) -> std::io::Result<()> {
    let mut header = vec!["p".to_string()];
    header.extend((1..=scenario.num_agents()).map(|j| format!("C_{j}")));
    header.push("aggregate".into());
    for (j, ag) in scenario.agents.iter().enumerate() {
        header.extend((1..=ag.goods.len()).map(|k| format!("phi_{}_{k}", j + 1)));
    }
    writeln!(out, "{}", header.join(","))?;
    for row in rows {
        let mut cells = vec![format!("{:.6}", row.price)];
        cells.extend(row.consumption.iter().map(|c| format!("{c:.6}")));
        cells.push(format!("{:.6}", row.aggregate));
        cells.extend(row.phi.iter().flatten().map(|x| format!("{x:.6}")));
        writeln!(out, "{}", cells.join(","))?;
    }
    Ok(())
}
