//! Single-agent production decisions.
//!
//! For a water price (or Lagrange multiplier) `v` the optimal quantity of a
//! good is the unconstrained power-law optimum `d (v + e)^(1/(alpha-1))`
//! clipped to the production bounds. Summing water use over goods gives the
//! agent's demand curve, which is continuous and non-increasing in `v`.
//! Inverting that curve at a water budget `C` yields the multiplier
//! `lambda(C)` and the indirect profit `G(C)`.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::model::{AgentSpec, GoodSpec};
use crate::scalar::{bisect_decreasing, expand_upper};

/// Quantities, water use and profit of one agent.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ProductionPlan {
    pub phi: Vec<f64>,
    pub consumption: f64,
    pub profit: f64,
}

impl ProductionPlan {
    pub fn from_quantities(agent: &AgentSpec, phi: Vec<f64>) -> Self {
        let consumption = agent.goods.iter().zip(&phi).map(|(g, x)| g.a * x).sum();
        let profit = agent
            .goods
            .iter()
            .zip(&phi)
            .map(|(g, &x)| g.profit(x))
            .sum();
        ProductionPlan {
            phi,
            consumption,
            profit,
        }
    }
}

/// KKT quantity extended to the whole real line: bounded goods sit at `N`
/// once `v + e <= 0`, unbounded goods demand `+inf` there.
pub(crate) fn quantity(good: &GoodSpec, v: f64) -> f64 {
    let shifted = v + good.e();
    let raw = if shifted > 0.0 {
        let d = good.d();
        if d == 0.0 {
            0.0
        } else {
            d * shifted.powf(1.0 / (good.alpha - 1.0))
        }
    } else {
        f64::INFINITY
    };
    raw.max(good.n).min(good.upper)
}

/// Optimal production of one good at price-like multiplier `v`,
/// `n ∨ d (v+e)^(1/(alpha-1)) ∧ N`.
///
/// For `v + e <= 0` the marginal profit stays positive, so a bounded good is
/// produced at `N`; an unbounded good has no finite optimum and is a domain
/// error.
pub fn clipped_quantity(good: &GoodSpec, v: f64) -> Result<f64> {
    if v.is_nan() || (v + good.e() <= 0.0 && !good.is_bounded()) {
        return Err(Error::Domain {
            value: v,
            lower_bound: -good.e(),
        });
    }
    Ok(quantity(good, v))
}

pub(crate) fn demand(agent: &AgentSpec, v: f64) -> f64 {
    agent.goods.iter().map(|g| g.a * quantity(g, v)).sum()
}

/// Water the agent wants at price `v`: `sum_k a^k phi^k(v)`.
pub fn agent_consumption(agent: &AgentSpec, v: f64) -> Result<f64> {
    if v.is_nan() || v <= agent.price_floor() {
        return Err(Error::Domain {
            value: v,
            lower_bound: agent.price_floor(),
        });
    }
    Ok(demand(agent, v))
}

/// Production plan at multiplier `v`.
pub fn plan_at(agent: &AgentSpec, v: f64) -> Result<ProductionPlan> {
    let phi = agent
        .goods
        .iter()
        .map(|g| clipped_quantity(g, v))
        .collect::<Result<Vec<_>>>()?;
    Ok(ProductionPlan::from_quantities(agent, phi))
}

/// Smallest price where the agent's demand is at most `target`.
///
/// `target` must lie strictly inside `(c_lo, c_hi)`.
pub(crate) fn inverse_demand(agent: &AgentSpec, target: f64) -> Result<f64> {
    let lo = if agent.goods.iter().all(GoodSpec::is_bounded) {
        agent.saturation_price()
    } else {
        agent.price_floor()
    };
    let f = |v: f64| demand(agent, v);
    let out_of_domain = || Error::OutOfDomain {
        value: target,
        lo: agent.c_lo(),
        hi: agent.c_hi(),
    };
    if !(f(lo) > target) {
        return Err(out_of_domain());
    }
    let hi = expand_upper(f, target, (lo + 1.0).max(1.0)).ok_or_else(out_of_domain)?;
    Ok(bisect_decreasing(f, target, lo, hi))
}

/// Indirect profit `G(C)` together with its multiplier and optimal plan.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct IndirectProfit {
    pub value: f64,
    /// `dG/dC`; `+inf` at `C = c_lo` and `-inf` at `C = c_hi`, where the
    /// multiplier is not unique.
    pub multiplier: f64,
    pub plan: ProductionPlan,
}

/// Maximum production profit attainable with water budget `budget`.
pub fn max_profit_g(agent: &AgentSpec, budget: f64) -> Result<IndirectProfit> {
    let (lo, hi) = (agent.c_lo(), agent.c_hi());
    if budget.is_nan() || budget < lo || budget > hi {
        return Err(Error::OutOfDomain {
            value: budget,
            lo,
            hi,
        });
    }
    let boundary = |at_upper: bool| {
        let phi = agent
            .goods
            .iter()
            .map(|g| if at_upper { g.upper } else { g.n })
            .collect();
        let plan = ProductionPlan::from_quantities(agent, phi);
        IndirectProfit {
            value: plan.profit,
            multiplier: if at_upper {
                f64::NEG_INFINITY
            } else {
                f64::INFINITY
            },
            plan,
        }
    };
    if budget == lo {
        return Ok(boundary(false));
    }
    if budget == hi {
        return Ok(boundary(true));
    }
    let lambda = inverse_demand(agent, budget)?;
    let phi = agent.goods.iter().map(|g| quantity(g, lambda)).collect();
    let plan = ProductionPlan::from_quantities(agent, phi);
    Ok(IndirectProfit {
        value: plan.profit,
        multiplier: lambda,
        plan,
    })
}

/// `G(C)` with `C` clamped into `[c_lo, c_hi]`.
pub fn clamped_profit(agent: &AgentSpec, budget: f64) -> f64 {
    let c = budget.clamp(agent.c_lo(), agent.c_hi());
    max_profit_g(agent, c)
        .map(|g| g.value)
        .unwrap_or(f64::NEG_INFINITY)
}
