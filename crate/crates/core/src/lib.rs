//! Groundwater trading: production decisions, market-clearing water prices
//! and Nash-equilibrium water banking.
//!
//! The crate is organised bottom-up:
//!
//! - [`model`]: scenario types and the JSON schema,
//! - [`production`]: single-agent optimal production and the indirect profit `G(C)`,
//! - [`market`]: one-period clearing price, trading band and fixed-price equilibria,
//! - [`banking`]: two-period banking game, best responses and fixed points,
//! - [`sim`]: recharge sampling and multi-period rollouts,
//! - [`cli`]: the `gwm` command-line front end.
//!
//! Runnable walkthroughs live in `examples/`; `cargo run --example one_period_market`
//! is a good starting point.

#![allow(clippy::neg_cmp_op_on_partial_ord, clippy::needless_range_loop)]

pub mod banking;
pub mod cli;
pub mod error;
pub mod fixtures;
pub mod market;
pub mod model;
pub mod production;
pub mod scalar;
pub mod sim;

pub use banking::{
    autarky_banking, banking_fixed_point, best_response, compare_banking, cycle_best_response,
    expected_continuation, value_v, BankingConfig, BankingEquilibrium, ExpectationWeights,
};
pub use error::{Error, Result};
pub use market::{
    aggregate_consumption, ne_at_price, pareto_price, solve_one_period, trading_band, NashAtPrice,
    OnePeriodEquilibrium, PriceBand,
};
pub use model::{
    load_scenario, parse_scenario, validate_feasibility, AgentSpec, Allocation, GoodSpec,
    MarketScenario, RechargeModel,
};
pub use production::{agent_consumption, clipped_quantity, max_profit_g, ProductionPlan};
