//! Reference scenarios bundled with the crate.

use crate::model::{parse_scenario, MarketScenario};

/// Two farmers, two goods, three-state i.i.d. recharge (50, 75, 95) with
/// probabilities (1/9, 4/9, 4/9), shares (0.6, 0.4), initial water 90.
pub const TABLE1_JSON: &str = include_str!("../scenarios/table1.json");

pub fn table1() -> MarketScenario {
    parse_scenario(TABLE1_JSON).expect("bundled scenario is valid")
}
