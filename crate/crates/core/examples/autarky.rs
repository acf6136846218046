//! Banking when trade is not allowed: each farmer splits her own water
//! between the two periods.

use groundwater_market::fixtures::table1;
use groundwater_market::{autarky_banking, banking_fixed_point, BankingConfig};

fn main() -> groundwater_market::Result<()> {
    let scenario = table1();
    let cfg = BankingConfig::default();
    let market = banking_fixed_point(&scenario, &cfg)?;
    for (j, ag) in scenario.agents.iter().enumerate() {
        let beta = autarky_banking(&scenario, j, &cfg)?;
        println!(
            "{:<8} autarky banks {beta:.4}, with a market {:.4}",
            ag.name, market.banked[j]
        );
    }
    Ok(())
}
