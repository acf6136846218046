//! Two-period banking equilibrium and the payoff table with and without
//! banking.
//!
//! ```text
//! cargo run --release --example banking_equilibrium
//! ```

use groundwater_market::banking::compare_banking;
use groundwater_market::fixtures::table1;
use groundwater_market::{BankingConfig, ExpectationWeights};

fn main() -> groundwater_market::Result<()> {
    let scenario = table1();
    let cfg = BankingConfig::default();
    let cmp = compare_banking(&scenario, &cfg, ExpectationWeights::StateMean)?;
    let eq = &cmp.equilibrium;

    println!("banked        {:?}", eq.banked);
    println!("iterations    {}", eq.iterations);
    println!("period-0 p    {:.4}", eq.period0.price);
    println!("period-0 C    {:?}", eq.period0.consumption);
    println!("traded        {:.3}", eq.period0.trade_volume());
    println!("crossings     {:?}", eq.crossings);
    println!();
    print!("{}", cmp.to_text());

    // Probability-weighted totals for comparison with the equal-weight table.
    println!();
    println!("probability-weighted totals {:?}", eq.total_payoffs);
    Ok(())
}
