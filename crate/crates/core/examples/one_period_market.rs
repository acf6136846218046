//! Clears the one-period market for the two-farmer scenario.
//!
//! ```text
//! cargo run --example one_period_market
//! ```

use groundwater_market::fixtures::table1;
use groundwater_market::{pareto_price, solve_one_period, Allocation};

fn main() -> groundwater_market::Result<()> {
    let scenario = table1();
    let w = Allocation::new(vec![50.0, 40.0])?;
    let eq = solve_one_period(&scenario, &w)?;

    println!("allocation      {:?}", w.as_slice());
    println!("clearing price  {:.4}", eq.price);
    for (j, ag) in scenario.agents.iter().enumerate() {
        println!(
            "{:<8} uses {:>7.3}  trades {:>8.3}  phi {:?}  payoff {:.3}",
            ag.name, eq.consumption[j], eq.trades[j], eq.plans[j].phi, eq.payoffs[j]
        );
    }

    // The price only depends on the total.
    for split in [[54.0, 36.0], [10.0, 80.0]] {
        let p = solve_one_period(&scenario, &Allocation::new(split.to_vec())?)?.price;
        println!("split {split:?} -> price {p:.6}");
    }
    println!("total 90 -> price {:.6}", pareto_price(&scenario, 90.0)?);
    Ok(())
}
