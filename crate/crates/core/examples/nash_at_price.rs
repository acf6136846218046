//! Nash equilibria of the trading game when the price is announced rather
//! than market-clearing.

use groundwater_market::fixtures::table1;
use groundwater_market::{ne_at_price, solve_one_period, Allocation};

fn main() -> groundwater_market::Result<()> {
    let scenario = table1();
    let w = Allocation::new(vec![50.0, 40.0])?;
    let clearing = solve_one_period(&scenario, &w)?.price;

    for p in [0.1, 0.6, clearing, 1.1, 2.0] {
        let ne = ne_at_price(&scenario, &w, p)?;
        println!(
            "p = {p:.4}  roles {:?}  trades {:?}  payoffs {:?}",
            ne.roles,
            round(&ne.trades),
            round(&ne.payoffs)
        );
    }
    Ok(())
}

fn round(xs: &[f64]) -> Vec<f64> {
    xs.iter().map(|x| (x * 1000.0).round() / 1000.0).collect()
}
