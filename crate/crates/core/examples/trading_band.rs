//! Indifference prices and the band of prices at which water changes hands.

use groundwater_market::fixtures::table1;
use groundwater_market::{agent_consumption, trading_band, Allocation};

fn main() -> groundwater_market::Result<()> {
    let scenario = table1();
    let w = Allocation::new(vec![50.0, 40.0])?;
    let band = trading_band(&scenario, &w)?;
    for (j, ag) in scenario.agents.iter().enumerate() {
        let p = band.indifference[j];
        println!(
            "{:<8} W = {:>5.1}  indifferent at p = {p:.4} (wants {:.3} there)",
            ag.name,
            w.as_slice()[j],
            agent_consumption(ag, p)?
        );
    }
    println!(
        "trade happens for p in ({:.4}, {:.4})",
        band.p_lo, band.p_hi
    );
    for p in [0.3, 0.975, 1.5] {
        println!("  p = {p:<5} trades: {}", band.trades_at(p));
    }
    Ok(())
}
