//! Three agents: best responses taken in turn until the banking profile
//! settles, compared with simultaneous damped iteration.

use groundwater_market::fixtures::table1;
use groundwater_market::{
    banking_fixed_point, cycle_best_response, AgentSpec, BankingConfig, MarketScenario,
};

fn main() -> groundwater_market::Result<()> {
    let base = table1();
    let clone = |name: &str, theta: f64| AgentSpec {
        name: name.into(),
        theta,
        ..base.agents[1].clone()
    };
    let scenario = MarketScenario::new(
        vec![
            AgentSpec {
                theta: 0.5,
                ..base.agents[0].clone()
            },
            clone("farmer2a", 0.25),
            clone("farmer2b", 0.25),
        ],
        base.recharge.clone(),
        base.initial_water_table,
        2,
    )?;
    let cfg = BankingConfig::default();

    let cycled = cycle_best_response(&scenario, 50, &cfg)?;
    println!(
        "cycling:  b = {:?} after {} sweeps",
        cycled.banked, cycled.iterations
    );
    let damped = banking_fixed_point(&scenario, &cfg)?;
    println!(
        "damped:   b = {:?} after {} iterations",
        damped.banked, damped.iterations
    );
    println!("period-0 price {:.4}", cycled.period0.price);
    Ok(())
}
