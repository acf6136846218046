//! Monte Carlo rollouts over a longer horizon, comparing no banking with
//! a constant banking rule.
//!
//! ```text
//! cargo run --release --example monte_carlo_rollouts -- 20 2000 7
//! ```

use groundwater_market::fixtures::table1;
use groundwater_market::sim::{mean_prices, simulate, write_trajectory_csv, Policy};

fn main() {
    let mut args = std::env::args()
        .skip(1)
        .map(|a| a.parse::<u64>().expect("integer argument"));
    let periods = args.next().unwrap_or(10) as usize;
    let paths = args.next().unwrap_or(1000) as usize;
    let seed = args.next().unwrap_or(7);

    let scenario = table1();
    for (name, policy) in [
        ("myopic", Policy::Myopic),
        ("fixed", Policy::Fixed(vec![3.367, 2.142])),
    ] {
        let runs = simulate(&scenario, &policy, periods, paths, seed);
        let stopped = runs.iter().filter(|r| r.terminated.is_some()).count();
        let means: Vec<String> = mean_prices(&runs, periods)
            .iter()
            .map(|m| m.map_or("-".into(), |p| format!("{p:.3}")))
            .collect();
        println!(
            "{name:<7} mean prices {}  (stopped early: {stopped})",
            means.join(" ")
        );
    }

    println!("\nfirst myopic path:");
    let first = &simulate(&scenario, &Policy::Myopic, periods, 1, seed)[0];
    write_trajectory_csv(&scenario, first, std::io::stdout().lock()).expect("stdout");
}
