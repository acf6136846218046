//! Loads a scenario file, prints its feasibility report and digest.
//!
//! ```text
//! cargo run --example load_and_validate -- crates/core/scenarios/table1.json
//! ```

use groundwater_market::{load_scenario, parse_scenario, validate_feasibility};

fn main() {
    let scenario = match std::env::args().nth(1) {
        Some(path) => load_scenario(&path),
        None => parse_scenario(groundwater_market::fixtures::TABLE1_JSON),
    };
    let scenario = match scenario {
        Ok(s) => s,
        Err(e) => {
            eprintln!("{e}");
            std::process::exit(64);
        }
    };

    println!("digest {}", scenario.digest());
    println!(
        "{} agents, {} recharge states, total water use in [{}, {}]",
        scenario.num_agents(),
        scenario.recharge.len(),
        scenario.total_c_lo(),
        scenario.total_c_hi()
    );
    let report = validate_feasibility(&scenario);
    for st in std::iter::once(&report.initial).chain(&report.states) {
        println!(
            "{:<8} water {:>6.1}  weak {}  strong {:?}",
            st.label, st.water, st.weak, st.strong
        );
    }
    for w in &report.warnings {
        println!("warning: {w}");
    }

    // A broken document points at the offending field.
    let bad = r#"{"agents": [{"name": "x", "theta": 1.0, "goods": [{"alpha": "high"}]}]}"#;
    if let Err(e) = parse_scenario(bad) {
        println!("\nexpected failure: {e}");
    }
}
