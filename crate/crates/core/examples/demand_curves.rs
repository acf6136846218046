//! Tabulates demand curves and production quantities over a price grid and
//! writes them as CSV.
//!
//! ```text
//! cargo run --example demand_curves -- curves.csv
//! ```

use std::fs::File;
use std::io::BufWriter;

use groundwater_market::fixtures::table1;
use groundwater_market::market::{demand_curves, write_curves_csv};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let scenario = table1();
    let rows = demand_curves(&scenario, 0.1, 2.5, 25)?;
    match std::env::args().nth(1) {
        Some(path) => {
            write_curves_csv(&scenario, &rows, BufWriter::new(File::create(&path)?))?;
            println!("wrote {} rows to {path}", rows.len());
        }
        None => write_curves_csv(&scenario, &rows, std::io::stdout().lock())?,
    }
    Ok(())
}
