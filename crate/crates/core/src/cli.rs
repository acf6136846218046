//! The `gwm` command-line front end.
//!
//! Every command loads a scenario, runs one solver and prints a [`RunReport`]
//! (JSON by default) or a CSV/text rendering of it. Exit codes: 0 success,
//! 2 infeasible input, 3 non-convergence, 64 usage or scenario errors.

use std::collections::BTreeMap;
use std::ffi::OsString;
use std::fs::{self, File};
use std::io::{BufWriter, Write};
use std::path::{Path, PathBuf};
use std::str::FromStr;
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;
use serde_json::{json, Value};

use crate::banking::{
    autarky_banking, banking_fixed_point, compare_banking, BankingConfig, ExpectationWeights,
};
use crate::error::Error;
use crate::market::{
    aggregate_consumption, demand_curves, pareto_price, solve_one_period, trading_band,
    write_curves_csv,
};
use crate::model::{load_scenario, validate_feasibility, Allocation, MarketScenario};
use crate::production::max_profit_g;
use crate::sim::{mean_prices, simulate, write_trajectory_csv, Policy};

pub const EXIT_OK: i32 = 0;
pub const EXIT_INFEASIBLE: i32 = 2;
pub const EXIT_NOT_CONVERGED: i32 = 3;
pub const EXIT_USAGE: i32 = 64;

/// Price bisection runs until the bracket stops shrinking; this bounds the
/// resulting error for prices of order one.
const PRICE_TOL: f64 = 1e-12;

#[derive(Debug, Parser)]
#[command(name = "gwm", version, about = "Groundwater market and banking solver")]
pub struct Cli {
    /// Scenario JSON file (may also be given positionally after the command).
    #[arg(long, global = true)]
    scenario: Option<PathBuf>,
    /// JSON report (the default)
    #[arg(long, global = true, conflicts_with_all = ["csv", "text"])]
    json: bool,
    /// CSV table
    #[arg(long, global = true, conflicts_with = "text")]
    csv: bool,
    /// Plain-text summary
    #[arg(long, global = true)]
    text: bool,
    /// Fixed-point tolerance for iterative solvers; best responses are refined to a tenth of it.
    #[arg(long, global = true)]
    tol: Option<f64>,
    /// Include wall-clock time in reports (makes output non-reproducible).
    #[arg(long, global = true)]
    timing: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Args)]
struct ScenarioArg {
    /// Scenario JSON file.
    #[arg(value_name = "SCENARIO")]
    path: Option<PathBuf>,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// One-period market clearing.
    Solve1p {
        #[command(flatten)]
        scenario: ScenarioArg,
        /// Per-agent allocations, comma separated.
        #[arg(
            long,
            value_delimiter = ',',
            conflicts_with = "total_water",
            required_unless_present = "total_water"
        )]
        allocations: Option<Vec<f64>>,
        /// Total water only; trades are not reported.
        #[arg(long, allow_negative_numbers = true)]
        total_water: Option<f64>,
    },
    /// Demand curves on a price grid.
    Curves {
        #[command(flatten)]
        scenario: ScenarioArg,
        #[arg(long, default_value_t = 0.1, allow_negative_numbers = true)]
        pmin: f64,
        #[arg(long, default_value_t = 2.5, allow_negative_numbers = true)]
        pmax: f64,
        #[arg(long, default_value_t = 200)]
        steps: usize,
        /// CSV destination; stdout when omitted.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Two-period banking equilibrium and payoff table.
    Banking {
        #[command(flatten)]
        scenario: ScenarioArg,
        /// Weights for the expectation columns of the table.
        #[arg(long, value_enum, default_value_t = TableWeights::StateMean)]
        table_weights: TableWeights,
    },
    /// Banking without trade.
    Autarky {
        #[command(flatten)]
        scenario: ScenarioArg,
    },
    /// Monte Carlo rollouts.
    Simulate {
        #[command(flatten)]
        scenario: ScenarioArg,
        #[arg(long, default_value_t = 2)]
        periods: usize,
        #[arg(long, default_value_t = 1)]
        paths: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// `myopic`, `equilibrium` or `fixed:b1,b2,...`.
        #[arg(long, default_value = "myopic")]
        policy: PolicyArg,
        /// Directory for one trajectory CSV per path.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Scenario checks and feasibility report.
    Validate {
        #[command(flatten)]
        scenario: ScenarioArg,
    },
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum TableWeights {
    Probability,
    StateMean,
}

impl From<TableWeights> for ExpectationWeights {
    fn from(t: TableWeights) -> Self {
        match t {
            TableWeights::Probability => ExpectationWeights::Probability,
            TableWeights::StateMean => ExpectationWeights::StateMean,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
enum PolicyArg {
    Myopic,
    Equilibrium,
    Fixed(Vec<f64>),
}

impl FromStr for PolicyArg {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "myopic" => Ok(PolicyArg::Myopic),
            "equilibrium" => Ok(PolicyArg::Equilibrium),
            _ => {
                let rest = s
                    .strip_prefix("fixed:")
                    .ok_or_else(|| format!("unknown policy {s:?}"))?;
                rest.split(',')
                    .map(|x| {
                        x.trim()
                            .parse::<f64>()
                            .map_err(|e| format!("bad amount {x:?}: {e}"))
                    })
                    .collect::<Result<Vec<_>, _>>()
                    .map(PolicyArg::Fixed)
            }
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
enum Format {
    Json,
    Csv,
    Text,
}

/// Envelope printed by every command.
#[derive(Debug, Clone, Serialize)]
pub struct RunReport {
    pub command: String,
    pub scenario_digest: String,
    pub tolerances: BTreeMap<String, f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub wall_time_ms: Option<f64>,
    pub warnings: Vec<String>,
    pub result: Value,
}

/// Rounds every float in a JSON tree to six decimals.
pub fn round_floats(v: &mut Value) {
    match v {
        Value::Number(n) if n.is_f64() => {
            let x = n.as_f64().unwrap();
            let r = (x * 1e6).round() / 1e6;
            *v = json!(if r == 0.0 { 0.0 } else { r });
        }
        Value::Array(xs) => xs.iter_mut().for_each(round_floats),
        Value::Object(m) => m.values_mut().for_each(round_floats),
        _ => {}
    }
}

#[derive(Debug)]
enum Failure {
    Usage(String),
    Solver(Error),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Solver(e)
    }
}

impl From<std::io::Error> for Failure {
    fn from(e: std::io::Error) -> Self {
        Failure::Solver(Error::Io(e))
    }
}

/// Maps a solver error onto the exit-code contract.
pub fn exit_code(e: &Error) -> i32 {
    match e {
        Error::NotConverged { .. } => EXIT_NOT_CONVERGED,
        Error::InState { source, .. } => exit_code(source),
        Error::Parse { .. } | Error::Validation(_) | Error::Io(_) => EXIT_USAGE,
        _ => EXIT_INFEASIBLE,
    }
}

/// Parses `args` (including the program name) and runs the command.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let text = e.render().to_string();
            if code == EXIT_OK {
                let _ = write!(out, "{text}");
            } else {
                let _ = write!(err, "{text}");
            }
            return code;
        }
    };
    match execute(&cli, out) {
        Ok(()) => EXIT_OK,
        Err(Failure::Usage(msg)) => {
            let _ = writeln!(err, "error: {msg}");
            EXIT_USAGE
        }
        Err(Failure::Solver(Error::Io(e))) if e.kind() == std::io::ErrorKind::BrokenPipe => EXIT_OK,
        Err(Failure::Solver(e)) => {
            let _ = writeln!(err, "error: {e}");
            exit_code(&e)
        }
    }
}

fn scenario_path<'a>(cli: &'a Cli, arg: &'a ScenarioArg) -> Result<&'a Path, Failure> {
    match (&cli.scenario, &arg.path) {
        (Some(_), Some(_)) => Err(Failure::Usage(
            "scenario given both positionally and with --scenario".into(),
        )),
        (Some(p), None) | (None, Some(p)) => Ok(p),
        (None, None) => Err(Failure::Usage("no scenario file given".into())),
    }
}

fn format_of(cli: &Cli, default: Format) -> Format {
    if cli.json {
        Format::Json
    } else if cli.csv {
        Format::Csv
    } else if cli.text {
        Format::Text
    } else {
        default
    }
}

fn banking_config(cli: &Cli) -> Result<BankingConfig, Failure> {
    let mut cfg = BankingConfig::default();
    if let Some(tol) = cli.tol {
        if !(tol > 0.0) {
            return Err(Failure::Usage(format!("--tol must be positive, got {tol}")));
        }
        cfg.tol = tol;
        cfg.refine_tol = tol / 10.0;
    }
    Ok(cfg)
}

fn banking_tolerances(cfg: &BankingConfig) -> BTreeMap<String, f64> {
    BTreeMap::from([
        ("price".into(), PRICE_TOL),
        ("fixed_point".into(), cfg.tol),
        ("best_response".into(), cfg.refine_tol),
    ])
}

struct Output {
    report: RunReport,
    csv: Option<String>,
    text: Option<String>,
}

fn emit(out: &mut dyn Write, format: Format, mut o: Output) -> Result<(), Failure> {
    round_floats(&mut o.report.result);
    match format {
        Format::Json => {
            serde_json::to_writer_pretty(&mut *out, &o.report).map_err(std::io::Error::from)?;
            writeln!(out)?;
        }
        Format::Csv => match o.csv {
            Some(csv) => write!(out, "{csv}")?,
            None => return Err(Failure::Usage("this command has no CSV output".into())),
        },
        Format::Text => {
            writeln!(out, "command: {}", o.report.command)?;
            writeln!(out, "scenario: {}", o.report.scenario_digest)?;
            for (k, v) in &o.report.tolerances {
                writeln!(out, "tolerance {k}: {v:e}")?;
            }
            if let Some(ms) = o.report.wall_time_ms {
                writeln!(out, "wall time: {ms:.3} ms")?;
            }
            for w in &o.report.warnings {
                writeln!(out, "warning: {w}")?;
            }
            match o.text {
                Some(t) => write!(out, "{t}")?,
                None => {
                    serde_json::to_writer_pretty(&mut *out, &o.report.result)
                        .map_err(std::io::Error::from)?;
                    writeln!(out)?;
                }
            }
        }
    }
    Ok(())
}

fn vec6(xs: &[f64]) -> String {
    xs.iter()
        .map(|x| format!("{x:.6}"))
        .collect::<Vec<_>>()
        .join(", ")
}

fn execute(cli: &Cli, out: &mut dyn Write) -> Result<(), Failure> {
    let started = Instant::now();
    let (arg, name) = match &cli.command {
        Command::Solve1p { scenario, .. } => (scenario, "solve1p"),
        Command::Curves { scenario, .. } => (scenario, "curves"),
        Command::Banking { scenario, .. } => (scenario, "banking"),
        Command::Autarky { scenario } => (scenario, "autarky"),
        Command::Simulate { scenario, .. } => (scenario, "simulate"),
        Command::Validate { scenario } => (scenario, "validate"),
    };
    let scenario = load_scenario(scenario_path(cli, arg)?)?;
    let mut report = RunReport {
        command: name.into(),
        scenario_digest: scenario.digest(),
        tolerances: BTreeMap::new(),
        wall_time_ms: None,
        warnings: Vec::new(),
        result: Value::Null,
    };
    let (csv, text, default) = match &cli.command {
        Command::Solve1p {
            allocations,
            total_water,
            ..
        } => {
            report.tolerances.insert("price".into(), PRICE_TOL);
            let (result, csv, text) = solve1p(
                &scenario,
                allocations.as_deref(),
                *total_water,
                &mut report.warnings,
            )?;
            report.result = result;
            (Some(csv), Some(text), Format::Json)
        }
        Command::Curves {
            pmin,
            pmax,
            steps,
            out: dest,
            ..
        } => {
            let rows = demand_curves(&scenario, *pmin, *pmax, *steps)?;
            let Some(dest) = dest else {
                write_curves_csv(&scenario, &rows, &mut *out)?;
                return Ok(());
            };
            let mut file = BufWriter::new(File::create(dest)?);
            write_curves_csv(&scenario, &rows, &mut file)?;
            file.flush()?;
            report.result = json!({
                "rows": rows.len(),
                "pmin": pmin,
                "pmax": pmax,
                "out": dest.display().to_string(),
            });
            (
                None,
                Some(format!("wrote {} rows to {}\n", rows.len(), dest.display())),
                Format::Json,
            )
        }
        Command::Banking { table_weights, .. } => {
            let cfg = banking_config(cli)?;
            report.tolerances = banking_tolerances(&cfg);
            let cmp = compare_banking(&scenario, &cfg, (*table_weights).into())?;
            report
                .warnings
                .extend(cmp.equilibrium.warnings.iter().cloned());
            let eq = &cmp.equilibrium;
            let mut text = format!(
                "fixed point b* = ({})\nperiod-0 price {:.6}, consumption ({}), traded {:.6}\niterations {}\n",
                vec6(&eq.banked),
                eq.period0.price,
                vec6(&eq.period0.consumption),
                eq.period0.trade_volume(),
                eq.iterations
            );
            if let Some(cr) = &eq.crossings {
                text.push_str(&format!("best-response crossings: {}\n", cr.len()));
            }
            text.push_str(&cmp.to_text());
            report.result = serde_json::to_value(&cmp).map_err(std::io::Error::from)?;
            (Some(cmp.to_csv()), Some(text), Format::Json)
        }
        Command::Autarky { .. } => {
            let cfg = banking_config(cli)?;
            report
                .tolerances
                .insert("best_response".into(), cfg.refine_tol);
            let beta = (0..scenario.num_agents())
                .map(|j| autarky_banking(&scenario, j, &cfg))
                .collect::<Result<Vec<_>, _>>()?;
            let mut csv = String::from("agent,beta\n");
            for (ag, b) in scenario.agents.iter().zip(&beta) {
                csv.push_str(&format!("{},{b:.6}\n", ag.name));
            }
            let text = format!("autarky banking beta = ({})\n", vec6(&beta));
            report.result = json!({ "beta": beta });
            (Some(csv), Some(text), Format::Json)
        }
        Command::Simulate {
            periods,
            paths,
            seed,
            policy,
            out: dest,
            ..
        } => {
            if *periods == 0 || *paths == 0 {
                return Err(Failure::Usage(
                    "--periods and --paths must be positive".into(),
                ));
            }
            report.tolerances.insert("price".into(), PRICE_TOL);
            let policy = match policy {
                PolicyArg::Myopic => Policy::Myopic,
                PolicyArg::Fixed(b) => {
                    if b.len() != scenario.num_agents() {
                        return Err(Failure::Usage(format!(
                            "fixed policy has {} amounts for {} agents",
                            b.len(),
                            scenario.num_agents()
                        )));
                    }
                    Policy::Fixed(b.clone())
                }
                PolicyArg::Equilibrium => {
                    let cfg = banking_config(cli)?;
                    report.tolerances.extend(banking_tolerances(&cfg));
                    Policy::Fixed(banking_fixed_point(&scenario, &cfg)?.banked)
                }
            };
            let trajectories = simulate(&scenario, &policy, *periods, *paths, *seed);
            if let Some(dir) = dest {
                fs::create_dir_all(dir)?;
                for (i, tr) in trajectories.iter().enumerate() {
                    let mut f = BufWriter::new(File::create(dir.join(format!("path_{i:05}.csv")))?);
                    write_trajectory_csv(&scenario, tr, &mut f)?;
                    f.flush()?;
                }
            }
            let means = mean_prices(&trajectories, *periods);
            let terminated = trajectories
                .iter()
                .filter(|t| t.terminated.is_some())
                .count();
            let depleted = trajectories.iter().filter(|t| t.depleted).count();
            if terminated > 0 {
                report
                    .warnings
                    .push(format!("{terminated} of {paths} paths stopped early"));
            }
            let mut csv = String::from("t,mean_price,paths\n");
            let mut text = String::new();
            for (t, m) in means.iter().enumerate() {
                let n = trajectories
                    .iter()
                    .filter(|tr| tr.periods.len() > t)
                    .count();
                let m = m.map(|x| format!("{x:.6}")).unwrap_or_default();
                csv.push_str(&format!("{t},{m},{n}\n"));
                text.push_str(&format!("t={t}: mean price {m} over {n} paths\n"));
            }
            let banked = match &policy {
                Policy::Fixed(b) => b.clone(),
                Policy::Myopic => vec![0.0; scenario.num_agents()],
            };
            report.result = json!({
                "periods": periods,
                "paths": paths,
                "seed": seed,
                "banked": banked,
                "mean_price": means,
                "terminated": terminated,
                "depleted": depleted,
                "out": dest.as_ref().map(|d| d.display().to_string()),
            });
            (Some(csv), Some(text), Format::Json)
        }
        Command::Validate { .. } => {
            let rep = validate_feasibility(&scenario);
            report.warnings.extend(rep.warnings.iter().cloned());
            let mut csv = String::from("state,water,weak");
            for j in 1..=scenario.num_agents() {
                csv.push_str(&format!(",strong_{j}"));
            }
            csv.push('\n');
            let mut text = format!(
                "{} agents, {} recharge states, horizon {}\n",
                scenario.num_agents(),
                scenario.recharge.len(),
                scenario.horizon
            );
            for st in std::iter::once(&rep.initial).chain(&rep.states) {
                csv.push_str(&format!("{},{:.6},{}", st.label, st.water, st.weak));
                for s in &st.strong {
                    csv.push_str(&format!(",{s}"));
                }
                csv.push('\n');
                text.push_str(&format!(
                    "{}: water {:.6}, weak {}, strong {}\n",
                    st.label,
                    st.water,
                    st.weak,
                    st.strong_holds()
                ));
            }
            report.result = serde_json::to_value(&rep).map_err(std::io::Error::from)?;
            (Some(csv), Some(text), Format::Json)
        }
    };
    if cli.timing {
        report.wall_time_ms = Some(started.elapsed().as_secs_f64() * 1e3);
    }
    emit(out, format_of(cli, default), Output { report, csv, text })
}

fn solve1p(
    scenario: &MarketScenario,
    allocations: Option<&[f64]>,
    total_water: Option<f64>,
    warnings: &mut Vec<String>,
) -> Result<(Value, String, String), Failure> {
    let names: Vec<&str> = scenario.agents.iter().map(|a| a.name.as_str()).collect();
    let out = if let Some(w) = allocations {
        if w.len() != scenario.num_agents() {
            return Err(Failure::Usage(format!(
                "{} allocations for {} agents",
                w.len(),
                scenario.num_agents()
            )));
        }
        let w = Allocation::new(w.to_vec())?;
        let eq = solve_one_period(scenario, &w)?;
        let band = trading_band(scenario, &w)?;
        let mut csv = String::from("agent,W,C,psi,V\n");
        for j in 0..names.len() {
            csv.push_str(&format!(
                "{},{:.6},{:.6},{:.6},{:.6}\n",
                names[j],
                w.as_slice()[j],
                eq.consumption[j],
                eq.trades[j],
                eq.payoffs[j]
            ));
        }
        let text = format!(
            "price {:.6}\nconsumption ({})\ntrades ({})\npayoffs ({})\ntrading band [{:.6}, {:.6}]\n",
            eq.price,
            vec6(&eq.consumption),
            vec6(&eq.trades),
            vec6(&eq.payoffs),
            band.p_lo,
            band.p_hi
        );
        let phi: Vec<&Vec<f64>> = eq.plans.iter().map(|p| &p.phi).collect();
        let value = json!({
            "allocations": w.as_slice(),
            "price": eq.price,
            "consumption": eq.consumption,
            "trades": eq.trades,
            "phi": phi,
            "payoffs": eq.payoffs,
            "band": band,
        });
        (eq.price, value, csv, text)
    } else {
        let total = total_water.expect("clap enforces one allocation flag");
        let price = pareto_price(scenario, total)?;
        let aggregate = aggregate_consumption(scenario, price)?;
        // Individual use at the clearing price; the last agent takes the
        // rounding residual so the split adds up to `total`.
        let mut consumption: Vec<f64> = Vec::with_capacity(names.len());
        let mut plans = Vec::with_capacity(names.len());
        for (j, ag) in scenario.agents.iter().enumerate() {
            let c = if j + 1 == names.len() {
                total - consumption.iter().sum::<f64>()
            } else {
                crate::production::agent_consumption(ag, price)?
            };
            let c = c.clamp(ag.c_lo(), ag.c_hi());
            plans.push(max_profit_g(ag, c)?);
            consumption.push(c);
        }
        let mut csv = String::from("agent,C,G\n");
        for j in 0..names.len() {
            csv.push_str(&format!(
                "{},{:.6},{:.6}\n",
                names[j], consumption[j], plans[j].value
            ));
        }
        let profits: Vec<f64> = plans.iter().map(|g| g.value).collect();
        let text = format!(
            "price {price:.6}\nconsumption ({})\nproduction profit ({})\n",
            vec6(&consumption),
            vec6(&profits)
        );
        let phi: Vec<&Vec<f64>> = plans.iter().map(|g| &g.plan.phi).collect();
        let value = json!({
            "total_water": total,
            "price": price,
            "aggregate_demand": aggregate,
            "consumption": consumption,
            "phi": phi,
            "production_profit": profits,
        });
        (price, value, csv, text)
    };
    let (price, value, csv, text) = out;
    if price < 0.0 {
        warnings.push(format!("clearing price {price} is negative"));
    }
    Ok((value, csv, text))
}

/// Entry point used by the `gwm` binary.
pub fn main_with_args<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let stdout = std::io::stdout();
    let stderr = std::io::stderr();
    let mut out = stdout.lock();
    let mut err = stderr.lock();
    let code = run(args, &mut out, &mut err);
    let _ = out.flush();
    code
}

#[cfg(test)]
mod tests {
    use super::*;

    fn table1_path() -> String {
        concat!(env!("CARGO_MANIFEST_DIR"), "/scenarios/table1.json").to_string()
    }

    fn call(args: &[&str]) -> (i32, String, String) {
        let mut out = Vec::new();
        let mut err = Vec::new();
        let mut full = vec!["gwm"];
        full.extend_from_slice(args);
        let code = run(full, &mut out, &mut err);
        (
            code,
            String::from_utf8(out).unwrap(),
            String::from_utf8(err).unwrap(),
        )
    }

    #[test]
    fn policy_parsing() {
        assert_eq!("myopic".parse(), Ok(PolicyArg::Myopic));
        assert_eq!("fixed:1,2.5".parse(), Ok(PolicyArg::Fixed(vec![1.0, 2.5])));
        assert!("fixed:a".parse::<PolicyArg>().is_err());
        assert!("greedy".parse::<PolicyArg>().is_err());
    }

    #[test]
    fn rounding() {
        let mut v = json!({"a": [1.23456789, 2], "b": {"c": -0.0000001}});
        round_floats(&mut v);
        assert_eq!(v, json!({"a": [1.234568, 2], "b": {"c": 0.0}}));
    }

    #[test]
    fn solve1p_both_flags_is_usage() {
        let p = table1_path();
        let (code, _, _) = call(&[
            "solve1p",
            &p,
            "--allocations",
            "50,40",
            "--total-water",
            "90",
        ]);
        assert_eq!(code, EXIT_USAGE);
        let (code, _, _) = call(&["solve1p", &p]);
        assert_eq!(code, EXIT_USAGE);
    }

    #[test]
    fn scenario_twice_is_usage() {
        let p = table1_path();
        let (code, _, err) = call(&["--scenario", &p, "validate", &p]);
        assert_eq!(code, EXIT_USAGE);
        assert!(err.contains("both"));
    }

    #[test]
    fn exit_codes() {
        assert_eq!(
            exit_code(&Error::NotConverged {
                iterations: 1,
                trace: vec![]
            }),
            EXIT_NOT_CONVERGED
        );
        assert_eq!(exit_code(&Error::Validation("x".into())), EXIT_USAGE);
        assert_eq!(
            exit_code(
                &Error::Domain {
                    value: 0.0,
                    lower_bound: 1.0
                }
                .in_state("t")
            ),
            EXIT_INFEASIBLE
        );
    }

    #[test]
    fn help_exits_zero() {
        let (code, out, _) = call(&["--help"]);
        assert_eq!(code, EXIT_OK);
        assert!(out.contains("solve1p"));
    }
}
