//! Two-period water banking game.
//!
//! In period 0 each agent chooses how much of her water to carry over. Both
//! periods clear at the Pareto price, so an agent's payoff from a banking
//! profile `b` is `V_j(0, w - b) + E[V_j(1, theta r + b)]`. Best responses are
//! scalar maximizations over a bounded interval; equilibria are fixed points
//! of the best-response map, found by damped simultaneous iteration or by
//! cycling through agents.

use std::fmt::Write as _;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::market::{clear, OnePeriodEquilibrium};
use crate::model::{Allocation, MarketScenario};
use crate::production::max_profit_g;
use crate::scalar::{maximize, MaximizeOptions};

/// How state payoffs are averaged into an expectation.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum ExpectationWeights {
    /// Recharge probabilities (transition row of the initial state in Markov mode).
    #[default]
    Probability,
    /// Equal weight on every recharge state.
    StateMean,
}

impl ExpectationWeights {
    pub fn resolve(self, scenario: &MarketScenario) -> Vec<f64> {
        let m = scenario.recharge.len();
        match self {
            ExpectationWeights::Probability => scenario
                .recharge
                .next_weights(scenario.recharge.initial_state())
                .to_vec(),
            ExpectationWeights::StateMean => vec![1.0 / m as f64; m],
        }
    }
}

/// Solver settings for best responses and fixed points.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BankingConfig {
    pub grid_points: usize,
    /// Golden-section stopping width for each best response.
    pub refine_tol: f64,
    /// Weight on the new best response in damped iteration.
    pub damping: f64,
    /// Sup-norm change in `b` below which the iteration stops.
    pub tol: f64,
    pub max_iterations: usize,
    /// Points in the two-agent crossing scan; 0 disables it.
    pub uniqueness_scan: usize,
    pub weights: ExpectationWeights,
}

impl Default for BankingConfig {
    fn default() -> Self {
        BankingConfig {
            grid_points: 101,
            refine_tol: 1e-4,
            damping: 0.5,
            tol: 1e-3,
            max_iterations: 200,
            uniqueness_scan: 41,
            weights: ExpectationWeights::Probability,
        }
    }
}

impl BankingConfig {
    fn maximize_options(&self) -> MaximizeOptions {
        MaximizeOptions {
            grid_points: self.grid_points,
            tol: self.refine_tol,
        }
    }
}

/// Equilibrium banking profile with the markets it induces.
#[derive(Debug, Clone, Serialize)]
pub struct BankingEquilibrium {
    pub banked: Vec<f64>,
    pub initial_allocation: Vec<f64>,
    pub period0: OnePeriodEquilibrium,
    /// One market per recharge state, on `theta * r + banked`.
    pub period1: Vec<OnePeriodEquilibrium>,
    pub weights: Vec<f64>,
    /// `V_j(0) + sum_m weight_m V_j(1, m)`.
    pub total_payoffs: Vec<f64>,
    pub converged: bool,
    pub iterations: usize,
    /// Two-agent crossings `(b_1, b_2)` of the best-response curves found by scan.
    pub crossings: Option<Vec<[f64; 2]>>,
    pub warnings: Vec<String>,
}

/// One-period payoffs under Pareto pricing.
pub fn value_v(scenario: &MarketScenario, w: &Allocation) -> Result<Vec<f64>> {
    Ok(crate::market::solve_one_period(scenario, w)?.payoffs)
}

fn state_label(scenario: &MarketScenario, m: usize) -> String {
    let s = &scenario.recharge.states[m];
    match &s.label {
        Some(l) => format!("recharge state {l} (r={})", s.r),
        None => format!("recharge state omega_{} (r={})", m + 1, s.r),
    }
}

fn period1_markets(scenario: &MarketScenario, banked: &[f64]) -> Result<Vec<OnePeriodEquilibrium>> {
    scenario
        .recharge
        .states
        .iter()
        .enumerate()
        .map(|(m, st)| {
            let w: Vec<f64> = scenario
                .share(st.r)
                .iter()
                .zip(banked)
                .map(|(x, b)| x + b)
                .collect();
            clear(scenario, &w).map_err(|e| e.in_state(state_label(scenario, m)))
        })
        .collect()
}

fn check_banked(scenario: &MarketScenario, banked: &[f64]) -> Result<()> {
    if banked.len() != scenario.num_agents() {
        return Err(Error::Validation(format!(
            "banked vector has {} entries for {} agents",
            banked.len(),
            scenario.num_agents()
        )));
    }
    if banked.iter().any(|b| !(b.is_finite() && *b >= 0.0)) {
        return Err(Error::Validation("banked amounts must be >= 0".into()));
    }
    let total: f64 = banked.iter().sum();
    if total > scenario.initial_water_table {
        return Err(Error::Validation(format!(
            "total banked {total} exceeds initial water {}",
            scenario.initial_water_table
        )));
    }
    Ok(())
}

/// Expected period-1 payoffs given banked amounts, using recharge probabilities.
pub fn expected_continuation(scenario: &MarketScenario, banked: &[f64]) -> Result<Vec<f64>> {
    expected_continuation_with(scenario, banked, ExpectationWeights::Probability)
}

/// Expected period-1 payoffs under the chosen weighting.
pub fn expected_continuation_with(
    scenario: &MarketScenario,
    banked: &[f64],
    weights: ExpectationWeights,
) -> Result<Vec<f64>> {
    check_banked(scenario, banked)?;
    let q = weights.resolve(scenario);
    let markets = period1_markets(scenario, banked)?;
    Ok(weighted_payoffs(&markets, &q))
}

fn weighted_payoffs(markets: &[OnePeriodEquilibrium], q: &[f64]) -> Vec<f64> {
    let j_count = markets[0].payoffs.len();
    (0..j_count)
        .map(|j| markets.iter().zip(q).map(|(m, w)| w * m.payoffs[j]).sum())
        .collect()
}

/// Total payoffs `A_j` of a banking profile; errors if any market is infeasible.
pub fn total_payoffs(
    scenario: &MarketScenario,
    w0: &[f64],
    banked: &[f64],
    weights: &[f64],
) -> Result<Vec<f64>> {
    let net: Vec<f64> = w0.iter().zip(banked).map(|(w, b)| w - b).collect();
    let p0 = clear(scenario, &net).map_err(|e| e.in_state("period 0"))?;
    let p1 = period1_markets(scenario, banked)?;
    let cont = weighted_payoffs(&p1, weights);
    Ok(p0.payoffs.iter().zip(cont).map(|(a, b)| a + b).collect())
}

/// `A_j` with infeasible profiles scored as `-inf`.
fn payoff_of(
    scenario: &MarketScenario,
    j: usize,
    w0: &[f64],
    banked: &[f64],
    weights: &[f64],
) -> f64 {
    let net: Vec<f64> = w0.iter().zip(banked).map(|(w, b)| w - b).collect();
    let Ok(p0) = clear(scenario, &net) else {
        return f64::NEG_INFINITY;
    };
    let mut total = p0.payoffs[j];
    for (st, q) in scenario.recharge.states.iter().zip(weights) {
        let w1: Vec<f64> = scenario
            .share(st.r)
            .iter()
            .zip(banked)
            .map(|(x, b)| x + b)
            .collect();
        match clear(scenario, &w1) {
            Ok(m) => total += q * m.payoffs[j],
            Err(_) => return f64::NEG_INFINITY,
        }
    }
    total
}

/// Agent `j`'s optimal banking amount given everyone else's.
///
/// `banked` has one entry per agent; entry `j` is ignored. The search runs
/// over `[0, W(0) - sum_{i != j} b_i]`.
pub fn best_response(
    scenario: &MarketScenario,
    j: usize,
    banked: &[f64],
    w0: &Allocation,
    cfg: &BankingConfig,
) -> Result<f64> {
    let weights = cfg.weights.resolve(scenario);
    best_response_weighted(scenario, j, banked, w0.as_slice(), &weights, cfg)
}

fn best_response_weighted(
    scenario: &MarketScenario,
    j: usize,
    banked: &[f64],
    w0: &[f64],
    weights: &[f64],
    cfg: &BankingConfig,
) -> Result<f64> {
    let others: f64 = banked
        .iter()
        .enumerate()
        .filter(|(i, _)| *i != j)
        .map(|(_, b)| b)
        .sum();
    let hi = w0.iter().sum::<f64>() - others;
    let objective = |x: f64| {
        let mut b = banked.to_vec();
        b[j] = x;
        payoff_of(scenario, j, w0, &b, weights)
    };
    let (x, _) = maximize(objective, 0.0, hi.max(0.0), cfg.maximize_options())?;
    Ok(x)
}

fn require_two_periods(scenario: &MarketScenario) -> Result<()> {
    if scenario.horizon != 2 {
        return Err(Error::Validation(format!(
            "banking equilibrium needs horizon 2, scenario has {}",
            scenario.horizon
        )));
    }
    Ok(())
}

fn assemble(
    scenario: &MarketScenario,
    banked: Vec<f64>,
    weights: Vec<f64>,
    iterations: usize,
) -> Result<BankingEquilibrium> {
    let w0 = scenario.initial_allocation().as_slice().to_vec();
    let net: Vec<f64> = w0.iter().zip(&banked).map(|(w, b)| w - b).collect();
    let period0 = clear(scenario, &net).map_err(|e| e.in_state("period 0"))?;
    let period1 = period1_markets(scenario, &banked)?;
    let cont = weighted_payoffs(&period1, &weights);
    let total_payoffs = period0
        .payoffs
        .iter()
        .zip(&cont)
        .map(|(a, b)| a + b)
        .collect();
    Ok(BankingEquilibrium {
        banked,
        initial_allocation: w0,
        period0,
        period1,
        weights,
        total_payoffs,
        converged: true,
        iterations,
        crossings: None,
        warnings: Vec::new(),
    })
}

fn sup_distance(a: &[f64], b: &[f64]) -> f64 {
    a.iter()
        .zip(b)
        .map(|(x, y)| (x - y).abs())
        .fold(0.0, f64::max)
}

fn last_iterates(trace: &[Vec<f64>]) -> Vec<Vec<f64>> {
    trace[trace.len().saturating_sub(10)..].to_vec()
}

/// Nash equilibrium of the two-period banking game by damped best-response
/// iteration from `b = 0`.
pub fn banking_fixed_point(
    scenario: &MarketScenario,
    cfg: &BankingConfig,
) -> Result<BankingEquilibrium> {
    require_two_periods(scenario)?;
    let w0 = scenario.initial_allocation();
    let weights = cfg.weights.resolve(scenario);
    let j_count = scenario.num_agents();
    let mut b = vec![0.0; j_count];
    let mut trace = vec![b.clone()];
    let mut iterations = 0;
    let mut converged = false;
    while iterations < cfg.max_iterations {
        iterations += 1;
        let responses = (0..j_count)
            .map(|j| best_response_weighted(scenario, j, &b, w0.as_slice(), &weights, cfg))
            .collect::<Result<Vec<_>>>()?;
        let next: Vec<f64> = b
            .iter()
            .zip(&responses)
            .map(|(old, br)| (1.0 - cfg.damping) * old + cfg.damping * br)
            .collect();
        let step = sup_distance(&next, &b);
        b = next;
        trace.push(b.clone());
        if step < cfg.tol {
            converged = true;
            break;
        }
    }
    if !converged {
        return Err(Error::NotConverged {
            iterations,
            trace: last_iterates(&trace),
        });
    }
    let mut eq = assemble(scenario, b, weights.clone(), iterations)?;
    if j_count == 2 && cfg.uniqueness_scan > 1 {
        let crossings = crossing_scan(scenario, w0.as_slice(), &weights, cfg);
        if crossings.len() > 1 {
            eq.warnings.push(format!(
                "best-response curves cross {} times: {:?}",
                crossings.len(),
                crossings
            ));
        }
        eq.crossings = Some(crossings);
    }
    Ok(eq)
}

/// Scans `b_1` for sign changes of `b_1 - B_1(B_2(b_1))` and refines each
/// bracket by bisection.
fn crossing_scan(
    scenario: &MarketScenario,
    w0: &[f64],
    weights: &[f64],
    cfg: &BankingConfig,
) -> Vec<[f64; 2]> {
    let gap = |b1: f64| -> Option<(f64, f64)> {
        let b2 = best_response_weighted(scenario, 1, &[b1, 0.0], w0, weights, cfg).ok()?;
        let back = best_response_weighted(scenario, 0, &[0.0, b2], w0, weights, cfg).ok()?;
        Some((b1 - back, b2))
    };
    let hi = (w0.iter().sum::<f64>() - scenario.total_c_lo()).max(0.0);
    let n = cfg.uniqueness_scan;
    let points: Vec<(f64, Option<(f64, f64)>)> = (0..n)
        .map(|i| {
            let x = hi * i as f64 / (n - 1) as f64;
            (x, gap(x))
        })
        .collect();
    let mut out = Vec::new();
    for pair in points.windows(2) {
        let (x0, Some((g0, b20))) = pair[0] else {
            continue;
        };
        let (x1, Some((g1, _))) = pair[1] else {
            continue;
        };
        if g0 == 0.0 {
            out.push([x0, b20]);
            continue;
        }
        if g0.signum() == g1.signum() || g1 == 0.0 {
            continue;
        }
        let (mut a, mut c, mut ga) = (x0, x1, g0);
        let mut b2 = b20;
        for _ in 0..12 {
            let mid = 0.5 * (a + c);
            let Some((gm, b2m)) = gap(mid) else { break };
            b2 = b2m;
            if gm.signum() == ga.signum() {
                a = mid;
                ga = gm;
            } else {
                c = mid;
            }
        }
        out.push([0.5 * (a + c), b2]);
    }
    if let Some((x, Some((g, b2)))) = points.last().copied() {
        if g == 0.0 {
            out.push([x, b2]);
        }
    }
    out
}

/// Gauss-Seidel best-response cycling: each agent in turn responds to the
/// latest amounts of the others, for at most `max_sweeps` sweeps.
pub fn cycle_best_response(
    scenario: &MarketScenario,
    max_sweeps: usize,
    cfg: &BankingConfig,
) -> Result<BankingEquilibrium> {
    require_two_periods(scenario)?;
    if scenario.num_agents() < 2 {
        return Err(Error::Validation(
            "cycling needs at least two agents".into(),
        ));
    }
    let w0 = scenario.initial_allocation();
    let weights = cfg.weights.resolve(scenario);
    let mut b = vec![0.0; scenario.num_agents()];
    let mut trace = vec![b.clone()];
    for sweep in 1..=max_sweeps {
        let before = b.clone();
        for j in 0..b.len() {
            b[j] = best_response_weighted(scenario, j, &b, w0.as_slice(), &weights, cfg)?;
        }
        trace.push(b.clone());
        if sup_distance(&b, &before) < cfg.tol {
            return assemble(scenario, b, weights, sweep);
        }
    }
    Err(Error::NotConverged {
        iterations: max_sweeps,
        trace: last_iterates(&trace),
    })
}

/// Banking without trade: agent `j` splits her own water across periods.
pub fn autarky_banking(scenario: &MarketScenario, j: usize, cfg: &BankingConfig) -> Result<f64> {
    let agent = &scenario.agents[j];
    let w0 = scenario.initial_allocation()[j];
    let weights = cfg.weights.resolve(scenario);
    let g = |c: f64| {
        max_profit_g(agent, c)
            .map(|x| x.value)
            .unwrap_or(f64::NEG_INFINITY)
    };
    let objective = |beta: f64| {
        let mut total = g(w0 - beta);
        for (st, q) in scenario.recharge.states.iter().zip(&weights) {
            total += q * g(agent.theta * st.r + beta);
        }
        total
    };
    let (beta, _) = maximize(objective, 0.0, w0, cfg.maximize_options())?;
    Ok(beta)
}

/// Payoff and price rows for one banking regime.
#[derive(Debug, Clone, Serialize)]
pub struct RegimeRows {
    pub banked: Vec<f64>,
    pub payoffs_t0: Vec<f64>,
    /// `[state][agent]`.
    pub payoffs_states: Vec<Vec<f64>>,
    pub expected_payoffs: Vec<f64>,
    pub totals: Vec<f64>,
    pub price_t0: f64,
    pub prices_states: Vec<f64>,
    pub expected_price: f64,
}

impl RegimeRows {
    fn build(scenario: &MarketScenario, banked: &[f64], weights: &[f64]) -> Result<Self> {
        let w0 = scenario.initial_allocation();
        let net: Vec<f64> = w0
            .as_slice()
            .iter()
            .zip(banked)
            .map(|(w, b)| w - b)
            .collect();
        let p0 = clear(scenario, &net).map_err(|e| e.in_state("period 0"))?;
        let p1 = period1_markets(scenario, banked)?;
        let expected_payoffs = weighted_payoffs(&p1, weights);
        let totals = p0
            .payoffs
            .iter()
            .zip(&expected_payoffs)
            .map(|(a, b)| a + b)
            .collect();
        Ok(RegimeRows {
            banked: banked.to_vec(),
            payoffs_t0: p0.payoffs.clone(),
            payoffs_states: p1.iter().map(|m| m.payoffs.clone()).collect(),
            expected_payoffs,
            totals,
            price_t0: p0.price,
            prices_states: p1.iter().map(|m| m.price).collect(),
            expected_price: p1.iter().zip(weights).map(|(m, q)| q * m.price).sum(),
        })
    }
}

/// Side-by-side payoffs and prices with and without banking.
#[derive(Debug, Clone, Serialize)]
pub struct BankingComparison {
    pub table_weights: ExpectationWeights,
    pub no_banking: RegimeRows,
    pub with_banking: RegimeRows,
    pub equilibrium: BankingEquilibrium,
}

/// Computes the equilibrium and tabulates both regimes; expectation columns
/// use `table_weights`.
pub fn compare_banking(
    scenario: &MarketScenario,
    cfg: &BankingConfig,
    table_weights: ExpectationWeights,
) -> Result<BankingComparison> {
    let equilibrium = banking_fixed_point(scenario, cfg)?;
    let q = table_weights.resolve(scenario);
    let zero = vec![0.0; scenario.num_agents()];
    Ok(BankingComparison {
        table_weights,
        no_banking: RegimeRows::build(scenario, &zero, &q)?,
        with_banking: RegimeRows::build(scenario, &equilibrium.banked, &q)?,
        equilibrium,
    })
}

impl BankingComparison {
    fn rows(&self) -> Vec<(String, Vec<Option<f64>>)> {
        let mut rows = Vec::new();
        for (tag, regime) in [("nobank", &self.no_banking), ("bank", &self.with_banking)] {
            for j in 0..regime.payoffs_t0.len() {
                let mut cells = vec![Some(regime.payoffs_t0[j])];
                cells.extend(regime.payoffs_states.iter().map(|s| Some(s[j])));
                cells.push(Some(regime.expected_payoffs[j]));
                cells.push(Some(regime.totals[j]));
                rows.push((format!("{tag}_V_{}", j + 1), cells));
            }
            let mut cells = vec![Some(regime.price_t0)];
            cells.extend(regime.prices_states.iter().map(|p| Some(*p)));
            cells.push(Some(regime.expected_price));
            cells.push(None);
            rows.push((format!("{tag}_p"), cells));
        }
        rows
    }

    /// CSV with header `row,t0,omega_1..omega_M,expectation,A`.
    pub fn to_csv(&self) -> String {
        let m = self.no_banking.prices_states.len();
        let mut out = String::from("row,t0");
        for i in 1..=m {
            write!(out, ",omega_{i}").unwrap();
        }
        out.push_str(",expectation,A\n");
        for (label, cells) in self.rows() {
            out.push_str(&label);
            for c in cells {
                match c {
                    Some(v) => write!(out, ",{v:.6}").unwrap(),
                    None => out.push(','),
                }
            }
            out.push('\n');
        }
        out
    }

    /// Aligned plain-text table.
    pub fn to_text(&self) -> String {
        let m = self.no_banking.prices_states.len();
        let mut header = vec!["".to_string(), "t=0".to_string()];
        header.extend((1..=m).map(|i| format!("omega_{i}")));
        header.push("E[.]".into());
        header.push("A_j".into());
        let mut out = String::new();
        let line = |cols: &[String]| {
            let mut s = format!("{:<10}", cols[0]);
            for c in &cols[1..] {
                write!(s, "{c:>13}").unwrap();
            }
            s.push('\n');
            s
        };
        out.push_str(&line(&header));
        for (label, cells) in self.rows() {
            if label.ends_with("_V_1") {
                let title = if label.starts_with("nobank") {
                    "No banking"
                } else {
                    "w/Banking"
                };
                writeln!(out, "-- {title} --").unwrap();
            }
            let short = label.split_once('_').map(|(_, r)| r).unwrap_or(&label);
            let short = if short == "p" { "p*" } else { short };
            let mut cols = vec![short.to_string()];
            cols.extend(cells.iter().map(|c| match c {
                Some(v) => format!("{v:.6}"),
                None => "--".into(),
            }));
            out.push_str(&line(&cols));
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures::table1;

    #[test]
    fn value_examples() {
        let s = table1();
        let v = value_v(&s, &Allocation::new(vec![54.0, 36.0]).unwrap()).unwrap();
        assert!(
            (v[0] - 68.74).abs() < 0.05 && (v[1] - 75.85).abs() < 0.05,
            "{v:?}"
        );
        let v = value_v(&s, &Allocation::new(vec![30.0, 20.0]).unwrap()).unwrap();
        assert!(
            (v[0] - 49.18).abs() < 0.05 && (v[1] - 51.04).abs() < 0.05,
            "{v:?}"
        );
    }

    #[test]
    fn state_mean_continuation_matches_table() {
        let s = table1();
        let e = expected_continuation_with(&s, &[0.0, 0.0], ExpectationWeights::StateMean).unwrap();
        assert!(
            (e[0] - 60.72).abs() < 0.05 && (e[1] - 65.60).abs() < 0.05,
            "{e:?}"
        );
        let e =
            expected_continuation_with(&s, &[3.367, 2.142], ExpectationWeights::StateMean).unwrap();
        assert!(
            (e[0] - 63.39).abs() < 0.05 && (e[1] - 68.88).abs() < 0.05,
            "{e:?}"
        );
    }

    #[test]
    fn continuation_rejects_bad_banking() {
        let s = table1();
        assert!(expected_continuation(&s, &[-1.0, 0.0]).is_err());
        assert!(expected_continuation(&s, &[60.0, 40.0]).is_err());
    }

    #[test]
    fn continuation_error_names_state() {
        let mut s = table1();
        s.recharge.states[0].r = 5.0;
        let err = expected_continuation(&s, &[0.0, 0.0]).unwrap_err();
        assert!(err.to_string().contains("omega_1"), "{err}");
        assert!(err.is_infeasible());
    }

    #[test]
    fn horizon_must_be_two() {
        let mut s = table1();
        s.horizon = 3;
        assert!(banking_fixed_point(&s, &BankingConfig::default()).is_err());
    }

    #[test]
    fn csv_layout() {
        let s = table1();
        let cfg = BankingConfig {
            uniqueness_scan: 0,
            ..Default::default()
        };
        let cmp = compare_banking(&s, &cfg, ExpectationWeights::StateMean).unwrap();
        let csv = cmp.to_csv();
        let lines: Vec<_> = csv.lines().collect();
        assert_eq!(lines[0], "row,t0,omega_1,omega_2,omega_3,expectation,A");
        assert_eq!(lines.len(), 7);
        assert!(lines[3].starts_with("nobank_p,") && lines[3].ends_with(','));
        assert!(cmp.to_text().contains("w/Banking"));
    }
}
