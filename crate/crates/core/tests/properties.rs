//! Randomised invariants of the production, market and rollout layers.

mod common;

use groundwater_market::sim::{rollout, sample_recharge, Policy};
use groundwater_market::{
    agent_consumption, clipped_quantity, max_profit_g, parse_scenario, solve_one_period, AgentSpec,
    Allocation, GoodSpec, MarketScenario,
};
use proptest::prelude::*;

fn good() -> impl Strategy<Value = GoodSpec> {
    (
        0.55..0.95f64,
        3.0..15.0f64,
        0.5..5.0f64,
        0.5..3.0f64,
        0.0..5.0f64,
        5.0..50.0f64,
    )
        .prop_map(|(alpha, f, q, a, n, width)| GoodSpec::new(alpha, f, q, a, n, n + width))
}

fn agent() -> impl Strategy<Value = AgentSpec> {
    prop::collection::vec(good(), 2).prop_map(|goods| AgentSpec {
        name: "x".into(),
        theta: 1.0,
        goods,
    })
}

fn scenario() -> impl Strategy<Value = MarketScenario> {
    (0u64..10_000).prop_map(common::random_scenario)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn quantity_is_non_increasing(g in good(), v in 0.0..3.0f64, dv in 0.0..1.0f64) {
        let a = clipped_quantity(&g, v).unwrap();
        let b = clipped_quantity(&g, v + dv).unwrap();
        prop_assert!(b <= a);
        prop_assert!(a >= g.n && a <= g.upper);
    }

    #[test]
    fn demand_is_non_increasing(ag in agent(), v in 0.0..3.0f64, dv in 0.0..1.0f64) {
        let a = agent_consumption(&ag, v).unwrap();
        let b = agent_consumption(&ag, v + dv).unwrap();
        prop_assert!(b <= a);
    }

    #[test]
    fn g_is_concave(ag in agent(), x in 0.0..1.0f64, y in 0.0..1.0f64) {
        let (lo, hi) = (ag.c_lo(), ag.c_hi());
        let (a, b) = (lo + x * (hi - lo), lo + y * (hi - lo));
        let g = |c: f64| max_profit_g(&ag, c).unwrap().value;
        let mid = g(0.5 * (a + b));
        prop_assert!(mid >= 0.5 * (g(a) + g(b)) - 1e-9);
    }

    #[test]
    fn multiplier_is_slope_of_g(ag in agent(), x in 0.02..0.98f64) {
        let (lo, hi) = (ag.c_lo(), ag.c_hi());
        let c = lo + x * (hi - lo);
        let h = 1e-4;
        let g = |c: f64| max_profit_g(&ag, c).unwrap().value;
        let fd = (g(c + h) - g(c - h)) / (2.0 * h);
        let lambda = max_profit_g(&ag, c).unwrap().multiplier;
        prop_assert!((fd - lambda).abs() < 1e-3, "fd {} lambda {}", fd, lambda);
    }

    #[test]
    fn g_agrees_with_line_search(ag in agent(), x in 0.0..1.0f64) {
        let c = ag.c_lo() + x * (ag.c_hi() - ag.c_lo());
        let g = max_profit_g(&ag, c).unwrap().value;
        let oracle = common::g_ternary(&ag, c);
        prop_assert!((g - oracle).abs() < 1e-6, "{} vs {}", g, oracle);
    }

    #[test]
    fn scenario_json_round_trip(s in scenario()) {
        let back = parse_scenario(&s.to_json()).unwrap();
        prop_assert_eq!(&back, &s);
        prop_assert_eq!(back.digest(), s.digest());
    }

    #[test]
    fn price_ignores_the_split(s in scenario(), split in 0.0..1.0f64) {
        let total = s.initial_water_table;
        let a = solve_one_period(&s, &s.initial_allocation()).unwrap().price;
        let w = Allocation::new(vec![split * total, (1.0 - split) * total]).unwrap();
        let b = solve_one_period(&s, &w).unwrap().price;
        prop_assert!((a - b).abs() < 1e-9, "{} vs {}", a, b);
    }

    #[test]
    fn market_clears_exactly(s in scenario(), split in 0.0..1.0f64) {
        let total = s.initial_water_table;
        let w = Allocation::new(vec![split * total, (1.0 - split) * total]).unwrap();
        let eq = solve_one_period(&s, &w).unwrap();
        let sum: f64 = eq.trades.iter().sum();
        prop_assert_eq!(sum, 0.0);
        let used: f64 = eq.consumption.iter().sum();
        prop_assert!((used - total).abs() <= 1e-9 * total);
        for j in 0..2 {
            prop_assert!((eq.consumption[j] + eq.trades[j] - w.as_slice()[j]).abs() < 1e-9);
        }
    }

    #[test]
    fn rollouts_conserve_water(s in scenario(), seed in any::<u64>(), b1 in 0.0..5.0f64, b2 in 0.0..5.0f64) {
        let path = sample_recharge(&s.recharge, 7, seed);
        let tr = rollout(&s, &Policy::Fixed(vec![b1, b2]), &path);
        prop_assert!(tr.terminated.is_none(), "{:?}", tr.terminated);
        for (t, p) in tr.periods.iter().enumerate() {
            let total: f64 = p.water.iter().sum();
            prop_assert!((total - p.water_table).abs() < 1e-9);
            prop_assert_eq!(p.trades.iter().sum::<f64>(), 0.0);
            if let Some(next) = tr.periods.get(t + 1) {
                let r = next.recharge.unwrap();
                for j in 0..2 {
                    let carried = p.water[j] - p.consumption[j] - p.trades[j];
                    prop_assert!((carried - p.banked[j]).abs() < 1e-9);
                    let expected = carried + s.agents[j].theta * r;
                    prop_assert!((next.water[j] - expected).abs() < 1e-9);
                }
            }
        }
    }
}
