//! Random small instances and routes for property checks.

use rand::Rng;

use crate::eval::evaluate_route;
use crate::instance::{FleetParams, Instance, InstanceBuilder};
use crate::pricing::{PeriodPrice, PriceSchedule};
use crate::route::Route;
use crate::schedule::CaseTag;

/// A random price schedule with `periods` periods of 60 minutes.
pub fn random_prices<R: Rng>(rng: &mut R, periods: usize) -> PriceSchedule {
    let prices = (0..periods)
        .map(|_| PeriodPrice {
            charge: rng.gen_range(1..=15) as f64 * 0.9,
            discharge: rng.gen_range(0..=15) as f64 * 0.8,
        })
        .collect();
    PriceSchedule::new(60.0, prices, rng.gen_range(1..=10) as f64).expect("valid prices")
}

/// A random instance with `customers` customers and `stations` stations on
/// a short horizon of 4 to 6 periods.
pub fn random_instance<R: Rng>(rng: &mut R, customers: usize, stations: usize) -> Instance {
    let periods = rng.gen_range(4..=6);
    let prices = random_prices(rng, periods);
    let horizon = prices.horizon();
    let alpha = rng.gen_range(1.0..3.0);
    let full = rng.gen_range(60.0..240.0);
    let fleet = FleetParams {
        vehicles: 1,
        cargo_capacity: 100.0,
        battery_capacity: full / alpha,
        charge_rate: alpha,
        consumption_rate: 1.0,
        speed: 1.0,
    };
    let mut b = InstanceBuilder::new((0.0, 0.0), fleet, prices);
    for _ in 0..customers {
        let e = rng.gen_range(0.0..horizon * 0.6);
        let l = rng.gen_range(e..horizon);
        let (e, l) = if rng.gen_bool(0.3) {
            (0.0, horizon)
        } else {
            (e, l)
        };
        b = b.customer(
            rng.gen_range(-30.0..30.0),
            rng.gen_range(-30.0..30.0),
            rng.gen_range(1.0..30.0),
            (e, l),
            rng.gen_range(0.0..20.0_f64).floor(),
        );
    }
    for _ in 0..stations {
        b = b.station(rng.gen_range(-30.0..30.0), rng.gen_range(-30.0..30.0));
    }
    b.build().expect("generated instance is valid")
}

/// A random route of the requested case that has no time-window, battery-leg
/// or cargo violation. Retries until one is found.
pub fn random_case<R: Rng>(rng: &mut R, want: CaseTag) -> (Instance, Route) {
    let stations = match want {
        CaseTag::ZeroStation => 0,
        CaseTag::OneStation => 1,
        _ => 2,
    };
    loop {
        let n = rng.gen_range(0..=3);
        let inst = random_instance(rng, n, stations.max(1));
        let mut interior: Vec<usize> = inst.customers().collect();
        for i in (1..interior.len()).rev() {
            interior.swap(i, rng.gen_range(0..=i));
        }
        let ids: Vec<usize> = inst.stations().collect();
        for _ in 0..stations {
            let s = ids[rng.gen_range(0..ids.len())];
            let at = rng.gen_range(0..=interior.len());
            interior.insert(at, s);
        }
        let route = Route::from_interior(&inst, &interior);
        let Ok(eval) = evaluate_route(&inst, &route) else {
            continue;
        };
        if eval.violations.tw > 0.0 || eval.violations.cargo > 0.0 {
            continue;
        }
        let m = crate::route::compute_metrics(&inst, &route);
        if crate::route::battery_violation(&inst, &route, &m) > 0.0 {
            continue;
        }
        let Ok(problem) = crate::schedule::ScheduleProblem::build(&inst, &route, &m) else {
            continue;
        };
        if problem.case == want {
            return (inst, route);
        }
    }
}
