use rand::Rng;

use crate::instance::{Instance, TOLERANCE};
use crate::route::{battery_violation, compute_metrics, Route};

/// Customers sorted by polar angle around a random reference point, then
/// inserted in turn at the cheapest position of the active route. A new
/// route is opened once the active one exceeds the battery or the cargo
/// capacity; the customer that caused it stays. When all `k` routes are
/// open, the remaining customers go to the last one.
pub fn sweep_routes<R: Rng>(inst: &Instance, k: usize, rng: &mut R) -> Vec<Vec<usize>> {
    let k = k.max(1);
    let (mut x0, mut x1, mut y0, mut y1) = (
        f64::INFINITY,
        f64::NEG_INFINITY,
        f64::INFINITY,
        f64::NEG_INFINITY,
    );
    for n in inst.nodes() {
        x0 = x0.min(n.x);
        x1 = x1.max(n.x);
        y0 = y0.min(n.y);
        y1 = y1.max(n.y);
    }
    let rx = x0 + rng.gen::<f64>() * (x1 - x0);
    let ry = y0 + rng.gen::<f64>() * (y1 - y0);
    let mut order: Vec<(f64, usize)> = inst
        .customers()
        .map(|c| {
            let n = inst.node(c);
            ((n.y - ry).atan2(n.x - rx), c)
        })
        .collect();
    order.sort_by(|a, b| a.0.total_cmp(&b.0).then(a.1.cmp(&b.1)));

    let empty = vec![inst.depot_start(), inst.depot_end()];
    let mut routes = vec![empty; k];
    let mut active = 0;
    for (_, c) in order {
        let route = &mut routes[active];
        let mut best = (f64::INFINITY, 1);
        for pos in 1..route.len() {
            let (a, b) = (route[pos - 1], route[pos]);
            let added = inst.distance(a, c) + inst.distance(c, b) - inst.distance(a, b);
            if added < best.0 - 1e-12 {
                best = (added, pos);
            }
        }
        route.insert(best.1, c);
        if active + 1 < k && violates_battery_or_cargo(inst, route) {
            active += 1;
        }
    }
    routes
}

fn violates_battery_or_cargo(inst: &Instance, nodes: &[usize]) -> bool {
    let route = Route {
        nodes: nodes.to_vec(),
    };
    let load: f64 = nodes.iter().map(|&id| inst.node(id).demand).sum();
    load > inst.fleet.cargo_capacity + TOLERANCE
        || battery_violation(inst, &route, &compute_metrics(inst, &route)) > 0.0
}
