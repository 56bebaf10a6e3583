//! Per-route metrics and constraint violations.
//!
//! Positions are 0-based: position 0 is the start depot and position `n - 1`
//! the end depot.

use crate::error::{Error, Result};
use crate::instance::{Instance, NodeKind};

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Route {
    pub nodes: Vec<usize>,
}

impl Route {
    /// The trivial depot-to-depot route.
    pub fn empty(inst: &Instance) -> Self {
        Self {
            nodes: vec![inst.depot_start(), inst.depot_end()],
        }
    }

    /// Builds a route from its interior nodes.
    pub fn from_interior(inst: &Instance, interior: &[usize]) -> Self {
        let mut nodes = Vec::with_capacity(interior.len() + 2);
        nodes.push(inst.depot_start());
        nodes.extend_from_slice(interior);
        nodes.push(inst.depot_end());
        Self { nodes }
    }

    /// Checks the structural invariants: depots at both ends, only customers
    /// and stations inside, no repeated customer.
    pub fn new(inst: &Instance, nodes: Vec<usize>) -> Result<Self> {
        let route = Self { nodes };
        route.validate(inst)?;
        Ok(route)
    }

    pub fn validate(&self, inst: &Instance) -> Result<()> {
        let n = self.nodes.len();
        if n < 2 {
            return Err(Error::MalformedRoute(
                "a route needs at least two nodes".into(),
            ));
        }
        if let Some(&bad) = self.nodes.iter().find(|&&id| id >= inst.n_nodes()) {
            return Err(Error::InvalidNode(bad));
        }
        if self.nodes[0] != inst.depot_start() || self.nodes[n - 1] != inst.depot_end() {
            return Err(Error::MalformedRoute(
                "route must start and end at the depot".into(),
            ));
        }
        let mut seen = vec![false; inst.n_nodes()];
        for &id in &self.nodes[1..n - 1] {
            match inst.kind(id) {
                NodeKind::Customer => {
                    if seen[id] {
                        return Err(Error::MalformedRoute(format!(
                            "customer {id} visited twice"
                        )));
                    }
                    seen[id] = true;
                }
                NodeKind::Station => {}
                _ => {
                    return Err(Error::MalformedRoute(format!(
                        "depot node {id} inside route"
                    )))
                }
            }
        }
        Ok(())
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.len() <= 2
    }

    pub fn interior(&self) -> &[usize] {
        &self.nodes[1..self.nodes.len() - 1]
    }

    pub fn customers<'a>(&'a self, inst: &'a Instance) -> impl Iterator<Item = usize> + 'a {
        self.nodes
            .iter()
            .copied()
            .filter(|&id| inst.is_customer(id))
    }

    pub fn station_count(&self, inst: &Instance) -> usize {
        self.nodes.iter().filter(|&&id| inst.is_station(id)).count()
    }

    /// Positions of depots and stations, in route order.
    pub fn charge_positions(&self, inst: &Instance) -> Vec<usize> {
        (0..self.nodes.len())
            .filter(|&i| inst.is_charge_capable(self.nodes[i]))
            .collect()
    }

    pub fn distance(&self, inst: &Instance) -> f64 {
        self.nodes
            .windows(2)
            .map(|w| inst.distance(w[0], w[1]))
            .sum()
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct RouteMetrics {
    pub earliest: Vec<f64>,
    pub latest: Vec<f64>,
    pub forward_slack: Vec<f64>,
    pub backward_slack: Vec<f64>,
    /// Charge minutes consumed since the previous depot or station.
    pub consumed: Vec<f64>,
}

impl RouteMetrics {
    pub fn len(&self) -> usize {
        self.earliest.len()
    }

    pub fn is_empty(&self) -> bool {
        self.earliest.is_empty()
    }
}

pub fn compute_metrics(inst: &Instance, route: &Route) -> RouteMetrics {
    let r = &route.nodes;
    let n = r.len();
    let node = |i: usize| inst.node(r[i]);

    let mut earliest = vec![0.0f64; n];
    let mut forward_slack = vec![0.0; n];
    let mut consumed = vec![0.0; n];
    for i in 1..n {
        let prev = node(i - 1);
        let t = inst.travel_time(r[i - 1], r[i]);
        let cur = node(i);
        earliest[i] = (earliest[i - 1].min(prev.due) + prev.service + t).max(cur.ready);
        let wait = (cur.ready - (earliest[i - 1] + prev.service + t)).max(0.0);
        let after_customer = prev.kind == NodeKind::Customer;
        forward_slack[i] = if after_customer {
            forward_slack[i - 1] + wait
        } else {
            wait
        };
        let f = inst.charge_time(r[i - 1], r[i]);
        consumed[i] = if after_customer {
            consumed[i - 1] + f
        } else {
            f
        };
    }

    let mut latest = vec![0.0f64; n];
    let mut backward_slack = vec![0.0; n];
    latest[n - 1] = inst.horizon();
    for i in (0..n - 1).rev() {
        let cur = node(i);
        let t = inst.travel_time(r[i], r[i + 1]);
        latest[i] = (latest[i + 1] - t).min(cur.due + cur.service);
        let gap = (latest[i + 1] - t - cur.due - cur.service).max(0.0);
        backward_slack[i] = if node(i + 1).kind == NodeKind::Customer {
            backward_slack[i + 1] + gap
        } else {
            gap
        };
    }

    RouteMetrics {
        earliest,
        latest,
        forward_slack,
        backward_slack,
        consumed,
    }
}

#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct Violations {
    pub tw: f64,
    pub batt: f64,
    pub cargo: f64,
}

impl Violations {
    pub fn is_zero(&self) -> bool {
        self.tw <= 0.0 && self.batt <= 0.0 && self.cargo <= 0.0
    }

    pub fn add(&mut self, other: &Violations) {
        self.tw += other.tw;
        self.batt += other.batt;
        self.cargo += other.cargo;
    }
}

pub fn cargo_violation(inst: &Instance, route: &Route) -> f64 {
    let load: f64 = route.nodes.iter().map(|&id| inst.node(id).demand).sum();
    (load - inst.fleet.cargo_capacity).max(0.0)
}

pub fn tw_violation(inst: &Instance, route: &Route, metrics: &RouteMetrics) -> f64 {
    route
        .nodes
        .iter()
        .zip(&metrics.earliest)
        .map(|(&id, &te)| (te - inst.node(id).due).max(0.0))
        .sum()
}

/// Sum over station and end-depot arrivals of the charge-free leg's excess
/// over a full battery.
pub fn battery_violation(inst: &Instance, route: &Route, metrics: &RouteMetrics) -> f64 {
    let b = inst.full_charge();
    (1..route.nodes.len())
        .filter(|&i| inst.is_charge_capable(route.nodes[i]))
        .map(|i| (metrics.consumed[i] - b).max(0.0))
        .sum()
}

/// Penalty weights of the generalized cost.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Penalties {
    pub tw: f64,
    pub batt: f64,
    pub cargo: f64,
}

impl Default for Penalties {
    fn default() -> Self {
        Self {
            tw: 10.0,
            batt: 10.0,
            cargo: 10.0,
        }
    }
}

impl Penalties {
    pub fn apply(&self, f_elec: f64, v: &Violations) -> f64 {
        f_elec + self.tw * v.tw + self.batt * v.batt + self.cargo * v.cargo
    }
}
