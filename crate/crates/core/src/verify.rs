//! Full-model verification of solutions.
//!
//! Every conditional constraint is checked in implication form on the fixed
//! routes, so no big-M constant is involved. Arrival times are propagated at
//! their earliest values, which is optimal for every time constraint, and the
//! battery is propagated with equality, which is optimal for the objective.

use std::fmt;

use crate::instance::{Instance, NodeKind, TOLERANCE};
use crate::route::Route;
use crate::solution::{Action, ChargePlan, Solution};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Constraint {
    /// Route shape, plan shape, actions at customers, period indices.
    Structure,
    /// Every customer served by exactly one vehicle.
    Coverage,
    /// Exactly K routes, each ending at the depot.
    RouteCount,
    TimeWindow,
    /// No charge or discharge before arriving and before the period starts.
    ActionBeforeArrival,
    /// No charge and discharge in the same period at the same visit.
    Exclusivity,
    /// Charging cannot exceed the free capacity on arrival.
    ChargeCapacity,
    /// Discharging cannot exceed the energy on arrival.
    DischargeCapacity,
    /// Battery level stays nonnegative along the route.
    BatteryBounds,
    /// Remaining cargo stays nonnegative along the route.
    Cargo,
}

impl Constraint {
    pub fn name(self) -> &'static str {
        match self {
            Constraint::Structure => "structure",
            Constraint::Coverage => "coverage",
            Constraint::RouteCount => "route-count",
            Constraint::TimeWindow => "time-window",
            Constraint::ActionBeforeArrival => "action-before-arrival",
            Constraint::Exclusivity => "exclusivity",
            Constraint::ChargeCapacity => "charge-capacity",
            Constraint::DischargeCapacity => "discharge-capacity",
            Constraint::BatteryBounds => "battery-bounds",
            Constraint::Cargo => "cargo",
        }
    }
}

impl fmt::Display for Constraint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Violation {
    pub constraint: Constraint,
    pub route: Option<usize>,
    pub node: Option<usize>,
    pub period: Option<usize>,
    pub detail: String,
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "violated: {}", self.constraint)?;
        if let Some(k) = self.route {
            write!(f, " route={k}")?;
        }
        if let Some(n) = self.node {
            write!(f, " node={n}")?;
        }
        if let Some(t) = self.period {
            write!(f, " period={t}")?;
        }
        if !self.detail.is_empty() {
            write!(f, " ({})", self.detail)?;
        }
        Ok(())
    }
}

/// Propagated state along one route, per position.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct RouteTrace {
    pub arrival: Vec<f64>,
    pub departure: Vec<f64>,
    /// Battery on arrival, in charge minutes.
    pub battery: Vec<f64>,
    pub cargo: Vec<f64>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct RouteCheck {
    pub objective: f64,
    pub violations: Vec<Violation>,
    pub trace: RouteTrace,
}

impl RouteCheck {
    pub fn feasible(&self) -> bool {
        self.violations.is_empty()
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct VerifyReport {
    pub objective: f64,
    pub violations: Vec<Violation>,
    pub traces: Vec<RouteTrace>,
}

impl VerifyReport {
    pub fn feasible(&self) -> bool {
        self.violations.is_empty()
    }
}

/// Checks one route with its plan against every per-vehicle constraint and
/// returns its contribution to the objective.
pub fn check_route(inst: &Instance, route: &Route, plan: &ChargePlan) -> RouteCheck {
    let mut violations = Vec::new();
    let mut push = |constraint, node: Option<usize>, period: Option<usize>, detail: String| {
        violations.push(Violation {
            constraint,
            route: None,
            node,
            period,
            detail,
        })
    };

    if let Err(e) = route.validate(inst) {
        push(Constraint::Structure, None, None, e.to_string());
        return RouteCheck {
            objective: 0.0,
            violations,
            trace: RouteTrace::default(),
        };
    }
    let r = &route.nodes;
    let n = r.len();
    if plan.visits.len() != n {
        push(
            Constraint::Structure,
            None,
            None,
            format!(
                "plan has {} visits for a route of {n} nodes",
                plan.visits.len()
            ),
        );
        return RouteCheck {
            objective: 0.0,
            violations,
            trace: RouteTrace::default(),
        };
    }

    let delta = inst.delta();
    let periods = inst.periods();
    let b_full = inst.full_charge();
    let prices = inst.prices();

    let mut trace = RouteTrace {
        arrival: vec![0.0; n],
        departure: vec![0.0; n],
        battery: vec![0.0; n],
        cargo: vec![0.0; n],
    };
    let mut objective = 0.0;
    let mut arrival = inst.node(r[0]).ready;
    let mut battery = b_full;
    let mut cargo = inst.fleet.cargo_capacity;

    for i in 0..n {
        let id = r[i];
        let node = inst.node(id);
        trace.arrival[i] = arrival;
        trace.battery[i] = battery;
        trace.cargo[i] = cargo;

        if arrival > node.due + TOLERANCE {
            push(
                Constraint::TimeWindow,
                Some(id),
                None,
                format!("arrival {arrival} after {}", node.due),
            );
        }
        if battery < -TOLERANCE {
            push(
                Constraint::BatteryBounds,
                Some(id),
                None,
                format!("battery {battery} on arrival"),
            );
        }
        if cargo < -TOLERANCE {
            push(
                Constraint::Cargo,
                Some(id),
                None,
                format!("remaining cargo {cargo}"),
            );
        }

        let acts = &plan.visits[i];
        let mut charges = 0usize;
        let mut discharges = 0usize;
        let mut last_end = 0.0f64;
        let mut seen = vec![None::<Action>; periods + 1];
        let active: Vec<&(usize, Action)> =
            acts.iter().filter(|(_, a)| *a != Action::Idle).collect();
        if !active.is_empty() && !inst.is_charge_capable(id) {
            push(
                Constraint::Structure,
                Some(id),
                None,
                "charge or discharge at a customer".into(),
            );
        } else {
            for &&(t, a) in &active {
                if t == 0 || t > periods {
                    push(
                        Constraint::Structure,
                        Some(id),
                        Some(t),
                        format!("period outside 1..={periods}"),
                    );
                    continue;
                }
                match seen[t] {
                    Some(prev) if prev == a => {
                        push(
                            Constraint::Structure,
                            Some(id),
                            Some(t),
                            "period listed twice".into(),
                        );
                        continue;
                    }
                    Some(_) => {
                        push(
                            Constraint::Exclusivity,
                            Some(id),
                            Some(t),
                            "charge and discharge".into(),
                        );
                    }
                    None => seen[t] = Some(a),
                }
                let start = (t - 1) as f64 * delta;
                if node.kind != NodeKind::DepotStart && arrival > start + TOLERANCE {
                    push(
                        Constraint::ActionBeforeArrival,
                        Some(id),
                        Some(t),
                        format!("arrival {arrival} after period start {start}"),
                    );
                }
                last_end = last_end.max(t as f64 * delta);
                match a {
                    Action::Charge => {
                        charges += 1;
                        objective += prices.charge(t);
                    }
                    Action::Discharge => {
                        discharges += 1;
                        objective -= prices.discharge(t);
                    }
                    Action::Idle => {}
                }
            }
        }
        let charged = charges as f64 * delta;
        let discharged = discharges as f64 * delta;
        if charged > b_full - battery + TOLERANCE {
            push(
                Constraint::ChargeCapacity,
                Some(id),
                None,
                format!("charging {charged} with {battery} on board"),
            );
        }
        if discharged > battery + TOLERANCE {
            push(
                Constraint::DischargeCapacity,
                Some(id),
                None,
                format!("discharging {discharged} with {battery} on board"),
            );
        }
        battery += charged - discharged;
        let departure = (arrival + node.service).max(last_end);
        trace.departure[i] = departure;

        if i + 1 < n {
            let next = r[i + 1];
            arrival = (departure + inst.travel_time(id, next)).max(inst.node(next).ready);
            battery -= inst.charge_time(id, next);
            cargo -= node.demand;
        }
    }
    // Energy missing at the end of the day is restored overnight.
    objective += prices.night / delta * (b_full - battery);

    RouteCheck {
        objective,
        violations,
        trace,
    }
}

pub fn verify_full(inst: &Instance, sol: &Solution) -> VerifyReport {
    let mut violations = Vec::new();
    let k = inst.vehicles();
    if sol.routes.len() != k {
        violations.push(Violation {
            constraint: Constraint::RouteCount,
            route: None,
            node: None,
            period: None,
            detail: format!("{} routes for {k} vehicles", sol.routes.len()),
        });
    }
    if sol.plans.len() != sol.routes.len() {
        violations.push(Violation {
            constraint: Constraint::Structure,
            route: None,
            node: None,
            period: None,
            detail: format!("{} plans for {} routes", sol.plans.len(), sol.routes.len()),
        });
    }

    let mut served = vec![0usize; inst.n_nodes()];
    let mut objective = 0.0;
    let mut traces = Vec::with_capacity(sol.routes.len());
    let empty = ChargePlan::default();
    for (ri, route) in sol.routes.iter().enumerate() {
        let plan = sol.plans.get(ri).unwrap_or(&empty);
        let check = check_route(inst, route, plan);
        objective += check.objective;
        violations.extend(check.violations.into_iter().map(|mut v| {
            v.route = Some(ri);
            v
        }));
        traces.push(check.trace);
        for &id in &route.nodes {
            if id < inst.n_nodes() && inst.is_customer(id) {
                served[id] += 1;
            }
        }
    }
    for c in inst.customers() {
        if served[c] != 1 {
            violations.push(Violation {
                constraint: Constraint::Coverage,
                route: None,
                node: Some(c),
                period: None,
                detail: format!("served {} times", served[c]),
            });
        }
    }

    VerifyReport {
        objective,
        violations,
        traces,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::instance::{FleetParams, InstanceBuilder};
    use crate::pricing::{PriceSchedule, SchemeId};

    fn instance() -> Instance {
        let fleet = FleetParams {
            vehicles: 1,
            cargo_capacity: 200.0,
            battery_capacity: 270.0,
            charge_rate: 1.0,
            consumption_rate: 1.0,
            speed: 1.0,
        };
        InstanceBuilder::new((0.0, 0.0), fleet, PriceSchedule::scheme(SchemeId::ASummer))
            .customer(30.0, 0.0, 50.0, (0.0, 1140.0), 10.0)
            .station(60.0, 0.0)
            .build()
            .unwrap()
    }

    fn single(route: Vec<usize>, plan: ChargePlan) -> Solution {
        Solution {
            routes: vec![Route { nodes: route }],
            plans: vec![plan],
        }
    }

    #[test]
    fn idle_route_costs_night_energy() {
        let inst = instance();
        let sol = single(vec![0, 1, 3], ChargePlan::idle(3));
        let rep = verify_full(&inst, &sol);
        assert!(rep.feasible(), "{:?}", rep.violations);
        assert!((rep.objective - 60.0 / 60.0 * 6.5).abs() < 1e-12);
        assert_eq!(rep.traces[0].arrival, vec![0.0, 30.0, 70.0]);
        assert_eq!(rep.traces[0].battery, vec![270.0, 240.0, 210.0]);
        assert_eq!(rep.traces[0].cargo, vec![200.0, 200.0, 150.0]);
    }

    #[test]
    fn discharge_objective_uses_period_prices() {
        let inst = instance();
        let mut plan = ChargePlan::idle(3);
        // Period 8 covers 11:00-12:00 and period 12 covers 16:00-17:00.
        plan.visits[0] = vec![(8, Action::Discharge)];
        plan.visits[2] = vec![(12, Action::Discharge)];
        let rep = verify_full(&inst, &single(vec![0, 1, 3], plan));
        assert!(rep.feasible(), "{:?}", rep.violations);
        assert_eq!(rep.traces[0].arrival[1], 480.0 + 30.0);
        let expected = -10.0 - 10.0 + 6.5 * (60.0 + 120.0) / 60.0;
        assert!((rep.objective - expected).abs() < 1e-9);
    }

    #[test]
    fn missing_customer_is_a_coverage_witness() {
        let inst = instance();
        let rep = verify_full(&inst, &single(vec![0, 3], ChargePlan::idle(2)));
        assert!(!rep.feasible());
        assert_eq!(rep.violations.len(), 1);
        assert_eq!(rep.violations[0].constraint, Constraint::Coverage);
        assert_eq!(rep.violations[0].node, Some(1));
    }

    #[test]
    fn acting_in_the_arrival_period_mid_period_is_rejected() {
        let inst = instance();
        let mut plan = ChargePlan::idle(3);
        // Arrival at the end depot is 70, inside period 2.
        plan.visits[2] = vec![(2, Action::Discharge)];
        let rep = verify_full(&inst, &single(vec![0, 1, 3], plan.clone()));
        assert_eq!(rep.violations.len(), 1);
        assert_eq!(
            rep.violations[0].constraint,
            Constraint::ActionBeforeArrival
        );
        assert_eq!(rep.violations[0].period, Some(2));
        plan.visits[2] = vec![(3, Action::Discharge)];
        assert!(verify_full(&inst, &single(vec![0, 1, 3], plan)).feasible());
    }

    #[test]
    fn structural_and_capacity_violations() {
        let inst = instance();
        let mut plan = ChargePlan::idle(4);
        plan.visits[1] = vec![(5, Action::Charge)];
        let rep = verify_full(&inst, &single(vec![0, 1, 2, 3], plan));
        assert!(rep
            .violations
            .iter()
            .any(|v| v.constraint == Constraint::Structure));

        let mut plan = ChargePlan::idle(4);
        plan.visits[2] = vec![(5, Action::Charge), (5, Action::Discharge)];
        let rep = verify_full(&inst, &single(vec![0, 1, 2, 3], plan));
        assert!(rep
            .violations
            .iter()
            .any(|v| v.constraint == Constraint::Exclusivity));

        // 60 consumed before the station: two charge periods overfill.
        let mut plan = ChargePlan::idle(4);
        plan.visits[2] = vec![(5, Action::Charge), (6, Action::Charge)];
        let rep = verify_full(&inst, &single(vec![0, 1, 2, 3], plan));
        assert!(rep
            .violations
            .iter()
            .any(|v| v.constraint == Constraint::ChargeCapacity));

        let mut plan = ChargePlan::idle(3);
        plan.visits[0] = (1..=5).map(|t| (t, Action::Discharge)).collect();
        let rep = verify_full(&inst, &single(vec![0, 1, 3], plan));
        assert!(rep
            .violations
            .iter()
            .any(|v| v.constraint == Constraint::DischargeCapacity));
        assert!(rep
            .violations
            .iter()
            .any(|v| v.constraint == Constraint::BatteryBounds));

        let rep = verify_full(&inst, &Solution::default());
        assert!(rep
            .violations
            .iter()
            .any(|v| v.constraint == Constraint::RouteCount));
    }
}
