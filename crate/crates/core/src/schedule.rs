//! Exact charge/discharge scheduling for a fixed route.
//!
//! A route has at most two station visits. Depending on the number of
//! stations and on the energy deficit `delta_e = sum F - B` at the charge
//! points, the admissible actions are restricted as follows:
//!
//! | case                  | start depot | stations          | end depot | net periods `sum r - sum d`   |
//! |-----------------------|-------------|-------------------|-----------|-------------------------------|
//! | zero stations         | discharge   |                   | discharge | `>= -floor(-delta_e / delta)` |
//! | one station, deficit  | discharge   | charge or discharge | discharge | `= ceil(delta_e / delta)`   |
//! | one station, surplus  | discharge   | charge or discharge | discharge | `>= -floor(-delta_e / delta)` |
//! | two stations, deficit |             | charge            |           | `= ceil(delta_e / delta)`     |
//! | two stations, surplus | discharge   | discharge         | discharge | `>= -floor(-delta_e / delta)` |
//!
//! A station in the one-station case either charges or discharges, never
//! both. Within these rules the scheduler is exact: a dynamic program over
//! the charge points tracks the arrival time and the net number of periods,
//! and propagates the delay caused by charging through the customers that
//! follow, absorbing it in their waiting times.

use std::collections::BTreeMap;
use std::ops::RangeInclusive;

use crate::error::{Error, Result};
use crate::instance::{Instance, TOLERANCE};
use crate::pricing::PriceSchedule;
use crate::route::{compute_metrics, Route, RouteMetrics};
use crate::solution::{Action, ChargePlan};

const EPS: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum CaseTag {
    ZeroStation,
    OneStation,
    TwoStationRecharge,
    TwoStationDischarge,
}

impl CaseTag {
    pub fn name(self) -> &'static str {
        match self {
            CaseTag::ZeroStation => "zero-station",
            CaseTag::OneStation => "one-station",
            CaseTag::TwoStationRecharge => "two-station-recharge",
            CaseTag::TwoStationDischarge => "two-station-discharge",
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct PricedRoute {
    pub plan: ChargePlan,
    pub f_elec: f64,
    pub case: CaseTag,
}

/// The scheduling problem of one route.
#[derive(Debug, Clone, PartialEq)]
pub struct ScheduleProblem {
    pub case: CaseTag,
    /// Route positions of the depots and stations.
    pub positions: Vec<usize>,
    /// Connected periods of each charge point.
    pub windows: Vec<RangeInclusive<usize>>,
    /// Admissible action kinds per charge point.
    pub kinds: Vec<Vec<Action>>,
    /// Charge minutes needed beyond a full battery, `sum F - B`.
    pub deficit: f64,
    /// Charge minutes consumed on the leg ending at each charge point.
    pub legs: Vec<f64>,
    pub net: NetRule,
}

/// Condition on the net number of periods `sum charge - sum discharge`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum NetRule {
    Exactly(i64),
    /// At most this many more discharge than charge periods.
    DischargeBudget(i64),
}

impl NetRule {
    pub fn admits(self, net: i64) -> bool {
        match self {
            NetRule::Exactly(v) => net == v,
            NetRule::DischargeBudget(omega) => -net <= omega,
        }
    }
}

impl ScheduleProblem {
    pub fn build(inst: &Instance, route: &Route, metrics: &RouteMetrics) -> Result<Self> {
        let positions = route.charge_positions(inst);
        let stations = positions.len() - 2;
        if stations > 2 {
            return Err(Error::TooManyStations(stations));
        }
        let delta = inst.delta();
        let legs: Vec<f64> = positions.iter().map(|&p| metrics.consumed[p]).collect();
        let deficit = legs.iter().sum::<f64>() - inst.full_charge();
        let required = ((deficit / delta - EPS).ceil() as i64).max(0);
        let budget = (-deficit / delta + EPS).floor() as i64;
        let last = positions.len() - 1;
        let (case, net, kinds): (CaseTag, NetRule, Vec<Vec<Action>>) = match stations {
            0 => (
                CaseTag::ZeroStation,
                NetRule::DischargeBudget(budget),
                vec![vec![Action::Discharge]; 2],
            ),
            1 => {
                let net = if deficit < 0.0 {
                    NetRule::DischargeBudget(budget)
                } else {
                    NetRule::Exactly(required)
                };
                let kinds = vec![
                    vec![Action::Discharge],
                    vec![Action::Charge, Action::Discharge],
                    vec![Action::Discharge],
                ];
                (CaseTag::OneStation, net, kinds)
            }
            _ if deficit > 0.0 => {
                let kinds = (0..=last)
                    .map(|v| {
                        if v == 0 || v == last {
                            vec![]
                        } else {
                            vec![Action::Charge]
                        }
                    })
                    .collect();
                (
                    CaseTag::TwoStationRecharge,
                    NetRule::Exactly(required),
                    kinds,
                )
            }
            _ => (
                CaseTag::TwoStationDischarge,
                NetRule::DischargeBudget(budget),
                vec![vec![Action::Discharge]; 4],
            ),
        };
        let windows = positions
            .iter()
            .map(|&p| connected_periods(inst, metrics, p))
            .collect();
        Ok(Self {
            case,
            positions,
            windows,
            kinds,
            deficit,
            legs,
            net,
        })
    }
}

/// Periods during which a vehicle at position `pos` can charge or discharge:
/// those starting no earlier than the earliest arrival and ending no later
/// than the latest departure.
pub fn connected_periods(
    inst: &Instance,
    metrics: &RouteMetrics,
    pos: usize,
) -> RangeInclusive<usize> {
    let delta = inst.delta();
    let first = first_period(metrics.earliest[pos], delta);
    let last =
        (((metrics.latest[pos] + TOLERANCE) / delta).floor().max(0.0) as usize).min(inst.periods());
    first..=last
}

fn first_period(arrival: f64, delta: f64) -> usize {
    (((arrival - TOLERANCE) / delta).ceil().max(0.0) as usize) + 1
}

/// Periods at the later charge point `j` made unreachable by acting during
/// period `t` at the earlier charge point `i`.
pub fn mutually_exclusive(
    inst: &Instance,
    metrics: &RouteMetrics,
    i: usize,
    j: usize,
    t: usize,
) -> Vec<usize> {
    let delta = inst.delta();
    let reach = metrics.earliest[i] + metrics.forward_slack[j];
    let end = delta * t as f64;
    if end <= reach {
        return Vec::new();
    }
    let bound = metrics.earliest[j] + end - reach;
    connected_periods(inst, metrics, j)
        .filter(|&tp| delta * (tp as f64 - 1.0) < bound)
        .collect()
}

/// Best-price period selections: for a kind, a first period `lo` and a last
/// period `hi`, the periods of `[lo, hi)` sorted by price (earlier first on
/// ties) and their prefix sums.
#[derive(Debug, Clone, PartialEq)]
pub struct SelectionTable {
    periods: usize,
    // [kind][lo][hi] with kind 0 = charge cost, 1 = negated discharge reward.
    order: Vec<Vec<Vec<Vec<usize>>>>,
    prefix: Vec<Vec<Vec<Vec<f64>>>>,
}

impl SelectionTable {
    pub fn new(prices: &PriceSchedule) -> Self {
        let n = prices.len();
        let mut order = Vec::with_capacity(2);
        let mut prefix = Vec::with_capacity(2);
        for kind in 0..2 {
            let value = |t: usize| {
                if kind == 0 {
                    prices.charge(t)
                } else {
                    -prices.discharge(t)
                }
            };
            let mut ok = vec![vec![Vec::new(); n + 2]; n + 2];
            let mut pk = vec![vec![Vec::new(); n + 2]; n + 2];
            for lo in 1..=n {
                for hi in lo..=n {
                    let mut ts: Vec<usize> = (lo..hi).collect();
                    ts.sort_by(|&a, &b| value(a).total_cmp(&value(b)).then(a.cmp(&b)));
                    let mut sums = Vec::with_capacity(ts.len() + 1);
                    let mut acc = 0.0;
                    sums.push(0.0);
                    for &t in &ts {
                        acc += value(t);
                        sums.push(acc);
                    }
                    ok[lo][hi] = ts;
                    pk[lo][hi] = sums;
                }
            }
            order.push(ok);
            prefix.push(pk);
        }
        Self {
            periods: n,
            order,
            prefix,
        }
    }

    fn kind_index(a: Action) -> usize {
        if a == Action::Charge {
            0
        } else {
            1
        }
    }

    /// Cost of acting in `k` periods within `[lo, hi]`, including `hi`.
    #[inline]
    fn cost(&self, prices: &PriceSchedule, a: Action, lo: usize, hi: usize, k: usize) -> f64 {
        let ki = Self::kind_index(a);
        let last = if ki == 0 {
            prices.charge(hi)
        } else {
            -prices.discharge(hi)
        };
        last + self.prefix[ki][lo][hi][k - 1]
    }

    fn periods(&self, a: Action, lo: usize, hi: usize, k: usize) -> Vec<usize> {
        let mut ts: Vec<usize> = self.order[Self::kind_index(a)][lo][hi][..k - 1].to_vec();
        ts.push(hi);
        ts.sort_unstable();
        ts
    }
}

/// Arrival at the next charge point as a function of the departure `d` from
/// the previous one: `max(floor, d + offset)`, valid while `d <= latest`.
#[derive(Debug, Clone, Copy)]
struct Segment {
    floor: f64,
    offset: f64,
    latest: f64,
}

impl Segment {
    fn between(inst: &Instance, route: &Route, from: usize, to: usize) -> Self {
        let r = &route.nodes;
        let mut floor = f64::NEG_INFINITY;
        let mut offset = 0.0;
        let mut latest = f64::INFINITY;
        for p in from + 1..=to {
            let t = inst.travel_time(r[p - 1], r[p]);
            let node = inst.node(r[p]);
            floor = (floor + t).max(node.ready);
            offset += t;
            if floor > node.due + TOLERANCE {
                latest = f64::NEG_INFINITY;
            }
            latest = latest.min(node.due + TOLERANCE - offset);
            if p < to {
                floor += node.service;
                offset += node.service;
            }
        }
        Self {
            floor,
            offset,
            latest,
        }
    }

    #[inline]
    fn arrival(&self, departure: f64) -> f64 {
        self.floor.max(departure + self.offset)
    }
}

#[derive(Debug, Clone, Copy)]
struct Decision {
    kind: Action,
    lo: usize,
    hi: usize,
    count: usize,
}

#[derive(Debug, Clone)]
struct Label {
    arrival: f64,
    net: i64,
    cost: f64,
    parent: usize,
    decision: Option<Decision>,
}

/// Solves a scheduling problem exactly; `None` when no admissible plan
/// exists.
pub fn solve(inst: &Instance, route: &Route, problem: &ScheduleProblem) -> Option<PricedRoute> {
    let prices = inst.prices();
    let table = inst.selection();
    let delta = inst.delta();
    let b_full = inst.full_charge();
    let n_periods = table.periods;
    let m = problem.positions.len();
    let segments: Vec<Segment> = (0..m - 1)
        .map(|v| Segment::between(inst, route, problem.positions[v], problem.positions[v + 1]))
        .collect();
    // Battery on arrival at charge point v is `b_full - consumed[v] + delta * net`.
    let mut consumed = vec![0.0; m];
    for v in 1..m {
        consumed[v] = consumed[v - 1] + problem.legs[v];
    }
    let max_count = ((b_full + TOLERANCE) / delta).floor() as usize;

    let start = inst.node(route.nodes[0]).ready;
    let mut stages: Vec<Vec<Label>> = vec![vec![Label {
        arrival: start,
        net: 0,
        cost: 0.0,
        parent: usize::MAX,
        decision: None,
    }]];
    let mut terminal: Option<Label> = None;

    for v in 0..m {
        let last = v + 1 == m;
        // Pareto fronts per net value: earlier arrival and lower cost dominate.
        let mut fronts: BTreeMap<i64, Vec<Label>> = BTreeMap::new();
        for (li, label) in stages[v].iter().enumerate() {
            let battery = b_full - consumed[v] + delta * label.net as f64;
            let mut emit = |departure: f64, net: i64, cost: f64, decision: Option<Decision>| {
                if last {
                    if !problem.net.admits(net) {
                        return;
                    }
                    let total = cost + prices.night * (consumed[v] / delta - net as f64);
                    if terminal.as_ref().map_or(true, |t| total < t.cost - EPS) {
                        terminal = Some(Label {
                            arrival: departure,
                            net,
                            cost: total,
                            parent: li,
                            decision,
                        });
                    }
                    return;
                }
                let seg = &segments[v];
                if departure > seg.latest {
                    return;
                }
                let arrival = seg.arrival(departure);
                if b_full - consumed[v + 1] + delta * (net as f64) < -TOLERANCE {
                    return;
                }
                let front = fronts.entry(net).or_default();
                if front
                    .iter()
                    .any(|o| o.arrival <= arrival + EPS && o.cost <= cost + EPS)
                {
                    return;
                }
                front.retain(|o| !(o.arrival >= arrival - EPS && o.cost >= cost - EPS));
                let pos = front.partition_point(|o| o.arrival < arrival);
                front.insert(
                    pos,
                    Label {
                        arrival,
                        net,
                        cost,
                        parent: li,
                        decision,
                    },
                );
            };

            emit(label.arrival, label.net, label.cost, None);
            let lo = first_period(label.arrival, delta);
            if lo > n_periods {
                continue;
            }
            for &kind in &problem.kinds[v] {
                let cap = match kind {
                    Action::Charge => b_full - battery,
                    _ => battery,
                };
                let cap = (((cap + TOLERANCE) / delta).floor().max(0.0) as usize).min(max_count);
                for hi in lo..=n_periods {
                    let departure = delta * hi as f64;
                    if !last && departure > segments[v].latest {
                        break;
                    }
                    for count in 1..=cap.min(hi - lo + 1) {
                        let net = match kind {
                            Action::Charge => label.net + count as i64,
                            _ => label.net - count as i64,
                        };
                        let step = table.cost(prices, kind, lo, hi, count);
                        emit(
                            departure,
                            net,
                            label.cost + step,
                            Some(Decision {
                                kind,
                                lo,
                                hi,
                                count,
                            }),
                        );
                    }
                }
            }
        }
        if last {
            let term = terminal?;
            let f_elec = term.cost;
            return Some(rebuild(route, problem, &stages, term, f_elec, table));
        }
        stages.push(fronts.into_values().flatten().collect());
    }
    None
}

fn rebuild(
    route: &Route,
    problem: &ScheduleProblem,
    stages: &[Vec<Label>],
    terminal: Label,
    f_elec: f64,
    table: &SelectionTable,
) -> PricedRoute {
    let mut plan = ChargePlan::idle(route.nodes.len());
    let mut label = terminal;
    for v in (0..problem.positions.len()).rev() {
        if let Some(d) = label.decision {
            plan.visits[problem.positions[v]] = table
                .periods(d.kind, d.lo, d.hi, d.count)
                .into_iter()
                .map(|t| (t, d.kind))
                .collect();
        }
        if v > 0 {
            label = stages[v][label.parent].clone();
        }
    }
    PricedRoute {
        plan,
        f_elec,
        case: problem.case,
    }
}

fn checked(
    inst: &Instance,
    route: &Route,
    metrics: &RouteMetrics,
    stations: usize,
) -> Result<Option<PricedRoute>> {
    let found = route.station_count(inst);
    if found != stations {
        return Err(Error::MalformedRoute(format!(
            "expected {stations} station visits, found {found}"
        )));
    }
    let problem = ScheduleProblem::build(inst, route, metrics)?;
    Ok(solve(inst, route, &problem))
}

/// Routes without stations: discharge at the depots. `Ok(None)` when the
/// route cannot be completed on one battery.
pub fn schedule_zero_station(
    inst: &Instance,
    route: &Route,
    metrics: &RouteMetrics,
) -> Result<Option<PricedRoute>> {
    checked(inst, route, metrics, 0)
}

pub fn schedule_one_station(
    inst: &Instance,
    route: &Route,
    metrics: &RouteMetrics,
) -> Result<Option<PricedRoute>> {
    checked(inst, route, metrics, 1)
}

pub fn schedule_two_station(
    inst: &Instance,
    route: &Route,
    metrics: &RouteMetrics,
) -> Result<Option<PricedRoute>> {
    checked(inst, route, metrics, 2)
}

/// Dispatches to the matching case. `Ok(None)` signals that no admissible
/// plan exists.
pub fn price_route(
    inst: &Instance,
    route: &Route,
    metrics: &RouteMetrics,
) -> Result<Option<PricedRoute>> {
    let problem = ScheduleProblem::build(inst, route, metrics)?;
    Ok(solve(inst, route, &problem))
}

/// Convenience wrapper computing the metrics first.
pub fn price(inst: &Instance, route: &Route) -> Result<Option<PricedRoute>> {
    price_route(inst, route, &compute_metrics(inst, route))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::instance::{FleetParams, InstanceBuilder};
    use crate::pricing::SchemeId;
    use crate::verify::check_route;

    fn fleet() -> FleetParams {
        FleetParams {
            vehicles: 1,
            cargo_capacity: 200.0,
            battery_capacity: 270.0,
            charge_rate: 1.0,
            consumption_rate: 1.0,
            speed: 1.0,
        }
    }

    fn metrics(earliest: Vec<f64>, latest: Vec<f64>, slack: Vec<f64>) -> RouteMetrics {
        let n = earliest.len();
        RouteMetrics {
            earliest,
            latest,
            forward_slack: slack,
            backward_slack: vec![0.0; n],
            consumed: vec![0.0; n],
        }
    }

    fn any_instance() -> Instance {
        InstanceBuilder::new(
            (0.0, 0.0),
            fleet(),
            PriceSchedule::scheme(SchemeId::ASummer),
        )
        .customer(15.0, 0.0, 10.0, (0.0, 1140.0), 0.0)
        .build()
        .unwrap()
    }

    #[test]
    fn connected_periods_start_after_arrival() {
        let inst = any_instance();
        let m = metrics(
            vec![130.0, 0.0, 119.0],
            vec![310.0, 1140.0, 120.0],
            vec![0.0; 3],
        );
        // Period 3 is [120, 180) and starts before the arrival at 130.
        assert_eq!(connected_periods(&inst, &m, 0), 4..=5);
        assert_eq!(connected_periods(&inst, &m, 1), 1..=19);
        assert!(connected_periods(&inst, &m, 2).is_empty());
    }

    #[test]
    fn mutual_exclusion_by_substitution() {
        let inst = any_instance();
        let m = metrics(vec![60.0, 120.0], vec![1140.0, 600.0], vec![0.0, 0.0]);
        // Ends at 180 > 60 + 0: excludes t' with 60 (t' - 1) < 120 + 180 - 60.
        assert_eq!(mutually_exclusive(&inst, &m, 0, 1, 3), vec![3, 4]);
        // Period 1 ends at 60 <= 60: nothing is excluded.
        assert!(mutually_exclusive(&inst, &m, 0, 1, 1).is_empty());
        let slack = metrics(vec![60.0, 120.0], vec![1140.0, 600.0], vec![0.0, 200.0]);
        assert!(mutually_exclusive(&inst, &slack, 0, 1, 3).is_empty());
    }

    #[test]
    fn zero_station_budget() {
        let inst = any_instance();
        let route = Route::from_interior(&inst, &[1]);
        let m = compute_metrics(&inst, &route);
        let p = ScheduleProblem::build(&inst, &route, &m).unwrap();
        assert_eq!(p.case, CaseTag::ZeroStation);
        assert_eq!(p.legs.iter().sum::<f64>(), 30.0);
        assert_eq!(p.net, NetRule::DischargeBudget(4));
    }

    #[test]
    fn zero_rewards_mean_no_discharge() {
        let inst = any_instance()
            .with_prices(PriceSchedule::scheme(SchemeId::D))
            .unwrap();
        let route = Route::from_interior(&inst, &[1]);
        let priced = price(&inst, &route).unwrap().unwrap();
        assert!(priced.plan.visits.iter().all(Vec::is_empty));
        assert!((priced.f_elec - 30.0 / 60.0 * 6.5).abs() < 1e-12);
    }

    #[test]
    fn discharge_at_peak_then_recharge_at_night() {
        let inst = any_instance();
        let route = Route::from_interior(&inst, &[1]);
        let priced = price(&inst, &route).unwrap().unwrap();
        // Four spare periods, each worth 10 at peak and bought back at 6.5.
        let expected = 30.0 / 60.0 * 6.5 - 4.0 * (10.0 - 6.5);
        assert!((priced.f_elec - expected).abs() < 1e-9, "{}", priced.f_elec);
        let check = check_route(&inst, &route, &priced.plan);
        assert!(check.feasible());
        assert!((check.objective - priced.f_elec).abs() < 1e-9);
    }

    // Rows: depot, c1, c2, s. The route 0 c1 s c2 0 is 400 long.
    fn line_matrix() -> Vec<Vec<f64>> {
        vec![
            vec![0.0, 100.0, 100.0, 100.0],
            vec![100.0, 0.0, 200.0, 100.0],
            vec![100.0, 200.0, 0.0, 100.0],
            vec![100.0, 100.0, 100.0, 0.0],
        ]
    }

    fn deficit_instance(prices: PriceSchedule) -> Instance {
        InstanceBuilder::new((0.0, 0.0), fleet(), prices)
            .customer(100.0, 0.0, 1.0, (0.0, 1140.0), 0.0)
            .customer(300.0, 0.0, 1.0, (0.0, 1140.0), 0.0)
            .station(200.0, 0.0)
            .matrix(line_matrix())
            .build()
            .unwrap()
    }

    #[test]
    fn one_station_deficit_charges_the_minimum() {
        let inst = deficit_instance(PriceSchedule::scheme(SchemeId::D));
        let route = Route::from_interior(&inst, &[1, 3, 2]);
        let m = compute_metrics(&inst, &route);
        let p = ScheduleProblem::build(&inst, &route, &m).unwrap();
        assert_eq!(p.case, CaseTag::OneStation);
        assert_eq!(p.deficit, 130.0);
        assert_eq!(p.net, NetRule::Exactly(3));
        let priced = solve(&inst, &route, &p).unwrap();
        // Open periods are 5..=15 (arrival 200, 200 minutes still to drive):
        // one at 6.5 and two at 9.4.
        assert_eq!(p.windows[1], 5..=15);
        assert_eq!(priced.plan.visits[2].len(), 3);
        assert!(priced.plan.visits[2]
            .iter()
            .all(|&(_, a)| a == Action::Charge));
        let expected = 6.5 + 2.0 * 9.4 + 6.5 * (400.0 / 60.0 - 3.0);
        assert!((priced.f_elec - expected).abs() < 1e-9);
        let bf = crate::oracle::schedule_bruteforce(&inst, &route, &m, 12)
            .unwrap()
            .unwrap();
        assert!((bf.f_elec - expected).abs() < 1e-9);
    }

    #[test]
    fn two_station_branch_follows_deficit_sign() {
        let inst = deficit_instance(PriceSchedule::scheme(SchemeId::ASummer));
        let long = Route::from_interior(&inst, &[1, 3, 3, 2]);
        let m = compute_metrics(&inst, &long);
        // Zero-length leg between the two visits of the same station.
        assert_eq!(
            ScheduleProblem::build(&inst, &long, &m).unwrap().case,
            CaseTag::TwoStationRecharge
        );
        let short = Route::from_interior(&inst, &[3, 3]);
        let m = compute_metrics(&inst, &short);
        assert_eq!(
            ScheduleProblem::build(&inst, &short, &m).unwrap().case,
            CaseTag::TwoStationDischarge
        );
        let three = Route::from_interior(&inst, &[3, 3, 3]);
        let m = compute_metrics(&inst, &three);
        assert!(matches!(
            ScheduleProblem::build(&inst, &three, &m),
            Err(Error::TooManyStations(3))
        ));
    }

    #[test]
    fn case_entry_points_check_station_count() {
        let inst = deficit_instance(PriceSchedule::scheme(SchemeId::ASummer));
        let route = Route::from_interior(&inst, &[1, 3, 2]);
        let m = compute_metrics(&inst, &route);
        assert!(schedule_zero_station(&inst, &route, &m).is_err());
        assert!(schedule_two_station(&inst, &route, &m).is_err());
        assert!(schedule_one_station(&inst, &route, &m).unwrap().is_some());
    }

    #[test]
    fn infeasible_deficit_has_no_plan() {
        // Charging three periods at the station makes C2 late.
        let inst = deficit_instance(PriceSchedule::scheme(SchemeId::ASummer));
        let mut rows = inst.rows();
        for r in rows.iter_mut().filter(|r| r.name == "C2") {
            r.ready = 0.0;
            r.due = 320.0;
        }
        let tight = Instance::from_rows(
            "tight".into(),
            &rows,
            inst.fleet.clone(),
            inst.prices().clone(),
            crate::instance::DistanceMode::Matrix(line_matrix()),
        )
        .unwrap();
        let route = Route::from_interior(&tight, &[1, 3, 2]);
        assert!(price(&tight, &route).unwrap().is_none());
    }

    #[test]
    fn scaling_prices_scales_cost() {
        use rand::SeedableRng;
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(5);
        for tag in [
            CaseTag::ZeroStation,
            CaseTag::OneStation,
            CaseTag::TwoStationDischarge,
        ] {
            for _ in 0..30 {
                let (inst, route) = crate::synth::random_case(&mut rng, tag);
                let Some(base) = price(&inst, &route).unwrap() else {
                    continue;
                };
                let scaled = inst.with_prices(inst.prices().scaled(2.5)).unwrap();
                let s = price(&scaled, &route).unwrap().unwrap();
                assert!((s.f_elec - 2.5 * base.f_elec).abs() < 1e-9 * base.f_elec.abs().max(1.0));
                let replay = check_route(&scaled, &route, &base.plan);
                assert!((replay.objective - s.f_elec).abs() < 1e-9 * s.f_elec.abs().max(1.0));
            }
        }
    }
}
