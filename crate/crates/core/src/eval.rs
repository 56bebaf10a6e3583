//! Route and solution evaluation: electricity cost plus violations.

use crate::error::Result;
use crate::instance::Instance;
use crate::route::{
    battery_violation, cargo_violation, compute_metrics, tw_violation, Penalties, Route, Violations,
};
use crate::schedule::{solve, CaseTag, PricedRoute, ScheduleProblem};
use crate::solution::{ChargePlan, Solution};

#[derive(Debug, Clone, PartialEq)]
pub struct RouteEval {
    pub f_elec: f64,
    pub violations: Violations,
    /// The optimal schedule, when the route admits one.
    pub priced: Option<PricedRoute>,
}

impl RouteEval {
    pub fn cost(&self, penalties: &Penalties) -> f64 {
        penalties.apply(self.f_elec, &self.violations)
    }

    pub fn feasible(&self) -> bool {
        self.violations.is_zero() && self.priced.is_some()
    }

    pub fn case(&self) -> Option<CaseTag> {
        self.priced.as_ref().map(|p| p.case)
    }

    pub fn plan(&self, route: &Route) -> ChargePlan {
        match &self.priced {
            Some(p) => p.plan.clone(),
            None => ChargePlan::idle(route.len()),
        }
    }
}

/// Evaluates a route with at most two station visits.
///
/// A route without a schedule (time-window or battery-leg violation, or no
/// admissible plan) is priced at the most expensive schedule the rules could
/// produce: its energy deficit bought in whole periods at the highest charge
/// price and the rest at the night price. A route that is otherwise feasible
/// but admits no schedule also has its deficit added to the battery
/// violation.
pub fn evaluate_route(inst: &Instance, route: &Route) -> Result<RouteEval> {
    let metrics = compute_metrics(inst, route);
    let problem = ScheduleProblem::build(inst, route, &metrics)?;
    let violations = Violations {
        tw: tw_violation(inst, route, &metrics),
        batt: battery_violation(inst, route, &metrics),
        cargo: cargo_violation(inst, route),
    };
    let night = fallback_cost(inst, &problem);
    if violations.tw > 0.0 || violations.batt > 0.0 {
        return Ok(RouteEval {
            f_elec: night,
            violations,
            priced: None,
        });
    }
    Ok(match solve(inst, route, &problem) {
        Some(p) => RouteEval {
            f_elec: p.f_elec,
            violations,
            priced: Some(p),
        },
        None => RouteEval {
            f_elec: night,
            violations: Violations {
                batt: problem.deficit.max(0.0),
                ..violations
            },
            priced: None,
        },
    })
}

/// Cost of the dearest admissible schedule of a route.
pub fn fallback_cost(inst: &Instance, problem: &ScheduleProblem) -> f64 {
    let prices = inst.prices();
    let delta = inst.delta();
    let consumed: f64 = problem.legs.iter().sum();
    let periods = (problem.deficit / delta - 1e-9).ceil().max(0.0);
    let peak = (1..=prices.len())
        .map(|t| prices.charge(t))
        .fold(prices.night, f64::max);
    prices.night * (consumed / delta - periods) + peak * periods
}

#[derive(Debug, Clone, PartialEq)]
pub struct SolutionEval {
    pub f_elec: f64,
    pub violations: Violations,
    pub routes: Vec<RouteEval>,
}

impl SolutionEval {
    pub fn cost(&self, penalties: &Penalties) -> f64 {
        penalties.apply(self.f_elec, &self.violations)
    }

    pub fn feasible(&self) -> bool {
        self.routes.iter().all(RouteEval::feasible)
    }
}

pub fn evaluate_routes(inst: &Instance, routes: &[Route]) -> Result<SolutionEval> {
    let evals = routes
        .iter()
        .map(|r| evaluate_route(inst, r))
        .collect::<Result<Vec<_>>>()?;
    Ok(combine(evals))
}

pub(crate) fn combine(routes: Vec<RouteEval>) -> SolutionEval {
    let mut violations = Violations::default();
    let mut f_elec = 0.0;
    for r in &routes {
        f_elec += r.f_elec;
        violations.add(&r.violations);
    }
    SolutionEval {
        f_elec,
        violations,
        routes,
    }
}

/// Generalized cost of a solution: its routes are re-priced optimally.
pub fn f_gen(inst: &Instance, solution: &Solution, penalties: &Penalties) -> Result<f64> {
    Ok(evaluate_routes(inst, &solution.routes)?.cost(penalties))
}

/// Attaches the optimal plans to a set of routes.
pub fn priced_solution(inst: &Instance, routes: Vec<Route>) -> Result<(Solution, SolutionEval)> {
    let eval = evaluate_routes(inst, &routes)?;
    let plans = routes
        .iter()
        .zip(&eval.routes)
        .map(|(r, e)| e.plan(r))
        .collect();
    Ok((Solution { routes, plans }, eval))
}
