//! Lagrangian lower bounds.
//!
//! Relaxing the visit-once constraints with multipliers λ splits the problem
//! into K identical single-vehicle subproblems: pick one route minimizing its
//! electricity cost minus the multipliers of the customers it visits. Then
//! `Z_LR(λ) = K·Z_SP(λ) + Σλ` is a lower bound for every λ. The subproblem is
//! solved exactly from a [`RouteCatalog`] (cheapest route per customer
//! subset), so each λ costs one pass over the subsets.

use std::fmt::Write;

use crate::error::{Error, Result};
use crate::eval::evaluate_route;
use crate::instance::Instance;
use crate::oracle::{RouteCatalog, SearchCaps};
use crate::route::Route;
use crate::solution::ChargePlan;

/// Largest customer count the subproblem enumerates by default.
pub const SUBPROBLEM_GUARD: usize = 10;

#[derive(Debug, Clone, PartialEq)]
pub struct SubproblemSolution {
    pub route: Route,
    pub plan: ChargePlan,
    pub f_elec: f64,
    /// `f_elec` minus the multipliers of the visited customers.
    pub cost: f64,
    /// Bitmask of visited customers (bit `i` is customer `i + 1`).
    pub visits: usize,
}

/// Exact single-vehicle subproblem over a prebuilt catalog.
#[derive(Debug, Clone)]
pub struct Subproblem<'a> {
    inst: &'a Instance,
    catalog: RouteCatalog,
}

impl<'a> Subproblem<'a> {
    pub fn new(inst: &'a Instance, guard: usize) -> Result<Self> {
        let caps = SearchCaps {
            max_customers: guard,
            ..SearchCaps::default()
        };
        let catalog = RouteCatalog::build(inst, &caps)?;
        if catalog.cost(0).is_none() {
            return Err(Error::InvalidParams("the empty route is infeasible".into()));
        }
        Ok(Self { inst, catalog })
    }

    pub fn catalog(&self) -> &RouteCatalog {
        &self.catalog
    }

    /// Minimizing subset and its reduced cost. Ties go to the smaller mask.
    pub fn minimize(&self, lambda: &[f64]) -> (usize, f64) {
        assert_eq!(lambda.len(), self.catalog.customers());
        let mut best = (0, f64::INFINITY);
        for mask in 0..=self.catalog.full_mask() {
            let Some(c) = self.catalog.cost(mask) else {
                continue;
            };
            let reduced = c - prize(lambda, mask);
            if reduced < best.1 - 1e-12 {
                best = (mask, reduced);
            }
        }
        best
    }

    pub fn solve(&self, lambda: &[f64]) -> Result<SubproblemSolution> {
        let (mask, cost) = self.minimize(lambda);
        let (f_elec, route) = self.catalog.best[mask]
            .clone()
            .expect("minimizer is feasible");
        let plan = evaluate_route(self.inst, &route)?
            .priced
            .expect("catalog routes are schedulable")
            .plan;
        Ok(SubproblemSolution {
            route,
            plan,
            f_elec,
            cost,
            visits: mask,
        })
    }

    pub fn bound(&self, k: usize, lambda: &[f64]) -> f64 {
        k as f64 * self.minimize(lambda).1 + lambda.iter().sum::<f64>()
    }
}

fn prize(lambda: &[f64], mask: usize) -> f64 {
    let mut sum = 0.0;
    let mut m = mask;
    while m != 0 {
        let i = m.trailing_zeros() as usize;
        sum += lambda[i];
        m &= m - 1;
    }
    sum
}

/// Exact subproblem minimizer for multipliers `lambda` (one per customer).
pub fn solve_subproblem(inst: &Instance, lambda: &[f64]) -> Result<SubproblemSolution> {
    Subproblem::new(inst, SUBPROBLEM_GUARD)?.solve(lambda)
}

/// `K·Z_SP(λ) + Σλ` with `K` from the instance.
pub fn lagrangian_bound(inst: &Instance, lambda: &[f64]) -> Result<f64> {
    Ok(Subproblem::new(inst, SUBPROBLEM_GUARD)?.bound(inst.vehicles(), lambda))
}

#[derive(Debug, Clone, PartialEq)]
pub struct BoundParams {
    pub max_iters: usize,
    /// Initial Polyak step factor.
    pub mu: f64,
    /// Non-improving iterations before `mu` is halved.
    pub patience: usize,
    /// Stop when the best bound improved by less than `tolerance` (relative)
    /// over this many iterations.
    pub window: usize,
    pub tolerance: f64,
    /// Reference upper bound for the step; a target above the current best
    /// is used when absent.
    pub upper: Option<f64>,
    pub guard: usize,
}

impl Default for BoundParams {
    fn default() -> Self {
        Self {
            max_iters: 200,
            mu: 2.0,
            patience: 20,
            window: 50,
            tolerance: 1e-4,
            upper: None,
            guard: SUBPROBLEM_GUARD,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct BoundIter {
    pub iteration: usize,
    pub lambda: Vec<f64>,
    pub z_sp: f64,
    pub z_lr: f64,
    pub best: f64,
    /// Step taken after this iterate (0 on the last one).
    pub step: f64,
    pub visits: usize,
}

/// A supporting hyperplane of `Z_LR`: for every λ,
/// `Z_LR(λ) ≤ K·(f_elec − Σ_{i∈visits} λ_i) + Σλ`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Cut {
    pub f_elec: f64,
    pub visits: usize,
}

impl Cut {
    pub fn value(&self, k: usize, lambda: &[f64]) -> f64 {
        k as f64 * (self.f_elec - prize(lambda, self.visits)) + lambda.iter().sum::<f64>()
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct BoundTrace {
    pub iters: Vec<BoundIter>,
    pub best: f64,
    pub best_lambda: Vec<f64>,
    /// Distinct subproblem routes generated, as cuts.
    pub cuts: Vec<Cut>,
}

/// Subgradient ascent on `Z_LR` from λ = 0 with Polyak steps.
pub fn maximize_bound(inst: &Instance, k: usize, params: &BoundParams) -> Result<BoundTrace> {
    let sub = Subproblem::new(inst, params.guard)?;
    maximize_with(&sub, k, params)
}

pub fn maximize_with(sub: &Subproblem, k: usize, params: &BoundParams) -> Result<BoundTrace> {
    let n = sub.catalog().customers();
    let mut lambda = vec![0.0; n];
    let mut mu = params.mu;
    let mut best = f64::NEG_INFINITY;
    let mut best_lambda = lambda.clone();
    let mut stale = 0;
    let mut iters: Vec<BoundIter> = Vec::new();
    let mut cuts: Vec<Cut> = Vec::new();

    for it in 1..=params.max_iters {
        let (mask, z_sp) = sub.minimize(&lambda);
        let z_lr = k as f64 * z_sp + lambda.iter().sum::<f64>();
        let f_elec = sub.catalog().cost(mask).expect("minimizer is feasible");
        if !cuts.iter().any(|c| c.visits == mask) {
            cuts.push(Cut {
                f_elec,
                visits: mask,
            });
        }
        if it == 1 || z_lr > best + 1e-12 * best.abs().max(1.0) {
            best = z_lr;
            best_lambda = lambda.clone();
            stale = 0;
        } else {
            stale += 1;
            if stale >= params.patience {
                mu *= 0.5;
                stale = 0;
            }
        }
        // d Z_LR / d λ_i = 1 − K·visits_i
        let grad: Vec<f64> = (0..n)
            .map(|i| 1.0 - if mask >> i & 1 == 1 { k as f64 } else { 0.0 })
            .collect();
        let norm: f64 = grad.iter().map(|g| g * g).sum();
        let target = match params.upper {
            Some(u) if u > best + 1e-9 => u,
            _ => best + (0.05 * best.abs()).max(1.0),
        };
        let step = if norm > 0.0 {
            mu * (target - z_lr).max(0.0) / norm
        } else {
            0.0
        };
        iters.push(BoundIter {
            iteration: it,
            lambda: lambda.clone(),
            z_sp,
            z_lr,
            best,
            step,
            visits: mask,
        });
        if norm == 0.0 {
            break;
        }
        if it > params.window {
            let old = iters[it - 1 - params.window].best;
            if (best - old) <= params.tolerance * best.abs().max(1.0) {
                break;
            }
        }
        for (l, g) in lambda.iter_mut().zip(&grad) {
            *l += step * g;
        }
    }
    if let Some(last) = iters.last_mut() {
        last.step = 0.0;
    }
    Ok(BoundTrace {
        iters,
        best,
        best_lambda,
        cuts,
    })
}

pub const BOUND_HEADER: &str = "iteration,z_sp,z_lr,best_lb,step";

pub fn bound_csv(trace: &BoundTrace) -> String {
    let mut out = String::from(BOUND_HEADER);
    out.push('\n');
    for r in &trace.iters {
        let _ = writeln!(
            out,
            "{},{},{},{},{}",
            r.iteration, r.z_sp, r.z_lr, r.best, r.step
        );
    }
    out
}
