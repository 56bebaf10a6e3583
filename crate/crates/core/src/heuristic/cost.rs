use std::collections::HashMap;

use crate::eval::evaluate_route;
use crate::instance::Instance;
use crate::route::{Penalties, Route, Violations};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RouteCost {
    pub f_elec: f64,
    pub violations: Violations,
    pub f_gen: f64,
    pub feasible: bool,
}

/// Route costs keyed by node sequence.
#[derive(Debug)]
pub struct CostCache<'a> {
    inst: &'a Instance,
    penalties: Penalties,
    map: HashMap<Vec<usize>, RouteCost>,
    pub hits: u64,
    pub misses: u64,
}

// Cleared wholesale when full; results do not depend on it.
const CACHE_LIMIT: usize = 1 << 20;

impl<'a> CostCache<'a> {
    pub fn new(inst: &'a Instance, penalties: Penalties) -> Self {
        Self {
            inst,
            penalties,
            map: HashMap::new(),
            hits: 0,
            misses: 0,
        }
    }

    pub fn instance(&self) -> &'a Instance {
        self.inst
    }

    pub fn get(&mut self, nodes: &[usize]) -> RouteCost {
        if let Some(c) = self.map.get(nodes) {
            self.hits += 1;
            return *c;
        }
        self.misses += 1;
        let cost = match evaluate_route(
            self.inst,
            &Route {
                nodes: nodes.to_vec(),
            },
        ) {
            Ok(e) => RouteCost {
                f_elec: e.f_elec,
                violations: e.violations,
                f_gen: e.cost(&self.penalties),
                feasible: e.feasible(),
            },
            Err(_) => RouteCost {
                f_elec: f64::INFINITY,
                violations: Violations::default(),
                f_gen: f64::INFINITY,
                feasible: false,
            },
        };
        if self.map.len() >= CACHE_LIMIT {
            self.map.clear();
        }
        self.map.insert(nodes.to_vec(), cost);
        cost
    }
}

/// A set of routes with their costs.
#[derive(Debug, Clone, PartialEq)]
pub struct Scored {
    pub routes: Vec<Vec<usize>>,
    pub costs: Vec<RouteCost>,
}

impl Scored {
    pub fn new(routes: Vec<Vec<usize>>, cache: &mut CostCache) -> Self {
        let costs = routes.iter().map(|r| cache.get(r)).collect();
        Self { routes, costs }
    }

    pub fn f_gen(&self) -> f64 {
        self.costs.iter().map(|c| c.f_gen).sum()
    }

    pub fn f_elec(&self) -> f64 {
        self.costs.iter().map(|c| c.f_elec).sum()
    }

    pub fn violations(&self) -> Violations {
        let mut v = Violations::default();
        for c in &self.costs {
            v.add(&c.violations);
        }
        v
    }

    pub fn feasible(&self) -> bool {
        self.costs.iter().all(|c| c.feasible)
    }

    /// Preference for the returned solution: feasible first, then lower cost.
    pub fn better_than(&self, other: &Scored) -> bool {
        match (self.feasible(), other.feasible()) {
            (true, false) => true,
            (false, true) => false,
            _ => self.f_gen() < other.f_gen() - 1e-9,
        }
    }

    pub fn into_routes(self) -> Vec<Route> {
        self.routes
            .into_iter()
            .map(|nodes| Route { nodes })
            .collect()
    }
}

/// Every customer appears exactly once across the routes.
pub fn conserves_customers(inst: &Instance, routes: &[Vec<usize>]) -> bool {
    let mut seen = vec![0u32; inst.n_nodes()];
    for r in routes {
        for &id in r {
            seen[id] += 1;
        }
    }
    inst.customers().all(|c| seen[c] == 1)
}
