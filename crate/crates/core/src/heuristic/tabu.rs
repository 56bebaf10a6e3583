use std::collections::HashMap;

use rand::Rng;

use crate::instance::Instance;

use super::cost::{CostCache, RouteCost, Scored};
use super::params::SearchParams;

/// Removed edges that may not be reinserted until they expire. Edges are
/// undirected.
#[derive(Debug, Clone, Default)]
pub struct TabuList {
    expiry: HashMap<(usize, usize), u64>,
    clock: u64,
}

fn edge(a: usize, b: usize) -> (usize, usize) {
    if a <= b {
        (a, b)
    } else {
        (b, a)
    }
}

impl TabuList {
    pub fn new() -> Self {
        Self::default()
    }

    /// Advances to the next tabu iteration.
    pub fn tick(&mut self) {
        self.clock += 1;
    }

    pub fn clock(&self) -> u64 {
        self.clock
    }

    /// Forbids `a`-`b` for the next `tenure` iterations.
    pub fn forbid(&mut self, a: usize, b: usize, tenure: usize) {
        self.expiry.insert(edge(a, b), self.clock + tenure as u64);
    }

    pub fn is_tabu(&self, a: usize, b: usize) -> bool {
        self.expiry
            .get(&edge(a, b))
            .is_some_and(|&e| self.clock <= e)
    }

    pub fn len_active(&self) -> usize {
        self.expiry.values().filter(|&&e| self.clock <= e).count()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Operator {
    TwoOptStar,
    Exchange,
    Relocate,
    StationInsert,
    StationRemove,
}

/// A neighbor: replacement node lists for one or two routes.
#[derive(Debug, Clone, PartialEq)]
pub struct Move {
    pub op: Operator,
    pub changes: Vec<(usize, Vec<usize>)>,
}

impl Move {
    /// Edges of the changed routes that the move adds and removes.
    pub fn edge_diff(&self, routes: &[Vec<usize>]) -> (Vec<(usize, usize)>, Vec<(usize, usize)>) {
        let mut old: Vec<(usize, usize)> = Vec::new();
        let mut new: Vec<(usize, usize)> = Vec::new();
        for (r, nodes) in &self.changes {
            old.extend(routes[*r].windows(2).map(|w| edge(w[0], w[1])));
            new.extend(nodes.windows(2).map(|w| edge(w[0], w[1])));
        }
        old.sort_unstable();
        new.sort_unstable();
        (multiset_minus(&new, &old), multiset_minus(&old, &new))
    }
}

fn multiset_minus(a: &[(usize, usize)], b: &[(usize, usize)]) -> Vec<(usize, usize)> {
    let mut out = Vec::new();
    let mut j = 0;
    for &x in a {
        while j < b.len() && b[j] < x {
            j += 1;
        }
        if j < b.len() && b[j] == x {
            j += 1;
        } else {
            out.push(x);
        }
    }
    out
}

fn stations(inst: &Instance, nodes: &[usize]) -> usize {
    nodes.iter().filter(|&&id| inst.is_station(id)).count()
}

/// Calls `visit` for every neighbor of `routes` under 2-opt*, exchange,
/// relocate and station insertion/removal, in a fixed order. Neighbors keep
/// at most two station visits per route.
pub fn for_each_neighbor(inst: &Instance, routes: &[Vec<usize>], mut visit: impl FnMut(Move)) {
    let k = routes.len();
    let counts: Vec<usize> = routes.iter().map(|r| stations(inst, r)).collect();

    // 2-opt*: cut one edge in each of two routes and swap the tails.
    for r1 in 0..k {
        for r2 in r1 + 1..k {
            let (a, b) = (&routes[r1], &routes[r2]);
            for i in 0..a.len() - 1 {
                for j in 0..b.len() - 1 {
                    if (i == 0 && j == 0) || (i == a.len() - 2 && j == b.len() - 2) {
                        continue;
                    }
                    let s1 = stations(inst, &a[..=i]) + stations(inst, &b[j + 1..]);
                    let s2 = counts[r1] + counts[r2] - s1;
                    if s1 > 2 || s2 > 2 {
                        continue;
                    }
                    let mut n1 = a[..=i].to_vec();
                    n1.extend_from_slice(&b[j + 1..]);
                    let mut n2 = b[..=j].to_vec();
                    n2.extend_from_slice(&a[i + 1..]);
                    visit(Move {
                        op: Operator::TwoOptStar,
                        changes: vec![(r1, n1), (r2, n2)],
                    });
                }
            }
        }
    }

    // Exchange two nodes, within a route or across routes.
    for r1 in 0..k {
        for i in 1..routes[r1].len() - 1 {
            for r2 in r1..k {
                let from = if r2 == r1 { i + 1 } else { 1 };
                for j in from..routes[r2].len() - 1 {
                    let (x, y) = (routes[r1][i], routes[r2][j]);
                    if x == y {
                        continue;
                    }
                    if r1 == r2 {
                        let mut n = routes[r1].clone();
                        n.swap(i, j);
                        visit(Move {
                            op: Operator::Exchange,
                            changes: vec![(r1, n)],
                        });
                        continue;
                    }
                    let (sx, sy) = (inst.is_station(x) as usize, inst.is_station(y) as usize);
                    if counts[r1] - sx + sy > 2 || counts[r2] - sy + sx > 2 {
                        continue;
                    }
                    let mut n1 = routes[r1].clone();
                    let mut n2 = routes[r2].clone();
                    n1[i] = y;
                    n2[j] = x;
                    visit(Move {
                        op: Operator::Exchange,
                        changes: vec![(r1, n1), (r2, n2)],
                    });
                }
            }
        }
    }

    // Relocate one node to another position, in any route.
    for r1 in 0..k {
        for i in 1..routes[r1].len() - 1 {
            let x = routes[r1][i];
            let is_station = inst.is_station(x);
            let mut base = routes[r1].clone();
            base.remove(i);
            for r2 in 0..k {
                if r2 != r1 && is_station && counts[r2] >= 2 {
                    continue;
                }
                let target = if r2 == r1 { &base } else { &routes[r2] };
                for j in 1..target.len() {
                    if r2 == r1 && j == i {
                        continue;
                    }
                    if is_station && (target[j - 1] == x || target[j] == x) {
                        continue;
                    }
                    let mut n = target.clone();
                    n.insert(j, x);
                    let changes = if r2 == r1 {
                        vec![(r1, n)]
                    } else {
                        vec![(r1, base.clone()), (r2, n)]
                    };
                    visit(Move {
                        op: Operator::Relocate,
                        changes,
                    });
                }
            }
        }
    }

    // Insert or remove one station visit.
    for r in 0..k {
        let route = &routes[r];
        for i in 1..route.len() - 1 {
            if inst.is_station(route[i]) {
                let mut n = route.clone();
                n.remove(i);
                visit(Move {
                    op: Operator::StationRemove,
                    changes: vec![(r, n)],
                });
            }
        }
        if counts[r] >= 2 {
            continue;
        }
        for j in 1..route.len() {
            for s in inst.stations() {
                if route[j - 1] == s || route[j] == s {
                    continue;
                }
                let mut n = route.clone();
                n.insert(j, s);
                visit(Move {
                    op: Operator::StationInsert,
                    changes: vec![(r, n)],
                });
            }
        }
    }
}

/// The best admissible neighbor: lowest generalized cost, first found on
/// ties, skipping moves that reinsert a tabu edge.
pub fn best_neighbor(
    current: &Scored,
    tabu: &TabuList,
    cache: &mut CostCache,
) -> Option<(Move, Vec<RouteCost>, f64)> {
    let inst = cache.instance();
    let base = current.f_gen();
    let mut best: Option<(Move, Vec<RouteCost>, f64)> = None;
    for_each_neighbor(inst, &current.routes, |mv| {
        let (added, _) = mv.edge_diff(&current.routes);
        if added.iter().any(|&(a, b)| tabu.is_tabu(a, b)) {
            return;
        }
        let mut total = base;
        let mut costs = Vec::with_capacity(mv.changes.len());
        for (r, nodes) in &mv.changes {
            let c = cache.get(nodes);
            total += c.f_gen - current.costs[*r].f_gen;
            costs.push(c);
        }
        if best.as_ref().map_or(true, |b| total < b.2 - 1e-9) {
            best = Some((mv, costs, total));
        }
    });
    best
}

/// Steepest descent over the four neighborhoods with a tabu list on removed
/// edges. Stops after `tabu_iters` moves or when the best admissible
/// neighbor does not improve; returns the best solution visited.
pub fn tabu_search<R: Rng>(
    start: Scored,
    params: &SearchParams,
    tabu: &mut TabuList,
    rng: &mut R,
    cache: &mut CostCache,
) -> Scored {
    let mut current = start;
    for _ in 0..params.tabu_iters {
        tabu.tick();
        let Some((mv, costs, total)) = best_neighbor(&current, tabu, cache) else {
            break;
        };
        if total >= current.f_gen() - 1e-9 {
            break;
        }
        let (_, removed) = mv.edge_diff(&current.routes);
        for (a, b) in removed {
            tabu.forbid(a, b, rng.gen_range(params.tenure_min..=params.tenure_max));
        }
        for ((r, nodes), c) in mv.changes.into_iter().zip(costs) {
            current.routes[r] = nodes;
            current.costs[r] = c;
        }
        debug_assert!(super::cost::conserves_customers(
            cache.instance(),
            &current.routes
        ));
    }
    current
}
