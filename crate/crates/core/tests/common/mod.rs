#![allow(dead_code)]

use evrptw_core::{evaluate_route, Instance, Route};

// Every interior sequence with the given customers in order and up to two
// station visits anywhere.
pub fn with_stations(inst: &Instance, customers: &[usize], out: &mut Vec<Vec<usize>>) {
    fn go(
        inst: &Instance,
        rest: &[usize],
        cur: &mut Vec<usize>,
        left: usize,
        out: &mut Vec<Vec<usize>>,
    ) {
        if rest.is_empty() {
            out.push(cur.clone());
        } else {
            cur.push(rest[0]);
            go(inst, &rest[1..], cur, left, out);
            cur.pop();
        }
        if left > 0 {
            for s in inst.stations() {
                cur.push(s);
                go(inst, rest, cur, left - 1, out);
                cur.pop();
            }
        }
    }
    go(inst, customers, &mut Vec::new(), 2, out);
}

pub fn permutations(items: &[usize]) -> Vec<Vec<usize>> {
    if items.len() <= 1 {
        return vec![items.to_vec()];
    }
    let mut out = Vec::new();
    for i in 0..items.len() {
        let mut rest = items.to_vec();
        let head = rest.remove(i);
        for mut p in permutations(&rest) {
            p.insert(0, head);
            out.push(p);
        }
    }
    out
}

pub fn best_route(inst: &Instance, customers: &[usize]) -> f64 {
    let mut best = f64::INFINITY;
    for order in permutations(customers) {
        let mut seqs = Vec::new();
        with_stations(inst, &order, &mut seqs);
        for s in seqs {
            let e = evaluate_route(inst, &Route::from_interior(inst, &s)).unwrap();
            if e.feasible() {
                best = best.min(e.f_elec);
            }
        }
    }
    best
}

/// Cheapest feasible route over exactly the customers in `mask` (bit `i` is
/// customer `i + 1`), by plain enumeration.
pub fn best_route_for_mask(inst: &Instance, mask: usize) -> f64 {
    let customers: Vec<usize> = inst
        .customers()
        .filter(|c| mask >> (c - 1) & 1 == 1)
        .collect();
    best_route(inst, &customers)
}
