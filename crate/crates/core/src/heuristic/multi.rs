use crate::error::Result;
use crate::instance::Instance;

use super::params::SearchParams;
use super::vns::{vns_ts, VnsResult};

/// Outcome of independent runs with consecutive seeds.
#[derive(Debug, Clone)]
pub struct MultiStartResult {
    /// The preferred run: feasible first, then lowest cost, then lowest seed.
    pub best: VnsResult,
    /// Index of `best` among the runs.
    pub start: usize,
    /// Per run: (seed, feasible, f_elec).
    pub runs: Vec<(u64, bool, f64)>,
}

/// Runs `vns_ts` with seeds `params.seed`, `params.seed + 1`, ... on up to
/// `threads` workers. The result does not depend on `threads`.
pub fn multi_start(
    inst: &Instance,
    k: usize,
    params: &SearchParams,
    starts: usize,
    threads: usize,
) -> Result<MultiStartResult> {
    params.validate()?;
    let starts = starts.max(1);
    let threads = threads.clamp(1, starts);
    let seeds: Vec<u64> = (0..starts as u64)
        .map(|i| params.seed.wrapping_add(i))
        .collect();
    let run = |seed: u64| vns_ts(inst, k, &params.clone().with_seed(seed));

    let mut results: Vec<Option<Result<VnsResult>>> = (0..starts).map(|_| None).collect();
    if threads == 1 {
        for (slot, &seed) in results.iter_mut().zip(&seeds) {
            *slot = Some(run(seed));
        }
    } else {
        let chunk = starts.div_ceil(threads);
        std::thread::scope(|scope| {
            for (slots, seeds) in results.chunks_mut(chunk).zip(seeds.chunks(chunk)) {
                scope.spawn(move || {
                    for (slot, &seed) in slots.iter_mut().zip(seeds) {
                        *slot = Some(run(seed));
                    }
                });
            }
        });
    }

    let mut done = Vec::with_capacity(starts);
    for r in results {
        done.push(r.expect("every start ran")?);
    }
    let runs = done
        .iter()
        .zip(&seeds)
        .map(|(r, &s)| (s, r.eval.feasible(), r.eval.f_elec))
        .collect();
    let penalties = params.penalties;
    let mut start = 0;
    for (i, r) in done.iter().enumerate().skip(1) {
        let b = &done[start];
        let better = match (r.eval.feasible(), b.eval.feasible()) {
            (true, false) => true,
            (false, true) => false,
            _ => r.eval.cost(&penalties) < b.eval.cost(&penalties) - 1e-9,
        };
        if better {
            start = i;
        }
    }
    let best = done.swap_remove(start);
    Ok(MultiStartResult { best, start, runs })
}
