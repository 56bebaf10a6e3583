use rand::seq::SliceRandom;
use rand::Rng;

use crate::instance::Instance;

use super::params::SearchParams;

const ATTEMPTS: usize = 20;

/// Cyclic exchange: picks `exchange_routes` routes, cuts a block of random
/// length from each and moves every block, reversed, to the next route of
/// the cycle at the position the receiving route's own block left. Routes
/// without interior nodes contribute empty blocks; with a single route the
/// reversed block is reinserted elsewhere in the same route. Exchanges that
/// would put more than two station visits in a route are redrawn, and the
/// input is returned unchanged if none is found.
pub fn cyclic_exchange<R: Rng>(
    inst: &Instance,
    routes: &[Vec<usize>],
    params: &SearchParams,
    rng: &mut R,
) -> Vec<Vec<usize>> {
    for _ in 0..ATTEMPTS {
        if let Some(out) = try_exchange(inst, routes, params, rng) {
            return out;
        }
    }
    routes.to_vec()
}

fn try_exchange<R: Rng>(
    inst: &Instance,
    routes: &[Vec<usize>],
    params: &SearchParams,
    rng: &mut R,
) -> Option<Vec<Vec<usize>>> {
    let loaded: Vec<usize> = (0..routes.len()).filter(|&r| routes[r].len() > 2).collect();
    if loaded.is_empty() {
        return None;
    }
    if routes.len() == 1 {
        return Some(vec![reinsert_block(&routes[0], params, rng)]);
    }
    let want = params.exchange_routes.clamp(2, routes.len());
    let mut chosen: Vec<usize> = if loaded.len() >= want {
        loaded.choose_multiple(rng, want).copied().collect()
    } else {
        // Fill the cycle with routes that have no interior nodes.
        let mut c = loaded.clone();
        let idle: Vec<usize> = (0..routes.len()).filter(|r| !loaded.contains(r)).collect();
        c.extend(idle.choose_multiple(rng, want - loaded.len()).copied());
        c
    };
    chosen.shuffle(rng);

    // (start, length) of each chosen route's block.
    let blocks: Vec<(usize, usize)> = chosen
        .iter()
        .map(|&r| {
            let interior = routes[r].len() - 2;
            if interior == 0 {
                return (1, 0);
            }
            let len = (*params.block_lengths.choose(rng).expect("nonempty")).min(interior);
            (1 + rng.gen_range(0..=interior - len), len)
        })
        .collect();
    let mut out = routes.to_vec();
    let n = chosen.len();
    for i in 0..n {
        let from = (i + n - 1) % n;
        let (fs, fl) = blocks[from];
        let incoming: Vec<usize> = routes[chosen[from]][fs..fs + fl]
            .iter()
            .rev()
            .copied()
            .collect();
        let (s, l) = blocks[i];
        let r = &routes[chosen[i]];
        let mut next = Vec::with_capacity(r.len() - l + incoming.len());
        next.extend_from_slice(&r[..s]);
        next.extend(incoming);
        next.extend_from_slice(&r[s + l..]);
        if next.iter().filter(|&&id| inst.is_station(id)).count() > 2 {
            return None;
        }
        out[chosen[i]] = next;
    }
    if out == routes {
        return None;
    }
    Some(out)
}

fn reinsert_block<R: Rng>(route: &[usize], params: &SearchParams, rng: &mut R) -> Vec<usize> {
    let interior = route.len() - 2;
    let len = (*params.block_lengths.choose(rng).expect("nonempty")).min(interior);
    let start = 1 + rng.gen_range(0..=interior - len);
    let block: Vec<usize> = route[start..start + len].iter().rev().copied().collect();
    let mut rest: Vec<usize> = route[..start].to_vec();
    rest.extend_from_slice(&route[start + len..]);
    let at = 1 + rng.gen_range(0..=rest.len() - 2);
    rest.splice(at..at, block);
    rest
}
