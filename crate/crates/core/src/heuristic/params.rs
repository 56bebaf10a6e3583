use crate::error::{Error, Result};
use crate::route::Penalties;

#[derive(Debug, Clone, PartialEq)]
pub struct SearchParams {
    pub penalties: Penalties,
    pub vns_iters: usize,
    pub tabu_iters: usize,
    /// Consecutive non-improving VNS iterations before stopping.
    pub early_stop: usize,
    /// Routes taking part in one cyclic exchange.
    pub exchange_routes: usize,
    pub block_lengths: Vec<usize>,
    pub tenure_min: usize,
    pub tenure_max: usize,
    pub kappa: f64,
    pub seed: u64,
}

impl Default for SearchParams {
    fn default() -> Self {
        Self {
            penalties: Penalties::default(),
            vns_iters: 10,
            tabu_iters: 30,
            early_stop: 5,
            exchange_routes: 2,
            block_lengths: vec![1, 2, 3],
            tenure_min: 5,
            tenure_max: 15,
            kappa: 0.5,
            seed: 0,
        }
    }
}

impl SearchParams {
    /// Defaults scaled to the instance size and fleet.
    pub fn for_instance(customers: usize, vehicles: usize) -> Self {
        Self {
            vns_iters: match customers {
                0..=5 => 10,
                6..=10 => 20,
                _ => 30,
            },
            early_stop: if customers > 10 { 10 } else { 5 },
            exchange_routes: if vehicles <= 3 { 2 } else { 3 },
            ..Self::default()
        }
    }

    pub fn with_seed(mut self, seed: u64) -> Self {
        self.seed = seed;
        self
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |msg: &str| Err(Error::InvalidParams(msg.to_string()));
        let p = &self.penalties;
        if !(p.tw > 0.0 && p.batt > 0.0 && p.cargo > 0.0) {
            return bad("penalty weights must be positive");
        }
        if self.tabu_iters == 0 || self.early_stop == 0 || self.exchange_routes == 0 {
            return bad("iteration limits and exchange routes must be positive");
        }
        if self.block_lengths.is_empty() || self.block_lengths.contains(&0) {
            return bad("block lengths must be positive");
        }
        if self.tenure_min == 0 || self.tenure_min > self.tenure_max {
            return bad("tabu tenure bounds must satisfy 0 < min <= max");
        }
        if !(self.kappa > 0.0) {
            return bad("kappa must be positive");
        }
        Ok(())
    }
}
